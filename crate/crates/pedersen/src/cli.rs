//! Command-line interface.
//!
//! Exit codes: 0 success or accept, 1 reject or property false, 2 input
//! error, 3 capability error (exhaustive mode on a large group), 4 protocol
//! or connection error.

use std::io::{self, Write};
use std::net::{SocketAddr, TcpListener};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::Num;
use pedersen_core::adversary::{AdversaryZoo, Binder, DLogAdversary, Unhider};
use pedersen_core::coins::{RandomTape, SeededCoins};
use pedersen_core::engine::{
    all_binding_tapes, binding_domains, check_coupling, check_equality, seeded_tape, Coupling, EngineError, Equality,
};
use pedersen_core::experiments::{BindingGame, Correctness, DLogGame, HidingGame, HidingIntermediate};
use pedersen_core::{
    Coins, CommitmentScheme, ExperimentError, Game, Group, GroupElement, GroupError, Pedersen, Scalar,
};
use thiserror::Error;

use crate::params::load_group;
use crate::report::{render, Format, ReportRow};
use crate::stats::{default_workers, enumerate_parallel, estimate};
use crate::transport::{self, CommitterOptions, SessionReport, SessionResult};

#[derive(Debug, Parser)]
#[command(name = "pedersen", version, about = "Pedersen commitments, security games and a commit/open protocol")]
pub struct Cli {
    /// Group parameter file; overrides --backend.
    #[arg(long, global = true)]
    pub group: Option<PathBuf>,
    /// Built-in group to use when no parameter file is given.
    #[arg(long, global = true, value_enum, default_value_t = BackendArg::Toy)]
    pub backend: BackendArg,
    /// Read and print numbers in decimal instead of hex.
    #[arg(long, global = true)]
    pub decimal: bool,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Table)]
    pub format: FormatArg,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Toy,
    Large,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Table,
    Lines,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Commit to a message under a key.
    Commit {
        #[arg(long)]
        h: String,
        #[arg(long)]
        m: String,
        /// Seed for the opening key.
        #[arg(long, conflicts_with = "tape")]
        seed: Option<u64>,
        /// Explicit opening key draw, instead of a seed.
        #[arg(long)]
        tape: Option<String>,
    },
    /// Check an opening; exits 0 on accept and 1 on reject.
    Verify {
        #[arg(long)]
        h: String,
        #[arg(long)]
        m: String,
        #[arg(long)]
        c: String,
        #[arg(long)]
        d: String,
    },
    /// Run a security experiment exactly or by sampling.
    Experiment(ExperimentArgs),
    /// Run one side of the commit/open protocol.
    Protocol(ProtocolArgs),
    /// List the built-in adversaries.
    Zoo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExperimentName {
    Correctness,
    Hexp,
    Hinterm,
    Equality,
    Bexp,
    Dlog,
    Coupling,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Estimate,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(value_enum)]
    pub name: ExperimentName,
    #[arg(long, alias = "binder")]
    pub adversary: Option<String>,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    /// Message for the correctness experiment.
    #[arg(long, default_value = "0")]
    pub m: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Role {
    Commit,
    Receive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TransportArg {
    Memory,
    Tcp,
}

#[derive(Debug, Args)]
pub struct ProtocolArgs {
    #[arg(value_enum)]
    pub role: Role,
    #[arg(long, value_enum, default_value_t = TransportArg::Memory)]
    pub transport: TransportArg,
    /// Address to accept connections on (tcp receiver).
    #[arg(long)]
    pub listen: Option<SocketAddr>,
    /// Receiver address (tcp committer).
    #[arg(long)]
    pub connect: Option<SocketAddr>,
    /// Message to commit to.
    #[arg(long)]
    pub m: Option<String>,
    /// Open with this message instead of the committed one.
    #[arg(long)]
    pub open_as: Option<String>,
    /// Send OPEN without a preceding COMMIT.
    #[arg(long)]
    pub skip_commit: bool,
    /// Flip one bit of the OPEN payload before sending.
    #[arg(long)]
    pub flip_open_bit: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Connections to serve, concurrently (tcp receiver).
    #[arg(long, default_value_t = 1)]
    pub sessions: usize,
    /// Print every frame.
    #[arg(long)]
    pub verbose: bool,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Capability(String),
    #[error("{0}")]
    Protocol(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Capability(_) => 3,
            CliError::Protocol(_) => 4,
        }
    }
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn engine_error(e: EngineError) -> CliError {
    match e {
        EngineError::BackendTooLarge
        | EngineError::Experiment(ExperimentError::Group(GroupError::BackendTooLarge { .. })) => {
            CliError::Capability(format!("{e}; use --mode estimate with --seed instead"))
        }
        other => input(other.to_string()),
    }
}

fn io_error(e: io::Error) -> CliError {
    CliError::Protocol(format!("i/o: {e}"))
}

struct Ctx<'a> {
    group: Group,
    decimal: bool,
    format: Format,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn uint(&self, name: &str, text: &str) -> Result<BigUint, CliError> {
        let (digits, radix) = if self.decimal {
            (text, 10)
        } else {
            (text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")).unwrap_or(text), 16)
        };
        let kind = if self.decimal { "decimal" } else { "hex" };
        if digits.is_empty() {
            return Err(input(format!("{name}: expected a {kind} integer, got `{text}`")));
        }
        BigUint::from_str_radix(digits, radix)
            .map_err(|_| input(format!("{name}: expected a {kind} integer, got `{text}`")))
    }

    fn scalar(&self, name: &str, text: &str) -> Result<Scalar, CliError> {
        let v = self.uint(name, text)?;
        self.group.scalar(v).map_err(|_| input(format!("{name}: must be below q = {}", self.show(self.group.order()))))
    }

    fn element(&self, name: &str, text: &str) -> Result<GroupElement, CliError> {
        let v = self.uint(name, text)?;
        self.group.element(v).map_err(|e| match e {
            GroupError::OutOfRange => {
                input(format!("{name}: must be in 1..p with p = {}", self.show(self.group.modulus())))
            }
            _ => input(format!("{name}: not in the order-q subgroup (requires {name}^q = 1 mod p)")),
        })
    }

    fn show(&self, v: &BigUint) -> String {
        if self.decimal {
            v.to_string()
        } else {
            format!("{v:x}")
        }
    }

    fn show_scalar(&self, s: &Scalar) -> String {
        if self.decimal {
            s.value().to_string()
        } else {
            hex::encode(self.group.encode_scalar(s))
        }
    }

    fn show_element(&self, e: &GroupElement) -> String {
        if self.decimal {
            e.value().to_string()
        } else {
            hex::encode(self.group.encode_element(e))
        }
    }

    fn print(&mut self, text: &str) -> Result<(), CliError> {
        self.out.write_all(text.as_bytes()).map_err(io_error)?;
        self.out.flush().map_err(io_error)
    }
}

/// Parses `args`, runs the command, and returns the exit code. Errors go to
/// `err`.
pub fn run_from<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match run(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<u8, CliError> {
    let group = match &cli.group {
        Some(path) => load_group(path).map_err(|e| input(format!("{}: {e}", path.display())))?,
        None => match cli.backend {
            BackendArg::Toy => Group::toy(),
            BackendArg::Large => Group::large(),
        },
    };
    let format = match cli.format {
        FormatArg::Table => Format::Table,
        FormatArg::Lines => Format::Lines,
    };
    let mut ctx = Ctx { group, decimal: cli.decimal, format, out };
    match cli.command {
        Command::Commit { h, m, seed, tape } => cmd_commit(&mut ctx, &h, &m, seed, tape.as_deref()),
        Command::Verify { h, m, c, d } => cmd_verify(&mut ctx, &h, &m, &c, &d),
        Command::Experiment(args) => cmd_experiment(&mut ctx, &args),
        Command::Protocol(args) => cmd_protocol(&mut ctx, &args),
        Command::Zoo => cmd_zoo(&mut ctx),
    }
}

fn cmd_commit(ctx: &mut Ctx, h: &str, m: &str, seed: Option<u64>, tape: Option<&str>) -> Result<u8, CliError> {
    let h = ctx.element("h", h)?;
    let m = ctx.scalar("m", m)?;
    let mut coins: Box<dyn Coins> = match (seed, tape) {
        (Some(seed), _) => Box::new(SeededCoins::new(seed)),
        (None, Some(tape)) => {
            let d = ctx.uint("tape", tape)?;
            Box::new(RandomTape::new(vec![d]))
        }
        (None, None) => return Err(input("commit needs --seed or --tape; there is no ambient randomness")),
    };
    let ped = Pedersen::new(ctx.group.clone());
    let pair =
        ped.commit(&h, &m, coins.as_mut()).map_err(|e| input(format!("tape: {e}; the opening key must be below q")))?;
    let text = format!("c = {}\nd = {}\n", ctx.show_element(&pair.c), ctx.show_scalar(&pair.d));
    ctx.print(&text)?;
    Ok(0)
}

fn cmd_verify(ctx: &mut Ctx, h: &str, m: &str, c: &str, d: &str) -> Result<u8, CliError> {
    let h = ctx.element("h", h)?;
    let m = ctx.scalar("m", m)?;
    let c = ctx.element("c", c)?;
    let d = ctx.scalar("d", d)?;
    let ok = Pedersen::new(ctx.group.clone()).verify(&h, &m, &c, &d);
    ctx.print(if ok { "accept\n" } else { "reject\n" })?;
    Ok(if ok { 0 } else { 1 })
}

fn unknown(kind: &str, name: &str, catalog: &[String]) -> CliError {
    input(format!("unknown {kind} `{name}`; available: {}", catalog.join(", ")))
}

fn strings<S: ToString>(names: &[S]) -> Vec<String> {
    names.iter().map(ToString::to_string).collect()
}

fn pick_unhider<'z>(zoo: &'z AdversaryZoo, name: Option<&str>) -> Result<&'z dyn Unhider, CliError> {
    let catalog = strings(&zoo.unhider_names());
    let name = name.ok_or_else(|| input(format!("--adversary is required; available: {}", catalog.join(", "))))?;
    zoo.unhider(name).ok_or_else(|| unknown("unhider", name, &catalog))
}

fn pick_binder<'z>(zoo: &'z AdversaryZoo, name: Option<&str>) -> Result<&'z dyn Binder, CliError> {
    let catalog = strings(&zoo.binder_names());
    let name = name.ok_or_else(|| input(format!("--binder is required; available: {}", catalog.join(", "))))?;
    zoo.binder(name).ok_or_else(|| unknown("binder", name, &catalog))
}

fn pick_dlog<'z>(zoo: &'z AdversaryZoo, name: Option<&str>) -> Result<&'z dyn DLogAdversary, CliError> {
    let catalog = zoo.dlog_names();
    let name = name.ok_or_else(|| input(format!("--adversary is required; available: {}", catalog.join(", "))))?;
    zoo.dlog_adversary(name).ok_or_else(|| unknown("dlog adversary", name, &catalog))
}

fn need_seed(args: &ExperimentArgs) -> Result<u64, CliError> {
    args.seed.ok_or_else(|| input("--mode estimate needs --seed; there is no ambient randomness"))
}

fn run_game(ctx: &mut Ctx, game: &dyn Game, args: &ExperimentArgs) -> Result<u8, CliError> {
    let row = match args.mode {
        Mode::Exact => {
            let p = enumerate_parallel(game, default_workers()).map_err(engine_error)?;
            ReportRow::exact(game.name(), &game.adversary_name(), &p)
        }
        Mode::Estimate => {
            if args.trials == 0 {
                return Err(input("--trials must be at least 1"));
            }
            let e = estimate(game, args.trials, need_seed(args)?).map_err(engine_error)?;
            ReportRow::estimated(game.name(), &game.adversary_name(), &e)
        }
    };
    let text = render(&[row], ctx.format);
    ctx.print(&text)?;
    Ok(0)
}

fn cmd_experiment(ctx: &mut Ctx, args: &ExperimentArgs) -> Result<u8, CliError> {
    let zoo = AdversaryZoo::new();
    let group = ctx.group.clone();
    let ped = Pedersen::new(group.clone());
    let adv = args.adversary.as_deref();
    match args.name {
        ExperimentName::Correctness => {
            let m = ctx.scalar("m", &args.m)?;
            run_game(ctx, &Correctness { scheme: &ped, m }, args)
        }
        ExperimentName::Hexp => {
            let unhider = pick_unhider(&zoo, adv)?;
            run_game(ctx, &HidingGame { scheme: &ped, unhider }, args)
        }
        ExperimentName::Hinterm => {
            let unhider = pick_unhider(&zoo, adv)?;
            run_game(ctx, &HidingIntermediate { group: &group, unhider }, args)
        }
        ExperimentName::Bexp => {
            let binder = pick_binder(&zoo, adv)?;
            run_game(ctx, &BindingGame { scheme: &ped, binder }, args)
        }
        ExperimentName::Dlog => {
            let adversary = pick_dlog(&zoo, adv)?;
            run_game(ctx, &DLogGame { group: &group, adversary }, args)
        }
        ExperimentName::Equality => {
            let unhider = pick_unhider(&zoo, adv)?;
            if args.mode == Mode::Estimate {
                return Err(input("equality compares exact counts; use --mode exact"));
            }
            let left = HidingGame { scheme: &ped, unhider };
            let right = HidingIntermediate { group: &group, unhider };
            let verdict = check_equality(&left, &right).map_err(engine_error)?;
            cmd_equality_report(ctx, unhider.name(), &verdict)
        }
        ExperimentName::Coupling => {
            let binder = pick_binder(&zoo, adv)?;
            let verdict = match args.mode {
                Mode::Exact => {
                    let space = all_binding_tapes(&ped, binder).map_err(engine_error)?;
                    check_coupling(&ped, binder, space.tapes())
                }
                Mode::Estimate => {
                    let seed = need_seed(args)?;
                    let domains = binding_domains(&ped, binder);
                    check_coupling(&ped, binder, (0..args.trials).map(|i| seeded_tape(&domains, seed, i)))
                }
            }
            .map_err(engine_error)?;
            cmd_coupling_report(ctx, binder.name(), &verdict)
        }
    }
}

fn cmd_equality_report(ctx: &mut Ctx, adversary: &str, verdict: &Equality) -> Result<u8, CliError> {
    let text = match (verdict, ctx.format) {
        (Equality::Equal(p), Format::Lines) => format!("equality {adversary} equal {} {}\n", p.successes(), p.total()),
        (Equality::Equal(p), Format::Table) => format!("hexp = hinterm for {adversary}: equal, both {p}\n"),
        (Equality::Unequal { left, right, left_witness, right_witness }, format) => {
            let witness = left_witness.as_ref().or(right_witness.as_ref()).map_or("-".into(), |t| t.to_string());
            match format {
                Format::Lines => format!(
                    "equality {adversary} unequal {} {} {} {}\n",
                    left.successes(),
                    right.successes(),
                    left.total(),
                    witness.replace(' ', "")
                ),
                Format::Table => {
                    format!("hexp vs hinterm for {adversary}: unequal, {left} vs {right}, witness tape {witness}\n")
                }
            }
        }
    };
    ctx.print(&text)?;
    Ok(if verdict.is_equal() { 0 } else { 1 })
}

fn cmd_coupling_report(ctx: &mut Ctx, binder: &str, verdict: &Coupling) -> Result<u8, CliError> {
    let text = match (verdict, ctx.format) {
        (Coupling::Coupled { tapes, successes }, Format::Lines) => {
            format!("coupling {binder} coupled {successes} {tapes}\n")
        }
        (Coupling::Coupled { tapes, successes }, Format::Table) => {
            format!("bexp and dlog(attacker({binder})) coupled on {tapes} tapes, both succeeded on {successes}\n")
        }
        (Coupling::Decoupled { witness, bexp, dlog }, Format::Lines) => {
            format!("coupling {binder} decoupled {} {bexp} {dlog}\n", witness.to_string().replace(' ', ""))
        }
        (Coupling::Decoupled { witness, bexp, dlog }, Format::Table) => {
            format!("bexp and dlog(attacker({binder})) decoupled on tape {witness}: bexp {bexp}, dlog {dlog}\n")
        }
    };
    ctx.print(&text)?;
    Ok(if verdict.is_coupled() { 0 } else { 1 })
}

fn cmd_zoo(ctx: &mut Ctx) -> Result<u8, CliError> {
    let zoo = AdversaryZoo::new();
    let text = format!(
        "unhiders (hexp, hinterm, equality): {}\nbinders (bexp, coupling): {}\ndlog adversaries (dlog): {}\n",
        zoo.unhider_names().join(", "),
        zoo.binder_names().join(", "),
        zoo.dlog_names().join(", ")
    );
    ctx.print(&text)?;
    Ok(0)
}

fn committer_options(ctx: &Ctx, args: &ProtocolArgs) -> Result<CommitterOptions, CliError> {
    let m = args.m.as_deref().ok_or_else(|| input("the committer needs --m"))?;
    Ok(CommitterOptions {
        m: ctx.scalar("m", m)?,
        open_as: args.open_as.as_deref().map(|v| ctx.scalar("open-as", v)).transpose()?,
        skip_commit: args.skip_commit,
        flip_open_bit: args.flip_open_bit,
    })
}

fn session_text(report: &SessionReport, verbose: bool, prefix: &str) -> String {
    let mut text = String::new();
    if verbose {
        for f in &report.frames {
            text += &format!("{prefix}{f}\n");
        }
    }
    text += &format!("{prefix}result = {}\n", if report.accepted { "accept" } else { "reject" });
    text
}

/// Prints a session outcome and maps it to an exit code.
fn finish_session(ctx: &mut Ctx, result: SessionResult, verbose: bool, prefix: &str) -> Result<u8, CliError> {
    match result {
        Ok(report) => {
            ctx.print(&session_text(&report, verbose, prefix))?;
            Ok(if report.accepted { 0 } else { 1 })
        }
        Err(e) => Err(CliError::Protocol(format!("{prefix}{e}"))),
    }
}

fn cmd_protocol(ctx: &mut Ctx, args: &ProtocolArgs) -> Result<u8, CliError> {
    let seed = args.seed.ok_or_else(|| input("protocol runs need --seed; there is no ambient randomness"))?;
    if args.sessions == 0 {
        return Err(input("--sessions must be at least 1"));
    }
    let group = ctx.group.clone();
    match (args.transport, args.role) {
        (TransportArg::Memory, role) => {
            let opts = committer_options(ctx, args)?;
            let (receiver, committer) = transport::run_memory(&group, seed, &opts);
            match role {
                Role::Receive => finish_session(ctx, receiver, args.verbose, ""),
                Role::Commit => finish_session(ctx, committer, args.verbose, ""),
            }
        }
        (TransportArg::Tcp, Role::Commit) => {
            let addr = args.connect.ok_or_else(|| input("tcp committer needs --connect <addr>"))?;
            let opts = committer_options(ctx, args)?;
            let result = transport::connect_and_commit(addr, &group, seed, &opts).map_err(io_error)?;
            finish_session(ctx, result, args.verbose, "")
        }
        (TransportArg::Tcp, Role::Receive) => {
            let addr = args.listen.ok_or_else(|| input("tcp receiver needs --listen <addr>"))?;
            let listener = TcpListener::bind(addr).map_err(io_error)?;
            let bound = listener.local_addr().map_err(io_error)?;
            ctx.print(&format!("listening on {bound}\n"))?;
            let results = transport::serve(&listener, &group, seed, args.sessions).map_err(io_error)?;
            let many = results.len() > 1;
            let mut code = 0;
            let mut failures = Vec::new();
            for (k, result) in results.into_iter().enumerate() {
                let prefix = if many { format!("session {k}: ") } else { String::new() };
                match finish_session(ctx, result, args.verbose, &prefix) {
                    Ok(c) => code = code.max(c),
                    Err(e) => failures.push(e.to_string()),
                }
            }
            if failures.is_empty() {
                Ok(code)
            } else {
                Err(CliError::Protocol(failures.join("\nerror: ")))
            }
        }
    }
}
