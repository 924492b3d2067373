//! The security games as executable experiments.
//!
//! Draw order is one draw per random assignment in program order, with each
//! adversary procedure reading its own declared segment at the point it is
//! called:
//!
//! | game        | tape layout                                     |
//! |-------------|-------------------------------------------------|
//! | correctness | `x, d`                                          |
//! | hexp        | `x, choose.., b, d, guess..`                    |
//! | hinterm     | `x, choose.., b, d, guess..`                    |
//! | bexp        | `x, bind..`                                     |
//! | dlog        | `x, guess..`                                    |

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use thiserror::Error;

use crate::adversary::{Binder, DLogAdversary, Unhider, UnhiderView};
use crate::coins::{Coins, Domain, TapeError};
use crate::group::{Group, GroupElement, GroupError, Scalar};
use crate::pedersen::CommitmentScheme;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExperimentError {
    #[error(transparent)]
    Tape(#[from] TapeError),
    #[error("adversary output `{field}` is not a valid {expected}")]
    AdversaryRange { field: &'static str, expected: &'static str },
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Value {
    Bytes(Vec<u8>),
    Absent,
}

/// Named values sampled or exchanged during one run, in order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Transcript {
    entries: Vec<(&'static str, Value)>,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn scalar(&mut self, group: &Group, name: &'static str, s: &Scalar) {
        self.entries.push((name, Value::Bytes(group.encode_scalar(s))));
    }

    pub fn element(&mut self, group: &Group, name: &'static str, e: &GroupElement) {
        self.entries.push((name, Value::Bytes(group.encode_element(e))));
    }

    pub fn bit(&mut self, name: &'static str, b: bool) {
        self.entries.push((name, Value::Bytes(alloc::vec![b as u8])));
    }

    pub fn absent(&mut self, name: &'static str) {
        self.entries.push((name, Value::Absent));
    }

    /// Encoded bytes of the first entry called `name`.
    pub fn get(&self, name: &str) -> Option<&[u8]> {
        self.entries.iter().find(|(n, _)| *n == name).and_then(|(_, v)| match v {
            Value::Bytes(b) => Some(b.as_slice()),
            Value::Absent => None,
        })
    }

    pub fn get_uint(&self, name: &str) -> Option<BigUint> {
        self.get(name).map(BigUint::from_bytes_be)
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.iter().map(|(n, _)| *n)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// One `name = hex` line per entry; absent optional values print as `none`.
impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, value) in &self.entries {
            match value {
                Value::Bytes(b) => writeln!(f, "{name} = {}", hex::encode(b))?,
                Value::Absent => writeln!(f, "{name} = none")?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentOutcome {
    pub success: bool,
    pub transcript: Transcript,
}

/// An experiment with its adversary bound in, ready to run on any coins.
pub trait Game: Send + Sync {
    fn name(&self) -> &'static str;

    fn adversary_name(&self) -> String;

    fn group(&self) -> &Group;

    /// Domain of every draw the game makes, in order.
    fn domains(&self) -> Vec<Domain>;

    fn run(&self, coins: &mut dyn Coins) -> Result<ExperimentOutcome, ExperimentError>;
}

pub(crate) fn check_scalar(group: &Group, value: BigUint, field: &'static str) -> Result<Scalar, ExperimentError> {
    group.scalar(value).map_err(|_| ExperimentError::AdversaryRange { field, expected: "scalar" })
}

pub(crate) fn check_element(
    group: &Group,
    value: BigUint,
    field: &'static str,
) -> Result<GroupElement, ExperimentError> {
    group.element(value).map_err(|_| ExperimentError::AdversaryRange { field, expected: "subgroup element" })
}

/// `h <- gen; (c, d) <- commit(h, m); verify(h, m, c, d)`.
pub fn run_correctness(
    scheme: &dyn CommitmentScheme,
    m: &Scalar,
    coins: &mut dyn Coins,
) -> Result<ExperimentOutcome, ExperimentError> {
    let group = scheme.group();
    let mut t = Transcript::new();
    let h = scheme.gen(coins)?;
    t.element(group, "h", &h);
    t.scalar(group, "m", m);
    let pair = scheme.commit(&h, m, coins)?;
    t.element(group, "c", &pair.c);
    t.scalar(group, "d", &pair.d);
    let success = scheme.verify(&h, m, &pair.c, &pair.d);
    t.bit("b", success);
    Ok(ExperimentOutcome { success, transcript: t })
}

fn choose_messages(
    group: &Group,
    unhider: &dyn Unhider,
    h: &GroupElement,
    coins: &mut dyn Coins,
    t: &mut Transcript,
) -> Result<(Scalar, Scalar), ExperimentError> {
    let (m0, m1) = unhider.choose(group, h, coins)?;
    let m0 = check_scalar(group, m0, "m0")?;
    let m1 = check_scalar(group, m1, "m1")?;
    t.scalar(group, "m0", &m0);
    t.scalar(group, "m1", &m1);
    Ok((m0, m1))
}

fn hiding_run(
    group: &Group,
    unhider: &dyn Unhider,
    coins: &mut dyn Coins,
    gen: impl FnOnce(&mut dyn Coins) -> Result<GroupElement, ExperimentError>,
    commit: impl FnOnce(&GroupElement, &Scalar, &mut dyn Coins) -> Result<(GroupElement, Scalar), ExperimentError>,
) -> Result<ExperimentOutcome, ExperimentError> {
    let mut t = Transcript::new();
    let h = gen(coins)?;
    t.element(group, "h", &h);
    let (m0, m1) = choose_messages(group, unhider, &h, coins, &mut t)?;
    let b = coins.draw_bit()?;
    t.bit("b", b);
    let (c, d) = commit(&h, if b { &m1 } else { &m0 }, coins)?;
    t.element(group, "c", &c);
    t.scalar(group, "d", &d);
    let view = UnhiderView { h: &h, m0: &m0, m1: &m1, c: &c };
    let guess = unhider.guess(group, &view, coins)?;
    t.bit("b'", guess);
    Ok(ExperimentOutcome { success: b == guess, transcript: t })
}

/// The hiding experiment: the unhider picks two messages, one is committed
/// at random, and it wins by naming which.
pub fn run_hexp(
    scheme: &dyn CommitmentScheme,
    unhider: &dyn Unhider,
    coins: &mut dyn Coins,
) -> Result<ExperimentOutcome, ExperimentError> {
    hiding_run(
        scheme.group(),
        unhider,
        coins,
        |coins| Ok(scheme.gen(coins)?),
        |h, m, coins| {
            let pair = scheme.commit(h, m, coins)?;
            Ok((pair.c, pair.d))
        },
    )
}

/// The hiding experiment with the commitment replaced by `g^d`, which does
/// not depend on the chosen message at all.
pub fn run_hinterm(
    group: &Group,
    unhider: &dyn Unhider,
    coins: &mut dyn Coins,
) -> Result<ExperimentOutcome, ExperimentError> {
    hiding_run(
        group,
        unhider,
        coins,
        |coins| {
            let x = group.sample_scalar(coins)?;
            Ok(group.exp_generator(&x))
        },
        |_h, _m, coins| {
            let d = group.sample_scalar(coins)?;
            Ok((group.exp_generator(&d), d))
        },
    )
}

/// The binding experiment: the binder wins by opening one commitment to two
/// different messages.
pub fn run_bexp(
    scheme: &dyn CommitmentScheme,
    binder: &dyn Binder,
    coins: &mut dyn Coins,
) -> Result<ExperimentOutcome, ExperimentError> {
    let group = scheme.group();
    let mut t = Transcript::new();
    let h = scheme.gen(coins)?;
    t.element(group, "h", &h);
    let out = binder.bind(group, &h, coins)?;
    let c = check_element(group, out.c, "c")?;
    let m = check_scalar(group, out.m, "m")?;
    let d = check_scalar(group, out.d, "d")?;
    let m_prime = check_scalar(group, out.m_prime, "m'")?;
    let d_prime = check_scalar(group, out.d_prime, "d'")?;
    t.element(group, "c", &c);
    t.scalar(group, "m", &m);
    t.scalar(group, "d", &d);
    t.scalar(group, "m'", &m_prime);
    t.scalar(group, "d'", &d_prime);
    let v = scheme.verify(&h, &m, &c, &d);
    let v_prime = scheme.verify(&h, &m_prime, &c, &d_prime);
    t.bit("v", v);
    t.bit("v'", v_prime);
    Ok(ExperimentOutcome { success: v && v_prime && m != m_prime, transcript: t })
}

/// The discrete-log experiment: `x` is uniform and the adversary sees `g^x`.
/// A missing answer loses.
pub fn run_dlog(
    group: &Group,
    adversary: &dyn DLogAdversary,
    coins: &mut dyn Coins,
) -> Result<ExperimentOutcome, ExperimentError> {
    let mut t = Transcript::new();
    let x = group.sample_scalar(coins)?;
    t.scalar(group, "x", &x);
    let h = group.exp_generator(&x);
    t.element(group, "h", &h);
    let success = match adversary.guess(group, &h, coins)? {
        None => {
            t.absent("x'");
            false
        }
        Some(guess) => {
            let guess = check_scalar(group, guess, "x'")?;
            t.scalar(group, "x'", &guess);
            guess == x
        }
    };
    Ok(ExperimentOutcome { success, transcript: t })
}

pub struct Correctness<'a> {
    pub scheme: &'a dyn CommitmentScheme,
    pub m: Scalar,
}

impl Game for Correctness<'_> {
    fn name(&self) -> &'static str {
        "correctness"
    }

    fn adversary_name(&self) -> String {
        "-".into()
    }

    fn group(&self) -> &Group {
        self.scheme.group()
    }

    fn domains(&self) -> Vec<Domain> {
        let mut d = self.scheme.gen_domains();
        d.extend(self.scheme.commit_domains());
        d
    }

    fn run(&self, coins: &mut dyn Coins) -> Result<ExperimentOutcome, ExperimentError> {
        run_correctness(self.scheme, &self.m, coins)
    }
}

pub struct HidingGame<'a> {
    pub scheme: &'a dyn CommitmentScheme,
    pub unhider: &'a dyn Unhider,
}

impl Game for HidingGame<'_> {
    fn name(&self) -> &'static str {
        "hexp"
    }

    fn adversary_name(&self) -> String {
        self.unhider.name().into()
    }

    fn group(&self) -> &Group {
        self.scheme.group()
    }

    fn domains(&self) -> Vec<Domain> {
        let group = self.group();
        let mut d = self.scheme.gen_domains();
        d.extend(self.unhider.choose_domains(group));
        d.push(Domain::bit());
        d.extend(self.scheme.commit_domains());
        d.extend(self.unhider.guess_domains(group));
        d
    }

    fn run(&self, coins: &mut dyn Coins) -> Result<ExperimentOutcome, ExperimentError> {
        run_hexp(self.scheme, self.unhider, coins)
    }
}

pub struct HidingIntermediate<'a> {
    pub group: &'a Group,
    pub unhider: &'a dyn Unhider,
}

impl Game for HidingIntermediate<'_> {
    fn name(&self) -> &'static str {
        "hinterm"
    }

    fn adversary_name(&self) -> String {
        self.unhider.name().into()
    }

    fn group(&self) -> &Group {
        self.group
    }

    fn domains(&self) -> Vec<Domain> {
        let mut d = alloc::vec![Domain::scalars(self.group)];
        d.extend(self.unhider.choose_domains(self.group));
        d.push(Domain::bit());
        d.push(Domain::scalars(self.group));
        d.extend(self.unhider.guess_domains(self.group));
        d
    }

    fn run(&self, coins: &mut dyn Coins) -> Result<ExperimentOutcome, ExperimentError> {
        run_hinterm(self.group, self.unhider, coins)
    }
}

pub struct BindingGame<'a> {
    pub scheme: &'a dyn CommitmentScheme,
    pub binder: &'a dyn Binder,
}

impl Game for BindingGame<'_> {
    fn name(&self) -> &'static str {
        "bexp"
    }

    fn adversary_name(&self) -> String {
        self.binder.name().into()
    }

    fn group(&self) -> &Group {
        self.scheme.group()
    }

    fn domains(&self) -> Vec<Domain> {
        let mut d = self.scheme.gen_domains();
        d.extend(self.binder.bind_domains(self.group()));
        d
    }

    fn run(&self, coins: &mut dyn Coins) -> Result<ExperimentOutcome, ExperimentError> {
        run_bexp(self.scheme, self.binder, coins)
    }
}

pub struct DLogGame<'a> {
    pub group: &'a Group,
    pub adversary: &'a dyn DLogAdversary,
}

impl Game for DLogGame<'_> {
    fn name(&self) -> &'static str {
        "dlog"
    }

    fn adversary_name(&self) -> String {
        self.adversary.name()
    }

    fn group(&self) -> &Group {
        self.group
    }

    fn domains(&self) -> Vec<Domain> {
        let mut d = alloc::vec![Domain::scalars(self.group)];
        d.extend(self.adversary.guess_domains(self.group));
        d
    }

    fn run(&self, coins: &mut dyn Coins) -> Result<ExperimentOutcome, ExperimentError> {
        run_dlog(self.group, self.adversary, coins)
    }
}
