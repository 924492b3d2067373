//! Exact success probabilities by enumerating every tape, tape-by-tape
//! comparison of two games, and the seeded counting loop behind Monte-Carlo
//! estimates.

use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use num_integer::Integer;
use thiserror::Error;

use crate::adversary::{Binder, DLogAttacker};
use crate::coins::{DeclaredTape, Domain, RandomTape, SeededCoins, TapeError};
use crate::experiments::{run_bexp, run_dlog, ExperimentError, Game};
use crate::group::Backend;
use crate::pedersen::CommitmentScheme;

/// Enumerations with more atoms than this are refused.
pub const MAX_ENUMERATION_ATOMS: u64 = 1 << 26;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("exhaustive enumeration needs the toy backend and at most {MAX_ENUMERATION_ATOMS} tapes")]
    BackendTooLarge,
    #[error("experiment drew at position {position} beyond its declared tape")]
    DomainUndeclared { position: usize },
    #[error("the two experiments do not share a tape layout")]
    LayoutMismatch,
    #[error(transparent)]
    Experiment(ExperimentError),
}

impl From<ExperimentError> for EngineError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Tape(
                TapeError::DomainUndeclared { position } | TapeError::DomainMismatch { position },
            ) => EngineError::DomainUndeclared { position },
            other => EngineError::Experiment(other),
        }
    }
}

/// `successes / total`, kept unreduced so the tape count stays visible.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExactProbability {
    successes: u64,
    total: u64,
}

impl ExactProbability {
    pub fn new(successes: u64, total: u64) -> Self {
        assert!(total > 0 && successes <= total, "invalid probability {successes}/{total}");
        ExactProbability { successes, total }
    }

    pub fn successes(&self) -> u64 {
        self.successes
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Lowest-terms `(numerator, denominator)`.
    pub fn reduced(&self) -> (u64, u64) {
        let g = self.successes.gcd(&self.total);
        (self.successes / g, self.total / g)
    }

    /// Equality as rationals.
    pub fn same_value(&self, other: &Self) -> bool {
        self.successes as u128 * other.total as u128 == other.successes as u128 * self.total as u128
    }

    pub fn is_half(&self) -> bool {
        self.reduced() == (1, 2)
    }

    pub fn as_f64(&self) -> f64 {
        self.successes as f64 / self.total as f64
    }
}

impl fmt::Display for ExactProbability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.successes, self.total)
    }
}

/// The Cartesian product of a game's draw domains, indexed in mixed radix
/// with the first draw most significant.
#[derive(Clone, Debug)]
pub struct TapeSpace {
    radices: Vec<u64>,
    total: u64,
}

impl TapeSpace {
    pub fn new(backend: Backend, domains: &[Domain]) -> Result<Self, EngineError> {
        if backend != Backend::Toy {
            return Err(EngineError::BackendTooLarge);
        }
        let mut total = 1u64;
        let mut radices = Vec::with_capacity(domains.len());
        for d in domains {
            let size = d.size_u64().ok_or(EngineError::BackendTooLarge)?;
            total =
                total.checked_mul(size).filter(|&t| t <= MAX_ENUMERATION_ATOMS).ok_or(EngineError::BackendTooLarge)?;
            radices.push(size);
        }
        Ok(TapeSpace { radices, total })
    }

    pub fn for_game(game: &dyn Game) -> Result<Self, EngineError> {
        Self::new(game.group().backend(), &game.domains())
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn tape(&self, mut index: u64) -> RandomTape {
        debug_assert!(index < self.total);
        let mut draws = alloc::vec![0u64; self.radices.len()];
        for (slot, &radix) in draws.iter_mut().zip(&self.radices).rev() {
            *slot = index % radix;
            index /= radix;
        }
        RandomTape::from_u64s(&draws)
    }

    pub fn tapes(&self) -> impl Iterator<Item = RandomTape> + '_ {
        (0..self.total).map(move |i| self.tape(i))
    }
}

fn run_declared(game: &dyn Game, domains: &[Domain], tape: RandomTape) -> Result<bool, EngineError> {
    let mut coins = DeclaredTape::new(tape, domains);
    Ok(game.run(&mut coins)?.success)
}

/// Successes over the tapes with indices in `range`. Splitting the full
/// range and summing gives the same count as one call.
pub fn count_successes(game: &dyn Game, space: &TapeSpace, range: Range<u64>) -> Result<u64, EngineError> {
    let domains = game.domains();
    let mut wins = 0;
    for i in range {
        wins += run_declared(game, &domains, space.tape(i))? as u64;
    }
    Ok(wins)
}

/// Exact success probability over every tape.
pub fn enumerate_exact(game: &dyn Game) -> Result<ExactProbability, EngineError> {
    let space = TapeSpace::for_game(game)?;
    let wins = count_successes(game, &space, 0..space.total())?;
    Ok(ExactProbability::new(wins, space.total()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equality {
    Equal(ExactProbability),
    Unequal {
        left: ExactProbability,
        right: ExactProbability,
        /// A tape on which only the left game succeeds.
        left_witness: Option<RandomTape>,
        /// A tape on which only the right game succeeds.
        right_witness: Option<RandomTape>,
    },
}

impl Equality {
    pub fn is_equal(&self) -> bool {
        matches!(self, Equality::Equal(_))
    }
}

/// Compares the exact success counts of two games with the same tape layout.
pub fn check_equality(left: &dyn Game, right: &dyn Game) -> Result<Equality, EngineError> {
    let domains = left.domains();
    if domains != right.domains() || left.group().backend() != right.group().backend() {
        return Err(EngineError::LayoutMismatch);
    }
    let space = TapeSpace::new(left.group().backend(), &domains)?;
    let (mut wins_left, mut wins_right) = (0, 0);
    let (mut left_witness, mut right_witness) = (None, None);
    for tape in space.tapes() {
        let a = run_declared(left, &domains, tape.clone())?;
        let b = run_declared(right, &domains, tape.clone())?;
        wins_left += a as u64;
        wins_right += b as u64;
        if a && !b && left_witness.is_none() {
            left_witness = Some(tape);
        } else if b && !a && right_witness.is_none() {
            right_witness = Some(tape);
        }
    }
    let left_p = ExactProbability::new(wins_left, space.total());
    if wins_left == wins_right {
        return Ok(Equality::Equal(left_p));
    }
    Ok(Equality::Unequal {
        left: left_p,
        right: ExactProbability::new(wins_right, space.total()),
        left_witness,
        right_witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coupling {
    /// Outcomes agreed on every tape; `successes` counts tapes where both won.
    Coupled {
        tapes: u64,
        successes: u64,
    },
    Decoupled {
        witness: RandomTape,
        bexp: bool,
        dlog: bool,
    },
}

impl Coupling {
    pub fn is_coupled(&self) -> bool {
        matches!(self, Coupling::Coupled { .. })
    }
}

/// Runs the binding experiment and the discrete-log experiment against
/// `DLogAttacker(binder)` on each tape and checks the outcomes agree.
pub fn check_coupling<I>(scheme: &dyn CommitmentScheme, binder: &dyn Binder, tapes: I) -> Result<Coupling, EngineError>
where
    I: IntoIterator<Item = RandomTape>,
{
    let group = scheme.group();
    let attacker = DLogAttacker::new(binder);
    let (mut count, mut successes) = (0, 0);
    for tape in tapes {
        let bexp = run_bexp(scheme, binder, &mut tape.fresh())?.success;
        let dlog = run_dlog(group, &attacker, &mut tape.fresh())?.success;
        if bexp != dlog {
            return Ok(Coupling::Decoupled { witness: tape, bexp, dlog });
        }
        count += 1;
        successes += bexp as u64;
    }
    Ok(Coupling::Coupled { tapes: count, successes })
}

/// Tape layout shared by the binding experiment and its reduction.
pub fn binding_domains(scheme: &dyn CommitmentScheme, binder: &dyn Binder) -> Vec<Domain> {
    let mut d = scheme.gen_domains();
    d.extend(binder.bind_domains(scheme.group()));
    d
}

/// Every tape of the binding layout (toy backend).
pub fn all_binding_tapes(scheme: &dyn CommitmentScheme, binder: &dyn Binder) -> Result<TapeSpace, EngineError> {
    TapeSpace::new(scheme.group().backend(), &binding_domains(scheme, binder))
}

/// Tape number `index` of a seeded family, sampled over `domains`.
pub fn seeded_tape(domains: &[Domain], seed: u64, index: u64) -> RandomTape {
    let mut coins = SeededCoins::with_stream(seed, index);
    RandomTape::sample(domains, &mut coins).expect("seeded coins never run out")
}

/// Monte-Carlo successes for trials in `trials`; trial `i` draws from
/// ChaCha20 stream `i` under `seed`.
pub fn count_seeded(game: &dyn Game, seed: u64, trials: Range<u64>) -> Result<u64, EngineError> {
    let mut wins = 0;
    for i in trials {
        let mut coins = SeededCoins::with_stream(seed, i);
        wins += game.run(&mut coins)?.success as u64;
    }
    Ok(wins)
}
