//! Adversary interfaces for the hiding, binding and discrete-log games, the
//! reduction from binding to discrete log, and a catalog of concrete
//! adversaries.
//!
//! Adversaries are stateless and total: every procedure returns, and all of
//! their randomness comes from the coins they are handed, in the amounts they
//! declare. Outputs are plain integers; the experiments range-check them.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::coins::{Coins, Domain};
use crate::experiments::ExperimentError;
use crate::group::{Group, GroupElement, Scalar};

/// What an unhider sees when asked for its guess: its own earlier input and
/// output, plus the challenge commitment.
#[derive(Clone, Copy, Debug)]
pub struct UnhiderView<'a> {
    pub h: &'a GroupElement,
    pub m0: &'a Scalar,
    pub m1: &'a Scalar,
    pub c: &'a GroupElement,
}

pub trait Unhider: Send + Sync {
    fn name(&self) -> &str;

    fn choose_domains(&self, _group: &Group) -> Vec<Domain> {
        Vec::new()
    }

    fn guess_domains(&self, _group: &Group) -> Vec<Domain> {
        Vec::new()
    }

    fn choose(
        &self,
        group: &Group,
        h: &GroupElement,
        coins: &mut dyn Coins,
    ) -> Result<(BigUint, BigUint), ExperimentError>;

    fn guess(&self, group: &Group, view: &UnhiderView<'_>, coins: &mut dyn Coins) -> Result<bool, ExperimentError>;
}

/// A binder's claimed double opening `(c, m, d, m', d')`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BindOutput {
    pub c: BigUint,
    pub m: BigUint,
    pub d: BigUint,
    pub m_prime: BigUint,
    pub d_prime: BigUint,
}

impl BindOutput {
    pub fn from_u64s(c: u64, m: u64, d: u64, m_prime: u64, d_prime: u64) -> Self {
        BindOutput { c: c.into(), m: m.into(), d: d.into(), m_prime: m_prime.into(), d_prime: d_prime.into() }
    }
}

pub trait Binder: Send + Sync {
    fn name(&self) -> &str;

    fn bind_domains(&self, _group: &Group) -> Vec<Domain> {
        Vec::new()
    }

    fn bind(&self, group: &Group, h: &GroupElement, coins: &mut dyn Coins) -> Result<BindOutput, ExperimentError>;
}

/// Adversary against the discrete-log experiment. `None` means it gives up.
pub trait DLogAdversary: Send + Sync {
    fn name(&self) -> String;

    fn guess_domains(&self, _group: &Group) -> Vec<Domain> {
        Vec::new()
    }

    fn guess(&self, group: &Group, h: &GroupElement, coins: &mut dyn Coins)
        -> Result<Option<BigUint>, ExperimentError>;
}

/// Turns a binder into a discrete-log solver.
///
/// Two valid openings `g^d h^m = g^d' h^m'` with `m != m'` give
/// `x = (d - d') / (m' - m)`. Any output that is out of range, fails either
/// verification, or repeats the message yields `None`, so the division is
/// never attempted with a zero denominator.
pub struct DLogAttacker<'a> {
    binder: &'a dyn Binder,
}

impl<'a> DLogAttacker<'a> {
    pub fn new(binder: &'a dyn Binder) -> Self {
        DLogAttacker { binder }
    }
}

impl DLogAdversary for DLogAttacker<'_> {
    fn name(&self) -> String {
        format!("attacker({})", self.binder.name())
    }

    fn guess_domains(&self, group: &Group) -> Vec<Domain> {
        self.binder.bind_domains(group)
    }

    fn guess(
        &self,
        group: &Group,
        h: &GroupElement,
        coins: &mut dyn Coins,
    ) -> Result<Option<BigUint>, ExperimentError> {
        let out = self.binder.bind(group, h, coins)?;
        let (Ok(c), Ok(m), Ok(d), Ok(m_prime), Ok(d_prime)) = (
            group.element(out.c),
            group.scalar(out.m),
            group.scalar(out.d),
            group.scalar(out.m_prime),
            group.scalar(out.d_prime),
        ) else {
            return Ok(None);
        };
        let opens = |m: &Scalar, d: &Scalar| c == group.element_mul(&group.exp_generator(d), &group.exp(h, m));
        if !(opens(&m, &d) && opens(&m_prime, &d_prime) && m != m_prime) {
            return Ok(None);
        }
        let denominator = group.scalar_inv(&group.scalar_sub(&m_prime, &m))?;
        let x = group.scalar_mul(&group.scalar_sub(&d, &d_prime), &denominator);
        Ok(Some(x.value().clone()))
    }
}

/// Always picks `(0, 1)` and always guesses the same bit.
pub struct ConstantUnhider(pub bool);

impl Unhider for ConstantUnhider {
    fn name(&self) -> &str {
        if self.0 {
            "const1"
        } else {
            "const0"
        }
    }

    fn choose(&self, _: &Group, _: &GroupElement, _: &mut dyn Coins) -> Result<(BigUint, BigUint), ExperimentError> {
        Ok((0u32.into(), 1u32.into()))
    }

    fn guess(&self, _: &Group, _: &UnhiderView<'_>, _: &mut dyn Coins) -> Result<bool, ExperimentError> {
        Ok(self.0)
    }
}

/// Picks `(0, 1)` and guesses with one coin from its own tape.
pub struct TapeRandomUnhider;

impl Unhider for TapeRandomUnhider {
    fn name(&self) -> &str {
        "taperandom"
    }

    fn guess_domains(&self, _: &Group) -> Vec<Domain> {
        alloc::vec![Domain::bit()]
    }

    fn choose(&self, _: &Group, _: &GroupElement, _: &mut dyn Coins) -> Result<(BigUint, BigUint), ExperimentError> {
        Ok((0u32.into(), 1u32.into()))
    }

    fn guess(&self, _: &Group, _: &UnhiderView<'_>, coins: &mut dyn Coins) -> Result<bool, ExperimentError> {
        Ok(coins.draw_bit()?)
    }
}

/// Picks two distinct messages depending on `h`, draws a candidate opening
/// key and answers 1 exactly when that key opens `c` to `m1`.
pub struct DistinctMessageUnhider;

impl Unhider for DistinctMessageUnhider {
    fn name(&self) -> &str {
        "distinct"
    }

    fn guess_domains(&self, group: &Group) -> Vec<Domain> {
        alloc::vec![Domain::scalars(group)]
    }

    fn choose(
        &self,
        group: &Group,
        h: &GroupElement,
        _: &mut dyn Coins,
    ) -> Result<(BigUint, BigUint), ExperimentError> {
        let m0 = group.scalar_reduce(h.value());
        let m1 = group.scalar_add(&m0, &group.scalar_one());
        Ok((m0.value().clone(), m1.value().clone()))
    }

    fn guess(&self, group: &Group, view: &UnhiderView<'_>, coins: &mut dyn Coins) -> Result<bool, ExperimentError> {
        let d = group.sample_scalar(coins)?;
        let candidate = group.element_mul(&group.exp_generator(&d), &group.exp(view.h, view.m1));
        Ok(&candidate == view.c)
    }
}

/// Computationally unbounded unhider (toy backend): recovers both `x` and
/// `log_g(c)`, which pins the opening key for either message but cannot tell
/// which one was used. Answers 1 when the key for `m1` is the smaller one.
pub struct UnboundedUnhider;

impl Unhider for UnboundedUnhider {
    fn name(&self) -> &str {
        "unbounded"
    }

    fn choose(&self, _: &Group, _: &GroupElement, _: &mut dyn Coins) -> Result<(BigUint, BigUint), ExperimentError> {
        Ok((2u32.into(), 5u32.into()))
    }

    fn guess(&self, group: &Group, view: &UnhiderView<'_>, _: &mut dyn Coins) -> Result<bool, ExperimentError> {
        let x = group.brute_force_dlog(view.h.value())?;
        let y = group.brute_force_dlog(view.c.value())?;
        let d0 = group.scalar_sub(&y, &group.scalar_mul(&x, view.m0));
        let d1 = group.scalar_sub(&y, &group.scalar_mul(&x, view.m1));
        Ok(d1 < d0)
    }
}

/// Unhider given by lookup tables, for synthesizing arbitrary deterministic
/// strategies. The message pair is indexed by `h mod len`; the guess by
/// `(c mod len, coin)` with one coin drawn from its tape.
#[derive(Clone, Debug)]
pub struct TableUnhider {
    pub messages: Vec<(u64, u64)>,
    pub guesses: Vec<[bool; 2]>,
}

fn table_index(value: &BigUint, len: usize) -> usize {
    (value % len).to_usize().unwrap_or(0)
}

impl Unhider for TableUnhider {
    fn name(&self) -> &str {
        "table"
    }

    fn guess_domains(&self, _: &Group) -> Vec<Domain> {
        alloc::vec![Domain::bit()]
    }

    fn choose(&self, _: &Group, h: &GroupElement, _: &mut dyn Coins) -> Result<(BigUint, BigUint), ExperimentError> {
        let (m0, m1) = self.messages[table_index(h.value(), self.messages.len())];
        Ok((m0.into(), m1.into()))
    }

    fn guess(&self, _: &Group, view: &UnhiderView<'_>, coins: &mut dyn Coins) -> Result<bool, ExperimentError> {
        let coin = coins.draw_bit()?;
        Ok(self.guesses[table_index(view.c.value(), self.guesses.len())][coin as usize])
    }
}

/// Opens the identity as `(0, 0)` twice. Both openings verify but the
/// messages coincide.
pub struct NullBinder;

impl Binder for NullBinder {
    fn name(&self) -> &str {
        "nullbinder"
    }

    fn bind(&self, _: &Group, _: &GroupElement, _: &mut dyn Coins) -> Result<BindOutput, ExperimentError> {
        Ok(BindOutput::from_u64s(1, 0, 0, 0, 0))
    }
}

/// Commits honestly to a random message and returns the same opening twice.
pub struct RepeatBinder;

impl Binder for RepeatBinder {
    fn name(&self) -> &str {
        "repeat"
    }

    fn bind_domains(&self, group: &Group) -> Vec<Domain> {
        alloc::vec![Domain::scalars(group), Domain::scalars(group)]
    }

    fn bind(&self, group: &Group, h: &GroupElement, coins: &mut dyn Coins) -> Result<BindOutput, ExperimentError> {
        let m = group.sample_scalar(coins)?;
        let d = group.sample_scalar(coins)?;
        let c = group.element_mul(&group.exp_generator(&d), &group.exp(h, &m));
        Ok(BindOutput {
            c: c.value().clone(),
            m: m.value().clone(),
            d: d.value().clone(),
            m_prime: m.value().clone(),
            d_prime: d.value().clone(),
        })
    }
}

/// Claims `g` opens to `(0, 0)`, which never verifies.
pub struct NonVerifyingBinder;

impl Binder for NonVerifyingBinder {
    fn name(&self) -> &str {
        "nonverifying"
    }

    fn bind(&self, group: &Group, _: &GroupElement, _: &mut dyn Coins) -> Result<BindOutput, ExperimentError> {
        Ok(BindOutput {
            c: group.generator().value().clone(),
            m: BigUint::zero(),
            d: BigUint::zero(),
            m_prime: 1u32.into(),
            d_prime: BigUint::zero(),
        })
    }
}

/// Opening of `g` as `(0, 1)` and `(1, 1 - x)`, valid iff `h = g^x`.
fn equivocate_generator(group: &Group, x: &Scalar) -> BindOutput {
    let one = group.scalar_one();
    BindOutput {
        c: group.generator().value().clone(),
        m: BigUint::zero(),
        d: one.value().clone(),
        m_prime: one.value().clone(),
        d_prime: group.scalar_sub(&one, x).value().clone(),
    }
}

/// Solves `log_g(h)` by exhaustive search and equivocates. Toy backend only.
pub struct BruteForceBinder;

impl Binder for BruteForceBinder {
    fn name(&self) -> &str {
        "bruteforce"
    }

    fn bind(&self, group: &Group, h: &GroupElement, _: &mut dyn Coins) -> Result<BindOutput, ExperimentError> {
        let x = group.brute_force_dlog(h.value())?;
        Ok(equivocate_generator(group, &x))
    }
}

/// Guesses `log_g(h)` from its tape and equivocates as if the guess were
/// right. Wins with probability `1/q`.
pub struct GuessingBinder;

impl Binder for GuessingBinder {
    fn name(&self) -> &str {
        "guessing"
    }

    fn bind_domains(&self, group: &Group) -> Vec<Domain> {
        alloc::vec![Domain::scalars(group)]
    }

    fn bind(&self, group: &Group, _: &GroupElement, coins: &mut dyn Coins) -> Result<BindOutput, ExperimentError> {
        let x = group.sample_scalar(coins)?;
        Ok(equivocate_generator(group, &x))
    }
}

/// Knows the trapdoor `x` of the commitment key and equivocates without any
/// search. Succeeds whenever the experiment's `h` equals `g^x`.
#[cfg(any(test, feature = "trapdoor"))]
pub struct TrapdoorBinder(pub Scalar);

#[cfg(any(test, feature = "trapdoor"))]
impl Binder for TrapdoorBinder {
    fn name(&self) -> &str {
        "trapdoor"
    }

    fn bind(&self, group: &Group, _: &GroupElement, _: &mut dyn Coins) -> Result<BindOutput, ExperimentError> {
        Ok(equivocate_generator(group, &self.0))
    }
}

pub struct ConstantDLog(pub u64);

impl DLogAdversary for ConstantDLog {
    fn name(&self) -> String {
        format!("const{}", self.0)
    }

    fn guess(&self, _: &Group, _: &GroupElement, _: &mut dyn Coins) -> Result<Option<BigUint>, ExperimentError> {
        Ok(Some(self.0.into()))
    }
}

pub struct NoneDLog;

impl DLogAdversary for NoneDLog {
    fn name(&self) -> String {
        "none".into()
    }

    fn guess(&self, _: &Group, _: &GroupElement, _: &mut dyn Coins) -> Result<Option<BigUint>, ExperimentError> {
        Ok(None)
    }
}

pub struct BruteForceDLog;

impl DLogAdversary for BruteForceDLog {
    fn name(&self) -> String {
        "bruteforce".into()
    }

    fn guess(&self, group: &Group, h: &GroupElement, _: &mut dyn Coins) -> Result<Option<BigUint>, ExperimentError> {
        Ok(Some(group.brute_force_dlog(h.value())?.value().clone()))
    }
}

/// Catalog of the built-in adversaries, looked up by name.
pub struct AdversaryZoo {
    unhiders: Vec<Box<dyn Unhider>>,
    binders: Vec<Box<dyn Binder>>,
    dlog: Vec<Box<dyn DLogAdversary>>,
}

impl Default for AdversaryZoo {
    fn default() -> Self {
        Self::new()
    }
}

impl AdversaryZoo {
    pub fn new() -> Self {
        AdversaryZoo {
            unhiders: alloc::vec![
                Box::new(ConstantUnhider(false)),
                Box::new(ConstantUnhider(true)),
                Box::new(TapeRandomUnhider),
                Box::new(DistinctMessageUnhider),
                Box::new(UnboundedUnhider),
            ],
            binders: alloc::vec![
                Box::new(NullBinder),
                Box::new(RepeatBinder),
                Box::new(NonVerifyingBinder),
                Box::new(GuessingBinder),
                Box::new(BruteForceBinder),
            ],
            dlog: alloc::vec![Box::new(ConstantDLog(0)), Box::new(NoneDLog), Box::new(BruteForceDLog)],
        }
    }

    pub fn unhiders(&self) -> &[Box<dyn Unhider>] {
        &self.unhiders
    }

    pub fn binders(&self) -> &[Box<dyn Binder>] {
        &self.binders
    }

    pub fn dlog_adversaries(&self) -> &[Box<dyn DLogAdversary>] {
        &self.dlog
    }

    pub fn unhider(&self, name: &str) -> Option<&dyn Unhider> {
        self.unhiders.iter().find(|u| u.name() == name).map(|u| u.as_ref())
    }

    pub fn binder(&self, name: &str) -> Option<&dyn Binder> {
        self.binders.iter().find(|b| b.name() == name).map(|b| b.as_ref())
    }

    pub fn dlog_adversary(&self, name: &str) -> Option<&dyn DLogAdversary> {
        self.dlog.iter().find(|a| a.name() == name).map(|a| a.as_ref())
    }

    pub fn unhider_names(&self) -> Vec<&str> {
        self.unhiders.iter().map(|u| u.name()).collect()
    }

    pub fn binder_names(&self) -> Vec<&str> {
        self.binders.iter().map(|b| b.name()).collect()
    }

    pub fn dlog_names(&self) -> Vec<String> {
        self.dlog.iter().map(|a| a.name()).collect()
    }
}
