//! The Pedersen commitment scheme.

use alloc::vec::Vec;

use crate::coins::{Coins, Domain, TapeError};
use crate::group::{Group, GroupElement, Scalar};

/// Commitment `c` together with its opening key `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommitmentPair {
    pub c: GroupElement,
    pub d: Scalar,
}

/// A commitment scheme as the triple `(gen, commit, verify)`.
///
/// `gen` and `commit` take all of their randomness from `coins`; `verify` is
/// deterministic.
pub trait CommitmentScheme: Send + Sync {
    fn group(&self) -> &Group;

    fn gen(&self, coins: &mut dyn Coins) -> Result<GroupElement, TapeError>;

    /// Draws made by `gen`, in order.
    fn gen_domains(&self) -> Vec<Domain>;

    /// Draws made by `commit`, in order.
    fn commit_domains(&self) -> Vec<Domain>;

    fn commit(&self, h: &GroupElement, m: &Scalar, coins: &mut dyn Coins) -> Result<CommitmentPair, TapeError>;

    fn verify(&self, h: &GroupElement, m: &Scalar, c: &GroupElement, d: &Scalar) -> bool;
}

#[derive(Clone, Debug)]
pub struct Pedersen {
    group: Group,
}

impl Pedersen {
    pub fn new(group: Group) -> Self {
        Pedersen { group }
    }

    /// `g^d * h^m`.
    pub fn commitment(&self, h: &GroupElement, m: &Scalar, d: &Scalar) -> GroupElement {
        let g = &self.group;
        g.element_mul(&g.exp_generator(d), &g.exp(h, m))
    }

    /// Like [`CommitmentScheme::gen`] but also returns the exponent `x` with
    /// `h = g^x`. Whoever holds `x` can open any commitment under `h` to any
    /// message.
    #[cfg(any(test, feature = "trapdoor"))]
    pub fn gen_with_trapdoor(&self, coins: &mut dyn Coins) -> Result<(GroupElement, Scalar), TapeError> {
        let x = self.group.sample_scalar(coins)?;
        Ok((self.group.exp_generator(&x), x))
    }

    /// Opening key that opens `g^d * h^m` as `m_new`, given the trapdoor `x`.
    #[cfg(any(test, feature = "trapdoor"))]
    pub fn equivocate(&self, x: &Scalar, m: &Scalar, d: &Scalar, m_new: &Scalar) -> Scalar {
        // d + x*m = d' + x*m'  =>  d' = d + x*(m - m')
        let g = &self.group;
        g.scalar_add(d, &g.scalar_mul(x, &g.scalar_sub(m, m_new)))
    }
}

impl CommitmentScheme for Pedersen {
    fn group(&self) -> &Group {
        &self.group
    }

    fn gen(&self, coins: &mut dyn Coins) -> Result<GroupElement, TapeError> {
        let x = self.group.sample_scalar(coins)?;
        Ok(self.group.exp_generator(&x))
    }

    fn gen_domains(&self) -> Vec<Domain> {
        alloc::vec![Domain::scalars(&self.group)]
    }

    fn commit_domains(&self) -> Vec<Domain> {
        alloc::vec![Domain::scalars(&self.group)]
    }

    fn commit(&self, h: &GroupElement, m: &Scalar, coins: &mut dyn Coins) -> Result<CommitmentPair, TapeError> {
        let d = self.group.sample_scalar(coins)?;
        Ok(CommitmentPair { c: self.commitment(h, m, &d), d })
    }

    fn verify(&self, h: &GroupElement, m: &Scalar, c: &GroupElement, d: &Scalar) -> bool {
        *c == self.commitment(h, m, d)
    }
}
