//! Sources of randomness for experiments.
//!
//! Every random choice an experiment makes goes through [`Coins::draw`] with
//! the finite [`Domain`] it samples from. A [`RandomTape`] replays explicit
//! values (the unit of exhaustive enumeration and coupling) while
//! [`SeededCoins`] derives them from a ChaCha20 stream.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use thiserror::Error;

use crate::group::Group;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TapeError {
    #[error("tape exhausted at draw {position}")]
    Exhausted { position: usize },
    #[error("tape value at draw {position} is outside its domain")]
    OutOfDomain { position: usize },
    #[error("draw {position} has no declared domain")]
    DomainUndeclared { position: usize },
    #[error("draw {position} requested a domain other than the declared one")]
    DomainMismatch { position: usize },
}

/// A finite set `{0, .., size-1}` a single draw ranges over.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Domain {
    size: BigUint,
}

impl Domain {
    /// `{0, 1}`.
    pub fn bit() -> Self {
        Domain { size: BigUint::from(2u32) }
    }

    /// `Z_q` of the given group.
    pub fn scalars(group: &Group) -> Self {
        Domain { size: group.order().clone() }
    }

    /// `{0, .., size-1}`. Panics on an empty domain.
    pub fn below(size: BigUint) -> Self {
        assert!(!size.is_zero(), "domain must be non-empty");
        Domain { size }
    }

    pub fn size(&self) -> &BigUint {
        &self.size
    }

    pub fn size_u64(&self) -> Option<u64> {
        self.size.to_u64()
    }

    pub fn contains(&self, value: &BigUint) -> bool {
        value < &self.size
    }
}

/// Source of uniform draws.
pub trait Coins {
    fn draw(&mut self, domain: &Domain) -> Result<BigUint, TapeError>;

    fn draw_bit(&mut self) -> Result<bool, TapeError> {
        Ok(self.draw(&Domain::bit())?.is_one())
    }
}

impl<C: Coins + ?Sized> Coins for &mut C {
    fn draw(&mut self, domain: &Domain) -> Result<BigUint, TapeError> {
        (**self).draw(domain)
    }
}

/// Explicit finite sequence of draws with a read cursor.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RandomTape {
    draws: Vec<BigUint>,
    cursor: usize,
}

impl RandomTape {
    pub fn new(draws: Vec<BigUint>) -> Self {
        RandomTape { draws, cursor: 0 }
    }

    pub fn from_u64s(draws: &[u64]) -> Self {
        Self::new(draws.iter().map(|&v| BigUint::from(v)).collect())
    }

    /// One draw per domain, taken from `coins`.
    pub fn sample(domains: &[Domain], coins: &mut dyn Coins) -> Result<Self, TapeError> {
        let draws = domains.iter().map(|d| coins.draw(d)).collect::<Result<_, _>>()?;
        Ok(Self::new(draws))
    }

    pub fn draws(&self) -> &[BigUint] {
        &self.draws
    }

    pub fn len(&self) -> usize {
        self.draws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.draws.is_empty()
    }

    pub fn position(&self) -> usize {
        self.cursor
    }

    pub fn rewind(&mut self) {
        self.cursor = 0;
    }

    /// Same draws, cursor at the start.
    pub fn fresh(&self) -> Self {
        Self::new(self.draws.clone())
    }
}

impl Coins for RandomTape {
    fn draw(&mut self, domain: &Domain) -> Result<BigUint, TapeError> {
        let position = self.cursor;
        let value = self.draws.get(position).ok_or(TapeError::Exhausted { position })?;
        if !domain.contains(value) {
            return Err(TapeError::OutOfDomain { position });
        }
        self.cursor += 1;
        Ok(value.clone())
    }
}

impl fmt::Display for RandomTape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, d) in self.draws.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str("]")
    }
}

/// A tape whose every position carries a declared domain. Used by the
/// enumeration engine so that an experiment drawing more, or differently,
/// than it declared is reported instead of silently miscounted.
#[derive(Debug)]
pub struct DeclaredTape<'a> {
    tape: RandomTape,
    domains: &'a [Domain],
}

impl<'a> DeclaredTape<'a> {
    pub fn new(tape: RandomTape, domains: &'a [Domain]) -> Self {
        DeclaredTape { tape, domains }
    }

    pub fn into_tape(self) -> RandomTape {
        self.tape
    }
}

impl Coins for DeclaredTape<'_> {
    fn draw(&mut self, domain: &Domain) -> Result<BigUint, TapeError> {
        let position = self.tape.position();
        match self.domains.get(position) {
            None => Err(TapeError::DomainUndeclared { position }),
            Some(declared) if declared != domain => Err(TapeError::DomainMismatch { position }),
            Some(_) => self.tape.draw(domain),
        }
    }
}

/// Deterministic draws from ChaCha20, uniform over each domain by rejection
/// sampling on fixed-width byte strings.
#[derive(Clone, Debug)]
pub struct SeededCoins {
    rng: ChaCha20Rng,
}

impl SeededCoins {
    pub fn new(seed: u64) -> Self {
        SeededCoins { rng: ChaCha20Rng::seed_from_u64(seed) }
    }

    /// Independent stream `stream` under `seed`; trial `i` of a Monte-Carlo
    /// run uses stream `i` so results do not depend on how trials are split.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        SeededCoins { rng }
    }
}

impl Coins for SeededCoins {
    fn draw(&mut self, domain: &Domain) -> Result<BigUint, TapeError> {
        let max = domain.size() - 1u32;
        let bits = max.bits();
        if bits == 0 {
            return Ok(BigUint::zero());
        }
        let mut buf = alloc::vec![0u8; (bits as usize).div_ceil(8)];
        let excess = buf.len() as u64 * 8 - bits;
        loop {
            self.rng.fill_bytes(&mut buf);
            buf[0] &= 0xff >> excess;
            let candidate = BigUint::from_bytes_be(&buf);
            if candidate <= max {
                return Ok(candidate);
            }
        }
    }
}

/// Wraps a source and records every value it hands out.
#[derive(Debug)]
pub struct RecordingCoins<C> {
    inner: C,
    log: Vec<BigUint>,
}

impl<C: Coins> RecordingCoins<C> {
    pub fn new(inner: C) -> Self {
        RecordingCoins { inner, log: Vec::new() }
    }

    pub fn into_tape(self) -> RandomTape {
        RandomTape::new(self.log)
    }
}

impl<C: Coins> Coins for RecordingCoins<C> {
    fn draw(&mut self, domain: &Domain) -> Result<BigUint, TapeError> {
        let v = self.inner.draw(domain)?;
        self.log.push(v.clone());
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tape_reads_in_order_and_reports_exhaustion() {
        let mut tape = RandomTape::from_u64s(&[3, 1]);
        let d = Domain::below(5u32.into());
        assert_eq!(tape.draw(&d), Ok(3u32.into()));
        assert!(tape.draw_bit().unwrap());
        assert_eq!(tape.draw(&d), Err(TapeError::Exhausted { position: 2 }));
    }

    #[test]
    fn tape_rejects_values_outside_domain() {
        let mut tape = RandomTape::from_u64s(&[2]);
        assert_eq!(tape.draw_bit(), Err(TapeError::OutOfDomain { position: 0 }));
        // cursor does not advance on failure
        assert_eq!(tape.position(), 0);
    }

    #[test]
    fn declared_tape_checks_arity_and_domains() {
        let domains = [Domain::bit()];
        let mut t = DeclaredTape::new(RandomTape::from_u64s(&[1, 1]), &domains);
        assert!(t.draw_bit().unwrap());
        assert_eq!(t.draw_bit(), Err(TapeError::DomainUndeclared { position: 1 }));
        let mut t = DeclaredTape::new(RandomTape::from_u64s(&[1]), &domains);
        assert_eq!(t.draw(&Domain::below(3u32.into())), Err(TapeError::DomainMismatch { position: 0 }));
    }

    #[test]
    fn seeded_coins_are_deterministic_and_in_range() {
        let d = Domain::below(11u32.into());
        let a: Vec<_> = {
            let mut c = SeededCoins::new(42);
            (0..200).map(|_| c.draw(&d).unwrap()).collect()
        };
        let b: Vec<_> = {
            let mut c = SeededCoins::new(42);
            (0..200).map(|_| c.draw(&d).unwrap()).collect()
        };
        assert_eq!(a, b);
        assert!(a.iter().all(|v| d.contains(v)));
        let mut other = SeededCoins::with_stream(42, 1);
        let c: Vec<_> = (0..200).map(|_| other.draw(&d).unwrap()).collect();
        assert_ne!(a, c);
    }

    #[test]
    fn singleton_domain_consumes_nothing() {
        let mut c = SeededCoins::new(1);
        assert_eq!(c.draw(&Domain::below(BigUint::one())), Ok(BigUint::zero()));
    }

    #[test]
    fn recording_replays_identically() {
        let d = Domain::below(1000u32.into());
        let mut rec = RecordingCoins::new(SeededCoins::new(9));
        let first: Vec<_> = (0..5).map(|_| rec.draw(&d).unwrap()).collect();
        let mut tape = rec.into_tape();
        let replay: Vec<_> = (0..5).map(|_| tape.draw(&d).unwrap()).collect();
        assert_eq!(first, replay);
    }

    #[test]
    fn display_lists_draws() {
        assert_eq!(alloc::format!("{}", RandomTape::from_u64s(&[3, 0, 4])), "[3, 0, 4]");
    }
}
