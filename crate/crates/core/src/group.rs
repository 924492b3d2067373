//! Prime-order subgroups of `Z_p^*` and their scalar field `Z_q`.
//!
//! Two parameter sets ship with the crate: a toy group small enough to
//! enumerate every random choice of an experiment, and a 256-bit safe-prime
//! group for realistic runs. Both go through the same arbitrary-precision
//! code path.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::coins::{Coins, Domain, TapeError};
use crate::prime::{is_prime_trial_division, is_probable_prime, MILLER_RABIN_ROUNDS};

/// Largest modulus (in bits) accepted for the toy backend. Trial division
/// stays instantaneous below this.
pub const TOY_MAX_BITS: u64 = 32;

/// Default cap on `q` for [`Group::brute_force_dlog`].
pub const DEFAULT_DLOG_BOUND: u64 = 1 << 20;

const WINDOW_BITS: u64 = 4;
const WINDOW_SIZE: usize = 1 << WINDOW_BITS;

const LARGE_P: &str = "61153848644804713286545441400519307949566995425026312830707639238360585174783";
const LARGE_Q: &str = "30576924322402356643272720700259653974783497712513156415353819619180292587391";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("{0} is not prime")]
    NotPrime(BigUint),
    #[error("subgroup order q does not divide p - 1")]
    OrderMismatch,
    #[error("generator must differ from 1 and satisfy g^q = 1 mod p")]
    BadGenerator,
    #[error("toy backend modulus exceeds {TOY_MAX_BITS} bits")]
    ToyTooLarge,
    #[error("operation needs a toy backend with q below {bound}")]
    BackendTooLarge { bound: u64 },
    #[error("value is not in the order-q subgroup")]
    NotInSubgroup,
    #[error("value outside the representable range")]
    OutOfRange,
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("encoded value is out of range")]
    DecodeOutOfRange,
    #[error("encoded value is not in the order-q subgroup")]
    DecodeNotInSubgroup,
    #[error("expected {expected} encoded bytes, got {actual}")]
    DecodeLength { expected: usize, actual: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    Toy,
    Large,
}

impl Backend {
    pub fn as_str(self) -> &'static str {
        match self {
            Backend::Toy => "toy",
            Backend::Large => "large",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for Backend {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "toy" => Ok(Backend::Toy),
            "large" => Ok(Backend::Large),
            _ => Err(()),
        }
    }
}

/// Unvalidated group parameters `(p, q, g)` plus the backend tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupDescription {
    pub modulus: BigUint,
    pub order: BigUint,
    pub generator: BigUint,
    pub backend: Backend,
}

impl GroupDescription {
    /// `p = 23, q = 11, g = 2`.
    pub fn toy() -> Self {
        GroupDescription {
            modulus: BigUint::from(23u32),
            order: BigUint::from(11u32),
            generator: BigUint::from(2u32),
            backend: Backend::Toy,
        }
    }

    /// 256-bit safe prime `p = 2q + 1` with `g = 4`.
    pub fn large() -> Self {
        GroupDescription {
            modulus: LARGE_P.parse().expect("constant parses"),
            order: LARGE_Q.parse().expect("constant parses"),
            generator: BigUint::from(4u32),
            backend: Backend::Large,
        }
    }

    pub fn element_width(&self) -> usize {
        (self.modulus.bits() as usize).div_ceil(8)
    }

    pub fn scalar_width(&self) -> usize {
        (self.order.bits() as usize).div_ceil(8)
    }
}

fn is_prime_for(backend: Backend, n: &BigUint) -> bool {
    match backend {
        Backend::Toy => n.to_u64().is_some_and(is_prime_trial_division),
        Backend::Large => is_probable_prime(n, MILLER_RABIN_ROUNDS),
    }
}

/// Checks every invariant a usable group must satisfy.
pub fn validate_group(desc: &GroupDescription) -> Result<(), GroupError> {
    if desc.backend == Backend::Toy && desc.modulus.bits() > TOY_MAX_BITS {
        return Err(GroupError::ToyTooLarge);
    }
    if !is_prime_for(desc.backend, &desc.order) {
        return Err(GroupError::NotPrime(desc.order.clone()));
    }
    if desc.modulus.is_even() || !is_prime_for(desc.backend, &desc.modulus) {
        return Err(GroupError::NotPrime(desc.modulus.clone()));
    }
    let p_minus_one = &desc.modulus - 1u32;
    if !(p_minus_one % &desc.order).is_zero() {
        return Err(GroupError::OrderMismatch);
    }
    let g = &desc.generator;
    if g.is_zero() || g.is_one() || g >= &desc.modulus || !desc.generator.modpow(&desc.order, &desc.modulus).is_one() {
        return Err(GroupError::BadGenerator);
    }
    Ok(())
}

/// Element of `Z_q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar(BigUint);

impl Scalar {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Member of the order-`q` subgroup of `Z_p^*`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(BigUint);

impl GroupElement {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_one()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

#[derive(Debug)]
struct Inner {
    desc: GroupDescription,
    element_width: usize,
    scalar_width: usize,
    exponent_bits: u64,
    // generator_table[i][j] = g^(j * 16^i)
    generator_table: Vec<[BigUint; WINDOW_SIZE]>,
}

/// A validated group. Cheap to clone.
#[derive(Debug, Clone)]
pub struct Group(Arc<Inner>);

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.0.desc == other.0.desc
    }
}

impl Eq for Group {}

impl Group {
    pub fn new(desc: GroupDescription) -> Result<Self, GroupError> {
        validate_group(&desc)?;
        let exponent_bits = desc.order.bits();
        let windows = exponent_bits.div_ceil(WINDOW_BITS) as usize;
        let p = &desc.modulus;
        let mut generator_table = Vec::with_capacity(windows);
        let mut base = desc.generator.clone();
        for _ in 0..windows {
            let row: [BigUint; WINDOW_SIZE] = window_table(&base, p);
            // Next base is base^16.
            base = &row[WINDOW_SIZE - 1] * &base % p;
            generator_table.push(row);
        }
        Ok(Group(Arc::new(Inner {
            element_width: desc.element_width(),
            scalar_width: desc.scalar_width(),
            exponent_bits,
            generator_table,
            desc,
        })))
    }

    pub fn toy() -> Self {
        Self::new(GroupDescription::toy()).expect("toy parameters are valid")
    }

    pub fn large() -> Self {
        Self::new(GroupDescription::large()).expect("large parameters are valid")
    }

    pub fn description(&self) -> &GroupDescription {
        &self.0.desc
    }

    pub fn backend(&self) -> Backend {
        self.0.desc.backend
    }

    pub fn modulus(&self) -> &BigUint {
        &self.0.desc.modulus
    }

    pub fn order(&self) -> &BigUint {
        &self.0.desc.order
    }

    pub fn element_width(&self) -> usize {
        self.0.element_width
    }

    pub fn scalar_width(&self) -> usize {
        self.0.scalar_width
    }

    pub fn generator(&self) -> GroupElement {
        GroupElement(self.0.desc.generator.clone())
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(BigUint::one())
    }

    pub fn is_member(&self, value: &BigUint) -> bool {
        !value.is_zero() && value < self.modulus() && value.modpow(self.order(), self.modulus()).is_one()
    }

    pub fn element(&self, value: BigUint) -> Result<GroupElement, GroupError> {
        if value.is_zero() || &value >= self.modulus() {
            return Err(GroupError::OutOfRange);
        }
        if !self.is_member(&value) {
            return Err(GroupError::NotInSubgroup);
        }
        Ok(GroupElement(value))
    }

    pub fn scalar(&self, value: BigUint) -> Result<Scalar, GroupError> {
        if &value >= self.order() {
            return Err(GroupError::OutOfRange);
        }
        Ok(Scalar(value))
    }

    /// Reduces an arbitrary integer into `Z_q`.
    pub fn scalar_reduce(&self, value: &BigUint) -> Scalar {
        Scalar(value % self.order())
    }

    pub fn scalar_from_u64(&self, value: u64) -> Result<Scalar, GroupError> {
        self.scalar(BigUint::from(value))
    }

    pub fn scalar_zero(&self) -> Scalar {
        Scalar(BigUint::zero())
    }

    pub fn scalar_one(&self) -> Scalar {
        Scalar(BigUint::one())
    }

    pub fn scalar_add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        Scalar((&a.0 + &b.0) % self.order())
    }

    pub fn scalar_sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        let q = self.order();
        Scalar((&a.0 + q - &b.0) % q)
    }

    pub fn scalar_mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        Scalar(&a.0 * &b.0 % self.order())
    }

    pub fn scalar_neg(&self, a: &Scalar) -> Scalar {
        let q = self.order();
        Scalar((q - &a.0) % q)
    }

    /// Multiplicative inverse in `Z_q` via Fermat's little theorem.
    pub fn scalar_inv(&self, a: &Scalar) -> Result<Scalar, GroupError> {
        if a.0.is_zero() {
            return Err(GroupError::ZeroInverse);
        }
        let q = self.order();
        Ok(Scalar(a.0.modpow(&(q - 2u32), q)))
    }

    pub fn element_mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(&a.0 * &b.0 % self.modulus())
    }

    /// `base^e mod p` by fixed 4-bit windows over the full bit length of `q`.
    /// Every window multiplies, so the operation sequence depends only on
    /// the group.
    pub fn exp(&self, base: &GroupElement, e: &Scalar) -> GroupElement {
        let p = self.modulus();
        let table = window_table(&base.0, p);
        let windows = self.0.exponent_bits.div_ceil(WINDOW_BITS);
        let mut acc = BigUint::one();
        for w in (0..windows).rev() {
            for _ in 0..WINDOW_BITS {
                acc = &acc * &acc % p;
            }
            acc = &acc * &table[nibble(&e.0, w)] % p;
        }
        GroupElement(acc)
    }

    /// `g^e` using the precomputed fixed-base table.
    pub fn exp_generator(&self, e: &Scalar) -> GroupElement {
        let p = self.modulus();
        let mut acc = BigUint::one();
        for (w, row) in self.0.generator_table.iter().enumerate() {
            acc = &acc * &row[nibble(&e.0, w as u64)] % p;
        }
        GroupElement(acc)
    }

    /// Uniform scalar from `coins`.
    pub fn sample_scalar(&self, coins: &mut dyn Coins) -> Result<Scalar, TapeError> {
        Ok(Scalar(coins.draw(&Domain::scalars(self))?))
    }

    /// Exhaustive search for `x` with `g^x = h`, bounded by
    /// [`DEFAULT_DLOG_BOUND`].
    pub fn brute_force_dlog(&self, h: &BigUint) -> Result<Scalar, GroupError> {
        self.brute_force_dlog_bounded(h, DEFAULT_DLOG_BOUND)
    }

    pub fn brute_force_dlog_bounded(&self, h: &BigUint, bound: u64) -> Result<Scalar, GroupError> {
        let q = match self.order().to_u64() {
            Some(q) if self.backend() == Backend::Toy && q < bound => q,
            _ => return Err(GroupError::BackendTooLarge { bound }),
        };
        let g = self.generator();
        let mut acc = self.identity();
        for x in 0..q {
            if &acc.0 == h {
                return Ok(Scalar(BigUint::from(x)));
            }
            acc = self.element_mul(&acc, &g);
        }
        Err(GroupError::NotInSubgroup)
    }

    pub fn encode_scalar(&self, s: &Scalar) -> Vec<u8> {
        to_fixed_be(&s.0, self.scalar_width())
    }

    pub fn encode_element(&self, e: &GroupElement) -> Vec<u8> {
        to_fixed_be(&e.0, self.element_width())
    }

    pub fn decode_scalar(&self, bytes: &[u8]) -> Result<Scalar, GroupError> {
        check_width(bytes, self.scalar_width())?;
        self.scalar(BigUint::from_bytes_be(bytes)).map_err(|_| GroupError::DecodeOutOfRange)
    }

    pub fn decode_element(&self, bytes: &[u8]) -> Result<GroupElement, GroupError> {
        check_width(bytes, self.element_width())?;
        self.element(BigUint::from_bytes_be(bytes)).map_err(|e| match e {
            GroupError::NotInSubgroup => GroupError::DecodeNotInSubgroup,
            _ => GroupError::DecodeOutOfRange,
        })
    }

    /// All subgroup elements in the order `g^0, g^1, ...`. Toy backend only.
    pub fn enumerate_elements(&self) -> Result<Vec<GroupElement>, GroupError> {
        let q = self.toy_order()?;
        let g = self.generator();
        let mut out = Vec::with_capacity(q as usize);
        let mut acc = self.identity();
        for _ in 0..q {
            out.push(acc.clone());
            acc = self.element_mul(&acc, &g);
        }
        Ok(out)
    }

    /// All scalars `0..q`. Toy backend only.
    pub fn enumerate_scalars(&self) -> Result<Vec<Scalar>, GroupError> {
        let q = self.toy_order()?;
        Ok((0..q).map(|v| Scalar(BigUint::from(v))).collect())
    }

    fn toy_order(&self) -> Result<u64, GroupError> {
        match (self.backend(), self.order().to_u64()) {
            (Backend::Toy, Some(q)) if q < DEFAULT_DLOG_BOUND => Ok(q),
            _ => Err(GroupError::BackendTooLarge { bound: DEFAULT_DLOG_BOUND }),
        }
    }
}

fn window_table(base: &BigUint, p: &BigUint) -> [BigUint; WINDOW_SIZE] {
    let mut table: [BigUint; WINDOW_SIZE] = core::array::from_fn(|_| BigUint::one());
    for j in 1..WINDOW_SIZE {
        table[j] = &table[j - 1] * base % p;
    }
    table
}

fn nibble(e: &BigUint, window: u64) -> usize {
    let mut idx = 0usize;
    for j in 0..WINDOW_BITS {
        if e.bit(window * WINDOW_BITS + j) {
            idx |= 1 << j;
        }
    }
    idx
}

fn to_fixed_be(value: &BigUint, width: usize) -> Vec<u8> {
    let raw = value.to_bytes_be();
    let raw = if value.is_zero() { &[][..] } else { &raw[..] };
    let mut out = alloc::vec![0u8; width - raw.len()];
    out.extend_from_slice(raw);
    out
}

fn check_width(bytes: &[u8], expected: usize) -> Result<(), GroupError> {
    if bytes.len() != expected {
        return Err(GroupError::DecodeLength { expected, actual: bytes.len() });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coins::RandomTape;

    fn toy() -> Group {
        Group::toy()
    }

    fn desc(p: u32, q: u32, g: u32) -> GroupDescription {
        GroupDescription { modulus: p.into(), order: q.into(), generator: g.into(), backend: Backend::Toy }
    }

    fn s(group: &Group, v: u64) -> Scalar {
        group.scalar_from_u64(v).unwrap()
    }

    fn e(group: &Group, v: u32) -> GroupElement {
        group.element(v.into()).unwrap()
    }

    #[test]
    fn validate_examples() {
        // 2^11 mod 23 by repeated multiplication.
        let mut acc = 1u32;
        for _ in 0..11 {
            acc = acc * 2 % 23;
        }
        assert_eq!(acc, 1);
        assert_eq!(validate_group(&desc(23, 11, 2)), Ok(()));
        assert_eq!(validate_group(&desc(23, 11, 1)), Err(GroupError::BadGenerator));
        assert_eq!(validate_group(&desc(23, 10, 2)), Err(GroupError::NotPrime(10u32.into())));
    }

    #[test]
    fn validate_rejects_other_defects() {
        assert_eq!(validate_group(&desc(23, 7, 2)), Err(GroupError::OrderMismatch));
        assert_eq!(validate_group(&desc(25, 3, 2)), Err(GroupError::NotPrime(25u32.into())));
        // 5 has order 22 mod 23.
        assert_eq!(validate_group(&desc(23, 11, 5)), Err(GroupError::BadGenerator));
        assert_eq!(validate_group(&desc(23, 11, 0)), Err(GroupError::BadGenerator));
        let mut big = GroupDescription::large();
        big.backend = Backend::Toy;
        assert_eq!(validate_group(&big), Err(GroupError::ToyTooLarge));
        assert_eq!(validate_group(&GroupDescription::large()), Ok(()));
        let mut bad = GroupDescription::large();
        bad.order += 2u32;
        assert!(matches!(validate_group(&bad), Err(GroupError::NotPrime(_) | GroupError::OrderMismatch)));
    }

    #[test]
    fn large_group_is_safe_prime() {
        let d = GroupDescription::large();
        assert_eq!(d.modulus, &d.order * 2u32 + 1u32);
        assert_eq!(d.modulus.bits(), 256);
        assert_eq!(d.element_width(), 32);
        assert_eq!(d.scalar_width(), 32);
    }

    #[test]
    fn scalar_examples() {
        let g = toy();
        assert_eq!(g.scalar_add(&s(&g, 4), &s(&g, 9)), s(&g, (4 + 9) % 11));
        assert_eq!(g.scalar_sub(&s(&g, 4), &s(&g, 6)), s(&g, 9));
        for a in 0..11 {
            assert_eq!(g.scalar_add(&s(&g, a), &g.scalar_zero()), s(&g, a));
        }
        assert_eq!(g.scalar_inv(&s(&g, 1)), Ok(s(&g, 1)));
        assert_eq!(g.scalar_inv(&g.scalar_zero()), Err(GroupError::ZeroInverse));
        let brute = (0..11).find(|t| 3 * t % 11 == 1).unwrap();
        assert_eq!(g.scalar_inv(&s(&g, 3)), Ok(s(&g, brute)));
        assert_eq!(brute, 4);
    }

    #[test]
    fn field_laws_exhaustive() {
        let g = toy();
        let all = g.enumerate_scalars().unwrap();
        for a in &all {
            assert!(g.scalar_add(a, &g.scalar_neg(a)).is_zero());
            if !a.is_zero() {
                assert_eq!(g.scalar_mul(a, &g.scalar_inv(a).unwrap()), g.scalar_one());
            }
            for b in &all {
                assert_eq!(g.scalar_add(a, b), g.scalar_add(b, a));
                assert_eq!(g.scalar_mul(a, b), g.scalar_mul(b, a));
                assert_eq!(g.scalar_add(&g.scalar_sub(a, b), b), *a);
                for c in &all {
                    assert_eq!(g.scalar_add(&g.scalar_add(a, b), c), g.scalar_add(a, &g.scalar_add(b, c)));
                    assert_eq!(g.scalar_mul(&g.scalar_mul(a, b), c), g.scalar_mul(a, &g.scalar_mul(b, c)));
                    assert_eq!(
                        g.scalar_mul(a, &g.scalar_add(b, c)),
                        g.scalar_add(&g.scalar_mul(a, b), &g.scalar_mul(a, c))
                    );
                }
            }
        }
    }

    #[test]
    fn group_examples() {
        let g = toy();
        assert_eq!(9 * 18 % 23, 1);
        assert_eq!(g.element_mul(&e(&g, 9), &e(&g, 18)), g.identity());
        assert_eq!(g.element_mul(&e(&g, 2), &e(&g, 2)), e(&g, 4));
        assert_eq!(g.element_mul(&e(&g, 13), &g.identity()), e(&g, 13));
        assert_eq!(g.exp(&e(&g, 2), &s(&g, 3)), e(&g, 8));
        assert_eq!(g.exp(&g.generator(), &g.scalar_zero()), g.identity());
        // exponent 11 = q is not a scalar; the order check uses modpow directly.
        assert!(BigUint::from(2u32).modpow(&11u32.into(), &23u32.into()).is_one());
    }

    #[test]
    fn group_laws_exhaustive() {
        let g = toy();
        let gen = g.generator();
        let all = g.enumerate_scalars().unwrap();
        for a in &all {
            let ga = g.exp(&gen, a);
            assert_eq!(ga, g.exp_generator(a));
            assert_eq!(ga.value(), &BigUint::from(2u32).modpow(a.value(), g.modulus()));
            for b in &all {
                let gb = g.exp(&gen, b);
                assert_eq!(g.element_mul(&ga, &gb), g.exp(&gen, &g.scalar_add(a, b)));
                assert_eq!(g.exp(&ga, b), g.exp(&gen, &g.scalar_mul(a, b)));
                for c in &all {
                    let gc = g.exp(&gen, c);
                    assert_eq!(
                        g.element_mul(&g.element_mul(&ga, &gb), &gc),
                        g.element_mul(&ga, &g.element_mul(&gb, &gc))
                    );
                }
            }
        }
    }

    #[test]
    fn large_exp_matches_modpow() {
        let g = Group::large();
        let mut tape_seed = 7u64;
        for _ in 0..20 {
            tape_seed = tape_seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let mut coins = crate::coins::SeededCoins::new(tape_seed);
            let x = g.sample_scalar(&mut coins).unwrap();
            let base = g.exp_generator(&g.sample_scalar(&mut coins).unwrap());
            assert_eq!(g.exp(&base, &x).value(), &base.value().modpow(x.value(), g.modulus()));
            assert_eq!(g.exp_generator(&x).value(), &BigUint::from(4u32).modpow(x.value(), g.modulus()));
            assert!(g.is_member(g.exp(&base, &x).value()));
        }
    }

    #[test]
    fn dlog_examples() {
        let g = toy();
        assert_eq!(g.brute_force_dlog(&8u32.into()), Ok(s(&g, 3)));
        assert_eq!(g.brute_force_dlog(&1u32.into()), Ok(g.scalar_zero()));
        assert_eq!(g.brute_force_dlog(&5u32.into()), Err(GroupError::NotInSubgroup));
        for x in g.enumerate_scalars().unwrap() {
            assert_eq!(g.brute_force_dlog(g.exp_generator(&x).value()), Ok(x));
        }
        assert_eq!(
            Group::large().brute_force_dlog(&4u32.into()),
            Err(GroupError::BackendTooLarge { bound: DEFAULT_DLOG_BOUND })
        );
        assert_eq!(g.brute_force_dlog_bounded(&8u32.into(), 11), Err(GroupError::BackendTooLarge { bound: 11 }));
    }

    #[test]
    fn encoding_examples() {
        let g = toy();
        assert_eq!(g.encode_element(&e(&g, 8)), [0x08]);
        assert_eq!(g.decode_element(&[0x17]), Err(GroupError::DecodeOutOfRange));
        assert_eq!(g.decode_element(&[0x00]), Err(GroupError::DecodeOutOfRange));
        assert_eq!(g.decode_element(&[0x05]), Err(GroupError::DecodeNotInSubgroup));
        assert_eq!(g.decode_scalar(&[0x0b]), Err(GroupError::DecodeOutOfRange));
        assert_eq!(g.decode_scalar(&[0, 1]), Err(GroupError::DecodeLength { expected: 1, actual: 2 }));
        for el in g.enumerate_elements().unwrap() {
            assert_eq!(g.decode_element(&g.encode_element(&el)), Ok(el));
        }
        for sc in g.enumerate_scalars().unwrap() {
            assert_eq!(g.decode_scalar(&g.encode_scalar(&sc)), Ok(sc));
        }
        let large = Group::large();
        let zero = large.encode_scalar(&large.scalar_zero());
        assert_eq!(zero, [0u8; 32]);
        assert_eq!(large.encode_element(&large.identity())[31], 1);
    }

    #[test]
    fn sample_scalar_from_tape() {
        let g = toy();
        let mut tape = RandomTape::from_u64s(&[7]);
        assert_eq!(g.sample_scalar(&mut tape), Ok(s(&g, 7)));
        let mut seen = [0u32; 11];
        for v in 0..11u64 {
            let mut tape = RandomTape::from_u64s(&[v]);
            let x = g.sample_scalar(&mut tape).unwrap();
            seen[x.value().to_usize().unwrap()] += 1;
        }
        assert_eq!(seen, [1; 11]);
    }

    #[test]
    fn enumerations_are_complete() {
        let g = toy();
        let mut els: Vec<_> =
            g.enumerate_elements().unwrap().into_iter().map(|e| e.value().to_u32().unwrap()).collect();
        els.sort();
        // Quadratic residues mod 23.
        let mut qr: Vec<u32> = (1..23u32).map(|v| v * v % 23).collect();
        qr.sort();
        qr.dedup();
        assert_eq!(els, qr);
        assert!(Group::large().enumerate_scalars().is_err());
    }
}
