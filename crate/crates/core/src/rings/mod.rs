//! Exact coefficient rings.
//!
//! A [`Ring`] is a cheap-to-clone handle that owns the arithmetic; elements
//! ([`RingElement`]) are plain canonical values and are only meaningful
//! together with the ring that produced them. All reductions are applied
//! eagerly, so structural equality of elements is ring equality.

pub(crate) mod fpoly;
mod json;
pub mod linalg;
pub(crate) mod zpoly;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::AbelianGroup;

pub use fpoly::{is_prime, least_irreducible};
pub use linalg::{determinant, solve_linear, Matrix};
pub use zpoly::cyclotomic_polynomial;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("RejectsNonPrimeModulus: {0} is not prime")]
    NonPrimeModulus(u64),
    #[error("RejectsReduciblePolynomial: {0:?} is reducible over GF({1})")]
    ReduciblePolynomial(Vec<u64>, u64),
    #[error("invalid modulus polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("cyclotomic index must be positive")]
    InvalidCyclotomicIndex,
    #[error("DimensionMismatch: {0}")]
    DimensionMismatch(String),
    #[error("DescriptorMismatch: {0}")]
    DescriptorMismatch(String),
    #[error("WrongRingVariant: expected {0}")]
    WrongRingVariant(&'static str),
    #[error("invalid element: {0}")]
    InvalidElement(String),
}

/// Serializable description of a coefficient ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RingDescriptor {
    PrimeField {
        p: u64,
    },
    /// `GF(p)[x]/(f)`, `modulus` ascending and monic.
    FiniteField {
        p: u64,
        modulus: Vec<u64>,
    },
    Integers,
    CyclotomicIntegers {
        m: u64,
    },
    SplitFunctionRing {
        base: Box<RingDescriptor>,
        group: AbelianGroup,
    },
}

/// Canonical element representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingElement {
    /// Residue in `0..p`.
    Mod(u64),
    /// Exactly `deg f` coefficients, each in `0..p`, ascending.
    Poly(Vec<u64>),
    Int(BigInt),
    /// Exactly `φ(m)` integer coefficients, ascending in powers of ζ.
    Cyclo(Vec<BigInt>),
    /// One base-ring value per group element, in canonical group order.
    Split(Vec<RingElement>),
}

#[derive(Debug, PartialEq, Eq)]
enum Kind {
    PrimeField {
        p: u64,
    },
    FiniteField {
        p: u64,
        modulus: Vec<u64>,
    },
    Integers,
    Cyclotomic {
        m: u64,
        phi: Vec<BigInt>,
        /// Residues `k` coprime to `m`; `ζ ↦ ζ^k` are the Galois conjugations.
        units: Vec<u64>,
    },
    Split {
        base: Ring,
        group: AbelianGroup,
    },
}

/// Handle to a coefficient ring; immutable and cheap to clone.
#[derive(Clone)]
pub struct Ring(Arc<Kind>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({self})")
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Kind::PrimeField { p } => write!(f, "GF({p})"),
            Kind::FiniteField { p, modulus } => {
                write!(f, "GF({p}^{})", modulus.len() - 1)
            }
            Kind::Integers => write!(f, "Z"),
            Kind::Cyclotomic { m, .. } => write!(f, "Z[zeta_{m}]"),
            Kind::Split { base, group } => write!(f, "Map({group}, {base})"),
        }
    }
}

impl Ring {
    pub fn new(desc: &RingDescriptor) -> Result<Ring, RingError> {
        match desc {
            RingDescriptor::PrimeField { p } => Ring::prime_field(*p),
            RingDescriptor::FiniteField { p, modulus } => Ring::finite_field(*p, modulus),
            RingDescriptor::Integers => Ok(Ring::integers()),
            RingDescriptor::CyclotomicIntegers { m } => Ring::cyclotomic(*m),
            RingDescriptor::SplitFunctionRing { base, group } => {
                Ok(Ring::split(&Ring::new(base)?, group))
            }
        }
    }

    pub fn prime_field(p: u64) -> Result<Ring, RingError> {
        if p > u32::MAX as u64 || !fpoly::is_prime(p) {
            return Err(RingError::NonPrimeModulus(p));
        }
        Ok(Ring(Arc::new(Kind::PrimeField { p })))
    }

    /// `GF(p)[x]/(f)` for a monic irreducible `f` given in ascending order.
    pub fn finite_field(p: u64, modulus: &[u64]) -> Result<Ring, RingError> {
        if p > u32::MAX as u64 || !fpoly::is_prime(p) {
            return Err(RingError::NonPrimeModulus(p));
        }
        if modulus.len() < 2 {
            return Err(RingError::InvalidPolynomial("degree must be at least 1".into()));
        }
        if modulus.last() != Some(&1) {
            return Err(RingError::InvalidPolynomial("modulus must be monic".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(RingError::InvalidPolynomial(format!(
                "coefficients must be reduced modulo {p}"
            )));
        }
        if !fpoly::is_irreducible(modulus, p) {
            return Err(RingError::ReduciblePolynomial(modulus.to_vec(), p));
        }
        Ok(Ring(Arc::new(Kind::FiniteField {
            p,
            modulus: modulus.to_vec(),
        })))
    }

    pub fn integers() -> Ring {
        Ring(Arc::new(Kind::Integers))
    }

    pub fn cyclotomic(m: u64) -> Result<Ring, RingError> {
        if m == 0 {
            return Err(RingError::InvalidCyclotomicIndex);
        }
        let units = (1..=m).filter(|k| k.gcd(&m) == 1).map(|k| k % m).collect();
        Ok(Ring(Arc::new(Kind::Cyclotomic {
            m,
            phi: zpoly::cyclotomic_polynomial(m),
            units,
        })))
    }

    /// The ring `Map(G, base)` with pointwise operations.
    pub fn split(base: &Ring, group: &AbelianGroup) -> Ring {
        Ring(Arc::new(Kind::Split {
            base: base.clone(),
            group: group.clone(),
        }))
    }

    pub fn descriptor(&self) -> RingDescriptor {
        match &*self.0 {
            Kind::PrimeField { p } => RingDescriptor::PrimeField { p: *p },
            Kind::FiniteField { p, modulus } => RingDescriptor::FiniteField {
                p: *p,
                modulus: modulus.clone(),
            },
            Kind::Integers => RingDescriptor::Integers,
            Kind::Cyclotomic { m, .. } => RingDescriptor::CyclotomicIntegers { m: *m },
            Kind::Split { base, group } => RingDescriptor::SplitFunctionRing {
                base: Box::new(base.descriptor()),
                group: group.clone(),
            },
        }
    }

    pub fn is_field(&self) -> bool {
        matches!(&*self.0, Kind::PrimeField { .. } | Kind::FiniteField { .. })
    }

    /// An integral domain that is not a field: `Z` or `Z[ζ_m]`.
    pub(crate) fn is_char_zero_domain(&self) -> bool {
        matches!(&*self.0, Kind::Integers | Kind::Cyclotomic { .. })
    }

    pub fn characteristic(&self) -> u64 {
        match &*self.0 {
            Kind::PrimeField { p } | Kind::FiniteField { p, .. } => *p,
            Kind::Integers | Kind::Cyclotomic { .. } => 0,
            Kind::Split { base, .. } => base.characteristic(),
        }
    }

    /// Number of elements, `None` for infinite rings (or counts past `u128`).
    pub fn cardinality(&self) -> Option<u128> {
        match &*self.0 {
            Kind::PrimeField { p } => Some(*p as u128),
            Kind::FiniteField { p, modulus } => {
                (*p as u128).checked_pow(modulus.len() as u32 - 1)
            }
            Kind::Integers | Kind::Cyclotomic { .. } => None,
            Kind::Split { base, group } => base.cardinality()?.checked_pow(group.order() as u32),
        }
    }

    pub fn split_parts(&self) -> Option<(&Ring, &AbelianGroup)> {
        match &*self.0 {
            Kind::Split { base, group } => Some((base, group)),
            _ => None,
        }
    }

    /// Degree of the defining modulus of a finite-field backend.
    pub fn extension_degree(&self) -> Option<usize> {
        match &*self.0 {
            Kind::FiniteField { modulus, .. } => Some(modulus.len() - 1),
            Kind::PrimeField { .. } => Some(1),
            _ => None,
        }
    }

    pub fn cyclotomic_index(&self) -> Option<u64> {
        match &*self.0 {
            Kind::Cyclotomic { m, .. } => Some(*m),
            _ => None,
        }
    }

    pub fn zero(&self) -> RingElement {
        match &*self.0 {
            Kind::PrimeField { .. } => RingElement::Mod(0),
            Kind::FiniteField { modulus, .. } => RingElement::Poly(vec![0; modulus.len() - 1]),
            Kind::Integers => RingElement::Int(BigInt::zero()),
            Kind::Cyclotomic { phi, .. } => RingElement::Cyclo(vec![BigInt::zero(); phi.len() - 1]),
            Kind::Split { base, group } => RingElement::Split(vec![base.zero(); group.order()]),
        }
    }

    pub fn one(&self) -> RingElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> RingElement {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> RingElement {
        match &*self.0 {
            Kind::PrimeField { p } => RingElement::Mod(reduce_big(n, *p)),
            Kind::FiniteField { p, modulus } => {
                let mut v = vec![0; modulus.len() - 1];
                v[0] = reduce_big(n, *p);
                RingElement::Poly(v)
            }
            Kind::Integers => RingElement::Int(n.clone()),
            Kind::Cyclotomic { phi, .. } => {
                let mut v = vec![BigInt::zero(); phi.len() - 1];
                v[0] = n.clone();
                RingElement::Cyclo(v)
            }
            Kind::Split { base, group } => {
                RingElement::Split(vec![base.from_bigint(n); group.order()])
            }
        }
    }

    /// The class of `x` in a finite field, `ζ_m` in a cyclotomic ring.
    pub fn generator(&self) -> Option<RingElement> {
        match &*self.0 {
            Kind::FiniteField { p, modulus } => {
                Some(RingElement::Poly(self.reduce_fp(&[0, 1], *p, modulus)))
            }
            Kind::Cyclotomic { phi, .. } => {
                Some(RingElement::Cyclo(self.reduce_cyclo(
                    &[BigInt::zero(), BigInt::one()],
                    phi,
                )))
            }
            _ => None,
        }
    }

    /// Builds a finite-field element from (possibly unreduced) ascending
    /// coefficients.
    pub fn from_coefficients(&self, coeffs: &[u64]) -> Result<RingElement, RingError> {
        match &*self.0 {
            Kind::FiniteField { p, modulus } => {
                let v: Vec<u64> = coeffs.iter().map(|c| c % p).collect();
                Ok(RingElement::Poly(self.reduce_fp(&v, *p, modulus)))
            }
            Kind::PrimeField { p } => {
                if coeffs.iter().skip(1).any(|&c| c % p != 0) {
                    return Err(RingError::InvalidElement(
                        "prime field elements are constants".into(),
                    ));
                }
                Ok(RingElement::Mod(coeffs.first().map_or(0, |c| c % p)))
            }
            _ => Err(RingError::WrongRingVariant("finite field")),
        }
    }

    fn reduce_fp(&self, v: &[u64], p: u64, modulus: &[u64]) -> Vec<u64> {
        let n = modulus.len() - 1;
        let mut r = fpoly::rem(v, modulus, p);
        r.resize(n, 0);
        r
    }

    fn reduce_cyclo(&self, v: &[BigInt], phi: &[BigInt]) -> Vec<BigInt> {
        let n = phi.len() - 1;
        let (_, mut r) = zpoly::divrem_monic(v, phi);
        r.resize(n, BigInt::zero());
        r
    }

    /// Whether `e` is a canonical element of this ring.
    pub fn contains(&self, e: &RingElement) -> bool {
        match (&*self.0, e) {
            (Kind::PrimeField { p }, RingElement::Mod(v)) => v < p,
            (Kind::FiniteField { p, modulus }, RingElement::Poly(v)) => {
                v.len() == modulus.len() - 1 && v.iter().all(|c| c < p)
            }
            (Kind::Integers, RingElement::Int(_)) => true,
            (Kind::Cyclotomic { phi, .. }, RingElement::Cyclo(v)) => v.len() == phi.len() - 1,
            (Kind::Split { base, group }, RingElement::Split(v)) => {
                v.len() == group.order() && v.iter().all(|x| base.contains(x))
            }
            _ => false,
        }
    }

    pub fn is_zero(&self, a: &RingElement) -> bool {
        *a == self.zero()
    }

    pub fn is_one(&self, a: &RingElement) -> bool {
        *a == self.one()
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        use RingElement::*;
        match (&*self.0, a, b) {
            (Kind::PrimeField { p }, Mod(x), Mod(y)) => Mod(fpoly::add_mod(*x, *y, *p)),
            (Kind::FiniteField { p, .. }, Poly(x), Poly(y)) => Poly(
                x.iter()
                    .zip(y)
                    .map(|(&s, &t)| fpoly::add_mod(s, t, *p))
                    .collect(),
            ),
            (Kind::Integers, Int(x), Int(y)) => Int(x + y),
            (Kind::Cyclotomic { .. }, Cyclo(x), Cyclo(y)) => {
                Cyclo(x.iter().zip(y).map(|(s, t)| s + t).collect())
            }
            (Kind::Split { base, .. }, Split(x), Split(y)) => {
                Split(x.iter().zip(y).map(|(s, t)| base.add(s, t)).collect())
            }
            _ => panic!("ring element does not belong to {self}"),
        }
    }

    pub fn neg(&self, a: &RingElement) -> RingElement {
        use RingElement::*;
        match (&*self.0, a) {
            (Kind::PrimeField { p }, Mod(x)) => Mod(fpoly::sub_mod(0, *x, *p)),
            (Kind::FiniteField { p, .. }, Poly(x)) => {
                Poly(x.iter().map(|&s| fpoly::sub_mod(0, s, *p)).collect())
            }
            (Kind::Integers, Int(x)) => Int(-x),
            (Kind::Cyclotomic { .. }, Cyclo(x)) => Cyclo(x.iter().map(|s| -s).collect()),
            (Kind::Split { base, .. }, Split(x)) => Split(x.iter().map(|s| base.neg(s)).collect()),
            _ => panic!("ring element does not belong to {self}"),
        }
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> RingElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        use RingElement::*;
        match (&*self.0, a, b) {
            (Kind::PrimeField { p }, Mod(x), Mod(y)) => Mod(fpoly::mul_mod(*x, *y, *p)),
            (Kind::FiniteField { p, modulus }, Poly(x), Poly(y)) => {
                Poly(self.reduce_fp(&fpoly::mul(x, y, *p), *p, modulus))
            }
            (Kind::Integers, Int(x), Int(y)) => Int(x * y),
            (Kind::Cyclotomic { phi, .. }, Cyclo(x), Cyclo(y)) => {
                Cyclo(self.reduce_cyclo(&zpoly::mul(x, y), phi))
            }
            (Kind::Split { base, .. }, Split(x), Split(y)) => {
                Split(x.iter().zip(y).map(|(s, t)| base.mul(s, t)).collect())
            }
            _ => panic!("ring element does not belong to {self}"),
        }
    }

    pub fn pow(&self, a: &RingElement, mut n: u128) -> RingElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Conjugation `ζ ↦ ζ^k` of a cyclotomic element.
    pub fn cyclotomic_conjugate(&self, a: &RingElement, k: u64) -> Result<RingElement, RingError> {
        match (&*self.0, a) {
            (Kind::Cyclotomic { m, phi, .. }, RingElement::Cyclo(x)) => {
                // exponents are taken mod m since Φ_m divides x^m − 1
                let mut v = vec![BigInt::zero(); *m as usize];
                for (i, c) in x.iter().enumerate() {
                    v[((i as u64 * k) % m) as usize] += c;
                }
                Ok(RingElement::Cyclo(self.reduce_cyclo(&v, phi)))
            }
            _ => Err(RingError::WrongRingVariant("cyclotomic integers")),
        }
    }

    /// Product of all non-trivial conjugates, so that `a · cofactor = N(a)`.
    fn norm_cofactor(&self, a: &RingElement) -> RingElement {
        let Kind::Cyclotomic { units, .. } = &*self.0 else {
            unreachable!()
        };
        units
            .iter()
            .filter(|&&k| k != 1 % self.cyclotomic_index().unwrap())
            .fold(self.one(), |acc, &k| {
                self.mul(&acc, &self.cyclotomic_conjugate(a, k).unwrap())
            })
    }

    pub fn is_unit(&self, a: &RingElement) -> bool {
        match (&*self.0, a) {
            (Kind::PrimeField { .. } | Kind::FiniteField { .. }, _) => !self.is_zero(a),
            (Kind::Integers, RingElement::Int(x)) => x.abs().is_one(),
            (Kind::Cyclotomic { .. }, _) => norm_cyclotomic(self, a)
                .map(|n| n.abs().is_one())
                .unwrap_or(false),
            (Kind::Split { base, .. }, RingElement::Split(v)) => v.iter().all(|x| base.is_unit(x)),
            _ => false,
        }
    }

    pub fn invert(&self, a: &RingElement) -> Option<RingElement> {
        use RingElement::*;
        match (&*self.0, a) {
            (Kind::PrimeField { p }, Mod(x)) => fpoly::inv_mod(*x, *p).map(Mod),
            (Kind::FiniteField { p, modulus }, Poly(x)) => {
                if x.iter().all(|&c| c == 0) {
                    return None;
                }
                let (g, s) = fpoly::ext_gcd(x, modulus, *p);
                debug_assert_eq!(g.len(), 1);
                let gi = fpoly::inv_mod(g[0], *p)?;
                let s: Vec<u64> = s.iter().map(|&c| fpoly::mul_mod(c, gi, *p)).collect();
                Some(Poly(self.reduce_fp(&s, *p, modulus)))
            }
            (Kind::Integers, Int(x)) => x.abs().is_one().then(|| Int(x.clone())),
            (Kind::Cyclotomic { .. }, _) => {
                if !self.is_unit(a) {
                    return None;
                }
                self.exact_div(&self.one(), a)
            }
            (Kind::Split { base, .. }, Split(v)) => v
                .iter()
                .map(|x| base.invert(x))
                .collect::<Option<Vec<_>>>()
                .map(Split),
            _ => None,
        }
    }

    /// `a / b` when `b` divides `a` (fields: whenever `b ≠ 0`).
    pub fn exact_div(&self, a: &RingElement, b: &RingElement) -> Option<RingElement> {
        use RingElement::*;
        match (&*self.0, a, b) {
            (Kind::PrimeField { .. } | Kind::FiniteField { .. }, _, _) => {
                self.invert(b).map(|bi| self.mul(a, &bi))
            }
            (Kind::Integers, Int(x), Int(y)) => {
                if y.is_zero() {
                    return None;
                }
                let (q, r) = x.div_rem(y);
                r.is_zero().then_some(Int(q))
            }
            (Kind::Cyclotomic { .. }, Cyclo(_), Cyclo(_)) => {
                if self.is_zero(b) {
                    return None;
                }
                let cof = self.norm_cofactor(b);
                let norm = match self.mul(b, &cof) {
                    Cyclo(v) => v[0].clone(),
                    _ => unreachable!(),
                };
                let Cyclo(num) = self.mul(a, &cof) else {
                    unreachable!()
                };
                num.iter()
                    .map(|c| {
                        let (q, r) = c.div_rem(&norm);
                        r.is_zero().then_some(q)
                    })
                    .collect::<Option<Vec<_>>>()
                    .map(Cyclo)
            }
            (Kind::Split { base, .. }, Split(x), Split(y)) => x
                .iter()
                .zip(y)
                .map(|(s, t)| base.exact_div(s, t))
                .collect::<Option<Vec<_>>>()
                .map(Split),
            _ => None,
        }
    }

    /// The element at position `index` of the canonical enumeration: base-`|R|`
    /// digits with the first coordinate least significant.
    pub fn element_at(&self, mut index: u128) -> Option<RingElement> {
        let card = self.cardinality()?;
        if index >= card {
            return None;
        }
        Some(match &*self.0 {
            Kind::PrimeField { .. } => RingElement::Mod(index as u64),
            Kind::FiniteField { p, modulus } => {
                let mut v = vec![0u64; modulus.len() - 1];
                for c in v.iter_mut() {
                    *c = (index % *p as u128) as u64;
                    index /= *p as u128;
                }
                RingElement::Poly(v)
            }
            Kind::Split { base, group } => {
                let b = base.cardinality()?;
                let mut v = Vec::with_capacity(group.order());
                for _ in 0..group.order() {
                    v.push(base.element_at(index % b)?);
                    index /= b;
                }
                RingElement::Split(v)
            }
            Kind::Integers | Kind::Cyclotomic { .. } => unreachable!(),
        })
    }

    /// All elements in canonical order; `None` for infinite rings.
    pub fn enumerate(&self) -> Option<impl Iterator<Item = RingElement> + '_> {
        let card = self.cardinality()?;
        Some((0..card).map(move |i| self.element_at(i).unwrap()))
    }

    /// A random element; integer coefficients are drawn from `-8..=8`.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> RingElement {
        match &*self.0 {
            Kind::PrimeField { p } => RingElement::Mod(rng.gen_range(0..*p)),
            Kind::FiniteField { p, modulus } => {
                RingElement::Poly((1..modulus.len()).map(|_| rng.gen_range(0..*p)).collect())
            }
            Kind::Integers => RingElement::Int(BigInt::from(rng.gen_range(-8i64..=8))),
            Kind::Cyclotomic { phi, .. } => RingElement::Cyclo(
                (1..phi.len())
                    .map(|_| BigInt::from(rng.gen_range(-8i64..=8)))
                    .collect(),
            ),
            Kind::Split { base, group } => {
                RingElement::Split((0..group.order()).map(|_| base.random(rng)).collect())
            }
        }
    }

    /// Human-readable rendering (`a` for the finite-field generator, `z` for `ζ`).
    pub fn format(&self, e: &RingElement) -> String {
        fn poly<T: fmt::Display + PartialEq>(coeffs: &[T], zero: &T, one: &T, var: &str) -> String {
            let terms: Vec<String> = coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| *c != zero)
                .map(|(i, c)| match i {
                    0 => c.to_string(),
                    _ => {
                        let mon = if i == 1 { var.to_string() } else { format!("{var}^{i}") };
                        if c == one {
                            mon
                        } else {
                            format!("{c}{mon}")
                        }
                    }
                })
                .collect();
            if terms.is_empty() {
                "0".into()
            } else {
                terms.join("+")
            }
        }
        match (&*self.0, e) {
            (Kind::FiniteField { .. }, RingElement::Poly(v)) => poly(v, &0, &1, "a"),
            (Kind::Cyclotomic { .. }, RingElement::Cyclo(v)) => {
                poly(v, &BigInt::zero(), &BigInt::one(), "z").replace("+-", "-")
            }
            (Kind::Split { base, .. }, RingElement::Split(v)) => format!(
                "[{}]",
                v.iter().map(|x| base.format(x)).collect::<Vec<_>>().join(", ")
            ),
            (_, RingElement::Mod(v)) => v.to_string(),
            (_, RingElement::Int(v)) => v.to_string(),
            _ => format!("{e:?}"),
        }
    }
}

fn reduce_big(n: &BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(p));
    r.try_into().expect("residue fits in u64")
}

/// Field norm `N(a) = Res(Φ_m, a)`, computed as the determinant of the
/// Sylvester matrix. `a` is a unit of `Z[ζ_m]` iff `N(a) = ±1`.
pub fn norm_cyclotomic(ring: &Ring, a: &RingElement) -> Result<BigInt, RingError> {
    let (Kind::Cyclotomic { phi, .. }, RingElement::Cyclo(coeffs)) = (&*ring.0, a) else {
        return Err(RingError::WrongRingVariant("cyclotomic integers"));
    };
    let mut a = coeffs.clone();
    zpoly::trim(&mut a);
    if a.is_empty() {
        return Ok(BigInt::zero());
    }
    Ok(resultant(phi, &a))
}

/// Resultant of two nonzero integer polynomials via the Sylvester matrix.
pub(crate) fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let (df, dg) = (f.len() - 1, g.len() - 1);
    let n = df + dg;
    if n == 0 {
        return BigInt::one();
    }
    let z = Ring::integers();
    let mut m = Matrix::zero(&z, n, n);
    for i in 0..dg {
        for (j, c) in f.iter().rev().enumerate() {
            m.set(i, i + j, RingElement::Int(c.clone()));
        }
    }
    for i in 0..df {
        for (j, c) in g.iter().rev().enumerate() {
            m.set(dg + i, i + j, RingElement::Int(c.clone()));
        }
    }
    match determinant(&z, &m).expect("square integer matrix") {
        RingElement::Int(d) => d,
        _ => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn int(n: i64) -> RingElement {
        RingElement::Int(BigInt::from(n))
    }

    fn cyc(v: &[i64]) -> RingElement {
        RingElement::Cyclo(v.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn prime_field_arithmetic() {
        let f5 = Ring::prime_field(5).unwrap();
        assert_eq!(f5.mul(&f5.from_int(2), &f5.from_int(3)), f5.one());
        assert_eq!(f5.enumerate().unwrap().count(), 5);
        assert_eq!(f5.invert(&f5.from_int(2)), Some(f5.from_int(3)));
        assert_eq!(f5.from_int(-1), RingElement::Mod(4));
    }

    #[test]
    fn rejects_bad_moduli() {
        assert_eq!(Ring::prime_field(4), Err(RingError::NonPrimeModulus(4)));
        assert_eq!(Ring::prime_field(1), Err(RingError::NonPrimeModulus(1)));
        assert!(matches!(
            Ring::finite_field(2, &[0, 0, 1]),
            Err(RingError::ReduciblePolynomial(_, 2))
        ));
        assert!(matches!(
            Ring::finite_field(6, &[1, 1, 1]),
            Err(RingError::NonPrimeModulus(6))
        ));
    }

    #[test]
    fn gf4_generator_squares_to_generator_plus_one() {
        // α² ≡ α + 1 mod x² + x + 1
        let gf4 = Ring::finite_field(2, &[1, 1, 1]).unwrap();
        let a = gf4.generator().unwrap();
        assert_eq!(gf4.mul(&a, &a), RingElement::Poly(vec![1, 1]));
        assert_eq!(gf4.cardinality(), Some(4));
    }

    #[test]
    fn finite_field_inverses() {
        let gf27 = Ring::finite_field(3, &[1, 2, 0, 1]).unwrap();
        for x in gf27.enumerate().unwrap().skip(1) {
            let xi = gf27.invert(&x).unwrap();
            assert!(gf27.is_one(&gf27.mul(&x, &xi)));
        }
        assert_eq!(gf27.invert(&gf27.zero()), None);
    }

    #[test]
    fn cyclotomic_norms() {
        let z3 = Ring::cyclotomic(3).unwrap();
        assert_eq!(norm_cyclotomic(&z3, &z3.one()).unwrap(), BigInt::from(1));
        assert_eq!(norm_cyclotomic(&z3, &z3.generator().unwrap()).unwrap(), BigInt::from(1));
        assert_eq!(norm_cyclotomic(&z3, &z3.from_int(2)).unwrap(), BigInt::from(4));
        // N(1 - ζ_3) = Φ_3(1) = 3
        assert_eq!(norm_cyclotomic(&z3, &cyc(&[1, -1])).unwrap(), BigInt::from(3));
        assert_eq!(
            norm_cyclotomic(&Ring::integers(), &int(3)),
            Err(RingError::WrongRingVariant("cyclotomic integers"))
        );
    }

    #[test]
    fn cyclotomic_norm_matches_conjugate_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for m in [3u64, 4, 5, 7, 8, 9, 12] {
            let r = Ring::cyclotomic(m).unwrap();
            for _ in 0..10 {
                let a = r.random(&mut rng);
                let RingElement::Cyclo(prod) = r.mul(&a, &r.norm_cofactor(&a)) else {
                    unreachable!()
                };
                assert!(prod[1..].iter().all(|c| c.is_zero()));
                assert_eq!(norm_cyclotomic(&r, &a).unwrap(), prod[0], "m = {m}");
            }
        }
    }

    #[test]
    fn cyclotomic_units() {
        let z5 = Ring::cyclotomic(5).unwrap();
        let z = z5.generator().unwrap();
        // 1 + ζ is a unit of Z[ζ_5]
        let u = z5.add(&z5.one(), &z);
        assert!(z5.is_unit(&u));
        let ui = z5.invert(&u).unwrap();
        assert!(z5.is_one(&z5.mul(&u, &ui)));
        assert!(!z5.is_unit(&z5.sub(&z5.one(), &z)));
        assert_eq!(z5.pow(&z, 5), z5.one());
    }

    #[test]
    fn integers_units() {
        let z = Ring::integers();
        assert!(z.is_unit(&int(-1)));
        assert!(!z.is_unit(&int(2)));
        assert_eq!(z.invert(&int(-1)), Some(int(-1)));
        assert_eq!(z.exact_div(&int(6), &int(3)), Some(int(2)));
        assert_eq!(z.exact_div(&int(7), &int(3)), None);
    }

    #[test]
    fn split_ring_is_pointwise() {
        let f3 = Ring::prime_field(3).unwrap();
        let s = Ring::split(&f3, &AbelianGroup::cyclic(3));
        assert_eq!(s.cardinality(), Some(27));
        let a = RingElement::Split(vec![RingElement::Mod(1), RingElement::Mod(2), RingElement::Mod(0)]);
        assert!(!s.is_unit(&a));
        let b = RingElement::Split(vec![RingElement::Mod(1), RingElement::Mod(2), RingElement::Mod(2)]);
        assert_eq!(s.invert(&b), Some(b.clone()));
        assert_eq!(s.element_at(1).unwrap(), RingElement::Split(vec![
            RingElement::Mod(1),
            RingElement::Mod(0),
            RingElement::Mod(0)
        ]));
    }

    fn backends() -> Vec<Ring> {
        vec![
            Ring::prime_field(7).unwrap(),
            Ring::finite_field(2, &[1, 1, 0, 1]).unwrap(),
            Ring::finite_field(3, &[1, 0, 1]).unwrap(),
            Ring::integers(),
            Ring::cyclotomic(3).unwrap(),
            Ring::cyclotomic(8).unwrap(),
            Ring::split(&Ring::prime_field(5).unwrap(), &AbelianGroup::cyclic(3)),
            Ring::split(&Ring::integers(), &AbelianGroup::new(vec![2, 2]).unwrap()),
        ]
    }

    proptest! {
        #[test]
        fn ring_axioms(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for r in backends() {
                let (a, b, c) = (r.random(&mut rng), r.random(&mut rng), r.random(&mut rng));
                prop_assert!(r.contains(&a));
                prop_assert_eq!(r.add(&r.add(&a, &b), &c), r.add(&a, &r.add(&b, &c)));
                prop_assert_eq!(r.mul(&a, &b), r.mul(&b, &a));
                prop_assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
                prop_assert_eq!(r.mul(&a, &r.add(&b, &c)), r.add(&r.mul(&a, &b), &r.mul(&a, &c)));
                prop_assert_eq!(r.mul(&r.one(), &a), a.clone());
                prop_assert!(r.is_zero(&r.add(&a, &r.neg(&a))));
                if let Some(ai) = r.invert(&a) {
                    prop_assert!(r.is_one(&r.mul(&a, &ai)));
                }
            }
        }

        #[test]
        fn norm_is_multiplicative(seed in any::<u64>(), m in 1u64..=12) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = Ring::cyclotomic(m).unwrap();
            let (a, b) = (r.random(&mut rng), r.random(&mut rng));
            let n = |x: &RingElement| norm_cyclotomic(&r, x).unwrap();
            prop_assert_eq!(n(&r.mul(&a, &b)), n(&a) * n(&b));
        }

        #[test]
        fn json_round_trip(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for r in backends() {
                let a = r.random(&mut rng);
                let text = serde_json::to_string(&r.to_json(&a)).unwrap();
                let back = r.from_json(&serde_json::from_str(&text).unwrap()).unwrap();
                prop_assert_eq!(&back, &a);
                let desc = serde_json::to_string(&r.descriptor()).unwrap();
                let rd: RingDescriptor = serde_json::from_str(&desc).unwrap();
                prop_assert_eq!(Ring::new(&rd).unwrap(), r.clone());
            }
        }
    }
}
