//! Integer polynomials and cyclotomic polynomials.

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub(crate) fn trim(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

pub(crate) fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Division by a monic polynomial; returns `(quotient, remainder)`.
pub(crate) fn divrem_monic(a: &[BigInt], m: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    let dm = m.len() - 1;
    debug_assert!(m[dm].is_one());
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() <= dm {
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); r.len() - dm];
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = r.last().unwrap().clone();
        for (j, mj) in m.iter().enumerate() {
            r[shift + j] -= &c * mj;
        }
        q[shift] = c;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub(crate) fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    out.sort_unstable();
    out
}

/// Φ_m by recursive division: Φ_m = (x^m − 1) / ∏_{d | m, d < m} Φ_d.
pub fn cyclotomic_polynomial(m: u64) -> Vec<BigInt> {
    assert!(m >= 1, "cyclotomic index must be positive");
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = BigInt::from(-1);
    num[m as usize] = BigInt::one();
    for d in divisors(m) {
        if d == m {
            continue;
        }
        let (q, r) = divrem_monic(&num, &cyclotomic_polynomial(d));
        debug_assert!(r.is_empty());
        num = q;
    }
    num
}
