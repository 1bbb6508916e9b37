//! Brute-force normal basis check, independent of the group ring: the orbit
//! of `u` is a basis iff its coordinate vectors have full rank over `GF(p)`.
//!
//! Over finite fields the orbit is recomputed by iterated `p`-th powers rather
//! than through the extension's Frobenius table, and the rank comes from a
//! plain `u64` elimination.

use crate::galois::Extension;
use crate::rings::{RingDescriptor, RingElement};

/// Rank of a matrix over `GF(p)` given as rows.
pub fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][c].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = inverse_mod(rows[rank][c], p);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn inverse_mod(a: u64, p: u64) -> u64 {
    // Fermat; p is prime
    let (mut base, mut exp, mut acc) = (a % p, p - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn coords(e: &RingElement) -> Option<Vec<u64>> {
    match e {
        RingElement::Poly(c) => Some(c.clone()),
        RingElement::Split(v) => v
            .iter()
            .map(|x| match x {
                RingElement::Mod(c) => Some(*c),
                _ => None,
            })
            .collect(),
        _ => None,
    }
}

/// The orbit `(u^g)_g` in canonical group order.
fn orbit(e: &Extension, u: &RingElement) -> Vec<RingElement> {
    let ring = e.ring();
    match ring.descriptor() {
        RingDescriptor::FiniteField { p, .. } => (0..e.degree())
            .map(|g| {
                // the ambient group is Cₙ with the generator acting as Frobenius
                let k = e.group().element(g).coords()[0];
                (0..k).fold(u.clone(), |x, _| ring.pow(&x, p as u128))
            })
            .collect(),
        _ => (0..e.degree()).map(|g| e.act(g, u)).collect(),
    }
}

/// Whether the orbit of `u` is linearly independent over the base field,
/// hence (by counting) an `R`-basis of `S`. `None` unless the base ring is a
/// prime field.
pub fn orbit_is_basis(e: &Extension, u: &RingElement) -> Option<bool> {
    let RingDescriptor::PrimeField { p } = e.base_ring().descriptor() else {
        return None;
    };
    let rows: Option<Vec<Vec<u64>>> = orbit(e, u).iter().map(coords).collect();
    Some(rank_mod_p(rows?, p) == e.degree())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        assert_eq!(rank_mod_p(vec![vec![1, 0], vec![0, 1]], 2), 2);
        assert_eq!(rank_mod_p(vec![vec![1, 1], vec![1, 1]], 2), 1);
        assert_eq!(rank_mod_p(vec![vec![1, 2], vec![2, 1]], 3), 1);
        assert_eq!(rank_mod_p(vec![vec![1, 2], vec![2, 1]], 5), 2);
        assert_eq!(rank_mod_p(vec![vec![0, 0, 0]], 7), 0);
    }

    #[test]
    fn inverses() {
        for p in [2, 3, 5, 7, 11] {
            for a in 1..p {
                assert_eq!(a * inverse_mod(a, p) % p, 1);
            }
        }
    }

    #[test]
    fn gf4_orbits() {
        let e = Extension::finite_field(2, &[1, 1, 1]).unwrap();
        let r = e.ring();
        let a = r.generator().unwrap();
        assert_eq!(orbit_is_basis(&e, &a), Some(true));
        assert_eq!(orbit_is_basis(&e, &r.one()), Some(false));
        assert_eq!(orbit_is_basis(&e, &r.zero()), Some(false));
    }
}
