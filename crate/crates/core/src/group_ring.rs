//! The group ring `SG` of a finite abelian group over a coefficient ring.
//!
//! Elements are dense coefficient vectors indexed by the canonical group
//! order. Besides ring arithmetic this module provides the involution `*`
//! (`g ↦ g⁻¹`), the exponent-halving automorphism `ψ` (`g² ↦ g`, odd
//! exponent only), the augmentation, exact inversion, and two diagnostics:
//! the regular trace and the torsion order.

use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::groups::{AbelianGroup, GroupError, GroupElement};
use crate::rings::{solve_linear, Matrix, Ring, RingDescriptor, RingElement, RingError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupRingError {
    #[error("group ring mismatch: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("invalid group ring element: {0}")]
    Parse(String),
}

#[derive(Clone, PartialEq, Eq)]
pub struct GroupRingElement {
    ring: Ring,
    group: AbelianGroup,
    coeffs: Vec<RingElement>,
}

impl fmt::Debug for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupRingElement[{} {}]({self})", self.ring, self.group)
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.ring.is_zero(c))
            .map(|(i, c)| format!("({})*{}", self.ring.format(c), self.group.element(i)))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl GroupRingElement {
    pub fn new(
        ring: &Ring,
        group: &AbelianGroup,
        coeffs: Vec<RingElement>,
    ) -> Result<Self, GroupRingError> {
        if coeffs.len() != group.order() {
            return Err(GroupRingError::Mismatch(format!(
                "{} coefficients for a group of order {}",
                coeffs.len(),
                group.order()
            )));
        }
        if let Some(c) = coeffs.iter().find(|c| !ring.contains(c)) {
            return Err(GroupRingError::Mismatch(format!("{c:?} is not in {ring}")));
        }
        Ok(GroupRingElement {
            ring: ring.clone(),
            group: group.clone(),
            coeffs,
        })
    }

    pub(crate) fn from_fn(
        ring: &Ring,
        group: &AbelianGroup,
        f: impl FnMut(usize) -> RingElement,
    ) -> Self {
        GroupRingElement {
            ring: ring.clone(),
            group: group.clone(),
            coeffs: (0..group.order()).map(f).collect(),
        }
    }

    pub fn zero(ring: &Ring, group: &AbelianGroup) -> Self {
        Self::from_fn(ring, group, |_| ring.zero())
    }

    pub fn one(ring: &Ring, group: &AbelianGroup) -> Self {
        Self::monomial(ring, group, AbelianGroup::IDENTITY, ring.one())
    }

    /// `coeff · g` for the group element with index `g`.
    pub fn monomial(ring: &Ring, group: &AbelianGroup, g: usize, coeff: RingElement) -> Self {
        let mut x = Self::zero(ring, group);
        x.coeffs[g] = coeff;
        x
    }

    pub fn group_element(ring: &Ring, group: &AbelianGroup, g: &GroupElement) -> Result<Self, GroupRingError> {
        Ok(Self::monomial(ring, group, group.index_of(g)?, ring.one()))
    }

    pub fn random<R: rand::Rng + ?Sized>(ring: &Ring, group: &AbelianGroup, rng: &mut R) -> Self {
        Self::from_fn(ring, group, |_| ring.random(rng))
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn coeffs(&self) -> &[RingElement] {
        &self.coeffs
    }

    pub fn coeff(&self, g: usize) -> &RingElement {
        &self.coeffs[g]
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(&self.ring, &self.group)
    }

    fn check_same(&self, other: &Self) -> Result<(), GroupRingError> {
        if self.group != other.group {
            return Err(GroupRingError::Mismatch(format!(
                "groups {} and {}",
                self.group, other.group
            )));
        }
        if self.ring != other.ring {
            return Err(GroupRingError::Mismatch(format!(
                "rings {} and {}",
                self.ring, other.ring
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, GroupRingError> {
        self.check_same(other)?;
        Ok(Self::from_fn(&self.ring, &self.group, |i| {
            self.ring.add(&self.coeffs[i], &other.coeffs[i])
        }))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, GroupRingError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(&self.ring, &self.group, |i| self.ring.neg(&self.coeffs[i]))
    }

    /// Scalar multiplication by an element of the coefficient ring.
    pub fn scale(&self, s: &RingElement) -> Result<Self, GroupRingError> {
        if !self.ring.contains(s) {
            return Err(GroupRingError::Mismatch(format!("{s:?} is not in {}", self.ring)));
        }
        Ok(Self::from_fn(&self.ring, &self.group, |i| {
            self.ring.mul(s, &self.coeffs[i])
        }))
    }

    /// Convolution `(xy)_m = Σ_{gh = m} x_g y_h`.
    pub fn mul(&self, other: &Self) -> Result<Self, GroupRingError> {
        self.check_same(other)?;
        let r = &self.ring;
        let mut out = vec![r.zero(); self.group.order()];
        for (g, x) in self.coeffs.iter().enumerate() {
            if r.is_zero(x) {
                continue;
            }
            for (h, y) in other.coeffs.iter().enumerate() {
                if r.is_zero(y) {
                    continue;
                }
                let m = self.group.op(g, h);
                out[m] = r.add(&out[m], &r.mul(x, y));
            }
        }
        Ok(GroupRingElement {
            ring: r.clone(),
            group: self.group.clone(),
            coeffs: out,
        })
    }

    pub fn pow(&self, n: u64) -> Self {
        let mut acc = Self::one(&self.ring, &self.group);
        for _ in 0..n {
            acc = acc.mul(self).expect("same group ring");
        }
        acc
    }

    /// The involution `(Σ a_g g)* = Σ a_g g⁻¹`.
    pub fn star(&self) -> Self {
        Self::from_fn(&self.ring, &self.group, |g| {
            self.coeffs[self.group.inv(g)].clone()
        })
    }

    /// The ring map `SG → S`, `Σ a_g g ↦ Σ a_g`.
    pub fn augmentation(&self) -> RingElement {
        self.coeffs
            .iter()
            .fold(self.ring.zero(), |acc, c| self.ring.add(&acc, c))
    }

    /// Matrix of left multiplication by `self` in the basis `G`: column `h`
    /// holds the coefficients of `self · h`.
    pub fn multiplication_matrix(&self) -> Matrix {
        let g = &self.group;
        Matrix::from_fn(g.order(), g.order(), |m, h| {
            self.coeffs[g.op(m, g.inv(h))].clone()
        })
    }

    /// The inverse in `SG`, or `None` if `self` is not a unit. The result is
    /// checked by multiplication before it is returned.
    pub fn invert(&self) -> Result<Option<Self>, GroupRingError> {
        // augmentation is a ring map, so a unit must augment to a unit
        if !self.ring.is_unit(&self.augmentation()) {
            return Ok(None);
        }
        let one = Self::one(&self.ring, &self.group);
        let target = Matrix::column(one.coeffs.clone());
        let Some(sol) = solve_linear(&self.ring, &self.multiplication_matrix(), &target)? else {
            return Ok(None);
        };
        let inv = GroupRingElement {
            ring: self.ring.clone(),
            group: self.group.clone(),
            coeffs: sol.entries().to_vec(),
        };
        if !self.mul(&inv)?.is_one() || !inv.mul(self)?.is_one() {
            return Err(GroupRingError::Internal(format!(
                "solver returned a non-inverse for {self}"
            )));
        }
        Ok(Some(inv))
    }

    pub fn is_unit(&self) -> Result<bool, GroupRingError> {
        Ok(self.invert()?.is_some())
    }

    /// The automorphism `ψ` induced by `g² ↦ g`: the coefficient of `g` moves
    /// to `g^k` with `2k ≡ 1` modulo the exponent.
    pub fn apply_psi(&self) -> Result<Self, GroupRingError> {
        let g = &self.group;
        let k = g.half_exponent()? as i64;
        let mut out = vec![self.ring.zero(); g.order()];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[g.pow(i, k)] = c.clone();
        }
        Ok(GroupRingElement {
            ring: self.ring.clone(),
            group: g.clone(),
            coeffs: out,
        })
    }

    /// Trace of the left-regular representation, `|G| · a_1`.
    pub fn regular_trace(&self) -> RingElement {
        let n = self.ring.from_int(self.group.order() as i64);
        self.ring.mul(&n, &self.coeffs[AbelianGroup::IDENTITY])
    }

    /// Smallest `n ≤ bound` with `selfⁿ = 1`.
    pub fn torsion_order(&self, bound: u64) -> Option<u64> {
        let mut acc = self.clone();
        for n in 1..=bound {
            if acc.is_one() {
                return Some(n);
            }
            acc = acc.mul(self).expect("same group ring");
        }
        None
    }

    /// `{"group": [...], "ring": <descriptor>, "coeffs": [...]}`.
    pub fn to_json(&self) -> Value {
        json!({
            "group": self.group,
            "ring": self.ring.descriptor(),
            "coeffs": self.coeffs.iter().map(|c| self.ring.to_json(c)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, GroupRingError> {
        let field = |k: &str| {
            v.get(k)
                .ok_or_else(|| GroupRingError::Parse(format!("missing field `{k}`")))
        };
        let group: AbelianGroup = serde_json::from_value(field("group")?.clone())
            .map_err(|e| GroupRingError::Parse(format!("group: {e}")))?;
        let desc: RingDescriptor = serde_json::from_value(field("ring")?.clone())
            .map_err(|e| GroupRingError::Parse(format!("ring: {e}")))?;
        let ring = Ring::new(&desc)?;
        let coeffs = field("coeffs")?
            .as_array()
            .ok_or_else(|| GroupRingError::Parse("`coeffs` must be an array".into()))?
            .iter()
            .map(|c| ring.from_json(c))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(&ring, &group, coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn zc(n: u64, v: &[i64]) -> GroupRingElement {
        let z = Ring::integers();
        let coeffs = v.iter().map(|&c| z.from_int(c)).collect();
        GroupRingElement::new(&z, &AbelianGroup::cyclic(n), coeffs).unwrap()
    }

    /// Brute-force convolution over an explicit table of index pairs.
    fn convolve_oracle(x: &[i64], y: &[i64], n: usize) -> Vec<i64> {
        let mut out = vec![0; n];
        for g in 0..n {
            for h in 0..n {
                out[(g + h) % n] += x[g] * y[h];
            }
        }
        out
    }

    #[test]
    fn identity_is_neutral() {
        let x = zc(3, &[4, -1, 7]);
        let one = GroupRingElement::one(x.ring(), x.group());
        assert_eq!(one.mul(&x).unwrap(), x);
    }

    #[test]
    fn nilpotent_in_characteristic_two() {
        let f2 = Ring::prime_field(2).unwrap();
        let c2 = AbelianGroup::cyclic(2);
        let x = GroupRingElement::new(&f2, &c2, vec![f2.one(), f2.one()]).unwrap();
        assert_eq!(x.mul(&x).unwrap(), GroupRingElement::zero(&f2, &c2));
        assert_eq!(x.invert().unwrap(), None);
    }

    #[test]
    fn convolution_matches_table() {
        let (x, y) = ([1, 1, 0], [1, 0, 1]);
        assert_eq!(zc(3, &x).mul(&zc(3, &y)).unwrap(), zc(3, &convolve_oracle(&x, &y, 3)));
        assert_eq!(convolve_oracle(&x, &y, 3), vec![2, 1, 1]);
        let (x, y) = ([2, -1, 3, 0, 5], [0, 4, -2, 1, 1]);
        assert_eq!(zc(5, &x).mul(&zc(5, &y)).unwrap(), zc(5, &convolve_oracle(&x, &y, 5)));
    }

    #[test]
    fn star_inverts_group_elements() {
        let x = zc(5, &[0, 3, 0, 0, 0]);
        assert_eq!(x.star(), zc(5, &[0, 0, 0, 0, 3]));
        assert_eq!(zc(5, &[1, 0, 0, 0, 0]).star(), zc(5, &[1, 0, 0, 0, 0]));
    }

    #[test]
    fn invert_group_element() {
        let g = zc(3, &[0, 1, 0]);
        assert_eq!(g.invert().unwrap(), Some(zc(3, &[0, 0, 1])));
    }

    /// Inverse of a 3×3 integer matrix by cofactors, if its determinant is ±1.
    fn adjugate_inverse(m: [[i64; 3]; 3]) -> Option<[[i64; 3]; 3]> {
        let cof = |i: usize, j: usize| {
            let r: Vec<usize> = (0..3).filter(|&x| x != i).collect();
            let c: Vec<usize> = (0..3).filter(|&x| x != j).collect();
            let minor = m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]];
            if (i + j).is_multiple_of(2) { minor } else { -minor }
        };
        let det: i64 = (0..3).map(|j| m[0][j] * cof(0, j)).sum();
        if det.abs() != 1 {
            return None;
        }
        let mut inv = [[0; 3]; 3];
        for (i, row) in inv.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = cof(j, i) * det;
            }
        }
        Some(inv)
    }

    #[test]
    fn integral_group_ring_inverse_matches_adjugate() {
        for v in [[1, -1, 1], [0, 1, 0], [-1, 0, 0], [2, 0, -1], [1, 1, -1], [0, 0, -1], [3, -1, -1]] {
            let x = zc(3, &v);
            // column h of the multiplication matrix is x·g^h
            let mut m = [[0i64; 3]; 3];
            for (r, row) in m.iter_mut().enumerate() {
                for (h, e) in row.iter_mut().enumerate() {
                    *e = v[(3 + r - h) % 3];
                }
            }
            let expected = adjugate_inverse(m).map(|inv| zc(3, &[inv[0][0], inv[1][0], inv[2][0]]));
            assert_eq!(x.invert().unwrap(), expected, "x = {v:?}");
        }
    }

    #[test]
    fn nontrivial_unit_of_zc5() {
        // (g + g⁴ − 1)(g² + g³ − 1) = 1 in ZC₅
        let u = zc(5, &[-1, 1, 0, 0, 1]);
        let w = zc(5, &[-1, 0, 1, 1, 0]);
        assert_eq!(u.mul(&w).unwrap(), zc(5, &[1, 0, 0, 0, 0]));
        assert_eq!(u.invert().unwrap(), Some(w));
        assert_eq!(u.torsion_order(10), None);
    }

    #[test]
    fn psi_on_c3() {
        let f2 = Ring::prime_field(2).unwrap();
        let c3 = AbelianGroup::cyclic(3);
        let g2 = GroupRingElement::monomial(&f2, &c3, 2, f2.one());
        assert_eq!(g2.apply_psi().unwrap(), GroupRingElement::monomial(&f2, &c3, 1, f2.one()));
        let one = GroupRingElement::one(&f2, &c3);
        assert_eq!(one.apply_psi().unwrap(), one);
        let c2 = AbelianGroup::cyclic(2);
        assert!(matches!(
            GroupRingElement::one(&f2, &c2).apply_psi(),
            Err(GroupRingError::Group(GroupError::EvenExponent(2)))
        ));
    }

    #[test]
    fn diagnostics() {
        assert_eq!(zc(3, &[1, 0, 0]).regular_trace(), Ring::integers().from_int(3));
        assert_eq!(zc(3, &[0, 1, 0]).regular_trace(), Ring::integers().zero());
        assert_eq!(zc(3, &[1, 0, 0]).torsion_order(10), Some(1));
        assert_eq!(zc(2, &[-1, 0]).torsion_order(10), Some(2));
        assert_eq!(zc(2, &[1, 1]).torsion_order(10), None);
        assert_eq!(zc(3, &[0, -1, 0]).torsion_order(10), Some(6));
    }

    #[test]
    fn mismatch_errors() {
        let x = zc(3, &[1, 0, 0]);
        assert!(matches!(x.mul(&zc(2, &[1, 0])), Err(GroupRingError::Mismatch(_))));
        let z = Ring::integers();
        assert!(GroupRingElement::new(&z, &AbelianGroup::cyclic(3), vec![z.one()]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let r = Ring::cyclotomic(3).unwrap();
        let x = GroupRingElement::new(
            &r,
            &AbelianGroup::cyclic(3),
            vec![r.generator().unwrap(), r.zero(), r.from_bigint(&BigInt::from(10).pow(30))],
        )
        .unwrap();
        let text = serde_json::to_string(&x.to_json()).unwrap();
        let back = GroupRingElement::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, x);
        assert_eq!(serde_json::to_string(&back.to_json()).unwrap(), text);
    }

    fn backends() -> Vec<(Ring, AbelianGroup)> {
        vec![
            (Ring::prime_field(2).unwrap(), AbelianGroup::cyclic(5)),
            (Ring::prime_field(3).unwrap(), AbelianGroup::new(vec![2, 2]).unwrap()),
            (Ring::finite_field(2, &[1, 1, 1]).unwrap(), AbelianGroup::cyclic(3)),
            (Ring::integers(), AbelianGroup::cyclic(4)),
            (Ring::cyclotomic(3).unwrap(), AbelianGroup::cyclic(3)),
            (
                Ring::split(&Ring::prime_field(2).unwrap(), &AbelianGroup::cyclic(2)),
                AbelianGroup::cyclic(3),
            ),
        ]
    }

    proptest! {
        #[test]
        fn star_is_an_anti_automorphism(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for (r, g) in backends() {
                let x = GroupRingElement::random(&r, &g, &mut rng);
                let y = GroupRingElement::random(&r, &g, &mut rng);
                prop_assert_eq!(x.mul(&y).unwrap().star(), y.star().mul(&x.star()).unwrap());
                prop_assert_eq!(x.star().star(), x.clone());
                prop_assert_eq!(x.mul(&y).unwrap().augmentation(), r.mul(&x.augmentation(), &y.augmentation()));
                prop_assert_eq!(x.add(&y).unwrap().regular_trace(), r.add(&x.regular_trace(), &y.regular_trace()));
            }
        }

        #[test]
        fn inverses_are_two_sided(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for (r, g) in backends() {
                let x = GroupRingElement::random(&r, &g, &mut rng);
                if let Some(y) = x.invert().unwrap() {
                    prop_assert!(x.mul(&y).unwrap().is_one());
                    prop_assert!(y.mul(&x).unwrap().is_one());
                    prop_assert!(r.is_unit(&x.augmentation()));
                    if let Some(n) = x.torsion_order(2 * g.order() as u64) {
                        prop_assert_eq!(y.torsion_order(n), Some(n));
                    }
                }
            }
        }

        #[test]
        fn psi_is_a_ring_automorphism(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for n in [3u64, 5, 9] {
                for r in [Ring::prime_field(2).unwrap(), Ring::integers()] {
                    let g = AbelianGroup::cyclic(n);
                    let x = GroupRingElement::random(&r, &g, &mut rng);
                    let y = GroupRingElement::random(&r, &g, &mut rng);
                    prop_assert_eq!(
                        x.mul(&y).unwrap().apply_psi().unwrap(),
                        x.apply_psi().unwrap().mul(&y.apply_psi().unwrap()).unwrap()
                    );
                    prop_assert_eq!(x.star().apply_psi().unwrap(), x.apply_psi().unwrap().star());
                }
            }
        }
    }
}
