//! Normal basis generators via the group ring.
//!
//! For `u ∈ S` let `U = Σ_g u^g g⁻¹ ∈ SG`. Then `u` generates a normal basis
//! of `S/R` exactly when `U` is a unit, and the inverse of `U` has the shape
//! `Σ_g w^g g` where `w` generates the trace-dual basis. For abelian groups of
//! odd order the unit `C = ψ(UW)` satisfies `CC* = 1`, and its identity
//! coefficient generates a self-dual normal basis.
//!
//! Every structural fact used here is re-checked at runtime; a failed check is
//! reported as [`NormalBasisError::Internal`].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::galois::{Extension, GaloisError};
use crate::group_ring::{GroupRingElement, GroupRingError};
use crate::groups::{AbelianGroup, GroupError, Subgroup};
use crate::rings::{Matrix, RingElement};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NormalBasisError {
    #[error("NotAGenerator: {0}")]
    NotAGenerator(String),
    #[error("EvenExponent: group exponent {0} is even")]
    EvenExponent(u64),
    #[error("NotASubgroup: {0}")]
    NotASubgroup(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl From<GroupError> for NormalBasisError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::EvenExponent(x) => NormalBasisError::EvenExponent(x),
            GroupError::NotASubgroup(m) => NormalBasisError::NotASubgroup(m),
            other => NormalBasisError::Internal(other.to_string()),
        }
    }
}

impl From<GroupRingError> for NormalBasisError {
    fn from(e: GroupRingError) -> Self {
        match e {
            GroupRingError::Group(g) => g.into(),
            other => NormalBasisError::Internal(other.to_string()),
        }
    }
}

impl From<GaloisError> for NormalBasisError {
    fn from(e: GaloisError) -> Self {
        match e {
            GaloisError::Group(g) => g.into(),
            other => NormalBasisError::Internal(other.to_string()),
        }
    }
}

fn internal<T>(msg: impl Into<String>) -> Result<T, NormalBasisError> {
    Err(NormalBasisError::Internal(msg.into()))
}

/// `U = Σ_g u^g g⁻¹`.
pub fn criterion_unit(e: &Extension, u: &RingElement) -> GroupRingElement {
    let g = e.group();
    let mut coeffs = vec![e.ring().zero(); g.order()];
    for x in 0..g.order() {
        coeffs[g.inv(x)] = e.act(x, u);
    }
    GroupRingElement::new(e.ring(), g, coeffs).expect("orbit lies in the extension ring")
}

fn invert_criterion(e: &Extension, u: &RingElement) -> Result<(GroupRingElement, GroupRingElement), NormalBasisError> {
    if !e.contains(u) {
        return Err(NormalBasisError::NotAGenerator(format!(
            "{} is not in the extension ring",
            e.ring().format(u)
        )));
    }
    let unit = criterion_unit(e, u);
    match unit.invert()? {
        Some(inv) => Ok((unit, inv)),
        None => Err(NormalBasisError::NotAGenerator(format!(
            "{} does not generate a normal basis",
            e.ring().format(u)
        ))),
    }
}

pub fn is_nb_generator(e: &Extension, u: &RingElement) -> bool {
    e.contains(u) && matches!(criterion_unit(e, u).invert(), Ok(Some(_)))
}

/// Reads `w` off `U⁻¹ = Σ w^g g`, checking that shape.
fn dual_from_inverse(e: &Extension, inv: &GroupRingElement) -> Result<RingElement, NormalBasisError> {
    let w = inv.coeff(AbelianGroup::IDENTITY).clone();
    for g in 0..e.degree() {
        if *inv.coeff(g) != e.act(g, &w) {
            return internal(format!(
                "inverse coefficient at {} is not a conjugate of its identity coefficient",
                e.group().element(g)
            ));
        }
    }
    Ok(w)
}

/// The generator `w` of the trace-dual basis: `tr(u^g w^h) = δ_{g,h}`.
pub fn dual_generator(e: &Extension, u: &RingElement) -> Result<RingElement, NormalBasisError> {
    let (_, inv) = invert_criterion(e, u)?;
    let w = dual_from_inverse(e, &inv)?;
    if !e.galois_certificate(u, &w) {
        return internal("dual generator fails the Galois certificate");
    }
    Ok(w)
}

/// A generator `c` of a self-dual normal basis, built as the identity
/// coefficient of `C = ψ(UW)`. Requires a group of odd exponent.
pub fn self_dualize(e: &Extension, u: &RingElement) -> Result<RingElement, NormalBasisError> {
    e.group().half_exponent()?;
    let (unit, inv) = invert_criterion(e, u)?;
    let w = dual_from_inverse(e, &inv)?;
    let w_unit = criterion_unit(e, &w);
    if !unit.mul(&w_unit.star())?.is_one() {
        return internal("U W* is not the identity");
    }

    let c_unit = unit.mul(&w_unit)?.apply_psi()?;
    let c = c_unit.coeff(AbelianGroup::IDENTITY).clone();

    if !c_unit.mul(&c_unit.star())?.is_one() {
        return internal("C C* is not the identity");
    }
    if c_unit != criterion_unit(e, &c) {
        return internal("C is not the criterion unit of its identity coefficient");
    }
    let r = e.ring();
    let g = e.group();
    let direct = (0..g.order()).fold(r.zero(), |acc, h| {
        r.add(&acc, &r.mul(&e.act(h, u), &e.act(g.inv(h), &w)))
    });
    if direct != c {
        return internal("identity coefficient of C disagrees with the direct convolution");
    }
    if !gram_matrix(e, &c)?.is_identity(e.base_ring()) {
        return internal("Gram matrix of c is not the identity");
    }
    if !is_nb_generator(e, &c) {
        return internal("c does not generate a normal basis");
    }
    Ok(c)
}

/// Pushes a generator of `S/R` down to `S^H/R`: returns the fixed-subring
/// extension and `v = Σ_{h ∈ H} u^h`.
pub fn descend(
    e: &Extension,
    u: &RingElement,
    h: &Subgroup,
) -> Result<(Extension, RingElement), NormalBasisError> {
    let sub = e.fixed_subring(h)?;
    let (unit, _) = invert_criterion(e, u)?;
    let v = e.relative_trace(h, u);

    let quotient = e.group().quotient(h)?;
    let r = e.ring();
    let mut collapsed = vec![r.zero(); sub.degree()];
    for (g, c) in unit.coeffs().iter().enumerate() {
        let q = quotient.project(g);
        collapsed[q] = r.add(&collapsed[q], c);
    }
    let collapsed = GroupRingElement::new(r, sub.group(), collapsed)?;
    if collapsed != criterion_unit(&sub, &v) {
        return internal("collapsed unit differs from the criterion unit of v");
    }
    if !collapsed.is_unit()? {
        return internal("image of a unit under the coset collapse is not a unit");
    }
    Ok((sub, v))
}

/// `(g, h) ↦ tr(u^g u^h)` over the base ring, rows in canonical group order.
pub fn gram_matrix(e: &Extension, u: &RingElement) -> Result<Matrix, NormalBasisError> {
    let n = e.degree();
    let orbit: Vec<RingElement> = (0..n).map(|g| e.act(g, u)).collect();
    let r = e.ring();
    let mut entries = Vec::with_capacity(n * n);
    for a in &orbit {
        for b in &orbit {
            match e.to_base(&e.trace(&r.mul(a, b))) {
                Some(t) => entries.push(t),
                None => return internal("trace left the base ring"),
            }
        }
    }
    Ok(Matrix::new(n, n, entries).expect("square"))
}

/// Whether `tr(u^g w^h) = δ_{g,h}` for all `g, h`.
pub fn is_dual_pair(e: &Extension, u: &RingElement, w: &RingElement) -> bool {
    let r = e.ring();
    let n = e.degree();
    (0..n).all(|g| {
        let ug = e.act(g, u);
        (0..n).all(|h| {
            let t = e.trace(&r.mul(&ug, &e.act(h, w)));
            if g == h {
                r.is_one(&t)
            } else {
                r.is_zero(&t)
            }
        })
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchStrategy {
    /// First generator in canonical enumeration order.
    Exhaustive,
    SeededRandom { seed: u64, max_tries: u64 },
}

pub fn find_nb_generator(e: &Extension, strategy: SearchStrategy) -> Option<RingElement> {
    match strategy {
        SearchStrategy::Exhaustive => e.enumerate()?.find(|u| is_nb_generator(e, u)),
        SearchStrategy::SeededRandom { seed, max_tries } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..max_tries)
                .map(|_| e.random(&mut rng))
                .find(|u| is_nb_generator(e, u))
        }
    }
}

/// All generators in canonical enumeration order; `None` for infinite rings.
pub fn generators(e: &Extension) -> Option<Vec<RingElement>> {
    let all: Vec<RingElement> = e.enumerate()?.collect();
    Some(all.into_par_iter().filter(|u| is_nb_generator(e, u)).collect())
}

/// The data certifying that `u` generates a normal basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalBasisCertificate {
    pub u: RingElement,
    pub unit: GroupRingElement,
    pub unit_inverse: GroupRingElement,
    pub w: RingElement,
    pub gram: Matrix,
}

impl NormalBasisCertificate {
    pub fn new(e: &Extension, u: &RingElement) -> Result<Self, NormalBasisError> {
        let (unit, unit_inverse) = invert_criterion(e, u)?;
        let w = dual_from_inverse(e, &unit_inverse)?;
        Ok(NormalBasisCertificate {
            u: u.clone(),
            gram: gram_matrix(e, u)?,
            unit,
            unit_inverse,
            w,
        })
    }

    pub fn is_self_dual(&self, e: &Extension) -> bool {
        self.gram.is_identity(e.base_ring())
    }

    /// Re-checks every field against `e`.
    pub fn check(&self, e: &Extension) -> bool {
        self.unit == criterion_unit(e, &self.u)
            && self.unit.mul(&self.unit_inverse).map(|x| x.is_one()).unwrap_or(false)
            && self.unit_inverse == criterion_unit(e, &self.w).star()
            && gram_matrix(e, &self.u).map(|g| g == self.gram).unwrap_or(false)
    }

    pub fn to_json(&self, e: &Extension) -> Value {
        let base = e.base_ring();
        let n = self.gram.rows();
        let gram: Vec<Vec<Value>> = (0..n)
            .map(|i| self.gram.row(i).iter().map(|x| base.to_json(x)).collect())
            .collect();
        json!({
            "u": e.ring().to_json(&self.u),
            "U": self.unit.to_json(),
            "U_inv": self.unit_inverse.to_json(),
            "w": e.ring().to_json(&self.w),
            "gram": gram,
        })
    }

    pub fn from_json(e: &Extension, v: &Value) -> Result<Self, NormalBasisError> {
        let bad = |m: String| NormalBasisError::Internal(format!("malformed certificate: {m}"));
        let get = |k: &str| v.get(k).ok_or_else(|| bad(format!("missing `{k}`")));
        let elem = |k: &str| e.ring().from_json(get(k)?).map_err(|x| bad(x.to_string()));
        let gr = |k: &str| GroupRingElement::from_json(get(k)?).map_err(|x| bad(x.to_string()));
        let rows = get("gram")?
            .as_array()
            .ok_or_else(|| bad("gram is not an array".into()))?;
        let mut entries = Vec::new();
        for row in rows {
            for x in row.as_array().ok_or_else(|| bad("gram row".into()))? {
                entries.push(e.base_ring().from_json(x).map_err(|x| bad(x.to_string()))?);
            }
        }
        let n = rows.len();
        Ok(NormalBasisCertificate {
            u: elem("u")?,
            w: elem("w")?,
            unit: gr("U")?,
            unit_inverse: gr("U_inv")?,
            gram: Matrix::new(n, n, entries).map_err(|x| bad(x.to_string()))?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::rings::Ring;
    use proptest::prelude::*;

    fn gf(p: u64, n: usize) -> Extension {
        Extension::finite_field_of_degree(p, n).unwrap()
    }

    fn split(p: u64, factors: Vec<u64>) -> Extension {
        Extension::split(&Ring::prime_field(p).unwrap(), &AbelianGroup::new(factors).unwrap()).unwrap()
    }

    #[test]
    fn delta_is_self_dual() {
        let e = split(5, vec![3]);
        let d = e.delta().unwrap();
        assert!(is_nb_generator(&e, &d));
        assert_eq!(dual_generator(&e, &d).unwrap(), d);
        assert!(gram_matrix(&e, &d).unwrap().is_identity(e.base_ring()));
        assert_eq!(self_dualize(&e, &d).unwrap(), d);
    }

    #[test]
    fn zero_trace_is_never_a_generator() {
        for e in [gf(2, 3), gf(3, 2), split(3, vec![3])] {
            for u in e.enumerate().unwrap() {
                if e.ring().is_zero(&e.trace(&u)) {
                    assert!(!is_nb_generator(&e, &u));
                }
            }
        }
    }

    #[test]
    fn gf4_alpha() {
        let e = gf(2, 2);
        let a = e.ring().generator().unwrap();
        assert!(is_nb_generator(&e, &a));
        assert_eq!(dual_generator(&e, &a).unwrap(), a);
        let gram = gram_matrix(&e, &a).unwrap();
        assert!(gram.is_identity(e.base_ring()));
        assert_eq!(
            self_dualize(&e, &a),
            Err(NormalBasisError::EvenExponent(2))
        );
    }

    #[test]
    fn gf8_generator_count_matches_independence_oracle() {
        let e = gf(2, 3);
        let gens = generators(&e).unwrap();
        let independent = e
            .enumerate()
            .unwrap()
            .filter(|u| oracle::orbit_is_basis(&e, u).unwrap())
            .count();
        assert_eq!(gens.len(), 3);
        assert_eq!(independent, 3);
        for u in &gens {
            let w = dual_generator(&e, u).unwrap();
            assert!(is_nb_generator(&e, &w));
            assert_eq!(dual_generator(&e, &w).unwrap(), *u);
            assert!(is_dual_pair(&e, u, &w));
        }
    }

    #[test]
    fn gf8_self_dual_matches_brute_force() {
        let e = gf(2, 3);
        let self_dual: Vec<RingElement> = e
            .enumerate()
            .unwrap()
            .filter(|u| gram_matrix(&e, u).unwrap().is_identity(e.base_ring()))
            .collect();
        assert!(!self_dual.is_empty());
        for u in generators(&e).unwrap() {
            let c = self_dualize(&e, &u).unwrap();
            assert!(self_dual.contains(&c));
        }
    }

    #[test]
    fn trivial_group() {
        let e = split(7, vec![1]);
        let one = e.ring().one();
        assert_eq!(find_nb_generator(&e, SearchStrategy::Exhaustive), Some(one.clone()));
        assert_eq!(self_dualize(&e, &one).unwrap(), one);
    }

    #[test]
    fn exhaustive_search_over_small_split_ring() {
        let e = split(2, vec![2]);
        let gens = generators(&e).unwrap();
        assert!(gens.contains(&e.delta().unwrap()));
        assert_eq!(find_nb_generator(&e, SearchStrategy::Exhaustive), gens.first().cloned());
        let e = split(2, vec![2, 2]);
        assert_eq!(e.cardinality(), Some(16));
        assert!(!generators(&e).unwrap().is_empty());
    }

    #[test]
    fn seeded_search_is_reproducible() {
        let e = gf(3, 5);
        let s = SearchStrategy::SeededRandom { seed: 11, max_tries: 100 };
        let a = find_nb_generator(&e, s).unwrap();
        assert_eq!(find_nb_generator(&e, s), Some(a.clone()));
        assert!(is_nb_generator(&e, &a));
    }

    #[test]
    fn not_a_generator_errors() {
        let e = gf(2, 3);
        let zero = e.ring().zero();
        assert!(matches!(dual_generator(&e, &zero), Err(NormalBasisError::NotAGenerator(_))));
        assert!(matches!(self_dualize(&e, &zero), Err(NormalBasisError::NotAGenerator(_))));
        let h = Subgroup::trivial(e.group());
        assert!(matches!(descend(&e, &zero, &h), Err(NormalBasisError::NotAGenerator(_))));
    }

    #[test]
    fn even_exponent_is_checked_first() {
        let e = gf(2, 4);
        assert_eq!(
            self_dualize(&e, &e.ring().zero()),
            Err(NormalBasisError::EvenExponent(4))
        );
    }

    #[test]
    fn descent_in_gf64() {
        let e = gf(2, 6);
        let u = find_nb_generator(&e, SearchStrategy::Exhaustive).unwrap();

        let (same, v) = descend(&e, &u, &Subgroup::trivial(e.group())).unwrap();
        assert_eq!(v, u);
        assert_eq!(same.degree(), 6);

        let (top, t) = descend(&e, &u, &Subgroup::whole(e.group())).unwrap();
        assert_eq!(t, e.trace(&u));
        assert!(e.ring().is_one(&t));
        assert_eq!(top.degree(), 1);

        let h2 = Subgroup::generated_by(e.group(), &[3]);
        let (sub, v) = descend(&e, &u, &h2).unwrap();
        assert_eq!(sub.cardinality(), Some(8));
        assert!(oracle::orbit_is_basis(&sub, &v).unwrap());
        assert!(is_nb_generator(&sub, &v));
    }

    #[test]
    fn descend_rejects_foreign_subgroup() {
        let e = gf(2, 6);
        let u = find_nb_generator(&e, SearchStrategy::Exhaustive).unwrap();
        let foreign = Subgroup::trivial(&AbelianGroup::cyclic(5));
        assert!(matches!(descend(&e, &u, &foreign), Err(NormalBasisError::NotASubgroup(_))));
    }

    #[test]
    fn certificate_round_trip() {
        let e = gf(3, 3);
        let u = find_nb_generator(&e, SearchStrategy::Exhaustive).unwrap();
        let cert = NormalBasisCertificate::new(&e, &u).unwrap();
        assert!(cert.check(&e));
        let back = NormalBasisCertificate::from_json(&e, &cert.to_json(&e)).unwrap();
        assert_eq!(back, cert);
        let c = self_dualize(&e, &u).unwrap();
        assert!(NormalBasisCertificate::new(&e, &c).unwrap().is_self_dual(&e));
    }

    #[test]
    fn split_over_integers() {
        let e = Extension::split(&Ring::integers(), &AbelianGroup::cyclic(3)).unwrap();
        let d = e.delta().unwrap();
        assert_eq!(self_dualize(&e, &d).unwrap(), d);
        assert!(!is_nb_generator(&e, &e.ring().one()));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn orbit_of_a_generator_consists_of_generators(seed in any::<u64>()) {
            for e in [gf(2, 4), gf(3, 3), split(3, vec![3])] {
                let s = SearchStrategy::SeededRandom { seed, max_tries: 64 };
                if let Some(u) = find_nb_generator(&e, s) {
                    for g in 0..e.degree() {
                        prop_assert!(is_nb_generator(&e, &e.act(g, &u)));
                    }
                }
            }
        }

        #[test]
        fn gram_is_symmetric_over_base(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for e in [gf(2, 5), gf(5, 2), split(2, vec![3])] {
                let u = e.random(&mut rng);
                let m = gram_matrix(&e, &u).unwrap();
                prop_assert_eq!(m.transpose(), m.clone());
                prop_assert!(m.entries().iter().all(|x| e.base_ring().contains(x)));
            }
        }
    }
}
