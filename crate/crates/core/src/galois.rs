//! Galois extensions `S/R` with a finite abelian group `G` acting on `S`.
//!
//! Three backends:
//! - the split extension `Map(G, S₀)/S₀` with `f^g(h) = f(gh)`;
//! - `GF(pⁿ)/GF(p)` with the generator of `Cₙ` acting as Frobenius;
//! - the fixed subring `S^H` of another extension, with `G/H` acting through
//!   canonical coset representatives.
//!
//! The action is checked when a descriptor is built: every `g` must act as a
//! ring automorphism, the action must compose, and on small finite rings the
//! fixed points of `G` must be exactly `R`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::groups::{AbelianGroup, GroupElement, GroupError, Subgroup};
use crate::rings::{linalg, Matrix, Ring, RingDescriptor, RingElement, RingError};

/// Exhaustive fixed-ring checks run only up to this many elements.
const EXHAUSTIVE_CHECK_LIMIT: u128 = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GaloisError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("action check failed: {0}")]
    ActionCheck(String),
    #[error("invalid extension descriptor: {0}")]
    Parse(String),
}

#[derive(Debug)]
enum Backend {
    Split,
    FiniteField {
        /// `frobenius[k][j] = (α^j)^(p^k)`.
        frobenius: Vec<Vec<RingElement>>,
    },
    FixedSubring {
        parent: Extension,
        subgroup: Subgroup,
        /// Parent-group index of the canonical representative of each coset.
        reps: Vec<usize>,
    },
}

#[derive(Debug)]
struct Inner {
    ring: Ring,
    base: Ring,
    group: AbelianGroup,
    map_ring: Ring,
    basis: Vec<RingElement>,
    backend: Backend,
}

/// An extension descriptor; immutable after construction, cheap to clone.
#[derive(Clone, Debug)]
pub struct Extension(Arc<Inner>);

impl Extension {
    /// `Map(G, base)/base`, where constants form the base ring.
    pub fn split(base: &Ring, group: &AbelianGroup) -> Result<Self, GaloisError> {
        let ring = Ring::split(base, group);
        let basis = (0..group.order())
            .map(|h| {
                RingElement::Split(
                    (0..group.order())
                        .map(|x| if x == h { base.one() } else { base.zero() })
                        .collect(),
                )
            })
            .collect();
        Self::build(Inner {
            map_ring: Ring::split(&ring, group),
            ring,
            base: base.clone(),
            group: group.clone(),
            basis,
            backend: Backend::Split,
        })
    }

    /// `GF(p)[x]/(f)` over `GF(p)` with group `Cₙ`, `n = deg f`.
    pub fn finite_field(p: u64, modulus: &[u64]) -> Result<Self, GaloisError> {
        let ring = Ring::finite_field(p, modulus)?;
        let n = modulus.len() - 1;
        let group = AbelianGroup::cyclic(n as u64);
        let alpha = ring.generator().expect("finite field has a generator");
        let basis: Vec<RingElement> = (0..n).map(|j| ring.pow(&alpha, j as u128)).collect();
        let mut frobenius = vec![basis.clone()];
        for k in 1..n {
            let prev: &Vec<RingElement> = &frobenius[k - 1];
            frobenius.push(prev.iter().map(|b| ring.pow(b, p as u128)).collect());
        }
        Self::build(Inner {
            map_ring: Ring::split(&ring, &group),
            base: Ring::prime_field(p)?,
            ring,
            group,
            basis,
            backend: Backend::FiniteField { frobenius },
        })
    }

    /// `GF(p^n)/GF(p)` for the least irreducible modulus of degree `n`.
    pub fn finite_field_of_degree(p: u64, n: usize) -> Result<Self, GaloisError> {
        Ring::prime_field(p)?;
        Self::finite_field(p, &crate::rings::least_irreducible(p, n))
    }

    /// `S^H/R` with group `G/H`.
    pub fn fixed_subring(&self, h: &Subgroup) -> Result<Self, GaloisError> {
        let quotient = self.group().quotient(h)?;
        let q = quotient.group;
        let reps: Vec<usize> = q
            .elements()
            .iter()
            .map(|t| self.group().index_of(t))
            .collect::<Result<_, _>>()?;
        let basis = self.fixed_basis(h)?;
        Self::build(Inner {
            map_ring: Ring::split(self.ring(), &q),
            ring: self.ring().clone(),
            base: self.base_ring().clone(),
            group: q,
            basis,
            backend: Backend::FixedSubring {
                parent: self.clone(),
                subgroup: h.clone(),
                reps,
            },
        })
    }

    /// An `R`-basis of `S^H`, extracted from the relative traces of this
    /// extension's basis.
    fn fixed_basis(&self, h: &Subgroup) -> Result<Vec<RingElement>, GaloisError> {
        let traces: Vec<RingElement> = self
            .basis()
            .iter()
            .map(|b| self.relative_trace(h, b))
            .collect();
        let base = self.base_ring();
        let mut chosen: Vec<RingElement> = Vec::new();
        if base.is_field() {
            let mut rows: Vec<RingElement> = Vec::new();
            for t in traces {
                let coords = self.coordinates(&t);
                let mut trial = rows.clone();
                trial.extend(coords.iter().cloned());
                let mat = Matrix::new(chosen.len() + 1, coords.len(), trial)?;
                if linalg::rank(base, &mat)? == chosen.len() + 1 {
                    rows.extend(coords);
                    chosen.push(t);
                }
            }
        } else {
            // non-field bases only arise from split rings, where the traces
            // are indicator functions of cosets
            for t in traces {
                if !self.ring().is_zero(&t) && !chosen.contains(&t) {
                    chosen.push(t);
                }
            }
        }
        if chosen.len() != h.index() {
            return Err(GaloisError::ActionCheck(format!(
                "fixed ring of a subgroup of index {} has a basis of size {}",
                h.index(),
                chosen.len()
            )));
        }
        Ok(chosen)
    }

    fn build(inner: Inner) -> Result<Self, GaloisError> {
        let e = Extension(Arc::new(inner));
        e.verify_action()?;
        Ok(e)
    }

    fn verify_action(&self) -> Result<(), GaloisError> {
        let fail = |msg: String| Err(GaloisError::ActionCheck(msg));
        let s = self.ring();
        let g = self.group();
        let mut rng = ChaCha8Rng::seed_from_u64(0x6a1015);
        let mut samples: Vec<RingElement> = self.basis().to_vec();
        samples.push(s.one());
        for _ in 0..6 {
            samples.push(self.random(&mut rng));
        }
        if let Some(bad) = samples.iter().find(|x| !self.contains(x)) {
            return fail(format!("sample {} escapes the ring", s.format(bad)));
        }

        for gi in 0..g.order() {
            if !s.is_one(&self.act(gi, &s.one())) {
                return fail(format!("{} does not fix 1", g.element(gi)));
            }
            for (a, b) in samples.iter().zip(samples.iter().rev()) {
                let (ga, gb) = (self.act(gi, a), self.act(gi, b));
                if self.act(gi, &s.add(a, b)) != s.add(&ga, &gb)
                    || self.act(gi, &s.mul(a, b)) != s.mul(&ga, &gb)
                {
                    return fail(format!("{} is not a ring endomorphism", g.element(gi)));
                }
            }
            if gi != AbelianGroup::IDENTITY && self.basis().iter().all(|b| self.act(gi, b) == *b) {
                return fail(format!("{} acts trivially", g.element(gi)));
            }
        }

        let pairs: Vec<(usize, usize)> = if g.order() <= 12 {
            (0..g.order())
                .flat_map(|a| (0..g.order()).map(move |b| (a, b)))
                .collect()
        } else {
            (0..64)
                .map(|_| (rng.gen_range(0..g.order()), rng.gen_range(0..g.order())))
                .collect()
        };
        for (a, b) in pairs {
            for x in &samples {
                if self.act(g.op(a, b), x) != self.act(a, &self.act(b, x)) {
                    return fail(format!(
                        "action does not compose at {}, {}",
                        g.element(a),
                        g.element(b)
                    ));
                }
            }
        }

        if let Backend::FixedSubring {
            parent,
            subgroup,
            reps,
        } = &self.0.backend
        {
            for x in &samples {
                for (q, &rep) in reps.iter().enumerate() {
                    let expected = self.act(q, x);
                    for &h in subgroup.members() {
                        if parent.act(parent.group().op(rep, h), x) != expected {
                            return fail("coset action depends on the representative".into());
                        }
                    }
                }
            }
        }

        if let (Some(card), Some(base_card)) = (self.cardinality(), self.base_ring().cardinality()) {
            if card <= EXHAUSTIVE_CHECK_LIMIT {
                let fixed = self.enumerate().unwrap().filter(|x| self.is_base(x)).count();
                if fixed as u128 != base_card {
                    return fail(format!(
                        "fixed ring has {fixed} elements, base ring has {base_card}"
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &Ring {
        &self.0.ring
    }

    pub fn base_ring(&self) -> &Ring {
        &self.0.base
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.0.group
    }

    /// The ring `Map(G, S)` receiving the φ map.
    pub fn map_ring(&self) -> &Ring {
        &self.0.map_ring
    }

    pub fn degree(&self) -> usize {
        self.group().order()
    }

    pub fn backend_name(&self) -> &'static str {
        match self.0.backend {
            Backend::Split => "split",
            Backend::FiniteField { .. } => "finite_field",
            Backend::FixedSubring { .. } => "fixed_subring",
        }
    }

    pub fn parent(&self) -> Option<&Extension> {
        match &self.0.backend {
            Backend::FixedSubring { parent, .. } => Some(parent),
            _ => None,
        }
    }

    /// `s^g` for the group element with index `g`.
    pub fn act(&self, g: usize, s: &RingElement) -> RingElement {
        match (&self.0.backend, s) {
            (Backend::Split, RingElement::Split(f)) => {
                let grp = self.group();
                RingElement::Split((0..grp.order()).map(|h| f[grp.op(g, h)].clone()).collect())
            }
            (Backend::FiniteField { frobenius }, RingElement::Poly(c)) => {
                let r = self.ring();
                c.iter()
                    .zip(&frobenius[g])
                    .filter(|(&cj, _)| cj != 0)
                    .fold(r.zero(), |acc, (&cj, img)| {
                        r.add(&acc, &r.mul(&r.from_int(cj as i64), img))
                    })
            }
            (Backend::FixedSubring { parent, reps, .. }, _) => parent.act(reps[g], s),
            _ => panic!("element does not belong to the extension ring"),
        }
    }

    pub fn act_element(&self, g: &GroupElement, s: &RingElement) -> Result<RingElement, GaloisError> {
        Ok(self.act(self.group().index_of(g)?, s))
    }

    /// Membership in `S` (for fixed subrings: invariance under `H`).
    pub fn contains(&self, s: &RingElement) -> bool {
        match &self.0.backend {
            Backend::FixedSubring {
                parent, subgroup, ..
            } => {
                parent.contains(s) && subgroup.members().iter().all(|&h| parent.act(h, s) == *s)
            }
            _ => self.ring().contains(s),
        }
    }

    /// Membership in `R = S^G`.
    pub fn is_base(&self, s: &RingElement) -> bool {
        self.contains(s) && (0..self.group().order()).all(|g| self.act(g, s) == *s)
    }

    /// The element of the base ring represented by `s`, if `s ∈ R`.
    pub fn to_base(&self, s: &RingElement) -> Option<RingElement> {
        if !self.is_base(s) {
            return None;
        }
        match (&self.0.backend, s) {
            (Backend::Split, RingElement::Split(f)) => Some(f[0].clone()),
            (Backend::FiniteField { .. }, RingElement::Poly(c)) => Some(RingElement::Mod(c[0])),
            (Backend::FixedSubring { parent, .. }, _) => parent.to_base(s),
            _ => None,
        }
    }

    pub fn from_base(&self, r: &RingElement) -> RingElement {
        match (&self.0.backend, r) {
            (Backend::Split, _) => RingElement::Split(vec![r.clone(); self.group().order()]),
            (Backend::FiniteField { .. }, RingElement::Mod(c)) => self.ring().from_int(*c as i64),
            (Backend::FixedSubring { parent, .. }, _) => parent.from_base(r),
            _ => panic!("not a base ring element"),
        }
    }

    /// Coordinates of `s` over `R` in the basis of the outermost extension
    /// (the power basis, or the point indicators of a split ring).
    pub fn coordinates(&self, s: &RingElement) -> Vec<RingElement> {
        match (&self.0.backend, s) {
            (Backend::Split, RingElement::Split(f)) => f.clone(),
            (Backend::FiniteField { .. }, RingElement::Poly(c)) => {
                c.iter().map(|&x| RingElement::Mod(x)).collect()
            }
            (Backend::FixedSubring { parent, .. }, _) => parent.coordinates(s),
            _ => panic!("element does not belong to the extension ring"),
        }
    }

    /// An `R`-basis of `S`.
    pub fn basis(&self) -> &[RingElement] {
        &self.0.basis
    }

    /// `tr(s) = Σ_g s^g`.
    pub fn trace(&self, s: &RingElement) -> RingElement {
        let r = self.ring();
        (0..self.group().order()).fold(r.zero(), |acc, g| r.add(&acc, &self.act(g, s)))
    }

    /// `Σ_{h ∈ H} s^h`, the trace from `S` down to `S^H`.
    pub fn relative_trace(&self, h: &Subgroup, s: &RingElement) -> RingElement {
        let r = self.ring();
        h.members()
            .iter()
            .fold(r.zero(), |acc, &g| r.add(&acc, &self.act(g, s)))
    }

    /// `φ(s₁ ⊗ s₂)`, the function `g ↦ s₁ · s₂^g` in `Map(G, S)`.
    pub fn phi_map(&self, s1: &RingElement, s2: &RingElement) -> RingElement {
        let r = self.ring();
        RingElement::Split(
            (0..self.group().order())
                .map(|g| r.mul(s1, &self.act(g, s2)))
                .collect(),
        )
    }

    /// The point indicator δ (1 at the identity, 0 elsewhere) of a split
    /// extension.
    pub fn delta(&self) -> Option<RingElement> {
        match self.0.backend {
            Backend::Split => Some(self.basis()[AbelianGroup::IDENTITY].clone()),
            _ => None,
        }
    }

    /// Whether `Σ_g u^g w^{gh} = δ_{h,1}` for every `h`; a witness that φ is
    /// onto, so `S/R` is Galois with normal basis generated by `u`.
    pub fn galois_certificate(&self, u: &RingElement, w: &RingElement) -> bool {
        let r = self.ring();
        let g = self.group();
        let u_orbit: Vec<RingElement> = (0..g.order()).map(|x| self.act(x, u)).collect();
        let w_orbit: Vec<RingElement> = (0..g.order()).map(|x| self.act(x, w)).collect();
        (0..g.order()).all(|h| {
            let sum = (0..g.order()).fold(r.zero(), |acc, x| {
                r.add(&acc, &r.mul(&u_orbit[x], &w_orbit[g.op(x, h)]))
            });
            if h == AbelianGroup::IDENTITY {
                r.is_one(&sum)
            } else {
                r.is_zero(&sum)
            }
        })
    }

    pub fn cardinality(&self) -> Option<u128> {
        match &self.0.backend {
            Backend::FixedSubring { .. } => self
                .base_ring()
                .cardinality()?
                .checked_pow(self.basis().len() as u32),
            _ => self.ring().cardinality(),
        }
    }

    /// Every element of `S` in canonical order (for fixed subrings, the
    /// parent's order restricted to `S^H`).
    pub fn enumerate(&self) -> Option<Box<dyn Iterator<Item = RingElement> + '_>> {
        match &self.0.backend {
            Backend::FixedSubring { parent, .. } => {
                Some(Box::new(parent.enumerate()?.filter(|x| self.contains(x))))
            }
            _ => {
                let card = self.ring().cardinality()?;
                Some(Box::new((0..card).map(|i| self.ring().element_at(i).unwrap())))
            }
        }
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> RingElement {
        match &self.0.backend {
            Backend::FixedSubring {
                parent, subgroup, ..
            } => parent.relative_trace(subgroup, &parent.random(rng)),
            _ => self.ring().random(rng),
        }
    }

    pub fn to_json(&self) -> Value {
        match &self.0.backend {
            Backend::Split => json!({
                "backend": "split",
                "base": self.base_ring().descriptor(),
                "group": self.group(),
            }),
            Backend::FiniteField { .. } => {
                let RingDescriptor::FiniteField { p, modulus } = self.ring().descriptor() else {
                    unreachable!()
                };
                json!({ "backend": "finite_field", "p": p, "modulus": modulus })
            }
            Backend::FixedSubring {
                parent, subgroup, ..
            } => json!({
                "backend": "fixed_subring",
                "parent": parent.to_json(),
                "subgroup": subgroup.elements(),
            }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self, GaloisError> {
        let field = |k: &str| {
            v.get(k)
                .ok_or_else(|| GaloisError::Parse(format!("missing field `{k}`")))
        };
        let parse = |k: &str, e: serde_json::Error| GaloisError::Parse(format!("{k}: {e}"));
        match field("backend")?.as_str() {
            Some("split") => {
                let base: RingDescriptor =
                    serde_json::from_value(field("base")?.clone()).map_err(|e| parse("base", e))?;
                let group: AbelianGroup =
                    serde_json::from_value(field("group")?.clone()).map_err(|e| parse("group", e))?;
                Self::split(&Ring::new(&base)?, &group)
            }
            Some("finite_field") => {
                let p: u64 = serde_json::from_value(field("p")?.clone()).map_err(|e| parse("p", e))?;
                let modulus: Vec<u64> = serde_json::from_value(field("modulus")?.clone())
                    .map_err(|e| parse("modulus", e))?;
                Self::finite_field(p, &modulus)
            }
            Some("fixed_subring") => {
                let parent = Self::from_json(field("parent")?)?;
                let elems: Vec<GroupElement> = serde_json::from_value(field("subgroup")?.clone())
                    .map_err(|e| parse("subgroup", e))?;
                let h = Subgroup::from_elements(parent.group(), &elems)?;
                parent.fixed_subring(&h)
            }
            _ => Err(GaloisError::Parse("unknown backend".into())),
        }
    }
}
