//! Finite abelian groups presented as quotients of a product of cyclic
//! factors `C_{d_1} × … × C_{d_k}` by a subgroup (trivial for plain groups).
//!
//! Elements are tuples; every group element is stored as the
//! lexicographically least tuple of its coset, and elements are indexed in
//! lexicographic order. That index is the canonical ordering used for
//! group-ring coefficient vectors and matrices over the group.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Upper bound on the order of the ambient product of cyclic factors.
pub const MAX_AMBIENT_ORDER: usize = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("EvenExponent: group exponent {0} is even, squaring is not invertible")]
    EvenExponent(u64),
    #[error("NotASubgroup: {0}")]
    NotASubgroup(String),
    #[error("invalid group presentation: {0}")]
    InvalidPresentation(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(Vec<u64>);

impl GroupElement {
    pub fn new(coords: Vec<u64>) -> Self {
        GroupElement(coords)
    }

    pub fn coords(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug)]
struct GroupInner {
    factors: Vec<u64>,
    /// Sorted ambient indices of the kernel; `[0]` for a plain group.
    kernel: Vec<usize>,
    reps: Vec<GroupElement>,
    rep_ambient: Vec<usize>,
    coset_of: Vec<usize>,
    exponent: u64,
}

/// A finite abelian group. Cloning is cheap.
#[derive(Clone)]
pub struct AbelianGroup(Arc<GroupInner>);

impl PartialEq for AbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.factors == other.0.factors && self.0.kernel == other.0.kernel)
    }
}

impl Eq for AbelianGroup {}

impl fmt::Debug for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbelianGroup({self})")
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let product = if self.0.factors.is_empty() {
            "C1".to_string()
        } else {
            self.0
                .factors
                .iter()
                .map(|d| format!("C{d}"))
                .collect::<Vec<_>>()
                .join(" x ")
        };
        if self.is_plain() {
            write!(f, "{product}")
        } else {
            write!(f, "({product})/[{}]", self.0.kernel.len())
        }
    }
}

fn ambient_tuple(factors: &[u64], mut idx: usize) -> Vec<u64> {
    let mut t = vec![0u64; factors.len()];
    for (c, &d) in t.iter_mut().zip(factors).rev() {
        *c = (idx as u64) % d;
        idx /= d as usize;
    }
    t
}

fn ambient_index(factors: &[u64], t: &[u64]) -> usize {
    t.iter()
        .zip(factors)
        .fold(0usize, |acc, (&c, &d)| acc * d as usize + c as usize)
}

impl AbelianGroup {
    /// The product of cyclic groups of the given orders (each at least 1).
    pub fn new(factors: Vec<u64>) -> Result<Self, GroupError> {
        Self::with_kernel(factors, vec![0])
    }

    pub fn cyclic(n: u64) -> Self {
        Self::new(vec![n]).expect("cyclic group order must be positive and small")
    }

    pub fn trivial() -> Self {
        Self::new(Vec::new()).unwrap()
    }

    fn with_kernel(factors: Vec<u64>, mut kernel: Vec<usize>) -> Result<Self, GroupError> {
        if factors.contains(&0) {
            return Err(GroupError::InvalidPresentation(
                "factor orders must be at least 1".into(),
            ));
        }
        let ambient = factors
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d as usize))
            .filter(|&n| n <= MAX_AMBIENT_ORDER)
            .ok_or_else(|| {
                GroupError::InvalidPresentation(format!(
                    "ambient order exceeds {MAX_AMBIENT_ORDER}"
                ))
            })?;
        kernel.sort_unstable();
        kernel.dedup();

        let tuples: Vec<Vec<u64>> = (0..ambient).map(|i| ambient_tuple(&factors, i)).collect();
        let kernel_tuples: Vec<&Vec<u64>> = kernel.iter().map(|&k| &tuples[k]).collect();
        let mut coset_of = vec![usize::MAX; ambient];
        let mut reps = Vec::new();
        let mut rep_ambient = Vec::new();
        // Ambient indices increase lexicographically, so the first unassigned
        // index is the least tuple of its coset.
        for a in 0..ambient {
            if coset_of[a] != usize::MAX {
                continue;
            }
            let id = reps.len();
            for k in &kernel_tuples {
                let sum: Vec<u64> = tuples[a]
                    .iter()
                    .zip(k.iter())
                    .zip(&factors)
                    .map(|((&x, &y), &d)| (x + y) % d)
                    .collect();
                coset_of[ambient_index(&factors, &sum)] = id;
            }
            reps.push(GroupElement(tuples[a].clone()));
            rep_ambient.push(a);
        }

        let group = AbelianGroup(Arc::new(GroupInner {
            factors,
            kernel,
            reps,
            rep_ambient,
            coset_of,
            exponent: 1,
        }));
        let exponent = (0..group.order())
            .map(|i| group.element_order(i))
            .fold(1u64, |acc, o| acc.lcm(&o));
        let mut inner = Arc::try_unwrap(group.0).expect("freshly built group is unshared");
        inner.exponent = exponent;
        Ok(AbelianGroup(Arc::new(inner)))
    }

    pub fn factors(&self) -> &[u64] {
        &self.0.factors
    }

    /// Whether the presentation has a trivial kernel.
    pub fn is_plain(&self) -> bool {
        self.0.kernel.len() == 1
    }

    pub fn kernel_elements(&self) -> Vec<GroupElement> {
        self.0
            .kernel
            .iter()
            .map(|&k| GroupElement(ambient_tuple(&self.0.factors, k)))
            .collect()
    }

    pub fn order(&self) -> usize {
        self.0.reps.len()
    }

    pub fn exponent(&self) -> u64 {
        self.0.exponent
    }

    pub fn is_odd_order(&self) -> bool {
        self.order() % 2 == 1
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.0.reps
    }

    pub fn element(&self, i: usize) -> &GroupElement {
        &self.0.reps[i]
    }

    pub const IDENTITY: usize = 0;

    pub fn identity(&self) -> GroupElement {
        self.0.reps[Self::IDENTITY].clone()
    }

    /// Index of the element represented by `t`; any in-range tuple is
    /// accepted and mapped to its coset.
    pub fn index_of(&self, t: &GroupElement) -> Result<usize, GroupError> {
        let f = &self.0.factors;
        if t.0.len() != f.len() || t.0.iter().zip(f).any(|(&c, &d)| c >= d) {
            return Err(GroupError::GroupMismatch(format!(
                "{t} is not an element of {self}"
            )));
        }
        Ok(self.0.coset_of[ambient_index(f, &t.0)])
    }

    fn combine(&self, i: usize, j: usize, ci: i64, cj: i64) -> usize {
        let f = &self.0.factors;
        let a = &self.0.reps[i].0;
        let b = &self.0.reps[j].0;
        let idx = a
            .iter()
            .zip(b)
            .zip(f)
            .fold(0usize, |acc, ((&x, &y), &d)| {
                let d = d as i128;
                let v = (ci as i128 * x as i128 + cj as i128 * y as i128).rem_euclid(d);
                acc * d as usize + v as usize
            });
        self.0.coset_of[idx]
    }

    /// Index-level group operation.
    pub fn op(&self, i: usize, j: usize) -> usize {
        self.combine(i, j, 1, 1)
    }

    pub fn inv(&self, i: usize) -> usize {
        self.combine(i, Self::IDENTITY, -1, 0)
    }

    pub fn pow(&self, i: usize, n: i64) -> usize {
        self.combine(i, Self::IDENTITY, n, 0)
    }

    pub fn element_order(&self, i: usize) -> u64 {
        let mut k = 1u64;
        let mut cur = i;
        while cur != Self::IDENTITY {
            cur = self.op(cur, i);
            k += 1;
        }
        k
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GroupError> {
        let (i, j) = (self.index_of(a)?, self.index_of(b)?);
        Ok(self.element(self.op(i, j)).clone())
    }

    pub fn inverse(&self, a: &GroupElement) -> Result<GroupElement, GroupError> {
        Ok(self.element(self.inv(self.index_of(a)?)).clone())
    }

    pub fn power(&self, a: &GroupElement, n: i64) -> Result<GroupElement, GroupError> {
        Ok(self.element(self.pow(self.index_of(a)?, n)).clone())
    }

    /// The exponent `k` with `2k ≡ 1` modulo the group exponent, so that
    /// `g ↦ g^k` inverts squaring.
    pub fn half_exponent(&self) -> Result<u64, GroupError> {
        let e = self.exponent();
        if e.is_multiple_of(2) {
            return Err(GroupError::EvenExponent(e));
        }
        Ok(e.div_ceil(2))
    }

    pub fn sqrt_index(&self, i: usize) -> Result<usize, GroupError> {
        let k = self.half_exponent()?;
        Ok(self.pow(i, k as i64))
    }

    /// The unique square root of `a` in a group of odd exponent.
    pub fn sqrt_element(&self, a: &GroupElement) -> Result<GroupElement, GroupError> {
        let i = self.index_of(a)?;
        Ok(self.element(self.sqrt_index(i)?).clone())
    }

    pub fn quotient(&self, h: &Subgroup) -> Result<Quotient, GroupError> {
        if h.group != *self {
            return Err(GroupError::NotASubgroup(format!(
                "subgroup of {} used with {self}",
                h.group
            )));
        }
        let kernel: Vec<usize> = (0..self.0.coset_of.len())
            .filter(|&a| h.contains(self.0.coset_of[a]))
            .collect();
        let group = Self::with_kernel(self.0.factors.clone(), kernel)?;
        let projection = (0..self.order())
            .map(|i| group.0.coset_of[self.0.rep_ambient[i]])
            .collect();
        Ok(Quotient { group, projection })
    }

    /// Every subgroup, ordered by size and then by member list.
    pub fn subgroups(&self) -> Vec<Subgroup> {
        let mut found: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
        let cyclic: Vec<Vec<usize>> = (0..self.order())
            .map(|i| Subgroup::generated_by(self, &[i]).members)
            .collect();
        let mut queue: VecDeque<Vec<usize>> = VecDeque::new();
        queue.push_back(vec![Self::IDENTITY]);
        found.insert((1, vec![Self::IDENTITY]));
        while let Some(members) = queue.pop_front() {
            for c in &cyclic {
                let gens: Vec<usize> = members.iter().chain(c.iter()).copied().collect();
                let joined = Subgroup::generated_by(self, &gens).members;
                if found.insert((joined.len(), joined.clone())) {
                    queue.push_back(joined);
                }
            }
        }
        found
            .into_iter()
            .map(|(_, members)| Subgroup {
                group: self.clone(),
                generators: members.clone(),
                members,
            })
            .collect()
    }
}

impl Serialize for AbelianGroup {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GroupRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for AbelianGroup {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        GroupRepr::deserialize(d)?
            .build()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum GroupRepr {
    Plain(Vec<u64>),
    Quotient {
        factors: Vec<u64>,
        kernel: Vec<Vec<u64>>,
    },
}

impl From<&AbelianGroup> for GroupRepr {
    fn from(g: &AbelianGroup) -> Self {
        if g.is_plain() {
            GroupRepr::Plain(g.0.factors.clone())
        } else {
            GroupRepr::Quotient {
                factors: g.0.factors.clone(),
                kernel: g.kernel_elements().into_iter().map(|e| e.0).collect(),
            }
        }
    }
}

impl GroupRepr {
    fn build(self) -> Result<AbelianGroup, GroupError> {
        match self {
            GroupRepr::Plain(f) => AbelianGroup::new(f),
            GroupRepr::Quotient { factors, kernel } => {
                let ambient = AbelianGroup::new(factors)?;
                let elems: Vec<GroupElement> = kernel.into_iter().map(GroupElement).collect();
                let h = Subgroup::from_elements(&ambient, &elems)?;
                Ok(ambient.quotient(&h)?.group)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    group: AbelianGroup,
    generators: Vec<usize>,
    members: Vec<usize>,
}

impl Subgroup {
    /// The subgroup generated by the given element indices.
    pub fn generated_by(group: &AbelianGroup, generators: &[usize]) -> Self {
        let mut seen = vec![false; group.order()];
        seen[AbelianGroup::IDENTITY] = true;
        let mut queue = VecDeque::from([AbelianGroup::IDENTITY]);
        while let Some(x) = queue.pop_front() {
            for &g in generators {
                let y = group.op(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        Subgroup {
            group: group.clone(),
            generators: generators.to_vec(),
            members: (0..group.order()).filter(|&i| seen[i]).collect(),
        }
    }

    pub fn generated_by_elements(
        group: &AbelianGroup,
        generators: &[GroupElement],
    ) -> Result<Self, GroupError> {
        let idx = generators
            .iter()
            .map(|g| group.index_of(g))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::generated_by(group, &idx))
    }

    /// Accepts an explicit element list, verifying closure.
    pub fn from_elements(group: &AbelianGroup, elems: &[GroupElement]) -> Result<Self, GroupError> {
        let mut members = elems
            .iter()
            .map(|g| group.index_of(g))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| GroupError::NotASubgroup(e.to_string()))?;
        members.sort_unstable();
        members.dedup();
        let set: BTreeSet<usize> = members.iter().copied().collect();
        if !set.contains(&AbelianGroup::IDENTITY) {
            return Err(GroupError::NotASubgroup("identity missing".into()));
        }
        for &a in &members {
            if !set.contains(&group.inv(a)) {
                return Err(GroupError::NotASubgroup(format!(
                    "not closed under inverse at {}",
                    group.element(a)
                )));
            }
            for &b in &members {
                if !set.contains(&group.op(a, b)) {
                    return Err(GroupError::NotASubgroup(format!(
                        "not closed: {}·{}",
                        group.element(a),
                        group.element(b)
                    )));
                }
            }
        }
        Ok(Subgroup {
            group: group.clone(),
            generators: members.clone(),
            members,
        })
    }

    pub fn trivial(group: &AbelianGroup) -> Self {
        Self::generated_by(group, &[])
    }

    pub fn whole(group: &AbelianGroup) -> Self {
        let all: Vec<usize> = (0..group.order()).collect();
        Self::generated_by(group, &all)
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Member indices in canonical order.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn elements(&self) -> Vec<GroupElement> {
        self.members
            .iter()
            .map(|&i| self.group.element(i).clone())
            .collect()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn index(&self) -> usize {
        self.group.order() / self.members.len()
    }
}

/// A quotient `G/H` together with the projection `G → G/H`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: AbelianGroup,
    projection: Vec<usize>,
}

impl Quotient {
    pub fn project(&self, i: usize) -> usize {
        self.projection[i]
    }

    pub fn projection(&self) -> &[usize] {
        &self.projection
    }
}
