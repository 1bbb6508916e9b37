//! Exhaustive property suites over small extensions.
//!
//! - `thm1`: the unit criterion against the orbit-rank oracle, orbit
//!   invariance, and dual generators.
//! - `thm2`: self-dualization for odd groups, rejection for even ones, and
//!   the ψ automorphism on seeded random elements.
//! - `cor1`: descent to every fixed subring.
//!
//! Instance lists are fixed; `max_size` drops instances whose ring `S` has
//! more elements. Reports contain no timings, so equal inputs give equal
//! output.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::galois::Extension;
use crate::group_ring::GroupRingElement;
use crate::groups::AbelianGroup;
use crate::normal_basis::{self as nb, NormalBasisError};
use crate::oracle;
use crate::rings::{Ring, RingElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Thm1,
    Thm2,
    Cor1,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Thm1 => "thm1",
            Suite::Thm2 => "thm2",
            Suite::Cor1 => "cor1",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "thm1" => Ok(Suite::Thm1),
            "thm2" => Ok(Suite::Thm2),
            "cor1" => Ok(Suite::Cor1),
            "all" => Ok(Suite::All),
            _ => Err(format!("unknown suite `{s}` (expected thm1, thm2, cor1 or all)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub instance: String,
    pub property: String,
    pub cases: u64,
    pub failures: u64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub suite: &'static str,
    pub max_size: u128,
    pub seed: u64,
    pub instances: Vec<String>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

/// Runs `suite` on every listed instance with at most `max_size` elements.
pub fn run(suite: Suite, max_size: u128, seed: u64) -> Report {
    let mut out = Collector::default();
    if matches!(suite, Suite::Thm1 | Suite::All) {
        thm1(&mut out, max_size);
    }
    if matches!(suite, Suite::Thm2 | Suite::All) {
        thm2(&mut out, max_size, seed);
    }
    if matches!(suite, Suite::Cor1 | Suite::All) {
        cor1(&mut out, max_size);
    }
    let passed = out.checks.iter().all(Check::passed);
    Report {
        suite: suite.name(),
        max_size,
        seed,
        instances: out.instances,
        checks: out.checks,
        passed,
    }
}

#[derive(Default)]
struct Collector {
    instances: Vec<String>,
    checks: Vec<Check>,
}

impl Collector {
    fn instance(&mut self, suite: &'static str, name: &str) {
        self.instances.push(format!("{suite}: {name}"));
    }

    fn check(&mut self, suite: &'static str, instance: &str, property: &str, results: &[bool]) {
        self.checks.push(Check {
            suite,
            instance: instance.to_string(),
            property: property.to_string(),
            cases: results.len() as u64,
            failures: results.iter().filter(|ok| !**ok).count() as u64,
        });
    }
}

struct Instance {
    name: String,
    size: u128,
    build: Box<dyn Fn() -> Extension>,
}

fn field(p: u64, n: usize) -> Instance {
    Instance {
        name: format!("GF({p}^{n})/GF({p})"),
        size: (p as u128).pow(n as u32),
        build: Box::new(move || Extension::finite_field_of_degree(p, n).expect("valid field")),
    }
}

fn split(p: u64, factors: &[u64]) -> Instance {
    let group = AbelianGroup::new(factors.to_vec()).expect("valid group");
    let size = (p as u128).pow(group.order() as u32);
    Instance {
        name: format!("GF({p})^({group})/GF({p})"),
        size,
        build: Box::new(move || {
            Extension::split(&Ring::prime_field(p).expect("prime"), &group).expect("valid split ring")
        }),
    }
}

fn selected(list: Vec<Instance>, max_size: u128) -> impl Iterator<Item = Instance> {
    list.into_iter().filter(move |i| i.size <= max_size)
}

fn all_elements(e: &Extension) -> Vec<RingElement> {
    e.enumerate().expect("finite instance").collect()
}

fn thm1(out: &mut Collector, max_size: u128) {
    const S: &str = "thm1";
    let list = vec![
        split(2, &[2]),
        field(2, 2),
        field(2, 3),
        split(2, &[3]),
        field(3, 2),
        split(3, &[2]),
        field(2, 4),
        split(2, &[2, 2]),
        split(2, &[4]),
        field(5, 2),
        field(3, 3),
        split(3, &[3]),
        field(2, 5),
        field(7, 2),
        field(2, 6),
        split(2, &[6]),
        field(3, 4),
        field(11, 2),
        field(5, 3),
        split(5, &[3]),
        field(2, 7),
        field(3, 5),
        field(2, 8),
    ];
    for inst in selected(list, max_size) {
        out.instance(S, &inst.name);
        let e = (inst.build)();
        let elements = all_elements(&e);

        let verdicts: Vec<(bool, bool)> = elements
            .par_iter()
            .map(|u| (nb::is_nb_generator(&e, u), oracle::orbit_is_basis(&e, u) == Some(true)))
            .collect();
        let agree: Vec<bool> = verdicts.iter().map(|(a, b)| a == b).collect();
        out.check(S, &inst.name, "unit criterion agrees with orbit-rank oracle", &agree);

        let gens: Vec<RingElement> = elements
            .iter()
            .zip(&verdicts)
            .filter(|(_, (is_gen, _))| *is_gen)
            .map(|(u, _)| u.clone())
            .collect();

        let orbit: Vec<bool> = gens
            .par_iter()
            .map(|u| (0..e.degree()).all(|g| nb::is_nb_generator(&e, &e.act(g, u))))
            .collect();
        out.check(S, &inst.name, "conjugates of a generator are generators", &orbit);

        let duals: Vec<bool> = gens
            .par_iter()
            .map(|u| match nb::dual_generator(&e, u) {
                Ok(w) => {
                    nb::is_dual_pair(&e, u, &w)
                        && e.galois_certificate(u, &w)
                        && nb::dual_generator(&e, &w).as_ref() == Ok(u)
                }
                Err(_) => false,
            })
            .collect();
        out.check(S, &inst.name, "dual generator is a trace-dual involution", &duals);

        if let Some(delta) = e.delta() {
            let ok = nb::dual_generator(&e, &delta).as_ref() == Ok(&delta)
                && nb::gram_matrix(&e, &delta)
                    .map(|m| m.is_identity(e.base_ring()))
                    .unwrap_or(false);
            out.check(S, &inst.name, "delta generates a self-dual normal basis", &[ok]);
        }
    }
}

fn thm2(out: &mut Collector, max_size: u128, seed: u64) {
    const S: &str = "thm2";
    let odd = vec![
        split(2, &[3]),
        field(2, 3),
        field(3, 3),
        split(3, &[3]),
        field(2, 5),
        split(2, &[5]),
        field(5, 3),
        field(2, 7),
        field(3, 5),
        field(7, 3),
    ];
    for inst in selected(odd, max_size) {
        out.instance(S, &inst.name);
        let e = (inst.build)();
        let gens = nb::generators(&e).expect("finite instance");
        let results: Vec<bool> = gens
            .par_iter()
            .map(|u| match nb::self_dualize(&e, u) {
                Ok(c) => {
                    nb::is_nb_generator(&e, &c)
                        && nb::gram_matrix(&e, &c)
                            .map(|m| m.is_identity(e.base_ring()))
                            .unwrap_or(false)
                        && {
                            let cu = nb::criterion_unit(&e, &c);
                            cu.mul(&cu.star()).map(|x| x.is_one()).unwrap_or(false)
                        }
                }
                Err(_) => false,
            })
            .collect();
        out.check(S, &inst.name, "self-dualization yields a self-dual generator", &results);
    }

    let even = vec![field(2, 2), split(3, &[2]), field(3, 2), field(2, 4), split(2, &[2, 2])];
    for inst in selected(even, max_size) {
        out.instance(S, &inst.name);
        let e = (inst.build)();
        let u = nb::find_nb_generator(&e, nb::SearchStrategy::Exhaustive).expect("generator exists");
        let ok = matches!(nb::self_dualize(&e, &u), Err(NormalBasisError::EvenExponent(_)));
        out.check(S, &inst.name, "self-dualization rejects an even group", &[ok]);
    }

    let groups: [&[u64]; 5] = [&[3], &[5], &[7], &[9], &[3, 3]];
    let rings = [Ring::prime_field(2).expect("prime"), Ring::integers()];
    for (gi, factors) in groups.iter().enumerate() {
        let group = AbelianGroup::new(factors.to_vec()).expect("valid group");
        for (ri, ring) in rings.iter().enumerate() {
            let name = format!("{ring}[{group}]");
            out.instance(S, &name);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((gi as u64) << 8 | ri as u64));
            let (mult, basis) = psi_checks(ring, &group, &mut rng);
            out.check(S, &name, "psi is multiplicative on random pairs", &mult);
            out.check(S, &name, "psi(g^2) = g and psi permutes the group basis", &basis);
        }
    }
}

/// ψ checks on 100 random pairs and on every group element.
pub fn psi_checks(ring: &Ring, group: &AbelianGroup, rng: &mut ChaCha8Rng) -> (Vec<bool>, Vec<bool>) {
    let mult = (0..100)
        .map(|_| {
            let x = GroupRingElement::random(ring, group, rng);
            let y = GroupRingElement::random(ring, group, rng);
            let lhs = x.mul(&y).and_then(|xy| xy.apply_psi());
            let rhs = x
                .apply_psi()
                .and_then(|px| y.apply_psi().and_then(|py| px.mul(&py)));
            matches!((lhs, rhs), (Ok(a), Ok(b)) if a == b)
        })
        .collect();
    let mut hit = vec![false; group.order()];
    let mut basis: Vec<bool> = (0..group.order())
        .map(|g| {
            let x = GroupRingElement::monomial(ring, group, g, ring.one());
            let sq = GroupRingElement::monomial(ring, group, group.op(g, g), ring.one());
            let ok_sq = sq.apply_psi().map(|p| p == x).unwrap_or(false);
            match x.apply_psi() {
                Ok(p) => match (0..group.order()).find(|&h| ring.is_one(p.coeff(h))) {
                    Some(h) => {
                        hit[h] = true;
                        ok_sq
                    }
                    None => false,
                },
                Err(_) => false,
            }
        })
        .collect();
    basis.push(hit.iter().all(|h| *h));
    (mult, basis)
}

fn cor1(out: &mut Collector, max_size: u128) {
    const S: &str = "cor1";
    let list = vec![
        field(2, 2),
        field(2, 4),
        split(2, &[2, 2]),
        field(5, 2),
        field(2, 6),
        split(2, &[6]),
        field(3, 4),
        field(2, 8),
    ];
    for inst in selected(list, max_size) {
        let e = (inst.build)();
        let gens = nb::generators(&e).expect("finite instance");
        for h in e.group().subgroups() {
            let members: Vec<String> = h
                .members()
                .iter()
                .map(|&g| e.group().element(g).to_string())
                .collect();
            let name = format!("{}, H = {{{}}}", inst.name, members.join(", "));
            out.instance(S, &name);
            let results: Vec<bool> = gens
                .par_iter()
                .map(|u| match nb::descend(&e, u, &h) {
                    Ok((sub, v)) => {
                        nb::is_nb_generator(&sub, &v)
                            && oracle::orbit_is_basis(&sub, &v) == Some(true)
                    }
                    Err(_) => false,
                })
                .collect();
            out.check(S, &name, "descent preserves normal basis generators", &results);
        }
    }
}
