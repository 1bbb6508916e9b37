//! `nbasis`: normal basis certificates, self-dual bases, descent and the
//! verification suites from the command line.
//!
//! Exit codes: 0 success, 1 property failure, 2 usage, 3 even group where an
//! odd one is required, 4 internal inconsistency.

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use normal_basis::galois::Extension;
use normal_basis::group_ring::GroupRingElement;
use normal_basis::groups::{AbelianGroup, Subgroup};
use normal_basis::normal_basis::{self as nb, NormalBasisCertificate, NormalBasisError, SearchStrategy};
use normal_basis::rings::{is_prime, least_irreducible, Matrix, Ring, RingElement};
use normal_basis::verify::{self, Suite};

const EXIT_PROPERTY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_EVEN: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

/// Random tries before a seeded generator search gives up.
const RANDOM_TRIES: u64 = 10_000;

const MAX_FIELD_SIZE: u128 = 1 << 20;
const MAX_EXHAUSTIVE_SIZE: u128 = 1 << 16;

#[derive(Parser)]
#[command(name = "nbasis", version, about = "Normal bases of Galois extensions via group-ring units")]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized searches and checks.
    #[arg(long, global = true, env = "NB_SEED", default_value_t = 0)]
    seed: u64,
    /// Include wall-clock timings in the report.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify the delta basis of the split extension GF(p)^(G)/GF(p).
    DemoSplit {
        #[arg(long, value_parser = parse_prime)]
        prime: u64,
        /// Cyclic factor orders, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        group: Vec<u64>,
    },
    /// Find a normal basis generator of GF(p^n)/GF(p).
    FfBasis {
        #[command(flatten)]
        field: FieldArgs,
        /// Also build a self-dual normal basis (odd n only).
        #[arg(long)]
        self_dual: bool,
        /// Search in canonical order and count all generators.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Build a self-dual normal basis of GF(p^n)/GF(p), n odd.
    SelfDual {
        #[command(flatten)]
        field: FieldArgs,
        /// Starting generator as a JSON coefficient list.
        #[arg(long)]
        generator: Option<String>,
    },
    /// Push a generator of GF(p^n)/GF(p) down to the fixed field of the
    /// subgroup of order k.
    Descend {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        subgroup_order: u64,
        #[arg(long)]
        generator: Option<String>,
    },
    /// Run the exhaustive property suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
        /// Largest ring size |S| to include.
        #[arg(long, default_value_t = 64)]
        max_size: u128,
    },
    /// Augmentation, regular trace, X X* and torsion order of a group ring
    /// element.
    Diagnose {
        /// Group ring element as JSON: {"group", "ring", "coeffs"}.
        #[arg(long)]
        element: String,
        /// Largest order to try (default 2|G|).
        #[arg(long)]
        bound: Option<u64>,
    },
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long, value_parser = parse_prime)]
    p: u64,
    /// Modulus as ascending coefficients, e.g. 1,1,1 for 1 + x + x^2.
    #[arg(long, value_delimiter = ',', conflicts_with = "n", required_unless_present = "n")]
    f: Option<Vec<u64>>,
    /// Degree; uses the least irreducible monic modulus.
    #[arg(long)]
    n: Option<usize>,
}

fn parse_prime(s: &str) -> Result<u64, String> {
    let p: u64 = s.parse().map_err(|e| format!("{e}"))?;
    if is_prime(p) {
        Ok(p)
    } else {
        Err(format!("{p} is not prime"))
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<NormalBasisError> for Failure {
    fn from(e: NormalBasisError) -> Self {
        let code = match e {
            NormalBasisError::EvenExponent(_) => EXIT_EVEN,
            NormalBasisError::NotAGenerator(_) => EXIT_PROPERTY,
            NormalBasisError::NotASubgroup(_) => EXIT_USAGE,
            NormalBasisError::Internal(_) => EXIT_INTERNAL,
        };
        Failure { code, message: e.to_string() }
    }
}

struct Report {
    json: Value,
    text: String,
    passed: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = match &cli.command {
        Command::DemoSplit { prime, group } => demo_split(*prime, group),
        Command::FfBasis { field, self_dual, exhaustive } => {
            ff_basis(field, *self_dual, *exhaustive, cli.seed)
        }
        Command::SelfDual { field, generator } => self_dual(field, generator.as_deref(), cli.seed),
        Command::Descend { field, subgroup_order, generator } => {
            descend(field, *subgroup_order, generator.as_deref(), cli.seed)
        }
        Command::Verify { suite, max_size } => Ok(run_verify(*suite, *max_size, cli.seed)),
        Command::Diagnose { element, bound } => diagnose(element, *bound),
    };
    match result {
        Ok(mut report) => {
            let elapsed = start.elapsed().as_secs_f64() * 1000.0;
            if cli.json {
                if cli.timings {
                    report.json["timings"] = json!({ "total_ms": elapsed });
                }
                println!("{}", serde_json::to_string_pretty(&report.json).expect("serializable"));
            } else {
                print!("{}", report.text);
                if cli.timings {
                    println!("time: {elapsed:.1} ms");
                }
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_PROPERTY)
            }
        }
        Err(f) => {
            if cli.json {
                println!("{}", json!({ "error": f.message, "exit_code": f.code }));
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn extension(args: &FieldArgs) -> Result<Extension, Failure> {
    let modulus = match (&args.f, args.n) {
        (Some(f), _) => f.clone(),
        (None, Some(0)) => return Err(Failure::usage("degree must be positive")),
        (None, Some(n)) => {
            size_check(args.p, n)?;
            least_irreducible(args.p, n)
        }
        (None, None) => return Err(Failure::usage("one of --f or --n is required")),
    };
    if modulus.len() < 2 {
        return Err(Failure::usage("modulus must have positive degree"));
    }
    size_check(args.p, modulus.len() - 1)?;
    Extension::finite_field(args.p, &modulus).map_err(|e| Failure::usage(e.to_string()))
}

fn size_check(p: u64, n: usize) -> Result<(), Failure> {
    match (p as u128).checked_pow(n as u32) {
        Some(q) if n <= 64 && q <= MAX_FIELD_SIZE => Ok(()),
        _ => Err(Failure::usage(format!("fields larger than {MAX_FIELD_SIZE} elements are not supported"))),
    }
}

fn parse_generator(e: &Extension, s: &str) -> Result<RingElement, Failure> {
    let v: Value = serde_json::from_str(s).map_err(|err| Failure::usage(format!("generator: {err}")))?;
    e.ring()
        .from_json(&v)
        .map_err(|err| Failure::usage(format!("generator: {err}")))
}

fn search(e: &Extension, seed: u64) -> Result<RingElement, Failure> {
    nb::find_nb_generator(e, SearchStrategy::SeededRandom { seed, max_tries: RANDOM_TRIES })
        .or_else(|| nb::find_nb_generator(e, SearchStrategy::Exhaustive))
        .ok_or_else(|| Failure {
            code: EXIT_INTERNAL,
            message: "no normal basis generator found".into(),
        })
}

fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(c, s)| format!("{s:<w$}", w = widths[c]))
            .collect();
        out.push_str("  ");
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn matrix_text(ring: &Ring, m: &Matrix) -> String {
    let rows: Vec<Vec<String>> = (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| ring.format(x)).collect())
        .collect();
    table(&rows)
}

fn orbit_text(e: &Extension, u: &RingElement) -> String {
    let rows: Vec<Vec<String>> = (0..e.degree())
        .map(|g| vec![e.group().element(g).to_string(), e.ring().format(&e.act(g, u))])
        .collect();
    table(&rows)
}

fn certificate_text(e: &Extension, cert: &NormalBasisCertificate) -> String {
    format!(
        "generator u = {}\norbit:\n{}dual generator w = {}\nGram matrix:\n{}self-dual: {}\n",
        e.ring().format(&cert.u),
        orbit_text(e, &cert.u),
        e.ring().format(&cert.w),
        matrix_text(e.base_ring(), &cert.gram),
        cert.is_self_dual(e),
    )
}

fn demo_split(p: u64, factors: &[u64]) -> Result<Report, Failure> {
    let group = AbelianGroup::new(factors.to_vec()).map_err(|e| Failure::usage(e.to_string()))?;
    let base = Ring::prime_field(p).map_err(|e| Failure::usage(e.to_string()))?;
    let e = Extension::split(&base, &group).map_err(|e| Failure {
        code: EXIT_INTERNAL,
        message: e.to_string(),
    })?;
    let delta = e.delta().expect("split extension");
    let cert = NormalBasisCertificate::new(&e, &delta)?;
    let dual_ok = cert.w == delta;
    let self_dual = cert.is_self_dual(&e);
    Ok(Report {
        json: json!({
            "command": "demo-split",
            "extension": e.to_json(),
            "generator": e.ring().to_json(&delta),
            "certificate": cert.to_json(&e),
            "dual_is_generator": dual_ok,
            "self_dual": self_dual,
        }),
        text: format!(
            "extension {}/{} with group {}\n{}dual equals generator: {dual_ok}\n",
            e.ring(),
            e.base_ring(),
            e.group(),
            certificate_text(&e, &cert),
        ),
        passed: dual_ok && self_dual,
    })
}

fn ff_basis(args: &FieldArgs, self_dual: bool, exhaustive: bool, seed: u64) -> Result<Report, Failure> {
    let e = extension(args)?;
    if self_dual {
        e.group().half_exponent().map_err(NormalBasisError::from)?;
    }
    let (u, count) = if exhaustive {
        if e.cardinality().is_none_or(|q| q > MAX_EXHAUSTIVE_SIZE) {
            return Err(Failure::usage(format!(
                "--exhaustive is limited to fields with at most {MAX_EXHAUSTIVE_SIZE} elements"
            )));
        }
        let gens = nb::generators(&e).expect("finite field");
        let first = gens.first().cloned().ok_or_else(|| Failure {
            code: EXIT_INTERNAL,
            message: "exhaustive search found no normal basis generator".into(),
        })?;
        (first, Some(gens.len()))
    } else {
        (search(&e, seed)?, None)
    };
    let cert = NormalBasisCertificate::new(&e, &u)?;
    let mut json = json!({
        "command": "ff-basis",
        "extension": e.to_json(),
        "generator": e.ring().to_json(&u),
        "certificate": cert.to_json(&e),
    });
    let mut text = format!("extension {}/{}, modulus {}\n", e.ring(), e.base_ring(), modulus_text(&e));
    if let Some(n) = count {
        json["generator_count"] = json!(n);
        text.push_str(&format!("normal basis generators: {n}\n"));
    }
    text.push_str(&certificate_text(&e, &cert));
    let mut passed = true;
    if self_dual {
        let (j, t, ok) = self_dual_part(&e, &u)?;
        json["self_dual"] = j;
        text.push_str(&t);
        passed = ok;
    }
    Ok(Report { json, text, passed })
}

fn modulus_text(e: &Extension) -> String {
    match e.ring().descriptor() {
        normal_basis::rings::RingDescriptor::FiniteField { modulus, .. } => modulus
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(","),
        _ => String::new(),
    }
}

fn self_dual_part(e: &Extension, u: &RingElement) -> Result<(Value, String, bool), Failure> {
    let c = nb::self_dualize(e, u)?;
    let cert = NormalBasisCertificate::new(e, &c)?;
    let ok = cert.is_self_dual(e);
    Ok((
        json!({ "c": e.ring().to_json(&c), "certificate": cert.to_json(e), "gram_is_identity": ok }),
        format!("self-dual generator c = {}\n{}", e.ring().format(&c), certificate_text(e, &cert)),
        ok,
    ))
}

fn self_dual(args: &FieldArgs, generator: Option<&str>, seed: u64) -> Result<Report, Failure> {
    let e = extension(args)?;
    e.group().half_exponent().map_err(NormalBasisError::from)?;
    let u = match generator {
        Some(s) => parse_generator(&e, s)?,
        None => search(&e, seed)?,
    };
    let (j, t, ok) = self_dual_part(&e, &u)?;
    Ok(Report {
        json: json!({
            "command": "self-dual",
            "extension": e.to_json(),
            "generator": e.ring().to_json(&u),
            "self_dual": j,
        }),
        text: format!(
            "extension {}/{}, starting generator {}\n{t}",
            e.ring(),
            e.base_ring(),
            e.ring().format(&u)
        ),
        passed: ok,
    })
}

fn descend(args: &FieldArgs, k: u64, generator: Option<&str>, seed: u64) -> Result<Report, Failure> {
    let e = extension(args)?;
    let n = e.degree() as u64;
    if k == 0 || !n.is_multiple_of(k) {
        return Err(Failure::usage(format!("NotASubgroup: C{n} has no subgroup of order {k}")));
    }
    let h = Subgroup::generated_by(e.group(), &[(n / k) as usize]);
    let u = match generator {
        Some(s) => parse_generator(&e, s)?,
        None => search(&e, seed)?,
    };
    let (sub, v) = nb::descend(&e, &u, &h)?;
    let cert = NormalBasisCertificate::new(&sub, &v)?;
    Ok(Report {
        json: json!({
            "command": "descend",
            "extension": e.to_json(),
            "generator": e.ring().to_json(&u),
            "subgroup": h.elements(),
            "fixed_extension": sub.to_json(),
            "v": e.ring().to_json(&v),
            "certificate": cert.to_json(&sub),
        }),
        text: format!(
            "extension {}/{}, generator u = {}\nfixed field of the subgroup of order {k}: {} elements, group {}\nv = {}\n{}",
            e.ring(),
            e.base_ring(),
            e.ring().format(&u),
            sub.cardinality().map_or("?".into(), |c| c.to_string()),
            sub.group(),
            e.ring().format(&v),
            certificate_text(&sub, &cert),
        ),
        passed: true,
    })
}

fn run_verify(suite: Suite, max_size: u128, seed: u64) -> Report {
    let report = verify::run(suite, max_size, seed);
    let mut text = format!("suite {suite}, max size {max_size}, seed {seed}\ninstances:\n");
    for i in &report.instances {
        text.push_str(&format!("  {i}\n"));
    }
    let mut rows = vec![vec![
        "result".to_string(),
        "suite".to_string(),
        "cases".to_string(),
        "instance".to_string(),
        "property".to_string(),
    ]];
    for c in &report.checks {
        rows.push(vec![
            if c.passed() { "ok".into() } else { format!("FAIL({})", c.failures) },
            c.suite.to_string(),
            c.cases.to_string(),
            c.instance.clone(),
            c.property.clone(),
        ]);
    }
    text.push_str(&table(&rows));
    text.push_str(if report.passed { "all properties hold\n" } else { "property failures\n" });
    Report {
        passed: report.passed,
        json: serde_json::to_value(&report).expect("serializable"),
        text,
    }
}

fn diagnose(element: &str, bound: Option<u64>) -> Result<Report, Failure> {
    let v: Value = serde_json::from_str(element).map_err(|e| Failure::usage(format!("element: {e}")))?;
    let x = GroupRingElement::from_json(&v).map_err(|e| Failure::usage(format!("element: {e}")))?;
    let ring = x.ring().clone();
    let bound = bound.unwrap_or(2 * x.group().order() as u64);
    let aug = x.augmentation();
    let trace = x.regular_trace();
    let orthogonal = x.mul(&x.star()).map(|y| y.is_one()).map_err(|e| Failure {
        code: EXIT_INTERNAL,
        message: e.to_string(),
    })?;
    let order = x.torsion_order(bound);
    let unit = x.is_unit().map_err(|e| Failure { code: EXIT_INTERNAL, message: e.to_string() })?;
    Ok(Report {
        json: json!({
            "command": "diagnose",
            "element": x.to_json(),
            "augmentation": ring.to_json(&aug),
            "regular_trace": ring.to_json(&trace),
            "x_xstar_is_one": orthogonal,
            "is_unit": unit,
            "torsion_bound": bound,
            "torsion_order": order,
        }),
        text: table(&[
            vec!["element".into(), x.to_string()],
            vec!["augmentation".into(), ring.format(&aug)],
            vec!["regular trace".into(), ring.format(&trace)],
            vec!["X X* = e".into(), orthogonal.to_string()],
            vec!["unit".into(), unit.to_string()],
            vec![
                format!("torsion order (<= {bound})"),
                order.map_or("none".into(), |n| n.to_string()),
            ],
        ]),
        passed: true,
    })
}
