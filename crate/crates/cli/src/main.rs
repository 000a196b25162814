//! `tfg`: command-line front end for tfg-core.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use tfg_core::bratteli::BratteliDiagram;
use tfg_core::config::{Caps, Session};
use tfg_core::dsl::Env;
use tfg_core::generators::{
    example1_symmetric_variant, example1_system, random_cylinder, sturmian_system,
    verify_conjugation_identities, verify_example1, verify_example2,
};
use tfg_core::ktheory::{decompose, sgn, DecomposeOptions, K0Presentation, SgnOptions};
use tfg_core::measure::{index, measure};
use tfg_core::report::{CheckRecord, Report, Verdict, SCHEMA_VERSION};
use tfg_core::{Error, Order, QuadReal, Result, TransversalPolicy};

#[derive(Parser, Debug)]
#[command(
    name = "tfg",
    version,
    about = "Topological full groups of minimal subshifts and AF full groups"
)]
struct Cli {
    /// TOML system description; defaults to the Sturmian shift of √2 − 1.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest element order explored.
    #[arg(long, global = true)]
    cap_order: Option<usize>,
    /// Largest cylinder radius tried by the decomposition.
    #[arg(long, global = true)]
    cap_span: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Policy {
    LexLeast,
    Leftmost,
    Rightmost,
}

impl From<Policy> for TransversalPolicy {
    fn from(p: Policy) -> Self {
        match p {
            Policy::LexLeast => TransversalPolicy::LexLeast,
            Policy::Leftmost => TransversalPolicy::Leftmost,
            Policy::Rightmost => TransversalPolicy::Rightmost,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Which {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The language of length n.
    Words { n: usize },
    /// Exact measure of a clopen set.
    Measure { set: String },
    /// The index map of an element.
    Index { expr: String },
    /// Order of an element.
    Order { expr: String },
    /// Signature of an index-zero element.
    Sgn {
        expr: String,
        /// Use the distinguished points in the opposite roles.
        #[arg(long)]
        swap: bool,
        /// Order-reversing pairing in the decomposition.
        #[arg(long)]
        reversed_pi: bool,
        #[arg(long, value_enum, default_value_t = Policy::LexLeast)]
        policy: Policy,
    },
    /// K⁰ coordinates and mod-2 class of a clopen set.
    Class { set: String },
    /// Splits an index-zero element into parts preserving half-orbits.
    Decompose {
        expr: String,
        #[arg(long)]
        reversed_pi: bool,
    },
    /// Checks every equation of an identity file.
    Verify { file: PathBuf },
    /// Path counts, simplicity and mod-2 dimension group of a diagram.
    BratteliReport {
        /// Number of levels of path counts to list.
        #[arg(long, default_value_t = 6)]
        levels: usize,
    },
    /// Verifies the identities of the worked examples.
    Examples {
        #[arg(long, value_enum, default_value_t = Which::All)]
        which: Which,
        /// Random cylinder pairs for the conjugation lemmas.
        #[arg(long, default_value_t = 8)]
        samples: usize,
    },
}

/// What a command produced: values to display, and checks that decide the
/// exit status.
struct Outcome {
    title: String,
    lines: Vec<String>,
    json: Value,
    reports: Vec<Report>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => emit(&out, cli.format),
        Err(e) => {
            match cli.format {
                Format::Text => eprintln!("error[{}]: {e}", e.code()),
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "schema_version": SCHEMA_VERSION,
                        "error": { "code": e.code(), "message": e.to_string() },
                    }))
                    .expect("json")
                ),
            }
            ExitCode::from(2)
        }
    }
}

fn emit(out: &Outcome, format: Format) -> ExitCode {
    match format {
        Format::Text => {
            if !out.lines.is_empty() {
                println!("{}", out.title);
                for l in &out.lines {
                    println!("  {l}");
                }
            }
            for r in &out.reports {
                println!("{r}");
            }
        }
        Format::Json => {
            let mut v = json!({ "schema_version": SCHEMA_VERSION, "title": out.title });
            let obj = v.as_object_mut().expect("object");
            if !out.json.is_null() {
                obj.insert("result".into(), out.json.clone());
            }
            if !out.reports.is_empty() {
                obj.insert("reports".into(), json!(out.reports));
            }
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
        }
    }
    if out.reports.iter().all(Report::all_passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn load(cli: &Cli) -> Result<Session> {
    let mut s = match &cli.config {
        Some(p) => Session::load(p)?,
        None => {
            let sys = sturmian_system(QuadReal::new(-1, 1, 2, 1))?;
            Session {
                name: sys.name().to_string(),
                env: Some(Env::new(&sys)),
                diagram: None,
                caps: Caps::default(),
            }
        }
    };
    if let Some(c) = cli.cap_order {
        s.caps.order = c;
    }
    if let Some(c) = cli.cap_span {
        s.caps.span = c;
    }
    s.caps.validate()?;
    Ok(s)
}

fn decompose_options(caps: &Caps, reversed_pi: bool) -> DecomposeOptions {
    DecomposeOptions {
        reversed_pi,
        min_radius: 0,
        max_radius: caps.span,
        order_cap: caps.order,
    }
}

fn values(title: String, lines: Vec<String>, json: Value) -> Result<Outcome> {
    Ok(Outcome {
        title,
        lines,
        json,
        reports: Vec::new(),
    })
}

fn checked(title: String, reports: Vec<Report>) -> Result<Outcome> {
    Ok(Outcome {
        title,
        lines: Vec::new(),
        json: Value::Null,
        reports,
    })
}

fn run(cli: &Cli) -> Result<Outcome> {
    let session = load(cli)?;
    let caps = session.caps;
    match &cli.command {
        Command::Words { n } => {
            let env = session.env()?;
            let lang = env.sys.words(*n)?;
            let words: Vec<String> = lang.words().iter().map(|w| env.sys.render(w)).collect();
            let mut lines = vec![format!("count = {}", words.len())];
            lines.extend(words.iter().cloned());
            values(
                format!("words of length {n} in {}", session.name),
                lines,
                json!({ "n": n, "count": words.len(), "words": words }),
            )
        }
        Command::Measure { set } => {
            let env = session.env()?;
            let mu = measure(&env.clopen(set)?)?;
            values(
                format!("measure of {set}"),
                vec![format!("μ = {mu}"), format!("≈ {:.12}", mu.to_f64())],
                json!({ "set": set, "measure": mu.to_string() }),
            )
        }
        Command::Index { expr } => {
            let env = session.env()?;
            let i = index(&env.element(expr)?)?;
            values(
                format!("index of {expr}"),
                vec![format!("I = {i}")],
                json!({ "expr": expr, "index": i }),
            )
        }
        Command::Order { expr } => {
            let env = session.env()?;
            let (line, v) = match env.element(expr)?.order(caps.order)? {
                Order::Finite(n) => (format!("order = {n}"), json!(n)),
                Order::Exceeds(c) => (format!("order > {c}"), json!({ "exceeds": c })),
            };
            values(
                format!("order of {expr}"),
                vec![line],
                json!({ "expr": expr, "order": v }),
            )
        }
        Command::Sgn {
            expr,
            swap,
            reversed_pi,
            policy,
        } => {
            let env = session.env()?;
            let pres = K0Presentation::for_system(&env.sys)?;
            let opts = SgnOptions {
                swap_points: *swap,
                policy: (*policy).into(),
                decompose: decompose_options(&caps, *reversed_pi),
            };
            let s = sgn(&pres, &env.element(expr)?, opts)?;
            let basis = pres.basis_labels();
            values(
                format!("signature of {expr}"),
                vec![format!("sgn = {s} in basis ({})", basis.join(", "))],
                json!({ "expr": expr, "sgn": s.bits, "basis": basis }),
            )
        }
        Command::Class { set } => {
            let env = session.env()?;
            let pres = K0Presentation::for_system(&env.sys)?;
            let a = env.clopen(set)?;
            let coords: Vec<String> = pres.class_of(&a)?.iter().map(|c| c.to_string()).collect();
            let m2 = pres.class_mod2(&a)?;
            let basis = pres.basis_labels();
            values(
                format!("class of {set}"),
                vec![
                    format!(
                        "[1_A] = ({}) in basis ({})",
                        coords.join(", "),
                        basis.join(", ")
                    ),
                    format!("mod 2 = {m2}"),
                    format!("2-divisible = {}", pres.is_2divisible(&a)?),
                ],
                json!({ "set": set, "coordinates": coords, "basis": basis, "mod2": m2.bits }),
            )
        }
        Command::Decompose { expr, reversed_pi } => {
            let env = session.env()?;
            let pts = env.sys.points();
            if pts.len() < 2 {
                return Err(Error::Config(
                    "decomposition needs two distinguished points".into(),
                ));
            }
            let g = env.element(expr)?;
            let d = decompose(&g, &pts[0], &pts[1], decompose_options(&caps, *reversed_pi))?;
            let product_ok = d.gamma1.compose(&d.gamma2)?.equals(&g)?;
            // the factors have finite orbits; their order is an lcm that may pass the cap
            let show = |o: Order| match o {
                Order::Finite(n) => (format!("order {n}"), json!(n)),
                Order::Exceeds(c) => (format!("order > {c}"), json!({ "exceeds": c })),
            };
            let (o1, j1) = show(d.gamma1.order(caps.order)?);
            let (o2, j2) = show(d.gamma2.order(caps.order)?);
            values(
                format!("decomposition of {expr}"),
                vec![
                    format!("U = {}", d.u),
                    format!("A = {:?}, B = {:?}, π(A) = {:?}", d.a, d.b, d.pi),
                    format!("γ₁ = {} ({o1})", d.gamma1),
                    format!("γ₂ = {} ({o2})", d.gamma2),
                    format!("γ₁γ₂ = γ: {product_ok}"),
                ],
                json!({
                    "expr": expr,
                    "u": d.u.to_string(),
                    "a": d.a, "b": d.b, "pi": d.pi,
                    "gamma1": { "element": d.gamma1.to_string(), "order": j1 },
                    "gamma2": { "element": d.gamma2.to_string(), "order": j2 },
                    "product_equals": product_ok,
                }),
            )
        }
        Command::Verify { file } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", file.display())))?;
            let mut env = session.env()?.clone();
            let checks = env.run_identities(&text)?;
            let title = format!("identities of {} on {}", file.display(), session.name);
            checked(title.clone(), vec![Report::new(title, checks)])
        }
        Command::BratteliReport { levels } => {
            let b = session
                .diagram
                .clone()
                .unwrap_or_else(BratteliDiagram::example1);
            bratteli_report(&b, *levels, &caps)
        }
        Command::Examples { which, samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let mut reports = Vec::new();
            if matches!(which, Which::One | Which::All) {
                let sys = example1_system()?;
                let mut checks = verify_example1(&sys)?;
                checks.push(example1_symmetric_variant(&sys)?);
                reports.push(Report::new("substitution 0 -> 0011, 1 -> 0101", checks));
            }
            if matches!(which, Which::Two | Which::All) {
                for alpha in [QuadReal::new(-1, 1, 2, 1), QuadReal::new(0, 1, 2, 5)] {
                    let sys = sturmian_system(alpha)?;
                    reports.push(Report::new(
                        format!(
                            "Sturmian shift, α = {}",
                            sys.rotation_number().expect("sturmian")
                        ),
                        verify_example2(&sys)?,
                    ));
                }
            }
            if *samples > 0 {
                let sys = match which {
                    Which::One => example1_system()?,
                    _ => sturmian_system(QuadReal::new(-1, 1, 2, 1))?,
                };
                let mut lemma_checks = Vec::new();
                for _ in 0..*samples {
                    // U inside V feeds the τ lemma, U inside φ⁻²V the γ lemma
                    let v = random_cylinder(&sys, &mut rng, 6)?;
                    let inner = v.intersect(&random_cylinder(&sys, &mut rng, 10)?)?;
                    if inner.is_empty() {
                        continue;
                    }
                    for u in [inner.clone(), inner.shift(-2)] {
                        for mut c in verify_conjugation_identities(&v, &u)? {
                            c.name = format!("{} [V = {v}, U = {u}]", c.name);
                            lemma_checks.push(c);
                        }
                    }
                }
                // an inapplicable lemma is not a failure here
                lemma_checks.retain(|c| c.verdict != Verdict::Inapplicable);
                reports.push(Report::new(
                    format!(
                        "conjugation lemmas on {samples} sampled pairs (seed {})",
                        cli.seed
                    ),
                    lemma_checks,
                ));
            }
            checked("examples".into(), reports)
        }
    }
}

fn bratteli_report(b: &BratteliDiagram, levels: usize, caps: &Caps) -> Result<Outcome> {
    let mut lines = Vec::new();
    let mut h_json = Vec::new();
    for n in 0..=levels {
        let h: Vec<String> = b.path_counts(n)?.iter().map(|x| x.to_string()).collect();
        lines.push(format!("h(V_{n}) = ({})", h.join(", ")));
        h_json.push(h);
    }
    let simple = b.is_simple(caps.depth)?;
    lines.push(format!("simple = {simple}"));
    let mut checks = Vec::new();
    for n in 1..=levels {
        let m = b.incidence(n)?;
        let prev = b.path_counts(n - 1)?;
        let cur = b.path_counts(n)?;
        let ok = (0..cur.len()).all(|w| {
            let s: BigUint = m.iter().zip(&prev).map(|(row, hv)| hv * row[w]).sum();
            s == cur[w]
        });
        checks.push(CheckRecord::from_bool(
            format!("h(V_{n}) = h(V_{})·M_{n}", n - 1),
            "path count recursion",
            ok,
        ));
    }
    let json = match b.mod2_dimension_group(caps.depth) {
        Ok(lim) => {
            lines.push(format!(
                "K⁰ ⊗ Z₂ ≅ Z₂^{} (stable from level {}, period {}, certified {})",
                lim.dim(),
                lim.stable_from,
                lim.period,
                lim.certified
            ));
            json!({ "dim": lim.dim(), "stable_from": lim.stable_from, "period": lim.period, "certified": lim.certified })
        }
        Err(e @ Error::Inconclusive(_)) => {
            lines.push(format!("K⁰ ⊗ Z₂: inconclusive ({e})"));
            json!({ "inconclusive": e.to_string() })
        }
        Err(e) => return Err(e),
    };
    Ok(Outcome {
        title: "Bratteli diagram".into(),
        lines,
        json: json!({ "path_counts": h_json, "simple": simple, "mod2_dimension_group": json }),
        reports: vec![Report::new("path count recursion", checks)],
    })
}
