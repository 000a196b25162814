//! End-to-end acceptance suite: one line per criterion, nonzero exit if any
//! criterion fails. Runs without the libtest harness so the summary is
//! always printed.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tfg_core::bratteli::{alternating_gen_check, BratteliDiagram};
use tfg_core::generators::{
    build_standard_family, example1_symmetric_variant, example1_system, gamma_u, phi,
    random_cylinder, sigma_u, sturmian_system, tau_u, verify_example1, verify_example2,
};
use tfg_core::ktheory::{
    compute_sgn_finite, decompose, first_return, preserves_half_orbits, sgn, DecomposeOptions,
    K0Presentation, Mod2Class, SgnOptions,
};
use tfg_core::measure::{index, word_measures};
use tfg_core::report::CheckRecord;
use tfg_core::{
    ClopenSet, Error, FullGroupElement, Order, QuadReal, Result, SubshiftSystem, TransversalPolicy,
};

const SEED: u64 = 20_241_017;
const RETURN_CAP: usize = 256;
const ORDER_CAP: usize = 720;
/// Cap for the order of the decomposition factors: their orbits are short
/// but of coprime lengths, so the order (an lcm) can pass `ORDER_CAP`.
const FACTOR_ORDER_CAP: usize = 1 << 24;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        passed,
        detail: detail.into(),
    })
}

fn sqrt2_minus_1() -> Arc<SubshiftSystem> {
    sturmian_system(QuadReal::new(-1, 1, 2, 1)).unwrap()
}

fn sqrt2_over_5() -> Arc<SubshiftSystem> {
    sturmian_system(QuadReal::new(0, 1, 2, 5)).unwrap()
}

fn failures(recs: &[CheckRecord]) -> Vec<String> {
    recs.iter()
        .filter(|r| !r.passed())
        .map(|r| r.to_string())
        .collect()
}

fn within(t: Instant, limit: Duration) -> (bool, String) {
    let e = t.elapsed();
    (e < limit, format!("{:.2}s", e.as_secs_f64()))
}

fn c1_example1() -> Result<Outcome> {
    let t = Instant::now();
    let sys = example1_system()?;
    let recs = verify_example1(&sys)?;
    let variant = example1_symmetric_variant(&sys)?;
    let (fast, took) = within(t, Duration::from_secs(120));
    let bad = failures(&recs);
    let passed = recs.len() - bad.len();
    let mut detail = format!("{passed}/{} identities in {took}", recs.len());
    for b in &bad {
        detail += &format!("; {b}");
    }
    detail += &format!("; symmetric variant {}", variant.verdict);
    outcome(bad.is_empty() && fast, detail)
}

fn c2_example2() -> Result<Outcome> {
    let t = Instant::now();
    let mut detail = Vec::new();
    let mut ok = true;
    for sys in [sqrt2_minus_1(), sqrt2_over_5()] {
        let recs = verify_example2(&sys)?;
        let bad = failures(&recs);
        ok &= bad.is_empty();
        let mut d = format!("{}: {}/{}", sys.name(), recs.len() - bad.len(), recs.len());
        for b in &bad {
            d += &format!(" ({b})");
        }
        detail.push(d);
    }
    let (fast, took) = within(t, Duration::from_secs(120));
    outcome(ok && fast, format!("{} in {took}", detail.join("; ")))
}

fn c3_signature_formula() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut n = 0;
    let mut bad = Vec::new();
    for sys in [sqrt2_minus_1(), sqrt2_over_5()] {
        let pres = K0Presentation::for_system(&sys)?;
        for _ in 0..12 {
            let u = random_cylinder(&sys, &mut rng, 4)?;
            let v = random_cylinder(&sys, &mut rng, 4)?;
            let g =
                first_return(&u, RETURN_CAP)?.compose(&first_return(&v, RETURN_CAP)?.inverse())?;
            let got = sgn(&pres, &g, SgnOptions::default())?;
            let want = pres.class_mod2(&u)? + pres.class_mod2(&v)?;
            n += 1;
            if got != want {
                bad.push(format!("U={u} V={v}: sgn {got}, classes {want}"));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{}/{n} pairs; {}", n - bad.len(), bad.join("; ")),
    )
}

/// A pool of named elements of the Sturmian full group: the standard
/// generating family carried back from its separated presentation,
/// involutions on random admissible cylinders, first returns, and `φ`.
fn element_pool(
    sys: &Arc<SubshiftSystem>,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(String, FullGroupElement)>> {
    let fam = build_standard_family(sys, true)?;
    let mut pool = Vec::new();
    for (name, g) in &fam.elements {
        pool.push((name.clone(), fam.recoding.to_base(g)?));
    }
    let mut sigmas = 0;
    while sigmas < 4 {
        let u = random_cylinder(sys, rng, 4)?;
        if let Ok(s) = sigma_u(&u) {
            pool.push((format!("sigma{u}"), s));
            sigmas += 1;
        }
    }
    pool.push(("phi".into(), phi(sys)));
    let u = random_cylinder(sys, rng, 3)?;
    pool.push((format!("first_return{u}"), first_return(&u, RETURN_CAP)?));
    Ok(pool)
}

fn random_word(
    pool: &[(String, FullGroupElement)],
    rng: &mut ChaCha8Rng,
    max_len: usize,
) -> Result<(String, FullGroupElement)> {
    let len = rng.gen_range(1..=max_len);
    let mut name = Vec::new();
    let mut g: Option<FullGroupElement> = None;
    for _ in 0..len {
        let (n, e) = &pool[rng.gen_range(0..pool.len())];
        let (n, e) = if rng.gen_bool(0.5) {
            (format!("{n}^-1"), e.inverse())
        } else {
            (n.clone(), e.clone())
        };
        name.push(n);
        g = Some(match g {
            None => e,
            Some(g) => g.compose(&e)?,
        });
    }
    Ok((name.join(" "), g.unwrap()))
}

fn c4_homomorphisms() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let mut bad = Vec::new();
    let (mut words, mut index_checks, mut sgn_checks) = (0, 0, 0);
    for sys in [sqrt2_minus_1(), sqrt2_over_5()] {
        let pres = K0Presentation::for_system(&sys)?;
        let pool = element_pool(&sys, &mut rng)?;
        for _ in 0..30 {
            let (na, a) = random_word(&pool, &mut rng, 2)?;
            let (nb, b) = random_word(&pool, &mut rng, 2)?;
            words += 2;
            let ab = a.compose(&b)?;
            let (ia, ib, iab) = (index(&a)?, index(&b)?, index(&ab)?);
            index_checks += 1;
            if iab != ia + ib {
                bad.push(format!("I({na} · {nb}) = {iab} ≠ {ia} + {ib}"));
            }
            if ia == 0 && ib == 0 {
                let opts = SgnOptions::default();
                let (sa, sb, sab) = (
                    sgn(&pres, &a, opts)?,
                    sgn(&pres, &b, opts)?,
                    sgn(&pres, &ab, opts)?,
                );
                sgn_checks += 1;
                if sab != sa.clone() + sb.clone() {
                    bad.push(format!("sgn({na} · {nb}) = {sab} ≠ {sa} + {sb}"));
                }
            }
        }
    }
    outcome(
        bad.is_empty() && words >= 100,
        format!(
            "{words} words, {index_checks} index and {sgn_checks} signature checks; {}",
            bad.join("; ")
        ),
    )
}

/// Random finite-order elements: `γ_U`, `τ_U`, `σ_U` on random admissible
/// cylinders, conjugated by random shifts and involutions.
fn random_finite_order(
    sys: &Arc<SubshiftSystem>,
    rng: &mut ChaCha8Rng,
) -> Result<(String, FullGroupElement)> {
    loop {
        let u = random_cylinder(sys, rng, 5)?;
        let base = match rng.gen_range(0..3) {
            0 => gamma_u(&u).map(|g| (format!("gamma{u}"), g)),
            1 => tau_u(&u).map(|g| (format!("tau{u}"), g)),
            _ => sigma_u(&u).map(|g| (format!("sigma{u}"), g)),
        };
        let (name, g) = match base {
            Ok(x) => x,
            Err(Error::DisjointnessViolated(_)) => continue,
            Err(e) => return Err(e),
        };
        let v = random_cylinder(sys, rng, 3)?;
        return Ok(match (rng.gen_range(0..3), sigma_u(&v)) {
            (0, Ok(s)) => (
                format!("{name} conjugated by sigma{v}"),
                g.conjugate_by(&s)?,
            ),
            (1, _) => {
                let k = rng.gen_range(-3..=3);
                (
                    format!("{name} conjugated by phi^{k}"),
                    g.conjugate_by(&phi(sys).pow(k)?)?,
                )
            }
            _ => (name, g),
        });
    }
}

fn c5_well_defined() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let mut n = 0;
    let mut bad = Vec::new();
    for sys in [sqrt2_minus_1(), sqrt2_over_5()] {
        let pres = K0Presentation::for_system(&sys)?;
        for _ in 0..12 {
            let (name, g) = random_finite_order(&sys, &mut rng)?;
            let base = SgnOptions::default();
            let variants = [
                (
                    "swapped points",
                    SgnOptions {
                        swap_points: true,
                        ..base
                    },
                ),
                (
                    "reversed π",
                    SgnOptions {
                        decompose: DecomposeOptions {
                            reversed_pi: true,
                            ..base.decompose
                        },
                        ..base
                    },
                ),
                (
                    "leftmost transversal",
                    SgnOptions {
                        policy: TransversalPolicy::Leftmost,
                        ..base
                    },
                ),
                (
                    "rightmost transversal",
                    SgnOptions {
                        policy: TransversalPolicy::Rightmost,
                        ..base
                    },
                ),
            ];
            let reference = sgn(&pres, &g, base)?;
            let mut seen: Vec<(&str, Mod2Class)> = Vec::new();
            for (label, opts) in variants {
                seen.push((label, sgn(&pres, &g, opts)?));
            }
            seen.push((
                "finite-order formula",
                compute_sgn_finite(&pres, &g, TransversalPolicy::LexLeast, ORDER_CAP)?,
            ));
            n += 1;
            for (label, s) in seen {
                if s != reference {
                    bad.push(format!("{name}: {label} gives {s}, default {reference}"));
                }
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{}/{n} elements consistent; {}",
            n - bad.len().min(n),
            bad.join("; ")
        ),
    )
}

fn c6_orders() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let mut counts = [0usize; 3];
    let mut bad = Vec::new();
    for sys in [example1_system()?, sqrt2_minus_1(), sqrt2_over_5()] {
        for _ in 0..40 {
            let mut u = random_cylinder(&sys, &mut rng, 6)?;
            if rng.gen_bool(0.3) {
                // a union of two cylinders
                u = u.union(&random_cylinder(&sys, &mut rng, 6)?)?;
            }
            let makers: [(&str, fn(&ClopenSet) -> Result<FullGroupElement>, usize); 3] = [
                ("gamma", gamma_u, 3),
                ("tau", tau_u, 5),
                ("sigma", sigma_u, 2),
            ];
            for (i, (name, make, want)) in makers.into_iter().enumerate() {
                match make(&u) {
                    Ok(g) => {
                        counts[i] += 1;
                        let got = g.order(ORDER_CAP)?;
                        if got != Order::Finite(want) {
                            bad.push(format!("{}: order({name}{u}) = {got:?}", sys.name()));
                        }
                    }
                    Err(Error::DisjointnessViolated(_)) => {}
                    Err(e) => return Err(e),
                }
            }
        }
    }
    outcome(
        bad.is_empty() && counts.iter().all(|&c| c > 0),
        format!(
            "admissible samples: {} γ, {} τ, {} σ; {}",
            counts[0],
            counts[1],
            counts[2],
            bad.join("; ")
        ),
    )
}

fn c7_bratteli() -> Result<Outcome> {
    let t = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;

    let ex = BratteliDiagram::example1();
    let simple = ex.is_simple(8)?;
    let lim = ex.mod2_dimension_group(16)?;
    let mut recursion = true;
    for n in 1..=8 {
        let prev = ex.path_counts(n - 1)?;
        let cur = ex.path_counts(n)?;
        let m = ex.incidence(n)?;
        for (w, h) in cur.iter().enumerate() {
            let sum: num_bigint::BigUint =
                prev.iter().zip(m.iter()).map(|(hv, row)| hv * row[w]).sum();
            recursion &= &sum == h;
        }
    }
    let h: Vec<String> = (1..=5)
        .map(|n| format!("{}", ex.path_counts(n).unwrap()[0]))
        .collect();
    ok &= simple && lim.is_trivial() && lim.certified && recursion;
    notes.push(format!(
        "example diagram: simple {simple}, h = {}, …, recursion {recursion}, mod-2 group Z₂^{}",
        h.join(", "),
        lim.dim()
    ));

    let id = BratteliDiagram::stationary(vec![vec![1, 1]], vec![vec![1, 0], vec![0, 1]])?;
    let lim = id.mod2_dimension_group(16)?;
    let simple = id.is_simple(8)?;
    ok &= lim.dim() == 2 && lim.certified;
    notes.push(format!(
        "identity diagram: mod-2 group Z₂^{}, simple {simple}",
        lim.dim()
    ));

    let (fast, took) = within(t, Duration::from_secs(10));
    outcome(ok && fast, format!("{} in {took}", notes.join("; ")))
}

fn c8_alternating() -> Result<Outcome> {
    let t = Instant::now();
    let mut sizes = Vec::new();
    let mut ok = true;
    for n in 3..=7 {
        let (size, full) = alternating_gen_check(n)?;
        let half: usize = (1..=n).product::<usize>() / 2;
        ok &= full && size == half;
        sizes.push(size.to_string());
    }
    let expected = ["3", "12", "60", "360", "2520"];
    ok &= sizes == expected;
    let (fast, took) = within(t, Duration::from_secs(30));
    outcome(
        ok && fast,
        format!("closure sizes {} in {took}", sizes.join(", ")),
    )
}

fn c9_decomposition() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 9);
    let mut n = 0;
    let mut nontrivial = 0;
    let mut max_order = 0;
    let mut bad = Vec::new();
    for sys in [sqrt2_minus_1(), sqrt2_over_5()] {
        let (x, y) = (&sys.points()[0], &sys.points()[1]);
        let mut drawn = 0;
        while drawn < 12 {
            let u = random_cylinder(&sys, &mut rng, 4)?;
            let v = random_cylinder(&sys, &mut rng, 4)?;
            let mut g =
                first_return(&u, RETURN_CAP)?.compose(&first_return(&v, RETURN_CAP)?.inverse())?;
            if rng.gen_bool(0.5) {
                let (_, f) = random_finite_order(&sys, &mut rng)?;
                g = g.compose(&f)?;
            }
            if index(&g)? != 0 {
                continue;
            }
            drawn += 1;
            n += 1;
            for reversed_pi in [false, true] {
                let opts = DecomposeOptions {
                    reversed_pi,
                    order_cap: FACTOR_ORDER_CAP,
                    ..Default::default()
                };
                let d = decompose(&g, x, y, opts)?;
                if !d.a.is_empty() && !reversed_pi {
                    nontrivial += 1;
                }
                let mut fine = d.gamma1.compose(&d.gamma2)?.equals(&g)?
                    && preserves_half_orbits(&d.gamma1, x)?
                    && preserves_half_orbits(&d.gamma2, y)?;
                for h in [&d.gamma1, &d.gamma2] {
                    match h.order(FACTOR_ORDER_CAP)? {
                        Order::Finite(k) => max_order = max_order.max(k),
                        Order::Exceeds(_) => fine = false,
                    }
                }
                if !fine {
                    bad.push(format!(
                        "{}: {} (reversed π {reversed_pi})",
                        sys.name(),
                        d.u
                    ));
                }
            }
        }
    }
    outcome(
        bad.is_empty() && n >= 20,
        format!(
            "{}/{n} elements ({nontrivial} crossing the cut at x), largest factor order {max_order}; {}",
            n - bad.len().min(n),
            bad.join("; ")
        ),
    )
}

/// Sturmian words of length `n` from the `n + 1` arcs cut out by
/// `α, 0, -α, …, -(n-1)α`, coded in floating point at arc midpoints.
fn rotation_words(alpha: f64, n: usize) -> BTreeSet<String> {
    let mut cuts: Vec<f64> = (-1..n as i64)
        .map(|k| (-(k as f64) * alpha).rem_euclid(1.0))
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut out = BTreeSet::new();
    for i in 0..cuts.len() {
        let a = cuts[i];
        let b = if i + 1 < cuts.len() {
            cuts[i + 1]
        } else {
            cuts[0] + 1.0
        };
        let t = (a + b) / 2.0;
        let w: String = (0..n)
            .map(|j| {
                if (t + j as f64 * alpha).rem_euclid(1.0) < alpha {
                    '0'
                } else {
                    '1'
                }
            })
            .collect();
        out.insert(w);
    }
    out
}

fn c10_oracles() -> Result<Outcome> {
    let mut notes = Vec::new();
    let mut ok = true;
    for sys in [sqrt2_minus_1(), sqrt2_over_5()] {
        let alpha = sys.rotation_number().unwrap().to_f64();
        let mut complexity = true;
        for n in 1..=30 {
            let lang = sys.words(n)?;
            let ours: BTreeSet<String> = lang.words().iter().map(|w| sys.render(w)).collect();
            complexity &= lang.len() == n + 1 && ours == rotation_words(alpha, n);
        }
        ok &= complexity;
        notes.push(format!(
            "{}: complexity n+1 and brute-force agreement {complexity}",
            sys.name()
        ));
    }
    for sys in [example1_system()?, sqrt2_minus_1(), sqrt2_over_5()] {
        let mut consistent = true;
        for n in 0..10 {
            let short = sys.words(n)?;
            let long = sys.words(n + 1)?;
            let (ms, ml) = (word_measures(&sys, n)?, word_measures(&sys, n + 1)?);
            for (w, mu) in short.words().iter().zip(ms.iter()) {
                let mut right = QuadReal::zero();
                let mut left = QuadReal::zero();
                for a in sys.alphabet().letters() {
                    let mut wa = w.clone();
                    wa.push(a);
                    let mut aw = vec![a];
                    aw.extend_from_slice(w);
                    if let Some(i) = long.position(&wa) {
                        right = &right + &ml[i];
                    }
                    if let Some(i) = long.position(&aw) {
                        left = &left + &ml[i];
                    }
                }
                consistent &= &right == mu && &left == mu;
            }
        }
        ok &= consistent;
        notes.push(format!(
            "{}: measure consistency to length 10 {consistent}",
            sys.name()
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 10);
    let mut zero = true;
    let mut checked = 0;
    for sys in [sqrt2_minus_1(), sqrt2_over_5()] {
        for _ in 0..15 {
            let (_, g) = random_finite_order(&sys, &mut rng)?;
            checked += 1;
            zero &= matches!(g.order(ORDER_CAP)?, Order::Finite(_)) && index(&g)? == 0;
        }
    }
    ok &= zero;
    notes.push(format!("index 0 on {checked} finite-order elements {zero}"));
    outcome(ok, notes.join("; "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Outcome>); 10] = [
        ("example 1 identity suite", c1_example1),
        ("example 2 identity suite", c2_example2),
        ("signature of φ_U φ_V⁻¹", c3_signature_formula),
        ("index and signature homomorphisms", c4_homomorphisms),
        ("signature well-definedness", c5_well_defined),
        ("orders of γ_U, τ_U, σ_U", c6_orders),
        ("Bratteli diagrams", c7_bratteli),
        ("alternating groups from 3-cycles", c8_alternating),
        ("decomposition contract", c9_decomposition),
        ("oracle cross-checks", c10_oracles),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (passed, detail) = match run() {
            Ok(o) => (o.passed, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        all &= passed;
        let detail = detail.trim_end_matches("; ").to_string();
        println!(
            "criterion {:>2} [{}] {name} ({:.1}s): {detail}",
            i + 1,
            if passed { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
