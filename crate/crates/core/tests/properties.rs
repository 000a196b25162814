use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tfg_core::config::Session;
use tfg_core::generators::{
    build_standard_family, derivation_closure, example1_system, gamma_u, phi, random_cylinder,
    sigma_u, sturmian_system, tau_u, verify_conjugation_identities,
};
use tfg_core::ktheory::{first_return, sgn, K0Presentation, SgnOptions};
use tfg_core::measure::{index, measure};
use tfg_core::report::Verdict;
use tfg_core::{ClopenSet, FullGroupElement, QuadReal, SubshiftSystem};

fn systems() -> Vec<Arc<SubshiftSystem>> {
    vec![
        example1_system().unwrap(),
        sturmian_system(QuadReal::new(-1, 1, 2, 1)).unwrap(),
        sturmian_system(QuadReal::new(0, 1, 2, 5)).unwrap(),
    ]
}

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn conjugation_lemmas_hold_on_sampled_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    for sys in systems() {
        let (mut tau_checks, mut gamma_checks, mut attempts) = (0, 0, 0);
        while (tau_checks < 50 || gamma_checks < 50) && attempts < 5000 {
            attempts += 1;
            let v = random_cylinder(&sys, &mut rng, 6).unwrap();
            let u = if rng.gen_bool(0.5) {
                v.intersect(&random_cylinder(&sys, &mut rng, 9).unwrap())
                    .unwrap()
            } else {
                random_cylinder(&sys, &mut rng, 6)
                    .unwrap()
                    .shift(rng.gen_range(-4..=-2))
            };
            if u.is_empty() {
                continue;
            }
            for rec in verify_conjugation_identities(&v, &u).unwrap() {
                assert_ne!(
                    rec.verdict,
                    Verdict::Fail,
                    "{}: V = {v}, U = {u}: {rec}",
                    sys.name()
                );
                if rec.verdict == Verdict::Pass {
                    if rec.name.starts_with('τ') {
                        tau_checks += 1;
                    } else {
                        gamma_checks += 1;
                    }
                }
            }
        }
        assert!(
            tau_checks >= 50 && gamma_checks >= 50,
            "{}: {tau_checks} τ, {gamma_checks} γ",
            sys.name()
        );
    }
}

#[test]
fn signature_vanishes_on_commutators_and_is_shift_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    for sys in systems().into_iter().skip(1) {
        let pres = K0Presentation::for_system(&sys).unwrap();
        let opts = SgnOptions::default();
        let mut done = 0;
        while done < 8 {
            let (u, v) = (
                random_cylinder(&sys, &mut rng, 4).unwrap(),
                random_cylinder(&sys, &mut rng, 4).unwrap(),
            );
            let (Ok(a), Ok(b)) = (sigma_u(&u), sigma_u(&v)) else {
                continue;
            };
            done += 1;
            let c = FullGroupElement::commutator(&a, &b).unwrap();
            assert!(sgn(&pres, &c, opts).unwrap().is_zero(), "[σ{u}, σ{v}]");
            let shifted = a.conjugate_by(&phi(&sys)).unwrap();
            assert_eq!(
                sgn(&pres, &shifted, opts).unwrap(),
                sgn(&pres, &a, opts).unwrap()
            );
            assert_eq!(sgn(&pres, &a, opts).unwrap(), pres.class_mod2(&u).unwrap());
            if let Ok(g) = gamma_u(&u) {
                assert!(sgn(&pres, &g, opts).unwrap().is_zero());
            }
            if let Ok(t) = tau_u(&u) {
                assert!(sgn(&pres, &t, opts).unwrap().is_zero());
            }
        }
    }
}

#[test]
fn first_returns_have_index_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    for sys in systems() {
        for _ in 0..10 {
            let u = random_cylinder(&sys, &mut rng, 5).unwrap();
            let r = first_return(&u, 256).unwrap();
            assert_eq!(index(&r).unwrap(), 1, "{}: φ_{u}", sys.name());
            assert!(u
                .complement()
                .unwrap()
                .is_subset(&r.fixed_set().unwrap())
                .unwrap());
        }
    }
}

#[test]
fn derivation_closure_reaches_span_six() {
    let sys = sturmian_system(QuadReal::new(-1, 1, 2, 1)).unwrap();
    let fam = build_standard_family(&sys, true).unwrap();
    let steps = derivation_closure(&fam, 6).unwrap();
    let bad: Vec<_> = steps.iter().filter(|s| !s.verified).collect();
    assert!(bad.is_empty(), "{bad:?}");
    assert!(steps.iter().any(|s| s.rule.starts_with("commutator")));
    assert!(steps.iter().any(|s| s.rule.starts_with("τ-conjugation")));
}

#[test]
fn fixtures_load() {
    for f in [
        "example1.toml",
        "sturmian_sqrt2.toml",
        "sturmian_sqrt2_over_5.toml",
    ] {
        let s = Session::load(std::path::Path::new(&fixture(f))).unwrap();
        let env = s.env().unwrap();
        assert_eq!(env.sys.points().len(), 2, "{f}");
        assert!(!env.elements.is_empty());
    }
    for f in ["example1_diagram.toml", "identity_diagram.toml"] {
        let s = Session::load(std::path::Path::new(&fixture(f))).unwrap();
        assert!(s.diagram().is_ok());
    }
}

/// Irrational `(p + q√2)/r` in `(0, 1)`.
fn irrational_alpha() -> impl Strategy<Value = QuadReal> {
    (-6i64..=6, 1i64..=4, 1i64..=12).prop_filter_map("not in (0, 1)", |(p, q, r)| {
        let a = QuadReal::new(p, q, 2, r);
        (a > QuadReal::zero() && a < QuadReal::one()).then_some(a)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sturmian_complexity_is_n_plus_one(alpha in irrational_alpha(), n in 1usize..24) {
        let sys = SubshiftSystem::sturmian("s", alpha.clone(), vec![]).unwrap();
        let lang = sys.words(n).unwrap();
        prop_assert_eq!(lang.len(), n + 1);
        let mu: QuadReal = lang
            .words()
            .iter()
            .map(|w| measure(&ClopenSet::cylinder(&sys, w, 0).unwrap()).unwrap())
            .sum();
        prop_assert_eq!(mu, QuadReal::one());
        prop_assert_eq!(measure(&ClopenSet::dotted(&sys, "0.").unwrap()).unwrap(), alpha);
    }

    #[test]
    fn index_is_additive(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = sturmian_system(QuadReal::new(-1, 1, 2, 1)).unwrap();
        let pick = |rng: &mut ChaCha8Rng| -> FullGroupElement {
            loop {
                let u = random_cylinder(&sys, rng, 4).unwrap();
                let g = match rng.gen_range(0..3) {
                    0 => first_return(&u, 256),
                    1 => sigma_u(&u),
                    _ => Ok(phi(&sys).pow(rng.gen_range(-2..=2)).unwrap()),
                };
                if let Ok(g) = g {
                    return if rng.gen_bool(0.5) { g.inverse() } else { g };
                }
            }
        };
        let (a, b) = (pick(&mut rng), pick(&mut rng));
        let ab = a.compose(&b).unwrap();
        prop_assert_eq!(index(&ab).unwrap(), index(&a).unwrap() + index(&b).unwrap());
    }
}
