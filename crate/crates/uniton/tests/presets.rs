//! Frozen preset data: generic ranks, pair bookkeeping, and the full set of
//! verifier and loop-model checks on every Grassmannian preset.

use uniton::combinatorics::{matching_check, rank_formula};
use uniton::loop_model::loop_report;
use uniton::presets::{grassmannian_presets, preset, PRESET_NAMES};
use uniton::scenario::Scenario;
use uniton::verifier::{run_checks, CheckKind, FdConfig};
use uniton::{Error, GaussRat};

/// `(name, α ranks, F ranks)` as computed once at the preset points.
const GOLDEN: &[(&str, &[usize], Option<&[usize]>)] = &[
    ("u3-example", &[1, 2], Some(&[3, 1, 2])),
    ("c10-example", &[2, 6, 9], Some(&[5, 5, 5, 6])),
    ("dim2-example", &[2, 4, 5], Some(&[2, 8, 2, 7])),
    ("g2c5-case-a", &[1, 2, 3], Some(&[5, 1, 4, 2])),
    ("g2c5-case-b", &[2, 3, 4], Some(&[4, 1, 3, 2])),
    ("g2c5-case-c", &[1, 2, 4], Some(&[0, 4, 1, 2])),
    ("g4c8-stay", &[2, 4, 6], Some(&[4, 4, 4, 4])),
    ("g3c8-max", &[2, 4, 7], Some(&[4, 4, 4, 3])),
    ("broken-pattern", &[1, 2], None),
];

fn first(points: Vec<GaussRat>, m: usize) -> Vec<GaussRat> {
    points.into_iter().take(m).collect()
}

#[test]
fn golden_table_covers_every_preset() {
    let names: Vec<&str> = GOLDEN.iter().map(|g| g.0).collect();
    assert_eq!(names, PRESET_NAMES);
}

#[test]
fn generic_ranks_are_frozen() {
    for (name, alpha, f) in GOLDEN {
        let c = preset(name).unwrap().build_chain().unwrap();
        let g = c.generic.as_ref().unwrap();
        assert_eq!(g.alpha_ranks, *alpha, "{name}");
        assert_eq!(g.f_ranks.as_deref(), *f, "{name}");
    }
}

#[test]
fn published_example_values() {
    let ranks = |name| preset(name).unwrap().build_chain().unwrap().generic.unwrap();
    assert_eq!(ranks("u3-example").alpha_ranks, vec![1, 2]);
    assert_eq!(ranks("c10-example").alpha_ranks, vec![2, 6, 9]);
    // Two-dimensional F₀ in Cⁿ: F-chain ranks 2, n − 2, 2, n − 3.
    let n = 10;
    assert_eq!(ranks("dim2-example").f_ranks.unwrap(), vec![2, n - 2, 2, n - 3]);
    assert_eq!(&ranks("g4c8-stay").f_ranks.unwrap()[1..], &[4, 4, 4]);
}

#[test]
fn pairs_match_and_count_correctly() {
    for name in grassmannian_presets() {
        let s = preset(name).unwrap();
        let pair = s.pair.clone().unwrap();
        let array = s.to_array().unwrap();
        let c = s.build_chain().unwrap();
        let pts = first(c.generic_points(), 2);
        let m = matching_check(&array, &pair, &pts).unwrap();
        assert!(m.passed, "{name}: {:?}", m.failures);
        let predicted: Vec<usize> = (0..=pair.r()).map(|i| rank_formula(&pair, i).unwrap()).collect();
        assert_eq!(c.generic.unwrap().f_ranks.unwrap(), predicted, "{name}");
    }
}

#[test]
fn every_check_passes_on_grassmannian_presets() {
    let cfg = FdConfig::default();
    for name in grassmannian_presets() {
        let c = preset(name).unwrap().build_chain().unwrap();
        let pts = first(c.generic_points(), 1);
        let reports = run_checks(&c, &CheckKind::ALL, &pts, &cfg).unwrap();
        assert_eq!(reports.len(), CheckKind::ALL.len());
        for r in &reports {
            assert!(r.pass, "{name} {}: {:?}", r.check, r.detail);
            assert!(r.contracts(cfg.tol_floor), "{name} {}", r.check);
        }
    }
}

#[test]
fn loop_model_passes_on_grassmannian_presets() {
    let cfg = FdConfig::default();
    for name in grassmannian_presets() {
        let c = preset(name).unwrap().build_chain().unwrap();
        let rep = loop_report(&c, &first(c.generic_points(), 1), &cfg).unwrap();
        assert!(rep.pass, "{name}: {:?}", rep.detail);
        assert!(rep.phi_at_one_is_identity && rep.phi_at_minus_one_matches && rep.shift_stable && rep.adapted);
        assert!(rep.equation_residuals.iter().all(|e| *e <= 1e-6), "{name}: {:?}", rep.equation_residuals);
    }
}

#[test]
fn presets_survive_json() {
    for name in PRESET_NAMES {
        let s = preset(name).unwrap();
        assert_eq!(Scenario::from_json(&s.to_json()).unwrap(), s, "{name}");
    }
}

#[test]
fn unknown_preset_is_rejected() {
    assert!(matches!(preset("g9c9"), Err(Error::BadArguments(_))));
}
