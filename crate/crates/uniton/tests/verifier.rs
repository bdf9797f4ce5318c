//! Verifier behaviour on passing chains, on the constructed violators, and on
//! misconfigured finite-difference steps.

use uniton::engine::{F0Array, UnitonChain};
use uniton::presets::preset;
use uniton::verifier::{
    check_closure, check_raw_sections, check_splitting, check_unitary_involution, is_unitary_at, run_checks, CheckKind, FdConfig,
};
use uniton::{DdComplex, Error, Field, GaussRat};

fn g(s: &str) -> GaussRat {
    s.parse().unwrap()
}

fn sample() -> Vec<GaussRat> {
    vec![g("1/2+1/3i"), g("-3/4+2/5i")]
}

fn zero() -> DdComplex {
    DdComplex::from_i64(0)
}

fn one() -> DdComplex {
    DdComplex::from_i64(1)
}

#[test]
fn antiholomorphic_section_fails_dbar_closure() {
    let cfg = FdConfig::default();
    let (rep, parts) = check_raw_sections(2, &|z| vec![vec![z.conj(), zero()]], &sample(), &cfg).unwrap();
    assert!(!rep.pass);
    assert!(rep.max_residual() >= 1e-2, "{}", rep.max_residual());
    assert!(parts.iter().all(|p| p.holomorphic >= 1e-2));
}

#[test]
fn tilted_antiholomorphic_section_leaves_its_span() {
    let cfg = FdConfig::default();
    let (rep, parts) = check_raw_sections(2, &|z| vec![vec![one(), z.conj()]], &sample(), &cfg).unwrap();
    assert!(!rep.pass);
    assert!(parts.iter().all(|p| p.dbar_closure >= 1e-2), "{parts:?}");
}

#[test]
fn holomorphic_raw_section_passes() {
    let cfg = FdConfig::default();
    let (rep, _) = check_raw_sections(3, &|z| vec![vec![one(), *z, *z * *z]], &sample(), &cfg).unwrap();
    assert!(rep.pass, "{:?}", rep.detail);
    assert!(rep.max_residual() <= 1e-9);
}

#[test]
fn broken_pattern_is_unitary_but_not_an_involution() {
    let c = preset("broken-pattern").unwrap().build_chain().unwrap();
    let pts = sample();
    for z in &pts {
        assert!(is_unitary_at(&c, c.r, z).unwrap());
    }
    let inv = check_unitary_involution(&c, None, &pts).unwrap();
    assert!(!inv.pass);
    assert!(inv.detail.iter().any(|d| d.contains("not Hermitian")));
    assert!(inv.detail.iter().all(|d| !d.contains("not unitary")));
    assert!(!check_splitting(&c, None, &pts).unwrap().pass);
}

#[test]
fn constant_chain_passes_with_zero_residuals() {
    let a = F0Array::new(4, 2, vec![]).unwrap();
    let c = UnitonChain::from_array(&a, 1).unwrap();
    let reports = run_checks(&c, &CheckKind::ALL, &sample(), &FdConfig::default()).unwrap();
    for r in reports {
        assert!(r.pass, "{}", r.check);
        assert_eq!(r.max_residual(), 0.0, "{}", r.check);
    }
}

#[test]
fn second_order_convergence_is_reported() {
    let c = preset("u3-example").unwrap().build_chain().unwrap();
    let cfg = FdConfig::default();
    let rep = check_closure(&c, None, &sample(), &cfg).unwrap();
    let half = rep.residuals_half_step.clone().unwrap();
    assert_eq!(half.len(), rep.residuals.len());
    assert!(rep.pass && rep.contracts(cfg.tol_floor));
}

#[test]
fn oversized_step_is_refused() {
    let c = preset("u3-example").unwrap().build_chain().unwrap();
    let cfg = FdConfig { h: 0.5, ..FdConfig::default() };
    let err = run_checks(&c, &[CheckKind::Harmonicity], &sample(), &cfg).unwrap_err();
    assert!(matches!(err, Error::StepTooLarge { .. }), "{err}");
}

#[test]
fn level_out_of_range() {
    let c = preset("u3-example").unwrap().build_chain().unwrap();
    assert!(matches!(check_unitary_involution(&c, Some(3), &sample()), Err(Error::OutOfRange(_))));
}

#[test]
fn check_names_round_trip() {
    for k in CheckKind::ALL {
        assert_eq!(k.name().parse::<CheckKind>().unwrap(), k);
    }
    assert!(matches!("energy".parse::<CheckKind>(), Err(Error::Parse(_))));
}
