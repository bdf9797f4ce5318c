//! Extended solutions and the Grassmannian model on small hand-checked cases.

use uniton::engine::{F0Array, UnitonChain};
use uniton::linalg::{Frame, Matrix};
use uniton::loop_model::{
    exact_lambdas, extended_solution_at, f0_adapted_check, model_space, model_space_from_x, polynomial_coefficients, Adaptedness,
};
use uniton::presets::preset;
use uniton::ratfun::MeroVector;
use uniton::{Error, GaussRat};

fn g(s: &str) -> GaussRat {
    s.parse().unwrap()
}

fn ints(v: &[i64]) -> Vec<GaussRat> {
    v.iter().map(|&a| GaussRat::from_ints(a, 0)).collect()
}

#[test]
fn adaptedness_classes() {
    // n = 2, r = 2, F₀ = span{e₁}.
    let p = Frame::<GaussRat>::standard(2, 0..1).projector();
    let vs = vec![ints(&[1, 0, 0, 3]), ints(&[0, 2, 1, 0]), ints(&[0, 0, 0, 0]), ints(&[1, 0, 1, 0]), ints(&[1, 1, 0, 0])];
    let rep = f0_adapted_check(&vs, 2, 2, &p).unwrap();
    use Adaptedness::*;
    assert_eq!(rep.classes, vec![TypeI, TypeII, Both, Neither, Neither]);
    assert!(!rep.all_adapted);
    assert!(f0_adapted_check(&vs[..3], 2, 2, &p).unwrap().all_adapted);
    assert!(matches!(f0_adapted_check(&[ints(&[1, 0])], 2, 2, &p), Err(Error::BadArguments(_))));
}

#[test]
fn order_one_model_is_the_first_uniton() {
    // K₀ = [(1, z, 0), (0, 0, 1)], F₀ = span{e₁, e₂}.
    let n = 3;
    let k0 = MeroVector::from_poly_coeffs(vec![ints(&[1]), ints(&[0, 1]), vec![]]);
    let k1 = MeroVector::from_poly_coeffs(vec![vec![], vec![], ints(&[1])]);
    let a = F0Array::new(n, 2, vec![vec![k0.clone(), k1.clone(), MeroVector::zero(n)]]).unwrap();
    let c = UnitonChain::from_array(&a, 1).unwrap();
    let z = g("2/3-1/4i");
    let w = model_space(&c, &z, None).unwrap();
    assert!(w.shift_stable());
    let alpha = Frame::new(n, vec![k0.eval_in(&z).unwrap(), k1.eval_in(&z).unwrap()]);
    assert_eq!(w.dim(), 2);
    assert!(Frame::new(n, w.basis.clone()).same_span(&alpha));
    assert!(Frame::new(n, w.basis.clone()).same_span(&c.alpha_at(0, &z).unwrap()));
    assert!(matches!(c.alpha_at::<GaussRat>(1, &z), Err(Error::OutOfRange(_))));
}

#[test]
fn truncated_jets_break_shift_stability() {
    let c = preset("u3-example").unwrap().build_chain().unwrap();
    let z = g("1/2+1/3i");
    assert!(model_space(&c, &z, None).unwrap().shift_stable());
    assert!(!model_space(&c, &z, Some(0)).unwrap().shift_stable());
}

#[test]
fn partial_sums_span_the_same_model() {
    for name in ["u3-example", "g2c5-case-b", "g4c8-stay"] {
        let c = preset(name).unwrap().build_chain().unwrap();
        let z = g("-2/3+1/5i");
        assert!(model_space(&c, &z, None).unwrap().same_span(&model_space_from_x(&c, &z, None).unwrap()), "{name}");
    }
}

#[test]
fn extended_solution_identities() {
    let c = preset("g2c5-case-a").unwrap().build_chain().unwrap();
    let z = g("3/4-2/7i");
    let n = c.n;
    let [one, minus, i, _] = exact_lambdas();
    assert_eq!(extended_solution_at(&c, &z, &one).unwrap(), Matrix::identity(n));
    assert_eq!(c.q_matrix().mul(&extended_solution_at(&c, &z, &minus).unwrap()), c.phi_at(c.r, &z).unwrap());
    let phi_i = extended_solution_at(&c, &z, &i).unwrap();
    assert_eq!(phi_i.mul(&phi_i.adjoint()), Matrix::identity(n));
    // Φ_λ = Σ λ^j T_j with the sum of the coefficients equal to I.
    let t = polynomial_coefficients(&c, &z).unwrap();
    assert_eq!(t.len(), c.r + 1);
    let at_i = t.iter().rev().fold(Matrix::zeros(n, n), |acc, m| acc.scale(&i).add(m));
    assert_eq!(at_i, phi_i);
}
