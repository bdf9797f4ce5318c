//! Extended solutions `Φ_λ = (π₁+λπ₁⊥)⋯(π_r+λπ_r⊥)` and the Grassmannian
//! model `W ⊂ C^{rn}`.
//!
//! Block vectors in `C^{rn}` are stored flat, block `t` occupying entries
//! `t·n..(t+1)·n`; block `t` is the coefficient of `λ^t`. Multiplying by `λ`
//! moves every block up by one and drops the last.

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::engine::{ProjectionStack, UnitonChain};
use crate::linalg::{Frame, Matrix};
use crate::ratfun::MeroVector;
use crate::scalar::{DdComplex, Field, GaussRat};
use crate::verifier::{FdConfig, Stencil, CONTRACTION};
use crate::{Error, Result};

fn factor<F: Field>(st: &ProjectionStack<F>, l: usize, lambda: &F) -> Matrix<F> {
    st.pi(l).add(&st.pi_perp(l).scale(lambda))
}

/// `Φ_λ(z)` from a stack of depth `r`.
pub fn extended_solution_from_stack<F: Field>(st: &ProjectionStack<F>, lambda: &F) -> Matrix<F> {
    let mut m = Matrix::identity(st.n);
    for l in 1..=st.depth() {
        m = m.mul(&factor(st, l, lambda));
    }
    m
}

pub fn extended_solution_at<F: Field>(chain: &UnitonChain, z: &F, lambda: &F) -> Result<Matrix<F>> {
    let st = chain.stack_at_checked(z, chain.r)?;
    Ok(extended_solution_from_stack(&st, lambda))
}

/// Coefficients `T₀,…,T_r` of `Φ_λ = Σ λ^j T_j`, expanded factor by factor
/// in the order of the product, so `T₀ = π₁⋯π_r`.
pub fn coefficients_from_stack<F: Field>(st: &ProjectionStack<F>) -> Vec<Matrix<F>> {
    let n = st.n;
    let mut t = vec![Matrix::identity(n)];
    for l in 1..=st.depth() {
        let p = st.pi(l);
        let q = st.pi_perp(l);
        t = (0..=l)
            .map(|j| {
                let a = if j < l { t[j].mul(p) } else { Matrix::zeros(n, n) };
                if j == 0 {
                    a
                } else {
                    a.add(&t[j - 1].mul(&q))
                }
            })
            .collect();
    }
    t
}

pub fn polynomial_coefficients<F: Field>(chain: &UnitonChain, z: &F) -> Result<Vec<Matrix<F>>> {
    let st = chain.stack_at_checked(z, chain.r)?;
    Ok(coefficients_from_stack(&st))
}

/// The fourth roots of unity, exactly.
pub fn exact_lambdas() -> [GaussRat; 4] {
    [GaussRat::from_ints(1, 0), GaussRat::from_ints(-1, 0), GaussRat::from_ints(0, 1), GaussRat::from_ints(0, -1)]
}

/// `count` points equally spaced on the unit circle, starting at angle
/// `π/count` so that none is a fourth root of unity for `count = 8`.
pub fn float_lambdas(count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|k| Complex64::from_polar(1.0, std::f64::consts::PI * (2 * k + 1) as f64 / count as f64))
        .collect()
}

// ---------------------------------------------------------------------------
// Grassmannian model

/// Classification of a block vector against `F₀`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Adaptedness {
    /// Zero vector: both types at once.
    Both,
    /// Even blocks in `F₀`, odd blocks in `F₀⊥`.
    TypeI,
    /// Even blocks in `F₀⊥`, odd blocks in `F₀`.
    #[serde(rename = "type_ii")]
    TypeII,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdaptedReport {
    pub classes: Vec<Adaptedness>,
    /// Every vector is of type (i) or type (ii).
    pub all_adapted: bool,
}

/// Classifies each vector of `C^{rn}` by where its blocks land.
pub fn f0_adapted_check(vectors: &[Vec<GaussRat>], r: usize, n: usize, f0_projector: &Matrix<GaussRat>) -> Result<AdaptedReport> {
    let perp = Matrix::identity(n).sub(f0_projector);
    let mut classes = Vec::with_capacity(vectors.len());
    for v in vectors {
        if v.len() != r * n {
            return Err(Error::BadArguments(format!("block vector of length {} but r·n = {}", v.len(), r * n)));
        }
        let (mut one, mut two) = (true, true);
        for t in 0..r {
            let b = &v[t * n..(t + 1) * n];
            let in_f0 = perp.mul_vec(b).iter().all(Zero::is_zero);
            let in_perp = f0_projector.mul_vec(b).iter().all(Zero::is_zero);
            let (even_ok, odd_ok) = if t % 2 == 0 { (in_f0, in_perp) } else { (in_perp, in_f0) };
            one &= even_ok;
            two &= odd_ok;
        }
        classes.push(match (one, two) {
            (true, true) => Adaptedness::Both,
            (true, false) => Adaptedness::TypeI,
            (false, true) => Adaptedness::TypeII,
            (false, false) => Adaptedness::Neither,
        });
    }
    let all_adapted = classes.iter().all(|c| *c != Adaptedness::Neither);
    Ok(AdaptedReport { classes, all_adapted })
}

/// A symbolic section of `C^{rn}`: `blocks[t]` is the `λ^t` coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockSection {
    pub blocks: Vec<MeroVector>,
}

impl BlockSection {
    pub fn derivative(&self, order: usize) -> BlockSection {
        BlockSection { blocks: self.blocks.iter().map(|b| b.derivative(order)).collect() }
    }

    /// Multiplication by `λ^i` modulo `λ^r`.
    pub fn shift(&self, i: usize) -> BlockSection {
        let r = self.blocks.len();
        let n = self.blocks.first().map_or(0, MeroVector::dim);
        let blocks = (0..r).map(|t| if t >= i { self.blocks[t - i].clone() } else { MeroVector::zero(n) }).collect();
        BlockSection { blocks }
    }

    pub fn eval(&self, z: &GaussRat) -> Result<Vec<GaussRat>> {
        let mut out = Vec::new();
        for b in &self.blocks {
            out.extend(b.eval_in(z)?);
        }
        Ok(out)
    }
}

/// The columns `(K_{0,j},…,K_{r−1,j})`.
pub fn x_tilde_sections(chain: &UnitonChain) -> Vec<BlockSection> {
    (0..chain.n)
        .map(|j| BlockSection { blocks: chain.k_grid.iter().map(|row| row[j].clone()).collect() })
        .collect()
}

/// The columns `(R_{0,j},…,R_{r−1,j})` with `R_{i,j} = K_{0,j}+⋯+K_{i,j}`.
pub fn x_sections(chain: &UnitonChain) -> Vec<BlockSection> {
    x_tilde_sections(chain)
        .into_iter()
        .map(|s| {
            let mut acc = MeroVector::zero(chain.n);
            let blocks = s
                .blocks
                .iter()
                .map(|b| {
                    acc = acc.add(b);
                    acc.clone()
                })
                .collect();
            BlockSection { blocks }
        })
        .collect()
}

/// `X + λX_(1) + ⋯ + λ^{jet}X_(jet)` as symbolic sections.
pub fn model_sections(x: &[BlockSection], jet_order: usize) -> Vec<BlockSection> {
    let mut out = Vec::new();
    for s in x {
        for i in 0..=jet_order {
            for m in 0..=i {
                out.push(s.derivative(m).shift(i));
            }
        }
    }
    out
}

/// `W` at one point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelSpace {
    pub point: GaussRat,
    pub blocks: usize,
    pub ambient: usize,
    /// Values of the spanning sections at the point.
    pub spanning: Vec<Vec<GaussRat>>,
    /// First derivatives of the spanning sections at the point.
    pub derivatives: Vec<Vec<GaussRat>>,
    /// An independent subset of `spanning`.
    pub basis: Vec<Vec<GaussRat>>,
}

fn shift_flat(v: &[GaussRat], n: usize) -> Vec<GaussRat> {
    let mut out = vec![GaussRat::zero(); v.len()];
    out[n..].clone_from_slice(&v[..v.len() - n]);
    out
}

impl ModelSpace {
    pub fn from_sections(sections: &[BlockSection], z: &GaussRat, r: usize, n: usize) -> Result<Self> {
        let spanning: Vec<Vec<GaussRat>> = sections.iter().map(|s| s.eval(z)).collect::<Result<_>>()?;
        let derivatives = sections.iter().map(|s| s.derivative(1).eval(z)).collect::<Result<_>>()?;
        Self::from_values(z.clone(), r, n, spanning, derivatives)
    }

    /// A model space from explicit vectors; `derivatives` may be empty for
    /// constant sections.
    pub fn from_values(point: GaussRat, r: usize, n: usize, spanning: Vec<Vec<GaussRat>>, derivatives: Vec<Vec<GaussRat>>) -> Result<Self> {
        if spanning.iter().chain(&derivatives).any(|v| v.len() != r * n) {
            return Err(Error::BadArguments(format!("model vectors must have length r·n = {}", r * n)));
        }
        let basis = Frame::new(r * n, spanning.clone()).basis().columns;
        Ok(ModelSpace { point, blocks: r, ambient: n, spanning, derivatives, basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `λW_(1) ⊆ W`, as `rank W = rank(W + λW + λW')`.
    pub fn shift_stable(&self) -> bool {
        if self.blocks == 0 {
            return true;
        }
        let n = self.ambient;
        let mut all = self.spanning.clone();
        all.extend(self.spanning.iter().chain(&self.derivatives).map(|v| shift_flat(v, n)));
        Frame::new(self.blocks * n, all).rank() == self.dim()
    }

    pub fn same_span(&self, o: &ModelSpace) -> bool {
        let a = Frame::new(self.blocks * self.ambient, self.basis.clone());
        let b = Frame::new(o.blocks * o.ambient, o.basis.clone());
        a.same_span(&b)
    }
}

/// `W` at `z`, built from the `X̃` spanning set with jets up to `jet_order`
/// (default `r−1`).
pub fn model_space(chain: &UnitonChain, z: &GaussRat, jet_order: Option<usize>) -> Result<ModelSpace> {
    if chain.r == 0 {
        return ModelSpace::from_values(z.clone(), 0, chain.n, Vec::new(), Vec::new());
    }
    let jet = jet_order.unwrap_or(chain.r - 1);
    ModelSpace::from_sections(&model_sections(&x_tilde_sections(chain), jet), z, chain.r, chain.n)
}

/// `W` built from the partial-sum spanning set `X` instead.
pub fn model_space_from_x(chain: &UnitonChain, z: &GaussRat, jet_order: Option<usize>) -> Result<ModelSpace> {
    if chain.r == 0 {
        return model_space(chain, z, jet_order);
    }
    let jet = jet_order.unwrap_or(chain.r - 1);
    ModelSpace::from_sections(&model_sections(&x_sections(chain), jet), z, chain.r, chain.n)
}

// ---------------------------------------------------------------------------
// Extended-solution equation

/// `max|Φ_λ⁻¹∂_zΦ_λ − (1−λ⁻¹)·½ψ⁻¹∂_zψ|` with `ψ = Φ_{−1}`, divided by
/// `1 + max|Φ_λ⁻¹∂_zΦ_λ|`, at steps `h` and `h/2`.
pub fn equation_residual(chain: &UnitonChain, z: &GaussRat, lambda: Complex64, cfg: &FdConfig) -> Result<(f64, f64)> {
    type F = DdComplex;
    let st = Stencil::for_chain(chain, z, cfg.h);
    let lam = F::from_c64(lambda);
    let phi_at = |o: (i32, i32), l: &F| -> Result<Matrix<F>> {
        let p = st.at(o)?;
        let mut m = Matrix::identity(chain.n);
        for pi in &p.pis {
            let perp = Matrix::identity(chain.n).sub(pi);
            m = m.mul(&pi.add(&perp.scale(l)));
        }
        Ok(m)
    };
    let minus = F::from_i64(-1);
    let coeff = (F::one() - F::one() / lam) * F::from_c64(Complex64::new(0.5, 0.0));
    let mut out = [0.0; 2];
    for (slot, s) in [(0, 2), (1, 1)] {
        let phi = phi_at((0, 0), &lam)?;
        let (dphi, _) = st.wirtinger(&|o| phi_at(o, &lam), (0, 0), s)?;
        let psi = phi_at((0, 0), &minus)?;
        let (dpsi, _) = st.wirtinger(&|o| phi_at(o, &minus), (0, 0), s)?;
        let inv = phi.inverse().ok_or_else(|| Error::RankDropAtPoint {
            point: z.to_string(),
            what: "Phi_lambda".into(),
            got: 0,
            expected: chain.n,
        })?;
        let lhs = inv.mul(&dphi);
        let rhs = psi.adjoint().mul(&dpsi).scale(&coeff);
        out[slot] = lhs.sub(&rhs).max_abs() / (1.0 + lhs.max_abs());
    }
    Ok((out[0], out[1]))
}

// ---------------------------------------------------------------------------
// Report

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoopReport {
    pub points: Vec<String>,
    /// `Φ₁ = I` exactly.
    pub phi_at_one_is_identity: bool,
    /// `Q·Φ_{−1} = φ_r` exactly.
    pub phi_at_minus_one_matches: bool,
    /// `Φ_λΦ_λ* = I` exactly at `λ ∈ {±1, ±i}`.
    pub unitary_exact: bool,
    /// Largest `|Φ_λΦ_λ* − I|` at the float sample of `λ`.
    pub unitary_float_residual: f64,
    /// `Σ T_j = I` and `Σ (−1)^j T_j = Φ_{−1}`.
    pub coefficient_sums: bool,
    /// `T_j` equals the adjoint of `S^r_j` (the product taken in reverse order).
    pub coefficients_match_s: bool,
    /// Equation residuals at `λ = i`, steps `h` and `h/2`.
    pub equation_residuals: Vec<f64>,
    pub equation_residuals_half_step: Vec<f64>,
    pub model_dims: Vec<usize>,
    pub shift_stable: bool,
    /// Every spanning vector of `W` is `F₀`-adapted.
    pub adapted: bool,
    /// The `X` and `X̃` constructions give the same `W`.
    pub x_spans_agree: bool,
    /// Rank of the span of `Im T₀` over all sample points.
    pub t0_image_rank: usize,
    pub type_one: bool,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub detail: Vec<String>,
}

/// Runs the loop-model identities at the given points.
pub fn loop_report(chain: &UnitonChain, points: &[GaussRat], cfg: &FdConfig) -> Result<LoopReport> {
    let n = chain.n;
    let id = Matrix::<GaussRat>::identity(n);
    let q = chain.q_matrix();
    let mut rep = LoopReport {
        points: points.iter().map(|p| p.to_string()).collect(),
        phi_at_one_is_identity: true,
        phi_at_minus_one_matches: true,
        unitary_exact: true,
        unitary_float_residual: 0.0,
        coefficient_sums: true,
        coefficients_match_s: true,
        equation_residuals: Vec::new(),
        equation_residuals_half_step: Vec::new(),
        model_dims: Vec::new(),
        shift_stable: true,
        adapted: true,
        x_spans_agree: true,
        t0_image_rank: 0,
        type_one: false,
        pass: false,
        detail: Vec::new(),
    };
    let mut t0_cols = Vec::new();
    for z in points {
        let st = chain.stack_at_checked(z, chain.r)?;
        let [one, minus, i, minus_i] = exact_lambdas();
        if extended_solution_from_stack(&st, &one) != id {
            rep.phi_at_one_is_identity = false;
            rep.detail.push(format!("{z}: Phi_1 is not the identity"));
        }
        let phi_m = extended_solution_from_stack(&st, &minus);
        if q.mul(&phi_m) != chain.phi_from_stack(&st, chain.r) {
            rep.phi_at_minus_one_matches = false;
            rep.detail.push(format!("{z}: Q Phi_-1 differs from phi"));
        }
        for l in [&one, &minus, &i, &minus_i] {
            let p = extended_solution_from_stack(&st, l);
            if p.mul(&p.adjoint()) != id {
                rep.unitary_exact = false;
                rep.detail.push(format!("{z}: Phi_{l} is not unitary"));
            }
        }
        let fst = chain.stack_at::<Complex64>(&z.to_c64(), chain.r)?;
        for l in float_lambdas(8) {
            let p = extended_solution_from_stack(&fst, &l);
            let e = p.mul(&p.adjoint()).dist(&Matrix::identity(n));
            rep.unitary_float_residual = rep.unitary_float_residual.max(e);
        }
        let t = coefficients_from_stack(&st);
        let sum = t.iter().fold(Matrix::zeros(n, n), |a, b| a.add(b));
        let alt = t.iter().enumerate().fold(Matrix::zeros(n, n), |a, (j, b)| if j % 2 == 0 { a.add(b) } else { a.sub(b) });
        if sum != id || alt != phi_m {
            rep.coefficient_sums = false;
            rep.detail.push(format!("{z}: coefficient sums fail"));
        }
        let s = st.s_table(chain.r);
        if t.len() != s.len() || t.iter().zip(&s).any(|(a, b)| *a != b.adjoint()) {
            rep.coefficients_match_s = false;
            rep.detail.push(format!("{z}: T_j differs from (S^r_j)*"));
        }
        t0_cols.extend(t[0].columns());

        let (a, b) = equation_residual(chain, z, Complex64::new(0.0, 1.0), cfg)?;
        rep.equation_residuals.push(a);
        rep.equation_residuals_half_step.push(b);

        let w = model_space(chain, z, None)?;
        rep.model_dims.push(w.dim());
        if !w.shift_stable() {
            rep.shift_stable = false;
            rep.detail.push(format!("{z}: lambda W_(1) is not inside W"));
        }
        let ad = f0_adapted_check(&w.spanning, w.blocks, n, &chain.f0_projector)?;
        if !ad.all_adapted {
            rep.adapted = false;
            rep.detail.push(format!("{z}: spanning set is not F0-adapted"));
        }
        if !w.same_span(&model_space_from_x(chain, z, None)?) {
            rep.x_spans_agree = false;
            rep.detail.push(format!("{z}: X and X-tilde give different W"));
        }
    }
    rep.t0_image_rank = Frame::new(n, t0_cols).rank();
    rep.type_one = rep.t0_image_rank == n;
    let eq_ok = rep
        .equation_residuals
        .iter()
        .zip(&rep.equation_residuals_half_step)
        .all(|(a, b)| *a <= cfg.tol && *b <= CONTRACTION * a + cfg.tol_floor);
    if !eq_ok {
        rep.detail.push("extended-solution equation residual too large or not contracting".into());
    }
    rep.pass = rep.phi_at_one_is_identity
        && rep.phi_at_minus_one_matches
        && rep.unitary_exact
        && rep.unitary_float_residual <= 1e-9
        && rep.coefficient_sums
        && rep.coefficients_match_s
        && eq_ok
        && rep.shift_stable
        && rep.adapted
        && rep.x_spans_agree;
    Ok(rep)
}
