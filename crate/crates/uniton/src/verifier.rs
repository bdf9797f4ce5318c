//! Checks of the identities a constructed chain must satisfy.
//!
//! Exact checks (unitary involution, splitting, `S^i_j` images, backend
//! consistency) run in Q(i) at the chain's generic points. Differential checks
//! use central differences on a small stencil around each point, evaluated in
//! double-double arithmetic so that nested differences keep their precision.
//! Each differential residual is computed at steps `h` and `h/2`; the pair
//! both detects a misconfigured step (`StepTooLarge`) and shows second-order
//! convergence.
//!
//! Connection forms are accumulated along the chain:
//! `A_z^{φ_i} = Σ_{l≤i} ∂_z π_l⊥` and `A_z̄^{φ_i} = −(A_z^{φ_i})*`, with `φ₀`
//! constant. Wirtinger derivatives are `∂_z = ½(∂_x − i∂_y)` and
//! `∂_z̄ = ½(∂_x + i∂_y)`.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::engine::UnitonChain;
use crate::linalg::{reflection, Frame, Matrix};
use crate::scalar::{DdComplex, Field, GaussRat};
use crate::{Error, Result};

type F = DdComplex;
type M = Matrix<F>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

/// Which check to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Unitary,
    Splitting,
    SijImages,
    Consistency,
    Harmonicity,
    UnitonConditions,
    ShiftIdentity,
    Interchange,
    Closure,
    Connection,
}

impl CheckKind {
    pub const ALL: [CheckKind; 10] = [
        CheckKind::Unitary,
        CheckKind::Splitting,
        CheckKind::SijImages,
        CheckKind::Consistency,
        CheckKind::Harmonicity,
        CheckKind::UnitonConditions,
        CheckKind::ShiftIdentity,
        CheckKind::Interchange,
        CheckKind::Closure,
        CheckKind::Connection,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Unitary => "unitary",
            CheckKind::Splitting => "splitting",
            CheckKind::SijImages => "sij",
            CheckKind::Consistency => "consistency",
            CheckKind::Harmonicity => "harmonicity",
            CheckKind::UnitonConditions => "uniton",
            CheckKind::ShiftIdentity => "shift",
            CheckKind::Interchange => "interchange",
            CheckKind::Closure => "closure",
            CheckKind::Connection => "connection",
        }
    }

    pub fn is_differential(self) -> bool {
        !matches!(self, CheckKind::Unitary | CheckKind::Splitting | CheckKind::SijImages | CheckKind::Consistency)
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CheckKind::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown check {s:?}")))
    }
}

/// Finite-difference settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FdConfig {
    pub h: f64,
    /// Pass threshold for scaled residuals.
    pub tol: f64,
    /// Absolute allowance in the contraction test `r(h/2) ≤ 0.3·r(h) + floor`.
    pub tol_floor: f64,
}

impl Default for FdConfig {
    fn default() -> Self {
        FdConfig { h: 1e-5, tol: 1e-6, tol_floor: 1e-12 }
    }
}

/// Required ratio `r(h/2)/r(h)` for central differences.
pub const CONTRACTION: f64 = 0.3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub backend: Backend,
    pub points: Vec<String>,
    /// Scaled residual per point (float checks) or number of failed
    /// sub-tests per point (exact checks).
    pub residuals: Vec<f64>,
    /// Residuals at `h/2` (float checks only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residuals_half_step: Option<Vec<f64>>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub detail: Vec<String>,
}

impl CheckReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }

    /// Whether every point satisfies the contraction test.
    pub fn contracts(&self, floor: f64) -> bool {
        match &self.residuals_half_step {
            None => true,
            Some(half) => self.residuals.iter().zip(half).all(|(a, b)| *b <= CONTRACTION * a + floor),
        }
    }

    fn exact(check: CheckKind, points: &[GaussRat], failures: Vec<Vec<String>>) -> Self {
        let residuals: Vec<f64> = failures.iter().map(|f| f.len() as f64).collect();
        let pass = residuals.iter().all(|r| *r == 0.0);
        let detail = points
            .iter()
            .zip(&failures)
            .flat_map(|(p, fs)| fs.iter().map(move |f| format!("{p}: {f}")))
            .collect();
        CheckReport {
            check: check.name().into(),
            backend: Backend::Exact,
            points: points.iter().map(|p| p.to_string()).collect(),
            residuals,
            residuals_half_step: None,
            pass,
            detail,
        }
    }

    fn float(check: &str, points: Vec<String>, full: Vec<f64>, half: Vec<f64>, cfg: &FdConfig) -> Self {
        let mut detail = Vec::new();
        let mut pass = true;
        for (p, (a, b)) in points.iter().zip(full.iter().zip(&half)) {
            if !(*a <= cfg.tol) {
                pass = false;
                detail.push(format!("{p}: residual {a:.3e} above tolerance {:.1e}", cfg.tol));
            }
            if !(*b <= CONTRACTION * a + cfg.tol_floor) {
                pass = false;
                detail.push(format!("{p}: residual {a:.3e} at h but {b:.3e} at h/2"));
            }
        }
        CheckReport {
            check: check.into(),
            backend: Backend::Float,
            points,
            residuals: full,
            residuals_half_step: Some(half),
            pass,
            detail,
        }
    }
}

// ---------------------------------------------------------------------------
// Exact checks

fn levels(chain: &UnitonChain, i: Option<usize>) -> Result<Vec<usize>> {
    match i {
        Some(i) if i > chain.r => Err(Error::OutOfRange(format!("level {i} exceeds r={}", chain.r))),
        Some(i) => Ok(vec![i]),
        None => Ok((0..=chain.r).collect()),
    }
}

/// Exact data at one point, shared by the exact checks.
pub struct ExactPoint {
    pub stack: crate::ExactStack,
    /// `F₀,…,F_r` from the splitting recursion, continued past failures.
    pub f_frames: Vec<Frame<GaussRat>>,
    /// Description of each step where the recursion fails to split.
    pub split_failures: Vec<(usize, String)>,
}

impl ExactPoint {
    pub fn new(chain: &UnitonChain, z: &GaussRat) -> Result<Self> {
        let stack = chain.stack_at::<GaussRat>(z, chain.r)?;
        let mut f_frames = vec![chain.f_start::<GaussRat>()];
        let mut split_failures = Vec::new();
        for i in 0..stack.depth() {
            let fi = &f_frames[i];
            let fi_perp = fi.orthocomplement();
            let alpha = &stack.frames[i];
            let inside = alpha.intersect(fi);
            let outside = alpha.intersect(&fi_perp);
            let (a, b, c) = (inside.rank(), outside.rank(), alpha.rank());
            if a + b != c {
                split_failures.push((i, format!("step {i}: rank(α∩F)={a} + rank(α∩F⊥)={b} ≠ rank α={c}")));
            }
            let pf = fi.projector();
            let pa = stack.pi(i + 1);
            if pf.mul(pa) != pa.mul(&pf) {
                split_failures.push((i, format!("step {i}: π_F{i} does not commute with π_{}", i + 1)));
            }
            f_frames.push(inside.sum(&alpha.orthocomplement().intersect(&fi_perp)));
        }
        Ok(ExactPoint { stack, f_frames, split_failures })
    }

    pub fn all(chain: &UnitonChain, points: &[GaussRat]) -> Result<Vec<ExactPoint>> {
        points.iter().map(|z| ExactPoint::new(chain, z)).collect()
    }
}

fn involution_failures(chain: &UnitonChain, lv: &[usize], e: &ExactPoint) -> Vec<String> {
    let mut f = Vec::new();
    let id = Matrix::identity(chain.n);
    for &i in lv {
        let phi = chain.phi_from_stack(&e.stack, i);
        let adj = phi.adjoint();
        if phi.mul(&adj) != id {
            f.push(format!("phi_{i} is not unitary"));
        }
        if phi != adj {
            f.push(format!("phi_{i} is not Hermitian"));
        }
        if phi.mul(&phi) != id {
            f.push(format!("phi_{i} squared is not the identity"));
        }
    }
    f
}

fn splitting_failures(lv: &[usize], e: &ExactPoint) -> Vec<String> {
    e.split_failures.iter().filter(|(i, _)| lv.contains(i)).map(|(_, m)| m.clone()).collect()
}

fn sij_failures(chain: &UnitonChain, lv: &[usize], e: &ExactPoint) -> Vec<String> {
    let n = chain.n;
    let mut f = Vec::new();
    if !e.split_failures.is_empty() {
        f.push("F-chain does not split".to_string());
    }
    let p0 = e.f_frames[0].projector();
    let p0_perp = Matrix::identity(n).sub(&p0);
    for &i in lv {
        let pf = e.f_frames[i].projector();
        let pf_perp = Matrix::identity(n).sub(&pf);
        for (j, s) in e.stack.s_table(i).iter().enumerate() {
            let a = s.mul(&p0);
            let b = s.mul(&p0_perp);
            let (into_f, into_perp) = if j % 2 == 0 { (&a, &b) } else { (&b, &a) };
            if !pf_perp.mul(into_f).is_zero() {
                f.push(format!("S^{i}_{j} image leaves F_{i}"));
            }
            if !pf.mul(into_perp).is_zero() {
                f.push(format!("S^{i}_{j} image leaves F_{i}⊥"));
            }
        }
    }
    f
}

fn consistency_failures(chain: &UnitonChain, z: &GaussRat, e: &ExactPoint) -> Result<Vec<String>> {
    let sf = chain.stack_at::<Complex64>(&z.to_c64(), chain.r)?;
    let mut f = Vec::new();
    for i in 0..=chain.r {
        let a = chain.phi_from_stack(&e.stack, i).to_c64();
        let b = chain.phi_from_stack(&sf, i);
        let err = a.dist(&b) / a.max_abs().max(1.0);
        if err > 1e-9 {
            f.push(format!("phi_{i}: relative deviation {err:.2e}"));
        }
    }
    Ok(f)
}

fn exact_report(
    chain: &UnitonChain,
    check: CheckKind,
    i: Option<usize>,
    points: &[GaussRat],
    data: &[ExactPoint],
) -> Result<CheckReport> {
    let lv = levels(chain, i)?;
    let mut failures = Vec::new();
    for (z, e) in points.iter().zip(data) {
        failures.push(match check {
            CheckKind::Unitary => involution_failures(chain, &lv, e),
            CheckKind::Splitting => splitting_failures(&lv, e),
            CheckKind::SijImages => sij_failures(chain, &lv, e),
            CheckKind::Consistency => consistency_failures(chain, z, e)?,
            _ => unreachable!("{check} is not an exact check"),
        });
    }
    Ok(CheckReport::exact(check, points, failures))
}

/// `φ_i = φ_i*` and `φ_i² = I`, with unitarity reported separately.
pub fn check_unitary_involution(chain: &UnitonChain, i: Option<usize>, points: &[GaussRat]) -> Result<CheckReport> {
    exact_report(chain, CheckKind::Unitary, i, points, &ExactPoint::all(chain, points)?)
}

/// Unitarity alone, used by the negative controls.
pub fn is_unitary_at(chain: &UnitonChain, i: usize, z: &GaussRat) -> Result<bool> {
    let phi = chain.phi_at::<GaussRat>(i, z)?;
    Ok(phi.mul(&phi.adjoint()) == Matrix::identity(chain.n))
}

/// `F_i` splits `α_{i+1}` and `π_{F_i}` commutes with `π_{i+1}`.
pub fn check_splitting(chain: &UnitonChain, i: Option<usize>, points: &[GaussRat]) -> Result<CheckReport> {
    exact_report(chain, CheckKind::Splitting, i, points, &ExactPoint::all(chain, points)?)
}

/// `S^i_j π_{F₀} e_m` lies in `F_i` for even `j` and in `F_i⊥` for odd `j`,
/// and the other way round for `π_{F₀}⊥ e_m`.
pub fn check_sij_images(chain: &UnitonChain, i: Option<usize>, points: &[GaussRat]) -> Result<CheckReport> {
    exact_report(chain, CheckKind::SijImages, i, points, &ExactPoint::all(chain, points)?)
}

/// Exact and double-precision `φ_i` agree to a relative error of `1e-9`.
pub fn check_consistency(chain: &UnitonChain, points: &[GaussRat]) -> Result<CheckReport> {
    exact_report(chain, CheckKind::Consistency, None, points, &ExactPoint::all(chain, points)?)
}

// ---------------------------------------------------------------------------
// Stencils

/// Data at one stencil point: `π₁,…,π_r`, the tagged sections of each
/// `α_{i+1}`, and `φ₀,…,φ_r`.
pub struct StencilPoint {
    pub pis: Vec<M>,
    pub sections: Vec<BTreeMap<(usize, usize), M>>,
    pub phis: Vec<M>,
}

type Evaluator<'a> = Box<dyn Fn(&F) -> Result<StencilPoint> + 'a>;

/// Lazily evaluated stencil around one point. Offsets are integer
/// multiples of `h/2` in the `x` and `y` directions.
pub struct Stencil<'a> {
    n: usize,
    center: F,
    half: F,
    eval: Evaluator<'a>,
    cache: RefCell<HashMap<(i32, i32), Rc<StencilPoint>>>,
}

fn dd(x: f64) -> F {
    F::from_c64(Complex64::new(x, 0.0))
}

fn i_unit() -> F {
    F::from_c64(Complex64::new(0.0, 1.0))
}

fn frob(m: &M) -> f64 {
    m.to_c64().columns().iter().flatten().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

fn col(v: &[F]) -> M {
    Matrix::from_columns(&[v.to_vec()], v.len())
}

impl<'a> Stencil<'a> {
    pub fn new(n: usize, center: &GaussRat, h: f64, eval: Evaluator<'a>) -> Self {
        Stencil { n, center: F::from_gauss(center), half: dd(h / 2.0), eval, cache: RefCell::new(HashMap::new()) }
    }

    /// Stencil over a chain, with sections and projectors for all levels.
    pub fn for_chain(chain: &'a UnitonChain, center: &GaussRat, h: f64) -> Self {
        let q = chain.q_matrix().map(F::from_gauss);
        let compiled = chain.compile_h::<F>();
        let eval = move |z: &F| -> Result<StencilPoint> {
            let hv: Vec<Vec<Vec<Vec<F>>>> =
                compiled.iter().map(|g| g.iter().map(|row| row.iter().map(|v| v.eval(z)).collect()).collect()).collect();
            let (st, cols) = chain.stack_from_values::<F>(z, &hv, chain.r)?;
            let pis: Vec<M> = (1..=chain.r).map(|l| st.pi(l).clone()).collect();
            let sections = cols
                .into_iter()
                .map(|c| c.into_iter().map(|(k, j, v)| ((k, j), col(&v))).collect())
                .collect();
            let mut phis = vec![q.clone()];
            for p in &pis {
                let next = phis.last().unwrap().mul(&reflection(p));
                phis.push(next);
            }
            Ok(StencilPoint { pis, sections, phis })
        };
        Stencil::new(chain.n, center, h, Box::new(eval))
    }

    pub fn at(&self, off: (i32, i32)) -> Result<Rc<StencilPoint>> {
        if let Some(p) = self.cache.borrow().get(&off) {
            return Ok(p.clone());
        }
        let shift = F::new(self.half.re * off.0 as f64, self.half.re * off.1 as f64);
        let p = Rc::new((self.eval)(&(self.center + shift))?);
        self.cache.borrow_mut().insert(off, p.clone());
        Ok(p)
    }

    /// `(∂_z f, ∂_z̄ f)` at `c` by central differences of half-width `s`.
    pub fn wirtinger(&self, f: &dyn Fn((i32, i32)) -> Result<M>, c: (i32, i32), s: i32) -> Result<(M, M)> {
        let denom = self.half * dd(2.0 * s as f64);
        let inv = F::one() / denom;
        let dx = f((c.0 + s, c.1))?.sub(&f((c.0 - s, c.1))?).scale(&inv);
        let dy = f((c.0, c.1 + s))?.sub(&f((c.0, c.1 - s))?).scale(&inv);
        let idy = dy.scale(&i_unit());
        let halfc = dd(0.5);
        Ok((dx.sub(&idy).scale(&halfc), dx.add(&idy).scale(&halfc)))
    }

    fn pi(&self, off: (i32, i32), l: usize) -> Result<M> {
        Ok(self.at(off)?.pis[l - 1].clone())
    }

    /// `A_z^{φ_i}` at `c` with step `s`.
    pub fn a_z(&self, i: usize, c: (i32, i32), s: i32) -> Result<M> {
        let mut acc = Matrix::zeros(self.n, self.n);
        for l in 1..=i {
            let (dz, _) = self.wirtinger(&|o| self.pi(o, l), c, s)?;
            acc = acc.sub(&dz);
        }
        Ok(acc)
    }

    /// A section `(k, j)` of `α_{i+1}` at an offset; zero when absent.
    fn section(&self, off: (i32, i32), i: usize, key: (usize, usize)) -> Result<M> {
        let p = self.at(off)?;
        Ok(p.sections[i].get(&key).cloned().unwrap_or_else(|| Matrix::zeros(self.n, 1)))
    }

    fn neighbours(s: i32) -> [(i32, i32); 5] {
        [(0, 0), (s, 0), (-s, 0), (0, s), (0, -s)]
    }

    /// Largest section norm of `α_{i+1}` over the stencil of step `s`.
    fn section_scale(&self, i: usize, s: i32) -> Result<f64> {
        let mut m: f64 = 0.0;
        for o in Self::neighbours(s) {
            for v in self.at(o)?.sections[i].values() {
                m = m.max(frob(v));
            }
        }
        Ok(if m > 0.0 { m } else { 1.0 })
    }

    fn keys(&self, i: usize) -> Result<Vec<(usize, usize)>> {
        Ok(self.at((0, 0))?.sections[i].keys().cloned().collect())
    }
}

/// The residual pieces of the uniton conditions for one section.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct UnitonResidual {
    /// `‖π⊥ D_z̄ σ‖`
    pub dbar_closure: f64,
    /// `‖π⊥ A_z σ‖`
    pub a_closure: f64,
    /// `‖D_z̄ σ‖`
    pub holomorphic: f64,
}

impl UnitonResidual {
    pub fn max(&self) -> f64 {
        self.dbar_closure.max(self.a_closure).max(self.holomorphic)
    }
}

fn sub_identity(p: &M) -> M {
    Matrix::identity(p.nrows()).sub(p)
}

impl Stencil<'_> {
    /// Uniton-condition residuals for `α_{i+1}` relative to `φ_i`, scaled by
    /// the largest section norm, maximised over sections.
    pub fn uniton_residual(&self, i: usize, s: i32) -> Result<UnitonResidual> {
        let scale = self.section_scale(i, s)?;
        let az = self.a_z(i, (0, 0), s)?;
        let azbar = az.adjoint().neg();
        let p_perp = sub_identity(&self.pi((0, 0), i + 1)?);
        let mut out = UnitonResidual::default();
        for key in self.keys(i)? {
            let sigma = self.section((0, 0), i, key)?;
            let (_, dbar) = self.wirtinger(&|o| self.section(o, i, key), (0, 0), s)?;
            let d = dbar.add(&azbar.mul(&sigma));
            out.dbar_closure = out.dbar_closure.max(frob(&p_perp.mul(&d)) / scale);
            out.a_closure = out.a_closure.max(frob(&p_perp.mul(&az.mul(&sigma))) / scale);
            out.holomorphic = out.holomorphic.max(frob(&d) / scale);
        }
        Ok(out)
    }

    /// `max_{k<i, j} ‖A_z^{φ_i} α^{(k)}_{i+1,j} + α^{(k+1)}_{i+1,j}‖`, scaled.
    pub fn shift_residual(&self, i: usize, s: i32) -> Result<f64> {
        let scale = self.section_scale(i, s)?;
        let az = self.a_z(i, (0, 0), s)?;
        let here = self.at((0, 0))?;
        let mut keys: Vec<(usize, usize)> = here.sections[i].keys().cloned().collect();
        // targets without a source still have to vanish
        keys.extend(here.sections[i].keys().filter(|(k, _)| *k > 0).map(|(k, j)| (k - 1, *j)));
        keys.sort();
        keys.dedup();
        let mut m: f64 = 0.0;
        for (k, j) in keys.into_iter().filter(|(k, _)| *k + 1 <= i) {
            let a = self.section((0, 0), i, (k, j))?;
            let b = self.section((0, 0), i, (k + 1, j))?;
            m = m.max(frob(&az.mul(&a).add(&b)) / scale);
        }
        Ok(m)
    }

    /// `‖A_z A_z̄ − A_z̄ A_z − ∂_z̄ A_z‖` for `φ_i`, divided by `1 + ‖A_z‖²`.
    pub fn harmonicity_residual(&self, i: usize, s: i32) -> Result<f64> {
        let az = self.a_z(i, (0, 0), s)?;
        let azbar = az.adjoint().neg();
        let (_, dbar) = self.wirtinger(&|o| self.a_z(i, o, s), (0, 0), s)?;
        let res = az.mul(&azbar).sub(&azbar.mul(&az)).sub(&dbar);
        let a = az.max_abs();
        Ok(res.max_abs() / (1.0 + a * a))
    }

    /// `π_F A_z π_F` and `π_F⊥ A_z π_F⊥` for `φ_r`, with `π_F = (I+φ_r)/2`.
    pub fn interchange_residual(&self, r: usize, s: i32) -> Result<f64> {
        let az = self.a_z(r, (0, 0), s)?;
        let phi = &self.at((0, 0))?.phis[r];
        let pf = Matrix::identity(self.n).add(phi).scale(&dd(0.5));
        let pp = sub_identity(&pf);
        let m = pf.mul(&az).mul(&pf).max_abs().max(pp.mul(&az).mul(&pp).max_abs());
        Ok(m / (1.0 + az.max_abs()))
    }

    /// D_z̄-closure of `α_{i+1}∩F_i` and D_z-closure of `α_{i+1}⊥∩F_i⊥`,
    /// both tested on projectors.
    pub fn closure_residual(&self, i: usize, s: i32) -> Result<f64> {
        let half = dd(0.5);
        let beta = |o: (i32, i32)| -> Result<M> {
            let p = self.at(o)?;
            Ok(p.pis[i].mul(&Matrix::identity(self.n).add(&p.phis[i])).scale(&half))
        };
        let gamma = |o: (i32, i32)| -> Result<M> {
            let p = self.at(o)?;
            Ok(sub_identity(&p.pis[i]).mul(&Matrix::identity(self.n).sub(&p.phis[i])).scale(&half))
        };
        let az = self.a_z(i, (0, 0), s)?;
        let azbar = az.adjoint().neg();
        let b = beta((0, 0))?;
        let g = gamma((0, 0))?;
        let (_, b_dbar) = self.wirtinger(&beta, (0, 0), s)?;
        let (g_dz, _) = self.wirtinger(&gamma, (0, 0), s)?;
        let rb = sub_identity(&b).mul(&b_dbar.add(&azbar.mul(&b))).max_abs();
        let rg = sub_identity(&g).mul(&g_dz.add(&az.mul(&g))).max_abs();
        Ok(rb.max(rg) / (1.0 + az.max_abs()))
    }

    /// Accumulated `A_z^{φ_i}` against `½ φ_i⁻¹ ∂_z φ_i` taken directly.
    pub fn connection_residual(&self, i: usize, s: i32) -> Result<f64> {
        let az = self.a_z(i, (0, 0), s)?;
        let phi = self.at((0, 0))?.phis[i].clone();
        let (dphi, _) = self.wirtinger(&|o| Ok(self.at(o)?.phis[i].clone()), (0, 0), s)?;
        let direct = phi.adjoint().mul(&dphi).scale(&dd(0.5));
        Ok(az.sub(&direct).max_abs() / (1.0 + az.max_abs()))
    }

    /// Scaled difference between `A_z^{φ_i}` computed at `h` and at `h/2`.
    pub fn step_disagreement(&self, i: usize) -> Result<f64> {
        let a = self.a_z(i, (0, 0), 2)?;
        let b = self.a_z(i, (0, 0), 1)?;
        Ok(a.sub(&b).max_abs() / (1.0 + a.max_abs()))
    }
}

// ---------------------------------------------------------------------------
// Differential checks

fn diff_levels(check: CheckKind, chain: &UnitonChain, i: Option<usize>) -> Result<Vec<usize>> {
    let all = levels(chain, i)?;
    Ok(match check {
        CheckKind::UnitonConditions | CheckKind::ShiftIdentity | CheckKind::Closure => {
            all.into_iter().filter(|&i| i < chain.r).collect()
        }
        CheckKind::Interchange => vec![chain.r],
        _ => all,
    })
}

fn stencil_residual(st: &Stencil, check: CheckKind, i: usize, s: i32) -> Result<f64> {
    match check {
        CheckKind::Harmonicity => st.harmonicity_residual(i, s),
        CheckKind::UnitonConditions => Ok(st.uniton_residual(i, s)?.max()),
        CheckKind::ShiftIdentity => st.shift_residual(i, s),
        CheckKind::Interchange => st.interchange_residual(i, s),
        CheckKind::Closure => st.closure_residual(i, s),
        CheckKind::Connection => st.connection_residual(i, s),
        _ => unreachable!("exact check {check} has no stencil form"),
    }
}

/// Runs several differential checks, sharing one stencil per point.
pub fn run_differential(
    chain: &UnitonChain,
    checks: &[CheckKind],
    i: Option<usize>,
    points: &[GaussRat],
    cfg: &FdConfig,
) -> Result<Vec<CheckReport>> {
    let mut full = vec![Vec::new(); checks.len()];
    let mut half = vec![Vec::new(); checks.len()];
    let lvs: Vec<Vec<usize>> = checks.iter().map(|c| diff_levels(*c, chain, i)).collect::<Result<_>>()?;
    for z in points {
        let st = Stencil::for_chain(chain, z, cfg.h);
        let d = st.step_disagreement(chain.r)?;
        if d > cfg.tol {
            return Err(Error::StepTooLarge { disagreement: d, tol: cfg.tol });
        }
        for (c, check) in checks.iter().enumerate() {
            let (mut a, mut b) = (0.0f64, 0.0f64);
            for &l in &lvs[c] {
                a = a.max(stencil_residual(&st, *check, l, 2)?);
                b = b.max(stencil_residual(&st, *check, l, 1)?);
            }
            full[c].push(a);
            half[c].push(b);
        }
    }
    let names: Vec<String> = points.iter().map(|p| p.to_string()).collect();
    Ok(checks
        .iter()
        .zip(full.into_iter().zip(half))
        .map(|(c, (a, b))| CheckReport::float(c.name(), names.clone(), a, b, cfg))
        .collect())
}

fn single(chain: &UnitonChain, check: CheckKind, i: Option<usize>, points: &[GaussRat], cfg: &FdConfig) -> Result<CheckReport> {
    Ok(run_differential(chain, &[check], i, points, cfg)?.remove(0))
}

pub fn check_harmonicity(chain: &UnitonChain, i: Option<usize>, points: &[GaussRat], cfg: &FdConfig) -> Result<CheckReport> {
    single(chain, CheckKind::Harmonicity, i, points, cfg)
}

pub fn check_uniton_conditions(chain: &UnitonChain, i: Option<usize>, points: &[GaussRat], cfg: &FdConfig) -> Result<CheckReport> {
    single(chain, CheckKind::UnitonConditions, i, points, cfg)
}

pub fn check_shift_identity(chain: &UnitonChain, i: Option<usize>, points: &[GaussRat], cfg: &FdConfig) -> Result<CheckReport> {
    single(chain, CheckKind::ShiftIdentity, i, points, cfg)
}

pub fn check_interchange(chain: &UnitonChain, points: &[GaussRat], cfg: &FdConfig) -> Result<CheckReport> {
    single(chain, CheckKind::Interchange, None, points, cfg)
}

pub fn check_closure(chain: &UnitonChain, i: Option<usize>, points: &[GaussRat], cfg: &FdConfig) -> Result<CheckReport> {
    single(chain, CheckKind::Closure, i, points, cfg)
}

/// Uniton conditions for raw sections over the constant map, bypassing the
/// chain pipeline. Lets the negative controls feed non-meromorphic data.
pub fn check_raw_sections(
    n: usize,
    sections: &dyn Fn(&F) -> Vec<Vec<F>>,
    points: &[GaussRat],
    cfg: &FdConfig,
) -> Result<(CheckReport, Vec<UnitonResidual>)> {
    let eval = |z: &F| -> Result<StencilPoint> {
        let vs = sections(z);
        let pi = Frame::new(n, vs.clone()).projector();
        let map = vs.iter().enumerate().map(|(j, v)| ((0, j), col(v))).collect();
        Ok(StencilPoint { pis: vec![pi], sections: vec![map], phis: vec![Matrix::identity(n)] })
    };
    let mut full = Vec::new();
    let mut half = Vec::new();
    let mut parts = Vec::new();
    for z in points {
        let st = Stencil::new(n, z, cfg.h, Box::new(eval));
        let a = st.uniton_residual(0, 2)?;
        full.push(a.max());
        half.push(st.uniton_residual(0, 1)?.max());
        parts.push(a);
    }
    let names = points.iter().map(|p| p.to_string()).collect();
    Ok((CheckReport::float(CheckKind::UnitonConditions.name(), names, full, half, cfg), parts))
}

/// Runs the requested checks in a fixed order.
pub fn run_checks(chain: &UnitonChain, checks: &[CheckKind], points: &[GaussRat], cfg: &FdConfig) -> Result<Vec<CheckReport>> {
    let mut sorted = checks.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut out = Vec::new();
    let exact: Vec<CheckKind> = sorted.iter().cloned().filter(|c| !c.is_differential()).collect();
    if !exact.is_empty() {
        let data = ExactPoint::all(chain, points)?;
        for c in exact {
            out.push(exact_report(chain, c, None, points, &data)?);
        }
    }
    let diff: Vec<CheckKind> = sorted.into_iter().filter(|c| c.is_differential()).collect();
    if !diff.is_empty() {
        out.extend(run_differential(chain, &diff, None, points, cfg)?);
    }
    Ok(out)
}
