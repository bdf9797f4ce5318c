//! Uniton chains built from meromorphic array data.
//!
//! An [`F0Array`] holds the `r×n` grid `K` of rational vectors. The chain
//! stores the transformed grid `H` together with its symbolic derivatives,
//! and evaluates the unitons `α₁,…,α_r` at a point by the spanning formula
//! `α^{(k)}_{i+1,j} = Σ_{s=k}^{i} C^i_s H^{(k)}_{s−k,j}`. All evaluation is
//! generic over [`Field`], so the same code produces exact matrices at
//! Gaussian rational points and floating matrices at complex points.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{reflection, Frame, Matrix};
use crate::ratfun::{CompiledVector, MeroVector};
use crate::scalar::{Field, GaussRat};
use crate::{Error, ExactMatrix, Result};

/// Number of standard sample points per chain.
pub const SAMPLE_POINTS: usize = 8;
/// Bound on numerator and denominator magnitudes of sample coordinates.
pub const SAMPLE_HEIGHT: i64 = 97;

pub fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1i64, |acc, t| acc * (n - t) / (t + 1))
}

/// The `r×n` array `(K_{i,j})` together with `F₀`.
#[derive(Clone, Debug, PartialEq)]
pub struct F0Array {
    pub n: usize,
    pub k: usize,
    /// Basis of `F₀`; `None` means `e₁,…,e_k`.
    pub f0_basis: Option<Vec<Vec<GaussRat>>>,
    /// `entries[i][j]` is `K_{i,j}` (row `i`, column `j`, both from 0).
    pub entries: Vec<Vec<MeroVector>>,
}

impl F0Array {
    pub fn new(n: usize, k: usize, entries: Vec<Vec<MeroVector>>) -> Result<Self> {
        let a = F0Array { n, k, f0_basis: None, entries };
        a.check_shape()?;
        Ok(a)
    }

    pub fn with_basis(mut self, basis: Vec<Vec<GaussRat>>) -> Result<Self> {
        self.f0_basis = Some(basis);
        self.check_shape()?;
        Ok(self)
    }

    pub fn r(&self) -> usize {
        self.entries.len()
    }

    fn check_shape(&self) -> Result<()> {
        if self.k > self.n {
            return Err(Error::BadArguments(format!("k={} exceeds n={}", self.k, self.n)));
        }
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != self.n {
                return Err(Error::BadArguments(format!("row {i} has {} entries, expected {}", row.len(), self.n)));
            }
            if let Some(v) = row.iter().find(|v| v.dim() != self.n) {
                return Err(Error::BadArguments(format!("row {i} holds a vector of dimension {}", v.dim())));
            }
        }
        if let Some(b) = &self.f0_basis {
            if b.len() != self.k || b.iter().any(|v| v.len() != self.n) {
                return Err(Error::BadArguments("F0 basis must hold k vectors of length n".into()));
            }
            if Frame::new(self.n, b.clone()).rank() != self.k {
                return Err(Error::BadArguments("F0 basis vectors are dependent".into()));
            }
        }
        Ok(())
    }

    pub fn f0_basis_vectors(&self) -> Vec<Vec<GaussRat>> {
        default_basis(self.n, self.k, &self.f0_basis)
    }

    pub fn f0_projector(&self) -> ExactMatrix {
        Frame::new(self.n, self.f0_basis_vectors()).projector()
    }

    /// Checks the alternating pattern column by column, exactly on the
    /// coefficients: either even rows lie in `F₀` and odd rows in `F₀⊥`,
    /// or the other way round.
    pub fn check_pattern(&self) -> Result<()> {
        let p = self.f0_projector();
        let q = Matrix::identity(self.n).sub(&p);
        let (pr, qr) = (p.rows_vec(), q.rows_vec());
        for j in 0..self.n {
            let mut in_f0 = Vec::with_capacity(self.r());
            let mut in_perp = Vec::with_capacity(self.r());
            for i in 0..self.r() {
                let v = &self.entries[i][j];
                in_f0.push(v.is_zero() || v.apply(&qr).is_zero());
                in_perp.push(v.is_zero() || v.apply(&pr).is_zero());
            }
            let type_i = (0..self.r()).all(|i| if i % 2 == 0 { in_f0[i] } else { in_perp[i] });
            let type_ii = (0..self.r()).all(|i| if i % 2 == 0 { in_perp[i] } else { in_f0[i] });
            if !type_i && !type_ii {
                let bad = (0..self.r()).find(|&i| !(in_f0[i] || in_perp[i]));
                let detail = match bad {
                    Some(i) => format!("entry in row {i} has components in both F0 and F0⊥"),
                    None => "rows do not alternate between F0 and F0⊥".to_string(),
                };
                return Err(Error::PatternViolation { column: j, detail });
            }
        }
        Ok(())
    }
}

fn default_basis(n: usize, k: usize, b: &Option<Vec<Vec<GaussRat>>>) -> Vec<Vec<GaussRat>> {
    match b {
        Some(b) => b.clone(),
        None => Frame::<GaussRat>::standard(n, 0..k).columns,
    }
}

/// `H₀ = K₀`, `H_i = Σ_{s=1}^{i} (−1)^{s+i} C(i−1,s−1) K_s`.
pub fn k_grid_to_h(k: &[Vec<MeroVector>]) -> Vec<Vec<MeroVector>> {
    transform_rows(k, |i, s| if s == 0 { (i == 0) as i64 } else { sign(s + i) * binom(i - 1, s - 1) })
}

/// `K₀ = H₀`, `K_i = Σ_{s=1}^{i} C(i−1,s−1) H_s`.
pub fn h_grid_to_k(h: &[Vec<MeroVector>]) -> Vec<Vec<MeroVector>> {
    transform_rows(h, |i, s| if s == 0 { (i == 0) as i64 } else { binom(i - 1, s - 1) })
}

/// `R_i = Σ_{l=0}^{i} C(i,l) H_l`.
pub fn h_grid_to_r(h: &[Vec<MeroVector>]) -> Vec<Vec<MeroVector>> {
    transform_rows(h, binom)
}

/// Partial sums `Σ_{s=0}^{i} K_s`.
pub fn k_grid_partial_sums(k: &[Vec<MeroVector>]) -> Vec<Vec<MeroVector>> {
    transform_rows(k, |_, _| 1)
}

fn sign(e: i64) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Row `i` of the output is `Σ_{s≤i} coef(i,s)·row_s`.
fn transform_rows(grid: &[Vec<MeroVector>], coef: impl Fn(i64, i64) -> i64) -> Vec<Vec<MeroVector>> {
    let n = grid.first().map_or(0, Vec::len);
    (0..grid.len())
        .map(|i| {
            (0..n)
                .map(|j| {
                    let dim = grid[i][j].dim();
                    (0..=i).fold(MeroVector::zero(dim), |acc, s| {
                        let c = coef(i as i64, s as i64);
                        if c == 0 || grid[s][j].is_zero() {
                            acc
                        } else {
                            acc.add(&grid[s][j].scale(&GaussRat::from_ints(c, 0)))
                        }
                    })
                })
                .collect()
        })
        .collect()
}

/// Generic ranks recorded when a chain is built.
#[derive(Clone, Debug, PartialEq)]
pub struct GenericData {
    pub points: Vec<GaussRat>,
    /// Ranks of `α₁,…,α_r`.
    pub alpha_ranks: Vec<usize>,
    /// Ranks of `F₀,…,F_r`; `None` when some `F_i` fails to split `α_{i+1}`.
    pub f_ranks: Option<Vec<usize>>,
}

/// A constructed map `φ = Q(π₁−π₁⊥)⋯(π_r−π_r⊥)`.
#[derive(Clone, Debug)]
pub struct UnitonChain {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    /// `+1` for `Q = π_{F₀}−π_{F₀}⊥`, `−1` for its negative.
    pub q_sign: i8,
    pub f0_basis: Vec<Vec<GaussRat>>,
    pub f0_projector: ExactMatrix,
    /// The array this chain came from, when built from an `F₀`-array.
    pub source: Option<F0Array>,
    pub k_grid: Vec<Vec<MeroVector>>,
    pub h: Vec<Vec<MeroVector>>,
    /// `h_derivs[d][i][j] = H^{(d)}_{i,j}` for `d < r`.
    pub h_derivs: Vec<Vec<Vec<MeroVector>>>,
    pub generic: Option<GenericData>,
}

impl UnitonChain {
    /// Builds a chain from an `F₀`-array after checking its pattern.
    pub fn from_array(array: &F0Array, q_sign: i8) -> Result<Self> {
        array.check_pattern()?;
        let h = k_grid_to_h(&array.entries);
        let mut c = Self::assemble(array.n, array.k, array.f0_basis_vectors(), q_sign, array.entries.clone(), h)?;
        c.source = Some(array.clone());
        Ok(c)
    }

    /// Builds a chain from raw `H` data with no pattern requirement, so the
    /// result is a harmonic map into `U(n)` that need not be Grassmannian.
    pub fn from_h_grid(n: usize, k: usize, f0_basis: Option<Vec<Vec<GaussRat>>>, q_sign: i8, h: Vec<Vec<MeroVector>>) -> Result<Self> {
        let probe = F0Array { n, k, f0_basis: f0_basis.clone(), entries: h.clone() };
        probe.check_shape()?;
        let kg = h_grid_to_k(&h);
        Self::assemble(n, k, default_basis(n, k, &f0_basis), q_sign, kg, h)
    }

    fn assemble(n: usize, k: usize, f0_basis: Vec<Vec<GaussRat>>, q_sign: i8, k_grid: Vec<Vec<MeroVector>>, h: Vec<Vec<MeroVector>>) -> Result<Self> {
        if q_sign != 1 && q_sign != -1 {
            return Err(Error::BadArguments(format!("Q_sign must be ±1, got {q_sign}")));
        }
        let r = h.len();
        let h_derivs = (0..r)
            .map(|d| h.iter().map(|row| row.iter().map(|v| v.derivative(d)).collect()).collect())
            .collect();
        let f0_projector = Frame::new(n, f0_basis.clone()).projector();
        Ok(UnitonChain { n, k, r, q_sign, f0_basis, f0_projector, source: None, k_grid, h, h_derivs, generic: None })
    }

    /// Flips `Q`, turning every `F_i` into `F_i⊥`.
    pub fn dualize(&self) -> Self {
        let mut c = self.clone();
        c.q_sign = -self.q_sign;
        if let Some(g) = &mut c.generic {
            if let Some(f) = &mut g.f_ranks {
                for x in f.iter_mut() {
                    *x = self.n - *x;
                }
            }
        }
        c
    }

    /// `Q` as an exact matrix.
    pub fn q_matrix(&self) -> ExactMatrix {
        let q = reflection(&self.f0_projector);
        if self.q_sign < 0 {
            q.neg()
        } else {
            q
        }
    }

    /// Starting subspace of the F-chain: `F₀`, or `F₀⊥` after dualizing.
    pub fn f_start<F: Field>(&self) -> Frame<F> {
        let f0 = Frame::new(self.n, self.f0_basis.clone());
        let f = if self.q_sign < 0 { f0.orthocomplement() } else { f0 };
        f.map(F::from_gauss)
    }

    /// Evaluates `H^{(d)}_{i,j}` at `z` for all `d, i, j`.
    pub fn eval_h<F: Field>(&self, z: &F) -> Result<Vec<Vec<Vec<Vec<F>>>>> {
        self.h_derivs
            .iter()
            .map(|g| g.iter().map(|row| row.iter().map(|v| v.eval_in(z)).collect()).collect())
            .collect()
    }

    /// Evaluates `K^{(d)}_{i,j}` at `z` for `d ≤ max_order`.
    pub fn eval_k<F: Field>(&self, z: &F, max_order: usize) -> Result<Vec<Vec<Vec<Vec<F>>>>> {
        (0..=max_order)
            .map(|d| {
                self.k_grid
                    .iter()
                    .map(|row| row.iter().map(|v| v.derivative(d).eval_in(z)).collect())
                    .collect()
            })
            .collect()
    }

    /// Whether some entry of the data has a pole at `z`.
    pub fn has_pole_at(&self, z: &GaussRat) -> bool {
        self.h
            .iter()
            .chain(self.k_grid.iter())
            .flatten()
            .flat_map(|v| v.coords.iter())
            .any(|f| f.den().eval(z).is_zero())
    }

    /// Projection stack `π₁,…,π_upto` at `z`.
    pub fn stack_at<F: Field>(&self, z: &F, upto: usize) -> Result<ProjectionStack<F>> {
        if upto > self.r {
            return Err(Error::OutOfRange(format!("stack depth {upto} exceeds r={}", self.r)));
        }
        let hv = self.eval_h(z)?;
        let mut st = ProjectionStack::new(z.clone(), self.n);
        for i in 0..upto {
            let frame = alpha_frame(&hv, i, &st, self.n);
            st.push(frame);
        }
        Ok(st)
    }

    /// Like [`Self::stack_at`], flagging points where some `α_i` falls below
    /// its recorded generic rank.
    pub fn stack_at_checked<F: Field>(&self, z: &F, upto: usize) -> Result<ProjectionStack<F>> {
        let st = self.stack_at(z, upto)?;
        if let Some(g) = &self.generic {
            for (i, fr) in st.frames.iter().enumerate() {
                let got = fr.rank();
                if got < g.alpha_ranks[i] {
                    return Err(Error::RankDropAtPoint {
                        point: format!("{z:?}"),
                        what: format!("alpha_{}", i + 1),
                        got,
                        expected: g.alpha_ranks[i],
                    });
                }
            }
        }
        Ok(st)
    }

    /// `φ_i(z) = Q(π₁−π₁⊥)⋯(π_i−π_i⊥)`.
    pub fn phi_at<F: Field>(&self, i: usize, z: &F) -> Result<Matrix<F>> {
        let st = self.stack_at_checked(z, i)?;
        Ok(self.phi_from_stack(&st, i))
    }

    pub fn phi_from_stack<F: Field>(&self, st: &ProjectionStack<F>, i: usize) -> Matrix<F> {
        let mut m = self.q_matrix().map(F::from_gauss);
        for l in 1..=i {
            m = m.mul(&reflection(st.pi(l)));
        }
        m
    }

    /// The F-chain `F₀,…,F_r` at `z`, each `F_{i+1} = α_{i+1}∩F_i ⊕ α_{i+1}⊥∩F_i⊥`.
    pub fn f_chain_at<F: Field>(&self, z: &F) -> Result<FChain<F>> {
        let st = self.stack_at_checked(z, self.r)?;
        self.f_chain_from_stack(&st)
    }

    pub fn f_chain_from_stack<F: Field>(&self, st: &ProjectionStack<F>) -> Result<FChain<F>> {
        let mut frames = vec![self.f_start::<F>()];
        let mut consistent = vec![true];
        for i in 0..st.depth() {
            let fi = &frames[i];
            let alpha = &st.frames[i];
            let fi_perp = fi.orthocomplement();
            let inside = alpha.intersect(fi);
            let outside = alpha.intersect(&fi_perp);
            let (ri, ro, ra) = (inside.rank(), outside.rank(), alpha.rank());
            if ri + ro != ra {
                return Err(Error::SplitFailure { step: i, inside: ri, outside: ro, total: ra });
            }
            let next = inside.sum(&alpha.orthocomplement().intersect(&fi_perp));
            let phi = self.phi_from_stack(st, i + 1);
            let refl = reflection(&next.projector());
            consistent.push(if F::EXACT { phi == refl } else { phi.dist(&refl) <= 1e-9 });
            frames.push(next);
        }
        let ranks = frames.iter().map(Frame::rank).collect();
        Ok(FChain { frames, ranks, phi_consistent: consistent })
    }

    /// Records generic ranks at [`SAMPLE_POINTS`] points drawn from `seed`.
    pub fn with_generic(mut self, seed: u64) -> Result<Self> {
        self.generic = Some(self.compute_generic(seed)?);
        Ok(self)
    }

    /// Draws sample points, rejecting poles and points where some frame
    /// falls below the largest rank observed so far.
    pub fn compute_generic(&self, seed: u64) -> Result<GenericData> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut seen: Vec<(GaussRat, Vec<usize>, Option<Vec<usize>>)> = Vec::new();
        let max_draws = 16 * SAMPLE_POINTS;
        let mut draws = 0;
        loop {
            let (alpha_max, f_max) = maxima(&seen);
            let good = seen.iter().filter(|(_, a, f)| *a == alpha_max && *f == f_max).count();
            if good >= SAMPLE_POINTS {
                let points = seen
                    .iter()
                    .filter(|(_, a, f)| *a == alpha_max && *f == f_max)
                    .take(SAMPLE_POINTS)
                    .map(|(p, _, _)| p.clone())
                    .collect();
                return Ok(GenericData { points, alpha_ranks: alpha_max, f_ranks: f_max });
            }
            if draws >= max_draws {
                return Err(Error::NoGenericPoint(format!("only {good} usable points in {draws} draws")));
            }
            draws += 1;
            let z = random_point(&mut rng);
            if self.has_pole_at(&z) {
                continue;
            }
            let st = self.stack_at(&z, self.r)?;
            let a: Vec<usize> = st.frames.iter().map(Frame::rank).collect();
            let f = self.f_chain_from_stack(&st).ok().map(|c| c.ranks);
            seen.push((z, a, f));
        }
    }

    /// Records generic ranks over caller-chosen points. Poles are skipped;
    /// points below the maximal observed ranks are dropped from the record.
    pub fn with_points(mut self, points: &[GaussRat]) -> Result<Self> {
        let mut seen = Vec::new();
        for z in points {
            if self.has_pole_at(z) {
                continue;
            }
            let st = self.stack_at(z, self.r)?;
            let a: Vec<usize> = st.frames.iter().map(Frame::rank).collect();
            let f = self.f_chain_from_stack(&st).ok().map(|c| c.ranks);
            seen.push((z.clone(), a, f));
        }
        if seen.is_empty() {
            return Err(Error::NoGenericPoint("every supplied point is a pole".into()));
        }
        let (alpha_ranks, f_ranks) = maxima(&seen);
        let points = seen.into_iter().filter(|(_, a, f)| *a == alpha_ranks && *f == f_ranks).map(|(p, _, _)| p).collect();
        self.generic = Some(GenericData { points, alpha_ranks, f_ranks });
        Ok(self)
    }

    pub fn generic_points(&self) -> Vec<GaussRat> {
        self.generic.as_ref().map(|g| g.points.clone()).unwrap_or_default()
    }

    /// The full stack `π₁,…,π_upto` together with the tagged spanning
    /// vectors of each `α_{i+1}`, `i < upto`.
    #[allow(clippy::type_complexity)]
    pub fn stack_with_columns<F: Field>(&self, z: &F, upto: usize) -> Result<(ProjectionStack<F>, Vec<Vec<(usize, usize, Vec<F>)>>)> {
        let hv = self.eval_h(z)?;
        self.stack_from_values(z, &hv, upto)
    }

    /// As [`Self::stack_with_columns`], from precomputed `hv[d][i][j] = H^{(d)}_{i,j}(z)`.
    #[allow(clippy::type_complexity)]
    pub fn stack_from_values<F: Field>(
        &self,
        z: &F,
        hv: &[Vec<Vec<Vec<F>>>],
        upto: usize,
    ) -> Result<(ProjectionStack<F>, Vec<Vec<(usize, usize, Vec<F>)>>)> {
        if upto > self.r {
            return Err(Error::OutOfRange(format!("stack depth {upto} exceeds r={}", self.r)));
        }
        let mut st = ProjectionStack::new(z.clone(), self.n);
        let mut cols = Vec::with_capacity(upto);
        for i in 0..upto {
            let c: Vec<_> = alpha_columns(hv, i, &st, self.n).into_iter().flatten().collect();
            st.push(Frame::new(self.n, c.iter().map(|(_, _, v)| v.clone()).collect()));
            cols.push(c);
        }
        Ok((st, cols))
    }

    /// `H^{(d)}_{i,j}` with coefficients converted into `F`.
    pub fn compile_h<F: Field>(&self) -> Vec<Vec<Vec<CompiledVector<F>>>> {
        self.h_derivs
            .iter()
            .map(|g| g.iter().map(|row| row.iter().map(CompiledVector::new).collect()).collect())
            .collect()
    }

    /// The frame of `α_{i+1}` at `z` (builds `π₁,…,π_i` first).
    pub fn alpha_at<F: Field>(&self, i: usize, z: &F) -> Result<Frame<F>> {
        if i >= self.r {
            return Err(Error::OutOfRange(format!("α_{} requested but r={}", i + 1, self.r)));
        }
        let st = self.stack_at(z, i)?;
        let hv = self.eval_h(z)?;
        Ok(alpha_frame(&hv, i, &st, self.n))
    }
}

fn maxima(seen: &[(GaussRat, Vec<usize>, Option<Vec<usize>>)]) -> (Vec<usize>, Option<Vec<usize>>) {
    let mut a: Vec<usize> = Vec::new();
    for (_, x, _) in seen {
        if a.is_empty() {
            a = x.clone();
        } else {
            for (m, v) in a.iter_mut().zip(x) {
                *m = (*m).max(*v);
            }
        }
    }
    // F ranks are only comparable among points where α attains its maximum.
    let f = seen
        .iter()
        .filter(|(_, x, _)| *x == a)
        .filter_map(|(_, _, f)| f.clone())
        .next();
    (a, f)
}

/// A rational point with coordinates `p/q`, `|p| ≤ 97`, `1 ≤ q ≤ 97`.
pub fn random_point(rng: &mut ChaCha8Rng) -> GaussRat {
    let mut part = || {
        let p = rng.gen_range(-SAMPLE_HEIGHT..=SAMPLE_HEIGHT);
        let q = rng.gen_range(1..=SAMPLE_HEIGHT);
        (p, q)
    };
    let (a, b) = part();
    let (c, d) = part();
    GaussRat::from_fracs(a, b, c, d)
}

/// The F-chain at one point.
#[derive(Clone, Debug)]
pub struct FChain<F> {
    pub frames: Vec<Frame<F>>,
    pub ranks: Vec<usize>,
    /// Whether `φ_i = π_{F_i} − π_{F_i}⊥` held, for each `i`.
    pub phi_consistent: Vec<bool>,
}

/// Projectors `π₁,…,π_i` at one point, with the Pascal table of `C^l_s`.
#[derive(Clone, Debug)]
pub struct ProjectionStack<F> {
    pub point: F,
    pub n: usize,
    pub frames: Vec<Frame<F>>,
    pub projectors: Vec<Matrix<F>>,
    /// `c[l][s] = C^l_s` for `0 ≤ s ≤ l ≤ depth`.
    c: Vec<Vec<Matrix<F>>>,
}

impl<F: Field> ProjectionStack<F> {
    pub fn new(point: F, n: usize) -> Self {
        ProjectionStack { point, n, frames: Vec::new(), projectors: Vec::new(), c: vec![vec![Matrix::identity(n)]] }
    }

    /// Stack from given projectors, for identities that do not need frames.
    pub fn from_projectors(point: F, n: usize, projectors: Vec<Matrix<F>>) -> Self {
        let mut st = Self::new(point, n);
        for p in projectors {
            let frame = Frame::new(n, p.columns());
            st.push_with_projector(frame, p);
        }
        st
    }

    pub fn depth(&self) -> usize {
        self.projectors.len()
    }

    pub fn push(&mut self, frame: Frame<F>) {
        let p = frame.projector();
        self.push_with_projector(frame, p);
    }

    fn push_with_projector(&mut self, frame: Frame<F>, p: Matrix<F>) {
        let perp = Matrix::identity(self.n).sub(&p);
        let prev = self.c.last().unwrap();
        let i = prev.len();
        let row = (0..=i)
            .map(|s| {
                let keep = if s < i { prev[s].clone() } else { Matrix::zeros(self.n, self.n) };
                if s == 0 {
                    keep
                } else {
                    perp.mul(&prev[s - 1]).add(&keep)
                }
            })
            .collect();
        self.c.push(row);
        self.frames.push(frame);
        self.projectors.push(p);
    }

    /// `π_l`, 1-based.
    pub fn pi(&self, l: usize) -> &Matrix<F> {
        &self.projectors[l - 1]
    }

    /// `π_l⊥`, 1-based.
    pub fn pi_perp(&self, l: usize) -> Matrix<F> {
        Matrix::identity(self.n).sub(self.pi(l))
    }

    /// `C^i_s`: identity for `s = 0`, zero outside `0 ≤ s ≤ i`.
    pub fn elementary_c(&self, i: i64, s: i64) -> Matrix<F> {
        if i < 0 || s < 0 || s > i {
            return Matrix::zeros(self.n, self.n);
        }
        if s == 0 {
            return Matrix::identity(self.n);
        }
        assert!(i as usize <= self.depth(), "C^{i}_{s} needs {i} projectors");
        self.c[i as usize][s as usize].clone()
    }

    /// `S^i_j`, the sum of ordered products `Π_i⋯Π_1` with exactly `j`
    /// factors `π_l⊥` and the rest `π_l`. Identity for `i = j = 0`.
    pub fn elementary_s(&self, i: i64, j: i64) -> Matrix<F> {
        if i < 0 || j < 0 || j > i {
            return Matrix::zeros(self.n, self.n);
        }
        assert!(i as usize <= self.depth(), "S^{i}_{j} needs {i} projectors");
        self.s_table(i as usize)[j as usize].clone()
    }

    /// Row `i` of the S table: `[S^i_0,…,S^i_i]`.
    pub fn s_table(&self, i: usize) -> Vec<Matrix<F>> {
        let mut row = vec![Matrix::identity(self.n)];
        for l in 1..=i {
            let p = self.pi(l);
            let q = self.pi_perp(l);
            row = (0..=l)
                .map(|j| {
                    let a = if j < l { p.mul(&row[j]) } else { Matrix::zeros(self.n, self.n) };
                    if j == 0 {
                        a
                    } else {
                        a.add(&q.mul(&row[j - 1]))
                    }
                })
                .collect();
        }
        row
    }
}

/// The spanning vectors of `α_{i+1}`, ordered by `k` then `j`, zero vectors
/// dropped. `hv[d][row][col]` holds `H^{(d)}_{row,col}` at the point.
pub fn alpha_frame<F: Field>(hv: &[Vec<Vec<Vec<F>>>], i: usize, st: &ProjectionStack<F>, n: usize) -> Frame<F> {
    Frame::new(n, alpha_columns(hv, i, st, n).into_iter().flatten().map(|(_, _, v)| v).collect())
}

/// The nonzero spanning vectors `α^{(k)}_{i+1,j}`, grouped by `k` and tagged `(k, j)`.
pub fn alpha_columns<F: Field>(hv: &[Vec<Vec<Vec<F>>>], i: usize, st: &ProjectionStack<F>, n: usize) -> Vec<Vec<(usize, usize, Vec<F>)>> {
    let cs: Vec<Matrix<F>> = (0..=i).map(|s| st.elementary_c(i as i64, s as i64)).collect();
    let ncols = hv.first().and_then(|g| g.first()).map_or(0, Vec::len);
    (0..=i)
        .map(|k| {
            (0..ncols)
                .filter_map(|j| {
                    let mut acc = vec![F::zero(); n];
                    for s in k..=i {
                        let h = &hv[k][s - k][j];
                        if h.iter().all(|x| x.is_zero()) {
                            continue;
                        }
                        let v = cs[s].mul_vec(h);
                        for (a, b) in acc.iter_mut().zip(v) {
                            *a = a.clone() + b;
                        }
                    }
                    if acc.iter().all(|x| x.is_zero()) {
                        None
                    } else {
                        Some((k, j, acc))
                    }
                })
                .collect()
        })
        .collect()
}

/// Whether `π_i α_{i+1} = α_i` as subspaces (1-based `i ≥ 1`).
pub fn covering_holds<F: Field>(st: &ProjectionStack<F>, next: &Frame<F>, i: usize) -> bool {
    let p = st.pi(i);
    let image = Frame::new(st.n, next.columns.iter().map(|c| p.mul_vec(c)).collect());
    image.same_span(&st.frames[i - 1])
}

/// `π_{F₀}` converted into the field `F`.
pub fn f0_projector_in<F: Field>(chain: &UnitonChain) -> Matrix<F> {
    chain.f0_projector.map(F::from_gauss)
}

/// Whether `R_i = Σ_{s=0}^{i} K_s` holds row by row.
pub fn r_matches_partial_sums(chain: &UnitonChain) -> bool {
    h_grid_to_r(&chain.h) == k_grid_partial_sums(&chain.k_grid)
}

/// `true` if `m` is the identity (exactly, or within `tol` in float).
pub fn is_identity<F: Field>(m: &Matrix<F>, tol: f64) -> bool {
    let id = Matrix::identity(m.nrows());
    if F::EXACT {
        *m == id
    } else {
        m.dist(&id) <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::RatFun;
    use crate::Complex64;

    fn g(s: &str) -> GaussRat {
        s.parse().unwrap()
    }

    fn poly_vec(n: usize, coords: &[(usize, &[&str])]) -> MeroVector {
        let mut v = MeroVector::zero(n);
        for (idx, cs) in coords {
            v.coords[*idx] = RatFun::from_coeffs(cs.iter().map(|s| g(s)).collect());
        }
        v
    }

    #[test]
    fn binomials() {
        assert_eq!(binom(4, 2), 6);
        assert_eq!(binom(0, 0), 1);
        assert_eq!(binom(3, 4), 0);
        assert_eq!(binom(3, -1), 0);
    }

    /// The dimension-two array `[[L01, E01], [E11, L11], [L21, E21]]`.
    fn dim2_array() -> Vec<Vec<MeroVector>> {
        let n = 4;
        let l01 = poly_vec(n, &[(0, &["1"]), (1, &["0", "1"])]);
        let e01 = poly_vec(n, &[(2, &["1"]), (3, &["0", "0", "1"])]);
        let e11 = poly_vec(n, &[(3, &["2"])]);
        let l11 = poly_vec(n, &[(0, &["0", "1"])]);
        let l21 = poly_vec(n, &[(1, &["1", "1"])]);
        let e21 = poly_vec(n, &[(2, &["i"])]);
        vec![vec![l01, e01], vec![e11.clone(), l11.clone()], vec![l21.clone(), e21.clone()]]
            .into_iter()
            .map(|mut row| {
                row.extend([MeroVector::zero(n), MeroVector::zero(n)]);
                row
            })
            .collect()
    }

    #[test]
    fn h_rows_match_worked_example() {
        let k = dim2_array();
        let h = k_grid_to_h(&k);
        assert_eq!(h[0][0], k[0][0]);
        assert_eq!(h[1][0], k[1][0]);
        assert_eq!(h[2][0], k[2][0].add(&k[1][0].scale(&g("-1"))));
        assert_eq!(h[2][1], k[2][1].add(&k[1][1].scale(&g("-1"))));
        assert_eq!(h_grid_to_k(&h), k);
    }

    #[test]
    fn r_rows_are_partial_sums() {
        let k = dim2_array();
        let h = k_grid_to_h(&k);
        let r = h_grid_to_r(&h);
        assert_eq!(r[0], h[0]);
        assert_eq!(r[2][0], h[0][0].add(&h[1][0].scale(&g("2"))).add(&h[2][0]));
        assert_eq!(r, k_grid_partial_sums(&k));
    }

    #[test]
    fn zero_rows_stay_zero() {
        let mut k = dim2_array();
        for row in k.iter_mut().skip(1) {
            for v in row.iter_mut() {
                *v = MeroVector::zero(4);
            }
        }
        let h = k_grid_to_h(&k);
        assert!(h.iter().skip(1).flatten().all(MeroVector::is_zero));
    }

    #[test]
    fn pattern_violation_detected() {
        let mut k = dim2_array();
        k[1][0] = poly_vec(4, &[(0, &["1"])]);
        let a = F0Array::new(4, 2, k).unwrap();
        assert!(matches!(a.check_pattern(), Err(Error::PatternViolation { column: 0, .. })));
    }

    #[test]
    fn constant_chain() {
        let a = F0Array::new(5, 3, vec![]).unwrap();
        let c = UnitonChain::from_array(&a, 1).unwrap();
        let phi = c.phi_at(0, &g("1/2")).unwrap();
        assert_eq!(phi, reflection(&c.f0_projector));
        let full = F0Array::new(3, 3, vec![]).unwrap();
        let c = UnitonChain::from_array(&full, 1).unwrap();
        assert_eq!(c.phi_at(0, &g("i")).unwrap(), Matrix::identity(3));
    }

    #[test]
    fn holomorphic_rank_one_is_unitary() {
        let v = poly_vec(2, &[(0, &["1"]), (1, &["0", "1"])]);
        let a = F0Array::new(2, 2, vec![vec![v, MeroVector::zero(2)]]).unwrap();
        let c = UnitonChain::from_array(&a, 1).unwrap().with_generic(3).unwrap();
        for z in c.generic_points() {
            let phi = c.phi_at(1, &z).unwrap();
            assert_eq!(phi.mul(&phi.adjoint()), Matrix::identity(2));
        }
    }

    #[test]
    fn pascal_and_cs_relation_on_dim2_example() {
        let a = F0Array::new(4, 2, dim2_array()).unwrap();
        let c = UnitonChain::from_array(&a, 1).unwrap();
        let st = c.stack_at(&g("1/3+2/5i"), 3).unwrap();
        for i in 1..=3i64 {
            for s in 1..=i {
                let rhs = st.pi_perp(i as usize).mul(&st.elementary_c(i - 1, s - 1)).add(&st.elementary_c(i - 1, s));
                assert_eq!(st.elementary_c(i, s), rhs);
            }
            for k in 0..=i {
                let sum = (k..=i).fold(Matrix::zeros(4, 4), |acc, s| {
                    acc.add(&st.elementary_s(i, s).scale(&GaussRat::from_ints(binom(s, k), 0)))
                });
                assert_eq!(st.elementary_c(i, k), sum);
            }
        }
        let expect = st.pi(2).mul(&st.pi_perp(1)).add(&st.pi_perp(2).mul(st.pi(1)));
        assert_eq!(st.elementary_s(2, 1), expect);
        assert_eq!(st.elementary_s(2, 0), st.pi(2).mul(st.pi(1)));
        assert_eq!(st.elementary_c(2, 2), st.pi_perp(2).mul(&st.pi_perp(1)));
    }

    #[test]
    fn exact_and_float_agree() {
        let a = F0Array::new(4, 2, dim2_array()).unwrap();
        let c = UnitonChain::from_array(&a, 1).unwrap();
        let z = g("1/3+2/5i");
        let exact = c.phi_at(3, &z).unwrap();
        let float = c.phi_at(3, &z.to_c64()).unwrap();
        assert!(exact.to_c64().dist(&float) < 1e-9);
        let _: Matrix<Complex64> = float;
    }
}
