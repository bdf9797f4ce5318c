//! Adapted pairs `(L,S)`, rank counting, uniton-number bounds and the
//! enumerator of admissible pairs for a target Grassmannian.
//!
//! Entries are stored by column: `l[i][t]` is `l_i^t`, the generic rank of
//! the `t`-th projected derivative of the `F₀`-valued data that starts in
//! row `i`. In the usual lower-triangular picture this entry sits in row
//! `i+t`, column `i`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::engine::{F0Array, UnitonChain};
use crate::linalg::{Frame, Matrix};
use crate::ratfun::MeroVector;
use crate::scalar::GaussRat;
use crate::{Error, Result};

/// A pair of lower-triangular rank matrices, stored column by column.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AdaptedPair {
    #[serde(default)]
    pub n: usize,
    pub k: usize,
    #[serde(rename = "L")]
    pub l: Vec<Vec<usize>>,
    #[serde(rename = "S")]
    pub s: Vec<Vec<usize>>,
}

/// Column offsets of the blocks of a matching array.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockIndex {
    #[serde(rename = "A")]
    pub a: Vec<usize>,
    #[serde(rename = "B")]
    pub b: Vec<usize>,
}

impl AdaptedPair {
    /// Validates shape, column monotonicity and the three sum bounds.
    pub fn new(n: usize, k: usize, l: Vec<Vec<usize>>, s: Vec<Vec<usize>>) -> Result<Self> {
        let p = AdaptedPair { n, k, l, s };
        p.validate()?;
        Ok(p)
    }

    /// Builds a pair from the lower-triangular matrices written row by row
    /// (`rows[m][i] = l_i^{m−i}`).
    pub fn from_matrices(n: usize, k: usize, l_rows: &[Vec<usize>], s_rows: &[Vec<usize>]) -> Result<Self> {
        let r = l_rows.len();
        if s_rows.len() != r {
            return Err(Error::BadArguments("L and S must have the same order".into()));
        }
        let cols = |rows: &[Vec<usize>]| -> Result<Vec<Vec<usize>>> {
            (0..r)
                .map(|i| {
                    (0..r - i)
                        .map(|t| {
                            rows[i + t]
                                .get(i)
                                .copied()
                                .ok_or_else(|| Error::BadArguments(format!("row {} is too short", i + t)))
                        })
                        .collect()
                })
                .collect()
        };
        Self::new(n, k, cols(l_rows)?, cols(s_rows)?)
    }

    /// The matrices in row-major lower-triangular form.
    pub fn to_matrices(&self) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let r = self.r();
        let rows = |c: &Vec<Vec<usize>>| {
            (0..r).map(|m| (0..r).map(|i| if i <= m { c[i][m - i] } else { 0 }).collect()).collect()
        };
        (rows(&self.l), rows(&self.s))
    }

    pub fn zero(n: usize, k: usize, r: usize) -> Self {
        let col = |i: usize| vec![0; r - i];
        AdaptedPair { n, k, l: (0..r).map(col).collect(), s: (0..r).map(col).collect() }
    }

    pub fn r(&self) -> usize {
        self.l.len()
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.r();
        if self.s.len() != r {
            return Err(Error::BadArguments("L and S must have the same order".into()));
        }
        if self.k > self.n {
            return Err(Error::BadArguments(format!("k={} exceeds n={}", self.k, self.n)));
        }
        for (name, m) in [("L", &self.l), ("S", &self.s)] {
            for (i, col) in m.iter().enumerate() {
                if col.len() != r - i {
                    return Err(Error::BadArguments(format!("{name} column {i} has length {}, expected {}", col.len(), r - i)));
                }
                if col.windows(2).any(|w| w[1] > w[0]) {
                    return Err(Error::BadArguments(format!("{name} column {i} is not non-increasing")));
                }
            }
        }
        let (sl, ss) = (self.sum_l(), self.sum_s());
        if sl > self.k {
            return Err(Error::BadArguments(format!("sum of L is {sl} > k={}", self.k)));
        }
        if ss > self.n - self.k {
            return Err(Error::BadArguments(format!("sum of S is {ss} > n−k={}", self.n - self.k)));
        }
        if sl + ss > self.n.saturating_sub(1) {
            return Err(Error::BadArguments(format!("total sum {} exceeds n−1", sl + ss)));
        }
        Ok(())
    }

    pub fn sum_l(&self) -> usize {
        self.l.iter().flatten().sum()
    }

    pub fn sum_s(&self) -> usize {
        self.s.iter().flatten().sum()
    }

    /// `Σ_t l_t^{m−t}`: row `m` of the lower-triangular `L`.
    pub fn row_l(&self, m: usize) -> usize {
        (0..=m.min(self.r().saturating_sub(1))).filter(|&t| m - t < self.l[t].len()).map(|t| self.l[t][m - t]).sum()
    }

    pub fn row_s(&self, m: usize) -> usize {
        (0..=m.min(self.r().saturating_sub(1))).filter(|&t| m - t < self.s[t].len()).map(|t| self.s[t][m - t]).sum()
    }

    /// Rank of `α_{i+1}`: all entries in rows `0..=i` of both matrices.
    pub fn alpha_rank(&self, i: usize) -> usize {
        (0..=i).map(|m| self.row_l(m) + self.row_s(m)).sum()
    }

    pub fn block_index(&self) -> BlockIndex {
        let r = self.r();
        let mut a = Vec::with_capacity(r);
        let mut b = Vec::with_capacity(r);
        let mut acc = 0;
        for i in 0..r {
            a.push(acc);
            b.push(acc + self.l[i][0]);
            acc += self.l[i][0] + self.s[i][0];
        }
        BlockIndex { a, b }
    }

    /// Number of columns used by the blocks, `A_{r−1} + l_{r−1}^0 + s_{r−1}^0`.
    pub fn columns_used(&self) -> usize {
        (0..self.r()).map(|i| self.l[i][0] + self.s[i][0]).sum()
    }

    /// Whether the last row of `L` or `S` is nonzero, i.e. the uniton number is exactly `r`.
    pub fn last_row_nonzero(&self) -> bool {
        self.r() > 0 && self.row_l(self.r() - 1) + self.row_s(self.r() - 1) > 0
    }

    /// Swaps `L` and `S` and replaces `k` by `n−k`.
    pub fn swapped(&self) -> Self {
        AdaptedPair { n: self.n, k: self.n - self.k, l: self.s.clone(), s: self.l.clone() }
    }
}

/// Rank of `F_i` predicted by the counting formula, as a signed value.
pub fn rank_formula_signed(pair: &AdaptedPair, i: usize) -> Result<i64> {
    if i > pair.r() {
        return Err(Error::OutOfRange(format!("i={i} exceeds r={}", pair.r())));
    }
    let diff = |m: usize| pair.row_s(m) as i64 - pair.row_l(m) as i64;
    let k = pair.k as i64;
    Ok(if i % 2 == 0 {
        k + (1..i).step_by(2).map(diff).sum::<i64>()
    } else {
        pair.n as i64 - (k + (0..i).step_by(2).map(diff).sum::<i64>())
    })
}

/// Rank of `F_i` predicted by the counting formula.
pub fn rank_formula(pair: &AdaptedPair, i: usize) -> Result<usize> {
    let v = rank_formula_signed(pair, i)?;
    if v < 0 || v > pair.n as i64 {
        return Err(Error::OutOfRange(format!("counting formula gives {v} for i={i}, outside 0..={}", pair.n)));
    }
    Ok(v as usize)
}

/// Which clause of the estimate applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundCase {
    /// `k < p`
    #[serde(rename = "i")]
    SmallK,
    /// `k ≥ p`, `k + p ≤ n`
    #[serde(rename = "ii")]
    Middle,
    /// `k ≥ p`, `k + p > n`
    #[serde(rename = "iii")]
    LargeK,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bound {
    pub k: usize,
    pub r_k: i64,
    pub case: BoundCase,
    pub a_k: i64,
}

/// Upper bound `r_k` on the uniton number for maps into `G_p(Cⁿ)` built from
/// a `k`-dimensional `F₀`, valid for `2p ≤ n`.
pub fn uniton_bound_detail(k: usize, p: usize, n: usize) -> Result<Bound> {
    if 2 * p > n {
        return Err(Error::BadArguments(format!("bound needs 2p ≤ n, got p={p}, n={n}")));
    }
    if k > n {
        return Err(Error::BadArguments(format!("k={k} exceeds n={n}")));
    }
    let (k_, p_, n_) = (k as i64, p as i64, n as i64);
    let a_k = if k < p { (k % 2 == 0) as i64 } else { ((n - k) % 2 == 0) as i64 };
    let (r_k, case) = if k < p {
        ((2 * p_ - k_ - a_k).min(n_ - 1), BoundCase::SmallK)
    } else if k + p <= n {
        (if k == p { p_ - 1 } else { p_ }, BoundCase::Middle)
    } else {
        (2 * p_ - (n_ - k_) - a_k, BoundCase::LargeK)
    };
    Ok(Bound { k, r_k, case, a_k })
}

pub fn uniton_bound(k: usize, p: usize, n: usize) -> Result<i64> {
    uniton_bound_detail(k, p, n).map(|b| b.r_k)
}

/// The bound for any `p`, passing to `(n−k, n−p)` when `2p > n`.
pub fn uniton_bound_any(k: usize, p: usize, n: usize) -> Result<i64> {
    if 2 * p > n {
        uniton_bound(n - k, n - p, n)
    } else {
        uniton_bound(k, p, n)
    }
}

/// One failed clause of the matching conditions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchingFailure {
    pub row: usize,
    pub clause: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchingReport {
    pub passed: bool,
    pub failures: Vec<MatchingFailure>,
}

/// Checks the three matching clauses. Ranks are generic: the maximum over
/// `points` of the pointwise exact rank.
pub fn matching_check(array: &F0Array, pair: &AdaptedPair, points: &[GaussRat]) -> Result<MatchingReport> {
    matching_pass(array, pair, points, false)
}

/// With `stop_early`, returns after the first row that fails. Rows are
/// checked in order and each only needs the projectors up to its own level,
/// so a bad candidate usually costs a fraction of a full check.
fn matching_pass(array: &F0Array, pair: &AdaptedPair, points: &[GaussRat], stop_early: bool) -> Result<MatchingReport> {
    if array.r() != pair.r() || array.n != pair.n || array.k != pair.k {
        return Err(Error::BadArguments(format!(
            "array (r={}, n={}, k={}) and pair (r={}, n={}, k={}) disagree",
            array.r(),
            array.n,
            array.k,
            pair.r(),
            pair.n,
            pair.k
        )));
    }
    let mut failures = Vec::new();
    let fail = |failures: &mut Vec<MatchingFailure>, row: usize, clause: &str, detail: String| {
        failures.push(MatchingFailure { row, clause: clause.into(), detail })
    };
    let r = pair.r();
    let n = pair.n;
    let bi = pair.block_index();
    if pair.columns_used() > n {
        fail(&mut failures, 0, "i", format!("blocks need {} columns, only {n} available", pair.columns_used()));
        return Ok(MatchingReport { passed: false, failures });
    }

    // Clause (i), exactly on coefficients.
    let p0 = array.f0_projector();
    let q0 = Matrix::identity(n).sub(&p0);
    let (p0r, q0r) = (p0.rows_vec(), q0.rows_vec());
    for i in 0..r {
        for j in bi.a[i]..bi.b[i] {
            if !array.entries[i][j].apply(&q0r).is_zero() {
                fail(&mut failures, i, "i", format!("column {j} is not F0-valued"));
            }
        }
        for j in bi.b[i]..bi.b[i] + pair.s[i][0] {
            if !array.entries[i][j].apply(&p0r).is_zero() {
                fail(&mut failures, i, "i", format!("column {j} is not F0⊥-valued"));
            }
        }
    }
    if stop_early && !failures.is_empty() {
        return Ok(MatchingReport { passed: false, failures });
    }

    // Clauses (ii) and (iii): generic ranks of C^i_i K^{(i−j)}_{j,block},
    // taken as maxima over the usable points.
    let chain = UnitonChain::from_array(array, 1)?;
    let live: Vec<&GaussRat> = points.iter().filter(|z| !chain.has_pole_at(z)).collect();
    if live.is_empty() {
        return Err(Error::NoGenericPoint("every sample point is a pole of the array".into()));
    }
    let hvs = live.iter().map(|z| chain.eval_h(*z)).collect::<Result<Vec<_>>>()?;
    let mut stacks: Vec<_> = live.iter().map(|z| crate::engine::ProjectionStack::new((*z).clone(), n)).collect();
    for i in 0..r {
        // block_ranks[j] holds the (L, S) ranks for data starting in row j.
        let mut block_ranks = vec![(0usize, 0usize); i + 1];
        let mut combined = (0usize, 0usize);
        for (idx, st) in stacks.iter_mut().enumerate() {
            while st.depth() < i {
                let frame = crate::engine::alpha_frame(&hvs[idx], st.depth(), st, n);
                st.push(frame);
            }
            let c = st.elementary_c(i as i64, i as i64);
            let z = live[idx];
            let kv = |d: usize, j: usize, col: usize| chain.k_grid[j][col].derivative(d).eval_in(z);
            let mut all_l = Vec::new();
            let mut all_s = Vec::new();
            for (j, e) in block_ranks.iter_mut().enumerate() {
                let d = i - j;
                let lv = (bi.a[j]..bi.b[j]).map(|col| Ok(c.mul_vec(&kv(d, j, col)?))).collect::<Result<Vec<_>>>()?;
                let sv = (bi.b[j]..bi.b[j] + pair.s[j][0]).map(|col| Ok(c.mul_vec(&kv(d, j, col)?))).collect::<Result<Vec<_>>>()?;
                let rl = Frame::new(n, lv.clone()).rank();
                let rs = Frame::new(n, sv.clone()).rank();
                *e = (e.0.max(rl), e.1.max(rs));
                all_l.extend(lv);
                all_s.extend(sv);
            }
            combined = (combined.0.max(Frame::new(n, all_l).rank()), combined.1.max(Frame::new(n, all_s).rank()));
            // Ranks only grow with more points, so an excess is already final.
            let over = block_ranks.iter().enumerate().any(|(j, &(gl, gs))| gl > pair.l[j][i - j] || gs > pair.s[j][i - j])
                || combined.0 > (0..=i).map(|j| pair.l[j][i - j]).sum()
                || combined.1 > (0..=i).map(|j| pair.s[j][i - j]).sum();
            if stop_early && over {
                break;
            }
        }
        let (mut want_l, mut want_s) = (0, 0);
        for (j, &(gl, gs)) in block_ranks.iter().enumerate() {
            let (el, es) = (pair.l[j][i - j], pair.s[j][i - j]);
            want_l += el;
            want_s += es;
            if gl != el {
                fail(&mut failures, i, "ii", format!("L block of row {j}: rank {gl}, expected l_{j}^{} = {el}", i - j));
            }
            if gs != es {
                fail(&mut failures, i, "ii", format!("S block of row {j}: rank {gs}, expected s_{j}^{} = {es}", i - j));
            }
        }
        if combined.0 != want_l {
            fail(&mut failures, i, "iii", format!("combined L rank {}, expected {want_l}", combined.0));
        }
        if combined.1 != want_s {
            fail(&mut failures, i, "iii", format!("combined S rank {}, expected {want_s}", combined.1));
        }
        if stop_early && !failures.is_empty() {
            break;
        }
    }
    Ok(MatchingReport { passed: failures.is_empty(), failures })
}

fn random_coeff(rng: &mut ChaCha8Rng) -> GaussRat {
    GaussRat::from_ints(rng.gen_range(-4..=4), rng.gen_range(-4..=4))
}

/// Random polynomial vector of the given degree supported on `coords`.
pub fn random_poly_vector(rng: &mut ChaCha8Rng, n: usize, coords: std::ops::Range<usize>, degree: usize) -> MeroVector {
    let cs = (0..n)
        .map(|c| {
            if coords.contains(&c) {
                (0..=degree).map(|_| random_coeff(rng)).collect()
            } else {
                Vec::new()
            }
        })
        .collect();
    MeroVector::from_poly_coeffs(cs)
}

/// Fills the blocks of a matching array with random polynomial data of
/// degree `degree`, `F₀ = span{e₁,…,e_k}`, everything else zero.
pub fn random_matching_array(pair: &AdaptedPair, seed: u64, degree: usize) -> Result<F0Array> {
    pair.validate()?;
    let r = pair.r();
    let n = pair.n;
    let max_block = (0..r).map(|i| pair.l[i][0].max(pair.s[i][0])).max().unwrap_or(0);
    if max_block > 0 && degree < r + max_block {
        return Err(Error::InfeasiblePair(format!(
            "degree {degree} cannot supply derivative data for order {r} with blocks of width {max_block}"
        )));
    }
    if pair.columns_used() > n {
        return Err(Error::InfeasiblePair(format!("blocks need {} columns, only {n} available", pair.columns_used())));
    }
    if pair.sum_l() > 0 && pair.k == 0 || pair.sum_s() > 0 && pair.k == n {
        return Err(Error::InfeasiblePair("a block needs a nonzero subspace".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bi = pair.block_index();
    let mut entries = vec![vec![MeroVector::zero(n); n]; r];
    for i in 0..r {
        for j in bi.a[i]..bi.b[i] {
            entries[i][j] = random_poly_vector(&mut rng, n, 0..pair.k, degree);
        }
        for j in bi.b[i]..bi.b[i] + pair.s[i][0] {
            entries[i][j] = random_poly_vector(&mut rng, n, pair.k..n, degree);
        }
    }
    F0Array::new(n, pair.k, entries)
}

/// A random `F₀`-array, `F₀ = span{e₁,…,e_k}`, with `width` nonzero columns
/// (the rest zero). Each column picks a parity type at random; each entry is
/// then a random polynomial vector of degree at most `degree` in `F₀` or
/// `F₀⊥` as its row requires, or zero with probability one in four.
pub fn random_f0_array(seed: u64, n: usize, k: usize, r: usize, width: usize, degree: usize) -> Result<F0Array> {
    if k > n || width > n {
        return Err(Error::BadArguments(format!("need k ≤ n and width ≤ n, got k={k}, width={width}, n={n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = vec![vec![MeroVector::zero(n); n]; r];
    for j in 0..width {
        let type_ii = rng.gen_bool(0.5);
        for (i, row) in entries.iter_mut().enumerate() {
            if rng.gen_range(0..4) == 0 {
                continue;
            }
            let d = rng.gen_range(0..=degree);
            row[j] = if (i % 2 == 0) != type_ii {
                random_poly_vector(&mut rng, n, 0..k, d)
            } else {
                random_poly_vector(&mut rng, n, k..n, d)
            };
        }
    }
    F0Array::new(n, k, entries)
}

/// Whether `α₁ = span{K_{0,j}}` lies in no proper constant subspace.
pub fn alpha1_is_full(array: &F0Array) -> bool {
    let Some(row) = array.entries.first() else {
        return array.n == 0;
    };
    let cols: Vec<Vec<GaussRat>> = row.iter().flat_map(MeroVector::cleared_coefficients).collect();
    Frame::new(array.n, cols).rank() == array.n
}

#[derive(Clone, Debug)]
pub struct EnumerateOptions {
    /// Drop candidates whose order exceeds the uniton bound.
    pub apply_bound: bool,
    /// Keep only candidates realized by a random matching array with full `α₁`.
    pub realizability: bool,
    pub seed: u64,
    /// Random instances tried per candidate before giving up.
    pub attempts: usize,
    /// Restrict to one value of `k`.
    pub only_k: Option<usize>,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions { apply_bound: true, realizability: true, seed: 1, attempts: 2, only_k: None }
    }
}

/// Every non-increasing sequence of length `len` with sum at most `budget`,
/// entries at most `cap`.
fn columns(len: usize, cap: usize, budget: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..=cap.min(budget) {
        for rest in columns(len - 1, first, budget - first) {
            let mut v = vec![first];
            v.extend(rest);
            out.push(v);
        }
    }
    out
}

/// Every lower-triangular matrix of order `r` with non-increasing columns
/// and total at most `budget`.
fn triangles(r: usize, budget: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(i: usize, r: usize, budget: usize, acc: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == r {
            out.push(acc.clone());
            return;
        }
        for col in columns(r - i, budget, budget) {
            let used: usize = col.iter().sum();
            acc.push(col);
            go(i + 1, r, budget - used, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(0, r, budget, &mut Vec::new(), &mut out);
    out
}

/// Candidates passing the static filters, before the realizability pass.
pub fn static_candidates(n: usize, p: usize, r: usize, opts: &EnumerateOptions) -> Result<Vec<AdaptedPair>> {
    if r < 1 || r + 1 > n {
        return Err(Error::BadArguments(format!("need 1 ≤ r ≤ n−1, got r={r}, n={n}")));
    }
    if p > n {
        return Err(Error::BadArguments(format!("p={p} exceeds n={n}")));
    }
    let mut out = Vec::new();
    for k in (0..=n).rev() {
        if opts.only_k.is_some_and(|x| x != k) {
            continue;
        }
        if opts.apply_bound && (r as i64) > uniton_bound_any(k, p, n)? {
            continue;
        }
        let ls = triangles(r, k.min(n - 1));
        let ss = triangles(r, (n - k).min(n - 1));
        let mut for_k = Vec::new();
        for l in &ls {
            if k >= 1 && l[0][0] == 0 {
                continue;
            }
            let sl: usize = l.iter().flatten().sum();
            for s in &ss {
                if k + 1 <= n && s[0][0] == 0 {
                    continue;
                }
                let st: usize = s.iter().flatten().sum();
                if sl + st > n - 1 {
                    continue;
                }
                let pair = AdaptedPair { n, k, l: l.clone(), s: s.clone() };
                if !pair.last_row_nonzero() || pair.columns_used() > n {
                    continue;
                }
                if rank_formula_signed(&pair, r)? != p as i64 {
                    continue;
                }
                if (0..=r).any(|i| rank_formula(&pair, i).is_err()) {
                    continue;
                }
                for_k.push(pair);
            }
        }
        for_k.sort_by(|a, b| {
            let (la, sa) = a.to_matrices();
            let (lb, sb) = b.to_matrices();
            (la, sa).cmp(&(lb, sb))
        });
        out.extend(for_k);
    }
    Ok(out)
}

/// Degree used for realizability instances: high enough that every
/// derivative level and full `α₁` are reachable.
pub fn realizability_degree(pair: &AdaptedPair) -> usize {
    let max_block = (0..pair.r()).map(|i| pair.l[i][0].max(pair.s[i][0])).max().unwrap_or(0);
    (pair.r() + max_block).max(pair.k).max(pair.n - pair.k)
}

/// Two low-height points; generic ranks are maxima, so for random data one
/// point almost always suffices and the second guards against coincidences.
pub fn realizability_points() -> Vec<GaussRat> {
    vec![GaussRat::from_fracs(2, 3, 1, 5), GaussRat::from_fracs(-3, 2, 4, 7)]
}

/// Whether some random matching array realizes the pair with full `α₁`.
/// Returns the realizing array.
pub fn realize(pair: &AdaptedPair, seed: u64, attempts: usize) -> Result<Option<F0Array>> {
    let degree = realizability_degree(pair);
    for a in 0..attempts.max(1) {
        let array = match random_matching_array(pair, seed.wrapping_add(a as u64), degree) {
            Ok(x) => x,
            Err(Error::InfeasiblePair(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        if !alpha1_is_full(&array) {
            continue;
        }
        if matching_pass(&array, pair, &realizability_points(), true)?.passed {
            return Ok(Some(array));
        }
    }
    Ok(None)
}

/// All adapted pairs of order `r` whose map lands in `G_p(Cⁿ)`, ordered by
/// `k` descending and then by the row-major matrices.
pub fn enumerate_pairs(n: usize, p: usize, r: usize, opts: &EnumerateOptions) -> Result<Vec<AdaptedPair>> {
    let cands = static_candidates(n, p, r, opts)?;
    if !opts.realizability {
        return Ok(cands);
    }
    let mut out = Vec::new();
    for c in cands {
        if realize(&c, opts.seed, opts.attempts)?.is_some() {
            out.push(c);
        }
    }
    Ok(out)
}

/// A random adapted pair of order `r` in `Cⁿ` with `dim F₀ = k`.
pub fn random_adapted_pair(rng: &mut ChaCha8Rng, n: usize, k: usize, r: usize) -> AdaptedPair {
    loop {
        let mut pair = AdaptedPair::zero(n, k, r);
        let mut budget_l = k;
        let mut budget_s = n - k;
        let mut total = n.saturating_sub(1);
        for i in 0..r {
            for (col, budget) in [(&mut pair.l[i], &mut budget_l), (&mut pair.s[i], &mut budget_s)] {
                let mut prev = usize::MAX;
                for t in 0..r - i {
                    let cap = prev.min(*budget).min(total).min(2);
                    let v = if cap == 0 { 0 } else { rng.gen_range(0..=cap) };
                    col[t] = v;
                    prev = v;
                    *budget -= v;
                    total -= v;
                }
            }
        }
        if pair.validate().is_ok() && pair.columns_used() <= n {
            return pair;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip() {
        let p = AdaptedPair::from_matrices(10, 5, &[vec![1], vec![1, 1], vec![1, 0, 1]], &[vec![1], vec![1, 1], vec![0, 1, 0]]).unwrap();
        assert_eq!(p.l, vec![vec![1, 1, 1], vec![1, 0], vec![1]]);
        assert_eq!(p.s, vec![vec![1, 1, 0], vec![1, 1], vec![0]]);
        let (l, s) = p.to_matrices();
        assert_eq!(l, vec![vec![1, 0, 0], vec![1, 1, 0], vec![1, 0, 1]]);
        assert_eq!(s, vec![vec![1, 0, 0], vec![1, 1, 0], vec![0, 1, 0]]);
        assert_eq!(p.alpha_rank(0), 2);
        assert_eq!(p.alpha_rank(1), 6);
        assert_eq!(p.alpha_rank(2), 9);
    }

    #[test]
    fn block_index_chain() {
        let p = AdaptedPair::from_matrices(10, 5, &[vec![1], vec![1, 1], vec![1, 0, 1]], &[vec![1], vec![1, 1], vec![0, 1, 0]]).unwrap();
        let b = p.block_index();
        assert_eq!(b.a, vec![0, 2, 4]);
        assert_eq!(b.b, vec![1, 3, 5]);
        for i in 0..2 {
            assert_eq!(b.b[i] + p.s[i][0], b.a[i + 1]);
        }
    }

    #[test]
    fn validation_rejects() {
        assert!(AdaptedPair::new(5, 2, vec![vec![0, 1]], vec![vec![0]]).is_err());
        assert!(AdaptedPair::new(5, 2, vec![vec![0, 1], vec![0]], vec![vec![0, 0], vec![0]]).is_err());
        assert!(AdaptedPair::new(5, 1, vec![vec![2]], vec![vec![0]]).is_err());
        assert!(AdaptedPair::new(4, 2, vec![vec![2]], vec![vec![2]]).is_err());
    }

    #[test]
    fn counting_formula_examples() {
        let a = AdaptedPair::new(5, 5, vec![vec![1, 1, 1], vec![0, 0], vec![0]], AdaptedPair::zero(5, 5, 3).s).unwrap();
        assert_eq!(rank_formula(&a, 3).unwrap(), 2);
        assert_eq!(rank_formula(&a, 0).unwrap(), 5);
        let g = AdaptedPair::new(8, 4, vec![vec![1, 1, 1], vec![0, 0], vec![0]], vec![vec![1, 1, 1], vec![0, 0], vec![0]]).unwrap();
        for i in 1..=3 {
            assert_eq!(rank_formula(&g, i).unwrap(), 4);
        }
        assert!(matches!(rank_formula(&g, 4), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn bound_examples() {
        assert_eq!(uniton_bound(0, 2, 5).unwrap(), 3);
        assert_eq!(uniton_bound(4, 2, 5).unwrap(), 3);
        assert_eq!(uniton_bound(2, 2, 5).unwrap(), 1);
        assert_eq!(uniton_bound(5, 2, 5).unwrap(), 3);
        assert_eq!(uniton_bound(2, 2, 4).unwrap(), 1);
        assert!(matches!(uniton_bound(0, 3, 5), Err(Error::BadArguments(_))));
        let b = uniton_bound_detail(4, 2, 5).unwrap();
        assert_eq!((b.case, b.a_k), (BoundCase::LargeK, 0));
    }

    #[test]
    fn column_generation_counts() {
        assert_eq!(columns(2, 1, 1).len(), 2);
        assert_eq!(columns(3, 5, 2), vec![vec![0, 0, 0], vec![1, 0, 0], vec![1, 1, 0], vec![2, 0, 0]]);
        assert_eq!(triangles(1, 2).len(), 3);
    }

    #[test]
    fn zero_pair_matches_zero_array() {
        let pair = AdaptedPair::zero(3, 1, 1);
        let a = F0Array::new(3, 1, vec![vec![MeroVector::zero(3); 3]]).unwrap();
        let rep = matching_check(&a, &pair, &[GaussRat::from_ints(1, 1)]).unwrap();
        assert!(rep.passed);
    }

    #[test]
    fn infeasible_degree() {
        let pair = AdaptedPair::new(4, 2, vec![vec![1, 1], vec![0]], vec![vec![1, 0], vec![0]]).unwrap();
        assert!(matches!(random_matching_array(&pair, 1, 0), Err(Error::InfeasiblePair(_))));
    }

    #[test]
    fn single_l_block() {
        let pair = AdaptedPair::new(3, 3, vec![vec![1]], vec![vec![0]]).unwrap();
        let a = random_matching_array(&pair, 7, 2).unwrap();
        assert!(!a.entries[0][0].is_zero());
        assert!(a.entries[0][1..].iter().all(MeroVector::is_zero));
    }
}
