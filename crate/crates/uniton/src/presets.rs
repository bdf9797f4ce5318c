//! Frozen example scenarios.
//!
//! Each preset instantiates an abstract example with fixed low-degree
//! polynomial vectors. The `F₀`-valued entries use the first `k` coordinates
//! and the `F₀⊥`-valued entries the rest. Where an adapted pair is recorded,
//! the array is laid out in block order (within a row, the `L` columns come
//! before the `S` columns) so that it can be checked with
//! [`crate::combinatorics::matching_check`].

use crate::combinatorics::AdaptedPair;
use crate::ratfun::MeroVector;
use crate::scalar::GaussRat;
use crate::scenario::{Grid, Scenario};
use crate::{Error, Result};

pub const PRESET_NAMES: &[&str] = &[
    "u3-example",
    "c10-example",
    "dim2-example",
    "g2c5-case-a",
    "g2c5-case-b",
    "g2c5-case-c",
    "g4c8-stay",
    "g3c8-max",
    "broken-pattern",
];

/// Presets that are built from a genuine `F₀`-array (all but the violator).
pub fn grassmannian_presets() -> impl Iterator<Item = &'static str> {
    PRESET_NAMES.iter().copied().filter(|n| *n != "broken-pattern")
}

/// Sparse polynomial vector: `terms` lists `(coordinate, coefficients)` with
/// ascending-degree integer coefficients.
fn v(n: usize, terms: &[(usize, &[i64])]) -> MeroVector {
    let mut cs = vec![Vec::new(); n];
    for (c, coeffs) in terms {
        cs[*c] = coeffs.iter().map(|&a| GaussRat::from_ints(a, 0)).collect();
    }
    MeroVector::from_poly_coeffs(cs)
}

fn zero(n: usize) -> MeroVector {
    MeroVector::zero(n)
}

/// `(1, z, z², …)` on the coordinates `from..to`.
fn moment(n: usize, from: usize, to: usize) -> MeroVector {
    let mut cs = vec![Vec::new(); n];
    for (d, c) in (from..to).enumerate() {
        let mut p = vec![GaussRat::from_ints(0, 0); d + 1];
        p[d] = GaussRat::from_ints(1, 0);
        cs[c] = p;
    }
    MeroVector::from_poly_coeffs(cs)
}

/// Builds rows from columns, padding with zero columns up to `n`.
fn from_columns(n: usize, cols: Vec<Vec<MeroVector>>) -> Vec<Vec<MeroVector>> {
    let r = cols.first().map_or(0, Vec::len);
    (0..r)
        .map(|i| (0..n).map(|j| cols.get(j).map_or_else(|| zero(n), |c| c[i].clone())).collect())
        .collect()
}

fn pair(n: usize, k: usize, l: &[Vec<usize>], s: &[Vec<usize>]) -> AdaptedPair {
    AdaptedPair::from_matrices(n, k, l, s).expect("preset pairs are adapted")
}

/// Low-height sample points shared by all presets. Exact evaluation at the
/// default height-97 draws is several times slower for the n = 10 examples.
pub const PRESET_POINTS: [&str; 8] = ["1/2+1/3i", "-2/3+1/5i", "3/4-2/7i", "-1/3-3/2i", "2+1/2i", "-3/5+2i", "1/7-i", "5/3+3/4i"];

fn scenario(n: usize, k: usize, cols: Vec<Vec<MeroVector>>, p: Option<AdaptedPair>) -> Scenario {
    let mut s = Scenario::new(n, k, from_columns(n, cols));
    s.pair = p;
    s.points = Some(PRESET_POINTS.iter().map(|t| t.parse().expect("valid point")).collect());
    s
}

pub fn preset(name: &str) -> Result<Scenario> {
    let s = match name {
        // F₀ = C³ and a single column with H₀ = (1, z, z²).
        "u3-example" => {
            let n = 3;
            scenario(n, 3, vec![vec![moment(n, 0, 3), zero(n)]], Some(pair(n, 3, &[vec![1], vec![1, 0]], &[vec![0], vec![0, 0]])))
        }
        "c10-example" => {
            let n = 10;
            let cols = vec![
                // L01, E11, L21
                vec![moment(n, 0, 5), v(n, &[(7, &[0, 0, 1])]), v(n, &[(2, &[0, 1])])],
                // E01, L11, E21
                vec![v(n, &[(5, &[1]), (6, &[0, 1])]), v(n, &[(1, &[1]), (3, &[0, 1])]), v(n, &[(8, &[0, 0, 1])])],
                // L12 (constant), E22
                vec![zero(n), v(n, &[(3, &[1]), (4, &[1])]), v(n, &[(9, &[0, 1])])],
                // E12, L22
                vec![zero(n), v(n, &[(8, &[0, 1]), (9, &[0, 0, 1])]), v(n, &[(0, &[0, 0, 1])])],
                // L23
                vec![zero(n), zero(n), v(n, &[(0, &[0, 1]), (4, &[1])])],
            ];
            let p = pair(n, 5, &[vec![1], vec![1, 1], vec![1, 0, 1]], &[vec![1], vec![1, 1], vec![0, 1, 0]]);
            scenario(n, 5, cols, Some(p))
        }
        // F₀ two-dimensional, a 3×2 array.
        "dim2-example" => {
            let n = 10;
            let cols = vec![
                vec![v(n, &[(0, &[1]), (1, &[0, 1])]), v(n, &[(4, &[1, 1])]), v(n, &[(1, &[2])])],
                vec![moment(n, 2, 10), v(n, &[(0, &[0, 1])]), v(n, &[(9, &[1]), (5, &[0, 0, 1])])],
            ];
            let p = pair(n, 2, &[vec![1], vec![1, 0], vec![0, 0, 0]], &[vec![1], vec![1, 0], vec![1, 0, 0]]);
            scenario(n, 2, cols, Some(p))
        }
        "g2c5-case-a" => {
            let n = 5;
            let p = pair(n, 5, &[vec![1], vec![1, 0], vec![1, 0, 0]], &[vec![0], vec![0, 0], vec![0, 0, 0]]);
            scenario(n, 5, vec![vec![moment(n, 0, 5), zero(n), zero(n)]], Some(p))
        }
        "g2c5-case-b" => {
            let n = 5;
            let cols = vec![
                // L01, ·, L21
                vec![moment(n, 0, 4), zero(n), v(n, &[(1, &[1]), (2, &[0, 1])])],
                // E01 and L11, both constant so that no derivative of them reaches α₃
                vec![v(n, &[(4, &[1])]), v(n, &[(0, &[2]), (3, &[1])]), zero(n)],
            ];
            let p = pair(n, 4, &[vec![1], vec![1, 0], vec![1, 0, 0]], &[vec![1], vec![0, 0], vec![0, 0, 0]]);
            scenario(n, 4, cols, Some(p))
        }
        "g2c5-case-c" => {
            let n = 5;
            let cols = vec![
                // E01, ·, E21
                vec![moment(n, 0, 5), zero(n), v(n, &[(1, &[1])])],
                // E22
                vec![zero(n), zero(n), v(n, &[(0, &[0, 1]), (2, &[1])])],
            ];
            let p = pair(n, 0, &[vec![0], vec![0, 0], vec![0, 0, 0]], &[vec![1], vec![1, 0], vec![1, 0, 1]]);
            scenario(n, 0, cols, Some(p))
        }
        "g4c8-stay" => {
            let n = 8;
            let cols = vec![
                // L01, E11
                vec![moment(n, 0, 4), v(n, &[(5, &[0, 1])]), zero(n)],
                // E01
                vec![moment(n, 4, 8), zero(n), zero(n)],
            ];
            let p = pair(n, 4, &[vec![1], vec![1, 0], vec![1, 0, 0]], &[vec![1], vec![1, 0], vec![1, 0, 0]]);
            scenario(n, 4, cols, Some(p))
        }
        // Uniton number three, the largest allowed for k = 4 in G₃(C⁸).
        "g3c8-max" => {
            let n = 8;
            let cols = vec![
                vec![moment(n, 0, 4), zero(n), zero(n)],
                vec![moment(n, 4, 8), zero(n), zero(n)],
                vec![zero(n), zero(n), v(n, &[(4, &[0, 0, 1]), (6, &[1])])],
            ];
            let p = pair(n, 4, &[vec![1], vec![1, 0], vec![1, 0, 0]], &[vec![1], vec![1, 0], vec![1, 0, 1]]);
            scenario(n, 4, cols, Some(p))
        }
        // Raw H data whose first column mixes F₀ and F₀⊥: harmonic into U(3)
        // but not Grassmannian.
        "broken-pattern" => {
            let n = 3;
            let mut s = scenario(n, 1, vec![vec![v(n, &[(0, &[1]), (1, &[0, 1])]), v(n, &[(2, &[1])])]], None);
            s.grid = Grid::H;
            s
        }
        _ => return Err(Error::BadArguments(format!("unknown preset {name:?}; known: {}", PRESET_NAMES.join(", ")))),
    };
    s.validate()?;
    Ok(s)
}
