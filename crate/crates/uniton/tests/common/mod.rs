//! Helpers shared by the integration tests: brute-force oracles for the
//! elementary operators and generators for random chains.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use uniton::combinatorics::{random_f0_array, random_poly_vector};
use uniton::engine::{binom, h_grid_to_k, h_grid_to_r, k_grid_partial_sums, k_grid_to_h, F0Array, UnitonChain};
use uniton::linalg::Matrix;
use uniton::ratfun::MeroVector;
use uniton::{ExactMatrix, ExactStack, GaussRat};

/// Sum over `j`-subsets of `{1,…,i}` of the ordered product `Π_i⋯Π_1`, where
/// `Π_l = π_l⊥` on the subset and `π_l` off it. With `only_perp` the factors
/// off the subset are dropped instead, which gives `C^i_j`.
fn subset_sum(st: &ExactStack, i: usize, j: usize, only_perp: bool) -> ExactMatrix {
    let n = st.n;
    let mut acc = Matrix::zeros(n, n);
    for mask in 0u32..(1 << i) {
        if mask.count_ones() as usize != j {
            continue;
        }
        let mut m = Matrix::identity(n);
        for l in 1..=i {
            if mask >> (l - 1) & 1 == 1 {
                m = st.pi_perp(l).mul(&m);
            } else if !only_perp {
                m = st.pi(l).mul(&m);
            }
        }
        acc = acc.add(&m);
    }
    acc
}

pub fn brute_c(st: &ExactStack, i: usize, s: usize) -> ExactMatrix {
    subset_sum(st, i, s, true)
}

pub fn brute_s(st: &ExactStack, i: usize, j: usize) -> ExactMatrix {
    subset_sum(st, i, j, false)
}

/// Every failed identity among the Pascal rule, the `S` recursion, both
/// operators against their subset definitions, and the binomial relation
/// between them, for all levels of the chain at `z`.
pub fn identity_failures(chain: &UnitonChain, z: &GaussRat) -> Vec<String> {
    let st = chain.stack_at(z, chain.r).expect("polynomial data has no poles");
    let mut out = Vec::new();
    let (c, s) = (|i: usize, j: usize| st.elementary_c(i as i64, j as i64), |i: usize, j: usize| st.elementary_s(i as i64, j as i64));
    for i in 0..=chain.r {
        for j in 0..=i {
            if c(i, j) != brute_c(&st, i, j) {
                out.push(format!("C^{i}_{j} differs from its subset sum"));
            }
            if s(i, j) != brute_s(&st, i, j) {
                out.push(format!("S^{i}_{j} differs from its subset sum"));
            }
            if i >= 1 {
                let rec = st.pi(i).mul(&st.elementary_s(i as i64 - 1, j as i64)).add(&st.pi_perp(i).mul(&st.elementary_s(i as i64 - 1, j as i64 - 1)));
                if s(i, j) != rec {
                    out.push(format!("S^{i}_{j} breaks the recursion"));
                }
                if j >= 1 {
                    let pascal = st.pi_perp(i).mul(&c(i - 1, j - 1)).add(&st.elementary_c(i as i64 - 1, j as i64));
                    if c(i, j) != pascal {
                        out.push(format!("C^{i}_{j} breaks the Pascal rule"));
                    }
                }
            }
            let sum = (j..=i).fold(Matrix::zeros(chain.n, chain.n), |acc, t| {
                acc.add(&s(i, t).scale(&GaussRat::from_ints(binom(t as i64, j as i64), 0)))
            });
            if c(i, j) != sum {
                out.push(format!("C^{i}_{j} differs from the binomial sum of S^{i}"));
            }
        }
    }
    out
}

/// A random `r × n` grid of polynomial vectors with no pattern imposed.
pub fn random_grid(seed: u64, n: usize, r: usize) -> Vec<Vec<MeroVector>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..r)
        .map(|_| (0..n).map(|_| if rng.gen_bool(0.3) { MeroVector::zero(n) } else { random_poly_vector(&mut rng, n, 0..n, 2) }).collect())
        .collect()
}

/// `K → H → K` and `K → H → R` against the direct partial sums.
pub fn transforms_round_trip(k: &[Vec<MeroVector>]) -> bool {
    let h = k_grid_to_h(k);
    h_grid_to_k(&h) == k && h_grid_to_r(&h) == k_grid_partial_sums(k)
}

/// A random valid array with `2 ≤ n ≤ max_n`, random `k`, `1 ≤ r ≤ max_r`,
/// up to three nonzero columns of degree at most two.
pub fn random_array(seed: u64, max_n: usize, max_r: usize) -> F0Array {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=max_n);
    let k = rng.gen_range(0..=n);
    let r = rng.gen_range(1..=max_r);
    let width = rng.gen_range(1..=n.min(3));
    random_f0_array(seed, n, k, r, width, 2).expect("parameters are in range")
}

pub fn chain_of(array: &F0Array) -> UnitonChain {
    UnitonChain::from_array(array, 1).expect("random arrays satisfy the pattern")
}

/// Whether `φ_r` differs between two points, i.e. the map is not constant.
pub fn nonconstant(chain: &UnitonChain) -> bool {
    let a: GaussRat = "1/2+1/3i".parse().unwrap();
    let b: GaussRat = "-2/3+1/5i".parse().unwrap();
    chain.phi_at(chain.r, &a).unwrap() != chain.phi_at(chain.r, &b).unwrap()
}
