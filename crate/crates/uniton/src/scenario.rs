//! JSON scenario documents.
//!
//! A scenario carries everything needed to rebuild a chain deterministically:
//! the ambient dimension, `F₀`, the sign of `Q`, the array itself, and either
//! a seed for drawing sample points or an explicit list of points.
//!
//! ```json
//! { "n": 3, "k": 3, "Q_sign": 1,
//!   "array": [[[{"num": ["1"]}, {"num": ["0", "1"]}, {"num": ["0", "0", "1"]}], …]],
//!   "seed": 0 }
//! ```
//!
//! With `"grid": "H"` the array is read as raw `H` data and the alternating
//! pattern is not enforced, which is how non-Grassmannian maps are described.

use serde::{Deserialize, Serialize};

use crate::combinatorics::AdaptedPair;
use crate::engine::{F0Array, UnitonChain};
use crate::linalg::Frame;
use crate::loop_model::ModelSpace;
use crate::ratfun::MeroVector;
use crate::scalar::GaussRat;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Grid {
    #[default]
    K,
    H,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub n: usize,
    pub k: usize,
    #[serde(rename = "Q_sign", default = "plus_one")]
    pub q_sign: i8,
    #[serde(rename = "F0_basis", default, skip_serializing_if = "Option::is_none")]
    pub f0_basis: Option<Vec<Vec<GaussRat>>>,
    /// `array[i][j]` is the entry in row `i`, column `j`.
    pub array: Vec<Vec<MeroVector>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<AdaptedPair>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<GaussRat>>,
    #[serde(default)]
    pub grid: Grid,
}

fn plus_one() -> i8 {
    1
}

impl Scenario {
    pub fn new(n: usize, k: usize, array: Vec<Vec<MeroVector>>) -> Self {
        Scenario { n, k, q_sign: 1, f0_basis: None, array, pair: None, seed: 0, points: None, grid: Grid::K }
    }

    /// Parses and validates.
    pub fn from_json(text: &str) -> Result<Self> {
        let mut s: Scenario = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if let Some(p) = &mut s.pair {
            if p.n == 0 {
                p.n = s.n;
            }
        }
        s.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serialization cannot fail")
    }

    pub fn r(&self) -> usize {
        self.array.len()
    }

    /// Shape, `Q` sign, `F₀` basis, the pair if present, and for `K` grids the
    /// alternating pattern.
    pub fn validate(&self) -> Result<()> {
        if self.q_sign != 1 && self.q_sign != -1 {
            return Err(Error::BadArguments(format!("Q_sign must be 1 or -1, got {}", self.q_sign)));
        }
        let array = self.to_array()?;
        if let Some(p) = &self.pair {
            if p.n != self.n || p.k != self.k || p.r() != self.r() {
                return Err(Error::BadArguments(format!(
                    "pair (n={}, k={}, r={}) does not fit the array (n={}, k={}, r={})",
                    p.n,
                    p.k,
                    p.r(),
                    self.n,
                    self.k,
                    self.r()
                )));
            }
            p.validate()?;
        }
        if self.grid == Grid::K {
            array.check_pattern()?;
        }
        Ok(())
    }

    /// The array as an [`F0Array`], shape-checked only.
    pub fn to_array(&self) -> Result<F0Array> {
        let a = F0Array::new(self.n, self.k, self.array.clone())?;
        match &self.f0_basis {
            Some(b) => a.with_basis(b.clone()),
            None => Ok(a),
        }
    }

    /// Builds the chain and records its generic ranks, from the supplied
    /// points when present and from the seed otherwise.
    pub fn build_chain(&self) -> Result<UnitonChain> {
        let chain = match self.grid {
            Grid::K => UnitonChain::from_array(&self.to_array()?, self.q_sign)?,
            Grid::H => {
                self.to_array()?;
                UnitonChain::from_h_grid(self.n, self.k, self.f0_basis.clone(), self.q_sign, self.array.clone())?
            }
        };
        match &self.points {
            Some(p) => chain.with_points(p),
            None => chain.with_generic(self.seed),
        }
    }
}

/// Hand-written model-space input: block vectors of `C^{rn}` given directly,
/// for testing the shift-stability and adaptedness verdicts on arbitrary data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawModel {
    pub n: usize,
    pub r: usize,
    pub k: usize,
    #[serde(rename = "F0_basis", default, skip_serializing_if = "Option::is_none")]
    pub f0_basis: Option<Vec<Vec<GaussRat>>>,
    #[serde(default)]
    pub point: GaussRat,
    pub spanning: Vec<Vec<GaussRat>>,
    /// `z`-derivatives of the spanning sections; empty means constant.
    #[serde(default)]
    pub derivatives: Vec<Vec<GaussRat>>,
}

impl RawModel {
    pub fn from_json(text: &str) -> Result<Self> {
        let m: RawModel = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if m.k > m.n {
            return Err(Error::BadArguments(format!("k={} exceeds n={}", m.k, m.n)));
        }
        if !m.derivatives.is_empty() && m.derivatives.len() != m.spanning.len() {
            return Err(Error::BadArguments("derivatives must be empty or match the spanning vectors".into()));
        }
        Ok(m)
    }

    pub fn f0_projector(&self) -> crate::ExactMatrix {
        let basis = match &self.f0_basis {
            Some(b) => b.clone(),
            None => Frame::<GaussRat>::standard(self.n, 0..self.k).columns,
        };
        Frame::new(self.n, basis).projector()
    }

    pub fn model_space(&self) -> Result<ModelSpace> {
        ModelSpace::from_values(self.point.clone(), self.r, self.n, self.spanning.clone(), self.derivatives.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::RatFun;

    fn g(a: i64) -> GaussRat {
        GaussRat::from_ints(a, 0)
    }

    fn small() -> Scenario {
        let v = MeroVector::new(vec![RatFun::z(), RatFun::constant(g(1)), RatFun::zero()]);
        let w = MeroVector::new(vec![RatFun::zero(), RatFun::zero(), RatFun::from_coeffs(vec![g(2), GaussRat::i()])]);
        let z = MeroVector::zero(3);
        Scenario::new(3, 2, vec![vec![v, w, z]])
    }

    #[test]
    fn json_round_trip_is_identity() {
        let mut s = small();
        s.points = Some(vec!["1/2-3i".parse().unwrap(), "7/3".parse().unwrap()]);
        s.seed = 11;
        let text = s.to_json();
        let back = Scenario::from_json(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn defaults_fill_missing_fields() {
        let text = r#"{"n": 2, "k": 1, "array": []}"#;
        let s = Scenario::from_json(text).unwrap();
        assert_eq!((s.q_sign, s.seed, s.grid, s.r()), (1, 0, Grid::K, 0));
    }

    #[test]
    fn malformed_documents_are_parse_errors() {
        assert!(matches!(Scenario::from_json("{"), Err(Error::Parse(_))));
        assert!(matches!(Scenario::from_json(r#"{"n": 2, "k": 1, "array": [], "bogus": 1}"#), Err(Error::Parse(_))));
        assert!(matches!(Scenario::from_json(r#"{"n": 2, "k": 1, "array": [], "Q_sign": 3}"#), Err(Error::BadArguments(_))));
    }

    #[test]
    fn pattern_is_enforced_only_on_k_grids() {
        let mut s = small();
        s.k = 1;
        assert!(matches!(s.validate(), Err(Error::PatternViolation { column: 0, .. })));
        s.grid = Grid::H;
        s.validate().unwrap();
        s.build_chain().unwrap();
    }

    #[test]
    fn empty_array_gives_constant_chain() {
        let s = Scenario::new(5, 3, Vec::new());
        let c = s.build_chain().unwrap();
        assert_eq!(c.r, 0);
        assert_eq!(c.generic.unwrap().f_ranks, Some(vec![3]));
    }

    #[test]
    fn raw_model_shift_test() {
        // W = span{(e1, 0)}: λ·(e1, 0) = (0, e1) is missing, so not shift-stable.
        let bad = r#"{"n": 2, "r": 2, "k": 1, "spanning": [["1", "0", "0", "0"]]}"#;
        let m = RawModel::from_json(bad).unwrap().model_space().unwrap();
        assert!(!m.shift_stable());
        let good = r#"{"n": 2, "r": 2, "k": 1, "spanning": [["1", "0", "0", "0"], ["0", "0", "1", "0"]]}"#;
        assert!(RawModel::from_json(good).unwrap().model_space().unwrap().shift_stable());
        assert!(RawModel::from_json(r#"{"n": 2, "r": 2, "k": 3, "spanning": []}"#).is_err());
    }

    #[test]
    fn explicit_points_override_the_seed() {
        let mut s = small();
        s.points = Some(vec![g(2), g(3)]);
        let c = s.build_chain().unwrap();
        assert_eq!(c.generic_points(), vec![g(2), g(3)]);
    }
}
