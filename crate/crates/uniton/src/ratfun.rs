//! Polynomials and rational functions in one variable over Q(i).

use serde::{Deserialize, Serialize};

use crate::scalar::{Field, GaussRat};
use crate::{Error, Result};
use num_traits::{One, Zero};

/// Polynomial with ascending coefficients and no trailing zeros.
/// The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly(Vec<GaussRat>);

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<GaussRat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: GaussRat) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `c·z^d`.
    pub fn monomial(c: GaussRat, d: usize) -> Self {
        let mut v = vec![GaussRat::zero(); d + 1];
        v[d] = c;
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[GaussRat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&GaussRat> {
        self.0.last()
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let v = (0..n)
            .map(|i| match (self.0.get(i), o.0.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Poly::new(v)
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c.clone()).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &GaussRat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![GaussRat::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::new(v)
    }

    /// Euclidean division; panics if `d` is zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("polynomial division by zero");
        let inv_lead = d.lead().unwrap().inv().unwrap();
        let mut rem = self.0.clone();
        let Some(sd) = self.degree() else {
            return (Poly::zero(), Poly::zero());
        };
        if sd < dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![GaussRat::zero(); sd - dd + 1];
        for top in (dd..=sd).rev() {
            let c = &rem[top] * &inv_lead;
            if c.is_zero() {
                continue;
            }
            for (k, dk) in d.0.iter().enumerate() {
                let idx = top - dd + k;
                rem[idx] = &rem[idx] - &(&c * dk);
            }
            q[top - dd] = c;
        }
        rem.truncate(dd);
        (Poly::new(q), Poly::new(rem))
    }

    pub fn monic(&self) -> Poly {
        match self.lead() {
            None => Poly::zero(),
            Some(l) => self.scale(&l.inv().unwrap()),
        }
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &GaussRat::from_ints(k as i64, 0))
                .collect(),
        )
    }

    /// Horner evaluation in any field.
    pub fn eval<F: Field>(&self, z: &F) -> F {
        if let Some(v) = F::poly_eval(&self.0, z) {
            return v;
        }
        let mut acc = F::zero();
        for c in self.0.iter().rev() {
            acc = acc * z.clone() + F::from_gauss(c);
        }
        acc
    }

    /// `Σ |c_k| |z|^k`, the scale against which float cancellation is judged.
    fn abs_scale(&self, z: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * z + c.to_c64().norm())
    }
}

/// Rational function `num/den` with monic denominator and coprime parts.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RatFunRepr", into = "RatFunRepr")]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

#[derive(Serialize, Deserialize)]
struct RatFunRepr {
    num: Vec<GaussRat>,
    #[serde(default = "one_vec")]
    den: Vec<GaussRat>,
}

fn one_vec() -> Vec<GaussRat> {
    vec![GaussRat::one()]
}

impl TryFrom<RatFunRepr> for RatFun {
    type Error = Error;
    fn try_from(r: RatFunRepr) -> Result<RatFun> {
        RatFun::from_parts(Poly::new(r.num), Poly::new(r.den))
    }
}

impl From<RatFun> for RatFunRepr {
    fn from(f: RatFun) -> RatFunRepr {
        RatFunRepr { num: f.num.0, den: f.den.0 }
    }
}

impl std::fmt::Debug for RatFun {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den.is_one() {
            write!(f, "{:?}", self.num)
        } else {
            write!(f, "{:?}/{:?}", self.num, self.den)
        }
    }
}

impl RatFun {
    pub fn from_parts(num: Poly, den: Poly) -> Result<RatFun> {
        if den.is_zero() {
            return Err(Error::DivisionByZeroFunction);
        }
        Ok(RatFun::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> RatFun {
        if num.is_zero() {
            return RatFun::zero();
        }
        if den.degree() == Some(0) {
            let inv = den.lead().unwrap().inv().unwrap();
            return RatFun { num: num.scale(&inv), den: Poly::constant(GaussRat::one()) };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let inv = den.lead().unwrap().inv().unwrap();
        RatFun { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn zero() -> RatFun {
        RatFun { num: Poly::zero(), den: Poly::constant(GaussRat::one()) }
    }

    pub fn constant(c: GaussRat) -> RatFun {
        RatFun::poly(Poly::constant(c))
    }

    pub fn poly(p: Poly) -> RatFun {
        RatFun { num: p, den: Poly::constant(GaussRat::one()) }
    }

    /// Polynomial from ascending coefficients.
    pub fn from_coeffs(c: Vec<GaussRat>) -> RatFun {
        RatFun::poly(Poly::new(c))
    }

    /// The coordinate function `z`.
    pub fn z() -> RatFun {
        RatFun::poly(Poly::monomial(GaussRat::one(), 1))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, o: &RatFun) -> RatFun {
        if self.den == o.den {
            return RatFun::normalized(self.num.add(&o.num), self.den.clone());
        }
        RatFun::normalized(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn neg(&self) -> RatFun {
        RatFun { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFun) -> RatFun {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFun) -> RatFun {
        if self.is_polynomial() && o.is_polynomial() {
            return RatFun::poly(self.num.mul(&o.num));
        }
        RatFun::normalized(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn div(&self, o: &RatFun) -> Result<RatFun> {
        if o.is_zero() {
            return Err(Error::DivisionByZeroFunction);
        }
        Ok(RatFun::normalized(self.num.mul(&o.den), self.den.mul(&o.num)))
    }

    pub fn scale(&self, c: &GaussRat) -> RatFun {
        if c.is_zero() {
            return RatFun::zero();
        }
        RatFun { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Formal derivative iterated `order` times.
    pub fn derivative(&self, order: usize) -> RatFun {
        let mut f = self.clone();
        for _ in 0..order {
            if f.is_zero() {
                break;
            }
            f = if f.is_polynomial() {
                RatFun::poly(f.num.derivative())
            } else {
                RatFun::normalized(
                    f.num.derivative().mul(&f.den).sub(&f.num.mul(&f.den.derivative())),
                    f.den.mul(&f.den),
                )
            };
        }
        f
    }

    /// Exact value at a Gaussian rational point.
    pub fn eval_at(&self, z0: &GaussRat) -> Result<GaussRat> {
        self.eval_in(z0)
    }

    /// Value at a point of any field. In the float backend a denominator
    /// that cancels to below `1e-13` of its term scale counts as a pole.
    pub fn eval_in<F: Field>(&self, z: &F) -> Result<F> {
        let d = self.den.eval(z);
        let pole = if F::EXACT {
            d.is_zero()
        } else {
            let s = self.den.abs_scale(z.abs_f64());
            !(d.abs_f64() > 1e-13 * s)
        };
        if pole {
            return Err(Error::PoleAtPoint(format!("{:?}", z)));
        }
        let nv = self.num.eval(z);
        Ok(if self.is_polynomial() { nv } else { nv / d })
    }

    /// Largest coefficient height in bits, for swell diagnostics.
    pub fn height_bits(&self) -> u64 {
        self.num.0.iter().chain(self.den.0.iter()).map(|c| c.height_bits()).max().unwrap_or(0)
    }
}

/// A Cⁿ-valued rational function, one [`RatFun`] per coordinate.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MeroVector {
    pub coords: Vec<RatFun>,
}

impl std::fmt::Debug for MeroVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.coords)
    }
}

impl MeroVector {
    pub fn new(coords: Vec<RatFun>) -> Self {
        MeroVector { coords }
    }

    pub fn zero(n: usize) -> Self {
        MeroVector { coords: vec![RatFun::zero(); n] }
    }

    /// Polynomial vector from per-coordinate ascending coefficient lists.
    pub fn from_poly_coeffs(cs: Vec<Vec<GaussRat>>) -> Self {
        MeroVector { coords: cs.into_iter().map(RatFun::from_coeffs).collect() }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(RatFun::is_zero)
    }

    pub fn add(&self, o: &MeroVector) -> MeroVector {
        MeroVector { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn scale(&self, c: &GaussRat) -> MeroVector {
        MeroVector { coords: self.coords.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn derivative(&self, order: usize) -> MeroVector {
        MeroVector { coords: self.coords.iter().map(|a| a.derivative(order)).collect() }
    }

    /// Apply a constant exact matrix given row by row.
    pub fn apply(&self, rows: &[Vec<GaussRat>]) -> MeroVector {
        MeroVector {
            coords: rows
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&self.coords)
                        .filter(|(m, f)| !m.is_zero() && !f.is_zero())
                        .fold(RatFun::zero(), |acc, (m, f)| acc.add(&f.scale(m)))
                })
                .collect(),
        }
    }

    pub fn eval_in<F: Field>(&self, z: &F) -> Result<Vec<F>> {
        self.coords.iter().map(|c| c.eval_in(z)).collect()
    }

    /// Numerator coefficient vectors after clearing a common denominator.
    /// Their span is the smallest constant subspace containing the vector.
    pub fn cleared_coefficients(&self) -> Vec<Vec<GaussRat>> {
        let common = self.coords.iter().fold(Poly::constant(GaussRat::one()), |acc, c| {
            let g = acc.gcd(c.den());
            acc.mul(c.den()).div_rem(&g).0
        });
        let nums: Vec<Poly> = self
            .coords
            .iter()
            .map(|c| c.num().mul(&common.div_rem(c.den()).0))
            .collect();
        let deg = nums.iter().filter_map(|p| p.degree()).max();
        let Some(deg) = deg else { return Vec::new() };
        (0..=deg)
            .map(|d| nums.iter().map(|p| p.coeffs().get(d).cloned().unwrap_or_else(GaussRat::zero)).collect())
            .collect()
    }
}

/// A rational vector with coefficients converted once into a field, for
/// repeated evaluation at nearby points. No pole detection.
#[derive(Clone, Debug)]
pub struct CompiledVector<F> {
    coords: Vec<(Vec<F>, Option<Vec<F>>)>,
}

impl<F: Field> CompiledVector<F> {
    pub fn new(v: &MeroVector) -> Self {
        let conv = |p: &Poly| p.coeffs().iter().map(F::from_gauss).collect::<Vec<F>>();
        let coords = v
            .coords
            .iter()
            .map(|f| (conv(f.num()), if f.is_polynomial() { None } else { Some(conv(f.den())) }))
            .collect();
        CompiledVector { coords }
    }

    pub fn eval(&self, z: &F) -> Vec<F> {
        let horner = |cs: &[F]| cs.iter().rev().fold(F::zero(), |acc, c| acc * z.clone() + c.clone());
        self.coords
            .iter()
            .map(|(n, d)| match d {
                None => horner(n),
                Some(d) => horner(n) / horner(d),
            })
            .collect()
    }
}
