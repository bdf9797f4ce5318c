//! Scalar fields.
//!
//! [`GaussRat`] is an exact element of Q(i) backed by arbitrary precision
//! rationals. [`Field`] abstracts over it, over `Complex64`, and over
//! [`DdComplex`] (complex double-double, about 31 significant digits), so
//! the construction code in the engine runs unchanged on every backend.
//! The double-double field exists for finite-difference stencils, where
//! nested differences of double-precision values lose most of their digits.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use twofloat::TwoFloat;

use crate::Error;

/// Exact Gaussian rational `re + im·i`.
///
/// `BigRational` keeps every component in lowest terms with a positive
/// denominator, so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussRat::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    /// `(a/b) + (c/d)i`; panics on a zero denominator.
    pub fn from_fracs(a: i64, b: i64, c: i64, d: i64) -> Self {
        GaussRat::new(
            BigRational::new(BigInt::from(a), BigInt::from(b)),
            BigRational::new(BigInt::from(c), BigInt::from(d)),
        )
    }

    pub fn i() -> Self {
        GaussRat::from_ints(0, 1)
    }

    pub fn real(re: BigRational) -> Self {
        GaussRat::new(re, BigRational::zero())
    }

    pub fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -self.im.clone())
    }

    /// `re² + im²`.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let d = self.norm_sqr();
        Some(GaussRat::new(&self.re / &d, -(&self.im / &d)))
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    /// Total number of bits in all numerators and denominators; a cheap
    /// measure of coefficient swell.
    pub fn height_bits(&self) -> u64 {
        self.re.numer().bits() + self.re.denom().bits() + self.im.numer().bits() + self.im.denom().bits()
    }
}

fn rat_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Very large heights: scale both parts down to a common bit length.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = (nb.max(db) - 1000).max(0) as usize;
    let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
    n / d
}

impl Zero for GaussRat {
    fn zero() -> Self {
        GaussRat::new(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussRat {
    fn one() -> Self {
        GaussRat::new(BigRational::one(), BigRational::zero())
    }
}

impl Add for GaussRat {
    type Output = GaussRat;
    fn add(self, o: GaussRat) -> GaussRat {
        GaussRat::new(self.re + o.re, self.im + o.im)
    }
}

impl<'a> Add<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn add(self, o: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl AddAssign for GaussRat {
    fn add_assign(&mut self, o: GaussRat) {
        self.re += o.re;
        self.im += o.im;
    }
}

impl Sub for GaussRat {
    type Output = GaussRat;
    fn sub(self, o: GaussRat) -> GaussRat {
        GaussRat::new(self.re - o.re, self.im - o.im)
    }
}

impl<'a> Sub<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn sub(self, o: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl SubAssign for GaussRat {
    fn sub_assign(&mut self, o: GaussRat) {
        self.re -= o.re;
        self.im -= o.im;
    }
}

impl Mul for GaussRat {
    type Output = GaussRat;
    fn mul(self, o: GaussRat) -> GaussRat {
        &self * &o
    }
}

impl<'a> Mul<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn mul(self, o: &GaussRat) -> GaussRat {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussRat::real(&self.re * &o.re);
        }
        GaussRat::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl MulAssign for GaussRat {
    fn mul_assign(&mut self, o: GaussRat) {
        *self = &*self * &o;
    }
}

impl Div for GaussRat {
    type Output = GaussRat;
    /// Panics on division by zero, like the primitive numeric types.
    fn div(self, o: GaussRat) -> GaussRat {
        &self * &o.inv().expect("GaussRat division by zero")
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re, -self.im)
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Canonical text form: `"0"`, `"3/2"`, `"-i"`, `"2/3i"`, `"3/2-1/3i"`.
impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_part = |with_sign: bool| -> String {
            let mag = self.im.abs();
            let body = if mag.is_one() { String::new() } else { fmt_rat(&mag) };
            let sign = if self.im.is_negative() {
                "-"
            } else if with_sign {
                "+"
            } else {
                ""
            };
            format!("{sign}{body}i")
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rat(&self.re)),
            (true, false) => write!(f, "{}", im_part(false)),
            (false, false) => write!(f, "{}{}", fmt_rat(&self.re), im_part(true)),
        }
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn parse_rat(s: &str) -> Result<BigRational, Error> {
    let bad = || Error::Parse(format!("bad rational component '{s}'"));
    let t = s.strip_prefix('+').unwrap_or(s);
    if t.is_empty() || t.starts_with('+') {
        return Err(bad());
    }
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a, b),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() || den.is_negative() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

impl FromStr for GaussRat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        let Some(body) = s.strip_suffix('i') else {
            return Ok(GaussRat::real(parse_rat(s)?));
        };
        // The imaginary part starts at the last sign that is not leading.
        let split = body
            .char_indices()
            .filter(|&(idx, c)| idx > 0 && (c == '+' || c == '-'))
            .map(|(idx, _)| idx)
            .last();
        let (re_str, im_str) = match split {
            Some(idx) => (&body[..idx], &body[idx..]),
            None => ("", body),
        };
        let re = if re_str.is_empty() { BigRational::zero() } else { parse_rat(re_str)? };
        let im = match im_str {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            other => parse_rat(other)?,
        };
        Ok(GaussRat::new(re, im))
    }
}

impl Serialize for GaussRat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GaussRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::String(s) => s.parse().map_err(serde::de::Error::custom),
            serde_json::Value::Number(n) if n.is_i64() => Ok(GaussRat::from_ints(n.as_i64().unwrap(), 0)),
            other => Err(serde::de::Error::custom(format!("expected Gaussian rational, got {other}"))),
        }
    }
}

/// A field usable by the pointwise linear algebra and the chain evaluator.
///
/// `EXACT` selects between exact elimination and SVD-based numerics in
/// [`crate::linalg`].
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const EXACT: bool;
    /// Whether dense factorizations may go through `nalgebra` (only for
    /// `Complex64`); other inexact fields use elimination in their own
    /// arithmetic.
    const NALGEBRA: bool = false;
    fn conj(&self) -> Self;
    fn from_gauss(g: &GaussRat) -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_c64(c: Complex64) -> Self;
    fn to_c64(&self) -> Complex64;
    fn abs_f64(&self) -> f64 {
        self.to_c64().norm()
    }
    /// Row-major product of an `m×k` and a `k×p` matrix, for fields with a
    /// faster route than entrywise accumulation.
    fn matmul(_a: &[Self], _b: &[Self], _m: usize, _k: usize, _p: usize) -> Option<Vec<Self>> {
        None
    }
    /// Reduced row echelon form of a row-major `rows×cols` matrix and its
    /// pivot columns, for fields with a faster route than plain elimination.
    fn rref(_a: &[Self], _rows: usize, _cols: usize) -> Option<(Vec<Self>, Vec<usize>)> {
        None
    }
    /// `Σ c_k z^k` for coefficients listed from the constant term up, for
    /// fields with a faster route than Horner in their own arithmetic.
    fn poly_eval(_coeffs: &[GaussRat], _z: &Self) -> Option<Self> {
        None
    }
}

/// Gaussian integer, used for fraction-free elimination.
#[derive(Clone, Debug, PartialEq)]
struct GInt {
    re: BigInt,
    im: BigInt,
}

impl GInt {
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn mul(&self, o: &GInt) -> GInt {
        GInt { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }

    fn sub(self, o: GInt) -> GInt {
        GInt { re: self.re - o.re, im: self.im - o.im }
    }

    /// Division known to be exact.
    fn div_exact(&self, d: &GInt) -> GInt {
        if d.im.is_zero() {
            debug_assert!((&self.re % &d.re).is_zero() && (&self.im % &d.re).is_zero());
            return GInt { re: &self.re / &d.re, im: &self.im / &d.re };
        }
        let n = &d.re * &d.re + &d.im * &d.im;
        let num = self.mul(&GInt { re: d.re.clone(), im: -&d.im });
        debug_assert!((&num.re % &n).is_zero() && (&num.im % &n).is_zero());
        GInt { re: num.re / &n, im: num.im / n }
    }

    /// `self / d` as a Gaussian rational.
    fn over(&self, d: &GInt) -> GaussRat {
        let n = &d.re * &d.re + &d.im * &d.im;
        let num = self.mul(&GInt { re: d.re.clone(), im: -&d.im });
        GaussRat::new(BigRational::new(num.re, n.clone()), BigRational::new(num.im, n))
    }
}

/// A vector of Gaussian rationals as Gaussian integers over one denominator.
struct Cleared {
    den: BigInt,
    re: Vec<BigInt>,
    im: Vec<BigInt>,
}

impl Cleared {
    fn new<'a>(xs: impl Iterator<Item = &'a GaussRat> + Clone) -> Self {
        let mut den = BigInt::one();
        for x in xs.clone() {
            for d in [x.re.denom(), x.im.denom()] {
                if !d.is_one() {
                    den = den.lcm(d);
                }
            }
        }
        let scale = |r: &BigRational| {
            if r.is_zero() {
                BigInt::zero()
            } else {
                r.numer() * (&den / r.denom())
            }
        };
        let (re, im) = xs.map(|x| (scale(&x.re), scale(&x.im))).unzip();
        Cleared { den, re, im }
    }
}

impl Field for GaussRat {
    const EXACT: bool = true;
    fn conj(&self) -> Self {
        GaussRat::conj(self)
    }
    fn from_gauss(g: &GaussRat) -> Self {
        g.clone()
    }
    fn from_i64(v: i64) -> Self {
        GaussRat::from_ints(v, 0)
    }
    /// Exact: every finite double is a dyadic rational.
    fn from_c64(c: Complex64) -> Self {
        let f = |x: f64| BigRational::from_float(x).expect("finite double");
        GaussRat::new(f(c.re), f(c.im))
    }
    fn to_c64(&self) -> Complex64 {
        GaussRat::to_c64(self)
    }
    /// Clears denominators row by row and column by column so that the inner
    /// sums run in Gaussian integers and each entry is reduced once.
    fn matmul(a: &[Self], b: &[Self], m: usize, k: usize, p: usize) -> Option<Vec<Self>> {
        let rows: Vec<Cleared> = (0..m).map(|i| Cleared::new(a[i * k..(i + 1) * k].iter())).collect();
        let cols: Vec<Cleared> = (0..p).map(|j| Cleared::new((0..k).map(move |t| &b[t * p + j]))).collect();
        let mut out = Vec::with_capacity(m * p);
        for r in &rows {
            for c in &cols {
                let (mut re, mut im) = (BigInt::zero(), BigInt::zero());
                for t in 0..k {
                    let (ar, ai, br, bi) = (&r.re[t], &r.im[t], &c.re[t], &c.im[t]);
                    let (a_re, a_im, b_re, b_im) = (!ar.is_zero(), !ai.is_zero(), !br.is_zero(), !bi.is_zero());
                    if a_re && b_re {
                        re += ar * br;
                    }
                    if a_im && b_im {
                        re -= ai * bi;
                    }
                    if a_re && b_im {
                        im += ar * bi;
                    }
                    if a_im && b_re {
                        im += ai * br;
                    }
                }
                let den = &r.den * &c.den;
                out.push(GaussRat::new(BigRational::new(re, den.clone()), BigRational::new(im, den)));
            }
        }
        Some(out)
    }
    /// Homogeneous Horner on Gaussian integers: with `z = w/q` and cleared
    /// coefficients `c_k/D`, the value is `Σ c_k w^k q^(m−k) / (D q^m)`, so
    /// only the final quotient is reduced.
    fn poly_eval(coeffs: &[GaussRat], z: &Self) -> Option<Self> {
        let Some(m) = coeffs.len().checked_sub(1) else { return Some(GaussRat::zero()) };
        let c = Cleared::new(coeffs.iter());
        let w = Cleared::new(std::iter::once(z));
        let (wr, wi, q) = (&w.re[0], &w.im[0], &w.den);
        let (mut re, mut im) = (c.re[m].clone(), c.im[m].clone());
        let mut qp = BigInt::one();
        for k in (0..m).rev() {
            qp *= q;
            let nre = &re * wr - &im * wi + &c.re[k] * &qp;
            im = &re * wi + &im * wr + &c.im[k] * &qp;
            re = nre;
        }
        let den = c.den * qp;
        Some(GaussRat::new(BigRational::new(re, den.clone()), BigRational::new(im, den)))
    }
    /// Fraction-free Gauss–Jordan over the Gaussian integers: each row is
    /// cleared of denominators, every update `(p·a − f·b)/p_prev` divides
    /// exactly, and all pivots end equal to the last one, `D`, so the reduced
    /// form is the final matrix over `D`.
    fn rref(a: &[Self], rows: usize, cols: usize) -> Option<(Vec<Self>, Vec<usize>)> {
        let mut m: Vec<Vec<GInt>> = (0..rows)
            .map(|i| {
                let c = Cleared::new(a[i * cols..(i + 1) * cols].iter());
                c.re.into_iter().zip(c.im).map(|(re, im)| GInt { re, im }).collect()
            })
            .collect();
        let one = GInt { re: BigInt::one(), im: BigInt::zero() };
        let mut prev = one.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for c in 0..cols {
            if row == rows {
                break;
            }
            let Some(p) = (row..rows).find(|&r| !m[r][c].is_zero()) else { continue };
            m.swap(row, p);
            let piv = m[row][c].clone();
            let pivot_row = m[row].clone();
            for (r, cur) in m.iter_mut().enumerate() {
                if r == row {
                    continue;
                }
                let f = cur[c].clone();
                for j in 0..cols {
                    if j == c {
                        continue;
                    }
                    let mut v = piv.mul(&cur[j]);
                    if !f.is_zero() && !pivot_row[j].is_zero() {
                        v = v.sub(f.mul(&pivot_row[j]));
                    }
                    cur[j] = if prev == one { v } else { v.div_exact(&prev) };
                }
                cur[c] = GInt { re: BigInt::zero(), im: BigInt::zero() };
            }
            prev = piv;
            pivots.push(c);
            row += 1;
        }
        let zero = GaussRat::zero();
        let mut out = Vec::with_capacity(rows * cols);
        for (i, r) in m.iter().enumerate() {
            for x in r {
                out.push(if i >= row || x.is_zero() { zero.clone() } else { x.over(&prev) });
            }
        }
        Some((out, pivots))
    }
}

impl Field for Complex64 {
    const EXACT: bool = false;
    const NALGEBRA: bool = true;
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn from_gauss(g: &GaussRat) -> Self {
        g.to_c64()
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn from_c64(c: Complex64) -> Self {
        c
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn abs_f64(&self) -> f64 {
        self.norm()
    }
}

/// Complex double-double number.
///
/// Arithmetic is componentwise on [`TwoFloat`], except that real division
/// gets one Newton correction: `TwoFloat`'s own quotient is only accurate to
/// double precision.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct DdComplex {
    pub re: TwoFloat,
    pub im: TwoFloat,
}

impl DdComplex {
    pub fn new(re: TwoFloat, im: TwoFloat) -> Self {
        DdComplex { re, im }
    }

    pub fn real(x: f64) -> Self {
        DdComplex::new(TwoFloat::from(x), TwoFloat::from(0.0))
    }

    pub fn norm_sqr(&self) -> TwoFloat {
        self.re * self.re + self.im * self.im
    }
}

fn dd_div(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let q = a / b;
    q + (a - q * b) / b
}

/// Nearest double-double to an exact rational: the leading double plus the
/// rounded remainder.
fn rat_to_dd(r: &BigRational) -> TwoFloat {
    let hi = rat_to_f64(r);
    let Some(hi_exact) = BigRational::from_float(hi) else {
        return TwoFloat::from(hi);
    };
    TwoFloat::new_add(hi, rat_to_f64(&(r - hi_exact)))
}

impl Add for DdComplex {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        DdComplex::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for DdComplex {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        DdComplex::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for DdComplex {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        DdComplex::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
}

impl Div for DdComplex {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let d = o.norm_sqr();
        let re = self.re * o.re + self.im * o.im;
        let im = self.im * o.re - self.re * o.im;
        DdComplex::new(dd_div(re, d), dd_div(im, d))
    }
}

impl Neg for DdComplex {
    type Output = Self;
    fn neg(self) -> Self {
        DdComplex::new(-self.re, -self.im)
    }
}

impl Zero for DdComplex {
    fn zero() -> Self {
        DdComplex::real(0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == TwoFloat::from(0.0) && self.im == TwoFloat::from(0.0)
    }
}

impl One for DdComplex {
    fn one() -> Self {
        DdComplex::real(1.0)
    }
}

impl Field for DdComplex {
    const EXACT: bool = false;
    fn conj(&self) -> Self {
        DdComplex::new(self.re, -self.im)
    }
    fn from_gauss(g: &GaussRat) -> Self {
        DdComplex::new(rat_to_dd(&g.re), rat_to_dd(&g.im))
    }
    fn from_i64(v: i64) -> Self {
        DdComplex::real(v as f64)
    }
    fn from_c64(c: Complex64) -> Self {
        DdComplex::new(TwoFloat::from(c.re), TwoFloat::from(c.im))
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(f64::from(self.re), f64::from(self.im))
    }
    fn abs_f64(&self) -> f64 {
        f64::from(self.norm_sqr()).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GaussRat {
        s.parse().unwrap()
    }

    #[test]
    fn text_forms_parse_and_print_canonically() {
        for s in ["0", "1", "-i", "i", "3/2-1/3i", "-7/5+2i", "2/3i", "-1/2", "1+i", "1-i"] {
            assert_eq!(g(s).to_string(), s);
        }
        assert_eq!(g("+3/2+1i").to_string(), "3/2+i");
        assert_eq!(g("4/6").to_string(), "2/3");
        assert_eq!(g("0+0i").to_string(), "0");
    }

    #[test]
    fn malformed_text_is_rejected() {
        for s in ["", "1/0", "a", "1//2", "1/-2", "++1"] {
            assert!(s.parse::<GaussRat>().is_err(), "{s}");
        }
    }

    #[test]
    fn field_operations() {
        let a = g("1+i");
        let b = g("1-i");
        assert_eq!(&a * &b, g("2"));
        assert_eq!(a.clone() / b.clone(), g("i"));
        assert_eq!(a.conj(), b);
        assert_eq!(a.norm_sqr(), BigRational::from_integer(2.into()));
        assert!(GaussRat::zero().inv().is_none());
    }

    #[test]
    fn double_double_keeps_a_third_more_digits() {
        let third = g("1/3");
        let d = DdComplex::from_gauss(&third);
        let back = d * DdComplex::from_i64(3) - DdComplex::from_i64(1);
        assert!(back.abs_f64() < 1e-30);
        let q = DdComplex::from_i64(1) / DdComplex::from_i64(3) * DdComplex::from_i64(3) - DdComplex::from_i64(1);
        assert!(q.abs_f64() < 1e-30);
        let w = DdComplex::from_gauss(&g("2/7+3/11i"));
        let u = (DdComplex::one() / w) * w - DdComplex::one();
        assert!(u.abs_f64() < 1e-30);
        let c = Complex64::from_gauss(&third) * 3.0 - 1.0;
        assert!(c.norm() < 1e-15);
        assert_eq!(GaussRat::from_c64(Complex64::new(0.5, -0.25)), g("1/2-1/4i"));
    }

    #[test]
    fn json_round_trip() {
        let v = vec![g("3/2-1/3i"), g("-i"), g("0")];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"["3/2-1/3i","-i","0"]"#);
        let back: Vec<GaussRat> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }
}
