//! Exact coefficients in `Q[h, 1/h][i, s] / (i^2 + 1, s^2 - 2)`.
//!
//! A [`Scalar`] is a finite sum of terms `q * h^k * part` where `q` is a
//! rational, `k` an integer power of the formal parameter `h` (standing for
//! hbar/i) and `part` one of the four basis elements `1, i, s, i*s` with
//! `s = sqrt(2)`. Negative powers of `h` are allowed: the odd Poisson bracket
//! carries a `1/h`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rational number used throughout the crate.
pub type Rational = BigRational;

/// Shorthand for the rational `num/den`.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Renders a rational as `num` or `num/den`.
pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `num` or `num/den` (optionally signed).
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::InvalidArgument(format!("not a rational number: {text:?}"));
    let (num, den) = match text.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Basis element of `Q(i, sqrt 2)` over `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Part {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "i")]
    I,
    #[serde(rename = "s")]
    S,
    #[serde(rename = "is")]
    IS,
}

impl Part {
    fn bits(self) -> (bool, bool) {
        match self {
            Part::One => (false, false),
            Part::I => (true, false),
            Part::S => (false, true),
            Part::IS => (true, true),
        }
    }

    fn from_bits(i: bool, s: bool) -> Part {
        match (i, s) {
            (false, false) => Part::One,
            (true, false) => Part::I,
            (false, true) => Part::S,
            (true, true) => Part::IS,
        }
    }

    /// Product of two basis elements as `factor * part`.
    fn mul(self, other: Part) -> (i64, Part) {
        let (ai, as_) = self.bits();
        let (bi, bs) = other.bits();
        let mut factor = 1;
        if ai && bi {
            factor *= -1;
        }
        if as_ && bs {
            factor *= 2;
        }
        (factor, Part::from_bits(ai ^ bi, as_ ^ bs))
    }

    fn symbol(self) -> &'static str {
        match self {
            Part::One => "",
            Part::I => "i",
            Part::S => "s",
            Part::IS => "i*s",
        }
    }
}

/// An exact element of `Q[h, 1/h](i, sqrt 2)`, always in reduced form.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar {
    terms: BTreeMap<(i32, Part), Rational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::rational(Rational::one())
    }

    pub fn rational(q: Rational) -> Self {
        Scalar::term(q, 0, Part::One)
    }

    pub fn int(v: i64) -> Self {
        Scalar::rational(Rational::from_integer(BigInt::from(v)))
    }

    pub fn frac(num: i64, den: i64) -> Self {
        Scalar::rational(rat(num, den))
    }

    /// The single term `q * h^hpow * part`.
    pub fn term(q: Rational, hpow: i32, part: Part) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert((hpow, part), q);
        }
        Scalar { terms }
    }

    /// The formal parameter `h`.
    pub fn h() -> Self {
        Scalar::h_pow(1)
    }

    pub fn h_pow(k: i32) -> Self {
        Scalar::term(Rational::one(), k, Part::One)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar::term(Rational::one(), 0, Part::I)
    }

    /// `s = sqrt(2)`.
    pub fn s() -> Self {
        Scalar::term(Rational::one(), 0, Part::S)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&(0, Part::One)).is_some_and(|q| q.is_one())
    }

    /// Terms sorted by `(hpow, part)`.
    pub fn terms(&self) -> impl Iterator<Item = (i32, Part, &Rational)> {
        self.terms.iter().map(|(&(k, p), q)| (k, p, q))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The coefficient of `h^hpow * part`.
    pub fn coefficient(&self, hpow: i32, part: Part) -> Rational {
        self.terms.get(&(hpow, part)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Returns the rational value if the scalar lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&(0, Part::One)).cloned(),
            _ => None,
        }
    }

    /// True when no power of `h` other than `h^0` occurs.
    pub fn is_h_free(&self) -> bool {
        self.terms.keys().all(|&(k, _)| k == 0)
    }

    fn add_term(&mut self, key: (i32, Part), q: Rational) {
        if q.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(Rational::zero);
        *entry += q;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn scale(&self, q: &Rational) -> Scalar {
        if q.is_zero() {
            return Scalar::zero();
        }
        Scalar { terms: self.terms.iter().map(|(k, v)| (*k, v * q)).collect() }
    }

    /// Multiplies by `h^k`.
    pub fn shift_h(&self, k: i32) -> Scalar {
        Scalar { terms: self.terms.iter().map(|(&(p, part), v)| ((p + k, part), v.clone())).collect() }
    }

    /// Complex conjugation: `i -> -i`, `h -> -h`, `s -> s`.
    pub fn conj(&self) -> Scalar {
        let terms = self
            .terms
            .iter()
            .map(|(&(k, part), q)| {
                let flips = (k.rem_euclid(2) == 1) ^ part.bits().0;
                ((k, part), if flips { -q } else { q.clone() })
            })
            .collect();
        Scalar { terms }
    }

    /// Substitutes a rational value for `h`.
    ///
    /// Fails when `value` is zero and a negative power of `h` is present.
    pub fn specialize_h(&self, value: &Rational) -> Result<Scalar> {
        let mut out = Scalar::zero();
        for (&(k, part), q) in &self.terms {
            let factor = if k >= 0 {
                num_traits::pow(value.clone(), k as usize)
            } else if value.is_zero() {
                return Err(Error::InvalidArgument(
                    "cannot specialize h := 0 in a term with a negative power of h".into(),
                ));
            } else {
                num_traits::pow(value.recip(), (-k) as usize)
            };
            out.add_term((0, part), q * factor);
        }
        Ok(out)
    }

    /// Multiplicative inverse for `h`-free nonzero scalars, i.e. in the
    /// field `Q(i, sqrt 2)`.
    pub fn inverse(&self) -> Option<Scalar> {
        if self.is_zero() || !self.is_h_free() {
            return None;
        }
        // z = u + v s with u, v in Q(i); 1/z = (u - v s) / (u^2 - 2 v^2).
        let u = self.filter(|p| !p.bits().1);
        let v_times_s = self.filter(|p| p.bits().1);
        let conj_s = &u - &v_times_s;
        let norm = self * &conj_s; // lies in Q(i)
        let a = norm.coefficient(0, Part::One);
        let b = norm.coefficient(0, Part::I);
        let modulus = &a * &a + &b * &b;
        if modulus.is_zero() {
            return None;
        }
        let norm_inv = Scalar::rational(&a / &modulus) - Scalar::term(&b / &modulus, 0, Part::I);
        Some(&conj_s * &norm_inv)
    }

    fn filter(&self, keep: impl Fn(Part) -> bool) -> Scalar {
        Scalar { terms: self.terms.iter().filter(|((_, p), _)| keep(*p)).map(|(k, v)| (*k, v.clone())).collect() }
    }

    pub fn to_json(&self) -> Result<serde_json::Value> {
        let mut items = Vec::with_capacity(self.terms.len());
        for (&(hpow, part), q) in &self.terms {
            let num = q.numer().to_i64().ok_or_else(|| Error::Json("numerator does not fit in i64".into()))?;
            let den = q.denom().to_i64().ok_or_else(|| Error::Json("denominator does not fit in i64".into()))?;
            items.push(serde_json::to_value(ScalarTermJson { hpow, part, num, den })?);
        }
        Ok(serde_json::Value::Array(items))
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Scalar> {
        let items: Vec<ScalarTermJson> = serde_json::from_value(value.clone())?;
        let mut out = Scalar::zero();
        for t in items {
            if t.den <= 0 {
                return Err(Error::Json("scalar term with non-positive denominator".into()));
            }
            out.add_term((t.hpow, t.part), rat(t.num, t.den));
        }
        Ok(out)
    }

    fn fmt_term(f: &mut fmt::Formatter<'_>, hpow: i32, part: Part, q: &Rational, leading: bool) -> fmt::Result {
        let neg = q.is_negative();
        if leading {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, "{}", if neg { " - " } else { " + " })?;
        }
        let mag = q.abs();
        let mut factors: Vec<String> = Vec::new();
        if !mag.is_one() || (hpow == 0 && part == Part::One) {
            factors.push(fmt_rational(&mag));
        }
        match hpow {
            0 => {}
            1 => factors.push("h".into()),
            k => factors.push(format!("h^{k}")),
        }
        if part != Part::One {
            factors.push(part.symbol().into());
        }
        write!(f, "{}", factors.join("*"))
    }
}

#[derive(Serialize, Deserialize)]
struct ScalarTermJson {
    hpow: i32,
    part: Part,
    num: i64,
    den: i64,
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (&(k, p), q)) in self.terms.iter().enumerate() {
            Scalar::fmt_term(f, k, p, q, idx == 0)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::int(v)
    }
}

impl From<Rational> for Scalar {
    fn from(q: Rational) -> Self {
        Scalar::rational(q)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(mut self, rhs: Scalar) -> Scalar {
        self += &rhs;
        self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        for (k, q) in &rhs.terms {
            self.add_term(*k, q.clone());
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (k, q) in &rhs.terms {
            out.add_term(*k, -q.clone());
        }
        out
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { terms: self.terms.iter().map(|(k, v)| (*k, -v.clone())).collect() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (&(ka, pa), qa) in &self.terms {
            for (&(kb, pb), qb) in &rhs.terms {
                let (factor, part) = pa.mul(pb);
                let q = qa * qb * BigInt::from(factor);
                out.add_term((ka + kb, part), q);
            }
        }
        out
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}
