//! Polynomial functions on the flat supercotangent chart.
//!
//! Even variables `x^1..x^n`, `p_1..p_n` and odd variables `xi^1..xi^n`.
//! Indices are 0-based in the API and 1-based in the text form (`x1`, `p1`,
//! `xi1`). Odd monomials are stored as a bitmask with ascending order implied;
//! the reordering sign is absorbed into the coefficient.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::coeff::{Rational, Scalar};
use crate::error::{Error, Result};

/// Largest supported dimension; odd monomials live in a `u32` mask.
pub const MAX_DIM: usize = 32;

/// Metric signature `(p, q)` of the flat metric `eta = diag(+1 x p, -1 x q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub p: usize,
    pub q: usize,
}

impl Signature {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        let n = p + q;
        if n == 0 {
            return Err(Error::InvalidSignature("dimension must be at least 1".into()));
        }
        if n > MAX_DIM {
            return Err(Error::InvalidSignature(format!("dimension {n} exceeds {MAX_DIM}")));
        }
        Ok(Signature { p, q })
    }

    pub fn euclidean(n: usize) -> Self {
        Signature::new(n, 0).expect("valid dimension")
    }

    pub fn n(&self) -> usize {
        self.p + self.q
    }

    /// Diagonal entry `eta_ii` (equal to `eta^ii`), 0-based.
    pub fn eta(&self, i: usize) -> i64 {
        if i < self.p {
            1
        } else {
            -1
        }
    }

    pub fn eta_scalar(&self, i: usize) -> Scalar {
        Scalar::int(self.eta(i))
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// Z/2 parity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_degree(k: usize) -> Parity {
        if k.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// Koszul sign `(-1)^(|a||b|)`.
    pub fn koszul(self, other: Parity) -> i64 {
        if self.is_odd() && other.is_odd() {
            -1
        } else {
            1
        }
    }
}

/// A coordinate of the chart, 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X(usize),
    P(usize),
    Xi(usize),
}

impl Var {
    pub fn index(self) -> usize {
        match self {
            Var::X(i) | Var::P(i) | Var::Xi(i) => i,
        }
    }

    pub fn is_odd(self) -> bool {
        matches!(self, Var::Xi(_))
    }
}

/// `(k, kappa)`: degree in `p` and degree in `xi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bidegree {
    pub k: usize,
    pub kappa: usize,
}

impl Bidegree {
    pub fn new(k: usize, kappa: usize) -> Self {
        Bidegree { k, kappa }
    }

    /// `2k + kappa`.
    pub fn hamiltonian(&self) -> usize {
        2 * self.k + self.kappa
    }
}

// ---- Grassmann bitmask helpers -------------------------------------------

/// Sign of `xi^A xi^B` rearranged into ascending order, or `None` if the
/// sets overlap.
pub fn wedge_sign(a: u32, b: u32) -> Option<i64> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        // elements of a greater than j
        let above = if j >= 31 { 0 } else { a >> (j + 1) };
        swaps += above.count_ones();
    }
    Some(if swaps.is_multiple_of(2) { 1 } else { -1 })
}

/// Left derivative `d/dxi^i` of the ascending monomial `mask`.
pub fn left_derivative(mask: u32, i: usize) -> Option<(i64, u32)> {
    let bit = 1u32 << i;
    if mask & bit == 0 {
        return None;
    }
    let below = (mask & (bit - 1)).count_ones();
    Some((if below.is_multiple_of(2) { 1 } else { -1 }, mask & !bit))
}

/// Right derivative of the ascending monomial `mask`.
pub fn right_derivative(mask: u32, i: usize) -> Option<(i64, u32)> {
    let bit = 1u32 << i;
    if mask & bit == 0 {
        return None;
    }
    let above = (mask >> i >> 1).count_ones();
    Some((if above.is_multiple_of(2) { 1 } else { -1 }, mask & !bit))
}

pub fn mask_indices(mask: u32) -> impl Iterator<Item = usize> {
    (0..32usize).filter(move |i| mask & (1u32 << i) != 0)
}

// ---- monomials -----------------------------------------------------------

/// Key of a term: exponents of `x`, exponents of `p`, set of `xi` indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub x: Vec<u32>,
    pub p: Vec<u32>,
    pub xi: u32,
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial { x: vec![0; n], p: vec![0; n], xi: 0 }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn p_degree(&self) -> usize {
        self.p.iter().map(|&e| e as usize).sum()
    }

    pub fn x_degree(&self) -> usize {
        self.x.iter().map(|&e| e as usize).sum()
    }

    pub fn xi_degree(&self) -> usize {
        self.xi.count_ones() as usize
    }

    pub fn parity(&self) -> Parity {
        Parity::of_degree(self.xi_degree())
    }

    pub fn bidegree(&self) -> Bidegree {
        Bidegree::new(self.p_degree(), self.xi_degree())
    }

    pub fn is_x_only(&self) -> bool {
        self.xi == 0 && self.p.iter().all(|&e| e == 0)
    }

    /// Product with the sign coming from the odd parts.
    pub fn mul(&self, other: &Monomial) -> Option<(i64, Monomial)> {
        let sign = wedge_sign(self.xi, other.xi)?;
        let x = self.x.iter().zip(&other.x).map(|(a, b)| a + b).collect();
        let p = self.p.iter().zip(&other.p).map(|(a, b)| a + b).collect();
        Some((sign, Monomial { x, p, xi: self.xi | other.xi }))
    }

    fn fmt_factors(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (block, name) in [(&self.x, "x"), (&self.p, "p")] {
            for (i, &e) in block.iter().enumerate() {
                match e {
                    0 => {}
                    1 => out.push(format!("{name}{}", i + 1)),
                    _ => out.push(format!("{name}{}^{e}", i + 1)),
                }
            }
        }
        for i in mask_indices(self.xi) {
            out.push(format!("xi{}", i + 1));
        }
        out
    }
}

/// Moves an index of `xi`, `p` or `x` with the flat metric.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexMove {
    /// Replace `xi^i` by `xi_i = eta_ii xi^i`.
    LowerXi(usize),
    /// Replace `xi_i` by `xi^i = eta^ii xi_i`.
    RaiseXi(usize),
    LowerX(usize),
    RaiseX(usize),
    LowerP(usize),
    RaiseP(usize),
}

// ---- polynomials ---------------------------------------------------------

/// A polynomial in `x`, `p`, `xi` with [`Scalar`] coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SuperPolynomial {
    n: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl SuperPolynomial {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_DIM, "dimension {n} exceeds {MAX_DIM}");
        SuperPolynomial { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Scalar) -> Self {
        SuperPolynomial::from_term(Monomial::one(n), c)
    }

    pub fn one(n: usize) -> Self {
        SuperPolynomial::constant(n, Scalar::one())
    }

    pub fn from_term(mono: Monomial, c: Scalar) -> Self {
        let mut out = SuperPolynomial::zero(mono.n());
        out.add_term(mono, c);
        out
    }

    pub fn var(n: usize, v: Var) -> Self {
        assert!(v.index() < n, "variable index out of range");
        let mut m = Monomial::one(n);
        match v {
            Var::X(i) => m.x[i] = 1,
            Var::P(i) => m.p[i] = 1,
            Var::Xi(i) => m.xi = 1 << i,
        }
        SuperPolynomial::from_term(m, Scalar::one())
    }

    pub fn x(n: usize, i: usize) -> Self {
        SuperPolynomial::var(n, Var::X(i))
    }

    pub fn p(n: usize, i: usize) -> Self {
        SuperPolynomial::var(n, Var::P(i))
    }

    pub fn xi(n: usize, i: usize) -> Self {
        SuperPolynomial::var(n, Var::Xi(i))
    }

    /// `xi_i = eta_ii xi^i`.
    pub fn xi_lower(sig: Signature, i: usize) -> Self {
        SuperPolynomial::xi(sig.n(), i).scale(&sig.eta_scalar(i))
    }

    /// `x_i = eta_ii x^i`.
    pub fn x_lower(sig: Signature, i: usize) -> Self {
        SuperPolynomial::x(sig.n(), i).scale(&sig.eta_scalar(i))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, mono: &Monomial) -> Scalar {
        self.terms.get(mono).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, mono: Monomial, c: Scalar) {
        assert_eq!(mono.n(), self.n, "monomial dimension mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_dim(&self, other: &SuperPolynomial) -> Result<()> {
        if self.n != other.n {
            Err(Error::DimensionMismatch(self.n, other.n))
        } else {
            Ok(())
        }
    }

    pub fn scale(&self, c: &Scalar) -> SuperPolynomial {
        let mut out = SuperPolynomial::zero(self.n);
        if c.is_zero() {
            return out;
        }
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn scale_rat(&self, q: &Rational) -> SuperPolynomial {
        self.scale(&Scalar::rational(q.clone()))
    }

    pub fn scale_int(&self, v: i64) -> SuperPolynomial {
        self.scale(&Scalar::int(v))
    }

    /// Graded-commutative product.
    pub fn checked_mul(&self, other: &SuperPolynomial) -> Result<SuperPolynomial> {
        self.check_dim(other)?;
        let mut out = SuperPolynomial::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((sign, m)) = ma.mul(mb) {
                    let c = ca * cb;
                    out.add_term(m, if sign < 0 { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> SuperPolynomial {
        let mut out = SuperPolynomial::one(self.n);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Parity, if every term has the same one. The zero polynomial is even.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(Monomial::parity);
        let first = match it.next() {
            Some(p) => p,
            None => return Some(Parity::Even),
        };
        it.all(|p| p == first).then_some(first)
    }

    pub fn is_x_only(&self) -> bool {
        self.terms.keys().all(Monomial::is_x_only)
    }

    /// Partial derivative; for odd variables the left derivative.
    pub fn derive(&self, v: Var) -> SuperPolynomial {
        let mut out = SuperPolynomial::zero(self.n);
        for (m, c) in &self.terms {
            match v {
                Var::X(i) | Var::P(i) => {
                    let exps = if matches!(v, Var::X(_)) { &m.x } else { &m.p };
                    let e = exps[i];
                    if e == 0 {
                        continue;
                    }
                    let mut nm = m.clone();
                    if matches!(v, Var::X(_)) {
                        nm.x[i] -= 1;
                    } else {
                        nm.p[i] -= 1;
                    }
                    out.add_term(nm, c * &Scalar::int(e as i64));
                }
                Var::Xi(i) => {
                    if let Some((sign, mask)) = left_derivative(m.xi, i) {
                        let mut nm = m.clone();
                        nm.xi = mask;
                        out.add_term(nm, if sign < 0 { -c } else { c.clone() });
                    }
                }
            }
        }
        out
    }

    pub fn try_derive(&self, v: Var) -> Result<SuperPolynomial> {
        if v.index() >= self.n {
            return Err(Error::IndexOutOfRange { index: v.index() + 1, n: self.n });
        }
        Ok(self.derive(v))
    }

    pub fn dx(&self, i: usize) -> SuperPolynomial {
        self.derive(Var::X(i))
    }

    pub fn dp(&self, i: usize) -> SuperPolynomial {
        self.derive(Var::P(i))
    }

    pub fn dxi(&self, i: usize) -> SuperPolynomial {
        self.derive(Var::Xi(i))
    }

    /// Right derivative with respect to `xi^i`.
    pub fn dxi_right(&self, i: usize) -> SuperPolynomial {
        let mut out = SuperPolynomial::zero(self.n);
        for (m, c) in &self.terms {
            if let Some((sign, mask)) = right_derivative(m.xi, i) {
                let mut nm = m.clone();
                nm.xi = mask;
                out.add_term(nm, if sign < 0 { -c } else { c.clone() });
            }
        }
        out
    }

    /// Contracts one index with the flat metric.
    pub fn raise_lower(&self, sig: Signature, mv: IndexMove) -> Result<SuperPolynomial> {
        if sig.n() != self.n {
            return Err(Error::DimensionMismatch(sig.n(), self.n));
        }
        let i = match mv {
            IndexMove::LowerXi(i)
            | IndexMove::RaiseXi(i)
            | IndexMove::LowerX(i)
            | IndexMove::RaiseX(i)
            | IndexMove::LowerP(i)
            | IndexMove::RaiseP(i) => i,
        };
        if i >= self.n {
            return Err(Error::IndexOutOfRange { index: i + 1, n: self.n });
        }
        let eta = sig.eta(i);
        let mut out = SuperPolynomial::zero(self.n);
        for (m, c) in &self.terms {
            let power = match mv {
                IndexMove::LowerXi(_) | IndexMove::RaiseXi(_) => (m.xi >> i) & 1,
                IndexMove::LowerX(_) | IndexMove::RaiseX(_) => m.x[i],
                IndexMove::LowerP(_) | IndexMove::RaiseP(_) => m.p[i],
            };
            let flip = eta < 0 && power % 2 == 1;
            out.add_term(m.clone(), if flip { -c } else { c.clone() });
        }
        Ok(out)
    }

    /// Odd Euler operator `Sigma = xi^i d/dxi^i`.
    pub fn euler_odd(&self) -> SuperPolynomial {
        self.map_terms(|m, c| c * &Scalar::int(m.xi_degree() as i64))
    }

    /// Bidegrees with a nonzero component.
    pub fn bidegrees(&self) -> BTreeSet<Bidegree> {
        self.terms.keys().map(Monomial::bidegree).collect()
    }

    pub fn bidegree_component(&self, b: Bidegree) -> SuperPolynomial {
        self.filter(|m| m.bidegree() == b)
    }

    /// Largest `2k + kappa` over the terms.
    pub fn hamiltonian_degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.bidegree().hamiltonian()).max()
    }

    pub fn hamiltonian_component(&self, d: usize) -> SuperPolynomial {
        self.filter(|m| m.bidegree().hamiltonian() == d)
    }

    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> SuperPolynomial {
        SuperPolynomial {
            n: self.n,
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn map_terms(&self, f: impl Fn(&Monomial, &Scalar) -> Scalar) -> SuperPolynomial {
        let mut out = SuperPolynomial::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(m, c));
        }
        out
    }

    pub fn specialize_h(&self, value: &Rational) -> Result<SuperPolynomial> {
        let mut out = SuperPolynomial::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.specialize_h(value)?);
        }
        Ok(out)
    }

    /// Multiplies every coefficient by `h^k`.
    pub fn shift_h(&self, k: i32) -> SuperPolynomial {
        self.map_terms(|_, c| c.shift_h(k))
    }

    pub fn to_json(&self) -> Result<serde_json::Value> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let xi: Vec<usize> = mask_indices(m.xi).map(|i| i + 1).collect();
            terms.push(serde_json::json!({
                "x": m.x,
                "p": m.p,
                "xi": xi,
                "coeff": c.to_json()?,
            }));
        }
        Ok(serde_json::json!({ "n": self.n, "terms": terms }))
    }

    pub fn from_json(value: &serde_json::Value) -> Result<SuperPolynomial> {
        #[derive(Deserialize)]
        struct TermJson {
            x: Vec<u32>,
            p: Vec<u32>,
            xi: Vec<usize>,
            coeff: serde_json::Value,
        }
        #[derive(Deserialize)]
        struct PolyJson {
            n: usize,
            terms: Vec<TermJson>,
        }
        let parsed: PolyJson = serde_json::from_value(value.clone())?;
        if parsed.n == 0 || parsed.n > MAX_DIM {
            return Err(Error::Json(format!("invalid dimension {}", parsed.n)));
        }
        let mut out = SuperPolynomial::zero(parsed.n);
        for t in parsed.terms {
            if t.x.len() != parsed.n || t.p.len() != parsed.n {
                return Err(Error::Json("exponent vector of wrong length".into()));
            }
            let mut mask = 0u32;
            let mut last = 0usize;
            for &i in &t.xi {
                if i == 0 || i > parsed.n || i <= last {
                    return Err(Error::Json("xi indices must be ascending within 1..=n".into()));
                }
                last = i;
                mask |= 1 << (i - 1);
            }
            let mono = Monomial { x: t.x, p: t.p, xi: mask };
            out.add_term(mono, Scalar::from_json(&t.coeff)?);
        }
        Ok(out)
    }

    /// Parses the text form; see [`crate::parse`].
    pub fn parse(text: &str, n: usize) -> Result<SuperPolynomial> {
        crate::parse::parse_polynomial(text, n)
    }
}

impl fmt::Display for SuperPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let factors = m.fmt_factors();
            if c.num_terms() == 1 {
                let (hpow, part, q) = c.terms().next().expect("one term");
                let neg = num_traits::Signed::is_negative(q);
                let mag = Scalar::term(num_traits::Signed::abs(q), hpow, part);
                let sep = match (idx == 0, neg) {
                    (true, false) => "",
                    (true, true) => "-",
                    (false, false) => " + ",
                    (false, true) => " - ",
                };
                write!(f, "{sep}")?;
                if factors.is_empty() {
                    write!(f, "{mag}")?;
                } else if mag.is_one() {
                    write!(f, "{}", factors.join("*"))?;
                } else {
                    write!(f, "{mag}*{}", factors.join("*"))?;
                }
            } else {
                if idx > 0 {
                    write!(f, " + ")?;
                }
                if factors.is_empty() {
                    write!(f, "({c})")?;
                } else {
                    write!(f, "({c})*{}", factors.join("*"))?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SuperPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SuperPolynomial[n={}]({self})", self.n)
    }
}

impl AddAssign<&SuperPolynomial> for SuperPolynomial {
    fn add_assign(&mut self, rhs: &SuperPolynomial) {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&SuperPolynomial> for SuperPolynomial {
    fn sub_assign(&mut self, rhs: &SuperPolynomial) {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl<'a> Add<&'a SuperPolynomial> for &'a SuperPolynomial {
    type Output = SuperPolynomial;
    fn add(self, rhs: &SuperPolynomial) -> SuperPolynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for SuperPolynomial {
    type Output = SuperPolynomial;
    fn add(mut self, rhs: SuperPolynomial) -> SuperPolynomial {
        self += &rhs;
        self
    }
}

impl<'a> Sub<&'a SuperPolynomial> for &'a SuperPolynomial {
    type Output = SuperPolynomial;
    fn sub(self, rhs: &SuperPolynomial) -> SuperPolynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for SuperPolynomial {
    type Output = SuperPolynomial;
    fn sub(mut self, rhs: SuperPolynomial) -> SuperPolynomial {
        self -= &rhs;
        self
    }
}

impl Neg for &SuperPolynomial {
    type Output = SuperPolynomial;
    fn neg(self) -> SuperPolynomial {
        self.map_terms(|_, c| -c)
    }
}

impl Neg for SuperPolynomial {
    type Output = SuperPolynomial;
    fn neg(self) -> SuperPolynomial {
        -&self
    }
}

impl<'a> Mul<&'a SuperPolynomial> for &'a SuperPolynomial {
    type Output = SuperPolynomial;
    fn mul(self, rhs: &SuperPolynomial) -> SuperPolynomial {
        self.checked_mul(rhs).expect("dimension mismatch in product")
    }
}

impl Mul for SuperPolynomial {
    type Output = SuperPolynomial;
    fn mul(self, rhs: SuperPolynomial) -> SuperPolynomial {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{PolyShape, Sampler};

    fn sp(text: &str, n: usize) -> SuperPolynomial {
        SuperPolynomial::parse(text, n).unwrap()
    }

    #[test]
    fn anticommutation_and_nilpotence() {
        let (a, b) = (SuperPolynomial::xi(2, 0), SuperPolynomial::xi(2, 1));
        assert_eq!(&a * &b, sp("xi1*xi2", 2));
        assert_eq!(&b * &a, -sp("xi1*xi2", 2));
        assert!((&a * &a).is_zero());
        assert_eq!(&sp("x1*p1", 2) * &sp("xi1*xi2", 2), sp("x1*p1*xi1*xi2", 2));
    }

    #[test]
    fn derivative_examples() {
        let f = sp("xi1*xi2", 2);
        assert_eq!(f.dxi(0), sp("xi2", 2));
        assert_eq!(f.dxi(1), sp("-xi1", 2));
        assert_eq!(sp("p1^2*xi3", 3).dp(0), sp("2*p1*xi3", 3));
        assert!(f.try_derive(Var::Xi(2)).is_err());
    }

    #[test]
    fn right_derivative_relation() {
        // for homogeneous F: d^R F = (-1)^(|F|+1) d^L F
        let odd = sp("xi1*xi2*xi3 + x1*xi2*xi3*xi4 - p2*xi1", 4);
        let even = sp("xi1*xi2 + x1*xi1*xi2*xi3*xi4", 4);
        for i in 0..4 {
            assert_eq!(odd.dxi_right(i), odd.dxi(i));
            assert_eq!(even.dxi_right(i), -even.dxi(i));
        }
    }

    #[test]
    fn raise_lower_examples() {
        let e = Signature::euclidean(2);
        let l = Signature::new(1, 1).unwrap();
        let xi1 = SuperPolynomial::xi(2, 0);
        assert_eq!(xi1.raise_lower(e, IndexMove::LowerXi(0)).unwrap(), xi1);
        let xi2 = SuperPolynomial::xi(2, 1);
        assert_eq!(xi2.raise_lower(l, IndexMove::LowerXi(1)).unwrap(), -xi2.clone());
        assert!(xi2.raise_lower(l, IndexMove::LowerXi(2)).is_err());
    }

    #[test]
    fn degrees_and_euler() {
        assert_eq!(sp("xi1*xi2", 2).euler_odd(), sp("2*xi1*xi2", 2));
        assert!(sp("p1^2", 2).euler_odd().is_zero());
        let b: Vec<_> = sp("p1*xi1 + p1*p2", 2).bidegrees().into_iter().collect();
        assert_eq!(b, vec![Bidegree::new(1, 1), Bidegree::new(2, 0)]);
    }

    #[test]
    fn zero_prints_as_zero() {
        assert_eq!(SuperPolynomial::zero(3).to_string(), "0");
    }

    #[test]
    fn graded_commutativity_and_leibniz() {
        let mut s = Sampler::new(7);
        let shape = PolyShape { max_x: 1, max_p: 2, max_xi: 3, terms: 3 };
        for _ in 0..500 {
            let n = s.dim(1, 4);
            let f = s.homogeneous(n, &shape);
            let g = s.homogeneous(n, &shape);
            let (pf, pg) = (f.parity().unwrap(), g.parity().unwrap());
            assert_eq!(&f * &g, (&g * &f).scale_int(pf.koszul(pg)));
            let i = s.index(n);
            let lhs = (&f * &g).dxi(i);
            let sign = if pf.is_odd() { -1 } else { 1 };
            let rhs = &(&f.dxi(i) * &g) + &(&f * &g.dxi(i)).scale_int(sign);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn odd_derivatives_anticommute() {
        let mut s = Sampler::new(11);
        let shape = PolyShape { max_x: 1, max_p: 1, max_xi: 4, terms: 4 };
        for _ in 0..100 {
            let f = s.poly(4, &shape);
            for i in 0..4 {
                assert!(f.dxi(i).dxi(i).is_zero());
                for j in 0..4 {
                    assert_eq!(f.dxi(j).dxi(i), -f.dxi(i).dxi(j));
                }
            }
        }
    }

    #[test]
    fn raise_lower_round_trip() {
        let mut s = Sampler::new(3);
        let sig = Signature::new(2, 2).unwrap();
        let shape = PolyShape { max_x: 2, max_p: 2, max_xi: 3, terms: 5 };
        for _ in 0..50 {
            let f = s.poly(4, &shape);
            for i in 0..4 {
                for (lo, hi) in [
                    (IndexMove::LowerXi(i), IndexMove::RaiseXi(i)),
                    (IndexMove::LowerP(i), IndexMove::RaiseP(i)),
                    (IndexMove::LowerX(i), IndexMove::RaiseX(i)),
                ] {
                    let back = f.raise_lower(sig, hi).unwrap().raise_lower(sig, lo).unwrap();
                    assert_eq!(back, f);
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let f = sp("3/2*h*x1^2*p2*xi1*xi3 - i*s*p1 + 7", 3);
        let v = f.to_json().unwrap();
        assert_eq!(SuperPolynomial::from_json(&v).unwrap(), f);
        assert_eq!(v["terms"].as_array().unwrap().len(), 3);
    }
}
