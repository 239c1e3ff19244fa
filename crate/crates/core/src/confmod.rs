//! The three conformal module actions: tensorial symbols, Hamiltonian
//! symbols and spinor differential operators, together with normal ordering
//! and operator composition.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::binomial;
use serde::Deserialize;

use crate::clifford::{clifford_product, kosmann_lie};
use crate::coeff::{rat, Rational, Scalar};
use crate::error::{Error, Result};
use crate::superpoly::{mask_indices, Monomial, Parity, Signature, SuperPolynomial};
use crate::symplectic::{conformal_killing_factor, hamiltonian_lift, VectorFieldOnM};

/// Symbol weight `delta` and operator weights `lambda`, `mu`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weights {
    pub delta: Rational,
    pub lambda: Option<Rational>,
    pub mu: Option<Rational>,
}

impl Weights {
    pub fn symbol(delta: Rational) -> Self {
        Weights { delta, lambda: None, mu: None }
    }

    pub fn operator(lambda: Rational, mu: Rational) -> Self {
        Weights { delta: &mu - &lambda, lambda: Some(lambda), mu: Some(mu) }
    }

    /// Checks `delta = mu - lambda` when both operator weights are present.
    pub fn validate(&self) -> Result<()> {
        if let (Some(l), Some(m)) = (&self.lambda, &self.mu) {
            if (m - l) != self.delta {
                return Err(Error::InconsistentWeights(format!(
                    "delta = {} but mu - lambda = {}",
                    crate::coeff::fmt_rational(&self.delta),
                    crate::coeff::fmt_rational(&(m - l))
                )));
            }
        }
        Ok(())
    }
}

// ---- spinor differential operators ---------------------------------------

type OpKey = (u32, Vec<u32>);

/// Differential operator `sum P(x) c^I d^alpha` on spinor-valued functions.
#[derive(Clone, PartialEq, Eq)]
pub struct SpinorDiffOp {
    sig: Signature,
    terms: BTreeMap<OpKey, SuperPolynomial>,
}

impl SpinorDiffOp {
    pub fn zero(sig: Signature) -> Self {
        SpinorDiffOp { sig, terms: BTreeMap::new() }
    }

    pub fn identity(sig: Signature) -> Self {
        let mut op = SpinorDiffOp::zero(sig);
        op.add_term(0, vec![0; sig.n()], SuperPolynomial::one(sig.n()));
        op
    }

    pub fn sig(&self) -> Signature {
        self.sig
    }

    pub fn n(&self) -> usize {
        self.sig.n()
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

    /// Terms as `(clifford mask, derivative orders, x coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &[u32], &SuperPolynomial)> {
        self.terms.iter().map(|((c, d), p)| (*c, d.as_slice(), p))
    }

    /// Adds `coeff * c^cliff * d^dx`; the coefficient must depend on `x` only.
    pub fn add_term(&mut self, cliff: u32, dx: Vec<u32>, coeff: SuperPolynomial) {
        assert!(coeff.is_x_only(), "operator coefficients depend on x only");
        assert_eq!(dx.len(), self.n(), "derivative multi-index of wrong length");
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry((cliff, dx)) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> SpinorDiffOp {
        let mut out = SpinorDiffOp::zero(self.sig);
        for ((m, d), p) in &self.terms {
            out.add_term(*m, d.clone(), p.scale(c));
        }
        out
    }

    pub fn specialize_h(&self, value: &Rational) -> Result<SpinorDiffOp> {
        let mut out = SpinorDiffOp::zero(self.sig);
        for ((m, d), p) in &self.terms {
            out.add_term(*m, d.clone(), p.specialize_h(value)?);
        }
        Ok(out)
    }

    /// Parity of the Clifford part, if homogeneous.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(|(m, _)| Parity::of_degree(m.count_ones() as usize));
        let first = match it.next() {
            Some(p) => p,
            None => return Some(Parity::Even),
        };
        it.all(|p| p == first).then_some(first)
    }

    /// Largest `2|alpha| + |I|` over the terms.
    pub fn hamiltonian_degree(&self) -> Option<usize> {
        self.terms.keys().map(|(m, d)| 2 * d.iter().map(|&e| e as usize).sum::<usize>() + m.count_ones() as usize).max()
    }

    pub fn compose(&self, other: &SpinorDiffOp) -> Result<SpinorDiffOp> {
        if self.sig != other.sig {
            return Err(Error::DimensionMismatch(self.n(), other.n()));
        }
        let n = self.n();
        let mut cliff_cache: BTreeMap<(u32, u32), Vec<(u32, Rational)>> = BTreeMap::new();
        let mut out = SpinorDiffOp::zero(self.sig);
        for ((ia, alpha), a) in &self.terms {
            for ((ib, beta), b) in &other.terms {
                let cl = cliff_cache.entry((*ia, *ib)).or_insert_with(|| clifford_product(*ia, *ib, self.sig)).clone();
                for gamma in sub_multi_indices(alpha) {
                    let mut db = b.clone();
                    let mut weight = BigInt::from(1);
                    for i in 0..n {
                        for _ in 0..gamma[i] {
                            db = db.dx(i);
                        }
                        weight *= binomial(BigInt::from(alpha[i]), BigInt::from(gamma[i]));
                    }
                    if db.is_zero() {
                        continue;
                    }
                    let coeff = (a * &db).scale_rat(&Rational::from_integer(weight));
                    let dx: Vec<u32> = (0..n).map(|i| alpha[i] - gamma[i] + beta[i]).collect();
                    for (mask, q) in &cl {
                        out.add_term(*mask, dx.clone(), coeff.scale_rat(q));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `A o B - (-1)^(|A||B|) B o A`, parities taken from the Clifford part.
    pub fn graded_commutator(&self, other: &SpinorDiffOp) -> Result<SpinorDiffOp> {
        let pa = self.parity().ok_or(Error::NotHomogeneous)?;
        let pb = other.parity().ok_or(Error::NotHomogeneous)?;
        let ab = self.compose(other)?;
        let ba = other.compose(self)?;
        Ok(&ab - &ba.scale(&Scalar::int(pa.koszul(pb))))
    }

    pub fn to_json(&self) -> Result<serde_json::Value> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for ((m, d), p) in &self.terms {
            let cliff: Vec<usize> = mask_indices(*m).map(|i| i + 1).collect();
            terms.push(serde_json::json!({ "cliff": cliff, "xcoeff": p.to_json()?, "dx": d }));
        }
        Ok(serde_json::json!({ "n": self.n(), "terms": terms }))
    }

    pub fn from_json(value: &serde_json::Value, sig: Signature) -> Result<SpinorDiffOp> {
        #[derive(Deserialize)]
        struct TermJson {
            cliff: Vec<usize>,
            xcoeff: serde_json::Value,
            dx: Vec<u32>,
        }
        #[derive(Deserialize)]
        struct OpJson {
            n: usize,
            terms: Vec<TermJson>,
        }
        let parsed: OpJson = serde_json::from_value(value.clone())?;
        if parsed.n != sig.n() {
            return Err(Error::DimensionMismatch(sig.n(), parsed.n));
        }
        let mut out = SpinorDiffOp::zero(sig);
        for t in parsed.terms {
            let mut mask = 0u32;
            let mut last = 0;
            for &i in &t.cliff {
                if i == 0 || i > parsed.n || i <= last {
                    return Err(Error::Json("cliff indices must be ascending within 1..=n".into()));
                }
                last = i;
                mask |= 1 << (i - 1);
            }
            if t.dx.len() != parsed.n {
                return Err(Error::Json("dx of wrong length".into()));
            }
            let coeff = SuperPolynomial::from_json(&t.xcoeff)?;
            if coeff.n() != parsed.n || !coeff.is_x_only() {
                return Err(Error::Json("xcoeff must be a polynomial in x of the same dimension".into()));
            }
            out.add_term(mask, t.dx, coeff);
        }
        Ok(out)
    }

    /// Text form. With `gamma` the Clifford part is written in
    /// `g_i = sqrt(2) c_i`, otherwise in `c_i`.
    pub fn render(&self, gamma: bool) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let half_s = Scalar::s().scale(&rat(1, 2));
        let mut parts = Vec::new();
        for ((m, d), p) in &self.terms {
            let k = m.count_ones();
            let coeff = if gamma {
                let mut f = Scalar::one();
                for _ in 0..k {
                    f = &f * &half_s;
                }
                p.scale(&f)
            } else {
                p.clone()
            };
            let mut factors = Vec::new();
            let text = coeff.to_string();
            let is_unit = text == "1";
            if !is_unit || (k == 0 && d.iter().all(|&e| e == 0)) {
                factors.push(if coeff.len() > 1 || text.contains(' ') { format!("({text})") } else { text });
            }
            let sym = if gamma { "g" } else { "c" };
            for i in mask_indices(*m) {
                factors.push(format!("{sym}{}", i + 1));
            }
            for (i, &e) in d.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("d{}", i + 1)),
                    _ => factors.push(format!("d{}^{e}", i + 1)),
                }
            }
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }
}

fn sub_multi_indices(alpha: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::with_capacity(alpha.len())];
    for &a in alpha {
        let mut next = Vec::with_capacity(out.len() * (a as usize + 1));
        for prefix in &out {
            for g in 0..=a {
                let mut v = prefix.clone();
                v.push(g);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

impl Add for &SpinorDiffOp {
    type Output = SpinorDiffOp;
    fn add(self, rhs: &SpinorDiffOp) -> SpinorDiffOp {
        assert_eq!(self.sig, rhs.sig, "signature mismatch");
        let mut out = self.clone();
        for ((m, d), p) in &rhs.terms {
            out.add_term(*m, d.clone(), p.clone());
        }
        out
    }
}

impl Sub for &SpinorDiffOp {
    type Output = SpinorDiffOp;
    fn sub(self, rhs: &SpinorDiffOp) -> SpinorDiffOp {
        assert_eq!(self.sig, rhs.sig, "signature mismatch");
        let mut out = self.clone();
        for ((m, d), p) in &rhs.terms {
            out.add_term(*m, d.clone(), -p);
        }
        out
    }
}

impl Neg for &SpinorDiffOp {
    type Output = SpinorDiffOp;
    fn neg(self) -> SpinorDiffOp {
        self.scale(&Scalar::int(-1))
    }
}

impl fmt::Display for SpinorDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(false))
    }
}

impl fmt::Debug for SpinorDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SpinorDiffOp[{}]({})", self.sig, self.render(false))
    }
}

// ---- normal ordering ------------------------------------------------------

/// `P(x) xi^I p^beta -> P(x) c^I h^|beta| d^beta`.
pub fn normal_order(f: &SuperPolynomial, sig: Signature) -> Result<SpinorDiffOp> {
    if f.n() != sig.n() {
        return Err(Error::DimensionMismatch(sig.n(), f.n()));
    }
    let n = sig.n();
    let mut out = SpinorDiffOp::zero(sig);
    for (m, c) in f.terms() {
        let xpart = Monomial { x: m.x.clone(), p: vec![0; n], xi: 0 };
        let k = m.p_degree() as i32;
        out.add_term(m.xi, m.p.clone(), SuperPolynomial::from_term(xpart, c.shift_h(k)));
    }
    Ok(out)
}

/// Inverse of [`normal_order`].
pub fn normal_order_inverse(a: &SpinorDiffOp) -> SuperPolynomial {
    let n = a.n();
    let mut out = SuperPolynomial::zero(n);
    for ((mask, d), p) in &a.terms {
        let k = d.iter().sum::<u32>() as i32;
        for (m, c) in p.terms() {
            let mono = Monomial { x: m.x.clone(), p: d.clone(), xi: *mask };
            out.add_term(mono, c.shift_h(-k));
        }
    }
    out
}

/// Component of Hamiltonian degree `d` of `N^{-1}(A)`.
pub fn hamiltonian_principal_symbol(a: &SpinorDiffOp, d: usize) -> Result<SuperPolynomial> {
    let sym = normal_order_inverse(a);
    if let Some(found) = sym.hamiltonian_degree() {
        if found > d {
            return Err(Error::DegreeExceeded { found, limit: d });
        }
    }
    Ok(sym.hamiltonian_component(d))
}

// ---- module actions ------------------------------------------------------

fn check_dims(x: &VectorFieldOnM, f: &SuperPolynomial, sig: Signature) -> Result<()> {
    if x.n() != sig.n() {
        return Err(Error::DimensionMismatch(sig.n(), x.n()));
    }
    if f.n() != sig.n() {
        return Err(Error::DimensionMismatch(sig.n(), f.n()));
    }
    Ok(())
}

/// Tensorial action
/// `X^i d_i F - p_j (d_i X^j) dF/dp_i + xi^i (d_i X^j) dF/dxi^j + (delta - Sigma/n) div X F`.
pub fn act_t(x: &VectorFieldOnM, delta: &Rational, f: &SuperPolynomial, sig: Signature) -> Result<SuperPolynomial> {
    check_dims(x, f, sig)?;
    let n = sig.n();
    let mut out = x.apply(f);
    let fxis: Vec<SuperPolynomial> = (0..n).map(|j| f.dxi(j)).collect();
    for i in 0..n {
        let fp = f.dp(i);
        for (j, fxi) in fxis.iter().enumerate() {
            let dxj = x.component(j).dx(i);
            if dxj.is_zero() {
                continue;
            }
            if !fp.is_zero() {
                out -= &(&(&SuperPolynomial::p(n, j) * &dxj) * &fp);
            }
            if !fxi.is_zero() {
                out += &(&(&SuperPolynomial::xi(n, i) * &dxj) * fxi);
            }
        }
    }
    let div = x.divergence();
    let weighted = &f.scale_rat(delta) - &f.euler_odd().scale_rat(&rat(1, n as i64));
    out += &(&div * &weighted);
    Ok(out)
}

/// Hamiltonian action `X~ F + delta div X F`.
pub fn act_s(x: &VectorFieldOnM, delta: &Rational, f: &SuperPolynomial, sig: Signature) -> Result<SuperPolynomial> {
    check_dims(x, f, sig)?;
    let lift = hamiltonian_lift(x, sig)?;
    let mut out = lift.apply(f);
    out += &(&x.divergence() * f).scale_rat(delta);
    Ok(out)
}

/// `-(h/2) xi_k xi^j (d_i d_j X^k) dF/dp_i`, the difference between the
/// Hamiltonian and tensorial actions.
pub fn hamiltonian_correction(x: &VectorFieldOnM, f: &SuperPolynomial, sig: Signature) -> Result<SuperPolynomial> {
    check_dims(x, f, sig)?;
    let n = sig.n();
    let mut out = SuperPolynomial::zero(n);
    for i in 0..n {
        let fp = f.dp(i);
        if fp.is_zero() {
            continue;
        }
        for k in 0..n {
            let xk = x.component(k).dx(i);
            if xk.is_zero() {
                continue;
            }
            for j in 0..n {
                let second = xk.dx(j);
                if second.is_zero() {
                    continue;
                }
                let xixi = &SuperPolynomial::xi_lower(sig, k) * &SuperPolynomial::xi(n, j);
                out += &(&(&xixi * &second) * &fp);
            }
        }
    }
    Ok(out.scale(&Scalar::h().scale(&rat(-1, 2))))
}

/// `chi^j_i G = xi^j dG/dxi^i - xi_i dG/dxi_j + 1/2 d/dxi_j d/dxi^i G`.
pub fn chi_op(j: usize, i: usize, g: &SuperPolynomial, sig: Signature) -> SuperPolynomial {
    let n = sig.n();
    let gi = g.dxi(i);
    let mut out = &SuperPolynomial::xi(n, j) * &gi;
    let eta_ji = sig.eta(j) * sig.eta(i);
    out -= &(&SuperPolynomial::xi(n, i) * &g.dxi(j)).scale_int(eta_ji);
    out += &gi.dxi(j).scale_rat(&rat(sig.eta(j), 2));
    out
}

/// Operator action transported to symbols:
/// `L^delta F + (h/2)(d_j d_k X^i)(-p_i d_p_j + chi^j_i / 2) d_p_k F - h lambda d_j(div X) d_p_j F`.
pub fn act_d_symbolside(
    x: &VectorFieldOnM,
    lambda: &Rational,
    mu: &Rational,
    f: &SuperPolynomial,
    sig: Signature,
) -> Result<SuperPolynomial> {
    let n = sig.n();
    let delta = mu - lambda;
    let mut out = act_s(x, &delta, f, sig)?;
    let mut corr = SuperPolynomial::zero(n);
    for k in 0..n {
        let fk = f.dp(k);
        if fk.is_zero() {
            continue;
        }
        for j in 0..n {
            for i in 0..n {
                let c = x.component(i).dx(j).dx(k);
                if c.is_zero() {
                    continue;
                }
                let inner = &(&SuperPolynomial::p(n, i) * &fk.dp(j)).scale_int(-1)
                    + &chi_op(j, i, &fk, sig).scale_rat(&rat(1, 2));
                corr += &(&c * &inner);
            }
        }
    }
    out += &corr.scale(&Scalar::h().scale(&rat(1, 2)));
    let div = x.divergence();
    let mut dens = SuperPolynomial::zero(n);
    for j in 0..n {
        let c = div.dx(j);
        if !c.is_zero() {
            dens += &(&c * &f.dp(j));
        }
    }
    out -= &dens.scale(&Scalar::h().scale(lambda));
    Ok(out)
}

/// `sL^mu_X o A - A o sL^lambda_X`.
pub fn act_d_direct(
    x: &VectorFieldOnM,
    lambda: &Rational,
    mu: &Rational,
    a: &SpinorDiffOp,
    sig: Signature,
) -> Result<SpinorDiffOp> {
    if a.sig() != sig {
        return Err(Error::DimensionMismatch(sig.n(), a.n()));
    }
    let left = kosmann_lie(x, sig, mu)?;
    let right = kosmann_lie(x, sig, lambda)?;
    Ok(&left.compose(a)? - &a.compose(&right)?)
}

/// Returns an error unless `X` is conformal for `sig`.
pub fn require_conformal(x: &VectorFieldOnM, sig: Signature) -> Result<()> {
    conformal_killing_factor(x, sig).map(|_| ()).ok_or(Error::NotConformal)
}
