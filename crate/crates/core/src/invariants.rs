//! Canonical invariant symbols, invariance checks and exhaustive searches
//! for conformally invariant symbols and operators.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::coeff::{fmt_rational, rat, Part, Rational, Scalar};
use crate::confmod::{act_d_direct, act_d_symbolside, act_s, act_t, normal_order, SpinorDiffOp, Weights};
use crate::error::{Error, Result};
use crate::linalg::{RowReducer, SparseRow};
use crate::superpoly::{Bidegree, Monomial, Signature, SuperPolynomial};
use crate::symplectic::{conformal_generators, Generator};

/// Which conformal module a candidate lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModuleTag {
    /// Tensorial symbols.
    T,
    /// Hamiltonian symbols.
    S,
    /// Spinor differential operators, through their normal-ordered symbols.
    D,
}

impl fmt::Display for ModuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ModuleTag::T => "T",
            ModuleTag::S => "S",
            ModuleTag::D => "D",
        };
        write!(f, "{s}")
    }
}

impl FromStr for ModuleTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T" | "t" => Ok(ModuleTag::T),
            "S" | "s" => Ok(ModuleTag::S),
            "D" | "d" => Ok(ModuleTag::D),
            other => Err(Error::Unknown { kind: "module", name: other.to_string() }),
        }
    }
}

// ---- canonical symbols ----------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CanonicalName {
    Chi,
    Delta,
    DeltaStarChi,
    R,
}

impl FromStr for CanonicalName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chi" => Ok(CanonicalName::Chi),
            "Delta" => Ok(CanonicalName::Delta),
            "DeltaStarChi" => Ok(CanonicalName::DeltaStarChi),
            "R" => Ok(CanonicalName::R),
            other => Err(Error::Unknown { kind: "canonical symbol", name: other.to_string() }),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CanonicalSymbol {
    pub name: CanonicalName,
    pub poly: SuperPolynomial,
    pub weight: Rational,
}

fn factorial(k: usize) -> i64 {
    (1..=k as i64).product()
}

/// Flat-chart realizations with orientation `eps_{1..n} = +1`:
///
/// * `chi = eps_J xi^J = n! xi^1...xi^n`, weight 0
/// * `Delta = p_i xi^i`, weight 1/n
/// * `R = eta^ij p_i p_j`, weight 2/n
/// * `DeltaStarChi = eta^ij1 eps_{j1..jn} p_i xi^j2...xi^jn`, weight 1/n,
///   normalized so that `Delta * chi = -(n/2) DeltaStarChi` for the star product.
pub fn canonical_symbol(name: CanonicalName, sig: Signature) -> CanonicalSymbol {
    let n = sig.n();
    let full = (1u32 << n) - 1;
    let (poly, weight) = match name {
        CanonicalName::Chi => {
            let mut m = Monomial::one(n);
            m.xi = full;
            (SuperPolynomial::from_term(m, Scalar::int(factorial(n))), Rational::zero())
        }
        CanonicalName::Delta => {
            let mut f = SuperPolynomial::zero(n);
            for i in 0..n {
                f += &(&SuperPolynomial::p(n, i) * &SuperPolynomial::xi(n, i));
            }
            (f, rat(1, n as i64))
        }
        CanonicalName::R => {
            let mut f = SuperPolynomial::zero(n);
            for i in 0..n {
                f += &SuperPolynomial::p(n, i).pow(2).scale_int(sig.eta(i));
            }
            (f, rat(2, n as i64))
        }
        CanonicalName::DeltaStarChi => {
            let mut f = SuperPolynomial::zero(n);
            for i in 0..n {
                let mut m = Monomial::one(n);
                m.p[i] = 1;
                m.xi = full & !(1 << i);
                let sign = if i % 2 == 0 { 1 } else { -1 };
                f.add_term(m, Scalar::int(sign * sig.eta(i) * factorial(n - 1)));
            }
            (f, rat(1, n as i64))
        }
    };
    CanonicalSymbol { name, poly, weight }
}

// ---- invariance checks ----------------------------------------------------

/// Per-generator residuals of a candidate.
#[derive(Clone, Debug)]
pub struct InvariantReport {
    pub module: ModuleTag,
    pub weights: Weights,
    pub residuals: Vec<(String, SuperPolynomial)>,
}

impl InvariantReport {
    pub fn is_invariant(&self) -> bool {
        self.residuals.iter().all(|(_, r)| r.is_zero())
    }

    pub fn failing(&self) -> impl Iterator<Item = &(String, SuperPolynomial)> {
        self.residuals.iter().filter(|(_, r)| !r.is_zero())
    }
}

fn operator_weights(weights: &Weights) -> Result<(Rational, Rational)> {
    weights.validate()?;
    match (&weights.lambda, &weights.mu) {
        (Some(l), Some(m)) => Ok((l.clone(), m.clone())),
        (Some(l), None) => Ok((l.clone(), l + &weights.delta)),
        (None, Some(m)) => Ok((m - &weights.delta, m.clone())),
        (None, None) => Err(Error::InconsistentWeights("module D needs lambda or mu".into())),
    }
}

fn act(
    tag: ModuleTag,
    g: &Generator,
    weights: &Weights,
    lm: &Option<(Rational, Rational)>,
    f: &SuperPolynomial,
    sig: Signature,
) -> Result<SuperPolynomial> {
    match tag {
        ModuleTag::T => act_t(&g.field, &weights.delta, f, sig),
        ModuleTag::S => act_s(&g.field, &weights.delta, f, sig),
        ModuleTag::D => {
            let (l, m) = lm.as_ref().expect("operator weights resolved");
            act_d_symbolside(&g.field, l, m, f, sig)
        }
    }
}

/// Applies every conformal generator and records the residuals.
pub fn check_invariance(
    candidate: &SuperPolynomial,
    tag: ModuleTag,
    weights: &Weights,
    sig: Signature,
) -> Result<InvariantReport> {
    if candidate.n() != sig.n() {
        return Err(Error::DimensionMismatch(sig.n(), candidate.n()));
    }
    let (weights, lm) = resolve(tag, weights)?;
    let mut residuals = Vec::new();
    for g in conformal_generators(sig)? {
        let r = act(tag, &g, &weights, &lm, candidate, sig)?;
        residuals.push((g.name, r));
    }
    Ok(InvariantReport { module: tag, weights, residuals })
}

fn resolve(tag: ModuleTag, weights: &Weights) -> Result<(Weights, Option<(Rational, Rational)>)> {
    weights.validate()?;
    if tag == ModuleTag::D {
        let (l, m) = operator_weights(weights)?;
        Ok((Weights::operator(l.clone(), m.clone()), Some((l, m))))
    } else {
        Ok((weights.clone(), None))
    }
}

/// Operator-side check `sL^mu A - A sL^lambda = 0` for every generator;
/// residuals are reported through their symbols.
pub fn check_operator_invariance(a: &SpinorDiffOp, lambda: &Rational, mu: &Rational) -> Result<InvariantReport> {
    let sig = a.sig();
    let mut residuals = Vec::new();
    for g in conformal_generators(sig)? {
        let r = act_d_direct(&g.field, lambda, mu, a, sig)?;
        residuals.push((g.name, crate::confmod::normal_order_inverse(&r)));
    }
    Ok(InvariantReport { module: ModuleTag::D, weights: Weights::operator(lambda.clone(), mu.clone()), residuals })
}

// ---- search ---------------------------------------------------------------

/// Exact basis of the invariant subspace of a bidegree.
#[derive(Clone, Debug)]
pub struct SearchResult {
    pub sig: Signature,
    pub bidegree: Bidegree,
    pub module: ModuleTag,
    pub weights: Weights,
    pub basis: Vec<SuperPolynomial>,
}

impl SearchResult {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn to_json(&self) -> Result<serde_json::Value> {
        let mut w = serde_json::Map::new();
        w.insert("delta".into(), fmt_rational(&self.weights.delta).into());
        if let Some(l) = &self.weights.lambda {
            w.insert("lambda".into(), fmt_rational(l).into());
        }
        if let Some(m) = &self.weights.mu {
            w.insert("mu".into(), fmt_rational(m).into());
        }
        let basis: Result<Vec<_>> = self.basis.iter().map(SuperPolynomial::to_json).collect();
        Ok(serde_json::json!({
            "signature": [self.sig.p, self.sig.q],
            "bidegree": [self.bidegree.k, self.bidegree.kappa],
            "module": self.module.to_string(),
            "weights": w,
            "dimension": self.dimension(),
            "basis": basis?,
        }))
    }
}

/// All `p^alpha xi^I` with `|alpha| = k`, `|I| = kappa`, times `x^beta`
/// with `|beta| <= max_x`.
pub fn ansatz_monomials(n: usize, k: usize, kappa: usize, max_x: usize) -> Vec<Monomial> {
    let masks: Vec<u32> = (0..(1u32 << n)).filter(|m| m.count_ones() as usize == kappa).collect();
    let xs: Vec<Vec<u32>> = (0..=max_x).flat_map(|d| compositions(n, d)).collect();
    let mut out = Vec::new();
    for x in &xs {
        for p in compositions(n, k) {
            for &xi in &masks {
                out.push(Monomial { x: x.clone(), p: p.clone(), xi });
            }
        }
    }
    out.sort();
    out
}

/// Exponent vectors of length `n` summing to `d`.
fn compositions(n: usize, d: usize) -> Vec<Vec<u32>> {
    if n == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in compositions(n - 1, d - first) {
            rest.insert(0, first as u32);
            out.push(rest);
        }
    }
    out
}

/// Searches constant-coefficient invariants of bidegree `(k, kappa)`.
pub fn search_invariants(
    sig: Signature,
    k: usize,
    kappa: usize,
    tag: ModuleTag,
    weights: &Weights,
) -> Result<SearchResult> {
    search_invariants_with(sig, k, kappa, tag, weights, 0)
}

/// As [`search_invariants`], allowing coefficients polynomial in `x` of
/// degree at most `max_x`.
pub fn search_invariants_with(
    sig: Signature,
    k: usize,
    kappa: usize,
    tag: ModuleTag,
    weights: &Weights,
    max_x: usize,
) -> Result<SearchResult> {
    let n = sig.n();
    if kappa > n {
        return Err(Error::BadXiDegree(kappa));
    }
    let (weights, lm) = resolve(tag, weights)?;
    let unknowns = ansatz_monomials(n, k, kappa, max_x);
    let gens = conformal_generators(sig)?;
    let mut red = RowReducer::new(unknowns.len());
    for g in &gens {
        // equations: coefficient of each (monomial, h power, part) in the residual
        let mut rows: BTreeMap<(Monomial, i32, Part), SparseRow> = BTreeMap::new();
        for (u, mono) in unknowns.iter().enumerate() {
            let f = SuperPolynomial::from_term(mono.clone(), Scalar::one());
            let r = act(tag, g, &weights, &lm, &f, sig)?;
            for (m, c) in r.terms() {
                for (hpow, part, q) in c.terms() {
                    rows.entry((m.clone(), hpow, part)).or_default().insert(u, q.clone());
                }
            }
        }
        for row in rows.into_values() {
            red.push(row);
            if red.rank() == unknowns.len() {
                break;
            }
        }
        if red.rank() == unknowns.len() {
            break;
        }
    }
    let basis = red
        .kernel()
        .into_iter()
        .map(|v| {
            let mut f = SuperPolynomial::zero(n);
            for (u, q) in v.into_iter().enumerate() {
                if !q.is_zero() {
                    f.add_term(unknowns[u].clone(), Scalar::rational(q));
                }
            }
            f
        })
        .collect();
    Ok(SearchResult { sig, bidegree: Bidegree::new(k, kappa), module: tag, weights, basis })
}

// ---- Dirac powers ---------------------------------------------------------

#[derive(Clone, Debug)]
pub struct DiracPower {
    pub s: usize,
    pub op: SpinorDiffOp,
    pub lambda: Rational,
    pub mu: Rational,
}

/// Resonant weights `((n-2s-1)/2n, (n+2s+1)/2n)` of `N(Delta R^s)`.
pub fn dirac_weights(s: usize, n: usize) -> (Rational, Rational) {
    let (n, s) = (n as i64, s as i64);
    (rat(n - 2 * s - 1, 2 * n), rat(n + 2 * s + 1, 2 * n))
}

/// `N(Delta R^s)`; for `s = 0` this is `h` times the Dirac operator.
pub fn dirac_power(s: usize, sig: Signature) -> Result<DiracPower> {
    let n = sig.n();
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    let delta = canonical_symbol(CanonicalName::Delta, sig).poly;
    let r = canonical_symbol(CanonicalName::R, sig).poly;
    let symbol = &delta * &r.pow(s as u32);
    let (lambda, mu) = dirac_weights(s, n);
    Ok(DiracPower { s, op: normal_order(&symbol, sig)?, lambda, mu })
}

// ---- predicted classification ---------------------------------------------

/// Which family list a predicted dimension is read from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    /// The published list: in module D, `(Delta * chi) R^s` only for `s = 0`.
    Published,
    /// `(Delta * chi) R^s` is a D-invariant at the same `lambda` as
    /// `Delta R^s`, being `N(chi)` composed with `N(Delta R^s)`.
    Corrected,
}

/// Dimension of the invariant space of constant-coefficient candidates
/// predicted by the classification.
///
/// Families, with `(k, kappa)` and weight `delta`:
/// `R^s` (2s, 0), `Delta R^s` (2s+1, 1), `chi R^s` (2s, n),
/// `(Delta * chi) R^s` (2s+1, n-1), all with `delta = k/n`.
/// Module T contains all of them and S all but `R^s` for `s >= 1`.
/// Module D contains `1` and `chi` at `lambda = mu`, and `Delta R^s` at
/// `lambda = (n-2s-1)/2n`; see [`Classification`] for `(Delta * chi) R^s`.
pub fn predicted_dimension(
    n: usize,
    k: usize,
    kappa: usize,
    tag: ModuleTag,
    weights: &Weights,
    list: Classification,
) -> Result<usize> {
    let (weights, lm) = resolve(tag, weights)?;
    if weights.delta != rat(k as i64, n as i64) {
        return Ok(0);
    }
    let mut families: Vec<(&str, usize, usize, usize)> = Vec::new();
    for s in 0..=k / 2 {
        families.push(("R", s, 2 * s, 0));
        families.push(("DR", s, 2 * s + 1, 1));
        families.push(("chiR", s, 2 * s, n));
        families.push(("DchiR", s, 2 * s + 1, n - 1));
    }
    let count = families
        .into_iter()
        .filter(|&(_, _, fk, fkappa)| fk == k && fkappa == kappa)
        .filter(|&(name, s, _, _)| match tag {
            ModuleTag::T => true,
            ModuleTag::S => !(name == "R" && s >= 1),
            ModuleTag::D => {
                let (l, m) = lm.as_ref().expect("resolved");
                match (name, s) {
                    ("R", 0) | ("chiR", 0) => l == m,
                    ("DR", s) => *l == dirac_weights(s, n).0,
                    ("DchiR", s) if s == 0 || list == Classification::Corrected => *l == dirac_weights(s, n).0,
                    _ => false,
                }
            }
        })
        .count();
    Ok(count)
}

/// `lambda` test values for an operator search at bidegree `(k, kappa)`:
/// every resonant value that could apply plus a generic one.
pub fn test_lambdas(n: usize, k: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(), rat(1, 7)];
    for s in 0..=k / 2 + 1 {
        out.push(dirac_weights(s, n).0);
    }
    out.sort();
    out.dedup();
    out
}

impl fmt::Display for InvariantReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, r) in &self.residuals {
            if r.is_zero() {
                writeln!(f, "{name}: 0")?;
            } else {
                writeln!(f, "{name}: {r}")?;
            }
        }
        write!(f, "{}", if self.is_invariant() { "invariant" } else { "not invariant" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::star;
    use crate::symplectic::generator_by_name;

    fn sp(text: &str, n: usize) -> SuperPolynomial {
        SuperPolynomial::parse(text, n).unwrap()
    }

    #[test]
    fn canonical_examples() {
        let e = Signature::euclidean(2);
        assert_eq!(canonical_symbol(CanonicalName::Chi, e).poly, sp("2*xi1*xi2", 2));
        assert_eq!(canonical_symbol(CanonicalName::Delta, e).poly, sp("p1*xi1 + p2*xi2", 2));
        for sig in [e, Signature::euclidean(4), Signature::new(3, 1).unwrap(), Signature::new(2, 1).unwrap()] {
            let n = sig.n() as i64;
            let d = canonical_symbol(CanonicalName::Delta, sig).poly;
            let chi = canonical_symbol(CanonicalName::Chi, sig).poly;
            let dc = canonical_symbol(CanonicalName::DeltaStarChi, sig).poly;
            assert_eq!(star(&d, &chi, sig).unwrap(), dc.scale_rat(&rat(-n, 2)));
        }
        assert!("chi2".parse::<CanonicalName>().is_err());
    }

    #[test]
    fn check_examples() {
        for n in [2, 4] {
            let sig = Signature::euclidean(n);
            let d = canonical_symbol(CanonicalName::Delta, sig);
            let rep = check_invariance(&d.poly, ModuleTag::S, &Weights::symbol(d.weight.clone()), sig).unwrap();
            assert!(rep.is_invariant());
        }
        let e = Signature::euclidean(2);
        let r = canonical_symbol(CanonicalName::R, e).poly;
        let rep = check_invariance(&r, ModuleTag::S, &Weights::symbol(rat(1, 1)), e).unwrap();
        assert!(!rep.is_invariant());
        let k1 = rep.residuals.iter().find(|(n, _)| n == "K1").unwrap();
        assert_eq!(k1.1, sp("-4*h*xi1*(p1*xi1 + p2*xi2)", 2));
        let sig = Signature::euclidean(4);
        let dr = &canonical_symbol(CanonicalName::Delta, sig).poly * &canonical_symbol(CanonicalName::R, sig).poly;
        let rep = check_invariance(&dr, ModuleTag::D, &Weights::operator(rat(1, 8), rat(7, 8)), sig).unwrap();
        assert!(rep.is_invariant());
        assert!(check_invariance(
            &dr,
            ModuleTag::D,
            &Weights { delta: rat(1, 2), lambda: Some(rat(1, 8)), mu: Some(rat(7, 8)) },
            sig
        )
        .is_err());
    }

    #[test]
    fn inversion_on_powers_of_r() {
        for sig in [Signature::euclidean(2), Signature::euclidean(4), Signature::new(3, 1).unwrap()] {
            let n = sig.n();
            let ni = n as i64;
            let delta = canonical_symbol(CanonicalName::Delta, sig).poly;
            let r = canonical_symbol(CanonicalName::R, sig).poly;
            for s in 1..=2u32 {
                for lambda in [rat(0, 1), rat(1, 3)] {
                    let mu = &lambda + &rat(2 * s as i64, ni);
                    for i in 0..n {
                        let k = generator_by_name(sig, &format!("K{}", i + 1)).unwrap();
                        let got = act_d_symbolside(&k, &lambda, &mu, &r.pow(s), sig).unwrap();
                        let coef = &lambda * &rat(2 * ni, 1) + rat(2 * s as i64 - ni, 1);
                        let pi = SuperPolynomial::p(n, i).scale_rat(&coef);
                        let xid = (&SuperPolynomial::xi_lower(sig, i) * &delta).scale_int(2);
                        let expect = (&(&pi - &xid) * &r.pow(s - 1)).scale(&Scalar::h().scale(&rat(2 * s as i64, 1)));
                        assert_eq!(got, expect);
                    }
                }
            }
        }
    }

    #[test]
    fn inversion_on_delta_r() {
        for sig in [Signature::euclidean(2), Signature::euclidean(4), Signature::new(3, 1).unwrap()] {
            let n = sig.n();
            let ni = n as i64;
            let delta = canonical_symbol(CanonicalName::Delta, sig).poly;
            let r = canonical_symbol(CanonicalName::R, sig).poly;
            for s in 0..=2u32 {
                let lambda = rat(1, 5);
                let mu = &lambda + &rat(2 * s as i64 + 1, ni);
                let f = &delta * &r.pow(s);
                for i in 0..n {
                    let k = generator_by_name(sig, &format!("K{}", i + 1)).unwrap();
                    let got = act_d_symbolside(&k, &lambda, &mu, &f, sig).unwrap();
                    let coef = rat(2 * s as i64 + 1 - ni, 1) + &lambda * &rat(2 * ni, 1);
                    let mut inner = &SuperPolynomial::xi_lower(sig, i) * &r.pow(s);
                    if s > 0 {
                        inner += &(&(&SuperPolynomial::p(n, i) * &delta) * &r.pow(s - 1)).scale_int(2 * s as i64);
                    }
                    assert_eq!(got, inner.scale(&Scalar::h().scale(&coef)));
                }
            }
        }
    }

    #[test]
    fn search_examples() {
        let e = Signature::euclidean(2);
        let res = search_invariants(e, 1, 1, ModuleTag::S, &Weights::symbol(rat(1, 2))).unwrap();
        assert_eq!(res.dimension(), 2);
        for d in [rat(0, 1), rat(1, 2), rat(1, 3)] {
            assert_eq!(search_invariants(e, 1, 0, ModuleTag::S, &Weights::symbol(d)).unwrap().dimension(), 0);
        }
        let sig = Signature::euclidean(4);
        let res = search_invariants(sig, 0, 4, ModuleTag::D, &Weights::operator(rat(1, 3), rat(1, 3))).unwrap();
        assert_eq!(res.dimension(), 1);
        assert_eq!(res.basis[0], sp("xi1*xi2*xi3*xi4", 4));
    }

    #[test]
    fn x_dependent_ansatz_adds_nothing() {
        let e = Signature::euclidean(2);
        for (k, kappa, tag, w) in [
            (1, 1, ModuleTag::S, Weights::symbol(rat(1, 2))),
            (2, 0, ModuleTag::T, Weights::symbol(rat(1, 1))),
            (1, 1, ModuleTag::D, Weights::operator(rat(1, 4), rat(3, 4))),
        ] {
            let a = search_invariants(e, k, kappa, tag, &w).unwrap();
            let b = search_invariants_with(e, k, kappa, tag, &w, 2).unwrap();
            assert_eq!(a.basis, b.basis);
        }
    }

    #[test]
    fn weight_rigidity() {
        for n in [2usize, 4] {
            let sig = Signature::euclidean(n);
            let d = canonical_symbol(CanonicalName::Delta, sig).poly;
            for delta in [rat(0, 1), rat(1, 3), rat(1, n as i64) + rat(1, 100)] {
                let rep = check_invariance(&d, ModuleTag::S, &Weights::symbol(delta.clone()), sig).unwrap();
                let dil = &rep.residuals.iter().find(|(n, _)| n == "D").unwrap().1;
                let factor = &delta * &rat(n as i64, 1) - rat(1, 1);
                assert_eq!(dil, &d.scale_rat(&factor));
            }
        }
    }

    #[test]
    fn dirac_powers() {
        let e = Signature::euclidean(2);
        let d0 = dirac_power(0, e).unwrap();
        assert_eq!((d0.lambda.clone(), d0.mu.clone()), (rat(1, 4), rat(3, 4)));
        assert_eq!(d0.op.render(false), "h*c1*d1 + h*c2*d2");
        let d1 = dirac_power(1, Signature::euclidean(4)).unwrap();
        assert_eq!((d1.lambda.clone(), d1.mu.clone()), (rat(1, 8), rat(7, 8)));
        assert!(dirac_power(0, Signature::euclidean(3)).is_err());
        for sig in [e, Signature::new(1, 1).unwrap()] {
            for s in 0..=1 {
                let d = dirac_power(s, sig).unwrap();
                assert!(check_operator_invariance(&d.op, &d.lambda, &d.mu).unwrap().is_invariant());
            }
        }
    }

    #[test]
    fn search_result_json() {
        let e = Signature::euclidean(2);
        let res = search_invariants(e, 1, 1, ModuleTag::S, &Weights::symbol(rat(1, 2))).unwrap();
        let v = res.to_json().unwrap();
        assert_eq!(v["dimension"], 2);
        assert_eq!(v["weights"]["delta"], "1/2");
        assert_eq!(v["signature"], serde_json::json!([2, 0]));
        let b = SuperPolynomial::from_json(&v["basis"][0]).unwrap();
        assert_eq!(b, res.basis[0]);
    }
}
