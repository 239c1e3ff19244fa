//! Graded Poisson structure in flat Darboux coordinates, conformal vector
//! fields, their Hamiltonian lifts and the comoment maps.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::coeff::{rat, Scalar};
use crate::error::{Error, Result};
use crate::superpoly::{mask_indices, Parity, Signature, SuperPolynomial, Var};

/// Graded Poisson bracket
/// `{F,G} = dF/dp_i dG/dx^i - dF/dx^i dG/dp_i + (1/h)(-1)^|F| eta^ab dF/dxi^a dG/dxi^b`.
///
/// Normalized so that `{p_i, x^j} = delta_i^j` and `{xi^a, xi^b} = -eta^ab / h`.
pub fn poisson(f: &SuperPolynomial, g: &SuperPolynomial, sig: Signature) -> Result<SuperPolynomial> {
    let n = f.n();
    if g.n() != n {
        return Err(Error::DimensionMismatch(n, g.n()));
    }
    if sig.n() != n {
        return Err(Error::DimensionMismatch(sig.n(), n));
    }
    let parity = f.parity().ok_or(Error::NotHomogeneous)?;
    let mut out = SuperPolynomial::zero(n);
    for i in 0..n {
        out += &(&f.dp(i) * &g.dx(i));
        out -= &(&f.dx(i) * &g.dp(i));
    }
    let mut odd = SuperPolynomial::zero(n);
    for a in 0..n {
        let fa = f.dxi(a);
        if fa.is_zero() {
            continue;
        }
        let term = &fa * &g.dxi(a);
        odd += &term.scale_int(sig.eta(a));
    }
    let sign = if parity.is_odd() { -1 } else { 1 };
    out += &odd.scale(&Scalar::frac(sign, 1).shift_h(-1));
    Ok(out)
}

// ---- vector fields -------------------------------------------------------

/// Polynomial vector field `X^i d_i` on the base.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorFieldOnM {
    comps: Vec<SuperPolynomial>,
}

impl VectorFieldOnM {
    pub fn new(comps: Vec<SuperPolynomial>) -> Result<Self> {
        let n = comps.len();
        if n == 0 {
            return Err(Error::InvalidArgument("vector field needs at least one component".into()));
        }
        for c in &comps {
            if c.n() != n {
                return Err(Error::DimensionMismatch(n, c.n()));
            }
            if !c.is_x_only() {
                return Err(Error::InvalidArgument("vector field components must depend on x only".into()));
            }
        }
        Ok(VectorFieldOnM { comps })
    }

    pub fn zero(n: usize) -> Self {
        VectorFieldOnM { comps: vec![SuperPolynomial::zero(n); n] }
    }

    pub fn n(&self) -> usize {
        self.comps.len()
    }

    pub fn component(&self, i: usize) -> &SuperPolynomial {
        &self.comps[i]
    }

    pub fn components(&self) -> &[SuperPolynomial] {
        &self.comps
    }

    /// Lowered component `X_i = eta_ii X^i`.
    pub fn lowered(&self, sig: Signature, i: usize) -> SuperPolynomial {
        self.comps[i].scale_int(sig.eta(i))
    }

    pub fn divergence(&self) -> SuperPolynomial {
        let mut out = SuperPolynomial::zero(self.n());
        for (i, c) in self.comps.iter().enumerate() {
            out += &c.dx(i);
        }
        out
    }

    /// `X^i dF/dx^i`.
    pub fn apply(&self, f: &SuperPolynomial) -> SuperPolynomial {
        let mut out = SuperPolynomial::zero(self.n());
        for (i, c) in self.comps.iter().enumerate() {
            if !c.is_zero() {
                out += &(c * &f.dx(i));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(SuperPolynomial::is_zero)
    }

    pub fn scale(&self, c: &Scalar) -> VectorFieldOnM {
        VectorFieldOnM { comps: self.comps.iter().map(|p| p.scale(c)).collect() }
    }

    /// The operator `X^i d/dx^i`.
    pub fn to_operator(&self) -> SuperDiffOp {
        let n = self.n();
        let mut op = SuperDiffOp::zero(n);
        for (i, c) in self.comps.iter().enumerate() {
            op.add_term(DiffKey::dx(n, i, 1), c.clone());
        }
        op
    }
}

impl Add for &VectorFieldOnM {
    type Output = VectorFieldOnM;
    fn add(self, rhs: &VectorFieldOnM) -> VectorFieldOnM {
        VectorFieldOnM { comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &VectorFieldOnM {
    type Output = VectorFieldOnM;
    fn sub(self, rhs: &VectorFieldOnM) -> VectorFieldOnM {
        VectorFieldOnM { comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a - b).collect() }
    }
}

impl fmt::Display for VectorFieldOnM {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .comps
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| if c.len() > 1 { format!("({c})*d{}", i + 1) } else { format!("{c}*d{}", i + 1) })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl fmt::Debug for VectorFieldOnM {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorFieldOnM({self})")
    }
}

/// Lie bracket `[X,Y]^i = X^j d_j Y^i - Y^j d_j X^i`.
pub fn vf_bracket(x: &VectorFieldOnM, y: &VectorFieldOnM) -> Result<VectorFieldOnM> {
    if x.n() != y.n() {
        return Err(Error::DimensionMismatch(x.n(), y.n()));
    }
    let comps = (0..x.n()).map(|i| &x.apply(&y.comps[i]) - &y.apply(&x.comps[i])).collect();
    Ok(VectorFieldOnM { comps })
}

/// A named conformal generator.
#[derive(Clone, Debug)]
pub struct Generator {
    pub name: String,
    pub field: VectorFieldOnM,
}

/// Translations `T1..Tn`, rotations `Rij` (i<j), homothety `D` and
/// inversions `K1..Kn`; `(n+1)(n+2)/2` fields in total.
pub fn conformal_generators(sig: Signature) -> Result<Vec<Generator>> {
    let n = sig.n();
    if n < 2 {
        return Err(Error::InvalidArgument(format!("conformal generators need n >= 2, got {n}")));
    }
    let x = |i: usize| SuperPolynomial::x(n, i);
    let xl = |i: usize| SuperPolynomial::x_lower(sig, i);
    let mut out = Vec::new();
    for a in 0..n {
        let mut comps = vec![SuperPolynomial::zero(n); n];
        comps[a] = SuperPolynomial::one(n);
        out.push(Generator { name: format!("T{}", a + 1), field: VectorFieldOnM { comps } });
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut comps = vec![SuperPolynomial::zero(n); n];
            comps[j] = xl(i);
            comps[i] = -xl(j);
            out.push(Generator { name: format!("R{}{}", i + 1, j + 1), field: VectorFieldOnM { comps } });
        }
    }
    out.push(Generator { name: "D".into(), field: VectorFieldOnM { comps: (0..n).map(x).collect() } });
    let mut square = SuperPolynomial::zero(n);
    for j in 0..n {
        square += &(&x(j) * &xl(j));
    }
    for a in 0..n {
        let comps = (0..n)
            .map(|k| {
                let mut c = (&xl(a) * &x(k)).scale_int(-2);
                if k == a {
                    c += &square;
                }
                c
            })
            .collect();
        out.push(Generator { name: format!("K{}", a + 1), field: VectorFieldOnM { comps } });
    }
    Ok(out)
}

pub fn generator_by_name(sig: Signature, name: &str) -> Result<VectorFieldOnM> {
    conformal_generators(sig)?
        .into_iter()
        .find(|g| g.name == name)
        .map(|g| g.field)
        .ok_or_else(|| Error::Unknown { kind: "generator", name: name.to_string() })
}

/// `lambda` with `L_X eta = lambda eta`, or `None` if `X` is not conformal.
pub fn conformal_killing_factor(x: &VectorFieldOnM, sig: Signature) -> Option<SuperPolynomial> {
    let n = x.n();
    if sig.n() != n {
        return None;
    }
    // L_X eta_ij = eta_jj d_i X^j + eta_ii d_j X^i
    let lie = |i: usize, j: usize| &x.comps[j].dx(i).scale_int(sig.eta(j)) + &x.comps[i].dx(j).scale_int(sig.eta(i));
    let lambda = lie(0, 0).scale_int(sig.eta(0));
    for i in 0..n {
        for j in 0..n {
            let expect = if i == j { lambda.scale_int(sig.eta(i)) } else { SuperPolynomial::zero(n) };
            if lie(i, j) != expect {
                return None;
            }
        }
    }
    Some(lambda)
}

fn require_conformal(x: &VectorFieldOnM, sig: Signature) -> Result<()> {
    if sig.n() != x.n() {
        return Err(Error::DimensionMismatch(sig.n(), x.n()));
    }
    conformal_killing_factor(x, sig).map(|_| ()).ok_or(Error::NotConformal)
}

/// Skew part `omega_kj = (d_k X_j - d_j X_k) / 2` of the lowered Jacobian.
pub fn skew_jacobian(x: &VectorFieldOnM, sig: Signature, k: usize, j: usize) -> SuperPolynomial {
    (&x.lowered(sig, j).dx(k) - &x.lowered(sig, k).dx(j)).scale(&Scalar::frac(1, 2))
}

// ---- differential operators ----------------------------------------------

/// Derivative part of an operator term: `d_x^dx d_p^dp d_xi^S`, with the odd
/// derivatives composed in ascending order (the largest index acts first).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiffKey {
    pub dx: Vec<u32>,
    pub dp: Vec<u32>,
    pub dxi: u32,
}

impl DiffKey {
    pub fn identity(n: usize) -> Self {
        DiffKey { dx: vec![0; n], dp: vec![0; n], dxi: 0 }
    }

    pub fn dx(n: usize, i: usize, k: u32) -> Self {
        let mut d = DiffKey::identity(n);
        d.dx[i] = k;
        d
    }

    pub fn dp(n: usize, i: usize, k: u32) -> Self {
        let mut d = DiffKey::identity(n);
        d.dp[i] = k;
        d
    }

    pub fn dxi(n: usize, i: usize) -> Self {
        let mut d = DiffKey::identity(n);
        d.dxi = 1 << i;
        d
    }

    pub fn order(&self) -> usize {
        self.dx.iter().chain(&self.dp).map(|&e| e as usize).sum::<usize>() + self.dxi.count_ones() as usize
    }

    pub fn parity(&self) -> Parity {
        Parity::of_degree(self.dxi.count_ones() as usize)
    }

    /// Applies the derivatives to `f`.
    pub fn apply(&self, f: &SuperPolynomial) -> SuperPolynomial {
        let mut g = f.clone();
        for (i, &e) in self.dx.iter().enumerate() {
            for _ in 0..e {
                g = g.dx(i);
            }
        }
        for (i, &e) in self.dp.iter().enumerate() {
            for _ in 0..e {
                g = g.dp(i);
            }
        }
        let odd: Vec<usize> = mask_indices(self.dxi).collect();
        for &i in odd.iter().rev() {
            g = g.dxi(i);
        }
        g
    }

    /// `d_v o self`, with its sign, or `None` if it vanishes.
    fn prepend(&self, v: Var) -> Option<(i64, DiffKey)> {
        let mut out = self.clone();
        match v {
            Var::X(i) => out.dx[i] += 1,
            Var::P(i) => out.dp[i] += 1,
            Var::Xi(i) => {
                if self.dxi & (1 << i) != 0 {
                    return None;
                }
                let below = (self.dxi & ((1u32 << i) - 1)).count_ones();
                out.dxi |= 1 << i;
                return Some((if below.is_multiple_of(2) { 1 } else { -1 }, out));
            }
        }
        Some((1, out))
    }

    fn factors(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (block, name) in [(&self.dx, "dx"), (&self.dp, "dp")] {
            for (i, &e) in block.iter().enumerate() {
                match e {
                    0 => {}
                    1 => out.push(format!("{name}{}", i + 1)),
                    _ => out.push(format!("{name}{}^{e}", i + 1)),
                }
            }
        }
        for i in mask_indices(self.dxi) {
            out.push(format!("dxi{}", i + 1));
        }
        out
    }
}

/// Differential operator `sum c(x,p,xi) d_x^a d_p^b d_xi^S` acting on
/// [`SuperPolynomial`], coefficients multiplied on the left.
#[derive(Clone, PartialEq, Eq)]
pub struct SuperDiffOp {
    n: usize,
    terms: BTreeMap<DiffKey, SuperPolynomial>,
}

impl SuperDiffOp {
    pub fn zero(n: usize) -> Self {
        SuperDiffOp { n, terms: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        SuperDiffOp::multiplication(SuperPolynomial::one(n))
    }

    /// Left multiplication by `c`.
    pub fn multiplication(c: SuperPolynomial) -> Self {
        let mut op = SuperDiffOp::zero(c.n());
        op.add_term(DiffKey::identity(c.n()), c);
        op
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DiffKey, &SuperPolynomial)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, key: DiffKey, c: SuperPolynomial) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn order(&self) -> usize {
        self.terms.keys().map(DiffKey::order).max().unwrap_or(0)
    }

    pub fn is_first_order(&self) -> bool {
        self.order() <= 1
    }

    /// Parity if every term has the same one.
    pub fn parity(&self) -> Option<Parity> {
        let mut out: Option<Parity> = None;
        for (k, c) in &self.terms {
            for (m, _) in c.terms() {
                let p = Parity::of_degree(m.xi_degree() + k.dxi.count_ones() as usize);
                match out {
                    None => out = Some(p),
                    Some(q) if q != p => return None,
                    _ => {}
                }
            }
        }
        Some(out.unwrap_or(Parity::Even))
    }

    pub fn apply(&self, f: &SuperPolynomial) -> SuperPolynomial {
        let mut out = SuperPolynomial::zero(self.n);
        for (k, c) in &self.terms {
            let g = k.apply(f);
            if !g.is_zero() {
                out += &(c * &g);
            }
        }
        out
    }

    /// `d_v o self` expanded by the graded Leibniz rule.
    fn prepend(&self, v: Var) -> SuperDiffOp {
        let mut out = SuperDiffOp::zero(self.n);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.derive(v));
            if let Some((sign, nk)) = k.prepend(v) {
                if v.is_odd() {
                    for (m, cm) in c.terms() {
                        let s = if m.parity().is_odd() { -sign } else { sign };
                        out.add_term(nk.clone(), SuperPolynomial::from_term(m.clone(), cm.clone()).scale_int(s));
                    }
                } else {
                    out.add_term(nk, c.clone());
                }
            }
        }
        out
    }

    pub fn compose(&self, other: &SuperDiffOp) -> Result<SuperDiffOp> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let mut out = SuperDiffOp::zero(self.n);
        for (k, c) in &self.terms {
            let mut acc = other.clone();
            for i in mask_indices(k.dxi).collect::<Vec<_>>().into_iter().rev() {
                acc = acc.prepend(Var::Xi(i));
            }
            for (i, &e) in k.dp.iter().enumerate() {
                for _ in 0..e {
                    acc = acc.prepend(Var::P(i));
                }
            }
            for (i, &e) in k.dx.iter().enumerate() {
                for _ in 0..e {
                    acc = acc.prepend(Var::X(i));
                }
            }
            for (k2, c2) in acc.terms {
                out.add_term(k2, c * &c2);
            }
        }
        Ok(out)
    }

    /// `A o B - (-1)^(|A||B|) B o A` for parity-homogeneous operators.
    pub fn graded_commutator(&self, other: &SuperDiffOp) -> Result<SuperDiffOp> {
        let pa = self.parity().ok_or(Error::NotHomogeneous)?;
        let pb = other.parity().ok_or(Error::NotHomogeneous)?;
        let ab = self.compose(other)?;
        let ba = other.compose(self)?;
        Ok(&ab - &ba.scale(&Scalar::int(pa.koszul(pb))))
    }

    pub fn scale(&self, c: &Scalar) -> SuperDiffOp {
        let mut out = SuperDiffOp::zero(self.n);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v.scale(c));
        }
        out
    }
}

impl Add for &SuperDiffOp {
    type Output = SuperDiffOp;
    fn add(self, rhs: &SuperDiffOp) -> SuperDiffOp {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }
}

impl Sub for &SuperDiffOp {
    type Output = SuperDiffOp;
    fn sub(self, rhs: &SuperDiffOp) -> SuperDiffOp {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(k.clone(), -v);
        }
        out
    }
}

impl Neg for &SuperDiffOp {
    type Output = SuperDiffOp;
    fn neg(self) -> SuperDiffOp {
        self.scale(&Scalar::int(-1))
    }
}

impl fmt::Display for SuperDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let mut factors = vec![format!("({c})")];
                factors.extend(k.factors());
                factors.join("*")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for SuperDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SuperDiffOp[n={}]({self})", self.n)
    }
}

/// `<D, alpha> = p_i D(x^i) + (h/2) eta_ab xi^a D(xi^b)`.
pub fn pair_alpha(d: &SuperDiffOp, sig: Signature) -> Result<SuperPolynomial> {
    if !d.is_first_order() {
        return Err(Error::NotFirstOrder);
    }
    let n = d.n();
    let mut out = SuperPolynomial::zero(n);
    for i in 0..n {
        out += &(&SuperPolynomial::p(n, i) * &d.apply(&SuperPolynomial::x(n, i)));
    }
    let mut odd = SuperPolynomial::zero(n);
    for a in 0..n {
        odd += &(&SuperPolynomial::xi_lower(sig, a) * &d.apply(&SuperPolynomial::xi(n, a)));
    }
    out += &odd.scale(&Scalar::h().scale(&rat(1, 2)));
    Ok(out)
}

/// `<D, beta> = eta_ij xi^i D(x^j)`.
pub fn pair_beta(d: &SuperDiffOp, sig: Signature) -> Result<SuperPolynomial> {
    if !d.is_first_order() {
        return Err(Error::NotFirstOrder);
    }
    let n = d.n();
    let mut out = SuperPolynomial::zero(n);
    for i in 0..n {
        out += &(&SuperPolynomial::xi_lower(sig, i) * &d.apply(&SuperPolynomial::x(n, i)));
    }
    Ok(out)
}

/// Hamiltonian lift
/// `X^i d_i + xi^l omega_lk eta^kk d_xi^k - p_j (d_i X^j) d_p_i - (h/2) xi^a xi^l (d_i d_l X_a) d_p_i`
/// with `omega_lk = (d_l X_k - d_k X_l) / 2`.
pub fn hamiltonian_lift(x: &VectorFieldOnM, sig: Signature) -> Result<SuperDiffOp> {
    require_conformal(x, sig)?;
    let n = x.n();
    let mut op = x.to_operator();
    for k in 0..n {
        let mut c = SuperPolynomial::zero(n);
        for l in 0..n {
            let w = skew_jacobian(x, sig, l, k);
            if !w.is_zero() {
                c += &(&SuperPolynomial::xi(n, l) * &w);
            }
        }
        op.add_term(DiffKey::dxi(n, k), c.scale_int(sig.eta(k)));
    }
    let half_h = Scalar::h().scale(&rat(-1, 2));
    for i in 0..n {
        let mut c = SuperPolynomial::zero(n);
        for j in 0..n {
            c -= &(&SuperPolynomial::p(n, j) * &x.comps[j].dx(i));
        }
        for a in 0..n {
            let xa = x.lowered(sig, a).dx(i);
            if xa.is_zero() {
                continue;
            }
            for l in 0..n {
                let second = xa.dx(l);
                if second.is_zero() {
                    continue;
                }
                let xixi = &SuperPolynomial::xi(n, a) * &SuperPolynomial::xi(n, l);
                c += &(&xixi * &second).scale(&half_h);
            }
        }
        op.add_term(DiffKey::dp(n, i, 1), c);
    }
    Ok(op)
}

/// Even comoment `p_i X^i + (h/2) xi^j xi^k omega_kj`.
pub fn comoment_even(x: &VectorFieldOnM, sig: Signature) -> Result<SuperPolynomial> {
    require_conformal(x, sig)?;
    let n = x.n();
    let mut out = SuperPolynomial::zero(n);
    for i in 0..n {
        out += &(&SuperPolynomial::p(n, i) * &x.comps[i]);
    }
    let mut spin = SuperPolynomial::zero(n);
    for j in 0..n {
        for k in 0..n {
            let w = skew_jacobian(x, sig, k, j);
            if !w.is_zero() {
                spin += &(&(&SuperPolynomial::xi(n, j) * &SuperPolynomial::xi(n, k)) * &w);
            }
        }
    }
    out += &spin.scale(&Scalar::h().scale(&rat(1, 2)));
    Ok(out)
}

/// Odd comoment `xi_i X^i`.
pub fn comoment_odd(x: &VectorFieldOnM, sig: Signature) -> Result<SuperPolynomial> {
    require_conformal(x, sig)?;
    let n = x.n();
    let mut out = SuperPolynomial::zero(n);
    for i in 0..n {
        out += &(&SuperPolynomial::xi_lower(sig, i) * &x.comps[i]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{PolyShape, Sampler};

    fn sp(text: &str, n: usize) -> SuperPolynomial {
        SuperPolynomial::parse(text, n).unwrap()
    }

    fn signatures() -> Vec<Signature> {
        vec![
            Signature::euclidean(2),
            Signature::new(1, 1).unwrap(),
            Signature::euclidean(3),
            Signature::new(2, 1).unwrap(),
            Signature::euclidean(4),
            Signature::new(3, 1).unwrap(),
        ]
    }

    #[test]
    fn bracket_examples() {
        let e = Signature::euclidean(2);
        assert_eq!(poisson(&sp("p1", 2), &sp("x1", 2), e).unwrap(), sp("1", 2));
        assert_eq!(poisson(&sp("xi1", 2), &sp("xi1", 2), e).unwrap(), sp("-h^-1", 2));
        assert!(poisson(&sp("x1", 2), &sp("x2", 2), e).unwrap().is_zero());
        let l = Signature::new(1, 1).unwrap();
        assert_eq!(poisson(&sp("xi2", 2), &sp("xi2", 2), l).unwrap(), sp("h^-1", 2));
        assert!(poisson(&sp("xi1 + x1", 2), &sp("x1", 2), e).is_err());
    }

    #[test]
    fn bracket_axioms() {
        let mut s = Sampler::new(1);
        let shape = PolyShape { max_x: 1, max_p: 2, max_xi: 2, terms: 3 };
        for _ in 0..60 {
            let sig = signatures()[s.index(6)];
            let n = sig.n();
            let (f, g, k) = (s.homogeneous(n, &shape), s.homogeneous(n, &shape), s.homogeneous(n, &shape));
            let (pf, pg) = (f.parity().unwrap(), g.parity().unwrap());
            let fg = poisson(&f, &g, sig).unwrap();
            let gf = poisson(&g, &f, sig).unwrap();
            assert_eq!(fg, gf.scale_int(-pf.koszul(pg)));
            let lhs = poisson(&f, &poisson(&g, &k, sig).unwrap(), sig).unwrap();
            let rhs = &poisson(&fg, &k, sig).unwrap()
                + &poisson(&g, &poisson(&f, &k, sig).unwrap(), sig).unwrap().scale_int(pf.koszul(pg));
            assert_eq!(lhs, rhs);
            let lhs = poisson(&f, &(&g * &k), sig).unwrap();
            let rhs = &(&fg * &k) + &(&g * &poisson(&f, &k, sig).unwrap()).scale_int(pf.koszul(pg));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn generator_list() {
        let gens = conformal_generators(Signature::euclidean(2)).unwrap();
        let names: Vec<_> = gens.iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, ["T1", "T2", "R12", "D", "K1", "K2"]);
        let k1 = &gens[4].field;
        assert_eq!(k1.component(0), &sp("x2^2 - x1^2", 2));
        assert_eq!(k1.component(1), &sp("-2*x1*x2", 2));
        assert_eq!(conformal_generators(Signature::new(3, 1).unwrap()).unwrap().len(), 15);
        assert!(conformal_generators(Signature::euclidean(1)).is_err());
    }

    #[test]
    fn field_brackets() {
        let sig = Signature::euclidean(3);
        let g = |name: &str| generator_by_name(sig, name).unwrap();
        assert_eq!(vf_bracket(&g("T1"), &g("D")).unwrap(), g("T1"));
        assert!(vf_bracket(&g("T1"), &g("T2")).unwrap().is_zero());
        assert_eq!(vf_bracket(&g("D"), &g("K1")).unwrap(), g("K1"));
    }

    #[test]
    fn killing_factors() {
        let e = Signature::euclidean(2);
        let d = generator_by_name(e, "D").unwrap();
        assert_eq!(conformal_killing_factor(&d, e), Some(sp("2", 2)));
        let r = generator_by_name(e, "R12").unwrap();
        assert_eq!(conformal_killing_factor(&r, e), Some(SuperPolynomial::zero(2)));
        let bad = VectorFieldOnM::new(vec![sp("x1", 2), SuperPolynomial::zero(2)]).unwrap();
        assert_eq!(conformal_killing_factor(&bad, e), None);
        assert!(hamiltonian_lift(&bad, e).is_err());
        for sig in signatures() {
            for g in conformal_generators(sig).unwrap() {
                assert!(conformal_killing_factor(&g.field, sig).is_some(), "{}", g.name);
            }
        }
    }

    #[test]
    fn lift_examples() {
        let e = Signature::euclidean(3);
        let t1 = generator_by_name(e, "T1").unwrap();
        assert_eq!(hamiltonian_lift(&t1, e).unwrap(), t1.to_operator());
        let d = generator_by_name(e, "D").unwrap();
        let mut expect = d.to_operator();
        for i in 0..3 {
            expect.add_term(DiffKey::dp(3, i, 1), -SuperPolynomial::p(3, i));
        }
        assert_eq!(hamiltonian_lift(&d, e).unwrap(), expect);
    }

    #[test]
    fn pairings() {
        let e = Signature::euclidean(2);
        let d1 = SuperDiffOp::zero(2).add_key(DiffKey::dx(2, 0, 1));
        assert_eq!(pair_alpha(&d1, e).unwrap(), sp("p1", 2));
        assert_eq!(pair_beta(&d1, e).unwrap(), sp("xi1", 2));
        let dp1 = SuperDiffOp::zero(2).add_key(DiffKey::dp(2, 0, 1));
        assert!(pair_alpha(&dp1, e).unwrap().is_zero());
        let second = SuperDiffOp::zero(2).add_key(DiffKey::dx(2, 0, 2));
        assert!(pair_alpha(&second, e).is_err());
    }

    #[test]
    fn comoment_examples() {
        let e = Signature::euclidean(2);
        let t1 = generator_by_name(e, "T1").unwrap();
        assert_eq!(comoment_even(&t1, e).unwrap(), sp("p1", 2));
        assert_eq!(comoment_odd(&t1, e).unwrap(), sp("xi1", 2));
        let r = generator_by_name(e, "R12").unwrap();
        assert_eq!(comoment_even(&r, e).unwrap(), sp("p2*x1 - p1*x2 - h*xi1*xi2", 2));
        let l = Signature::new(2, 2).unwrap();
        let d = generator_by_name(l, "D").unwrap();
        assert_eq!(comoment_odd(&d, l).unwrap(), sp("x1*xi1 + x2*xi2 - x3*xi3 - x4*xi4", 4));
    }

    #[test]
    fn lift_is_hamiltonian_and_pairs_to_comoments() {
        let mut s = Sampler::new(2);
        let shape = PolyShape { max_x: 2, max_p: 2, max_xi: 3, terms: 3 };
        for sig in signatures() {
            for g in conformal_generators(sig).unwrap() {
                let lift = hamiltonian_lift(&g.field, sig).unwrap();
                let j = comoment_even(&g.field, sig).unwrap();
                assert_eq!(pair_alpha(&lift, sig).unwrap(), j, "{}", g.name);
                assert_eq!(pair_beta(&lift, sig).unwrap(), comoment_odd(&g.field, sig).unwrap());
                for _ in 0..3 {
                    let f = s.poly(sig.n(), &shape);
                    assert_eq!(lift.apply(&f), poisson(&j, &f, sig).unwrap(), "{} on {f}", g.name);
                }
            }
        }
    }

    #[test]
    fn morphisms() {
        for sig in [Signature::euclidean(2), Signature::new(2, 1).unwrap()] {
            let gens = conformal_generators(sig).unwrap();
            for a in &gens {
                let la = hamiltonian_lift(&a.field, sig).unwrap();
                let ja = comoment_even(&a.field, sig).unwrap();
                for b in &gens {
                    let br = vf_bracket(&a.field, &b.field).unwrap();
                    let lb = hamiltonian_lift(&b.field, sig).unwrap();
                    assert_eq!(la.graded_commutator(&lb).unwrap(), hamiltonian_lift(&br, sig).unwrap());
                    let jb = comoment_even(&b.field, sig).unwrap();
                    assert_eq!(poisson(&ja, &jb, sig).unwrap(), comoment_even(&br, sig).unwrap());
                }
            }
        }
    }

    #[test]
    fn composition_matches_application() {
        let mut s = Sampler::new(9);
        let shape = PolyShape { max_x: 1, max_p: 1, max_xi: 2, terms: 2 };
        for _ in 0..40 {
            let n = 3;
            let a = random_op(&mut s, n, &shape);
            let b = random_op(&mut s, n, &shape);
            let f = s.poly(n, &PolyShape { max_x: 2, max_p: 2, max_xi: 3, terms: 4 });
            assert_eq!(a.compose(&b).unwrap().apply(&f), a.apply(&b.apply(&f)));
        }
    }

    fn random_op(s: &mut Sampler, n: usize, shape: &PolyShape) -> SuperDiffOp {
        let mut op = SuperDiffOp::zero(n);
        for _ in 0..3 {
            let mut k = DiffKey::identity(n);
            let i = s.index(n);
            match s.index(3) {
                0 => k.dx[i] = 1,
                1 => k.dp[i] = 1,
                _ => {
                    let size = 1 + s.index(2);
                    k.dxi = s.subset(n, size);
                }
            }
            op.add_term(k, s.poly(n, shape));
        }
        op
    }

    impl SuperDiffOp {
        fn add_key(mut self, k: DiffKey) -> SuperDiffOp {
            let n = self.n;
            self.add_term(k, SuperPolynomial::one(n));
            self
        }
    }
}
