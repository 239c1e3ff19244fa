//! The Clifford star product on Grassmann variables, spinor matrices,
//! prequantization operators and the Kosmann Lie derivative.
//!
//! Clifford elements are stored in the basis `c^I = c^{i_1} ... c^{i_k}`
//! (ascending), where `c^i` is the star image of `xi^i`, so that
//! `c^i c^j + c^j c^i = -eta^ij`. Gamma matrices are `gamma^i = sqrt(2) c^i`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::coeff::{rat, Rational, Scalar};
use crate::confmod::SpinorDiffOp;
use crate::error::{Error, Result};
use crate::linalg::ScalarMatrix;
use crate::superpoly::{mask_indices, Monomial, Signature, SuperPolynomial};
use crate::symplectic::{conformal_killing_factor, poisson, skew_jacobian, VectorFieldOnM};

/// Product `c^I c^J` expanded in ascending monomials.
pub fn clifford_product(a: u32, b: u32, sig: Signature) -> Vec<(u32, Rational)> {
    let mut acc: BTreeMap<u32, Rational> = BTreeMap::new();
    acc.insert(b, Rational::one());
    let half = rat(1, 2);
    for i in mask_indices(a).collect::<Vec<_>>().into_iter().rev() {
        let bit = 1u32 << i;
        let mut next: BTreeMap<u32, Rational> = BTreeMap::new();
        for (mask, c) in acc {
            let below = (mask & (bit - 1)).count_ones();
            let sign = if below.is_multiple_of(2) { c } else { -c };
            if mask & bit == 0 {
                *next.entry(mask | bit).or_insert_with(Rational::zero) += &sign;
            } else {
                // -1/2 eta^ii d/dxi^i
                let contr = if sig.eta(i) > 0 { -(&sign * &half) } else { &sign * &half };
                *next.entry(mask & !bit).or_insert_with(Rational::zero) += contr;
            }
        }
        acc = next.into_iter().filter(|(_, v)| !v.is_zero()).collect();
    }
    acc.into_iter().collect()
}

/// Star product; the odd variables generate the Clifford algebra and the even
/// variables are central.
pub fn star(f: &SuperPolynomial, g: &SuperPolynomial, sig: Signature) -> Result<SuperPolynomial> {
    let n = f.n();
    if g.n() != n {
        return Err(Error::DimensionMismatch(n, g.n()));
    }
    if sig.n() != n {
        return Err(Error::DimensionMismatch(sig.n(), n));
    }
    let mut cache: BTreeMap<(u32, u32), Vec<(u32, Rational)>> = BTreeMap::new();
    let mut out = SuperPolynomial::zero(n);
    for (mf, cf) in f.terms() {
        for (mg, cg) in g.terms() {
            let prod = cache.entry((mf.xi, mg.xi)).or_insert_with(|| clifford_product(mf.xi, mg.xi, sig));
            let c = cf * cg;
            for (mask, q) in prod.iter() {
                let m = Monomial {
                    x: mf.x.iter().zip(&mg.x).map(|(a, b)| a + b).collect(),
                    p: mf.p.iter().zip(&mg.p).map(|(a, b)| a + b).collect(),
                    xi: *mask,
                };
                out.add_term(m, c.scale(q));
            }
        }
    }
    Ok(out)
}

/// Both sides of `h {u,v} = u*v - (-1)^(|u||v|) v*u`.
#[derive(Clone, Debug)]
pub struct WeylCheck {
    pub lhs: SuperPolynomial,
    pub rhs: SuperPolynomial,
}

impl WeylCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub fn weyl_bracket_check(u: &SuperPolynomial, v: &SuperPolynomial, sig: Signature) -> Result<WeylCheck> {
    let top = u.terms().map(|(m, _)| m.xi_degree()).max().unwrap_or(0);
    if top > 2 {
        return Err(Error::BadXiDegree(top));
    }
    let pu = u.parity().ok_or(Error::NotHomogeneous)?;
    let pv = v.parity().ok_or(Error::NotHomogeneous)?;
    let lhs = poisson(u, v, sig)?.shift_h(1);
    let rhs = &star(u, v, sig)? - &star(v, u, sig)?.scale_int(pu.koszul(pv));
    Ok(WeylCheck { lhs, rhs })
}

// ---- spinor representation -----------------------------------------------

/// Matrices of the generators `c^i` on the spinor module `Lambda(C^m)`.
#[derive(Clone, Debug)]
pub struct SpinorRep {
    pub sig: Signature,
    pub m: usize,
    pub gens: Vec<ScalarMatrix>,
}

/// Exterior multiplication `e_a` on `Lambda(C^m)`, basis indexed by masks.
fn exterior(dim_bits: usize, a: usize) -> ScalarMatrix {
    let size = 1usize << dim_bits;
    let bit = 1u32 << a;
    let mut out = ScalarMatrix::zeros(size, size);
    for col in 0..size as u32 {
        if col & bit == 0 {
            let below = (col & (bit - 1)).count_ones();
            out.set((col | bit) as usize, col as usize, Scalar::int(if below.is_multiple_of(2) { 1 } else { -1 }));
        }
    }
    out
}

/// Left derivative `d_a` on `Lambda(C^m)`.
fn contraction(dim_bits: usize, a: usize) -> ScalarMatrix {
    let size = 1usize << dim_bits;
    let bit = 1u32 << a;
    let mut out = ScalarMatrix::zeros(size, size);
    for col in 0..size as u32 {
        if col & bit != 0 {
            let below = (col & (bit - 1)).count_ones();
            out.set((col & !bit) as usize, col as usize, Scalar::int(if below.is_multiple_of(2) { 1 } else { -1 }));
        }
    }
    out
}

/// Spinor module for even `n = p + q` with `p >= q`.
pub fn build_spin_rep(sig: Signature) -> Result<SpinorRep> {
    let n = sig.n();
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    if sig.p < sig.q {
        return Err(Error::SignatureOrder { p: sig.p, q: sig.q });
    }
    let m = n / 2;
    let half_s = Scalar::s().scale(&rat(1, 2));
    let half_is = &half_s * &Scalar::i();
    let mut gens = Vec::with_capacity(n);
    for i in 0..n {
        let mat = if i < m {
            (&exterior(m, i) - &contraction(m, i)).scale(&half_s)
        } else if i < sig.p {
            (&exterior(m, i - m) + &contraction(m, i - m)).scale(&half_is)
        } else {
            (&exterior(m, i - m) + &contraction(m, i - m)).scale(&half_s)
        };
        gens.push(mat);
    }
    Ok(SpinorRep { sig, m, gens })
}

impl SpinorRep {
    pub fn size(&self) -> usize {
        1 << self.m
    }

    /// `rho(c^I)` for an ascending index set.
    pub fn monomial(&self, mask: u32) -> ScalarMatrix {
        mask_indices(mask).fold(ScalarMatrix::identity(self.size()), |acc, i| &acc * &self.gens[i])
    }

    /// Image of a Clifford element given in the `c` basis.
    pub fn image(&self, u: &SuperPolynomial) -> Result<ScalarMatrix> {
        let mut out = ScalarMatrix::zeros(self.size(), self.size());
        for (m, c) in u.terms() {
            if m.x_degree() + m.p_degree() > 0 {
                return Err(Error::InvalidArgument("Clifford element must be a polynomial in xi only".into()));
            }
            out = &out + &self.monomial(m.xi).scale(c);
        }
        Ok(out)
    }

    /// Rank of the span of all `2^n` ordered monomial images.
    pub fn monomial_rank(&self) -> Result<usize> {
        let n = self.sig.n();
        let size = self.size();
        let mut big = ScalarMatrix::zeros(1 << n, size * size);
        for mask in 0..(1u32 << n) {
            let img = self.monomial(mask);
            for (k, v) in img.entries().iter().enumerate() {
                big.set(mask as usize, k, v.clone());
            }
        }
        big.rank()
    }

    /// Gamma matrices `sqrt(2) rho(c^i)`.
    pub fn gammas(&self) -> Vec<ScalarMatrix> {
        self.gens.iter().map(|g| g.scale(&Scalar::s())).collect()
    }
}

// ---- prequantization ------------------------------------------------------

/// Normalization of the prequantization operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Prequant {
    /// `(1/sqrt 2)(e(v) - 2 i(v))`.
    Standard,
    /// `e(v) - i(v)`.
    Canonical,
}

/// Operator `c(v)` on the full Grassmann algebra (basis: all `xi` subsets,
/// indexed by mask), where `i(xi^a) = eta^aa d/dxi^a`.
pub fn prequant_op(v: &SuperPolynomial, sig: Signature, kind: Prequant) -> Result<ScalarMatrix> {
    let n = sig.n();
    if v.n() != n {
        return Err(Error::DimensionMismatch(n, v.n()));
    }
    for (m, _) in v.terms() {
        if m.xi_degree() != 1 || m.x_degree() + m.p_degree() > 0 {
            return Err(Error::BadXiDegree(m.xi_degree()));
        }
    }
    let size = 1usize << n;
    let mut eps = ScalarMatrix::zeros(size, size);
    let mut iota = ScalarMatrix::zeros(size, size);
    for (m, c) in v.terms() {
        let a = m.xi.trailing_zeros() as usize;
        eps = &eps + &exterior(n, a).scale(c);
        iota = &iota + &contraction(n, a).scale(&c.scale(&rat(sig.eta(a), 1)));
    }
    Ok(match kind {
        Prequant::Standard => (&eps - &iota.scale(&Scalar::int(2))).scale(&Scalar::s().scale(&rat(1, 2))),
        Prequant::Canonical => &eps - &iota,
    })
}

/// Coordinates of a constant `xi` polynomial in the mask basis.
pub fn grassmann_vector(f: &SuperPolynomial) -> Result<Vec<Scalar>> {
    let mut out = vec![Scalar::zero(); 1 << f.n()];
    for (m, c) in f.terms() {
        if m.x_degree() + m.p_degree() > 0 {
            return Err(Error::InvalidArgument("expected a polynomial in xi only".into()));
        }
        out[m.xi as usize] = c.clone();
    }
    Ok(out)
}

pub fn grassmann_from_vector(n: usize, v: &[Scalar]) -> SuperPolynomial {
    let mut out = SuperPolynomial::zero(n);
    for (mask, c) in v.iter().enumerate() {
        let mut m = Monomial::one(n);
        m.xi = mask as u32;
        out.add_term(m, c.clone());
    }
    out
}

pub fn apply_matrix(mat: &ScalarMatrix, v: &[Scalar]) -> Vec<Scalar> {
    (0..mat.rows())
        .map(|r| {
            let mut acc = Scalar::zero();
            for (c, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    acc += &(mat.get(r, c) * x);
                }
            }
            acc
        })
        .collect()
}

// ---- Kosmann derivative --------------------------------------------------

/// `X^i d_i + sum_{j<k} omega_kj c^j c^k + lambda div X`, with
/// `omega_kj = (d_k X_j - d_j X_k) / 2`.
pub fn kosmann_lie(x: &VectorFieldOnM, sig: Signature, lambda: &Rational) -> Result<SpinorDiffOp> {
    let n = sig.n();
    if x.n() != n {
        return Err(Error::DimensionMismatch(n, x.n()));
    }
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    if conformal_killing_factor(x, sig).is_none() {
        return Err(Error::NotConformal);
    }
    let mut op = SpinorDiffOp::zero(sig);
    for i in 0..n {
        let mut dx = vec![0; n];
        dx[i] = 1;
        op.add_term(0, dx, x.component(i).clone());
    }
    for j in 0..n {
        for k in j + 1..n {
            op.add_term((1 << j) | (1 << k), vec![0; n], skew_jacobian(x, sig, k, j));
        }
    }
    op.add_term(0, vec![0; n], x.divergence().scale_rat(lambda));
    Ok(op)
}
