//! Seeded generators of random test inputs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeff::{rat, Part, Scalar};
use crate::superpoly::{Monomial, SuperPolynomial};

/// Bounds for random polynomials.
#[derive(Clone, Copy, Debug)]
pub struct PolyShape {
    pub max_x: u32,
    pub max_p: u32,
    pub max_xi: usize,
    pub terms: usize,
}

impl PolyShape {
    pub fn symbols(max_p: u32, max_xi: usize, terms: usize) -> Self {
        PolyShape { max_x: 0, max_p, max_xi, terms }
    }
}

/// Deterministic sampler; identical seeds give identical streams.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn dim(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen()
    }

    pub fn rational(&mut self) -> Scalar {
        let mut num = self.rng.gen_range(-5i64..=5);
        if num == 0 {
            num = 1;
        }
        let den = self.rng.gen_range(1i64..=3);
        Scalar::rational(rat(num, den))
    }

    /// Coefficient with random `h` power and `i`, `s` parts.
    pub fn scalar(&mut self) -> Scalar {
        let mut out = Scalar::zero();
        for _ in 0..self.rng.gen_range(1..=2) {
            let part = *[Part::One, Part::I, Part::S, Part::IS].choose(&mut self.rng).expect("nonempty");
            let hpow = self.rng.gen_range(-1..=2);
            let q = self.rational().as_rational().expect("rational");
            out += &Scalar::term(q, hpow, part);
        }
        out
    }

    fn monomial(&mut self, n: usize, shape: &PolyShape, xi_degree: Option<usize>) -> Monomial {
        let mut m = Monomial::one(n);
        if shape.max_x > 0 {
            for e in m.x.iter_mut() {
                *e = self.rng.gen_range(0..=shape.max_x);
            }
        }
        let budget = self.rng.gen_range(0..=shape.max_p);
        for _ in 0..budget {
            let i = self.index(n);
            m.p[i] += 1;
        }
        let deg = xi_degree.unwrap_or_else(|| self.rng.gen_range(0..=shape.max_xi.min(n)));
        m.xi = self.subset(n, deg);
        m
    }

    /// Random subset of `{0..n}` of the given size, as a mask.
    pub fn subset(&mut self, n: usize, size: usize) -> u32 {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut self.rng);
        idx[..size.min(n)].iter().fold(0u32, |m, &i| m | (1 << i))
    }

    /// Random polynomial with rational coefficients.
    pub fn poly(&mut self, n: usize, shape: &PolyShape) -> SuperPolynomial {
        let mut out = SuperPolynomial::zero(n);
        for _ in 0..shape.terms {
            let m = self.monomial(n, shape, None);
            out.add_term(m, self.rational());
        }
        out
    }

    /// Random polynomial with general [`Scalar`] coefficients.
    pub fn poly_rich(&mut self, n: usize, shape: &PolyShape) -> SuperPolynomial {
        let mut out = SuperPolynomial::zero(n);
        for _ in 0..shape.terms {
            let m = self.monomial(n, shape, None);
            let c = self.scalar();
            out.add_term(m, c);
        }
        out
    }

    /// Parity-homogeneous polynomial, parity chosen at random.
    pub fn homogeneous(&mut self, n: usize, shape: &PolyShape) -> SuperPolynomial {
        let odd = self.coin() && n > 0;
        let degrees: Vec<usize> = (0..=shape.max_xi.min(n)).filter(|d| (d % 2 == 1) == odd).collect();
        let mut out = SuperPolynomial::zero(n);
        if degrees.is_empty() {
            return out;
        }
        for _ in 0..shape.terms {
            let d = *degrees.choose(&mut self.rng).expect("nonempty");
            let m = self.monomial(n, shape, Some(d));
            out.add_term(m, self.rational());
        }
        out
    }

    /// Polynomial of exact bidegree `(k, kappa)` with rational coefficients.
    pub fn bihomogeneous(&mut self, n: usize, k: usize, kappa: usize, max_x: u32, terms: usize) -> SuperPolynomial {
        let mut out = SuperPolynomial::zero(n);
        for _ in 0..terms {
            let mut m = Monomial::one(n);
            for e in m.x.iter_mut() {
                *e = if max_x > 0 { self.rng.gen_range(0..=max_x) } else { 0 };
            }
            for _ in 0..k {
                let i = self.index(n);
                m.p[i] += 1;
            }
            m.xi = self.subset(n, kappa);
            out.add_term(m, self.rational());
        }
        out
    }

    /// Polynomial in `xi` only, optionally with central `x` coefficients.
    pub fn xi_poly(&mut self, n: usize, max_deg: usize, terms: usize) -> SuperPolynomial {
        self.poly(n, &PolyShape { max_x: 0, max_p: 0, max_xi: max_deg, terms })
    }
}
