//! Seeded verification batteries. Each suite checks a family of exact
//! identities and reports, per identity, how many instances were checked
//! and the first nonzero residual if any.

use std::fmt;
use std::str::FromStr;

use crate::clifford::{build_spin_rep, kosmann_lie, star};
use crate::coeff::{rat, Scalar};
use crate::confmod::{
    act_d_direct, act_d_symbolside, act_s, act_t, hamiltonian_correction, normal_order, normal_order_inverse,
};
use crate::error::{Error, Result};
use crate::linalg::ScalarMatrix;
use crate::random::{PolyShape, Sampler};
use crate::superpoly::{Bidegree, Monomial, Parity, Signature, SuperPolynomial};
use crate::symplectic::{
    comoment_even, conformal_generators, hamiltonian_lift, pair_alpha, poisson, vf_bracket, Generator,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Poisson,
    Star,
    Lift,
    Comoment,
    SpinRep,
    Kosmann,
    Modules,
    GradedPoisson,
    All,
}

impl Suite {
    pub const EACH: [Suite; 8] = [
        Suite::Poisson,
        Suite::Star,
        Suite::Lift,
        Suite::Comoment,
        Suite::SpinRep,
        Suite::Kosmann,
        Suite::Modules,
        Suite::GradedPoisson,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Poisson => "poisson",
            Suite::Star => "star",
            Suite::Lift => "lift",
            Suite::Comoment => "comoment",
            Suite::SpinRep => "spinrep",
            Suite::Kosmann => "kosmann",
            Suite::Modules => "modules",
            Suite::GradedPoisson => "graded-poisson",
            Suite::All => "all",
        }
    }

    fn needs_even_dimension(self) -> bool {
        matches!(self, Suite::SpinRep | Suite::Kosmann | Suite::Modules)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Unknown { kind: "suite", name: s.to_string() })
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub sig: Signature,
    pub seed: u64,
    /// Random instances per sampled identity.
    pub samples: usize,
}

impl SuiteConfig {
    pub fn new(sig: Signature, seed: u64) -> Self {
        SuiteConfig { sig, seed, samples: 20 }
    }
}

/// Outcome for one identity.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub suite: Suite,
    pub identity: String,
    pub instances: usize,
    /// Instance label and residual of the first failure.
    pub failure: Option<(String, String)>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub sig: Signature,
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
    /// Suites not run, with the reason.
    pub skipped: Vec<(Suite, String)>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let checks: Vec<_> = self
            .checks
            .iter()
            .map(|c| {
                let mut v = serde_json::json!({
                    "suite": c.suite.name(),
                    "identity": c.identity,
                    "instances": c.instances,
                    "passed": c.passed(),
                });
                if let Some((at, residual)) = &c.failure {
                    v["instance"] = at.clone().into();
                    v["residual"] = residual.clone().into();
                }
                v
            })
            .collect();
        let skipped: Vec<_> =
            self.skipped.iter().map(|(s, why)| serde_json::json!({"suite": s.name(), "reason": why})).collect();
        serde_json::json!({
            "signature": [self.sig.p, self.sig.q],
            "seed": self.seed,
            "passed": self.passed(),
            "checks": checks,
            "skipped": skipped,
        })
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed() { "pass" } else { "FAIL" };
            write!(f, "[{tag}] {}/{} ({} instances)", c.suite, c.identity, c.instances)?;
            if let Some((at, residual)) = &c.failure {
                write!(f, " at {at}: residual {residual}")?;
            }
            writeln!(f)?;
        }
        for (s, why) in &self.skipped {
            writeln!(f, "[skip] {s}: {why}")?;
        }
        let total = self.checks.len();
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        write!(f, "{} of {total} identities hold", total - failed)
    }
}

/// Accumulates instances of one identity.
struct Tally {
    outcome: CheckOutcome,
}

impl Tally {
    fn new(suite: Suite, identity: impl Into<String>) -> Self {
        Tally { outcome: CheckOutcome { suite, identity: identity.into(), instances: 0, failure: None } }
    }

    fn poly(&mut self, at: impl FnOnce() -> String, residual: &SuperPolynomial) {
        self.record(residual.is_zero(), at, || residual.to_string());
    }

    fn record(&mut self, ok: bool, at: impl FnOnce() -> String, residual: impl FnOnce() -> String) {
        self.outcome.instances += 1;
        if !ok && self.outcome.failure.is_none() {
            self.outcome.failure = Some((at(), residual()));
        }
    }

    fn done(self) -> CheckOutcome {
        self.outcome
    }
}

/// Runs one suite, or every suite for [`Suite::All`]. In odd dimension
/// `all` skips the suites that need spinors; asking for them directly is
/// an error.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport { sig: cfg.sig, seed: cfg.seed, checks: Vec::new(), skipped: Vec::new() };
    let odd = cfg.sig.n() % 2 == 1;
    let list: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    for s in list {
        if odd && s.needs_even_dimension() {
            if suite == Suite::All {
                report.skipped.push((s, "needs even dimension".into()));
                continue;
            }
            return Err(Error::OddDimension(cfg.sig.n()));
        }
        // every suite draws from its own stream
        let mut rng = Sampler::new(cfg.seed.wrapping_mul(31).wrapping_add(s as u64));
        let checks = match s {
            Suite::Poisson => poisson_suite(cfg, &mut rng)?,
            Suite::Star => star_suite(cfg, &mut rng)?,
            Suite::Lift => lift_suite(cfg)?,
            Suite::Comoment => comoment_suite(cfg, &mut rng)?,
            Suite::SpinRep => spinrep_suite(cfg)?,
            Suite::Kosmann => kosmann_suite(cfg)?,
            Suite::Modules => modules_suite(cfg, &mut rng)?,
            Suite::GradedPoisson => graded_poisson_suite(cfg, &mut rng)?,
            Suite::All => unreachable!("expanded above"),
        };
        report.checks.extend(checks);
    }
    Ok(report)
}

fn parity(f: &SuperPolynomial) -> Parity {
    f.parity().unwrap_or(Parity::Even)
}

fn poisson_suite(cfg: &SuiteConfig, rng: &mut Sampler) -> Result<Vec<CheckOutcome>> {
    let sig = cfg.sig;
    let n = sig.n();
    let shape = PolyShape { max_x: 2, max_p: 2, max_xi: n.min(3), terms: 3 };
    let mut anti = Tally::new(Suite::Poisson, "graded antisymmetry");
    let mut jacobi = Tally::new(Suite::Poisson, "graded Jacobi identity");
    let mut leibniz = Tally::new(Suite::Poisson, "graded Leibniz rule");
    for t in 0..cfg.samples {
        let f = rng.homogeneous(n, &shape);
        let g = rng.homogeneous(n, &shape);
        let h = rng.homogeneous(n, &shape);
        let at = || format!("triple {t}");
        let fg = parity(&f).koszul(parity(&g));
        let r = &poisson(&f, &g, sig)? + &poisson(&g, &f, sig)?.scale_int(fg);
        anti.poly(at, &r);
        let lhs = poisson(&f, &poisson(&g, &h, sig)?, sig)?;
        let rhs = &poisson(&poisson(&f, &g, sig)?, &h, sig)? + &poisson(&g, &poisson(&f, &h, sig)?, sig)?.scale_int(fg);
        jacobi.poly(at, &(&lhs - &rhs));
        let lhs = poisson(&f, &(&g * &h), sig)?;
        let rhs = &(&poisson(&f, &g, sig)? * &h) + &(&g * &poisson(&f, &h, sig)?).scale_int(fg);
        leibniz.poly(at, &(&lhs - &rhs));
    }
    Ok(vec![anti.done(), jacobi.done(), leibniz.done()])
}

fn star_suite(cfg: &SuiteConfig, rng: &mut Sampler) -> Result<Vec<CheckOutcome>> {
    let sig = cfg.sig;
    let n = sig.n();
    let mut clifford = Tally::new(Suite::Star, "xi^i * xi^j + xi^j * xi^i = -eta^ij");
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (SuperPolynomial::xi(n, i), SuperPolynomial::xi(n, j));
            let lhs = &star(&a, &b, sig)? + &star(&b, &a, sig)?;
            let eta = if i == j { sig.eta(i) } else { 0 };
            let r = &lhs - &SuperPolynomial::constant(n, Scalar::int(-eta));
            clifford.poly(|| format!("i={} j={}", i + 1, j + 1), &r);
        }
    }
    let shape = PolyShape { max_x: 1, max_p: 1, max_xi: n.min(4), terms: 3 };
    let mut assoc = Tally::new(Suite::Star, "associativity");
    let mut filtration = Tally::new(Suite::Star, "top component is the wedge product");
    for t in 0..cfg.samples {
        let f = rng.poly_rich(n, &shape);
        let g = rng.poly_rich(n, &shape);
        let h = rng.poly(n, &shape);
        let lhs = star(&star(&f, &g, sig)?, &h, sig)?;
        let rhs = star(&f, &star(&g, &h, sig)?, sig)?;
        assoc.poly(|| format!("triple {t}"), &(&lhs - &rhs));
        let (a, b) = (rng.index(n + 1), rng.index(n + 1));
        let u = rng.xi_poly(n, n, 3).filter(|m| m.xi_degree() == a);
        let v = rng.xi_poly(n, n, 3).filter(|m| m.xi_degree() == b);
        let prod = star(&u, &v, sig)?;
        let top = prod.filter(|m| m.xi_degree() == a + b);
        let stray = prod.filter(|m| m.xi_degree() > a + b || (a + b - m.xi_degree()) % 2 == 1);
        filtration.poly(|| format!("pair {t}"), &(&(&top - &(&u * &v)) + &stray));
    }
    Ok(vec![clifford.done(), assoc.done(), filtration.done()])
}

/// `[X, Y]` for every ordered pair of generators.
fn pairs(gens: &[Generator]) -> Result<Vec<(&Generator, &Generator, crate::symplectic::VectorFieldOnM)>> {
    let mut out = Vec::with_capacity(gens.len() * gens.len());
    for a in gens {
        for b in gens {
            out.push((a, b, vf_bracket(&a.field, &b.field)?));
        }
    }
    Ok(out)
}

fn lift_suite(cfg: &SuiteConfig) -> Result<Vec<CheckOutcome>> {
    let sig = cfg.sig;
    let gens = conformal_generators(sig)?;
    let lifts: Vec<_> = gens.iter().map(|g| hamiltonian_lift(&g.field, sig)).collect::<Result<_>>()?;
    let mut morphism = Tally::new(Suite::Lift, "[lift X, lift Y] = lift [X,Y]");
    for (i, a) in gens.iter().enumerate() {
        for (j, b) in gens.iter().enumerate() {
            let br = vf_bracket(&a.field, &b.field)?;
            let lhs = lifts[i].graded_commutator(&lifts[j])?;
            let r = &lhs - &hamiltonian_lift(&br, sig)?;
            morphism.record(r.is_zero(), || format!("{}, {}", a.name, b.name), || r.to_string());
        }
    }
    Ok(vec![morphism.done()])
}

fn comoment_suite(cfg: &SuiteConfig, rng: &mut Sampler) -> Result<Vec<CheckOutcome>> {
    let sig = cfg.sig;
    let n = sig.n();
    let gens = conformal_generators(sig)?;
    let moments: Vec<_> = gens.iter().map(|g| comoment_even(&g.field, sig)).collect::<Result<_>>()?;
    let mut morphism = Tally::new(Suite::Comoment, "{J_X, J_Y} = J_[X,Y]");
    for (i, a) in gens.iter().enumerate() {
        for (j, b) in gens.iter().enumerate() {
            let br = vf_bracket(&a.field, &b.field)?;
            let r = &poisson(&moments[i], &moments[j], sig)? - &comoment_even(&br, sig)?;
            morphism.poly(|| format!("{}, {}", a.name, b.name), &r);
        }
    }
    let mut potential = Tally::new(Suite::Comoment, "J_X = <lift X, alpha>");
    let mut hamiltonian = Tally::new(Suite::Comoment, "lift X = {J_X, .}");
    let shape = PolyShape { max_x: 2, max_p: 2, max_xi: n.min(3), terms: 3 };
    for (g, j) in gens.iter().zip(&moments) {
        let lift = hamiltonian_lift(&g.field, sig)?;
        potential.poly(|| g.name.clone(), &(&pair_alpha(&lift, sig)? - j));
        for _ in 0..cfg.samples.clamp(1, 3) {
            let f = rng.poly(n, &shape);
            hamiltonian.poly(|| g.name.clone(), &(&lift.apply(&f) - &poisson(j, &f, sig)?));
        }
    }
    Ok(vec![morphism.done(), potential.done(), hamiltonian.done()])
}

fn spinrep_suite(cfg: &SuiteConfig) -> Result<Vec<CheckOutcome>> {
    let sig = cfg.sig;
    let n = sig.n();
    let rep = build_spin_rep(sig)?;
    let size = rep.size();
    let mut relations = Tally::new(Suite::SpinRep, "rho(c^i) rho(c^j) + rho(c^j) rho(c^i) = -eta^ij");
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (rep.monomial(1 << i), rep.monomial(1 << j));
            let eta = if i == j { sig.eta(i) } else { 0 };
            let target = ScalarMatrix::identity(size).scale(&Scalar::int(-eta));
            let r = &(&(&a * &b) + &(&b * &a)) - &target;
            relations.record(r.is_zero(), || format!("i={} j={}", i + 1, j + 1), || format!("{r:?}"));
        }
    }
    let mut rank = Tally::new(Suite::SpinRep, "monomial images have full rank");
    let got = rep.monomial_rank()?;
    rank.record(got == 1 << n, || "all monomials".into(), || format!("rank {got}, expected {}", 1usize << n));
    Ok(vec![relations.done(), rank.done()])
}

fn kosmann_suite(cfg: &SuiteConfig) -> Result<Vec<CheckOutcome>> {
    let sig = cfg.sig;
    let gens = conformal_generators(sig)?;
    let mut quantized = Tally::new(Suite::Kosmann, "N(J_X) = h sL_X");
    for g in &gens {
        let lhs = normal_order(&comoment_even(&g.field, sig)?, sig)?;
        let r = &lhs - &kosmann_lie(&g.field, sig, &rat(0, 1))?.scale(&Scalar::h());
        quantized.record(r.is_zero(), || g.name.clone(), || r.render(false));
    }
    let lambda = rat(1, 3);
    let ops: Vec<_> = gens.iter().map(|g| kosmann_lie(&g.field, sig, &lambda)).collect::<Result<_>>()?;
    let mut morphism = Tally::new(Suite::Kosmann, "[sL_X, sL_Y] = sL_[X,Y]");
    for (i, (a, b, br)) in pairs(&gens)?.into_iter().enumerate() {
        let (ia, ib) = (i / gens.len(), i % gens.len());
        let r = &ops[ia].graded_commutator(&ops[ib])? - &kosmann_lie(&br, sig, &lambda)?;
        morphism.record(r.is_zero(), || format!("{}, {}", a.name, b.name), || r.render(false));
    }
    Ok(vec![quantized.done(), morphism.done()])
}

/// Random symbol of bidegree at most `(2, 2)` with linear `x` dependence.
fn small_symbol(rng: &mut Sampler, n: usize) -> SuperPolynomial {
    let k = rng.index(3);
    let kappa = rng.index(3.min(n + 1));
    rng.bihomogeneous(n, k, kappa, 1, 2)
}

fn modules_suite(cfg: &SuiteConfig, rng: &mut Sampler) -> Result<Vec<CheckOutcome>> {
    let sig = cfg.sig;
    let n = sig.n();
    let gens = conformal_generators(sig)?;
    let (delta, lambda) = (rat(1, 3), rat(1, 5));
    let mu = &lambda + &delta;
    let mut difference = Tally::new(Suite::Modules, "L^S - L^T = Hamiltonian correction");
    let mut route = Tally::new(Suite::Modules, "N(symbol-side action) = operator commutator");
    let mut morph_t = Tally::new(Suite::Modules, "tensorial action is a Lie morphism");
    let mut morph_s = Tally::new(Suite::Modules, "Hamiltonian action is a Lie morphism");
    let mut morph_d = Tally::new(Suite::Modules, "operator action is a Lie morphism");
    for t in 0..cfg.samples {
        let g = &gens[t % gens.len()];
        let f = small_symbol(rng, n);
        let at = || format!("{} on symbol {t}", g.name);
        let diff = &act_s(&g.field, &delta, &f, sig)? - &act_t(&g.field, &delta, &f, sig)?;
        difference.poly(at, &(&diff - &hamiltonian_correction(&g.field, &f, sig)?));
        let sym = act_d_symbolside(&g.field, &lambda, &mu, &f, sig)?;
        let direct = act_d_direct(&g.field, &lambda, &mu, &normal_order(&f, sig)?, sig)?;
        let r = &normal_order(&sym, sig)? - &direct;
        route.record(r.is_zero(), at, || r.render(false));

        let other = &gens[rng.index(gens.len())];
        let br = vf_bracket(&g.field, &other.field)?;
        let at = || format!("{}, {} on symbol {t}", g.name, other.name);
        type Act<'a> =
            Box<dyn Fn(&crate::symplectic::VectorFieldOnM, &SuperPolynomial) -> Result<SuperPolynomial> + 'a>;
        let actions: [(&mut Tally, Act); 3] = [
            (&mut morph_t, Box::new(|x, f| act_t(x, &delta, f, sig))),
            (&mut morph_s, Box::new(|x, f| act_s(x, &delta, f, sig))),
            (&mut morph_d, Box::new(|x, f| act_d_symbolside(x, &lambda, &mu, f, sig))),
        ];
        for (tally, act) in actions {
            let xy = act(&g.field, &act(&other.field, &f)?)?;
            let yx = act(&other.field, &act(&g.field, &f)?)?;
            tally.poly(at, &(&(&xy - &yx) - &act(&br, &f)?));
        }
    }
    Ok(vec![difference.done(), route.done(), morph_t.done(), morph_s.done(), morph_d.done()])
}

/// Random symbol of Hamiltonian degree `d`, with `x` dependence.
fn hamiltonian_homogeneous(rng: &mut Sampler, n: usize, d: usize, terms: usize) -> SuperPolynomial {
    let bidegrees: Vec<Bidegree> = (0..=n.min(d))
        .filter(|kappa| (d - kappa).is_multiple_of(2))
        .map(|kappa| Bidegree::new((d - kappa) / 2, kappa))
        .collect();
    let mut out = SuperPolynomial::zero(n);
    for _ in 0..terms {
        let b = bidegrees[rng.index(bidegrees.len())];
        out += &rng.bihomogeneous(n, b.k, b.kappa, 2, 1);
    }
    out
}

fn graded_poisson_suite(cfg: &SuiteConfig, rng: &mut Sampler) -> Result<Vec<CheckOutcome>> {
    let sig = cfg.sig;
    let n = sig.n();
    let mut top = Tally::new(Suite::GradedPoisson, "top symbol of [N F, N G]/h is {F,G}");
    let mut bound = Tally::new(Suite::GradedPoisson, "[N F, N G]/h has degree at most d1+d2-2");
    let inv_h = Scalar::h_pow(-1);
    for t in 0..cfg.samples {
        let d1 = 1 + rng.index(4);
        let d2 = 1 + rng.index(4);
        let f = hamiltonian_homogeneous(rng, n, d1, 2);
        let g = hamiltonian_homogeneous(rng, n, d2, 2);
        let comm = normal_order(&f, sig)?.graded_commutator(&normal_order(&g, sig)?)?;
        let sym = normal_order_inverse(&comm).scale(&inv_h);
        let d = d1 + d2 - 2;
        let at = || format!("pair {t} (degrees {d1}, {d2})");
        top.poly(at, &(&sym.hamiltonian_component(d) - &poisson(&f, &g, sig)?));
        let above = sym.filter(|m: &Monomial| m.bidegree().hamiltonian() > d);
        bound.poly(at, &above);
    }
    Ok(vec![top.done(), bound.done()])
}
