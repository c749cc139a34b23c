//! Check suites run by the `check`, `kms` and `spectrum` subcommands.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use vhm_core::ccr::{cocycle, Beta, PhaseConvention, QuasiFreeState, VhmDynamics};
use vhm_core::dressing::{
    commutator_checks, dressed_norm_tensor_power, dressed_norm_tensor_power_matrix,
    dressing_identities, free_spectrum, ground_weyl_closed, ground_weyl_expectation,
    printed_ground_modulus, GIdentification,
};
use vhm_core::fock::FockVector;
use vhm_core::kms::{
    coth_identity_residual, default_grid, ground_spectral_support, kms_integral_residual,
    kms_pointwise_residual, weakstar_convergence_sweep, GaussianWindow, KmsRecord, SpectralGrid,
};
use vhm_core::model::{gibbs_trace_deviation, tau_heisenberg_deviation};
use vhm_core::{Basis, Dressed, DressedH, Modes, Src, TestFn, TwoPoint, WeylPoly, C64};

use crate::config::ExperimentConfig;
use crate::error::LabError;
use crate::report::{Record, Relation};

/// Shared inputs of every check.
#[derive(Debug, Clone)]
pub struct Context {
    pub modes: Modes,
    pub source: Src,
    pub n: usize,
    pub spectrum_n: usize,
    pub betas: Vec<f64>,
    pub times: Vec<f64>,
    pub convention: PhaseConvention,
}

impl Context {
    pub fn from_config(cfg: &ExperimentConfig, convention: PhaseConvention) -> Result<Self, LabError> {
        Ok(Self {
            modes: cfg.modes()?,
            source: cfg.source()?,
            n: cfg.n,
            spectrum_n: cfg.spectrum_n,
            betas: cfg.sweep.betas.clone(),
            times: cfg.sweep.t_grid.times(),
            convention,
        })
    }

    fn m(&self) -> usize {
        self.modes.len()
    }

    fn basis(&self, n: usize) -> Result<Basis, LabError> {
        Ok(Basis::new(self.modes.clone(), n)?)
    }

    fn mul(&self, a: &WeylPoly, b: &WeylPoly) -> Result<WeylPoly, LabError> {
        Ok(a.mul_with(b, self.convention)?)
    }
}

/// Value produced by one check before it is compared with its tolerance.
#[derive(Debug, Clone, Default)]
pub struct Measure {
    pub value: f64,
    pub truncation: Option<f64>,
    pub params: Vec<(&'static str, serde_json::Value)>,
    pub note: Option<String>,
    /// Forces failure independently of the value.
    pub veto: Option<String>,
}

impl Measure {
    fn of(value: f64) -> Self {
        Self {
            value,
            ..Self::default()
        }
    }

    fn with(mut self, key: &'static str, v: impl Into<serde_json::Value>) -> Self {
        self.params.push((key, v.into()));
        self
    }

    fn truncation(mut self, t: f64) -> Self {
        self.truncation = Some(t);
        self
    }
}

type CheckFn = fn(&Context, &mut ChaCha8Rng) -> Result<Measure, LabError>;

pub struct CheckSpec {
    pub name: &'static str,
    pub anchor: &'static str,
    pub tolerance: f64,
    pub relation: Relation,
    run: CheckFn,
}

const fn below(name: &'static str, anchor: &'static str, tolerance: f64, run: CheckFn) -> CheckSpec {
    CheckSpec {
        name,
        anchor,
        tolerance,
        relation: Relation::Below,
        run,
    }
}

pub const CHECKS: &[CheckSpec] = &[
    below("weyl_product", "W(f)W(g) = W(f+g) exp(-i pi^2 Im<f,g>)", 1e-12, weyl_product),
    below("weyl_adjoint", "W(f)* = W(-f), (AB)* = B*A*", 1e-12, weyl_adjoint),
    below("weyl_associativity", "(AB)C = A(BC)", 1e-12, weyl_associativity),
    below("tau_group_law", "tau(t+s) = tau(t) tau(s)", 1e-12, tau_group_law),
    below(
        "tau_heisenberg",
        "pi_0(tau(t)[W(f)]) = e^{itH} pi_0(W(f)) e^{-itH}, H = dGamma(omega) + a(v) + a*(v)",
        1e-5,
        tau_heisenberg,
    ),
    below(
        "gibbs_trace",
        "omega_beta(W(f)) = Tr(e^{-beta H} pi_0(W(f))) / Tr(e^{-beta H})",
        1e-6,
        gibbs_trace,
    ),
    below("state_stationarity", "omega_beta(tau(t)[A]) = omega_beta(A)", 1e-12, stationarity),
    below(
        "qpd_gram",
        "sum_jk conj(c_j) c_k omega(W(f_j)* W(f_k)) >= 0",
        1e-12,
        qpd_gram,
    ),
    below(
        "kms_pointwise",
        "omega_beta(W(f) tau_{t+i beta}[W(g)]) = omega_beta(tau_t[W(g)] W(f))",
        1e-11,
        kms_pointwise,
    ),
    below(
        "kms_integral",
        "int F(t - i beta) omega(A tau_t[B]) dt = int F(t) omega(tau_t[B] A) dt",
        1e-8,
        kms_integral,
    ),
    below(
        "coth_identity",
        "(coth(x/2) + 1) e^{-x} = coth(x/2) - 1",
        1e-12,
        coth_identity,
    ),
    below(
        "ground_spectral_support",
        "t -> omega_inf(W(f) tau_t[W(g)]) has nonnegative frequencies only",
        1e-10,
        ground_support,
    ),
    CheckSpec {
        name: "thermal_negative_frequencies",
        anchor: "t -> omega_beta(W(f) tau_t[W(g)]) carries negative frequencies for finite beta",
        tolerance: 1e-3,
        relation: Relation::Above,
        run: thermal_support,
    },
    below(
        "beta_limit",
        "omega_beta(W(f)) -> omega_inf(W(f)) as beta -> inf",
        1e-8,
        beta_limit,
    ),
    below(
        "dressing_scalar_identity",
        "e^{-|v/omega|^2} D* D = D'* D', D = e^{a*(-v/omega)}, D' = e^{a(-v/omega)}",
        1e-7,
        dressing_scalar,
    ),
    below(
        "dressing_hamiltonian_identity",
        "e^{-|v/omega|^2} D* (H + |v/sqrt(omega)|^2) D = D'* dGamma(omega) D'",
        1e-7,
        dressing_hamiltonian,
    ),
    below(
        "commutator_identities",
        "[dGamma(omega), e^{a*(f)}] = e^{a*(f)} a*(omega f), [a(f), e^{a*(g)}] = <f,g> e^{a*(g)}",
        1e-8,
        commutators,
    ),
    below(
        "dressed_norm_formula",
        "|f^{(x)n}|_g^2 = sum_l binom(n,l)/l! |<f,g>|^{2l} |f|^{2(n-l)}",
        1e-10,
        dressed_norm,
    ),
    below("iota_unitarity", "|iota_g psi| = |psi|_g, iota_g^{-1} iota_g = 1", 1e-10, iota_unitarity),
    below(
        "pencil_spectrum",
        "spec(H_g) = {sum_k n_k omega_k}",
        1e-10,
        pencil_spectrum,
    ),
    below(
        "ground_weyl_two_way",
        "<eps_g(0), pi_g(W(f)) eps_g(0)>_g: closed form = matrix evaluation",
        1e-8,
        ground_weyl_two_way,
    ),
    below(
        "ground_weyl_phase",
        "arg <eps_g(0), pi_g(W(f)) eps_g(0)>_g = arg omega_inf(W(f)), g = -v/omega",
        1e-8,
        ground_weyl_phase,
    ),
    below(
        "ground_weyl_modulus",
        "|<eps_g(0), pi_g(W(f)) eps_g(0)>_g| = exp(-(pi^2/2)|f|^2)",
        1e-8,
        ground_weyl_modulus,
    ),
    CheckSpec {
        name: "ground_weyl_printed_modulus_mismatch",
        anchor: "printed modulus exp(-|f|^2/2) vs computed exp(-(pi^2/2)|f|^2)",
        tolerance: 1e-3,
        relation: Relation::Above,
        run: printed_modulus_gap,
    },
];

pub fn is_known_check(name: &str) -> bool {
    CHECKS.iter().any(|c| c.name == name)
}

/// 64-bit FNV-1a; stable across platforms and releases.
fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Generator for the check `name`, independent of scheduling.
pub fn check_rng(seed: u64, name: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ fnv1a(name))
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerances<'a> {
    pub overrides: &'a std::collections::BTreeMap<String, f64>,
    /// Multiplies the built-in upper tolerances.
    pub scale: f64,
}

impl Tolerances<'_> {
    fn resolve(&self, spec: &CheckSpec) -> f64 {
        if let Some(&t) = self.overrides.get(spec.name) {
            return t;
        }
        match spec.relation {
            Relation::Below => spec.tolerance * self.scale,
            Relation::Above => spec.tolerance,
        }
    }
}

pub fn run_check(ctx: &Context, seed: u64, tol: Tolerances<'_>) -> Vec<Record> {
    CHECKS
        .par_iter()
        .map(|spec| {
            let tolerance = tol.resolve(spec);
            let mut rng = check_rng(seed, spec.name);
            match (spec.run)(ctx, &mut rng) {
                Ok(m) => {
                    let mut r = Record::new(spec.name, spec.anchor, m.value, tolerance, spec.relation);
                    for (k, v) in m.params {
                        r = r.param(k, v);
                    }
                    if let Some(t) = m.truncation {
                        r = r.truncation(t);
                    }
                    if let Some(n) = m.note {
                        r = r.note(n);
                    }
                    if let Some(v) = m.veto {
                        r.pass = false;
                        r = r.note(v);
                    }
                    r
                }
                Err(e) => Record::failed(spec.name, spec.anchor, tolerance, spec.relation, e.to_string()),
            }
        })
        .collect()
}

fn uniform_fn(rng: &mut ChaCha8Rng, m: usize, radius: f64) -> TestFn {
    TestFn::new(
        (0..m)
            .map(|_| C64::new(rng.gen_range(-radius..radius), rng.gen_range(-radius..radius)))
            .collect(),
    )
}

/// Random test function with norm at most `radius`.
fn ball_fn(rng: &mut ChaCha8Rng, m: usize, radius: f64) -> TestFn {
    let f = uniform_fn(rng, m, 1.0);
    let n = f.norm();
    if n == 0.0 {
        return f;
    }
    let r = radius * rng.gen_range(0.1..1.0);
    f.scale(C64::new(r / n, 0.0))
}

fn random_poly(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<WeylPoly, LabError> {
    let m = ctx.m();
    let terms = rng.gen_range(1..4);
    let items: Vec<(C64, TestFn)> = (0..terms)
        .map(|_| {
            let c = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            (c, uniform_fn(rng, m, 0.6))
        })
        .collect();
    Ok(WeylPoly::from_terms(m, items)?)
}

const SYMBOL_TOL: f64 = 1e-10;
const ALGEBRA_INSTANCES: usize = 500;

fn weyl_product(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Measure, LabError> {
    let mut worst: f64 = 0.0;
    for _ in 0..ALGEBRA_INSTANCES {
        let f = uniform_fn(rng, ctx.m(), 0.6);
        let g = uniform_fn(rng, ctx.m(), 0.6);
        let prod = ctx.mul(&WeylPoly::generator(f.clone()), &WeylPoly::generator(g.clone()))?;
        let expected = WeylPoly::term(cocycle(&f, &g), &f + &g);
        worst = worst.max(prod.max_deviation(&expected, SYMBOL_TOL));
    }
    Ok(Measure::of(worst).with("instances", ALGEBRA_INSTANCES))
}

fn weyl_adjoint(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Measure, LabError> {
    let mut worst: f64 = 0.0;
    for _ in 0..ALGEBRA_INSTANCES {
        let a = random_poly(ctx, rng)?;
        let b = random_poly(ctx, rng)?;
        let lhs = ctx.mul(&a, &b)?.adjoint();
        let rhs = ctx.mul(&b.adjoint(), &a.adjoint())?;
        worst = worst
            .max(lhs.max_deviation(&rhs, SYMBOL_TOL))
            .max(a.adjoint().adjoint().max_deviation(&a, 0.0));
    }
    Ok(Measure::of(worst).with("instances", ALGEBRA_INSTANCES))
}

fn weyl_associativity(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Measure, LabError> {
    let mut worst: f64 = 0.0;
    for _ in 0..ALGEBRA_INSTANCES {
        let a = random_poly(ctx, rng)?;
        let b = random_poly(ctx, rng)?;
        let c = random_poly(ctx, rng)?;
        let lhs = ctx.mul(&ctx.mul(&a, &b)?, &c)?;
        let rhs = ctx.mul(&a, &ctx.mul(&b, &c)?)?;
        worst = worst.max(lhs.max_deviation(&rhs, SYMBOL_TOL));
    }
    Ok(Measure::of(worst).with("instances", ALGEBRA_INSTANCES))
}

fn tau_group_law(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Measure, LabError> {
    let dynamics = VhmDynamics::new(ctx.modes.clone(), ctx.source.clone())?;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let a = random_poly(ctx, rng)?;
        let t = rng.gen_range(-10.0..10.0);
        let s = rng.gen_range(-10.0..10.0);
        worst = worst.max(dynamics.group_deviation(t, s, &a)?);
    }
    Ok(Measure::of(worst).with("instances", 100))
}

fn tau_heisenberg(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Measure, LabError> {
    let basis = ctx.basis(ctx.n)?;
    let f = ball_fn(rng, ctx.m(), 0.3);
    let times: Vec<f64> = (0..4).map(|_| rng.gen_range(-3.0..3.0)).collect();
    let dev = tau_heisenberg_deviation(&basis, &ctx.source, &f, &times)?;
    Ok(Measure::of(dev.value)
        .truncation(dev.truncation_estimate)
        .with("N", ctx.n)
        .with("f_norm", f.norm()))
}

fn gibbs_trace(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Measure, LabError> {
    let basis = ctx.basis(ctx.n)?;
    let mut worst: f64 = 0.0;
    let mut trunc: f64 = 0.0;
    for _ in 0..3 {
        let f = ball_fn(rng, ctx.m(), 0.5);
        let dev = gibbs_trace_deviation(&basis, &ctx.source, 1.0, &f)?;
        worst = worst.max(dev.value);
        trunc = trunc.max(dev.truncation_estimate);
    }
    Ok(Measure::of(worst).truncation(trunc).with("beta", 1.0).with("N", ctx.n))
}

fn betas_with_ground(ctx: &Context) -> Result<Vec<Beta<f64>>, LabError> {
    let mut out = ctx
        .betas
        .iter()
        .map(|&b| Beta::finite(b))
        .collect::<Result<Vec<_>, _>>()?;
    out.push(Beta::Infinite);
    Ok(out)
}

fn stationarity(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Measure, LabError> {
    let dynamics = VhmDynamics::new(ctx.modes.clone(), ctx.source.clone())?;
    let mut worst: f64 = 0.0;
    for beta in betas_with_ground(ctx)? {
        let state = QuasiFreeState::gibbs(ctx.modes.clone(), &ctx.source, beta)?;
        for _ in 0..20 {
            let a = random_poly(ctx, rng)?;
            let t = rng.gen_range(-10.0..10.0);
            let d = state.eval(&dynamics.apply(t, &a)?)? - state.eval(&a)?;
            worst = worst.max(d.norm());
        }
    }
    Ok(Measure::of(worst))
}

fn qpd_gram(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Measure, LabError> {
    let mut worst: f64 = 0.0;
    for beta in betas_with_ground(ctx)? {
        let state = QuasiFreeState::gibbs(ctx.modes.clone(), &ctx.source, beta)?;
        for _ in 0..10 {
            let fs: Vec<TestFn> = (0..6).map(|_| uniform_fn(rng, ctx.m(), 0.6)).collect();
            let gram = state.qpd_gram(&fs)?;
            let min = gram.symmetric_eigenvalues().min();
            worst = worst.max(-min).max((&gram - gram.adjoint()).camax());
        }
    }
    Ok(Measure::of(worst).with("size", 6))
}

fn two_point(ctx: &Context, beta: Beta<f64>, f: TestFn, g: TestFn) -> Result<TwoPoint, LabError> {
    Ok(TwoPoint::new(ctx.modes.clone(), ctx.source.clone(), beta, f, g)?)
}

const KMS_INSTANCES: usize = 20;

fn kms_pointwise(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Measure, LabError> {
    let mut worst: f64 = 0.0;
    for _ in 0..KMS_INSTANCES {
        let beta = ctx.betas[rng.gen_range(0..ctx.betas.len())];
        let f = uniform_fn(rng, ctx.m(), 0.5);
        let g = uniform_fn(rng, ctx.m(), 0.5);
        let tpf = two_point(ctx, Beta::finite(beta)?, f, g)?;
        worst = worst.max(kms_pointwise_residual(&tpf, &ctx.times)?);
    }
    Ok(Measure::of(worst)
        .with("instances", KMS_INSTANCES)
        .with("grid_points", ctx.times.len()))
}

fn kms_integral(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Measure, LabError> {
    let mut worst: f64 = 0.0;
    for _ in 0..3 {
        let f = uniform_fn(rng, ctx.m(), 0.4);
        let g = uniform_fn(rng, ctx.m(), 0.4);
        let tpf = two_point(ctx, Beta::finite(1.0)?, f, g)?;
        let window = GaussianWindow::new(rng.gen_range(-1.0..1.0), 1.0)?;
        let r = kms_integral_residual(&tpf, window)?;
        worst = worst.max(r.residual.norm()).max(r.contour_shift.norm());
    }
    Ok(Measure::of(worst).with("beta", 1.0).with("window_width", 1.0))
}

fn coth_identity(_: &Context, _: &mut ChaCha8Rng) -> Result<Measure, LabError> {
    let xs: Vec<f64> = (0..500).map(|j| 0.1 + 49.9 * j as f64 / 499.0).collect();
    Ok(Measure::of(coth_identity_residual(&xs)).with("x_min", 0.1).with("x_max", 50.0))
}

const SPECTRAL_SAMPLES: usize = 256;

fn support_args(ctx: &Context, rng: &mut ChaCha8Rng) -> (TestFn, TestFn) {
    // real, same-sign arguments keep the cross terms away from zero
    let f = TestFn::from_real(&(0..ctx.m()).map(|_| rng.gen_range(0.3..0.8)).collect::<Vec<_>>());
    let g = TestFn::from_real(&(0..ctx.m()).map(|_| rng.gen_range(0.3..0.8)).collect::<Vec<_>>());
    (f, g)
}

fn spectral_samples(ctx: &Context) -> usize {
    match default_grid(ctx.modes.omega()) {
        SpectralGrid::Commensurate { .. } => SPECTRAL_SAMPLES,
        SpectralGrid::Windowed { .. } => 4 * SPECTRAL_SAMPLES,
    }
}

fn ground_support(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Measure, LabError> {
    let (f, g) = support_args(ctx, rng);
    let tpf = two_point(ctx, Beta::Infinite, f, g)?;
    let s = ground_spectral_support(&tpf, spectral_samples(ctx))?;
    let mut m = Measure::of(s.negative_mass)
        .with("samples", s.samples)
        .with("commensurate", s.commensurate)
        .with("leakage_bound", s.leakage_bound);
    if !s.commensurate {
        m.note = Some("generic frequencies: Hann window, compare against leakage_bound".into());
        if s.negative_mass > s.leakage_bound {
            m.veto = Some("negative mass exceeds the window leakage bound".into());
        }
        m.value = (s.negative_mass - s.leakage_bound).max(0.0);
    }
    Ok(m)
}

fn thermal_support(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Measure, LabError> {
    let (f, g) = support_args(ctx, rng);
    let tpf = two_point(ctx, Beta::finite(1.0)?, f, g)?;
    let s = ground_spectral_support(&tpf, spectral_samples(ctx))?;
    Ok(Measure::of(s.negative_mass)
        .with("beta", 1.0)
        .with("samples", s.samples)
        .with("commensurate", s.commensurate))
}

fn beta_limit(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Measure, LabError> {
    let f = ball_fn(rng, ctx.m(), 0.5);
    let gaps = weakstar_convergence_sweep(&ctx.modes, &ctx.source, &f, &ctx.betas)?;
    let last = *gaps.last().expect("betas are nonempty");
    let mut m = Measure::of(last)
        .with("beta_max", *ctx.betas.last().expect("betas are nonempty"))
        .with("gaps", gaps.clone());
    if gaps.windows(2).any(|w| w[1] > w[0]) {
        m.veto = Some("gap is not monotone in beta".into());
    }
    Ok(m)
}

fn dressing_scalar(ctx: &Context, _: &mut ChaCha8Rng) -> Result<Measure, LabError> {
    let d = dressing_identities(&ctx.basis(ctx.n)?, &ctx.source)?;
    Ok(Measure::of(d.scalar_deviation)
        .truncation(d.truncation_estimate)
        .with("N", ctx.n)
        .with("v_norm", ctx.source.as_test_function().norm()))
}

fn dressing_hamiltonian(ctx: &Context, _: &mut ChaCha8Rng) -> Result<Measure, LabError> {
    let d = dressing_identities(&ctx.basis(ctx.n)?, &ctx.source)?;
    Ok(Measure::of(d.hamiltonian_deviation)
        .truncation(d.truncation_estimate)
        .with("N", ctx.n)
        .with("v_norm", ctx.source.as_test_function().norm()))
}

fn commutators(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Measure, LabError> {
    let basis = ctx.basis(ctx.n)?;
    let mut worst: f64 = 0.0;
    let mut trunc: f64 = 0.0;
    for _ in 0..3 {
        let f = ball_fn(rng, ctx.m(), 0.5);
        let g = ball_fn(rng, ctx.m(), 0.5);
        let c = commutator_checks(&basis, &f, &g)?;
        worst = worst.max(c.max_deviation());
        trunc = trunc.max(c.truncation_estimate);
    }
    Ok(Measure::of(worst).truncation(trunc).with("N", ctx.n))
}

const NORM_ORDER: usize = 6;

fn dressed_norm(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Measure, LabError> {
    // fixed point: |f| = |<f,g>| = 1 at n = 2 gives 3.5
    let one = TestFn::from_real(&[1.0]);
    let anchor = dressed_norm_tensor_power(&one, &one, 2);
    let mut worst = (anchor - 3.5).abs();
    let basis = ctx.basis(NORM_ORDER)?;
    for _ in 0..5 {
        let f = ball_fn(rng, ctx.m(), 1.0);
        let g = ball_fn(rng, ctx.m(), 1.0);
        for n in 0..=NORM_ORDER {
            let closed = dressed_norm_tensor_power(&f, &g, n);
            let matrix = dressed_norm_tensor_power_matrix(&basis, &f, &g, n)?;
            worst = worst.max((closed - matrix).abs());
        }
    }
    Ok(Measure::of(worst).with("max_order", NORM_ORDER).with("anchor_value", anchor))
}

fn iota_unitarity(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Measure, LabError> {
    let basis = ctx.basis(ctx.spectrum_n.max(4))?;
    let g = ball_fn(rng, ctx.m(), 1.0);
    let space = Dressed::new(basis, g)?;
    let dim = space.basis().dim();
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let psi = FockVector::new(nalgebra::DVector::from_fn(dim, |_, _| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        }));
        let image = space.iota(&psi);
        let scale = psi.norm().powi(2).max(1.0);
        worst = worst
            .max((image.norm().powi(2) - space.norm_sqr(&psi)).abs() / scale)
            .max((space.iota_inverse(&image).coeffs() - psi.coeffs()).camax());
    }
    Ok(Measure::of(worst))
}

fn pencil_spectrum(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Measure, LabError> {
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let rec = spectrum_instance(ctx, uniform_fn(rng, ctx.m(), 1.0), "pencil", 1e-10)?;
        worst = worst.max(rec.max_deviation);
    }
    Ok(Measure::of(worst).with("N", ctx.spectrum_n))
}

fn ground_g(ctx: &Context) -> TestFn {
    GIdentification::MinusVOverOmega.dressing_argument(&ctx.modes, &ctx.source)
}

fn ground_weyl_two_way(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Measure, LabError> {
    let space = Dressed::new(ctx.basis(ctx.n)?, ground_g(ctx))?;
    let mut worst: f64 = 0.0;
    let mut trunc: f64 = 0.0;
    for _ in 0..3 {
        let e = ground_weyl_expectation(&space, &ball_fn(rng, ctx.m(), 0.3))?;
        worst = worst.max(e.two_way_deviation());
        trunc = trunc.max(e.truncation_estimate);
    }
    Ok(Measure::of(worst).truncation(trunc).with("N", ctx.n))
}

/// Random `(f, v)` pairs with `g = -v/omega`.
fn phase_cases(
    ctx: &Context,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(TestFn, C64, C64)>, LabError> {
    (0..100)
        .map(|_| {
            let f = ball_fn(rng, ctx.m(), 0.5);
            let v = Src::new(uniform_fn(rng, ctx.m(), 1.0).coeffs().to_vec())?;
            let g = GIdentification::MinusVOverOmega.dressing_argument(&ctx.modes, &v);
            let state = QuasiFreeState::gibbs(ctx.modes.clone(), &v, Beta::Infinite)?;
            Ok((f.clone(), ground_weyl_closed(&g, &f)?, state.fourier(&f)))
        })
        .collect()
}

fn ground_weyl_phase(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Measure, LabError> {
    let worst = phase_cases(ctx, rng)?
        .iter()
        .fold(0.0f64, |acc, (_, dressed, ground)| {
            acc.max((dressed / dressed.norm() - ground / ground.norm()).norm())
        });
    Ok(Measure::of(worst).with("instances", 100))
}

fn ground_weyl_modulus(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Measure, LabError> {
    let worst = phase_cases(ctx, rng)?.iter().fold(0.0f64, |acc, (f, dressed, _)| {
        let expected = (-std::f64::consts::PI.powi(2) / 2.0 * f.norm_sqr()).exp();
        acc.max((dressed.norm() - expected).abs())
    });
    Ok(Measure::of(worst).with("instances", 100))
}

fn printed_modulus_gap(ctx: &Context, _: &mut ChaCha8Rng) -> Result<Measure, LabError> {
    let mut coeffs = vec![C64::new(0.0, 0.0); ctx.m()];
    coeffs[0] = C64::new(0.3, 0.0);
    let f = TestFn::new(coeffs);
    let computed = ground_weyl_closed(&ground_g(ctx), &f)?.norm();
    let printed = printed_ground_modulus(&f);
    let mut m = Measure::of((printed - computed).abs())
        .with("f_norm", 0.3)
        .with("computed", computed)
        .with("printed", printed);
    m.note = Some(
        "the printed modulus exp(-|f|^2/2) lacks the pi^2 of the Weyl exponent; \
         the computed modulus is exp(-(pi^2/2)|f|^2)"
            .into(),
    );
    Ok(m)
}

/// One pencil solve with the eigenvalues listed next to the reference.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumRecord {
    pub name: String,
    pub g: Vec<[f64; 2]>,
    pub eigenvalues: Vec<f64>,
    pub reference: Vec<f64>,
    pub gram_condition: f64,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl crate::report::Outcome for SpectrumRecord {
    fn key(&self) -> &str {
        &self.name
    }

    fn passed(&self) -> bool {
        self.pass
    }
}

fn spectrum_instance(ctx: &Context, g: TestFn, name: &str, tolerance: f64) -> Result<SpectrumRecord, LabError> {
    let space = Dressed::new(ctx.basis(ctx.spectrum_n)?, g.clone())?;
    let h = DressedH::new(space)?;
    let max_deviation = h.spectrum_deviation();
    Ok(SpectrumRecord {
        name: name.to_string(),
        g: g.coeffs().iter().map(|z| [z.re, z.im]).collect(),
        eigenvalues: h.spectrum().iter().copied().collect(),
        reference: free_spectrum(h.space().basis()).iter().copied().collect(),
        gram_condition: h.gram_condition(),
        max_deviation,
        tolerance,
        pass: max_deviation < tolerance,
    })
}

pub const SPECTRUM_INSTANCES: usize = 20;

pub fn run_spectrum(ctx: &Context, seed: u64, tolerance: f64) -> Result<Vec<SpectrumRecord>, LabError> {
    let mut rng = check_rng(seed, "spectrum");
    let mut gs = vec![TestFn::zeros(ctx.m())];
    gs.extend((0..SPECTRUM_INSTANCES).map(|_| uniform_fn(&mut rng, ctx.m(), 1.0)));
    gs.into_par_iter()
        .enumerate()
        .map(|(i, g)| spectrum_instance(ctx, g, &format!("pencil_{i:02}"), tolerance))
        .collect()
}

pub struct KmsTolerances {
    pub pointwise: f64,
    pub integral: f64,
    pub coth: f64,
    pub ground: f64,
    pub beta_limit: f64,
}

pub fn run_kms(ctx: &Context, seed: u64, tol: &KmsTolerances) -> Result<Vec<KmsRecord>, LabError> {
    let mut rng = check_rng(seed, "kms");
    let m = ctx.m() as f64;
    let mut jobs = Vec::new();
    for i in 0..KMS_INSTANCES {
        let beta = ctx.betas[rng.gen_range(0..ctx.betas.len())];
        let f = uniform_fn(&mut rng, ctx.m(), 0.5);
        let g = uniform_fn(&mut rng, ctx.m(), 0.5);
        let center = rng.gen_range(-1.0..1.0);
        jobs.push((i, beta, f, g, center));
    }
    let mut records: Vec<KmsRecord> = jobs
        .into_par_iter()
        .map(|(i, beta, f, g, center)| -> Result<Vec<KmsRecord>, LabError> {
            let tpf = two_point(ctx, Beta::finite(beta)?, f, g)?;
            let res = kms_pointwise_residual(&tpf, &ctx.times)?;
            let params = [("beta", beta), ("modes", m), ("grid_points", ctx.times.len() as f64)];
            let mut out = vec![KmsRecord::new(format!("kms_pointwise_{i:02}"), params, res, tol.pointwise)];
            if i < 4 {
                // the window grows like exp(beta^2 / 2 width^2) off the real axis
                let unit = two_point(ctx, Beta::finite(1.0)?, tpf.f().clone(), tpf.g().clone())?;
                let r = kms_integral_residual(&unit, GaussianWindow::new(center, 1.0)?)?;
                out.push(KmsRecord::new(
                    format!("kms_integral_{i:02}"),
                    [("beta", 1.0), ("center", center), ("width", 1.0)],
                    r.residual.norm(),
                    tol.integral,
                ));
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();

    let xs: Vec<f64> = (0..500).map(|j| 0.1 + 49.9 * j as f64 / 499.0).collect();
    records.push(KmsRecord::new(
        "coth_identity",
        [("x_min", 0.1), ("x_max", 50.0)],
        coth_identity_residual(&xs),
        tol.coth,
    ));
    let (f, g) = support_args(ctx, &mut rng);
    let tpf = two_point(ctx, Beta::Infinite, f.clone(), g)?;
    let s = ground_spectral_support(&tpf, spectral_samples(ctx))?;
    let ground_tol = if s.commensurate { tol.ground } else { s.leakage_bound };
    records.push(KmsRecord::new(
        "ground_spectral_support",
        [("samples", s.samples as f64), ("commensurate", f64::from(u8::from(s.commensurate)))],
        s.negative_mass,
        ground_tol,
    ));
    let gaps = weakstar_convergence_sweep(&ctx.modes, &ctx.source, &f, &ctx.betas)?;
    // each gap must undercut the previous one; the last is held to the tolerance
    for (i, (b, gap)) in ctx.betas.iter().zip(&gaps).enumerate() {
        let bound = if i + 1 == gaps.len() {
            tol.beta_limit.min(if i == 0 { 2.0 } else { gaps[i - 1] })
        } else if i == 0 {
            2.0
        } else {
            gaps[i - 1]
        };
        records.push(KmsRecord::new(format!("beta_limit_{i:02}"), [("beta", *b)], *gap, bound));
    }
    Ok(records)
}
