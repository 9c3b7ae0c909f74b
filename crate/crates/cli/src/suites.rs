//! Seeded randomized property suites.
//!
//! Trial `i` draws everything from `trial_rng(seed, i)`, so a report depends
//! only on the configuration. Trials run on the rayon pool and are
//! collected in index order.

use std::f64::consts::PI;
use std::str::FromStr;
use std::sync::Arc;

use bjortho::random::{
    orthogonalize_in_space, orthogonalize_l1, orthogonalize_lp, random_field, random_function, random_function_with_zeros,
    random_measure, random_measure_with, random_nonzero_vector, random_orthogonal_to, random_space,
    random_space_with_dim, trial_rng, TrialRng,
};
use bjortho::{
    best_approx, bj_direct, bj_in_space, bj_keckic, bj_l1_criterion, bj_lp_criterion, bj_scalar_lp, light_check,
    BochnerFunction, Complex64, DiscreteMeasure, Error, Field, OrthoCertificate, SmoothSpace, SubspaceBasis,
    Vector, Verdict,
};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::report::{SuiteReport, TrialRecord};

/// Tolerance of the direct oracle. It sits well inside the criteria's
/// borderline band, so the two never disagree for resolution reasons.
pub const ORACLE_TOL: f64 = 1e-9;

/// Kečkić phases per trial.
pub const KECKIC_PHASES: usize = 360;

/// Random coefficient perturbations per instance in the approx suite.
pub const PERTURBATIONS: usize = 1000;

/// Coefficient agreement required against the normal equations.
pub const NORMAL_EQUATIONS_TOL: f64 = 1e-6;

/// Step of the finite-difference check of `phase_gateaux`, and its bound.
pub const FD_STEP: f64 = 1e-6;
pub const FD_TOL: f64 = 1e-5;

/// Bound for the closed-form duality-map identities.
pub const DUALITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    TensorP,
    CritVsOracle,
    Light,
    Approx,
    DualityMap,
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Ok(match s {
            "thm-tensor-p" => Suite::TensorP,
            "crit-vs-oracle" => Suite::CritVsOracle,
            "light" => Suite::Light,
            "approx" => Suite::Approx,
            "duality-map" => Suite::DualityMap,
            other => {
                return Err(CliError::Usage(format!(
                    "unknown suite {other:?} (expected thm-tensor-p, crit-vs-oracle, light, approx or duality-map)"
                )))
            }
        })
    }
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::TensorP => "thm-tensor-p",
            Suite::CritVsOracle => "crit-vs-oracle",
            Suite::Light => "light",
            Suite::Approx => "approx",
            Suite::DualityMap => "duality-map",
        }
    }

    pub fn default_trials(self) -> usize {
        match self {
            Suite::TensorP | Suite::DualityMap => 200,
            Suite::CritVsOracle => 300,
            Suite::Light => 100,
            Suite::Approx => 50,
        }
    }

    /// For the duality-map suite these are the `ℓ^p` exponents of the
    /// tested spaces; Hilbert and scalar spaces are always included.
    pub fn default_p_list(self) -> Vec<f64> {
        match self {
            Suite::TensorP => vec![1.5, 2.0, 3.0],
            Suite::CritVsOracle => vec![1.0, 1.5, 2.0, 3.0],
            Suite::Light => vec![1.5, 2.0, 3.0],
            Suite::Approx => vec![2.0, 3.0],
            Suite::DualityMap => vec![1.5, 3.0],
        }
    }

    /// Whether `trials` counts all trials (cycling through the exponents)
    /// rather than trials per exponent or space kind.
    fn trials_are_total(self) -> bool {
        matches!(self, Suite::CritVsOracle | Suite::Light)
    }

    fn needs_open_exponents(self) -> bool {
        matches!(self, Suite::TensorP | Suite::Light | Suite::DualityMap)
    }
}

/// One unit of work: trial index and the exponent (or space) it uses.
#[derive(Debug, Clone, Copy)]
struct Job {
    index: usize,
    p: f64,
    kind: usize,
}

fn jobs(suite: Suite, cfg: &RunConfig) -> Vec<Job> {
    let ps = &cfg.p_list;
    match suite {
        _ if suite.trials_are_total() => (0..cfg.trials)
            .map(|i| Job {
                index: i,
                p: ps[i % ps.len()],
                kind: 0,
            })
            .collect(),
        Suite::DualityMap => {
            let kinds = duality_kinds(ps).len();
            (0..kinds * cfg.trials)
                .map(|i| Job {
                    index: i,
                    p: 0.0,
                    kind: i / cfg.trials,
                })
                .collect()
        }
        _ => (0..ps.len() * cfg.trials)
            .map(|i| Job {
                index: i,
                p: ps[i / cfg.trials],
                kind: 0,
            })
            .collect(),
    }
}

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> CliResult<SuiteReport> {
    cfg.validate()?;
    if suite.needs_open_exponents() && cfg.p_list.iter().any(|p| *p <= 1.0) {
        return Err(CliError::Usage(format!("the {} suite needs every p > 1", suite.name())));
    }
    let records = jobs(suite, cfg)
        .into_par_iter()
        .map(|job| {
            let mut rng = trial_rng(cfg.seed, job.index as u64);
            let tol = cfg.tol;
            match suite {
                Suite::TensorP => tensor_trial(&mut rng, job, tol),
                Suite::CritVsOracle => crit_trial(&mut rng, job, tol),
                Suite::Light => light_trial(&mut rng, job, tol),
                Suite::Approx => approx_trial(&mut rng, job, tol),
                Suite::DualityMap => duality_trial(&mut rng, job, &duality_kinds(&cfg.p_list)[job.kind]),
            }
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(SuiteReport::from_records(suite.name(), cfg.seed, &cfg.p_list, cfg.tol, records))
}

fn record(suite: Suite, job: Job, dim: usize, atoms: usize) -> TrialRecord {
    TrialRecord {
        suite: suite.name().to_string(),
        trial: job.index,
        p: job.p,
        dim,
        atoms,
        verdict_criterion: String::new(),
        verdict_oracle: String::new(),
        lhs: 0.0,
        rhs: 0.0,
        margin: 0.0,
        borderline: false,
        passed: true,
        violation: 0.0,
        note: None,
    }
}

fn with_certificates(mut r: TrialRecord, crit: &OrthoCertificate, oracle: Verdict) -> TrialRecord {
    r.verdict_criterion = crit.verdict.to_string();
    r.verdict_oracle = oracle.to_string();
    r.lhs = crit.lhs;
    r.rhs = crit.rhs;
    r.margin = crit.margin();
    r.borderline = crit.borderline;
    r
}

fn relative_gap(c: &OrthoCertificate) -> f64 {
    if c.scale > 0.0 {
        (c.lhs - c.rhs).abs() / c.scale
    } else {
        0.0
    }
}

/// `f ⊗ x ⊥ g ⊗ y` in `L^p(μ, X)` against `f ⊥ g` or `x ⊥ y`.
fn tensor_trial(rng: &mut TrialRng, job: Job, tol: f64) -> CliResult<TrialRecord> {
    let p = job.p;
    let field = random_field(rng);
    let m = random_measure(rng);
    let scalar = SmoothSpace::scalar(field);
    let sp = random_space(rng, field);
    let f = random_function(rng, &m, &scalar);
    let mut g = random_function(rng, &m, &scalar);
    let x = random_nonzero_vector(rng, &sp);
    let mut y = random_nonzero_vector(rng, &sp);
    let branch = rng.gen_range(0..4);
    if branch == 0 || branch == 2 {
        g = orthogonalize_lp(&f, &g, p)?;
    }
    if branch == 1 || branch == 2 {
        y = orthogonalize_in_space(&sp, &x, &y)?;
    }
    let fx = BochnerFunction::elementary_tensor(&f, &x, sp)?;
    let gy = BochnerFunction::elementary_tensor(&g, &y, sp)?;

    let tensor = bj_lp_criterion(&fx, &gy, p, 0.0, tol)?;
    let scalar_side = bj_scalar_lp(&f, &g, p, tol)?;
    let vector_side = bj_in_space(&sp, &x, &y, tol)?;
    let either = scalar_side.is_orthogonal() || vector_side.is_orthogonal();

    let direct_tensor = bj_direct(&fx, &gy, p, ORACLE_TOL)?;
    let direct_scalar = bj_direct(&f, &g, p, ORACLE_TOL)?;
    let one = Arc::new(DiscreteMeasure::counting(1)?);
    let xs = BochnerFunction::new(Arc::clone(&one), sp, vec![x])?;
    let ys = BochnerFunction::new(one, sp, vec![y])?;
    let direct_vector = bj_direct(&xs, &ys, p, ORACLE_TOL)?;

    let mut r = with_certificates(record(Suite::TensorP, job, sp.dim(), m.len()), &tensor, direct_tensor.verdict);
    r.borderline = tensor.borderline || scalar_side.borderline || vector_side.borderline;
    let mut problems = Vec::new();
    if tensor.is_orthogonal() != either {
        problems.push("tensor criterion differs from the factor verdicts");
    }
    if direct_tensor.is_orthogonal() != either {
        problems.push("direct oracle on the tensors differs from the factor verdicts");
    }
    if direct_scalar.verdict != scalar_side.verdict {
        problems.push("direct oracle differs on the scalar factors");
    }
    if direct_vector.verdict != vector_side.verdict {
        problems.push("direct oracle differs on the vector factors");
    }
    r.passed = r.borderline || problems.is_empty();
    if !r.passed {
        r.violation = relative_gap(&tensor);
    }
    r.note = Some(match (r.borderline, problems.is_empty()) {
        (true, _) => "borderline: excluded".to_string(),
        (false, true) => format!("branch {branch}: scalar {}, vector {}", scalar_side.verdict, vector_side.verdict),
        (false, false) => problems.join("; "),
    });
    Ok(r)
}

/// The integral criterion against the direct oracle and Kečkić's test.
fn crit_trial(rng: &mut TrialRng, job: Job, tol: f64) -> CliResult<TrialRecord> {
    let p = job.p;
    let field = random_field(rng);
    let m = random_measure(rng);
    let sp = random_space(rng, field);
    let f = if p == 1.0 && rng.gen_bool(0.5) {
        random_function_with_zeros(rng, &m, &sp).0
    } else {
        random_function(rng, &m, &sp)
    };
    let mut g = random_function(rng, &m, &sp);
    if rng.gen_bool(0.5) {
        g = if p == 1.0 {
            orthogonalize_l1(&f, &g, rng.gen_range(0.0..0.9))?
        } else {
            orthogonalize_lp(&f, &g, p)?
        };
    }
    let crit = if p == 1.0 {
        bj_l1_criterion(&f, &g, 0.0, tol)?
    } else {
        bj_lp_criterion(&f, &g, p, 0.0, tol)?
    };
    let direct = bj_direct(&f, &g, p, ORACLE_TOL)?;
    let keckic = bj_keckic(&f, &g, p, KECKIC_PHASES, tol)?;
    let mut r = with_certificates(record(Suite::CritVsOracle, job, sp.dim(), m.len()), &crit, direct.verdict);
    let agree = crit.verdict == direct.verdict && crit.verdict == keckic.verdict;
    r.passed = crit.borderline || agree;
    if !r.passed {
        r.violation = relative_gap(&crit);
    }
    r.note = Some(if crit.borderline {
        "borderline: excluded".to_string()
    } else {
        format!("{field}, keckic {}", keckic.verdict)
    });
    Ok(r)
}

/// Light's theorem: `f ⊥ L^p(μ, Y)` iff `f(s) ⊥ Y` at every atom of
/// positive weight.
fn light_trial(rng: &mut TrialRng, job: Job, tol: f64) -> CliResult<TrialRecord> {
    let p = job.p;
    let field = random_field(rng);
    let dim = rng.gen_range(2..=6);
    let sp = random_space_with_dim(rng, field, dim);
    let k = rng.gen_range(1..dim);
    let ys: Vec<Vector> = (0..k).map(|_| random_nonzero_vector(rng, &sp)).collect();
    let mut m = random_measure(rng);
    let n = m.len();
    // 0: pointwise orthogonal, 1: one violating atom, 2: a violating atom
    // of weight zero, 3: random mixture
    let case = job.index % 4;
    let bad = rng.gen_range(0..n);
    if case == 2 {
        let mut w = m.weights().to_vec();
        w[bad] = 0.0;
        m = Arc::new(DiscreteMeasure::new(m.atoms().to_vec(), w)?);
    }
    let mut values = Vec::with_capacity(n);
    for s in 0..n {
        let violating = match case {
            0 => false,
            1 | 2 => s == bad,
            _ => rng.gen_bool(0.3),
        };
        values.push(if violating {
            random_nonzero_vector(rng, &sp)
        } else if case == 3 && rng.gen_bool(0.1) {
            sp.zero()
        } else {
            random_orthogonal_to(rng, &sp, &ys)?
        });
    }
    let f = BochnerFunction::new(Arc::clone(&m), sp, values)?;
    let rep = light_check(&f, &ys, p, 0.0, tol)?;

    // pointwise ratios inside (tol, √tol] are too close to call
    let borderline = f.values().iter().zip(m.weights()).any(|(v, w)| {
        *w > 0.0
            && !v.is_zero()
            && ys.iter().any(|y| {
                let fy = sp.support_functional(v).map(|fv| fv.apply(y).norm()).unwrap_or(0.0);
                let ratio = fy / sp.norm(y).unwrap_or(1.0);
                ratio > tol && ratio <= tol.sqrt()
            })
    });
    let equivalent = rep.subspace_verdict.is_orthogonal() == rep.pointwise_failures.is_empty();
    let expected = match case {
        0 | 2 => rep.subspace_verdict.is_orthogonal() && rep.pointwise_failures.is_empty(),
        1 => {
            !rep.subspace_verdict.is_orthogonal()
                && rep.pointwise_failures == vec![bad]
                && rep.violation.as_ref().is_some_and(|v| v.atom == bad)
        }
        _ => true,
    };
    let mut r = record(Suite::Light, job, dim, n);
    r.verdict_criterion = rep.subspace_verdict.to_string();
    r.verdict_oracle = Verdict::from_bool(rep.pointwise_failures.is_empty()).to_string();
    if let Some(v) = &rep.violation {
        r.lhs = v.certificate.lhs;
        r.rhs = v.certificate.rhs;
        r.margin = v.certificate.margin();
    }
    r.borderline = borderline;
    r.passed = borderline || (equivalent && expected);
    if !r.passed {
        r.violation = 1.0;
    }
    r.note = Some(format!("case {case}, {} pointwise failures", rep.pointwise_failures.len()));
    Ok(r)
}

/// Weighted least-squares coefficients `min Σ w ‖f(s) − Σ cᵢ gᵢ(s)‖²`.
pub fn normal_equations(f: &BochnerFunction, basis: &[BochnerFunction]) -> Vec<Complex64> {
    let w = f.measure().weights();
    let dim = f.space().dim();
    let rows = w.len() * dim;
    let a = DMatrix::from_fn(rows, basis.len(), |r, i| {
        basis[i].value(r / dim).coords()[r % dim] * w[r / dim].sqrt()
    });
    let b = DVector::from_fn(rows, |r, _| f.value(r / dim).coords()[r % dim] * w[r / dim].sqrt());
    let x = a.svd(true, true).solve(&b, 1e-14).expect("svd with both factors");
    x.iter().copied().collect()
}

/// Draws a well-conditioned basis of `k` random functions.
fn random_basis(rng: &mut TrialRng, m: &Arc<DiscreteMeasure>, sp: &SmoothSpace, k: usize) -> CliResult<SubspaceBasis> {
    loop {
        let elems = (0..k).map(|_| random_function(rng, m, sp)).collect();
        match SubspaceBasis::new(elems) {
            Ok(b) => return Ok(b),
            Err(Error::DegenerateBasis(_)) => continue,
            Err(e) => return Err(e.into()),
        }
    }
}

/// Best approximation: normal equations for `L²(μ, H)`, otherwise the
/// characterization check and random coefficient perturbations.
fn approx_trial(rng: &mut TrialRng, job: Job, tol: f64) -> CliResult<TrialRecord> {
    let p = job.p;
    let field = random_field(rng);
    let k = rng.gen_range(1..=4);
    let atoms = rng.gen_range(k.max(2)..=8);
    let m = random_measure_with(rng, atoms);
    let sp = if p == 2.0 {
        SmoothSpace::hilbert(field, rng.gen_range(1..=4))?
    } else {
        random_space(rng, field)
    };
    let f = random_function(rng, &m, &sp);
    let basis = random_basis(rng, &m, &sp, k)?;
    let mut r = record(Suite::Approx, job, sp.dim(), atoms);
    r.rhs = tol;

    let res = match best_approx(&f, &basis, p, tol) {
        Ok(res) => res,
        Err(Error::NotCertified(msg)) => {
            r.verdict_criterion = "uncertified".into();
            r.verdict_oracle = "n/a".into();
            r.passed = false;
            r.violation = 1.0;
            r.note = Some(msg);
            return Ok(r);
        }
        Err(e) => return Err(e.into()),
    };
    r.verdict_criterion = if res.certified { "certified" } else { "uncertified" }.into();
    // worst optimality residual relative to its scale (p = 1 reports lhs − rhs)
    r.lhs = res
        .optimality_residuals
        .iter()
        .zip(&res.residual_scales)
        .map(|(a, s)| if *s > 0.0 { a / s } else { 0.0 })
        .fold(f64::NEG_INFINITY, f64::max);

    let oracle_ok = if p == 2.0 && sp.kind() == bjortho::NormKind::Hilbert {
        let ne = normal_equations(&f, basis.elements());
        let err = res
            .coefficients
            .iter()
            .zip(&ne)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        r.note = Some(format!("max coefficient error {err:.3e} against the normal equations"));
        err <= NORMAL_EQUATIONS_TOL
    } else {
        let objective = |c: &[Complex64]| -> CliResult<f64> { Ok(f.sub(&basis.combine(c)?)?.lp_norm(p)?) };
        let best = objective(&res.coefficients)?;
        let mut gain = f64::NEG_INFINITY;
        for _ in 0..PERTURBATIONS {
            let c: Vec<Complex64> = res
                .coefficients
                .iter()
                .map(|c| {
                    let d = match field {
                        Field::Real => Complex64::new(rng.gen_range(-1.0..1.0), 0.0),
                        Field::Complex => Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                    };
                    c + d * (10.0 * tol)
                })
                .collect();
            gain = gain.max(best - objective(&c)?);
        }
        r.note = Some(format!("largest improvement over {PERTURBATIONS} perturbations {gain:.3e}"));
        gain <= tol
    };
    r.verdict_oracle = if oracle_ok { "optimal" } else { "improvable" }.into();
    r.margin = r.rhs - r.lhs;
    r.passed = res.certified && oracle_ok;
    if !r.passed {
        r.violation = r.lhs.max(0.0);
    }
    Ok(r)
}

fn duality_kinds(p_list: &[f64]) -> Vec<SmoothSpace> {
    let mut kinds = Vec::new();
    for field in [Field::Real, Field::Complex] {
        for &p in p_list {
            // the dimension is drawn per trial; 1 is a placeholder
            kinds.push(SmoothSpace::lp(field, 1, p).expect("checked exponent"));
        }
        kinds.push(SmoothSpace::hilbert(field, 1).expect("dim 1"));
        kinds.push(SmoothSpace::scalar(field));
    }
    kinds
}

fn with_dim(kind: &SmoothSpace, dim: usize) -> SmoothSpace {
    match kind.kind() {
        bjortho::NormKind::Lp(p) => SmoothSpace::lp(kind.field(), dim, p).expect("checked exponent"),
        bjortho::NormKind::Hilbert => SmoothSpace::hilbert(kind.field(), dim).expect("dim >= 1"),
        bjortho::NormKind::Scalar => *kind,
    }
}

/// Closed-form identities of the duality map, the phase derivative against
/// a forward difference, and the continuity smoke test.
fn duality_trial(rng: &mut TrialRng, job: Job, kind: &SmoothSpace) -> CliResult<TrialRecord> {
    let sp = with_dim(kind, if kind.is_scalar() { 1 } else { rng.gen_range(1..=6) });
    let x = random_nonzero_vector(rng, &sp);
    let nx = sp.norm(&x)?;
    let fx = sp.support_functional(&x)?;
    let mut errors: Vec<(&str, f64, f64)> = vec![
        ("norming", (fx.apply(&x) - Complex64::new(nx, 0.0)).norm() / nx, DUALITY_TOL),
        ("dual norm", (sp.dual_norm(&fx) - 1.0).abs(), DUALITY_TOL),
    ];
    let alpha = rng.gen_range(0.01..100.0);
    let fa = sp.support_functional(&x.scale(Complex64::new(alpha, 0.0)))?;
    errors.push(("homogeneity", sp.dual_norm(&fa.sub(&fx)), DUALITY_TOL));

    let y = random_nonzero_vector(rng, &sp);
    let phi = match sp.field() {
        Field::Real => {
            if rng.gen_bool(0.5) {
                0.0
            } else {
                PI
            }
        }
        Field::Complex => rng.gen_range(0.0..2.0 * PI),
    };
    let rot = Complex64::from_polar(1.0, phi);
    let rot = if sp.field() == Field::Real { Complex64::new(rot.re.signum(), 0.0) } else { rot };
    let norm_at = |t: f64| sp.norm(&Vector(x.coords().iter().zip(y.coords()).map(|(a, b)| a + rot * b * t).collect()));
    let fd = (norm_at(FD_STEP)? - nx) / FD_STEP;
    let analytic = sp.phase_gateaux(&x, &y, phi)?;
    errors.push(("finite difference", (fd - analytic).abs(), FD_TOL));
    let opposite = sp.phase_gateaux(&x, &y, phi + PI)?;
    errors.push(("phase antisymmetry", (analytic + opposite).abs(), DUALITY_TOL * (1.0 + analytic.abs())));

    let unit = x.scale(Complex64::new(1.0 / nx, 0.0));
    let h = random_nonzero_vector(rng, &sp);
    let h = h.scale(Complex64::new(1.0 / sp.norm(&h)?, 0.0));
    let fu = sp.support_functional(&unit)?;
    let dists = [1e-3, 1e-4, 1e-5]
        .iter()
        .map(|&e| {
            let v = Vector(unit.coords().iter().zip(h.coords()).map(|(a, b)| a + b * e).collect());
            Ok(sp.dual_norm(&sp.support_functional(&v)?.sub(&fu)))
        })
        .collect::<CliResult<Vec<f64>>>()?;
    let monotone = dists[0] >= dists[1] && dists[1] >= dists[2];

    let worst = errors.iter().map(|(_, e, t)| e / t).fold(0.0, f64::max);
    let closed_form_ok = errors.iter().filter(|(n, _, _)| *n != "finite difference").all(|(_, e, t)| e <= t);
    let fd_ok = errors.iter().filter(|(n, _, _)| *n == "finite difference").all(|(_, e, t)| e <= t);
    let p = match sp.kind() {
        bjortho::NormKind::Lp(p) => p,
        _ => 2.0,
    };
    let mut r = record(Suite::DualityMap, Job { p, ..job }, sp.dim(), 0);
    r.verdict_criterion = if closed_form_ok { "pass" } else { "fail" }.into();
    r.verdict_oracle = if fd_ok && monotone { "pass" } else { "fail" }.into();
    r.lhs = worst;
    r.rhs = 1.0;
    r.margin = 1.0 - worst;
    r.passed = closed_form_ok && fd_ok && monotone;
    if !r.passed {
        r.violation = (worst - 1.0).max(0.0);
        let mut failed: Vec<String> = errors
            .iter()
            .filter(|(_, e, t)| e > t)
            .map(|(n, e, t)| format!("{n} {e:.3e} > {t:.1e}"))
            .collect();
        if !fd_ok {
            // a central difference separates truncation error from a wrong derivative
            let h = 1e-8;
            let central = (norm_at(h)? - norm_at(-h)?) / (2.0 * h);
            failed.push(format!("analytic {analytic:.12e}, central difference {central:.12e}"));
        }
        if !monotone {
            failed.push(format!("continuity distances {dists:?} not decreasing"));
        }
        r.note = Some(failed.join("; "));
    } else {
        r.note = Some(format!("{} {}", sp.field(), kind_name(&sp)));
    }
    Ok(r)
}

fn kind_name(sp: &SmoothSpace) -> String {
    match sp.kind() {
        bjortho::NormKind::Lp(p) => format!("lp({p})"),
        bjortho::NormKind::Hilbert => "hilbert".into(),
        bjortho::NormKind::Scalar => "scalar".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(trials: usize, p: Vec<f64>) -> RunConfig {
        RunConfig::new(42, trials, 1e-6, p).unwrap()
    }

    #[test]
    fn suite_names_round_trip() {
        for s in [Suite::TensorP, Suite::CritVsOracle, Suite::Light, Suite::Approx, Suite::DualityMap] {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn job_layouts() {
        let c = cfg(3, vec![1.5, 2.0]);
        assert_eq!(jobs(Suite::TensorP, &c).len(), 6);
        assert_eq!(jobs(Suite::TensorP, &c)[3].p, 2.0);
        let l = jobs(Suite::Light, &c);
        assert_eq!(l.len(), 3);
        assert_eq!(l.iter().map(|j| j.p).collect::<Vec<_>>(), vec![1.5, 2.0, 1.5]);
        assert_eq!(jobs(Suite::DualityMap, &c).len(), 3 * 8);
    }

    #[test]
    fn small_runs_pass_and_repeat() {
        for s in [Suite::TensorP, Suite::CritVsOracle, Suite::Light, Suite::Approx, Suite::DualityMap] {
            let c = cfg(4, s.default_p_list());
            let a = run_suite(s, &c).unwrap();
            assert!(a.passed, "{:?}", a.records.iter().filter(|r| !r.passed).collect::<Vec<_>>());
            let b = run_suite(s, &c).unwrap();
            assert_eq!(a.records, b.records);
        }
    }

    #[test]
    fn open_exponents_are_enforced() {
        assert!(run_suite(Suite::Light, &cfg(1, vec![1.0])).is_err());
        assert!(run_suite(Suite::CritVsOracle, &cfg(1, vec![1.0])).is_ok());
    }
}
