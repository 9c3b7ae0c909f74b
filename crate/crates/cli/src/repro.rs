//! Exact reproduction of the two `p = 1` counterexamples to the tensor
//! equivalence.
//!
//! `tensor-hilbert`: counting measure on `{1,…,5}`, `A = {1,2,3}`,
//! `B = {2,3,5}`, `x = (i,−i,0,0,0)`, `y = (i,0,−i,0,0)` in `ℓ²(ℂ⁵)`.
//! `χ_A ⊗ x ⊥ χ_B ⊗ y` in `L¹(μ, ℓ²)` although neither factor pair is
//! orthogonal.
//!
//! `tensor-l1l1`: the same `A`, `B` and `C = [−1,2]`, `D = [−2,1]` under
//! Lebesgue measure, discretized as the four unit cells of `[−2,2]` (both
//! sets are unions of cells, so the integrals are exact).
//! `χ_A χ_C ⊥ χ_B χ_D` in `L¹(μ×ν)` although `χ_A ⊥̸ χ_B` and `χ_C ⊥̸ χ_D`.

use std::str::FromStr;
use std::sync::Arc;

use bjortho::{
    bj_direct, bj_in_space, bj_l1_criterion, bj_scalar_l1, BochnerFunction, Complex64, DiscreteMeasure, Field,
    OrthoCertificate, SmoothSpace, Vector, Verdict,
};
use serde::Serialize;

use crate::config::Format;
use crate::error::{CliError, CliResult};

/// Allowed deviation of every reproduced quantity.
pub const REPRO_TOL: f64 = 1e-9;

const TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Example {
    TensorHilbert,
    TensorL1L1,
}

impl FromStr for Example {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "tensor-hilbert" => Ok(Example::TensorHilbert),
            "tensor-l1l1" => Ok(Example::TensorL1L1),
            other => Err(CliError::Usage(format!(
                "unknown example {other:?} (expected tensor-hilbert or tensor-l1l1)"
            ))),
        }
    }
}

impl Example {
    pub fn name(self) -> &'static str {
        match self {
            Example::TensorHilbert => "tensor-hilbert",
            Example::TensorL1L1 => "tensor-l1l1",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Quantity {
    pub name: String,
    pub value: f64,
    pub expected: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictCheck {
    pub name: String,
    pub value: Verdict,
    pub expected: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReproReport {
    pub example: String,
    pub quantities: Vec<Quantity>,
    pub verdicts: Vec<VerdictCheck>,
    pub certificates: Vec<(String, OrthoCertificate)>,
    pub passed: bool,
}

impl ReproReport {
    fn new(example: Example) -> Self {
        ReproReport {
            example: example.name().to_string(),
            quantities: Vec::new(),
            verdicts: Vec::new(),
            certificates: Vec::new(),
            passed: true,
        }
    }

    fn quantity(&mut self, name: &str, value: f64, expected: f64) {
        let deviation = (value - expected).abs();
        self.passed &= deviation <= REPRO_TOL;
        self.quantities.push(Quantity {
            name: name.to_string(),
            value,
            expected,
            deviation,
        });
    }

    fn verdict(&mut self, name: &str, cert: &OrthoCertificate, expected: Verdict) {
        self.passed &= cert.verdict == expected;
        self.verdicts.push(VerdictCheck {
            name: name.to_string(),
            value: cert.verdict,
            expected,
        });
        self.certificates.push((name.to_string(), cert.clone()));
    }

    pub fn render(&self, format: Format) -> CliResult<String> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(self)? + "\n"),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["name", "value", "expected", "deviation"])?;
                for q in &self.quantities {
                    w.serialize((&q.name, q.value, q.expected, q.deviation))?;
                }
                for v in &self.verdicts {
                    let dev = if v.value == v.expected { 0.0 } else { 1.0 };
                    w.serialize((&v.name, v.value.to_string(), v.expected.to_string(), dev))?;
                }
                let bytes = w.into_inner().map_err(|e| e.into_error())?;
                Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
            }
        }
    }
}

fn indicator(m: &Arc<DiscreteMeasure>, pred: impl Fn(f64) -> bool) -> CliResult<BochnerFunction> {
    let vals: Vec<Complex64> = m
        .atoms()
        .iter()
        .map(|a| {
            let t = a.coord().or_else(|| a.index().map(|i| i as f64)).unwrap_or(f64::NAN);
            Complex64::new(if pred(t) { 1.0 } else { 0.0 }, 0.0)
        })
        .collect();
    Ok(BochnerFunction::scalar(Arc::clone(m), Field::Complex, &vals)?)
}

fn in_set(set: &'static [f64]) -> impl Fn(f64) -> bool {
    move |t| set.contains(&t)
}

/// `μ(S)` for the set where `f` equals one.
fn measure_of(f: &BochnerFunction) -> f64 {
    f.measure()
        .weights()
        .iter()
        .zip(f.values())
        .filter(|(_, v)| !v.is_zero())
        .map(|(w, _)| w)
        .sum()
}

fn product(a: &BochnerFunction, b: &BochnerFunction) -> CliResult<BochnerFunction> {
    let vals: Vec<Complex64> = (0..a.measure().len())
        .map(|i| a.scalar_value(i) * b.scalar_value(i))
        .collect();
    Ok(BochnerFunction::scalar(a.measure_arc().clone(), Field::Complex, &vals)?)
}

fn complement(a: &BochnerFunction) -> CliResult<BochnerFunction> {
    let vals: Vec<Complex64> = (0..a.measure().len())
        .map(|i| Complex64::new(1.0, 0.0) - a.scalar_value(i))
        .collect();
    Ok(BochnerFunction::scalar(a.measure_arc().clone(), Field::Complex, &vals)?)
}

fn tensor_hilbert() -> CliResult<ReproReport> {
    let mut rep = ReproReport::new(Example::TensorHilbert);
    let m = Arc::new(DiscreteMeasure::counting(5)?);
    let chi_a = indicator(&m, in_set(&[1.0, 2.0, 3.0]))?;
    let chi_b = indicator(&m, in_set(&[2.0, 3.0, 5.0]))?;
    rep.quantity("mu(A∩B)", measure_of(&product(&chi_a, &chi_b)?), 2.0);
    rep.quantity("mu(A^c∩B)", measure_of(&product(&complement(&chi_a)?, &chi_b)?), 1.0);
    let scalar = bj_scalar_l1(&chi_a, &chi_b, 0.0, TOL)?;
    rep.quantity("chi_A vs chi_B lhs", scalar.lhs, 2.0);
    rep.quantity("chi_A vs chi_B rhs", scalar.rhs, 1.0);
    rep.verdict("chi_A ⊥ chi_B", &scalar, Verdict::NotOrthogonal);

    let sp = SmoothSpace::hilbert(Field::Complex, 5)?;
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let x = Vector(vec![c(0.0, 1.0), c(0.0, -1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    let y = Vector(vec![c(0.0, 1.0), c(0.0, 0.0), c(0.0, -1.0), c(0.0, 0.0), c(0.0, 0.0)]);
    let inner: Complex64 = y.coords().iter().zip(x.coords()).map(|(a, b)| a * b.conj()).sum();
    rep.quantity("Re <y,x>", inner.re, 1.0);
    rep.quantity("Im <y,x>", inner.im, 0.0);
    rep.verdict("x ⊥ y", &bj_in_space(&sp, &x, &y, TOL)?, Verdict::NotOrthogonal);

    let h1 = BochnerFunction::elementary_tensor(&chi_a, &x, sp)?;
    let h2 = BochnerFunction::elementary_tensor(&chi_b, &y, sp)?;
    let cert = bj_l1_criterion(&h1, &h2, 0.0, TOL)?;
    rep.quantity("h1 vs h2 lhs", cert.lhs, 2f64.sqrt());
    rep.quantity("h1 vs h2 rhs", cert.rhs, 2f64.sqrt());
    rep.verdict("h1 ⊥ h2", &cert, Verdict::Orthogonal);
    rep.verdict("h1 ⊥ h2 (direct)", &bj_direct(&h1, &h2, 1.0, TOL)?, Verdict::Orthogonal);
    Ok(rep)
}

fn tensor_l1l1() -> CliResult<ReproReport> {
    let mut rep = ReproReport::new(Example::TensorL1L1);
    let mu = Arc::new(DiscreteMeasure::counting(5)?);
    let chi_a = indicator(&mu, in_set(&[1.0, 2.0, 3.0]))?;
    let chi_b = indicator(&mu, in_set(&[2.0, 3.0, 5.0]))?;
    let ab = bj_scalar_l1(&chi_a, &chi_b, 0.0, TOL)?;
    rep.quantity("mu(A∩B)", ab.lhs, 2.0);
    rep.quantity("mu(A^c∩B)", ab.rhs, 1.0);
    rep.verdict("chi_A ⊥ chi_B", &ab, Verdict::NotOrthogonal);

    // unit cells of [−2, 2], labelled by their midpoints
    let nu = Arc::new(DiscreteMeasure::interval(-2.0, 2.0, 4)?);
    let chi_c = indicator(&nu, |t| (-1.0..=2.0).contains(&t))?;
    let chi_d = indicator(&nu, |t| (-2.0..=1.0).contains(&t))?;
    let cd = bj_scalar_l1(&chi_c, &chi_d, 0.0, TOL)?;
    rep.quantity("nu(C∩D)", cd.lhs, 2.0);
    rep.quantity("nu(C^c∩D)", cd.rhs, 1.0);
    rep.verdict("chi_C ⊥ chi_D", &cd, Verdict::NotOrthogonal);

    let f = BochnerFunction::scalar_product_function(&chi_a, &chi_c)?;
    let g = BochnerFunction::scalar_product_function(&chi_b, &chi_d)?;
    let cert = bj_scalar_l1(&f, &g, 0.0, TOL)?;
    rep.quantity("product lhs", cert.lhs, 4.0);
    rep.quantity("product rhs", cert.rhs, 5.0);
    rep.verdict("chi_A chi_C ⊥ chi_B chi_D", &cert, Verdict::Orthogonal);
    rep.verdict("chi_A chi_C ⊥ chi_B chi_D (direct)", &bj_direct(&f, &g, 1.0, TOL)?, Verdict::Orthogonal);
    Ok(rep)
}

pub fn reproduce(example: Example) -> CliResult<ReproReport> {
    match example {
        Example::TensorHilbert => tensor_hilbert(),
        Example::TensorL1L1 => tensor_l1l1(),
    }
}
