//! Vector-valued functions on a discrete measure: elements of `L^p(μ, X)`.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::measure::{neumaier, DiscreteMeasure};
use crate::space::{Field, RawVector, SmoothSpace, Vector};

#[derive(Serialize, Deserialize)]
struct RawBochner {
    measure: DiscreteMeasure,
    space: SmoothSpace,
    values: Vec<RawVector>,
}

/// A function `S → X` given by one vector per atom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBochner", into = "RawBochner")]
pub struct BochnerFunction {
    measure: Arc<DiscreteMeasure>,
    space: SmoothSpace,
    values: Vec<Vector>,
}

impl TryFrom<RawBochner> for BochnerFunction {
    type Error = crate::Error;

    fn try_from(raw: RawBochner) -> Result<Self> {
        let values = raw.values.into_iter().map(Vector::from_raw).collect();
        BochnerFunction::new(Arc::new(raw.measure), raw.space, values)
    }
}

impl From<BochnerFunction> for RawBochner {
    fn from(f: BochnerFunction) -> Self {
        let field = f.space.field();
        RawBochner {
            measure: (*f.measure).clone(),
            space: f.space,
            values: f.values.iter().map(|v| v.to_raw(field)).collect(),
        }
    }
}

impl BochnerFunction {
    pub fn new(measure: Arc<DiscreteMeasure>, space: SmoothSpace, values: Vec<Vector>) -> Result<Self> {
        if values.len() != measure.len() {
            return Err(invalid(format!(
                "{} values for a measure with {} atoms",
                values.len(),
                measure.len()
            )));
        }
        for v in &values {
            space.check(v)?;
        }
        Ok(BochnerFunction {
            measure,
            space,
            values,
        })
    }

    /// A scalar-valued function (values in the one-dimensional space).
    pub fn scalar(measure: Arc<DiscreteMeasure>, field: Field, values: &[Complex64]) -> Result<Self> {
        let values = values.iter().map(|&z| Vector(vec![z])).collect();
        BochnerFunction::new(measure, SmoothSpace::scalar(field), values)
    }

    pub fn scalar_real(measure: Arc<DiscreteMeasure>, values: &[f64]) -> Result<Self> {
        let values: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        BochnerFunction::scalar(measure, Field::Real, &values)
    }

    pub fn zero(measure: Arc<DiscreteMeasure>, space: SmoothSpace) -> Self {
        let values = vec![space.zero(); measure.len()];
        BochnerFunction {
            measure,
            space,
            values,
        }
    }

    pub fn measure(&self) -> &DiscreteMeasure {
        &self.measure
    }

    pub fn measure_arc(&self) -> &Arc<DiscreteMeasure> {
        &self.measure
    }

    pub fn space(&self) -> &SmoothSpace {
        &self.space
    }

    pub fn values(&self) -> &[Vector] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &Vector {
        &self.values[i]
    }

    /// Scalar value at atom `i` (first coordinate).
    pub fn scalar_value(&self, i: usize) -> Complex64 {
        self.values[i].coords()[0]
    }

    /// `‖f(s)‖_X` for every atom.
    pub fn pointwise_norms(&self) -> Vec<f64> {
        self.values.iter().map(|v| self.space.norm_of(v.coords())).collect()
    }

    /// Same measure and same space.
    pub fn compatible(&self, other: &BochnerFunction) -> Result<()> {
        if self.space != other.space {
            return Err(invalid("functions live in different spaces"));
        }
        if !Arc::ptr_eq(&self.measure, &other.measure) && *self.measure != *other.measure {
            return Err(invalid("functions live on different measures"));
        }
        Ok(())
    }

    /// `(Σ_s w_s ‖f(s)‖^p)^{1/p}` for `p ≥ 1`.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        check_exponent(p)?;
        Ok(lp_of_norms(&self.pointwise_norms(), self.measure.weights(), p))
    }

    /// `‖f + λ g‖_p` without allocating a new function.
    pub(crate) fn combo_norm(&self, g: &BochnerFunction, lambda: Complex64, p: f64, buf: &mut Vec<Complex64>) -> f64 {
        let norms: Vec<f64> = self
            .values
            .iter()
            .zip(&g.values)
            .map(|(a, b)| {
                buf.clear();
                buf.extend(a.coords().iter().zip(b.coords()).map(|(x, y)| x + lambda * y));
                self.space.norm_of(buf)
            })
            .collect();
        lp_of_norms(&norms, self.measure.weights(), p)
    }

    /// Atoms with `‖f(s)‖ ≤ eps`. `eps = 0` gives the exact zero set.
    pub fn zero_set(&self, eps: f64) -> Vec<usize> {
        self.pointwise_norms()
            .iter()
            .enumerate()
            .filter(|(_, n)| **n <= eps)
            .map(|(i, _)| i)
            .collect()
    }

    /// Zero-set threshold for floating-point data: `1e-12 · max_s ‖f(s)‖`.
    pub fn float_zero_tol(&self) -> f64 {
        1e-12 * self.pointwise_norms().into_iter().fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Vector::is_zero)
    }

    /// `f + a·g`.
    pub fn add_scaled(&self, g: &BochnerFunction, a: Complex64) -> Result<BochnerFunction> {
        self.compatible(g)?;
        if self.space.field() == Field::Real && a.im != 0.0 {
            return Err(invalid("complex scalar in a real space"));
        }
        let values = self
            .values
            .iter()
            .zip(&g.values)
            .map(|(x, y)| Vector(x.coords().iter().zip(y.coords()).map(|(u, v)| u + a * v).collect()))
            .collect();
        Ok(BochnerFunction {
            measure: Arc::clone(&self.measure),
            space: self.space,
            values,
        })
    }

    pub fn sub(&self, g: &BochnerFunction) -> Result<BochnerFunction> {
        self.add_scaled(g, Complex64::new(-1.0, 0.0))
    }

    pub fn scale(&self, a: Complex64) -> Result<BochnerFunction> {
        if self.space.field() == Field::Real && a.im != 0.0 {
            return Err(invalid("complex scalar in a real space"));
        }
        Ok(BochnerFunction {
            measure: Arc::clone(&self.measure),
            space: self.space,
            values: self.values.iter().map(|v| v.scale(a)).collect(),
        })
    }

    /// Same function with atom `i` replaced.
    pub fn with_value(&self, i: usize, v: Vector) -> Result<BochnerFunction> {
        self.space.check(&v)?;
        let mut out = self.clone();
        out.values[i] = v;
        Ok(out)
    }

    /// `s ↦ f(s) x`, the image of `f ⊗ x` in `L^p(μ, X)`.
    pub fn elementary_tensor(fscalar: &BochnerFunction, x: &Vector, space: SmoothSpace) -> Result<BochnerFunction> {
        if !fscalar.space.is_scalar() {
            return Err(invalid("the tensor's first factor must be scalar-valued"));
        }
        if fscalar.space.field() != space.field() {
            return Err(invalid(format!(
                "field mismatch: {} function with a {} space",
                fscalar.space.field(),
                space.field()
            )));
        }
        space.check(x)?;
        let values = (0..fscalar.measure.len())
            .map(|i| x.scale(fscalar.scalar_value(i)))
            .collect();
        Ok(BochnerFunction {
            measure: Arc::clone(&fscalar.measure),
            space,
            values,
        })
    }

    /// `(s, t) ↦ f1(s) f2(t)` on the product measure.
    pub fn scalar_product_function(f1: &BochnerFunction, f2: &BochnerFunction) -> Result<BochnerFunction> {
        if !f1.space.is_scalar() || !f2.space.is_scalar() {
            return Err(invalid("both factors must be scalar-valued"));
        }
        if f1.space.field() != f2.space.field() {
            return Err(invalid("factors over different fields"));
        }
        let measure = Arc::new(f1.measure.product(&f2.measure));
        let mut values = Vec::with_capacity(measure.len());
        for i in 0..f1.measure.len() {
            for j in 0..f2.measure.len() {
                values.push(Vector(vec![f1.scalar_value(i) * f2.scalar_value(j)]));
            }
        }
        Ok(BochnerFunction {
            measure,
            space: f1.space,
            values,
        })
    }
}

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 || p.is_infinite() {
        return Err(invalid(format!("exponent must satisfy 1 ≤ p < ∞, got {p}")));
    }
    Ok(())
}

fn lp_of_norms(norms: &[f64], weights: &[f64], p: f64) -> f64 {
    let m = norms.iter().fold(0.0f64, |m, n| m.max(*n));
    if m == 0.0 {
        return 0.0;
    }
    if p == 1.0 {
        return neumaier(norms.iter().zip(weights).map(|(n, w)| n * w));
    }
    let s = neumaier(norms.iter().zip(weights).map(|(n, w)| w * (n / m).powf(p)));
    m * s.powf(1.0 / p)
}
