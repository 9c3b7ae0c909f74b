//! Finite-dimensional smooth normed spaces and their duality maps.
//!
//! Only norms that are Fréchet differentiable away from the origin can be
//! constructed: `ℓ^p` with `1 < p < ∞`, the Euclidean (Hilbert) norm, and
//! the absolute value on the scalar field. Each nonzero vector `x` then has
//! exactly one support functional `F_x`, with `‖F_x‖ = 1` and
//! `F_x(x) = ‖x‖`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Default upper bound on the `ℓ^p` exponent of a space.
pub const DEFAULT_MAX_EXPONENT: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Real => f.write_str("real"),
            Field::Complex => f.write_str("complex"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    Lp(f64),
    Hilbert,
    Scalar,
}

#[derive(Deserialize)]
struct RawSpace {
    field: Field,
    #[serde(default)]
    dim: Option<usize>,
    kind: NormKind,
}

/// A finite-dimensional normed space with a smooth norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpace")]
pub struct SmoothSpace {
    field: Field,
    dim: usize,
    kind: NormKind,
}

impl TryFrom<RawSpace> for SmoothSpace {
    type Error = Error;

    fn try_from(raw: RawSpace) -> Result<Self> {
        match raw.kind {
            NormKind::Scalar => match raw.dim {
                None | Some(1) => Ok(SmoothSpace::scalar(raw.field)),
                Some(d) => Err(invalid(format!("scalar space has dim 1, got {d}"))),
            },
            NormKind::Hilbert => SmoothSpace::hilbert(raw.field, need_dim(raw.dim)?),
            NormKind::Lp(p) => SmoothSpace::lp(raw.field, need_dim(raw.dim)?, p),
        }
    }
}

fn need_dim(dim: Option<usize>) -> Result<usize> {
    dim.ok_or_else(|| invalid("space descriptor needs \"dim\""))
}

impl SmoothSpace {
    /// `ℓ^p` on `dim` coordinates, `p` restricted to `(1, 8]`.
    pub fn lp(field: Field, dim: usize, p: f64) -> Result<Self> {
        Self::lp_with_max_exponent(field, dim, p, DEFAULT_MAX_EXPONENT)
    }

    /// `ℓ^p` with a caller-chosen exponent ceiling. Large exponents make
    /// `|x_i|^{p-1}` lose precision quickly.
    pub fn lp_with_max_exponent(field: Field, dim: usize, p: f64, max_exponent: f64) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dimension must be positive"));
        }
        if !(p.is_finite() && p > 1.0) {
            return Err(Error::UnsupportedSpace(format!(
                "ℓ^{p} is not smooth; the exponent must lie in (1, ∞)"
            )));
        }
        if p > max_exponent {
            return Err(invalid(format!(
                "exponent {p} exceeds the configured maximum {max_exponent}"
            )));
        }
        Ok(SmoothSpace {
            field,
            dim,
            kind: NormKind::Lp(p),
        })
    }

    pub fn hilbert(field: Field, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dimension must be positive"));
        }
        Ok(SmoothSpace {
            field,
            dim,
            kind: NormKind::Hilbert,
        })
    }

    /// The field itself with the absolute value.
    pub fn scalar(field: Field) -> Self {
        SmoothSpace {
            field,
            dim: 1,
            kind: NormKind::Scalar,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> NormKind {
        self.kind
    }

    pub fn is_scalar(&self) -> bool {
        matches!(self.kind, NormKind::Scalar)
    }

    /// Checks that `v` is a finite vector of this space.
    pub fn check(&self, v: &Vector) -> Result<()> {
        self.check_coords(v.coords())
    }

    pub(crate) fn check_coords(&self, c: &[Complex64]) -> Result<()> {
        if c.len() != self.dim {
            return Err(invalid(format!(
                "vector of length {} in a space of dimension {}",
                c.len(),
                self.dim
            )));
        }
        if c.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(invalid("vector entries must be finite"));
        }
        if self.field == Field::Real && c.iter().any(|z| z.im != 0.0) {
            return Err(invalid("complex entry in a real space"));
        }
        Ok(())
    }

    pub fn zero(&self) -> Vector {
        Vector(vec![Complex64::new(0.0, 0.0); self.dim])
    }

    pub fn norm(&self, v: &Vector) -> Result<f64> {
        self.check(v)?;
        Ok(self.norm_of(v.coords()))
    }

    pub(crate) fn norm_of(&self, c: &[Complex64]) -> f64 {
        match self.kind {
            NormKind::Scalar => c[0].norm(),
            NormKind::Hilbert => euclidean(c),
            NormKind::Lp(p) => lp_norm_of(c, p),
        }
    }

    /// The unique norm-one functional with `F_x(x) = ‖x‖`.
    pub fn support_functional(&self, x: &Vector) -> Result<Functional> {
        self.check(x)?;
        let n = self.norm_of(x.coords());
        if n == 0.0 {
            return Err(Error::NoSupportFunctional);
        }
        let coeffs = x.coords().iter().map(|&z| self.support_coeff(z, n)).collect();
        Ok(Functional { coeffs })
    }

    fn support_coeff(&self, z: Complex64, norm: f64) -> Complex64 {
        match self.kind {
            NormKind::Scalar | NormKind::Hilbert => z.conj() / norm,
            NormKind::Lp(p) => {
                let a = z.norm();
                if a == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    conj_sign(z) * (a / norm).powf(p - 1.0)
                }
            }
        }
    }

    /// `F_x(y)` without materializing the functional. `None` when `x = 0`.
    pub(crate) fn support_apply(&self, x: &[Complex64], y: &[Complex64]) -> Option<Complex64> {
        let n = self.norm_of(x);
        if n == 0.0 {
            return None;
        }
        Some(
            x.iter()
                .zip(y)
                .map(|(&xi, &yi)| self.support_coeff(xi, n) * yi)
                .sum(),
        )
    }

    /// One-sided derivative of the norm at `x` in the direction `e^{iφ} y`.
    ///
    /// Real spaces only admit the phases `0` and `π`.
    pub fn phase_gateaux(&self, x: &Vector, y: &Vector, phase: f64) -> Result<f64> {
        self.check(x)?;
        self.check(y)?;
        if self.field == Field::Real && phase.sin().abs() > 1e-12 {
            return Err(invalid(format!(
                "phase {phase} is not available in a real space (use 0 or π)"
            )));
        }
        let rot = phase_factor(self.field, phase);
        Ok(match self.support_apply(x.coords(), y.coords()) {
            Some(fy) => (rot * fy).re,
            None => self.norm_of(y.coords()),
        })
    }

    /// Norm of a functional in the dual space.
    pub fn dual_norm(&self, f: &Functional) -> f64 {
        match self.kind {
            NormKind::Scalar | NormKind::Hilbert => euclidean(&f.coeffs),
            NormKind::Lp(p) => lp_norm_of(&f.coeffs, p / (p - 1.0)),
        }
    }
}

/// `e^{iφ}`, snapped to `±1` in real spaces.
pub(crate) fn phase_factor(field: Field, phase: f64) -> Complex64 {
    match field {
        Field::Real => Complex64::new(phase.cos().signum(), 0.0),
        Field::Complex => Complex64::from_polar(1.0, phase),
    }
}

/// `conj(z / |z|)`, zero at zero.
pub fn conj_sign(z: Complex64) -> Complex64 {
    let a = z.norm();
    if a == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        z.conj() / a
    }
}

fn euclidean(c: &[Complex64]) -> f64 {
    let m = c.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    if m == 0.0 {
        return 0.0;
    }
    m * c.iter().map(|z| (z / m).norm_sqr()).sum::<f64>().sqrt()
}

fn lp_norm_of(c: &[Complex64], p: f64) -> f64 {
    let m = c.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    if m == 0.0 {
        return 0.0;
    }
    m * c.iter().map(|z| (z.norm() / m).powf(p)).sum::<f64>().powf(1.0 / p)
}

/// Coordinates of a vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector(pub Vec<Complex64>);

impl Vector {
    pub fn real(xs: &[f64]) -> Self {
        Vector(xs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn complex(xs: &[(f64, f64)]) -> Self {
        Vector(xs.iter().map(|&(re, im)| Complex64::new(re, im)).collect())
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scale(&self, a: Complex64) -> Vector {
        Vector(self.0.iter().map(|z| z * a).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// `[[re, im], ...]` for complex spaces, `[v, ...]` for real ones.
    pub fn to_raw(&self, field: Field) -> RawVector {
        match field {
            Field::Real => RawVector::Real(self.0.iter().map(|z| z.re).collect()),
            Field::Complex => RawVector::Complex(self.0.iter().map(|z| [z.re, z.im]).collect()),
        }
    }

    pub fn from_raw(raw: RawVector) -> Vector {
        match raw {
            RawVector::Real(v) => Vector::real(&v),
            RawVector::Complex(v) => Vector(v.iter().map(|[re, im]| Complex64::new(*re, *im)).collect()),
        }
    }
}

/// Wire form of a vector.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawVector {
    Real(Vec<f64>),
    Complex(Vec<[f64; 2]>),
}

/// A linear functional `z ↦ Σ_i coeffs_i z_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Functional {
    pub coeffs: Vec<Complex64>,
}

impl Functional {
    pub fn apply(&self, z: &Vector) -> Complex64 {
        self.coeffs.iter().zip(z.coords()).map(|(a, b)| a * b).sum()
    }

    pub fn sub(&self, other: &Functional) -> Functional {
        Functional {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn norms() {
        let h = SmoothSpace::hilbert(Field::Complex, 2).unwrap();
        let v = Vector::complex(&[(0.0, 1.0), (0.0, -1.0)]);
        assert_abs_diff_eq!(h.norm(&v).unwrap(), SQRT_2, epsilon = 1e-15);
        assert_eq!(h.norm(&h.zero()).unwrap(), 0.0);

        let l3 = SmoothSpace::lp(Field::Real, 2, 3.0).unwrap();
        assert_abs_diff_eq!(l3.norm(&Vector::real(&[1.0, 1.0])).unwrap(), 2f64.powf(1.0 / 3.0), epsilon = 1e-15);
        assert!(l3.norm(&Vector::real(&[1.0])).is_err());
        assert!(l3.norm(&Vector::complex(&[(1.0, 1.0), (0.0, 0.0)])).is_err());
    }

    #[test]
    fn rejects_non_smooth_kinds() {
        assert!(matches!(SmoothSpace::lp(Field::Real, 3, 1.0), Err(Error::UnsupportedSpace(_))));
        assert!(matches!(SmoothSpace::lp(Field::Real, 3, f64::INFINITY), Err(Error::UnsupportedSpace(_))));
        assert!(SmoothSpace::lp(Field::Real, 3, 9.0).is_err());
        assert!(SmoothSpace::lp_with_max_exponent(Field::Real, 3, 9.0, 12.0).is_ok());
        assert!(SmoothSpace::hilbert(Field::Real, 0).is_err());
    }

    #[test]
    fn support_functional_examples() {
        let h5 = SmoothSpace::hilbert(Field::Complex, 5).unwrap();
        let x = Vector::complex(&[(0.0, 1.0), (0.0, -1.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        let y = Vector::complex(&[(0.0, 1.0), (0.0, 0.0), (0.0, -1.0), (0.0, 0.0), (0.0, 0.0)]);
        let fx = h5.support_functional(&x).unwrap();
        let v = fx.apply(&y);
        assert_abs_diff_eq!(v.re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-15);

        let h2 = SmoothSpace::hilbert(Field::Real, 2).unwrap();
        let x = Vector::real(&[3.0, 4.0]);
        let f = h2.support_functional(&x).unwrap();
        assert_abs_diff_eq!(f.coeffs[0].re, 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(f.coeffs[1].re, 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(f.apply(&x).re, 5.0, epsilon = 1e-14);
        assert_abs_diff_eq!(h2.dual_norm(&f), 1.0, epsilon = 1e-15);

        let s = SmoothSpace::scalar(Field::Complex);
        let theta = 0.7;
        let z = Complex64::from_polar(2.5, theta);
        let f = s.support_functional(&Vector(vec![z])).unwrap();
        assert_abs_diff_eq!((f.coeffs[0] - Complex64::from_polar(1.0, -theta)).norm(), 0.0, epsilon = 1e-15);

        assert_eq!(h2.support_functional(&h2.zero()), Err(Error::NoSupportFunctional));
    }

    #[test]
    fn phase_gateaux_examples() {
        let h = SmoothSpace::hilbert(Field::Real, 2).unwrap();
        let y = Vector::real(&[3.0, -4.0]);
        assert_eq!(h.phase_gateaux(&h.zero(), &y, 0.0).unwrap(), 5.0);
        let d = h.phase_gateaux(&Vector::real(&[1.0, 0.0]), &Vector::real(&[0.0, 1.0]), 0.0).unwrap();
        assert_eq!(d, 0.0);
        assert!(h.phase_gateaux(&y, &y, 1.0).is_err());
        assert_abs_diff_eq!(h.phase_gateaux(&y, &y, PI).unwrap(), -5.0, epsilon = 1e-12);
    }

    #[test]
    fn dual_norm_of_zero() {
        let l = SmoothSpace::lp(Field::Complex, 3, 1.5).unwrap();
        let f = Functional { coeffs: vec![c(0.0, 0.0); 3] };
        assert_eq!(l.dual_norm(&f), 0.0);
        let h = SmoothSpace::hilbert(Field::Real, 2).unwrap();
        let f = Functional { coeffs: vec![c(0.6, 0.0), c(0.8, 0.0)] };
        assert_abs_diff_eq!(h.dual_norm(&f), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn json_descriptors() {
        let s: SmoothSpace = serde_json::from_str(r#"{"field":"complex","dim":5,"kind":{"lp":2.0}}"#).unwrap();
        assert_eq!(s.kind(), NormKind::Lp(2.0));
        let h: SmoothSpace = serde_json::from_str(r#"{"field":"real","dim":3,"kind":"hilbert"}"#).unwrap();
        assert_eq!(h.dim(), 3);
        let sc: SmoothSpace = serde_json::from_str(r#"{"field":"real","kind":"scalar"}"#).unwrap();
        assert!(sc.is_scalar());
        assert!(serde_json::from_str::<SmoothSpace>(r#"{"field":"real","dim":3,"kind":{"lp":1.0}}"#).is_err());
        assert!(serde_json::from_str::<SmoothSpace>(r#"{"field":"real","dim":2,"kind":"scalar"}"#).is_err());
        let back: SmoothSpace = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
    }

    fn space_strategy() -> impl Strategy<Value = SmoothSpace> {
        let field = prop_oneof![Just(Field::Real), Just(Field::Complex)];
        (field, 1usize..7, 0usize..6).prop_map(|(field, dim, k)| match k {
            0 => SmoothSpace::hilbert(field, dim).unwrap(),
            1 => SmoothSpace::scalar(field),
            2 => SmoothSpace::lp(field, dim, 1.5).unwrap(),
            3 => SmoothSpace::lp(field, dim, 3.0).unwrap(),
            4 => SmoothSpace::lp(field, dim, 4.0).unwrap(),
            _ => SmoothSpace::lp(field, dim, 2.0).unwrap(),
        })
    }

    fn vector_in(sp: SmoothSpace, raw: &[(f64, f64)]) -> Vector {
        Vector(
            raw.iter()
                .take(sp.dim())
                .map(|&(re, im)| match sp.field() {
                    Field::Real => c(re, 0.0),
                    Field::Complex => c(re, im),
                })
                .collect(),
        )
    }

    proptest! {
        #[test]
        fn support_functional_is_norming(
            sp in space_strategy(),
            raw in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 6),
            alpha in 0.01f64..100.0,
        ) {
            let x = vector_in(sp, &raw);
            prop_assume!(sp.norm(&x).unwrap() > 1e-6);
            let n = sp.norm(&x).unwrap();
            let f = sp.support_functional(&x).unwrap();
            let fx = f.apply(&x);
            prop_assert!((fx.re - n).abs() <= 1e-12 * n && fx.im.abs() <= 1e-12 * n);
            prop_assert!((sp.dual_norm(&f) - 1.0).abs() <= 1e-12);
            let fa = sp.support_functional(&x.scale(c(alpha, 0.0))).unwrap();
            for (a, b) in f.coeffs.iter().zip(&fa.coeffs) {
                prop_assert!((a - b).norm() <= 1e-12);
            }
        }

        #[test]
        fn phase_gateaux_matches_finite_difference(
            sp in space_strategy(),
            xr in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 6),
            yr in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 6),
            k in 0u32..8,
        ) {
            let x = vector_in(sp, &xr);
            let y = vector_in(sp, &yr);
            prop_assume!(sp.norm(&x).unwrap() > 0.1);
            let phase = match sp.field() {
                Field::Real => if k % 2 == 0 { 0.0 } else { PI },
                Field::Complex => k as f64 * PI / 4.0,
            };
            let t = 1e-6;
            let rot = phase_factor(sp.field(), phase);
            let moved = Vector(x.coords().iter().zip(y.coords()).map(|(a, b)| a + rot * t * b).collect());
            let fd = (sp.norm(&moved).unwrap() - sp.norm(&x).unwrap()) / t;
            let d = sp.phase_gateaux(&x, &y, phase).unwrap();
            prop_assert!((fd - d).abs() <= 1e-5, "fd {fd} vs {d}");
            let opposite = match sp.field() {
                Field::Real => if k % 2 == 0 { PI } else { 0.0 },
                Field::Complex => phase + PI,
            };
            let d2 = sp.phase_gateaux(&x, &y, opposite).unwrap();
            prop_assert!((d + d2).abs() <= 1e-12);
        }
    }
}
