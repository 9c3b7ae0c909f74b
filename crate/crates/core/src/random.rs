//! Seeded random instances for property suites.
//!
//! Atom counts are uniform in `[2, 8]`, weights uniform in `(0.1, 2]`,
//! dimensions uniform in `[1, 6]`, `ℓ^p` exponents uniform in
//! `{1.5, 2, 3, 4}` and coordinates uniform in `[−1, 1]` (both parts over
//! the complex field). Naive random pairs are almost never orthogonal, so
//! the `orthogonalize_*` helpers correct `g` against a criterion to produce
//! the orthogonal branch on demand.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bochner::BochnerFunction;
use crate::error::{invalid, Result};
use crate::measure::{AtomLabel, DiscreteMeasure};
use crate::ortho::{l1_sides, lp_integral};
use crate::space::{Field, NormKind, SmoothSpace, Vector};

pub type TrialRng = ChaCha8Rng;

/// Independent stream for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn random_field<R: Rng>(rng: &mut R) -> Field {
    if rng.gen_bool(0.5) {
        Field::Real
    } else {
        Field::Complex
    }
}

pub fn random_measure<R: Rng>(rng: &mut R) -> Arc<DiscreteMeasure> {
    let n = rng.gen_range(2..=8);
    random_measure_with(rng, n)
}

pub fn random_measure_with<R: Rng>(rng: &mut R, n: usize) -> Arc<DiscreteMeasure> {
    let atoms = (1..=n as i64).map(AtomLabel::Index).collect();
    // (0.1, 2]
    let weights = (0..n).map(|_| 2.0 - 1.9 * rng.gen::<f64>()).collect();
    Arc::new(DiscreteMeasure::new(atoms, weights).expect("positive weights"))
}

/// Random `ℓ^p` space, `p ∈ {1.5, 2, 3, 4}`; `p = 2` is realized as the
/// Hilbert kind half of the time.
pub fn random_space<R: Rng>(rng: &mut R, field: Field) -> SmoothSpace {
    let dim = rng.gen_range(1..=6);
    random_space_with_dim(rng, field, dim)
}

pub fn random_space_with_dim<R: Rng>(rng: &mut R, field: Field, dim: usize) -> SmoothSpace {
    let p = [1.5, 2.0, 3.0, 4.0][rng.gen_range(0..4)];
    if p == 2.0 && rng.gen_bool(0.5) {
        SmoothSpace::hilbert(field, dim).expect("dim >= 1")
    } else {
        SmoothSpace::lp(field, dim, p).expect("valid exponent")
    }
}

pub fn random_scalar<R: Rng>(rng: &mut R, field: Field) -> Complex64 {
    match field {
        Field::Real => Complex64::new(rng.gen_range(-1.0..=1.0), 0.0),
        Field::Complex => Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)),
    }
}

pub fn random_vector<R: Rng>(rng: &mut R, sp: &SmoothSpace) -> Vector {
    Vector((0..sp.dim()).map(|_| random_scalar(rng, sp.field())).collect())
}

pub fn random_nonzero_vector<R: Rng>(rng: &mut R, sp: &SmoothSpace) -> Vector {
    loop {
        let v = random_vector(rng, sp);
        if sp.norm_of(v.coords()) > 1e-3 {
            return v;
        }
    }
}

pub fn random_function<R: Rng>(rng: &mut R, measure: &Arc<DiscreteMeasure>, sp: &SmoothSpace) -> BochnerFunction {
    let values = (0..measure.len()).map(|_| random_vector(rng, sp)).collect();
    BochnerFunction::new(Arc::clone(measure), *sp, values).expect("values match the space")
}

/// Random function vanishing on a nonempty proper subset of the atoms
/// (returned sorted). Needs at least two atoms.
pub fn random_function_with_zeros<R: Rng>(
    rng: &mut R,
    measure: &Arc<DiscreteMeasure>,
    sp: &SmoothSpace,
) -> (BochnerFunction, Vec<usize>) {
    let n = measure.len();
    let k = rng.gen_range(1..n);
    let zeros = rand::seq::index::sample(rng, n, k).into_vec();
    let mut zeros = zeros;
    zeros.sort_unstable();
    let values = (0..n)
        .map(|i| {
            if zeros.contains(&i) {
                sp.zero()
            } else {
                random_nonzero_vector(rng, sp)
            }
        })
        .collect();
    (
        BochnerFunction::new(Arc::clone(measure), *sp, values).expect("values match the space"),
        zeros,
    )
}

/// `g − β f` with `β` chosen so that `Σ_{s∉Z(f)} w ‖f‖^{p−1} F_{f(s)}(·)`
/// vanishes; the result is orthogonal to `f` in `L^p(μ, X)`, `1 < p < ∞`.
pub fn orthogonalize_lp(f: &BochnerFunction, g: &BochnerFunction, p: f64) -> Result<BochnerFunction> {
    let denom = lp_integral(f, f, p, 0.0);
    if denom.norm() == 0.0 {
        return Err(invalid("cannot orthogonalize against the zero function"));
    }
    let beta = lp_integral(f, g, p, 0.0) / denom;
    g.add_scaled(f, -real_if(f.space().field(), beta))
}

/// `g − β f` with `|Σ_{s∉Z(f)} w F_{f(s)}(·)| = ratio · Σ_{s∈Z(f)} w ‖g(s)‖`,
/// which is orthogonal to `f` in `L¹(μ, X)` when `ratio ≤ 1`.
pub fn orthogonalize_l1(f: &BochnerFunction, g: &BochnerFunction, ratio: f64) -> Result<BochnerFunction> {
    let (c, rhs) = l1_sides(f, g, 0.0);
    let nf = f.lp_norm(1.0)?;
    if nf == 0.0 {
        return Err(invalid("cannot orthogonalize against the zero function"));
    }
    let target = if c.norm() > 0.0 {
        c / c.norm() * (ratio * rhs)
    } else {
        Complex64::new(ratio * rhs, 0.0)
    };
    let beta = (c - target) / nf;
    g.add_scaled(f, -real_if(f.space().field(), beta))
}

/// `y − (F_x(y)/‖x‖) x`, which satisfies `F_x(·) = 0`.
pub fn orthogonalize_in_space(sp: &SmoothSpace, x: &Vector, y: &Vector) -> Result<Vector> {
    let fx = sp.support_functional(x)?;
    let beta = real_if(sp.field(), fx.apply(y) / sp.norm(x)?);
    Ok(Vector(
        y.coords().iter().zip(x.coords()).map(|(b, a)| b - beta * a).collect(),
    ))
}

/// Random nonzero `v` with `F_v(y) = 0` for every `y` in `ys`.
///
/// Picks functional coefficients `a` annihilating `span(ys)` and inverts the
/// duality map: `v_i = |a_i|^{q−1} conj(sign a_i)` for `ℓ^p`, `v = conj(a)`
/// for Hilbert. Fails when `span(ys)` is all of `X`.
pub fn random_orthogonal_to<R: Rng>(rng: &mut R, sp: &SmoothSpace, ys: &[Vector]) -> Result<Vector> {
    // Σ a_i y_i = 0 means a is Euclidean-orthogonal to conj(y)
    let mut ortho: Vec<Vec<Complex64>> = Vec::new();
    for y in ys {
        sp.check(y)?;
        let mut u: Vec<Complex64> = y.coords().iter().map(|z| z.conj()).collect();
        project_out(&mut u, &ortho);
        let n = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-12 {
            ortho.push(u.iter().map(|z| z / n).collect());
        }
    }
    if ortho.len() >= sp.dim() {
        return Err(invalid("no nonzero vector is orthogonal to a spanning set"));
    }
    let a = loop {
        let mut a = random_vector(rng, sp).0;
        project_out(&mut a, &ortho);
        if a.iter().map(|z| z.norm()).sum::<f64>() > 1e-3 {
            break a;
        }
    };
    let v = match sp.kind() {
        NormKind::Lp(p) => {
            let q = p / (p - 1.0);
            a.iter()
                .map(|z| if z.norm() == 0.0 { *z } else { (z / z.norm()).conj() * z.norm().powf(q - 1.0) })
                .collect()
        }
        NormKind::Hilbert | NormKind::Scalar => a.iter().map(|z| z.conj()).collect(),
    };
    Ok(Vector(v))
}

/// Removes from `v` its components along the orthonormal `basis`.
fn project_out(v: &mut [Complex64], basis: &[Vec<Complex64>]) {
    for b in basis {
        let c: Complex64 = v.iter().zip(b).map(|(x, y)| x * y.conj()).sum();
        for (x, y) in v.iter_mut().zip(b) {
            *x -= c * y;
        }
    }
}

fn real_if(field: Field, z: Complex64) -> Complex64 {
    match field {
        Field::Real => Complex64::new(z.re, 0.0),
        Field::Complex => z,
    }
}
