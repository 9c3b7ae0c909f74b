use std::f64::consts::PI;
use std::sync::Arc;

use bjortho::random::{random_field, random_measure, random_nonzero_vector, random_space, trial_rng};
use bjortho::{light_check, BochnerFunction, Complex64, Field, SmoothSpace, Vector};
use rand::Rng;

fn kinds(field: Field) -> Vec<SmoothSpace> {
    vec![
        SmoothSpace::lp(field, 4, 1.5).unwrap(),
        SmoothSpace::lp(field, 4, 3.0).unwrap(),
        SmoothSpace::hilbert(field, 4).unwrap(),
        SmoothSpace::scalar(field),
    ]
}

#[test]
fn support_functionals_norm_their_point() {
    for field in [Field::Real, Field::Complex] {
        for sp in kinds(field) {
            let mut rng = trial_rng(1, sp.dim() as u64);
            for _ in 0..100 {
                let x = random_nonzero_vector(&mut rng, &sp);
                let nx = sp.norm(&x).unwrap();
                let fx = sp.support_functional(&x).unwrap();
                assert!((fx.apply(&x) - Complex64::new(nx, 0.0)).norm() <= 1e-12 * nx);
                assert!((sp.dual_norm(&fx) - 1.0).abs() <= 1e-12);
                let alpha = rng.gen_range(0.01..100.0);
                let fa = sp.support_functional(&x.scale(Complex64::new(alpha, 0.0))).unwrap();
                assert!(sp.dual_norm(&fa.sub(&fx)) <= 1e-12);
            }
        }
    }
}

#[test]
fn duality_map_distance_shrinks_with_the_perturbation() {
    for field in [Field::Real, Field::Complex] {
        for sp in kinds(field) {
            let mut rng = trial_rng(2, sp.dim() as u64);
            for _ in 0..100 {
                let x = random_nonzero_vector(&mut rng, &sp);
                let x = x.scale(Complex64::new(1.0 / sp.norm(&x).unwrap(), 0.0));
                let h = random_nonzero_vector(&mut rng, &sp);
                let h = h.scale(Complex64::new(1.0 / sp.norm(&h).unwrap(), 0.0));
                let fx = sp.support_functional(&x).unwrap();
                let dists: Vec<f64> = [1e-3, 1e-4, 1e-5]
                    .iter()
                    .map(|&e| {
                        let moved = Vector(x.coords().iter().zip(h.coords()).map(|(a, b)| a + b * e).collect());
                        sp.dual_norm(&sp.support_functional(&moved).unwrap().sub(&fx))
                    })
                    .collect();
                assert!(dists[0] >= dists[1] && dists[1] >= dists[2], "{sp:?}: {dists:?}");
            }
        }
    }
}

#[test]
fn phase_derivatives_are_odd_in_the_phase() {
    let mut rng = trial_rng(3, 0);
    for _ in 0..50 {
        let sp = random_space(&mut rng, Field::Complex);
        let x = random_nonzero_vector(&mut rng, &sp);
        let y = random_nonzero_vector(&mut rng, &sp);
        let phi = rng.gen_range(0.0..PI);
        let a = sp.phase_gateaux(&x, &y, phi).unwrap();
        let b = sp.phase_gateaux(&x, &y, phi + PI).unwrap();
        assert!((a + b).abs() < 1e-12);
    }
}

#[test]
fn light_equivalence_on_random_instances() {
    for trial in 0..60 {
        let mut rng = trial_rng(77, trial);
        let field = random_field(&mut rng);
        let m = random_measure(&mut rng);
        let sp = random_space(&mut rng, field);
        if sp.dim() < 2 {
            continue;
        }
        // Y lives on the first coordinate; values vanishing there are
        // orthogonal to Y because support functionals act coordinatewise
        let mut y = sp.zero();
        y.0[0] = random_nonzero_vector(&mut rng, &sp).0[0] + Complex64::new(2.0, 0.0);
        let values: Vec<Vector> = (0..m.len())
            .map(|_| {
                let mut v = random_nonzero_vector(&mut rng, &sp);
                if rng.gen_bool(0.8) {
                    v.0[0] = Complex64::new(0.0, 0.0);
                }
                v
            })
            .collect();
        let f = BochnerFunction::new(Arc::clone(&m), sp, values).unwrap();
        let rep = light_check(&f, &[y], 2.0, 0.0, 1e-9).unwrap();
        assert_eq!(rep.subspace_verdict.is_orthogonal(), rep.pointwise_failures.is_empty(), "trial {trial}");
    }
}
