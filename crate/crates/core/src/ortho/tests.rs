use std::f64::consts::SQRT_2;
use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::measure::DiscreteMeasure;
use crate::random::{orthogonalize_lp, random_function, random_measure, random_space, trial_rng};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn counting(n: usize) -> Arc<DiscreteMeasure> {
    Arc::new(DiscreteMeasure::counting(n).unwrap())
}

fn chi(m: &Arc<DiscreteMeasure>, set: &[i64]) -> BochnerFunction {
    let vals: Vec<Complex64> = m
        .indicator(|a| a.index().is_some_and(|i| set.contains(&i)))
        .iter()
        .map(|&v| c(v, 0.0))
        .collect();
    BochnerFunction::scalar(Arc::clone(m), Field::Complex, &vals).unwrap()
}

fn hilbert5() -> SmoothSpace {
    SmoothSpace::hilbert(Field::Complex, 5).unwrap()
}

fn x_vec() -> Vector {
    Vector::complex(&[(0.0, 1.0), (0.0, -1.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)])
}

fn y_vec() -> Vector {
    Vector::complex(&[(0.0, 1.0), (0.0, 0.0), (0.0, -1.0), (0.0, 0.0), (0.0, 0.0)])
}

#[test]
fn first_counterexample_scalar_and_vector_sides() {
    let m = counting(5);
    let (fa, fb) = (chi(&m, &[1, 2, 3]), chi(&m, &[2, 3, 5]));
    let scalar = bj_scalar_l1(&fa, &fb, 0.0, 1e-9).unwrap();
    assert_eq!((scalar.lhs, scalar.rhs), (2.0, 1.0));
    assert!(!scalar.is_orthogonal());

    let sp = hilbert5();
    let inner = sp.support_functional(&x_vec()).unwrap().apply(&y_vec()) * sp.norm(&x_vec()).unwrap();
    assert!((inner - c(1.0, 0.0)).norm() < 1e-15);
    assert!(!bj_in_space(&sp, &x_vec(), &y_vec(), 1e-9).unwrap().is_orthogonal());

    let h1 = BochnerFunction::elementary_tensor(&fa, &x_vec(), sp).unwrap();
    let h2 = BochnerFunction::elementary_tensor(&fb, &y_vec(), sp).unwrap();
    let cert = bj_l1_criterion(&h1, &h2, 0.0, 1e-9).unwrap();
    assert!((cert.lhs - SQRT_2).abs() < 1e-12);
    assert!((cert.rhs - SQRT_2).abs() < 1e-12);
    assert!(cert.is_orthogonal());
    assert!(cert.borderline);
    assert!((cert.phase_sweep.unwrap() - SQRT_2).abs() < 1e-4 * SQRT_2);

    // the definition agrees: no λ shortens h₁
    assert!(bj_direct(&h1, &h2, 1.0, 1e-9).unwrap().is_orthogonal());
}

#[test]
fn final_counterexample_product_sides() {
    let m = counting(5);
    let nu = Arc::new(DiscreteMeasure::interval(-2.0, 2.0, 4).unwrap());
    let interval = |lo: f64, hi: f64| {
        let vals: Vec<Complex64> = nu
            .indicator(|a| a.coord().is_some_and(|t| t > lo && t < hi))
            .iter()
            .map(|&v| c(v, 0.0))
            .collect();
        BochnerFunction::scalar(Arc::clone(&nu), Field::Complex, &vals).unwrap()
    };
    let (fc, fd) = (interval(-1.0, 2.0), interval(-2.0, 1.0));
    let cd = bj_scalar_l1(&fc, &fd, 0.0, 1e-9).unwrap();
    assert_eq!((cd.lhs, cd.rhs), (2.0, 1.0));
    assert!(!cd.is_orthogonal());

    let f = BochnerFunction::scalar_product_function(&chi(&m, &[1, 2, 3]), &fc).unwrap();
    let g = BochnerFunction::scalar_product_function(&chi(&m, &[2, 3, 5]), &fd).unwrap();
    let cert = bj_scalar_l1(&f, &g, 0.0, 1e-9).unwrap();
    assert_eq!((cert.lhs, cert.rhs), (4.0, 5.0));
    assert!(cert.is_orthogonal() && !cert.borderline);
    assert!(bj_direct(&f, &g, 1.0, 1e-9).unwrap().is_orthogonal());
}

#[test]
fn zero_directions_are_trivially_orthogonal() {
    let m = counting(3);
    let sp = SmoothSpace::lp(Field::Real, 2, 3.0).unwrap();
    let f = BochnerFunction::new(Arc::clone(&m), sp, vec![Vector::real(&[1.0, -2.0]); 3]).unwrap();
    let z = BochnerFunction::zero(Arc::clone(&m), sp);
    for cert in [
        bj_direct(&f, &z, 2.0, 1e-9).unwrap(),
        bj_keckic(&f, &z, 2.0, 8, 1e-9).unwrap(),
        bj_l1_criterion(&f, &z, 0.0, 1e-9).unwrap(),
        bj_lp_criterion(&f, &z, 3.0, 0.0, 1e-9).unwrap(),
    ] {
        assert!(cert.is_orthogonal() && !cert.borderline, "{cert:?}");
    }
    let s = BochnerFunction::scalar_real(Arc::clone(&m), &[1.0, 2.0, 0.0]).unwrap();
    let sz = BochnerFunction::scalar_real(Arc::clone(&m), &[0.0; 3]).unwrap();
    assert!(bj_scalar_l1(&s, &sz, 0.0, 1e-9).unwrap().is_orthogonal());
    assert!(bj_scalar_lp(&s, &sz, 2.0, 1e-9).unwrap().is_orthogonal());
}

#[test]
fn support_of_g_inside_zero_set() {
    let m = counting(4);
    let f = BochnerFunction::scalar_real(Arc::clone(&m), &[1.0, -3.0, 0.0, 0.0]).unwrap();
    let g = BochnerFunction::scalar_real(Arc::clone(&m), &[0.0, 0.0, 2.0, -1.0]).unwrap();
    let cert = bj_scalar_l1(&f, &g, 0.0, 1e-9).unwrap();
    assert_eq!((cert.lhs, cert.rhs), (0.0, 3.0));
    assert!(cert.is_orthogonal());
    let disjoint = bj_scalar_lp(&f, &g, 3.0, 1e-9).unwrap();
    assert_eq!(disjoint.lhs, 0.0);
}

#[test]
fn self_pair_is_not_orthogonal() {
    let mut rng = trial_rng(7, 0);
    let m = random_measure(&mut rng);
    let sp = SmoothSpace::lp(Field::Complex, 3, 1.5).unwrap();
    let f = random_function(&mut rng, &m, &sp);
    for p in [1.0, 2.0, 3.0] {
        let nf = f.lp_norm(p).unwrap();
        let direct = bj_direct(&f, &f, p, 1e-9).unwrap();
        assert!(!direct.is_orthogonal());
        assert!((direct.witness.unwrap() - c(-1.0, 0.0)).norm() < 1e-6, "{direct:?}");
        assert!((direct.lhs - nf).abs() < 1e-9 * nf);

        let keckic = bj_keckic(&f, &f, p, 90, 1e-9).unwrap();
        assert!(!keckic.is_orthogonal());
        assert!((keckic.lhs - nf).abs() < 1e-5 * nf);
    }
    let lp = bj_lp_criterion(&f, &f, 3.0, 0.0, 1e-9).unwrap();
    assert!((lp.lhs - f.lp_norm(3.0).unwrap().powi(3)).abs() < 1e-12 * lp.lhs);
    let s = BochnerFunction::scalar_real(Arc::clone(&m), &vec![0.5; m.len()]).unwrap();
    let slp = bj_scalar_lp(&s, &s, 2.5, 1e-9).unwrap();
    assert!((slp.lhs - s.lp_norm(2.5).unwrap().powf(2.5)).abs() < 1e-12);
}

#[test]
fn real_field_direct_and_keckic() {
    let m = counting(2);
    let sp = SmoothSpace::hilbert(Field::Real, 2).unwrap();
    let f = BochnerFunction::new(Arc::clone(&m), sp, vec![Vector::real(&[1.0, 0.0]), Vector::real(&[0.0, 1.0])]).unwrap();
    let g = BochnerFunction::new(Arc::clone(&m), sp, vec![Vector::real(&[0.0, 1.0]), Vector::real(&[-1.0, 0.0])]).unwrap();
    assert!(bj_direct(&f, &g, 2.0, 1e-9).unwrap().is_orthogonal());
    assert!(bj_keckic(&f, &g, 2.0, 1, 1e-6).unwrap().is_orthogonal());
    let tilted = g.add_scaled(&f, c(0.1, 0.0)).unwrap();
    let d = bj_direct(&f, &tilted, 2.0, 1e-9).unwrap();
    assert!(!d.is_orthogonal());
    assert!(d.witness.unwrap().im == 0.0 && d.witness.unwrap().re < 0.0);
}

#[test]
fn mismatched_inputs_are_rejected() {
    let sp = SmoothSpace::hilbert(Field::Real, 2).unwrap();
    let f = BochnerFunction::zero(counting(2), sp);
    let g = BochnerFunction::zero(counting(3), sp);
    assert!(bj_direct(&f, &g, 2.0, 1e-9).is_err());
    assert!(bj_lp_criterion(&f, &f, 1.0, 0.0, 1e-9).is_err());
    assert!(bj_scalar_l1(&f, &f, 0.0, 1e-9).is_err());
    assert!(bj_criterion(CriterionChoice::L1, &f, &f, 2.0, 0.0, 1e-9).is_err());
    assert!("nope".parse::<CriterionChoice>().is_err());
    assert_eq!("scalar-lp".parse::<CriterionChoice>().unwrap(), CriterionChoice::ScalarLp);
}

#[test]
fn decide_flags_borderline_bands() {
    let exact = OrthoCertificate::decide(Criterion::L1, 1.0, 1.0, 1e-9, 1.0);
    assert!(exact.is_orthogonal() && exact.borderline);
    let clear = OrthoCertificate::decide(Criterion::L1, 0.5, 1.0, 1e-9, 1.0);
    assert!(clear.is_orthogonal() && !clear.borderline);
    assert_eq!(clear.margin(), 0.5);
    let tiny = OrthoCertificate::decide(Criterion::Lp, 1e-12, 0.0, 1e-9, 1.0);
    assert!(tiny.is_orthogonal() && !tiny.borderline);
    let near = OrthoCertificate::decide(Criterion::Lp, 1e-6, 0.0, 1e-9, 1.0);
    assert!(!near.is_orthogonal() && near.borderline);
    let far = OrthoCertificate::decide(Criterion::Lp, 1e-3, 0.0, 1e-9, 1.0);
    assert!(!far.is_orthogonal() && !far.borderline);
}

#[test]
fn certificates_serialize_every_field() {
    let cert = OrthoCertificate::decide(Criterion::ScalarL1, 2.0, 1.0, 1e-9, 3.0);
    let json = serde_json::to_value(&cert).unwrap();
    assert_eq!(json["verdict"], "not-orthogonal");
    assert_eq!(json["criterion"], "scalar-l1");
    assert_eq!(json["lhs"], 2.0);
    let back: OrthoCertificate = serde_json::from_value(json).unwrap();
    assert_eq!(back, cert);
}

/// `Σ_s w_s ⟨g(s), f(s)⟩`
fn inner_product(f: &BochnerFunction, g: &BochnerFunction) -> Complex64 {
    f.values()
        .iter()
        .zip(g.values())
        .zip(f.measure().weights())
        .map(|((a, b), w)| a.coords().iter().zip(b.coords()).map(|(x, y)| y * x.conj()).sum::<Complex64>() * *w)
        .sum()
}

#[test]
fn hilbert_p2_matches_inner_product() {
    for trial in 0..60 {
        let mut rng = trial_rng(11, trial);
        let field = if trial % 2 == 0 { Field::Real } else { Field::Complex };
        let m = random_measure(&mut rng);
        let sp = SmoothSpace::hilbert(field, 1 + (trial as usize % 4)).unwrap();
        let f = random_function(&mut rng, &m, &sp);
        let mut g = random_function(&mut rng, &m, &sp);
        if trial % 3 == 0 {
            g = orthogonalize_lp(&f, &g, 2.0).unwrap();
        }
        let ip = inner_product(&f, &g);
        let scale = f.lp_norm(2.0).unwrap() * g.lp_norm(2.0).unwrap();
        let oracle = ip.norm() <= 1e-9 * scale;
        let lp = bj_lp_criterion(&f, &g, 2.0, 0.0, 1e-9).unwrap();
        assert!((lp.lhs - ip.norm()).abs() <= 1e-12 * scale);
        assert_eq!(lp.is_orthogonal(), oracle);
        if !lp.borderline {
            assert_eq!(bj_direct(&f, &g, 2.0, 1e-9).unwrap().is_orthogonal(), oracle, "trial {trial}");
        }
    }
}

#[test]
fn scalar_lp_matches_vector_form() {
    for trial in 0..40 {
        let mut rng = trial_rng(3, trial);
        let field = if trial % 2 == 0 { Field::Real } else { Field::Complex };
        let m = random_measure(&mut rng);
        let sp = SmoothSpace::scalar(field);
        let f = random_function(&mut rng, &m, &sp);
        let g = random_function(&mut rng, &m, &sp);
        for p in [1.5, 2.0, 3.0] {
            let a = bj_scalar_lp(&f, &g, p, 1e-9).unwrap();
            let b = bj_lp_criterion(&f, &g, p, 0.0, 1e-9).unwrap();
            assert!((a.lhs - b.lhs).abs() <= 1e-12 * a.scale.max(1.0));
            assert_eq!(a.verdict, b.verdict);
        }
        let a = bj_scalar_l1(&f, &g, 0.0, 1e-9).unwrap();
        let b = bj_l1_criterion(&f, &g, 0.0, 1e-9).unwrap();
        assert!((a.lhs - b.lhs).abs() < 1e-12 && (a.rhs - b.rhs).abs() < 1e-12);
    }
}

#[test]
fn criterion_keckic_and_direct_agree_off_the_band() {
    let mut checked = 0;
    for trial in 0..80 {
        let mut rng = trial_rng(23, trial);
        let field = if trial % 2 == 0 { Field::Real } else { Field::Complex };
        let m = random_measure(&mut rng);
        let sp = random_space(&mut rng, field);
        let f = random_function(&mut rng, &m, &sp);
        let mut g = random_function(&mut rng, &m, &sp);
        let p = [1.5, 2.0, 3.0][trial as usize % 3];
        if trial % 2 == 1 {
            g = orthogonalize_lp(&f, &g, p).unwrap();
        }
        let crit = bj_lp_criterion(&f, &g, p, 0.0, 1e-6).unwrap();
        if crit.borderline {
            continue;
        }
        checked += 1;
        let direct = bj_direct(&f, &g, p, 1e-9).unwrap();
        let keckic = bj_keckic(&f, &g, p, 360, 1e-6).unwrap();
        assert_eq!(crit.verdict, direct.verdict, "trial {trial}: {crit:?} {direct:?}");
        assert_eq!(crit.verdict, keckic.verdict, "trial {trial}: {crit:?} {keckic:?}");
    }
    assert!(checked > 60);
}

fn complex_strategy() -> impl Strategy<Value = Complex64> {
    (-1e3f64..1e3, -1e3f64..1e3).prop_map(|(a, b)| c(a, b))
}

proptest! {
    #[test]
    fn phase_sweep_is_close_to_modulus(z in complex_strategy()) {
        let sweep = phase_sweep_max(z, PHASE_SWEEP_POINTS);
        prop_assert!(sweep <= z.norm() * (1.0 + 1e-12));
        prop_assert!(z.norm() - sweep <= 1e-4 * z.norm());
    }

    #[test]
    fn verdicts_are_scale_invariant(seed in 0u64..500, a in complex_strategy(), b in complex_strategy()) {
        prop_assume!(a.norm() > 1e-3 && b.norm() > 1e-3);
        let mut rng = trial_rng(seed, 0);
        let m = random_measure(&mut rng);
        let sp = random_space(&mut rng, Field::Complex);
        let f = random_function(&mut rng, &m, &sp);
        let mut g = random_function(&mut rng, &m, &sp);
        if seed % 2 == 0 {
            g = orthogonalize_lp(&f, &g, 2.0).unwrap();
        }
        let base = bj_lp_criterion(&f, &g, 2.0, 0.0, 1e-6).unwrap();
        let scaled = bj_lp_criterion(&f.scale(a).unwrap(), &g.scale(b).unwrap(), 2.0, 0.0, 1e-6).unwrap();
        prop_assert_eq!(base.verdict, scaled.verdict);
        let l1 = bj_l1_criterion(&f, &g, 0.0, 1e-6).unwrap();
        let l1s = bj_l1_criterion(&f.scale(a).unwrap(), &g.scale(b).unwrap(), 0.0, 1e-6).unwrap();
        prop_assert_eq!(l1.verdict, l1s.verdict);
    }
}
