//! Derivative-free minimization of convex functions of one real variable.

/// `(√5 − 1) / 2`
pub const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the minimum of a convex `f` on `[a, b]`.
///
/// Stops once the bracket is narrower than `xtol` or after `max_iter`
/// shrinks. Returns the best point evaluated, endpoints included.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, xtol: f64, max_iter: usize) -> (f64, f64) {
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut best = (lo, f(lo));
    let fhi = f(hi);
    if fhi < best.1 {
        best = (hi, fhi);
    }
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..max_iter {
        if hi - lo <= xtol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    for cand in [(x1, f1), (x2, f2)] {
        if cand.1 < best.1 {
            best = cand;
        }
    }
    best
}

/// Golden-section on the symmetric bracket `[-radius, radius]`, reporting
/// a move only when it beats `f(0)`.
pub(crate) fn line_min<F: FnMut(f64) -> f64>(mut f: F, radius: f64, f0: f64) -> (f64, f64) {
    if !(radius > 0.0 && radius.is_finite()) {
        return (0.0, f0);
    }
    let (t, ft) = golden_section(&mut f, -radius, radius, 1e-15 * radius, 200);
    if ft < f0 {
        (t, ft)
    } else {
        (0.0, f0)
    }
}
