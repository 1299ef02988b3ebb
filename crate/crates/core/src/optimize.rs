//! Derivative-free scalar and box-constrained minimizers.

use log::debug;

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the minimum of `f` on `[a, b]`, stopping once the
/// bracket is narrower than `tol`. Returns `(x_min, f_min)`.
pub fn golden_section<F>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (b - a).abs() > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
        // bracket collapsed below float resolution
        if x1 >= x2 {
            break;
        }
    }
    let mid = 0.5 * (a + b);
    let fm = f(mid);
    [(x1, f1), (x2, f2), (mid, fm)]
        .into_iter()
        .min_by(|p, q| p.1.total_cmp(&q.1))
        .expect("non-empty")
}

/// Brackets a minimum of `f` on `(origin, limit)` by evaluating at
/// `origin + step·2ᵏ` until the objective increases. Returns `(lo, hi)`
/// enclosing the minimum.
pub fn bracket_by_doubling<F>(f: F, origin: f64, step: f64, limit: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let mut prev_x = origin + step;
    let mut prev_f = f(prev_x);
    let mut lo = origin;
    let mut h = step;
    loop {
        h *= 2.0;
        let x = origin + h;
        if x > limit {
            return Err(Error::BracketFailure(limit));
        }
        let fx = f(x);
        if fx > prev_f {
            debug!("bracket [{lo:.3e}, {x:.3e}] around {prev_x:.6}");
            return Ok((lo, x));
        }
        lo = prev_x;
        prev_x = x;
        prev_f = fx;
    }
}

/// Cyclic coordinate descent on a box, one golden-section line search per
/// coordinate, until no coordinate moves more than `step_tol` in a sweep or
/// a sweep stops improving the objective at machine precision.
///
/// Returns the final point, its value and the number of sweeps used.
pub fn coordinate_descent<F>(
    f: F,
    start: &[f64],
    bounds: &[(f64, f64)],
    step_tol: f64,
    max_sweeps: usize,
) -> (Vec<f64>, f64, usize)
where
    F: Fn(&[f64]) -> f64,
{
    let mut x = start.to_vec();
    let mut fx = f(&x);
    let mut radius: Vec<f64> = bounds.iter().map(|(lo, hi)| 0.25 * (hi - lo)).collect();
    for sweep in 1..=max_sweeps {
        let f_start = fx;
        let mut max_move: f64 = 0.0;
        for k in 0..x.len() {
            let (lo, hi) = bounds[k];
            let centre = x[k];
            let a = (centre - radius[k]).max(lo);
            let b = (centre + radius[k]).min(hi);
            let line = |t: f64| {
                let mut y = x.clone();
                y[k] = t;
                f(&y)
            };
            let (t, ft) = golden_section(line, a, b, 0.1 * step_tol);
            if ft < fx {
                let moved = (t - centre).abs();
                max_move = max_move.max(moved);
                x[k] = t;
                fx = ft;
                // a line minimum near the edge of the window means the window was too small
                radius[k] = if moved > 0.45 * radius[k] {
                    (2.0 * radius[k]).min(hi - lo)
                } else {
                    (4.0 * moved).max(16.0 * step_tol)
                };
            } else {
                radius[k] = (0.5 * radius[k]).max(16.0 * step_tol);
            }
        }
        let stalled = f_start - fx <= 1e-15 * f_start.abs().max(1.0);
        if max_move < step_tol || stalled {
            debug!("coordinate descent converged after {sweep} sweeps, f = {fx:.12}");
            return (x, fx, sweep);
        }
    }
    (x, fx, max_sweeps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn golden_finds_parabola_minimum() {
        let (x, fx) = golden_section(|x| (x - 1.3).powi(2) + 2.0, -5.0, 5.0, 1e-10);
        assert_abs_diff_eq!(x, 1.3, epsilon = 1e-7);
        assert_abs_diff_eq!(fx, 2.0, epsilon = 1e-15);
    }

    #[test]
    fn golden_handles_boundary_minimum() {
        let (x, _) = golden_section(|x| x, 0.0, 1.0, 1e-12);
        assert!(x < 1e-11);
    }

    #[test]
    fn doubling_brackets() {
        let f = |x: f64| (x - 3.0).powi(2);
        let (lo, hi) = bracket_by_doubling(f, 0.5, 1e-9, 1e6).unwrap();
        assert!(lo < 3.0 && 3.0 < hi);
        assert!(matches!(
            bracket_by_doubling(|x: f64| -x, 0.5, 1e-9, 1e3),
            Err(Error::BracketFailure(_))
        ));
    }

    #[test]
    fn coordinate_descent_on_coupled_quadratic() {
        let f = |p: &[f64]| (p[0] - 1.0).powi(2) + (p[1] + 0.5).powi(2) + 0.8 * (p[0] - 1.0) * (p[1] + 0.5);
        let (x, fx, _) = coordinate_descent(f, &[0.0, 0.0], &[(-3.0, 3.0), (-3.0, 3.0)], 1e-10, 2000);
        assert_abs_diff_eq!(x[0], 1.0, epsilon = 1e-7);
        assert_abs_diff_eq!(x[1], -0.5, epsilon = 1e-7);
        assert!(fx < 1e-14);
    }
}
