//! Floating-point root extraction used only for confirmatory weight checks.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

const SCHUR_MAX_ITER: usize = 2_000;
const ABERTH_MAX_ITER: usize = 500;

/// Reciprocal roots of `a_0 + a_1 T + .. + a_r T^r` (`a_0 != 0`), i.e. the
/// eigenvalues of the companion matrix of `T^r + (a_1/a_0) T^{r-1} + .. + a_r/a_0`.
pub fn reciprocal_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c = coeffs.to_vec();
    while c.len() > 1 && c.last().map_or(false, |z| *z == Complex64::new(0.0, 0.0)) {
        c.pop();
    }
    let r = c.len().saturating_sub(1);
    if r == 0 {
        return Vec::new();
    }
    let a0 = c[0];
    let mut m = DMatrix::<Complex64>::zeros(r, r);
    for i in 0..r {
        m[(0, i)] = -c[i + 1] / a0;
        if i + 1 < r {
            m[(i + 1, i)] = Complex64::new(1.0, 0.0);
        }
    }
    // The unshifted QR step can stall on companion matrices whose roots all
    // share one modulus, so the iteration count is capped.
    Schur::try_new(m, f64::EPSILON, SCHUR_MAX_ITER)
        .and_then(|s| s.eigenvalues())
        .map(|v| v.iter().copied().collect())
        .unwrap_or_else(|| aberth(&c))
}

fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut dv = v;
    for &a in c.iter().rev() {
        dv = dv * z + v;
        v = v * z + a;
    }
    (v, dv)
}

/// Aberth-Ehrlich iteration on the reversed polynomial, whose roots are the
/// reciprocal roots of `c`.
fn aberth(c: &[Complex64]) -> Vec<Complex64> {
    let rev: Vec<Complex64> = c.iter().rev().map(|a| a / c[c.len() - 1]).collect();
    let r = rev.len() - 1;
    let radius = rev[..r].iter().map(|a| a.norm().powf(1.0 / r as f64)).fold(0.0, f64::max).max(1.0);
    let mut z: Vec<Complex64> = (0..r)
        .map(|i| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * (i as f64 + 0.25) / r as f64 + 0.4))
        .collect();
    for _ in 0..ABERTH_MAX_ITER {
        let mut moved: f64 = 0.0;
        for i in 0..r {
            let (v, dv) = horner(&rev, z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let repulsion: Complex64 = (0..r).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            z[i] -= step;
            moved = moved.max(step.norm() / z[i].norm().max(1.0));
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Largest relative deviation of `|root|` from `target` over all reciprocal
/// roots; zero when there are no roots.
pub fn max_modulus_deviation(coeffs: &[Complex64], target: f64) -> f64 {
    reciprocal_roots(coeffs).iter().map(|z| (z.norm() - target).abs() / target).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reciprocal_roots_of_product() {
        // (1 - 2T)(1 - 3iT) = 1 - (2 + 3i) T + 6i T^2
        let c = [Complex64::new(1.0, 0.0), Complex64::new(-2.0, -3.0), Complex64::new(0.0, 6.0)];
        let mut roots = reciprocal_roots(&c);
        roots.sort_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap());
        assert!((roots[0] - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        assert!((roots[1] - Complex64::new(0.0, 3.0)).norm() < 1e-12);
        assert!(reciprocal_roots(&[Complex64::new(1.0, 0.0)]).is_empty());
    }

    #[test]
    fn aberth_agrees_with_schur() {
        let c = [
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.5, 0.5),
            Complex64::new(2.0, -1.0),
            Complex64::new(0.25, 3.0),
            Complex64::new(-4.0, 0.0),
        ];
        let mut a = aberth(&c);
        let mut b = reciprocal_roots(&c);
        let key = |z: &Complex64| (z.re * 1e6).round() as i64 * 10_000_000 + (z.im * 1e6).round() as i64;
        a.sort_by_key(key);
        b.sort_by_key(key);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-9, "{x} vs {y}");
        }
    }
}
