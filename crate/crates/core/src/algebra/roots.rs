//! Numerical complex roots, used only where an exact check is impossible
//! (absolute values of algebraic numbers).

use num_complex::Complex64;

use super::intpoly::IntPoly;

fn horner(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All complex roots by the Aberth–Ehrlich iteration. Intended for
/// squarefree polynomials of moderate degree.
pub fn complex_roots(f: &IntPoly) -> Vec<Complex64> {
    let (zeros, body) = f.strip_x_power();
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    let n = body.degree().unwrap_or(0);
    if n == 0 {
        return roots;
    }
    let raw = body.to_f64s();
    let lc = raw[n];
    let coeffs: Vec<f64> = raw.iter().map(|c| c / lc).collect();
    let radius = coeffs[..n]
        .iter()
        .enumerate()
        .map(|(i, c)| c.abs().powf(1.0 / (n - i) as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64))
        .collect();
    for _ in 0..2000 {
        let mut worst = 0.0f64;
        for i in 0..n {
            let (p, dp) = horner(&coeffs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            z[i] -= step;
            worst = worst.max(step.norm() / (1.0 + z[i].norm()));
        }
        if worst < 1e-15 {
            break;
        }
    }
    roots.extend(z);
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_known_polynomials() {
        let r = complex_roots(&IntPoly::from_i64s(&[2, -2, 1]));
        assert_eq!(r.len(), 2);
        for z in r {
            assert!((z.norm() - 2f64.sqrt()).abs() < 1e-12);
            assert!((z.re - 1.0).abs() < 1e-12);
        }
        let r = complex_roots(&IntPoly::from_i64s(&[0, 0, -2, 1]));
        assert_eq!(r.len(), 3);
        assert!(r.iter().any(|z| (z.re - 2.0).abs() < 1e-12));
    }

    #[test]
    fn weil_like_moduli() {
        // x^4 + 2x^3 + 2x^2 + 4x + 4 has all roots of modulus √2
        let r = complex_roots(&IntPoly::from_i64s(&[4, 4, 2, 2, 1]));
        for z in r {
            assert!((z.norm() - 2f64.sqrt()).abs() < 1e-9, "{z}");
        }
    }
}
