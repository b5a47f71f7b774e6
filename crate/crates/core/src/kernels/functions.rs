//! Floating-point evaluation of `H`, `D` and `R` in overflow-free form.

/// `1 / (1 + e^{u/2})`, rewritten for `u > 0` so nothing overflows.
fn logistic_half(u: f64) -> f64 {
    if u > 0.0 {
        let e = (-0.5 * u).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + (0.5 * u).exp())
    }
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// `H(x, y) = 1/(1 + e^{(x+y)/2}) + 1/(1 + e^{(x−y)/2})`
pub fn h_num(x: f64, y: f64) -> f64 {
    logistic_half(x + y) + logistic_half(x - y)
}

/// `D(x, y, z) = 2 log((e^{x/2} + e^{(y+z)/2}) / (e^{−x/2} + e^{(y+z)/2}))`
pub fn d_num(x: f64, y: f64, z: f64) -> f64 {
    let s = 0.5 * (y + z);
    2.0 * (log_sum_exp(&[0.5 * x, s]) - log_sum_exp(&[-0.5 * x, s]))
}

/// `R(x, y, z) = x − log((cosh(y/2) + cosh((x+z)/2)) / (cosh(y/2) + cosh((x−z)/2)))`
pub fn r_num(x: f64, y: f64, z: f64) -> f64 {
    // log(cosh a + cosh b) up to the common -ln 2, which cancels in the ratio.
    let lc = |a: f64, b: f64| log_sum_exp(&[a, -a, b, -b]);
    let a = 0.5 * y;
    x - (lc(a, 0.5 * (x + z)) - lc(a, 0.5 * (x - z)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_values() {
        assert_eq!(h_num(0.0, 0.0), 1.0);
        let h = h_num(50.0, 0.0);
        assert!((h - 2.0 * (-25.0f64).exp()).abs() < 1e-20, "{h}");
        assert!((h - 2.7779e-11).abs() < 1e-14);
        assert!(h_num(5000.0, 3.0).is_finite());
        assert!((h_num(-5000.0, 0.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn h_is_even_in_second_argument() {
        for &(x, y) in &[(0.3, 1.2), (4.0, -7.5), (12.0, 3.3), (-2.0, 0.1)] {
            assert!((h_num(x, y) - h_num(x, -y)).abs() < 1e-15);
        }
    }

    #[test]
    fn d_and_r_vanish_at_origin() {
        assert_eq!(d_num(0.0, 0.0, 0.0), 0.0);
        assert!(r_num(0.0, 0.0, 0.0).abs() < 1e-15);
    }

    #[test]
    fn stable_forms_survive_large_arguments() {
        assert!(d_num(3000.0, 2000.0, 1500.0).is_finite());
        assert!(r_num(3000.0, 2000.0, 1500.0).is_finite());
        assert!(d_num(3000.0, 1.0, 1.0) > 0.0);
    }

    #[test]
    fn matches_naive_formulas_in_safe_range() {
        for &(x, y, z) in &[(0.5f64, 1.0f64, 2.0f64), (3.0, 0.2, 4.0), (7.0, 5.0, 1.0)] {
            let naive_d = 2.0
                * (((0.5 * x).exp() + (0.5 * (y + z)).exp())
                    / ((-0.5 * x).exp() + (0.5 * (y + z)).exp()))
                .ln();
            let naive_r = x
                - (((0.5 * y).cosh() + (0.5 * (x + z)).cosh())
                    / ((0.5 * y).cosh() + (0.5 * (x - z)).cosh()))
                .ln();
            assert!((d_num(x, y, z) - naive_d).abs() < 1e-12);
            assert!((r_num(x, y, z) - naive_r).abs() < 1e-12);
        }
    }
}
