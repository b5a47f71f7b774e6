//! Floating-point checks that are independent of the exact kernel code:
//! composite Gauss–Legendre quadrature of the kernel moments, and finite
//! differences for the relations between `D`, `R` and `H`.
//!
//! Nothing here feeds the recursion.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::{d_num, h_num, kernel_double, kernel_f, r_num};

/// Tail mass beyond the truncation point is kept below this.
pub const TAIL_TARGET: f64 = 1e-12;

/// Tolerance for closed-form kernels against quadrature (scaled deviation).
pub const KERNEL_TOLERANCE: f64 = 1e-8;
/// Tolerance for the finite-difference derivative identities.
pub const DERIVATIVE_TOLERANCE: f64 = 1e-6;
/// Tolerance for `R(x,y,z) + R(x,z,y) = x + D(x,y,z)` evaluated directly.
pub const IDENTITY_TOLERANCE: f64 = 1e-10;

pub const FD_STEP: f64 = 1e-4;
pub const IDENTITY_GRID: [f64; 4] = [0.5, 1.0, 2.0, 5.0];
pub const KERNEL_T_GRID: [f64; 3] = [0.0, 1.0, 5.0];

/// A quadrature value with an estimate of its absolute error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let n = order as f64;
        for i in 0..order.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                // P_n(x) and P_n'(x) by the three-term recurrence.
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=order {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                let p = if order == 1 { x } else { p1 };
                let pm1 = if order == 1 { 1.0 } else { p0 };
                dp = n * (x * p - pm1) / (x * x - 1.0);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[order - 1 - i] = x;
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Nodes and weights of the composite rule on `[0, end]` with panels of
    /// width `width`.
    fn composite(&self, end: f64, width: f64) -> Vec<(f64, f64)> {
        let panels = (end / width).round() as usize;
        let mut out = Vec::with_capacity(panels * self.nodes.len());
        for p in 0..panels {
            let a = p as f64 * width;
            let half = 0.5 * width;
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                out.push((a + half * (x + 1.0), half * w));
            }
        }
        out
    }
}

/// Bound on `∫_T^∞ x^m H(x,t) dx` from `H(x,t) ≤ 2 e^{(t−x)/2}`:
/// `2 e^{t/2} 2^{m+1} Γ(m+1, T/2)`.
pub fn tail_bound(m: u32, t: f64, end: f64) -> f64 {
    let z = 0.5 * end;
    // Γ(m+1, z) = m! e^{-z} Σ_{k≤m} z^k / k!
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=m {
        term *= z / k as f64;
        sum += term;
    }
    let fact: f64 = (1..=m).map(f64::from).product();
    2.0 * (0.5 * t.abs()).exp() * 2f64.powi(m as i32 + 1) * fact * (-z).exp() * sum
}

fn truncation(m: u32, t: f64, width: f64) -> f64 {
    let mut end = width * ((t.abs() / width).ceil() + 1.0);
    while tail_bound(m, t, end) > TAIL_TARGET {
        end += width;
    }
    end
}

fn quad_1d(m: u32, t: f64, rule: &GaussLegendre, end: f64, width: f64) -> f64 {
    rule.composite(end, width)
        .into_iter()
        .map(|(x, w)| w * x.powi(m as i32) * h_num(x, t))
        .sum()
}

/// `∫₀^∞ x^{2k+1} H(x,t) dx` by composite Gauss–Legendre on `[0, T]`, with `T`
/// chosen so the tail is below [`TAIL_TARGET`]. Domain: `k ≤ 10`, `|t| ≤ 20`.
pub fn quad_f(k: u32, t: f64) -> Result<Estimate> {
    if k > 10 || t.abs() > 20.0 || !t.is_finite() {
        return Err(Error::OracleDomain(format!("quad_f(k = {k}, t = {t})")));
    }
    let m = 2 * k + 1;
    let rule = GaussLegendre::new(20);
    let end = truncation(m, t, 4.0);
    let fine = quad_1d(m, t, &rule, end, 2.0);
    let coarse = quad_1d(m, t, &rule, end, 4.0);
    let rounding = 64.0 * f64::EPSILON * fine.abs();
    Ok(Estimate {
        value: fine,
        error: (fine - coarse).abs() + tail_bound(m, t, end) + rounding,
    })
}

fn quad_2d(i: u32, j: u32, t: f64, rule: &GaussLegendre, end: f64, width: f64) -> f64 {
    let pts = rule.composite(end, width);
    let xs: Vec<(f64, f64)> = pts.iter().map(|&(x, w)| (x, w * x.powi(2 * i as i32 + 1))).collect();
    let ys: Vec<(f64, f64)> = pts.iter().map(|&(y, w)| (y, w * y.powi(2 * j as i32 + 1))).collect();
    let mut total = 0.0;
    for &(x, wx) in &xs {
        let mut row = 0.0;
        for &(y, wy) in &ys {
            row += wy * h_num(x + y, t);
        }
        total += wx * row;
    }
    total
}

/// `∫₀^∞∫₀^∞ x^{2i+1} y^{2j+1} H(x+y,t) dx dy` by tensor-product quadrature on
/// `[0, T]²`. The region left out lies in `x + y > T`, whose mass is below
/// the one-dimensional tail bound. Domain: `i + j ≤ 5`, `|t| ≤ 10`.
pub fn quad_double(i: u32, j: u32, t: f64) -> Result<Estimate> {
    if i + j > 5 || t.abs() > 10.0 || !t.is_finite() {
        return Err(Error::OracleDomain(format!("quad_double(i = {i}, j = {j}, t = {t})")));
    }
    let m = 2 * (i + j) + 3;
    let rule = GaussLegendre::new(16);
    let end = truncation(m, t, 8.0);
    let fine = quad_2d(i, j, t, &rule, end, 4.0);
    let coarse = quad_2d(i, j, t, &rule, end, 8.0);
    let rounding = 256.0 * f64::EPSILON * fine.abs();
    Ok(Estimate {
        value: fine,
        error: (fine - coarse).abs() + tail_bound(m, t, end) + rounding,
    })
}

/// One line of an oracle report.
#[derive(Clone, Debug, Serialize)]
pub struct OracleRecord {
    pub check: String,
    pub grid: String,
    pub max_abs_dev: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl OracleRecord {
    fn new(check: &str, grid: &str, max_abs_dev: f64, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            grid: grid.into(),
            max_abs_dev,
            tolerance,
            pass: max_abs_dev < tolerance,
        }
    }
}

fn scaled_dev(quad: f64, exact: f64) -> f64 {
    (quad - exact).abs() / exact.abs().max(1.0)
}

/// Closed-form `F_{2k+1}` (`k ≤ 8`) and `G_{i,j}` (`i + j ≤ 5`) against
/// quadrature at `t ∈ {0, 1, 5}`. The deviation is `|quad − exact| / max(1, |exact|)`.
pub fn kernel_oracle_suite() -> Result<Vec<OracleRecord>> {
    let mut dev_f: f64 = 0.0;
    for k in 0..=8 {
        for &t in &KERNEL_T_GRID {
            let q = quad_f(k, t)?;
            dev_f = dev_f.max(scaled_dev(q.value, kernel_f(k).eval_f64(t)?));
        }
    }
    let mut dev_g: f64 = 0.0;
    for i in 0..=5 {
        for j in 0..=5 - i {
            for &t in &KERNEL_T_GRID {
                let q = quad_double(i, j, t)?;
                dev_g = dev_g.max(scaled_dev(q.value, kernel_double(i, j).eval_f64(t)?));
            }
        }
    }
    Ok(vec![
        OracleRecord::new("kernel_f closed form vs quadrature", "k<=8, t in {0,1,5}", dev_f, KERNEL_TOLERANCE),
        OracleRecord::new("kernel_double closed form vs quadrature", "i+j<=5, t in {0,1,5}", dev_g, KERNEL_TOLERANCE),
    ])
}

fn grid3() -> impl Iterator<Item = (f64, f64, f64)> {
    IDENTITY_GRID.iter().flat_map(|&x| {
        IDENTITY_GRID
            .iter()
            .flat_map(move |&y| IDENTITY_GRID.iter().map(move |&z| (x, y, z)))
    })
}

fn central_dx(f: impl Fn(f64) -> f64, x: f64) -> f64 {
    (f(x + FD_STEP) - f(x - FD_STEP)) / (2.0 * FD_STEP)
}

/// Derivative identities by central differences, the exact `R`/`D`
/// identity, and evenness of `H` in its second argument.
pub fn kernel_identity_suite() -> Vec<OracleRecord> {
    let grid = "x,y,z in {0.5,1,2,5}";
    let mut d_dev: f64 = 0.0;
    let mut r_dev: f64 = 0.0;
    let mut id_dev: f64 = 0.0;
    let mut even_dev: f64 = 0.0;
    for (x, y, z) in grid3() {
        let dd = central_dx(|s| d_num(s, y, z), x);
        d_dev = d_dev.max((dd - h_num(y + z, x)).abs());
        let dr = central_dx(|s| r_num(s, y, z), x);
        r_dev = r_dev.max((2.0 * dr - h_num(z, x + y) - h_num(z, x - y)).abs());
        id_dev = id_dev.max((r_num(x, y, z) + r_num(x, z, y) - x - d_num(x, y, z)).abs());
        even_dev = even_dev.max((h_num(x, y) - h_num(x, -y)).abs());
    }
    let origin = d_num(0.0, 0.0, 0.0).abs().max(r_num(0.0, 0.0, 0.0).abs());
    vec![
        OracleRecord::new("dD/dx = H(y+z,x)", grid, d_dev, DERIVATIVE_TOLERANCE),
        OracleRecord::new("2 dR/dx = H(z,x+y) + H(z,x-y)", grid, r_dev, DERIVATIVE_TOLERANCE),
        OracleRecord::new("R(x,y,z) + R(x,z,y) = x + D(x,y,z)", grid, id_dev, IDENTITY_TOLERANCE),
        OracleRecord::new("H(x,y) = H(x,-y)", "x,y in {0.5,1,2,5}", even_dev, IDENTITY_TOLERANCE),
        OracleRecord::new("D(0,0,0) = R(0,0,0) = 0", "origin", origin, IDENTITY_TOLERANCE),
    ]
}

/// Both oracle suites.
pub fn full_report() -> Result<Vec<OracleRecord>> {
    let mut out = kernel_oracle_suite()?;
    out.extend(kernel_identity_suite());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let rule = GaussLegendre::new(10);
        let s: f64 = rule.weights.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        // ∫_{-1}^{1} x^18 = 2/19
        let v: f64 = rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * x.powi(18)).sum();
        assert!((v - 2.0 / 19.0).abs() < 1e-14);
        let odd = GaussLegendre::new(7);
        assert!(odd.nodes[3].abs() < 1e-15);
        assert!((odd.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn first_moment_values() {
        let q = quad_f(0, 0.0).unwrap();
        assert!((q.value - 2.0 * PI * PI / 3.0).abs() < 1e-10);
        let q = quad_f(0, 1.0).unwrap();
        assert!((q.value - (2.0 * PI * PI / 3.0 + 0.5)).abs() < 1e-10);
        let q = quad_f(1, 0.0).unwrap();
        assert!((q.value - 28.0 * PI.powi(4) / 15.0).abs() < 1e-8);
    }

    #[test]
    fn double_moment_values() {
        let q = quad_double(0, 0, 0.0).unwrap();
        assert!((q.value - 28.0 * PI.powi(4) / 90.0).abs() < 1e-8, "{}", q.value);
        let a = quad_double(0, 1, 1.0).unwrap();
        let b = quad_double(1, 0, 1.0).unwrap();
        assert!((a.value - b.value).abs() < 1e-9 * a.value);
        let f5 = kernel_f(2).eval_f64(1.0).unwrap() / 20.0;
        assert!(((a.value - f5) / f5).abs() < 1e-10);
    }

    #[test]
    fn error_estimates_cover_true_deviation() {
        for k in [0, 3, 8, 10] {
            for t in [0.0, 1.0, 5.0, 20.0] {
                let q = quad_f(k, t).unwrap();
                let exact = kernel_f(k).eval_f64(t).unwrap();
                let dev = (q.value - exact).abs();
                assert!(dev <= q.error + 1e-15 * exact, "k={k} t={t} dev={dev} est={}", q.error);
            }
        }
        for (i, j) in [(0, 0), (2, 3), (5, 0)] {
            let q = quad_double(i, j, 5.0).unwrap();
            let exact = kernel_double(i, j).eval_f64(5.0).unwrap();
            assert!((q.value - exact).abs() <= q.error + 1e-15 * exact);
        }
    }

    #[test]
    fn domain_is_enforced() {
        assert!(matches!(quad_f(11, 0.0), Err(Error::OracleDomain(_))));
        assert!(quad_f(0, 21.0).is_err());
        assert!(quad_double(3, 3, 0.0).is_err());
        assert!(quad_double(0, 0, 11.0).is_err());
    }

    #[test]
    fn tail_bound_shrinks() {
        assert!(tail_bound(3, 0.0, 100.0) < tail_bound(3, 0.0, 50.0));
        assert!(tail_bound(21, 20.0, truncation(21, 20.0, 4.0)) <= TAIL_TARGET);
    }

    #[test]
    fn identity_suite_passes() {
        for r in kernel_identity_suite() {
            assert!(r.pass, "{r:?}");
        }
    }
}
