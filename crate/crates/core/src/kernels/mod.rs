//! Moment integrals of the kernel `H(x, t)` in closed form.
//!
//! * `F_{2k+1}(t) = ∫₀^∞ x^{2k+1} H(x,t) dx`
//! * `G_{i,j}(t) = ∫₀^∞∫₀^∞ x^{2i+1} y^{2j+1} H(x+y,t) dx dy`
//!
//! Both are even polynomials in `t` whose coefficients are single powers of
//! π with positive rational parts. The float checks in [`crate::oracle`]
//! validate these formulas against quadrature.

mod functions;

pub use functions::{d_num, h_num, r_num};

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::One;

use crate::arith::{binomial, factorial, zeta_even, PiPoly, Rat};
use crate::poly::{LPoly, MultiIndex};

/// Even polynomial in a single variable `t`; entry `m` is the coefficient
/// of `t^{2m}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelPoly {
    coeffs: Vec<PiPoly>,
}

impl KernelPoly {
    pub fn new(mut coeffs: Vec<PiPoly>) -> Self {
        while coeffs.last().is_some_and(PiPoly::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Coefficient of `t^{2m}`.
    pub fn coeff(&self, m: usize) -> PiPoly {
        self.coeffs.get(m).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[PiPoly] {
        &self.coeffs
    }

    /// Degree in `t²`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::new(self.coeffs.iter().map(|p| p.scale(c)).collect())
    }

    pub fn to_lpoly(&self) -> LPoly {
        let mut p = LPoly::zero(1);
        for (m, c) in self.coeffs.iter().enumerate() {
            p.add_term(MultiIndex::new(vec![m as u32]), c);
        }
        p
    }

    pub fn eval_f64(&self, t: f64) -> crate::Result<f64> {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * t * t + c.to_f64()?;
        }
        Ok(acc)
    }
}

impl serde::Serialize for KernelPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_lpoly().serialize(s)
    }
}

#[derive(Default)]
struct Caches {
    single: RwLock<HashMap<u32, Arc<KernelPoly>>>,
    shifted: RwLock<HashMap<u32, Arc<LPoly>>>,
}

fn caches() -> &'static Caches {
    static CACHES: OnceLock<Caches> = OnceLock::new();
    CACHES.get_or_init(Caches::default)
}

fn cached<V>(map: &RwLock<HashMap<u32, Arc<V>>>, key: u32, make: impl FnOnce() -> V) -> Arc<V> {
    if let Some(v) = map.read().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return v.clone();
    }
    let v = Arc::new(make());
    map.write()
        .unwrap_or_else(|e| e.into_inner())
        .entry(key)
        .or_insert(v)
        .clone()
}

fn build_kernel_f(k: u32) -> KernelPoly {
    // (2k+1)! Σ_{i=0}^{k+1} ζ(2i) (2^{2i+1} - 4) t^{2(k+1-i)} / (2(k+1-i))!
    let top = k + 1;
    let lead = factorial(2 * k + 1);
    let mut coeffs = vec![PiPoly::zero(); top as usize + 1];
    for i in 0..=top {
        let m = top - i;
        let weight = (BigInt::one() << (2 * i + 1)) - 4;
        let c = Rat::new(&lead * weight, factorial(2 * m));
        coeffs[m as usize] = zeta_even(i).scale(&c);
    }
    KernelPoly::new(coeffs)
}

/// `F_{2k+1}(t)`, of degree `k + 1` in `t²`.
pub fn kernel_f(k: u32) -> Arc<KernelPoly> {
    cached(&caches().single, k, || build_kernel_f(k))
}

/// `G_{i,j}(t) = (2i+1)! (2j+1)! / (2i+2j+3)! · F_{2i+2j+3}(t)`, of degree
/// `i + j + 2` in `t²`.
pub fn kernel_double(i: u32, j: u32) -> KernelPoly {
    let beta = Rat::new(
        factorial(2 * i + 1) * factorial(2 * j + 1),
        factorial(2 * i + 2 * j + 3),
    );
    kernel_f(i + j + 1).scale(&beta)
}

/// `½ (F(a + b) + F(a − b))` as a polynomial in `(a, b)`.
pub fn shifted_sum(f: &KernelPoly) -> LPoly {
    let mut out = LPoly::zero(2);
    for (m, c) in f.coeffs().iter().enumerate() {
        let m = m as u32;
        for r in 0..=m {
            let w = Rat::from_integer(binomial(2 * m, 2 * r));
            out.add_term(MultiIndex::new(vec![r, m - r]), &c.scale(&w));
        }
    }
    out
}

/// Cached `shifted_sum(kernel_f(k))`.
pub fn shifted_kernel(k: u32) -> Arc<LPoly> {
    cached(&caches().shifted, k, || shifted_sum(&kernel_f(k)))
}
