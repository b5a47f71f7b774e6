use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{binomial, factorial, rat, PiPoly, Rat};

static BERNOULLI: OnceLock<Mutex<Vec<Rat>>> = OnceLock::new();

/// Bernoulli number `B_m` with `B_1 = -1/2`, from
/// `sum_{k=0}^{m} C(m+1, k) B_k = 0`. Values are cached.
pub fn bernoulli(m: u32) -> Rat {
    let cache = BERNOULLI.get_or_init(|| Mutex::new(vec![Rat::one()]));
    let mut table = cache.lock().unwrap_or_else(|e| e.into_inner());
    while table.len() <= m as usize {
        let next = table.len() as u32;
        let mut acc = Rat::zero();
        for (k, b) in table.iter().enumerate() {
            if !b.is_zero() {
                acc += b * Rat::from_integer(binomial(next + 1, k as u32));
            }
        }
        let b = -acc / Rat::from_integer(BigInt::from(next + 1));
        table.push(b);
    }
    table[m as usize].clone()
}

/// `ζ(2i)` as an exact element of Q[π²]. `ζ(0) = -1/2`.
pub fn zeta_even(i: u32) -> PiPoly {
    if i == 0 {
        return PiPoly::constant(rat(-1, 2));
    }
    // (-1)^{i+1} B_{2i} (2π)^{2i} / (2 (2i)!)
    let two_pow = BigInt::one() << (2 * i);
    let mut c = bernoulli(2 * i) * Rat::from_integer(two_pow)
        / Rat::from_integer(factorial(2 * i) * 2);
    if i.is_multiple_of(2) {
        c = -c;
    }
    PiPoly::monomial(c, i)
}
