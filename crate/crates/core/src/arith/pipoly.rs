use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{rat_to_f64, serde_rat, Rat};
use crate::error::Result;

/// An element of Q[π²], stored as a sparse map from `k` (meaning `π^{2k}`)
/// to a nonzero rational coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PiPoly {
    terms: BTreeMap<u32, Rat>,
}

impl PiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(c, 0)
    }

    /// `c · π^{2k}`
    pub fn monomial(c: Rat, k: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        Self { terms }
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (u32, Rat)>) -> Self {
        let mut p = Self::zero();
        for (k, c) in iter {
            p.add_term(k, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates `(k, coefficient of π^{2k})` in increasing `k`.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &Rat)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, k: u32) -> Rat {
        self.terms.get(&k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The single term `(k, c)` if this is a nonzero π-monomial.
    pub fn as_monomial(&self) -> Option<(u32, &Rat)> {
        if self.terms.len() == 1 {
            self.terms().next()
        } else {
            None
        }
    }

    /// The pure rational value, if no positive power of π occurs.
    pub fn as_rational(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, k: u32, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Multiplies by `π^{2k}`.
    pub fn shift(&self, k: u32) -> Self {
        Self {
            terms: self.terms.iter().map(|(j, v)| (j + k, v.clone())).collect(),
        }
    }

    /// `self += a · b`, without materialising the product.
    pub fn add_product(&mut self, a: &PiPoly, b: &PiPoly) {
        for (i, x) in &a.terms {
            for (j, y) in &b.terms {
                self.add_term(i + j, x * y);
            }
        }
    }

    /// Evaluates with π at double precision. Relative error stays near
    /// machine epsilon for π-degree up to 30; a rational part outside the
    /// double range is reported as an error.
    pub fn to_f64(&self) -> Result<f64> {
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        let mut sum = 0.0;
        for (k, c) in &self.terms {
            sum += rat_to_f64(c)? * pi2.powi(*k as i32);
        }
        Ok(sum)
    }
}

impl From<Rat> for PiPoly {
    fn from(c: Rat) -> Self {
        Self::constant(c)
    }
}

impl AddAssign<&PiPoly> for PiPoly {
    fn add_assign(&mut self, rhs: &PiPoly) {
        for (k, c) in &rhs.terms {
            self.add_term(*k, c.clone());
        }
    }
}

impl Add for &PiPoly {
    type Output = PiPoly;
    fn add(self, rhs: &PiPoly) -> PiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Neg for &PiPoly {
    type Output = PiPoly;
    fn neg(self) -> PiPoly {
        PiPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Sub for &PiPoly {
    type Output = PiPoly;
    fn sub(self, rhs: &PiPoly) -> PiPoly {
        self + &(-rhs)
    }
}

impl Mul for &PiPoly {
    type Output = PiPoly;
    fn mul(self, rhs: &PiPoly) -> PiPoly {
        let mut out = PiPoly::zero();
        out.add_product(self, rhs);
        out
    }
}

impl fmt::Display for PiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            match *k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}·π^2")?,
                _ => write!(f, "{c}·π^{}", 2 * k)?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PiTerm {
    pi_power: u32,
    #[serde(with = "serde_rat")]
    coeff: Rat,
}

// `pi_power` is the literal exponent of π, always even.
impl Serialize for PiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.terms.iter().map(|(k, c)| PiTerm {
            pi_power: 2 * k,
            coeff: c.clone(),
        }))
    }
}

impl<'de> Deserialize<'de> for PiPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<PiTerm>::deserialize(d)?;
        let mut p = PiPoly::zero();
        for t in raw {
            if t.pi_power % 2 != 0 {
                return Err(serde::de::Error::custom("odd power of π"));
            }
            p.add_term(t.pi_power / 2, t.coeff);
        }
        Ok(p)
    }
}
