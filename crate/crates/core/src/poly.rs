//! Sparse even polynomials in boundary lengths `L_1, ..., L_n` with Q[π²]
//! coefficients.
//!
//! A term is keyed by a [`MultiIndex`] `α` and stands for
//! `L_1^{2α_1} ⋯ L_n^{2α_n}`, so evenness holds by construction. Odd
//! intermediates such as `∂V/∂L_j` are carried as `L_j · Q` with `Q` even.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{serde_rat, PiPoly, Rat};
use crate::error::{Error, Result};

/// Exponent vector `α`; entry `i` is half the degree in `L_{i+1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        Self(entries)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|α|`
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    /// `α! = ∏ α_i!`
    pub fn factorial(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::one(), |acc, &a| acc * crate::arith::factorial(a))
    }

    fn with(&self, i: usize, value: u32) -> Self {
        let mut v = self.0.clone();
        v[i] = value;
        Self(v)
    }

    fn without(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v.remove(i);
        Self(v)
    }

    /// All multi-indices of length `n` with `|α| = degree`, in canonical order.
    pub fn all_of_degree(n: usize, degree: u32) -> Vec<MultiIndex> {
        fn rec(n: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if prefix.len() + 1 == n {
                prefix.push(left);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for a in (0..=left).rev() {
                prefix.push(a);
                rec(n, left - a, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            if degree == 0 {
                out.push(MultiIndex(Vec::new()));
            }
            return out;
        }
        rec(n, degree, &mut Vec::with_capacity(n), &mut out);
        out
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

/// Graded lexicographic: total degree first, then entries left to right.
impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Even polynomial in `n` boundary lengths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPoly {
    n: usize,
    terms: BTreeMap<MultiIndex, PiPoly>,
}

impl LPoly {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: PiPoly) -> Self {
        let mut p = Self::zero(n);
        p.add_term(MultiIndex::zeros(n), &c);
        p
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, PiPoly::one())
    }

    pub fn monomial(alpha: MultiIndex, c: PiPoly) -> Self {
        let mut p = Self::zero(alpha.len());
        p.add_term(alpha, &c);
        p
    }

    pub fn from_terms(
        n: usize,
        terms: impl IntoIterator<Item = (MultiIndex, PiPoly)>,
    ) -> Result<Self> {
        let mut p = Self::zero(n);
        for (alpha, c) in terms {
            if alpha.len() != n {
                return Err(Error::ArityMismatch {
                    expected: n,
                    got: alpha.len(),
                });
            }
            p.add_term(alpha, &c);
        }
        Ok(p)
    }

    /// Number of boundary variables.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &PiPoly)> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> PiPoly {
        self.terms.get(alpha).cloned().unwrap_or_default()
    }

    pub fn coeff_ref(&self, alpha: &MultiIndex) -> Option<&PiPoly> {
        self.terms.get(alpha)
    }

    /// Largest `|α|` present, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(MultiIndex::degree)
    }

    pub fn add_term(&mut self, alpha: MultiIndex, c: &PiPoly) {
        debug_assert_eq!(alpha.len(), self.n);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&alpha) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.terms.remove(&alpha);
                }
            }
            None => {
                self.terms.insert(alpha, c.clone());
            }
        }
    }

    /// `self += c · other`
    pub fn add_scaled(&mut self, other: &LPoly, c: &PiPoly) {
        assert_eq!(self.n, other.n, "adding polynomials over different variables");
        for (alpha, v) in &other.terms {
            self.add_term(alpha.clone(), &(v * c));
        }
    }

    pub fn add(&self, other: &LPoly) -> LPoly {
        let mut out = self.clone();
        out.add_scaled(other, &PiPoly::one());
        out
    }

    pub fn scale(&self, c: &PiPoly) -> LPoly {
        let mut out = LPoly::zero(self.n);
        out.add_scaled(self, c);
        out
    }

    pub fn scale_rat(&self, c: &Rat) -> LPoly {
        if c.is_zero() {
            return LPoly::zero(self.n);
        }
        LPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(a, v)| (a.clone(), v.scale(c)))
                .collect(),
        }
    }

    /// Product of `a` and `b` over disjoint variable sets. Variable `i` of
    /// `a` becomes variable `a_vars[i]` of the result (likewise for `b`);
    /// result variables named by neither side have exponent zero.
    pub fn mul_disjoint(
        a: &LPoly,
        a_vars: &[usize],
        b: &LPoly,
        b_vars: &[usize],
        n_out: usize,
    ) -> Result<LPoly> {
        if a_vars.len() != a.n {
            return Err(Error::ArityMismatch {
                expected: a.n,
                got: a_vars.len(),
            });
        }
        if b_vars.len() != b.n {
            return Err(Error::ArityMismatch {
                expected: b.n,
                got: b_vars.len(),
            });
        }
        let mut seen = vec![false; n_out];
        for &v in a_vars.iter().chain(b_vars) {
            if v >= n_out {
                return Err(Error::ArityMismatch {
                    expected: n_out,
                    got: v + 1,
                });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::VariableOverlap);
            }
        }
        let mut out = LPoly::zero(n_out);
        for (alpha, x) in &a.terms {
            let mut base = vec![0; n_out];
            for (i, &v) in a_vars.iter().enumerate() {
                base[v] = alpha.0[i];
            }
            for (beta, y) in &b.terms {
                let mut e = base.clone();
                for (i, &v) in b_vars.iter().enumerate() {
                    e[v] = beta.0[i];
                }
                out.add_term(MultiIndex(e), &(x * y));
            }
        }
        Ok(out)
    }

    /// Relabels into `n_out` variables, variable `i` going to `positions[i]`.
    pub fn embed(&self, positions: &[usize], n_out: usize) -> Result<LPoly> {
        LPoly::mul_disjoint(self, positions, &LPoly::one(0), &[], n_out)
    }

    /// Inverse of `q ↦ ∂/∂L_j (L_j q)`: divides the coefficient of
    /// `L_j^{2k}` by `2k + 1`.
    pub fn integrate_back(&self, j: usize) -> LPoly {
        LPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| {
                    let d = Rat::from_integer(BigInt::from(2 * a.0[j] + 1));
                    (a.clone(), c.scale(&d.recip()))
                })
                .collect(),
        }
    }

    /// Returns `Q` with `∂p/∂L_j = L_j · Q`.
    pub fn partial(&self, j: usize) -> LPoly {
        let mut out = LPoly::zero(self.n);
        for (a, c) in &self.terms {
            let k = a.0[j];
            if k == 0 {
                continue;
            }
            out.add_term(
                a.with(j, k - 1),
                &c.scale(&Rat::from_integer(BigInt::from(2 * k))),
            );
        }
        out
    }

    /// `∫ L_j · p dL_j` with zero constant of integration.
    pub fn antiderivative(&self, j: usize) -> LPoly {
        LPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| {
                    let k = a.0[j];
                    let d = Rat::new(BigInt::one(), BigInt::from(2 * k + 2));
                    (a.with(j, k + 1), c.scale(&d))
                })
                .collect(),
        }
    }

    /// Substitutes `L_j = 2πi`, i.e. `L_j² = -4π²`, dropping variable `j`.
    pub fn subst_2pi_i(&self, j: usize) -> LPoly {
        let mut out = LPoly::zero(self.n - 1);
        for (a, c) in &self.terms {
            let k = a.0[j];
            let mut factor = Rat::from_integer(BigInt::from(4).pow(k));
            if k % 2 == 1 {
                factor = -factor;
            }
            out.add_term(a.without(j), &c.scale(&factor).shift(k));
        }
        out
    }

    /// Relabels so that variable `i` becomes variable `sigma[i]`.
    pub fn permute(&self, sigma: &[usize]) -> LPoly {
        assert_eq!(sigma.len(), self.n, "permutation of the wrong size");
        let mut out = LPoly::zero(self.n);
        for (a, c) in &self.terms {
            let mut e = vec![0; self.n];
            for (i, &s) in sigma.iter().enumerate() {
                e[s] = a.0[i];
            }
            out.terms.insert(MultiIndex(e), c.clone());
        }
        out
    }

    /// Invariance under every relabelling, checked on adjacent transpositions.
    pub fn is_symmetric(&self) -> bool {
        (1..self.n).all(|i| {
            self.terms.iter().all(|(a, c)| {
                if a.0[i - 1] == a.0[i] {
                    return true;
                }
                let mut e = a.0.clone();
                e.swap(i - 1, i);
                self.terms.get(&MultiIndex(e)) == Some(c)
            })
        })
    }

    /// Value at the given squared lengths `L_i²`.
    pub fn eval_squares(&self, squares: &[Rat]) -> Result<PiPoly> {
        if squares.len() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                got: squares.len(),
            });
        }
        let mut out = PiPoly::zero();
        for (a, c) in &self.terms {
            let m = a
                .0
                .iter()
                .zip(squares)
                .fold(Rat::one(), |acc, (&e, s)| acc * num_traits::pow(s.clone(), e as usize));
            out += &c.scale(&m);
        }
        Ok(out)
    }

    /// Flat term list in canonical order: graded-lex on `α`, then π power.
    pub fn to_records(&self) -> Vec<TermRecord> {
        let mut out = Vec::new();
        for (a, c) in &self.terms {
            for (k, q) in c.terms() {
                out.push(TermRecord {
                    alpha: a.0.clone(),
                    pi_power: 2 * k,
                    coeff: q.clone(),
                });
            }
        }
        out
    }

    pub fn from_records(n: usize, records: &[TermRecord]) -> Result<LPoly> {
        let mut p = LPoly::zero(n);
        for r in records {
            if r.alpha.len() != n {
                return Err(Error::ArityMismatch {
                    expected: n,
                    got: r.alpha.len(),
                });
            }
            if r.pi_power % 2 != 0 {
                return Err(Error::Cache(format!("odd power of π in term {:?}", r.alpha)));
            }
            p.add_term(
                MultiIndex(r.alpha.clone()),
                &PiPoly::monomial(r.coeff.clone(), r.pi_power / 2),
            );
        }
        Ok(p)
    }

    /// Every coefficient has strictly positive rational parts.
    pub fn all_positive(&self) -> bool {
        self.terms
            .values()
            .all(|c| c.terms().all(|(_, q)| q.is_positive()))
    }
}

/// One `(α, π-power, rational)` entry of the JSON term list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub alpha: Vec<u32>,
    pub pi_power: u32,
    #[serde(with = "serde_rat")]
    pub coeff: Rat,
}

impl Serialize for LPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            n: usize,
            terms: Vec<TermRecord>,
        }
        Repr {
            n: self.n,
            terms: self.to_records(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            n: usize,
            terms: Vec<TermRecord>,
        }
        let r = Repr::deserialize(d)?;
        LPoly::from_records(r.n, &r.terms).map_err(serde::de::Error::custom)
    }
}

fn fmt_var(f: &mut fmt::Formatter<'_>, n: usize, i: usize, e: u32) -> fmt::Result {
    if n == 1 {
        write!(f, "L^{}", 2 * e)
    } else {
        write!(f, "L{}^{}", i + 1, 2 * e)
    }
}

/// Plain-text rendering such as `1/6·π^2 + 1/24·L^2`.
impl fmt::Display for LPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (a, c) in &self.terms {
            for (k, q) in c.terms() {
                let mut parts: Vec<String> = Vec::new();
                let is_unit = q.is_one() && (k > 0 || a.degree() > 0);
                if !first {
                    f.write_str(if q.is_negative() { " - " } else { " + " })?;
                } else if q.is_negative() {
                    f.write_str("-")?;
                }
                first = false;
                if !is_unit {
                    parts.push(q.abs().to_string());
                }
                if k > 0 {
                    parts.push(format!("π^{}", 2 * k));
                }
                f.write_str(&parts.join("·"))?;
                let mut need_dot = !parts.is_empty();
                for (i, &e) in a.0.iter().enumerate() {
                    if e > 0 {
                        if need_dot {
                            f.write_str("·")?;
                        }
                        fmt_var(f, self.n, i, e)?;
                        need_dot = true;
                    }
                }
            }
        }
        Ok(())
    }
}

impl LPoly {
    /// LaTeX rendering, coefficients as `\frac{p}{q}\pi^{2k}` in canonical order.
    pub fn to_latex(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (a, c) in &self.terms {
            for (k, q) in c.terms() {
                let neg = q.is_negative();
                if out.is_empty() {
                    if neg {
                        out.push('-');
                    }
                } else {
                    out.push_str(if neg { " - " } else { " + " });
                }
                let q = q.abs();
                let has_vars = k > 0 || a.degree() > 0;
                if q.denom().is_one() {
                    if !(q.is_one() && has_vars) {
                        out.push_str(&q.numer().to_string());
                    }
                } else {
                    out.push_str(&format!("\\frac{{{}}}{{{}}}", q.numer(), q.denom()));
                }
                match k {
                    0 => {}
                    1 => out.push_str("\\pi^{2}"),
                    _ => out.push_str(&format!("\\pi^{{{}}}", 2 * k)),
                }
                for (i, &e) in a.0.iter().enumerate() {
                    if e > 0 {
                        if self.n == 1 {
                            out.push_str(&format!("L^{{{}}}", 2 * e));
                        } else {
                            out.push_str(&format!("L_{{{}}}^{{{}}}", i + 1, 2 * e));
                        }
                    }
                }
            }
        }
        out
    }
}
