//! Intersection numbers read off volume coefficients, and the relations
//! they satisfy.
//!
//! The coefficient of `L^{2α}` in the geometric volume `V_{g,n}` is
//!
//! ```text
//! C_α = 2^{δ} / (2^{|α|} α! m!) · ∫ ψ^α ω^m,   m = 3g − 3 + n − |α|,
//! ```
//!
//! with `δ = 1` exactly at `(1,1)` and `ω = 2π² κ₁`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{factorial, int, odd_double_factorial, rat_to_f64, PiPoly, Rat};
use crate::error::{Error, Result};
use crate::poly::{LPoly, MultiIndex};
use crate::recursion::{true_volume, Signature, VolumeTable};

/// `⟨κ₁^m τ_{α₁} ⋯ τ_{αₙ}⟩_g` in both normalizations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionValue {
    pub g: u32,
    pub alpha: MultiIndex,
    pub kappa_power: u32,
    /// `∫ ψ^α κ₁^m`
    pub kappa: Rat,
    /// `∫ ψ^α ω^m = (2π²)^m · kappa`
    pub omega: PiPoly,
}

fn two_pow(k: u32) -> Rat {
    Rat::from_integer(BigInt::one() << k)
}

fn delta(g: u32, n: usize) -> bool {
    g == 1 && n == 1
}

/// Coefficient of `L^{2α}` in the geometric volume `V_{g,n}`, `n = α.len()`.
/// Zero when `|α|` exceeds the dimension.
pub fn c_alpha(table: &VolumeTable, g: u32, alpha: &MultiIndex) -> Result<PiPoly> {
    let s = Signature::new(g, alpha.len() as u32)?;
    if alpha.is_empty() {
        return Err(Error::NoBoundary(s));
    }
    if alpha.degree() > s.dim() {
        return Ok(PiPoly::zero());
    }
    let c = table.require(s)?.coeff(alpha);
    Ok(if delta(g, alpha.len()) { c.scale(&int(2)) } else { c })
}

/// The intersection number whose coefficient is `C_α`; the κ₁ power is
/// `3g − 3 + n − |α|`.
pub fn tau_kappa(table: &VolumeTable, g: u32, alpha: &MultiIndex) -> Result<IntersectionValue> {
    let n = alpha.len();
    let s = Signature::new(g, n as u32)?;
    let d = s.dim();
    if alpha.degree() > d {
        return Ok(IntersectionValue {
            g,
            alpha: alpha.clone(),
            kappa_power: 0,
            kappa: Rat::zero(),
            omega: PiPoly::zero(),
        });
    }
    let m = d - alpha.degree();
    let c = c_alpha(table, g, alpha)?;
    let mut scale = two_pow(alpha.degree())
        * Rat::from_integer(alpha.factorial() * factorial(m));
    if delta(g, n) {
        scale /= int(2);
    }
    let omega = c.scale(&scale);
    let kappa = match omega.as_monomial() {
        Some((k, q)) if k == m => q / two_pow(m),
        None if omega.is_zero() => Rat::zero(),
        _ => {
            return Err(Error::Invariant {
                sig: s,
                what: format!("ω-value {omega} is not a rational multiple of π^{}", 2 * m),
            })
        }
    };
    Ok(IntersectionValue { g, alpha: alpha.clone(), kappa_power: m, kappa, omega })
}

/// `(α)_g = C_α · 2^{−δ} · α! · 2^{|α|}`, defined for `|α| = 3g − 3 + n`.
pub fn paren_symbol(table: &VolumeTable, g: u32, alpha: &MultiIndex) -> Result<Rat> {
    let c = c_alpha(table, g, alpha)?;
    let mut v = c.as_rational().ok_or_else(|| Error::Invariant {
        sig: Signature { g, n: alpha.len() as u32 },
        what: format!("top coefficient {c} is not rational"),
    })?;
    if delta(g, alpha.len()) {
        v /= int(2);
    }
    Ok(v * Rat::from_integer(alpha.factorial()) * two_pow(alpha.degree()))
}

/// Genus-zero closed form: the multinomial `(n−3)! / ∏ α_i!` when
/// `|α| = n − 3`, else zero.
pub fn genus0_tau(alpha: &[u32]) -> Rat {
    let n = alpha.len() as u32;
    if n < 3 || alpha.iter().sum::<u32>() != n - 3 {
        return Rat::zero();
    }
    let den = alpha.iter().fold(BigInt::one(), |acc, &a| acc * factorial(a));
    Rat::new(factorial(n - 3), den)
}

/// Pure ψ intersections `⟨τ_{α₁} ⋯ τ_{αₙ}⟩_g` for every signature in a
/// table, keyed by the sorted exponent list.
#[derive(Clone, Debug)]
pub struct TauTable {
    values: HashMap<(u32, Vec<u32>), Rat>,
    signatures: Vec<Signature>,
}

impl TauTable {
    pub fn from_volumes(table: &VolumeTable) -> Result<Self> {
        let mut values = HashMap::new();
        let mut signatures = Vec::new();
        for (s, _) in table.iter() {
            signatures.push(s);
            for alpha in MultiIndex::all_of_degree(s.n as usize, s.dim()) {
                let mut key = alpha.entries().to_vec();
                key.sort_unstable();
                if values.contains_key(&(s.g, key.clone())) {
                    continue;
                }
                let v = tau_kappa(table, s.g, &alpha)?;
                values.insert((s.g, key), v.kappa);
            }
        }
        Ok(Self { values, signatures })
    }

    pub fn signatures(&self) -> &[Signature] {
        &self.signatures
    }

    /// Zero for unstable signatures and degree mismatches; an error when a
    /// stable, nonzero symbol lies outside the table.
    pub fn get(&self, g: u32, alpha: &[u32]) -> Result<Rat> {
        let s = Signature { g, n: alpha.len() as u32 };
        if alpha.is_empty() || !s.is_stable() || alpha.iter().sum::<u32>() != s.dim() {
            return Ok(Rat::zero());
        }
        let mut key = alpha.to_vec();
        key.sort_unstable();
        self.values
            .get(&(g, key))
            .cloned()
            .ok_or(Error::MissingVolume(s))
    }
}

/// One verified instance of a relation.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub relation: &'static str,
    pub g: u32,
    pub n: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<u32>>,
    pub pass: bool,
    pub lhs: String,
    pub rhs: String,
}

impl CheckRecord {
    fn exact<T: PartialEq + ToString>(
        relation: &'static str,
        g: u32,
        n: u32,
        alpha: Option<Vec<u32>>,
        lhs: T,
        rhs: T,
    ) -> Self {
        CheckRecord {
            relation,
            g,
            n,
            alpha,
            pass: lhs == rhs,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        }
    }
}

fn prepend(first: u32, rest: &[u32]) -> Vec<u32> {
    let mut v = Vec::with_capacity(rest.len() + 1);
    v.push(first);
    v.extend_from_slice(rest);
    v
}

/// String equation `⟨τ₀ τ_α⟩_g = Σ_{α_i ≠ 0} ⟨τ_{α − e_i}⟩_g`, for
/// `|α| = 3g − 2 + n`, `n = α.len() ≥ 1`.
pub fn check_string(taus: &TauTable, g: u32, alpha: &[u32]) -> Result<CheckRecord> {
    let lhs = taus.get(g, &prepend(0, alpha))?;
    let mut rhs = Rat::zero();
    for i in 0..alpha.len() {
        if alpha[i] > 0 {
            let mut a = alpha.to_vec();
            a[i] -= 1;
            rhs += taus.get(g, &a)?;
        }
    }
    Ok(CheckRecord::exact("string", g, alpha.len() as u32 + 1, Some(alpha.to_vec()), lhs, rhs))
}

/// Dilaton equation `⟨τ₁ τ_α⟩_g = (2g − 2 + n) ⟨τ_α⟩_g`, for
/// `|α| = 3g − 3 + n`, `n = α.len() ≥ 1`.
pub fn check_dilaton(taus: &TauTable, g: u32, alpha: &[u32]) -> Result<CheckRecord> {
    let lhs = taus.get(g, &prepend(1, alpha))?;
    let factor = int(2 * g as i64 - 2 + alpha.len() as i64);
    let rhs = factor * taus.get(g, alpha)?;
    Ok(CheckRecord::exact("dilaton", g, alpha.len() as u32 + 1, Some(alpha.to_vec()), lhs, rhs))
}

fn dfact(k: u32) -> Rat {
    Rat::from_integer(odd_double_factorial(k))
}

/// The leading-coefficient form of the recursion (the DVV relation), with
/// the first label distinguished:
///
/// ```text
/// (2k₁+1)!! ⟨τ_k⟩_g
///   = ½ Σ_{i+j=k₁−2} (2i+1)!!(2j+1)!! Σ_{g₁+g₂=g, I ⊔ J} ⟨τ_i τ_{k_I}⟩_{g₁} ⟨τ_j τ_{k_J}⟩_{g₂}
///   + ½ Σ_{i+j=k₁−2} (2i+1)!!(2j+1)!! ⟨τ_i τ_j τ_{k₂} ⋯⟩_{g−1}
///   + Σ_{j≥2} (2k₁+2k_j−1)!!/(2k_j−1)!! ⟨τ_{k₂} ⋯ τ_{k₁+k_j−1} ⋯⟩_g
/// ```
///
/// The base signatures `(0,3)` and `(1,1)` are initial data and do not
/// satisfy it.
pub fn check_dvv(taus: &TauTable, g: u32, k: &[u32]) -> Result<CheckRecord> {
    let n = k.len();
    let k1 = k[0];
    let rest = &k[1..];
    let lhs = dfact(k1 + 1) * taus.get(g, k)?;
    let half = Rat::new(1.into(), 2.into());

    let mut split = Rat::zero();
    let mut con = Rat::zero();
    if k1 >= 2 {
        for i in 0..=k1 - 2 {
            let j = k1 - 2 - i;
            let w = dfact(i + 1) * dfact(j + 1);
            if g >= 1 {
                let mut a = vec![i, j];
                a.extend_from_slice(rest);
                con += &w * taus.get(g - 1, &a)?;
            }
            let mut inner = Rat::zero();
            for mask in 0u64..(1u64 << rest.len()) {
                let mut left = vec![i];
                let mut right = vec![j];
                for (b, &kb) in rest.iter().enumerate() {
                    if mask & (1 << b) != 0 {
                        left.push(kb);
                    } else {
                        right.push(kb);
                    }
                }
                for g1 in 0..=g {
                    let l = taus.get(g1, &left)?;
                    if l.is_zero() {
                        continue;
                    }
                    inner += l * taus.get(g - g1, &right)?;
                }
            }
            split += w * inner;
        }
    }

    let mut shift = Rat::zero();
    for j in 0..rest.len() {
        let kj = rest[j];
        if k1 + kj == 0 {
            continue;
        }
        let mut a = rest.to_vec();
        a[j] = k1 + kj - 1;
        shift += dfact(k1 + kj) / dfact(kj) * taus.get(g, &a)?;
    }

    let rhs = &half * split + &half * con + shift;
    Ok(CheckRecord::exact("dvv", g, n as u32, Some(k.to_vec()), lhs, rhs))
}

/// Do's string equation `V_{g,n+1}(L, 2πi) = Σ_k ∫ L_k V_{g,n}(L) dL_k`,
/// on the volumes as the recursion uses them.
pub fn check_do_string(table: &VolumeTable, g: u32, n: u32) -> Result<CheckRecord> {
    let lower = table.require(Signature::new(g, n)?)?;
    let upper = table.require(Signature::new(g, n + 1)?)?;
    let lhs = upper.subst_2pi_i(n as usize);
    let rhs = (0..n as usize).fold(LPoly::zero(n as usize), |acc, k| acc.add(&lower.antiderivative(k)));
    Ok(do_record("do-string", g, n, lhs, rhs))
}

/// Do's dilaton equation `∂V_{g,n+1}/∂L_{n+1}(L, 2πi) = 2πi (2g−2+n) V_{g,n}(L)`.
/// With `∂V/∂L_{n+1} = L_{n+1} Q`, both sides carry the factor `2πi`; the
/// check compares `Q(L, L_{n+1}² = −4π²)` with `(2g−2+n) V_{g,n}`.
pub fn check_do_dilaton(table: &VolumeTable, g: u32, n: u32) -> Result<CheckRecord> {
    let lower = table.require(Signature::new(g, n)?)?;
    let upper = table.require(Signature::new(g, n + 1)?)?;
    let lhs = upper.partial(n as usize).subst_2pi_i(n as usize);
    let rhs = lower.scale_rat(&int(2 * g as i64 - 2 + n as i64));
    Ok(do_record("do-dilaton", g, n + 1, lhs, rhs))
}

fn do_record(relation: &'static str, g: u32, n: u32, lhs: LPoly, rhs: LPoly) -> CheckRecord {
    let pass = lhs == rhs;
    CheckRecord {
        relation,
        g,
        n,
        alpha: None,
        pass,
        lhs: serde_json::to_string(&lhs.to_records()).unwrap_or_default(),
        rhs: serde_json::to_string(&rhs.to_records()).unwrap_or_default(),
    }
}

/// `V_{g,0}` from Do's dilaton equation at `n = 0`: `Q(−4π²) / (2g − 2)`
/// where `∂V_{g,1}/∂L = L · Q(L²)`.
pub fn compact_volume(table: &mut VolumeTable, g: u32) -> Result<PiPoly> {
    if g < 2 {
        return Err(Error::CompactGenus(g));
    }
    let v = table.ensure(Signature::new(g, 1)?)?;
    let q = v.partial(0).subst_2pi_i(0);
    let value = q.coeff(&MultiIndex::zeros(0));
    Ok(value.scale(&Rat::new(1.into(), BigInt::from(2 * g - 2))))
}

/// Diagnostic ratio of `V_{g,n}(0)` to `(4π²)^{2g+n−3} (2g+n−3)! / √(gπ)`.
pub fn zograf_ratio(table: &VolumeTable, g: u32, n: u32) -> Result<f64> {
    let s = Signature::new(g, n)?;
    let v = true_volume(s, table)?;
    let at_zero = v.coeff(&MultiIndex::zeros(n as usize)).to_f64()?;
    let e = 2 * g + n - 3;
    let pi = std::f64::consts::PI;
    let fact = rat_to_f64(&Rat::from_integer(factorial(e)))?;
    let denom = (4.0 * pi * pi).powi(e as i32) * fact / (g as f64 * pi).sqrt();
    Ok(at_zero / denom)
}

fn all_indices(n: usize, degree: u32) -> Vec<Vec<u32>> {
    MultiIndex::all_of_degree(n, degree)
        .into_iter()
        .map(MultiIndex::into_vec)
        .collect()
}

/// Pairs `(g, n)` with `(g, n)` and `(g, n+1)` both in the table, `n ≥ 1`.
fn adjacent_pairs(sigs: &[Signature]) -> Vec<(u32, u32)> {
    let mut out: Vec<(u32, u32)> = sigs
        .iter()
        .filter(|s| sigs.contains(&Signature { g: s.g, n: s.n + 1 }))
        .map(|s| (s.g, s.n))
        .collect();
    out.sort_by_key(|&(g, n)| (3 * g + n, g));
    out
}

pub fn string_suite(taus: &TauTable) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for (g, n) in adjacent_pairs(taus.signatures()) {
        for alpha in all_indices(n as usize, 3 * g + n - 2) {
            out.push(check_string(taus, g, &alpha)?);
        }
    }
    Ok(out)
}

pub fn dilaton_suite(taus: &TauTable) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for (g, n) in adjacent_pairs(taus.signatures()) {
        for alpha in all_indices(n as usize, 3 * g + n - 3) {
            out.push(check_dilaton(taus, g, &alpha)?);
        }
    }
    Ok(out)
}

/// Every ordered exponent list of every non-base signature in the table.
pub fn dvv_suite(taus: &TauTable) -> Result<Vec<CheckRecord>> {
    let mut sigs: Vec<Signature> = taus.signatures().iter().copied().filter(|s| !s.is_base()).collect();
    sigs.sort_by_key(|s| (s.dim(), s.g, s.n));
    let mut out = Vec::new();
    for s in sigs {
        for k in all_indices(s.n as usize, s.dim()) {
            out.push(check_dvv(taus, s.g, &k)?);
        }
    }
    Ok(out)
}

pub fn do_string_suite(table: &VolumeTable) -> Result<Vec<CheckRecord>> {
    let sigs: Vec<Signature> = table.signatures().collect();
    adjacent_pairs(&sigs)
        .into_iter()
        .map(|(g, n)| check_do_string(table, g, n))
        .collect()
}

pub fn do_dilaton_suite(table: &VolumeTable) -> Result<Vec<CheckRecord>> {
    let sigs: Vec<Signature> = table.signatures().collect();
    adjacent_pairs(&sigs)
        .into_iter()
        .map(|(g, n)| check_do_dilaton(table, g, n))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn table(max_dim: u32) -> VolumeTable {
        let mut t = VolumeTable::build(max_dim, 1).unwrap();
        t.ensure(Signature { g: 2, n: 1 }).unwrap();
        t
    }

    fn idx(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn coefficients() {
        let t = table(3);
        assert_eq!(c_alpha(&t, 1, &idx(&[1])).unwrap(), PiPoly::constant(rat(1, 24)));
        assert_eq!(c_alpha(&t, 0, &idx(&[0, 0, 0, 0])).unwrap(), PiPoly::monomial(int(2), 1));
        assert_eq!(c_alpha(&t, 2, &idx(&[4])).unwrap(), PiPoly::constant(rat(1, 442_368)));
        assert!(c_alpha(&t, 1, &idx(&[2])).unwrap().is_zero());
    }

    #[test]
    fn tau_values() {
        let t = table(3);
        assert_eq!(tau_kappa(&t, 1, &idx(&[1])).unwrap().kappa, rat(1, 24));
        assert_eq!(tau_kappa(&t, 0, &idx(&[0, 0, 0])).unwrap().kappa, int(1));
        assert_eq!(tau_kappa(&t, 2, &idx(&[4])).unwrap().kappa, rat(1, 1152));
        // ⟨κ₁⟩ on M_{1,1}: the constant π²/6 of the geometric volume, halved by 2^δ.
        let k = tau_kappa(&t, 1, &idx(&[0])).unwrap();
        assert_eq!(k.kappa_power, 1);
        assert_eq!(k.omega, PiPoly::monomial(rat(1, 12), 1));
        assert_eq!(k.kappa, rat(1, 24));
        // ⟨κ₁⟩ on M_{0,4}
        let k = tau_kappa(&t, 0, &idx(&[0, 0, 0, 0])).unwrap();
        assert_eq!(k.kappa, int(1));
    }

    #[test]
    fn normalizations_agree() {
        let t = table(4);
        for (s, _) in t.iter() {
            for a in MultiIndex::all_of_degree(s.n as usize, s.dim()) {
                assert_eq!(paren_symbol(&t, s.g, &a).unwrap(), tau_kappa(&t, s.g, &a).unwrap().kappa);
            }
            for m in 0..=s.dim() {
                for a in MultiIndex::all_of_degree(s.n as usize, s.dim() - m) {
                    let v = tau_kappa(&t, s.g, &a).unwrap();
                    assert!(v.kappa > Rat::zero());
                    let scale = PiPoly::monomial(Rat::from_integer(BigInt::one() << m), m);
                    assert_eq!(v.omega, &scale * &PiPoly::constant(v.kappa.clone()));
                }
            }
        }
    }

    #[test]
    fn genus_zero_closed_form() {
        assert_eq!(genus0_tau(&[0, 0, 0]), int(1));
        assert_eq!(genus0_tau(&[1, 0, 0, 0]), int(1));
        assert_eq!(genus0_tau(&[2, 0, 0, 0, 0]), int(1));
        assert_eq!(genus0_tau(&[1, 1, 0, 0, 0]), int(2));
        assert_eq!(genus0_tau(&[1, 0, 0]), int(0));
        assert_eq!(genus0_tau(&[0, 0]), int(0));
    }

    #[test]
    fn string_dilaton_examples() {
        let t = table(3);
        let taus = TauTable::from_volumes(&t).unwrap();
        let r = check_dilaton(&taus, 1, &[1]).unwrap();
        assert!(r.pass);
        assert_eq!(r.rhs, "1/24");
        assert!(check_dilaton(&taus, 0, &[0, 0, 0]).unwrap().pass);
        assert!(check_string(&taus, 0, &[1, 0, 0]).unwrap().pass);
        assert!(check_string(&taus, 1, &[2]).unwrap().pass);
    }

    #[test]
    fn dvv_examples() {
        let t = table(4);
        let taus = TauTable::from_volumes(&t).unwrap();
        assert!(check_dvv(&taus, 2, &[4]).unwrap().pass);
        assert!(check_dvv(&taus, 0, &[2, 0, 0, 0, 0]).unwrap().pass);
        assert!(check_dvv(&taus, 1, &[1, 1]).unwrap().pass);
        assert!(check_dvv(&taus, 1, &[2, 0]).unwrap().pass);
        assert!(check_dvv(&taus, 1, &[0, 2]).unwrap().pass);
        // initial data
        assert!(!check_dvv(&taus, 0, &[0, 0, 0]).unwrap().pass);
        assert!(!check_dvv(&taus, 1, &[1]).unwrap().pass);
    }

    #[test]
    fn do_examples() {
        let t = table(3);
        assert!(check_do_string(&t, 0, 3).unwrap().pass);
        assert!(check_do_dilaton(&t, 0, 3).unwrap().pass);
        assert!(check_do_dilaton(&t, 1, 1).unwrap().pass);
        assert!(check_do_string(&t, 1, 1).unwrap().pass);
    }

    #[test]
    fn do_relations_need_the_recursion_convention_at_one_one() {
        let t = table(2);
        let v12 = t.get(Signature { g: 1, n: 2 }).unwrap();
        let doubled = true_volume(Signature { g: 1, n: 1 }, &t).unwrap();
        assert_ne!(v12.partial(1).subst_2pi_i(1), doubled);
    }

    #[test]
    fn compact_volumes() {
        let mut t = VolumeTable::new();
        assert_eq!(compact_volume(&mut t, 2).unwrap(), PiPoly::monomial(rat(43, 2160), 3));
        assert_eq!(compact_volume(&mut t, 3).unwrap(), PiPoly::monomial(rat(176_557, 1_209_600), 6));
        assert!(matches!(compact_volume(&mut t, 1), Err(Error::CompactGenus(1))));
    }

    #[test]
    fn zograf_is_positive() {
        let t = table(4);
        for g in 1..=2 {
            let r = zograf_ratio(&t, g, 1).unwrap();
            assert!(r.is_finite() && r > 0.0);
        }
    }

    #[test]
    fn missing_symbols_are_errors() {
        let t = table(2);
        let taus = TauTable::from_volumes(&t).unwrap();
        assert!(taus.get(0, &[4, 0, 0, 0, 0, 0, 0]).is_err());
        assert_eq!(taus.get(0, &[0, 0]).unwrap(), Rat::zero());
        assert_eq!(taus.get(0, &[1, 0, 0]).unwrap(), Rat::zero());
    }
}
