//! The volume recursion over a memoized table of lower volumes.
//!
//! For a stable `(g, n)` other than `(0,3)` and `(1,1)`,
//!
//! ```text
//! ∂/∂L₁ (L₁ V_{g,n}(L)) = A^con + A^dcon + B
//! ```
//!
//! where each term is a finite combination of kernel moments and lower
//! volumes; [`integrate_back`](LPoly::integrate_back) then recovers `V_{g,n}`.
//!
//! The table stores the *internal* convention, in which `V_{1,1}` is half
//! the geometric volume to account for the elliptic involution.
//! [`true_volume`] undoes that for reporting.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{int, rat, PiPoly, Rat};
use crate::error::{Error, Result};
use crate::kernels::{kernel_double, shifted_kernel, KernelPoly};
use crate::poly::{LPoly, MultiIndex};

/// Topological type `(g, n)`: genus and number of boundaries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub g: u32,
    pub n: u32,
}

impl Signature {
    /// A stable signature, `2g - 2 + n > 0`.
    pub fn new(g: u32, n: u32) -> Result<Self> {
        let s = Signature { g, n };
        if s.is_stable() {
            Ok(s)
        } else {
            Err(Error::Unstable { g, n })
        }
    }

    pub const fn is_stable(&self) -> bool {
        2 * self.g + self.n > 2
    }

    /// Complex dimension `3g - 3 + n`; also the degree of `V_{g,n}` in the `L²`.
    pub const fn dim(&self) -> u32 {
        3 * self.g + self.n - 3
    }

    pub const fn is_base(&self) -> bool {
        matches!((self.g, self.n), (0, 3) | (1, 1))
    }

    /// `"g,n"`, the key used in serialized tables.
    pub fn key(&self) -> String {
        format!("{},{}", self.g, self.n)
    }

    pub fn parse_key(s: &str) -> Result<Self> {
        let bad = || Error::Cache(format!("bad signature key {s:?}"));
        let (g, n) = s.split_once(',').ok_or_else(bad)?;
        let g = g.trim().parse().map_err(|_| bad())?;
        let n = n.trim().parse().map_err(|_| bad())?;
        Signature::new(g, n)
    }

    /// Every stable signature with `n >= 1` and `3g - 3 + n <= max_dim`.
    pub fn all_up_to(max_dim: u32) -> Vec<Signature> {
        let mut out = Vec::new();
        for g in 0..=(max_dim + 3) / 3 {
            for n in 1..=(max_dim + 3).saturating_sub(3 * g) {
                let s = Signature { g, n };
                if s.is_stable() && s.dim() <= max_dim {
                    out.push(s);
                }
            }
        }
        out.sort_by_key(|s| (s.dim(), s.g, s.n));
        out
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.g, self.n)
    }
}

/// The base cases, in the internal convention: `V_{0,3} = 1` and
/// `V_{1,1} = π²/12 + L²/48`.
pub fn base_volume(s: Signature) -> Result<LPoly> {
    match (s.g, s.n) {
        (0, 3) => Ok(LPoly::one(3)),
        (1, 1) => LPoly::from_terms(
            1,
            [
                (MultiIndex::new(vec![0]), PiPoly::monomial(rat(1, 12), 1)),
                (MultiIndex::new(vec![1]), PiPoly::constant(rat(1, 48))),
            ],
        ),
        _ => Err(Error::NotBaseCase(s)),
    }
}

/// One ordered way to cut off the pants around `L₁` into two pieces.
///
/// Boundary labels are variable indices: `0` is `L₁`, and `I₁ ⊔ I₂ = {1, …, n−1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Splitting {
    pub g1: u32,
    pub i1: Vec<usize>,
    pub g2: u32,
    pub i2: Vec<usize>,
}

impl Splitting {
    pub fn first(&self) -> Signature {
        Signature { g: self.g1, n: self.i1.len() as u32 + 1 }
    }

    pub fn second(&self) -> Signature {
        Signature { g: self.g2, n: self.i2.len() as u32 + 1 }
    }
}

/// Ordered splittings `g₁ + g₂ = g`, `I₁ ⊔ I₂ = {2, …, n}` with both pieces
/// stable once the new boundary is counted.
pub fn stable_splittings(g: u32, n: u32) -> Vec<Splitting> {
    let others = n.saturating_sub(1) as usize;
    let mut out = Vec::new();
    for g1 in 0..=g {
        let g2 = g - g1;
        for mask in 0u64..(1u64 << others) {
            let (i1, i2): (Vec<usize>, Vec<usize>) =
                (1..=others).partition(|&v| mask & (1 << (v - 1)) != 0);
            let s = Splitting { g1, i1, g2, i2 };
            if s.first().is_stable() && s.second().is_stable() {
                out.push(s);
            }
        }
    }
    out
}

/// Lower volumes the recursion reads when computing `s`.
pub fn dependencies(s: Signature) -> Vec<Signature> {
    if s.is_base() {
        return Vec::new();
    }
    let mut deps = BTreeSet::new();
    if s.g >= 1 {
        let c = Signature { g: s.g - 1, n: s.n + 1 };
        if c.is_stable() {
            deps.insert(c);
        }
    }
    for sp in stable_splittings(s.g, s.n) {
        deps.insert(sp.first());
        deps.insert(sp.second());
    }
    if s.n >= 2 {
        let b = Signature { g: s.g, n: s.n - 1 };
        if b.is_stable() {
            deps.insert(b);
        }
    }
    deps.into_iter().collect()
}

/// Memoized volumes in the internal convention, keyed by signature.
#[derive(Clone, Debug, Default)]
pub struct VolumeTable {
    entries: BTreeMap<Signature, Arc<LPoly>>,
}

struct DoubleKernels(HashMap<(u32, u32), KernelPoly>);

impl DoubleKernels {
    fn new() -> Self {
        Self(HashMap::new())
    }

    fn get(&mut self, a: u32, b: u32) -> &KernelPoly {
        self.0.entry((a, b)).or_insert_with(|| kernel_double(a, b))
    }
}

impl VolumeTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds every stable `(g, n)`, `n >= 1`, with `3g - 3 + n <= max_dim`.
    pub fn build(max_dim: u32, threads: usize) -> Result<Self> {
        let mut table = Self::new();
        table.ensure_all(&Signature::all_up_to(max_dim), threads)?;
        Ok(table)
    }

    pub fn get(&self, s: Signature) -> Option<&LPoly> {
        self.entries.get(&s).map(Arc::as_ref)
    }

    pub fn require(&self, s: Signature) -> Result<&LPoly> {
        self.get(s).ok_or(Error::MissingVolume(s))
    }

    pub fn contains(&self, s: Signature) -> bool {
        self.entries.contains_key(&s)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn signatures(&self) -> impl Iterator<Item = Signature> + '_ {
        self.entries.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Signature, &LPoly)> + '_ {
        self.entries.iter().map(|(s, v)| (*s, v.as_ref()))
    }

    /// Inserts a volume after checking the structural invariants.
    pub fn insert(&mut self, s: Signature, v: LPoly) -> Result<()> {
        check_invariants(s, &v)?;
        self.entries.insert(s, Arc::new(v));
        Ok(())
    }

    /// Computes `s` and everything it depends on, depth first.
    pub fn ensure(&mut self, s: Signature) -> Result<&LPoly> {
        if s.n == 0 {
            return Err(Error::NoBoundary(s));
        }
        Signature::new(s.g, s.n)?;
        if !self.contains(s) {
            for d in dependencies(s) {
                self.ensure(d)?;
            }
            let v = volume(s, self)?;
            self.entries.insert(s, Arc::new(v));
        }
        self.require(s)
    }

    /// Computes the dependency closure of `targets` in waves of equal
    /// dimension. Cells within a wave are independent and are computed on
    /// `threads` workers; the result does not depend on `threads`.
    pub fn ensure_all(&mut self, targets: &[Signature], threads: usize) -> Result<()> {
        let mut needed = BTreeSet::new();
        let mut stack: Vec<Signature> = Vec::new();
        for &t in targets {
            if t.n == 0 {
                return Err(Error::NoBoundary(t));
            }
            stack.push(Signature::new(t.g, t.n)?);
        }
        while let Some(s) = stack.pop() {
            if self.contains(s) || !needed.insert(s) {
                continue;
            }
            stack.extend(dependencies(s));
        }
        let mut waves: BTreeMap<u32, Vec<Signature>> = BTreeMap::new();
        for s in needed {
            waves.entry(s.dim()).or_default().push(s);
        }
        let pool = if threads > 1 {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build()
                    .map_err(|e| Error::Io(std::io::Error::other(e)))?,
            )
        } else {
            None
        };
        for wave in waves.into_values() {
            let computed: Vec<Result<(Signature, LPoly)>> = match &pool {
                Some(pool) => pool.install(|| {
                    wave.par_iter()
                        .map(|&s| volume(s, self).map(|v| (s, v)))
                        .collect()
                }),
                None => wave.iter().map(|&s| volume(s, self).map(|v| (s, v))).collect(),
            };
            for r in computed {
                let (s, v) = r?;
                self.entries.insert(s, Arc::new(v));
            }
        }
        Ok(())
    }
}

/// `A^con`: glue `x` and `y` of `V_{g−1,n+1}(x, y, L̂)` against `H(x+y, L₁)`.
pub fn a_con_term(s: Signature, table: &VolumeTable) -> Result<LPoly> {
    let n = s.n as usize;
    let mut out = LPoly::zero(n);
    if s.g == 0 {
        return Ok(out);
    }
    let lower = Signature { g: s.g - 1, n: s.n + 1 };
    if !lower.is_stable() {
        return Ok(out);
    }
    let v = table.require(lower)?;
    let half = rat(1, 2);
    let mut kernels = DoubleKernels::new();
    for (alpha, c) in v.terms() {
        let e = alpha.entries();
        let k = kernels.get(e[0], e[1]);
        let c = c.scale(&half);
        for (m, g) in k.coeffs().iter().enumerate() {
            let mut idx = Vec::with_capacity(n);
            idx.push(m as u32);
            idx.extend_from_slice(&e[2..]);
            out.add_term(MultiIndex::new(idx), &(&c * g));
        }
    }
    Ok(out)
}

/// `A^dcon`: sum over ordered [`stable_splittings`] with the overall ½.
pub fn a_dcon_term(s: Signature, table: &VolumeTable) -> Result<LPoly> {
    let n = s.n as usize;
    let mut out = LPoly::zero(n);
    let half = rat(1, 2);
    let mut kernels = DoubleKernels::new();
    for sp in stable_splittings(s.g, s.n) {
        let v1 = table.require(sp.first())?;
        let v2 = table.require(sp.second())?;
        for (alpha, c1) in v1.terms() {
            let a = alpha.entries();
            let c1 = c1.scale(&half);
            for (beta, c2) in v2.terms() {
                let b = beta.entries();
                let coeff = &c1 * c2;
                let mut idx = vec![0u32; n];
                for (k, &var) in sp.i1.iter().enumerate() {
                    idx[var] = a[k + 1];
                }
                for (k, &var) in sp.i2.iter().enumerate() {
                    idx[var] = b[k + 1];
                }
                for (m, g) in kernels.get(a[0], b[0]).coeffs().iter().enumerate() {
                    idx[0] = m as u32;
                    out.add_term(MultiIndex::new(idx.clone()), &(&coeff * g));
                }
            }
        }
    }
    Ok(out)
}

/// `B`: for each `j ≥ 2`, `V_{g,n−1}(x, L̂_j)` against
/// `½(H(x, L₁+L_j) + H(x, L₁−L_j))`.
pub fn b_term(s: Signature, table: &VolumeTable) -> Result<LPoly> {
    let n = s.n as usize;
    let mut out = LPoly::zero(n);
    if n < 2 {
        return Ok(out);
    }
    let lower = Signature { g: s.g, n: s.n - 1 };
    if !lower.is_stable() {
        return Ok(out);
    }
    let v = table.require(lower)?;
    for j in 1..n {
        // Variables of the lower volume after x: every label except 0 and j.
        let rest: Vec<usize> = (1..n).filter(|&v| v != j).collect();
        for (alpha, c) in v.terms() {
            let a = alpha.entries();
            let mut idx = vec![0u32; n];
            for (k, &var) in rest.iter().enumerate() {
                idx[var] = a[k + 1];
            }
            for (beta, w) in shifted_kernel(a[0]).terms() {
                idx[0] = beta.get(0);
                idx[j] = beta.get(1);
                out.add_term(MultiIndex::new(idx.clone()), &(c * w));
            }
        }
    }
    Ok(out)
}

/// `V_{g,n}` in the internal convention, reading lower volumes from `table`.
/// The result is checked against the structural invariants.
pub fn volume(s: Signature, table: &VolumeTable) -> Result<LPoly> {
    if s.n == 0 {
        return Err(Error::NoBoundary(s));
    }
    let s = Signature::new(s.g, s.n)?;
    let v = if s.is_base() {
        base_volume(s)?
    } else {
        let mut p = a_con_term(s, table)?;
        p.add_scaled(&a_dcon_term(s, table)?, &PiPoly::one());
        p.add_scaled(&b_term(s, table)?, &PiPoly::one());
        p.integrate_back(0)
    };
    check_invariants(s, &v)?;
    Ok(v)
}

/// The geometric volume: the internal one, doubled at `(1,1)`.
pub fn true_volume(s: Signature, table: &VolumeTable) -> Result<LPoly> {
    let v = table.require(s)?;
    Ok(if (s.g, s.n) == (1, 1) {
        v.scale_rat(&int(2))
    } else {
        v.clone()
    })
}

/// Symmetry, π-homogeneity, positivity and the degree bound.
pub fn check_invariants(s: Signature, v: &LPoly) -> Result<()> {
    let fail = |what: String| Err(Error::Invariant { sig: s, what });
    if v.n() != s.n as usize {
        return fail(format!("polynomial has {} variables", v.n()));
    }
    if v.is_zero() {
        return fail("volume is zero".into());
    }
    let d = s.dim();
    for (alpha, c) in v.terms() {
        if alpha.degree() > d {
            return fail(format!("term {:?} exceeds degree {d}", alpha.entries()));
        }
        match c.as_monomial() {
            Some((k, q)) if k == d - alpha.degree() => {
                if *q <= Rat::from_integer(0.into()) {
                    return fail(format!("non-positive coefficient at {:?}", alpha.entries()));
                }
            }
            _ => return fail(format!("coefficient {c} at {:?} is not π^{}-homogeneous", alpha.entries(), 2 * (d - alpha.degree()))),
        }
    }
    if !v.is_symmetric() {
        return fail("not symmetric under relabelling".into());
    }
    Ok(())
}
