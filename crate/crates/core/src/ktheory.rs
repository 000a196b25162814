//! K⁰ classes of clopen sets, the signature map on `[[φ]]₀`, and the
//! first-return maps `φ_U`.
//!
//! Classes are read off exact measures, so only systems whose trace is
//! injective on K⁰ are supported: Sturmian shifts (`K⁰ = Z + Zα`) and
//! substitutions with a rank-one incidence matrix (`K⁰ = Z[1/λ]`).

use std::fmt;
use std::ops::Add;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::element::{union_of_cylinders, FullGroupElement, TransversalPolicy, DEFAULT_ORDER_CAP};
use crate::error::{Error, Result};
use crate::measure::{index, measure};
use crate::quad::QuadReal;
use crate::subshift::{explore, ClopenSet, PointHandle, Probe, SubshiftSystem, SystemKind, Word};

/// An element of `K⁰ ⊗ Z₂` in the presentation's mod-2 basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mod2Class {
    pub bits: Vec<u8>,
}

impl Mod2Class {
    pub fn zero(dim: usize) -> Self {
        Mod2Class { bits: vec![0; dim] }
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }

    pub fn dim(&self) -> usize {
        self.bits.len()
    }
}

impl Add for &Mod2Class {
    type Output = Mod2Class;
    fn add(self, rhs: &Mod2Class) -> Mod2Class {
        assert_eq!(
            self.bits.len(),
            rhs.bits.len(),
            "mod-2 classes of different groups"
        );
        Mod2Class {
            bits: self
                .bits
                .iter()
                .zip(&rhs.bits)
                .map(|(a, b)| a ^ b)
                .collect(),
        }
    }
}

impl Add for Mod2Class {
    type Output = Mod2Class;
    fn add(self, rhs: Mod2Class) -> Mod2Class {
        &self + &rhs
    }
}

impl fmt::Display for Mod2Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.bits.iter().map(|b| b.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Rank over GF(2) of a list of classes.
pub fn class_matrix_rank(classes: &[Mod2Class]) -> usize {
    let mut rows: Vec<Vec<u8>> = classes.iter().map(|c| c.bits.clone()).collect();
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][c] == 1) else {
            continue;
        };
        rows.swap(rank, p);
        for i in 0..rows.len() {
            if i != rank && rows[i][c] == 1 {
                let pivot = rows[rank].clone();
                for (x, y) in rows[i].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// A trace-faithful presentation of `K⁰(X, φ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum K0Presentation {
    /// Basis `[1_X], [1_U]` with `U = [0.]`, `μ(U) = α`.
    Rotation { alpha: QuadReal },
    /// `K⁰ ≅ Z[1/λ]` through the measure, basis `[1_X]`.
    RankOne { lambda: i64 },
}

impl K0Presentation {
    pub fn for_system(sys: &SubshiftSystem) -> Result<Self> {
        match sys.kind() {
            SystemKind::HigherBlock { base, .. } => Self::for_system(base),
            SystemKind::Sturmian { alpha } => Ok(K0Presentation::Rotation {
                alpha: alpha.clone(),
            }),
            SystemKind::Substitution(sub) => {
                let m = sub.incidence();
                let k = m.len();
                // rank one: all 2x2 minors vanish
                let rank_one = (0..k).all(|i| {
                    (0..k).all(|i2| {
                        (0..k).all(|j| (0..k).all(|j2| m[i][j] * m[i2][j2] == m[i][j2] * m[i2][j]))
                    })
                });
                if !rank_one {
                    return Err(Error::UnsupportedSystem(
                        "K⁰ presentation needs a rank-one incidence matrix".into(),
                    ));
                }
                let lambda = (0..k).map(|i| m[i][i] as i64).sum();
                Ok(K0Presentation::RankOne { lambda })
            }
            SystemKind::Sft { .. } => Err(Error::UnsupportedSystem(
                "no K⁰ presentation for shifts of finite type".into(),
            )),
        }
    }

    pub fn basis_labels(&self) -> Vec<&'static str> {
        match self {
            K0Presentation::Rotation { .. } => vec!["[1_X]", "[1_U]"],
            K0Presentation::RankOne { .. } => vec!["[1_X]"],
        }
    }

    /// Dimension of `K⁰ ⊗ Z₂`.
    pub fn mod2_dim(&self) -> usize {
        match self {
            K0Presentation::Rotation { .. } => 2,
            K0Presentation::RankOne { lambda } => usize::from(lambda.is_odd()),
        }
    }

    /// Coordinates of the class of a measure value.
    pub fn coordinates(&self, mu: &QuadReal) -> Result<Vec<BigRational>> {
        match self {
            K0Presentation::Rotation { alpha } => {
                // μ = a + bα
                let b = if mu.is_rational() {
                    BigRational::zero()
                } else {
                    mu.irrational_coeff() / alpha.irrational_coeff()
                };
                let a = mu.rational_part() - &b * alpha.rational_part();
                if !a.is_integer() || !b.is_integer() {
                    return Err(Error::Inconclusive(format!(
                        "measure {mu} is not in Z + Zα"
                    )));
                }
                Ok(vec![a, b])
            }
            K0Presentation::RankOne { lambda } => {
                if !mu.is_rational() {
                    return Err(Error::Inconclusive(format!("measure {mu} is irrational")));
                }
                let r = mu.rational_part().clone();
                let mut d = r.denom().clone();
                let lam = BigInt::from(*lambda);
                while !d.is_one() {
                    let g = d.gcd(&lam);
                    if g.is_one() {
                        return Err(Error::Inconclusive(format!(
                            "measure {mu} is not in Z[1/{lambda}]"
                        )));
                    }
                    d /= g;
                }
                Ok(vec![r])
            }
        }
    }

    pub fn class_of(&self, a: &ClopenSet) -> Result<Vec<BigRational>> {
        self.coordinates(&measure(a)?)
    }

    pub fn reduce_mod2(&self, coords: &[BigRational]) -> Mod2Class {
        match self {
            K0Presentation::Rotation { .. } => Mod2Class {
                bits: coords.iter().map(|c| parity(&c.to_integer())).collect(),
            },
            K0Presentation::RankOne { lambda } => {
                if lambda.is_even() {
                    Mod2Class::zero(0)
                } else {
                    // odd denominators: the class of p/q is p mod 2
                    Mod2Class {
                        bits: vec![parity(coords[0].numer())],
                    }
                }
            }
        }
    }

    pub fn class_mod2(&self, a: &ClopenSet) -> Result<Mod2Class> {
        Ok(self.reduce_mod2(&self.class_of(a)?))
    }

    pub fn is_2divisible(&self, a: &ClopenSet) -> Result<bool> {
        Ok(self.class_mod2(a)?.is_zero())
    }
}

fn parity(n: &BigInt) -> u8 {
    u8::from(n.is_odd())
}

/// `sgn` of a finite-order element: the class of the union of the
/// even-period transversals.
pub fn compute_sgn_finite(
    pres: &K0Presentation,
    g: &FullGroupElement,
    policy: TransversalPolicy,
    cap: usize,
) -> Result<Mod2Class> {
    let dec = g.period_decomposition(policy, cap)?;
    let mut even = ClopenSet::empty(g.system());
    for (n, v) in &dec.parts {
        if n % 2 == 0 {
            even = even.union(v)?;
        }
    }
    pres.class_mod2(&even)
}

/// Choices left open by the decomposition construction.
#[derive(Clone, Copy, Debug)]
pub struct DecomposeOptions {
    /// Pair `A` with `B` in reversed order instead of order-preserving.
    pub reversed_pi: bool,
    /// Radius of the first cylinder tried around `x`.
    pub min_radius: usize,
    pub max_radius: usize,
    pub order_cap: usize,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions {
            reversed_pi: false,
            min_radius: 0,
            max_radius: 64,
            order_cap: DEFAULT_ORDER_CAP,
        }
    }
}

/// `γ = γ₁γ₂` with `γ₁` preserving the half-orbits of `x` and `γ₂` those of `y`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub gamma1: FullGroupElement,
    pub gamma2: FullGroupElement,
    /// `n ≥ 1` with `γ(φⁿx)` in the backward orbit of `x`.
    pub a: Vec<i64>,
    /// `n ≥ 1` with `γ(φ^{1-n}x)` in the forward orbit of `x`.
    pub b: Vec<i64>,
    /// `π(a[i]) = pi[i]`.
    pub pi: Vec<i64>,
    pub u: ClopenSet,
}

/// Whether `g` maps `{φ^p z : p ≤ 0}` and `{φ^p z : p ≥ 1}` into themselves.
pub fn preserves_half_orbits(g: &FullGroupElement, z: &PointHandle) -> Result<bool> {
    let m = g.max_shift();
    // only points within the maximal shift of the cut can cross it
    for p in (1 - m)..=m {
        let q = p + g.cocycle_on_point(z, p)?;
        if (p <= 0) != (q <= 0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The decomposition `γ = γ₁γ₂` for `γ` of index zero.
pub fn decompose(
    g: &FullGroupElement,
    x: &PointHandle,
    y: &PointHandle,
    opts: DecomposeOptions,
) -> Result<Decomposition> {
    let sys = g.system();
    let m = g.max_shift();
    let mut a = Vec::new();
    for n in 1..=m {
        if n + g.cocycle_on_point(x, n)? <= 0 {
            a.push(n);
        }
    }
    let mut b = Vec::new();
    for n in 1..=m + 1 {
        let q = 1 - n;
        if q + g.cocycle_on_point(x, q)? >= 1 {
            b.push(n);
        }
    }
    if a.len() != b.len() {
        return Err(Error::NonzeroIndex {
            index: b.len() as i64 - a.len() as i64,
        });
    }
    if a.is_empty() {
        return Ok(Decomposition {
            gamma1: g.clone(),
            gamma2: FullGroupElement::identity(sys),
            a,
            b,
            pi: Vec::new(),
            u: ClopenSet::full(sys),
        });
    }
    let pi: Vec<i64> = if opts.reversed_pi {
        b.iter().rev().copied().collect()
    } else {
        b.clone()
    };
    let l = *a.iter().chain(&b).max().unwrap();
    for r in opts.min_radius..=opts.max_radius {
        let r = r as i64;
        let word = x.coords(sys, -r, r)?;
        let u = ClopenSet::cylinder(sys, &word, -r)?;
        if !(1..=2 * l).all(|s| u.is_disjoint(&u.shift(s)).unwrap_or(false)) {
            continue;
        }
        let mut pieces = Vec::new();
        for (n, p) in a.iter().zip(&pi) {
            pieces.push((u.shift(*n), 1 - p - n));
            pieces.push((u.shift(1 - p), p - 1 + n));
        }
        let mut v = ClopenSet::empty(sys);
        for (piece, _) in &pieces {
            v = v.union(piece)?;
        }
        // V must miss φ^k y for 2-2l ≤ k ≤ 2l-1
        let mut hits_y = false;
        if v.window_len() > 0 {
            for k in (2 - 2 * l)..=(2 * l - 1) {
                let lo = k + v.start();
                let w = y.coords(sys, lo, lo + v.window_len() as i64 - 1)?;
                if v.words().contains(&w) {
                    hits_y = true;
                    break;
                }
            }
        }
        if hits_y {
            continue;
        }
        let gamma2 = FullGroupElement::from_pieces(sys, &pieces)?;
        let gamma1 = g.compose(&gamma2.inverse())?;
        if !preserves_half_orbits(&gamma1, x)? || !preserves_half_orbits(&gamma2, y)? {
            continue;
        }
        return Ok(Decomposition {
            gamma1,
            gamma2,
            a,
            b,
            pi,
            u,
        });
    }
    Err(Error::NeighborhoodSearchExhausted {
        radius: opts.max_radius,
    })
}

/// Choices feeding `sgn`; the result must not depend on any of them.
#[derive(Clone, Copy, Debug, Default)]
pub struct SgnOptions {
    pub swap_points: bool,
    pub policy: TransversalPolicy,
    pub decompose: DecomposeOptions,
}

/// The signature of `γ ∈ [[φ]]₀` via the system's first two distinguished
/// points.
pub fn sgn(pres: &K0Presentation, g: &FullGroupElement, opts: SgnOptions) -> Result<Mod2Class> {
    let sys = g.system();
    let points = sys.points();
    if points.len() < 2 {
        return Err(Error::Config(
            "signature needs two distinguished points".into(),
        ));
    }
    let i = index(g)?;
    if i != 0 {
        return Err(Error::NonzeroIndex { index: i });
    }
    let (x, y) = if opts.swap_points {
        (&points[1], &points[0])
    } else {
        (&points[0], &points[1])
    };
    let d = decompose(g, x, y, opts.decompose)?;
    let cap = opts.decompose.order_cap;
    let s1 = compute_sgn_finite(pres, &d.gamma1, opts.policy, cap)?;
    let s2 = compute_sgn_finite(pres, &d.gamma2, opts.policy, cap)?;
    Ok(s1 + s2)
}

/// `φ_U`: the first return map on `U`, the identity off `U`.
pub fn first_return(u: &ClopenSet, cap: usize) -> Result<FullGroupElement> {
    let sys: &Arc<SubshiftSystem> = u.system();
    if u.is_empty() {
        return Err(Error::Config("first return to the empty set".into()));
    }
    if u.is_full() {
        return Ok(FullGroupElement::shift_power(sys, 1));
    }
    let (us, ul) = (u.start(), u.window_len() as i64);
    let need_left = (-us).max(0) as usize;
    let leaves = explore(sys, cap + ul as usize + need_left + 2, |w, o| {
        let have_r = (w.len() - 1 - o) as i64;
        let need = |k: i64| Probe::Need {
            left: need_left.max(o),
            right: (k + us + ul - 1).max(have_r) as usize,
        };
        if (o as i64) < -us || have_r < us + ul - 1 {
            return Ok(need(0));
        }
        let at = |k: i64| {
            let s = (o as i64 + k + us) as usize;
            u.words().contains(&w[s..s + ul as usize])
        };
        if !at(0) {
            return Ok(Probe::Done(0));
        }
        let mut k = 1;
        loop {
            if k as usize > cap {
                return Ok(Probe::Done(-1));
            }
            if k + us + ul - 1 > have_r {
                return Ok(need(k));
            }
            if at(k) {
                return Ok(Probe::Done(k));
            }
            k += 1;
        }
    })
    .map_err(|e| match e {
        Error::ResourceCap(_) => Error::ReturnTimeCapExceeded { cap },
        e => e,
    })?;
    let mut by_time: std::collections::BTreeMap<i64, Vec<(Word, i64)>> = Default::default();
    for (c, k) in leaves {
        if k < 0 {
            return Err(Error::ReturnTimeCapExceeded { cap });
        }
        if k > 0 {
            by_time.entry(k).or_default().push((c.word, c.start));
        }
    }
    let mut pieces = Vec::new();
    for (k, cyls) in by_time {
        pieces.push((union_of_cylinders(sys, &cyls)?, k));
    }
    FullGroupElement::from_pieces(sys, &pieces)
}
