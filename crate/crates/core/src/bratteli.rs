//! Bratteli diagrams, the AF full group as the union of `⊕_v S_{h(v)}`,
//! parity vectors and the mod-2 dimension group.
//!
//! Paths to a vertex `w` of level `n` are enumerated by their last edge
//! first: the edges into `w` are ordered by source vertex and then by copy,
//! and the paths through one edge form a contiguous block ordered like the
//! paths to its source. Embedding from level `m` to `m + 1` therefore acts
//! blockwise.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::ktheory::Mod2Class;

/// `m[v][w]` = number of edges from `v ∈ V_{n-1}` to `w ∈ V_n`.
pub type Incidence = Vec<Vec<u64>>;

/// Largest path set an [`AfElement`] may permute.
pub const MAX_PATHS: usize = 1 << 20;

/// A Bratteli diagram given by finitely many incidence matrices, optionally
/// followed by one matrix repeated forever.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BratteliDiagram {
    prefix: Vec<Incidence>,
    repeat: Option<Incidence>,
}

impl BratteliDiagram {
    /// `prefix[0]` has a single row (the top vertex); `repeat`, if given,
    /// is square and applies to every level after the prefix. Every vertex
    /// must emit and receive at least one edge.
    pub fn new(prefix: Vec<Incidence>, repeat: Option<Incidence>) -> Result<Self> {
        if prefix.first().map(|m| m.len()) != Some(1) {
            return Err(Error::InvalidSystem(
                "level 0 must be a single vertex".into(),
            ));
        }
        let mut mats: Vec<&Incidence> = prefix.iter().collect();
        if let Some(r) = &repeat {
            if r.iter().any(|row| row.len() != r.len()) {
                return Err(Error::InvalidSystem(
                    "repeated incidence matrix must be square".into(),
                ));
            }
            mats.push(r);
        }
        for (i, m) in mats.iter().enumerate() {
            let n = i + 1;
            let cols = m.first().map_or(0, |r| r.len());
            if cols == 0 || m.iter().any(|row| row.len() != cols) {
                return Err(Error::InvalidSystem(format!(
                    "incidence matrix {n} is ragged or empty"
                )));
            }
            if m.iter().any(|row| row.iter().all(|&x| x == 0)) {
                return Err(Error::InvalidSystem(format!(
                    "a vertex of level {} emits no edge",
                    n - 1
                )));
            }
            if (0..cols).any(|j| m.iter().all(|row| row[j] == 0)) {
                return Err(Error::InvalidSystem(format!(
                    "a vertex of level {n} receives no edge"
                )));
            }
            if let Some(next) = mats.get(i + 1) {
                if next.len() != cols {
                    return Err(Error::InvalidSystem(format!(
                        "level {n} vertex counts disagree"
                    )));
                }
            }
        }
        Ok(BratteliDiagram { prefix, repeat })
    }

    /// Stationary diagram whose first level is `first` and whose later
    /// levels all use `repeat`.
    pub fn stationary(first: Incidence, repeat: Incidence) -> Result<Self> {
        Self::new(vec![first], Some(repeat))
    }

    /// The diagram of the substitution `0 ↦ 0011, 1 ↦ 0101`: two vertices per
    /// level, every pair joined by two edges.
    pub fn example1() -> Self {
        Self::stationary(vec![vec![1, 1]], vec![vec![2, 2], vec![2, 2]]).expect("valid diagram")
    }

    pub fn is_stationary(&self) -> bool {
        self.repeat.is_some()
    }

    /// Number of levels with explicitly given matrices.
    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    /// The matrix between levels `n - 1` and `n` (`n ≥ 1`).
    pub fn incidence(&self, n: usize) -> Result<&Incidence> {
        if n == 0 {
            return Err(Error::Config("level 0 has no incoming edges".into()));
        }
        self.prefix
            .get(n - 1)
            .or(self.repeat.as_ref())
            .ok_or_else(|| {
                Error::Inconclusive(format!(
                    "diagram is only given to level {}",
                    self.prefix.len()
                ))
            })
    }

    pub fn vertex_count(&self, n: usize) -> Result<usize> {
        if n == 0 {
            Ok(1)
        } else {
            Ok(self.incidence(n)?[0].len())
        }
    }

    /// `h(v)` for every `v ∈ V_n`, by `h(w) = Σ_v m_{v,w} h(v)`.
    pub fn path_counts(&self, n: usize) -> Result<Vec<BigUint>> {
        let mut h = vec![BigUint::one()];
        for level in 1..=n {
            let m = self.incidence(level)?;
            let cols = m[0].len();
            h = (0..cols)
                .map(|w| {
                    m.iter()
                        .zip(&h)
                        .map(|(row, hv)| hv * BigUint::from(row[w]))
                        .sum()
                })
                .collect();
        }
        Ok(h)
    }

    pub fn path_count(&self, n: usize, v: usize) -> Result<BigUint> {
        self.path_counts(n)?
            .get(v)
            .cloned()
            .ok_or_else(|| Error::Config(format!("level {n} has no vertex {v}")))
    }

    fn small_path_counts(&self, n: usize) -> Result<Vec<usize>> {
        self.path_counts(n)?
            .iter()
            .map(|h| {
                h.to_usize().filter(|&x| x <= MAX_PATHS).ok_or_else(|| {
                    Error::ResourceCap(format!("path sets at level {n} exceed {MAX_PATHS}"))
                })
            })
            .collect()
    }

    /// Simplicity. Decided exactly for stationary diagrams (primitivity of
    /// the repeated matrix); otherwise every vertex of the first `horizon`
    /// given levels must reach all of some later given level.
    pub fn is_simple(&self, horizon: usize) -> Result<bool> {
        if let Some(r) = &self.repeat {
            return Ok(is_primitive(r));
        }
        let last = self.prefix.len();
        for n in 0..horizon.min(last) {
            for v in 0..self.vertex_count(n)? {
                let mut reach = vec![false; self.vertex_count(n)?];
                reach[v] = true;
                let mut ok = false;
                for level in n + 1..=last {
                    let m = self.incidence(level)?;
                    reach = (0..m[0].len())
                        .map(|w| m.iter().zip(&reach).any(|(row, &r)| r && row[w] > 0))
                        .collect();
                    if reach.iter().all(|&r| r) {
                        ok = true;
                        break;
                    }
                }
                if !ok {
                    return Err(Error::Inconclusive(format!(
                        "vertex {v} of level {n} does not reach a full level within the given levels"
                    )));
                }
            }
        }
        Ok(true)
    }

    /// The direct limit of `Z₂^{V_n}` under the mod-2 connecting maps.
    /// Certified for stationary diagrams; non-stationary input is
    /// inconclusive.
    pub fn mod2_dimension_group(&self, depth: usize) -> Result<Mod2Limit> {
        if depth == 0 {
            return Err(Error::Config("depth must be positive".into()));
        }
        let r = self.repeat.as_ref().ok_or_else(|| {
            Error::Inconclusive("no finite certificate for a non-stationary diagram".into())
        })?;
        let a = transpose_mod2(r);
        let d = a.len();
        if depth < d + 1 {
            return Err(Error::Inconclusive(format!(
                "depth {depth} is below the certificate length {}",
                d + 1
            )));
        }
        // Fitting decomposition: A is invertible on W = im A^d
        let mut ranks = Vec::new();
        let mut p = identity_mod2(d);
        for _ in 0..=d + 1 {
            ranks.push(rank_mod2(&p));
            p = mul_mod2(&a, &p);
        }
        let ad = pow_mod2(&a, d);
        let basis = column_basis(&ad);
        let certified = rank_mod2(&ad) == rank_mod2(&mul_mod2(&a, &ad));
        // order of A on W: the least e with A^e fixing every basis vector
        let mut e = 1usize;
        let mut ae = a.clone();
        if !basis.is_empty() {
            while basis.iter().any(|b| apply_mod2(&ae, b) != *b) {
                ae = mul_mod2(&a, &ae);
                e += 1;
                if e > 1 << 20 {
                    return Err(Error::ResourceCap(
                        "order of the stable connecting map".into(),
                    ));
                }
            }
        }
        Ok(Mod2Limit {
            connecting: a,
            stable_from: self.prefix.len() + d,
            basis,
            period: e,
            ranks,
            certified,
        })
    }
}

/// The mod-2 dimension group of a stationary diagram, realized as
/// `W = im A^d ⊆ Z₂^V` at levels `n ≥ stable_from` with `n ≡ stable_from
/// (mod period)`, where `A` is the transposed incidence matrix mod 2.
#[derive(Clone, Debug)]
pub struct Mod2Limit {
    connecting: Vec<Vec<u8>>,
    pub stable_from: usize,
    /// A basis of `W` (reduced echelon columns of `A^d`).
    pub basis: Vec<Vec<u8>>,
    pub period: usize,
    /// GF(2) ranks of `A^0, A^1, …, A^{d+1}`.
    pub ranks: Vec<usize>,
    pub certified: bool,
}

impl Mod2Limit {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }

    /// The limit class of a parity vector at level `n` (at or beyond the
    /// stationary part).
    pub fn class_of(
        &self,
        diagram: &BratteliDiagram,
        n: usize,
        parity: &[u8],
    ) -> Result<Mod2Class> {
        let mut p = parity.to_vec();
        let mut level = n;
        while level < diagram.prefix_len() {
            p = push_parity(diagram.incidence(level + 1)?, &p);
            level += 1;
        }
        let target = if level <= self.stable_from {
            self.stable_from
        } else {
            level + (self.period - (level - self.stable_from) % self.period) % self.period
        };
        while level < target {
            p = apply_mod2(&self.connecting, &p);
            level += 1;
        }
        let coords = solve_in_basis(&self.basis, &p)
            .ok_or_else(|| Error::Inconclusive("pushed parity left the stable subspace".into()))?;
        Ok(Mod2Class { bits: coords })
    }
}

/// `p'_w = Σ_v m_{v,w} p_v (mod 2)`.
pub fn push_parity(m: &Incidence, p: &[u8]) -> Vec<u8> {
    (0..m[0].len())
        .map(|w| {
            m.iter()
                .zip(p)
                .map(|(row, &pv)| ((row[w] % 2) as u8) & pv)
                .fold(0, |a, b| a ^ b)
        })
        .collect()
}

/// An element of `G_m ≅ ⊕_{v ∈ V_m} S_{h(v)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AfElement {
    pub level: usize,
    /// `perms[v][i]` is the image of path `i` into `v`.
    pub perms: Vec<Vec<usize>>,
}

impl AfElement {
    pub fn identity(b: &BratteliDiagram, level: usize) -> Result<Self> {
        let h = b.small_path_counts(level)?;
        Ok(AfElement {
            level,
            perms: h.iter().map(|&n| (0..n).collect()).collect(),
        })
    }

    /// Validates the per-vertex permutations against `h(v)`.
    pub fn new(b: &BratteliDiagram, level: usize, perms: Vec<Vec<usize>>) -> Result<Self> {
        let h = b.small_path_counts(level)?;
        if perms.len() != h.len() {
            return Err(Error::Config(format!(
                "level {level} has {} vertices",
                h.len()
            )));
        }
        for (v, (p, &n)) in perms.iter().zip(&h).enumerate() {
            let mut seen = vec![false; n];
            if p.len() != n
                || p.iter()
                    .any(|&i| i >= n || std::mem::replace(&mut seen[i], true))
            {
                return Err(Error::NotBijective {
                    witness: format!("vertex {v} of level {level}"),
                });
            }
        }
        Ok(AfElement { level, perms })
    }

    /// The permutation at vertex `v` given in cycle notation on `0..h(v)`,
    /// identity elsewhere.
    pub fn from_cycles(
        b: &BratteliDiagram,
        level: usize,
        v: usize,
        cycles: &[Vec<usize>],
    ) -> Result<Self> {
        let mut g = Self::identity(b, level)?;
        let n = g
            .perms
            .get(v)
            .map(|p| p.len())
            .ok_or_else(|| Error::Config(format!("no vertex {v}")))?;
        for c in cycles {
            if c.iter().any(|&i| i >= n) {
                return Err(Error::Config(format!(
                    "cycle leaves the {n} paths into vertex {v}"
                )));
            }
            for (i, &x) in c.iter().enumerate() {
                g.perms[v][x] = c[(i + 1) % c.len()];
            }
        }
        Self::new(b, level, g.perms)
    }

    /// The image in `G_{m+1}`: each edge `v → w` carries a copy of the
    /// permutation at `v`.
    pub fn embed(&self, b: &BratteliDiagram) -> Result<Self> {
        let m = b.incidence(self.level + 1)?;
        let h_next = b.small_path_counts(self.level + 1)?;
        let mut perms = Vec::with_capacity(h_next.len());
        for (w, &hw) in h_next.iter().enumerate() {
            let mut p = Vec::with_capacity(hw);
            for (v, row) in m.iter().enumerate() {
                for _ in 0..row[w] {
                    let offset = p.len();
                    p.extend(self.perms[v].iter().map(|&i| offset + i));
                }
            }
            debug_assert_eq!(p.len(), hw);
            perms.push(p);
        }
        Ok(AfElement {
            level: self.level + 1,
            perms,
        })
    }

    pub fn embed_to(&self, b: &BratteliDiagram, level: usize) -> Result<Self> {
        let mut g = self.clone();
        while g.level < level {
            g = g.embed(b)?;
        }
        Ok(g)
    }

    /// `self ∘ other`, after embedding both to the deeper level.
    pub fn compose(&self, b: &BratteliDiagram, other: &AfElement) -> Result<Self> {
        let level = self.level.max(other.level);
        let (x, y) = (self.embed_to(b, level)?, other.embed_to(b, level)?);
        let perms = x
            .perms
            .iter()
            .zip(&y.perms)
            .map(|(px, py)| py.iter().map(|&i| px[i]).collect())
            .collect();
        Ok(AfElement { level, perms })
    }

    pub fn inverse(&self) -> Self {
        let perms = self
            .perms
            .iter()
            .map(|p| {
                let mut q = vec![0; p.len()];
                for (i, &j) in p.iter().enumerate() {
                    q[j] = i;
                }
                q
            })
            .collect();
        AfElement {
            level: self.level,
            perms,
        }
    }

    pub fn commutator(b: &BratteliDiagram, g: &AfElement, h: &AfElement) -> Result<Self> {
        g.compose(b, h)?
            .compose(b, &g.inverse())?
            .compose(b, &h.inverse())
    }

    pub fn is_identity(&self) -> bool {
        self.perms
            .iter()
            .all(|p| p.iter().enumerate().all(|(i, &j)| i == j))
    }

    /// Sign of each vertex permutation: 1 for odd.
    pub fn parity(&self) -> Vec<u8> {
        self.perms.iter().map(|p| permutation_parity(p)).collect()
    }

    pub fn order(&self) -> u64 {
        self.perms
            .iter()
            .flat_map(|p| cycle_lengths(p))
            .fold(1u64, num_integer::lcm)
    }

    /// Membership in the commutator subgroup `⋃ H_m`: some forward image
    /// of the parity vector vanishes.
    pub fn is_commutator_member(&self, b: &BratteliDiagram, lim: &Mod2Limit) -> Result<bool> {
        Ok(af_signature(b, self, lim)?.is_zero())
    }
}

/// The image of `parity(g)` in the mod-2 dimension group.
pub fn af_signature(b: &BratteliDiagram, g: &AfElement, lim: &Mod2Limit) -> Result<Mod2Class> {
    lim.class_of(b, g.level, &g.parity())
}

fn cycle_lengths(p: &[usize]) -> Vec<u64> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
            len += 1;
        }
        out.push(len);
    }
    out
}

pub fn permutation_parity(p: &[usize]) -> u8 {
    (cycle_lengths(p).iter().map(|&l| l - 1).sum::<u64>() % 2) as u8
}

/// Closure of `(1,2,3), (2,3,4), …, (n-2,n-1,n)` in `S_n`, compared with
/// `|A_n| = n!/2`. Returns the closure size and whether it is all of `A_n`.
pub fn alternating_gen_check(n: usize) -> Result<(usize, bool)> {
    if !(3..=9).contains(&n) {
        return Err(Error::Config(format!(
            "alternating check needs 3 ≤ n ≤ 9, got {n}"
        )));
    }
    let gens: Vec<Vec<u8>> = (0..n - 2)
        .map(|i| {
            let mut g: Vec<u8> = (0..n as u8).collect();
            g[i] = i as u8 + 1;
            g[i + 1] = i as u8 + 2;
            g[i + 2] = i as u8;
            g
        })
        .collect();
    let id: Vec<u8> = (0..n as u8).collect();
    let mut seen: HashSet<Vec<u8>> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in &gens {
            let q: Vec<u8> = g.iter().map(|&i| p[i as usize]).collect();
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    let half_factorial = (1..=n).product::<usize>() / 2;
    let all_even = seen
        .iter()
        .all(|p| permutation_parity(&p.iter().map(|&i| i as usize).collect::<Vec<_>>()) == 0);
    Ok((seen.len(), all_even && seen.len() == half_factorial))
}

// ---------------------------------------------------------------------------
// GF(2) helpers on dense 0/1 matrices

fn is_primitive(m: &Incidence) -> bool {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return false;
    }
    let pattern: Vec<Vec<bool>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x > 0).collect())
        .collect();
    let mut p = pattern.clone();
    for _ in 0..(n - 1) * (n - 1) + 1 {
        if p.iter().all(|r| r.iter().all(|&x| x)) {
            return true;
        }
        p = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).any(|k| p[i][k] && pattern[k][j]))
                    .collect()
            })
            .collect();
    }
    p.iter().all(|r| r.iter().all(|&x| x))
}

fn transpose_mod2(m: &Incidence) -> Vec<Vec<u8>> {
    let (rows, cols) = (m.len(), m[0].len());
    (0..cols)
        .map(|j| (0..rows).map(|i| (m[i][j] % 2) as u8).collect())
        .collect()
}

fn identity_mod2(d: usize) -> Vec<Vec<u8>> {
    (0..d)
        .map(|i| (0..d).map(|j| u8::from(i == j)).collect())
        .collect()
}

fn mul_mod2(a: &[Vec<u8>], b: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(0, |acc, k| acc ^ (row[k] & b[k][j])))
                .collect()
        })
        .collect()
}

fn pow_mod2(a: &[Vec<u8>], k: usize) -> Vec<Vec<u8>> {
    let mut p = identity_mod2(a.len());
    for _ in 0..k {
        p = mul_mod2(a, &p);
    }
    p
}

fn apply_mod2(a: &[Vec<u8>], v: &[u8]) -> Vec<u8> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(0, |acc, (x, y)| acc ^ (x & y)))
        .collect()
}

fn rank_mod2(a: &[Vec<u8>]) -> usize {
    column_basis(a).len()
}

/// Reduced basis of the column space.
fn column_basis(a: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut vecs: Vec<Vec<u8>> = (0..cols)
        .map(|j| (0..rows).map(|i| a[i][j]).collect())
        .collect();
    let mut basis: Vec<Vec<u8>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for v in vecs.iter_mut() {
        for (b, &p) in basis.iter().zip(&pivots) {
            if v[p] == 1 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x ^= y;
                }
            }
        }
        if let Some(p) = v.iter().position(|&x| x == 1) {
            for b in basis.iter_mut() {
                if b[p] == 1 {
                    for (x, y) in b.iter_mut().zip(v.iter()) {
                        *x ^= y;
                    }
                }
            }
            basis.push(v.clone());
            pivots.push(p);
        }
    }
    let mut order: Vec<usize> = (0..basis.len()).collect();
    order.sort_by_key(|&i| pivots[i]);
    order.into_iter().map(|i| basis[i].clone()).collect()
}

/// Coordinates of `v` in a reduced basis (pivot = first 1 of each vector).
fn solve_in_basis(basis: &[Vec<u8>], v: &[u8]) -> Option<Vec<u8>> {
    let mut rest = v.to_vec();
    let mut coords = vec![0u8; basis.len()];
    for (i, b) in basis.iter().enumerate() {
        let p = b.iter().position(|&x| x == 1)?;
        if rest[p] == 1 {
            coords[i] = 1;
            for (x, y) in rest.iter_mut().zip(b) {
                *x ^= y;
            }
        }
    }
    rest.iter().all(|&x| x == 0).then_some(coords)
}

impl BratteliDiagram {
    /// Brute-force check of `h` by enumerating paths, for small levels.
    pub fn enumerate_paths(&self, n: usize) -> Result<Vec<Vec<Vec<(usize, u64)>>>> {
        let mut paths: Vec<Vec<Vec<(usize, u64)>>> = vec![vec![Vec::new()]];
        for level in 1..=n {
            let m = self.incidence(level)?;
            let mut next = vec![Vec::new(); m[0].len()];
            for (w, into_w) in next.iter_mut().enumerate() {
                for (v, row) in m.iter().enumerate() {
                    for j in 0..row[w] {
                        for p in &paths[v] {
                            let mut q = p.clone();
                            q.push((v, j));
                            into_w.push(q);
                        }
                    }
                }
                if into_w.len() > MAX_PATHS {
                    return Err(Error::ResourceCap("path enumeration".into()));
                }
            }
            paths = next;
        }
        Ok(paths)
    }
}

impl Mod2Limit {
    /// Whether a level-`n` parity class vanishes in the limit.
    pub fn kills(&self, b: &BratteliDiagram, n: usize, parity: &[u8]) -> Result<bool> {
        Ok(self.class_of(b, n, parity)?.is_zero())
    }
}
