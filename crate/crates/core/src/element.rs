//! Elements of the topological full group `[[φ]]` as block codes.
//!
//! An element is a cocycle `n: X → Z` read off the window `[-L, R]`, acting
//! by `γ(x) = φ^{n(x)}(x)`. Products compose right to left, so
//! `n_{γτ}(x) = n_τ(x) + n_γ(τ(x))`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::subshift::{
    explore, ClopenSet, Language, Letter, PointHandle, Probe, SubshiftSystem, Word,
};

/// Default cap for order and period computations.
pub const DEFAULT_ORDER_CAP: usize = 720;

#[derive(Clone)]
pub struct FullGroupElement {
    sys: Arc<SubshiftSystem>,
    left: usize,
    right: usize,
    /// Parallel to `sys.words(left + right + 1)`.
    code: Vec<i64>,
}

/// How `period_decomposition` picks one point from each finite orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TransversalPolicy {
    /// The orbit point whose surrounding window is lexicographically least,
    /// at the smallest radius separating all orbit points.
    #[default]
    LexLeast,
    /// The orbit point with the smallest coordinate offset.
    Leftmost,
    /// The orbit point with the largest coordinate offset.
    Rightmost,
}

/// `V_n` for each least period `n`: `V_n, γV_n, …, γ^{n-1}V_n` partition
/// the points of period `n`.
#[derive(Clone, Debug)]
pub struct PeriodDecomposition {
    pub parts: Vec<(usize, ClopenSet)>,
}

impl PeriodDecomposition {
    pub fn part(&self, n: usize) -> Option<&ClopenSet> {
        self.parts.iter().find(|(m, _)| *m == n).map(|(_, v)| v)
    }
}

/// Result of an order computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(usize),
    /// No finite order up to the cap.
    Exceeds(usize),
}

enum Orbit {
    /// Offsets `p_0 = 0, p_1, …, p_{t-1}` of the cycle through the origin.
    Cycle(Vec<i64>),
    Exceeded,
    Need {
        left: usize,
        right: usize,
    },
}

impl FullGroupElement {
    /// Validates a code on `words(left + right + 1)` and returns the element
    /// in minimal form.
    pub fn from_code(
        sys: &Arc<SubshiftSystem>,
        left: usize,
        right: usize,
        code: Vec<i64>,
    ) -> Result<Self> {
        let lang = sys.words(left + right + 1)?;
        if code.len() != lang.len() {
            let missing = lang
                .words()
                .get(code.len())
                .map(|w| sys.render(w))
                .unwrap_or_default();
            return Err(Error::IncompleteCode { word: missing });
        }
        let g = FullGroupElement {
            sys: sys.clone(),
            left,
            right,
            code,
        };
        g.inverse_code()?;
        Ok(g.minimized())
    }

    /// Builds a code by evaluating `f` on each window word (coordinate 0 at
    /// index `left`).
    pub fn from_fn(
        sys: &Arc<SubshiftSystem>,
        left: usize,
        right: usize,
        f: impl Fn(&[Letter]) -> i64,
    ) -> Result<Self> {
        let lang = sys.words(left + right + 1)?;
        let code = lang.words().iter().map(|w| f(w)).collect();
        Self::from_code(sys, left, right, code)
    }

    /// Code from a string map `window → shift`, as used by configs and the
    /// CLI; every window word must be listed.
    pub fn from_table(
        sys: &Arc<SubshiftSystem>,
        left: usize,
        right: usize,
        table: &HashMap<Word, i64>,
    ) -> Result<Self> {
        let lang = sys.words(left + right + 1)?;
        for w in table.keys() {
            if !lang.contains(w) {
                return Err(Error::NotClosed {
                    word: sys.render(w),
                });
            }
        }
        let mut code = Vec::with_capacity(lang.len());
        for w in lang.words() {
            match table.get(w) {
                Some(&k) => code.push(k),
                None => {
                    return Err(Error::IncompleteCode {
                        word: sys.render(w),
                    })
                }
            }
        }
        Self::from_code(sys, left, right, code)
    }

    pub fn identity(sys: &Arc<SubshiftSystem>) -> Self {
        Self::shift_power(sys, 0)
    }

    /// `φ^k`.
    pub fn shift_power(sys: &Arc<SubshiftSystem>, k: i64) -> Self {
        let n = sys.words(1).expect("letters").len();
        FullGroupElement {
            sys: sys.clone(),
            left: 0,
            right: 0,
            code: vec![k; n],
        }
    }

    /// The element acting by `φ^k` on each piece and trivially elsewhere.
    /// Pieces must be pairwise disjoint; bijectivity is validated.
    pub fn from_pieces(sys: &Arc<SubshiftSystem>, pieces: &[(ClopenSet, i64)]) -> Result<Self> {
        let mut left = 0usize;
        let mut right = 0usize;
        for (p, _) in pieces {
            if p.is_empty() || p.window_len() == 0 {
                continue;
            }
            left = left.max((-p.start()).max(0) as usize);
            right = right.max((p.start() + p.window_len() as i64 - 1).max(0) as usize);
        }
        let lang = sys.words(left + right + 1)?;
        let mut code = Vec::with_capacity(lang.len());
        for w in lang.words() {
            let mut value = None;
            for (p, k) in pieces {
                if p.contains_window(w, -(left as i64))? {
                    if value.is_some() {
                        return Err(Error::OverlappingPieces {
                            word: sys.render(w),
                        });
                    }
                    value = Some(*k);
                }
            }
            code.push(value.unwrap_or(0));
        }
        Self::from_code(sys, left, right, code)
    }

    pub fn system(&self) -> &Arc<SubshiftSystem> {
        &self.sys
    }

    /// `(L, R)`: the code reads coordinates `[-L, R]`.
    pub fn span(&self) -> (usize, usize) {
        (self.left, self.right)
    }

    pub fn width(&self) -> usize {
        self.left + self.right + 1
    }

    pub fn code(&self) -> &[i64] {
        &self.code
    }

    pub fn window_words(&self) -> Result<Vec<Word>> {
        Ok(self.sys.words(self.width())?.words().to_vec())
    }

    pub fn max_shift(&self) -> i64 {
        self.code.iter().map(|k| k.abs()).max().unwrap_or(0)
    }

    /// Range of the cocycle.
    pub fn shift_range(&self) -> (i64, i64) {
        let lo = self.code.iter().copied().min().unwrap_or(0);
        let hi = self.code.iter().copied().max().unwrap_or(0);
        (lo, hi)
    }

    /// Value of `n` on the cylinder given by `window`, whose coordinate 0 is
    /// at index `origin`.
    pub fn cocycle_at(&self, window: &[Letter], origin: usize) -> Result<i64> {
        if origin < self.left || window.len() < origin + self.right + 1 {
            return Err(Error::WordTooShort {
                need: format!("[-{}, {}]", self.left, self.right),
                got: format!("[-{}, {}]", origin, window.len() as i64 - 1 - origin as i64),
            });
        }
        let lang = self.sys.words(self.width())?;
        self.cocycle_in(&lang, window, origin)
    }

    /// [`Self::cocycle_at`] against an already fetched language of width
    /// `self.width()`; the window must cover the code's span.
    fn cocycle_in(&self, lang: &Language, window: &[Letter], origin: usize) -> Result<i64> {
        let slice = &window[origin - self.left..=origin + self.right];
        lang.position(slice)
            .map(|i| self.code[i])
            .ok_or_else(|| Error::NotClosed {
                word: self.sys.render(slice),
            })
    }

    /// `n(φ^p x)` for a computable point.
    pub fn cocycle_on_point(&self, x: &PointHandle, p: i64) -> Result<i64> {
        let w = x.coords(&self.sys, p - self.left as i64, p + self.right as i64)?;
        self.cocycle_at(&w, self.left)
    }

    /// The code on the larger window `[-l, r]`.
    pub fn refine_code(&self, l: usize, r: usize) -> Result<Vec<i64>> {
        assert!(
            l >= self.left && r >= self.right,
            "refinement must enlarge the window"
        );
        let lang = self.sys.words(l + r + 1)?;
        lang.words().iter().map(|w| self.cocycle_at(w, l)).collect()
    }

    /// Shrinks the window while the code ignores an end coordinate.
    fn minimized(mut self) -> Self {
        loop {
            if self.left > 0 && self.drop_end(true) {
                continue;
            }
            if self.right > 0 && self.drop_end(false) {
                continue;
            }
            return self;
        }
    }

    fn drop_end(&mut self, left_end: bool) -> bool {
        let lang = match self.sys.words(self.width()) {
            Ok(l) => l,
            Err(_) => return false,
        };
        let mut seen: HashMap<&[Letter], i64> = HashMap::new();
        for (w, &k) in lang.words().iter().zip(&self.code) {
            let key = if left_end { &w[1..] } else { &w[..w.len() - 1] };
            if let Some(&prev) = seen.get(key) {
                if prev != k {
                    return false;
                }
            } else {
                seen.insert(key, k);
            }
        }
        let (l, r) = if left_end {
            (self.left - 1, self.right)
        } else {
            (self.left, self.right - 1)
        };
        let small = match self.sys.words(l + r + 1) {
            Ok(s) => s,
            Err(_) => return false,
        };
        let code: Option<Vec<i64>> = small
            .words()
            .iter()
            .map(|w| seen.get(&w[..]).copied())
            .collect();
        match code {
            Some(code) => {
                self.left = l;
                self.right = r;
                self.code = code;
                true
            }
            None => false,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FullGroupElement) -> Result<FullGroupElement> {
        assert!(
            Arc::ptr_eq(&self.sys, &other.sys),
            "elements over different systems"
        );
        let (kmin, kmax) = other.shift_range();
        let l = (other.left as i64).max(self.left as i64 - kmin).max(0) as usize;
        let r = (other.right as i64).max(self.right as i64 + kmax).max(0) as usize;
        let lang = self.sys.words(l + r + 1)?;
        let mut code = Vec::with_capacity(lang.len());
        for w in lang.words() {
            let k = other.cocycle_at(w, l)?;
            let j = self.cocycle_at(w, (l as i64 + k) as usize)?;
            code.push(k + j);
        }
        Ok(FullGroupElement {
            sys: self.sys.clone(),
            left: l,
            right: r,
            code,
        }
        .minimized())
    }

    /// Inverse code on the window enlarged by the maximal shift. Fails with
    /// `NotBijective` when some point has zero or several preimages.
    fn inverse_code(&self) -> Result<(usize, usize, Vec<i64>)> {
        let m = self.max_shift() as usize;
        let (l, r) = (self.left + m, self.right + m);
        let lang = self.sys.words(l + r + 1)?;
        let mut code = Vec::with_capacity(lang.len());
        for w in lang.words() {
            // preimages φ^{-k}(x) with n(φ^{-k}x) = k
            let mut found = None;
            for k in -(m as i64)..=(m as i64) {
                let pos = (l as i64 - k) as usize;
                if self.cocycle_at(w, pos)? == k {
                    if found.is_some() {
                        return Err(Error::NotBijective {
                            witness: self.sys.render(w),
                        });
                    }
                    found = Some(k);
                }
            }
            match found {
                Some(k) => code.push(-k),
                None => {
                    return Err(Error::NotBijective {
                        witness: self.sys.render(w),
                    })
                }
            }
        }
        Ok((l, r, code))
    }

    pub fn inverse(&self) -> FullGroupElement {
        let (left, right, code) = self.inverse_code().expect("validated element is bijective");
        FullGroupElement {
            sys: self.sys.clone(),
            left,
            right,
            code,
        }
        .minimized()
    }

    pub fn pow(&self, k: i64) -> Result<FullGroupElement> {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::identity(&self.sys);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.compose(&sq)?;
            }
        }
        Ok(acc)
    }

    /// `[a, b] = a⁻¹b⁻¹ab`.
    pub fn commutator(a: &FullGroupElement, b: &FullGroupElement) -> Result<FullGroupElement> {
        a.inverse().compose(&b.inverse())?.compose(a)?.compose(b)
    }

    /// `g · self · g⁻¹`.
    pub fn conjugate_by(&self, g: &FullGroupElement) -> Result<FullGroupElement> {
        g.compose(self)?.compose(&g.inverse())
    }

    pub fn equals(&self, other: &FullGroupElement) -> Result<bool> {
        assert!(
            Arc::ptr_eq(&self.sys, &other.sys),
            "elements over different systems"
        );
        let l = self.left.max(other.left);
        let r = self.right.max(other.right);
        Ok(self.refine_code(l, r)? == other.refine_code(l, r)?)
    }

    /// A window word on which the two codes differ, if any.
    pub fn difference_witness(&self, other: &FullGroupElement) -> Result<Option<String>> {
        let l = self.left.max(other.left);
        let r = self.right.max(other.right);
        let a = self.refine_code(l, r)?;
        let b = other.refine_code(l, r)?;
        let lang = self.sys.words(l + r + 1)?;
        Ok(lang
            .words()
            .iter()
            .zip(a.iter().zip(&b))
            .find(|(_, (x, y))| x != y)
            .map(|(w, _)| crate::subshift::render_cylinder(&self.sys, w, -(l as i64))))
    }

    pub fn is_identity(&self) -> bool {
        self.code.iter().all(|&k| k == 0)
    }

    /// `{x : γ(x) = x}`; exact because the subshift has no periodic points.
    pub fn fixed_set(&self) -> Result<ClopenSet> {
        let lang = self.sys.words(self.width())?;
        let words = lang
            .words()
            .iter()
            .zip(&self.code)
            .filter(|(_, &k)| k == 0)
            .map(|(w, _)| w.clone());
        ClopenSet::from_words(&self.sys, -(self.left as i64), self.width(), words)
    }

    /// `{x : n(x) = k}`.
    pub fn level_set(&self, k: i64) -> Result<ClopenSet> {
        let lang = self.sys.words(self.width())?;
        let words = lang
            .words()
            .iter()
            .zip(&self.code)
            .filter(|(_, &j)| j == k)
            .map(|(w, _)| w.clone());
        ClopenSet::from_words(&self.sys, -(self.left as i64), self.width(), words)
    }

    /// `γ(A)` for a clopen set, computed piecewise over the level sets.
    pub fn image(&self, a: &ClopenSet) -> Result<ClopenSet> {
        let mut out = ClopenSet::empty(&self.sys);
        let mut ks: Vec<i64> = self.code.clone();
        ks.sort_unstable();
        ks.dedup();
        for k in ks {
            let piece = a.intersect(&self.level_set(k)?)?;
            out = out.union(&piece.shift(k))?;
        }
        Ok(out)
    }

    /// Follows the orbit of the origin inside `window`.
    fn orbit_in(&self, window: &[Letter], origin: usize, cap: usize) -> Result<Orbit> {
        let lang = self.sys.words(self.width())?;
        let mut positions = vec![0i64];
        let mut p = 0i64;
        loop {
            let lo = origin as i64 + p - self.left as i64;
            let hi = origin as i64 + p + self.right as i64;
            if lo < 0 || hi >= window.len() as i64 {
                let have_r = window.len() - 1 - origin;
                return Ok(Orbit::Need {
                    left: origin.max((self.left as i64 - p).max(0) as usize),
                    right: have_r.max((p + self.right as i64).max(0) as usize),
                });
            }
            p += self.cocycle_in(&lang, window, (origin as i64 + p) as usize)?;
            if p == 0 {
                return Ok(Orbit::Cycle(positions));
            }
            if positions.len() >= cap {
                return Ok(Orbit::Exceeded);
            }
            positions.push(p);
        }
    }

    fn explore_limit(&self, cap: usize) -> usize {
        let m = self.max_shift().max(1) as usize;
        (2 * cap * m + self.width() + 2).min(self.sys.caps().max_len)
    }

    /// Least `k ≥ 1` with `γ^k = id`, or `Exceeds(cap)`.
    pub fn order(&self, cap: usize) -> Result<Order> {
        if self.is_identity() {
            return Ok(Order::Finite(1));
        }
        // finite order forces index 0
        if self.sys.is_uniquely_ergodic() && crate::measure::index(self)? != 0 {
            return Ok(Order::Exceeds(cap));
        }
        let leaves = match explore(&self.sys, self.explore_limit(cap), |w, o| {
            Ok(match self.orbit_in(w, o, cap)? {
                Orbit::Cycle(ps) => Probe::Done(Some(ps.len())),
                Orbit::Exceeded => Probe::Done(None),
                Orbit::Need { left, right } => Probe::Need { left, right },
            })
        }) {
            Ok(l) => l,
            Err(Error::ResourceCap(_)) => return Ok(Order::Exceeds(cap)),
            Err(e) => return Err(e),
        };
        let mut order = 1usize;
        for (_, t) in leaves {
            match t {
                Some(t) => {
                    order = order.lcm(&t);
                    if order > cap {
                        return Ok(Order::Exceeds(cap));
                    }
                }
                None => return Ok(Order::Exceeds(cap)),
            }
        }
        Ok(Order::Finite(order))
    }

    pub fn finite_order(&self, cap: usize) -> Result<usize> {
        match self.order(cap)? {
            Order::Finite(k) => Ok(k),
            Order::Exceeds(cap) => Err(Error::InfiniteOrder { cap }),
        }
    }

    /// Transversals of the finite orbits, chosen by `policy`.
    pub fn period_decomposition(
        &self,
        policy: TransversalPolicy,
        cap: usize,
    ) -> Result<PeriodDecomposition> {
        let leaves = match explore(&self.sys, self.explore_limit(cap), |w, o| {
            let ps = match self.orbit_in(w, o, cap)? {
                Orbit::Cycle(ps) => ps,
                Orbit::Exceeded => return Ok(Probe::Done(None)),
                Orbit::Need { left, right } => return Ok(Probe::Need { left, right }),
            };
            let chosen = match policy {
                TransversalPolicy::Leftmost => ps[1..].iter().all(|&p| p > 0),
                TransversalPolicy::Rightmost => ps[1..].iter().all(|&p| p < 0),
                TransversalPolicy::LexLeast => match lex_least_is_origin(w, o, &ps) {
                    Ok(c) => c,
                    Err((left, right)) => return Ok(Probe::Need { left, right }),
                },
            };
            Ok(Probe::Done(Some((ps.len(), chosen))))
        }) {
            Ok(l) => l,
            Err(Error::ResourceCap(_)) => return Err(Error::InfiniteOrder { cap }),
            Err(e) => return Err(e),
        };
        let mut chosen: HashMap<usize, Vec<(Word, i64)>> = HashMap::new();
        for (cyl, v) in leaves {
            match v {
                None => return Err(Error::InfiniteOrder { cap }),
                Some((t, true)) => chosen.entry(t).or_default().push((cyl.word, cyl.start)),
                Some((t, false)) => {
                    chosen.entry(t).or_default();
                }
            }
        }
        let mut parts = Vec::new();
        let mut periods: Vec<usize> = chosen.keys().copied().collect();
        periods.sort_unstable();
        for t in periods {
            let set = union_of_cylinders(&self.sys, &chosen[&t])?;
            parts.push((t, set));
        }
        Ok(PeriodDecomposition { parts })
    }
}

/// Decides whether the origin carries the least window among the orbit
/// offsets `ps`, at the least radius separating them; otherwise returns the
/// coordinates needed.
fn lex_least_is_origin(
    w: &[Letter],
    o: usize,
    ps: &[i64],
) -> std::result::Result<bool, (usize, usize)> {
    if ps.len() == 1 {
        return Ok(true);
    }
    let pmin = *ps.iter().min().unwrap();
    let pmax = *ps.iter().max().unwrap();
    let have_l = o as i64;
    let have_r = (w.len() - 1 - o) as i64;
    let fits = |r: i64| pmin - r >= -have_l && pmax + r <= have_r;
    let window = |p: i64, r: i64| {
        let a = (o as i64 + p - r) as usize;
        let b = (o as i64 + p + r) as usize;
        &w[a..=b]
    };
    let separated = |r: i64| {
        let distinct: BTreeSet<&[Letter]> = ps.iter().map(|&p| window(p, r)).collect();
        distinct.len() == ps.len()
    };
    // separation is monotone in r: gallop up, then bisect for the least radius
    let mut hi = 0i64;
    loop {
        if !fits(hi) {
            return Err((
                (hi - pmin).max(have_l) as usize,
                (pmax + hi).max(have_r) as usize,
            ));
        }
        if separated(hi) {
            break;
        }
        hi = 2 * hi + 1;
    }
    let mut lo = -1i64;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if separated(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let least = ps.iter().map(|&p| window(p, hi)).min().unwrap();
    Ok(least == window(0, hi))
}

/// Union of cylinders of possibly different windows, built on their hull.
pub(crate) fn union_of_cylinders(
    sys: &Arc<SubshiftSystem>,
    cyls: &[(Word, i64)],
) -> Result<ClopenSet> {
    if cyls.is_empty() {
        return Ok(ClopenSet::empty(sys));
    }
    let start = cyls.iter().map(|(_, s)| *s).min().unwrap();
    let end = cyls.iter().map(|(w, s)| s + w.len() as i64).max().unwrap();
    let len = (end - start) as usize;
    let mut groups: HashMap<(usize, usize), BTreeSet<&[Letter]>> = HashMap::new();
    for (w, s) in cyls {
        groups
            .entry(((s - start) as usize, w.len()))
            .or_default()
            .insert(w.as_slice());
    }
    let lang = sys.words(len)?;
    let words = lang.words().iter().filter(|w| {
        groups
            .iter()
            .any(|(&(off, l), set)| set.contains(&w[off..off + l]))
    });
    ClopenSet::from_words(sys, start, len, words.cloned())
}

impl PartialEq for FullGroupElement {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.sys, &other.sys) && self.equals(other).unwrap_or(false)
    }
}

impl fmt::Debug for FullGroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FullGroupElement({self})")
    }
}

/// Lists the nonzero level sets, e.g. `{[0.] -> 1, [01.] -> -1}`.
impl fmt::Display for FullGroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut ks: Vec<i64> = self.code.iter().copied().filter(|&k| k != 0).collect();
        ks.sort_unstable();
        ks.dedup();
        if ks.is_empty() {
            return write!(f, "id");
        }
        let parts: Vec<String> = ks
            .iter()
            .map(|&k| {
                let set = self
                    .level_set(k)
                    .map(|s| s.to_string())
                    .unwrap_or_else(|_| "?".into());
                format!("{set} -> {k}")
            })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}
