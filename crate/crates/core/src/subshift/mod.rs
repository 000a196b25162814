//! Two-sided subshifts with exact language oracles.
//!
//! The shift acts on the left: `φ(x)_i = x_{i+1}`. A cylinder `(w, s)` is the
//! set of points with `x_s … x_{s+|w|-1} = w`; in dotted notation the letter
//! just before the dot sits at coordinate 0, so `[01.]` is `("01", -1)` and
//! `[.0]` is `("0", 1)`.

mod clopen;
mod context;
mod point;
mod substitution;

pub(crate) use clopen::{parse_dotted, render_cylinder};
pub use clopen::{ClopenSet, Cylinder};
pub(crate) use context::{explore, Probe};
pub use point::{orbit_distinct, PointHandle};
pub use substitution::{tile_set, Substitution};

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::quad::QuadReal;

pub type Letter = u8;
pub type Word = Vec<Letter>;

/// Ordered finite alphabet of single-character symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(Error::InvalidSystem("empty alphabet".into()));
        }
        let distinct: BTreeSet<char> = symbols.iter().copied().collect();
        if distinct.len() != symbols.len() {
            return Err(Error::InvalidSystem("repeated alphabet symbol".into()));
        }
        if symbols.len() > Letter::MAX as usize {
            return Err(Error::InvalidSystem("alphabet too large".into()));
        }
        if symbols
            .iter()
            .any(|c| c.is_whitespace() || ".[](),|&~-".contains(*c))
        {
            return Err(Error::InvalidSystem(
                "reserved character in alphabet".into(),
            ));
        }
        Ok(Alphabet { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn letters(&self) -> impl DoubleEndedIterator<Item = Letter> {
        0..self.symbols.len() as Letter
    }

    pub fn symbol(&self, l: Letter) -> char {
        self.symbols[l as usize]
    }

    pub fn letter(&self, c: char) -> Option<Letter> {
        self.symbols
            .iter()
            .position(|&s| s == c)
            .map(|i| i as Letter)
    }

    pub fn render(&self, w: &[Letter]) -> String {
        w.iter().map(|&l| self.symbol(l)).collect()
    }

    pub fn parse(&self, s: &str) -> Result<Word> {
        s.chars()
            .map(|c| {
                self.letter(c)
                    .ok_or_else(|| Error::InvalidSystem(format!("symbol {c:?} not in alphabet")))
            })
            .collect()
    }
}

/// Construction data of a subshift.
#[derive(Clone, Debug)]
pub enum SystemKind {
    /// Shift of finite type. Element algebra only; no measure or signature.
    Sft {
        forbidden: Vec<Word>,
    },
    Substitution(Substitution),
    /// Coding of the rotation by `alpha` with `I0 = [0, alpha)`, `I1 = [alpha, 1)`.
    Sturmian {
        alpha: QuadReal,
    },
    /// The `k`-block presentation of `base`: letter `i` is the `i`-th word of
    /// `base.words(k)`, and `y_j` is the block `x_j … x_{j+k-1}`.
    HigherBlock {
        base: Arc<SubshiftSystem>,
        k: usize,
    },
}

/// Resource limits for language stabilization.
#[derive(Clone, Copy, Debug)]
pub struct LanguageCaps {
    pub max_words: usize,
    pub max_len: usize,
}

impl Default for LanguageCaps {
    fn default() -> Self {
        LanguageCaps {
            max_words: 2_000_000,
            max_len: 4096,
        }
    }
}

/// Length-`n` factors of a subshift, sorted lexicographically.
#[derive(Debug)]
pub struct Language {
    len: usize,
    words: Vec<Word>,
}

impl Language {
    fn from_set(len: usize, set: BTreeSet<Word>) -> Self {
        Language {
            len,
            words: set.into_iter().collect(),
        }
    }

    pub fn word_len(&self) -> usize {
        self.len
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn position(&self, w: &[Letter]) -> Option<usize> {
        self.words.binary_search_by(|x| x.as_slice().cmp(w)).ok()
    }

    pub fn contains(&self, w: &[Letter]) -> bool {
        self.position(w).is_some()
    }
}

#[derive(Debug)]
struct SftGraph {
    /// Window length of the vertex words.
    m: usize,
    vertices: BTreeSet<Word>,
}

/// A two-sided subshift with an exact language oracle and distinguished
/// points. Immutable after construction; the language cache is internally
/// synchronized.
pub struct SubshiftSystem {
    name: String,
    alphabet: Alphabet,
    kind: SystemKind,
    points: Vec<PointHandle>,
    caps: LanguageCaps,
    sft: Option<SftGraph>,
    /// Length-2 factors of a substitution subshift.
    pairs: Vec<Word>,
    languages: Mutex<HashMap<usize, Arc<Language>>>,
    pub(crate) measure_cache: Mutex<HashMap<usize, Arc<Vec<QuadReal>>>>,
}

impl fmt::Debug for SubshiftSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SubshiftSystem")
            .field("name", &self.name)
            .field("alphabet", &self.alphabet)
            .field("kind", &self.kind)
            .finish()
    }
}

impl SubshiftSystem {
    fn bare(name: &str, alphabet: Alphabet, kind: SystemKind, caps: LanguageCaps) -> Self {
        SubshiftSystem {
            name: name.to_string(),
            alphabet,
            kind,
            points: Vec::new(),
            caps,
            sft: None,
            pairs: Vec::new(),
            languages: Mutex::new(HashMap::new()),
            measure_cache: Mutex::new(HashMap::new()),
        }
    }

    /// Sturmian shift over `{0, 1}` for an irrational `alpha` in `(0, 1)`.
    pub fn sturmian(name: &str, alpha: QuadReal, points: Vec<PointHandle>) -> Result<Arc<Self>> {
        if alpha.is_rational() {
            return Err(Error::InvalidSystem(format!(
                "rotation number {alpha} is rational"
            )));
        }
        if alpha <= QuadReal::zero() || alpha >= QuadReal::one() {
            return Err(Error::InvalidSystem(format!(
                "rotation number {alpha} not in (0,1)"
            )));
        }
        let alphabet = Alphabet::new(['0', '1'])?;
        let sys = Self::bare(
            name,
            alphabet,
            SystemKind::Sturmian { alpha },
            LanguageCaps::default(),
        );
        sys.finish(points)
    }

    /// Subshift of a primitive, aperiodic substitution.
    pub fn substitution(
        name: &str,
        alphabet: Alphabet,
        images: Vec<Word>,
        points: Vec<PointHandle>,
    ) -> Result<Arc<Self>> {
        let sub = Substitution::new(alphabet.len(), images)?;
        if !sub.is_primitive() {
            return Err(Error::InvalidSystem("substitution is not primitive".into()));
        }
        let mut sys = Self::bare(
            name,
            alphabet,
            SystemKind::Substitution(sub.clone()),
            LanguageCaps::default(),
        );
        sys.pairs = sub.two_factors();
        // Morse–Hedlund: a stall in complexity means the subshift is periodic
        let mut prev = sys.words(1)?.len();
        for n in 2..=32 {
            let cur = sys.words(n)?.len();
            if cur <= prev {
                return Err(Error::InvalidSystem(format!(
                    "substitution subshift is periodic (complexity stalls at n = {n})"
                )));
            }
            prev = cur;
        }
        sys.finish(points)
    }

    /// Shift of finite type given by forbidden words.
    pub fn sft(name: &str, alphabet: Alphabet, forbidden: Vec<Word>) -> Result<Arc<Self>> {
        if forbidden.iter().any(|w| w.is_empty()) {
            return Err(Error::InvalidSystem("empty forbidden word".into()));
        }
        let mut sys = Self::bare(
            name,
            alphabet,
            SystemKind::Sft {
                forbidden: forbidden.clone(),
            },
            LanguageCaps::default(),
        );
        sys.sft = Some(build_sft_graph(&sys.alphabet, &forbidden));
        if sys.sft.as_ref().map_or(true, |g| g.vertices.is_empty()) {
            return Err(Error::InvalidSystem("shift of finite type is empty".into()));
        }
        sys.finish(Vec::new())
    }

    /// The `k`-block presentation of `base`, with the same distinguished
    /// points (read through the block map).
    pub fn higher_block(base: &Arc<SubshiftSystem>, k: usize) -> Result<Arc<Self>> {
        if k == 0 {
            return Err(Error::InvalidSystem("block length must be positive".into()));
        }
        let blocks = base.words(k)?;
        let symbols = block_symbols(blocks.len())?;
        let alphabet = Alphabet::new(symbols)?;
        let sys = Self::bare(
            &format!("{}^[{k}]", base.name),
            alphabet,
            SystemKind::HigherBlock {
                base: base.clone(),
                k,
            },
            base.caps,
        );
        sys.finish(base.points.clone())
    }

    /// For a block presentation, the base system and block length.
    pub fn block_base(&self) -> Option<(&Arc<SubshiftSystem>, usize)> {
        match &self.kind {
            SystemKind::HigherBlock { base, k } => Some((base, *k)),
            _ => None,
        }
    }

    /// Block-codes a base word of length `n + k - 1` into a word of length `n`.
    pub fn encode_blocks(&self, base_word: &[Letter]) -> Result<Word> {
        let (base, k) = self.block_base().ok_or_else(|| {
            Error::UnsupportedSystem(format!("{} is not a block presentation", self.name))
        })?;
        let blocks = base.words(k)?;
        base_word
            .windows(k)
            .map(|b| {
                blocks
                    .position(b)
                    .map(|i| i as Letter)
                    .ok_or_else(|| Error::NotClosed {
                        word: base.render(b),
                    })
            })
            .collect()
    }

    /// Inverse of [`encode_blocks`](Self::encode_blocks) on words of the
    /// block language.
    pub fn decode_blocks(&self, w: &[Letter]) -> Result<Word> {
        let (base, k) = self.block_base().ok_or_else(|| {
            Error::UnsupportedSystem(format!("{} is not a block presentation", self.name))
        })?;
        let blocks = base.words(k)?;
        let Some(&first) = w.first() else {
            return Ok(Vec::new());
        };
        let mut out = blocks.words()[first as usize].clone();
        for &c in &w[1..] {
            out.push(blocks.words()[c as usize][k - 1]);
        }
        Ok(out)
    }

    fn finish(mut self, points: Vec<PointHandle>) -> Result<Arc<Self>> {
        for p in &points {
            p.validate(&self)?;
        }
        self.points = points;
        Ok(Arc::new(self))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn kind(&self) -> &SystemKind {
        &self.kind
    }

    pub fn points(&self) -> &[PointHandle] {
        &self.points
    }

    pub fn caps(&self) -> LanguageCaps {
        self.caps
    }

    pub fn substitution_rule(&self) -> Option<&Substitution> {
        match &self.kind {
            SystemKind::Substitution(s) => Some(s),
            _ => None,
        }
    }

    pub fn rotation_number(&self) -> Option<&QuadReal> {
        match &self.kind {
            SystemKind::Sturmian { alpha } => Some(alpha),
            _ => None,
        }
    }

    /// True for the kinds carrying a unique invariant measure.
    pub fn is_uniquely_ergodic(&self) -> bool {
        match &self.kind {
            SystemKind::Sft { .. } => false,
            SystemKind::HigherBlock { base, .. } => base.is_uniquely_ergodic(),
            _ => true,
        }
    }

    pub fn render(&self, w: &[Letter]) -> String {
        self.alphabet.render(w)
    }

    /// The length-`n` factors of the subshift, sorted.
    pub fn words(&self, n: usize) -> Result<Arc<Language>> {
        if let Some(l) = self.languages.lock().unwrap().get(&n) {
            return Ok(l.clone());
        }
        if n > self.caps.max_len {
            return Err(Error::ResourceCap(format!(
                "word length {n} exceeds {}",
                self.caps.max_len
            )));
        }
        let set = match &self.kind {
            SystemKind::Sturmian { alpha } => sturmian_words(alpha, n),
            SystemKind::Substitution(sub) => self.substitution_words(sub, n)?,
            SystemKind::Sft { .. } => self.sft_words(n)?,
            SystemKind::HigherBlock { base, k } => {
                if n == 0 {
                    BTreeSet::from([Vec::new()])
                } else {
                    let mut set = BTreeSet::new();
                    for w in base.words(n + k - 1)?.words() {
                        set.insert(self.encode_blocks(w)?);
                    }
                    set
                }
            }
        };
        if set.len() > self.caps.max_words {
            return Err(Error::ResourceCap(format!(
                "{} words of length {n} exceed {}",
                set.len(),
                self.caps.max_words
            )));
        }
        let lang = Arc::new(Language::from_set(n, set));
        self.languages.lock().unwrap().insert(n, lang.clone());
        Ok(lang)
    }

    pub fn is_word(&self, w: &[Letter]) -> Result<bool> {
        Ok(self.words(w.len())?.contains(w))
    }

    fn substitution_words(&self, sub: &Substitution, n: usize) -> Result<BTreeSet<Word>> {
        let mut set = BTreeSet::new();
        if n == 0 {
            set.insert(Vec::new());
            return Ok(set);
        }
        if n == 1 {
            for a in self.alphabet.letters() {
                set.insert(vec![a]);
            }
            return Ok(set);
        }
        let mut j = 0;
        while sub.min_power_len(j) + 1 < n {
            j += 1;
        }
        for pair in &self.pairs {
            let image = sub.power_image(pair, j);
            if image.len() > self.caps.max_len * 64 {
                return Err(Error::ResourceCap("substitution expansion too long".into()));
            }
            for f in image.windows(n) {
                set.insert(f.to_vec());
            }
        }
        Ok(set)
    }

    fn sft_words(&self, n: usize) -> Result<BTreeSet<Word>> {
        let g = self.sft.as_ref().expect("sft graph");
        let mut set = BTreeSet::new();
        if n <= g.m {
            for v in &g.vertices {
                set.insert(v[..n].to_vec());
            }
            return Ok(set);
        }
        let prev = self.words(n - 1)?;
        for w in prev.words() {
            for c in self.alphabet.letters() {
                let mut next = w.clone();
                next.push(c);
                let tail = &next[next.len() - g.m..];
                let edge = &next[next.len() - g.m - 1..];
                if g.vertices.contains(tail) && sft_edge_ok(self, edge) {
                    set.insert(next);
                }
            }
        }
        Ok(set)
    }
}

/// Single-character names for `n` block letters.
fn block_symbols(n: usize) -> Result<Vec<char>> {
    let pool: Vec<char> = ('A'..='Z')
        .chain('a'..='z')
        .chain('0'..='9')
        .chain('\u{3b1}'..='\u{3c9}')
        .chain('\u{391}'..='\u{3a9}')
        .filter(|c| c.is_alphanumeric())
        .collect();
    if n > pool.len() {
        return Err(Error::ResourceCap(format!(
            "{n} block letters exceed {} symbols",
            pool.len()
        )));
    }
    Ok(pool[..n].to_vec())
}

fn sft_edge_ok(sys: &SubshiftSystem, window: &[Letter]) -> bool {
    match &sys.kind {
        SystemKind::Sft { forbidden } => !contains_any(window, forbidden),
        _ => true,
    }
}

fn contains_any(w: &[Letter], forbidden: &[Word]) -> bool {
    forbidden
        .iter()
        .any(|f| f.len() <= w.len() && w.windows(f.len()).any(|x| x == f.as_slice()))
}

fn build_sft_graph(alphabet: &Alphabet, forbidden: &[Word]) -> SftGraph {
    let m = forbidden
        .iter()
        .map(|f| f.len())
        .max()
        .unwrap_or(1)
        .saturating_sub(1)
        .max(1);
    let mut vertices: BTreeSet<Word> = BTreeSet::new();
    let mut frontier: Vec<Word> = vec![Vec::new()];
    for _ in 0..m {
        let mut next = Vec::new();
        for w in &frontier {
            for c in alphabet.letters() {
                let mut x = w.clone();
                x.push(c);
                if !contains_any(&x, forbidden) {
                    next.push(x);
                }
            }
        }
        frontier = next;
    }
    vertices.extend(frontier);
    // prune to the essential graph: vertices with a predecessor and a successor
    loop {
        let edge_ok = |u: &Word, c: Letter| {
            let mut x = u.clone();
            x.push(c);
            !contains_any(&x, forbidden) && vertices.contains(&x[1..])
        };
        let keep: BTreeSet<Word> = vertices
            .iter()
            .filter(|v| {
                let has_out = alphabet.letters().any(|c| edge_ok(v, c));
                let has_in = alphabet.letters().any(|c| {
                    let mut u = vec![c];
                    u.extend_from_slice(&v[..m - 1]);
                    vertices.contains(&u) && edge_ok(&u, v[m - 1])
                });
                has_out && has_in
            })
            .cloned()
            .collect();
        if keep.len() == vertices.len() {
            break;
        }
        vertices = keep;
    }
    SftGraph { m, vertices }
}

/// Coding of `t, t+α, …, t+(n-1)α`.
pub(crate) fn rotation_coding(alpha: &QuadReal, t: &QuadReal, n: usize) -> Word {
    let mut out = Vec::with_capacity(n);
    let mut s = t.fract();
    for _ in 0..n {
        out.push(if s < *alpha { 0 } else { 1 });
        s = (&s + alpha).fract();
    }
    out
}

/// `⌊mα⌋`, in floating point unless `mα` is within reach of an integer.
fn floor_mul(alpha: &QuadReal, alpha_f: f64, m: i64) -> i64 {
    if m == 0 {
        return 0;
    }
    let f = m as f64 * alpha_f;
    let r = f - f.floor();
    if r > 1e-9 && r < 1.0 - 1e-9 {
        return f.floor() as i64;
    }
    let exact = (&QuadReal::from_int(m) * alpha).floor();
    exact.to_i64().expect("floor fits in i64")
}

/// Letters `m = from, …, to - 1` of the coding of `0`: `0` iff `{mα} < α`,
/// i.e. iff `⌊mα⌋ - ⌊(m-1)α⌋ = 1`.
fn zero_orbit_coding(alpha: &QuadReal, from: i64, to: i64) -> Word {
    let af = alpha.to_f64();
    let mut prev = floor_mul(alpha, af, from - 1);
    let mut out = Vec::with_capacity((to - from).max(0) as usize);
    for m in from..to {
        let cur = floor_mul(alpha, af, m);
        out.push(if cur - prev == 1 { 0 } else { 1 });
        prev = cur;
    }
    out
}

/// The `n + 1` arcs of the circle on which the first `n` letters of the
/// coding are constant, as `(start, length, word)` sorted by start.
///
/// The arcs start at the cuts `{-kα}`, `-1 ≤ k < n`; the arc starting at
/// `{-kα}` is coded by letters `-k, …, n-1-k` of the coding of `0`.
pub(crate) fn sturmian_arcs(alpha: &QuadReal, n: usize) -> Vec<(QuadReal, QuadReal, Word)> {
    if n == 0 {
        return vec![(QuadReal::zero(), QuadReal::one(), Vec::new())];
    }
    let n_i = n as i64;
    let af = alpha.to_f64();
    let u = zero_orbit_coding(alpha, 1 - n_i, n_i + 1);
    // {-kα} = ⌈kα⌉ - kα for k ≠ 0
    let cut = |k: i64| -> QuadReal {
        if k == 0 {
            QuadReal::zero()
        } else {
            &QuadReal::from_int(floor_mul(alpha, af, k) + 1) - &(&QuadReal::from_int(k) * alpha)
        }
    };
    let approx = |k: i64| -> f64 {
        if k == 0 {
            0.0
        } else {
            (floor_mul(alpha, af, k) + 1) as f64 - k as f64 * af
        }
    };
    let mut ks: Vec<(f64, i64)> = (-1..n_i).map(|k| (approx(k), k)).collect();
    ks.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut cuts: Vec<(QuadReal, i64)> = ks.iter().map(|&(_, k)| (cut(k), k)).collect();
    // near-ties in floating point are settled exactly
    if ks.windows(2).any(|p| p[1].0 - p[0].0 <= 1e-9) {
        cuts.sort_by(|a, b| a.0.cmp(&b.0));
    }
    let mut arcs = Vec::with_capacity(cuts.len());
    for i in 0..cuts.len() {
        let end = if i + 1 < cuts.len() {
            cuts[i + 1].0.clone()
        } else {
            &cuts[0].0 + &QuadReal::one()
        };
        let (c, k) = &cuts[i];
        let len = &end - c;
        let off = (-k - (1 - n_i)) as usize;
        arcs.push((c.clone(), len, u[off..off + n].to_vec()));
    }
    arcs
}

fn sturmian_words(alpha: &QuadReal, n: usize) -> BTreeSet<Word> {
    if n == 0 {
        return BTreeSet::from([Vec::new()]);
    }
    let u = zero_orbit_coding(alpha, 1 - n as i64, n as i64 + 1);
    u.windows(n).map(<[Letter]>::to_vec).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sturmian() -> Arc<SubshiftSystem> {
        SubshiftSystem::sturmian("s", QuadReal::new(-1, 1, 2, 1), vec![]).unwrap()
    }

    fn example1() -> Arc<SubshiftSystem> {
        let a = Alphabet::new(['0', '1']).unwrap();
        SubshiftSystem::substitution("ex1", a, vec![vec![0, 0, 1, 1], vec![0, 1, 0, 1]], vec![])
            .unwrap()
    }

    /// Brute force: every window of the rotation coding of many orbit points.
    fn rotation_factors_brute(alpha: &QuadReal, n: usize, samples: usize) -> BTreeSet<Word> {
        let long = rotation_coding(alpha, &QuadReal::from_ratio(1, 7), samples + n);
        long.windows(n).map(|w| w.to_vec()).collect()
    }

    #[test]
    fn sturmian_letters() {
        let s = sturmian();
        assert_eq!(s.words(1).unwrap().words(), &[vec![0], vec![1]]);
    }

    #[test]
    fn sturmian_complexity_matches_brute_force() {
        let s = sturmian();
        let alpha = s.rotation_number().unwrap().clone();
        assert_eq!(s.words(5).unwrap().len(), 6);
        for n in 1..=12 {
            let brute = rotation_factors_brute(&alpha, n, 400);
            let oracle: BTreeSet<Word> = s.words(n).unwrap().words().iter().cloned().collect();
            assert_eq!(oracle, brute, "n = {n}");
            assert_eq!(oracle.len(), n + 1);
        }
    }

    #[test]
    fn substitution_two_factors() {
        let s = example1();
        let w: Vec<String> = s
            .words(2)
            .unwrap()
            .words()
            .iter()
            .map(|w| s.render(w))
            .collect();
        assert_eq!(w, ["00", "01", "10", "11"]);
    }

    #[test]
    fn substitution_factors_match_iteration() {
        // factors of σ^k(0) for large k give the language for small n
        let s = example1();
        let sub = s.substitution_rule().unwrap();
        let long = sub.power_image(&[1, 0], 6);
        for n in 1..=10 {
            let brute: BTreeSet<Word> = long.windows(n).map(|w| w.to_vec()).collect();
            let oracle: BTreeSet<Word> = s.words(n).unwrap().words().iter().cloned().collect();
            assert_eq!(oracle, brute, "n = {n}");
        }
    }

    #[test]
    fn non_primitive_rejected() {
        let a = Alphabet::new(['0', '1']).unwrap();
        let err = SubshiftSystem::substitution("x", a, vec![vec![0, 0], vec![1, 1]], vec![]);
        assert!(matches!(err, Err(Error::InvalidSystem(_))));
    }

    #[test]
    fn periodic_substitution_rejected() {
        let a = Alphabet::new(['0', '1']).unwrap();
        let err = SubshiftSystem::substitution("x", a, vec![vec![0, 1, 0], vec![1, 0, 1]], vec![]);
        assert!(matches!(err, Err(Error::InvalidSystem(_))));
    }

    #[test]
    fn rational_rotation_rejected() {
        let err = SubshiftSystem::sturmian("x", QuadReal::from_ratio(1, 3), vec![]);
        assert!(err.is_err());
    }

    #[test]
    fn golden_mean_sft() {
        let a = Alphabet::new(['0', '1']).unwrap();
        let s = SubshiftSystem::sft("gm", a, vec![vec![1, 1]]).unwrap();
        // Fibonacci counts
        let counts: Vec<usize> = (1..=8).map(|n| s.words(n).unwrap().len()).collect();
        assert_eq!(counts, [2, 3, 5, 8, 13, 21, 34, 55]);
    }

    #[test]
    fn sft_prunes_dead_ends() {
        // "01" forbidden and "10" forbidden: only constant sequences survive
        let a = Alphabet::new(['0', '1', '2']).unwrap();
        let s = SubshiftSystem::sft(
            "c",
            a,
            vec![
                vec![0, 1],
                vec![1, 0],
                vec![2, 0],
                vec![2, 1],
                vec![0, 2],
                vec![1, 2],
                vec![2, 2],
            ],
        )
        .unwrap();
        let w: Vec<Word> = s.words(3).unwrap().words().to_vec();
        assert_eq!(w, vec![vec![0, 0, 0], vec![1, 1, 1]]);
    }

    #[test]
    fn alphabet_rejects_duplicates_and_reserved() {
        assert!(Alphabet::new(['a', 'a']).is_err());
        assert!(Alphabet::new(['.', 'a']).is_err());
        assert!(Alphabet::new(Vec::<char>::new()).is_err());
    }
}
