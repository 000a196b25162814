use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::{Letter, PointHandle, SubshiftSystem, Word};
use crate::error::{Error, Result};

/// The set of points with `x_start … x_{start+|word|-1} = word`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cylinder {
    pub word: Word,
    pub start: i64,
}

impl Cylinder {
    pub fn new(word: Word, start: i64) -> Self {
        Cylinder { word, start }
    }

    /// Last covered coordinate (inclusive).
    pub fn end(&self) -> i64 {
        self.start + self.word.len() as i64 - 1
    }
}

/// A clopen subset of a subshift: the union of the cylinders `(w, start)`
/// for `w` in `words`, all of length `len`.
///
/// Sets are kept trimmed (no coordinate at either end of the window is
/// redundant); `X` and `∅` use the empty window. Equality is extensional.
#[derive(Clone)]
pub struct ClopenSet {
    sys: Arc<SubshiftSystem>,
    start: i64,
    len: usize,
    words: BTreeSet<Word>,
}

impl ClopenSet {
    pub fn empty(sys: &Arc<SubshiftSystem>) -> Self {
        ClopenSet {
            sys: sys.clone(),
            start: 0,
            len: 0,
            words: BTreeSet::new(),
        }
    }

    pub fn full(sys: &Arc<SubshiftSystem>) -> Self {
        ClopenSet {
            sys: sys.clone(),
            start: 0,
            len: 0,
            words: [Vec::new()].into_iter().collect(),
        }
    }

    /// Cylinder set; empty when `word` is not in the language.
    pub fn cylinder(sys: &Arc<SubshiftSystem>, word: &[Letter], start: i64) -> Result<Self> {
        if word.is_empty() {
            return Ok(Self::full(sys));
        }
        if !sys.is_word(word)? {
            return Ok(Self::empty(sys));
        }
        Self::from_words(sys, start, word.len(), [word.to_vec()])
    }

    /// Parses dotted notation such as `"01.1"` (the letter before the dot
    /// is coordinate 0).
    pub fn dotted(sys: &Arc<SubshiftSystem>, s: &str) -> Result<Self> {
        let (w, start) = parse_dotted(sys, s)?;
        Self::cylinder(sys, &w, start)
    }

    /// Union of the cylinders `(w, start)`; words outside the language are
    /// dropped.
    pub fn from_words(
        sys: &Arc<SubshiftSystem>,
        start: i64,
        len: usize,
        words: impl IntoIterator<Item = Word>,
    ) -> Result<Self> {
        let lang = sys.words(len)?;
        let words: BTreeSet<Word> = words
            .into_iter()
            .filter(|w| {
                assert_eq!(w.len(), len, "window word of wrong length");
                lang.contains(w)
            })
            .collect();
        let mut set = ClopenSet {
            sys: sys.clone(),
            start,
            len,
            words,
        };
        set.trim()?;
        Ok(set)
    }

    pub fn from_cylinders(sys: &Arc<SubshiftSystem>, cyls: &[Cylinder]) -> Result<Self> {
        let mut acc = Self::empty(sys);
        for c in cyls {
            acc = acc.union(&Self::cylinder(sys, &c.word, c.start)?)?;
        }
        Ok(acc)
    }

    pub fn system(&self) -> &Arc<SubshiftSystem> {
        &self.sys
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn window_len(&self) -> usize {
        self.len
    }

    pub fn words(&self) -> &BTreeSet<Word> {
        &self.words
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.len == 0 && !self.words.is_empty()
    }

    pub fn cylinders(&self) -> Vec<Cylinder> {
        self.words
            .iter()
            .map(|w| Cylinder::new(w.clone(), self.start))
            .collect()
    }

    fn same_system(&self, other: &ClopenSet) {
        assert!(
            Arc::ptr_eq(&self.sys, &other.sys),
            "clopen sets over different systems"
        );
    }

    /// Drops coordinates at the window ends that the set does not depend on.
    fn trim(&mut self) -> Result<()> {
        if self.words.is_empty() {
            self.start = 0;
            self.len = 0;
            return Ok(());
        }
        loop {
            if self.len == 0 {
                return Ok(());
            }
            let lang = self.sys.words(self.len)?;
            let left: BTreeSet<Word> = self.words.iter().map(|w| w[1..].to_vec()).collect();
            let saturated_left = lang
                .words()
                .iter()
                .filter(|w| left.contains(&w[1..]))
                .count()
                == self.words.len();
            if saturated_left {
                self.words = left;
                self.start += 1;
                self.len -= 1;
                continue;
            }
            let right: BTreeSet<Word> = self
                .words
                .iter()
                .map(|w| w[..w.len() - 1].to_vec())
                .collect();
            let saturated_right = lang
                .words()
                .iter()
                .filter(|w| right.contains(&w[..w.len() - 1]))
                .count()
                == self.words.len();
            if saturated_right {
                self.words = right;
                self.len -= 1;
                continue;
            }
            return Ok(());
        }
    }

    /// The window words of the set on the larger window `[start, start+len)`.
    pub fn refine(&self, start: i64, len: usize) -> Result<BTreeSet<Word>> {
        if self.words.is_empty() {
            return Ok(BTreeSet::new());
        }
        let lang = self.sys.words(len)?;
        if self.len == 0 {
            return Ok(lang.words().iter().cloned().collect());
        }
        let off = self.start - start;
        assert!(
            off >= 0 && off as usize + self.len <= len,
            "refinement window does not cover the set"
        );
        let off = off as usize;
        Ok(lang
            .words()
            .iter()
            .filter(|w| self.words.contains(&w[off..off + self.len]))
            .cloned()
            .collect())
    }

    /// Whether the cylinder `(window, start)` lies inside the set; the window
    /// must cover the set's span.
    pub fn contains_window(&self, window: &[Letter], start: i64) -> Result<bool> {
        if self.len == 0 {
            return Ok(!self.words.is_empty());
        }
        let off = self.start - start;
        if off < 0 || off as usize + self.len > window.len() {
            return Err(Error::WordTooShort {
                need: format!("[{}, {}]", self.start, self.start + self.len as i64 - 1),
                got: format!("[{}, {}]", start, start + window.len() as i64 - 1),
            });
        }
        let off = off as usize;
        Ok(self.words.contains(&window[off..off + self.len]))
    }

    pub fn contains_point(&self, p: &PointHandle) -> Result<bool> {
        if self.len == 0 {
            return Ok(!self.words.is_empty());
        }
        let w = p.coords(&self.sys, self.start, self.start + self.len as i64 - 1)?;
        Ok(self.words.contains(&w))
    }

    /// Smallest window covering both sets.
    fn hull(&self, other: &ClopenSet) -> (i64, usize) {
        match (self.len, other.len) {
            (0, _) => (other.start, other.len),
            (_, 0) => (self.start, self.len),
            _ => {
                let s = self.start.min(other.start);
                let e = (self.start + self.len as i64).max(other.start + other.len as i64);
                (s, (e - s) as usize)
            }
        }
    }

    fn combine(&self, other: &ClopenSet, op: impl Fn(bool, bool) -> bool) -> Result<ClopenSet> {
        self.same_system(other);
        let (start, len) = self.hull(other);
        let a = self.refine(start, len)?;
        let b = other.refine(start, len)?;
        let lang = self.sys.words(len)?;
        let words = lang
            .words()
            .iter()
            .filter(|w| op(a.contains(*w), b.contains(*w)))
            .cloned();
        ClopenSet::from_words(&self.sys, start, len, words)
    }

    pub fn union(&self, other: &ClopenSet) -> Result<ClopenSet> {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &ClopenSet) -> Result<ClopenSet> {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &ClopenSet) -> Result<ClopenSet> {
        self.combine(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> Result<ClopenSet> {
        ClopenSet::full(&self.sys).difference(self)
    }

    /// `φ^k(A)`.
    pub fn shift(&self, k: i64) -> ClopenSet {
        let mut out = self.clone();
        if out.len > 0 {
            out.start -= k;
        }
        out
    }

    pub fn equals(&self, other: &ClopenSet) -> Result<bool> {
        self.same_system(other);
        if self.is_empty() || other.is_empty() {
            return Ok(self.is_empty() == other.is_empty());
        }
        let (start, len) = self.hull(other);
        Ok(self.refine(start, len)? == other.refine(start, len)?)
    }

    pub fn is_disjoint(&self, other: &ClopenSet) -> Result<bool> {
        Ok(self.intersect(other)?.is_empty())
    }

    pub fn is_subset(&self, other: &ClopenSet) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    /// Whether all the sets are pairwise disjoint.
    pub fn pairwise_disjoint(sets: &[ClopenSet]) -> Result<bool> {
        for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                if !sets[i].is_disjoint(&sets[j])? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

impl PartialEq for ClopenSet {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other).unwrap_or(false)
    }
}

impl fmt::Debug for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ClopenSet({self})")
    }
}

/// Renders as a union of dotted cylinders, `X` or `empty`.
impl fmt::Display for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "empty");
        }
        if self.is_full() {
            return write!(f, "X");
        }
        let parts: Vec<String> = self
            .words
            .iter()
            .map(|w| render_cylinder(&self.sys, w, self.start))
            .collect();
        write!(f, "{}", parts.join(" | "))
    }
}

/// Dotted form when coordinate 0 or 1 is inside the window, otherwise a
/// shifted dotted cylinder.
pub(crate) fn render_cylinder(sys: &SubshiftSystem, w: &[Letter], start: i64) -> String {
    let text = sys.render(w);
    let end = start + w.len() as i64 - 1;
    if start <= 1 && end >= 0 {
        let cut = (1 - start) as usize;
        let (l, r) = text.split_at(cut.min(text.len()));
        format!("[{l}.{r}]")
    } else {
        // [w.] starts at 1-|w|; φ^k moves it to 1-|w|-k
        let k = 1 - w.len() as i64 - start;
        format!("shift([{text}.], {k})")
    }
}

/// Parses `"ab.c"` into the word and its starting coordinate.
pub(crate) fn parse_dotted(sys: &SubshiftSystem, s: &str) -> Result<(Word, i64)> {
    let s = s.trim().trim_start_matches('[').trim_end_matches(']');
    let (l, r) = s.split_once('.').ok_or_else(|| Error::Parse {
        pos: 0,
        msg: format!("cylinder {s:?} lacks a dot"),
    })?;
    let mut w = sys.alphabet().parse(l)?;
    let start = 1 - w.len() as i64;
    w.extend(sys.alphabet().parse(r)?);
    Ok((w, start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::QuadReal;

    fn sturmian() -> Arc<SubshiftSystem> {
        SubshiftSystem::sturmian("s", QuadReal::new(-1, 1, 2, 1), vec![]).unwrap()
    }

    #[test]
    fn dotted_notation() {
        let s = sturmian();
        let u = ClopenSet::dotted(&s, "[0.]").unwrap();
        assert_eq!((u.start(), u.window_len()), (0, 1));
        // 111 is not a factor for α > 1/3, so [011.] trims to [11.]
        let v = ClopenSet::dotted(&s, "[011.]").unwrap();
        assert_eq!(v.start(), -1);
        assert_eq!(v.to_string(), "[11.]");
        assert_eq!(ClopenSet::dotted(&s, "[.0]").unwrap().start(), 1);
        assert_eq!(ClopenSet::dotted(&s, "[.0]").unwrap().to_string(), "[.0]");
    }

    #[test]
    fn shift_moves_the_window_left() {
        let s = sturmian();
        let u = ClopenSet::dotted(&s, "0.").unwrap();
        // φ(U) = {x : x_{-1} = 0} = [0.1]-side cylinder at start -1
        assert_eq!(u.shift(1).start(), -1);
        let phi_u = ClopenSet::cylinder(&s, &[0, 1], -1).unwrap();
        // after 0 always comes 1 for α < 1/2, so φ(U) = [01.]
        assert!(u.shift(1).equals(&phi_u).unwrap());
        assert!(u.is_disjoint(&u.shift(1)).unwrap());
    }

    #[test]
    fn complement_and_intersection() {
        let s = sturmian();
        let u = ClopenSet::dotted(&s, "0.").unwrap();
        assert!(u.intersect(&u.complement().unwrap()).unwrap().is_empty());
        assert!(u.union(&u.complement().unwrap()).unwrap().is_full());
        let not_in_lang = ClopenSet::cylinder(&s, &[0, 0], 0).unwrap();
        assert!(not_in_lang.is_empty());
    }

    #[test]
    fn refinement_is_lossless() {
        let s = sturmian();
        let u = ClopenSet::dotted(&s, "1.1").unwrap();
        let refined = u.refine(-3, 8).unwrap();
        let back = ClopenSet::from_words(&s, -3, 8, refined).unwrap();
        assert!(back.equals(&u).unwrap());
        assert_eq!(
            (back.start(), back.window_len()),
            (u.start(), u.window_len())
        );
    }

    #[test]
    fn set_algebra_laws() {
        let s = sturmian();
        let a = ClopenSet::dotted(&s, "1.0").unwrap();
        let b = ClopenSet::dotted(&s, "01.").unwrap();
        let c = ClopenSet::dotted(&s, "1.1").unwrap();
        assert!(a.union(&b).unwrap().equals(&b.union(&a).unwrap()).unwrap());
        assert!(a.union(&a).unwrap().equals(&a).unwrap());
        let l = a.union(&b).unwrap().union(&c).unwrap();
        let r = a.union(&b.union(&c).unwrap()).unwrap();
        assert!(l.equals(&r).unwrap());
        let l = a.intersect(&b).unwrap().intersect(&c).unwrap();
        let r = a.intersect(&b.intersect(&c).unwrap()).unwrap();
        assert!(l.equals(&r).unwrap());
    }
}
