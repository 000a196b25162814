use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use super::{ClopenSet, Letter, SubshiftSystem, Word};
use crate::error::{Error, Result};

/// A letter-to-word substitution rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    images: Vec<Word>,
}

impl Substitution {
    pub fn new(alphabet_len: usize, images: Vec<Word>) -> Result<Self> {
        if images.len() != alphabet_len {
            return Err(Error::InvalidSystem(format!(
                "substitution has {} images for {alphabet_len} letters",
                images.len()
            )));
        }
        if images.iter().any(|w| w.is_empty()) {
            return Err(Error::InvalidSystem("substitution image is empty".into()));
        }
        if images.iter().flatten().any(|&l| l as usize >= alphabet_len) {
            return Err(Error::InvalidSystem(
                "substitution image leaves the alphabet".into(),
            ));
        }
        Ok(Substitution { images })
    }

    pub fn image(&self, a: Letter) -> &[Letter] {
        &self.images[a as usize]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn apply(&self, w: &[Letter]) -> Word {
        w.iter()
            .flat_map(|&a| self.images[a as usize].iter().copied())
            .collect()
    }

    pub fn power_image(&self, w: &[Letter], k: usize) -> Word {
        let mut out = w.to_vec();
        for _ in 0..k {
            out = self.apply(&out);
        }
        out
    }

    /// Lengths `|σ^k(a)|` for every letter.
    pub fn power_lengths(&self, k: usize) -> Vec<u128> {
        let mut lens = vec![1u128; self.images.len()];
        for _ in 0..k {
            lens = self
                .images
                .iter()
                .map(|img| img.iter().map(|&b| lens[b as usize]).sum())
                .collect();
        }
        lens
    }

    pub fn min_power_len(&self, k: usize) -> usize {
        self.power_lengths(k).into_iter().min().unwrap_or(0) as usize
    }

    /// `M[a][b]` = occurrences of `a` in `σ(b)`.
    pub fn incidence(&self) -> Vec<Vec<u64>> {
        let n = self.images.len();
        let mut m = vec![vec![0u64; n]; n];
        for (b, img) in self.images.iter().enumerate() {
            for &a in img {
                m[a as usize][b] += 1;
            }
        }
        m
    }

    /// Some power of the incidence matrix is strictly positive. Wielandt's
    /// bound `(n-1)² + 1` limits the search.
    pub fn is_primitive(&self) -> bool {
        let n = self.images.len();
        let pattern: Vec<Vec<bool>> = self
            .incidence()
            .iter()
            .map(|row| row.iter().map(|&x| x > 0).collect())
            .collect();
        let mut p = pattern.clone();
        for _ in 0..(n - 1) * (n - 1) + 1 {
            if p.iter().all(|row| row.iter().all(|&x| x)) {
                return true;
            }
            p = bool_mul(&p, &pattern);
        }
        p.iter().all(|row| row.iter().all(|&x| x))
    }

    /// Length-2 factors of the subshift: the least set containing the
    /// 2-factors inside each `σ(c)` and closed under taking 2-factors of
    /// `σ(ab)`.
    pub fn two_factors(&self) -> Vec<Word> {
        let mut set: BTreeSet<Word> = BTreeSet::new();
        for img in &self.images {
            for f in img.windows(2) {
                set.insert(f.to_vec());
            }
        }
        loop {
            let mut next = set.clone();
            for ab in &set {
                for f in self.apply(ab).windows(2) {
                    next.insert(f.to_vec());
                }
            }
            if next.len() == set.len() {
                return set.into_iter().collect();
            }
            set = next;
        }
    }
}

/// Radius cap for the recognizability search in [`tile_set`].
const MAX_TILE_RADIUS: usize = 64;

/// The points whose coordinate 0 sits at index `pos` of a `σ(c)` block in
/// their (unique) desubstitution. The radius of the determining window is
/// found by growing it until every window word has a single label.
pub fn tile_set(sys: &Arc<SubshiftSystem>, c: Letter, pos: usize) -> Result<ClopenSet> {
    let sub = sys
        .substitution_rule()
        .ok_or_else(|| Error::UnsupportedSystem("tiles need a substitution subshift".into()))?;
    if c as usize >= sub.images.len() || pos >= sub.image(c).len() {
        return Err(Error::Config(format!(
            "no tile position {pos} in the image of letter {c}"
        )));
    }
    let min_len = sub.images.iter().map(|w| w.len()).min().unwrap_or(1);
    'radius: for r in 0..=MAX_TILE_RADIUS {
        let width = 2 * r + 1;
        let lang = sys.words(width)?;
        let mut m = width / min_len + 2;
        loop {
            let mut labels: HashMap<Word, (Letter, usize)> = HashMap::new();
            for u in sys.words(m)?.words() {
                let mut tags = Vec::new();
                for &a in u {
                    tags.extend((0..sub.image(a).len()).map(|i| (a, i)));
                }
                let image = sub.apply(u);
                for centre in r..image.len().saturating_sub(r) {
                    let window = image[centre - r..=centre + r].to_vec();
                    let tag = tags[centre];
                    if *labels.entry(window).or_insert(tag) != tag {
                        continue 'radius;
                    }
                }
            }
            if labels.len() == lang.len() {
                let words = labels
                    .into_iter()
                    .filter(|(_, tag)| *tag == (c, pos))
                    .map(|(w, _)| w);
                return ClopenSet::from_words(sys, -(r as i64), width, words);
            }
            m += 1;
        }
    }
    Err(Error::ResourceCap(format!(
        "substitution not recognizable within radius {MAX_TILE_RADIUS}"
    )))
}

fn bool_mul(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).any(|k| a[i][k] && b[k][j])).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lengths_and_incidence() {
        let s = Substitution::new(2, vec![vec![0, 0, 1, 1], vec![0, 1, 0, 1]]).unwrap();
        assert_eq!(s.power_lengths(3), vec![64, 64]);
        assert_eq!(s.incidence(), vec![vec![2, 2], vec![2, 2]]);
        assert!(s.is_primitive());
        assert_eq!(s.power_image(&[0], 2).len(), 16);
    }

    #[test]
    fn fibonacci_primitive_needs_a_power() {
        let s = Substitution::new(2, vec![vec![0, 1], vec![0]]).unwrap();
        assert!(s.is_primitive());
        assert_eq!(s.two_factors(), vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn rejects_bad_images() {
        assert!(Substitution::new(2, vec![vec![0]]).is_err());
        assert!(Substitution::new(2, vec![vec![], vec![0]]).is_err());
        assert!(Substitution::new(2, vec![vec![2], vec![0]]).is_err());
    }
}
