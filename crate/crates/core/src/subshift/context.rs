//! Adaptive partition of `X` into cylinders around coordinate 0.
//!
//! A probe inspects a window (with the index of coordinate 0) and either
//! decides or asks for more coordinates. Windows are extended letter by
//! letter over the language, so the leaves form a clopen partition of `X`.

use super::{Cylinder, Letter, SubshiftSystem, Word};
use crate::error::{Error, Result};

pub(crate) enum Probe<T> {
    /// Coordinates `[-left, right]` are required.
    Need {
        left: usize,
        right: usize,
    },
    Done(T),
}

pub(crate) fn explore<T>(
    sys: &SubshiftSystem,
    max_len: usize,
    mut probe: impl FnMut(&[Letter], usize) -> Result<Probe<T>>,
) -> Result<Vec<(Cylinder, T)>> {
    let mut out = Vec::new();
    let mut stack: Vec<(Word, usize, usize, usize)> = sys
        .words(1)?
        .words()
        .iter()
        .rev()
        .map(|w| (w.clone(), 0, 0, 0))
        .collect();
    while let Some((w, o, need_l, need_r)) = stack.pop() {
        let right_have = w.len() - 1 - o;
        let (need_l, need_r) = if o >= need_l && right_have >= need_r {
            match probe(&w, o)? {
                Probe::Done(v) => {
                    out.push((Cylinder::new(w, -(o as i64)), v));
                    continue;
                }
                Probe::Need { left, right } => {
                    if o >= left && right_have >= right {
                        return Err(Error::ResourceCap(
                            "context probe asked for coordinates it already has".into(),
                        ));
                    }
                    // grow geometrically so that long orbits are not re-simulated
                    // once per added letter; a finer partition is harmless
                    let grow = |have: usize, need: usize| {
                        if need > have {
                            need.max(2 * have + 1)
                        } else {
                            have
                        }
                    };
                    let (gl, gr) = (grow(o, left), grow(right_have, right));
                    if gl + gr < max_len {
                        (gl, gr)
                    } else {
                        (left, right)
                    }
                }
            }
        } else {
            (need_l, need_r)
        };
        if w.len() >= max_len {
            return Err(Error::ResourceCap(format!(
                "context window exceeds {max_len}"
            )));
        }
        let next = sys.words(w.len() + 1)?;
        let mut children = Vec::new();
        for c in sys.alphabet().letters().rev() {
            if o < need_l {
                let mut x = Vec::with_capacity(w.len() + 1);
                x.push(c);
                x.extend_from_slice(&w);
                if next.contains(&x) {
                    children.push((x, o + 1, need_l, need_r));
                }
            } else {
                let mut x = w.clone();
                x.push(c);
                if next.contains(&x) {
                    children.push((x, o, need_l, need_r));
                }
            }
        }
        stack.extend(children);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::QuadReal;

    #[test]
    fn leaves_partition_the_space() {
        let sys = SubshiftSystem::sturmian("s", QuadReal::new(-1, 1, 2, 1), vec![]).unwrap();
        // ask for [-1, 2] everywhere, except stop early after a 1 at coordinate 0
        let leaves = explore(&sys, 16, |w, o| {
            if w[o] == 1 && w.len() - o > 1 {
                return Ok(Probe::Done(()));
            }
            if o >= 1 && w.len() - 1 - o >= 2 {
                Ok(Probe::Done(()))
            } else {
                Ok(Probe::Need {
                    left: 1,
                    right: if w[o] == 1 { 1 } else { 2 },
                })
            }
        })
        .unwrap();
        let total: usize = leaves.len();
        assert!(total > 0);
        // every length-4 window at -1 refines exactly one leaf
        for w in sys.words(4).unwrap().words() {
            let hits = leaves
                .iter()
                .filter(|(c, _)| {
                    let off = (c.start + 1) as usize;
                    c.start >= -1 && c.end() <= 2 && w[off..off + c.word.len()] == c.word[..]
                })
                .count();
            assert_eq!(hits, 1);
        }
    }
}
