use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{rotation_coding, SubshiftSystem, SystemKind, Word};
use crate::error::{Error, Result};
use crate::quad::QuadReal;

/// Upper bound on the length of an evolved substitution word.
const MAX_EVOLVED_LEN: usize = 1 << 24;

/// A computable point of a subshift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointHandle {
    /// The coding of `t, t+α, t+2α, …` (coordinate `i` codes `t + iα`).
    Rotation { t: QuadReal },
    /// The limit of `σ^{kp}(seed)`. `origin` is the index of coordinate 0
    /// inside `seed`; `anchor` is where `seed` reappears inside
    /// `σ^p(seed)`, which nests the iterates around the origin.
    Substitutive {
        seed: Word,
        origin: usize,
        power: usize,
        anchor: usize,
    },
}

impl PointHandle {
    pub fn rotation(t: QuadReal) -> Self {
        PointHandle::Rotation { t }
    }

    /// Builds a substitutive point from a dotted seed like `"1.0"`; the
    /// letter before the dot sits at coordinate 0. Without an explicit
    /// anchor the last admissible occurrence is used.
    pub fn substitutive(
        sys_alphabet: &super::Alphabet,
        sub: &super::Substitution,
        dotted: &str,
        power: usize,
        anchor: Option<usize>,
    ) -> Result<Self> {
        let (l, r) = dotted
            .split_once('.')
            .ok_or_else(|| Error::Config(format!("seed {dotted:?} lacks a dot")))?;
        if l.is_empty() {
            return Err(Error::Config(format!(
                "seed {dotted:?} has no letter at coordinate 0"
            )));
        }
        let mut seed = sys_alphabet.parse(l)?;
        let origin = seed.len() - 1;
        seed.extend(sys_alphabet.parse(r)?);
        if power == 0 {
            return Err(Error::Config("seed power must be positive".into()));
        }
        let image = sub.power_image(&seed, power);
        let admissible: Vec<usize> = (1..image.len())
            .filter(|&a| a + seed.len() < image.len() && image[a..a + seed.len()] == seed[..])
            .collect();
        let anchor = match anchor {
            Some(a) if admissible.contains(&a) => a,
            Some(a) => {
                return Err(Error::Config(format!(
                    "seed {dotted:?} does not reappear at anchor {a} with growth on both sides"
                )))
            }
            None => *admissible.last().ok_or_else(|| {
                Error::Config(format!(
                    "seed {dotted:?} does not nest under the substitution"
                ))
            })?,
        };
        Ok(PointHandle::Substitutive {
            seed,
            origin,
            power,
            anchor,
        })
    }

    pub(crate) fn validate(&self, sys: &SubshiftSystem) -> Result<()> {
        match (self, sys.kind()) {
            (_, SystemKind::HigherBlock { base, .. }) => self.validate(base),
            (PointHandle::Rotation { t }, SystemKind::Sturmian { alpha }) => {
                if t.radicand() != 0 && t.radicand() != alpha.radicand() {
                    return Err(Error::Config(
                        "point parameter outside the field of alpha".into(),
                    ));
                }
                if *t < QuadReal::zero() || *t >= QuadReal::one() {
                    return Err(Error::Config(format!("point parameter {t} not in [0,1)")));
                }
                Ok(())
            }
            (PointHandle::Substitutive { seed, .. }, SystemKind::Substitution(_)) => {
                if !sys.is_word(seed)? {
                    return Err(Error::Config(format!(
                        "seed {} is not in the language",
                        sys.render(seed)
                    )));
                }
                Ok(())
            }
            _ => Err(Error::Config("point kind does not match the system".into())),
        }
    }

    /// Coordinates `x_i … x_j`.
    pub fn coords(&self, sys: &SubshiftSystem, i: i64, j: i64) -> Result<Word> {
        if i > j {
            return Ok(Vec::new());
        }
        match (self, sys.kind()) {
            (_, SystemKind::HigherBlock { base, k }) => {
                sys.encode_blocks(&self.coords(base, i, j + *k as i64 - 1)?)
            }
            (PointHandle::Rotation { t }, SystemKind::Sturmian { alpha }) => {
                let start = t + &(&QuadReal::from_int(i) * alpha);
                Ok(rotation_coding(alpha, &start, (j - i + 1) as usize))
            }
            (
                PointHandle::Substitutive {
                    seed,
                    origin,
                    power,
                    anchor,
                },
                SystemKind::Substitution(sub),
            ) => {
                let head = sub.power_image(seed, *power)[..*anchor].to_vec();
                let mut w = seed.clone();
                let mut o = *origin as i64;
                let mut lens = vec![1u128; sys.alphabet().len()];
                while o + i < 0 || (w.len() as i64 - 1 - o) < j {
                    let shift: u128 = head.iter().map(|&c| lens[c as usize]).sum();
                    o += shift as i64;
                    w = sub.power_image(&w, *power);
                    for _ in 0..*power {
                        lens = sub
                            .images()
                            .iter()
                            .map(|img| img.iter().map(|&b| lens[b as usize]).sum())
                            .collect();
                    }
                    if w.len() > MAX_EVOLVED_LEN {
                        return Err(Error::ResourceCap("substitutive point evolution".into()));
                    }
                }
                Ok(w[(o + i) as usize..=(o + j) as usize].to_vec())
            }
            _ => Err(Error::Config("point kind does not match the system".into())),
        }
    }

    /// For a rotation point, whether `t` lies in `Zα + Z` (the orbit of 0,
    /// where the two boundary codings coincide).
    pub fn on_orbit_of_zero(&self, alpha: &QuadReal) -> bool {
        match self {
            PointHandle::Rotation { t } => rotation_orbit_offset(alpha, t).is_some(),
            _ => false,
        }
    }
}

/// The `k` with `t ∈ kα + Z`, if any.
pub(crate) fn rotation_orbit_offset(alpha: &QuadReal, t: &QuadReal) -> Option<BigInt> {
    let b = alpha.irrational_coeff();
    if b.is_zero() {
        return None;
    }
    if t.radicand() != 0 && t.radicand() != alpha.radicand() {
        return None;
    }
    let k: BigRational = t.irrational_coeff() / b;
    if !k.is_integer() {
        return None;
    }
    let rest = t.rational_part() - &k * alpha.rational_part();
    rest.is_integer().then(|| k.to_integer())
}

/// Decides (rotation) or sanity-checks (substitution) that two points lie
/// on different orbits. For substitutions, checks that `φ^s(x)` and `y`
/// disagree on `[-radius, radius]` for every `|s| ≤ shifts`.
pub fn orbit_distinct(
    sys: &SubshiftSystem,
    x: &PointHandle,
    y: &PointHandle,
    shifts: i64,
    radius: i64,
) -> Result<bool> {
    match (x, y, sys.kind()) {
        (
            PointHandle::Rotation { t: s },
            PointHandle::Rotation { t },
            SystemKind::Sturmian { alpha },
        ) => Ok(rotation_orbit_offset(alpha, &(s - t)).is_none()),
        _ => {
            let wx = x.coords(sys, -shifts - radius, shifts + radius)?;
            let wy = y.coords(sys, -radius, radius)?;
            let width = (2 * radius + 1) as usize;
            Ok((0..=(2 * shifts) as usize).all(|s| wx[s..s + width] != wy[..]))
        }
    }
}
