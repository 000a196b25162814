//! The unique invariant measure of cylinders and the index map.

use std::sync::Arc;

use num_traits::ToPrimitive;

use crate::element::FullGroupElement;
use crate::error::{Error, Result};
use crate::quad::QuadReal;
use crate::subshift::{sturmian_arcs, ClopenSet, SubshiftSystem, Substitution, SystemKind};

/// `μ([w])` for every `w` in `words(n)`, in language order.
pub fn word_measures(sys: &SubshiftSystem, n: usize) -> Result<Arc<Vec<QuadReal>>> {
    if let Some(v) = sys.measure_cache.lock().unwrap().get(&n) {
        return Ok(v.clone());
    }
    let lang = sys.words(n)?;
    let values: Vec<QuadReal> = match sys.kind() {
        SystemKind::Sft { .. } => {
            return Err(Error::UnsupportedSystem(
                "shifts of finite type carry no canonical measure".into(),
            ))
        }
        SystemKind::HigherBlock { base, k } => {
            if n == 0 {
                vec![QuadReal::one()]
            } else {
                let blang = base.words(n + k - 1)?;
                let bm = word_measures(base, n + k - 1)?;
                let mut v = Vec::with_capacity(lang.len());
                for w in lang.words() {
                    let i = blang
                        .position(&sys.decode_blocks(w)?)
                        .expect("decoded block word");
                    v.push(bm[i].clone());
                }
                v
            }
        }
        SystemKind::Sturmian { alpha } => {
            let mut v = vec![QuadReal::zero(); lang.len()];
            for (_, len, w) in sturmian_arcs(alpha, n) {
                let i = lang.position(&w).expect("arc coding is a factor");
                v[i] = &v[i] + &len;
            }
            v
        }
        SystemKind::Substitution(sub) => {
            if n == 0 {
                vec![QuadReal::one()]
            } else if n == 1 {
                let pairs = word_measures(sys, 2)?;
                let plang = sys.words(2)?;
                let mut v = vec![QuadReal::zero(); lang.len()];
                for (w, m) in plang.words().iter().zip(pairs.iter()) {
                    let i = lang.position(&w[..1]).unwrap();
                    v[i] = &v[i] + m;
                }
                v
            } else if n == 2 {
                pair_frequencies(sys, sub)?
            } else {
                substitution_frequencies(sys, sub, n)?
            }
        }
    };
    let values = Arc::new(values);
    sys.measure_cache.lock().unwrap().insert(n, values.clone());
    Ok(values)
}

/// `μ(A)`.
pub fn measure(a: &ClopenSet) -> Result<QuadReal> {
    let sys = a.system();
    let n = a.window_len();
    let lang = sys.words(n)?;
    let m = word_measures(sys, n)?;
    Ok(a.words()
        .iter()
        .map(|w| m[lang.position(w).expect("clopen words are factors")].clone())
        .sum())
}

/// `I(γ) = ∫ n_γ dμ`.
pub fn index(g: &FullGroupElement) -> Result<i64> {
    let sys = g.system();
    let m = word_measures(sys, g.width())?;
    let total: QuadReal = g
        .code()
        .iter()
        .zip(m.iter())
        .filter(|(&k, _)| k != 0)
        .map(|(&k, mu)| &QuadReal::from_int(k) * mu)
        .sum();
    total
        .to_integer()
        .and_then(|n| n.to_i64())
        .ok_or_else(|| Error::NonIntegerIndex {
            value: total.to_string(),
        })
}

/// Perron eigenvalue of the substitution, when it lies in a quadratic field.
pub fn perron_eigenvalue(sub: &Substitution) -> Result<QuadReal> {
    let m = sub.incidence();
    let k = m.len();
    let col_sums: Vec<u64> = (0..k).map(|j| (0..k).map(|i| m[i][j]).sum()).collect();
    if col_sums.iter().all(|&s| s == col_sums[0]) {
        return Ok(QuadReal::from_int(col_sums[0] as i64));
    }
    if k == 2 {
        let tr = (m[0][0] + m[1][1]) as i64;
        let det = m[0][0] as i64 * m[1][1] as i64 - m[0][1] as i64 * m[1][0] as i64;
        let disc = tr * tr - 4 * det;
        return Ok(QuadReal::new(tr, 1, disc as u64, 2));
    }
    // an integer eigenvalue with a positive eigenvector is the Perron root
    let max = *col_sums.iter().max().unwrap();
    for lam in 1..=max {
        let mat: Vec<Vec<QuadReal>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        QuadReal::from_int(m[i][j] as i64 - if i == j { lam as i64 } else { 0 })
                    })
                    .collect()
            })
            .collect();
        if let Some(v) = null_vector(mat) {
            if v.iter().all(|x| x.signum() > 0) || v.iter().all(|x| x.signum() < 0) {
                return Ok(QuadReal::from_int(lam as i64));
            }
        }
    }
    Err(Error::IrrationalFrequency(
        "Perron eigenvalue is not quadratic over Q for this rule".into(),
    ))
}

/// A nonzero vector spanning a one-dimensional kernel, by exact Gaussian
/// elimination; `None` when the kernel is not one-dimensional.
fn null_vector(mut a: Vec<Vec<QuadReal>>) -> Option<Vec<QuadReal>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for j in 0..cols {
            a[r][j] = &a[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let t = &f * &a[r][j];
                    a[i][j] = &a[i][j] - &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if cols - pivots.len() != 1 {
        return None;
    }
    let free = (0..cols).find(|c| !pivots.contains(c)).unwrap();
    let mut v = vec![QuadReal::zero(); cols];
    v[free] = QuadReal::one();
    for (row, &c) in pivots.iter().enumerate() {
        v[c] = -&a[row][free];
    }
    Some(v)
}

/// Frequencies of the 2-letter factors: the normalized Perron eigenvector of
/// the induced substitution on 2-blocks.
fn pair_frequencies(sys: &SubshiftSystem, sub: &Substitution) -> Result<Vec<QuadReal>> {
    let lang = sys.words(2)?;
    let k = lang.len();
    let lam = perron_eigenvalue(sub)?;
    // column ab counts the 2-blocks starting inside σ(a) within σ(ab)
    let mut mat = vec![vec![QuadReal::zero(); k]; k];
    for (j, ab) in lang.words().iter().enumerate() {
        let image = sub.apply(ab);
        for s in 0..sub.image(ab[0]).len() {
            let i = lang
                .position(&image[s..s + 2])
                .expect("2-block of an image is a factor");
            mat[i][j] = &mat[i][j] + &QuadReal::one();
        }
    }
    for (i, row) in mat.iter_mut().enumerate() {
        row[i] = &row[i] - &lam;
    }
    let v = null_vector(mat).ok_or_else(|| {
        Error::IrrationalFrequency("2-block eigenspace is not one-dimensional".into())
    })?;
    let total: QuadReal = v.iter().cloned().sum();
    Ok(v.iter().map(|x| x / &total).collect())
}

/// `μ(w) = Σ_ab μ(ab) · #{starts of w inside σ^j(a) within σ^j(ab)} / Σ_c μ(c)|σ^j(c)|`
/// with `j` large enough that every `σ^j(c)` has length at least `|w| - 1`.
fn substitution_frequencies(
    sys: &SubshiftSystem,
    sub: &Substitution,
    n: usize,
) -> Result<Vec<QuadReal>> {
    let lang = sys.words(n)?;
    let plang = sys.words(2)?;
    let pairs = word_measures(sys, 2)?;
    let letters = word_measures(sys, 1)?;
    let mut j = 0;
    while sub.min_power_len(j) + 1 < n {
        j += 1;
    }
    let lens = sub.power_lengths(j);
    let norm: QuadReal = letters
        .iter()
        .enumerate()
        .map(|(c, mu)| mu * &QuadReal::from_int(lens[c] as i64))
        .sum();
    let mut counts = vec![QuadReal::zero(); lang.len()];
    for (ab, mu) in plang.words().iter().zip(pairs.iter()) {
        let image = sub.power_image(ab, j);
        let first = lens[ab[0] as usize] as usize;
        for s in 0..first {
            let i = lang.position(&image[s..s + n]).expect("factor of an image");
            counts[i] = &counts[i] + mu;
        }
    }
    Ok(counts.iter().map(|c| c / &norm).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subshift::Alphabet;

    fn ex1() -> Arc<SubshiftSystem> {
        let a = Alphabet::new(['0', '1']).unwrap();
        SubshiftSystem::substitution("ex1", a, vec![vec![0, 0, 1, 1], vec![0, 1, 0, 1]], vec![])
            .unwrap()
    }

    fn fib() -> Arc<SubshiftSystem> {
        let a = Alphabet::new(['a', 'b']).unwrap();
        SubshiftSystem::substitution("fib", a, vec![vec![0, 1], vec![0]], vec![]).unwrap()
    }

    /// Empirical frequency of `w` in a long iterate.
    fn empirical(sub: &Substitution, w: &[u8], k: usize) -> f64 {
        let long = sub.power_image(&[0], k);
        let hits = long.windows(w.len()).filter(|x| *x == w).count();
        hits as f64 / (long.len() - w.len() + 1) as f64
    }

    #[test]
    fn sturmian_letter_measure() {
        let alpha = QuadReal::new(-1, 1, 2, 1);
        let s = SubshiftSystem::sturmian("s", alpha.clone(), vec![]).unwrap();
        let u = ClopenSet::dotted(&s, "0.").unwrap();
        assert_eq!(measure(&u).unwrap(), alpha);
        assert_eq!(measure(&ClopenSet::full(&s)).unwrap(), QuadReal::one());
        // [11.] = V for n = 1: 1 - 2α
        let v = ClopenSet::dotted(&s, "011.").unwrap();
        assert_eq!(
            measure(&v).unwrap(),
            &QuadReal::one() - &(&QuadReal::from_int(2) * &alpha)
        );
    }

    #[test]
    fn example1_frequencies_are_dyadic() {
        let s = ex1();
        let m = word_measures(&s, 1).unwrap();
        assert_eq!(m[0], QuadReal::from_ratio(1, 2));
        for n in 2..=6 {
            for v in word_measures(&s, n).unwrap().iter() {
                assert!(v.is_rational());
                let den = v.rational_part().denom().clone();
                let mut d = den;
                while &d % 2u32 == 0u32.into() {
                    d /= 2u32;
                }
                assert_eq!(d, 1u32.into());
            }
        }
    }

    #[test]
    fn fibonacci_frequencies_match_empirical() {
        let s = fib();
        let sub = s.substitution_rule().unwrap().clone();
        let lam = perron_eigenvalue(&sub).unwrap();
        assert_eq!(lam, QuadReal::new(1, 1, 5, 2));
        for n in 1..=5 {
            let lang = s.words(n).unwrap();
            let m = word_measures(&s, n).unwrap();
            for (w, mu) in lang.words().iter().zip(m.iter()) {
                assert!((mu.to_f64() - empirical(&sub, w, 22)).abs() < 1e-3, "{w:?}");
            }
        }
    }

    #[test]
    fn kolmogorov_consistency() {
        for s in [ex1(), fib()] {
            for n in 1..=8 {
                let lang = s.words(n).unwrap();
                let m = word_measures(&s, n).unwrap();
                let next = s.words(n + 1).unwrap();
                let mn = word_measures(&s, n + 1).unwrap();
                for (w, mu) in lang.words().iter().zip(m.iter()) {
                    let right: QuadReal = next
                        .words()
                        .iter()
                        .zip(mn.iter())
                        .filter(|(x, _)| x[..n] == w[..])
                        .map(|(_, v)| v.clone())
                        .sum();
                    let left: QuadReal = next
                        .words()
                        .iter()
                        .zip(mn.iter())
                        .filter(|(x, _)| x[1..] == w[..])
                        .map(|(_, v)| v.clone())
                        .sum();
                    assert_eq!(&right, mu);
                    assert_eq!(&left, mu);
                }
            }
        }
    }

    #[test]
    fn index_of_shift_powers() {
        let s = ex1();
        assert_eq!(index(&FullGroupElement::shift_power(&s, 1)).unwrap(), 1);
        assert_eq!(index(&FullGroupElement::shift_power(&s, -4)).unwrap(), -4);
        assert_eq!(index(&FullGroupElement::identity(&s)).unwrap(), 0);
    }

    #[test]
    fn sft_measure_unsupported() {
        let a = Alphabet::new(['0', '1']).unwrap();
        let s = SubshiftSystem::sft("gm", a, vec![vec![1, 1]]).unwrap();
        let err = measure(&ClopenSet::dotted(&s, "0.").unwrap()).unwrap_err();
        assert!(matches!(err, Error::UnsupportedSystem(_)));
    }
}
