//! Metrics on words: swap distance, the area metric `ρ₁`, the sup metric
//! `ρ∞`, and the span statistic `τ`. All values are exact rationals.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::words::{prefix_counts, Word};

/// Exact non-negative rational metric value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MetricValue(Ratio<u64>);

impl MetricValue {
    pub fn new(numer: u64, denom: u64) -> Self {
        MetricValue(Ratio::new(numer, denom))
    }

    pub fn zero() -> Self {
        MetricValue(Ratio::zero())
    }

    pub fn ratio(self) -> Ratio<u64> {
        self.0
    }

    pub fn numer(self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(self) -> u64 {
        *self.0.denom()
    }

    pub fn to_f64(self) -> f64 {
        self.0.to_f64().expect("finite ratio")
    }
}

impl fmt::Display for MetricValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl serde::Serialize for MetricValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

/// `Σ_j |w_A[j] − v_A[j]|` for two letters, `Σ_j Σ_k |w_k[j] − v_k[j]|` otherwise.
pub fn area_sum(w: &Word, v: &Word) -> Result<u64> {
    w.check_same_shape(v)?;
    let (pw, pv) = (prefix_counts(w), prefix_counts(v));
    let letters = if w.alphabet() == 2 { 1 } else { w.alphabet() };
    let mut sum = 0u64;
    for k in 0..letters {
        for j in 1..=w.len() {
            sum += u64::from(pw.get(k, j).abs_diff(pv.get(k, j)));
        }
    }
    Ok(sum)
}

/// Normalized area between the lattice paths of `w` and `v`.
///
/// Two letters: `(1/n²)·Σ_j |w_A[j] − v_A[j]|`. `N ≥ 3`:
/// `(1/(N²n²))·Σ_j Σ_k |w_k[j] − v_k[j]|`.
pub fn rho1(w: &Word, v: &Word) -> Result<MetricValue> {
    let sum = area_sum(w, v)?;
    let n = w.n() as u64;
    let scale = if w.alphabet() == 2 {
        1
    } else {
        (w.alphabet() * w.alphabet()) as u64
    };
    Ok(MetricValue::new(sum, scale * n * n))
}

/// The three equivalent two-letter expressions for `ρ₁`: via the `A − B`
/// excess, via `A` counts alone, and via both letters.
pub fn rho1_expressions(w: &Word, v: &Word) -> Result<[MetricValue; 3]> {
    two_letter(w, v)?;
    let (pw, pv) = (prefix_counts(w), prefix_counts(v));
    let n = w.n() as u64;
    let (mut excess, mut a_only, mut both) = (0u64, 0u64, 0u64);
    for j in 1..=w.len() {
        let (wa, wb) = (i64::from(pw.get(0, j)), i64::from(pw.get(1, j)));
        let (va, vb) = (i64::from(pv.get(0, j)), i64::from(pv.get(1, j)));
        excess += ((wa - wb) - (va - vb)).unsigned_abs();
        a_only += (wa - va).unsigned_abs();
        both += (wa - va).unsigned_abs() + (wb - vb).unsigned_abs();
    }
    Ok([
        MetricValue::new(excess, 2 * n * n),
        MetricValue::new(a_only, n * n),
        MetricValue::new(both, 2 * n * n),
    ])
}

/// `(2/n)·max_{j, k} |w_k[j] − v_k[j]|`, maximizing over the full range
/// `1 ≤ j ≤ Nn`.
pub fn rho_inf(w: &Word, v: &Word) -> Result<MetricValue> {
    w.check_same_shape(v)?;
    let (pw, pv) = (prefix_counts(w), prefix_counts(v));
    let mut max = 0u32;
    for k in 0..w.alphabet() {
        for j in 1..=w.len() {
            max = max.max(pw.get(k, j).abs_diff(pv.get(k, j)));
        }
    }
    Ok(MetricValue::new(2 * u64::from(max), w.n() as u64))
}

/// The three two-letter expressions for `ρ∞`, all over `1 ≤ j ≤ 2n`.
pub fn rho_inf_expressions(w: &Word, v: &Word) -> Result<[MetricValue; 3]> {
    two_letter(w, v)?;
    let (pw, pv) = (prefix_counts(w), prefix_counts(v));
    let n = w.n() as u64;
    let (mut excess, mut a_only, mut both) = (0u64, 0u64, 0u64);
    for j in 1..=w.len() {
        let (wa, wb) = (i64::from(pw.get(0, j)), i64::from(pw.get(1, j)));
        let (va, vb) = (i64::from(pv.get(0, j)), i64::from(pv.get(1, j)));
        excess = excess.max(((wa - wb) - (va - vb)).unsigned_abs());
        a_only = a_only.max((wa - va).unsigned_abs());
        both = both.max((wa - va).unsigned_abs() + (wb - vb).unsigned_abs());
    }
    Ok([
        MetricValue::new(excess, n),
        MetricValue::new(2 * a_only, n),
        MetricValue::new(both, n),
    ])
}

fn two_letter(w: &Word, v: &Word) -> Result<()> {
    w.check_same_shape(v)?;
    if w.alphabet() != 2 {
        return Err(Error::UnsupportedAlphabet {
            found: w.alphabet(),
            context: "the alternative expressions are for two-letter words",
        });
    }
    Ok(())
}

/// Minimal number of adjacent transpositions turning `w` into `v`.
///
/// The `i`-th occurrence of each letter in `w` is matched with the `i`-th
/// occurrence in `v`; the answer is the inversion count of the resulting
/// position permutation.
pub fn swap_distance(w: &Word, v: &Word) -> Result<u64> {
    w.check_same_shape(v)?;
    let mut slots: Vec<VecDeque<usize>> = vec![VecDeque::new(); w.alphabet()];
    for (pos, &l) in v.letters().iter().enumerate() {
        slots[l as usize].push_back(pos);
    }
    let mut target: Vec<usize> = w
        .letters()
        .iter()
        .map(|&l| slots[l as usize].pop_front().expect("equal letter counts"))
        .collect();
    Ok(count_inversions(&mut target))
}

fn count_inversions(v: &mut [usize]) -> u64 {
    if v.len() < 2 {
        return 0;
    }
    let mid = v.len() / 2;
    let mut count = count_inversions(&mut v[..mid]) + count_inversions(&mut v[mid..]);
    let mut merged = Vec::with_capacity(v.len());
    let (mut i, mut j) = (0, mid);
    while i < mid && j < v.len() {
        if v[i] <= v[j] {
            merged.push(v[i]);
            i += 1;
        } else {
            merged.push(v[j]);
            count += (mid - i) as u64;
            j += 1;
        }
    }
    merged.extend_from_slice(&v[i..mid]);
    merged.extend_from_slice(&v[j..]);
    v.copy_from_slice(&merged);
    count
}

/// Largest word length the breadth-first oracle accepts.
pub const BFS_MAX_LENGTH: usize = 10;

/// Swap distance by breadth-first search over single adjacent transpositions.
pub fn swap_distance_bfs(w: &Word, v: &Word) -> Result<u64> {
    w.check_same_shape(v)?;
    if w.len() > BFS_MAX_LENGTH {
        return Err(Error::Guard(format!(
            "breadth-first search limited to length {BFS_MAX_LENGTH}, got {}",
            w.len()
        )));
    }
    let encode = |letters: &[u8]| {
        letters
            .iter()
            .fold(0u64, |acc, &l| (acc << 5) | u64::from(l))
    };
    let goal = encode(v.letters());
    let start = w.letters().to_vec();
    let mut dist: HashMap<u64, u64> = HashMap::from([(encode(&start), 0)]);
    let mut queue = VecDeque::from([start]);
    while let Some(cur) = queue.pop_front() {
        let d = dist[&encode(&cur)];
        if encode(&cur) == goal {
            return Ok(d);
        }
        for i in 0..cur.len() - 1 {
            if cur[i] == cur[i + 1] {
                continue;
            }
            let mut next = cur.clone();
            next.swap(i, i + 1);
            let key = encode(&next);
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(key) {
                e.insert(d + 1);
                queue.push_back(next);
            }
        }
    }
    unreachable!("words with equal letter counts are connected by swaps")
}

/// `(1/n)·max_{j, k, ℓ} |w_k[j] − w_ℓ[j]|`.
pub fn tau(w: &Word) -> MetricValue {
    let pc = prefix_counts(w);
    let mut max = 0u32;
    for j in 1..=w.len() {
        let column = (0..w.alphabet()).map(|k| pc.get(k, j));
        let (lo, hi) = column.fold((u32::MAX, 0), |(lo, hi), c| (lo.min(c), hi.max(c)));
        max = max.max(hi - lo);
    }
    MetricValue::new(u64::from(max), w.n() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{enumerate_words, sorted_word, standard_word};

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn rho1_examples() {
        assert_eq!(area_sum(&w("AABB"), &w("BBAA")).unwrap(), 4);
        assert_eq!(
            rho1(&w("AABB"), &w("BBAA")).unwrap(),
            MetricValue::new(1, 1)
        );
        assert_eq!(rho1(&w("ABBA"), &w("ABBA")).unwrap(), MetricValue::zero());
        assert_eq!(area_sum(&w("ACB"), &w("BCA")).unwrap(), 4);
        assert_eq!(area_sum(&w("ABC"), &w("BCA")).unwrap(), 4);
        assert_eq!(rho1(&w("ACB"), &w("BCA")).unwrap(), MetricValue::new(4, 9));
    }

    #[test]
    fn rho1_expressions_agree() {
        for n in 1..=4 {
            let all: Vec<Word> = enumerate_words(n, 2).unwrap().collect();
            for a in &all {
                for b in &all {
                    let [x, y, z] = rho1_expressions(a, b).unwrap();
                    assert_eq!(x, y);
                    assert_eq!(y, z);
                    assert_eq!(y, rho1(a, b).unwrap());
                    let [x, y, z] = rho_inf_expressions(a, b).unwrap();
                    assert_eq!(x, y);
                    assert_eq!(y, z);
                    assert_eq!(y, rho_inf(a, b).unwrap());
                }
            }
        }
    }

    #[test]
    fn rho_inf_examples() {
        assert_eq!(
            rho_inf(&w("AABB"), &w("BBAA")).unwrap(),
            MetricValue::new(2, 1)
        );
        assert_eq!(
            rho_inf(&w("ABAB"), &w("ABAB")).unwrap(),
            MetricValue::zero()
        );
    }

    #[test]
    fn swap_distance_examples() {
        assert_eq!(swap_distance(&w("AABB"), &w("BBAA")).unwrap(), 4);
        assert_eq!(swap_distance(&w("ACB"), &w("BCA")).unwrap(), 3);
        assert_eq!(swap_distance(&w("ABC"), &w("BCA")).unwrap(), 2);
        assert_eq!(swap_distance(&w("ABBA"), &w("ABBA")).unwrap(), 0);
    }

    #[test]
    fn bfs_examples_and_guard() {
        assert_eq!(swap_distance_bfs(&w("AABB"), &w("BBAA")).unwrap(), 4);
        assert_eq!(swap_distance_bfs(&w("AB"), &w("AB")).unwrap(), 0);
        assert_eq!(swap_distance_bfs(&w("ACB"), &w("BCA")).unwrap(), 3);
        let big = standard_word(6, 2).unwrap();
        assert!(matches!(
            swap_distance_bfs(&big, &big),
            Err(Error::Guard(_))
        ));
    }

    #[test]
    fn swap_distance_matches_bfs_oracle() {
        for (n, k) in [(3, 2), (1, 3), (2, 3), (1, 4), (5, 2)] {
            let all: Vec<Word> = enumerate_words(n, k).unwrap().collect();
            for a in &all {
                for b in &all {
                    assert_eq!(
                        swap_distance(a, b).unwrap(),
                        swap_distance_bfs(a, b).unwrap(),
                        "{a} {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn tau_examples() {
        for n in 1..=6 {
            assert_eq!(
                tau(&standard_word(n, 2).unwrap()),
                MetricValue::new(1, n as u64)
            );
            assert_eq!(tau(&sorted_word(n, 2).unwrap()), MetricValue::new(1, 1));
        }
        assert_eq!(tau(&w("AABBAB")), MetricValue::new(2, 3));
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        assert!(matches!(rho1(&w("AB"), &w("AABB")), Err(Error::Shape(_))));
        assert!(matches!(
            rho_inf(&w("ABC"), &w("ABAB")),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            swap_distance(&w("AB"), &w("ABC")),
            Err(Error::Shape(_))
        ));
    }
}
