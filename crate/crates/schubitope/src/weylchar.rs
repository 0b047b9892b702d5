//! Dual-character supports by direct Gale-order enumeration.
//!
//! The support set of the dual flagged Weyl character of a diagram `D`
//! is exactly `{wt(C) : C ≤ D}` columnwise in Gale order, so it can be
//! computed by enumerating each column's down-set and collecting the
//! distinct accumulated weight vectors — no polynomial expansion. This
//! gives an oracle for the polynomial route and scales past it whenever
//! only the support count is needed.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::diagram::{self, Diagram, WeightVector};
use crate::Error;

/// Default bound on visited enumeration leaves before aborting with a
/// resource error (no partial answers).
pub const DEFAULT_LEAF_CAP: u64 = 100_000_000;

/// The distinct supports of a dual character, with their count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportSet {
    /// Sorted lexicographically.
    pub weights: Vec<WeightVector>,
    pub theta: u64,
}

/// All `k`-subsets of `[n]` below the given set in Gale order.
///
/// The input is a set of rows; the result is sorted and duplicate-free
/// by construction.
pub fn column_downset(rows: &[usize], n: usize) -> Vec<Vec<usize>> {
    let mut sorted = rows.to_vec();
    sorted.sort_unstable();
    let mut mask = 0u16;
    for &r in &sorted {
        debug_assert!(r >= 1 && r <= n);
        mask |= 1 << (r - 1);
    }
    downset_masks(mask)
        .into_iter()
        .map(|m| (1..=n).filter(|&i| m >> (i - 1) & 1 == 1).collect())
        .collect()
}

/// Down-set of a column mask: choose `r₁ < ⋯ < r_k` with `rᵢ ≤ sᵢ`.
fn downset_masks(mask: u16) -> Vec<u16> {
    let tops: Vec<u16> = (0..16).filter(|&b| mask >> b & 1 == 1).collect();
    let mut out = Vec::new();
    let mut chosen: Vec<u16> = Vec::with_capacity(tops.len());

    fn rec(tops: &[u16], chosen: &mut Vec<u16>, out: &mut Vec<u16>) {
        let k = chosen.len();
        if k == tops.len() {
            out.push(chosen.iter().fold(0u16, |m, &b| m | 1 << b));
            return;
        }
        let lo = chosen.last().map_or(0, |&b| b + 1);
        for b in lo..=tops[k] {
            chosen.push(b);
            rec(tops, chosen, out);
            chosen.pop();
        }
    }

    rec(&tops, &mut chosen, &mut out);
    out
}

/// The set `{wt(C) : C ≤ D}` with the default leaf cap.
pub fn support_set(d: &Diagram) -> Result<SupportSet, Error> {
    support_set_with_cap(d, DEFAULT_LEAF_CAP)
}

/// As [`support_set`], aborting with [`Error::LeafCapExceeded`] once
/// more than `cap` full column assignments have been visited.
pub fn support_set_with_cap(d: &Diagram, cap: u64) -> Result<SupportSet, Error> {
    let n = d.n();

    let mut downset_cache: HashMap<u16, Vec<u16>> = HashMap::new();
    for j in 1..=n {
        let mask = d.column_mask(j);
        downset_cache
            .entry(mask)
            .or_insert_with(|| downset_masks(mask));
    }
    let downsets: Vec<&[u16]> = (1..=n)
        .map(|j| downset_cache[&d.column_mask(j)].as_slice())
        .collect();

    struct Search<'a> {
        downsets: &'a [&'a [u16]],
        original: &'a Diagram,
        counts: Vec<u8>,
        chosen: Vec<u16>,
        seen: HashSet<Vec<u8>>,
        leaves: u64,
        cap: u64,
    }

    impl Search<'_> {
        /// The weight vector is additive over columns, so the per-row
        /// counts are accumulated along the DFS and recorded at leaves.
        fn rec(&mut self, col: usize) -> Result<(), Error> {
            if col == self.downsets.len() {
                self.leaves += 1;
                if self.leaves > self.cap {
                    return Err(Error::LeafCapExceeded { cap: self.cap });
                }
                if cfg!(debug_assertions) && self.leaves % 4096 == 1 {
                    for (j, &m) in self.chosen.iter().enumerate() {
                        debug_assert!(
                            diagram::gale_leq_mask(m, self.original.column_mask(j + 1)),
                            "enumerated column escapes the down-set"
                        );
                    }
                }
                if !self.seen.contains(self.counts.as_slice()) {
                    self.seen.insert(self.counts.clone());
                }
                return Ok(());
            }
            for k in 0..self.downsets[col].len() {
                let choice = self.downsets[col][k];
                let mut m = choice;
                while m != 0 {
                    self.counts[m.trailing_zeros() as usize] += 1;
                    m &= m - 1;
                }
                self.chosen.push(choice);
                self.rec(col + 1)?;
                self.chosen.pop();
                let mut m = choice;
                while m != 0 {
                    self.counts[m.trailing_zeros() as usize] -= 1;
                    m &= m - 1;
                }
            }
            Ok(())
        }
    }

    let mut search = Search {
        downsets: &downsets,
        original: d,
        counts: vec![0u8; n],
        chosen: Vec::with_capacity(n),
        seen: HashSet::new(),
        leaves: 0,
        cap,
    };
    search.rec(0)?;

    let mut weights: Vec<WeightVector> = search.seen.into_iter().map(WeightVector).collect();
    weights.sort();
    let theta = weights.len() as u64;
    Ok(SupportSet { weights, theta })
}

/// Number of supports of the dual character of `D`.
pub fn theta_d(d: &Diagram) -> Result<u64, Error> {
    Ok(support_set(d)?.theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{rothe, skyline, weight};
    use crate::perm::{Composition, Permutation};
    use crate::poly;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn downset_examples() {
        assert_eq!(column_downset(&[2], 2), vec![vec![1], vec![2]]);
        assert_eq!(column_downset(&[], 5), vec![Vec::<usize>::new()]);
        assert_eq!(
            column_downset(&[2, 3], 3),
            vec![vec![1, 2], vec![1, 3], vec![2, 3]]
        );
    }

    #[test]
    fn downsets_match_brute_force_gale_scan() {
        // enumerate all subsets of [5] and filter by gale_leq
        for smask in 0u16..1 << 5 {
            let s: Vec<usize> = (1..=5).filter(|&i| smask >> (i - 1) & 1 == 1).collect();
            let mut expected: Vec<Vec<usize>> = (0u16..1 << 5)
                .map(|rm| (1..=5).filter(|&i| rm >> (i - 1) & 1 == 1).collect::<Vec<_>>())
                .filter(|r| r.len() == s.len() && crate::diagram::gale_leq(r, &s).unwrap())
                .collect();
            expected.sort();
            let mut got = column_downset(&s, 5);
            got.sort();
            assert_eq!(got, expected, "S = {s:?}");
        }
    }

    #[test]
    fn support_set_examples() {
        assert_eq!(support_set(&rothe(&p("1432"))).unwrap().theta, 5);

        let empty = support_set(&Diagram::empty(3)).unwrap();
        assert_eq!(empty.theta, 1);
        assert_eq!(empty.weights, vec![WeightVector(vec![0, 0, 0])]);

        let alpha = Composition::new(&[0, 1]).unwrap();
        let sky = support_set(&skyline(&alpha).unwrap()).unwrap();
        assert_eq!(sky.theta, 2);
        assert_eq!(
            sky.weights,
            vec![WeightVector(vec![0, 1]), WeightVector(vec![1, 0])]
        );
    }

    #[test]
    fn theta_examples() {
        assert_eq!(theta_d(&rothe(&p("15432"))).unwrap(), 14);
        assert_eq!(theta_d(&rothe(&p("126543"))).unwrap(), 65);
        for i in 1..=4 {
            let single = Diagram::from_boxes(4, &[(i, 2)]).unwrap();
            assert_eq!(theta_d(&single).unwrap(), i as u64);
        }
    }

    #[test]
    fn weights_all_sum_to_box_count() {
        let d = rothe(&p("13524"));
        let ss = support_set(&d).unwrap();
        assert!(ss.weights.iter().all(|w| w.sum() == d.count()));
        assert!(ss.weights.contains(&weight(&d)));
    }

    #[test]
    fn agrees_with_polynomial_supports_to_n5() {
        Permutation::for_each(5, |w| {
            let from_poly = poly::supports(&poly::schubert(w));
            let from_gale: std::collections::BTreeSet<Vec<u8>> = support_set(&rothe(w))
                .unwrap()
                .weights
                .into_iter()
                .map(|wv| wv.0)
                .collect();
            assert_eq!(from_gale, from_poly, "w = {w}");
        });
    }

    #[test]
    fn theta_bounded_by_principal_specialization() {
        Permutation::for_each(5, |w| {
            let nu = poly::specialize_ones(&poly::schubert(w)).to_i64().unwrap() as u64;
            assert!(theta_d(&rothe(w)).unwrap() <= nu, "w = {w}");
        });
    }

    #[test]
    fn leaf_cap_aborts_cleanly() {
        let d = rothe(&p("126543"));
        match support_set_with_cap(&d, 10) {
            Err(Error::LeafCapExceeded { cap: 10 }) => {}
            other => panic!("expected a resource error, got {other:?}"),
        }
    }

    #[test]
    fn json_emission_shape() {
        let alpha = Composition::new(&[0, 1]).unwrap();
        let ss = support_set(&skyline(&alpha).unwrap()).unwrap();
        let json = serde_json::to_string(&ss).unwrap();
        assert_eq!(json, r#"{"weights":[[0,1],[1,0]],"theta":2}"#);
    }
}
