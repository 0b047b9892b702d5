//! Witness constructions for the support lower bounds.
//!
//! Three algorithms turn the configuration counts of a diagram `D` into
//! `r₁ + r₂ + r₃` diagrams strictly below `D` in Gale order with
//! pairwise distinct weight vectors, which is the executable form of
//! the diagram bound. A fourth generator maps each pattern occurrence
//! in a permutation to subdiagrams of its Rothe diagram, realizing the
//! pattern bound coefficient by coefficient.
//!
//! All constructions move boxes strictly upwards within their columns,
//! so column cardinalities are preserved and Gale comparability is
//! automatic.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::diagram::{
    below, diagram_leq, r1_below, r1_local_unchecked, r_stats, rothe, weight, Diagram,
    WeightVector,
};
use crate::perm::{pattern_occurrences, Permutation};
use crate::Error;

/// The full witness family of a diagram.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessSet {
    pub source: Diagram,
    /// Ascending chain from Algorithm 1, length r₁.
    pub chain1: Vec<Diagram>,
    /// Algorithm 2 output per row pair `(i₁, i₂)`; empty sets omitted.
    pub sets2: Vec<((usize, usize), Vec<Diagram>)>,
    /// Algorithm 3 output per pivot `(i, j)`; empty sets omitted.
    pub sets3: Vec<((usize, usize), Vec<Diagram>)>,
}

impl WitnessSet {
    pub fn total(&self) -> usize {
        self.chain1.len()
            + self.sets2.iter().map(|(_, v)| v.len()).sum::<usize>()
            + self.sets3.iter().map(|(_, v)| v.len()).sum::<usize>()
    }

    /// Every witness with a provenance label, in emission order.
    pub fn labelled(&self) -> Vec<(String, &Diagram)> {
        let mut out = Vec::with_capacity(self.total());
        for (k, c) in self.chain1.iter().enumerate() {
            out.push((format!("algorithm1[{k}]"), c));
        }
        for ((i1, i2), set) in &self.sets2 {
            for (k, c) in set.iter().enumerate() {
                out.push((format!("algorithm2({i1},{i2})[{k}]"), c));
            }
        }
        for ((i, j), set) in &self.sets3 {
            for (k, c) in set.iter().enumerate() {
                out.push((format!("algorithm3({i},{j})[{k}]"), c));
            }
        }
        out
    }
}

/// A structured counterexample report from witness validation.
///
/// Findings are data, not panics: an exhaustive sweep inspects these.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessViolation {
    pub source: Diagram,
    pub kind: ViolationKind,
}

#[derive(Clone, Debug, Serialize)]
pub enum ViolationKind {
    CountMismatch {
        part: String,
        expected: u64,
        actual: u64,
    },
    NotStrictlyBelow {
        origin: String,
        witness: Diagram,
    },
    WeightCollision {
        first_origin: String,
        first: Diagram,
        second_origin: String,
        second: Diagram,
        weight: WeightVector,
    },
}

impl fmt::Display for WitnessViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "witness violation on diagram:\n{}", self.source)?;
        match &self.kind {
            ViolationKind::CountMismatch {
                part,
                expected,
                actual,
            } => write!(f, "{part}: expected {expected} witnesses, got {actual}"),
            ViolationKind::NotStrictlyBelow { origin, witness } => {
                write!(f, "{origin} is not strictly below the source:\n{witness}")
            }
            ViolationKind::WeightCollision {
                first_origin,
                first,
                second_origin,
                second,
                weight,
            } => write!(
                f,
                "weight {weight} collides between {first_origin}:\n{first}\nand {second_origin}:\n{second}"
            ),
        }
    }
}

/// Number of blank cells in column `j` strictly between `floor` and `i`.
fn window_blanks_above(d: &Diagram, i: usize, j: usize, floor: usize) -> u32 {
    let window = ((1u16 << (i - 1)) - 1) & !((1u16 << floor) - 1);
    window.count_ones() - (d.column_mask(j) & window).count_ones()
}

/// Algorithm 1 restricted to rows `> floor`: repeatedly take the
/// top-left most box with a blank above it (inside the window) and move
/// it up one row. Returns the ascending chain `C¹ < ⋯ < C^{r₁}`.
fn algorithm1_from(d: &Diagram, floor: usize) -> Vec<Diagram> {
    let n = d.n();
    let mut cur = d.clone();
    let mut produced = Vec::new();
    loop {
        let mut found = None;
        'scan: for i in floor + 2..=n {
            for j in 1..=n {
                if cur.has(i, j) && window_blanks_above(&cur, i, j, floor) > 0 {
                    found = Some((i, j));
                    break 'scan;
                }
            }
        }
        let Some((i, j)) = found else { break };
        // the cell right above the top-left most movable box is blank
        cur.move_up(i, j, i - 1);
        produced.push(cur.clone());
    }
    produced.reverse();
    produced
}

/// The chain `C¹ < C² < ⋯ < C^{r₁} < D` of Algorithm 1: each element is
/// obtained from its successor by moving one box up one row into a
/// blank cell; weights are pairwise distinct.
pub fn algorithm1(d: &Diagram) -> Vec<Diagram> {
    algorithm1_from(d, 0)
}

/// Step 0 shared by Algorithms 2 and 3: in every column, the boxes in
/// rows `1..=cut(j)` float to the topmost positions of the column.
fn compress_to_top(d: &Diagram, cut: impl Fn(usize) -> usize) -> Diagram {
    let mut out = d.clone();
    for j in 1..=d.n() {
        let col = d.column_mask(j);
        let above_mask = (1u32 << cut(j)) as u16 - 1;
        let packed = (1u32 << (col & above_mask).count_ones()) as u16 - 1;
        out.set_column(j, (col & !above_mask) | packed);
    }
    out
}

/// The set `S_{i₁,i₂}(D)` of Algorithm 2, in production order.
///
/// Requires `1 < i₁ < i₂ ≤ n`. The output has one diagram for every
/// unit counted by the row-pair slice of r₂, all strictly below `D`,
/// with weights distinct within the set and across row pairs.
pub fn algorithm2(d: &Diagram, i1: usize, i2: usize) -> Vec<Diagram> {
    let n = d.n();
    assert!(
        1 < i1 && i1 < i2 && i2 <= n,
        "algorithm2 needs 1 < i1 < i2 ≤ n, got ({i1},{i2}) on [{n}]×[{n}]"
    );

    // slice counts are read off the ORIGINAL diagram throughout
    let slice = |ja: usize, jb: usize| -> u64 {
        let (lo, hi) = if ja < jb { (ja, jb) } else { (jb, ja) };
        crate::diagram::r2_local(d, i1, i2, lo, hi)
    };
    // columns holding boxes in both working rows; these never pivot
    let partners: Vec<usize> = (1..=n)
        .filter(|&j| d.has(i1, j) && d.has(i2, j))
        .collect();

    // Step 0: boxes above row i1 float to the top of their columns
    let mut cur = compress_to_top(d, |_| i1 - 1);
    let mut out = Vec::new();

    loop {
        // Step 1: leftmost column with a box at i1 over a blank at i2
        // (on the current diagram) supported by a positive slice count
        let pivot = (1..=n).find(|&j| {
            cur.has(i1, j) && !cur.has(i2, j) && partners.iter().any(|&jp| slice(j, jp) > 0)
        });
        let Some(j) = pivot else {
            break;
        };
        let mut m = 1u64;
        loop {
            // Step 2: raise row-i2 partner boxes to row i1−m, cumulatively
            // left to right, snapshotting after each move
            let cols: Vec<usize> = partners
                .iter()
                .copied()
                .filter(|&jp| slice(j, jp) >= m)
                .collect();
            let mut c = cur.clone();
            for &jt in &cols {
                c.move_up(i2, jt, i1 - m as usize);
                out.push(c.clone());
            }
            // Step 3: the moved boxes snap back (we worked on a copy);
            // deepen m while some slice still has headroom
            if cols.iter().any(|&jp| slice(j, jp) > m) {
                m += 1;
            } else {
                break;
            }
        }
        // retire the pivot one row up and rescan
        cur.move_up(i1, j, i1 - 1);
    }
    out
}

/// Step 0 of Algorithm 3: everything above row `i`, plus the boxes of
/// row `i` left of column `j`, floats to the top.
fn algorithm3_step0(d: &Diagram, i: usize, j: usize) -> Diagram {
    compress_to_top(d, |col| if col < j { i } else { i - 1 })
}

/// The set `T_{i,j}(D)` of Algorithm 3 for a PIVOT box `(i, j)` (a box
/// with at least one blank above it in its column).
///
/// Produces `r₁(D; i,j) × r₁(D_{>i})` diagrams: the Algorithm-1 chain
/// of the part below row `i` crossed with the heights the pivot can be
/// raised to.
pub fn algorithm3(d: &Diagram, i: usize, j: usize) -> Result<Vec<Diagram>, Error> {
    if !d.has(i, j) {
        return Err(Error::NotAPivot { row: i, col: j });
    }
    let q_max = r1_local_unchecked(d, i, j);
    if q_max == 0 {
        return Err(Error::NotAPivot { row: i, col: j });
    }

    let base = algorithm3_step0(d, i, j);
    let chain = algorithm1_from(&below(d, i), i);
    let upper_mask = (1u32 << i) as u16 - 1;

    let mut out = Vec::with_capacity(chain.len() * q_max as usize);
    for lower in &chain {
        let mut with_lower = base.clone();
        for col in 1..=d.n() {
            with_lower.set_column(
                col,
                (base.column_mask(col) & upper_mask) | lower.column_mask(col),
            );
        }
        // after Step 0 there are exactly r₁(D;i,j) blanks right above
        // the pivot, so every target row is free
        for q in 1..=q_max as usize {
            let mut c = with_lower.clone();
            if q > 1 {
                c.move_up(i, j, i - q + 1);
            }
            out.push(c);
        }
    }
    Ok(out)
}

/// Runs all three algorithms on `D` and validates the full witness
/// family: exactly `r₁ + r₂ + r₃` diagrams, each strictly below `D`,
/// with globally distinct weight vectors. Any failure is returned as a
/// structured counterexample report.
pub fn full_witness(d: &Diagram) -> Result<WitnessSet, Box<WitnessViolation>> {
    let n = d.n();
    let stats = r_stats(d);

    let chain1 = algorithm1(d);
    let mut sets2 = Vec::new();
    for i1 in 2..n {
        for i2 in i1 + 1..=n {
            let set = algorithm2(d, i1, i2);
            if !set.is_empty() {
                sets2.push(((i1, i2), set));
            }
        }
    }
    let mut sets3 = Vec::new();
    for (i, j) in d.boxes() {
        let local = r1_local_unchecked(d, i, j);
        if local == 0 {
            continue;
        }
        let set = algorithm3(d, i, j).expect("pivot was checked");
        let expected = local * r1_below(d, i);
        if set.len() as u64 != expected {
            return Err(Box::new(WitnessViolation {
                source: d.clone(),
                kind: ViolationKind::CountMismatch {
                    part: format!("algorithm3({i},{j})"),
                    expected,
                    actual: set.len() as u64,
                },
            }));
        }
        if !set.is_empty() {
            sets3.push(((i, j), set));
        }
    }

    let witnesses = WitnessSet {
        source: d.clone(),
        chain1,
        sets2,
        sets3,
    };

    for (part, count, expected) in [
        ("algorithm1", witnesses.chain1.len() as u64, stats.r1),
        (
            "algorithm2",
            witnesses.sets2.iter().map(|(_, v)| v.len() as u64).sum(),
            stats.r2,
        ),
        (
            "algorithm3",
            witnesses.sets3.iter().map(|(_, v)| v.len() as u64).sum(),
            stats.r3,
        ),
    ] {
        if count != expected {
            return Err(Box::new(WitnessViolation {
                source: d.clone(),
                kind: ViolationKind::CountMismatch {
                    part: part.into(),
                    expected,
                    actual: count,
                },
            }));
        }
    }

    let mut seen: HashMap<WeightVector, (String, Diagram)> = HashMap::new();
    for (origin, c) in witnesses.labelled() {
        if c == d || !diagram_leq(c, d).expect("same grid") {
            return Err(Box::new(WitnessViolation {
                source: d.clone(),
                kind: ViolationKind::NotStrictlyBelow {
                    origin,
                    witness: c.clone(),
                },
            }));
        }
        let wt = weight(c);
        if let Some((first_origin, first)) = seen.get(&wt) {
            return Err(Box::new(WitnessViolation {
                source: d.clone(),
                kind: ViolationKind::WeightCollision {
                    first_origin: first_origin.clone(),
                    first: first.clone(),
                    second_origin: origin,
                    second: c.clone(),
                    weight: wt,
                },
            }));
        }
        seen.insert(wt, (origin, c.clone()));
    }

    Ok(witnesses)
}

/// The six local configuration classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConfigClass {
    A,
    B,
    BPrime,
    C,
    CPrime,
    CDoublePrime,
}

/// Classifies a cell set as one of the six configurations inside `d`,
/// or `None` if it matches none of them.
pub fn classify_configuration(d: &Diagram, cells: &[(usize, usize)]) -> Option<ConfigClass> {
    let mut cells = cells.to_vec();
    cells.sort_unstable();
    cells.dedup();
    match cells.len() {
        2 => {
            let ((r1, c1), (r2, c2)) = (cells[0], cells[1]);
            (c1 == c2 && r1 < r2 && !d.has(r1, c1) && d.has(r2, c2)).then_some(ConfigClass::A)
        }
        6 => {
            let mut rows: Vec<usize> = cells.iter().map(|&(r, _)| r).collect();
            rows.sort_unstable();
            rows.dedup();
            let mut cols: Vec<usize> = cells.iter().map(|&(_, c)| c).collect();
            cols.sort_unstable();
            cols.dedup();
            if rows.len() != 3 || cols.len() != 2 {
                return None;
            }
            let (j1, j2) = (cols[0], cols[1]);
            let top_blank = !d.has(rows[0], j1) && !d.has(rows[0], j2);
            let mid_full = d.has(rows[1], j1) && d.has(rows[1], j2);
            if !top_blank || !mid_full {
                return None;
            }
            match (d.has(rows[2], j1), d.has(rows[2], j2)) {
                (true, false) => Some(ConfigClass::B),
                (false, true) => Some(ConfigClass::BPrime),
                _ => None,
            }
        }
        4 => {
            let mut by_col: HashMap<usize, Vec<usize>> = HashMap::new();
            for &(r, c) in &cells {
                by_col.entry(c).or_default().push(r);
            }
            let pair_ok = |rows: &[usize], col: usize| -> bool {
                rows.len() == 2 && !d.has(rows[0], col) && d.has(rows[1], col)
            };
            match by_col.len() {
                1 => {
                    let (&col, rows) = by_col.iter().next().unwrap();
                    (pair_ok(&rows[..2], col) && pair_ok(&rows[2..], col))
                        .then_some(ConfigClass::CDoublePrime)
                }
                2 => {
                    let mut groups: Vec<(usize, Vec<usize>)> =
                        by_col.into_iter().collect();
                    groups.sort();
                    if groups[0].1.len() != 2 || groups[1].1.len() != 2 {
                        return None;
                    }
                    // the pair lying entirely below the other is the lower pair
                    let (upper, lower) = if groups[0].1[1] < groups[1].1[0] {
                        (&groups[0], &groups[1])
                    } else if groups[1].1[1] < groups[0].1[0] {
                        (&groups[1], &groups[0])
                    } else {
                        return None;
                    };
                    if !pair_ok(&upper.1, upper.0) || !pair_ok(&lower.1, lower.0) {
                        return None;
                    }
                    Some(if upper.0 < lower.0 {
                        ConfigClass::C
                    } else {
                        ConfigClass::CPrime
                    })
                }
                _ => None,
            }
        }
        _ => None,
    }
}

/// Subdiagrams realized by one pattern occurrence: one box set per unit
/// of the pattern's coefficient in the bound.
#[derive(Clone, Debug, Serialize)]
pub struct PatternWitness {
    pub pattern: Permutation,
    /// 1-based positions of the occurrence in the host permutation.
    pub occurrence: Vec<usize>,
    /// Sorted cell sets, one per coefficient unit.
    pub subdiagrams: Vec<Vec<(usize, usize)>>,
}

/// One subdiagram template: cells as (row symbol, column symbol) pairs,
/// where row symbol `k` stands for the occurrence position `i_k` and
/// column symbol `t` for the host value `w(i_t)`.
struct SubdiagramSpec {
    class: ConfigClass,
    cells: &'static [(usize, usize)],
}

struct PatternSpec {
    pattern: Permutation,
    coefficient: u64,
    subdiagrams: Vec<SubdiagramSpec>,
}

/// The twelve patterns of the bound with their coefficients and the
/// subdiagram templates transcribed from the check-marked tables.
fn pattern_specs() -> &'static [PatternSpec] {
    use ConfigClass::*;
    static SPECS: OnceLock<Vec<PatternSpec>> = OnceLock::new();
    SPECS.get_or_init(|| {
        let raw: Vec<(&str, Vec<(ConfigClass, &'static [(usize, usize)])>)> = vec![
            ("132", vec![(A, &[(1, 3), (2, 3)])]),
            (
                "1432",
                vec![(B, &[(1, 4), (1, 3), (2, 4), (2, 3), (3, 4), (3, 3)])],
            ),
            ("13254", vec![(C, &[(1, 3), (2, 3), (3, 5), (4, 5)])]),
            (
                "14253",
                vec![
                    (BPrime, &[(1, 3), (1, 5), (2, 3), (2, 5), (4, 3), (4, 5)]),
                    (C, &[(1, 3), (2, 3), (3, 5), (4, 5)]),
                    (CDoublePrime, &[(1, 5), (2, 5), (3, 5), (4, 5)]),
                ],
            ),
            (
                "14352",
                vec![(B, &[(1, 5), (1, 3), (2, 5), (2, 3), (4, 5), (4, 3)])],
            ),
            (
                "15243",
                vec![
                    (BPrime, &[(1, 3), (1, 5), (2, 3), (2, 5), (4, 3), (4, 5)]),
                    (C, &[(1, 3), (2, 3), (3, 5), (4, 5)]),
                    (CPrime, &[(1, 4), (2, 4), (3, 5), (4, 5)]),
                    (CDoublePrime, &[(1, 5), (2, 5), (3, 5), (4, 5)]),
                ],
            ),
            (
                "15324",
                vec![(B, &[(1, 4), (1, 5), (2, 4), (2, 5), (3, 4), (3, 5)])],
            ),
            (
                "15342",
                vec![
                    (B, &[(1, 5), (1, 3), (2, 5), (2, 3), (4, 5), (4, 3)]),
                    (B, &[(1, 5), (1, 4), (2, 5), (2, 4), (3, 5), (3, 4)]),
                ],
            ),
            (
                "15432",
                vec![(B, &[(1, 5), (1, 3), (2, 5), (2, 3), (4, 5), (4, 3)])],
            ),
            ("24153", vec![(CDoublePrime, &[(1, 5), (2, 5), (3, 5), (4, 5)])]),
            (
                "25143",
                vec![
                    (CPrime, &[(1, 4), (2, 4), (3, 5), (4, 5)]),
                    (CDoublePrime, &[(1, 5), (2, 5), (3, 5), (4, 5)]),
                ],
            ),
            ("35142", vec![(CPrime, &[(1, 4), (2, 4), (3, 5), (4, 5)])]),
        ];
        let specs: Vec<PatternSpec> = raw
            .into_iter()
            .map(|(word, subs)| {
                let pattern: Permutation = word.parse().unwrap();
                PatternSpec {
                    coefficient: subs.len() as u64,
                    subdiagrams: subs
                        .into_iter()
                        .map(|(class, cells)| SubdiagramSpec { class, cells })
                        .collect(),
                    pattern,
                }
            })
            .collect();
        // transcription self-check: each template must cut the expected
        // configuration out of the pattern's own Rothe diagram at the
        // identity occurrence
        for spec in &specs {
            let d = rothe(&spec.pattern);
            let identity: Vec<usize> = (1..=spec.pattern.size()).collect();
            for sub in &spec.subdiagrams {
                let cells = instantiate(&spec.pattern, &identity, sub.cells);
                let got = classify_configuration(&d, &cells);
                assert_eq!(
                    got,
                    Some(sub.class),
                    "template for pattern {} mistranscribed: {:?}",
                    spec.pattern,
                    sub.cells
                );
            }
        }
        specs
    })
}

/// Coefficients of the twelve patterns in the support lower bound.
pub fn bound_patterns() -> Vec<(Permutation, u64)> {
    pattern_specs()
        .iter()
        .map(|s| (s.pattern.clone(), s.coefficient))
        .collect()
}

fn instantiate(
    w: &Permutation,
    occurrence: &[usize],
    cells: &[(usize, usize)],
) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = cells
        .iter()
        .map(|&(row_sym, col_sym)| {
            (
                occurrence[row_sym - 1],
                w.value(occurrence[col_sym - 1]),
            )
        })
        .collect();
    out.sort_unstable();
    out
}

/// For every occurrence of `u` in `w`, the coefficient-many subdiagrams
/// of the Rothe diagram of `w` generated by that occurrence.
///
/// `u` must be one of the twelve bound patterns.
pub fn pattern_witnesses(w: &Permutation, u: &Permutation) -> Result<Vec<PatternWitness>, Error> {
    let spec = pattern_specs()
        .iter()
        .find(|s| &s.pattern == u)
        .ok_or_else(|| Error::UnsupportedPattern(u.to_string()))?;
    let out = pattern_occurrences(w, u)
        .into_iter()
        .map(|occurrence| {
            let subdiagrams: Vec<Vec<(usize, usize)>> = spec
                .subdiagrams
                .iter()
                .map(|sub| instantiate(w, &occurrence, sub.cells))
                .collect();
            PatternWitness {
                pattern: u.clone(),
                occurrence,
                subdiagrams,
            }
        })
        .collect();
    Ok(out)
}

/// Recovers the occurrence positions that generated a subdiagram, using
/// the row set plus the preimages of the column(s): rows for (A)-, rows
/// and both columns for (B)-, rows and the lower-pair column for
/// (C)-class sets.
pub fn recover_occurrence(
    w: &Permutation,
    cells: &[(usize, usize)],
    class: ConfigClass,
) -> Vec<usize> {
    let winv = w.inverse();
    let mut positions: Vec<usize> = cells.iter().map(|&(r, _)| r).collect();
    match class {
        ConfigClass::A => {
            positions.push(winv.value(cells[0].1));
        }
        ConfigClass::B | ConfigClass::BPrime => {
            let mut cols: Vec<usize> = cells.iter().map(|&(_, c)| c).collect();
            cols.sort_unstable();
            cols.dedup();
            for c in cols {
                positions.push(winv.value(c));
            }
        }
        ConfigClass::C | ConfigClass::CPrime | ConfigClass::CDoublePrime => {
            let mut sorted = cells.to_vec();
            sorted.sort_unstable();
            let lower_col = sorted.last().unwrap().1;
            positions.push(winv.value(lower_col));
        }
    }
    positions.sort_unstable();
    positions.dedup();
    positions
}
