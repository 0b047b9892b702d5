//! Box diagrams in the square grid `[n]×[n]`: Rothe and skyline
//! constructions, Gale order, weight vectors, and the three
//! configuration statistics r₁, r₂, r₃.
//!
//! Rows and columns are 1-based. A diagram is stored as one `u16` mask
//! per column (bit `i-1` set means the box `(i, j)` is present), which
//! makes Gale comparison, weights, and configuration scans word
//! operations.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::perm::{Composition, Permutation};
use crate::{Error, MAX_N};

/// A finite set of boxes `(row, col)` inside `[n]×[n]`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "DiagramJson", try_from = "DiagramJson")]
pub struct Diagram {
    n: usize,
    cols: Vec<u16>,
}

impl Diagram {
    pub fn empty(n: usize) -> Self {
        assert!(n >= 1 && n <= MAX_N, "grid size {n} out of range");
        Self {
            n,
            cols: vec![0; n],
        }
    }

    pub fn from_boxes(n: usize, boxes: &[(usize, usize)]) -> Result<Self, Error> {
        if n == 0 || n > MAX_N {
            return Err(Error::SizeBound { n, max: MAX_N });
        }
        let mut d = Self::empty(n);
        for &(r, c) in boxes {
            if r == 0 || r > n || c == 0 || c > n {
                return Err(Error::NotABox { row: r, col: c });
            }
            d.cols[c - 1] |= 1 << (r - 1);
        }
        Ok(d)
    }

    /// Decodes a diagram from the bits of `bits`, cell `(i, j)` being bit
    /// `(i-1)·n + (j-1)`. Useful for exhaustive sweeps of small grids.
    pub fn from_cell_bits(n: usize, bits: u64) -> Self {
        let mut d = Self::empty(n);
        for k in 0..(n * n) as u64 {
            if bits >> k & 1 == 1 {
                let (i, j) = ((k as usize) / n + 1, (k as usize) % n + 1);
                d.cols[j - 1] |= 1 << (i - 1);
            }
        }
        d
    }

    /// Samples a diagram with each cell present independently with
    /// probability 1/2.
    pub fn random(n: usize, rng: &mut impl rand::Rng) -> Self {
        let mut d = Self::empty(n);
        let mask = if n == 16 { !0 } else { (1u16 << n) - 1 };
        for col in d.cols.iter_mut() {
            *col = rng.gen::<u16>() & mask;
        }
        d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has(&self, row: usize, col: usize) -> bool {
        self.cols[col - 1] >> (row - 1) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.cols.iter().map(|c| c.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.cols.iter().all(|&c| c == 0)
    }

    /// Column `j` as a row mask (bit `i-1` ⇔ box `(i, j)`).
    pub fn column_mask(&self, col: usize) -> u16 {
        self.cols[col - 1]
    }

    /// Column `j` as a sorted set of rows.
    pub fn column_rows(&self, col: usize) -> Vec<usize> {
        rows_of_mask(self.cols[col - 1])
    }

    /// All boxes sorted by `(row, col)`.
    pub fn boxes(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.count());
        for i in 1..=self.n {
            for j in 1..=self.n {
                if self.has(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub(crate) fn insert(&mut self, row: usize, col: usize) {
        self.cols[col - 1] |= 1 << (row - 1);
    }

    pub(crate) fn set_column(&mut self, col: usize, mask: u16) {
        self.cols[col - 1] = mask;
    }

    pub(crate) fn remove(&mut self, row: usize, col: usize) {
        self.cols[col - 1] &= !(1 << (row - 1));
    }

    /// Moves a box one or more rows up within its column; the target
    /// cell must be blank.
    pub(crate) fn move_up(&mut self, row: usize, col: usize, to_row: usize) {
        debug_assert!(self.has(row, col), "no box at ({row},{col})");
        debug_assert!(to_row < row && !self.has(to_row, col));
        self.remove(row, col);
        self.insert(to_row, col);
    }
}

fn rows_of_mask(mask: u16) -> Vec<usize> {
    (1..=16).filter(|&i| mask >> (i - 1) & 1 == 1).collect()
}

#[derive(Serialize, Deserialize)]
struct DiagramJson {
    n: usize,
    boxes: Vec<(usize, usize)>,
}

impl From<Diagram> for DiagramJson {
    fn from(d: Diagram) -> Self {
        DiagramJson {
            n: d.n,
            boxes: d.boxes(),
        }
    }
}

impl TryFrom<DiagramJson> for Diagram {
    type Error = Error;
    fn try_from(j: DiagramJson) -> Result<Self, Error> {
        Diagram::from_boxes(j.n, &j.boxes)
    }
}

impl fmt::Display for Diagram {
    /// One line per row, `#` for a box and `.` for a blank.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.n {
            for j in 1..=self.n {
                write!(f, "{}", if self.has(i, j) { '#' } else { '.' })?;
            }
            if i < self.n {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Diagram(n={}, {:?})", self.n, self.boxes())
    }
}

impl FromStr for Diagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let lines: Vec<&str> = s.lines().filter(|l| !l.trim().is_empty()).collect();
        let n = lines.len();
        if n == 0 || n > MAX_N {
            return Err(Error::SizeBound { n, max: MAX_N });
        }
        let mut boxes = Vec::new();
        for (i, line) in lines.iter().enumerate() {
            let cells: Vec<char> = line.trim().chars().collect();
            if cells.len() != n {
                return Err(Error::Parse {
                    pos: i,
                    msg: format!("row {} has {} cells, expected {n}", i + 1, cells.len()),
                });
            }
            for (j, &c) in cells.iter().enumerate() {
                match c {
                    '#' => boxes.push((i + 1, j + 1)),
                    '.' => {}
                    other => {
                        return Err(Error::Parse {
                            pos: i,
                            msg: format!("unexpected cell {other:?}"),
                        })
                    }
                }
            }
        }
        Diagram::from_boxes(n, &boxes)
    }
}

/// Per-row box counts of a diagram; the support coordinate of the
/// associated dual character.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightVector(pub Vec<u8>);

impl WeightVector {
    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn sum(&self) -> usize {
        self.0.iter().map(|&c| c as usize).sum()
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "wt{self}")
    }
}

/// The three configuration counts of a diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RStats {
    pub r1: u64,
    pub r2: u64,
    pub r3: u64,
}

impl RStats {
    pub fn total(&self) -> u64 {
        self.r1 + self.r2 + self.r3
    }
}

/// The Rothe diagram `D(w) = {(i,j) : w(i) > j, w⁻¹(j) > i}`; it has
/// ℓ(w) boxes.
pub fn rothe(w: &Permutation) -> Diagram {
    let n = w.size();
    let winv = w.inverse();
    let mut d = Diagram::empty(n);
    for i in 1..=n {
        for j in 1..=n {
            if w.value(i) > j && winv.value(j) > i {
                d.insert(i, j);
            }
        }
    }
    d
}

/// The skyline diagram of a composition: row `i` holds the leftmost
/// `αᵢ` boxes. Parts must fit in the grid.
pub fn skyline(alpha: &Composition) -> Result<Diagram, Error> {
    let n = alpha.len();
    if let Some(i) = (1..=n).find(|&i| alpha.part(i) > n) {
        return Err(Error::InvalidComposition(format!(
            "part α_{i} = {} exceeds the grid size {n}",
            alpha.part(i)
        )));
    }
    let mut d = Diagram::empty(n);
    for i in 1..=n {
        for j in 1..=alpha.part(i) {
            d.insert(i, j);
        }
    }
    Ok(d)
}

/// Gale order on equal-size row sets: sorted componentwise domination.
pub fn gale_leq(r: &[usize], s: &[usize]) -> Result<bool, Error> {
    if r.len() != s.len() {
        return Err(Error::CardinalityMismatch {
            left: r.len(),
            right: s.len(),
        });
    }
    let mut r = r.to_vec();
    let mut s = s.to_vec();
    r.sort_unstable();
    s.sort_unstable();
    Ok(r.iter().zip(&s).all(|(a, b)| a <= b))
}

/// Gale comparison of column masks with equal popcount: `r ≤ s` iff
/// every prefix `[1..=t]` holds at least as many elements of `r` as
/// of `s`.
pub(crate) fn gale_leq_mask(r: u16, s: u16) -> bool {
    debug_assert_eq!(r.count_ones(), s.count_ones());
    let mut prefix = 0u16;
    for t in 0..16 {
        prefix |= 1 << t;
        if (r & prefix).count_ones() < (s & prefix).count_ones() {
            return false;
        }
    }
    true
}

/// Columnwise Gale comparison of two diagrams on the same grid; false
/// whenever some column cardinalities differ.
pub fn diagram_leq(c: &Diagram, d: &Diagram) -> Result<bool, Error> {
    if c.n != d.n {
        return Err(Error::GridMismatch {
            left: c.n,
            right: d.n,
        });
    }
    Ok(c.cols.iter().zip(&d.cols).all(|(&cm, &dm)| {
        cm.count_ones() == dm.count_ones() && gale_leq_mask(cm, dm)
    }))
}

/// Per-row box counts.
pub fn weight(d: &Diagram) -> WeightVector {
    let mut counts = vec![0u8; d.n];
    for j in 1..=d.n {
        let mut mask = d.column_mask(j);
        while mask != 0 {
            let i = mask.trailing_zeros() as usize;
            counts[i] += 1;
            mask &= mask - 1;
        }
    }
    WeightVector(counts)
}

/// Number of blank cells above the box `(i, j)` in its column.
pub fn r1_local(d: &Diagram, i: usize, j: usize) -> Result<u64, Error> {
    if !d.has(i, j) {
        return Err(Error::NotABox { row: i, col: j });
    }
    Ok(r1_local_unchecked(d, i, j))
}

pub(crate) fn r1_local_unchecked(d: &Diagram, i: usize, j: usize) -> u64 {
    let above = (1u16 << (i - 1)) - 1;
    (i as u64 - 1) - u64::from((d.column_mask(j) & above).count_ones())
}

/// Number of rows `i < i1` such that rows `{i, i1, i2}` and columns
/// `{j1, j2}` cut out one of the two six-box configurations: top row
/// blank-blank, middle row box-box, bottom row exactly one box.
pub fn r2_local(d: &Diagram, i1: usize, i2: usize, j1: usize, j2: usize) -> u64 {
    debug_assert!(1 < i1 && i1 < i2 && i2 <= d.n && j1 < j2 && j2 <= d.n);
    if !(d.has(i1, j1) && d.has(i1, j2)) || (d.has(i2, j1) == d.has(i2, j2)) {
        return 0;
    }
    let both = d.column_mask(j1) | d.column_mask(j2);
    let above = (1u16 << (i1 - 1)) - 1;
    (i1 as u64 - 1) - u64::from((both & above).count_ones())
}

/// r₁ of the subdiagram strictly below row `floor`, counted inside the
/// truncated grid: both cells of each (blank, box) pair lie in rows
/// `> floor`.
pub fn r1_below(d: &Diagram, floor: usize) -> u64 {
    let mut count = 0u64;
    for j in 1..=d.n {
        let col = d.column_mask(j);
        for i in floor + 2..=d.n {
            if col >> (i - 1) & 1 == 1 {
                let window = ((1u16 << (i - 1)) - 1) & !((1u16 << floor) - 1);
                count += u64::from(window.count_ones()) - u64::from((col & window).count_ones());
            }
        }
    }
    count
}

/// Counts the six configurations by direct scans over row/column
/// tuples. The decomposition identities over `r1_local`, `r2_local`,
/// and `r1_below` provide independent cross-checks in the tests.
pub fn r_stats(d: &Diagram) -> RStats {
    let n = d.n;

    // (A): blank above a box in the same column.
    let mut r1 = 0u64;
    for j in 1..=n {
        let col = d.column_mask(j);
        for top in 1..n {
            if col >> (top - 1) & 1 == 0 {
                for bot in top + 1..=n {
                    if col >> (bot - 1) & 1 == 1 {
                        r1 += 1;
                    }
                }
            }
        }
    }

    // (B)/(B'): rows i < i1 < i2, columns j1 < j2.
    let mut r2 = 0u64;
    for j1 in 1..n {
        for j2 in j1 + 1..=n {
            let c1 = d.column_mask(j1);
            let c2 = d.column_mask(j2);
            let both = c1 & c2;
            let one = c1 ^ c2;
            let blank = !(c1 | c2);
            for i1 in 2..n {
                if both >> (i1 - 1) & 1 == 1 {
                    let above = (1u16 << (i1 - 1)) - 1;
                    let blanks_above = u64::from((blank & above).count_ones());
                    let ones_below = u64::from((one & !above & !(1 << (i1 - 1))).count_ones());
                    r2 += blanks_above * ones_below;
                }
            }
        }
    }

    // (C)/(C')/(C''): two (blank, box) vertical pairs, the lower pair
    // entirely below the upper pair, columns unrestricted.
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 1..=n {
        let col = d.column_mask(j);
        for top in 1..n {
            if col >> (top - 1) & 1 == 0 {
                for bot in top + 1..=n {
                    if col >> (bot - 1) & 1 == 1 {
                        pairs.push((top, bot));
                    }
                }
            }
        }
    }
    let mut bots_at = vec![0u64; n + 1];
    for &(_, bot) in &pairs {
        bots_at[bot] += 1;
    }
    let mut bots_before = vec![0u64; n + 2];
    for t in 1..=n {
        bots_before[t + 1] = bots_before[t] + bots_at[t];
    }
    let r3 = pairs.iter().map(|&(top, _)| bots_before[top]).sum();

    RStats { r1, r2, r3 }
}

/// The subdiagram of boxes strictly below row `i`, kept on the same
/// grid (rows are not re-indexed).
pub fn below(d: &Diagram, i: usize) -> Diagram {
    debug_assert!(i <= d.n);
    let keep = !((1u32 << i) - 1) as u16;
    Diagram {
        n: d.n,
        cols: d.cols.iter().map(|&c| c & keep).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn comp(parts: &[usize]) -> Composition {
        Composition::new(parts).unwrap()
    }

    /// Start diagram of the worked Algorithm-1 example.
    pub(crate) fn chain_example() -> Diagram {
        Diagram::from_boxes(4, &[(2, 1), (2, 3), (3, 2), (3, 3), (4, 4)]).unwrap()
    }

    #[test]
    fn rothe_examples() {
        assert_eq!(
            rothe(&p("1432")).boxes(),
            vec![(2, 2), (2, 3), (3, 2)]
        );
        assert!(rothe(&Permutation::identity(4)).is_empty());
        // longest element gives the staircase {(i,j): i+j ≤ n}
        let w0 = Permutation::longest(5);
        let staircase = rothe(&w0);
        for i in 1..=5 {
            for j in 1..=5 {
                assert_eq!(staircase.has(i, j), i + j <= 5);
            }
        }
        Permutation::for_each(5, |w| {
            assert_eq!(rothe(w).count(), w.inversions(), "w = {w}");
        });
    }

    #[test]
    fn skyline_examples() {
        let d = skyline(&comp(&[1, 3, 0, 2])).unwrap();
        assert_eq!(d.column_rows(1), vec![1, 2, 4]);
        assert_eq!(d.column_rows(2), vec![2, 4]);
        assert_eq!(d.column_rows(3), vec![2]);
        assert_eq!(d.column_rows(4), Vec::<usize>::new());
        assert!(skyline(&comp(&[0, 0, 0])).unwrap().is_empty());
        assert!(skyline(&comp(&[5, 1])).is_err());
    }

    #[test]
    fn gale_examples() {
        assert!(gale_leq(&[1, 3], &[2, 3]).unwrap());
        assert!(!gale_leq(&[2], &[1]).unwrap());
        assert!(gale_leq(&[], &[]).unwrap());
        assert!(gale_leq(&[1], &[1, 2]).is_err());
    }

    #[test]
    fn diagram_leq_examples() {
        let d = rothe(&p("1432"));
        assert!(diagram_leq(&d, &d).unwrap());
        let e4 = Diagram::empty(4);
        assert!(diagram_leq(&e4, &e4).unwrap());
        let c1 = Diagram::from_boxes(2, &[(1, 1)]).unwrap();
        let c2 = Diagram::from_boxes(2, &[(2, 1)]).unwrap();
        assert!(diagram_leq(&c1, &c2).unwrap());
        assert!(!diagram_leq(&c2, &c1).unwrap());
        assert!(diagram_leq(&c1, &Diagram::empty(3)).is_err());
        // cardinality mismatch compares as false
        assert!(!diagram_leq(&Diagram::empty(2), &c1).unwrap());
    }

    #[test]
    fn weight_examples() {
        let d = Diagram::from_boxes(
            4,
            &[(2, 1), (3, 1), (4, 1), (1, 3), (2, 3), (3, 4)],
        )
        .unwrap();
        assert_eq!(weight(&d).0, vec![1, 2, 2, 1]);
        assert_eq!(weight(&Diagram::empty(3)).0, vec![0, 0, 0]);
        let alpha = comp(&[1, 3, 0, 2]);
        assert_eq!(
            weight(&skyline(&alpha).unwrap()).0,
            alpha.parts().to_vec()
        );
    }

    #[test]
    fn r1_local_examples() {
        let d = rothe(&p("1432"));
        assert_eq!(r1_local(&d, 2, 2).unwrap(), 1);
        assert_eq!(r1_local(&d, 3, 2).unwrap(), 1);
        assert!(r1_local(&d, 1, 1).is_err());
        let chain = chain_example();
        assert_eq!(r1_local(&chain, 4, 4).unwrap(), 3);
        assert_eq!(r1_local(&chain, 3, 2).unwrap(), 2);
        assert_eq!(r1_local(&chain, 2, 1).unwrap(), 1);
    }

    #[test]
    fn r_stats_examples() {
        assert_eq!(
            r_stats(&Diagram::empty(4)),
            RStats { r1: 0, r2: 0, r3: 0 }
        );
        let d = rothe(&p("1432"));
        let rs = r_stats(&d);
        assert_eq!((rs.r1, rs.r2, rs.r3), (3, 1, 0));
        assert_eq!(r_stats(&chain_example()).r1, 8);
    }

    #[test]
    fn r2_local_worked_example() {
        // the [6]×[6] diagram driving the Algorithm-2 walkthrough
        let d = Diagram::from_boxes(
            6,
            &[
                (1, 6),
                (2, 1),
                (2, 4),
                (3, 2),
                (3, 4),
                (4, 1),
                (4, 2),
                (4, 5),
                (4, 6),
                (5, 2),
                (5, 6),
                (6, 1),
                (6, 4),
            ],
        )
        .unwrap();
        assert_eq!(r2_local(&d, 4, 5, 1, 2), 1);
        assert_eq!(r2_local(&d, 4, 5, 1, 6), 1);
        assert_eq!(r2_local(&d, 4, 5, 2, 5), 2);
        assert_eq!(r2_local(&d, 4, 5, 5, 6), 2);
        assert_eq!(r2_local(&d, 4, 5, 2, 6), 0);
        assert_eq!(r2_local(&d, 4, 5, 1, 5), 0);
    }

    #[test]
    fn below_examples() {
        let d = chain_example();
        assert_eq!(below(&d, 0), d);
        assert!(below(&d, 4).is_empty());
        let lower = below(&d, 2);
        assert_eq!(lower.boxes(), vec![(3, 2), (3, 3), (4, 4)]);
    }

    #[test]
    fn decomposition_identities_exhaustive_grid3() {
        // r1 = Σ r1_local, r2 = Σ r2_local, r3 = Σ pivots r1_local·r1_below
        for bits in 0..1u64 << 9 {
            let d = Diagram::from_cell_bits(3, bits);
            let rs = r_stats(&d);
            let mut sum1 = 0;
            let mut sum3 = 0;
            for (i, j) in d.boxes() {
                let local = r1_local(&d, i, j).unwrap();
                sum1 += local;
                sum3 += local * r1_below(&d, i);
            }
            assert_eq!(rs.r1, sum1, "{d:?}");
            assert_eq!(rs.r3, sum3, "{d:?}");
            let mut sum2 = 0;
            for i1 in 2..3 {
                for i2 in i1 + 1..=3 {
                    for j1 in 1..3 {
                        for j2 in j1 + 1..=3 {
                            sum2 += r2_local(&d, i1, i2, j1, j2);
                        }
                    }
                }
            }
            assert_eq!(rs.r2, sum2, "{d:?}");
        }
    }

    #[test]
    fn strict_gale_implies_distinct_weight_grid3() {
        let all: Vec<Diagram> = (0..1u64 << 9)
            .map(|bits| Diagram::from_cell_bits(3, bits))
            .collect();
        for c in &all {
            for d in &all {
                if c != d && diagram_leq(c, d).unwrap() {
                    assert_ne!(weight(c), weight(d), "{c:?} < {d:?}");
                }
            }
        }
    }

    #[test]
    fn diagram_leq_is_partial_order_on_random_triples() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let a = Diagram::random(5, &mut rng);
            let b = Diagram::random(5, &mut rng);
            let c = Diagram::random(5, &mut rng);
            assert!(diagram_leq(&a, &a).unwrap());
            if diagram_leq(&a, &b).unwrap() && diagram_leq(&b, &a).unwrap() {
                assert_eq!(a, b);
            }
            if diagram_leq(&a, &b).unwrap() && diagram_leq(&b, &c).unwrap() {
                assert!(diagram_leq(&a, &c).unwrap());
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let d = rothe(&p("1432"));
        let text = d.to_string();
        assert_eq!(text, "....\n.##.\n.#..\n....");
        assert_eq!(text.parse::<Diagram>().unwrap(), d);
        assert!("..\n.x".parse::<Diagram>().is_err());
        assert!("..\n.".parse::<Diagram>().is_err());
    }

    #[test]
    fn json_round_trip() {
        let d = rothe(&p("1432"));
        let json = serde_json::to_string(&d).unwrap();
        assert_eq!(json, r#"{"n":4,"boxes":[[2,2],[2,3],[3,2]]}"#);
        let back: Diagram = serde_json::from_str(&json).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn cell_bits_cover_every_subset() {
        let mut seen = std::collections::HashSet::new();
        for bits in 0..1u64 << 9 {
            seen.insert(Diagram::from_cell_bits(3, bits));
        }
        assert_eq!(seen.len(), 512);
    }
}
