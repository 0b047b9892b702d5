//! Permutations, compositions, pattern counting, reduced words, and the
//! Macdonald specialization formula.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::{Error, MAX_N};

/// A permutation of `[n]` in one-line notation.
///
/// Entries are the values `w(1), …, w(n)`, each in `1..=n`. Sizes are
/// capped at [`MAX_N`] so that downstream grid representations stay
/// word-sized.
///
/// ```
/// use schubitope::perm::Permutation;
/// let w: Permutation = "1432".parse().unwrap();
/// assert_eq!(w.size(), 4);
/// assert_eq!(w.value(2), 4);
/// assert_eq!(w.inversions(), 3);
/// ```
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    word: Vec<u8>,
}

impl Permutation {
    /// Builds a permutation from one-line notation (values `1..=n`).
    pub fn from_word(word: &[usize]) -> Result<Self, Error> {
        let n = word.len();
        if n == 0 || n > MAX_N {
            return Err(Error::SizeBound { n, max: MAX_N });
        }
        let mut seen = vec![false; n + 1];
        for &v in word {
            if v == 0 || v > n || seen[v] {
                return Err(Error::InvalidPermutation(format!(
                    "{word:?} is not a rearrangement of 1..={n}"
                )));
            }
            seen[v] = true;
        }
        Ok(Self {
            word: word.iter().map(|&v| v as u8).collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1 && n <= MAX_N, "size {n} out of range");
        Self {
            word: (1..=n as u8).collect(),
        }
    }

    /// The longest element `w₀ = n…21`.
    pub fn longest(n: usize) -> Self {
        assert!(n >= 1 && n <= MAX_N, "size {n} out of range");
        Self {
            word: (1..=n as u8).rev().collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.word.len()
    }

    /// `w(i)` with 1-based `i`.
    pub fn value(&self, i: usize) -> usize {
        self.word[i - 1] as usize
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn is_identity(&self) -> bool {
        self.word.iter().enumerate().all(|(i, &v)| v as usize == i + 1)
    }

    pub fn inverse(&self) -> Self {
        let mut word = vec![0u8; self.word.len()];
        for (i, &v) in self.word.iter().enumerate() {
            word[v as usize - 1] = i as u8 + 1;
        }
        Self { word }
    }

    /// Number of inversions, i.e. the Coxeter length ℓ(w).
    pub fn inversions(&self) -> usize {
        let w = &self.word;
        let mut count = 0;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// `w·sᵢ`: swaps the entries at positions `i` and `i+1` (1-based).
    pub fn swap_adjacent(&self, i: usize) -> Self {
        debug_assert!(i >= 1 && i < self.word.len() + 1);
        let mut word = self.word.clone();
        word.swap(i - 1, i);
        Self { word }
    }

    /// Positions `i` with `w(i) > w(i+1)` (right descents).
    pub fn descents(&self) -> Vec<usize> {
        (1..self.word.len())
            .filter(|&i| self.word[i - 1] > self.word[i])
            .collect()
    }

    /// Smallest `i` with `w(i) < w(i+1)`, or `None` for `w₀`.
    pub fn first_ascent(&self) -> Option<usize> {
        (1..self.word.len()).find(|&i| self.word[i - 1] < self.word[i])
    }

    /// Whether `w` is a concatenation of decreasing blocks on consecutive
    /// intervals (a layered permutation).
    pub fn is_layered(&self) -> bool {
        let n = self.size();
        let mut start = 1;
        while start <= n {
            // a block starting at `start` with top value v covers start..=v
            let top = self.value(start);
            if top < start {
                return false;
            }
            for (offset, pos) in (start..=top).enumerate() {
                if self.value(pos) != top - offset {
                    return false;
                }
            }
            start = top + 1;
        }
        true
    }

    /// Calls `f` on every permutation of `[n]` in lexicographic order.
    pub fn for_each(n: usize, mut f: impl FnMut(&Permutation)) {
        assert!(n >= 1 && n <= MAX_N, "size {n} out of range");
        let mut cur = Permutation::identity(n);
        loop {
            f(&cur);
            if !next_lex(&mut cur.word) {
                break;
            }
        }
    }

    /// All permutations of `[n]` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        Self::for_each(n, |w| out.push(w.clone()));
        out
    }
}

/// Advances `word` to its lexicographic successor in place; false at the end.
fn next_lex(word: &mut [u8]) -> bool {
    let n = word.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| word[i] < word[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| word[j] > word[i]).unwrap();
    word.swap(i, j);
    word[i + 1..].reverse();
    true
}

impl fmt::Display for Permutation {
    /// Digits for `n ≤ 9`, comma-separated values otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.size() <= 9 {
            for &v in &self.word {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.word.iter().map(|v| v.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl serde::Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let word: Vec<usize> = if s.contains(',') {
            s.split(',')
                .enumerate()
                .map(|(pos, tok)| {
                    tok.trim().parse::<usize>().map_err(|_| Error::Parse {
                        pos,
                        msg: format!("bad entry {tok:?}"),
                    })
                })
                .collect::<Result<_, _>>()?
        } else {
            s.trim()
                .chars()
                .enumerate()
                .map(|(pos, c)| {
                    c.to_digit(10).map(|d| d as usize).ok_or(Error::Parse {
                        pos,
                        msg: format!("bad digit {c:?}"),
                    })
                })
                .collect::<Result<_, _>>()?
        };
        Permutation::from_word(&word)
    }
}

/// A weak composition `(α₁, …, αₙ)` of non-negative parts.
///
/// Parts are capped at 255 so exponent vectors pack into bytes.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition {
    parts: Vec<u8>,
}

impl Composition {
    pub fn new(parts: &[usize]) -> Result<Self, Error> {
        let n = parts.len();
        if n == 0 || n > MAX_N {
            return Err(Error::SizeBound { n, max: MAX_N });
        }
        if let Some(&p) = parts.iter().find(|&&p| p > u8::MAX as usize) {
            return Err(Error::InvalidComposition(format!("part {p} exceeds 255")));
        }
        Ok(Self {
            parts: parts.iter().map(|&p| p as u8).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `αᵢ` with 1-based `i`.
    pub fn part(&self, i: usize) -> usize {
        self.parts[i - 1] as usize
    }

    pub fn parts(&self) -> &[u8] {
        &self.parts
    }

    pub fn sum(&self) -> usize {
        self.parts.iter().map(|&p| p as usize).sum()
    }

    pub fn is_weakly_decreasing(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] >= w[1])
    }

    /// Smallest `i` with `αᵢ < αᵢ₊₁`, or `None` if weakly decreasing.
    pub fn first_inversion(&self) -> Option<usize> {
        (1..self.parts.len()).find(|&i| self.parts[i - 1] < self.parts[i])
    }

    /// Swaps parts at positions `i` and `i+1` (1-based).
    pub fn swap_adjacent(&self, i: usize) -> Self {
        let mut parts = self.parts.clone();
        parts.swap(i - 1, i);
        Self { parts }
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Composition({self})")
    }
}

impl serde::Serialize for Composition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for Composition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let parts: Vec<usize> = s
            .split(',')
            .enumerate()
            .map(|(pos, tok)| {
                tok.trim().parse::<usize>().map_err(|_| Error::Parse {
                    pos,
                    msg: format!("bad part {tok:?}"),
                })
            })
            .collect::<Result<_, _>>()?;
        Composition::new(&parts)
    }
}

/// A reduced word `(a₁, …, a_ℓ)` for a permutation: `s_{a₁}⋯s_{a_ℓ}`
/// equals the permutation and ℓ is its inversion number.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducedWord {
    pub letters: Vec<u8>,
}

impl ReducedWord {
    /// Evaluates the word back to a permutation of `[n]`.
    pub fn evaluate(&self, n: usize) -> Permutation {
        let mut w = Permutation::identity(n);
        for &a in &self.letters {
            w = w.swap_adjacent(a as usize);
        }
        w
    }
}

/// Number of occurrences of `u` as a pattern of `w`.
///
/// Counts index subsequences `i₁ < … < i_m` whose values are in the same
/// relative order as `u`. Returns 0 when `u` is longer than `w`.
///
/// ```
/// use schubitope::perm::{pattern_count, Permutation};
/// let w: Permutation = "1432".parse().unwrap();
/// let u: Permutation = "132".parse().unwrap();
/// assert_eq!(pattern_count(&w, &u), 3);
/// ```
pub fn pattern_count(w: &Permutation, u: &Permutation) -> u64 {
    let mut count = 0u64;
    scan_patterns(w, u, &mut |_| count += 1);
    count
}

/// All occurrences of `u` in `w` as strictly increasing 1-based index
/// tuples, in lexicographic order.
pub fn pattern_occurrences(w: &Permutation, u: &Permutation) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    scan_patterns(w, u, &mut |occ| {
        out.push(occ.iter().map(|&i| i + 1).collect())
    });
    out
}

/// DFS over index subsequences with prefix pruning; `emit` receives
/// 0-based position tuples.
fn scan_patterns(w: &Permutation, u: &Permutation, emit: &mut impl FnMut(&[usize])) {
    let n = w.size();
    let m = u.size();
    if m > n {
        return;
    }
    let wv = w.word();
    let uv = u.word();
    let mut chosen: Vec<usize> = Vec::with_capacity(m);

    fn rec(
        wv: &[u8],
        uv: &[u8],
        start: usize,
        chosen: &mut Vec<usize>,
        emit: &mut impl FnMut(&[usize]),
    ) {
        let k = chosen.len();
        if k == uv.len() {
            emit(chosen);
            return;
        }
        // not enough positions left to finish the pattern
        let last = wv.len() - (uv.len() - k) + 1;
        for pos in start..last {
            let v = wv[pos];
            let consistent = chosen
                .iter()
                .enumerate()
                .all(|(t, &p)| (wv[p] < v) == (uv[t] < uv[k]));
            if consistent {
                chosen.push(pos);
                rec(wv, uv, pos + 1, chosen, emit);
                chosen.pop();
            }
        }
    }

    rec(wv, uv, 0, &mut chosen, emit);
}

/// All reduced words of `w`, deduplicated by construction.
///
/// Recursive descent on right descents: every reduced word of `w` is a
/// reduced word of `w·s_j` followed by `j`, for some descent `j`.
pub fn reduced_words(w: &Permutation) -> Vec<ReducedWord> {
    let mut out = Vec::new();
    let mut letters: Vec<u8> = Vec::with_capacity(w.inversions());

    fn rec(w: &Permutation, letters: &mut Vec<u8>, out: &mut Vec<ReducedWord>) {
        let descents = w.descents();
        if descents.is_empty() {
            let mut word = letters.clone();
            word.reverse();
            out.push(ReducedWord { letters: word });
            return;
        }
        for j in descents {
            letters.push(j as u8);
            rec(&w.swap_adjacent(j), letters, out);
            letters.pop();
        }
    }

    rec(w, &mut letters, &mut out);
    out.sort();
    out
}

/// Principal specialization ν_w of the Schubert polynomial via the
/// Macdonald formula: `ν_w = (1/ℓ!) Σ a₁⋯a_ℓ` over reduced words.
///
/// The partial sum is accumulated in arbitrary precision and the final
/// division by ℓ! is checked to be exact; a remainder would indicate a
/// bug and aborts with a diagnostic. Enumeration is exponential in ℓ, so
/// this is intended for small sizes (the cross-check range is `n ≤ 6`).
pub fn macdonald_nu(w: &Permutation) -> u64 {
    let mut sum = BigUint::zero();
    let mut product = BigUint::one();

    fn rec(w: &Permutation, product: &mut BigUint, sum: &mut BigUint) {
        let descents = w.descents();
        if descents.is_empty() {
            *sum += &*product;
            return;
        }
        for j in descents {
            *product *= j as u32;
            rec(&w.swap_adjacent(j), product, sum);
            *product /= j as u32;
        }
    }

    rec(w, &mut product, &mut sum);

    let ell = w.inversions();
    let mut fact = BigUint::one();
    for k in 2..=ell as u32 {
        fact *= k;
    }
    let (quot, rem) = num_integer_div_rem(&sum, &fact);
    assert!(
        rem.is_zero(),
        "Macdonald sum {sum} for w={w} not divisible by {ell}!"
    );
    u64::try_from(&quot).unwrap_or_else(|_| panic!("ν_{w} = {quot} exceeds u64"))
}

fn num_integer_div_rem(a: &BigUint, b: &BigUint) -> (BigUint, BigUint) {
    (a / b, a % b)
}

/// The layered permutation with decreasing blocks of the given sizes.
///
/// ```
/// use schubitope::perm::layered;
/// assert_eq!(layered(&[2, 3, 2, 1]).unwrap().to_string(), "21543768");
/// ```
pub fn layered(blocks: &[usize]) -> Result<Permutation, Error> {
    if blocks.is_empty() || blocks.iter().any(|&b| b == 0) {
        return Err(Error::InvalidPermutation(
            "layered blocks must be a non-empty list of positive sizes".into(),
        ));
    }
    let mut word = Vec::new();
    let mut base = 0;
    for &b in blocks {
        word.extend((base + 1..=base + b).rev());
        base += b;
    }
    Permutation::from_word(&word)
}

/// Whether `w` avoids the pattern 132 (ν_w = 1 exactly for these).
pub fn is_dominant(w: &Permutation) -> bool {
    let pattern = Permutation::from_word(&[1, 3, 2]).unwrap();
    pattern_count(w, &pattern) == 0
}
