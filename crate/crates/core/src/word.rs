//! Words, the deletion/insertion metric, deletion balls, and code validation.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// A single symbol of the alphabet B_q = {0, 1, ..., q-1}.
pub type Letter = u16;

/// A finite sequence of letters.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_letter(&self) -> Option<Letter> {
        self.0.iter().copied().max()
    }
}

impl From<&[Letter]> for Word {
    fn from(letters: &[Letter]) -> Self {
        Word(letters.to_vec())
    }
}

impl<const N: usize> From<[Letter; N]> for Word {
    fn from(letters: [Letter; N]) -> Self {
        Word(letters.to_vec())
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for l in &self.0 {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split_whitespace()
            .map(|tok| {
                tok.parse::<Letter>()
                    .map_err(|_| Error::InvalidArgument(format!("bad letter {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

/// A duplicate-free set of equal-length words over B_q.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Code {
    n: usize,
    q: Letter,
    words: BTreeSet<Word>,
}

impl Code {
    /// Builds a code, rejecting words of the wrong length, letters ≥ q, and
    /// duplicates.
    pub fn from_words(n: usize, q: Letter, words: impl IntoIterator<Item = Word>) -> Result<Code> {
        let mut set = BTreeSet::new();
        for w in words {
            if w.len() != n {
                return Err(Error::InvalidArgument(format!(
                    "word {w} has length {}, expected {n}",
                    w.len()
                )));
            }
            if let Some(l) = w.letters().iter().find(|&&l| l >= q) {
                return Err(Error::InvalidArgument(format!(
                    "word {w} uses letter {l} outside the alphabet of size {q}"
                )));
            }
            if !set.insert(w.clone()) {
                return Err(Error::InvalidArgument(format!("duplicate word {w}")));
            }
        }
        Ok(Code { n, q, words: set })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> Letter {
        self.q
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.contains(w)
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.words.iter()
    }

    pub fn word_set(&self) -> &BTreeSet<Word> {
        &self.words
    }
}

/// All words of B_q^n in lexicographic order.
pub fn all_words(n: usize, q: Letter) -> Vec<Word> {
    if q == 0 {
        return if n == 0 { vec![Word::new(vec![])] } else { vec![] };
    }
    let total = (q as usize).checked_pow(n as u32).expect("q^n overflows");
    let mut out = Vec::with_capacity(total);
    let mut cur = vec![0 as Letter; n];
    loop {
        out.push(Word::new(cur.clone()));
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] + 1 < q {
                cur[i] += 1;
                for x in &mut cur[i + 1..] {
                    *x = 0;
                }
                break;
            }
        }
    }
}

/// The set of all words obtained from `x` by deleting exactly `s` letters.
pub fn deletion_ball(x: &Word, s: usize) -> Result<BTreeSet<Word>> {
    let n = x.len();
    if s > n {
        return Err(Error::InvalidArgument(format!(
            "cannot delete {s} letters from a word of length {n}"
        )));
    }
    let keep = n - s;
    let mut out = BTreeSet::new();
    // Iterate over all keep-subsets of positions via a moving index vector.
    let mut idx: Vec<usize> = (0..keep).collect();
    if keep == 0 {
        out.insert(Word::new(vec![]));
        return Ok(out);
    }
    loop {
        out.insert(idx.iter().map(|&i| x.letters()[i]).collect());
        // Advance to the next position combination.
        let mut i = keep;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if idx[i] + 1 + (keep - 1 - i) < n {
                idx[i] += 1;
                for j in i + 1..keep {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn lcs_len(x: &[Letter], y: &[Letter]) -> usize {
    let (short, long) = if x.len() <= y.len() { (x, y) } else { (y, x) };
    let mut row = vec![0usize; short.len() + 1];
    for &ly in long {
        let mut diag = 0;
        for (j, &ls) in short.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = if ls == ly {
                diag + 1
            } else {
                up.max(row[j])
            };
            diag = up;
        }
    }
    row[short.len()]
}

/// The deletion/insertion distance: the least number of single-letter
/// deletions and insertions transforming `x` into `y`.
pub fn indel_distance(x: &Word, y: &Word) -> usize {
    x.len() + y.len() - 2 * lcs_len(x.letters(), y.letters())
}

/// Minimum distance over unordered pairs of distinct codewords.
pub fn min_distance(c: &Code) -> Result<usize> {
    if c.len() < 2 {
        return Err(Error::InvalidArgument(
            "min_distance needs at least two codewords".into(),
        ));
    }
    let words: Vec<&Word> = c.words().collect();
    let m = (0..words.len() - 1)
        .into_par_iter()
        .map(|i| {
            let mut best = usize::MAX;
            for j in i + 1..words.len() {
                best = best.min(indel_distance(words[i], words[j]));
            }
            best
        })
        .min()
        .expect("nonempty");
    Ok(m)
}

/// First pair of codewords whose s-deletion balls intersect, together with a
/// shared deleted word, in deterministic (lexicographic) order.
pub fn find_ball_collision(c: &Code, s: usize) -> Option<(Word, Word, Word)> {
    let mut owner: HashMap<Word, &Word> = HashMap::new();
    for w in c.words() {
        let ball = deletion_ball(w, s).ok()?;
        for d in ball {
            if let Some(prev) = owner.get(&d) {
                return Some(((*prev).clone(), w.clone(), d));
            }
            owner.insert(d, w);
        }
    }
    None
}

/// Whether all s-deletion balls of `c` are pairwise disjoint.
///
/// Two independent routes are evaluated on every call — direct ball
/// disjointness and the distance criterion min_distance > 2s — and must
/// agree; a disagreement panics, since it would mean one of the two
/// implementations is wrong.
pub fn is_deletion_correcting(c: &Code, s: usize) -> bool {
    assert!(s >= 1, "s must be at least 1");
    if c.len() <= 1 {
        return true;
    }
    assert!(
        s <= c.n(),
        "cannot delete {s} letters from words of length {}",
        c.n()
    );
    let by_balls = find_ball_collision(c, s).is_none();
    let by_distance = min_distance(c).expect("|C| >= 2") > 2 * s;
    assert_eq!(
        by_balls, by_distance,
        "internal error: ball-disjointness and min-distance checks disagree"
    );
    by_balls
}

/// Whether the (pairwise-disjoint) s-deletion balls of `c` jointly cover
/// every word obtainable by deleting s letters from some word of B_q^n.
///
/// Requires `is_deletion_correcting(c, s)`; for n=4, s=1 the right-hand side
/// is all of B_q³, so only the covered count is needed.
pub fn is_perfect(c: &Code, s: usize) -> Result<bool> {
    if !is_deletion_correcting(c, s) {
        return Err(Error::InvalidArgument(
            "is_perfect requires a code whose deletion balls are pairwise disjoint".into(),
        ));
    }
    if c.n() == 4 && s == 1 {
        let covered: usize = c
            .words()
            .map(|w| deletion_ball(w, 1).expect("s=1 <= n=4").len())
            .sum();
        return Ok(covered as u64 == (c.q() as u64).pow(3));
    }
    if s > c.n() {
        return Err(Error::InvalidArgument(format!(
            "cannot delete {s} letters from words of length {}",
            c.n()
        )));
    }
    let mut covered: BTreeSet<Word> = BTreeSet::new();
    for w in c.words() {
        covered.extend(deletion_ball(w, s)?);
    }
    let mut ambient: BTreeSet<Word> = BTreeSet::new();
    for w in all_words(c.n(), c.q()) {
        ambient.extend(deletion_ball(&w, s)?);
    }
    Ok(covered == ambient)
}

/// Structural class of a length-4 word, determined by which positions carry
/// equal letters. The class fixes the size of the 1-deletion ball.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum WordClass {
    /// (a,a,a,a) — ball size 1.
    K1,
    /// (a,a,a,b), (b,a,a,a), (a,a,b,b) — ball size 2.
    K2,
    /// (a,a,b,a), (a,b,a,a), (a,a,b,c), (b,a,a,c), (b,c,a,a) — ball size 3.
    K31,
    /// (a,b,b,a) — ball size 3.
    K32,
    /// (a,b,c,d), all distinct — ball size 4.
    K41,
    /// (a,b,c,a) — ball size 4.
    K42,
    /// (a,b,a,b), (a,b,a,c), (a,b,c,b) — ball size 4.
    K43,
}

impl WordClass {
    pub const ALL: [WordClass; 7] = [
        WordClass::K1,
        WordClass::K2,
        WordClass::K31,
        WordClass::K32,
        WordClass::K41,
        WordClass::K42,
        WordClass::K43,
    ];

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&c| c == self).unwrap()
    }

    /// Size of the 1-deletion ball of any word in this class.
    pub fn ball_size(self) -> usize {
        match self {
            WordClass::K1 => 1,
            WordClass::K2 => 2,
            WordClass::K31 | WordClass::K32 => 3,
            WordClass::K41 | WordClass::K42 | WordClass::K43 => 4,
        }
    }
}

impl fmt::Display for WordClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            WordClass::K1 => "K1",
            WordClass::K2 => "K2",
            WordClass::K31 => "K3.1",
            WordClass::K32 => "K3.2",
            WordClass::K41 => "K4.1",
            WordClass::K42 => "K4.2",
            WordClass::K43 => "K4.3",
        };
        f.write_str(s)
    }
}

/// Classifies a length-4 word by the equality pattern of its positions.
pub fn classify(x: &Word) -> Result<WordClass> {
    let l = x.letters();
    if l.len() != 4 {
        return Err(Error::InvalidArgument(format!(
            "classify needs a length-4 word, got length {}",
            l.len()
        )));
    }
    let (a, b, c, d) = (l[0], l[1], l[2], l[3]);
    let mut distinct: Vec<Letter> = l.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    Ok(match distinct.len() {
        1 => WordClass::K1,
        4 => WordClass::K41,
        3 => {
            // Exactly one position pair is equal.
            if a == b || b == c || c == d {
                WordClass::K31 // (a,a,b,c), (b,a,a,c), (b,c,a,a)
            } else if a == d {
                WordClass::K42 // (a,b,c,a)
            } else {
                WordClass::K43 // (a,b,a,c), (a,b,c,b)
            }
        }
        2 => {
            if (a == b && b == c) || (b == c && c == d) {
                WordClass::K2 // (a,a,a,b), (b,a,a,a)
            } else if a == b && c == d {
                WordClass::K2 // (a,a,b,b)
            } else if (a == b && b == d) || (a == c && c == d) {
                WordClass::K31 // (a,a,b,a), (a,b,a,a)
            } else if a == d && b == c {
                WordClass::K32 // (a,b,b,a)
            } else {
                WordClass::K43 // (a,b,a,b)
            }
        }
        _ => unreachable!("a length-4 word has 1..=4 distinct letters"),
    })
}

/// Structural class of a length-3 word.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum TripleClass {
    /// (a,a,a)
    U,
    /// (a,a,b) or (a,b,b), a ≠ b
    V,
    /// (a,b,a), a ≠ b
    W,
    /// (a,b,c), all distinct
    Z,
}

impl TripleClass {
    pub const ALL: [TripleClass; 4] = [
        TripleClass::U,
        TripleClass::V,
        TripleClass::W,
        TripleClass::Z,
    ];

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&c| c == self).unwrap()
    }
}

impl fmt::Display for TripleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TripleClass::U => "U",
            TripleClass::V => "V",
            TripleClass::W => "W",
            TripleClass::Z => "Z",
        };
        f.write_str(s)
    }
}

/// Classifies a length-3 word.
pub fn classify_triple(x: &Word) -> Result<TripleClass> {
    let l = x.letters();
    if l.len() != 3 {
        return Err(Error::InvalidArgument(format!(
            "classify_triple needs a length-3 word, got length {}",
            l.len()
        )));
    }
    let (a, b, c) = (l[0], l[1], l[2]);
    Ok(if a == b && b == c {
        TripleClass::U
    } else if a == b || b == c {
        TripleClass::V
    } else if a == c {
        TripleClass::W
    } else {
        TripleClass::Z
    })
}

/// Number of length-3 words of each class over B_q:
/// |U| = q, |V| = 2q(q−1), |W| = q(q−1), |Z| = q(q−1)(q−2).
pub fn ambient_triple_counts(q: Letter) -> [u64; 4] {
    let q = q as u64;
    [
        q,
        2 * q * q.saturating_sub(1),
        q * q.saturating_sub(1),
        q * q.saturating_sub(1) * q.saturating_sub(2),
    ]
}

/// Structural census of a length-4 code: how many codewords fall in each
/// class, and how many distinct length-3 words of each class the 1-deletion
/// balls of each codeword class cover.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Profile {
    pub q: Letter,
    pub class_counts: [usize; 7],
    pub coverage: [[usize; 4]; 7],
}

impl Profile {
    pub fn count(&self, c: WordClass) -> usize {
        self.class_counts[c.index()]
    }

    /// Distinct triples of class `t` covered by the balls of codewords of
    /// class `c`.
    pub fn covered(&self, c: WordClass, t: TripleClass) -> usize {
        self.coverage[c.index()][t.index()]
    }

    /// Distinct triples of class `t` covered by the whole code. Meaningful
    /// as a sum only when balls are pairwise disjoint.
    pub fn covered_total(&self, t: TripleClass) -> usize {
        (0..7).map(|c| self.coverage[c][t.index()]).sum()
    }
}

/// Computes the census above. Words must have length 4.
pub fn profile(c: &Code) -> Profile {
    assert!(c.n() == 4, "profile is defined for length-4 codes");
    let mut class_counts = [0usize; 7];
    let mut cover_sets: Vec<[BTreeSet<Word>; 4]> = (0..7).map(|_| Default::default()).collect();
    for w in c.words() {
        let cls = classify(w).expect("length checked");
        class_counts[cls.index()] += 1;
        for t in deletion_ball(w, 1).expect("length 4") {
            let tc = classify_triple(&t).expect("length 3");
            cover_sets[cls.index()][tc.index()].insert(t);
        }
    }
    let mut coverage = [[0usize; 4]; 7];
    for ci in 0..7 {
        for ti in 0..4 {
            coverage[ci][ti] = cover_sets[ci][ti].len();
        }
    }
    Profile {
        q: c.q(),
        class_counts,
        coverage,
    }
}
