//! Bound formulas and independent exact-search oracles.
//!
//! The search oracles are deliberately separate from the constructions:
//! [`max_code_search`] proves maximum code sizes by branch and bound over
//! deletion-ball disjointness, and [`exact_cover_sqs`] finds quadruple
//! systems by exact cover, with no step-property promise. Construction and
//! oracle agreeing is the evidence the test suite is after.

use std::collections::BTreeSet;

use crate::cover::{Budget, CoverOutcome, ExactCover};
use crate::error::{Error, Result};
use crate::sqs::{c3, triple_rank, Quad};
use crate::word::{all_words, deletion_ball, Code, Letter, Word};

/// General single-deletion upper bound ⌊(q^{n−1} + (n−2)q^{n−2} + q)/n⌋.
pub fn levenshtein_bound(n: usize, q: usize) -> Result<u64> {
    if n < 2 || q < 2 {
        return Err(Error::InvalidArgument(format!(
            "bound needs n ≥ 2 and q ≥ 2, got n={n}, q={q}"
        )));
    }
    let q = q as u64;
    let num = q.pow(n as u32 - 1) + (n as u64 - 2) * q.pow(n as u32 - 2) + q;
    Ok(num / n as u64)
}

/// The sharp even-alphabet bound q²(q+2)/4 for length 4, attained by the
/// constructions in this crate.
pub fn theorem2_bound(q: usize) -> Result<u64> {
    if q < 2 || q % 2 != 0 {
        return Err(Error::UnsupportedParameter(format!(
            "sharp bound applies to even q ≥ 2, got {q}"
        )));
    }
    let q = q as u64;
    Ok(q * q * (q + 2) / 4)
}

/// Bound summary for one (n, q), as printed by the command-line tool.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BoundReport {
    pub n: usize,
    pub q: usize,
    pub levenshtein: u64,
    /// Sharp bound; present only for n = 4 with even q.
    pub theorem2: Option<u64>,
    /// Size actually reached by a construction or search, when known.
    pub achieved: Option<u64>,
}

/// Builds the report, attaching the sharp bound where it applies.
pub fn bound_report(n: usize, q: usize, achieved: Option<u64>) -> Result<BoundReport> {
    let levenshtein = levenshtein_bound(n, q)?;
    let theorem2 = if n == 4 && q % 2 == 0 {
        Some(theorem2_bound(q)?)
    } else {
        None
    };
    Ok(BoundReport {
        n,
        q,
        levenshtein,
        theorem2,
        achieved,
    })
}

/// Result of a maximum-code search.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SearchOutcome {
    /// Largest code size found.
    pub size: usize,
    /// A code of that size.
    pub witness: Code,
    /// True when the search space was exhausted, so `size` is the maximum;
    /// false when the budget ran out first and `size` is a lower bound.
    pub exact: bool,
}

/// Class of a length-3 word, used by the packing bounds: all-equal,
/// two-equal-adjacent (xxy/xyy), sandwich (xyx), or all-distinct.
#[derive(Clone, Copy, PartialEq, Eq)]
enum TripleKind {
    AllEqual,
    TwoEqual,
    Sandwich(Letter),
    Distinct,
}

fn triple_kind(t: &[Letter]) -> TripleKind {
    let (x, y, z) = (t[0], t[1], t[2]);
    if x == y && y == z {
        TripleKind::AllEqual
    } else if x == z {
        TripleKind::Sandwich(x)
    } else if x == y || y == z {
        TripleKind::TwoEqual
    } else {
        TripleKind::Distinct
    }
}

/// Shared search state for the branch and bound.
struct SearchState {
    words: Vec<Word>,
    /// All length n−1 words, indexed by rank, for classifying coverage.
    shorter: Vec<Word>,
    /// Deduplicated ball of each word, as ranks of length n−1 words.
    balls: Vec<Vec<usize>>,
    covered: Vec<bool>,
    /// Uncovered length-3 word counts per [`TripleKind`]; n = 4 only.
    kind_counts: Option<KindCounts>,
    chosen: Vec<usize>,
    best: Vec<usize>,
    nodes: u64,
    exact: bool,
}

struct KindCounts {
    all_equal: usize,
    two_equal: usize,
    sandwich_total: usize,
    sandwich_by_outer: Vec<usize>,
    distinct: usize,
}

impl SearchState {
    /// Fractional packing bound on how many more words can join: every
    /// word's ball must fit in the uncovered capacity. For n = 4 two
    /// class-weighted duals apply (weights 1, ½, ¼, ¼ over the triple
    /// kinds, and the variant trading the sandwich mass for the per-outer
    /// capacity of sandwich triples, which only (x,y,z,x)-shaped words
    /// consume two at a time); otherwise a greedy fill of the remaining
    /// capacity with the smallest available balls.
    fn additional_bound(&self, from: usize) -> usize {
        if let Some(k) = &self.kind_counts {
            let a = 4 * k.all_equal + 2 * k.two_equal + k.sandwich_total + k.distinct;
            let cap: usize = k.sandwich_by_outer.iter().map(|&w| w / 2).sum();
            let b = 4 * k.all_equal + 2 * k.two_equal + k.distinct + 2 * cap;
            a.min(b) / 4
        } else {
            let capacity = self.covered.iter().filter(|&&c| !c).count();
            let mut sizes: Vec<usize> = (from..self.words.len())
                .filter(|&i| self.available(i))
                .map(|i| self.balls[i].len())
                .collect();
            sizes.sort_unstable();
            let mut used = 0;
            let mut count = 0;
            for s in sizes {
                if used + s > capacity {
                    break;
                }
                used += s;
                count += 1;
            }
            count
        }
    }

    fn available(&self, i: usize) -> bool {
        self.balls[i].iter().all(|&r| !self.covered[r])
    }

    fn set_covered(&mut self, i: usize, value: bool) {
        for r in 0..self.balls[i].len() {
            let rank = self.balls[i][r];
            self.covered[rank] = value;
            if let Some(k) = &mut self.kind_counts {
                let delta: isize = if value { -1 } else { 1 };
                let bump = |c: &mut usize| *c = c.wrapping_add_signed(delta);
                match triple_kind(self.shorter[rank].letters()) {
                    TripleKind::AllEqual => bump(&mut k.all_equal),
                    TripleKind::TwoEqual => bump(&mut k.two_equal),
                    TripleKind::Sandwich(outer) => {
                        bump(&mut k.sandwich_total);
                        bump(&mut k.sandwich_by_outer[outer as usize]);
                    }
                    TripleKind::Distinct => bump(&mut k.distinct),
                }
            }
        }
    }

    fn dfs(&mut self, mut i: usize, budget: &Budget) {
        self.nodes += 1;
        if budget.exhausted(self.nodes) {
            self.exact = false;
            return;
        }
        while i < self.words.len() && !self.available(i) {
            i += 1;
        }
        if i == self.words.len() {
            if self.chosen.len() > self.best.len() {
                self.best = self.chosen.clone();
            }
            return;
        }
        if self.chosen.len() + self.additional_bound(i) <= self.best.len() {
            return;
        }
        self.chosen.push(i);
        self.set_covered(i, true);
        self.dfs(i + 1, budget);
        self.set_covered(i, false);
        self.chosen.pop();
        if !self.exact {
            return;
        }
        self.dfs(i + 1, budget);
    }
}

// The per-rank length-3 words are needed when updating kind counts; keep
// them in the state rather than recomputing on every cover flip.
impl SearchState {
    fn new(n: usize, q: usize) -> Result<SearchState> {
        let words = all_words(n, q as Letter);
        let shorter = all_words(n - 1, q as Letter);
        let rank = |w: &Word| -> usize {
            w.letters()
                .iter()
                .fold(0usize, |acc, &l| acc * q + l as usize)
        };
        let mut balls = Vec::with_capacity(words.len());
        for w in &words {
            let ball: BTreeSet<usize> = deletion_ball(w, 1)?.iter().map(&rank).collect();
            balls.push(ball.into_iter().collect());
        }
        let kind_counts = if n == 4 {
            let mut k = KindCounts {
                all_equal: 0,
                two_equal: 0,
                sandwich_total: 0,
                sandwich_by_outer: vec![0; q],
                distinct: 0,
            };
            for t in &shorter {
                match triple_kind(t.letters()) {
                    TripleKind::AllEqual => k.all_equal += 1,
                    TripleKind::TwoEqual => k.two_equal += 1,
                    TripleKind::Sandwich(outer) => {
                        k.sandwich_total += 1;
                        k.sandwich_by_outer[outer as usize] += 1;
                    }
                    TripleKind::Distinct => k.distinct += 1,
                }
            }
            Some(k)
        } else {
            None
        };
        Ok(SearchState {
            covered: vec![false; shorter.len()],
            shorter,
            words,
            balls,
            kind_counts,
            chosen: Vec::new(),
            best: Vec::new(),
            nodes: 0,
            exact: true,
        })
    }
}

/// Finds a maximum single-deletion-correcting code in B_q^n by branch and
/// bound, deterministic (lexicographic include-first order) and seeded by
/// a greedy pass.
pub fn max_code_search(n: usize, q: usize, budget: &Budget) -> Result<SearchOutcome> {
    max_code_search_with_start(n, q, None, budget)
}

/// As [`max_code_search`], optionally warm-started from a known code whose
/// size then serves as the initial lower bound.
pub fn max_code_search_with_start(
    n: usize,
    q: usize,
    warm: Option<&Code>,
    budget: &Budget,
) -> Result<SearchOutcome> {
    if n < 2 || q < 2 {
        return Err(Error::InvalidArgument(format!(
            "search needs n ≥ 2 and q ≥ 2, got n={n}, q={q}"
        )));
    }
    if (q as f64).powi(n as i32) > 10_000.0 {
        return Err(Error::InvalidArgument(format!(
            "state space q^n = {q}^{n} exceeds the exact-search guard of 10^4"
        )));
    }
    let mut state = SearchState::new(n, q)?;

    // Greedy seed: sweep in word order, keeping whatever still fits.
    let mut greedy = Vec::new();
    for i in 0..state.words.len() {
        if state.available(i) {
            state.set_covered(i, true);
            greedy.push(i);
        }
    }
    for &i in &greedy {
        state.set_covered(i, false);
    }
    state.best = greedy;

    if let Some(code) = warm {
        if code.n() != n || code.q() as usize > q {
            return Err(Error::InvalidArgument(
                "warm-start code does not live in the searched space".into(),
            ));
        }
        let mut indices = Vec::with_capacity(code.len());
        for w in code.words() {
            let i = state
                .words
                .binary_search_by(|probe| probe.cmp(w))
                .map_err(|_| {
                    Error::InvalidArgument("warm-start word outside the search space".into())
                })?;
            if !state.available(i) {
                return Err(Error::InvalidArgument(
                    "warm-start code has intersecting deletion balls".into(),
                ));
            }
            state.set_covered(i, true);
            indices.push(i);
        }
        for &i in &indices {
            state.set_covered(i, false);
        }
        if indices.len() > state.best.len() {
            state.best = indices;
        }
    }

    state.dfs(0, budget);

    let words: Vec<Word> = state.best.iter().map(|&i| state.words[i].clone()).collect();
    let size = words.len();
    Ok(SearchOutcome {
        size,
        witness: Code::from_words(n, q as Letter, words)?,
        exact: state.exact,
    })
}

/// Finds a Steiner quadruple system on B_q by exact cover (columns are the
/// 3-subsets, rows the candidate quads), deterministically. Independent of
/// the recursive construction and makes no step-property promise.
pub fn exact_cover_sqs(q: usize, budget: &Budget) -> Result<BTreeSet<Quad>> {
    if q < 4 || !matches!(q % 6, 2 | 4) {
        return Err(Error::UnsupportedParameter(format!(
            "quadruple systems exist for q ≡ 2 or 4 (mod 6), q ≥ 4; got {q}"
        )));
    }
    let mut cover = ExactCover::new(c3(q));
    let mut quads = Vec::new();
    for a in 0..q {
        for b in a + 1..q {
            for c in b + 1..q {
                for d in c + 1..q {
                    let cols = [
                        triple_rank(a, b, c),
                        triple_rank(a, b, d),
                        triple_rank(a, c, d),
                        triple_rank(b, c, d),
                    ];
                    let mut sorted = cols;
                    sorted.sort_unstable();
                    cover.add_row(&sorted);
                    quads.push(Quad::new([
                        a as Letter,
                        b as Letter,
                        c as Letter,
                        d as Letter,
                    ])?);
                }
            }
        }
    }
    match cover.solve_first(budget) {
        CoverOutcome::Solution(rows) => Ok(rows.into_iter().map(|r| quads[r]).collect()),
        CoverOutcome::Infeasible => Err(Error::Construction(format!(
            "no quadruple system found on {q} points despite admissible q"
        ))),
        CoverOutcome::OutOfBudget => Err(Error::BudgetExhausted(format!(
            "quadruple-system search on {q} points exceeded its budget"
        ))),
    }
}
