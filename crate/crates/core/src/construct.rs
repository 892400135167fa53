//! Assembly of maximum-size and perfect single-deletion-correcting codes
//! of length 4 over an even alphabet.
//!
//! Every route reaches the sharp size q²(q+2)/4: small alphabets use fixed
//! base tables, alphabets with q ≡ 2, 4 (mod 6) expand a step-property
//! Steiner quadruple system into word orbits, and multiples of 6 go through
//! a grouped design (odd q/6) or alphabet doubling (even q/6). The perfect
//! variant swaps each word (2t,2t,2t+1,2t+1) for (2t,2t+1,2t,2t+1), after
//! which the radius-1 deletion balls cover all of B_q³.

use std::collections::BTreeSet;
use std::fmt;
use std::time::Duration;

use crate::cover::Budget;
use crate::error::{Error, Result};
use crate::gdd::{build_gdd_with_budget, GROUP_SIZE};
use crate::orbit::{gen_a, gen_b, Quad4};
use crate::pairs::reiss_partition;
use crate::sqs::{build_sqs_step, select_upper_quads, CanonicalSqs};
use crate::word::{is_deletion_correcting, is_perfect, Code, Letter, Word};

/// Default wall-clock budget for any embedded completion search.
const DEFAULT_BUDGET: Duration = Duration::from_secs(600);

/// The sharp code size q²(q+2)/4 for even q.
fn target_size(q: usize) -> usize {
    q * q * (q + 2) / 4
}

/// One level of the [`optimal_code`] dispatch chain.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RouteStep {
    /// Fixed 4-word base code on 2 letters.
    Base2,
    /// Fixed 24-word base code on 4 letters.
    Base4,
    /// Fixed 72-word base code on 6 letters.
    Base6,
    /// Word orbits of a step-property quadruple system on q letters.
    Sqs(usize),
    /// Grouped-design route with the given group count.
    Gdd(usize),
    /// Doubling of the code on the given half alphabet.
    Double(usize),
}

impl fmt::Display for RouteStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RouteStep::Base2 => write!(f, "BASE2"),
            RouteStep::Base4 => write!(f, "BASE4"),
            RouteStep::Base6 => write!(f, "BASE6"),
            RouteStep::Sqs(q) => write!(f, "SQS({q})"),
            RouteStep::Gdd(m) => write!(f, "GDD({m})"),
            RouteStep::Double(p) => write!(f, "DOUBLE({p})"),
        }
    }
}

/// Audit record of one [`optimal_code`] run: the dispatch chain (outermost
/// step first) and the labeled component sizes of the outermost assembly.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConstructionTrace {
    pub q: usize,
    pub route: Vec<RouteStep>,
    pub parts: Vec<(String, usize)>,
}

impl ConstructionTrace {
    /// Sum of the recorded component sizes; always equals the code size.
    pub fn total(&self) -> usize {
        self.parts.iter().map(|&(_, n)| n).sum()
    }

    /// The dispatch chain as `STEP <- STEP <- ...`.
    pub fn route_string(&self) -> String {
        self.route
            .iter()
            .map(RouteStep::to_string)
            .collect::<Vec<_>>()
            .join(" <- ")
    }
}

/// Word sink that tracks labeled component sizes and rejects collisions
/// between parts (the orbit decomposition must be disjoint).
struct Assembly {
    q: usize,
    words: BTreeSet<Word>,
    parts: Vec<(String, usize)>,
}

impl Assembly {
    fn new(q: usize) -> Self {
        Assembly {
            q,
            words: BTreeSet::new(),
            parts: Vec::new(),
        }
    }

    fn add_part(&mut self, label: &str, items: impl IntoIterator<Item = Word>) -> Result<()> {
        let before = self.words.len();
        for w in items {
            let dup = !self.words.insert(w.clone());
            if dup {
                return Err(Error::Construction(format!(
                    "word {:?} repeated while assembling the {label} part",
                    w.letters()
                )));
            }
        }
        self.parts.push((label.to_string(), self.words.len() - before));
        Ok(())
    }

    /// Validates size and single-deletion correction, then freezes the code.
    fn finish(self) -> Result<(Code, Vec<(String, usize)>)> {
        let code = Code::from_words(4, self.q as Letter, self.words)?;
        if code.len() != target_size(self.q) {
            return Err(Error::Construction(format!(
                "assembled {} words on q={}, expected {}",
                code.len(),
                self.q,
                target_size(self.q)
            )));
        }
        if !is_deletion_correcting(&code, 1) {
            return Err(Error::Construction(format!(
                "assembled code on q={} has intersecting deletion balls",
                self.q
            )));
        }
        Ok((code, self.parts))
    }
}

/// All q constant words (a,a,a,a).
fn constant_words(q: usize) -> Vec<Word> {
    (0..q as Letter).map(|a| Word::new(vec![a; 4])).collect()
}

/// All q(q−1) words (a,a,b,b) with a ≠ b.
fn paired_words(q: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for a in 0..q as Letter {
        for b in 0..q as Letter {
            if a != b {
                out.push(Word::new(vec![a, a, b, b]));
            }
        }
    }
    out
}

/// The eight four-letter words of the fixed base code on 4 letters.
const BASE_4_ORBIT: [[Letter; 4]; 8] = [
    [0, 2, 3, 0],
    [1, 2, 3, 1],
    [2, 0, 1, 2],
    [3, 0, 1, 3],
    [0, 3, 2, 1],
    [2, 1, 0, 3],
    [1, 3, 0, 2],
    [3, 1, 2, 0],
];

/// The 36 four-letter words of the fixed base code on 6 letters.
const BASE_6_ORBIT: [[Letter; 4]; 36] = [
    [0, 2, 3, 0],
    [1, 2, 3, 1],
    [2, 0, 1, 2],
    [3, 0, 1, 3],
    [4, 0, 1, 4],
    [5, 0, 1, 5],
    [0, 4, 5, 0],
    [1, 4, 5, 1],
    [2, 4, 5, 2],
    [3, 4, 5, 3],
    [4, 2, 3, 4],
    [5, 2, 3, 5],
    [0, 2, 5, 1],
    [1, 3, 0, 4],
    [2, 0, 5, 3],
    [3, 1, 0, 5],
    [4, 0, 3, 5],
    [5, 1, 0, 2],
    [0, 3, 4, 2],
    [1, 3, 2, 5],
    [2, 1, 4, 0],
    [3, 1, 2, 4],
    [4, 1, 2, 0],
    [5, 1, 4, 3],
    [0, 4, 3, 1],
    [1, 5, 0, 3],
    [2, 4, 1, 3],
    [3, 5, 2, 0],
    [4, 2, 1, 5],
    [5, 3, 2, 1],
    [0, 5, 2, 4],
    [1, 5, 4, 2],
    [2, 5, 0, 4],
    [3, 5, 4, 1],
    [4, 3, 0, 2],
    [5, 3, 4, 0],
];

fn assemble_base(q: usize) -> Result<(Code, Vec<(String, usize)>)> {
    let orbit: &[[Letter; 4]] = match q {
        2 => &[],
        4 => &BASE_4_ORBIT,
        6 => &BASE_6_ORBIT,
        _ => {
            return Err(Error::UnsupportedParameter(format!(
                "no base table for q={q}; bases exist for q in {{2, 4, 6}}"
            )))
        }
    };
    let mut asm = Assembly::new(q);
    asm.add_part("constant words", constant_words(q))?;
    asm.add_part("paired words", paired_words(q))?;
    asm.add_part(
        "orbit words",
        orbit.iter().map(|w| Word::new(w.to_vec())),
    )?;
    asm.finish()
}

/// The fixed base code for q ∈ {2, 4, 6}, validated.
pub fn base_code(q: usize) -> Result<Code> {
    Ok(assemble_base(q)?.0)
}

fn assemble_sqs(s: &CanonicalSqs) -> Result<(Code, Vec<(String, usize)>)> {
    let q = s.q();
    if q < 4 || !matches!(q % 6, 2 | 4) {
        return Err(Error::InvalidArgument(format!(
            "quadruple-system route needs q ≡ 2 or 4 (mod 6) with q ≥ 4, got {q}"
        )));
    }
    let upper = select_upper_quads(s);
    let mut orbit_words = Vec::new();
    for quad in s.quads() {
        let x = Quad4::from_array(quad.points())?;
        if upper.contains(quad) {
            orbit_words.extend(gen_b(&x));
        } else {
            orbit_words.extend(gen_a(&x));
        }
    }
    let mut asm = Assembly::new(q);
    asm.add_part("constant words", constant_words(q))?;
    asm.add_part("paired words", paired_words(q))?;
    asm.add_part("orbit words", orbit_words)?;
    asm.finish()
}

/// Expands a step-property quadruple system into a maximum-size code:
/// eight-word orbits over the upper quads (even-started consecutive pair
/// lowest), six-word orbits over the rest, plus all constant and paired
/// words.
pub fn code_from_sqs(s: &CanonicalSqs) -> Result<Code> {
    Ok(assemble_sqs(s)?.0)
}

fn assemble_gdd(m: usize, budget: &Budget) -> Result<(Code, Vec<(String, usize)>)> {
    let q = GROUP_SIZE * m;
    let design = build_gdd_with_budget(m, budget)?;
    let mut orbit_words = Vec::new();
    for block in design.blocks() {
        let x = Quad4::from_array(block.points())?;
        if design.marked_a1().contains(block) {
            orbit_words.extend(gen_b(&x));
        } else {
            orbit_words.extend(gen_a(&x));
        }
    }
    let base = base_code(GROUP_SIZE)?;
    let mut group_words = Vec::new();
    for g in 0..m {
        let off = (g * GROUP_SIZE) as Letter;
        for w in base.words() {
            group_words.push(Word::new(w.letters().iter().map(|&l| l + off).collect()));
        }
    }
    let mut cross_words = Vec::new();
    for a in 0..q as Letter {
        for b in 0..q as Letter {
            if a as usize / GROUP_SIZE != b as usize / GROUP_SIZE {
                cross_words.push(Word::new(vec![a, a, b, b]));
            }
        }
    }
    let mut asm = Assembly::new(q);
    asm.add_part("orbit words", orbit_words)?;
    asm.add_part("group base codes", group_words)?;
    asm.add_part("cross-group paired words", cross_words)?;
    asm.finish()
}

/// Builds the grouped-design code on q = 6m letters (m odd): eight-word
/// orbits over the marked blocks, six-word orbits over the rest, a copy of
/// the 6-letter base code inside each group, and all cross-group paired
/// words.
pub fn code_from_gdd(m: usize) -> Result<Code> {
    Ok(assemble_gdd(m, &Budget::with_duration(DEFAULT_BUDGET))?.0)
}

fn assemble_double(half: &Code) -> Result<(Code, Vec<(String, usize)>)> {
    if half.n() != 4 {
        return Err(Error::InvalidArgument(format!(
            "doubling needs length-4 words, got length {}",
            half.n()
        )));
    }
    let p = half.q() as usize;
    if p == 0 || p % 6 != 0 {
        return Err(Error::UnsupportedParameter(format!(
            "doubling needs a half alphabet divisible by 6, got {p}"
        )));
    }
    if half.len() != target_size(p) {
        return Err(Error::InvalidArgument(format!(
            "half code has {} words, expected the maximum {}",
            half.len(),
            target_size(p)
        )));
    }
    let q = 2 * p;
    // Pair the labeled one-factorizations of the two copies: blocks take
    // both letters of a pair from each copy, same label on both sides.
    let reiss = reiss_partition(p / 2)?;
    let mut orbit_words = Vec::new();
    for label in 1..p {
        let sys = reiss.system(label);
        for &(a, b) in &sys.pairs {
            for &(c, d) in &sys.pairs {
                let block = Quad4::new(a, b, c + p as Letter, d + p as Letter)?;
                if label == 1 {
                    orbit_words.extend(gen_b(&block));
                } else {
                    orbit_words.extend(gen_a(&block));
                }
            }
        }
    }
    let mut half_words = Vec::new();
    for w in half.words() {
        half_words.push(w.clone());
    }
    for w in half.words() {
        half_words.push(Word::new(
            w.letters().iter().map(|&l| l + p as Letter).collect(),
        ));
    }
    let mut cross_words = Vec::new();
    for a in 0..p as Letter {
        for b in p as Letter..q as Letter {
            cross_words.push(Word::new(vec![a, a, b, b]));
            cross_words.push(Word::new(vec![b, b, a, a]));
        }
    }
    let mut asm = Assembly::new(q);
    asm.add_part("orbit words", orbit_words)?;
    asm.add_part("half copies", half_words)?;
    asm.add_part("cross-copy paired words", cross_words)?;
    asm.finish()
}

/// Doubles a maximum-size code on p letters (p a multiple of 6) to one on
/// 2p letters.
pub fn double_code(half: &Code) -> Result<Code> {
    Ok(assemble_double(half)?.0)
}

/// Builds a maximum-size single-deletion-correcting code of length 4 on an
/// even alphabet, with |C| = q²(q+2)/4, plus its construction trace.
pub fn optimal_code(q: usize) -> Result<(Code, ConstructionTrace)> {
    optimal_code_with_budget(q, &Budget::with_duration(DEFAULT_BUDGET))
}

/// As [`optimal_code`] with a caller-supplied budget for any embedded
/// completion search.
pub fn optimal_code_with_budget(q: usize, budget: &Budget) -> Result<(Code, ConstructionTrace)> {
    if q < 2 || q % 2 != 0 {
        return Err(Error::UnsupportedParameter(format!(
            "the sharp size q²(q+2)/4 is established for even q ≥ 2 only, got {q}"
        )));
    }
    let (code, route, parts) = match q {
        2 | 4 | 6 => {
            let step = match q {
                2 => RouteStep::Base2,
                4 => RouteStep::Base4,
                _ => RouteStep::Base6,
            };
            let (code, parts) = assemble_base(q)?;
            (code, vec![step], parts)
        }
        _ if q % 6 == 2 || q % 6 == 4 => {
            let s = build_sqs_step(q)?;
            let (code, parts) = assemble_sqs(&s)?;
            (code, vec![RouteStep::Sqs(q)], parts)
        }
        _ if (q / 6) % 2 == 1 => {
            let m = q / 6;
            let (code, parts) = assemble_gdd(m, budget)?;
            (code, vec![RouteStep::Gdd(m)], parts)
        }
        _ => {
            let (half, half_trace) = optimal_code_with_budget(q / 2, budget)?;
            let (code, parts) = assemble_double(&half)?;
            let mut route = vec![RouteStep::Double(q / 2)];
            route.extend(half_trace.route);
            (code, route, parts)
        }
    };
    let trace = ConstructionTrace { q, route, parts };
    if trace.total() != code.len() {
        return Err(Error::Construction(format!(
            "trace components sum to {}, code has {} words",
            trace.total(),
            code.len()
        )));
    }
    Ok((code, trace))
}

/// Builds the perfect variant: the balls around its words cover every word
/// of B_q³ exactly once in the disjoint sense (full radius-1 tiling).
pub fn perfect_code(q: usize) -> Result<Code> {
    perfect_code_with_budget(q, &Budget::with_duration(DEFAULT_BUDGET))
}

/// As [`perfect_code`] with a caller-supplied completion-search budget.
pub fn perfect_code_with_budget(q: usize, budget: &Budget) -> Result<Code> {
    let (code, _) = optimal_code_with_budget(q, budget)?;
    let mut words = code.word_set().clone();
    for t in 0..(q / 2) as Letter {
        let old = Word::new(vec![2 * t, 2 * t, 2 * t + 1, 2 * t + 1]);
        if !words.remove(&old) {
            return Err(Error::Construction(format!(
                "word {:?} expected in the maximum-size code",
                old.letters()
            )));
        }
        let swapped = Word::new(vec![2 * t, 2 * t + 1, 2 * t, 2 * t + 1]);
        if !words.insert(swapped) {
            return Err(Error::Construction(
                "swapped-in word already present".into(),
            ));
        }
    }
    let code = Code::from_words(4, q as Letter, words)?;
    if code.len() != target_size(q) {
        return Err(Error::Construction("pair swap changed the code size".into()));
    }
    if !is_deletion_correcting(&code, 1) {
        return Err(Error::Construction(
            "pair swap broke single-deletion correction".into(),
        ));
    }
    if !is_perfect(&code, 1)? {
        return Err(Error::Construction(format!(
            "swapped code on q={q} does not cover all of B_q^3"
        )));
    }
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sqs::build_sqs_step_traced;
    use crate::word::profile;

    fn word(letters: [Letter; 4]) -> Word {
        Word::new(letters.to_vec())
    }

    #[test]
    fn base_codes_have_the_sharp_sizes() {
        assert_eq!(base_code(2).unwrap().len(), 4);
        assert_eq!(base_code(4).unwrap().len(), 24);
        assert_eq!(base_code(6).unwrap().len(), 72);
        assert!(matches!(
            base_code(8),
            Err(Error::UnsupportedParameter(_))
        ));
        assert!(matches!(
            base_code(3),
            Err(Error::UnsupportedParameter(_))
        ));
    }

    #[test]
    fn base_two_is_the_four_word_code() {
        let c = base_code(2).unwrap();
        let expected: BTreeSet<Word> = [
            word([0, 0, 0, 0]),
            word([1, 1, 1, 1]),
            word([0, 0, 1, 1]),
            word([1, 1, 0, 0]),
        ]
        .into_iter()
        .collect();
        assert_eq!(*c.word_set(), expected);
    }

    #[test]
    fn base_four_agrees_with_the_quad_system_route() {
        let via_table = base_code(4).unwrap();
        let via_sqs = code_from_sqs(&build_sqs_step(4).unwrap()).unwrap();
        assert_eq!(via_table.word_set(), via_sqs.word_set());
    }

    #[test]
    fn quad_system_route_sizes() {
        assert_eq!(
            code_from_sqs(&build_sqs_step(8).unwrap()).unwrap().len(),
            160
        );
        assert_eq!(
            code_from_sqs(&build_sqs_step(10).unwrap()).unwrap().len(),
            300
        );
    }

    #[test]
    fn grouped_design_route() {
        let one = code_from_gdd(1).unwrap();
        assert_eq!(one.word_set(), base_code(6).unwrap().word_set());
        let three = code_from_gdd(3).unwrap();
        assert_eq!(three.len(), 1620);
    }

    #[test]
    fn doubling_route() {
        let doubled = double_code(&base_code(6).unwrap()).unwrap();
        assert_eq!(doubled.len(), 504);
        assert!(matches!(
            double_code(&base_code(4).unwrap()),
            Err(Error::UnsupportedParameter(_))
        ));
    }

    #[test]
    fn dispatch_routes_and_component_sums() {
        let (c2, t2) = optimal_code(2).unwrap();
        assert_eq!(c2.len(), 4);
        assert_eq!(t2.route, vec![RouteStep::Base2]);

        let (c8, t8) = optimal_code(8).unwrap();
        assert_eq!(c8.len(), 160);
        assert_eq!(t8.route, vec![RouteStep::Sqs(8)]);

        let (c12, t12) = optimal_code(12).unwrap();
        assert_eq!(c12.len(), 504);
        assert_eq!(t12.route, vec![RouteStep::Double(6), RouteStep::Base6]);

        let (c18, t18) = optimal_code(18).unwrap();
        assert_eq!(c18.len(), 1620);
        assert_eq!(t18.route, vec![RouteStep::Gdd(3)]);
        let orbit = t18
            .parts
            .iter()
            .find(|(label, _)| label == "orbit words")
            .unwrap();
        assert_eq!(orbit.1, 1188);

        for t in [&t2, &t8, &t12, &t18] {
            assert_eq!(t.total(), target_size(t.q));
        }
        assert_eq!(t12.route_string(), "DOUBLE(6) <- BASE6");
    }

    #[test]
    fn twenty_goes_through_nested_quad_systems() {
        let (c, t) = optimal_code(20).unwrap();
        assert_eq!(c.len(), 2200);
        assert_eq!(t.route, vec![RouteStep::Sqs(20)]);
        let (_, cases) = build_sqs_step_traced(20).unwrap();
        let qs: Vec<usize> = cases.iter().map(|u| u.q).collect();
        assert_eq!(qs, vec![20, 10, 4]);
    }

    #[test]
    fn odd_or_tiny_alphabets_are_rejected() {
        assert!(matches!(
            optimal_code(5),
            Err(Error::UnsupportedParameter(_))
        ));
        assert!(matches!(
            optimal_code(0),
            Err(Error::UnsupportedParameter(_))
        ));
    }

    #[test]
    fn perfect_two_is_the_expected_swap() {
        let c = perfect_code(2).unwrap();
        let expected: BTreeSet<Word> = [
            word([0, 0, 0, 0]),
            word([1, 1, 1, 1]),
            word([0, 1, 0, 1]),
            word([1, 1, 0, 0]),
        ]
        .into_iter()
        .collect();
        assert_eq!(*c.word_set(), expected);
        assert!(is_perfect(&c, 1).unwrap());
    }

    #[test]
    fn perfect_small_alphabets_tile_while_plain_codes_do_not() {
        for q in [4usize, 6] {
            let perfect = perfect_code(q).unwrap();
            assert_eq!(perfect.len(), target_size(q));
            assert!(is_perfect(&perfect, 1).unwrap());
            let (plain, _) = optimal_code(q).unwrap();
            assert!(!is_perfect(&plain, 1).unwrap());
        }
    }

    #[test]
    fn profiles_match_the_expected_component_counts() {
        for q in [2usize, 4, 6, 8] {
            let (c, _) = optimal_code(q).unwrap();
            let p = profile(&c);
            assert_eq!(p.count(crate::word::WordClass::K1), q);
            assert_eq!(p.count(crate::word::WordClass::K2), q * (q - 1));
        }
    }
}
