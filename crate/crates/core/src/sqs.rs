//! Steiner quadruple systems with a step-compatible ordering.
//!
//! A Steiner quadruple system on `B_q = {0, …, q−1}` is a family of 4-subsets
//! (quads) covering every 3-subset exactly once; it exists iff q ≡ 2 or 4
//! (mod 6). [`build_sqs_step`] produces, for every admissible q, a system
//! that additionally satisfies the *step property* under the natural order:
//! every quad containing a consecutive even–odd pair {2t, 2t+1} has its other
//! two elements either both below 2t or both above 2t+1. The construction is
//! recursive with six residue-dispatched cases ([`CaseId`]) and two embedded
//! base systems (q = 4 and q = 14).

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::pairs::{p_bar_systems, p_systems};
use crate::word::Letter;

/// A sorted 4-subset of point labels.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Quad {
    points: [Letter; 4],
}

impl Quad {
    /// Builds a quad from four pairwise-distinct labels (any order; stored sorted).
    pub fn new(mut points: [Letter; 4]) -> Result<Self> {
        points.sort_unstable();
        if points[0] == points[1] || points[1] == points[2] || points[2] == points[3] {
            return Err(Error::InvalidArgument(format!(
                "quad labels must be pairwise distinct, got {points:?}"
            )));
        }
        Ok(Quad { points })
    }

    /// The four labels in ascending order.
    pub fn points(&self) -> [Letter; 4] {
        self.points
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.points;
        write!(f, "{a} {b} {c} {d}")
    }
}

/// A validated Steiner quadruple system on `B_q` in canonical labeling.
///
/// Construction checks exact triple coverage and the size law
/// |quads| = q(q−1)(q−2)/24. Systems returned by [`build_sqs_step`] and
/// [`build_case`] additionally satisfy [`has_step_property`]; systems from
/// other sources (e.g. an exact-cover search) need not.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CanonicalSqs {
    q: usize,
    quads: BTreeSet<Quad>,
}

impl CanonicalSqs {
    /// Validates and wraps a quad set as a Steiner quadruple system on `B_q`.
    pub fn new(q: usize, quads: BTreeSet<Quad>) -> Result<Self> {
        check_sqs(&quads, q).map_err(Error::Construction)?;
        Ok(CanonicalSqs { q, quads })
    }

    /// Number of points.
    pub fn q(&self) -> usize {
        self.q
    }

    /// Number of quads, always q(q−1)(q−2)/24.
    pub fn len(&self) -> usize {
        self.quads.len()
    }

    /// True iff the system has no quads (never the case for q ≥ 4).
    pub fn is_empty(&self) -> bool {
        self.quads.is_empty()
    }

    /// The quads in ascending order.
    pub fn quads(&self) -> &BTreeSet<Quad> {
        &self.quads
    }
}

pub(crate) fn c2(n: usize) -> usize {
    n * (n - 1) / 2
}

pub(crate) fn c3(n: usize) -> usize {
    n * (n - 1) * (n - 2) / 6
}

/// Colexicographic rank of the triple a < b < c among all 3-subsets of B_q.
pub(crate) fn triple_rank(a: usize, b: usize, c: usize) -> usize {
    c3(c) + c2(b) + a
}

/// Detailed triple-coverage check; returns the first violation found.
fn check_sqs(quads: &BTreeSet<Quad>, q: usize) -> std::result::Result<(), String> {
    if q < 4 {
        return Err(format!("a quadruple system needs at least 4 points, got q={q}"));
    }
    for quad in quads {
        let top = quad.points()[3] as usize;
        if top >= q {
            return Err(format!("quad {quad} uses a label outside B_{q}"));
        }
    }
    let expected = q * (q - 1) * (q - 2) / 24;
    if quads.len() != expected {
        return Err(format!(
            "{} quads on {q} points, expected {expected}",
            quads.len()
        ));
    }
    let mut seen = vec![false; c3(q)];
    for quad in quads {
        let p = quad.points();
        for (i, j, k) in (0..4).tuple_combinations() {
            let rank = triple_rank(p[i] as usize, p[j] as usize, p[k] as usize);
            if seen[rank] {
                return Err(format!(
                    "triple {{{}, {}, {}}} covered more than once",
                    p[i], p[j], p[k]
                ));
            }
            seen[rank] = true;
        }
    }
    // 4·|quads| = C(q,3) together with no double coverage forces full coverage,
    // but the scan keeps the diagnostic exact.
    if let Some(rank) = seen.iter().position(|&s| !s) {
        return Err(format!("some 3-subset is uncovered (rank {rank})"));
    }
    Ok(())
}

/// True iff every 3-subset of `B_q` lies in exactly one of the given quads.
pub fn is_sqs(quads: &BTreeSet<Quad>, q: usize) -> bool {
    check_sqs(quads, q).is_ok()
}

/// True iff the system satisfies the step property under the natural order:
/// every quad containing a consecutive even–odd pair {2t, 2t+1} has its other
/// two elements both < 2t or both > 2t+1.
///
/// For a sorted quad the pair occupies adjacent positions, and only the middle
/// positions can split the other two elements around it.
pub fn has_step_property(s: &CanonicalSqs) -> bool {
    s.quads.iter().all(|quad| {
        let [_, b, c, _] = quad.points();
        !(b % 2 == 0 && c == b + 1)
    })
}

/// The quads {2t, 2t+1, a, b} whose two smallest elements form a consecutive
/// even–odd pair. For a step-property system these number q(q−2)/8 and their
/// upper pairs partition {2t+2, …, q−1} for each t.
pub fn select_upper_quads(s: &CanonicalSqs) -> BTreeSet<Quad> {
    s.quads
        .iter()
        .filter(|quad| {
            let [a, b, _, _] = quad.points();
            a % 2 == 0 && b == a + 1
        })
        .copied()
        .collect()
}

/// The six residue-dispatched construction cases.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum CaseId {
    I,
    II,
    III,
    IV,
    V,
    VI,
}

impl CaseId {
    /// All cases in dispatch order; the first match wins.
    pub const ALL: [CaseId; 6] = [
        CaseId::I,
        CaseId::II,
        CaseId::III,
        CaseId::IV,
        CaseId::V,
        CaseId::VI,
    ];

    /// True iff this case's residue condition applies to q.
    pub fn matches(self, q: usize) -> bool {
        match self {
            CaseId::I => q % 12 == 4 || q % 12 == 8,
            CaseId::II => q % 18 == 4 || q % 18 == 10,
            CaseId::III => q % 36 == 34,
            CaseId::IV => q % 36 == 26,
            CaseId::V => (q % 24 == 2 || q % 24 == 10) && q > 2,
            CaseId::VI => q % 72 == 14 || q % 72 == 38,
        }
    }

    /// The case's size parameter f (pre: `matches(q)`).
    pub fn f(self, q: usize) -> usize {
        match self {
            CaseId::I => q / 2,
            CaseId::II => (q - 1) / 3,
            CaseId::III => (q - 4) / 3,
            CaseId::IV => (q - 2) / 3,
            CaseId::V => (q - 2) / 4,
            CaseId::VI => (q - 2) / 12,
        }
    }

    /// The auxiliary parameter k for the cases that use one.
    pub fn k(self, q: usize) -> Option<usize> {
        match self {
            CaseId::III => Some((self.f(q) - 10) / 12),
            CaseId::IV => Some((self.f(q) - 8) / 12),
            CaseId::V => Some(self.f(q) / 2),
            _ => None,
        }
    }

    /// Point count of the sub-system the case recurses on.
    pub fn sub_q(self, q: usize) -> usize {
        let f = self.f(q);
        match self {
            CaseId::I => f,
            CaseId::II | CaseId::VI => f + 1,
            CaseId::IV | CaseId::V => f + 2,
            CaseId::III => f + 4,
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            CaseId::I => "I",
            CaseId::II => "II",
            CaseId::III => "III",
            CaseId::IV => "IV",
            CaseId::V => "V",
            CaseId::VI => "VI",
        };
        f.write_str(name)
    }
}

/// The first case (in `CaseId::ALL` order) whose residue condition matches q,
/// ignoring the base cases q = 4 and q = 14 handled directly by
/// [`build_sqs_step`].
pub fn case_for(q: usize) -> Option<CaseId> {
    CaseId::ALL.into_iter().find(|c| c.matches(q))
}

/// One level of the recursive construction: the point count and the case used
/// (`None` for an embedded base system).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CaseUse {
    pub q: usize,
    pub case: Option<CaseId>,
}

/// Builds a step-property Steiner quadruple system on `B_q`.
///
/// Accepts q ≥ 4 with q ≡ 2 or 4 (mod 6); base cases are q = 4 and q = 14,
/// all other sizes dispatch on the first matching [`CaseId`] and recurse.
/// Every level is fully validated (triple coverage, size law, step property)
/// before being returned.
pub fn build_sqs_step(q: usize) -> Result<CanonicalSqs> {
    build_sqs_step_traced(q).map(|(s, _)| s)
}

/// As [`build_sqs_step`], also reporting the case used at each recursion
/// level, outermost first.
pub fn build_sqs_step_traced(q: usize) -> Result<(CanonicalSqs, Vec<CaseUse>)> {
    if q < 4 || !(q % 6 == 2 || q % 6 == 4) {
        return Err(Error::UnsupportedParameter(format!(
            "a Steiner quadruple system on {q} points does not exist; need q ≥ 4 and q ≡ 2 or 4 (mod 6)"
        )));
    }
    if q == 4 {
        return Ok((base_sqs_4()?, vec![CaseUse { q, case: None }]));
    }
    if q == 14 {
        return Ok((base_sqs_14()?, vec![CaseUse { q, case: None }]));
    }
    let case = case_for(q).ok_or_else(|| {
        Error::Construction(format!("no construction case applies to q={q}"))
    })?;
    let (sub, mut trace) = build_sqs_step_traced(case.sub_q(q))?;
    let s = build_case(case, q, &sub)?;
    trace.insert(0, CaseUse { q, case: Some(case) });
    Ok((s, trace))
}

/// Runs a single construction case on a caller-supplied sub-system.
///
/// `sub` must be canonical with `sub.q() == id.sub_q(q)` and carry the step
/// property. The output is relabeled to canonical form and fully validated.
pub fn build_case(id: CaseId, q: usize, sub: &CanonicalSqs) -> Result<CanonicalSqs> {
    if !id.matches(q) {
        return Err(Error::InvalidArgument(format!(
            "case {id} does not apply to q={q}"
        )));
    }
    if sub.q() != id.sub_q(q) {
        return Err(Error::InvalidArgument(format!(
            "case {id} at q={q} needs a sub-system on {} points, got {}",
            id.sub_q(q),
            sub.q()
        )));
    }
    if !has_step_property(sub) {
        return Err(Error::InvalidArgument(format!(
            "case {id} needs a step-property sub-system"
        )));
    }
    let quads = match id {
        CaseId::I => build_case_i(q, sub)?,
        CaseId::II => build_case_ii(q, sub)?,
        CaseId::III => build_case_iii(q, sub)?,
        CaseId::IV => build_case_iv(q, sub)?,
        CaseId::V => build_case_v(q, sub)?,
        CaseId::VI => build_case_vi(q, sub)?,
    };
    let s = CanonicalSqs::new(q, quads)
        .map_err(|e| Error::Construction(format!("case {id} output for q={q} invalid: {e}")))?;
    if !has_step_property(&s) {
        return Err(Error::Construction(format!(
            "case {id} output for q={q} violates the step ordering"
        )));
    }
    Ok(s)
}

/// Canonical representative of `v` modulo `m`, for possibly-negative index
/// arithmetic.
fn md(v: i64, m: usize) -> usize {
    v.rem_euclid(m as i64) as usize
}

/// Builds a quad from four point labels given as usize.
fn qd(points: [usize; 4]) -> Result<Quad> {
    Quad::new(points.map(|p| p as Letter))
}

/// The unique system on 4 points.
fn base_sqs_4() -> Result<CanonicalSqs> {
    let mut quads = BTreeSet::new();
    quads.insert(qd([0, 1, 2, 3])?);
    CanonicalSqs::new(4, quads)
}

/// Embedded 14-point quadruple system, in its original hand-constructed
/// labeling. Under that labeling the quads pairing {t, t+7} with {t', t'+7}
/// are all present; the relabeling in [`base_sqs_14`] turns those pairs into
/// consecutive even–odd pairs, which yields the step property.
const BASE_14_BLOCKS: [[u8; 4]; 91] = [
    [0, 1, 2, 4],
    [13, 9, 12, 11],
    [12, 1, 4, 3],
    [12, 8, 5, 1],
    [5, 6, 10, 11],
    [3, 5, 13, 8],
    [4, 5, 7, 8],
    [7, 10, 13, 12],
    [0, 8, 9, 11],
    [13, 2, 5, 4],
    [13, 9, 6, 2],
    [6, 0, 11, 12],
    [4, 6, 7, 9],
    [9, 12, 4, 0],
    [1, 2, 3, 5],
    [7, 3, 6, 5],
    [3, 4, 10, 11],
    [7, 10, 0, 3],
    [0, 1, 12, 13],
    [5, 0, 8, 10],
    [10, 13, 5, 1],
    [2, 3, 4, 6],
    [1, 9, 10, 12],
    [9, 12, 2, 5],
    [8, 11, 1, 4],
    [1, 2, 13, 7],
    [6, 1, 9, 11],
    [11, 7, 6, 2],
    [3, 4, 5, 0],
    [2, 10, 11, 13],
    [6, 1, 13, 8],
    [0, 2, 7, 9],
    [2, 3, 7, 8],
    [0, 2, 10, 12],
    [12, 8, 0, 3],
    [4, 5, 6, 1],
    [3, 11, 12, 7],
    [4, 5, 11, 12],
    [1, 3, 8, 10],
    [3, 4, 8, 9],
    [5, 6, 8, 9],
    [13, 9, 1, 4],
    [5, 6, 0, 2],
    [4, 12, 13, 8],
    [5, 6, 12, 13],
    [2, 4, 9, 11],
    [13, 9, 0, 3],
    [8, 11, 3, 6],
    [7, 10, 2, 5],
    [6, 0, 1, 3],
    [5, 13, 7, 9],
    [6, 0, 13, 7],
    [3, 5, 10, 12],
    [7, 10, 1, 4],
    [3, 5, 9, 11],
    [4, 6, 10, 12],
    [8, 11, 7, 13],
    [6, 7, 8, 10],
    [0, 1, 7, 8],
    [4, 6, 11, 13],
    [8, 11, 2, 5],
    [6, 0, 9, 10],
    [5, 0, 11, 13],
    [9, 12, 8, 7],
    [8, 4, 0, 6],
    [1, 2, 8, 9],
    [5, 0, 12, 7],
    [9, 12, 3, 6],
    [0, 1, 10, 11],
    [6, 1, 12, 7],
    [10, 13, 9, 8],
    [9, 5, 1, 0],
    [2, 3, 9, 10],
    [4, 5, 9, 10],
    [10, 13, 4, 0],
    [1, 2, 11, 12],
    [0, 2, 13, 8],
    [11, 7, 10, 9],
    [10, 6, 2, 1],
    [10, 13, 3, 6],
    [12, 8, 6, 2],
    [11, 7, 5, 1],
    [2, 3, 12, 13],
    [1, 3, 7, 9],
    [12, 8, 11, 10],
    [11, 0, 3, 2],
    [11, 7, 4, 0],
    [1, 3, 11, 13],
    [2, 4, 12, 7],
    [3, 4, 13, 7],
    [2, 4, 8, 10],
];

/// The embedded 14-point system in its original labeling (no step property
/// guarantee under that labeling).
pub fn base_sqs_14_raw() -> BTreeSet<Quad> {
    BASE_14_BLOCKS
        .iter()
        .map(|row| Quad::new(row.map(Letter::from)).expect("embedded quads are distinct"))
        .collect()
}

/// The embedded 14-point system relabeled so the step property holds under
/// the natural order: ℓ → 2ℓ for ℓ ≤ 5, 6 → 12, ℓ → 2ℓ−13 for 7 ≤ ℓ ≤ 12,
/// 13 → 13.
fn base_sqs_14() -> Result<CanonicalSqs> {
    let relabel = |l: u8| -> usize {
        match l {
            0..=5 => 2 * l as usize,
            6 => 12,
            7..=12 => 2 * l as usize - 13,
            _ => 13,
        }
    };
    let mut quads = BTreeSet::new();
    for row in BASE_14_BLOCKS {
        quads.insert(qd([
            relabel(row[0]),
            relabel(row[1]),
            relabel(row[2]),
            relabel(row[3]),
        ])?);
    }
    let s = CanonicalSqs::new(14, quads)?;
    if !has_step_property(&s) {
        return Err(Error::Construction(
            "embedded 14-point system lost the step property after relabeling".into(),
        ));
    }
    Ok(s)
}

/// Case I: q = 2f, sub-system on B_f. Two aligned copies; each sub quad is
/// lifted by all even-parity copy patterns, plus one quad per aligned pair.
fn build_case_i(q: usize, sub: &CanonicalSqs) -> Result<BTreeSet<Quad>> {
    let f = q / 2;
    let mut quads = BTreeSet::new();
    for quad in sub.quads() {
        let p = quad.points().map(|x| x as usize);
        for mask in 0u32..16 {
            if mask.count_ones() % 2 == 0 {
                let mut pts = [0usize; 4];
                for (slot, pt) in pts.iter_mut().enumerate() {
                    let copy = ((mask >> slot) & 1) as usize;
                    *pt = copy * f + p[slot];
                }
                quads.insert(qd(pts)?);
            }
        }
    }
    for (j, jp) in (0..f).tuple_combinations() {
        quads.insert(qd([j, jp, f + j, f + jp])?);
    }
    Ok(quads)
}

/// Case II: q = 3f+1, sub-system on B_{f+1} whose largest label f plays the
/// shared special point A. Three interleaved copies of B_f plus A.
fn build_case_ii(q: usize, sub: &CanonicalSqs) -> Result<BTreeSet<Quad>> {
    let f = (q - 1) / 3;
    let a_label = f as Letter;
    // Copy i of label j, interleaved so copies stay order-aligned:
    // (i, 2t) → 6t+2i, (i, 2t+1) → 6t+2i+1, (i, f−1) → 3f−3+i.
    let canon = |i: usize, j: usize| -> usize {
        if j == f - 1 {
            3 * f - 3 + i
        } else if j % 2 == 0 {
            3 * j + 2 * i
        } else {
            3 * j + 2 * i - 2
        }
    };
    let a_pt = 3 * f;
    let mut quads = BTreeSet::new();
    for quad in sub.quads() {
        let p = quad.points();
        if p[3] == a_label {
            let (u, v, w) = (p[0] as usize, p[1] as usize, p[2] as usize);
            // Special-point quads: coordinate sum ≡ 0 (mod 3) over the three
            // ordinary points.
            for b1 in 0..3usize {
                for b2 in 0..3usize {
                    let b3 = md(-((b1 + b2) as i64), 3);
                    quads.insert(qd([a_pt, canon(b1, u), canon(b2, v), canon(b3, w)])?);
                }
            }
            // One point doubled across the two other copies, the remaining
            // two aligned in the base copy; all three choices of the doubled
            // point are needed for exact coverage.
            for (s1, s2, dbl) in [(u, v, w), (u, w, v), (v, w, u)] {
                for i in 0..3usize {
                    quads.insert(qd([
                        canon(i, s1),
                        canon(i, s2),
                        canon((i + 1) % 3, dbl),
                        canon((i + 2) % 3, dbl),
                    ])?);
                }
            }
        } else {
            // Ordinary quads: all copy patterns with coordinate sum ≡ 0 (mod 3).
            let pts = p.map(|x| x as usize);
            for a1 in 0..3usize {
                for a2 in 0..3usize {
                    for a3 in 0..3usize {
                        let a4 = md(-((a1 + a2 + a3) as i64), 3);
                        quads.insert(qd([
                            canon(a1, pts[0]),
                            canon(a2, pts[1]),
                            canon(a3, pts[2]),
                            canon(a4, pts[3]),
                        ])?);
                    }
                }
            }
        }
    }
    // Aligned pairs across adjacent copies.
    for i in 0..3usize {
        for (j, jp) in (0..f).tuple_combinations() {
            quads.insert(qd([
                canon(i, j),
                canon(i, jp),
                canon((i + 1) % 3, j),
                canon((i + 1) % 3, jp),
            ])?);
        }
    }
    // Columns through the special point.
    for j in 0..f {
        quads.insert(qd([a_pt, canon(0, j), canon(1, j), canon(2, j)])?);
    }
    Ok(quads)
}

/// Shared machinery for cases III and IV: q = 3f + a (a = 4 or 2), three
/// copies of B_f plus a special points, with copies alternating even and odd
/// labels so each copy stays order-aligned after relabeling.
///
/// Position p within a copy holds label 2p (p < f/2) or 2(p−f/2)+1; `lpos`
/// inverts that.
struct ThreeCopyFrame {
    f: usize,
}

impl ThreeCopyFrame {
    /// Canonical point for copy i of raw label j (taken mod f).
    fn canon(&self, i: usize, j: i64) -> usize {
        let j = md(j, self.f);
        let pos = if j % 2 == 0 { j / 2 } else { self.f / 2 + (j - 1) / 2 };
        i * self.f + pos
    }

    /// Canonical point for special point h.
    fn a_pt(&self, h: usize) -> usize {
        3 * self.f + h
    }

    /// Copy of one sub-system point: ordinary sub labels (p < f) keep their
    /// position within copy i; labels ≥ f are the shared special points.
    fn copy_sub_point(&self, i: usize, p: usize) -> usize {
        if p < self.f {
            i * self.f + p
        } else {
            self.a_pt(p - self.f)
        }
    }
}

/// The rotated-pair family shared by case III (as its fourth family) and
/// case IV (as its third): a centered pair {c−d, c+d+1} in copy i with one
/// point in each other copy, where c = b₁ + 2k+1 + i(4k+2).
fn rotated_pair_family(
    frame: &ThreeCopyFrame,
    k: usize,
    quads: &mut BTreeSet<Quad>,
) -> Result<()> {
    let f = frame.f;
    for i in 0..3usize {
        for b1 in 0..f {
            for b2 in 0..f {
                let b3 = md(-((b1 + b2) as i64), f);
                let c = (b1 + 2 * k + 1 + i * (4 * k + 2)) as i64;
                for d in 0..=(2 * k) as i64 {
                    quads.insert(qd([
                        frame.canon((i + 2) % 3, b3 as i64),
                        frame.canon(i, c - d),
                        frame.canon(i, c + d + 1),
                        frame.canon((i + 1) % 3, b2 as i64),
                    ])?);
                }
            }
        }
    }
    Ok(())
}

/// The paired-system family shared by cases III and IV: both pairs of a quad
/// drawn from the same pair system P_α, laid across adjacent copies; α runs
/// over the stated band and equal pairs are allowed.
fn adjacent_copy_pair_family(
    frame: &ThreeCopyFrame,
    half: usize,
    alpha_range: std::ops::RangeInclusive<usize>,
    quads: &mut BTreeSet<Quad>,
) -> Result<()> {
    let family = p_systems(half)?;
    for alpha in alpha_range {
        let sys = family.system(alpha);
        for &(r, s) in &sys.pairs {
            for &(rp, sp) in &sys.pairs {
                for i in 0..3usize {
                    quads.insert(qd([
                        frame.canon(i, r as i64),
                        frame.canon(i, s as i64),
                        frame.canon((i + 1) % 3, rp as i64),
                        frame.canon((i + 1) % 3, sp as i64),
                    ])?);
                }
            }
        }
    }
    Ok(())
}

/// Case III: q = 3f+4 with f = 12k+10, sub-system on B_{f+4} whose top four
/// labels become the shared special points.
fn build_case_iii(q: usize, sub: &CanonicalSqs) -> Result<BTreeSet<Quad>> {
    let f = (q - 4) / 3;
    let k = (f - 10) / 12;
    let frame = ThreeCopyFrame { f };
    let top = qd([f, f + 1, f + 2, f + 3])?;
    if !sub.quads().contains(&top) {
        // Guaranteed by the sub-system's step property (the quad through
        // {f, f+1, f+2} must stay above f).
        return Err(Error::Construction(format!(
            "case III needs the sub-system to contain the top quad {top}"
        )));
    }
    let mut quads = BTreeSet::new();
    // The all-special quad, once.
    quads.insert(qd([frame.a_pt(0), frame.a_pt(1), frame.a_pt(2), frame.a_pt(3)])?);
    // Three copies of every other sub quad, special points shared.
    for quad in sub.quads() {
        if *quad == top {
            continue;
        }
        for i in 0..3usize {
            let pts = quad.points().map(|p| frame.copy_sub_point(i, p as usize));
            quads.insert(qd(pts)?);
        }
    }
    // One special point plus one point per copy, coordinate sum ≡ 0 (mod f);
    // the special index participates in the sum.
    for a1 in 0..4usize {
        for a2 in 0..f {
            for a3 in 0..f {
                let a4 = md(-((a1 + a2 + a3) as i64), f);
                quads.insert(qd([
                    frame.a_pt(a1),
                    frame.canon(0, a2 as i64),
                    frame.canon(1, a3 as i64),
                    frame.canon(2, a4 as i64),
                ])?);
            }
        }
    }
    rotated_pair_family(&frame, k, &mut quads)?;
    adjacent_copy_pair_family(&frame, 6 * k + 5, (4 * k + 2)..=(12 * k + 8), &mut quads)?;
    Ok(quads)
}

/// Case IV: q = 3f+2 with f = 12k+8, sub-system on B_{f+2} whose top two
/// labels become the shared special points.
fn build_case_iv(q: usize, sub: &CanonicalSqs) -> Result<BTreeSet<Quad>> {
    let f = (q - 2) / 3;
    let k = (f - 8) / 12;
    let frame = ThreeCopyFrame { f };
    let mut quads = BTreeSet::new();
    // Three copies of every sub quad, special points shared.
    for quad in sub.quads() {
        for i in 0..3usize {
            let pts = quad.points().map(|p| frame.copy_sub_point(i, p as usize));
            quads.insert(qd(pts)?);
        }
    }
    // One special point plus one point per copy, coordinate sum ≡ 0 (mod f).
    for a1 in 0..2usize {
        for a2 in 0..f {
            for a3 in 0..f {
                let a4 = md(-((a1 + a2 + a3) as i64), f);
                quads.insert(qd([
                    frame.a_pt(a1),
                    frame.canon(0, a2 as i64),
                    frame.canon(1, a3 as i64),
                    frame.canon(2, a4 as i64),
                ])?);
            }
        }
    }
    rotated_pair_family(&frame, k, &mut quads)?;
    adjacent_copy_pair_family(&frame, 6 * k + 4, (4 * k + 2)..=(12 * k + 6), &mut quads)?;
    Ok(quads)
}

/// Case V: q = 4f+2 with f = 2k, sub-system on B_{f+2} whose top two labels
/// become the shared special points. Four blocks indexed (h, i) ∈ B₂²,
/// block (h, i) occupying canonical range [(2h+i)f, (2h+i+1)f).
fn build_case_v(q: usize, sub: &CanonicalSqs) -> Result<BTreeSet<Quad>> {
    let f = (q - 2) / 4;
    let k = f / 2;
    let canon = |h: usize, i: usize, j: i64| (2 * h + i) * f + md(j, f);
    let a_pt = |l: usize| 4 * f + l;
    let mut quads = BTreeSet::new();
    // Four copies of every sub quad, special points shared.
    for quad in sub.quads() {
        for h in 0..2usize {
            for i in 0..2usize {
                let pts = quad.points().map(|p| {
                    let p = p as usize;
                    if p < f {
                        (2 * h + i) * f + p
                    } else {
                        a_pt(p - f)
                    }
                });
                quads.insert(qd(pts)?);
            }
        }
    }
    // Special-point families: one special point, one point in each of three
    // blocks, indices tied by c₁+c₂+c₃ ≡ 0 (mod k).
    for l in 0..2usize {
        for eps in 0..2usize {
            for c1 in 0..k {
                for c2 in 0..k {
                    let c3 = md(-((c1 + c2) as i64), k);
                    let (l_, e_, c1_, c2_, c3_) =
                        (l as i64, eps as i64, c1 as i64, c2 as i64, c3 as i64);
                    quads.insert(qd([
                        a_pt(l),
                        canon(0, 0, 2 * c1_),
                        canon(0, 1, 2 * c2_ - e_),
                        canon(1, eps, 2 * c3_ + l_),
                    ])?);
                    quads.insert(qd([
                        a_pt(l),
                        canon(0, 0, 2 * c1_ + 1),
                        canon(0, 1, 2 * c2_ - 1 - e_),
                        canon(1, eps, 2 * c3_ + 1 - l_),
                    ])?);
                    quads.insert(qd([
                        a_pt(l),
                        canon(1, 0, 2 * c1_),
                        canon(1, 1, 2 * c2_ - e_),
                        canon(0, eps, 2 * c3_ + 1 - l_),
                    ])?);
                    quads.insert(qd([
                        a_pt(l),
                        canon(1, 0, 2 * c1_ + 1),
                        canon(1, 1, 2 * c2_ - 1 - e_),
                        canon(0, eps, 2 * c3_ + l_),
                    ])?);
                }
            }
        }
    }
    // Near-pair families: two single points in the blocks of one h-half and
    // a pair from a near-one-factorization in a block of the other half.
    // Indices c₃ < k select the deficient systems, k + c₃ the full ones.
    let pbar = p_bar_systems(k)?;
    for h in 0..2usize {
        for eps in 0..2usize {
            for c1 in 0..k {
                for c2 in 0..k {
                    let c3 = md(-((c1 + c2) as i64), k);
                    let (e_, c1_, c2_) = (eps as i64, c1 as i64, c2 as i64);
                    let oh = (h + 1) % 2;
                    for &(r, s) in &pbar.system(c3).pairs {
                        quads.insert(qd([
                            canon(h, 0, 2 * c1_ + e_),
                            canon(h, 1, 2 * c2_ - e_),
                            canon(oh, 0, r as i64),
                            canon(oh, 0, s as i64),
                        ])?);
                        quads.insert(qd([
                            canon(h, 0, 2 * c1_ - 1 + e_),
                            canon(h, 1, 2 * c2_ - e_),
                            canon(oh, 1, r as i64),
                            canon(oh, 1, s as i64),
                        ])?);
                    }
                    for &(r, s) in &pbar.system(k + c3).pairs {
                        quads.insert(qd([
                            canon(h, 0, 2 * c1_ + e_),
                            canon(h, 1, 2 * c2_ - e_),
                            canon(oh, 1, r as i64),
                            canon(oh, 1, s as i64),
                        ])?);
                        quads.insert(qd([
                            canon(h, 0, 2 * c1_ - 1 + e_),
                            canon(h, 1, 2 * c2_ - e_),
                            canon(oh, 0, r as i64),
                            canon(oh, 0, s as i64),
                        ])?);
                    }
                }
            }
        }
    }
    // Paired-system family within each h-half: both pairs from the same P_α,
    // equal pairs allowed, α over all systems.
    let pf = p_systems(k)?;
    for h in 0..2usize {
        for sys in &pf.systems {
            for &(r, s) in &sys.pairs {
                for &(rp, sp) in &sys.pairs {
                    quads.insert(qd([
                        canon(h, 0, r as i64),
                        canon(h, 0, s as i64),
                        canon(h, 1, rp as i64),
                        canon(h, 1, sp as i64),
                    ])?);
                }
            }
        }
    }
    Ok(quads)
}

/// Case VI: q = 12f+2, sub-system on B_{f+1} whose largest label f plays the
/// shared special point A. Each ordinary sub point becomes a block of 12;
/// block labels alternate {0..5} on even positions and {6..11} on odd ones so
/// consecutive canonical pairs are the antipodal raw pairs {s, s+6}.
fn build_case_vi(q: usize, sub: &CanonicalSqs) -> Result<BTreeSet<Quad>> {
    let f = (q - 2) / 12;
    let lpos12 = |j: usize| if j < 6 { 2 * j } else { 2 * (j - 6) + 1 };
    let canon = |i: usize, j: i64| 12 * i + lpos12(md(j, 12));
    let a_pt = |h: usize| 12 * f + h;
    let a_label = f as Letter;
    let mut quads = BTreeSet::new();
    // One copy of the embedded 14-point system per block, special points
    // shared: original letters 0..5 map to raw 0..5, 7..12 to raw 6..11, and
    // 6/13 to the special points.
    for row in BASE_14_BLOCKS {
        for i in 0..f {
            let pts = row.map(|l| match l {
                0..=5 => canon(i, l as i64),
                6 => a_pt(0),
                7..=12 => canon(i, l as i64 - 1),
                _ => a_pt(1),
            });
            quads.insert(qd(pts)?);
        }
    }
    let pf6 = p_systems(6)?;
    for quad in sub.quads() {
        let p = quad.points();
        if p[3] == a_label {
            // Blocks (u, v, w) stand in for the three mod-3 copies of the
            // 38-point template; second coordinates keep their numeric
            // copy-index terms.
            let kap = [p[0] as usize, p[1] as usize, p[2] as usize];
            // Special-point family.
            for h in 0..2usize {
                for b1 in 0..12i64 {
                    for b2 in 0..12i64 {
                        let b3 = md(-(b1 + b2), 12) as i64;
                        quads.insert(qd([
                            a_pt(h),
                            canon(kap[0], b1),
                            canon(kap[1], b2),
                            canon(kap[2], b3 + 3 * h as i64),
                        ])?);
                    }
                }
            }
            // Offset-3 pair with one point in each other block.
            for i3 in 0..3usize {
                for b1 in 0..12i64 {
                    for b2 in 0..12i64 {
                        let b3 = md(-(b1 + b2), 12) as i64;
                        let i_ = i3 as i64;
                        quads.insert(qd([
                            canon(kap[i3], b1 + 4 + i_),
                            canon(kap[i3], b1 + 7 + i_),
                            canon(kap[(i3 + 1) % 3], b2),
                            canon(kap[(i3 + 2) % 3], b3),
                        ])?);
                    }
                }
            }
            // Reflected families: single points in two blocks and a centered
            // pair in the third.
            for i3 in 0..3usize {
                for j in 0..12i64 {
                    for eps in 0..2i64 {
                        let e6 = 6 * eps;
                        let (b0, b1, b2) = (kap[i3], kap[(i3 + 1) % 3], kap[(i3 + 2) % 3]);
                        quads.insert(qd([
                            canon(b0, j),
                            canon(b1, j + e6),
                            canon(b2, e6 - 2 * j + 1),
                            canon(b2, e6 - 2 * j - 1),
                        ])?);
                        quads.insert(qd([
                            canon(b0, j),
                            canon(b1, j + e6),
                            canon(b2, e6 - 2 * j + 2),
                            canon(b2, e6 - 2 * j - 2),
                        ])?);
                        quads.insert(qd([
                            canon(b0, j),
                            canon(b1, j + e6 - 3),
                            canon(b2, e6 - 2 * j + 1),
                            canon(b2, e6 - 2 * j + 2),
                        ])?);
                        quads.insert(qd([
                            canon(b0, j),
                            canon(b1, j + e6 + 3),
                            canon(b2, e6 - 2 * j - 1),
                            canon(b2, e6 - 2 * j - 2),
                        ])?);
                        // Antipodal pairs in two blocks (each quad arises twice).
                        quads.insert(qd([
                            canon(b0, j),
                            canon(b0, j + 6),
                            canon(b1, j + 3 * eps),
                            canon(b1, j + 6 + 3 * eps),
                        ])?);
                    }
                }
            }
            // Antipodal pair against a short pair in any other block.
            for i3 in 0..3usize {
                for i3p in 0..3usize {
                    if i3p == i3 {
                        continue;
                    }
                    for g in 0..6i64 {
                        for eps in 0..2i64 {
                            quads.insert(qd([
                                canon(kap[i3], 2 * g + 3 * eps),
                                canon(kap[i3], 2 * g + 6 + 3 * eps),
                                canon(kap[i3p], 2 * g + 1),
                                canon(kap[i3p], 2 * g + 5),
                            ])?);
                            quads.insert(qd([
                                canon(kap[i3], 2 * g + 3 * eps),
                                canon(kap[i3], 2 * g + 6 + 3 * eps),
                                canon(kap[i3p], 2 * g + 2),
                                canon(kap[i3p], 2 * g + 4),
                            ])?);
                        }
                    }
                }
            }
            // Equal-offset short pairs across adjacent blocks.
            for i3 in 0..3usize {
                for j in 0..12i64 {
                    for e in 0..4i64 {
                        for delta in [1i64, 2, 4] {
                            quads.insert(qd([
                                canon(kap[i3], j),
                                canon(kap[i3], j + delta),
                                canon(kap[(i3 + 1) % 3], j + 3 * e),
                                canon(kap[(i3 + 1) % 3], j + 3 * e + delta),
                            ])?);
                        }
                    }
                }
            }
            // Paired-system family on the two remaining system labels.
            for alpha in 4..=5usize {
                let sys = pf6.system(alpha);
                for i3 in 0..3usize {
                    for i3p in 0..3usize {
                        if i3p == i3 {
                            continue;
                        }
                        for &(r, s) in &sys.pairs {
                            for &(rp, sp) in &sys.pairs {
                                quads.insert(qd([
                                    canon(kap[i3], r as i64),
                                    canon(kap[i3], s as i64),
                                    canon(kap[i3p], rp as i64),
                                    canon(kap[i3p], sp as i64),
                                ])?);
                            }
                        }
                    }
                }
            }
        } else {
            // Ordinary sub quads: all block patterns with coordinate sum ≡ 0
            // (mod 12).
            let pts = p.map(|x| x as usize);
            for a1 in 0..12i64 {
                for a2 in 0..12i64 {
                    for a3 in 0..12i64 {
                        let a4 = md(-(a1 + a2 + a3), 12) as i64;
                        quads.insert(qd([
                            canon(pts[0], a1),
                            canon(pts[1], a2),
                            canon(pts[2], a3),
                            canon(pts[3], a4),
                        ])?);
                    }
                }
            }
        }
    }
    Ok(quads)
}
