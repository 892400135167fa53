//! Group divisible designs with m groups of 6 points and blocks of 4.
//!
//! A G(m,6,4,3) covers every 3-subset that is *not* inside a single group
//! exactly once, using blocks with at most two points per group. The build
//! starts from an algebraic family 𝒜 tied to the non-hexagon pairings of
//! each group (with its λ=1 sub-family 𝒜₁ marked for downstream word-orbit
//! selection) and completes the remaining cross triples by a deterministic
//! exact-cover search.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::Duration;

use itertools::Itertools;

use crate::cover::{Budget, CoverOutcome, ExactCover};
use crate::error::{Error, Result};
use crate::pairs::mills_pairs;
use crate::sqs::{c3, triple_rank, Quad};
use crate::word::Letter;

/// Number of points per group.
pub const GROUP_SIZE: usize = 6;

/// Environment variable naming a directory for cached completed block sets.
pub const CACHE_DIR_ENV: &str = "DEL4_CACHE_DIR";

/// A grouped-design point: 1-based group index and slot within the group.
///
/// Flattened labels are group-major, `(group−1)·6 + slot`, so consecutive
/// canonical labels stay inside one group.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GroupedPoint {
    pub group: usize,
    pub slot: Letter,
}

impl GroupedPoint {
    /// Builds a point; `group` is 1-based, `slot` must lie in B₆.
    pub fn new(group: usize, slot: Letter) -> Result<Self> {
        if group == 0 {
            return Err(Error::InvalidArgument("group indices are 1-based".into()));
        }
        if slot as usize >= GROUP_SIZE {
            return Err(Error::InvalidArgument(format!(
                "slot {slot} outside B_{GROUP_SIZE}"
            )));
        }
        Ok(GroupedPoint { group, slot })
    }

    /// The flattened label (group-major).
    pub fn flatten(self) -> Letter {
        ((self.group - 1) * GROUP_SIZE) as Letter + self.slot
    }

    /// Inverts [`GroupedPoint::flatten`].
    pub fn from_flat(flat: Letter) -> Self {
        GroupedPoint {
            group: flat as usize / GROUP_SIZE + 1,
            slot: flat % GROUP_SIZE as Letter,
        }
    }
}

/// Group index (1-based) of a flattened label.
fn group_of(flat: Letter) -> usize {
    flat as usize / GROUP_SIZE + 1
}

/// The algebraic block family 𝒜 with its λ=1 sub-family identified.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FamilyA {
    /// All 27·C(m,2) blocks.
    pub blocks: BTreeSet<Quad>,
    /// The 9·C(m,2) blocks built from the λ=1 pairing.
    pub lambda1: BTreeSet<Quad>,
}

/// Builds 𝒜: for each group pair w < x and each pairing label λ ∈ {1,2,3},
/// the nine blocks joining a λ-pair in group w with a λ-pair in group x.
pub fn family_a(m: usize) -> Result<FamilyA> {
    if m % 2 == 0 {
        return Err(Error::UnsupportedParameter(format!(
            "group count must be odd, got {m}"
        )));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("group count must be positive".into()));
    }
    let pairings = mills_pairs();
    let mut blocks = BTreeSet::new();
    let mut lambda1 = BTreeSet::new();
    for (w, x) in (1..=m).tuple_combinations() {
        for lambda in 1..=3usize {
            let sys = pairings.system(lambda);
            for &(a, b) in &sys.pairs {
                for &(c, d) in &sys.pairs {
                    let quad = Quad::new([
                        GroupedPoint { group: w, slot: a }.flatten(),
                        GroupedPoint { group: w, slot: b }.flatten(),
                        GroupedPoint { group: x, slot: c }.flatten(),
                        GroupedPoint { group: x, slot: d }.flatten(),
                    ])?;
                    blocks.insert(quad);
                    if lambda == 1 {
                        lambda1.insert(quad);
                    }
                }
            }
        }
    }
    Ok(FamilyA { blocks, lambda1 })
}

/// A validated G(m,6,4,3) with the 𝒜₁ sub-family marked.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Gdd {
    m: usize,
    blocks: BTreeSet<Quad>,
    marked_a1: BTreeSet<Quad>,
}

impl Gdd {
    /// Number of groups.
    pub fn m(&self) -> usize {
        self.m
    }

    /// All blocks in ascending flattened order.
    pub fn blocks(&self) -> &BTreeSet<Quad> {
        &self.blocks
    }

    /// The marked λ=1 blocks (a subset of [`Gdd::blocks`]).
    pub fn marked_a1(&self) -> &BTreeSet<Quad> {
        &self.marked_a1
    }
}

/// Expected block count: every 3-subset except the m·C(6,3) within-group ones
/// is covered exactly once, four triples per block.
pub fn expected_gdd_blocks(m: usize) -> usize {
    (c3(GROUP_SIZE * m) - m * c3(GROUP_SIZE)) / 4
}

/// Detailed cross-triple coverage check.
fn check_gdd(m: usize, blocks: &BTreeSet<Quad>) -> std::result::Result<(), String> {
    let n = GROUP_SIZE * m;
    for quad in blocks {
        let p = quad.points();
        if p[3] as usize >= n {
            return Err(format!("block {quad} uses a label outside B_{n}"));
        }
        for g in 1..=m {
            if p.iter().filter(|&&x| group_of(x) == g).count() >= 3 {
                return Err(format!("block {quad} has three points in group {g}"));
            }
        }
    }
    if blocks.len() != expected_gdd_blocks(m) {
        return Err(format!(
            "{} blocks on {m} groups, expected {}",
            blocks.len(),
            expected_gdd_blocks(m)
        ));
    }
    let mut covered = vec![false; c3(n)];
    for quad in blocks {
        let p = quad.points();
        for (i, j, k) in (0..4).tuple_combinations() {
            let rank = triple_rank(p[i] as usize, p[j] as usize, p[k] as usize);
            if covered[rank] {
                return Err(format!(
                    "cross triple {{{}, {}, {}}} covered more than once",
                    p[i], p[j], p[k]
                ));
            }
            covered[rank] = true;
        }
    }
    for (a, b, c) in (0..n as Letter).tuple_combinations() {
        let cross = !(group_of(a) == group_of(b) && group_of(b) == group_of(c));
        if cross && !covered[triple_rank(a as usize, b as usize, c as usize)] {
            return Err(format!("cross triple {{{a}, {b}, {c}}} uncovered"));
        }
    }
    Ok(())
}

/// True iff every cross-group 3-subset lies in exactly one block, no block
/// has three points in one group, and the block-count law holds.
pub fn is_gdd(g: &Gdd) -> bool {
    check_gdd(g.m, &g.blocks).is_ok()
}

/// Builds a G(m,6,4,3) containing 𝒜, with 𝒜₁ marked, under a default
/// ten-minute completion budget.
pub fn build_gdd(m: usize) -> Result<Gdd> {
    build_gdd_with_budget(m, &Budget::with_duration(Duration::from_secs(600)))
}

/// As [`build_gdd`] with a caller-supplied exact-cover budget.
///
/// When the environment variable named by [`CACHE_DIR_ENV`] points to a
/// directory, a previously completed block set is reloaded from it (and a
/// fresh build is stored there); invalid cache contents are ignored and
/// rebuilt.
pub fn build_gdd_with_budget(m: usize, budget: &Budget) -> Result<Gdd> {
    if m % 2 == 0 {
        return Err(Error::UnsupportedParameter(format!(
            "group count must be odd, got {m}"
        )));
    }
    let family = family_a(m)?;
    if let Some(blocks) = load_cached_blocks(m) {
        if check_gdd(m, &blocks).is_ok() && family.blocks.is_subset(&blocks) {
            return Ok(Gdd {
                m,
                blocks,
                marked_a1: family.lambda1,
            });
        }
    }
    let mut blocks = family.blocks.clone();
    let completion = complete_cover(m, &family.blocks, budget)?;
    blocks.extend(completion);
    check_gdd(m, &blocks).map_err(Error::Construction)?;
    store_cached_blocks(m, &blocks);
    Ok(Gdd {
        m,
        blocks,
        marked_a1: family.lambda1,
    })
}

/// Image of a flattened label under the translation that adds `a` to the
/// group (mod m) and `b` to the slot (mod 6).
fn translate(flat: Letter, a: usize, b: usize, m: usize) -> Letter {
    let g = (flat as usize / GROUP_SIZE + a) % m;
    let s = (flat as usize % GROUP_SIZE + b) % GROUP_SIZE;
    (g * GROUP_SIZE + s) as Letter
}

/// Canonical representative of a point set's orbit under the m·6 group/slot
/// translations: the least sorted translate. The least translate maps some
/// point to label 0, so only those m·6 / (m·6) · k translations need trying.
fn orbit_canon<const K: usize>(points: [Letter; K], m: usize) -> [Letter; K] {
    let mut best: Option<[Letter; K]> = None;
    for &p in &points {
        let (pg, ps) = (p as usize / GROUP_SIZE, p as usize % GROUP_SIZE);
        let (a, b) = (m - pg, GROUP_SIZE - ps);
        let mut image = points.map(|x| translate(x, a, b, m));
        image.sort_unstable();
        if best.is_none() || image < best.unwrap() {
            best = Some(image);
        }
    }
    best.unwrap()
}

/// Completes the cross-triple cover over the candidate blocks with at most
/// two points per group, by exact cover on the triples 𝒜 leaves uncovered.
///
/// With three groups the leftover search is small and runs directly. With
/// five, the search space is far too large for a direct cover, but 𝒜 is
/// invariant under the group/slot translations (the three pairings are
/// cyclic slot-shifts of one another), so the completion is searched among
/// translation-invariant block families: one exact cover over triple
/// *orbits*, whose solution rows are expanded back into full orbits of 30
/// blocks each.
fn complete_cover(
    m: usize,
    forced: &BTreeSet<Quad>,
    budget: &Budget,
) -> Result<Vec<Quad>> {
    let n = GROUP_SIZE * m;
    let mut covered = vec![false; c3(n)];
    for quad in forced.iter() {
        let p = quad.points();
        for (i, j, k) in (0..4).tuple_combinations() {
            covered[triple_rank(p[i] as usize, p[j] as usize, p[k] as usize)] = true;
        }
    }
    if m == 5 {
        return complete_cover_by_orbits(m, &covered, budget);
    }
    // Column per uncovered cross triple, in ascending rank order.
    let mut col_of_rank = vec![usize::MAX; c3(n)];
    let mut num_cols = 0usize;
    for (a, b, c) in (0..n).tuple_combinations() {
        let cross = !(group_of(a as Letter) == group_of(b as Letter)
            && group_of(b as Letter) == group_of(c as Letter));
        let rank = triple_rank(a, b, c);
        if cross && !covered[rank] {
            col_of_rank[rank] = num_cols;
            num_cols += 1;
        }
    }
    let mut cover = ExactCover::new(num_cols);
    let mut row_quads = Vec::new();
    'quads: for (a, b, c, d) in (0..n).tuple_combinations() {
        let pts = [a, b, c, d];
        for g in 1..=m {
            if pts
                .iter()
                .filter(|&&x| group_of(x as Letter) == g)
                .count()
                >= 3
            {
                continue 'quads;
            }
        }
        let mut cols = [0usize; 4];
        for (slot, (i, j, k)) in (0..4).tuple_combinations().enumerate() {
            let col = col_of_rank[triple_rank(pts[i], pts[j], pts[k])];
            if col == usize::MAX {
                // Some triple is already covered (or within-group): the quad
                // cannot join the completion.
                continue 'quads;
            }
            cols[slot] = col;
        }
        cols.sort_unstable();
        cover.add_row(&cols);
        row_quads.push(Quad::new(pts.map(|x| x as Letter))?);
    }
    match cover.solve_first(budget) {
        CoverOutcome::Solution(rows) => Ok(rows.into_iter().map(|r| row_quads[r]).collect()),
        CoverOutcome::Infeasible => Err(Error::Construction(format!(
            "no completion of the {m}-group design extends the algebraic family"
        ))),
        CoverOutcome::OutOfBudget => Err(Error::BudgetExhausted(format!(
            "completion search for the {m}-group design exceeded its budget"
        ))),
    }
}

/// Exact cover over translation orbits of the uncovered cross triples.
///
/// Requires every orbit to be uniformly covered or uncovered (true when the
/// forced blocks are translation-invariant, as 𝒜 is) and the action to be
/// free on the relevant triples and quads, both verified as it runs. Each
/// solution row is a canonical quad standing for its orbit of 30 blocks.
fn complete_cover_by_orbits(
    m: usize,
    covered: &[bool],
    budget: &Budget,
) -> Result<Vec<Quad>> {
    let n = GROUP_SIZE * m;
    let orbit_size = m * GROUP_SIZE;
    // Column per uncovered cross-triple orbit, keyed by the rank of the
    // canonical representative.
    let mut col_of_canon = vec![usize::MAX; c3(n)];
    let mut canon_stats: Vec<(usize, usize, usize)> = Vec::new(); // (canon rank, total, covered)
    let mut stat_index = vec![usize::MAX; c3(n)];
    for (a, b, c) in (0..n as Letter).tuple_combinations() {
        if group_of(a) == group_of(b) && group_of(b) == group_of(c) {
            continue;
        }
        let canon = orbit_canon([a, b, c], m);
        let cr = triple_rank(canon[0] as usize, canon[1] as usize, canon[2] as usize);
        if stat_index[cr] == usize::MAX {
            stat_index[cr] = canon_stats.len();
            canon_stats.push((cr, 0, 0));
        }
        let entry = &mut canon_stats[stat_index[cr]];
        entry.1 += 1;
        entry.2 += covered[triple_rank(a as usize, b as usize, c as usize)] as usize;
    }
    let mut num_cols = 0;
    for &(cr, total, hit) in &canon_stats {
        if total != orbit_size {
            return Err(Error::Construction(format!(
                "triple orbit of rank {cr} has size {total}, expected {orbit_size}"
            )));
        }
        if hit != 0 && hit != total {
            return Err(Error::Construction(
                "forced blocks are not translation-invariant; orbit cover is unsound".into(),
            ));
        }
        if hit == 0 {
            col_of_canon[cr] = num_cols;
            num_cols += 1;
        }
    }
    // Candidate rows: canonical quads (their orbits), all four triples in
    // distinct uncovered orbits, at most two points per group.
    let mut cover = ExactCover::new(num_cols);
    let mut row_quads = Vec::new();
    let mut seen = BTreeSet::new();
    'quads: for (b, c, d) in (1..n as Letter).tuple_combinations() {
        let pts = [0, b, c, d];
        for g in 1..=m {
            if pts.iter().filter(|&&x| group_of(x) == g).count() >= 3 {
                continue 'quads;
            }
        }
        let canon = orbit_canon(pts, m);
        if !seen.insert(canon) {
            continue;
        }
        let mut cols = [0usize; 4];
        for (slot, (i, j, k)) in (0..4).tuple_combinations().enumerate() {
            let t = orbit_canon([canon[i], canon[j], canon[k]], m);
            let col = col_of_canon[triple_rank(t[0] as usize, t[1] as usize, t[2] as usize)];
            if col == usize::MAX {
                continue 'quads;
            }
            cols[slot] = col;
        }
        cols.sort_unstable();
        if cols.windows(2).any(|w| w[0] == w[1]) {
            // Two triples of the quad share an orbit: its orbit would cover
            // that triple orbit twice.
            continue;
        }
        cover.add_row(&cols);
        row_quads.push(Quad::new(canon)?);
    }
    match cover.solve_first(budget) {
        CoverOutcome::Solution(rows) => {
            let mut blocks = BTreeSet::new();
            for r in rows {
                let pts = row_quads[r].points();
                for a in 0..m {
                    for b in 0..GROUP_SIZE {
                        let quad = Quad::new(pts.map(|x| translate(x, a, b, m)))?;
                        if !blocks.insert(quad) {
                            return Err(Error::Construction(format!(
                                "orbit of block {} is shorter than {orbit_size}",
                                row_quads[r]
                            )));
                        }
                    }
                }
            }
            Ok(blocks.into_iter().collect())
        }
        CoverOutcome::Infeasible => Err(Error::Construction(format!(
            "no translation-invariant completion of the {m}-group design exists"
        ))),
        CoverOutcome::OutOfBudget => Err(Error::BudgetExhausted(format!(
            "completion search for the {m}-group design exceeded its budget"
        ))),
    }
}

fn cache_path(m: usize) -> Option<PathBuf> {
    let dir = std::env::var_os(CACHE_DIR_ENV)?;
    if dir.is_empty() {
        return None;
    }
    Some(PathBuf::from(dir).join(format!("gdd-m{m}.txt")))
}

fn load_cached_blocks(m: usize) -> Option<BTreeSet<Quad>> {
    let text = std::fs::read_to_string(cache_path(m)?).ok()?;
    let mut blocks = BTreeSet::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let labels: Vec<Letter> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .ok()?;
        let quad = Quad::new(<[Letter; 4]>::try_from(labels).ok()?).ok()?;
        blocks.insert(quad);
    }
    Some(blocks)
}

fn store_cached_blocks(m: usize, blocks: &BTreeSet<Quad>) {
    let Some(path) = cache_path(m) else {
        return;
    };
    if let Some(dir) = path.parent() {
        if std::fs::create_dir_all(dir).is_err() {
            return;
        }
    }
    let mut text = format!("# gdd m={m}\n");
    for quad in blocks {
        text.push_str(&quad.to_string());
        text.push('\n');
    }
    // Best-effort cache: a failed write only costs a rebuild next time.
    let _ = std::fs::write(path, text);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairs::hexagon_edge;

    #[test]
    fn grouped_point_flattening_is_a_bijection() {
        for flat in 0..30 as Letter {
            let p = GroupedPoint::from_flat(flat);
            assert!(p.group >= 1 && p.group <= 5);
            assert!((p.slot as usize) < GROUP_SIZE);
            assert_eq!(p.flatten(), flat);
        }
        assert_eq!(GroupedPoint::new(2, 3).unwrap().flatten(), 9);
        assert!(GroupedPoint::new(0, 0).is_err());
        assert!(GroupedPoint::new(1, 6).is_err());
    }

    #[test]
    fn family_a_counts() {
        let fam = family_a(3).unwrap();
        assert_eq!(fam.blocks.len(), 81);
        assert_eq!(fam.lambda1.len(), 27);
        assert!(fam.lambda1.is_subset(&fam.blocks));
        // Every block: two points in each of two groups.
        for quad in &fam.blocks {
            let p = quad.points();
            let groups: Vec<usize> = p.iter().map(|&x| group_of(x)).collect();
            assert_eq!(groups[0], groups[1]);
            assert_eq!(groups[2], groups[3]);
            assert_ne!(groups[0], groups[2]);
        }
        assert!(family_a(1).unwrap().blocks.is_empty());
        assert!(matches!(
            family_a(2),
            Err(Error::UnsupportedParameter(_))
        ));
    }

    #[test]
    fn family_a_covers_non_hexagon_pair_triples_once() {
        let fam = family_a(3).unwrap();
        let n = 18;
        let mut count = vec![0u32; c3(n)];
        for quad in &fam.blocks {
            let p = quad.points();
            for (i, j, k) in (0..4).tuple_combinations() {
                count[triple_rank(p[i] as usize, p[j] as usize, p[k] as usize)] += 1;
            }
        }
        for (a, b, c) in (0..n as Letter).tuple_combinations() {
            let (ga, gb, gc) = (group_of(a), group_of(b), group_of(c));
            // The family only covers triples with a same-group pair whose
            // slots are not a hexagon edge, and covers each exactly once.
            let expected = if ga == gb && gb != gc && !hexagon_edge(a % 6, b % 6) {
                1
            } else if gb == gc && ga != gb && !hexagon_edge(b % 6, c % 6) {
                1
            } else if ga == gc && ga != gb && !hexagon_edge(a % 6, c % 6) {
                1
            } else {
                0
            };
            assert_eq!(
                count[triple_rank(a as usize, b as usize, c as usize)],
                expected,
                "triple {{{a}, {b}, {c}}}"
            );
        }
    }

    #[test]
    fn build_gdd_one_group_is_empty() {
        let g = build_gdd(1).unwrap();
        assert_eq!(g.blocks().len(), 0);
        assert!(is_gdd(&g));
    }

    #[test]
    fn build_gdd_three_groups() {
        let g = build_gdd(3).unwrap();
        assert_eq!(g.blocks().len(), 189);
        assert_eq!(g.marked_a1().len(), 27);
        assert!(is_gdd(&g));
        let fam = family_a(3).unwrap();
        assert!(fam.blocks.is_subset(g.blocks()));
        // Determinism.
        let h = build_gdd(3).unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn build_gdd_five_groups() {
        let g = build_gdd(5).unwrap();
        assert_eq!(g.blocks().len(), expected_gdd_blocks(5));
        assert_eq!(g.blocks().len(), 990);
        assert_eq!(g.marked_a1().len(), 90);
        assert!(is_gdd(&g));
        assert!(family_a(5).unwrap().blocks.is_subset(g.blocks()));
        // Determinism.
        let h = build_gdd(5).unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn is_gdd_rejects_damaged_designs() {
        let g = build_gdd(3).unwrap();
        let mut damaged = g.blocks().clone();
        let first = *damaged.iter().next().unwrap();
        damaged.remove(&first);
        let bad = Gdd {
            m: 3,
            blocks: damaged,
            marked_a1: g.marked_a1().clone(),
        };
        assert!(!is_gdd(&bad));
        // The algebraic family alone leaves hexagon-edge triples uncovered.
        let fam = family_a(3).unwrap();
        let partial = Gdd {
            m: 3,
            blocks: fam.blocks,
            marked_a1: fam.lambda1,
        };
        assert!(!is_gdd(&partial));
    }

    #[test]
    fn marked_blocks_share_whole_group_pairs() {
        // Any two λ=1 blocks sharing exactly two points share a same-group
        // pair, which forms the first or last sorted pair of each block.
        let fam = family_a(3).unwrap();
        let blocks: Vec<&Quad> = fam.lambda1.iter().collect();
        let mut seen_shared = false;
        for (i, a) in blocks.iter().enumerate() {
            for b in &blocks[i + 1..] {
                let pa = a.points();
                let pb = b.points();
                let shared: Vec<Letter> =
                    pa.iter().copied().filter(|x| pb.contains(x)).collect();
                if shared.len() != 2 {
                    continue;
                }
                seen_shared = true;
                let s: BTreeSet<Letter> = shared.iter().copied().collect();
                let first_a: BTreeSet<Letter> = pa[..2].iter().copied().collect();
                let last_a: BTreeSet<Letter> = pa[2..].iter().copied().collect();
                let first_b: BTreeSet<Letter> = pb[..2].iter().copied().collect();
                let last_b: BTreeSet<Letter> = pb[2..].iter().copied().collect();
                assert!(s == first_a || s == last_a, "{a} vs {b}");
                assert!(s == first_b || s == last_b, "{a} vs {b}");
            }
        }
        assert!(seen_shared);
    }
}
