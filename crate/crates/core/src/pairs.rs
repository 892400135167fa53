//! Pair-partition machinery on B_{2m}: the two Hanani-style families P and
//! P̄, the Reiss round-robin partition, and the fixed three pairings of B₆.
//!
//! A family partitions all m(2m−1) unordered pairs of B_{2m} into labeled
//! systems of mutually disjoint pairs (perfect or near-perfect matchings).

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::word::Letter;

/// Which of the four families a `PairSystemFamily` belongs to; fixes the
/// invariants `validate` enforces.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PairKind {
    /// 2m−1 systems of m disjoint pairs; labels 0..2m−2.
    P,
    /// 2m systems; system η ∈ B_m has m−1 pairs avoiding letters 2η, 2η+1;
    /// systems m..2m−1 are perfect matchings.
    PBar,
    /// 2n−1 systems of n disjoint pairs on B_{2n}; labels 1..2n−1.
    Reiss,
    /// The three fixed perfect matchings of B₆ that avoid the hexagon edges
    /// {0,1},{1,2},{2,3},{3,4},{4,5},{0,5}; labels 1..3.
    Mills,
}

/// One labeled system of mutually disjoint pairs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PairSystem {
    pub label: usize,
    /// Pairs as (lo, hi), sorted.
    pub pairs: Vec<(Letter, Letter)>,
}

impl PairSystem {
    fn new(label: usize, mut pairs: Vec<(Letter, Letter)>) -> PairSystem {
        for p in &mut pairs {
            if p.0 > p.1 {
                *p = (p.1, p.0);
            }
        }
        pairs.sort_unstable();
        PairSystem { label, pairs }
    }

    pub fn contains(&self, a: Letter, b: Letter) -> bool {
        let p = if a <= b { (a, b) } else { (b, a) };
        self.pairs.binary_search(&p).is_ok()
    }
}

/// A labeled list of pair systems over B_{2·half}.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PairSystemFamily {
    /// m for kinds P/PBar, n for Reiss, 3 for Mills.
    pub half: usize,
    pub kind: PairKind,
    pub systems: Vec<PairSystem>,
}

impl PairSystemFamily {
    pub fn points(&self) -> usize {
        2 * self.half
    }

    /// The system with the given label.
    pub fn system(&self, label: usize) -> &PairSystem {
        self.systems
            .iter()
            .find(|s| s.label == label)
            .unwrap_or_else(|| panic!("no system labeled {label}"))
    }

    /// Enforces the kind-specific structural invariants.
    pub fn validate(&self) -> Result<()> {
        let n = self.points() as Letter;
        let fail = |msg: String| Err(Error::Construction(msg));

        // Pairs use valid letters, are disjoint within a system, and no pair
        // repeats across the family.
        let mut seen: BTreeSet<(Letter, Letter)> = BTreeSet::new();
        for sys in &self.systems {
            let mut used: BTreeSet<Letter> = BTreeSet::new();
            for &(a, b) in &sys.pairs {
                if a >= b || b >= n {
                    return fail(format!("system {}: bad pair ({a},{b})", sys.label));
                }
                if !used.insert(a) || !used.insert(b) {
                    return fail(format!("system {}: pairs not disjoint", sys.label));
                }
                if !seen.insert((a, b)) {
                    return fail(format!("pair ({a},{b}) appears twice in the family"));
                }
            }
        }

        let m = self.half;
        let expected_total = m * (2 * m - 1);
        match self.kind {
            PairKind::P | PairKind::Reiss => {
                let first_label = if self.kind == PairKind::P { 0 } else { 1 };
                if self.systems.len() != 2 * m - 1 {
                    return fail(format!("expected {} systems", 2 * m - 1));
                }
                for (i, sys) in self.systems.iter().enumerate() {
                    if sys.label != first_label + i {
                        return fail(format!("labels not consecutive at {}", sys.label));
                    }
                    if sys.pairs.len() != m {
                        return fail(format!(
                            "system {} has {} pairs, expected {m}",
                            sys.label,
                            sys.pairs.len()
                        ));
                    }
                }
                if seen.len() != expected_total {
                    return fail("family does not cover every pair exactly once".into());
                }
            }
            PairKind::PBar => {
                if self.systems.len() != 2 * m {
                    return fail(format!("expected {} systems", 2 * m));
                }
                for (i, sys) in self.systems.iter().enumerate() {
                    if sys.label != i {
                        return fail(format!("labels not consecutive at {}", sys.label));
                    }
                    if sys.label < m {
                        let eta = sys.label as Letter;
                        if sys.pairs.len() != m - 1 {
                            return fail(format!(
                                "deficient system {} has {} pairs, expected {}",
                                sys.label,
                                sys.pairs.len(),
                                m - 1
                            ));
                        }
                        let uses_forbidden = sys
                            .pairs
                            .iter()
                            .any(|&(a, b)| a / 2 == eta || b / 2 == eta);
                        if uses_forbidden {
                            return fail(format!(
                                "deficient system {} touches letters {} or {}",
                                sys.label,
                                2 * eta,
                                2 * eta + 1
                            ));
                        }
                    } else if sys.pairs.len() != m {
                        return fail(format!(
                            "full system {} has {} pairs, expected {m}",
                            sys.label,
                            sys.pairs.len()
                        ));
                    }
                }
                if seen.len() != expected_total {
                    return fail("family does not cover every pair exactly once".into());
                }
            }
            PairKind::Mills => {
                if self.half != 3 || self.systems.len() != 3 {
                    return fail("fixed B6 family must have 3 systems on 6 points".into());
                }
                for (i, sys) in self.systems.iter().enumerate() {
                    if sys.label != 1 + i || sys.pairs.len() != 3 {
                        return fail("fixed B6 family systems must be 3 labeled matchings".into());
                    }
                }
                if seen.len() != 9 {
                    return fail("fixed B6 family must cover 9 distinct pairs".into());
                }
                for &(a, b) in &seen {
                    if hexagon_edge(a, b) {
                        return fail(format!("hexagon edge ({a},{b}) must stay uncovered"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Whether {a,b} is an edge of the 6-cycle 0-1-2-3-4-5-0.
pub fn hexagon_edge(a: Letter, b: Letter) -> bool {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    b == a + 1 || (a == 0 && b == 5)
}

fn md(x: i64, n: usize) -> Letter {
    let n = n as i64;
    (((x % n) + n) % n) as Letter
}

/// The P family on B_{2m}: 2m−1 labeled systems of m disjoint pairs, every
/// pair of B_{2m} in exactly one system.
///
/// For even m, systems m..2m−2 end with the two pairs
/// {2m−(3+(−1)^γ)/2, γ} and {2m−(3−(−1)^γ)/2, m+γ−1}: the assignment under
/// which the family actually partitions all pairs (the opposite sign choice
/// reproduces an existing pair already at m=2, which `validate` rejects).
pub fn p_systems(m: usize) -> Result<PairSystemFamily> {
    if m == 0 {
        return Err(Error::InvalidArgument("p_systems needs m >= 1".into()));
    }
    let n = 2 * m;
    let mut systems: Vec<PairSystem> = Vec::with_capacity(n - 1);
    let mut push = |label: usize, pairs: Vec<(Letter, Letter)>| {
        systems.push(PairSystem::new(label, pairs));
    };

    // Systems below the γ-range: m of them for even m, m−1 for odd m.
    let beta_range = if m % 2 == 0 { m / 2 } else { (m - 1) / 2 };
    for beta in 0..beta_range {
        let up: Vec<_> = (0..m)
            .map(|a| {
                let a = 2 * a as i64;
                (md(a, n), md(a + 2 * beta as i64 + 1, n))
            })
            .collect();
        push(2 * beta, up);
        let down: Vec<_> = (0..m)
            .map(|a| {
                let a = 2 * a as i64;
                (md(a, n), md(a - 2 * beta as i64 - 1, n))
            })
            .collect();
        push(2 * beta + 1, down);
    }

    if m % 2 == 0 {
        for gamma in 0..m - 1 {
            let g = gamma as i64;
            let mut pairs: Vec<(Letter, Letter)> = Vec::with_capacity(m);
            for b in 0..gamma {
                pairs.push((md(b as i64, n), md(2 * g - b as i64, n)));
            }
            for c in 2 * gamma + 1..=m + gamma - 2 {
                pairs.push((md(c as i64, n), md(2 * (m as i64) + 2 * g - c as i64 - 2, n)));
            }
            let sign: i64 = if gamma % 2 == 0 { 1 } else { -1 };
            pairs.push((md(2 * m as i64 - (3 + sign) / 2, n), md(g, n)));
            pairs.push((
                md(2 * m as i64 - (3 - sign) / 2, n),
                md(m as i64 + g - 1, n),
            ));
            push(m + gamma, pairs);
        }
    } else {
        for gamma in 0..m {
            let g = gamma as i64;
            let mut pairs: Vec<(Letter, Letter)> = Vec::with_capacity(m);
            for b in 0..gamma {
                pairs.push((md(b as i64, n), md(2 * g - b as i64, n)));
            }
            for c in 2 * gamma + 1..=m + gamma - 1 {
                pairs.push((md(c as i64, n), md(2 * (m as i64) + 2 * g - c as i64, n)));
            }
            pairs.push((md(g, n), md(m as i64 + g, n)));
            push(m - 1 + gamma, pairs);
        }
    }

    let fam = PairSystemFamily {
        half: m,
        kind: PairKind::P,
        systems,
    };
    fam.validate()?;
    Ok(fam)
}

/// The P̄ family on B_{2m} (m ≥ 2): 2m labeled systems covering every pair
/// once, where system η < m has m−1 pairs avoiding {2η, 2η+1}.
///
/// Built from `p_systems(m)` by extracting one designated pair from each of
/// m systems (the extracted pairs form a perfect matching), relabeling all
/// letters so that the extracted matching becomes {{0,1},{2,3},...}, and
/// appending it as the last system. Each depleted system is indexed by the
/// η whose letters it now avoids; untouched systems keep ascending order on
/// labels m..2m−2.
pub fn p_bar_systems(m: usize) -> Result<PairSystemFamily> {
    if m < 2 {
        return Err(Error::InvalidArgument("p_bar_systems needs m >= 2".into()));
    }
    if m == 2 {
        // Too small for the extraction scheme: every perfect matching of B₄
        // is itself an entire P-system. Use the direct family.
        let fam = PairSystemFamily {
            half: 2,
            kind: PairKind::PBar,
            systems: vec![
                PairSystem::new(0, vec![(2, 3)]),
                PairSystem::new(1, vec![(0, 1)]),
                PairSystem::new(2, vec![(0, 3), (1, 2)]),
                PairSystem::new(3, vec![(0, 2), (1, 3)]),
            ],
        };
        fam.validate()?;
        return Ok(fam);
    }

    let n = 2 * m;
    let base = p_systems(m)?;

    // (source system, pair to extract) and the relabeling permutation.
    let mut extract: Vec<(usize, (Letter, Letter))> = Vec::with_capacity(m);
    let mut perm: Vec<Letter> = (0..n as Letter).collect();
    if m % 2 == 0 {
        for mu in 1..m / 2 {
            let mu_i = mu as i64;
            extract.push((2 * mu, (md(2 * mu_i, n), md(4 * mu_i + 1, n))));
            extract.push((
                2 * mu - 1,
                (md(2 * m as i64 - 2 - 2 * mu_i, n), md(2 * m as i64 - 1 - 4 * mu_i, n)),
            ));
            perm[md(2 * mu_i, n) as usize] = md(4 * mu_i, n);
            perm[md(4 * mu_i + 1, n) as usize] = md(4 * mu_i + 1, n);
            perm[md(2 * m as i64 - 2 - 2 * mu_i, n) as usize] = md(4 * mu_i - 2, n);
            perm[md(2 * m as i64 - 1 - 4 * mu_i, n) as usize] = md(4 * mu_i - 1, n);
        }
        extract.push((m, (md(2 * m as i64 - 2, n), 0)));
        extract.push((m + 1, (md(2 * m as i64 - 1, n), 1)));
        perm[n - 2] = 1;
        perm[0] = 0;
        perm[n - 1] = (n - 1) as Letter;
        perm[1] = (n - 2) as Letter;
    } else {
        for mu in 0..(m - 1) / 2 {
            let mu_i = mu as i64;
            extract.push((2 * mu, (md(2 * mu_i, n), md(4 * mu_i + 1, n))));
            extract.push((
                2 * mu + 1,
                (md(2 * m as i64 - 2 - 2 * mu_i, n), md(2 * m as i64 - 3 - 4 * mu_i, n)),
            ));
            perm[md(2 * mu_i, n) as usize] = md(4 * mu_i, n);
            perm[md(4 * mu_i + 1, n) as usize] = md(4 * mu_i + 1, n);
            perm[md(2 * m as i64 - 2 - 2 * mu_i, n) as usize] = md(4 * mu_i + 2, n);
            perm[md(2 * m as i64 - 3 - 4 * mu_i, n) as usize] = md(4 * mu_i + 3, n);
        }
        extract.push((2 * m - 2, ((m - 1) as Letter, (n - 1) as Letter)));
        perm[m - 1] = (n - 2) as Letter;
        perm[n - 1] = (n - 1) as Letter;
    }

    // The permutation must be a bijection and the extracted pairs a perfect
    // matching; both fail loudly if the scheme above is wrong.
    {
        let mut seen = vec![false; n];
        for &p in &perm {
            if seen[p as usize] {
                return Err(Error::Construction(format!(
                    "relabeling is not a bijection at image {p}"
                )));
            }
            seen[p as usize] = true;
        }
        let mut touched = vec![false; n];
        for &(_, (a, b)) in &extract {
            for l in [a, b] {
                if touched[l as usize] {
                    return Err(Error::Construction(
                        "extracted pairs are not a matching".into(),
                    ));
                }
                touched[l as usize] = true;
            }
        }
        if !touched.iter().all(|&t| t) {
            return Err(Error::Construction(
                "extracted pairs do not cover all letters".into(),
            ));
        }
    }

    let norm = |a: Letter, b: Letter| if a <= b { (a, b) } else { (b, a) };
    let mapped = |a: Letter, b: Letter| norm(perm[a as usize], perm[b as usize]);

    let mut depleted: Vec<(usize, Vec<(Letter, Letter)>)> = Vec::new(); // (η, pairs)
    let mut untouched: Vec<Vec<(Letter, Letter)>> = Vec::new();
    for sys in &base.systems {
        let removed: Vec<&(Letter, Letter)> = extract
            .iter()
            .filter(|(src, _)| *src == sys.label)
            .map(|(_, p)| p)
            .collect();
        let mut pairs: Vec<(Letter, Letter)> = Vec::new();
        let mut removed_found = 0;
        for &(a, b) in &sys.pairs {
            if removed.iter().any(|&&(x, y)| norm(x, y) == norm(a, b)) {
                removed_found += 1;
            } else {
                pairs.push(mapped(a, b));
            }
        }
        if removed_found != removed.len() {
            return Err(Error::Construction(format!(
                "designated pair missing from source system {}",
                sys.label
            )));
        }
        if removed.is_empty() {
            untouched.push(pairs);
        } else {
            // Identify η from the two letters this system now avoids.
            let mut used = vec![false; n];
            for &(a, b) in &pairs {
                used[a as usize] = true;
                used[b as usize] = true;
            }
            let missing: Vec<usize> = (0..n).filter(|&l| !used[l]).collect();
            if missing.len() != 2 || missing[1] != missing[0] + 1 || missing[0] % 2 != 0 {
                return Err(Error::Construction(format!(
                    "depleted system {} misses letters {missing:?}, not a consecutive even-odd pair",
                    sys.label
                )));
            }
            depleted.push((missing[0] / 2, pairs));
        }
    }

    depleted.sort_by_key(|&(eta, _)| eta);
    let etas: Vec<usize> = depleted.iter().map(|&(e, _)| e).collect();
    if etas != (0..m).collect::<Vec<_>>() {
        return Err(Error::Construction(format!(
            "depleted systems cover η = {etas:?}, expected 0..{m}"
        )));
    }

    let mut systems: Vec<PairSystem> = depleted
        .into_iter()
        .map(|(eta, pairs)| PairSystem::new(eta, pairs))
        .collect();
    for (i, pairs) in untouched.into_iter().enumerate() {
        systems.push(PairSystem::new(m + i, pairs));
    }
    let new_system: Vec<(Letter, Letter)> =
        extract.iter().map(|&(_, (a, b))| mapped(a, b)).collect();
    systems.push(PairSystem::new(2 * m - 1, new_system));

    let fam = PairSystemFamily {
        half: m,
        kind: PairKind::PBar,
        systems,
    };
    fam.validate()?;
    Ok(fam)
}

/// Round-robin partition of the pairs of B_{2n} into 2n−1 labeled systems of
/// n disjoint pairs: {a,b} with a<b<2n−1 gets label a+b+1 (mod 2n−1), and
/// {a, 2n−1} gets label 2a+1 (mod 2n−1); representatives are 1..2n−1.
pub fn reiss_partition(n: usize) -> Result<PairSystemFamily> {
    if n == 0 {
        return Err(Error::InvalidArgument("reiss_partition needs n >= 1".into()));
    }
    let modulus = 2 * n - 1;
    let rep = |x: usize| {
        let r = x % modulus;
        if r == 0 {
            modulus
        } else {
            r
        }
    };
    let mut buckets: Vec<Vec<(Letter, Letter)>> = vec![Vec::new(); modulus + 1];
    for a in 0..2 * n - 1 {
        for b in a + 1..2 * n - 1 {
            buckets[rep(a + b + 1)].push((a as Letter, b as Letter));
        }
        buckets[rep(2 * a + 1)].push((a as Letter, (2 * n - 1) as Letter));
    }
    let systems = (1..=modulus)
        .map(|l| PairSystem::new(l, buckets[l].clone()))
        .collect();
    let fam = PairSystemFamily {
        half: n,
        kind: PairKind::Reiss,
        systems,
    };
    fam.validate()?;
    Ok(fam)
}

/// The three fixed perfect matchings of B₆ covering exactly the nine
/// non-hexagon pairs, each once.
pub fn mills_pairs() -> PairSystemFamily {
    let fam = PairSystemFamily {
        half: 3,
        kind: PairKind::Mills,
        systems: vec![
            PairSystem::new(1, vec![(0, 3), (1, 5), (2, 4)]),
            PairSystem::new(2, vec![(1, 4), (0, 2), (3, 5)]),
            PairSystem::new(3, vec![(2, 5), (1, 3), (0, 4)]),
        ],
    };
    fam.validate().expect("fixed family is valid");
    fam
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_m1_is_single_pair() {
        let fam = p_systems(1).unwrap();
        assert_eq!(fam.systems.len(), 1);
        assert_eq!(fam.systems[0].pairs, vec![(0, 1)]);
    }

    #[test]
    fn p_m2_first_system() {
        let fam = p_systems(2).unwrap();
        assert_eq!(fam.system(0).pairs, vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn p_rejects_m0() {
        assert!(p_systems(0).is_err());
    }

    #[test]
    fn p_invariants_small() {
        for m in 1..=8 {
            p_systems(m).unwrap().validate().unwrap();
        }
    }

    /// Memberships the P̄ extraction depends on.
    #[test]
    fn p_membership_guarantees() {
        for m in (2..=12).step_by(2) {
            let fam = p_systems(m).unwrap();
            let n = 2 * m;
            for mu in 0..m / 2 {
                assert!(
                    fam.system(2 * mu)
                        .contains((2 * mu) as Letter, ((4 * mu + 1) % n) as Letter),
                    "m={m} mu={mu}"
                );
            }
            assert!(fam.system(m).contains((2 * m - 2) as Letter, 0));
            if m >= 4 {
                assert!(fam.system(m + 1).contains((2 * m - 1) as Letter, 1));
            }
        }
        for m in (3..=11).step_by(2) {
            let fam = p_systems(m).unwrap();
            let n = 2 * m;
            for mu in 0..(m - 1) / 2 {
                assert!(
                    fam.system(2 * mu)
                        .contains((2 * mu) as Letter, ((4 * mu + 1) % n) as Letter),
                    "m={m} mu={mu}"
                );
            }
            assert!(fam
                .system(2 * m - 2)
                .contains((m - 1) as Letter, (2 * m - 1) as Letter));
        }
    }

    #[test]
    fn p_bar_m2_structure() {
        let fam = p_bar_systems(2).unwrap();
        assert_eq!(fam.system(0).pairs, vec![(2, 3)]);
        assert_eq!(fam.system(1).pairs, vec![(0, 1)]);
        assert_eq!(fam.system(2).pairs.len(), 2);
        assert_eq!(fam.system(3).pairs.len(), 2);
        let total: usize = fam.systems.iter().map(|s| s.pairs.len()).sum();
        assert_eq!(total, 6);
    }

    #[test]
    fn p_bar_m3_matches_hand_computation() {
        let fam = p_bar_systems(3).unwrap();
        assert_eq!(fam.system(0).pairs, vec![(2, 5), (3, 4)]);
        assert_eq!(fam.system(1).pairs, vec![(0, 5), (1, 4)]);
        assert_eq!(fam.system(2).pairs, vec![(0, 2), (1, 3)]);
        assert_eq!(fam.system(5).pairs, vec![(0, 1), (2, 3), (4, 5)]);
    }

    #[test]
    fn p_bar_rejects_small_m() {
        assert!(p_bar_systems(0).is_err());
        assert!(p_bar_systems(1).is_err());
    }

    #[test]
    fn p_bar_invariants_small() {
        for m in 2..=8 {
            p_bar_systems(m).unwrap().validate().unwrap();
        }
    }

    #[test]
    fn reiss_n1_and_n2() {
        let fam = reiss_partition(1).unwrap();
        assert_eq!(fam.systems.len(), 1);
        assert_eq!(fam.system(1).pairs, vec![(0, 1)]);

        // n=2 on letters 0..3.
        let fam = reiss_partition(2).unwrap();
        assert_eq!(fam.system(1).pairs, vec![(0, 3), (1, 2)]);
        assert_eq!(fam.system(2).pairs, vec![(0, 1), (2, 3)]);
        assert_eq!(fam.system(3).pairs, vec![(0, 2), (1, 3)]);
    }

    #[test]
    fn reiss_invariants_small() {
        for n in 1..=8 {
            reiss_partition(n).unwrap().validate().unwrap();
        }
        assert!(reiss_partition(0).is_err());
    }

    #[test]
    fn fixed_b6_family_is_as_listed() {
        let fam = mills_pairs();
        assert_eq!(fam.system(1).pairs, vec![(0, 3), (1, 5), (2, 4)]);
        assert_eq!(fam.system(2).pairs, vec![(0, 2), (1, 4), (3, 5)]);
        assert_eq!(fam.system(3).pairs, vec![(0, 4), (1, 3), (2, 5)]);
        // The six uncovered pairs are exactly the hexagon edges.
        let covered: BTreeSet<(Letter, Letter)> = fam
            .systems
            .iter()
            .flat_map(|s| s.pairs.iter().copied())
            .collect();
        assert_eq!(covered.len(), 9);
        for a in 0..6 {
            for b in a + 1..6 {
                assert_eq!(covered.contains(&(a, b)), !hexagon_edge(a, b));
            }
        }
    }

    #[test]
    fn b6_family_agrees_with_p3_tail() {
        // The last three systems of the P family on B₆ are the same three
        // matchings, in the same order.
        let p = p_systems(3).unwrap();
        let fixed = mills_pairs();
        for (i, lbl) in [2usize, 3, 4].into_iter().enumerate() {
            let a: BTreeSet<_> = p.system(lbl).pairs.iter().copied().collect();
            let b: BTreeSet<_> = fixed.system(i + 1).pairs.iter().copied().collect();
            assert_eq!(a, b);
        }
    }
}
