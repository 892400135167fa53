//! End-to-end acceptance checks: one test per promised behavior, each
//! printing a single pass/fail line under `cargo test`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, Mutex, OnceLock};
use std::time::{Duration, Instant};

use delcode::{
    base_sqs_14_raw, build_case, build_gdd, build_sqs_step, build_sqs_step_traced, deletion_ball,
    exact_cover_sqs, family_a, has_step_property, is_deletion_correcting, is_gdd, is_perfect,
    is_sqs, levenshtein_bound, max_code_search, optimal_code, perfect_code, profile,
    select_upper_quads, theorem2_bound, Budget, CaseId, Code, ConstructionTrace, Letter, Quad,
    RouteStep, Word, WordClass,
};

/// Supported alphabet sizes with the sharp code sizes q²(q+2)/4.
const SWEEP: [(usize, usize); 19] = [
    (2, 4),
    (4, 24),
    (6, 72),
    (8, 160),
    (10, 300),
    (12, 504),
    (14, 784),
    (16, 1152),
    (18, 1620),
    (20, 2200),
    (22, 2904),
    (24, 3744),
    (26, 4732),
    (28, 5880),
    (32, 8704),
    (34, 10404),
    (36, 12312),
    (38, 14440),
    (40, 16800),
];

type Built = Arc<(Code, ConstructionTrace)>;

fn optimal_cache() -> &'static Mutex<BTreeMap<usize, Built>> {
    static CACHE: OnceLock<Mutex<BTreeMap<usize, Built>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

/// Builds (or reuses) the optimal code for `q`; construction self-validates.
fn shared_optimal(q: usize) -> Built {
    let mut cache = optimal_cache().lock().unwrap();
    cache
        .entry(q)
        .or_insert_with(|| Arc::new(optimal_code(q).unwrap()))
        .clone()
}

fn word(letters: &[Letter]) -> Word {
    Word::new(letters.to_vec())
}

/// Parses a whitespace-separated list of compact digit words ("0230 ...").
fn digit_words(text: &str) -> BTreeSet<Word> {
    text.split_whitespace()
        .map(|tok| {
            tok.chars()
                .map(|ch| ch.to_digit(10).expect("digit") as Letter)
                .collect()
        })
        .collect()
}

/// All constant words plus all (a,a,b,b) with a ≠ b over B_q.
fn constants_and_pairs(q: Letter) -> BTreeSet<Word> {
    let mut words = BTreeSet::new();
    for a in 0..q {
        words.insert(word(&[a, a, a, a]));
        for b in 0..q {
            if a != b {
                words.insert(word(&[a, a, b, b]));
            }
        }
    }
    words
}

#[test]
fn optimal_codes_attain_the_sharp_bound_for_every_supported_alphabet() {
    for (q, size) in SWEEP {
        let started = Instant::now();
        let (code, trace) = optimal_code(q).unwrap();
        let elapsed = started.elapsed();
        assert!(
            elapsed <= Duration::from_secs(60),
            "q={q} took {elapsed:?}, budget is 60 s"
        );
        assert_eq!(code.len(), size, "q={q}");
        assert_eq!(code.len() as u64, theorem2_bound(q).unwrap(), "q={q}");
        assert!(is_deletion_correcting(&code, 1), "q={q}");
        assert_eq!(trace.total(), size, "q={q} trace sizes");
        optimal_cache()
            .lock()
            .unwrap()
            .insert(q, Arc::new((code, trace)));
    }
}

#[test]
fn thirty_letter_alphabet_builds_through_the_grouped_design_within_budget() {
    let started = Instant::now();
    let (code, trace) = optimal_code(30).unwrap();
    let elapsed = started.elapsed();
    assert!(
        elapsed <= Duration::from_secs(600),
        "q=30 took {elapsed:?}, budget is 600 s"
    );
    assert_eq!(code.len(), 7200);
    assert_eq!(code.len() as u64, theorem2_bound(30).unwrap());
    assert!(is_deletion_correcting(&code, 1));
    assert_eq!(trace.route, vec![RouteStep::Gdd(5)]);
    let design = build_gdd(5).unwrap();
    assert_eq!(design.blocks().len(), 990);
    assert!(is_gdd(&design));
}

#[test]
fn perfect_codes_tile_the_deleted_word_space_exactly() {
    for (q, size) in SWEEP {
        let code = perfect_code(q).unwrap();
        assert_eq!(code.len(), size, "q={q}");
        assert!(is_deletion_correcting(&code, 1), "q={q}");
        assert!(is_perfect(&code, 1).unwrap(), "q={q}");
        // Direct recount: the deletion balls must union to all q³ triples.
        let mut union = BTreeSet::new();
        for w in code.words() {
            union.extend(deletion_ball(w, 1).unwrap());
        }
        assert_eq!(union.len(), q * q * q, "q={q} ball union");
    }
}

#[test]
fn golden_codes_and_the_golden_quadruple_system_match_verbatim() {
    // The 24-word code over B₄, exactly as published.
    let expected_4 = digit_words(
        "0000 1111 2222 3333
         0011 0022 0033 1100
         1122 1133 2200 2211
         2233 3300 3311 3322
         0230 1231 2012 3013
         0321 2103 1302 3120",
    );
    let built4 = shared_optimal(4);
    let got4: BTreeSet<Word> = built4.0.words().cloned().collect();
    assert_eq!(got4, expected_4);

    // The 72-word code over B₆: constants, ordered (a,a,b,b) pairs, and the
    // published 36-word distinct-or-return orbit part.
    let mut expected_6 = constants_and_pairs(6);
    expected_6.extend(digit_words(
        "0230 1231 2012 3013 4014 5015
         0450 1451 2452 3453 4234 5235
         0251 1304 2053 3105 4035 5102
         0342 1325 2140 3124 4120 5143
         0431 1503 2413 3520 4215 5321
         0524 1542 2504 3541 4302 5340",
    ));
    assert_eq!(expected_6.len(), 72);
    let built6 = shared_optimal(6);
    let got6: BTreeSet<Word> = built6.0.words().cloned().collect();
    assert_eq!(got6, expected_6);

    // The published 14-point quadruple system: 91 quads, a valid system,
    // and its canonical relabeling carries the step property.
    let raw = base_sqs_14_raw();
    assert_eq!(raw.len(), 91);
    assert!(is_sqs(&raw, 14));
    let renamed = build_sqs_step(14).unwrap();
    assert_eq!(renamed.len(), 91);
    assert!(has_step_property(&renamed));
}

#[test]
fn quadruple_system_sweep_validates_with_full_case_coverage() {
    let mut cases_used = BTreeSet::new();
    for q in [4, 8, 10, 14, 16, 20, 22, 26, 28, 32, 34, 38, 40] {
        let (s, trace) = build_sqs_step_traced(q).unwrap();
        assert!(is_sqs(s.quads(), q), "q={q}");
        assert!(has_step_property(&s), "q={q}");
        assert_eq!(s.len(), q * (q - 1) * (q - 2) / 24, "q={q}");
        assert_eq!(select_upper_quads(&s).len(), q * (q - 2) / 8, "q={q}");
        for level in trace {
            if let Some(case) = level.case {
                cases_used.insert(case);
            }
        }
    }
    // The fifth case never wins the dispatch below 42; exercise it directly
    // on the admissible pair it accepts.
    let sub = build_sqs_step(8).unwrap();
    assert_eq!(CaseId::V.sub_q(26), 8);
    let via_v = build_case(CaseId::V, 26, &sub).unwrap();
    assert!(is_sqs(via_v.quads(), 26));
    assert!(has_step_property(&via_v));
    cases_used.insert(CaseId::V);
    let all: BTreeSet<CaseId> = CaseId::ALL.into_iter().collect();
    assert_eq!(cases_used, all, "every construction case exercised");
}

#[test]
fn grouped_design_contains_the_marked_algebraic_family() {
    let g = build_gdd(3).unwrap();
    assert_eq!(g.blocks().len(), 189);
    assert!(is_gdd(&g));
    let fam = family_a(3).unwrap();
    assert_eq!(fam.blocks.len(), 81);
    assert!(fam.blocks.is_subset(g.blocks()));
    assert_eq!(g.marked_a1().len(), 27);
    assert_eq!(*g.marked_a1(), fam.lambda1);
    assert!(g.marked_a1().is_subset(g.blocks()));
    // Exhaustive pair-structure property of the marked blocks: whenever two
    // of them share exactly two points, the shared points are a same-group
    // pair sitting as the first or last sorted pair of each block.
    let marked: Vec<&Quad> = g.marked_a1().iter().collect();
    let mut seen_shared = false;
    for (i, a) in marked.iter().enumerate() {
        for b in &marked[i + 1..] {
            let pa = a.points();
            let pb = b.points();
            let shared: Vec<Letter> = pa.iter().copied().filter(|x| pb.contains(x)).collect();
            if shared.len() != 2 {
                continue;
            }
            seen_shared = true;
            let s: BTreeSet<Letter> = shared.iter().copied().collect();
            for p in [pa, pb] {
                let first: BTreeSet<Letter> = p[..2].iter().copied().collect();
                let last: BTreeSet<Letter> = p[2..].iter().copied().collect();
                assert!(s == first || s == last, "{a} vs {b}");
            }
        }
    }
    assert!(seen_shared);
}

#[test]
fn search_oracles_agree_with_the_constructions() {
    let out = max_code_search(4, 2, &Budget::unlimited()).unwrap();
    assert!(out.exact);
    assert_eq!(out.size, 4);
    assert_eq!(out.size as u64, theorem2_bound(2).unwrap());

    let s8 = exact_cover_sqs(8, &Budget::unlimited()).unwrap();
    assert!(is_sqs(&s8, 8));
    assert_eq!(s8.len(), 14);
    assert_eq!(s8.len(), build_sqs_step(8).unwrap().len());

    let s10 = exact_cover_sqs(10, &Budget::unlimited()).unwrap();
    assert!(is_sqs(&s10, 10));
    assert_eq!(s10.len(), 30);
    assert_eq!(s10.len(), build_sqs_step(10).unwrap().len());
}

#[test]
fn sharp_bound_never_exceeds_the_general_bound() {
    for q in (2..=100usize).step_by(2) {
        let sharp = theorem2_bound(q).unwrap();
        let general = levenshtein_bound(4, q).unwrap();
        assert!(sharp <= general, "q={q}");
        if q >= 4 {
            assert!(sharp < general, "q={q} should be strict");
        }
    }
    for (q, expected) in [(4, (25, 24)), (6, (73, 72)), (8, (162, 160)), (10, (302, 300))] {
        assert_eq!(
            (
                levenshtein_bound(4, q).unwrap(),
                theorem2_bound(q).unwrap()
            ),
            expected,
            "q={q}"
        );
    }
}

#[test]
fn property_samples_from_every_suite_hold() {
    use delcode::{all_words, gen_a, gen_b, indel_distance, p_bar_systems, p_systems,
        reiss_partition, Quad4};

    // Metric axioms over all of B₃³.
    let words = all_words(3, 3);
    for x in &words {
        for y in &words {
            let d = indel_distance(x, y);
            assert_eq!(d == 0, x == y);
            assert_eq!(d, indel_distance(y, x));
            for z in &words {
                assert!(indel_distance(x, z) + indel_distance(z, y) >= d);
            }
        }
    }

    // Single substitutions move a word by exactly distance 2.
    for x in all_words(4, 3) {
        for pos in 0..4 {
            for letter in 0..3 as Letter {
                if x.letters()[pos] == letter {
                    continue;
                }
                let mut ls = x.letters().to_vec();
                ls[pos] = letter;
                assert_eq!(indel_distance(&x, &word(&ls)), 2);
            }
        }
    }

    // Orbit generators: sizes and internal ball-disjointness, exhaustively
    // for every distinct-letter seed over B₅.
    for a in 0..5 as Letter {
        for b in 0..5 as Letter {
            for c in 0..5 as Letter {
                for d in 0..5 as Letter {
                    let set: BTreeSet<Letter> = [a, b, c, d].into_iter().collect();
                    if set.len() != 4 {
                        continue;
                    }
                    let x = Quad4::new(a, b, c, d).unwrap();
                    let six = gen_a(&x);
                    let eight = gen_b(&x);
                    assert_eq!(six.len(), 6);
                    assert_eq!(eight.len(), 8);
                    for code in [six, eight] {
                        let c = Code::from_words(4, 5, code).unwrap();
                        assert!(is_deletion_correcting(&c, 1));
                    }
                }
            }
        }
    }

    // Pair systems and the two-copy partition labels.
    for m in (1..=6usize).filter(|m| m % 2 == 1) {
        p_systems(m).unwrap().validate().unwrap();
    }
    for m in (2..=6usize).step_by(2) {
        p_bar_systems(m).unwrap().validate().unwrap();
    }
    for n in 1..=8usize {
        reiss_partition(n).unwrap().validate().unwrap();
    }

    // Component profiles of the constructed codes: q constants, q(q−1)
    // ordered pairs, q(q−2)/2 return words, no three-letter-ball words.
    for q in [4usize, 6, 8, 10] {
        let built = shared_optimal(q);
        let prof = profile(&built.0);
        assert_eq!(prof.count(WordClass::K1), q, "q={q}");
        assert_eq!(prof.count(WordClass::K2), q * (q - 1), "q={q}");
        assert_eq!(prof.count(WordClass::K31), 0, "q={q}");
        assert_eq!(prof.count(WordClass::K32), 0, "q={q}");
        assert_eq!(prof.count(WordClass::K42), q * (q - 2) / 2, "q={q}");
        let four_rest = built.0.len()
            - q
            - q * (q - 1)
            - q * (q - 2) / 2;
        assert_eq!(
            prof.count(WordClass::K41) + prof.count(WordClass::K43),
            four_rest,
            "q={q}"
        );
    }
}
