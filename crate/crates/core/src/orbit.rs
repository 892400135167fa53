//! The two orbit generators that expand an ordered quadruple of distinct
//! letters into a 6-word or 8-word single-deletion-correcting block.

use crate::error::{Error, Result};
use crate::word::{Letter, Word};

/// An ordered quadruple (a₁,a₂,a₃,a₄) of pairwise-distinct letters.
///
/// Both generators are position-sensitive, so callers must order the
/// elements by the relevant point order before construction.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Quad4 {
    a: [Letter; 4],
}

impl Quad4 {
    pub fn new(a1: Letter, a2: Letter, a3: Letter, a4: Letter) -> Result<Quad4> {
        let a = [a1, a2, a3, a4];
        for i in 0..4 {
            for j in i + 1..4 {
                if a[i] == a[j] {
                    return Err(Error::InvalidArgument(format!(
                        "quadruple letters must be pairwise distinct, got {a:?}"
                    )));
                }
            }
        }
        Ok(Quad4 { a })
    }

    pub fn from_array(a: [Letter; 4]) -> Result<Quad4> {
        Quad4::new(a[0], a[1], a[2], a[3])
    }

    pub fn letters(&self) -> [Letter; 4] {
        self.a
    }
}

/// The 6-word block of `x` = (a₁,a₂,a₃,a₄):
/// {(a₁,a₂,a₃,a₄), (a₁,a₄,a₃,a₂), (a₂,a₄,a₁,a₃), (a₃,a₄,a₁,a₂), (a₃,a₂,a₁,a₄), (a₄,a₂,a₃,a₁)}.
///
/// All six words use all four letters once (class K4.1).
pub fn gen_a(x: &Quad4) -> Vec<Word> {
    let [a1, a2, a3, a4] = x.a;
    vec![
        Word::from([a1, a2, a3, a4]),
        Word::from([a1, a4, a3, a2]),
        Word::from([a2, a4, a1, a3]),
        Word::from([a3, a4, a1, a2]),
        Word::from([a3, a2, a1, a4]),
        Word::from([a4, a2, a3, a1]),
    ]
}

/// The 8-word block of `x`: `gen_a(x)` minus {(a₁,a₂,a₃,a₄), (a₃,a₄,a₁,a₂)}
/// plus the four wrap-around words {(a₁,a₃,a₄,a₁), (a₂,a₃,a₄,a₂),
/// (a₃,a₁,a₂,a₃), (a₄,a₁,a₂,a₄)} (class K4.2).
pub fn gen_b(x: &Quad4) -> Vec<Word> {
    let [a1, a2, a3, a4] = x.a;
    vec![
        Word::from([a1, a4, a3, a2]),
        Word::from([a2, a4, a1, a3]),
        Word::from([a3, a2, a1, a4]),
        Word::from([a4, a2, a3, a1]),
        Word::from([a1, a3, a4, a1]),
        Word::from([a2, a3, a4, a2]),
        Word::from([a3, a1, a2, a3]),
        Word::from([a4, a1, a2, a4]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{classify, is_deletion_correcting, Code, WordClass};
    use std::collections::BTreeSet;

    fn q0123() -> Quad4 {
        Quad4::new(0, 1, 2, 3).unwrap()
    }

    fn wordset(ws: &[[Letter; 4]]) -> BTreeSet<Word> {
        ws.iter().map(|&w| Word::from(w)).collect()
    }

    #[test]
    fn rejects_repeated_letters() {
        assert!(Quad4::new(0, 1, 1, 3).is_err());
        assert!(Quad4::new(2, 1, 0, 2).is_err());
    }

    #[test]
    fn gen_a_instantiates_to_known_words() {
        let got: BTreeSet<Word> = gen_a(&q0123()).into_iter().collect();
        let expect = wordset(&[
            [0, 1, 2, 3],
            [0, 3, 2, 1],
            [1, 3, 0, 2],
            [2, 3, 0, 1],
            [2, 1, 0, 3],
            [3, 1, 2, 0],
        ]);
        assert_eq!(got, expect);
    }

    #[test]
    fn gen_b_instantiates_to_known_words() {
        let got: BTreeSet<Word> = gen_b(&q0123()).into_iter().collect();
        let expect = wordset(&[
            [0, 3, 2, 1],
            [1, 3, 0, 2],
            [2, 1, 0, 3],
            [3, 1, 2, 0],
            [0, 2, 3, 0],
            [1, 2, 3, 1],
            [2, 0, 1, 2],
            [3, 0, 1, 3],
        ]);
        assert_eq!(got, expect);
    }

    #[test]
    fn orbit_sizes_are_fixed() {
        let x = Quad4::new(9, 4, 7, 2).unwrap();
        assert_eq!(gen_a(&x).len(), 6);
        assert_eq!(gen_b(&x).len(), 8);
        assert_eq!(gen_a(&x).into_iter().collect::<BTreeSet<_>>().len(), 6);
        assert_eq!(gen_b(&x).into_iter().collect::<BTreeSet<_>>().len(), 8);
    }

    #[test]
    fn both_orbits_correct_single_deletions() {
        let x = q0123();
        let a = Code::from_words(4, 4, gen_a(&x)).unwrap();
        let b = Code::from_words(4, 4, gen_b(&x)).unwrap();
        assert!(is_deletion_correcting(&a, 1));
        assert!(is_deletion_correcting(&b, 1));
    }

    #[test]
    fn gen_b_class_census() {
        let words = gen_b(&Quad4::new(5, 2, 8, 1).unwrap());
        let k41 = words
            .iter()
            .filter(|w| classify(w).unwrap() == WordClass::K41)
            .count();
        let k42 = words
            .iter()
            .filter(|w| classify(w).unwrap() == WordClass::K42)
            .count();
        assert_eq!((k41, k42), (4, 4));
    }
}
