//! Shared helpers for the benchmark targets.

use delcode::{Code, Word};

/// A mid-sized worst-case word pair: maximal length-4 distance.
pub fn distant_pair() -> (Word, Word) {
    (Word::new(vec![0, 1, 2, 3]), Word::new(vec![4, 5, 6, 7]))
}

/// The maximum-size code on eight letters (160 words), a representative
/// validation workload.
pub fn code_q8() -> Code {
    delcode::optimal_code(8).expect("q=8 is supported").0
}
