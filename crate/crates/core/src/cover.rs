//! Deterministic exact-cover solver (dancing links).
//!
//! Columns are constraints, rows are candidate subsets; `solve_first`
//! explores rows in insertion order under a fewest-candidates-first column
//! heuristic (ties broken by smallest column index), so the first solution
//! found is a pure function of the instance, independent of budget size.

use std::time::{Duration, Instant};

/// A node and/or wall-clock limit for a search.
#[derive(Clone, Debug, Default)]
pub struct Budget {
    max_nodes: Option<u64>,
    deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Budget {
        Budget::default()
    }

    pub fn with_nodes(max_nodes: u64) -> Budget {
        Budget {
            max_nodes: Some(max_nodes),
            deadline: None,
        }
    }

    pub fn with_duration(d: Duration) -> Budget {
        Budget {
            max_nodes: None,
            deadline: Some(Instant::now() + d),
        }
    }

    pub fn and_nodes(mut self, max_nodes: u64) -> Budget {
        self.max_nodes = Some(max_nodes);
        self
    }

    /// True once `nodes` exceeds the node cap or the deadline has passed.
    /// The clock is only consulted every 256 nodes.
    pub fn exhausted(&self, nodes: u64) -> bool {
        if let Some(cap) = self.max_nodes {
            if nodes > cap {
                return true;
            }
        }
        if let Some(deadline) = self.deadline {
            if nodes % 256 == 0 && Instant::now() > deadline {
                return true;
            }
        }
        false
    }
}

/// Result of an exact-cover search.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CoverOutcome {
    /// Row ids (in selection order) covering every column exactly once.
    Solution(Vec<usize>),
    /// The instance has no solution.
    Infeasible,
    /// The budget ran out before the search finished.
    OutOfBudget,
}

/// Sparse 0/1 matrix in doubly-linked torus form.
pub struct ExactCover {
    left: Vec<usize>,
    right: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    col_of: Vec<usize>,
    row_of: Vec<usize>,
    size: Vec<usize>,
    num_cols: usize,
    num_rows: usize,
    nodes_visited: u64,
}

impl ExactCover {
    /// An instance with columns 0..num_cols and no rows yet. Index
    /// `num_cols` is the list root.
    pub fn new(num_cols: usize) -> ExactCover {
        let root = num_cols;
        let count = num_cols + 1;
        let mut ec = ExactCover {
            left: vec![0; count],
            right: vec![0; count],
            up: (0..count).collect(),
            down: (0..count).collect(),
            col_of: (0..count).collect(),
            row_of: vec![usize::MAX; count],
            size: vec![0; num_cols],
            num_cols,
            num_rows: 0,
            nodes_visited: 0,
        };
        for i in 0..count {
            ec.left[i] = if i == 0 { root } else { i - 1 };
            ec.right[i] = if i == root { 0 } else { i + 1 };
        }
        ec
    }

    pub fn num_rows(&self) -> usize {
        self.num_rows
    }

    /// Search nodes visited by the last `solve_first` call.
    pub fn nodes_visited(&self) -> u64 {
        self.nodes_visited
    }

    /// Adds a row covering the given strictly-increasing column indices and
    /// returns its row id (sequential from 0).
    pub fn add_row(&mut self, cols: &[usize]) -> usize {
        assert!(!cols.is_empty(), "a row must cover at least one column");
        assert!(
            cols.windows(2).all(|w| w[0] < w[1]),
            "row columns must be strictly increasing"
        );
        assert!(*cols.last().unwrap() < self.num_cols, "column out of range");
        let row_id = self.num_rows;
        self.num_rows += 1;
        let first = self.left.len();
        for (k, &c) in cols.iter().enumerate() {
            let node = self.left.len();
            // Horizontal circular links within the row.
            let (l, r) = if cols.len() == 1 {
                (node, node)
            } else if k == 0 {
                (first + cols.len() - 1, node + 1)
            } else if k == cols.len() - 1 {
                (node - 1, first)
            } else {
                (node - 1, node + 1)
            };
            self.left.push(l);
            self.right.push(r);
            // Vertical links: append just above the column header.
            let header = c;
            let above = self.up[header];
            self.up.push(above);
            self.down.push(header);
            self.down[above] = node;
            self.up[header] = node;
            self.col_of.push(c);
            self.row_of.push(row_id);
            self.size[c] += 1;
        }
        row_id
    }

    fn cover(&mut self, c: usize) {
        self.right[self.left[c]] = self.right[c];
        self.left[self.right[c]] = self.left[c];
        let mut i = self.down[c];
        while i != c {
            let mut j = self.right[i];
            while j != i {
                self.down[self.up[j]] = self.down[j];
                self.up[self.down[j]] = self.up[j];
                self.size[self.col_of[j]] -= 1;
                j = self.right[j];
            }
            i = self.down[i];
        }
    }

    fn uncover(&mut self, c: usize) {
        let mut i = self.up[c];
        while i != c {
            let mut j = self.left[i];
            while j != i {
                self.size[self.col_of[j]] += 1;
                self.down[self.up[j]] = j;
                self.up[self.down[j]] = j;
                j = self.left[j];
            }
            i = self.up[i];
        }
        self.right[self.left[c]] = c;
        self.left[self.right[c]] = c;
    }

    /// Finds the first solution under the deterministic exploration order,
    /// restoring the matrix before returning.
    pub fn solve_first(&mut self, budget: &Budget) -> CoverOutcome {
        self.nodes_visited = 0;
        let mut solution = Vec::new();
        match self.search(&mut solution, budget) {
            SearchResult::Found => CoverOutcome::Solution(solution),
            SearchResult::Exhausted => CoverOutcome::Infeasible,
            SearchResult::Budget => CoverOutcome::OutOfBudget,
        }
    }

    fn search(&mut self, solution: &mut Vec<usize>, budget: &Budget) -> SearchResult {
        let root = self.num_cols;
        if self.right[root] == root {
            return SearchResult::Found;
        }
        self.nodes_visited += 1;
        if budget.exhausted(self.nodes_visited) {
            return SearchResult::Budget;
        }
        // Fewest-candidates column; ties resolved by list order, which is
        // ascending column index.
        let mut c = usize::MAX;
        let mut best = usize::MAX;
        let mut j = self.right[root];
        while j != root {
            if self.size[j] < best {
                best = self.size[j];
                c = j;
            }
            j = self.right[j];
        }
        if best == 0 {
            return SearchResult::Exhausted;
        }
        self.cover(c);
        let mut outcome = SearchResult::Exhausted;
        let mut r = self.down[c];
        while r != c {
            solution.push(self.row_of[r]);
            let mut j = self.right[r];
            while j != r {
                self.cover(self.col_of[j]);
                j = self.right[j];
            }
            let sub = self.search(solution, budget);
            let mut j = self.left[r];
            while j != r {
                self.uncover(self.col_of[j]);
                j = self.left[j];
            }
            match sub {
                SearchResult::Found => {
                    outcome = SearchResult::Found;
                    break;
                }
                SearchResult::Budget => {
                    solution.pop();
                    outcome = SearchResult::Budget;
                    break;
                }
                SearchResult::Exhausted => {
                    solution.pop();
                }
            }
            r = self.down[r];
        }
        self.uncover(c);
        outcome
    }
}

enum SearchResult {
    Found,
    Exhausted,
    Budget,
}
