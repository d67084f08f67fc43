//! Exact cover by dancing links.
//!
//! Column choice is deterministic: the uncovered item with fewest remaining
//! candidates, lowest index on ties. Candidates are tried in input order, so a
//! fixed instance always yields the same solution.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Select candidates so that every item in `[0, items)` is covered exactly once.
#[derive(Clone, Debug, Default)]
pub struct ExactCoverInstance {
    pub items: usize,
    pub candidates: Vec<Vec<usize>>,
}

impl ExactCoverInstance {
    pub fn new(items: usize) -> Self {
        ExactCoverInstance { items, candidates: Vec::new() }
    }

    pub fn push(&mut self, candidate: Vec<usize>) -> usize {
        debug_assert!(candidate.iter().all(|&c| c < self.items));
        self.candidates.push(candidate);
        self.candidates.len() - 1
    }

    /// Indices of the chosen candidates, ascending.
    ///
    /// Fails with [`Error::SearchTimeout`] once `budget` elapses and with
    /// [`Error::Infeasible`] when the search space is exhausted.
    pub fn solve(&self, budget: Duration) -> Result<Vec<usize>> {
        let mut links = Links::build(self);
        let deadline = Instant::now() + budget;
        let mut search = Search { links: &mut links, deadline, ticks: 0, partial: Vec::new() };
        match search.run() {
            Outcome::Found => {
                let mut rows: Vec<usize> = search.partial.iter().map(|&node| search.links.row[node]).collect();
                rows.sort_unstable();
                Ok(rows)
            }
            Outcome::Exhausted => Err(Error::Infeasible(format!(
                "no exact cover of {} items by {} candidates",
                self.items,
                self.candidates.len()
            ))),
            Outcome::TimedOut => Err(Error::SearchTimeout { seconds: budget.as_secs_f64() }),
        }
    }
}

// Node 0 is the root, nodes 1..=items are column headers, the rest are
// candidate entries.
struct Links {
    left: Vec<usize>,
    right: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    col: Vec<usize>,
    row: Vec<usize>,
    size: Vec<usize>,
}

impl Links {
    fn build(inst: &ExactCoverInstance) -> Self {
        let heads = inst.items + 1;
        let total = heads + inst.candidates.iter().map(Vec::len).sum::<usize>();
        let mut l = Links {
            left: Vec::with_capacity(total),
            right: Vec::with_capacity(total),
            up: Vec::with_capacity(total),
            down: Vec::with_capacity(total),
            col: Vec::with_capacity(total),
            row: Vec::with_capacity(total),
            size: vec![0; heads],
        };
        for h in 0..heads {
            l.left.push(if h == 0 { inst.items } else { h - 1 });
            l.right.push(if h == inst.items { 0 } else { h + 1 });
            l.up.push(h);
            l.down.push(h);
            l.col.push(h);
            l.row.push(usize::MAX);
        }
        for (r, cand) in inst.candidates.iter().enumerate() {
            let first = l.left.len();
            for (idx, &item) in cand.iter().enumerate() {
                let node = l.left.len();
                let c = item + 1;
                let last = l.up[c];
                l.up.push(last);
                l.down.push(c);
                l.down[last] = node;
                l.up[c] = node;
                l.col.push(c);
                l.row.push(r);
                l.size[c] += 1;
                l.left.push(if idx == 0 { node } else { node - 1 });
                l.right.push(first);
                if idx > 0 {
                    l.right[node - 1] = node;
                    l.left[first] = node;
                }
            }
        }
        l
    }

    fn cover(&mut self, c: usize) {
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = r;
        self.left[r] = l;
        let mut i = self.down[c];
        while i != c {
            let mut j = self.right[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = d;
                self.up[d] = u;
                self.size[self.col[j]] -= 1;
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
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = j;
                self.up[d] = j;
                self.size[self.col[j]] += 1;
                j = self.left[j];
            }
            i = self.up[i];
        }
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = c;
        self.left[r] = c;
    }
}

enum Outcome {
    Found,
    Exhausted,
    TimedOut,
}

struct Search<'a> {
    links: &'a mut Links,
    deadline: Instant,
    ticks: u64,
    partial: Vec<usize>,
}

impl Search<'_> {
    fn run(&mut self) -> Outcome {
        let l = &*self.links;
        if l.right[0] == 0 {
            return Outcome::Found;
        }
        self.ticks += 1;
        if self.ticks.is_multiple_of(4096) && Instant::now() >= self.deadline {
            return Outcome::TimedOut;
        }
        let mut best = l.right[0];
        let mut c = l.right[best];
        while c != 0 {
            if l.size[c] < l.size[best] {
                best = c;
            }
            c = l.right[c];
        }
        if l.size[best] == 0 {
            return Outcome::Exhausted;
        }
        self.links.cover(best);
        let mut r = self.links.down[best];
        while r != best {
            self.partial.push(r);
            let mut j = self.links.right[r];
            while j != r {
                self.links.cover(self.links.col[j]);
                j = self.links.right[j];
            }
            match self.run() {
                Outcome::Exhausted => {}
                done => return done,
            }
            let mut j = self.links.left[r];
            while j != r {
                self.links.uncover(self.links.col[j]);
                j = self.links.left[j];
            }
            self.partial.pop();
            r = self.links.down[r];
        }
        self.links.uncover(best);
        Outcome::Exhausted
    }
}
