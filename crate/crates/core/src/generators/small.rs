//! Every graph on a few vertices, one per isomorphism class.
//!
//! Classes on `n` vertices are grown from those on `n - 1` by adding a vertex
//! with every possible neighbourhood, then deduplicated by a canonical code:
//! colour refinement orders the vertices into cells, and the code is the
//! smallest upper-triangle adjacency word over orderings within the cells.

use std::collections::BTreeSet;

use crate::error::{invalid, Result};
use crate::graph::Graph;

/// Largest order accepted by [`graph_classes`].
pub const MAX_CLASS_ORDER: usize = 9;

/// One graph per isomorphism class on exactly `n` vertices, in canonical
/// code order. Counts for `n = 1..=8` are 1, 2, 4, 11, 34, 156, 1044, 12346.
pub fn graph_classes(n: usize) -> Result<Vec<Graph>> {
    if n > MAX_CLASS_ORDER {
        return invalid(format!(
            "graph classes are enumerated up to {MAX_CLASS_ORDER} vertices"
        ));
    }
    let mut codes: BTreeSet<u64> = BTreeSet::from([0]);
    for k in 1..=n {
        let mut next = BTreeSet::new();
        for &code in &codes {
            let rows = decode(code, k - 1);
            for mask in 0u16..1 << (k - 1) {
                let mut grown = rows.clone();
                for (v, row) in grown.iter_mut().enumerate() {
                    if mask >> v & 1 == 1 {
                        *row |= 1 << (k - 1);
                    }
                }
                grown.push(mask);
                next.insert(canonical_code(&grown));
            }
        }
        codes = next;
    }
    codes.into_iter().map(|c| to_graph(&decode(c, n))).collect()
}

/// Connected classes on `1..=max_n` vertices, smallest first.
pub fn connected_graph_classes(max_n: usize) -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.extend(graph_classes(n)?.into_iter().filter(Graph::is_connected));
    }
    Ok(out)
}

fn to_graph(rows: &[u16]) -> Result<Graph> {
    let n = rows.len();
    let edges = (0..n).flat_map(|u| {
        (u + 1..n)
            .filter(move |&v| rows[u] >> v & 1 == 1)
            .map(move |v| (u, v))
    });
    Graph::from_edges(n, edges)
}

/// Bit order: columns `b = 1..n`, within a column rows `a = 0..b`, first pair
/// most significant.
fn decode(code: u64, n: usize) -> Vec<u16> {
    let mut rows = vec![0u16; n];
    let total = n * n.saturating_sub(1) / 2;
    let mut k = 0;
    for b in 1..n {
        for a in 0..b {
            if code >> (total - 1 - k) & 1 == 1 {
                rows[a] |= 1 << b;
                rows[b] |= 1 << a;
            }
            k += 1;
        }
    }
    rows
}

fn refine(rows: &[u16]) -> Vec<usize> {
    let n = rows.len();
    let mut colors: Vec<usize> = rows.iter().map(|r| r.count_ones() as usize).collect();
    let mut classes = usize::MAX;
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut around: Vec<usize> = (0..n)
                    .filter(|&w| rows[v] >> w & 1 == 1)
                    .map(|w| colors[w])
                    .collect();
                around.sort_unstable();
                (colors[v], around)
            })
            .collect();
        let mut distinct = sigs.clone();
        distinct.sort();
        distinct.dedup();
        colors = sigs
            .iter()
            .map(|s| distinct.binary_search(s).expect("present"))
            .collect();
        if distinct.len() == classes {
            return colors;
        }
        classes = distinct.len();
    }
}

fn canonical_code(rows: &[u16]) -> u64 {
    let n = rows.len();
    if n <= 1 {
        return 0;
    }
    let colors = refine(rows);
    let mut slots = colors.clone();
    slots.sort_unstable();
    let mut search = Canon {
        rows,
        colors: &colors,
        slots: &slots,
        order: Vec::with_capacity(n),
        used: 0,
        total: n * (n - 1) / 2,
        best: u64::MAX,
    };
    search.extend(0, 0);
    search.best
}

struct Canon<'a> {
    rows: &'a [u16],
    colors: &'a [usize],
    slots: &'a [usize],
    order: Vec<usize>,
    used: u16,
    total: usize,
    best: u64,
}

impl Canon<'_> {
    fn extend(&mut self, prefix: u64, bits: usize) {
        let p = self.order.len();
        if p == self.rows.len() {
            self.best = self.best.min(prefix);
            return;
        }
        for v in 0..self.rows.len() {
            if self.used >> v & 1 == 1 || self.colors[v] != self.slots[p] {
                continue;
            }
            let mut code = prefix;
            for &a in &self.order {
                code = code << 1 | (self.rows[a] >> v & 1) as u64;
            }
            let now = bits + p;
            // Prune orderings whose prefix already exceeds the best code.
            if self.best != u64::MAX && code > self.best >> (self.total - now) {
                continue;
            }
            self.order.push(v);
            self.used |= 1 << v;
            self.extend(code, now);
            self.used &= !(1 << v);
            self.order.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_counts() {
        let counts: Vec<usize> = (1..=7).map(|n| graph_classes(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 11, 34, 156, 1044]);
        let connected: Vec<usize> = (1..=7)
            .map(|n| {
                graph_classes(n)
                    .unwrap()
                    .iter()
                    .filter(|g| g.is_connected())
                    .count()
            })
            .collect();
        assert_eq!(connected, vec![1, 1, 2, 6, 21, 112, 853]);
    }

    #[test]
    fn relabelled_graphs_share_a_code() {
        let rows_a = [0b0110u16, 0b0001, 0b1001, 0b0100];
        let rows_b = [0b0010u16, 0b1001, 0b1000, 0b0110];
        assert_eq!(canonical_code(&rows_a), canonical_code(&rows_b));
        assert_eq!(
            decode(canonical_code(&rows_a), 4)
                .iter()
                .map(|r| r.count_ones())
                .sum::<u32>(),
            6
        );
    }
}
