//! Non-backtracking walk counting by dynamic programming over directed edges.
//!
//! The state after `t` steps is, for every directed edge `u -> v`, the number
//! of non-backtracking walks of length `t` from the source whose last step is
//! `u -> v`. One step costs `O(|arcs|)`:
//!
//! ```text
//! into[v]      = sum of f[u -> v] over in-arcs of v
//! f'[v -> w]   = into[v] - f[w -> v]
//! ```
//!
//! Counts are `u128`; once a sum overflows the count and every later one is
//! reported as [`WalkCount::Saturated`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum WalkCount {
    Exact(u128),
    /// Exceeded `u128::MAX` somewhere along the computation.
    Saturated,
}

impl WalkCount {
    pub const ZERO: WalkCount = WalkCount::Exact(0);

    pub fn exact(self) -> Option<u128> {
        match self {
            WalkCount::Exact(c) => Some(c),
            WalkCount::Saturated => None,
        }
    }

    pub fn is_saturated(self) -> bool {
        matches!(self, WalkCount::Saturated)
    }

    /// Saturated counts map to `f64::INFINITY`.
    pub fn as_f64(self) -> f64 {
        match self {
            WalkCount::Exact(c) => c as f64,
            WalkCount::Saturated => f64::INFINITY,
        }
    }
}

/// Walk counts of every even length `2i`, `i = 0..=r`, from one source.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WalkProfile {
    pub source: Vertex,
    /// Target multiset, sorted; repeated vertices count once per copy.
    pub targets: Vec<Vertex>,
    pub forbidden_first: Option<(Vertex, Vertex)>,
    /// `counts[i]` is the number of walks of length `2i`.
    pub counts: Vec<WalkCount>,
}

/// `M_i(1)` for `i = 0..=r`: the largest number of non-backtracking walks of
/// length `2i` between a vertex of the restriction set and any single vertex.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaxWalkProfile {
    pub counts: Vec<WalkCount>,
    /// A pair `(x, y)` attaining `counts[i]`.
    pub argmax: Vec<(Vertex, Vertex)>,
}

/// Arc indexing reused across many DP runs on the same graph.
pub struct WalkCounter<'g> {
    g: &'g Graph,
    offsets: Vec<usize>,
    heads: Vec<Vertex>,
    reverse: Vec<usize>,
}

impl<'g> WalkCounter<'g> {
    pub fn new(g: &'g Graph) -> Self {
        let n = g.n();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut heads = Vec::with_capacity(2 * g.m());
        offsets.push(0);
        for v in 0..n {
            heads.extend_from_slice(g.neighbors(v));
            offsets.push(heads.len());
        }
        let mut reverse = vec![0; heads.len()];
        for v in 0..n {
            for a in offsets[v]..offsets[v + 1] {
                let w = heads[a];
                // Adjacency lists are sorted, so the reverse arc is found by search.
                let pos = g
                    .neighbors(w)
                    .binary_search(&v)
                    .expect("symmetric adjacency");
                reverse[a] = offsets[w] + pos;
            }
        }
        Self {
            g,
            offsets,
            heads,
            reverse,
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.g
    }

    fn forbidden_head(
        &self,
        x: Vertex,
        forbidden_first: Option<(Vertex, Vertex)>,
    ) -> Result<Option<Vertex>> {
        match forbidden_first {
            None => Ok(None),
            Some((a, b)) => {
                self.g.check_vertex(a)?;
                self.g.check_vertex(b)?;
                if !self.g.has_edge(a, b) {
                    return Err(Error::InvalidEdge(a, b));
                }
                Ok(if a == x {
                    Some(b)
                } else if b == x {
                    Some(a)
                } else {
                    None
                })
            }
        }
    }

    /// Runs the DP from `x` for `max_len` steps and calls `visit(t, ends)`
    /// for every `t = 0..=max_len`, where `ends[v]` is the number of walks of
    /// length `t` ending at `v`. Returns the first length whose counts
    /// saturated, if any; `ends` passed from that length on are meaningless.
    pub fn run<F>(
        &self,
        x: Vertex,
        max_len: usize,
        forbidden_first: Option<(Vertex, Vertex)>,
        mut visit: F,
    ) -> Result<Option<usize>>
    where
        F: FnMut(usize, &[u128]),
    {
        self.g.check_vertex(x)?;
        let banned = self.forbidden_head(x, forbidden_first)?;
        let n = self.g.n();
        let mut ends = vec![0u128; n];
        ends[x] = 1;
        visit(0, &ends);
        if max_len == 0 {
            return Ok(None);
        }
        let mut f = vec![0u128; self.heads.len()];
        for a in self.offsets[x]..self.offsets[x + 1] {
            if Some(self.heads[a]) != banned {
                f[a] = 1;
            }
        }
        let mut next = vec![0u128; self.heads.len()];
        let mut saturated_at = None;
        for t in 1..=max_len {
            if t > 1 {
                for v in 0..n {
                    let into = ends[v];
                    for a in self.offsets[v]..self.offsets[v + 1] {
                        // into >= f[rev] always holds while nothing saturated.
                        next[a] = into.wrapping_sub(f[self.reverse[a]]);
                    }
                }
                std::mem::swap(&mut f, &mut next);
            }
            let mut overflow = false;
            for v in 0..n {
                let mut sum = 0u128;
                for a in self.offsets[v]..self.offsets[v + 1] {
                    match sum.checked_add(f[self.reverse[a]]) {
                        Some(s) => sum = s,
                        None => {
                            overflow = true;
                            sum = u128::MAX;
                            break;
                        }
                    }
                }
                ends[v] = sum;
            }
            if overflow && saturated_at.is_none() {
                saturated_at = Some(t);
            }
            visit(t, &ends);
            if saturated_at.is_some() {
                // Later lengths cannot be exact; stop early but keep reporting.
                for later in t + 1..=max_len {
                    visit(later, &ends);
                }
                break;
            }
        }
        Ok(saturated_at)
    }

    fn weighted_profile(
        &self,
        x: Vertex,
        weights: &[u128],
        r: usize,
        forbidden_first: Option<(Vertex, Vertex)>,
    ) -> Result<Vec<WalkCount>> {
        let mut counts = vec![WalkCount::ZERO; r + 1];
        let sat = self.run(x, 2 * r, forbidden_first, |t, ends| {
            if t % 2 == 0 {
                counts[t / 2] = dot(ends, weights);
            }
        })?;
        if let Some(s) = sat {
            for (i, c) in counts.iter_mut().enumerate() {
                if 2 * i >= s {
                    *c = WalkCount::Saturated;
                }
            }
        }
        Ok(counts)
    }

    /// Profile towards a multiset of targets (e.g. cop positions).
    pub fn profile_to_multiset(
        &self,
        x: Vertex,
        targets: &[Vertex],
        r: usize,
        forbidden_first: Option<(Vertex, Vertex)>,
    ) -> Result<WalkProfile> {
        let mut weights = vec![0u128; self.g.n()];
        for &t in targets {
            self.g.check_vertex(t)?;
            weights[t] += 1;
        }
        let counts = self.weighted_profile(x, &weights, r, forbidden_first)?;
        let mut sorted = targets.to_vec();
        sorted.sort_unstable();
        Ok(WalkProfile {
            source: x,
            targets: sorted,
            forbidden_first,
            counts,
        })
    }
}

fn dot(ends: &[u128], weights: &[u128]) -> WalkCount {
    let mut total = 0u128;
    for (&e, &w) in ends.iter().zip(weights) {
        if w == 0 || e == 0 {
            continue;
        }
        match e.checked_mul(w).and_then(|p| total.checked_add(p)) {
            Some(t) => total = t,
            None => return WalkCount::Saturated,
        }
    }
    WalkCount::Exact(total)
}

fn check_set(g: &Graph, s: &VertexSet) -> Result<()> {
    if s.universe() != g.n() {
        return Err(Error::InvalidParameter(format!(
            "vertex set over {} vertices used with a graph on {}",
            s.universe(),
            g.n()
        )));
    }
    Ok(())
}

/// Number of non-backtracking walks `x = v0, ..., v_length` with
/// `v_length` in `targets`, optionally excluding walks whose first step runs
/// along `forbidden_first`.
pub fn count_nb_walks(
    g: &Graph,
    x: Vertex,
    targets: &VertexSet,
    length: usize,
    forbidden_first: Option<(Vertex, Vertex)>,
) -> Result<WalkCount> {
    check_set(g, targets)?;
    let weights: Vec<u128> = targets.as_bools().iter().map(|&b| b as u128).collect();
    let mut out = WalkCount::ZERO;
    let sat = WalkCounter::new(g).run(x, length, forbidden_first, |t, ends| {
        if t == length {
            out = dot(ends, &weights);
        }
    })?;
    Ok(if sat.is_some() {
        WalkCount::Saturated
    } else {
        out
    })
}

/// `counts[i] = count_nb_walks(g, x, targets, 2i, forbidden_first)` for
/// `i = 0..=r`, from a single DP pass.
pub fn walk_profile(
    g: &Graph,
    x: Vertex,
    targets: &VertexSet,
    r: usize,
    forbidden_first: Option<(Vertex, Vertex)>,
) -> Result<WalkProfile> {
    check_set(g, targets)?;
    WalkCounter::new(g).profile_to_multiset(x, &targets.to_vec(), r, forbidden_first)
}

/// Exact `M_i(1)` over sources in `restrict` and all endpoints. Walk reversal
/// is a bijection on non-backtracking walks, so counting from `x` is the same
/// as counting towards it.
pub fn m_profile_singleton(g: &Graph, restrict: &VertexSet, r: usize) -> Result<MaxWalkProfile> {
    check_set(g, restrict)?;
    if restrict.is_empty() {
        return Err(Error::InvalidParameter("empty restriction set".into()));
    }
    let counter = WalkCounter::new(g);
    let first = restrict.iter().next().expect("nonempty");
    let mut counts = vec![WalkCount::ZERO; r + 1];
    let mut argmax = vec![(first, first); r + 1];
    for x in restrict.iter() {
        let sat = counter.run(x, 2 * r, None, |t, ends| {
            if t % 2 == 1 {
                return;
            }
            let i = t / 2;
            let (y, &best) = ends
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
                .expect("graph has vertices");
            if WalkCount::Exact(best) > counts[i] {
                counts[i] = WalkCount::Exact(best);
                argmax[i] = (x, y);
            }
        })?;
        if let Some(s) = sat {
            for (i, c) in counts.iter_mut().enumerate() {
                if 2 * i >= s && !c.is_saturated() {
                    *c = WalkCount::Saturated;
                    argmax[i] = (x, x);
                }
            }
        }
    }
    Ok(MaxWalkProfile { counts, argmax })
}
