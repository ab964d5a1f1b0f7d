//! Retracts of subdivided hypercubes: reduced retracts, unions of quarters,
//! the two small-configuration probabilities, the edge-boundary bound and a
//! search for the largest proper retract.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use super::{find_retraction_onto, is_retraction, VertexMap, DEFAULT_NODE_BUDGET};
use crate::error::{invalid, Error, Result};
use crate::generators::SubdividedHypercube;
use crate::graph::{Vertex, VertexSet};

/// Largest cube dimension accepted by the quarter and boundary checks.
pub const MAX_CHECK_DIM: usize = 20;

/// Largest cube dimension searched by [`find_largest_proper_retract`].
pub const MAX_SCAN_DIM: usize = 6;

/// Largest cube dimension searched exhaustively.
pub const EXHAUSTIVE_SCAN_DIM: usize = 4;

/// Codimension-2 subcube `{x : x_i = a, x_j = b}` of `{0,1}^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Quarter {
    pub i: usize,
    pub j: usize,
    pub a: bool,
    pub b: bool,
}

impl Quarter {
    pub fn contains(&self, x: usize) -> bool {
        (x >> self.i & 1 == 1) == self.a && (x >> self.j & 1 == 1) == self.b
    }

    /// All `4 * C(d, 2)` quarters of `{0,1}^d`.
    pub fn all(d: usize) -> Vec<Quarter> {
        let mut out = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                for (a, b) in [(false, false), (false, true), (true, false), (true, true)] {
                    out.push(Quarter { i, j, a, b });
                }
            }
        }
        out
    }

    fn mask(&self, d: usize) -> u64 {
        (0..1usize << d)
            .filter(|&x| self.contains(x))
            .fold(0, |m, x| m | 1 << x)
    }
}

/// A set of quarters and the union they cover.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuarterSet {
    pub d: usize,
    pub quarters: Vec<Quarter>,
}

impl QuarterSet {
    pub fn new(d: usize, mut quarters: Vec<Quarter>) -> Result<Self> {
        check_dim(d)?;
        if let Some(q) = quarters.iter().find(|q| q.i >= q.j || q.j >= d) {
            return invalid(format!(
                "quarter selector ({}, {}) invalid for d = {d}",
                q.i, q.j
            ));
        }
        quarters.sort();
        quarters.dedup();
        Ok(Self { d, quarters })
    }

    /// Every quarter lying entirely inside `s`.
    pub fn inside(d: usize, s: &VertexSet) -> Result<Self> {
        check_cube_set(d, s)?;
        let quarters = Quarter::all(d)
            .into_iter()
            .filter(|q| (0..1usize << d).all(|x| !q.contains(x) || s.contains(x)))
            .collect();
        Ok(Self { d, quarters })
    }

    pub fn union(&self) -> VertexSet {
        let mut set = VertexSet::empty(1 << self.d);
        for x in 0..1usize << self.d {
            if self.quarters.iter().any(|q| q.contains(x)) {
                set.insert(x);
            }
        }
        set
    }
}

fn check_dim(d: usize) -> Result<()> {
    if !(2..=MAX_CHECK_DIM).contains(&d) {
        return invalid(format!("cube dimension {d} outside 2..={MAX_CHECK_DIM}"));
    }
    Ok(())
}

fn check_cube_set(d: usize, s: &VertexSet) -> Result<()> {
    check_dim(d)?;
    if s.universe() != 1 << d {
        return invalid(format!(
            "set over {} vertices, Q_{d} has {}",
            s.universe(),
            1usize << d
        ));
    }
    Ok(())
}

/// Whether every vertex of `s` lies in a quarter contained in `s`.
pub fn union_of_quarters_check(d: usize, s: &VertexSet) -> Result<bool> {
    Ok(&QuarterSet::inside(d, s)?.union() == s)
}

fn quarter_masks(d: usize) -> Vec<u64> {
    Quarter::all(d).iter().map(|q| q.mask(d)).collect()
}

fn is_union_of_quarters_mask(masks: &[u64], set: u64) -> bool {
    masks
        .iter()
        .filter(|&&q| q & !set == 0)
        .fold(0, |acc, &q| acc | q)
        == set
}

/// Number of subsets of `{0,1}^d` that are unions of quarters, `d` in
/// `2..=4`, by checking every subset.
pub fn count_unions_of_quarters(d: usize) -> Result<u64> {
    if !(2..=4).contains(&d) {
        return invalid("direct counting needs 2 <= d <= 4");
    }
    let masks = quarter_masks(d);
    let subsets = 1u64 << (1 << d);
    Ok((0..subsets)
        .filter(|&s| is_union_of_quarters_mask(&masks, s))
        .count() as u64)
}

fn check_lengths(s: usize, l: usize) -> Result<()> {
    if s >= l {
        return invalid(format!("short length {s} must be below long length {l}"));
    }
    Ok(())
}

fn path_length(long: bool, s: usize, l: usize) -> usize {
    if long {
        l + 1
    } else {
        s + 1
    }
}

/// Probability, over short/long labels of the 4-cycle `x1 x2 x3 x4`, that
/// `|x2 x3| + |x3 x4| <= |x2 x1| + |x1 x4|` when edges have `s + 1` or
/// `l + 1` graph edges.
pub fn config1_probability_with(s: usize, l: usize) -> Result<Ratio<u64>> {
    check_lengths(s, l)?;
    let hits = (0u32..16)
        .filter(|&bits| {
            let len = |e: u32| path_length(bits >> e & 1 == 1, s, l);
            // edges: 0 = x1x2, 1 = x2x3, 2 = x3x4, 3 = x4x1
            len(1) + len(2) <= len(0) + len(3)
        })
        .count() as u64;
    Ok(Ratio::new(hits, 16))
}

/// Probability, over short/long labels of the two opposite 4-cycles `x` and
/// `y` of a 3-cube, that the `y` cycle is at least as long as the `x` cycle.
pub fn config2_probability_with(s: usize, l: usize) -> Result<Ratio<u64>> {
    check_lengths(s, l)?;
    let hits = (0u32..256)
        .filter(|&bits| {
            let cycle = |first: u32| -> usize {
                (first..first + 4)
                    .map(|e| path_length(bits >> e & 1 == 1, s, l))
                    .sum()
            };
            cycle(4) >= cycle(0)
        })
        .count() as u64;
    Ok(Ratio::new(hits, 256))
}

/// Both events compare label counts only, so any `s < l` gives the same
/// value; these use `s = 1`, `l = 10`.
pub fn config1_probability() -> Ratio<u64> {
    config1_probability_with(1, 10).expect("valid lengths")
}

pub fn config2_probability() -> Ratio<u64> {
    config2_probability_with(1, 10).expect("valid lengths")
}

/// Both probabilities as `"a/b c/d"`.
pub fn config_probabilities_text() -> String {
    format!("{} {}", config1_probability(), config2_probability())
}

/// Edges of `Q_d` with exactly one end in `s`.
pub fn edge_boundary(d: usize, s: &VertexSet) -> usize {
    s.iter()
        .map(|x| (0..d).filter(|&c| !s.contains(x ^ (1 << c))).count())
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HarperCheck {
    pub d: usize,
    pub size: usize,
    pub boundary: usize,
    /// `min(|s|, |Q \ s|, |Q| / 4)`.
    pub bound: usize,
    pub pass: bool,
}

/// Checks `|boundary(s)| >= min(|s|, |Q \ s|, |Q| / 4)` in `Q_d`.
///
/// The complement term is needed: without it a set missing one vertex has
/// boundary `d` against a bound of `2^d / 4`, which fails from `d = 5` on.
pub fn harper_boundary_check(d: usize, s: &VertexSet) -> Result<HarperCheck> {
    check_cube_set(d, s)?;
    let boundary = edge_boundary(d, s);
    let bound = s.len().min((1 << d) - s.len()).min((1 << d) / 4);
    Ok(HarperCheck {
        d,
        size: s.len(),
        boundary,
        bound,
        pass: boundary >= bound,
    })
}

/// Cube vertices of `set` plus every path whose two ends are both kept.
fn reduced_from_cube_part(sq: &SubdividedHypercube, cube: &VertexSet) -> VertexSet {
    let mut out = VertexSet::empty(sq.graph().n());
    for v in cube.iter() {
        out.insert(sq.cube_vertex(v));
    }
    for (e, edge) in sq.cube_edges.iter().enumerate() {
        if cube.contains(edge.lo) && cube.contains(edge.hi) {
            for &v in sq.path(e) {
                out.insert(v);
            }
        }
    }
    out
}

/// Snaps a retract image to its reduced form: keep the cube vertices of
/// `r`, and the paths whose two ends are both kept. Interior vertices of
/// other paths go to their kept end. Errors if `r` is not a retract image.
pub fn reduce_retract(sq: &SubdividedHypercube, r: &VertexSet) -> Result<VertexSet> {
    if r.universe() != sq.graph().n() {
        return invalid("retract set does not match the graph");
    }
    if r.is_empty() || find_retraction_onto(sq.graph(), r, DEFAULT_NODE_BUDGET)?.is_none() {
        return invalid("set is not a retract image");
    }
    let cube = VertexSet::from_vertices(
        sq.cube_vertex_count(),
        (0..sq.cube_vertex_count()).filter(|&v| r.contains(sq.cube_vertex(v))),
    )?;
    Ok(reduced_from_cube_part(sq, &cube))
}

/// Outcome of [`find_largest_proper_retract`].
#[derive(Clone, Debug, Serialize)]
pub struct RetractScan {
    pub d: usize,
    pub n: usize,
    /// Image of the largest verified proper retraction.
    pub image: Vec<Vertex>,
    pub size: usize,
    /// Cube vertices of the image.
    pub cube_part: Vec<usize>,
    #[serde(skip)]
    pub map: VertexMap,
    pub exhaustive: bool,
    pub candidates: usize,
    pub checked: usize,
    pub refuted: usize,
    /// Candidates at least as large as the answer whose search ran out of
    /// budget.
    pub undecided_larger: usize,
}

fn candidate_masks(d: usize) -> (Vec<u64>, bool) {
    let cube_n = 1usize << d;
    let full: u64 = if cube_n == 64 {
        u64::MAX
    } else {
        (1 << cube_n) - 1
    };
    let masks = quarter_masks(d);
    if d <= EXHAUSTIVE_SCAN_DIM {
        let out = (1..full)
            .filter(|&m| is_union_of_quarters_mask(&masks, full & !m))
            .collect();
        return (out, true);
    }
    let mut out: Vec<u64> = Vec::new();
    for (a, &qa) in masks.iter().enumerate() {
        out.push(full & !qa);
        for &qb in &masks[a + 1..] {
            out.push(full & !(qa | qb));
        }
    }
    for v in 0..cube_n {
        out.push(1 << v);
        for c in 0..d {
            out.push(1 << v | 1 << (v ^ 1 << c));
        }
    }
    out.retain(|&m| m != 0 && m != full);
    out.sort_unstable();
    out.dedup();
    (out, false)
}

/// Largest proper retract among reduced candidates whose cube complement is
/// a union of quarters, verified one by one with [`find_retraction_onto`].
///
/// Every subset is a candidate for `d <= 4`. For `d = 5, 6` the candidates
/// are the complements of one or two quarters, single cube vertices and
/// single paths. Candidates of equal size are verified in parallel, largest
/// size first. `node_budget` applies to each candidate separately.
pub fn find_largest_proper_retract(
    sq: &SubdividedHypercube,
    node_budget: u64,
) -> Result<RetractScan> {
    let d = sq.d;
    if !(2..=MAX_SCAN_DIM).contains(&d) {
        return invalid(format!("retract scan needs 2 <= d <= {MAX_SCAN_DIM}"));
    }
    let g = sq.graph();
    let cube_n = sq.cube_vertex_count();
    let (masks, exhaustive) = candidate_masks(d);
    let mut candidates: Vec<(u64, VertexSet)> = masks
        .into_iter()
        .map(|m| {
            let cube = VertexSet::from_vertices(cube_n, (0..cube_n).filter(|&v| m >> v & 1 == 1))
                .expect("cube vertex in range");
            (m, reduced_from_cube_part(sq, &cube))
        })
        .filter(|(_, set)| set.len() < g.n() && g.induced_subgraph(set).0.is_connected())
        .collect();
    candidates.sort_by_key(|(m, set)| (std::cmp::Reverse(set.len()), *m));
    let total = candidates.len();
    let (mut checked, mut refuted, mut undecided) = (0, 0, 0);
    let mut start = 0;
    while start < total {
        let size = candidates[start].1.len();
        let end = start
            + candidates[start..]
                .iter()
                .take_while(|(_, s)| s.len() == size)
                .count();
        let results: Vec<Result<Option<VertexMap>>> = candidates[start..end]
            .par_iter()
            .map(|(_, set)| find_retraction_onto(g, set, node_budget))
            .collect();
        checked += end - start;
        for (i, res) in results.into_iter().enumerate() {
            match res {
                Ok(Some(map)) => {
                    assert!(is_retraction(g, &map), "search returned a non-retraction");
                    let (m, set) = &candidates[start + i];
                    return Ok(RetractScan {
                        d,
                        n: g.n(),
                        image: set.to_vec(),
                        size: set.len(),
                        cube_part: (0..cube_n).filter(|&v| m >> v & 1 == 1).collect(),
                        map,
                        exhaustive,
                        candidates: total,
                        checked,
                        refuted,
                        undecided_larger: undecided,
                    });
                }
                Ok(None) => refuted += 1,
                Err(Error::BudgetExceeded(_)) => undecided += 1,
                Err(e) => return Err(e),
            }
        }
        start = end;
    }
    Err(Error::BudgetExceeded(format!(
        "no candidate verified: {refuted} refuted, {undecided} over budget"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_hypercube, EdgeLabel};

    fn cube_set(d: usize, vs: &[usize]) -> VertexSet {
        VertexSet::from_vertices(1 << d, vs.iter().copied()).unwrap()
    }

    #[test]
    fn probabilities_are_exact() {
        assert_eq!(config1_probability(), Ratio::new(11, 16));
        assert_eq!(config2_probability(), Ratio::new(163, 256));
        for (s, l) in [(1, 2), (3, 12), (10, 19)] {
            assert_eq!(config1_probability_with(s, l).unwrap(), Ratio::new(11, 16));
            assert_eq!(
                config2_probability_with(s, l).unwrap(),
                Ratio::new(163, 256)
            );
        }
        assert!(config1_probability() < Ratio::from_integer(1));
        assert!(config1_probability_with(3, 3).is_err());
    }

    #[test]
    fn quarter_examples() {
        assert!(union_of_quarters_check(3, &VertexSet::empty(8)).unwrap());
        assert!(!union_of_quarters_check(3, &cube_set(3, &[5])).unwrap());
        assert!(union_of_quarters_check(3, &VertexSet::full(8)).unwrap());
        assert!(union_of_quarters_check(3, &cube_set(3, &[0, 1])).unwrap());
        assert!(union_of_quarters_check(2, &cube_set(2, &[3])).unwrap());
        assert!(union_of_quarters_check(1, &cube_set(1, &[0])).is_err());
        let qs = QuarterSet::new(
            4,
            vec![Quarter {
                i: 0,
                j: 3,
                a: true,
                b: false,
            }],
        )
        .unwrap();
        assert_eq!(qs.union().to_vec(), vec![1, 3, 5, 7]);
        assert!(union_of_quarters_check(4, &qs.union()).unwrap());
    }

    #[test]
    fn quarter_family_counts_stay_under_bound() {
        for d in 2..=3usize {
            let count = count_unions_of_quarters(d).unwrap();
            assert!(count <= 1u64 << (2 * d * d - 2 * d), "d = {d}: {count}");
        }
        assert_eq!(count_unions_of_quarters(2).unwrap(), 16);
    }

    #[test]
    fn harper_examples() {
        for d in 2..=6 {
            let half =
                VertexSet::from_vertices(1 << d, (0..1usize << d).filter(|x| x & 1 == 0)).unwrap();
            let h = harper_boundary_check(d, &half).unwrap();
            assert_eq!(h.boundary, 1 << (d - 1));
            assert!(h.pass);
            let single = harper_boundary_check(d, &cube_set(d, &[0])).unwrap();
            assert_eq!(single.boundary, d);
            assert!(single.pass);
        }
        // The set missing one vertex of Q_5: boundary 5, quarter of the cube 8.
        let most = VertexSet::from_vertices(32, 1..32).unwrap();
        let h = harper_boundary_check(5, &most).unwrap();
        assert_eq!((h.boundary, h.bound), (5, 1));
        assert!(h.boundary < (most.len()).min(32 / 4));
    }

    #[test]
    fn harper_exhaustive_q4() {
        let q4 = gen_hypercube(4).unwrap();
        for mask in 0u32..1 << 16 {
            let s = VertexSet::from_vertices(16, (0..16).filter(|&x| mask >> x & 1 == 1)).unwrap();
            let h = harper_boundary_check(4, &s).unwrap();
            assert!(h.pass, "{mask:#x}");
            let cut = q4
                .edges()
                .iter()
                .filter(|&&(u, v)| s.contains(u) != s.contains(v))
                .count();
            assert_eq!(cut, h.boundary);
        }
    }

    fn square(s: usize, l: usize, labels: [EdgeLabel; 4]) -> SubdividedHypercube {
        SubdividedHypercube::from_parts(2, s, l, labels.to_vec(), vec![0; 4]).unwrap()
    }

    #[test]
    fn reduce_examples() {
        let sq = square(2, 11, [EdgeLabel::Short; 4]);
        let n = sq.graph().n();
        assert_eq!(
            reduce_retract(&sq, &VertexSet::full(n)).unwrap(),
            VertexSet::full(n)
        );
        let one = VertexSet::from_vertices(n, [sq.cube_vertex(2)]).unwrap();
        assert_eq!(reduce_retract(&sq, &one).unwrap(), one);
        let path = VertexSet::from_vertices(n, sq.path(0).iter().copied()).unwrap();
        assert_eq!(reduce_retract(&sq, &path).unwrap(), path);
        // A path plus a stub of the next one snaps back to the path.
        let mut stub = path.clone();
        let next = sq.path(1);
        let extra = if next[0] == sq.path(0)[0] || next[0] == *sq.path(0).last().unwrap() {
            next[1]
        } else {
            next[next.len() - 2]
        };
        stub.insert(extra);
        assert_eq!(reduce_retract(&sq, &stub).unwrap(), path);
        // The whole cycle minus one vertex is not a retract image.
        let mut gap = VertexSet::full(n);
        gap.remove(sq.path(0)[1]);
        assert!(reduce_retract(&sq, &gap).is_err());
    }

    #[test]
    fn largest_retract_of_a_square() {
        let (s, l) = (2, 11);
        let sq = square(s, l, [EdgeLabel::Short; 4]);
        let scan = find_largest_proper_retract(&sq, DEFAULT_NODE_BUDGET).unwrap();
        assert!(scan.exhaustive);
        assert!(scan.size >= s + 2);
        assert!(scan.size < sq.graph().n());
        assert!(is_retraction(sq.graph(), &scan.map));
        // Two adjacent paths fold the other two onto them.
        assert_eq!(scan.size, 2 * (s + 1) + 1);
        assert_eq!(scan.undecided_larger, 0);
    }

    #[test]
    fn largest_retract_of_a_short_cube() {
        let sq = SubdividedHypercube::from_parts(3, 1, 10, vec![EdgeLabel::Short; 12], vec![0; 12])
            .unwrap();
        let scan = find_largest_proper_retract(&sq, 200_000).unwrap();
        assert!(is_retraction(sq.graph(), &scan.map));
        assert_eq!(super::super::image(&scan.map).to_vec(), scan.image);
        assert!(scan.size < sq.graph().n());
        assert!(super::super::is_nonexpansive(sq.graph(), &scan.map));
    }
}
