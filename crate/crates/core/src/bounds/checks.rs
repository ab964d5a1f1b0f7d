//! Empirical checks of the `G(n, p)` structure lemmas.
//!
//! Each check scans a sampled graph, reports the worst observed ratio of
//! value to bound, and returns witnesses that [`Witness::recheck`] can verify
//! independently. The lemmas hold with high probability for large `n`; at
//! desk scale their radius formulas go negative, so the radius is clamped to
//! 1 and the outcome is flagged.

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::generators::{gen_gnp, GnpParams};
use crate::graph::{Graph, Vertex, VertexSet, UNREACHABLE};
use crate::rng::{derive_seed, stream};
use crate::walks::WalkCounter;

pub const C_BALL_GROWTH: &str = "ball-growth";
pub const C_TREE_EXCESS: &str = "ball-tree-excess";
pub const C_BALL_PATHS: &str = "ball-path-count";
pub const C_GLOBAL_PATHS: &str = "global-path-count";

const MAX_VIOLATIONS: usize = 16;

/// The radius `r < ((1/2-ε)log n - loglog n - log 40)/log(pn+1) - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaRadius {
    /// The right-hand side of the inequality.
    pub raw: f64,
    /// The radius used: the largest integer below `raw`, at least 1.
    pub r: usize,
    pub clamped: bool,
}

impl LemmaRadius {
    pub fn new(n: usize, p: f64, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0 / 3.0) {
            return invalid(format!("ε = {eps} outside (0, 1/3)"));
        }
        let nf = n as f64;
        if nf < 3.0 {
            return invalid("need n >= 3");
        }
        let raw = ((0.5 - eps) * nf.ln() - nf.ln().ln() - 40f64.ln()) / (nf * p + 1.0).ln() - 1.0;
        let largest_below = raw.ceil() - 1.0;
        if largest_below >= 1.0 {
            Ok(Self {
                raw,
                r: largest_below as usize,
                clamped: false,
            })
        } else {
            Ok(Self {
                raw,
                r: 1,
                clamped: true,
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `|B(x, k)| = size` against `bound`.
    Ball {
        x: Vertex,
        k: usize,
        size: usize,
        bound: f64,
    },
    /// `B(x, r)` spans `edges` edges on `vertices` vertices.
    TreeExcess {
        x: Vertex,
        r: usize,
        vertices: usize,
        edges: usize,
        bound: f64,
    },
    /// Non-backtracking walks of length `length` from `x` to `y` inside
    /// `B(x, r)`.
    BallPaths {
        x: Vertex,
        y: Vertex,
        r: usize,
        length: usize,
        count: u128,
        bound: f64,
    },
    /// Non-backtracking walks of length at most `max_len` from `x` to `y`.
    PairPaths {
        x: Vertex,
        y: Vertex,
        max_len: usize,
        count: u128,
        bound: f64,
    },
}

impl Witness {
    pub fn value(&self) -> f64 {
        match *self {
            Witness::Ball { size, .. } => size as f64,
            Witness::TreeExcess {
                vertices, edges, ..
            } => edges as f64 - (vertices as f64 - 1.0),
            Witness::BallPaths { count, .. } | Witness::PairPaths { count, .. } => count as f64,
        }
    }

    pub fn bound(&self) -> f64 {
        match *self {
            Witness::Ball { bound, .. }
            | Witness::TreeExcess { bound, .. }
            | Witness::BallPaths { bound, .. }
            | Witness::PairPaths { bound, .. } => bound,
        }
    }

    pub fn violates(&self) -> bool {
        self.value() > self.bound()
    }

    /// Recomputes the witness on `g`. Returns `true` when the recorded
    /// numbers are reproduced exactly.
    pub fn recheck(&self, g: &Graph) -> Result<bool> {
        Ok(match *self {
            Witness::Ball { x, k, size, .. } => g.ball(x, k)?.len() == size,
            Witness::TreeExcess {
                x,
                r,
                vertices,
                edges,
                ..
            } => {
                let ball = g.ball(x, r)?;
                ball.len() == vertices && g.edges_within(&ball) == edges
            }
            Witness::BallPaths {
                x,
                y,
                r,
                length,
                count,
                ..
            } => ball_walk_count(g, x, y, r, length)? == count,
            Witness::PairPaths {
                x,
                y,
                max_len,
                count,
                ..
            } => pair_walk_count(&WalkCounter::new(g), x, y, max_len)? == count,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub check: String,
    pub pass: bool,
    /// Observed value at the worst ratio.
    pub value: f64,
    /// Bound at the worst ratio.
    pub bound: f64,
    pub worst_ratio: f64,
    /// Location of the worst ratio.
    pub witness: Option<Witness>,
    /// Up to 16 violations.
    pub violations: Vec<Witness>,
    pub violation_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<LemmaRadius>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
}

impl CheckOutcome {
    fn from_witnesses(check: &str, witnesses: impl IntoIterator<Item = Witness>) -> Self {
        let mut worst: Option<(f64, Witness)> = None;
        let mut violations = Vec::new();
        let mut violation_count = 0;
        for w in witnesses {
            let ratio = ratio(w.value(), w.bound());
            if w.violates() {
                violation_count += 1;
                if violations.len() < MAX_VIOLATIONS {
                    violations.push(w.clone());
                }
            }
            if worst.as_ref().is_none_or(|(r, _)| ratio > *r) {
                worst = Some((ratio, w));
            }
        }
        let (worst_ratio, witness) = match worst {
            Some((r, w)) => (r, Some(w)),
            None => (0.0, None),
        };
        Self {
            check: check.into(),
            pass: violation_count == 0,
            value: witness.as_ref().map_or(0.0, Witness::value),
            bound: witness.as_ref().map_or(0.0, Witness::bound),
            worst_ratio,
            witness,
            violations,
            violation_count,
            radius: None,
            flags: Vec::new(),
        }
    }

    fn with_radius(mut self, radius: LemmaRadius) -> Self {
        if radius.clamped {
            self.flags.push(format!(
                "radius formula gives {:.3}; clamped to r = 1",
                radius.raw
            ));
        }
        self.radius = Some(radius);
        self
    }
}

fn ratio(value: f64, bound: f64) -> f64 {
    if bound > 0.0 {
        value / bound
    } else if value > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

fn check_p(g: &Graph, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("probability {p} outside [0, 1]"));
    }
    if g.n() < 2 {
        return invalid("need at least two vertices");
    }
    Ok(g.n() as f64 * p)
}

/// Level sizes of a BFS from `x`, up to depth `limit`.
fn level_sizes(
    g: &Graph,
    x: Vertex,
    limit: usize,
    dist: &mut [u32],
    touched: &mut Vec<Vertex>,
) -> Vec<usize> {
    let mut levels = vec![1usize];
    dist[x] = 0;
    touched.push(x);
    let mut frontier = vec![x];
    let mut next = Vec::new();
    while !frontier.is_empty() && levels.len() <= limit {
        for &u in &frontier {
            for &w in g.neighbors(u) {
                if dist[w] == UNREACHABLE {
                    dist[w] = dist[u] + 1;
                    touched.push(w);
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        levels.push(next.len());
        std::mem::swap(&mut frontier, &mut next);
        next.clear();
    }
    for &v in touched.iter() {
        dist[v] = UNREACHABLE;
    }
    touched.clear();
    levels
}

/// `|B(x, k)| ≤ 20 log(n) (1+pn)^k` for every `x` and every `k ≥ 1` up to
/// the first radius at which the bound reaches `n` (beyond it the bound
/// holds trivially).
pub fn check_ball_growth(g: &Graph, p: f64) -> Result<CheckOutcome> {
    let pn = check_p(g, p)?;
    if pn <= 1.0 {
        return invalid(format!("ball growth needs pn > 1, got {pn}"));
    }
    let n = g.n();
    let base = 20.0 * (n as f64).ln();
    let bound = |k: usize| base * (1.0 + pn).powi(k as i32);
    let mut limit = 1;
    while bound(limit) < n as f64 {
        limit += 1;
    }
    let per_vertex: Vec<Vec<Witness>> = (0..n)
        .into_par_iter()
        .map_init(
            || (vec![UNREACHABLE; n], Vec::new()),
            |(dist, touched), x| {
                let levels = level_sizes(g, x, limit, dist, touched);
                let mut size = 0;
                let mut out = Vec::new();
                for k in 0..=limit {
                    size += levels.get(k).copied().unwrap_or(0);
                    if k >= 1 {
                        out.push(Witness::Ball {
                            x,
                            k,
                            size,
                            bound: bound(k),
                        });
                    }
                }
                out
            },
        )
        .collect();
    Ok(CheckOutcome::from_witnesses(
        C_BALL_GROWTH,
        per_vertex.into_iter().flatten(),
    ))
}

fn ball_walk_count(g: &Graph, x: Vertex, y: Vertex, r: usize, length: usize) -> Result<u128> {
    let ball = g.ball(x, r)?;
    if !ball.contains(y) {
        return Ok(0);
    }
    let (sub, ids) = g.induced_subgraph(&ball);
    let pos = |v: Vertex| ids.iter().position(|&u| u == v).expect("in ball");
    let target = VertexSet::from_vertices(sub.n(), [pos(y)])?;
    crate::walks::count_nb_walks(&sub, pos(x), &target, length, None)?
        .exact()
        .ok_or(Error::Saturated)
}

fn pair_walk_count(
    counter: &WalkCounter<'_>,
    x: Vertex,
    y: Vertex,
    max_len: usize,
) -> Result<u128> {
    let mut total = 0u128;
    let sat = counter.run(x, max_len, None, |_, ends| {
        total = total.saturating_add(ends[y]);
    })?;
    Ok(if sat.is_some() { u128::MAX } else { total })
}

/// Every ball `B(x, r)` is a tree plus at most `3/ε` edges, and inside it the
/// non-backtracking walks of length `k ≤ 2r` from `x` to a sampled `y`
/// number at most `(7/ε)^k`.
pub fn check_ball_tree_excess(
    g: &Graph,
    p: f64,
    eps: f64,
    seed: u64,
) -> Result<(CheckOutcome, CheckOutcome)> {
    check_p(g, p)?;
    let radius = LemmaRadius::new(g.n(), p, eps)?;
    let r = radius.r;
    let excess_bound = 3.0 / eps;
    let path_base = 7.0 / eps;
    let per_vertex: Vec<(Witness, Vec<Witness>)> = (0..g.n())
        .into_par_iter()
        .map(|x| -> Result<(Witness, Vec<Witness>)> {
            let ball = g.ball(x, r)?;
            let excess = Witness::TreeExcess {
                x,
                r,
                vertices: ball.len(),
                edges: g.edges_within(&ball),
                bound: excess_bound,
            };
            let members = ball.to_vec();
            let mut rng = stream(seed, "ball-paths", x as u64);
            let y = members[rng.gen_range(0..members.len())];
            let (sub, ids) = g.induced_subgraph(&ball);
            let local = |v: Vertex| ids.iter().position(|&u| u == v).expect("in ball");
            let counter = WalkCounter::new(&sub);
            let (lx, ly) = (local(x), local(y));
            let mut paths = Vec::new();
            let sat = counter.run(lx, 2 * r, None, |t, ends| {
                if t >= 1 {
                    paths.push(Witness::BallPaths {
                        x,
                        y,
                        r,
                        length: t,
                        count: ends[ly],
                        bound: path_base.powi(t as i32),
                    });
                }
            })?;
            if sat.is_some() {
                return Err(Error::Saturated);
            }
            Ok((excess, paths))
        })
        .collect::<Result<_>>()?;
    let (excess, paths): (Vec<_>, Vec<_>) = per_vertex.into_iter().unzip();
    Ok((
        CheckOutcome::from_witnesses(C_TREE_EXCESS, excess).with_radius(radius),
        CheckOutcome::from_witnesses(C_BALL_PATHS, paths.into_iter().flatten()).with_radius(radius),
    ))
}

/// For `pairs` sampled vertex pairs, non-backtracking walks of length at
/// most `2r` number at most `r (7/ε)^{3r}`.
pub fn check_global_path_count(
    g: &Graph,
    p: f64,
    eps: f64,
    pairs: usize,
    seed: u64,
) -> Result<CheckOutcome> {
    check_p(g, p)?;
    let radius = LemmaRadius::new(g.n(), p, eps)?;
    let r = radius.r;
    let bound = r as f64 * (7.0 / eps).powi(3 * r as i32);
    let mut rng = stream(seed, "path-pairs", 0);
    let sampled: Vec<(Vertex, Vertex)> = (0..pairs)
        .map(|_| (rng.gen_range(0..g.n()), rng.gen_range(0..g.n())))
        .collect();
    let counter = WalkCounter::new(g);
    let witnesses: Vec<Witness> = sampled
        .par_iter()
        .map(|&(x, y)| {
            Ok(Witness::PairPaths {
                x,
                y,
                max_len: 2 * r,
                count: pair_walk_count(&counter, x, y, 2 * r)?,
                bound,
            })
        })
        .collect::<Result<_>>()?;
    Ok(CheckOutcome::from_witnesses(C_GLOBAL_PATHS, witnesses).with_radius(radius))
}

/// One CSV row of a lemma sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
    pub check: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
    /// Worst-ratio witness, or the first violation, as compact JSON.
    pub witness: String,
}

impl SweepRow {
    fn new(n: usize, p: f64, seed: u64, outcome: &CheckOutcome) -> Self {
        let shown = outcome.violations.first().or(outcome.witness.as_ref());
        Self {
            n,
            p,
            seed,
            check: outcome.check.clone(),
            value: shown.map_or(outcome.value, Witness::value),
            bound: shown.map_or(outcome.bound, Witness::bound),
            pass: outcome.pass,
            witness: shown
                .map(|w| serde_json::to_string(w).expect("witness serializes"))
                .unwrap_or_default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaCheck {
    BallGrowth,
    TreeExcess,
    PathCount,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n: usize,
    pub pn: f64,
    pub eps: f64,
    pub seeds: usize,
    pub pairs: usize,
    pub master_seed: u64,
    pub checks: Vec<LemmaCheck>,
}

/// Graph seed of trial `i` in a sweep.
pub fn sweep_graph_seed(master: u64, i: usize) -> u64 {
    derive_seed(master, "lemma-graph", i as u64)
}

/// Runs the requested checks on `seeds` sampled `G(n, pn/n)` graphs. Rows
/// come out in trial order regardless of scheduling.
pub fn lemma_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    if cfg.n < 3 {
        return invalid("lemma sweeps need n >= 3");
    }
    let p = cfg.pn / cfg.n as f64;
    let trials: Vec<Vec<SweepRow>> = (0..cfg.seeds)
        .into_par_iter()
        .map(|i| -> Result<Vec<SweepRow>> {
            let seed = sweep_graph_seed(cfg.master_seed, i);
            let g = gen_gnp(GnpParams { n: cfg.n, p, seed })?;
            let check_seed = derive_seed(cfg.master_seed, "lemma-check", i as u64);
            let mut rows = Vec::new();
            for check in &cfg.checks {
                match check {
                    LemmaCheck::BallGrowth => {
                        rows.push(SweepRow::new(cfg.n, p, seed, &check_ball_growth(&g, p)?))
                    }
                    LemmaCheck::TreeExcess => {
                        let (excess, paths) = check_ball_tree_excess(&g, p, cfg.eps, check_seed)?;
                        rows.push(SweepRow::new(cfg.n, p, seed, &excess));
                        rows.push(SweepRow::new(cfg.n, p, seed, &paths));
                    }
                    LemmaCheck::PathCount => rows.push(SweepRow::new(
                        cfg.n,
                        p,
                        seed,
                        &check_global_path_count(&g, p, cfg.eps, cfg.pairs, check_seed)?,
                    )),
                }
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    Ok(trials.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::fixture;

    #[test]
    fn radius_clamps_at_desk_scale() {
        let r = LemmaRadius::new(4096, 4.0 / 4096.0, 0.25).unwrap();
        assert!(r.raw < 0.0 && r.clamped && r.r == 1);
        let big = LemmaRadius::new(usize::MAX / 2, 2.0 / (usize::MAX / 2) as f64, 0.01).unwrap();
        assert!(!big.clamped && big.r >= 1 && (big.r as f64) < big.raw);
        assert!(LemmaRadius::new(100, 0.1, 0.4).is_err());
    }

    #[test]
    fn complete_graph_ball_growth() {
        let k = fixture("complete:30").unwrap();
        let out = check_ball_growth(&k, 1.0).unwrap();
        assert!(out.pass);
        assert!(out.witness.unwrap().recheck(&k).unwrap());
    }

    #[test]
    fn trees_have_no_excess() {
        let t = fixture("tree:40,2").unwrap();
        let (excess, paths) = check_ball_tree_excess(&t, 0.05, 0.25, 1).unwrap();
        assert!(excess.pass && paths.pass);
        assert_eq!(excess.value, 0.0);
        assert!(excess.flags.iter().any(|f| f.contains("clamped")));
    }

    #[test]
    fn violations_are_recheckable() {
        let k = fixture("complete:12").unwrap();
        // ε near 1/3 gives excess bound 9 while B(x,1) of K12 has excess 55.
        let (excess, _) = check_ball_tree_excess(&k, 0.5, 0.33, 1).unwrap();
        assert!(!excess.pass);
        let w = &excess.violations[0];
        assert!(w.violates() && w.recheck(&k).unwrap());
        let out = check_global_path_count(&k, 0.5, 0.3, 5, 3).unwrap();
        for w in out.witness.iter().chain(&out.violations) {
            assert!(w.recheck(&k).unwrap());
        }
    }

    #[test]
    fn disconnected_pair_has_no_paths() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(pair_walk_count(&WalkCounter::new(&g), 0, 3, 6).unwrap(), 0);
        assert!(pair_walk_count(&WalkCounter::new(&g), 0, 1, 2).unwrap() >= 1);
    }

    #[test]
    fn sweep_rows_are_ordered_and_deterministic() {
        let cfg = SweepConfig {
            n: 300,
            pn: 4.0,
            eps: 0.25,
            seeds: 3,
            pairs: 10,
            master_seed: 5,
            checks: vec![
                LemmaCheck::BallGrowth,
                LemmaCheck::TreeExcess,
                LemmaCheck::PathCount,
            ],
        };
        let a = lemma_sweep(&cfg).unwrap();
        assert_eq!(a.len(), 12);
        assert_eq!(a, lemma_sweep(&cfg).unwrap());
        assert_eq!(a[0].seed, sweep_graph_seed(5, 0));
    }
}
