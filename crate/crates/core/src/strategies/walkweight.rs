//! The robber's walk-weight potential.
//!
//! For cops on the multiset `S` and the robber on `x`, let `N_i` be the
//! number of non-backtracking walks of length `2i` from `x` to `S` whose
//! first edge is not the one the robber arrived by. The robber keeps
//!
//! ```text
//! W = Σ_{i=0..r} w_i N_i,   w_i = (d-1)^{-i} e^{i/r}
//! ```
//!
//! small, where `d` is the minimum degree of the region `R` he roams. A cop
//! on the robber's vertex makes `N_0 ≥ 1`, so `W < 1` means he is free.

use rand::Rng as _;

use crate::error::{invalid, Error, Result};
use crate::game::{Position, RobberStrategy};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::rng::{rng_from_seed, Rng};
use crate::walks::WalkCounter;

use super::baselines::nearest_distances;

/// Relative gap below which two potentials count as tied.
const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct WalkWeightConfig {
    pub region: VertexSet,
    pub d: usize,
    pub r: usize,
    pub weights: Vec<f64>,
}

pub fn default_weights(d: usize, r: usize) -> Vec<f64> {
    let base = (d as f64 - 1.0).ln();
    (0..=r)
        .map(|i| (i as f64 / r as f64 - i as f64 * base).exp())
        .collect()
}

impl WalkWeightConfig {
    /// Config on `region` with `d` its induced minimum degree. Needs
    /// `d ≥ 3`, `r ≥ 1` and `e^{1/r} < d - 1` so that the weights decrease.
    pub fn new(g: &Graph, region: VertexSet, r: usize) -> Result<Self> {
        if region.universe() != g.n() {
            return invalid("region does not match the graph");
        }
        if region.is_empty() {
            return invalid("robber region is empty");
        }
        let d = region
            .iter()
            .map(|v| {
                g.neighbors(v)
                    .iter()
                    .filter(|&&w| region.contains(w))
                    .count()
            })
            .min()
            .unwrap_or(0);
        Self::with_degree(region, d, r)
    }

    pub fn with_degree(region: VertexSet, d: usize, r: usize) -> Result<Self> {
        if d < 3 {
            return invalid(format!(
                "robber region has minimum degree {d}, need at least 3"
            ));
        }
        if r == 0 {
            return invalid("profile depth r must be at least 1");
        }
        let weights = default_weights(d, r);
        if weights.windows(2).any(|w| w[1] >= w[0]) {
            return invalid(format!(
                "weights do not decrease for d = {d}, r = {r} (need e^(1/r) < d - 1)"
            ));
        }
        Ok(Self {
            region,
            d,
            r,
            weights,
        })
    }

    /// Largest induced subgraph of minimum degree at least `d`, by peeling.
    pub fn on_core(g: &Graph, d: usize, r: usize) -> Result<Self> {
        let core = g.min_degree_peel(d);
        if core.is_empty() {
            return invalid(format!("graph has an empty {d}-core"));
        }
        Self::new(g, core, r)
    }

    /// Same region and depth with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            weights: self.weights.iter().map(|w| w * factor).collect(),
            ..self.clone()
        }
    }
}

/// `Σ w_i N_i` for the robber on `robber` after arriving over `last_edge`.
pub fn robber_potential(
    g: &Graph,
    cfg: &WalkWeightConfig,
    cops: &[Vertex],
    robber: Vertex,
    last_edge: Option<(Vertex, Vertex)>,
) -> Result<f64> {
    potential_with(&WalkCounter::new(g), cfg, cops, robber, last_edge)
}

fn potential_with(
    counter: &WalkCounter<'_>,
    cfg: &WalkWeightConfig,
    cops: &[Vertex],
    robber: Vertex,
    last_edge: Option<(Vertex, Vertex)>,
) -> Result<f64> {
    counter.graph().check_vertex(robber)?;
    if !cfg.region.contains(robber) {
        return Err(Error::InvalidParameter(format!(
            "robber vertex {robber} is outside the region"
        )));
    }
    let profile = counter.profile_to_multiset(robber, cops, cfg.r, last_edge)?;
    Ok(profile
        .counts
        .iter()
        .zip(&cfg.weights)
        .map(|(c, w)| w * c.as_f64())
        .sum())
}

/// How far the chosen move had to fall back from the preferred kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum MoveTier {
    /// A fresh edge inside the region onto a vertex no cop reaches next.
    Preferred = 0,
    /// Safe, inside the region, but backtracking or staying.
    Backtrack = 1,
    /// Safe only by leaving the region.
    LeaveRegion = 2,
    /// Every option is adjacent to a cop.
    Unsafe = 3,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WalkWeightMove {
    pub to: Vertex,
    pub potential: f64,
    pub tier: MoveTier,
}

/// Minimises the potential after the move against the cops' current
/// vertices.
///
/// The potential only sees walks of even length, so it cannot tell a vertex
/// next to a cop from one two steps away. Moves are therefore ranked first
/// by [`MoveTier`], then by potential, then by distance to the nearest cop
/// (larger first), then by lowest id.
pub fn robber_walk_weight_move(
    g: &Graph,
    cfg: &WalkWeightConfig,
    pos: &Position,
    last_edge: Option<(Vertex, Vertex)>,
) -> Result<WalkWeightMove> {
    let counter = WalkCounter::new(g);
    choose_move(&counter, cfg, pos, last_edge)
}

fn choose_move(
    counter: &WalkCounter<'_>,
    cfg: &WalkWeightConfig,
    pos: &Position,
    last_edge: Option<(Vertex, Vertex)>,
) -> Result<WalkWeightMove> {
    let g = counter.graph();
    let x = pos
        .robber
        .ok_or_else(|| Error::InvalidParameter("robber not placed".into()))?;
    g.check_vertex(x)?;
    let came_from = last_edge.and_then(|(a, b)| (b == x).then_some(a));
    let dist = nearest_distances(g, &pos.cops);
    let mut best: Option<(MoveTier, f64, u32, Vertex)> = None;
    for v in g.closed_neighbors(x) {
        let safe = dist[v] > 1;
        let inside = cfg.region.contains(v);
        let tier = match (safe, inside) {
            (false, _) => MoveTier::Unsafe,
            (true, false) => MoveTier::LeaveRegion,
            (true, true) if v != x && Some(v) != came_from => MoveTier::Preferred,
            (true, true) => MoveTier::Backtrack,
        };
        let edge = if v == x {
            last_edge.filter(|&(_, b)| b == x)
        } else {
            Some((x, v))
        };
        let w = if inside {
            potential_with(counter, cfg, &pos.cops, v, edge)?
        } else {
            f64::INFINITY
        };
        let better = match best {
            None => true,
            Some((bt, bw, bd, _)) => {
                if tier != bt {
                    tier < bt
                } else if !potentials_tie(w, bw) {
                    w < bw
                } else {
                    dist[v] > bd
                }
            }
        };
        if better {
            best = Some((tier, w, dist[v], v));
        }
    }
    let (tier, potential, _, to) = best.expect("closed neighbourhood is nonempty");
    Ok(WalkWeightMove {
        to,
        potential,
        tier,
    })
}

fn potentials_tie(a: f64, b: f64) -> bool {
    if a == b {
        return true;
    }
    if !a.is_finite() || !b.is_finite() {
        return false;
    }
    (a - b).abs() <= TIE_TOLERANCE * a.abs().max(b.abs())
}

/// Samples `trials` vertices of the region and returns the one with the
/// smallest potential (first sampled on ties). As with moves, vertices no cop
/// can reach next move are sampled first whenever the region has any.
pub fn robber_random_placement(
    g: &Graph,
    cfg: &WalkWeightConfig,
    cops: &[Vertex],
    trials: usize,
    rng: &mut Rng,
) -> Result<Vertex> {
    if trials == 0 {
        return invalid("placement needs at least one trial");
    }
    let region = cfg.region.to_vec();
    if region.is_empty() {
        return invalid("robber region is empty");
    }
    let dist = nearest_distances(g, cops);
    let safe: Vec<Vertex> = region.iter().copied().filter(|&v| dist[v] > 1).collect();
    let pool = if safe.is_empty() { &region } else { &safe };
    let counter = WalkCounter::new(g);
    let mut best: Option<(f64, Vertex)> = None;
    for _ in 0..trials {
        let v = pool[rng.gen_range(0..pool.len())];
        let w = potential_with(&counter, cfg, cops, v, None)?;
        if best.is_none_or(|(bw, _)| w < bw && !potentials_tie(w, bw)) {
            best = Some((w, v));
        }
    }
    Ok(best.expect("trials >= 1").1)
}

/// The walk-weight robber as a playable strategy.
///
/// The region is built on first use: the `d`-core of the graph, so that
/// robbers on graphs with low-degree vertices still have a valid region.
pub struct WalkWeightRobber {
    r: usize,
    core_degree: usize,
    trials: usize,
    cfg: Option<WalkWeightConfig>,
    rng: Rng,
    tier_counts: [usize; 4],
    error: Option<String>,
}

pub const DEFAULT_PLACEMENT_TRIALS: usize = 32;

impl WalkWeightRobber {
    pub fn new(r: usize, core_degree: usize, trials: usize, seed: u64) -> Self {
        Self {
            r,
            core_degree,
            trials,
            cfg: None,
            rng: rng_from_seed(seed),
            tier_counts: [0; 4],
            error: None,
        }
    }

    pub fn with_config(cfg: WalkWeightConfig, trials: usize, seed: u64) -> Self {
        Self {
            r: cfg.r,
            core_degree: cfg.d,
            trials,
            cfg: Some(cfg),
            rng: rng_from_seed(seed),
            tier_counts: [0; 4],
            error: None,
        }
    }

    fn config(&mut self, g: &Graph) -> Option<&WalkWeightConfig> {
        if self.cfg.is_none() && self.error.is_none() {
            match WalkWeightConfig::on_core(g, self.core_degree, self.r) {
                Ok(c) => self.cfg = Some(c),
                Err(e) => self.error = Some(e.to_string()),
            }
        }
        self.cfg.as_ref()
    }

    /// Moves made at each [`MoveTier`] so far.
    pub fn tier_counts(&self) -> [usize; 4] {
        self.tier_counts
    }
}

impl RobberStrategy for WalkWeightRobber {
    fn name(&self) -> String {
        format!("walkweight:r={},d={}", self.r, self.core_degree)
    }

    fn place(&mut self, g: &Graph, cops: &[Vertex]) -> Vertex {
        let trials = self.trials.max(1);
        let Some(cfg) = self.config(g).cloned() else {
            return 0;
        };
        robber_random_placement(g, &cfg, cops, trials, &mut self.rng).unwrap_or(0)
    }

    fn step(&mut self, g: &Graph, pos: &Position) -> Vertex {
        let x = pos.robber.expect("placed");
        let Some(cfg) = self.config(g).cloned() else {
            return x;
        };
        match robber_walk_weight_move(g, &cfg, pos, pos.robber_last_edge) {
            Ok(m) => {
                self.tier_counts[m.tier as usize] += 1;
                m.to
            }
            Err(e) => {
                self.error.get_or_insert(e.to_string());
                x
            }
        }
    }

    fn take_notes(&mut self) -> Vec<String> {
        let mut notes = Vec::new();
        if let Some(e) = self.error.take() {
            notes.push(format!("walkweight robber fell back to staying: {e}"));
        }
        let [_, back, leave, unsafe_] = self.tier_counts;
        if back + leave + unsafe_ > 0 {
            notes.push(format!(
                "walkweight fallback moves: backtrack-or-stay {back}, leave-region {leave}, unsafe {unsafe_}"
            ));
        }
        notes
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Side;
    use crate::generators::fixture;
    use crate::rng::rng_from_seed;

    fn pos(cops: Vec<Vertex>, robber: Vertex) -> Position {
        Position {
            cops,
            robber: Some(robber),
            to_move: Side::Robber,
            round: 1,
            robber_last_edge: None,
        }
    }

    #[test]
    fn weights() {
        let w = default_weights(3, 2);
        assert_eq!(w[0], 1.0);
        assert!((w[1] - 0.5f64.exp() / 2.0).abs() < 1e-12);
        assert!((w[1] - 0.8244).abs() < 1e-4);
        let heawood = fixture("heawood").unwrap();
        assert!(WalkWeightConfig::new(&heawood, VertexSet::full(14), 1).is_err());
        assert!(
            WalkWeightConfig::new(&fixture("cycle:6").unwrap(), VertexSet::full(6), 2).is_err()
        );
    }

    #[test]
    fn potential_basics() {
        let heawood = fixture("heawood").unwrap();
        let cfg = WalkWeightConfig::new(&heawood, VertexSet::full(14), 2).unwrap();
        assert!(robber_potential(&heawood, &cfg, &[3], 3, None).unwrap() >= 1.0);
        let grid = fixture("grid:12x12").unwrap();
        let mut region = VertexSet::full(144);
        region.remove(0);
        let cfg = WalkWeightConfig::with_degree(region, 3, 2).unwrap();
        // Cop at distance 10 from (1,1): no walk of length <= 4 reaches it.
        let w = robber_potential(&grid, &cfg, &[6 * 12 + 6], 13, None).unwrap();
        assert_eq!(w, 0.0);
        assert!(robber_potential(&grid, &cfg, &[0], 0, None).is_err());
    }

    #[test]
    fn move_is_scale_invariant_and_avoids_cops() {
        let g = fixture("projective:3").unwrap();
        let cfg = WalkWeightConfig::new(&g, VertexSet::full(g.n()), 2).unwrap();
        let scaled = cfg.scaled(7.0);
        for robber in 0..g.n() {
            for cop in [0, 5, 17] {
                if cop == robber {
                    continue;
                }
                let p = pos(vec![cop, (cop + 3) % g.n()], robber);
                let a = robber_walk_weight_move(&g, &cfg, &p, None).unwrap();
                let b = robber_walk_weight_move(&g, &scaled, &p, None).unwrap();
                assert_eq!(a.to, b.to);
                if a.tier == MoveTier::Preferred {
                    assert!(!p.cops.iter().any(|&c| g.adjacent_or_equal(c, a.to)));
                }
            }
        }
    }

    #[test]
    fn far_cop_tie_break() {
        let grid = fixture("grid:12x12").unwrap();
        let cfg = WalkWeightConfig::with_degree(VertexSet::full(144), 3, 2).unwrap();
        // Robber at (5,5) = 65, cop at (11,11): all potentials vanish, so
        // the robber steps to the neighbour farthest from the cop.
        let m = robber_walk_weight_move(&grid, &cfg, &pos(vec![143], 65), None).unwrap();
        assert_eq!(m.potential, 0.0);
        assert_eq!(m.to, 53);
    }

    #[test]
    fn placement() {
        let g = fixture("heawood").unwrap();
        let cfg = WalkWeightConfig::new(&g, VertexSet::full(14), 2).unwrap();
        let mut rng = rng_from_seed(1);
        let v = robber_random_placement(&g, &cfg, &[], 5, &mut rng).unwrap();
        assert!(v < 14);
        // Heawood is bipartite: even walks from odd-distance vertices never
        // reach the cop, so those vertices have zero potential.
        let v = robber_random_placement(&g, &cfg, &[0], 200, &mut rng).unwrap();
        assert_eq!(g.bfs_distances(0)[v] % 2, 1);
        assert_eq!(robber_potential(&g, &cfg, &[0], v, None).unwrap(), 0.0);
        assert!(robber_random_placement(&g, &cfg, &[0], 0, &mut rng).is_err());
    }
}
