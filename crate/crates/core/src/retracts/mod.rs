//! Retractions: verification, budgeted search, and the one-cop area defense
//! that follows the robber's image.
//!
//! A retraction is a map `f` with `f(f(x)) = f(x)` that sends every edge to
//! an edge or to a single vertex. For such maps this is the same as being
//! nonexpansive: `dist(f(u), f(v)) <= dist(u, v)`.

pub mod hypercube;

use std::fmt::Write as _;

use crate::error::{invalid, Error, Result};
use crate::game::{CopStrategy, Position};
use crate::graph::{Graph, Vertex, VertexSet, UNREACHABLE};
use crate::strategies::baselines::step_towards;

pub use hypercube::{
    config1_probability, config2_probability, config_probabilities_text, count_unions_of_quarters,
    edge_boundary, find_largest_proper_retract, harper_boundary_check, reduce_retract,
    union_of_quarters_check, HarperCheck, Quarter, QuarterSet, RetractScan,
};

/// Total map `V(G) -> V(G)`, indexed by vertex.
pub type VertexMap = Vec<Vertex>;

/// Default node budget of [`find_retraction_onto`].
pub const DEFAULT_NODE_BUDGET: u64 = 2_000_000;

/// Parses a map file: one `x f(x)` line per vertex, `#` comments allowed.
pub fn parse_map(text: &str, n: usize) -> Result<VertexMap> {
    let mut f: Vec<Option<Vertex>> = vec![None; n];
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parse_err = |msg: String| Error::Parse { line: i + 1, msg };
        let nums: Vec<usize> = line
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| parse_err(format!("bad vertex `{t}`")))
            })
            .collect::<Result<_>>()?;
        let [x, y] = nums[..] else {
            return Err(parse_err("expected `x f(x)`".into()));
        };
        if x >= n || y >= n {
            return Err(parse_err(format!("vertex out of range for n = {n}")));
        }
        if f[x].replace(y).is_some() {
            return Err(parse_err(format!("vertex {x} mapped twice")));
        }
    }
    f.into_iter()
        .enumerate()
        .map(|(x, y)| {
            y.ok_or_else(|| Error::InvalidParameter(format!("map file misses vertex {x}")))
        })
        .collect()
}

pub fn map_to_text(f: &[Vertex]) -> String {
    let mut out = String::new();
    for (x, y) in f.iter().enumerate() {
        let _ = writeln!(out, "{x} {y}");
    }
    out
}

/// Image of `f` as a vertex set over `0..f.len()`.
pub fn image(f: &[Vertex]) -> VertexSet {
    let mut set = VertexSet::empty(f.len());
    for &y in f {
        if y < f.len() {
            set.insert(y);
        }
    }
    set
}

pub fn is_retraction(g: &Graph, f: &[Vertex]) -> bool {
    f.len() == g.n()
        && f.iter().all(|&y| y < g.n())
        && f.iter().all(|&y| f[y] == y)
        && g.edges()
            .iter()
            .all(|&(u, v)| g.adjacent_or_equal(f[u], f[v]))
}

/// `dist(f(u), f(v)) <= dist(u, v)` for all pairs, checked by BFS.
pub fn is_nonexpansive(g: &Graph, f: &[Vertex]) -> bool {
    if f.len() != g.n() || f.iter().any(|&y| y >= g.n()) {
        return false;
    }
    (0..g.n()).all(|u| {
        let du = g.bfs_distances(u);
        let dfu = g.bfs_distances(f[u]);
        (0..g.n()).all(|v| du[v] == UNREACHABLE || dfu[f[v]] <= du[v])
    })
}

/// Searches for a retraction of `g` with image exactly `h`.
///
/// Backtracking over the vertices outside `h`, most constrained first, with
/// every assignment propagated as a distance bound to the others. `Ok(None)`
/// means no such retraction exists; running past `node_budget` assignments
/// is [`Error::BudgetExceeded`].
pub fn find_retraction_onto(
    g: &Graph,
    h: &VertexSet,
    node_budget: u64,
) -> Result<Option<VertexMap>> {
    if h.universe() != g.n() {
        return invalid(format!(
            "image set over {} vertices, graph has {}",
            h.universe(),
            g.n()
        ));
    }
    if h.is_empty() {
        return invalid("retraction image must be nonempty");
    }
    Search::new(g, h).run(node_budget)
}

/// Tries every map that fixes `h` and sends the rest into `h`. Reference
/// implementation for small graphs; refuses more than `10^8` maps.
pub fn find_retraction_bruteforce(g: &Graph, h: &VertexSet) -> Result<Option<VertexMap>> {
    if h.universe() != g.n() || h.is_empty() {
        return invalid("image set must be a nonempty subset of the vertices");
    }
    let targets = h.to_vec();
    let free: Vec<Vertex> = (0..g.n()).filter(|&v| !h.contains(v)).collect();
    let total = (targets.len() as f64).powi(free.len() as i32);
    if total > 1e8 {
        return Err(Error::BudgetExceeded(format!(
            "{total:.0} maps to enumerate"
        )));
    }
    let mut f: VertexMap = (0..g.n()).collect();
    let mut digits = vec![0usize; free.len()];
    loop {
        for (&v, &d) in free.iter().zip(&digits) {
            f[v] = targets[d];
        }
        if is_retraction(g, &f) {
            return Ok(Some(f));
        }
        let mut i = 0;
        loop {
            if i == digits.len() {
                return Ok(None);
            }
            digits[i] += 1;
            if digits[i] < targets.len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Cap on stored ball bitsets, in 64-bit words.
const BALL_WORD_CAP: usize = 1 << 23;

enum Step {
    Found,
    Dead,
    Exceeded,
}

struct Search<'a> {
    g: &'a Graph,
    targets: Vec<Vertex>,
    free: Vec<Vertex>,
    /// `balls[c][t]`: targets within distance `t` of target `c` inside `h`.
    balls: Vec<Vec<Vec<u64>>>,
    /// Distances in `g` from each free vertex.
    free_dist: Vec<Vec<u32>>,
    domains: Vec<Vec<u64>>,
    /// Candidate targets per free vertex, nearest in `g` first.
    preference: Vec<Vec<usize>>,
    assigned: Vec<Option<usize>>,
    trail: Vec<(usize, Vec<u64>)>,
    nodes: u64,
    budget: u64,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, h: &VertexSet) -> Self {
        let targets = h.to_vec();
        let t = targets.len();
        let words = t.div_ceil(64);
        let (sub, _) = g.induced_subgraph(h);
        let sub_dist: Vec<Vec<u32>> = (0..t).map(|i| sub.bfs_distances(i)).collect();
        let reach = sub_dist
            .iter()
            .flat_map(|row| row.iter().filter(|&&d| d != UNREACHABLE))
            .max()
            .copied()
            .unwrap_or(0) as usize;
        let max_radius = reach.min(BALL_WORD_CAP / (t * words).max(1)).max(1);
        let balls = sub_dist
            .iter()
            .map(|row| {
                let mut shells = vec![Vec::new(); max_radius + 1];
                for (j, &d) in row.iter().enumerate() {
                    if (d as usize) <= max_radius {
                        shells[d as usize].push(j);
                    }
                }
                let mut bits = vec![0u64; words];
                shells
                    .into_iter()
                    .map(|shell| {
                        for j in shell {
                            bits[j / 64] |= 1 << (j % 64);
                        }
                        bits.clone()
                    })
                    .collect()
            })
            .collect();
        let free: Vec<Vertex> = (0..g.n()).filter(|&v| !h.contains(v)).collect();
        let free_dist: Vec<Vec<u32>> = match g.distance_matrix() {
            Some(table) => free
                .iter()
                .map(|&v| table[v * g.n()..(v + 1) * g.n()].to_vec())
                .collect(),
            None => free.iter().map(|&v| g.bfs_distances(v)).collect(),
        };
        let boundary: Vec<usize> = targets
            .iter()
            .enumerate()
            .filter(|&(_, &u)| g.neighbors(u).iter().any(|&w| !h.contains(w)))
            .map(|(i, _)| i)
            .collect();
        let mut search = Search {
            g,
            targets,
            free,
            balls,
            free_dist,
            domains: Vec::new(),
            preference: Vec::new(),
            assigned: Vec::new(),
            trail: Vec::new(),
            nodes: 0,
            budget: 0,
        };
        let mut full = vec![u64::MAX; words];
        if !t.is_multiple_of(64) {
            full[words - 1] = (1u64 << (t % 64)) - 1;
        }
        for fi in 0..search.free.len() {
            let mut dom = full.clone();
            for &b in &boundary {
                let d = search.free_dist[fi][search.targets[b]];
                if d != UNREACHABLE {
                    search.intersect_ball(&mut dom, b, d);
                }
            }
            let mut pref: Vec<usize> = (0..t)
                .filter(|&c| dom[c / 64] >> (c % 64) & 1 == 1)
                .collect();
            pref.sort_by_key(|&c| (search.free_dist[fi][search.targets[c]], c));
            search.domains.push(dom);
            search.preference.push(pref);
        }
        search.assigned = vec![None; search.free.len()];
        search
    }

    fn intersect_ball(&self, dom: &mut [u64], c: usize, d: u32) -> bool {
        let radii = &self.balls[c];
        if d as usize >= radii.len() {
            return false;
        }
        let mut changed = false;
        for (w, b) in dom.iter_mut().zip(&radii[d as usize]) {
            let next = *w & b;
            changed |= next != *w;
            *w = next;
        }
        changed
    }

    fn run(mut self, budget: u64) -> Result<Option<VertexMap>> {
        self.budget = budget;
        if self.domains.iter().any(|d| d.iter().all(|&w| w == 0)) {
            return Ok(None);
        }
        match self.solve(self.free.len()) {
            Step::Found => {
                let mut f: VertexMap = (0..self.g.n()).collect();
                for (fi, &v) in self.free.iter().enumerate() {
                    f[v] = self.targets[self.assigned[fi].expect("complete assignment")];
                }
                debug_assert!(is_retraction(self.g, &f));
                Ok(Some(f))
            }
            Step::Dead => Ok(None),
            Step::Exceeded => Err(Error::BudgetExceeded(format!(
                "retraction search stopped after {} nodes",
                self.nodes
            ))),
        }
    }

    fn solve(&mut self, remaining: usize) -> Step {
        if remaining == 0 {
            return Step::Found;
        }
        let var = (0..self.free.len())
            .filter(|&fi| self.assigned[fi].is_none())
            .min_by_key(|&fi| self.domains[fi].iter().map(|w| w.count_ones()).sum::<u32>())
            .expect("an unassigned vertex");
        let values: Vec<usize> = self.preference[var]
            .iter()
            .copied()
            .filter(|&c| self.domains[var][c / 64] >> (c % 64) & 1 == 1)
            .collect();
        for c in values {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Step::Exceeded;
            }
            let mark = self.trail.len();
            self.assigned[var] = Some(c);
            let mut ok = true;
            for w in 0..self.free.len() {
                if self.assigned[w].is_some() {
                    continue;
                }
                let d = self.free_dist[var][self.free[w]];
                if d == UNREACHABLE || d as usize >= self.balls[c].len() {
                    continue;
                }
                let before = self.domains[w].clone();
                let mut dom = std::mem::take(&mut self.domains[w]);
                let changed = self.intersect_ball(&mut dom, c, d);
                let empty = dom.iter().all(|&x| x == 0);
                self.domains[w] = dom;
                if changed {
                    self.trail.push((w, before));
                }
                if empty {
                    ok = false;
                    break;
                }
            }
            if ok {
                match self.solve(remaining - 1) {
                    Step::Dead => {}
                    other => return other,
                }
            }
            while self.trail.len() > mark {
                let (w, dom) = self.trail.pop().expect("trail entry");
                self.domains[w] = dom;
            }
            self.assigned[var] = None;
        }
        Step::Dead
    }
}

/// One cop that always stands on the image of the robber under a retraction.
///
/// Once synchronised, each prescribed move is legal because `f` maps the
/// robber's edge to an edge or a vertex; a robber inside the image is caught
/// on the next cop move. If the cop must place before the robber, it walks
/// to `f(robber)` along shortest paths until synchronised.
#[derive(Clone, Debug)]
pub struct AreaDefenseCops {
    f: VertexMap,
}

impl AreaDefenseCops {
    pub fn new(g: &Graph, f: VertexMap) -> Result<Self> {
        if !is_retraction(g, &f) {
            return invalid("area defense needs a retraction");
        }
        Ok(Self { f })
    }

    pub fn map(&self) -> &[Vertex] {
        &self.f
    }
}

impl CopStrategy for AreaDefenseCops {
    fn name(&self) -> String {
        "area".into()
    }

    fn place(&mut self, _g: &Graph, robber: Option<Vertex>) -> Result<Vec<Vertex>> {
        let at = match robber {
            Some(x) => self.f[x],
            None => image(&self.f).iter().next().unwrap_or(0),
        };
        Ok(vec![at])
    }

    fn step(&mut self, g: &Graph, pos: &Position) -> Vec<Vertex> {
        let cop = pos.cops[0];
        let Some(x) = pos.robber else {
            return vec![cop];
        };
        let target = self.f[x];
        if g.adjacent_or_equal(cop, target) {
            vec![target]
        } else {
            vec![step_towards(g, &g.bfs_distances(target), cop)]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{play, Rules};
    use crate::generators::{cycle, fixture};
    use crate::strategies::RandomRobber;

    fn set(n: usize, vs: &[Vertex]) -> VertexSet {
        VertexSet::from_vertices(n, vs.iter().copied()).unwrap()
    }

    #[test]
    fn verification_examples() {
        let c5 = cycle(5).unwrap();
        assert!(is_retraction(&c5, &[0, 1, 2, 3, 4]));
        assert!(is_retraction(&c5, &[3; 5]));
        assert!(is_retraction(&c5, &[0, 1, 1, 1, 0]));
        assert!(!is_retraction(&c5, &[0, 1, 1, 0, 0].map(|x| (x + 1) % 5)));
        assert!(!is_retraction(&c5, &[1, 1, 1, 1]));
        assert!(is_nonexpansive(&c5, &[0, 1, 1, 1, 0]));
    }

    #[test]
    fn search_examples() {
        let c5 = cycle(5).unwrap();
        let id = find_retraction_onto(&c5, &VertexSet::full(5), 100)
            .unwrap()
            .unwrap();
        assert_eq!(id, vec![0, 1, 2, 3, 4]);
        assert_eq!(
            find_retraction_onto(&c5, &set(5, &[2]), 100)
                .unwrap()
                .unwrap(),
            vec![2; 5]
        );
        let c6 = cycle(6).unwrap();
        let f = find_retraction_onto(&c6, &set(6, &[0, 1]), 100)
            .unwrap()
            .unwrap();
        assert!(is_retraction(&c6, &f));
        assert_eq!(image(&f), set(6, &[0, 1]));
        // A cycle does not retract onto itself minus a vertex's worth of path
        // when the path is longer than the rest.
        assert!(find_retraction_onto(&c6, &set(6, &[0, 1, 2, 3, 4]), 100)
            .unwrap()
            .is_none());
        assert!(find_retraction_bruteforce(&c6, &set(6, &[0, 1, 2, 3, 4]))
            .unwrap()
            .is_none());
    }

    #[test]
    fn budget_is_distinct_from_none() {
        let g = fixture("petersen").unwrap();
        // Petersen has no retraction onto a 5-cycle plus its neighbour.
        let h = set(10, &[0, 1, 2, 3, 4, 5]);
        let exact = find_retraction_onto(&g, &h, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(
            exact.is_some(),
            find_retraction_bruteforce(&g, &h).unwrap().is_some()
        );
        assert!(matches!(
            find_retraction_onto(&cycle(6).unwrap(), &set(6, &[0, 1]), 0),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn map_file_round_trip() {
        let f = vec![0, 1, 1, 1, 0];
        assert_eq!(parse_map(&map_to_text(&f), 5).unwrap(), f);
        assert!(parse_map("0 0\n1 1\n", 5).is_err());
        assert!(parse_map("0 0\n0 1\n", 2).is_err());
        assert!(parse_map("0 9\n", 1).is_err());
    }

    #[test]
    fn area_defense_catches_on_entry() {
        let c6 = cycle(6).unwrap();
        let f = find_retraction_onto(&c6, &set(6, &[0, 1]), 100)
            .unwrap()
            .unwrap();
        let rules = Rules {
            robber_places_first: true,
            ..Rules::with_max_rounds(200)
        };
        for seed in 0..20 {
            let mut cops = AreaDefenseCops::new(&c6, f.clone()).unwrap();
            let mut robber = RandomRobber::new(seed);
            let t = play(&c6, &mut cops, &mut robber, &rules);
            assert!(t.outcome.caught(), "{:?}", t.outcome);
        }
        assert!(AreaDefenseCops::new(&c6, vec![1, 0, 2, 3, 4, 5]).is_err());
    }
}
