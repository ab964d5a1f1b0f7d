//! Simple reference strategies.

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::error::{invalid, Result};
use crate::game::{CopStrategy, Position, RobberStrategy};
use crate::graph::{Graph, Vertex, UNREACHABLE};
use crate::rng::{rng_from_seed, Rng};

/// Multi-source BFS distances to the nearest of `sources`.
pub fn nearest_distances(g: &Graph, sources: &[Vertex]) -> Vec<u32> {
    let mut dist = vec![UNREACHABLE; g.n()];
    let mut queue = std::collections::VecDeque::new();
    for &s in sources {
        if dist[s] != 0 {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if dist[w] == UNREACHABLE {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// One step from `from` along a shortest path to the target whose BFS
/// distances are `dist`: the lowest-id neighbour that gets closer, or stay
/// if already there or unreachable.
pub fn step_towards(g: &Graph, dist: &[u32], from: Vertex) -> Vertex {
    if dist[from] == 0 || dist[from] == UNREACHABLE {
        return from;
    }
    g.neighbors(from)
        .iter()
        .copied()
        .find(|&w| dist[w] + 1 == dist[from])
        .unwrap_or(from)
}

/// `k` cops chasing along shortest paths.
///
/// Placement is farthest-first: the first cop takes a maximum-degree vertex,
/// each next one the vertex farthest from those already placed.
#[derive(Clone, Debug)]
pub struct GreedyCops {
    k: usize,
}

impl GreedyCops {
    pub fn new(k: usize) -> Self {
        Self { k }
    }
}

pub fn farthest_first(g: &Graph, k: usize) -> Vec<Vertex> {
    let mut out = Vec::with_capacity(k);
    if g.n() == 0 || k == 0 {
        return out;
    }
    let first = (0..g.n())
        .max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v)))
        .unwrap();
    out.push(first);
    while out.len() < k {
        let dist = nearest_distances(g, &out);
        let next = (0..g.n())
            .max_by_key(|&v| {
                (
                    dist[v] != UNREACHABLE,
                    dist[v].min(u32::MAX - 1),
                    std::cmp::Reverse(v),
                )
            })
            .unwrap();
        out.push(next);
    }
    out
}

impl CopStrategy for GreedyCops {
    fn name(&self) -> String {
        format!("greedy:k={}", self.k)
    }

    fn place(&mut self, g: &Graph, robber: Option<Vertex>) -> Result<Vec<Vertex>> {
        if self.k == 0 {
            return invalid("greedy cops need k >= 1");
        }
        Ok(match robber {
            Some(r) => {
                let mut v = farthest_first(g, self.k);
                v[0] = r;
                v
            }
            None => farthest_first(g, self.k),
        })
    }

    fn step(&mut self, g: &Graph, pos: &Position) -> Vec<Vertex> {
        let dist = g.bfs_distances(pos.robber.expect("placed"));
        pos.cops
            .iter()
            .map(|&c| step_towards(g, &dist, c))
            .collect()
    }
}

/// Uniform random placement away from the cops, then uniform steps over
/// the closed neighbourhood.
#[derive(Clone, Debug)]
pub struct RandomRobber {
    rng: Rng,
}

impl RandomRobber {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: rng_from_seed(seed),
        }
    }
}

impl RobberStrategy for RandomRobber {
    fn name(&self) -> String {
        "random".into()
    }

    fn place(&mut self, g: &Graph, cops: &[Vertex]) -> Vertex {
        let free: Vec<Vertex> = (0..g.n()).filter(|v| !cops.contains(v)).collect();
        match free.choose(&mut self.rng) {
            Some(&v) => v,
            None => self.rng.gen_range(0..g.n()),
        }
    }

    fn step(&mut self, g: &Graph, pos: &Position) -> Vertex {
        let options = g.closed_neighbors(pos.robber.expect("placed"));
        options[self.rng.gen_range(0..options.len())]
    }
}

/// Keeps as far from the cops as it can: prefers vertices no cop can reach
/// next move, then the largest distance to the nearest cop, then the lowest
/// id.
#[derive(Clone, Debug, Default)]
pub struct GreedyAvoidRobber;

impl RobberStrategy for GreedyAvoidRobber {
    fn name(&self) -> String {
        "greedy-avoid".into()
    }

    fn place(&mut self, g: &Graph, cops: &[Vertex]) -> Vertex {
        if cops.is_empty() {
            return 0;
        }
        let dist = nearest_distances(g, cops);
        (0..g.n())
            .max_by_key(|&v| (dist[v], std::cmp::Reverse(v)))
            .unwrap_or(0)
    }

    fn step(&mut self, g: &Graph, pos: &Position) -> Vertex {
        let dist = nearest_distances(g, &pos.cops);
        g.closed_neighbors(pos.robber.expect("placed"))
            .into_iter()
            .max_by_key(|&v| (dist[v] > 1, dist[v], std::cmp::Reverse(v)))
            .expect("closed neighbourhood is nonempty")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{play, Rules, ScriptedRobber};
    use crate::generators::fixture;

    #[test]
    fn greedy_cop_catches_on_trees() {
        for seed in 0..20 {
            let tree = fixture(&format!("tree:25,{seed}")).unwrap();
            let rules = Rules::for_graph(&tree);
            let t = play(
                &tree,
                &mut GreedyCops::new(1),
                &mut GreedyAvoidRobber,
                &rules,
            );
            assert!(t.outcome.caught());
            let t = play(
                &tree,
                &mut GreedyCops::new(1),
                &mut RandomRobber::new(seed),
                &rules,
            );
            assert!(t.outcome.caught());
        }
    }

    #[test]
    fn greedy_cop_never_catches_antipodal_robber_on_c4() {
        let c4 = fixture("cycle:4").unwrap();
        let t = play(
            &c4,
            &mut GreedyCops::new(1),
            &mut GreedyAvoidRobber,
            &Rules::with_max_rounds(200),
        );
        assert!(!t.outcome.caught());
    }

    #[test]
    fn placements() {
        let p5 = fixture("path:5").unwrap();
        assert_eq!(farthest_first(&p5, 2), vec![1, 4]);
        assert_eq!(GreedyAvoidRobber.place(&p5, &[0]), 4);
        let k1 = Graph::from_edges(1, []).unwrap();
        let mut random = RandomRobber::new(3);
        assert_eq!(random.place(&k1, &[0]), 0);
        let t = play(
            &p5,
            &mut GreedyCops::new(1),
            &mut ScriptedRobber::new(4, vec![]),
            &Rules::with_max_rounds(9),
        );
        assert_eq!(t.outcome.capture_round(), Some(3));
    }
}
