//! The cops' Hall-matching trap.
//!
//! Cops stand on a random set `I`. Once the robber shows himself at `x`,
//! find the least `r` such that every `y ∈ B(x, r)` can be given its own cop
//! within distance `r + 1`. Every assigned cop walks to its `y` and waits;
//! a robber starting at `x` cannot leave `B(x, r)` in `r` moves, so he is
//! caught by the `(r + 1)`-th cop move.

use std::collections::VecDeque;

use rand::Rng as _;

use crate::error::{invalid, Error, Result};
use crate::game::{CopStrategy, Position, RobberStrategy};
use crate::graph::{Graph, Vertex, VertexSet, UNREACHABLE};
use crate::matching::saturating_matching;
use crate::rng::stream;

use super::baselines::step_towards;

pub const HALL_RESAMPLE_BUDGET: usize = 10_000;

/// Includes each vertex independently with probability `min(1, c/(2n))` and
/// resamples while more than `c` vertices were drawn.
pub fn hall_place(g: &Graph, c: usize, seed: u64) -> Result<VertexSet> {
    if c == 0 {
        return invalid("hall placement needs c >= 1");
    }
    let n = g.n();
    let p = (c as f64 / (2.0 * n as f64)).min(1.0);
    for attempt in 0..HALL_RESAMPLE_BUDGET {
        let mut rng = stream(seed, "hall", attempt as u64);
        let mut set = VertexSet::empty(n);
        for v in 0..n {
            if rng.gen_bool(p) {
                set.insert(v);
            }
        }
        if set.len() <= c {
            return Ok(set);
        }
    }
    Err(Error::BudgetExceeded(format!(
        "hall placement drew more than {c} cops {HALL_RESAMPLE_BUDGET} times"
    )))
}

/// BFS distances from `source`, stopping at depth `limit`.
fn bounded_bfs(g: &Graph, source: Vertex, limit: u32) -> Vec<(Vertex, u32)> {
    let mut seen = std::collections::HashMap::new();
    seen.insert(source, 0u32);
    let mut out = vec![(source, 0)];
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let du = seen[&u];
        if du == limit {
            continue;
        }
        for &w in g.neighbors(u) {
            if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(w) {
                e.insert(du + 1);
                out.push((w, du + 1));
                queue.push_back(w);
            }
        }
    }
    out
}

/// For each ball vertex, the cops (indices into `cops`) within `r + 1`.
fn candidate_cops(g: &Graph, cops: &[Vertex], ball: &[Vertex], r: usize) -> Vec<Vec<usize>> {
    let mut cop_index = vec![usize::MAX; g.n()];
    for (i, &c) in cops.iter().enumerate() {
        cop_index[c] = i;
    }
    ball.iter()
        .map(|&y| {
            let mut near: Vec<usize> = bounded_bfs(g, y, r as u32 + 1)
                .into_iter()
                .filter_map(|(v, _)| (cop_index[v] != usize::MAX).then_some(cop_index[v]))
                .collect();
            near.sort_unstable();
            near
        })
        .collect()
}

/// Hall's condition for `B(x, r)` against the cops `I`, decided by
/// bipartite matching. Returns the ball and the cop assigned to each ball
/// vertex.
pub fn hall_matching(
    g: &Graph,
    cops: &VertexSet,
    x: Vertex,
    r: usize,
) -> Result<Option<Vec<(Vertex, Vertex)>>> {
    g.check_vertex(x)?;
    let ball: Vec<Vertex> = g.ball(x, r)?.to_vec();
    let cop_list = cops.to_vec();
    if ball.len() > cop_list.len() {
        return Ok(None);
    }
    let near = candidate_cops(g, &cop_list, &ball, r);
    Ok(saturating_matching(&near, cop_list.len())
        .map(|m| ball.iter().zip(m).map(|(&y, c)| (y, cop_list[c])).collect()))
}

/// Hall's condition checked literally: `|I ∩ N(S, r+1)| ≥ |S|` for every
/// nonempty `S ⊆ B(x, r)`. Exponential; for cross-checking on small balls.
pub fn hall_condition_bruteforce(g: &Graph, cops: &VertexSet, x: Vertex, r: usize) -> Result<bool> {
    let ball: Vec<Vertex> = g.ball(x, r)?.to_vec();
    if ball.len() > 24 {
        return invalid(format!(
            "ball of {} vertices is too large for subset enumeration",
            ball.len()
        ));
    }
    let cop_list = cops.to_vec();
    let near = candidate_cops(g, &cop_list, &ball, r);
    let masks: Vec<u64> = near
        .iter()
        .map(|cs| cs.iter().fold(0u64, |m, &c| m | 1 << (c % 64)))
        .collect();
    if cop_list.len() > 64 {
        // Masks would alias; fall back to explicit sets.
        for s in 1u32..(1 << ball.len()) {
            let mut hit = std::collections::BTreeSet::new();
            for (i, cs) in near.iter().enumerate() {
                if s >> i & 1 == 1 {
                    hit.extend(cs.iter().copied());
                }
            }
            if hit.len() < s.count_ones() as usize {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    for s in 1u32..(1 << ball.len()) {
        let mut hit = 0u64;
        for (i, &m) in masks.iter().enumerate() {
            if s >> i & 1 == 1 {
                hit |= m;
            }
        }
        if hit.count_ones() < s.count_ones() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrapPlan {
    pub anchor: Vertex,
    pub radius: usize,
    /// `(y, cop vertex)` pairs; distinct cops.
    pub assignment: Vec<(Vertex, Vertex)>,
    /// Shortest path from each assigned cop to its `y`, in assignment order.
    pub paths: Vec<Vec<Vertex>>,
}

impl TrapPlan {
    /// Capture is guaranteed by this cop move.
    pub fn deadline(&self) -> usize {
        self.radius + 1
    }

    /// Cop vertices after each of the first `radius + 1` cop moves, given
    /// the cops start on `cops` (in that order). Entry 0 is the start.
    pub fn schedule(&self, cops: &[Vertex]) -> Vec<Vec<Vertex>> {
        let mut out = vec![cops.to_vec()];
        let mut cur = cops.to_vec();
        let mut slot_of = vec![None; cops.len()];
        let mut used = vec![false; cops.len()];
        for (p, &(_, c)) in self.assignment.iter().enumerate() {
            if let Some(i) = (0..cops.len()).find(|&i| !used[i] && cops[i] == c) {
                used[i] = true;
                slot_of[i] = Some(p);
            }
        }
        for t in 1..=self.deadline() {
            for (i, slot) in slot_of.iter().enumerate() {
                if let Some(p) = slot {
                    let path = &self.paths[*p];
                    cur[i] = path[t.min(path.len() - 1)];
                }
            }
            out.push(cur.clone());
        }
        out
    }
}

fn shortest_path(g: &Graph, from: Vertex, to: Vertex) -> Vec<Vertex> {
    let dist = g.bfs_distances(to);
    let mut path = vec![from];
    let mut cur = from;
    while cur != to && dist[cur] != UNREACHABLE {
        cur = step_towards(g, &dist, cur);
        path.push(cur);
    }
    path
}

/// Least `r` (up to the diameter) for which [`hall_matching`] succeeds.
pub fn min_trap_radius(g: &Graph, cops: &VertexSet, x: Vertex) -> Result<Option<usize>> {
    Ok(trap_plan(g, cops, x)?.map(|p| p.radius))
}

/// The plan for the least trap radius, with shortest paths for the cops.
pub fn trap_plan(g: &Graph, cops: &VertexSet, x: Vertex) -> Result<Option<TrapPlan>> {
    if cops.universe() != g.n() {
        return invalid("cop set does not match the graph");
    }
    if cops.is_empty() {
        return invalid("trap needs at least one cop");
    }
    g.check_vertex(x)?;
    let limit = match g.diameter() {
        Some(d) => d as usize,
        None => g.n().saturating_sub(1),
    };
    for r in 0..=limit {
        if let Some(assignment) = hall_matching(g, cops, x, r)? {
            let paths = assignment
                .iter()
                .map(|&(y, c)| shortest_path(g, c, y))
                .collect();
            return Ok(Some(TrapPlan {
                anchor: x,
                radius: r,
                assignment,
                paths,
            }));
        }
    }
    Ok(None)
}

/// Cops on a fixed set that spring the trap around wherever the robber
/// appears. Without a valid plan they chase greedily instead.
#[derive(Clone, Debug)]
pub struct TrapCops {
    set: VertexSet,
    plan: Option<TrapPlan>,
    schedule: Vec<Vec<Vertex>>,
    started: bool,
    notes: Vec<String>,
}

impl TrapCops {
    pub fn new(set: VertexSet) -> Self {
        Self {
            set,
            plan: None,
            schedule: Vec::new(),
            started: false,
            notes: Vec::new(),
        }
    }

    pub fn plan(&self) -> Option<&TrapPlan> {
        self.plan.as_ref()
    }
}

/// Cops executing a given plan from the set `cops`.
pub fn execute_trap(g: &Graph, cops: &VertexSet, plan: TrapPlan) -> Result<TrapCops> {
    g.check_vertex(plan.anchor)?;
    for (p, &(y, c)) in plan.assignment.iter().enumerate() {
        let path = &plan.paths[p];
        let valid = cops.contains(c)
            && path.first() == Some(&c)
            && path.last() == Some(&y)
            && path.len() <= plan.radius + 2
            && path.windows(2).all(|w| g.has_edge(w[0], w[1]));
        if !valid {
            return invalid(format!("plan path for cop at {c} does not fit the graph"));
        }
    }
    let mut t = TrapCops::new(cops.clone());
    t.schedule = plan.schedule(&cops.to_vec());
    t.plan = Some(plan);
    Ok(t)
}

impl CopStrategy for TrapCops {
    fn name(&self) -> String {
        format!("trap:|I|={}", self.set.len())
    }

    fn place(&mut self, _g: &Graph, _robber: Option<Vertex>) -> Result<Vec<Vertex>> {
        if self.set.is_empty() {
            return invalid("trap needs at least one cop");
        }
        Ok(self.set.to_vec())
    }

    fn step(&mut self, g: &Graph, pos: &Position) -> Vec<Vertex> {
        let robber = pos.robber.expect("placed");
        if !self.started {
            self.started = true;
            if self.plan.is_none() {
                match trap_plan(g, &self.set, robber) {
                    Ok(Some(plan)) => {
                        self.notes.push(format!(
                            "trap anchored at {} with radius {}, deadline round {}",
                            plan.anchor,
                            plan.radius,
                            pos.round + plan.radius
                        ));
                        self.schedule = plan.schedule(&pos.cops);
                        self.plan = Some(plan);
                    }
                    Ok(None) => self.notes.push(format!(
                        "no trap radius for robber at {robber}; chasing greedily"
                    )),
                    Err(e) => self
                        .notes
                        .push(format!("trap planning failed: {e}; chasing greedily")),
                }
            }
            self.schedule.drain(..self.schedule.len().min(1));
        }
        if !self.schedule.is_empty() {
            return self.schedule.remove(0);
        }
        if self.plan.is_some() {
            return pos.cops.clone();
        }
        let dist = g.bfs_distances(robber);
        pos.cops
            .iter()
            .map(|&c| step_towards(g, &dist, c))
            .collect()
    }

    fn take_notes(&mut self) -> Vec<String> {
        std::mem::take(&mut self.notes)
    }
}

/// `hall_place` followed by the trap.
#[derive(Clone, Debug)]
pub struct HallCops {
    c: usize,
    seed: u64,
    inner: Option<TrapCops>,
}

impl HallCops {
    pub fn new(c: usize, seed: u64) -> Self {
        Self {
            c,
            seed,
            inner: None,
        }
    }

    pub fn trap(&self) -> Option<&TrapCops> {
        self.inner.as_ref()
    }
}

impl CopStrategy for HallCops {
    fn name(&self) -> String {
        format!("hall:c={},seed={}", self.c, self.seed)
    }

    fn place(&mut self, g: &Graph, robber: Option<Vertex>) -> Result<Vec<Vertex>> {
        let set = hall_place(g, self.c, self.seed)?;
        if set.is_empty() {
            return invalid("hall placement drew no cops");
        }
        let mut inner = TrapCops::new(set);
        let out = inner.place(g, robber)?;
        self.inner = Some(inner);
        Ok(out)
    }

    fn step(&mut self, g: &Graph, pos: &Position) -> Vec<Vertex> {
        self.inner.as_mut().expect("placed").step(g, pos)
    }

    fn take_notes(&mut self) -> Vec<String> {
        self.inner
            .as_mut()
            .map(|t| t.take_notes())
            .unwrap_or_default()
    }
}

/// Capture round for each vertex the robber could be on after `t` rounds,
/// against cops that follow `schedule` (entry 0 the placement, entry `t`
/// after the `t`-th cop move) and then hold. `None` means he survives the
/// schedule.
fn survival_table(g: &Graph, schedule: &[Vec<Vertex>]) -> Vec<Vec<Option<usize>>> {
    let n = g.n();
    let horizon = schedule.len() - 1;
    let occupied = |t: usize, v: Vertex| schedule[t].contains(&v);
    let mut table = vec![vec![None; n]; horizon + 1];
    for t in (0..horizon).rev() {
        for v in 0..n {
            table[t][v] = if occupied(t + 1, v) {
                Some(t + 1)
            } else {
                // Best reply: escape entirely, else the latest capture.
                let mut best = Some(t + 1);
                for u in g.closed_neighbors(v) {
                    let value = if occupied(t + 1, u) {
                        Some(t + 1)
                    } else {
                        table[t + 1][u]
                    };
                    best = match (best, value) {
                        (None, _) | (_, None) => None,
                        (Some(a), Some(b)) => Some(a.max(b)),
                    };
                }
                best
            };
        }
    }
    table
}

/// The best robber against a trap: he knows the cop set and plans against
/// the trap schedule each anchor would produce. Against this open-loop
/// strategy that is optimal play.
#[derive(Clone, Debug)]
pub struct ScheduleRobber {
    set: VertexSet,
    table: Vec<Vec<Option<usize>>>,
}

impl ScheduleRobber {
    pub fn new(set: VertexSet) -> Self {
        Self {
            set,
            table: Vec::new(),
        }
    }

    fn schedule_for(&self, g: &Graph, x: Vertex) -> Option<Vec<Vec<Vertex>>> {
        let plan = trap_plan(g, &self.set, x).ok()??;
        Some(plan.schedule(&self.set.to_vec()))
    }
}

impl RobberStrategy for ScheduleRobber {
    fn name(&self) -> String {
        "schedule-optimal".into()
    }

    fn place(&mut self, g: &Graph, cops: &[Vertex]) -> Vertex {
        let mut best: Option<(usize, Vertex, Vec<Vec<Option<usize>>>)> = None;
        for x in 0..g.n() {
            if cops.contains(&x) {
                continue;
            }
            let Some(schedule) = self.schedule_for(g, x) else {
                // No plan from here; the trap never springs.
                self.table.clear();
                return x;
            };
            let table = survival_table(g, &schedule);
            let value = table[0][x].unwrap_or(usize::MAX);
            if best.as_ref().is_none_or(|(b, _, _)| value > *b) {
                best = Some((value, x, table));
            }
        }
        match best {
            Some((_, x, table)) => {
                self.table = table;
                x
            }
            None => 0,
        }
    }

    fn step(&mut self, g: &Graph, pos: &Position) -> Vertex {
        let x = pos.robber.expect("placed");
        let t = pos.round;
        let Some(row) = self.table.get(t) else {
            return x;
        };
        g.closed_neighbors(x)
            .into_iter()
            .filter(|u| !pos.cops.contains(u))
            .max_by_key(|&u| (row[u].unwrap_or(usize::MAX), std::cmp::Reverse(u)))
            .unwrap_or(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{play, Rules};
    use crate::generators::{fixture, gen_gnp, GnpParams};
    use crate::strategies::baselines::{GreedyAvoidRobber, RandomRobber};

    fn set(n: usize, v: &[Vertex]) -> VertexSet {
        VertexSet::from_vertices(n, v.iter().copied()).unwrap()
    }

    #[test]
    fn placement_statistics() {
        let g = Graph::from_edges(1000, []).unwrap();
        let sizes: Vec<usize> = (0..100)
            .map(|s| hall_place(&g, 200, s).unwrap().len())
            .collect();
        for &s in &sizes {
            assert!(s <= 200);
            // Binomial(1000, 0.1): sd ≈ 9.49.
            assert!((s as f64 - 100.0).abs() <= 4.0 * 9.49, "{s}");
        }
        assert_eq!(
            hall_place(&g, 200, 5).unwrap(),
            hall_place(&g, 200, 5).unwrap()
        );
        let small = fixture("cycle:5").unwrap();
        assert_eq!(hall_place(&small, 10, 1).unwrap().len(), 5);
        assert!(hall_place(&small, 0, 1).is_err());
    }

    #[test]
    fn trap_radius_examples() {
        let star = fixture("star:6").unwrap();
        for x in 0..7 {
            assert_eq!(min_trap_radius(&star, &set(7, &[0]), x).unwrap(), Some(0));
        }
        let c6 = fixture("cycle:6").unwrap();
        for x in 0..6 {
            assert_eq!(min_trap_radius(&c6, &set(6, &[0, 3]), x).unwrap(), Some(0));
            assert_eq!(
                min_trap_radius(&c6, &VertexSet::full(6), x).unwrap(),
                Some(0)
            );
        }
        // A lone cop on a long path cannot cover a ball of three vertices.
        let p9 = fixture("path:9").unwrap();
        assert_eq!(min_trap_radius(&p9, &set(9, &[0]), 8).unwrap(), None);
        assert_eq!(min_trap_radius(&p9, &set(9, &[0]), 1).unwrap(), Some(0));
    }

    #[test]
    fn matching_agrees_with_bruteforce() {
        for seed in 0..30 {
            let g = gen_gnp(GnpParams {
                n: 11,
                p: 0.3,
                seed,
            })
            .unwrap();
            let cops = hall_place(&g, 6, seed).unwrap();
            if cops.is_empty() {
                continue;
            }
            for x in 0..g.n() {
                for r in 0..3 {
                    let fast = hall_matching(&g, &cops, x, r).unwrap().is_some();
                    assert_eq!(fast, hall_condition_bruteforce(&g, &cops, x, r).unwrap());
                }
            }
        }
    }

    #[test]
    fn trap_captures_by_deadline() {
        let mut checked = 0;
        for seed in 0..40 {
            let g = gen_gnp(GnpParams {
                n: 60,
                p: 0.08,
                seed,
            })
            .unwrap();
            let cops = hall_place(&g, 40, seed).unwrap();
            if cops.is_empty() {
                continue;
            }
            let robbers: Vec<Box<dyn RobberStrategy>> = vec![
                Box::new(RandomRobber::new(seed)),
                Box::new(GreedyAvoidRobber),
                Box::new(ScheduleRobber::new(cops.clone())),
            ];
            for mut robber in robbers {
                let mut trap = TrapCops::new(cops.clone());
                let t = play(&g, &mut trap, &mut robber, &Rules::with_max_rounds(200));
                if let Some(plan) = trap.plan() {
                    checked += 1;
                    let round = t.outcome.capture_round().expect("trap must capture");
                    assert!(
                        round <= plan.deadline(),
                        "seed {seed}: {round} > {}",
                        plan.deadline()
                    );
                }
            }
        }
        assert!(checked > 30);
    }

    #[test]
    fn plan_validation() {
        let star = fixture("star:4").unwrap();
        let cops = set(5, &[0]);
        let plan = trap_plan(&star, &cops, 3).unwrap().unwrap();
        assert_eq!(plan.radius, 0);
        let mut trap = execute_trap(&star, &cops, plan.clone()).unwrap();
        let t = play(
            &star,
            &mut trap,
            &mut crate::game::ScriptedRobber::new(3, vec![]),
            &Rules::with_max_rounds(5),
        );
        assert_eq!(t.outcome.capture_round(), Some(1));
        let mut bad = plan;
        bad.paths[0] = vec![0, 1, 2];
        assert!(execute_trap(&star, &cops, bad).is_err());
    }
}
