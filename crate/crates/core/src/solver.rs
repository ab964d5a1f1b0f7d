//! Exact cop numbers: dismantlability for one cop and retrograde analysis of
//! the full game graph for `k` cops.
//!
//! Cop positions are stored as sorted multisets, indexed with the
//! combinatorial number system, so a game state is `(multiset, robber, side)`.

use std::io::Write;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::game::{CopStrategy, Position, RobberStrategy};
use crate::graph::{Graph, Vertex};

pub const DEFAULT_STATE_BUDGET: u64 = 40_000_000;
pub const DEFAULT_TRANSITION_BUDGET: u64 = 150_000_000;

const UNLABELED: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverBudget {
    pub max_states: u64,
    /// Cap on stored cop-move transitions between multisets.
    pub max_transitions: u64,
}

impl Default for SolverBudget {
    fn default() -> Self {
        Self {
            max_states: DEFAULT_STATE_BUDGET,
            max_transitions: DEFAULT_TRANSITION_BUDGET,
        }
    }
}

impl SolverBudget {
    /// Defaults overridden by `COPS_STATE_BUDGET` and
    /// `COPS_TRANSITION_BUDGET` when set.
    pub fn from_env() -> Self {
        let read = |key: &str, default: u64| {
            std::env::var(key)
                .ok()
                .and_then(|v| v.trim().parse().ok())
                .unwrap_or(default)
        };
        Self {
            max_states: read("COPS_STATE_BUDGET", DEFAULT_STATE_BUDGET),
            max_transitions: read("COPS_TRANSITION_BUDGET", DEFAULT_TRANSITION_BUDGET),
        }
    }
}

fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n.saturating_sub(k));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Number of `k`-multisets over `n` vertices, `C(n+k-1, k)`.
pub fn multiset_count(n: usize, k: usize) -> Option<u64> {
    if n == 0 {
        return Some(u64::from(k == 0));
    }
    binomial((n + k - 1) as u64, k as u64)
}

/// Total game states `C(n+k-1, k) · n · 2`.
pub fn state_count(n: usize, k: usize) -> Option<u64> {
    multiset_count(n, k)?.checked_mul(n as u64)?.checked_mul(2)
}

/// Bijection between sorted `k`-multisets over `0..n` and `0..C(n+k-1,k)`.
///
/// A sorted multiset `c_0 ≤ … ≤ c_{k-1}` maps to the strictly increasing
/// `c_i + i`, ranked in colexicographic order.
#[derive(Clone, Debug)]
pub struct MultisetIndex {
    n: usize,
    k: usize,
    binom: Vec<Vec<u64>>,
    tuples: Vec<u32>,
}

impl MultisetIndex {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        let count = multiset_count(n, k)
            .filter(|&c| c <= u32::MAX as u64)
            .ok_or_else(|| {
                Error::BudgetExceeded(format!("too many {k}-multisets over {n} vertices"))
            })? as usize;
        let top = n + k;
        let mut binom = vec![vec![0u64; k + 2]; top + 1];
        for (a, row) in binom.iter_mut().enumerate() {
            for (b, cell) in row.iter_mut().enumerate() {
                *cell = binomial(a as u64, b as u64).unwrap_or(u64::MAX);
            }
        }
        let mut index = Self {
            n,
            k,
            binom,
            tuples: vec![0; count * k],
        };
        let mut cur = vec![0usize; k];
        index.fill(&mut cur, 0, 0);
        Ok(index)
    }

    fn fill(&mut self, cur: &mut [usize], pos: usize, lo: usize) {
        if pos == self.k {
            let id = self.rank(cur);
            for (slot, &v) in self.tuples[id * self.k..(id + 1) * self.k]
                .iter_mut()
                .zip(cur.iter())
            {
                *slot = v as u32;
            }
            return;
        }
        for v in lo..self.n {
            cur[pos] = v;
            self.fill(cur, pos + 1, v);
        }
    }

    pub fn len(&self) -> usize {
        if self.k == 0 {
            1
        } else {
            self.tuples.len() / self.k
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Rank of a sorted multiset.
    pub fn rank(&self, sorted: &[Vertex]) -> usize {
        debug_assert!(sorted.windows(2).all(|w| w[0] <= w[1]));
        sorted
            .iter()
            .enumerate()
            .map(|(i, &c)| self.binom[c + i][i + 1] as usize)
            .sum()
    }

    /// Rank of an arbitrary cop vector, sorting a copy.
    pub fn rank_unsorted(&self, cops: &[Vertex]) -> usize {
        let mut v = cops.to_vec();
        v.sort_unstable();
        self.rank(&v)
    }

    pub fn tuple(&self, id: usize) -> Vec<Vertex> {
        self.tuples[id * self.k..(id + 1) * self.k]
            .iter()
            .map(|&v| v as Vertex)
            .collect()
    }
}

/// Sorted closed neighbourhoods as bitsets, for domination tests.
fn closed_bitsets(g: &Graph) -> (usize, Vec<u64>) {
    let words = g.n().div_ceil(64).max(1);
    let mut bits = vec![0u64; g.n() * words];
    for v in 0..g.n() {
        for u in std::iter::once(v).chain(g.neighbors(v).iter().copied()) {
            bits[v * words + u / 64] |= 1 << (u % 64);
        }
    }
    (words, bits)
}

fn require_connected(g: &Graph) -> Result<()> {
    if g.n() == 0 {
        return Err(Error::InvalidParameter("graph has no vertices".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

/// Elimination order of a dismantlable graph: each listed vertex is
/// dominated (`N[u] ⊆ N[v]` for some other remaining `v`) when removed.
/// `None` if the removal gets stuck before one vertex is left.
pub fn dismantling_order(g: &Graph) -> Option<Vec<Vertex>> {
    let n = g.n();
    let (words, bits) = closed_bitsets(g);
    let mut alive = vec![0u64; words];
    for v in 0..n {
        alive[v / 64] |= 1 << (v % 64);
    }
    let row = |v: usize| &bits[v * words..(v + 1) * words];
    let mut order = Vec::new();
    let mut remaining = n;
    while remaining > 1 {
        let mut found = None;
        'outer: for u in 0..n {
            if alive[u / 64] >> (u % 64) & 1 == 0 {
                continue;
            }
            for &v in g.neighbors(u) {
                if alive[v / 64] >> (v % 64) & 1 == 0 {
                    continue;
                }
                let dominated = row(u)
                    .iter()
                    .zip(row(v))
                    .zip(&alive)
                    .all(|((&a, &b), &live)| a & live & !b == 0);
                if dominated {
                    found = Some(u);
                    break 'outer;
                }
            }
        }
        let u = found?;
        alive[u / 64] &= !(1 << (u % 64));
        order.push(u);
        remaining -= 1;
    }
    Some(order)
}

/// One cop wins iff the graph is dismantlable.
pub fn is_copwin(g: &Graph) -> Result<bool> {
    require_connected(g)?;
    Ok(dismantling_order(g).is_some())
}

/// The solved game for `k` cops.
///
/// `rank[s]` is the number of half-moves until capture under optimal play
/// from state `s`, or unlabeled if the robber escapes forever. States are
/// `(multiset · n + robber) · 2 + side` with side 0 = cops to move.
#[derive(Clone, Debug)]
pub struct SolvedGame {
    graph: Graph,
    index: MultisetIndex,
    rank: Vec<u32>,
}

impl SolvedGame {
    pub fn solve(g: &Graph, k: usize, budget: &SolverBudget) -> Result<Self> {
        require_connected(g)?;
        if k == 0 {
            return Err(Error::InvalidParameter("need at least one cop".into()));
        }
        let n = g.n();
        let states = state_count(n, k).unwrap_or(u64::MAX);
        if states > budget.max_states {
            return Err(Error::BudgetExceeded(format!(
                "{states} states for {k} cops on {n} vertices exceed the budget of {}",
                budget.max_states
            )));
        }
        let index = MultisetIndex::new(n, k)?;
        let multisets = index.len();

        // Distinct successor multisets of each multiset. Moves are symmetric,
        // so these are also its predecessors.
        let mut offsets = Vec::with_capacity(multisets + 1);
        offsets.push(0usize);
        let mut succ: Vec<u32> = Vec::new();
        let nbhds: Vec<Vec<Vertex>> = (0..n).map(|v| g.closed_neighbors(v)).collect();
        let mut scratch = Vec::new();
        let mut cur = vec![0; k];
        for m in 0..multisets {
            let cops = index.tuple(m);
            scratch.clear();
            for_each_product(&nbhds, &cops, &mut cur, 0, &mut |t| {
                scratch.push(index.rank_unsorted(t) as u32);
            });
            scratch.sort_unstable();
            scratch.dedup();
            succ.extend_from_slice(&scratch);
            if succ.len() as u64 > budget.max_transitions {
                return Err(Error::BudgetExceeded(format!(
                    "more than {} cop transitions for {k} cops on {n} vertices",
                    budget.max_transitions
                )));
            }
            offsets.push(succ.len());
        }

        let total = multisets * n * 2;
        let mut rank = vec![UNLABELED; total];
        let mut counter = vec![0u32; multisets * n];
        let mut queue = std::collections::VecDeque::new();
        for m in 0..multisets {
            let cops = index.tuple(m);
            for r in 0..n {
                let s = m * n + r;
                if cops.contains(&r) {
                    rank[2 * s] = 0;
                    rank[2 * s + 1] = 0;
                    queue.push_back(2 * s);
                    queue.push_back(2 * s + 1);
                } else {
                    counter[s] = nbhds[r].len() as u32;
                }
            }
        }
        while let Some(s) = queue.pop_front() {
            let next = rank[s] + 1;
            let (ms, side) = (s / 2, s % 2);
            let (m, r) = (ms / n, ms % n);
            if side == 0 {
                // Robber-to-move states that reach this one by a robber step.
                for &r2 in &nbhds[r] {
                    let t = m * n + r2;
                    if rank[2 * t + 1] != UNLABELED {
                        continue;
                    }
                    counter[t] -= 1;
                    if counter[t] == 0 {
                        rank[2 * t + 1] = next;
                        queue.push_back(2 * t + 1);
                    }
                }
            } else {
                for &m2 in &succ[offsets[m]..offsets[m + 1]] {
                    let t = 2 * (m2 as usize * n + r);
                    if rank[t] == UNLABELED {
                        rank[t] = next;
                        queue.push_back(t);
                    }
                }
            }
        }
        Ok(Self {
            graph: g.clone(),
            index,
            rank,
        })
    }

    pub fn k(&self) -> usize {
        self.index.k()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn state_count(&self) -> usize {
        self.rank.len()
    }

    fn state(&self, cops: &[Vertex], robber: Vertex, cops_to_move: bool) -> usize {
        let m = self.index.rank_unsorted(cops);
        2 * (m * self.graph.n() + robber) + usize::from(!cops_to_move)
    }

    /// Half-moves to capture under optimal play, `None` if the robber
    /// escapes forever.
    pub fn value(&self, cops: &[Vertex], robber: Vertex, cops_to_move: bool) -> Option<u32> {
        let r = self.rank[self.state(cops, robber, cops_to_move)];
        (r != UNLABELED).then_some(r)
    }

    /// Worst-case value of a placement, over all robber replies.
    fn placement_value(&self, m: usize) -> Option<u32> {
        let n = self.graph.n();
        let mut worst = 0;
        for r in 0..n {
            let v = self.rank[2 * (m * n + r)];
            if v == UNLABELED {
                return None;
            }
            worst = worst.max(v);
        }
        Some(worst)
    }

    /// The placement winning fastest against every robber placement, lowest
    /// index on ties; `None` if the robber wins.
    pub fn winning_placement(&self) -> Option<Vec<Vertex>> {
        (0..self.index.len())
            .filter_map(|m| self.placement_value(m).map(|v| (v, m)))
            .min()
            .map(|(_, m)| self.index.tuple(m))
    }

    pub fn cops_win(&self) -> bool {
        self.winning_placement().is_some()
    }

    /// Optimal cop move, returned in the given cop order. Among moves to
    /// winning states the fastest is taken; with none, the cops hold.
    pub fn best_cop_move(&self, cops: &[Vertex], robber: Vertex) -> Vec<Vertex> {
        let nbhds: Vec<Vec<Vertex>> = cops
            .iter()
            .map(|&c| self.graph.closed_neighbors(c))
            .collect();
        let mut best: Option<(u32, Vec<Vertex>)> = None;
        let mut cur = vec![0; cops.len()];
        for_each_choice(&nbhds, &mut cur, 0, &mut |t| {
            let v = self.rank[self.state(t, robber, false)];
            if v != UNLABELED && best.as_ref().is_none_or(|(b, _)| v < *b) {
                best = Some((v, t.to_vec()));
            }
        });
        best.map(|(_, t)| t).unwrap_or_else(|| cops.to_vec())
    }

    /// Optimal robber step: stay uncaught forever if possible, otherwise
    /// delay capture as long as possible. Lowest id on ties.
    pub fn best_robber_move(&self, cops: &[Vertex], robber: Vertex) -> Vertex {
        let key = |v: Vertex| {
            let r = self.rank[self.state(cops, v, true)];
            if r == UNLABELED {
                (u64::MAX, v)
            } else {
                (r as u64, v)
            }
        };
        self.graph
            .closed_neighbors(robber)
            .into_iter()
            .max_by(|&a, &b| {
                let (ka, kb) = (key(a), key(b));
                ka.0.cmp(&kb.0).then(kb.1.cmp(&ka.1))
            })
            .expect("closed neighbourhood is nonempty")
    }

    /// Robber placement against known cops, by the same preference.
    pub fn best_robber_placement(&self, cops: &[Vertex]) -> Vertex {
        (0..self.graph.n())
            .max_by(|&a, &b| {
                let val = |v: Vertex| match self.value(cops, v, true) {
                    None => u64::MAX,
                    Some(r) => r as u64,
                };
                val(a).cmp(&val(b)).then(b.cmp(&a))
            })
            .expect("graph is nonempty")
    }

    /// Writes one line per winning cops-to-move state:
    /// `c1,c2,… robber -> n1,n2,… value`.
    pub fn write_strategy_table<W: Write>(&self, mut out: W) -> Result<()> {
        let n = self.graph.n();
        writeln!(out, "# cop strategy table k={} n={}", self.k(), n)?;
        writeln!(out, "# cops robber -> next_cops half_moves_to_capture")?;
        let join = |v: &[Vertex]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        for m in 0..self.index.len() {
            let cops = self.index.tuple(m);
            for r in 0..n {
                let v = self.rank[2 * (m * n + r)];
                if v == UNLABELED || v == 0 {
                    continue;
                }
                let next = self.best_cop_move(&cops, r);
                writeln!(out, "{} {} -> {} {}", join(&cops), r, join(&next), v)?;
            }
        }
        Ok(())
    }
}

fn for_each_product<F: FnMut(&[Vertex])>(
    nbhds: &[Vec<Vertex>],
    cops: &[Vertex],
    cur: &mut [Vertex],
    pos: usize,
    f: &mut F,
) {
    if pos == cops.len() {
        f(cur);
        return;
    }
    for &v in &nbhds[cops[pos]] {
        cur[pos] = v;
        for_each_product(nbhds, cops, cur, pos + 1, f);
    }
}

fn for_each_choice<F: FnMut(&[Vertex])>(
    options: &[Vec<Vertex>],
    cur: &mut [Vertex],
    pos: usize,
    f: &mut F,
) {
    if pos == options.len() {
        f(cur);
        return;
    }
    for &v in &options[pos] {
        cur[pos] = v;
        for_each_choice(options, cur, pos + 1, f);
    }
}

pub fn k_cops_win(g: &Graph, k: usize, budget: &SolverBudget) -> Result<bool> {
    Ok(SolvedGame::solve(g, k, budget)?.cops_win())
}

/// Least `k ≤ k_max` such that `k` cops win; one cop is decided by
/// dismantlability.
pub fn cop_number_exact(g: &Graph, k_max: usize, budget: &SolverBudget) -> Result<usize> {
    Ok(cop_number_with_game(g, k_max, budget)?.0)
}

/// As [`cop_number_exact`], also returning the solved game for `k ≥ 2`.
pub fn cop_number_with_game(
    g: &Graph,
    k_max: usize,
    budget: &SolverBudget,
) -> Result<(usize, Option<SolvedGame>)> {
    if k_max == 0 {
        return Err(Error::InvalidParameter("k_max must be at least 1".into()));
    }
    if is_copwin(g)? {
        return Ok((1, None));
    }
    for k in 2..=k_max {
        let game = SolvedGame::solve(g, k, budget)?;
        if game.cops_win() {
            return Ok((k, Some(game)));
        }
    }
    Err(Error::BudgetExceeded(format!(
        "cop number exceeds k_max = {k_max}"
    )))
}

/// Cops playing the solved game: optimal placement, then always a fastest
/// move to a winning state.
#[derive(Clone, Debug)]
pub struct OptimalCops {
    game: Arc<SolvedGame>,
}

impl OptimalCops {
    pub fn new(game: Arc<SolvedGame>) -> Result<Self> {
        if !game.cops_win() {
            return Err(Error::InvalidParameter(format!(
                "{} cops do not have a winning strategy",
                game.k()
            )));
        }
        Ok(Self { game })
    }

    pub fn game(&self) -> &SolvedGame {
        &self.game
    }
}

pub fn extract_winning_cop_strategy(
    g: &Graph,
    k: usize,
    budget: &SolverBudget,
) -> Result<OptimalCops> {
    OptimalCops::new(Arc::new(SolvedGame::solve(g, k, budget)?))
}

impl CopStrategy for OptimalCops {
    fn name(&self) -> String {
        format!("optimal:k={}", self.game.k())
    }

    fn place(&mut self, _g: &Graph, robber: Option<Vertex>) -> Result<Vec<Vertex>> {
        match robber {
            Some(r) => Ok(vec![r; self.game.k()]),
            None => Ok(self
                .game
                .winning_placement()
                .expect("checked at construction")),
        }
    }

    fn step(&mut self, _g: &Graph, pos: &Position) -> Vec<Vertex> {
        self.game
            .best_cop_move(&pos.cops, pos.robber.expect("placed"))
    }
}

/// Robber playing the solved game against exactly `k` cops.
#[derive(Clone, Debug)]
pub struct OptimalRobber {
    game: Arc<SolvedGame>,
}

impl OptimalRobber {
    pub fn new(game: Arc<SolvedGame>) -> Self {
        Self { game }
    }
}

impl RobberStrategy for OptimalRobber {
    fn name(&self) -> String {
        format!("optimal:k={}", self.game.k())
    }

    fn place(&mut self, g: &Graph, cops: &[Vertex]) -> Vertex {
        if cops.is_empty() {
            return (0..g.n())
                .max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v)))
                .unwrap_or(0);
        }
        self.game.best_robber_placement(cops)
    }

    fn step(&mut self, _g: &Graph, pos: &Position) -> Vertex {
        self.game
            .best_robber_move(&pos.cops, pos.robber.expect("placed"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{play, Rules};
    use crate::generators::fixture;

    fn budget() -> SolverBudget {
        SolverBudget::default()
    }

    #[test]
    fn multiset_index_is_a_bijection() {
        for (n, k) in [(5, 1), (5, 3), (7, 2), (4, 4), (1, 3)] {
            let idx = MultisetIndex::new(n, k).unwrap();
            assert_eq!(idx.len() as u64, multiset_count(n, k).unwrap());
            for id in 0..idx.len() {
                let t = idx.tuple(id);
                assert!(t.windows(2).all(|w| w[0] <= w[1]));
                assert_eq!(idx.rank(&t), id);
            }
        }
        assert_eq!(state_count(14, 3), Some(560 * 14 * 2));
    }

    #[test]
    fn dismantling() {
        assert!(is_copwin(&fixture("tree:12,3").unwrap()).unwrap());
        assert!(is_copwin(&fixture("complete:5").unwrap()).unwrap());
        assert!(is_copwin(&fixture("wheel:6").unwrap()).unwrap());
        assert!(!is_copwin(&fixture("cycle:4").unwrap()).unwrap());
        assert!(!is_copwin(&fixture("petersen").unwrap()).unwrap());
        let two = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(matches!(is_copwin(&two), Err(Error::Disconnected)));
    }

    #[test]
    fn known_cop_numbers() {
        for name in ["path:10", "star:5", "complete:6", "tree:15,9"] {
            assert_eq!(
                cop_number_exact(&fixture(name).unwrap(), 3, &budget()).unwrap(),
                1,
                "{name}"
            );
        }
        for n in 4..=8 {
            let g = fixture(&format!("cycle:{n}")).unwrap();
            assert_eq!(cop_number_exact(&g, 3, &budget()).unwrap(), 2);
        }
        let pet = fixture("petersen").unwrap();
        assert!(!k_cops_win(&pet, 2, &budget()).unwrap());
        assert!(k_cops_win(&pet, 3, &budget()).unwrap());
        assert_eq!(
            cop_number_exact(&fixture("heawood").unwrap(), 4, &budget()).unwrap(),
            3
        );
        assert!(matches!(
            cop_number_exact(&pet, 2, &budget()),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn budget_is_enforced() {
        let tight = SolverBudget {
            max_states: 100,
            max_transitions: 100,
        };
        assert!(matches!(
            k_cops_win(&fixture("petersen").unwrap(), 2, &tight),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn extracted_strategy_captures() {
        let p3 = fixture("path:3").unwrap();
        let game = Arc::new(SolvedGame::solve(&p3, 1, &budget()).unwrap());
        let t = play(
            &p3,
            &mut OptimalCops::new(game.clone()).unwrap(),
            &mut OptimalRobber::new(game),
            &Rules::with_max_rounds(10),
        );
        assert!(t.outcome.capture_round().unwrap() <= 2);

        let c4 = fixture("cycle:4").unwrap();
        let game = Arc::new(SolvedGame::solve(&c4, 1, &budget()).unwrap());
        assert!(OptimalCops::new(game.clone()).is_err());
        let t = play(
            &c4,
            &mut crate::game::ScriptedCops::new(vec![0], vec![]),
            &mut OptimalRobber::new(game),
            &Rules::with_max_rounds(50),
        );
        assert!(!t.outcome.caught());

        let pet = fixture("petersen").unwrap();
        let game = Arc::new(SolvedGame::solve(&pet, 3, &budget()).unwrap());
        let t = play(
            &pet,
            &mut OptimalCops::new(game.clone()).unwrap(),
            &mut OptimalRobber::new(game.clone()),
            &Rules::with_max_rounds(100),
        );
        let bound = game
            .placement_value(game.index.rank(&game.winning_placement().unwrap()))
            .unwrap();
        assert!(t.outcome.caught());
        assert!(t.outcome.capture_round().unwrap() as u32 <= bound.div_ceil(2));
    }

    #[test]
    fn strategy_table_lists_moves() {
        let game = SolvedGame::solve(&fixture("cycle:4").unwrap(), 2, &budget()).unwrap();
        let mut buf = Vec::new();
        game.write_strategy_table(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().count() > 2);
        assert!(text.lines().skip(2).all(|l| l.contains(" -> ")));
    }
}
