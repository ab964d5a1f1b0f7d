//! Immutable simple undirected graphs, vertex sets and distance queries.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::sync::OnceLock;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub type Vertex = usize;

/// Distance value for vertices in a different component.
pub const UNREACHABLE: u32 = u32::MAX;

/// Largest vertex count for which the all-pairs distance table is cached.
pub const APSP_CACHE_LIMIT: usize = 4096;

/// Membership bitmap over `0..universe`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexSet {
    members: Vec<bool>,
    len: usize,
}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        Self {
            members: vec![false; universe],
            len: 0,
        }
    }

    pub fn full(universe: usize) -> Self {
        Self {
            members: vec![true; universe],
            len: universe,
        }
    }

    pub fn from_vertices<I>(universe: usize, vertices: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vertex>,
    {
        let mut set = Self::empty(universe);
        for v in vertices {
            if v >= universe {
                return Err(Error::InvalidVertex {
                    vertex: v,
                    n: universe,
                });
            }
            set.insert(v);
        }
        Ok(set)
    }

    pub fn universe(&self) -> usize {
        self.members.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.members.get(v).copied().unwrap_or(false)
    }

    /// Panics if `v` is outside the universe.
    pub fn insert(&mut self, v: Vertex) -> bool {
        let fresh = !self.members[v];
        if fresh {
            self.members[v] = true;
            self.len += 1;
        }
        fresh
    }

    pub fn remove(&mut self, v: Vertex) -> bool {
        let present = self.contains(v);
        if present {
            self.members[v] = false;
            self.len -= 1;
        }
        present
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter_map(|(v, &m)| m.then_some(v))
    }

    pub fn to_vec(&self) -> Vec<Vertex> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn complement(&self) -> VertexSet {
        let members: Vec<bool> = self.members.iter().map(|m| !m).collect();
        let len = members.len() - self.len;
        VertexSet { members, len }
    }

    pub fn as_bools(&self) -> &[bool] {
        &self.members
    }
}

/// A finite simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<Vertex>>,
    edges: Vec<(Vertex, Vertex)>,
    component: Vec<usize>,
    component_count: usize,
    apsp: OnceLock<Option<Vec<u32>>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges and ids `>= n`.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut adj = vec![Vec::new(); n];
        let mut list = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::InvalidVertex { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop at vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter(format!(
                "duplicate edge ({}, {})",
                w[0].0, w[0].1
            )));
        }
        for nb in &mut adj {
            nb.sort_unstable();
        }
        let (component, component_count) = label_components(&adj);
        Ok(Self {
            n,
            adj,
            edges: list,
            component,
            component_count,
            apsp: OnceLock::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// `u == v` or `u ~ v`: the reflexive adjacency every move must respect.
    pub fn adjacent_or_equal(&self, u: Vertex, v: Vertex) -> bool {
        u == v || self.has_edge(u, v)
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                vertex: v,
                n: self.n,
            })
        }
    }

    pub fn is_connected(&self) -> bool {
        self.component_count <= 1
    }

    pub fn component_count(&self) -> usize {
        self.component_count
    }

    pub fn component_of(&self, v: Vertex) -> usize {
        self.component[v]
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Closed neighbourhood `N[v]`, sorted.
    pub fn closed_neighbors(&self, v: Vertex) -> Vec<Vertex> {
        let mut out = Vec::with_capacity(self.adj[v].len() + 1);
        out.extend_from_slice(&self.adj[v]);
        let at = out.binary_search(&v).unwrap_err();
        out.insert(at, v);
        out
    }

    pub fn bfs_distances(&self, source: Vertex) -> Vec<u32> {
        let mut dist = vec![UNREACHABLE; self.n];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == UNREACHABLE {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// All-pairs distances, row-major, built on first use; `None` above
    /// [`APSP_CACHE_LIMIT`] vertices.
    pub fn distance_matrix(&self) -> Option<&[u32]> {
        self.apsp
            .get_or_init(|| {
                (self.n <= APSP_CACHE_LIMIT).then(|| {
                    let mut table = Vec::with_capacity(self.n * self.n);
                    for v in 0..self.n {
                        table.extend(self.bfs_distances(v));
                    }
                    table
                })
            })
            .as_deref()
    }

    pub fn distance(&self, u: Vertex, v: Vertex) -> Option<u32> {
        let d = match self.distance_matrix() {
            Some(table) => table[u * self.n + v],
            None => self.bfs_distances(u)[v],
        };
        (d != UNREACHABLE).then_some(d)
    }

    pub fn eccentricity(&self, v: Vertex) -> u32 {
        self.bfs_distances(v)
            .into_iter()
            .filter(|&d| d != UNREACHABLE)
            .max()
            .unwrap_or(0)
    }

    /// `None` for disconnected graphs.
    pub fn diameter(&self) -> Option<u32> {
        if !self.is_connected() {
            return None;
        }
        Some((0..self.n).map(|v| self.eccentricity(v)).max().unwrap_or(0))
    }

    /// Vertices at distance at most `r` from `x`.
    pub fn ball(&self, x: Vertex, r: usize) -> Result<VertexSet> {
        self.check_vertex(x)?;
        let mut seed = VertexSet::empty(self.n);
        seed.insert(x);
        self.neighborhood(&seed, r)
    }

    /// `N(S, r)`: vertices at distance at most `r` from `s`.
    pub fn neighborhood(&self, s: &VertexSet, r: usize) -> Result<VertexSet> {
        if s.universe() != self.n {
            return Err(Error::InvalidParameter(format!(
                "vertex set over {} vertices used with a graph on {}",
                s.universe(),
                self.n
            )));
        }
        let mut out = s.clone();
        let mut frontier = s.to_vec();
        for _ in 0..r {
            let mut next = Vec::new();
            for u in frontier {
                for &w in &self.adj[u] {
                    if out.insert(w) {
                        next.push(w);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        Ok(out)
    }

    /// Length of a shortest cycle; `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let mut best = usize::MAX;
        let mut dist = vec![UNREACHABLE; self.n];
        let mut parent = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        for root in 0..self.n {
            dist.iter_mut().for_each(|d| *d = UNREACHABLE);
            dist[root] = 0;
            parent[root] = usize::MAX;
            queue.clear();
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                // Cycles through the root found deeper than this cannot improve.
                if 2 * dist[u] as usize >= best {
                    break;
                }
                for &w in &self.adj[u] {
                    if dist[w] == UNREACHABLE {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        best = best.min((dist[u] + dist[w] + 1) as usize);
                    }
                }
            }
        }
        (best != usize::MAX).then_some(best)
    }

    /// Maximal induced subgraph with minimum degree at least `d`, found by
    /// repeatedly deleting vertices of degree below `d`.
    pub fn min_degree_peel(&self, d: usize) -> VertexSet {
        let mut alive = VertexSet::full(self.n);
        let mut deg: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        let mut queue: Vec<Vertex> = (0..self.n).filter(|&v| deg[v] < d).collect();
        for &v in &queue {
            alive.remove(v);
        }
        while let Some(v) = queue.pop() {
            for &w in &self.adj[v] {
                if alive.contains(w) {
                    deg[w] -= 1;
                    if deg[w] < d {
                        alive.remove(w);
                        queue.push(w);
                    }
                }
            }
        }
        alive
    }

    /// Induced subgraph on `set`; returns the graph and the map from new ids
    /// to original ids.
    pub fn induced_subgraph(&self, set: &VertexSet) -> (Graph, Vec<Vertex>) {
        let old_ids = set.to_vec();
        let mut new_id = vec![usize::MAX; self.n];
        for (i, &v) in old_ids.iter().enumerate() {
            new_id[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| set.contains(u) && set.contains(v))
            .map(|&(u, v)| (new_id[u], new_id[v]));
        let g = Graph::from_edges(old_ids.len(), edges).expect("induced subgraph is simple");
        (g, old_ids)
    }

    pub fn edges_within(&self, set: &VertexSet) -> usize {
        self.edges
            .iter()
            .filter(|&&(u, v)| set.contains(u) && set.contains(v))
            .count()
    }

    /// Serializes to the text format: `n m`, then one `u v` line per edge.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(16 + 12 * self.edges.len());
        let _ = writeln!(out, "{} {}", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Parses the text format. Lines starting with `#` and blank lines are
    /// skipped.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing `n m` header".into(),
        })?;
        let (n, m) = parse_pair(hline, header)?;
        let mut edges = Vec::with_capacity(m);
        for (line, l) in lines {
            edges.push(parse_pair(line, l)?);
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: hline,
                msg: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Graph::from_edges(n, edges)
    }

    /// SHA-256 of the canonical text serialization, hex encoded.
    pub fn hash_hex(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }
}

fn parse_pair(line: usize, text: &str) -> Result<(usize, usize)> {
    let mut it = text.split_whitespace();
    let mut next = |what: &str| -> Result<usize> {
        it.next()
            .ok_or_else(|| Error::Parse {
                line,
                msg: format!("missing {what}"),
            })?
            .parse()
            .map_err(|e| Error::Parse {
                line,
                msg: format!("bad {what}: {e}"),
            })
    };
    let a = next("first field")?;
    let b = next("second field")?;
    if it.next().is_some() {
        return Err(Error::Parse {
            line,
            msg: "expected exactly two fields".into(),
        });
    }
    Ok((a, b))
}

fn label_components(adj: &[Vec<Vertex>]) -> (Vec<usize>, usize) {
    let mut comp = vec![usize::MAX; adj.len()];
    let mut count = 0;
    let mut stack = Vec::new();
    for s in 0..adj.len() {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = count;
        stack.push(s);
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if comp[w] == usize::MAX {
                    comp[w] = count;
                    stack.push(w);
                }
            }
        }
        count += 1;
    }
    (comp, count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::fixture;

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::from_edges(3, [(0, 0)]).is_err());
        assert!(Graph::from_edges(3, [(0, 1), (1, 0)]).is_err());
        assert!(matches!(
            Graph::from_edges(3, [(0, 3)]),
            Err(Error::InvalidVertex { vertex: 3, n: 3 })
        ));
    }

    #[test]
    fn balls_on_small_graphs() {
        let c6 = fixture("cycle:6").unwrap();
        assert_eq!(c6.ball(0, 0).unwrap().len(), 1);
        assert_eq!(c6.ball(0, 2).unwrap().len(), 5);
        let pet = fixture("petersen").unwrap();
        assert_eq!(pet.ball(0, 2).unwrap().len(), 10);
        assert!(c6.ball(6, 1).is_err());
    }

    #[test]
    fn neighborhoods() {
        let p5 = fixture("path:5").unwrap();
        let s = VertexSet::from_vertices(5, [2]).unwrap();
        assert_eq!(p5.neighborhood(&s, 0).unwrap(), s);
        assert_eq!(p5.neighborhood(&s, 1).unwrap().to_vec(), vec![1, 2, 3]);
        let pet = fixture("petersen").unwrap();
        let (u, v) = pet.edges()[0];
        let s = VertexSet::from_vertices(10, [u, v]).unwrap();
        assert_eq!(pet.neighborhood(&s, 1).unwrap().len(), 6);
    }

    #[test]
    fn girths() {
        assert_eq!(fixture("cycle:7").unwrap().girth(), Some(7));
        assert_eq!(fixture("path:6").unwrap().girth(), None);
        assert_eq!(fixture("petersen").unwrap().girth(), Some(5));
        assert_eq!(fixture("heawood").unwrap().girth(), Some(6));
        assert_eq!(fixture("complete:4").unwrap().girth(), Some(3));
        assert_eq!(fixture("hypercube:4").unwrap().girth(), Some(4));
    }

    #[test]
    fn peeling() {
        assert_eq!(fixture("petersen").unwrap().min_degree_peel(3).len(), 10);
        assert!(fixture("path:5").unwrap().min_degree_peel(2).is_empty());
        let c5_pendant =
            Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5)]).unwrap();
        assert_eq!(c5_pendant.min_degree_peel(2).to_vec(), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn text_format_round_trip_and_comments() {
        let text = "# a triangle\n3 3\n0 1\n# middle comment\n1 2\n\n0 2\n";
        let g = Graph::parse_text(text).unwrap();
        assert_eq!((g.n(), g.m()), (3, 3));
        assert_eq!(Graph::parse_text(&g.to_text()).unwrap(), g);
        assert!(Graph::parse_text("3 2\n0 1\n").is_err());
        assert!(Graph::parse_text("3 1\n0 x\n").is_err());
    }

    #[test]
    fn distances_with_and_without_cache() {
        let pet = fixture("petersen").unwrap();
        assert_eq!(pet.diameter(), Some(2));
        let two = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(two.distance(0, 3), None);
        assert_eq!(two.distance(2, 3), Some(1));
        assert!(!two.is_connected());
        assert_eq!(two.diameter(), None);
    }
}
