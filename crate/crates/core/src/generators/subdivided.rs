//! Hypercubes with every edge replaced by a path of "short" or "long" length.

use std::fmt::Write as _;

use rand::Rng as _;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, Vertex};
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum EdgeLabel {
    Short,
    Long,
}

impl EdgeLabel {
    fn code(self) -> char {
        match self {
            EdgeLabel::Short => 'S',
            EdgeLabel::Long => 'L',
        }
    }
}

/// Edge of `Q_d` between `lo` and `hi = lo | 1 << coord`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CubeEdge {
    pub lo: usize,
    pub hi: usize,
    pub coord: usize,
}

/// Edges of `Q_d` ordered by `(lo, coord)`.
pub fn cube_edges(d: usize) -> Vec<CubeEdge> {
    (0..1usize << d)
        .flat_map(|lo| {
            (0..d)
                .filter(move |c| lo & (1 << c) == 0)
                .map(move |coord| CubeEdge {
                    lo,
                    hi: lo | (1 << coord),
                    coord,
                })
        })
        .collect()
}

/// A short edge gets `s + extra` new vertices, a long one `l + extra`, with
/// `extra` in `0..=2`. Cube vertex `v` is graph vertex `v`; internal path
/// vertices follow edge by edge in [`cube_edges`] order.
#[derive(Clone, Debug)]
pub struct SubdividedHypercube {
    pub d: usize,
    pub s: usize,
    pub l: usize,
    pub cube_edges: Vec<CubeEdge>,
    pub labels: Vec<EdgeLabel>,
    pub extras: Vec<u8>,
    graph: Graph,
    cube_vertex_map: Vec<Vertex>,
    path_map: Vec<Vec<Vertex>>,
    owner: Vec<Option<usize>>,
}

impl SubdividedHypercube {
    pub fn from_parts(
        d: usize,
        s: usize,
        l: usize,
        labels: Vec<EdgeLabel>,
        extras: Vec<u8>,
    ) -> Result<Self> {
        if !(1..=super::MAX_HYPERCUBE_DIM).contains(&d) {
            return invalid(format!("cube dimension {d} out of range"));
        }
        if s < 1 || l <= s {
            return invalid(format!("need l > s >= 1, got s = {s}, l = {l}"));
        }
        let edges = cube_edges(d);
        if labels.len() != edges.len() || extras.len() != edges.len() {
            return invalid(format!(
                "Q_{d} has {} edges; got {} labels and {} extras",
                edges.len(),
                labels.len(),
                extras.len()
            ));
        }
        if let Some(x) = extras.iter().find(|&&x| x > 2) {
            return invalid(format!("extra count {x} outside 0..=2"));
        }
        let cube_n = 1usize << d;
        let mut next = cube_n;
        let mut graph_edges = Vec::new();
        let mut path_map = Vec::with_capacity(edges.len());
        let mut owner = vec![None; cube_n];
        for (i, e) in edges.iter().enumerate() {
            let base = match labels[i] {
                EdgeLabel::Short => s,
                EdgeLabel::Long => l,
            };
            let added = base + extras[i] as usize;
            let mut path = Vec::with_capacity(added + 2);
            path.push(e.lo);
            for _ in 0..added {
                path.push(next);
                owner.push(Some(i));
                next += 1;
            }
            path.push(e.hi);
            graph_edges.extend(path.windows(2).map(|w| (w[0], w[1])));
            path_map.push(path);
        }
        let graph = Graph::from_edges(next, graph_edges)?;
        Ok(Self {
            d,
            s,
            l,
            cube_edges: edges,
            labels,
            extras,
            graph,
            cube_vertex_map: (0..cube_n).collect(),
            path_map,
            owner,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn cube_vertex(&self, v: usize) -> Vertex {
        self.cube_vertex_map[v]
    }

    pub fn cube_vertex_count(&self) -> usize {
        1 << self.d
    }

    /// Full vertex path of cube edge `e`, from `lo` to `hi` inclusive.
    pub fn path(&self, e: usize) -> &[Vertex] {
        &self.path_map[e]
    }

    /// Number of graph edges on the path replacing cube edge `e`.
    pub fn edge_length(&self, e: usize) -> usize {
        self.path_map[e].len() - 1
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let (lo, hi) = (u.min(v), u.max(v));
        let diff = lo ^ hi;
        if hi >= self.cube_vertex_count() || diff.count_ones() != 1 || lo & diff != 0 {
            return None;
        }
        self.cube_edges
            .binary_search_by(|e| (e.lo, e.coord).cmp(&(lo, diff.trailing_zeros() as usize)))
            .ok()
    }

    /// The cube edge whose interior contains graph vertex `v`; `None` for
    /// cube vertices.
    pub fn interior_owner(&self, v: Vertex) -> Option<usize> {
        self.owner.get(v).copied().flatten()
    }

    pub fn is_cube_vertex(&self, v: Vertex) -> bool {
        v < self.cube_vertex_count()
    }

    pub fn label_counts(&self) -> (usize, usize) {
        let long = self
            .labels
            .iter()
            .filter(|&&l| l == EdgeLabel::Long)
            .count();
        (self.labels.len() - long, long)
    }

    /// Sidecar text describing the structure next to a graph file.
    ///
    /// ```text
    /// # subdivided-hypercube v1
    /// d = 2
    /// s = 3
    /// l = 12
    /// cube_vertices = 0 1 2 3
    /// edge = <lo> <hi> <S|L> <extra> <path vertex ids...>
    /// ```
    pub fn to_sidecar(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# subdivided-hypercube v1");
        let _ = writeln!(out, "d = {}", self.d);
        let _ = writeln!(out, "s = {}", self.s);
        let _ = writeln!(out, "l = {}", self.l);
        let cube: Vec<String> = self.cube_vertex_map.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "cube_vertices = {}", cube.join(" "));
        for (i, e) in self.cube_edges.iter().enumerate() {
            let path: Vec<String> = self.path_map[i].iter().map(|v| v.to_string()).collect();
            let _ = writeln!(
                out,
                "edge = {} {} {} {} {}",
                e.lo,
                e.hi,
                self.labels[i].code(),
                self.extras[i],
                path.join(" ")
            );
        }
        out
    }

    /// Rebuilds from a sidecar and checks that the recorded maps match.
    pub fn from_sidecar(text: &str) -> Result<Self> {
        let mut d = None;
        let mut s = None;
        let mut l = None;
        let mut labels = Vec::new();
        let mut extras = Vec::new();
        let mut paths = Vec::new();
        let bad = |line: usize, msg: &str| Error::Parse {
            line,
            msg: msg.to_string(),
        };
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let raw = raw.trim();
            if raw.is_empty() || raw.starts_with('#') {
                continue;
            }
            let (key, value) = raw
                .split_once('=')
                .ok_or_else(|| bad(line, "expected `key = value`"))?;
            let nums = |v: &str| -> Result<Vec<usize>> {
                v.split_whitespace()
                    .map(|t| t.parse().map_err(|_| bad(line, "expected an integer")))
                    .collect()
            };
            match key.trim() {
                "d" => {
                    d = Some(
                        nums(value)?
                            .first()
                            .copied()
                            .ok_or_else(|| bad(line, "empty d"))?,
                    )
                }
                "s" => {
                    s = Some(
                        nums(value)?
                            .first()
                            .copied()
                            .ok_or_else(|| bad(line, "empty s"))?,
                    )
                }
                "l" => {
                    l = Some(
                        nums(value)?
                            .first()
                            .copied()
                            .ok_or_else(|| bad(line, "empty l"))?,
                    )
                }
                "cube_vertices" => {}
                "edge" => {
                    let fields: Vec<&str> = value.split_whitespace().collect();
                    if fields.len() < 6 {
                        return Err(bad(line, "edge needs lo hi label extra and a path"));
                    }
                    labels.push(match fields[2] {
                        "S" => EdgeLabel::Short,
                        "L" => EdgeLabel::Long,
                        _ => return Err(bad(line, "label must be S or L")),
                    });
                    extras.push(fields[3].parse().map_err(|_| bad(line, "bad extra"))?);
                    paths.push(nums(&fields[4..].join(" "))?);
                }
                _ => return Err(bad(line, "unknown key")),
            }
        }
        let (d, s, l) = match (d, s, l) {
            (Some(d), Some(s), Some(l)) => (d, s, l),
            _ => return Err(bad(1, "missing d, s or l")),
        };
        let built = Self::from_parts(d, s, l, labels, extras)?;
        if built.path_map != paths {
            return invalid("sidecar paths disagree with the construction rule");
        }
        Ok(built)
    }
}

/// Random labels (each edge long with probability 1/2) from the stream
/// `derive_seed(seed, "subdivide", 0)`, no extras.
pub fn gen_subdivided_hypercube(
    d: usize,
    s: usize,
    l: usize,
    seed: u64,
) -> Result<SubdividedHypercube> {
    if !(1..=super::MAX_HYPERCUBE_DIM).contains(&d) {
        return invalid(format!("cube dimension {d} out of range"));
    }
    let count = d << (d - 1);
    let labels = random_labels(count, &mut rng::stream(seed, "subdivide", 0));
    SubdividedHypercube::from_parts(d, s, l, labels, vec![0; count])
}

fn random_labels(count: usize, rng: &mut rng::Rng) -> Vec<EdgeLabel> {
    (0..count)
        .map(|_| {
            if rng.gen_bool(0.5) {
                EdgeLabel::Long
            } else {
                EdgeLabel::Short
            }
        })
        .collect()
}

/// Parameters producing a subdivided hypercube on exactly `n` vertices.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstructionParams {
    pub n: usize,
    pub d: usize,
    pub s: usize,
    pub l: usize,
    pub seed: u64,
    pub labels: Vec<EdgeLabel>,
    pub extras: Vec<u8>,
    /// `l > s + 8`.
    pub gap_condition: bool,
    /// `2ds > (2d - 1)(l + 2)`, the stronger of the two printed conditions.
    pub strong_condition: bool,
    /// `2ds > 2(d - 1)(l + 2)`.
    pub weak_condition: bool,
}

impl ConstructionParams {
    pub fn build(&self) -> Result<SubdividedHypercube> {
        SubdividedHypercube::from_parts(
            self.d,
            self.s,
            self.l,
            self.labels.clone(),
            self.extras.clone(),
        )
    }
}

fn strong(d: usize, s: usize, l: usize) -> bool {
    2 * d * s > (2 * d - 1) * (l + 2)
}

fn weak(d: usize, s: usize, l: usize) -> bool {
    2 * d * s > 2 * (d - 1) * (l + 2)
}

fn try_params(n: usize, seed: u64) -> Option<ConstructionParams> {
    for d in (1..=super::MAX_HYPERCUBE_DIM).rev() {
        let cube_n = 1usize << d;
        if cube_n > n {
            continue;
        }
        let count = d << (d - 1);
        let labels = random_labels(count, &mut rng::stream(seed, "construction", d as u64));
        let long = labels.iter().filter(|&&l| l == EdgeLabel::Long).count();
        for gap in [9usize, 10] {
            // n = 2^d + count * s + long * gap + rem, with 0 <= rem < count
            let Some(x) = n.checked_sub(cube_n + long * gap) else {
                continue;
            };
            let s = x / count;
            let l = s + gap;
            if s < 1 || !strong(d, s, l) {
                continue;
            }
            let rem = x - count * s;
            let extras = (0..count).map(|i| (i < rem) as u8).collect();
            return Some(ConstructionParams {
                n,
                d,
                s,
                l,
                seed,
                labels,
                extras,
                gap_condition: l > s + 8,
                strong_condition: true,
                weak_condition: weak(d, s, l),
            });
        }
    }
    None
}

/// Picks the largest cube dimension `d` for which some `s` with `l - s` in
/// `{9, 10}` satisfies `2ds > (2d - 1)(l + 2)` and the vertex count can be
/// hit exactly. Labels are drawn first; extras then add one vertex to the
/// first edges in order until the count is exact.
pub fn choose_construction_params(n: usize, seed: u64) -> Result<ConstructionParams> {
    if let Some(p) = try_params(n, seed) {
        return Ok(p);
    }
    let nearest =
        (n + 1..n.saturating_mul(2).max(n + 10_000)).find(|&m| try_params(m, seed).is_some());
    Err(Error::InvalidParameter(match nearest {
        Some(m) => {
            format!("no construction has exactly {n} vertices; smallest feasible n above it is {m}")
        }
        None => format!("no construction has exactly {n} vertices"),
    }))
}
