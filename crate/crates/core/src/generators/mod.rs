//! Deterministic constructors for the graph families used throughout.

pub mod small;
mod subdivided;

pub use small::{connected_graph_classes, graph_classes};
pub use subdivided::{
    choose_construction_params, cube_edges, gen_subdivided_hypercube, ConstructionParams, CubeEdge,
    EdgeLabel, SubdividedHypercube,
};

use rand::Rng as _;

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, Vertex};
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GnpParams {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
}

impl GnpParams {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return invalid("G(n,p) needs n >= 1");
        }
        if !(0.0..=1.0).contains(&self.p) {
            return invalid(format!("edge probability {} outside [0, 1]", self.p));
        }
        Ok(())
    }
}

/// Erdős–Rényi `G(n, p)`: pairs `(u, v)`, `u < v`, are visited in
/// lexicographic order and each is kept with probability `p`, drawing from the
/// stream `derive_seed(seed, "gnp", 0)`.
pub fn gen_gnp(params: GnpParams) -> Result<Graph> {
    params.validate()?;
    let GnpParams { n, p, seed } = params;
    let mut rng = rng::stream(seed, "gnp", 0);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

pub fn is_prime(q: u64) -> bool {
    q >= 2
        && (2..)
            .take_while(|d| d * d <= q)
            .all(|d| !q.is_multiple_of(d))
}

/// Normalized homogeneous coordinates of the projective plane over `Z_q`:
/// `(1, a, b)`, `(0, 1, a)` and `(0, 0, 1)`.
fn projective_points(q: u64) -> Vec<[u64; 3]> {
    let mut pts = Vec::with_capacity((q * q + q + 1) as usize);
    for a in 0..q {
        for b in 0..q {
            pts.push([1, a, b]);
        }
    }
    for a in 0..q {
        pts.push([0, 1, a]);
    }
    pts.push([0, 0, 1]);
    pts
}

/// Point-line incidence graph of `PG(2, q)` for prime `q`. Points are
/// vertices `0..q²+q+1`, lines follow; a point and a line are adjacent when
/// their coordinate vectors are orthogonal mod `q`.
pub fn gen_projective_incidence(q: u64) -> Result<Graph> {
    if !is_prime(q) {
        return invalid(format!("q = {q} is not prime"));
    }
    let pts = projective_points(q);
    let count = pts.len();
    let mut edges = Vec::with_capacity(count * (q as usize + 1));
    for (i, p) in pts.iter().enumerate() {
        for (j, l) in pts.iter().enumerate() {
            let dot = (p[0] * l[0] + p[1] * l[1] + p[2] * l[2]) % q;
            if dot == 0 {
                edges.push((i, count + j));
            }
        }
    }
    Graph::from_edges(2 * count, edges)
}

pub const MAX_HYPERCUBE_DIM: usize = 20;

/// `Q_d`: bit vectors of length `d`, adjacent at Hamming distance one.
pub fn gen_hypercube(d: usize) -> Result<Graph> {
    if !(1..=MAX_HYPERCUBE_DIM).contains(&d) {
        return invalid(format!(
            "hypercube dimension {d} outside 1..={MAX_HYPERCUBE_DIM}"
        ));
    }
    let n = 1usize << d;
    let edges = (0..n).flat_map(|v| {
        (0..d)
            .filter(move |i| v & (1 << i) == 0)
            .map(move |i| (v, v | (1 << i)))
    });
    Graph::from_edges(n, edges)
}

pub fn path(n: usize) -> Result<Graph> {
    Graph::from_edges(n, (1..n).map(|v| (v - 1, v)))
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return invalid("a cycle needs at least 3 vertices");
    }
    Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n)))
}

pub fn complete(n: usize) -> Result<Graph> {
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

/// `K_{1,m}` with centre 0.
pub fn star(m: usize) -> Result<Graph> {
    Graph::from_edges(m + 1, (1..=m).map(|v| (0, v)))
}

pub fn complete_bipartite(a: usize, b: usize) -> Result<Graph> {
    Graph::from_edges(a + b, (0..a).flat_map(|u| (0..b).map(move |v| (u, a + v))))
}

/// `rows x cols` grid, vertex `r * cols + c`.
pub fn grid(rows: usize, cols: usize) -> Result<Graph> {
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    Graph::from_edges(rows * cols, edges)
}

/// Wheel: hub 0 joined to a cycle on `1..=k`.
pub fn wheel(k: usize) -> Result<Graph> {
    if k < 3 {
        return invalid("a wheel needs a rim of at least 3 vertices");
    }
    let rim = (0..k).map(|i| (1 + i, 1 + (i + 1) % k));
    let spokes = (1..=k).map(|v| (0, v));
    Graph::from_edges(k + 1, rim.chain(spokes))
}

pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    Graph::from_edges(10, outer.chain(inner).chain(spokes).collect::<Vec<_>>()).expect("petersen")
}

/// Heawood graph, built as the incidence graph of the Fano plane.
pub fn heawood() -> Graph {
    gen_projective_incidence(2).expect("2 is prime")
}

/// Uniform random labelled tree on `n` vertices via a random Prüfer sequence.
pub fn random_tree(n: usize, seed: u64) -> Result<Graph> {
    if n <= 2 {
        return path(n);
    }
    let mut rng = rng::stream(seed, "tree", 0);
    let code: Vec<Vertex> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &c in &code {
        degree[c] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &c in &code {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf exists");
        edges.push((leaf, c));
        degree[leaf] -= 1;
        degree[c] -= 1;
    }
    let rest: Vec<Vertex> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    Graph::from_edges(n, edges)
}

fn one_arg(name: &str, arg: Option<&str>) -> Result<usize> {
    arg.ok_or_else(|| Error::InvalidParameter(format!("`{name}` needs a size, e.g. `{name}:5`")))?
        .trim()
        .parse()
        .map_err(|e| Error::InvalidParameter(format!("bad size for `{name}`: {e}")))
}

fn two_args(name: &str, arg: Option<&str>, sep: char) -> Result<(usize, usize)> {
    let arg = arg.ok_or_else(|| Error::InvalidParameter(format!("`{name}` needs two sizes")))?;
    let (a, b) = arg
        .split_once(sep)
        .ok_or_else(|| Error::InvalidParameter(format!("`{name}` expects `a{sep}b`")))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|e| Error::InvalidParameter(format!("bad size for `{name}`: {e}")))
    };
    Ok((parse(a)?, parse(b)?))
}

/// Named test graphs: `petersen`, `heawood`, `path:N`, `cycle:N`,
/// `complete:N`, `star:M`, `wheel:K`, `grid:RxC`, `bipartite:A,B`,
/// `hypercube:D`, `projective:Q`, `tree:N,SEED`.
pub fn fixture(name: &str) -> Result<Graph> {
    let (kind, arg) = match name.split_once(':') {
        Some((k, a)) => (k.trim(), Some(a)),
        None => (name.trim(), None),
    };
    match kind {
        "petersen" => Ok(petersen()),
        "heawood" => Ok(heawood()),
        "path" => path(one_arg(kind, arg)?),
        "cycle" => cycle(one_arg(kind, arg)?),
        "complete" => complete(one_arg(kind, arg)?),
        "star" => star(one_arg(kind, arg)?),
        "wheel" => wheel(one_arg(kind, arg)?),
        "hypercube" => gen_hypercube(one_arg(kind, arg)?),
        "projective" => gen_projective_incidence(one_arg(kind, arg)? as u64),
        "grid" => {
            let (r, c) = two_args(kind, arg, 'x')?;
            grid(r, c)
        }
        "bipartite" => {
            let (a, b) = two_args(kind, arg, ',')?;
            complete_bipartite(a, b)
        }
        "tree" => {
            let (n, seed) = two_args(kind, arg, ',')?;
            random_tree(n, seed as u64)
        }
        _ => Err(Error::UnknownName(name.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gnp_extremes_and_determinism() {
        let g = gen_gnp(GnpParams {
            n: 10,
            p: 0.0,
            seed: 1,
        })
        .unwrap();
        assert_eq!(g.m(), 0);
        let g = gen_gnp(GnpParams {
            n: 10,
            p: 1.0,
            seed: 1,
        })
        .unwrap();
        assert_eq!(g.m(), 45);
        let a = gen_gnp(GnpParams {
            n: 200,
            p: 0.1,
            seed: 9,
        })
        .unwrap();
        let b = gen_gnp(GnpParams {
            n: 200,
            p: 0.1,
            seed: 9,
        })
        .unwrap();
        let c = gen_gnp(GnpParams {
            n: 200,
            p: 0.1,
            seed: 10,
        })
        .unwrap();
        assert_eq!(a.edges(), b.edges());
        assert_ne!(a.edges(), c.edges());
        assert!(gen_gnp(GnpParams {
            n: 10,
            p: 1.5,
            seed: 1
        })
        .is_err());
        assert!(gen_gnp(GnpParams {
            n: 0,
            p: 0.5,
            seed: 1
        })
        .is_err());
    }

    #[test]
    fn gnp_edge_count_concentrates() {
        // Binomial(499500, 0.01): mean 4995, sd sqrt(4995 * 0.99) ~ 70.3.
        let sd = (499_500.0f64 * 0.01 * 0.99).sqrt();
        for seed in 0..3 {
            let g = gen_gnp(GnpParams {
                n: 1000,
                p: 0.01,
                seed,
            })
            .unwrap();
            assert!((g.m() as f64 - 4995.0).abs() <= 4.0 * sd, "m = {}", g.m());
        }
    }

    #[test]
    fn projective_planes() {
        let h = gen_projective_incidence(2).unwrap();
        assert_eq!((h.n(), h.m()), (14, 21));
        assert!((0..14).all(|v| h.degree(v) == 3));
        let g3 = gen_projective_incidence(3).unwrap();
        assert_eq!(g3.n(), 26);
        assert!((0..26).all(|v| g3.degree(v) == 4));
        assert_eq!(g3.girth(), Some(6));
        let g5 = gen_projective_incidence(5).unwrap();
        assert_eq!((g5.n(), g5.m()), (62, 186));
        assert!(gen_projective_incidence(4).is_err());
        assert!(gen_projective_incidence(1).is_err());
    }

    #[test]
    fn projective_axioms_hold() {
        for q in [2u64, 3, 5] {
            let g = gen_projective_incidence(q).unwrap();
            let half = g.n() / 2;
            for side in [0..half, half..g.n()] {
                let verts: Vec<_> = side.collect();
                for (i, &a) in verts.iter().enumerate() {
                    for &b in &verts[i + 1..] {
                        let common = g.neighbors(a).iter().filter(|w| g.has_edge(b, **w)).count();
                        assert_eq!(common, 1, "q={q}, {a} and {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn hypercubes() {
        let q1 = gen_hypercube(1).unwrap();
        assert_eq!((q1.n(), q1.m()), (2, 1));
        let q3 = gen_hypercube(3).unwrap();
        assert_eq!((q3.n(), q3.m()), (8, 12));
        assert!((0..8).all(|v| q3.degree(v) == 3));
        let q4 = gen_hypercube(4).unwrap();
        assert_eq!(q4.girth(), Some(4));
        assert_eq!(q4.diameter(), Some(4));
        assert!(gen_hypercube(0).is_err());
        assert!(gen_hypercube(21).is_err());
    }

    #[test]
    fn fixtures() {
        let p = fixture("petersen").unwrap();
        assert_eq!((p.n(), p.m()), (10, 15));
        assert_eq!(fixture("cycle:7").unwrap().m(), 7);
        let p5 = fixture("path:5").unwrap();
        assert_eq!((p5.n(), p5.m()), (5, 4));
        assert_eq!(fixture("grid:3x4").unwrap().m(), 17);
        assert_eq!(fixture("bipartite:2,3").unwrap().m(), 6);
        assert!(matches!(
            fixture("dodecahedron"),
            Err(Error::UnknownName(_))
        ));
        assert!(fixture("cycle").is_err());
        let t = fixture("tree:30,4").unwrap();
        assert_eq!(t.m(), 29);
        assert!(t.is_connected());
        assert_eq!(t.girth(), None);
    }
}
