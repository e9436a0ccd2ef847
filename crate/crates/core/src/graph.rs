//! Directed graphs with positive edge weights, generators for the benchmark
//! workloads, and DIMACS shortest-path file I/O.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Compressed sparse-row adjacency. Vertices are `0..n`.
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<i64>,
}

impl Graph {
    /// Builds from an edge list; weights must be positive.
    pub fn from_edges(n: usize, edges: &[(usize, usize, i64)]) -> Graph {
        assert!(edges.iter().all(|&(u, v, w)| u < n && v < n && w > 0));
        let mut offsets = vec![0usize; n + 1];
        for &(u, _, _) in edges {
            offsets[u + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut targets = vec![0usize; edges.len()];
        let mut weights = vec![0i64; edges.len()];
        let mut next = offsets.clone();
        for &(u, v, w) in edges {
            targets[next[u]] = v;
            weights[next[u]] = w;
            next[u] += 1;
        }
        Graph { offsets, targets, weights }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn m(&self) -> usize {
        self.targets.len()
    }

    pub fn out_edges(&self, u: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        let range = self.offsets[u]..self.offsets[u + 1];
        range.map(move |e| (self.targets[e], self.weights[e]))
    }

    pub fn edges(&self) -> Vec<(usize, usize, i64)> {
        let mut out = Vec::with_capacity(self.m());
        for u in 0..self.n() {
            for (v, w) in self.out_edges(u) {
                out.push((u, v, w));
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Workload {
    /// `m` uniform random edges over `n` vertices, plus a Hamiltonian-ish
    /// backbone so everything is reachable from vertex 0.
    Random,
    /// Square grid, 4-neighbor, edges in both directions; `n` must be a
    /// perfect square and `m` is ignored.
    Grid,
    /// A directed path `0 -> 1 -> ... -> n-1` plus `m - (n-1)` random
    /// forward shortcuts.
    PathWithShortcuts,
}

impl std::str::FromStr for Workload {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "random" => Ok(Workload::Random),
            "grid" => Ok(Workload::Grid),
            "path-with-shortcuts" => Ok(Workload::PathWithShortcuts),
            other => Err(std::format!(
                "unknown workload `{other}` (expected random, grid, or path-with-shortcuts)"
            )),
        }
    }
}

impl std::fmt::Display for Workload {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Workload::Random => "random",
            Workload::Grid => "grid",
            Workload::PathWithShortcuts => "path-with-shortcuts",
        })
    }
}

pub fn gen_graph(workload: Workload, n: usize, m: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize, i64)> = Vec::new();
    match workload {
        Workload::Random => {
            // Backbone keeps the graph connected from the source.
            for u in 0..n.saturating_sub(1) {
                edges.push((u, u + 1, rng.gen_range(1..100)));
            }
            while edges.len() < m {
                let u = rng.gen_range(0..n);
                let v = rng.gen_range(0..n);
                if u != v {
                    edges.push((u, v, rng.gen_range(1..100)));
                }
            }
        }
        Workload::Grid => {
            let side = (n as f64).sqrt().round() as usize;
            assert_eq!(side * side, n, "grid workload needs a square vertex count");
            let id = |r: usize, c: usize| r * side + c;
            for r in 0..side {
                for c in 0..side {
                    if c + 1 < side {
                        let w = rng.gen_range(1..100);
                        edges.push((id(r, c), id(r, c + 1), w));
                        edges.push((id(r, c + 1), id(r, c), w));
                    }
                    if r + 1 < side {
                        let w = rng.gen_range(1..100);
                        edges.push((id(r, c), id(r + 1, c), w));
                        edges.push((id(r + 1, c), id(r, c), w));
                    }
                }
            }
        }
        Workload::PathWithShortcuts => {
            for u in 0..n - 1 {
                edges.push((u, u + 1, rng.gen_range(50..100)));
            }
            // Cheap forward shortcuts create decrease-key pressure.
            for _ in 0..m.saturating_sub(n - 1) {
                let u = rng.gen_range(0..n - 1);
                let v = rng.gen_range(u + 1..n);
                edges.push((u, v, rng.gen_range(1..50)));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

#[derive(Debug, Error)]
pub enum DimacsError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Parses the DIMACS shortest-path format: a `p sp <n> <m>` header, then
/// `a <u> <v> <w>` arc lines with 1-based endpoints and positive weights.
pub fn parse_dimacs(text: &str) -> Result<Graph, DimacsError> {
    let mut n: Option<usize> = None;
    let mut declared_m = 0usize;
    let mut edges: Vec<(usize, usize, i64)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |message: String| DimacsError::Parse { line, message };
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        match fields[0] {
            "p" => {
                if fields.len() != 4 || fields[1] != "sp" {
                    return Err(err("expected `p sp <n> <m>`".into()));
                }
                n = Some(fields[2].parse().map_err(|e| err(format!("bad n: {e}")))?);
                declared_m = fields[3].parse().map_err(|e| err(format!("bad m: {e}")))?;
            }
            "a" => {
                let n = n.ok_or_else(|| err("arc before problem line".into()))?;
                if fields.len() != 4 {
                    return Err(err("expected `a <u> <v> <w>`".into()));
                }
                let u: usize = fields[1].parse().map_err(|e| err(format!("bad tail: {e}")))?;
                let v: usize = fields[2].parse().map_err(|e| err(format!("bad head: {e}")))?;
                let w: i64 = fields[3].parse().map_err(|e| err(format!("bad weight: {e}")))?;
                if u == 0 || u > n || v == 0 || v > n {
                    return Err(err(format!("vertex out of range 1..={n}")));
                }
                if w <= 0 {
                    return Err(err(format!("weight {w} is not positive")));
                }
                edges.push((u - 1, v - 1, w));
            }
            other => return Err(err(format!("unknown record `{other}`"))),
        }
    }
    let n = n.ok_or(DimacsError::Parse { line: 0, message: "missing problem line".into() })?;
    if edges.len() != declared_m {
        return Err(DimacsError::Parse {
            line: 0,
            message: format!("header declares {declared_m} arcs, file has {}", edges.len()),
        });
    }
    Ok(Graph::from_edges(n, &edges))
}

pub fn load_dimacs(path: &std::path::Path) -> Result<Graph, DimacsError> {
    parse_dimacs(&std::fs::read_to_string(path)?)
}

pub fn to_dimacs(g: &Graph) -> String {
    let mut out = std::format!("p sp {} {}\n", g.n(), g.m());
    for (u, v, w) in g.edges() {
        out.push_str(&std::format!("a {} {} {w}\n", u + 1, v + 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csr_preserves_edges() {
        let g = Graph::from_edges(3, &[(0, 1, 5), (0, 2, 7), (2, 1, 1)]);
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 3);
        assert_eq!(g.out_edges(0).collect::<Vec<_>>(), vec![(1, 5), (2, 7)]);
        assert_eq!(g.out_edges(1).count(), 0);
        assert_eq!(g.out_edges(2).collect::<Vec<_>>(), vec![(1, 1)]);
    }

    #[test]
    fn grid_edge_count() {
        let g = gen_graph(Workload::Grid, 256, 0, 1);
        assert_eq!(g.n(), 256);
        // 16x16 grid: 2 * 16 * 15 undirected edges, doubled for direction.
        assert_eq!(g.m(), 960);
    }

    #[test]
    fn path_with_shortcuts_shape() {
        let g = gen_graph(Workload::PathWithShortcuts, 100, 400, 3);
        assert_eq!(g.n(), 100);
        assert_eq!(g.m(), 400);
        for (u, v, _) in g.edges() {
            assert!(u < v, "all edges point forward");
        }
    }

    #[test]
    fn generators_are_deterministic() {
        let a = gen_graph(Workload::Random, 64, 300, 9).edges();
        let b = gen_graph(Workload::Random, 64, 300, 9).edges();
        assert_eq!(a, b);
    }

    #[test]
    fn dimacs_roundtrip() {
        let g = gen_graph(Workload::Random, 32, 100, 4);
        let g2 = parse_dimacs(&to_dimacs(&g)).unwrap();
        assert_eq!(g.edges(), g2.edges());
    }

    #[test]
    fn dimacs_rejects_bad_input() {
        assert!(matches!(
            parse_dimacs("p sp 2 1\na 1 2 0\n"),
            Err(DimacsError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_dimacs("p sp 2 1\na 1 3 5\n"),
            Err(DimacsError::Parse { line: 2, .. })
        ));
        assert!(matches!(parse_dimacs("a 1 2 5\n"), Err(DimacsError::Parse { line: 1, .. })));
        assert!(matches!(parse_dimacs("p sp 2 2\na 1 2 5\n"), Err(DimacsError::Parse { .. })));
    }
}
