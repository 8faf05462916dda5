//! Small connected graphs with their path metric.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 64;
/// Vertex cap for edge subdivisions, which only feed the slim-triangle pass.
pub const MAX_SUBDIVIDED_VERTICES: usize = 640;
const CONNECT_ATTEMPTS: u32 = 100;

/// Edge-list form: `{"n": 5, "edges": [[0, 1], [1, 2]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeList {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricGraph {
    adj: Vec<Vec<usize>>,
    dist: Vec<Vec<u32>>,
}

impl MetricGraph {
    pub fn new(n: usize, edges: &[[usize; 2]]) -> Result<Self> {
        Self::with_cap(n, edges, MAX_VERTICES)
    }

    fn with_cap(n: usize, edges: &[[usize; 2]], cap: usize) -> Result<Self> {
        if n == 0 || n > cap {
            return Err(Error::Input(format!("vertex count must be in 1..={cap}, got {n}")));
        }
        let mut adj = vec![Vec::new(); n];
        for &[a, b] in edges {
            if a >= n || b >= n {
                return Err(Error::Input(format!("edge [{a}, {b}] names a vertex outside 0..{n}")));
            }
            if a == b {
                return Err(Error::Input(format!("self-loop at vertex {a}")));
            }
            if !adj[a].contains(&b) {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
        }
        let dist: Vec<Vec<u32>> = (0..n).map(|s| bfs(&adj, s)).collect();
        if dist[0].iter().any(|&d| d == u32::MAX) {
            return Err(Error::Input("graph is not connected".into()));
        }
        Ok(MetricGraph { adj, dist })
    }

    /// Every edge split at its midpoint; distances are doubled. Midpoint
    /// vertices are numbered after the original ones, in edge-list order.
    pub fn subdivided(&self) -> Result<Self> {
        let n = self.n();
        let old = self.to_edge_list().edges;
        let mut edges = Vec::with_capacity(2 * old.len());
        for (i, &[a, b]) in old.iter().enumerate() {
            edges.push([a, n + i]);
            edges.push([n + i, b]);
        }
        Self::with_cap(n + old.len(), &edges, MAX_SUBDIVIDED_VERTICES)
    }

    pub fn from_edge_list(e: &EdgeList) -> Result<Self> {
        Self::new(e.n, &e.edges)
    }

    pub fn to_edge_list(&self) -> EdgeList {
        let edges = (0..self.n())
            .flat_map(|a| self.adj[a].iter().filter(move |&&b| a < b).map(move |&b| [a, b]))
            .collect();
        EdgeList { n: self.n(), edges }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn d(&self, a: usize, b: usize) -> u32 {
        self.dist[a][b]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_tree(&self) -> bool {
        self.edge_count() + 1 == self.n()
    }

    /// `p` lies on some geodesic from `a` to `b`.
    pub fn between(&self, a: usize, p: usize, b: usize) -> bool {
        self.d(a, p) + self.d(p, b) == self.d(a, b)
    }

    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<[usize; 2]> = (1..n).map(|i| [i - 1, i]).collect();
        Self::new(n, &edges)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Parameter("a cycle needs at least 3 vertices".into()));
        }
        let edges: Vec<[usize; 2]> = (0..n).map(|i| [i, (i + 1) % n]).collect();
        Self::new(n, &edges)
    }

    /// `rows x cols` grid, vertex `r * cols + c`.
    pub fn grid(rows: usize, cols: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    edges.push([v, v + 1]);
                }
                if r + 1 < rows {
                    edges.push([v, v + cols]);
                }
            }
        }
        Self::new(rows * cols, &edges)
    }

    /// Random recursive tree: vertex `i` attaches to a uniform earlier vertex.
    pub fn random_tree(n: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let edges: Vec<[usize; 2]> = (1..n).map(|i| [rng.gen_range(0..i), i]).collect();
        Self::new(n, &edges)
    }

    /// Erdos-Renyi `G(n, p)`, redrawn until connected.
    pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Parameter(format!("edge probability {p} outside [0, 1]")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..CONNECT_ATTEMPTS {
            let mut edges = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    if rng.gen_bool(p) {
                        edges.push([a, b]);
                    }
                }
            }
            match Self::new(n, &edges) {
                Ok(g) => return Ok(g),
                Err(Error::Input(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::RetryExhausted {
            first_seed: seed,
            attempts: CONNECT_ATTEMPTS,
        })
    }

    /// A random tree with extra random edges added.
    pub fn random_sparse(n: usize, extra: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges: Vec<[usize; 2]> = (1..n).map(|i| [rng.gen_range(0..i), i]).collect();
        let mut pairs: Vec<[usize; 2]> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| [a, b]))
            .collect();
        pairs.shuffle(&mut rng);
        edges.extend(pairs.into_iter().take(extra));
        Self::new(n, &edges)
    }
}

fn bfs(adj: &[Vec<usize>], s: usize) -> Vec<u32> {
    let mut d = vec![u32::MAX; adj.len()];
    d[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(v) = q.pop_front() {
        for &w in &adj[v] {
            if d[w] == u32::MAX {
                d[w] = d[v] + 1;
                q.push_back(w);
            }
        }
    }
    d
}
