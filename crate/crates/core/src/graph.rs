//! Finite connected graphs with the spectral, metric and counting
//! primitives used by the rest of the crate.
//!
//! A [`Graph`] is immutable after construction. Construction validates
//! connectivity, rejects self-loops, and rejects duplicate edges unless the
//! multigraph flag is set. The standard random walk `μ_G(u,v) = 1/deg(u)`
//! and the degree measure `ν_G(u) = deg(u)/2|E|` satisfy detailed balance,
//! which [`WalkKernel`] checks on construction and preserves under powers.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// Finite connected multigraph with positive edge lengths (default 1).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "GraphDto", into = "GraphDto")]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    lengths: Vec<f64>,
    adj: Vec<Vec<(usize, usize)>>, // (neighbor, edge id)
    multigraph: bool,
}

#[derive(Serialize, Deserialize)]
struct GraphDto {
    n: usize,
    edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lengths: Option<Vec<f64>>,
    #[serde(default)]
    multigraph: bool,
}

impl From<Graph> for GraphDto {
    fn from(g: Graph) -> Self {
        let uniform = g.lengths.iter().all(|&l| l == 1.0);
        GraphDto {
            n: g.vertex_count,
            edges: g.edges.clone(),
            lengths: if uniform {
                None
            } else {
                Some(g.lengths.clone())
            },
            multigraph: g.multigraph,
        }
    }
}

impl TryFrom<GraphDto> for Graph {
    type Error = Error;
    fn try_from(dto: GraphDto) -> Result<Graph> {
        let mut g = if dto.multigraph {
            Graph::multigraph_from_edges(dto.n, &dto.edges)?
        } else {
            Graph::from_edges_with_count(dto.n, &dto.edges)?
        };
        if let Some(lengths) = dto.lengths {
            g = g.with_lengths(lengths)?;
        }
        Ok(g)
    }
}

impl Graph {
    /// Build a simple graph, inferring the vertex count from the edge list.
    pub fn from_edges(edges: &[(usize, usize)]) -> Result<Graph> {
        let n = edges
            .iter()
            .map(|&(u, v)| u.max(v) + 1)
            .max()
            .ok_or(Error::EmptyGraph)?;
        Graph::from_edges_with_count(n, edges)
    }

    /// Build a simple graph on `n` vertices.
    pub fn from_edges_with_count(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        Graph::build(n, edges, false)
    }

    /// Build a multigraph (parallel edges permitted, self-loops still rejected).
    pub fn multigraph_from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        Graph::build(n, edges, true)
    }

    fn build(n: usize, edges: &[(usize, usize)], multigraph: bool) -> Result<Graph> {
        if edges.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut canon = Vec::with_capacity(edges.len());
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange {
                    index: u.max(v),
                    vertex_count: n,
                });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            let e = (u.min(v), u.max(v));
            if !multigraph && !seen.insert(e) {
                return Err(Error::DuplicateEdge(e.0, e.1));
            }
            canon.push(e);
        }
        let mut adj = vec![Vec::new(); n];
        for (id, &(u, v)) in canon.iter().enumerate() {
            adj[u].push((v, id));
            adj[v].push((u, id));
        }
        let g = Graph {
            vertex_count: n,
            lengths: vec![1.0; canon.len()],
            edges: canon,
            adj,
            multigraph,
        };
        g.check_connected()?;
        Ok(g)
    }

    fn check_connected(&self) -> Result<()> {
        let dist = self.bfs_distances(0);
        if let Some(v) = dist.iter().position(|d| d.is_none()) {
            return Err(Error::Disconnected(0, v));
        }
        Ok(())
    }

    /// Replace all edge lengths by a single uniform value.
    pub fn with_uniform_length(mut self, len: f64) -> Result<Graph> {
        if len <= 0.0 {
            return Err(Error::InvalidParameter(
                "edge length must be positive".into(),
            ));
        }
        self.lengths = vec![len; self.edges.len()];
        Ok(self)
    }

    /// Replace edge lengths with an explicit per-edge table.
    pub fn with_lengths(mut self, lengths: Vec<f64>) -> Result<Graph> {
        if lengths.len() != self.edges.len() {
            return Err(Error::InvalidParameter(format!(
                "{} lengths for {} edges",
                lengths.len(),
                self.edges.len()
            )));
        }
        if lengths.iter().any(|&l| l <= 0.0 || l.is_nan()) {
            return Err(Error::InvalidParameter(
                "edge lengths must be positive".into(),
            ));
        }
        self.lengths = lengths;
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    pub fn length(&self, id: usize) -> f64 {
        self.lengths[id]
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    /// Neighbors of `u` as `(vertex, edge id)` pairs.
    pub fn neighbors(&self, u: usize) -> &[(usize, usize)] {
        &self.adj[u]
    }

    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.vertex_count
    }

    /// Hop distances from `u`; `None` marks unreachable vertices.
    pub fn bfs_distances(&self, u: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count];
        dist[u] = Some(0);
        let mut queue = std::collections::VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            let dx = dist[x].unwrap();
            for &(y, _) in &self.adj[x] {
                if dist[y].is_none() {
                    dist[y] = Some(dx + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// All-pairs hop distances.
    pub fn distance_matrix(&self) -> Vec<Vec<usize>> {
        (0..self.vertex_count)
            .map(|u| {
                self.bfs_distances(u)
                    .into_iter()
                    .map(|d| d.expect("graph is connected"))
                    .collect()
            })
            .collect()
    }

    /// Two-coloring when the graph is bipartite.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let mut color = vec![u8::MAX; self.vertex_count];
        color[0] = 0;
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &(y, _) in &self.adj[x] {
                if color[y] == u8::MAX {
                    color[y] = 1 - color[x];
                    queue.push_back(y);
                } else if color[y] == color[x] {
                    return None;
                }
            }
        }
        Some(color)
    }

    /// (girth, diameter); girth is `None` for acyclic graphs.
    ///
    /// The girth scan runs a BFS from every vertex and, for each non-tree
    /// edge encountered, records the closed-walk length `d(u)+d(v)+1`; the
    /// minimum over all start vertices is the girth. A pair of parallel
    /// edges counts as a 2-cycle.
    pub fn girth_and_diameter(&self) -> (Option<usize>, usize) {
        let mut girth = usize::MAX;
        let mut diameter = 0usize;
        for s in 0..self.vertex_count {
            let mut dist = vec![usize::MAX; self.vertex_count];
            let mut via_edge = vec![usize::MAX; self.vertex_count];
            dist[s] = 0;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &(y, eid) in &self.adj[x] {
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        via_edge[y] = eid;
                        queue.push_back(y);
                    } else if eid != via_edge[x] && eid != via_edge[y] {
                        // non-tree edge: closed walk through s
                        girth = girth.min(dist[x] + dist[y] + 1);
                    }
                }
            }
            diameter = diameter.max(*dist.iter().max().unwrap());
        }
        let girth = if girth == usize::MAX {
            None
        } else {
            Some(girth)
        };
        (girth, diameter)
    }

    pub fn girth(&self) -> Option<usize> {
        self.girth_and_diameter().0
    }

    pub fn diameter(&self) -> usize {
        self.girth_and_diameter().1
    }

    /// Replace every edge by a path of `j` edges through `j-1` fresh
    /// degree-2 vertices. New edges inherit the subdivided edge's length.
    pub fn subdivide(&self, j: usize) -> Result<Graph> {
        if j == 0 {
            return Err(Error::InvalidParameter(
                "subdivision factor must be >= 1".into(),
            ));
        }
        if j == 1 {
            return Ok(self.clone());
        }
        let mut edges = Vec::with_capacity(self.edges.len() * j);
        let mut lengths = Vec::with_capacity(self.edges.len() * j);
        let n0 = self.vertex_count;
        for (eid, &(u, v)) in self.edges.iter().enumerate() {
            let base = n0 + eid * (j - 1);
            let mut prev = u;
            for t in 0..j - 1 {
                edges.push((prev, base + t));
                lengths.push(self.lengths[eid]);
                prev = base + t;
            }
            edges.push((prev, v));
            lengths.push(self.lengths[eid]);
        }
        let n = n0 + self.edges.len() * (j - 1);
        Graph::from_edges_with_count(n, &edges)?.with_lengths(lengths)
    }

    /// Standard random walk `μ_G` together with the degree measure `ν_G`.
    pub fn standard_walk(&self) -> (WalkKernel, VertexMeasure) {
        let total_degree: usize = (0..self.vertex_count).map(|u| self.degree(u)).sum();
        let weights: Vec<f64> = (0..self.vertex_count)
            .map(|u| self.degree(u) as f64 / total_degree as f64)
            .collect();
        let rows: Vec<Vec<(usize, f64)>> = (0..self.vertex_count)
            .map(|u| {
                let d = self.degree(u) as f64;
                let mut row: Vec<(usize, f64)> = Vec::new();
                for &(v, _) in &self.adj[u] {
                    match row.iter_mut().find(|(w, _)| *w == v) {
                        Some((_, p)) => *p += 1.0 / d,
                        None => row.push((v, 1.0 / d)),
                    }
                }
                row.sort_by_key(|&(v, _)| v);
                row
            })
            .collect();
        let measure = VertexMeasure {
            weights: weights.clone(),
        };
        let kernel = WalkKernel {
            rows,
            stationary: weights,
        };
        debug_assert!(kernel.check_detailed_balance(1e-12).is_ok());
        (kernel, measure)
    }

    /// Second-smallest eigenvalue of the discrete Laplacian `I - μ_G`.
    ///
    /// The eigensolve runs on the ν_G-symmetrized operator
    /// `D^{1/2} (I - μ_G) D^{-1/2}`, whose `(u,v)` entry is
    /// `δ_uv - m_uv / sqrt(deg u · deg v)`.
    pub fn spectral_gap_real(&self) -> Result<f64> {
        Ok(self.symmetrized_laplacian_eigen()?.0[1])
    }

    /// Eigendecomposition of the symmetrized Laplacian, ascending.
    pub fn symmetrized_laplacian_eigen(&self) -> Result<(Vec<f64>, DMatrix<f64>)> {
        let n = self.vertex_count;
        if n > linalg::MAX_EIGEN_DIM {
            return Err(Error::SizeLimit(format!(
                "spectral gap limited to {} vertices, got {n}",
                linalg::MAX_EIGEN_DIM
            )));
        }
        let mut m = DMatrix::<f64>::identity(n, n);
        for &(u, v) in &self.edges {
            let w = 1.0 / ((self.degree(u) * self.degree(v)) as f64).sqrt();
            m[(u, v)] -= w;
            m[(v, u)] -= w;
        }
        linalg::symmetric_eigen(&m)
    }

    /// Eigenvalues of the 0/1 adjacency matrix (with multiplicity for
    /// parallel edges), sorted ascending.
    pub fn adjacency_eigenvalues(&self) -> Result<Vec<f64>> {
        let n = self.vertex_count;
        let mut m = DMatrix::<f64>::zeros(n, n);
        for &(u, v) in &self.edges {
            m[(u, v)] += 1.0;
            m[(v, u)] += 1.0;
        }
        linalg::symmetric_eigenvalues(&m)
    }

    /// Number of embedded (vertex-non-repeating) paths with fewer than
    /// `max_len` edges, counted as vertex sequences up to reversal.
    pub fn count_embedded_paths(&self, max_len: usize) -> Result<u64> {
        if max_len == 0 {
            return Err(Error::InvalidParameter(
                "path length bound must be >= 1".into(),
            ));
        }
        let mut doubled: u64 = 0;
        let mut visited = vec![false; self.vertex_count];
        for s in 0..self.vertex_count {
            visited[s] = true;
            self.count_paths_from(s, 1, max_len, &mut visited, &mut doubled)?;
            visited[s] = false;
        }
        // every path is seen once from each endpoint
        Ok(doubled / 2)
    }

    fn count_paths_from(
        &self,
        u: usize,
        next_len: usize,
        max_len: usize,
        visited: &mut Vec<bool>,
        doubled: &mut u64,
    ) -> Result<()> {
        if next_len >= max_len {
            return Ok(());
        }
        for &(v, _) in &self.adj[u] {
            if visited[v] {
                continue;
            }
            *doubled = doubled
                .checked_add(1)
                .ok_or(Error::Overflow("embedded path count"))?;
            visited[v] = true;
            self.count_paths_from(v, next_len + 1, max_len, visited, doubled)?;
            visited[v] = false;
        }
        Ok(())
    }
}

/// Probability measure on the vertices of a graph.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VertexMeasure {
    weights: Vec<f64>,
}

impl VertexMeasure {
    pub fn weight(&self, u: usize) -> f64 {
        self.weights[u]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Finitely supported Markov kernel on `0..n`, symmetric with respect to an
/// accompanying stationary measure.
#[derive(Clone, Debug)]
pub struct WalkKernel {
    rows: Vec<Vec<(usize, f64)>>,
    stationary: Vec<f64>,
}

impl WalkKernel {
    pub fn state_count(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, u: usize) -> &[(usize, f64)] {
        &self.rows[u]
    }

    pub fn stationary(&self) -> &[f64] {
        &self.stationary
    }

    pub fn prob(&self, u: usize, v: usize) -> f64 {
        self.rows[u]
            .iter()
            .find(|&&(w, _)| w == v)
            .map(|&(_, p)| p)
            .unwrap_or(0.0)
    }

    /// Row sums within `tol` of 1 and `ν(u) k(u,v) = ν(v) k(v,u)` within `tol`.
    pub fn check_detailed_balance(&self, tol: f64) -> Result<()> {
        for (u, row) in self.rows.iter().enumerate() {
            let sum: f64 = row.iter().map(|&(_, p)| p).sum();
            if (sum - 1.0).abs() > tol {
                return Err(Error::InvalidParameter(format!(
                    "row {u} sums to {sum}, expected 1"
                )));
            }
            for &(v, p) in row {
                let back = self.prob(v, u);
                if (self.stationary[u] * p - self.stationary[v] * back).abs() > tol {
                    return Err(Error::InvalidParameter(format!(
                        "detailed balance fails on ({u}, {v})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Convolution `self ∘ other`: `(k k')(u,w) = Σ_v k(u,v) k'(v,w)`.
    pub fn convolve(&self, other: &WalkKernel) -> Result<WalkKernel> {
        if self.state_count() != other.state_count() {
            return Err(Error::InvalidParameter(
                "kernel convolution requires matching state sets".into(),
            ));
        }
        let n = self.state_count();
        let mut rows = Vec::with_capacity(n);
        let mut acc = vec![0.0f64; n];
        for u in 0..n {
            for x in acc.iter_mut() {
                *x = 0.0;
            }
            for &(v, p) in &self.rows[u] {
                for &(w, q) in &other.rows[v] {
                    acc[w] += p * q;
                }
            }
            let row: Vec<(usize, f64)> = acc
                .iter()
                .enumerate()
                .filter(|&(_, &p)| p > 0.0)
                .map(|(w, &p)| (w, p))
                .collect();
            rows.push(row);
        }
        Ok(WalkKernel {
            rows,
            stationary: self.stationary.clone(),
        })
    }

    /// `n`-fold convolution power.
    pub fn power(&self, n: usize) -> Result<WalkKernel> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "kernel power requires n >= 1".into(),
            ));
        }
        let mut out = self.clone();
        for _ in 1..n {
            out = out.convolve(self)?;
        }
        Ok(out)
    }

    /// Rayleigh quotient of a real function against this kernel's graph
    /// structure: `E(φ) / Var(φ)` with the stationary measure weighting.
    pub fn rayleigh_quotient(&self, phi: &[f64]) -> Result<f64> {
        let nu = &self.stationary;
        let mean: f64 = nu.iter().zip(phi).map(|(&w, &x)| w * x).sum();
        let var: f64 = nu
            .iter()
            .zip(phi)
            .map(|(&w, &x)| w * (x - mean) * (x - mean))
            .sum();
        if var == 0.0 {
            return Err(Error::InvalidParameter(
                "Rayleigh quotient undefined for constant functions".into(),
            ));
        }
        let mut energy = 0.0;
        for (u, row) in self.rows.iter().enumerate() {
            for &(v, p) in row {
                energy += 0.5 * nu[u] * p * (phi[u] - phi[v]) * (phi[u] - phi[v]);
            }
        }
        Ok(energy / var)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn triangle() -> Graph {
        Graph::from_edges(&[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn k4() -> Graph {
        Graph::from_edges(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn petersen() -> Graph {
        crate::io::builtin_graph("petersen").unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(&edges).unwrap()
    }

    #[test]
    fn triangle_validates() {
        let g = triangle();
        assert_eq!(g.vertex_count(), 3);
        assert!((0..3).all(|u| g.degree(u) == 2));
    }

    #[test]
    fn petersen_census() {
        let g = petersen();
        assert_eq!(g.vertex_count(), 10);
        assert!((0..10).all(|u| g.degree(u) == 3));
        assert_eq!(g.girth_and_diameter(), (Some(5), 2));
    }

    #[test]
    fn disconnected_rejected() {
        let err = Graph::from_edges(&[(0, 1), (2, 3)]).unwrap_err();
        match err {
            Error::Disconnected(a, b) => assert!(a != b),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn self_loop_rejected() {
        assert!(matches!(
            Graph::from_edges(&[(0, 0), (0, 1)]),
            Err(Error::SelfLoop(0))
        ));
    }

    #[test]
    fn duplicate_edge_rejected_unless_multigraph() {
        assert!(matches!(
            Graph::from_edges(&[(0, 1), (1, 0)]),
            Err(Error::DuplicateEdge(0, 1))
        ));
        let g = Graph::multigraph_from_edges(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.girth(), Some(2));
    }

    #[test]
    fn girth_and_diameter_small_cases() {
        assert_eq!(k4().girth_and_diameter(), (Some(3), 1));
        let path = Graph::from_edges(&[(0, 1), (1, 2)]).unwrap();
        assert_eq!(path.girth_and_diameter(), (None, 2));
        assert_eq!(cycle(9).girth_and_diameter(), (Some(9), 4));
    }

    #[test]
    fn subdivision_law() {
        let (g, _) = (k4(), ());
        let s = g.subdivide(2).unwrap();
        assert_eq!(s.vertex_count(), 4 + 6);
        assert_eq!(s.girth(), Some(6));
        // subdivision multiplies girth
        for j in 1..=3 {
            let s = petersen().subdivide(j).unwrap();
            assert_eq!(s.girth(), Some(5 * j));
        }
        let nine_cycle = triangle().subdivide(3).unwrap();
        assert_eq!(nine_cycle.vertex_count(), 9);
        assert_eq!(nine_cycle.girth(), Some(9));
        assert!(matches!(g.subdivide(0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn standard_walk_values() {
        let (k, nu) = triangle().standard_walk();
        for u in 0..3 {
            assert!((nu.weight(u) - 1.0 / 3.0).abs() < 1e-15);
            for v in 0..3 {
                let expected = if u == v { 0.0 } else { 0.5 };
                assert!((k.prob(u, v) - expected).abs() < 1e-15);
            }
        }
        let star = Graph::from_edges(&[(0, 1), (0, 2), (0, 3)]).unwrap();
        let (k, nu) = star.standard_walk();
        assert!((nu.weight(0) - 0.5).abs() < 1e-15);
        assert!((nu.weight(1) - 1.0 / 6.0).abs() < 1e-15);
        assert!((k.prob(0, 1) - 1.0 / 3.0).abs() < 1e-15);
        assert!((k.prob(1, 0) - 1.0).abs() < 1e-15);

        let (k, nu) = petersen().standard_walk();
        assert!((nu.weight(7) - 0.1).abs() < 1e-15);
        assert!((k.prob(0, 1) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn kernel_power_properties() {
        let (k, _) = triangle().standard_walk();
        let k2 = k.power(2).unwrap();
        for u in 0..3 {
            assert!((k2.prob(u, u) - 0.5).abs() < 1e-15);
        }
        // power(1) is the kernel itself
        let k1 = k.power(1).unwrap();
        for u in 0..3 {
            for v in 0..3 {
                assert_eq!(k.prob(u, v), k1.prob(u, v));
            }
        }
        // bipartite parity on C4
        let (c4, _) = cycle(4).standard_walk();
        let c4sq = c4.power(2).unwrap();
        for u in 0..4 {
            for v in 0..4 {
                let even = (u + v) % 2 == 0;
                assert_eq!(c4sq.prob(u, v) > 0.0, even);
            }
        }
        // semigroup law
        let (k, _) = petersen().standard_walk();
        let lhs = k.power(5).unwrap();
        let rhs = k.power(2).unwrap().convolve(&k.power(3).unwrap()).unwrap();
        for u in 0..10 {
            for v in 0..10 {
                assert!((lhs.prob(u, v) - rhs.prob(u, v)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn detailed_balance_under_powers() {
        for g in [triangle(), k4(), petersen()] {
            let (k, _) = g.standard_walk();
            for n in 1..=6 {
                k.power(n).unwrap().check_detailed_balance(1e-12).unwrap();
            }
        }
    }

    #[test]
    fn spectral_gaps() {
        assert!((k4().spectral_gap_real().unwrap() - 4.0 / 3.0).abs() < 1e-10);
        assert!((petersen().spectral_gap_real().unwrap() - 2.0 / 3.0).abs() < 1e-10);
        for n in [3usize, 4, 5, 6, 12] {
            let expected = 1.0 - (2.0 * std::f64::consts::PI / n as f64).cos();
            assert!((cycle(n).spectral_gap_real().unwrap() - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn rayleigh_never_below_gap() {
        use rand::{Rng, SeedableRng};
        let g = petersen();
        let gap = g.spectral_gap_real().unwrap();
        let (k, _) = g.standard_walk();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let phi: Vec<f64> = (0..10).map(|_| rng.gen_range(-1.0..1.0)).collect();
            if phi.iter().all(|&x| x == phi[0]) {
                continue;
            }
            assert!(k.rayleigh_quotient(&phi).unwrap() >= gap - 1e-9);
        }
    }

    #[test]
    fn embedded_path_counts() {
        assert_eq!(triangle().count_embedded_paths(2).unwrap(), 3);
        assert_eq!(k4().count_embedded_paths(3).unwrap(), 18);
        let path = Graph::from_edges(&[(0, 1), (1, 2)]).unwrap();
        assert_eq!(path.count_embedded_paths(3).unwrap(), 3);
        assert!(matches!(
            path.count_embedded_paths(0),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn graph_json_round_trip() {
        let g = petersen();
        let s = serde_json::to_string(&g).unwrap();
        let back: Graph = serde_json::from_str(&s).unwrap();
        assert_eq!(back.vertex_count(), 10);
        assert_eq!(back.edge_count(), 15);
    }
}
