//! Metric cones over edge-length graphs.
//!
//! The direction space is a graph with positive edge lengths; it need not
//! be connected (a pod is the cone over isolated points). The cone law
//! `d((u,t), (u',t'))² = t² + t'² - 2 t t' cos(min(d_S(u,u'), π))` defines
//! a CAT(0) metric exactly when every metric cycle of the direction graph
//! has length ≥ 2π, which the constructor enforces.
//!
//! Geodesics between rays with direction distance below π are computed by
//! unfolding the two radii into a planar sector and interpolating there;
//! at or beyond π they run through the apex (ties broken through the apex).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

use super::ConePoint;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;
const PI: f64 = std::f64::consts::PI;

/// A position in the direction space: a vertex, or an interior position on
/// a direction edge at `offset` from the lower-indexed endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum DirPoint {
    Vertex(usize),
    Edge { edge: usize, offset: f64 },
}

/// The direction space: vertices and edges with lengths. Unreachable pairs
/// are at angle π in the cone.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DirectionGraph {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize, f64)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "ConeDto", into = "ConeDto")]
pub struct GraphCone {
    dirs: DirectionGraph,
    adj: Vec<Vec<(usize, usize)>>,            // (neighbor, edge id)
    vdist: Vec<Vec<f64>>,                     // all-pairs, f64::INFINITY if unreachable
    parent: Vec<Vec<Option<(usize, usize)>>>, // shortest-path trees per root
}

#[derive(Serialize, Deserialize)]
struct ConeDto {
    directions: DirectionGraph,
}

impl From<GraphCone> for ConeDto {
    fn from(c: GraphCone) -> ConeDto {
        ConeDto { directions: c.dirs }
    }
}

impl TryFrom<ConeDto> for GraphCone {
    type Error = Error;
    fn try_from(dto: ConeDto) -> Result<GraphCone> {
        GraphCone::new(dto.directions)
    }
}

impl GraphCone {
    pub fn new(dirs: DirectionGraph) -> Result<GraphCone> {
        if dirs.vertex_count == 0 {
            return Err(Error::InvalidParameter(
                "direction space needs at least one point".into(),
            ));
        }
        for &(u, v, l) in &dirs.edges {
            if u >= dirs.vertex_count || v >= dirs.vertex_count {
                return Err(Error::VertexOutOfRange {
                    index: u.max(v),
                    vertex_count: dirs.vertex_count,
                });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if l <= 0.0 || l.is_nan() {
                return Err(Error::InvalidParameter(
                    "direction edge lengths must be positive".into(),
                ));
            }
        }
        let mut adj = vec![Vec::new(); dirs.vertex_count];
        for (id, &(u, v, _)) in dirs.edges.iter().enumerate() {
            adj[u].push((v, id));
            adj[v].push((u, id));
        }
        let mut cone = GraphCone {
            dirs,
            adj,
            vdist: Vec::new(),
            parent: Vec::new(),
        };
        for root in 0..cone.dirs.vertex_count {
            let (d, p) = cone.dijkstra(root, usize::MAX);
            cone.vdist.push(d);
            cone.parent.push(p);
        }
        cone.check_systole()?;
        Ok(cone)
    }

    /// Cone over `m` isolated points: the `m`-pod.
    pub fn pod(m: usize) -> Result<GraphCone> {
        GraphCone::new(DirectionGraph {
            vertex_count: m,
            edges: Vec::new(),
        })
    }

    /// Cone over a graph, taking its edge lengths as angular lengths.
    pub fn over_graph(g: &Graph) -> Result<GraphCone> {
        let edges = g
            .edges()
            .iter()
            .enumerate()
            .map(|(id, &(u, v))| (u, v, g.length(id)))
            .collect();
        GraphCone::new(DirectionGraph {
            vertex_count: g.vertex_count(),
            edges,
        })
    }

    /// Cone over a single arc of the given angular length.
    pub fn over_arc(angle: f64) -> Result<GraphCone> {
        GraphCone::new(DirectionGraph {
            vertex_count: 2,
            edges: vec![(0, 1, angle)],
        })
    }

    pub fn direction_graph(&self) -> &DirectionGraph {
        &self.dirs
    }

    pub fn direction_vertex_count(&self) -> usize {
        self.dirs.vertex_count
    }

    fn dijkstra(&self, root: usize, skip_edge: usize) -> (Vec<f64>, Vec<Option<(usize, usize)>>) {
        use std::cmp::Ordering;
        use std::collections::BinaryHeap;

        #[derive(PartialEq)]
        struct Entry(f64, usize);
        impl Eq for Entry {}
        impl Ord for Entry {
            fn cmp(&self, other: &Self) -> Ordering {
                // min-heap on (distance, vertex) — deterministic ties
                other
                    .0
                    .partial_cmp(&self.0)
                    .unwrap()
                    .then(other.1.cmp(&self.1))
            }
        }
        impl PartialOrd for Entry {
            fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
                Some(self.cmp(other))
            }
        }

        let n = self.dirs.vertex_count;
        let mut dist = vec![f64::INFINITY; n];
        let mut parent = vec![None; n];
        let mut done = vec![false; n];
        dist[root] = 0.0;
        let mut heap = BinaryHeap::new();
        heap.push(Entry(0.0, root));
        while let Some(Entry(d, u)) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            for &(v, eid) in &self.adj[u] {
                if eid == skip_edge {
                    continue;
                }
                let nd = d + self.dirs.edges[eid].2;
                if nd < dist[v] || (nd == dist[v] && parent[v].is_some_and(|(p, _)| u < p)) {
                    dist[v] = nd;
                    parent[v] = Some((u, eid));
                    heap.push(Entry(nd, v));
                }
            }
        }
        (dist, parent)
    }

    /// Shortest metric cycle must be at least 2π for the cone to be CAT(0).
    fn check_systole(&self) -> Result<()> {
        for (eid, &(u, v, l)) in self.dirs.edges.iter().enumerate() {
            let (d, _) = self.dijkstra(u, eid);
            let cycle = d[v] + l;
            if cycle < TWO_PI - 1e-9 {
                return Err(Error::InvalidParameter(format!(
                    "direction graph has a cycle of length {cycle:.6} < 2π; the cone would not be CAT(0)"
                )));
            }
        }
        Ok(())
    }

    pub fn validate_dir(&self, d: &DirPoint) -> Result<()> {
        match *d {
            DirPoint::Vertex(v) => {
                if v >= self.dirs.vertex_count {
                    return Err(Error::SpaceMismatch(format!(
                        "direction vertex {v} out of range"
                    )));
                }
            }
            DirPoint::Edge { edge, offset } => {
                if edge >= self.dirs.edges.len() {
                    return Err(Error::SpaceMismatch(format!(
                        "direction edge {edge} out of range"
                    )));
                }
                let l = self.dirs.edges[edge].2;
                if !(0.0..=l).contains(&offset) {
                    return Err(Error::SpaceMismatch(format!(
                        "offset {offset} outside [0, {l}]"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn validate_point(&self, p: &ConePoint) -> Result<()> {
        match p {
            ConePoint::Apex => Ok(()),
            ConePoint::Ray { dir, radius } => {
                if *radius < 0.0 || radius.is_nan() {
                    return Err(Error::SpaceMismatch(format!("negative radius {radius}")));
                }
                self.validate_dir(dir)
            }
        }
    }

    fn canonical_dir(&self, d: DirPoint) -> DirPoint {
        match d {
            DirPoint::Edge { edge, offset } => {
                let (a, b, l) = self.dirs.edges[edge];
                if offset == 0.0 {
                    DirPoint::Vertex(a)
                } else if offset == l {
                    DirPoint::Vertex(b)
                } else {
                    d
                }
            }
            v => v,
        }
    }

    fn canonical(&self, p: ConePoint) -> ConePoint {
        match p {
            ConePoint::Ray { dir, radius } => {
                if radius == 0.0 {
                    ConePoint::Apex
                } else {
                    ConePoint::Ray {
                        dir: self.canonical_dir(dir),
                        radius,
                    }
                }
            }
            ConePoint::Apex => p,
        }
    }

    /// Exit routes of a direction point: (vertex, cost to reach it).
    fn routes(&self, d: DirPoint) -> Vec<(usize, f64)> {
        match d {
            DirPoint::Vertex(v) => vec![(v, 0.0)],
            DirPoint::Edge { edge, offset } => {
                let (a, b, l) = self.dirs.edges[edge];
                vec![(a, offset), (b, l - offset)]
            }
        }
    }

    /// Shortest-path distance in the direction space (∞ when disconnected).
    pub fn dir_distance(&self, x: &DirPoint, y: &DirPoint) -> f64 {
        let x = self.canonical_dir(*x);
        let y = self.canonical_dir(*y);
        let mut best = f64::INFINITY;
        if let (
            DirPoint::Edge {
                edge: e1,
                offset: o1,
            },
            DirPoint::Edge {
                edge: e2,
                offset: o2,
            },
        ) = (x, y)
        {
            if e1 == e2 {
                best = (o1 - o2).abs();
            }
        }
        for &(px, cx) in &self.routes(x) {
            for &(py, cy) in &self.routes(y) {
                best = best.min(cx + self.vdist[px][py] + cy);
            }
        }
        best
    }

    /// Angle used by the cone law: the direction distance truncated at π.
    pub fn angle(&self, x: &DirPoint, y: &DirPoint) -> f64 {
        self.dir_distance(x, y).min(PI)
    }

    pub fn distance(&self, x: &ConePoint, y: &ConePoint) -> f64 {
        let x = self.canonical(*x);
        let y = self.canonical(*y);
        match (x, y) {
            (ConePoint::Apex, ConePoint::Apex) => 0.0,
            (ConePoint::Apex, ConePoint::Ray { radius, .. })
            | (ConePoint::Ray { radius, .. }, ConePoint::Apex) => radius,
            (ConePoint::Ray { dir: u, radius: t }, ConePoint::Ray { dir: v, radius: s }) => {
                let th = self.angle(&u, &v);
                (t * t + s * s - 2.0 * t * s * th.cos()).max(0.0).sqrt()
            }
        }
    }

    /// `⟨v, w⟩ = t t' cos(min(d_S, π))`; zero if either vector is the apex.
    pub fn inner(&self, x: &ConePoint, y: &ConePoint) -> f64 {
        let x = self.canonical(*x);
        let y = self.canonical(*y);
        match (x, y) {
            (ConePoint::Ray { dir: u, radius: t }, ConePoint::Ray { dir: v, radius: s }) => {
                t * s * self.angle(&u, &v).cos()
            }
            _ => 0.0,
        }
    }

    /// Shortest route in the direction space as a walkable polyline.
    /// Requires a finite direction distance.
    fn dir_path(&self, x: DirPoint, y: DirPoint) -> DirPath {
        let x = self.canonical_dir(x);
        let y = self.canonical_dir(y);
        // candidate: direct along a shared edge
        let mut best: Option<(f64, DirPath)> = None;
        if let (
            DirPoint::Edge {
                edge: e1,
                offset: o1,
            },
            DirPoint::Edge {
                edge: e2,
                offset: o2,
            },
        ) = (x, y)
        {
            if e1 == e2 {
                let path = DirPath {
                    segments: vec![DirSegment {
                        edge: e1,
                        from: o1,
                        to: o2,
                    }],
                };
                best = Some(((o1 - o2).abs(), path));
            }
        }
        for &(px, cx) in &self.routes(x) {
            for &(py, cy) in &self.routes(y) {
                let total = cx + self.vdist[px][py] + cy;
                if best.as_ref().is_none_or(|(b, _)| total < *b) {
                    let mut segments = Vec::new();
                    if let DirPoint::Edge { edge, offset } = x {
                        let (a, _, l) = self.dirs.edges[edge];
                        segments.push(DirSegment {
                            edge,
                            from: offset,
                            to: if px == a { 0.0 } else { l },
                        });
                    }
                    // vertex chain px -> py from the shortest-path tree at px
                    let mut chain = Vec::new();
                    let mut v = py;
                    while v != px {
                        let (prev, eid) = self.parent[px][v].expect("finite distance");
                        chain.push((prev, eid));
                        v = prev;
                    }
                    chain.reverse();
                    for (from_v, eid) in chain {
                        let (a, _, l) = self.dirs.edges[eid];
                        let (f, t) = if from_v == a { (0.0, l) } else { (l, 0.0) };
                        segments.push(DirSegment {
                            edge: eid,
                            from: f,
                            to: t,
                        });
                    }
                    if let DirPoint::Edge { edge, offset } = y {
                        let (a, _, l) = self.dirs.edges[edge];
                        segments.push(DirSegment {
                            edge,
                            from: if py == a { 0.0 } else { l },
                            to: offset,
                        });
                    }
                    best = Some((total, DirPath { segments }));
                }
            }
        }
        best.expect("dir_path requires a finite direction distance")
            .1
    }

    pub fn geodesic_point(&self, x: &ConePoint, y: &ConePoint, s: f64) -> ConePoint {
        let x = self.canonical(*x);
        let y = self.canonical(*y);
        match (x, y) {
            (ConePoint::Apex, ConePoint::Apex) => ConePoint::Apex,
            (ConePoint::Apex, ConePoint::Ray { dir, radius }) => self.canonical(ConePoint::Ray {
                dir,
                radius: s * radius,
            }),
            (ConePoint::Ray { dir, radius }, ConePoint::Apex) => self.canonical(ConePoint::Ray {
                dir,
                radius: (1.0 - s) * radius,
            }),
            (ConePoint::Ray { dir: u, radius: t }, ConePoint::Ray { dir: v, radius: r }) => {
                let th = self.dir_distance(&u, &v);
                if th == 0.0 {
                    // same direction: radial interpolation
                    return self.canonical(ConePoint::Ray {
                        dir: u,
                        radius: (1.0 - s) * t + s * r,
                    });
                }
                if th >= PI {
                    // through the apex (ties at exactly π included)
                    let total = t + r;
                    let walked = s * total;
                    return if walked < t {
                        ConePoint::Ray {
                            dir: u,
                            radius: t - walked,
                        }
                    } else if walked > t {
                        ConePoint::Ray {
                            dir: v,
                            radius: walked - t,
                        }
                    } else {
                        ConePoint::Apex
                    };
                }
                // unfold into a planar sector of angle th
                let zx = (1.0 - s) * t + s * r * th.cos();
                let zy = s * r * th.sin();
                let radius = (zx * zx + zy * zy).sqrt();
                if radius < 1e-15 {
                    return ConePoint::Apex;
                }
                let phi = zy.atan2(zx).clamp(0.0, th);
                let path = self.dir_path(u, v);
                let dir = self.canonical_dir(path.point_at(phi));
                ConePoint::Ray { dir, radius }
            }
        }
    }

    /// Maximize `g(u) = Σ cᵢ cos(min(d_S(u, uᵢ), π))` over the direction
    /// space. Returns the best direction and value. For a measure on the
    /// cone with leg moments `cᵢ = wᵢ rᵢ`, the barycenter is `(u*, g(u*))`
    /// when `g(u*) > 0` and the apex otherwise.
    pub(super) fn maximize_radial_mean(&self, support: &[(DirPoint, f64)]) -> (DirPoint, f64) {
        let eval = |d: &DirPoint| -> f64 {
            support
                .iter()
                .map(|(u, c)| c * self.angle(d, u).cos())
                .sum()
        };
        let mut best_dir = DirPoint::Vertex(0);
        let mut best = f64::NEG_INFINITY;
        let mut consider = |d: DirPoint, v: f64| {
            if v > best {
                best = v;
                best_dir = d;
            }
        };
        for v in 0..self.dirs.vertex_count {
            let d = DirPoint::Vertex(v);
            consider(d, eval(&d));
        }
        for (eid, &(a, b, l)) in self.dirs.edges.iter().enumerate() {
            // candidate offsets: piece crossings, kinks, π-truncations, and
            // trig-critical points of the active piece on each subinterval
            let mut breaks: Vec<f64> = vec![0.0, l];
            for (u, _) in support {
                let u = self.canonical_dir(*u);
                let da = self.vdist_from(a, &u);
                let db = self.vdist_from(b, &u);
                let mut push = |x: f64| {
                    if x > 0.0 && x < l {
                        breaks.push(x);
                    }
                };
                if da.is_finite() && db.is_finite() {
                    push((db + l - da) / 2.0);
                }
                if da.is_finite() {
                    push(PI - da);
                }
                if db.is_finite() {
                    push(l - (PI - db));
                }
                if let DirPoint::Edge { edge, offset } = u {
                    if edge == eid {
                        push(offset);
                        if da.is_finite() {
                            push((offset - da) / 2.0);
                        }
                        if db.is_finite() {
                            push((l + db + offset) / 2.0);
                        }
                        push(offset - PI);
                        push(offset + PI);
                    }
                }
            }
            breaks.sort_by(|p, q| p.partial_cmp(q).unwrap());
            breaks.dedup_by(|p, q| (*p - *q).abs() < 1e-12);
            for w in breaks.windows(2) {
                let (x0, x1) = (w[0], w[1]);
                consider(
                    DirPoint::Edge {
                        edge: eid,
                        offset: x0,
                    },
                    eval(&DirPoint::Edge {
                        edge: eid,
                        offset: x0,
                    }),
                );
                consider(
                    DirPoint::Edge {
                        edge: eid,
                        offset: x1,
                    },
                    eval(&DirPoint::Edge {
                        edge: eid,
                        offset: x1,
                    }),
                );
                // active trig form at the midpoint: g = K + C cos x + S sin x
                let xm = 0.5 * (x0 + x1);
                let mut c_sum = 0.0;
                let mut s_sum = 0.0;
                for (u, c) in support {
                    let u = self.canonical_dir(*u);
                    let (alpha, slope) = match self.active_piece(eid, a, b, l, xm, &u) {
                        Some(p) => p,
                        None => continue, // truncated at π: constant
                    };
                    match slope {
                        1 => {
                            c_sum += c * alpha.cos();
                            s_sum -= c * alpha.sin();
                        }
                        _ => {
                            c_sum += c * alpha.cos();
                            s_sum += c * alpha.sin();
                        }
                    }
                }
                // critical points of C cos x + S sin x within (x0, x1)
                let base = s_sum.atan2(c_sum);
                let mut k = ((x0 - base) / PI).floor();
                loop {
                    let xc = base + k * PI;
                    if xc > x1 {
                        break;
                    }
                    if xc > x0 && xc < x1 {
                        consider(
                            DirPoint::Edge {
                                edge: eid,
                                offset: xc,
                            },
                            eval(&DirPoint::Edge {
                                edge: eid,
                                offset: xc,
                            }),
                        );
                    }
                    k += 1.0;
                }
            }
        }
        (self.canonical_dir(best_dir), best)
    }

    fn vdist_from(&self, v: usize, u: &DirPoint) -> f64 {
        self.dir_distance(&DirPoint::Vertex(v), u)
    }

    /// Active linear piece `θ(x) = α + slope·x` of the direction distance
    /// from offset `x` on edge `eid = (a, b, l)` to `u`, evaluated at `x`;
    /// `None` when the distance is truncated at π there.
    fn active_piece(
        &self,
        eid: usize,
        a: usize,
        b: usize,
        l: f64,
        x: f64,
        u: &DirPoint,
    ) -> Option<(f64, i32)> {
        let da = self.vdist_from(a, u);
        let db = self.vdist_from(b, u);
        let mut pieces: Vec<(f64, f64, i32)> = Vec::new(); // (value at x, α, slope)
        if da.is_finite() {
            pieces.push((da + x, da, 1));
        }
        if db.is_finite() {
            pieces.push((db + l - x, db + l, -1));
        }
        if let DirPoint::Edge { edge, offset } = u {
            if *edge == eid {
                if x >= *offset {
                    pieces.push((x - offset, -offset, 1));
                } else {
                    pieces.push((offset - x, *offset, -1));
                }
            }
        }
        let best = pieces
            .into_iter()
            .min_by(|p, q| p.0.partial_cmp(&q.0).unwrap())?;
        if best.0 >= PI {
            None
        } else {
            Some((best.1, best.2))
        }
    }

    pub fn sample_point(&self, rng: &mut impl rand::Rng) -> ConePoint {
        if rng.gen_bool(0.1) {
            return ConePoint::Apex;
        }
        let dir = self.sample_dir(rng);
        ConePoint::Ray {
            dir,
            radius: rng.gen_range(0.05..2.0),
        }
    }

    pub fn sample_dir(&self, rng: &mut impl rand::Rng) -> DirPoint {
        if self.dirs.edges.is_empty() || rng.gen_bool(0.3) {
            DirPoint::Vertex(rng.gen_range(0..self.dirs.vertex_count))
        } else {
            let e = rng.gen_range(0..self.dirs.edges.len());
            DirPoint::Edge {
                edge: e,
                offset: rng.gen_range(0.0..=self.dirs.edges[e].2),
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct DirSegment {
    edge: usize,
    from: f64,
    to: f64,
}

struct DirPath {
    segments: Vec<DirSegment>,
}

impl DirPath {
    fn point_at(&self, mut target: f64) -> DirPoint {
        for seg in &self.segments {
            let len = (seg.to - seg.from).abs();
            if target <= len {
                let dir = if seg.to >= seg.from { 1.0 } else { -1.0 };
                return DirPoint::Edge {
                    edge: seg.edge,
                    offset: seg.from + dir * target,
                };
            }
            target -= len;
        }
        let last = self.segments.last().expect("nonempty path");
        DirPoint::Edge {
            edge: last.edge,
            offset: last.to,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc_cone() -> GraphCone {
        GraphCone::over_arc(PI / 3.0).unwrap()
    }

    fn ray(dir: DirPoint, radius: f64) -> ConePoint {
        ConePoint::Ray { dir, radius }
    }

    #[test]
    fn unit_chord_at_sixty_degrees() {
        let c = arc_cone();
        let x = ray(DirPoint::Vertex(0), 1.0);
        let y = ray(DirPoint::Vertex(1), 1.0);
        assert!((c.distance(&x, &y) - 1.0).abs() < 1e-15);
        assert_eq!(c.distance(&x, &x), 0.0);
    }

    #[test]
    fn pod_distances_add_through_apex() {
        let p3 = GraphCone::pod(3).unwrap();
        let x = ray(DirPoint::Vertex(0), 0.8);
        let y = ray(DirPoint::Vertex(2), 1.3);
        assert!((p3.distance(&x, &y) - 2.1).abs() < 1e-15);
        let mid = p3.geodesic_point(&x, &y, 0.8 / 2.1);
        assert_eq!(mid, ConePoint::Apex);
    }

    #[test]
    fn symmetric_midpoint_is_apex() {
        let p3 = GraphCone::pod(3).unwrap();
        let x = ray(DirPoint::Vertex(0), 1.0);
        let y = ray(DirPoint::Vertex(1), 1.0);
        assert_eq!(p3.geodesic_point(&x, &y, 0.5), ConePoint::Apex);
    }

    #[test]
    fn planar_unfolding_midpoint() {
        let c = arc_cone();
        let x = ray(DirPoint::Vertex(0), 1.0);
        let y = ray(DirPoint::Vertex(1), 1.0);
        let mid = c.geodesic_point(&x, &y, 0.5);
        match mid {
            ConePoint::Ray { dir, radius } => {
                assert!((radius - (PI / 6.0).cos()).abs() < 1e-12);
                let off = c.dir_distance(&dir, &DirPoint::Vertex(0));
                assert!((off - PI / 6.0).abs() < 1e-12);
            }
            _ => panic!("midpoint should not be the apex"),
        }
        // endpoints reproduced
        assert!(c.distance(&c.geodesic_point(&x, &y, 0.0), &x) < 1e-12);
        assert!(c.distance(&c.geodesic_point(&x, &y, 1.0), &y) < 1e-12);
    }

    #[test]
    fn geodesic_parametrization_on_heawood_cone() {
        use rand::SeedableRng;
        let (g, _) = crate::families::generalized_triangle(2).unwrap();
        let cone = GraphCone::over_graph(&g).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let x = cone.sample_point(&mut rng);
            let y = cone.sample_point(&mut rng);
            let d = cone.distance(&x, &y);
            for s in [0.25, 0.5, 0.75] {
                let p = cone.geodesic_point(&x, &y, s);
                let dx = cone.distance(&x, &p);
                let dy = cone.distance(&p, &y);
                assert!(
                    (dx - s * d).abs() < 1e-9,
                    "d(x,c(s)) = {dx}, want {}",
                    s * d
                );
                assert!((dy - (1.0 - s) * d).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn short_cycle_rejected() {
        // triangle with edge length π/3 has a cycle of length π < 2π
        let dirs = DirectionGraph {
            vertex_count: 3,
            edges: vec![(0, 1, PI / 3.0), (1, 2, PI / 3.0), (0, 2, PI / 3.0)],
        };
        assert!(GraphCone::new(dirs).is_err());
    }

    #[test]
    fn heawood_cone_accepted() {
        let (g, _) = crate::families::generalized_triangle(2).unwrap();
        assert!(GraphCone::over_graph(&g).is_ok());
    }

    #[test]
    fn inner_products_on_pods() {
        let p3 = GraphCone::pod(3).unwrap();
        let x = ray(DirPoint::Vertex(0), 2.0);
        let y = ray(DirPoint::Vertex(1), 0.5);
        let z = ray(DirPoint::Vertex(0), 0.5);
        assert!((p3.inner(&x, &y) + 1.0).abs() < 1e-15); // -t t'
        assert!((p3.inner(&x, &z) - 1.0).abs() < 1e-15); // +t t'
        assert_eq!(p3.inner(&x, &ConePoint::Apex), 0.0);
    }
}
