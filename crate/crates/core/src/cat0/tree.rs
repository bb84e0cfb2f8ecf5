//! Metric trees: acyclic connected graphs with edge lengths, points on
//! edges, exact geodesics and pod tangent cones.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

use super::cone::GraphCone;

/// A point of a metric tree: a vertex, or an interior position on an edge
/// at `offset` from the edge's lower-indexed endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum TreePoint {
    Vertex(usize),
    Edge { edge: usize, offset: f64 },
}

/// Acyclic connected graph with edge lengths and precomputed vertex
/// distances.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "TreeDto", into = "TreeDto")]
pub struct MetricTree {
    graph: Graph,
    vertex_dist: Vec<Vec<f64>>,
    parent: Vec<Vec<Option<(usize, usize)>>>, // parent[root][v] = (previous vertex, edge)
}

#[derive(Serialize, Deserialize)]
struct TreeDto {
    graph: Graph,
}

impl From<MetricTree> for TreeDto {
    fn from(t: MetricTree) -> TreeDto {
        TreeDto { graph: t.graph }
    }
}

impl TryFrom<TreeDto> for MetricTree {
    type Error = Error;
    fn try_from(dto: TreeDto) -> Result<MetricTree> {
        MetricTree::new(dto.graph)
    }
}

impl MetricTree {
    pub fn new(graph: Graph) -> Result<MetricTree> {
        if !graph.is_tree() {
            return Err(Error::InvalidParameter(
                "metric tree requires an acyclic connected graph".into(),
            ));
        }
        let n = graph.vertex_count();
        let mut vertex_dist = vec![vec![0.0; n]; n];
        let mut parent = vec![vec![None; n]; n];
        for root in 0..n {
            let mut seen = vec![false; n];
            seen[root] = true;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(x) = queue.pop_front() {
                for &(y, eid) in graph.neighbors(x) {
                    if !seen[y] {
                        seen[y] = true;
                        vertex_dist[root][y] = vertex_dist[root][x] + graph.length(eid);
                        parent[root][y] = Some((x, eid));
                        queue.push_back(y);
                    }
                }
            }
        }
        Ok(MetricTree {
            graph,
            vertex_dist,
            parent,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn validate_point(&self, p: &TreePoint) -> Result<()> {
        match *p {
            TreePoint::Vertex(v) => {
                if v >= self.graph.vertex_count() {
                    return Err(Error::SpaceMismatch(format!("vertex {v} out of range")));
                }
            }
            TreePoint::Edge { edge, offset } => {
                if edge >= self.graph.edge_count() {
                    return Err(Error::SpaceMismatch(format!("edge {edge} out of range")));
                }
                let len = self.graph.length(edge);
                if !(0.0..=len).contains(&offset) {
                    return Err(Error::SpaceMismatch(format!(
                        "offset {offset} outside [0, {len}]"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Snap edge endpoints to vertices.
    fn canonical(&self, p: &TreePoint) -> TreePoint {
        match *p {
            TreePoint::Edge { edge, offset } => {
                let (a, b) = self.graph.edge(edge);
                if offset == 0.0 {
                    TreePoint::Vertex(a)
                } else if offset == self.graph.length(edge) {
                    TreePoint::Vertex(b)
                } else {
                    *p
                }
            }
            v => v,
        }
    }

    pub fn vertex_distance(&self, u: usize, v: usize) -> f64 {
        self.vertex_dist[u][v]
    }

    /// Distance from a vertex to an arbitrary point.
    fn dist_vertex_point(&self, u: usize, p: &TreePoint) -> f64 {
        match self.canonical(p) {
            TreePoint::Vertex(v) => self.vertex_dist[u][v],
            TreePoint::Edge { edge, offset } => {
                let (a, b) = self.graph.edge(edge);
                let len = self.graph.length(edge);
                (self.vertex_dist[u][a] + offset).min(self.vertex_dist[u][b] + len - offset)
            }
        }
    }

    pub fn point_distance(&self, x: &TreePoint, y: &TreePoint) -> f64 {
        let x = self.canonical(x);
        let y = self.canonical(y);
        match (x, y) {
            (TreePoint::Vertex(u), _) => self.dist_vertex_point(u, &y),
            (_, TreePoint::Vertex(v)) => self.dist_vertex_point(v, &x),
            (
                TreePoint::Edge {
                    edge: e1,
                    offset: o1,
                },
                TreePoint::Edge {
                    edge: e2,
                    offset: o2,
                },
            ) => {
                if e1 == e2 {
                    return (o1 - o2).abs();
                }
                let (a, b) = self.graph.edge(e1);
                let len = self.graph.length(e1);
                (o1 + self.dist_vertex_point(a, &y)).min(len - o1 + self.dist_vertex_point(b, &y))
            }
        }
    }

    /// The geodesic as a polyline of edge segments.
    fn path(&self, x: &TreePoint, y: &TreePoint) -> TreePath {
        let x = self.canonical(x);
        let y = self.canonical(y);
        let mut segments: Vec<Segment> = Vec::new();
        if let (
            TreePoint::Edge {
                edge: e1,
                offset: o1,
            },
            TreePoint::Edge {
                edge: e2,
                offset: o2,
            },
        ) = (x, y)
        {
            if e1 == e2 {
                segments.push(Segment {
                    edge: e1,
                    from: o1,
                    to: o2,
                });
                return TreePath { segments };
            }
        }
        // exit vertex of x toward y
        let start = match x {
            TreePoint::Vertex(u) => u,
            TreePoint::Edge { edge, offset } => {
                let (a, b) = self.graph.edge(edge);
                let len = self.graph.length(edge);
                let via_a = offset + self.dist_vertex_point(a, &y);
                let via_b = (len - offset) + self.dist_vertex_point(b, &y);
                let exit = if via_a <= via_b { a } else { b };
                segments.push(Segment {
                    edge,
                    from: offset,
                    to: if exit == a { 0.0 } else { len },
                });
                exit
            }
        };
        // entry vertex of y seen from start
        let (end, tail) = match y {
            TreePoint::Vertex(v) => (v, None),
            TreePoint::Edge { edge, offset } => {
                let (c, d) = self.graph.edge(edge);
                let len = self.graph.length(edge);
                let via_c = self.vertex_dist[start][c] + offset;
                let via_d = self.vertex_dist[start][d] + len - offset;
                if via_c <= via_d {
                    (
                        c,
                        Some(Segment {
                            edge,
                            from: 0.0,
                            to: offset,
                        }),
                    )
                } else {
                    (
                        d,
                        Some(Segment {
                            edge,
                            from: len,
                            to: offset,
                        }),
                    )
                }
            }
        };
        // vertex chain start -> end, read off the BFS parents rooted at start
        let mut chain = Vec::new();
        let mut v = end;
        while v != start {
            let (prev, eid) = self.parent[start][v].expect("tree is connected");
            chain.push((prev, v, eid));
            v = prev;
        }
        chain.reverse();
        for (from_v, _to_v, eid) in chain {
            let (a, _) = self.graph.edge(eid);
            let len = self.graph.length(eid);
            let (f, t) = if from_v == a { (0.0, len) } else { (len, 0.0) };
            segments.push(Segment {
                edge: eid,
                from: f,
                to: t,
            });
        }
        if let Some(seg) = tail {
            segments.push(seg);
        }
        TreePath { segments }
    }

    pub fn geodesic_point(&self, x: &TreePoint, y: &TreePoint, s: f64) -> TreePoint {
        let total = self.point_distance(x, y);
        if total == 0.0 {
            return *x;
        }
        let path = self.path(x, y);
        let target = s * total;
        self.canonical(&path.point_at(target))
    }

    /// The first edge along the geodesic `p → q` and the distance, as a pod
    /// leg index into `legs`.
    pub(super) fn project_to_pod(
        &self,
        p: &TreePoint,
        q: &TreePoint,
        legs: &PodLegs,
    ) -> Result<(usize, f64)> {
        let d = self.point_distance(p, q);
        if d == 0.0 {
            return Ok((0, 0.0));
        }
        let path = self.path(p, q);
        let first = path
            .segments
            .iter()
            .find(|seg| (seg.from - seg.to).abs() > 0.0)
            .expect("positive-length geodesic has a real segment");
        let leg = match legs {
            PodLegs::Vertex(edges) => {
                edges.iter().position(|&e| e == first.edge).ok_or_else(|| {
                    Error::SpaceMismatch("geodesic leaves through a non-incident edge".into())
                })?
            }
            PodLegs::Interior { edge } => {
                if first.edge != *edge {
                    return Err(Error::SpaceMismatch(
                        "geodesic from an interior point must start along its edge".into(),
                    ));
                }
                // leg 0 points toward the lower offset (endpoint a)
                if first.to < first.from {
                    0
                } else {
                    1
                }
            }
        };
        Ok((leg, d))
    }

    /// The tangent cone at a tree point is a pod: one leg per direction.
    pub(super) fn tangent_pod(&self, p: &TreePoint) -> Result<(PodLegs, GraphCone)> {
        match self.canonical(p) {
            TreePoint::Vertex(v) => {
                let edges: Vec<usize> = self.graph.neighbors(v).iter().map(|&(_, e)| e).collect();
                let cone = GraphCone::pod(edges.len())?;
                Ok((PodLegs::Vertex(edges), cone))
            }
            TreePoint::Edge { edge, .. } => Ok((PodLegs::Interior { edge }, GraphCone::pod(2)?)),
        }
    }

    pub fn sample_point(&self, rng: &mut impl rand::Rng) -> TreePoint {
        let e = rng.gen_range(0..self.graph.edge_count());
        let len = self.graph.length(e);
        TreePoint::Edge {
            edge: e,
            offset: rng.gen_range(0.0..=len),
        }
    }
}

/// How pod legs at a tree point are indexed.
#[derive(Clone, Debug)]
pub(super) enum PodLegs {
    /// Legs follow the listed incident edge ids (vertex case).
    Vertex(Vec<usize>),
    /// Two legs along the containing edge: 0 toward the lower endpoint.
    Interior { edge: usize },
}

#[derive(Clone, Copy, Debug)]
struct Segment {
    edge: usize,
    from: f64,
    to: f64,
}

impl Segment {
    fn len(&self) -> f64 {
        (self.to - self.from).abs()
    }
}

struct TreePath {
    segments: Vec<Segment>,
}

impl TreePath {
    fn point_at(&self, mut target: f64) -> TreePoint {
        for seg in &self.segments {
            let l = seg.len();
            if target <= l {
                let dir = if seg.to >= seg.from { 1.0 } else { -1.0 };
                return TreePoint::Edge {
                    edge: seg.edge,
                    offset: seg.from + dir * target,
                };
            }
            target -= l;
        }
        let last = self.segments.last().expect("nonempty path");
        TreePoint::Edge {
            edge: last.edge,
            offset: last.to,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::spider;

    fn tripod() -> MetricTree {
        MetricTree::new(spider(3, 1)).unwrap()
    }

    #[test]
    fn tripod_distances() {
        let t = tripod();
        // legs are edges 0,1,2 from center 0 to leaves 1,2,3
        let x = TreePoint::Edge {
            edge: 0,
            offset: 0.7,
        };
        let y = TreePoint::Edge {
            edge: 1,
            offset: 0.5,
        };
        // offsets measured from the lower endpoint, which is the center
        assert!((t.point_distance(&x, &y) - 1.2).abs() < 1e-15);
        assert_eq!(t.point_distance(&x, &x), 0.0);
        assert!(
            (t.point_distance(&TreePoint::Vertex(1), &TreePoint::Vertex(3)) - 2.0).abs() < 1e-15
        );
    }

    #[test]
    fn geodesics_through_center() {
        let t = tripod();
        let x = TreePoint::Vertex(1);
        let y = TreePoint::Vertex(2);
        let mid = t.geodesic_point(&x, &y, 0.5);
        assert_eq!(mid, TreePoint::Vertex(0));
        let quarter = t.geodesic_point(&x, &y, 0.25);
        assert!((t.point_distance(&x, &quarter) - 0.5).abs() < 1e-12);
        assert_eq!(t.geodesic_point(&x, &y, 0.0), x);
        assert_eq!(t.geodesic_point(&x, &y, 1.0), y);
    }

    #[test]
    fn path_on_longer_tree() {
        let t = MetricTree::new(spider(3, 3)).unwrap();
        let x = TreePoint::Edge {
            edge: 2,
            offset: 0.25,
        }; // on leg 0, third edge
        let y = TreePoint::Vertex(7); // tip of leg 2 (vertices 7,8,9)
        let d = t.point_distance(&x, &y);
        for s in [0.1, 0.3, 0.5, 0.9] {
            let p = t.geodesic_point(&x, &y, s);
            assert!((t.point_distance(&x, &p) - s * d).abs() < 1e-12);
            assert!((t.point_distance(&p, &y) - (1.0 - s) * d).abs() < 1e-12);
        }
    }

    #[test]
    fn cycle_rejected() {
        let g = Graph::from_edges(&[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(MetricTree::new(g).is_err());
    }

    #[test]
    fn tangent_pod_at_branch_vertex() {
        use crate::cat0::{CatPoint, CatSpace, ConePoint};
        let space = CatSpace::Tree(tripod());
        let center = CatPoint::Tree(TreePoint::Vertex(0));
        let tc = space.tangent_cone_at(&center).unwrap();
        // the geodesic toward leaf 2 leaves along edge 1: leg index 1
        let v = tc
            .project(&space, &CatPoint::Tree(TreePoint::Vertex(2)))
            .unwrap();
        assert_eq!(v.length, 1.0);
        match &v.point {
            CatPoint::Cone(ConePoint::Ray { dir, radius }) => {
                assert_eq!(*dir, crate::cat0::DirPoint::Vertex(1));
                assert_eq!(*radius, 1.0);
            }
            other => panic!("expected a pod ray, got {other:?}"),
        }
        // interior basepoint: a two-legged pod with signed directions
        let mid = CatPoint::Tree(TreePoint::Edge {
            edge: 0,
            offset: 0.5,
        });
        let tc = space.tangent_cone_at(&mid).unwrap();
        let toward_center = tc.project(&space, &center).unwrap();
        let toward_leaf = tc
            .project(&space, &CatPoint::Tree(TreePoint::Vertex(1)))
            .unwrap();
        let inner = tc.inner(&toward_center, &toward_leaf).unwrap();
        assert!((inner + 0.25).abs() < 1e-15); // opposite legs: -t t' = -0.25
    }

    #[test]
    fn cone_tangent_cones_only_at_apex() {
        use crate::cat0::{CatPoint, CatSpace, ConePoint, DirPoint};
        let space = CatSpace::pod(3).unwrap();
        let apex = CatPoint::Cone(ConePoint::Apex);
        assert!(space.tangent_cone_at(&apex).is_ok());
        let ray = CatPoint::Cone(ConePoint::Ray {
            dir: DirPoint::Vertex(0),
            radius: 1.0,
        });
        assert!(matches!(
            space.tangent_cone_at(&ray),
            Err(crate::error::Error::Unsupported(_))
        ));
    }
}
