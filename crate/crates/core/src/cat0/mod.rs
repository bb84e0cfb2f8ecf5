//! Concrete CAT(0) models: Euclidean space, metric trees, and metric cones
//! over edge-length graphs.
//!
//! All three models share one interface: [`CatSpace::distance`],
//! [`CatSpace::geodesic_point`] and [`CatSpace::tangent_cone_at`]. Points
//! are plain data ([`CatPoint`]); operations validate that a point actually
//! belongs to the space they are called on.
//!
//! The cone over a direction graph `S` carries the distance
//! `d² = t² + t'² - 2 t t' cos(min(d_S, π))`. The constructor checks that
//! every metric cycle of `S` has length at least `2π`, which is exactly the
//! condition for the cone law to define a CAT(0) metric.

mod cone;
mod measure;
mod tree;

pub use cone::{DirPoint, DirectionGraph, GraphCone};
pub use measure::{
    barycenter, barycenter_oracle, tangent_inner_product_check, variance_report, FiniteMeasure,
    InnerProductReport, VarianceReport,
};
pub use tree::{MetricTree, TreePoint};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the implemented CAT(0) models.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum CatSpace {
    Euclidean { dim: usize },
    Tree(MetricTree),
    Cone(GraphCone),
}

/// A point of a [`CatSpace`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum CatPoint {
    Euclidean(Vec<f64>),
    Tree(TreePoint),
    Cone(ConePoint),
}

/// A point of a metric cone: the apex, or a direction at positive radius.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ConePoint {
    Apex,
    Ray { dir: DirPoint, radius: f64 },
}

impl CatSpace {
    pub fn euclidean(dim: usize) -> CatSpace {
        CatSpace::Euclidean { dim }
    }

    /// The `m`-pod: cone over `m` isolated directions (mutual angle π).
    pub fn pod(m: usize) -> Result<CatSpace> {
        Ok(CatSpace::Cone(GraphCone::pod(m)?))
    }

    pub fn validate_point(&self, p: &CatPoint) -> Result<()> {
        match (self, p) {
            (CatSpace::Euclidean { dim }, CatPoint::Euclidean(x)) => {
                if x.len() != *dim {
                    return Err(Error::SpaceMismatch(format!(
                        "point has {} coordinates, space has dimension {dim}",
                        x.len()
                    )));
                }
                Ok(())
            }
            (CatSpace::Tree(t), CatPoint::Tree(p)) => t.validate_point(p),
            (CatSpace::Cone(c), CatPoint::Cone(p)) => c.validate_point(p),
            _ => Err(Error::SpaceMismatch(
                "point variant does not match the space variant".into(),
            )),
        }
    }

    pub fn distance(&self, x: &CatPoint, y: &CatPoint) -> Result<f64> {
        self.validate_point(x)?;
        self.validate_point(y)?;
        Ok(match (self, x, y) {
            (CatSpace::Euclidean { .. }, CatPoint::Euclidean(a), CatPoint::Euclidean(b)) => {
                crate::linalg::sub_norm(a, b)
            }
            (CatSpace::Tree(t), CatPoint::Tree(a), CatPoint::Tree(b)) => t.point_distance(a, b),
            (CatSpace::Cone(c), CatPoint::Cone(a), CatPoint::Cone(b)) => c.distance(a, b),
            _ => unreachable!("validated above"),
        })
    }

    /// The point `c(s)` on the geodesic from `x` to `y` with
    /// `d(x, c(s)) = s·d(x, y)`, `s ∈ [0, 1]`.
    pub fn geodesic_point(&self, x: &CatPoint, y: &CatPoint, s: f64) -> Result<CatPoint> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::InvalidParameter(format!(
                "geodesic parameter {s} outside [0, 1]"
            )));
        }
        self.validate_point(x)?;
        self.validate_point(y)?;
        Ok(match (self, x, y) {
            (CatSpace::Euclidean { .. }, CatPoint::Euclidean(a), CatPoint::Euclidean(b)) => {
                CatPoint::Euclidean(
                    a.iter()
                        .zip(b)
                        .map(|(&p, &q)| (1.0 - s) * p + s * q)
                        .collect(),
                )
            }
            (CatSpace::Tree(t), CatPoint::Tree(a), CatPoint::Tree(b)) => {
                CatPoint::Tree(t.geodesic_point(a, b, s))
            }
            (CatSpace::Cone(c), CatPoint::Cone(a), CatPoint::Cone(b)) => {
                CatPoint::Cone(c.geodesic_point(a, b, s))
            }
            _ => unreachable!("validated above"),
        })
    }

    /// Tangent cone at `p`, for the combinations where it is implemented:
    /// any Euclidean point, any metric-tree point (a pod), and the apex of
    /// a cone (the cone itself).
    pub fn tangent_cone_at(&self, p: &CatPoint) -> Result<TangentCone> {
        self.validate_point(p)?;
        match (self, p) {
            (CatSpace::Euclidean { dim }, CatPoint::Euclidean(_)) => Ok(TangentCone {
                base: p.clone(),
                cone: CatSpace::euclidean(*dim),
                kind: TangentKind::Euclidean,
            }),
            (CatSpace::Tree(t), CatPoint::Tree(tp)) => {
                let (legs, cone) = t.tangent_pod(tp)?;
                Ok(TangentCone {
                    base: p.clone(),
                    cone: CatSpace::Cone(cone),
                    kind: TangentKind::TreePod { legs },
                })
            }
            (CatSpace::Cone(c), CatPoint::Cone(ConePoint::Apex)) => Ok(TangentCone {
                base: p.clone(),
                cone: CatSpace::Cone(c.clone()),
                kind: TangentKind::ConeApex,
            }),
            (CatSpace::Cone(_), CatPoint::Cone(_)) => Err(Error::Unsupported(
                "tangent cones of a graph cone are implemented only at the apex".into(),
            )),
            _ => unreachable!("validated above"),
        }
    }

    /// Deterministic pseudo-random point, for tests and multistart searches.
    pub fn sample_point(&self, rng: &mut impl rand::Rng) -> CatPoint {
        match self {
            CatSpace::Euclidean { dim } => {
                CatPoint::Euclidean((0..*dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
            }
            CatSpace::Tree(t) => CatPoint::Tree(t.sample_point(rng)),
            CatSpace::Cone(c) => CatPoint::Cone(c.sample_point(rng)),
        }
    }
}

/// Where a tangent cone came from; drives the projection `π_p`.
#[derive(Clone, Debug)]
enum TangentKind {
    Euclidean,
    /// Pod legs indexed by the incident edges listed here (tree vertex),
    /// or the two directions along the containing edge (interior point).
    TreePod {
        legs: tree::PodLegs,
    },
    ConeApex,
}

/// Tangent cone `TC_p Y` with its projection `π_p` and inner product
/// `⟨v, w⟩ = |v||w| cos ∠`.
#[derive(Clone, Debug)]
pub struct TangentCone {
    base: CatPoint,
    cone: CatSpace,
    kind: TangentKind,
}

/// A point of a tangent cone together with its length.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector {
    pub point: CatPoint,
    pub length: f64,
}

impl TangentCone {
    pub fn space(&self) -> &CatSpace {
        &self.cone
    }

    pub fn base(&self) -> &CatPoint {
        &self.base
    }

    /// The zero vector `0_p`.
    pub fn zero(&self) -> TangentVector {
        let point = match &self.cone {
            CatSpace::Euclidean { dim } => CatPoint::Euclidean(vec![0.0; *dim]),
            CatSpace::Cone(_) => CatPoint::Cone(ConePoint::Apex),
            CatSpace::Tree(_) => unreachable!("tangent cones are Euclidean or cones"),
        };
        TangentVector { point, length: 0.0 }
    }

    /// `π_p(q)`: the direction of the geodesic `p → q` at length `d(p, q)`.
    /// Requires `q` from the original space; the projection is
    /// distance-nonincreasing.
    pub fn project(&self, origin: &CatSpace, q: &CatPoint) -> Result<TangentVector> {
        origin.validate_point(q)?;
        match (&self.kind, &self.base, q) {
            (TangentKind::Euclidean, CatPoint::Euclidean(p), CatPoint::Euclidean(x)) => {
                let diff: Vec<f64> = x.iter().zip(p).map(|(a, b)| a - b).collect();
                let length = diff.iter().map(|d| d * d).sum::<f64>().sqrt();
                Ok(TangentVector {
                    point: CatPoint::Euclidean(diff),
                    length,
                })
            }
            (TangentKind::TreePod { legs }, CatPoint::Tree(p), CatPoint::Tree(x)) => {
                let tree = match origin {
                    CatSpace::Tree(t) => t,
                    _ => {
                        return Err(Error::SpaceMismatch(
                            "tree tangent cone used with a non-tree space".into(),
                        ))
                    }
                };
                let (leg, radius) = tree.project_to_pod(p, x, legs)?;
                let point = if radius == 0.0 {
                    CatPoint::Cone(ConePoint::Apex)
                } else {
                    CatPoint::Cone(ConePoint::Ray {
                        dir: DirPoint::Vertex(leg),
                        radius,
                    })
                };
                Ok(TangentVector {
                    point,
                    length: radius,
                })
            }
            (TangentKind::ConeApex, _, CatPoint::Cone(cp)) => {
                let length = match cp {
                    ConePoint::Apex => 0.0,
                    ConePoint::Ray { radius, .. } => *radius,
                };
                Ok(TangentVector {
                    point: CatPoint::Cone(*cp),
                    length,
                })
            }
            _ => Err(Error::SpaceMismatch(
                "projected point does not match the tangent cone's origin".into(),
            )),
        }
    }

    /// `⟨v, w⟩ = |v||w| cos ∠(v, w)`.
    pub fn inner(&self, v: &TangentVector, w: &TangentVector) -> Result<f64> {
        inner_product(&self.cone, &v.point, &w.point)
    }

    pub fn norm(&self, v: &TangentVector) -> f64 {
        v.length
    }

    /// Distance inside the tangent cone.
    pub fn distance(&self, v: &TangentVector, w: &TangentVector) -> Result<f64> {
        self.cone.distance(&v.point, &w.point)
    }

    /// Barycenter of a weighted family of tangent vectors.
    pub fn barycenter(&self, vectors: &[TangentVector], weights: &[f64]) -> Result<TangentVector> {
        let m = FiniteMeasure::new(
            vectors.iter().map(|v| v.point.clone()).collect(),
            weights.to_vec(),
        )?;
        let point = measure::barycenter(&self.cone, &m)?;
        let length = match &point {
            CatPoint::Euclidean(x) => x.iter().map(|d| d * d).sum::<f64>().sqrt(),
            CatPoint::Cone(ConePoint::Apex) => 0.0,
            CatPoint::Cone(ConePoint::Ray { radius, .. }) => *radius,
            CatPoint::Tree(_) => unreachable!("tangent cones are Euclidean or cones"),
        };
        Ok(TangentVector { point, length })
    }
}

/// Cone inner product `⟨v, w⟩ = t t' cos(min(d_S, π))` (Euclidean dot
/// product in the Euclidean case). Defined for the spaces that arise as
/// tangent cones: Euclidean spaces and graph cones.
pub fn inner_product(space: &CatSpace, v: &CatPoint, w: &CatPoint) -> Result<f64> {
    space.validate_point(v)?;
    space.validate_point(w)?;
    match (space, v, w) {
        (CatSpace::Euclidean { .. }, CatPoint::Euclidean(a), CatPoint::Euclidean(b)) => {
            Ok(crate::linalg::dot(a, b))
        }
        (CatSpace::Cone(c), CatPoint::Cone(a), CatPoint::Cone(b)) => Ok(c.inner(a, b)),
        _ => Err(Error::Unsupported(
            "inner products are defined on Euclidean spaces and cones".into(),
        )),
    }
}
