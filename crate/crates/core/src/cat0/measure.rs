//! Finitely supported measures, barycenters and the variance inequalities.
//!
//! Barycenters are computed exactly, space by space: the weighted mean in
//! Euclidean space; a per-edge quadratic scan on metric trees (squared
//! distance to a point restricted to an edge is piecewise quadratic in the
//! offset); and on cones a reduction to maximizing the radial mean
//! `g(u) = Σ wᵢ rᵢ cos(min(d_S(u, uᵢ), π))` over directions, since for a
//! fixed direction the optimal radius is `max(0, g(u))`. The independent
//! check is [`barycenter_oracle`], a brute-force minimizer over an h-net.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::cone::DirPoint;
use super::tree::TreePoint;
use super::{inner_product, CatPoint, CatSpace, ConePoint};

/// Probability measure with finite support.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiniteMeasure {
    points: Vec<CatPoint>,
    weights: Vec<f64>,
}

impl FiniteMeasure {
    pub fn new(points: Vec<CatPoint>, weights: Vec<f64>) -> Result<FiniteMeasure> {
        if points.is_empty() || points.len() != weights.len() {
            return Err(Error::InvalidParameter(
                "measure needs matching nonempty points and weights".into(),
            ));
        }
        if weights.iter().any(|&w| w <= 0.0 || w.is_nan()) {
            return Err(Error::InvalidParameter("weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "weights sum to {total}, expected 1 (use `normalized` to rescale)"
            )));
        }
        Ok(FiniteMeasure { points, weights })
    }

    /// Build from raw positive weights, rescaling them to total mass 1.
    pub fn normalized(points: Vec<CatPoint>, weights: Vec<f64>) -> Result<FiniteMeasure> {
        let total: f64 = weights.iter().sum();
        if total <= 0.0 || total.is_nan() {
            return Err(Error::InvalidParameter(
                "total weight must be positive".into(),
            ));
        }
        let weights = weights.into_iter().map(|w| w / total).collect();
        FiniteMeasure::new(points, weights)
    }

    pub fn uniform(points: Vec<CatPoint>) -> Result<FiniteMeasure> {
        let n = points.len();
        FiniteMeasure::new(points, vec![1.0 / n as f64; n])
    }

    pub fn points(&self) -> &[CatPoint] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `Σ wᵢ d(vᵢ, q)²`.
    pub fn quadratic_moment(&self, space: &CatSpace, q: &CatPoint) -> Result<f64> {
        let mut acc = 0.0;
        for (p, w) in self.points.iter().zip(&self.weights) {
            let d = space.distance(p, q)?;
            acc += w * d * d;
        }
        Ok(acc)
    }
}

/// The unique minimizer of `q ↦ Σ wᵢ d(vᵢ, q)²`.
pub fn barycenter(space: &CatSpace, m: &FiniteMeasure) -> Result<CatPoint> {
    for p in m.points() {
        space.validate_point(p)?;
    }
    match space {
        CatSpace::Euclidean { dim } => {
            let mut mean = vec![0.0; *dim];
            for (p, w) in m.points().iter().zip(m.weights()) {
                if let CatPoint::Euclidean(x) = p {
                    for (acc, &c) in mean.iter_mut().zip(x) {
                        *acc += w * c;
                    }
                }
            }
            Ok(CatPoint::Euclidean(mean))
        }
        CatSpace::Tree(tree) => {
            let support: Vec<TreePoint> = m
                .points()
                .iter()
                .map(|p| match p {
                    CatPoint::Tree(t) => *t,
                    _ => unreachable!("validated"),
                })
                .collect();
            let g = tree.graph();
            let mut best = f64::INFINITY;
            let mut best_point = TreePoint::Vertex(0);
            let mut consider = |tp: TreePoint, value: f64| {
                if value < best {
                    best = value;
                    best_point = tp;
                }
            };
            let moment = |tp: &TreePoint| -> f64 {
                support
                    .iter()
                    .zip(m.weights())
                    .map(|(v, w)| {
                        let d = tree.point_distance(v, tp);
                        w * d * d
                    })
                    .sum()
            };
            for eid in 0..g.edge_count() {
                let (a, b) = g.edge(eid);
                let len = g.length(eid);
                // breakpoints of the piecewise-linear distances to support
                let mut breaks = vec![0.0, len];
                for v in &support {
                    let da = tree.point_distance(&TreePoint::Vertex(a), v);
                    let db = tree.point_distance(&TreePoint::Vertex(b), v);
                    let cross = (db + len - da) / 2.0;
                    if cross > 0.0 && cross < len {
                        breaks.push(cross);
                    }
                    if let TreePoint::Edge { edge, offset } = v {
                        if *edge == eid && *offset > 0.0 && *offset < len {
                            breaks.push(*offset);
                        }
                    }
                }
                breaks.sort_by(|p, q| p.partial_cmp(q).unwrap());
                breaks.dedup_by(|p, q| (*p - *q).abs() < 1e-14);
                for w in breaks.windows(2) {
                    let (x0, x1) = (w[0], w[1]);
                    for x in [x0, x1] {
                        consider(
                            TreePoint::Edge {
                                edge: eid,
                                offset: x,
                            },
                            moment(&TreePoint::Edge {
                                edge: eid,
                                offset: x,
                            }),
                        );
                    }
                    // F(x) = Σ wᵢ (cᵢ + sᵢ x)² has leading coefficient 1;
                    // its vertex is x* = -Σ wᵢ sᵢ cᵢ
                    let xm = 0.5 * (x0 + x1);
                    let mut linear = 0.0;
                    for (v, w) in support.iter().zip(m.weights()) {
                        let (c, s) = tree_distance_piece(tree, eid, a, b, len, xm, v);
                        linear += w * s * c;
                    }
                    let xstar = -linear;
                    if xstar > x0 && xstar < x1 {
                        let tp = TreePoint::Edge {
                            edge: eid,
                            offset: xstar,
                        };
                        consider(tp, moment(&tp));
                    }
                }
            }
            Ok(CatPoint::Tree(tree_canonical(tree, best_point)))
        }
        CatSpace::Cone(cone) => {
            let mut moments: Vec<(DirPoint, f64)> = Vec::new();
            for (p, w) in m.points().iter().zip(m.weights()) {
                if let CatPoint::Cone(ConePoint::Ray { dir, radius }) = p {
                    if *radius > 0.0 {
                        moments.push((*dir, w * radius));
                    }
                }
            }
            if moments.is_empty() {
                return Ok(CatPoint::Cone(ConePoint::Apex));
            }
            let (dir, g) = cone.maximize_radial_mean(&moments);
            if g <= 0.0 {
                Ok(CatPoint::Cone(ConePoint::Apex))
            } else {
                Ok(CatPoint::Cone(ConePoint::Ray { dir, radius: g }))
            }
        }
    }
}

fn tree_canonical(tree: &super::tree::MetricTree, tp: TreePoint) -> TreePoint {
    // snap endpoints to vertices for a stable representation
    if let TreePoint::Edge { edge, offset } = tp {
        let (a, b) = tree.graph().edge(edge);
        if offset == 0.0 {
            return TreePoint::Vertex(a);
        }
        if offset == tree.graph().length(edge) {
            return TreePoint::Vertex(b);
        }
    }
    tp
}

/// Distance from the offset-`x` point of edge `eid` to `v`, as the active
/// linear piece `c + s·x` at `x`.
fn tree_distance_piece(
    tree: &super::tree::MetricTree,
    eid: usize,
    a: usize,
    b: usize,
    len: f64,
    x: f64,
    v: &TreePoint,
) -> (f64, f64) {
    if let TreePoint::Edge { edge, offset } = v {
        if *edge == eid {
            return if x >= *offset {
                (-offset, 1.0)
            } else {
                (*offset, -1.0)
            };
        }
    }
    let da = tree.point_distance(&TreePoint::Vertex(a), v);
    let db = tree.point_distance(&TreePoint::Vertex(b), v);
    if da + x <= db + len - x {
        (da, 1.0)
    } else {
        (db + len, -1.0)
    }
}

/// Brute-force barycenter over an `h`-net of candidate points.
pub fn barycenter_oracle(space: &CatSpace, m: &FiniteMeasure, h: f64) -> Result<CatPoint> {
    if h <= 0.0 || h.is_nan() {
        return Err(Error::InvalidParameter(
            "oracle step h must be positive".into(),
        ));
    }
    for p in m.points() {
        space.validate_point(p)?;
    }
    const CANDIDATE_CAP: usize = 20_000_000;
    let mut best = f64::INFINITY;
    let mut best_point: Option<CatPoint> = None;
    let consider = |space: &CatSpace,
                    q: CatPoint,
                    best: &mut f64,
                    best_point: &mut Option<CatPoint>|
     -> Result<()> {
        let val = m.quadratic_moment(space, &q)?;
        if val < *best {
            *best = val;
            *best_point = Some(q);
        }
        Ok(())
    };
    match space {
        CatSpace::Euclidean { dim } => {
            let mut lo = vec![f64::INFINITY; *dim];
            let mut hi = vec![f64::NEG_INFINITY; *dim];
            for p in m.points() {
                if let CatPoint::Euclidean(x) = p {
                    for i in 0..*dim {
                        lo[i] = lo[i].min(x[i]);
                        hi[i] = hi[i].max(x[i]);
                    }
                }
            }
            let steps: Vec<usize> = (0..*dim)
                .map(|i| ((hi[i] - lo[i]) / h).ceil() as usize + 1)
                .collect();
            let total: usize = steps.iter().product();
            if total > CANDIDATE_CAP {
                return Err(Error::SizeLimit(format!(
                    "oracle grid would have {total} points"
                )));
            }
            let mut idx = vec![0usize; *dim];
            loop {
                let q: Vec<f64> = (0..*dim).map(|i| lo[i] + (idx[i] as f64) * h).collect();
                consider(space, CatPoint::Euclidean(q), &mut best, &mut best_point)?;
                let mut carry = 0;
                loop {
                    if carry == *dim {
                        break;
                    }
                    idx[carry] += 1;
                    if idx[carry] < steps[carry] {
                        break;
                    }
                    idx[carry] = 0;
                    carry += 1;
                }
                if carry == *dim {
                    break;
                }
            }
        }
        CatSpace::Tree(tree) => {
            let g = tree.graph();
            for eid in 0..g.edge_count() {
                let len = g.length(eid);
                let n = (len / h).ceil() as usize;
                for k in 0..=n {
                    let offset = (k as f64 * h).min(len);
                    consider(
                        space,
                        CatPoint::Tree(TreePoint::Edge { edge: eid, offset }),
                        &mut best,
                        &mut best_point,
                    )?;
                }
            }
        }
        CatSpace::Cone(cone) => {
            let rmax = m
                .points()
                .iter()
                .map(|p| match p {
                    CatPoint::Cone(ConePoint::Ray { radius, .. }) => *radius,
                    _ => 0.0,
                })
                .fold(0.0f64, f64::max);
            consider(
                space,
                CatPoint::Cone(ConePoint::Apex),
                &mut best,
                &mut best_point,
            )?;
            let dg = cone.direction_graph();
            let mut dirs: Vec<DirPoint> = (0..dg.vertex_count).map(DirPoint::Vertex).collect();
            for (eid, &(_, _, l)) in dg.edges.iter().enumerate() {
                let n = (l / h).ceil() as usize;
                for k in 1..n {
                    dirs.push(DirPoint::Edge {
                        edge: eid,
                        offset: k as f64 * h,
                    });
                }
            }
            let radial = (rmax / h).ceil() as usize;
            if dirs.len().saturating_mul(radial) > CANDIDATE_CAP {
                return Err(Error::SizeLimit("oracle cone grid too large".into()));
            }
            for dir in dirs {
                for k in 1..=radial {
                    consider(
                        space,
                        CatPoint::Cone(ConePoint::Ray {
                            dir,
                            radius: k as f64 * h,
                        }),
                        &mut best,
                        &mut best_point,
                    )?;
                }
            }
        }
    }
    best_point.ok_or_else(|| Error::InvalidParameter("empty candidate set".into()))
}

/// Both variance inequalities evaluated on a measure and a witness point:
/// `Σ wᵢ d(vᵢ, w)² ≥ Σ wᵢ d(vᵢ, ν̄)² + d(ν̄, w)²` and
/// `½ ΣΣ wᵢ wⱼ d(vᵢ, vⱼ)² ≥ Σ wᵢ d(vᵢ, ν̄)²`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VarianceReport {
    pub barycenter: CatPoint,
    pub moment_at_witness: f64,
    pub moment_at_barycenter: f64,
    pub witness_distance: f64,
    pub slack1: f64,
    pub pair_energy: f64,
    pub slack2: f64,
}

pub fn variance_report(
    space: &CatSpace,
    m: &FiniteMeasure,
    w: &CatPoint,
) -> Result<VarianceReport> {
    space.validate_point(w)?;
    let bar = barycenter(space, m)?;
    let moment_at_witness = m.quadratic_moment(space, w)?;
    let moment_at_barycenter = m.quadratic_moment(space, &bar)?;
    let witness_distance = space.distance(&bar, w)?;
    let slack1 = moment_at_witness - moment_at_barycenter - witness_distance * witness_distance;
    let mut pair_energy = 0.0;
    for (pi, wi) in m.points().iter().zip(m.weights()) {
        for (pj, wj) in m.points().iter().zip(m.weights()) {
            let d = space.distance(pi, pj)?;
            pair_energy += 0.5 * wi * wj * d * d;
        }
    }
    let slack2 = pair_energy - moment_at_barycenter;
    Ok(VarianceReport {
        barycenter: bar,
        moment_at_witness,
        moment_at_barycenter,
        witness_distance,
        slack1,
        pair_energy,
        slack2,
    })
}

/// The barycenter inner-product inequality on a tangent-cone-like space:
/// `⟨ν̄, w⟩ ≥ Σ wᵢ ⟨vᵢ, w⟩`, with equality at `w = ν̄`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InnerProductReport {
    pub barycenter: CatPoint,
    pub slack: f64,
    pub equality_defect: f64,
}

pub fn tangent_inner_product_check(
    space: &CatSpace,
    m: &FiniteMeasure,
    w: &CatPoint,
) -> Result<InnerProductReport> {
    space.validate_point(w)?;
    let bar = barycenter(space, m)?;
    let lhs = inner_product(space, &bar, w)?;
    let mut rhs = 0.0;
    for (p, wi) in m.points().iter().zip(m.weights()) {
        rhs += wi * inner_product(space, p, w)?;
    }
    let norm_sq = inner_product(space, &bar, &bar)?;
    let mut mixed = 0.0;
    for (p, wi) in m.points().iter().zip(m.weights()) {
        mixed += wi * inner_product(space, p, &bar)?;
    }
    Ok(InnerProductReport {
        barycenter: bar,
        slack: lhs - rhs,
        equality_defect: norm_sq - mixed,
    })
}

#[cfg(test)]
mod tests {
    use super::super::tree::MetricTree;
    use super::super::GraphCone;
    use super::*;
    use crate::io::spider;

    fn tripod_space() -> CatSpace {
        CatSpace::pod(3).unwrap()
    }

    fn leg(i: usize, r: f64) -> CatPoint {
        CatPoint::Cone(ConePoint::Ray {
            dir: DirPoint::Vertex(i),
            radius: r,
        })
    }

    #[test]
    fn euclidean_barycenter_is_mean() {
        let space = CatSpace::euclidean(2);
        let m = FiniteMeasure::new(
            vec![
                CatPoint::Euclidean(vec![0.0, 0.0]),
                CatPoint::Euclidean(vec![1.0, 0.0]),
                CatPoint::Euclidean(vec![0.0, 1.0]),
            ],
            vec![0.5, 0.25, 0.25],
        )
        .unwrap();
        let b = barycenter(&space, &m).unwrap();
        assert_eq!(b, CatPoint::Euclidean(vec![0.25, 0.25]));
    }

    #[test]
    fn symmetric_tripod_barycenter_is_apex() {
        let space = tripod_space();
        let m = FiniteMeasure::uniform(vec![leg(0, 1.0), leg(1, 1.0), leg(2, 1.0)]).unwrap();
        let b = barycenter(&space, &m).unwrap();
        assert_eq!(b, CatPoint::Cone(ConePoint::Apex));
    }

    #[test]
    fn lopsided_pod_barycenter_on_heavy_leg() {
        let space = tripod_space();
        let m = FiniteMeasure::new(vec![leg(0, 1.0), leg(1, 1.0)], vec![0.75, 0.25]).unwrap();
        // leg moments: s_0 = 0.75, s_1 = 0.25; ρ = 2 s_0 - S = 0.5
        let b = barycenter(&space, &m).unwrap();
        match b {
            CatPoint::Cone(ConePoint::Ray { dir, radius }) => {
                assert_eq!(dir, DirPoint::Vertex(0));
                assert!((radius - 0.5).abs() < 1e-12);
            }
            other => panic!("unexpected barycenter {other:?}"),
        }
    }

    #[test]
    fn uniform_measure_on_incidence_cone_has_apex_barycenter() {
        let (g, _) = crate::families::generalized_triangle(2).unwrap();
        let cone = GraphCone::over_graph(&g).unwrap();
        let n = cone.direction_vertex_count();
        let space = CatSpace::Cone(cone);
        let points: Vec<CatPoint> = (0..n)
            .map(|v| {
                CatPoint::Cone(ConePoint::Ray {
                    dir: DirPoint::Vertex(v),
                    radius: 1.0,
                })
            })
            .collect();
        let m = FiniteMeasure::uniform(points).unwrap();
        let b = barycenter(&space, &m).unwrap();
        assert_eq!(b, CatPoint::Cone(ConePoint::Apex));
    }

    #[test]
    fn tree_barycenter_matches_oracle() {
        use rand::SeedableRng;
        let tree = MetricTree::new(spider(4, 2)).unwrap();
        let space = CatSpace::Tree(tree);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..25 {
            let k = rand::Rng::gen_range(&mut rng, 2..=6);
            let points: Vec<CatPoint> = (0..k).map(|_| space.sample_point(&mut rng)).collect();
            let weights: Vec<f64> = (0..k)
                .map(|_| rand::Rng::gen_range(&mut rng, 0.1..1.0))
                .collect();
            let m = FiniteMeasure::normalized(points, weights).unwrap();
            let b = barycenter(&space, &m).unwrap();
            let o = barycenter_oracle(&space, &m, 1e-3).unwrap();
            let d = space.distance(&b, &o).unwrap();
            assert!(d <= 1e-2, "barycenter {d} away from oracle");
        }
    }

    #[test]
    fn two_point_midpoint() {
        let space = CatSpace::euclidean(1);
        let m = FiniteMeasure::uniform(vec![
            CatPoint::Euclidean(vec![0.0]),
            CatPoint::Euclidean(vec![1.0]),
        ])
        .unwrap();
        let o = barycenter_oracle(&space, &m, 1e-3).unwrap();
        if let CatPoint::Euclidean(x) = o {
            assert!((x[0] - 0.5).abs() <= 1e-3);
        }
    }

    #[test]
    fn oracle_rejects_bad_step() {
        let space = CatSpace::euclidean(1);
        let m = FiniteMeasure::uniform(vec![CatPoint::Euclidean(vec![0.0])]).unwrap();
        assert!(barycenter_oracle(&space, &m, 0.0).is_err());
    }

    #[test]
    fn variance_tripod_example() {
        // symmetric tripod measure, witness on leg 0 at radius 1:
        // slack1 = (0 + 4 + 4)/3 - 1 - 1 = 2/3
        let space = tripod_space();
        let m = FiniteMeasure::uniform(vec![leg(0, 1.0), leg(1, 1.0), leg(2, 1.0)]).unwrap();
        let w = leg(0, 1.0);
        let rep = variance_report(&space, &m, &w).unwrap();
        assert!((rep.slack1 - 2.0 / 3.0).abs() < 1e-12);
        assert!(rep.slack2 >= -1e-12);
        // witness at the barycenter: slack1 vanishes
        let rep0 = variance_report(&space, &m, &CatPoint::Cone(ConePoint::Apex)).unwrap();
        assert!(rep0.slack1.abs() < 1e-12);
    }

    #[test]
    fn euclidean_variance_is_equality() {
        use rand::SeedableRng;
        let space = CatSpace::euclidean(3);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let k = rand::Rng::gen_range(&mut rng, 2..=5);
            let points: Vec<CatPoint> = (0..k).map(|_| space.sample_point(&mut rng)).collect();
            let weights: Vec<f64> = (0..k)
                .map(|_| rand::Rng::gen_range(&mut rng, 0.1..1.0))
                .collect();
            let m = FiniteMeasure::normalized(points, weights).unwrap();
            let w = space.sample_point(&mut rng);
            let rep = variance_report(&space, &m, &w).unwrap();
            assert!(rep.slack1.abs() < 1e-12, "parallelogram identity");
            assert!(rep.slack2.abs() < 1e-12);
        }
    }

    #[test]
    fn inner_product_lemma_on_pods() {
        let space = tripod_space();
        let m = FiniteMeasure::normalized(vec![leg(0, 1.0), leg(1, 0.5)], vec![0.6, 0.4]).unwrap();
        let w = leg(2, 0.7);
        let rep = tangent_inner_product_check(&space, &m, &w).unwrap();
        assert!(rep.slack >= -1e-12);
        let bar = rep.barycenter.clone();
        let rep_eq = tangent_inner_product_check(&space, &m, &bar).unwrap();
        assert!(rep_eq.equality_defect.abs() < 1e-10);
        assert!(rep_eq.slack.abs() < 1e-10);
    }
}
