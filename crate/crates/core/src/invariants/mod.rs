//! Embedding invariants of CAT(0) cones: Gram-matrix embeddings of
//! incidence-graph cones, pod embeddings, radial distortion, δ-invariant
//! bounds, Wang invariants and the Euclidean-building tables.

mod buildings;
mod gram;
mod pods;
mod wang;

pub use buildings::{
    building_bounds, building_distances, BuildingBounds, BuildingDistances, BuildingSpec,
    SimplexCertificate,
};
pub use gram::{
    delta_mu0, gram_eigenvalues, gram_matrix, iota_embedding, optimal_ab,
    predicted_gram_eigenvalues, psd_range_contains, DeltaMu0, GramEigenReport, GramSpec,
    IotaReport, OptimalAb,
};
pub use pods::{pod_embedding, PodEmbeddingReport};
pub use wang::{wang_estimate, LowerBoundCheck, TargetCertificate, WangEstimate};

use serde::{Deserialize, Serialize};

use crate::cat0::{DirPoint, GraphCone};
use crate::error::{Error, Result};
use crate::linalg;

/// `δ ≤ 1 - 1/D²` for a cone of radial distortion `D`.
pub fn delta_from_distortion(d: f64) -> Result<f64> {
    if d < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "distortion {d} below 1 is impossible"
        )));
    }
    Ok(1.0 - 1.0 / (d * d))
}

/// A radial embedding of a cone into Euclidean space: one unit coordinate
/// vector per direction vertex, extended by `ι(u, t) = t·ι(u)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RadialEmbedding {
    pub dim: usize,
    pub coords: Vec<Vec<f64>>,
}

impl RadialEmbedding {
    /// Factor a PSD Gram matrix with unit diagonal into unit coordinate
    /// vectors (`psd_tol` for the PSD check, eigenvalues above
    /// `pos_cutoff` kept).
    pub fn from_gram(
        g: &nalgebra::DMatrix<f64>,
        psd_tol: f64,
        pos_cutoff: f64,
    ) -> Result<RadialEmbedding> {
        let coords = linalg::psd_coordinates(g, psd_tol, pos_cutoff)?;
        let dim = coords.first().map_or(0, Vec::len);
        for (i, c) in coords.iter().enumerate() {
            let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > 1e-8 {
                return Err(Error::Discrepancy(format!(
                    "direction {i} embeds with norm {norm}, expected 1"
                )));
            }
        }
        Ok(RadialEmbedding { dim, coords })
    }

    pub fn direction_count(&self) -> usize {
        self.coords.len()
    }

    pub fn direction(&self, i: usize) -> &[f64] {
        &self.coords[i]
    }

    /// `ι(uᵢ, t) = t · ι(uᵢ)`.
    pub fn point(&self, i: usize, radius: f64) -> Vec<f64> {
        self.coords[i].iter().map(|&c| radius * c).collect()
    }

    /// `‖t uᵢ - t' uⱼ‖` computed from the Gram entry `⟨uᵢ, uⱼ⟩`.
    pub fn embedded_distance(&self, t: f64, s: f64, gram_ij: f64) -> f64 {
        ((t * t + s * s - 2.0 * t * s * gram_ij).max(0.0)).sqrt()
    }

    pub fn gram_entry(&self, i: usize, j: usize) -> f64 {
        linalg::dot(&self.coords[i], &self.coords[j])
    }

    /// Mean of the unit direction vectors.
    pub fn direction_mean(&self) -> Vec<f64> {
        let n = self.coords.len();
        let mut mean = vec![0.0; self.dim];
        for c in &self.coords {
            for (m, x) in mean.iter_mut().zip(c) {
                *m += x / n as f64;
            }
        }
        mean
    }
}

/// Exhaustive comparison of a radial embedding against the cone metric on
/// all direction-vertex pairs and a grid of radii.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EmbeddingCheck {
    /// max over pairs of `‖ι(v) - ι(v')‖ - d_T(v, v')` (1-Lipschitz ⟺ ≤ 0).
    pub lipschitz_excess: f64,
    /// max over radius-1 pairs of `d_T / ‖Δι‖`: the realized distortion.
    pub realized_distortion: f64,
    /// max over pairs at angle < π/2 and all radii of `|‖Δι‖ - d_T|`:
    /// isometry on the cone over each edge.
    pub edge_isometry_deviation: f64,
}

/// Compare embedding directions (index `i` ↔ cone direction vertex `i`).
pub fn check_embedding_against_cone(
    emb: &RadialEmbedding,
    cone: &GraphCone,
    radii: &[f64],
) -> Result<EmbeddingCheck> {
    let n = emb.direction_count();
    if n != cone.direction_vertex_count() {
        return Err(Error::InvalidParameter(
            "embedding and cone have different direction counts".into(),
        ));
    }
    let mut lipschitz_excess = f64::NEG_INFINITY;
    let mut realized_distortion: f64 = 1.0;
    let mut edge_isometry_deviation: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let gram_ij = emb.gram_entry(i, j);
            let angle = cone.angle(&DirPoint::Vertex(i), &DirPoint::Vertex(j));
            for &ti in radii {
                for &tj in radii {
                    let emb_d = emb.embedded_distance(ti, tj, gram_ij);
                    let cone_d = (ti * ti + tj * tj - 2.0 * ti * tj * angle.cos())
                        .max(0.0)
                        .sqrt();
                    lipschitz_excess = lipschitz_excess.max(emb_d - cone_d);
                    if emb_d > 0.0 && ti == 1.0 && tj == 1.0 {
                        realized_distortion = realized_distortion.max(cone_d / emb_d);
                    }
                    if angle < std::f64::consts::FRAC_PI_2 {
                        edge_isometry_deviation =
                            edge_isometry_deviation.max((emb_d - cone_d).abs());
                    }
                }
            }
        }
    }
    Ok(EmbeddingCheck {
        lipschitz_excess,
        realized_distortion,
        edge_isometry_deviation,
    })
}

/// Both sides of the distortion-variance bound
/// `Σ wᵢ ‖ι(vᵢ) - mean‖² ≥ (1/D²) Σ wᵢ d(vᵢ, ν̄)²` for a measure supported
/// on direction vertices at given radii.
pub fn distortion_variance_sides(
    emb: &RadialEmbedding,
    cone: &GraphCone,
    distortion: f64,
    support: &[(usize, f64)],
    weights: &[f64],
) -> Result<(f64, f64)> {
    use crate::cat0::{CatPoint, CatSpace, ConePoint, FiniteMeasure};
    if support.len() != weights.len() || support.is_empty() {
        return Err(Error::InvalidParameter("support/weight mismatch".into()));
    }
    let mut mean = vec![0.0; emb.dim];
    for (&(i, r), &w) in support.iter().zip(weights) {
        for (m, x) in mean.iter_mut().zip(emb.point(i, r)) {
            *m += w * x;
        }
    }
    let mut lhs = 0.0;
    for (&(i, r), &w) in support.iter().zip(weights) {
        let p = emb.point(i, r);
        lhs += w * linalg::sub_norm(&p, &mean).powi(2);
    }
    let space = CatSpace::Cone(cone.clone());
    let points: Vec<CatPoint> = support
        .iter()
        .map(|&(i, r)| {
            CatPoint::Cone(ConePoint::Ray {
                dir: DirPoint::Vertex(i),
                radius: r,
            })
        })
        .collect();
    let m = FiniteMeasure::new(points, weights.to_vec())?;
    let bar = crate::cat0::barycenter(&space, &m)?;
    let moment = m.quadratic_moment(&space, &bar)?;
    Ok((lhs, moment / (distortion * distortion)))
}
