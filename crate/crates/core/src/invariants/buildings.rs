//! Chamber-vertex distance tables of the spherical buildings attached to
//! `PGL(n+1, F_r)` and the resulting distortion and δ bounds for the
//! tangent cones of the corresponding Euclidean buildings.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::cat0::GraphCone;
use crate::error::{Error, Result};
use crate::families::generalized_triangle;

use super::{check_embedding_against_cone, RadialEmbedding};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct BuildingSpec {
    /// Building dimension (apartments triangulate n-space).
    pub n: usize,
    pub r: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BuildingDistances {
    pub n: usize,
    /// `(i, j, d(eᵢ, eⱼ))` over `1 ≤ i < j ≤ n`.
    pub table: Vec<(usize, usize, f64)>,
    /// Case-split minimum: `√(2 - 2√((n-1)/(n+3)))` for odd n,
    /// `2/√(n+2)` for even n.
    pub d_min: f64,
    /// Minimum of the table (equals `d_min` when n ≥ 2).
    pub table_min: Option<f64>,
}

/// Distance between chamber vertices `i < j`:
/// `√(2 - 2√(i(n+1-j)/(j(n+1-i))))`.
pub fn chamber_distance(n: usize, i: usize, j: usize) -> f64 {
    let (i, j, n) = (i as f64, j as f64, n as f64);
    let ratio = (i * (n + 1.0 - j)) / (j * (n + 1.0 - i));
    (2.0 - 2.0 * ratio.sqrt()).max(0.0).sqrt()
}

pub fn d_min_formula(n: usize) -> f64 {
    let nf = n as f64;
    if n % 2 == 1 {
        (2.0 - 2.0 * ((nf - 1.0) / (nf + 3.0)).sqrt()).sqrt()
    } else {
        2.0 / (nf + 2.0).sqrt()
    }
}

pub fn building_distances(spec: &BuildingSpec) -> Result<BuildingDistances> {
    if spec.n == 0 {
        return Err(Error::InvalidParameter(
            "building dimension must be >= 1".into(),
        ));
    }
    let mut table = Vec::new();
    for i in 1..=spec.n {
        for j in (i + 1)..=spec.n {
            table.push((i, j, chamber_distance(spec.n, i, j)));
        }
    }
    let table_min = table
        .iter()
        .map(|&(_, _, d)| d)
        .min_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(BuildingDistances {
        n: spec.n,
        table,
        d_min: d_min_formula(spec.n),
        table_min,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BuildingBounds {
    pub n: usize,
    pub r: u64,
    pub d_min: f64,
    /// `2/d_min`: upper bound on the radial distortion of every tangent
    /// cone of the n-dimensional building.
    pub d_rad_bound: f64,
    /// `1 - (d_min/2)²`: the matching δ bound.
    pub delta_bound: f64,
}

/// The regular-simplex embedding certificate computed on the `n = 2`
/// instance: `N = 2(r²+r+1)` unit vectors at mutual distance `d_min`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimplexCertificate {
    pub direction_count: usize,
    pub lipschitz_excess: f64,
    pub max_ratio: f64,
    pub ratio_bound: f64,
}

/// Distortion and δ bounds; for `n = 2` with `r ≤ 5` the explicit simplex
/// embedding is built and verified exhaustively.
pub fn building_bounds(
    spec: &BuildingSpec,
) -> Result<(BuildingBounds, Option<SimplexCertificate>)> {
    let d = building_distances(spec)?;
    let d_min = d.d_min;
    let bounds = BuildingBounds {
        n: spec.n,
        r: spec.r,
        d_min,
        d_rad_bound: 2.0 / d_min,
        delta_bound: 1.0 - (d_min / 2.0) * (d_min / 2.0),
    };
    let certificate = if spec.n == 2 && spec.r <= 5 {
        Some(simplex_certificate(spec.r, d_min)?)
    } else {
        None
    };
    Ok((bounds, certificate))
}

fn simplex_certificate(r: u64, d_min: f64) -> Result<SimplexCertificate> {
    let (graph, _) = generalized_triangle(r)?;
    let n = graph.vertex_count();
    // unit vectors with constant pairwise inner product c = 1 - d_min²/2
    let c = 1.0 - d_min * d_min / 2.0;
    let gram = DMatrix::from_fn(n, n, |i, j| if i == j { 1.0 } else { c });
    let emb = RadialEmbedding::from_gram(&gram, 1e-9, 1e-9)?;
    let cone = GraphCone::over_graph(&graph)?;
    let check = check_embedding_against_cone(&emb, &cone, &[0.0, 0.5, 1.0, 2.0])?;
    let ratio_bound = 2.0 / d_min;
    if check.realized_distortion > ratio_bound + 1e-9 {
        return Err(Error::Discrepancy(format!(
            "simplex embedding ratio {} exceeds 2/d_min = {ratio_bound}",
            check.realized_distortion
        )));
    }
    if check.lipschitz_excess > 1e-10 {
        return Err(Error::Discrepancy(format!(
            "simplex embedding expands a pair by {:.3e}",
            check.lipschitz_excess
        )));
    }
    Ok(SimplexCertificate {
        direction_count: n,
        lipschitz_excess: check.lipschitz_excess,
        max_ratio: check.realized_distortion,
        ratio_bound,
    })
}
