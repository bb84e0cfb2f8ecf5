//! Pod embeddings: the `(r+1)`-pod arranged through the vertices of a
//! regular r-simplex realizes the radial distortion `√(2r/(r+1))`.

use serde::{Deserialize, Serialize};

use crate::cat0::GraphCone;
use crate::error::{Error, Result};

use super::{check_embedding_against_cone, RadialEmbedding};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PodEmbeddingReport {
    pub r: usize,
    /// `√(2r/(r+1))`.
    pub formula_distortion: f64,
    /// max pair ratio over the leg-pair radius grid.
    pub realized_distortion: f64,
    pub lipschitz_excess: f64,
    /// `‖mean of the simplex vertices‖` (the δ(P_{r+1}) = 0 witness).
    pub mean_norm: f64,
}

/// Unit vectors at the vertices of a regular r-simplex centered at the
/// origin of ℝ^r, expressed in a Helmert basis of the hyperplane `1^⊥`.
fn simplex_directions(r: usize) -> Vec<Vec<f64>> {
    let n = r + 1;
    let scale = 1.0 / ((r as f64) / (n as f64)).sqrt(); // ‖eᵢ - c‖⁻¹
    let mut dirs = Vec::with_capacity(n);
    for i in 0..n {
        // centered vertex in ℝ^{r+1}
        let centered: Vec<f64> = (0..n)
            .map(|j| (if i == j { 1.0 } else { 0.0 }) - 1.0 / n as f64)
            .collect();
        // Helmert coordinates: h_k = (1,…,1,-k,0,…,0)/√(k(k+1)), k ones
        let mut coord = Vec::with_capacity(r);
        for k in 1..=r {
            let norm = ((k * (k + 1)) as f64).sqrt();
            let mut dot: f64 = centered.iter().take(k).sum();
            dot -= k as f64 * centered[k];
            coord.push(scale * dot / norm);
        }
        dirs.push(coord);
    }
    dirs
}

/// Embed the `(r+1)`-pod through a regular r-simplex and verify the
/// realized distortion against `√(2r/(r+1))`.
pub fn pod_embedding(r: usize) -> Result<(RadialEmbedding, PodEmbeddingReport)> {
    if r == 0 {
        return Err(Error::InvalidParameter("pod embedding needs r >= 1".into()));
    }
    let coords = simplex_directions(r);
    let emb = RadialEmbedding { dim: r, coords };
    for i in 0..=r {
        let norm: f64 = emb.direction(i).iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Discrepancy(format!(
                "simplex direction {i} has norm {norm}"
            )));
        }
    }
    let pod = GraphCone::pod(r + 1)?;
    let radii = [0.25, 0.5, 0.75, 1.0, 1.5, 2.0];
    let check = check_embedding_against_cone(&emb, &pod, &radii)?;
    // scan mixed radii explicitly for the realized max ratio
    let mut realized: f64 = 1.0;
    for i in 0..=r {
        for j in (i + 1)..=r {
            let gram = emb.gram_entry(i, j);
            for &ti in &radii {
                for &tj in &radii {
                    let e = emb.embedded_distance(ti, tj, gram);
                    if e > 0.0 {
                        realized = realized.max((ti + tj) / e);
                    }
                }
            }
        }
    }
    let formula = (2.0 * r as f64 / (r as f64 + 1.0)).sqrt();
    if (realized - formula).abs() > 1e-10 {
        return Err(Error::Discrepancy(format!(
            "pod distortion {realized} differs from the formula {formula}"
        )));
    }
    let mean_norm = emb
        .direction_mean()
        .iter()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt();
    let report = PodEmbeddingReport {
        r,
        formula_distortion: formula,
        realized_distortion: realized,
        lipschitz_excess: check.lipschitz_excess,
        mean_norm,
    };
    Ok((emb, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_pod_is_isometric() {
        let (_, rep) = pod_embedding(1).unwrap();
        assert!((rep.realized_distortion - 1.0).abs() < 1e-12);
        assert!(rep.lipschitz_excess <= 1e-12);
    }

    #[test]
    fn tripod_distortion() {
        let (_, rep) = pod_embedding(2).unwrap();
        assert!((rep.realized_distortion - (4.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!((rep.realized_distortion - 1.1547).abs() < 1e-4);
        assert!(rep.mean_norm < 1e-12);
    }

    #[test]
    fn quadripod_distortion() {
        let (_, rep) = pod_embedding(3).unwrap();
        assert!((rep.realized_distortion - (3.0f64 / 2.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn simplex_gram_entries() {
        // pairwise inner products of the r-simplex directions are -1/r
        for r in 1..=6usize {
            let (emb, _) = pod_embedding(r).unwrap();
            for i in 0..=r {
                for j in (i + 1)..=r {
                    assert!(
                        (emb.gram_entry(i, j) + 1.0 / r as f64).abs() < 1e-12,
                        "r={r} pair ({i},{j})"
                    );
                }
            }
        }
    }
}
