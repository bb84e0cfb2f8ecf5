//! Gram-matrix embeddings of the cone over the incidence graph of
//! `PG(2, r)`.
//!
//! The bilinear form `⟨eᵢ, eⱼ⟩_{a,b}` depends only on the combinatorial
//! distance between vertices: `1, 1/2, a, b` at distances `0, 1, 2, 3`.
//! Its eigenvalues have closed forms; under the PSD constraint the map
//! distortion `max(√(3/(2-2a)), √(2/(1-b)))` is minimized at
//! `a* = (r-1-√r)/2r`, `b* = (r²-r-(r+1)√r)/2r²` with minimum value
//! `2r/√((r+1)(r+√r))`, and the uniform vertex measure realizes
//! `δ(μ₀) = (√r-1)²/(2(r-√r+1))`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::generalized_triangle;
use crate::graph::Graph;
use crate::linalg;

use super::{check_embedding_against_cone, RadialEmbedding};
use crate::cat0::GraphCone;

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GramSpec {
    pub r: u64,
    pub a: f64,
    pub b: f64,
}

/// Gram matrix `G_{a,b}` on the `2(r²+r+1)` vertices of the incidence
/// graph, entries by combinatorial distance.
pub fn gram_matrix(spec: &GramSpec) -> Result<(DMatrix<f64>, Graph)> {
    let (graph, _) = generalized_triangle(spec.r)?;
    let n = graph.vertex_count();
    let dist = graph.distance_matrix();
    let mut g = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = match dist[i][j] {
                0 => 1.0,
                1 => 0.5,
                2 => spec.a,
                3 => spec.b,
                d => {
                    return Err(Error::Discrepancy(format!(
                        "incidence graph has diameter > 3 (distance {d})"
                    )))
                }
            };
        }
    }
    Ok((g, graph))
}

/// The four closed-form eigenvalues of `G_{a,b}` with multiplicities:
/// `(r²+r+1)(a±b) + (1-a) ± (1/2-b)(r+1)` once each and
/// `(1-a) ± (1/2-b)√r` with multiplicity `r²+r` each.
pub fn predicted_gram_eigenvalues(r: u64, a: f64, b: f64) -> [(f64, usize); 4] {
    let rf = r as f64;
    let n1 = rf * rf + rf + 1.0;
    let m = (r * r + r) as usize;
    [
        (n1 * (a + b) + (1.0 - a) + (0.5 - b) * (rf + 1.0), 1),
        (n1 * (a - b) + (1.0 - a) - (0.5 - b) * (rf + 1.0), 1),
        ((1.0 - a) + (0.5 - b) * rf.sqrt(), m),
        ((1.0 - a) - (0.5 - b) * rf.sqrt(), m),
    ]
}

/// Whether `(a, b)` lies in the PSD range (all predicted eigenvalues
/// nonnegative within `tol`).
pub fn psd_range_contains(r: u64, a: f64, b: f64, tol: f64) -> bool {
    predicted_gram_eigenvalues(r, a, b)
        .iter()
        .all(|&(v, _)| v >= -tol)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GramEigenReport {
    pub spec: GramSpec,
    pub computed: Vec<f64>,
    pub predicted: Vec<(f64, usize)>,
    pub max_deviation: f64,
}

/// Numeric spectrum of `G_{a,b}` matched against the closed forms;
/// disagreement beyond `1e-8` is an error, not data.
pub fn gram_eigenvalues(spec: &GramSpec) -> Result<GramEigenReport> {
    let (g, _) = gram_matrix(spec)?;
    let computed = linalg::symmetric_eigenvalues(&g)?;
    let predicted = predicted_gram_eigenvalues(spec.r, spec.a, spec.b);
    let mut expected: Vec<f64> = Vec::with_capacity(g.nrows());
    for &(v, m) in &predicted {
        expected.extend(std::iter::repeat_n(v, m));
    }
    expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if expected.len() != computed.len() {
        return Err(Error::Discrepancy("eigenvalue count mismatch".into()));
    }
    let max_deviation = computed
        .iter()
        .zip(&expected)
        .map(|(c, e)| (c - e).abs())
        .fold(0.0f64, f64::max);
    if max_deviation > 1e-8 {
        return Err(Error::Discrepancy(format!(
            "numeric spectrum deviates from the closed forms by {max_deviation:.3e}"
        )));
    }
    Ok(GramEigenReport {
        spec: *spec,
        computed,
        predicted: predicted.to_vec(),
        max_deviation,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OptimalAb {
    pub r: u64,
    pub a: f64,
    pub b: f64,
    /// `2r/√((r+1)(r+√r))`, the minimized map distortion (< 2 for all r).
    pub distortion: f64,
    /// Number of positive Gram eigenvalues: the embedding dimension.
    pub dim_w: usize,
    /// Positive eigenvalues as (value, multiplicity).
    pub positive_spectrum: Vec<(f64, usize)>,
}

/// The distortion-minimizing parameters on the PSD boundary.
pub fn optimal_ab(r: u64) -> Result<OptimalAb> {
    if !crate::families::is_prime(r) {
        return Err(Error::InvalidParameter(format!("r = {r} must be prime")));
    }
    let rf = r as f64;
    let s = rf.sqrt();
    let a = (rf - 1.0 - s) / (2.0 * rf);
    let b = (rf * rf - rf - (rf + 1.0) * s) / (2.0 * rf * rf);
    let distortion = 2.0 * rf / ((rf + 1.0) * (rf + s)).sqrt();
    if distortion >= 2.0 {
        return Err(Error::Discrepancy(format!(
            "optimal distortion {distortion} is not below 2"
        )));
    }
    let spec = GramSpec { r, a, b };
    let report = gram_eigenvalues(&spec)?;
    let dim_w = report.computed.iter().filter(|&&v| v > 1e-9).count();
    if dim_w != (r * r + r + 1) as usize {
        return Err(Error::Discrepancy(format!(
            "embedding dimension {dim_w}, expected r²+r+1 = {}",
            r * r + r + 1
        )));
    }
    // positive part of the spectrum: r²+1-(r+1)√r once, (r+1+√r)/r else
    let positive_spectrum = vec![
        (rf * rf + 1.0 - (rf + 1.0) * s, 1usize),
        ((rf + 1.0 + s) / rf, (r * r + r) as usize),
    ];
    for &(v, _) in &positive_spectrum {
        if !report.computed.iter().any(|c| (c - v).abs() < 1e-8) {
            return Err(Error::Discrepancy(format!(
                "expected positive eigenvalue {v} not found"
            )));
        }
    }
    Ok(OptimalAb {
        r,
        a,
        b,
        distortion,
        dim_w,
        positive_spectrum,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DeltaMu0 {
    pub r: u64,
    /// `(1ᵀ G_{a*,b*} 1) / N²`: the δ-quotient of the uniform vertex
    /// measure under the optimal embedding.
    pub gram_value: f64,
    /// `(√r - 1)² / (2(r - √r + 1))`.
    pub closed_form: f64,
}

/// δ of the uniform measure on the vertex directions of `C(𝒢_r)`.
pub fn delta_mu0(r: u64) -> Result<DeltaMu0> {
    let opt = optimal_ab(r)?;
    let (g, _) = gram_matrix(&GramSpec {
        r,
        a: opt.a,
        b: opt.b,
    })?;
    let n = g.nrows() as f64;
    let total: f64 = g.iter().sum();
    let gram_value = total / (n * n);
    let s = (r as f64).sqrt();
    let closed_form = (s - 1.0) * (s - 1.0) / (2.0 * (r as f64 - s + 1.0));
    if (gram_value - closed_form).abs() > 1e-10 {
        return Err(Error::Discrepancy(format!(
            "δ(μ₀) Gram value {gram_value} differs from the closed form {closed_form}"
        )));
    }
    if !(0.0..=1.0).contains(&gram_value) {
        return Err(Error::Discrepancy("δ must lie in [0, 1]".into()));
    }
    Ok(DeltaMu0 {
        r,
        gram_value,
        closed_form,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IotaReport {
    pub spec: GramSpec,
    pub dim: usize,
    /// `max(√(3/(2-2a)), √(2/(1-b)))`.
    pub formula_distortion: f64,
    /// max pair ratio realized on radius-1 vertex pairs.
    pub realized_distortion: f64,
    pub lipschitz_excess: f64,
    pub edge_isometry_deviation: f64,
}

/// The embedding `ι_{a,b}` from the PSD factorization of `G_{a,b}`,
/// checked exhaustively against the cone metric.
pub fn iota_embedding(spec: &GramSpec) -> Result<(RadialEmbedding, IotaReport)> {
    let (g, graph) = gram_matrix(spec)?;
    let emb = RadialEmbedding::from_gram(&g, 1e-9, 1e-9)?;
    let cone = GraphCone::over_graph(&graph)?;
    let check = check_embedding_against_cone(&emb, &cone, &[0.0, 0.5, 1.0, 2.0])?;
    let formula_distortion = (3.0 / (2.0 - 2.0 * spec.a))
        .sqrt()
        .max((2.0 / (1.0 - spec.b)).sqrt());
    let report = IotaReport {
        spec: *spec,
        dim: emb.dim,
        formula_distortion,
        realized_distortion: check.realized_distortion,
        lipschitz_excess: check.lipschitz_excess,
        edge_isometry_deviation: check.edge_isometry_deviation,
    };
    Ok((emb, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heawood_gram_row_sum() {
        // row sum = 1 + 3/2 + 6a + 4b for r = 2
        let spec = GramSpec {
            r: 2,
            a: 0.1,
            b: -0.2,
        };
        let (g, _) = gram_matrix(&spec).unwrap();
        assert_eq!(g.nrows(), 14);
        let row0: f64 = (0..14).map(|j| g[(0, j)]).sum();
        assert!((row0 - (1.0 + 1.5 + 0.6 - 0.8)).abs() < 1e-12);
        for i in 0..14 {
            assert_eq!(g[(i, i)], 1.0);
        }
    }

    #[test]
    fn eigenvalue_formulas_at_zero() {
        // a = b = 0 gives G = I + A/2: eigenvalues 1 + θ/2
        let rep = gram_eigenvalues(&GramSpec {
            r: 2,
            a: 0.0,
            b: 0.0,
        })
        .unwrap();
        let mut expected = vec![-0.5, 2.5];
        expected.extend(std::iter::repeat_n(1.0 - 0.5 * 2.0f64.sqrt(), 6));
        expected.extend(std::iter::repeat_n(1.0 + 0.5 * 2.0f64.sqrt(), 6));
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (c, e) in rep.computed.iter().zip(&expected) {
            assert!((c - e).abs() < 1e-9);
        }
    }

    #[test]
    fn gram_trace_equals_dimension() {
        for (r, a, b) in [(2u64, 0.3, -0.1), (3, -0.2, 0.05)] {
            let (g, _) = gram_matrix(&GramSpec { r, a, b }).unwrap();
            let n = g.nrows();
            assert!((g.trace() - n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn all_half_matrix_not_psd() {
        // a = b = 1 makes every off-diagonal entry ≥ 1/2; PSD fails at r = 2
        assert!(!psd_range_contains(2, 1.0, 1.0, 1e-9));
        let (g, _) = gram_matrix(&GramSpec {
            r: 2,
            a: 1.0,
            b: 1.0,
        })
        .unwrap();
        let eigs = linalg::symmetric_eigenvalues(&g).unwrap();
        assert!(eigs[0] < -1e-9);
    }

    #[test]
    fn optimal_values_r2() {
        let opt = optimal_ab(2).unwrap();
        assert!((opt.a - (1.0 - 2.0f64.sqrt()) / 4.0).abs() < 1e-15);
        assert!((opt.b - (2.0 - 3.0 * 2.0f64.sqrt()) / 8.0).abs() < 1e-15);
        assert!((opt.distortion - 1.2499).abs() < 1e-4);
        assert_eq!(opt.dim_w, 7);
        // positive eigenvalues 5 - 3√2 and (3 + √2)/2
        assert!((opt.positive_spectrum[0].0 - (5.0 - 3.0 * 2.0f64.sqrt())).abs() < 1e-12);
        assert!((opt.positive_spectrum[1].0 - (3.0 + 2.0f64.sqrt()) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn optimal_distortion_r3() {
        let opt = optimal_ab(3).unwrap();
        let expected = 6.0 / (4.0 * (3.0 + 3.0f64.sqrt())).sqrt();
        assert!((opt.distortion - expected).abs() < 1e-12);
        assert!((expected - 1.37911).abs() < 1e-5);
    }

    #[test]
    fn optimal_parameters_approach_half() {
        // as r grows both a* and b* approach 1/2
        let rf = 101.0f64;
        let s = rf.sqrt();
        let a = (rf - 1.0 - s) / (2.0 * rf);
        let b = (rf * rf - rf - (rf + 1.0) * s) / (2.0 * rf * rf);
        assert!((a - 0.5).abs() < 0.06);
        assert!((b - 0.5).abs() < 0.06);
    }

    #[test]
    fn delta_mu0_r2() {
        let d = delta_mu0(2).unwrap();
        let expected = (5.0 - 3.0 * 2.0f64.sqrt()) / 14.0;
        assert!((d.gram_value - expected).abs() < 1e-12);
        assert!((d.closed_form - 0.054097).abs() < 1e-6);
    }

    #[test]
    fn delta_quotient_minimized_at_optimal_parameters() {
        // any PSD (a, b) realizes a quotient above the closed form; the
        // optimum attains it
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xAB);
        for r in [2u64, 3] {
            let s = (r as f64).sqrt();
            let closed = (s - 1.0) * (s - 1.0) / (2.0 * (r as f64 - s + 1.0));
            let mut found = 0;
            while found < 20 {
                let a = rng.gen_range(-1.0..1.0);
                let b = rng.gen_range(-1.0..1.0);
                if !psd_range_contains(r, a, b, 0.0) {
                    continue;
                }
                found += 1;
                let (g, _) = gram_matrix(&GramSpec { r, a, b }).unwrap();
                let n = g.nrows() as f64;
                let quotient = g.iter().sum::<f64>() / (n * n);
                assert!(
                    quotient >= closed - 1e-10,
                    "r={r} ({a},{b}): {quotient} < {closed}"
                );
            }
        }
    }

    #[test]
    fn distortion_variance_bound_on_random_measures() {
        use super::super::distortion_variance_sides;
        use rand::{Rng, SeedableRng};
        let opt = optimal_ab(2).unwrap();
        let (emb, rep) = iota_embedding(&GramSpec {
            r: 2,
            a: opt.a,
            b: opt.b,
        })
        .unwrap();
        let (_, graph) = gram_matrix(&GramSpec {
            r: 2,
            a: opt.a,
            b: opt.b,
        })
        .unwrap();
        let cone = GraphCone::over_graph(&graph).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xD15);
        for _ in 0..200 {
            let k = rng.gen_range(2..=6);
            let support: Vec<(usize, f64)> = (0..k)
                .map(|_| (rng.gen_range(0..14), rng.gen_range(0.1..2.0)))
                .collect();
            let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.1..1.0)).collect();
            let total: f64 = raw.iter().sum();
            let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
            let (lhs, rhs) =
                distortion_variance_sides(&emb, &cone, rep.realized_distortion, &support, &weights)
                    .unwrap();
            assert!(lhs >= rhs - 1e-8, "variance bound violated: {lhs} < {rhs}");
        }
    }

    #[test]
    fn delta_bound_from_distortion() {
        use super::super::delta_from_distortion;
        assert_eq!(delta_from_distortion(1.0).unwrap(), 0.0);
        assert!((delta_from_distortion(2.0).unwrap() - 0.75).abs() < 1e-15);
        let opt = optimal_ab(2).unwrap();
        let d = delta_from_distortion(opt.distortion).unwrap();
        assert!((d - 0.35987).abs() < 1e-4);
        assert!(delta_from_distortion(0.9).is_err());
    }

    #[test]
    fn iota_is_radial_lipschitz_and_edge_isometric() {
        let opt = optimal_ab(2).unwrap();
        let (emb, rep) = iota_embedding(&GramSpec {
            r: 2,
            a: opt.a,
            b: opt.b,
        })
        .unwrap();
        assert_eq!(emb.dim, 7);
        assert!(rep.lipschitz_excess <= 1e-10);
        assert!(rep.edge_isometry_deviation <= 1e-10);
        assert!((rep.realized_distortion - opt.distortion).abs() < 1e-8);
        assert!((rep.realized_distortion - rep.formula_distortion).abs() < 1e-8);
        for i in 0..emb.direction_count() {
            let norm: f64 = emb.direction(i).iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-10);
        }
    }
}
