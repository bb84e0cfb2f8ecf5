//! Energies of equivariant and vertex maps, the n-step inequality suite,
//! the affine averaging operator, and the tree converse check.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::cat0::{barycenter, CatPoint, CatSpace, FiniteMeasure, TangentCone, TangentVector};
use crate::error::{Error, Result};
use crate::graph::Graph;

use super::action::{EquivariantMap, Isometry};
use super::words::{free_walk_distribution, FreeWalkDistribution};

/// `E_{μⁿ}(f) = ½ Σ_γ μⁿ(e, γ) d(f(e), f(γ))²`.
pub fn equivariant_energy(f: &EquivariantMap, n: usize) -> Result<f64> {
    let dist = free_walk_distribution(f.action.rank(), n)?;
    equivariant_energy_with(f, &dist)
}

pub fn equivariant_energy_with(f: &EquivariantMap, dist: &FreeWalkDistribution) -> Result<f64> {
    let space = f.action.target();
    let mut acc = 0.0;
    for (w, p) in dist.iter() {
        let fw = f.value(w)?;
        let d = space.distance(&f.basepoint, &fw)?;
        acc += 0.5 * p * d * d;
    }
    Ok(acc)
}

/// n-step energy of the standard embedding of `F_m` into its Cayley tree:
/// `½ Σ μⁿ(e, γ) |γ|²` with `|γ|` the reduced word length.
pub fn cayley_tree_energy(m: usize, n: usize) -> Result<f64> {
    let dist = free_walk_distribution(m, n)?;
    Ok(dist
        .iter()
        .map(|(w, p)| 0.5 * p * (w.len() * w.len()) as f64)
        .sum())
}

/// `-Δ_i f(e)`: the barycenter of the push-forward of `μ^i(e, ·)` under
/// `π_{f(e)}`. Supported for Euclidean and metric-tree targets.
pub fn minus_delta(f: &EquivariantMap, i: usize) -> Result<(TangentCone, TangentVector)> {
    let tc = tangent_cone_at_basepoint(f)?;
    let dist = free_walk_distribution(f.action.rank(), i)?;
    let v = minus_delta_with(f, &tc, &dist)?;
    Ok((tc, v))
}

/// Tangent cone at the basepoint, rejecting targets where `-Δ` is not
/// implemented.
pub fn tangent_cone_at_basepoint(f: &EquivariantMap) -> Result<TangentCone> {
    match f.action.target() {
        CatSpace::Euclidean { .. } | CatSpace::Tree(_) => {
            f.action.target().tangent_cone_at(&f.basepoint)
        }
        CatSpace::Cone(_) => Err(Error::Unsupported(
            "-Δ needs a Euclidean or metric-tree target".into(),
        )),
    }
}

pub fn minus_delta_with(
    f: &EquivariantMap,
    tc: &TangentCone,
    dist: &FreeWalkDistribution,
) -> Result<TangentVector> {
    let space = f.action.target();
    match space {
        CatSpace::Euclidean { dim } => {
            // closed form Σ μ(e,γ) (f(γ) - f(e))
            let base = match &f.basepoint {
                CatPoint::Euclidean(x) => x.clone(),
                _ => unreachable!("validated"),
            };
            let mut acc = vec![0.0; *dim];
            for (w, p) in dist.iter() {
                if let CatPoint::Euclidean(x) = f.value(w)? {
                    for (a, (xi, bi)) in acc.iter_mut().zip(x.iter().zip(&base)) {
                        *a += p * (xi - bi);
                    }
                }
            }
            let length = acc.iter().map(|d| d * d).sum::<f64>().sqrt();
            Ok(TangentVector {
                point: CatPoint::Euclidean(acc),
                length,
            })
        }
        CatSpace::Tree(_) => {
            let mut vectors = Vec::with_capacity(dist.support_len());
            let mut weights = Vec::with_capacity(dist.support_len());
            for (w, p) in dist.iter() {
                let fw = f.value(w)?;
                vectors.push(tc.project(space, &fw)?);
                weights.push(p);
            }
            tc.barycenter(&vectors, &weights)
        }
        CatSpace::Cone(_) => Err(Error::Unsupported(
            "-Δ needs a Euclidean or metric-tree target".into(),
        )),
    }
}

/// Per-`n` rows of the inequality suite; slacks are `lhs - rhs` of the
/// inequality in the direction that must be nonnegative.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NStepRow {
    pub n: usize,
    pub energy: f64,
    /// `E_{μⁿ} - nE_μ + Σ_{i<n} ⟨-Δᵢ, -Δ₁⟩` (barycenter route).
    pub slack_nstep: Option<f64>,
    /// `n²E_μ - E_{μⁿ}`.
    pub slack_quadratic: f64,
    /// `2 E_{μⁿ} - |-Δ_{μⁿ}f|²`.
    pub slack_grad: Option<f64>,
    /// `2 n² E_μ - |-Δ_{μⁿ}f|²`.
    pub slack_grad_quadratic: Option<f64>,
    /// `E_{μⁿ} - nE_μ + (n(n-1)/2)·√(2E_μ)·|-Δ₁f|` (norm route).
    pub slack_cubic: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InequalityReport {
    pub n_max: usize,
    pub base_energy: f64,
    pub delta1_norm: Option<f64>,
    pub rows: Vec<NStepRow>,
    /// `E_{μ*μ} - 2E_μ + |-Δ₁f|²`.
    pub slack_two_step: Option<f64>,
    /// Whether the `-Δ` terms were computable for this target.
    pub gradient_supported: bool,
}

impl InequalityReport {
    /// Smallest slack across every inequality in the report.
    pub fn min_slack(&self) -> f64 {
        let mut min = f64::INFINITY;
        let mut fold = |v: Option<f64>| {
            if let Some(x) = v {
                min = min.min(x);
            }
        };
        for row in &self.rows {
            fold(row.slack_nstep);
            fold(Some(row.slack_quadratic));
            fold(row.slack_grad);
            fold(row.slack_grad_quadratic);
            fold(row.slack_cubic);
        }
        fold(self.slack_two_step);
        min
    }
}

/// Evaluate the whole n-step inequality suite for `n ≤ n_max`.
pub fn inequality_report(f: &EquivariantMap, n_max: usize) -> Result<InequalityReport> {
    if n_max == 0 || n_max > 8 {
        return Err(Error::SizeLimit(
            "inequality suite supports 1 <= n_max <= 8".into(),
        ));
    }
    let k = f.action.rank();
    let dists: Vec<FreeWalkDistribution> = (1..=n_max)
        .map(|n| free_walk_distribution(k, n))
        .collect::<Result<_>>()?;
    let energies: Vec<f64> = dists
        .iter()
        .map(|d| equivariant_energy_with(f, d))
        .collect::<Result<_>>()?;
    let e1 = energies[0];

    let tc = tangent_cone_at_basepoint(f).ok();
    let gradient_supported = tc.is_some();
    let deltas: Option<Vec<TangentVector>> = match &tc {
        Some(tc) => Some(
            dists
                .iter()
                .map(|d| minus_delta_with(f, tc, d))
                .collect::<Result<_>>()?,
        ),
        None => None,
    };
    let delta1_norm = deltas.as_ref().map(|d| d[0].length);

    let mut rows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let en = energies[n - 1];
        let (slack_nstep, slack_grad, slack_grad_quadratic, slack_cubic) = match (&tc, &deltas) {
            (Some(tc), Some(deltas)) => {
                let mut inner_sum = 0.0;
                for i in 1..n {
                    inner_sum += tc.inner(&deltas[i - 1], &deltas[0])?;
                }
                let dn = deltas[n - 1].length;
                let d1 = deltas[0].length;
                let nf = n as f64;
                (
                    Some(en - nf * e1 + inner_sum),
                    Some(2.0 * en - dn * dn),
                    Some(2.0 * nf * nf * e1 - dn * dn),
                    Some(en - nf * e1 + nf * (nf - 1.0) / 2.0 * (2.0 * e1).sqrt() * d1),
                )
            }
            _ => (None, None, None, None),
        };
        rows.push(NStepRow {
            n,
            energy: en,
            slack_nstep,
            slack_quadratic: (n * n) as f64 * e1 - en,
            slack_grad,
            slack_grad_quadratic,
            slack_cubic,
        });
    }
    let slack_two_step = match (&deltas, n_max >= 2) {
        (Some(deltas), true) => {
            let d1 = deltas[0].length;
            Some(energies[1] - 2.0 * e1 + d1 * d1)
        }
        _ => None,
    };
    Ok(InequalityReport {
        n_max,
        base_energy: e1,
        delta1_norm,
        rows,
        slack_two_step,
        gradient_supported,
    })
}

/// The averaging operator `M v = Σ_s μ(e,s) ρ₀(s) v` on `ℳ_{ρ₀} ≅ ℝ^d`.
pub fn averaging_operator(f: &EquivariantMap) -> Result<DMatrix<f64>> {
    let dim = match f.action.target() {
        CatSpace::Euclidean { dim } => *dim,
        _ => {
            return Err(Error::Unsupported(
                "the averaging operator needs a Euclidean target".into(),
            ))
        }
    };
    let k = f.action.rank();
    let weight = 1.0 / (2 * k) as f64;
    let mut m = DMatrix::<f64>::zeros(dim, dim);
    for g in 0..k {
        match f.action.generator(g) {
            Isometry::Euclidean { rot, .. } => {
                m += weight * rot;
                m += weight * rot.transpose();
            }
            _ => unreachable!("Euclidean target"),
        }
    }
    Ok(m)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AffineOperatorReport {
    pub n_max: usize,
    pub base_energy: f64,
    pub delta1_norm: f64,
    pub harmonic: bool,
    /// `‖-Δ_n f(e) - (M^{n-1} + … + I)(-Δ₁ f(e))‖` per n.
    pub identity_deviation: Vec<f64>,
    /// `| |-Δ_n f|² - |(M^{n-1} + … + I)(-Δ₁f)|² |` per n.
    pub grad_form_deviation: Vec<f64>,
    /// `n E_μ - E_{μⁿ}` per n (must be ≥ 0; 0 exactly when harmonic).
    pub slack_linear: Vec<f64>,
    /// max |⟨Mv, w⟩ - ⟨v, Mw⟩| over sampled pairs.
    pub selfadjoint_deviation: f64,
}

/// Verify the affine identities on a Euclidean-target map.
pub fn affine_operator_report(f: &EquivariantMap, n_max: usize) -> Result<AffineOperatorReport> {
    use rand::{Rng, SeedableRng};
    if n_max == 0 || n_max > 8 {
        return Err(Error::SizeLimit(
            "affine report supports 1 <= n_max <= 8".into(),
        ));
    }
    let m = averaging_operator(f)?;
    let dim = m.nrows();
    let k = f.action.rank();

    let delta_vec = |i: usize| -> Result<DVector<f64>> {
        let dist = free_walk_distribution(k, i)?;
        let tc = f.action.target().tangent_cone_at(&f.basepoint)?;
        let v = minus_delta_with(f, &tc, &dist)?;
        match v.point {
            CatPoint::Euclidean(x) => Ok(DVector::from_vec(x)),
            _ => unreachable!("Euclidean tangent cone"),
        }
    };

    let delta1 = delta_vec(1)?;
    let delta1_norm = delta1.norm();
    let mut identity_deviation = Vec::with_capacity(n_max);
    let mut grad_form_deviation = Vec::with_capacity(n_max);
    let mut slack_linear = Vec::with_capacity(n_max);
    let e1 = equivariant_energy(f, 1)?;
    let mut geom_sum = DMatrix::<f64>::zeros(dim, dim); // M^{n-1} + … + I
    let mut power = DMatrix::<f64>::identity(dim, dim);
    for n in 1..=n_max {
        geom_sum += &power;
        power = &power * &m;
        let lhs = delta_vec(n)?;
        let rhs = &geom_sum * &delta1;
        identity_deviation.push((&lhs - &rhs).norm());
        grad_form_deviation.push((lhs.norm_squared() - rhs.norm_squared()).abs());
        slack_linear.push(n as f64 * e1 - equivariant_energy(f, n)?);
    }

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xADA);
    let mut selfadjoint_deviation: f64 = 0.0;
    for _ in 0..32 {
        let v = DVector::from_iterator(dim, (0..dim).map(|_| rng.gen_range(-1.0..1.0)));
        let w = DVector::from_iterator(dim, (0..dim).map(|_| rng.gen_range(-1.0..1.0)));
        let dev = ((&m * &v).dot(&w) - v.dot(&(&m * &w))).abs();
        selfadjoint_deviation = selfadjoint_deviation.max(dev);
    }

    Ok(AffineOperatorReport {
        n_max,
        base_energy: e1,
        delta1_norm,
        harmonic: delta1_norm <= 1e-10,
        identity_deviation,
        grad_form_deviation,
        slack_linear,
        selfadjoint_deviation,
    })
}

/// n-step energy of a vertex map `φ: V → T` and its Rayleigh quotient
/// `RQ(φ) = E_{μ_G}(φ) / Σ ν_G(u) d(φ(u), bar)²`.
pub fn vertex_energy(
    graph: &Graph,
    target: &CatSpace,
    phi: &[CatPoint],
    n: usize,
) -> Result<(f64, f64)> {
    let energy_n = vertex_energy_only(graph, target, phi, n)?;
    let rq = rayleigh_quotient(graph, target, phi)?;
    Ok((energy_n, rq))
}

/// `E_{μ_G^n}(φ) = ½ Σ_u ν(u) Σ_v μⁿ(u,v) d(φu, φv)²`.
pub fn vertex_energy_only(
    graph: &Graph,
    target: &CatSpace,
    phi: &[CatPoint],
    n: usize,
) -> Result<f64> {
    if phi.len() != graph.vertex_count() {
        return Err(Error::InvalidParameter(
            "vertex map must cover every vertex".into(),
        ));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("step count must be >= 1".into()));
    }
    for p in phi {
        target.validate_point(p)?;
    }
    let (kernel, nu) = graph.standard_walk();
    let kn = kernel.power(n)?;
    let mut acc = 0.0;
    for u in 0..graph.vertex_count() {
        for &(v, p) in kn.row(u) {
            let d = target.distance(&phi[u], &phi[v])?;
            acc += 0.5 * nu.weight(u) * p * d * d;
        }
    }
    Ok(acc)
}

/// Rayleigh quotient of a nonconstant vertex map.
pub fn rayleigh_quotient(graph: &Graph, target: &CatSpace, phi: &[CatPoint]) -> Result<f64> {
    let (_, nu) = graph.standard_walk();
    let energy = vertex_energy_only(graph, target, phi, 1)?;
    let m = FiniteMeasure::new(phi.to_vec(), nu.weights().to_vec())?;
    let bar = barycenter(target, &m)?;
    let mut variance = 0.0;
    for (u, p) in phi.iter().enumerate() {
        let d = target.distance(p, &bar)?;
        variance += nu.weight(u) * d * d;
    }
    if variance <= 0.0 {
        return Err(Error::InvalidParameter(
            "Rayleigh quotient undefined for constant maps".into(),
        ));
    }
    Ok(energy / variance)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConverseTreeReport {
    /// Points fixed by the whole action: fixed vertices and midpoints of
    /// edges stable under every generator.
    pub fixed_points: Vec<CatPoint>,
    pub c_rho: f64,
    pub base_energy: f64,
    pub energies: Vec<f64>,
    /// `C_ρ E_μ - E_{μⁿ}` per n (must be ≥ 0).
    pub slacks: Vec<f64>,
}

/// Check `E_{μⁿ}(f) ≤ C_ρ E_μ(f)` with `C_ρ = (min_s μ(e,s))⁻¹ = 2k` for
/// a tree action with nonempty fixed set.
pub fn converse_tree_check(f: &EquivariantMap, n_max: usize) -> Result<ConverseTreeReport> {
    if !matches!(f.action.target(), CatSpace::Tree(_)) {
        return Err(Error::Unsupported(
            "converse check needs a metric-tree target".into(),
        ));
    }
    let fixed_points = fixed_point_set(f)?;
    if fixed_points.is_empty() {
        return Err(Error::Precondition(
            "the action has no global fixed point; the converse bound does not apply".into(),
        ));
    }
    let k = f.action.rank();
    let c_rho = (2 * k) as f64;
    let base_energy = equivariant_energy(f, 1)?;
    let mut energies = Vec::with_capacity(n_max);
    let mut slacks = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let en = equivariant_energy(f, n)?;
        energies.push(en);
        slacks.push(c_rho * base_energy - en);
    }
    Ok(ConverseTreeReport {
        fixed_points,
        c_rho,
        base_energy,
        energies,
        slacks,
    })
}

/// Global fixed points of a tree action: vertices fixed by every generator
/// plus midpoints of edges mapped to themselves by every generator.
pub fn fixed_point_set(f: &EquivariantMap) -> Result<Vec<CatPoint>> {
    let tree = match f.action.target() {
        CatSpace::Tree(t) => t,
        _ => {
            return Err(Error::Unsupported(
                "fixed sets are computed for tree actions".into(),
            ))
        }
    };
    let g = tree.graph();
    let k = f.action.rank();
    let mut out = Vec::new();
    'vertices: for v in 0..g.vertex_count() {
        let p = CatPoint::Tree(crate::cat0::TreePoint::Vertex(v));
        for s in 1..=k as i8 {
            if f.action.apply_letter(s, &p)? != p {
                continue 'vertices;
            }
        }
        out.push(p);
    }
    'edges: for (eid, &(_u, _v)) in g.edges().iter().enumerate() {
        let mid = CatPoint::Tree(crate::cat0::TreePoint::Edge {
            edge: eid,
            offset: g.length(eid) / 2.0,
        });
        for s in 1..=k as i8 {
            let image = f.action.apply_letter(s, &mid)?;
            if f.action.target().distance(&image, &mid)? > 1e-12 {
                continue 'edges;
            }
        }
        out.push(mid);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::action::GroupAction;
    use super::super::sampling;
    use super::*;
    use crate::cat0::TreePoint;
    use rand::SeedableRng;

    fn z_map(u: i8, tau: f64, alpha: f64) -> EquivariantMap {
        EquivariantMap::new(
            GroupAction::z_example(u, tau).unwrap(),
            CatPoint::Euclidean(vec![alpha]),
        )
        .unwrap()
    }

    #[test]
    fn z_translation_energy() {
        let f = z_map(1, 0.75, 0.3);
        for n in 1..=10 {
            let e = equivariant_energy(&f, n).unwrap();
            let expected = n as f64 * 0.75 * 0.75 / 2.0;
            assert!((e - expected).abs() < 1e-12, "n={n}: {e} vs {expected}");
        }
    }

    #[test]
    fn z_reflection_energy() {
        let (tau, alpha) = (1.25, 0.3);
        let f = z_map(-1, tau, alpha);
        for n in 1..=10 {
            let e = equivariant_energy(&f, n).unwrap();
            let expected = if n % 2 == 0 {
                0.0
            } else {
                2.0 * (alpha - tau / 2.0) * (alpha - tau / 2.0)
            };
            assert!((e - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn cayley_energy_bound() {
        for m in [2usize, 3] {
            for n in 1..=6 {
                let e = cayley_tree_energy(m, n).unwrap();
                let bound = m as f64 / (2 * m - 1) as f64 * (n * n) as f64;
                assert!(e <= bound + 1e-12, "m={m} n={n}: {e} > {bound}");
                assert!(e > 0.0);
            }
        }
    }

    #[test]
    fn harmonic_z_cases() {
        // u = 1: mean of ±τ displacements vanishes
        let f = z_map(1, 0.6, 0.1);
        let (_, d) = minus_delta(&f, 1).unwrap();
        assert!(d.length < 1e-14);
        // u = -1, α = τ/2 is harmonic
        let g = z_map(-1, 0.6, 0.3);
        let (_, d) = minus_delta(&g, 1).unwrap();
        assert!(d.length < 1e-14);
        // u = -1, α ≠ τ/2 is not
        let h = z_map(-1, 0.6, 0.5);
        let (_, d) = minus_delta(&h, 1).unwrap();
        assert!((d.length - 0.4).abs() < 1e-12); // |2α - τ|
    }

    #[test]
    fn hilbert_case_nstep_equality() {
        // ⟨-Δᵢ, -Δ₁⟩ correction is exact on Hilbert targets
        let f = z_map(1, 0.9, 0.2);
        let rep = inequality_report(&f, 6).unwrap();
        for row in &rep.rows {
            assert!(row.slack_nstep.unwrap().abs() < 1e-12, "n={}", row.n);
            assert!(row.slack_quadratic >= -1e-12);
            assert!(row.slack_cubic.unwrap() >= -1e-12);
        }
        assert!(rep.slack_two_step.unwrap().abs() < 1e-12);
    }

    #[test]
    fn random_affine_inequalities() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..20 {
            let action = sampling::random_euclidean_action(3, 2, &mut rng).unwrap();
            let base = CatPoint::Euclidean(vec![
                rand::Rng::gen_range(&mut rng, -1.0..1.0),
                rand::Rng::gen_range(&mut rng, -1.0..1.0),
                rand::Rng::gen_range(&mut rng, -1.0..1.0),
            ]);
            let f = EquivariantMap::new(action, base).unwrap();
            let rep = inequality_report(&f, 5).unwrap();
            assert!(rep.min_slack() >= -1e-8, "min slack {}", rep.min_slack());
            // Hilbert case: the n-step bound is an equality
            for row in &rep.rows {
                assert!(row.slack_nstep.unwrap().abs() < 1e-8);
            }
        }
    }

    #[test]
    fn harmonic_growth_is_linear() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let f = sampling::harmonic_euclidean_map(4, 2, &mut rng).unwrap();
        let rep = affine_operator_report(&f, 6).unwrap();
        assert!(rep.harmonic, "delta1 norm {}", rep.delta1_norm);
        for (i, slack) in rep.slack_linear.iter().enumerate() {
            assert!(slack.abs() < 1e-8, "n={}: slack {slack}", i + 1);
        }
    }

    #[test]
    fn affine_identity_matches_direct_computation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let action = sampling::random_euclidean_action(4, 2, &mut rng).unwrap();
            let base = CatPoint::Euclidean(vec![0.4, -0.3, 0.2, 0.9]);
            let f = EquivariantMap::new(action, base).unwrap();
            let rep = affine_operator_report(&f, 6).unwrap();
            for dev in &rep.identity_deviation {
                assert!(*dev < 1e-10, "identity deviation {dev}");
            }
            for dev in &rep.grad_form_deviation {
                assert!(*dev < 1e-10);
            }
            assert!(rep.selfadjoint_deviation < 1e-12);
            for slack in &rep.slack_linear {
                assert!(*slack >= -1e-8);
            }
        }
    }

    #[test]
    fn z_reflection_operator_identity() {
        let f = z_map(-1, 1.0, 0.2);
        let rep = affine_operator_report(&f, 6).unwrap();
        for dev in &rep.identity_deviation {
            assert!(*dev < 1e-14);
        }
    }

    #[test]
    fn tree_action_inequalities() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5150);
        for _ in 0..10 {
            let action = sampling::random_spider_action(4, 2, 2, &mut rng).unwrap();
            let base = sampling::random_tree_basepoint(&action, &mut rng);
            let f = EquivariantMap::new(action, base).unwrap();
            let rep = inequality_report(&f, 4).unwrap();
            assert!(rep.gradient_supported);
            assert!(rep.min_slack() >= -1e-8, "min slack {}", rep.min_slack());
        }
    }

    #[test]
    fn vertex_energy_triangle() {
        let g = crate::io::builtin_graph("triangle").unwrap();
        let space = CatSpace::euclidean(1);
        let phi = vec![
            CatPoint::Euclidean(vec![0.0]),
            CatPoint::Euclidean(vec![1.0]),
            CatPoint::Euclidean(vec![2.0]),
        ];
        let (e, _rq) = vertex_energy(&g, &space, &phi, 1).unwrap();
        // ½ Σ_u ν(u) Σ_v μ(u,v) (φu - φv)² with ν ≡ 1/3, μ = 1/2:
        // ordered pairs (0,1),(1,0),(1,2),(2,1),(0,2),(2,0) → (1+1+1+1+4+4)/12 = 1
        assert!((e - 1.0).abs() < 1e-12);
        // independent oracle: Σ over unordered edges d²/|E| · ½ ... = Σ d²/(2|E|)
        let oracle = (1.0 + 1.0 + 4.0) / 6.0;
        assert!((e - oracle).abs() < 1e-12);
        // constant map: zero energy, undefined RQ
        let constant = vec![CatPoint::Euclidean(vec![1.0]); 3];
        assert!((vertex_energy_only(&g, &space, &constant, 1).unwrap()).abs() < 1e-15);
        assert!(rayleigh_quotient(&g, &space, &constant).is_err());
    }

    #[test]
    fn rayleigh_quotient_of_eigenfunction() {
        let g = crate::io::builtin_graph("k4").unwrap();
        let space = CatSpace::euclidean(1);
        // any balanced ±1 map on K4 is an eigenfunction at λ₁ = 4/3
        let phi = vec![
            CatPoint::Euclidean(vec![1.0]),
            CatPoint::Euclidean(vec![-1.0]),
            CatPoint::Euclidean(vec![1.0]),
            CatPoint::Euclidean(vec![-1.0]),
        ];
        let rq = rayleigh_quotient(&g, &space, &phi).unwrap();
        assert!((rq - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn tripod_rotation_converse_bound() {
        use super::super::action::Isometry;
        let tree = crate::cat0::MetricTree::new(crate::io::spider(3, 1)).unwrap();
        let rotate = Isometry::TreeAuto {
            perm: vec![0, 2, 3, 1],
        };
        let swap = Isometry::TreeAuto {
            perm: vec![0, 2, 1, 3],
        };
        let action = GroupAction::new(CatSpace::Tree(tree), vec![rotate, swap]).unwrap();
        let f = EquivariantMap::new(action, CatPoint::Tree(TreePoint::Vertex(1))).unwrap();
        let rep = converse_tree_check(&f, 6).unwrap();
        assert!((rep.c_rho - 4.0).abs() < 1e-15);
        assert!(!rep.fixed_points.is_empty());
        for slack in &rep.slacks {
            assert!(*slack >= -1e-12);
        }
        // basepoint inside the fixed set: all energies vanish
        let g =
            EquivariantMap::new(f.action.clone(), CatPoint::Tree(TreePoint::Vertex(0))).unwrap();
        let rep0 = converse_tree_check(&g, 4).unwrap();
        assert!(rep0.base_energy.abs() < 1e-15);
        assert!(rep0.energies.iter().all(|e| e.abs() < 1e-15));
    }

    #[test]
    fn edge_swap_fixes_only_the_midpoint() {
        let tree =
            crate::cat0::MetricTree::new(crate::graph::Graph::from_edges(&[(0, 1)]).unwrap())
                .unwrap();
        let swap = Isometry::TreeAuto { perm: vec![1, 0] };
        let action = GroupAction::new(CatSpace::Tree(tree), vec![swap]).unwrap();
        let f = EquivariantMap::new(action, CatPoint::Tree(TreePoint::Vertex(0))).unwrap();
        // the midpoint of the swapped edge is fixed, so the set is nonempty
        let rep = converse_tree_check(&f, 3).unwrap();
        assert_eq!(rep.fixed_points.len(), 1);
    }

    #[test]
    fn trivial_action_energies_vanish() {
        let tree = crate::cat0::MetricTree::new(crate::io::spider(3, 1)).unwrap();
        let id = Isometry::TreeAuto {
            perm: vec![0, 1, 2, 3],
        };
        let action = GroupAction::new(CatSpace::Tree(tree), vec![id.clone(), id]).unwrap();
        let f = EquivariantMap::new(action, CatPoint::Tree(TreePoint::Vertex(2))).unwrap();
        let rep = converse_tree_check(&f, 4).unwrap();
        assert!(rep.base_energy == 0.0);
        assert!(rep.energies.iter().all(|&e| e == 0.0));
    }
}
