//! Discrete fixed-point descent: repeatedly move the basepoint toward the
//! barycenter of its one-step neighbor images.

use serde::{Deserialize, Serialize};

use crate::cat0::{barycenter, CatPoint, FiniteMeasure};
use crate::error::{Error, Result};

use super::action::EquivariantMap;
use super::reports::{equivariant_energy, minus_delta};
use super::words::signed_generators;

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DescentOptions {
    /// Step toward the neighbor barycenter, in (0, 1].
    pub step: f64,
    /// Stop when the energy or the gradient norm drops below this.
    pub tol: f64,
    pub max_iter: usize,
    /// Optional (n, ε) pair; when given, the report carries the descent
    /// constant `2ε²/(n²(n-1)²)`.
    pub n_eps: Option<(usize, f64)>,
}

impl Default for DescentOptions {
    fn default() -> Self {
        DescentOptions {
            step: 0.5,
            tol: 1e-9,
            max_iter: 100_000,
            n_eps: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DescentOutcome {
    /// Energy below tolerance: the orbit collapsed onto a fixed point.
    EnergyConverged,
    /// Gradient vanished while the energy stayed positive: the descent
    /// stalled at a harmonic map and no fixed point was found.
    GradientVanished,
    MaxIterReached,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DescentReport {
    pub outcome: DescentOutcome,
    pub iterations: usize,
    pub final_point: CatPoint,
    pub energy: f64,
    pub gradient_norm: f64,
    /// `2ε²/(n²(n-1)²)` when (n, ε) was supplied.
    pub gradient_constant: Option<f64>,
    /// Rows (iteration, energy, gradient norm), including the final state.
    pub trace: Vec<(usize, f64, f64)>,
}

/// Run the descent from `f₀`. Errors if the energy increases for 100
/// consecutive steps.
pub fn fixed_point_descent(f0: &EquivariantMap, opts: &DescentOptions) -> Result<DescentReport> {
    if opts.step <= 0.0 || opts.step > 1.0 || opts.step.is_nan() {
        return Err(Error::InvalidParameter(
            "descent step must be in (0, 1]".into(),
        ));
    }
    let gradient_constant = match opts.n_eps {
        Some((n, eps)) => {
            if n < 2 {
                return Err(Error::InvalidParameter(
                    "the descent constant needs n >= 2".into(),
                ));
            }
            let nf = n as f64;
            Some(2.0 * eps * eps / (nf * nf * (nf - 1.0) * (nf - 1.0)))
        }
        None => None,
    };
    let space = f0.action.target().clone();
    let gens = signed_generators(f0.action.rank());
    let weight = 1.0 / gens.len() as f64;
    let mut f = f0.clone();
    let mut trace = Vec::new();
    let mut increases = 0usize;
    let mut last_energy = f64::INFINITY;
    for iter in 0..=opts.max_iter {
        let energy = equivariant_energy(&f, 1)?;
        let (_, grad) = minus_delta(&f, 1)?;
        trace.push((iter, energy, grad.length));
        if energy < opts.tol || grad.length < opts.tol {
            let outcome = if energy < opts.tol {
                DescentOutcome::EnergyConverged
            } else {
                DescentOutcome::GradientVanished
            };
            return Ok(DescentReport {
                outcome,
                iterations: iter,
                final_point: f.basepoint.clone(),
                energy,
                gradient_norm: grad.length,
                gradient_constant,
                trace,
            });
        }
        if energy > last_energy + 1e-15 {
            increases += 1;
            if increases >= 100 {
                return Err(Error::DescentDivergence {
                    count: increases,
                    iteration: iter,
                });
            }
        } else {
            increases = 0;
        }
        last_energy = energy;
        // barycenter of the one-step neighbor images in the target space
        let mut points = Vec::with_capacity(gens.len());
        for &s in &gens {
            points.push(f.value(&vec![s])?);
        }
        let m = FiniteMeasure::new(points, vec![weight; gens.len()])?;
        let b = barycenter(&space, &m)?;
        let next = space.geodesic_point(&f.basepoint, &b, opts.step)?;
        f = EquivariantMap::new(f.action.clone(), next)?;
    }
    let energy = equivariant_energy(&f, 1)?;
    let (_, grad) = minus_delta(&f, 1)?;
    Ok(DescentReport {
        outcome: DescentOutcome::MaxIterReached,
        iterations: opts.max_iter,
        final_point: f.basepoint.clone(),
        energy,
        gradient_norm: grad.length,
        gradient_constant,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::super::action::{GroupAction, Isometry};
    use super::super::reports::fixed_point_set;
    use super::*;
    use crate::cat0::{CatSpace, MetricTree, TreePoint};
    use crate::io::spider;

    #[test]
    fn z_reflection_descends_to_fixed_point() {
        let action = GroupAction::z_example(-1, 1.0).unwrap();
        let f = super::super::action::EquivariantMap::new(
            action,
            crate::cat0::CatPoint::Euclidean(vec![3.7]),
        )
        .unwrap();
        let rep = fixed_point_descent(&f, &DescentOptions::default()).unwrap();
        assert_eq!(rep.outcome, DescentOutcome::EnergyConverged);
        if let crate::cat0::CatPoint::Euclidean(x) = rep.final_point {
            assert!((x[0] - 0.5).abs() < 1e-4, "limit {} should be τ/2", x[0]);
        }
    }

    #[test]
    fn z_translation_stalls_without_fixed_point() {
        let action = GroupAction::z_example(1, 0.8).unwrap();
        let f = super::super::action::EquivariantMap::new(
            action,
            crate::cat0::CatPoint::Euclidean(vec![0.0]),
        )
        .unwrap();
        let rep = fixed_point_descent(&f, &DescentOptions::default()).unwrap();
        assert_eq!(rep.outcome, DescentOutcome::GradientVanished);
        assert!((rep.energy - 0.32).abs() < 1e-12); // τ²/2
    }

    #[test]
    fn spider_action_converges_to_fixed_set() {
        let tree = MetricTree::new(spider(3, 2)).unwrap();
        let rotate = Isometry::TreeAuto {
            perm: vec![0, 3, 4, 5, 6, 1, 2],
        };
        let swap = Isometry::TreeAuto {
            perm: vec![0, 3, 4, 1, 2, 5, 6],
        };
        let action = GroupAction::new(CatSpace::Tree(tree), vec![rotate, swap]).unwrap();
        let f = super::super::action::EquivariantMap::new(
            action,
            crate::cat0::CatPoint::Tree(TreePoint::Vertex(2)),
        )
        .unwrap();
        let fixed = fixed_point_set(&f).unwrap();
        assert!(!fixed.is_empty());
        let rep = fixed_point_descent(&f, &DescentOptions::default()).unwrap();
        assert_eq!(rep.outcome, DescentOutcome::EnergyConverged);
        let space = f.action.target();
        let dist_to_fixed = fixed
            .iter()
            .map(|p| space.distance(p, &rep.final_point).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert!(
            dist_to_fixed < 1e-3,
            "ended {dist_to_fixed} from the fixed set"
        );
    }

    #[test]
    fn descent_constant() {
        let action = GroupAction::z_example(-1, 1.0).unwrap();
        let f = super::super::action::EquivariantMap::new(
            action,
            crate::cat0::CatPoint::Euclidean(vec![1.0]),
        )
        .unwrap();
        let opts = DescentOptions {
            n_eps: Some((2, std::f64::consts::SQRT_2 - 1.0)),
            ..DescentOptions::default()
        };
        let rep = fixed_point_descent(&f, &opts).unwrap();
        let eps = std::f64::consts::SQRT_2 - 1.0;
        assert!((rep.gradient_constant.unwrap() - 2.0 * eps * eps / 4.0).abs() < 1e-15);
    }
}
