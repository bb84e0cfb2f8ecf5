//! Seeded generators of random actions, used by experiments and tests.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::cat0::{CatPoint, CatSpace, MetricTree, TreePoint};
use crate::error::Result;
use crate::io::spider;

use super::action::{EquivariantMap, GroupAction, Isometry};

/// Haar-ish random orthogonal matrix: QR of a Gaussian sample with the
/// diagonal signs of R absorbed into Q.
pub fn random_orthogonal(dim: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    let normal: Vec<f64> = (0..dim * dim)
        .map(|_| {
            let u: f64 = rng.gen_range(1e-12..1.0);
            let v: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            (-2.0 * u.ln()).sqrt() * v.cos()
        })
        .collect();
    let m = DMatrix::from_vec(dim, dim, normal);
    let qr = m.qr();
    let mut q = qr.q();
    let r = qr.r();
    for i in 0..dim {
        if r[(i, i)] < 0.0 {
            for j in 0..dim {
                q[(j, i)] = -q[(j, i)];
            }
        }
    }
    q
}

/// Random affine action of `F_k` on Euclidean `dim`-space.
pub fn random_euclidean_action(dim: usize, k: usize, rng: &mut impl Rng) -> Result<GroupAction> {
    let gens: Vec<Isometry> = (0..k)
        .map(|_| Isometry::Euclidean {
            rot: random_orthogonal(dim, rng),
            trans: DVector::from_iterator(dim, (0..dim).map(|_| rng.gen_range(-1.0..1.0))),
        })
        .collect();
    GroupAction::new(CatSpace::euclidean(dim), gens)
}

/// Affine action made harmonic at a solvable basepoint: with
/// `M = Σ μ(e,s) ρ₀(s)` and `b̄ = Σ μ(e,s) b(s)`, the point
/// `y* = (I - M)⁻¹ b̄` satisfies `-Δ₁ f(e) = 0`.
pub fn harmonic_euclidean_map(dim: usize, k: usize, rng: &mut impl Rng) -> Result<EquivariantMap> {
    let action = random_euclidean_action(dim, k, rng)?;
    let mut m = DMatrix::<f64>::zeros(dim, dim);
    let mut b_bar = DVector::<f64>::zeros(dim);
    let weight = 1.0 / (2 * k) as f64;
    for g in 0..k {
        if let Isometry::Euclidean { rot, trans } = action.generator(g) {
            m += weight * rot;
            m += weight * rot.transpose();
            b_bar += weight * trans;
            b_bar -= weight * (rot.transpose() * trans);
        }
    }
    let lhs = DMatrix::<f64>::identity(dim, dim) - m;
    let y = lhs
        .lu()
        .solve(&b_bar)
        .unwrap_or_else(|| DVector::zeros(dim));
    EquivariantMap::new(action, CatPoint::Euclidean(y.iter().copied().collect()))
}

/// Random action of `F_k` on a spider tree by leg permutations.
pub fn random_spider_action(
    legs: usize,
    leg_len: usize,
    k: usize,
    rng: &mut impl Rng,
) -> Result<GroupAction> {
    let tree = MetricTree::new(spider(legs, leg_len))?;
    let gens: Vec<Isometry> = (0..k)
        .map(|_| {
            let mut order: Vec<usize> = (0..legs).collect();
            for i in (1..legs).rev() {
                order.swap(i, rng.gen_range(0..=i));
            }
            let mut perm = vec![0usize; 1 + legs * leg_len];
            for (src, &dst) in order.iter().enumerate() {
                for t in 0..leg_len {
                    perm[1 + src * leg_len + t] = 1 + dst * leg_len + t;
                }
            }
            Isometry::TreeAuto { perm }
        })
        .collect();
    GroupAction::new(CatSpace::Tree(tree), gens)
}

/// Random tree basepoint for a spider action.
pub fn random_tree_basepoint(action: &GroupAction, rng: &mut impl Rng) -> CatPoint {
    match action.target() {
        CatSpace::Tree(tree) => {
            let g = tree.graph();
            let e = rng.gen_range(0..g.edge_count());
            CatPoint::Tree(TreePoint::Edge {
                edge: e,
                offset: rng.gen_range(0.0..=g.length(e)),
            })
        }
        other => other.sample_point(rng),
    }
}
