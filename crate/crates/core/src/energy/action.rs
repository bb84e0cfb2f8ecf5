//! Isometric actions of free groups on the implemented CAT(0) targets and
//! the equivariant maps they induce.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::cat0::{CatPoint, CatSpace, TreePoint};
use crate::error::{Error, Result};

use super::words::{signed_generators, Word};

/// One isometry of a target space, with enough data to invert it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum Isometry {
    /// `v ↦ Rv + b` with `R` orthogonal.
    Euclidean {
        rot: DMatrix<f64>,
        trans: DVector<f64>,
    },
    /// Graph automorphism of a metric tree (edge lengths respected).
    TreeAuto { perm: Vec<usize> },
}

impl Isometry {
    pub fn identity_like(&self) -> Isometry {
        match self {
            Isometry::Euclidean { rot, .. } => Isometry::Euclidean {
                rot: DMatrix::identity(rot.nrows(), rot.ncols()),
                trans: DVector::zeros(rot.nrows()),
            },
            Isometry::TreeAuto { perm } => Isometry::TreeAuto {
                perm: (0..perm.len()).collect(),
            },
        }
    }

    fn inverse(&self) -> Isometry {
        match self {
            Isometry::Euclidean { rot, trans } => {
                let rt = rot.transpose();
                let t = -(&rt * trans);
                Isometry::Euclidean { rot: rt, trans: t }
            }
            Isometry::TreeAuto { perm } => {
                let mut inv = vec![0; perm.len()];
                for (i, &p) in perm.iter().enumerate() {
                    inv[p] = i;
                }
                Isometry::TreeAuto { perm: inv }
            }
        }
    }
}

/// Assignment of an isometry to each free-group generator.
///
/// Construction validates the generators against the target: orthogonality
/// for Euclidean parts, the automorphism property for tree permutations,
/// plus a seeded spot-check that `d(gx, gy) = d(x, y)` and `g g⁻¹ = id`
/// on sampled points.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "ActionDto", into = "ActionDto")]
pub struct GroupAction {
    target: CatSpace,
    gens: Vec<Isometry>,
    invs: Vec<Isometry>,
}

#[derive(Serialize, Deserialize)]
struct ActionDto {
    target: CatSpace,
    generators: Vec<Isometry>,
}

impl From<GroupAction> for ActionDto {
    fn from(a: GroupAction) -> ActionDto {
        ActionDto {
            target: a.target,
            generators: a.gens,
        }
    }
}

impl TryFrom<ActionDto> for GroupAction {
    type Error = Error;
    fn try_from(dto: ActionDto) -> Result<GroupAction> {
        GroupAction::new(dto.target, dto.generators)
    }
}

impl GroupAction {
    pub fn new(target: CatSpace, gens: Vec<Isometry>) -> Result<GroupAction> {
        if gens.is_empty() {
            return Err(Error::InvalidParameter(
                "action needs at least one generator".into(),
            ));
        }
        for g in &gens {
            validate_isometry(&target, g)?;
        }
        let invs: Vec<Isometry> = gens.iter().map(Isometry::inverse).collect();
        let action = GroupAction { target, gens, invs };
        action.spot_check()?;
        Ok(action)
    }

    /// The ℤ-example: `F_1` acting on ℝ by `t ↦ u t + τ` with `u = ±1`.
    pub fn z_example(u: i8, tau: f64) -> Result<GroupAction> {
        if u != 1 && u != -1 {
            return Err(Error::InvalidParameter("u must be ±1".into()));
        }
        GroupAction::new(
            CatSpace::euclidean(1),
            vec![Isometry::Euclidean {
                rot: DMatrix::from_element(1, 1, u as f64),
                trans: DVector::from_element(1, tau),
            }],
        )
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn target(&self) -> &CatSpace {
        &self.target
    }

    pub fn generator(&self, g: usize) -> &Isometry {
        &self.gens[g]
    }

    /// Apply a signed generator (`+g`/`-g`, 1-indexed).
    pub fn apply_letter(&self, s: i8, p: &CatPoint) -> Result<CatPoint> {
        let idx = (s.unsigned_abs() as usize)
            .checked_sub(1)
            .filter(|&i| i < self.gens.len())
            .ok_or_else(|| Error::InvalidParameter(format!("letter {s} out of range")))?;
        let iso = if s > 0 {
            &self.gens[idx]
        } else {
            &self.invs[idx]
        };
        apply_isometry(&self.target, iso, p)
    }

    /// Apply `ρ(w)` (letters compose left to right: `ρ(uv) = ρ(u)ρ(v)`).
    pub fn apply_word(&self, w: &Word, p: &CatPoint) -> Result<CatPoint> {
        let mut out = p.clone();
        for &s in w.iter().rev() {
            out = self.apply_letter(s, &out)?;
        }
        Ok(out)
    }

    fn spot_check(&self) -> Result<()> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x1507);
        for _ in 0..16 {
            let x = self.target.sample_point(&mut rng);
            let y = self.target.sample_point(&mut rng);
            let d = self.target.distance(&x, &y)?;
            for s in signed_generators(self.rank()) {
                let gx = self.apply_letter(s, &x)?;
                let gy = self.apply_letter(s, &y)?;
                let gd = self.target.distance(&gx, &gy)?;
                if (gd - d).abs() > 1e-10 {
                    return Err(Error::InvalidParameter(format!(
                        "generator {s} distorts a distance by {:.3e}",
                        (gd - d).abs()
                    )));
                }
                let back = self.apply_letter(-s, &gx)?;
                if self.target.distance(&back, &x)? > 1e-10 {
                    return Err(Error::InvalidParameter(format!(
                        "generator {s} composed with its inverse is not the identity"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn validate_isometry(target: &CatSpace, iso: &Isometry) -> Result<()> {
    match (target, iso) {
        (CatSpace::Euclidean { dim }, Isometry::Euclidean { rot, trans }) => {
            if rot.nrows() != *dim || rot.ncols() != *dim || trans.len() != *dim {
                return Err(Error::InvalidParameter(format!(
                    "isometry dimensions do not match the space dimension {dim}"
                )));
            }
            let gram = rot.transpose() * rot;
            let id = DMatrix::<f64>::identity(*dim, *dim);
            if (gram - id).abs().max() > 1e-10 {
                return Err(Error::InvalidParameter(
                    "rotation part is not orthogonal".into(),
                ));
            }
            Ok(())
        }
        (CatSpace::Tree(tree), Isometry::TreeAuto { perm }) => {
            let g = tree.graph();
            let n = g.vertex_count();
            if perm.len() != n {
                return Err(Error::InvalidParameter(
                    "permutation length mismatch".into(),
                ));
            }
            let mut seen = vec![false; n];
            for &p in perm {
                if p >= n || seen[p] {
                    return Err(Error::InvalidParameter("not a permutation".into()));
                }
                seen[p] = true;
            }
            for (eid, &(u, v)) in g.edges().iter().enumerate() {
                let (iu, iv) = (perm[u], perm[v]);
                let image = g
                    .neighbors(iu)
                    .iter()
                    .find(|&&(w, _)| w == iv)
                    .map(|&(_, e)| e)
                    .ok_or_else(|| {
                        Error::InvalidParameter(format!(
                            "permutation does not preserve edge ({u}, {v})"
                        ))
                    })?;
                if (g.length(image) - g.length(eid)).abs() > 1e-12 {
                    return Err(Error::InvalidParameter(format!(
                        "edge ({u}, {v}) maps to an edge of different length"
                    )));
                }
            }
            Ok(())
        }
        _ => Err(Error::Unsupported(
            "isometry variant does not match the target space".into(),
        )),
    }
}

fn apply_isometry(target: &CatSpace, iso: &Isometry, p: &CatPoint) -> Result<CatPoint> {
    target.validate_point(p)?;
    match (target, iso, p) {
        (
            CatSpace::Euclidean { .. },
            Isometry::Euclidean { rot, trans },
            CatPoint::Euclidean(x),
        ) => {
            let v = DVector::from_column_slice(x);
            let out = rot * v + trans;
            Ok(CatPoint::Euclidean(out.iter().copied().collect()))
        }
        (CatSpace::Tree(tree), Isometry::TreeAuto { perm }, CatPoint::Tree(tp)) => {
            let g = tree.graph();
            let image = match *tp {
                TreePoint::Vertex(v) => TreePoint::Vertex(perm[v]),
                TreePoint::Edge { edge, offset } => {
                    let (u, v) = g.edge(edge);
                    let (iu, iv) = (perm[u], perm[v]);
                    let (eid, flip) = g
                        .neighbors(iu)
                        .iter()
                        .find(|&&(w, _)| w == iv)
                        .map(|&(_, e)| {
                            let (a, _) = g.edge(e);
                            (e, a != iu)
                        })
                        .expect("validated automorphism");
                    let len = g.length(eid);
                    TreePoint::Edge {
                        edge: eid,
                        offset: if flip { len - offset } else { offset },
                    }
                }
            };
            Ok(CatPoint::Tree(image))
        }
        _ => Err(Error::Unsupported("isometry/point variant mismatch".into())),
    }
}

/// An equivariant map `f(γ) = ρ(γ)·y₀`, determined by its basepoint.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EquivariantMap {
    pub action: GroupAction,
    pub basepoint: CatPoint,
}

impl EquivariantMap {
    pub fn new(action: GroupAction, basepoint: CatPoint) -> Result<EquivariantMap> {
        action.target().validate_point(&basepoint)?;
        Ok(EquivariantMap { action, basepoint })
    }

    pub fn value(&self, w: &Word) -> Result<CatPoint> {
        self.action.apply_word(w, &self.basepoint)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat0::MetricTree;
    use crate::io::spider;

    #[test]
    fn z_example_orbit() {
        let a = GroupAction::z_example(1, 0.5).unwrap();
        let f = EquivariantMap::new(a, CatPoint::Euclidean(vec![2.0])).unwrap();
        assert_eq!(
            f.value(&vec![1, 1, 1]).unwrap(),
            CatPoint::Euclidean(vec![3.5])
        );
        assert_eq!(f.value(&vec![-1]).unwrap(), CatPoint::Euclidean(vec![1.5]));

        let b = GroupAction::z_example(-1, 1.0).unwrap();
        let g = EquivariantMap::new(b, CatPoint::Euclidean(vec![0.25])).unwrap();
        // odd powers: t ↦ -t + τ
        assert_eq!(g.value(&vec![1]).unwrap(), CatPoint::Euclidean(vec![0.75]));
        assert_eq!(
            g.value(&vec![1, 1]).unwrap(),
            CatPoint::Euclidean(vec![0.25])
        );
    }

    #[test]
    fn non_orthogonal_rejected() {
        let bad = Isometry::Euclidean {
            rot: DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]),
            trans: DVector::zeros(2),
        };
        assert!(GroupAction::new(CatSpace::euclidean(2), vec![bad]).is_err());
    }

    #[test]
    fn spider_rotation_acts() {
        let tree = MetricTree::new(spider(3, 2)).unwrap();
        // legs occupy vertices {1,2}, {3,4}, {5,6}; rotate legs 0→1→2→0
        let perm = vec![0, 3, 4, 5, 6, 1, 2];
        let action = GroupAction::new(
            CatSpace::Tree(tree.clone()),
            vec![Isometry::TreeAuto { perm }],
        )
        .unwrap();
        let p = CatPoint::Tree(TreePoint::Vertex(2));
        let q = action.apply_letter(1, &p).unwrap();
        assert_eq!(q, CatPoint::Tree(TreePoint::Vertex(4)));
        let back = action.apply_letter(-1, &q).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn broken_permutation_rejected() {
        let tree = MetricTree::new(spider(3, 1)).unwrap();
        // swapping the center with a leaf is not an automorphism
        let perm = vec![1, 0, 2, 3];
        assert!(GroupAction::new(CatSpace::Tree(tree), vec![Isometry::TreeAuto { perm }]).is_err());
    }

    #[test]
    fn equivariance_identity() {
        use rand::Rng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let rot = super::super::sampling::random_orthogonal(3, &mut rng);
        let action = GroupAction::new(
            CatSpace::euclidean(3),
            vec![
                Isometry::Euclidean {
                    rot,
                    trans: DVector::from_vec(vec![0.3, -0.2, 0.9]),
                },
                Isometry::Euclidean {
                    rot: DMatrix::identity(3, 3),
                    trans: DVector::from_vec(vec![1.0, 0.0, 0.0]),
                },
            ],
        )
        .unwrap();
        let f = EquivariantMap::new(action, CatPoint::Euclidean(vec![0.1, 0.2, 0.3])).unwrap();
        let space = CatSpace::euclidean(3);
        for _ in 0..50 {
            let len_a = rng.gen_range(0..4);
            let len_b = rng.gen_range(0..4);
            let rand_word = |rng: &mut rand_chacha::ChaCha8Rng, len: usize| -> Word {
                let mut w = Word::new();
                for _ in 0..len {
                    let s = *[1i8, -1, 2, -2].get(rng.gen_range(0..4)).unwrap();
                    super::super::words::push_reduced(&mut w, s);
                }
                w
            };
            let a = rand_word(&mut rng, len_a);
            let b = rand_word(&mut rng, len_b);
            let ab = super::super::words::concat_reduced(&a, &b);
            // f(ab) = ρ(a) f(b)
            let lhs = f.value(&ab).unwrap();
            let rhs = f.action.apply_word(&a, &f.value(&b).unwrap()).unwrap();
            assert!(space.distance(&lhs, &rhs).unwrap() < 1e-10);
        }
    }
}
