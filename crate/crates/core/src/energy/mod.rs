//! n-step energies of equivariant maps of free groups, the inequality
//! suite relating `E_{μⁿ}` to `E_μ` and the tangent-cone gradient, the
//! affine averaging operator, and discrete fixed-point descent.
//!
//! The group is always a free group `F_k` with its standard walk
//! (`1/2k` on each signed generator); actions of quotients are pulled back
//! through the projection, and words are kept reduced throughout.

mod action;
mod descent;
mod reports;
mod sampling;
mod words;

pub use action::{EquivariantMap, GroupAction, Isometry};
pub use descent::{fixed_point_descent, DescentOptions, DescentOutcome, DescentReport};
pub use reports::{
    affine_operator_report, averaging_operator, cayley_tree_energy, converse_tree_check,
    equivariant_energy, equivariant_energy_with, fixed_point_set, inequality_report, minus_delta,
    minus_delta_with, rayleigh_quotient, tangent_cone_at_basepoint, vertex_energy,
    vertex_energy_only, AffineOperatorReport, ConverseTreeReport, InequalityReport, NStepRow,
};
pub use sampling::{
    harmonic_euclidean_map, random_euclidean_action, random_orthogonal, random_spider_action,
    random_tree_basepoint,
};
pub use words::{
    concat_reduced, free_walk_distribution, inverse, push_reduced, signed_generators,
    word_from_string, word_to_string, FreeWalkDistribution, Word,
};
