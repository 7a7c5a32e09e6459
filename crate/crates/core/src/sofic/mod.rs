//! Finite F-sets approximating a quotient of the free group, their defect,
//! diagonal products and regular actions of finite matrix groups.

mod fset;
mod presets;

pub use fset::{
    defect_profile, product_action, regular_action_of_matrices, DefectEntry, DefectProfile, FiniteFSet,
    MembershipOracle, DEFAULT_SIZE_CAP,
};
pub use presets::{
    is_free_action, preset_approximation, regular_action_of_permutations, zd_torus, Approximation, Preset,
};
