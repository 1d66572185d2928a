//! Branched multivalued functions, cut regions, preferred branches, and the
//! reference loops with certification and winding.

pub mod gfun;
pub mod path;
pub mod region;

pub use gfun::{
    omega_spec, swap_spec, substitute_shift_spec, BranchError, BranchedMonomial, ExponentClass,
    GFunction, GTerm, OmegaSlot, RatLaurent, RecomposeSpec, RoleExpr, RoleMap,
};
pub use path::{
    anchor_base_point, build_gamma, build_sigma, certify_path, sub_path, trace_winding,
    Certification, Constraint, Continuation, PathError, PathParams, PathSpec,
};
pub use region::{
    half_turns_between, log_principal, region_contains, region_logs, singular_distance, Point,
    Region,
};
