//! Symmetric determinantal representations: affine symmetric pencils, the
//! substitution schedule for `y^d`, the Schur-complement expansion, the
//! quadratic and power-sum constructions, products, size bounds and
//! verification.

mod expand;
mod pencil;
mod powersum;
mod quadratic;
mod schedule;
mod verify;

pub use expand::{
    expand_sdr, expand_sdr_limited, substitute_affine, ProductSub, Shifts, SquareSub,
    DEFAULT_SIZE_LIMIT,
};
pub use pencil::{AnyPencil, SymPencil};
pub use powersum::{
    power_sum_sdr, power_sum_sdr_limited, product_sdr, product_sdr_any, size_bound, PowerSumForm,
    PowerSumTerm, SizeBound,
};
pub use quadratic::{coefficient_matrix, quadratic_sdr, QuadraticSdr, RANK_TOL};
pub use schedule::{schedule_var, substitution_schedule, SimpleSubstitution, SubstitutionSchedule};
pub use verify::{random_point, verify_sdr, SdrReport, DEFAULT_FLOAT_TOL, SYMBOLIC_SIZE_LIMIT};
