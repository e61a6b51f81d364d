//! Ground truth for checking mechanisms: exact optima, impartiality
//! certification and worst-case instances.

mod impartiality;
mod optimum;
mod tightness;

pub use impartiality::{
    check_impartial, AssignMechanism, ConstantMechanism, Deviations, GenAssignMechanism,
    GenSelectMechanism, ImpartialityReport, ImpartialitySpace, Mechanism, SelectMechanism,
    TopKMechanism, Violation, MAX_RECORDED_VIOLATIONS,
};
pub use optimum::{opt_assignment, opt_k, DEFAULT_NODE_BUDGET};
pub use tightness::{run_tightness, tightness_instance, RatioReport, TightnessReport};
