//! The slice-and-compress receiver: register parameters, step unitaries,
//! density-matrix simulation and multimode composition.

pub mod multimode;
pub mod params;
mod receiver;
mod step;

pub use multimode::{
    compose_multimode, four_mode_codebook, multimode_homodyne_error, per_mode_baseline_error,
    product_decision_error, pure_overlap_moduli, run_multimode, MultimodeReport,
};
pub use params::{
    bpsk_b_closed, bpsk_b_recursion, bpsk_b_step, bpsk_register_state, bpsk_trajectory,
    threeask_cd_closed, threeask_cd_recursion, threeask_cd_step, threeask_register_state,
    threeask_trajectory, AncillaParams3Ask, AncillaParamsBpsk,
};
pub use receiver::{
    classify_ensemble, min_slices, run_3ask, run_bpsk, run_receiver, run_with_priors, Alphabet, ReceiverRun,
    StepParams, MAX_SLICE_AMPLITUDE,
};
pub use step::{
    build_3ask_step, build_bpsk_step, build_state_mapper, CompressionStep, GRAM_MATCH_TOL,
    STEP_CONTRACT_TOL,
};
