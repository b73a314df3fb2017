//! The constructive shift-cover machinery: the pigeonhole shift finder, the
//! dense-pair thickness witness, per-index stages `E_n`, the greedy shift
//! set with its `1/γ` bound, and the end-to-end witness pipeline.

mod cover;
mod pipeline;
mod prop2;
mod shift;
mod stage;

pub use cover::{greedy_cover, greedy_cover_sets, CoverStep, CoverTrace, GreedyState};
pub use pipeline::{default_n_list, jin_pipeline, verify_witness, JinWitness, PipelineRun, MAX_AUTO_STAGES};
pub use prop2::{prop2_witness, prop2_witness_over, DenseWitness};
pub use shift::{find_shift, ShiftResult};
pub use stage::{build_stage, PipelineStage};
