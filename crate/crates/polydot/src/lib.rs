//! Coded distributed matrix multiplication over prime fields.
//!
//! A master splits two input matrices into blocks, encodes them as matrix
//! polynomials, and hands each of `P` workers one evaluation. Any
//! `recovery_threshold` worker products suffice to interpolate the product
//! polynomial and read the output blocks out of dedicated coefficients, so
//! slow workers never block the computation. Random key blocks extend the
//! same layout to perfect secrecy against colluding workers (SGPD), and a
//! query-vector construction additionally hides which entry of a public
//! library is being multiplied (PSGPD).
//!
//! The crate also ships the executable counterparts of the design's
//! guarantees: exhaustive secrecy/privacy audits on tiny fields, a
//! straggler-simulation harness with shifted-exponential delays, and
//! threshold/communication-load trade-off sweeps.

pub mod audit;
pub mod error;
pub mod field;
pub mod gpd;
pub mod latency;
pub mod maps;
pub mod matrix;
pub mod partition;
pub mod polynomial;
pub mod psgpd;

pub use error::{Error, Result};
pub use field::{sample_distinct_points, EvalPointSet, PrimeField, DEFAULT_MODULUS};
pub use gpd::{
    communication_load, decode_product, encode_shares, recovery_threshold, worker_multiply,
    SecureCodePlan, Share, ThresholdReport, TradeoffPoint, WorkerResult,
};
pub use latency::{
    analytic_completion_time, latency_curve, run_pipeline_timed, simulate_completion,
    tradeoff_sweep, LatencyModel, SweepResult,
};
pub use maps::Family;
pub use matrix::FieldMatrix;
pub use partition::{split_blocks, AugmentationPlan, KeyMaterial, PartitionSpec};
pub use psgpd::{psgpd_threshold, PsgpdCode, PublicLibrary};
