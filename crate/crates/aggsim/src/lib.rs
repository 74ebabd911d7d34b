//! Deterministic link-level simulator and analysis library for 802.11
//! two-layer frame aggregation (A-MSDU inside A-MPDU).
//!
//! The library models a single transmitter/receiver pair and answers three
//! questions about MAC-layer aggregation:
//!
//! * how much airtime overhead is saved by packing more payload under one
//!   PHY preamble ([`airtime`]),
//! * how the packet error rate grows with aggregate size for a fixed bit
//!   error rate ([`channel`]), and
//! * how selective retransmission at the MPDU level contains that cost
//!   ([`blockack`], [`simulator`]).
//!
//! Frames carry sizes and metadata only; no payload bytes are materialized.
//! Every run is reproducible: the same scenario and seed produce identical
//! metrics and an identical event trace.
//!
//! Start with the runnable programs under `examples/`, or drive parameter
//! sweeps through the `aggsim` binary (see [`config`] and [`sweep`]).

pub mod aggregation;
pub mod airtime;
pub mod blockack;
pub mod channel;
pub mod config;
pub mod frames;
pub mod metrics;
pub mod negotiation;
pub mod rng;
pub mod simulator;
pub mod sweep;
pub mod traffic;

pub use aggregation::{AggregationMode, AggregationPolicy, LoneMsduFraming};
pub use airtime::{channel_efficiency, exchange_airtime, ppdu_duration, BackoffModel, PhyTimings};
pub use channel::{per_from_ber, ChannelModel};
pub use frames::{Ampdu, AmsduSubframe, Mpdu, Msdu};
pub use metrics::TxMetrics;
pub use negotiation::{negotiate, AmsduCapability, SessionParams, StationCapabilities};
pub use simulator::{Scenario, SimBackoff};
pub use traffic::{generate_arrivals, TrafficModel, TrafficSpec};

/// Errors reported by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument violated a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A configuration value is out of range, unknown, or inconsistent.
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    /// The two stations share no usable parameter set.
    #[error("negotiation failed: {0}")]
    Negotiation(String),
    /// Sender and receiver protocol state diverged; indicates a simulator bug.
    #[error("protocol state error: {0}")]
    ProtocolState(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
