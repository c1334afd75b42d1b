//! Hardware-aware hyperdimensional computing.
//!
//! The crate covers two halves of an in-memory HD accelerator:
//!
//! * the algorithmic side: packed binary [`Hypervector`] algebra, item
//!   memories, N-gram and record-based sequence encoders, and an
//!   [`AssociativeMemory`] for nearest-class search, plus the SMS spam
//!   filtering pipeline built on top of them ([`spam`]);
//! * the device side: a behavioral ferroelectric FET model ([`device`]),
//!   single-transistor XOR / 3-input majority gate protocols with a Monte
//!   Carlo variation harness ([`gates`]), and delay/energy/area/endurance
//!   accounting for a full encoder ([`cost`]).

pub mod assoc;
pub mod cost;
pub mod device;
pub mod encoder;
pub mod error;
pub mod gates;
pub mod hv;
pub mod rng;
pub mod spam;

pub use assoc::{AssociativeMemory, QueryResult};
pub use cost::{CostReport, EncoderCostParams, SwitchTimeFit};
pub use device::{FeFetState, FerroParams, Pulse};
pub use encoder::{EncodeMeta, EncoderConfig, IdMemory, ItemMemory, NGramEncoder, Scheme};
pub use error::{Error, Result};
pub use gates::{GateKind, GateResult, MarginReport, VtClass};
pub use hv::Hypervector;
pub use rng::HvRng;
pub use spam::{Dataset, EvalReport, Label, RunConfig};
