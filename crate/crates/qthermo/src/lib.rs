//! Quantum-limited optical thermometry of transparent solids.
//!
//! The crate models a single-mode Gaussian probe sent through a weakly
//! absorbing crystal, computes exact quantum Fisher information for the
//! temperature-dependent phase, and compares the resulting precision bounds
//! against blackbody pyrometry and probe-induced heating.
//!
//! Each major capability has a runnable example:
//!
//! * `pyrometer_limit` - resolution of an ideal blackbody pyrometer.
//! * `channel_closed_form` - thermal-loss channel vs direct integration.
//! * `qfi_anchors` - phase and temperature information of Gaussian probes.
//! * `ppktp_optimum` - optimal probe energy for a KTP crystal.
//! * `precision_sweep` - precision bounds across fourteen decades of energy.
//! * `fock_oracle` - truncated number-basis cross-check of the Gaussian QFI.
//!
//! Run one with `cargo run --example <name>`. The same functionality is
//! scriptable through the `qthermo` binary; see `qthermo --help`.

pub mod channel;
pub mod cli;
pub mod constants;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod material;
pub mod metrology;
pub mod optimize;
pub mod pyrometer;

pub use channel::{ChannelParams, PhysicalChannelParams};
pub use constants::PhysicalConstants;
pub use error::{Error, Result};
pub use gaussian::{GaussianState, InputStateParams};
pub use material::Material;
pub use metrology::{AsymptoticKind, BoundKind, PrecisionBound, SldForm};
pub use optimize::{OptimizationResult, ProbeContext};
pub use pyrometer::PyrometerConfig;
