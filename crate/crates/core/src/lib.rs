//! Capacity of a scalar AWGN channel observed through a bank of
//! low-resolution ADCs, each preceded by a low-degree polynomial analog
//! operator.
//!
//! * [`polynomial`]: real polynomials, real roots, construction from roots.
//! * [`quantizer`]: the analog front-end + ADC bank, its transition points,
//!   partition of the real line and associated code.
//! * [`code`]: Gray codes, codes with prescribed transition counts, quantizer
//!   synthesis from codes, property checks and exhaustive code search.
//! * [`capacity`]: channel matrices, power-constrained Blahut-Arimoto,
//!   symmetric threshold search, closed-form high-SNR values and rate curves.
//! * [`commands`]: the experiment front-end used by the `quantcap` binary.

pub mod capacity;
pub mod code;
pub mod commands;
pub mod error;
pub mod polynomial;
pub mod quantizer;

pub use error::{Error, Result};
