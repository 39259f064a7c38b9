//! Induced vacuum charge of a (1+1)-dimensional Dirac field in a square well.
//!
//! Two definitions of the charge density are compared: the plain mode sum
//! over eigenstates and the point-split density, whose regular part is a
//! principal-value integral along the imaginary energy axis and whose extra
//! piece is `eta/pi` inside the well. The sign of the resulting well charge
//! fixes the sign of the Casimir energy through an adiabatic ramp of the
//! well depth.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod capri;
pub mod casimir;
pub mod error;
pub mod mode_sum;
pub mod model;
pub mod quadrature;
pub mod report;
pub mod spectrum;

pub use error::{Error, Result};
pub use model::{validate_well, ChargeMethod, ChargeProfile, ChargeReport, SettingsDigest, WellParameters};
