//! Link-level simulation and link-budget planning for D-band (150 GHz)
//! wireless links.
//!
//! The crate covers single-carrier constellations and pulse shaping
//! ([`modem`]), index modulation over antenna sets and filter shapes
//! ([`indexmod`]), phase-noise/AWGN/line-of-sight MIMO channels
//! ([`channel`]), coherent and energy-detection receivers ([`detect`]),
//! BCH(63, k) coding ([`fec`]), link budgets and coverage maps
//! ([`linkplan`]), and a seeded Monte-Carlo engine ([`sim`]) driven by the
//! `subthz` command-line tool ([`cli`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bits;
pub mod channel;
pub mod cli;
pub mod detect;
pub mod error;
pub mod fec;
pub mod indexmod;
pub mod linkplan;
pub mod modem;
pub mod sim;

pub use error::{Error, Result};
pub use num_complex::Complex64;
