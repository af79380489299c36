//! Successive-coefficient extremal problems for convex univalent functions.
//!
//! The crate is organized bottom-up:
//!
//! * [`series`]: truncated complex power series.
//! * [`caratheodory`]: the Carathéodory class, Toeplitz feasibility, atomic
//!   Herglotz measures and the Libera–Złotkiewicz chart.
//! * [`families`]: convex and starlike functions generated from kernels, and
//!   the closed-form families `L_phi`, `K_phi`.
//! * [`functionals`]: coefficient gaps and the sharp bounds they obey.
//! * [`optimize`]: deterministic maximizers that recover the extremal values.
//! * [`cli`]: the `coeffgap` command-line front end.

// `!(x <= bound)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod caratheodory;
pub mod cli;
pub mod error;
pub mod families;
pub mod functionals;
pub mod optimize;
pub mod series;

pub use error::{Error, Result};
