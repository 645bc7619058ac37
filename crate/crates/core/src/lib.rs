//! Anti-Wick calculus on truncated Wiener-Ito chaos expansions.
//!
//! Random variables are represented by finite Hermite expansions
//! [`ChaosVector`] over `m` independent standard Gaussians `xi_i = I_1(e_i)`,
//! where `e_i` are orthonormal indicators of a uniform grid on `[0, T]`
//! ([`basis`]). On top of that representation the crate provides:
//!
//! * the pointwise, Wick and second-quantization algebra ([`chaos`]),
//! * Hida-Malliavin derivatives as annihilation operators and the iterated
//!   derivative pairings `int D^n X . D^n Y dt` ([`malliavin`]),
//! * the phi-product family, the anti-Wick product by two independent
//!   routes and the Wick/anti-Wick conversion series ([`products`]),
//! * the functional calculus `f°(X)` and the heat-equation representation
//!   checks ([`heat`]),
//! * reproducible verification suites driving all of the above ([`suite`]).

pub mod basis;
pub mod chaos;
mod error;
pub mod heat;
pub mod malliavin;
pub mod products;
pub mod report;
pub mod sampling;
pub mod suite;

pub use basis::{L2Function, TimeGrid};
pub use chaos::{ChaosVector, MultiIndex};
pub use error::{Error, Result};
pub use heat::{McConfig, Poly1D};
pub use malliavin::DerivativeField;
pub use products::PhiSeries;
