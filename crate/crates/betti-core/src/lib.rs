//! Exact generating-function engine for Betti tables of the moduli spaces
//! M-bar_{0,n}, the Fulton-MacPherson compactifications P^1[n], Hilbert
//! schemes of points on surfaces, and GIT quotients (P^1)^n // SL_2, together
//! with the distribution statistics (Gaussian fit, local limit, variance
//! formulas, log-concavity) used to study their asymptotics.
//!
//! Everything upstream of the final float rendering is exact: polynomial and
//! series coefficients are arbitrary-precision rationals, singularity moments
//! live in the field Q(e), and Betti tables are big integers. Floats appear
//! only in reports and in the numeric evaluation of closed-form estimates.

pub mod asymptotics;
pub mod error;
pub mod gallery;
pub mod logconcavity;
pub mod moduli;
pub mod quotient;
pub mod report;
pub mod statistics;
pub mod symbolic;
pub mod upoly;
pub mod verify;
pub mod zseries;

pub use error::{Error, Result};
pub use moduli::{BettiTable, Space};
pub use upoly::{Rat, UPoly};
pub use zseries::{Scaling, ZSeries};
