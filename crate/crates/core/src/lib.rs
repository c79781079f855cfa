//! Hypoexponential and exponentially modified Erlang (EME) distributions,
//! exact and floating-point checks of the Laplace-transform identities that
//! characterize the exponential law, a goodness-of-fit test for
//! exponentiality built on those identities, and sequential-stage
//! absorption-time simulation.
//!
//! ```
//! use hypoexp::fit::{fit_eme_mle, StageCount};
//! use hypoexp::{rng, sample, EmeParams, Law};
//!
//! # fn main() -> hypoexp::Result<()> {
//! let d = EmeParams::new(2, 1.0, 4.0)?;
//! assert!(d.pdf(1.5)? > 0.0);
//! let batch = sample(&d, 10_000, &mut rng::stream(1, "demo", 0))?;
//! let fit = fit_eme_mle(&batch, StageCount::Fixed(2))?;
//! assert!((fit.lambda - 1.0).abs() < 0.2);
//! # Ok(())
//! # }
//! ```

pub mod ddouble;
pub mod dist;
pub mod error;
pub mod fit;
pub mod gof;
pub mod identity;
pub mod rng;
pub mod sample;
pub mod sim;
pub mod special;

pub use dist::{
    Dist, EmeParams, ErlangParams, ExpParams, Family, Law, Moments, ParamRecord, RateVector,
};
pub use error::{Error, Result};
pub use sample::{sample, SampleBatch};
