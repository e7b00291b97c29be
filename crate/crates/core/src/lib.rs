//! Exact series, differential rings and R-matrices for local P4 and the
//! orbifold `[C^5/Z_5]`, with the machinery to verify the crepant resolution
//! identities between them.

pub mod arith;
pub mod diffring;
pub mod error;
pub mod frobenius;
pub mod hypergeom;
pub mod rmatrix;
pub mod rmatrix_kp4;
pub mod rmatrix_orb;
pub mod series;
pub mod verify;

pub use arith::{Cyclotomic, Cyclotomic5, Field, Rational, Ring};
pub use error::{Error, Result};
pub use hypergeom::{compute_hg_data, CohomSeries, Geometry, HGData};
pub use series::{Series, TruncSeries, Var};
pub use verify::report::{Residual, Status, VerificationReport};
