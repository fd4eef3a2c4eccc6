//! Exact metric geometry of non-Archimedean norms and the toric pluripotential
//! dictionary on projective space.

pub mod error;
pub mod field;
pub mod geodesics;
pub mod graded;
pub mod instances;
pub mod linalg;
pub mod norms;
pub mod oracle;
pub mod plconvex;
pub mod rational;
pub mod report;
pub mod segments;
pub mod suite;
pub mod toric;

pub use error::{Error, Result};
pub use field::{Backend, Field, RatFunc, Scalar, Valuation};
pub use rational::Q;
