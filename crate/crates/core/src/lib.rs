//! Polygamma-based function family `F_{p,m,n,q}(x; s; c)`, its Laplace
//! kernels, and grid verification of complete monotonicity.
//!
//! ```
//! use cmkit::{family, FamilyIndex, FamilyParams, Polygamma};
//!
//! let engine = Polygamma::default();
//! let index = FamilyIndex::new(3, 2, 2, 1).unwrap();
//! let alpha = family::to_f64(family::alpha(index).unwrap());
//! let params = FamilyParams::new(index, alpha, 0.5).unwrap();
//! assert!(family::f_eval(&engine, &params, 1.0).unwrap() > 0.0);
//! ```

pub mod error;
pub mod family;
pub mod kernels;
pub mod polygamma;
pub mod quadrature;
pub mod verifier;

pub use error::{Error, Result};
pub use family::{FamilyIndex, FamilyParams, FamilyValue, ThresholdKind};
pub use polygamma::{EngineConfig, Polygamma};
pub use quadrature::QuadratureSpec;
