//! Quasihyperbolic geometry of fractal planar domains.
//!
//! Boundary-distance oracles for the Cantor-dust complement and the
//! generalized Koch snowflake, adaptive quadrature of quasihyperbolic length,
//! a graph solver for upper bounds on quasihyperbolic distance, closed-form
//! reference values, and John-condition checks along explicit curves.

// `!(x > 0.0)` style guards reject NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cantor;
pub mod closed_forms;
pub mod domain;
pub mod error;
pub mod geometry;
pub mod john;
pub mod koch;
pub mod qh_metric;
pub mod quadrature;

pub use cantor::{CantorDomain, JohnCenter};
pub use closed_forms::{PuncturedPlane, TwicePuncturedPlane};
pub use domain::{DomainOracle, Polygon};
pub use error::{QhError, Result};
pub use geometry::{Curve, CurveBuilder, Piece, Point};
pub use john::{curve_john_constant, verify_john_family, JohnReport};
pub use koch::KochDomain;
pub use qh_metric::{qh_distance_upper, qh_length_of_path_nodes, QhEstimate, QhGraph};
pub use quadrature::qh_length;
