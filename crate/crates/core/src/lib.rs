//! Exact average hitting times of simple random walks on f-equitable graphs.
//!
//! A graph is f-equitable for a pair labeling `f` when every vertex, taken as
//! a centre, splits the graph into label classes that form an equitable
//! partition with one shared quotient matrix `Q`. Hitting times then depend
//! only on the label of the pair and come from a solve on `Q / k` of size
//! `|labels| − 1` instead of `|V| − 1`.
//!
//! The numeric code is generic over [`Scalar`]; [`Rational`] gives exact
//! answers and is what the aliases below use.

pub mod drg;
pub mod error;
pub mod graph;
pub mod hitting;
pub mod labelings;
pub mod linalg;
pub mod paley;
pub mod partition;
pub mod scalar;
pub mod srg_product;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{Distance, DistanceTable, Graph};
pub use labelings::{FEquitableCertificate, Label, PairLabeling, Violation};
pub use partition::{Partition, QuotientMatrix, TransitionMatrix};
pub use scalar::Scalar;

/// Exact arbitrary-precision fraction.
pub type Rational = num_rational::BigRational;
pub type RationalMatrix = linalg::Matrix<Rational>;
pub type ExactHitting = hitting::HittingVector<Rational>;
pub type FloatHitting = hitting::HittingVector<f64>;
pub type ExactTransition = partition::TransitionMatrix<Rational>;
