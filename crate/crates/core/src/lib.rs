//! Lower p-central series of finitely presented pro-p groups, computed in
//! truncated Magnus algebras, together with the graded Lie side and Milnor
//! K-theory mod p of small finite fields.

pub mod arith;
pub mod error;
pub mod filtration;
pub mod graded;
pub mod linalg;
pub mod milnor;
pub mod presentation;
pub mod report;
pub mod series;
pub mod verifier;
pub mod word;

pub use error::{Error, Result};
pub use graded::{lie_layer, u_dim, GradedElement};
pub use linalg::{echelonize, reduce_against, EchelonBasis, FpMatrix};
pub use presentation::{minimality_check, parse, Presentation};
pub use series::{GroupElement, TruncatedSeries, TruncationContext, Weight};
pub use verifier::{equality_report, layered_closure, r_series, EqualityReport, LayerBasis};
pub use word::{parse_word, GroupWord};
