//! Rank enumeration toolkit for n-times persymmetric `2n × k` matrices over GF(2).
//!
//! Each matrix is a vertical stack of `n` two-row blocks, where the second row
//! of every block is the first row shifted left by one column:
//!
//! ```text
//! a1 a2 ... ak
//! a2 a3 ... a(k+1)
//! ```
//!
//! The crate counts such matrices by rank exhaustively ([`census`]), evaluates
//! closed-form rank counts ([`closedform`]), checks the moment identities that
//! tie rank counts to solution counts of a bilinear polynomial system
//! ([`identities`], [`polysys`]), verifies the exponential-sum/rank identity
//! ([`expsum`]) and re-derives the interpolated formulas with exact rational
//! linear algebra ([`fitting`]).

pub mod census;
pub mod closedform;
pub mod error;
pub mod expsum;
pub mod fitting;
pub mod gf2;
pub mod identities;
pub mod persym;
pub mod poly;
pub mod polysys;

pub use census::{census, census_naive, RankDistribution};
pub use error::{Error, Result};
pub use gf2::{EchelonBasis, GF2Matrix};
pub use persym::{build_matrix, CoeffTuple, PersymInstance};
