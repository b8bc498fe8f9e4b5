//! Quadratic fermion chains as quasi-free states: Pfaffian Wick calculus,
//! string order, the Z2 split index and an exact-diagonalization oracle.
//!
//! Majorana convention throughout: `a_{2j} = c_j + c^dag_j`,
//! `a_{2j+1} = i (c_j - c^dag_j)`, so `2 c^dag_j c_j - 1 = -i a_{2j} a_{2j+1}`.

pub mod ed;
pub mod error;
pub mod jw;
pub mod linalg;
pub mod observables;
pub mod parallel;
pub mod quasifree;
pub mod random;

pub use error::{Error, Result};
pub use parallel::Execution;
