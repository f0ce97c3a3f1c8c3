//! Exact computation in the finitary power monoid of the integers: sumsets,
//! boxing dimension, factorization in the reduced monoid, its canonical
//! automorphisms, and finite checks of the arguments that pin those
//! automorphisms down.

pub mod autos;
pub mod boxing;
pub mod cli;
pub mod error;
pub mod monoid;
pub mod proofsteps;
pub mod report;
pub mod sample;
pub mod search;
pub mod setcore;

pub use autos::{AffineMinMaxParams, AutomorphismSpec, TableMap};
pub use boxing::{bdim, runs, RunProfile};
pub use error::{Error, Result};
pub use monoid::{Factorization, ZeroSet};
pub use setcore::{interval, kfold, sumset, FinSet};
