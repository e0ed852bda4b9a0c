pub mod detect;
pub mod eigen;
pub mod error;
pub mod gw;
pub mod harness;
pub mod hypergraph;
pub mod ihara;
pub mod model;
pub mod nb;
pub mod rng;
pub mod signal;
pub mod sparse;

pub use error::{Error, Result};
pub use hypergraph::{Ball, Hypergraph};
