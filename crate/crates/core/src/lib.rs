//! Min-plus convolution of near-convex sequences and a randomized
//! pseudopolynomial 0-1 knapsack solver built on it.

pub mod bench;
pub mod convex;
pub mod error;
pub mod format;
pub mod generate;
pub mod hull;
pub mod knapsack;
pub mod nearconvex;
pub mod ntt;
pub mod oracles;
pub mod rational;
pub mod seq;
pub mod sumset;
pub mod verify;

pub use error::{Error, Result};
