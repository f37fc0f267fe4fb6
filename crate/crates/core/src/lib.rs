pub mod error;
pub mod linalg;
pub mod oracles;
pub mod channels;
pub mod cli;
pub mod diagnostics;
pub mod random;
pub mod programs;
pub mod sdp;

pub use error::{Error, Result};
