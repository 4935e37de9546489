//! File formats, dataset evaluation and the `pcqa` command line on top of
//! [`pcqa_core`].

pub mod cache;
pub mod cli;
pub mod dataset;
pub mod dump;
pub mod error;
pub mod load;
pub mod manifest;
pub mod ply;
pub mod report;
pub mod scores;

pub use error::{Error, Result};
