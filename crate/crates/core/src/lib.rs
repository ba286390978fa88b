pub mod analyzer;
pub mod disambig;
pub mod error;
pub mod eval;
pub mod lexicon;
pub mod pipeline;
pub mod pos;
pub mod teixml;
pub mod translit;

pub use error::{Error, Result};
