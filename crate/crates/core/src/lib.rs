//! Verification toolkit for the five-qutrit stabilizer code: exact `Q(ω)`
//! arithmetic, ternary Pauli strings, the single-qutrit error bases, the code
//! itself, syndrome decoding and failure-rate analytics.
//!
//! The guide in `book/` walks through each module; its code blocks run as
//! doc-tests of this crate.

pub mod analytics;
pub mod code;
pub mod cyclo;
pub mod decode;
pub mod error;
pub mod errormodel;
pub mod gf3;
pub mod pauli;
mod rng;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/cyclotomic.md")]
    mod cyclotomic {}
    #[doc = include_str!("../../../book/src/pauli.md")]
    mod pauli {}
    #[doc = include_str!("../../../book/src/error-model.md")]
    mod error_model {}
    #[doc = include_str!("../../../book/src/code.md")]
    mod code {}
    #[doc = include_str!("../../../book/src/decoding.md")]
    mod decoding {}
    #[doc = include_str!("../../../book/src/analytics.md")]
    mod analytics {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/file-formats.md")]
    mod file_formats {}
}
