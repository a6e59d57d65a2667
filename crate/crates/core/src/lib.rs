//! Cyclic automorphisms and automorphism groups of smooth plane curves over finite fields.

pub mod autgrp;
pub mod cli;
pub mod curve_spec;
pub mod error;
pub mod family;
pub mod ff;
pub mod linalg;
pub mod poly;
pub mod quotient;
pub mod render;
pub mod strata;
pub mod types;
pub mod upoly;
pub mod verify;

pub use error::{Error, Result};
