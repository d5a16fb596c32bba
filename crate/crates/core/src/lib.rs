//! Computation in free groups with the conjugation-invariant generating set
//! of separable elements.

pub mod error;
pub mod experiments;
pub mod geometry;
pub mod quasimorphism;
pub mod splitting;
pub mod stallings;
pub mod whitehead;
pub mod word;

pub use error::{Error, Result};
pub use word::{CyclicWord, Letter, Word};
