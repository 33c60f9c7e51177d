pub mod certify;
pub mod classes;
pub mod complex;
pub mod constructions;
pub mod error;
pub mod hom;
pub mod json;
pub mod matrix;
pub mod module;
pub mod morphism;
pub mod ring;
pub mod sample;
pub mod system;

pub use error::{Error, Result};
pub use matrix::MatrixZn;
pub use module::FPModule;
pub use morphism::{ModuleMorphism, ShortExactSequence};
pub use ring::RingSpec;
