//! Exact arithmetic: cyclotomic scalars and dense linear algebra over them.

pub mod cyclo;
pub mod jordan;
pub mod matrix;

pub use cyclo::{divisors, euler_phi, CycloNum, DEFAULT_ORDER_CAP};
pub use jordan::{jordan_data, roots_of_unity_eigenvalues, JordanAnalysis, JordanData, SpectrumReport};
pub use matrix::Matrix;
