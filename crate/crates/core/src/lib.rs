//! Exact tensor algebra for almost contact B-metric structures and their
//! natural connections.

pub mod connection;
pub mod error;
pub mod fixtures;
pub mod fundamental;
pub mod io;
pub mod lie;
pub mod linalg;
pub mod linmap;
pub mod scalar;
pub mod structure;
pub mod suite;
pub mod taxonomy;
pub mod tensor;

pub use error::{Error, Result};
pub use linmap::LinMap;
pub use scalar::Scalar;
pub use tensor::Tensor;
