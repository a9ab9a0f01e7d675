pub mod combin;
pub mod concat;
pub mod designs;
pub mod error;
pub mod gossip;
pub mod repro;
pub mod traceability;
pub mod tracing;
pub mod watermark;

pub use error::{Error, Result};
