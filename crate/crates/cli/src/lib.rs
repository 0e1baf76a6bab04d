//! Library side of the `featmass` binary: file formats, report records, and
//! the error/exit-code mapping. Kept as a lib target so integration tests can
//! drive the same parsing and serialization the binary uses.

pub mod error;
pub mod formats;
pub mod report;
