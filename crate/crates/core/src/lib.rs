pub mod atom;
pub mod cli;
pub mod coend;
pub mod corpus;
pub mod error;
pub mod fincat;
pub mod format;
pub mod kan;
pub mod laws;
pub mod oracle;
pub mod poly;
pub mod prof;
pub mod simple_optics;
pub mod witness;
