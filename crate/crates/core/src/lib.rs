pub mod analysis;
pub mod cli;
pub mod error;
pub mod exact;
pub mod format;
pub mod greedy;
pub mod instance;
pub mod instances;
pub mod matroid;
pub mod report;
pub mod set;
pub mod tolerance;
pub mod validate;
pub mod valuation;
