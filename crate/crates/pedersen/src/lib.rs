pub mod cli;
pub mod params;
pub mod report;
pub mod stats;
pub mod transport;
