pub mod fixtures;
pub mod format;
pub mod generate;
pub mod gpta;
pub mod linear;
pub mod parikh_string;
pub mod ptar;
pub mod semilinear;
pub mod strategy;
pub mod terms;
pub mod twocm;

pub use strategy::Strategy;
