pub mod double;
pub mod resolution;
pub mod steinberg;
