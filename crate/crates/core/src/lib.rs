pub mod exterior;
pub mod poly;
pub mod polyform;
pub mod pointwise;
pub mod numeric;
pub mod flatness;
pub mod symmetry;
pub mod cosymplectic;
pub mod format;
pub mod sample;
