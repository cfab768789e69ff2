pub mod analysis;
pub mod codes;
pub mod construction_a;
pub mod frames;
pub mod json;
pub mod linalg;
pub mod qseries;
