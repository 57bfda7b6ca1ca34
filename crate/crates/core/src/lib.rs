pub mod capacity;
pub mod choquet;
pub mod cli;
pub mod core_polytope;
pub mod distortion;
pub mod error;
pub mod models;
pub mod sampling;
pub mod space;
pub mod verify;
