//! Text formats and image rendering.

pub mod fixture;
pub mod matrix_file;
pub mod render;
