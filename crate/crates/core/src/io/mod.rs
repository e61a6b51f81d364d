//! Instance files, generators and guarantee tables.

mod generate;
mod grid;
mod instance;

pub use generate::{generate, random_matrix, Generator};
pub use grid::{alpha_grid, AlphaGrid, GridCell, GridMode};
pub use instance::{parse_instance, parse_instance_file, to_csv, to_json, Format, Instance};
