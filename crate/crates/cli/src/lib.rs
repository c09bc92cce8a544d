//! Command-line front end: recipes in, JSON reports out.

pub mod commands;
pub mod recipe;

pub use commands::{run, Cli, Command, Outcome};
pub use recipe::{parse_recipe, Recipe, RecipeError};
