//! Support code for the `anglekit` command-line tool: the config and report
//! JSON formats and the SVG renderer.

pub mod config;
pub mod render;
pub mod report;
