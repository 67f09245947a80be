//! Command-line tool and HTTP service for the `euler-calculus` toolkit.

pub mod cli;
pub mod service;
mod svg;
