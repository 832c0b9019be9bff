//! Exact Ehrhart theory for symmetric edge polytopes of graphs and regular
//! matroids.

pub mod cache;
pub mod cli;
pub mod ehrhart;
pub mod gamma_family;
pub mod error;
pub mod io;
pub mod matroid;
pub mod poly;
pub mod series;
pub mod triangulation;

pub use error::{Error, Result};
