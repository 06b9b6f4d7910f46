//! Exact computational models of continua: piecewise-linear functions on
//! metric graphs, open covers and chains, continuous-logic formulas, and
//! circle-map amalgams.

pub mod amalgam;
pub mod atoms;
pub mod certified;
pub mod chain;
pub mod cli;
pub mod error;
pub mod graph;
pub mod io;
pub mod logic;
pub mod pl;
pub mod poly;
pub mod random;
pub mod rational;
pub mod sets;

pub use certified::CertifiedValue;
pub use error::{Error, Result};
pub use graph::{MetricGraph, Point};
pub use pl::PLFunction;
pub use poly::PiecewisePoly;
pub use rational::Q;
pub use sets::{ClosedSet, OpenSet};
