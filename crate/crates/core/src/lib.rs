//! Deployment-cost engine for heterogeneous centralized (cloud) and
//! distributed radio access networks.
//!
//! The network is four stacked point processes (users, base stations,
//! backhaul nodes, data centers) linked by nearest-point attachment. Cost is
//! evaluated either in closed form from Palm-calculus moments or by Monte
//! Carlo simulation on a finite torus.

pub mod config;
pub mod cost;
pub mod decoder;
pub mod dimensioning;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod palm;
pub mod quadrature;
pub mod seed;
pub mod sim;
pub mod special;
pub mod sweep;

pub use error::{Error, Result};
pub use exec::Execution;
