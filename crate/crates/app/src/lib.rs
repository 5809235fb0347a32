//! Command line driver and HTTP service for Elimination: level generation,
//! terminal play, bot simulation, analysis and a small JSON API for web
//! clients.

pub mod commands;
pub mod config;
pub mod play;
pub mod server;
pub mod store;

pub use config::AppConfig;
