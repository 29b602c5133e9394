//! HTTP service and command line for the route-setting engine.
//!
//! Both transports go through [`engine::Engine`], so a request and the
//! matching command give the same answer for the same inputs and seed.

pub mod cli;
pub mod config;
pub mod corpus;
pub mod engine;
pub mod error;
pub mod http;
pub mod jobs;
