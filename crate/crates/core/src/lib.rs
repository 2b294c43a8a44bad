pub mod geom;
pub mod cli;
pub mod engine;
pub mod episode;
pub mod gateway;
pub mod harness;
pub mod metrics;
pub mod pddl;
pub mod rng;
pub mod scenario;
pub mod world;
