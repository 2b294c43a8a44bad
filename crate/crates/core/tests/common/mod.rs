//! Independent oracles and generators shared by the integration tests.

#![allow(dead_code)]

pub mod fov_oracle;
pub mod gen;
pub mod pddl_oracle;
pub mod walk;
