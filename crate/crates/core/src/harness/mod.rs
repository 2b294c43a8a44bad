//! Baseline agents and the episode runners that drive them, in-process or
//! through a gateway.

mod agents;
mod planner;
mod rulebot;
mod runner;

pub use agents::{random_agent, Agent, AgentKind, Policy, PolicyAgent};
pub use planner::{default_goal, planner_agent, PlannerMemory, FRONTIER_CANDIDATES};
pub use rulebot::{cuts_heads, rulebot_agent, RulebotMemory, QUAFF_BELOW};
pub use runner::{
    hello_for, log_file_name, run_batch, run_episode, run_local, run_over, BatchRun, EpisodeRun, HarnessError,
    RunOptions,
};
