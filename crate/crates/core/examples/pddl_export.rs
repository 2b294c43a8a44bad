//! Exports the planning domain and a problem for a built-in scenario, solves
//! it with the bundled breadth-first planner and grounds the plan back into
//! game actions.
//!
//! cargo run --example pddl_export -- [scenario] [out-dir]

use crawlbench::engine::{observe, step};
use crawlbench::harness::default_goal;
use crawlbench::pddl::{export_domain, ground_steps, solve, ProblemExporter};
use crawlbench::scenario::{builtin, instantiate_scenario};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "small_room".into());
    let spec = builtin(&name).ok_or_else(|| anyhow::anyhow!("unknown scenario `{name}`"))?;
    let mut game = instantiate_scenario(&spec, spec.header.default_seed)?;
    let obs = observe(&game);

    // The orb when it is in view, otherwise the nearest frontier or item.
    let goal = default_goal(&obs).ok_or_else(|| anyhow::anyhow!("nothing to plan for"))?;
    println!("; goal {goal:?}");
    let problem = ProblemExporter::new().problem(&obs, goal)?;
    let text = problem.to_pddl();
    if let Some(dir) = args.next() {
        std::fs::create_dir_all(&dir)?;
        std::fs::write(format!("{dir}/domain.pddl"), export_domain())?;
        std::fs::write(format!("{dir}/{name}.pddl"), &text)?;
        println!("wrote {dir}/domain.pddl and {dir}/{name}.pddl");
    } else {
        println!("{text}");
    }

    let Some(plan) = solve(&problem) else {
        println!("no plan: the goal is not reachable over known tiles");
        return Ok(());
    };
    println!("plan of {} steps:", plan.len());
    for s in &plan {
        println!("  {s}");
    }
    // Reaching the orb may already win, before the final pickup.
    for action in ground_steps(&plan, &obs)? {
        if !game.is_running() {
            break;
        }
        step(&mut game, &action)?;
    }
    println!("after execution: {:?}, orb held {}", game.status, game.player.has_orb);
    Ok(())
}
