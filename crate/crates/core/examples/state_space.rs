//! Lower bound on the number of game states when every occupant could sit on
//! any tile, as a power of ten.
//!
//! cargo run --example state_space -- [tiles] [occupants]

use crawlbench::metrics::{state_space_lower_bound, ComplexityParams};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let tiles: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(70_000);
    let occupants: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(2_900);
    let exponent = state_space_lower_bound(ComplexityParams::new(tiles, occupants)?);
    println!("|S| >= {tiles}^{occupants} = 10^{exponent:.2}");
    Ok(())
}
