use serde::{Deserialize, Serialize};

use super::MetricsError;

/// Parameters of the "each occupant on any tile" counting argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityParams {
    pub tiles: u64,
    /// Items plus monsters.
    pub occupants: u64,
}

impl ComplexityParams {
    pub fn new(tiles: u64, occupants: u64) -> Result<Self, MetricsError> {
        if tiles == 0 || occupants == 0 || occupants > tiles {
            return Err(MetricsError::Complexity { tiles, occupants });
        }
        Ok(ComplexityParams { tiles, occupants })
    }
}

/// Largest integer below which every f64 integer is exact.
const EXACT_LIMIT: u64 = 1 << 53;

/// log10 of `tiles^occupants`.
///
/// When the count fits exactly in a double it is formed as an integer and
/// its log taken directly, matching a brute-force count bit for bit;
/// otherwise `occupants * log10(tiles)`, never forming the count.
pub fn state_space_lower_bound(params: ComplexityParams) -> f64 {
    let mut count: u64 = 1;
    for _ in 0..params.occupants {
        match count.checked_mul(params.tiles) {
            Some(next) if next <= EXACT_LIMIT => count = next,
            _ => return params.occupants as f64 * (params.tiles as f64).log10(),
        }
    }
    (count as f64).log10()
}
