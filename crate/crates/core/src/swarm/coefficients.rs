use serde::{Deserialize, Serialize};

/// Inertia, individuality and sociality weights of the velocity update.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSet {
    pub w: f64,
    pub iw: f64,
    pub sw: f64,
}

impl CoefficientSet {
    pub const fn new(w: f64, iw: f64, sw: f64) -> Self {
        CoefficientSet { w, iw, sw }
    }
}

/// Presets for the first, second and last third of the swarm.
pub const SUB_SWARM_PRESETS: [CoefficientSet; 3] = [
    CoefficientSet::new(0.5, 2.0, 2.0),
    CoefficientSet::new(0.7298, 1.49609, 1.49609),
    CoefficientSet::new(0.7, 2.0, 2.0),
];

/// Coefficients of particle `index` in a swarm of `size`: contiguous thirds
/// by index, with any remainder joining the last third.
pub fn assign_coefficients(index: usize, size: usize) -> CoefficientSet {
    debug_assert!(index < size);
    let third = size / 3;
    let group = index.checked_div(third).map_or(2, |g| g.min(2));
    SUB_SWARM_PRESETS[group]
}
