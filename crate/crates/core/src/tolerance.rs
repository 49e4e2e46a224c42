//! Numerical tolerances used across the crate, gathered in one record.

/// Tolerances and grid sizes. `Tolerances::default()` is what every
/// convenience entry point uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative tolerance on the 2x2 minors of two coefficient quadruples.
    pub projective: f64,
    /// Slack allowed above 1 for `max |phi|` on the circle.
    pub self_map: f64,
    /// Points in the circle grid used by the self-map test.
    pub circle_samples: usize,
    /// Relative tolerance on the discriminant of the contact quadratic.
    pub discriminant: f64,
    /// Tolerance for "lies on the unit circle" and "same boundary point".
    pub boundary: f64,
    /// Coefficient-level tolerance for algebraic predicates on symbols.
    pub coefficient: f64,
    /// Smallest |w| or |det| still counted as invertible.
    pub fredholm: f64,
    /// Rounds of local grid refinement for sup/inf searches.
    pub refinement_rounds: usize,
    /// Allowed deviation from self-adjointness of a compression.
    pub self_adjoint: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            projective: 1e-10,
            self_map: 1e-9,
            circle_samples: 4096,
            discriminant: 1e-9,
            boundary: 1e-9,
            coefficient: 1e-12,
            fredholm: 1e-9,
            refinement_rounds: 3,
            self_adjoint: 1e-8,
        }
    }
}
