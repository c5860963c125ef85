use serde::{Deserialize, Serialize};

/// Multiplier of the standard error giving intervals whose non-overlap
/// corresponds to a difference significant at about the 5% level.
pub const GOLDSTEIN_FACTOR: f64 = 1.396;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lower <= other.upper && other.lower <= self.upper
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// `mean ± 1.396 · se`. Two such intervals that do not overlap indicate a
/// difference at roughly the 5% level.
pub fn goldstein_ci(mean: f64, se: f64) -> Interval {
    let half = GOLDSTEIN_FACTOR * se.abs();
    Interval {
        lower: mean - half,
        upper: mean + half,
    }
}

/// Formats a significance level to four decimals, truncating so the
/// printed threshold never exceeds the one applied (0.05/21 prints as
/// `0.0023`).
pub fn format_alpha(alpha: f64) -> String {
    format!("{:.4}", (alpha * 1e4 + 1e-9).floor() / 1e4)
}

/// Per-comparison alpha for all `g (g - 1) / 2` pairwise comparisons among
/// `g` groups. With fewer than two groups there is nothing to divide.
pub fn bonferroni_alpha(g: usize, alpha: f64) -> f64 {
    if g < 2 {
        return alpha;
    }
    alpha / (g * (g - 1) / 2) as f64
}
