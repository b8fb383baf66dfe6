use crate::math::{norm_cdf, norm_pdf};

/// Expected improvement below `best` of a normal prediction.
pub fn expected_improvement(mean: f64, sd: f64, best: f64) -> f64 {
    let gap = best - mean;
    if !(sd > 0.0) {
        return gap.max(0.0);
    }
    let u = gap / sd;
    (gap * norm_cdf(u) + sd * norm_pdf(u)).max(0.0)
}
