//! Windowed profiles, stability across realizations, profile slopes and group
//! statistics.

mod slope;
mod stability;
pub mod stats;
mod window;

pub use slope::{least_squares_slope, slope_fit, spearman};
pub use stability::{cv, defined_values, summarize_scales, ScaleSummary};
pub use stats::{
    compare_scales, fdr_bh, ttest2, ScaleComparison, Significance, StatResult, TTest, TTestVariant,
};
pub use window::{moving_window, window_profile, WindowProfile, WindowSpec};
