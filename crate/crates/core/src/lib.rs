//! Segment-based temporal frame sampling for video preprocessing.
//!
//! Given only stream metadata (duration, frame count, frame rate), the
//! planner picks exactly `n_target` frame indices grouped into a few
//! continuous windows spread over the video, so each window shows a full
//! stretch of motion instead of isolated frames. Around it sit a
//! multi-camera synchronizer, the published configuration grid and a
//! synthetic coverage benchmark.
//!
//! The math is generic over [`Scalar`] (`f32` or `f64`). The aliases at the
//! crate root fix the scalar to `f64`, which is what the CLI and the
//! determinism guarantees use.
//!
//! ```
//! use pats_core::{pats_plan, SamplingParams, VideoMeta};
//!
//! let meta = VideoMeta::new(10.0, 300, 30.0).unwrap();
//! let params = SamplingParams::new(8, 2, 3.0).unwrap();
//! let plan = pats_plan(meta, params).unwrap();
//! assert_eq!(plan.frame_indices, [0, 29, 59, 89, 210, 239, 269, 299]);
//! ```

pub mod error;
pub mod eval;
pub mod grid;
pub mod multiview;
pub mod sampling;
pub mod scalar;

pub use error::{PatsError, Result};
pub use eval::{
    capture_counts, capture_rate, compare_strategies, generate_corpus, random_plan, CorpusSpec,
    CoverageReport, Movement, Strategy, SyntheticVideo, VideoCoverage,
};
pub use grid::{
    best_config, best_configs, effective_fps, enumerate_grid, reference_tables, GridSpec,
    ReferenceTables, ScenarioConfig, ViewConfig,
};
pub use multiview::{sync_plans, window_midpoints, ViewRole};
pub use sampling::{
    adjust_count, allocate_frames, effective_segment_duration, max_start_time, pats_plan,
    sample_segment, segment_frame_bounds, segment_start_times, uniform_plan, Fallback,
};
pub use scalar::Scalar;

pub type VideoMeta = sampling::VideoMeta<f64>;
pub type SamplingParams = sampling::SamplingParams<f64>;
pub type SegmentWindow = sampling::SegmentWindow<f64>;
pub type SamplingPlan = sampling::SamplingPlan<f64>;
pub type ViewMeta = multiview::ViewMeta<f64>;
pub type MultiViewPlan = multiview::MultiViewPlan<f64>;

pub type VideoMetaF32 = sampling::VideoMeta<f32>;
pub type SamplingParamsF32 = sampling::SamplingParams<f32>;
pub type SamplingPlanF32 = sampling::SamplingPlan<f32>;
pub type ViewMetaF32 = multiview::ViewMeta<f32>;
