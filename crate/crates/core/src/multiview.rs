//! Time-synchronized plans across several cameras of one performance.
//!
//! Windows are laid out once on a shared clock and then mapped onto each
//! view's own frames, so every view observes the same moments even when
//! frame rates and lengths differ.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{PatsError, Result};
use crate::sampling::{
    allocate_frames, classify, extract_windows, finalize_indices, max_start_time,
    segment_start_times, uniform_plan, Fallback, SamplingParams, SamplingPlan, SegmentWindow,
    VideoMeta,
};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViewRole {
    Ego,
    Exo,
}

/// One camera stream.
///
/// `time_offset_s` is where the stream starts on the shared clock, so a
/// shared time `t` is local time `t - time_offset_s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViewMeta<S> {
    pub view_id: String,
    pub role: ViewRole,
    pub meta: VideoMeta<S>,
    #[serde(default)]
    pub time_offset_s: S,
}

impl<S: Scalar> ViewMeta<S> {
    pub fn new(view_id: impl Into<String>, role: ViewRole, meta: VideoMeta<S>) -> Self {
        Self {
            view_id: view_id.into(),
            role,
            meta,
            time_offset_s: S::zero(),
        }
    }

    pub fn with_offset(mut self, time_offset_s: S) -> Self {
        self.time_offset_s = time_offset_s;
        self
    }

    /// Shared-clock time of the centre of frame `index`.
    pub fn frame_time(&self, index: u64) -> S {
        (S::from_count(index) + S::lit(0.5)) / self.meta.fps + self.time_offset_s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiViewPlan<S> {
    /// Length of the interval every view observes.
    pub reference_duration_s: S,
    /// Shared-clock origin of that interval (latest view start).
    pub reference_start_s: S,
    /// Windows on the shared clock. Only `start_s`, `duration_s` and
    /// `n_frames` are meaningful; frame fields are zero.
    pub shared_windows: Vec<SegmentWindow<S>>,
    pub per_view: BTreeMap<String, SamplingPlan<S>>,
    pub fallback: Fallback,
}

/// Shared-clock interval `(start, length)` seen by every view.
pub fn common_interval<S: Scalar>(views: &[ViewMeta<S>]) -> (S, S) {
    let start = views
        .iter()
        .map(|v| v.time_offset_s)
        .fold(S::neg_infinity(), S::max);
    let end = views
        .iter()
        .map(|v| v.time_offset_s + v.meta.duration_s)
        .fold(S::infinity(), S::min);
    (start, (end - start).max(S::zero()))
}

pub fn sync_plans<S: Scalar>(views: &[ViewMeta<S>], params: SamplingParams<S>) -> Result<MultiViewPlan<S>> {
    if views.is_empty() {
        return Err(PatsError::param("views", "at least one view is required"));
    }
    params.validate()?;
    let mut seen = HashSet::new();
    for view in views {
        if view.view_id.is_empty() {
            return Err(PatsError::param("view_id", "must be non-empty"));
        }
        if !seen.insert(view.view_id.as_str()) {
            return Err(PatsError::param("view_id", format!("duplicate view `{}`", view.view_id)));
        }
        view.meta.validate()?;
        if !view.time_offset_s.is_finite() {
            return Err(PatsError::param("time_offset_s", "must be finite"));
        }
    }

    let (origin, reference) = common_interval(views);
    let min_frames = views.iter().map(|v| v.meta.total_frames).min().unwrap_or(0);
    let (fallback, d_eff) = classify(reference, min_frames, &params);

    if fallback.is_fallback() {
        log::debug!("multi-view set falls back to uniform sampling: {fallback}");
        let per_view = views
            .iter()
            .map(|v| {
                let plan = SamplingPlan {
                    fallback,
                    ..uniform_plan(v.meta, params)
                };
                (v.view_id.clone(), plan)
            })
            .collect();
        return Ok(MultiViewPlan {
            reference_duration_s: reference,
            reference_start_s: origin,
            shared_windows: Vec::new(),
            per_view,
            fallback,
        });
    }

    let t_max = max_start_time(reference, d_eff);
    let starts = segment_start_times(t_max, params.n_segments);
    let allocation = allocate_frames(params.n_target, params.n_segments);

    let shared_windows = starts
        .iter()
        .zip(&allocation)
        .enumerate()
        .map(|(i, (&t, &n_frames))| SegmentWindow {
            index: i as u64,
            start_s: origin + t,
            duration_s: d_eff,
            frame_start: 0,
            frame_end: 0,
            n_frames,
        })
        .collect();

    let per_view = views
        .iter()
        .map(|v| {
            let shift = origin - v.time_offset_s;
            let local: Vec<S> = starts.iter().map(|&t| (t + shift).max(S::zero())).collect();
            let (segments, raw) =
                extract_windows(&local, d_eff, v.meta.fps, v.meta.total_frames, &allocation);
            let plan = SamplingPlan {
                frame_indices: finalize_indices(raw, v.meta.total_frames, params.n_target),
                segments,
                fallback: Fallback::None,
                params,
                meta: v.meta,
            };
            (v.view_id.clone(), plan)
        })
        .collect();

    Ok(MultiViewPlan {
        reference_duration_s: reference,
        reference_start_s: origin,
        shared_windows,
        per_view,
        fallback: Fallback::None,
    })
}

/// Shared-clock midpoint of the samples each view assigns to each window.
///
/// Row `w` holds, per view in input order, the centre of the span from the
/// first sampled frame's start to the last sampled frame's end. Empty when
/// the set fell back.
pub fn window_midpoints<S: Scalar>(views: &[ViewMeta<S>], plan: &MultiViewPlan<S>) -> Vec<Vec<S>> {
    if plan.fallback.is_fallback() {
        return Vec::new();
    }
    let half = S::lit(0.5);
    plan.shared_windows
        .iter()
        .enumerate()
        .filter(|(_, w)| w.n_frames > 0)
        .map(|(w, _)| {
            views
                .iter()
                .map(|v| {
                    let seg = &plan.per_view[&v.view_id].segments[w];
                    let samples = crate::sampling::sample_segment(seg.frame_start, seg.frame_end, seg.n_frames);
                    let first = v.frame_time(samples[0]) - half / v.meta.fps;
                    let last = v.frame_time(samples[samples.len() - 1]) + half / v.meta.fps;
                    (first + last) * half
                })
                .collect()
        })
        .collect()
}
