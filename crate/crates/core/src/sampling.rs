//! Segment-based temporal sampling planner and its uniform fallback.
//!
//! A plan places `n_segments` continuous windows of (at most)
//! `segment_duration_s` seconds across the video, spreads `n_target` frames
//! over them with the remainder going to the earliest windows, and samples
//! each window densely from its first to its last frame. Inputs that cannot
//! support that layout fall back to whole-video uniform sampling.
//!
//! Every function here is pure. Index math is done in the scalar type and
//! floored once; expressions are evaluated in a fixed order so `f64` plans
//! are bit-identical across runs and platforms.

use serde::{Deserialize, Serialize};

use crate::error::{PatsError, Result};
use crate::scalar::{floor_index, Scalar};

/// Windows shorter than this (seconds) are not worth sampling continuously.
pub const MIN_SEGMENT_DURATION_S: f64 = 0.5;

/// Fraction of the video the segments may occupy in total.
pub const COVERAGE_CAP: f64 = 0.8;

/// Metadata of one video stream.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VideoMeta<S> {
    pub duration_s: S,
    pub total_frames: u64,
    pub fps: S,
}

impl<S: Scalar> VideoMeta<S> {
    pub fn new(duration_s: S, total_frames: u64, fps: S) -> Result<Self> {
        let meta = Self {
            duration_s,
            total_frames,
            fps,
        };
        meta.validate()?;
        if !meta.is_consistent() {
            log::warn!(
                "duration {:?}s at {:?} fps disagrees with {} frames by more than one second of video",
                duration_s,
                fps,
                total_frames
            );
        }
        Ok(meta)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fps.is_finite() && self.fps > S::zero()) {
            return Err(PatsError::param("fps", "must be a positive finite number"));
        }
        if !(self.duration_s.is_finite() && self.duration_s >= S::zero()) {
            return Err(PatsError::param(
                "duration_s",
                "must be a nonnegative finite number",
            ));
        }
        Ok(())
    }

    /// Soft check: `|duration * fps - total_frames| <= fps`.
    pub fn is_consistent(&self) -> bool {
        let implied = self.duration_s * self.fps;
        (implied - S::from_count(self.total_frames)).abs() <= self.fps
    }

    /// Largest valid frame index, `0` for an empty video.
    pub fn last_index(&self) -> u64 {
        self.total_frames.saturating_sub(1)
    }
}

/// The three knobs of the planner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingParams<S> {
    /// Frames to emit per video.
    pub n_target: u64,
    /// Number of continuous windows.
    pub n_segments: u64,
    /// Requested window length in seconds.
    pub segment_duration_s: S,
}

impl<S: Scalar> SamplingParams<S> {
    pub fn new(n_target: u64, n_segments: u64, segment_duration_s: S) -> Result<Self> {
        let params = Self {
            n_target,
            n_segments,
            segment_duration_s,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_target == 0 {
            return Err(PatsError::param("n_target", "must be at least 1"));
        }
        if self.n_segments == 0 {
            return Err(PatsError::param("n_segments", "must be at least 1"));
        }
        if self.n_segments > self.n_target {
            return Err(PatsError::param(
                "n_segments",
                format!(
                    "{} segments exceed the {} target frames",
                    self.n_segments, self.n_target
                ),
            ));
        }
        if !(self.segment_duration_s.is_finite() && self.segment_duration_s > S::zero()) {
            return Err(PatsError::param(
                "segment_duration_s",
                "must be a positive finite number",
            ));
        }
        Ok(())
    }
}

/// One sampled window: its time span and the frame range it maps to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentWindow<S> {
    pub index: u64,
    pub start_s: S,
    /// Effective (capped) duration shared by every window of a plan.
    pub duration_s: S,
    pub frame_start: u64,
    /// Exclusive.
    pub frame_end: u64,
    pub n_frames: u64,
}

impl<S: Scalar> SegmentWindow<S> {
    pub fn end_s(&self) -> S {
        self.start_s + self.duration_s
    }
}

/// Why a plan fell back to uniform sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fallback {
    None,
    InsufficientDuration,
    InsufficientFrames,
    MinimalSegmentDuration,
}

impl Fallback {
    pub fn as_str(&self) -> &'static str {
        match self {
            Fallback::None => "none",
            Fallback::InsufficientDuration => "insufficient_duration",
            Fallback::InsufficientFrames => "insufficient_frames",
            Fallback::MinimalSegmentDuration => "minimal_segment_duration",
        }
    }

    pub fn is_fallback(&self) -> bool {
        *self != Fallback::None
    }
}

impl std::fmt::Display for Fallback {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Fallback {
    type Err = PatsError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "none" => Fallback::None,
            "insufficient_duration" => Fallback::InsufficientDuration,
            "insufficient_frames" => Fallback::InsufficientFrames,
            "minimal_segment_duration" => Fallback::MinimalSegmentDuration,
            other => return Err(PatsError::param("fallback", format!("unknown kind `{other}`"))),
        })
    }
}

/// Final output: exactly `params.n_target` sorted frame indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingPlan<S> {
    pub frame_indices: Vec<u64>,
    /// Empty when a fallback was used.
    pub segments: Vec<SegmentWindow<S>>,
    pub fallback: Fallback,
    pub params: SamplingParams<S>,
    pub meta: VideoMeta<S>,
}

/// `min(d_s, 0.8 T / N_s)`.
pub fn effective_segment_duration<S: Scalar>(segment_duration_s: S, duration_s: S, n_segments: u64) -> S {
    let cap = S::lit(COVERAGE_CAP) * duration_s / S::from_count(n_segments);
    segment_duration_s.min(cap)
}

/// Latest start that keeps a window of `d_eff` seconds inside the video.
pub fn max_start_time<S: Scalar>(duration_s: S, d_eff: S) -> S {
    (duration_s - d_eff).max(S::zero())
}

/// Window starts spread evenly over `[0, t_max]`; a single window starts at 0.
pub fn segment_start_times<S: Scalar>(t_max: S, n_segments: u64) -> Vec<S> {
    if n_segments <= 1 {
        return vec![S::zero(); n_segments as usize];
    }
    let spacing = t_max / S::from_count(n_segments - 1);
    (0..n_segments).map(|i| S::from_count(i) * spacing).collect()
}

/// `floor(n_target / n_segments)` frames each, plus one for the first
/// `n_target mod n_segments` windows.
pub fn allocate_frames(n_target: u64, n_segments: u64) -> Vec<u64> {
    if n_segments == 0 {
        return Vec::new();
    }
    let base = n_target / n_segments;
    let remainder = n_target % n_segments;
    (0..n_segments).map(|i| base + u64::from(i < remainder)).collect()
}

/// Half-open frame range `[f_s, f_e)` covered by a window.
///
/// The end is clipped to `n_total`. A window that maps to no frames (very low
/// fps) is widened to a single frame.
pub fn segment_frame_bounds<S: Scalar>(t_start: S, d_eff: S, fps: S, n_total: u64) -> (u64, u64) {
    if n_total == 0 {
        return (0, 0);
    }
    let mut start = floor_index(t_start * fps);
    let end = floor_index((t_start + d_eff) * fps).min(n_total);
    if end > start {
        return (start, end);
    }
    // Metadata may claim more seconds than frames; keep the window inside the video.
    start = start.min(n_total - 1);
    (start, (start + 1).min(n_total))
}

/// Floors `n` evenly spaced reals from `first` to `last` inclusive.
///
/// The last value is pinned to `last` exactly so rounding in the step never
/// pushes it below the final frame.
pub(crate) fn floored_linspace<S: Scalar>(first: S, last: S, n: u64) -> Vec<u64> {
    match n {
        0 => Vec::new(),
        1 => vec![floor_index(first)],
        _ => {
            let step = (last - first) / S::from_count(n - 1);
            (0..n)
                .map(|i| {
                    if i == n - 1 {
                        floor_index(last)
                    } else {
                        floor_index(first + S::from_count(i) * step)
                    }
                })
                .collect()
        }
    }
}

/// Samples `n` frames continuously from `[f_s, f_e)`: the midpoint for a
/// single frame, otherwise an even spread from `f_s` to `f_e - 1`.
pub fn sample_segment(f_s: u64, f_e: u64, n: u64) -> Vec<u64> {
    let last = f_e.saturating_sub(1).max(f_s);
    match n {
        0 => Vec::new(),
        1 => vec![(f_s + f_e.max(f_s)) / 2],
        _ => floored_linspace(f_s as f64, last as f64, n),
    }
}

/// Forces `indices` to exactly `n_target` sorted entries.
///
/// Excess entries are thinned by picking evenly spaced positions of the
/// sorted list (both ends kept). Missing entries are filled by cycling over
/// the list in its original order, then the result is sorted.
pub fn adjust_count(indices: &[u64], n_target: u64) -> Result<Vec<u64>> {
    if indices.is_empty() {
        return Err(PatsError::EmptyIndices);
    }
    let len = indices.len() as u64;
    let mut out;
    if len > n_target {
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        out = (0..n_target)
            .map(|j| {
                let pos = if n_target == 1 { 0 } else { j * (len - 1) / (n_target - 1) };
                sorted[pos as usize]
            })
            .collect();
    } else {
        out = indices.to_vec();
        out.extend((0..n_target - len).map(|k| indices[((len + k) % len) as usize]));
        out.sort_unstable();
    }
    Ok(out)
}

/// Whole-video uniform sampling; the fallback flag is left for the caller.
pub fn uniform_plan<S: Scalar>(meta: VideoMeta<S>, params: SamplingParams<S>) -> SamplingPlan<S> {
    SamplingPlan {
        frame_indices: uniform_indices(meta.total_frames, params.n_target),
        segments: Vec::new(),
        fallback: Fallback::None,
        params,
        meta,
    }
}

pub(crate) fn uniform_indices(total_frames: u64, n_target: u64) -> Vec<u64> {
    if total_frames == 0 {
        return vec![0; n_target as usize];
    }
    if total_frames >= n_target {
        return floored_linspace(0.0f64, (total_frames - 1) as f64, n_target);
    }
    let every: Vec<u64> = (0..total_frames).collect();
    adjust_count(&every, n_target).expect("non-empty frame range")
}

/// Decides the fallback, if any, from the shared quantities of a plan.
pub(crate) fn classify<S: Scalar>(duration_s: S, min_total_frames: u64, params: &SamplingParams<S>) -> (Fallback, S) {
    if duration_s.is_nan() || duration_s <= S::zero() {
        return (Fallback::InsufficientDuration, S::zero());
    }
    if min_total_frames < params.n_target {
        return (Fallback::InsufficientFrames, S::zero());
    }
    let d_eff = effective_segment_duration(params.segment_duration_s, duration_s, params.n_segments);
    if d_eff < S::lit(MIN_SEGMENT_DURATION_S) {
        return (Fallback::MinimalSegmentDuration, d_eff);
    }
    (Fallback::None, d_eff)
}

/// Maps window starts (in the stream's own time) onto frames of that stream.
pub(crate) fn extract_windows<S: Scalar>(
    starts: &[S],
    d_eff: S,
    fps: S,
    total_frames: u64,
    allocation: &[u64],
) -> (Vec<SegmentWindow<S>>, Vec<u64>) {
    let mut windows = Vec::with_capacity(starts.len());
    let mut raw = Vec::with_capacity(allocation.iter().sum::<u64>() as usize);
    for (i, (&start_s, &n_frames)) in starts.iter().zip(allocation).enumerate() {
        let (frame_start, frame_end) = segment_frame_bounds(start_s, d_eff, fps, total_frames);
        raw.extend(sample_segment(frame_start, frame_end, n_frames));
        windows.push(SegmentWindow {
            index: i as u64,
            start_s,
            duration_s: d_eff,
            frame_start,
            frame_end,
            n_frames,
        });
    }
    (windows, raw)
}

/// Clips to the video and repairs the count.
pub(crate) fn finalize_indices(mut raw: Vec<u64>, total_frames: u64, n_target: u64) -> Vec<u64> {
    let last = total_frames.saturating_sub(1);
    raw.iter_mut().for_each(|x| *x = (*x).min(last));
    if raw.is_empty() {
        raw.push(0);
    }
    adjust_count(&raw, n_target).expect("non-empty after guard")
}

/// Full planner: segment layout, frame allocation, continuous sampling and
/// the uniform fallbacks.
pub fn pats_plan<S: Scalar>(meta: VideoMeta<S>, params: SamplingParams<S>) -> Result<SamplingPlan<S>> {
    params.validate()?;
    meta.validate()?;

    let (fallback, d_eff) = classify(meta.duration_s, meta.total_frames, &params);
    if fallback.is_fallback() {
        log::debug!("falling back to uniform sampling: {fallback}");
        return Ok(SamplingPlan {
            fallback,
            ..uniform_plan(meta, params)
        });
    }

    let t_max = max_start_time(meta.duration_s, d_eff);
    let starts = segment_start_times(t_max, params.n_segments);
    let allocation = allocate_frames(params.n_target, params.n_segments);
    let (segments, raw) = extract_windows(&starts, d_eff, meta.fps, meta.total_frames, &allocation);

    Ok(SamplingPlan {
        frame_indices: finalize_indices(raw, meta.total_frames, params.n_target),
        segments,
        fallback: Fallback::None,
        params,
        meta,
    })
}
