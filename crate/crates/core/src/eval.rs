//! Synthetic coverage benchmark for samplers.
//!
//! Videos are generated with labelled movement intervals. A movement counts
//! as captured when some sample at or before its start and some sample at or
//! after its end are linked by a chain of samples whose gaps never exceed
//! `max_gap_s`, i.e. the movement was watched continuously.
//!
//! All randomness comes from ChaCha8 (`rand_chacha`) seeded with a `u64`, so
//! corpora and random baselines reproduce bit for bit on every platform.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{PatsError, Result};
use crate::sampling::{pats_plan, uniform_plan, Fallback, SamplingParams, SamplingPlan, VideoMeta};

/// Fraction of a video that movements may occupy.
pub const MAX_PACKING: f64 = 0.8;

pub const DEFAULT_MAX_GAP_S: f64 = 0.5;

const PLACEMENT_ATTEMPTS: usize = 1_000;
const RESTARTS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Movement {
    pub start_s: f64,
    pub duration_s: f64,
}

impl Movement {
    pub fn end_s(&self) -> f64 {
        self.start_s + self.duration_s
    }

    fn overlaps(&self, other: &Movement) -> bool {
        self.start_s < other.end_s() && other.start_s < self.end_s()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticVideo {
    pub id: String,
    pub meta: VideoMeta<f64>,
    /// Disjoint, sorted by start.
    pub movements: Vec<Movement>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub n_videos: usize,
    pub duration_range_s: (f64, f64),
    pub movement_duration_range_s: (f64, f64),
    pub movements_per_video: usize,
    pub fps: f64,
    pub seed: u64,
}

impl CorpusSpec {
    fn validate(&self) -> Result<()> {
        let ordered = |(lo, hi): (f64, f64)| lo > 0.0 && lo <= hi && hi.is_finite();
        if !ordered(self.duration_range_s) {
            return Err(PatsError::param("duration_range_s", "must be positive and ordered"));
        }
        if !ordered(self.movement_duration_range_s) {
            return Err(PatsError::param(
                "movement_duration_range_s",
                "must be positive and ordered",
            ));
        }
        if !(self.fps.is_finite() && self.fps > 0.0) {
            return Err(PatsError::param("fps", "must be a positive finite number"));
        }
        let worst_case = self.movements_per_video as f64 * self.movement_duration_range_s.1;
        let budget = MAX_PACKING * self.duration_range_s.0;
        if worst_case > budget {
            return Err(PatsError::Generation(format!(
                "{} movements of up to {} s need {worst_case} s but only {budget} s fit in the shortest video",
                self.movements_per_video, self.movement_duration_range_s.1
            )));
        }
        Ok(())
    }
}

fn uniform_in(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.gen_range(lo..=hi)
    }
}

fn place_movements(rng: &mut ChaCha8Rng, duration_s: f64, spec: &CorpusSpec) -> Option<Vec<Movement>> {
    let mut placed: Vec<Movement> = Vec::with_capacity(spec.movements_per_video);
    for _ in 0..spec.movements_per_video {
        let length = uniform_in(rng, spec.movement_duration_range_s);
        let candidate = (0..PLACEMENT_ATTEMPTS)
            .map(|_| Movement {
                start_s: uniform_in(rng, (0.0, duration_s - length)),
                duration_s: length,
            })
            .find(|m| placed.iter().all(|p| !p.overlaps(m)))?;
        placed.push(candidate);
    }
    placed.sort_by(|a, b| a.start_s.total_cmp(&b.start_s));
    Some(placed)
}

/// Deterministic corpus of videos with disjoint movements placed by
/// rejection sampling.
pub fn generate_corpus(spec: &CorpusSpec) -> Result<Vec<SyntheticVideo>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    (0..spec.n_videos)
        .map(|i| {
            let duration_s = uniform_in(&mut rng, spec.duration_range_s);
            let total_frames = (duration_s * spec.fps).floor() as u64;
            let movements = (0..RESTARTS)
                .find_map(|_| place_movements(&mut rng, duration_s, spec))
                .ok_or_else(|| {
                    PatsError::Generation(format!("could not place movements in video {i}"))
                })?;
            Ok(SyntheticVideo {
                id: format!("video-{i:05}"),
                meta: VideoMeta {
                    duration_s,
                    total_frames,
                    fps: spec.fps,
                },
                movements,
            })
        })
        .collect()
}

/// `n_target` frames drawn uniformly: without replacement when the video has
/// enough frames, with replacement otherwise. Sorted.
pub fn random_plan(meta: VideoMeta<f64>, params: SamplingParams<f64>, seed: u64) -> SamplingPlan<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = meta.total_frames;
    let n = params.n_target;
    let mut frame_indices: Vec<u64> = if total == 0 {
        vec![0; n as usize]
    } else if total >= n {
        index::sample(&mut rng, total as usize, n as usize)
            .into_iter()
            .map(|i| i as u64)
            .collect()
    } else {
        (0..n).map(|_| rng.gen_range(0..total)).collect()
    };
    frame_indices.sort_unstable();
    SamplingPlan {
        frame_indices,
        segments: Vec::new(),
        fallback: Fallback::None,
        params,
        meta,
    }
}

fn sorted(indices: &[u64]) -> Vec<u64> {
    let mut out = indices.to_vec();
    out.sort_unstable();
    out
}

/// Gaps are measured in whole frames first so that adjacent frames are
/// exactly `1 / fps` apart.
fn gap_s(a: u64, b: u64, fps: f64) -> f64 {
    (b - a) as f64 / fps
}

fn is_captured(idx: &[u64], fps: f64, movement: &Movement, max_gap_s: f64) -> bool {
    let before = idx.partition_point(|&i| i as f64 / fps <= movement.start_s);
    let after = idx.partition_point(|&i| (i as f64 / fps) < movement.end_s());
    if before == 0 || after == idx.len() {
        return false;
    }
    idx[before - 1..=after]
        .windows(2)
        .all(|w| gap_s(w[0], w[1], fps) <= max_gap_s)
}

/// `(captured, total)` movements of `video` under the sampled indices.
pub fn capture_counts(indices: &[u64], video: &SyntheticVideo, max_gap_s: f64) -> (usize, usize) {
    let idx = sorted(indices);
    let captured = video
        .movements
        .iter()
        .filter(|m| is_captured(&idx, video.meta.fps, m, max_gap_s))
        .count();
    (captured, video.movements.len())
}

pub fn capture_rate(plan: &SamplingPlan<f64>, video: &SyntheticVideo, max_gap_s: f64) -> (usize, usize) {
    capture_counts(&plan.frame_indices, video, max_gap_s)
}

/// Largest distance between consecutive sample times, 0 for fewer than two.
pub fn max_gap_s(indices: &[u64], fps: f64) -> f64 {
    sorted(indices)
        .windows(2)
        .map(|w| gap_s(w[0], w[1], fps))
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Pats,
    Uniform,
    Random,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Pats, Strategy::Uniform, Strategy::Random];

    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Pats => "pats",
            Strategy::Uniform => "uniform",
            Strategy::Random => "random",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VideoCoverage {
    pub video_id: String,
    pub captured: usize,
    pub movements: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub strategy: String,
    /// Captured movements over all movements in the corpus.
    pub capture_rate: f64,
    /// Mean over videos of the largest inter-sample gap.
    pub mean_max_gap_s: f64,
    pub per_video: Vec<VideoCoverage>,
}

impl CoverageReport {
    pub fn captured(&self) -> usize {
        self.per_video.iter().map(|v| v.captured).sum()
    }

    pub fn movements(&self) -> usize {
        self.per_video.iter().map(|v| v.movements).sum()
    }
}

fn video_seed(seed: u64, i: usize) -> u64 {
    seed ^ (i as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

pub fn plan_for(
    strategy: Strategy,
    video: &SyntheticVideo,
    params: SamplingParams<f64>,
    seed: u64,
) -> Result<SamplingPlan<f64>> {
    match strategy {
        Strategy::Pats => pats_plan(video.meta, params),
        Strategy::Uniform => Ok(uniform_plan(video.meta, params)),
        Strategy::Random => Ok(random_plan(video.meta, params, seed)),
    }
}

/// One report per strategy (pats, uniform, random), videos in corpus order.
pub fn compare_strategies(
    corpus: &[SyntheticVideo],
    params: SamplingParams<f64>,
    max_gap: f64,
    seed: u64,
) -> Result<Vec<CoverageReport>> {
    if corpus.is_empty() {
        return Err(PatsError::param("corpus", "must contain at least one video"));
    }
    if max_gap.is_nan() || max_gap <= 0.0 {
        return Err(PatsError::param("max_gap_s", "must be positive"));
    }
    params.validate()?;

    Strategy::ALL
        .iter()
        .map(|&strategy| {
            let mut per_video = Vec::with_capacity(corpus.len());
            let mut gap_sum = 0.0;
            for (i, video) in corpus.iter().enumerate() {
                let plan = plan_for(strategy, video, params, video_seed(seed, i))?;
                let (captured, movements) = capture_rate(&plan, video, max_gap);
                gap_sum += max_gap_s(&plan.frame_indices, video.meta.fps);
                per_video.push(VideoCoverage {
                    video_id: video.id.clone(),
                    captured,
                    movements,
                });
            }
            let total: usize = per_video.iter().map(|v| v.movements).sum();
            let captured: usize = per_video.iter().map(|v| v.captured).sum();
            Ok(CoverageReport {
                strategy: strategy.name().to_owned(),
                capture_rate: if total == 0 { 0.0 } else { captured as f64 / total as f64 },
                mean_max_gap_s: gap_sum / corpus.len() as f64,
                per_video,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(dur: (f64, f64), mov: (f64, f64), k: usize, seed: u64) -> CorpusSpec {
        CorpusSpec {
            n_videos: 1,
            duration_range_s: dur,
            movement_duration_range_s: mov,
            movements_per_video: k,
            fps: 30.0,
            seed,
        }
    }

    fn video_with(duration_s: f64, movements: Vec<Movement>) -> SyntheticVideo {
        SyntheticVideo {
            id: "v".into(),
            meta: VideoMeta {
                duration_s,
                total_frames: (duration_s * 30.0) as u64,
                fps: 30.0,
            },
            movements,
        }
    }

    #[test]
    fn corpus_shape() {
        let corpus = generate_corpus(&spec((10.0, 10.0), (1.0, 1.0), 2, 42)).unwrap();
        assert_eq!(corpus.len(), 1);
        let v = &corpus[0];
        assert_eq!(v.meta.duration_s, 10.0);
        assert_eq!(v.movements.len(), 2);
        assert!(!v.movements[0].overlaps(&v.movements[1]));
        assert!(v.movements[0].start_s <= v.movements[1].start_s);
        assert!(v.movements.iter().all(|m| m.start_s >= 0.0 && m.end_s() <= 10.0));
    }

    #[test]
    fn corpus_is_deterministic() {
        let s = spec((10.0, 10.0), (1.0, 1.0), 2, 42);
        assert_eq!(generate_corpus(&s).unwrap(), generate_corpus(&s).unwrap());
    }

    #[test]
    fn infeasible_packing() {
        let err = generate_corpus(&spec((10.0, 10.0), (5.0, 5.0), 3, 1)).unwrap_err();
        assert!(matches!(err, PatsError::Generation(_)));
        assert!(generate_corpus(&spec((10.0, 5.0), (1.0, 1.0), 1, 1)).is_err());
    }

    #[test]
    fn random_plan_cases() {
        let meta = VideoMeta {
            duration_s: 1.0,
            total_frames: 10,
            fps: 10.0,
        };
        let p = SamplingParams::new(10, 1, 1.0).unwrap();
        assert_eq!(random_plan(meta, p, 3).frame_indices, (0..10).collect::<Vec<_>>());

        let small = VideoMeta { total_frames: 5, ..meta };
        let p8 = SamplingParams::new(8, 1, 1.0).unwrap();
        let plan = random_plan(small, p8, 7);
        assert_eq!(plan.frame_indices.len(), 8);
        assert!(plan.frame_indices.iter().all(|&i| i < 5));
        assert!(plan.frame_indices.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(plan, random_plan(small, p8, 7));
    }

    #[test]
    fn capture_examples() {
        let video = video_with(10.0, vec![Movement { start_s: 4.0, duration_s: 1.0 }]);
        let every: Vec<u64> = (0..300).collect();
        assert_eq!(capture_counts(&every, &video, 0.5), (1, 1));
        assert_eq!(capture_counts(&[0, 270], &video, 0.5), (0, 1));
        // no sample at or after the end
        assert_eq!(capture_counts(&(0..140).collect::<Vec<_>>(), &video, 0.5), (0, 1));
    }

    #[test]
    fn pats_beats_uniform_on_windowed_movements() {
        let video = SyntheticVideo {
            id: "long".into(),
            meta: VideoMeta {
                duration_s: 180.0,
                total_frames: 5400,
                fps: 30.0,
            },
            movements: vec![
                Movement { start_s: 0.5, duration_s: 1.0 },
                Movement { start_s: 177.5, duration_s: 1.0 },
            ],
        };
        let params = SamplingParams::new(32, 2, 3.0).unwrap();
        let pats = pats_plan(video.meta, params).unwrap();
        let uniform = uniform_plan(video.meta, params);
        assert_eq!(capture_rate(&pats, &video, 0.5), (2, 2));
        assert_eq!(capture_rate(&uniform, &video, 0.5), (0, 2));
        assert!(max_gap_s(&uniform.frame_indices, 30.0) > 5.5);
    }

    #[test]
    fn full_sampling_captures_everything() {
        let corpus = generate_corpus(&CorpusSpec {
            n_videos: 5,
            ..spec((10.0, 20.0), (1.0, 2.0), 3, 9)
        })
        .unwrap();
        for v in &corpus {
            let every: Vec<u64> = (0..v.meta.total_frames).collect();
            let (c, t) = capture_counts(&every, v, 1.0 / 30.0);
            assert_eq!(c, t);
        }
    }

    #[test]
    fn compare_reports_in_order() {
        let corpus = generate_corpus(&CorpusSpec {
            n_videos: 4,
            ..spec((20.0, 40.0), (1.0, 2.0), 2, 5)
        })
        .unwrap();
        let params = SamplingParams::new(16, 2, 3.0).unwrap();
        let reports = compare_strategies(&corpus, params, 0.5, 11).unwrap();
        let names: Vec<&str> = reports.iter().map(|r| r.strategy.as_str()).collect();
        assert_eq!(names, ["pats", "uniform", "random"]);
        for r in &reports {
            let ids: Vec<&str> = r.per_video.iter().map(|v| v.video_id.as_str()).collect();
            let want: Vec<&str> = corpus.iter().map(|v| v.id.as_str()).collect();
            assert_eq!(ids, want);
            assert!((0.0..=1.0).contains(&r.capture_rate));
            assert_eq!(r.capture_rate, r.captured() as f64 / r.movements() as f64);
        }
        assert_eq!(reports, compare_strategies(&corpus, params, 0.5, 11).unwrap());
        assert!(compare_strategies(&[], params, 0.5, 11).is_err());
    }
}
