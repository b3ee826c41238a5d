use pats_core::multiview::common_interval;
use pats_core::{
    adjust_count, allocate_frames, pats_plan, segment_start_times, sync_plans, window_midpoints,
    Fallback, SamplingParams, VideoMeta, ViewMeta, ViewRole,
};
use pats_oracle::{reference_plan, RefFallback};
use proptest::prelude::*;

const FPS_CHOICES: [f64; 4] = [24.0, 25.0, 30.0, 60.0];

fn to_ref(f: Fallback) -> RefFallback {
    match f {
        Fallback::None => RefFallback::None,
        Fallback::InsufficientDuration => RefFallback::InsufficientDuration,
        Fallback::InsufficientFrames => RefFallback::InsufficientFrames,
        Fallback::MinimalSegmentDuration => RefFallback::MinimalSegmentDuration,
    }
}

prop_compose! {
    fn params()(n_target in 1u64..=64)
        (n_target in Just(n_target), n_segments in 1..=n_target, d in 0.01f64..=10.0)
        -> SamplingParams {
        SamplingParams::new(n_target, n_segments, d).unwrap()
    }
}

prop_compose! {
    fn meta()(t in 0.001f64..=600.0, fps in prop::sample::select(FPS_CHOICES.to_vec()), jitter in -1i64..=1)
        -> VideoMeta {
        let n = ((t * fps).round() as i64 + jitter).max(0) as u64;
        VideoMeta { duration_s: t, total_frames: n, fps }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn matches_reference(m in meta(), p in params()) {
        let plan = pats_plan(m, p).unwrap();
        let r = reference_plan(m.duration_s, m.fps, m.total_frames, p.n_target, p.n_segments, p.segment_duration_s);
        prop_assert_eq!(&plan.frame_indices, &r.indices);
        prop_assert_eq!(to_ref(plan.fallback), r.fallback);
        let windows: Vec<_> = plan.segments.iter()
            .map(|w| (w.start_s, w.frame_start, w.frame_end, w.n_frames)).collect();
        prop_assert_eq!(windows, r.windows);
    }

    #[test]
    fn plan_invariants(m in meta(), p in params()) {
        let plan = pats_plan(m, p).unwrap();
        prop_assert_eq!(plan.frame_indices.len() as u64, p.n_target);
        prop_assert!(plan.frame_indices.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(plan.frame_indices.iter().all(|&i| i <= m.total_frames.saturating_sub(1)));
        for w in &plan.segments {
            prop_assert!(w.frame_start <= w.frame_end && w.frame_end <= m.total_frames);
        }
        if plan.fallback == Fallback::None {
            prop_assert_eq!(plan.segments.iter().map(|w| w.n_frames).sum::<u64>(), p.n_target);
            for pair in plan.segments.windows(2) {
                prop_assert!(pair[1].start_s >= pair[0].end_s());
            }
        } else {
            prop_assert!(plan.segments.is_empty());
        }
    }

    #[test]
    fn fallback_only_on_documented_triggers(m in meta(), p in params()) {
        let plan = pats_plan(m, p).unwrap();
        let d_eff = p.segment_duration_s.min(0.8 * m.duration_s / p.n_segments as f64);
        let expected = if m.duration_s <= 0.0 {
            Fallback::InsufficientDuration
        } else if m.total_frames < p.n_target {
            Fallback::InsufficientFrames
        } else if d_eff < 0.5 {
            Fallback::MinimalSegmentDuration
        } else {
            Fallback::None
        };
        prop_assert_eq!(plan.fallback, expected);
    }

    #[test]
    fn allocation_conserves(n_target in 1u64..500, frac in 0.0f64..1.0) {
        let n_segments = 1 + ((n_target - 1) as f64 * frac) as u64;
        let a = allocate_frames(n_target, n_segments);
        prop_assert_eq!(a.len() as u64, n_segments);
        prop_assert_eq!(a.iter().sum::<u64>(), n_target);
        prop_assert!(a.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(a[0] - a[a.len() - 1] <= 1);
    }

    #[test]
    fn start_times_are_affine(t_max in 0.0f64..600.0, n in 2u64..40) {
        let s = segment_start_times(t_max, n);
        prop_assert_eq!(s[0], 0.0);
        prop_assert!((s[s.len() - 1] - t_max).abs() <= 1e-9 * t_max.max(1.0));
        prop_assert!(s.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(s.iter().all(|&x| x <= t_max * (1.0 + 1e-12)));
    }

    #[test]
    fn adjust_count_is_exact(xs in prop::collection::vec(0u64..1000, 1..80), n in 1u64..120) {
        let out = adjust_count(&xs, n).unwrap();
        prop_assert_eq!(out.len() as u64, n);
        prop_assert!(out.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(out.iter().all(|x| xs.contains(x)));
    }

    #[test]
    fn deterministic(m in meta(), p in params()) {
        prop_assert_eq!(pats_plan(m, p).unwrap(), pats_plan(m, p).unwrap());
    }
}

prop_compose! {
    fn view_set()(
        count in 2usize..=4,
        seeds in prop::collection::vec((20.0f64..300.0, 0usize..3, 0.0f64..5.0), 4),
        use_offsets in any::<bool>(),
    ) -> Vec<ViewMeta> {
        seeds.into_iter().take(count).enumerate().map(|(i, (t, f, off))| {
            let fps = [24.0, 30.0, 60.0][f];
            let meta = VideoMeta { duration_s: t, total_frames: (t * fps).floor() as u64, fps };
            let role = if i == 0 { ViewRole::Ego } else { ViewRole::Exo };
            ViewMeta::new(format!("cam{i}"), role, meta).with_offset(if use_offsets { off } else { 0.0 })
        }).collect()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    /// Windows with two or more samples agree within one frame period of the
    /// slowest view. A lone sample is picked by the frame-midpoint rule, which
    /// adds up to half a period of rounding per view, so those windows only
    /// agree within one and a half periods.
    #[test]
    fn multiview_time_coherence(views in view_set(), p in params()) {
        let mv = sync_plans(&views, p).unwrap();
        let slowest = views.iter().map(|v| v.meta.fps).fold(f64::INFINITY, f64::min);
        let counts: Vec<u64> = mv.shared_windows.iter().map(|w| w.n_frames).filter(|&n| n > 0).collect();
        for (row, n) in window_midpoints(&views, &mv).iter().zip(counts) {
            let lo = row.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let bound = if n >= 2 { 1.0 } else { 1.5 } / slowest;
            prop_assert!(hi - lo <= bound, "spread {} > {} with {} samples", hi - lo, bound, n);
        }
        for plan in mv.per_view.values() {
            prop_assert_eq!(plan.frame_indices.len() as u64, p.n_target);
        }
    }

    #[test]
    fn multiview_samples_inside_shared_windows(views in view_set(), p in params()) {
        let mv = sync_plans(&views, p).unwrap();
        let (origin, reference) = common_interval(&views);
        prop_assert_eq!(mv.reference_duration_s, reference);
        for (shared_idx, shared) in mv.shared_windows.iter().enumerate() {
            prop_assert!(shared.end_s() <= origin + reference + 1e-9);
            for v in &views {
                let seg = &mv.per_view[&v.view_id].segments[shared_idx];
                let half = 0.5 / v.meta.fps + 1e-9;
                for k in pats_core::sample_segment(seg.frame_start, seg.frame_end, seg.n_frames) {
                    let t = v.frame_time(k);
                    prop_assert!(t >= shared.start_s - half && t <= shared.end_s() + half);
                }
            }
        }
    }

    #[test]
    fn single_view_reduces_to_planner(m in meta(), p in params()) {
        let v = ViewMeta::new("solo", ViewRole::Ego, m);
        let mv = sync_plans(std::slice::from_ref(&v), p).unwrap();
        prop_assert_eq!(&mv.per_view["solo"], &pats_plan(m, p).unwrap());
    }
}
