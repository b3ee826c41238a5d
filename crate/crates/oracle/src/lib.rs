//! Brute-force reference sampler.
//!
//! Written independently of `pats-core`: plain `f64`, index loops, no shared
//! helpers. Tests compare the production planner against this line by line.

/// Which branch the reference took.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefFallback {
    None,
    InsufficientDuration,
    InsufficientFrames,
    MinimalSegmentDuration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefPlan {
    pub indices: Vec<u64>,
    pub fallback: RefFallback,
    /// `(start_s, frame_start, frame_end, n_frames)` per segment.
    pub windows: Vec<(f64, u64, u64, u64)>,
}

fn floor_u64(x: f64) -> u64 {
    if x <= 0.0 {
        0
    } else {
        x.floor() as u64
    }
}

/// Evenly spaced reals from `a` to `b` inclusive, floored.
fn floored_linspace(a: f64, b: f64, n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    if n == 1 {
        out.push(floor_u64(a));
        return out;
    }
    let step = (b - a) / (n - 1) as f64;
    let mut i = 0;
    while i < n {
        let v = if i == n - 1 { b } else { a + i as f64 * step };
        out.push(floor_u64(v));
        i += 1;
    }
    out
}

/// Exact-count repair: even positional subsampling or cyclic repetition.
fn repair(mut xs: Vec<u64>, want: u64) -> Vec<u64> {
    let have = xs.len() as u64;
    if have > want {
        xs.sort();
        let mut picked = Vec::new();
        for j in 0..want {
            let pos = if want == 1 { 0 } else { j * (have - 1) / (want - 1) };
            picked.push(xs[pos as usize]);
        }
        picked
    } else {
        let raw = xs.clone();
        let mut k = 0;
        while (xs.len() as u64) < want {
            xs.push(raw[((have + k) % have) as usize]);
            k += 1;
        }
        xs.sort();
        xs
    }
}

/// Whole-video uniform sampling used by every fallback.
pub fn reference_uniform(total_frames: u64, n_target: u64) -> Vec<u64> {
    if total_frames == 0 {
        return vec![0; n_target as usize];
    }
    if total_frames >= n_target {
        floored_linspace(0.0, (total_frames - 1) as f64, n_target)
    } else {
        let all: Vec<u64> = (0..total_frames).collect();
        repair(all, n_target)
    }
}

/// Full reference planner.
pub fn reference_plan(
    duration_s: f64,
    fps: f64,
    total_frames: u64,
    n_target: u64,
    n_segments: u64,
    segment_duration_s: f64,
) -> RefPlan {
    let fallback = |kind| RefPlan {
        indices: reference_uniform(total_frames, n_target),
        fallback: kind,
        windows: Vec::new(),
    };
    if duration_s <= 0.0 {
        return fallback(RefFallback::InsufficientDuration);
    }
    if total_frames < n_target {
        return fallback(RefFallback::InsufficientFrames);
    }

    let cap = 0.8 * duration_s / n_segments as f64;
    let d_eff = if segment_duration_s < cap { segment_duration_s } else { cap };
    if d_eff < 0.5 {
        return fallback(RefFallback::MinimalSegmentDuration);
    }

    let t_max = if duration_s - d_eff > 0.0 { duration_s - d_eff } else { 0.0 };

    let mut raw = Vec::new();
    let mut windows = Vec::new();
    for i in 0..n_segments {
        let t_start = if n_segments == 1 {
            0.0
        } else {
            i as f64 * (t_max / (n_segments - 1) as f64)
        };
        let mut count = n_target / n_segments;
        if i < n_target % n_segments {
            count += 1;
        }

        let mut fs = floor_u64(t_start * fps);
        let mut fe = floor_u64((t_start + d_eff) * fps);
        if fe > total_frames {
            fe = total_frames;
        }
        if fe <= fs {
            if fs >= total_frames {
                fs = total_frames - 1;
            }
            fe = if fs + 1 < total_frames { fs + 1 } else { total_frames };
        }
        windows.push((t_start, fs, fe, count));

        if count == 0 {
            continue;
        }
        if count == 1 {
            raw.push((fs + fe) / 2);
        } else {
            raw.extend(floored_linspace(fs as f64, (fe - 1) as f64, count));
        }
    }

    let hi = total_frames - 1;
    let clipped: Vec<u64> = raw.into_iter().map(|x| if x > hi { hi } else { x }).collect();
    let mut indices = repair(clipped, n_target);
    indices.sort();
    RefPlan {
        indices,
        fallback: RefFallback::None,
        windows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example() {
        let p = reference_plan(10.0, 30.0, 300, 8, 2, 3.0);
        assert_eq!(p.indices, vec![0, 29, 59, 89, 210, 239, 269, 299]);
        assert_eq!(p.fallback, RefFallback::None);
    }

    #[test]
    fn uniform_cases() {
        assert_eq!(reference_uniform(300, 4), vec![0, 99, 199, 299]);
        assert_eq!(reference_uniform(2, 4), vec![0, 0, 1, 1]);
        assert_eq!(reference_uniform(0, 4), vec![0, 0, 0, 0]);
    }
}
