//! Parameter grid enumeration and the published reference configurations.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{PatsError, Result};
use crate::sampling::SamplingParams;
use crate::scalar::Scalar;

/// Frames of real time observed per second inside the windows:
/// `n_target / (n_segments * segment_duration_s)`.
pub fn effective_fps<S: Scalar>(params: &SamplingParams<S>) -> S {
    S::from_count(params.n_target) / (S::from_count(params.n_segments) * params.segment_duration_s)
}

/// Axes of the parameter sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub frame_counts: BTreeSet<u64>,
    pub segment_counts: BTreeSet<u64>,
    /// Kept sorted and free of duplicates by [`GridSpec::new`].
    pub durations_s: Vec<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            frame_counts: [24, 32].into(),
            segment_counts: [2, 6, 8, 12].into(),
            durations_s: vec![1.0, 3.0],
        }
    }
}

impl GridSpec {
    pub fn new(
        frame_counts: impl IntoIterator<Item = u64>,
        segment_counts: impl IntoIterator<Item = u64>,
        durations_s: impl IntoIterator<Item = f64>,
    ) -> Result<Self> {
        let frame_counts: BTreeSet<u64> = frame_counts.into_iter().collect();
        let segment_counts: BTreeSet<u64> = segment_counts.into_iter().collect();
        let mut durations_s: Vec<f64> = durations_s.into_iter().collect();
        if frame_counts.contains(&0) {
            return Err(PatsError::param("frames", "frame counts must be positive"));
        }
        if segment_counts.contains(&0) {
            return Err(PatsError::param("segments", "segment counts must be positive"));
        }
        if durations_s.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
            return Err(PatsError::param("durations", "durations must be positive and finite"));
        }
        durations_s.sort_by(f64::total_cmp);
        durations_s.dedup();
        Ok(Self {
            frame_counts,
            segment_counts,
            durations_s,
        })
    }
}

/// Cartesian product of the axes, ordered by frames, then segments, then
/// duration. Triples with more segments than frames are dropped.
pub fn enumerate_grid(spec: &GridSpec) -> Vec<SamplingParams<f64>> {
    let mut out = Vec::new();
    for &n_target in &spec.frame_counts {
        for &n_segments in spec.segment_counts.iter().filter(|&&s| s <= n_target) {
            for &segment_duration_s in &spec.durations_s {
                out.push(SamplingParams {
                    n_target,
                    n_segments,
                    segment_duration_s,
                });
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViewConfig {
    Ego,
    Exos,
    EgoExos,
    All,
}

/// A configuration the published sweep reported, with the rate it implies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scenario: String,
    pub views: ViewConfig,
    /// `None` when no single configuration won.
    pub params: Option<SamplingParams<f64>>,
    /// Rate as printed in the source table, two decimals.
    pub effective_fps: Option<f64>,
    pub note: String,
}

impl ScenarioConfig {
    /// Whether the printed rate agrees with the parameters within 0.01.
    pub fn fps_matches(&self) -> bool {
        match (&self.params, self.effective_fps) {
            (Some(p), Some(fps)) => (effective_fps(p) - fps).abs() <= 0.01,
            (None, None) => true,
            _ => false,
        }
    }
}

struct Row {
    key: &'static str,
    views: ViewConfig,
    params: Option<(u64, u64, f64)>,
    fps: Option<f64>,
    note: &'static str,
}

impl Row {
    fn to_config(&self) -> ScenarioConfig {
        ScenarioConfig {
            scenario: self.key.to_owned(),
            views: self.views,
            params: self.params.map(|(n_target, n_segments, segment_duration_s)| SamplingParams {
                n_target,
                n_segments,
                segment_duration_s,
            }),
            effective_fps: self.fps,
            note: self.note.to_owned(),
        }
    }
}

const fn row(
    key: &'static str,
    views: ViewConfig,
    params: Option<(u64, u64, f64)>,
    fps: Option<f64>,
    note: &'static str,
) -> Row {
    Row {
        key,
        views,
        params,
        fps,
        note,
    }
}

/// Best configuration per scenario.
const BEST: [Row; 6] = [
    row("basketball", ViewConfig::EgoExos, Some((32, 2, 3.0)), Some(5.33), "Rapid sampling, minimal fragmentation"),
    row("cooking", ViewConfig::Exos, Some((32, 8, 1.0)), Some(4.00), "High-frequency, external views"),
    row("dancing", ViewConfig::EgoExos, Some((32, 8, 1.0)), Some(4.00), "High-frequency"),
    row("music", ViewConfig::Ego, Some((32, 12, 3.0)), Some(0.89), "Fine-grained, egocentric capture"),
    row("bouldering", ViewConfig::Ego, Some((32, 2, 3.0)), Some(5.33), "Rapid sampling, proprioceptive focus"),
    row("soccer", ViewConfig::All, None, None, "Consistent across configs; 24/32 frames, various segment counts, 3 s windows"),
];

/// Every configuration run in the published sweep, grouped by view setup.
const SWEEP: [Row; 12] = [
    row("ego", ViewConfig::Ego, Some((24, 6, 3.0)), Some(1.33), ""),
    row("ego", ViewConfig::Ego, Some((32, 2, 3.0)), Some(5.33), "Bouldering specialist"),
    row("ego", ViewConfig::Ego, Some((32, 8, 1.0)), Some(4.00), ""),
    row("ego", ViewConfig::Ego, Some((32, 12, 3.0)), Some(0.89), "Music specialist"),
    row("exos", ViewConfig::Exos, Some((24, 6, 3.0)), Some(1.33), ""),
    row("exos", ViewConfig::Exos, Some((32, 2, 3.0)), Some(5.33), ""),
    row("exos", ViewConfig::Exos, Some((32, 8, 1.0)), Some(4.00), "Cooking specialist"),
    row("exos", ViewConfig::Exos, Some((32, 12, 3.0)), Some(0.89), ""),
    row("ego_exos", ViewConfig::EgoExos, Some((24, 6, 3.0)), Some(1.33), ""),
    row("ego_exos", ViewConfig::EgoExos, Some((32, 2, 3.0)), Some(5.33), "Basketball specialist"),
    row("ego_exos", ViewConfig::EgoExos, Some((32, 8, 1.0)), Some(4.00), "Dancing specialist"),
    row("ego_exos", ViewConfig::EgoExos, Some((32, 12, 3.0)), Some(0.89), ""),
];

pub fn scenario_keys() -> Vec<&'static str> {
    BEST.iter().map(|r| r.key).collect()
}

/// Looks up a scenario, ignoring ASCII case and surrounding whitespace.
pub fn best_config(scenario: &str) -> Result<ScenarioConfig> {
    let key = scenario.trim().to_ascii_lowercase();
    BEST.iter()
        .find(|r| r.key == key)
        .map(Row::to_config)
        .ok_or_else(|| PatsError::UnknownScenario(scenario.to_owned(), scenario_keys().join(", ")))
}

pub fn best_configs() -> Vec<ScenarioConfig> {
    BEST.iter().map(Row::to_config).collect()
}

/// Sweep rows; `scenario` holds the view group.
pub fn sweep_configs() -> Vec<ScenarioConfig> {
    SWEEP.iter().map(Row::to_config).collect()
}

/// Both tables in the layout of the shipped `reference_tables.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceTables {
    pub sweep: Vec<ScenarioConfig>,
    pub best: Vec<ScenarioConfig>,
}

pub fn reference_tables() -> ReferenceTables {
    ReferenceTables {
        sweep: sweep_configs(),
        best: best_configs(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64, s: u64, d: f64) -> SamplingParams<f64> {
        SamplingParams::new(n, s, d).unwrap()
    }

    #[test]
    fn fps_examples() {
        for (params, want) in [
            (p(32, 2, 3.0), 5.33),
            (p(32, 8, 1.0), 4.00),
            (p(32, 12, 3.0), 0.89),
            (p(24, 6, 3.0), 1.33),
        ] {
            assert!((effective_fps(&params) - want).abs() <= 0.01);
        }
    }

    #[test]
    fn default_grid() {
        let grid = enumerate_grid(&GridSpec::default());
        assert_eq!(grid.len(), 16);
        assert_eq!(grid[0], p(24, 2, 1.0));
        assert_eq!(grid[15], p(32, 12, 3.0));
        assert!(grid.iter().all(|g| g.n_segments <= g.n_target));
    }

    #[test]
    fn filtered_and_singleton_grids() {
        let empty = GridSpec::new([8], [12], [1.0]).unwrap();
        assert!(enumerate_grid(&empty).is_empty());
        let single = GridSpec::new([32], [2], [3.0]).unwrap();
        assert_eq!(enumerate_grid(&single), vec![p(32, 2, 3.0)]);
    }

    #[test]
    fn grid_spec_rejects_nonpositive() {
        assert!(GridSpec::new([0], [2], [1.0]).is_err());
        assert!(GridSpec::new([8], [0], [1.0]).is_err());
        assert!(GridSpec::new([8], [2], [-1.0]).is_err());
        let dedup = GridSpec::new([8], [2], [3.0, 1.0, 3.0]).unwrap();
        assert_eq!(dedup.durations_s, vec![1.0, 3.0]);
    }

    #[test]
    fn lookup() {
        let b = best_config("Basketball").unwrap();
        assert_eq!(b.views, ViewConfig::EgoExos);
        assert_eq!(b.params, Some(p(32, 2, 3.0)));
        let m = best_config("music").unwrap();
        assert_eq!((m.views, m.params), (ViewConfig::Ego, Some(p(32, 12, 3.0))));
        let soccer = best_config("soccer").unwrap();
        assert_eq!(soccer.views, ViewConfig::All);
        assert!(soccer.params.is_none());
        match best_config("tennis") {
            Err(PatsError::UnknownScenario(_, keys)) => assert!(keys.contains("bouldering")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn stored_rates_agree() {
        assert!(best_configs().iter().all(ScenarioConfig::fps_matches));
        assert!(sweep_configs().iter().all(ScenarioConfig::fps_matches));
    }
}
