//! Wire records read from manifests and written as plans.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

use pats_core::{Fallback, SamplingParams, SamplingPlan, ViewRole};

/// Rounds to the 6-decimal value that will appear on the wire.
pub fn round6(x: f64) -> f64 {
    format!("{x:.6}").parse().unwrap_or(x)
}

/// Serializes a float as a JSON number with exactly six fractional digits.
pub fn fixed6<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if !x.is_finite() {
        return Err(serde::ser::Error::custom(format!("non-finite value {x}")));
    }
    let raw = RawValue::from_string(format!("{x:.6}")).map_err(serde::ser::Error::custom)?;
    raw.serialize(s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsRecord {
    pub n_target: u64,
    pub n_segments: u64,
    #[serde(serialize_with = "fixed6")]
    pub segment_duration_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentRecord {
    #[serde(serialize_with = "fixed6")]
    pub start_s: f64,
    #[serde(serialize_with = "fixed6")]
    pub duration_s: f64,
}

/// One emitted plan. Times are stored already rounded to microseconds so the
/// JSON form parses back to an equal record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanRecord {
    pub video_id: String,
    pub frame_indices: Vec<u64>,
    pub fallback: String,
    pub params: ParamsRecord,
    pub segments: Vec<SegmentRecord>,
}

impl PlanRecord {
    pub fn from_plan(video_id: impl Into<String>, plan: &SamplingPlan) -> Self {
        Self {
            video_id: video_id.into(),
            frame_indices: plan.frame_indices.clone(),
            fallback: plan.fallback.as_str().to_owned(),
            params: ParamsRecord::from(&plan.params),
            segments: plan
                .segments
                .iter()
                .map(|w| SegmentRecord {
                    start_s: round6(w.start_s),
                    duration_s: round6(w.duration_s),
                })
                .collect(),
        }
    }

    pub fn fallback_kind(&self) -> Option<Fallback> {
        self.fallback.parse().ok()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plan records hold finite values")
    }
}

impl From<&SamplingParams> for ParamsRecord {
    fn from(p: &SamplingParams) -> Self {
        Self {
            n_target: p.n_target,
            n_segments: p.n_segments,
            segment_duration_s: round6(p.segment_duration_s),
        }
    }
}

fn role_from_str<'de, D: Deserializer<'de>>(d: D) -> Result<Option<ViewRole>, D::Error> {
    let raw: Option<String> = Option::deserialize(d)?;
    match raw.as_deref().map(|s| s.trim().to_ascii_lowercase()).as_deref() {
        None | Some("") => Ok(None),
        Some("ego") => Ok(Some(ViewRole::Ego)),
        Some("exo") => Ok(Some(ViewRole::Exo)),
        Some(other) => Err(serde::de::Error::custom(format!(
            "view_role must be `ego` or `exo`, got `{other}`"
        ))),
    }
}

/// One input row of a batch manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRecord {
    pub video_id: String,
    pub duration_s: f64,
    pub fps: f64,
    pub total_frames: u64,
    #[serde(default, deserialize_with = "role_from_str")]
    pub view_role: Option<ViewRole>,
    #[serde(default)]
    pub group_id: Option<String>,
    /// Start of this stream on the group's shared clock.
    #[serde(default)]
    pub time_offset_s: Option<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use pats_core::{pats_plan, VideoMeta};

    #[test]
    fn times_use_six_decimals() {
        let plan = pats_plan(
            VideoMeta::new(60.0, 1800, 30.0).unwrap(),
            SamplingParams::new(32, 12, 3.0).unwrap(),
        )
        .unwrap();
        let rec = PlanRecord::from_plan("clip", &plan);
        let json = rec.to_json();
        assert!(json.contains("\"segment_duration_s\":3.000000"), "{json}");
        assert!(json.contains("\"start_s\":5.181818"), "{json}");
        let back: PlanRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rec);
        assert_eq!(back.fallback_kind(), Some(Fallback::None));
    }

    #[test]
    fn keys_keep_declaration_order() {
        let plan = pats_plan(
            VideoMeta::new(10.0, 300, 30.0).unwrap(),
            SamplingParams::new(8, 2, 3.0).unwrap(),
        )
        .unwrap();
        let json = PlanRecord::from_plan("a", &plan).to_json();
        let keys = ["video_id", "frame_indices", "fallback", "params", "segments"];
        let pos: Vec<usize> = keys.iter().map(|k| json.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn manifest_optional_fields() {
        let r: ManifestRecord = serde_json::from_str(
            r#"{"video_id":"a","duration_s":1.5,"fps":30,"total_frames":45,"view_role":"EGO","group_id":"g"}"#,
        )
        .unwrap();
        assert_eq!(r.view_role, Some(ViewRole::Ego));
        assert_eq!(r.group_id.as_deref(), Some("g"));
        assert_eq!(r.time_offset_s, None);
        assert!(serde_json::from_str::<ManifestRecord>(
            r#"{"video_id":"a","duration_s":1,"fps":30,"total_frames":30,"view_role":"top"}"#
        )
        .is_err());
    }
}
