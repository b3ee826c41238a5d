//! Manifest ingestion and per-record planning for `batch`.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use thiserror::Error;

use pats_core::{pats_plan, sync_plans, SamplingParams, VideoMeta, ViewMeta, ViewRole};

use crate::records::{ManifestRecord, PlanRecord};

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("cannot read manifest {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse manifest header: {0}")]
    Header(String),
    #[error("unsupported manifest extension for {0} (expected .csv, .jsonl, .ndjson or .json)")]
    Format(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ManifestFormat {
    Csv,
    JsonLines,
}

impl ManifestFormat {
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "csv" => Some(Self::Csv),
            "jsonl" | "ndjson" | "json" => Some(Self::JsonLines),
            _ => None,
        }
    }
}

/// A manifest row together with its 1-based line number in the file.
#[derive(Debug, Clone)]
pub struct Entry {
    pub line: usize,
    pub record: Result<ManifestRecord, String>,
}

impl Entry {
    fn label(&self) -> String {
        match &self.record {
            Ok(r) => format!("line {} ({})", self.line, r.video_id),
            Err(_) => format!("line {}", self.line),
        }
    }
}

pub fn read_manifest(path: &Path) -> Result<Vec<Entry>, ManifestError> {
    let format = ManifestFormat::from_path(path)
        .ok_or_else(|| ManifestError::Format(path.display().to_string()))?;
    let text = fs::read_to_string(path).map_err(|source| ManifestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_manifest(&text, format)
}

pub fn parse_manifest(text: &str, format: ManifestFormat) -> Result<Vec<Entry>, ManifestError> {
    let mut entries = match format {
        ManifestFormat::Csv => parse_csv(text)?,
        ManifestFormat::JsonLines => parse_json_lines(text),
    };
    mark_duplicates(&mut entries);
    Ok(entries)
}

fn parse_csv(text: &str) -> Result<Vec<Entry>, ManifestError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| ManifestError::Header(e.to_string()))?
        .clone();
    Ok(reader
        .records()
        .enumerate()
        .map(|(i, row)| {
            let line = row
                .as_ref()
                .ok()
                .and_then(|r| r.position())
                .map(|p| p.line() as usize)
                .unwrap_or(i + 2);
            let record = row
                .map_err(|e| e.to_string())
                .and_then(|r| {
                    r.deserialize::<ManifestRecord>(Some(&headers))
                        .map_err(|e| e.to_string())
                })
                .map(normalize);
            Entry { line, record }
        })
        .collect())
}

fn parse_json_lines(text: &str) -> Vec<Entry> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| Entry {
            line: i + 1,
            record: serde_json::from_str::<ManifestRecord>(l)
                .map(normalize)
                .map_err(|e| e.to_string()),
        })
        .collect()
}

fn normalize(mut r: ManifestRecord) -> ManifestRecord {
    r.video_id = r.video_id.trim().to_owned();
    r.group_id = r.group_id.map(|g| g.trim().to_owned()).filter(|g| !g.is_empty());
    r
}

fn mark_duplicates(entries: &mut [Entry]) {
    let mut seen = HashSet::new();
    for e in entries.iter_mut() {
        if let Ok(r) = &e.record {
            if r.video_id.is_empty() {
                e.record = Err("video_id must be non-empty".into());
            } else if !seen.insert(r.video_id.clone()) {
                e.record = Err(format!("duplicate video_id `{}`", r.video_id));
            }
        }
    }
}

fn video_meta(r: &ManifestRecord) -> Result<VideoMeta, String> {
    VideoMeta::new(r.duration_s, r.total_frames, r.fps).map_err(|e| e.to_string())
}

/// Outcome of a batch run, one slot per manifest entry in input order.
#[derive(Debug)]
pub struct BatchOutcome {
    pub results: Vec<Result<PlanRecord, String>>,
    pub labels: Vec<String>,
}

impl BatchOutcome {
    pub fn plans(&self) -> impl Iterator<Item = &PlanRecord> {
        self.results.iter().filter_map(|r| r.as_ref().ok())
    }

    pub fn failures(&self) -> impl Iterator<Item = (&str, &str)> {
        self.labels
            .iter()
            .zip(&self.results)
            .filter_map(|(l, r)| r.as_ref().err().map(|e| (l.as_str(), e.as_str())))
    }
}

/// Plans every entry independently; records are processed in parallel.
pub fn plan_independent(entries: &[Entry], params: SamplingParams) -> BatchOutcome {
    let results = entries
        .par_iter()
        .map(|e| {
            let r = e.record.as_ref().map_err(Clone::clone)?;
            let plan = pats_plan(video_meta(r)?, params).map_err(|e| e.to_string())?;
            Ok(PlanRecord::from_plan(&r.video_id, &plan))
        })
        .collect();
    BatchOutcome {
        results,
        labels: entries.iter().map(Entry::label).collect(),
    }
}

/// Plans views sharing a `group_id` together on a common clock. Entries
/// without a group form a group of their own.
pub fn plan_multiview(entries: &[Entry], params: SamplingParams) -> BatchOutcome {
    let mut results: Vec<Option<Result<PlanRecord, String>>> = vec![None; entries.len()];
    let mut groups: Vec<Vec<(usize, ViewMeta)>> = Vec::new();
    let mut group_of: HashMap<String, usize> = HashMap::new();

    for (i, e) in entries.iter().enumerate() {
        let view = e.record.clone().and_then(|r| {
            let meta = video_meta(&r)?;
            let view = ViewMeta::new(r.video_id.clone(), r.view_role.unwrap_or(ViewRole::Exo), meta)
                .with_offset(r.time_offset_s.unwrap_or(0.0));
            Ok((r.group_id.unwrap_or_else(|| format!("\u{0}{}", r.video_id)), view))
        });
        match view {
            Ok((key, view)) => {
                let next = groups.len();
                let g = *group_of.entry(key).or_insert(next);
                if g == next {
                    groups.push(Vec::new());
                }
                groups[g].push((i, view));
            }
            Err(msg) => results[i] = Some(Err(msg)),
        }
    }

    let planned: Vec<Vec<(usize, Result<PlanRecord, String>)>> = groups
        .par_iter()
        .map(|members| {
            let views: Vec<ViewMeta> = members.iter().map(|(_, v)| v.clone()).collect();
            match sync_plans(&views, params) {
                Ok(mv) => members
                    .iter()
                    .map(|(i, v)| (*i, Ok(PlanRecord::from_plan(&v.view_id, &mv.per_view[&v.view_id]))))
                    .collect(),
                Err(err) => members
                    .iter()
                    .map(|(i, _)| (*i, Err(format!("group planning failed: {err}"))))
                    .collect(),
            }
        })
        .collect();
    for (i, r) in planned.into_iter().flatten() {
        results[i] = Some(r);
    }

    BatchOutcome {
        results: results
            .into_iter()
            .map(|r| r.expect("every entry is planned or failed"))
            .collect(),
        labels: entries.iter().map(Entry::label).collect(),
    }
}
