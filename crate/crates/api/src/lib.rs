//! Wire types shared by the HTTP service and its clients.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct HealthResponse {
    pub status: String,
    pub version: String,
}

/// A code either named by preset or carried inline as its three file
/// bodies, so remote services never need a shared filesystem.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CodeSource {
    Preset {
        name: String,
    },
    Descriptor {
        descriptor_toml: String,
        hx_alist: String,
        hz_alist: String,
    },
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct ConstructRequest {
    /// Either a preset name...
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    /// ...or explicit family parameters: "qc" needs p and sigma, "eg" and
    /// "pg" need s.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    /// Stem for the emitted file names; defaults to the preset name or a
    /// parameter-derived stem.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basename: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ConstructResponse {
    pub family: String,
    pub n: usize,
    pub k: usize,
    pub claimed_d: Option<usize>,
    pub basename: String,
    pub descriptor_toml: String,
    pub hx_alist: String,
    pub hz_alist: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ValidateRequest {
    pub source: CodeSource,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ResidualPairReport {
    pub row_a: usize,
    pub row_b: usize,
    pub columns: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ValidateResponse {
    pub ok: bool,
    pub checks: Vec<CheckReport>,
    /// Row pairs still sharing several columns besides the appended one;
    /// for the geometry families these are exactly the mirrored rows.
    pub residual_pairs: Vec<ResidualPairReport>,
    pub family: Option<String>,
    pub n: Option<usize>,
    pub k: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DistanceRequest {
    pub source: CodeSource,
    pub w_max: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DistanceResponse {
    /// Minimum logical weight if one exists at or below `w_max`.
    pub found: Option<usize>,
    pub w_max: usize,
    pub claimed_d: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SimulationRequest {
    pub source: CodeSource,
    /// Overrides the CSV `code` column; defaults to the preset name or
    /// "custom".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub epsilons: Vec<f64>,
    pub decoder: String,
    pub success_mode: String,
    pub min_frame_errors: u64,
    pub max_trials: u64,
    pub iterations: usize,
    pub master_seed: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct JobCreated {
    pub job_id: u64,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum JobState {
    Queued,
    Running,
    Done,
    Failed,
    Cancelled,
}

impl JobState {
    pub fn is_terminal(&self) -> bool {
        matches!(self, JobState::Done | JobState::Failed | JobState::Cancelled)
    }
}

#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct JobProgress {
    pub eps_index: usize,
    pub trials: u64,
    pub frame_errors: u64,
    pub points_done: usize,
    pub total_points: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PointRow {
    pub epsilon: f64,
    pub trials: u64,
    pub frame_errors: u64,
    pub fer: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
    /// The trial budget ran out with no frame errors; `fer` is only an
    /// upper bound.
    pub zero_frame_errors: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct JobStatus {
    pub job_id: u64,
    pub state: JobState,
    pub progress: JobProgress,
    pub points: Vec<PointRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ErrorBody {
    pub error: String,
}
