//! Named code presets so callers never bootstrap descriptors by hand.

use crate::css::{ConstructionParams, CssCode};
use crate::error::{Error, Result};
use crate::fg::{construct_eg, construct_pg, GeometryKind};
use crate::qc::{choose_coset_representatives, qc_pair};

#[derive(Clone, Copy, Debug)]
pub struct Preset {
    pub name: &'static str,
    pub params: ConstructionParams,
    /// Published distance where available; metadata only.
    pub claimed_d: Option<usize>,
    pub expected_n: usize,
    pub expected_k: usize,
}

/// The ten published codes plus the projective variants. The projective
/// (n, k) values are computed facts of the construction: the incidence
/// rank is 3^s + 1, which costs one logical qubit relative to the
/// same-field Euclidean code rather than gaining one; their distances are
/// left unclaimed.
pub const PRESETS: [Preset; 15] = [
    qc("q1", 7, 3, 6, 50, 12),
    qc("q2", 11, 2, 12, 122, 20),
    qc("q3", 13, 2, 14, 170, 24),
    qc("q4", 17, 3, 18, 290, 32),
    qc("q5", 19, 3, 20, 362, 36),
    fg("e1", GeometryKind::Euclidean, 1, Some(3), 7, 1),
    fg("e2", GeometryKind::Euclidean, 2, Some(5), 21, 3),
    fg("e3", GeometryKind::Euclidean, 3, Some(9), 73, 19),
    fg("e4", GeometryKind::Euclidean, 4, Some(17), 273, 111),
    fg("e5", GeometryKind::Euclidean, 5, Some(33), 1057, 571),
    fg("pg1", GeometryKind::Projective, 1, None, 8, 0),
    fg("pg2", GeometryKind::Projective, 2, None, 22, 2),
    fg("pg3", GeometryKind::Projective, 3, None, 74, 18),
    fg("pg4", GeometryKind::Projective, 4, None, 274, 110),
    fg("pg5", GeometryKind::Projective, 5, None, 1058, 570),
];

const fn qc(name: &'static str, p: u64, sigma: u64, d: usize, n: usize, k: usize) -> Preset {
    Preset {
        name,
        params: ConstructionParams::QuasiCyclic { p, sigma },
        claimed_d: Some(d),
        expected_n: n,
        expected_k: k,
    }
}

const fn fg(
    name: &'static str,
    kind: GeometryKind,
    s: usize,
    claimed_d: Option<usize>,
    n: usize,
    k: usize,
) -> Preset {
    Preset {
        name,
        params: ConstructionParams::Geometry { kind, s },
        claimed_d,
        expected_n: n,
        expected_k: k,
    }
}

pub fn resolve(name: &str) -> Result<&'static Preset> {
    let lower = name.to_ascii_lowercase();
    PRESETS
        .iter()
        .find(|p| p.name == lower)
        .ok_or_else(|| Error::UnknownPreset(name.to_string()))
}

/// Build a preset's code from scratch.
pub fn build(name: &str) -> Result<CssCode> {
    let preset = resolve(name)?;
    build_from_params(preset.params, preset.claimed_d)
}

pub fn build_from_params(
    params: ConstructionParams,
    claimed_d: Option<usize>,
) -> Result<CssCode> {
    match params {
        ConstructionParams::QuasiCyclic { p, sigma } => {
            let qp = choose_coset_representatives(p, sigma)?;
            let (h1, h2) = qc_pair(&qp)?;
            CssCode::assemble(&h1, &h2, params, claimed_d)
        }
        ConstructionParams::Geometry { kind, s } => {
            let inc = match kind {
                GeometryKind::Euclidean => construct_eg(s)?,
                GeometryKind::Projective => construct_pg(s)?,
            };
            CssCode::from_incidence(&inc, claimed_d)
        }
        ConstructionParams::Explicit => Err(Error::UnknownPreset("explicit".into())),
    }
}
