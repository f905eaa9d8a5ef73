//! Code descriptor files: a small TOML document holding family, parameters,
//! and references to the two alist matrices, with invariants re-validated
//! on load.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::alist;
use crate::binmat::BinaryMatrix;
use crate::css::{ConstructionParams, CssCode};
use crate::error::{Error, Result};
use crate::fg::GeometryKind;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct DescriptorDoc {
    format_version: u32,
    family: String,
    n: usize,
    k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    claimed_d: Option<usize>,
    hx_file: String,
    hz_file: String,
    params: ParamsDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ParamsDoc {
    Qc { p: u64, sigma: u64 },
    Fg { kind: String, s: usize },
}

/// The descriptor and matrix files as strings, ready to be written as
/// `<basename>.toml`, `<basename>.hx.alist`, `<basename>.hz.alist`.
#[derive(Clone, Debug)]
pub struct DescriptorParts {
    pub basename: String,
    pub descriptor_toml: String,
    pub hx_alist: String,
    pub hz_alist: String,
}

impl DescriptorParts {
    pub fn descriptor_file(&self) -> String {
        format!("{}.toml", self.basename)
    }

    pub fn hx_file(&self) -> String {
        format!("{}.hx.alist", self.basename)
    }

    pub fn hz_file(&self) -> String {
        format!("{}.hz.alist", self.basename)
    }
}

/// Serialize a code into its three file bodies without touching disk.
pub fn render_code(code: &CssCode, basename: &str) -> Result<DescriptorParts> {
    let params = match code.params() {
        ConstructionParams::QuasiCyclic { p, sigma } => ParamsDoc::Qc { p, sigma },
        ConstructionParams::Geometry { kind, s } => ParamsDoc::Fg {
            kind: kind.as_str().to_string(),
            s,
        },
        ConstructionParams::Explicit => {
            return Err(Error::Descriptor(
                "explicitly assembled codes have no descriptor form".into(),
            ))
        }
    };
    let doc = DescriptorDoc {
        format_version: FORMAT_VERSION,
        family: code.family().to_string(),
        n: code.n(),
        k: code.k(),
        claimed_d: code.claimed_d(),
        hx_file: format!("{basename}.hx.alist"),
        hz_file: format!("{basename}.hz.alist"),
        params,
    };
    let descriptor_toml = toml::to_string(&doc)
        .map_err(|e| Error::Descriptor(format!("serialization failed: {e}")))?;
    Ok(DescriptorParts {
        basename: basename.to_string(),
        descriptor_toml,
        hx_alist: alist::to_alist(code.hx()),
        hz_alist: alist::to_alist(code.hz()),
    })
}

/// Write `basename.toml` plus the two alist files into `dir`; returns the
/// descriptor path.
pub fn save_code(code: &CssCode, dir: &Path, basename: &str) -> Result<PathBuf> {
    let parts = render_code(code, basename)?;
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(parts.hx_file()), &parts.hx_alist)?;
    std::fs::write(dir.join(parts.hz_file()), &parts.hz_alist)?;
    let path = dir.join(parts.descriptor_file());
    std::fs::write(&path, &parts.descriptor_toml)?;
    Ok(path)
}

/// Read a descriptor and its matrices, re-running every assembly check.
pub fn load_code(descriptor_path: &Path) -> Result<CssCode> {
    let text = std::fs::read_to_string(descriptor_path)?;
    let (hx_file, hz_file) = referenced_files(&text)?;
    let base = descriptor_path.parent().unwrap_or_else(|| Path::new("."));
    let hx_text = std::fs::read_to_string(base.join(hx_file))?;
    let hz_text = std::fs::read_to_string(base.join(hz_file))?;
    load_code_from_parts(&text, &hx_text, &hz_text)
}

/// Same checks as `load_code`, but over in-memory file bodies.
pub fn load_code_from_parts(
    descriptor_toml: &str,
    hx_alist: &str,
    hz_alist: &str,
) -> Result<CssCode> {
    parse_parts(descriptor_toml, hx_alist, hz_alist)?.assemble()
}

/// The alist file names a descriptor points at, relative to its own
/// directory.
pub fn referenced_files(descriptor_toml: &str) -> Result<(String, String)> {
    let doc = parse_doc(descriptor_toml)?;
    Ok((doc.hx_file, doc.hz_file))
}

/// A descriptor whose three file bodies parsed cleanly and agree on
/// dimensions; code invariants have not been re-checked yet. Separating
/// the stages lets callers distinguish corrupt files from a code whose
/// matrices fail re-validation.
pub struct ParsedDescriptor {
    params: ConstructionParams,
    k: usize,
    claimed_d: Option<usize>,
    hx: BinaryMatrix,
    hz: BinaryMatrix,
}

/// Syntax and consistency only: TOML shape, alist shape, family/params
/// agreement, and column counts against the declared n.
pub fn parse_parts(
    descriptor_toml: &str,
    hx_alist: &str,
    hz_alist: &str,
) -> Result<ParsedDescriptor> {
    let doc = parse_doc(descriptor_toml)?;
    let params = match (&doc.params, doc.family.as_str()) {
        (&ParamsDoc::Qc { p, sigma }, "qc") => ConstructionParams::QuasiCyclic { p, sigma },
        (ParamsDoc::Fg { kind, s }, family) => {
            let kind = match (kind.as_str(), family) {
                ("euclidean", "eg") => GeometryKind::Euclidean,
                ("projective", "pg") => GeometryKind::Projective,
                _ => {
                    return Err(Error::Descriptor(format!(
                        "family '{family}' does not match params kind '{kind}'"
                    )))
                }
            };
            ConstructionParams::Geometry { kind, s: *s }
        }
        (_, family) => {
            return Err(Error::Descriptor(format!(
                "family '{family}' does not match the params table"
            )))
        }
    };
    let hx = alist::from_alist(hx_alist)?;
    let hz = alist::from_alist(hz_alist)?;
    for (name, m) in [("H_X", &hx), ("H_Z", &hz)] {
        if m.cols() != doc.n {
            return Err(Error::Descriptor(format!(
                "descriptor says n = {} but {name} has {} columns",
                doc.n,
                m.cols()
            )));
        }
    }
    Ok(ParsedDescriptor {
        params,
        k: doc.k,
        claimed_d: doc.claimed_d,
        hx,
        hz,
    })
}

impl ParsedDescriptor {
    /// Re-run the assembly invariants (orthogonality relation, recomputed
    /// dimension) on the parsed matrices.
    pub fn assemble(self) -> Result<CssCode> {
        let code = CssCode::from_check_matrices(self.hx, self.hz, self.params, self.claimed_d)?;
        if code.k() != self.k {
            return Err(Error::Descriptor(format!(
                "descriptor says k = {} but the matrices give k = {}",
                self.k,
                code.k()
            )));
        }
        Ok(code)
    }
}

fn parse_doc(text: &str) -> Result<DescriptorDoc> {
    let doc: DescriptorDoc =
        toml::from_str(text).map_err(|e| Error::Descriptor(format!("parse failed: {e}")))?;
    if doc.format_version != FORMAT_VERSION {
        return Err(Error::Descriptor(format!(
            "unsupported format_version {}",
            doc.format_version
        )));
    }
    Ok(doc)
}
