//! JSON forms of matrices, group elements and canonical points.
//!
//! Rational values are always strings (`"p/q"` or `"p"`), and entries are
//! written in lexicographic `(i, j)` order so output is byte-stable.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blocks::{BlockError, BlockStructure, Root};
use crate::canonical::CanonicalPoint;
use crate::group::{GroupElement, GroupError};
use crate::linalg::{format_scalar, parse_scalar, Scalar, ScalarParseError};
use crate::nilrad::{NilradMatrix, SupportError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Blocks(#[from] BlockError),
    #[error("entry ({i},{j}): {source}")]
    Value {
        i: usize,
        j: usize,
        source: ScalarParseError,
    },
    #[error(transparent)]
    Support(#[from] SupportError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("duplicate entry at ({i},{j})")]
    Duplicate { i: usize, j: usize },
    #[error("file blocks {file} disagree with requested blocks {requested}")]
    BlocksMismatch { file: String, requested: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    pub i: usize,
    pub j: usize,
    pub value: String,
}

impl EntryJson {
    fn new(r: Root, v: &Scalar) -> Self {
        EntryJson {
            i: r.row,
            j: r.col,
            value: format_scalar(v),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub blocks: Vec<usize>,
    pub entries: Vec<EntryJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalPointJson {
    pub blocks: Vec<usize>,
    pub coeffs: Vec<EntryJson>,
}

fn parse_entries(entries: &[EntryJson]) -> Result<Vec<(Root, Scalar)>, IoError> {
    let mut seen = std::collections::BTreeSet::new();
    entries
        .iter()
        .map(|e| {
            if !seen.insert((e.i, e.j)) {
                return Err(IoError::Duplicate { i: e.i, j: e.j });
            }
            let v = parse_scalar(&e.value).map_err(|source| IoError::Value {
                i: e.i,
                j: e.j,
                source,
            })?;
            Ok((Root::new(e.i, e.j), v))
        })
        .collect()
}

fn check_position(bs: &BlockStructure, r: Root) -> Result<(), IoError> {
    if r.row == 0 || r.col == 0 || r.row > bs.n() || r.col > bs.n() || !bs.in_nilradical(r) {
        return Err(SupportError::OutsideNilradical {
            root: r,
            blocks: bs.to_string(),
        }
        .into());
    }
    Ok(())
}

pub fn matrix_to_json(x: &NilradMatrix) -> MatrixFile {
    MatrixFile {
        blocks: x.blocks().sizes().to_vec(),
        entries: x.entries().iter().map(|(r, v)| EntryJson::new(*r, v)).collect(),
    }
}

/// Parses a matrix file. Every listed position must lie in the nilradical,
/// even when its value is zero.
pub fn matrix_from_json(text: &str) -> Result<NilradMatrix, IoError> {
    let file: MatrixFile = serde_json::from_str(text)?;
    let bs = BlockStructure::new(file.blocks)?;
    let entries = parse_entries(&file.entries)?;
    for (r, _) in &entries {
        check_position(&bs, *r)?;
    }
    Ok(NilradMatrix::from_entries(&bs, entries)?)
}

pub fn group_to_json(g: &GroupElement) -> Vec<EntryJson> {
    g.entries().iter().map(|(r, v)| EntryJson::new(*r, v)).collect()
}

pub fn group_from_json(text: &str, n: usize) -> Result<GroupElement, IoError> {
    let entries: Vec<EntryJson> = serde_json::from_str(text)?;
    Ok(GroupElement::from_entries(n, parse_entries(&entries)?)?)
}

pub fn point_to_json(p: &CanonicalPoint) -> CanonicalPointJson {
    CanonicalPointJson {
        blocks: p.bs.sizes().to_vec(),
        coeffs: p.coeffs.iter().map(|(r, v)| EntryJson::new(*r, v)).collect(),
    }
}

pub fn point_from_json(text: &str) -> Result<CanonicalPoint, IoError> {
    let file: CanonicalPointJson = serde_json::from_str(text)?;
    let bs = BlockStructure::new(file.blocks)?;
    let coeffs = parse_entries(&file.coeffs)?;
    for (r, _) in &coeffs {
        check_position(&bs, *r)?;
    }
    Ok(CanonicalPoint {
        bs,
        coeffs: coeffs.into_iter().collect(),
    })
}
