//! JSON file formats for channels, splits, matrices and gluing matrices.
//!
//! Complex numbers are stored as two-element `[re, im]` arrays; matrices as
//! row-major nested lists. Serialization is deterministic: fixed field
//! order and shortest round-trip float formatting.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::KrausChannel;
use crate::error::{Error, Result};
use crate::gluing::GluingMatrix;
use crate::matrix::ComplexMatrix;
use crate::subspace::BlockSplit;

type ComplexEntry = [f64; 2];
type MatrixEntries = Vec<Vec<ComplexEntry>>;

/// On-disk form of a Kraus channel.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub source_dim: usize,
    pub target_dim: usize,
    pub kraus: Vec<MatrixEntries>,
}

/// On-disk form of a block split.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplitFile {
    pub s1_dim: usize,
    pub s2_dim: usize,
    pub t1_dim: usize,
    pub t2_dim: usize,
}

/// On-disk form of a bare complex matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    pub entries: MatrixEntries,
}

/// On-disk form of a gluing matrix together with the linearly independent
/// representations its entries refer to.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GluingMatrixFile {
    pub c: MatrixEntries,
    pub rep1: Vec<MatrixEntries>,
    pub rep2: Vec<MatrixEntries>,
}

fn entries_of(m: &ComplexMatrix) -> MatrixEntries {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| [m.get(r, c).re, m.get(r, c).im]).collect())
        .collect()
}

fn matrix_of(entries: &MatrixEntries, what: &str) -> Result<ComplexMatrix> {
    let rows = entries.len();
    if rows == 0 {
        return Err(Error::InvalidInput(format!("{what}: empty matrix")));
    }
    let cols = entries[0].len();
    if cols == 0 {
        return Err(Error::InvalidInput(format!("{what}: empty matrix row")));
    }
    let mut flat = Vec::with_capacity(rows * cols);
    for (r, row) in entries.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::InvalidInput(format!(
                "{what}: row {r} has {} entries, expected {cols}",
                row.len()
            )));
        }
        for &[re, im] in row {
            flat.push(Complex64::new(re, im));
        }
    }
    ComplexMatrix::from_rows_vec(rows, cols, flat)
        .map_err(|e| Error::InvalidInput(format!("{what}: {e}")))
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = read_to_string(path)?;
    serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

impl ChannelFile {
    pub fn from_channel(channel: &KrausChannel, name: Option<String>) -> Self {
        Self {
            name,
            source_dim: channel.source_dim(),
            target_dim: channel.target_dim(),
            kraus: channel.kraus().iter().map(entries_of).collect(),
        }
    }

    pub fn to_channel(&self) -> Result<KrausChannel> {
        let mut ops = Vec::with_capacity(self.kraus.len());
        for (i, entries) in self.kraus.iter().enumerate() {
            let m = matrix_of(entries, &format!("kraus[{i}]"))?;
            if m.rows() != self.target_dim || m.cols() != self.source_dim {
                return Err(Error::InvalidInput(format!(
                    "kraus[{i}]: is {}x{}, expected target_dim x source_dim = {}x{}",
                    m.rows(),
                    m.cols(),
                    self.target_dim,
                    self.source_dim
                )));
            }
            ops.push(m);
        }
        KrausChannel::new(self.source_dim, self.target_dim, ops)
    }
}

impl SplitFile {
    pub fn to_split(&self) -> Result<BlockSplit> {
        BlockSplit::new(self.s1_dim, self.s2_dim, self.t1_dim, self.t2_dim)
    }
}

pub fn load_channel(path: &Path) -> Result<KrausChannel> {
    parse::<ChannelFile>(path)?.to_channel()
}

pub fn save_channel(path: &Path, channel: &KrausChannel, name: Option<String>) -> Result<()> {
    write_json(path, &ChannelFile::from_channel(channel, name))
}

pub fn load_split(path: &Path) -> Result<BlockSplit> {
    parse::<SplitFile>(path)?.to_split()
}

pub fn load_matrix(path: &Path) -> Result<ComplexMatrix> {
    let file: MatrixFile = parse(path)?;
    matrix_of(&file.entries, "entries")
}

pub fn save_matrix(path: &Path, m: &ComplexMatrix) -> Result<()> {
    write_json(path, &MatrixFile { entries: entries_of(m) })
}

/// Loads a complex vector stored as a JSON list of `[re, im]` pairs.
pub fn load_vector(path: &Path) -> Result<Vec<Complex64>> {
    let raw: Vec<ComplexEntry> = parse(path)?;
    let v: Vec<Complex64> = raw.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
    if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidInput("non-finite vector entry".into()));
    }
    if v.is_empty() {
        return Err(Error::InvalidInput("empty vector".into()));
    }
    Ok(v)
}

pub fn load_gluing_matrix(path: &Path) -> Result<GluingMatrix> {
    let file: GluingMatrixFile = parse(path)?;
    let c = matrix_of(&file.c, "c")?;
    let rep = |name: &str, list: &[MatrixEntries]| -> Result<Vec<ComplexMatrix>> {
        list.iter()
            .enumerate()
            .map(|(i, e)| matrix_of(e, &format!("{name}[{i}]")))
            .collect()
    };
    Ok(GluingMatrix {
        c,
        rep1: rep("rep1", &file.rep1)?,
        rep2: rep("rep2", &file.rep2)?,
    })
}

pub fn save_gluing_matrix(path: &Path, g: &GluingMatrix) -> Result<()> {
    write_json(
        path,
        &GluingMatrixFile {
            c: entries_of(&g.c),
            rep1: g.rep1.iter().map(entries_of).collect(),
            rep2: g.rep2.iter().map(entries_of).collect(),
        },
    )
}
