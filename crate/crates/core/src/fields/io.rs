//! `FLD1` binary field files.
//!
//! Layout: the magic `FLD1\0\0\0\0`, then little-endian `u32` dimension,
//! one `u32` size per axis, a `u32` component count, and finally the
//! row-major `f64` samples of every component in turn.

use std::io::{Read, Write};
use std::path::Path;

use super::field::{ScalarField, VectorField};
use super::grid::Grid;
use crate::error::{Error, Result};

pub const MAGIC: [u8; 8] = *b"FLD1\0\0\0\0";

/// Contents of a field file: a grid and any number of scalar components.
#[derive(Debug, Clone)]
pub struct FieldFile {
    pub grid: Grid,
    pub components: Vec<ScalarField>,
}

impl FieldFile {
    pub fn scalar(f: &ScalarField) -> Self {
        FieldFile {
            grid: f.grid(),
            components: vec![f.to_physical()],
        }
    }

    pub fn vector(v: &VectorField) -> Self {
        FieldFile {
            grid: v.grid(),
            components: v.to_physical().into_components(),
        }
    }

    pub fn into_scalar(mut self) -> Result<ScalarField> {
        if self.components.len() != 1 {
            return Err(Error::Format(format!(
                "expected a scalar field, file has {} components",
                self.components.len()
            )));
        }
        Ok(self.components.remove(0))
    }

    pub fn into_vector(self) -> Result<VectorField> {
        if self.components.len() != self.grid.dim() {
            return Err(Error::Format(format!(
                "expected {} components for a vector field, file has {}",
                self.grid.dim(),
                self.components.len()
            )));
        }
        VectorField::new(self.components)
    }

    pub fn write_to(&self, w: &mut impl Write) -> Result<()> {
        let d = self.grid.dim();
        let mut header = Vec::with_capacity(8 + 4 * (d + 2));
        header.extend_from_slice(&MAGIC);
        header.extend_from_slice(&(d as u32).to_le_bytes());
        for _ in 0..d {
            header.extend_from_slice(&(self.grid.points_per_axis() as u32).to_le_bytes());
        }
        header.extend_from_slice(&(self.components.len() as u32).to_le_bytes());
        w.write_all(&header)?;
        let mut buf = Vec::with_capacity(8 * self.grid.len());
        for c in &self.components {
            buf.clear();
            for v in c.values().iter() {
                buf.extend_from_slice(&v.to_le_bytes());
            }
            w.write_all(&buf)?;
        }
        Ok(())
    }

    pub fn read_from(r: &mut impl Read) -> Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)
            .map_err(|_| Error::Format("file too short for header".into()))?;
        if magic != MAGIC {
            return Err(Error::Format("bad magic, not an FLD1 file".into()));
        }
        let dim = read_u32(r)? as usize;
        if !(dim == 2 || dim == 3) {
            return Err(Error::Format(format!("unsupported dimension {dim}")));
        }
        let mut sizes = Vec::with_capacity(dim);
        for _ in 0..dim {
            sizes.push(read_u32(r)? as usize);
        }
        if sizes.iter().any(|&s| s != sizes[0]) {
            return Err(Error::Format(format!("unequal axis sizes {sizes:?}")));
        }
        let grid = Grid::new(dim, sizes[0]).map_err(|e| Error::Format(e.to_string()))?;
        let count = read_u32(r)? as usize;
        if count == 0 || count > 16 {
            return Err(Error::Format(format!(
                "implausible component count {count}"
            )));
        }
        let mut bytes = vec![0u8; 8 * grid.len()];
        let mut components = Vec::with_capacity(count);
        for k in 0..count {
            r.read_exact(&mut bytes)
                .map_err(|_| Error::Format(format!("truncated data in component {k}")))?;
            let values = bytes
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
                .collect();
            components.push(
                ScalarField::from_values(grid, values).map_err(|e| Error::Format(e.to_string()))?,
            );
        }
        let mut probe = [0u8; 1];
        if r.read(&mut probe)? != 0 {
            return Err(Error::Format("trailing bytes after field data".into()));
        }
        Ok(FieldFile { grid, components })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let mut f = std::io::BufReader::new(std::fs::File::open(path)?);
        Self::read_from(&mut f)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.write_to(&mut out)
            .expect("writing to memory cannot fail");
        out
    }
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)
        .map_err(|_| Error::Format("truncated header".into()))?;
    Ok(u32::from_le_bytes(b))
}
