//! On-disk cache for eigendecompositions of assembled grid operators.
//!
//! Layout, all little-endian:
//!
//! | bytes | content |
//! |-------|---------|
//! | 4 | magic `RK1C` |
//! | 4 | format version, `u32` |
//! | 1 | field code (1, 2 or 4), `u8` |
//! | 4 | `n`, `u32` |
//! | 8 | half width `L`, `f64` |
//! | 4 | points per axis `m`, `u32` |
//! | 8 | rows, `u64` |
//! | 8 | cols, `u64` |
//! | 8·cols | eigenvalues |
//! | 8·rows·cols | eigenvectors, row-major |

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::groups::GroupParams;

const MAGIC: &[u8; 4] = b"RK1C";
const VERSION: u32 = 1;

/// Identifies an isotropic grid operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CacheKey {
    pub params: GroupParams,
    pub half_width: f64,
    pub m: usize,
}

pub fn spectrum_cache_path(dir: &Path, key: &CacheKey) -> PathBuf {
    dir.join(format!(
        "{}-n{}-L{:016x}-m{}.rk1c",
        key.params.field.name().to_lowercase(),
        key.params.n,
        key.half_width.to_bits(),
        key.m
    ))
}

pub fn write_spectrum_cache(
    path: &Path,
    key: &CacheKey,
    eigenvalues: &DVector<f64>,
    eigenvectors: &DMatrix<f64>,
) -> Result<()> {
    if eigenvalues.len() != eigenvectors.ncols() {
        return Err(Error::Cache(
            "eigenvalue count does not match eigenvector columns".into(),
        ));
    }
    let (rows, cols) = eigenvectors.shape();
    let mut buf = Vec::with_capacity(45 + 8 * cols * (rows + 1));
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.push(key.params.field.code());
    buf.extend_from_slice(&(key.params.n as u32).to_le_bytes());
    buf.extend_from_slice(&key.half_width.to_le_bytes());
    buf.extend_from_slice(&(key.m as u32).to_le_bytes());
    buf.extend_from_slice(&(rows as u64).to_le_bytes());
    buf.extend_from_slice(&(cols as u64).to_le_bytes());
    for v in eigenvalues.iter() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    for i in 0..rows {
        for j in 0..cols {
            buf.extend_from_slice(&eigenvectors[(i, j)].to_le_bytes());
        }
    }
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    // Write to a sibling file first so a crash never leaves a truncated cache.
    let tmp = path.with_extension("rk1c.tmp");
    fs::File::create(&tmp)?.write_all(&buf)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.data.len() {
            return Err(Error::Cache("truncated cache file".into()));
        }
        let out = &self.data[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

/// Reads a cached spectrum. Returns `Ok(None)` when the file does not exist
/// and an error when it exists but belongs to another key or is corrupt.
pub fn read_spectrum_cache(
    path: &Path,
    key: &CacheKey,
) -> Result<Option<(DVector<f64>, DMatrix<f64>)>> {
    let mut data = Vec::new();
    match fs::File::open(path) {
        Ok(mut f) => {
            f.read_to_end(&mut data)?;
        }
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    }
    let mut c = Cursor {
        data: &data,
        pos: 0,
    };
    if c.take(4)? != MAGIC {
        return Err(Error::Cache(format!("{}: bad magic", path.display())));
    }
    let version = c.u32()?;
    if version != VERSION {
        return Err(Error::Cache(format!(
            "{}: unsupported version {version}",
            path.display()
        )));
    }
    let field = c.take(1)?[0];
    let n = c.u32()? as usize;
    let l = c.f64()?;
    let m = c.u32()? as usize;
    if field != key.params.field.code()
        || n != key.params.n
        || l.to_bits() != key.half_width.to_bits()
        || m != key.m
    {
        return Err(Error::Cache(format!("{}: key mismatch", path.display())));
    }
    let rows = c.u64()? as usize;
    let cols = c.u64()? as usize;
    let expected = 8 * cols * (rows + 1);
    if data.len() - c.pos != expected {
        return Err(Error::Cache(format!(
            "{}: payload has wrong length",
            path.display()
        )));
    }
    let values = DVector::from_iterator(cols, (0..cols).map(|_| c.f64().unwrap()));
    let mut vectors = DMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            vectors[(i, j)] = c.f64()?;
        }
    }
    Ok(Some((values, vectors)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_key_check() {
        let dir = tempfile::tempdir().unwrap();
        let key = CacheKey {
            params: GroupParams::so(2),
            half_width: 1.5,
            m: 3,
        };
        let path = spectrum_cache_path(dir.path(), &key);
        assert!(read_spectrum_cache(&path, &key).unwrap().is_none());
        let vals = DVector::from_vec(vec![0.5, 1.0, 2.0]);
        let vecs = DMatrix::from_fn(3, 3, |i, j| (i * 3 + j) as f64 * 0.1);
        write_spectrum_cache(&path, &key, &vals, &vecs).unwrap();
        let (v2, q2) = read_spectrum_cache(&path, &key).unwrap().unwrap();
        assert_eq!(v2, vals);
        assert_eq!(q2, vecs);
        let other = CacheKey { m: 5, ..key };
        assert!(matches!(
            read_spectrum_cache(&path, &other),
            Err(Error::Cache(_))
        ));
        let bytes = fs::read(&path).unwrap();
        assert_eq!(&bytes[..4], b"RK1C");
        fs::write(&path, &bytes[..bytes.len() - 3]).unwrap();
        assert!(matches!(
            read_spectrum_cache(&path, &key),
            Err(Error::Cache(_))
        ));
    }
}
