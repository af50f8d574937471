//! Self-describing little-endian binary snapshots.
//!
//! Layout: magic `MODMHD1\0`, version (u32), nx ny nz (u32), lx ly lz t
//! (f64), formulation tag (u8, 0 = modified, 1 = traditional), background
//! (9 f64 row-major `M` or 3 f64 `H0`), field count (u32), then for each
//! field a 16-byte zero-padded ASCII name followed by nx*ny*nz f64 values,
//! x fastest. Fields: the three magnetic components, v_x v_y v_z, rho, P.

use std::path::Path;

use modmhd_core::dynamics::{Formulation, Magnetic, SimState};
use modmhd_core::emcore::BackgroundPotential;
use modmhd_core::fieldkit::{GridSpec, ScalarField, VectorField};

use crate::output::write_atomic;

pub const MAGIC: &[u8; 8] = b"MODMHD1\0";
pub const VERSION: u32 = 1;
const NAME_LEN: usize = 16;

#[derive(Debug, thiserror::Error)]
pub enum SnapshotError {
    #[error("I/O error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("not a snapshot file: bad magic bytes {0:?}")]
    BadMagic(Vec<u8>),
    #[error("unsupported snapshot format version {found} (this build reads version {VERSION})")]
    Version { found: u32 },
    #[error("truncated snapshot: needed {needed} bytes for {what} at offset {offset}, file has {len}")]
    Truncated { what: String, offset: usize, needed: usize, len: usize },
    #[error("malformed snapshot: {0}")]
    Malformed(String),
}

fn field_names(f: Formulation) -> [&'static str; 8] {
    let m = match f {
        Formulation::ModifiedA => ["A_x", "A_y", "A_z"],
        Formulation::TraditionalH => ["H_x", "H_y", "H_z"],
    };
    [m[0], m[1], m[2], "v_x", "v_y", "v_z", "rho", "P"]
}

pub fn encode(state: &SimState) -> Vec<u8> {
    let g = state.grid();
    let mut out = Vec::with_capacity(128 + 8 * (8 * g.len() + 8 * NAME_LEN));
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    for n in g.dims() {
        out.extend_from_slice(&(n as u32).to_le_bytes());
    }
    for x in g.lengths().into_iter().chain([state.t]) {
        out.extend_from_slice(&x.to_le_bytes());
    }
    match &state.magnetic {
        Magnetic::Potential { bg, .. } => {
            out.push(0);
            for x in bg.m.iter().flatten() {
                out.extend_from_slice(&x.to_le_bytes());
            }
        }
        Magnetic::Field { h0, .. } => {
            out.push(1);
            for x in h0 {
                out.extend_from_slice(&x.to_le_bytes());
            }
        }
    }
    out.extend_from_slice(&8u32.to_le_bytes());
    for (name, field) in field_names(state.formulation()).iter().zip(state.evolved_components()) {
        let mut padded = [0u8; NAME_LEN];
        padded[..name.len()].copy_from_slice(name.as_bytes());
        out.extend_from_slice(&padded);
        for x in field.data() {
            out.extend_from_slice(&x.to_le_bytes());
        }
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8], SnapshotError> {
        if self.buf.len() - self.pos < n {
            return Err(SnapshotError::Truncated { what: what.into(), offset: self.pos, needed: n, len: self.buf.len() });
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self, what: &str) -> Result<u32, SnapshotError> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().expect("4 bytes")))
    }

    fn f64(&mut self, what: &str) -> Result<f64, SnapshotError> {
        Ok(f64::from_le_bytes(self.take(8, what)?.try_into().expect("8 bytes")))
    }
}

pub fn decode(buf: &[u8]) -> Result<SimState, SnapshotError> {
    let mut r = Reader { buf, pos: 0 };
    let magic = r.take(8, "magic")?;
    if magic != MAGIC {
        return Err(SnapshotError::BadMagic(magic.to_vec()));
    }
    let found = r.u32("version")?;
    if found != VERSION {
        return Err(SnapshotError::Version { found });
    }
    let (nx, ny, nz) = (r.u32("nx")? as usize, r.u32("ny")? as usize, r.u32("nz")? as usize);
    let (lx, ly, lz, t) = (r.f64("lx")?, r.f64("ly")?, r.f64("lz")?, r.f64("t")?);
    let grid = GridSpec::new(nx, ny, nz, lx, ly, lz).map_err(|e| SnapshotError::Malformed(e.to_string()))?;
    let tag = r.take(1, "formulation tag")?[0];
    enum Bg {
        M([[f64; 3]; 3]),
        H0([f64; 3]),
    }
    let bg = match tag {
        0 => {
            let mut m = [[0.0; 3]; 3];
            for x in m.iter_mut().flatten() {
                *x = r.f64("background matrix")?;
            }
            Bg::M(m)
        }
        1 => Bg::H0([r.f64("H0")?, r.f64("H0")?, r.f64("H0")?]),
        other => return Err(SnapshotError::Malformed(format!("unknown formulation tag {other}"))),
    };
    let formulation = if tag == 0 { Formulation::ModifiedA } else { Formulation::TraditionalH };
    let count = r.u32("field count")?;
    if count != 8 {
        return Err(SnapshotError::Malformed(format!("expected 8 fields, found {count}")));
    }
    let mut fields = Vec::with_capacity(8);
    for expected in field_names(formulation) {
        let raw = r.take(NAME_LEN, "field name")?;
        let name = std::str::from_utf8(raw).unwrap_or("").trim_end_matches('\0');
        if name != expected {
            return Err(SnapshotError::Malformed(format!("expected field {expected:?}, found {:?}", String::from_utf8_lossy(raw))));
        }
        let bytes = r.take(8 * grid.len(), &format!("field {expected}"))?;
        let data = bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect();
        fields.push(ScalarField::from_vec(grid, data).expect("length checked"));
    }
    if r.pos != buf.len() {
        return Err(SnapshotError::Malformed(format!("{} trailing bytes", buf.len() - r.pos)));
    }
    let mut it = fields.into_iter();
    let mut next3 = || VectorField::from_components([it.next().unwrap(), it.next().unwrap(), it.next().unwrap()]);
    let mag = next3();
    let v = next3();
    let rho = it.next().unwrap();
    let p = it.next().unwrap();
    let magnetic = match bg {
        Bg::M(m) => Magnetic::Potential { a: mag, bg: BackgroundPotential::from_matrix(m) },
        Bg::H0(h0) => Magnetic::Field { h: mag, h0 },
    };
    Ok(SimState { magnetic, v, rho, p, t })
}

pub fn write_snapshot(state: &SimState, path: &Path) -> Result<(), SnapshotError> {
    write_atomic(path, &encode(state)).map_err(|source| SnapshotError::Io { path: path.display().to_string(), source })
}

pub fn read_snapshot(path: &Path) -> Result<SimState, SnapshotError> {
    let buf = std::fs::read(path).map_err(|source| SnapshotError::Io { path: path.display().to_string(), source })?;
    decode(&buf)
}
