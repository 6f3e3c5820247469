//! Flat binary snapshots of a phase space.
//!
//! Layout (little endian): the 8-byte magic `OPSNAP01`, four `u64` sizes
//! `nx, nvxe, nvze, nvxi`, eleven `f64` values
//! `t, L, x0, dx, vxe0, dvxe, vze0, dvze, vxi0, dvxi, work_integral`,
//! then `E_x` (`nx`), `f_i` (`nx·nvxi`, `v_x` fastest) and
//! `f_e` (`nx·nvxe·nvze`, `v_z` fastest), all as `f64`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::phase_space::PhaseSpace;

pub const SNAPSHOT_MAGIC: &[u8; 8] = b"OPSNAP01";

/// Decoded snapshot contents, always in double precision.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub dims: [usize; 4],
    pub t: f64,
    pub length: f64,
    /// `(origin, spacing)` of the x, v_xe, v_ze and v_xi axes.
    pub axes: [(f64, f64); 4],
    pub work_integral: f64,
    pub ex: Vec<f64>,
    pub fi: Vec<f64>,
    pub fe: Vec<f64>,
}

pub fn write_snapshot<T: Real>(ps: &PhaseSpace<T>, path: &Path) -> Result<()> {
    let io = |e| Error::io(path, e);
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    w.write_all(SNAPSHOT_MAGIC).map_err(io)?;
    for n in [ps.x.n, ps.vxe.n, ps.vze.n, ps.vxi.n] {
        w.write_all(&(n as u64).to_le_bytes()).map_err(io)?;
    }
    let header = [
        ps.t,
        ps.x.length(),
        ps.x.min,
        ps.x.delta,
        ps.vxe.min,
        ps.vxe.delta,
        ps.vze.min,
        ps.vze.delta,
        ps.vxi.min,
        ps.vxi.delta,
        ps.work_integral,
    ];
    let values = header.into_iter().chain(ps.ex.iter().copied()).chain(ps.fi.iter().copied()).chain(ps.fe.iter().copied());
    for v in values {
        w.write_all(&v.as_f64().to_le_bytes()).map_err(io)?;
    }
    w.flush().map_err(io)
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    let io = |e| Error::io(path, e);
    let mut r = BufReader::new(File::open(path).map_err(io)?);
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic).map_err(io)?;
    if &magic != SNAPSHOT_MAGIC {
        return Err(Error::InvalidArgument(format!("{} is not a phase-space snapshot", path.display())));
    }
    let mut word = [0u8; 8];
    let mut dims = [0usize; 4];
    for d in &mut dims {
        r.read_exact(&mut word).map_err(io)?;
        *d = usize::try_from(u64::from_le_bytes(word))
            .map_err(|_| Error::InvalidArgument("snapshot dimension overflows usize".into()))?;
    }
    let mut read_f64s = |count: usize| -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            r.read_exact(&mut word).map_err(io)?;
            out.push(f64::from_le_bytes(word));
        }
        Ok(out)
    };
    let h = read_f64s(11)?;
    let [nx, nvxe, nvze, nvxi] = dims;
    let ex = read_f64s(nx)?;
    let fi = read_f64s(nx * nvxi)?;
    let fe = read_f64s(nx * nvxe * nvze)?;
    Ok(Snapshot {
        dims,
        t: h[0],
        length: h[1],
        axes: [(h[2], h[3]), (h[4], h[5]), (h[6], h[7]), (h[8], h[9])],
        work_integral: h[10],
        ex,
        fi,
        fe,
    })
}
