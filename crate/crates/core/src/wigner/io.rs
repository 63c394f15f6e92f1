use std::io::{self, Read, Write};

use nalgebra::DMatrix;

use super::transform::WignerFunction;
use crate::units::UnitSystem;

/// Magic bytes of the binary dump.
pub const DUMP_MAGIC: &[u8; 8] = b"DLWIGNR1";

/// Contents of a binary dump.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerDump {
    pub x0: f64,
    pub dx: f64,
    pub p0: f64,
    pub dp: f64,
    pub units: UnitSystem,
    /// Rows indexed by x, columns by p.
    pub values: DMatrix<f64>,
}

/// Rows `x,p,W`, x-major, preceded by a header line.
pub fn write_wigner_csv<W: Write>(w: &WignerFunction, mut out: W) -> io::Result<()> {
    writeln!(out, "x,p,W")?;
    let xs = w.x_points();
    for (ix, x) in xs.iter().enumerate() {
        for (ip, p) in w.p_points().iter().enumerate() {
            writeln!(out, "{:.12e},{:.12e},{:.12e}", x, p, w.value(ix, ip))?;
        }
    }
    Ok(())
}

/// Binary layout, little endian:
///
/// | bytes | field |
/// |-------|-------|
/// | 8     | magic `DLWIGNR1` |
/// | 4     | `u32` number of x points |
/// | 4     | `u32` number of p points |
/// | 8 × 4 | `f64` x₀, Δx, p₀, Δp |
/// | 1 + 7 | `u8` unit tag (0 natural, 1 cgs), zero padding |
/// | 8·nx·np | `f64` values, x-major |
pub fn write_wigner_binary<W: Write>(w: &WignerFunction, mut out: W) -> io::Result<()> {
    let (nx, np) = w.values().shape();
    out.write_all(DUMP_MAGIC)?;
    out.write_all(&(nx as u32).to_le_bytes())?;
    out.write_all(&(np as u32).to_le_bytes())?;
    for v in [w.grid().x_min(), w.dx(), w.p_points()[0], w.dp()] {
        out.write_all(&v.to_le_bytes())?;
    }
    let mut tag = [0u8; 8];
    tag[0] = w.grid().units().code();
    out.write_all(&tag)?;
    for ix in 0..nx {
        for ip in 0..np {
            out.write_all(&w.value(ix, ip).to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_wigner_binary<R: Read>(mut input: R) -> io::Result<WignerDump> {
    let bad = |msg: &str| io::Error::new(io::ErrorKind::InvalidData, msg.to_string());
    let mut magic = [0u8; 8];
    input.read_exact(&mut magic)?;
    if &magic != DUMP_MAGIC {
        return Err(bad("not a Wigner dump"));
    }
    let mut u4 = [0u8; 4];
    input.read_exact(&mut u4)?;
    let nx = u32::from_le_bytes(u4) as usize;
    input.read_exact(&mut u4)?;
    let np = u32::from_le_bytes(u4) as usize;
    let mut f8 = [0u8; 8];
    let mut read_f64 = |input: &mut R| -> io::Result<f64> {
        input.read_exact(&mut f8)?;
        Ok(f64::from_le_bytes(f8))
    };
    let x0 = read_f64(&mut input)?;
    let dx = read_f64(&mut input)?;
    let p0 = read_f64(&mut input)?;
    let dp = read_f64(&mut input)?;
    let mut tag = [0u8; 8];
    input.read_exact(&mut tag)?;
    let units = UnitSystem::from_code(tag[0]).ok_or_else(|| bad("unknown unit tag"))?;
    let mut values = DMatrix::zeros(nx, np);
    for ix in 0..nx {
        for ip in 0..np {
            values[(ix, ip)] = read_f64(&mut input)?;
        }
    }
    Ok(WignerDump {
        x0,
        dx,
        p0,
        dp,
        units,
        values,
    })
}
