//! NLF2 binary field files and CSV export.
//!
//! NLF2 layout (all little-endian): 8-byte magic "NLF2FLD\0"; u32 points per
//! axis; f64 spacing; u8 domain tag (0 = z-space, 1 = k-space); 7 pad bytes;
//! then n*n samples as interleaved f64 (re, im) in row-major order (second
//! index outer). Fixed layout so files are bit-reproducible across platforms.

use num_complex::Complex64;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::{ComplexField, SpectralField};
use crate::lattice::{KLattice, Lattice};

const MAGIC: &[u8; 8] = b"NLF2FLD\0";

pub const DOMAIN_Z: u8 = 0;
pub const DOMAIN_K: u8 = 1;

fn write_raw(
    path: &Path,
    points: usize,
    spacing: f64,
    tag: u8,
    samples: &[Complex64],
) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&(points as u32).to_le_bytes())?;
    w.write_all(&spacing.to_le_bytes())?;
    w.write_all(&[tag, 0, 0, 0, 0, 0, 0, 0])?;
    for v in samples {
        w.write_all(&v.re.to_le_bytes())?;
        w.write_all(&v.im.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

fn read_raw(path: &Path) -> Result<(usize, f64, u8, Vec<Complex64>)> {
    let mut r = BufReader::new(std::fs::File::open(path)?);
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format(format!("bad magic {magic:?}")));
    }
    let mut b4 = [0u8; 4];
    r.read_exact(&mut b4)?;
    let points = u32::from_le_bytes(b4) as usize;
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b8)?;
    let spacing = f64::from_le_bytes(b8);
    r.read_exact(&mut b8)?;
    let tag = b8[0];
    if tag > DOMAIN_K {
        return Err(Error::Format(format!("unknown domain tag {tag}")));
    }
    let mut samples = Vec::with_capacity(points * points);
    for _ in 0..points * points {
        r.read_exact(&mut b8)?;
        let re = f64::from_le_bytes(b8);
        r.read_exact(&mut b8)?;
        let im = f64::from_le_bytes(b8);
        samples.push(Complex64::new(re, im));
    }
    // Trailing garbage means a corrupt or mislabeled file.
    if r.read(&mut [0u8; 1])? != 0 {
        return Err(Error::Format("trailing bytes after samples".into()));
    }
    Ok((points, spacing, tag, samples))
}

pub fn write_zfield(path: impl AsRef<Path>, f: &ComplexField) -> Result<()> {
    let zl = f.lattice();
    write_raw(path.as_ref(), zl.n(), zl.h(), DOMAIN_Z, f.samples())
}

pub fn write_kfield(path: impl AsRef<Path>, s: &SpectralField) -> Result<()> {
    let kl = s.klattice();
    write_raw(path.as_ref(), kl.m(), kl.dk(), DOMAIN_K, s.samples())
}

pub fn read_zfield(path: impl AsRef<Path>) -> Result<ComplexField> {
    let (points, spacing, tag, samples) = read_raw(path.as_ref())?;
    if tag != DOMAIN_Z {
        return Err(Error::Format("expected a z-space field (tag 0)".into()));
    }
    ComplexField::from_samples(Lattice::new(points, spacing)?, samples)
}

/// Reads a k-space field; the Plancherel deficit is not stored in the binary
/// container (it travels in JSON sidecars) and is set to zero here.
pub fn read_kfield(path: impl AsRef<Path>) -> Result<SpectralField> {
    let (points, spacing, tag, samples) = read_raw(path.as_ref())?;
    if tag != DOMAIN_K {
        return Err(Error::Format("expected a k-space field (tag 1)".into()));
    }
    SpectralField::new(KLattice::new(points, spacing)?, samples, 0.0)
}

/// CSV export: one row per node, columns x1, x2, re, im.
pub fn write_csv(path: impl AsRef<Path>, f: &ComplexField) -> Result<()> {
    let zl = f.lattice();
    let mut w = BufWriter::new(std::fs::File::create(path.as_ref())?);
    writeln!(w, "x1,x2,re,im")?;
    for j2 in 0..zl.n() {
        for j1 in 0..zl.n() {
            let z = zl.point(j1, j2);
            let v = f.get(j1, j2);
            writeln!(w, "{},{},{},{}", z.re, z.im, v.re, v.im)?;
        }
    }
    w.flush()?;
    Ok(())
}
