//! Binary field dumps and `key,value` diagnostic CSV.
//!
//! A dump is the ASCII line `DBARFIELD v1 n=<n> L=<L>\n` followed by `n*n`
//! little-endian `f64` pairs `(re, im)` in row-major order.

use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::GridSpec;

const MAGIC: &str = "DBARFIELD";
const VERSION: &str = "v1";

pub fn write_field(w: &mut impl Write, f: &ScalarField) -> Result<()> {
    let g = f.grid();
    writeln!(w, "{MAGIC} {VERSION} n={} L={}", g.n(), g.half_width())?;
    let mut buf = Vec::with_capacity(16 * g.len());
    for v in f.values() {
        buf.extend_from_slice(&v.re.to_le_bytes());
        buf.extend_from_slice(&v.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_field(r: &mut impl Read) -> Result<ScalarField> {
    let mut reader = BufReader::new(r);
    let mut header = String::new();
    reader.read_line(&mut header)?;
    let grid = parse_header(header.trim_end_matches('\n'))?;
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    if bytes.len() != 16 * grid.len() {
        return Err(Error::Format(format!(
            "expected {} payload bytes for {grid}, found {}",
            16 * grid.len(),
            bytes.len()
        )));
    }
    let values = bytes
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().unwrap());
            let im = f64::from_le_bytes(c[8..].try_into().unwrap());
            Complex64::new(re, im)
        })
        .collect();
    ScalarField::from_values(grid, values).map_err(|e| Error::Format(e.to_string()))
}

fn parse_header(line: &str) -> Result<GridSpec> {
    let bad = || Error::Format(format!("bad header {line:?}"));
    let mut parts = line.split(' ');
    if parts.next() != Some(MAGIC) || parts.next() != Some(VERSION) {
        return Err(bad());
    }
    let n = parts
        .next()
        .and_then(|s| s.strip_prefix("n="))
        .and_then(|s| s.parse::<usize>().ok())
        .ok_or_else(bad)?;
    let l = parts
        .next()
        .and_then(|s| s.strip_prefix("L="))
        .and_then(|s| s.parse::<f64>().ok())
        .ok_or_else(bad)?;
    if parts.next().is_some() {
        return Err(bad());
    }
    GridSpec::new(l, n).map_err(|e| Error::Format(e.to_string()))
}

pub fn save_field(path: impl AsRef<Path>, f: &ScalarField) -> Result<()> {
    let mut buf = Vec::new();
    write_field(&mut buf, f)?;
    fs::write(path, buf)?;
    Ok(())
}

pub fn load_field(path: impl AsRef<Path>) -> Result<ScalarField> {
    let mut file = fs::File::open(path)?;
    read_field(&mut file)
}

/// Ordered `key,value` diagnostics.
#[derive(Debug, Default, Clone)]
pub struct KeyValueCsv {
    rows: Vec<(String, String)>,
}

impl KeyValueCsv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl std::fmt::Display) -> &mut Self {
        self.rows.push((key.into(), value.to_string()));
        self
    }

    /// Records the lattice parameters under `prefix.n`, `prefix.L`.
    pub fn push_grid(&mut self, prefix: &str, g: &GridSpec) -> &mut Self {
        self.push(format!("{prefix}.n"), g.n());
        self.push(format!("{prefix}.L"), g.half_width())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.rows.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn rows(&self) -> &[(String, String)] {
        &self.rows
    }

    pub fn to_csv_string(&self) -> String {
        let mut s = String::from("key,value\n");
        for (k, v) in &self.rows {
            s.push_str(k);
            s.push(',');
            s.push_str(v);
            s.push('\n');
        }
        s
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_csv_string())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_layout_is_exact() {
        let g = GridSpec::new(6.0, 4).unwrap();
        let f = ScalarField::from_fn(g, |x| x);
        let mut buf = Vec::new();
        write_field(&mut buf, &f).unwrap();
        let head = b"DBARFIELD v1 n=4 L=6\n";
        assert_eq!(&buf[..head.len()], head);
        assert_eq!(buf.len(), head.len() + 16 * 16);
        // first sample is x = -6 + h/2 = -4.5 on both axes
        assert_eq!(f64::from_le_bytes(buf[head.len()..head.len() + 8].try_into().unwrap()), -4.5);
    }

    #[test]
    fn rejects_garbage() {
        assert!(read_field(&mut &b"NOTAFIELD v1 n=2 L=1\n"[..]).is_err());
        assert!(read_field(&mut &b"DBARFIELD v1 n=2 L=1\n\x00\x01"[..]).is_err());
        assert!(read_field(&mut &b"DBARFIELD v1 n=3 L=1\n"[..]).is_err());
    }

    #[test]
    fn csv_rows() {
        let mut c = KeyValueCsv::new();
        c.push("a", 1).push_grid("grid", &GridSpec::new(2.5, 8).unwrap());
        assert_eq!(c.to_csv_string(), "key,value\na,1\ngrid.n,8\ngrid.L,2.5\n");
        assert_eq!(c.get("grid.L"), Some("2.5"));
    }
}
