//! Writes a potential as a binary field dump and reads it back.
//!
//! cargo run --example field_dump -- [path]

use dbar::io::{load_field, save_field};
use dbar::potential::make_scalar;
use dbar::{GridSpec, PotentialKind};

fn main() -> dbar::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| std::env::temp_dir().join("q.field").display().to_string());
    let q = make_scalar(PotentialKind::RandomSmooth, 1.0, 7, GridSpec::new(4.0, 8)?)?;
    save_field(&path, &q)?;
    let back = load_field(&path)?;
    println!("wrote {path}: grid {}, bitwise equal after reload: {}", back.grid(), back.values() == q.values());
    let bytes = std::fs::read(&path)?;
    let header = bytes.iter().position(|&b| b == b'\n').map_or(0, |i| i + 1);
    print!("header {}", String::from_utf8_lossy(&bytes[..header]));
    println!("payload {} bytes, first value {}", bytes.len() - header, q.values()[0]);
    Ok(())
}
