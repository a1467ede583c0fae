//! Exact rational exponent sequences and their identities.
//!
//! cargo run --example exponent_sequence -- [jmax]

use dbar::estimates::exponent_sequence;

fn main() -> dbar::Result<()> {
    let jmax: usize = std::env::args().nth(1).map_or(8, |s| s.parse().expect("jmax"));
    let seq = exponent_sequence(jmax)?;
    println!("{:>3} {:>14} {:>14} {:>14} {:>14}", "j", "p_j", "s_j", "r_j", "s~_j");
    for j in 0..=jmax {
        let tilde = if j >= 1 { seq.s_tilde(j).to_string() } else { "-".into() };
        let r = seq.r.get(j).map_or("-".into(), |r| r.to_string());
        println!("{j:>3} {:>14} {:>14} {:>14} {:>14}", seq.p[j].to_string(), seq.s[j].to_string(), r, tilde);
    }
    for c in seq.check_identities() {
        println!("{:<40} {}", c.name, if c.holds { "exact" } else { "FAILS" });
    }
    println!("s_{jmax} - 4/3 = {:.3e}", seq.s_f64(jmax) - 4.0 / 3.0);
    Ok(())
}
