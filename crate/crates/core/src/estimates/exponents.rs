//! Exponent sequences `p_j, s_j, r_j, s~_j` in exact rational arithmetic.
//!
//! `p_0 = 2`, `s_0 = 4`, `1/r_j = 4/(3 p_j)`, `1/p_{j+1} = 1/p_j - 1/(2 r_j)`,
//! `1/s_{j+1} = 1/s_j + 1/(2 r_j)`, `1/s~_j = 1/s_j - 1/2`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{invalid, Result};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentSequence {
    pub jmax: usize,
    pub p: Vec<BigRational>,
    pub s: Vec<BigRational>,
    pub r: Vec<BigRational>,
    /// `s_tilde[j - 1]` holds `s~_j` for `j = 1..=jmax`.
    pub s_tilde: Vec<BigRational>,
}

/// One named identity and whether it holds exactly.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
}

impl ExponentSequence {
    pub fn new(jmax: usize) -> Result<Self> {
        if jmax < 1 {
            return Err(invalid("jmax must be at least 1"));
        }
        let mut p = vec![rat(2, 1)];
        let mut s = vec![rat(4, 1)];
        let mut r = Vec::with_capacity(jmax + 1);
        for j in 0..=jmax {
            let inv_r = rat(4, 3) * p[j].recip();
            r.push(inv_r.recip());
            if j < jmax {
                let half = rat(1, 2) * &inv_r;
                p.push((p[j].recip() - &half).recip());
                s.push((s[j].recip() + &half).recip());
            }
        }
        let s_tilde = s[1..].iter().map(|sj| (sj.recip() - rat(1, 2)).recip()).collect();
        Ok(Self { jmax, p, s, r, s_tilde })
    }

    /// `r' = r / (r - 1)`.
    pub fn r_conj(&self, j: usize) -> BigRational {
        let r = &self.r[j];
        r / (r - BigRational::one())
    }

    pub fn s_tilde(&self, j: usize) -> &BigRational {
        &self.s_tilde[j - 1]
    }

    pub fn p_f64(&self, j: usize) -> f64 {
        to_f64(&self.p[j])
    }

    pub fn s_f64(&self, j: usize) -> f64 {
        to_f64(&self.s[j])
    }

    pub fn r_f64(&self, j: usize) -> f64 {
        to_f64(&self.r[j])
    }

    pub fn r_conj_f64(&self, j: usize) -> f64 {
        to_f64(&self.r_conj(j))
    }

    pub fn s_tilde_f64(&self, j: usize) -> f64 {
        to_f64(self.s_tilde(j))
    }

    /// Every recurrence and derived identity, each checked with zero tolerance.
    pub fn check_identities(&self) -> Vec<IdentityCheck> {
        let mut out = Vec::new();
        let mut push = |name: &str, holds: bool| out.push(IdentityCheck { name: name.to_string(), holds });
        let all = |f: &dyn Fn(usize) -> bool, range: std::ops::Range<usize>| range.into_iter().all(f);
        let n = self.jmax + 1;
        push("p_0 = 2", self.p[0] == rat(2, 1));
        push("s_0 = 4", self.s[0] == rat(4, 1));
        push("1/r_j = 4/(3 p_j)", all(&|j| self.r[j].recip() == rat(4, 3) * self.p[j].recip(), 0..n));
        push(
            "1/p_(j+1) = 1/p_j - 1/(2 r_j)",
            all(&|j| self.p[j + 1].recip() == self.p[j].recip() - rat(1, 2) * self.r[j].recip(), 0..n - 1),
        );
        push(
            "1/s_(j+1) = 1/s_j + 1/(2 r_j)",
            all(&|j| self.s[j + 1].recip() == self.s[j].recip() + rat(1, 2) * self.r[j].recip(), 0..n - 1),
        );
        push("1/s~_j = 1/s_j - 1/2", all(&|j| self.s_tilde(j).recip() == self.s[j].recip() - rat(1, 2), 1..n));
        push("p_j / r_j = 4/3", all(&|j| &self.p[j] / &self.r[j] == rat(4, 3), 0..n));
        push("1/p_j + 1/s_j = 3/4", all(&|j| self.p[j].recip() + self.s[j].recip() == rat(3, 4), 0..n));
        push("s_j / r'_j = 4/3", all(&|j| &self.s[j] / self.r_conj(j) == rat(4, 3), 0..n));
        push("s_j < 2 for j >= 1", all(&|j| self.s[j] < rat(2, 1), 1..n));
        push("s_j decreasing", all(&|j| self.s[j + 1] < self.s[j], 0..n - 1));
        push("s_j > 4/3", all(&|j| self.s[j] > rat(4, 3), 0..n));
        push("s~_j positive", self.s_tilde.iter().all(|v| *v > BigRational::zero()));
        out
    }
}

pub fn exponent_sequence(jmax: usize) -> Result<ExponentSequence> {
    ExponentSequence::new(jmax)
}

pub(crate) fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().expect("finite rational")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_terms() {
        let e = exponent_sequence(3).unwrap();
        assert_eq!(e.p[1], rat(6, 1));
        assert_eq!(e.s[1], rat(12, 7));
        assert_eq!(e.r[0], rat(3, 2));
        assert_eq!(e.r_conj(0), rat(3, 1));
        assert_eq!(*e.s_tilde(1), rat(12, 1));
        assert_eq!(e.p[3], rat(54, 1));
    }

    #[test]
    fn identities_hold_exactly() {
        let e = exponent_sequence(25).unwrap();
        for c in e.check_identities() {
            assert!(c.holds, "{}", c.name);
        }
    }

    #[test]
    fn s_approaches_four_thirds() {
        let e = exponent_sequence(20).unwrap();
        let gap = e.s_f64(20) - 4.0 / 3.0;
        assert!(gap > 0.0 && gap < 1e-3, "{gap}");
        // closed form 1/s_j = 3/4 - 1/(2 * 3^j)
        for j in 0..=20 {
            assert_eq!(e.s[j].recip(), rat(3, 4) - BigRational::new(BigInt::one(), BigInt::from(2) * BigInt::from(3).pow(j as u32)));
        }
    }

    #[test]
    fn rejects_empty_sequence() {
        assert!(exponent_sequence(0).is_err());
    }
}
