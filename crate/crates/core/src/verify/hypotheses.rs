//! Admissibility sets of the three existence theorems as pure predicates.
//!
//! Each check returns the list of violated inequalities, written the way they
//! are stated, so callers can report the first one by name.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// `(n, s, σ, p, q, λ, θ)`. `p` and `q` may be `f64::INFINITY`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HypothesisPoint {
    pub n: usize,
    pub s: f64,
    pub sigma: f64,
    pub p: f64,
    pub q: f64,
    pub lambda: f64,
    pub theta: f64,
}

impl HypothesisPoint {
    /// `α = (2 − θ − (n/2)(1−2/p))/(λ−1)`.
    pub fn alpha(&self) -> f64 {
        (2.0 - self.theta - self.dispersion()) / (self.lambda - 1.0)
    }

    /// `(n/2)(1−2/p)`.
    pub fn dispersion(&self) -> f64 {
        self.n as f64 / 2.0 * (1.0 - 2.0 / self.p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Theorem {
    /// Global solutions in `H^s`.
    GlobalHs,
    /// Global solutions in `H^s_p`.
    GlobalBessel,
    /// Local solutions in `H^s_p`.
    Local,
}

impl Theorem {
    pub const ALL: [Theorem; 3] = [Theorem::GlobalHs, Theorem::GlobalBessel, Theorem::Local];

    pub fn id(self) -> &'static str {
        match self {
            Theorem::GlobalHs => "global_hs",
            Theorem::GlobalBessel => "global_hsp",
            Theorem::Local => "local",
        }
    }

    /// Names of every violated inequality; empty when the point is admissible.
    pub fn violations(self, pt: &HypothesisPoint) -> Vec<&'static str> {
        let mut v = Vec::new();
        let mut need = |ok: bool, name: &'static str| {
            if !ok {
                v.push(name);
            }
        };
        let n = pt.n as f64;
        let (s, sigma, lambda, theta) = (pt.s, pt.sigma, pt.lambda, pt.theta);
        need(pt.n >= 1, "n >= 1");
        match self {
            Theorem::GlobalHs => {
                need(lambda >= 3.0, "lambda >= 3");
                need(theta == 1.0, "theta = 1");
                need(s > (n - 2.0) / 2.0, "s > (n-2)/2");
                need(n * (lambda - 2.0) > 2.0, "n(lambda-2) > 2");
            }
            Theorem::GlobalBessel | Theorem::Local => {
                let (ip, iq) = (1.0 / pt.p, 1.0 / pt.q);
                need(lambda >= 2.0, "lambda >= 2");
                if pt.n <= 2 {
                    need(theta > (2.0 - n) / 2.0 && theta <= 1.0, "(2-n)/2 < theta <= 1");
                } else {
                    need((0.0..=1.0).contains(&theta), "0 <= theta <= 1");
                }
                need(2.0 <= pt.p && pt.p <= pt.q, "2 <= p <= q <= inf");
                need(s > sigma, "s > sigma");
                need(n * (ip - iq) <= sigma, "n(1/p-1/q) <= sigma");
                need(sigma < 3.0 - n - 2.0 * theta, "sigma < 3-n-2theta");
                need(
                    (lambda * iq + ip - 1.0) * n / (lambda - 1.0) + sigma <= s,
                    "(lambda/q+1/p-1)n/(lambda-1)+sigma <= s",
                );
                need(s < (n * iq).min(lambda - 1.0) + sigma, "s < min(n/q, lambda-1)+sigma");
                if self == Theorem::GlobalBessel {
                    let alpha = pt.alpha();
                    need(1.0 / lambda > alpha, "1/lambda > alpha");
                    need(alpha > 0.0, "alpha > 0");
                    need(pt.dispersion() < 1.0, "(n/2)(1-2/p) < 1");
                } else {
                    need(pt.dispersion() * lambda < 1.0, "(n/2)(1-2/p)lambda < 1");
                }
            }
        }
        v
    }

    pub fn admits(self, pt: &HypothesisPoint) -> bool {
        self.violations(pt).is_empty()
    }

    /// `Err(Hypothesis)` naming the first violated inequality.
    pub fn check(self, pt: &HypothesisPoint) -> Result<()> {
        match self.violations(pt).first() {
            None => Ok(()),
            Some(name) => Err(Error::Hypothesis(format!("{}: {name} violated", self.id()))),
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.id() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown theorem '{s}'")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(n: usize, s: f64, sigma: f64, p: f64, q: f64, lambda: f64, theta: f64) -> HypothesisPoint {
        HypothesisPoint { n, s, sigma, p, q, lambda, theta }
    }

    #[test]
    fn global_hs_straddles() {
        let t = Theorem::GlobalHs;
        // n(λ−2) > 2: n = 1 needs λ > 4.
        assert!(!t.admits(&point(1, 1.0, 0.0, 2.0, 2.0, 4.0, 1.0)));
        assert!(t.admits(&point(1, 1.0, 0.0, 2.0, 2.0, 4.5, 1.0)));
        assert_eq!(t.violations(&point(1, 1.0, 0.0, 2.0, 2.0, 3.0, 1.0)), vec!["n(lambda-2) > 2"]);
        assert!(t.admits(&point(2, 0.5, 0.0, 2.0, 2.0, 4.0, 1.0)));
        assert!(t.check(&point(2, 0.0, 0.0, 2.0, 2.0, 4.0, 1.0)).is_err());
    }

    #[test]
    fn alpha_and_dispersion() {
        let pt = point(1, 0.0, 0.0, 2.0, 2.0, 3.0, 1.0);
        assert_eq!(pt.dispersion(), 0.0);
        assert_eq!(pt.alpha(), 0.5);
    }

    #[test]
    fn ids_round_trip() {
        for t in Theorem::ALL {
            assert_eq!(t.id().parse::<Theorem>().unwrap(), t);
        }
    }
}
