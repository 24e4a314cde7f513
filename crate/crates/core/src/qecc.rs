//! Repetition codes against phase flips.
//!
//! An `n`-qubit repetition code with majority decoding corrects up to
//! `t = (n − 1)/2` independent flips. For `n = 3` the logical no-flip
//! probability is `P_S³ + 3 P_S² P_F`, and for `n = 7` it is
//! `P_S⁷ + 7 P_S⁶ P_F + 21 P_S⁵ P_F² + 35 P_S⁴ P_F³`. Those polynomials are
//! the probability of a *successful* correction, even where they are printed
//! under a flip-probability label.

use crate::dephasing::{total_error, FlipRates};
use crate::error::{BudgetError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeSpec {
    n: usize,
}

impl CodeSpec {
    pub fn new(n: usize) -> Result<Self> {
        if n.is_multiple_of(2) {
            return Err(BudgetError::EvenCodeLength(n));
        }
        Ok(Self { n })
    }

    /// No encoding.
    pub fn bare() -> Self {
        Self { n: 1 }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of correctable flips.
    pub fn t(&self) -> usize {
        (self.n - 1) / 2
    }
}

impl Default for CodeSpec {
    fn default() -> Self {
        Self::bare()
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Logical `(no-flip, flip)` probabilities after majority decoding.
pub fn logical_rates(p_noflip: f64, p_flip: f64, code: CodeSpec) -> (f64, f64) {
    let n = code.n();
    let term = |k: usize| binomial(n, k) * p_noflip.powi((n - k) as i32) * p_flip.powi(k as i32);
    // sum whichever side is small so the complement keeps its precision
    if p_flip <= p_noflip {
        let failure: f64 = (code.t() + 1..=n).map(term).sum();
        (1.0 - failure, failure)
    } else {
        let success: f64 = (0..=code.t()).map(term).sum();
        (success, 1.0 - success)
    }
}

/// Flip rates of both atoms after encoding each in `code`.
pub fn logical_flip_rates(flip: &FlipRates, code: CodeSpec) -> FlipRates {
    if code.n() == 1 {
        return *flip;
    }
    let (_, fa) = logical_rates(flip.p_noflip_a, flip.p_flip_a, code);
    let (_, fb) = logical_rates(flip.p_noflip_b, flip.p_flip_b, code);
    FlipRates::from_flip_probs(fa, fb)
}

/// Total error with phase flips corrected by `code`. The discrimination
/// error itself is not encoded.
pub fn corrected_total_error(p_e: f64, flip: &FlipRates, code: CodeSpec) -> f64 {
    total_error(p_e, &logical_flip_rates(flip, code))
}
