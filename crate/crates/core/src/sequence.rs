//! Pulse-sequence value type and the canonical UDD, CPMG, and CDD families.
//!
//! A sequence of `n` ideal π pulses is described by its relative instants
//! `δ_1 < … < δ_n` in the open unit interval, dimensionless fractions of the
//! total duration. The boundary instants `δ_0 = 0` and `δ_{n+1} = 1` are part
//! of every sequence's contract but carry no pulse. Each position `j` has an
//! integer weight `w_j = 2^{q_j} (−1)^j` with `q_0 = q_{n+1} = 0` and
//! `q_j = 1` in between; the weights of any valid sequence sum to zero.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Validation failures when constructing a [`PulseSequence`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SequenceError {
    /// Generator called with `n = 0`; free evolution is `PulseSequence::custom(&[])`.
    #[error("pulse count must be at least 1 (free evolution is the empty custom sequence)")]
    ZeroPulses,
    /// An instant lies outside the open interval (0, 1).
    #[error("instant {index} = {value} is outside the open interval (0, 1)")]
    OutOfRange { index: usize, value: f64 },
    /// Two consecutive instants coincide.
    #[error("duplicate instant at index {index}")]
    Duplicate { index: usize },
    /// Instants are not strictly increasing.
    #[error("instants not strictly increasing at index {index}")]
    NotIncreasing { index: usize },
}

/// An ordered sequence of `n` ideal pulse instants in (0, 1).
///
/// Instants are stored as `f64` fractions of the total duration; absolute
/// times `t_j = t·δ_j` are derived on demand and never stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseSequence {
    instants: Vec<f64>,
}

impl PulseSequence {
    /// Validates and wraps an arbitrary list of instants.
    ///
    /// The empty list is the valid `n = 0` free-evolution sequence.
    pub fn custom(instants: &[f64]) -> Result<Self, SequenceError> {
        for (i, &d) in instants.iter().enumerate() {
            if !(d > 0.0 && d < 1.0) {
                return Err(SequenceError::OutOfRange { index: i, value: d });
            }
            if i > 0 {
                if d == instants[i - 1] {
                    return Err(SequenceError::Duplicate { index: i });
                }
                if d < instants[i - 1] {
                    return Err(SequenceError::NotIncreasing { index: i });
                }
            }
        }
        Ok(Self {
            instants: instants.to_vec(),
        })
    }

    /// The UDD sequence `δ_j = sin²(jπ / (2(n+1)))`.
    pub fn udd(n: usize) -> Result<Self, SequenceError> {
        if n == 0 {
            return Err(SequenceError::ZeroPulses);
        }
        let instants = (1..=n)
            .map(|j| (j as f64 * PI / (2.0 * (n + 1) as f64)).sin().powi(2))
            .collect();
        Ok(Self { instants })
    }

    /// The equidistant CPMG sequence `δ_j = (2j − 1) / (2n)`.
    pub fn cpmg(n: usize) -> Result<Self, SequenceError> {
        if n == 0 {
            return Err(SequenceError::ZeroPulses);
        }
        let instants = (1..=n)
            .map(|j| (2 * j - 1) as f64 / (2 * n) as f64)
            .collect();
        Ok(Self { instants })
    }

    /// The pure-dephasing concatenated (CDD) sequence at the given level.
    ///
    /// Each step compresses the previous sequence into both halves of the
    /// interval and inserts a junction pulse at 1/2 on even steps only.
    /// Pulse counts follow 0, 1, 2, 5, 10, 21, 42, …
    pub fn cdd(level: usize) -> Self {
        let mut instants: Vec<f64> = Vec::new();
        for step in 0..level {
            let mut next = Vec::with_capacity(2 * instants.len() + 1);
            next.extend(instants.iter().map(|d| d / 2.0));
            if step % 2 == 0 {
                // Interior instants are strictly inside each half, so the
                // junction pulse never collides with them.
                debug_assert!(next.iter().all(|&d| d != 0.5));
                next.push(0.5);
            }
            next.extend(instants.iter().map(|d| 0.5 + d / 2.0));
            instants = next;
        }
        Self { instants }
    }

    /// Number of pulses.
    pub fn n(&self) -> usize {
        self.instants.len()
    }

    /// The pulse instants `δ_1..δ_n` (boundaries excluded).
    pub fn instants(&self) -> &[f64] {
        &self.instants
    }

    /// Instants including the boundaries: `[0, δ_1, …, δ_n, 1]`.
    pub fn extended_instants(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.instants.len() + 2);
        out.push(0.0);
        out.extend_from_slice(&self.instants);
        out.push(1.0);
        out
    }

    /// Weight `w_j = 2^{q_j} (−1)^j` for `j = 0..=n+1`.
    pub fn weight(&self, j: usize) -> i64 {
        weight_of(self.n(), j)
    }

    /// All weights `w_0..w_{n+1}`.
    pub fn weights(&self) -> Vec<i64> {
        (0..self.n() + 2).map(|j| self.weight(j)).collect()
    }

    /// True iff `|δ_{n+1−j} − (1 − δ_j)| ≤ tol` for all `j`.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        let n = self.n();
        (0..n).all(|k| (self.instants[n - 1 - k] - (1.0 - self.instants[k])).abs() <= tol)
    }
}

pub(crate) fn weight_of(n: usize, j: usize) -> i64 {
    debug_assert!(j <= n + 1);
    let sign = if j % 2 == 0 { 1 } else { -1 };
    if j == 0 || j == n + 1 {
        sign
    } else {
        2 * sign
    }
}

/// Weights as `f64`, the form consumed by the numeric kernels.
pub(crate) fn weights_f64(n: usize) -> Vec<f64> {
    (0..n + 2).map(|j| weight_of(n, j) as f64).collect()
}

/// Identifies which generator (and parameters) produced a sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SequenceFamily {
    Udd { n: usize },
    Cpmg { n: usize },
    Cdd { level: usize },
    Plodd { n: usize, alpha: f64 },
    Custom,
}

impl SequenceFamily {
    /// Lowercase tag used in the persisted JSON form.
    pub fn tag(&self) -> &'static str {
        match self {
            SequenceFamily::Udd { .. } => "udd",
            SequenceFamily::Cpmg { .. } => "cpmg",
            SequenceFamily::Cdd { .. } => "cdd",
            SequenceFamily::Plodd { .. } => "plodd",
            SequenceFamily::Custom => "custom",
        }
    }

    /// Family-specific parameters as a JSON object.
    pub fn parameters(&self) -> serde_json::Value {
        match self {
            SequenceFamily::Udd { n } | SequenceFamily::Cpmg { n } => {
                serde_json::json!({ "n": n })
            }
            SequenceFamily::Cdd { level } => serde_json::json!({ "level": level }),
            SequenceFamily::Plodd { n, alpha } => serde_json::json!({ "n": n, "alpha": alpha }),
            SequenceFamily::Custom => serde_json::json!({}),
        }
    }
}

/// Canonical persisted form of a sequence:
/// `{"family", "n", "instants", "parameters"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceRecord {
    pub family: String,
    pub n: usize,
    pub instants: Vec<f64>,
    #[serde(default)]
    pub parameters: serde_json::Value,
}

impl SequenceRecord {
    pub fn new(family: &SequenceFamily, seq: &PulseSequence) -> Self {
        Self {
            family: family.tag().to_string(),
            n: seq.n(),
            instants: seq.instants().to_vec(),
            parameters: family.parameters(),
        }
    }

    /// Revalidates the stored instants into a [`PulseSequence`].
    pub fn to_sequence(&self) -> Result<PulseSequence, SequenceError> {
        PulseSequence::custom(&self.instants)
    }
}
