use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Random-state model for the bipartite system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleKind {
    HilbertSchmidt,
    BuresHall,
}

impl EnsembleKind {
    pub fn short_name(self) -> &'static str {
        match self {
            Self::HilbertSchmidt => "hs",
            Self::BuresHall => "bh",
        }
    }
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for EnsembleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hs" | "hilbert-schmidt" | "hilbertschmidt" => Ok(Self::HilbertSchmidt),
            "bh" | "bures-hall" | "bureshall" => Ok(Self::BuresHall),
            other => Err(Error::Domain(format!("unknown ensemble '{other}' (expected hs or bh)"))),
        }
    }
}

/// Dimensions `m <= n` of the two subsystems plus the ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EnsembleSpec {
    m: u32,
    n: u32,
    kind: EnsembleKind,
}

impl EnsembleSpec {
    pub fn new(m: u32, n: u32, kind: EnsembleKind) -> Result<Self> {
        if m < 1 {
            return Err(Error::Dimensions(format!("m must be >= 1, got m = {m}")));
        }
        if n < m {
            return Err(Error::Dimensions(format!("n must be >= m, got m = {m}, n = {n}")));
        }
        Ok(Self { m, n, kind })
    }

    pub fn hilbert_schmidt(m: u32, n: u32) -> Result<Self> {
        Self::new(m, n, EnsembleKind::HilbertSchmidt)
    }

    pub fn bures_hall(m: u32, n: u32) -> Result<Self> {
        Self::new(m, n, EnsembleKind::BuresHall)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn kind(&self) -> EnsembleKind {
        self.kind
    }

    pub fn with_kind(self, kind: EnsembleKind) -> Self {
        Self { kind, ..self }
    }

    /// α = n − m.
    pub fn alpha(&self) -> u32 {
        self.n - self.m
    }

    /// β = n − m − 1/2.
    pub fn beta(&self) -> f64 {
        f64::from(self.n - self.m) - 0.5
    }

    /// Exponent of the single-eigenvalue weight `x^e`: α or β.
    pub fn weight_exponent(&self) -> f64 {
        match self.kind {
            EnsembleKind::HilbertSchmidt => f64::from(self.alpha()),
            EnsembleKind::BuresHall => self.beta(),
        }
    }

    /// Shape parameter `d` of the Gamma-distributed trace of the induced
    /// ensemble: `mn` (HS) or `m(2n − m − 1)/2` (BH).
    pub fn trace_dim(&self) -> f64 {
        let (m, n) = (f64::from(self.m), f64::from(self.n));
        match self.kind {
            EnsembleKind::HilbertSchmidt => m * n,
            EnsembleKind::BuresHall => 0.5 * m * (2.0 * n - m - 1.0),
        }
    }

    pub(crate) fn require(&self, kind: EnsembleKind) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(Error::Domain(format!("operation needs the {kind} ensemble, got {}", self.kind)))
        }
    }
}

impl fmt::Display for EnsembleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(m={}, n={})", self.kind, self.m, self.n)
    }
}
