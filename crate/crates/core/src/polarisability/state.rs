use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::special_math::{triangle, HalfInteger};

use super::PolarError;

/// Hund's coupling case with its case-specific quantum number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "lowercase")]
pub enum Coupling {
    /// Case (a): spin projection `Σ` on the axis; `Ω = Λ + Σ`.
    A { sigma: HalfInteger },
    /// Case (b): rotational angular momentum `N` without spin.
    B { n: HalfInteger },
}

/// A molecular state `(Λ, S, Σ, v, J, Ω, M)` or `(Λ, S, N, v, J, M)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StateLabel {
    /// Signed projection `Λ` of the electronic orbital momentum.
    pub lambda: HalfInteger,
    pub spin: HalfInteger,
    pub coupling: Coupling,
    pub v: usize,
    pub j: HalfInteger,
    pub m: HalfInteger,
}

fn invalid(msg: String) -> PolarError {
    PolarError::InvalidState(msg)
}

impl StateLabel {
    pub fn case_a(
        lambda: HalfInteger,
        spin: HalfInteger,
        sigma: HalfInteger,
        v: usize,
        j: HalfInteger,
        m: HalfInteger,
    ) -> Result<Self, PolarError> {
        Self { lambda, spin, coupling: Coupling::A { sigma }, v, j, m }.validated()
    }

    pub fn case_b(
        lambda: HalfInteger,
        spin: HalfInteger,
        n: HalfInteger,
        v: usize,
        j: HalfInteger,
        m: HalfInteger,
    ) -> Result<Self, PolarError> {
        Self { lambda, spin, coupling: Coupling::B { n }, v, j, m }.validated()
    }

    /// Checks integrality, projection bounds and the coupling rules.
    pub fn validated(self) -> Result<Self, PolarError> {
        if self.spin.twice_value() < 0 || self.j.twice_value() < 0 {
            return Err(invalid(format!("S = {} and J = {} must be non-negative", self.spin, self.j)));
        }
        if !self.lambda.is_integer() {
            return Err(invalid(format!("Λ = {} must be an integer", self.lambda)));
        }
        if self.m.abs() > self.j || !(self.m - self.j).is_integer() {
            return Err(invalid(format!("M = {} incompatible with J = {}", self.m, self.j)));
        }
        match self.coupling {
            Coupling::A { sigma } => {
                if sigma.abs() > self.spin || !(sigma - self.spin).is_integer() {
                    return Err(invalid(format!("Σ = {sigma} incompatible with S = {}", self.spin)));
                }
                let omega = self.lambda + sigma;
                if omega.abs() > self.j || !(omega - self.j).is_integer() {
                    return Err(invalid(format!("Ω = {omega} incompatible with J = {}", self.j)));
                }
            }
            Coupling::B { n } => {
                if !n.is_integer() || n.twice_value() < 0 {
                    return Err(invalid(format!("N = {n} must be a non-negative integer")));
                }
                if self.lambda.abs() > n {
                    return Err(invalid(format!("|Λ| = {} exceeds N = {n}", self.lambda.abs())));
                }
                if !triangle(n, self.spin, self.j) {
                    return Err(invalid(format!("J = {} not in |N − S|..N + S for N = {n}, S = {}", self.j, self.spin)));
                }
            }
        }
        Ok(self)
    }

    /// `Ω = Λ + Σ` in case (a).
    pub fn omega(&self) -> Option<HalfInteger> {
        match self.coupling {
            Coupling::A { sigma } => Some(self.lambda + sigma),
            Coupling::B { .. } => None,
        }
    }

    pub fn case_name(&self) -> &'static str {
        match self.coupling {
            Coupling::A { .. } => "a",
            Coupling::B { .. } => "b",
        }
    }
}

impl fmt::Display for StateLabel {
    /// Same syntax [`FromStr`] accepts.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.coupling {
            Coupling::A { sigma } => write!(
                f,
                "a:L={},S={},Sigma={sigma},v={},J={},M={}",
                self.lambda, self.spin, self.v, self.j, self.m
            ),
            Coupling::B { n } => {
                write!(f, "b:L={},S={},N={n},v={},J={},M={}", self.lambda, self.spin, self.v, self.j, self.m)
            }
        }
    }
}

impl FromStr for StateLabel {
    type Err = PolarError;

    /// Parses `a:L=0,S=1,Sigma=1,v=0,J=1,M=0` or `b:L=0,S=1,N=0,v=0,J=1,M=0`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (case, rest) = s.trim().split_once(':').ok_or_else(|| invalid(format!("missing case prefix in {s:?}")))?;
        let mut fields = std::collections::BTreeMap::new();
        for item in rest.split(',') {
            let (k, v) = item.split_once('=').ok_or_else(|| invalid(format!("malformed item {item:?}")))?;
            if fields.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                return Err(invalid(format!("duplicate key {:?}", k.trim())));
            }
        }
        let mut take = |key: &str| fields.remove(key).ok_or_else(|| invalid(format!("missing {key}")));
        let half = |key: &str, v: String| -> Result<HalfInteger, PolarError> {
            v.parse().map_err(|e| invalid(format!("{key}: {e}")))
        };
        let lambda = half("L", take("L")?)?;
        let spin = half("S", take("S")?)?;
        let v: usize = take("v")?.parse().map_err(|_| invalid("v must be a non-negative integer".into()))?;
        let j = half("J", take("J")?)?;
        let m = half("M", take("M")?)?;
        let label = match case.trim() {
            "a" => Self::case_a(lambda, spin, half("Sigma", take("Sigma")?)?, v, j, m)?,
            "b" => Self::case_b(lambda, spin, half("N", take("N")?)?, v, j, m)?,
            other => return Err(invalid(format!("unknown Hund case {other:?}"))),
        };
        if let Some(extra) = fields.keys().next() {
            return Err(invalid(format!("unexpected key {extra:?}")));
        }
        Ok(label)
    }
}
