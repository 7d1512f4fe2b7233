//! Objectives presented as exact comparison oracles.
//!
//! Every objective evaluates to an exact rational "key" and two points are
//! compared by their keys. Norms are keyed by the integer p-th power so no
//! root is ever taken.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Signed, Zero};

use crate::error::{Error, Result};
use crate::instance::Projection;

/// Direction of optimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Max,
    Min,
}

impl Sense {
    /// Turns an ordering of objective values into a preference ordering,
    /// where `Greater` means "better".
    pub fn orient(self, ord: Ordering) -> Ordering {
        match self {
            Sense::Max => ord,
            Sense::Min => ord.reverse(),
        }
    }
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Max => "max",
            Sense::Min => "min",
        })
    }
}

/// Exponent of an lp norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PNorm {
    Finite(u32),
    Infinity,
}

impl PNorm {
    pub fn finite(p: u32) -> Result<Self> {
        if p == 0 {
            Err(Error::InvalidExponent)
        } else {
            Ok(PNorm::Finite(p))
        }
    }

    /// `Σ|y_k|^p`, or `max|y_k|` for infinity.
    pub fn powered(self, y: &[BigInt]) -> BigInt {
        match self {
            PNorm::Finite(p) => y.iter().map(|v| Pow::pow(v.abs(), p)).sum(),
            PNorm::Infinity => y.iter().map(BigInt::abs).max().unwrap_or_default(),
        }
    }
}

impl fmt::Display for PNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PNorm::Finite(p) => write!(f, "{p}"),
            PNorm::Infinity => f.write_str("inf"),
        }
    }
}

/// Compares two points by their lp norms using exact integer powers.
pub fn norm_compare(p: PNorm, y: &Projection, z: &Projection) -> Result<Ordering> {
    if y.len() != z.len() {
        return Err(Error::LengthMismatch { expected: y.len(), found: z.len() });
    }
    Ok(p.powered(y.coords()).cmp(&p.powered(z.coords())))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObjectiveKind {
    LpNorm(PNorm),
    /// `Σ (y_k - u_k)^2`.
    QuadraticDistance(Vec<BigInt>),
    /// `c · y`.
    Linear(Vec<BigInt>),
    /// Explicit values; points missing from the table take `default`.
    Table { values: BTreeMap<Projection, BigRational>, default: BigRational },
}

/// A function on Z^d together with an optimization sense.
///
/// `offset` translates the argument: the objective evaluates `f(y + offset)`.
/// Normalization and restriction compose by adding offsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Objective {
    kind: ObjectiveKind,
    sense: Sense,
    offset: Option<Projection>,
}

impl Objective {
    pub fn new(kind: ObjectiveKind, sense: Sense) -> Self {
        Self { kind, sense, offset: None }
    }

    pub fn lp_norm(p: PNorm, sense: Sense) -> Self {
        Self::new(ObjectiveKind::LpNorm(p), sense)
    }

    pub fn quadratic_distance(u: &[i64], sense: Sense) -> Self {
        Self::new(ObjectiveKind::QuadraticDistance(u.iter().map(|&v| v.into()).collect()), sense)
    }

    pub fn linear(c: &[i64], sense: Sense) -> Self {
        Self::new(ObjectiveKind::Linear(c.iter().map(|&v| v.into()).collect()), sense)
    }

    pub fn table(values: BTreeMap<Projection, BigRational>, default: BigRational, sense: Sense) -> Self {
        Self::new(ObjectiveKind::Table { values, default }, sense)
    }

    pub fn kind(&self) -> &ObjectiveKind {
        &self.kind
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn offset(&self) -> Option<&Projection> {
        self.offset.as_ref()
    }

    pub fn with_sense(&self, sense: Sense) -> Self {
        Self { sense, ..self.clone() }
    }

    /// The objective `y ↦ f(y + delta)`.
    pub fn shifted(&self, delta: &Projection) -> Self {
        let offset = match &self.offset {
            Some(o) => o.add(delta),
            None => delta.clone(),
        };
        Self { offset: Some(offset), ..self.clone() }
    }

    fn check_len(&self, y: &Projection) -> Result<()> {
        let expected = match &self.kind {
            ObjectiveKind::QuadraticDistance(u) => Some(u.len()),
            ObjectiveKind::Linear(c) => Some(c.len()),
            _ => self.offset.as_ref().map(Projection::len),
        };
        match expected {
            Some(expected) if expected != y.len() => Err(Error::LengthMismatch { expected, found: y.len() }),
            _ => Ok(()),
        }
    }

    /// Exact value of the comparison key at `y` (after applying the offset).
    /// For lp norms this is the p-th power of the norm.
    pub fn value(&self, y: &Projection) -> BigRational {
        let shifted;
        let y = match &self.offset {
            Some(o) => {
                shifted = y.add(o);
                &shifted
            }
            None => y,
        };
        match &self.kind {
            ObjectiveKind::LpNorm(p) => p.powered(y.coords()).into(),
            ObjectiveKind::QuadraticDistance(u) => {
                let s: BigInt = y.0.iter().zip(u).map(|(a, b)| {
                    let t = a - b;
                    &t * &t
                }).sum();
                s.into()
            }
            ObjectiveKind::Linear(c) => {
                let s: BigInt = y.0.iter().zip(c).map(|(a, b)| a * b).sum();
                s.into()
            }
            ObjectiveKind::Table { values, default } => values.get(y).unwrap_or(default).clone(),
        }
    }

    /// Orders `f(y)` against `f(z)` and records one oracle query.
    pub fn compare(&self, y: &Projection, z: &Projection, counter: &OracleCounter) -> Result<Ordering> {
        if y.len() != z.len() {
            return Err(Error::LengthMismatch { expected: y.len(), found: z.len() });
        }
        self.check_len(y)?;
        counter.tick();
        Ok(self.value(y).cmp(&self.value(z)))
    }

    /// Like [`compare`](Self::compare) but oriented by the sense:
    /// `Greater` means `y` is strictly better than `z`.
    pub fn prefer(&self, y: &Projection, z: &Projection, counter: &OracleCounter) -> Result<Ordering> {
        Ok(self.sense.orient(self.compare(y, z, counter)?))
    }

    /// Best point of `points` under the sense; ties go to the
    /// lexicographically smallest point.
    pub fn best<'a, I>(&self, points: I, counter: &OracleCounter) -> Result<Option<&'a Projection>>
    where
        I: IntoIterator<Item = &'a Projection>,
    {
        let mut best: Option<&Projection> = None;
        for y in points {
            best = match best {
                None => Some(y),
                Some(b) => match self.prefer(y, b, counter)? {
                    Ordering::Greater => Some(y),
                    Ordering::Equal if y < b => Some(y),
                    _ => Some(b),
                },
            };
        }
        Ok(best)
    }

    /// Whether the value is zero, used by the specified-value decision.
    pub fn is_zero_at(&self, y: &Projection) -> bool {
        self.value(y).is_zero()
    }
}

/// Counts comparison-oracle queries. Safe to share across threads.
#[derive(Debug, Default)]
pub struct OracleCounter(AtomicU64);

impl OracleCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn tick(&self) {
        self.0.fetch_add(1, AtomicOrdering::Relaxed);
    }

    pub fn queries(&self) -> u64 {
        self.0.load(AtomicOrdering::Relaxed)
    }
}
