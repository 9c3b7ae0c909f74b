//! Finite positive measures given as weighted atom lists.
//!
//! Every integral over the underlying measure space is a weighted sum over
//! atoms. Interval measures place midpoint atoms on a uniform grid, so the
//! indicator of any union of grid cells integrates exactly up to rounding
//! in the weights.

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Opaque atom identifier.
///
/// Serialized as an integer, a `{"index":k,"coord":x}` object for interval
/// atoms, or an `[a, b]` pair for product atoms.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AtomLabel {
    Index(i64),
    Point { index: i64, coord: f64 },
    Pair(Box<AtomLabel>, Box<AtomLabel>),
}

impl AtomLabel {
    pub fn pair(a: AtomLabel, b: AtomLabel) -> Self {
        AtomLabel::Pair(Box::new(a), Box::new(b))
    }

    /// Real coordinate carried by interval atoms.
    pub fn coord(&self) -> Option<f64> {
        match self {
            AtomLabel::Point { coord, .. } => Some(*coord),
            _ => None,
        }
    }

    pub fn index(&self) -> Option<i64> {
        match self {
            AtomLabel::Index(i) | AtomLabel::Point { index: i, .. } => Some(*i),
            AtomLabel::Pair(..) => None,
        }
    }

    /// Components of a product atom.
    pub fn components(&self) -> Option<(&AtomLabel, &AtomLabel)> {
        match self {
            AtomLabel::Pair(a, b) => Some((a, b)),
            _ => None,
        }
    }
}

impl PartialEq for AtomLabel {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (AtomLabel::Index(a), AtomLabel::Index(b)) => a == b,
            (
                AtomLabel::Point { index: i, coord: x },
                AtomLabel::Point { index: j, coord: y },
            ) => i == j && x.to_bits() == y.to_bits(),
            (AtomLabel::Pair(a1, b1), AtomLabel::Pair(a2, b2)) => a1 == a2 && b1 == b2,
            _ => false,
        }
    }
}

impl Eq for AtomLabel {}

impl Hash for AtomLabel {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            AtomLabel::Index(i) => {
                0u8.hash(state);
                i.hash(state);
            }
            AtomLabel::Point { index, coord } => {
                1u8.hash(state);
                index.hash(state);
                coord.to_bits().hash(state);
            }
            AtomLabel::Pair(a, b) => {
                2u8.hash(state);
                a.hash(state);
                b.hash(state);
            }
        }
    }
}

impl fmt::Display for AtomLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomLabel::Index(i) => write!(f, "{i}"),
            AtomLabel::Point { coord, .. } => write!(f, "@{coord}"),
            AtomLabel::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

#[derive(Deserialize)]
struct RawMeasure {
    atoms: Vec<AtomLabel>,
    weights: Vec<f64>,
}

/// A finite positive measure on finitely many atoms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasure")]
pub struct DiscreteMeasure {
    atoms: Vec<AtomLabel>,
    weights: Vec<f64>,
}

impl TryFrom<RawMeasure> for DiscreteMeasure {
    type Error = crate::Error;

    fn try_from(raw: RawMeasure) -> Result<Self> {
        DiscreteMeasure::new(raw.atoms, raw.weights)
    }
}

impl DiscreteMeasure {
    pub fn new(atoms: Vec<AtomLabel>, weights: Vec<f64>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(invalid("a measure needs at least one atom"));
        }
        if atoms.len() != weights.len() {
            return Err(invalid(format!(
                "{} atoms but {} weights",
                atoms.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(invalid(format!("weight {w} is not a finite nonnegative number")));
        }
        let mass: f64 = weights.iter().sum();
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(invalid("total mass must be finite and positive"));
        }
        let mut seen = HashSet::with_capacity(atoms.len());
        for a in &atoms {
            if !seen.insert(a) {
                return Err(invalid(format!("duplicate atom label {a}")));
            }
        }
        Ok(DiscreteMeasure { atoms, weights })
    }

    /// Counting measure on the labels `1..=n`.
    pub fn counting(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("counting measure needs n >= 1"));
        }
        let atoms = (1..=n as i64).map(AtomLabel::Index).collect();
        DiscreteMeasure::new(atoms, vec![1.0; n])
    }

    /// Midpoint rule on `[a, b]` with `n` equal cells.
    pub fn interval(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || a >= b {
            return Err(invalid(format!("interval needs a < b, got [{a}, {b}]")));
        }
        if n == 0 {
            return Err(invalid("interval quadrature needs n >= 1"));
        }
        let h = (b - a) / n as f64;
        let atoms = (0..n)
            .map(|k| AtomLabel::Point {
                index: k as i64,
                coord: a + (k as f64 + 0.5) * h,
            })
            .collect();
        DiscreteMeasure::new(atoms, vec![h; n])
    }

    /// Product measure; atoms are ordered pairs in row-major order
    /// (the second factor varies fastest).
    pub fn product(&self, other: &DiscreteMeasure) -> DiscreteMeasure {
        let n = self.len() * other.len();
        let mut atoms = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for (a, wa) in self.atoms.iter().zip(&self.weights) {
            for (b, wb) in other.atoms.iter().zip(&other.weights) {
                atoms.push(AtomLabel::pair(a.clone(), b.clone()));
                weights.push(wa * wb);
            }
        }
        DiscreteMeasure { atoms, weights }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[AtomLabel] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn total_mass(&self) -> f64 {
        self.integrate(&vec![1.0; self.len()]).unwrap_or(0.0)
    }

    pub fn position(&self, label: &AtomLabel) -> Option<usize> {
        self.atoms.iter().position(|a| a == label)
    }

    /// `Σ_s w_s · v_s`, compensated.
    pub fn integrate<T: Summand>(&self, values: &[T]) -> Result<T> {
        if values.len() != self.len() {
            return Err(invalid(format!(
                "{} values for a measure with {} atoms",
                values.len(),
                self.len()
            )));
        }
        Ok(T::weighted_sum(values, &self.weights))
    }

    /// Indicator values of the atoms selected by `pred`.
    pub fn indicator<F: Fn(&AtomLabel) -> bool>(&self, pred: F) -> Vec<f64> {
        self.atoms
            .iter()
            .map(|a| if pred(a) { 1.0 } else { 0.0 })
            .collect()
    }

    /// Measure of the atoms selected by `pred`.
    pub fn measure_of<F: Fn(&AtomLabel) -> bool>(&self, pred: F) -> f64 {
        let ind = self.indicator(pred);
        f64::weighted_sum(&ind, &self.weights)
    }
}

/// Scalars that can be integrated against a measure.
pub trait Summand: Copy + Add<Output = Self> + Mul<f64, Output = Self> {
    fn weighted_sum(values: &[Self], weights: &[f64]) -> Self;
}

impl Summand for f64 {
    fn weighted_sum(values: &[f64], weights: &[f64]) -> f64 {
        neumaier(values.iter().zip(weights).map(|(v, w)| v * w))
    }
}

impl Summand for Complex64 {
    fn weighted_sum(values: &[Complex64], weights: &[f64]) -> Complex64 {
        let re = neumaier(values.iter().zip(weights).map(|(v, w)| v.re * w));
        let im = neumaier(values.iter().zip(weights).map(|(v, w)| v.im * w));
        Complex64::new(re, im)
    }
}

/// Neumaier's compensated summation.
pub(crate) fn neumaier<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}
