//! Finite discrete distributions over opaque string labels.
//!
//! The JSON form is an array of atoms, `[{"label": "a", "mass": 0.25}, …]`,
//! and that is exactly how [`DiscreteDist`] serializes. Construction validates
//! that labels are distinct, masses are nonnegative and finite, and the total
//! mass is within 1e-9 of 1; the masses are then renormalized so downstream
//! arithmetic can rely on an exact unit sum (up to one division's rounding).
//! Atom order is preserved from the input, which keeps reports byte-stable.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// How far the raw mass sum may sit from 1 before construction refuses.
pub const MASS_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Atom {
    pub label: String,
    pub mass: f64,
}

/// A validated probability mass function on finitely many labels.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "Vec<Atom>", into = "Vec<Atom>")]
pub struct DiscreteDist {
    atoms: Vec<Atom>,
    index: HashMap<String, usize>,
}

impl DiscreteDist {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidDist("no atoms".to_string()));
        }
        let mut index = HashMap::with_capacity(atoms.len());
        let mut sum = 0.0;
        for (i, atom) in atoms.iter().enumerate() {
            if !atom.mass.is_finite() || atom.mass < 0.0 {
                return Err(Error::InvalidDist(format!(
                    "atom {:?} has mass {}, want finite ≥ 0",
                    atom.label, atom.mass
                )));
            }
            if index.insert(atom.label.clone(), i).is_some() {
                return Err(Error::InvalidDist(format!(
                    "duplicate label {:?}",
                    atom.label
                )));
            }
            sum += atom.mass;
        }
        if (sum - 1.0).abs() > MASS_SUM_TOLERANCE {
            return Err(Error::InvalidDist(format!(
                "masses sum to {sum}, want 1 ± {MASS_SUM_TOLERANCE}"
            )));
        }
        let mut atoms = atoms;
        for atom in &mut atoms {
            atom.mass /= sum;
        }
        Ok(DiscreteDist { atoms, index })
    }

    pub fn from_pairs<L, I>(pairs: I) -> Result<Self>
    where
        L: Into<String>,
        I: IntoIterator<Item = (L, f64)>,
    {
        Self::new(
            pairs
                .into_iter()
                .map(|(label, mass)| Atom {
                    label: label.into(),
                    mass,
                })
                .collect(),
        )
    }

    /// Two-point distribution on labels "0"/"1" with mass `p` on "1".
    pub fn bernoulli(p: f64) -> Result<Self> {
        Self::from_pairs(vec![("0", 1.0 - p), ("1", p)])
    }

    pub fn point_mass<L: Into<String>>(label: L) -> Self {
        DiscreteDist::from_pairs(vec![(label.into(), 1.0)]).expect("point mass is always valid")
    }

    /// Mass of `label`, zero when the label is not carried.
    pub fn mass(&self, label: &str) -> f64 {
        self.index.get(label).map_or(0.0, |&i| self.atoms[i].mass)
    }

    pub fn contains(&self, label: &str) -> bool {
        self.index.contains_key(label)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> + '_ {
        self.atoms.iter().map(|a| (a.label.as_str(), a.mass))
    }

    /// Labels of `self` followed by labels only `other` carries: a
    /// deterministic enumeration of the union of the two supports.
    pub fn union_labels<'a>(&'a self, other: &'a DiscreteDist) -> Vec<&'a str> {
        let mut labels: Vec<&str> = self.atoms.iter().map(|a| a.label.as_str()).collect();
        labels.extend(
            other
                .atoms
                .iter()
                .map(|a| a.label.as_str())
                .filter(|l| !self.contains(l)),
        );
        labels
    }

    /// Total variation distance ½ Σ_x |self(x) − other(x)|, exact over the
    /// union of supports.
    pub fn tv_distance(&self, other: &DiscreteDist) -> f64 {
        0.5 * self
            .union_labels(other)
            .iter()
            .map(|label| (self.mass(label) - other.mass(label)).abs())
            .sum::<f64>()
    }
}

impl PartialEq for DiscreteDist {
    fn eq(&self, other: &Self) -> bool {
        self.atoms == other.atoms
    }
}

impl TryFrom<Vec<Atom>> for DiscreteDist {
    type Error = Error;
    fn try_from(atoms: Vec<Atom>) -> Result<Self> {
        DiscreteDist::new(atoms)
    }
}

impl From<DiscreteDist> for Vec<Atom> {
    fn from(d: DiscreteDist) -> Vec<Atom> {
        d.atoms
    }
}
