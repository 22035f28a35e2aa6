use std::collections::HashMap;
use std::hash::Hash;

use crate::grading::{AtomTable, Expression, Monomial};
use crate::taulin::TauScalar;

/// Basis of one (s, f) column of a free F₂[τ]-module: τ-free keys, each with
/// its weight. A homogeneous element of weight w has coefficient τ^(wᵢ − w) or
/// zero on key i.
#[derive(Clone, Debug)]
pub struct ColumnBasis<K> {
    keys: Vec<K>,
    weights: Vec<i32>,
    index: HashMap<K, usize>,
}

impl<K: Clone + Eq + Hash> ColumnBasis<K> {
    pub fn new(keys: Vec<K>, weights: Vec<i32>) -> Self {
        assert_eq!(keys.len(), weights.len());
        let index = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        Self {
            keys,
            weights,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[K] {
        &self.keys
    }

    pub fn key(&self, i: usize) -> &K {
        &self.keys[i]
    }

    pub fn weight(&self, i: usize) -> i32 {
        self.weights[i]
    }

    pub fn position(&self, k: &K) -> Option<usize> {
        self.index.get(k).copied()
    }

    pub fn zero_vector(&self) -> Vec<TauScalar> {
        vec![TauScalar::zero(); self.keys.len()]
    }

    /// The basis vector for key `i`.
    pub fn unit(&self, i: usize) -> Vec<TauScalar> {
        let mut v = self.zero_vector();
        v[i] = TauScalar::one();
        v
    }

    /// Weight of a nonzero homogeneous vector.
    pub fn weight_of(&self, v: &[TauScalar]) -> Option<i32> {
        v.iter()
            .enumerate()
            .find_map(|(i, x)| x.degree().map(|d| self.weights[i] - d as i32))
    }
}

impl ColumnBasis<Monomial> {
    /// Basis of τ-free atom monomials.
    pub fn of_monomials(atoms: &AtomTable, monomials: Vec<Monomial>) -> Self {
        let weights = monomials.iter().map(|m| m.degree(atoms).w).collect();
        Self::new(monomials, weights)
    }

    /// Coordinates of an expression whose terms all live in this column.
    /// Returns the first term that has no basis key on failure.
    pub fn vector(&self, x: &Expression) -> Result<Vec<TauScalar>, Monomial> {
        let mut v = self.zero_vector();
        for m in x.terms() {
            let i = self.position(&m.tau_free()).ok_or_else(|| m.clone())?;
            v[i] += &TauScalar::tau_pow(m.tau_power());
        }
        Ok(v)
    }

    pub fn expression(&self, v: &[TauScalar]) -> Expression {
        let mut out = Expression::zero();
        for (i, x) in v.iter().enumerate() {
            for k in x.exponents() {
                out.toggle(self.keys[i].with_tau(k));
            }
        }
        out
    }
}

/// The degree-`weight` part of each coordinate of `v`.
pub fn homogeneous_part<K>(basis: &ColumnBasis<K>, v: &[TauScalar], weight: i32) -> Vec<TauScalar> {
    v.iter()
        .enumerate()
        .map(|(i, x)| {
            let k = basis.weights[i] - weight;
            if k >= 0 {
                x.component(k as u32)
            } else {
                TauScalar::zero()
            }
        })
        .collect()
}
