use std::collections::BTreeSet;
use std::fmt::Write as _;

use smallvec::SmallVec;

use super::{AtomTable, TriDegree};

/// A product of atoms times a power of τ.
///
/// Exponents are stored densely in atom-table order. Ordering is lexicographic
/// on the exponent vector and then on the τ-power; it is the canonical term and
/// basis order everywhere in the crate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: SmallVec<[u16; 16]>,
    tau: u32,
}

impl Monomial {
    pub fn one(atoms: &AtomTable) -> Self {
        Self {
            exps: SmallVec::from_elem(0, atoms.len()),
            tau: 0,
        }
    }

    pub fn from_exponents(exps: &[u16], tau: u32) -> Self {
        Self {
            exps: SmallVec::from_slice(exps),
            tau,
        }
    }

    pub fn atom(atoms: &AtomTable, i: usize) -> Self {
        let mut m = Self::one(atoms);
        m.exps[i] = 1;
        m
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    pub fn exponent(&self, i: usize) -> u16 {
        self.exps[i]
    }

    pub fn tau_power(&self) -> u32 {
        self.tau
    }

    pub fn with_tau(&self, tau: u32) -> Self {
        Self {
            exps: self.exps.clone(),
            tau,
        }
    }

    /// The same monomial with the τ factor removed.
    pub fn tau_free(&self) -> Self {
        self.with_tau(0)
    }

    pub fn is_one(&self) -> bool {
        self.tau == 0 && self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), o.exps.len());
        Monomial {
            exps: self.exps.iter().zip(&o.exps).map(|(a, b)| a + b).collect(),
            tau: self.tau + o.tau,
        }
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial {
            exps: self.exps.iter().map(|&a| a * k as u16).collect(),
            tau: self.tau * k,
        }
    }

    /// `self / o` when `o` divides `self` (τ-power included).
    pub fn div(&self, o: &Monomial) -> Option<Monomial> {
        if o.tau > self.tau {
            return None;
        }
        let mut exps = SmallVec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&o.exps) {
            exps.push(a.checked_sub(*b)?);
        }
        Some(Monomial {
            exps,
            tau: self.tau - o.tau,
        })
    }

    pub fn degree(&self, atoms: &AtomTable) -> TriDegree {
        let mut d = (self.tau as i32) * TriDegree::TAU;
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                d += (e as i32) * atoms.degree(i);
            }
        }
        d
    }

    /// Table notation: atoms in table order with `^k`, τ-power last.
    pub fn render(&self, atoms: &AtomTable) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(atoms.get(i).name.clone()),
                _ => parts.push(format!("{}^{}", atoms.get(i).name, e)),
            }
        }
        match self.tau {
            0 => {}
            1 => parts.push("tau".into()),
            k => parts.push(format!("tau^{k}")),
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }
}

/// An F₂-linear combination of monomials, kept canonical: a repeated monomial
/// cancels.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Expression {
    terms: BTreeSet<Monomial>,
}

impl Expression {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: Monomial) -> Self {
        let mut e = Self::zero();
        e.toggle(m);
        e
    }

    pub fn from_terms<I: IntoIterator<Item = Monomial>>(terms: I) -> Self {
        let mut e = Self::zero();
        for m in terms {
            e.toggle(m);
        }
        e
    }

    pub fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter()
    }

    pub fn as_monomial(&self) -> Option<&Monomial> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn add(&self, o: &Expression) -> Expression {
        let mut out = self.clone();
        out.add_assign(o);
        out
    }

    pub fn add_assign(&mut self, o: &Expression) {
        for m in &o.terms {
            self.toggle(m.clone());
        }
    }

    pub fn mul(&self, o: &Expression) -> Expression {
        let mut out = Expression::zero();
        for a in &self.terms {
            for b in &o.terms {
                out.toggle(a.mul(b));
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Expression {
        Expression::from_terms(self.terms.iter().map(|a| a.mul(m)))
    }

    pub fn pow(&self, k: u32) -> Expression {
        let mut out = match self.terms.iter().next() {
            Some(m) => Expression::monomial(Monomial::one_like(m)),
            None => return if k == 0 { self.clone() } else { Expression::zero() },
        };
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Multiplies every term by τᵏ.
    pub fn tau_shift(&self, k: u32) -> Expression {
        Expression::from_terms(self.terms.iter().map(|m| m.with_tau(m.tau_power() + k)))
    }

    /// Sets τ = 1 (terms that collide cancel mod 2).
    pub fn invert_tau(&self) -> Expression {
        Expression::from_terms(self.terms.iter().map(Monomial::tau_free))
    }

    pub fn render(&self, atoms: &AtomTable) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, m) in self.terms.iter().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            let _ = write!(out, "{}", m.render(atoms));
        }
        out
    }
}

impl Monomial {
    pub(crate) fn one_like(m: &Monomial) -> Monomial {
        Monomial {
            exps: SmallVec::from_elem(0, m.exps.len()),
            tau: 0,
        }
    }
}

/// Two terms of an expression that live in different degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneityWitness {
    pub first: Monomial,
    pub first_degree: TriDegree,
    pub second: Monomial,
    pub second_degree: TriDegree,
}

/// `Ok(Some(d))` when every term has degree `d`; `Ok(None)` for the zero
/// expression, which is homogeneous in every degree.
pub fn is_homogeneous(
    x: &Expression,
    atoms: &AtomTable,
) -> Result<Option<TriDegree>, HomogeneityWitness> {
    let mut it = x.terms();
    let Some(first) = it.next() else {
        return Ok(None);
    };
    let d = first.degree(atoms);
    for m in it {
        let dm = m.degree(atoms);
        if dm != d {
            return Err(HomogeneityWitness {
                first: first.clone(),
                first_degree: d,
                second: m.clone(),
                second_degree: dm,
            });
        }
    }
    Ok(Some(d))
}

/// The common degree of a homogeneous expression.
pub fn degree_of(x: &Expression, atoms: &AtomTable) -> Result<Option<TriDegree>, HomogeneityWitness> {
    is_homogeneous(x, atoms)
}
