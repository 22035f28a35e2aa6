use std::collections::HashMap;

use super::enumerate::enumerate_monomials;
use super::quotient::{AlgebraError, Presentation};
use crate::grading::{is_homogeneous, AtomTable, Expression, Monomial, TriDegree};
use crate::taulin::{BitVector, Gf2Span};

/// The F₂-vector space of all monomials (τ-power included) of one exact
/// tridegree, indexed in canonical order.
#[derive(Clone, Debug)]
pub struct DegreeSpace {
    pub degree: TriDegree,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl DegreeSpace {
    pub fn new(atoms: &AtomTable, degree: TriDegree) -> Self {
        let monomials = if degree.f < 0 {
            vec![]
        } else {
            enumerate_monomials(atoms, degree)
        };
        let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Self {
            degree,
            monomials,
            index,
        }
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    /// Coordinates of `x`; fails with the first term outside this degree.
    pub fn vector(&self, x: &Expression) -> Result<BitVector, Monomial> {
        let mut v = BitVector::zeros(self.dim());
        for m in x.terms() {
            v.flip(*self.index.get(m).ok_or_else(|| m.clone())?);
        }
        Ok(v)
    }

    pub fn expression(&self, v: &BitVector) -> Expression {
        Expression::from_terms(v.ones().map(|i| self.monomials[i].clone()))
    }
}

/// Every product relation × monomial landing in `space`, as vectors.
pub fn relation_multiples(atoms: &AtomTable, relations: &[Expression], space: &DegreeSpace) -> Vec<BitVector> {
    let mut out = Vec::new();
    for r in relations {
        let Ok(Some(d)) = is_homogeneous(r, atoms) else {
            continue;
        };
        let rest = space.degree - d;
        if rest.f < 0 {
            continue;
        }
        for m in enumerate_monomials(atoms, rest) {
            let v = space.vector(&r.mul_monomial(&m)).expect("relation multiple lies in its degree");
            if !v.is_zero() {
                out.push(v);
            }
        }
    }
    out
}

/// The span of all relation multiples in `space`.
pub fn relation_span(atoms: &AtomTable, relations: &[Expression], space: &DegreeSpace) -> Gf2Span {
    let rows = relation_multiples(atoms, relations, space);
    let mut span = Gf2Span::new(space.dim(), rows.len());
    for r in rows {
        span.insert(r);
    }
    span
}

/// Whether `x` lies in the ideal generated by the presentation's relations.
pub fn ideal_contains(p: &Presentation, x: &Expression) -> Result<bool, AlgebraError> {
    let Some(deg) = is_homogeneous(x, &p.atoms).map_err(AlgebraError::Inhomogeneous)? else {
        return Ok(true);
    };
    let space = DegreeSpace::new(&p.atoms, deg);
    let span = relation_span(&p.atoms, &p.relations, &space);
    Ok(span.contains(&space.vector(x).expect("homogeneous expression lies in its degree")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::parse_expression;

    #[test]
    fn membership() {
        let a = AtomTable::mmf();
        let rels = ["h_0 h_1", "c u + h_1^2 e"].map(|s| parse_expression(s, &a).unwrap()).to_vec();
        let p = Presentation::new(a.clone(), rels, None).unwrap();
        let yes = parse_expression("tau h_0 h_1 g + c u d", &a);
        assert!(yes.is_err(), "mixed degrees are rejected by the parser");
        assert!(ideal_contains(&p, &parse_expression("h_0 h_1 g", &a).unwrap()).unwrap());
        assert!(ideal_contains(&p, &parse_expression("c u d + h_1^2 d e", &a).unwrap()).unwrap());
        assert!(!ideal_contains(&p, &parse_expression("c u d", &a).unwrap()).unwrap());
        assert!(ideal_contains(&p, &Expression::zero()).unwrap());
    }

    #[test]
    fn degree_space_round_trip() {
        let a = AtomTable::mmf();
        let s = DegreeSpace::new(&a, TriDegree::new(22, 6, 13));
        let x = parse_expression("tau h_1^2 g + tau u^2", &a).unwrap();
        assert_eq!(s.expression(&s.vector(&x).unwrap()), x);
    }
}
