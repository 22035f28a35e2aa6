use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::column::{homogeneous_part, ColumnBasis};
use super::enumerate::column_monomials;
use crate::grading::{is_homogeneous, AtomTable, Expression, HomogeneityWitness, Monomial, TriDegree};
use crate::taulin::{SubquotientBasis, SubquotientError, TauScalar, TorsionModule};

/// Stems (and optionally filtrations) in which a relation list is asserted
/// complete. Bounds are inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub min_stem: i32,
    pub max_stem: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_filtration: Option<i32>,
}

impl Window {
    pub fn stems(min_stem: i32, max_stem: i32) -> Self {
        Self {
            min_stem,
            max_stem,
            max_filtration: None,
        }
    }

    pub fn contains_column(&self, s: i32, f: i32) -> bool {
        s >= self.min_stem && s <= self.max_stem && self.max_filtration.is_none_or(|m| f <= m)
    }

    pub fn contains(&self, d: TriDegree) -> bool {
        self.contains_column(d.s, d.f)
    }
}

/// A finitely presented trigraded commutative F₂[τ]-algebra: atoms modulo
/// homogeneous relations (each meaning "= 0").
#[derive(Clone, Debug)]
pub struct Presentation {
    pub atoms: AtomTable,
    pub relations: Vec<Expression>,
    pub window: Option<Window>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("relation {index} is not homogeneous: {witness:?}")]
    InhomogeneousRelation {
        index: usize,
        witness: HomogeneityWitness,
    },
    #[error("expression is not homogeneous: {0:?}")]
    Inhomogeneous(HomogeneityWitness),
    #[error("inconsistent linear algebra: {0}")]
    Linear(#[from] SubquotientError),
}

impl Presentation {
    pub fn new(atoms: AtomTable, relations: Vec<Expression>, window: Option<Window>) -> Result<Self, AlgebraError> {
        for (index, r) in relations.iter().enumerate() {
            is_homogeneous(r, &atoms).map_err(|witness| AlgebraError::InhomogeneousRelation { index, witness })?;
        }
        Ok(Self {
            atoms,
            relations: relations.into_iter().filter(|r| !r.is_zero()).collect(),
            window,
        })
    }

    pub fn free(atoms: AtomTable) -> Self {
        Self {
            atoms,
            relations: vec![],
            window: None,
        }
    }

    pub fn is_complete_at(&self, s: i32, f: i32) -> bool {
        self.window.is_some_and(|w| w.contains_column(s, f))
    }

    pub fn relation_degree(&self, i: usize) -> TriDegree {
        is_homogeneous(&self.relations[i], &self.atoms)
            .ok()
            .flatten()
            .expect("relations are homogeneous and nonzero")
    }

    pub fn column_basis(&self, s: i32, f: i32) -> ColumnBasis<Monomial> {
        ColumnBasis::of_monomials(&self.atoms, column_monomials(&self.atoms, s, f, None))
    }

    /// Every relation times every τ-free monomial of complementary column, as
    /// vectors over `basis` (which must be the full (s, f) column).
    pub fn relation_multiples(&self, s: i32, f: i32, basis: &ColumnBasis<Monomial>) -> Vec<Vec<TauScalar>> {
        let mut out = Vec::new();
        for i in 0..self.relations.len() {
            let d = self.relation_degree(i);
            for m in column_monomials(&self.atoms, s - d.s, f - d.f, None) {
                let v = basis
                    .vector(&self.relations[i].mul_monomial(&m))
                    .expect("relation multiple lies in its column");
                if v.iter().any(|x| !x.is_zero()) {
                    out.push(v);
                }
            }
        }
        out
    }

    /// The (s, f) column of the quotient algebra.
    pub fn column(&self, s: i32, f: i32) -> Result<ColumnQuotient, AlgebraError> {
        let basis = self.column_basis(s, f);
        let rels = self.relation_multiples(s, f, &basis);
        let cycles: Vec<Vec<TauScalar>> = (0..basis.len()).map(|i| basis.unit(i)).collect();
        let quotient = SubquotientBasis::new(basis.len(), &cycles, &rels)?;
        Ok(ColumnQuotient {
            elements: elements_of(&basis, &quotient),
            basis,
            quotient,
            complete: self.is_complete_at(s, f),
        })
    }
}

fn elements_of(basis: &ColumnBasis<Monomial>, q: &SubquotientBasis) -> Vec<BasisElement> {
    q.summands
        .iter()
        .map(|s| {
            let weight = basis.weight_of(&s.representative).expect("summand representatives are nonzero");
            BasisElement {
                module: s.module,
                weight,
                representative: basis.expression(&s.representative),
            }
        })
        .collect()
}

/// One cyclic summand of a column: generated in `weight` by `representative`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub module: TorsionModule,
    pub weight: i32,
    pub representative: Expression,
}

#[derive(Clone, Debug)]
pub struct ColumnQuotient {
    pub basis: ColumnBasis<Monomial>,
    pub quotient: SubquotientBasis,
    pub elements: Vec<BasisElement>,
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBasis {
    pub degree: TriDegree,
    pub elements: Vec<BasisElement>,
    /// False outside the presentation's completeness window: the result is
    /// then only an upper-bound model.
    pub complete: bool,
}

/// Cyclic summands of the quotient algebra generated exactly in degree `deg`.
pub fn graded_basis(p: &Presentation, deg: TriDegree) -> Result<GradedBasis, AlgebraError> {
    let col = p.column(deg.s, deg.f)?;
    Ok(GradedBasis {
        degree: deg,
        elements: col.elements.into_iter().filter(|e| e.weight == deg.w).collect(),
        complete: col.complete,
    })
}

/// [`graded_basis`] over many degrees, computed in parallel; output order
/// follows the input.
pub fn graded_bases(p: &Presentation, degs: &[TriDegree]) -> Vec<Result<GradedBasis, AlgebraError>> {
    degs.par_iter().map(|&d| graded_basis(p, d)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub degree: Option<TriDegree>,
    /// Nonzero coordinates against the column's summands: (summand, element,
    /// coefficient τᵏ).
    pub coordinates: Vec<(BasisElement, TauScalar)>,
    /// The reduced expression Σ coefficient · representative.
    pub value: Expression,
    pub complete: bool,
}

impl NormalForm {
    /// `Some(true)` when the element is zero, `Some(false)` when it is known
    /// to be nonzero, `None` when it survives only in an upper-bound model.
    pub fn is_zero(&self) -> Option<bool> {
        if self.value.is_zero() {
            Some(true)
        } else if self.complete {
            Some(false)
        } else {
            None
        }
    }
}

/// Image of `x` in the quotient, expressed in the column's chosen basis.
pub fn normal_form(x: &Expression, p: &Presentation) -> Result<NormalForm, AlgebraError> {
    let Some(deg) = is_homogeneous(x, &p.atoms).map_err(AlgebraError::Inhomogeneous)? else {
        return Ok(NormalForm {
            degree: None,
            coordinates: vec![],
            value: Expression::zero(),
            complete: true,
        });
    };
    let col = p.column(deg.s, deg.f)?;
    Ok(col.reduce(x, deg))
}

impl ColumnQuotient {
    /// Reduces a homogeneous expression of degree `deg` living in this column.
    pub fn reduce(&self, x: &Expression, deg: TriDegree) -> NormalForm {
        let v = self.basis.vector(x).expect("expression lies in its column");
        let coords = self.quotient.coordinates(&v).expect("every vector is a cycle of a free module");
        let mut value = Expression::zero();
        let mut coordinates = Vec::new();
        for (el, (c, s)) in self.elements.iter().zip(coords.iter().zip(&self.quotient.summands)) {
            let k = el.weight - deg.w;
            if k < 0 || c.is_zero() {
                continue;
            }
            let c = c.component(k as u32);
            if c.is_zero() {
                continue;
            }
            let term: Vec<TauScalar> = s.representative.iter().map(|r| r * &c).collect();
            value.add_assign(&self.basis.expression(&homogeneous_part(&self.basis, &term, deg.w)));
            coordinates.push((el.clone(), c));
        }
        NormalForm {
            degree: Some(deg),
            coordinates,
            value,
            complete: self.complete,
        }
    }
}
