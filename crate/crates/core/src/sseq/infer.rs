use super::leibniz::{KeySet, Unresolved};
use super::page::Page;
use crate::algebra::{relation_multiples, relation_span, DegreeSpace};
use crate::grading::{is_homogeneous, AtomTable, Expression, Formula, TriDegree};
use crate::taulin::{gf2_solve, BitVector, Gf2Span};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InferError {
    #[error("the differential of `{atom}` is not determined by the table")]
    Unresolved { atom: String },
    #[error("`{0}` is zero or inhomogeneous")]
    BadUnknown(String),
    #[error("the relation is zero or inhomogeneous")]
    BadRelation,
    #[error("the unknown does not occur linearly in the relation")]
    NotLinear,
    #[error("no value of d({unknown}) satisfies {cofactor} * d({unknown}) = {rhs}")]
    Inconsistent {
        unknown: String,
        cofactor: String,
        rhs: String,
    },
}

/// Outcome of solving cofactor · d(X) = rhs modulo the page relations.
#[derive(Clone, Debug)]
pub struct Inference {
    pub unknown: String,
    /// Tridegree of d(X).
    pub degree: TriDegree,
    pub cofactor: Expression,
    pub rhs: Expression,
    /// A solution, reduced modulo the relations in its degree.
    pub solution: Expression,
    /// Independent solutions of cofactor · y = 0 that are nonzero modulo the
    /// relations. Empty is the injectivity certificate.
    pub kernel: Vec<Expression>,
    space: DegreeSpace,
    ambiguity: Gf2Span,
}

impl Inference {
    pub fn is_unique(&self) -> bool {
        self.kernel.is_empty()
    }

    /// Whether `candidate` is a solution: it differs from [`Self::solution`]
    /// by relations and kernel elements.
    pub fn admits(&self, candidate: &Expression) -> bool {
        let Ok(mut v) = self.space.vector(candidate) else {
            return false;
        };
        v.xor_assign(&self.space.vector(&self.solution).expect("solution lies in its degree"));
        self.ambiguity.contains(&v)
    }
}

/// Infers d(unknown) from a relation on the page: Leibniz turns the relation
/// into cofactor · d(unknown) + known = 0, which is solved exactly in the
/// tridegree of d(unknown), modulo the page's relations.
pub fn infer_differential(relation: &Formula, unknown: &Formula, p: &Page) -> Result<Inference, InferError> {
    let atoms = &p.presentation.atoms;
    let x = unknown.expand(atoms);
    let label = unknown.render(atoms);
    let Ok(Some(x_deg)) = is_homogeneous(&x, atoms) else {
        return Err(InferError::BadUnknown(label));
    };
    let Ok(Some(rel_deg)) = is_homogeneous(&relation.expand(atoms), atoms) else {
        return Err(InferError::BadRelation);
    };
    let shift = p.differentials.shift();
    let (keys, _) = KeySet::from_table(&p.differentials, atoms, Some(&x));
    let lin = keys.formula(relation, atoms).map_err(|Unresolved(i)| InferError::Unresolved {
        atom: atoms.get(i).name.clone(),
    })?;
    if lin.cofactor.is_zero() {
        return Err(InferError::NotLinear);
    }
    let degree = x_deg + shift;
    let target = rel_deg + shift;
    solve(atoms, &p.presentation.relations, &lin.cofactor, &lin.known, degree, target, label)
}

fn solve(
    atoms: &AtomTable,
    relations: &[Expression],
    cofactor: &Expression,
    rhs: &Expression,
    degree: TriDegree,
    target: TriDegree,
    label: String,
) -> Result<Inference, InferError> {
    let sx = DegreeSpace::new(atoms, degree);
    let st = DegreeSpace::new(atoms, target);
    let mut cols: Vec<BitVector> = sx
        .monomials()
        .iter()
        .map(|m| st.vector(&cofactor.mul_monomial(m)).expect("products land in the target degree"))
        .collect();
    let n = cols.len();
    cols.extend(relation_multiples(atoms, relations, &st));
    let rhs_v = st.vector(rhs).expect("known part lies in the target degree");
    let (sol, kernel) = gf2_solve(st.dim(), &cols, &rhs_v);
    let render = |e: &Expression| e.render(atoms);
    let Some(sol) = sol else {
        return Err(InferError::Inconsistent {
            unknown: label,
            cofactor: render(cofactor),
            rhs: render(rhs),
        });
    };
    let restrict = |v: &BitVector| BitVector::from_indices(sx.dim(), v.ones().filter(|&j| j < n));
    let base = relation_span(atoms, relations, &sx);
    let rel_rows = relation_multiples(atoms, relations, &sx);
    let mut ambiguity = Gf2Span::new(sx.dim(), rel_rows.len() + kernel.len());
    for r in rel_rows {
        ambiguity.insert(r);
    }
    let mut kernel_exprs = Vec::new();
    for k in &kernel {
        let v = restrict(k);
        if !ambiguity.contains(&v) {
            kernel_exprs.push(sx.expression(&base.reduce(&v)));
            ambiguity.insert(v);
        }
    }
    let solution = sx.expression(&base.reduce(&restrict(&sol)));
    Ok(Inference {
        unknown: label,
        degree,
        cofactor: cofactor.clone(),
        rhs: rhs.clone(),
        solution,
        kernel: kernel_exprs,
        space: sx,
        ambiguity,
    })
}
