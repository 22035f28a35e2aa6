use std::collections::BTreeMap;

use rayon::prelude::*;

use super::leibniz::{Key, KeySet};
use super::page::{check_d_squared, unresolved_obligations, Obligation, Page};
use super::table::{DifferentialTable, Generator};
use crate::algebra::{column_exponents, column_monomials, ColumnBasis};
use crate::grading::{AtomTable, Expression, Monomial, TriDegree};
use crate::taulin::{kernel, SubquotientBasis, SubquotientError, TauMatrix, TauScalar, TorsionModule};

/// A cyclic summand of a page in one tridegree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Class {
    pub degree: TriDegree,
    pub module: TorsionModule,
    pub representative: Expression,
}

#[derive(Clone, Debug)]
pub struct ColumnHomology {
    pub column: (i32, i32),
    pub classes: Vec<Class>,
    /// False when the column lies outside the relation window, so the result
    /// is an upper-bound model.
    pub complete: bool,
    basis: ColumnBasis<Monomial>,
    quotient: SubquotientBasis,
    /// Summand index of each class.
    order: Vec<usize>,
}

impl ColumnHomology {
    /// Coordinates of `x` against [`Self::classes`]; `None` when `x` is not a
    /// cycle of this column.
    pub fn express(&self, x: &Expression) -> Option<Vec<TauScalar>> {
        let v = self.basis.vector(x).ok()?;
        let c = self.quotient.coordinates(&v)?;
        Some(self.order.iter().map(|&i| c[i].clone()).collect())
    }

    /// The class `x` equals up to a power of tau: `(index, k)` with
    /// x = tau^k · classes[index].
    pub fn as_tau_multiple(&self, x: &Expression) -> Option<(usize, u32)> {
        let c = self.express(x)?;
        let mut nz = c.iter().enumerate().filter(|(_, t)| !t.is_zero());
        let (i, t) = nz.next()?;
        if nz.next().is_some() {
            return None;
        }
        Some((i, t.as_tau_power()?))
    }
}

#[derive(Clone, Debug)]
pub struct NextPage {
    pub page: i32,
    pub columns: BTreeMap<(i32, i32), ColumnHomology>,
    /// Classes not in the span of products of positive-filtration classes.
    pub indecomposables: Vec<Class>,
}

impl NextPage {
    /// Summands generated in exactly this tridegree.
    pub fn classes_at(&self, d: TriDegree) -> Vec<&Class> {
        self.columns
            .get(&d.column())
            .map(|c| c.classes.iter().filter(|x| x.degree == d).collect())
            .unwrap_or_default()
    }

    pub fn indecomposables_at(&self, d: TriDegree) -> Vec<&Class> {
        self.indecomposables.iter().filter(|x| x.degree == d).collect()
    }
}

/// Columns 0 ≤ s ≤ max_stem, 0 ≤ f ≤ max_filtration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TurnWindow {
    pub max_stem: i32,
    pub max_filtration: i32,
}

impl TurnWindow {
    pub fn contains(&self, s: i32, f: i32) -> bool {
        (0..=self.max_stem).contains(&s) && (0..=self.max_filtration).contains(&f)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TurnError {
    #[error("{} unresolved d² obligation(s), first: {}", .0.len(), .0[0].origin)]
    Obligations(Vec<Obligation>),
    #[error("generator `{0}` has filtration below 1")]
    BadGenerator(String),
    #[error("column ({s}, {f}): {error}")]
    Inconsistent { s: i32, f: i32, error: SubquotientError },
}

/// Products of one page's generators, with Leibniz differentials.
struct GenAlgebra {
    keys: KeySet,
    degrees: Vec<TriDegree>,
    r: i32,
}

impl GenAlgebra {
    fn new(t: &DifferentialTable, atoms: &AtomTable) -> Result<Self, TurnError> {
        for g in t.generators() {
            if g.degree.f < 1 {
                return Err(TurnError::BadGenerator(g.label(atoms)));
            }
        }
        let keys = t
            .entries
            .iter()
            .map(|e| Key {
                expr: e.source.expr.clone(),
                mono: e.source.expr.as_monomial().cloned(),
                value: Some(e.target_expr.clone()),
            })
            .collect();
        Ok(Self {
            keys: KeySet::new(atoms, keys),
            degrees: t.generators().map(|g| g.degree).collect(),
            r: t.page,
        })
    }

    fn products(&self, s: i32, f: i32) -> Vec<Vec<(usize, u32)>> {
        let mut out: Vec<Vec<(usize, u32)>> = column_exponents(&self.degrees, s, f, None)
            .into_iter()
            .map(|e| {
                e.iter()
                    .enumerate()
                    .filter(|(_, &x)| x > 0)
                    .map(|(i, &x)| (i, x as u32))
                    .collect()
            })
            .collect();
        out.sort();
        out
    }

    fn image(&self, units: &[(usize, u32)], one: &Monomial) -> Expression {
        let mut acc = Expression::monomial(one.clone());
        for &(k, e) in units {
            acc = acc.mul(&self.keys.keys[k].expr.pow(e));
        }
        acc
    }

    fn differential(&self, units: &[(usize, u32)]) -> Expression {
        self.keys.units(units, 0).known
    }
}

struct Turner<'a> {
    page: &'a Page,
    atoms: &'a AtomTable,
    current: GenAlgebra,
    earlier: Vec<GenAlgebra>,
    one: Monomial,
}

/// Vectors of the column's atom basis.
type Vectors = Vec<Vec<TauScalar>>;

struct Computed {
    basis: ColumnBasis<Monomial>,
    cycles: Vectors,
    boundaries: Vectors,
    homology: ColumnHomology,
}

impl Turner<'_> {
    fn basis(&self, s: i32, f: i32) -> ColumnBasis<Monomial> {
        ColumnBasis::of_monomials(self.atoms, column_monomials(self.atoms, s, f, None))
    }

    fn vector(basis: &ColumnBasis<Monomial>, x: &Expression) -> Vec<TauScalar> {
        basis.vector(x).expect("homogeneous element lies in its column")
    }

    /// Generators of everything already zero on this page in the column:
    /// relation multiples and images of earlier differentials.
    fn zero_set(&self, s: i32, f: i32, basis: &ColumnBasis<Monomial>) -> Vectors {
        let mut out = self.page.presentation.relation_multiples(s, f, basis);
        for g in &self.earlier {
            for u in g.products(s + 1, f - g.r) {
                let v = Self::vector(basis, &g.differential(&u));
                if v.iter().any(|x| !x.is_zero()) {
                    out.push(v);
                }
            }
        }
        out
    }

    fn column(&self, s: i32, f: i32) -> Result<Computed, TurnError> {
        let r = self.current.r;
        let basis = self.basis(s, f);
        let zero = self.zero_set(s, f, &basis);
        let gens = self.current.products(s, f);

        let tb = self.basis(s - 1, f + r);
        let mut cols: Vectors = gens.iter().map(|u| Self::vector(&tb, &self.current.differential(u))).collect();
        cols.extend(self.zero_set(s - 1, f + r, &tb));
        let images: Vectors = gens.iter().map(|u| Self::vector(&basis, &self.current.image(u, &self.one))).collect();
        let mut cycles: Vectors = Vec::new();
        if tb.is_empty() {
            cycles.extend(images.iter().cloned());
        } else {
            for k in kernel(&TauMatrix::from_columns(tb.len(), &cols)) {
                let mut v = basis.zero_vector();
                for (j, c) in k.iter().take(gens.len()).enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    for (vi, ii) in v.iter_mut().zip(&images[j]) {
                        *vi += &(c * ii);
                    }
                }
                if v.iter().any(|x| !x.is_zero()) {
                    cycles.push(v);
                }
            }
        }
        cycles.extend(zero.iter().cloned());

        let mut boundaries: Vectors = self
            .current
            .products(s + 1, f - r)
            .iter()
            .map(|u| Self::vector(&basis, &self.current.differential(u)))
            .filter(|v| v.iter().any(|x| !x.is_zero()))
            .collect();
        boundaries.extend(zero);

        let q = SubquotientBasis::new(basis.len(), &cycles, &boundaries)
            .map_err(|error| TurnError::Inconsistent { s, f, error })?;
        let (classes, order) = classes(&basis, &q, s, f);
        let pres = &self.page.presentation;
        let complete = pres.is_complete_at(s, f) && pres.is_complete_at(s - 1, f + r) && pres.is_complete_at(s + 1, f - r);
        Ok(Computed {
            basis: basis.clone(),
            cycles,
            boundaries,
            homology: ColumnHomology {
                column: (s, f),
                classes,
                complete,
                basis,
                quotient: q,
                order,
            },
        })
    }
}

fn classes(basis: &ColumnBasis<Monomial>, q: &SubquotientBasis, s: i32, f: i32) -> (Vec<Class>, Vec<usize>) {
    let mut out: Vec<(usize, Class)> = q
        .summands
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let c = Class {
                degree: TriDegree::new(s, f, basis.weight_of(&x.representative).expect("summands are nonzero")),
                module: x.module,
                representative: basis.expression(&x.representative),
            };
            (i, c)
        })
        .collect();
    out.sort_by(|(_, a), (_, b)| b.degree.w.cmp(&a.degree.w).then_with(|| a.representative.cmp(&b.representative)));
    out.into_iter().map(|(i, c)| (c, i)).unzip()
}

/// Computes the next page in a window: per column, ker dᵣ / im dᵣ as cyclic
/// summands, and the indecomposable classes. Refuses when d² obligations in
/// the window do not follow from the page relations.
pub fn turn_page(p: &Page, window: TurnWindow) -> Result<NextPage, TurnError> {
    let atoms = &p.presentation.atoms;
    let obligations = check_d_squared(p);
    let open: Vec<Obligation> = unresolved_obligations(p, &obligations, &[])
        .into_iter()
        .filter(|o| o.degree.is_none_or(|d| window.contains(d.s, d.f)))
        .cloned()
        .collect();
    if !open.is_empty() {
        return Err(TurnError::Obligations(open));
    }
    let turner = Turner {
        page: p,
        atoms,
        current: GenAlgebra::new(&p.differentials, atoms)?,
        earlier: p
            .earlier
            .iter()
            .map(|t| GenAlgebra::new(t, atoms))
            .collect::<Result<_, _>>()?,
        one: Monomial::one(atoms),
    };
    let cols: Vec<(i32, i32)> = (0..=window.max_stem)
        .flat_map(|s| (0..=window.max_filtration).map(move |f| (s, f)))
        .collect();
    let computed: BTreeMap<(i32, i32), Computed> = cols
        .par_iter()
        .map(|&(s, f)| turner.column(s, f).map(|c| ((s, f), c)))
        .collect::<Result<_, _>>()?;

    let indecomposables: Vec<Vec<Class>> = cols
        .par_iter()
        .map(|&(s, f)| indecomposables(&computed, s, f))
        .collect::<Result<_, _>>()?;

    Ok(NextPage {
        page: p.r() + 1,
        columns: computed.into_iter().map(|(k, c)| (k, c.homology)).collect(),
        indecomposables: indecomposables.into_iter().flatten().collect(),
    })
}

fn indecomposables(computed: &BTreeMap<(i32, i32), Computed>, s: i32, f: i32) -> Result<Vec<Class>, TurnError> {
    let c = &computed[&(s, f)];
    if f == 0 || c.homology.classes.is_empty() {
        return Ok(vec![]);
    }
    let mut dec = c.boundaries.clone();
    for f1 in 1..f {
        for s1 in 0..=s {
            let (s2, f2) = (s - s1, f - f1);
            if (s1, f1) > (s2, f2) {
                continue;
            }
            let (Some(a), Some(b)) = (computed.get(&(s1, f1)), computed.get(&(s2, f2))) else {
                continue;
            };
            for x in &a.homology.classes {
                for y in &b.homology.classes {
                    let v = Turner::vector(&c.basis, &x.representative.mul(&y.representative));
                    if v.iter().any(|e| !e.is_zero()) {
                        dec.push(v);
                    }
                }
            }
        }
    }
    let q = SubquotientBasis::new(c.basis.len(), &c.cycles, &dec)
        .map_err(|error| TurnError::Inconsistent { s, f, error })?;
    Ok(classes(&c.basis, &q, s, f).0)
}

/// Differences between computed indecomposables and expected generator rows,
/// matched by tridegree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GeneratorDiff {
    pub matched: Vec<TriDegree>,
    pub missing: Vec<(TriDegree, String)>,
    pub extra: Vec<Class>,
}

impl GeneratorDiff {
    pub fn is_empty(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }
}

pub fn compare_generators(computed: &[Class], expected: &[Generator], atoms: &AtomTable) -> GeneratorDiff {
    let mut unused: Vec<&Class> = computed.iter().collect();
    let mut diff = GeneratorDiff::default();
    for g in expected {
        match unused.iter().position(|c| c.degree == g.degree) {
            Some(i) => {
                unused.remove(i);
                diff.matched.push(g.degree);
            }
            None => diff.missing.push((g.degree, g.label(atoms))),
        }
    }
    diff.extra = unused.into_iter().cloned().collect();
    diff
}
