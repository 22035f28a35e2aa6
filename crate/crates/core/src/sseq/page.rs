use super::leibniz::{leibniz_differential, Differential};
use super::table::{DifferentialTable, Generator};
use crate::algebra::{relation_span, DegreeSpace, Presentation};
use crate::grading::{is_homogeneous, Expression, TriDegree};

/// A page Eᵣ: the ambient presentation (relations valid on this page), dᵣ on
/// its generators, and the differentials of earlier pages, whose images are
/// zero here.
#[derive(Clone, Debug)]
pub struct Page {
    pub presentation: Presentation,
    pub differentials: DifferentialTable,
    pub earlier: Vec<DifferentialTable>,
}

impl Page {
    pub fn new(presentation: Presentation, differentials: DifferentialTable) -> Self {
        Self {
            presentation,
            differentials,
            earlier: vec![],
        }
    }

    pub fn r(&self) -> i32 {
        self.differentials.page
    }

    pub fn generators(&self) -> impl Iterator<Item = &Generator> {
        self.differentials.generators()
    }

    /// The same page with extra relations adjoined.
    pub fn with_relations(&self, extra: impl IntoIterator<Item = Expression>) -> Page {
        let mut p = self.clone();
        for r in extra {
            if !r.is_zero() && !p.presentation.relations.contains(&r) {
                p.presentation.relations.push(r);
            }
        }
        p
    }

    /// Whether `x` lies in the ideal of this page's relations, tested in its
    /// own tridegree.
    pub fn relation_ideal_contains(&self, x: &Expression) -> bool {
        let atoms = &self.presentation.atoms;
        let Ok(Some(deg)) = is_homogeneous(x, atoms) else {
            return x.is_zero();
        };
        let space = DegreeSpace::new(atoms, deg);
        let span = relation_span(atoms, &self.presentation.relations, &space);
        span.contains(&space.vector(x).expect("homogeneous expression lies in its degree"))
    }
}

/// A consequence of d² = 0 or of a generator surviving: an expression that
/// must vanish on the page, or a failure to evaluate one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obligation {
    /// What produced it, e.g. `d(d(Delta^2))` or `d(a n)`.
    pub origin: String,
    pub degree: Option<TriDegree>,
    pub value: Differential,
}

/// d(d(x)) for every generator x whose value is nonzero after Leibniz
/// expansion; unevaluable cases are reported as unknown.
pub fn check_d_squared(p: &Page) -> Vec<Obligation> {
    let atoms = &p.presentation.atoms;
    let mut out = Vec::new();
    for e in &p.differentials.entries {
        if e.target.is_zero_literal() {
            continue;
        }
        let value = leibniz_differential(&e.target, &p.differentials, atoms);
        if value.known().is_some_and(|x| x.is_zero()) {
            continue;
        }
        out.push(Obligation {
            origin: format!("d(d({}))", e.source.label(atoms)),
            degree: Some(e.source.degree + 2 * p.differentials.shift()),
            value,
        });
    }
    out
}

/// Relations the page must satisfy: the d² obligations, plus d(g) for every
/// next-page generator g, which must vanish for g to survive. Deduplicated;
/// the first origin is kept.
pub fn forced_relations(p: &Page, next: &[Generator]) -> Vec<Obligation> {
    let atoms = &p.presentation.atoms;
    let mut out = check_d_squared(p);
    for g in next {
        let value = leibniz_differential(&g.name, &p.differentials, atoms);
        if value.known().is_some_and(|x| x.is_zero()) {
            continue;
        }
        out.push(Obligation {
            origin: format!("d({})", g.label(atoms)),
            degree: Some(g.degree + p.differentials.shift()),
            value,
        });
    }
    let mut seen: Vec<Differential> = Vec::new();
    out.retain(|o| {
        if seen.contains(&o.value) {
            false
        } else {
            seen.push(o.value.clone());
            true
        }
    });
    out
}

/// The obligations not lying in the ideal of the page's relations together
/// with `extra`; unknown obligations are always returned.
pub fn unresolved_obligations<'a>(p: &Page, obligations: &'a [Obligation], extra: &[Expression]) -> Vec<&'a Obligation> {
    let closure = p.with_relations(extra.iter().cloned());
    obligations
        .iter()
        .filter(|o| match &o.value {
            Differential::Known(x) => !closure.relation_ideal_contains(x),
            Differential::Unknown { .. } => true,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::{parse_expression, AtomTable};

    fn t(s: i32, f: i32, w: i32) -> TriDegree {
        TriDegree::new(s, f, w)
    }

    fn page(a: &AtomTable, rows: &[(TriDegree, &str, &str)], rels: &[&str]) -> Page {
        let rels = rels.iter().map(|r| parse_expression(r, a).unwrap()).collect();
        Page::new(
            Presentation::new(a.clone(), rels, None).unwrap(),
            DifferentialTable::from_rows(2, rows, a).unwrap(),
        )
    }

    #[test]
    fn d_squared_of_u_vanishes() {
        let a = AtomTable::mmf();
        let p = page(&a, &[(t(1, 1, 1), "h_1", ""), (t(8, 3, 5), "c", ""), (t(11, 3, 7), "u", "h_1^2 c")], &[]);
        assert!(check_d_squared(&p).is_empty());
    }

    #[test]
    fn d_squared_of_delta_squared() {
        let a = AtomTable::mmf();
        let rows = [
            (t(3, 1, 2), "h_2", ""),
            (t(0, 1, 0), "h_0", ""),
            (t(8, 4, 4), "P", ""),
            (t(14, 4, 8), "d", ""),
            (t(20, 4, 12), "g", ""),
            (t(12, 3, 6), "a", "P h_2"),
            (t(15, 3, 8), "n", "h_0 d"),
            (t(48, 8, 24), "Delta^2", "tau^2 a n g"),
        ];
        let p = page(&a, &rows, &[]);
        let obs = check_d_squared(&p);
        assert_eq!(obs.len(), 1);
        assert_eq!(
            obs[0].value,
            Differential::Known(parse_expression("tau^2 P h_2 n g + tau^2 h_0 a d g", &a).unwrap())
        );
        let forced = forced_relations(&p, &[Generator::parse("a n", t(27, 6, 14), &a).unwrap()]);
        let an = forced.iter().find(|o| o.origin == "d(a n)").unwrap();
        assert_eq!(an.value, Differential::Known(parse_expression("P h_2 n + h_0 a d", &a).unwrap()));
        let extra = [an.value.known().unwrap().clone()];
        assert!(unresolved_obligations(&p, &obs, &extra).is_empty());
        assert_eq!(unresolved_obligations(&p, &obs, &[]).len(), 1);
    }

    #[test]
    fn synthetic_nonzero_obligation() {
        // d(x) = y, d(y) = x; the degree law is irrelevant to d²
        let b = AtomTable::new([("x", t(1, 1, 1)), ("y", t(0, 3, 1))]).unwrap();
        let mut tbl = DifferentialTable::new(2);
        let gx = Generator::parse("x", t(1, 1, 1), &b).unwrap();
        let gy = Generator::parse("y", t(0, 3, 1), &b).unwrap();
        tbl.insert(gx.clone(), gy.name.clone(), &b);
        tbl.insert(gy, gx.name, &b);
        let p = Page::new(Presentation::free(b.clone()), tbl);
        let obs = check_d_squared(&p);
        assert!(obs.iter().any(|o| o.value == Differential::Known(parse_expression("x", &b).unwrap())));
    }

    #[test]
    fn survival_of_tau_e() {
        let a = AtomTable::mmf();
        let p = page(&a, &[(t(1, 1, 1), "h_1", ""), (t(14, 4, 8), "d", ""), (t(17, 4, 10), "e", "h_1^2 d")], &[]);
        let f = forced_relations(&p, &[Generator::parse("tau e", t(17, 4, 9), &a).unwrap()]);
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].value, Differential::Known(parse_expression("tau h_1^2 d", &a).unwrap()));
        let free = Page::new(Presentation::free(a.clone()), DifferentialTable::new(2));
        assert!(forced_relations(&free, &[]).is_empty());
    }
}
