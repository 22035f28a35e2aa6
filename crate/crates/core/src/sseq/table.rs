use crate::grading::{is_homogeneous, parse_formula, AtomTable, Expression, Formula, ParseError, TriDegree};

/// A page generator: its name as written, the expanded expression, and the
/// listed tridegree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: Formula,
    pub expr: Expression,
    pub degree: TriDegree,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeneratorError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("`{name}` is zero")]
    Zero { name: String },
    #[error("`{name}` has degree {actual}, listed as {listed}")]
    WrongDegree {
        name: String,
        actual: TriDegree,
        listed: TriDegree,
    },
}

impl Generator {
    pub fn new(name: Formula, degree: TriDegree, atoms: &AtomTable) -> Result<Self, GeneratorError> {
        let expr = name.expand(atoms);
        let actual = is_homogeneous(&expr, atoms)
            .expect("formulas are homogeneous by construction")
            .ok_or_else(|| GeneratorError::Zero {
                name: name.render(atoms),
            })?;
        if actual != degree {
            return Err(GeneratorError::WrongDegree {
                name: name.render(atoms),
                actual,
                listed: degree,
            });
        }
        Ok(Self { name, expr, degree })
    }

    pub fn parse(text: &str, degree: TriDegree, atoms: &AtomTable) -> Result<Self, GeneratorError> {
        Self::new(parse_formula(text, atoms)?, degree, atoms)
    }

    pub fn label(&self, atoms: &AtomTable) -> String {
        self.name.render(atoms)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialEntry {
    pub source: Generator,
    pub target: Formula,
    pub target_expr: Expression,
}

/// dᵣ on the generators of a page; a zero target is an explicit zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialTable {
    pub page: i32,
    pub entries: Vec<DifferentialEntry>,
}

impl DifferentialTable {
    pub fn new(page: i32) -> Self {
        Self { page, entries: vec![] }
    }

    pub fn insert(&mut self, source: Generator, target: Formula, atoms: &AtomTable) {
        let target_expr = target.expand(atoms);
        self.entries.push(DifferentialEntry {
            source,
            target,
            target_expr,
        });
    }

    /// Convenience for tests and tools: parses `(degree, source, target)`
    /// rows, an empty target meaning zero.
    pub fn from_rows(
        page: i32,
        rows: &[(TriDegree, &str, &str)],
        atoms: &AtomTable,
    ) -> Result<Self, GeneratorError> {
        let mut t = Self::new(page);
        for &(deg, src, tgt) in rows {
            let source = Generator::parse(src, deg, atoms)?;
            let target = if tgt.trim().is_empty() {
                Formula::zero()
            } else {
                parse_formula(tgt, atoms)?
            };
            t.insert(source, target, atoms);
        }
        Ok(t)
    }

    pub fn get(&self, source: &Expression) -> Option<&DifferentialEntry> {
        self.entries.iter().find(|e| &e.source.expr == source)
    }

    pub fn generators(&self) -> impl Iterator<Item = &Generator> {
        self.entries.iter().map(|e| &e.source)
    }

    /// The tridegree shift of this page's differential.
    pub fn shift(&self) -> TriDegree {
        TriDegree::differential(self.page)
    }
}

/// One row of a degree-law check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeCheck {
    pub source: String,
    pub source_degree: TriDegree,
    pub target: String,
    /// `None` for a zero target.
    pub target_degree: Option<TriDegree>,
    pub expected: TriDegree,
    pub ok: bool,
}

/// Checks degree(target) = degree(source) + (−1, r, 0) on every row.
pub fn validate_differential_table(t: &DifferentialTable, atoms: &AtomTable) -> Vec<DegreeCheck> {
    t.entries
        .iter()
        .map(|e| {
            let expected = e.source.degree + t.shift();
            let target_degree = is_homogeneous(&e.target_expr, atoms).ok().flatten();
            DegreeCheck {
                source: e.source.label(atoms),
                source_degree: e.source.degree,
                target: e.target.render(atoms),
                target_degree,
                expected,
                ok: target_degree.is_none_or(|d| d == expected),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_law_rows() {
        let a = AtomTable::mmf();
        let t = DifferentialTable::from_rows(2, &[(TriDegree::new(15, 3, 8), "n", "h_0 d")], &a).unwrap();
        let r = validate_differential_table(&t, &a);
        assert!(r[0].ok);
        assert_eq!(r[0].target_degree, Some(TriDegree::new(14, 5, 8)));

        let t = DifferentialTable::from_rows(3, &[(TriDegree::new(17, 4, 9), "tau e", "P c")], &a).unwrap();
        assert!(validate_differential_table(&t, &a)[0].ok);

        let t = DifferentialTable::from_rows(2, &[(TriDegree::new(15, 3, 8), "n", "h_1 d")], &a).unwrap();
        let r = validate_differential_table(&t, &a);
        assert!(!r[0].ok);
        assert_eq!(r[0].target_degree, Some(TriDegree::new(15, 5, 9)));
    }

    #[test]
    fn generator_degree_is_checked() {
        let a = AtomTable::mmf();
        assert!(Generator::parse("Delta c + tau a g", TriDegree::new(32, 7, 17), &a).is_ok());
        assert!(matches!(
            Generator::parse("Delta c + tau a g", TriDegree::new(32, 7, 16), &a),
            Err(GeneratorError::WrongDegree { .. })
        ));
    }
}
