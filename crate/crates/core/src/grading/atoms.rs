use std::collections::HashMap;

use super::TriDegree;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub name: String,
    pub degree: TriDegree,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AtomTableError {
    #[error("duplicate atom name `{0}`")]
    Duplicate(String),
    #[error("atom `{name}` has filtration {f}; every atom other than tau needs f >= 1")]
    ZeroFiltration { name: String, f: i32 },
    #[error("tau must have degree (0, 0, -1), got {0}")]
    BadTau(TriDegree),
}

/// The named generators of a presentation, in canonical order.
///
/// τ is built in and never stored as an atom; monomials carry its exponent
/// separately.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AtomTable {
    atoms: Vec<Atom>,
    lookup: HashMap<String, usize>,
}

/// Spelling-insensitive key: drops a leading backslash and underscores, and
/// maps the Greek letters to their ASCII names.
pub(crate) fn normalize_name(name: &str) -> String {
    let n = name.strip_prefix('\\').unwrap_or(name);
    match n {
        "τ" => return "tau".into(),
        "Δ" => return "Delta".into(),
        _ => {}
    }
    n.chars().filter(|&c| c != '_').collect()
}

pub(crate) fn is_tau_name(name: &str) -> bool {
    normalize_name(name) == "tau"
}

impl AtomTable {
    pub fn new<I, S>(atoms: I) -> Result<Self, AtomTableError>
    where
        I: IntoIterator<Item = (S, TriDegree)>,
        S: Into<String>,
    {
        let mut table = AtomTable::default();
        for (name, degree) in atoms {
            let name = name.into();
            if is_tau_name(&name) {
                if degree != TriDegree::TAU {
                    return Err(AtomTableError::BadTau(degree));
                }
                continue;
            }
            if degree.f < 1 {
                return Err(AtomTableError::ZeroFiltration { name, f: degree.f });
            }
            let key = normalize_name(&name);
            if table.lookup.contains_key(&key) {
                return Err(AtomTableError::Duplicate(name));
            }
            table.lookup.insert(key, table.atoms.len());
            table.atoms.push(Atom { name, degree });
        }
        Ok(table)
    }

    /// The thirteen-symbol table used by the motivic modular forms data.
    pub fn mmf() -> Self {
        let rows = [
            ("h_0", (0, 1, 0)),
            ("h_1", (1, 1, 1)),
            ("h_2", (3, 1, 2)),
            ("c", (8, 3, 5)),
            ("P", (8, 4, 4)),
            ("u", (11, 3, 7)),
            ("a", (12, 3, 6)),
            ("d", (14, 4, 8)),
            ("n", (15, 3, 8)),
            ("e", (17, 4, 10)),
            ("g", (20, 4, 12)),
            ("Delta", (24, 4, 12)),
        ];
        Self::new(
            rows.into_iter()
                .map(|(n, (s, f, w))| (n, TriDegree::new(s, f, w))),
        )
        .expect("built-in table is valid")
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

    pub fn get(&self, i: usize) -> &Atom {
        &self.atoms[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.lookup.get(&normalize_name(name)).copied()
    }

    pub fn degree(&self, i: usize) -> TriDegree {
        self.atoms[i].degree
    }
}
