use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;

use super::schema::*;
use crate::algebra::{Presentation, Window};
use crate::grading::{parse_formula, AtomTable, AtomTableError, Expression, Formula, ParseError, TriDegree};
use crate::homotopy::{HiddenError, HiddenExtension};
use crate::sseq::{DifferentialTable, Generator, GeneratorError, Page};
use crate::taulin::TorsionModule;

/// A page index: finite r ≥ 2, or ∞.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PageKey {
    Finite(i32),
    Infinity,
}

impl PageKey {
    /// The differential index used for tables on this page; E∞ carries none
    /// and is treated as the page after the last finite one.
    pub fn r(self) -> i32 {
        match self {
            PageKey::Finite(r) => r,
            PageKey::Infinity => 5,
        }
    }
}

impl fmt::Display for PageKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PageKey::Finite(r) => write!(f, "{r}"),
            PageKey::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for PageKey {
    type Err = LoadError;

    fn from_str(s: &str) -> Result<Self, LoadError> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(PageKey::Infinity),
            t => match t.parse::<i32>() {
                Ok(r) if r >= 2 => Ok(PageKey::Finite(r)),
                _ => Err(LoadError::BadPage(s.to_string())),
            },
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("`{0}` is a reserved key for unsupported extension data")]
    Reserved(String),
    #[error("atom table: {0}")]
    Atoms(#[from] AtomTableError),
    #[error("`{0}` is not a page (expected an integer >= 2 or `inf`)")]
    BadPage(String),
    #[error("{location}: {error}")]
    Parse { location: String, error: ParseError },
    #[error("{location}: {error}")]
    Generator { location: String, error: GeneratorError },
    #[error("{location}: {error}")]
    Hidden { location: String, error: HiddenError },
    #[error("{location}: duplicate generator `{name}`")]
    Duplicate { location: String, name: String },
    #[error("{location}: `{source_name}` is not a generator of this page")]
    UnknownSource { location: String, source_name: String },
    #[error("{location}: second differential for `{source_name}`")]
    DuplicateDifferential { location: String, source_name: String },
    #[error("{location}: torsion `{value}` is neither `free` nor a positive integer")]
    BadTorsion { location: String, value: String },
}

#[derive(Clone, Debug)]
pub struct Relation {
    pub formula: Formula,
    pub expr: Expression,
    pub source: String,
}

#[derive(Clone, Debug)]
pub struct RelationSet {
    pub page: PageKey,
    pub window: Option<Window>,
    pub relations: Vec<Relation>,
}

/// One page: generator rows in file order and dᵣ on them (an absent row is a
/// zero differential).
#[derive(Clone, Debug)]
pub struct PageData {
    pub key: PageKey,
    pub table: DifferentialTable,
    /// Provenance per generator, parallel to `table.entries`.
    pub sources: Vec<String>,
    /// Provenance of each nonzero differential, keyed by entry index.
    pub differential_refs: BTreeMap<usize, String>,
    /// Entry indices in the order their differential rows were listed.
    pub differential_order: Vec<usize>,
}

impl PageData {
    pub fn generators(&self) -> Vec<Generator> {
        self.table.generators().cloned().collect()
    }
}

#[derive(Clone, Debug)]
pub struct HiddenRecord {
    pub extension: HiddenExtension,
    pub listed: TriDegree,
    pub source_ref: String,
}

#[derive(Clone, Debug)]
pub struct EinfClass {
    pub degree: TriDegree,
    pub formula: Formula,
    pub expr: Expression,
    pub module: TorsionModule,
    pub source: String,
}

/// Colors by torsion module; keys in file order.
pub type TorsionLegend = IndexMap<TorsionModule, String>;

#[derive(Clone, Debug)]
pub struct Dataset {
    pub atoms: AtomTable,
    /// The atom rows as listed, τ included.
    pub atom_rows: IndexMap<String, [i32; 3]>,
    pub relations: Vec<RelationSet>,
    pub pages: BTreeMap<PageKey, PageData>,
    pub hidden_tau: Vec<HiddenRecord>,
    pub torsion_legend: TorsionLegend,
    pub einf_classes: Vec<EinfClass>,
}

pub fn parse_torsion(s: &str) -> Option<TorsionModule> {
    match s.trim() {
        "free" => Some(TorsionModule::Free),
        t => t.parse::<u32>().ok().filter(|&k| k >= 1).map(TorsionModule::Torsion),
    }
}

pub fn torsion_key(m: TorsionModule) -> String {
    match m {
        TorsionModule::Free => "free".into(),
        TorsionModule::Torsion(k) => k.to_string(),
    }
}

fn deg(s: i32, f: i32, w: i32) -> TriDegree {
    TriDegree::new(s, f, w)
}

/// Parses, checks, and canonicalizes a dataset document.
pub fn load_dataset(text: &str) -> Result<Dataset, LoadError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if let Some(obj) = value.as_object() {
        if let Some(k) = RESERVED_KEYS.iter().find(|k| obj.contains_key(**k)) {
            return Err(LoadError::Reserved(k.to_string()));
        }
    }
    let file: DatasetFile = serde_json::from_value(value)?;
    Dataset::from_file(&file)
}

impl Dataset {
    pub fn from_file(file: &DatasetFile) -> Result<Self, LoadError> {
        let atoms = AtomTable::new(file.atoms.iter().map(|(n, &[s, f, w])| (n.clone(), deg(s, f, w))))?;
        let formula = |text: &str, location: &dyn Fn() -> String| {
            parse_formula(text, &atoms).map_err(|error| LoadError::Parse {
                location: location(),
                error,
            })
        };

        let mut relations = Vec::new();
        for (i, set) in file.relations.iter().enumerate() {
            let page: PageKey = set.page.parse()?;
            let mut rows = Vec::new();
            for (j, r) in set.relations.iter().enumerate() {
                let f = formula(&r.expr, &|| format!("relations[{i}].relations[{j}]"))?;
                rows.push(Relation {
                    expr: f.expand(&atoms),
                    formula: f,
                    source: r.source.clone(),
                });
            }
            relations.push(RelationSet {
                page,
                window: set.window,
                relations: rows,
            });
        }

        let mut pages = BTreeMap::new();
        for (name, rows) in &file.pages {
            let key: PageKey = name.parse()?;
            let mut table = DifferentialTable::new(key.r());
            let mut sources = Vec::new();
            for (i, g) in rows.generators.iter().enumerate() {
                let location = format!("pages.{name}.generators[{i}] ({}, {}, {})", g.s, g.f, g.w);
                let f = formula(&g.expr, &|| location.clone())?;
                let generator = Generator::new(f, deg(g.s, g.f, g.w), &atoms).map_err(|error| LoadError::Generator {
                    location: location.clone(),
                    error,
                })?;
                if table.get(&generator.expr).is_some() {
                    return Err(LoadError::Duplicate {
                        location,
                        name: g.expr.clone(),
                    });
                }
                table.insert(generator, Formula::zero(), &atoms);
                sources.push(g.source.clone());
            }
            let mut refs = BTreeMap::new();
            let mut order = Vec::new();
            for (i, d) in rows.differentials.iter().enumerate() {
                let location = format!("pages.{name}.differentials[{i}]");
                let src = formula(&d.source, &|| location.clone())?.expand(&atoms);
                let Some(idx) = table.entries.iter().position(|e| e.source.expr == src) else {
                    return Err(LoadError::UnknownSource {
                        location,
                        source_name: d.source.clone(),
                    });
                };
                if refs.contains_key(&idx) {
                    return Err(LoadError::DuplicateDifferential {
                        location,
                        source_name: d.source.clone(),
                    });
                }
                let target = formula(&d.target, &|| location.clone())?;
                let entry = &mut table.entries[idx];
                entry.target_expr = target.expand(&atoms);
                entry.target = target;
                refs.insert(idx, d.source_ref.clone());
                order.push(idx);
            }
            pages.insert(
                key,
                PageData {
                    key,
                    table,
                    sources,
                    differential_refs: refs,
                    differential_order: order,
                },
            );
        }

        let mut hidden_tau = Vec::new();
        for (i, h) in file.hidden_tau.iter().enumerate() {
            let location = format!("hidden_tau[{i}] ({}, {}, {})", h.s, h.f, h.w);
            let source = formula(&h.source, &|| location.clone())?;
            let target = formula(&h.target, &|| location.clone())?;
            let extension =
                HiddenExtension::new(source, target, &atoms).map_err(|error| LoadError::Hidden { location, error })?;
            hidden_tau.push(HiddenRecord {
                extension,
                listed: deg(h.s, h.f, h.w),
                source_ref: h.source_ref.clone(),
            });
        }

        let mut torsion_legend = IndexMap::new();
        for (k, color) in &file.torsion_legend {
            let m = parse_torsion(k).ok_or_else(|| LoadError::BadTorsion {
                location: "torsion_legend".into(),
                value: k.clone(),
            })?;
            torsion_legend.insert(m, color.clone());
        }

        let mut einf_classes = Vec::new();
        for (i, e) in file.einf_classes.iter().enumerate() {
            let location = format!("einf_classes[{i}] ({}, {}, {})", e.s, e.f, e.w);
            let f = formula(&e.expr, &|| location.clone())?;
            let g = Generator::new(f, deg(e.s, e.f, e.w), &atoms).map_err(|error| LoadError::Generator {
                location: location.clone(),
                error,
            })?;
            let module = parse_torsion(&e.torsion).ok_or_else(|| LoadError::BadTorsion {
                location,
                value: e.torsion.clone(),
            })?;
            einf_classes.push(EinfClass {
                degree: g.degree,
                formula: g.name,
                expr: g.expr,
                module,
                source: e.source.clone(),
            });
        }

        Ok(Dataset {
            atoms,
            atom_rows: file.atoms.clone(),
            relations,
            pages,
            hidden_tau,
            torsion_legend,
            einf_classes,
        })
    }

    /// The canonical document for this dataset.
    pub fn to_file(&self) -> DatasetFile {
        let a = &self.atoms;
        let relations = self
            .relations
            .iter()
            .map(|set| RelationSetRow {
                page: set.page.to_string(),
                window: set.window,
                relations: set
                    .relations
                    .iter()
                    .map(|r| RelationRow {
                        expr: r.formula.render(a),
                        source: r.source.clone(),
                    })
                    .collect(),
            })
            .collect();
        let pages = self
            .pages
            .iter()
            .map(|(k, p)| {
                let generators = p
                    .table
                    .entries
                    .iter()
                    .zip(&p.sources)
                    .map(|(e, src)| GeneratorRow {
                        s: e.source.degree.s,
                        f: e.source.degree.f,
                        w: e.source.degree.w,
                        expr: e.source.label(a),
                        source: src.clone(),
                    })
                    .collect();
                let differentials = p
                    .differential_order
                    .iter()
                    .map(|&i| {
                        let e = &p.table.entries[i];
                        DifferentialRow {
                            source: e.source.label(a),
                            target: e.target.render(a),
                            source_ref: p.differential_refs[&i].clone(),
                        }
                    })
                    .collect();
                (k.to_string(), PageRows { generators, differentials })
            })
            .collect();
        let hidden_tau = self
            .hidden_tau
            .iter()
            .map(|h| HiddenRow {
                s: h.listed.s,
                f: h.listed.f,
                w: h.listed.w,
                source: h.extension.source.render(a),
                target: h.extension.target.render(a),
                source_ref: h.source_ref.clone(),
            })
            .collect();
        DatasetFile {
            atoms: self.atom_rows.clone(),
            relations,
            pages,
            hidden_tau,
            torsion_legend: self.torsion_legend.iter().map(|(k, v)| (torsion_key(*k), v.clone())).collect(),
            einf_classes: self
                .einf_classes
                .iter()
                .map(|e| EinfRow {
                    s: e.degree.s,
                    f: e.degree.f,
                    w: e.degree.w,
                    expr: e.formula.render(a),
                    torsion: torsion_key(e.module),
                    source: e.source.clone(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        self.to_file().to_json()
    }

    pub fn page_data(&self, key: PageKey) -> Option<&PageData> {
        self.pages.get(&key)
    }

    /// Relation sets valid on page `key`: those asserted on it or earlier.
    pub fn relations_on(&self, key: PageKey) -> Vec<Expression> {
        let mut out: Vec<Expression> = Vec::new();
        for set in self.relations.iter().filter(|s| s.page <= key) {
            for r in &set.relations {
                if !out.contains(&r.expr) {
                    out.push(r.expr.clone());
                }
            }
        }
        out
    }

    /// The completeness window of the E₂ relations, which bounds every page.
    pub fn relation_window(&self) -> Option<Window> {
        self.relations.iter().filter(|s| s.page == PageKey::Finite(2)).find_map(|s| s.window)
    }

    /// The page `key` as an engine page: its relations, dᵣ, and the tables of
    /// every earlier page present in the dataset.
    pub fn page(&self, key: PageKey) -> Option<Page> {
        let data = self.pages.get(&key)?;
        let presentation = Presentation::new(self.atoms.clone(), self.relations_on(key), self.relation_window())
            .expect("loaded relations are homogeneous");
        let mut p = Page::new(presentation, data.table.clone());
        p.earlier = self.pages.range(..key).map(|(_, d)| d.table.clone()).collect();
        Some(p)
    }

    /// The successor of `key` among the dataset's pages.
    pub fn next_key(&self, key: PageKey) -> Option<PageKey> {
        self.pages.range(key..).nth(1).map(|(k, _)| *k)
    }
}
