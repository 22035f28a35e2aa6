use std::collections::BTreeMap;
use std::fmt;

use super::load::{Dataset, PageKey};
use crate::algebra::{column_exponents, DegreeSpace, relation_span};
use crate::grading::{Expression, Monomial, TriDegree};
use crate::sseq::{leibniz_differential, validate_differential_table, Differential, Generator};
use crate::taulin::{Gf2Span, TorsionModule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    DegreeLaw,
    HiddenListed,
    HiddenLaw,
    HiddenJump,
    Legend,
    EinfTorsion,
    Collapse,
    Survivor,
    CrossPage,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::DegreeLaw => "degree-law",
            Check::HiddenListed => "hidden-listed-degree",
            Check::HiddenLaw => "hidden-law",
            Check::HiddenJump => "hidden-jump",
            Check::Legend => "legend",
            Check::EinfTorsion => "einf-torsion",
            Check::Collapse => "collapse",
            Check::Survivor => "einf-survivor",
            Check::CrossPage => "cross-page",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub check: Check,
    pub severity: Severity,
    pub location: String,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ValidationPolicy {
    /// Largest filtration jump accepted on a hidden extension row.
    pub max_hidden_jump: Option<i32>,
    /// Also test that each page's generators are polynomials in the previous
    /// page's generators (slow on large pages; failures are warnings).
    pub expressibility: bool,
}

impl Default for ValidationPolicy {
    fn default() -> Self {
        Self {
            max_hidden_jump: Some(1),
            expressibility: false,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    /// Items examined per check.
    pub checked: BTreeMap<Check, usize>,
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.errors().next().is_none()
    }

    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Error)
    }

    fn count(&mut self, c: Check) {
        *self.checked.entry(c).or_default() += 1;
    }

    fn push(&mut self, check: Check, severity: Severity, location: String, message: String) {
        self.findings.push(Finding {
            check,
            severity,
            location,
            message,
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, n) in &self.checked {
            let bad = self.findings.iter().filter(|x| x.check == *c && x.severity == Severity::Error).count();
            let warn = self.findings.iter().filter(|x| x.check == *c && x.severity == Severity::Warning).count();
            let status = if bad == 0 { "PASS" } else { "FAIL" };
            write!(f, "{status} {}: {n} checked, {bad} failed", c.name())?;
            if warn > 0 {
                write!(f, ", {warn} warning(s)")?;
            }
            writeln!(f)?;
        }
        for x in &self.findings {
            let tag = match x.severity {
                Severity::Error => "error",
                Severity::Warning => "warning",
            };
            writeln!(f, "{tag} [{}] {}: {}", x.check.name(), x.location, x.message)?;
        }
        write!(f, "{}", if self.is_ok() { "dataset OK" } else { "dataset INVALID" })
    }
}

/// The legend domain: free plus these orders.
pub const LEGEND_ORDERS: [u32; 9] = [1, 2, 3, 4, 5, 6, 9, 10, 11];

pub fn validate_dataset(d: &Dataset) -> ValidationReport {
    validate_dataset_with(d, ValidationPolicy::default())
}

pub fn validate_dataset_with(d: &Dataset, policy: ValidationPolicy) -> ValidationReport {
    let a = &d.atoms;
    let mut rep = ValidationReport::default();

    for (key, p) in &d.pages {
        for (i, row) in validate_differential_table(&p.table, a).into_iter().enumerate() {
            rep.count(Check::DegreeLaw);
            if !row.ok {
                let got = row.target_degree.map_or("inhomogeneous".to_string(), |t| t.to_string());
                rep.push(
                    Check::DegreeLaw,
                    Severity::Error,
                    format!("pages.{key} row {i} {}", row.source_degree),
                    format!("d({}) = {} has degree {got}, expected {}", row.source, row.target, row.expected),
                );
            }
        }
    }

    for (i, h) in d.hidden_tau.iter().enumerate() {
        let e = &h.extension;
        let loc = format!("hidden_tau[{i}] {}", h.listed);
        let label = e.label(a);
        rep.count(Check::HiddenListed);
        if h.listed != e.source_degree {
            rep.push(Check::HiddenListed, Severity::Error, loc.clone(), format!("source has degree {}", e.source_degree));
        }
        rep.count(Check::HiddenLaw);
        if !e.law_holds() {
            rep.push(Check::HiddenLaw, Severity::Error, loc.clone(), format!("{label} is not a (0, j, -1) step"));
        }
        rep.count(Check::HiddenJump);
        if let Some(m) = policy.max_hidden_jump {
            if e.jump() > m {
                rep.push(Check::HiddenJump, Severity::Error, loc, format!("{label} jumps {} filtrations, policy allows {m}", e.jump()));
            }
        }
    }

    if !d.torsion_legend.is_empty() {
        rep.count(Check::Legend);
        let mut want: Vec<TorsionModule> = LEGEND_ORDERS.iter().map(|&k| TorsionModule::Torsion(k)).collect();
        want.push(TorsionModule::Free);
        want.sort();
        let mut have: Vec<TorsionModule> = d.torsion_legend.keys().copied().collect();
        have.sort();
        if have != want {
            rep.push(Check::Legend, Severity::Error, "torsion_legend".into(), "orders must be exactly free, 1-6, 9, 10, 11".into());
        }
        let mut colors: Vec<&String> = d.torsion_legend.values().collect();
        colors.sort();
        colors.dedup();
        if colors.len() != d.torsion_legend.len() {
            rep.push(Check::Legend, Severity::Error, "torsion_legend".into(), "two orders share a color".into());
        }
    }
    for (i, e) in d.einf_classes.iter().enumerate() {
        rep.count(Check::EinfTorsion);
        if !d.torsion_legend.is_empty() && !d.torsion_legend.contains_key(&e.module) {
            rep.push(Check::EinfTorsion, Severity::Error, format!("einf_classes[{i}]"), format!("order {} has no legend color", e.module));
        }
    }

    if let Some(inf) = d.pages.get(&PageKey::Infinity) {
        let gens = inf.generators();
        for x in &gens {
            for y in &gens {
                rep.count(Check::Collapse);
                let diff = y.degree - x.degree;
                if diff.s == -1 && diff.w == 0 && diff.f >= 5 {
                    rep.push(
                        Check::Collapse,
                        Severity::Error,
                        format!("pages.inf {}", x.degree),
                        format!("d_{}({}) could hit {}", diff.f, x.label(a), y.label(a)),
                    );
                }
            }
        }
        if let Some((_, last)) = d.pages.range(..PageKey::Infinity).next_back() {
            let relations = d.relations_on(last.key);
            for g in &gens {
                rep.count(Check::Survivor);
                let loc = format!("pages.inf {}", g.degree);
                if last.table.entries.iter().any(|e| e.target_expr == g.expr) {
                    rep.push(Check::Survivor, Severity::Error, loc, format!("{} is a d_{} target", g.label(a), last.table.page));
                    continue;
                }
                match leibniz_differential(&g.name, &last.table, a) {
                    Differential::Known(x) if x.is_zero() => {}
                    Differential::Known(x) => {
                        if !in_ideal(d, &relations, &x) {
                            rep.push(
                                Check::Survivor,
                                Severity::Warning,
                                loc,
                                format!("d_{}({}) = {} is not visibly zero", last.table.page, g.label(a), x.render(a)),
                            );
                        }
                    }
                    Differential::Unknown { atom } => rep.push(
                        Check::Survivor,
                        Severity::Warning,
                        loc,
                        format!("d_{}({}) not determined: no cover through `{atom}`", last.table.page, g.label(a)),
                    ),
                }
            }
        }
    }

    if policy.expressibility {
        let keys: Vec<PageKey> = d.pages.keys().copied().collect();
        for w in keys.windows(2) {
            let prev = d.pages[&w[0]].generators();
            for g in d.pages[&w[1]].generators() {
                rep.count(Check::CrossPage);
                if !expressible(d, &prev, &g.expr, g.degree) {
                    rep.push(
                        Check::CrossPage,
                        Severity::Warning,
                        format!("pages.{} {}", w[1], g.degree),
                        format!("{} is not a polynomial in the page-{} generators", g.label(a), w[0]),
                    );
                }
            }
        }
    }
    rep
}

fn in_ideal(d: &Dataset, relations: &[Expression], x: &Expression) -> bool {
    let Ok(Some(deg)) = crate::grading::is_homogeneous(x, &d.atoms) else {
        return x.is_zero();
    };
    let space = DegreeSpace::new(&d.atoms, deg);
    let v = space.vector(x).expect("x lies in its degree");
    relation_span(&d.atoms, relations, &space).contains(&v)
}

/// Whether `g` lies in the F₂-span of products of `gens` (times powers of τ)
/// in its tridegree.
pub fn expressible(d: &Dataset, gens: &[Generator], x: &Expression, deg: TriDegree) -> bool {
    if gens.iter().any(|g| &g.expr == x) {
        return true;
    }
    let a = &d.atoms;
    let space = DegreeSpace::new(a, deg);
    let degrees: Vec<TriDegree> = gens.iter().map(|x| x.degree).collect();
    let one = Monomial::one(a);
    let Ok(target) = space.vector(x) else {
        return false;
    };
    let mut vs = Vec::new();
    for e in column_exponents(&degrees, deg.s, deg.f, Some(deg.w)) {
        let mut p = Expression::monomial(one.clone());
        let mut w = 0;
        for (i, &k) in e.iter().enumerate() {
            if k > 0 {
                p = p.mul(&gens[i].expr.pow(k as u32));
                w += gens[i].degree.w * k as i32;
            }
        }
        if let Ok(v) = space.vector(&p.tau_shift((w - deg.w) as u32)) {
            vs.push(v);
        }
    }
    let mut span = Gf2Span::new(space.dim(), vs.len());
    for v in vs {
        span.insert(v);
    }
    span.contains(&target)
}
