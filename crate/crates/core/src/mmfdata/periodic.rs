use super::load::{Dataset, PageKey};
use crate::grading::{Factor, Formula, Monomial, TriDegree};

/// The periodicity exponent of Δ on a page: 4 on E₂, 8 afterwards.
pub fn period_exponent(page: PageKey) -> u32 {
    if page == PageKey::Finite(2) {
        4
    } else {
        8
    }
}

/// Multiplies by `m`, keeping a leading τ power in front.
fn shifted(f: &Formula, m: &Monomial) -> Formula {
    let mut out = f.times_monomial(m);
    let plain = Formula::from_monomial(m).terms[0].factors.len();
    for p in &mut out.terms {
        if let Some(Factor::Tau(_)) = p.factors.get(plain) {
            let t = p.factors.remove(plain);
            p.factors.insert(0, t);
        }
    }
    out
}

/// Adjoins Δᵖᵏ-multiples (p the period exponent) of every row of `page` with
/// stem at most `max_stem`, extending dᵣ Δ-linearly. Rows already present are
/// kept as they are.
pub fn extend_by_periodicity(d: &Dataset, page: PageKey, max_stem: i32) -> Dataset {
    let mut out = d.clone();
    let a = &d.atoms;
    let (Some(delta), Some(data)) = (a.index_of("Delta"), d.pages.get(&page)) else {
        return out;
    };
    let unit = Monomial::atom(a, delta).pow(period_exponent(page));
    let step = unit.degree(a);
    let target = out.pages.get_mut(&page).expect("page exists");
    for (i, e) in data.table.entries.iter().enumerate() {
        let mut k = 1;
        while e.source.degree.s + k * step.s <= max_stem {
            let m = unit.pow(k as u32);
            k += 1;
            let name = shifted(&e.source.name, &m);
            let mut g = e.source.clone();
            g.expr = name.expand(a);
            g.name = name;
            g.degree = e.source.degree + m.degree(a);
            if target.table.get(&g.expr).is_some() {
                continue;
            }
            let tgt = if e.target.is_zero_literal() {
                Formula::zero()
            } else {
                shifted(&e.target, &m)
            };
            target.table.insert(g, tgt, a);
            target.sources.push(data.sources[i].clone());
            let idx = target.table.entries.len() - 1;
            if let Some(r) = data.differential_refs.get(&i) {
                target.differential_refs.insert(idx, r.clone());
                target.differential_order.push(idx);
            }
        }
    }
    out
}

/// How the rows at or above one period relate to Δ-shifts of rows below it.
#[derive(Clone, Debug, Default)]
pub struct PeriodicityReport {
    /// (row degree, row name, name of the row it is a shift of)
    pub matched: Vec<(TriDegree, String, String)>,
    /// Rows in scope with no source below the period.
    pub unmatched: Vec<(TriDegree, String)>,
    /// (degree, shifted differential, listed differential) where they differ.
    pub differential_mismatches: Vec<(TriDegree, String, String)>,
}

impl PeriodicityReport {
    pub fn all_matched(&self) -> bool {
        self.unmatched.is_empty()
    }
}

/// Checks that each row of `page` at stem ≥ s(Δᵉ) whose name has Δ-exponent
/// below `max_delta` (in its lowest term) is the Δᵉ-shift of a row below,
/// by degree and expanded name; also compares the differentials.
pub fn periodicity_report(d: &Dataset, page: PageKey, exponent: u32, max_delta: u16) -> PeriodicityReport {
    let mut rep = PeriodicityReport::default();
    let a = &d.atoms;
    let (Some(delta), Some(data)) = (a.index_of("Delta"), d.pages.get(&page)) else {
        return rep;
    };
    let unit = Monomial::atom(a, delta).pow(exponent);
    let step = unit.degree(a);
    let entries = &data.table.entries;
    for y in entries.iter().filter(|y| y.source.degree.s >= step.s) {
        let dexp = y.source.expr.terms().map(|m| m.exponent(delta)).min().unwrap_or(0);
        if dexp >= max_delta {
            continue;
        }
        let found = entries
            .iter()
            .filter(|x| x.source.degree.s < step.s)
            .find(|x| x.source.degree + step == y.source.degree && x.source.expr.mul_monomial(&unit) == y.source.expr);
        let yl = y.source.label(a);
        match found {
            None => rep.unmatched.push((y.source.degree, yl)),
            Some(x) => {
                rep.matched.push((y.source.degree, yl, x.source.label(a)));
                let shifted = x.target_expr.mul_monomial(&unit);
                if shifted != y.target_expr {
                    rep.differential_mismatches.push((y.source.degree, shifted.render(a), y.target_expr.render(a)));
                }
            }
        }
    }
    rep
}
