//! Deterministic SVG charts of pages.

mod layout;
mod render;

pub use layout::{layout_page, Arrow, ChartError, ChartInput, ChartScene, ChartStyle, ChartWindow, Dot, Segment, SegmentKind};
pub use render::{render_svg, svg_color};

use crate::grading::Expression;
use crate::homotopy::{expand_hidden_extensions, HiddenExtension};
use crate::mmfdata::{Dataset, PageKey};
use crate::sseq::{turn_page, DifferentialTable, Page, TurnError, TurnWindow};
use crate::taulin::TorsionModule;

#[derive(Debug, thiserror::Error)]
pub enum PageChartError {
    #[error("the dataset has no page {0}")]
    NoPage(PageKey),
    #[error(transparent)]
    Turn(#[from] TurnError),
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error(transparent)]
    Hidden(#[from] crate::homotopy::HiddenError),
}

/// The page itself: its generators with dᵣ set to zero, so turning it
/// yields the page's classes.
fn module_page(p: &Page) -> Page {
    let mut q = p.clone();
    let mut t = DifferentialTable::new(p.r());
    for e in &p.differentials.entries {
        t.insert(e.source.clone(), crate::grading::Formula::zero(), &p.presentation.atoms);
    }
    q.differentials = t;
    q
}

/// Lays out page `key` of the dataset: classes from the page's generators
/// modulo relations and earlier differentials, dᵣ from the table, and on
/// E∞ the hidden τ extensions with the torsion they imply.
pub fn chart_dataset_page(d: &Dataset, key: PageKey, window: ChartWindow) -> Result<ChartScene, PageChartError> {
    let page = d.page(key).ok_or(PageChartError::NoPage(key))?;
    let module = turn_page(
        &module_page(&page),
        TurnWindow {
            max_stem: window.max_stem + 1,
            max_filtration: window.max_filtration + 1,
        },
    )?;
    let a = &d.atoms;
    let mut hidden: Vec<HiddenExtension> = Vec::new();
    let mut torsion: Vec<(Expression, TorsionModule)> = Vec::new();
    let differentials = match key {
        PageKey::Infinity => {
            let base: Vec<HiddenExtension> = d.hidden_tau.iter().map(|h| h.extension.clone()).collect();
            hidden = expand_hidden_extensions(&base, a, window.max_stem)?;
            torsion.extend(d.einf_classes.iter().map(|e| (e.expr.clone(), e.module)));
            for h in &hidden {
                let (c, i) = h.source_class();
                torsion.push((c, TorsionModule::Torsion(i + 1)));
            }
            None
        }
        PageKey::Finite(_) => Some(&page.differentials),
    };
    let title = match key {
        PageKey::Infinity => "E_inf".to_string(),
        PageKey::Finite(r) => format!("E_{r}"),
    };
    let input = ChartInput {
        title,
        atoms: a,
        module: &module,
        differentials,
        hidden: &hidden,
        torsion: &torsion,
    };
    Ok(layout_page(&input, window, &ChartStyle::new(d.torsion_legend.clone()))?)
}
