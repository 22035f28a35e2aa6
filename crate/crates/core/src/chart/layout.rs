use crate::grading::{AtomTable, Expression, Monomial, TriDegree};
use crate::homotopy::HiddenExtension;
use crate::mmfdata::TorsionLegend;
use crate::sseq::{DifferentialTable, NextPage};
use crate::taulin::TorsionModule;

/// Chart bounds: 0 ≤ s ≤ max_stem, 0 ≤ f ≤ max_filtration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChartWindow {
    pub max_stem: i32,
    pub max_filtration: i32,
}

impl ChartWindow {
    pub fn contains(&self, s: i32, f: i32) -> bool {
        (0..=self.max_stem).contains(&s) && (0..=self.max_filtration).contains(&f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartStyle {
    pub dot_colors: TorsionLegend,
    /// Atoms drawn as product lines.
    pub product_atoms: Vec<String>,
    pub tau_product: String,
    pub tau_power_product: String,
    pub differential: String,
    pub hidden_tau: String,
    pub tower_arrow: String,
}

impl ChartStyle {
    pub fn new(dot_colors: TorsionLegend) -> Self {
        Self {
            dot_colors,
            product_atoms: vec!["h_0".into(), "h_1".into(), "h_2".into()],
            tau_product: "magenta".into(),
            tau_power_product: "orange".into(),
            differential: "light blue".into(),
            hidden_tau: "yellow".into(),
            tower_arrow: "red".into(),
        }
    }

    fn color(&self, m: TorsionModule, label: &str) -> Result<String, ChartError> {
        self.dot_colors.get(&m).cloned().ok_or_else(|| ChartError::UnknownTorsion {
            label: label.to_string(),
            module: m,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChartError {
    #[error("`{label}` has torsion {module}, which has no legend color")]
    UnknownTorsion { label: String, module: TorsionModule },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dot {
    pub s: i32,
    pub f: i32,
    pub w: i32,
    pub torsion: TorsionModule,
    pub label: String,
    pub color: String,
    /// Position among the dots of its (s, f), and their count.
    pub slot: usize,
    pub slots: usize,
    pub partial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SegmentKind {
    Product(String),
    Differential(i32),
    HiddenTau,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub kind: SegmentKind,
    pub from: usize,
    pub to: usize,
    pub color: String,
    /// The k of a τᵏ-scaled product, printed beside the line.
    pub annotation: Option<String>,
}

/// An h₁-tower of τ-torsion classes leaving the window at a dot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub from: usize,
    pub color: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartScene {
    pub title: String,
    pub window: ChartWindow,
    pub dots: Vec<Dot>,
    pub segments: Vec<Segment>,
    pub arrows: Vec<Arrow>,
    /// (label, color) in display order.
    pub legend: Vec<(String, String)>,
    /// Whether any dot lies outside the relation-complete window.
    pub partial: bool,
    /// Extensions or differentials whose ends are not single dots.
    pub omitted: Vec<String>,
}

impl ChartScene {
    pub fn empty(title: &str, window: ChartWindow) -> Self {
        Self {
            title: title.into(),
            window,
            dots: vec![],
            segments: vec![],
            arrows: vec![],
            legend: vec![],
            partial: false,
            omitted: vec![],
        }
    }
}

/// What a chart is drawn from: the page's classes (computed on a window one
/// step larger than the chart, so towers can be seen to continue), plus the
/// optional decorations.
pub struct ChartInput<'a> {
    pub title: String,
    pub atoms: &'a AtomTable,
    pub module: &'a NextPage,
    pub differentials: Option<&'a DifferentialTable>,
    pub hidden: &'a [HiddenExtension],
    /// Known torsion of classes, overriding the computed module.
    pub torsion: &'a [(Expression, TorsionModule)],
}

pub fn layout_page(input: &ChartInput, window: ChartWindow, style: &ChartStyle) -> Result<ChartScene, ChartError> {
    let a = input.atoms;
    let mut scene = ChartScene::empty(&input.title, window);
    // (s, f) → index of first dot and class count, for lookup
    let mut index = std::collections::BTreeMap::new();
    for (&(s, f), col) in &input.module.columns {
        if !window.contains(s, f) || col.classes.is_empty() {
            continue;
        }
        let start = scene.dots.len();
        index.insert((s, f), start);
        let n = col.classes.len();
        for (slot, c) in col.classes.iter().enumerate() {
            let label = c.representative.render(a);
            let mut torsion = c.module;
            for (x, m) in input.torsion {
                let here = x.terms().next().is_some_and(|t| t.degree(a).column() == (s, f));
                if here && col.as_tau_multiple(x) == Some((slot, 0)) {
                    torsion = *m;
                }
            }
            scene.partial |= !col.complete;
            scene.dots.push(Dot {
                s,
                f,
                w: c.degree.w,
                torsion,
                color: style.color(torsion, &label)?,
                label,
                slot,
                slots: n,
                partial: !col.complete,
            });
        }
    }
    let locate = |x: &Expression, d: TriDegree| -> Option<(Option<usize>, u32)> {
        let col = input.module.columns.get(&d.column())?;
        let (j, k) = col.as_tau_multiple(x)?;
        Some((index.get(&d.column()).map(|st| st + j), k))
    };

    for atom in &style.product_atoms {
        let Some(i) = a.index_of(atom) else { continue };
        let h = Monomial::atom(a, i);
        let hd = h.degree(a);
        for from in 0..scene.dots.len() {
            let dot = &scene.dots[from];
            let rep = &input.module.columns[&(dot.s, dot.f)].classes[dot.slot].representative;
            let td = TriDegree::new(dot.s, dot.f, dot.w) + hd;
            let Some((to, k)) = locate(&rep.mul_monomial(&h), td) else { continue };
            match to {
                Some(to) => {
                    let (color, annotation) = match k {
                        0 => (scene.dots[to].color.clone(), None),
                        1 => (style.tau_product.clone(), None),
                        k => (style.tau_power_product.clone(), Some(k.to_string())),
                    };
                    scene.segments.push(Segment {
                        kind: SegmentKind::Product(atom.clone()),
                        from,
                        to,
                        color,
                        annotation,
                    });
                }
                None if atom == "h_1" && k == 0 && dot.torsion == TorsionModule::Torsion(1) => {
                    let tcol = &input.module.columns[&td.column()];
                    let (j, _) = tcol.as_tau_multiple(&rep.mul_monomial(&h)).expect("located above");
                    if tcol.classes[j].module == TorsionModule::Torsion(1) {
                        scene.arrows.push(Arrow {
                            from,
                            color: style.tower_arrow.clone(),
                        });
                    }
                }
                None => {}
            }
        }
    }

    if let Some(t) = input.differentials {
        for e in &t.entries {
            if e.target.is_zero_literal() || !window.contains(e.source.degree.s, e.source.degree.f) {
                continue;
            }
            let td = e.source.degree + t.shift();
            let ends = (locate(&e.source.expr, e.source.degree), locate(&e.target_expr, td));
            let (Some((Some(from), 0)), Some((Some(to), k))) = ends else {
                scene.omitted.push(format!("d_{}({})", t.page, e.source.label(a)));
                continue;
            };
            let color = if k == 0 {
                style.differential.clone()
            } else {
                style.color(TorsionModule::Torsion(k), &e.target.render(a))?
            };
            scene.segments.push(Segment {
                kind: SegmentKind::Differential(t.page),
                from,
                to,
                color,
                annotation: None,
            });
        }
    }

    for h in input.hidden {
        let d = h.source_degree;
        if !window.contains(d.s, d.f) || !window.contains(h.target_degree.s, h.target_degree.f) {
            continue;
        }
        let (c, i) = h.source_class();
        let cd = d + TriDegree::new(0, 0, i as i32);
        match (locate(&c, cd), locate(&h.target_expr, h.target_degree)) {
            (Some((Some(from), 0)), Some((Some(to), 0))) => scene.segments.push(Segment {
                kind: SegmentKind::HiddenTau,
                from,
                to,
                color: style.hidden_tau.clone(),
                annotation: None,
            }),
            _ => scene.omitted.push(format!("tau: {}", h.label(a))),
        }
    }

    for (m, color) in &style.dot_colors {
        scene.legend.push((m.to_string(), color.clone()));
    }
    scene.legend.push(("tau x generator".into(), style.tau_product.clone()));
    scene.legend.push(("tau^k x generator".into(), style.tau_power_product.clone()));
    scene.legend.push(("differential".into(), style.differential.clone()));
    scene.legend.push(("hidden tau".into(), style.hidden_tau.clone()));
    scene.legend.push(("tau-torsion h_1 tower".into(), style.tower_arrow.clone()));
    if scene.partial {
        scene.legend.push(("partial: outside relation window".into(), "black".into()));
    }
    Ok(scene)
}
