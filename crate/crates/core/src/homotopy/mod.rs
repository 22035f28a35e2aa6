//! Hidden τ extensions, stem-wise assembly of τ-families, and τ-inversion.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::grading::{is_homogeneous, AtomTable, Expression, Formula, Monomial, TriDegree};
use crate::mmfdata::EinfClass;
use crate::sseq::Generator;
use crate::taulin::TorsionModule;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HiddenError {
    #[error("`{0}` is zero")]
    Zero(String),
    #[error("{source_name} {source_degree} -> {target_name} {target_degree} is not a (0, j, -1) step with j >= 1")]
    Law {
        source_name: String,
        source_degree: TriDegree,
        target_name: String,
        target_degree: TriDegree,
    },
}

/// τ · source = target in homotopy, detected in a higher filtration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HiddenExtension {
    pub source: Formula,
    pub source_expr: Expression,
    pub source_degree: TriDegree,
    pub target: Formula,
    pub target_expr: Expression,
    pub target_degree: TriDegree,
}

impl HiddenExtension {
    pub fn new(source: Formula, target: Formula, atoms: &AtomTable) -> Result<Self, HiddenError> {
        let degree = |f: &Formula| {
            let x = f.expand(atoms);
            let d = is_homogeneous(&x, atoms)
                .expect("formulas are homogeneous by construction")
                .ok_or_else(|| HiddenError::Zero(f.render(atoms)))?;
            Ok((x, d))
        };
        let (source_expr, source_degree) = degree(&source)?;
        let (target_expr, target_degree) = degree(&target)?;
        Ok(Self {
            source,
            source_expr,
            source_degree,
            target,
            target_expr,
            target_degree,
        })
    }

    /// Filtration jump j.
    pub fn jump(&self) -> i32 {
        self.target_degree.f - self.source_degree.f
    }

    /// degree(target) − degree(source) = (0, j, −1) with j ≥ 1.
    pub fn law_holds(&self) -> bool {
        let d = self.target_degree - self.source_degree;
        d.s == 0 && d.w == -1 && d.f >= 1
    }

    fn law_error(&self, atoms: &AtomTable) -> HiddenError {
        HiddenError::Law {
            source_name: self.source.render(atoms),
            source_degree: self.source_degree,
            target_name: self.target.render(atoms),
            target_degree: self.target_degree,
        }
    }

    /// Writes the source as τⁱ·C with C not divisible by τ.
    pub fn source_class(&self) -> (Expression, u32) {
        strip_tau(&self.source_expr)
    }

    fn times(&self, m: &Monomial, atoms: &AtomTable) -> Self {
        Self::new(self.source.times_monomial(m), self.target.times_monomial(m), atoms)
            .expect("multiplying by a monomial keeps both ends nonzero")
    }

    pub fn label(&self, atoms: &AtomTable) -> String {
        format!(
            "{} {} -> {} {}",
            self.source.render(atoms),
            self.source_degree,
            self.target.render(atoms),
            self.target_degree
        )
    }
}

fn strip_tau(x: &Expression) -> (Expression, u32) {
    let i = x.terms().map(Monomial::tau_power).min().unwrap_or(0);
    (
        Expression::from_terms(x.terms().map(|m| m.with_tau(m.tau_power() - i))),
        i,
    )
}

/// Closes `base` under multiplication by gᵃΔ⁸ᵇ, keeping rows whose source
/// stem is at most `max_stem`. Base rows come first; duplicates are dropped.
/// Fails if any row breaks the degree law.
pub fn expand_hidden_extensions(
    base: &[HiddenExtension],
    atoms: &AtomTable,
    max_stem: i32,
) -> Result<Vec<HiddenExtension>, HiddenError> {
    let one = Monomial::one(atoms);
    let g = atoms.index_of("g").map(|i| Monomial::atom(atoms, i));
    let delta8 = atoms.index_of("Delta").map(|i| Monomial::atom(atoms, i).pow(8));
    let step = |m: &Option<Monomial>| m.as_ref().map(|m| m.degree(atoms).s).filter(|&s| s > 0);
    let (gs, ds) = (step(&g), step(&delta8));

    let mut out: Vec<HiddenExtension> = Vec::new();
    let push = |h: HiddenExtension, out: &mut Vec<HiddenExtension>| {
        if !out.iter().any(|o| o.source_expr == h.source_expr && o.target_expr == h.target_expr) {
            out.push(h);
        }
    };
    for h in base {
        if !h.law_holds() {
            return Err(h.law_error(atoms));
        }
        if h.source_degree.s <= max_stem {
            push(h.clone(), &mut out);
        }
    }
    for h in base {
        let room = max_stem - h.source_degree.s;
        let amax = gs.map_or(0, |s| room.max(-1) / s);
        let bmax = ds.map_or(0, |s| room.max(-1) / s);
        for b in 0..=bmax.max(0) {
            for a in 0..=amax.max(0) {
                if (a, b) == (0, 0) {
                    continue;
                }
                let mut m = one.clone();
                if let Some(d) = &delta8 {
                    m = m.mul(&d.pow(b as u32));
                }
                if let Some(gm) = &g {
                    m = m.mul(&gm.pow(a as u32));
                }
                let e = h.times(&m, atoms);
                if e.source_degree.s > max_stem {
                    continue;
                }
                if !e.law_holds() {
                    return Err(e.law_error(atoms));
                }
                push(e, &mut out);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AssemblyError {
    #[error("two hidden extensions leave `{0}`")]
    TwoOut(String),
    #[error("two hidden extensions land on `{0}`")]
    TwoIn(String),
    #[error("hidden extensions form a cycle through `{0}`")]
    Cycle(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Member {
    pub name: String,
    pub expr: Expression,
    /// Degree of the class itself (its τ-free form).
    pub degree: TriDegree,
    /// E∞ τ-torsion of this class, when known.
    pub module: Option<TorsionModule>,
}

/// Classes glued by hidden τ extensions into one cyclic F₂[τ]-module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    pub members: Vec<Member>,
    pub module: TorsionModule,
    /// Set when some member's order is unknown: `module` is then a lower
    /// bound on the torsion order.
    pub lower_bound: bool,
}

impl Family {
    pub fn lead(&self) -> &Member {
        &self.members[0]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StemAssembly {
    pub stem: i32,
    pub families: Vec<Family>,
}

impl StemAssembly {
    /// The family containing `x` as a member.
    pub fn family_of(&self, x: &Expression) -> Option<&Family> {
        self.families.iter().find(|f| f.members.iter().any(|m| &m.expr == x))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = self.lead();
        write!(f, "lead={} ({},{}) -> {}", l.name, l.degree.f, l.degree.w, self.module)?;
        if self.lower_bound {
            f.write_str(" (lower bound)")?;
        }
        if self.members.len() > 1 {
            let names: Vec<&str> = self.members.iter().map(|m| m.name.as_str()).collect();
            write!(f, " [{}]", names.join(" -> "))?;
        }
        Ok(())
    }
}

impl fmt::Display for StemAssembly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for fam in &self.families {
            writeln!(f, "stem {}: {fam}", self.stem)?;
        }
        Ok(())
    }
}

/// Chains the classes of stem `s` into τ-families. A hidden extension with
/// source τⁱ·C gives C order i+1 and links C to the target; other orders come
/// from `einf`. A family is free when its last member is free, otherwise its
/// order is the sum of its members' orders.
pub fn assemble_stem(
    s: i32,
    einf: &[EinfClass],
    hidden: &[HiddenExtension],
    atoms: &AtomTable,
) -> Result<StemAssembly, AssemblyError> {
    let mut nodes: BTreeMap<Expression, (TriDegree, Option<TorsionModule>)> = BTreeMap::new();
    let mut next: HashMap<Expression, Expression> = HashMap::new();
    let mut has_in: HashMap<Expression, ()> = HashMap::new();
    for e in einf.iter().filter(|e| e.degree.s == s) {
        nodes.insert(e.expr.clone(), (e.degree, Some(e.module)));
    }
    for h in hidden.iter().filter(|h| h.source_degree.s == s) {
        let (c, i) = h.source_class();
        let render = |x: &Expression| x.render(atoms);
        if next.insert(c.clone(), h.target_expr.clone()).is_some() {
            return Err(AssemblyError::TwoOut(render(&c)));
        }
        if has_in.insert(h.target_expr.clone(), ()).is_some() {
            return Err(AssemblyError::TwoIn(render(&h.target_expr)));
        }
        let deg = h.source_degree + TriDegree::new(0, 0, i as i32);
        nodes.insert(c, (deg, Some(TorsionModule::Torsion(i + 1))));
        nodes.entry(h.target_expr.clone()).or_insert((h.target_degree, None));
    }

    let mut families = Vec::new();
    let mut seen = 0;
    for head in nodes.keys().filter(|x| !has_in.contains_key(*x)) {
        let mut members = Vec::new();
        let mut cur = head.clone();
        loop {
            let (degree, module) = nodes[&cur];
            members.push(Member {
                name: cur.render(atoms),
                expr: cur.clone(),
                degree,
                module,
            });
            match next.get(&cur) {
                Some(n) => cur = n.clone(),
                None => break,
            }
            if members.len() > nodes.len() {
                return Err(AssemblyError::Cycle(head.render(atoms)));
            }
        }
        seen += members.len();
        let mut total = 0;
        let mut lower_bound = false;
        let mut module = None;
        for m in &members {
            match m.module {
                Some(TorsionModule::Free) => module = Some(TorsionModule::Free),
                Some(TorsionModule::Torsion(k)) => total += k,
                None => {
                    total += 1;
                    lower_bound = true;
                }
            }
        }
        families.push(Family {
            module: module.unwrap_or(TorsionModule::Torsion(total)),
            lower_bound: lower_bound && module.is_none(),
            members,
        });
    }
    if seen < nodes.len() {
        let stuck = nodes.keys().find(|x| !families.iter().any(|f| f.members.iter().any(|m| &&m.expr == x)));
        return Err(AssemblyError::Cycle(stuck.map(|x| x.render(atoms)).unwrap_or_default()));
    }
    families.sort_by(|a, b| {
        let (x, y) = (a.lead(), b.lead());
        x.degree.f.cmp(&y.degree.f).then(y.degree.w.cmp(&x.degree.w)).then(x.name.cmp(&y.name))
    });
    Ok(StemAssembly { stem: s, families })
}

/// A classical class after setting τ = 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalClass {
    pub stem: i32,
    pub filtration: i32,
    pub name: String,
}

/// Rank of a cyclic module after inverting τ.
pub fn classical_rank(m: TorsionModule) -> usize {
    usize::from(m.is_free())
}

/// Free families survive as one classical class, detected by the last
/// member; torsion families vanish.
pub fn invert_tau(a: &StemAssembly, atoms: &AtomTable) -> Vec<ClassicalClass> {
    a.families
        .iter()
        .filter(|f| f.module.is_free())
        .map(|f| {
            let last = f.members.last().expect("families are nonempty");
            ClassicalClass {
                stem: a.stem,
                filtration: last.degree.f,
                name: last.expr.invert_tau().render(atoms),
            }
        })
        .collect()
}

/// Generator names with τ set to 1, one per distinct result.
pub fn invert_tau_generators(gens: &[Generator], atoms: &AtomTable) -> Vec<ClassicalClass> {
    let mut out: Vec<ClassicalClass> = Vec::new();
    for g in gens {
        let x = g.expr.invert_tau();
        if x.is_zero() {
            continue;
        }
        let c = ClassicalClass {
            stem: g.degree.s,
            filtration: g.degree.f,
            name: x.render(atoms),
        };
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}
