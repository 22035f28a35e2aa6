use crate::grading::{AtomTable, Monomial, TriDegree};

/// Suffix bounds used to prune the exponent search: over factors `i..`, the
/// extreme stem-per-filtration and weight-per-filtration ratios.
struct Bounds {
    min_s: Vec<f64>,
    max_s: Vec<f64>,
    max_w: Vec<f64>,
}

impl Bounds {
    fn new(degrees: &[TriDegree]) -> Self {
        let n = degrees.len();
        let mut b = Bounds {
            min_s: vec![f64::INFINITY; n + 1],
            max_s: vec![f64::NEG_INFINITY; n + 1],
            max_w: vec![f64::NEG_INFINITY; n + 1],
        };
        for i in (0..n).rev() {
            let d = degrees[i];
            let f = d.f as f64;
            b.min_s[i] = b.min_s[i + 1].min(d.s as f64 / f);
            b.max_s[i] = b.max_s[i + 1].max(d.s as f64 / f);
            b.max_w[i] = b.max_w[i + 1].max(d.w as f64 / f);
        }
        b
    }
}

/// Exponent vectors e with Σ eᵢ·degreesᵢ in column (s, f) and weight at least
/// `min_weight`. Every factor must have positive filtration. Unsorted.
pub fn column_exponents(degrees: &[TriDegree], s: i32, f: i32, min_weight: Option<i32>) -> Vec<Vec<u16>> {
    assert!(degrees.iter().all(|d| d.f >= 1), "factors must have positive filtration");
    if f < 0 {
        return vec![];
    }
    let mut search = Search {
        degrees,
        bounds: Bounds::new(degrees),
        min_weight,
        exps: vec![0; degrees.len()],
        out: Vec::new(),
    };
    search.run(0, s, f, 0);
    search.out
}

struct Search<'a> {
    degrees: &'a [TriDegree],
    bounds: Bounds,
    min_weight: Option<i32>,
    exps: Vec<u16>,
    out: Vec<Vec<u16>>,
}

impl Search<'_> {
    fn run(&mut self, i: usize, s_rem: i32, f_rem: i32, w_acc: i32) {
        if f_rem == 0 {
            if s_rem == 0 && self.min_weight.is_none_or(|m| w_acc >= m) {
                self.out.push(self.exps.clone());
            }
            return;
        }
        if i == self.degrees.len() {
            return;
        }
        let eps = 1e-9;
        let fr = f_rem as f64;
        let b = &self.bounds;
        if (s_rem as f64) < fr * b.min_s[i] - eps || (s_rem as f64) > fr * b.max_s[i] + eps {
            return;
        }
        if let Some(m) = self.min_weight {
            if (w_acc as f64) + fr * b.max_w[i] + eps < m as f64 {
                return;
            }
        }
        let d = self.degrees[i];
        for e in 0..=f_rem / d.f {
            self.exps[i] = e as u16;
            self.run(i + 1, s_rem - e * d.s, f_rem - e * d.f, w_acc + e * d.w);
        }
        self.exps[i] = 0;
    }
}

/// All τ-free monomials in the (s, f) column with weight at least `min_weight`,
/// in canonical order.
pub fn column_monomials(atoms: &AtomTable, s: i32, f: i32, min_weight: Option<i32>) -> Vec<Monomial> {
    let degrees: Vec<TriDegree> = (0..atoms.len()).map(|i| atoms.degree(i)).collect();
    let mut out: Vec<Monomial> = column_exponents(&degrees, s, f, min_weight)
        .into_iter()
        .map(|e| Monomial::from_exponents(&e, 0))
        .collect();
    out.sort();
    out
}

/// Every monomial (τ-power included) of exactly the given degree, in
/// canonical order.
pub fn enumerate_monomials(atoms: &AtomTable, deg: TriDegree) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = column_monomials(atoms, deg.s, deg.f, Some(deg.w))
        .into_iter()
        .map(|m| {
            let w = m.degree(atoms).w;
            m.with_tau((w - deg.w) as u32)
        })
        .collect();
    out.sort();
    out
}
