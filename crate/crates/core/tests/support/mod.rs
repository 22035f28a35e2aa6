//! Independent oracles: polynomial arithmetic and determinantal divisors over
//! F2[tau], and brute-force homology of small synthetic differential algebras.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use mmf_sseq::algebra::Presentation;
use mmf_sseq::grading::{AtomTable, Expression, Formula, Monomial, TriDegree};
use mmf_sseq::sseq::{DifferentialTable, Generator, Page};
use mmf_sseq::taulin::{TauScalar, TorsionModule};
use rand::Rng;

// ---- F2[tau] polynomials as bit words ----

pub fn pmul(a: u64, b: u64) -> u64 {
    let mut r = 0;
    for i in 0..64 {
        if b >> i & 1 == 1 {
            r ^= a << i;
        }
    }
    r
}

fn pdeg(a: u64) -> i32 {
    63 - a.leading_zeros() as i32
}

pub fn prem(mut a: u64, b: u64) -> u64 {
    let db = pdeg(b);
    while a != 0 && pdeg(a) >= db {
        a ^= b << (pdeg(a) - db);
    }
    a
}

pub fn pdiv(mut a: u64, b: u64) -> u64 {
    let db = pdeg(b);
    let mut q = 0;
    while a != 0 && pdeg(a) >= db {
        let s = pdeg(a) - db;
        q |= 1 << s;
        a ^= b << s;
    }
    assert_eq!(a, 0, "inexact division");
    q
}

pub fn pgcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = prem(a, b);
        a = b;
        b = r;
    }
    a
}

pub fn det(m: &[Vec<u64>]) -> u64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n).fold(0, |acc, j| {
            if m[0][j] == 0 {
                return acc;
            }
            let minor: Vec<Vec<u64>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, &x)| x).collect())
                .collect();
            acc ^ pmul(m[0][j], det(&minor))
        }),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors d_k / d_{k-1}, from gcds of k-minors.
pub fn invariant_factors(m: &[Vec<u64>]) -> Vec<u64> {
    let (r, c) = (m.len(), m.first().map_or(0, Vec::len));
    let mut prev = 1;
    let mut out = Vec::new();
    for k in 1..=r.min(c) {
        let mut g = 0;
        for rows in subsets(r, k) {
            for cols in subsets(c, k) {
                let sub: Vec<Vec<u64>> = rows.iter().map(|&i| cols.iter().map(|&j| m[i][j]).collect()).collect();
                g = pgcd(g, det(&sub));
            }
        }
        if g == 0 {
            break;
        }
        out.push(pdiv(g, prev));
        prev = g;
    }
    out
}

pub fn to_scalar(x: u64) -> TauScalar {
    TauScalar::from_word(x)
}

pub fn from_scalar(x: &TauScalar) -> u64 {
    x.exponents().fold(0, |acc, k| acc | 1 << k)
}

// ---- dense F2 linear algebra ----

#[derive(Clone)]
struct Basis {
    rows: Vec<(usize, Vec<u64>)>,
}

fn words(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

fn lead(v: &[u64]) -> Option<usize> {
    v.iter().enumerate().find(|(_, w)| **w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

impl Basis {
    fn new() -> Self {
        Basis { rows: vec![] }
    }
    fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        for (p, r) in &self.rows {
            if v[p / 64] >> (p % 64) & 1 == 1 {
                for (a, b) in v.iter_mut().zip(r) {
                    *a ^= b;
                }
            }
        }
        v
    }
    fn add(&mut self, v: Vec<u64>) -> bool {
        let v = self.reduce(v);
        let Some(p) = lead(&v) else { return false };
        for (_, r) in self.rows.iter_mut() {
            if r[p / 64] >> (p % 64) & 1 == 1 {
                for (a, b) in r.iter_mut().zip(&v) {
                    *a ^= b;
                }
            }
        }
        self.rows.push((p, v));
        true
    }
    fn dim(&self) -> usize {
        self.rows.len()
    }
}

/// Null space of the map sending basis vector i to cols[i].
fn null_space(n: usize, cols: &[Vec<u64>], target_words: usize) -> Vec<Vec<u64>> {
    let tw = target_words;
    let nw = words(n);
    // augmented rows: [image | identity]
    let mut rows: Vec<Vec<u64>> = cols
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut r = c.clone();
            r.resize(tw, 0);
            let mut id = vec![0u64; nw];
            id[i / 64] |= 1 << (i % 64);
            r.extend(id);
            r
        })
        .collect();
    let mut out = Vec::new();
    let mut pivots: Vec<(usize, Vec<u64>)> = Vec::new();
    for r in rows.iter_mut() {
        for (p, pr) in &pivots {
            if r[p / 64] >> (p % 64) & 1 == 1 {
                for (a, b) in r.iter_mut().zip(pr) {
                    *a ^= b;
                }
            }
        }
        match lead(&r[..tw]) {
            Some(p) => pivots.push((p, r.clone())),
            None => out.push(r[tw..].to_vec()),
        }
    }
    out
}

// ---- synthetic differential algebras ----

#[derive(Clone, Debug)]
pub struct Synthetic {
    pub degrees: Vec<TriDegree>,
    /// d(atom) as (tau power, exponent vector) or None for zero.
    pub d: Vec<Option<(u32, Vec<u32>)>>,
    /// Relations as (tau power, exponent vector).
    pub relations: Vec<(u32, Vec<u32>)>,
    pub r: i32,
}

type Mono = (u32, Vec<u32>);

fn mono_degree(degs: &[TriDegree], m: &Mono) -> TriDegree {
    let mut d = TriDegree::new(0, 0, -(m.0 as i32));
    for (i, &e) in m.1.iter().enumerate() {
        d += (e as i32) * degs[i];
    }
    d
}

/// Monomials (τ included) of exact degree `t` in atoms `allowed`.
fn monomials(degs: &[TriDegree], allowed: &[usize], t: TriDegree) -> Vec<Mono> {
    fn go(degs: &[TriDegree], allowed: &[usize], k: usize, rem: TriDegree, cur: &mut Vec<u32>, out: &mut Vec<Mono>) {
        if k == allowed.len() {
            if rem.s == 0 && rem.f == 0 && rem.w <= 0 {
                out.push(((-rem.w) as u32, cur.clone()));
            }
            return;
        }
        let d = degs[allowed[k]];
        let mut e = 0;
        let mut r = rem;
        loop {
            if r.f < 0 || r.s < 0 {
                break;
            }
            cur[allowed[k]] = e;
            go(degs, allowed, k + 1, r, cur, out);
            cur[allowed[k]] = 0;
            e += 1;
            r = r - d;
            if d.f == 0 && d.s == 0 {
                break;
            }
        }
    }
    let mut out = Vec::new();
    let mut cur = vec![0; degs.len()];
    go(degs, allowed, 0, t, &mut cur, &mut out);
    out.sort();
    out
}

impl Synthetic {
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let n = rng.gen_range(2..=4);
        let r = 2;
        let ncycle = rng.gen_range(1..n);
        let mut degrees: Vec<TriDegree> = Vec::new();
        for _ in 0..ncycle {
            let s = rng.gen_range(0..=4);
            let f = rng.gen_range(1..=2);
            degrees.push(TriDegree::new(s, f, rng.gen_range(0..=s.max(1))));
        }
        let cyc: Vec<usize> = (0..ncycle).collect();
        let mut d = vec![None; ncycle];
        for _ in ncycle..n {
            // pick a target monomial in cycle atoms, then place the atom one step back
            let mut e = vec![0u32; n];
            for &c in &cyc {
                e[c] = rng.gen_range(0..=2);
            }
            if e.iter().all(|&x| x == 0) {
                e[0] = 1;
            }
            let mut t = TriDegree::new(0, 0, 0);
            for (i, &k) in e.iter().enumerate().take(ncycle) {
                t += (k as i32) * degrees[i];
            }
            let src = TriDegree::new(t.s + 1, t.f - r, t.w - rng.gen_range(0..=1));
            if src.f < 1 || src.s > 12 {
                degrees.push(TriDegree::new(rng.gen_range(0..=4), 1, 1));
                d.push(None);
                continue;
            }
            let tau = (t.w - src.w) as u32;
            degrees.push(src);
            d.push(Some((tau, e)));
        }
        let mut relations = Vec::new();
        for _ in 0..rng.gen_range(0..=2) {
            let mut e = vec![0u32; n];
            for &c in &cyc {
                e[c] = rng.gen_range(0..=3);
            }
            if e.iter().all(|&x| x == 0) {
                continue;
            }
            relations.push((rng.gen_range(0..=3), e));
        }
        Synthetic { degrees, d, relations, r }
    }

    pub fn atoms(&self) -> AtomTable {
        let names = ["x", "y", "z", "q"];
        AtomTable::new(self.degrees.iter().enumerate().map(|(i, &d)| (names[i], d))).unwrap()
    }

    fn expr(&self, a: &AtomTable, m: &Mono) -> Expression {
        let e: Vec<u16> = m.1.iter().map(|&x| x as u16).collect();
        let _ = a;
        Expression::monomial(Monomial::from_exponents(&e, m.0))
    }

    /// The engine's view: the presentation and d_r on every atom.
    pub fn page(&self) -> Page {
        let a = self.atoms();
        let rels = self.relations.iter().map(|m| self.expr(&a, m)).collect();
        let mut t = DifferentialTable::new(self.r);
        for (i, d) in self.d.iter().enumerate() {
            let g = Generator::new(Formula::from_monomial(&Monomial::atom(&a, i)), self.degrees[i], &a).unwrap();
            let target = match d {
                None => Formula::zero(),
                Some(m) => {
                    let e: Vec<u16> = m.1.iter().map(|&x| x as u16).collect();
                    Formula::from_monomial(&Monomial::from_exponents(&e, m.0))
                }
            };
            t.insert(g, target, &a);
        }
        Page::new(Presentation::new(a, rels, None).unwrap(), t)
    }

    fn d_mono(&self, m: &Mono) -> Vec<Mono> {
        let mut out: HashMap<Mono, u32> = HashMap::new();
        for (i, &e) in m.1.iter().enumerate() {
            if e % 2 == 0 {
                continue;
            }
            let Some((tau, de)) = &self.d[i] else { continue };
            let mut x = m.1.clone();
            x[i] -= 1;
            for (k, v) in de.iter().enumerate() {
                x[k] += v;
            }
            *out.entry((m.0 + tau, x)).or_default() += 1;
        }
        out.into_iter().filter(|(_, c)| c % 2 == 1).map(|(m, _)| m).collect()
    }

    fn space(&self, t: TriDegree) -> (Vec<Mono>, HashMap<Mono, usize>) {
        let all: Vec<usize> = (0..self.degrees.len()).collect();
        let ms = monomials(&self.degrees, &all, t);
        let idx = ms.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        (ms, idx)
    }

    fn vec_of(idx: &HashMap<Mono, usize>, ms: &[Mono], n: usize) -> Vec<u64> {
        let mut v = vec![0u64; words(n)];
        for m in ms {
            let i = idx[m];
            v[i / 64] ^= 1 << (i % 64);
        }
        v
    }

    fn relation_vectors(&self, t: TriDegree, idx: &HashMap<Mono, usize>, n: usize) -> Vec<Vec<u64>> {
        let all: Vec<usize> = (0..self.degrees.len()).collect();
        let mut out = Vec::new();
        for r in &self.relations {
            let rd = mono_degree(&self.degrees, r);
            for m in monomials(&self.degrees, &all, t - rd) {
                let p: Mono = (m.0 + r.0, m.1.iter().zip(&r.1).map(|(a, b)| a + b).collect());
                out.push(Self::vec_of(idx, &[p], n));
            }
        }
        out
    }

    /// Boundaries-plus-relations basis and cycle list at one tridegree.
    fn pieces(&self, t: TriDegree) -> (Basis, Vec<Vec<u64>>, usize) {
        let (ms, idx) = self.space(t);
        let n = ms.len();
        let shift = TriDegree::new(-1, self.r, 0);
        let mut b = Basis::new();
        for v in self.relation_vectors(t, &idx, n) {
            b.add(v);
        }
        let (sm, _) = self.space(t - shift);
        for m in &sm {
            b.add(Self::vec_of(&idx, &self.d_mono(m), n));
        }
        let (tm, tidx) = self.space(t + shift);
        let tn = tm.len();
        let mut cols: Vec<Vec<u64>> = ms.iter().map(|m| Self::vec_of(&tidx, &self.d_mono(m), tn)).collect();
        let rel = self.relation_vectors(t + shift, &tidx, tn);
        cols.extend(rel.iter().cloned());
        let ker = null_space(cols.len(), &cols, words(tn));
        let cycles: Vec<Vec<u64>> = ker
            .into_iter()
            .map(|k| {
                let mut v = vec![0u64; words(n)];
                for i in 0..n {
                    if k[i / 64] >> (i % 64) & 1 == 1 {
                        v[i / 64] ^= 1 << (i % 64);
                    }
                }
                v
            })
            .collect();
        (b, cycles, n)
    }

    /// Rank of τ^j from homology at weight w to weight w − j in column (s, f).
    fn tau_rank(&self, s: i32, f: i32, w: i32, j: u32, cache: &mut BTreeMap<i32, (Basis, Vec<Vec<u64>>, usize)>) -> usize {
        for ww in [w, w - j as i32] {
            cache.entry(ww).or_insert_with(|| self.pieces(TriDegree::new(s, f, ww)));
        }
        let (ms, _) = self.space(TriDegree::new(s, f, w));
        let (_, tidx) = self.space(TriDegree::new(s, f, w - j as i32));
        let (bt, _, nt) = &cache[&(w - j as i32)];
        let (_, cycles, _) = &cache[&w];
        let mut span = bt.clone();
        let base = span.dim();
        for c in cycles {
            let mut img: Vec<Mono> = Vec::new();
            for (i, m) in ms.iter().enumerate() {
                if c[i / 64] >> (i % 64) & 1 == 1 {
                    img.push((m.0 + j, m.1.clone()));
                }
            }
            span.add(Self::vec_of(&tidx, &img, *nt));
        }
        span.dim() - base
    }

    /// Cyclic summands of homology in column (s, f): (generator weight, module).
    pub fn oracle_column(&self, s: i32, f: i32) -> Vec<(i32, TorsionModule)> {
        let all: Vec<usize> = (0..self.degrees.len()).collect();
        // weights of τ-free monomials bound the generators from above
        let mut top = i32::MIN;
        let mut bottom = i32::MAX;
        for w in -40..=40 {
            let m = monomials(&self.degrees, &all, TriDegree::new(s, f, w));
            if m.iter().any(|x| x.0 == 0) {
                top = top.max(w);
                bottom = bottom.min(w);
            }
        }
        if top == i32::MIN {
            return vec![];
        }
        let big = 16u32;
        let mut cache = BTreeMap::new();
        let c = |w: i32, j: u32, cache: &mut BTreeMap<i32, _>| -> i64 {
            if w > top {
                0
            } else {
                self.tau_rank(s, f, w, j, cache) as i64
            }
        };
        let mut out = Vec::new();
        for w in (bottom - big as i32..=top).rev() {
            for k in 1..big {
                let n = c(w, k - 1, &mut cache) - c(w + 1, k, &mut cache) - c(w, k, &mut cache) + c(w + 1, k + 1, &mut cache);
                assert!(n >= 0);
                for _ in 0..n {
                    out.push((w, TorsionModule::Torsion(k)));
                }
            }
            let n = c(w, big, &mut cache) - c(w + 1, big + 1, &mut cache);
            for _ in 0..n {
                out.push((w, TorsionModule::Free));
            }
        }
        out.sort();
        out
    }
}
