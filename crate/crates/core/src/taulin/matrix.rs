use std::fmt;
use std::ops::Mul;

use super::TauScalar;

/// A dense matrix over F₂[τ], row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct TauMatrix {
    rows: usize,
    cols: usize,
    data: Vec<TauScalar>,
}

impl TauMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![TauScalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = TauScalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<TauScalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Builds a matrix whose columns are the given vectors. The row count must
    /// be supplied so that an empty column list still has a shape.
    pub fn from_columns(rows: usize, cols: &[Vec<TauScalar>]) -> Self {
        let mut m = Self::zero(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column {j} has the wrong length");
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<TauScalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<TauScalar>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(TauScalar::is_zero)
    }

    pub fn mul_vec(&self, v: &[TauScalar]) -> Vec<TauScalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = TauScalar::zero();
                for (j, x) in v.iter().enumerate() {
                    let e = &self[(i, j)];
                    if !e.is_zero() && !x.is_zero() {
                        acc += &(e * x);
                    }
                }
                acc
            })
            .collect()
    }

    /// Determinant by cofactor expansion along the first row. Only meant for
    /// the small matrices used in tests and oracles.
    pub fn determinant(&self) -> TauScalar {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return TauScalar::one();
        }
        if n == 1 {
            return self[(0, 0)].clone();
        }
        let mut acc = TauScalar::zero();
        for j in 0..n {
            if self[(0, j)].is_zero() {
                continue;
            }
            let minor = self.submatrix(&(1..n).collect::<Vec<_>>(), &skip(n, j));
            acc += &(&self[(0, j)] * &minor.determinant());
        }
        acc
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zero(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    fn add_row_multiple(&mut self, target: usize, source: usize, q: &TauScalar) {
        for j in 0..self.cols {
            let x = &self.data[source * self.cols + j];
            if x.is_zero() {
                continue;
            }
            let p = q * x;
            self.data[target * self.cols + j] += &p;
        }
    }

    fn add_col_multiple(&mut self, target: usize, source: usize, q: &TauScalar) {
        for i in 0..self.rows {
            let x = &self.data[i * self.cols + source];
            if x.is_zero() {
                continue;
            }
            let p = q * x;
            self.data[i * self.cols + target] += &p;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

fn skip(n: usize, j: usize) -> Vec<usize> {
    (0..n).filter(|&k| k != j).collect()
}

impl std::ops::Index<(usize, usize)> for TauMatrix {
    type Output = TauScalar;
    fn index(&self, (i, j): (usize, usize)) -> &TauScalar {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for TauMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut TauScalar {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &TauMatrix {
    type Output = TauMatrix;
    fn mul(self, rhs: &TauMatrix) -> TauMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut out = TauMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for TauMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "TauMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `u · m · v = d` with `u`, `v` invertible and `d` diagonal, each diagonal
/// entry dividing the next. The inverses are tracked alongside so callers can
/// change basis without inverting anything afterwards.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: TauMatrix,
    pub u_inv: TauMatrix,
    pub d: TauMatrix,
    pub v: TauMatrix,
    pub v_inv: TauMatrix,
    pub rank: usize,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<TauScalar> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

/// Smith normal form over F₂[τ].
///
/// Pivot rule: the nonzero entry of least τ-degree in the remaining block,
/// ties going to the smallest (row, col). On matrices whose entries are all
/// τ-monomials this keeps every row and column operation homogeneous.
pub fn smith_normal_form(m: &TauMatrix) -> SmithForm {
    let (nr, nc) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = TauMatrix::identity(nr);
    let mut u_inv = TauMatrix::identity(nr);
    let mut v = TauMatrix::identity(nc);
    let mut v_inv = TauMatrix::identity(nc);
    let mut rank = 0;

    // row_i += q row_k on d; u follows, u_inv gets col_k += q col_i
    let row_op = |d: &mut TauMatrix, u: &mut TauMatrix, u_inv: &mut TauMatrix, i, k, q: &TauScalar| {
        d.add_row_multiple(i, k, q);
        u.add_row_multiple(i, k, q);
        u_inv.add_col_multiple(k, i, q);
    };
    let col_op = |d: &mut TauMatrix, v: &mut TauMatrix, v_inv: &mut TauMatrix, j, k, q: &TauScalar| {
        d.add_col_multiple(j, k, q);
        v.add_col_multiple(j, k, q);
        v_inv.add_row_multiple(k, j, q);
    };

    for k in 0..nr.min(nc) {
        let Some((pi, pj)) = min_pivot(&d, k) else {
            break;
        };
        d.swap_rows(k, pi);
        u.swap_rows(k, pi);
        u_inv.swap_cols(k, pi);
        d.swap_cols(k, pj);
        v.swap_cols(k, pj);
        v_inv.swap_rows(k, pj);

        loop {
            let mut dirty = false;
            for i in k + 1..nr {
                if d[(i, k)].is_zero() {
                    continue;
                }
                let (q, r) = d[(i, k)].div_rem(&d[(k, k)]);
                row_op(&mut d, &mut u, &mut u_inv, i, k, &q);
                dirty |= !r.is_zero();
            }
            for j in k + 1..nc {
                if d[(k, j)].is_zero() {
                    continue;
                }
                let (q, r) = d[(k, j)].div_rem(&d[(k, k)]);
                col_op(&mut d, &mut v, &mut v_inv, j, k, &q);
                dirty |= !r.is_zero();
            }
            if dirty {
                // a remainder of smaller degree appeared; restart with a new pivot
                let (pi, pj) = min_pivot(&d, k).expect("nonzero block");
                d.swap_rows(k, pi);
                u.swap_rows(k, pi);
                u_inv.swap_cols(k, pi);
                d.swap_cols(k, pj);
                v.swap_cols(k, pj);
                v_inv.swap_rows(k, pj);
                continue;
            }
            // row and column k are clear; enforce divisibility of the rest
            let offender = (k + 1..nr)
                .flat_map(|i| (k + 1..nc).map(move |j| (i, j)))
                .find(|&(i, j)| !d[(k, k)].divides(&d[(i, j)]));
            match offender {
                Some((i, _)) => {
                    row_op(&mut d, &mut u, &mut u_inv, k, i, &TauScalar::one());
                }
                None => break,
            }
        }
        rank += 1;
    }

    SmithForm {
        u,
        u_inv,
        d,
        v,
        v_inv,
        rank,
    }
}

fn min_pivot(d: &TauMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(u32, usize, usize)> = None;
    for i in k..d.rows {
        for j in k..d.cols {
            if let Some(deg) = d[(i, j)].degree() {
                if best.is_none_or(|(b, _, _)| deg < b) {
                    best = Some((deg, i, j));
                }
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Some `x` with `m · x = target`, or `None` when no solution exists over F₂[τ].
pub fn solve_linear(m: &TauMatrix, target: &[TauScalar]) -> Option<Vec<TauScalar>> {
    assert_eq!(target.len(), m.rows, "target length must equal the row count");
    let snf = smith_normal_form(m);
    solve_with(&snf, target)
}

/// Solves against a precomputed Smith form of the coefficient matrix.
pub fn solve_with(snf: &SmithForm, target: &[TauScalar]) -> Option<Vec<TauScalar>> {
    let ut = snf.u.mul_vec(target);
    let mut y = vec![TauScalar::zero(); snf.v.rows()];
    for (i, b) in ut.iter().enumerate() {
        if i < snf.rank {
            let (q, r) = b.div_rem(&snf.d[(i, i)]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !b.is_zero() {
            return None;
        }
    }
    Some(snf.v.mul_vec(&y))
}

/// A basis of the kernel of `m` (columns of `v` past the rank).
pub fn kernel(m: &TauMatrix) -> Vec<Vec<TauScalar>> {
    let snf = smith_normal_form(m);
    (snf.rank..m.cols).map(|j| snf.v.column(j)).collect()
}

/// Cyclic F₂[τ]-module type: free (M₂) or M₂/τᵏ with k ≥ 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TorsionModule {
    Torsion(u32),
    Free,
}

impl TorsionModule {
    pub fn is_free(self) -> bool {
        matches!(self, TorsionModule::Free)
    }

    pub fn order(self) -> Option<u32> {
        match self {
            TorsionModule::Torsion(k) => Some(k),
            TorsionModule::Free => None,
        }
    }
}

impl fmt::Display for TorsionModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorsionModule::Free => f.write_str("M2"),
            TorsionModule::Torsion(1) => f.write_str("M2/tau"),
            TorsionModule::Torsion(k) => write!(f, "M2/tau^{k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub module: TorsionModule,
    pub representative: Vec<TauScalar>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SubquotientError {
    #[error("boundary column {index} does not lie in the span of the cycles")]
    BoundaryNotInCycles { index: usize },
    #[error("invariant factor {factor} is not a power of tau")]
    NonTauTorsion { factor: TauScalar },
    #[error("column {index} has length {len}, expected {expected}")]
    Shape {
        index: usize,
        len: usize,
        expected: usize,
    },
}

/// A cyclic decomposition of span(cycles)/span(boundaries) that can also
/// report coordinates of any cycle in the chosen basis.
#[derive(Clone, Debug)]
pub struct SubquotientBasis {
    zsnf: SmithForm,
    p: TauMatrix,
    /// One entry per basis vector of span(cycles): `None` for free, else the
    /// invariant factor (a unit means the vector is a boundary).
    factors: Vec<Option<TauScalar>>,
    /// Index into the basis for each entry of `summands`.
    kept: Vec<usize>,
    pub summands: Vec<Summand>,
}

impl SubquotientBasis {
    pub fn new(
        ambient_dim: usize,
        cycles: &[Vec<TauScalar>],
        boundaries: &[Vec<TauScalar>],
    ) -> Result<Self, SubquotientError> {
        for (index, c) in cycles.iter().chain(boundaries).enumerate() {
            if c.len() != ambient_dim {
                return Err(SubquotientError::Shape {
                    index,
                    len: c.len(),
                    expected: ambient_dim,
                });
            }
        }
        let c = TauMatrix::from_columns(ambient_dim, cycles);
        let snf = smith_normal_form(&c);
        let r = snf.rank;
        // c·v = u⁻¹·d, so its first r columns are a basis of span(cycles)
        let cv = &c * &snf.v;
        let basis: Vec<Vec<TauScalar>> = (0..r).map(|j| cv.column(j)).collect();
        let zb = TauMatrix::from_columns(ambient_dim, &basis);
        let zsnf = smith_normal_form(&zb);

        let mut coords = Vec::with_capacity(boundaries.len());
        for (index, b) in boundaries.iter().enumerate() {
            let x = solve_with(&zsnf, b).ok_or(SubquotientError::BoundaryNotInCycles { index })?;
            coords.push(x);
        }
        let x = TauMatrix::from_columns(r, &coords);
        let xsnf = smith_normal_form(&x);
        // boundaries·q = (zb·p⁻¹)·d, so zb·p⁻¹ is the adapted basis
        let new_basis = &zb * &xsnf.u_inv;

        let mut factors = Vec::with_capacity(r);
        let mut kept = Vec::new();
        let mut summands = Vec::new();
        for i in 0..r {
            let module = if i < xsnf.rank {
                let f = xsnf.d[(i, i)].clone();
                let m = match f.as_tau_power() {
                    Some(0) => None,
                    Some(k) => Some(TorsionModule::Torsion(k)),
                    None => return Err(SubquotientError::NonTauTorsion { factor: f }),
                };
                factors.push(Some(f));
                m
            } else {
                factors.push(None);
                Some(TorsionModule::Free)
            };
            if let Some(module) = module {
                kept.push(i);
                summands.push(Summand {
                    module,
                    representative: new_basis.column(i),
                });
            }
        }
        Ok(Self {
            zsnf,
            p: xsnf.u,
            factors,
            kept,
            summands,
        })
    }

    /// Coordinates of a cycle against `summands`, each reduced modulo its
    /// torsion order. `None` when `v` is not in span(cycles).
    pub fn coordinates(&self, v: &[TauScalar]) -> Option<Vec<TauScalar>> {
        let y = solve_with(&self.zsnf, v)?;
        let z = self.p.mul_vec(&y);
        Some(
            self.kept
                .iter()
                .map(|&i| match &self.factors[i] {
                    None => z[i].clone(),
                    Some(f) => z[i].div_rem(f).1,
                })
                .collect(),
        )
    }
}

/// Decomposes span(cycles)/span(boundaries) into cyclic summands, each with a
/// representative cycle in ambient coordinates.
pub fn subquotient_decomposition(
    ambient_dim: usize,
    cycles: &[Vec<TauScalar>],
    boundaries: &[Vec<TauScalar>],
) -> Result<Vec<Summand>, SubquotientError> {
    Ok(SubquotientBasis::new(ambient_dim, cycles, boundaries)?.summands)
}

/// Rank of the span of the given columns.
pub fn column_rank(rows: usize, cols: &[Vec<TauScalar>]) -> usize {
    smith_normal_form(&TauMatrix::from_columns(rows, cols)).rank
}
