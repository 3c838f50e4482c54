//! Dense exact linear algebra over Q(i).
//!
//! Systems in this crate are small (at most a few hundred unknowns), so plain
//! Gauss-Jordan elimination with row-operation tracking is enough, and the
//! tracked operations give left-null certificates for inconsistent systems.

use num_traits::{One, Zero};

use crate::coeff::Coeff;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Coeff>>,
}

/// Outcome of `Matrix::solve`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Solve {
    /// A particular solution (free variables set to zero).
    Solved(Vec<Coeff>),
    /// A row vector `y` with `y·A = 0` and `y·b ≠ 0`.
    Inconsistent { certificate: Vec<Coeff> },
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![vec![Coeff::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for k in 0..n {
            m.data[k][k] = Coeff::one();
        }
        m
    }

    pub fn from_rows(data: Vec<Vec<Coeff>>) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, Vec::len);
        assert!(data.iter().all(|r| r.len() == cols), "ragged matrix");
        Matrix { rows, cols, data }
    }

    /// Builds a matrix whose `k`-th column is `columns[k]`.
    pub fn from_columns(rows: usize, columns: &[Vec<Coeff>]) -> Self {
        let mut m = Matrix::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (r, v) in col.iter().enumerate() {
                m.data[r][c] = v.clone();
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

    pub fn get(&self, r: usize, c: usize) -> &Coeff {
        &self.data[r][c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Coeff) {
        self.data[r][c] = v;
    }

    pub fn row(&self, r: usize) -> &[Coeff] {
        &self.data[r]
    }

    pub fn mul_vec(&self, x: &[Coeff]) -> Vec<Coeff> {
        assert_eq!(x.len(), self.cols);
        self.data
            .iter()
            .map(|row| dot(row, x))
            .collect()
    }

    /// `y·A` for a row vector `y`.
    pub fn left_mul_vec(&self, y: &[Coeff]) -> Vec<Coeff> {
        assert_eq!(y.len(), self.rows);
        let mut out = vec![Coeff::zero(); self.cols];
        for (r, yr) in y.iter().enumerate() {
            if yr.is_zero() {
                continue;
            }
            for (c, v) in self.data[r].iter().enumerate() {
                if !v.is_zero() {
                    out[c] += &(yr * v);
                }
            }
        }
        out
    }

    /// Reduced row echelon form together with the pivot columns and the
    /// accumulated row transform `T` such that `T·A = R`.
    pub fn rref_tracked(&self) -> (Matrix, Vec<usize>, Matrix) {
        let mut a = self.data.clone();
        let mut t = Matrix::identity(self.rows).data;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&k| !a[k][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            t.swap(r, p);
            let inv = a[r][c].inv().expect("nonzero pivot");
            scale_row(&mut a[r], &inv);
            scale_row(&mut t[r], &inv);
            for k in 0..self.rows {
                if k == r || a[k][c].is_zero() {
                    continue;
                }
                let f = a[k][c].clone();
                let (src_a, dst_a) = pick(&mut a, r, k);
                axpy(dst_a, &f, src_a);
                let (src_t, dst_t) = pick(&mut t, r, k);
                axpy(dst_t, &f, src_t);
            }
            pivots.push(c);
            r += 1;
        }
        (
            Matrix {
                rows: self.rows,
                cols: self.cols,
                data: a,
            },
            pivots,
            Matrix {
                rows: self.rows,
                cols: self.rows,
                data: t,
            },
        )
    }

    pub fn rank(&self) -> usize {
        self.rref_tracked().1.len()
    }

    /// Solves `A x = b`, or returns a left-null certificate of inconsistency.
    pub fn solve(&self, b: &[Coeff]) -> Solve {
        assert_eq!(b.len(), self.rows);
        let (r, pivots, t) = self.rref_tracked();
        let tb = t.mul_vec(b);
        for k in pivots.len()..self.rows {
            if !tb[k].is_zero() {
                return Solve::Inconsistent {
                    certificate: t.data[k].clone(),
                };
            }
        }
        let mut x = vec![Coeff::zero(); self.cols];
        for (k, &c) in pivots.iter().enumerate() {
            x[c] = tb[k].clone();
        }
        debug_assert!(r.rows == self.rows);
        Solve::Solved(x)
    }

    /// Basis of the right kernel.
    pub fn nullspace(&self) -> Vec<Vec<Coeff>> {
        let (r, pivots, _) = self.rref_tracked();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Coeff::zero(); self.cols];
            v[free] = Coeff::one();
            for (k, &c) in pivots.iter().enumerate() {
                v[c] = -&r.data[k][free];
            }
            basis.push(v);
        }
        basis
    }

    /// Basis of the left kernel `{y : y·A = 0}`.
    pub fn left_nullspace(&self) -> Vec<Vec<Coeff>> {
        let (_, pivots, t) = self.rref_tracked();
        t.data[pivots.len()..].to_vec()
    }

    pub fn det(&self) -> Coeff {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut a = self.data.clone();
        let n = self.rows;
        let mut det = Coeff::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&k| !a[k][c].is_zero()) else {
                return Coeff::zero();
            };
            if p != c {
                a.swap(c, p);
                det = -det;
            }
            det = &det * &a[c][c];
            let inv = a[c][c].inv().expect("nonzero pivot");
            for k in c + 1..n {
                if a[k][c].is_zero() {
                    continue;
                }
                let f = &a[k][c] * &inv;
                let (src, dst) = pick(&mut a, c, k);
                axpy(dst, &f, src);
            }
        }
        det
    }
}

pub fn dot(a: &[Coeff], b: &[Coeff]) -> Coeff {
    let mut acc = Coeff::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

fn scale_row(row: &mut [Coeff], f: &Coeff) {
    for v in row.iter_mut() {
        if !v.is_zero() {
            *v = &*v * f;
        }
    }
}

/// `dst -= f·src`.
fn axpy(dst: &mut [Coeff], f: &Coeff, src: &[Coeff]) {
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d -= &(f * s);
        }
    }
}

fn pick(rows: &mut [Vec<Coeff>], src: usize, dst: usize) -> (&[Coeff], &mut [Coeff]) {
    if src < dst {
        let (lo, hi) = rows.split_at_mut(dst);
        (&lo[src], &mut hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(src);
        (&hi[0], &mut lo[dst])
    }
}
