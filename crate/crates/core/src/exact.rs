//! Exact rational linear algebra for integer-valued inputs.
//!
//! When every entry of a form or field is an integer, kernels, complements,
//! inertia and solvability are decided here by rational Gaussian elimination
//! with no tolerance at all.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// Largest magnitude accepted as an exactly representable integer.
const MAX_EXACT_INT: f64 = 9_007_199_254_740_992.0;

pub fn rational_from_int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `Some` when `x` is an integer that `f64` represents exactly.
pub fn integral(x: f64) -> Option<Rational> {
    if x.is_finite() && x.fract() == 0.0 && x.abs() <= MAX_EXACT_INT {
        Some(rational_from_int(x as i64))
    } else {
        None
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Exact copy of an integer-valued float matrix.
    pub fn from_integral(m: &DMatrix<f64>) -> Option<Self> {
        let mut data = Vec::with_capacity(m.len());
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                data.push(integral(m[(r, c)])?);
            }
        }
        Some(Self {
            rows: m.nrows(),
            cols: m.ncols(),
            data,
        })
    }

    pub fn column_from_integral(v: &DVector<f64>) -> Option<Self> {
        let data = v.iter().map(|&x| integral(x)).collect::<Option<Vec<_>>>()?;
        Some(Self {
            rows: v.len(),
            cols: 1,
            data,
        })
    }

    pub fn from_columns(rows: usize, cols: &[Vec<Rational>]) -> Self {
        Self::from_fn(rows, cols.len(), |r, c| cols[c][r].clone())
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |r, c| to_f64(&self[(r, c)]))
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "rational matrix product shape");
        Self::from_fn(self.rows, other.cols, |r, c| {
            let mut acc = Rational::zero();
            for k in 0..self.cols {
                if !self[(r, k)].is_zero() && !other[(k, c)].is_zero() {
                    acc += &self[(r, k)] * &other[(k, c)];
                }
            }
            acc
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| &self[(r, c)] + &other[(r, c)])
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| &self[(r, c)] - &other[(r, c)])
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| &self[(r, c)] * s)
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                other[(r, c - self.cols)].clone()
            }
        })
    }

    pub fn max_abs(&self) -> Rational {
        self.data
            .iter()
            .map(|x| x.abs())
            .fold(Rational::zero(), |a, b| if b > a { b } else { a })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m[(row, col)].recip();
            for c in col..m.cols {
                let val = &m[(row, c)] * &inv;
                m[(row, c)] = val;
            }
            for r in 0..m.rows {
                if r != row && !m[(r, col)].is_zero() {
                    let f = m[(r, col)].clone();
                    for c in col..m.cols {
                        let delta = &f * &m[(row, c)];
                        m[(r, c)] -= delta;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the kernel, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Rational::zero(); self.cols];
                x[f] = Rational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    x[p] = -r[(i, f)].clone();
                }
                x
            })
            .collect()
    }

    /// True when `self x = b` has a solution.
    pub fn solvable(&self, b: &[Rational]) -> bool {
        let col = Self::from_columns(self.rows, &[b.to_vec()]);
        self.rank() == self.hstack(&col).rank()
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let (r, pivots) = self.hstack(&Self::identity(n)).rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Sylvester inertia `(p, q, r)` of a symmetric matrix by exact
    /// congruence diagonalisation.
    pub fn inertia(&self) -> (usize, usize, usize) {
        assert_eq!(self.rows, self.cols, "inertia of a non-square matrix");
        let mut m = self.clone();
        let n = self.rows;
        let (mut pos, mut neg) = (0, 0);
        let mut active: Vec<usize> = (0..n).collect();
        while !active.is_empty() {
            let diag = active.iter().copied().find(|&i| !m[(i, i)].is_zero());
            let pivot = match diag {
                Some(i) => i,
                None => {
                    // All remaining diagonal entries vanish; if an off-diagonal
                    // entry survives, fold column j into i to create a pivot.
                    let pair = active.iter().find_map(|&i| {
                        active
                            .iter()
                            .copied()
                            .find(|&j| j != i && !m[(i, j)].is_zero())
                            .map(|j| (i, j))
                    });
                    let Some((i, j)) = pair else { break };
                    for k in 0..n {
                        let v = m[(j, k)].clone();
                        m[(i, k)] += v;
                    }
                    for k in 0..n {
                        let v = m[(k, j)].clone();
                        m[(k, i)] += v;
                    }
                    i
                }
            };
            let d = m[(pivot, pivot)].clone();
            if d.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            active.retain(|&k| k != pivot);
            for &r in &active {
                if m[(r, pivot)].is_zero() {
                    continue;
                }
                let f = &m[(r, pivot)] / &d;
                for &c in &active {
                    let delta = &f * &m[(pivot, c)];
                    m[(r, c)] -= delta;
                }
                m[(r, pivot)] = Rational::zero();
                m[(pivot, r)] = Rational::zero();
            }
        }
        (pos, neg, n - pos - neg)
    }
}

impl std::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;
    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }
}

/// Float copies of rational basis vectors, as matrix columns.
pub fn basis_to_f64(n: usize, basis: &[Vec<Rational>]) -> DMatrix<f64> {
    DMatrix::from_fn(n, basis.len(), |r, c| to_f64(&basis[c][r]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, v: &[i64]) -> RationalMatrix {
        RationalMatrix::from_fn(rows, cols, |r, c| rational_from_int(v[r * cols + c]))
    }

    #[test]
    fn kernel_of_ones() {
        let k = m(2, 2, &[1, 1, 1, 1]).kernel();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![rational_from_int(-1), rational_from_int(1)]);
    }

    #[test]
    fn inertia_of_hyperbolic_plane() {
        assert_eq!(m(2, 2, &[0, 1, 1, 0]).inertia(), (1, 1, 0));
        assert_eq!(m(3, 3, &[-1, 0, 0, 0, 0, 0, 0, 0, 1]).inertia(), (1, 1, 1));
        assert_eq!(m(2, 2, &[0, 0, 0, 0]).inertia(), (0, 0, 2));
    }

    #[test]
    fn inertia_with_zero_diagonal_block() {
        // Split hyperbolic form in four variables: signature (2, 2).
        let g = m(4, 4, &[0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0]);
        assert_eq!(g.inertia(), (2, 2, 0));
    }

    #[test]
    fn inverse_and_solvability() {
        let a = m(2, 2, &[0, 1, 1, 0]);
        assert_eq!(a.inverse().unwrap(), a);
        assert!(m(2, 2, &[1, 1, 1, 1]).inverse().is_none());
        let s = m(2, 2, &[1, 1, 1, 1]);
        assert!(s.solvable(&[rational_from_int(2), rational_from_int(2)]));
        assert!(!s.solvable(&[rational_from_int(1), rational_from_int(2)]));
    }
}
