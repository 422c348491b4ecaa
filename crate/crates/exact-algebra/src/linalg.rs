use crate::rational::Rational;
use num_traits::{One, Zero};

/// Dense matrix over the exact rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rational>,
}

/// Result of row reduction: the reduced row echelon form together with the
/// pivot column of each of the first `rank` rows.
#[derive(Clone, Debug)]
pub struct Rref {
    pub mat: QMat,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl QMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMat { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut m = QMat::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> QMat {
        QMat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        QMat::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Rational::zero();
            for k in 0..self.cols {
                if !self.get(i, k).is_zero() && !other.get(k, j).is_zero() {
                    acc += self.get(i, k) * other.get(k, j);
                }
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for k in 0..self.cols {
                    if !self.get(i, k).is_zero() && !v[k].is_zero() {
                        acc += self.get(i, k) * &v[k];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMat::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn sub(&self, other: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMat::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn scale(&self, c: &Rational) -> QMat {
        QMat::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * c)
    }

    pub fn hstack(&self, other: &QMat) -> QMat {
        assert_eq!(self.rows, other.rows);
        QMat::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols { self.get(i, j).clone() } else { other.get(i, j - self.cols).clone() }
        })
    }

    /// Reduced row echelon form by exact Gauss-Jordan elimination.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..m.cols {
            let Some(p) = (rank..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != rank {
                for j in 0..m.cols {
                    let a = m.get(rank, j).clone();
                    let b = m.get(p, j).clone();
                    m.set(rank, j, b);
                    m.set(p, j, a);
                }
            }
            let inv = m.get(rank, c).clone();
            for j in 0..m.cols {
                let v = m.get(rank, j) / &inv;
                m.set(rank, j, v);
            }
            for i in 0..m.rows {
                if i == rank || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in 0..m.cols {
                    let v = m.get(i, j) - &(m.get(rank, j) * &f);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        Rref { mat: m, rank, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of the right kernel {v : Mv = 0}, one vector per free column,
    /// in ascending free-column order with a 1 in the free position.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let r = self.rref();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &pc) in r.pivots.iter().enumerate() {
                v[pc] = Some(row);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (col, slot) in pivot_set.iter().enumerate() {
                if let Some(row) = slot {
                    v[col] = -r.mat.get(*row, free).clone();
                }
            }
            basis.push(v);
        }
        basis
    }

    /// One particular solution of Mx = b, or None when inconsistent.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(self.rows, b.len());
        let rhs = QMat::from_rows(b.iter().map(|x| vec![x.clone()]).collect());
        let aug = self.hstack(&rhs).rref();
        // Inconsistent iff some pivot lands in the appended column.
        if aug.pivots.iter().any(|&c| c == self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (row, &pc) in aug.pivots.iter().enumerate() {
            x[pc] = aug.mat.get(row, self.cols).clone();
        }
        Some(x)
    }

    pub fn det(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let mut m = self.clone();
        let mut det = Rational::one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                for j in 0..m.cols {
                    let a = m.get(c, j).clone();
                    let b = m.get(p, j).clone();
                    m.set(c, j, b);
                    m.set(p, j, a);
                }
                det = -det;
            }
            det *= m.get(c, c);
            let inv = m.get(c, c).clone();
            for i in (c + 1)..m.rows {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c) / &inv;
                for j in c..m.cols {
                    let v = m.get(i, j) - &(m.get(c, j) * &f);
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<QMat> {
        assert_eq!(self.rows, self.cols);
        let aug = self.hstack(&QMat::identity(self.rows)).rref();
        // Invertible iff every pivot lands in the left block, one per column.
        if aug.pivots.len() < self.rows || aug.pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return None;
        }
        Some(QMat::from_fn(self.rows, self.cols, |i, j| aug.mat.get(i, self.cols + j).clone()))
    }

    /// Row span membership: true when v is a linear combination of the rows.
    pub fn row_space_contains(&self, v: &[Rational]) -> bool {
        assert_eq!(self.cols, v.len());
        self.transpose().solve(v).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rint};

    fn m(rows: &[&[i64]]) -> QMat {
        QMat::from_rows(rows.iter().map(|r| r.iter().map(|&x| rint(x)).collect()).collect())
    }

    #[test]
    fn rref_rank_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 1, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel_basis();
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn solve_and_inverse() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let x = a.solve(&[rint(3), rint(2)]).unwrap();
        assert_eq!(x, vec![rint(1), rint(1)]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), QMat::identity(2));
        assert_eq!(a.det(), rint(1));
        let singular = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(singular.det(), rint(0));
        assert!(singular.inverse().is_none());
        assert!(singular.solve(&[rint(1), rint(0)]).is_none());
    }

    #[test]
    fn det_fractions() {
        let a = QMat::from_rows(vec![vec![rat(1, 2), rat(1, 3)], vec![rat(1, 4), rat(1, 5)]]);
        assert_eq!(a.det(), rat(1, 60));
    }
}
