//! Dense exact linear algebra over a [`Field`] descriptor.
//!
//! Everything here is plain Gaussian elimination with exact arithmetic; the
//! matrices involved are small (dimension bounded by the strand count), so
//! no attention is paid to asymptotics.

use crate::field::Field;

/// A dense rows×cols matrix with entries in `F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Mat<F> {
    pub fn zero(field: F, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Mat {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Mat::zero(field, n, n);
        for i in 0..n {
            let one = m.field.one();
            m.set(i, i, one);
        }
        m
    }

    pub fn from_fn(
        field: F,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> F::Elem,
    ) -> Self {
        let mut m = Mat::zero(field, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                let v = f(r, c);
                m.set(r, c, v);
            }
        }
        m
    }

    pub fn from_rows(field: F, rows: &[Vec<F::Elem>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(
            rows.iter().all(|r| r.len() == ncols),
            "ragged rows in matrix constructor"
        );
        Mat {
            field,
            rows: nrows,
            cols: ncols,
            data: rows.iter().flatten().cloned().collect(),
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    fn idx(&self, r: usize, c: usize) -> usize {
        debug_assert!(r < self.rows && c < self.cols);
        r * self.cols + c
    }

    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[self.idx(r, c)]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        let k = self.idx(r, c);
        self.data[k] = v;
    }

    pub fn col(&self, c: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| self.field.is_zero(v))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.field, rhs.field, "field mismatch in matrix product");
        assert_eq!(
            self.cols, rhs.rows,
            "shape mismatch in matrix product: {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let f = &self.field;
        let mut out = Mat::zero(self.field.clone(), self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if f.is_zero(a) {
                    continue;
                }
                for c in 0..rhs.cols {
                    let v = f.add(out.get(r, c), &f.mul(a, rhs.get(k, c)));
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(self.cols, v.len(), "shape mismatch in matrix-vector product");
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                let mut acc = f.zero();
                for c in 0..self.cols {
                    acc = f.add(&acc, &f.mul(self.get(r, c), &v[c]));
                }
                acc
            })
            .collect()
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.field, rhs.field, "field mismatch in matrix difference");
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let f = &self.field;
        let mut out = self.clone();
        for k in 0..out.data.len() {
            out.data[k] = f.sub(&out.data[k], &rhs.data[k]);
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduced row echelon form and the pivot column indices (deterministic:
    /// first nonzero entry scanning top to bottom is the pivot).
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let f = self.field.clone();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| !f.is_zero(m.get(r, col))) else {
                continue;
            };
            m.swap_rows(row, pr);
            let inv = f
                .inv(m.get(row, col))
                .expect("nonzero field element must be invertible");
            for c in col..m.cols {
                let v = f.mul(&inv, m.get(row, c));
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row || f.is_zero(m.get(r, col)) {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in col..m.cols {
                    let v = f.sub(m.get(r, c), &f.mul(&factor, m.get(row, c)));
                    m.set(r, c, v);
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

    /// Any exact solution X of `self · X = b` (free variables set to zero),
    /// or None when the system is inconsistent.
    pub fn solve_matrix(&self, b: &Self) -> Option<Self> {
        assert_eq!(self.field, b.field, "field mismatch in solve");
        assert_eq!(self.rows, b.rows, "shape mismatch in solve");
        let aug = Mat::from_fn(self.field.clone(), self.rows, self.cols + b.cols, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                b.get(r, c - self.cols).clone()
            }
        });
        let (red, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Mat::zero(self.field.clone(), self.cols, b.cols);
        for (t, &p) in pivots.iter().enumerate() {
            for c in 0..b.cols {
                x.set(p, c, red.get(t, self.cols + c).clone());
            }
        }
        debug_assert_eq!(self.mul(&x), *b);
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let x = self.solve_matrix(&Mat::identity(self.field.clone(), self.rows))?;
        if self.mul(&x) == Mat::identity(self.field.clone(), self.rows) {
            Some(x)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use num_rational::BigRational;
    use num_traits::FromPrimitive;
    use proptest::prelude::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_i64(v).unwrap()
    }

    #[test]
    fn rref_rationals() {
        let a = Mat::from_rows(
            Rationals,
            &[
                vec![q(1), q(2), q(3)],
                vec![q(2), q(4), q(6)],
                vec![q(1), q(0), q(1)],
            ],
        );
        let (r, pivots) = a.rref();
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(a.rank(), 2);
        // Row echelon shape: identity on pivot columns.
        assert_eq!(r.get(0, 0), &q(1));
        assert_eq!(r.get(1, 1), &q(1));
        assert_eq!(r.get(0, 1), &q(0));
        for c in 0..3 {
            assert_eq!(r.get(2, c), &q(0));
        }
    }

    #[test]
    fn inverse_and_solve_fp() {
        let f = PrimeField::new(7).unwrap();
        let a = Mat::from_rows(f.clone(), &[vec![2, 3], vec![1, 4]]);
        let inv = a.inverse().expect("invertible");
        assert_eq!(a.mul(&inv), Mat::identity(f.clone(), 2));
        assert_eq!(inv.mul(&a), Mat::identity(f.clone(), 2));

        let singular = Mat::from_rows(f.clone(), &[vec![1, 2], vec![2, 4]]);
        assert!(singular.inverse().is_none());
        // Consistent underdetermined system: solution exists with free var 0.
        let b = Mat::from_rows(f.clone(), &[vec![3], vec![6]]);
        let x = singular.solve_matrix(&b).expect("consistent");
        assert_eq!(singular.mul(&x), b);
        // Inconsistent system.
        let b_bad = Mat::from_rows(f, &[vec![3], vec![5]]);
        assert!(singular.solve_matrix(&b_bad).is_none());
    }

    fn arb_mat(n: usize) -> impl Strategy<Value = Mat<PrimeField>> {
        proptest::collection::vec(0u64..11, n * n).prop_map(move |vals| {
            let f = PrimeField::new(11).unwrap();
            let mut m = Mat::zero(f, n, n);
            for r in 0..n {
                for c in 0..n {
                    m.set(r, c, vals[r * n + c]);
                }
            }
            m
        })
    }

    proptest! {
        #[test]
        fn inverse_round_trip(a in arb_mat(4)) {
            let f = a.field().clone();
            match a.inverse() {
                Some(inv) => {
                    prop_assert_eq!(a.mul(&inv), Mat::identity(f.clone(), 4));
                    prop_assert_eq!(inv.mul(&a), Mat::identity(f, 4));
                    prop_assert_eq!(a.rank(), 4);
                }
                None => prop_assert!(a.rank() < 4),
            }
        }

        #[test]
        fn solve_recovers_consistent_rhs(a in arb_mat(4), x0 in arb_mat(4)) {
            let b = a.mul(&x0);
            let x = a.solve_matrix(&b).expect("consistent by construction");
            prop_assert_eq!(a.mul(&x), b);
        }

        #[test]
        fn rref_is_projection(a in arb_mat(4)) {
            let (r, pivots) = a.rref();
            let (r2, pivots2) = r.rref();
            prop_assert_eq!(&r, &r2);
            prop_assert_eq!(pivots, pivots2);
        }
    }
}
