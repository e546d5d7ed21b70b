//! Dense matrices over F_{p^m} with Gaussian elimination.
//!
//! Row-major storage; vectors are column vectors and matrices act on the
//! left. Dimensions at the intended scale stay in the hundreds, so plain
//! cubic elimination is used throughout.

use crate::ffalg::field::Field;
use crate::ffalg::poly::{self, Poly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<u64>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<u64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            data.extend(row);
        }
        Mat { rows: r, cols: c, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u64) -> Self {
        let mut m = Mat::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn add(&self, other: &Mat, field: &Field) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(&other.data) {
            *a = field.add(*a, b);
        }
        out
    }

    pub fn sub(&self, other: &Mat, field: &Field) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(&other.data) {
            *a = field.sub(*a, b);
        }
        out
    }

    pub fn scale(&self, c: u64, field: &Field) -> Mat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = field.mul(*a, c);
        }
        out
    }

    pub fn mul(&self, other: &Mat, field: &Field) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other[(k, j)];
                    if b != 0 {
                        out[(i, j)] = field.add(out[(i, j)], field.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn mat_vec(&self, v: &[u64], field: &Field) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![0; self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = 0;
            for (k, &vk) in v.iter().enumerate() {
                if vk != 0 {
                    acc = field.add(acc, field.mul(self[(i, k)], vk));
                }
            }
            *o = acc;
        }
        out
    }

    /// Entry-wise Frobenius x -> x^{p^j}.
    pub fn frobenius(&self, field: &Field, j: u32) -> Mat {
        let sigma = crate::ffalg::field::GaloisElement { j };
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = field.frobenius(*a, sigma);
        }
        out
    }

    /// In-place reduction to reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self, field: &Field) -> Vec<usize> {
        let mut pivots = vec![];
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self[(i, c)] != 0) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = field.inv(self[(r, c)]);
            for j in c..self.cols {
                self[(r, j)] = field.mul(self[(r, j)], inv);
            }
            for i in 0..self.rows {
                if i != r && self[(i, c)] != 0 {
                    let f = self[(i, c)];
                    for j in c..self.cols {
                        let t = field.mul(f, self[(r, j)]);
                        self[(i, j)] = field.sub(self[(i, j)], t);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, field: &Field) -> usize {
        let mut m = self.clone();
        m.rref(field).len()
    }

    /// Basis of the right nullspace {v : Mv = 0}, returned as the columns of
    /// the result.
    pub fn nullspace(&self, field: &Field) -> Mat {
        let mut m = self.clone();
        let pivots = m.rref(field);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Mat::zero(self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out[(fc, k)] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                out[(pc, k)] = field.neg(m[(r, fc)]);
            }
        }
        out
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self, field: &Field) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, n + i)] = 1;
        }
        let pivots = aug.rref(field);
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return None;
        }
        Some(Mat::from_fn(n, n, |i, j| aug[(i, n + j)]))
    }

    /// Solve M x = b for each column b of `rhs`; None if inconsistent.
    pub fn solve(&self, rhs: &Mat, field: &Field) -> Option<Mat> {
        assert_eq!(self.rows, rhs.rows);
        let n = self.cols;
        let mut aug = Mat::zero(self.rows, n + rhs.cols);
        for i in 0..self.rows {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)];
            }
            for j in 0..rhs.cols {
                aug[(i, n + j)] = rhs[(i, j)];
            }
        }
        let pivots = aug.rref(field);
        if pivots.iter().any(|&c| c >= n) {
            return None; // a pivot in the rhs block means inconsistency
        }
        let mut out = Mat::zero(n, rhs.cols);
        for (r, &c) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                out[(c, j)] = aug[(r, n + j)];
            }
        }
        Some(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Evaluate a polynomial at this (square) matrix by Horner's rule.
    pub fn eval_poly(&self, f: &Poly, field: &Field) -> Mat {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut acc = Mat::zero(n, n);
        for &c in f.iter().rev() {
            acc = acc.mul(self, field);
            if c != 0 {
                for i in 0..n {
                    acc[(i, i)] = field.add(acc[(i, i)], c);
                }
            }
        }
        acc
    }

    /// Minimal polynomial, as the lcm of the local minimal polynomials of the
    /// standard basis vectors.
    pub fn min_poly(&self, field: &Field) -> Poly {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut mp: Poly = vec![1];
        for start in 0..n {
            if poly::deg(&mp) == Some(n) {
                break;
            }
            let mut v = vec![0; n];
            v[start] = 1;
            let local = self.local_min_poly(&v, field);
            let g = poly::gcd(field, &mp, &local);
            mp = poly::divrem(field, &poly::mul(field, &mp, &local), &g).0;
        }
        mp
    }

    /// Minimal polynomial of the matrix relative to a single vector.
    fn local_min_poly(&self, v: &[u64], field: &Field) -> Poly {
        let n = self.rows;
        // Echelon rows of the Krylov space with tracked coefficients.
        let mut basis: Vec<(usize, Vec<u64>, Vec<u64>)> = vec![]; // (pivot, vector, combo)
        let mut w = v.to_vec();
        let mut k = 0;
        loop {
            let mut vec_red = w.clone();
            let mut combo = vec![0; k + 1];
            combo[k] = 1;
            for (pivot, bv, bc) in &basis {
                if vec_red[*pivot] != 0 {
                    let f = vec_red[*pivot];
                    for (a, &b) in vec_red.iter_mut().zip(bv.iter()) {
                        *a = field.sub(*a, field.mul(f, b));
                    }
                    // bc is zero beyond its insertion step, which is < k.
                    for (i, &c) in bc.iter().enumerate() {
                        if c != 0 {
                            combo[i] = field.sub(combo[i], field.mul(f, c));
                        }
                    }
                }
            }
            if let Some(pivot) = vec_red.iter().position(|&x| x != 0) {
                let inv = field.inv(vec_red[pivot]);
                for a in vec_red.iter_mut() {
                    *a = field.mul(*a, inv);
                }
                let mut combo_s: Vec<u64> = combo.iter().map(|&c| field.mul(c, inv)).collect();
                combo_s.resize(n + 1, 0);
                basis.push((pivot, vec_red, combo_s));
            } else {
                // Dependence found: the combo is the local minimal polynomial.
                let mut p = combo;
                poly::trim(&mut p);
                return poly::monic(field, &p);
            }
            w = self.mat_vec(&w, field);
            k += 1;
            assert!(k <= n, "Krylov iteration exceeded dimension");
        }
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = u64;
    fn index(&self, (i, j): (usize, usize)) -> &u64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut u64 {
        &mut self.data[i * self.cols + j]
    }
}

/// An echelonised subspace of F^n supporting incremental insertion;
/// used for spinning vectors under a set of matrices.
#[derive(Debug, Clone)]
pub struct Subspace {
    pub ambient: usize,
    rows: Vec<(usize, Vec<u64>)>,
}

impl Subspace {
    pub fn new(ambient: usize) -> Self {
        Subspace { ambient, rows: vec![] }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the basis; if independent, insert and return true.
    pub fn insert(&mut self, v: &[u64], field: &Field) -> bool {
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            if v[*pivot] != 0 {
                let f = v[*pivot];
                for (a, &b) in v.iter_mut().zip(row.iter()) {
                    *a = field.sub(*a, field.mul(f, b));
                }
            }
        }
        match v.iter().position(|&x| x != 0) {
            None => false,
            Some(pivot) => {
                let inv = field.inv(v[pivot]);
                for a in v.iter_mut() {
                    *a = field.mul(*a, inv);
                }
                self.rows.push((pivot, v));
                self.rows.sort_by_key(|(p, _)| *p);
                true
            }
        }
    }

    pub fn contains(&self, v: &[u64], field: &Field) -> bool {
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            if v[*pivot] != 0 {
                let f = v[*pivot];
                for (a, &b) in v.iter_mut().zip(row.iter()) {
                    *a = field.sub(*a, field.mul(f, b));
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }

    /// Basis vectors as the columns of a matrix.
    pub fn basis_mat(&self) -> Mat {
        let mut m = Mat::zero(self.ambient, self.rows.len());
        for (j, (_, row)) in self.rows.iter().enumerate() {
            for (i, &x) in row.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    }
}

/// Smallest subspace containing `seeds` and stable under all `mats`.
pub fn spin(seeds: &[Vec<u64>], mats: &[Mat], field: &Field) -> Subspace {
    let ambient = seeds.first().map_or(0, |v| v.len());
    let mut space = Subspace::new(ambient);
    let mut queue: Vec<Vec<u64>> = vec![];
    for s in seeds {
        if space.insert(s, field) {
            queue.push(s.clone());
        }
    }
    while let Some(v) = queue.pop() {
        for m in mats {
            let w = m.mat_vec(&v, field);
            if space.insert(&w, field) {
                queue.push(w);
            }
        }
    }
    space
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use rand_core::{RngCore, SeedableRng};

    #[test]
    fn rref_and_nullspace() {
        let f = Field::new(13, 1).unwrap();
        let m = Mat::from_rows(vec![vec![0, 2, 6, 4], vec![9, 4, 10, 1], vec![4, 8, 0, 12]]);
        assert_eq!(m.rank(&f), 3);
        let ns = m.nullspace(&f);
        assert_eq!(ns.cols, 1);
        let v = ns.col(0);
        assert!(m.mat_vec(&v, &f).iter().all(|&x| x == 0));
    }

    #[test]
    fn min_poly_of_nilpotent_jordan_block() {
        let f = Field::new(3, 1).unwrap();
        let m = Mat::from_rows(vec![vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]]);
        assert_eq!(m.min_poly(&f), vec![0, 0, 0, 1]); // x^3
    }

    proptest! {
        #[test]
        fn inverse_roundtrip(seed in 0u64..300) {
            let field = Field::new(5, 2).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = 1 + (rng.next_u64() % 6) as usize;
            let m = Mat::from_fn(n, n, |_, _| field.rand_elem(&mut rng));
            if let Some(inv) = m.inverse(&field) {
                prop_assert_eq!(m.mul(&inv, &field), Mat::identity(n));
                prop_assert_eq!(inv.mul(&m, &field), Mat::identity(n));
            } else {
                prop_assert!(m.rank(&field) < n);
            }
        }

        #[test]
        fn min_poly_annihilates(seed in 0u64..200) {
            let field = Field::new(2, 2).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = 1 + (rng.next_u64() % 5) as usize;
            let m = Mat::from_fn(n, n, |_, _| field.rand_elem(&mut rng));
            let mp = m.min_poly(&field);
            prop_assert!(m.eval_poly(&mp, &field).is_zero());
            prop_assert!(mp.len() <= n + 1);
        }
    }
}
