//! Structure-constant algebras with a distinguished basis.
//!
//! Every algebra in this crate is monomial: the product of two basis
//! elements is a scalar multiple of a basis element or zero. Category
//! algebras, twisted category algebras, group algebras and quotient group
//! algebras all have this shape, and it keeps the structure-constant table
//! quadratic in the dimension.

use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::ffalg::field::Field;
use crate::ffalg::matrix::Mat;
use crate::ffalg::poly;

/// A finite-dimensional associative algebra with unit, presented by a basis
/// and monomial structure constants.
#[derive(Debug, Clone)]
pub struct SCAlgebra {
    pub field: Field,
    pub dim: usize,
    pub labels: Vec<String>,
    /// Flattened dim x dim table: entry (i, j) is b_i * b_j.
    prod: Vec<Option<(u64, u32)>>,
    /// Coefficient vector of the unit element.
    pub unit: Vec<u64>,
}

/// A central idempotent of an `SCAlgebra`, with its primitivity flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockIdem {
    pub coeffs: Vec<u64>,
    pub primitive: bool,
}

impl SCAlgebra {
    /// Build and validate: checks the unit law and associativity on all
    /// basis triples.
    pub fn new(
        field: Field,
        labels: Vec<String>,
        prod: Vec<Option<(u64, u32)>>,
        unit: Vec<u64>,
    ) -> Result<Self> {
        let dim = labels.len();
        assert_eq!(prod.len(), dim * dim);
        assert_eq!(unit.len(), dim);
        let alg = SCAlgebra {
            field,
            dim,
            labels,
            prod,
            unit,
        };
        alg.check_associativity()?;
        alg.check_unit()?;
        Ok(alg)
    }

    fn check_associativity(&self) -> Result<()> {
        let f = &self.field;
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    // (b_i b_j) b_k vs b_i (b_j b_k), both monomial.
                    let left = match self.basis_prod(i, j) {
                        None => None,
                        Some((c, l)) => self.basis_prod(l, k).map(|(d, m)| (f.mul(c, d), m)),
                    };
                    let right = match self.basis_prod(j, k) {
                        None => None,
                        Some((c, l)) => self.basis_prod(i, l).map(|(d, m)| (f.mul(c, d), m)),
                    };
                    let norm = |x: Option<(u64, usize)>| x.filter(|&(c, _)| c != 0);
                    if norm(left) != norm(right) {
                        return Err(Error::AssociativityBroken(format!(
                            "({} {}) {} != {} ({} {})",
                            self.labels[i],
                            self.labels[j],
                            self.labels[k],
                            self.labels[i],
                            self.labels[j],
                            self.labels[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_unit(&self) -> Result<()> {
        for i in 0..self.dim {
            let mut e = vec![0; self.dim];
            e[i] = 1;
            if self.mul_vec(&self.unit, &e) != e || self.mul_vec(&e, &self.unit) != e {
                return Err(Error::AssociativityBroken(format!(
                    "unit law fails at basis element {}",
                    self.labels[i]
                )));
            }
        }
        Ok(())
    }

    pub fn basis_prod(&self, i: usize, j: usize) -> Option<(u64, usize)> {
        self.prod[i * self.dim + j].map(|(c, k)| (c, k as usize))
    }

    pub fn basis_vec(&self, i: usize) -> Vec<u64> {
        let mut v = vec![0; self.dim];
        v[i] = 1;
        v
    }

    pub fn mul_vec(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let f = &self.field;
        let mut out = vec![0; self.dim];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj == 0 {
                    continue;
                }
                if let Some((c, k)) = self.basis_prod(i, j) {
                    out[k] = f.add(out[k], f.mul(ai, f.mul(c, bj)));
                }
            }
        }
        out
    }

    /// Matrix of left multiplication by the vector `a` on the algebra itself.
    pub fn left_mul_matrix(&self, a: &[u64]) -> Mat {
        let f = &self.field;
        let mut m = Mat::zero(self.dim, self.dim);
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for j in 0..self.dim {
                if let Some((c, k)) = self.basis_prod(i, j) {
                    m[(k, j)] = f.add(m[(k, j)], f.mul(ai, c));
                }
            }
        }
        m
    }

    pub fn is_central(&self, v: &[u64]) -> bool {
        (0..self.dim).all(|i| {
            let b = self.basis_vec(i);
            self.mul_vec(v, &b) == self.mul_vec(&b, v)
        })
    }

    pub fn is_idempotent(&self, v: &[u64]) -> bool {
        self.mul_vec(v, v) == *v
    }

    /// Basis of the centre, solved from the commutation system.
    pub fn center_basis(&self) -> Vec<Vec<u64>> {
        let f = &self.field;
        let n = self.dim;
        // Unknown z = sum z_i b_i; equations z b_j - b_j z = 0 for all j.
        let mut rows: Vec<Vec<u64>> = vec![];
        for j in 0..n {
            for k in 0..n {
                // Coefficient of b_k in z*b_j - b_j*z as a linear form in z.
                let mut row = vec![0; n];
                let mut nonzero = false;
                for i in 0..n {
                    let mut c = 0;
                    if let Some((a, l)) = self.basis_prod(i, j) {
                        if l == k {
                            c = f.add(c, a);
                        }
                    }
                    if let Some((a, l)) = self.basis_prod(j, i) {
                        if l == k {
                            c = f.sub(c, a);
                        }
                    }
                    if c != 0 {
                        row[i] = c;
                        nonzero = true;
                    }
                }
                if nonzero {
                    rows.push(row);
                }
            }
        }
        if rows.is_empty() {
            return (0..n).map(|i| self.basis_vec(i)).collect();
        }
        let m = Mat::from_rows(rows);
        let ns = m.nullspace(f);
        (0..ns.cols).map(|c| ns.col(c)).collect()
    }

    /// The complete set of primitive central idempotents (blocks).
    ///
    /// The splitting happens inside the Frobenius-fixed subalgebra
    /// B = {z in Z(A) : z^q = z}, which is split semisimple (isomorphic to
    /// F_q^r with r the number of blocks) and contains every block
    /// idempotent. Inside B, minimal polynomials of elements are squarefree
    /// products of linear factors, so repeatedly splitting along coprime
    /// factors of basis-element minimal polynomials is guaranteed to reach
    /// the full decomposition.
    pub fn primitive_central_idempotents(&self, rng: &mut impl RngCore) -> Vec<BlockIdem> {
        let f = self.field.clone();
        let zbasis = self.center_basis();
        let zdim = zbasis.len();
        // Coordinates of z_j^q in the centre basis; z -> z^q is F_q-linear.
        let zmat = {
            let mut m = Mat::zero(self.dim, zdim);
            for (j, z) in zbasis.iter().enumerate() {
                for (i, &x) in z.iter().enumerate() {
                    m[(i, j)] = x;
                }
            }
            m
        };
        let mut images = Mat::zero(self.dim, zdim);
        for (j, z) in zbasis.iter().enumerate() {
            let w = self.pow_vec(z, f.q());
            for (i, &x) in w.iter().enumerate() {
                images[(i, j)] = x;
            }
        }
        let coords = zmat
            .solve(&images, &f)
            .expect("centre is closed under the q-power map");
        let fixed = coords.sub(&Mat::identity(zdim), &f).nullspace(&f);
        let bbasis: Vec<Vec<u64>> = (0..fixed.cols)
            .map(|c| {
                let mut v = vec![0; self.dim];
                for (j, z) in zbasis.iter().enumerate() {
                    let coeff = fixed[(j, c)];
                    if coeff != 0 {
                        for (a, &x) in v.iter_mut().zip(z.iter()) {
                            *a = f.add(*a, f.mul(coeff, x));
                        }
                    }
                }
                v
            })
            .collect();

        let mut current: Vec<Vec<u64>> = vec![self.unit.clone()];
        loop {
            let mut next: Vec<Vec<u64>> = vec![];
            let mut split_any = false;
            'outer: for idem in &current {
                // Basis of the ideal B*idem.
                let mut span = crate::ffalg::matrix::Subspace::new(self.dim);
                let mut ideal: Vec<Vec<u64>> = vec![];
                for b in &bbasis {
                    let v = self.mul_vec(b, idem);
                    if span.insert(&v, &f) {
                        ideal.push(v);
                    }
                }
                let k = ideal.len();
                let basis_mat = {
                    let mut m = Mat::zero(self.dim, k);
                    for (j, v) in ideal.iter().enumerate() {
                        for (i, &x) in v.iter().enumerate() {
                            m[(i, j)] = x;
                        }
                    }
                    m
                };
                for z in &ideal {
                    // Matrix of multiplication by z on B*idem.
                    let mut imgs = Mat::zero(self.dim, k);
                    for (j, v) in ideal.iter().enumerate() {
                        let w = self.mul_vec(z, v);
                        for (i, &x) in w.iter().enumerate() {
                            imgs[(i, j)] = x;
                        }
                    }
                    let action = basis_mat
                        .solve(&imgs, &f)
                        .expect("ideal closed under central multiplication");
                    let mp = action.min_poly(&f);
                    let factors = poly::factor(&f, &mp, rng);
                    if factors.len() >= 2 {
                        for (g, e) in &factors {
                            let mut ge = poly::constant(1);
                            for _ in 0..*e {
                                ge = poly::mul(&f, &ge, g);
                            }
                            let h = poly::divrem(&f, &mp, &ge).0;
                            let (d, _u, w) = poly::egcd(&f, &ge, &h);
                            assert_eq!(d, poly::constant(1), "primary components are coprime");
                            // Component idempotent: (w*h)(z) * idem.
                            let wh = poly::mul(&f, &w, &h);
                            let comp = self.eval_poly_at(&wh, z, idem);
                            if comp.iter().any(|&x| x != 0) {
                                next.push(comp);
                            }
                        }
                        split_any = true;
                        continue 'outer;
                    }
                }
                next.push(idem.clone());
            }
            current = next;
            if !split_any {
                break;
            }
        }
        // Validate the decomposition.
        let mut total = vec![0; self.dim];
        for e in &current {
            assert!(self.is_central(e), "block candidate not central");
            assert!(self.is_idempotent(e), "block candidate not idempotent");
            for (t, &x) in total.iter_mut().zip(e.iter()) {
                *t = f.add(*t, x);
            }
        }
        assert_eq!(total, self.unit, "blocks do not sum to the unit");
        for (i, a) in current.iter().enumerate() {
            for b in current.iter().skip(i + 1) {
                assert!(
                    self.mul_vec(a, b).iter().all(|&x| x == 0),
                    "blocks not orthogonal"
                );
            }
        }
        current.sort();
        current
            .into_iter()
            .map(|coeffs| BlockIdem {
                coeffs,
                primitive: true,
            })
            .collect()
    }

    /// Vector power a^e under the algebra multiplication.
    fn pow_vec(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut base = a.to_vec();
        let mut acc = self.unit.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_vec(&acc, &base);
            }
            base = self.mul_vec(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Evaluate a polynomial at the central element `z` inside the corner
    /// algebra with unit `idem` (constant term contributes c * idem).
    fn eval_poly_at(&self, p: &poly::Poly, z: &[u64], idem: &[u64]) -> Vec<u64> {
        let f = &self.field;
        let mut acc = vec![0; self.dim];
        for &c in p.iter().rev() {
            acc = self.mul_vec(&acc, z);
            if c != 0 {
                for (a, &e) in acc.iter_mut().zip(idem.iter()) {
                    *a = f.add(*a, f.mul(c, e));
                }
            }
        }
        acc
    }

    /// True when every structure constant and unit coefficient lies in F_p.
    pub fn constants_rational(&self) -> bool {
        self.prod
            .iter()
            .flatten()
            .all(|&(c, _)| self.field.is_rational(c))
            && self.unit.iter().all(|&c| self.field.is_rational(c))
    }

    /// Entry-wise Frobenius on a coefficient vector.
    pub fn frobenius_vec(&self, v: &[u64], j: u32) -> Vec<u64> {
        let sigma = crate::ffalg::field::GaloisElement { j };
        v.iter().map(|&c| self.field.frobenius(c, sigma)).collect()
    }

    /// The same algebra with scalars extended to `new_field` (which must have
    /// the same characteristic; constants must be F_p-rational).
    pub fn extend_field(&self, new_field: Field) -> Result<SCAlgebra> {
        if new_field.p() != self.field.p() || !self.constants_rational() {
            return Err(Error::StructureConstantsNotRational);
        }
        Ok(SCAlgebra {
            field: new_field,
            dim: self.dim,
            labels: self.labels.clone(),
            prod: self.prod.clone(),
            unit: self.unit.clone(),
        })
    }

    /// A small multiplicative-and-linear generating subset of the basis:
    /// intertwining all of these forces intertwining the whole algebra.
    pub fn generator_indices(&self) -> Vec<usize> {
        let f = &self.field;
        let mut gens = vec![];
        let mut span = crate::ffalg::matrix::Subspace::new(self.dim);
        let mut members: Vec<Vec<u64>> = vec![];
        let push = |span: &mut crate::ffalg::matrix::Subspace,
                        members: &mut Vec<Vec<u64>>,
                        v: Vec<u64>| {
            if span.insert(&v, f) {
                members.push(v);
                true
            } else {
                false
            }
        };
        push(&mut span, &mut members, self.unit.clone());
        for i in 0..self.dim {
            if span.contains(&self.basis_vec(i), f) {
                continue;
            }
            gens.push(i);
            push(&mut span, &mut members, self.basis_vec(i));
            // Close the span under products until stable.
            loop {
                let snapshot = members.clone();
                let mut grew = false;
                for a in &snapshot {
                    for b in &snapshot {
                        let prod = self.mul_vec(a, b);
                        if push(&mut span, &mut members, prod) {
                            grew = true;
                        }
                    }
                }
                if !grew {
                    break;
                }
            }
        }
        gens
    }

    pub fn fmt_vec(&self, v: &[u64]) -> String {
        let terms: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| format!("{}*{}", c, self.labels[i]))
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}
