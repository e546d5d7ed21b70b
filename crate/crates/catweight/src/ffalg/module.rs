//! Modules over structure-constant algebras: MeatAxe splitting, composition
//! series, isomorphism testing, Frobenius twists and splitting fields.

use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::ffalg::algebra::SCAlgebra;
use crate::ffalg::field::{Field, GaloisElement};
use crate::ffalg::matrix::{spin, Mat};
use crate::ffalg::poly;

/// Number of random algebra elements tried before a split attempt gives up.
pub const DEFAULT_SPLIT_BUDGET: usize = 200;

/// Default cap on the splitting-field extension degree.
pub const DEFAULT_M_MAX: u32 = 24;

/// A module over an algebra-with-distinguished-basis: one matrix per basis
/// element, acting on column vectors.
#[derive(Debug, Clone)]
pub struct ModuleRep {
    pub dim: usize,
    pub mats: Vec<Mat>,
}

/// Result of one irreducibility test.
pub enum Split {
    /// Certified irreducible by Norton's criterion (or dimension one).
    Irreducible,
    /// A proper nonzero invariant subspace, as columns of the matrix.
    Submodule(Mat),
}

impl ModuleRep {
    /// The left regular module of an algebra.
    pub fn regular(alg: &SCAlgebra) -> ModuleRep {
        let mats = (0..alg.dim)
            .map(|i| alg.left_mul_matrix(&alg.basis_vec(i)))
            .collect();
        ModuleRep { dim: alg.dim, mats }
    }

    /// Check the structure-constant relations and the unit law.
    pub fn validate(&self, alg: &SCAlgebra) -> Result<()> {
        let f = &alg.field;
        let mut unit_action = Mat::zero(self.dim, self.dim);
        for (i, &c) in alg.unit.iter().enumerate() {
            if c != 0 {
                unit_action = unit_action.add(&self.mats[i].scale(c, f), f);
            }
        }
        if unit_action != Mat::identity(self.dim) {
            return Err(Error::BadInput("unit does not act as identity".into()));
        }
        for i in 0..alg.dim {
            for j in 0..alg.dim {
                let lhs = self.mats[i].mul(&self.mats[j], f);
                let rhs = match alg.basis_prod(i, j) {
                    Some((c, k)) => self.mats[k].scale(c, f),
                    None => Mat::zero(self.dim, self.dim),
                };
                if lhs != rhs {
                    return Err(Error::BadInput(format!(
                        "module relation fails at ({}, {})",
                        alg.labels[i], alg.labels[j]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Action of an algebra element given by its coefficient vector.
    pub fn act(&self, coeffs: &[u64], field: &Field) -> Mat {
        let mut out = Mat::zero(self.dim, self.dim);
        for (i, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                out = out.add(&self.mats[i].scale(c, field), field);
            }
        }
        out
    }

    /// Restriction to an invariant subspace with basis `basis` (columns).
    pub fn submodule(&self, basis: &Mat, field: &Field) -> ModuleRep {
        let mats = self
            .mats
            .iter()
            .map(|m| {
                basis
                    .solve(&m.mul(basis, field), field)
                    .expect("subspace is invariant")
            })
            .collect();
        ModuleRep {
            dim: basis.cols,
            mats,
        }
    }

    /// Quotient by an invariant subspace with basis `basis` (columns).
    pub fn quotient(&self, basis: &Mat, field: &Field) -> ModuleRep {
        let n = self.dim;
        let k = basis.cols;
        // Complete the basis to all of F^n.
        let mut full = Mat::zero(n, n);
        for i in 0..n {
            for j in 0..k {
                full[(i, j)] = basis[(i, j)];
            }
        }
        let mut have = k;
        let mut probe = basis.clone();
        for e in 0..n {
            if have == n {
                break;
            }
            let mut cand = Mat::zero(n, probe.cols + 1);
            for i in 0..n {
                for j in 0..probe.cols {
                    cand[(i, j)] = probe[(i, j)];
                }
            }
            cand[(e, probe.cols)] = 1;
            if cand.rank(field) > probe.cols {
                for i in 0..n {
                    full[(i, have)] = cand[(i, probe.cols)];
                }
                probe = cand;
                have += 1;
            }
        }
        let inv = full.inverse(field).expect("completed basis is invertible");
        let mats = self
            .mats
            .iter()
            .map(|m| {
                let t = inv.mul(&m.mul(&full, field), field);
                // Bottom-right block is the quotient action; bottom-left must vanish.
                let q = Mat::from_fn(n - k, n - k, |i, j| t[(k + i, k + j)]);
                debug_assert!(
                    (0..n - k).all(|i| (0..k).all(|j| t[(k + i, j)] == 0)),
                    "subspace was not invariant"
                );
                q
            })
            .collect();
        ModuleRep { dim: n - k, mats }
    }

    /// Norton/Parker irreducibility test. Returns either a certificate of
    /// irreducibility or an explicit proper invariant subspace.
    pub fn meataxe_split(
        &self,
        field: &Field,
        rng: &mut impl RngCore,
        budget: usize,
    ) -> Result<Split> {
        assert!(self.dim >= 1);
        if self.dim == 1 {
            return Ok(Split::Irreducible);
        }
        let n = self.dim;
        let transposed: Vec<Mat> = self.mats.iter().map(|m| m.transpose()).collect();
        for _ in 0..budget {
            // A random element of the algebra's image in End(M).
            let mut theta = Mat::zero(n, n);
            for m in &self.mats {
                let c = field.rand_elem(rng);
                if c != 0 {
                    theta = theta.add(&m.scale(c, field), field);
                }
            }
            let mp = theta.min_poly(field);
            let factors = poly::factor(field, &mp, rng);
            for (f, _) in &factors {
                let ftheta = theta.eval_poly(f, field);
                let null = ftheta.nullspace(field);
                let d = f.len() - 1;
                debug_assert!(null.cols >= d);
                // Any nullspace vector generating a proper submodule decides.
                let v = null.col(0);
                let w = spin(&[v], &self.mats, field);
                if w.dim() < n {
                    return Ok(Split::Submodule(w.basis_mat()));
                }
                if null.cols == d {
                    // Good element: Norton's criterion applies. Check the dual.
                    let nullt = ftheta.transpose().nullspace(field);
                    let u = nullt.col(0);
                    let wt = spin(&[u], &transposed, field);
                    if wt.dim() < n {
                        // The perp of a dual submodule is a submodule.
                        let rows: Vec<Vec<u64>> =
                            (0..wt.basis_mat().cols).map(|c| wt.basis_mat().col(c)).collect();
                        let perp = Mat::from_rows(rows).nullspace(field);
                        debug_assert!(perp.cols > 0 && perp.cols < n);
                        return Ok(Split::Submodule(perp));
                    }
                    return Ok(Split::Irreducible);
                }
                // Nullity exceeds the factor degree: try the other nullspace
                // vectors for a submodule, then move on to another factor.
                for c in 1..null.cols {
                    let v = null.col(c);
                    let w = spin(&[v], &self.mats, field);
                    if w.dim() < n {
                        return Ok(Split::Submodule(w.basis_mat()));
                    }
                }
            }
        }
        Err(Error::BudgetExceeded { attempts: budget })
    }

    /// Full composition series; returns the factors in splitting order.
    pub fn composition_factors_raw(
        &self,
        field: &Field,
        rng: &mut impl RngCore,
        budget: usize,
    ) -> Result<Vec<ModuleRep>> {
        let mut out = vec![];
        let mut stack = vec![self.clone()];
        while let Some(m) = stack.pop() {
            if m.dim == 0 {
                continue;
            }
            match m.meataxe_split(field, rng, budget)? {
                Split::Irreducible => out.push(m),
                Split::Submodule(basis) => {
                    stack.push(m.submodule(&basis, field));
                    stack.push(m.quotient(&basis, field));
                }
            }
        }
        Ok(out)
    }

    /// Entry-wise Frobenius twist by x -> x^{p^j}; errors unless the algebra
    /// has F_p-rational structure constants.
    pub fn frobenius_twist(&self, alg: &SCAlgebra, sigma: GaloisElement) -> Result<ModuleRep> {
        if !alg.constants_rational() {
            return Err(Error::StructureConstantsNotRational);
        }
        let j = sigma.j % alg.field.m();
        Ok(ModuleRep {
            dim: self.dim,
            mats: self.mats.iter().map(|m| m.frobenius(&alg.field, j)).collect(),
        })
    }

    /// Dimension of the equivariant Hom-space into `other`.
    pub fn hom_dim(&self, other: &ModuleRep, alg: &SCAlgebra) -> usize {
        hom_space(self, other, alg).len()
    }

    /// Stable isomorphism invariant: minimal polynomial coefficients of every
    /// basis action, prefixed by the dimension.
    pub fn fingerprint(&self, field: &Field) -> Vec<Vec<u64>> {
        let mut out = vec![vec![self.dim as u64]];
        for m in &self.mats {
            out.push(m.min_poly(field));
        }
        out
    }
}

/// Basis of Hom_A(M, N) as matrices X with X a(M) = a(N) X for all algebra
/// generators a.
fn hom_space(m: &ModuleRep, n: &ModuleRep, alg: &SCAlgebra) -> Vec<Mat> {
    let field = &alg.field;
    let gens = alg.generator_indices();
    let (dm, dn) = (m.dim, n.dim);
    let unknowns = dm * dn;
    let mut rows = vec![];
    for &g in &gens {
        let a = &m.mats[g];
        let b = &n.mats[g];
        // X * a - b * X = 0, entry (i, j): sum_k X[i,k] a[k,j] - b[i,k] X[k,j].
        for i in 0..dn {
            for j in 0..dm {
                let mut row = vec![0; unknowns];
                for k in 0..dm {
                    row[i * dm + k] = field.add(row[i * dm + k], a[(k, j)]);
                }
                for k in 0..dn {
                    row[k * dm + j] = field.sub(row[k * dm + j], b[(i, k)]);
                }
                if row.iter().any(|&x| x != 0) {
                    rows.push(row);
                }
            }
        }
    }
    if rows.is_empty() {
        rows.push(vec![0; unknowns]);
    }
    let ns = Mat::from_rows(rows).nullspace(field);
    (0..ns.cols)
        .map(|c| {
            let v = ns.col(c);
            Mat::from_fn(dn, dm, |i, j| v[i * dm + j])
        })
        .collect()
}

/// An invertible intertwiner M -> N, if one exists. Exact for irreducible
/// inputs; a nonzero hom between irreducibles is invertible.
pub fn module_isomorphic(
    m: &ModuleRep,
    n: &ModuleRep,
    alg: &SCAlgebra,
    rng: &mut impl RngCore,
) -> Option<Mat> {
    if m.dim != n.dim {
        return None;
    }
    let field = &alg.field;
    let homs = hom_space(m, n, alg);
    for h in &homs {
        if h.inverse(field).is_some() {
            return Some(h.clone());
        }
    }
    // Random combinations, in case no single basis hom is invertible.
    for _ in 0..32 {
        if homs.is_empty() {
            break;
        }
        let mut cand = Mat::zero(n.dim, m.dim);
        for h in &homs {
            let c = field.rand_elem(rng);
            if c != 0 {
                cand = cand.add(&h.scale(c, field), field);
            }
        }
        if cand.inverse(field).is_some() {
            return Some(cand);
        }
    }
    None
}

/// Composition factors grouped into isomorphism classes with multiplicities,
/// in a canonical order (by fingerprint, ties by first appearance).
pub fn composition_factors(
    module: &ModuleRep,
    alg: &SCAlgebra,
    rng: &mut impl RngCore,
    budget: usize,
) -> Result<Vec<(ModuleRep, usize)>> {
    let raw = module.composition_factors_raw(&alg.field, rng, budget)?;
    let mut classes: Vec<(ModuleRep, usize)> = vec![];
    for f in raw {
        match classes
            .iter_mut()
            .find(|(rep, _)| module_isomorphic(&f, rep, alg, rng).is_some())
        {
            Some((_, mult)) => *mult += 1,
            None => classes.push((f, 1)),
        }
    }
    classes.sort_by_cached_key(|(rep, _)| rep.fingerprint(&alg.field));
    Ok(classes)
}

/// Smallest extension degree m such that every composition factor of the
/// regular module of `alg` over F_{p^m} is absolutely irreducible.
pub fn splitting_degree(
    alg: &SCAlgebra,
    m_max: u32,
    rng: &mut impl RngCore,
    budget: usize,
) -> Result<u32> {
    let p = alg.field.p();
    for m in 1..=m_max {
        let field = Field::new(p, m)?;
        let ext = alg.extend_field(field)?;
        let reg = ModuleRep::regular(&ext);
        let factors = composition_factors(&reg, &ext, rng, budget)?;
        if factors
            .iter()
            .all(|(s, _)| s.hom_dim(s, &ext) == 1)
        {
            return Ok(m);
        }
    }
    Err(Error::SplitCapExceeded {
        m_max,
        detail: format!("algebra of dimension {} over F_{}", alg.dim, p),
    })
}
