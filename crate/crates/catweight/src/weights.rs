//! Weight catalogs for the orbit category algebra and the transport
//! bijections between isomorphic idempotents.
//!
//! A weight is a quadruple (e, P, P, T): e a representative idempotent, P a
//! p-subgroup of G_e up to conjugacy, and T a projective simple module over
//! k[N_{G_e}(P)/P]. The catalog enumerates the double union over a
//! representative system, which parametrises the isomorphism classes of
//! weights of kO_C. Lambda transports simple kG_e-modules along an
//! isomorphism witness (with the cocycle scalar beta when twisting), Omega
//! transports whole weights, and the b-weight test partitions the catalog by
//! blocks of kC when C is an EI-category.

use rand_core::RngCore;

use crate::cocycle::{beta_scalar, TwoCocycle};
use crate::error::{Error, Result};
use crate::ffalg::algebra::{BlockIdem, SCAlgebra};
use crate::ffalg::field::{Field, GaloisElement};
use crate::ffalg::matrix::Mat;
use crate::ffalg::module::{module_isomorphic, ModuleRep};
use crate::fincat::{CatAutomorphism, FinCategory, IdemIsoWitness, Idempotent, MaxSubgroup};
use crate::grouprep::{brauer_map, group_algebra, projective_simple_indices, simple_modules};
use crate::porbit::{orbit_max_subgroup, OrbitMaxSubgroup, RepSystem};

/// One (e, P) cell of the catalog: the quotient group N_{G_e}(P)/P, its
/// group algebra over the working field, all simple modules, and the indices
/// of the projective ones.
#[derive(Debug, Clone)]
pub struct WeightCell {
    pub oms: OrbitMaxSubgroup,
    pub alg: SCAlgebra,
    pub simples: Vec<ModuleRep>,
    pub projective: Vec<usize>,
}

/// A catalog entry: indices into the representative system and the cell's
/// projective-simple list, plus the block label when assigned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightEntry {
    pub e_idx: usize,
    pub p_idx: usize,
    pub s_idx: usize,
    pub dim: usize,
    pub block: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct WeightCatalog {
    pub cells: Vec<Vec<WeightCell>>,
    pub entries: Vec<WeightEntry>,
    pub field: Field,
    pub p: u64,
}

impl WeightCatalog {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry_index(&self, e_idx: usize, p_idx: usize, s_idx: usize) -> Option<usize> {
        self.entries
            .iter()
            .position(|w| (w.e_idx, w.p_idx, w.s_idx) == (e_idx, p_idx, s_idx))
    }

    /// The projective simple module of an entry.
    pub fn module_of(&self, entry: &WeightEntry) -> &ModuleRep {
        let cell = &self.cells[entry.e_idx][entry.p_idx];
        &cell.simples[cell.projective[entry.s_idx]]
    }
}

/// Enumerate the weights of kO_C over `field` (which must split every cell
/// algebra): the double union of projective simples of k[N_{G_e}(P)/P].
pub fn enumerate_weights(
    cat: &FinCategory,
    reps: &RepSystem,
    field: &Field,
    rng: &mut impl RngCore,
    budget: usize,
) -> Result<WeightCatalog> {
    let mut cells = vec![];
    let mut entries = vec![];
    for (i, &e) in reps.idems.iter().enumerate() {
        let mut row = vec![];
        for (j, psub) in reps.psubs[i].iter().enumerate() {
            let oms = orbit_max_subgroup(cat, e, psub)?;
            let (alg, simples) = simple_modules(&oms.quotient, field, rng, budget)?;
            let projective = projective_simple_indices(&oms.quotient, reps.p, &simples);
            for (k, &sidx) in projective.iter().enumerate() {
                entries.push(WeightEntry {
                    e_idx: i,
                    p_idx: j,
                    s_idx: k,
                    dim: simples[sidx].dim,
                    block: None,
                });
            }
            row.push(WeightCell {
                oms,
                alg,
                simples,
                projective,
            });
        }
        cells.push(row);
    }
    Ok(WeightCatalog {
        cells,
        entries,
        field: field.clone(),
        p: reps.p,
    })
}

/// The transport isomorphism k_alpha G_e -> k_alpha G_f at module level:
/// the matrices of the transported module are rho'(y) = beta(x)^{-1} rho(x)
/// with x = t∘y∘s. Basis orders are those of `src` and `dst`.
pub fn lambda_transport(
    cat: &FinCategory,
    alpha: &TwoCocycle,
    w: &IdemIsoWitness,
    src: &MaxSubgroup,
    dst: &MaxSubgroup,
    m: &ModuleRep,
    field: &Field,
) -> ModuleRep {
    let mats = dst
        .elements
        .iter()
        .map(|&y| {
            let x = cat
                .compose_all(&[w.t, y, w.s])
                .expect("t∘y∘s lands in G_e");
            let xi = src
                .elements
                .iter()
                .position(|&z| z == x)
                .expect("preimage lies in G_e");
            let beta = field.from_u64(beta_scalar(cat, alpha, w, x));
            m.mats[xi].scale(field.inv(beta), field)
        })
        .collect();
    ModuleRep { dim: m.dim, mats }
}

/// Class-level Lambda: where each simple of kG_e lands in the simple list of
/// kG_f.
pub fn lambda_class_map(
    cat: &FinCategory,
    alpha: &TwoCocycle,
    w: &IdemIsoWitness,
    src: &MaxSubgroup,
    dst: &MaxSubgroup,
    simples_src: &[ModuleRep],
    simples_dst: &[ModuleRep],
    dst_alg: &SCAlgebra,
    rng: &mut impl RngCore,
) -> Result<Vec<usize>> {
    let field = &dst_alg.field;
    let mut out = vec![0; simples_src.len()];
    for (i, s) in simples_src.iter().enumerate() {
        let t = lambda_transport(cat, alpha, w, src, dst, s, field);
        out[i] = simples_dst
            .iter()
            .position(|u| module_isomorphic(&t, u, dst_alg, rng).is_some())
            .ok_or_else(|| Error::CatalogMissingImage("Lambda image of a simple".into()))?;
    }
    Ok(out)
}

/// Omega at module level: transport a weight (P, T) at e to (Q, T') at f
/// along a witness (s, t), where Q = s∘P∘t and T' is obtained through the
/// induced isomorphism of the quotient algebras. The beta scalar must be
/// constant on P-cosets (automatic for the trivial cocycle; checked
/// otherwise).
pub fn omega_transport(
    cat: &FinCategory,
    alpha: &TwoCocycle,
    w: &IdemIsoWitness,
    p_set: &[usize],
    t_mod: &ModuleRep,
    field: &Field,
) -> Result<(Vec<usize>, OrbitMaxSubgroup, ModuleRep)> {
    let mut q_set: Vec<usize> = p_set
        .iter()
        .map(|&u| cat.compose_all(&[w.s, u, w.t]).expect("s∘u∘t defined"))
        .collect();
    q_set.sort();
    let src = orbit_max_subgroup(cat, w.source, p_set)?;
    let dst = orbit_max_subgroup(cat, w.target, &q_set)?;
    assert_eq!(t_mod.mats.len(), src.quotient.n, "module is over k[N/P]");
    // Map src quotient cosets to dst quotient cosets through x -> s∘x∘t and
    // record the beta scalar, checking both are constant on each coset.
    let mut qmap = vec![usize::MAX; src.quotient.n];
    let mut qscale = vec![u64::MAX; src.quotient.n];
    for n_idx in 0..src.n_group.n {
        let x = src.n_morph(n_idx);
        let y = cat.compose_all(&[w.s, x, w.t]).expect("composable");
        let c_src = src.proj[n_idx];
        let c_dst = dst
            .coset_of_morph(y)
            .expect("transport lands in N_{G_f}(Q)");
        let beta = field.from_u64(beta_scalar(cat, alpha, w, x));
        if qmap[c_src] == usize::MAX {
            qmap[c_src] = c_dst;
            qscale[c_src] = beta;
        } else if qmap[c_src] != c_dst || qscale[c_src] != beta {
            return Err(Error::BadInput(
                "cocycle does not descend to the quotient transport".into(),
            ));
        }
    }
    let mut mats = vec![Mat::zero(t_mod.dim, t_mod.dim); dst.quotient.n];
    for c in 0..src.quotient.n {
        mats[qmap[c]] = t_mod.mats[c].scale(field.inv(qscale[c]), field);
    }
    let out = ModuleRep {
        dim: t_mod.dim,
        mats,
    };
    Ok((q_set, dst, out))
}

/// Identify an arbitrary weight (e, P, T) with its catalog entry: transport
/// e to its representative, conjugate P into X_e, and match the module.
pub fn canonicalize_weight(
    cat: &FinCategory,
    reps: &RepSystem,
    catalog: &WeightCatalog,
    e: Idempotent,
    p_set: &[usize],
    t_mod: &ModuleRep,
    rng: &mut impl RngCore,
) -> Result<(usize, usize, usize)> {
    let field = &catalog.field;
    let trivial = TwoCocycle::trivial(catalog.p);
    let e_idx = reps
        .idems
        .iter()
        .position(|&r| cat.idempotents_isomorphic(e, r).is_some())
        .ok_or_else(|| Error::CatalogMissingImage("idempotent class".into()))?;
    let e0 = reps.idems[e_idx];
    let w = cat
        .idempotents_isomorphic(e, e0)
        .expect("witness exists by choice of e_idx");
    let (q_set, _dst, t1) = omega_transport(cat, &trivial, &w, p_set, t_mod, field)?;
    // Conjugate Q into the representative list X_{e0}.
    let g0 = cat.maximal_subgroup(e0);
    let mut found = None;
    'outer: for (p_idx, rep_set) in reps.psubs[e_idx].iter().enumerate() {
        if rep_set.len() != q_set.len() {
            continue;
        }
        for &g in &g0.elements {
            let ginv = g0
                .elements
                .iter()
                .copied()
                .find(|&h| {
                    cat.compose(g, h) == Some(e0.morph) && cat.compose(h, g) == Some(e0.morph)
                })
                .expect("G_e elements are invertible");
            let mut conj: Vec<usize> = q_set
                .iter()
                .map(|&u| cat.compose_all(&[g, u, ginv]).expect("composable"))
                .collect();
            conj.sort();
            if &conj == rep_set {
                found = Some((p_idx, g, ginv));
                break 'outer;
            }
        }
    }
    let (p_idx, g, ginv) = found.ok_or_else(|| {
        Error::CatalogMissingImage("conjugacy class of the transported subgroup".into())
    })?;
    // Inner transport by g is Omega along the witness (g, g^{-1}).
    let wg = IdemIsoWitness {
        s: g,
        t: ginv,
        source: e0,
        target: e0,
    };
    let (q0_set, _dst0, t2) = omega_transport(cat, &trivial, &wg, &q_set, &t1, field)?;
    debug_assert_eq!(&q0_set, &reps.psubs[e_idx][p_idx]);
    let cell = &catalog.cells[e_idx][p_idx];
    let s_idx = cell
        .projective
        .iter()
        .position(|&si| module_isomorphic(&t2, &cell.simples[si], &cell.alg, rng).is_some())
        .ok_or_else(|| Error::CatalogMissingImage("projective simple class".into()))?;
    Ok((e_idx, p_idx, s_idx))
}

/// Whether the weight given by `cell` and its `s_idx`-th projective simple
/// is a b-weight: br_P(e b) acts nonzero on the module. EI-categories only.
pub fn b_weight_test(
    cat: &FinCategory,
    kc: &SCAlgebra,
    b: &[u64],
    e: Idempotent,
    cell: &WeightCell,
    s_idx: usize,
) -> Result<bool> {
    if !cat.is_ei() {
        return Err(Error::NotEI);
    }
    let field = &kc.field;
    // e b, restricted to kG_e coordinates.
    let eb = kc.mul_vec(&kc.basis_vec(e.morph), b);
    let mut local = vec![0; cell.oms.g_group.n];
    for (m, &coeff) in eb.iter().enumerate() {
        if coeff != 0 {
            let gi = cell
                .oms
                .g_elements
                .iter()
                .position(|&x| x == m)
                .ok_or(Error::NotCentralInGe)?;
            local[gi] = coeff;
        }
    }
    let ge_alg = group_algebra(&cell.oms.g_group, field.clone());
    if !ge_alg.is_central(&local) {
        return Err(Error::NotCentralInGe);
    }
    let p_local: Vec<usize> = {
        let mut v: Vec<usize> = (0..cell.oms.n_group.n)
            .filter(|&n_idx| cell.oms.proj[n_idx] == cell.oms.quotient.unit)
            .map(|n_idx| cell.oms.n_local[n_idx])
            .collect();
        v.sort();
        v
    };
    let img = brauer_map(&cell.oms.g_group, &ge_alg, &p_local, &local)?;
    assert_eq!(
        img.quotient.n, cell.oms.quotient.n,
        "brauer_map and the cell quotient agree"
    );
    let action = cell.simples[cell.projective[s_idx]].act(&img.pushed, field);
    Ok(!action.is_zero())
}

/// Assign to every catalog entry the unique primitive block of kC it is
/// associated to. EI-categories only.
pub fn assign_blocks(
    cat: &FinCategory,
    kc: &SCAlgebra,
    blocks: &[BlockIdem],
    reps: &RepSystem,
    catalog: &mut WeightCatalog,
) -> Result<()> {
    let entries = catalog.entries.clone();
    let mut updated = vec![];
    for mut entry in entries {
        let e = reps.idems[entry.e_idx];
        let cell = &catalog.cells[entry.e_idx][entry.p_idx];
        let mut hit = None;
        for (bi, b) in blocks.iter().enumerate() {
            if b_weight_test(cat, kc, &b.coeffs, e, cell, entry.s_idx)? {
                if hit.is_some() {
                    return Err(Error::AssociatedBlockMultiple);
                }
                hit = Some(bi);
            }
        }
        entry.block = Some(hit.ok_or(Error::AssociatedBlockNone)?);
        updated.push(entry);
    }
    catalog.entries = updated;
    Ok(())
}

/// Permutation of the catalog under the Galois element x -> x^{p^j}.
pub fn galois_action_on_weights(
    catalog: &WeightCatalog,
    j: u32,
    rng: &mut impl RngCore,
) -> Result<Vec<usize>> {
    let mut perm = vec![0; catalog.entries.len()];
    for (idx, entry) in catalog.entries.iter().enumerate() {
        let cell = &catalog.cells[entry.e_idx][entry.p_idx];
        let tw = catalog
            .module_of(entry)
            .frobenius_twist(&cell.alg, GaloisElement { j })?;
        let s_idx = cell
            .projective
            .iter()
            .position(|&si| module_isomorphic(&tw, &cell.simples[si], &cell.alg, rng).is_some())
            .ok_or_else(|| Error::CatalogMissingImage("Galois twist of a weight".into()))?;
        perm[idx] = catalog
            .entry_index(entry.e_idx, entry.p_idx, s_idx)
            .expect("entry exists");
    }
    Ok(perm)
}

/// Permutation of the catalog under a category automorphism: the image
/// weight (F(e), F(P), T∘F^{-1}) is re-identified via the transporter
/// isomorphism and Omega.
pub fn aut_action_on_weights(
    cat: &FinCategory,
    reps: &RepSystem,
    catalog: &WeightCatalog,
    aut: &CatAutomorphism,
    rng: &mut impl RngCore,
) -> Result<Vec<usize>> {
    let mut perm = vec![0; catalog.entries.len()];
    for (idx, entry) in catalog.entries.iter().enumerate() {
        let (fe, fp, ft) = apply_aut_to_weight(cat, reps, catalog, entry, aut)?;
        let (e_idx, p_idx, s_idx) = canonicalize_weight(cat, reps, catalog, fe, &fp, &ft, rng)?;
        perm[idx] = catalog
            .entry_index(e_idx, p_idx, s_idx)
            .ok_or_else(|| Error::CatalogMissingImage("automorphism image of a weight".into()))?;
    }
    Ok(perm)
}

/// The raw image of a catalog weight under an automorphism, before
/// canonicalisation: (F(e), F(P), module relabelled along F).
pub fn apply_aut_to_weight(
    cat: &FinCategory,
    reps: &RepSystem,
    catalog: &WeightCatalog,
    entry: &WeightEntry,
    aut: &CatAutomorphism,
) -> Result<(Idempotent, Vec<usize>, ModuleRep)> {
    let e = reps.idems[entry.e_idx];
    let p_set = &reps.psubs[entry.e_idx][entry.p_idx];
    let cell = &catalog.cells[entry.e_idx][entry.p_idx];
    let fe = cat.apply_to_idempotent(aut, e);
    let mut fp: Vec<usize> = p_set.iter().map(|&m| aut.mor_map[m]).collect();
    fp.sort();
    let dst = orbit_max_subgroup(cat, fe, &fp)?;
    // Transport the module along the induced quotient isomorphism.
    let mut qmap = vec![usize::MAX; cell.oms.quotient.n];
    for n_idx in 0..cell.oms.n_group.n {
        let x = cell.oms.n_morph(n_idx);
        let y = aut.mor_map[x];
        let c_src = cell.oms.proj[n_idx];
        let c_dst = dst
            .coset_of_morph(y)
            .expect("automorphism image lies in the normalizer");
        if qmap[c_src] == usize::MAX {
            qmap[c_src] = c_dst;
        } else {
            assert_eq!(qmap[c_src], c_dst, "automorphism descends to cosets");
        }
    }
    let src_mod = catalog.module_of(entry);
    let mut mats = vec![Mat::zero(src_mod.dim, src_mod.dim); dst.quotient.n];
    for c in 0..cell.oms.quotient.n {
        mats[qmap[c]] = src_mod.mats[c].clone();
    }
    Ok((
        fe,
        fp,
        ModuleRep {
            dim: src_mod.dim,
            mats,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::category_algebra;
    use crate::corpus;
    use crate::porbit::rep_system;
    use rand_chacha::ChaCha8Rng;
    use rand_core::SeedableRng;

    fn catalog_for(name: &str, p: u64, m: u32) -> (FinCategory, RepSystem, WeightCatalog) {
        let c = corpus::by_name(name).unwrap();
        let reps = rep_system(&c, p);
        let field = Field::new(p, m).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let cat = enumerate_weights(&c, &reps, &field, &mut rng, 200).unwrap();
        (c, reps, cat)
    }

    #[test]
    fn chain2_has_two_weights() {
        for p in [2u64, 3, 5] {
            let (_, _, cat) = catalog_for("chain2", p, 1);
            assert_eq!(cat.len(), 2);
        }
    }

    #[test]
    fn s3_at_3_has_two_weights_at_c3() {
        let (_, reps, cat) = catalog_for("s3", 3, 1);
        assert_eq!(cat.len(), 2);
        for entry in &cat.entries {
            // Both weights live at P = C3.
            assert_eq!(reps.psubs[entry.e_idx][entry.p_idx].len(), 3);
        }
    }

    #[test]
    fn monoid_e_has_two_weights() {
        for p in [2u64, 3, 5] {
            let (_, _, cat) = catalog_for("monoid_e", p, 1);
            assert_eq!(cat.len(), 2);
        }
    }

    #[test]
    fn s4_at_2_has_two_weights() {
        let (_, reps, cat) = catalog_for("s4", 2, 1);
        assert_eq!(cat.len(), 2);
        // One at the normal V4 (quotient S3, projective 2-dim simple), one
        // at D8 (trivial quotient).
        let mut sizes: Vec<usize> = cat
            .entries
            .iter()
            .map(|w| reps.psubs[w.e_idx][w.p_idx].len())
            .collect();
        sizes.sort();
        assert_eq!(sizes, vec![4, 8]);
    }

    #[test]
    fn d8_at_2_has_one_weight() {
        let (_, reps, cat) = catalog_for("d8", 2, 1);
        assert_eq!(cat.len(), 1);
        assert_eq!(
            reps.psubs[cat.entries[0].e_idx][cat.entries[0].p_idx].len(),
            8
        );
    }

    #[test]
    fn b_weight_partition_c2xc3_at_3() {
        let (c, reps, mut cat) = catalog_for("c2xc3", 3, 1);
        assert_eq!(cat.len(), 2);
        let field = Field::new(3, 1).unwrap();
        let kc = category_algebra(&c, field);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let blocks = kc.primitive_central_idempotents(&mut rng);
        assert_eq!(blocks.len(), 2);
        assign_blocks(&c, &kc, &blocks, &reps, &mut cat).unwrap();
        let mut labels: Vec<usize> = cat.entries.iter().map(|w| w.block.unwrap()).collect();
        labels.sort();
        assert_eq!(labels, vec![0, 1]);
        // b = 1 claims every weight.
        let e = reps.idems[0];
        for entry in &cat.entries {
            let cell = &cat.cells[entry.e_idx][entry.p_idx];
            assert!(b_weight_test(&c, &kc, &kc.unit, e, cell, entry.s_idx).unwrap());
        }
    }

    #[test]
    fn b_weight_test_rejects_non_ei() {
        let c = corpus::monoid_e();
        let reps = rep_system(&c, 2);
        let field = Field::new(2, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let cat = enumerate_weights(&c, &reps, &field, &mut rng, 200).unwrap();
        let kc = category_algebra(&c, field);
        let entry = &cat.entries[0];
        let cell = &cat.cells[entry.e_idx][entry.p_idx];
        let err = b_weight_test(&c, &kc, &kc.unit, reps.idems[0], cell, entry.s_idx);
        assert!(matches!(err, Err(Error::NotEI)));
    }

    #[test]
    fn c7_blocks_each_claim_their_weight() {
        let (c, reps, mut cat) = catalog_for("c7", 2, 3);
        assert_eq!(cat.len(), 7);
        let field = Field::new(2, 3).unwrap();
        let kc = category_algebra(&c, field);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let blocks = kc.primitive_central_idempotents(&mut rng);
        assert_eq!(blocks.len(), 7);
        assign_blocks(&c, &kc, &blocks, &reps, &mut cat).unwrap();
        let mut labels: Vec<usize> = cat.entries.iter().map(|w| w.block.unwrap()).collect();
        labels.sort();
        assert_eq!(labels, (0..7).collect::<Vec<_>>());
    }

    #[test]
    fn galois_orbits_on_c7_weights() {
        let (_, _, cat) = catalog_for("c7", 2, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let perm = galois_action_on_weights(&cat, 1, &mut rng).unwrap();
        let mut sizes = orbit_sizes(&perm);
        sizes.sort();
        assert_eq!(sizes, vec![1, 3, 3]);
        // sigma = identity gives the identity permutation.
        let id_perm = galois_action_on_weights(&cat, 0, &mut rng).unwrap();
        assert_eq!(id_perm, (0..7).collect::<Vec<_>>());
    }

    #[test]
    fn band_object_swap_fixes_the_weight() {
        let (c, reps, cat) = catalog_for("band", 2, 1);
        let auts = c.enumerate_automorphisms(1_000_000).unwrap();
        assert_eq!(auts.len(), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for aut in &auts {
            let perm = aut_action_on_weights(&c, &reps, &cat, aut, &mut rng).unwrap();
            assert_eq!(perm, vec![0]);
        }
    }

    #[test]
    fn diamond_swap_exchanges_middle_weights() {
        let (c, reps, cat) = catalog_for("diamond", 2, 1);
        assert_eq!(cat.len(), 4);
        let auts = c.enumerate_automorphisms(1_000_000).unwrap();
        assert_eq!(auts.len(), 2);
        let swap = auts
            .iter()
            .find(|a| **a != c.identity_automorphism())
            .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let perm = aut_action_on_weights(&c, &reps, &cat, swap, &mut rng).unwrap();
        let mut sizes = orbit_sizes(&perm);
        sizes.sort();
        assert_eq!(sizes, vec![1, 1, 2]);
    }

    #[test]
    fn lambda_round_trips_on_corpus() {
        // Lambda_{f,e} ∘ Lambda_{e,f} = id on classes, for every isomorphic
        // idempotent pair in the non-EI corpus entries, and the transported
        // modules satisfy the module relations.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for name in ["band", "t2", "monoid_e"] {
            let c = corpus::by_name(name).unwrap();
            for p in [2u64, 3] {
                let field = Field::new(p, 1).unwrap();
                let trivial = TwoCocycle::trivial(p);
                let idems = c.idempotent_endos();
                for &e in &idems {
                    for &f in &idems {
                        let Some(w) = c.idempotents_isomorphic(e, f) else {
                            continue;
                        };
                        let ge = c.maximal_subgroup(e);
                        let gf = c.maximal_subgroup(f);
                        let ge_group = crate::grouprep::FinGroup::from_max_subgroup(&c, &ge);
                        let (alg_e, simples_e) =
                            simple_modules(&ge_group, &field, &mut rng, 200).unwrap();
                        let gf_group = crate::grouprep::FinGroup::from_max_subgroup(&c, &gf);
                        let (alg_f, simples_f) =
                            simple_modules(&gf_group, &field, &mut rng, 200).unwrap();
                        let wb = c.idempotents_isomorphic(f, e).unwrap();
                        let fwd = lambda_class_map(
                            &c, &trivial, &w, &ge, &gf, &simples_e, &simples_f, &alg_f, &mut rng,
                        )
                        .unwrap();
                        let bwd = lambda_class_map(
                            &c, &trivial, &wb, &gf, &ge, &simples_f, &simples_e, &alg_e, &mut rng,
                        )
                        .unwrap();
                        for i in 0..fwd.len() {
                            assert_eq!(bwd[fwd[i]], i, "{name}@{p}: Lambda round trip");
                        }
                        for s in &simples_e {
                            let t = lambda_transport(&c, &trivial, &w, &ge, &gf, s, &field);
                            t.validate(&alg_f).unwrap();
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn twisted_lambda_on_identity_witness_is_identity() {
        let c = corpus::cyclic(2);
        let alpha =
            crate::cocycle::validate_cocycle(&c, &corpus::twisted_c2_p5_cocycle()).unwrap();
        let field = Field::new(5, 2).unwrap();
        let e = c.idempotent_endos()[0];
        let w = c.idempotents_isomorphic(e, e).unwrap();
        let ge = c.maximal_subgroup(e);
        let kalpha = crate::cocycle::twisted_algebra(&c, &alpha, field.clone()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let reg = ModuleRep::regular(&kalpha);
        let factors =
            crate::ffalg::module::composition_factors(&reg, &kalpha, &mut rng, 200).unwrap();
        assert_eq!(factors.len(), 2);
        for (s, _) in &factors {
            let t = lambda_transport(&c, &alpha, &w, &ge, &ge, s, &field);
            assert!(module_isomorphic(&t, s, &kalpha, &mut rng).is_some());
        }
    }

    #[test]
    fn omega_round_trip_on_s3_conjugate_subgroups() {
        // S3 at p = 2: transport a weight at one C2 to a conjugate C2; the
        // canonicalisation brings it back to the same catalog entry.
        let c = corpus::s3();
        let reps = rep_system(&c, 2);
        let field = Field::new(2, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let catalog = enumerate_weights(&c, &reps, &field, &mut rng, 200).unwrap();
        let id = reps.idems[0];
        let ge = c.maximal_subgroup(id);
        let all_c2: Vec<Vec<usize>> = crate::porbit::p_subgroups_of_monoid(&c, 0, 2)
            .into_iter()
            .filter(|t| t.psub.len() == 2)
            .map(|t| t.psub)
            .collect();
        assert_eq!(all_c2.len(), 3);
        let trivial = TwoCocycle::trivial(2);
        for entry in &catalog.entries {
            let p_set = reps.psubs[entry.e_idx][entry.p_idx].clone();
            if p_set.len() != 2 {
                continue;
            }
            let t_mod = catalog.module_of(entry).clone();
            for other in &all_c2 {
                if *other == p_set {
                    continue;
                }
                // Find a conjugating witness (g, g^{-1}).
                let mut wit = None;
                for &g in &ge.elements {
                    let ginv = ge
                        .elements
                        .iter()
                        .copied()
                        .find(|&h| c.compose(g, h) == Some(id.morph))
                        .unwrap();
                    let mut conj: Vec<usize> = p_set
                        .iter()
                        .map(|&u| c.compose_all(&[g, u, ginv]).unwrap())
                        .collect();
                    conj.sort();
                    if &conj == other {
                        wit = Some((g, ginv));
                        break;
                    }
                }
                let (g, ginv) = wit.expect("conjugate C2s");
                let w = IdemIsoWitness {
                    s: g,
                    t: ginv,
                    source: id,
                    target: id,
                };
                let (q_set, _, t1) =
                    omega_transport(&c, &trivial, &w, &p_set, &t_mod, &field).unwrap();
                assert_eq!(&q_set, other);
                let (ei, pi, si) =
                    canonicalize_weight(&c, &reps, &catalog, id, &q_set, &t1, &mut rng).unwrap();
                assert_eq!((ei, pi, si), (entry.e_idx, entry.p_idx, entry.s_idx));
            }
        }
    }

    fn orbit_sizes(perm: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; perm.len()];
        let mut out = vec![];
        for mut i in 0..perm.len() {
            if seen[i] {
                continue;
            }
            let mut size = 0;
            while !seen[i] {
                seen[i] = true;
                size += 1;
                i = perm[i];
            }
            out.push(size);
        }
        out
    }

    #[test]
    fn catalog_count_matches_brute_force_in_orbit_category() {
        // Build O_C explicitly, enumerate its idempotent isomorphism
        // classes, take each maximal subgroup directly from the table, and
        // count projective simples: the total must equal the Lemma-3.5
        // catalog size.
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for name in ["terminal", "chain2", "monoid_e", "t2", "band", "c3", "s3"] {
            let c = corpus::by_name(name).unwrap();
            for p in [2u64, 3] {
                let reps = rep_system(&c, p);
                // A field splitting every cell algebra (the orbit-category
                // unit groups are isomorphic to the cell quotients).
                let mut m = 1u32;
                for (i, &e) in reps.idems.iter().enumerate() {
                    for psub in &reps.psubs[i] {
                        let oms = orbit_max_subgroup(&c, e, psub).unwrap();
                        let alg = group_algebra(&oms.quotient, Field::new(p, 1).unwrap());
                        let d =
                            crate::ffalg::module::splitting_degree(&alg, 24, &mut rng, 200)
                                .unwrap();
                        m = m / gcd(m, d) * d;
                    }
                }
                let field = Field::new(p, m).unwrap();
                let catalog = enumerate_weights(&c, &reps, &field, &mut rng, 200).unwrap();

                let t = crate::porbit::build_transporter(&c, p).unwrap();
                let o = crate::porbit::build_orbit(&t, &c).unwrap();
                let idems = o.cat.idempotent_endos();
                let mut class_reps: Vec<Idempotent> = vec![];
                for &e in &idems {
                    if !class_reps
                        .iter()
                        .any(|&r| o.cat.idempotents_isomorphic(r, e).is_some())
                    {
                        class_reps.push(e);
                    }
                }
                let mut brute = 0;
                for &ebar in &class_reps {
                    let unit_group = o.cat.maximal_subgroup(ebar);
                    let g = crate::grouprep::FinGroup::from_max_subgroup(&o.cat, &unit_group);
                    let (_, simples) = simple_modules(&g, &field, &mut rng, 200).unwrap();
                    brute += projective_simple_indices(&g, p, &simples).len();
                }
                assert_eq!(brute, catalog.len(), "{name}@{p}");
            }
        }
    }

    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
}
