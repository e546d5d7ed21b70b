//! Instance-level conjecture checkers and the executable reduction theorems.
//!
//! The central object is an [`Instance`]: a category, a prime, a splitting
//! field, per-idempotent local data (maximal subgroup, its simples, the
//! weight cells), the simple modules of kC parametrised both directly
//! (composition factors of the regular module, with minimal idempotents)
//! and indirectly (the disjoint union of simples of the kG_e), the weight
//! catalog, the blocks, and the Galois and automorphism actions on all of
//! them.
//!
//! Equivariant-bijection existence between two finite G-sets is decided by
//! comparing fixed-point counts over every subgroup of G; when the counts
//! agree a concrete bijection is assembled orbit by orbit, matching
//! stabilizers exactly. The assembly routines glue per-idempotent
//! bijections into a global one and audit bijectivity and equivariance
//! element by element.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;

use crate::cocycle::{
    build_extension, category_algebra, check_pi_isomorphism, e_r_idempotent, pi_matrix,
    twisted_algebra, TwoCocycle,
};
use crate::error::{Error, Result};
use crate::ffalg::algebra::{BlockIdem, SCAlgebra};
use crate::ffalg::field::{Field, GaloisElement};
use crate::ffalg::matrix::{Mat, Subspace};
use crate::ffalg::module::{
    composition_factors, module_isomorphic, splitting_degree, ModuleRep, DEFAULT_M_MAX,
    DEFAULT_SPLIT_BUDGET,
};
use crate::fincat::{CatAutomorphism, FinCategory, IdemIsoWitness, Idempotent, MaxSubgroup};
use crate::grouprep::{
    group_algebra, is_projective_by_summand, projective_simple_indices, simple_modules,
    transport_module, twisted_group_algebra, FinGroup,
};
use crate::porbit::{orbit_max_subgroup, rep_system, RepSystem};
use crate::weights::{
    aut_action_on_weights, b_weight_test, galois_action_on_weights, lambda_class_map,
    lambda_transport, omega_transport, WeightCatalog, WeightCell, WeightEntry,
};

pub const DEFAULT_AUT_CAP: u64 = 1_000_000;

/// Sizes of the cycles of a permutation, unsorted.
pub fn orbit_sizes(perm: &[usize]) -> Vec<usize> {
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

fn compose_perm(outer: &[usize], inner: &[usize]) -> Vec<usize> {
    inner.iter().map(|&i| outer[i]).collect()
}

/// A finite group acting on a finite index set, one permutation per element.
#[derive(Debug, Clone)]
pub struct GroupAction {
    pub group: FinGroup,
    pub perms: Vec<Vec<usize>>,
}

impl GroupAction {
    pub fn new(group: FinGroup, perms: Vec<Vec<usize>>) -> GroupAction {
        let a = GroupAction { group, perms };
        debug_assert!(a.is_action());
        a
    }

    fn is_action(&self) -> bool {
        for g in 0..self.group.n {
            for h in 0..self.group.n {
                let gh = self.group.mul(g, h);
                if self.perms[gh] != compose_perm(&self.perms[g], &self.perms[h]) {
                    return false;
                }
            }
        }
        true
    }

    pub fn degree(&self) -> usize {
        self.perms.first().map_or(0, |p| p.len())
    }

    pub fn fixed_count(&self, subgroup: &[usize]) -> usize {
        (0..self.degree())
            .filter(|&i| subgroup.iter().all(|&g| self.perms[g][i] == i))
            .count()
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = vec![];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut orbit = vec![start];
            seen[start] = true;
            let mut k = 0;
            while k < orbit.len() {
                let i = orbit[k];
                for p in &self.perms {
                    let j = p[i];
                    if !seen[j] {
                        seen[j] = true;
                        orbit.push(j);
                    }
                }
                k += 1;
            }
            orbit.sort();
            out.push(orbit);
        }
        out
    }

    pub fn stabilizer(&self, point: usize) -> Vec<usize> {
        (0..self.group.n)
            .filter(|&g| self.perms[g][point] == point)
            .collect()
    }

    pub fn orbit_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.orbits().iter().map(|o| o.len()).collect();
        t.sort();
        t
    }
}

/// Fixed-point counts on both sides for every subgroup, with the verdict.
#[derive(Debug, Clone, Serialize)]
pub struct EquivarianceReport {
    pub group: String,
    pub group_order: usize,
    pub left_size: usize,
    pub right_size: usize,
    pub left_orbit_type: Vec<usize>,
    pub right_orbit_type: Vec<usize>,
    /// (subgroup order, elements, left fixed, right fixed).
    pub fixed_points: Vec<(usize, String, usize, usize)>,
    pub equivariant_bijection_exists: bool,
}

/// Decide existence of an equivariant bijection between two actions of the
/// same group: fixed-point counts must agree for every subgroup.
pub fn check_equivariance(
    desc: &str,
    left: &GroupAction,
    right: &GroupAction,
) -> EquivarianceReport {
    assert_eq!(left.group.n, right.group.n, "actions of the same group");
    let subs = left.group.all_subgroups();
    let mut fixed_points = vec![];
    let mut ok = true;
    for sub in &subs {
        let lf = left.fixed_count(sub);
        let rf = right.fixed_count(sub);
        if lf != rf {
            ok = false;
        }
        let gens: Vec<&str> = sub
            .iter()
            .map(|&g| left.group.labels[g].as_str())
            .collect();
        fixed_points.push((sub.len(), format!("{{{}}}", gens.join(" ")), lf, rf));
    }
    EquivarianceReport {
        group: desc.to_string(),
        group_order: left.group.n,
        left_size: left.degree(),
        right_size: right.degree(),
        left_orbit_type: left.orbit_type(),
        right_orbit_type: right.orbit_type(),
        fixed_points,
        equivariant_bijection_exists: ok,
    }
}

/// Build an explicit equivariant bijection, orbit by orbit with exact
/// stabilizer matching. Returns None only if the fixed-point criterion
/// fails (callers check the report first).
pub fn equivariant_pairing(left: &GroupAction, right: &GroupAction) -> Option<Vec<usize>> {
    let mut pairing = vec![usize::MAX; left.degree()];
    let left_orbits = left.orbits();
    let mut right_orbits = right.orbits();
    for lo in &left_orbits {
        let x0 = lo[0];
        let stab = left.stabilizer(x0);
        // Find an unused right orbit containing a point with the same
        // stabilizer (not just a conjugate one).
        let mut found = None;
        'search: for (ri, ro) in right_orbits.iter().enumerate() {
            if ro.len() != lo.len() {
                continue;
            }
            for &y in ro {
                if right.stabilizer(y) == stab {
                    found = Some((ri, y));
                    break 'search;
                }
            }
        }
        let (ri, y0) = found?;
        for g in 0..left.group.n {
            let x = left.perms[g][x0];
            let y = right.perms[g][y0];
            if pairing[x] == usize::MAX {
                pairing[x] = y;
            } else if pairing[x] != y {
                return None;
            }
        }
        right_orbits.remove(ri);
    }
    if pairing.contains(&usize::MAX) {
        return None;
    }
    let mut used = vec![false; right.degree()];
    for &y in &pairing {
        if used[y] {
            return None;
        }
        used[y] = true;
    }
    Some(pairing)
}

/// The additive group Z/m with labels "f^j" (powers of the Frobenius).
pub fn cyclic_group(m: usize) -> FinGroup {
    let labels = (0..m).map(|j| format!("f{j}")).collect();
    let mut table = vec![0; m * m];
    for a in 0..m {
        for b in 0..m {
            table[a * m + b] = (a + b) % m;
        }
    }
    FinGroup::from_table(labels, table, 0).expect("cyclic group is a group")
}

/// Per-idempotent data: the maximal subgroup, its group algebra over the
/// working field, its simple modules, the conjugacy representatives of
/// p-subgroups, and the weight cell of each.
#[derive(Debug, Clone)]
pub struct LocalData {
    pub idem: Idempotent,
    pub max_sub: MaxSubgroup,
    pub group: FinGroup,
    pub alg: SCAlgebra,
    pub simples: Vec<ModuleRep>,
    pub psubs: Vec<Vec<usize>>,
    pub wcells: Vec<WeightCell>,
    /// Flat local weight list: (p_idx, index into the cell's projectives).
    pub wlist: Vec<(usize, usize)>,
}

/// One entry of the pair catalog: (representative idempotent, simple class
/// of kG_e), with the block label of kC it belongs to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairEntry {
    pub e_idx: usize,
    pub s_idx: usize,
    pub block: Option<usize>,
}

/// Everything computed once per (category, prime): splitting field, both
/// sides of the correspondence, blocks, and the group actions.
pub struct Instance {
    pub cat: FinCategory,
    pub p: u64,
    pub m: u32,
    pub field: Field,
    pub seed: u64,
    pub budget: usize,
    pub is_ei: bool,
    pub reps: RepSystem,
    /// Local data for every idempotent of the category, in canonical order.
    pub locals: Vec<LocalData>,
    /// locals index of each representative idempotent.
    pub rep_local: Vec<usize>,
    pub kc: SCAlgebra,
    pub kc_simples: Vec<ModuleRep>,
    /// Direct route: kc_simples index -> pair catalog index.
    pub pi_map: Vec<usize>,
    pub pairs: Vec<PairEntry>,
    pub weights: WeightCatalog,
    pub blocks: Vec<BlockIdem>,
    /// Galois permutations, one per power of Frobenius.
    pub galois_simples: Vec<Vec<usize>>,
    pub galois_pairs: Vec<Vec<usize>>,
    pub galois_weights: Vec<Vec<usize>>,
    /// Automorphism data; None when enumeration exceeded the cap.
    pub auts: Option<AutData>,
}

#[derive(Debug, Clone)]
pub struct AutData {
    pub auts: Vec<CatAutomorphism>,
    pub group: FinGroup,
    pub on_simples: Vec<Vec<usize>>,
    pub on_pairs: Vec<Vec<usize>>,
    pub on_weights: Vec<Vec<usize>>,
}

impl Instance {
    pub fn build(cat: FinCategory, p: u64, seed: u64, aut_cap: u64) -> Result<Instance> {
        let budget = DEFAULT_SPLIT_BUDGET;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let reps = rep_system(&cat, p);
        let idems = cat.idempotent_endos();

        // Global splitting degree: lcm over kC, all kG_e and all cell
        // quotient algebras of their splitting degrees.
        let fp = Field::new(p, 1)?;
        let mut m: u64 = 1;
        let mut bump = |alg: &SCAlgebra, rng: &mut ChaCha8Rng| -> Result<()> {
            let d = splitting_degree(alg, DEFAULT_M_MAX, rng, budget)? as u64;
            m = m / gcd(m, d) * d;
            Ok(())
        };
        bump(&category_algebra(&cat, fp.clone()), &mut rng)?;
        for (i, &e) in reps.idems.iter().enumerate() {
            let g = cat.maximal_subgroup(e);
            let group = FinGroup::from_max_subgroup(&cat, &g);
            bump(&group_algebra(&group, fp.clone()), &mut rng)?;
            for psub in &reps.psubs[i] {
                let oms = orbit_max_subgroup(&cat, e, psub)?;
                bump(&group_algebra(&oms.quotient, fp.clone()), &mut rng)?;
            }
        }
        if m > DEFAULT_M_MAX as u64 {
            return Err(Error::SplitCapExceeded {
                m_max: DEFAULT_M_MAX,
                detail: format!("combined splitting degree {m}"),
            });
        }
        let m = m as u32;
        let field = Field::new(p, m)?;

        // Local data for every idempotent.
        let mut locals = vec![];
        for &e in &idems {
            let max_sub = cat.maximal_subgroup(e);
            let group = FinGroup::from_max_subgroup(&cat, &max_sub);
            let (alg, simples) = simple_modules(&group, &field, &mut rng, budget)?;
            let psubs: Vec<Vec<usize>> = group
                .p_subgroups_up_to_conjugacy(p)
                .into_iter()
                .map(|local| {
                    let mut set: Vec<usize> =
                        local.iter().map(|&i| max_sub.elements[i]).collect();
                    set.sort();
                    set
                })
                .collect();
            let mut wcells = vec![];
            let mut wlist = vec![];
            for (j, psub) in psubs.iter().enumerate() {
                let oms = orbit_max_subgroup(&cat, e, psub)?;
                let (qalg, qsimples) = simple_modules(&oms.quotient, &field, &mut rng, budget)?;
                let projective = projective_simple_indices(&oms.quotient, p, &qsimples);
                for k in 0..projective.len() {
                    wlist.push((j, k));
                }
                wcells.push(WeightCell {
                    oms,
                    alg: qalg,
                    simples: qsimples,
                    projective,
                });
            }
            locals.push(LocalData {
                idem: e,
                max_sub,
                group,
                alg,
                simples,
                psubs,
                wcells,
                wlist,
            });
        }
        let rep_local: Vec<usize> = reps
            .idems
            .iter()
            .map(|&e| idems.iter().position(|&x| x == e).expect("rep is an idempotent"))
            .collect();
        for (e_idx, &li) in rep_local.iter().enumerate() {
            assert_eq!(
                locals[li].psubs, reps.psubs[e_idx],
                "representative subgroup lists agree"
            );
        }

        // The weight catalog shares the representatives' cells.
        let weights = {
            let cells: Vec<Vec<WeightCell>> = rep_local
                .iter()
                .map(|&li| locals[li].wcells.clone())
                .collect();
            let mut entries = vec![];
            for (e_idx, row) in cells.iter().enumerate() {
                for (p_idx, cell) in row.iter().enumerate() {
                    for (k, &sidx) in cell.projective.iter().enumerate() {
                        entries.push(WeightEntry {
                            e_idx,
                            p_idx,
                            s_idx: k,
                            dim: cell.simples[sidx].dim,
                            block: None,
                        });
                    }
                }
            }
            WeightCatalog {
                cells,
                entries,
                field: field.clone(),
                p,
            }
        };

        let pairs: Vec<PairEntry> = rep_local
            .iter()
            .enumerate()
            .flat_map(|(e_idx, &li)| {
                (0..locals[li].simples.len()).map(move |s_idx| PairEntry {
                    e_idx,
                    s_idx,
                    block: None,
                })
            })
            .collect();

        // Simple kC-modules and the direct parametrisation.
        let kc = category_algebra(&cat, field.clone());
        let reg = ModuleRep::regular(&kc);
        let kc_simples: Vec<ModuleRep> = composition_factors(&reg, &kc, &mut rng, budget)?
            .into_iter()
            .map(|(s, _)| s)
            .collect();
        if kc_simples.len() != pairs.len() {
            return Err(Error::ParametrizationMismatch(format!(
                "direct simple count {} vs indirect pair count {}",
                kc_simples.len(),
                pairs.len()
            )));
        }
        let mut pi_map = vec![usize::MAX; kc_simples.len()];
        for (i, s) in kc_simples.iter().enumerate() {
            let (e_idx, s_idx) =
                project_simple(&cat, &reps, &locals, &rep_local, s, &field, &mut rng)?;
            pi_map[i] = pairs
                .iter()
                .position(|pe| (pe.e_idx, pe.s_idx) == (e_idx, s_idx))
                .expect("pair entry exists");
        }
        {
            let mut used = vec![false; pairs.len()];
            for &t in &pi_map {
                if used[t] {
                    return Err(Error::ParametrizationMismatch(
                        "direct parametrisation is not injective".into(),
                    ));
                }
                used[t] = true;
            }
        }

        // Blocks of kC, pair block labels through the direct route, weight
        // block labels through the b-weight test (EI only).
        let is_ei = cat.is_ei();
        let blocks = kc.primitive_central_idempotents(&mut rng);
        let mut pairs = pairs;
        let mut weights = weights;
        for (i, s) in kc_simples.iter().enumerate() {
            let mut hit = None;
            for (bi, b) in blocks.iter().enumerate() {
                if !s.act(&b.coeffs, &field).is_zero() {
                    assert!(hit.is_none(), "blocks are orthogonal");
                    hit = Some(bi);
                }
            }
            pairs[pi_map[i]].block = Some(hit.expect("every simple lies in a block"));
        }
        if is_ei {
            // Blockwise reconciliation: the label through e*b acting on T
            // matches the label through b acting on S.
            for pe in &pairs {
                let local = &locals[rep_local[pe.e_idx]];
                let e = local.idem;
                let eb_hits: Vec<usize> = blocks
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| {
                        let eb = kc.mul_vec(&kc.basis_vec(e.morph), &b.coeffs);
                        let loc = restrict_to_group(&local.max_sub, &eb)
                            .expect("e b lies in kG_e for EI categories");
                        !local.simples[pe.s_idx].act(&loc, &field).is_zero()
                    })
                    .map(|(bi, _)| bi)
                    .collect();
                if eb_hits != vec![pe.block.unwrap()] {
                    return Err(Error::ParametrizationMismatch(
                        "blockwise pair labels disagree between the two routes".into(),
                    ));
                }
            }
            crate::weights::assign_blocks(&cat, &kc, &blocks, &reps, &mut weights)?;
        }

        // Galois permutations for every power of the Frobenius.
        let mut galois_simples = vec![];
        let mut galois_pairs = vec![];
        let mut galois_weights = vec![];
        for j in 0..m {
            galois_simples.push(crate::grouprep::frobenius_perm(
                &kc_simples,
                &kc,
                j,
                &mut rng,
            )?);
            let mut pp = vec![0; pairs.len()];
            for (idx, pe) in pairs.iter().enumerate() {
                let local = &locals[rep_local[pe.e_idx]];
                let tw =
                    local.simples[pe.s_idx].frobenius_twist(&local.alg, GaloisElement { j })?;
                let s_idx = local
                    .simples
                    .iter()
                    .position(|t| module_isomorphic(&tw, t, &local.alg, &mut rng).is_some())
                    .ok_or_else(|| Error::CatalogMissingImage("twist of a pair".into()))?;
                pp[idx] = pairs
                    .iter()
                    .position(|q| (q.e_idx, q.s_idx) == (pe.e_idx, s_idx))
                    .expect("pair entry exists");
            }
            galois_pairs.push(pp);
            galois_weights.push(galois_action_on_weights(&weights, j, &mut rng)?);
        }
        // Pi commutes with the Galois action (theorem-backed; verified).
        for j in 0..m as usize {
            for i in 0..kc_simples.len() {
                if pi_map[galois_simples[j][i]] != galois_pairs[j][pi_map[i]] {
                    return Err(Error::ParametrizationMismatch(
                        "Pi does not commute with the Galois action".into(),
                    ));
                }
            }
        }

        // Automorphism actions (optional).
        let auts = match cat.enumerate_automorphisms(aut_cap) {
            Err(Error::AutCapExceeded { .. }) => None,
            Err(e) => return Err(e),
            Ok(auts) => {
                let group = aut_group(&cat, &auts);
                let mut on_simples = vec![];
                let mut on_pairs = vec![];
                let mut on_weights = vec![];
                for aut in &auts {
                    let mut sp = vec![0; kc_simples.len()];
                    for (i, s) in kc_simples.iter().enumerate() {
                        let t = transport_module(s, &aut.mor_map, kc.dim);
                        sp[i] = kc_simples
                            .iter()
                            .position(|u| module_isomorphic(&t, u, &kc, &mut rng).is_some())
                            .ok_or_else(|| {
                                Error::CatalogMissingImage(
                                    "automorphism image of a simple".into(),
                                )
                            })?;
                    }
                    let pp =
                        aut_on_pairs(&cat, &reps, &locals, &rep_local, &pairs, aut, &mut rng)?;
                    for i in 0..kc_simples.len() {
                        if pi_map[sp[i]] != pp[pi_map[i]] {
                            return Err(Error::ParametrizationMismatch(
                                "Pi does not commute with the automorphism action".into(),
                            ));
                        }
                    }
                    on_simples.push(sp);
                    on_pairs.push(pp);
                    on_weights.push(aut_action_on_weights(
                        &cat, &reps, &weights, aut, &mut rng,
                    )?);
                }
                Some(AutData {
                    auts,
                    group,
                    on_simples,
                    on_pairs,
                    on_weights,
                })
            }
        };

        Ok(Instance {
            cat,
            p,
            m,
            field,
            seed,
            budget,
            is_ei,
            reps,
            locals,
            rep_local,
            kc,
            kc_simples,
            pi_map,
            pairs,
            weights,
            blocks,
            galois_simples,
            galois_pairs,
            galois_weights,
            auts,
        })
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ 0x9e37_79b9_7f4a_7c15)
    }

    pub fn cell(&self, e_idx: usize) -> &LocalData {
        &self.locals[self.rep_local[e_idx]]
    }

    pub fn local_index(&self, e: Idempotent) -> Result<usize> {
        self.locals
            .iter()
            .position(|l| l.idem == e)
            .ok_or_else(|| Error::BadInput("not an idempotent of this category".into()))
    }

    /// Exponents j with frob^j(b) = b; Gamma_b is generated by the smallest
    /// positive one.
    pub fn galois_stabilizer_of_block(&self, b: &BlockIdem) -> Vec<u32> {
        (0..self.m)
            .filter(|&j| self.kc.frobenius_vec(&b.coeffs, j) == b.coeffs)
            .collect()
    }

    pub fn aut_image_of_vec(&self, aut: &CatAutomorphism, b: &[u64]) -> Vec<u64> {
        let mut out = vec![0; b.len()];
        for (i, &c) in b.iter().enumerate() {
            out[aut.mor_map[i]] = c;
        }
        out
    }

    /// Indices of kc_simples lying in block `bi`.
    pub fn block_simples(&self, bi: usize) -> Vec<usize> {
        (0..self.kc_simples.len())
            .filter(|&i| self.pairs[self.pi_map[i]].block == Some(bi))
            .collect()
    }

    /// Indices of weight entries labelled with block `bi`.
    pub fn block_weights(&self, bi: usize) -> Vec<usize> {
        self.weights
            .entries
            .iter()
            .enumerate()
            .filter(|(_, w)| w.block == Some(bi))
            .map(|(i, _)| i)
            .collect()
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn aut_group(cat: &FinCategory, auts: &[CatAutomorphism]) -> FinGroup {
    let n = auts.len();
    let labels = (0..n).map(|i| format!("F{i}")).collect();
    let mut table = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            let c = cat.compose_automorphisms(&auts[a], &auts[b]);
            table[a * n + b] = auts.iter().position(|x| *x == c).expect("Aut is closed");
        }
    }
    let unit = auts
        .iter()
        .position(|a| *a == cat.identity_automorphism())
        .expect("identity automorphism is enumerated");
    FinGroup::from_table(labels, table, unit).expect("Aut(C) is a group")
}

/// Restrict a kC coefficient vector supported on G_e to kG_e coordinates.
fn restrict_to_group(g: &MaxSubgroup, v: &[u64]) -> Option<Vec<u64>> {
    let mut local = vec![0; g.elements.len()];
    for (m, &c) in v.iter().enumerate() {
        if c != 0 {
            let gi = g.elements.iter().position(|&x| x == m)?;
            local[gi] = c;
        }
    }
    Some(local)
}

/// Direct route of Pi for one simple kC-module: the minimal idempotent e
/// with eS != 0 and the class of eS in the cell of e's representative.
fn project_simple(
    cat: &FinCategory,
    reps: &RepSystem,
    locals: &[LocalData],
    rep_local: &[usize],
    s: &ModuleRep,
    field: &Field,
    rng: &mut impl RngCore,
) -> Result<(usize, usize)> {
    let idems = cat.idempotent_endos();
    let nonzero: Vec<Idempotent> = idems
        .iter()
        .copied()
        .filter(|e| !s.mats[e.morph].is_zero())
        .collect();
    let leq = |a: &Idempotent, b: &Idempotent| {
        a.object == b.object
            && cat.compose(a.morph, b.morph) == Some(a.morph)
            && cat.compose(b.morph, a.morph) == Some(a.morph)
    };
    let e_min = *nonzero
        .iter()
        .find(|e| !nonzero.iter().any(|d| d != *e && leq(d, e)))
        .expect("a simple module has a minimal supporting idempotent");
    // eS as a kG_{e_min}-module.
    let g = cat.maximal_subgroup(e_min);
    let image = &s.mats[e_min.morph];
    let mut span = Subspace::new(s.dim);
    for c in 0..image.cols {
        span.insert(&image.col(c), field);
    }
    let basis = span.basis_mat();
    let mats: Vec<Mat> = g
        .elements
        .iter()
        .map(|&x| {
            basis
                .solve(&s.mats[x].mul(&basis, field), field)
                .expect("eS is stable under G_e")
        })
        .collect();
    let es_mod = ModuleRep {
        dim: basis.cols,
        mats,
    };
    let e_idx = reps
        .idems
        .iter()
        .position(|&r| cat.idempotents_isomorphic(e_min, r).is_some())
        .expect("representative exists");
    let local = &locals[rep_local[e_idx]];
    let transported = if reps.idems[e_idx] == e_min {
        es_mod
    } else {
        let w = cat
            .idempotents_isomorphic(e_min, reps.idems[e_idx])
            .unwrap();
        lambda_transport(
            cat,
            &TwoCocycle::trivial(field.p()),
            &w,
            &g,
            &local.max_sub,
            &es_mod,
            field,
        )
    };
    let s_idx = local
        .simples
        .iter()
        .position(|t| module_isomorphic(&transported, t, &local.alg, rng).is_some())
        .ok_or_else(|| {
            Error::ParametrizationMismatch("eS does not match any simple kG_e-module".into())
        })?;
    Ok((e_idx, s_idx))
}

/// The automorphism action on the pair catalog:
/// (e, T) -> (e', Lambda(T ∘ F^{-1})) with e' the representative of F(e).
fn aut_on_pairs(
    cat: &FinCategory,
    reps: &RepSystem,
    locals: &[LocalData],
    rep_local: &[usize],
    pairs: &[PairEntry],
    aut: &CatAutomorphism,
    rng: &mut impl RngCore,
) -> Result<Vec<usize>> {
    let field = locals[0].alg.field.clone();
    let mut out = vec![0; pairs.len()];
    for (idx, pe) in pairs.iter().enumerate() {
        let local = &locals[rep_local[pe.e_idx]];
        let fe = cat.apply_to_idempotent(aut, local.idem);
        let fg = cat.apply_to_subgroup(aut, &local.max_sub);
        let ft = relabel_group_module(
            &local.max_sub,
            &fg,
            &local.simples[pe.s_idx],
            |x| aut.mor_map[x],
        );
        let e_idx = reps
            .idems
            .iter()
            .position(|&r| cat.idempotents_isomorphic(fe, r).is_some())
            .ok_or_else(|| Error::CatalogMissingImage("class of F(e)".into()))?;
        let dst = &locals[rep_local[e_idx]];
        let transported = if reps.idems[e_idx] == fe {
            ft
        } else {
            let w = cat.idempotents_isomorphic(fe, reps.idems[e_idx]).unwrap();
            lambda_transport(
                cat,
                &TwoCocycle::trivial(field.p()),
                &w,
                &fg,
                &dst.max_sub,
                &ft,
                &field,
            )
        };
        let s_idx = dst
            .simples
            .iter()
            .position(|t| module_isomorphic(&transported, t, &dst.alg, rng).is_some())
            .ok_or_else(|| Error::CatalogMissingImage("class of the transported pair".into()))?;
        out[idx] = pairs
            .iter()
            .position(|q| (q.e_idx, q.s_idx) == (e_idx, s_idx))
            .expect("pair entry exists");
    }
    Ok(out)
}

/// Relabel a kG_e-module along a bijection of group element morphisms
/// G_e -> G_f: the matrix at f(x) is the matrix at x.
fn relabel_group_module(
    src: &MaxSubgroup,
    dst: &MaxSubgroup,
    m: &ModuleRep,
    map: impl Fn(usize) -> usize,
) -> ModuleRep {
    let mut mats = vec![Mat::zero(m.dim, m.dim); dst.elements.len()];
    for (i, &x) in src.elements.iter().enumerate() {
        let y = map(x);
        let yi = dst
            .elements
            .iter()
            .position(|&z| z == y)
            .expect("map lands in the destination group");
        mats[yi] = m.mats[i].clone();
    }
    ModuleRep { dim: m.dim, mats }
}

/// The Galois action of Z/m on a catalog, as a GroupAction.
pub fn galois_action(m: u32, perms: &[Vec<usize>]) -> GroupAction {
    GroupAction::new(cyclic_group(m as usize), perms.to_vec())
}

/// Restrict a permutation of the full index set to a stable subset,
/// renumbering by position in `subset`.
pub fn restrict_perm(perm: &[usize], subset: &[usize]) -> Vec<usize> {
    subset
        .iter()
        .map(|&i| {
            subset
                .iter()
                .position(|&j| j == perm[i])
                .expect("subset is stable under the permutation")
        })
        .collect()
}

/// Check one of the conjecture modes at instance level.
#[derive(Debug, Clone, Serialize)]
pub struct ModeReport {
    pub mode: String,
    pub verdict: bool,
    pub counts: (usize, usize),
    pub reports: Vec<EquivarianceReport>,
}

impl Instance {
    /// AWC: plain count equality.
    pub fn check_awc(&self) -> ModeReport {
        let l = self.kc_simples.len();
        let r = self.weights.len();
        ModeReport {
            mode: "awc".into(),
            verdict: l == r,
            counts: (l, r),
            reports: vec![],
        }
    }

    /// GAWC: a Gamma-equivariant bijection S(kC) -> W(kO_C) exists.
    pub fn check_gawc(&self) -> ModeReport {
        let left = galois_action(self.m, &self.galois_simples);
        let right = galois_action(self.m, &self.galois_weights);
        let report = check_equivariance(&format!("Gamma = Z/{}", self.m), &left, &right);
        ModeReport {
            mode: "gawc".into(),
            verdict: report.equivariant_bijection_exists,
            counts: (left.degree(), right.degree()),
            reports: vec![report],
        }
    }

    /// Aut(C)-equivariant bijection S(kC) -> W(kO_C) exists.
    pub fn check_aut(&self) -> Result<ModeReport> {
        let auts = self.auts.as_ref().ok_or(Error::GroupUnavailable)?;
        let left = GroupAction::new(auts.group.clone(), auts.on_simples.clone());
        let right = GroupAction::new(auts.group.clone(), auts.on_weights.clone());
        let report = check_equivariance(
            &format!("Aut(C) of order {}", auts.auts.len()),
            &left,
            &right,
        );
        Ok(ModeReport {
            mode: "aut".into(),
            verdict: report.equivariant_bijection_exists,
            counts: (left.degree(), right.degree()),
            reports: vec![report],
        })
    }

    /// BGAWC: per block b, a Gamma_b-equivariant bijection between the
    /// block's simples and its b-weights. EI only.
    pub fn check_bgawc(&self, block_filter: Option<usize>) -> Result<ModeReport> {
        if !self.is_ei {
            return Err(Error::NotEI);
        }
        let mut reports = vec![];
        let mut verdict = true;
        let mut counts = (0, 0);
        for (bi, b) in self.blocks.iter().enumerate() {
            if block_filter.is_some_and(|f| f != bi) {
                continue;
            }
            let stab = self.galois_stabilizer_of_block(b);
            let ls = self.block_simples(bi);
            let ws = self.block_weights(bi);
            counts.0 += ls.len();
            counts.1 += ws.len();
            let d = stab.iter().copied().filter(|&j| j > 0).min().unwrap_or(0);
            let order = if d == 0 { 1 } else { self.m / d };
            let group = cyclic_group(order as usize);
            let left_perms: Vec<Vec<usize>> = (0..order)
                .map(|k| {
                    restrict_perm(
                        &self.galois_simples[(k * d) as usize % self.m as usize],
                        &ls,
                    )
                })
                .collect();
            let right_perms: Vec<Vec<usize>> = (0..order)
                .map(|k| {
                    restrict_perm(
                        &self.galois_weights[(k * d) as usize % self.m as usize],
                        &ws,
                    )
                })
                .collect();
            let left = GroupAction::new(group.clone(), left_perms);
            let right = GroupAction::new(group, right_perms);
            let report = check_equivariance(
                &format!("Gamma_b (block {bi}), order {order}"),
                &left,
                &right,
            );
            verdict &= report.equivariant_bijection_exists && ls.len() == ws.len();
            reports.push(report);
        }
        Ok(ModeReport {
            mode: "bgawc".into(),
            verdict,
            counts,
            reports,
        })
    }
}

/// An assembled bijection kc_simples -> weight entries with its audit data.
#[derive(Debug, Clone, Serialize)]
pub struct Assembly {
    /// pairing[i] = weight entry index of the i-th simple (usize::MAX when
    /// the simple lies outside the selected block).
    pub pairing: Vec<usize>,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub group_level: Vec<EquivarianceReport>,
    pub equivariance_audited: bool,
}

impl Instance {
    /// Theorem-main assembly: glue Gamma-equivariant per-idempotent
    /// bijections Omega_e into Sigma ∘ Pi and audit the result. With a block
    /// selected (EI only) this is the Theorem-main2 blockwise assembly under
    /// Gamma_b.
    pub fn assemble_main(&self, block: Option<usize>) -> Result<Assembly> {
        if block.is_some() && !self.is_ei {
            return Err(Error::NotEI);
        }
        // Acting exponent step d: full Gamma for no block, Gamma_b else.
        let d = match block {
            None => 1u32,
            Some(bi) => {
                let stab = self.galois_stabilizer_of_block(&self.blocks[bi]);
                stab.iter().copied().filter(|&j| j > 0).min().unwrap_or(0)
            }
        };
        let order = if d == 0 { 1 } else { self.m / d };
        let group = cyclic_group(order as usize);
        let in_block = |b: Option<usize>| move |x: Option<usize>| b.is_none() || x == b;

        // Per representative idempotent: a Gamma_(b)-equivariant bijection
        // from the cell's pair entries to the cell's weight entries.
        let mut group_level = vec![];
        let mut sigma = vec![usize::MAX; self.pairs.len()];
        for e_idx in 0..self.reps.idems.len() {
            let lp: Vec<usize> = (0..self.pairs.len())
                .filter(|&i| {
                    self.pairs[i].e_idx == e_idx && in_block(block)(self.pairs[i].block)
                })
                .collect();
            let rp: Vec<usize> = (0..self.weights.entries.len())
                .filter(|&i| {
                    self.weights.entries[i].e_idx == e_idx
                        && in_block(block)(self.weights.entries[i].block)
                })
                .collect();
            let left_perms: Vec<Vec<usize>> = (0..order)
                .map(|k| {
                    restrict_perm(&self.galois_pairs[(k * d) as usize % self.m as usize], &lp)
                })
                .collect();
            let right_perms: Vec<Vec<usize>> = (0..order)
                .map(|k| {
                    restrict_perm(
                        &self.galois_weights[(k * d) as usize % self.m as usize],
                        &rp,
                    )
                })
                .collect();
            let left = GroupAction::new(group.clone(), left_perms);
            let right = GroupAction::new(group.clone(), right_perms);
            let report = check_equivariance(
                &format!("group level at idempotent {e_idx}"),
                &left,
                &right,
            );
            if !report.equivariant_bijection_exists {
                return Err(Error::GroupLevelObstruction {
                    idem: self.cat.mor_labels[self.reps.idems[e_idx].morph].clone(),
                    detail: format!(
                        "fixed points {:?}",
                        report.fixed_points
                    ),
                });
            }
            let local_pairing = equivariant_pairing(&left, &right)
                .expect("criterion passed, pairing must exist");
            for (li, &pi_idx) in lp.iter().enumerate() {
                sigma[pi_idx] = rp[local_pairing[li]];
            }
            group_level.push(report);
        }

        // Sigma ∘ Pi on the selected simples.
        let left: Vec<usize> = (0..self.kc_simples.len())
            .filter(|&i| in_block(block)(self.pairs[self.pi_map[i]].block))
            .collect();
        let mut pairing = vec![usize::MAX; self.kc_simples.len()];
        for &i in &left {
            pairing[i] = sigma[self.pi_map[i]];
        }
        let right: Vec<usize> = {
            let mut r: Vec<usize> = left.iter().map(|&i| pairing[i]).collect();
            r.sort();
            r
        };
        // Audit: bijection and full equivariance of the composed map.
        {
            let mut seen = right.clone();
            seen.dedup();
            if seen.len() != left.len() {
                return Err(Error::ParametrizationMismatch(
                    "assembled map is not a bijection".into(),
                ));
            }
        }
        for k in 0..order {
            let j = (k * d) as usize % self.m as usize;
            for &i in &left {
                if pairing[self.galois_simples[j][i]] != self.galois_weights[j][pairing[i]] {
                    return Err(Error::ParametrizationMismatch(format!(
                        "assembled map is not equivariant at frob^{j}"
                    )));
                }
            }
        }
        Ok(Assembly {
            pairing,
            left,
            right,
            group_level,
            equivariance_audited: true,
        })
    }
}

// ---------------------------------------------------------------------------
// Families of per-idempotent bijections and the Theorem-main3 machinery.
// ---------------------------------------------------------------------------

/// A family of per-idempotent bijections Omega_e from (block-filtered)
/// local simple indices to (block-filtered) local weight indices, indexed
/// like `Instance::locals`. Entries outside the block are usize::MAX.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaFamily {
    pub maps: Vec<Vec<usize>>,
    pub block: Option<usize>,
}

/// The product group (H x Aut(C))_b: elements are (frobenius exponent,
/// automorphism index) pairs closed under multiplication.
#[derive(Debug, Clone)]
pub struct ProductStabilizer {
    pub elems: Vec<(u32, usize)>,
    pub group: FinGroup,
}

impl Instance {
    /// Elements of (H x Aut(C))_b where H = <frob^h_gen>.
    pub fn product_stabilizer(&self, h_gen: u32, block: Option<usize>) -> Result<ProductStabilizer> {
        let auts = self.auts.as_ref().ok_or(Error::GroupUnavailable)?;
        let h: Vec<u32> = if h_gen == 0 {
            vec![0]
        } else {
            (0..self.m).step_by(h_gen as usize).collect()
        };
        let mut elems = vec![];
        for &j in &h {
            for (ai, aut) in auts.auts.iter().enumerate() {
                let keep = match block {
                    None => true,
                    Some(bi) => {
                        let fb = self.aut_image_of_vec(aut, &self.blocks[bi].coeffs);
                        self.kc.frobenius_vec(&fb, j) == self.blocks[bi].coeffs
                    }
                };
                if keep {
                    elems.push((j, ai));
                }
            }
        }
        let n = elems.len();
        let labels = elems.iter().map(|(j, a)| format!("(f{j},F{a})")).collect();
        let mut table = vec![0; n * n];
        for (x, &(j1, a1)) in elems.iter().enumerate() {
            for (y, &(j2, a2)) in elems.iter().enumerate() {
                let j = (j1 + j2) % self.m;
                let a = auts.group.mul(a1, a2);
                table[x * n + y] = elems
                    .iter()
                    .position(|&(jj, aa)| (jj, aa) == (j, a))
                    .expect("stabilizer is closed");
            }
        }
        let unit = elems
            .iter()
            .position(|&(j, a)| j == 0 && a == auts.group.unit)
            .expect("unit element present");
        let group = FinGroup::from_table(labels, table, unit)?;
        Ok(ProductStabilizer { elems, group })
    }

    /// Local simple indices at `li` belonging to the block (via e*b).
    pub fn local_block_pairs(&self, li: usize, block: Option<usize>) -> Result<Vec<usize>> {
        let local = &self.locals[li];
        match block {
            None => Ok((0..local.simples.len()).collect()),
            Some(bi) => {
                let eb = self
                    .kc
                    .mul_vec(&self.kc.basis_vec(local.idem.morph), &self.blocks[bi].coeffs);
                let loc =
                    restrict_to_group(&local.max_sub, &eb).ok_or(Error::NotCentralInGe)?;
                Ok((0..local.simples.len())
                    .filter(|&i| !local.simples[i].act(&loc, &self.field).is_zero())
                    .collect())
            }
        }
    }

    /// Local weight-list indices at `li` belonging to the block.
    pub fn local_block_weights(&self, li: usize, block: Option<usize>) -> Result<Vec<usize>> {
        let local = &self.locals[li];
        match block {
            None => Ok((0..local.wlist.len()).collect()),
            Some(bi) => {
                let mut out = vec![];
                for (w_idx, &(p_idx, k)) in local.wlist.iter().enumerate() {
                    if b_weight_test(
                        &self.cat,
                        &self.kc,
                        &self.blocks[bi].coeffs,
                        local.idem,
                        &local.wcells[p_idx],
                        k,
                    )? {
                        out.push(w_idx);
                    }
                }
                Ok(out)
            }
        }
    }

    /// Identify a weight (exact idempotent of locals[li], subgroup q_set,
    /// module over its quotient) within the local weight list, conjugating
    /// the subgroup into the local representative list.
    fn local_canonicalize_weight(
        &self,
        li: usize,
        q_set: &[usize],
        t_mod: &ModuleRep,
        rng: &mut impl RngCore,
    ) -> Result<(usize, usize)> {
        let cat = &self.cat;
        let local = &self.locals[li];
        let e = local.idem;
        let trivial = TwoCocycle::trivial(self.p);
        let mut found = None;
        'outer: for (p_idx, rep_set) in local.psubs.iter().enumerate() {
            if rep_set.len() != q_set.len() {
                continue;
            }
            for &g in &local.max_sub.elements {
                let ginv = local
                    .max_sub
                    .elements
                    .iter()
                    .copied()
                    .find(|&h| {
                        cat.compose(g, h) == Some(e.morph) && cat.compose(h, g) == Some(e.morph)
                    })
                    .expect("invertible");
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
        let (p_idx, g, ginv) =
            found.ok_or_else(|| Error::CatalogMissingImage("local subgroup class".into()))?;
        let w = IdemIsoWitness {
            s: g,
            t: ginv,
            source: e,
            target: e,
        };
        let (q0, _dst, t2) = omega_transport(cat, &trivial, &w, q_set, t_mod, &self.field)?;
        debug_assert_eq!(&q0, &local.psubs[p_idx]);
        let cell = &local.wcells[p_idx];
        let k = cell
            .projective
            .iter()
            .position(|&si| module_isomorphic(&t2, &cell.simples[si], &cell.alg, rng).is_some())
            .ok_or_else(|| Error::CatalogMissingImage("local projective class".into()))?;
        let w_idx = local
            .wlist
            .iter()
            .position(|&(pj, kk)| (pj, kk) == (p_idx, k))
            .expect("weight list covers the cell");
        Ok((w_idx, p_idx))
    }

    /// The (sigma, F) cross-action on local simples: from locals[src] to
    /// locals[dst] with dst the exact image idempotent.
    pub fn cross_pairs(
        &self,
        j: u32,
        aut: &CatAutomorphism,
        src: usize,
        rng: &mut impl RngCore,
    ) -> Result<(usize, Vec<usize>)> {
        let cat = &self.cat;
        let l = &self.locals[src];
        let fe = cat.apply_to_idempotent(aut, l.idem);
        let dst = self.local_index(fe)?;
        let d = &self.locals[dst];
        let fg = cat.apply_to_subgroup(aut, &l.max_sub);
        let mut map = vec![0; l.simples.len()];
        for (i, s) in l.simples.iter().enumerate() {
            let ft = relabel_group_module(&l.max_sub, &fg, s, |x| aut.mor_map[x]);
            debug_assert_eq!(fg.elements, d.max_sub.elements);
            let tw = ft.frobenius_twist(&d.alg, GaloisElement { j })?;
            map[i] = d
                .simples
                .iter()
                .position(|t| module_isomorphic(&tw, t, &d.alg, rng).is_some())
                .ok_or_else(|| Error::CatalogMissingImage("cross image of a simple".into()))?;
        }
        Ok((dst, map))
    }

    /// The (sigma, F) cross-action on local weights.
    pub fn cross_weights(
        &self,
        j: u32,
        aut: &CatAutomorphism,
        src: usize,
        rng: &mut impl RngCore,
    ) -> Result<(usize, Vec<usize>)> {
        let cat = &self.cat;
        let l = &self.locals[src];
        let fe = cat.apply_to_idempotent(aut, l.idem);
        let dst = self.local_index(fe)?;
        let mut map = vec![0; l.wlist.len()];
        for (w_idx, &(p_idx, k)) in l.wlist.iter().enumerate() {
            let cell = &l.wcells[p_idx];
            let mut fp: Vec<usize> = l.psubs[p_idx].iter().map(|&x| aut.mor_map[x]).collect();
            fp.sort();
            let dst_oms = orbit_max_subgroup(cat, fe, &fp)?;
            // Quotient transport along F.
            let mut qmap = vec![usize::MAX; cell.oms.quotient.n];
            for n_idx in 0..cell.oms.n_group.n {
                let x = cell.oms.n_morph(n_idx);
                let y = aut.mor_map[x];
                let c_src = cell.oms.proj[n_idx];
                let c_dst = dst_oms
                    .coset_of_morph(y)
                    .expect("F image lies in the normalizer");
                if qmap[c_src] == usize::MAX {
                    qmap[c_src] = c_dst;
                } else {
                    assert_eq!(qmap[c_src], c_dst);
                }
            }
            let src_mod = &cell.simples[cell.projective[k]];
            let mut mats = vec![Mat::zero(src_mod.dim, src_mod.dim); dst_oms.quotient.n];
            for c in 0..cell.oms.quotient.n {
                mats[qmap[c]] = src_mod.mats[c].clone();
            }
            let ft = ModuleRep {
                dim: src_mod.dim,
                mats,
            };
            // Twist entries by frob^j (quotient group algebra is rational).
            let qalg = group_algebra(&dst_oms.quotient, self.field.clone());
            let tw = ft.frobenius_twist(&qalg, GaloisElement { j })?;
            let (w_dst, _) = self.local_canonicalize_weight(dst, &fp, &tw, rng)?;
            map[w_idx] = w_dst;
        }
        Ok((dst, map))
    }

    /// Lambda_{e,f} on local simple indices for isomorphic idempotents.
    pub fn local_lambda(
        &self,
        src: usize,
        dst: usize,
        rng: &mut impl RngCore,
    ) -> Result<Vec<usize>> {
        let cat = &self.cat;
        let l = &self.locals[src];
        let d = &self.locals[dst];
        let w = cat
            .idempotents_isomorphic(l.idem, d.idem)
            .ok_or_else(|| Error::BadInput("idempotents are not isomorphic".into()))?;
        lambda_class_map(
            cat,
            &TwoCocycle::trivial(self.p),
            &w,
            &l.max_sub,
            &d.max_sub,
            &l.simples,
            &d.simples,
            &d.alg,
            rng,
        )
    }

    /// Omega_{e,f} on local weight indices for isomorphic idempotents.
    pub fn local_omega_ef(
        &self,
        src: usize,
        dst: usize,
        rng: &mut impl RngCore,
    ) -> Result<Vec<usize>> {
        let cat = &self.cat;
        let l = &self.locals[src];
        let d = &self.locals[dst];
        let w = cat
            .idempotents_isomorphic(l.idem, d.idem)
            .ok_or_else(|| Error::BadInput("idempotents are not isomorphic".into()))?;
        let trivial = TwoCocycle::trivial(self.p);
        let mut out = vec![0; l.wlist.len()];
        for (w_idx, &(p_idx, k)) in l.wlist.iter().enumerate() {
            let cell = &l.wcells[p_idx];
            let t_mod = &cell.simples[cell.projective[k]];
            let (q_set, _dst_oms, t1) =
                omega_transport(cat, &trivial, &w, &l.psubs[p_idx], t_mod, &self.field)?;
            let di = self.local_index(d.idem)?;
            let (w_dst, _) = self.local_canonicalize_weight(di, &q_set, &t1, rng)?;
            out[w_idx] = w_dst;
        }
        Ok(out)
    }

    /// Initial family: for every idempotent, an (H x Aut(G_e))_{be}-
    /// equivariant bijection built by stabilizer-matched orbit pairing.
    pub fn initial_family(
        &self,
        h_gen: u32,
        block: Option<usize>,
        aut_cap: u64,
        rng: &mut impl RngCore,
    ) -> Result<OmegaFamily> {
        let mut maps = vec![];
        for li in 0..self.locals.len() {
            let local = &self.locals[li];
            let lp = self.local_block_pairs(li, block)?;
            let lw = self.local_block_weights(li, block)?;
            // Acting group: pairs (frobenius exponent in H, group
            // automorphism of G_e) stabilising e*b.
            let gauts = local.group.automorphisms(aut_cap)?;
            let h: Vec<u32> = if h_gen == 0 {
                vec![0]
            } else {
                (0..self.m).step_by(h_gen as usize).collect()
            };
            let eb_local: Option<Vec<u64>> = match block {
                None => None,
                Some(bi) => {
                    let eb = self.kc.mul_vec(
                        &self.kc.basis_vec(local.idem.morph),
                        &self.blocks[bi].coeffs,
                    );
                    Some(restrict_to_group(&local.max_sub, &eb).ok_or(Error::NotCentralInGe)?)
                }
            };
            let mut elems: Vec<(u32, usize)> = vec![];
            for &j in &h {
                for (gi, gaut) in gauts.iter().enumerate() {
                    let keep = match &eb_local {
                        None => true,
                        Some(eb) => {
                            let mut fb = vec![0; eb.len()];
                            for (i, &c) in eb.iter().enumerate() {
                                fb[gaut[i]] = c;
                            }
                            local.alg.frobenius_vec(&fb, j) == *eb
                        }
                    };
                    if keep {
                        elems.push((j, gi));
                    }
                }
            }
            // Group table on the element list.
            let n = elems.len();
            let labels = elems.iter().map(|(j, a)| format!("(f{j},a{a})")).collect();
            let mut table = vec![0; n * n];
            let compose_gaut = |a: &[usize], b: &[usize]| -> Vec<usize> {
                b.iter().map(|&x| a[x]).collect()
            };
            for (x, &(j1, a1)) in elems.iter().enumerate() {
                for (y, &(j2, a2)) in elems.iter().enumerate() {
                    let j = (j1 + j2) % self.m;
                    let a = compose_gaut(&gauts[a1], &gauts[a2]);
                    let ai = gauts.iter().position(|g| *g == a).expect("Aut closed");
                    table[x * n + y] = elems
                        .iter()
                        .position(|&(jj, aa)| (jj, aa) == (j, ai))
                        .expect("stabilizer closed");
                }
            }
            let unit = elems
                .iter()
                .position(|&(j, a)| j == 0 && gauts[a] == (0..local.group.n).collect::<Vec<_>>())
                .expect("unit present");
            let group = FinGroup::from_table(labels, table, unit)?;
            // Permutations on the block-filtered local lists.
            let mut left_perms = vec![];
            let mut right_perms = vec![];
            for &(j, gi) in &elems {
                let full_l = self.local_pair_perm_under_group_aut(li, j, &gauts[gi], rng)?;
                let full_w = self.local_weight_perm_under_group_aut(li, j, &gauts[gi], rng)?;
                left_perms.push(restrict_perm(&full_l, &lp));
                right_perms.push(restrict_perm(&full_w, &lw));
            }
            let left = GroupAction::new(group.clone(), left_perms);
            let right = GroupAction::new(group, right_perms);
            let report = check_equivariance("group level", &left, &right);
            if !report.equivariant_bijection_exists {
                return Err(Error::GroupLevelObstruction {
                    idem: self.cat.mor_labels[local.idem.morph].clone(),
                    detail: format!("fixed points {:?}", report.fixed_points),
                });
            }
            let pairing = equivariant_pairing(&left, &right)
                .expect("criterion passed, pairing must exist");
            let mut map = vec![usize::MAX; local.simples.len()];
            for (i, &pi) in lp.iter().enumerate() {
                map[pi] = lw[pairing[i]];
            }
            maps.push(map);
        }
        Ok(OmegaFamily { maps, block })
    }

    /// Permutation of local simples under (frob^j, group automorphism).
    pub fn local_pair_perm_under_group_aut(
        &self,
        li: usize,
        j: u32,
        gaut: &[usize],
        rng: &mut impl RngCore,
    ) -> Result<Vec<usize>> {
        let local = &self.locals[li];
        let mut out = vec![0; local.simples.len()];
        for (i, s) in local.simples.iter().enumerate() {
            let relabeled = transport_module(s, gaut, local.group.n);
            let tw = relabeled.frobenius_twist(&local.alg, GaloisElement { j })?;
            out[i] = local
                .simples
                .iter()
                .position(|t| module_isomorphic(&tw, t, &local.alg, rng).is_some())
                .ok_or_else(|| Error::CatalogMissingImage("group-aut image".into()))?;
        }
        Ok(out)
    }

    /// Permutation of local weights under (frob^j, group automorphism).
    pub fn local_weight_perm_under_group_aut(
        &self,
        li: usize,
        j: u32,
        gaut: &[usize],
        rng: &mut impl RngCore,
    ) -> Result<Vec<usize>> {
        let cat = &self.cat;
        let local = &self.locals[li];
        let apply = |m: usize| -> usize {
            let i = local
                .max_sub
                .elements
                .iter()
                .position(|&x| x == m)
                .expect("element of G_e");
            local.max_sub.elements[gaut[i]]
        };
        let mut out = vec![0; local.wlist.len()];
        for (w_idx, &(p_idx, k)) in local.wlist.iter().enumerate() {
            let cell = &local.wcells[p_idx];
            let mut fp: Vec<usize> = local.psubs[p_idx].iter().map(|&x| apply(x)).collect();
            fp.sort();
            let dst_oms = orbit_max_subgroup(cat, local.idem, &fp)?;
            let mut qmap = vec![usize::MAX; cell.oms.quotient.n];
            for n_idx in 0..cell.oms.n_group.n {
                let x = cell.oms.n_morph(n_idx);
                let y = apply(x);
                let c_src = cell.oms.proj[n_idx];
                let c_dst = dst_oms.coset_of_morph(y).expect("lands in normalizer");
                if qmap[c_src] == usize::MAX {
                    qmap[c_src] = c_dst;
                } else {
                    assert_eq!(qmap[c_src], c_dst);
                }
            }
            let src_mod = &cell.simples[cell.projective[k]];
            let mut mats = vec![Mat::zero(src_mod.dim, src_mod.dim); dst_oms.quotient.n];
            for c in 0..cell.oms.quotient.n {
                mats[qmap[c]] = src_mod.mats[c].clone();
            }
            let qalg = group_algebra(&dst_oms.quotient, self.field.clone());
            let tw = ModuleRep {
                dim: src_mod.dim,
                mats,
            }
            .frobenius_twist(&qalg, GaloisElement { j })?;
            let (w_dst, _) = self.local_canonicalize_weight(li, &fp, &tw, rng)?;
            out[w_idx] = w_dst;
        }
        Ok(out)
    }

    /// Normalisation towards condition (i): transport the representative
    /// bijection along orbit members of the (H x Aut(C))_b action.
    pub fn normalize_condition_i(
        &self,
        family: &OmegaFamily,
        stab: &ProductStabilizer,
        rng: &mut impl RngCore,
    ) -> Result<OmegaFamily> {
        let auts = self.auts.as_ref().ok_or(Error::GroupUnavailable)?;
        let n = self.locals.len();
        // Orbits of idempotents under e -> F(e).
        let mut orbit_rep = vec![usize::MAX; n];
        let mut assigned = vec![false; n];
        let mut maps = vec![vec![]; n];
        for r in 0..n {
            if assigned[r] {
                continue;
            }
            // r is an orbit representative. Check stabilizer-equivariance.
            let lp = self.local_block_pairs(r, family.block)?;
            let lw = self.local_block_weights(r, family.block)?;
            for &(j, ai) in &stab.elems {
                let aut = &auts.auts[ai];
                let (dst_p, cross_p) = self.cross_pairs(j, aut, r, rng)?;
                if dst_p != r {
                    continue;
                }
                let (_, cross_w) = self.cross_weights(j, aut, r, rng)?;
                for &i in &lp {
                    let lhs = family.maps[r][cross_p[i]];
                    let rhs = cross_w[family.maps[r][i]];
                    if lhs != rhs {
                        return Err(Error::RepresentativeNotEquivariant(format!(
                            "idempotent {}, element (f{j},F{ai}), simple {i}",
                            self.cat.mor_labels[self.locals[r].idem.morph]
                        )));
                    }
                }
                let _ = &lw;
            }
            orbit_rep[r] = r;
            assigned[r] = true;
            maps[r] = family.maps[r].clone();
            // Define the rest of the orbit by transport.
            for &(j, ai) in &stab.elems {
                let aut = &auts.auts[ai];
                let (dst, cross_p) = self.cross_pairs(j, aut, r, rng)?;
                if assigned[dst] {
                    continue;
                }
                let (dst_w, cross_w) = self.cross_weights(j, aut, r, rng)?;
                assert_eq!(dst, dst_w);
                let mut map = vec![usize::MAX; self.locals[dst].simples.len()];
                for i in 0..self.locals[r].simples.len() {
                    if family.maps[r][i] != usize::MAX {
                        map[cross_p[i]] = cross_w[family.maps[r][i]];
                    }
                }
                maps[dst] = map;
                orbit_rep[dst] = r;
                assigned[dst] = true;
            }
        }
        Ok(OmegaFamily {
            maps,
            block: family.block,
        })
    }

    /// Normalisation towards condition (ii): Omega_f := Omega_{e,f} ∘
    /// Omega_e ∘ Lambda_{f,e} from the isomorphism-class representatives.
    pub fn normalize_condition_ii(
        &self,
        family: &OmegaFamily,
        rng: &mut impl RngCore,
    ) -> Result<OmegaFamily> {
        let mut maps = vec![vec![]; self.locals.len()];
        for li in 0..self.locals.len() {
            let e_idx = self
                .reps
                .idems
                .iter()
                .position(|&r| {
                    self.cat
                        .idempotents_isomorphic(self.locals[li].idem, r)
                        .is_some()
                })
                .expect("representative exists");
            let ri = self.rep_local[e_idx];
            if ri == li {
                maps[li] = family.maps[li].clone();
                continue;
            }
            let lambda_fe = self.local_lambda(li, ri, rng)?;
            let omega_ef = self.local_omega_ef(ri, li, rng)?;
            let mut map = vec![usize::MAX; self.locals[li].simples.len()];
            for i in 0..map.len() {
                let at_rep = family.maps[ri][lambda_fe[i]];
                if at_rep != usize::MAX {
                    map[i] = omega_ef[at_rep];
                }
            }
            maps[li] = map;
        }
        Ok(OmegaFamily {
            maps,
            block: family.block,
        })
    }

    /// Exhaustive check of condition (i); returns the first violation.
    pub fn check_condition_i(
        &self,
        family: &OmegaFamily,
        stab: &ProductStabilizer,
        rng: &mut impl RngCore,
    ) -> Result<Option<String>> {
        let auts = self.auts.as_ref().ok_or(Error::GroupUnavailable)?;
        for li in 0..self.locals.len() {
            let lp = self.local_block_pairs(li, family.block)?;
            for &(j, ai) in &stab.elems {
                let aut = &auts.auts[ai];
                let (dst, cross_p) = self.cross_pairs(j, aut, li, rng)?;
                let (_, cross_w) = self.cross_weights(j, aut, li, rng)?;
                for &i in &lp {
                    let lhs = family.maps[dst][cross_p[i]];
                    let rhs = cross_w[family.maps[li][i]];
                    if lhs != rhs {
                        return Ok(Some(format!(
                            "condition (i) fails at idempotent {}, element (f{j},F{ai}), simple {i}",
                            self.cat.mor_labels[self.locals[li].idem.morph]
                        )));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Exhaustive check of condition (ii); returns the first violation.
    pub fn check_condition_ii(
        &self,
        family: &OmegaFamily,
        rng: &mut impl RngCore,
    ) -> Result<Option<String>> {
        for li in 0..self.locals.len() {
            for di in 0..self.locals.len() {
                if li == di
                    || self
                        .cat
                        .idempotents_isomorphic(self.locals[li].idem, self.locals[di].idem)
                        .is_none()
                {
                    continue;
                }
                let lambda_ef = self.local_lambda(li, di, rng)?;
                let omega_ef = self.local_omega_ef(li, di, rng)?;
                let lp = self.local_block_pairs(li, family.block)?;
                for &i in &lp {
                    let lhs = family.maps[di][lambda_ef[i]];
                    let rhs = omega_ef[family.maps[li][i]];
                    if lhs != rhs {
                        return Ok(Some(format!(
                            "condition (ii) fails at pair ({}, {}), simple {i}",
                            self.cat.mor_labels[self.locals[li].idem.morph],
                            self.cat.mor_labels[self.locals[di].idem.morph]
                        )));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Surface any condition violation of a family as the
    /// ConditionsIncompatible error, with the offending triple.
    pub fn report_incompatibility(
        &self,
        family: &OmegaFamily,
        stab: &ProductStabilizer,
        rng: &mut impl RngCore,
    ) -> Result<()> {
        if let Some(v) = self.check_condition_i(family, stab, rng)? {
            return Err(Error::ConditionsIncompatible(v));
        }
        if let Some(v) = self.check_condition_ii(family, rng)? {
            return Err(Error::ConditionsIncompatible(v));
        }
        Ok(())
    }

    /// Theorem-main3 assembly: normalise the family to satisfy conditions
    /// (i) and (ii), build Sigma_b ∘ Pi_b, and audit equivariance under the
    /// full product stabilizer. A family satisfying one condition but
    /// breaking the other after renormalisation is surfaced, never patched.
    pub fn assemble_main3(
        &self,
        h_gen: u32,
        block: Option<usize>,
        aut_cap: u64,
    ) -> Result<Assembly> {
        if block.is_some() && !self.is_ei {
            return Err(Error::NotEI);
        }
        let auts = self.auts.as_ref().ok_or(Error::GroupUnavailable)?;
        let mut rng = self.rng();
        let stab = self.product_stabilizer(h_gen, block)?;
        let family = self.initial_family(h_gen, block, aut_cap, &mut rng)?;
        let family = self.normalize_condition_i(&family, &stab, &mut rng)?;
        if let Some(v) = self.check_condition_i(&family, &stab, &mut rng)? {
            return Err(Error::ConditionsIncompatible(format!(
                "normalisation (i) failed its own condition: {v}"
            )));
        }
        let family = self.normalize_condition_ii(&family, &mut rng)?;
        if let Some(v) = self.check_condition_ii(&family, &mut rng)? {
            return Err(Error::ConditionsIncompatible(format!(
                "normalisation (ii) failed its own condition: {v}"
            )));
        }
        if let Some(v) = self.check_condition_i(&family, &stab, &mut rng)? {
            return Err(Error::ConditionsIncompatible(v));
        }

        // Sigma_b from the family at the representatives, then compose with
        // Pi_b. Local weight indices translate to global entries directly.
        let in_block = |x: Option<usize>| block.is_none() || x == block;
        let left: Vec<usize> = (0..self.kc_simples.len())
            .filter(|&i| in_block(self.pairs[self.pi_map[i]].block))
            .collect();
        let mut pairing = vec![usize::MAX; self.kc_simples.len()];
        for &i in &left {
            let pe = &self.pairs[self.pi_map[i]];
            let li = self.rep_local[pe.e_idx];
            let w_local = family.maps[li][pe.s_idx];
            if w_local == usize::MAX {
                return Err(Error::ParametrizationMismatch(
                    "family undefined on a block simple".into(),
                ));
            }
            let (p_idx, k) = self.locals[li].wlist[w_local];
            pairing[i] = self
                .weights
                .entry_index(pe.e_idx, p_idx, k)
                .expect("representative weights are catalog entries");
        }
        // Audit bijectivity.
        let mut right: Vec<usize> = left.iter().map(|&i| pairing[i]).collect();
        right.sort();
        {
            let mut dedup = right.clone();
            dedup.dedup();
            if dedup.len() != left.len() {
                return Err(Error::ParametrizationMismatch(
                    "assembled blockwise map is not a bijection".into(),
                ));
            }
        }
        // Audit equivariance under every element of (H x Aut(C))_b.
        for &(j, ai) in &stab.elems {
            let sp = compose_perm(&self.galois_simples[j as usize], &auts.on_simples[ai]);
            let wp = compose_perm(&self.galois_weights[j as usize], &auts.on_weights[ai]);
            for &i in &left {
                if pairing[sp[i]] != wp[pairing[i]] {
                    return Err(Error::ParametrizationMismatch(format!(
                        "main3 assembly not equivariant at (f{j},F{ai})"
                    )));
                }
            }
        }
        Ok(Assembly {
            pairing,
            left,
            right,
            group_level: vec![],
            equivariance_audited: true,
        })
    }
}

// ---------------------------------------------------------------------------
// Twisted reduction through the extension category.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct TwistedBlockReport {
    pub block: usize,
    pub simple_counts: (usize, usize),
    pub weight_counts: (usize, usize),
    pub simple_reports: EquivarianceReport,
    pub weight_reports: EquivarianceReport,
    pub matches: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TwistedReport {
    pub dim_khat_er: usize,
    pub mor_c: usize,
    pub splitting_degree: u32,
    pub per_block: Vec<TwistedBlockReport>,
    pub verdict: bool,
}

/// Check the equivalence between the extension-category side k Ĉ e_R and
/// the twisted side k_alpha C: for every block b of k Ĉ e_R, counts,
/// Galois orbit types and subgroup fixed points of simples and weights
/// match across pi. EI-categories only (the blockwise statement needs the
/// b-weight partition).
pub fn twisted_equivalence_check(
    cat: &FinCategory,
    alpha: &TwoCocycle,
    seed: u64,
    aut_cap: u64,
) -> Result<TwistedReport> {
    if !cat.is_ei() {
        return Err(Error::NotEI);
    }
    let ext = build_extension(cat, alpha)?;
    let hat = Instance::build(ext.ext.clone(), alpha.p, seed, aut_cap)?;
    let field = hat.field.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5bd1_e995);

    // pi and e_R over the splitting field.
    let pi_report = check_pi_isomorphism(cat, alpha, &ext, &field)?;
    let e_r = e_r_idempotent(cat, alpha, &ext, &hat.kc);
    let pi = pi_matrix(cat, &ext, &field);

    // The twisted algebra and its simples over the same field.
    let kalpha = twisted_algebra(cat, alpha, field.clone())?;
    let reg = ModuleRep::regular(&kalpha);
    let alpha_simples: Vec<ModuleRep> = composition_factors(&reg, &kalpha, &mut rng, hat.budget)?
        .into_iter()
        .map(|(s, _)| s)
        .collect();
    for s in &alpha_simples {
        if s.hom_dim(s, &kalpha) != 1 {
            return Err(Error::SplitCapExceeded {
                m_max: hat.m,
                detail: "twisted algebra not split over the extension field".into(),
            });
        }
    }
    let mut alpha_galois = vec![];
    for j in 0..hat.m {
        alpha_galois.push(crate::grouprep::frobenius_perm(
            &alpha_simples,
            &kalpha,
            j,
            &mut rng,
        )?);
    }

    // Twisted weights of k_alpha O_C.
    let tw_weights = twisted_weight_list(cat, alpha, &field, &mut rng, hat.budget)?;
    let mut tw_weight_galois = vec![];
    for j in 0..hat.m {
        let mut perm = vec![0; tw_weights.len()];
        for (i, w) in tw_weights.iter().enumerate() {
            let tw = w.module.frobenius_twist(&w.alg, GaloisElement { j })?;
            perm[i] = tw_weights
                .iter()
                .position(|u| {
                    (u.e_idx, u.p_idx) == (w.e_idx, w.p_idx)
                        && module_isomorphic(&tw, &u.module, &u.alg, &mut rng).is_some()
                })
                .ok_or_else(|| Error::CatalogMissingImage("twisted weight twist".into()))?;
        }
        tw_weight_galois.push(perm);
    }

    // e_R-blocks of k Ĉ.
    let mut per_block = vec![];
    let mut verdict = true;
    for (bi, b) in hat.blocks.iter().enumerate() {
        if hat.kc.mul_vec(&b.coeffs, &e_r) != b.coeffs {
            continue;
        }
        // Gamma_b inside Z/m.
        let stab = hat.galois_stabilizer_of_block(b);
        let d = stab.iter().copied().filter(|&j| j > 0).min().unwrap_or(0);
        let order = if d == 0 { 1 } else { hat.m / d };
        let group = cyclic_group(order as usize);

        // pi(b): a central idempotent of k_alpha C.
        let pib = pi.mat_vec(&b.coeffs, &field);
        assert!(kalpha.is_central(&pib) && kalpha.is_idempotent(&pib));

        let hat_s = hat.block_simples(bi);
        let alpha_s: Vec<usize> = (0..alpha_simples.len())
            .filter(|&i| !alpha_simples[i].act(&pib, &field).is_zero())
            .collect();
        let hat_w = hat.block_weights(bi);
        let alpha_w: Vec<usize> = {
            let mut out = vec![];
            for (i, w) in tw_weights.iter().enumerate() {
                if twisted_b_weight_test(alpha, &kalpha, &pib, w, &field)? {
                    out.push(i);
                }
            }
            out
        };

        let mk = |perms: &[Vec<usize>], subset: &[usize]| -> GroupAction {
            let ps: Vec<Vec<usize>> = (0..order)
                .map(|k| restrict_perm(&perms[(k * d) as usize % hat.m as usize], subset))
                .collect();
            GroupAction::new(group.clone(), ps)
        };
        let s_report = check_equivariance(
            &format!("Gamma_b on simples (block {bi})"),
            &mk(&hat.galois_simples, &hat_s),
            &mk(&alpha_galois, &alpha_s),
        );
        let w_report = check_equivariance(
            &format!("Gamma_b on weights (block {bi})"),
            &mk(&hat.galois_weights, &hat_w),
            &mk(&tw_weight_galois, &alpha_w),
        );
        let matches = hat_s.len() == alpha_s.len()
            && hat_w.len() == alpha_w.len()
            && s_report.equivariant_bijection_exists
            && w_report.equivariant_bijection_exists;
        verdict &= matches;
        per_block.push(TwistedBlockReport {
            block: bi,
            simple_counts: (hat_s.len(), alpha_s.len()),
            weight_counts: (hat_w.len(), alpha_w.len()),
            simple_reports: s_report,
            weight_reports: w_report,
            matches,
        });
    }
    Ok(TwistedReport {
        dim_khat_er: pi_report.dim_khat_er,
        mor_c: pi_report.mor_c,
        splitting_degree: hat.m,
        per_block,
        verdict,
    })
}

/// A weight of the twisted orbit-category algebra: a cell (e, P) with a
/// projective simple module over the descended twisted quotient algebra.
struct TwistedWeight {
    e_idx: usize,
    p_idx: usize,
    e: Idempotent,
    oms: crate::porbit::OrbitMaxSubgroup,
    alg: SCAlgebra,
    module: ModuleRep,
}

/// Enumerate the weights of k_alpha O_C directly: for each representative
/// cell, build the twisted quotient algebra (checking that alpha descends)
/// and list its projective simples via the summand pairing.
fn twisted_weight_list(
    cat: &FinCategory,
    alpha: &TwoCocycle,
    field: &Field,
    rng: &mut impl RngCore,
    budget: usize,
) -> Result<Vec<TwistedWeight>> {
    let reps = rep_system(cat, alpha.p);
    let mut out = vec![];
    for (e_idx, &e) in reps.idems.iter().enumerate() {
        for (p_idx, p_set) in reps.psubs[e_idx].iter().enumerate() {
            let oms = orbit_max_subgroup(cat, e, p_set)?;
            let qalg = descended_twisted_quotient(alpha, &oms, field)?;
            let reg = ModuleRep::regular(&qalg);
            let factors = composition_factors(&reg, &qalg, rng, budget)?;
            for (s, _) in factors {
                if s.hom_dim(&s, &qalg) != 1 {
                    return Err(Error::SplitCapExceeded {
                        m_max: field.m(),
                        detail: "twisted quotient algebra not split".into(),
                    });
                }
                if is_projective_by_summand(&s, &qalg, rng) {
                    out.push(TwistedWeight {
                        e_idx,
                        p_idx,
                        e,
                        oms: orbit_max_subgroup(cat, e, p_set)?,
                        alg: qalg.clone(),
                        module: s,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// The twisted quotient algebra k_alphabar [N_{G_e}(P)/P]: alpha must be
/// constant on P-coset pairs (automatic for a cocycle pulled back from the
/// orbit category with normalised values), otherwise an error.
fn descended_twisted_quotient(
    alpha: &TwoCocycle,
    oms: &crate::porbit::OrbitMaxSubgroup,
    field: &Field,
) -> Result<SCAlgebra> {
    let q = &oms.quotient;
    // Representative morphism per coset.
    let rep_morph: Vec<usize> = (0..q.n)
        .map(|c| {
            let n_idx = (0..oms.n_group.n)
                .find(|&i| oms.proj[i] == c)
                .expect("coset nonempty");
            oms.n_morph(n_idx)
        })
        .collect();
    // Well-definedness: alpha(x, y) must only depend on the cosets.
    for c1 in 0..q.n {
        for c2 in 0..q.n {
            let base = alpha.value(rep_morph[c1], rep_morph[c2]);
            for i in 0..oms.n_group.n {
                if oms.proj[i] != c1 {
                    continue;
                }
                for k in 0..oms.n_group.n {
                    if oms.proj[k] != c2 {
                        continue;
                    }
                    if alpha.value(oms.n_morph(i), oms.n_morph(k)) != base {
                        return Err(Error::BadInput(
                            "cocycle does not descend to the quotient group".into(),
                        ));
                    }
                }
            }
        }
    }
    twisted_group_algebra(q, field.clone(), |a, b| {
        alpha.value(rep_morph[a], rep_morph[b])
    })
}

/// Twisted b-weight test: br_P(e_hat pi(b)) acts nonzero on the module,
/// with the truncation to the centralizer and the coefficient push-forward.
fn twisted_b_weight_test(
    alpha: &TwoCocycle,
    kalpha: &SCAlgebra,
    pib: &[u64],
    w: &TwistedWeight,
    field: &Field,
) -> Result<bool> {
    // e_hat = alpha(e,e)^{-1} e.
    let mut ehat = vec![0; kalpha.dim];
    ehat[w.e.morph] = field.inv(field.from_u64(alpha.value(w.e.morph, w.e.morph)));
    let eb = kalpha.mul_vec(&ehat, pib);
    // Restrict to G_e, truncate to the centralizer of P, push to N/P.
    let mut local = vec![0; w.oms.g_group.n];
    for (m, &c) in eb.iter().enumerate() {
        if c != 0 {
            let gi = w
                .oms
                .g_elements
                .iter()
                .position(|&x| x == m)
                .ok_or(Error::NotCentralInGe)?;
            local[gi] = c;
        }
    }
    let p_local: Vec<usize> = {
        let mut v: Vec<usize> = (0..w.oms.n_group.n)
            .filter(|&n_idx| w.oms.proj[n_idx] == w.oms.quotient.unit)
            .map(|n_idx| w.oms.n_local[n_idx])
            .collect();
        v.sort();
        v
    };
    let centralizer = w.oms.g_group.centralizer(&p_local);
    let mut pushed = vec![0; w.oms.quotient.n];
    for (gi, &c) in local.iter().enumerate() {
        if c == 0 || !centralizer.contains(&gi) {
            continue;
        }
        let n_idx = (0..w.oms.n_group.n)
            .find(|&i| w.oms.n_local[i] == gi)
            .expect("centralizer lies in the normalizer");
        let coset = w.oms.proj[n_idx];
        pushed[coset] = field.add(pushed[coset], c);
    }
    Ok(!w.module.act(&pushed, field).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn instance_counts_on_small_corpus() {
        // Expected |S(kC)| = sum over idempotent classes of the number of
        // p-regular classes of G_e.
        for (name, expected2, expected3) in [
            ("terminal", 1usize, 1usize),
            ("chain2", 2, 2),
            ("diamond", 4, 4),
            ("monoid_e", 2, 2),
            ("t2", 2, 3), // G_id = C2: one 2-regular class at p=2, two at p=3
            ("band", 1, 1),
        ] {
            let c = corpus::by_name(name).unwrap();
            for (p, expected) in [(2u64, expected2), (3u64, expected3)] {
                let inst = Instance::build(c.clone(), p, 7, DEFAULT_AUT_CAP).unwrap();
                assert_eq!(inst.kc_simples.len(), expected, "{name}@{p} simples");
                let awc = inst.check_awc();
                assert!(awc.verdict, "{name}@{p}: AWC counts {:?}", awc.counts);
            }
        }
    }

    #[test]
    fn s3_instance_at_3() {
        let inst = Instance::build(corpus::s3(), 3, 7, DEFAULT_AUT_CAP).unwrap();
        assert_eq!(inst.m, 1);
        assert_eq!(inst.kc_simples.len(), 2);
        assert_eq!(inst.weights.len(), 2);
        assert_eq!(inst.blocks.len(), 1);
        assert!(inst.check_awc().verdict);
        assert!(inst.check_gawc().verdict);
    }

    #[test]
    fn c7_at_2_galois_orbits() {
        let inst = Instance::build(corpus::cyclic(7), 2, 7, DEFAULT_AUT_CAP).unwrap();
        assert_eq!(inst.m, 3);
        let rep = inst.check_gawc();
        assert!(rep.verdict);
        assert_eq!(rep.reports[0].left_orbit_type, vec![1, 3, 3]);
        assert_eq!(rep.reports[0].right_orbit_type, vec![1, 3, 3]);
    }

    #[test]
    fn c5_at_2_galois_orbits() {
        let inst = Instance::build(corpus::cyclic(5), 2, 7, DEFAULT_AUT_CAP).unwrap();
        assert_eq!(inst.m, 4);
        let rep = inst.check_gawc();
        assert!(rep.verdict);
        assert_eq!(rep.reports[0].left_orbit_type, vec![1, 4]);
        assert_eq!(rep.reports[0].right_orbit_type, vec![1, 4]);
    }

    #[test]
    fn c2xc3_at_3_blockwise() {
        let inst = Instance::build(corpus::c2xc3(), 3, 7, DEFAULT_AUT_CAP).unwrap();
        assert_eq!(inst.blocks.len(), 2);
        for bi in 0..2 {
            assert_eq!(inst.block_simples(bi).len(), 1);
            assert_eq!(inst.block_weights(bi).len(), 1);
        }
        let rep = inst.check_bgawc(None).unwrap();
        assert!(rep.verdict);
    }

    #[test]
    fn bgawc_rejects_non_ei() {
        let inst = Instance::build(corpus::monoid_e(), 2, 7, DEFAULT_AUT_CAP).unwrap();
        assert!(matches!(inst.check_bgawc(None), Err(Error::NotEI)));
    }

    #[test]
    fn aut_mode_on_diamond() {
        let inst = Instance::build(corpus::diamond(), 2, 7, DEFAULT_AUT_CAP).unwrap();
        let rep = inst.check_aut().unwrap();
        assert!(rep.verdict);
        assert_eq!(rep.reports[0].left_orbit_type, vec![1, 1, 2]);
    }

    #[test]
    fn equivariance_is_symmetric_and_reorder_invariant() {
        let g = cyclic_group(2);
        let a = GroupAction::new(g.clone(), vec![vec![0, 1, 2, 3], vec![1, 0, 3, 2]]);
        let b = GroupAction::new(g.clone(), vec![vec![0, 1, 2, 3], vec![0, 1, 3, 2]]);
        let ab = check_equivariance("Z/2", &a, &b);
        let ba = check_equivariance("Z/2", &b, &a);
        assert!(!ab.equivariant_bijection_exists);
        assert_eq!(
            ab.equivariant_bijection_exists,
            ba.equivariant_bijection_exists
        );
        let a2 = GroupAction::new(g.clone(), vec![vec![0, 1, 2, 3], vec![3, 2, 1, 0]]);
        let aa = check_equivariance("Z/2", &a, &a2);
        assert!(aa.equivariant_bijection_exists);
        let pairing = equivariant_pairing(&a, &a2).unwrap();
        for j in 0..2 {
            for i in 0..4 {
                assert_eq!(pairing[a.perms[j][i]], a2.perms[j][pairing[i]]);
            }
        }
    }

    #[test]
    fn assemble_main_on_c7() {
        let inst = Instance::build(corpus::cyclic(7), 2, 7, DEFAULT_AUT_CAP).unwrap();
        let asm = inst.assemble_main(None).unwrap();
        assert!(asm.equivariance_audited);
        assert_eq!(asm.left.len(), 7);
    }

    #[test]
    fn assemble_main_on_posets_and_monoids() {
        for name in ["terminal", "chain2", "diamond", "monoid_e", "t2", "band"] {
            let c = corpus::by_name(name).unwrap();
            for p in [2u64, 3] {
                let inst = Instance::build(c.clone(), p, 7, DEFAULT_AUT_CAP).unwrap();
                let asm = inst.assemble_main(None).unwrap();
                assert!(asm.equivariance_audited, "{name}@{p}");
            }
        }
    }

    #[test]
    fn assemble_main2_blockwise_on_c2xc3() {
        let inst = Instance::build(corpus::c2xc3(), 3, 7, DEFAULT_AUT_CAP).unwrap();
        for bi in 0..inst.blocks.len() {
            let asm = inst.assemble_main(Some(bi)).unwrap();
            assert_eq!(asm.left.len(), 1);
        }
    }

    #[test]
    fn assemble_main3_on_diamond() {
        let inst = Instance::build(corpus::diamond(), 2, 7, DEFAULT_AUT_CAP).unwrap();
        let asm = inst.assemble_main3(1, None, DEFAULT_AUT_CAP).unwrap();
        assert!(asm.equivariance_audited);
        assert_eq!(asm.left.len(), 4);
    }

    #[test]
    fn assemble_main3_on_c7_full_product() {
        let inst = Instance::build(corpus::cyclic(7), 2, 7, DEFAULT_AUT_CAP).unwrap();
        let asm = inst.assemble_main3(1, None, DEFAULT_AUT_CAP).unwrap();
        assert_eq!(asm.left.len(), 7);
    }

    /// A connected EI-category with two isomorphic objects and maximal
    /// subgroups C6: Hom(Xj, Xi) is a C6-torsor and composition adds the
    /// group components. Its algebra is M_2(kC6), which has two blocks at
    /// p = 3.
    fn double_band_c6() -> FinCategory {
        use crate::fincat::{RawCategory, RawMorphism};
        let label = |g: usize, i: usize, j: usize| format!("g{g}e{i}{j}");
        let mut morphisms = vec![];
        let mut composition = std::collections::BTreeMap::new();
        for g in 0..6 {
            for i in 1..=2 {
                for j in 1..=2 {
                    morphisms.push(RawMorphism {
                        id: label(g, i, j),
                        dom: format!("X{j}"),
                        cod: format!("X{i}"),
                    });
                }
            }
        }
        for g in 0..6 {
            for h in 0..6 {
                for i in 1..=2 {
                    for j in 1..=2 {
                        for l in 1..=2 {
                            composition.insert(
                                format!("{}|{}", label(g, i, j), label(h, j, l)),
                                label((g + h) % 6, i, l),
                            );
                        }
                    }
                }
            }
        }
        let raw = RawCategory {
            objects: vec!["X1".into(), "X2".into()],
            morphisms,
            identity: [("X1", "g0e11"), ("X2", "g0e22")]
                .into_iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            composition,
            metadata: None,
        };
        FinCategory::from_raw(&raw).unwrap()
    }

    #[test]
    fn lambda_and_omega_respect_block_labels() {
        let c = double_band_c6();
        assert!(c.is_ei());
        let inst = Instance::build(c, 3, 7, DEFAULT_AUT_CAP).unwrap();
        assert_eq!(inst.blocks.len(), 2);
        assert_eq!(inst.locals.len(), 2);
        let mut rng = inst.rng();
        for (a, b) in [(0usize, 1usize), (1, 0)] {
            let lambda = inst.local_lambda(a, b, &mut rng).unwrap();
            let omega = inst.local_omega_ef(a, b, &mut rng).unwrap();
            for bi in 0..2 {
                let block = Some(bi);
                let lp_a = inst.local_block_pairs(a, block).unwrap();
                let lp_b = inst.local_block_pairs(b, block).unwrap();
                let mut img: Vec<usize> = lp_a.iter().map(|&i| lambda[i]).collect();
                img.sort();
                assert_eq!(img, lp_b, "Lambda respects block {bi}");
                let lw_a = inst.local_block_weights(a, block).unwrap();
                let lw_b = inst.local_block_weights(b, block).unwrap();
                let mut img: Vec<usize> = lw_a.iter().map(|&i| omega[i]).collect();
                img.sort();
                assert_eq!(img, lw_b, "Omega respects block {bi}");
            }
        }
        // The blockwise machinery also runs end to end on this category.
        for bi in 0..2 {
            let asm = inst.assemble_main(Some(bi)).unwrap();
            assert!(asm.equivariance_audited);
        }
        let rep = inst.check_bgawc(None).unwrap();
        assert!(rep.verdict);
    }

    #[test]
    fn non_equivariant_representative_is_rejected() {
        // Corrupting the representative's bijection on C7@2 (where the
        // stabilizer acts with orbits {1,3,3}) must trip the normalisation.
        let inst = Instance::build(corpus::cyclic(7), 2, 7, DEFAULT_AUT_CAP).unwrap();
        let mut rng = inst.rng();
        let stab = inst.product_stabilizer(1, None).unwrap();
        let family = inst
            .initial_family(1, None, DEFAULT_AUT_CAP, &mut rng)
            .unwrap();
        let mut corrupted = family.clone();
        let perm = inst
            .local_pair_perm_under_group_aut(0, 1, &(0..7).collect::<Vec<_>>(), &mut rng)
            .unwrap();
        let fixed = (0..7).find(|&i| perm[i] == i).unwrap();
        let moved = (0..7).find(|&i| perm[i] != i).unwrap();
        corrupted.maps[0].swap(fixed, moved);
        assert!(matches!(
            inst.normalize_condition_i(&corrupted, &stab, &mut rng),
            Err(Error::RepresentativeNotEquivariant(_))
        ));
    }

    #[test]
    fn twisted_equivalence_on_the_p5_example() {
        let c = corpus::cyclic(2);
        let alpha =
            crate::cocycle::validate_cocycle(&c, &corpus::twisted_c2_p5_cocycle()).unwrap();
        let rep = twisted_equivalence_check(&c, &alpha, 7, DEFAULT_AUT_CAP).unwrap();
        assert_eq!(rep.dim_khat_er, 2);
        assert_eq!(rep.mor_c, 2);
        assert!(rep.verdict);
        assert_eq!(rep.per_block.len(), 2);
        for b in &rep.per_block {
            assert_eq!(b.simple_counts, (1, 1));
            assert_eq!(b.weight_counts, (1, 1));
        }
    }

    #[test]
    fn twisted_equivalence_trivial_alpha_runs_through_the_machinery() {
        let c = corpus::cyclic(2);
        let alpha = TwoCocycle::trivial(3);
        let rep = twisted_equivalence_check(&c, &alpha, 7, DEFAULT_AUT_CAP).unwrap();
        assert!(rep.verdict);
        // k Ĉ for p = 3 is k[C2 x C2]: 4 blocks, 2 of them in the e_R part.
        assert_eq!(rep.per_block.len(), 2);
    }
}
