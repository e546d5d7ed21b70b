//! Group-level machinery: multiplication tables, conjugacy, subgroups,
//! normalizers and quotients, simple and projective-simple modules, and the
//! Brauer homomorphism with its block associations.

use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::ffalg::algebra::{BlockIdem, SCAlgebra};
use crate::ffalg::field::Field;
use crate::ffalg::module::{composition_factors, module_isomorphic, ModuleRep};
use crate::fincat::{FinCategory, MaxSubgroup, RawCategory, RawMorphism};

/// A finite group as an explicit multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinGroup {
    pub n: usize,
    pub labels: Vec<String>,
    mul_table: Vec<usize>,
    pub unit: usize,
    pub inv: Vec<usize>,
}

impl FinGroup {
    /// Build from a closed subset of a category's endomorphisms.
    pub fn from_subtable(cat: &FinCategory, elements: &[usize], unit_morph: usize) -> FinGroup {
        let n = elements.len();
        let index = |m: usize| elements.iter().position(|&x| x == m).expect("closed subset");
        let mut mul_table = vec![0; n * n];
        for (i, &a) in elements.iter().enumerate() {
            for (j, &b) in elements.iter().enumerate() {
                let c = cat.compose(a, b).expect("subset of one endomorphism monoid");
                mul_table[i * n + j] = index(c);
            }
        }
        let unit = index(unit_morph);
        let g = FinGroup {
            n,
            labels: elements.iter().map(|&m| cat.mor_labels[m].clone()).collect(),
            mul_table,
            unit,
            inv: vec![],
        };
        g.with_inverses()
    }

    pub fn from_max_subgroup(cat: &FinCategory, g: &MaxSubgroup) -> FinGroup {
        FinGroup::from_subtable(cat, &g.elements, g.base.morph)
    }

    pub fn from_table(labels: Vec<String>, mul_table: Vec<usize>, unit: usize) -> Result<FinGroup> {
        let n = labels.len();
        assert_eq!(mul_table.len(), n * n);
        let g = FinGroup {
            n,
            labels,
            mul_table,
            unit,
            inv: vec![],
        };
        // Group axioms, exhaustively.
        for a in 0..n {
            if g.mul(g.unit, a) != a || g.mul(a, g.unit) != a {
                return Err(Error::BadInput("unit law fails".into()));
            }
            for b in 0..n {
                for c in 0..n {
                    if g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)) {
                        return Err(Error::BadInput("multiplication not associative".into()));
                    }
                }
            }
        }
        for a in 0..n {
            if !(0..n).any(|b| g.mul(a, b) == g.unit && g.mul(b, a) == g.unit) {
                return Err(Error::BadInput("element without inverse".into()));
            }
        }
        Ok(g.with_inverses())
    }

    fn with_inverses(mut self) -> FinGroup {
        self.inv = (0..self.n)
            .map(|a| {
                (0..self.n)
                    .find(|&b| self.mul(a, b) == self.unit && self.mul(b, a) == self.unit)
                    .expect("group element has an inverse")
            })
            .collect();
        self
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul_table[a * self.n + b]
    }

    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv[g])
    }

    pub fn elem_order(&self, a: usize) -> usize {
        let mut acc = a;
        let mut ord = 1;
        while acc != self.unit {
            acc = self.mul(acc, a);
            ord += 1;
        }
        ord
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = vec![];
        for x in 0..self.n {
            if seen[x] {
                continue;
            }
            let mut class: Vec<usize> = (0..self.n).map(|g| self.conj(g, x)).collect();
            class.sort();
            class.dedup();
            for &y in &class {
                seen[y] = true;
            }
            out.push(class);
        }
        out
    }

    /// Classes of elements whose order is coprime to p.
    pub fn p_regular_classes(&self, p: u64) -> Vec<Vec<usize>> {
        self.conjugacy_classes()
            .into_iter()
            .filter(|c| !(self.elem_order(c[0]) as u64).is_multiple_of(p))
            .collect()
    }

    /// Closure of a subset under multiplication (within the group).
    pub fn closure(&self, seed: &[usize]) -> Vec<usize> {
        let mut set = vec![false; self.n];
        set[self.unit] = true;
        for &s in seed {
            set[s] = true;
        }
        loop {
            let mut grew = false;
            let members: Vec<usize> = (0..self.n).filter(|&x| set[x]).collect();
            for &a in &members {
                for &b in &members {
                    let c = self.mul(a, b);
                    if !set[c] {
                        set[c] = true;
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        (0..self.n).filter(|&x| set[x]).collect()
    }

    /// All p-subgroups, as sorted element lists, found by closing subgroup
    /// extensions by p-elements.
    pub fn all_p_subgroups(&self, p: u64) -> Vec<Vec<usize>> {
        let p_elems: Vec<usize> = (0..self.n)
            .filter(|&x| {
                let o = self.elem_order(x) as u64;
                o == 1 || is_p_power(o, p)
            })
            .collect();
        let trivial = vec![self.unit];
        let mut found: Vec<Vec<usize>> = vec![trivial.clone()];
        let mut frontier = vec![trivial];
        while let Some(h) = frontier.pop() {
            for &g in &p_elems {
                if h.contains(&g) {
                    continue;
                }
                let mut seed = h.clone();
                seed.push(g);
                let k = self.closure(&seed);
                if is_p_power(k.len() as u64, p) && !found.contains(&k) {
                    found.push(k.clone());
                    frontier.push(k);
                }
            }
        }
        found.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        found
    }

    /// Representatives of conjugacy classes of p-subgroups, each the minimal
    /// sorted element list in its class.
    pub fn p_subgroups_up_to_conjugacy(&self, p: u64) -> Vec<Vec<usize>> {
        let all = self.all_p_subgroups(p);
        let mut reps: Vec<Vec<usize>> = vec![];
        let mut seen: Vec<Vec<usize>> = vec![];
        for sub in all {
            if seen.contains(&sub) {
                continue;
            }
            let mut orbit = vec![];
            for g in 0..self.n {
                let mut img: Vec<usize> = sub.iter().map(|&x| self.conj(g, x)).collect();
                img.sort();
                if !orbit.contains(&img) {
                    orbit.push(img);
                }
            }
            let rep = orbit.iter().min().unwrap().clone();
            reps.push(rep);
            seen.extend(orbit);
        }
        reps.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        reps
    }

    /// All subgroups (used for fixed-point criteria over small acting groups).
    pub fn all_subgroups(&self) -> Vec<Vec<usize>> {
        let trivial = vec![self.unit];
        let mut found: Vec<Vec<usize>> = vec![trivial.clone()];
        let mut frontier = vec![trivial];
        while let Some(h) = frontier.pop() {
            for g in 0..self.n {
                if h.contains(&g) {
                    continue;
                }
                let mut seed = h.clone();
                seed.push(g);
                let k = self.closure(&seed);
                if !found.contains(&k) {
                    found.push(k.clone());
                    frontier.push(k);
                }
            }
        }
        found.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        found
    }

    pub fn conjugate_subgroup(&self, g: usize, sub: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = sub.iter().map(|&x| self.conj(g, x)).collect();
        out.sort();
        out
    }

    pub fn normalizer(&self, sub: &[usize]) -> Vec<usize> {
        (0..self.n)
            .filter(|&g| self.conjugate_subgroup(g, sub) == sub)
            .collect()
    }

    pub fn centralizer(&self, sub: &[usize]) -> Vec<usize> {
        (0..self.n)
            .filter(|&g| sub.iter().all(|&x| self.mul(g, x) == self.mul(x, g)))
            .collect()
    }

    /// The subgroup on `elements` as its own table, with the embedding map.
    pub fn subgroup(&self, elements: &[usize]) -> FinGroup {
        let n = elements.len();
        let index = |m: usize| elements.iter().position(|&x| x == m).expect("closed subset");
        let mut mul_table = vec![0; n * n];
        for (i, &a) in elements.iter().enumerate() {
            for (j, &b) in elements.iter().enumerate() {
                mul_table[i * n + j] = index(self.mul(a, b));
            }
        }
        let g = FinGroup {
            n,
            labels: elements.iter().map(|&m| self.labels[m].clone()).collect(),
            mul_table,
            unit: index(self.unit),
            inv: vec![],
        };
        g.with_inverses()
    }

    /// Quotient by a normal subgroup: the coset group and the projection.
    pub fn quotient(&self, normal: &[usize]) -> Result<(FinGroup, Vec<usize>)> {
        for g in 0..self.n {
            if self.conjugate_subgroup(g, normal) != normal {
                return Err(Error::NotNormal);
            }
        }
        let mut coset_of = vec![usize::MAX; self.n];
        let mut reps = vec![];
        for x in 0..self.n {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let mut coset: Vec<usize> = normal.iter().map(|&u| self.mul(x, u)).collect();
            coset.sort();
            let rep = coset[0];
            let idx = reps.len();
            reps.push(rep);
            for &y in &coset {
                coset_of[y] = idx;
            }
        }
        let q = reps.len();
        let mut mul_table = vec![0; q * q];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                mul_table[i * q + j] = coset_of[self.mul(a, b)];
            }
        }
        let group = FinGroup {
            n: q,
            labels: reps.iter().map(|&r| format!("[{}]", self.labels[r])).collect(),
            mul_table,
            unit: coset_of[self.unit],
            inv: vec![],
        }
        .with_inverses();
        Ok((group, coset_of))
    }

    /// A small generating set, greedily.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = vec![];
        let mut have = vec![self.unit];
        for x in 0..self.n {
            if have.contains(&x) {
                continue;
            }
            gens.push(x);
            have = self.closure(&gens);
            if have.len() == self.n {
                break;
            }
        }
        gens
    }

    /// The group as a one-object category (for automorphism enumeration).
    pub fn to_category(&self) -> FinCategory {
        let label = |i: usize| format!("m{i}");
        let raw = RawCategory {
            objects: vec!["X".into()],
            morphisms: (0..self.n)
                .map(|i| RawMorphism {
                    id: label(i),
                    dom: "X".into(),
                    cod: "X".into(),
                })
                .collect(),
            identity: [("X".to_string(), label(self.unit))].into_iter().collect(),
            composition: (0..self.n)
                .flat_map(|a| {
                    (0..self.n).map(move |b| {
                        (format!("{}|{}", label(a), label(b)), label(self.mul(a, b)))
                    })
                })
                .collect(),
            metadata: None,
        };
        FinCategory::from_raw(&raw).expect("a group table is a valid category")
    }

    /// The automorphism group as permutations of the element set.
    pub fn automorphisms(&self, cap: u64) -> Result<Vec<Vec<usize>>> {
        let cat = self.to_category();
        let auts = cat.enumerate_automorphisms(cap)?;
        Ok(auts.into_iter().map(|a| a.mor_map).collect())
    }

    /// An isomorphism to `other` as an element map, if one exists.
    pub fn isomorphism_to(&self, other: &FinGroup) -> Option<Vec<usize>> {
        if self.n != other.n {
            return None;
        }
        let gens = self.generators();
        let mut images = vec![0; gens.len()];
        self.extend_iso(other, &gens, &mut images, 0)
    }

    fn extend_iso(
        &self,
        other: &FinGroup,
        gens: &[usize],
        images: &mut Vec<usize>,
        k: usize,
    ) -> Option<Vec<usize>> {
        if k == gens.len() {
            return self.build_hom(other, gens, images);
        }
        let target_order = self.elem_order(gens[k]);
        for img in 0..other.n {
            if other.elem_order(img) != target_order {
                continue;
            }
            images[k] = img;
            if let Some(m) = self.extend_iso(other, gens, images, k + 1) {
                return Some(m);
            }
        }
        None
    }

    fn build_hom(&self, other: &FinGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
        let mut map = vec![usize::MAX; self.n];
        map[self.unit] = other.unit;
        let mut queue = vec![self.unit];
        while let Some(x) = queue.pop() {
            for (&g, &gi) in gens.iter().zip(images) {
                let y = self.mul(x, g);
                let yi = other.mul(map[x], gi);
                if map[y] == usize::MAX {
                    map[y] = yi;
                    queue.push(y);
                } else if map[y] != yi {
                    return None;
                }
            }
        }
        if map.contains(&usize::MAX) {
            return None; // generators did not generate
        }
        let mut used = vec![false; other.n];
        for &y in &map {
            if used[y] {
                return None;
            }
            used[y] = true;
        }
        for a in 0..self.n {
            for b in 0..self.n {
                if map[self.mul(a, b)] != other.mul(map[a], map[b]) {
                    return None;
                }
            }
        }
        Some(map)
    }

    /// The largest power of p dividing the group order.
    pub fn p_part(&self, p: u64) -> u64 {
        let mut n = self.n as u64;
        let mut part = 1;
        while n.is_multiple_of(p) {
            part *= p;
            n /= p;
        }
        part
    }
}

fn is_p_power(mut n: u64, p: u64) -> bool {
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// The group algebra kG with basis the group elements.
pub fn group_algebra(g: &FinGroup, field: Field) -> SCAlgebra {
    let n = g.n;
    let mut prod = vec![None; n * n];
    for a in 0..n {
        for b in 0..n {
            prod[a * n + b] = Some((1, g.mul(a, b) as u32));
        }
    }
    let mut unit = vec![0; n];
    unit[g.unit] = 1;
    SCAlgebra::new(field, g.labels.clone(), prod, unit).expect("group tables are associative")
}

/// A twisted group algebra k_alpha G from an explicit value table
/// alpha(a, b) in F_p^x (indexed by group element pairs).
pub fn twisted_group_algebra(
    g: &FinGroup,
    field: Field,
    alpha: impl Fn(usize, usize) -> u64,
) -> Result<SCAlgebra> {
    let n = g.n;
    let mut prod = vec![None; n * n];
    for a in 0..n {
        for b in 0..n {
            prod[a * n + b] = Some((field.from_u64(alpha(a, b)), g.mul(a, b) as u32));
        }
    }
    let mut unit = vec![0; n];
    unit[g.unit] = field.inv(field.from_u64(alpha(g.unit, g.unit)));
    SCAlgebra::new(field, g.labels.clone(), prod, unit)
}

/// Complete irredundant list of simple kG-modules over a splitting field;
/// the count must equal the number of p-regular classes.
pub fn simple_modules(
    g: &FinGroup,
    field: &Field,
    rng: &mut impl RngCore,
    budget: usize,
) -> Result<(SCAlgebra, Vec<ModuleRep>)> {
    let alg = group_algebra(g, field.clone());
    let reg = ModuleRep::regular(&alg);
    let factors = composition_factors(&reg, &alg, rng, budget)?;
    let simples: Vec<ModuleRep> = factors.into_iter().map(|(s, _)| s).collect();
    let expected = g.p_regular_classes(field.p()).len();
    if simples.len() != expected {
        return Err(Error::CountMismatch {
            expected,
            got: simples.len(),
        });
    }
    Ok((alg, simples))
}

/// Indices of the projective simples: defect zero, i.e. |G|_p divides dim.
pub fn projective_simple_indices(g: &FinGroup, p: u64, simples: &[ModuleRep]) -> Vec<usize> {
    let part = g.p_part(p);
    simples
        .iter()
        .enumerate()
        .filter(|(_, s)| (s.dim as u64).is_multiple_of(part))
        .map(|(i, _)| i)
        .collect()
}

/// Independent projectivity oracle: S is a direct summand of the regular
/// module iff the composition pairing Hom(kG, S) x Hom(S, kG) -> End(S)
/// is nonzero.
pub fn is_projective_by_summand(
    s: &ModuleRep,
    alg: &SCAlgebra,
    _rng: &mut impl RngCore,
) -> bool {
    let reg = ModuleRep::regular(alg);
    let into = hom_basis(s, &reg, alg);
    let from = hom_basis(&reg, s, alg);
    for rho in &from {
        for iota in &into {
            if !rho.mul(iota, &alg.field).is_zero() {
                return true;
            }
        }
    }
    false
}

fn hom_basis(m: &ModuleRep, n: &ModuleRep, alg: &SCAlgebra) -> Vec<crate::ffalg::matrix::Mat> {
    use crate::ffalg::matrix::Mat;
    let field = &alg.field;
    let gens = alg.generator_indices();
    let (dm, dn) = (m.dim, n.dim);
    let unknowns = dm * dn;
    let mut rows = vec![];
    for &g in &gens {
        let a = &m.mats[g];
        let b = &n.mats[g];
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

/// The pieces of br_P applied to a central element of kG.
#[derive(Debug, Clone)]
pub struct BrauerImage {
    /// Truncation to C_G(P), still in kG coordinates.
    pub truncated: Vec<u64>,
    /// The same element in kN_G(P) coordinates.
    pub in_normalizer: Vec<u64>,
    /// Push-forward to k[N_G(P)/P] (coefficients summed over cosets).
    pub pushed: Vec<u64>,
    /// N_G(P) as a group, with its embedding into G.
    pub normalizer: FinGroup,
    pub n_embed: Vec<usize>,
    /// N_G(P)/P with the projection from N.
    pub quotient: FinGroup,
    pub proj: Vec<usize>,
}

/// br_P of a central element z of kG: truncate to C_G(P), include into
/// kN_G(P), and push to k[N_G(P)/P]. Errors unless z is central.
pub fn brauer_map(g: &FinGroup, alg: &SCAlgebra, p_sub: &[usize], z: &[u64]) -> Result<BrauerImage> {
    if !alg.is_central(z) {
        return Err(Error::NotCentral("brauer_map input".into()));
    }
    let field = &alg.field;
    let centralizer = g.centralizer(p_sub);
    let n_embed = g.normalizer(p_sub);
    let normalizer = g.subgroup(&n_embed);
    let p_in_n: Vec<usize> = p_sub
        .iter()
        .map(|&x| n_embed.iter().position(|&y| y == x).expect("P <= N"))
        .collect();
    let (quotient, proj) = normalizer.quotient(&sorted(p_in_n))?;

    let mut truncated = vec![0; g.n];
    for &c in &centralizer {
        truncated[c] = z[c];
    }
    let mut in_normalizer = vec![0; normalizer.n];
    for (ni, &gi) in n_embed.iter().enumerate() {
        in_normalizer[ni] = truncated[gi];
    }
    let mut pushed = vec![0; quotient.n];
    for (ni, &coeff) in in_normalizer.iter().enumerate() {
        if coeff != 0 {
            let q = proj[ni];
            pushed[q] = field.add(pushed[q], coeff);
        }
    }
    // The image must be central in kN_G(P).
    let n_alg = group_algebra(&normalizer, field.clone());
    if !n_alg.is_central(&in_normalizer) {
        return Err(Error::NotCentral("brauer image in kN_G(P)".into()));
    }
    Ok(BrauerImage {
        truncated,
        in_normalizer,
        pushed,
        normalizer,
        n_embed,
        quotient,
        proj,
    })
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort();
    v
}

/// Relative trace Tr_Q^P(a) = sum over coset representatives x of Q in P of
/// x a x^{-1}, for a in the Q-fixed points of kG under conjugation.
pub fn relative_trace(
    g: &FinGroup,
    alg: &SCAlgebra,
    p_sub: &[usize],
    q_sub: &[usize],
    a: &[u64],
) -> Vec<u64> {
    let field = &alg.field;
    // Left coset representatives of Q in P.
    let mut reps = vec![];
    let mut covered = vec![];
    for &x in p_sub {
        if covered.contains(&x) {
            continue;
        }
        reps.push(x);
        for &u in q_sub {
            covered.push(g.mul(x, u));
        }
    }
    let mut out = vec![0; g.n];
    for &x in &reps {
        for (i, &c) in a.iter().enumerate() {
            if c != 0 {
                let img = g.conj(x, i);
                out[img] = field.add(out[img], c);
            }
        }
    }
    out
}

/// Dimension data for the Brauer-quotient basis lemma: with the P-stable
/// basis G, dim (kG)^P - dim sum of proper relative-trace images must equal
/// |C_G(P)|.
pub fn brauer_quotient_dims(g: &FinGroup, alg: &SCAlgebra, p_sub: &[usize]) -> (usize, usize, usize) {
    use crate::ffalg::matrix::{Mat, Subspace};
    let field = &alg.field;
    // (kG)^P: spanned by P-conjugation orbit sums on G.
    let mut seen = vec![false; g.n];
    let mut fixed_dim = 0;
    let mut orbit_sums: Vec<Vec<u64>> = vec![];
    for x in 0..g.n {
        if seen[x] {
            continue;
        }
        let mut orbit = vec![];
        for &u in p_sub {
            let y = g.conj(u, x);
            if !orbit.contains(&y) {
                orbit.push(y);
            }
        }
        for &y in &orbit {
            seen[y] = true;
        }
        let mut v = vec![0; g.n];
        for &y in &orbit {
            v[y] = 1;
        }
        orbit_sums.push(v);
        fixed_dim += 1;
    }
    // Sum of Tr_Q^P((kG)^Q) over proper subgroups Q < P.
    let p_group = g.subgroup(p_sub);
    let mut trace_span = Subspace::new(g.n);
    for q_local in p_group.all_subgroups() {
        if q_local.len() == p_sub.len() {
            continue;
        }
        let q_sub: Vec<usize> = q_local.iter().map(|&i| p_sub[i]).collect();
        // Q-fixed points: Q-orbit sums.
        let mut seen_q = vec![false; g.n];
        for x in 0..g.n {
            if seen_q[x] {
                continue;
            }
            let mut orbit = vec![];
            for &u in &q_sub {
                let y = g.conj(u, x);
                if !orbit.contains(&y) {
                    orbit.push(y);
                }
            }
            for &y in &orbit {
                seen_q[y] = true;
            }
            let mut v = vec![0; g.n];
            for &y in &orbit {
                v[y] = 1;
            }
            let tr = relative_trace(g, alg, p_sub, &q_sub, &v);
            trace_span.insert(&tr, field);
        }
    }
    let _ = Mat::zero(0, 0);
    (fixed_dim, trace_span.dim(), g.centralizer(p_sub).len())
}

/// The unique block b of kG with br_P(b) c != 0, for c a block of kN_G(P).
pub fn associated_block_of_block(
    g: &FinGroup,
    alg: &SCAlgebra,
    blocks: &[BlockIdem],
    p_sub: &[usize],
    c: &[u64],
) -> Result<usize> {
    let field = &alg.field;
    let mut hit = None;
    for (i, b) in blocks.iter().enumerate() {
        let img = brauer_map(g, alg, p_sub, &b.coeffs)?;
        let n_alg = group_algebra(&img.normalizer, field.clone());
        let prod = n_alg.mul_vec(&img.in_normalizer, c);
        if prod.iter().any(|&x| x != 0) {
            if hit.is_some() {
                return Err(Error::AssociatedBlockMultiple);
            }
            hit = Some(i);
        }
    }
    hit.ok_or(Error::AssociatedBlockNone)
}

/// The unique block b of kG with br_P(b) U != 0, for U a module over
/// k[N_G(P)/P] pulled back to kN_G(P).
pub fn associated_block_of_module(
    g: &FinGroup,
    alg: &SCAlgebra,
    blocks: &[BlockIdem],
    p_sub: &[usize],
    u: &ModuleRep,
) -> Result<usize> {
    let field = &alg.field;
    let mut hit = None;
    for (i, b) in blocks.iter().enumerate() {
        let img = brauer_map(g, alg, p_sub, &b.coeffs)?;
        // Act through the push-forward on the quotient module.
        let action = u.act(&img.pushed, field);
        if !action.is_zero() {
            if hit.is_some() {
                return Err(Error::AssociatedBlockMultiple);
            }
            hit = Some(i);
        }
    }
    hit.ok_or(Error::AssociatedBlockNone)
}

/// Permutation of a simple-module list under the Frobenius twist x -> x^{p^j}.
pub fn frobenius_perm(
    simples: &[ModuleRep],
    alg: &SCAlgebra,
    j: u32,
    rng: &mut impl RngCore,
) -> Result<Vec<usize>> {
    let mut perm = vec![0; simples.len()];
    for (i, s) in simples.iter().enumerate() {
        let tw = s.frobenius_twist(alg, crate::ffalg::field::GaloisElement { j })?;
        let img = simples
            .iter()
            .position(|t| module_isomorphic(&tw, t, alg, rng).is_some())
            .ok_or_else(|| Error::CatalogMissingImage("Frobenius twist of a simple".into()))?;
        perm[i] = img;
    }
    Ok(perm)
}

/// Relabel a module along a group isomorphism F: G -> G' (element map) and
/// identify it in a list of simples over kG'.
pub fn transport_module(m: &ModuleRep, iso: &[usize], target_size: usize) -> ModuleRep {
    let mut mats = vec![crate::ffalg::matrix::Mat::zero(m.dim, m.dim); target_size];
    for (src, &dst) in iso.iter().enumerate() {
        mats[dst] = m.mats[src].clone();
    }
    ModuleRep { dim: m.dim, mats }
}
