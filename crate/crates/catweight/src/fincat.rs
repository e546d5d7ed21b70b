//! Finite categories presented by composition tables.
//!
//! Objects and morphisms are interned to indices; the input-file order is
//! kept, and every enumeration emits a canonical order so identical inputs
//! give identical outputs.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Raw JSON shape of a category file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawCategory {
    pub objects: Vec<String>,
    pub morphisms: Vec<RawMorphism>,
    /// object id -> identity morphism id
    pub identity: std::collections::BTreeMap<String, String>,
    /// "outer|inner" -> composite id, meaning outer ∘ inner
    pub composition: std::collections::BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metadata: Option<serde_json::Value>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawMorphism {
    pub id: String,
    pub dom: String,
    pub cod: String,
}

/// A defect found while validating a composition table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CategoryDefect {
    DuplicateObject(String),
    DuplicateMorphism(String),
    UnknownObject { morphism: String, object: String },
    UnknownMorphism(String),
    MissingIdentity(String),
    BadIdentity { object: String, reason: String },
    IdentityNotUnit { identity: String, morphism: String },
    MissingComposite { outer: String, inner: String },
    IllTypedComposite { outer: String, inner: String, reason: String },
    NonAssociative { h: String, g: String, f: String },
}

impl fmt::Display for CategoryDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CategoryDefect::DuplicateObject(o) => write!(f, "duplicate object id {o}"),
            CategoryDefect::DuplicateMorphism(m) => write!(f, "duplicate morphism id {m}"),
            CategoryDefect::UnknownObject { morphism, object } => {
                write!(f, "morphism {morphism} references unknown object {object}")
            }
            CategoryDefect::UnknownMorphism(m) => write!(f, "unknown morphism id {m}"),
            CategoryDefect::MissingIdentity(o) => write!(f, "object {o} has no identity"),
            CategoryDefect::BadIdentity { object, reason } => {
                write!(f, "bad identity for object {object}: {reason}")
            }
            CategoryDefect::IdentityNotUnit { identity, morphism } => {
                write!(f, "identity {identity} is not a unit for {morphism}")
            }
            CategoryDefect::MissingComposite { outer, inner } => {
                write!(f, "composable pair {outer} o {inner} missing from the table")
            }
            CategoryDefect::IllTypedComposite { outer, inner, reason } => {
                write!(f, "ill-typed composite {outer} o {inner}: {reason}")
            }
            CategoryDefect::NonAssociative { h, g, f: ff } => {
                write!(f, "associativity fails on ({h} o {g}) o {ff}")
            }
        }
    }
}

const NONE: u32 = u32::MAX;

/// A validated finite category. Composition is total on composable pairs and
/// associativity holds; both are checked exhaustively at construction.
#[derive(Debug, Clone)]
pub struct FinCategory {
    pub objects: Vec<String>,
    pub mor_labels: Vec<String>,
    dom: Vec<usize>,
    cod: Vec<usize>,
    identity: Vec<usize>,
    table: CompTable,
    /// Morphisms grouped by (dom, cod), in id order.
    hom: HashMap<(usize, usize), Vec<usize>>,
}

#[derive(Debug, Clone)]
enum CompTable {
    Dense { stride: usize, data: Vec<u32> },
    Sparse(HashMap<(u32, u32), u32>),
}

/// An idempotent endomorphism e with e∘e = e.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Idempotent {
    pub object: usize,
    pub morph: usize,
}

/// Witness (s, t) for an isomorphism of idempotents: t∘s = e, s∘t = f,
/// normalised so that s = f∘s∘e and t = e∘t∘f.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdemIsoWitness {
    pub s: usize,
    pub t: usize,
    pub source: Idempotent,
    pub target: Idempotent,
}

/// The unit group of the monoid e∘End(X)∘e.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxSubgroup {
    pub base: Idempotent,
    /// Morphism ids, closed under composition; elements[unit_pos] = e.
    pub elements: Vec<usize>,
}

/// A composition-preserving pair of bijections on objects and morphisms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CatAutomorphism {
    pub obj_map: Vec<usize>,
    pub mor_map: Vec<usize>,
}

impl FinCategory {
    /// Validate a raw composition table into a category, or report every
    /// defect found.
    pub fn validate(raw: &RawCategory) -> std::result::Result<FinCategory, Vec<CategoryDefect>> {
        let mut defects = vec![];
        let mut obj_idx = HashMap::new();
        for (i, o) in raw.objects.iter().enumerate() {
            if obj_idx.insert(o.clone(), i).is_some() {
                defects.push(CategoryDefect::DuplicateObject(o.clone()));
            }
        }
        let mut mor_idx = HashMap::new();
        for (i, m) in raw.morphisms.iter().enumerate() {
            if mor_idx.insert(m.id.clone(), i).is_some() {
                defects.push(CategoryDefect::DuplicateMorphism(m.id.clone()));
            }
        }
        let n = raw.morphisms.len();
        let mut dom = vec![0; n];
        let mut cod = vec![0; n];
        for (i, m) in raw.morphisms.iter().enumerate() {
            match obj_idx.get(&m.dom) {
                Some(&d) => dom[i] = d,
                None => defects.push(CategoryDefect::UnknownObject {
                    morphism: m.id.clone(),
                    object: m.dom.clone(),
                }),
            }
            match obj_idx.get(&m.cod) {
                Some(&c) => cod[i] = c,
                None => defects.push(CategoryDefect::UnknownObject {
                    morphism: m.id.clone(),
                    object: m.cod.clone(),
                }),
            }
        }
        if !defects.is_empty() {
            return Err(defects);
        }

        let mut identity = vec![usize::MAX; raw.objects.len()];
        for (o, m) in &raw.identity {
            let Some(&oi) = obj_idx.get(o) else {
                defects.push(CategoryDefect::UnknownObject {
                    morphism: format!("identity({o})"),
                    object: o.clone(),
                });
                continue;
            };
            let Some(&mi) = mor_idx.get(m) else {
                defects.push(CategoryDefect::UnknownMorphism(m.clone()));
                continue;
            };
            if dom[mi] != oi || cod[mi] != oi {
                defects.push(CategoryDefect::BadIdentity {
                    object: o.clone(),
                    reason: format!("{m} is not an endomorphism of {o}"),
                });
            } else {
                identity[oi] = mi;
            }
        }
        for (oi, o) in raw.objects.iter().enumerate() {
            if identity[oi] == usize::MAX {
                defects.push(CategoryDefect::MissingIdentity(o.clone()));
            }
        }
        if !defects.is_empty() {
            return Err(defects);
        }

        // Composition table.
        let dense = n <= 2048;
        let mut table = if dense {
            CompTable::Dense {
                stride: n,
                data: vec![NONE; n * n],
            }
        } else {
            CompTable::Sparse(HashMap::new())
        };
        for (key, val) in &raw.composition {
            let Some((g_id, f_id)) = key.split_once('|') else {
                defects.push(CategoryDefect::IllTypedComposite {
                    outer: key.clone(),
                    inner: String::new(),
                    reason: "key is not of the form outer|inner".into(),
                });
                continue;
            };
            let (Some(&g), Some(&f)) = (mor_idx.get(g_id), mor_idx.get(f_id)) else {
                defects.push(CategoryDefect::UnknownMorphism(key.clone()));
                continue;
            };
            let Some(&h) = mor_idx.get(val) else {
                defects.push(CategoryDefect::UnknownMorphism(val.clone()));
                continue;
            };
            if cod[f] != dom[g] {
                defects.push(CategoryDefect::IllTypedComposite {
                    outer: g_id.into(),
                    inner: f_id.into(),
                    reason: "pair is not composable".into(),
                });
                continue;
            }
            if dom[h] != dom[f] || cod[h] != cod[g] {
                defects.push(CategoryDefect::IllTypedComposite {
                    outer: g_id.into(),
                    inner: f_id.into(),
                    reason: format!("composite {val} has the wrong type"),
                });
                continue;
            }
            table.set(g as u32, f as u32, h as u32);
        }

        // Totality on composable pairs.
        for g in 0..n {
            for f in 0..n {
                if cod[f] == dom[g] && table.get(g as u32, f as u32).is_none() {
                    defects.push(CategoryDefect::MissingComposite {
                        outer: raw.morphisms[g].id.clone(),
                        inner: raw.morphisms[f].id.clone(),
                    });
                }
            }
        }
        if !defects.is_empty() {
            return Err(defects);
        }

        let mut hom: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for i in 0..n {
            hom.entry((dom[i], cod[i])).or_default().push(i);
        }
        let cat = FinCategory {
            objects: raw.objects.clone(),
            mor_labels: raw.morphisms.iter().map(|m| m.id.clone()).collect(),
            dom,
            cod,
            identity,
            table,
            hom,
        };

        // Unit laws.
        for m in 0..n {
            let idc = cat.identity[cat.cod[m]];
            let idd = cat.identity[cat.dom[m]];
            if cat.compose(idc, m) != Some(m) {
                defects.push(CategoryDefect::IdentityNotUnit {
                    identity: cat.mor_labels[idc].clone(),
                    morphism: cat.mor_labels[m].clone(),
                });
            }
            if cat.compose(m, idd) != Some(m) {
                defects.push(CategoryDefect::IdentityNotUnit {
                    identity: cat.mor_labels[idd].clone(),
                    morphism: cat.mor_labels[m].clone(),
                });
            }
        }
        if !defects.is_empty() {
            return Err(defects);
        }

        // Exhaustive associativity over composable triples, walking
        // morphisms by object adjacency.
        for f in 0..n {
            let mid = cat.cod[f];
            for &g in cat.out_of(mid) {
                let gf = cat.compose(g, f).unwrap();
                for &h in cat.out_of(cat.cod[g]) {
                    let hg = cat.compose(h, g).unwrap();
                    if cat.compose(h, gf) != cat.compose(hg, f) {
                        defects.push(CategoryDefect::NonAssociative {
                            h: cat.mor_labels[h].clone(),
                            g: cat.mor_labels[g].clone(),
                            f: cat.mor_labels[f].clone(),
                        });
                        if defects.len() > 32 {
                            return Err(defects);
                        }
                    }
                }
            }
        }
        if !defects.is_empty() {
            return Err(defects);
        }
        Ok(cat)
    }

    pub fn from_raw(raw: &RawCategory) -> Result<FinCategory> {
        FinCategory::validate(raw).map_err(Error::InvalidCategory)
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn n_morphisms(&self) -> usize {
        self.mor_labels.len()
    }

    pub fn dom(&self, m: usize) -> usize {
        self.dom[m]
    }

    pub fn cod(&self, m: usize) -> usize {
        self.cod[m]
    }

    pub fn identity_of(&self, obj: usize) -> usize {
        self.identity[obj]
    }

    /// g ∘ f, defined exactly when cod(f) = dom(g).
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        if self.cod[f] != self.dom[g] {
            return None;
        }
        self.table.get(g as u32, f as u32).map(|x| x as usize)
    }

    /// Compose a sequence right-to-left: compose_all([h, g, f]) = h∘g∘f.
    pub fn compose_all(&self, ms: &[usize]) -> Option<usize> {
        let (&last, rest) = ms.split_last()?;
        let mut acc = last;
        for &m in rest.iter().rev() {
            acc = self.compose(m, acc)?;
        }
        Some(acc)
    }

    pub fn hom(&self, x: usize, y: usize) -> &[usize] {
        self.hom.get(&(x, y)).map(|v| v.as_slice()).unwrap_or(&[])
    }

    fn out_of(&self, x: usize) -> impl Iterator<Item = &usize> {
        self.objects
            .iter()
            .enumerate()
            .flat_map(move |(y, _)| self.hom(x, y).iter())
    }

    pub fn endos(&self, x: usize) -> &[usize] {
        self.hom(x, x)
    }

    /// All idempotent endomorphisms in canonical (object, morphism) order;
    /// includes every identity.
    pub fn idempotent_endos(&self) -> Vec<Idempotent> {
        let mut out = vec![];
        for x in 0..self.n_objects() {
            for &m in self.endos(x) {
                if self.compose(m, m) == Some(m) {
                    out.push(Idempotent { object: x, morph: m });
                }
            }
        }
        out.sort();
        out
    }

    /// Exhaustive search for an isomorphism witness between two idempotents,
    /// returning the lexicographically first normalised witness.
    pub fn idempotents_isomorphic(
        &self,
        e: Idempotent,
        f: Idempotent,
    ) -> Option<IdemIsoWitness> {
        let (x, y) = (e.object, f.object);
        // Candidate s in f∘Hom(X,Y)∘e, t in e∘Hom(Y,X)∘f, already normalised.
        let mut s_cands: Vec<usize> = self
            .hom(x, y)
            .iter()
            .filter_map(|&s| self.compose_all(&[f.morph, s, e.morph]))
            .collect();
        s_cands.sort();
        s_cands.dedup();
        let mut t_cands: Vec<usize> = self
            .hom(y, x)
            .iter()
            .filter_map(|&t| self.compose_all(&[e.morph, t, f.morph]))
            .collect();
        t_cands.sort();
        t_cands.dedup();
        for &s in &s_cands {
            for &t in &t_cands {
                if self.compose(t, s) == Some(e.morph) && self.compose(s, t) == Some(f.morph) {
                    debug_assert_eq!(self.compose_all(&[f.morph, s, e.morph]), Some(s));
                    debug_assert_eq!(self.compose_all(&[e.morph, t, f.morph]), Some(t));
                    return Some(IdemIsoWitness {
                        s,
                        t,
                        source: e,
                        target: f,
                    });
                }
            }
        }
        None
    }

    /// The unit group of the monoid e∘End(X)∘e.
    pub fn maximal_subgroup(&self, e: Idempotent) -> MaxSubgroup {
        let x = e.object;
        let mut monoid: Vec<usize> = self
            .endos(x)
            .iter()
            .filter_map(|&h| self.compose_all(&[e.morph, h, e.morph]))
            .collect();
        monoid.sort();
        monoid.dedup();
        let invertible: Vec<usize> = monoid
            .iter()
            .copied()
            .filter(|&u| {
                monoid.iter().any(|&v| {
                    self.compose(u, v) == Some(e.morph) && self.compose(v, u) == Some(e.morph)
                })
            })
            .collect();
        MaxSubgroup {
            base: e,
            elements: invertible,
        }
    }

    /// EI-categories: every endomorphism is an isomorphism.
    pub fn is_ei(&self) -> bool {
        (0..self.n_objects()).all(|x| {
            let id = self.identity[x];
            self.endos(x).iter().all(|&h| {
                self.endos(x)
                    .iter()
                    .any(|&k| self.compose(h, k) == Some(id) && self.compose(k, h) == Some(id))
            })
        })
    }

    /// The full automorphism group, by backtracking over object and morphism
    /// bijections. `cap` bounds the number of search nodes.
    pub fn enumerate_automorphisms(&self, cap: u64) -> Result<Vec<CatAutomorphism>> {
        let mut finder = AutFinder {
            cat: self,
            cap,
            nodes: 0,
            found: vec![],
        };
        let n_obj = self.n_objects();
        let mut obj_map = vec![usize::MAX; n_obj];
        let mut obj_used = vec![false; n_obj];
        finder.assign_objects(0, &mut obj_map, &mut obj_used)?;
        let mut found = finder.found;
        found.sort_by(|a, b| (&a.obj_map, &a.mor_map).cmp(&(&b.obj_map, &b.mor_map)));
        Ok(found)
    }

    pub fn apply_to_idempotent(&self, aut: &CatAutomorphism, e: Idempotent) -> Idempotent {
        Idempotent {
            object: aut.obj_map[e.object],
            morph: aut.mor_map[e.morph],
        }
    }

    pub fn apply_to_subgroup(&self, aut: &CatAutomorphism, g: &MaxSubgroup) -> MaxSubgroup {
        let mut elements: Vec<usize> = g.elements.iter().map(|&m| aut.mor_map[m]).collect();
        elements.sort();
        MaxSubgroup {
            base: self.apply_to_idempotent(aut, g.base),
            elements,
        }
    }

    /// Compose two automorphisms: (a ∘ b)(x) = a(b(x)).
    pub fn compose_automorphisms(&self, a: &CatAutomorphism, b: &CatAutomorphism) -> CatAutomorphism {
        CatAutomorphism {
            obj_map: b.obj_map.iter().map(|&x| a.obj_map[x]).collect(),
            mor_map: b.mor_map.iter().map(|&m| a.mor_map[m]).collect(),
        }
    }

    pub fn invert_automorphism(&self, a: &CatAutomorphism) -> CatAutomorphism {
        let mut obj_map = vec![0; a.obj_map.len()];
        for (i, &j) in a.obj_map.iter().enumerate() {
            obj_map[j] = i;
        }
        let mut mor_map = vec![0; a.mor_map.len()];
        for (i, &j) in a.mor_map.iter().enumerate() {
            mor_map[j] = i;
        }
        CatAutomorphism { obj_map, mor_map }
    }

    pub fn identity_automorphism(&self) -> CatAutomorphism {
        CatAutomorphism {
            obj_map: (0..self.n_objects()).collect(),
            mor_map: (0..self.n_morphisms()).collect(),
        }
    }

    /// Serialise back to the JSON schema.
    pub fn to_raw(&self, metadata: Option<serde_json::Value>) -> RawCategory {
        let mut composition = std::collections::BTreeMap::new();
        for g in 0..self.n_morphisms() {
            for f in 0..self.n_morphisms() {
                if let Some(h) = self.compose(g, f) {
                    composition.insert(
                        format!("{}|{}", self.mor_labels[g], self.mor_labels[f]),
                        self.mor_labels[h].clone(),
                    );
                }
            }
        }
        RawCategory {
            objects: self.objects.clone(),
            morphisms: (0..self.n_morphisms())
                .map(|m| RawMorphism {
                    id: self.mor_labels[m].clone(),
                    dom: self.objects[self.dom[m]].clone(),
                    cod: self.objects[self.cod[m]].clone(),
                })
                .collect(),
            identity: (0..self.n_objects())
                .map(|o| {
                    (
                        self.objects[o].clone(),
                        self.mor_labels[self.identity[o]].clone(),
                    )
                })
                .collect(),
            composition,
            metadata,
        }
    }
}

impl CompTable {
    fn set(&mut self, g: u32, f: u32, h: u32) {
        match self {
            CompTable::Dense { stride, data } => data[g as usize * *stride + f as usize] = h,
            CompTable::Sparse(map) => {
                map.insert((g, f), h);
            }
        }
    }

    fn get(&self, g: u32, f: u32) -> Option<u32> {
        match self {
            CompTable::Dense { stride, data } => {
                let v = data[g as usize * *stride + f as usize];
                (v != NONE).then_some(v)
            }
            CompTable::Sparse(map) => map.get(&(g, f)).copied(),
        }
    }
}

struct AutFinder<'a> {
    cat: &'a FinCategory,
    cap: u64,
    nodes: u64,
    found: Vec<CatAutomorphism>,
}

impl AutFinder<'_> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(Error::AutCapExceeded { bound: self.cap });
        }
        Ok(())
    }

    fn assign_objects(
        &mut self,
        next: usize,
        obj_map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> Result<()> {
        let cat = self.cat;
        if next == cat.n_objects() {
            let n = cat.n_morphisms();
            let mut mor_map = vec![usize::MAX; n];
            let mut mor_used = vec![false; n];
            // Identities are forced by the object map.
            for x in 0..cat.n_objects() {
                let img = cat.identity[obj_map[x]];
                mor_map[cat.identity[x]] = img;
                mor_used[img] = true;
            }
            return self.assign_morphisms(0, obj_map, &mut mor_map, &mut mor_used);
        }
        for img in 0..cat.n_objects() {
            if used[img] {
                continue;
            }
            self.tick()?;
            // Hom-set cardinalities must match for every already-mapped pair.
            let compatible = (0..=next).all(|x| {
                let xi = if x == next { img } else { obj_map[x] };
                cat.hom(x, next).len() == cat.hom(xi, img).len()
                    && cat.hom(next, x).len() == cat.hom(img, xi).len()
            });
            if !compatible {
                continue;
            }
            obj_map[next] = img;
            used[img] = true;
            self.assign_objects(next + 1, obj_map, used)?;
            obj_map[next] = usize::MAX;
            used[img] = false;
        }
        Ok(())
    }

    fn assign_morphisms(
        &mut self,
        next: usize,
        obj_map: &[usize],
        mor_map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> Result<()> {
        let cat = self.cat;
        let n = cat.n_morphisms();
        let next = (next..n).find(|&m| mor_map[m] == usize::MAX);
        let Some(m) = next else {
            self.found.push(CatAutomorphism {
                obj_map: obj_map.to_vec(),
                mor_map: mor_map.clone(),
            });
            return Ok(());
        };
        let (d, c) = (obj_map[cat.dom[m]], obj_map[cat.cod[m]]);
        let candidates: Vec<usize> = cat.hom(d, c).to_vec();
        for img in candidates {
            if used[img] {
                continue;
            }
            self.tick()?;
            mor_map[m] = img;
            used[img] = true;
            if self.consistent(m, mor_map) {
                self.assign_morphisms(m + 1, obj_map, mor_map, used)?;
            }
            mor_map[m] = usize::MAX;
            used[img] = false;
        }
        Ok(())
    }

    /// Check every composition constraint in which `m` appears as a factor
    /// or as the composite and whose factors are already assigned. Each
    /// constraint is fully verified at the assignment of the last of its
    /// three participants.
    fn consistent(&self, m: usize, mor_map: &[usize]) -> bool {
        let cat = self.cat;
        let n = cat.n_morphisms();
        for g in 0..n {
            if mor_map[g] == usize::MAX {
                continue;
            }
            for f in 0..n {
                if mor_map[f] == usize::MAX {
                    continue;
                }
                let Some(h) = cat.compose(g, f) else { continue };
                if g != m && f != m && h != m {
                    continue;
                }
                match cat.compose(mor_map[g], mor_map[f]) {
                    None => return false,
                    Some(hi) => {
                        if mor_map[h] != usize::MAX && mor_map[h] != hi {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn terminal_category_is_valid() {
        let c = corpus::terminal();
        assert_eq!(c.n_morphisms(), 1);
        assert_eq!(c.idempotent_endos().len(), 1);
        assert!(c.is_ei());
    }

    #[test]
    fn chain2_is_valid_poset() {
        let c = corpus::chain2();
        assert_eq!(c.n_morphisms(), 3);
        assert!(c.is_ei());
        assert_eq!(c.idempotent_endos().len(), 2);
    }

    #[test]
    fn planted_nonassociativity_is_reported() {
        // Monoid {1, a} with a*a = a but the table entry for a∘a corrupted
        // after adding a third morphism to break the triple (b, a, a).
        let raw = RawCategory {
            objects: vec!["X".into()],
            morphisms: vec![
                RawMorphism { id: "1".into(), dom: "X".into(), cod: "X".into() },
                RawMorphism { id: "a".into(), dom: "X".into(), cod: "X".into() },
                RawMorphism { id: "b".into(), dom: "X".into(), cod: "X".into() },
            ],
            identity: [("X".to_string(), "1".to_string())].into_iter().collect(),
            composition: [
                ("1|1", "1"), ("1|a", "a"), ("a|1", "a"), ("1|b", "b"), ("b|1", "b"),
                ("a|a", "1"), ("a|b", "b"), ("b|a", "a"), ("b|b", "b"),
            ]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect(),
            metadata: None,
        };
        let defects = FinCategory::validate(&raw).unwrap_err();
        assert!(defects
            .iter()
            .any(|d| matches!(d, CategoryDefect::NonAssociative { .. })));
    }

    #[test]
    fn monoid_idempotents_and_non_isomorphism() {
        let c = corpus::monoid_e();
        let idems = c.idempotent_endos();
        assert_eq!(idems.len(), 2);
        // 1 and e are not isomorphic: exhaustive 2x2 search must fail.
        assert!(c.idempotents_isomorphic(idems[0], idems[1]).is_none());
        // Reflexivity gives the witness (e, e).
        let w = c.idempotents_isomorphic(idems[1], idems[1]).unwrap();
        assert_eq!((w.s, w.t), (idems[1].morph, idems[1].morph));
        assert!(!c.is_ei());
    }

    #[test]
    fn s3_has_only_identity_idempotent() {
        let c = corpus::s3();
        assert_eq!(c.idempotent_endos().len(), 1);
        assert!(c.is_ei());
        let g = c.maximal_subgroup(c.idempotent_endos()[0]);
        assert_eq!(g.elements.len(), 6);
    }

    #[test]
    fn t2_unit_group_is_c2() {
        let c = corpus::t2();
        let id = Idempotent {
            object: 0,
            morph: c.identity_of(0),
        };
        let g = c.maximal_subgroup(id);
        assert_eq!(g.elements.len(), 2);
        assert!(!c.is_ei());
    }

    #[test]
    fn band_idempotents_isomorphic() {
        let c = corpus::band();
        let idems = c.idempotent_endos();
        assert_eq!(idems.len(), 2);
        let w = c.idempotents_isomorphic(idems[0], idems[1]).unwrap();
        assert_eq!(c.compose(w.t, w.s), Some(idems[0].morph));
        assert_eq!(c.compose(w.s, w.t), Some(idems[1].morph));
    }

    #[test]
    fn poset_maximal_subgroup_is_trivial() {
        let c = corpus::chain2();
        for e in c.idempotent_endos() {
            assert_eq!(c.maximal_subgroup(e).elements.len(), 1);
        }
    }

    #[test]
    fn terminal_automorphisms() {
        let c = corpus::terminal();
        let auts = c.enumerate_automorphisms(1_000_000).unwrap();
        assert_eq!(auts.len(), 1);
    }

    #[test]
    fn discrete_two_object_automorphisms() {
        let raw = RawCategory {
            objects: vec!["X".into(), "Y".into()],
            morphisms: vec![
                RawMorphism { id: "1x".into(), dom: "X".into(), cod: "X".into() },
                RawMorphism { id: "1y".into(), dom: "Y".into(), cod: "Y".into() },
            ],
            identity: [("X", "1x"), ("Y", "1y")]
                .into_iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            composition: [("1x|1x", "1x"), ("1y|1y", "1y")]
                .into_iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            metadata: None,
        };
        let c = FinCategory::from_raw(&raw).unwrap();
        let auts = c.enumerate_automorphisms(1_000_000).unwrap();
        assert_eq!(auts.len(), 2);
    }

    #[test]
    fn c3_automorphisms_give_inversion() {
        let c = corpus::cyclic(3);
        let auts = c.enumerate_automorphisms(1_000_000).unwrap();
        assert_eq!(auts.len(), 2);
        // The nontrivial automorphism maps g to g^2.
        let nontrivial = auts
            .iter()
            .find(|a| *a != &c.identity_automorphism())
            .unwrap();
        assert_eq!(nontrivial.mor_map[1], 2);
        assert_eq!(nontrivial.mor_map[2], 1);
    }

    #[test]
    fn automorphism_cap_is_signalled() {
        let c = corpus::s3();
        assert!(matches!(
            c.enumerate_automorphisms(1),
            Err(crate::error::Error::AutCapExceeded { bound: 1 })
        ));
    }

    #[test]
    fn s4_automorphism_group_has_order_24() {
        let c = corpus::s4();
        let auts = c.enumerate_automorphisms(10_000_000).unwrap();
        assert_eq!(auts.len(), 24);
    }

    #[test]
    fn iso_is_equivalence_relation_on_corpus() {
        for (_, c) in corpus::all() {
            let idems = c.idempotent_endos();
            for &e in &idems {
                assert!(c.idempotents_isomorphic(e, e).is_some());
            }
            for &e in &idems {
                for &f in &idems {
                    let ef = c.idempotents_isomorphic(e, f).is_some();
                    let fe = c.idempotents_isomorphic(f, e).is_some();
                    assert_eq!(ef, fe);
                    for &g in &idems {
                        if ef && c.idempotents_isomorphic(f, g).is_some() {
                            assert!(c.idempotents_isomorphic(e, g).is_some());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn witnesses_satisfy_normalised_equalities() {
        for (_, c) in corpus::all() {
            let idems = c.idempotent_endos();
            for &e in &idems {
                for &f in &idems {
                    if let Some(w) = c.idempotents_isomorphic(e, f) {
                        assert_eq!(c.compose(w.t, w.s), Some(e.morph));
                        assert_eq!(c.compose(w.s, w.t), Some(f.morph));
                        assert_eq!(c.compose_all(&[f.morph, w.s, e.morph]), Some(w.s));
                        assert_eq!(c.compose_all(&[e.morph, w.t, f.morph]), Some(w.t));
                    }
                }
            }
        }
    }

    #[test]
    fn automorphisms_preserve_idempotent_isomorphism() {
        for name in ["monoid_e", "band", "t2", "chain2", "c3"] {
            let c = corpus::by_name(name).unwrap();
            let auts = c.enumerate_automorphisms(1_000_000).unwrap();
            let idems = c.idempotent_endos();
            for aut in &auts {
                for &e in &idems {
                    for &f in &idems {
                        let before = c.idempotents_isomorphic(e, f).is_some();
                        let after = c
                            .idempotents_isomorphic(
                                c.apply_to_idempotent(aut, e),
                                c.apply_to_idempotent(aut, f),
                            )
                            .is_some();
                        assert_eq!(before, after);
                    }
                }
            }
        }
    }

    #[test]
    fn ei_implies_only_identity_idempotents() {
        for (_, c) in corpus::all() {
            if c.is_ei() {
                for e in c.idempotent_endos() {
                    assert_eq!(e.morph, c.identity_of(e.object));
                }
            }
        }
    }
}
