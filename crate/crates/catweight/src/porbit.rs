//! The p-transporter category T_C and the p-orbit category O_C.
//!
//! Objects of both are pairs (X, P) with P a not necessarily unitary
//! p-subgroup of End_C(X): a subgroup of the unit group G_f of some
//! idempotent f in End(X), whose unit 1_P = f need not be Id_X. Morphisms of
//! T_C from (X, P) to (Y, Q) are the s with s = s∘1_P = 1_Q∘s and
//! s∘P ⊆ Q∘s; morphisms of O_C are the Q-P-orbits Q∘s∘P (each in fact a
//! single Q-orbit), represented by their minimal morphism id.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fincat::{FinCategory, Idempotent, RawCategory, RawMorphism};
use crate::grouprep::FinGroup;

/// An object (X, P) of T_C / O_C, with P as a sorted set of morphism ids.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TObject {
    pub obj: usize,
    pub psub: Vec<usize>,
    /// The unit 1_P of the subgroup, an idempotent endomorphism of X.
    pub unit: usize,
}

/// T_C as a validated category plus the bookkeeping back to C.
#[derive(Debug, Clone)]
pub struct Transporter {
    pub cat: FinCategory,
    pub objects: Vec<TObject>,
    /// Underlying C-morphism of each T_C-morphism.
    pub underlying: Vec<usize>,
    pub p: u64,
    /// The (X, P) labelling block emitted with the category.
    pub metadata: serde_json::Value,
}

/// O_C as a validated category; each morphism is an orbit with a canonical
/// representative.
#[derive(Debug, Clone)]
pub struct Orbit {
    pub cat: FinCategory,
    pub objects: Vec<TObject>,
    /// Minimal-id representative (a C-morphism) of each O_C-morphism.
    pub orbit_rep: Vec<usize>,
    /// Full orbit, as sorted underlying C-morphism ids.
    pub orbit_members: Vec<Vec<usize>>,
    pub p: u64,
    /// The (X, P) labelling block emitted with the category.
    pub metadata: serde_json::Value,
}

/// Representatives: E of idempotent isomorphism classes, and for each e a
/// set X_e of p-subgroups of G_e up to G_e-conjugacy.
#[derive(Debug, Clone)]
pub struct RepSystem {
    pub idems: Vec<Idempotent>,
    /// psubs[i] lists the subgroups for idems[i], each a sorted set of
    /// morphism ids containing idems[i].morph as its unit.
    pub psubs: Vec<Vec<Vec<usize>>>,
    pub p: u64,
}

fn is_p_power(mut n: u64, p: u64) -> bool {
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// All p-subgroups of the monoid End_C(X): for each idempotent f in End(X),
/// every p-subgroup of the unit group G_f, as a set of morphism ids.
pub fn p_subgroups_of_monoid(cat: &FinCategory, x: usize, p: u64) -> Vec<TObject> {
    let mut out = vec![];
    for &m in cat.endos(x) {
        if cat.compose(m, m) != Some(m) {
            continue;
        }
        let e = Idempotent { object: x, morph: m };
        let g = cat.maximal_subgroup(e);
        let group = FinGroup::from_max_subgroup(cat, &g);
        for local in group.all_p_subgroups(p) {
            let mut psub: Vec<usize> = local.iter().map(|&i| g.elements[i]).collect();
            psub.sort();
            debug_assert!(is_p_power(psub.len() as u64, p));
            out.push(TObject {
                obj: x,
                psub,
                unit: m,
            });
        }
    }
    out.sort_by(|a, b| (a.obj, a.psub.len(), &a.psub).cmp(&(b.obj, b.psub.len(), &b.psub)));
    out.dedup();
    out
}

fn obj_label(cat: &FinCategory, t: &TObject) -> String {
    let elems: Vec<&str> = t.psub.iter().map(|&m| cat.mor_labels[m].as_str()).collect();
    format!("({},{{{}}})", cat.objects[t.obj], elems.join(" "))
}

/// Whether s is a transporter morphism (X, P) -> (Y, Q).
fn is_t_morphism(cat: &FinCategory, s: usize, src: &TObject, dst: &TObject) -> bool {
    if cat.dom(s) != src.obj || cat.cod(s) != dst.obj {
        return false;
    }
    if cat.compose(s, src.unit) != Some(s) || cat.compose(dst.unit, s) != Some(s) {
        return false;
    }
    // s∘P ⊆ Q∘s
    src.psub.iter().all(|&u| {
        let su = cat.compose(s, u).expect("u is an endomorphism of dom(s)");
        dst.psub.iter().any(|&v| cat.compose(v, s) == Some(su))
    })
}

/// Build the p-transporter category.
pub fn build_transporter(cat: &FinCategory, p: u64) -> Result<Transporter> {
    let mut objects = vec![];
    for x in 0..cat.n_objects() {
        objects.extend(p_subgroups_of_monoid(cat, x, p));
    }
    let labels: Vec<String> = objects.iter().map(|t| obj_label(cat, t)).collect();

    let mut morphisms = vec![];
    let mut underlying = vec![];
    let mut composition = BTreeMap::new();
    let mut index: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new(); // (s, src, dst)
    let mor_label = |s: usize, i: usize, j: usize| format!("{}@{}>{}", cat.mor_labels[s], i, j);
    for (i, src) in objects.iter().enumerate() {
        for (j, dst) in objects.iter().enumerate() {
            for &s in cat.hom(src.obj, dst.obj) {
                if is_t_morphism(cat, s, src, dst) {
                    index.insert((s, i, j), morphisms.len());
                    underlying.push(s);
                    morphisms.push(RawMorphism {
                        id: mor_label(s, i, j),
                        dom: labels[i].clone(),
                        cod: labels[j].clone(),
                    });
                }
            }
        }
    }
    for &(s, i, j) in index.keys() {
        for &(t, j2, k) in index.keys() {
            if j2 != j {
                continue;
            }
            let ts = cat.compose(t, s).expect("types match");
            debug_assert!(
                index.contains_key(&(ts, i, k)),
                "T_C is closed under composition"
            );
            composition.insert(
                format!("{}|{}", mor_label(t, j, k), mor_label(s, i, j)),
                mor_label(ts, i, k),
            );
        }
    }
    let identity: BTreeMap<String, String> = objects
        .iter()
        .enumerate()
        .map(|(i, t)| (labels[i].clone(), mor_label(t.unit, i, i)))
        .collect();
    let metadata = serde_json::json!({
        "kind": "transporter",
        "p": p,
        "objects": objects.iter().enumerate().map(|(i, t)| {
            (labels[i].clone(), serde_json::json!({
                "object": cat.objects[t.obj],
                "psub": t.psub.iter().map(|&m| cat.mor_labels[m].clone()).collect::<Vec<_>>(),
            }))
        }).collect::<BTreeMap<_, _>>(),
    });
    let raw = RawCategory {
        objects: labels,
        morphisms,
        identity,
        composition,
        metadata: Some(metadata.clone()),
    };
    let tcat = FinCategory::from_raw(&raw)?;
    Ok(Transporter {
        cat: tcat,
        objects,
        underlying,
        p,
        metadata,
    })
}

/// Build the p-orbit category from a transporter.
pub fn build_orbit(t: &Transporter, base: &FinCategory) -> Result<Orbit> {
    let cat = base;
    // Orbit of s in Hom((X,P),(Y,Q)) as underlying morphisms: Q∘s∘P.
    let orbit_of = |s: usize, src: &TObject, dst: &TObject| -> Vec<usize> {
        let mut full = vec![];
        for &v in &dst.psub {
            for &u in &src.psub {
                let su = cat.compose(s, u).expect("composable");
                let vsu = cat.compose(v, su).expect("composable");
                if !full.contains(&vsu) {
                    full.push(vsu);
                }
            }
        }
        full.sort();
        // The Q-P-orbit is in fact a Q-orbit.
        let mut left = vec![];
        for &v in &dst.psub {
            let vs = cat.compose(v, s).expect("composable");
            if !left.contains(&vs) {
                left.push(vs);
            }
        }
        left.sort();
        assert_eq!(full, left, "Q-P-orbit must be a Q-orbit");
        full
    };

    let labels: Vec<String> = t.objects.iter().map(|o| obj_label(cat, o)).collect();
    let mut morphisms = vec![];
    let mut orbit_rep = vec![];
    let mut orbit_members: Vec<Vec<usize>> = vec![];
    let mut per_pair: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    let mor_label =
        |rep: usize, i: usize, j: usize| format!("[{}]@{}>{}", cat.mor_labels[rep], i, j);
    for (i, src) in t.objects.iter().enumerate() {
        for (j, dst) in t.objects.iter().enumerate() {
            let mut seen: Vec<usize> = vec![];
            for m in 0..t.cat.n_morphisms() {
                if t.cat.dom(m) != i || t.cat.cod(m) != j {
                    continue;
                }
                let s = t.underlying[m];
                if seen.contains(&s) {
                    continue;
                }
                let orbit = orbit_of(s, src, dst);
                seen.extend(orbit.iter().copied());
                let rep = orbit[0];
                per_pair.entry((i, j)).or_default().push(morphisms.len());
                orbit_rep.push(rep);
                orbit_members.push(orbit);
                morphisms.push(RawMorphism {
                    id: mor_label(rep, i, j),
                    dom: labels[i].clone(),
                    cod: labels[j].clone(),
                });
            }
        }
    }

    // Composition on representatives, verified well-defined exhaustively.
    let find_orbit = |i: usize, k: usize, s: usize| -> Option<usize> {
        per_pair
            .get(&(i, k))
            .and_then(|v| v.iter().copied().find(|&o| orbit_members[o].contains(&s)))
    };
    let mut composition = BTreeMap::new();
    let pairs: Vec<((usize, usize), Vec<usize>)> =
        per_pair.iter().map(|(k, v)| (*k, v.clone())).collect();
    for ((i, j), orbits_ij) in &pairs {
        for ((j2, k), orbits_jk) in &pairs {
            if j2 != j {
                continue;
            }
            for &o1 in orbits_ij {
                for &o2 in orbits_jk {
                    let rep_comp = cat
                        .compose(orbit_rep[o2], orbit_rep[o1])
                        .expect("composable");
                    let target = find_orbit(*i, *k, rep_comp).ok_or_else(|| {
                        Error::IllDefinedComposition(format!(
                            "composite of representatives not in any orbit at ({i},{k})"
                        ))
                    })?;
                    for &s1 in &orbit_members[o1] {
                        for &s2 in &orbit_members[o2] {
                            let comp = cat.compose(s2, s1).expect("composable");
                            if !orbit_members[target].contains(&comp) {
                                return Err(Error::IllDefinedComposition(format!(
                                    "members {} and {} compose outside the orbit of {}",
                                    cat.mor_labels[s1],
                                    cat.mor_labels[s2],
                                    cat.mor_labels[orbit_rep[target]]
                                )));
                            }
                        }
                    }
                    composition.insert(
                        format!(
                            "{}|{}",
                            mor_label(orbit_rep[o2], *j, *k),
                            mor_label(orbit_rep[o1], *i, *j)
                        ),
                        mor_label(orbit_rep[target], *i, *k),
                    );
                }
            }
        }
    }
    let identity: BTreeMap<String, String> = t
        .objects
        .iter()
        .enumerate()
        .map(|(i, o)| {
            let orbit = find_orbit(i, i, o.unit).expect("identity orbit exists");
            (labels[i].clone(), mor_label(orbit_rep[orbit], i, i))
        })
        .collect();
    let metadata = serde_json::json!({
        "kind": "orbit",
        "p": t.p,
        "objects": t.objects.iter().enumerate().map(|(i, o)| {
            (labels[i].clone(), serde_json::json!({
                "object": cat.objects[o.obj],
                "psub": o.psub.iter().map(|&m| cat.mor_labels[m].clone()).collect::<Vec<_>>(),
            }))
        }).collect::<BTreeMap<_, _>>(),
    });
    let raw = RawCategory {
        objects: labels,
        morphisms,
        identity,
        composition,
        metadata: Some(metadata.clone()),
    };
    let ocat = FinCategory::from_raw(&raw)?;
    Ok(Orbit {
        cat: ocat,
        objects: t.objects.clone(),
        orbit_rep,
        orbit_members,
        p: t.p,
        metadata,
    })
}

/// Representatives of idempotent isomorphism classes and, for each, the
/// p-subgroups of its maximal subgroup up to conjugacy.
pub fn rep_system(cat: &FinCategory, p: u64) -> RepSystem {
    let idems = cat.idempotent_endos();
    let mut reps: Vec<Idempotent> = vec![];
    for &e in &idems {
        if !reps
            .iter()
            .any(|&r| cat.idempotents_isomorphic(r, e).is_some())
        {
            reps.push(e);
        }
    }
    let mut psubs = vec![];
    for &e in &reps {
        let g = cat.maximal_subgroup(e);
        let group = FinGroup::from_max_subgroup(cat, &g);
        let subs: Vec<Vec<usize>> = group
            .p_subgroups_up_to_conjugacy(p)
            .into_iter()
            .map(|local| {
                let mut set: Vec<usize> = local.iter().map(|&i| g.elements[i]).collect();
                set.sort();
                set
            })
            .collect();
        psubs.push(subs);
    }
    RepSystem {
        idems: reps,
        psubs,
        p,
    }
}

impl RepSystem {
    /// Labels for the induced representatives of idempotent isomorphism
    /// classes in T_C and O_C (audit output).
    pub fn induced_rep_labels(&self, cat: &FinCategory) -> Vec<String> {
        let mut out = vec![];
        for (i, &e) in self.idems.iter().enumerate() {
            for psub in &self.psubs[i] {
                let elems: Vec<&str> = psub.iter().map(|&m| cat.mor_labels[m].as_str()).collect();
                out.push(format!(
                    "({},{{{}}})",
                    cat.mor_labels[e.morph],
                    elems.join(" ")
                ));
            }
        }
        out
    }
}

/// Witness search for an isomorphism of idempotent endomorphisms (e, P, P)
/// and (f, Q, Q) in T_C: s, t with t∘s = e, s∘t = f, s∘(e∘P)∘t = f∘Q.
pub fn transporter_idem_iso(
    cat: &FinCategory,
    e: Idempotent,
    p_set: &[usize],
    f: Idempotent,
    q_set: &[usize],
) -> Option<(usize, usize)> {
    let (x, y) = (e.object, f.object);
    let left_set = |morphs: &[usize], a: usize| -> Vec<usize> {
        let mut v: Vec<usize> = morphs
            .iter()
            .map(|&u| cat.compose(a, u).expect("composable"))
            .collect();
        v.sort();
        v.dedup();
        v
    };
    let e_p = left_set(p_set, e.morph); // e∘P
    let f_q = left_set(q_set, f.morph); // f∘Q
    let mut s_cands: Vec<usize> = cat
        .hom(x, y)
        .iter()
        .filter_map(|&s| cat.compose_all(&[f.morph, s, e.morph]))
        .collect();
    s_cands.sort();
    s_cands.dedup();
    let mut t_cands: Vec<usize> = cat
        .hom(y, x)
        .iter()
        .filter_map(|&t| cat.compose_all(&[e.morph, t, f.morph]))
        .collect();
    t_cands.sort();
    t_cands.dedup();
    for &s in &s_cands {
        for &t in &t_cands {
            if cat.compose(t, s) != Some(e.morph) || cat.compose(s, t) != Some(f.morph) {
                continue;
            }
            let mut conj: Vec<usize> = e_p
                .iter()
                .map(|&u| cat.compose_all(&[s, u, t]).expect("composable"))
                .collect();
            conj.sort();
            conj.dedup();
            if conj == f_q {
                return Some((s, t));
            }
        }
    }
    None
}

/// The maximal subgroup of O_C at the image of (e, P, P): the quotient
/// N_{G_e}(P) / P, with the normalizer and projection data.
#[derive(Debug, Clone)]
pub struct OrbitMaxSubgroup {
    /// G_e as a table; element i is the morphism g_elements[i].
    pub g_group: FinGroup,
    pub g_elements: Vec<usize>,
    /// Normalizer N_{G_e}(P) as local indices into g_group.
    pub n_local: Vec<usize>,
    /// N as its own group table.
    pub n_group: FinGroup,
    /// Quotient N / P with the projection from n_group indices.
    pub quotient: FinGroup,
    pub proj: Vec<usize>,
}

impl OrbitMaxSubgroup {
    /// Morphism id of the n-th element of N_{G_e}(P).
    pub fn n_morph(&self, n_idx: usize) -> usize {
        self.g_elements[self.n_local[n_idx]]
    }

    pub fn n_index_of_morph(&self, m: usize) -> Option<usize> {
        (0..self.n_group.n).find(|&i| self.n_morph(i) == m)
    }

    /// Quotient coset index of a morphism lying in N_{G_e}(P).
    pub fn coset_of_morph(&self, m: usize) -> Option<usize> {
        self.n_index_of_morph(m).map(|i| self.proj[i])
    }
}

pub fn orbit_max_subgroup(
    cat: &FinCategory,
    e: Idempotent,
    p_set: &[usize],
) -> Result<OrbitMaxSubgroup> {
    let g = cat.maximal_subgroup(e);
    let group = FinGroup::from_max_subgroup(cat, &g);
    let p_local: Vec<usize> = p_set
        .iter()
        .map(|&m| {
            g.elements
                .iter()
                .position(|&x| x == m)
                .ok_or_else(|| Error::BadInput("P is not contained in G_e".into()))
        })
        .collect::<Result<_>>()?;
    let n_local = group.normalizer(&sorted(p_local.clone()));
    let n_group = group.subgroup(&n_local);
    let p_in_n: Vec<usize> = p_local
        .iter()
        .map(|&x| n_local.iter().position(|&y| y == x).expect("P <= N"))
        .collect();
    let (quotient, proj) = n_group.quotient(&sorted(p_in_n))?;
    Ok(OrbitMaxSubgroup {
        g_group: group,
        g_elements: g.elements.clone(),
        n_local,
        n_group,
        quotient,
        proj,
    })
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn terminal_transporter_is_itself() {
        let c = corpus::terminal();
        for p in [2u64, 3, 5] {
            let t = build_transporter(&c, p).unwrap();
            assert_eq!(t.cat.n_morphisms(), 1);
            let o = build_orbit(&t, &c).unwrap();
            assert_eq!(o.cat.n_morphisms(), 1);
        }
    }

    #[test]
    fn s3_p_subgroup_objects() {
        let c = corpus::s3();
        assert_eq!(p_subgroups_of_monoid(&c, 0, 3).len(), 2);
        assert_eq!(p_subgroups_of_monoid(&c, 0, 2).len(), 4);
    }

    #[test]
    fn monoid_e_subgroup_objects_are_singletons() {
        let c = corpus::monoid_e();
        for p in [2u64, 3, 5] {
            let tobjs = p_subgroups_of_monoid(&c, 0, p);
            assert_eq!(tobjs.len(), 2);
            assert!(tobjs.iter().all(|t| t.psub.len() == 1));
        }
    }

    #[test]
    fn c3_transporter_at_3() {
        let c = corpus::cyclic(3);
        let t = build_transporter(&c, 3).unwrap();
        assert_eq!(t.objects.len(), 2); // {1} and C3
        let big = t.objects.iter().position(|o| o.psub.len() == 3).unwrap();
        let count = (0..t.cat.n_morphisms())
            .filter(|&m| t.cat.dom(m) == big && t.cat.cod(m) == big)
            .count();
        assert_eq!(count, 3);
        // In the orbit category that hom set collapses to one morphism.
        let o = build_orbit(&t, &c).unwrap();
        let ocount = (0..o.cat.n_morphisms())
            .filter(|&m| o.cat.dom(m) == big && o.cat.cod(m) == big)
            .count();
        assert_eq!(ocount, 1);
    }

    #[test]
    fn monoid_transporter_hom_sets() {
        let c = corpus::monoid_e();
        let t = build_transporter(&c, 2).unwrap();
        assert_eq!(t.objects.len(), 2);
        // objects are (X,{1}) and (X,{e}); Hom((X,{1}),(X,{e})) = {e}.
        let i = t.objects.iter().position(|o| o.psub == vec![0]).unwrap();
        let j = t.objects.iter().position(|o| o.psub == vec![1]).unwrap();
        let homs: Vec<usize> = (0..t.cat.n_morphisms())
            .filter(|&m| t.cat.dom(m) == i && t.cat.cod(m) == j)
            .map(|m| t.underlying[m])
            .collect();
        assert_eq!(homs, vec![1]);
    }

    #[test]
    fn transporter_and_orbit_validate_on_small_corpus() {
        for name in [
            "terminal", "chain2", "diamond", "monoid_e", "t2", "band", "c2", "c3", "s3",
        ] {
            let c = corpus::by_name(name).unwrap();
            for p in [2u64, 3] {
                let t = build_transporter(&c, p).unwrap();
                let o = build_orbit(&t, &c).unwrap();
                if c.is_ei() {
                    assert!(t.cat.is_ei(), "{name}@{p}: T_C not EI");
                    assert!(o.cat.is_ei(), "{name}@{p}: O_C not EI");
                }
                // |Ob(T_C)| counts all p-subgroups over all idempotents.
                let expected: usize = (0..c.n_objects())
                    .map(|x| p_subgroups_of_monoid(&c, x, p).len())
                    .sum();
                assert_eq!(t.objects.len(), expected);
            }
        }
    }

    #[test]
    fn rep_system_examples() {
        let c = corpus::monoid_e();
        let rs = rep_system(&c, 2);
        assert_eq!(rs.idems.len(), 2);
        assert!(rs.psubs.iter().all(|x| x.len() == 1));

        let c = corpus::s3();
        let rs = rep_system(&c, 3);
        assert_eq!(rs.idems.len(), 1);
        assert_eq!(rs.psubs[0].len(), 2); // trivial and C3

        let c = corpus::chain2();
        let rs = rep_system(&c, 2);
        assert_eq!(rs.idems.len(), 2);
        assert!(rs.psubs.iter().all(|x| x.len() == 1));

        let c = corpus::band();
        let rs = rep_system(&c, 2);
        assert_eq!(rs.idems.len(), 1);
    }

    #[test]
    fn lemma35_reps_match_brute_force_in_orbit_category() {
        for name in ["terminal", "chain2", "monoid_e", "t2", "band", "c3", "s3"] {
            let c = corpus::by_name(name).unwrap();
            for p in [2u64, 3] {
                let rs = rep_system(&c, p);
                let t = build_transporter(&c, p).unwrap();
                let o = build_orbit(&t, &c).unwrap();
                let count_classes = |cat: &FinCategory| {
                    let idems = cat.idempotent_endos();
                    let mut classes: Vec<Idempotent> = vec![];
                    for &e in &idems {
                        if !classes
                            .iter()
                            .any(|&r| cat.idempotents_isomorphic(r, e).is_some())
                        {
                            classes.push(e);
                        }
                    }
                    classes.len()
                };
                let lemma_count: usize = rs.psubs.iter().map(|x| x.len()).sum();
                assert_eq!(count_classes(&o.cat), lemma_count, "{name}@{p} (O_C)");
                assert_eq!(count_classes(&t.cat), lemma_count, "{name}@{p} (T_C)");
            }
        }
    }

    #[test]
    fn transporter_idem_iso_examples() {
        // Reflexive case and the non-isomorphic pair in the monoid {1, e}.
        let c = corpus::monoid_e();
        let idems = c.idempotent_endos();
        let one = idems[0];
        let e = idems[1];
        assert_eq!(
            transporter_idem_iso(&c, e, &[e.morph], e, &[e.morph]),
            Some((e.morph, e.morph))
        );
        assert!(transporter_idem_iso(&c, one, &[one.morph], e, &[e.morph]).is_none());

        // S3 at p = 2: conjugate C2s give isomorphic transporter idempotents.
        let c = corpus::s3();
        let id = c.idempotent_endos()[0];
        let g = FinGroup::from_max_subgroup(&c, &c.maximal_subgroup(id));
        let c2s: Vec<Vec<usize>> = g
            .all_p_subgroups(2)
            .into_iter()
            .filter(|s| s.len() == 2)
            .collect();
        assert_eq!(c2s.len(), 3);
        let (s, t) = transporter_idem_iso(&c, id, &c2s[0], id, &c2s[1]).unwrap();
        assert_eq!(c.compose(t, s), Some(id.morph));
        assert_eq!(c.compose(s, t), Some(id.morph));
        // s P t = Q as sets.
        let mut conj: Vec<usize> = c2s[0]
            .iter()
            .map(|&u| c.compose_all(&[s, u, t]).unwrap())
            .collect();
        conj.sort();
        assert_eq!(conj, c2s[1]);
    }

    #[test]
    fn orbit_max_subgroup_examples() {
        // S3, P = C3: N = S3, quotient of order 2.
        let c = corpus::s3();
        let id = c.idempotent_endos()[0];
        let g = FinGroup::from_max_subgroup(&c, &c.maximal_subgroup(id));
        let c3: Vec<usize> = g
            .all_p_subgroups(3)
            .into_iter()
            .find(|s| s.len() == 3)
            .unwrap();
        let oms = orbit_max_subgroup(&c, id, &c3).unwrap();
        assert_eq!(oms.n_group.n, 6);
        assert_eq!(oms.quotient.n, 2);
        // P = 1: the quotient is G itself.
        let oms = orbit_max_subgroup(&c, id, &[id.morph]).unwrap();
        assert_eq!(oms.quotient.n, 6);
        // C3, P = C3: trivial quotient.
        let c = corpus::cyclic(3);
        let id = c.idempotent_endos()[0];
        let oms = orbit_max_subgroup(&c, id, &[0, 1, 2]).unwrap();
        assert_eq!(oms.quotient.n, 1);
    }

    #[test]
    fn orbit_max_subgroup_matches_unit_group_of_orbit_category() {
        for name in ["monoid_e", "t2", "c3", "s3", "band"] {
            let c = corpus::by_name(name).unwrap();
            for p in [2u64, 3] {
                let rs = rep_system(&c, p);
                let t = build_transporter(&c, p).unwrap();
                let o = build_orbit(&t, &c).unwrap();
                for (i, &e) in rs.idems.iter().enumerate() {
                    for psub in &rs.psubs[i] {
                        let oms = orbit_max_subgroup(&c, e, psub).unwrap();
                        // Since 1_P = e, the image of (e, P, P) in O_C is the
                        // identity of the object (X, P).
                        let obj = o
                            .objects
                            .iter()
                            .position(|t| t.obj == e.object && &t.psub == psub)
                            .unwrap();
                        let ebar = crate::fincat::Idempotent {
                            object: obj,
                            morph: o.cat.identity_of(obj),
                        };
                        let unit_group = o.cat.maximal_subgroup(ebar);
                        let direct = FinGroup::from_max_subgroup(&o.cat, &unit_group);
                        assert!(
                            oms.quotient.isomorphism_to(&direct).is_some(),
                            "{name}@{p}: N/P vs unit group of O_C"
                        );
                    }
                }
            }
        }
    }
}
