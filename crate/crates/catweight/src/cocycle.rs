//! 2-cocycles with values in F_p^x, twisted category algebras, and the
//! extension category that reduces twisted algebras to ordinary ones.
//!
//! A cocycle assigns a unit of F_p to every composable pair, subject to
//! alpha(u, t∘s) alpha(t, s) = alpha(u∘t, s) alpha(u, t). The twisted
//! algebra multiplies basis morphisms by t s = alpha(t, s) (t∘s). The
//! extension category has morphisms Mor(C) x F_p^x with composition
//! (t, b)∘(s, a) = (t∘s, b a alpha(t, s)); its ordinary category algebra
//! contains a central idempotent e_R with k Ĉ e_R isomorphic to k_alpha C,
//! which is how all twisted computations are routed through the ordinary
//! engine.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffalg::algebra::SCAlgebra;
use crate::ffalg::field::Field;
use crate::ffalg::matrix::Mat;
use crate::fincat::{FinCategory, Idempotent, IdemIsoWitness, RawCategory, RawMorphism};

/// JSON shape of a cocycle file: values in 1..p-1 keyed by "t|s" (for t∘s);
/// omitted composable pairs default to 1.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawCocycle {
    pub p: u64,
    #[serde(default)]
    pub values: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CocycleDefect {
    BadKey(String),
    UnknownMorphism(String),
    ValueOnNonComposable { t: String, s: String },
    NonUnitValue { t: String, s: String, value: u64 },
    CocycleIdentityViolated { u: String, t: String, s: String },
}

impl fmt::Display for CocycleDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CocycleDefect::BadKey(k) => write!(f, "key {k} is not of the form t|s"),
            CocycleDefect::UnknownMorphism(m) => write!(f, "unknown morphism {m}"),
            CocycleDefect::ValueOnNonComposable { t, s } => {
                write!(f, "value given on non-composable pair ({t}, {s})")
            }
            CocycleDefect::NonUnitValue { t, s, value } => {
                write!(f, "value {value} at ({t}, {s}) is not a unit mod p")
            }
            CocycleDefect::CocycleIdentityViolated { u, t, s } => {
                write!(f, "2-cocycle identity fails on ({u}, {t}, {s})")
            }
        }
    }
}

/// A validated F_p^x-valued 2-cocycle on a category's composable pairs.
#[derive(Debug, Clone)]
pub struct TwoCocycle {
    pub p: u64,
    /// Values on composable pairs; pairs absent from the map are 1.
    values: HashMap<(usize, usize), u64>,
}

impl TwoCocycle {
    /// The trivial cocycle at prime p.
    pub fn trivial(p: u64) -> TwoCocycle {
        TwoCocycle {
            p,
            values: HashMap::new(),
        }
    }

    /// alpha(t, s), defined when t∘s is.
    pub fn value(&self, t: usize, s: usize) -> u64 {
        self.values.get(&(t, s)).copied().unwrap_or(1)
    }

    pub fn value_inv(&self, field: &Field, t: usize, s: usize) -> u64 {
        field.inv(self.value(t, s))
    }

    pub fn is_trivial(&self) -> bool {
        self.values.values().all(|&v| v == 1)
    }

    /// Restriction along a map of morphism indices (e.g. to a subcategory
    /// presented by a subset of morphisms): pair (t, s) of the new index
    /// space maps through `embed`.
    pub fn restrict(&self, embed: &[usize], composable: impl Fn(usize, usize) -> bool) -> TwoCocycle {
        let mut values = HashMap::new();
        for (t, &te) in embed.iter().enumerate() {
            for (s, &se) in embed.iter().enumerate() {
                if composable(t, s) {
                    let v = self.value(te, se);
                    if v != 1 {
                        values.insert((t, s), v);
                    }
                }
            }
        }
        TwoCocycle { p: self.p, values }
    }
}

/// Check the domain, unit values and the 2-cocycle identity exhaustively.
pub fn validate_cocycle(
    cat: &FinCategory,
    raw: &RawCocycle,
) -> std::result::Result<TwoCocycle, Vec<CocycleDefect>> {
    let mut defects = vec![];
    let mor_idx: HashMap<&str, usize> = cat
        .mor_labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let mut values = HashMap::new();
    for (key, &v) in &raw.values {
        let Some((t_id, s_id)) = key.split_once('|') else {
            defects.push(CocycleDefect::BadKey(key.clone()));
            continue;
        };
        let (Some(&t), Some(&s)) = (mor_idx.get(t_id), mor_idx.get(s_id)) else {
            defects.push(CocycleDefect::UnknownMorphism(key.clone()));
            continue;
        };
        if cat.compose(t, s).is_none() {
            defects.push(CocycleDefect::ValueOnNonComposable {
                t: t_id.into(),
                s: s_id.into(),
            });
            continue;
        }
        if v == 0 || v >= raw.p {
            defects.push(CocycleDefect::NonUnitValue {
                t: t_id.into(),
                s: s_id.into(),
                value: v,
            });
            continue;
        }
        if v != 1 {
            values.insert((t, s), v);
        }
    }
    if !defects.is_empty() {
        return Err(defects);
    }
    let alpha = TwoCocycle { p: raw.p, values };
    // alpha(u, t∘s) alpha(t, s) = alpha(u∘t, s) alpha(u, t) on all triples.
    let p = raw.p;
    for s in 0..cat.n_morphisms() {
        for t in 0..cat.n_morphisms() {
            let Some(ts) = cat.compose(t, s) else { continue };
            for u in 0..cat.n_morphisms() {
                let Some(ut) = cat.compose(u, t) else { continue };
                let lhs = alpha.value(u, ts) * alpha.value(t, s) % p;
                let rhs = alpha.value(ut, s) * alpha.value(u, t) % p;
                if lhs != rhs {
                    defects.push(CocycleDefect::CocycleIdentityViolated {
                        u: cat.mor_labels[u].clone(),
                        t: cat.mor_labels[t].clone(),
                        s: cat.mor_labels[s].clone(),
                    });
                }
            }
        }
    }
    if !defects.is_empty() {
        return Err(defects);
    }
    Ok(alpha)
}

pub fn validate_cocycle_err(cat: &FinCategory, raw: &RawCocycle) -> Result<TwoCocycle> {
    validate_cocycle(cat, raw).map_err(Error::InvalidCocycle)
}

/// The ordinary category algebra kC over `field`.
pub fn category_algebra(cat: &FinCategory, field: Field) -> SCAlgebra {
    twisted_algebra(cat, &TwoCocycle::trivial(field.p()), field)
        .expect("trivial cocycle always yields a valid algebra")
}

/// The twisted category algebra k_alpha C: basis Mor(C), product
/// t s = alpha(t, s) (t∘s) when composable and 0 otherwise.
pub fn twisted_algebra(cat: &FinCategory, alpha: &TwoCocycle, field: Field) -> Result<SCAlgebra> {
    assert_eq!(field.p(), alpha.p, "cocycle prime must match the field");
    let n = cat.n_morphisms();
    let mut prod = vec![None; n * n];
    for t in 0..n {
        for s in 0..n {
            if let Some(ts) = cat.compose(t, s) {
                prod[t * n + s] = Some((field.from_u64(alpha.value(t, s)), ts as u32));
            }
        }
    }
    SCAlgebra::new(
        field,
        cat.mor_labels.clone(),
        prod,
        unit_element(cat, alpha),
    )
}

/// The unit of the twisted algebra: sum over objects of
/// alpha(Id_X, Id_X)^{-1} Id_X. Coefficients lie in F_p.
pub fn unit_element(cat: &FinCategory, alpha: &TwoCocycle) -> Vec<u64> {
    let fp = Field::new(alpha.p, 1).expect("cocycle prime is prime");
    let mut unit = vec![0; cat.n_morphisms()];
    for x in 0..cat.n_objects() {
        let id = cat.identity_of(x);
        unit[id] = fp.inv(fp.from_u64(alpha.value(id, id)));
    }
    unit
}

/// The extension category Ĉ of C by F_p^x, with the projection functor and
/// the scalar component of each lifted morphism.
#[derive(Debug, Clone)]
pub struct ExtensionCategory {
    pub ext: FinCategory,
    pub p: u64,
    /// For each morphism of Ĉ: the underlying morphism of C.
    pub proj_mor: Vec<usize>,
    /// For each morphism of Ĉ: its F_p^x component.
    pub proj_scalar: Vec<u64>,
    /// lift[s][a - 1] = the morphism (s, a) of Ĉ.
    lift: Vec<Vec<usize>>,
}

impl ExtensionCategory {
    pub fn lift(&self, s: usize, a: u64) -> usize {
        debug_assert!(a >= 1 && a < self.p);
        self.lift[s][(a - 1) as usize]
    }
}

/// Build Ĉ with morphisms Mor(C) x F_p^x and composition
/// (t, b)∘(s, a) = (t∘s, b a alpha(t, s)).
pub fn build_extension(cat: &FinCategory, alpha: &TwoCocycle) -> Result<ExtensionCategory> {
    let p = alpha.p;
    let units: Vec<u64> = (1..p).collect();
    let label = |s: usize, a: u64| format!("{}~{}", cat.mor_labels[s], a);
    let mut morphisms = vec![];
    let mut proj_mor = vec![];
    let mut proj_scalar = vec![];
    let mut lift = vec![vec![0; units.len()]; cat.n_morphisms()];
    for s in 0..cat.n_morphisms() {
        for &a in &units {
            lift[s][(a - 1) as usize] = morphisms.len();
            proj_mor.push(s);
            proj_scalar.push(a);
            morphisms.push(RawMorphism {
                id: label(s, a),
                dom: cat.objects[cat.dom(s)].clone(),
                cod: cat.objects[cat.cod(s)].clone(),
            });
        }
    }
    let mut composition = BTreeMap::new();
    for t in 0..cat.n_morphisms() {
        for s in 0..cat.n_morphisms() {
            let Some(ts) = cat.compose(t, s) else { continue };
            let av = alpha.value(t, s);
            for &b in &units {
                for &a in &units {
                    let c = b * a % p * av % p;
                    composition.insert(
                        format!("{}|{}", label(t, b), label(s, a)),
                        label(ts, c),
                    );
                }
            }
        }
    }
    let fp = Field::new(p, 1)?;
    let identity: BTreeMap<String, String> = (0..cat.n_objects())
        .map(|x| {
            let id = cat.identity_of(x);
            let inv = fp.inv(fp.from_u64(alpha.value(id, id)));
            (cat.objects[x].clone(), label(id, inv))
        })
        .collect();
    let raw = RawCategory {
        objects: cat.objects.clone(),
        morphisms,
        identity,
        composition,
        metadata: None,
    };
    let ext = FinCategory::from_raw(&raw)?;
    Ok(ExtensionCategory {
        ext,
        p,
        proj_mor,
        proj_scalar,
        lift,
    })
}

/// e_R = (1/|F_p^x|) sum_{r in F_p^x} sum_X r^{-1} (Id_X, alpha(Id,Id)^{-1} r),
/// a central idempotent of k Ĉ; verified central and idempotent.
pub fn e_r_idempotent(
    cat: &FinCategory,
    alpha: &TwoCocycle,
    ext: &ExtensionCategory,
    khat: &SCAlgebra,
) -> Vec<u64> {
    let f = &khat.field;
    let p = alpha.p;
    let units_inv = f.inv(f.from_u64((p - 1) % p));
    let fp = Field::new(p, 1).expect("prime");
    let mut e_r = vec![0; khat.dim];
    for x in 0..cat.n_objects() {
        let id = cat.identity_of(x);
        let aid_inv = fp.inv(fp.from_u64(alpha.value(id, id)));
        for r in 1..p {
            let scalar = fp.mul(aid_inv, r);
            let m = ext.lift(id, scalar);
            let r_inv = f.inv(f.from_u64(r));
            e_r[m] = f.add(e_r[m], f.mul(units_inv, r_inv));
        }
    }
    assert!(khat.is_central(&e_r), "e_R must be central");
    assert!(khat.is_idempotent(&e_r), "e_R must be idempotent");
    e_r
}

/// The projection pi: k Ĉ -> k_alpha C sending (s, a) to a s, as a matrix in
/// the two algebras' bases.
pub fn pi_matrix(cat: &FinCategory, ext: &ExtensionCategory, field: &Field) -> Mat {
    let mut m = Mat::zero(cat.n_morphisms(), ext.ext.n_morphisms());
    for j in 0..ext.ext.n_morphisms() {
        m[(ext.proj_mor[j], j)] = field.from_u64(ext.proj_scalar[j]);
    }
    m
}

/// Everything `check_pi_isomorphism` verified, with the witnessing ranks.
#[derive(Debug, Clone, Serialize)]
pub struct PiReport {
    pub dim_khat: usize,
    pub dim_khat_er: usize,
    pub mor_c: usize,
    pub restricted_iso_checked: Vec<String>,
}

/// Verify that pi is a unitary algebra homomorphism, that k Ĉ e_R has
/// dimension |Mor(C)| with basis {(s,1) e_R}, and that pi restricts to an
/// isomorphism k Ĝ_e e_R -> k_alpha G_e for every idempotent e.
pub fn check_pi_isomorphism(
    cat: &FinCategory,
    alpha: &TwoCocycle,
    ext: &ExtensionCategory,
    field: &Field,
) -> Result<PiReport> {
    let khat = category_algebra(&ext.ext, field.clone());
    let kalpha = twisted_algebra(cat, alpha, field.clone())?;
    let pi = pi_matrix(cat, ext, field);

    // Homomorphism on all basis pairs.
    for i in 0..khat.dim {
        for j in 0..khat.dim {
            let lhs = match khat.basis_prod(i, j) {
                Some((c, k)) => {
                    let mut v = pi.col(k);
                    for x in v.iter_mut() {
                        *x = field.mul(*x, c);
                    }
                    v
                }
                None => vec![0; kalpha.dim],
            };
            let rhs = kalpha.mul_vec(&pi.col(i), &pi.col(j));
            if lhs != rhs {
                return Err(Error::PiMismatch(format!(
                    "pi is not multiplicative at ({}, {})",
                    khat.labels[i], khat.labels[j]
                )));
            }
        }
    }
    // Unitary.
    let unit_img = pi.mat_vec(&khat.unit, field);
    if unit_img != kalpha.unit {
        return Err(Error::PiMismatch("pi does not preserve the unit".into()));
    }

    let e_r = e_r_idempotent(cat, alpha, ext, &khat);
    // dim k Ĉ e_R = rank of right multiplication by e_R.
    let right = {
        let mut m = Mat::zero(khat.dim, khat.dim);
        for j in 0..khat.dim {
            let v = khat.mul_vec(&khat.basis_vec(j), &e_r);
            for (i, &x) in v.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    };
    let dim_er = right.rank(field);
    if dim_er != cat.n_morphisms() {
        return Err(Error::PiMismatch(format!(
            "dim k Ĉ e_R = {dim_er}, expected |Mor(C)| = {}",
            cat.n_morphisms()
        )));
    }
    // {(s, 1) e_R} is linearly independent of the right cardinality.
    let mut basis = Mat::zero(khat.dim, cat.n_morphisms());
    for s in 0..cat.n_morphisms() {
        let v = khat.mul_vec(&khat.basis_vec(ext.lift(s, 1)), &e_r);
        for (i, &x) in v.iter().enumerate() {
            basis[(i, s)] = x;
        }
    }
    if basis.rank(field) != cat.n_morphisms() {
        return Err(Error::PiMismatch(
            "{(s,1) e_R} is not linearly independent".into(),
        ));
    }

    // Restricted isomorphisms pi_e : k Ĝ_e e_R -> k_alpha G_e.
    let mut restricted = vec![];
    for e in cat.idempotent_endos() {
        let g_e = cat.maximal_subgroup(e);
        let e_hat = idempotent_correspondence(alpha, ext, e);
        let ghat = ext.ext.maximal_subgroup(e_hat);
        if ghat.elements.len() != g_e.elements.len() * (alpha.p - 1) as usize {
            return Err(Error::PiMismatch(format!(
                "Ĝ_e has order {} instead of |G_e| (p-1)",
                ghat.elements.len()
            )));
        }
        // Rank of {x e_R : x in Ĝ_e} must be |G_e| and pi must be injective
        // on that span: both follow from checking rank of the image span.
        let mut img = Mat::zero(kalpha.dim, ghat.elements.len());
        let mut span = Mat::zero(khat.dim, ghat.elements.len());
        for (j, &x) in ghat.elements.iter().enumerate() {
            let v = khat.mul_vec(&khat.basis_vec(x), &e_r);
            let w = pi.mat_vec(&v, field);
            for (i, &y) in v.iter().enumerate() {
                span[(i, j)] = y;
            }
            for (i, &y) in w.iter().enumerate() {
                img[(i, j)] = y;
            }
        }
        let rs = span.rank(field);
        let ri = img.rank(field);
        if rs != g_e.elements.len() || ri != rs {
            return Err(Error::PiMismatch(format!(
                "pi_e not an isomorphism at idempotent {}",
                cat.mor_labels[e.morph]
            )));
        }
        restricted.push(cat.mor_labels[e.morph].clone());
    }

    Ok(PiReport {
        dim_khat: khat.dim,
        dim_khat_er: dim_er,
        mor_c: cat.n_morphisms(),
        restricted_iso_checked: restricted,
    })
}

/// Lift an idempotent e of C to the idempotent (e, alpha(e,e)^{-1}) of Ĉ.
pub fn idempotent_correspondence(
    alpha: &TwoCocycle,
    ext: &ExtensionCategory,
    e: Idempotent,
) -> Idempotent {
    let fp = Field::new(alpha.p, 1).expect("prime");
    let scalar = fp.inv(fp.from_u64(alpha.value(e.morph, e.morph)));
    let morph = ext.lift(e.morph, scalar);
    debug_assert_eq!(ext.ext.compose(morph, morph), Some(morph));
    Idempotent {
        object: e.object,
        morph,
    }
}

/// Transport an isomorphism witness (s, t) of e ≅ f in C to the witness
/// ((s, 1), (t, c)) with c = alpha(s,t)^{-1} alpha(f,f)^{-1} in Ĉ;
/// verified by composing in Ĉ.
pub fn witness_correspondence(
    alpha: &TwoCocycle,
    ext: &ExtensionCategory,
    w: &IdemIsoWitness,
) -> IdemIsoWitness {
    let fp = Field::new(alpha.p, 1).expect("prime");
    let c = fp.inv(fp.mul(
        fp.from_u64(alpha.value(w.s, w.t)),
        fp.from_u64(alpha.value(w.target.morph, w.target.morph)),
    ));
    let s_hat = ext.lift(w.s, 1);
    let t_hat = ext.lift(w.t, c);
    let e_hat = idempotent_correspondence(alpha, ext, w.source);
    let f_hat = idempotent_correspondence(alpha, ext, w.target);
    assert_eq!(ext.ext.compose(t_hat, s_hat), Some(e_hat.morph));
    assert_eq!(ext.ext.compose(s_hat, t_hat), Some(f_hat.morph));
    IdemIsoWitness {
        s: s_hat,
        t: t_hat,
        source: e_hat,
        target: f_hat,
    }
}

/// beta(x) = alpha(x,t) alpha(s, x∘t) alpha(e,e)^{-1} alpha(t,s)^{-1}, the
/// scalar entering the transport isomorphism k_alpha G_e -> k_alpha G_f.
pub fn beta_scalar(cat: &FinCategory, alpha: &TwoCocycle, w: &IdemIsoWitness, x: usize) -> u64 {
    let fp = Field::new(alpha.p, 1).expect("prime");
    let xt = cat.compose(x, w.t).expect("x∘t is defined");
    let num = fp.mul(
        fp.from_u64(alpha.value(x, w.t)),
        fp.from_u64(alpha.value(w.s, xt)),
    );
    let den = fp.mul(
        fp.from_u64(alpha.value(w.source.morph, w.source.morph)),
        fp.from_u64(alpha.value(w.t, w.s)),
    );
    fp.mul(num, fp.inv(den))
}
