//! The bundled example categories.
//!
//! The corpus spans EI and non-EI categories, trivial and nontrivial Galois
//! actions, and single- and multi-block algebras: the terminal category,
//! two posets, the monoid {1, e}, the full transformation monoid T_2, a
//! two-object matrix-units category, the one-object groups C2, C3, C5, C7,
//! S3, S4, D8 and C2xC3, plus one twisted example (p = 5 on C2).

use std::collections::BTreeMap;

use crate::cocycle::RawCocycle;
use crate::fincat::{FinCategory, RawCategory, RawMorphism};

fn raw(
    objects: &[&str],
    morphisms: &[(&str, &str, &str)],
    identity: &[(&str, &str)],
    composition: &[(&str, &str, &str)],
) -> RawCategory {
    RawCategory {
        objects: objects.iter().map(|s| s.to_string()).collect(),
        morphisms: morphisms
            .iter()
            .map(|(id, d, c)| RawMorphism {
                id: id.to_string(),
                dom: d.to_string(),
                cod: c.to_string(),
            })
            .collect(),
        identity: identity
            .iter()
            .map(|(o, m)| (o.to_string(), m.to_string()))
            .collect(),
        composition: composition
            .iter()
            .map(|(g, f, h)| (format!("{g}|{f}"), h.to_string()))
            .collect(),
        metadata: None,
    }
}

pub fn terminal_raw() -> RawCategory {
    raw(&["X"], &[("1", "X", "X")], &[("X", "1")], &[("1", "1", "1")])
}

/// The poset category X -> Y.
pub fn chain2_raw() -> RawCategory {
    raw(
        &["X", "Y"],
        &[("1x", "X", "X"), ("1y", "Y", "Y"), ("a", "X", "Y")],
        &[("X", "1x"), ("Y", "1y")],
        &[
            ("1x", "1x", "1x"),
            ("1y", "1y", "1y"),
            ("a", "1x", "a"),
            ("1y", "a", "a"),
        ],
    )
}

/// The diamond poset B < L, R < T.
pub fn diamond_raw() -> RawCategory {
    raw(
        &["B", "L", "R", "T"],
        &[
            ("1b", "B", "B"),
            ("1l", "L", "L"),
            ("1r", "R", "R"),
            ("1t", "T", "T"),
            ("bl", "B", "L"),
            ("br", "B", "R"),
            ("lt", "L", "T"),
            ("rt", "R", "T"),
            ("bt", "B", "T"),
        ],
        &[("B", "1b"), ("L", "1l"), ("R", "1r"), ("T", "1t")],
        &[
            ("1b", "1b", "1b"),
            ("1l", "1l", "1l"),
            ("1r", "1r", "1r"),
            ("1t", "1t", "1t"),
            ("bl", "1b", "bl"),
            ("1l", "bl", "bl"),
            ("br", "1b", "br"),
            ("1r", "br", "br"),
            ("lt", "1l", "lt"),
            ("1t", "lt", "lt"),
            ("rt", "1r", "rt"),
            ("1t", "rt", "rt"),
            ("bt", "1b", "bt"),
            ("1t", "bt", "bt"),
            ("lt", "bl", "bt"),
            ("rt", "br", "bt"),
        ],
    )
}

/// The monoid {1, e} with e^2 = e, as a one-object category.
pub fn monoid_e_raw() -> RawCategory {
    raw(
        &["X"],
        &[("1", "X", "X"), ("e", "X", "X")],
        &[("X", "1")],
        &[
            ("1", "1", "1"),
            ("1", "e", "e"),
            ("e", "1", "e"),
            ("e", "e", "e"),
        ],
    )
}

/// The full transformation monoid on two points: identity, swap and the two
/// constant maps.
pub fn t2_raw() -> RawCategory {
    let maps: &[(&str, [usize; 2])] = &[("id", [0, 1]), ("sw", [1, 0]), ("c0", [0, 0]), ("c1", [1, 1])];
    let mut composition = vec![];
    for (gn, g) in maps {
        for (fn_, f) in maps {
            let h = [g[f[0]], g[f[1]]];
            let hn = maps.iter().find(|(_, m)| *m == h).unwrap().0;
            composition.push((*gn, *fn_, hn));
        }
    }
    raw(
        &["X"],
        &[
            ("id", "X", "X"),
            ("sw", "X", "X"),
            ("c0", "X", "X"),
            ("c1", "X", "X"),
        ],
        &[("X", "id")],
        &composition,
    )
}

/// Two objects whose four morphisms compose like 2x2 matrix units; the two
/// identities are isomorphic non-equal idempotents.
pub fn band_raw() -> RawCategory {
    raw(
        &["X1", "X2"],
        &[
            ("e11", "X1", "X1"),
            ("e12", "X2", "X1"),
            ("e21", "X1", "X2"),
            ("e22", "X2", "X2"),
        ],
        &[("X1", "e11"), ("X2", "e22")],
        &[
            ("e11", "e11", "e11"),
            ("e11", "e12", "e12"),
            ("e12", "e21", "e11"),
            ("e12", "e22", "e12"),
            ("e21", "e11", "e21"),
            ("e21", "e12", "e22"),
            ("e22", "e21", "e21"),
            ("e22", "e22", "e22"),
        ],
    )
}

/// The cyclic group of order n as a one-object category with morphisms
/// 1, g, g2, ...
pub fn cyclic_raw(n: usize) -> RawCategory {
    let label = |i: usize| match i {
        0 => "1".to_string(),
        1 => "g".to_string(),
        i => format!("g{i}"),
    };
    let morphisms: Vec<(String, &str, &str)> = (0..n).map(|i| (label(i), "X", "X")).collect();
    let mut composition = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            composition.insert(format!("{}|{}", label(i), label(j)), label((i + j) % n));
        }
    }
    RawCategory {
        objects: vec!["X".into()],
        morphisms: morphisms
            .into_iter()
            .map(|(id, d, c)| RawMorphism {
                id,
                dom: d.into(),
                cod: c.into(),
            })
            .collect(),
        identity: [("X".to_string(), "1".to_string())].into_iter().collect(),
        composition,
        metadata: None,
    }
}

fn perm_group_raw(perms: Vec<Vec<usize>>) -> RawCategory {
    let label = |p: &[usize]| -> String {
        let digits: String = p.iter().map(|d| d.to_string()).collect();
        format!("p{digits}")
    };
    let mut sorted = perms;
    sorted.sort();
    let mut composition = BTreeMap::new();
    for g in &sorted {
        for f in &sorted {
            let h: Vec<usize> = f.iter().map(|&i| g[i]).collect();
            composition.insert(format!("{}|{}", label(g), label(f)), label(&h));
        }
    }
    let n = sorted[0].len();
    let id: Vec<usize> = (0..n).collect();
    RawCategory {
        objects: vec!["X".into()],
        morphisms: sorted
            .iter()
            .map(|p| RawMorphism {
                id: label(p),
                dom: "X".into(),
                cod: "X".into(),
            })
            .collect(),
        identity: [("X".to_string(), label(&id))].into_iter().collect(),
        composition,
        metadata: None,
    }
}

fn all_perms(n: usize) -> Vec<Vec<usize>> {
    if n == 1 {
        return vec![vec![0]];
    }
    let mut out = vec![];
    for p in all_perms(n - 1) {
        for pos in 0..n {
            let mut q: Vec<usize> = p.iter().map(|&x| if x >= pos { x + 1 } else { x }).collect();
            q.insert(0, pos);
            // q = [pos] prefix trick gives every permutation once.
            out.push(q);
        }
    }
    out
}

pub fn s3_raw() -> RawCategory {
    perm_group_raw(all_perms(3))
}

pub fn s4_raw() -> RawCategory {
    perm_group_raw(all_perms(4))
}

/// The dihedral group of order 8 as symmetries of a square with vertices
/// 0, 1, 2, 3, generated by the rotation (0123) and the reflection (13).
pub fn d8_raw() -> RawCategory {
    let gens: Vec<Vec<usize>> = vec![vec![1, 2, 3, 0], vec![0, 3, 2, 1]];
    let mut elems: Vec<Vec<usize>> = vec![vec![0, 1, 2, 3]];
    let mut frontier = elems.clone();
    while !frontier.is_empty() {
        let mut next = vec![];
        for p in &frontier {
            for g in &gens {
                let q: Vec<usize> = p.iter().map(|&i| g[i]).collect();
                if !elems.contains(&q) {
                    elems.push(q.clone());
                    next.push(q);
                }
            }
        }
        frontier = next;
    }
    assert_eq!(elems.len(), 8);
    perm_group_raw(elems)
}

/// The direct product C2 x C3 as a one-object category with morphisms
/// a{i}b{j}.
pub fn c2xc3_raw() -> RawCategory {
    let label = |i: usize, j: usize| format!("a{i}b{j}");
    let mut composition = BTreeMap::new();
    let mut morphisms = vec![];
    for i in 0..2 {
        for j in 0..3 {
            morphisms.push(RawMorphism {
                id: label(i, j),
                dom: "X".into(),
                cod: "X".into(),
            });
        }
    }
    for i in 0..2 {
        for j in 0..3 {
            for k in 0..2 {
                for l in 0..3 {
                    composition.insert(
                        format!("{}|{}", label(i, j), label(k, l)),
                        label((i + k) % 2, (j + l) % 3),
                    );
                }
            }
        }
    }
    RawCategory {
        objects: vec!["X".into()],
        morphisms,
        identity: [("X".to_string(), label(0, 0))].into_iter().collect(),
        composition,
        metadata: None,
    }
}

/// The 2-cocycle on C2 with alpha(g, g) = 2 at p = 5.
pub fn twisted_c2_p5_cocycle() -> RawCocycle {
    RawCocycle {
        p: 5,
        values: [("g|g".to_string(), 2u64)].into_iter().collect(),
    }
}

macro_rules! built {
    ($raw:expr) => {
        FinCategory::from_raw(&$raw).expect("bundled corpus entry is valid")
    };
}

pub fn terminal() -> FinCategory {
    built!(terminal_raw())
}
pub fn chain2() -> FinCategory {
    built!(chain2_raw())
}
pub fn diamond() -> FinCategory {
    built!(diamond_raw())
}
pub fn monoid_e() -> FinCategory {
    built!(monoid_e_raw())
}
pub fn t2() -> FinCategory {
    built!(t2_raw())
}
pub fn band() -> FinCategory {
    built!(band_raw())
}
pub fn cyclic(n: usize) -> FinCategory {
    built!(cyclic_raw(n))
}
pub fn s3() -> FinCategory {
    built!(s3_raw())
}
pub fn s4() -> FinCategory {
    built!(s4_raw())
}
pub fn d8() -> FinCategory {
    built!(d8_raw())
}
pub fn c2xc3() -> FinCategory {
    built!(c2xc3_raw())
}

pub const NAMES: &[&str] = &[
    "terminal", "chain2", "diamond", "monoid_e", "t2", "band", "c2", "c3", "c5", "c7", "s3",
    "s4", "d8", "c2xc3",
];

pub fn raw_by_name(name: &str) -> Option<RawCategory> {
    Some(match name {
        "terminal" => terminal_raw(),
        "chain2" => chain2_raw(),
        "diamond" => diamond_raw(),
        "monoid_e" => monoid_e_raw(),
        "t2" => t2_raw(),
        "band" => band_raw(),
        "c2" => cyclic_raw(2),
        "c3" => cyclic_raw(3),
        "c5" => cyclic_raw(5),
        "c7" => cyclic_raw(7),
        "s3" => s3_raw(),
        "s4" => s4_raw(),
        "d8" => d8_raw(),
        "c2xc3" => c2xc3_raw(),
        _ => return None,
    })
}

pub fn by_name(name: &str) -> Option<FinCategory> {
    raw_by_name(name).map(|r| built!(r))
}

/// The whole bundled corpus in canonical order.
pub fn all() -> Vec<(String, FinCategory)> {
    NAMES
        .iter()
        .map(|&n| (n.to_string(), by_name(n).unwrap()))
        .collect()
}
