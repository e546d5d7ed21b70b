//! Univariate polynomial arithmetic and factorisation over F_{p^m}.
//!
//! Polynomials are coefficient vectors in ascending degree with no trailing
//! zeros. Factorisation is squarefree decomposition (with p-th root
//! extraction in characteristic p), distinct-degree decomposition, then
//! Cantor–Zassenhaus equal-degree splitting; the equal-degree step draws its
//! random polynomials from a caller-supplied RNG so runs are reproducible.

use rand_core::RngCore;

use crate::ffalg::field::Field;

pub type Poly = Vec<u64>;

pub fn trim(f: &mut Poly) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

pub fn deg(f: &Poly) -> Option<usize> {
    if f.is_empty() {
        None
    } else {
        Some(f.len() - 1)
    }
}

pub fn is_zero(f: &Poly) -> bool {
    f.is_empty()
}

pub fn x() -> Poly {
    vec![0, 1]
}

pub fn constant(c: u64) -> Poly {
    if c == 0 {
        vec![]
    } else {
        vec![c]
    }
}

pub fn add(field: &Field, f: &Poly, g: &Poly) -> Poly {
    let mut out = vec![0; f.len().max(g.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let a = f.get(i).copied().unwrap_or(0);
        let b = g.get(i).copied().unwrap_or(0);
        *o = field.add(a, b);
    }
    trim(&mut out);
    out
}

pub fn sub(field: &Field, f: &Poly, g: &Poly) -> Poly {
    let mut out = vec![0; f.len().max(g.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let a = f.get(i).copied().unwrap_or(0);
        let b = g.get(i).copied().unwrap_or(0);
        *o = field.sub(a, b);
    }
    trim(&mut out);
    out
}

pub fn mul(field: &Field, f: &Poly, g: &Poly) -> Poly {
    if is_zero(f) || is_zero(g) {
        return vec![];
    }
    let mut out = vec![0; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = field.add(out[i + j], field.mul(a, b));
        }
    }
    trim(&mut out);
    out
}

pub fn scale(field: &Field, f: &Poly, c: u64) -> Poly {
    let mut out: Poly = f.iter().map(|&a| field.mul(a, c)).collect();
    trim(&mut out);
    out
}

pub fn monic(field: &Field, f: &Poly) -> Poly {
    match f.last() {
        None => vec![],
        Some(&lc) => scale(field, f, field.inv(lc)),
    }
}

/// Euclidean division; returns (quotient, remainder).
pub fn divrem(field: &Field, f: &Poly, g: &Poly) -> (Poly, Poly) {
    assert!(!is_zero(g), "division by zero polynomial");
    let mut rem = f.clone();
    trim(&mut rem);
    let dg = g.len() - 1;
    if rem.len() < g.len() {
        return (vec![], rem);
    }
    let mut quot = vec![0; rem.len() - dg];
    let lc_inv = field.inv(*g.last().unwrap());
    while rem.len() >= g.len() && !rem.is_empty() {
        let shift = rem.len() - g.len();
        let c = field.mul(*rem.last().unwrap(), lc_inv);
        quot[shift] = c;
        for (j, &gj) in g.iter().enumerate() {
            rem[shift + j] = field.sub(rem[shift + j], field.mul(c, gj));
        }
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

pub fn rem(field: &Field, f: &Poly, g: &Poly) -> Poly {
    divrem(field, f, g).1
}

pub fn gcd(field: &Field, f: &Poly, g: &Poly) -> Poly {
    let mut a = f.clone();
    let mut b = g.clone();
    trim(&mut a);
    trim(&mut b);
    while !is_zero(&b) {
        let r = rem(field, &a, &b);
        a = b;
        b = r;
    }
    monic(field, &a)
}

/// Extended gcd: returns (d, u, v) with u*f + v*g = d, d monic.
pub fn egcd(field: &Field, f: &Poly, g: &Poly) -> (Poly, Poly, Poly) {
    let (mut r0, mut r1) = (f.clone(), g.clone());
    trim(&mut r0);
    trim(&mut r1);
    let (mut u0, mut u1): (Poly, Poly) = (vec![1], vec![]);
    let (mut v0, mut v1): (Poly, Poly) = (vec![], vec![1]);
    while !is_zero(&r1) {
        let (q, r) = divrem(field, &r0, &r1);
        let nu = sub(field, &u0, &mul(field, &q, &u1));
        let nv = sub(field, &v0, &mul(field, &q, &v1));
        r0 = r1;
        r1 = r;
        u0 = u1;
        u1 = nu;
        v0 = v1;
        v1 = nv;
    }
    if is_zero(&r0) {
        return (vec![], vec![], vec![]);
    }
    let lc_inv = field.inv(*r0.last().unwrap());
    (
        scale(field, &r0, lc_inv),
        scale(field, &u0, lc_inv),
        scale(field, &v0, lc_inv),
    )
}

pub fn derivative(field: &Field, f: &Poly) -> Poly {
    if f.len() <= 1 {
        return vec![];
    }
    let mut out = vec![0; f.len() - 1];
    for (i, o) in out.iter_mut().enumerate() {
        let k = field.from_u64((i as u64 + 1) % field.p());
        *o = field.mul(f[i + 1], k);
    }
    trim(&mut out);
    out
}

pub fn eval(field: &Field, f: &Poly, a: u64) -> u64 {
    let mut acc = 0;
    for &c in f.iter().rev() {
        acc = field.add(field.mul(acc, a), c);
    }
    acc
}

/// base^e mod modulus, with a u64 exponent.
pub fn pow_mod(field: &Field, base: &Poly, mut e: u64, modulus: &Poly) -> Poly {
    let mut b = rem(field, base, modulus);
    let mut acc = constant(1);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(field, &mul(field, &acc, &b), modulus);
        }
        b = rem(field, &mul(field, &b, &b), modulus);
        e >>= 1;
    }
    acc
}

/// h^q mod modulus where q is the field order, computed as an iterated p-power.
fn pow_q_mod(field: &Field, h: &Poly, modulus: &Poly) -> Poly {
    let mut out = rem(field, h, modulus);
    for _ in 0..field.m() {
        out = pow_mod(field, &out, field.p(), modulus);
    }
    out
}

/// Rabin irreducibility test for a monic polynomial.
pub fn is_irreducible(field: &Field, f: &Poly) -> bool {
    let n = match deg(f) {
        None | Some(0) => return false,
        Some(n) => n,
    };
    if n == 1 {
        return true;
    }
    // x^{q^k} mod f for k = 1..n via iterated q-powers.
    let mut h = rem(field, &x(), f);
    let mut powers = Vec::with_capacity(n);
    for _ in 0..n {
        h = pow_q_mod(field, &h, f);
        powers.push(h.clone());
    }
    if powers[n - 1] != rem(field, &x(), f) {
        return false;
    }
    let mut primes = vec![];
    let mut k = n;
    let mut d = 2;
    while d * d <= k {
        if k % d == 0 {
            primes.push(d);
            while k % d == 0 {
                k /= d;
            }
        }
        d += 1;
    }
    if k > 1 {
        primes.push(k);
    }
    for ell in primes {
        let diff = sub(field, &powers[n / ell - 1], &rem(field, &x(), f));
        if deg(&gcd(field, &diff, f)).unwrap_or(0) > 0 {
            return false;
        }
    }
    true
}

/// p-th root of f = g(x^p): coefficient-wise inverse Frobenius.
fn pth_root(field: &Field, f: &Poly) -> Poly {
    let p = field.p() as usize;
    let mut out = vec![0; f.len().div_ceil(p)];
    for (i, o) in out.iter_mut().enumerate() {
        let c = f.get(i * p).copied().unwrap_or(0);
        // Inverse of x -> x^p is x -> x^{p^{m-1}}.
        let mut r = c;
        for _ in 0..field.m().saturating_sub(1) {
            r = field.pow(r, field.p());
        }
        *o = r;
    }
    trim(&mut out);
    out
}

/// Complete factorisation of a nonzero polynomial into monic irreducibles
/// with multiplicities, sorted by (degree, coefficients).
pub fn factor(field: &Field, f: &Poly, rng: &mut impl RngCore) -> Vec<(Poly, u32)> {
    let mut f = monic(field, f);
    assert!(!is_zero(&f), "factoring the zero polynomial");
    let mut irreducibles: Vec<Poly> = vec![];
    let mut u = f.clone();
    while deg(&u).unwrap_or(0) > 0 {
        let du = derivative(field, &u);
        if is_zero(&du) {
            u = pth_root(field, &u);
            continue;
        }
        let d = gcd(field, &u, &du);
        let s = divrem(field, &u, &d).0; // squarefree, same support as the non-p part
        for h in factor_squarefree(field, &s, rng) {
            if !irreducibles.contains(&h) {
                irreducibles.push(h.clone());
            }
            // Strip h completely so the remaining u eventually has zero derivative.
            loop {
                let (q, r) = divrem(field, &u, &h);
                if is_zero(&r) && !is_zero(&q) {
                    u = q;
                } else {
                    break;
                }
            }
        }
    }
    let mut out = vec![];
    for h in irreducibles {
        let mut mult = 0;
        loop {
            let (q, r) = divrem(field, &f, &h);
            if is_zero(&r) && !is_zero(&q) {
                mult += 1;
                f = q;
            } else {
                break;
            }
        }
        debug_assert!(mult > 0);
        out.push((h, mult));
    }
    debug_assert_eq!(deg(&f), Some(0));
    out.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    out
}

/// Distinct irreducible factors of a squarefree monic polynomial.
fn factor_squarefree(field: &Field, s: &Poly, rng: &mut impl RngCore) -> Vec<Poly> {
    let mut out = vec![];
    let mut g = s.clone();
    if deg(&g) == Some(0) {
        return out;
    }
    // Distinct-degree decomposition.
    let mut h = rem(field, &x(), &g);
    let mut d = 1;
    while let Some(dg) = deg(&g) {
        if dg == 0 {
            break;
        }
        if 2 * d > dg {
            out.push(g.clone());
            break;
        }
        h = pow_q_mod(field, &h, &g);
        let split = gcd(field, &sub(field, &h, &x()), &g);
        if deg(&split).unwrap_or(0) > 0 {
            equal_degree_factor(field, &split, d, rng, &mut out);
            g = divrem(field, &g, &split).0;
            h = rem(field, &h, &g);
        }
        d += 1;
    }
    out
}

/// Cantor–Zassenhaus equal-degree splitting: g is a product of distinct
/// monic irreducibles of degree d.
fn equal_degree_factor(
    field: &Field,
    g: &Poly,
    d: usize,
    rng: &mut impl RngCore,
    out: &mut Vec<Poly>,
) {
    let dg = deg(g).unwrap();
    if dg == d {
        out.push(monic(field, g));
        return;
    }
    loop {
        let mut r: Poly = (0..dg).map(|_| field.rand_elem(rng)).collect();
        trim(&mut r);
        if is_zero(&r) {
            continue;
        }
        let cand = if field.p() == 2 {
            // Trace map over F_2: sum of r^{2^i} for i < d*m.
            let mut t = rem(field, &r, g);
            let mut acc = t.clone();
            for _ in 1..(d as u32 * field.m()) {
                t = rem(field, &mul(field, &t, &t), g);
                acc = add(field, &acc, &t);
            }
            gcd(field, &acc, g)
        } else {
            // s = r^{(q^d-1)/2} = (norm chain)^{(q-1)/2}; gcd(g, s-1) splits.
            let mut norm = rem(field, &r, g);
            let mut rq = norm.clone();
            for _ in 1..d {
                rq = pow_q_mod(field, &rq, g);
                norm = rem(field, &mul(field, &norm, &rq), g);
            }
            let s = pow_mod(field, &norm, (field.q() - 1) / 2, g);
            gcd(field, &sub(field, &s, &constant(1)), g)
        };
        if let Some(dc) = deg(&cand) {
            if dc > 0 && dc < dg {
                equal_degree_factor(field, &cand, d, rng, out);
                let rest = divrem(field, g, &cand).0;
                equal_degree_factor(field, &rest, d, rng, out);
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use rand_core::{RngCore, SeedableRng};

    #[test]
    fn divrem_roundtrip() {
        let f = Field::new(7, 1).unwrap();
        let a = vec![1, 2, 3, 4, 5];
        let b = vec![3, 1, 2];
        let (q, r) = divrem(&f, &a, &b);
        let back = add(&f, &mul(&f, &q, &b), &r);
        assert_eq!(back, a);
    }

    #[test]
    fn factor_x2_plus_1_over_f2() {
        // x^2 + 1 = (x+1)^2 over F_2.
        let f = Field::new(2, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let fac = factor(&f, &vec![1, 0, 1], &mut rng);
        assert_eq!(fac, vec![(vec![1, 1], 2)]);
    }

    #[test]
    fn factor_cyclotomic7_over_f2() {
        // x^7 - 1 = (x+1) * two cubics over F_2.
        let f = Field::new(2, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut poly = vec![1, 0, 0, 0, 0, 0, 0, 1];
        poly[0] = 1; // x^7 + 1 over F_2
        let fac = factor(&f, &poly, &mut rng);
        let degs: Vec<usize> = fac.iter().map(|(h, _)| h.len() - 1).collect();
        assert_eq!(degs, vec![1, 3, 3]);
        for (h, _) in &fac {
            assert!(is_irreducible(&f, h));
        }
    }

    proptest! {
        #[test]
        fn factor_recombines(seed in 0u64..400) {
            let cases = [(2u64, 1u32), (3, 1), (5, 1), (2, 2), (3, 2)];
            let (p, m) = cases[(seed % cases.len() as u64) as usize];
            let field = Field::new(p, m).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let degree = 1 + (rng.next_u64() % 8) as usize;
            let mut poly: Poly = (0..degree).map(|_| field.rand_elem(&mut rng)).collect();
            poly.push(1);
            let fac = factor(&field, &poly, &mut rng);
            let mut prod = constant(1);
            for (h, e) in &fac {
                prop_assert!(is_irreducible(&field, h));
                for _ in 0..*e {
                    prod = mul(&field, &prod, h);
                }
            }
            prop_assert_eq!(prod, poly);
        }
    }
}
