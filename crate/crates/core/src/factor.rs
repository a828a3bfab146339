//! Factorization in `F_q[T]`: squarefree decomposition, distinct-degree
//! splitting and Cantor–Zassenhaus equal-degree splitting.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ff::{prime_divisors, FqField};
use crate::poly::{Poly, PolyError};

/// A polynomial certified monic and irreducible at construction.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MonicIrreducible(Poly);

impl MonicIrreducible {
    pub fn new(poly: Poly) -> Result<MonicIrreducible, PolyError> {
        if poly.is_monic() && is_irreducible(&poly)? {
            Ok(MonicIrreducible(poly))
        } else {
            Err(PolyError::NotIrreducible)
        }
    }

    pub(crate) fn new_unchecked(poly: Poly) -> MonicIrreducible {
        debug_assert!(poly.is_monic());
        MonicIrreducible(poly)
    }

    pub fn poly(&self) -> &Poly {
        &self.0
    }

    pub fn deg(&self) -> usize {
        self.0.degree().expect("irreducibles are nonzero")
    }
}

impl fmt::Debug for MonicIrreducible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MonicIrreducible({})", self.0)
    }
}

impl fmt::Display for MonicIrreducible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `f = lc(f) * prod S_j^{m_j}` with `S_j` monic, squarefree, pairwise
/// coprime and `m_j` strictly increasing.
pub fn squarefree_decomposition(f: &Poly) -> Result<Vec<(Poly, u32)>, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    let mut parts = Vec::new();
    squarefree_rec(&f.monic(), 1, &mut parts);
    parts.sort_by_key(|(_, m)| *m);
    // Parts of equal multiplicity are coprime; merge them.
    let mut merged: Vec<(Poly, u32)> = Vec::new();
    for (s, m) in parts {
        match merged.last_mut() {
            Some((prev, pm)) if *pm == m => *prev = &*prev * &s,
            _ => merged.push((s, m)),
        }
    }
    Ok(merged)
}

fn squarefree_rec(f: &Poly, scale: u32, out: &mut Vec<(Poly, u32)>) {
    if f.is_constant() {
        return;
    }
    let field = f.field().clone();
    let mut c = f.gcd(&f.derivative()).expect("same field");
    let mut w = f.exact_div(&c).expect("gcd divides");
    let mut i = 1;
    while !w.is_constant() {
        let y = w.gcd(&c).expect("same field");
        let fac = w.exact_div(&y).expect("gcd divides");
        if !fac.is_constant() {
            out.push((fac, i * scale));
        }
        w = y;
        c = c.exact_div(&w).expect("gcd divides");
        i += 1;
    }
    if !c.is_constant() {
        // c' = 0, so c is a p-th power: take the p-th root coefficientwise.
        let p = field.p() as usize;
        let root_exp = field.q() / field.p();
        let coeffs = c
            .coeffs()
            .iter()
            .step_by(p)
            .map(|&a| field.pow(a, root_exp))
            .collect();
        let root = Poly::new(&field, coeffs);
        squarefree_rec(&root, scale * p as u32, out);
    }
}

/// Splits a monic squarefree polynomial into products of irreducibles of
/// equal degree, returned as `(product, degree)`.
pub fn distinct_degree_factorization(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field().clone();
    let q = field.q();
    let t = Poly::t(&field);
    let mut rest = f.monic();
    let mut h = t.rem(&rest).expect("nonconstant");
    let mut out = Vec::new();
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = h.pow_mod(q, &rest);
        let g = (&h - &t).gcd(&rest).expect("same field");
        if !g.is_one() {
            rest = rest.exact_div(&g).expect("gcd divides");
            h = h.rem(&rest).expect("nonzero");
            out.push((g, d));
        }
        d += 1;
    }
    if let Some(deg) = rest.degree().filter(|&k| k > 0) {
        out.push((rest, deg));
    }
    out
}

fn random_poly_below(field: &FqField, deg: usize, rng: &mut ChaCha8Rng) -> Poly {
    let q = field.q() as u32;
    let coeffs = (0..deg)
        .map(|_| field.element(rng.gen_range(0..q)).expect("in range"))
        .collect();
    Poly::new(field, coeffs)
}

/// Splits a monic product of distinct irreducibles of degree `d`.
pub fn equal_degree_factorization(f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = f.degree().expect("nonzero");
    if n == d {
        return vec![f.monic()];
    }
    let field = f.field().clone();
    let q = field.q();
    loop {
        let a = random_poly_below(&field, n, rng);
        if a.is_constant() {
            continue;
        }
        let b = if q % 2 == 1 {
            // a^((q^d - 1) / 2) = (a^(1 + q + ... + q^(d-1)))^((q - 1) / 2)
            let mut frob = a.rem(f).expect("nonzero");
            let mut norm = frob.clone();
            for _ in 1..d {
                frob = frob.pow_mod(q, f);
                norm = norm.mul_mod(&frob, f);
            }
            &norm.pow_mod((q - 1) / 2, f) - &Poly::one(&field)
        } else {
            // Absolute trace a + a^2 + ... + a^(2^(k d - 1)), q = 2^k.
            let steps = field.degree() as usize * d;
            let mut sq = a.rem(f).expect("nonzero");
            let mut tr = sq.clone();
            for _ in 1..steps {
                sq = sq.mul_mod(&sq, f);
                tr = &tr + &sq;
            }
            tr
        };
        let g = b.gcd(f).expect("same field");
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            let other = f.exact_div(&g).expect("gcd divides");
            let mut out = equal_degree_factorization(&g, d, rng);
            out.extend(equal_degree_factorization(&other, d, rng));
            return out;
        }
    }
}

/// Complete factorization into monic irreducibles with multiplicities,
/// sorted in canonical order. The seed drives equal-degree splitting.
pub fn factor(f: &Poly, seed: u64) -> Result<Vec<(MonicIrreducible, u32)>, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    if f.is_constant() {
        return Err(PolyError::ConstantInput);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (sqf, mult) in squarefree_decomposition(f)? {
        for (block, d) in distinct_degree_factorization(&sqf) {
            for p in equal_degree_factorization(&block, d, &mut rng) {
                out.push((MonicIrreducible::new_unchecked(p), mult));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Rabin's criterion: `T^(q^n) = T mod f` and `gcd(T^(q^(n/l)) - T, f) = 1`
/// for each prime `l | n`.
pub fn is_irreducible(f: &Poly) -> Result<bool, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    let n = match f.degree() {
        Some(0) | None => return Ok(false),
        Some(1) => return Ok(true),
        Some(n) => n,
    };
    let field = f.field();
    let q = field.q();
    let f = f.monic();
    let t = Poly::t(field);
    let frob = |k: usize| {
        let mut h = t.clone();
        for _ in 0..k {
            h = h.pow_mod(q, &f);
        }
        h
    };
    if !(&frob(n) - &t).rem(&f)?.is_zero() {
        return Ok(false);
    }
    for l in prime_divisors(n as u64) {
        let h = &frob(n / l as usize) - &t;
        if !h.gcd(&f)?.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest `a` with `P^a | d`.
pub fn valuation(d: &Poly, p: &MonicIrreducible) -> Result<u32, PolyError> {
    if d.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    let mut a = 0;
    let mut cur = d.clone();
    while let Some(next) = cur.exact_div(p.poly()) {
        cur = next;
        a += 1;
    }
    Ok(a)
}
