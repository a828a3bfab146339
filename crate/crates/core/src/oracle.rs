//! Exhaustive references for small instances, used by the tests, the batch
//! checks and `kgenus selftest`.

use std::collections::{BTreeMap, BTreeSet};

use crate::ff::{prime_divisors, FqElem, FqField};
use crate::group::RadicandGroup;
use crate::poly::Poly;

/// Every element of the subgroup of `(Z/M)^d` generated by `gens`.
pub fn enumerate_subgroup(modulus: u64, dim: usize, gens: &[Vec<u64>]) -> BTreeSet<Vec<u64>> {
    let mut seen = BTreeSet::new();
    let zero = vec![0u64; dim];
    seen.insert(zero.clone());
    let mut frontier = vec![zero];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y: Vec<u64> = x
                .iter()
                .zip(g)
                .map(|(a, b)| (a + b % modulus) % modulus)
                .collect();
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen
}

pub fn enumerate(g: &RadicandGroup) -> BTreeSet<Vec<u64>> {
    enumerate_subgroup(g.modulus(), g.dim(), g.generators())
}

/// Invariant factors of a finite abelian group given by its full element
/// list, from the counts of elements killed by each prime power.
pub fn invariant_factors(modulus: u64, elements: &BTreeSet<Vec<u64>>) -> Vec<u64> {
    let orders: Vec<u64> = elements
        .iter()
        .map(|v| RadicandGroup::element_order(modulus, v))
        .collect();
    let n = elements.len() as u64;
    // exponent multisets per prime, largest first
    let mut parts: Vec<(u64, Vec<u32>)> = Vec::new();
    for l in prime_divisors(n) {
        let lpart = |o: u64| {
            let mut k = 0u32;
            let mut o = o;
            while o % l == 0 {
                o /= l;
                k += 1;
            }
            k
        };
        let max_k = orders.iter().map(|&o| lpart(o)).max().unwrap_or(0);
        let killed: Vec<u64> = (0..=max_k)
            .map(|k| orders.iter().filter(|&&o| lpart(o) <= k).count() as u64)
            .collect();
        // r_k = number of cyclic l-factors of exponent >= k
        let r: Vec<u32> = (1..=max_k as usize)
            .map(|k| {
                let mut ratio = killed[k] / killed[k - 1];
                let mut c = 0;
                while ratio > 1 {
                    ratio /= l;
                    c += 1;
                }
                c
            })
            .collect();
        let count = r.first().copied().unwrap_or(0) as usize;
        let exps: Vec<u32> = (0..count)
            .map(|i| r.iter().filter(|&&rk| rk as usize > i).count() as u32)
            .collect();
        parts.push((l, exps));
    }
    let width = parts.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
    let mut out: Vec<u64> = (0..width)
        .map(|i| {
            parts
                .iter()
                .map(|(l, e)| e.get(i).map_or(1, |&k| l.pow(k)))
                .product()
        })
        .collect();
    out.sort_unstable();
    out
}

/// Size of the image of `elements` under projection to coordinate `j`.
pub fn projection_order(elements: &BTreeSet<Vec<u64>>, j: usize) -> u64 {
    elements.iter().map(|v| v[j]).collect::<BTreeSet<_>>().len() as u64
}

/// Monic polynomials of exact degree `d`.
pub fn monic_polys(field: &FqField, d: usize) -> impl Iterator<Item = Poly> + '_ {
    let q = field.q();
    let count = q.pow(d as u32);
    (0..count).map(move |mut t| {
        let mut coeffs = Vec::with_capacity(d + 1);
        for _ in 0..d {
            coeffs.push(field.element((t % q) as u32).expect("encoding below q"));
            t /= q;
        }
        coeffs.push(FqElem::ONE);
        Poly::new(field, coeffs)
    })
}

/// Factorization of a monic polynomial by trial division with every monic
/// polynomial of increasing degree. Exponential in the degree.
pub fn trial_division_factor(f: &Poly) -> BTreeMap<Poly, u32> {
    let field = f.field().clone();
    let mut rest = f.monic();
    let mut out = BTreeMap::new();
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        for cand in monic_polys(&field, d) {
            while let Some(q) = rest.exact_div(&cand) {
                *out.entry(cand.clone()).or_insert(0) += 1;
                rest = q;
            }
        }
        d += 1;
    }
    if rest.degree().unwrap_or(0) > 0 {
        *out.entry(rest).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_groups() {
        let e = enumerate_subgroup(4, 2, &[vec![2, 0], vec![0, 2]]);
        assert_eq!(e.len(), 4);
        assert_eq!(invariant_factors(4, &e), vec![2, 2]);
        let e = enumerate_subgroup(12, 2, &[vec![1, 2], vec![0, 3]]);
        assert_eq!(e.len(), 48);
        assert_eq!(invariant_factors(12, &e), vec![4, 12]);
        assert_eq!(projection_order(&e, 1), 12);
        let e = enumerate_subgroup(6, 3, &[]);
        assert!(invariant_factors(6, &e).is_empty());
    }

    #[test]
    fn trial_division() {
        let f = FqField::build(5, 1).unwrap();
        // T^3 + 2T^2 + T = T (T+1)^2
        let got = trial_division_factor(&Poly::from_ints(&f, &[0, 1, 2, 1]));
        let want: BTreeMap<Poly, u32> = [
            (Poly::from_ints(&f, &[0, 1]), 1),
            (Poly::from_ints(&f, &[1, 1]), 2),
        ]
        .into();
        assert_eq!(got, want);
        assert_eq!(monic_polys(&f, 2).count(), 25);
    }
}
