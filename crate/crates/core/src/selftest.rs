//! Reduced-size property suites behind `kgenus selftest`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::batch::{random_corpus, run_parallel, run_sequential, Tally};
use crate::factor::factor;
use crate::ff::{divisors, FqElem, FqField};
use crate::group::RadicandGroup;
use crate::oracle;
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checked: usize,
    pub failed: usize,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failed == 0 && self.checked > 0
    }
}

/// Random subgroup of `(Z/M)^d` with `M^d <= 2^16`.
pub fn random_small_group(rng: &mut ChaCha8Rng) -> RadicandGroup {
    let m = *[2u64, 3, 4, 6, 8, 12, 16].choose(rng).expect("nonempty");
    let mut max_d = 1;
    while m.pow(max_d + 1) <= 1 << 16 && max_d < 4 {
        max_d += 1;
    }
    let d = rng.gen_range(1..=max_d) as usize;
    let k = rng.gen_range(0..=d + 1);
    let gens = (0..k)
        .map(|_| (0..d).map(|_| rng.gen_range(0..m)).collect())
        .collect();
    RadicandGroup::new(m, d, gens).expect("valid dimensions")
}

/// Compares order, membership, containment and invariant factors of a
/// group with exhaustive enumeration. Returns the number of mismatches.
pub fn group_mismatches(g: &RadicandGroup, probe: &RadicandGroup, rng: &mut ChaCha8Rng) -> usize {
    let elems = oracle::enumerate(g);
    let mut bad = 0;
    bad += usize::from(g.order().ok() != Some(elems.len() as u64));
    bad += usize::from(g.invariant_factors() != oracle::invariant_factors(g.modulus(), &elems));
    for _ in 0..64 {
        let v: Vec<u64> = (0..g.dim())
            .map(|_| rng.gen_range(0..g.modulus()))
            .collect();
        bad += usize::from(g.member(&v).ok() != Some(elems.contains(&v)));
    }
    for v in elems.iter().take(64) {
        bad += usize::from(g.member(v).ok() != Some(true));
    }
    let probe_elems = oracle::enumerate(probe);
    if probe.modulus() == g.modulus() && probe.dim() == g.dim() {
        let want = probe_elems.is_subset(&elems);
        bad += usize::from(g.contains(probe).ok() != Some(want));
    }
    bad
}

/// Random monic polynomial of degree `deg` over `field`.
pub fn random_monic(field: &FqField, deg: usize, rng: &mut ChaCha8Rng) -> Poly {
    let q = field.q();
    let mut c: Vec<FqElem> = (0..deg)
        .map(|_| field.element(rng.gen_range(0..q) as u32).expect("below q"))
        .collect();
    c.push(FqElem::ONE);
    Poly::new(field, c)
}

/// Whether `factor(f)` multiplies back to `f`, has monic irreducible
/// pairwise distinct factors and, for small degree, matches trial division.
pub fn factorization_ok(f: &Poly, seed: u64, oracle_degree: usize) -> bool {
    let Ok(fs) = factor(f, seed) else {
        return false;
    };
    let mut prod = Poly::one(f.field());
    for (p, e) in &fs {
        prod = &prod * &p.poly().pow(*e);
    }
    let distinct = fs.windows(2).all(|w| w[0].0 < w[1].0);
    let mut ok = prod == *f && distinct;
    if f.degree().unwrap_or(0) <= oracle_degree {
        let want = oracle::trial_division_factor(f);
        let got: std::collections::BTreeMap<Poly, u32> =
            fs.iter().map(|(p, e)| (p.poly().clone(), *e)).collect();
        ok &= want == got;
    }
    ok
}

/// Fields used by the factorization suites.
pub fn factor_fields() -> Vec<FqField> {
    [
        (2, 1),
        (3, 1),
        (5, 1),
        (7, 1),
        (13, 1),
        (2, 2),
        (2, 3),
        (3, 2),
        (5, 2),
    ]
    .iter()
    .map(|&(p, f)| FqField::build(p, f).expect("small field"))
    .collect()
}

pub fn run(size: usize, seed: u64, parallel: bool) -> Vec<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    let cases = random_corpus(size, seed);
    let results = if parallel {
        run_parallel(&cases, seed)
    } else {
        run_sequential(&cases, seed)
    };
    let t = Tally::of(&results);
    for (name, failed) in [
        ("degree formula", t.degree_formula),
        ("literal radical list", t.literal_radicals),
        ("containment chain", t.chain),
        ("idempotence", t.idempotent),
        ("constant field", t.constant_field),
        ("ramification formulas", t.ramification),
    ] {
        out.push(SuiteResult {
            name,
            checked: t.cases,
            failed: failed + t.errors,
        });
    }
    out.push(SuiteResult {
        name: "ramification brute force",
        checked: t.brute_force_checked,
        failed: t.brute_force_failed,
    });

    let mut bad = 0;
    for _ in 0..size {
        let g = random_small_group(&mut rng);
        let probe = RadicandGroup::new(
            g.modulus(),
            g.dim(),
            vec![(0..g.dim())
                .map(|_| rng.gen_range(0..g.modulus()))
                .collect()],
        )
        .expect("valid");
        bad += group_mismatches(&g, &probe, &mut rng);
    }
    out.push(SuiteResult {
        name: "group engine vs enumeration",
        checked: size,
        failed: bad,
    });

    let fields = factor_fields();
    let mut bad = 0;
    for i in 0..size {
        let field = &fields[i % fields.len()];
        let deg = rng.gen_range(1..=12);
        let f = random_monic(field, deg, &mut rng);
        bad += usize::from(!factorization_ok(&f, seed, 3));
    }
    out.push(SuiteResult {
        name: "factorization",
        checked: size,
        failed: bad,
    });

    let mut bad = 0;
    for field in &fields {
        let m = field.unit_order();
        for d in divisors(m) {
            let g = field.generator();
            bad += usize::from(field.is_nth_power(g, d).ok() != Some(d == 1));
        }
    }
    out.push(SuiteResult {
        name: "field generators",
        checked: fields.len(),
        failed: bad,
    });
    out
}
