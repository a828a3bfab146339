//! Random descriptor corpora and the per-descriptor consistency checks run
//! over them.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ff::{divisors, lcm, FqField};
use crate::genus::{
    as_descriptor, clement_genus_field, compare_fields, rarzvi_genus_field, verify_degree_formula,
};
use crate::group::RadicandGroup;
use crate::kummer::{
    normalize, ramification_indices, ramification_lcm_oracle, Component, KummerDescriptor,
};
use crate::oracle;
use crate::poly::Poly;
use crate::Error;

/// `(p, f)` for `q` in {3, 4, 5, 7, 8, 9, 13}.
pub const CORPUS_FIELDS: [(u64, u32); 7] =
    [(3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (13, 1)];

/// Largest `M^dim` for which subgroups are enumerated exhaustively.
pub const BRUTE_FORCE_LIMIT: u64 = 1 << 16;

/// Field-independent description of a descriptor: elements by encoding,
/// radicands as encodings constant term first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusCase {
    pub p: u64,
    pub f: u32,
    pub components: Vec<(u32, Vec<u32>, u64)>,
}

impl CorpusCase {
    pub fn descriptor(&self) -> Result<KummerDescriptor, Error> {
        let field = FqField::build(self.p, self.f).map_err(|e| Error::Descriptor(e.to_string()))?;
        let comps = self
            .components
            .iter()
            .map(|(g, d, m)| {
                let gamma = field.element(*g)?;
                let coeffs = d
                    .iter()
                    .map(|&c| field.element(c))
                    .collect::<Result<_, _>>()?;
                Ok(Component {
                    gamma,
                    radicand: Poly::new(&field, coeffs),
                    exponent: *m,
                })
            })
            .collect::<Result<Vec<_>, crate::ff::FieldError>>()
            .map_err(|e| Error::Descriptor(e.to_string()))?;
        Ok(KummerDescriptor::new(&field, comps)?)
    }
}

/// `n` descriptors with `q` from [`CORPUS_FIELDS`], one to three components,
/// `deg D <= 6` and exponents among the divisors of `q - 1` above 1.
pub fn random_corpus(n: usize, seed: u64) -> Vec<CorpusCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let (p, f) = *CORPUS_FIELDS.choose(&mut rng).expect("nonempty");
            let q = p.pow(f);
            let exps: Vec<u64> = divisors(q - 1).into_iter().filter(|&d| d > 1).collect();
            let s = rng.gen_range(1..=3);
            let components = (0..s)
                .map(|_| {
                    let gamma = rng.gen_range(1..q) as u32;
                    let deg = rng.gen_range(0..=6);
                    let mut d: Vec<u32> = (0..deg).map(|_| rng.gen_range(0..q) as u32).collect();
                    d.push(1);
                    let m = *exps.choose(&mut rng).expect("q > 2");
                    (gamma, d, m)
                })
                .collect();
            CorpusCase { p, f, components }
        })
        .collect()
}

/// Outcome of every check on one descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CaseChecks {
    /// `[Gamma : k] = n * prod e_i`.
    pub degree_formula: bool,
    /// Clement group equals the group of the literal radical list.
    pub literal_radicals: bool,
    /// `K <= rarzvi <= clement`.
    pub chain: bool,
    /// Rebuilding from the clement field's own descriptor gives it back.
    pub idempotent: bool,
    /// Constant field of the clement field is `F_{q^n}`.
    pub constant_field: bool,
    /// Projection-order and lcm ramification formulas agree.
    pub ramification: bool,
    /// Ramification by enumerating the group, when small enough.
    pub ramification_brute_force: Option<bool>,
}

impl CaseChecks {
    pub fn all_pass(&self) -> bool {
        self.degree_formula
            && self.literal_radicals
            && self.chain
            && self.idempotent
            && self.constant_field
            && self.ramification
            && self.ramification_brute_force != Some(false)
    }
}

pub fn check_descriptor(desc: &KummerDescriptor, seed: u64) -> Result<CaseChecks, Error> {
    let field = desc.field();
    let m = field.unit_order();
    let ext = normalize(desc, seed)?;
    let clement = clement_genus_field(&ext)?;
    let rarzvi = rarzvi_genus_field(&ext)?;
    let ram = ramification_indices(&ext);
    let lcm_ram = ramification_lcm_oracle(desc, seed)?;

    let n = ext.component_degrees.iter().copied().fold(1, lcm);
    let mut rows = vec![{
        let mut v = vec![0; ext.basis.dim()];
        v[0] = (m / n) % m;
        v
    }];
    for (p, e) in &lcm_ram.entries {
        match ext.basis.unit_vector(p, m / e, m) {
            Some(v) => rows.push(v),
            None => return Err(Error::Invariant(format!("prime {p} missing from basis"))),
        }
    }
    let literal = RadicandGroup::new(m, ext.basis.dim(), rows)?;

    let cmp = compare_fields(&ext, &clement, &rarzvi)?;

    let again = clement_genus_field(&normalize(&as_descriptor(&clement, field)?, seed)?)?;
    let basis = again.basis.union(&clement.basis);
    let idempotent = again
        .group_over(&basis)?
        .same_subgroup(&clement.group_over(&basis)?)?;

    let dim = ext.basis.dim() as u32;
    let ramification_brute_force = m
        .checked_pow(dim)
        .filter(|&size| size <= BRUTE_FORCE_LIMIT)
        .map(|_| {
            let elements = oracle::enumerate(&ext.group);
            ext.basis
                .primes()
                .iter()
                .enumerate()
                .all(|(j, p)| oracle::projection_order(&elements, 1 + j) == ram.index_of(p))
        });

    Ok(CaseChecks {
        degree_formula: verify_degree_formula(&clement, &ext)?,
        literal_radicals: n == ext.exponent && literal.same_subgroup(&clement.group)?,
        chain: cmp.k_in_rarzvi && cmp.rarzvi_in_clement,
        idempotent,
        constant_field: clement.group.constant_subgroup_order() == n,
        ramification: ram == lcm_ram,
        ramification_brute_force,
    })
}

pub fn check_case(case: &CorpusCase, seed: u64) -> Result<CaseChecks, Error> {
    check_descriptor(&case.descriptor()?, seed)
}

pub fn run_sequential(cases: &[CorpusCase], seed: u64) -> Vec<Result<CaseChecks, Error>> {
    cases.iter().map(|c| check_case(c, seed)).collect()
}

/// Same results as [`run_sequential`], in the same order; sequential when
/// built without the `parallel` feature.
pub fn run_parallel(cases: &[CorpusCase], seed: u64) -> Vec<Result<CaseChecks, Error>> {
    crate::par::map(cases, |c| check_case(c, seed))
}

/// Failure counts per check over a batch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Tally {
    pub cases: usize,
    pub errors: usize,
    pub degree_formula: usize,
    pub literal_radicals: usize,
    pub chain: usize,
    pub idempotent: usize,
    pub constant_field: usize,
    pub ramification: usize,
    pub brute_force_checked: usize,
    pub brute_force_failed: usize,
}

impl Tally {
    pub fn of(results: &[Result<CaseChecks, Error>]) -> Tally {
        let mut t = Tally {
            cases: results.len(),
            ..Tally::default()
        };
        for r in results {
            let Ok(c) = r else {
                t.errors += 1;
                continue;
            };
            t.degree_formula += usize::from(!c.degree_formula);
            t.literal_radicals += usize::from(!c.literal_radicals);
            t.chain += usize::from(!c.chain);
            t.idempotent += usize::from(!c.idempotent);
            t.constant_field += usize::from(!c.constant_field);
            t.ramification += usize::from(!c.ramification);
            if let Some(ok) = c.ramification_brute_force {
                t.brute_force_checked += 1;
                t.brute_force_failed += usize::from(!ok);
            }
        }
        t
    }

    pub fn clean(&self) -> bool {
        self.errors == 0
            && self.degree_formula == 0
            && self.literal_radicals == 0
            && self.chain == 0
            && self.idempotent == 0
            && self.constant_field == 0
            && self.ramification == 0
            && self.brute_force_failed == 0
    }
}
