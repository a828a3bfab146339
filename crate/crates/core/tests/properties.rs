use proptest::prelude::*;

use kummer_genus::batch::{CorpusCase, CORPUS_FIELDS};
use kummer_genus::factor::{factor, is_irreducible, valuation};
use kummer_genus::ff::{divisors, FqElem, FqField};
use kummer_genus::genus::{
    as_descriptor, clement_genus_field, compare, constant_vector, rarzvi_genus_field,
    verify_degree_formula,
};
use kummer_genus::group::{smith_normal_form, IntMatrix, RadicandGroup};
use kummer_genus::input::{parse_input, JobConfig, ParseOptions};
use kummer_genus::kummer::{
    normalize, ramification_indices, ramification_lcm_oracle, Component, KummerDescriptor,
    NormalizedExtension,
};
use kummer_genus::oracle;
use kummer_genus::poly::Poly;

fn arb_case() -> impl Strategy<Value = CorpusCase> {
    (0..CORPUS_FIELDS.len()).prop_flat_map(|i| {
        let (p, f) = CORPUS_FIELDS[i];
        let q = p.pow(f) as u32;
        let exps: Vec<u64> = divisors(q as u64 - 1)
            .into_iter()
            .filter(|&d| d > 1)
            .collect();
        let comp = (
            1..q,
            prop::collection::vec(0..q, 0..=6),
            prop::sample::select(exps),
        )
            .prop_map(|(g, mut d, m)| {
                d.push(1);
                (g, d, m)
            });
        prop::collection::vec(comp, 1..=3).prop_map(move |components| CorpusCase {
            p,
            f,
            components,
        })
    })
}

fn ext_of(case: &CorpusCase) -> NormalizedExtension {
    normalize(&case.descriptor().unwrap(), 0).unwrap()
}

fn arb_field() -> impl Strategy<Value = FqField> {
    prop::sample::select(vec![
        (2u64, 1u32),
        (3, 1),
        (2, 2),
        (5, 1),
        (7, 1),
        (3, 2),
        (13, 1),
    ])
    .prop_map(|(p, f)| FqField::build(p, f).unwrap())
}

fn arb_monic(max_deg: usize) -> impl Strategy<Value = Poly> {
    arb_field().prop_flat_map(move |field| {
        let q = field.q() as u32;
        prop::collection::vec(0..q, 1..=max_deg).prop_map(move |c| {
            let mut coeffs: Vec<FqElem> = c.iter().map(|&x| field.element(x).unwrap()).collect();
            coeffs.push(FqElem::ONE);
            Poly::new(&field, coeffs)
        })
    })
}

type Gens = Vec<Vec<u64>>;

fn arb_group() -> impl Strategy<Value = (u64, usize, Gens, Gens, Gens)> {
    (prop::sample::select(vec![2u64, 3, 4, 6, 8, 12]), 1usize..=3).prop_flat_map(|(m, d)| {
        let vecs = move || prop::collection::vec(prop::collection::vec(0..m, d), 0..=3);
        (Just(m), Just(d), vecs(), vecs(), vecs())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn factor_refactors_into_irreducible_coprime_parts(f in arb_monic(12), seed in 0u64..4) {
        let fs = factor(&f, seed).unwrap();
        let mut prod = Poly::one(f.field());
        for (p, e) in &fs {
            prop_assert!(is_irreducible(p.poly()).unwrap());
            prod = &prod * &p.poly().pow(*e);
            prop_assert_eq!(valuation(&f, p).unwrap(), *e);
        }
        prop_assert_eq!(prod, f.clone());
        for (i, (a, _)) in fs.iter().enumerate() {
            for (b, _) in &fs[i + 1..] {
                prop_assert!(a.poly().gcd(b.poly()).unwrap().is_one());
            }
        }
        prop_assert_eq!(factor(&f, seed).unwrap(), fs.clone());
        prop_assert_eq!(factor(&f, seed + 17).unwrap(), fs);
    }

    #[test]
    fn small_factorizations_match_trial_division(f in arb_monic(3)) {
        let got: std::collections::BTreeMap<Poly, u32> =
            factor(&f, 0).unwrap().into_iter().map(|(p, e)| (p.poly().clone(), e)).collect();
        prop_assert_eq!(got, oracle::trial_division_factor(&f));
    }

    #[test]
    fn group_structure((m, d, a, b, c) in arb_group()) {
        let ga = RadicandGroup::new(m, d, a).unwrap();
        let gb = RadicandGroup::new(m, d, b).unwrap();
        let gc = RadicandGroup::new(m, d, c).unwrap();
        let inv = ga.invariant_factors();
        prop_assert_eq!(inv.iter().product::<u64>(), ga.order().unwrap());
        prop_assert_eq!(inv.last().copied().unwrap_or(1), ga.exponent());
        prop_assert_eq!(m % ga.exponent(), 0);
        prop_assert!(inv.windows(2).all(|w| w[1] % w[0] == 0));
        let elems = oracle::enumerate(&ga);
        prop_assert_eq!(elems.len() as u64, ga.order().unwrap());
        prop_assert_eq!(oracle::invariant_factors(m, &elems), inv);

        // partial order
        prop_assert!(ga.contains(&ga).unwrap());
        let ab = ga.join(&gb).unwrap();
        let abc = ab.join(&gc).unwrap();
        prop_assert!(ab.contains(&ga).unwrap() && abc.contains(&ab).unwrap());
        prop_assert!(abc.contains(&ga).unwrap());
        if ga.contains(&gb).unwrap() && gb.contains(&ga).unwrap() {
            prop_assert!(ga.same_subgroup(&gb).unwrap());
            prop_assert_eq!(ga.order().unwrap(), gb.order().unwrap());
        }
        prop_assert_eq!(ga.contains(&gb).unwrap(), oracle::enumerate(&gb).is_subset(&elems));
    }

    #[test]
    fn ramification_agrees_with_lcm_formula(case in arb_case()) {
        let desc = case.descriptor().unwrap();
        let ext = normalize(&desc, 0).unwrap();
        let ram = ramification_indices(&ext);
        prop_assert_eq!(&ram, &ramification_lcm_oracle(&desc, 0).unwrap());
        let q1 = desc.field().unit_order();
        prop_assert_eq!(q1 % ext.exponent, 0);
        for (_, e) in &ram.entries {
            prop_assert_eq!(ext.exponent % e, 0);
        }
        let inv = ext.galois();
        prop_assert_eq!(inv.iter().product::<u64>(), ext.degree);
        prop_assert_eq!(inv.last().copied().unwrap_or(1), ext.exponent);
    }

    #[test]
    fn normalize_invariances(case in arb_case(), rot in 0usize..3, scale in 1u32..13) {
        let desc = case.descriptor().unwrap();
        let field = desc.field().clone();
        let ext = normalize(&desc, 0).unwrap();

        let mut comps = desc.components().to_vec();
        let r = rot % comps.len();
        comps.rotate_left(r);
        // multiply gamma_0 by c^{m_0}
        let c = field.element(1 + scale % (field.q() as u32 - 1)).unwrap();
        comps[0].gamma = field.mul(comps[0].gamma, field.pow(c, comps[0].exponent));
        let other = normalize(&KummerDescriptor::new(&field, comps.clone()).unwrap(), 0).unwrap();
        prop_assert_eq!(&other.basis, &ext.basis);
        prop_assert!(other.group.same_subgroup(&ext.group).unwrap());

        // appending a trivial component
        let m0 = comps[0].exponent;
        comps.push(Component { gamma: field.pow(c, m0), radicand: Poly::one(&field), exponent: m0 });
        comps.push(Component { gamma: FqElem::ONE, radicand: Poly::t(&field).pow(m0 as u32), exponent: m0 });
        let padded = normalize(&KummerDescriptor::new(&field, comps).unwrap(), 0).unwrap();
        let basis = padded.basis.union(&ext.basis);
        let embed = |e: &NormalizedExtension| {
            e.group.embed(&e.basis.embedding_into(&basis).unwrap(), basis.dim()).unwrap()
        };
        prop_assert!(embed(&padded).same_subgroup(&embed(&ext)).unwrap());
    }

    #[test]
    fn genus_field_properties(case in arb_case()) {
        let ext = ext_of(&case);
        let field = ext.field().clone();
        let m = field.unit_order();
        let clement = clement_genus_field(&ext).unwrap();
        let rarzvi = rarzvi_genus_field(&ext).unwrap();
        prop_assert!(verify_degree_formula(&clement, &ext).unwrap());
        prop_assert!(rarzvi.group.contains(&ext.group).unwrap());
        prop_assert!(clement.group.contains(&rarzvi.group).unwrap());
        prop_assert_eq!(clement.group.constant_subgroup_order(), ext.exponent);
        prop_assert!(clement.group.member(&constant_vector(m, ext.basis.dim(), ext.exponent)).unwrap());

        // Galois group of the clement field is C_n x prod C_{e_i}
        let ram = ramification_indices(&ext);
        let mut diag = vec![ext.exponent as i64];
        diag.extend(ram.entries.iter().map(|(_, e)| *e as i64));
        let mut a = IntMatrix::zeros(diag.len(), diag.len());
        for (i, &x) in diag.iter().enumerate() {
            a.set(i, i, x);
        }
        let snf: Vec<u64> = smith_normal_form(&a).unwrap().diag.into_iter()
            .filter(|&x| x > 1).map(|x| x as u64).collect();
        prop_assert_eq!(&clement.galois, &snf);

        let again = clement_genus_field(&normalize(&as_descriptor(&clement, &field).unwrap(), 0).unwrap()).unwrap();
        let basis = again.basis.union(&clement.basis);
        prop_assert!(again.group_over(&basis).unwrap().same_subgroup(&clement.group_over(&basis).unwrap()).unwrap());

        let cmp = compare(&ext).unwrap();
        prop_assert!(cmp.k_in_rarzvi && cmp.rarzvi_in_clement);
        prop_assert_eq!(cmp.index_rarzvi_in_clement, Some(clement.degree / rarzvi.degree));
    }

    #[test]
    fn job_text_round_trips(case in arb_case()) {
        let desc = case.descriptor().unwrap();
        let field = desc.field().clone();
        let config = JobConfig {
            field,
            modulus: None,
            generator: None,
            components: desc.components().to_vec(),
            seed: 0,
            format: Default::default(),
            include_infinite: false,
            include_comparison: false,
            strict: false,
            parallel: false,
        };
        let text = config.render();
        let parsed = parse_input(&text, &ParseOptions::default()).unwrap();
        prop_assert_eq!(&parsed, &config);
        prop_assert_eq!(parsed.render(), text);
    }
}
