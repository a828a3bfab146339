//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Oracles here are written against the public API only.

use std::collections::{BTreeMap, BTreeSet};
use std::process::{Command, Stdio};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kummer_genus::batch::random_corpus;
use kummer_genus::factor::factor;
use kummer_genus::ff::{gcd, FqElem, FqField};
use kummer_genus::genus::{
    as_descriptor, clement_genus_field, compare_fields, rarzvi_genus_field, verify_degree_formula,
    GenusField,
};
use kummer_genus::group::RadicandGroup;
use kummer_genus::kummer::{
    normalize, ramification_indices, ramification_lcm_oracle, Component, KummerDescriptor,
    NormalizedExtension,
};
use kummer_genus::poly::Poly;

const CORPUS_SIZE: usize = 300;
const CORPUS_SEED: u64 = 0x5eed;

struct Outcome {
    id: u32,
    name: &'static str,
    pass: bool,
    detail: String,
}

// ---- test-local oracles ----------------------------------------------------

fn span(m: u64, dim: usize, gens: &[Vec<u64>]) -> BTreeSet<Vec<u64>> {
    let mut all: BTreeSet<Vec<u64>> = [vec![0; dim]].into();
    let mut queue: Vec<Vec<u64>> = all.iter().cloned().collect();
    while let Some(x) = queue.pop() {
        for g in gens {
            let y: Vec<u64> = x.iter().zip(g).map(|(a, b)| (a + b) % m).collect();
            if all.insert(y.clone()) {
                queue.push(y);
            }
        }
    }
    all
}

fn elem_order(m: u64, v: &[u64]) -> u64 {
    v.iter().fold(1, |acc, &x| {
        let o = m / gcd(x, m);
        acc / gcd(acc, o) * o
    })
}

/// Invariant factors from the number of elements of each order.
fn brute_invariant_factors(m: u64, elems: &BTreeSet<Vec<u64>>) -> Vec<u64> {
    let orders: Vec<u64> = elems.iter().map(|v| elem_order(m, v)).collect();
    let n = elems.len() as u64;
    let mut primes = Vec::new();
    let mut r = n;
    let mut l = 2;
    while r > 1 {
        if r % l == 0 {
            primes.push(l);
            while r % l == 0 {
                r /= l;
            }
        }
        l += 1;
    }
    let mut per_prime: Vec<Vec<u64>> = Vec::new();
    for l in primes {
        // a_k = #{x : l^k x = 0}; number of cyclic factors of order >= l^k is log_l(a_k / a_{k-1})
        let mut factors: Vec<u64> = Vec::new();
        let mut prev = 1u64;
        let mut lk = 1u64;
        let mut ranks = Vec::new();
        loop {
            lk *= l;
            let a = orders.iter().filter(|&&o| lk % o == 0).count() as u64;
            let mut ratio = a / prev;
            let mut rank = 0;
            while ratio > 1 {
                ratio /= l;
                rank += 1;
            }
            if rank == 0 {
                break;
            }
            ranks.push(rank);
            prev = a;
        }
        // ranks[k-1] = number of factors with exponent >= k
        for i in 0..ranks.first().copied().unwrap_or(0) {
            let e = ranks.iter().filter(|&&r| r > i).count() as u32;
            factors.push(l.pow(e));
        }
        per_prime.push(factors);
    }
    let width = per_prime.iter().map(Vec::len).max().unwrap_or(0);
    let mut out: Vec<u64> = (0..width)
        .map(|i| {
            per_prime
                .iter()
                .map(|f| f.get(i).copied().unwrap_or(1))
                .product()
        })
        .collect();
    out.sort_unstable();
    out
}

fn monic_of_degree(field: &FqField, d: usize) -> Vec<Poly> {
    let q = field.q();
    (0..q.pow(d as u32))
        .map(|mut t| {
            let mut c: Vec<FqElem> = (0..d)
                .map(|_| {
                    let x = field.element((t % q) as u32).unwrap();
                    t /= q;
                    x
                })
                .collect();
            c.push(FqElem::ONE);
            Poly::new(field, c)
        })
        .collect()
}

/// All monic divisors of positive degree; the irreducible ones are those with
/// no proper divisor in the list; multiplicities by repeated division.
fn divisor_oracle(f: &Poly) -> BTreeMap<Poly, u32> {
    let field = f.field();
    let deg = f.degree().unwrap();
    let divs: Vec<Poly> = (1..=deg)
        .flat_map(|d| monic_of_degree(field, d))
        .filter(|g| f.rem(g).unwrap().is_zero())
        .collect();
    let mut out = BTreeMap::new();
    for p in &divs {
        let pd = p.degree().unwrap();
        let irreducible = !divs
            .iter()
            .any(|g| g.degree().unwrap() < pd && p.rem(g).unwrap().is_zero());
        if irreducible {
            let mut k = 0;
            let mut rest = f.clone();
            while let Some(qt) = rest.exact_div(p) {
                rest = qt;
                k += 1;
            }
            out.insert(p.clone(), k);
        }
    }
    out
}

// ---- helpers ---------------------------------------------------------------

struct Built {
    desc: KummerDescriptor,
    ext: NormalizedExtension,
    clement: GenusField,
    rarzvi: GenusField,
}

fn build(desc: KummerDescriptor) -> Built {
    let ext = normalize(&desc, 0).expect("normalize");
    let clement = clement_genus_field(&ext).expect("clement");
    let rarzvi = rarzvi_genus_field(&ext).expect("rarzvi");
    Built {
        desc,
        ext,
        clement,
        rarzvi,
    }
}

fn count_failures<T>(items: &[T], f: impl Fn(&T) -> bool) -> usize {
    items.iter().filter(|x| !f(x)).count()
}

fn corpus_line(id: u32, name: &'static str, fails: usize, n: usize, extra: &str) -> Outcome {
    Outcome {
        id,
        name,
        pass: fails == 0,
        detail: format!("{} descriptors, {fails} mismatches{extra}", n),
    }
}

// ---- criteria --------------------------------------------------------------

fn corpus_criteria(out: &mut Vec<Outcome>) {
    let start = Instant::now();
    let corpus: Vec<Built> = random_corpus(CORPUS_SIZE, CORPUS_SEED)
        .iter()
        .map(|c| build(c.descriptor().expect("valid corpus case")))
        .collect();
    let n = corpus.len();

    let f1 = count_failures(&corpus, |b| {
        let ram = ramification_indices(&b.ext);
        let expected = b.ext.exponent * ram.entries.iter().map(|(_, e)| e).product::<u64>();
        b.clement.group.order().unwrap() == expected
            && verify_degree_formula(&b.clement, &b.ext).unwrap()
    });
    let elapsed = start.elapsed().as_secs_f64();
    let mut c1 = corpus_line(1, "degree formula", f1, n, &format!(", {elapsed:.2} s"));
    c1.pass &= elapsed < 10.0;
    out.push(c1);

    let f2 = count_failures(&corpus, |b| {
        let m = b.ext.modulus();
        let dim = b.ext.basis.dim();
        let mut gens = Vec::new();
        let mut g = vec![0; dim];
        g[0] = m / b.ext.exponent % m;
        gens.push(g);
        for (p, e) in &ramification_indices(&b.ext).entries {
            let mut v = vec![0; dim];
            v[1 + b.ext.basis.index_of(p).unwrap()] = m / e;
            gens.push(v);
        }
        let literal = RadicandGroup::new(m, dim, gens).unwrap();
        literal.same_subgroup(&b.clement.group).unwrap()
    });
    out.push(corpus_line(
        2,
        "clement field equals literal radical list",
        f2,
        n,
        "",
    ));

    let f3 = count_failures(&corpus, |b| {
        let c = compare_fields(&b.ext, &b.clement, &b.rarzvi).unwrap();
        c.k_in_rarzvi
            && c.rarzvi_in_clement
            && b.ext
                .group
                .generators()
                .iter()
                .all(|v| b.rarzvi.group.member(v).unwrap())
            && b.rarzvi
                .group
                .generators()
                .iter()
                .all(|v| b.clement.group.member(v).unwrap())
    });
    out.push(corpus_line(
        3,
        "containment chain K <= rarzvi <= clement",
        f3,
        n,
        "",
    ));

    let f4 = count_failures(&corpus, |b| {
        let d = as_descriptor(&b.clement, b.desc.field()).unwrap();
        let again = build(d).clement;
        let basis = again.basis.union(&b.clement.basis);
        again
            .group_over(&basis)
            .unwrap()
            .same_subgroup(&b.clement.group_over(&basis).unwrap())
            .unwrap()
    });
    out.push(corpus_line(
        4,
        "idempotence of the clement field",
        f4,
        n,
        "",
    ));

    let f5 = count_failures(&corpus, |b| {
        b.clement.group.constant_subgroup_order() == b.ext.exponent
    });
    out.push(corpus_line(5, "constant field F_{q^n}", f5, n, ""));

    let mut brute = 0;
    let f7 = count_failures(&corpus, |b| {
        let ram = ramification_indices(&b.ext);
        let mut ok = ram == ramification_lcm_oracle(&b.desc, 0).unwrap();
        let m = b.ext.modulus();
        let dim = b.ext.basis.dim();
        if m.checked_pow(dim as u32).is_some_and(|s| s <= 1 << 16) {
            let elems = span(m, dim, b.ext.group.generators());
            for (j, p) in b.ext.basis.primes().iter().enumerate() {
                let image: BTreeSet<u64> = elems.iter().map(|v| v[1 + j]).collect();
                ok &= image.len() as u64 == ram.index_of(p);
            }
        }
        ok
    });
    for b in &corpus {
        let m = b.ext.modulus();
        if m.checked_pow(b.ext.basis.dim() as u32)
            .is_some_and(|s| s <= 1 << 16)
        {
            brute += 1;
        }
    }
    out.push(corpus_line(
        7,
        "ramification: projection vs lcm formula vs enumeration",
        f7,
        n,
        &format!(", {brute} enumerated"),
    ));
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let cases: [(u64, u64, &[i64]); 5] = [
        (5, 2, &[0, 1]),
        (7, 2, &[0, 1]),
        (13, 2, &[0, 1]),
        (13, 3, &[0, 1]),
        (7, 2, &[3, 1, 1]),
    ];
    let mut bad = Vec::new();
    for (q, l, p) in cases {
        let field = FqField::build(q, 1).unwrap();
        let prime = Poly::from_ints(&field, p);
        let sign = if prime.degree().unwrap() % 2 == 0 {
            1
        } else {
            -1
        };
        let comp = Component {
            gamma: field.from_int(sign),
            radicand: prime.clone(),
            exponent: l,
        };
        let b = build(KummerDescriptor::new(&field, vec![comp]).unwrap());
        let m = q - 1;
        let mut cvec = vec![0; b.ext.basis.dim()];
        cvec[0] = m / l;
        let expected_clement = b.ext.group.with_generator(cvec).unwrap();
        let c = compare_fields(&b.ext, &b.clement, &b.rarzvi).unwrap();
        let ok = b.rarzvi.group.same_subgroup(&b.ext.group).unwrap()
            && b.clement.group.same_subgroup(&expected_clement).unwrap()
            && c.rarzvi_in_clement
            && c.index_rarzvi_in_clement == Some(l)
            && b.clement.degree == l * b.rarzvi.degree;
        if !ok {
            bad.push(format!("({q},{l},{prime})"));
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    Outcome {
        id: 6,
        name: "signed-prime family: rarzvi = K, clement = K + constants, index l",
        pass: bad.is_empty() && elapsed < 1.0,
        detail: if bad.is_empty() {
            format!("5 instances, {elapsed:.3} s")
        } else {
            format!("failed: {}", bad.join(" "))
        },
    }
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let moduli = [2u64, 3, 4, 5, 6, 7, 8, 9, 10, 12, 13, 15, 16];
    let groups = 600;
    let mut bad = 0;
    for _ in 0..groups {
        let m = moduli[rng.gen_range(0..moduli.len())];
        let max_d = (1..=8).take_while(|&d| m.pow(d) <= 1 << 16).last().unwrap() as usize;
        let d = rng.gen_range(1..=max_d.min(5));
        let k = rng.gen_range(0..=d + 1);
        let gens: Vec<Vec<u64>> = (0..k)
            .map(|_| (0..d).map(|_| rng.gen_range(0..m)).collect())
            .collect();
        let g = RadicandGroup::new(m, d, gens).unwrap();
        let elems = span(m, d, g.generators());

        let mut ok = g.order().unwrap() == elems.len() as u64;
        ok &= g.invariant_factors() == brute_invariant_factors(m, &elems);
        let ambient = m.pow(d as u32);
        if ambient <= 4096 {
            for t in 0..ambient {
                let v: Vec<u64> = (0..d).map(|i| t / m.pow(i as u32) % m).collect();
                ok &= g.member(&v).unwrap() == elems.contains(&v);
            }
        } else {
            for _ in 0..512 {
                let v: Vec<u64> = (0..d).map(|_| rng.gen_range(0..m)).collect();
                ok &= g.member(&v).unwrap() == elems.contains(&v);
            }
            ok &= elems.iter().all(|v| g.member(v).unwrap());
        }
        // a probe inside the group and a random probe
        let inside: Vec<Vec<u64>> = elems
            .iter()
            .filter(|_| rng.gen_bool(0.3))
            .take(3)
            .cloned()
            .collect();
        let random: Vec<Vec<u64>> = (0..2)
            .map(|_| (0..d).map(|_| rng.gen_range(0..m)).collect())
            .collect();
        for probe in [inside, random] {
            let h = RadicandGroup::new(m, d, probe.clone()).unwrap();
            ok &= g.contains(&h).unwrap() == span(m, d, &probe).is_subset(&elems);
        }
        bad += usize::from(!ok);
    }
    Outcome {
        id: 8,
        name: "group engine vs exhaustive enumeration",
        pass: bad == 0,
        detail: format!("{groups} subgroups with M^d <= 2^16, {bad} mismatches"),
    }
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let fields: Vec<FqField> = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (3, 2), (13, 1)]
        .iter()
        .map(|&(p, f)| FqField::build(p, f).unwrap())
        .collect();
    let total = 1200;
    let (mut bad, mut small, mut small_bad) = (0, 0, 0);
    for i in 0..total {
        let field = &fields[i % fields.len()];
        let deg = rng.gen_range(1..=12);
        let mut c: Vec<FqElem> = (0..deg)
            .map(|_| field.element(rng.gen_range(0..field.q()) as u32).unwrap())
            .collect();
        c.push(FqElem::ONE);
        let f = Poly::new(field, c);
        let fs = factor(&f, i as u64).unwrap();
        let mut prod = Poly::one(field);
        for (p, e) in &fs {
            prod = &prod * &p.poly().pow(*e);
        }
        bad += usize::from(prod != f);
        if deg <= 3 {
            small += 1;
            let got: BTreeMap<Poly, u32> = fs.iter().map(|(p, e)| (p.poly().clone(), *e)).collect();
            small_bad += usize::from(got != divisor_oracle(&f));
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    Outcome {
        id: 9,
        name: "factorization: refactoring and all-divisors oracle",
        pass: bad == 0 && small_bad == 0 && elapsed < 30.0,
        detail: format!(
            "{total} polynomials, {bad} refactoring mismatches; {small} of degree <= 3, {small_bad} oracle mismatches; {elapsed:.2} s"
        ),
    }
}

fn criterion_10() -> Outcome {
    let jobs = [
        (
            "field p=5 f=1\ncomponent gamma=2 D=T^3+2*T^2+T m=4\n",
            vec!["compute"],
        ),
        (
            "field p=7 f=1\ncomponent gamma=6 D=T m=2\n",
            vec!["compute", "--infinite", "--compare"],
        ),
        (
            "field p=3 f=2\ncomponent gamma=g^3 D=T^2+1 m=8\ncomponent gamma=g D=T^3+T+g^2 m=4\n",
            vec!["compare", "--seed", "11"],
        ),
        (
            "field p=13 f=1\ncomponent gamma=2 D=T^6+5*T^2+1 m=12\ncomponent gamma=3 D=T^4+T m=4\n",
            vec!["compare", "--parallel", "--seed", "3"],
        ),
    ];
    let run = |text: &str, args: &[&str]| {
        let mut child = Command::new(env!("CARGO_BIN_EXE_kgenus"))
            .args(args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .expect("spawn kgenus");
        use std::io::Write;
        child
            .stdin
            .take()
            .unwrap()
            .write_all(text.as_bytes())
            .unwrap();
        let out = child.wait_with_output().unwrap();
        (out.status.code(), out.stdout)
    };
    let mut bad = 0;
    for (text, args) in &jobs {
        let a = run(text, args);
        let b = run(text, args);
        bad += usize::from(a.0 != Some(0) || a != b || a.1.is_empty());
    }
    Outcome {
        id: 10,
        name: "byte-identical JSON across runs",
        pass: bad == 0,
        detail: format!("{} jobs run twice, {bad} differences", jobs.len()),
    }
}

fn main() {
    let mut out = Vec::new();
    corpus_criteria(&mut out);
    out.push(criterion_6());
    out.push(criterion_8());
    out.push(criterion_9());
    out.push(criterion_10());
    out.sort_by_key(|o| o.id);
    let mut failed = 0;
    for o in &out {
        println!(
            "criterion {:>2}: {}  {} ({})",
            o.id,
            if o.pass { "PASS" } else { "FAIL" },
            o.name,
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {} passed, {} failed",
        out.len() - failed,
        failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
