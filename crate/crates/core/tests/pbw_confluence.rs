mod common;

use common::{brute_force, random_symbol};
use hopfcyclic::algebra::{env, generators, jacobi_check, normal_form, Gen, Hn, HopfElement};
use hopfcyclic::rational::q;
use hopfcyclic::Q;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[test]
fn normal_form_matches_randomized_rewriter() {
    for n in [1usize, 2] {
        let rel = Hn { n };
        let mismatches: Vec<String> = (0..200u64)
            .into_par_iter()
            .filter_map(|t| {
                let mut rng = ChaCha8Rng::seed_from_u64(1000 * n as u64 + t);
                let len = rng.gen_range(0..=5);
                let w: Vec<Gen> = (0..len).map(|_| random_symbol(&mut rng, n)).collect();
                let lib = normal_form(n, &[(w.clone(), q(1))]).unwrap();
                let bf = brute_force(&rel, vec![(w.clone(), q(1))], &mut rng);
                (lib.terms != bf).then(|| format!("{w:?}"))
            })
            .collect();
        assert!(mismatches.is_empty(), "codim {n}: {mismatches:?}");
    }
}

#[test]
fn jacobi_all_triples() {
    for n in [1usize, 2, 3] {
        let gens = generators(n, 2);
        let mut triples = vec![];
        for a in 0..gens.len() {
            for b in a + 1..gens.len() {
                for c in b + 1..gens.len() {
                    triples.push((a, b, c));
                }
            }
        }
        let bad = triples
            .par_iter()
            .find_any(|(a, b, c)| !jacobi_check(n, &gens[*a], &gens[*b], &gens[*c]).unwrap());
        assert!(bad.is_none(), "codim {n}: {bad:?}");
    }
}

#[test]
fn jacobi_examples() {
    assert!(jacobi_check(1, &Gen::Y(1, 1), &Gen::X(1), &Gen::d(1)).unwrap());
    assert!(jacobi_check(2, &Gen::X(1), &Gen::X(2), &Gen::X(1)).unwrap());
    assert!(jacobi_check(2, &Gen::Y(1, 2), &Gen::Y(2, 1), &Gen::Y(1, 1)).unwrap());
    assert!(jacobi_check(1, &Gen::X(2), &Gen::X(1), &Gen::X(1)).is_err());
}

fn commutative_product(a: &HopfElement, b: &HopfElement) -> HopfElement {
    let mut out = HopfElement::zero(a.codim);
    for (wa, ca) in &a.terms {
        for (wb, cb) in &b.terms {
            let mut w = wa.clone();
            w.extend(wb.iter().cloned());
            w.sort();
            out = out.add(&HopfElement::mono(a.codim, w, ca * cb));
        }
    }
    out
}

#[test]
fn filtration() {
    for n in [1usize, 2] {
        let mut rng = ChaCha8Rng::seed_from_u64(77 + n as u64);
        for _ in 0..50 {
            let a = hopfcyclic::hopf::random_element(&mut rng, n, 3, 1, 3);
            let b = hopfcyclic::hopf::random_element(&mut rng, n, 3, 1, 3);
            let p = a.mul(&b);
            assert!(p.degree() <= a.degree() + b.degree());
            if n == 1 && !a.is_zero() && !b.is_zero() {
                let top = p.terms.iter().filter(|(m, _)| m.len() == a.degree() + b.degree());
                let top = HopfElement { codim: 1, terms: top.map(|(m, c)| (m.clone(), c.clone())).collect() };
                assert_eq!(top, commutative_product(&a.top_part(), &b.top_part()));
            }
        }
    }
}

#[test]
fn unit_and_codim_mismatch() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let h = hopfcyclic::hopf::random_element(&mut rng, 2, 3, 1, 4);
    assert_eq!(HopfElement::one(2).mul(&h), h);
    assert_eq!(h.mul(&HopfElement::one(2)), h);
    assert!(hopfcyclic::algebra::multiply(&h, &HopfElement::one(1)).is_err());
    let x = HopfElement::gen(1, Gen::X(1));
    let y = HopfElement::gen(1, Gen::Y(1, 1));
    assert_eq!(x.mul(&y), HopfElement::mono(1, vec![Gen::X(1), Gen::Y(1, 1)], q(1)));
    assert_eq!(y.mul(&x), x.mul(&y).add(&x));
}

#[test]
fn associativity_fifty_triples() {
    for n in [1usize, 2] {
        let mut rng = ChaCha8Rng::seed_from_u64(500 + n as u64);
        for _ in 0..50 {
            let a = hopfcyclic::hopf::random_element(&mut rng, n, 3, 1, 2);
            let b = hopfcyclic::hopf::random_element(&mut rng, n, 3, 1, 2);
            let c = hopfcyclic::hopf::random_element(&mut rng, n, 3, 1, 2);
            assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }
    }
}

#[test]
fn normal_form_is_idempotent() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..30 {
        let h = hopfcyclic::hopf::random_element(&mut rng, 2, 4, 2, 3);
        let words: Vec<(Vec<Gen>, Q)> = h.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        assert_eq!(env(2).normal_form(&words), h.terms);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn associativity_on_words(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=2usize);
        let w: Vec<Vec<Gen>> = (0..3).map(|_| {
            let len = rng.gen_range(0..=2);
            (0..len).map(|_| random_symbol(&mut rng, n)).collect()
        }).collect();
        let e = |w: &Vec<Gen>| normal_form(n, &[(w.clone(), q(1))]).unwrap();
        let (a, b, c) = (e(&w[0]), e(&w[1]), e(&w[2]));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        let mut all = w[0].clone();
        all.extend(w[1].iter().cloned());
        all.extend(w[2].iter().cloned());
        prop_assert_eq!(e(&all), a.mul(&b).mul(&c));
    }
}
