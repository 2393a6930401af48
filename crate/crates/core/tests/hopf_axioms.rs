mod common;

use common::{axiom_failure, bialgebra_failure, el, monomials};
use hopfcyclic::algebra::{Gen, HopfElement};
use hopfcyclic::hopf::{
    antipode, check_involution, coproduct, involution_witness, random_element, twisted_antipode,
    twisted_antipode_multiplicative, Character, ModularPair,
};
use hopfcyclic::rational::q;
use hopfcyclic::{Monomial, TensorCochain};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn check_coalgebra(n: usize, m: &Monomial) {
    if let Some(msg) = axiom_failure(n, m) {
        panic!("{msg}");
    }
}

#[test]
fn coalgebra_and_antipode_axioms_codim1() {
    monomials(1, 4).par_iter().for_each(|m| check_coalgebra(1, m));
}

#[test]
fn coalgebra_and_antipode_axioms_codim2() {
    monomials(2, 2).par_iter().for_each(|m| check_coalgebra(2, m));
}

/// Δ(mg) = Δ(m)Δ(g) and S(mg) = S(g)S(m) for every monomial m of degree
/// ≤ d−1 and generator g; by induction this covers all products of degree ≤ d.
#[test]
fn coproduct_is_multiplicative() {
    for (n, d) in [(1usize, 4usize), (2, 2)] {
        assert_eq!(bialgebra_failure(n, d), None);
    }
}

#[test]
fn known_coproducts_codim1() {
    let g = |x| HopfElement::gen(1, x);
    let x = g(Gen::X(1));
    let y = g(Gen::Y(1, 1));
    let d1 = g(Gen::d(1));
    let one = HopfElement::one(1);
    let t = |a: &HopfElement, b: &HopfElement| TensorCochain::tensor(1, &[a.clone(), b.clone()]);
    assert_eq!(coproduct(&x), t(&x, &one).add(&t(&one, &x)).add(&t(&d1, &y)));
    assert_eq!(coproduct(&y), t(&y, &one).add(&t(&one, &y)));
    let d2 = g(Gen::d(2));
    assert_eq!(coproduct(&d2), t(&d2, &one).add(&t(&one, &d2)).add(&t(&d1, &d1)));
    assert_eq!(antipode(&y), y.neg());
    assert_eq!(antipode(&x), x.neg().add(&d1.mul(&y)));
    assert_eq!(antipode(&d2), d2.neg().add(&d1.mul(&d1)));
}

#[test]
fn involution() {
    assert!(check_involution(&ModularPair::canonical(1), 3).unwrap());
    assert!(check_involution(&ModularPair::canonical(2), 2).unwrap());
    let w = involution_witness(&ModularPair::untwisted(1), 2).unwrap();
    assert!(w.is_some());
    assert!(check_involution(&ModularPair::canonical(1), 0).is_err());
}

#[test]
fn twisted_antipode_is_anti_multiplicative() {
    for n in [1usize, 2] {
        let pair = ModularPair::canonical(n);
        let mut rng = ChaCha8Rng::seed_from_u64(40 + n as u64);
        for _ in 0..25 {
            let a = random_element(&mut rng, n, 2, 1, 2);
            let b = random_element(&mut rng, n, 2, 1, 2);
            assert_eq!(
                twisted_antipode(&pair, &a.mul(&b)),
                twisted_antipode(&pair, &b).mul(&twisted_antipode(&pair, &a))
            );
        }
        for m in monomials(n, 2) {
            assert_eq!(twisted_antipode(&pair, &el(n, &m)), twisted_antipode_multiplicative(&pair, &m, n));
        }
    }
}

#[test]
fn modular_character() {
    let delta = Character::modular(2);
    delta.validate(2, 2).unwrap();
    assert_eq!(delta.on_gen(&Gen::Y(1, 1)), q(1));
    assert_eq!(delta.on_gen(&Gen::Y(1, 2)), q(0));
    assert_eq!(delta.on_gen(&Gen::X(1)), q(0));
    let mut bad = std::collections::BTreeMap::new();
    bad.insert(Gen::X(1), q(1));
    assert!(Character::new(bad).validate(1, 1).is_err());
}
