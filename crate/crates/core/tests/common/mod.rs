//! Oracles shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use std::collections::BTreeMap;

use hopfcyclic::algebra::{basis_monomials, generators, Gen, Hn, HopfElement};
use hopfcyclic::hopf::{antipode, antipode_convolutions, coproduct, counit, twisted_antipode, ModularPair};
use hopfcyclic::pbw::Relations;
use hopfcyclic::rational::q;
use hopfcyclic::{Monomial, Q};
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Rewrites a bag of words by picking, at random, a term and any applicable
/// step: an adjacent descent `ab → ba + [a,b]` or the rewrite of a non-basis
/// generator. Shares only the relation data with the library normalizer.
pub fn brute_force(rel: &Hn, words: Vec<(Vec<Gen>, Q)>, rng: &mut ChaCha8Rng) -> BTreeMap<Vec<Gen>, Q> {
    let mut pending = words;
    let mut done: BTreeMap<Vec<Gen>, Q> = BTreeMap::new();
    while !pending.is_empty() {
        let idx = rng.gen_range(0..pending.len());
        let (w, c) = pending.swap_remove(idx);
        if c.is_zero() {
            continue;
        }
        let mut moves: Vec<(bool, usize)> = vec![];
        for (p, g) in w.iter().enumerate() {
            if !g.is_basis() {
                moves.push((true, p));
            }
        }
        for p in 0..w.len().saturating_sub(1) {
            if w[p] > w[p + 1] {
                moves.push((false, p));
            }
        }
        if moves.is_empty() {
            let e = done.entry(w).or_insert_with(Q::zero);
            *e += c;
            continue;
        }
        let (expand, p) = moves[rng.gen_range(0..moves.len())];
        if expand {
            for (sub, cs) in rel.expand(&w[p]).unwrap() {
                let mut nw = w[..p].to_vec();
                nw.extend(sub);
                nw.extend(w[p + 1..].iter().cloned());
                pending.push((nw, &c * cs));
            }
        } else {
            let mut swapped = w.clone();
            swapped.swap(p, p + 1);
            pending.push((swapped, c.clone()));
            for (sub, cs) in rel.commutator(&w[p], &w[p + 1]) {
                let mut nw = w[..p].to_vec();
                nw.extend(sub);
                nw.extend(w[p + 2..].iter().cloned());
                pending.push((nw, &c * cs));
            }
        }
    }
    done.retain(|_, c| !c.is_zero());
    done
}

pub fn random_symbol(rng: &mut ChaCha8Rng, n: usize) -> Gen {
    let n8 = n as u8;
    let kind = rng.gen_range(0..3);
    let (i, j, k) = (rng.gen_range(1..=n8), rng.gen_range(1..=n8), rng.gen_range(1..=n8));
    match kind {
        0 => Gen::X(i),
        1 => Gen::Y(i, j),
        _ => {
            let r = rng.gen_range(0..=2);
            let tail: Vec<u8> = (0..r).map(|_| rng.gen_range(1..=n8)).collect();
            Gen::delta(i, j, k, tail)
        }
    }
}

pub fn monomials(n: usize, d: usize) -> Vec<Monomial> {
    let tail = if n == 1 { d } else { 1 };
    basis_monomials(&generators(n, tail), d)
}

pub fn el(n: usize, m: &Monomial) -> HopfElement {
    HopfElement::mono(n, m.clone(), q(1))
}

/// Coassociativity, counit, antipode and ε∘S̃ = δ, δ∘S̃ = ε on one monomial.
pub fn axiom_failure(n: usize, m: &Monomial) -> Option<String> {
    let h = el(n, m);
    let cop = coproduct(&h);
    let left = cop.map_slot(0, 2, |a| coproduct(&el(n, a)));
    let right = cop.map_slot(1, 2, |a| coproduct(&el(n, a)));
    if left != right {
        return Some(format!("coassociativity on {m:?}"));
    }
    let mut l = HopfElement::zero(n);
    let mut r = HopfElement::zero(n);
    for (k, c) in &cop.terms {
        l = l.add(&el(n, &k[1]).scale(&(c * counit(&el(n, &k[0])))));
        r = r.add(&el(n, &k[0]).scale(&(c * counit(&el(n, &k[1])))));
    }
    if l != h || r != h {
        return Some(format!("counit on {m:?}"));
    }
    let (sl, sr) = antipode_convolutions(&h);
    let eps = HopfElement::scalar(n, counit(&h));
    if sl != eps || sr != eps {
        return Some(format!("antipode convolution on {m:?}"));
    }
    let pair = ModularPair::canonical(n);
    let st = twisted_antipode(&pair, &h);
    if counit(&st) != pair.delta.eval(&h) || pair.delta.eval(&st) != counit(&h) {
        return Some(format!("twisted antipode and characters on {m:?}"));
    }
    None
}

/// Δ, ε and S against products m·g with m of degree ≤ d−1 and g a generator.
pub fn bialgebra_failure(n: usize, d: usize) -> Option<String> {
    use rayon::prelude::*;
    let tail = if n == 1 { d } else { 1 };
    let gens = generators(n, tail);
    let pairs: Vec<(Monomial, Gen)> = basis_monomials(&gens, d - 1)
        .into_iter()
        .flat_map(|m| gens.iter().map(move |g| (m.clone(), g.clone())))
        .collect();
    pairs.par_iter().find_map_any(|(m, g)| {
        let (a, b) = (el(n, m), HopfElement::gen(n, g.clone()));
        let ok = coproduct(&a.mul(&b)) == coproduct(&a).mul(&coproduct(&b))
            && counit(&a.mul(&b)) == counit(&a) * counit(&b)
            && antipode(&a.mul(&b)) == antipode(&b).mul(&antipode(&a));
        (!ok).then(|| format!("{m:?} * {g:?}"))
    })
}
