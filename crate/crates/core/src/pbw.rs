//! Algebras presented by a totally ordered generating set and commutation
//! rules `ab = ba + [a, b]` for `a > b`, with normal forms in the basis of
//! non-decreasing words. Enveloping algebras of Lie algebras are the case
//! where every `[a, b]` is linear; polynomial right-hand sides and rewrites
//! of non-basis generators are also allowed.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::{Arc, RwLock};

use num_traits::Zero;

use crate::rational::Q;

pub trait Relations: Send + Sync {
    type Gen: Clone + Ord + Hash + Debug + Send + Sync;

    /// ab − ba for a > b, as a combination of words (not necessarily normal).
    fn commutator(&self, a: &Self::Gen, b: &Self::Gen) -> Vec<(Vec<Self::Gen>, Q)>;

    /// Rewrite of a generator outside the basis; `None` for basis generators.
    fn expand(&self, _g: &Self::Gen) -> Option<Vec<(Vec<Self::Gen>, Q)>> {
        None
    }
}

/// Linear combination of sorted words.
pub type Lin<G> = BTreeMap<Vec<G>, Q>;

pub fn lin_add<G: Ord + Clone>(acc: &mut Lin<G>, word: Vec<G>, c: Q) {
    if c.is_zero() {
        return;
    }
    match acc.entry(word) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

pub fn lin_axpy<G: Ord + Clone>(acc: &mut Lin<G>, c: &Q, x: &Lin<G>) {
    if c.is_zero() {
        return;
    }
    for (w, v) in x {
        lin_add(acc, w.clone(), c * v);
    }
}

pub fn lin_scale<G: Ord + Clone>(x: &Lin<G>, c: &Q) -> Lin<G> {
    if c.is_zero() {
        return Lin::new();
    }
    x.iter().map(|(w, v)| (w.clone(), v * c)).collect()
}

type Memo<G> = RwLock<HashMap<(Vec<G>, G), Arc<Lin<G>>>>;

/// U(𝔤) with memoized right multiplication of sorted words by generators.
pub struct Enveloping<L: Relations> {
    pub lie: L,
    memo: Memo<L::Gen>,
}

impl<L: Relations> Enveloping<L> {
    pub fn new(lie: L) -> Self {
        Enveloping { lie, memo: RwLock::new(HashMap::new()) }
    }

    /// Sorted word times one generator, in normal form.
    ///
    /// For `w = u·a` with `a > g`: `u·a·g = (u·g)·a + u·[a,g]`.
    pub fn mul_word_gen(&self, w: &[L::Gen], g: &L::Gen) -> Arc<Lin<L::Gen>> {
        if let Some(p) = self.lie.expand(g) {
            let key = (w.to_vec(), g.clone());
            if let Some(hit) = self.memo.read().unwrap().get(&key) {
                return hit.clone();
            }
            let mut out = Lin::new();
            for (word, c) in p {
                lin_axpy(&mut out, &c, &self.mul_words(w, &word));
            }
            let out = Arc::new(out);
            self.memo.write().unwrap().insert(key, out.clone());
            return out;
        }
        match w.last() {
            None => return Arc::new(Lin::from([(vec![g.clone()], Q::from_integer(1.into()))])),
            Some(last) if last <= g => {
                let mut v = w.to_vec();
                v.push(g.clone());
                return Arc::new(Lin::from([(v, Q::from_integer(1.into()))]));
            }
            _ => {}
        }
        let key = (w.to_vec(), g.clone());
        if let Some(hit) = self.memo.read().unwrap().get(&key) {
            return hit.clone();
        }
        let (a, u) = w.split_last().unwrap();
        let mut out = Lin::new();
        for (t, c) in self.mul_word_gen(u, g).iter() {
            lin_axpy(&mut out, c, &self.mul_word_gen(t, a));
        }
        for (word, c) in self.lie.commutator(a, g) {
            lin_axpy(&mut out, &c, &self.mul_words(u, &word));
        }
        let out = Arc::new(out);
        self.memo.write().unwrap().insert(key, out.clone());
        out
    }

    pub fn mul_words(&self, a: &[L::Gen], b: &[L::Gen]) -> Lin<L::Gen> {
        let mut cur = Lin::from([(a.to_vec(), Q::from_integer(1.into()))]);
        for g in b {
            let mut next = Lin::new();
            for (w, c) in &cur {
                lin_axpy(&mut next, c, &self.mul_word_gen(w, g));
            }
            cur = next;
        }
        cur
    }

    pub fn mul(&self, a: &Lin<L::Gen>, b: &Lin<L::Gen>) -> Lin<L::Gen> {
        let mut out = Lin::new();
        for (wa, ca) in a {
            for (wb, cb) in b {
                lin_axpy(&mut out, &(ca * cb), &self.mul_words(wa, wb));
            }
        }
        out
    }

    /// Normal form of an arbitrary (unsorted) word.
    pub fn normal_form_word(&self, word: &[L::Gen]) -> Lin<L::Gen> {
        self.mul_words(&[], word)
    }

    pub fn normal_form(&self, x: &[(Vec<L::Gen>, Q)]) -> Lin<L::Gen> {
        let mut out = Lin::new();
        for (w, c) in x {
            lin_axpy(&mut out, c, &self.normal_form_word(w));
        }
        out
    }

    /// [a, b] of two elements of U(𝔤).
    pub fn commutator(&self, a: &Lin<L::Gen>, b: &Lin<L::Gen>) -> Lin<L::Gen> {
        let mut out = self.mul(a, b);
        lin_axpy(&mut out, &Q::from_integer((-1).into()), &self.mul(b, a));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    /// sl(2) with e < f < h ordering: [e,f]=h, [h,e]=2e, [h,f]=-2f.
    struct Sl2;
    impl Relations for Sl2 {
        type Gen = u8;
        fn commutator(&self, a: &u8, b: &u8) -> Vec<(Vec<u8>, Q)> {
            match (a, b) {
                (1, 0) => vec![(vec![2], q(-1))],
                (2, 0) => vec![(vec![0], q(2))],
                (2, 1) => vec![(vec![1], q(-2))],
                _ => vec![],
            }
        }
    }

    #[test]
    fn sl2_relations() {
        let u = Enveloping::new(Sl2);
        // f·e = e·f − h
        let nf = u.normal_form_word(&[1, 0]);
        assert_eq!(nf, Lin::from([(vec![0, 1], q(1)), (vec![2], q(-1))]));
        // h·e = e·h + 2e
        let nf = u.normal_form_word(&[2, 0]);
        assert_eq!(nf, Lin::from([(vec![0, 2], q(1)), (vec![0], q(2))]));
    }

    #[test]
    fn sl2_casimir_is_central() {
        let u = Enveloping::new(Sl2);
        // C = 2ef + 2fe + h²... use ef + fe + h²/2
        let mut c = u.normal_form(&[(vec![0, 1], q(2)), (vec![1, 0], q(2)), (vec![2, 2], q(1))]);
        c.retain(|_, v| !v.is_zero());
        for g in 0..3u8 {
            let x = Lin::from([(vec![g], q(1))]);
            assert!(u.commutator(&c, &x).is_empty());
        }
    }
}
