//! The Lie algebras 𝔥ₙ, their enveloping algebras ℋₙ and PBW normal forms.
//!
//! Generators are ordered `Delta < X < Y`, each block lexicographically on
//! indices, so a normal-form monomial reads δ…δ X…X Y…Y.
//!
//! For n ≥ 2 the δ's are not independent: compatibility of the coproduct
//! with [X_k, X_l] = 0 forces
//!
//! δⁱ_{jk|l} − δⁱ_{jl|k} = δˢ_{jl}δⁱ_{sk} − δˢ_{jk}δⁱ_{sl},
//!
//! and its images under ad X. Basis δ's are those whose full lower index
//! j ≤ k ≤ l₁ ≤ … is sorted; every other δ-symbol is rewritten through the
//! identity above.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{OnceLock, RwLock};

use arrayvec::ArrayVec;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::pbw::{lin_add, lin_axpy, lin_scale, Enveloping, Lin, Relations};
use crate::rational::{fmt_q, q, Q};

pub const TAIL_CAP: usize = 23;

/// Inline storage for δ-tails.
pub type Tail = ArrayVec<u8, TAIL_CAP>;

/// A basis element of 𝔥ₙ. Indices are 1-based.
///
/// `Y(i, j)` is Yᵢʲ (lower `i`, upper `j`); `Delta { i, j, k, tail }` is
/// δⁱ_{jk|tail}.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Gen {
    Delta { i: u8, j: u8, k: u8, tail: Tail },
    X(u8),
    Y(u8, u8),
}

impl Gen {
    pub fn x(k: u8) -> Gen {
        Gen::X(k)
    }

    pub fn y(i: u8, j: u8) -> Gen {
        Gen::Y(i, j)
    }

    /// Canonicalizes the symmetric pair and the tail.
    pub fn delta(i: u8, j: u8, k: u8, tail: impl AsRef<[u8]>) -> Gen {
        let mut tail = Tail::try_from(tail.as_ref()).expect("δ tail exceeds TAIL_CAP");
        tail.sort_unstable();
        Gen::Delta { i, j: j.min(k), k: j.max(k), tail }
    }

    /// Codimension-1 δₙ = δ¹_{11|1…1} with n−1 tail entries.
    pub fn d(n: usize) -> Gen {
        assert!(n >= 1);
        Gen::delta(1, 1, 1, vec![1; n - 1])
    }

    pub fn indices(&self) -> Vec<u8> {
        match self {
            Gen::X(k) => vec![*k],
            Gen::Y(i, j) => vec![*i, *j],
            Gen::Delta { i, j, k, tail } => {
                let mut v = vec![*i, *j, *k];
                v.extend(tail);
                v
            }
        }
    }

    pub fn check(&self, codim: usize) -> Result<()> {
        for idx in self.indices() {
            if idx == 0 || idx as usize > codim {
                return Err(Error::IndexOutOfRange { index: idx as usize, codim });
            }
        }
        Ok(())
    }

    pub fn tail_len(&self) -> usize {
        match self {
            Gen::Delta { tail, .. } => tail.len(),
            _ => 0,
        }
    }

    /// Basis symbol: a δ whose full lower index j ≤ k ≤ l₁ ≤ … is sorted,
    /// or any X, Y.
    pub fn is_basis(&self) -> bool {
        match self {
            Gen::Delta { k, tail, .. } => tail.first().map_or(true, |l| k <= l),
            _ => true,
        }
    }

    /// δ with one more tail index (ad X_l); panics on X, Y.
    pub fn with_tail(&self, l: u8) -> Gen {
        match self {
            Gen::Delta { i, j, k, tail } => {
                let mut t = tail.clone();
                t.try_push(l).expect("δ tail exceeds TAIL_CAP");
                Gen::delta(*i, *j, *k, t)
            }
            _ => panic!("not a δ"),
        }
    }

    pub fn is_delta(&self) -> bool {
        matches!(self, Gen::Delta { .. })
    }

    /// Rendering; codimension 1 uses the shorthands X, Y, d1, d2, ….
    pub fn render(&self, codim: usize) -> String {
        if codim == 1 {
            return match self {
                Gen::X(_) => "X".into(),
                Gen::Y(..) => "Y".into(),
                Gen::Delta { tail, .. } => format!("d{}", tail.len() + 1),
            };
        }
        match self {
            Gen::X(k) => format!("X[{k}]"),
            Gen::Y(i, j) => format!("Y[{i},{j}]"),
            Gen::Delta { i, j, k, tail } if tail.is_empty() => format!("d[{i};{j},{k}]"),
            Gen::Delta { i, j, k, tail } => {
                let t: Vec<String> = tail.iter().map(|l| l.to_string()).collect();
                format!("d[{i};{j},{k};{}]", t.join(","))
            }
        }
    }
}

/// Commutation rules of ℋₙ.
pub struct Hn {
    pub n: usize,
}

fn word(gs: &[Gen]) -> Vec<Gen> {
    gs.to_vec()
}

impl Hn {
    /// Linear part of the presentation: [a, b] for any pair, as generators
    /// (possibly outside the basis).
    pub fn raw_bracket(&self, a: &Gen, b: &Gen) -> Vec<(Gen, Q)> {
        use Gen::*;
        if a == b {
            return vec![];
        }
        match (a, b) {
            (X(_), X(_)) | (Delta { .. }, Delta { .. }) => vec![],
            (Y(i, j), Y(k, l)) => {
                let mut v = vec![];
                if k == j {
                    v.push((Y(*i, *l), q(1)));
                }
                if i == l {
                    v.push((Y(*k, *j), q(-1)));
                }
                v
            }
            (Y(i, j), X(k)) => {
                if k == j {
                    vec![(X(*i), q(1))]
                } else {
                    vec![]
                }
            }
            (X(l), d @ Delta { .. }) => vec![(d.with_tail(*l), q(1))],
            (Y(nu, lambda), Delta { i, j, k, tail }) => {
                let mut all = vec![*j, *k];
                all.extend(tail.iter());
                let mut v = vec![];
                for s in 0..all.len() {
                    if all[s] == *lambda {
                        let mut r = all.clone();
                        r[s] = *nu;
                        v.push((Gen::delta(*i, r[0], r[1], r[2..].to_vec()), q(1)));
                    }
                }
                if i == nu {
                    v.push((Gen::delta(*lambda, *j, *k, tail.clone()), q(-1)));
                }
                v
            }
            (X(_), Y(..)) | (Delta { .. }, X(_)) | (Delta { .. }, Y(..)) => {
                self.raw_bracket(b, a).into_iter().map(|(g, c)| (g, -c)).collect()
            }
        }
    }

    /// Q(i; j, k, l) = Σₛ δˢ_{jl}δⁱ_{sk} − δˢ_{jk}δⁱ_{sl}.
    fn bianchi_defect(&self, i: u8, j: u8, k: u8, l: u8) -> Vec<(Vec<Gen>, Q)> {
        let mut v = vec![];
        for s in 1..=self.n as u8 {
            v.push((word(&[Gen::delta(s, j, l, []), Gen::delta(i, s, k, [])]), q(1)));
            v.push((word(&[Gen::delta(s, j, k, []), Gen::delta(i, s, l, [])]), q(-1)));
        }
        v
    }
}

/// ad X_l on a polynomial in δ's (a derivation).
fn ad_x_on_deltas(p: &[(Vec<Gen>, Q)], l: u8) -> Vec<(Vec<Gen>, Q)> {
    let mut out = vec![];
    for (w, c) in p {
        for pos in 0..w.len() {
            let mut w2 = w.clone();
            w2[pos] = w[pos].with_tail(l);
            out.push((w2, c.clone()));
        }
    }
    out
}

impl Relations for Hn {
    type Gen = Gen;

    fn commutator(&self, a: &Gen, b: &Gen) -> Vec<(Vec<Gen>, Q)> {
        self.raw_bracket(a, b).into_iter().map(|(g, c)| (vec![g], c)).collect()
    }

    /// δⁱ_{jk|l₁,rest} = δⁱ_{jl₁|k,rest} + ad X_rest (Q(i; j, k, l₁)) when k > l₁.
    fn expand(&self, g: &Gen) -> Option<Vec<(Vec<Gen>, Q)>> {
        if g.is_basis() {
            return None;
        }
        let Gen::Delta { i, j, k, tail } = g else { return None };
        let l1 = tail[0];
        let mut new_tail = vec![*k];
        new_tail.extend(&tail[1..]);
        let mut out = vec![(vec![Gen::delta(*i, *j, l1, new_tail)], q(1))];
        let mut corr = self.bianchi_defect(*i, *j, *k, l1);
        for &m in &tail[1..] {
            corr = ad_x_on_deltas(&corr, m);
        }
        out.extend(corr);
        Some(out)
    }
}

/// Shared enveloping-algebra engine for codimension `n`.
pub fn env(n: usize) -> &'static Enveloping<Hn> {
    static REG: OnceLock<RwLock<HashMap<usize, &'static Enveloping<Hn>>>> = OnceLock::new();
    let reg = REG.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(e) = reg.read().unwrap().get(&n) {
        return e;
    }
    let mut w = reg.write().unwrap();
    *w.entry(n).or_insert_with(|| Box::leak(Box::new(Enveloping::new(Hn { n }))))
}

/// A PBW monomial: non-decreasing list of generators.
pub type Monomial = Vec<Gen>;

pub fn render_monomial(m: &[Gen], codim: usize) -> String {
    if m.is_empty() {
        return "1".into();
    }
    let mut parts = vec![];
    let mut i = 0;
    while i < m.len() {
        let mut j = i;
        while j < m.len() && m[j] == m[i] {
            j += 1;
        }
        let g = m[i].render(codim);
        parts.push(if j - i == 1 { g } else { format!("{g}^{}", j - i) });
        i = j;
    }
    parts.join("*")
}

/// Renders `Σ c · body` with graded-lexicographic term order.
pub fn render_sum<K: Ord>(terms: &BTreeMap<K, Q>, weight: impl Fn(&K) -> usize, body: impl Fn(&K) -> Option<String>) -> String {
    let mut items: Vec<(&K, &Q)> = terms.iter().collect();
    items.sort_by(|a, b| weight(a.0).cmp(&weight(b.0)).then(a.0.cmp(b.0)));
    if items.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (n, (k, c)) in items.into_iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        let text = match body(k) {
            None => fmt_q(&a),
            Some(b) if a.is_one() => b,
            Some(b) => format!("{} {b}", fmt_q(&a)),
        };
        match (n, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&text);
    }
    out
}

/// Element of ℋₙ in PBW normal form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HopfElement {
    pub codim: usize,
    pub terms: Lin<Gen>,
}

impl HopfElement {
    pub fn zero(codim: usize) -> Self {
        HopfElement { codim, terms: Lin::new() }
    }

    pub fn scalar(codim: usize, c: Q) -> Self {
        let mut terms = Lin::new();
        lin_add(&mut terms, vec![], c);
        HopfElement { codim, terms }
    }

    pub fn one(codim: usize) -> Self {
        Self::scalar(codim, q(1))
    }

    /// A generator; symbols outside the basis are rewritten.
    pub fn gen(codim: usize, g: Gen) -> Self {
        if g.is_basis() {
            HopfElement { codim, terms: Lin::from([(vec![g], q(1))]) }
        } else {
            HopfElement { codim, terms: env(codim).normal_form_word(&[g]) }
        }
    }

    /// Checked generator constructor.
    pub fn try_gen(codim: usize, g: Gen) -> Result<Self> {
        g.check(codim)?;
        Ok(Self::gen(codim, g))
    }

    /// From an already sorted monomial.
    pub fn mono(codim: usize, m: Monomial, c: Q) -> Self {
        debug_assert!(m.windows(2).all(|w| w[0] <= w[1]));
        let mut terms = Lin::new();
        lin_add(&mut terms, m, c);
        HopfElement { codim, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|m| m.len()).max().unwrap_or(0)
    }

    /// Homogeneous component of top degree.
    pub fn top_part(&self) -> HopfElement {
        let d = self.degree();
        HopfElement {
            codim: self.codim,
            terms: self.terms.iter().filter(|(m, _)| m.len() == d).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn counit(&self) -> Q {
        self.terms.get(&vec![]).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, o: &HopfElement) -> HopfElement {
        let mut t = self.terms.clone();
        lin_axpy(&mut t, &q(1), &o.terms);
        HopfElement { codim: self.codim, terms: t }
    }

    pub fn sub(&self, o: &HopfElement) -> HopfElement {
        let mut t = self.terms.clone();
        lin_axpy(&mut t, &q(-1), &o.terms);
        HopfElement { codim: self.codim, terms: t }
    }

    pub fn scale(&self, c: &Q) -> HopfElement {
        HopfElement { codim: self.codim, terms: lin_scale(&self.terms, c) }
    }

    pub fn neg(&self) -> HopfElement {
        self.scale(&q(-1))
    }

    /// Product in ℋₙ; panics on mismatched codimension (see [`multiply`]).
    pub fn mul(&self, o: &HopfElement) -> HopfElement {
        assert_eq!(self.codim, o.codim, "codimension mismatch");
        HopfElement { codim: self.codim, terms: env(self.codim).mul(&self.terms, &o.terms) }
    }

    pub fn pow(&self, k: usize) -> HopfElement {
        (0..k).fold(HopfElement::one(self.codim), |acc, _| acc.mul(self))
    }

    pub fn commutator(&self, o: &HopfElement) -> HopfElement {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn check(&self) -> Result<()> {
        for m in self.terms.keys() {
            for g in m {
                g.check(self.codim)?;
            }
        }
        Ok(())
    }

    pub fn render(&self) -> String {
        render_sum(&self.terms, |m| m.len(), |m| if m.is_empty() { None } else { Some(render_monomial(m, self.codim)) })
    }
}

impl fmt::Display for HopfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

pub fn bracket(codim: usize, g1: &Gen, g2: &Gen) -> Result<HopfElement> {
    g1.check(codim)?;
    g2.check(codim)?;
    let words: Vec<(Vec<Gen>, Q)> = (Hn { n: codim }).raw_bracket(g1, g2).into_iter().map(|(g, c)| (vec![g], c)).collect();
    Ok(HopfElement { codim, terms: env(codim).normal_form(&words) })
}

/// Normal form of a formal noncommutative polynomial given as weighted words.
pub fn normal_form(codim: usize, words: &[(Vec<Gen>, Q)]) -> Result<HopfElement> {
    for (w, _) in words {
        for g in w {
            g.check(codim)?;
        }
    }
    Ok(HopfElement { codim, terms: env(codim).normal_form(words) })
}

pub fn multiply(a: &HopfElement, b: &HopfElement) -> Result<HopfElement> {
    if a.codim != b.codim {
        return Err(Error::CodimMismatch(a.codim, b.codim));
    }
    Ok(a.mul(b))
}

/// [[g1,g2],g3] + [[g2,g3],g1] + [[g3,g1],g2] = 0, with brackets taken as
/// commutators of normal forms.
pub fn jacobi_check(codim: usize, g1: &Gen, g2: &Gen, g3: &Gen) -> Result<bool> {
    let e = |g: &Gen| HopfElement::try_gen(codim, g.clone());
    let (a, b, c) = (e(g1)?, e(g2)?, e(g3)?);
    let total = a.commutator(&b).commutator(&c).add(&b.commutator(&c).commutator(&a)).add(&c.commutator(&a).commutator(&b));
    Ok(total.is_zero())
}

/// Basis generators with indices ≤ n and δ-tails of length ≤ `max_tail`.
pub fn generators(n: usize, max_tail: usize) -> Vec<Gen> {
    let n8 = n as u8;
    let mut out = vec![];
    for k in 1..=n8 {
        out.push(Gen::X(k));
    }
    for i in 1..=n8 {
        for j in 1..=n8 {
            out.push(Gen::Y(i, j));
        }
    }
    for r in 0..=max_tail {
        for tail in sorted_tuples(n8, r) {
            for i in 1..=n8 {
                for j in 1..=n8 {
                    for k in j..=n8 {
                        let g = Gen::Delta { i, j, k, tail: Tail::try_from(&tail[..]).unwrap() };
                        if g.is_basis() {
                            out.push(g);
                        }
                    }
                }
            }
        }
    }
    out.sort();
    out
}

fn sorted_tuples(n: u8, r: usize) -> Vec<Vec<u8>> {
    if r == 0 {
        return vec![vec![]];
    }
    let mut out = vec![];
    for t in sorted_tuples(n, r - 1) {
        let lo = t.last().copied().unwrap_or(1);
        for l in lo..=n {
            let mut v = t.clone();
            v.push(l);
            out.push(v);
        }
    }
    out
}

/// PBW basis monomials of degree ≤ `max_deg` over the given generators.
pub fn basis_monomials(gens: &[Gen], max_deg: usize) -> Vec<Monomial> {
    let mut sorted = gens.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut out = vec![vec![]];
    let mut layer: Vec<(Monomial, usize)> = vec![(vec![], 0)];
    for _ in 0..max_deg {
        let mut next = vec![];
        for (m, start) in &layer {
            for (idx, g) in sorted.iter().enumerate().skip(*start) {
                let mut v = m.clone();
                v.push(g.clone());
                next.push((v, idx));
            }
        }
        out.extend(next.iter().map(|(m, _)| m.clone()));
        layer = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(codim: usize, g: Gen) -> HopfElement {
        HopfElement::gen(codim, g)
    }

    #[test]
    fn codim_one_brackets() {
        let (x, y) = (Gen::X(1), Gen::Y(1, 1));
        assert_eq!(bracket(1, &y, &x).unwrap(), h(1, x.clone()));
        assert!(bracket(1, &x, &x).unwrap().is_zero());
        assert_eq!(bracket(1, &x, &Gen::d(1)).unwrap(), h(1, Gen::d(2)));
        assert_eq!(bracket(1, &y, &Gen::d(3)).unwrap(), h(1, Gen::d(3)).scale(&q(3)));
        assert_eq!(bracket(1, &x, &y).unwrap(), h(1, x.clone()).neg());
        assert!(bracket(1, &Gen::X(3), &y).is_err());
    }

    #[test]
    fn bianchi_rewrite() {
        // δ¹_{12|1} = δ¹_{11|2} + Σₛ δˢ_{11}δ¹_{s2} − δˢ_{12}δ¹_{s1}
        let lhs = HopfElement::gen(2, Gen::delta(1, 1, 2, vec![1]));
        let d = |i, j, k| HopfElement::gen(2, Gen::delta(i, j, k, vec![]));
        let mut rhs = HopfElement::gen(2, Gen::delta(1, 1, 1, vec![2]));
        for s in 1..=2 {
            rhs = rhs.add(&d(s, 1, 1).mul(&d(1, s, 2))).sub(&d(s, 1, 2).mul(&d(1, s, 1)));
        }
        assert_eq!(lhs, rhs);
        assert!(Gen::delta(1, 1, 1, vec![2]).is_basis());
        assert!(!Gen::delta(1, 2, 2, vec![1]).is_basis());
    }

    #[test]
    fn antisymmetry_codim_two() {
        let gens = generators(2, 1);
        for a in &gens {
            for b in &gens {
                assert_eq!(bracket(2, a, b).unwrap(), bracket(2, b, a).unwrap().neg());
            }
        }
    }

    #[test]
    fn normal_forms() {
        let (x, y, d1, d2) = (Gen::X(1), Gen::Y(1, 1), Gen::d(1), Gen::d(2));
        let yx = normal_form(1, &[(vec![y.clone(), x.clone()], q(1))]).unwrap();
        assert_eq!(yx, HopfElement::mono(1, vec![x.clone(), y.clone()], q(1)).add(&h(1, x.clone())));
        let xy = normal_form(1, &[(vec![x.clone(), y.clone()], q(1))]).unwrap();
        assert_eq!(xy, HopfElement::mono(1, vec![x.clone(), y.clone()], q(1)));
        let xd = normal_form(1, &[(vec![x.clone(), d1.clone()], q(1))]).unwrap();
        assert_eq!(xd, HopfElement::mono(1, vec![d1, x], q(1)).add(&h(1, d2)));
    }

    #[test]
    fn rendering() {
        let e = HopfElement::gen(1, Gen::d(2)).sub(&HopfElement::gen(1, Gen::d(1)).pow(2).scale(&crate::rational::qf(1, 2)));
        assert_eq!(e.render(), "d2 - 1/2 d1^2");
        let g = HopfElement::gen(2, Gen::delta(2, 1, 1, vec![2, 1]));
        assert_eq!(g.render(), "d[2;1,1;1,2]");
        assert_eq!(HopfElement::zero(1).render(), "0");
        assert_eq!(HopfElement::scalar(1, q(-3)).render(), "-3");
    }

    #[test]
    fn generator_counts() {
        assert_eq!(generators(1, 2).len(), 2 + 3);
        // 2 X, 4 Y, deltas: i times sorted index triples/pairs: 2·3 + 2·4
        assert_eq!(generators(2, 1).len(), 2 + 4 + 6 + 8);
        assert_eq!(basis_monomials(&generators(1, 0), 2).len(), 1 + 3 + 6);
    }
}
