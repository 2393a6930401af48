//! Coalgebra and Hopf structure on ℋₙ, tensor cochains, characters and
//! modular pairs.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::{One, Zero};
use rand::Rng;

use crate::algebra::{basis_monomials, env, generators, render_monomial, render_sum, Gen, HopfElement, Monomial};
use crate::error::{Error, Result};
use crate::pbw::{lin_add, Lin};
use crate::rational::{q, Q};

/// Element of ℋ^{⊗n}. Degree 0 holds a bare scalar under the empty key.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TensorCochain {
    pub codim: usize,
    pub degree: usize,
    pub terms: BTreeMap<Vec<Monomial>, Q>,
}

impl TensorCochain {
    pub fn zero(codim: usize, degree: usize) -> Self {
        TensorCochain { codim, degree, terms: BTreeMap::new() }
    }

    pub fn scalar(codim: usize, c: Q) -> Self {
        let mut t = Self::zero(codim, 0);
        t.add_term(vec![], c);
        t
    }

    /// 1⊗…⊗1 in degree n.
    pub fn unit(codim: usize, degree: usize) -> Self {
        let mut t = Self::zero(codim, degree);
        t.add_term(vec![vec![]; degree], q(1));
        t
    }

    pub fn from_element(h: &HopfElement) -> Self {
        TensorCochain {
            codim: h.codim,
            degree: 1,
            terms: h.terms.iter().map(|(m, c)| (vec![m.clone()], c.clone())).collect(),
        }
    }

    /// h¹⊗…⊗hⁿ.
    pub fn tensor(codim: usize, hs: &[HopfElement]) -> Self {
        let mut acc = Self::unit(codim, 0);
        for h in hs {
            acc = acc.concat(&Self::from_element(h));
        }
        acc
    }

    pub fn add_term(&mut self, key: Vec<Monomial>, c: Q) {
        debug_assert_eq!(key.len(), self.degree);
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn axpy(&mut self, c: &Q, o: &TensorCochain) {
        assert_eq!(self.degree, o.degree, "degree mismatch");
        if c.is_zero() {
            return;
        }
        for (k, v) in &o.terms {
            self.add_term(k.clone(), c * v);
        }
    }

    pub fn add(&self, o: &TensorCochain) -> TensorCochain {
        let mut r = self.clone();
        r.axpy(&q(1), o);
        r
    }

    pub fn sub(&self, o: &TensorCochain) -> TensorCochain {
        let mut r = self.clone();
        r.axpy(&q(-1), o);
        r
    }

    pub fn scale(&self, c: &Q) -> TensorCochain {
        let mut r = Self::zero(self.codim, self.degree);
        r.axpy(c, self);
        r
    }

    pub fn neg(&self) -> TensorCochain {
        self.scale(&q(-1))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Scalar value of a degree-0 cochain.
    pub fn as_scalar(&self) -> Q {
        assert_eq!(self.degree, 0);
        self.terms.get(&vec![]).cloned().unwrap_or_else(Q::zero)
    }

    /// Degree-1 cochain as an element of ℋ.
    pub fn as_element(&self) -> HopfElement {
        assert_eq!(self.degree, 1);
        let mut terms = Lin::new();
        for (k, c) in &self.terms {
            lin_add(&mut terms, k[0].clone(), c.clone());
        }
        HopfElement { codim: self.codim, terms }
    }

    /// Outer tensor product, degrees add.
    pub fn concat(&self, o: &TensorCochain) -> TensorCochain {
        let mut r = Self::zero(self.codim, self.degree + o.degree);
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                let mut k = a.clone();
                k.extend(b.iter().cloned());
                r.add_term(k, ca * cb);
            }
        }
        r
    }

    /// Product in the algebra ℋ^{⊗n}.
    pub fn mul(&self, o: &TensorCochain) -> TensorCochain {
        assert_eq!(self.degree, o.degree, "degree mismatch");
        let e = env(self.codim);
        let mut r = Self::zero(self.codim, self.degree);
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                let mut partial: Vec<(Vec<Monomial>, Q)> = vec![(vec![], ca * cb)];
                for (x, y) in a.iter().zip(b) {
                    let p = e.mul_words(x, y);
                    let mut next = Vec::with_capacity(partial.len() * p.len());
                    for (k, c) in &partial {
                        for (w, cw) in &p {
                            let mut k2 = k.clone();
                            k2.push(w.clone());
                            next.push((k2, c * cw));
                        }
                    }
                    partial = next;
                }
                for (k, c) in partial {
                    r.add_term(k, c);
                }
            }
        }
        r
    }

    /// Replaces slot `j` by the image of a linear map into `out_deg` slots.
    pub fn map_slot(&self, j: usize, out_deg: usize, f: impl Fn(&Monomial) -> TensorCochain) -> TensorCochain {
        assert!(j < self.degree);
        let mut cache: HashMap<&Monomial, TensorCochain> = HashMap::new();
        let mut r = Self::zero(self.codim, self.degree - 1 + out_deg);
        for (k, c) in &self.terms {
            let img = cache.entry(&k[j]).or_insert_with(|| f(&k[j]));
            for (w, cw) in &img.terms {
                let mut key = k[..j].to_vec();
                key.extend(w.iter().cloned());
                key.extend(k[j + 1..].iter().cloned());
                r.add_term(key, c * cw);
            }
        }
        r
    }

    /// Applies a scalar functional to every slot.
    pub fn contract(&self, f: impl Fn(&Monomial) -> Q) -> Q {
        self.terms.iter().fold(Q::zero(), |acc, (k, c)| acc + c * k.iter().fold(Q::one(), |p, m| p * f(m)))
    }

    pub fn max_slot_degree(&self) -> usize {
        self.terms.keys().flat_map(|k| k.iter().map(|m| m.len())).max().unwrap_or(0)
    }

    pub fn render(&self) -> String {
        let codim = self.codim;
        render_sum(
            &self.terms,
            |k| k.iter().map(|m| m.len()).sum(),
            |k| {
                if k.is_empty() {
                    None
                } else if self.degree == 1 && k[0].is_empty() {
                    None
                } else {
                    Some(k.iter().map(|m| render_monomial(m, codim)).collect::<Vec<_>>().join(" ox "))
                }
            },
        )
    }
}

impl fmt::Display for TensorCochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

type GenMemo = RwLock<HashMap<(usize, Gen), TensorCochain>>;

fn cop_memo() -> &'static GenMemo {
    static M: OnceLock<GenMemo> = OnceLock::new();
    M.get_or_init(|| RwLock::new(HashMap::new()))
}

fn antipode_memo() -> &'static RwLock<HashMap<(usize, Gen), HopfElement>> {
    static M: OnceLock<RwLock<HashMap<(usize, Gen), HopfElement>>> = OnceLock::new();
    M.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Σ_{i,j} δⁱ_{jk} ⊗ Yᵢʲ.
fn delta_y_sum(n: usize, k: u8) -> Vec<(Gen, Gen)> {
    let mut v = vec![];
    for i in 1..=n as u8 {
        for j in 1..=n as u8 {
            v.push((Gen::delta(i, j, k, []), Gen::Y(i, j)));
        }
    }
    v
}

fn primitive(n: usize, g: &Gen) -> TensorCochain {
    let mut t = TensorCochain::zero(n, 2);
    t.add_term(vec![vec![g.clone()], vec![]], q(1));
    t.add_term(vec![vec![], vec![g.clone()]], q(1));
    t
}

/// Δ on a generator. Higher δ's use Δδ_{…|t,l} = [ΔX_l, Δδ_{…|t}].
pub fn coproduct_gen(n: usize, g: &Gen) -> TensorCochain {
    if let Some(hit) = cop_memo().read().unwrap().get(&(n, g.clone())) {
        return hit.clone();
    }
    let out = match g {
        Gen::Y(..) => primitive(n, g),
        Gen::Delta { tail, .. } if tail.is_empty() => primitive(n, g),
        Gen::X(k) => {
            let mut t = primitive(n, g);
            for (d, y) in delta_y_sum(n, *k) {
                t.add_term(vec![vec![d], vec![y]], q(1));
            }
            t
        }
        Gen::Delta { i, j, k, tail } => {
            let mut t = tail.clone();
            let l = t.pop().unwrap();
            let dx = coproduct_gen(n, &Gen::X(l));
            let dd = coproduct_gen(n, &Gen::delta(*i, *j, *k, t));
            dx.mul(&dd).sub(&dd.mul(&dx))
        }
    };
    cop_memo().write().unwrap().insert((n, g.clone()), out.clone());
    out
}

type MonoMemo<T> = RwLock<HashMap<(usize, Monomial), Arc<T>>>;

fn cop_mono_memo() -> &'static MonoMemo<TensorCochain> {
    static M: OnceLock<MonoMemo<TensorCochain>> = OnceLock::new();
    M.get_or_init(|| RwLock::new(HashMap::new()))
}

fn antipode_mono_memo() -> &'static MonoMemo<HopfElement> {
    static M: OnceLock<MonoMemo<HopfElement>> = OnceLock::new();
    M.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Δ on a PBW monomial, memoized along prefixes.
fn coproduct_mono(n: usize, m: &Monomial) -> Arc<TensorCochain> {
    let key = (n, m.clone());
    if let Some(hit) = cop_mono_memo().read().unwrap().get(&key) {
        return hit.clone();
    }
    let out = match m.split_last() {
        None => TensorCochain::unit(n, 2),
        Some((g, rest)) if rest.is_empty() => coproduct_gen(n, g),
        Some((g, rest)) => coproduct_mono(n, &rest.to_vec()).mul(&coproduct_gen(n, g)),
    };
    let out = Arc::new(out);
    cop_mono_memo().write().unwrap().insert(key, out.clone());
    out
}

/// S on a PBW monomial, memoized along prefixes.
fn antipode_mono(n: usize, m: &Monomial) -> Arc<HopfElement> {
    let key = (n, m.clone());
    if let Some(hit) = antipode_mono_memo().read().unwrap().get(&key) {
        return hit.clone();
    }
    let out = match m.split_last() {
        None => HopfElement::one(n),
        Some((g, rest)) => antipode_gen(n, g).mul(&antipode_mono(n, &rest.to_vec())),
    };
    let out = Arc::new(out);
    antipode_mono_memo().write().unwrap().insert(key, out.clone());
    out
}

pub fn coproduct(h: &HopfElement) -> TensorCochain {
    let mut r = TensorCochain::zero(h.codim, 2);
    for (m, c) in &h.terms {
        r.axpy(c, &coproduct_mono(h.codim, m));
    }
    r
}

pub fn counit(h: &HopfElement) -> Q {
    h.counit()
}

/// Counit applied slotwise.
pub fn counit_tensor(t: &TensorCochain) -> Q {
    t.contract(|m| if m.is_empty() { Q::one() } else { Q::zero() })
}

/// Δ^m, producing m+1 slots; m = 0 is the identity.
pub fn iterated_coproduct(h: &HopfElement, m: usize) -> TensorCochain {
    let mut t = TensorCochain::from_element(h);
    for _ in 0..m {
        let last = t.degree - 1;
        let n = h.codim;
        t = t.map_slot(last, 2, |mono| (*coproduct_mono(n, mono)).clone());
    }
    t
}

/// S on a generator. Higher δ's use S(δ_{…|t,l}) = [S(δ_{…|t}), S(X_l)].
pub fn antipode_gen(n: usize, g: &Gen) -> HopfElement {
    if let Some(hit) = antipode_memo().read().unwrap().get(&(n, g.clone())) {
        return hit.clone();
    }
    let out = match g {
        Gen::Y(..) => HopfElement::gen(n, g.clone()).neg(),
        Gen::Delta { tail, .. } if tail.is_empty() => HopfElement::gen(n, g.clone()).neg(),
        Gen::X(k) => {
            let mut s = HopfElement::gen(n, g.clone()).neg();
            for (d, y) in delta_y_sum(n, *k) {
                s = s.add(&HopfElement::mono(n, vec![d, y], q(1)));
            }
            s
        }
        Gen::Delta { i, j, k, tail } => {
            let mut t = tail.clone();
            let l = t.pop().unwrap();
            let sd = antipode_gen(n, &Gen::delta(*i, *j, *k, t));
            let sx = antipode_gen(n, &Gen::X(l));
            sd.commutator(&sx)
        }
    };
    antipode_memo().write().unwrap().insert((n, g.clone()), out.clone());
    out
}

pub fn antipode(h: &HopfElement) -> HopfElement {
    let n = h.codim;
    let mut r = HopfElement::zero(n);
    for (m, c) in &h.terms {
        r = r.add(&antipode_mono(n, m).scale(c));
    }
    r
}

/// A character: values on generators, zero where unspecified, extended
/// multiplicatively on PBW monomials.
#[derive(Clone, Debug, PartialEq)]
pub struct Character {
    pub values: BTreeMap<Gen, Q>,
}

impl Character {
    pub fn new(values: BTreeMap<Gen, Q>) -> Self {
        Character { values }
    }

    /// The counit ε.
    pub fn counit() -> Self {
        Character { values: BTreeMap::new() }
    }

    /// The modular character δ(Yᵢʲ) = δᵢʲ of ℋₙ.
    pub fn modular(n: usize) -> Self {
        Character { values: (1..=n as u8).map(|i| (Gen::Y(i, i), q(1))).collect() }
    }

    pub fn on_gen(&self, g: &Gen) -> Q {
        self.values.get(g).cloned().unwrap_or_else(Q::zero)
    }

    pub fn on_mono(&self, m: &Monomial) -> Q {
        m.iter().fold(Q::one(), |acc, g| acc * self.on_gen(g))
    }

    pub fn eval(&self, h: &HopfElement) -> Q {
        h.terms.iter().fold(Q::zero(), |acc, (m, c)| acc + c * self.on_mono(m))
    }

    /// A character kills commutators: χ([g1, g2]) = 0 for all sampled pairs.
    pub fn validate(&self, n: usize, max_tail: usize) -> Result<()> {
        let gens = generators(n, max_tail);
        for a in &gens {
            for b in &gens {
                let br = crate::algebra::bracket(n, a, b)?;
                if !self.eval(&br).is_zero() {
                    return Err(Error::Other(format!("character does not vanish on [{a:?}, {b:?}]")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupLike {
    pub sigma: HopfElement,
    pub inverse: HopfElement,
}

impl GroupLike {
    pub fn unit(n: usize) -> Self {
        GroupLike { sigma: HopfElement::one(n), inverse: HopfElement::one(n) }
    }

    /// Checks Δσ = σ⊗σ, ε(σ) = 1 and σ·σ⁻¹ = σ⁻¹·σ = 1.
    pub fn with_inverse(sigma: HopfElement, inverse: HopfElement) -> Result<Self> {
        let n = sigma.codim;
        if coproduct(&sigma) != TensorCochain::tensor(n, &[sigma.clone(), sigma.clone()]) {
            return Err(Error::NotGroupLike("Δσ ≠ σ⊗σ".into()));
        }
        if !sigma.counit().is_one() {
            return Err(Error::NotGroupLike("ε(σ) ≠ 1".into()));
        }
        let one = HopfElement::one(n);
        if sigma.mul(&inverse) != one || inverse.mul(&sigma) != one {
            return Err(Error::NotInvertible);
        }
        Ok(GroupLike { sigma, inverse })
    }

    pub fn new(sigma: HopfElement) -> Result<Self> {
        if sigma == HopfElement::one(sigma.codim) {
            Ok(Self::unit(sigma.codim))
        } else {
            Err(Error::NotInvertible)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModularPair {
    pub codim: usize,
    pub delta: Character,
    pub sigma: GroupLike,
}

impl ModularPair {
    pub fn new(delta: Character, sigma: GroupLike) -> Result<Self> {
        if !delta.eval(&sigma.sigma).is_one() {
            return Err(Error::Other("δ(σ) ≠ 1".into()));
        }
        Ok(ModularPair { codim: sigma.sigma.codim, delta, sigma })
    }

    /// (δ, 1), the pair in involution for ℋₙ.
    pub fn canonical(n: usize) -> Self {
        ModularPair { codim: n, delta: Character::modular(n), sigma: GroupLike::unit(n) }
    }

    /// (ε, 1): untwisted, not in involution.
    pub fn untwisted(n: usize) -> Self {
        ModularPair { codim: n, delta: Character::counit(), sigma: GroupLike::unit(n) }
    }
}

/// S̃(h) = Σ δ(h₍₁₎) S(h₍₂₎).
pub fn twisted_antipode(pair: &ModularPair, h: &HopfElement) -> HopfElement {
    let n = h.codim;
    let cop = coproduct(h);
    let mut second: Lin<Gen> = Lin::new();
    for (k, c) in &cop.terms {
        let d = pair.delta.on_mono(&k[0]);
        if !d.is_zero() {
            lin_add(&mut second, k[1].clone(), c * d);
        }
    }
    antipode(&HopfElement { codim: n, terms: second })
}

/// S̃ on a monomial through the anti-homomorphism property, memo-free path
/// used for cross-checks.
pub fn twisted_antipode_multiplicative(pair: &ModularPair, m: &Monomial, n: usize) -> HopfElement {
    m.iter().rev().fold(HopfElement::one(n), |acc, g| acc.mul(&twisted_antipode(pair, &HopfElement::gen(n, g.clone()))))
}

/// S̃²(h) = σ⁻¹hσ on all PBW monomials of degree ≤ d (tails ≤ d).
pub fn check_involution(pair: &ModularPair, d: usize) -> Result<bool> {
    Ok(involution_witness(pair, d)?.is_none())
}

/// First monomial violating S̃² = Ad σ, if any.
pub fn involution_witness(pair: &ModularPair, d: usize) -> Result<Option<Monomial>> {
    if d == 0 {
        return Err(Error::Other("degree cap must be ≥ 1".into()));
    }
    let n = pair.codim;
    let gens = generators(n, d);
    for m in basis_monomials(&gens, d) {
        let h = HopfElement::mono(n, m.clone(), q(1));
        let lhs = twisted_antipode(pair, &twisted_antipode(pair, &h));
        let rhs = pair.sigma.inverse.mul(&h).mul(&pair.sigma.sigma);
        if lhs != rhs {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// m∘(S⊗id)∘Δ and m∘(id⊗S)∘Δ.
pub fn antipode_convolutions(h: &HopfElement) -> (HopfElement, HopfElement) {
    let n = h.codim;
    let cop = coproduct(h);
    let mut left = HopfElement::zero(n);
    let mut right = HopfElement::zero(n);
    for (k, c) in &cop.terms {
        let a = HopfElement::mono(n, k[0].clone(), q(1));
        let b = HopfElement::mono(n, k[1].clone(), q(1));
        left = left.add(&antipode(&a).mul(&b).scale(c));
        right = right.add(&a.mul(&antipode(&b)).scale(c));
    }
    (left, right)
}

/// Random element: up to `terms` PBW monomials of degree ≤ `max_deg` with
/// coefficients in −2..=2.
pub fn random_element<R: Rng>(rng: &mut R, n: usize, max_deg: usize, max_tail: usize, terms: usize) -> HopfElement {
    let gens = generators(n, max_tail);
    let mut h = HopfElement::zero(n);
    for _ in 0..terms {
        let deg = rng.gen_range(0..=max_deg);
        let mut m: Monomial = (0..deg).map(|_| gens[rng.gen_range(0..gens.len())].clone()).collect();
        m.sort();
        let c = q(rng.gen_range(-2..=2));
        h = h.add(&HopfElement::mono(n, m, c));
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    fn g(x: Gen) -> HopfElement {
        HopfElement::gen(1, x)
    }

    #[test]
    fn codim_one_coproducts() {
        let (x, y, d1, d2) = (Gen::X(1), Gen::Y(1, 1), Gen::d(1), Gen::d(2));
        let t = |a: &HopfElement, b: &HopfElement| TensorCochain::tensor(1, &[a.clone(), b.clone()]);
        let one = HopfElement::one(1);
        let cx = coproduct(&g(x.clone()));
        assert_eq!(cx, t(&g(x.clone()), &one).add(&t(&one, &g(x.clone()))).add(&t(&g(d1.clone()), &g(y.clone()))));
        assert_eq!(coproduct(&g(y.clone())), t(&g(y.clone()), &one).add(&t(&one, &g(y.clone()))));
        // Hand expansion of [ΔX, Δδ₁]: only X⊗1 and δ₁⊗Y fail to commute with δ₁.
        let cd2 = coproduct(&g(d2.clone()));
        assert_eq!(cd2, t(&g(d2.clone()), &one).add(&t(&one, &g(d2))).add(&t(&g(d1.clone()), &g(d1))));
    }

    #[test]
    fn counits() {
        let (x, y) = (Gen::X(1), Gen::Y(1, 1));
        assert_eq!(counit(&HopfElement::one(1)), q(1));
        let e = HopfElement::mono(1, vec![x, y], q(1)).add(&HopfElement::scalar(1, q(3)));
        assert_eq!(counit(&e), q(3));
        assert_eq!(counit(&g(Gen::d(1))), q(0));
    }

    #[test]
    fn antipodes() {
        let (x, y, d1) = (Gen::X(1), Gen::Y(1, 1), Gen::d(1));
        assert_eq!(antipode(&g(x.clone())), g(x.clone()).neg().add(&HopfElement::mono(1, vec![d1.clone(), y.clone()], q(1))));
        assert_eq!(antipode(&HopfElement::one(1)), HopfElement::one(1));
        let xy = HopfElement::mono(1, vec![x.clone(), y.clone()], q(1));
        let (l, r) = antipode_convolutions(&xy);
        assert!(l.is_zero() && r.is_zero());
        assert_eq!(antipode(&xy), antipode(&g(y)).mul(&antipode(&g(x))));
    }

    #[test]
    fn twisted_antipodes_codim_one() {
        let pair = ModularPair::canonical(1);
        let (x, y, d1) = (Gen::X(1), Gen::Y(1, 1), Gen::d(1));
        assert_eq!(twisted_antipode(&pair, &g(y.clone())), g(y.clone()).neg().add(&HopfElement::one(1)));
        let sx = twisted_antipode(&pair, &g(x.clone()));
        assert_eq!(sx, g(x.clone()).neg().add(&HopfElement::mono(1, vec![d1.clone(), y], q(1))));
        assert_eq!(twisted_antipode(&pair, &sx), g(x));
        assert_eq!(twisted_antipode(&pair, &g(d1.clone())), g(d1).neg());
    }

    #[test]
    fn iterated() {
        let y = g(Gen::Y(1, 1));
        assert_eq!(iterated_coproduct(&y, 0), TensorCochain::from_element(&y));
        let one = HopfElement::one(1);
        let expect = TensorCochain::tensor(1, &[y.clone(), one.clone(), one.clone()])
            .add(&TensorCochain::tensor(1, &[one.clone(), y.clone(), one.clone()]))
            .add(&TensorCochain::tensor(1, &[one.clone(), one.clone(), y.clone()]));
        assert_eq!(iterated_coproduct(&y, 2), expect);
        let x = g(Gen::X(1));
        let c = coproduct(&x);
        let left = c.map_slot(0, 2, |m| coproduct(&HopfElement::mono(1, m.clone(), q(1))));
        let right = c.map_slot(1, 2, |m| coproduct(&HopfElement::mono(1, m.clone(), q(1))));
        assert_eq!(left, right);
        assert_eq!(iterated_coproduct(&x, 2), left);
        // X⊗1⊗1, 1⊗X⊗1, 1⊗1⊗X, δ₁⊗Y⊗1, δ₁⊗1⊗Y, 1⊗δ₁⊗Y: the X-part has six terms
        assert_eq!(left.terms.len(), 6);
    }

    #[test]
    fn involution() {
        assert!(check_involution(&ModularPair::canonical(1), 3).unwrap());
        assert!(!check_involution(&ModularPair::untwisted(1), 2).unwrap());
        let x = g(Gen::X(1));
        let s2 = antipode(&antipode(&x));
        let expect = x.add(&g(Gen::d(1)));
        assert_eq!(s2, expect);
    }

    #[test]
    fn group_likes() {
        assert!(GroupLike::new(HopfElement::one(1)).is_ok());
        assert!(GroupLike::new(g(Gen::X(1))).is_err());
        assert!(GroupLike::with_inverse(HopfElement::scalar(1, qf(1, 2)), HopfElement::scalar(1, q(2))).is_err());
        assert!(ModularPair::new(Character::modular(1), GroupLike::unit(1)).is_ok());
        Character::modular(2).validate(2, 1).unwrap();
        let bad = Character::new(BTreeMap::from([(Gen::X(1), q(1))]));
        assert!(bad.validate(1, 1).is_err());
    }

    #[test]
    fn render_tensor() {
        let x = g(Gen::X(1));
        let y = g(Gen::Y(1, 1));
        let pi = TensorCochain::tensor(1, &[x.clone(), y.clone()])
            .sub(&TensorCochain::tensor(1, &[y.clone(), x]))
            .sub(&TensorCochain::tensor(1, &[g(Gen::d(1)).mul(&y), y]));
        assert_eq!(pi.render(), "X ox Y - Y ox X - d1*Y ox Y");
    }
}
