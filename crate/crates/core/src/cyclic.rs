//! The cyclic module ℋ^♮_{(δ,σ)}: faces, degeneracies, cyclic operators and
//! the normalized (b, B) operators.

use std::collections::HashMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{generators, Monomial};
use crate::error::{Error, Result};
use crate::hopf::{iterated_coproduct, twisted_antipode, ModularPair, TensorCochain};
use crate::report::RelationReport;
use crate::{HopfElement, Q};

#[derive(Clone, Debug)]
pub struct CyclicContext {
    pub pair: ModularPair,
}

impl CyclicContext {
    pub fn new(pair: ModularPair) -> Self {
        CyclicContext { pair }
    }

    pub fn canonical(n: usize) -> Self {
        Self::new(ModularPair::canonical(n))
    }

    pub fn codim(&self) -> usize {
        self.pair.codim
    }

    fn sigma_tensor(&self) -> TensorCochain {
        TensorCochain::from_element(&self.pair.sigma.sigma)
    }

    fn mono(&self, m: &Monomial) -> HopfElement {
        HopfElement::mono(self.codim(), m.clone(), crate::rational::q(1))
    }

    fn check_codim(&self, c: &TensorCochain) -> Result<()> {
        if c.codim != self.codim() {
            return Err(Error::CodimMismatch(c.codim, self.codim()));
        }
        Ok(())
    }

    /// δᵢ : C^{n−1} → Cⁿ.
    pub fn face(&self, i: usize, c: &TensorCochain) -> Result<TensorCochain> {
        self.check_codim(c)?;
        let n = c.degree + 1;
        if i > n {
            return Err(Error::OperatorIndex { index: i, degree: n });
        }
        let k = self.codim();
        Ok(if i == 0 {
            TensorCochain::unit(k, 1).concat(c)
        } else if i == n {
            c.concat(&self.sigma_tensor())
        } else {
            c.map_slot(i - 1, 2, |m| crate::hopf::coproduct(&self.mono(m)))
        })
    }

    /// σᵢ : C^{n+1} → Cⁿ, ε on slot i+1.
    pub fn degeneracy(&self, i: usize, c: &TensorCochain) -> Result<TensorCochain> {
        self.check_codim(c)?;
        if c.degree == 0 || i + 1 > c.degree {
            return Err(Error::OperatorIndex { index: i, degree: c.degree.saturating_sub(1) });
        }
        let k = self.codim();
        Ok(c.map_slot(i, 0, |m| if m.is_empty() { TensorCochain::unit(k, 0) } else { TensorCochain::zero(k, 0) }))
    }

    /// τₙ(h¹⊗…⊗hⁿ) = Δ^{n−1}(S̃h¹)·(h²⊗…⊗hⁿ⊗σ).
    pub fn cyclic(&self, c: &TensorCochain) -> Result<TensorCochain> {
        self.check_codim(c)?;
        let n = c.degree;
        if n == 0 {
            return Err(Error::DegreeZero);
        }
        let mut heads: HashMap<&Monomial, TensorCochain> = HashMap::new();
        let mut out = TensorCochain::zero(self.codim(), n);
        let sigma = self.sigma_tensor();
        for (k, coeff) in &c.terms {
            let head = heads
                .entry(&k[0])
                .or_insert_with(|| iterated_coproduct(&twisted_antipode(&self.pair, &self.mono(&k[0])), n - 1))
                .clone();
            let mut rest = TensorCochain::zero(self.codim(), n - 1);
            rest.add_term(k[1..].to_vec(), coeff.clone());
            out.axpy(&crate::rational::q(1), &head.mul(&rest.concat(&sigma)));
        }
        Ok(out)
    }

    pub fn cyclic_pow(&self, c: &TensorCochain, k: usize) -> Result<TensorCochain> {
        (0..k).try_fold(c.clone(), |acc, _| self.cyclic(&acc))
    }

    /// b = Σ(−1)ⁱδᵢ; zero on scalars.
    pub fn hochschild_b(&self, c: &TensorCochain) -> Result<TensorCochain> {
        self.check_codim(c)?;
        let n = c.degree + 1;
        let mut out = TensorCochain::zero(self.codim(), n);
        if c.degree == 0 {
            return Ok(out);
        }
        for i in 0..=n {
            let s = if i % 2 == 0 { 1 } else { -1 };
            out.axpy(&crate::rational::q(s), &self.face(i, c)?);
        }
        Ok(out)
    }

    /// Projection onto the normalized subcomplex: h ↦ h − ε(h) in every slot.
    pub fn normalize(&self, c: &TensorCochain) -> TensorCochain {
        let mut out = TensorCochain::zero(c.codim, c.degree);
        for (k, v) in &c.terms {
            if k.iter().all(|m| !m.is_empty()) {
                out.add_term(k.clone(), v.clone());
            }
        }
        out
    }

    pub fn is_normalized(&self, c: &TensorCochain) -> bool {
        c.degree == 0 || (0..c.degree).all(|i| self.degeneracy(i, c).map(|r| r.is_zero()).unwrap_or(false))
    }

    /// B₀ : C^{n+1} → Cⁿ.
    fn b0(&self, c: &TensorCochain) -> TensorCochain {
        let n = c.degree - 1;
        let k = self.codim();
        if n == 0 {
            let v = c.terms.iter().fold(Q::zero(), |acc, (key, coeff)| acc + coeff * self.pair.delta.on_mono(&key[0]));
            return TensorCochain::scalar(k, v);
        }
        let mut heads: HashMap<&Monomial, TensorCochain> = HashMap::new();
        let mut out = TensorCochain::zero(k, n);
        for (key, coeff) in &c.terms {
            let head = heads
                .entry(&key[0])
                .or_insert_with(|| iterated_coproduct(&twisted_antipode(&self.pair, &self.mono(&key[0])), n - 1))
                .clone();
            let mut rest = TensorCochain::zero(k, n);
            rest.add_term(key[1..].to_vec(), coeff.clone());
            out.axpy(&crate::rational::q(1), &head.mul(&rest));
        }
        out
    }

    /// B = A∘B₀ on the normalized part of the input, A = Σ_{k=0}^{n} λᵏ, λ = (−1)ⁿτₙ.
    pub fn connes_b(&self, c: &TensorCochain) -> Result<TensorCochain> {
        self.check_codim(c)?;
        if c.degree == 0 {
            return Err(Error::DegreeZero);
        }
        let n = c.degree - 1;
        let x = self.b0(&self.normalize(c));
        if n == 0 {
            return Ok(x);
        }
        let sign = crate::rational::q(if n % 2 == 0 { 1 } else { -1 });
        let mut acc = x.clone();
        let mut cur = x;
        for _ in 1..=n {
            cur = self.cyclic(&cur)?.scale(&sign);
            acc = acc.add(&cur);
        }
        Ok(acc)
    }

    /// b c = 0 and (−1)ⁿτₙc = c.
    pub fn is_cyclic_cocycle(&self, c: &TensorCochain) -> Result<bool> {
        if !self.hochschild_b(c)?.is_zero() {
            return Ok(false);
        }
        if c.degree == 0 {
            return Ok(true);
        }
        let sign = crate::rational::q(if c.degree % 2 == 0 { 1 } else { -1 });
        Ok(self.cyclic(c)?.scale(&sign) == *c)
    }

    /// S̃² applied slotwise; equals τₙ^{n+1} when σ = 1.
    pub fn slotwise_twisted_square(&self, c: &TensorCochain) -> TensorCochain {
        let mut out = c.clone();
        for j in 0..c.degree {
            out = out.map_slot(j, 1, |m| {
                TensorCochain::from_element(&twisted_antipode(&self.pair, &twisted_antipode(&self.pair, &self.mono(m))))
            });
        }
        out
    }

    /// Seeded random cochain: `terms` tensors of PBW monomials of degree ≤ 2
    /// per slot, coefficients in −2..=2.
    pub fn random_cochain(&self, degree: usize, seed: u64, stream: u64) -> TensorCochain {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        random_cochain(&mut rng, self.codim(), degree, 3)
    }
}

pub fn random_cochain<R: Rng>(rng: &mut R, codim: usize, degree: usize, terms: usize) -> TensorCochain {
    let gens = generators(codim, if codim == 1 { 1 } else { 0 });
    let mut c = TensorCochain::zero(codim, degree);
    for _ in 0..terms {
        let key: Vec<Monomial> = (0..degree)
            .map(|_| {
                let d = rng.gen_range(0..=2);
                let mut m: Monomial = (0..d).map(|_| gens[rng.gen_range(0..gens.len())].clone()).collect();
                m.sort();
                m
            })
            .collect();
        c.add_term(key, crate::rational::q(rng.gen_range(-2..=2)));
    }
    c
}

/// Faces, degeneracies and cyclic operators of a cocyclic module, enough to
/// run the Λ-relation checks.
pub trait CyclicModule: Sync {
    type Cochain: Clone + PartialEq + Send;
    fn face(&self, i: usize, c: &Self::Cochain) -> Result<Self::Cochain>;
    fn degeneracy(&self, i: usize, c: &Self::Cochain) -> Result<Self::Cochain>;
    fn cyclic(&self, c: &Self::Cochain) -> Result<Self::Cochain>;
    fn cyclic_pow(&self, c: &Self::Cochain, k: usize) -> Result<Self::Cochain> {
        let mut out = c.clone();
        for _ in 0..k {
            out = self.cyclic(&out)?;
        }
        Ok(out)
    }
    fn random_cochain(&self, degree: usize, seed: u64, stream: u64) -> Self::Cochain;
    fn render(&self, c: &Self::Cochain) -> String;
}

impl CyclicModule for CyclicContext {
    type Cochain = TensorCochain;
    fn face(&self, i: usize, c: &TensorCochain) -> Result<TensorCochain> {
        CyclicContext::face(self, i, c)
    }
    fn degeneracy(&self, i: usize, c: &TensorCochain) -> Result<TensorCochain> {
        CyclicContext::degeneracy(self, i, c)
    }
    fn cyclic(&self, c: &TensorCochain) -> Result<TensorCochain> {
        CyclicContext::cyclic(self, c)
    }
    fn cyclic_pow(&self, c: &TensorCochain, k: usize) -> Result<TensorCochain> {
        CyclicContext::cyclic_pow(self, c, k)
    }
    fn random_cochain(&self, degree: usize, seed: u64, stream: u64) -> TensorCochain {
        CyclicContext::random_cochain(self, degree, seed, stream)
    }
    fn render(&self, c: &TensorCochain) -> String {
        c.render()
    }
}

type Check<'a, M> = Box<dyn Fn(&M, &<M as CyclicModule>::Cochain) -> Result<Option<String>> + Send + Sync + 'a>;

fn diff<M: CyclicModule>(ctx: &M, label: String, a: M::Cochain, b: M::Cochain) -> Option<String> {
    if a == b {
        None
    } else {
        Some(format!("{label}: {} ≠ {}", ctx.render(&a), ctx.render(&b)))
    }
}

/// (relation name, input degree, check) for middle degree n.
fn relation_checks<'a, M: CyclicModule + 'a>(n: usize) -> Vec<(String, usize, Check<'a, M>)> {
    let mut v: Vec<(String, usize, Check<'a, M>)> = vec![];
    v.push((
        "face-face".into(),
        n - 1,
        Box::new(move |ctx: &M, c: &M::Cochain| {
            for j in 1..=n + 1 {
                for i in 0..j {
                    let l = ctx.face(j, &ctx.face(i, c)?)?;
                    let r = ctx.face(i, &ctx.face(j - 1, c)?)?;
                    if let Some(e) = diff(ctx, format!("δ{j}δ{i} vs δ{i}δ{}", j - 1), l, r) {
                        return Ok(Some(e));
                    }
                }
            }
            Ok(None)
        }),
    ));
    v.push((
        "degeneracy-degeneracy".into(),
        n + 1,
        Box::new(move |ctx: &M, c: &M::Cochain| {
            for j in 0..n {
                for i in 0..=j {
                    let l = ctx.degeneracy(j, &ctx.degeneracy(i, c)?)?;
                    let r = ctx.degeneracy(i, &ctx.degeneracy(j + 1, c)?)?;
                    if let Some(e) = diff(ctx, format!("σ{j}σ{i} vs σ{i}σ{}", j + 1), l, r) {
                        return Ok(Some(e));
                    }
                }
            }
            Ok(None)
        }),
    ));
    v.push((
        "degeneracy-face".into(),
        n,
        Box::new(move |ctx: &M, c: &M::Cochain| {
            for j in 0..=n {
                for i in 0..=n + 1 {
                    let l = ctx.degeneracy(j, &ctx.face(i, c)?)?;
                    let r = if i < j {
                        ctx.face(i, &ctx.degeneracy(j - 1, c)?)?
                    } else if i == j || i == j + 1 {
                        c.clone()
                    } else {
                        ctx.face(i - 1, &ctx.degeneracy(j, c)?)?
                    };
                    if let Some(e) = diff(ctx, format!("σ{j}δ{i}"), l, r) {
                        return Ok(Some(e));
                    }
                }
            }
            Ok(None)
        }),
    ));
    v.push((
        "cyclic-face".into(),
        n - 1,
        Box::new(move |ctx: &M, c: &M::Cochain| {
            // τ₀ = Id on scalars
            let tc = if n == 1 { c.clone() } else { ctx.cyclic(c)? };
            for i in 1..=n {
                let l = ctx.cyclic(&ctx.face(i, c)?)?;
                let r = ctx.face(i - 1, &tc)?;
                if let Some(e) = diff(ctx, format!("τ{n}δ{i}"), l, r) {
                    return Ok(Some(e));
                }
            }
            let l = ctx.cyclic(&ctx.face(0, c)?)?;
            let r = ctx.face(n, c)?;
            Ok(diff(ctx, format!("τ{n}δ0"), l, r))
        }),
    ));
    v.push((
        "cyclic-degeneracy".into(),
        n + 1,
        Box::new(move |ctx: &M, c: &M::Cochain| {
            for i in 1..=n {
                let l = ctx.cyclic(&ctx.degeneracy(i, c)?)?;
                let r = ctx.degeneracy(i - 1, &ctx.cyclic(c)?)?;
                if let Some(e) = diff(ctx, format!("τ{n}σ{i}"), l, r) {
                    return Ok(Some(e));
                }
            }
            let l = ctx.cyclic(&ctx.degeneracy(0, c)?)?;
            let r = ctx.degeneracy(n, &ctx.cyclic_pow(c, 2)?)?;
            Ok(diff(ctx, format!("τ{n}σ0"), l, r))
        }),
    ));
    v.push((
        "cyclic-power".into(),
        n,
        Box::new(move |ctx: &M, c: &M::Cochain| Ok(diff(ctx, format!("τ{n}^{}", n + 1), ctx.cyclic_pow(c, n + 1)?, c.clone()))),
    ));
    v
}

/// Checks every Λ-relation family on `trials` seeded random cochains for each
/// middle degree 1..=n_max.
pub fn verify_lambda_relations<M: CyclicModule>(ctx: &M, n_max: usize, trials: usize, seed: u64) -> Vec<RelationReport> {
    let mut out = vec![];
    for n in 1..=n_max {
        for (rid, (name, in_deg, check)) in relation_checks::<M>(n).into_iter().enumerate() {
            let results: Vec<Option<String>> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let stream = ((rid as u64) << 40) | ((n as u64) << 24) | t as u64;
                    let c = ctx.random_cochain(in_deg, seed, stream);
                    match check(ctx, &c) {
                        Ok(None) => None,
                        Ok(Some(e)) => Some(format!("input {}: {e}", ctx.render(&c))),
                        Err(e) => Some(format!("input {}: error {e}", ctx.render(&c))),
                    }
                })
                .collect();
            let counterexample = results.into_iter().flatten().next();
            out.push(RelationReport { relation: name, degree: n, trials, pass: counterexample.is_none(), counterexample });
        }
    }
    out
}

/// τₙ^{n+1} = S̃²⊗…⊗S̃² when σ = 1, on seeded random cochains.
pub fn verify_tau_power(ctx: &CyclicContext, n_max: usize, trials: usize, seed: u64) -> Vec<RelationReport> {
    (1..=n_max)
        .map(|n| {
            let counterexample = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let c = ctx.random_cochain(n, seed, (7u64 << 40) | ((n as u64) << 24) | t as u64);
                    let l = ctx.cyclic_pow(&c, n + 1).ok()?;
                    let r = ctx.slotwise_twisted_square(&c);
                    diff(ctx, format!("input {}", c.render()), l, r)
                })
                .collect::<Vec<_>>()
                .into_iter()
                .flatten()
                .next();
            RelationReport { relation: "tau-power".into(), degree: n, trials, pass: counterexample.is_none(), counterexample }
        })
        .collect()
}
