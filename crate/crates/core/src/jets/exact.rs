//! Exact ε-jet realization of the standard action of ℋₙ on the crossed
//! product of frame-bundle functions by diffeomorphisms.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::poly::{det, mat_inverse, y_inverse, FrameFunction, MPoly, PMat, Ring, MAX_VARS};
use crate::algebra::{basis_monomials, generators, Gen, HopfElement, Monomial};
use crate::error::{Error, Result};
use crate::hopf::coproduct;
use crate::linalg;
use crate::report::Check;
use crate::rational::{q, Q};

/// c₀ + c₁ε + … + c_Kε^K.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DeformationScalar {
    pub coeffs: Vec<Q>,
}

impl DeformationScalar {
    pub fn new(order: usize, mut coeffs: Vec<Q>) -> Self {
        coeffs.resize(order + 1, Q::zero());
        DeformationScalar { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.order(), self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let k = self.order();
        let mut c = vec![Q::zero(); k + 1];
        for i in 0..=k {
            for j in 0..=k - i {
                c[i + j] += &self.coeffs[i] * &o.coeffs[j];
            }
        }
        Self::new(k, c)
    }

    pub fn inverse(&self) -> Result<Self> {
        let k = self.order();
        if self.coeffs[0].is_zero() {
            return Err(Error::NotInvertible);
        }
        let mut inv = vec![Q::zero(); k + 1];
        inv[0] = self.coeffs[0].recip();
        for m in 1..=k {
            let s = (1..=m).fold(Q::zero(), |acc, i| acc + &self.coeffs[i] * &inv[m - i]);
            inv[m] = -s * &inv[0];
        }
        Ok(Self::new(k, inv))
    }
}

/// A formal diffeomorphism x ↦ φ(x) of ℝⁿ with ε-polynomial coefficients.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FormalDiffeo {
    pub ring: Ring,
    pub comps: Vec<MPoly>,
}

impl FormalDiffeo {
    pub fn new(ring: Ring, comps: Vec<MPoly>) -> Result<Self> {
        if comps.len() != ring.n {
            return Err(Error::Other(format!("expected {} components, got {}", ring.n, comps.len())));
        }
        for c in &comps {
            if c.terms.keys().any(|e| (1 + ring.n..MAX_VARS).any(|v| e[v] > 0)) {
                return Err(Error::Other("diffeomorphism components may only involve ε and x".into()));
            }
        }
        let phi = FormalDiffeo { ring, comps };
        let l0 = phi.linear_part_const();
        if linalg::rank(&l0) < ring.n {
            return Err(Error::Singular);
        }
        Ok(phi)
    }

    pub fn identity(ring: Ring) -> Self {
        FormalDiffeo { ring, comps: (0..ring.n).map(|mu| MPoly::var(ring, ring.x(mu))).collect() }
    }

    /// x ↦ a·x + b.
    pub fn affine(ring: Ring, a: &[Vec<Q>], b: &[Q]) -> Result<Self> {
        let comps = (0..ring.n)
            .map(|i| {
                let mut p = MPoly::constant(ring, b[i].clone());
                for j in 0..ring.n {
                    p = p.add(&MPoly::var(ring, ring.x(j)).scale(&a[i][j]));
                }
                p
            })
            .collect();
        Self::new(ring, comps)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.ring)
    }

    /// ∂ⱼφⁱ at x = 0, ε = 0.
    fn linear_part_const(&self) -> Vec<Vec<Q>> {
        let n = self.ring.n;
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut e = [0u16; MAX_VARS];
                        e[self.ring.x(j)] = 1;
                        self.comps[i].terms.get(&e).cloned().unwrap_or_else(Q::zero)
                    })
                    .collect()
            })
            .collect()
    }

    /// L = ∂φ(0) as a matrix of ε-polynomials.
    pub fn linear_part(&self) -> Vec<Vec<MPoly>> {
        let zero_x: Vec<Option<MPoly>> = (0..MAX_VARS)
            .map(|v| if v >= 1 && v <= self.ring.n { Some(MPoly::zero(self.ring)) } else { None })
            .collect();
        self.jacobian().into_iter().map(|row| row.into_iter().map(|p| p.substitute(&zero_x)).collect()).collect()
    }

    /// φ′(x)ⁱⱼ = ∂ⱼφⁱ.
    pub fn jacobian(&self) -> PMat {
        let r = self.ring;
        self.comps.iter().map(|c| (0..r.n).map(|j| c.deriv(r.x(j))).collect()).collect()
    }

    fn x_subs(&self) -> Vec<Option<MPoly>> {
        let mut s: Vec<Option<MPoly>> = vec![None; MAX_VARS];
        for mu in 0..self.ring.n {
            s[self.ring.x(mu)] = Some(self.comps[mu].clone());
        }
        s
    }

    /// self ∘ other.
    pub fn compose(&self, other: &FormalDiffeo) -> Result<FormalDiffeo> {
        if self.ring != other.ring {
            return Err(Error::CodimMismatch(self.ring.n, other.ring.n));
        }
        let subs = other.x_subs();
        Ok(FormalDiffeo { ring: self.ring, comps: self.comps.iter().map(|c| c.substitute(&subs)).collect() })
    }

    /// Formal inverse by fixed-point iteration ψ = A₀⁻¹(x − b₀ − R(ψ)).
    pub fn invert(&self) -> Result<FormalDiffeo> {
        let r = self.ring;
        let n = r.n;
        let a0 = self.linear_part_const();
        let mut aug: Vec<Vec<Q>> = a0.iter().cloned().enumerate().map(|(i, mut row)| {
            row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        }).collect();
        let piv = linalg::rref(&mut aug);
        if piv.len() < n || piv.iter().any(|&p| p >= n) {
            return Err(Error::Singular);
        }
        let a0i: Vec<Vec<Q>> = aug.iter().map(|row| row[n..].to_vec()).collect();
        let mut rest = Vec::with_capacity(n);
        let mut b0 = Vec::with_capacity(n);
        for i in 0..n {
            let mut p = self.comps[i].clone();
            let c = p.constant_term();
            p.add_term([0; MAX_VARS], -c.clone());
            b0.push(c);
            for j in 0..n {
                let mut e = [0u16; MAX_VARS];
                e[r.x(j)] = 1;
                p.add_term(e, -a0[i][j].clone());
            }
            if r.x_cap.is_none() && p.terms.keys().any(|e| e[0] == 0) {
                return Err(Error::Other("ε⁰ part must be affine unless an x-degree cap is set".into()));
            }
            rest.push(p);
        }
        let rest = FormalDiffeo { ring: r, comps: rest };
        let apply_a0i = |v: Vec<MPoly>| -> Vec<MPoly> {
            (0..n).map(|i| (0..n).fold(MPoly::zero(r), |acc, j| acc.add(&v[j].scale(&a0i[i][j])))).collect()
        };
        let base: Vec<MPoly> = (0..n).map(|i| MPoly::var(r, r.x(i)).sub(&MPoly::constant(r, b0[i].clone()))).collect();
        let mut psi = FormalDiffeo { ring: r, comps: apply_a0i(base.clone()) };
        for _ in 0..(r.order + r.x_cap.unwrap_or(0) + 2) * 2 {
            let rp = rest.compose(&psi)?;
            let next = FormalDiffeo { ring: r, comps: apply_a0i((0..n).map(|i| base[i].sub(&rp.comps[i])).collect()) };
            if next == psi {
                return Ok(psi);
            }
            psi = next;
        }
        Err(Error::NotInvertible)
    }

    /// (φ′)⁻¹ and the Christoffel-type symbols Γ^λ_{μν} = (φ′⁻¹)^λ_ρ ∂_μ∂_ν φ^ρ.
    fn christoffel(&self) -> Result<Vec<Vec<Vec<MPoly>>>> {
        let r = self.ring;
        let n = r.n;
        let jinv = mat_inverse(&self.jacobian(), r)?;
        let mut out = vec![vec![vec![MPoly::zero(r); n]; n]; n];
        for lam in 0..n {
            for mu in 0..n {
                for nu in 0..n {
                    let mut acc = MPoly::zero(r);
                    for rho in 0..n {
                        let second = self.comps[rho].deriv(r.x(mu)).deriv(r.x(nu));
                        acc = acc.add(&jinv[lam][rho].mul(&second));
                    }
                    out[lam][mu][nu] = acc;
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for FormalDiffeo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.comps.iter().map(|c| c.to_string()).collect();
        write!(f, "x -> ({})", parts.join(", "))
    }
}

impl FrameFunction {
    /// f ∘ φ̃, φ̃(x, y) = (φ(x), φ′(x)·y).
    pub fn pullback(&self, phi: &FormalDiffeo) -> Result<FrameFunction> {
        let r = phi.ring;
        let jac = phi.jacobian();
        let mut subs = phi.x_subs();
        for mu in 0..r.n {
            for j in 0..r.n {
                let mut acc = MPoly::zero(r);
                for nu in 0..r.n {
                    acc = acc.add(&jac[mu][nu].mul(&MPoly::var(r, r.y(nu, j))));
                }
                subs[r.y(mu, j)] = Some(acc);
            }
        }
        let mut p = self.p.substitute(&subs);
        if self.k > 0 {
            let dinv = det(&jac, r).inverse()?;
            p = p.mul(&dinv.pow(self.k as usize));
        }
        Ok(FrameFunction::new(p, self.k))
    }
}

/// Per-diffeomorphism cache of γ values.
pub struct GammaTable {
    phi: FormalDiffeo,
    christoffel: Vec<Vec<Vec<MPoly>>>,
    yinv: Vec<Vec<FrameFunction>>,
    cache: HashMap<(u8, u8, u8, Vec<u8>), FrameFunction>,
}

impl GammaTable {
    pub fn new(phi: &FormalDiffeo) -> Result<Self> {
        Ok(GammaTable { phi: phi.clone(), christoffel: phi.christoffel()?, yinv: y_inverse(phi.ring), cache: HashMap::new() })
    }

    /// γⁱ_{jk|ℓ₁…ℓᵣ}(φ) by the closed formula; indices are 1-based.
    pub fn gamma(&mut self, i: u8, j: u8, k: u8, tail: &[u8]) -> Result<FrameFunction> {
        let r = self.phi.ring;
        for &idx in [i, j, k].iter().chain(tail) {
            if idx == 0 || idx as usize > r.n {
                return Err(Error::IndexOutOfRange { index: idx as usize, codim: r.n });
            }
        }
        let key = (i, j, k, tail.to_vec());
        if let Some(v) = self.cache.get(&key) {
            return Ok(v.clone());
        }
        let n = r.n;
        let (j0, k0) = (j as usize - 1, k as usize - 1);
        let mut t: Vec<MPoly> = (0..n)
            .map(|lam| {
                let mut acc = MPoly::zero(r);
                for mu in 0..n {
                    for nu in 0..n {
                        let yy = MPoly::var(r, r.y(nu, j0)).mul(&MPoly::var(r, r.y(mu, k0)));
                        acc = acc.add(&self.christoffel[lam][mu][nu].mul(&yy));
                    }
                }
                acc
            })
            .collect();
        for &l in tail {
            t = t
                .iter()
                .map(|p| (0..n).fold(MPoly::zero(r), |acc, b| acc.add(&p.deriv(r.x(b)).mul(&MPoly::var(r, r.y(b, l as usize - 1))))))
                .collect();
        }
        let mut out = FrameFunction::zero(r);
        for (lam, p) in t.iter().enumerate() {
            out = out.add(&self.yinv[i as usize - 1][lam].mul_poly(p));
        }
        self.cache.insert(key, out.clone());
        Ok(out)
    }

    pub fn gamma_gen(&mut self, g: &Gen) -> Result<FrameFunction> {
        match g {
            Gen::Delta { i, j, k, tail } => self.gamma(*i, *j, *k, tail),
            _ => Err(Error::Other("γ is defined for δ generators only".into())),
        }
    }
}

/// γⁱ_{jk|ℓ₁…ℓᵣ}(φ) by the closed formula.
pub fn gamma(phi: &FormalDiffeo, i: u8, j: u8, k: u8, tail: &[u8]) -> Result<FrameFunction> {
    GammaTable::new(phi)?.gamma(i, j, k, tail)
}

/// γⁱ_{jk|ℓ₁…ℓᵣ}(φ) as X_{ℓᵣ}⋯X_{ℓ₁}(γⁱ_{jk}).
pub fn gamma_by_fields(phi: &FormalDiffeo, i: u8, j: u8, k: u8, tail: &[u8]) -> Result<FrameFunction> {
    let mut g = gamma(phi, i, j, k, &[])?;
    for &l in tail {
        g = g.x_field(l as usize - 1);
    }
    Ok(g)
}

/// Finite sum Σ f·U*_φ with terms of equal φ merged.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CrossedElement {
    pub ring: Ring,
    pub terms: BTreeMap<FormalDiffeo, FrameFunction>,
}

impl CrossedElement {
    pub fn zero(ring: Ring) -> Self {
        CrossedElement { ring, terms: BTreeMap::new() }
    }

    pub fn term(f: FrameFunction, phi: FormalDiffeo) -> Self {
        let mut c = Self::zero(phi.ring);
        c.add_term(phi, f);
        c
    }

    pub fn unit(ring: Ring) -> Self {
        Self::term(FrameFunction::one(ring), FormalDiffeo::identity(ring))
    }

    pub fn add_term(&mut self, phi: FormalDiffeo, f: FrameFunction) {
        if f.is_zero() {
            return;
        }
        let merged = match self.terms.remove(&phi) {
            Some(old) => old.add(&f),
            None => f,
        };
        if !merged.is_zero() {
            self.terms.insert(phi, merged);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &CrossedElement) -> CrossedElement {
        let mut r = self.clone();
        for (phi, f) in &o.terms {
            r.add_term(phi.clone(), f.clone());
        }
        r
    }

    pub fn scale(&self, c: &Q) -> CrossedElement {
        let mut r = Self::zero(self.ring);
        for (phi, f) in &self.terms {
            r.add_term(phi.clone(), f.scale(c));
        }
        r
    }

    /// f₁U*_{φ₁}·f₂U*_{φ₂} = f₁(f₂∘φ̃₁)U*_{φ₂φ₁}.
    pub fn mul(&self, o: &CrossedElement) -> Result<CrossedElement> {
        if self.ring != o.ring {
            return Err(Error::CodimMismatch(self.ring.n, o.ring.n));
        }
        let mut r = Self::zero(self.ring);
        for (p1, f1) in &self.terms {
            for (p2, f2) in &o.terms {
                r.add_term(p2.compose(p1)?, f1.mul(&f2.pullback(p1)?));
            }
        }
        Ok(r)
    }
}

impl fmt::Display for CrossedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(phi, g)| format!("[{g}] U*[{phi}]")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn act_gen_on(g: &Gen, f: &FrameFunction, table: &mut GammaTable) -> Result<FrameFunction> {
    Ok(match g {
        Gen::X(k) => f.x_field(*k as usize - 1),
        Gen::Y(i, j) => f.y_field(*i as usize - 1, *j as usize - 1),
        Gen::Delta { .. } => table.gamma_gen(g)?.mul(f),
    })
}

/// h(a) for the standard action; monomials act right-to-left.
pub fn act(h: &HopfElement, a: &CrossedElement) -> Result<CrossedElement> {
    if h.codim != a.ring.n {
        return Err(Error::CodimMismatch(h.codim, a.ring.n));
    }
    h.check()?;
    let mut out = CrossedElement::zero(a.ring);
    for (phi, f) in &a.terms {
        let mut table = GammaTable::new(phi)?;
        for (m, c) in &h.terms {
            let mut v = f.clone();
            for g in m.iter().rev() {
                v = act_gen_on(g, &v, &mut table)?;
            }
            out.add_term(phi.clone(), v.scale(c));
        }
    }
    Ok(out)
}

/// h(ab) = Σ h₍₁₎(a) h₍₂₎(b), exactly in the truncated ring.
pub fn verify_hopf_action(h: &HopfElement, a: &CrossedElement, b: &CrossedElement) -> Result<bool> {
    let lhs = act(h, &a.mul(b)?)?;
    let n = h.codim;
    let mut left: HashMap<Monomial, CrossedElement> = HashMap::new();
    let mut right: HashMap<Monomial, CrossedElement> = HashMap::new();
    let mut rhs = CrossedElement::zero(a.ring);
    for (key, c) in &coproduct(h).terms {
        let ha = match left.get(&key[0]) {
            Some(v) => v.clone(),
            None => {
                let v = act(&HopfElement::mono(n, key[0].clone(), q(1)), a)?;
                left.insert(key[0].clone(), v.clone());
                v
            }
        };
        let hb = match right.get(&key[1]) {
            Some(v) => v.clone(),
            None => {
                let v = act(&HopfElement::mono(n, key[1].clone(), q(1)), b)?;
                right.insert(key[1].clone(), v.clone());
                v
            }
        };
        rhs = rhs.add(&ha.mul(&hb)?.scale(c));
    }
    Ok(lhs == rhs)
}

fn sorted_tails(n: u8, len: usize) -> Vec<Vec<u8>> {
    if len == 0 {
        return vec![vec![]];
    }
    let mut out = vec![];
    for t in sorted_tails(n, len - 1) {
        let start = t.last().copied().unwrap_or(1);
        for l in start..=n {
            let mut t2 = t.clone();
            t2.push(l);
            out.push(t2);
        }
    }
    out
}

/// γ(φ∘ψ) = ψ̃*(γ(φ)) + γ(ψ), and its X-transported forms for tails up to
/// `max_tail`: γ_{K|L}(φ∘ψ) = X_L[ψ̃*(γ_K(φ)) + γ_K(ψ)].
pub fn verify_gamma_cocycle(phi: &FormalDiffeo, psi: &FormalDiffeo, max_tail: usize) -> Result<bool> {
    let n = phi.ring.n as u8;
    let comp = phi.compose(psi)?;
    let mut tc = GammaTable::new(&comp)?;
    let mut tp = GammaTable::new(phi)?;
    let mut ts = GammaTable::new(psi)?;
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                let base = tp.gamma(i, j, k, &[])?.pullback(psi)?.add(&ts.gamma(i, j, k, &[])?);
                for r in 0..=max_tail {
                    for tail in sorted_tails(n, r) {
                        let lhs = tc.gamma(i, j, k, &tail)?;
                        let mut rhs = base.clone();
                        for &l in &tail {
                            rhs = rhs.x_field(l as usize - 1);
                        }
                        if lhs != rhs {
                            return Ok(false);
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Random ε-jet x ↦ A₀x + b₀ + Σ_{e=1..K} εᵉ pₑ(x), deg pₑ ≤ `deg`.
pub fn random_jet<R: Rng>(rng: &mut R, ring: Ring, deg: usize) -> FormalDiffeo {
    let n = ring.n;
    loop {
        let a: Vec<Vec<Q>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { q(rng.gen_range(1..=2)) } else { q(rng.gen_range(-1..=1)) }).collect())
            .collect();
        if linalg::rank(&a) < n {
            continue;
        }
        let mut comps = vec![];
        for i in 0..n {
            let mut p = MPoly::constant(ring, q(rng.gen_range(-2..=2)));
            for j in 0..n {
                p = p.add(&MPoly::var(ring, ring.x(j)).scale(&a[i][j]));
            }
            for e in 1..=ring.order {
                for _ in 0..3 {
                    let mut ex = [0u16; MAX_VARS];
                    ex[0] = e as u16;
                    let d = rng.gen_range(0..=deg);
                    for _ in 0..d {
                        ex[ring.x(rng.gen_range(0..n))] += 1;
                    }
                    p.add_term(ex, q(rng.gen_range(-3..=3)));
                }
            }
            comps.push(p);
        }
        if let Ok(phi) = FormalDiffeo::new(ring, comps) {
            return phi;
        }
    }
}

/// Random frame function: a polynomial in x and y of degree ≤ 2 in each
/// group, optionally divided by det(y).
pub fn random_frame_function<R: Rng>(rng: &mut R, ring: Ring) -> FrameFunction {
    let n = ring.n;
    let mut p = MPoly::zero(ring);
    for _ in 0..4 {
        let mut ex = [0u16; MAX_VARS];
        for _ in 0..rng.gen_range(0..=2) {
            ex[ring.x(rng.gen_range(0..n))] += 1;
        }
        for _ in 0..rng.gen_range(0..=2) {
            ex[ring.y(rng.gen_range(0..n), rng.gen_range(0..n))] += 1;
        }
        p.add_term(ex, q(rng.gen_range(-3..=3)));
    }
    FrameFunction::new(p, rng.gen_range(0..=1))
}

pub fn random_crossed_term<R: Rng>(rng: &mut R, ring: Ring, deg: usize) -> CrossedElement {
    CrossedElement::term(random_frame_function(rng, ring), random_jet(rng, ring, deg))
}

/// Evaluates every PBW operator of degree ≤ `degree_cap` (δ-tails ≤
/// `degree_cap`) on random codimension-1 ε-jet terms at random points and
/// tests the evaluation matrix (one row per sample and ε-power) for full
/// column rank over ℚ.
pub fn rank_sanity(degree_cap: usize, sample_count: usize, seed: u64) -> Result<bool> {
    if degree_cap > 3 {
        return Err(Error::Other("degree_cap must be ≤ 3".into()));
    }
    let ring = Ring::new(1, 4)?;
    let cols = basis_monomials(&generators(1, degree_cap), degree_cap);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<Vec<Q>> = vec![];
    for _ in 0..sample_count {
        let phi = random_sample_jet(&mut rng, ring);
        let mut p = MPoly::zero(ring);
        for a in 0..=3u16 {
            for b in 0..=3u16 {
                let mut ex = [0u16; MAX_VARS];
                ex[ring.x(0)] = a;
                ex[ring.y(0, 0)] = b;
                p.add_term(ex, q(rng.gen_range(-5..=5)));
            }
        }
        let f = FrameFunction::poly(p);
        let point = [q(rng.gen_range(-9..=9)) / q(rng.gen_range(1..=4)), q(rng.gen_range(1..=9)) / q(rng.gen_range(1..=4))];
        let mut table = GammaTable::new(&phi)?;
        let mut block = vec![vec![Q::zero(); cols.len()]; ring.order + 1];
        for (c, m) in cols.iter().enumerate() {
            let mut v = f.clone();
            for g in m.iter().rev() {
                v = act_gen_on(g, &v, &mut table)?;
            }
            for (e, val) in v.eval(&point)?.into_iter().enumerate() {
                block[e][c] = val;
            }
        }
        rows.extend(block);
    }
    Ok(linalg::rank(&rows) == cols.len())
}

fn random_sample_jet<R: Rng>(rng: &mut R, ring: Ring) -> FormalDiffeo {
    let mut p = MPoly::var(ring, ring.x(0));
    for e in 1..=ring.order {
        for d in 0..=5u16 {
            let mut ex = [0u16; MAX_VARS];
            ex[0] = e as u16;
            ex[ring.x(0)] = d;
            p.add_term(ex, q(rng.gen_range(-4..=4)));
        }
    }
    FormalDiffeo::new(ring, vec![p]).unwrap_or_else(|_| FormalDiffeo::identity(ring))
}

/// Module-algebra property on every generator (tails ≤ 1) and `trials`
/// random degree-2 elements, each against a fresh pair of random crossed
/// terms over ε-order `eps_order`.
pub fn verify_action_suite(codim: usize, eps_order: usize, trials: usize, seed: u64) -> Result<Vec<Check>> {
    let r = Ring::new(codim, eps_order)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hs: Vec<HopfElement> = generators(codim, 1).into_iter().map(|g| HopfElement::gen(codim, g)).collect();
    for _ in 0..trials {
        let mut h = crate::hopf::random_element(&mut rng, codim, 2, 1, 2);
        if h.degree() < 2 {
            h = h.add(&HopfElement::mono(codim, vec![Gen::X(1), Gen::Y(1, 1)], q(1)));
        }
        hs.push(h);
    }
    let mut out = vec![];
    for h in &hs {
        let a = random_crossed_term(&mut rng, r, 2);
        let b = random_crossed_term(&mut rng, r, 2);
        let ok = verify_hopf_action(h, &a, &b)?;
        out.push(Check::new(format!("h(ab) = h(1)(a)h(2)(b), h = {}", h.render()), ok));
    }
    Ok(out)
}

/// γ-cocycle identity and the symmetry γⁱ_{jk|l₁l₂} = γⁱ_{kj|l₂l₁} = X-transport
/// form on `trials` random jet pairs.
pub fn verify_gamma_suite(codim: usize, eps_order: usize, trials: usize, seed: u64) -> Result<Vec<Check>> {
    let r = Ring::new(codim, eps_order)?;
    let n = codim as u8;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![];
    for t in 0..trials {
        let a = random_jet(&mut rng, r, 3);
        let b = random_jet(&mut rng, r, 3);
        out.push(Check::new(format!("gamma cocycle, pair {t}"), verify_gamma_cocycle(&a, &b, if codim == 1 { 2 } else { 1 })?));
        let mut sym = true;
        let mut table = GammaTable::new(&a)?;
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    sym &= table.gamma(i, j, k, &[])? == table.gamma(i, k, j, &[])?;
                    for l1 in 1..=n {
                        for l2 in 1..=n {
                            let g = table.gamma(i, j, k, &[l1, l2])?;
                            sym &= g == table.gamma(i, k, j, &[l2, l1])?;
                            sym &= g == gamma_by_fields(&a, i, j, k, &[l1, l2])?;
                        }
                    }
                }
            }
        }
        out.push(Check::new(format!("gamma symmetry, jet {t}"), sym));
    }
    Ok(out)
}
