//! Codimension-1 numeric realization: globally invertible maps of ℝ, bump
//! test functions on F⁺ℝ = ℝ × (0, ∞), and the invariant trace by
//! tensor-product Gauss–Legendre quadrature.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use gauss_quad::GaussLegendre;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::series::Series;
use crate::algebra::{Gen, HopfElement};
use crate::error::{Error, Result};
use crate::hopf::{coproduct, twisted_antipode, Character, ModularPair, TensorCochain};
use crate::rational::to_f64;
use crate::report::NumericReport;

const NEWTON_TOL: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub enum Prim {
    /// x ↦ a·x + b with a > 0.
    Affine { a: f64, b: f64 },
    /// Odd-degree polynomial with everywhere positive derivative.
    Poly(Vec<f64>),
}

impl Prim {
    fn eval(&self, x: f64) -> f64 {
        match self {
            Prim::Affine { a, b } => a * x + b,
            Prim::Poly(c) => horner(c, x),
        }
    }

    fn eval_inverse(&self, t: f64) -> f64 {
        match self {
            Prim::Affine { a, b } => (t - b) / a,
            Prim::Poly(c) => poly_inverse(c, t),
        }
    }

    fn series(&self, s: &Series) -> Series {
        match self {
            Prim::Affine { a, b } => s.scale(*a).add(&Series::constant(*b, s.order())),
            Prim::Poly(c) => Series::poly_of(c, s),
        }
    }

    fn series_inverse(&self, s: &Series) -> Series {
        match self {
            Prim::Affine { a, b } => s.add(&Series::constant(-b, s.order())).scale(1.0 / a),
            Prim::Poly(c) => {
                let x_star = poly_inverse(c, s.0[0]);
                let fwd = Series::poly_of(c, &Series::identity_at(x_star, s.order()));
                Series::compose(&fwd.reversion(x_star), s)
            }
        }
    }
}

fn affine_coeffs(p: &Prim, inv: bool) -> (f64, f64) {
    match (p, inv) {
        (Prim::Affine { a, b }, false) => (*a, *b),
        (Prim::Affine { a, b }, true) => (1.0 / a, -b / a),
        _ => unreachable!(),
    }
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, v| acc * x + v)
}

fn poly_derivative(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(k, v)| v * k as f64).collect()
}

/// Safeguarded Newton: bisection bracket kept alongside the Newton step.
fn poly_inverse(c: &[f64], t: f64) -> f64 {
    let dc = poly_derivative(c);
    let (mut lo, mut hi) = (-1.0, 1.0);
    while horner(c, lo) > t {
        lo *= 2.0;
    }
    while horner(c, hi) < t {
        hi *= 2.0;
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let fx = horner(c, x) - t;
        if fx == 0.0 {
            return x;
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let step = fx / horner(&dc, x);
        let mut nx = x - step;
        if !(nx > lo && nx < hi) {
            nx = 0.5 * (lo + hi);
        }
        if (nx - x).abs() <= NEWTON_TOL * (1.0 + x.abs()) {
            return nx;
        }
        x = nx;
    }
    x
}

/// A diffeomorphism of ℝ written as a word of primitives, applied left to
/// right; `true` marks an inverse letter. The empty word is the identity.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct GlobalDiffeo {
    word: Vec<(Prim, bool)>,
}

impl GlobalDiffeo {
    pub fn identity() -> Self {
        GlobalDiffeo::default()
    }

    pub fn affine(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::Other(format!("affine map needs a > 0, got {a}")));
        }
        Ok(GlobalDiffeo { word: vec![(Prim::Affine { a, b }, false)] }.reduced())
    }

    /// x ↦ x + x³.
    pub fn cubic() -> Self {
        GlobalDiffeo { word: vec![(Prim::Poly(vec![0.0, 1.0, 0.0, 1.0]), false)] }
    }

    /// Polynomial map with coefficients in increasing degree. Odd degree,
    /// positive leading term and p′ > 0 on a dense sample of the region
    /// containing all real critical points are required.
    pub fn polynomial(coeffs: Vec<f64>) -> Result<Self> {
        let mut c = coeffs;
        while c.last() == Some(&0.0) {
            c.pop();
        }
        let deg = c.len().saturating_sub(1);
        if deg % 2 == 0 || c[deg] <= 0.0 {
            return Err(Error::Other("polynomial must have odd degree and positive leading coefficient".into()));
        }
        let dc = poly_derivative(&c);
        let lead = *dc.last().unwrap();
        let r = 1.0 + dc.iter().map(|v| (v / lead).abs()).fold(0.0, f64::max);
        let steps = 20_000;
        for i in 0..=steps {
            let x = -r + 2.0 * r * i as f64 / steps as f64;
            if horner(&dc, x) <= 0.0 {
                return Err(Error::Other(format!("derivative not positive at x = {x}")));
            }
        }
        if deg == 1 {
            return GlobalDiffeo::affine(c[1], c[0]);
        }
        Ok(GlobalDiffeo { word: vec![(Prim::Poly(c), false)] })
    }

    /// `id`, `affine` (x ↦ 1.5x + 0.25), `cubic` (x + x³), `affine:a,b`,
    /// `poly:c0,c1,…`; a trailing `^-1` inverts.
    pub fn by_name(name: &str) -> Result<Self> {
        let name = name.trim();
        if let Some(base) = name.strip_suffix("^-1") {
            return Ok(GlobalDiffeo::by_name(base)?.inverse());
        }
        let nums = |s: &str| -> Result<Vec<f64>> {
            s.split(',')
                .map(|t| t.trim().parse::<f64>().map_err(|_| Error::Other(format!("bad number '{t}'"))))
                .collect()
        };
        match name {
            "id" => Ok(GlobalDiffeo::identity()),
            "affine" => GlobalDiffeo::affine(1.5, 0.25),
            "cubic" => Ok(GlobalDiffeo::cubic()),
            _ => {
                if let Some(rest) = name.strip_prefix("affine:") {
                    let v = nums(rest)?;
                    if v.len() != 2 {
                        return Err(Error::Other("affine:a,b expects two numbers".into()));
                    }
                    GlobalDiffeo::affine(v[0], v[1])
                } else if let Some(rest) = name.strip_prefix("poly:") {
                    GlobalDiffeo::polynomial(nums(rest)?)
                } else {
                    Err(Error::Other(format!("unknown diffeo '{name}'")))
                }
            }
        }
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn inverse(&self) -> Self {
        GlobalDiffeo { word: self.word.iter().rev().map(|(p, inv)| (p.clone(), !inv)).collect() }.reduced()
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GlobalDiffeo) -> Self {
        let mut word = self.word.clone();
        word.extend(next.word.iter().cloned());
        GlobalDiffeo { word }.reduced()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GlobalDiffeo) -> Self {
        other.then(self)
    }

    fn reduced(self) -> Self {
        let mut out: Vec<(Prim, bool)> = Vec::new();
        for (p, inv) in self.word {
            match out.last() {
                Some((q, qinv)) if *q == p && *qinv != inv => {
                    out.pop();
                }
                Some((q @ Prim::Affine { .. }, qinv)) if matches!(p, Prim::Affine { .. }) => {
                    let (a1, b1) = affine_coeffs(q, *qinv);
                    let (a, b) = affine_coeffs(&p, inv);
                    out.pop();
                    if !(a * a1 == 1.0 && a * b1 + b == 0.0) {
                        out.push((Prim::Affine { a: a * a1, b: a * b1 + b }, false));
                    }
                }
                _ => out.push((p, inv)),
            }
        }
        GlobalDiffeo { word: out }
    }

    pub fn apply(&self, x: f64) -> f64 {
        self.word.iter().fold(x, |v, (p, inv)| if *inv { p.eval_inverse(v) } else { p.eval(v) })
    }

    /// Taylor expansion of φ at x to the given order.
    pub fn taylor(&self, x: f64, order: usize) -> Series {
        self.word.iter().fold(Series::identity_at(x, order.max(1)), |s, (p, inv)| {
            if *inv {
                p.series_inverse(&s)
            } else {
                p.series(&s)
            }
        })
    }

    /// (φ(x), φ′(x)).
    pub fn value_and_slope(&self, x: f64) -> (f64, f64) {
        let s = self.taylor(x, 1);
        (s.0[0], s.0[1])
    }

    /// (d/dx)ᵏ log φ′ at x.
    pub fn log_der(&self, k: usize, x: f64) -> f64 {
        let s = self.taylor(x, k + 1).derivative();
        s.log().deriv_at(k)
    }

    /// γₖ(φ)(x, y) = yᵏ (d/dx)ᵏ log φ′(x).
    pub fn gamma(&self, k: usize, x: f64, y: f64) -> f64 {
        y.powi(k as i32) * self.log_der(k, x)
    }
}

impl fmt::Display for GlobalDiffeo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "id");
        }
        let parts: Vec<String> = self
            .word
            .iter()
            .map(|(p, inv)| {
                let base = match p {
                    Prim::Affine { a, b } => format!("affine:{a},{b}"),
                    Prim::Poly(c) => format!("poly:{}", c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")),
                };
                if *inv {
                    format!("{base}^-1")
                } else {
                    base
                }
            })
            .collect();
        write!(f, "{}", parts.join(" then "))
    }
}

/// Axis-aligned support rectangle in (x, y).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupportBox {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl SupportBox {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        assert!(x0 < x1 && y0 < y1);
        SupportBox { x0, x1, y0, y1 }
    }

    fn intersect(&self, o: &SupportBox) -> Option<SupportBox> {
        let b = SupportBox { x0: self.x0.max(o.x0), x1: self.x1.min(o.x1), y0: self.y0.max(o.y0), y1: self.y1.min(o.y1) };
        (b.x0 < b.x1 && b.y0 < b.y1).then_some(b)
    }

    fn hull(&self, o: &SupportBox) -> SupportBox {
        SupportBox { x0: self.x0.min(o.x0), x1: self.x1.max(o.x1), y0: self.y0.min(o.y0), y1: self.y1.max(o.y1) }
    }
}

/// Numerators Nₘ with b⁽ᵐ⁾(u) = Nₘ(u)/(1−u²)²ᵐ · b(u), b(u) = exp(−1/(1−u²)).
fn bump_numerator(m: usize) -> Vec<f64> {
    static TABLE: OnceLock<Mutex<Vec<Vec<f64>>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| Mutex::new(vec![vec![1.0]]));
    let mut t = table.lock().unwrap();
    while t.len() <= m {
        let k = t.len() - 1;
        let n = &t[k];
        let dn = poly_derivative(n);
        let one_minus = [1.0, 0.0, -1.0];
        let sq = poly_mul(&one_minus, &one_minus);
        let a = poly_mul(&dn, &sq);
        let b = poly_mul(&poly_mul(&[0.0, 4.0 * k as f64], &one_minus), n);
        let c = poly_mul(&[0.0, -2.0], n);
        let next = poly_add(&poly_add(&a, &b), &c);
        t.push(next);
    }
    t[m].clone()
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut r = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    r
}

fn poly_add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut r = vec![0.0; a.len().max(b.len())];
    for (i, v) in a.iter().enumerate() {
        r[i] += v;
    }
    for (i, v) in b.iter().enumerate() {
        r[i] += v;
    }
    r
}

/// m-th derivative of the standard bump at u.
pub fn bump(m: usize, u: f64) -> f64 {
    let w = 1.0 - u * u;
    if w <= 0.0 {
        return 0.0;
    }
    let b = (-1.0 / w).exp();
    if b == 0.0 {
        return 0.0;
    }
    if m == 0 {
        return b;
    }
    horner(&bump_numerator(m), u) / w.powi(2 * m as i32) * b
}

/// Σ c · xᵃ yᵇ · B⁽ᵖ⁾(sx(x)) · B⁽ᑫ⁾(sy(y)), with B the standard bump
/// rescaled to the support box.
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothFn {
    pub support: SupportBox,
    terms: Vec<((u32, u32, u32, u32), f64)>,
}

impl SmoothFn {
    /// p(x, y) · bump on the box; `poly` lists (a, b, c) for c·xᵃyᵇ.
    pub fn bump_times(support: SupportBox, poly: &[(u32, u32, f64)]) -> Self {
        SmoothFn::from_terms(support, poly.iter().map(|&(a, b, c)| ((a, b, 0, 0), c)))
    }

    fn from_terms(support: SupportBox, it: impl IntoIterator<Item = ((u32, u32, u32, u32), f64)>) -> Self {
        let mut map: std::collections::BTreeMap<(u32, u32, u32, u32), f64> = Default::default();
        for (k, c) in it {
            *map.entry(k).or_insert(0.0) += c;
        }
        SmoothFn { support, terms: map.into_iter().filter(|(_, c)| *c != 0.0).collect() }
    }

    fn half_widths(&self) -> (f64, f64, f64, f64) {
        let s = &self.support;
        (0.5 * (s.x0 + s.x1), 0.5 * (s.x1 - s.x0), 0.5 * (s.y0 + s.y1), 0.5 * (s.y1 - s.y0))
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let (cx, hx, cy, hy) = self.half_widths();
        let (u, v) = ((x - cx) / hx, (y - cy) / hy);
        if u.abs() >= 1.0 || v.abs() >= 1.0 {
            return 0.0;
        }
        self.terms
            .iter()
            .map(|&((a, b, p, q), c)| c * x.powi(a as i32) * y.powi(b as i32) * bump(p as usize, u) * bump(q as usize, v))
            .sum()
    }

    /// y ∂/∂x.
    pub fn x_field(&self) -> Self {
        let (_, hx, _, _) = self.half_widths();
        let mut out = Vec::new();
        for &((a, b, p, q), c) in &self.terms {
            if a > 0 {
                out.push(((a - 1, b + 1, p, q), c * a as f64));
            }
            out.push(((a, b + 1, p + 1, q), c / hx));
        }
        SmoothFn::from_terms(self.support, out)
    }

    /// y ∂/∂y.
    pub fn y_field(&self) -> Self {
        let (_, _, _, hy) = self.half_widths();
        let mut out = Vec::new();
        for &((a, b, p, q), c) in &self.terms {
            if b > 0 {
                out.push(((a, b, p, q), c * b as f64));
            }
            out.push(((a, b + 1, p, q + 1), c / hy));
        }
        SmoothFn::from_terms(self.support, out)
    }
}

/// Pointwise-evaluable function on F⁺ℝ built from bumps, pullbacks and γ.
#[derive(Clone, Debug)]
pub enum NFun {
    Const(f64),
    Smooth(Arc<SmoothFn>),
    /// γₖ(φ).
    Gamma(usize, GlobalDiffeo),
    /// F ∘ φ̃ with φ̃(x, y) = (φ(x), φ′(x) y).
    Pull(Box<NFun>, GlobalDiffeo),
    Prod(Vec<NFun>),
    Sum(Vec<(f64, NFun)>),
}

impl NFun {
    pub fn smooth(f: SmoothFn) -> NFun {
        NFun::Smooth(Arc::new(f))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, NFun::Const(c) if *c == 0.0)
    }

    pub fn pull(self, phi: &GlobalDiffeo) -> NFun {
        match self {
            _ if phi.is_identity() => self,
            NFun::Const(_) => self,
            NFun::Pull(inner, psi) => NFun::Pull(inner, phi.then(&psi)).simplify_pull(),
            other => NFun::Pull(Box::new(other), phi.clone()),
        }
    }

    fn simplify_pull(self) -> NFun {
        match self {
            NFun::Pull(inner, psi) if psi.is_identity() => *inner,
            other => other,
        }
    }

    pub fn prod(factors: Vec<NFun>) -> NFun {
        let mut out = Vec::new();
        let mut c = 1.0;
        for f in factors {
            match f {
                NFun::Const(v) => c *= v,
                NFun::Prod(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        if c == 0.0 {
            return NFun::Const(0.0);
        }
        match (out.len(), c) {
            (0, _) => NFun::Const(c),
            (1, c) if c == 1.0 => out.pop().unwrap(),
            (_, c) if c == 1.0 => NFun::Prod(out),
            _ => NFun::Sum(vec![(c, NFun::Prod(out))]),
        }
    }

    pub fn sum(terms: Vec<(f64, NFun)>) -> NFun {
        let terms: Vec<(f64, NFun)> = terms.into_iter().filter(|(c, f)| *c != 0.0 && !f.is_zero()).collect();
        match terms.len() {
            0 => NFun::Const(0.0),
            1 if terms[0].0 == 1.0 => terms.into_iter().next().unwrap().1,
            _ => NFun::Sum(terms),
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match self {
            NFun::Const(c) => *c,
            NFun::Smooth(f) => f.eval(x, y),
            NFun::Gamma(k, phi) => phi.gamma(*k, x, y),
            NFun::Pull(f, phi) => {
                let (px, slope) = phi.value_and_slope(x);
                f.eval(px, slope * y)
            }
            NFun::Prod(fs) => {
                let mut acc = 1.0;
                for f in fs {
                    acc *= f.eval(x, y);
                    if acc == 0.0 {
                        break;
                    }
                }
                acc
            }
            NFun::Sum(ts) => ts.iter().map(|(c, f)| c * f.eval(x, y)).sum(),
        }
    }

    /// Pointwise magnitude before cancellation: sums and products of
    /// absolute values of the constituents.
    pub fn eval_abs(&self, x: f64, y: f64) -> f64 {
        match self {
            NFun::Pull(f, phi) => {
                let (px, slope) = phi.value_and_slope(x);
                f.eval_abs(px, slope * y)
            }
            NFun::Prod(fs) => {
                let mut acc = 1.0;
                for f in fs {
                    acc *= f.eval_abs(x, y);
                    if acc == 0.0 {
                        break;
                    }
                }
                acc
            }
            NFun::Sum(ts) => ts.iter().map(|(c, f)| c.abs() * f.eval_abs(x, y)).sum(),
            other => other.eval(x, y).abs(),
        }
    }

    /// X = y ∂/∂x.
    pub fn x_field(&self) -> NFun {
        match self {
            NFun::Const(_) => NFun::Const(0.0),
            NFun::Smooth(f) => NFun::smooth(f.x_field()),
            NFun::Gamma(k, phi) => NFun::Gamma(k + 1, phi.clone()),
            NFun::Pull(f, phi) => NFun::sum(vec![
                (1.0, f.x_field().pull(phi)),
                (1.0, NFun::prod(vec![NFun::Gamma(1, phi.clone()), f.y_field().pull(phi)])),
            ]),
            NFun::Prod(fs) => leibniz(fs, NFun::x_field),
            NFun::Sum(ts) => NFun::sum(ts.iter().map(|(c, f)| (*c, f.x_field())).collect()),
        }
    }

    /// Y = y ∂/∂y.
    pub fn y_field(&self) -> NFun {
        match self {
            NFun::Const(_) => NFun::Const(0.0),
            NFun::Smooth(f) => NFun::smooth(f.y_field()),
            NFun::Gamma(k, phi) => NFun::sum(vec![(*k as f64, NFun::Gamma(*k, phi.clone()))]),
            NFun::Pull(f, phi) => f.y_field().pull(phi),
            NFun::Prod(fs) => leibniz(fs, NFun::y_field),
            NFun::Sum(ts) => NFun::sum(ts.iter().map(|(c, f)| (*c, f.y_field())).collect()),
        }
    }

    /// Exact y-interval of the support over a fixed x, when known. An
    /// interval with lo ≥ hi is empty.
    pub fn y_range_at(&self, x: f64) -> Option<(f64, f64)> {
        match self {
            NFun::Smooth(f) => {
                let b = f.support;
                Some(if x > b.x0 && x < b.x1 { (b.y0, b.y1) } else { (0.0, 0.0) })
            }
            NFun::Pull(f, phi) => {
                let (px, slope) = phi.value_and_slope(x);
                f.y_range_at(px).map(|(lo, hi)| (lo / slope, hi / slope))
            }
            NFun::Prod(fs) => fs
                .iter()
                .filter_map(|f| f.y_range_at(x))
                .reduce(|(a0, a1), (b0, b1)| (a0.max(b0), a1.min(b1))),
            NFun::Sum(ts) => {
                let rs: Option<Vec<(f64, f64)>> = ts.iter().map(|(_, f)| f.y_range_at(x)).collect();
                rs?.into_iter().filter(|(lo, hi)| lo < hi).reduce(|(a0, a1), (b0, b1)| (a0.min(b0), a1.max(b1))).or(Some((0.0, 0.0)))
            }
            _ => None,
        }
    }

    /// Known bounding box of the support, when one can be read off.
    pub fn support(&self) -> Option<SupportBox> {
        match self {
            NFun::Smooth(f) => Some(f.support),
            NFun::Pull(f, phi) => {
                // x-range exact (φ increasing); y-range from φ′ sampled on a
                // fine grid with a 2% margin.
                let b = f.support()?;
                let psi = phi.inverse();
                let (x0, x1) = (psi.apply(b.x0), psi.apply(b.x1));
                let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
                for i in 0..=512 {
                    let (_, s) = phi.value_and_slope(x0 + (x1 - x0) * i as f64 / 512.0);
                    lo = lo.min(s);
                    hi = hi.max(s);
                }
                Some(SupportBox { x0, x1, y0: b.y0 / (1.02 * hi), y1: b.y1 / (0.98 * lo) })
            }
            NFun::Prod(fs) => fs.iter().filter_map(NFun::support).reduce(|a, b| a.intersect(&b).unwrap_or(a)),
            NFun::Sum(ts) => {
                let boxes: Option<Vec<SupportBox>> = ts.iter().map(|(_, f)| f.support()).collect();
                boxes?.into_iter().reduce(|a, b| a.hull(&b))
            }
            _ => None,
        }
    }
}

fn leibniz(fs: &[NFun], d: impl Fn(&NFun) -> NFun) -> NFun {
    let mut terms = Vec::new();
    for i in 0..fs.len() {
        let di = d(&fs[i]);
        if di.is_zero() {
            continue;
        }
        let mut factors = fs.to_vec();
        factors[i] = di;
        terms.push((1.0, NFun::prod(factors)));
    }
    NFun::sum(terms)
}

/// Finite sum of terms f · U*_φ.
#[derive(Clone, Debug, Default)]
pub struct NumericCrossed {
    pub terms: Vec<(NFun, GlobalDiffeo)>,
}

impl NumericCrossed {
    pub fn term(f: NFun, phi: GlobalDiffeo) -> Self {
        NumericCrossed { terms: vec![(f, phi)] }
    }

    pub fn add(&self, o: &NumericCrossed) -> Self {
        let mut out = self.clone();
        for (f, phi) in &o.terms {
            out.push(f.clone(), phi.clone());
        }
        out
    }

    fn push(&mut self, f: NFun, phi: GlobalDiffeo) {
        if f.is_zero() {
            return;
        }
        if let Some(slot) = self.terms.iter_mut().find(|(_, p)| *p == phi) {
            let old = std::mem::replace(&mut slot.0, NFun::Const(0.0));
            slot.0 = NFun::sum(vec![(1.0, old), (1.0, f)]);
        } else {
            self.terms.push((f, phi));
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut out = NumericCrossed::default();
        for (f, phi) in &self.terms {
            out.push(NFun::sum(vec![(c, f.clone())]), phi.clone());
        }
        out
    }

    /// f₁U*_{φ₁} · f₂U*_{φ₂} = f₁ (f₂ ∘ φ̃₁) U*_{φ₂∘φ₁}.
    pub fn mul(&self, o: &NumericCrossed) -> Self {
        let mut out = NumericCrossed::default();
        for (f1, p1) in &self.terms {
            for (f2, p2) in &o.terms {
                out.push(NFun::prod(vec![f1.clone(), f2.clone().pull(p1)]), p1.then(p2));
            }
        }
        out
    }
}

/// Action of an element of ℋ₁ on a numeric crossed element.
pub fn act_numeric(h: &HopfElement, a: &NumericCrossed) -> Result<NumericCrossed> {
    if h.codim != 1 {
        return Err(Error::CodimOneOnly);
    }
    let mut out = NumericCrossed::default();
    for (f, phi) in &a.terms {
        for (m, c) in &h.terms {
            let mut v = f.clone();
            for g in m.iter().rev() {
                v = match g {
                    Gen::X(_) => v.x_field(),
                    Gen::Y(..) => v.y_field(),
                    Gen::Delta { .. } => NFun::prod(vec![NFun::Gamma(g.tail_len() + 1, phi.clone()), v]),
                };
            }
            out.push(NFun::sum(vec![(to_f64(c), v)]), phi.clone());
        }
    }
    Ok(out)
}

/// Quadrature rule: `panels` equal panels per axis with `nodes`
/// Gauss–Legendre points each.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub nodes: usize,
    pub panels: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature { nodes: 96, panels: 1 }
    }
}

impl Quadrature {
    pub fn points_per_axis(&self) -> usize {
        self.nodes * self.panels
    }

    pub fn doubled(&self) -> Self {
        Quadrature { nodes: self.nodes, panels: self.panels * 2 }
    }

    /// Nodes and weights on [a, b].
    pub fn rule(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let base = gl_rule(self.nodes);
        let h = (b - a) / self.panels as f64;
        let mut out = Vec::with_capacity(self.points_per_axis());
        for p in 0..self.panels {
            let lo = a + h * p as f64;
            for &(t, w) in base.iter() {
                out.push((lo + 0.5 * h * (t + 1.0), 0.5 * h * w));
            }
        }
        out
    }
}

fn gl_rule(n: usize) -> Arc<Vec<(f64, f64)>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<(f64, f64)>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut c = cache.lock().unwrap();
    c.entry(n)
        .or_insert_with(|| Arc::new(GaussLegendre::new(n.max(2)).expect("valid degree").as_node_weight_pairs().to_vec()))
        .clone()
}

/// Admissible region {|x| ≤ x_max, y_min ≤ y ≤ y_max}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Region {
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Default for Region {
    fn default() -> Self {
        Region { x_max: 4.0, y_min: 0.05, y_max: 20.0 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NumericConfig {
    pub quad: Quadrature,
    pub region: Region,
}

/// An integral together with ∫|integrand|, used as the error scale.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub l1: f64,
}

impl Integral {
    fn add(self, o: Integral) -> Integral {
        Integral { value: self.value + o.value, l1: self.l1 + o.l1 }
    }
}

fn integration_box(f: &NFun, region: &Region) -> Result<SupportBox> {
    let b = f.support().ok_or(Error::SupportEscapesBox)?;
    if b.x0 < -region.x_max || b.x1 > region.x_max || b.y0 < region.y_min || b.y1 > region.y_max {
        return Err(Error::SupportEscapesBox);
    }
    Ok(b)
}

/// ∫∫ w(x, y) f(x, y) dx dy: outer rule over the x-extent of the support box,
/// inner rule over the exact y-section at each node.
pub fn integrate(f: &NFun, weight: impl Fn(f64, f64) -> f64 + Sync, cfg: &NumericConfig) -> Result<Integral> {
    if f.is_zero() {
        return Ok(Integral::default());
    }
    let b = integration_box(f, &cfg.region)?;
    let xs = cfg.quad.rule(b.x0, b.x1);
    let rows: Vec<(f64, f64)> = xs
        .par_iter()
        .map(|&(x, wx)| {
            let (y0, y1) = match f.y_range_at(x) {
                Some((lo, hi)) => (lo.max(b.y0), hi.min(b.y1)),
                None => (b.y0, b.y1),
            };
            if y0 >= y1 {
                return (0.0, 0.0);
            }
            let (mut s, mut a) = (0.0, 0.0);
            for (y, wy) in cfg.quad.rule(y0, y1) {
                let w = weight(x, y) * wy;
                let v = f.eval(x, y) * w;
                if v != 0.0 {
                    s += v;
                    a += f.eval_abs(x, y) * w.abs();
                }
            }
            (s * wx, a * wx)
        })
        .collect();
    let (value, l1) = rows.iter().fold((0.0, 0.0), |(s, a), (v, w)| (s + v, a + w));
    Ok(Integral { value, l1 })
}

/// τ(f U*_φ) = ∫∫ f dx dy / y² when φ = id and 0 otherwise.
pub fn trace_quadrature(a: &NumericCrossed, cfg: &NumericConfig) -> Result<Integral> {
    let mut total = Integral::default();
    for (f, phi) in &a.terms {
        if phi.is_identity() {
            total = total.add(integrate(f, |_, y| 1.0 / (y * y), cfg)?);
        }
    }
    Ok(total)
}

/// χ_τ(h¹ ⊗ … ⊗ hⁿ)(a⁰, …, aⁿ) = τ(a⁰ h¹(a¹) ⋯ hⁿ(aⁿ)).
pub fn chi_tau(c: &TensorCochain, args: &[NumericCrossed], cfg: &NumericConfig) -> Result<Integral> {
    if c.codim != 1 {
        return Err(Error::CodimOneOnly);
    }
    if args.len() != c.degree + 1 {
        return Err(Error::DegreeMismatch(c.degree + 1, args.len()));
    }
    let mut total = Integral::default();
    for (key, coeff) in &c.terms {
        let mut prod = args[0].clone();
        for (m, a) in key.iter().zip(&args[1..]) {
            let ha = act_numeric(&HopfElement::mono(1, m.clone(), crate::rational::one()), a)?;
            prod = prod.mul(&ha);
        }
        let t = trace_quadrature(&prod, cfg)?;
        let w = to_f64(coeff);
        total = total.add(Integral { value: w * t.value, l1: w.abs() * t.l1 });
    }
    Ok(total)
}

/// Compares two sides computed on a grid and on the doubled grid.
pub fn compare(
    identity: impl Into<String>,
    side: impl Fn(&NumericConfig) -> Result<(Integral, Integral)>,
    cfg: &NumericConfig,
    tol: f64,
) -> Result<NumericReport> {
    let (l, r) = side(cfg)?;
    let fine = NumericConfig { quad: cfg.quad.doubled(), ..*cfg };
    let (l2, r2) = side(&fine)?;
    let scale = l.value.abs().max(r.value.abs()).max(l.l1).max(r.l1).max(f64::MIN_POSITIVE);
    let abs_err = (l.value - r.value).abs();
    let rel_err = abs_err / scale;
    let drift = ((l2.value - l.value).abs()).max((r2.value - r.value).abs()) / scale;
    Ok(NumericReport {
        identity: identity.into(),
        lhs: l.value,
        rhs: r.value,
        abs_err,
        rel_err,
        grid: cfg.quad.points_per_axis(),
        drift: Some(drift),
        pass: rel_err < tol && drift < 1e-8,
    })
}

/// Random test function c·p(x, y)·bump on the given box, p of bidegree ≤ 2.
pub fn random_test_function<R: Rng>(rng: &mut R, support: SupportBox) -> NFun {
    let mut poly = vec![(0, 0, 1.0)];
    for a in 0..=2 {
        for b in 0..=2 {
            if rng.gen_bool(0.5) {
                poly.push((a, b, rng.gen_range(-1.0..1.0)));
            }
        }
    }
    NFun::smooth(SmoothFn::bump_times(support, &poly))
}

/// Boxes used by the trace-identity suite.
pub fn test_boxes() -> [SupportBox; 3] {
    [
        SupportBox::new(-0.9, 0.8, 0.5, 1.7),
        SupportBox::new(-0.7, 1.0, 0.6, 1.9),
        SupportBox::new(-1.0, 0.6, 0.4, 1.5),
    ]
}

fn probe_elements() -> Vec<(&'static str, HopfElement)> {
    vec![
        ("X", HopfElement::gen(1, Gen::x(1))),
        ("Y", HopfElement::gen(1, Gen::y(1, 1))),
        ("d1", HopfElement::gen(1, Gen::d(1))),
        ("d2", HopfElement::gen(1, Gen::d(2))),
    ]
}

/// Trace identities over the diffeo library {affine, x + x³}:
/// τ(ab) = τ(ba); τ(h(a)) = δ(h)τ(a), both for a single term and through
/// the coproduct on a product; τ(h(a)b) = τ(a S̃(h)(b)).
pub fn verify_trace_identities(seed: u64, tol: f64, cfg: &NumericConfig) -> Result<Vec<NumericReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let [bf, bg, _] = test_boxes();
    let f = random_test_function(&mut rng, bf);
    let g = random_test_function(&mut rng, bg);
    let pair = ModularPair::canonical(1);
    let delta = Character::modular(1);
    let diffeos = [("affine", GlobalDiffeo::by_name("affine")?), ("cubic", GlobalDiffeo::cubic())];

    let mut jobs: Vec<(String, Box<dyn Fn(&NumericConfig) -> Result<(Integral, Integral)> + Send + Sync>)> = Vec::new();
    let a_id = NumericCrossed::term(f.clone(), GlobalDiffeo::identity());
    for (name, h) in probe_elements() {
        let dh = to_f64(&delta.eval(&h));
        let a = a_id.clone();
        let hh = h.clone();
        jobs.push((
            format!("tau({name}(a)) = delta({name}) tau(a)"),
            Box::new(move |c| {
                let l = trace_quadrature(&act_numeric(&hh, &a)?, c)?;
                let r = trace_quadrature(&a, c)?;
                Ok((l, Integral { value: dh * r.value, l1: dh.abs() * r.l1 }))
            }),
        ));
    }
    for (pname, phi) in diffeos.iter() {
        let a = NumericCrossed::term(f.clone(), phi.clone());
        let b = NumericCrossed::term(g.clone(), phi.inverse());
        {
            let (a, b) = (a.clone(), b.clone());
            jobs.push((
                format!("tau(ab) = tau(ba) [{pname}]"),
                Box::new(move |c| Ok((trace_quadrature(&a.mul(&b), c)?, trace_quadrature(&b.mul(&a), c)?))),
            ));
        }
        for (name, h) in probe_elements() {
            let dh = to_f64(&delta.eval(&h));
            let cop = coproduct(&h);
            let (a2, b2) = (a.clone(), b.clone());
            jobs.push((
                format!("tau({name}(ab)) = delta({name}) tau(ab) [{pname}]"),
                Box::new(move |c| {
                    let mut lhs = NumericCrossed::default();
                    for (key, k) in &cop.terms {
                        let ha = act_numeric(&HopfElement::mono(1, key[0].clone(), k.clone()), &a2)?;
                        let hb = act_numeric(&HopfElement::mono(1, key[1].clone(), crate::rational::one()), &b2)?;
                        lhs = lhs.add(&ha.mul(&hb));
                    }
                    let r = trace_quadrature(&a2.mul(&b2), c)?;
                    Ok((trace_quadrature(&lhs, c)?, Integral { value: dh * r.value, l1: dh.abs() * r.l1 }))
                }),
            ));
            let st = twisted_antipode(&pair, &h);
            let (a3, b3, h3) = (a.clone(), b.clone(), h.clone());
            jobs.push((
                format!("tau({name}(a) b) = tau(a S~({name})(b)) [{pname}]"),
                Box::new(move |c| {
                    let l = trace_quadrature(&act_numeric(&h3, &a3)?.mul(&b3), c)?;
                    let r = trace_quadrature(&a3.mul(&act_numeric(&st, &b3)?), c)?;
                    Ok((l, r))
                }),
            ));
        }
    }
    jobs.par_iter().map(|(name, job)| compare(name.clone(), job, cfg, tol)).collect()
}
