//! Exterior forms with symbolic coefficients, and the Godbillon–Vey pullback
//! along the geodesic 2-jet of the interpolated connection.

use std::collections::BTreeMap;

use super::numeric::{chi_tau, compare, integrate, GlobalDiffeo, Integral, NFun, NumericConfig, NumericCrossed, Quadrature};
use crate::algebra::{Gen, HopfElement};
use crate::error::Result;
use crate::hopf::TensorCochain;
use crate::report::NumericReport;

#[derive(Clone, Debug)]
pub enum Expr {
    Const(f64),
    Var(usize),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Box<Expr>, i32),
    /// (d/dx)ᵏ log φ′ evaluated at the inner expression.
    LogDer(usize, GlobalDiffeo, Box<Expr>),
}

impl Expr {
    pub fn c(v: f64) -> Expr {
        Expr::Const(v)
    }

    pub fn var(i: usize) -> Expr {
        Expr::Var(i)
    }

    fn as_const(&self) -> Option<f64> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn add(terms: Vec<Expr>) -> Expr {
        let mut c = 0.0;
        let mut out = Vec::new();
        for t in terms {
            match t {
                Expr::Const(v) => c += v,
                Expr::Add(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        if c != 0.0 {
            out.push(Expr::Const(c));
        }
        match out.len() {
            0 => Expr::Const(0.0),
            1 => out.pop().unwrap(),
            _ => Expr::Add(out),
        }
    }

    pub fn mul(factors: Vec<Expr>) -> Expr {
        let mut c = 1.0;
        let mut out = Vec::new();
        for f in factors {
            match f {
                Expr::Const(v) => c *= v,
                Expr::Mul(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        if c == 0.0 {
            return Expr::Const(0.0);
        }
        if c != 1.0 {
            out.insert(0, Expr::Const(c));
        }
        match out.len() {
            0 => Expr::Const(1.0),
            1 => out.pop().unwrap(),
            _ => Expr::Mul(out),
        }
    }

    pub fn pow(base: Expr, k: i32) -> Expr {
        match (k, base.as_const()) {
            (0, _) => Expr::Const(1.0),
            (1, _) => base,
            (_, Some(v)) => Expr::Const(v.powi(k)),
            _ => Expr::Pow(Box::new(base), k),
        }
    }

    pub fn neg(self) -> Expr {
        Expr::mul(vec![Expr::Const(-1.0), self])
    }

    pub fn diff(&self, v: usize) -> Expr {
        match self {
            Expr::Const(_) => Expr::Const(0.0),
            Expr::Var(i) => Expr::Const(if *i == v { 1.0 } else { 0.0 }),
            Expr::Add(ts) => Expr::add(ts.iter().map(|t| t.diff(v)).collect()),
            Expr::Mul(fs) => {
                let mut terms = Vec::new();
                for i in 0..fs.len() {
                    let d = fs[i].diff(v);
                    if d.as_const() == Some(0.0) {
                        continue;
                    }
                    let mut g = fs.clone();
                    g[i] = d;
                    terms.push(Expr::mul(g));
                }
                Expr::add(terms)
            }
            Expr::Pow(b, k) => Expr::mul(vec![Expr::Const(*k as f64), Expr::pow((**b).clone(), k - 1), b.diff(v)]),
            Expr::LogDer(k, phi, arg) => {
                let d = arg.diff(v);
                if d.as_const() == Some(0.0) {
                    return Expr::Const(0.0);
                }
                Expr::mul(vec![Expr::LogDer(k + 1, phi.clone(), arg.clone()), d])
            }
        }
    }

    /// Replaces Var(i) by `vals[i]`.
    pub fn subst(&self, vals: &[Expr]) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::Var(i) => vals[*i].clone(),
            Expr::Add(ts) => Expr::add(ts.iter().map(|t| t.subst(vals)).collect()),
            Expr::Mul(fs) => Expr::mul(fs.iter().map(|t| t.subst(vals)).collect()),
            Expr::Pow(b, k) => Expr::pow(b.subst(vals), *k),
            Expr::LogDer(k, phi, arg) => Expr::LogDer(*k, phi.clone(), Box::new(arg.subst(vals))),
        }
    }

    pub fn eval(&self, p: &[f64]) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Var(i) => p[*i],
            Expr::Add(ts) => ts.iter().map(|t| t.eval(p)).sum(),
            Expr::Mul(fs) => fs.iter().map(|t| t.eval(p)).product(),
            Expr::Pow(b, k) => b.eval(p).powi(*k),
            Expr::LogDer(k, phi, arg) => phi.log_der(*k, arg.eval(p)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const() == Some(0.0)
    }
}

/// Exterior form on a `dim`-dimensional coordinate space; keys are bitmasks
/// of the wedge factors in increasing order.
#[derive(Clone, Debug)]
pub struct DifferentialForm {
    pub dim: usize,
    pub terms: BTreeMap<u32, Expr>,
}

fn wedge_sign(a: u32, b: u32) -> f64 {
    let mut inversions = 0;
    for i in 0..32 {
        if b & (1 << i) != 0 {
            inversions += (a >> (i + 1)).count_ones();
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl DifferentialForm {
    pub fn zero(dim: usize) -> Self {
        DifferentialForm { dim, terms: BTreeMap::new() }
    }

    pub fn function(dim: usize, e: Expr) -> Self {
        let mut f = DifferentialForm::zero(dim);
        f.push(0, e);
        f
    }

    /// d(uᵢ).
    pub fn coordinate(dim: usize, i: usize) -> Self {
        let mut f = DifferentialForm::zero(dim);
        f.push(1 << i, Expr::Const(1.0));
        f
    }

    /// c · du_{i₁} ∧ … ∧ du_{iₖ}.
    pub fn monomial(dim: usize, c: Expr, idx: &[usize]) -> Self {
        idx.iter().fold(DifferentialForm::function(dim, c), |acc, &i| acc.wedge(&DifferentialForm::coordinate(dim, i)))
    }

    fn push(&mut self, mask: u32, e: Expr) {
        if e.is_zero() {
            return;
        }
        let merged = match self.terms.remove(&mask) {
            Some(old) => Expr::add(vec![old, e]),
            None => e,
        };
        if !merged.is_zero() {
            self.terms.insert(mask, merged);
        }
    }

    pub fn add(&self, o: &DifferentialForm) -> Self {
        let mut out = self.clone();
        for (m, e) in &o.terms {
            out.push(*m, e.clone());
        }
        out
    }

    pub fn wedge(&self, o: &DifferentialForm) -> Self {
        let mut out = DifferentialForm::zero(self.dim);
        for (ma, ea) in &self.terms {
            for (mb, eb) in &o.terms {
                if ma & mb != 0 {
                    continue;
                }
                out.push(ma | mb, Expr::mul(vec![Expr::Const(wedge_sign(*ma, *mb)), ea.clone(), eb.clone()]));
            }
        }
        out
    }

    pub fn d(&self) -> Self {
        let mut out = DifferentialForm::zero(self.dim);
        for (m, e) in &self.terms {
            for v in 0..self.dim {
                if m & (1 << v) != 0 {
                    continue;
                }
                let sign = wedge_sign(1 << v, *m);
                out.push(m | (1 << v), Expr::mul(vec![Expr::Const(sign), e.diff(v)]));
            }
        }
        out
    }

    /// Pullback along u ↦ (map₀(u), …) from a `src_dim`-dimensional space.
    pub fn pullback(&self, map: &[Expr], src_dim: usize) -> Self {
        assert_eq!(map.len(), self.dim);
        let dmap: Vec<DifferentialForm> = map
            .iter()
            .map(|m| {
                let mut f = DifferentialForm::zero(src_dim);
                for j in 0..src_dim {
                    f.push(1 << j, m.diff(j));
                }
                f
            })
            .collect();
        let mut out = DifferentialForm::zero(src_dim);
        for (mask, e) in &self.terms {
            let mut acc = DifferentialForm::function(src_dim, e.subst(map));
            for (i, dm) in dmap.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    acc = acc.wedge(dm);
                }
            }
            out = out.add(&acc);
        }
        out
    }

    pub fn coefficient(&self, idx: &[usize]) -> Expr {
        let mask = idx.iter().fold(0u32, |m, i| m | (1 << i));
        self.terms.get(&mask).cloned().unwrap_or(Expr::Const(0.0))
    }
}

/// gv = y⁻³ dx ∧ dy ∧ dy₁ on (t, x, y, y₁)-space.
pub fn gv_form() -> DifferentialForm {
    DifferentialForm::monomial(4, Expr::pow(Expr::var(2), -3), &[1, 2, 3])
}

/// The geodesic 2-jet of Γ(t, x) = t (log φ′)′(x):
/// (t, x, y) ↦ (t, x, y, −t (log φ′)′(x) y²).
pub fn geodesic_jet(phi: &GlobalDiffeo) -> Vec<Expr> {
    let g = Expr::LogDer(1, phi.clone(), Box::new(Expr::var(1)));
    vec![
        Expr::var(0),
        Expr::var(1),
        Expr::var(2),
        Expr::mul(vec![Expr::Const(-1.0), Expr::var(0), g, Expr::pow(Expr::var(2), 2)]),
    ]
}

/// The dt ∧ dx ∧ dy coefficient of σ̃*(gv).
pub fn gv_pullback(phi: &GlobalDiffeo) -> Expr {
    gv_form().pullback(&geodesic_jet(phi), 3).coefficient(&[0, 1, 2])
}

/// Compares σ̃*(gv) with −(1/y)(log φ′)′(x) dt ∧ dx ∧ dy at each sample.
pub fn gv_pullback_check(phi: &GlobalDiffeo, samples: &[(f64, f64, f64)], tol: f64) -> Vec<NumericReport> {
    let coeff = gv_pullback(phi);
    samples
        .iter()
        .map(|&(t, x, y)| {
            let lhs = coeff.eval(&[t, x, y]);
            let rhs = -phi.log_der(1, x) / y;
            let abs_err = (lhs - rhs).abs();
            let rel_err = abs_err / lhs.abs().max(rhs.abs()).max(1.0);
            NumericReport {
                identity: format!("pullback(gv) at (t,x,y) = ({t}, {x}, {y})"),
                lhs,
                rhs,
                abs_err,
                rel_err,
                grid: 0,
                drift: None,
                pass: abs_err <= tol * rhs.abs().max(1.0),
            }
        })
        .collect()
}

/// ∫₀¹ dt ∫∫ F · σ̃*(gv) with F = f₀ · (f₁ ∘ φ̃), by 3D tensor quadrature.
pub fn gv_pairing(phi: &GlobalDiffeo, f0: &NFun, f1: &NFun, cfg: &NumericConfig) -> Result<Integral> {
    let coeff = gv_pullback(phi);
    let integrand = NFun::prod(vec![f0.clone(), f1.clone().pull(phi)]);
    let ts = Quadrature { nodes: 8, panels: 1 }.rule(0.0, 1.0);
    integrate(&integrand, |x, y| ts.iter().map(|&(t, wt)| wt * coeff.eval(&[t, x, y])).sum(), cfg)
}

/// The pairing against σ̃*(gv) versus χ_τ(δ₁)(f₀U*_φ, f₁U*_{φ⁻¹}).
pub fn gv_pairing_check(phi: &GlobalDiffeo, f0: &NFun, f1: &NFun, cfg: &NumericConfig, tol: f64) -> Result<NumericReport> {
    let d1 = TensorCochain::from_element(&HopfElement::gen(1, Gen::d(1)));
    let a0 = NumericCrossed::term(f0.clone(), phi.clone());
    let a1 = NumericCrossed::term(f1.clone(), phi.inverse());
    compare(
        format!("<pullback(gv), f0 f1(phi)> = chi_tau(d1)(a0, a1) [{phi}]"),
        |c| Ok((gv_pairing(phi, f0, f1, c)?, chi_tau(&d1, &[a0.clone(), a1.clone()], c)?)),
        cfg,
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d_squared_is_zero() {
        let e = Expr::mul(vec![Expr::var(0), Expr::pow(Expr::var(1), 3), Expr::LogDer(1, GlobalDiffeo::cubic(), Box::new(Expr::var(2)))]);
        let f = DifferentialForm::function(3, e);
        let dd = f.d().d();
        for (_, c) in dd.terms {
            assert!(c.eval(&[0.3, 0.7, -0.2]).abs() < 1e-12);
        }
    }

    #[test]
    fn wedge_is_graded() {
        let a = DifferentialForm::coordinate(3, 0);
        let b = DifferentialForm::coordinate(3, 2);
        let ab = a.wedge(&b).coefficient(&[0, 2]).eval(&[0.0; 3]);
        let ba = b.wedge(&a).coefficient(&[0, 2]).eval(&[0.0; 3]);
        assert_eq!(ab, 1.0);
        assert_eq!(ba, -1.0);
        assert!(a.wedge(&a).terms.is_empty());
    }
}
