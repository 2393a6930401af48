//! Truncated polynomials in ε, x^μ and y^μ_j with rational coefficients, and
//! frame functions P·det(y)^{-k}.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, q, Q};

pub const MAX_VARS: usize = 16;
pub type Exp = [u16; MAX_VARS];

/// Ring parameters: codimension, ε-order K and optional x-degree cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ring {
    pub n: usize,
    pub order: usize,
    pub x_cap: Option<usize>,
}

impl Ring {
    pub fn new(n: usize, order: usize) -> Result<Ring> {
        if n == 0 || 1 + n + n * n > MAX_VARS {
            return Err(Error::Other(format!("jet calculus supports codimension 1..=3, got {n}")));
        }
        Ok(Ring { n, order, x_cap: None })
    }

    pub fn with_x_cap(mut self, cap: Option<usize>) -> Ring {
        self.x_cap = cap;
        self
    }

    pub fn nvars(&self) -> usize {
        1 + self.n + self.n * self.n
    }

    /// Variable index of x^μ (0-based μ).
    pub fn x(&self, mu: usize) -> usize {
        1 + mu
    }

    /// Variable index of y^μ_j (0-based).
    pub fn y(&self, mu: usize, j: usize) -> usize {
        1 + self.n + mu * self.n + j
    }

    fn x_degree(&self, e: &Exp) -> usize {
        (1..=self.n).map(|v| e[v] as usize).sum()
    }

    fn admissible(&self, e: &Exp) -> bool {
        e[0] as usize <= self.order && self.x_cap.map_or(true, |c| self.x_degree(e) <= c)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MPoly {
    pub ring: Ring,
    pub terms: BTreeMap<Exp, Q>,
}

impl MPoly {
    pub fn zero(ring: Ring) -> Self {
        MPoly { ring, terms: BTreeMap::new() }
    }

    pub fn constant(ring: Ring, c: Q) -> Self {
        let mut p = Self::zero(ring);
        p.add_term([0; MAX_VARS], c);
        p
    }

    pub fn one(ring: Ring) -> Self {
        Self::constant(ring, Q::one())
    }

    pub fn var(ring: Ring, v: usize) -> Self {
        let mut e = [0; MAX_VARS];
        e[v] = 1;
        let mut p = Self::zero(ring);
        p.add_term(e, Q::one());
        p
    }

    pub fn eps(ring: Ring) -> Self {
        Self::var(ring, 0)
    }

    pub fn monomial(ring: Ring, e: Exp, c: Q) -> Self {
        let mut p = Self::zero(ring);
        p.add_term(e, c);
        p
    }

    pub fn add_term(&mut self, e: Exp, c: Q) {
        if c.is_zero() || !self.ring.admissible(&e) {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn axpy(&mut self, c: &Q, o: &MPoly) {
        for (e, v) in &o.terms {
            self.add_term(*e, c * v);
        }
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        r.axpy(&Q::one(), o);
        r
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        r.axpy(&-Q::one(), o);
        r
    }

    pub fn neg(&self) -> MPoly {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, c: &Q) -> MPoly {
        let mut r = Self::zero(self.ring);
        r.axpy(c, self);
        r
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut r = Self::zero(self.ring);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let mut e = *ea;
                for v in 0..MAX_VARS {
                    e[v] += eb[v];
                }
                r.add_term(e, ca * cb);
            }
        }
        r
    }

    pub fn pow(&self, k: usize) -> MPoly {
        (0..k).fold(Self::one(self.ring), |acc, _| acc.mul(self))
    }

    pub fn deriv(&self, v: usize) -> MPoly {
        let mut r = Self::zero(self.ring);
        for (e, c) in &self.terms {
            if e[v] > 0 {
                let mut e2 = *e;
                e2[v] -= 1;
                r.add_term(e2, c * q(e[v] as i64));
            }
        }
        r
    }

    /// Coefficient of the empty monomial.
    pub fn constant_term(&self) -> Q {
        self.terms.get(&[0; MAX_VARS]).cloned().unwrap_or_else(Q::zero)
    }

    /// Part of ε-degree exactly `k`, as a polynomial without ε.
    pub fn eps_part(&self, k: usize) -> MPoly {
        let mut r = Self::zero(self.ring);
        for (e, c) in self.terms.iter().filter(|(e, _)| e[0] as usize == k) {
            let mut e2 = *e;
            e2[0] = 0;
            r.add_term(e2, c.clone());
        }
        r
    }

    /// Replaces variables by polynomials; `None` keeps the variable.
    pub fn substitute(&self, subs: &[Option<MPoly>]) -> MPoly {
        let mut powers: Vec<Vec<MPoly>> = subs.iter().map(|s| s.iter().map(|p| Self::one(p.ring)).collect()).collect();
        let mut r = Self::zero(self.ring);
        for (e, c) in &self.terms {
            let mut keep = [0u16; MAX_VARS];
            let mut acc = Self::one(self.ring);
            for v in 0..MAX_VARS {
                if e[v] == 0 {
                    continue;
                }
                match subs.get(v).and_then(|s| s.as_ref()) {
                    Some(s) => {
                        let pw = &mut powers[v];
                        while pw.len() <= e[v] as usize {
                            let next = pw.last().unwrap().mul(s);
                            pw.push(next);
                        }
                        acc = acc.mul(&pw[e[v] as usize]);
                    }
                    None => keep[v] = e[v],
                }
            }
            r.axpy(c, &acc.mul(&Self::monomial(self.ring, keep, Q::one())));
        }
        r
    }

    /// Evaluates every non-ε variable at `point[v-1]`, returning ε-coefficients.
    pub fn eval(&self, point: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.ring.order + 1];
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for i in 1..MAX_VARS {
                for _ in 0..e[i] {
                    v *= &point[i - 1];
                }
            }
            out[e[0] as usize] += v;
        }
        out
    }

    /// 1/p when p = c + N with c ≠ 0 and N nilpotent in the truncated ring.
    pub fn inverse(&self) -> Result<MPoly> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(Error::NotInvertible);
        }
        let nil = self.sub(&Self::constant(self.ring, c.clone()));
        let cap = self.ring.x_cap;
        if nil.terms.keys().any(|e| e[0] == 0 && (cap.is_none() || self.ring.x_degree(e) == 0)) {
            return Err(Error::NotInvertible);
        }
        let ci = c.recip();
        let t = nil.scale(&-ci.clone());
        let mut acc = Self::one(self.ring);
        let mut pw = Self::one(self.ring);
        loop {
            pw = pw.mul(&t);
            if pw.is_zero() {
                break;
            }
            acc = acc.add(&pw);
        }
        Ok(acc.scale(&ci))
    }

    /// Exact quotient by `d`, if `d` divides `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        let (ld, cd) = d.terms.iter().next_back()?;
        let mut p = self.clone();
        let mut quot = Self::zero(self.ring);
        while let Some((lp, cp)) = p.terms.iter().next_back() {
            let mut e = [0u16; MAX_VARS];
            for v in 0..MAX_VARS {
                if lp[v] < ld[v] {
                    return None;
                }
                e[v] = lp[v] - ld[v];
            }
            let t = Self::monomial(self.ring, e, cp / cd);
            p = p.sub(&t.mul(d));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    pub fn max_eps(&self) -> usize {
        self.terms.keys().map(|e| e[0] as usize).max().unwrap_or(0)
    }

    fn var_name(&self, v: usize) -> String {
        let n = self.ring.n;
        if v == 0 {
            "e".into()
        } else if v <= n {
            if n == 1 { "x".into() } else { format!("x{v}") }
        } else {
            let w = v - 1 - n;
            if n == 1 { "y".into() } else { format!("y{}{}", w / n + 1, w % n + 1) }
        }
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let mono: Vec<String> = (0..MAX_VARS)
                .filter(|&v| e[v] > 0)
                .map(|v| if e[v] == 1 { self.var_name(v) } else { format!("{}^{}", self.var_name(v), e[v]) })
                .collect();
            let neg = c < &Q::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            match (mono.is_empty(), a.is_one()) {
                (true, _) => write!(f, "{}", fmt_q(&a))?,
                (false, true) => write!(f, "{}", mono.join("*"))?,
                (false, false) => write!(f, "{}*{}", fmt_q(&a), mono.join("*"))?,
            }
        }
        Ok(())
    }
}

/// Polynomial matrix helpers over the truncated ring.
pub type PMat = Vec<Vec<MPoly>>;

pub fn det(m: &PMat, ring: Ring) -> MPoly {
    match m.len() {
        0 => MPoly::one(ring),
        1 => m[0][0].clone(),
        len => {
            let mut acc = MPoly::zero(ring);
            for col in 0..len {
                let minor: PMat = m[1..].iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != col).map(|(_, v)| v.clone()).collect()).collect();
                let term = m[0][col].mul(&det(&minor, ring));
                acc = if col % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
    }
}

/// Adjugate: adj(m)·m = det(m)·I.
pub fn adjugate(m: &PMat, ring: Ring) -> PMat {
    let len = m.len();
    if len == 1 {
        return vec![vec![MPoly::one(ring)]];
    }
    let mut out = vec![vec![MPoly::zero(ring); len]; len];
    for r in 0..len {
        for c in 0..len {
            let minor: PMat = m
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != r)
                .map(|(_, row)| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, v)| v.clone()).collect())
                .collect();
            let d = det(&minor, ring);
            out[c][r] = if (r + c) % 2 == 0 { d } else { d.neg() };
        }
    }
    out
}

pub fn mat_mul(a: &PMat, b: &PMat, ring: Ring) -> PMat {
    let (r, k, c) = (a.len(), b.len(), b[0].len());
    let mut out = vec![vec![MPoly::zero(ring); c]; r];
    for i in 0..r {
        for j in 0..c {
            for l in 0..k {
                out[i][j] = out[i][j].add(&a[i][l].mul(&b[l][j]));
            }
        }
    }
    out
}

/// Inverse via adjugate and 1/det (det must be invertible in the ring).
pub fn mat_inverse(m: &PMat, ring: Ring) -> Result<PMat> {
    let di = det(m, ring).inverse()?;
    Ok(adjugate(m, ring).into_iter().map(|row| row.into_iter().map(|v| v.mul(&di)).collect()).collect())
}

/// A function on the frame bundle: `p · det(y)^{-k}`, with `k` minimal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FrameFunction {
    pub p: MPoly,
    pub k: u32,
}

impl FrameFunction {
    pub fn new(p: MPoly, k: u32) -> Self {
        let mut f = FrameFunction { p, k };
        f.canonicalize();
        f
    }

    pub fn poly(p: MPoly) -> Self {
        FrameFunction { p, k: 0 }
    }

    pub fn zero(ring: Ring) -> Self {
        Self::poly(MPoly::zero(ring))
    }

    pub fn one(ring: Ring) -> Self {
        Self::poly(MPoly::one(ring))
    }

    pub fn ring(&self) -> Ring {
        self.p.ring
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero()
    }

    /// det(y) as a polynomial.
    pub fn det_y(ring: Ring) -> MPoly {
        det(&y_matrix(ring), ring)
    }

    fn canonicalize(&mut self) {
        if self.p.is_zero() {
            self.k = 0;
            return;
        }
        let d = Self::det_y(self.ring());
        while self.k > 0 {
            match self.p.div_exact(&d) {
                Some(qt) => {
                    self.p = qt;
                    self.k -= 1;
                }
                None => break,
            }
        }
    }

    fn lift(&self, k: u32) -> MPoly {
        let d = Self::det_y(self.ring());
        self.p.mul(&d.pow((k - self.k) as usize))
    }

    pub fn add(&self, o: &FrameFunction) -> FrameFunction {
        let k = self.k.max(o.k);
        FrameFunction::new(self.lift(k).add(&o.lift(k)), k)
    }

    pub fn sub(&self, o: &FrameFunction) -> FrameFunction {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> FrameFunction {
        FrameFunction { p: self.p.neg(), k: self.k }
    }

    pub fn scale(&self, c: &Q) -> FrameFunction {
        FrameFunction::new(self.p.scale(c), self.k)
    }

    pub fn mul(&self, o: &FrameFunction) -> FrameFunction {
        FrameFunction::new(self.p.mul(&o.p), self.k + o.k)
    }

    pub fn mul_poly(&self, p: &MPoly) -> FrameFunction {
        FrameFunction::new(self.p.mul(p), self.k)
    }

    /// ∂/∂(variable v), for an x- or y-variable.
    pub fn deriv(&self, v: usize) -> FrameFunction {
        let ring = self.ring();
        if v <= ring.n || self.k == 0 {
            return FrameFunction::new(self.p.deriv(v), self.k);
        }
        let d = Self::det_y(ring);
        let top = self.p.deriv(v).mul(&d).sub(&self.p.mul(&d.deriv(v)).scale(&q(self.k as i64)));
        FrameFunction::new(top, self.k + 1)
    }

    /// X_k = y^μ_k ∂_μ (0-based k).
    pub fn x_field(&self, k: usize) -> FrameFunction {
        let ring = self.ring();
        let mut acc = FrameFunction::zero(ring);
        for mu in 0..ring.n {
            let d = self.deriv(ring.x(mu));
            acc = acc.add(&d.mul_poly(&MPoly::var(ring, ring.y(mu, k))));
        }
        acc
    }

    /// Y_i^j = y^μ_i ∂/∂y^μ_j (0-based).
    pub fn y_field(&self, i: usize, j: usize) -> FrameFunction {
        let ring = self.ring();
        let mut acc = FrameFunction::zero(ring);
        for mu in 0..ring.n {
            let d = self.deriv(ring.y(mu, j));
            acc = acc.add(&d.mul_poly(&MPoly::var(ring, ring.y(mu, i))));
        }
        acc
    }

    /// ε-coefficients of the value at a point `(x, y)` (y row-major).
    pub fn eval(&self, point: &[Q]) -> Result<Vec<Q>> {
        let d = Self::det_y(self.ring()).eval(point)[0].clone();
        if d.is_zero() && self.k > 0 {
            return Err(Error::Singular);
        }
        let mut v = self.p.eval(point);
        if self.k > 0 {
            let s = (0..self.k).fold(Q::one(), |a, _| a / &d);
            v.iter_mut().for_each(|c| *c *= &s);
        }
        Ok(v)
    }
}

impl fmt::Display for FrameFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.k {
            0 => write!(f, "{}", self.p),
            1 => write!(f, "({})/det(y)", self.p),
            k => write!(f, "({})/det(y)^{k}", self.p),
        }
    }
}

/// The matrix of y-variables.
pub fn y_matrix(ring: Ring) -> PMat {
    (0..ring.n).map(|mu| (0..ring.n).map(|j| MPoly::var(ring, ring.y(mu, j))).collect()).collect()
}

/// y^{-1} = adj(y)/det(y), entries as frame functions.
pub fn y_inverse(ring: Ring) -> Vec<Vec<FrameFunction>> {
    adjugate(&y_matrix(ring), ring)
        .into_iter()
        .map(|row| row.into_iter().map(|p| FrameFunction::new(p, 1)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation_and_inverse() {
        let r = Ring::new(1, 3).unwrap();
        let e = MPoly::eps(r);
        let x = MPoly::var(r, r.x(0));
        let p = MPoly::one(r).add(&e.mul(&x).scale(&q(2)));
        let inv = p.inverse().unwrap();
        assert_eq!(p.mul(&inv), MPoly::one(r));
        assert!(e.pow(4).is_zero());
        assert!(x.inverse().is_err());
    }

    #[test]
    fn frame_function_canonical_form() {
        let r = Ring::new(2, 1).unwrap();
        let d = FrameFunction::det_y(r);
        let f = FrameFunction::new(d.mul(&MPoly::var(r, r.x(0))), 1);
        assert_eq!(f, FrameFunction::poly(MPoly::var(r, r.x(0))));
        let yi = y_inverse(r);
        let y = y_matrix(r);
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = FrameFunction::zero(r);
                for l in 0..2 {
                    acc = acc.add(&yi[i][l].mul_poly(&y[l][j]));
                }
                let want = if i == j { FrameFunction::one(r) } else { FrameFunction::zero(r) };
                assert_eq!(acc, want);
            }
        }
    }

    #[test]
    fn vector_fields_bracket() {
        let r = Ring::new(2, 0).unwrap();
        let f = FrameFunction::poly(
            MPoly::var(r, r.x(0)).pow(2).mul(&MPoly::var(r, r.y(1, 0))).add(&MPoly::var(r, r.y(0, 1)).mul(&MPoly::var(r, r.x(1)))),
        )
        .mul(&FrameFunction::new(MPoly::one(r), 1));
        // [Y_1^2, X_2] = X_1
        let lhs = f.x_field(1).y_field(0, 1).sub(&f.y_field(0, 1).x_field(1));
        assert_eq!(lhs, f.x_field(0));
        // [Y_1^2, Y_2^1] = Y_1^1 − Y_2^2
        let lhs = f.y_field(1, 0).y_field(0, 1).sub(&f.y_field(0, 1).y_field(1, 0));
        assert_eq!(lhs, f.y_field(0, 0).sub(&f.y_field(1, 1)));
    }
}
