//! Truncated Taylor series in one variable with f64 coefficients.

#[derive(Clone, Debug, PartialEq)]
pub struct Series(pub Vec<f64>);

impl Series {
    pub fn order(&self) -> usize {
        self.0.len() - 1
    }

    pub fn constant(c: f64, order: usize) -> Series {
        let mut v = vec![0.0; order + 1];
        v[0] = c;
        Series(v)
    }

    /// Taylor series of x at `x0`.
    pub fn identity_at(x0: f64, order: usize) -> Series {
        let mut s = Series::constant(x0, order);
        if order >= 1 {
            s.0[1] = 1.0;
        }
        s
    }

    pub fn add(&self, o: &Series) -> Series {
        Series(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, c: f64) -> Series {
        Series(self.0.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, o: &Series) -> Series {
        let m = self.order();
        let mut r = vec![0.0; m + 1];
        for i in 0..=m {
            for j in 0..=m - i {
                r[i + j] += self.0[i] * o.0[j];
            }
        }
        Series(r)
    }

    pub fn derivative(&self) -> Series {
        let m = self.order();
        let mut r = vec![0.0; m + 1];
        for k in 1..=m {
            r[k - 1] = self.0[k] * k as f64;
        }
        Series(r)
    }

    /// p(self) for a polynomial p given by its coefficients.
    pub fn poly_of(coeffs: &[f64], inner: &Series) -> Series {
        let mut acc = Series::constant(0.0, inner.order());
        for c in coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Series::constant(*c, inner.order()));
        }
        acc
    }

    /// outer(inner) where `outer` is expanded around inner(0).
    pub fn compose(outer: &Series, inner: &Series) -> Series {
        let mut shifted = inner.clone();
        shifted.0[0] = 0.0;
        Series::poly_of(&outer.0, &shifted)
    }

    /// Inverse series: given self = φ expanded at x*, returns φ⁻¹ expanded
    /// at φ(x*).
    pub fn reversion(&self, x_star: f64) -> Series {
        let m = self.order();
        let a1 = self.0[1];
        let mut a = self.clone();
        a.0[0] = 0.0;
        let mut u = vec![0.0; m + 1];
        if m >= 1 {
            u[1] = 1.0 / a1;
        }
        for k in 2..=m {
            let cur = Series::poly_of(&a.0, &Series(u.clone()));
            u[k] = -cur.0[k] / a1;
        }
        u[0] = x_star;
        Series(u)
    }

    /// log of a series with positive constant term.
    pub fn log(&self) -> Series {
        let m = self.order();
        let c = self.0[0];
        let w = Series(self.0.iter().enumerate().map(|(i, v)| if i == 0 { 0.0 } else { v / c }).collect());
        let mut acc = Series::constant(c.ln(), m);
        let mut pw = Series::constant(1.0, m);
        for k in 1..=m {
            pw = pw.mul(&w);
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            acc = acc.add(&pw.scale(sign / k as f64));
        }
        acc
    }

    /// k-th derivative at the expansion point.
    pub fn deriv_at(&self, k: usize) -> f64 {
        self.0[k] * (1..=k).map(|i| i as f64).product::<f64>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reversion_of_cubic() {
        let x0: f64 = 0.7;
        let s = Series::poly_of(&[0.0, 1.0, 0.0, 1.0], &Series::identity_at(x0, 6));
        let r = s.reversion(x0);
        let back = Series::compose(&s, &r);
        assert!((back.0[0] - (x0 + x0.powi(3))).abs() < 1e-14);
        assert!((back.0[1] - 1.0).abs() < 1e-12);
        for k in 2..=6 {
            assert!(back.0[k].abs() < 1e-10);
        }
    }

    #[test]
    fn log_derivative() {
        let s = Series::poly_of(&[1.0, 0.0, 3.0], &Series::identity_at(0.5, 4));
        let l = s.log();
        // d/dx log(1 + 3x²) = 6x/(1 + 3x²)
        assert!((l.deriv_at(1) - 3.0 / 1.75).abs() < 1e-14);
    }
}
