//! The codimension-one cocycles δ₁, δ₂′, c and Π, with a verification run.

use serde::Serialize;

use crate::algebra::{Gen, HopfElement};
use crate::cyclic::CyclicContext;
use crate::error::{Error, Result};
use crate::hopf::TensorCochain;
use crate::rational::{q, qf};
use crate::report::Check;

fn g(x: Gen) -> HopfElement {
    HopfElement::gen(1, x)
}

fn x() -> HopfElement {
    g(Gen::X(1))
}

fn y() -> HopfElement {
    g(Gen::Y(1, 1))
}

/// δₖ in codimension one.
pub fn delta(k: usize) -> HopfElement {
    g(Gen::d(k))
}

fn t(hs: &[HopfElement]) -> TensorCochain {
    TensorCochain::tensor(1, hs)
}

pub fn godbillon_vey() -> TensorCochain {
    t(&[delta(1)])
}

/// δ₂′ = δ₂ − ½δ₁².
pub fn schwarzian() -> TensorCochain {
    t(&[delta(2).sub(&delta(1).pow(2).scale(&qf(1, 2)))])
}

/// c = δ₁⊗X + ½δ₁²⊗Y.
pub fn hochschild_c() -> TensorCochain {
    t(&[delta(1), x()]).add(&t(&[delta(1).pow(2), y()]).scale(&qf(1, 2)))
}

/// Π = X⊗Y − Y⊗X − δ₁Y⊗Y.
pub fn fundamental() -> TensorCochain {
    t(&[x(), y()]).sub(&t(&[y(), x()])).sub(&t(&[delta(1).mul(&y()), y()]))
}

#[derive(Clone, Debug, Serialize)]
pub struct NamedCocycle {
    pub name: &'static str,
    pub cochain: String,
}

pub fn named() -> Vec<(&'static str, TensorCochain)> {
    vec![
        ("godbillon_vey", godbillon_vey()),
        ("schwarzian", schwarzian()),
        ("hochschild_c", hochschild_c()),
        ("fundamental", fundamental()),
    ]
}

pub fn by_name(name: &str) -> Option<TensorCochain> {
    named().into_iter().find(|(n, _)| *n == name).map(|(_, c)| c)
}

fn eq_check(name: &str, got: Result<TensorCochain>, want: &TensorCochain) -> Check {
    match got {
        Ok(v) if v == *want => Check::new(name, true),
        Ok(v) => Check::with(name, false, format!("got {}, expected {}", v.render(), want.render())),
        Err(e) => Check::with(name, false, e.to_string()),
    }
}

fn bool_check(name: &str, got: Result<bool>) -> Check {
    match got {
        Ok(b) => Check::new(name, b),
        Err(e) => Check::with(name, false, e.to_string()),
    }
}

/// Runs the full list of identities for the four cocycles in `ctx`.
pub fn verify_all(ctx: &CyclicContext) -> Result<Vec<Check>> {
    if ctx.codim() != 1 {
        return Err(Error::CodimOneOnly);
    }
    let gv = godbillon_vey();
    let sch = schwarzian();
    let c = hochschild_c();
    let pi = fundamental();
    let zero2 = TensorCochain::zero(1, 2);
    let zero3 = TensorCochain::zero(1, 3);
    let d1yy = t(&[delta(1), delta(1), y()]);
    let mut out = vec![
        eq_check("b(gv) = 0", ctx.hochschild_b(&gv), &zero2),
        eq_check("tau1(gv) = -gv", ctx.cyclic(&gv), &gv.neg()),
        bool_check("gv is a cyclic cocycle", ctx.is_cyclic_cocycle(&gv)),
        eq_check("b(d1 ox X) = d1 ox d1 ox Y", ctx.hochschild_b(&t(&[delta(1), x()])), &d1yy),
        eq_check("b(d1^2 ox Y) = -2 d1 ox d1 ox Y", ctx.hochschild_b(&t(&[delta(1).pow(2), y()])), &d1yy.scale(&q(-2))),
        eq_check("b(c) = 0", ctx.hochschild_b(&c), &zero3),
        eq_check("B(c) = d2 - 1/2 d1^2", ctx.connes_b(&c), &sch),
        eq_check("tau1(d2') = -d2'", ctx.cyclic(&sch), &sch.neg()),
        bool_check("d2' is a cyclic cocycle", ctx.is_cyclic_cocycle(&sch)),
        eq_check("B(Y) = 1", ctx.connes_b(&t(&[y()])), &TensorCochain::scalar(1, q(1))),
        eq_check("b(Pi) = 0", ctx.hochschild_b(&pi), &zero3),
        eq_check("tau2(Pi) = Pi", ctx.cyclic(&pi), &pi),
        bool_check("Pi is a cyclic cocycle", ctx.is_cyclic_cocycle(&pi)),
    ];
    let normalized = named().iter().all(|(_, c)| ctx.is_normalized(c));
    out.push(Check::new("cocycles are normalized", normalized));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_run_passes() {
        let checks = verify_all(&CyclicContext::canonical(1)).unwrap();
        for c in &checks {
            assert!(c.pass, "{c:?}");
        }
    }

    #[test]
    fn untwisted_pair_breaks_tau_checks() {
        let ctx = CyclicContext::new(crate::hopf::ModularPair::untwisted(1));
        let checks = verify_all(&ctx).unwrap();
        assert!(checks.iter().any(|c| c.name.starts_with("tau") && !c.pass));
    }

    #[test]
    fn codim_two_is_rejected() {
        assert!(verify_all(&CyclicContext::canonical(2)).is_err());
    }

    #[test]
    fn formulas() {
        assert_eq!(fundamental().render(), "X ox Y - Y ox X - d1*Y ox Y");
        assert_eq!(schwarzian().render(), "d2 - 1/2 d1^2");
    }
}
