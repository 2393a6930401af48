use hopfcyclic::algebra::{Gen, HopfElement};
use hopfcyclic::hopf::TensorCochain;
use hopfcyclic::jets::forms::{gv_form, gv_pairing_check, gv_pullback, gv_pullback_check};
use hopfcyclic::jets::numeric::{
    bump, chi_tau, random_test_function, test_boxes, trace_quadrature, verify_trace_identities, GlobalDiffeo, NFun,
    NumericConfig, NumericCrossed, Quadrature, SmoothFn, SupportBox,
};
use hopfcyclic::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cubic_logder(x: f64) -> f64 {
    6.0 * x / (1.0 + 3.0 * x * x)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn diffeo_library() {
    let c = GlobalDiffeo::cubic();
    let ci = c.inverse();
    for &x in &[-3.0, -0.4, 0.0, 0.25, 1.7, 10.0] {
        assert!(close(ci.apply(c.apply(x)), x, 1e-14));
        assert!(close(c.apply(ci.apply(x)), x, 1e-13));
        assert!(close(c.log_der(1, x), cubic_logder(x), 1e-13));
        let second = (6.0 - 18.0 * x * x) / (1.0 + 3.0 * x * x).powi(2);
        assert!(close(c.log_der(2, x), second, 1e-12));
        // γ₁(φ⁻¹)∘φ̃ = −γ₁(φ)
        let (px, slope) = c.value_and_slope(x);
        assert!(close(ci.gamma(1, px, slope * 1.3), -c.gamma(1, x, 1.3), 1e-12));
    }
    assert!(c.then(&ci).is_identity());
    assert!(!c.then(&c).is_identity());
    let a = GlobalDiffeo::affine(2.0, 1.0).unwrap();
    let b = GlobalDiffeo::affine(3.0, -1.0).unwrap();
    // (x ↦ 2x+1) ∘ (x ↦ 3x−1) = x ↦ 6x − 1
    assert_eq!(a.compose(&b), GlobalDiffeo::affine(6.0, -1.0).unwrap());
    assert!(a.compose(&a.inverse()).is_identity());
    assert_eq!(a.log_der(1, 0.3), 0.0);
    assert!(GlobalDiffeo::affine(-1.0, 0.0).is_err());
    assert!(GlobalDiffeo::polynomial(vec![0.0, -1.0, 0.0, 1.0]).is_err());
    assert!(GlobalDiffeo::polynomial(vec![0.0, 1.0, 0.0, 0.0, 0.0, 2.0]).is_ok());
    assert_eq!(GlobalDiffeo::by_name("cubic").unwrap(), c);
    assert_eq!(GlobalDiffeo::by_name("cubic^-1").unwrap(), ci);
    assert!(GlobalDiffeo::by_name("poly:0,1,0,1").unwrap().then(&ci).is_identity());
    assert!(GlobalDiffeo::by_name("sine").is_err());
}

#[test]
fn bump_derivatives_match_finite_differences() {
    let h = 1e-5;
    for m in 0..5 {
        for &u in &[-0.8, -0.3, 0.0, 0.45, 0.9] {
            let fd = (bump(m, u + h) - bump(m, u - h)) / (2.0 * h);
            assert!(close(bump(m + 1, u), fd, 1e-5), "m={m} u={u}");
        }
    }
    assert_eq!(bump(0, 1.0), 0.0);
    assert_eq!(bump(3, -1.2), 0.0);
}

#[test]
fn vector_fields_on_pullbacks() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let f = random_test_function(&mut rng, SupportBox::new(-1.0, 1.0, 0.5, 2.0));
    let phi = GlobalDiffeo::cubic().then(&GlobalDiffeo::affine(0.8, 0.1).unwrap());
    let g = NFun::prod(vec![f.clone().pull(&phi), NFun::Gamma(1, phi.clone()), f.clone()]);
    let h = 1e-6;
    for &(x, y) in &[(0.1, 0.9), (-0.3, 1.2), (0.25, 0.7)] {
        let dx = (g.eval(x + h, y) - g.eval(x - h, y)) / (2.0 * h);
        let dy = (g.eval(x, y + h) - g.eval(x, y - h)) / (2.0 * h);
        assert!(close(g.x_field().eval(x, y), y * dx, 1e-6));
        assert!(close(g.y_field().eval(x, y), y * dy, 1e-6));
    }
}

#[test]
fn trace_examples() {
    let cfg = NumericConfig::default();
    let bx = SupportBox::new(-0.8, 0.9, 0.5, 1.6);
    let f = NFun::smooth(SmoothFn::bump_times(bx, &[(0, 0, 1.0), (1, 1, 0.5)]));
    let a = NumericCrossed::term(f.clone(), GlobalDiffeo::identity());
    let coarse = trace_quadrature(&a, &cfg).unwrap();
    let fine = trace_quadrature(&a, &NumericConfig { quad: Quadrature { nodes: 96, panels: 8 }, ..cfg }).unwrap();
    assert!(coarse.value > 0.0);
    assert!(close(coarse.value, fine.value, 1e-8), "{} vs {}", coarse.value, fine.value);

    let moved = NumericCrossed::term(f.clone(), GlobalDiffeo::cubic());
    assert_eq!(trace_quadrature(&moved, &cfg).unwrap().value, 0.0);
    let zero = NumericCrossed::term(NFun::Const(0.0), GlobalDiffeo::identity());
    assert_eq!(trace_quadrature(&zero, &cfg).unwrap().value, 0.0);

    let wide = NFun::smooth(SmoothFn::bump_times(SupportBox::new(-9.0, 0.0, 0.5, 1.0), &[(0, 0, 1.0)]));
    let err = trace_quadrature(&NumericCrossed::term(wide, GlobalDiffeo::identity()), &cfg).unwrap_err();
    assert_eq!(err, Error::SupportEscapesBox);
}

#[test]
fn trace_identities() {
    let cfg = NumericConfig::default();
    for seed in [0, 1] {
        let reports = verify_trace_identities(seed, 1e-6, &cfg).unwrap();
        assert_eq!(reports.len(), 4 + 2 * (1 + 4 + 4));
        for r in &reports {
            assert!(r.pass, "{r:?}");
        }
    }
}

#[test]
fn chi_tau_examples() {
    let cfg = NumericConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let [b0, b1, b2] = test_boxes();
    let f0 = random_test_function(&mut rng, b0);
    let f1 = random_test_function(&mut rng, b1);
    let f2 = random_test_function(&mut rng, b2);
    let d1 = TensorCochain::from_element(&HopfElement::gen(1, Gen::d(1)));

    let phi = GlobalDiffeo::cubic();
    let a0 = NumericCrossed::term(f0.clone(), phi.clone());
    let a1 = NumericCrossed::term(f1.clone(), phi.inverse());
    let chi = chi_tau(&d1, &[a0.clone(), a1.clone()], &cfg).unwrap();

    // Direct oracle: −∫∫ f⁰ (f¹ ∘ φ̃) · y (log φ′)′ dx dy / y², with the
    // minus sign coming from γ₁(φ⁻¹) ∘ φ̃ = −γ₁(φ).
    let n = 200;
    let (mut direct, mut l1) = (0.0, 0.0);
    for i in 0..n {
        let x = b0.x0 + (b0.x1 - b0.x0) * (i as f64 + 0.5) / n as f64;
        for j in 0..n {
            let y = b0.y0 + (b0.y1 - b0.y0) * (j as f64 + 0.5) / n as f64;
            let v = f0.eval(x, y) * f1.eval(x + x * x * x, (1.0 + 3.0 * x * x) * y) * y * cubic_logder(x) / (y * y);
            direct -= v;
            l1 += v.abs();
        }
    }
    let cell = (b0.x1 - b0.x0) * (b0.y1 - b0.y0) / (n * n) as f64;
    direct *= cell;
    l1 *= cell;
    assert!(l1 > 1e-3);
    assert!((chi.value - direct).abs() < 1e-6 * l1, "{} vs {}", chi.value, direct);

    let aff = GlobalDiffeo::by_name("affine").unwrap();
    let z = chi_tau(
        &d1,
        &[NumericCrossed::term(f0.clone(), aff.clone()), NumericCrossed::term(f1.clone(), aff.inverse())],
        &cfg,
    )
    .unwrap();
    assert!(z.value.abs() < 1e-14);

    // b(χ)(a⁰, a¹, a²) = χ(a⁰a¹, a²) − χ(a⁰, a¹a²) + χ(a²a⁰, a¹) with φ₂φ₁φ₀ = id.
    let p0 = GlobalDiffeo::cubic();
    let p1 = aff.clone();
    let p2 = p0.then(&p1).inverse();
    let a0 = NumericCrossed::term(f0, p0);
    let a1 = NumericCrossed::term(f1, p1);
    let a2 = NumericCrossed::term(f2, p2);
    let chi2 = |u: NumericCrossed, v: NumericCrossed| chi_tau(&d1, &[u, v], &cfg).unwrap();
    let t1 = chi2(a0.mul(&a1), a2.clone());
    let t2 = chi2(a0.clone(), a1.mul(&a2));
    let t3 = chi2(a2.mul(&a0), a1.clone());
    let scale = t1.l1.max(t2.l1).max(t3.l1);
    assert!(t1.value.abs() > 1e-4 * scale);
    assert!((t1.value - t2.value + t3.value).abs() < 1e-6 * scale);
}

#[test]
fn gv_pullback_samples() {
    let phi = GlobalDiffeo::cubic();
    let mut samples = vec![(0.5, 0.3, 1.2)];
    for i in 0..9 {
        let s = i as f64;
        samples.push((0.1 * s, -1.5 + 0.37 * s, 0.4 + 0.21 * s));
    }
    let reports = gv_pullback_check(&phi, &samples, 1e-10);
    assert_eq!(reports.len(), 10);
    for (r, &(_, x, y)) in reports.iter().zip(&samples) {
        assert!(r.pass, "{r:?}");
        assert!((r.lhs + cubic_logder(x) / y).abs() < 1e-10);
    }
    let aff = GlobalDiffeo::by_name("affine").unwrap();
    for r in gv_pullback_check(&aff, &samples, 1e-10) {
        assert_eq!(r.lhs, 0.0);
        assert_eq!(r.rhs, 0.0);
    }
    assert_eq!(gv_form().terms.len(), 1);
    assert!(gv_pullback(&phi).eval(&[0.5, 0.0, 1.0]).abs() < 1e-15);
}

#[test]
fn gv_pairing_reproduces_chi() {
    let cfg = NumericConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let [b0, b1, _] = test_boxes();
    let f0 = random_test_function(&mut rng, b0);
    let f1 = random_test_function(&mut rng, b1);
    for phi in [GlobalDiffeo::cubic(), GlobalDiffeo::by_name("poly:0.1,1,0,0.5,0,0.2").unwrap()] {
        let r = gv_pairing_check(&phi, &f0, &f1, &cfg, 1e-6).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.lhs.abs() > 1e-4);
    }
}
