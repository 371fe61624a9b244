//! Elliptic kernel checked against direct quadrature of the defining
//! integrals, which shares no code with the AGM/Landen routines.

use longwave_core::analytic::{cnoidal_ode_residual, CnoidalSpec, SolitarySpec};
use longwave_core::elliptic::{complete_k, jacobi_cn_sn_dn, EllipticParameter};
use std::f64::consts::FRAC_PI_2;

/// Gauss–Legendre nodes and weights on [−1, 1], by Newton on P_n.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (1..=n)
        .map(|i| {
            let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// Composite 16-point Gauss–Legendre rule on 400 panels.
fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let rule = gauss_legendre(16);
    let panels = 400;
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for i in 0..panels {
        let mid = a + (i as f64 + 0.5) * h;
        total += rule.iter().map(|&(x, w)| w * f(mid + 0.5 * h * x)).sum::<f64>() * 0.5 * h;
    }
    total
}

fn k_oracle(m: f64) -> f64 {
    integrate(&|t: f64| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt(), 0.0, FRAC_PI_2)
}

/// Amplitude φ with F(φ|m) = u, by bracketed Newton on the quadrature of
/// F. Since F(φ) ≥ φ for φ ≥ 0, the root lies between 0 and u.
fn amplitude_oracle(u: f64, m: f64) -> f64 {
    let integrand = |t: f64| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt();
    let (sign, u) = (u.signum(), u.abs());
    let (mut lo, mut hi) = (0.0, u);
    let mut phi = 0.5 * u;
    for _ in 0..200 {
        let f = integrate(&integrand, 0.0, phi) - u;
        if f > 0.0 {
            hi = phi;
        } else {
            lo = phi;
        }
        let newton = phi - f / integrand(phi);
        let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - phi).abs() < 1e-15 {
            phi = next;
            break;
        }
        phi = next;
    }
    sign * phi
}

fn p(m: f64) -> EllipticParameter {
    EllipticParameter::new(m).unwrap()
}

#[test]
fn complete_k_matches_quadrature() {
    for &m in &[0.0, 0.1, 0.5, 0.7, 0.9, 0.99, 0.999] {
        let q = k_oracle(m);
        let k = complete_k(p(m)).unwrap();
        assert!((k - q).abs() <= 1e-13 * q, "m = {m}: agm {k} vs quadrature {q}");
    }
    assert!((k_oracle(0.5) - 1.854_074_677_301_372).abs() < 1e-13);
}

#[test]
fn jacobi_matches_amplitude_inversion() {
    for &m in &[0.05, 0.5, 0.7, 0.9, 0.999, 0.999_999] {
        for &u in &[0.1, 0.75, 1.3, 2.2, -1.7] {
            let phi = amplitude_oracle(u, m);
            let (cn, sn, dn) = jacobi_cn_sn_dn(u, p(m)).unwrap();
            assert!((cn - phi.cos()).abs() < 1e-12, "cn m={m} u={u}: {cn} vs {}", phi.cos());
            assert!((sn - phi.sin()).abs() < 1e-12, "sn m={m} u={u}");
            let dn_q = (1.0 - m * phi.sin().powi(2)).sqrt();
            assert!((dn - dn_q).abs() < 1e-12, "dn m={m} u={u}");
        }
    }
}

#[test]
fn cn_vanishes_at_quarter_period() {
    let k = k_oracle(0.7);
    let (cn, sn, _) = jacobi_cn_sn_dn(k, p(0.7)).unwrap();
    assert!(cn.abs() < 1e-12);
    assert!((sn - 1.0).abs() < 1e-12);
}

#[test]
fn complete_k_near_one_agrees_with_quadrature() {
    let q = k_oracle(0.99);
    let k = complete_k(p(0.99)).unwrap();
    assert!((k - q).abs() <= 1e-12 * q);
}

#[test]
fn cnoidal_wavelength_uses_quadrature_k() {
    let c = CnoidalSpec::with_sigma(0.1, 0.1, 1.0 / 3.0, 1.0, 9.81).unwrap();
    let expect = 4.0 * k_oracle(0.5) * (1.0_f64 / 3.0 / 0.2).sqrt();
    assert!((c.wavelength() - expect).abs() < 1e-11);
    assert!((c.wavelength() - 9.574_400_463_750_805).abs() < 1e-11);
}

#[test]
fn cnoidal_residual_fixes_parameter_convention() {
    // The residual vanishes only when the cn parameter is l/(l+k); with
    // the squared value it does not.
    let (k, l, sigma) = (0.1, 0.1, 1.0 / 3.0);
    let spec = CnoidalSpec::with_sigma(k, l, sigma, 1.0, 9.81).unwrap();
    let beta = spec.beta();
    let wrong = p((l / (l + k)).powi(2));
    let mut worst_wrong: f64 = 0.0;
    for i in 0..100 {
        let xi = 0.097 * i as f64;
        assert!(cnoidal_ode_residual(&spec, xi).abs() <= 1e-10);
        let (cn, sn, dn) = jacobi_cn_sn_dn(beta * xi, wrong).unwrap();
        let h = l * cn * cn;
        let dh = -2.0 * l * beta * cn * sn * dn;
        let r = (dh * dh - (h + k) * h * (l - h) / sigma) / ((l + k).powi(3) / sigma);
        worst_wrong = worst_wrong.max(r.abs());
    }
    assert!(worst_wrong > 1e-4);
}

#[test]
fn cnoidal_solitary_limit_pointwise() {
    let (l, sigma) = (0.2, 1.0 / 3.0);
    let cn = CnoidalSpec::with_sigma(1e-12 * l, l, sigma, 1.0, 9.81).unwrap();
    let sol = SolitarySpec::with_sigma(l, sigma, 1.0, 9.81).unwrap();
    for i in 0..400 {
        let xi = -30.0 + 0.15 * i as f64;
        assert!((cn.profile(xi) - sol.profile(xi)).abs() < 1e-8, "xi = {xi}");
    }
}

#[test]
fn cnoidal_sinusoidal_limit_pointwise() {
    let (l, sigma) = (1e-7, 1.0 / 3.0);
    let k = 0.1;
    let cn = CnoidalSpec::with_sigma(k, l, sigma, 1.0, 9.81).unwrap();
    let beta = cn.beta();
    for i in 0..200 {
        let xi = 0.1 * i as f64;
        let cosine = l * (beta * xi).cos().powi(2);
        assert!((cn.profile(xi) - cosine).abs() < 1e-8);
    }
    // Residual of the cosine formula itself at m = 1e-6.
    let (k, l) = (1.0, 1e-6 / (1.0 - 1e-6));
    let spec = CnoidalSpec::with_sigma(k, l, sigma, 1.0, 9.81).unwrap();
    let beta = spec.beta();
    for i in 0..100 {
        let xi = 0.05 * i as f64;
        let (c, s) = ((beta * xi).cos(), (beta * xi).sin());
        let h = l * c * c;
        let dh = -2.0 * l * beta * c * s;
        let r = (dh * dh - (h + k) * h * (l - h) / sigma) / ((l + k).powi(3) / sigma);
        assert!(r.abs() <= 1e-8);
    }
}
