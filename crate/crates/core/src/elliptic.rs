//! Complete elliptic integral of the first kind and the Jacobi elliptic
//! functions, both in the parameter convention: the second argument is
//! m = κ², the square of the modulus.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Elliptic parameter m = κ², restricted to [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EllipticParameter(f64);

impl EllipticParameter {
    pub fn new(m: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&m) {
            Ok(Self(m))
        } else {
            Err(Error::Domain(format!("elliptic parameter m = {m} outside [0, 1]")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Complementary parameter 1 − m.
    pub fn complement(self) -> f64 {
        1.0 - self.0
    }
}

const AGM_TOL: f64 = 2.0 * f64::EPSILON;
const MAX_AGM_STEPS: usize = 40;

/// K(m) = ∫₀^{π/2} (1 − m sin²θ)^(−½) dθ via the arithmetic–geometric mean.
pub fn complete_k(m: EllipticParameter) -> Result<f64> {
    let m = m.value();
    if m >= 1.0 {
        return Err(Error::Domain(format!("K(m) diverges at m = {m}")));
    }
    let (mut a, mut b) = (1.0_f64, (1.0 - m).sqrt());
    for _ in 0..MAX_AGM_STEPS {
        if (a - b).abs() <= AGM_TOL * a {
            break;
        }
        let next_a = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next_a;
    }
    Ok(FRAC_PI_2 / a)
}

/// Jacobi (cn, sn, dn) of (u | m).
///
/// Uses the descending Landen sequence of the AGM for m < 1 after reducing
/// u modulo the real period 4K(m); m = 1 is the exact hyperbolic limit
/// cn = dn = sech u, sn = tanh u.
pub fn jacobi_cn_sn_dn(u: f64, m: EllipticParameter) -> Result<(f64, f64, f64)> {
    if !u.is_finite() {
        return Err(Error::Domain(format!("jacobi functions need finite u, got {u}")));
    }
    let mv = m.value();
    if mv == 1.0 {
        let s = sech(u);
        return Ok((s, u.tanh(), s));
    }
    if mv == 0.0 {
        return Ok((u.cos(), u.sin(), 1.0));
    }

    let period = 4.0 * complete_k(m)?;
    // Keep the reduced argument in [−2K, 2K) so |φ_N| stays small.
    let u = u - period * (u / period).round();

    let mut a = [0.0_f64; MAX_AGM_STEPS + 1];
    let mut c = [0.0_f64; MAX_AGM_STEPS + 1];
    a[0] = 1.0;
    c[0] = mv.sqrt();
    let mut b = (1.0 - mv).sqrt();
    let mut n = 0;
    while c[n].abs() > AGM_TOL * a[n] && n < MAX_AGM_STEPS {
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = (a[n] * b).sqrt();
        n += 1;
    }

    let mut phi = (1u64 << n) as f64 * a[n] * u;
    let mut phi_prev = phi;
    for i in (1..=n).rev() {
        phi_prev = phi;
        phi = 0.5 * (phi + (c[i] / a[i] * phi.sin()).asin());
    }
    let (sn, cn) = phi.sin_cos();
    let dn = if n == 0 {
        1.0
    } else {
        cn / (phi_prev - phi).cos()
    };
    Ok((cn, sn, dn))
}

pub fn sech(u: f64) -> f64 {
    let e = (-u.abs()).exp();
    2.0 * e / (1.0 + e * e)
}

/// sech²(u), evaluated as 4e^{−2|u|}/(1 + e^{−2|u|})² so it cannot overflow.
pub fn sech_sq(u: f64) -> f64 {
    let e = (-2.0 * u.abs()).exp();
    4.0 * e / ((1.0 + e) * (1.0 + e))
}
