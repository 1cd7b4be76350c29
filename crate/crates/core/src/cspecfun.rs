//! Error function and Faddeeva function of a complex argument.
//!
//! The Faddeeva function w(z) = e^{-z^2} erfc(-iz) is the numerically stable
//! core: it is bounded on the closed upper half-plane, so erf and erfc of any
//! complex argument can be assembled from it without overflowing exponentials.
//! Target accuracy is 1e-12 relative for |z| <= 8 (validated against
//! independent series and quadrature oracles in the test suite).

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// 2/sqrt(pi)
const TWO_OVER_SQRT_PI: f64 = 1.1283791670955126;
/// 1/sqrt(pi)
const FRAC_1_SQRT_PI: f64 = 0.5641895835477563;

/// Step of the midpoint-rule evaluation of w(z). The quadrature error of the
/// rule scales like e^{-pi^2/H^2} ~ 5e-20, far below the accuracy budget.
const H: f64 = 0.4717;
/// Node range: e^{-t^2} at |t| = N0*H underflows the budget entirely.
const N0: i64 = 17;
/// Inside this |u| the nearest-node term and the pole correction are combined
/// analytically (u is the node offset scaled by 2*pi/H).
const NEAR_NODE_U: f64 = 0.15;

fn is_finite(z: C64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// w(z) on the closed upper half-plane via the pole-corrected midpoint rule:
///
///   w(z) = (iH/pi) sum_n e^{-t_n^2}/(z - t_n) + 2 e^{-z^2} q/(1+q),
///
/// with t_n = (n+1/2)H and q = e^{2 pi i z / H}. Within `NEAR_NODE_U` of a
/// node the singular pair (nearest sum term, pole of the correction) cancels
/// and is evaluated through its removable form.
fn w_midpoint(z: C64) -> C64 {
    let m = (z.re / H - 0.5).round() as i64;
    let tm = (m as f64 + 0.5) * H;
    let u = (z - tm) * (2.0 * std::f64::consts::PI / H);
    let near = u.norm() < NEAR_NODE_U && (-N0..N0).contains(&m);

    let mut sum = C64::new(0.0, 0.0);
    for n in -N0..N0 {
        if near && n == m {
            continue;
        }
        let t = (n as f64 + 0.5) * H;
        sum += (-t * t).exp() / (z - t);
    }
    sum *= C64::new(0.0, H / std::f64::consts::PI);

    let ez2 = (-z * z).exp();
    if !near {
        let q = (C64::new(0.0, 2.0 * std::f64::consts::PI / H) * z).exp();
        return sum + 2.0 * ez2 * q / (1.0 + q);
    }

    // q/(1+q) = 1/(1 - e^{-iu}) = 1/(iu) + 1/2 + iu/12 - (iu)^3/720 + ...
    // The 1/(iu) pole cancels against the omitted node term; what is left is
    // the Bernoulli tail plus the removable difference quotient.
    let x = C64::new(0.0, 1.0) * u;
    let x2 = x * x;
    let phi = 0.5 + x * (1.0 / 12.0 + x2 * (-1.0 / 720.0 + x2 * (1.0 / 30240.0 + x2 * (-1.0 / 1209600.0))));
    let dz2 = (z - tm) * (z + tm);
    let ratio = if dz2.norm() > 1e-3 {
        (dz2.exp() - 1.0) / dz2
    } else {
        1.0 + dz2 / 2.0 * (1.0 + dz2 / 3.0 * (1.0 + dz2 / 4.0 * (1.0 + dz2 / 5.0)))
    };
    let paired = C64::new(0.0, H / (2.0 * std::f64::consts::PI)) * (z + tm) * ratio + phi;
    sum + 2.0 * ez2 * paired
}

/// w(z) for large |z| or large Im z by the downward Laplace continued
/// fraction w(z) = (i/sqrt(pi)) / (z - (1/2)/(z - 1/(z - (3/2)/(...)))).
fn w_contfrac(z: C64) -> C64 {
    let mut f = z;
    let mut k = 32;
    while k >= 1 {
        f = z - (k as f64 / 2.0) / f;
        k -= 1;
    }
    C64::new(0.0, FRAC_1_SQRT_PI) / f
}

/// w(z) for Im z >= 0.
fn w_upper(z: C64) -> C64 {
    if z.im > 6.0 || z.norm_sqr() >= 144.0 {
        w_contfrac(z)
    } else {
        w_midpoint(z)
    }
}

/// Faddeeva function w(z) = e^{-z^2} erfc(-iz).
///
/// Evaluated directly on the upper half-plane; the lower half-plane goes
/// through the reflection w(-z) = 2 e^{-z^2} - w(z), where the exponential
/// growth is genuine. Finite non-NaN input required.
pub fn faddeeva_w(z: C64) -> Result<C64> {
    if z.re.is_nan() || z.im.is_nan() {
        return Err(Error::Domain(format!("faddeeva_w: NaN argument {z}")));
    }
    if !is_finite(z) {
        return Err(Error::Domain(format!("faddeeva_w: non-finite argument {z}")));
    }
    if z.im >= 0.0 {
        Ok(w_upper(z))
    } else {
        Ok(2.0 * (-z * z).exp() - w_upper(-z))
    }
}

/// Maclaurin series of erf, accurate for small |z| where the terms decay
/// immediately and no cancellation occurs.
fn erf_series(z: C64) -> C64 {
    let mz2 = -z * z;
    let mut term = z;
    let mut sum = C64::new(0.0, 0.0);
    for n in 0..40u32 {
        let contrib = term / (2 * n + 1) as f64;
        sum += contrib;
        if contrib.norm() < 1e-18 * sum.norm().max(1e-300) {
            break;
        }
        term = term * mz2 / (n + 1) as f64;
    }
    sum * TWO_OVER_SQRT_PI
}

/// Error function of a complex argument,
/// erf(z) = (2/sqrt(pi)) int_0^z e^{-s^2} ds.
///
/// Small arguments use the Maclaurin series; elsewhere the half-plane with
/// Re z >= 0 is evaluated as 1 - e^{-z^2} w(iz) (so the Faddeeva argument
/// stays in the upper half-plane) and Re z < 0 follows by odd symmetry.
pub fn erf_complex(z: C64) -> Result<C64> {
    if z.re.is_nan() || z.im.is_nan() {
        return Err(Error::Domain(format!("erf_complex: NaN argument {z}")));
    }
    if !is_finite(z) {
        return Err(Error::Domain(format!("erf_complex: non-finite argument {z}")));
    }
    if z.norm_sqr() <= 0.25 {
        return Ok(erf_series(z));
    }
    if z.re >= 0.0 {
        let iz = C64::new(-z.im, z.re);
        Ok(1.0 - (-z * z).exp() * w_upper(iz))
    } else {
        Ok(-(erf_complex(-z)?))
    }
}

/// Complementary error function erfc(z) = 1 - erf(z), evaluated through the
/// Faddeeva function so that the decaying half-plane keeps full relative
/// accuracy (erfc(z) = e^{-z^2} w(iz) for Re z >= 0).
pub fn erfc_complex(z: C64) -> Result<C64> {
    if z.re.is_nan() || z.im.is_nan() {
        return Err(Error::Domain(format!("erfc_complex: NaN argument {z}")));
    }
    if !is_finite(z) {
        return Err(Error::Domain(format!("erfc_complex: non-finite argument {z}")));
    }
    if z.re >= 0.0 {
        let iz = C64::new(-z.im, z.re);
        Ok((-z * z).exp() * w_upper(iz))
    } else {
        Ok(2.0 - erfc_complex(-z)?)
    }
}
