//! Shared test oracles, independent of the library's evaluation paths:
//! a fixed-point big-integer Maclaurin series for erf, Gauss-Legendre
//! quadrature of the defining Faddeeva integral, and a finite-part Volterra
//! quadrature for the memory-kernel equation.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_complex::Complex64 as C64;
use num_traits::ToPrimitive;

/// Binary scale of the fixed-point numbers: plenty of headroom below the
/// ~1e10 peak term size of the erf series at |z| = 5.
const SHIFT: i64 = 360;

/// Fixed-point real number value = v / 2^SHIFT.
#[derive(Clone)]
pub struct Fx(BigInt);

impl Fx {
    pub fn zero() -> Self {
        Fx(BigInt::from(0))
    }

    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite());
        let bits = x.to_bits();
        let neg = bits >> 63 == 1;
        let exp_bits = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if exp_bits == 0 {
            (frac, -1074i64)
        } else {
            (frac | (1u64 << 52), exp_bits - 1075)
        };
        let mut v = BigInt::from(mant);
        let sh = SHIFT + exp;
        if sh >= 0 {
            v <<= sh as usize;
        } else {
            v >>= (-sh) as usize;
        }
        Fx(if neg { -v } else { v })
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().expect("fixed-point value in f64 range") * 2f64.powi(-(SHIFT as i32))
    }

    pub fn add(&self, o: &Fx) -> Fx {
        Fx(&self.0 + &o.0)
    }

    pub fn sub(&self, o: &Fx) -> Fx {
        Fx(&self.0 - &o.0)
    }

    pub fn neg(&self) -> Fx {
        Fx(-&self.0)
    }

    pub fn mul(&self, o: &Fx) -> Fx {
        Fx((&self.0 * &o.0) >> SHIFT as usize)
    }

    pub fn div_int(&self, d: i64) -> Fx {
        Fx(&self.0 / BigInt::from(d))
    }
}

/// Fixed-point complex number.
#[derive(Clone)]
pub struct FxC {
    pub re: Fx,
    pub im: Fx,
}

impl FxC {
    pub fn zero() -> Self {
        FxC { re: Fx::zero(), im: Fx::zero() }
    }

    pub fn from_c64(z: C64) -> Self {
        FxC { re: Fx::from_f64(z.re), im: Fx::from_f64(z.im) }
    }

    pub fn to_c64(&self) -> C64 {
        C64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn add(&self, o: &FxC) -> FxC {
        FxC { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn mul(&self, o: &FxC) -> FxC {
        FxC {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn neg(&self) -> FxC {
        FxC { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn div_int(&self, d: i64) -> FxC {
        FxC { re: self.re.div_int(d), im: self.im.div_int(d) }
    }
}

/// Maclaurin-series erf oracle, summed in ~108-digit fixed point:
/// erf(z) = (2/sqrt(pi)) sum_n (-1)^n z^{2n+1} / (n! (2n+1)).
/// 170 terms push the truncation error below 1e-30 for |z| <= 5.
pub fn erf_series_oracle(z: C64) -> C64 {
    let zf = FxC::from_c64(z);
    let z2 = zf.mul(&zf);
    let mut u = zf; // (-1)^n z^(2n+1) / n!
    let mut sum = FxC::zero();
    for n in 0..170i64 {
        sum = sum.add(&u.div_int(2 * n + 1));
        u = u.mul(&z2).div_int(n + 1).neg();
    }
    sum.to_c64() * 1.1283791670955126
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for k in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = x;
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[k] = -x;
        nodes[n - 1 - k] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[k] = w;
        weights[n - 1 - k] = w;
    }
    (nodes, weights)
}

/// Composite Gauss-Legendre integral of a complex-valued function.
pub fn integrate_gl<F: Fn(f64) -> C64>(f: F, a: f64, b: f64, panels: usize, order: usize) -> C64 {
    let (xs, ws) = gauss_legendre(order);
    let mut total = C64::new(0.0, 0.0);
    let h = (b - a) / panels as f64;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + h / 2.0;
        let half = h / 2.0;
        for (x, w) in xs.iter().zip(&ws) {
            total += f(mid + half * x) * (w * half);
        }
    }
    total
}

/// Quadrature oracle for the Faddeeva function on the open upper half-plane:
/// w(z) = (i/pi) int e^{-t^2}/(z - t) dt.
pub fn faddeeva_quadrature_oracle(z: C64) -> C64 {
    assert!(z.im > 0.1, "quadrature oracle needs the pole well off the contour");
    let f = |t: f64| C64::new((-t * t).exp(), 0.0) / (z - t);
    integrate_gl(f, -8.0, 8.0, 120, 32) * C64::new(0.0, 1.0 / std::f64::consts::PI)
}

/// Relative residual of the memory-kernel equation
/// dc/dt = -int_0^t K(t-s) c(s) ds at time t, with
/// K(s) = -a e^{i(d s + pi/4)} s^{-3/2} taken as a finite part.
///
/// The singular integral is regularized by subtracting the first two Taylor
/// terms of psi(s) = -a e^{i pi/4} e^{i d s} c(t-s):
///   FP int s^{-3/2} psi ds = int s^{-3/2}[psi - psi0 - s psi0'] ds
///                            - 2 psi0 / sqrt(t) + 2 psi0' sqrt(t),
/// and the remaining integrand is analytic in u = sqrt(s).
pub fn volterra_residual(t: f64, d: f64, coupling: f64) -> f64 {
    use pbg_dynamics::amplitude::{amplitude_c, ReservoirParams};
    let params = ReservoirParams::dimensionless(d).unwrap();
    let c = |tt: f64| amplitude_c(tt, &params).unwrap();

    let h = 1e-4;
    let dcdt = (c(t + h) - c(t - h)) / (2.0 * h);

    let pref = -coupling * C64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    let psi = |s: f64| pref * C64::new(0.0, d * s).exp() * c(t - s);
    let psi0 = pref * c(t);
    let psi0p = pref * (C64::new(0.0, d) * c(t) - dcdt);

    let reg = |u: f64| {
        let s = u * u;
        if u < 1e-8 {
            return C64::new(0.0, 0.0);
        }
        (psi(s) - psi0 - s * psi0p) * (2.0 / (u * u))
    };
    let integral = integrate_gl(reg, 0.0, t.sqrt(), 48, 32);
    let fp = integral + psi0 * (-2.0 / t.sqrt()) + psi0p * (2.0 * t.sqrt());

    (dcdt + fp).norm() / dcdt.norm()
}
