//! Qubit density matrices, the amplitude-damping map induced by c(t),
//! Wootters concurrence, and finite-time disentanglement searches.
//!
//! Basis conventions, fixed globally: single qubit {e, g} (excited first),
//! two qubits {ee, eg, ge, gg} (first label = qubit A). All matrix literals
//! and the spin-flip construction below follow this ordering.

use nalgebra::{Matrix2, Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64 as C64;

use crate::amplitude::{steady_amplitude, ReservoirParams};
use crate::error::{Error, Result};

const HERM_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-8;
/// Slack on |c| <= 1 before an amplitude is rejected as unphysical.
const AMP_SLACK: f64 = 1e-6;

fn cr(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// 2x2 density matrix over {e, g}.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleQubitDensity(Matrix2<C64>);

/// 4x4 density matrix over {ee, eg, ge, gg}.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitDensity(Matrix4<C64>);

fn check_density<const N: usize>(
    m: &nalgebra::SMatrix<C64, N, N>,
    what: &str,
) -> Result<()> {
    let mut trace = C64::new(0.0, 0.0);
    for i in 0..N {
        trace += m[(i, i)];
        for j in 0..N {
            if !(m[(i, j)].re.is_finite() && m[(i, j)].im.is_finite()) {
                return Err(Error::InvalidParam(format!("{what}: non-finite entry")));
            }
            if (m[(i, j)] - m[(j, i)].conj()).norm() > HERM_TOL {
                return Err(Error::InvalidParam(format!(
                    "{what}: not Hermitian at ({i},{j})"
                )));
            }
        }
    }
    if (trace - cr(1.0)).norm() > TRACE_TOL {
        return Err(Error::InvalidParam(format!("{what}: trace = {trace}, expected 1")));
    }
    Ok(())
}

impl SingleQubitDensity {
    pub fn new(m: Matrix2<C64>) -> Result<Self> {
        check_density(&m, "SingleQubitDensity")?;
        let eig = SymmetricEigen::new(m);
        if eig.eigenvalues.iter().any(|&l| l < -PSD_TOL) {
            return Err(Error::InvalidParam(format!(
                "SingleQubitDensity: negative eigenvalue {:?}",
                eig.eigenvalues.as_slice()
            )));
        }
        Ok(Self(m))
    }

    /// Pure excited state |e><e|.
    pub fn excited() -> Self {
        Self(Matrix2::new(cr(1.0), cr(0.0), cr(0.0), cr(0.0)))
    }

    pub fn matrix(&self) -> &Matrix2<C64> {
        &self.0
    }

    pub fn eigenvalues(&self) -> [f64; 2] {
        let e = SymmetricEigen::new(self.0).eigenvalues;
        [e[0], e[1]]
    }
}

impl TwoQubitDensity {
    pub fn new(m: Matrix4<C64>) -> Result<Self> {
        check_density(&m, "TwoQubitDensity")?;
        let eig = SymmetricEigen::new(m);
        if eig.eigenvalues.iter().any(|&l| l < -PSD_TOL) {
            return Err(Error::InvalidParam(format!(
                "TwoQubitDensity: negative eigenvalue {:?}",
                eig.eigenvalues.as_slice()
            )));
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.0
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        let e = SymmetricEigen::new(self.0).eigenvalues;
        [e[0], e[1], e[2], e[3]]
    }
}

/// The two pure entangled families evolved in this model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellFamily {
    /// beta |ge> + gamma |eg> (one shared excitation, odd parity)
    PhiOdd,
    /// beta |gg> + gamma |ee> (zero or double excitation, even parity)
    PsiEven,
}

/// Initial state beta |..> + gamma |..> with real beta and
/// gamma = sqrt(1 - beta^2) e^{i phi}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialBellState {
    pub family: BellFamily,
    pub beta: f64,
    pub phi: f64,
}

impl InitialBellState {
    pub fn new(family: BellFamily, beta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&beta) || !beta.is_finite() {
            return Err(Error::InvalidParam(format!("beta must lie in [0,1], got {beta}")));
        }
        if !phi.is_finite() {
            return Err(Error::InvalidParam(format!("phi must be finite, got {phi}")));
        }
        Ok(Self { family, beta, phi })
    }

    pub fn gamma(&self) -> C64 {
        C64::from_polar((1.0 - self.beta * self.beta).max(0.0).sqrt(), self.phi)
    }

    /// State vector in the {ee, eg, ge, gg} basis.
    pub fn state_vector(&self) -> Vector4<C64> {
        let b = cr(self.beta);
        let g = self.gamma();
        let z = cr(0.0);
        match self.family {
            BellFamily::PhiOdd => Vector4::new(z, g, b, z),
            BellFamily::PsiEven => Vector4::new(g, z, z, b),
        }
    }

    pub fn density(&self) -> TwoQubitDensity {
        let v = self.state_vector();
        TwoQubitDensity(v * v.adjoint())
    }
}

fn kraus_pair(c: C64) -> Result<[Matrix2<C64>; 2]> {
    if !(c.re.is_finite() && c.im.is_finite()) {
        return Err(Error::Domain(format!("amplitude must be finite, got {c}")));
    }
    let n = c.norm();
    if n > 1.0 + AMP_SLACK {
        return Err(Error::Domain(format!(
            "amplitude |c| = {n} exceeds 1 + {AMP_SLACK}; upstream approximation broke down"
        )));
    }
    let loss = (1.0 - n * n).max(0.0).sqrt();
    Ok([
        Matrix2::new(c, cr(0.0), cr(0.0), cr(1.0)),
        Matrix2::new(cr(0.0), cr(0.0), cr(loss), cr(0.0)),
    ])
}

/// Single-qubit amplitude map: rho_ee -> |c|^2 rho_ee, rho_eg -> c rho_eg,
/// the lost population landing on |g><g|. Trace-preserving and completely
/// positive for |c| <= 1 (Kraus construction).
pub fn single_qubit_evolve(rho0: &SingleQubitDensity, c: C64) -> Result<SingleQubitDensity> {
    let ks = kraus_pair(c)?;
    let m = rho0.matrix();
    let mut out = Matrix2::zeros();
    for k in &ks {
        out += k * m * k.adjoint();
    }
    Ok(SingleQubitDensity(out))
}

/// Product channel on two independent qubits with amplitudes `ca`, `cb`.
pub fn two_qubit_evolve(
    initial: &InitialBellState,
    ca: C64,
    cb: C64,
) -> Result<TwoQubitDensity> {
    let rho0 = initial.density();
    apply_product_channel(&rho0, ca, cb)
}

/// The same product channel applied to an arbitrary two-qubit state.
pub fn apply_product_channel(
    rho: &TwoQubitDensity,
    ca: C64,
    cb: C64,
) -> Result<TwoQubitDensity> {
    let ka = kraus_pair(ca)?;
    let kb = kraus_pair(cb)?;
    let m = rho.matrix();
    let mut out = Matrix4::zeros();
    for a in &ka {
        for b in &kb {
            let k = a.kronecker(b);
            out += k * m * k.adjoint();
        }
    }
    Ok(TwoQubitDensity(out))
}

/// sigma_y (x) sigma_y in the {ee, eg, ge, gg} basis: antidiagonal
/// (-1, +1, +1, -1).
fn spin_flip_matrix() -> Matrix4<C64> {
    let z = cr(0.0);
    Matrix4::new(
        z, z, z, cr(-1.0),
        z, z, cr(1.0), z,
        z, cr(1.0), z, z,
        cr(-1.0), z, z, z,
    )
}

/// Wootters concurrence C(rho) = max{0, l1 - l2 - l3 - l4}, where l_i are
/// the decreasing square roots of the eigenvalues of
/// rho (sy x sy) rho* (sy x sy).
///
/// Factoring rho = A A^dagger turns those eigenvalues into the squared
/// singular values of the complex-symmetric matrix S = A^T (sy x sy) A, so
/// the l_i come out of one SVD with absolute (not square-root-amplified)
/// rounding error.
pub fn wootters_concurrence(rho: &TwoQubitDensity) -> Result<f64> {
    let m = rho.matrix();
    let eig = SymmetricEigen::new(*m);
    let mut a = Matrix4::zeros();
    for k in 0..4 {
        let l = eig.eigenvalues[k].max(0.0).sqrt();
        let v = eig.eigenvectors.column(k);
        a.column_mut(k).copy_from(&(v * cr(l)));
    }
    let s = a.transpose() * spin_flip_matrix() * a;
    let svd = nalgebra::SVD::new(s, false, false);
    let mut ls: Vec<f64> = svd.singular_values.iter().copied().collect();
    ls.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok((ls[0] - ls[1] - ls[2] - ls[3]).max(0.0).min(1.0))
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) || !v.is_finite() {
        return Err(Error::InvalidParam(format!("{name} must lie in [0,1], got {v}")));
    }
    Ok(())
}

/// Closed-form concurrence of the evolved odd-parity family:
/// C_phi = max{0, 2 sqrt(1-beta^2) beta |c|^2}.
pub fn concurrence_phi(beta: f64, c_abs_sq: f64) -> Result<f64> {
    check_unit("beta", beta)?;
    check_unit("c_abs_sq", c_abs_sq)?;
    Ok((2.0 * (1.0 - beta * beta).sqrt() * beta * c_abs_sq).max(0.0))
}

/// Closed-form concurrence of the evolved even-parity family:
/// C_psi = max{0, 2 sqrt(1-beta^2) |c|^2 [beta - sqrt(1-beta^2)(1-|c|^2)]}.
pub fn concurrence_psi(beta: f64, c_abs_sq: f64) -> Result<f64> {
    check_unit("beta", beta)?;
    check_unit("c_abs_sq", c_abs_sq)?;
    let g = (1.0 - beta * beta).sqrt();
    Ok((2.0 * g * c_abs_sq * (beta - g * (1.0 - c_abs_sq))).max(0.0))
}

/// Concurrence of `initial` after both qubits evolve with amplitude modulus
/// squared `c_abs_sq`, via the closed forms above.
pub fn concurrence_closed_form(initial: &InitialBellState, c_abs_sq: f64) -> Result<f64> {
    match initial.family {
        BellFamily::PhiOdd => concurrence_phi(initial.beta, c_abs_sq),
        BellFamily::PsiEven => concurrence_psi(initial.beta, c_abs_sq),
    }
}

/// Knobs for the finite-time disentanglement search.
#[derive(Debug, Clone, Copy)]
pub struct EsdOptions {
    /// Latest dimensionless time scanned.
    pub horizon: f64,
    /// Width (in alpha^2 t) over which the concurrence must stay at zero for
    /// a death to count.
    pub confirm_window: f64,
    /// Numerical zero for the concurrence.
    pub zero_tol: f64,
    /// Scan step.
    pub step: f64,
}

impl Default for EsdOptions {
    fn default() -> Self {
        Self { horizon: 50.0, confirm_window: 1.0, zero_tol: 1e-9, step: 0.005 }
    }
}

fn concurrence_at(initial: &InitialBellState, params: &ReservoirParams, t: f64) -> Result<f64> {
    let c = crate::amplitude::amplitude_c(t, params)?;
    concurrence_closed_form(initial, c.norm_sqr().min(1.0))
}

/// Earliest dimensionless time at which the concurrence reaches zero and
/// stays there over `confirm_window`, or `None` when it remains positive up
/// to the horizon (plateau or asymptotic decay).
///
/// A curve that is still falling materially at the horizon cannot be
/// classified and is reported as [`Error::HorizonTooShort`].
pub fn esd_time(
    initial: &InitialBellState,
    params: &ReservoirParams,
    opts: &EsdOptions,
) -> Result<Option<f64>> {
    if opts.horizon <= 0.0 || opts.step <= 0.0 {
        return Err(Error::InvalidParam("esd_time: horizon and step must be positive".into()));
    }
    let n = (opts.horizon / opts.step).ceil() as usize;
    let mut t_prev = 0.0;
    let mut c_prev = concurrence_at(initial, params, 0.0)?;
    let mut k = 1usize;
    while k <= n {
        let t = (k as f64 * opts.step).min(opts.horizon);
        let cv = concurrence_at(initial, params, t)?;
        if cv <= opts.zero_tol && c_prev > opts.zero_tol {
            // bisect the entry point of the dead zone
            let (mut lo, mut hi) = (t_prev, t);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if concurrence_at(initial, params, mid)? <= opts.zero_tol {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if hi - lo < 1e-9 {
                    break;
                }
            }
            let death = hi;
            // confirm the zone persists
            let confirm_samples = 128;
            let mut revived = None;
            for j in 1..=confirm_samples {
                let tc = death + opts.confirm_window * j as f64 / confirm_samples as f64;
                if concurrence_at(initial, params, tc)? > opts.zero_tol {
                    revived = Some(tc);
                    break;
                }
            }
            match revived {
                None => return Ok(Some(death)),
                Some(tr) => {
                    // transient zero; resume the scan after the revival
                    k = (tr / opts.step).ceil() as usize;
                    t_prev = tr;
                    c_prev = concurrence_at(initial, params, tr)?;
                    continue;
                }
            }
        }
        t_prev = t;
        c_prev = cv;
        k += 1;
    }

    // no confirmed death: classify the tail
    let c_end = concurrence_at(initial, params, opts.horizon)?;
    if c_end <= 1e-4 {
        return Ok(None); // asymptotic decay
    }
    let c_before = concurrence_at(initial, params, (opts.horizon - 1.0).max(0.0))?;
    let rel_change = (c_before - c_end).abs() / c_end.max(1e-12);
    if rel_change <= 0.02 {
        Ok(None) // settled plateau
    } else {
        Err(Error::HorizonTooShort(format!(
            "concurrence still changing by {:.1}% per unit time at horizon {}",
            rel_change * 100.0,
            opts.horizon
        )))
    }
}

/// Supremum beta^2 below which the even-parity family dies at finite time,
/// from the steady-state criterion beta <= sqrt(1-beta^2)(1 - |c_inf|^2),
/// located by bisection to 1e-4 in beta^2.
pub fn esd_beta_threshold(params: &ReservoirParams) -> Result<f64> {
    let c_inf = steady_amplitude(params)?.clamp(0.0, 1.0);
    let r = 1.0 - c_inf * c_inf;
    // h(b2) = beta - sqrt(1-beta^2) * r is monotone increasing in beta;
    // the threshold is its unique root.
    let h = |b2: f64| b2.sqrt() - (1.0 - b2).sqrt() * r;
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if h(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-4 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}
