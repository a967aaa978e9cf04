//! Jacobi elliptic functions and the complete elliptic integral of the first
//! kind via the arithmetic–geometric mean (descending Landen chain).
//!
//! Parameter convention: the second argument is the PARAMETER m = k²
//! (modulus squared), restricted to 0 ≤ m < 1.

use super::SpecFunError;

const MAX_AGM: usize = 32;

/// AGM chain for parameter m: returns (a_i, c_i) scales and the converged
/// depth N (c_N ≈ 0).
fn agm_chain(m: f64) -> (Vec<f64>, Vec<f64>, usize) {
    let mut a = vec![1.0_f64];
    let mut c = vec![m.sqrt()];
    let mut b = (1.0 - m).sqrt();
    let mut n = 0;
    while c[n].abs() > 1e-16 * a[n].abs() && n < MAX_AGM {
        let an = 0.5 * (a[n] + b);
        let cn = 0.5 * (a[n] - b);
        b = (a[n] * b).sqrt();
        a.push(an);
        c.push(cn);
        n += 1;
    }
    (a, c, n)
}

fn check_param(m: f64) -> Result<(), SpecFunError> {
    if !(0.0..1.0).contains(&m) {
        return Err(SpecFunError::ParameterOutOfRange(format!(
            "elliptic parameter m = {m} must satisfy 0 <= m < 1"
        )));
    }
    Ok(())
}

/// Complete elliptic integral of the first kind K(m), parameter convention.
pub fn elliptic_k(m: f64) -> Result<f64, SpecFunError> {
    check_param(m)?;
    let (a, _, n) = agm_chain(m);
    Ok(std::f64::consts::FRAC_PI_2 / a[n])
}

/// sn, cn, dn of argument u at parameter m, from one descending Landen
/// chain (accuracy ≈ 1e-13).
pub fn jacobi_sn_cn_dn(u: f64, m: f64) -> Result<(f64, f64, f64), SpecFunError> {
    check_param(m)?;
    if m < 1e-14 {
        return Ok((u.sin(), u.cos(), 1.0));
    }
    let (a, c, n) = agm_chain(m);

    // Reduce u modulo the full period 4K to keep the amplitude recursion
    // arguments small for long time series.
    let quarter_k = std::f64::consts::FRAC_PI_2 / a[n];
    let period = 4.0 * quarter_k;
    let u_red = u - period * (u / period).round();

    // Amplitude recursion: φ_N = 2^N a_N u, then
    // φ_{i−1} = (φ_i + asin((c_i/a_i) sin φ_i)) / 2.
    let mut phi = vec![0.0; n + 1];
    phi[n] = (1u64 << n) as f64 * a[n] * u_red;
    for i in (1..=n).rev() {
        let s = (c[i] / a[i] * phi[i].sin()).clamp(-1.0, 1.0);
        phi[i - 1] = 0.5 * (phi[i] + s.asin());
    }
    let sn = phi[0].sin();
    let cn = phi[0].cos();
    // dn never vanishes for m < 1 and dn² = 1 − m·sn² exactly, so the
    // positive root is the whole function (the cn/cos(φ₁−φ₀) ratio form
    // degenerates at quarter periods).
    let dn = (1.0 - m * sn * sn).sqrt();
    Ok((sn, cn, dn))
}

/// Jacobi sn(u | m).
pub fn jacobi_sn(u: f64, m: f64) -> Result<f64, SpecFunError> {
    Ok(jacobi_sn_cn_dn(u, m)?.0)
}

/// Jacobi cn(u | m).
pub fn jacobi_cn(u: f64, m: f64) -> Result<f64, SpecFunError> {
    Ok(jacobi_sn_cn_dn(u, m)?.1)
}

/// Jacobi dn(u | m).
pub fn jacobi_dn(u: f64, m: f64) -> Result<f64, SpecFunError> {
    Ok(jacobi_sn_cn_dn(u, m)?.2)
}
