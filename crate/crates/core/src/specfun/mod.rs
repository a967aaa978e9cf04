//! Self-contained special functions backing the closed-form oracles and
//! analytic eigenfunctions: orthogonal polynomials and terminating
//! hypergeometrics, Jacobi elliptic functions, integer-order Bessel J,
//! the error function, log-gamma, and the curvature-dependent trigonometric
//! functions S_k, C_k, T_k.

mod bessel;
mod elliptic;
mod orthopoly;

pub use bessel::bessel_j;
pub use elliptic::{elliptic_k, jacobi_cn, jacobi_dn, jacobi_sn, jacobi_sn_cn_dn};
pub use orthopoly::{assoc_legendre, gauss_2f1_terminating, hermite, jacobi_poly};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecFunError {
    #[error("polynomial degree {0} exceeds the stable recurrence range (max 60)")]
    DegreeTooLarge(u32),
    #[error("Jacobi weight parameters must exceed -1 (got a = {a}, b = {b})")]
    BadWeight { a: f64, b: f64 },
    #[error("first hypergeometric parameter {0} is not a non-positive integer")]
    NonTerminating(f64),
    #[error("hypergeometric lower parameter c = {0} hits a pole before the series terminates")]
    PoleInC(f64),
    #[error("gamma function pole at {0}")]
    PoleOfGamma(f64),
    #[error("argument {0} is outside the on-cut branch |x| < 1")]
    OutOfBranch(f64),
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
}

/// Curvature-trigonometry selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KTrigKind {
    S,
    C,
    T,
}

/// Curvature-dependent trigonometric functions:
/// C_k = cos(√k x) / 1 / cosh(√(−k) x) and S_k = sin(√k x)/√k / x /
/// sinh(√(−k) x)/√(−k) for k > 0 / k = 0 / k < 0; T_k = S_k/C_k.
///
/// No error cases: T_k returns a non-finite value at the zeros of C_k.
pub fn k_trig(kind: KTrigKind, k: f64, x: f64) -> f64 {
    let (s, c) = if k > 0.0 {
        let rk = k.sqrt();
        ((rk * x).sin() / rk, (rk * x).cos())
    } else if k < 0.0 {
        let rk = (-k).sqrt();
        ((rk * x).sinh() / rk, (rk * x).cosh())
    } else {
        (x, 1.0)
    };
    match kind {
        KTrigKind::S => s,
        KTrigKind::C => c,
        KTrigKind::T => s / c,
    }
}

/// Error function, |relative error| ≲ 1e-14: Maclaurin series on |x| < 2.5,
/// complementary continued fraction (modified Lentz) beyond.
pub fn erf(x: f64) -> f64 {
    if x == 0.0 {
        return x; // preserves signed zero
    }
    if x < 0.0 {
        return -erf(-x);
    }
    const TWO_OVER_SQRT_PI: f64 = 1.128_379_167_095_512_6;
    if x < 2.5 {
        // erf(x) = 2/√π Σ (−1)^n x^{2n+1} / (n! (2n+1))
        let x2 = x * x;
        let mut u = x; // (−1)^n x^{2n+1} / n!
        let mut sum = x;
        for n in 0..200 {
            u *= -x2 / (n as f64 + 1.0);
            let term = u / (2.0 * n as f64 + 3.0);
            sum += term;
            if term.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        TWO_OVER_SQRT_PI * sum
    } else {
        1.0 - erfc_cf(x)
    }
}

/// Complementary error function for x ≥ 2.5 via the Laplace continued
/// fraction √π e^{x²} erfc(x) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))).
fn erfc_cf(x: f64) -> f64 {
    const SQRT_PI: f64 = 1.772_453_850_905_516;
    // Modified Lentz on CF = a₁/(b₁ + a₂/(b₂ + ...)), a₁ = 1, aₖ = (k−1)/2,
    // bₖ = x.
    let tiny = 1e-300;
    let mut f = tiny;
    let mut c = f;
    let mut d = 0.0;
    for k in 1..200 {
        let a = if k == 1 { 1.0 } else { (k as f64 - 1.0) / 2.0 };
        let b = x;
        d = b + a * d;
        if d == 0.0 {
            d = tiny;
        }
        c = b + a / c;
        if c == 0.0 {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / SQRT_PI * f
}

// Lanczos coefficients, g = 7, 9 terms.
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// log|Γ(x)| for real x not a non-positive integer (Lanczos, g = 7, with
/// reflection for x < 0.5). Pair with [`gamma_sign`] when the sign matters.
pub fn log_gamma(x: f64) -> Result<f64, SpecFunError> {
    if x <= 0.0 && (x - x.round()).abs() < 1e-13 {
        return Err(SpecFunError::PoleOfGamma(x));
    }
    if x < 0.5 {
        // log|Γ(x)| = log(π/|sin πx|) − log|Γ(1−x)|
        let refl = (std::f64::consts::PI / (std::f64::consts::PI * x).sin().abs()).ln();
        return Ok(refl - log_gamma(1.0 - x)?);
    }
    let z = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + 7.5;
    Ok(0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + acc.ln())
}

/// Sign of Γ(x): positive for x > 0, alternating between negative-integer
/// poles for x < 0.
pub fn gamma_sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else {
        // Γ is negative on (−1,0), positive on (−2,−1), ...
        if (x.floor() as i64).rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// Signed Γ(x) via exp(log|Γ|)·sign. Overflows to ±inf above x ≈ 171.6.
pub fn gamma(x: f64) -> Result<f64, SpecFunError> {
    Ok(gamma_sign(x) * log_gamma(x)?.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_trig_cases() {
        assert_eq!(k_trig(KTrigKind::S, 0.0, 2.5), 2.5);
        assert_eq!(k_trig(KTrigKind::C, 1.0, 0.0), 1.0);
        assert!((k_trig(KTrigKind::S, -1.0, 1.0) - 1.0f64.sinh()).abs() < 1e-15);
        assert!((k_trig(KTrigKind::S, 4.0, 0.25) - (0.5f64).sin() / 2.0).abs() < 1e-15);
        // At zeros of C_k the quotient blows up (non-finite once the cosine
        // underflows to exactly zero; astronomically large at the nearest
        // representable argument).
        let t = k_trig(KTrigKind::T, 1.0, std::f64::consts::FRAC_PI_2);
        assert!(!t.is_finite() || t.abs() > 1e15);
    }

    #[test]
    fn k_trig_continuous_at_zero_curvature() {
        for x in [-2.0, -0.5, 0.7, 3.0] {
            for k in [1e-8, -1e-8] {
                assert!(
                    (k_trig(KTrigKind::S, k, x) - x).abs() < 1e-7,
                    "S_k at k = {k}, x = {x}"
                );
            }
        }
    }

    #[test]
    fn erf_reference_values() {
        assert_eq!(erf(0.0), 0.0);
        // erf(1) and erf(2) to 16 significant digits.
        assert!((erf(1.0) - 0.842_700_792_949_714_9).abs() < 1e-14);
        assert!((erf(2.0) - 0.995_322_265_018_952_7).abs() < 1e-14);
        assert!((erf(3.0) - 0.999_977_909_503_001_4).abs() < 1e-14);
        assert!((erf(10.0) - 1.0).abs() < 1e-15);
        assert!((erf(-1.0) + erf(1.0)).abs() < 1e-16);
    }

    #[test]
    fn erf_branches_agree_at_junction() {
        // Series and continued fraction must agree where they meet.
        let series = {
            let x: f64 = 2.5;
            let x2 = x * x;
            let mut u = x;
            let mut sum = x;
            for n in 0..300 {
                u *= -x2 / (n as f64 + 1.0);
                sum += u / (2.0 * n as f64 + 3.0);
            }
            1.128_379_167_095_512_6 * sum
        };
        assert!((erf(2.5) - series).abs() < 3e-14);
    }

    #[test]
    fn log_gamma_reference_values() {
        assert!(log_gamma(1.0).unwrap().abs() < 1e-13);
        assert!(log_gamma(2.0).unwrap().abs() < 1e-13);
        assert!((log_gamma(5.0).unwrap() - 24.0f64.ln()).abs() < 1e-12);
        assert!((log_gamma(0.5).unwrap() - std::f64::consts::PI.sqrt().ln()).abs() < 1e-13);
        // Γ(−0.5) = −2√π
        assert!((gamma(-0.5).unwrap() + 2.0 * std::f64::consts::PI.sqrt()).abs() < 1e-12);
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-3.0).is_err());
    }

    #[test]
    fn gamma_recurrence_property() {
        // Γ(x+1) = x Γ(x) across a spread of arguments.
        for i in 0..50 {
            let x = 0.07 + 0.31 * i as f64;
            let lhs = gamma(x + 1.0).unwrap();
            let rhs = x * gamma(x).unwrap();
            assert!(
                (lhs - rhs).abs() < 1e-11 * lhs.abs().max(1.0),
                "x = {x}: {lhs} vs {rhs}"
            );
        }
    }
}
