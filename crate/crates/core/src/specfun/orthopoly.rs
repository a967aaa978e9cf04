//! Orthogonal polynomial recurrences (Hermite, Jacobi), the terminating
//! Gauss hypergeometric sum, and associated Legendre functions of real
//! degree and order on the cut |x| < 1.

use super::{gamma, SpecFunError};

const MAX_DEGREE: u32 = 60;

/// Physicists' Hermite polynomial H_n(x) via H_{n+1} = 2x·H_n − 2n·H_{n−1}.
pub fn hermite(n: u32, x: f64) -> Result<f64, SpecFunError> {
    if n > MAX_DEGREE {
        return Err(SpecFunError::DegreeTooLarge(n));
    }
    let mut prev = 1.0; // H₀
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = 2.0 * x; // H₁
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Jacobi polynomial P_n^{(a,b)}(x) via the standard three-term recurrence.
pub fn jacobi_poly(n: u32, a: f64, b: f64, x: f64) -> Result<f64, SpecFunError> {
    if n > MAX_DEGREE {
        return Err(SpecFunError::DegreeTooLarge(n));
    }
    if a <= -1.0 || b <= -1.0 {
        return Err(SpecFunError::BadWeight { a, b });
    }
    let mut prev = 1.0; // P₀
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x; // P₁
    for k in 1..n {
        let kf = k as f64;
        let c1 = 2.0 * (kf + 1.0) * (kf + a + b + 1.0) * (2.0 * kf + a + b);
        let c2 = (2.0 * kf + a + b + 1.0)
            * ((2.0 * kf + a + b + 2.0) * (2.0 * kf + a + b) * x + a * a - b * b);
        let c3 = 2.0 * (kf + a) * (kf + b) * (2.0 * kf + a + b + 2.0);
        let next = (c2 * cur - c3 * prev) / c1;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Terminating Gauss hypergeometric sum ₂F₁(−n, b; c; z) =
/// Σ_{k=0}^{n} (−n)_k (b)_k / ((c)_k k!) z^k for a non-positive integer
/// first parameter `neg_n = −n`.
pub fn gauss_2f1_terminating(neg_n: i32, b: f64, c: f64, z: f64) -> Result<f64, SpecFunError> {
    if neg_n > 0 {
        return Err(SpecFunError::NonTerminating(neg_n as f64));
    }
    let n = (-neg_n) as u32;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..n {
        let kf = k as f64;
        let denom = c + kf;
        if denom.abs() < 1e-300 {
            return Err(SpecFunError::PoleInC(c));
        }
        term *= (neg_n as f64 + kf) * (b + kf) / (denom * (kf + 1.0)) * z;
        sum += term;
    }
    Ok(sum)
}

/// Associated Legendre (Ferrers) function P_ν^μ(x) on the cut |x| < 1, for
/// real degree ν and real order μ:
///
///   P_ν^μ(x) = [(1+x)/(1−x)]^{μ/2} / Γ(1−μ) · ₂F₁(−ν, ν+1; 1−μ; (1−x)/2)
///
/// Integer degree/order pairs use the classical recurrences (exact
/// polynomial branch, Condon–Shortley phase); otherwise the hypergeometric
/// series is summed with a < 1e-12 tail bound. Errors: `PoleOfGamma` when
/// 1−μ is a non-positive integer outside the polynomial branch,
/// `OutOfBranch` for |x| ≥ 1.
pub fn assoc_legendre(degree: f64, order: f64, x: f64) -> Result<f64, SpecFunError> {
    if x.abs() >= 1.0 {
        return Err(SpecFunError::OutOfBranch(x));
    }
    let is_int = |v: f64| (v - v.round()).abs() < 1e-12;
    if is_int(degree) && is_int(order) && degree >= 0.0 {
        return Ok(legendre_integer(
            degree.round() as i64,
            order.round() as i64,
            x,
        ));
    }
    let one_minus_mu = 1.0 - order;
    if one_minus_mu <= 0.0 && is_int(one_minus_mu) {
        return Err(SpecFunError::PoleOfGamma(one_minus_mu));
    }
    let z = 0.5 * (1.0 - x);
    let prefactor = ((1.0 + x) / (1.0 - x)).powf(0.5 * order) / gamma(one_minus_mu)?;

    // ₂F₁(−ν, ν+1; 1−μ; z): finite sum when −ν or ν+1 is a non-positive
    // integer, else an infinite series convergent for |z| < 1.
    let a = -degree;
    let b = degree + 1.0;

    // When ν+μ is a non-negative integer n, the Euler transformation
    // ₂F₁(a,b;c;z) = (1−z)^{c−a−b} ₂F₁(c−a, c−b; c; z) has c−b = −(ν+μ), so
    // the transformed series is a finite sum of n+1 terms. The defining
    // series is formally convergent there too, but near z = 1 (x → −1) it
    // evaluates a result of size (1−z)^{−μ} by cancellation of terms of size
    // 1, losing all significance; the finite sum stays accurate.
    let nu_plus_mu = degree + order;
    if nu_plus_mu > -1e-12 && (nu_plus_mu - nu_plus_mu.round()).abs() < 1e-12 && nu_plus_mu < 1e5 {
        let n = nu_plus_mu.round().max(0.0) as u32;
        let ca = one_minus_mu + degree;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 0..n {
            let kf = k as f64;
            let denom = (one_minus_mu + kf) * (kf + 1.0);
            if denom.abs() < 1e-300 {
                return Err(SpecFunError::PoleInC(one_minus_mu));
            }
            term *= (ca + kf) * (kf - n as f64) / denom * z;
            sum += term;
        }
        return Ok(prefactor * (1.0 - z).powf(-order) * sum);
    }
    let terminating_at = [a, b]
        .iter()
        .filter(|v| **v <= 1e-12 && is_int(**v))
        .map(|v| (-v.round()) as u32)
        .min();
    let mut term = 1.0;
    let mut sum = 1.0;
    let max_k = terminating_at.unwrap_or(100_000);
    for k in 0..max_k {
        let kf = k as f64;
        let denom = (one_minus_mu + kf) * (kf + 1.0);
        if denom.abs() < 1e-300 {
            return Err(SpecFunError::PoleInC(one_minus_mu));
        }
        term *= (a + kf) * (b + kf) / denom * z;
        sum += term;
        if terminating_at.is_none() {
            // Conservative geometric tail bound once the term ratio settles
            // below 1.
            let ratio = ((a + kf + 1.0) * (b + kf + 1.0) / ((one_minus_mu + kf + 1.0) * (kf + 2.0))
                * z)
                .abs();
            if ratio < 1.0 && term.abs() * ratio / (1.0 - ratio) < 1e-14 * sum.abs().max(1e-30) {
                break;
            }
        }
    }
    Ok(prefactor * sum)
}

/// Classical recurrence branch for integer degree l ≥ 0 and integer order m
/// (Condon–Shortley phase).
fn legendre_integer(l: i64, m: i64, x: f64) -> f64 {
    let m_abs = m.abs();
    if m_abs > l {
        return 0.0;
    }
    // P_m^m = (−1)^m (2m−1)!! (1−x²)^{m/2}
    let mut pmm = 1.0;
    if m_abs > 0 {
        let somx2 = ((1.0 - x) * (1.0 + x)).sqrt();
        let mut fact = 1.0;
        for _ in 0..m_abs {
            pmm *= -fact * somx2;
            fact += 2.0;
        }
    }
    let plm = if l == m_abs {
        pmm
    } else {
        // P_{m+1}^m = x(2m+1) P_m^m, then upward in degree.
        let mut pmmp1 = x * (2.0 * m_abs as f64 + 1.0) * pmm;
        if l == m_abs + 1 {
            pmmp1
        } else {
            let mut pll = 0.0;
            for ll in (m_abs + 2)..=l {
                pll = (x * (2.0 * ll as f64 - 1.0) * pmmp1
                    - (ll as f64 + m_abs as f64 - 1.0) * pmm)
                    / (ll as f64 - m_abs as f64);
                pmm = pmmp1;
                pmmp1 = pll;
            }
            pll
        }
    };
    if m >= 0 {
        plm
    } else {
        // P_l^{−m} = (−1)^m (l−m)!/(l+m)! P_l^m
        let mut ratio = 1.0;
        for k in (l - m_abs + 1)..=(l + m_abs) {
            ratio /= k as f64;
        }
        let sign = if m_abs % 2 == 0 { 1.0 } else { -1.0 };
        sign * ratio * plm
    }
}
