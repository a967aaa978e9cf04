//! Integer-order Bessel functions of the first kind via Miller's downward
//! recurrence with the Neumann-series normalization J₀ + 2J₂ + 2J₄ + ... = 1.
//! Downward recurrence is stable for all (n, x); the forward direction is
//! not once n exceeds |x|.

/// J_n(x) for integer n ≥ 0, |relative error| ≲ 1e-13.
pub fn bessel_j(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if x < 0.0 {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        return sign * bessel_j(n, -x);
    }
    if x < 1e-7 {
        // Leading series term; the next term is ~x²/4 smaller.
        let mut t = 1.0;
        for k in 1..=n {
            t *= x / (2.0 * k as f64);
        }
        return t * (1.0 - x * x / (4.0 * (n as f64 + 1.0)));
    }

    // Start order: comfortably above both n and x so the downward recurrence
    // has decayed into the asymptotic regime by the time it reaches n.
    let m0 = (n as f64).max(x).ceil();
    let mut m = (m0 + 20.0 + 2.0 * m0.sqrt()) as u32;
    if m % 2 == 1 {
        m += 1;
    }

    let mut jp = 0.0_f64; // J_{k+1}
    let mut jc = 1e-30_f64; // J_k
    let mut result = if n as f64 >= m as f64 { jc } else { 0.0 };
    let mut norm = 0.0_f64; // accumulates J₀ + 2ΣJ_{2k}
    for k in (0..=m).rev() {
        let jm = 2.0 * (k as f64 + 1.0) / x * jc - jp; // J_k from J_{k+1}, J_{k+2}
        jp = jc;
        jc = jm;
        if k == n {
            result = jc;
        }
        if k % 2 == 0 {
            norm += if k == 0 { jc } else { 2.0 * jc };
        }
        // Rescale to avoid overflow during the growth phase.
        if jc.abs() > 1e250 {
            jc *= 1e-250;
            jp *= 1e-250;
            norm *= 1e-250;
            result *= 1e-250;
        }
    }
    result / norm
}
