//! Numeric differentiation of scalar callables: five-point central stencils
//! with one level of Richardson extrapolation and a returned error estimate.
//!
//! Step size policy: `h = max(1e-5, 1e-5·|x|)` for first derivatives.
//! Second derivatives divide the stencil noise by h², so the same step would
//! sit at ~1e-6 relative roundoff in doubles; they use
//! `h = max(1e-3, 1e-3·|x|)` instead, keeping both truncation and roundoff
//! near 1e-9. The Richardson pair (h, h/2) cancels the leading O(h⁴) term.

/// First or second derivative order selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivOrder {
    First,
    Second,
}

/// Default step size at evaluation point `x`.
pub fn default_step(x: f64, order: DerivOrder) -> f64 {
    match order {
        DerivOrder::First => (1e-5f64).max(1e-5 * x.abs()),
        DerivOrder::Second => (1e-3f64).max(1e-3 * x.abs()),
    }
}

/// Five-point central first derivative at step `h` (no extrapolation).
fn d1_stencil(f: &mut impl FnMut(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

/// Five-point central second derivative at step `h` (no extrapolation).
fn d2_stencil(f: &mut impl FnMut(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x - 2.0 * h) + 16.0 * f(x - h) - 30.0 * f(x) + 16.0 * f(x + h) - f(x + 2.0 * h))
        / (12.0 * h * h)
}

/// Derivative of `f` at `x` with Richardson extrapolation over steps `h` and
/// `h/2`. Returns `(value, error_estimate)`; the estimate is the magnitude of
/// the applied Richardson correction, an upper bound on the surviving
/// truncation error for smooth integrands.
pub fn derivative_with_step(
    mut f: impl FnMut(f64) -> f64,
    x: f64,
    order: DerivOrder,
    h: f64,
) -> (f64, f64) {
    let (coarse, fine) = match order {
        DerivOrder::First => (d1_stencil(&mut f, x, h), d1_stencil(&mut f, x, h / 2.0)),
        DerivOrder::Second => (d2_stencil(&mut f, x, h), d2_stencil(&mut f, x, h / 2.0)),
    };
    // Both stencils are O(h⁴): eliminating the leading term gives
    // (16·fine − coarse)/15.
    let value = (16.0 * fine - coarse) / 15.0;
    let err = ((fine - coarse) / 15.0).abs();
    (value, err)
}

/// Derivative at the default step size.
pub fn derivative(f: impl FnMut(f64) -> f64, x: f64, order: DerivOrder) -> (f64, f64) {
    derivative_with_step(f, x, order, default_step(x, order))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_first_derivative_is_exact() {
        // Five-point stencils are exact on cubics up to roundoff.
        let (d, err) = derivative(|x| 2.0 * x * x * x - x + 4.0, 3.0, DerivOrder::First);
        assert!((d - 53.0).abs() < 1e-9, "d = {d}");
        assert!(err < 1e-7);
    }

    #[test]
    fn quadratic_second_derivative() {
        let (d, _) = derivative(|x| x * x, 17.0, DerivOrder::Second);
        assert!((d - 2.0).abs() < 1e-7, "d = {d}");
    }

    #[test]
    fn sine_first_derivative_at_zero() {
        let (d, _) = derivative(f64::sin, 0.0, DerivOrder::First);
        assert!((d - 1.0).abs() < 1e-10, "d = {d}");
    }

    #[test]
    fn exp_second_derivative() {
        let (d, err) = derivative(f64::exp, 1.0, DerivOrder::Second);
        assert!((d - 1.0f64.exp()).abs() < 1e-6, "d = {d}, err = {err}");
    }
}
