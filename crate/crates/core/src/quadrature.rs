//! Adaptive Gauss–Kronrod quadrature (7-point Gauss / 15-point Kronrod pair)
//! with interval bisection, plus a trapezoid helper for uniformly sampled
//! data. Used by the linearizing transform and for eigenfunction
//! normalization integrals.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuadratureError {
    /// The error estimate could not be brought under the tolerance within the
    /// subdivision budget, or the integrand returned a non-finite value.
    #[error("quadrature failed on [{lo}, {hi}]: {reason}")]
    QuadratureFailure { lo: f64, hi: f64, reason: String },
}

// Kronrod abscissae for [-1, 1]; the odd-indexed entries are the embedded
// Gauss-7 nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_2,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One G7/K15 panel: returns (kronrod_value, |kronrod − gauss|).
fn gk15(f: &mut impl FnMut(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    let c = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = half * XGK[i];
        let fsum = f(c - dx) + f(c + dx);
        kron += WGK[i] * fsum;
        if i % 2 == 1 {
            gauss += WG[i / 2] * fsum;
        }
    }
    (kron * half, (kron - gauss).abs() * half)
}

/// Adaptive integral of `f` over [lo, hi] to absolute-or-relative tolerance
/// `tol` (interval bisection on the largest-error panel).
pub fn integrate(
    mut f: impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64, QuadratureError> {
    if lo == hi {
        return Ok(0.0);
    }
    let fail = |reason: &str| QuadratureError::QuadratureFailure {
        lo,
        hi,
        reason: reason.to_string(),
    };
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(fail("non-finite interval endpoint"));
    }

    // Panel worklist ordered by insertion; cheap because panel counts stay
    // small at the tolerances used here.
    struct Panel {
        lo: f64,
        hi: f64,
        value: f64,
        err: f64,
    }
    let (v0, e0) = gk15(&mut f, lo, hi);
    let mut panels = vec![Panel {
        lo,
        hi,
        value: v0,
        err: e0,
    }];
    const MAX_PANELS: usize = 4000;
    loop {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.err).sum();
        if !total.is_finite() {
            return Err(fail("integrand produced a non-finite value"));
        }
        if err <= tol * total.abs().max(1.0) {
            return Ok(total);
        }
        if panels.len() >= MAX_PANELS {
            return Err(fail("subdivision budget exhausted"));
        }
        // Split the worst panel.
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.err.total_cmp(&b.1.err))
            .map(|(i, _)| i)
            .expect("non-empty panel list");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.lo + p.hi);
        if mid <= p.lo || mid >= p.hi {
            return Err(fail("interval too small to subdivide further"));
        }
        let (va, ea) = gk15(&mut f, p.lo, mid);
        let (vb, eb) = gk15(&mut f, mid, p.hi);
        panels.push(Panel {
            lo: p.lo,
            hi: mid,
            value: va,
            err: ea,
        });
        panels.push(Panel {
            lo: mid,
            hi: p.hi,
            value: vb,
            err: eb,
        });
    }
}

/// Trapezoid rule over uniformly spaced samples with spacing `h`.
pub fn trapezoid_uniform(values: &[f64], h: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let interior: f64 = values[1..values.len() - 1].iter().sum();
    h * (0.5 * (values[0] + values[values.len() - 1]) + interior)
}
