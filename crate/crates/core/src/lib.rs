//! Solver suite for quadratic Liénard (type-I) and type-II nonlinear
//! oscillators with position-dependent mass: closed-form orbit oracles,
//! adaptive classical integration, isochronicity analysis, generalized
//! ordered quantization with finite-difference and shooting spectral
//! backends, and Bethe-ansatz machinery for the quasi-exactly solvable
//! cases.
//!
//! Layout:
//! - [`exprdsl`]: infix expression parser/evaluator for user-supplied
//!   f(x), g(x), m(x), V(x).
//! - [`specfun`]: self-contained special functions (orthogonal polynomials,
//!   Jacobi elliptic, Bessel, erf, log-gamma, curvature trigonometry).
//! - [`catalog`]: the oscillator model registry with closed-form solution
//!   oracles and analytic frequency/energy laws.
//! - [`classical`]: adaptive Runge–Kutta integration, period measurement,
//!   isochronicity checking, linearizing transforms, phase portraits.
//! - [`quantum`]: ordered position-dependent-mass Schrödinger operators,
//!   finite-difference and shooting eigen-solvers, analytic spectra,
//!   eigenfunction residuals.
//! - [`qes`]: Bethe-ansatz root solving, energy assembly and validation for
//!   the quasi-exactly solvable systems.

pub mod catalog;
pub mod classical;
pub mod exprdsl;
pub mod numdiff;
pub mod qes;
pub mod quadrature;
pub mod quantum;
pub mod specfun;
