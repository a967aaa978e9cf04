//! Registry of the oscillator models: Liénard data (f, g), position-dependent
//! masses and potentials, admissible domains, closed-form solution oracles, and
//! amplitude–frequency/energy laws.
//!
//! Conventions frozen here:
//!
//! - Type-I models obey ẍ + f(x)ẋ² + g(x) = 0 with m and V related to the
//!   Liénard data by f = m′/(2m) and g = V′/m; type-II (MEE) obeys
//!   ẍ + f(x)ẋ + g(x) = 0.
//! - MLO-family models use the 1 + λx² mass denominator for either sign of λ;
//!   the bounded-domain branch is λ < 0 with |x| < 1/√|λ|. The isotonic MLO is
//!   registered in the same convention, so a model built with λ here equals the
//!   1/(1 − λ̃x²) writing with λ̃ = −λ.
//! - MEE is Hamiltonian in momentum space: its `mass` and `potential` take the
//!   momentum p as argument and `hamiltonian(x, p) = x²/(2 m(p)) + U(p)`.

use crate::specfun;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Errors raised while building models or evaluating their analytic laws.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    /// A required parameter is absent from the parameter map.
    #[error("model {model}: missing parameter `{name}`")]
    MissingParam { model: ModelName, name: &'static str },
    /// A parameter value violates the model's admissibility rules.
    #[error("model {model}: {reason}")]
    DomainViolation { model: ModelName, reason: String },
    /// Solution constants fall outside the admissible range of the oracle.
    #[error("model {model}: amplitude out of range: {reason}")]
    AmplitudeOutOfRange { model: ModelName, reason: String },
    /// The model's solution is only known implicitly.
    #[error("model {0} has no closed-form solution")]
    NoClosedForm(ModelName),
    /// The model has no registered amplitude–energy law.
    #[error("model {0} has no analytic energy law")]
    NoEnergyLaw(ModelName),
}

/// Enumerated identifiers of every registered system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModelName {
    #[serde(rename = "EXPONENTIAL")]
    Exponential,
    #[serde(rename = "INVERSE")]
    Inverse,
    #[serde(rename = "INVERSE_SQUARE_PLUS")]
    InverseSquarePlus,
    #[serde(rename = "INVERSE_SQUARE_MINUS")]
    InverseSquareMinus,
    #[serde(rename = "SINGULAR_DEFORM")]
    SingularDeform,
    #[serde(rename = "POWER_LAW")]
    PowerLaw,
    #[serde(rename = "MLO")]
    Mlo,
    #[serde(rename = "HIGGS")]
    Higgs,
    #[serde(rename = "K_NONPOLY")]
    KNonpoly,
    #[serde(rename = "DELTA")]
    Delta,
    #[serde(rename = "MLO_ISOTONIC")]
    MloIsotonic,
    #[serde(rename = "HIGGS_ISOTONIC")]
    HiggsIsotonic,
    #[serde(rename = "K_NONPOLY_ISOTONIC")]
    KNonpolyIsotonic,
    #[serde(rename = "DELTA_ISOTONIC")]
    DeltaIsotonic,
    #[serde(rename = "MLO_3D")]
    Mlo3d,
    #[serde(rename = "HIGGS_3D")]
    Higgs3d,
    #[serde(rename = "K_NONPOLY_3D")]
    KNonpoly3d,
    #[serde(rename = "MEE")]
    Mee,
}

impl ModelName {
    /// Every registered model, in catalog order.
    pub const ALL: [ModelName; 18] = [
        ModelName::Exponential,
        ModelName::Inverse,
        ModelName::InverseSquarePlus,
        ModelName::InverseSquareMinus,
        ModelName::SingularDeform,
        ModelName::PowerLaw,
        ModelName::Mlo,
        ModelName::Higgs,
        ModelName::KNonpoly,
        ModelName::Delta,
        ModelName::MloIsotonic,
        ModelName::HiggsIsotonic,
        ModelName::KNonpolyIsotonic,
        ModelName::DeltaIsotonic,
        ModelName::Mlo3d,
        ModelName::Higgs3d,
        ModelName::KNonpoly3d,
        ModelName::Mee,
    ];

    /// Canonical upper-case identifier, as used in scenario files.
    pub fn as_str(self) -> &'static str {
        match self {
            ModelName::Exponential => "EXPONENTIAL",
            ModelName::Inverse => "INVERSE",
            ModelName::InverseSquarePlus => "INVERSE_SQUARE_PLUS",
            ModelName::InverseSquareMinus => "INVERSE_SQUARE_MINUS",
            ModelName::SingularDeform => "SINGULAR_DEFORM",
            ModelName::PowerLaw => "POWER_LAW",
            ModelName::Mlo => "MLO",
            ModelName::Higgs => "HIGGS",
            ModelName::KNonpoly => "K_NONPOLY",
            ModelName::Delta => "DELTA",
            ModelName::MloIsotonic => "MLO_ISOTONIC",
            ModelName::HiggsIsotonic => "HIGGS_ISOTONIC",
            ModelName::KNonpolyIsotonic => "K_NONPOLY_ISOTONIC",
            ModelName::DeltaIsotonic => "DELTA_ISOTONIC",
            ModelName::Mlo3d => "MLO_3D",
            ModelName::Higgs3d => "HIGGS_3D",
            ModelName::KNonpoly3d => "K_NONPOLY_3D",
            ModelName::Mee => "MEE",
        }
    }

    /// Spatial dimension of the model (3 for the radial systems).
    pub fn dimension(self) -> u8 {
        match self {
            ModelName::Mlo3d | ModelName::Higgs3d | ModelName::KNonpoly3d => 3,
            _ => 1,
        }
    }

    /// Liénard class: quadratic (I) or linear (II) velocity coupling.
    pub fn lienard_type(self) -> LienardType {
        match self {
            ModelName::Mee => LienardType::II,
            _ => LienardType::I,
        }
    }

    /// Parameter names that `get_model` requires for this model.
    pub fn required_params(self) -> &'static [&'static str] {
        match self {
            ModelName::Exponential
            | ModelName::Inverse
            | ModelName::InverseSquarePlus
            | ModelName::InverseSquareMinus
            | ModelName::SingularDeform
            | ModelName::Mlo
            | ModelName::Mlo3d => &["omega0", "lambda"],
            ModelName::PowerLaw => &["omega0", "a", "nu"],
            ModelName::Higgs
            | ModelName::KNonpoly
            | ModelName::Higgs3d
            | ModelName::KNonpoly3d => &["omega0", "k"],
            ModelName::Delta => &["lambda"],
            ModelName::MloIsotonic => &["omega0", "lambda", "g"],
            ModelName::HiggsIsotonic | ModelName::KNonpolyIsotonic => &["omega0", "k", "g"],
            ModelName::DeltaIsotonic => &["lambda", "g"],
            ModelName::Mee => &["omega", "k"],
        }
    }
}

impl fmt::Display for ModelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ModelName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ModelName::ALL
            .iter()
            .copied()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown model name `{s}`"))
    }
}

/// Velocity coupling class of the equation of motion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LienardType {
    /// ẍ + f(x)ẋ² + g(x) = 0.
    I,
    /// ẍ + f(x)ẋ + g(x) = 0.
    II,
}

/// Classification of an interval endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EndpointKind {
    Regular,
    Singular,
    Infinite,
}

/// One open interval of admissible positions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_kind: EndpointKind,
    pub hi_kind: EndpointKind,
}

impl Interval {
    fn new(lo: f64, hi: f64, lo_kind: EndpointKind, hi_kind: EndpointKind) -> Self {
        Interval { lo, hi, lo_kind, hi_kind }
    }

    fn whole_line() -> Self {
        Interval::new(
            f64::NEG_INFINITY,
            f64::INFINITY,
            EndpointKind::Infinite,
            EndpointKind::Infinite,
        )
    }

    /// Strict interior membership (endpoints excluded).
    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }
}

/// Admissible set of positions; more than one piece when a singular interior
/// point (such as x = 0 for the δ-type systems) splits the line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub pieces: Vec<Interval>,
}

impl Domain {
    fn one(interval: Interval) -> Self {
        Domain { pieces: vec![interval] }
    }

    /// True when x lies strictly inside some piece.
    pub fn contains(&self, x: f64) -> bool {
        self.pieces.iter().any(|p| p.contains(x))
    }

    /// The piece containing x, if any.
    pub fn piece_of(&self, x: f64) -> Option<&Interval> {
        self.pieces.iter().find(|p| p.contains(x))
    }
}

/// Constants selecting one member of a model's solution family.
///
/// `amplitude`/`phase` are the A and δ of the sinusoidal families. The radial
/// systems read `c2` (total angular momentum) and, for HIGGS_3D, `c3` (twice
/// the radial energy); DELTA reads `c1`, `c2` as its two integration
/// constants. Unused fields are ignored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolutionConstants {
    pub amplitude: f64,
    pub phase: f64,
    #[serde(default)]
    pub c1: f64,
    #[serde(default)]
    pub c2: f64,
    #[serde(default)]
    pub c3: f64,
}

impl SolutionConstants {
    /// Sinusoidal-family constants (A, δ); the c's default to zero.
    pub fn new(amplitude: f64, phase: f64) -> Self {
        SolutionConstants { amplitude, phase, c1: 0.0, c2: 0.0, c3: 0.0 }
    }
}

impl Default for SolutionConstants {
    fn default() -> Self {
        SolutionConstants::new(0.0, 0.0)
    }
}

/// A registered oscillator system with validated parameters.
///
/// Models are immutable value objects; cloning and sharing across threads is
/// cheap and safe.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorModel {
    name: ModelName,
    params: BTreeMap<String, f64>,
    // Cached parameter values (0 when the model does not use them).
    w0: f64,
    lam: f64,
    k: f64,
    g: f64,
    a: f64,
    nu: f64,
    om: f64,
}

/// Build a model after validating the parameter map.
///
/// Unknown parameter names are rejected so scenario typos surface early.
pub fn get_model(
    name: ModelName,
    params: &BTreeMap<String, f64>,
) -> Result<OscillatorModel, CatalogError> {
    let required = name.required_params();
    for key in params.keys() {
        if !required.contains(&key.as_str()) {
            return Err(CatalogError::DomainViolation {
                model: name,
                reason: format!("unknown parameter `{key}`"),
            });
        }
    }
    let req = |pname: &'static str| -> Result<f64, CatalogError> {
        let v = *params
            .get(pname)
            .ok_or(CatalogError::MissingParam { model: name, name: pname })?;
        if !v.is_finite() {
            return Err(CatalogError::DomainViolation {
                model: name,
                reason: format!("parameter `{pname}` is not finite"),
            });
        }
        Ok(v)
    };
    let violation = |reason: &str| CatalogError::DomainViolation {
        model: name,
        reason: reason.to_string(),
    };

    let mut m = OscillatorModel {
        name,
        params: params.clone(),
        w0: 0.0,
        lam: 0.0,
        k: 0.0,
        g: 0.0,
        a: 0.0,
        nu: 0.0,
        om: 0.0,
    };
    for &pname in required {
        let v = req(pname)?;
        match pname {
            "omega0" => m.w0 = v,
            "lambda" => m.lam = v,
            "k" => m.k = v,
            "g" => m.g = v,
            "a" => m.a = v,
            "nu" => m.nu = v,
            "omega" => m.om = v,
            _ => unreachable!("unhandled required parameter"),
        }
    }

    if required.contains(&"omega0") && m.w0 <= 0.0 {
        return Err(violation("omega0 must be positive"));
    }
    match name {
        ModelName::Exponential
        | ModelName::Inverse
        | ModelName::InverseSquarePlus
        | ModelName::InverseSquareMinus
        | ModelName::SingularDeform => {
            if m.lam == 0.0 {
                return Err(violation("lambda must be nonzero"));
            }
        }
        ModelName::PowerLaw => {
            if m.a == 0.0 {
                return Err(violation("a must be nonzero"));
            }
            if m.nu <= -1.0 {
                return Err(violation("nu must exceed -1"));
            }
        }
        ModelName::MloIsotonic
        | ModelName::HiggsIsotonic
        | ModelName::KNonpolyIsotonic
        | ModelName::DeltaIsotonic => {
            if m.g <= 0.0 {
                return Err(violation("isotonic strength g must be positive"));
            }
        }
        ModelName::Mee => {
            if m.om <= 0.0 {
                return Err(violation("omega must be positive"));
            }
            if m.k <= 0.0 {
                return Err(violation("k must be positive"));
            }
        }
        _ => {}
    }
    Ok(m)
}

impl OscillatorModel {
    pub fn name(&self) -> ModelName {
        self.name
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    pub fn dimension(&self) -> u8 {
        self.name.dimension()
    }

    pub fn lienard_type(&self) -> LienardType {
        self.name.lienard_type()
    }

    /// Admissible positions (radii for the 3D systems, momenta are separate
    /// for MEE whose admissible x is the whole line).
    pub fn domain(&self) -> Domain {
        let singular_pair = |bound: f64| {
            Domain {
                pieces: vec![
                    Interval::new(-bound, 0.0, EndpointKind::Singular, EndpointKind::Singular),
                    Interval::new(0.0, bound, EndpointKind::Singular, EndpointKind::Singular),
                ],
            }
        };
        match self.name {
            ModelName::Exponential | ModelName::InverseSquarePlus | ModelName::Mee => {
                Domain::one(Interval::whole_line())
            }
            ModelName::Inverse => {
                // Pole of V at x = -1/λ; the registered piece contains the origin.
                if self.lam > 0.0 {
                    Domain::one(Interval::new(
                        -1.0 / self.lam,
                        f64::INFINITY,
                        EndpointKind::Singular,
                        EndpointKind::Infinite,
                    ))
                } else {
                    Domain::one(Interval::new(
                        f64::NEG_INFINITY,
                        -1.0 / self.lam,
                        EndpointKind::Infinite,
                        EndpointKind::Singular,
                    ))
                }
            }
            ModelName::InverseSquareMinus => {
                let b = 1.0 / self.lam.abs();
                Domain::one(Interval::new(-b, b, EndpointKind::Singular, EndpointKind::Singular))
            }
            ModelName::SingularDeform => {
                if self.lam > 0.0 {
                    Domain::one(Interval::new(
                        f64::NEG_INFINITY,
                        1.0 / self.lam,
                        EndpointKind::Infinite,
                        EndpointKind::Singular,
                    ))
                } else {
                    Domain::one(Interval::new(
                        1.0 / self.lam,
                        f64::INFINITY,
                        EndpointKind::Singular,
                        EndpointKind::Infinite,
                    ))
                }
            }
            ModelName::PowerLaw => {
                // When 1/(ν+1) is an odd integer the mass extends evenly across
                // the origin and orbits pass through it; otherwise x > 0 only.
                if odd_integer_exponent(self.nu).is_some() {
                    Domain::one(Interval::whole_line())
                } else {
                    Domain::one(Interval::new(
                        0.0,
                        f64::INFINITY,
                        EndpointKind::Singular,
                        EndpointKind::Infinite,
                    ))
                }
            }
            ModelName::Mlo => {
                if self.lam >= 0.0 {
                    Domain::one(Interval::whole_line())
                } else {
                    let b = 1.0 / self.lam.abs().sqrt();
                    Domain::one(Interval::new(-b, b, EndpointKind::Singular, EndpointKind::Singular))
                }
            }
            ModelName::Higgs | ModelName::KNonpoly => {
                if self.k >= 0.0 {
                    Domain::one(Interval::whole_line())
                } else {
                    let b = 1.0 / self.k.abs().sqrt();
                    Domain::one(Interval::new(-b, b, EndpointKind::Singular, EndpointKind::Singular))
                }
            }
            ModelName::Delta | ModelName::DeltaIsotonic => Domain {
                pieces: vec![
                    Interval::new(
                        f64::NEG_INFINITY,
                        0.0,
                        EndpointKind::Infinite,
                        EndpointKind::Singular,
                    ),
                    Interval::new(0.0, f64::INFINITY, EndpointKind::Singular, EndpointKind::Infinite),
                ],
            },
            ModelName::MloIsotonic => {
                if self.lam >= 0.0 {
                    singular_pair(f64::INFINITY)
                } else {
                    singular_pair(1.0 / self.lam.abs().sqrt())
                }
            }
            ModelName::HiggsIsotonic | ModelName::KNonpolyIsotonic => {
                if self.k >= 0.0 {
                    singular_pair(f64::INFINITY)
                } else {
                    singular_pair(1.0 / self.k.abs().sqrt())
                }
            }
            ModelName::Mlo3d => {
                let hi = if self.lam >= 0.0 { f64::INFINITY } else { 1.0 / self.lam.abs().sqrt() };
                let hi_kind =
                    if hi.is_finite() { EndpointKind::Singular } else { EndpointKind::Infinite };
                Domain::one(Interval::new(0.0, hi, EndpointKind::Singular, hi_kind))
            }
            ModelName::Higgs3d | ModelName::KNonpoly3d => {
                let hi = if self.k >= 0.0 { f64::INFINITY } else { 1.0 / self.k.abs().sqrt() };
                let hi_kind =
                    if hi.is_finite() { EndpointKind::Singular } else { EndpointKind::Infinite };
                Domain::one(Interval::new(0.0, hi, EndpointKind::Singular, hi_kind))
            }
        }
    }

    /// Position-dependent mass m(x). For MEE the argument is the momentum p
    /// and the mass is positive for p < 3ω²/(2k).
    pub fn mass(&self, x: f64) -> f64 {
        let (lam, k) = (self.lam, self.k);
        match self.name {
            ModelName::Exponential => lam * lam * (2.0 * lam * x).exp(),
            ModelName::Inverse => (1.0 + lam * x).powi(-4),
            ModelName::InverseSquarePlus => (1.0 + lam * lam * x * x).powi(-3),
            ModelName::InverseSquareMinus => (1.0 - lam * lam * x * x).powi(-3),
            ModelName::SingularDeform => {
                let u = lam * x;
                (u - 2.0) * (u - 2.0) / (4.0 * (1.0 - u).powi(3))
            }
            ModelName::PowerLaw => {
                let c = self.a * (self.nu + 1.0);
                // |x| powers give the even continuation used by the
                // odd-reciprocal solution branch.
                c * c * x.abs().powf(2.0 * self.nu)
            }
            ModelName::Mlo | ModelName::MloIsotonic | ModelName::Mlo3d => {
                1.0 / (1.0 + lam * x * x)
            }
            ModelName::Higgs
            | ModelName::KNonpoly
            | ModelName::HiggsIsotonic
            | ModelName::KNonpolyIsotonic
            | ModelName::Higgs3d
            | ModelName::KNonpoly3d => (1.0 + k * x * x).powi(-2),
            ModelName::Delta | ModelName::DeltaIsotonic => 2.0 / x.powi(4),
            ModelName::Mee => {
                let v2 = 1.0 - 2.0 * self.k * x / (3.0 * self.om * self.om);
                1.0 / (self.om * self.om * v2)
            }
        }
    }

    /// Potential V(x); for MEE this is U(p) of the momentum-space Hamiltonian.
    pub fn potential(&self, x: f64) -> f64 {
        let (w0, lam, k, g) = (self.w0, self.lam, self.k, self.g);
        let w2 = w0 * w0;
        match self.name {
            ModelName::Exponential => {
                let e = (lam * x).exp();
                0.5 * w2 * (1.0 - e) * (1.0 - e)
            }
            ModelName::Inverse => {
                let d = 1.0 + lam * x;
                0.5 * w2 * x * x / (d * d)
            }
            ModelName::InverseSquarePlus => 0.5 * w2 * x * x / (1.0 + lam * lam * x * x),
            ModelName::InverseSquareMinus => 0.5 * w2 * x * x / (1.0 - lam * lam * x * x),
            ModelName::SingularDeform => 0.5 * w2 * x * x / (1.0 - lam * x),
            ModelName::PowerLaw => {
                0.5 * w2 * self.a * self.a * x.abs().powf(2.0 * self.nu + 2.0)
            }
            ModelName::Mlo | ModelName::Mlo3d => 0.5 * w2 * x * x / (1.0 + lam * x * x),
            ModelName::Higgs | ModelName::Higgs3d => 0.5 * w2 * x * x,
            ModelName::KNonpoly | ModelName::KNonpoly3d => {
                let d = 1.0 + k * x * x;
                0.5 * w2 * x * x / (d * d)
            }
            ModelName::Delta => lam * x * x,
            ModelName::MloIsotonic => {
                0.5 * w2 * x * x / (1.0 + lam * x * x) + 0.5 * g / (x * x)
            }
            ModelName::HiggsIsotonic => 0.5 * w2 * x * x + 0.5 * g / (x * x),
            ModelName::KNonpolyIsotonic => {
                let d = 1.0 + k * x * x;
                0.5 * w2 * x * x / (d * d) + 0.5 * g / (x * x)
            }
            ModelName::DeltaIsotonic => lam * x * x + 0.5 * g / (x * x),
            ModelName::Mee => {
                let v = (1.0 - 2.0 * self.k * x / (3.0 * self.om * self.om)).sqrt();
                let c = 9.0 * self.om.powi(4) / (2.0 * self.k * self.k);
                c * (v - 1.0) * (v - 1.0)
            }
        }
    }

    /// Liénard damping coefficient f(x): multiplies ẋ² for type-I models and
    /// ẋ for the type-II MEE.
    pub fn f_coeff(&self, x: f64) -> f64 {
        let (lam, k) = (self.lam, self.k);
        match self.name {
            ModelName::Exponential => lam,
            ModelName::Inverse => -2.0 * lam / (1.0 + lam * x),
            ModelName::InverseSquarePlus => -3.0 * lam * lam * x / (1.0 + lam * lam * x * x),
            ModelName::InverseSquareMinus => 3.0 * lam * lam * x / (1.0 - lam * lam * x * x),
            ModelName::SingularDeform => {
                let u = lam * x;
                lam * (u - 4.0) / (2.0 * (1.0 - u) * (u - 2.0))
            }
            ModelName::PowerLaw => self.nu / x,
            ModelName::Mlo | ModelName::MloIsotonic | ModelName::Mlo3d => {
                -lam * x / (1.0 + lam * x * x)
            }
            ModelName::Higgs
            | ModelName::KNonpoly
            | ModelName::HiggsIsotonic
            | ModelName::KNonpolyIsotonic
            | ModelName::Higgs3d
            | ModelName::KNonpoly3d => -2.0 * k * x / (1.0 + k * x * x),
            ModelName::Delta | ModelName::DeltaIsotonic => -2.0 / x,
            ModelName::Mee => self.k * x,
        }
    }

    /// Restoring term g(x) of the equation of motion (V′/m for type-I).
    pub fn g_restoring(&self, x: f64) -> f64 {
        let (w0, lam, k, g) = (self.w0, self.lam, self.k, self.g);
        let w2 = w0 * w0;
        match self.name {
            ModelName::Exponential => w2 / lam * (1.0 - (-lam * x).exp()),
            ModelName::Inverse => w2 * x * (1.0 + lam * x),
            ModelName::InverseSquarePlus => w2 * x * (1.0 + lam * lam * x * x),
            ModelName::InverseSquareMinus => w2 * x * (1.0 - lam * lam * x * x),
            ModelName::SingularDeform => {
                let u = lam * x;
                2.0 * w2 * x * (u - 1.0) / (u - 2.0)
            }
            ModelName::PowerLaw => w2 * x / (self.nu + 1.0),
            ModelName::Mlo | ModelName::Mlo3d => w2 * x / (1.0 + lam * x * x),
            ModelName::Higgs | ModelName::Higgs3d => {
                let d = 1.0 + k * x * x;
                w2 * x * d * d
            }
            ModelName::KNonpoly | ModelName::KNonpoly3d => {
                w2 * x * (1.0 - k * x * x) / (1.0 + k * x * x)
            }
            ModelName::Delta => lam * x.powi(5),
            ModelName::MloIsotonic => {
                let d = 1.0 + lam * x * x;
                w2 * x / d - g * d / x.powi(3)
            }
            ModelName::HiggsIsotonic => {
                let d = 1.0 + k * x * x;
                (w2 * x - g / x.powi(3)) * d * d
            }
            ModelName::KNonpolyIsotonic => {
                let d = 1.0 + k * x * x;
                w2 * x * (1.0 - k * x * x) / d - g * d * d / x.powi(3)
            }
            ModelName::DeltaIsotonic => lam * x.powi(5) - 0.5 * g * x,
            ModelName::Mee => self.k * self.k / 9.0 * x.powi(3) + self.om * self.om * x,
        }
    }

    /// Hamiltonian value: p²/(2m(x)) + V(x), or x²/(2m(p)) + U(p) for MEE.
    pub fn hamiltonian(&self, x: f64, p: f64) -> f64 {
        if self.name == ModelName::Mee {
            x * x / (2.0 * self.mass(p)) + self.potential(p)
        } else {
            p * p / (2.0 * self.mass(x)) + self.potential(x)
        }
    }

    /// Closed-form x(t) (or r(t) for the radial systems).
    pub fn closed_form_position(
        &self,
        c: &SolutionConstants,
        t: f64,
    ) -> Result<f64, CatalogError> {
        self.closed_form(c, t).map(|(x, _)| x)
    }

    /// Time derivative of the closed-form solution.
    pub fn closed_form_velocity(
        &self,
        c: &SolutionConstants,
        t: f64,
    ) -> Result<f64, CatalogError> {
        self.closed_form(c, t).map(|(_, v)| v)
    }

    /// Closed-form (position, velocity) at time t.
    pub fn closed_form(
        &self,
        c: &SolutionConstants,
        t: f64,
    ) -> Result<(f64, f64), CatalogError> {
        let (w0, lam, k, g) = (self.w0, self.lam, self.k, self.g);
        let amp_err = |reason: String| CatalogError::AmplitudeOutOfRange {
            model: self.name,
            reason,
        };
        let a = c.amplitude;
        match self.name {
            ModelName::Exponential => {
                self.check_linear_bound(a)?;
                let th = w0 * t + c.phase;
                let (s, cs) = th.sin_cos();
                let d = 1.0 - lam * a * s;
                Ok(((-lam * a * s).ln_1p() / lam, -a * w0 * cs / d))
            }
            ModelName::Inverse => {
                self.check_linear_bound(a)?;
                let th = w0 * t + c.phase;
                let (s, cs) = th.sin_cos();
                let d = 1.0 - lam * a * s;
                Ok((a * s / d, a * w0 * cs / (d * d)))
            }
            ModelName::InverseSquarePlus => {
                // The + mass pairs with 1 − λ²A²sin² inside the radical.
                if a <= 0.0 || lam.abs() * a >= 1.0 {
                    return Err(amp_err(format!("need 0 < A < 1/|lambda|, got A = {a}")));
                }
                let th = w0 * t + c.phase;
                let (s, cs) = th.sin_cos();
                let d = 1.0 - lam * lam * a * a * s * s;
                Ok((a * s / d.sqrt(), a * w0 * cs / d.powf(1.5)))
            }
            ModelName::InverseSquareMinus => {
                if a <= 0.0 {
                    return Err(amp_err(format!("need A > 0, got A = {a}")));
                }
                let th = w0 * t + c.phase;
                let (s, cs) = th.sin_cos();
                let d = 1.0 + lam * lam * a * a * s * s;
                Ok((a * s / d.sqrt(), a * w0 * cs / d.powf(1.5)))
            }
            ModelName::SingularDeform => {
                self.check_linear_bound(a)?;
                let th = w0 * t + c.phase;
                let (s, cs) = th.sin_cos();
                let r = (lam * lam * a * a * s * s + 4.0).sqrt();
                let x = 0.5 * a * s * (r - lam * a * s);
                let v = 0.5 * a * w0 * cs
                    * ((2.0 * lam * lam * a * a * s * s + 4.0) / r - 2.0 * lam * a * s);
                Ok((x, v))
            }
            ModelName::PowerLaw => {
                let q = odd_integer_exponent(self.nu)
                    .ok_or(CatalogError::NoClosedForm(self.name))?;
                if a <= 0.0 {
                    return Err(amp_err(format!("need A > 0, got A = {a}")));
                }
                let th = w0 * t + c.phase;
                let (s, cs) = th.sin_cos();
                let y = a / self.a * s;
                let x = y.powi(q);
                let v = q as f64 * (a / self.a) * w0 * cs * y.powi(q - 1);
                Ok((x, v))
            }
            ModelName::Mlo => {
                let om = self.mlo_omega(a)?;
                let th = om * t + c.phase;
                let (s, cs) = th.sin_cos();
                Ok((a * s, a * om * cs))
            }
            ModelName::Higgs => {
                let om = self.higgs_omega(a)?;
                let th = om * t + c.phase;
                let (s, cs) = th.sin_cos();
                let d = 1.0 - k * a * a * s * s;
                Ok((a * s / d.sqrt(), a * om * cs / d.powf(1.5)))
            }
            ModelName::KNonpoly => {
                // x = A sn(Ωt + δ | m) solves the equation of motion exactly
                // when Ω = ω₀/(1 + kA²) and the elliptic parameter is
                // m = (kA²)², for either sign of k with |k|A² < 1.
                let kappa = k * a * a;
                if a <= 0.0 || kappa.abs() >= 1.0 {
                    return Err(amp_err(format!(
                        "need A > 0 with |k|A² < 1, got kA² = {kappa}"
                    )));
                }
                let m_ell = kappa * kappa;
                let u = c.phase + w0 * t / (1.0 + kappa);
                let (sn, cn, dn) = specfun::jacobi_sn_cn_dn(u, m_ell).map_err(|e| {
                    amp_err(format!("elliptic evaluation failed: {e}"))
                })?;
                Ok((a * sn, a * w0 / (1.0 + kappa) * cn * dn))
            }
            ModelName::Delta => {
                if c.c1 <= 0.0 {
                    return Err(amp_err(format!("need C1 > 0, got C1 = {}", c.c1)));
                }
                let shifted = c.c2 + c.c1.sqrt() * t;
                let u = lam / c.c1 + shifted * shifted;
                if u <= 0.0 {
                    return Err(amp_err(format!(
                        "requested time t = {t} lies beyond the singular time"
                    )));
                }
                let x = u.powf(-0.5);
                Ok((x, -x.powi(3) * c.c1.sqrt() * shifted))
            }
            ModelName::MloIsotonic => {
                let om2 = self.mlo_isotonic_omega_sq(a)?;
                let om = om2.sqrt();
                let th = om * t + c.phase;
                let (s, cs) = th.sin_cos();
                let spread = om2 * a.powi(4) - g;
                let x = ((g + spread * s * s) / (om2 * a * a)).sqrt();
                Ok((x, spread * s * cs / (om * a * a * x)))
            }
            ModelName::HiggsIsotonic => {
                let (om2, w_min, w_max) = self.higgs_isotonic_w(a)?;
                let om = om2.sqrt();
                let th = om * t + c.phase;
                let (s, cs) = th.sin_cos();
                let spread = w_max - w_min;
                let w = w_min + spread * s * s;
                let d = 1.0 - k * w;
                let x = (w / d).sqrt();
                Ok((x, spread * om * s * cs / (x * d * d)))
            }
            ModelName::KNonpolyIsotonic | ModelName::KNonpoly3d => {
                Err(CatalogError::NoClosedForm(self.name))
            }
            ModelName::DeltaIsotonic => {
                let eps2 = a * a + 2.0 * lam * g;
                if a < 0.0 || eps2 <= 0.0 {
                    return Err(amp_err(format!(
                        "need A >= 0 with A² + 2λg > 0, got A = {a}"
                    )));
                }
                let eps = eps2.sqrt();
                let om = (0.5 * g).sqrt();
                let psi = 2.0 * om * t + c.phase;
                let u = (eps + a * psi.cos()) / g;
                if u <= 0.0 {
                    return Err(amp_err(format!(
                        "requested time t = {t} lies beyond the singular time"
                    )));
                }
                let x = u.powf(-0.5);
                Ok((x, x.powi(3) * a * om * psi.sin() / g))
            }
            ModelName::Mlo3d => {
                let (om2, beta) = self.mlo_3d_shape(a, c.c2)?;
                let om = om2.sqrt();
                let th = om * t + c.phase;
                let (s, cs) = th.sin_cos();
                let root = (1.0 - beta * s * s).sqrt();
                let r = a * root;
                Ok((r, -a * beta * om * s * cs / root))
            }
            ModelName::Higgs3d => {
                let (om, cap, eta) = self.higgs_3d_shape(c.c2, c.c3)?;
                let th = om * t + c.phase;
                let (s, cs) = th.sin_cos();
                let w = cap * (eta + s);
                let d = 1.0 - k * w;
                let r = (w / d).sqrt();
                Ok((r, cap * om * cs / (2.0 * r * d * d)))
            }
            ModelName::Mee => {
                let beta = self.mee_beta(a)?;
                let th = self.om * t + c.phase;
                let (s, cs) = th.sin_cos();
                let d = 1.0 - beta * cs;
                Ok((a * s / d, a * self.om * (cs - beta) / (d * d)))
            }
        }
    }

    /// Angular frequency 2π/T of the position signal, when a law is known.
    ///
    /// The isotonic and radial sin²-families oscillate at twice the frequency
    /// printed inside their solution arguments, which is what is returned
    /// here. `None` marks the elliptic/implicit cases where the period is
    /// measured numerically instead.
    pub fn analytic_frequency(
        &self,
        c: &SolutionConstants,
    ) -> Result<Option<f64>, CatalogError> {
        let a = c.amplitude;
        match self.name {
            ModelName::Exponential | ModelName::Inverse | ModelName::SingularDeform => {
                self.check_linear_bound(a)?;
                Ok(Some(self.w0))
            }
            ModelName::InverseSquarePlus => {
                if a <= 0.0 || self.lam.abs() * a >= 1.0 {
                    return Err(CatalogError::AmplitudeOutOfRange {
                        model: self.name,
                        reason: format!("need 0 < A < 1/|lambda|, got A = {a}"),
                    });
                }
                Ok(Some(self.w0))
            }
            ModelName::InverseSquareMinus | ModelName::PowerLaw => {
                if a <= 0.0 {
                    return Err(CatalogError::AmplitudeOutOfRange {
                        model: self.name,
                        reason: format!("need A > 0, got A = {a}"),
                    });
                }
                Ok(Some(self.w0))
            }
            ModelName::Mlo => Ok(Some(self.mlo_omega(a)?)),
            ModelName::Higgs => Ok(Some(self.higgs_omega(a)?)),
            ModelName::MloIsotonic => {
                Ok(Some(2.0 * self.mlo_isotonic_omega_sq(a)?.sqrt()))
            }
            ModelName::HiggsIsotonic => Ok(Some(2.0 * self.higgs_isotonic_w(a)?.0.sqrt())),
            ModelName::DeltaIsotonic => Ok(Some((2.0 * self.g).sqrt())),
            ModelName::Mlo3d => Ok(Some(2.0 * self.mlo_3d_shape(a, c.c2)?.0.sqrt())),
            ModelName::Higgs3d => Ok(Some(self.higgs_3d_shape(c.c2, c.c3)?.0)),
            ModelName::Mee => {
                self.mee_beta(a)?;
                Ok(Some(self.om))
            }
            ModelName::KNonpoly
            | ModelName::KNonpolyIsotonic
            | ModelName::KNonpoly3d
            | ModelName::Delta => Ok(None),
        }
    }

    /// Amplitude–energy law. Registered only for MLO, HIGGS and K_NONPOLY;
    /// each value equals H evaluated on the closed-form orbit (the potential
    /// at the turning configuration).
    pub fn analytic_energy(&self, c: &SolutionConstants) -> Result<f64, CatalogError> {
        let a = c.amplitude;
        let (w2, lam, k) = (self.w0 * self.w0, self.lam, self.k);
        match self.name {
            ModelName::Mlo => {
                self.mlo_omega(a)?;
                Ok(0.5 * w2 * a * a / (1.0 + lam * a * a))
            }
            ModelName::Higgs => {
                self.higgs_omega(a)?;
                Ok(0.5 * w2 * a * a / (1.0 - k * a * a))
            }
            ModelName::KNonpoly => {
                let d = 1.0 + k * a * a;
                if a <= 0.0 || (k * a * a).abs() >= 1.0 {
                    return Err(CatalogError::AmplitudeOutOfRange {
                        model: self.name,
                        reason: format!("need A > 0 with |k|A² < 1, got A = {a}"),
                    });
                }
                Ok(0.5 * w2 * a * a / (d * d))
            }
            _ => Err(CatalogError::NoEnergyLaw(self.name)),
        }
    }

    // ---- per-family admissibility and shape helpers ----

    fn check_linear_bound(&self, a: f64) -> Result<(), CatalogError> {
        if a <= 0.0 || self.lam.abs() * a >= 1.0 {
            return Err(CatalogError::AmplitudeOutOfRange {
                model: self.name,
                reason: format!("need 0 < A < 1/|lambda|, got A = {a}"),
            });
        }
        Ok(())
    }

    fn mlo_omega(&self, a: f64) -> Result<f64, CatalogError> {
        let d = 1.0 + self.lam * a * a;
        if a <= 0.0 || d <= 0.0 {
            return Err(CatalogError::AmplitudeOutOfRange {
                model: self.name,
                reason: format!("need A > 0 with 1 + λA² > 0, got A = {a}"),
            });
        }
        Ok(self.w0 / d.sqrt())
    }

    fn higgs_omega(&self, a: f64) -> Result<f64, CatalogError> {
        let d = 1.0 - self.k * a * a;
        if a <= 0.0 || d <= 0.0 {
            return Err(CatalogError::AmplitudeOutOfRange {
                model: self.name,
                reason: format!("need A > 0 with 1 − kA² > 0, got A = {a}"),
            });
        }
        Ok(self.w0 / d.sqrt())
    }

    /// Ω² of the isotonic-MLO solution family, with A the outer turning point.
    fn mlo_isotonic_omega_sq(&self, a: f64) -> Result<f64, CatalogError> {
        let bad = |reason: String| CatalogError::AmplitudeOutOfRange {
            model: self.name,
            reason,
        };
        let d = 1.0 + self.lam * a * a;
        if a <= 0.0 || d <= 0.0 {
            return Err(bad(format!("need A > 0 inside the mass domain, got A = {a}")));
        }
        let om2 = self.w0 * self.w0 / d - self.lam * self.g / (a * a);
        if om2 <= 0.0 {
            return Err(bad(format!("unbounded motion: Ω² = {om2} is not positive")));
        }
        // A must be the outer turning point: g ≤ Ω²A⁴.
        if om2 * a.powi(4) < self.g {
            return Err(bad(format!(
                "A = {a} lies inside the inner turning point of the isotonic well"
            )));
        }
        Ok(om2)
    }

    /// (Ω², w_min, w_max) of the isotonic-Higgs family in w = x²/(1+kx²).
    fn higgs_isotonic_w(&self, a: f64) -> Result<(f64, f64, f64), CatalogError> {
        let bad = |reason: String| CatalogError::AmplitudeOutOfRange {
            model: self.name,
            reason,
        };
        let d = 1.0 + self.k * a * a;
        if a <= 0.0 || d <= 0.0 {
            return Err(bad(format!("need A > 0 inside the mass domain, got A = {a}")));
        }
        let w2 = self.w0 * self.w0;
        let om2 = d * (w2 + self.g * self.k / (a * a));
        if om2 <= 0.0 {
            return Err(bad(format!("unbounded motion: Ω² = {om2} is not positive")));
        }
        let w_max = a * a / d;
        let w_min = self.g / (w2 * a * a + self.g * self.k);
        if w_min <= 0.0 || w_min > w_max {
            return Err(bad(format!(
                "A = {a} lies inside the inner turning point of the isotonic well"
            )));
        }
        Ok((om2, w_min, w_max))
    }

    /// (Ω², β) of the radial MLO family; A is the apoapsis radius, c2 the
    /// total angular momentum.
    fn mlo_3d_shape(&self, a: f64, c2: f64) -> Result<(f64, f64), CatalogError> {
        let bad = |reason: String| CatalogError::AmplitudeOutOfRange {
            model: self.name,
            reason,
        };
        let d = 1.0 + self.lam * a * a;
        if a <= 0.0 || d <= 0.0 {
            return Err(bad(format!("need A > 0 inside the mass domain, got A = {a}")));
        }
        if c2 == 0.0 {
            return Err(bad("need C2 ≠ 0 for a nondegenerate radial orbit".to_string()));
        }
        let om2 = self.w0 * self.w0 / d - self.lam * c2 * c2 / (a * a);
        if om2 <= 0.0 {
            return Err(bad(format!("unbounded motion: Ω² = {om2} is not positive")));
        }
        let beta = 1.0 - c2 * c2 / (om2 * a.powi(4));
        if !(0.0..1.0).contains(&beta) {
            return Err(bad(format!(
                "A = {a} is not the apoapsis of the (A, C2) orbit: β = {beta}"
            )));
        }
        Ok((om2, beta))
    }

    /// (Ω, Λ, η) of the radial Higgs family from the integration constants.
    fn higgs_3d_shape(&self, c2: f64, c3: f64) -> Result<(f64, f64, f64), CatalogError> {
        let bad = |reason: String| CatalogError::AmplitudeOutOfRange {
            model: self.name,
            reason,
        };
        let w2 = self.w0 * self.w0;
        let disc = c3 * c3 - 4.0 * w2 * c2 * c2;
        if disc <= 0.0 {
            return Err(bad(format!(
                "need C3² − 4ω₀²C2² > 0 for a periodic orbit, got {disc}"
            )));
        }
        let s2 = self.k * self.k * c2 * c2 + self.k * c3 + w2;
        if s2 <= 0.0 {
            return Err(bad(format!("need k²C2² + kC3 + ω₀² > 0, got {s2}")));
        }
        let cap = disc.sqrt() / (2.0 * s2);
        let eta = (c3 + 2.0 * self.k * c2 * c2) / disc.sqrt();
        if eta <= 1.0 {
            return Err(bad(format!("orbit touches r = 0: η = {eta} ≤ 1")));
        }
        if self.k * cap * (eta + 1.0) >= 1.0 {
            return Err(bad("orbit escapes the mass domain".to_string()));
        }
        Ok((2.0 * s2.sqrt(), cap, eta))
    }

    fn mee_beta(&self, a: f64) -> Result<f64, CatalogError> {
        let beta = self.k * a / (3.0 * self.om);
        if a < 0.0 || beta >= 1.0 {
            return Err(CatalogError::AmplitudeOutOfRange {
                model: self.name,
                reason: format!("need 0 ≤ A < 3ω/k, got A = {a}"),
            });
        }
        Ok(beta)
    }
}

/// If 1/(ν+1) is (numerically) a positive odd integer, return it.
pub(crate) fn odd_integer_exponent(nu: f64) -> Option<i32> {
    let q = 1.0 / (nu + 1.0);
    let rounded = q.round();
    if (q - rounded).abs() < 1e-9 && rounded > 0.0 && rounded < 2e9 && (rounded as i64) % 2 == 1 {
        Some(rounded as i32)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numdiff::{self, DerivOrder};

    fn params(kv: &[(&str, f64)]) -> BTreeMap<String, f64> {
        kv.iter().map(|&(k, v)| (k.to_string(), v)).collect()
    }

    fn model(name: ModelName, kv: &[(&str, f64)]) -> OscillatorModel {
        get_model(name, &params(kv)).expect("valid model")
    }

    fn splitmix(state: &mut u64) -> f64 {
        *state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = *state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^= z >> 31;
        (z >> 11) as f64 / (1u64 << 53) as f64
    }

    /// The twelve 1D type-I systems with periodic solution oracles, with
    /// admissible parameters and constants used across the oracle tests.
    fn oracle_suite() -> Vec<(OscillatorModel, SolutionConstants)> {
        vec![
            (
                model(ModelName::Exponential, &[("omega0", 0.9), ("lambda", 1.0)]),
                SolutionConstants::new(0.55, 0.3),
            ),
            (
                model(ModelName::Inverse, &[("omega0", 1.1), ("lambda", 0.4)]),
                SolutionConstants::new(1.3, 1.1),
            ),
            (
                model(ModelName::InverseSquarePlus, &[("omega0", 0.8), ("lambda", 0.6)]),
                SolutionConstants::new(1.2, 0.7),
            ),
            (
                model(ModelName::InverseSquareMinus, &[("omega0", 1.2), ("lambda", 0.5)]),
                SolutionConstants::new(2.5, 2.0),
            ),
            (
                model(ModelName::SingularDeform, &[("omega0", 1.0), ("lambda", 0.5)]),
                SolutionConstants::new(1.4, 0.4),
            ),
            (
                model(
                    ModelName::PowerLaw,
                    &[("omega0", 1.0), ("a", 1.3), ("nu", -2.0 / 3.0)],
                ),
                SolutionConstants::new(0.9, 0.3),
            ),
            (
                model(ModelName::Mlo, &[("omega0", 1.0), ("lambda", 0.8)]),
                SolutionConstants::new(1.5, 0.2),
            ),
            (
                model(ModelName::Higgs, &[("omega0", 1.0), ("k", 0.3)]),
                SolutionConstants::new(1.1, 0.9),
            ),
            (
                model(ModelName::KNonpoly, &[("omega0", 1.0), ("k", 0.3)]),
                SolutionConstants::new(1.2, 0.5),
            ),
            (
                model(
                    ModelName::MloIsotonic,
                    &[("omega0", 1.0), ("lambda", -0.15), ("g", 0.8)],
                ),
                SolutionConstants::new(1.9, 0.6),
            ),
            (
                model(
                    ModelName::HiggsIsotonic,
                    &[("omega0", 1.0), ("k", 0.25), ("g", 0.7)],
                ),
                SolutionConstants::new(1.6, 1.3),
            ),
            (
                model(ModelName::DeltaIsotonic, &[("lambda", 0.3), ("g", 1.5)]),
                SolutionConstants::new(0.8, 0.5),
            ),
        ]
    }

    #[test]
    fn oracles_satisfy_equations_of_motion() {
        for (m, c) in oracle_suite() {
            let freq = m
                .analytic_frequency(&c)
                .unwrap()
                .unwrap_or(m.w0 / (1.0 + m.k * c.amplitude * c.amplitude));
            let period = 2.0 * std::f64::consts::PI / freq;
            let pos = |t: f64| m.closed_form_position(&c, t).unwrap();
            let mut worst: f64 = 0.0;
            for i in 0..50 {
                let t = (i as f64 + 0.331) / 50.0 * period;
                let (x, v) = m.closed_form(&c, t).unwrap();
                let (acc, _) = numdiff::derivative(&pos, t, DerivOrder::Second);
                let residual = acc + m.f_coeff(x) * v * v + m.g_restoring(x);
                worst = worst.max(residual.abs());
            }
            assert!(worst < 1e-7, "{}: EL residual {worst}", m.name());
        }
    }

    #[test]
    fn mee_oracle_satisfies_equation_of_motion() {
        let m = model(ModelName::Mee, &[("omega", 1.0), ("k", 1.0)]);
        let c = SolutionConstants::new(1.4, 0.7);
        let pos = |t: f64| m.closed_form_position(&c, t).unwrap();
        for i in 0..50 {
            let t = (i as f64 + 0.17) / 50.0 * 2.0 * std::f64::consts::PI;
            let (x, v) = m.closed_form(&c, t).unwrap();
            let (acc, _) = numdiff::derivative(&pos, t, DerivOrder::Second);
            let residual = acc + m.f_coeff(x) * v + m.g_restoring(x);
            assert!(residual.abs() < 1e-7, "MEE residual {residual} at t = {t}");
        }
    }

    #[test]
    fn delta_oracle_satisfies_equation_of_motion() {
        let m = model(ModelName::Delta, &[("lambda", 0.3)]);
        let mut c = SolutionConstants::new(0.0, 0.0);
        c.c1 = 1.0;
        c.c2 = 0.5;
        let pos = |t: f64| m.closed_form_position(&c, t).unwrap();
        for i in 0..50 {
            let t = i as f64 / 25.0;
            let (x, v) = m.closed_form(&c, t).unwrap();
            let (acc, _) = numdiff::derivative(&pos, t, DerivOrder::Second);
            let residual = acc + m.f_coeff(x) * v * v + m.g_restoring(x);
            assert!(residual.abs() < 1e-7, "delta residual {residual} at t = {t}");
        }
        // The conserved energy along this family equals C1.
        let (x, v) = m.closed_form(&c, 0.7).unwrap();
        let p = m.mass(x) * v;
        assert!((m.hamiltonian(x, p) - c.c1).abs() < 1e-12);
    }

    #[test]
    fn radial_oracles_satisfy_reduced_equations() {
        // Radial EOM with the centrifugal term: r̈ + f ṙ² + g(r) − Γ(r) = 0,
        // where Γ = C2²(1+λr²)/r³ for the flat-angular MLO metric and
        // Γ = C2²(1+kr²)²/r³ for the Higgs metric.
        let m = model(ModelName::Mlo3d, &[("omega0", 1.0), ("lambda", 0.4)]);
        let mut c = SolutionConstants::new(1.4, 0.3);
        c.c2 = 0.9;
        let pos = |t: f64| m.closed_form_position(&c, t).unwrap();
        for i in 0..50 {
            let t = (i as f64 + 0.4) / 50.0 * 6.0;
            let (r, v) = m.closed_form(&c, t).unwrap();
            let (acc, _) = numdiff::derivative(&pos, t, DerivOrder::Second);
            let gamma = c.c2 * c.c2 * (1.0 + 0.4 * r * r) / r.powi(3);
            let residual = acc + m.f_coeff(r) * v * v + m.g_restoring(r) - gamma;
            assert!(residual.abs() < 1e-7, "MLO_3D residual {residual} at t = {t}");
        }

        let m = model(ModelName::Higgs3d, &[("omega0", 1.0), ("k", 0.2)]);
        let mut c = SolutionConstants::new(0.0, 0.8);
        c.c2 = 0.7;
        c.c3 = 2.4;
        let pos = |t: f64| m.closed_form_position(&c, t).unwrap();
        for i in 0..50 {
            let t = (i as f64 + 0.4) / 50.0 * 4.0;
            let (r, v) = m.closed_form(&c, t).unwrap();
            let (acc, _) = numdiff::derivative(&pos, t, DerivOrder::Second);
            let d = 1.0 + 0.2 * r * r;
            let gamma = c.c2 * c.c2 * d * d / r.powi(3);
            let residual = acc + m.f_coeff(r) * v * v + m.g_restoring(r) - gamma;
            assert!(residual.abs() < 1e-7, "HIGGS_3D residual {residual} at t = {t}");
        }
    }

    #[test]
    fn closed_form_velocity_matches_numeric_derivative() {
        for (m, c) in oracle_suite() {
            let pos = |t: f64| m.closed_form_position(&c, t).unwrap();
            for i in 0..10 {
                let t = 0.21 + i as f64 * 0.37;
                let v_exact = m.closed_form_velocity(&c, t).unwrap();
                let (v_num, _) = numdiff::derivative(&pos, t, DerivOrder::First);
                assert!(
                    (v_exact - v_num).abs() < 1e-8 * v_exact.abs().max(1.0),
                    "{}: velocity mismatch at t = {t}: {v_exact} vs {v_num}",
                    m.name()
                );
            }
        }
    }

    #[test]
    fn hamiltonians_match_their_printed_expressions() {
        type Printed = fn(&OscillatorModel, f64, f64) -> f64;
        let cases: Vec<(OscillatorModel, f64, f64, Printed)> = vec![
            (
                model(ModelName::Exponential, &[("omega0", 0.9), ("lambda", 0.7)]),
                -1.0,
                1.0,
                |m, x, p| {
                    let e = (m.lam * x).exp();
                    p * p * (-2.0 * m.lam * x).exp() / (2.0 * m.lam * m.lam)
                        + 0.5 * m.w0 * m.w0 * (1.0 - e) * (1.0 - e)
                },
            ),
            (
                model(ModelName::Inverse, &[("omega0", 1.1), ("lambda", 0.4)]),
                -1.5,
                3.0,
                |m, x, p| {
                    let d = 1.0 + m.lam * x;
                    d.powi(4) * p * p / 2.0 + m.w0 * m.w0 * x * x / (2.0 * d * d)
                },
            ),
            (
                model(ModelName::InverseSquarePlus, &[("omega0", 0.8), ("lambda", 0.6)]),
                -2.0,
                2.0,
                |m, x, p| {
                    let d = 1.0 + m.lam * m.lam * x * x;
                    d.powi(3) * p * p / 2.0 + m.w0 * m.w0 * x * x / (2.0 * d)
                },
            ),
            (
                model(ModelName::InverseSquareMinus, &[("omega0", 1.2), ("lambda", 0.5)]),
                -1.8,
                1.8,
                |m, x, p| {
                    let d = 1.0 - m.lam * m.lam * x * x;
                    d.powi(3) * p * p / 2.0 + m.w0 * m.w0 * x * x / (2.0 * d)
                },
            ),
            (
                model(ModelName::SingularDeform, &[("omega0", 1.0), ("lambda", 0.5)]),
                -3.0,
                1.8,
                |m, x, p| {
                    let u = m.lam * x;
                    -2.0 * (u - 1.0).powi(3) / ((u - 2.0) * (u - 2.0)) * p * p
                        + m.w0 * m.w0 * x * x / (2.0 * (1.0 - u))
                },
            ),
            (
                model(
                    ModelName::PowerLaw,
                    &[("omega0", 1.0), ("a", 1.3), ("nu", -2.0 / 3.0)],
                ),
                0.05,
                2.0,
                |m, x, p| {
                    let c = m.a * (m.nu + 1.0);
                    x.powf(-2.0 * m.nu) * p * p / (2.0 * c * c)
                        + 0.5 * m.w0 * m.w0 * m.a * m.a * x.powf(2.0 * m.nu + 2.0)
                },
            ),
            (
                model(ModelName::Mlo, &[("omega0", 1.0), ("lambda", 0.8)]),
                -2.0,
                2.0,
                |m, x, p| {
                    let d = 1.0 + m.lam * x * x;
                    d * p * p / 2.0 + m.w0 * m.w0 * x * x / (2.0 * d)
                },
            ),
            (
                model(ModelName::Higgs, &[("omega0", 1.0), ("k", 0.3)]),
                -2.0,
                2.0,
                |m, x, p| {
                    let d = 1.0 + m.k * x * x;
                    d * d * p * p / 2.0 + 0.5 * m.w0 * m.w0 * x * x
                },
            ),
            (
                model(ModelName::KNonpoly, &[("omega0", 1.0), ("k", 0.3)]),
                -2.0,
                2.0,
                |m, x, p| {
                    let d = 1.0 + m.k * x * x;
                    d * d * p * p / 2.0 + m.w0 * m.w0 * x * x / (2.0 * d * d)
                },
            ),
            (
                model(ModelName::Delta, &[("lambda", 0.2)]),
                0.2,
                2.0,
                |m, x, p| x.powi(4) * p * p / 4.0 + m.lam * x * x,
            ),
            (
                model(ModelName::DeltaIsotonic, &[("lambda", 0.3), ("g", 1.5)]),
                0.3,
                2.0,
                |m, x, p| x.powi(4) * p * p / 4.0 + m.lam * x * x + m.g / (2.0 * x * x),
            ),
        ];
        let mut state = 0x5eed_ca7a_1064u64 ^ 0xdead_beef;
        for (m, x_lo, x_hi, printed) in cases {
            for _ in 0..100 {
                let x = x_lo + (x_hi - x_lo) * splitmix(&mut state);
                let p = -2.0 + 4.0 * splitmix(&mut state);
                let direct = m.hamiltonian(x, p);
                let reference = printed(&m, x, p);
                assert!(
                    (direct - reference).abs() <= 1e-12 * direct.abs().max(1.0),
                    "{}: H mismatch at ({x}, {p}): {direct} vs {reference}",
                    m.name()
                );
            }
        }
    }

    #[test]
    fn lienard_data_matches_mass_and_potential() {
        // f = m′/(2m) and g = V′/m for each 1D type-I model, under numeric
        // differentiation at interior points.
        let pts = [
            (model(ModelName::Exponential, &[("omega0", 0.9), ("lambda", 0.7)]), 0.4),
            (model(ModelName::Inverse, &[("omega0", 1.1), ("lambda", 0.4)]), 0.8),
            (model(ModelName::InverseSquarePlus, &[("omega0", 0.8), ("lambda", 0.6)]), 0.9),
            (model(ModelName::InverseSquareMinus, &[("omega0", 1.2), ("lambda", 0.5)]), 0.7),
            (model(ModelName::SingularDeform, &[("omega0", 1.0), ("lambda", 0.5)]), 0.6),
            (
                model(ModelName::PowerLaw, &[("omega0", 1.0), ("a", 1.3), ("nu", -2.0 / 3.0)]),
                0.8,
            ),
            (model(ModelName::Mlo, &[("omega0", 1.0), ("lambda", 0.8)]), 1.1),
            (model(ModelName::Higgs, &[("omega0", 1.0), ("k", 0.3)]), 1.2),
            (model(ModelName::KNonpoly, &[("omega0", 1.0), ("k", 0.3)]), 0.9),
            (model(ModelName::Delta, &[("lambda", 0.2)]), 0.9),
            (
                model(ModelName::MloIsotonic, &[("omega0", 1.0), ("lambda", -0.15), ("g", 0.8)]),
                1.1,
            ),
            (
                model(ModelName::HiggsIsotonic, &[("omega0", 1.0), ("k", 0.25), ("g", 0.7)]),
                0.9,
            ),
            (
                model(
                    ModelName::KNonpolyIsotonic,
                    &[("omega0", 1.0), ("k", 0.25), ("g", 0.7)],
                ),
                1.05,
            ),
            (model(ModelName::DeltaIsotonic, &[("lambda", 0.3), ("g", 1.5)]), 0.8),
            (model(ModelName::Mlo3d, &[("omega0", 1.0), ("lambda", 0.4)]), 1.2),
            (model(ModelName::Higgs3d, &[("omega0", 1.0), ("k", 0.2)]), 1.3),
            (model(ModelName::KNonpoly3d, &[("omega0", 1.0), ("k", 0.2)]), 1.3),
        ];
        for (m, x) in pts {
            let (m_prime, _) = numdiff::derivative(&|y| m.mass(y), x, DerivOrder::First);
            let (v_prime, _) = numdiff::derivative(&|y| m.potential(y), x, DerivOrder::First);
            let f_ref = m_prime / (2.0 * m.mass(x));
            let g_ref = v_prime / m.mass(x);
            assert!(
                (m.f_coeff(x) - f_ref).abs() < 1e-6 * f_ref.abs().max(1.0),
                "{}: f mismatch at {x}",
                m.name()
            );
            assert!(
                (m.g_restoring(x) - g_ref).abs() < 1e-6 * g_ref.abs().max(1.0),
                "{}: g mismatch at {x}",
                m.name()
            );
        }
    }

    #[test]
    fn flat_limits_reduce_to_harmonic_motion() {
        let harmonic = |a: f64, d: f64, w: f64, t: f64| a * (w * t + d).sin();
        let cases = [
            model(ModelName::Mlo, &[("omega0", 1.3), ("lambda", 0.0)]),
            model(ModelName::Higgs, &[("omega0", 1.3), ("k", 0.0)]),
            model(ModelName::KNonpoly, &[("omega0", 1.3), ("k", 0.0)]),
            model(ModelName::PowerLaw, &[("omega0", 1.3), ("a", 1.0), ("nu", 0.0)]),
        ];
        for m in cases {
            let c = SolutionConstants::new(0.9, 0.4);
            for i in 0..25 {
                let t = i as f64 * 0.37;
                let x = m.closed_form_position(&c, t).unwrap();
                let x_ref = harmonic(0.9, 0.4, 1.3, t);
                assert!(
                    (x - x_ref).abs() < 1e-12,
                    "{}: flat limit mismatch at t = {t}",
                    m.name()
                );
            }
        }
    }

    #[test]
    fn frequency_laws_match_quoted_values() {
        let mlo = model(ModelName::Mlo, &[("omega0", 1.0), ("lambda", 1.0)]);
        let f = mlo.analytic_frequency(&SolutionConstants::new(1.0, 0.0)).unwrap().unwrap();
        assert!((f - 1.0 / 2.0f64.sqrt()).abs() < 1e-12);

        let higgs = model(ModelName::Higgs, &[("omega0", 1.0), ("k", 0.5)]);
        let f = higgs.analytic_frequency(&SolutionConstants::new(1.0, 0.0)).unwrap().unwrap();
        assert!((f - 2.0f64.sqrt()).abs() < 1e-12);

        let exp = model(ModelName::Exponential, &[("omega0", 0.31622776601683794), ("lambda", 1.0)]);
        let f = exp.analytic_frequency(&SolutionConstants::new(0.5, 0.0)).unwrap().unwrap();
        assert!((f - 0.31622776601683794).abs() < 1e-15);

        let knp = model(ModelName::KNonpoly, &[("omega0", 1.0), ("k", 0.1)]);
        assert_eq!(knp.analytic_frequency(&SolutionConstants::new(1.0, 0.0)).unwrap(), None);
    }

    #[test]
    fn energy_laws_match_orbit_hamiltonians() {
        // Each law equals H on the closed-form orbit; checked at a generic
        // time against mass/potential directly.
        let cases = [
            (model(ModelName::Mlo, &[("omega0", 1.0), ("lambda", 0.0)]), 2.0, 2.0),
            (model(ModelName::Mlo, &[("omega0", 1.0), ("lambda", 0.7)]), 1.1, f64::NAN),
            (model(ModelName::Higgs, &[("omega0", 1.0), ("k", 0.1)]), 1.0, 1.0 / 1.8),
            (model(ModelName::KNonpoly, &[("omega0", 1.0), ("k", 0.1)]), 1.0, 0.5 / 1.21),
        ];
        for (m, a, expected) in cases {
            let c = SolutionConstants::new(a, 0.37);
            let e_law = m.analytic_energy(&c).unwrap();
            if expected.is_finite() {
                assert!((e_law - expected).abs() < 1e-12, "{}: law value", m.name());
            }
            let (x, v) = m.closed_form(&c, 0.83).unwrap();
            let h = m.hamiltonian(x, m.mass(x) * v);
            assert!(
                (e_law - h).abs() < 1e-10 * h.abs().max(1.0),
                "{}: energy law {e_law} differs from orbit H {h}",
                m.name()
            );
        }
        let exp = model(ModelName::Exponential, &[("omega0", 1.0), ("lambda", 1.0)]);
        assert!(matches!(
            exp.analytic_energy(&SolutionConstants::new(0.5, 0.0)),
            Err(CatalogError::NoEnergyLaw(ModelName::Exponential))
        ));
    }

    #[test]
    fn isotonic_turning_points_bracket_the_motion() {
        let m = model(ModelName::MloIsotonic, &[("omega0", 1.0), ("lambda", -0.15), ("g", 0.8)]);
        let a = 1.9;
        let c = SolutionConstants::new(a, 0.0);
        // Phase 0 starts at the inner turning point √g/(ΩA); quarter period
        // later the solution reaches the outer turning point A.
        let om2 = m.mlo_isotonic_omega_sq(a).unwrap();
        let quarter = 0.5 * std::f64::consts::PI / om2.sqrt();
        let x_inner = m.closed_form_position(&c, 0.0).unwrap();
        let x_outer = m.closed_form_position(&c, quarter).unwrap();
        assert!((x_inner - (0.8f64).sqrt() / (om2.sqrt() * a)).abs() < 1e-12);
        assert!((x_outer - a).abs() < 1e-10);

        let m = model(ModelName::HiggsIsotonic, &[("omega0", 1.0), ("k", 0.25), ("g", 0.7)]);
        let a = 1.6;
        let c = SolutionConstants::new(a, 0.0);
        let (om2, _, _) = m.higgs_isotonic_w(a).unwrap();
        let quarter = 0.5 * std::f64::consts::PI / om2.sqrt();
        let x_inner = m.closed_form_position(&c, 0.0).unwrap();
        let x_outer = m.closed_form_position(&c, quarter).unwrap();
        // Inner turning point of the isotonic-Higgs well is √g/(ω₀A).
        assert!((x_inner - (0.7f64).sqrt() / a).abs() < 1e-12);
        assert!((x_outer - a).abs() < 1e-10);
    }

    #[test]
    fn domains_classify_boundaries() {
        let delta = model(ModelName::Delta, &[("lambda", 0.1)]);
        let d = delta.domain();
        assert_eq!(d.pieces.len(), 2);
        assert!(d.contains(-0.5) && d.contains(0.5) && !d.contains(0.0));

        let mlo = model(ModelName::Mlo, &[("omega0", 1.0), ("lambda", -0.1)]);
        let d = mlo.domain();
        assert_eq!(d.pieces.len(), 1);
        let b = 1.0 / 0.1f64.sqrt();
        assert!((d.pieces[0].hi - b).abs() < 1e-15 && (d.pieces[0].lo + b).abs() < 1e-15);
        assert_eq!(d.pieces[0].hi_kind, EndpointKind::Singular);
        assert!(!d.contains(b) && d.contains(0.99 * b));

        let inv = model(ModelName::Inverse, &[("omega0", 1.0), ("lambda", 0.5)]);
        let d = inv.domain();
        assert!(d.contains(0.0) && !d.contains(-2.0));

        let mee = model(ModelName::Mee, &[("omega", 1.0), ("k", 1.0)]);
        assert!(mee.domain().contains(1e9));
    }

    #[test]
    fn registration_rejects_bad_parameters() {
        let missing = get_model(ModelName::Mlo, &params(&[("omega0", 1.0)]));
        assert!(matches!(missing, Err(CatalogError::MissingParam { name: "lambda", .. })));

        let unknown = get_model(ModelName::Mlo, &params(&[("omega0", 1.0), ("lamda", 0.1)]));
        assert!(matches!(unknown, Err(CatalogError::DomainViolation { .. })));

        let bad_g = get_model(
            ModelName::MloIsotonic,
            &params(&[("omega0", 1.0), ("lambda", 0.1), ("g", -1.0)]),
        );
        assert!(matches!(bad_g, Err(CatalogError::DomainViolation { .. })));

        let bad_nu = get_model(
            ModelName::PowerLaw,
            &params(&[("omega0", 1.0), ("a", 1.0), ("nu", -1.5)]),
        );
        assert!(matches!(bad_nu, Err(CatalogError::DomainViolation { .. })));

        let bad_mee = get_model(ModelName::Mee, &params(&[("omega", 1.0), ("k", -1.0)]));
        assert!(matches!(bad_mee, Err(CatalogError::DomainViolation { .. })));
    }

    #[test]
    fn amplitude_bounds_are_enforced() {
        let exp = model(ModelName::Exponential, &[("omega0", 1.0), ("lambda", 0.5)]);
        assert!(exp.closed_form_position(&SolutionConstants::new(2.0, 0.0), 0.0).is_err());
        assert!(exp.closed_form_position(&SolutionConstants::new(1.9, 0.0), 0.0).is_ok());

        let mlo = model(ModelName::Mlo, &[("omega0", 1.0), ("lambda", -0.25)]);
        assert!(mlo.closed_form_position(&SolutionConstants::new(2.0, 0.0), 0.0).is_err());
        assert!(mlo.closed_form_position(&SolutionConstants::new(1.9, 0.0), 0.0).is_ok());

        let knp = model(ModelName::KNonpoly, &[("omega0", 1.0), ("k", 0.25)]);
        assert!(knp.closed_form_position(&SolutionConstants::new(2.0, 0.0), 0.0).is_err());

        let mee = model(ModelName::Mee, &[("omega", 1.0), ("k", 1.0)]);
        assert!(mee.closed_form_position(&SolutionConstants::new(3.0, 0.0), 0.0).is_err());
        assert!(mee.closed_form_position(&SolutionConstants::new(2.9, 0.0), 0.0).is_ok());
    }

    #[test]
    fn implicit_solutions_report_no_closed_form() {
        let m = model(
            ModelName::KNonpolyIsotonic,
            &[("omega0", 1.0), ("k", 0.25), ("g", 0.7)],
        );
        assert!(matches!(
            m.closed_form_position(&SolutionConstants::new(1.0, 0.0), 0.0),
            Err(CatalogError::NoClosedForm(_))
        ));
        let m = model(ModelName::KNonpoly3d, &[("omega0", 1.0), ("k", 0.2)]);
        assert!(matches!(
            m.closed_form_position(&SolutionConstants::new(1.0, 0.0), 0.0),
            Err(CatalogError::NoClosedForm(_))
        ));
        // A power-law exponent whose reciprocal is not an odd integer has no
        // full-period closed form either.
        let m = model(ModelName::PowerLaw, &[("omega0", 1.0), ("a", 1.0), ("nu", 0.5)]);
        assert!(matches!(
            m.closed_form_position(&SolutionConstants::new(1.0, 0.0), 0.0),
            Err(CatalogError::NoClosedForm(_))
        ));
    }

    #[test]
    fn delta_closed_form_stops_at_singular_time() {
        let m = model(ModelName::Delta, &[("lambda", -0.25)]);
        let mut c = SolutionConstants::new(0.0, 0.0);
        c.c1 = 1.0;
        c.c2 = 0.1;
        // λ/C1 + (C2 + √C1 t)² vanishes at t = 0.4: the solution escapes to
        // infinity there and only exists on the far side of that time.
        assert!(m.closed_form_position(&c, 0.5).is_ok());
        assert!(m.closed_form_position(&c, 0.4).is_err());
        assert!(m.closed_form_position(&c, 0.3).is_err());
    }

    #[test]
    fn taxonomy_counts_and_names_round_trip() {
        assert_eq!(ModelName::ALL.len(), 18);
        let type2: Vec<_> = ModelName::ALL
            .iter()
            .filter(|m| m.lienard_type() == LienardType::II)
            .collect();
        assert_eq!(type2, vec![&ModelName::Mee]);
        assert_eq!(ModelName::ALL.iter().filter(|m| m.dimension() == 3).count(), 3);

        for name in ModelName::ALL {
            let s = name.as_str();
            assert_eq!(s.parse::<ModelName>().unwrap(), name);
            let json = serde_json::to_string(&name).unwrap();
            assert_eq!(json, format!("\"{s}\""));
            assert_eq!(serde_json::from_str::<ModelName>(&json).unwrap(), name);
        }
    }

    #[test]
    fn mee_momentum_bound_holds_on_orbit() {
        let m = model(ModelName::Mee, &[("omega", 1.0), ("k", 1.0)]);
        let c = SolutionConstants::new(2.0, 0.0);
        for i in 0..200 {
            let t = i as f64 * 0.05;
            let (x, _) = m.closed_form(&c, t).unwrap();
            assert!(x.is_finite());
        }
        // H at (x, p) = (1, 0) per the momentum-space form: 9ω⁴/2k²·(k²x²/9ω²).
        assert!((m.hamiltonian(1.0, 0.0) - 0.5).abs() < 1e-14);
    }
}
