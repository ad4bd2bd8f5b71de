//! Newton-type iteration schemes.
//!
//! Every scheme here is built from the Newton map `N(z) = z - p(z)/p'(z)` and
//! the convex step `(1 - t) z + t N(z)`:
//!
//! | preset        | chain weights  | one outer step                              |
//! |---------------|----------------|---------------------------------------------|
//! | `newton`      | `[1]`          | `N(z)`                                      |
//! | `picard_mann` | `[α, 1]`       | `v = (1-α)z + αN(z)`, `N(v)`                |
//! | `three_step`  | `[γ, β, α]`    | `w`, then `v`, then `(1-α)v + αN(v)`        |
//! | `kadioglu`    | `[β, α, 1]`    | `w = (1-β)z + βN(z)`, `v = (1-α)w + αN(w)`, `N(v)` |
//!
//! Chain weights are listed innermost first: the first weight is applied to
//! the current iterate, the last weight produces the next iterate. Reading the
//! usual stacked notation bottom to top gives the weight order.
//!
//! Two schemes are not chains. The S-iteration mixes two Newton images,
//! `(1-α) N(z) + α N((1-β) z + β N(z))`, and the Sen map
//! `z - 2 p(z) / (p'(z) + sgn(p'(z)) M)` uses an upper bound `M` on `|p'|`.
//! The Sen map is only meaningful on the real line; on complex inputs the
//! sign of `Re p'(z)` is used.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::poly::Polynomial;

/// `|p'(z)|` at or below `DERIVATIVE_FLOOR * (1 + |z|^(deg-1))` counts as zero.
pub const DERIVATIVE_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum SchemeError {
    #[error("derivative vanished at {at}")]
    DerivativeVanished { at: Complex64 },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SchemeSpecError {
    #[error("unknown scheme '{0}'")]
    UnknownScheme(String),
    #[error("scheme '{name}' takes {expected} parameter(s), got {got}")]
    Arity { name: String, expected: String, got: usize },
    #[error("invalid number '{0}'")]
    Number(String),
    #[error("{name} must lie in {range}, got {value}")]
    OutOfRange { name: &'static str, range: &'static str, value: f64 },
    #[error("a chain needs at least one weight")]
    EmptyChain,
}

/// Newton map of a polynomial with its derivative cached.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonMap {
    p: Polynomial,
    dp: Polynomial,
}

impl NewtonMap {
    pub fn new(p: Polynomial) -> Self {
        let dp = p.derivative();
        Self { p, dp }
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.p
    }

    pub fn derivative(&self) -> &Polynomial {
        &self.dp
    }

    /// `p'(z)`, or an error when it falls under the derivative floor.
    #[inline]
    fn slope(&self, z: Complex64) -> Result<Complex64, SchemeError> {
        let d = self.dp.eval(z);
        let floor = DERIVATIVE_FLOOR * (1.0 + z.norm().powi(self.p.degree() as i32 - 1));
        if d.norm() <= floor {
            Err(SchemeError::DerivativeVanished { at: z })
        } else {
            Ok(d)
        }
    }

    /// `z - p(z)/p'(z)`.
    #[inline]
    pub fn step(&self, z: Complex64) -> Result<Complex64, SchemeError> {
        let d = self.slope(z)?;
        Ok(z - self.p.eval(z) / d)
    }

    /// `(1 - t) z + t N(z)`; `t == 1` returns `N(z)` unchanged.
    #[inline]
    pub fn convex_step(&self, z: Complex64, t: f64) -> Result<Complex64, SchemeError> {
        let n = self.step(z)?;
        Ok(if t == 1.0 { n } else { z * (1.0 - t) + n * t })
    }
}

/// Sen's Newton-like map `z - 2p(z) / (p'(z) + sgn(p'(z)) M)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SenMap {
    newton: NewtonMap,
    bound: f64,
}

impl SenMap {
    pub fn new(newton: NewtonMap, bound: f64) -> Result<Self, SchemeSpecError> {
        if !(bound > 0.0 && bound.is_finite()) {
            return Err(SchemeSpecError::OutOfRange { name: "M", range: "(0, inf)", value: bound });
        }
        Ok(Self { newton, bound })
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn step(&self, z: Complex64) -> Result<Complex64, SchemeError> {
        sen_step(&self.newton, self.bound, z)
    }
}

fn sen_step(map: &NewtonMap, bound: f64, z: Complex64) -> Result<Complex64, SchemeError> {
    let d = map.slope(z)?;
    let sign = if d.re > 0.0 {
        1.0
    } else if d.re < 0.0 {
        -1.0
    } else {
        0.0
    };
    Ok(z - map.p.eval(z) * 2.0 / (d + sign * bound))
}

#[derive(Debug, Clone, PartialEq)]
pub enum SchemeKind {
    /// Convex steps applied in order, innermost first.
    Chain(Vec<f64>),
    /// S-iteration `(1-α) N(z) + α N((1-β) z + β N(z))`.
    SHybrid { alpha: f64, beta: f64 },
    /// Sen's map with derivative bound `M`.
    Sen { bound: f64 },
}

/// A validated Newton-type scheme with constant parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationScheme {
    kind: SchemeKind,
}

fn check(name: &'static str, value: f64, closed_top: bool) -> Result<f64, SchemeSpecError> {
    let ok = value > 0.0 && if closed_top { value <= 1.0 } else { value < 1.0 };
    if ok {
        Ok(value)
    } else {
        let range = if closed_top { "(0, 1]" } else { "(0, 1)" };
        Err(SchemeSpecError::OutOfRange { name, range, value })
    }
}

impl IterationScheme {
    /// Generic chain of convex steps; weights in `(0, 1]`, innermost first.
    pub fn chain(weights: Vec<f64>) -> Result<Self, SchemeSpecError> {
        if weights.is_empty() {
            return Err(SchemeSpecError::EmptyChain);
        }
        for &w in &weights {
            check("chain weight", w, true)?;
        }
        Ok(Self { kind: SchemeKind::Chain(weights) })
    }

    pub fn newton() -> Self {
        Self { kind: SchemeKind::Chain(vec![1.0]) }
    }

    /// `z' = N((1-α) z + α N(z))`.
    pub fn picard_mann(alpha: f64) -> Result<Self, SchemeSpecError> {
        check("alpha", alpha, true)?;
        Self::chain(vec![alpha, 1.0])
    }

    /// Three convex steps with weights γ, then β, then α.
    pub fn three_step(alpha: f64, beta: f64, gamma: f64) -> Result<Self, SchemeSpecError> {
        check("alpha", alpha, true)?;
        check("beta", beta, true)?;
        check("gamma", gamma, true)?;
        Self::chain(vec![gamma, beta, alpha])
    }

    /// `w = (1-β) z + β N(z)`, `v = (1-α) w + α N(w)`, `z' = N(v)`.
    pub fn kadioglu(alpha: f64, beta: f64) -> Result<Self, SchemeSpecError> {
        check("alpha", alpha, true)?;
        check("beta", beta, true)?;
        Self::chain(vec![beta, alpha, 1.0])
    }

    pub fn s_iteration(alpha: f64, beta: f64) -> Result<Self, SchemeSpecError> {
        Ok(Self {
            kind: SchemeKind::SHybrid { alpha: check("alpha", alpha, false)?, beta: check("beta", beta, false)? },
        })
    }

    pub fn sen(bound: f64) -> Result<Self, SchemeSpecError> {
        if !(bound > 0.0 && bound.is_finite()) {
            return Err(SchemeSpecError::OutOfRange { name: "M", range: "(0, inf)", value: bound });
        }
        Ok(Self { kind: SchemeKind::Sen { bound } })
    }

    pub fn kind(&self) -> &SchemeKind {
        &self.kind
    }

    /// True for schemes that commute with complex conjugation when the
    /// polynomial has real coefficients.
    pub fn is_conjugation_equivariant(&self) -> bool {
        !matches!(self.kind, SchemeKind::Sen { .. })
    }

    /// One outer step of the scheme.
    #[inline]
    pub fn step(&self, map: &NewtonMap, z: Complex64) -> Result<Complex64, SchemeError> {
        match &self.kind {
            SchemeKind::Chain(weights) => {
                let mut x = z;
                for &t in weights {
                    x = map.convex_step(x, t)?;
                }
                Ok(x)
            }
            SchemeKind::SHybrid { alpha, beta } => {
                let nz = map.step(z)?;
                let y = z * (1.0 - beta) + nz * *beta;
                let ny = map.step(y)?;
                Ok(nz * (1.0 - alpha) + ny * *alpha)
            }
            SchemeKind::Sen { bound } => sen_step(map, *bound, z),
        }
    }

    /// Intermediate points of one outer step, ending with the next iterate.
    ///
    /// For a chain this is one point per weight; the S-iteration yields `y`
    /// and the result; the Sen map yields only the result.
    pub fn stages(&self, map: &NewtonMap, z: Complex64) -> Result<Vec<Complex64>, SchemeError> {
        match &self.kind {
            SchemeKind::Chain(weights) => {
                let mut out = Vec::with_capacity(weights.len());
                let mut x = z;
                for &t in weights {
                    x = map.convex_step(x, t)?;
                    out.push(x);
                }
                Ok(out)
            }
            SchemeKind::SHybrid { beta, .. } => {
                let y = map.convex_step(z, *beta)?;
                Ok(vec![y, self.step(map, z)?])
            }
            SchemeKind::Sen { .. } => Ok(vec![self.step(map, z)?]),
        }
    }

    /// Iterates from `z0` until `stop` is met, recording the whole orbit.
    pub fn run_orbit(&self, map: &NewtonMap, z0: Complex64, stop: &StopRule) -> OrbitResult {
        let mut trace = vec![z0];
        let end = self.iterate(map, z0, stop, |z| trace.push(z));
        OrbitResult { final_point: end.final_point, iterations: end.iterations, converged: end.converged, trace, failure: end.failure }
    }

    /// Same as [`run_orbit`](Self::run_orbit) without keeping the trace.
    #[inline]
    pub fn orbit_end(&self, map: &NewtonMap, z0: Complex64, stop: &StopRule) -> OrbitEnd {
        self.iterate(map, z0, stop, |_| ())
    }

    #[inline]
    fn iterate(
        &self,
        map: &NewtonMap,
        z0: Complex64,
        stop: &StopRule,
        mut record: impl FnMut(Complex64),
    ) -> OrbitEnd {
        let mut z = z0;
        for i in 0..stop.max_iter {
            let next = match self.step(map, z) {
                Ok(next) => next,
                Err(e) => {
                    return OrbitEnd { final_point: z, iterations: i, converged: false, failure: Some(e) }
                }
            };
            record(next);
            let met = match stop.criterion {
                Criterion::Displacement => (next - z).norm() < stop.eps,
                Criterion::Residual => map.p.eval(next).norm() < stop.eps,
            };
            z = next;
            if met {
                return OrbitEnd { final_point: z, iterations: i + 1, converged: true, failure: None };
            }
        }
        OrbitEnd { final_point: z, iterations: stop.max_iter, converged: false, failure: None }
    }
}

impl fmt::Display for IterationScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SchemeKind::Chain(w) => match w.as_slice() {
                [t] if *t == 1.0 => f.write_str("newton"),
                [a, one] if *one == 1.0 => write!(f, "picard_mann:{a}"),
                [b, a, one] if *one == 1.0 => write!(f, "kadioglu:{a},{b}"),
                [g, b, a] => write!(f, "three_step:{g},{b},{a}"),
                _ => {
                    let parts: Vec<String> = w.iter().map(|t| t.to_string()).collect();
                    write!(f, "chain:{}", parts.join(","))
                }
            },
            SchemeKind::SHybrid { alpha, beta } => write!(f, "s:{alpha},{beta}"),
            SchemeKind::Sen { bound } => write!(f, "sen:{bound}"),
        }
    }
}

impl FromStr for IterationScheme {
    type Err = SchemeSpecError;

    /// Accepts `newton`, `picard_mann:α`, `three_step:γ,β,α`, `kadioglu:α,β`,
    /// `s:α,β`, `chain:t1,t2,...` and `sen:M`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (name, args) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a)),
            None => (s, None),
        };
        let params: Vec<f64> = match args {
            None => Vec::new(),
            Some(a) => a
                .split(',')
                .map(|x| x.trim().parse::<f64>().map_err(|_| SchemeSpecError::Number(x.trim().to_string())))
                .collect::<Result<_, _>>()?,
        };
        let arity = |expected: &str| SchemeSpecError::Arity {
            name: name.to_string(),
            expected: expected.to_string(),
            got: params.len(),
        };
        match (name, params.as_slice()) {
            ("newton", []) => Ok(Self::newton()),
            ("newton", _) => Err(arity("0")),
            ("picard_mann", [a]) => Self::picard_mann(*a),
            ("picard_mann", _) => Err(arity("1")),
            ("three_step", [g, b, a]) => Self::three_step(*a, *b, *g),
            ("three_step", _) => Err(arity("3")),
            ("kadioglu", [a, b]) => Self::kadioglu(*a, *b),
            ("kadioglu", _) => Err(arity("2")),
            ("s", [a, b]) => Self::s_iteration(*a, *b),
            ("s", _) => Err(arity("2")),
            ("sen", [m]) => Self::sen(*m),
            ("sen", _) => Err(arity("1")),
            ("chain", _) => Self::chain(params),
            _ => Err(SchemeSpecError::UnknownScheme(name.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    /// `|z_{n+1} - z_n| < eps`
    Displacement,
    /// `|p(z_{n+1})| < eps`
    Residual,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopRule {
    pub criterion: Criterion,
    pub eps: f64,
    pub max_iter: usize,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StopRuleError {
    #[error("eps must be positive, got {0}")]
    Eps(f64),
    #[error("max_iter must be at least 1")]
    MaxIter,
}

impl StopRule {
    pub fn new(criterion: Criterion, eps: f64, max_iter: usize) -> Result<Self, StopRuleError> {
        if !(eps > 0.0) {
            return Err(StopRuleError::Eps(eps));
        }
        if max_iter == 0 {
            return Err(StopRuleError::MaxIter);
        }
        Ok(Self { criterion, eps, max_iter })
    }

    pub fn displacement(eps: f64, max_iter: usize) -> Result<Self, StopRuleError> {
        Self::new(Criterion::Displacement, eps, max_iter)
    }
}

impl Default for StopRule {
    /// Displacement below 0.001 within 12 iterations.
    fn default() -> Self {
        Self { criterion: Criterion::Displacement, eps: 1e-3, max_iter: 12 }
    }
}

/// End state of an orbit without its trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitEnd {
    pub final_point: Complex64,
    pub iterations: usize,
    pub converged: bool,
    pub failure: Option<SchemeError>,
}

/// Orbit of one starting point. `trace[0]` is the start and
/// `iterations == trace.len() - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitResult {
    pub final_point: Complex64,
    pub iterations: usize,
    pub converged: bool,
    pub trace: Vec<Complex64>,
    pub failure: Option<SchemeError>,
}
