//! Interval conditions and a-posteriori error estimates for real polynomials.
//!
//! On `[a, b]` the three conditions checked are
//!
//! * (f1) `f(a) f(b) < 0`,
//! * (f2) `f'` does not vanish, i.e. `m > 0`,
//! * (f3) `2m > M`,
//!
//! with `m = min |f'|` and `M = max |f'|` over the interval. Both extremes are
//! computed exactly from the critical points of `|f'|` (real roots of `f'` and
//! `f''` inside the interval) rather than by sampling, since (f3) is a
//! knife-edge comparison.

use std::fmt;

use num_complex::Complex64;

use crate::format::sig;
use crate::poly::Polynomial;
use crate::schemes::{IterationScheme, NewtonMap, SchemeError, SchemeSpecError, StopRule};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BracketError {
    #[error("interval requires finite a < b, got [{a}, {b}]")]
    BadInterval { a: f64, b: f64 },
    #[error("polynomial has complex coefficients")]
    NotReal,
    #[error("conditions violated: {0:?}")]
    ConditionViolated(Vec<Condition>),
    #[error("starting point {x0} lies outside [{a}, {b}]")]
    StartOutside { x0: f64, a: f64, b: f64 },
    #[error(transparent)]
    Scheme(#[from] SchemeSpecError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// `f(a) f(b) < 0`
    SignChange,
    /// `f' != 0` on the interval
    NonvanishingSlope,
    /// `2m > M`
    SlopeRatio,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::SignChange => "f1",
            Condition::NonvanishingSlope => "f2",
            Condition::SlopeRatio => "f3",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self, BracketError> {
        if a.is_finite() && b.is_finite() && a < b {
            Ok(Self { a, b })
        } else {
            Err(BracketError::BadInterval { a, b })
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.a <= x && x <= self.b
    }
}

/// Outcome of the (f1)–(f3) checks plus derivative bounds on an interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalReport {
    pub interval: Interval,
    pub f1_holds: bool,
    pub f2_holds: bool,
    pub f3_holds: bool,
    /// `m = min |f'|`
    pub min_slope: f64,
    /// `M = max |f'|`
    pub max_slope: f64,
    /// `M2 = max |f''|`
    pub max_curvature: f64,
}

impl IntervalReport {
    /// `m1`, the same quantity as `m`.
    pub fn m1(&self) -> f64 {
        self.min_slope
    }

    pub fn violations(&self) -> Vec<Condition> {
        let mut v = Vec::new();
        if !self.f1_holds {
            v.push(Condition::SignChange);
        }
        if !self.f2_holds {
            v.push(Condition::NonvanishingSlope);
        }
        if !self.f3_holds {
            v.push(Condition::SlopeRatio);
        }
        v
    }

    pub fn all_hold(&self) -> bool {
        self.f1_holds && self.f2_holds && self.f3_holds
    }
}

impl fmt::Display for IntervalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |b: bool| if b { "holds" } else { "violated" };
        writeln!(f, "interval  [{}, {}]", sig(self.interval.a), sig(self.interval.b))?;
        writeln!(f, "f1 {}  f2 {}  f3 {}", mark(self.f1_holds), mark(self.f2_holds), mark(self.f3_holds))?;
        writeln!(f, "m  = {}", sig(self.min_slope))?;
        writeln!(f, "M  = {}", sig(self.max_slope))?;
        write!(f, "M2 = {}", sig(self.max_curvature))
    }
}

/// Real ascending-coefficient polynomial helpers.
mod real {
    pub fn trim(mut c: Vec<f64>) -> Vec<f64> {
        while c.len() > 1 && c[c.len() - 1] == 0.0 {
            c.pop();
        }
        c
    }

    pub fn eval(c: &[f64], x: f64) -> f64 {
        c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
    }

    pub fn derivative(c: &[f64]) -> Vec<f64> {
        if c.len() <= 1 {
            return vec![0.0];
        }
        c.iter().enumerate().skip(1).map(|(i, &a)| a * i as f64).collect()
    }

    /// Real roots in `[a, b]`, ascending. Works by splitting the interval at
    /// the critical points and bisecting each monotone piece. A constant zero
    /// polynomial is reported as having no isolated roots.
    pub fn roots_in(c: &[f64], a: f64, b: f64) -> Vec<f64> {
        let c = trim(c.to_vec());
        match c.len() {
            0 | 1 => return Vec::new(),
            2 => {
                let r = -c[0] / c[1];
                return if a <= r && r <= b { vec![r] } else { Vec::new() };
            }
            _ => {}
        }
        let mut knots = vec![a];
        knots.extend(roots_in(&derivative(&c), a, b));
        knots.push(b);

        let mut roots: Vec<f64> = Vec::new();
        let push = |r: f64, roots: &mut Vec<f64>| {
            if roots.last().map_or(true, |&last| r > last) {
                roots.push(r);
            }
        };
        for w in knots.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let (flo, fhi) = (eval(&c, lo), eval(&c, hi));
            if flo == 0.0 {
                push(lo, &mut roots);
            }
            if flo * fhi < 0.0 {
                push(bisect(&c, lo, hi, flo), &mut roots);
            }
        }
        if eval(&c, b) == 0.0 {
            push(b, &mut roots);
        }
        roots
    }

    fn bisect(c: &[f64], mut lo: f64, mut hi: f64, flo: f64) -> f64 {
        let lo_negative = flo < 0.0;
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                return mid;
            }
            let fm = eval(c, mid);
            if fm == 0.0 {
                return mid;
            }
            if (fm < 0.0) == lo_negative {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }

    /// Min and max of `|g|` on `[a, b]`, exact up to root isolation.
    pub fn abs_extrema(g: &[f64], a: f64, b: f64) -> (f64, f64) {
        let dg = derivative(g);
        let mut pts = vec![a, b];
        pts.extend(roots_in(g, a, b));
        pts.extend(roots_in(&dg, a, b));
        pts.iter().map(|&x| eval(g, x).abs()).fold((f64::INFINITY, 0.0), |(lo, hi), v| (lo.min(v), hi.max(v)))
    }
}

/// Real roots of a real-coefficient polynomial inside `[a, b]`.
pub fn real_roots_in(f: &Polynomial, iv: Interval) -> Result<Vec<f64>, BracketError> {
    let c = f.real_coeffs().ok_or(BracketError::NotReal)?;
    Ok(real::roots_in(&c, iv.a, iv.b))
}

/// Checks (f1)–(f3) and computes `m`, `M` and `M2` on `iv`.
pub fn check_conditions(f: &Polynomial, iv: Interval) -> Result<IntervalReport, BracketError> {
    let c = f.real_coeffs().ok_or(BracketError::NotReal)?;
    let d1 = real::derivative(&c);
    let d2 = real::derivative(&d1);
    let (min_slope, max_slope) = real::abs_extrema(&d1, iv.a, iv.b);
    let (_, max_curvature) = real::abs_extrema(&d2, iv.a, iv.b);
    Ok(IntervalReport {
        interval: iv,
        f1_holds: real::eval(&c, iv.a) * real::eval(&c, iv.b) < 0.0,
        f2_holds: min_slope > 0.0,
        f3_holds: 2.0 * min_slope > max_slope,
        min_slope,
        max_slope,
        max_curvature,
    })
}

/// Factors `C` in `|x_n - x*| <= C |x_n - x_{n+1}|` (or `|x_n - x_{n-1}|`
/// for the second-derivative estimate).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBounds {
    /// `M2 / (2 m1)`, classical Newton estimate for C² functions.
    pub second_derivative: f64,
    /// `M / m`, Newton estimate under (f1)–(f3).
    pub slope_ratio: f64,
    /// `mM / ((1 + α) M² - β m²)`, estimate for the three-stage Newton-like iteration.
    pub three_stage: f64,
    /// `mM / (M² - α m²)`, estimate for the Picard–Mann Newton-like iteration.
    pub picard_mann: f64,
}

/// Error-estimate factors for a report satisfying (f2) and (f3).
pub fn error_bounds(report: &IntervalReport, alpha: f64, beta: f64) -> Result<ErrorBounds, BracketError> {
    let mut missing = Vec::new();
    if !report.f2_holds {
        missing.push(Condition::NonvanishingSlope);
    }
    if !report.f3_holds {
        missing.push(Condition::SlopeRatio);
    }
    if !missing.is_empty() {
        return Err(BracketError::ConditionViolated(missing));
    }
    Ok(bounds_from(report.min_slope, report.max_slope, report.max_curvature, alpha, beta)?)
}

/// Error-estimate factors straight from `m`, `M`, `M2`, `α`, `β`.
pub fn bounds_from(m: f64, big_m: f64, m2: f64, alpha: f64, beta: f64) -> Result<ErrorBounds, SchemeSpecError> {
    check_weights(alpha, beta)?;
    let mm = m * big_m;
    Ok(ErrorBounds {
        second_derivative: m2 / (2.0 * m),
        slope_ratio: big_m / m,
        three_stage: mm / ((1.0 + alpha) * big_m * big_m - beta * m * m),
        picard_mann: mm / (big_m * big_m - alpha * m * m),
    })
}

fn check_weights(alpha: f64, beta: f64) -> Result<(), SchemeSpecError> {
    for (name, v) in [("alpha", alpha), ("beta", beta)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(SchemeSpecError::OutOfRange { name, range: "(0, 1)", value: v });
        }
    }
    Ok(())
}

/// One row of a solve table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveStep {
    pub index: usize,
    pub x: f64,
    /// `|x_n - x_{n+1}|`
    pub step: f64,
    /// `three_stage * |x_n - x_{n+1}|`, when (f2) and (f3) hold.
    pub bound: Option<f64>,
    /// `f(x_n)`
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub conditions: IntervalReport,
    pub bounds: Option<ErrorBounds>,
    pub x0: f64,
    pub root: f64,
    pub iterations: usize,
    pub converged: bool,
    pub certified: bool,
    pub left_interval: bool,
    pub failure: Option<SchemeError>,
    pub steps: Vec<SolveStep>,
}

/// Runs the three-stage iteration `w = (1-β)x + βN(x)`, `v = (1-α)w + αN(w)`,
/// `x' = N(v)` on the real line from `x0` (the midpoint when `None`).
///
/// The run is certified when (f1)–(f3) all hold; otherwise it still runs and
/// the violations are reported. Iterates are never clamped to `[a, b]`.
pub fn solve(
    f: &Polynomial,
    iv: Interval,
    alpha: f64,
    beta: f64,
    stop: &StopRule,
    x0: Option<f64>,
) -> Result<SolveReport, BracketError> {
    let conditions = check_conditions(f, iv)?;
    let scheme = IterationScheme::kadioglu(alpha, beta)?;
    let bounds = match error_bounds(&conditions, alpha, beta) {
        Ok(b) => Some(b),
        Err(BracketError::ConditionViolated(_)) => None,
        Err(e) => return Err(e),
    };
    check_weights(alpha, beta)?;

    let x0 = x0.unwrap_or_else(|| iv.midpoint());
    if !iv.contains(x0) {
        return Err(BracketError::StartOutside { x0, a: iv.a, b: iv.b });
    }
    let certified = conditions.all_hold();
    if !certified {
        log::warn!("uncertified run: {:?} violated on [{}, {}]", conditions.violations(), iv.a, iv.b);
    }

    let map = NewtonMap::new(f.clone());
    let orbit = scheme.run_orbit(&map, Complex64::new(x0, 0.0), stop);
    let xs: Vec<f64> = orbit.trace.iter().map(|z| z.re).collect();
    let left_interval = xs.iter().any(|&x| !iv.contains(x));
    if left_interval {
        log::warn!("iterates left [{}, {}]", iv.a, iv.b);
    }
    let steps = xs
        .windows(2)
        .enumerate()
        .map(|(index, w)| {
            let step = (w[0] - w[1]).abs();
            SolveStep {
                index,
                x: w[0],
                step,
                bound: bounds.map(|b| b.three_stage * step),
                residual: f.eval(Complex64::new(w[0], 0.0)).re,
            }
        })
        .collect();
    Ok(SolveReport {
        conditions,
        bounds,
        x0,
        root: orbit.final_point.re,
        iterations: orbit.iterations,
        converged: orbit.converged,
        certified,
        left_interval,
        failure: orbit.failure,
        steps,
    })
}

impl fmt::Display for SolveReport {
    /// Plain-text table: step, x_n, |x_n - x_{n+1}|, bound, f(x_n).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>4}  {:>20}  {:>20}  {:>20}  {:>20}", "n", "x_n", "|x_n - x_n+1|", "bound", "f(x_n)")?;
        for s in &self.steps {
            let bound = s.bound.map_or_else(|| "-".to_string(), sig);
            writeln!(f, "{:>4}  {:>20}  {:>20}  {:>20}  {:>20}", s.index, sig(s.x), sig(s.step), bound, sig(s.residual))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2() -> Polynomial {
        Polynomial::from_real(&[-2.0, 0.0, 1.0]).unwrap()
    }

    #[test]
    fn conditions_on_certified_interval() {
        let r = check_conditions(&sqrt2(), Interval::new(1.2, 1.6).unwrap()).unwrap();
        assert!(r.f1_holds && r.f2_holds && r.f3_holds);
        assert!((r.min_slope - 2.4).abs() < 1e-12);
        assert!((r.max_slope - 3.2).abs() < 1e-12);
        assert!((r.max_curvature - 2.0).abs() < 1e-12);
        assert_eq!(r.m1(), r.min_slope);
    }

    #[test]
    fn slope_ratio_fails_on_unit_interval() {
        let r = check_conditions(&sqrt2(), Interval::new(1.0, 2.0).unwrap()).unwrap();
        assert!(r.f1_holds && r.f2_holds);
        assert_eq!((r.min_slope, r.max_slope), (2.0, 4.0));
        assert!(!r.f3_holds);
        assert_eq!(r.violations(), vec![Condition::SlopeRatio]);
    }

    #[test]
    fn slope_zero_inside_interval() {
        // f' = 2x changes sign at 0
        let r = check_conditions(&sqrt2(), Interval::new(-1.0, 2.0).unwrap()).unwrap();
        assert_eq!(r.min_slope, 0.0);
        assert_eq!(r.max_slope, 4.0);
        assert!(r.f1_holds && !r.f2_holds && !r.f3_holds);
    }

    #[test]
    fn interior_extremum_of_slope() {
        // f = x^3 - 3x, f' = 3x^2 - 3 has |f'| = 3 at x = 0 and 0 at x = ±1
        let f = Polynomial::from_real(&[0.0, -3.0, 0.0, 1.0]).unwrap();
        let r = check_conditions(&f, Interval::new(-0.5, 0.5).unwrap()).unwrap();
        assert!((r.min_slope - 2.25).abs() < 1e-15);
        assert!((r.max_slope - 3.0).abs() < 1e-15);
        assert!((r.max_curvature - 3.0).abs() < 1e-15);
    }

    #[test]
    fn bound_arithmetic() {
        let r = check_conditions(&sqrt2(), Interval::new(1.2, 1.6).unwrap()).unwrap();
        let b = error_bounds(&r, 0.8, 0.6).unwrap();
        // 7.68 / (1.8 * 10.24 - 0.6 * 5.76) = 7.68 / 14.976
        assert!((b.three_stage - 7.68 / 14.976).abs() < 1e-12);
        assert!((b.three_stage - 0.51282).abs() < 1e-5);
        assert!((b.slope_ratio - 4.0 / 3.0).abs() < 1e-12);
        assert!((b.picard_mann - 7.68 / 5.632).abs() < 1e-12);
        assert!((b.second_derivative - 2.0 / 4.8).abs() < 1e-12);
        assert!(b.three_stage < b.slope_ratio && b.three_stage < b.picard_mann);
    }

    #[test]
    fn bounds_need_conditions() {
        let r = check_conditions(&sqrt2(), Interval::new(1.0, 2.0).unwrap()).unwrap();
        assert_eq!(error_bounds(&r, 0.8, 0.6), Err(BracketError::ConditionViolated(vec![Condition::SlopeRatio])));
        let ok = check_conditions(&sqrt2(), Interval::new(1.2, 1.6).unwrap()).unwrap();
        assert!(matches!(error_bounds(&ok, 1.0, 0.6), Err(BracketError::Scheme(_))));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(0.0, f64::INFINITY).is_err());
        let complex = Polynomial::new(vec![Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0)]).unwrap();
        assert_eq!(check_conditions(&complex, Interval::new(0.0, 1.0).unwrap()), Err(BracketError::NotReal));
        let stop = StopRule::displacement(1e-12, 50).unwrap();
        assert!(matches!(
            solve(&sqrt2(), Interval::new(1.2, 1.6).unwrap(), 0.8, 0.6, &stop, Some(3.0)),
            Err(BracketError::StartOutside { .. })
        ));
    }

    #[test]
    fn solve_certified_sqrt2() {
        let stop = StopRule::displacement(1e-12, 50).unwrap();
        let rep = solve(&sqrt2(), Interval::new(1.2, 1.6).unwrap(), 0.8, 0.6, &stop, Some(1.5)).unwrap();
        assert!(rep.certified && rep.converged);
        assert!(rep.iterations <= 10);
        assert!((rep.root - std::f64::consts::SQRT_2).abs() <= 1e-12);
        assert_eq!(rep.steps.len(), rep.iterations);
        assert!(!rep.left_interval);
    }

    #[test]
    fn solve_from_exact_root() {
        // x^2 - x has root 1; on [0.9, 1.1] f' = 2x - 1 lies in [0.8, 1.2]
        let f = Polynomial::from_real(&[0.0, -1.0, 1.0]).unwrap();
        let stop = StopRule::displacement(1e-12, 50).unwrap();
        let rep = solve(&f, Interval::new(0.9, 1.1).unwrap(), 0.8, 0.6, &stop, Some(1.0)).unwrap();
        assert!(rep.certified);
        assert!(rep.iterations <= 1);
        assert_eq!(rep.root, 1.0);
    }

    #[test]
    fn solve_uncertified_still_converges() {
        let stop = StopRule::displacement(1e-12, 50).unwrap();
        let rep = solve(&sqrt2(), Interval::new(1.0, 2.0).unwrap(), 0.8, 0.6, &stop, None).unwrap();
        assert!(!rep.certified && rep.converged);
        assert!(rep.bounds.is_none());
        assert!(rep.steps.iter().all(|s| s.bound.is_none()));
        assert!((rep.root - std::f64::consts::SQRT_2).abs() <= 1e-12);
    }

    #[test]
    fn table_has_a_row_per_step() {
        let stop = StopRule::displacement(1e-12, 50).unwrap();
        let rep = solve(&sqrt2(), Interval::new(1.2, 1.6).unwrap(), 0.8, 0.6, &stop, None).unwrap();
        let table = rep.to_string();
        assert_eq!(table.lines().count(), rep.steps.len() + 1);
        assert!(table.lines().nth(1).unwrap().contains("1.4"));
    }

    #[test]
    fn root_isolation() {
        // (x - 1)(x - 2)(x - 3)
        let c = [-6.0, 11.0, -6.0, 1.0];
        let r = real::roots_in(&c, 0.0, 10.0);
        assert_eq!(r.len(), 3);
        for (got, want) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-14);
        }
        assert_eq!(real::roots_in(&c, 1.5, 2.5).len(), 1);
        assert!(real::roots_in(&[1.0, 0.0, 1.0], -5.0, 5.0).is_empty());
        assert_eq!(real::roots_in(&[0.0, 0.0, 1.0], -1.0, 1.0), vec![0.0]);
    }
}
