//! Complex polynomials in ascending coefficient order.
//!
//! `coeffs[i]` is the coefficient of `z^i`. Evaluation uses Horner's scheme
//! written so that a real-coefficient polynomial commutes exactly with complex
//! conjugation: `p(conj z) == conj p(z)` bit for bit.

mod parse;
mod roots;

use std::fmt;

use num_complex::Complex64;

pub use parse::{parse, ParseError};
pub use roots::{find_roots, RootError, RootSet};

/// Errors raised when constructing a [`Polynomial`] from raw coefficients.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PolyError {
    #[error("polynomial must have degree at least 1")]
    DegreeZero,
    #[error("coefficient {index} is not finite")]
    NonFinite { index: usize },
}

/// A polynomial with complex coefficients, stored lowest degree first.
///
/// Values built through [`Polynomial::new`] or [`parse`] have degree at least
/// one and a nonzero leading coefficient. [`Polynomial::derivative`] of a
/// linear polynomial yields a constant, which is only ever evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    /// Builds a polynomial from ascending coefficients. Trailing zero
    /// coefficients are dropped before the degree check.
    pub fn new(coeffs: impl Into<Vec<Complex64>>) -> Result<Self, PolyError> {
        let mut coeffs = coeffs.into();
        if let Some(index) = coeffs.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(PolyError::NonFinite { index });
        }
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(PolyError::DegreeZero);
        }
        Ok(Self { coeffs })
    }

    /// Builds a polynomial from real ascending coefficients.
    pub fn from_real(coeffs: &[f64]) -> Result<Self, PolyError> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect::<Vec<_>>())
    }

    /// `z^n - 1`.
    pub fn unity(n: usize) -> Result<Self, PolyError> {
        let mut coeffs = vec![0.0; n + 1];
        coeffs[0] = -1.0;
        coeffs[n] = 1.0;
        Self::from_real(&coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs[self.coeffs.len() - 1]
    }

    /// True when every coefficient has a zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    /// Real parts of the coefficients, or `None` for a genuinely complex polynomial.
    pub fn real_coeffs(&self) -> Option<Vec<f64>> {
        self.is_real().then(|| self.coeffs.iter().map(|c| c.re).collect())
    }

    /// Horner evaluation.
    #[inline]
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = self.coeffs[self.coeffs.len() - 1];
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc * z + c;
        }
        acc
    }

    /// Formal derivative. The result of a linear input is a constant.
    pub fn derivative(&self) -> Polynomial {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * i as f64)
            .collect();
        Polynomial { coeffs }
    }

    /// Canonical expression text in `var`, highest power first, e.g. `z^3 - 1`.
    ///
    /// Returns `None` when a coefficient is not real, since the expression
    /// grammar only carries real coefficients.
    pub fn to_expr(&self, var: char) -> Option<String> {
        let real = self.real_coeffs()?;
        let mut out = String::new();
        for (power, &c) in real.iter().enumerate().rev() {
            if c == 0.0 {
                continue;
            }
            let magnitude = c.abs();
            if out.is_empty() {
                if c < 0.0 {
                    out.push('-');
                }
            } else {
                out.push_str(if c < 0.0 { " - " } else { " + " });
            }
            let var_part = match power {
                0 => String::new(),
                1 => var.to_string(),
                k => format!("{var}^{k}"),
            };
            if power == 0 {
                out.push_str(&format!("{magnitude}"));
            } else if magnitude == 1.0 {
                out.push_str(&var_part);
            } else {
                out.push_str(&format!("{magnitude}*{var_part}"));
            }
        }
        Some(out)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_expr('z') {
            Some(s) => f.write_str(&s),
            None => {
                let mut first = true;
                for (power, c) in self.coeffs.iter().enumerate().rev() {
                    if *c == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    if !first {
                        f.write_str(" + ")?;
                    }
                    first = false;
                    write!(f, "({}{:+}i)*z^{power}", c.re, c.im)?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn naive_eval(p: &Polynomial, z: Complex64) -> Complex64 {
        p.coeffs().iter().enumerate().map(|(i, a)| a * z.powu(i as u32)).sum()
    }

    #[test]
    fn eval_cube_minus_one() {
        let p = Polynomial::unity(3).unwrap();
        assert_eq!(p.eval(c(1.0, 0.0)), c(0.0, 0.0));
        assert_eq!(p.eval(c(2.0, 0.0)), c(7.0, 0.0));
        // i^3 = -i, so i^3 - 1 = -1 - i
        assert_eq!(p.eval(c(0.0, 1.0)), c(-1.0, -1.0));
    }

    #[test]
    fn derivative_power_rule() {
        let p = Polynomial::unity(3).unwrap();
        assert_eq!(p.derivative().coeffs(), &[c(0.0, 0.0), c(0.0, 0.0), c(3.0, 0.0)]);
        let q = Polynomial::from_real(&[1.0, 0.0, 1.0, 0.0, 0.0, 1.0]).unwrap();
        let dq: Vec<f64> = q.derivative().coeffs().iter().map(|c| c.re).collect();
        assert_eq!(dq, vec![0.0, 2.0, 0.0, 0.0, 5.0]);
        let r = Polynomial::from_real(&[-2.0, 0.0, 1.0]).unwrap();
        assert_eq!(r.derivative().coeffs(), &[c(0.0, 0.0), c(2.0, 0.0)]);
    }

    #[test]
    fn linear_derivative_is_constant() {
        let p = Polynomial::from_real(&[3.0, -2.0]).unwrap();
        let d = p.derivative();
        assert_eq!(d.degree(), 0);
        assert_eq!(d.eval(c(10.0, 4.0)), c(-2.0, 0.0));
    }

    #[test]
    fn constructor_rejects_degenerate() {
        assert_eq!(Polynomial::from_real(&[1.0]), Err(PolyError::DegreeZero));
        assert_eq!(Polynomial::from_real(&[1.0, 0.0, 0.0]), Err(PolyError::DegreeZero));
        assert_eq!(
            Polynomial::from_real(&[1.0, f64::NAN]),
            Err(PolyError::NonFinite { index: 1 })
        );
        assert_eq!(Polynomial::from_real(&[1.0, 2.0, 0.0]).unwrap().degree(), 1);
    }

    #[test]
    fn canonical_printer() {
        assert_eq!(Polynomial::unity(3).unwrap().to_expr('z').unwrap(), "z^3 - 1");
        let p = Polynomial::from_real(&[0.5, -1.0, 0.0, -2.5]).unwrap();
        assert_eq!(p.to_expr('x').unwrap(), "-2.5*x^3 - x + 0.5");
        let q = Polynomial::new(vec![c(0.0, 1.0), c(1.0, 0.0)]).unwrap();
        assert!(q.to_expr('z').is_none());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn coeff() -> impl Strategy<Value = Complex64> {
            (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(re, im)| Complex64::new(re, im))
        }

        fn point() -> impl Strategy<Value = Complex64> {
            (0.0..2.0f64, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
        }

        fn poly() -> impl Strategy<Value = Polynomial> {
            (prop::collection::vec(coeff(), 1..=8), coeff())
                .prop_filter_map("nonzero leading", |(mut cs, lead)| {
                    (lead.norm() > 1e-3).then(|| {
                        cs.push(lead);
                        Polynomial::new(cs).unwrap()
                    })
                })
        }

        fn real_poly() -> impl Strategy<Value = Polynomial> {
            prop::collection::vec(-10.0..10.0f64, 2..=9)
                .prop_filter_map("nonzero leading", |cs| {
                    (cs.last().unwrap().abs() > 1e-3).then(|| Polynomial::from_real(&cs).unwrap())
                })
        }

        proptest! {
            #[test]
            fn horner_matches_power_sum(p in poly(), z in point()) {
                let h = p.eval(z);
                let n = naive_eval(&p, z);
                let scale: f64 = p.coeffs().iter().enumerate()
                    .map(|(i, a)| a.norm() * z.norm().powi(i as i32)).sum();
                prop_assert!((h - n).norm() <= 1e-12 * scale.max(1.0), "{h} vs {n}");
            }

            #[test]
            fn derivative_matches_central_difference(p in poly(), z in point()) {
                let h = 1e-6;
                let fd = (p.eval(z + h) - p.eval(z - h)) / (2.0 * h);
                let exact = p.derivative().eval(z);
                let scale: f64 = p.coeffs().iter().enumerate().skip(1)
                    .map(|(i, a)| i as f64 * a.norm() * z.norm().max(1.0).powi(i as i32 - 1)).sum();
                prop_assert!((fd - exact).norm() <= 1e-5 * scale.max(1.0), "{fd} vs {exact}");
            }

            #[test]
            fn real_poly_commutes_with_conjugation(p in real_poly(), z in point()) {
                prop_assert_eq!(p.eval(z.conj()), p.eval(z).conj());
            }

            #[test]
            fn print_parse_is_idempotent(p in real_poly()) {
                let once = parse(&p.to_expr('z').unwrap(), 'z').unwrap();
                let printed = once.to_expr('z').unwrap();
                let twice = parse(&printed, 'z').unwrap();
                prop_assert_eq!(&once, &twice);
                prop_assert_eq!(once, p);
            }
        }
    }
}
