//! Recursive-descent parser for real polynomial expressions such as
//! `z^5 + z^2 + 1` or `-2.5*x^3 + x - 0.5`.
//!
//! ```text
//! expr := ['+'|'-'] term (('+'|'-') term)*
//! term := coef ['*' var ['^' int]] | var ['^' int]
//! ```

use num_complex::Complex64;

use super::Polynomial;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable '{found}' at position {pos} (expected '{expected}')")]
    UnknownVariable { pos: usize, found: char, expected: char },
    #[error("expression has degree 0")]
    DegreeZero,
}

impl ParseError {
    /// Character offset of the error, when it has one.
    pub fn position(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { pos, .. } | ParseError::UnknownVariable { pos, .. } => Some(*pos),
            ParseError::DegreeZero => None,
        }
    }
}

/// Parses `text` as a polynomial in `variable`. Like terms are summed.
pub fn parse(text: &str, variable: char) -> Result<Polynomial, ParseError> {
    let mut parser = Parser { chars: text.chars().collect(), pos: 0, var: variable };
    let terms = parser.expr()?;
    let degree = terms.iter().map(|&(_, k)| k).max().unwrap_or(0);
    let mut coeffs = vec![0.0; degree + 1];
    for (c, k) in terms {
        coeffs[k] += c;
    }
    Polynomial::new(coeffs.into_iter().map(|c| Complex64::new(c, 0.0)).collect::<Vec<_>>())
        .map_err(|_| ParseError::DegreeZero)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    var: char,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn expr(&mut self) -> Result<Vec<(f64, usize)>, ParseError> {
        let mut terms = Vec::new();
        let mut sign = match self.peek() {
            Some('-') => {
                self.pos += 1;
                -1.0
            }
            Some('+') => {
                self.pos += 1;
                1.0
            }
            _ => 1.0,
        };
        loop {
            let (c, k) = self.term()?;
            terms.push((sign * c, k));
            match self.peek() {
                None => return Ok(terms),
                Some('+') => sign = 1.0,
                Some('-') => sign = -1.0,
                Some(other) => return self.error(format!("unexpected '{other}'")),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<(f64, usize), ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let coef = self.number()?;
                if self.peek() == Some('*') {
                    self.pos += 1;
                    let power = self.power()?;
                    Ok((coef, power))
                } else {
                    Ok((coef, 0))
                }
            }
            Some(c) if c.is_alphabetic() => Ok((1.0, self.power()?)),
            Some(other) => self.error(format!("expected a term, found '{other}'")),
            None => self.error("expected a term, found end of input"),
        }
    }

    /// `var ['^' int]`
    fn power(&mut self) -> Result<usize, ParseError> {
        match self.peek() {
            Some(c) if c == self.var => self.pos += 1,
            Some(c) if c.is_alphabetic() => {
                return Err(ParseError::UnknownVariable { pos: self.pos, found: c, expected: self.var })
            }
            Some(other) => return self.error(format!("expected '{}', found '{other}'", self.var)),
            None => return self.error(format!("expected '{}', found end of input", self.var)),
        }
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected a positive integer exponent");
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        match digits.parse::<usize>() {
            Ok(k) if k >= 1 => Ok(k),
            _ => Err(ParseError::Syntax { pos: start, msg: format!("invalid exponent '{digits}'") }),
        }
    }

    /// Unsigned decimal with optional fraction and exponent.
    fn number(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.chars.get(p.pos).is_some_and(|c| c.is_ascii_digit()) {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut mantissa = digits(self);
        if self.chars.get(self.pos) == Some(&'.') {
            self.pos += 1;
            mantissa += digits(self);
        }
        if mantissa == 0 {
            return Err(ParseError::Syntax { pos: start, msg: "malformed number".into() });
        }
        if matches!(self.chars.get(self.pos), Some('e' | 'E')) && self.var != 'e' && self.var != 'E' {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.chars.get(self.pos), Some('+' | '-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = mark;
                return self.error("malformed exponent");
            }
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse::<f64>()
            .map_err(|_| ParseError::Syntax { pos: start, msg: format!("malformed number '{text}'") })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(p: &Polynomial) -> Vec<f64> {
        p.real_coeffs().unwrap()
    }

    #[test]
    fn reads_test_polynomials() {
        assert_eq!(real(&parse("z^3 - 1", 'z').unwrap()), vec![-1.0, 0.0, 0.0, 1.0]);
        assert_eq!(real(&parse("z^5 + z^2 + 1", 'z').unwrap()), vec![1.0, 0.0, 1.0, 0.0, 0.0, 1.0]);
        assert_eq!(real(&parse("x^2 - 2", 'x').unwrap()), vec![-2.0, 0.0, 1.0]);
    }

    #[test]
    fn coefficients_and_whitespace() {
        let p = parse("  -2.5 * x ^ 3+x-0.5 ", 'x').unwrap();
        assert_eq!(real(&p), vec![-0.5, 1.0, 0.0, -2.5]);
        let q = parse("3*x + 2*x + 1e-3", 'x').unwrap();
        assert_eq!(real(&q), vec![1e-3, 5.0]);
        assert_eq!(real(&parse("+.5*z^2 - z", 'z').unwrap()), vec![0.0, -1.0, 0.5]);
    }

    #[test]
    fn cancelling_terms() {
        assert_eq!(parse("x^2 - x^2 + 4", 'x'), Err(ParseError::DegreeZero));
        assert_eq!(real(&parse("x^3 + x - x^3 + 1", 'x').unwrap()), vec![1.0, 1.0]);
    }

    #[test]
    fn errors_carry_position() {
        let err = parse("x^2 +", 'x').unwrap_err();
        assert_eq!(err.position(), Some(5));
        assert!(matches!(err, ParseError::Syntax { .. }));

        assert_eq!(
            parse("x^2 + y", 'x'),
            Err(ParseError::UnknownVariable { pos: 6, found: 'y', expected: 'x' })
        );
        assert_eq!(parse("7", 'x'), Err(ParseError::DegreeZero));
        assert_eq!(parse("x^0 + 1", 'x').unwrap_err().position(), Some(2));
        assert_eq!(parse("x^", 'x').unwrap_err().position(), Some(2));
        assert_eq!(parse("2 x", 'x').unwrap_err().position(), Some(2));
        assert_eq!(parse("", 'x').unwrap_err().position(), Some(0));
        assert_eq!(parse("x * 2", 'x').unwrap_err().position(), Some(2));
    }
}
