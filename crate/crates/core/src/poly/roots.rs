//! Simultaneous root finding (Aberth–Ehrlich) used to label basins.

use std::cmp::Ordering;

use num_complex::Complex64;

use super::Polynomial;

const MAX_ITER: usize = 500;

/// All roots of a polynomial, sorted by real part then imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    roots: Vec<Complex64>,
    residuals: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RootError {
    #[error("root finder did not reach tolerance {tol:e} (best max residual {max_residual:e})")]
    NotConverged { tol: f64, max_residual: f64, best: RootSet },
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
}

impl RootSet {
    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    /// `|p(r)|` for each root, in the same order.
    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// Index of the root closest to `z`; ties go to the lower index.
    pub fn nearest(&self, z: Complex64) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, r) in self.roots.iter().enumerate() {
            let d = (z - r).norm_sqr();
            if d < best_d {
                best = i;
                best_d = d;
            }
        }
        best
    }

    /// Index of the root equal to the conjugate of root `i`, if any.
    pub fn conjugate_index(&self, i: usize) -> Option<usize> {
        let target = self.roots[i].conj();
        self.roots.iter().position(|r| *r == target)
    }
}

fn lexicographic(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Finds all `degree` roots of `p` until every residual `|p(r)|` is below `tol`.
///
/// Starting points sit on a circle of radius `1 + max |a_i / a_n|`, rotated by
/// 0.4 rad. For real-coefficient input, roots are snapped to exact conjugate
/// pairs so that the returned set is closed under conjugation.
pub fn find_roots(p: &Polynomial, tol: f64) -> Result<RootSet, RootError> {
    if !(tol > 0.0) {
        return Err(RootError::BadTolerance(tol));
    }
    let n = p.degree();
    let dp = p.derivative();
    let lead = p.leading();
    let radius = 1.0
        + p.coeffs()[..n]
            .iter()
            .map(|a| (a / lead).norm())
            .fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
        .collect();

    let mut corrections = vec![Complex64::new(0.0, 0.0); n];
    for _ in 0..MAX_ITER {
        let mut largest_step: f64 = 0.0;
        for i in 0..n {
            let pz = p.eval(z[i]);
            if pz == Complex64::new(0.0, 0.0) {
                corrections[i] = pz;
                continue;
            }
            let ratio = pz / dp.eval(z[i]);
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let mut w = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !(w.re.is_finite() && w.im.is_finite()) {
                // p'(z) vanished or collided with a neighbour; nudge deterministically
                w = Complex64::new(1e-8 * radius, 1e-8 * radius);
            }
            corrections[i] = w;
            largest_step = largest_step.max(w.norm() / (1.0 + z[i].norm()));
        }
        for (zi, w) in z.iter_mut().zip(&corrections) {
            *zi -= w;
        }
        if largest_step < 1e-15 {
            break;
        }
    }

    // Newton polish; keeps whichever of the two points has the smaller residual.
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let d = dp.eval(*zi);
            if d.norm() == 0.0 {
                break;
            }
            let cand = *zi - p.eval(*zi) / d;
            if p.eval(cand).norm() < p.eval(*zi).norm() {
                *zi = cand;
            } else {
                break;
            }
        }
    }

    if p.is_real() {
        symmetrize(&mut z);
    }
    for zi in z.iter_mut() {
        // drop negative zeros so ordering and conjugate lookups are stable
        *zi = Complex64::new(zi.re + 0.0, zi.im + 0.0);
    }
    z.sort_by(lexicographic);
    let residuals = z.iter().map(|r| p.eval(*r).norm()).collect();
    let set = RootSet { roots: z, residuals };
    let max_residual = set.max_residual();
    if max_residual < tol {
        Ok(set)
    } else {
        Err(RootError::NotConverged { tol, max_residual, best: set })
    }
}

/// Forces exact conjugate symmetry on the roots of a real polynomial.
fn symmetrize(z: &mut [Complex64]) {
    let thresh = |r: &Complex64| 1e-9 * (1.0 + r.norm());
    let mut upper: Vec<usize> = Vec::new();
    let mut lower: Vec<usize> = Vec::new();
    for (i, r) in z.iter().enumerate() {
        if r.im > thresh(r) {
            upper.push(i);
        } else if r.im < -thresh(r) {
            lower.push(i);
        }
    }
    if upper.len() != lower.len() {
        log::debug!("conjugate pairing skipped: {} upper vs {} lower", upper.len(), lower.len());
        return;
    }
    let mut unused = lower.clone();
    for &u in &upper {
        let target = z[u].conj();
        let (slot, _) = unused
            .iter()
            .enumerate()
            .map(|(k, &l)| (k, (z[l] - target).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("counts match");
        let l = unused.swap_remove(slot);
        let avg = (z[u] + z[l].conj()) * 0.5;
        z[u] = avg;
        z[l] = avg.conj();
    }
    for r in z.iter_mut() {
        if r.im.abs() <= thresh(r) {
            r.im = 0.0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn cube_roots_of_unity() {
        let rs = find_roots(&Polynomial::unity(3).unwrap(), 1e-12).unwrap();
        let h = 3f64.sqrt() / 2.0;
        let expected = [Complex64::new(-0.5, -h), Complex64::new(-0.5, h), Complex64::new(1.0, 0.0)];
        assert_eq!(rs.len(), 3);
        for (r, e) in rs.roots().iter().zip(expected) {
            assert!(close(*r, e), "{r} vs {e}");
        }
        assert_eq!(rs.conjugate_index(0), Some(1));
        assert_eq!(rs.conjugate_index(2), Some(2));
    }

    #[test]
    fn fourth_roots_of_unity() {
        let rs = find_roots(&Polynomial::unity(4).unwrap(), 1e-12).unwrap();
        let expected = [
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(1.0, 0.0),
        ];
        for (r, e) in rs.roots().iter().zip(expected) {
            assert!(close(*r, e), "{r} vs {e}");
        }
    }

    #[test]
    fn quintic_residuals_checked_by_eval() {
        let p = Polynomial::from_real(&[1.0, 0.0, 1.0, 0.0, 0.0, 1.0]).unwrap();
        let rs = find_roots(&p, 1e-10).unwrap();
        assert_eq!(rs.len(), 5);
        for r in rs.roots() {
            assert!(p.eval(*r).norm() < 1e-10);
            assert!(rs.roots().contains(&r.conj()));
        }
        let mut sorted = rs.roots().to_vec();
        sorted.sort_by(lexicographic);
        assert_eq!(sorted, rs.roots());
    }

    #[test]
    fn complex_coefficients_and_repeated_real_roots() {
        // (z - i)(z - 2) = z^2 - (2 + i) z + 2i
        let p = Polynomial::new(vec![
            Complex64::new(0.0, 2.0),
            Complex64::new(-2.0, -1.0),
            Complex64::new(1.0, 0.0),
        ])
        .unwrap();
        let rs = find_roots(&p, 1e-12).unwrap();
        assert!(close(rs.roots()[0], Complex64::new(0.0, 1.0)));
        assert!(close(rs.roots()[1], Complex64::new(2.0, 0.0)));

        // (x - 1)^2 (x + 3): the double root limits attainable accuracy
        let q = Polynomial::from_real(&[3.0, -5.0, 1.0, 1.0]).unwrap();
        let rs = find_roots(&q, 1e-10).unwrap();
        assert!((rs.roots()[0] - Complex64::new(-3.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn rejects_bad_tolerance() {
        let p = Polynomial::unity(2).unwrap();
        assert_eq!(find_roots(&p, 0.0), Err(RootError::BadTolerance(0.0)));
    }

    #[test]
    fn unreachable_tolerance_reports_best() {
        let p = Polynomial::from_real(&[-3.0, 1e3, 0.0, 0.0, 7.0e2, 0.0, 1.0]).unwrap();
        match find_roots(&p, 1e-300) {
            Err(RootError::NotConverged { best, .. }) => assert_eq!(best.len(), 6),
            Ok(rs) => assert!(rs.max_residual() < 1e-300),
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn nearest_prefers_lower_index_on_ties() {
        let rs = find_roots(&Polynomial::unity(2).unwrap(), 1e-12).unwrap();
        assert_eq!(rs.nearest(Complex64::new(0.0, 3.0)), 0);
        assert_eq!(rs.nearest(Complex64::new(0.9, 3.0)), 1);
    }
}
