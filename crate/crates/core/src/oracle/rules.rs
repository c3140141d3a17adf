use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureKind {
    Trapezoid,
    GaussHermite,
}

/// Node budget for one oracle integral.
///
/// `half_width` counts natural widths of the integrand (packet width for
/// the `x`/`y` integrals, `v̄` for Maxwell averages) and is ignored by
/// Gauss-Hermite rules. Every result is recomputed with doubled nodes; a
/// change larger than `tolerance` is reported as non-convergence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub kind: QuadratureKind,
    pub nodes: usize,
    pub half_width: f64,
    pub tolerance: f64,
}

impl QuadratureSpec {
    pub const fn trapezoid(nodes: usize, half_width: f64) -> Self {
        Self {
            kind: QuadratureKind::Trapezoid,
            nodes,
            half_width,
            tolerance: 1e-8,
        }
    }

    pub const fn gauss_hermite(nodes: usize) -> Self {
        Self {
            kind: QuadratureKind::GaussHermite,
            nodes,
            half_width: 0.0,
            tolerance: 1e-8,
        }
    }

    pub fn with_tolerance(self, tolerance: f64) -> Self {
        Self { tolerance, ..self }
    }

    pub fn doubled(self) -> Self {
        Self {
            nodes: 2 * self.nodes,
            ..self
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.nodes < 2 {
            return Err(Error::Unsupported("at least 2 quadrature nodes"));
        }
        if self.kind == QuadratureKind::Trapezoid && !(self.half_width.is_finite() && self.half_width > 0.0) {
            return Err(Error::Unsupported("a positive trapezoid half-width"));
        }
        Ok(())
    }

    /// Budget floor for certification runs: 16 nodes, 8 natural widths.
    pub fn is_certification_grade(&self) -> bool {
        self.nodes >= 16 && (self.kind == QuadratureKind::GaussHermite || self.half_width >= 8.0)
    }
}

/// Nodes and weights of a trapezoid rule on `[a, b]`.
pub fn trapezoid_rule(a: f64, b: f64, nodes: usize) -> Vec<(f64, f64)> {
    let h = (b - a) / (nodes - 1) as f64;
    (0..nodes)
        .map(|i| {
            let x = if i + 1 == nodes { b } else { a + h * i as f64 };
            let w = if i == 0 || i + 1 == nodes { 0.5 * h } else { h };
            (x, w)
        })
        .collect()
}

/// Gauss-Hermite nodes and weights for `∫ e^{-z²} f(z) dz`.
///
/// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix, weights
/// come from the first component of each normalized eigenvector.
pub fn gauss_hermite_rule(n: usize) -> Vec<(f64, f64)> {
    let mut diag = vec![0.0; n];
    let mut off: Vec<f64> = (1..=n).map(|k| (k as f64 / 2.0).sqrt()).collect();
    off[n - 1] = 0.0;
    let mut first = vec![0.0; n];
    first[0] = 1.0;
    tridiagonal_ql(&mut diag, &mut off, &mut first);
    let mut rule: Vec<(f64, f64)> = diag
        .into_iter()
        .zip(first)
        .map(|(z, v)| (z, PI.sqrt() * v * v))
        .collect();
    rule.sort_by(|a, b| a.0.total_cmp(&b.0));
    // symmetric by construction; remove the last-bit asymmetry
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let z = 0.5 * (rule[j].0 - rule[i].0);
        let w = 0.5 * (rule[i].1 + rule[j].1);
        rule[i] = (-z, w);
        rule[j] = (z, w);
    }
    if n % 2 == 1 {
        rule[n / 2].0 = 0.0;
    }
    rule
}

/// Implicit QL on a symmetric tridiagonal matrix. `off[i]` couples `i` and
/// `i + 1`. Only the first row of the eigenvector matrix is accumulated.
fn tridiagonal_ql(diag: &mut [f64], off: &mut [f64], first: &mut [f64]) {
    let n = diag.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter < 60, "tridiagonal QL did not converge");
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                let f = first[i + 1];
                first[i + 1] = s * first[i] + c * f;
                first[i] = c * first[i] - s * f;
            }
            if underflow {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
}

/// Expectation over a Maxwell velocity distribution of width `v_bar`.
pub(crate) fn maxwell_rule(v_bar: f64, q: &QuadratureSpec) -> Vec<(f64, f64)> {
    match q.kind {
        QuadratureKind::GaussHermite => {
            let scale = std::f64::consts::SQRT_2 * v_bar;
            let norm = PI.sqrt().recip();
            gauss_hermite_rule(q.nodes)
                .into_iter()
                .map(|(z, w)| (scale * z, w * norm))
                .collect()
        }
        QuadratureKind::Trapezoid => {
            let half = q.half_width * v_bar;
            let norm = (2.0 * PI * v_bar * v_bar).sqrt().recip();
            trapezoid_rule(-half, half, q.nodes)
                .into_iter()
                .map(|(v, w)| (v, w * norm * (-v * v / (2.0 * v_bar * v_bar)).exp()))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn hermite_rule_moments() {
        for n in [1, 2, 5, 16, 64, 200] {
            let rule = gauss_hermite_rule(n);
            assert_eq!(rule.len(), n);
            let m0: f64 = rule.iter().map(|(_, w)| w).sum();
            assert_abs_diff_eq!(m0, PI.sqrt(), epsilon = 1e-12);
            if n >= 2 {
                let m2: f64 = rule.iter().map(|(z, w)| w * z * z).sum();
                assert_abs_diff_eq!(m2, PI.sqrt() / 2.0, epsilon = 1e-12);
            }
            assert!(rule.windows(2).all(|p| p[0].0 < p[1].0));
        }
        // ∫ e^{-z²} cos z dz = √π e^{-1/4}
        let rule = gauss_hermite_rule(20);
        let v: f64 = rule.iter().map(|(z, w)| w * z.cos()).sum();
        assert_abs_diff_eq!(v, PI.sqrt() * (-0.25f64).exp(), epsilon = 1e-14);
    }

    #[test]
    fn hermite_known_nodes() {
        // H_2 roots ±1/√2, weights √π/2
        let rule = gauss_hermite_rule(2);
        assert_abs_diff_eq!(rule[1].0, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(rule[1].1, PI.sqrt() / 2.0, epsilon = 1e-15);
        let rule = gauss_hermite_rule(3);
        assert_abs_diff_eq!(rule[1].0, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rule[2].0, 1.5f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn trapezoid_weights() {
        let rule = trapezoid_rule(0.0, 1.0, 5);
        assert_eq!(rule[0], (0.0, 0.125));
        assert_eq!(rule[4], (1.0, 0.125));
        let total: f64 = rule.iter().map(|(_, w)| w).sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn maxwell_rules_normalized() {
        for q in [QuadratureSpec::gauss_hermite(64), QuadratureSpec::trapezoid(1024, 10.0)] {
            let rule = maxwell_rule(3.0, &q);
            let m0: f64 = rule.iter().map(|(_, w)| w).sum();
            let m2: f64 = rule.iter().map(|(v, w)| w * v * v).sum();
            assert_abs_diff_eq!(m0, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(m2, 9.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn certification_floor() {
        assert!(QuadratureSpec::trapezoid(512, 10.0).is_certification_grade());
        assert!(!QuadratureSpec::trapezoid(8, 10.0).is_certification_grade());
        assert!(!QuadratureSpec::trapezoid(512, 4.0).is_certification_grade());
        assert!(QuadratureSpec::gauss_hermite(64).is_certification_grade());
        assert!(QuadratureSpec::trapezoid(1, 10.0).check().is_err());
    }
}
