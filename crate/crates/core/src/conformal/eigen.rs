//! Eigenpairs of a symmetric tridiagonal matrix: Sturm-count bisection for
//! the eigenvalue, then inverse iteration shifted just below it.

/// Symmetric tridiagonal matrix; `off[i]` couples rows `i` and `i+1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut v = self.diag[i] * x[i];
                if i > 0 {
                    v += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    v += self.off[i] * x[i + 1];
                }
                v
            })
            .collect()
    }

    /// Interval containing every eigenvalue.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        (0..n).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), i| {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            (lo.min(self.diag[i] - r), hi.max(self.diag[i] + r))
        })
    }

    fn scale(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE)
    }

    /// Number of eigenvalues strictly below `x` (LDLᵀ inertia).
    pub fn count_below(&self, x: f64) -> usize {
        let pivmin = f64::EPSILON * self.scale() * 1e-3;
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..self.len() {
            let coupling = if i > 0 { self.off[i - 1] * self.off[i - 1] / d } else { 0.0 };
            d = self.diag[i] - x - coupling;
            if d.abs() < pivmin {
                d = -pivmin;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Bracket `[lo, hi]` around the `k`-th smallest eigenvalue, bisected to
    /// machine precision.
    pub fn eigenvalue_bracket(&self, k: usize) -> (f64, f64) {
        let (mut lo, mut hi) = self.gershgorin();
        let pad = f64::EPSILON * self.scale() * 4.0;
        lo -= pad;
        hi += pad;
        for _ in 0..2000 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        (lo, hi)
    }

    /// Solves `(T − shift·I) x = rhs` by elimination without pivoting.
    pub fn solve_shifted(&self, shift: f64, rhs: &[f64]) -> Option<Vec<f64>> {
        let n = self.len();
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut denom = self.diag[0] - shift;
        if denom == 0.0 {
            return None;
        }
        if n > 1 {
            c[0] = self.off[0] / denom;
        }
        d[0] = rhs[0] / denom;
        for i in 1..n {
            denom = self.diag[i] - shift - self.off[i - 1] * c[i - 1];
            if denom == 0.0 || !denom.is_finite() {
                return None;
            }
            if i + 1 < n {
                c[i] = self.off[i] / denom;
            }
            d[i] = (rhs[i] - self.off[i - 1] * d[i - 1]) / denom;
        }
        for i in (0..n.saturating_sub(1)).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        Some(d)
    }
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Result of inverse iteration on a symmetric tridiagonal matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct TridiagonalEigenpair {
    pub value: f64,
    /// Unit Euclidean norm.
    pub vector: Vec<f64>,
    pub iterations: usize,
}

/// `k`-th eigenpair, with the iteration stopped once `accept(value, vector)`
/// returns true. Returns the last iterate and `false` if that never happens.
pub fn eigenpair<F>(t: &SymTridiagonal, k: usize, max_iter: usize, accept: F) -> (TridiagonalEigenpair, bool)
where
    F: Fn(f64, &[f64]) -> bool,
{
    let n = t.len();
    let (lo, hi) = t.eigenvalue_bracket(k);
    let scale = t.scale();
    let mut shift = lo - (hi - lo).max(f64::EPSILON * scale);
    let mut y: Vec<f64> = if k == 0 {
        vec![1.0; n]
    } else {
        (0..n).map(|i| 1.0 + 0.5 * ((i as f64) * 0.7548776662466927 + 0.3).sin()).collect()
    };
    let n0 = norm(&y);
    y.iter_mut().for_each(|v| *v /= n0);
    let mut value = 0.5 * (lo + hi);
    for it in 1..=max_iter {
        let next = loop {
            match t.solve_shifted(shift, &y) {
                Some(x) if x.iter().all(|v| v.is_finite()) => break x,
                _ => shift -= f64::EPSILON * scale.max(shift.abs()) * 16.0,
            }
        };
        let nn = norm(&next);
        y = next.into_iter().map(|v| v / nn).collect();
        value = dot(&y, &t.apply(&y));
        if accept(value, &y) {
            return (
                TridiagonalEigenpair {
                    value,
                    vector: y,
                    iterations: it,
                },
                true,
            );
        }
    }
    (
        TridiagonalEigenpair {
            value,
            vector: y,
            iterations: max_iter,
        },
        false,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, SymmetricEigen};

    fn random_tridiagonal(n: usize, seed: u64) -> SymTridiagonal {
        use rand::Rng;
        let mut rng = crate::algebraic::stream_rng(seed, 0);
        SymTridiagonal {
            diag: (0..n).map(|_| rng.random_range(-3.0..3.0)).collect(),
            off: (0..n - 1).map(|_| rng.random_range(-1.0..1.0)).collect(),
        }
    }

    fn dense(t: &SymTridiagonal) -> DMatrix<f64> {
        let n = t.len();
        DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                t.diag[i]
            } else if j == i + 1 {
                t.off[i]
            } else if i == j + 1 {
                t.off[j]
            } else {
                0.0
            }
        })
    }

    #[test]
    fn bisection_matches_dense_eigenvalues() {
        for seed in 0..5 {
            let t = random_tridiagonal(30, seed);
            let mut ev: Vec<f64> = SymmetricEigen::new(dense(&t)).eigenvalues.iter().copied().collect();
            ev.sort_by(f64::total_cmp);
            for (k, e) in ev.iter().enumerate() {
                let (lo, hi) = t.eigenvalue_bracket(k);
                assert!((0.5 * (lo + hi) - e).abs() < 1e-12, "k={k}");
            }
        }
    }

    #[test]
    fn inverse_iteration_converges_quickly() {
        let t = random_tridiagonal(200, 9);
        for k in [0, 1, 5] {
            let (pair, ok) = eigenpair(&t, k, 50, |v, y| {
                let r: Vec<f64> = t.apply(y).iter().zip(y).map(|(a, b)| a - v * b).collect();
                norm(&r) < 1e-12
            });
            assert!(ok);
            assert!(pair.iterations <= 4);
            let (lo, hi) = t.eigenvalue_bracket(k);
            assert!((pair.value - 0.5 * (lo + hi)).abs() < 1e-12);
        }
    }

    #[test]
    fn shifted_solve_inverts() {
        let t = random_tridiagonal(20, 2);
        let b: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let x = t.solve_shifted(10.0, &b).unwrap();
        let back = t.apply(&x);
        for i in 0..20 {
            assert!((back[i] - 10.0 * x[i] - b[i]).abs() < 1e-10);
        }
    }
}
