use nalgebra::DMatrix;

use super::{MetricError, MetricField};

/// Orthonormal frame at `x`: column `a` holds the coordinate components of `e_a`.
pub fn orthonormal_frame(m: &MetricField, x: &[f64]) -> Result<DMatrix<f64>, MetricError> {
    let g = m.metric_at(x)?;
    gram_schmidt(&g).ok_or_else(|| MetricError::NotPositiveDefinite {
        point: x.to_vec(),
        min_eigenvalue: g.symmetric_eigenvalues().min(),
    })
}

/// Gram–Schmidt of the coordinate basis under `g`, in axis order, with one
/// reorthogonalization pass. The result is upper triangular with positive
/// diagonal. Returns `None` when `g` is not positive definite.
pub fn gram_schmidt(g: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let n = g.nrows();
    let mut frame = DMatrix::<f64>::zeros(n, n);
    for a in 0..n {
        let mut v = nalgebra::DVector::<f64>::zeros(n);
        v[a] = 1.0;
        for _pass in 0..2 {
            for b in 0..a {
                let eb = frame.column(b);
                let proj = (eb.transpose() * g * &v)[0];
                v -= eb * proj;
            }
        }
        let norm2 = (v.transpose() * g * &v)[0];
        if !(norm2 > 0.0) {
            return None;
        }
        frame.set_column(a, &(v / norm2.sqrt()));
    }
    Some(frame)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::builtins;
    use nalgebra::DVector;
    use proptest::prelude::*;

    #[test]
    fn identity_metric_gives_coordinate_basis() {
        let m = builtins::flat_torus(4, 1.0);
        assert_eq!(orthonormal_frame(&m, &[0.0; 4]).unwrap(), DMatrix::identity(4, 4));
    }

    #[test]
    fn diagonal_metric_gives_scaled_axes() {
        let g = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 4.0, 4.0, 1.0]));
        let f = gram_schmidt(&g).unwrap();
        assert_eq!(f, DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 0.5, 0.5, 1.0])));
    }

    #[test]
    fn indefinite_metric_has_no_frame() {
        let g = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -1.0, 1.0, 1.0]));
        assert!(gram_schmidt(&g).is_none());
    }

    proptest! {
        #[test]
        fn frames_of_random_spd_matrices_are_orthonormal(
            entries in proptest::collection::vec(-1.0f64..1.0, 16),
            shift in 0.05f64..2.0,
        ) {
            let a = DMatrix::from_vec(4, 4, entries);
            let g = &a * a.transpose() + DMatrix::identity(4, 4) * shift;
            let f = gram_schmidt(&g).unwrap();
            let gram = f.transpose() * &g * &f;
            prop_assert!((gram - DMatrix::identity(4, 4)).amax() < 1e-12);
        }
    }
}
