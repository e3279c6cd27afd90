//! Random algebraic curvature tensors in dimension 4, represented by their
//! symmetric `Λ²` matrices.

use nalgebra::Matrix6;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// The first Bianchi identity in `Λ²` coordinates:
/// `R₁₂₃₄ + R₁₃₄₂ + R₁₄₂₃ = op[0,5] − op[1,4] + op[2,3]`.
pub fn bianchi_defect(op: &Matrix6<f64>) -> f64 {
    op[(0, 5)] - op[(1, 4)] + op[(2, 3)]
}

/// Symmetrizes `op` and removes its Bianchi component (orthogonal projection
/// onto the space of algebraic curvature tensors).
pub fn project_to_curvature(op: &Matrix6<f64>) -> Matrix6<f64> {
    let mut r = (op + op.transpose()) * 0.5;
    let b = bianchi_defect(&r) / 3.0;
    for (i, j, sign) in [(0, 5, 1.0), (1, 4, -1.0), (2, 3, 1.0)] {
        r[(i, j)] -= sign * b;
        r[(j, i)] -= sign * b;
    }
    r
}

/// Deterministic stream for draw `index` under `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A Gaussian algebraic curvature tensor plus a uniform multiple of the
/// identity drawn from `shift`, so both signs of scalar curvature occur.
pub fn random_curvature_operator<R: Rng>(rng: &mut R, shift: (f64, f64)) -> Matrix6<f64> {
    let mut op = Matrix6::zeros();
    for i in 0..6 {
        for j in i..6 {
            let v: f64 = rng.sample(StandardNormal);
            op[(i, j)] = v;
            op[(j, i)] = v;
        }
    }
    let alpha = rng.random_range(shift.0..shift.1);
    project_to_curvature(&op) + Matrix6::identity() * alpha
}

/// Constant sectional curvature `k`.
pub fn constant_curvature(k: f64) -> Matrix6<f64> {
    Matrix6::identity() * k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::CurvaturePointData;

    #[test]
    fn projected_tensors_have_curvature_symmetries() {
        let mut rng = stream_rng(7, 0);
        for _ in 0..50 {
            let op = random_curvature_operator(&mut rng, (-2.0, 2.0));
            assert!(bianchi_defect(&op).abs() < 1e-14);
            let data = CurvaturePointData::from_operator(&op);
            assert!(data.riemann.symmetry_defect() < 1e-13);
            assert!(data.weyl_trace_defect() < 1e-12);
        }
    }

    #[test]
    fn projection_is_idempotent() {
        let mut rng = stream_rng(3, 1);
        let op = random_curvature_operator(&mut rng, (0.0, 1.0));
        assert!((project_to_curvature(&op) - op).amax() < 1e-15);
    }

    #[test]
    fn streams_are_reproducible() {
        let a = random_curvature_operator(&mut stream_rng(11, 5), (-1.0, 1.0));
        let b = random_curvature_operator(&mut stream_rng(11, 5), (-1.0, 1.0));
        let c = random_curvature_operator(&mut stream_rng(11, 6), (-1.0, 1.0));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
