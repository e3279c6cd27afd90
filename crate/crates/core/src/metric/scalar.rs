use nalgebra::{DMatrix, DVector};

/// A smooth positive function on a chart with exact derivatives.
pub trait ScalarField: Send + Sync {
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64]) -> DVector<f64>;
    fn hessian(&self, x: &[f64]) -> DMatrix<f64>;
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstantField {
    pub dim: usize,
    pub value: f64,
}

impl ScalarField for ConstantField {
    fn value(&self, _x: &[f64]) -> f64 {
        self.value
    }

    fn gradient(&self, _x: &[f64]) -> DVector<f64> {
        DVector::zeros(self.dim)
    }

    fn hessian(&self, _x: &[f64]) -> DMatrix<f64> {
        DMatrix::zeros(self.dim, self.dim)
    }
}

/// `mean + amplitude · sin(x_axis)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SineField {
    pub dim: usize,
    pub axis: usize,
    pub mean: f64,
    pub amplitude: f64,
}

impl ScalarField for SineField {
    fn value(&self, x: &[f64]) -> f64 {
        self.mean + self.amplitude * x[self.axis].sin()
    }

    fn gradient(&self, x: &[f64]) -> DVector<f64> {
        let mut g = DVector::zeros(self.dim);
        g[self.axis] = self.amplitude * x[self.axis].cos();
        g
    }

    fn hessian(&self, x: &[f64]) -> DMatrix<f64> {
        let mut h = DMatrix::zeros(self.dim, self.dim);
        h[(self.axis, self.axis)] = -self.amplitude * x[self.axis].sin();
        h
    }
}

/// `exp(sin(x_axis))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpSineField {
    pub dim: usize,
    pub axis: usize,
}

impl ScalarField for ExpSineField {
    fn value(&self, x: &[f64]) -> f64 {
        x[self.axis].sin().exp()
    }

    fn gradient(&self, x: &[f64]) -> DVector<f64> {
        let mut g = DVector::zeros(self.dim);
        let (s, c) = x[self.axis].sin_cos();
        g[self.axis] = c * s.exp();
        g
    }

    fn hessian(&self, x: &[f64]) -> DMatrix<f64> {
        let mut h = DMatrix::zeros(self.dim, self.dim);
        let (s, c) = x[self.axis].sin_cos();
        h[(self.axis, self.axis)] = (c * c - s) * s.exp();
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_sine_derivatives_match_differences() {
        let f = ExpSineField { dim: 4, axis: 0 };
        let x = [0.7, 0.0, 0.0, 0.0];
        let h = 1e-5;
        let at = |t: f64| f.value(&[t, 0.0, 0.0, 0.0]);
        let d1 = (at(0.7 + h) - at(0.7 - h)) / (2.0 * h);
        let d2 = (at(0.7 + h) - 2.0 * at(0.7) + at(0.7 - h)) / (h * h);
        assert!((f.gradient(&x)[0] - d1).abs() < 1e-9);
        assert!((f.hessian(&x)[(0, 0)] - d2).abs() < 1e-4);
    }
}
