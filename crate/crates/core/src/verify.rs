//! Property suite run by `niclab verify`: every invariant as a named check
//! with its measured value and tolerance.

use std::sync::Arc;

use serde::Serialize;

use crate::algebraic::stream_rng;
use crate::conformal::{conformal_deform, lowest_eigenpair, transformation_law_check, ConformalLaw, ProfileManifold};
use crate::curvature::{conformal_scale_check, curvature_at, CurvatureOptions, CurvaturePointData};
use crate::exec::Execution;
use crate::gluing::{
    band_bound_check, cusp_scaling_check, functional_f_at, no_go_identity, random_fourier_profile, BandOptions,
    GeometryConstants, GluedFamily,
};
use crate::isotropic::{criterion_crosscheck, extremal_isotropic, sigma_field, CrosscheckOptions, SearchOptions};
use crate::metric::builtins;
use crate::metric::scalar::{ExpSineField, SineField};
use crate::metric::{DerivativeOptions, GridSpec, StencilOrder};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Debug switch: negate the curvature sign convention everywhere.
    pub flip_sign: bool,
    pub exec: Execution,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// A defect compared against `tolerance` unless `detail` says otherwise.
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub flip_sign: bool,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    /// `(name, passed)` for every check, in run order.
    pub fn pass_set(&self) -> Vec<(String, bool)> {
        self.checks.iter().map(|c| (c.name.clone(), c.passed)).collect()
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn at_most(name: &str, measured: f64, tolerance: f64, detail: impl Into<String>) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed: measured <= tolerance,
        measured,
        tolerance,
        detail: detail.into(),
    }
}

fn errored(name: &str, err: impl std::fmt::Display) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed: false,
        measured: f64::NAN,
        tolerance: f64::NAN,
        detail: format!("error: {err}"),
    }
}

fn run(name: &str, f: impl FnOnce() -> Result<CheckResult, String>) -> CheckResult {
    f().unwrap_or_else(|e| errored(name, e))
}

pub fn verify(opts: &VerifyOptions) -> VerifyReport {
    let analytic = CurvatureOptions {
        flip_sign: opts.flip_sign,
        ..CurvatureOptions::default()
    };
    let fd4 = CurvatureOptions {
        derivatives: DerivativeOptions::finite_difference(StencilOrder::Fourth, 1e-3),
        flip_sign: opts.flip_sign,
    };
    let seed = opts.seed;
    let mut checks = Vec::new();

    checks.push(run("anchor.flat_t4", || {
        let d = curvature_at(&builtins::flat_torus(4, 1.0), &[0.1, 0.2, 0.3, 0.4], &analytic).map_err(|e| e.to_string())?;
        Ok(at_most("anchor.flat_t4", d.riemann.max_abs(), 1e-10, "max |R_abcd|"))
    }));
    checks.push(run("anchor.round_s4", || {
        let d = curvature_at(&builtins::round_s4(), &[1.0, 1.2, 0.8, 0.3], &fd4).map_err(|e| e.to_string())?;
        let sectional = (d.riemann[[0, 1, 0, 1]] - 1.0).abs();
        let measured = (d.scalar - 12.0).abs().max(sectional);
        Ok(CheckResult {
            passed: measured <= 1e-6 && d.weyl_norm <= 1e-8,
            ..at_most(
                "anchor.round_s4",
                measured,
                1e-6,
                format!("max(|s − 12|, |K₁₂ − 1|); s = {:.12}, |W| = {:.3e}", d.scalar, d.weyl_norm),
            )
        })
    }));
    checks.push(run("anchor.h3_x_s1", || {
        let d = curvature_at(&builtins::hyperbolic3_x_circle(1.0), &[0.3, 0.2, 0.4, 0.1], &fd4).map_err(|e| e.to_string())?;
        Ok(CheckResult {
            passed: (d.scalar + 6.0).abs() <= 1e-6 && d.weyl_norm <= 1e-8,
            ..at_most(
                "anchor.h3_x_s1",
                (d.scalar + 6.0).abs(),
                1e-6,
                format!("|s + 6|; |W| = {:.3e}", d.weyl_norm),
            )
        })
    }));
    checks.push(run("tensor.symmetries", || {
        let m = builtins::warped_t4();
        let mut worst: f64 = 0.0;
        for x in [[0.7, 1.0, 2.0, 0.1], [2.5, 4.0, 0.3, 5.0]] {
            let d = curvature_at(&m, &x, &fd4).map_err(|e| e.to_string())?;
            let scale = 1.0 + d.riemann.max_abs();
            worst = worst
                .max(d.riemann.symmetry_defect() / scale)
                .max(d.weyl_trace_defect() / scale)
                .max(d.w_op.trace().abs() / scale)
                .max(crate::algebraic::bianchi_defect(&d.r_op) / scale);
        }
        Ok(at_most(
            "tensor.symmetries",
            worst,
            1e-8,
            "pair symmetries, first Bianchi, Weyl trace-freeness, relative to 1 + max|R|",
        ))
    }));

    let crosscheck = criterion_crosscheck(
        200,
        seed,
        &CrosscheckOptions {
            exec: opts.exec,
            ..CrosscheckOptions::default()
        },
    );
    checks.push(at_most(
        "isotropic.routes_agree",
        crosscheck.max_route_gap,
        1e-10,
        "bivector route vs frame expansion, 200 random tensors",
    ));
    checks.push(at_most(
        "isotropic.k_max_is_twice_q_max",
        crosscheck.max_spectral_gap,
        1e-8,
        "max |k_max − 2 q_max|",
    ));
    checks.push(at_most(
        "isotropic.sufficiency",
        crosscheck.sufficiency_violations.len() as f64,
        0.0,
        format!("tensors with σ < 0 and k_max ≥ 0 among {} with σ < 0", crosscheck.sigma_negative),
    ));
    checks.push(run("isotropic.anchors", || {
        let search = SearchOptions {
            seed,
            ..SearchOptions::default()
        };
        let k = |m: crate::metric::MetricField, x: [f64; 4]| -> Result<f64, String> {
            let d: CurvaturePointData = curvature_at(&m, &x, &analytic).map_err(|e| e.to_string())?;
            Ok(extremal_isotropic(&d, &search).k_max)
        };
        let sphere = k(builtins::round_s4(), [1.0, 1.2, 0.8, 0.3])?;
        let hyper = k(builtins::hyperbolic3_x_circle(1.0), [0.3, 0.2, 0.4, 0.1])?;
        let flat = k(builtins::flat_torus(4, 1.0), [0.1, 0.2, 0.3, 0.4])?;
        Ok(at_most(
            "isotropic.anchors",
            (sphere - 4.0).abs().max((hyper + 2.0).abs()).max(flat.abs()),
            1e-8,
            format!("k_max: S⁴ {sphere:.12}, H³×S¹ {hyper:.12}, T⁴ {flat:.3e}"),
        ))
    }));
    checks.push(run("isotropic.kahler_not_nic", || {
        let d = curvature_at(&builtins::kahler_h2_x_h2(), &[0.2, 0.3, -0.1, 0.5], &analytic).map_err(|e| e.to_string())?;
        let v = extremal_isotropic(
            &d,
            &SearchOptions {
                seed,
                ..SearchOptions::default()
            },
        );
        Ok(CheckResult {
            passed: v.k_max >= -1e-6,
            ..at_most("isotropic.kahler_not_nic", -v.k_max, 1e-6, format!("−k_max; verdict {}", v.verdict))
        })
    }));

    checks.push(run("gluing.band_bound", || {
        let mut margin = f64::INFINITY;
        for c in [2.0, 8.0, 512.0] {
            let fam = GluedFamily::new(c, GeometryConstants::default()).map_err(|e| e.to_string())?;
            let r = band_bound_check(&fam).map_err(|e| e.to_string())?;
            margin = margin.min(r.min - 0.5).min(1.0 + 1e-12 - r.max);
        }
        Ok(CheckResult {
            name: "gluing.band_bound".into(),
            passed: margin > 0.0,
            measured: margin,
            tolerance: 0.0,
            detail: "margin of ce^{−t/c} inside (½, 1] on the band, c ∈ {2, 8, 512}; must be positive".into(),
        })
    }));
    checks.push(run("gluing.cusp_scaling", || {
        let mut worst: f64 = 0.0;
        for c in [2.0, 8.0] {
            let fam = GluedFamily::new(c, GeometryConstants::default()).map_err(|e| e.to_string())?;
            let r = cusp_scaling_check(&fam, 801, &analytic).map_err(|e| e.to_string())?;
            worst = worst.max(r.relative_gap);
        }
        Ok(at_most("gluing.cusp_scaling", worst, 1e-6, "relative gap of ∫ s dV against −6c·Vol·ℓ"))
    }));
    checks.push(run("gluing.no_go_identity", || {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            let r = no_go_identity(&random_fourier_profile(seed, i), 1.0, 1.0, 256, &analytic).map_err(|e| e.to_string())?;
            worst = worst.max(r.relative_gap);
        }
        Ok(at_most("gluing.no_go_identity", worst, 1e-6, "∫ s dV against 2ℓ·Area·∫ f′² dt"))
    }));
    checks.push(run("gluing.f_negative_at_large_c", || {
        let fam = GluedFamily::new(64.0, GeometryConstants::default()).map_err(|e| e.to_string())?;
        let opts = BandOptions {
            curvature: analytic,
            ..BandOptions::default()
        };
        let row = functional_f_at(&fam, 1.0 / 6.0, &opts).map_err(|e| e.to_string())?;
        Ok(at_most("gluing.f_negative_at_large_c", row.f, 0.0, "F(g_c) at c = 64"))
    }));

    checks.push(run("conformal.transformation_law", || {
        let m = builtins::flat_torus(4, 2.0 * std::f64::consts::PI);
        let points = GridSpec::full_periodic(m.chart(), 3).points(m.chart()).map_err(|e| e.to_string())?;
        let u = Arc::new(SineField {
            dim: 4,
            axis: 0,
            mean: 1.0,
            amplitude: 0.1,
        });
        let r = transformation_law_check(&m, u, &points, &ConformalLaw::new(4, 1.0 / 6.0), &fd4, opts.exec)
            .map_err(|e| e.to_string())?;
        Ok(at_most(
            "conformal.transformation_law",
            r.relative_gap,
            1e-5,
            format!("Laplacian coefficient μκ = {}; fitted {:?}", r.coefficient, r.fitted_coefficient),
        ))
    }));
    checks.push(run("conformal.weyl_scaling", || {
        let r = conformal_scale_check(
            &builtins::warped_t4(),
            Arc::new(ExpSineField { dim: 4, axis: 0 }),
            &[0.7, 1.0, 2.0, 0.1],
            &fd4,
        )
        .map_err(|e| e.to_string())?;
        Ok(at_most("conformal.weyl_scaling", r.relative_gap, 1e-6, "|W_{f²g}| against f⁻²|W_g|"))
    }));
    checks.push(run("conformal.eigen_chain", || {
        use rand::Rng;
        let mut rng = stream_rng(seed, 1);
        let n = 40;
        let pm = ProfileManifold::chain(
            (0..n).map(|_| rng.random_range(1.0..2.0)).collect(),
            (0..n).map(|_| rng.random_range(-1.0..0.5)).collect(),
            (0..n - 1).map(|_| rng.random_range(50.0..100.0)).collect(),
            1.0,
        )
        .map_err(|e| e.to_string())?;
        let sol = lowest_eigenpair(&pm, 1e-10).map_err(|e| e.to_string())?;
        let d = conformal_deform(&pm, &sol, &ConformalLaw::new(4, 1.0 / 6.0)).map_err(|e| e.to_string())?;
        let rayleigh = pm.functional() / pm.total_volume();
        let ok = sol.lambda <= rayleigh + 1e-12 && sol.residual <= 1e-10 && sol.min_u() > 0.0;
        Ok(CheckResult {
            passed: ok && d.relative_gap <= 1e-9,
            ..at_most(
                "conformal.eigen_chain",
                d.relative_gap,
                1e-9,
                format!(
                    "σ̃ law vs λu⁻²; λ = {:.6e} ≤ F/Vol = {:.6e}, residual {:.2e}, min u {:.3e}",
                    sol.lambda,
                    rayleigh,
                    sol.residual,
                    sol.min_u()
                ),
            )
        })
    }));

    checks.push(run("exec.determinism", || {
        let m = builtins::warped_t4();
        let grid = GridSpec::full_periodic(m.chart(), 4);
        let seq = sigma_field(&m, 1.0 / 6.0, &grid, &analytic, Execution::Sequential).map_err(|e| e.to_string())?;
        let par = sigma_field(&m, 1.0 / 6.0, &grid, &analytic, Execution::Parallel).map_err(|e| e.to_string())?;
        let gap = seq
            .values
            .iter()
            .zip(&par.values)
            .map(|(a, b)| (a - b).abs())
            .fold((seq.integral - par.integral).abs(), f64::max);
        Ok(at_most("exec.determinism", gap, 0.0, "sequential vs parallel σ field and integral"))
    }));

    VerifyReport {
        seed,
        flip_sign: opts.flip_sign,
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_passes() {
        let r = verify(&VerifyOptions::default());
        for c in &r.checks {
            assert!(c.passed, "{c:?}");
        }
        assert!(r.passed);
    }

    #[test]
    fn pass_set_is_seed_independent() {
        let base = verify(&VerifyOptions::default()).pass_set();
        for seed in 1..5 {
            let r = verify(&VerifyOptions {
                seed,
                ..VerifyOptions::default()
            });
            assert_eq!(r.pass_set(), base, "seed {seed}");
        }
    }

    #[test]
    fn flipped_sign_fails_the_sphere_anchor() {
        let r = verify(&VerifyOptions {
            flip_sign: true,
            ..VerifyOptions::default()
        });
        assert!(!r.passed);
        assert!(!r.check("anchor.round_s4").unwrap().passed);
        assert!(r.check("anchor.flat_t4").unwrap().passed);
    }
}
