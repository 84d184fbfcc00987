use vstates::cmkernel::Model;
use vstates::contour::{
    bifurcation_point, continue_branch, finite_difference_multiplier, linearized_multiplier, BoundaryFunctional,
    BranchOptions, PatchBoundary,
};

#[test]
fn branch_invariants() {
    let opts = BranchOptions::default();
    for (model, m, b, xi) in [
        (Model::Euler, 3, 1.0, 0.06),
        (Model::Gsqg { beta: 0.5 }, 2, 1.0, 0.08),
        (Model::Qgsw { eps: 1.0 }, 2, 1.0, 0.08),
        (Model::EulerDisc, 2, 0.5, 0.02),
    ] {
        let br = continue_branch(&model, m, b, xi, 6, &opts).unwrap();
        assert!(br.failure.is_none(), "{model}: {:?}", br.failure);
        assert_eq!(br.points.len(), 7);
        let w0 = bifurcation_point(&model, m, b).unwrap().omega;
        assert!((br.points[0].omega - w0).abs() < 1e-12);
        let mut dxi_max: f64 = 0.0;
        let mut dw_max: f64 = 0.0;
        for p in &br.points {
            assert!(p.residual_norm <= opts.newton_tol, "{model}: residual {}", p.residual_norm);
            assert!(p.boundary.samples().is_ok());
            if model.is_disc() {
                assert!((0..256).all(|i| p.boundary.radius_at(i as f64 * 0.0245) < 1.0));
            }
        }
        for w in br.points.windows(2) {
            dxi_max = dxi_max.max((w[1].amplitude - w[0].amplitude).abs());
            dw_max = dw_max.max((w[1].omega - w[0].omega).abs());
        }
        // Omega(xi) - Omega_m is O(xi^2), so |dOmega| <= C |dxi| with C of order xi_max
        assert!(dw_max <= 2.0 * dxi_max, "{model}: dOmega {dw_max} dxi {dxi_max}");
    }
}

#[test]
fn bifurcation_values_increase_in_m() {
    for model in [Model::Euler, Model::Gsqg { beta: 0.3 }, Model::Qgsw { eps: 2.0 }] {
        let w: Vec<f64> = (1..=12).map(|m| bifurcation_point(&model, m, 1.0).unwrap().omega).collect();
        assert!(w.windows(2).all(|p| p[1] > p[0]), "{model}: {w:?}");
    }
}

#[test]
fn multiplier_matches_finite_differences() {
    for model in [Model::Euler, Model::Gsqg { beta: 0.7 }, Model::Qgsw { eps: 0.5 }, Model::EulerAlpha { alpha: 1.0 }] {
        let m = 2;
        let omega = 0.2;
        let lin = linearized_multiplier(&model, m, 1.0, 4, omega).unwrap();
        let f = BoundaryFunctional::new(&model, 128).unwrap();
        for (j, l) in lin.iter().enumerate() {
            let n = (j + 1) as u32;
            let fd = finite_difference_multiplier(&f, omega, m, 1.0, n, 1e-6).unwrap();
            assert!((fd - l).abs() <= 1e-5 * l.abs().max(1e-3), "{model} n={n}: {fd} vs {l}");
        }
    }
}

#[test]
fn grid_rule() {
    // 2 M m < N
    assert!(PatchBoundary::circle(4, 1.0, 8, 64).is_err());
    assert!(PatchBoundary::circle(4, 1.0, 7, 64).is_ok());
    assert!(BoundaryFunctional::new(&Model::Euler, 63).is_err());
}
