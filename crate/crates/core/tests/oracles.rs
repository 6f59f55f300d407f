use plate_core::nonlinear::bessel_inverse;
use plate_core::verify::oracles::MolConfig;
use plate_core::verify::{mode_ode_oracle, mol_oracle, relative_l2, TestFunction};
use plate_core::{linear_solution, make_grid, Convention, Field, NonlinearityParams, TimeGrid};

fn data(n: usize, points: usize, l: f64) -> (Field, Field) {
    let g = make_grid(n, points, l).unwrap();
    let u0 = TestFunction::gaussian(1.0).sample(&g).unwrap();
    let u1 = TestFunction::Gaussian { width: 0.7, amplitude: 0.5 }.sample(&g).unwrap();
    (u0, u1)
}

#[test]
fn multiplier_path_matches_mode_ode() {
    let (u0, u1) = data(1, 256, 40.0);
    for t in [0.5, 1.0, 5.0] {
        let exact = linear_solution(&u0, &u1, t, Convention::Ivp).unwrap();
        let ode = mode_ode_oracle(&u0, &u1, t, None).unwrap();
        assert!(relative_l2(&exact.u, &ode.u).unwrap() < 1e-8, "t = {t}");
        assert!(relative_l2(&exact.ut, &ode.ut).unwrap() < 1e-8, "t = {t}");
    }
}

#[test]
fn multiplier_path_matches_mode_ode_in_two_dimensions() {
    let (u0, u1) = data(2, 64, 12.0);
    let exact = linear_solution(&u0, &u1, 2.0, Convention::Ivp).unwrap();
    let ode = mode_ode_oracle(&u0, &u1, 2.0, None).unwrap();
    assert!(relative_l2(&exact.u, &ode.u).unwrap() < 1e-8);
}

#[test]
fn paper_convention_is_ivp_with_shifted_velocity() {
    // Δ(u1 + (I−Δ)^{-1}u0) = Δu1 − |ξ|²/(1+|ξ|²)û0, the paper convention's u_t(0).
    let (u0, u1) = data(1, 256, 40.0);
    let shifted = u1.add(&bessel_inverse(&u0).unwrap()).unwrap();
    for t in [0.5, 3.0] {
        let paper = linear_solution(&u0, &u1, t, Convention::Paper).unwrap();
        let ode = mode_ode_oracle(&u0, &shifted, t, None).unwrap();
        assert!(relative_l2(&paper.u, &ode.u).unwrap() < 1e-8);
        assert!(relative_l2(&paper.ut, &ode.ut).unwrap() < 1e-8);
    }
}

#[test]
fn oracle_triangle_on_linear_problem() {
    let (u0, u1) = data(1, 256, 40.0);
    let params = NonlinearityParams::new(3.0, 1.0).unwrap().with_delta(0.0);
    let tg = TimeGrid::uniform(0.05, 5.0).unwrap().with_all_records();
    let cfg = MolConfig { substeps: 10, convention: Convention::Ivp, norms: None };
    let mol = mol_oracle(&u0, &u1, &params, &tg, &cfg).unwrap();
    for k in [10, 20, 100] {
        let t = tg.t(k);
        let exact = linear_solution(&u0, &u1, t, Convention::Ivp).unwrap();
        let ode = mode_ode_oracle(&u0, &u1, t, None).unwrap();
        let m = &mol.trajectory[k];
        assert!(relative_l2(&m.u, &ode.u).unwrap() < 1e-7, "mol vs ode at t = {t}");
        assert!(relative_l2(&m.u, &exact.u).unwrap() < 1e-7, "mol vs multipliers at t = {t}");
        assert!(relative_l2(&exact.u, &ode.u).unwrap() < 1e-7, "multipliers vs ode at t = {t}");
    }
}
