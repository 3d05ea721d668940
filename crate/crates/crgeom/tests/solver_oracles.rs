//! Formal solvers against closed-form and hand-computed values.

use crgeom::exact::{rat, Rational};
use crgeom::frame::FrameGeometry;
use crgeom::heis::{parse_expression, HeisPoly};
use crgeom::series::RhoSeries;
use crgeom::solvers::{
    eigenvalue, extract_gjms, indicial_from_oracle, indicial_polynomial, q_curvature, solve_eigen,
    solve_log, volume_coeffs, IndicialChannel, ProfileFile, ScalarLaplacian,
};

fn p(s: &str, n: usize) -> HeisPoly {
    parse_expression(s, n).unwrap()
}

#[test]
fn flat_laplacian_on_monomials() {
    // Δ(ρ^s f) = ¼s(2n+2−s)ρ^s f + ρ^{s+2}Δ_b f − ρ^{s+4}T²f
    let n = 1;
    let lap = ScalarLaplacian::flat(n, 8);
    let mut u = RhoSeries::zeros(8, HeisPoly::zero());
    u.set_a(2, p("z1*zb1*t", n));
    let r = lap.apply(&u);
    assert_eq!(*r.a(2), p("z1*zb1*t", n));
    assert_eq!(*r.a(4), p("-2*t", n));
    assert!(r.a(6).is_zero());
    assert!(r.a(0).is_zero() && r.a(3).is_zero());
}

#[test]
fn eigenvalues() {
    assert_eq!(eigenvalue(1, 1), rat(3, 4));
    assert_eq!(eigenvalue(2, 3), rat(0, 1));
    assert_eq!(eigenvalue(3, 2), rat(3, 1));
}

#[test]
fn dirichlet_hand_cases() {
    // c_1·Δ_b(z z̄) = 2·(−2)
    let s = solve_eigen(1, 1, &p("z1*zb1", 1), 6).unwrap();
    assert!(s.residual_vanishes());
    assert_eq!(*s.g_boundary(), p("-4", 1));
    // c_2·(Δ_b² + T²)t² = −(8 + 8)
    let s = solve_eigen(1, 2, &p("t^2", 1), 8).unwrap();
    assert_eq!(*s.g_boundary(), p("-16", 1));
    // constants are annihilated by the critical operator
    for n in 1..=3 {
        let s = solve_eigen(n, n + 1, &HeisPoly::one(), 2 * n + 2).unwrap();
        assert!(s.g_boundary().is_zero());
    }
}

#[test]
fn solver_gjms_small_cases() {
    use crgeom::opalg::OpPoly;
    assert_eq!(extract_gjms(1, 1).unwrap(), OpPoly::db());
    let want = OpPoly::db().pow(2).add(&OpPoly::t().pow(2));
    assert_eq!(extract_gjms(1, 2).unwrap(), want);
    assert!(extract_gjms(1, 3).is_err());
}

#[test]
fn flat_log_solution() {
    for n in 1..=3 {
        let lap = ScalarLaplacian::flat(n, 2 * n + 4);
        let s = solve_log(&lap, 2 * n + 4).unwrap();
        assert!(s.a.is_zero());
        assert!(s.b.is_zero());
        assert!(s.residual_vanishes());
    }
}

#[test]
fn top_perturbation_by_hand() {
    // b = 1 + aρ^{2n+2}: Q = (−1)^{n+1} n!(n+1)! a/2, L = a
    let a = rat(3, 5);
    let cases: [(usize, Rational); 3] =
        [(1, a.clone()), (2, -rat(6, 1) * &a), (3, rat(72, 1) * &a)];
    for (n, q) in cases {
        let prof = ProfileFile {
            n,
            b: vec![(2 * n + 2, "3/5".into())],
            c: vec![],
        };
        let lap = prof.laplacian(2 * n + 2).unwrap();
        assert_eq!(q_curvature(&lap).unwrap(), q, "n = {n}");
        assert_eq!(volume_coeffs(&lap).log_coeff, a);
    }
}

#[test]
fn volume_of_second_order_profile() {
    // n = 1, c = 1 + ρ²: d = c, so V ≈ ½ρ^{−4} + ρ^{−2}
    let prof = ProfileFile {
        n: 1,
        b: vec![],
        c: vec![(2, "1".into())],
    };
    let v = volume_coeffs(&prof.laplacian(4).unwrap());
    assert_eq!(v.coeff(-4), rat(1, 2));
    assert_eq!(v.coeff(-2), rat(1, 1));
    assert_eq!(v.log_coeff, rat(0, 1));
}

#[test]
fn indicial_hand_values_and_oracle() {
    let n = 2;
    let want = |ch: IndicialChannel, j: i64| -> Rational {
        let n = n as i64;
        match ch {
            IndicialChannel::Func | IndicialChannel::AlphaBeta => rat(-j * (j - 2 * n - 2), 4),
            IndicialChannel::FormTau | IndicialChannel::TauTau | IndicialChannel::Trace => {
                rat(-(j + 2) * (j - 2 * n - 4), 4)
            }
            IndicialChannel::FormAlpha | IndicialChannel::TauAlpha => {
                rat(-(j * j - (2 * n + 2) * j - 2 * n - 7), 4)
            }
            IndicialChannel::TraceFree => rat(-(j * j - (2 * n + 2) * j - 8), 4),
        }
    };
    let geo = FrameGeometry::new(n).unwrap();
    for ch in IndicialChannel::ALL {
        for j in 0..6 {
            assert_eq!(
                indicial_polynomial(ch, n).eval_int(j),
                want(ch, j),
                "{} j={j}",
                ch.name()
            );
            assert_eq!(
                indicial_from_oracle(ch, &geo, j as usize),
                want(ch, j),
                "{} oracle j={j}",
                ch.name()
            );
        }
    }
    assert_eq!(
        indicial_polynomial(IndicialChannel::Func, n).integer_roots(-20, 20),
        vec![0, 6]
    );
}

#[test]
fn profile_json() {
    let prof: ProfileFile =
        serde_json::from_str(r#"{"n":2,"b":[[2,"1/3"]],"c":[[0,"1"],[4,"-2"]]}"#).unwrap();
    let lap = prof.laplacian(6).unwrap();
    assert_eq!(*lap.b.a(0), rat(1, 1));
    assert_eq!(*lap.b.a(2), rat(1, 3));
    assert_eq!(*lap.c.a(4), rat(-2, 1));
    assert!(ProfileFile {
        n: 1,
        b: vec![(0, "2".into())],
        c: vec![]
    }
    .laplacian(4)
    .is_err());
}
