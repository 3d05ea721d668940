//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use crgeom::exact::{rat, GaussianRational as Gr, Rational};
use crgeom::frame::{compare_christoffel, einstein_check, FrameGeometry};
use crgeom::heis::{parse_expression, random_poly, random_sym2, HeisPoly, HeisPolyWire};
use crgeom::opalg::{
    c_k, gjms_product, obstruction_closed_form, qpoly, NcNormal, NcNormalWire, OpPoly, OpPolyWire,
    QMode,
};
use crgeom::series::RhoSeries;
use crgeom::solvers::{
    check_complex_property, cross_validate, extract_gjms, extract_obstruction, q_factor, refine,
    solve_eigen, solve_lichnerowicz, solve_log_with, total_q_check, volume_coeffs, LichOperator,
    ScalarLaplacian,
};
use crgeom::verify::random_profile;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use sha2::{Digest, Sha256};

type Outcome = Result<(), String>;
type Criterion = (u32, &'static str, u64, fn() -> Outcome);

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn c1_qpoly() -> Outcome {
    for k in 1..=12 {
        ensure(
            qpoly(k, QMode::Recurrence) == qpoly(k, QMode::ClosedForm),
            || format!("k = {k}"),
        )?;
    }
    Ok(())
}

fn c2_gjms() -> Outcome {
    for n in 1..=4 {
        for k in 1..=n + 1 {
            let p = extract_gjms(n, k).map_err(|e| e.to_string())?;
            ensure(p == gjms_product(n, k).map_err(|e| e.to_string())?, || {
                format!("n={n} k={k}")
            })?;
        }
    }
    Ok(())
}

/// `2(−1)^{k+1}/(k!(k−1)!)` from plain integer factorials.
fn c_k_oracle(k: i64) -> Rational {
    let fact = |m: i64| (1..=m).product::<i64>();
    let sign = if k % 2 == 1 { 2 } else { -2 };
    rat(sign, fact(k) * fact(k - 1))
}

fn c3_constants() -> Outcome {
    let table = [
        rat(2, 1),
        rat(-1, 1),
        rat(1, 6),
        rat(-1, 72),
        rat(1, 1440),
        rat(-1, 43200),
    ];
    for k in 1..=6u32 {
        ensure(c_k_oracle(k as i64) == table[k as usize - 1], || {
            format!("oracle table k={k}")
        })?;
        ensure(c_k(k) == Gr::real(table[k as usize - 1].clone()), || {
            format!("c_{k}")
        })?;
    }
    for n in 1..=3 {
        let s = solve_eigen(n, n + 1, &HeisPoly::one(), 2 * n + 2).map_err(|e| e.to_string())?;
        ensure(s.residual_vanishes() && s.g_boundary().is_zero(), || {
            format!("G != 0 at n={n}")
        })?;
    }
    Ok(())
}

fn c4_eigen_residuals() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for n in 1..=2 {
        for k in 1..=n + 1 {
            for trial in 0..3 {
                let f = random_poly(&mut rng, n, 2 * k as u32 + 2, 4);
                let s = solve_eigen(n, k, &f, 2 * k + 4).map_err(|e| e.to_string())?;
                let through = n + 1 + k + 4;
                ensure(
                    s.residual.max_order() >= through && s.residual.is_zero_through(through),
                    || format!("n={n} k={k} trial {trial}"),
                )?;
                // the log coefficient is c_k·P_{2k}f by the product formula
                let want = gjms_product(n, k)
                    .unwrap()
                    .apply(&f, n)
                    .scale(&c_k(k as u32));
                ensure(*s.g_boundary() == want, || {
                    format!("G|_M at n={n} k={k} trial {trial}")
                })?;
            }
        }
    }
    Ok(())
}

fn c5_frame() -> Outcome {
    for n in 1..=3 {
        let geo = FrameGeometry::new(n).map_err(|e| e.to_string())?;
        let ix = geo.ix;
        let rep = compare_christoffel(n).map_err(|e| e.to_string())?;
        ensure(rep.all_passed(), || format!("christoffel n={n}"))?;
        let rep = einstein_check(n).map_err(|e| e.to_string())?;
        ensure(rep.all_passed(), || {
            format!(
                "einstein n={n}: {:?}",
                rep.failures().map(|r| &r.id).collect::<Vec<_>>()
            )
        })?;
        let half = Gr::from_frac(n as i64 + 2, 2);
        for p in ix.all() {
            for q in ix.all() {
                ensure(
                    (&geo.ricci[p][q] + &(&half * &geo.g[p][q])).is_zero(),
                    || format!("Ric+(n+2)/2 g at n={n}"),
                )?;
            }
        }
        ensure(
            geo.scalar_curvature() == Gr::from_int(-((n as i64 + 1) * (n as i64 + 2))),
            || format!("Scal n={n}"),
        )?;
        let (t, tb, a, ab) = (ix.tau(), ix.taubar(), ix.alpha(1), ix.alphabar(1));
        ensure(geo.riemann[t][tb][t][tb] == Gr::from_int(-4), || {
            format!("R_ττ̄ττ̄ n={n}")
        })?;
        ensure(geo.riemann[a][ab][a][ab] == Gr::from_int(-1), || {
            format!("R_11̄11̄ n={n}")
        })?;
        // last pair of the same type
        for p in ix.all() {
            for q in ix.all() {
                for r in ix.all() {
                    for s in ix.all() {
                        if ix.is_barred(r) == ix.is_barred(s) {
                            ensure(geo.riemann[p][q][r][s].is_zero(), || {
                                format!("non-Kähler component at n={n}")
                            })?;
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn c6_obstruction() -> Outcome {
    for n in [2, 3] {
        let r = extract_obstruction(n).map_err(|e| e.to_string())?;
        ensure(r.matches(), || format!("n={n}: {:?}", r.diff()))?;
        ensure(r.computed == obstruction_closed_form(n).unwrap(), || {
            format!("closed form n={n}")
        })?;
        for id in ["div_identity", "k_ta_contraction", "refined_k_ab_unchanged"] {
            let rec = r
                .report
                .find(&format!("{id}_n{n}"))
                .ok_or_else(|| format!("missing {id}"))?;
            ensure(rec.passed(), || format!("{id} n={n}"))?;
        }
    }
    Ok(())
}

fn c7_gauge() -> Outcome {
    for n in [2usize, 3] {
        let top = 2 * n + 2;
        let raw = solve_lichnerowicz(n).map_err(|e| e.to_string())?;
        let op = LichOperator::new(n);
        let (dt, da) = op
            .divergence(&raw.sigma, top + 1)
            .map_err(|e| e.to_string())?;
        ensure(
            dt.is_zero_through(top - 1) && da.is_zero_through(top - 1),
            || format!("δσ through 2n+1, n={n}"),
        )?;
        let refined = refine(&raw).map_err(|e| e.to_string())?;
        let (dt, da) = op
            .divergence(&refined.sigma, top + 1)
            .map_err(|e| e.to_string())?;
        ensure(
            dt.is_zero_through(top + 1) && da.is_zero_through(top + 1),
            || format!("δσ through 2n+3, n={n}"),
        )?;
        let geo = FrameGeometry::new(n).map_err(|e| e.to_string())?;
        let psi = random_sym2(
            &mut ChaCha8Rng::seed_from_u64(70 + n as u64),
            n,
            2 * n as u32 + 4,
            2,
        );
        let sigma = crgeom::solvers::materialize(&refined.sigma, n, &psi, top + 1)
            .map_err(|e| e.to_string())?;
        ensure(sigma.trace(&geo).is_zero(), || format!("trace n={n}"))?;
        ensure(sigma.divergence(&geo).is_zero(), || {
            format!("frame δσ n={n}")
        })?;
    }
    Ok(())
}

fn c8_oracle() -> Outcome {
    let n = 2;
    let geo = FrameGeometry::new(n).map_err(|e| e.to_string())?;
    let s = solve_lichnerowicz(n).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for trial in 0..5 {
        // weight 2n+4 so the top-order operators act nontrivially
        let psi = random_sym2(&mut rng, n, 2 * n as u32 + 4, 3);
        let rep = cross_validate(&s, &geo, &psi, s.max_order() + 4, &format!("t{trial}"))
            .map_err(|e| e.to_string())?;
        ensure(rep.all_passed(), || {
            format!("trial {trial}: {:?}", rep.failures().collect::<Vec<_>>())
        })?;
    }
    Ok(())
}

fn c9_complex() -> Outcome {
    for n in [2, 3] {
        let rep = check_complex_property(n, 5, 9).map_err(|e| e.to_string())?;
        ensure(rep.all_passed(), || {
            format!(
                "n={n}: {:?}",
                rep.failures().map(|r| &r.id).collect::<Vec<_>>()
            )
        })?;
        ensure(rep.records.len() == 4, || {
            format!("expected 4 checks at n={n}, got {}", rep.records.len())
        })?;
        // the zero results would be vacuous for a zero operator
        let obs = extract_obstruction(n).map_err(|e| e.to_string())?.computed;
        let psi = random_sym2(
            &mut ChaCha8Rng::seed_from_u64(90 + n as u64),
            n,
            2 * n as u32 + 4,
            3,
        );
        ensure(
            !crgeom::opalg::nc_apply(&obs, &psi)
                .map_err(|e| e.to_string())?
                .is_zero(),
            || "obstruction vanishes".into(),
        )?;
    }
    Ok(())
}

fn c10_volume() -> Outcome {
    let n = 2;
    let m = 2 * n + 2;
    let run = |lap: &ScalarLaplacian, label: &str| -> Outcome {
        let rep = total_q_check(lap, label).map_err(|e| e.to_string())?;
        ensure(rep.all_passed(), || format!("{label}: {:?}", rep.records))
    };
    run(&ScalarLaplacian::flat(n, m), "flat")?;
    let a = rat(7, 3);
    let mut b = RhoSeries::one(m);
    b.set_a(m, a.clone());
    let lap = ScalarLaplacian::new(n, b, RhoSeries::one(m)).map_err(|e| e.to_string())?;
    run(&lap, "top")?;
    ensure(volume_coeffs(&lap).log_coeff == a, || "L != a".into())?;
    let q = crgeom::solvers::q_curvature(&lap).map_err(|e| e.to_string())?;
    ensure(crgeom::solvers::l_over_q(n) * q == a, || "rhs != a".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut nontrivial = 0;
    while nontrivial < 3 {
        let lap = random_profile(&mut rng, n);
        if lap.is_flat() {
            continue;
        }
        run(&lap, &format!("random{nontrivial}"))?;
        nontrivial += 1;
    }
    Ok(())
}

fn c11_adjoint_and_slot() -> Outcome {
    for n in 1..=4 {
        for k in 1..=n + 1 {
            let p = extract_gjms(n, k).map_err(|e| e.to_string())?;
            ensure(p.adjoint() == p, || format!("adjoint n={n} k={k}"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=3 {
        let lap = random_profile(&mut rng, n);
        let mut qs = Vec::new();
        for free in [rat(0, 1), rat(5, 2), rat(-13, 7)] {
            let s = solve_log_with(&lap, 2 * n + 4, Some(free)).map_err(|e| e.to_string())?;
            ensure(s.residual_vanishes(), || format!("log residual n={n}"))?;
            qs.push(q_factor(n) * s.b_boundary());
        }
        ensure(qs.windows(2).all(|w| w[0] == w[1]), || {
            format!("Q depends on the free slot at n={n}: {qs:?}")
        })?;
    }
    Ok(())
}

fn cli(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_crgeom"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "{args:?} exited with {}: {}",
            out.status,
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

fn json(s: &str) -> Result<Value, String> {
    serde_json::from_str(s).map_err(|e| e.to_string())
}

fn c12_cli() -> Outcome {
    let args = [
        "verify", "--suite", "all", "--n", "2", "--seed", "0", "--format", "json",
    ];
    let (first, second) = (cli(&args)?, cli(&args)?);
    let body = |s: &str| -> Result<(String, String), String> {
        let start = s.find("{\"report\":").ok_or("no report field")? + "{\"report\":".len();
        let end = s.find(",\"sha256\":").ok_or("no sha256 field")?;
        let sha = json(s)?["sha256"]
            .as_str()
            .ok_or("sha256 not a string")?
            .to_string();
        Ok((s[start..end].to_string(), sha))
    };
    let (r1, h1) = body(&first)?;
    let (r2, h2) = body(&second)?;
    ensure(r1 == r2 && h1 == h2, || {
        "verify output differs between runs".into()
    })?;
    let hex: String = Sha256::digest(r1.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    ensure(hex == h1, || {
        "sha256 does not hash the canonical report".into()
    })?;

    for n in 1..=3usize {
        for k in 1..=n + 1 {
            let v = json(&cli(&[
                "gjms",
                "--n",
                &n.to_string(),
                "--k",
                &k.to_string(),
                "--format",
                "json",
            ])?)?;
            let w: OpPolyWire =
                serde_json::from_value(v["operator"].clone()).map_err(|e| e.to_string())?;
            ensure(OpPoly::from_wire(&w) == gjms_product(n, k).unwrap(), || {
                format!("gjms json n={n} k={k}")
            })?;
        }
    }
    for n in [2usize, 3] {
        let v = json(&cli(&[
            "obstruction",
            "--n",
            &n.to_string(),
            "--format",
            "json",
        ])?)?;
        let w: NcNormalWire =
            serde_json::from_value(v["normal_form"].clone()).map_err(|e| e.to_string())?;
        let o = NcNormal::from_wire(&w).map_err(|e| e.to_string())?;
        ensure(o == obstruction_closed_form(n).unwrap(), || {
            format!("obstruction json n={n}")
        })?;
        let w: NcNormalWire =
            serde_json::from_value(v["k_taualpha"].clone()).map_err(|e| e.to_string())?;
        let kt = NcNormal::from_wire(&w).map_err(|e| e.to_string())?;
        ensure(kt == extract_obstruction(n).unwrap().k_ta, || {
            format!("k_taualpha json n={n}")
        })?;
    }
    let n = 2;
    let ups = "z1^2*zb1^2*t - (1/3)*i*z2*zb1*t^2 + t^3";
    let v = json(&cli(&[
        "qtransform",
        "--n",
        "2",
        "--upsilon",
        ups,
        "--format",
        "json",
    ])?)?;
    let w: HeisPolyWire =
        serde_json::from_value(v["P_upsilon"].clone()).map_err(|e| e.to_string())?;
    let want = gjms_product(n, n + 1)
        .unwrap()
        .apply(&parse_expression(ups, n).unwrap(), n);
    ensure(HeisPoly::from_wire(&w) == want, || "qtransform json".into())?;
    let text = v["text"].as_str().ok_or("qtransform text missing")?;
    ensure(
        parse_expression(text, n).map_err(|e| e.to_string())? == want,
        || "qtransform text".into(),
    )?;
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        (
            1,
            "q-polynomial recurrence equals closed form, k = 1..12",
            1,
            c1_qpoly,
        ),
        (
            2,
            "solver GJMS operators equal the product formula, n <= 4",
            30,
            c2_gjms,
        ),
        (3, "c_k table and constant annihilation", 5, c3_constants),
        (
            4,
            "eigen residuals vanish through n+1+k+4",
            60,
            c4_eigen_residuals,
        ),
        (
            5,
            "frame Christoffel table, Einstein constant and curvature values",
            60,
            c5_frame,
        ),
        (
            6,
            "obstruction operator equals closed form, n = 2, 3",
            300,
            c6_obstruction,
        ),
        (
            7,
            "divergence emergent and refined, trace zero",
            300,
            c7_gauge,
        ),
        (
            8,
            "frame oracle reproduces channel residuals on 5 random psi",
            300,
            c8_oracle,
        ),
        (
            9,
            "obstruction composed with D and with Z^a Z^b vanishes",
            300,
            c9_complex,
        ),
        (10, "volume log term against total Q", 60, c10_volume),
        (
            11,
            "GJMS self-adjoint; Q independent of the free slot",
            60,
            c11_adjoint_and_slot,
        ),
        (
            12,
            "CLI verify deterministic; emitted operators re-parse equal",
            300,
            c12_cli,
        ),
    ];
    let mut failed = 0;
    for (num, desc, bound, f) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let took = start.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(took < Duration::from_secs(bound), || {
                format!("took {:.2}s, bound {bound}s", took.as_secs_f64())
            })
        });
        match outcome {
            Ok(()) => println!(
                "PASS criterion {num:2}: {desc} ({:.2}s)",
                took.as_secs_f64()
            ),
            Err(e) => {
                failed += 1;
                println!(
                    "FAIL criterion {num:2}: {desc} ({:.2}s): {e}",
                    took.as_secs_f64()
                );
            }
        }
    }
    println!("acceptance: {}/12 criteria passed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
