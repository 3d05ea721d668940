//! Verification suites: named groups of exact checks over a range of `n`.

use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CrError, Result};
use crate::exact::{factorial, rat, GaussianRational as Gr, Rational};
use crate::frame::{compare_christoffel, einstein_check, FrameGeometry};
use crate::heis::{
    check_frame_relations, parse_expression, random_poly, random_sym2, HeisPoly, TensorPoly,
};
use crate::opalg::{
    c_k, check_commutation_on, check_rule_on, gjms_product, qpoly, QMode, RuleTable, Source,
};
use crate::report::{CheckRecord, Report};
use crate::series::RhoSeries;
use crate::solvers::{
    check_complex_property, cross_validate, extract_gjms, extract_obstruction,
    indicial_from_oracle, indicial_polynomial, odd_coefficients_vanish, q_curvature,
    q_expected_top_perturbation, solve_eigen, solve_eigen_with, solve_lichnerowicz, solve_log_with,
    total_q_check, volume_coeffs, IndicialChannel, ScalarLaplacian,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Arith,
    Frame,
    Gjms,
    Curvature,
    Lichnerowicz,
    Volume,
    All,
}

impl Suite {
    pub const CONCRETE: [Suite; 6] = [
        Suite::Arith,
        Suite::Frame,
        Suite::Gjms,
        Suite::Curvature,
        Suite::Lichnerowicz,
        Suite::Volume,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Arith => "arith",
            Suite::Frame => "frame",
            Suite::Gjms => "gjms",
            Suite::Curvature => "curvature",
            Suite::Lichnerowicz => "lichnerowicz",
            Suite::Volume => "volume",
            Suite::All => "all",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Self::CONCRETE
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
    }

    fn expand(self) -> Vec<Suite> {
        if self == Suite::All {
            Self::CONCRETE.to_vec()
        } else {
            vec![self]
        }
    }
}

/// Parses `2` or `1..3` (inclusive).
pub fn parse_n_range(s: &str) -> Result<Vec<usize>> {
    let bad = || CrError::Domain(format!("bad n range {s:?}; use N or A..B"));
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|_| bad());
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if lo == 0 || hi < lo {
        return Err(bad());
    }
    Ok((lo..=hi).collect())
}

/// Options shared by all suites.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    pub suite: Suite,
    pub ns: Vec<usize>,
    pub seed: u64,
    pub jobs: usize,
}

/// Machine-readable outcome; `timing_ms` stays out of the canonical body.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub n: Vec<usize>,
    pub seed: u64,
    pub records: Vec<CheckRecord>,
    #[serde(skip)]
    pub timing_ms: BTreeMap<String, u128>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.records.iter().all(CheckRecord::passed)
    }

    /// Deterministic JSON body with fixed ordering and no timing.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Runs the requested suites; independent `(suite, n)` tasks execute on up to `jobs` threads.
pub fn run(opts: &VerifyOptions) -> Result<VerifyReport> {
    let tasks: Vec<(Suite, usize)> = opts
        .suite
        .expand()
        .into_iter()
        .flat_map(|s| opts.ns.iter().map(move |&n| (s, n)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| CrError::Domain(format!("thread pool: {e}")))?;
    let seed = opts.seed;
    let outcomes: Vec<(String, u128, Result<Report>)> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(s, n)| {
                let start = Instant::now();
                let r = run_one(s, n, seed);
                (format!("{}_n{n}", s.name()), start.elapsed().as_millis(), r)
            })
            .collect()
    });
    let mut records = Vec::new();
    let mut timing_ms = BTreeMap::new();
    for (key, ms, r) in outcomes {
        match r {
            Ok(rep) => records.extend(rep.records),
            Err(e) => records.push(
                CheckRecord::new(format!("{key}_error"), "suite ran to completion", false)
                    .with_detail(e.to_string()),
            ),
        }
        timing_ms.insert(key, ms);
    }
    Ok(VerifyReport {
        suite: opts.suite,
        n: opts.ns.clone(),
        seed,
        records,
        timing_ms,
    })
}

fn task_seed(seed: u64, suite: Suite, n: usize) -> u64 {
    seed.wrapping_mul(1_000_003)
        .wrapping_add((suite as u64) * 101 + n as u64)
}

pub fn run_one(suite: Suite, n: usize, seed: u64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(task_seed(seed, suite, n));
    match suite {
        Suite::Arith => arith(n, &mut rng),
        Suite::Frame => frame(n),
        Suite::Gjms => gjms(n, &mut rng),
        Suite::Curvature => curvature(n),
        Suite::Lichnerowicz => lichnerowicz(n, &mut rng),
        Suite::Volume => volume(n, &mut rng),
        Suite::All => unreachable!("expanded before dispatch"),
    }
}

fn random_gr(rng: &mut ChaCha8Rng) -> Gr {
    Gr::new(
        rat(rng.gen_range(-9..=9), rng.gen_range(1..=9)),
        rat(rng.gen_range(-9..=9), rng.gen_range(1..=9)),
    )
}

fn arith(n: usize, rng: &mut ChaCha8Rng) -> Result<Report> {
    let mut rep = Report::new();
    if n == 1 {
        let ok = (1..=12).all(|k| qpoly(k, QMode::Recurrence) == qpoly(k, QMode::ClosedForm));
        rep.check(
            "qpoly_recurrence_closed_form",
            "q_l = x q_{l−1} − (l−1)(k−l+1) y² q_{l−2} matches the closed form, k ≤ 12",
            ok,
        );
        let ck_ok = (1..=6u32).all(|k| {
            let d = Rational::from_integer(factorial(k) * factorial(k - 1));
            let s = if k % 2 == 1 { rat(2, 1) } else { rat(-2, 1) };
            c_k(k) == Gr::real(s / d)
        });
        rep.check("c_k_values", "c_k = 2(−1)^{k+1}/(k!(k−1)!), k ≤ 6", ck_ok);
        let mut field = true;
        for _ in 0..20 {
            let (a, b, c) = (random_gr(rng), random_gr(rng), random_gr(rng));
            field &= &(&a * &b) * &c == &a * &(&b * &c);
            field &= &a * &(&b + &c) == &(&a * &b) + &(&a * &c);
            if !b.is_zero() {
                field &= &a.checked_div(&b).expect("nonzero divisor") * &b == a;
            }
            field &= Gr::parse(&a.render()).ok() == Some(a.clone());
        }
        rep.check(
            "gaussian_rational_field",
            "Gaussian rationals: associativity, distributivity, division, text round-trip",
            field,
        );
    }
    rep.extend(check_frame_relations(n));
    let mut rt = true;
    for _ in 0..5 {
        let p = random_poly(rng, n, 6, 5);
        rt &= parse_expression(&p.render(), n).ok() == Some(p.clone());
    }
    rep.check(
        format!("expression_round_trip_n{n}"),
        "render then parse is the identity",
        rt,
    );
    let rules = RuleTable::new(n);
    let psi = random_sym2(rng, n, 4, 3);
    let f = TensorPoly::scalar(n, random_poly(rng, n, 6, 4));
    let (mut rules_ok, mut comm_ok) = (true, true);
    for (op, shape, _) in rules.rules() {
        let input = if shape.source() == Source::Psi {
            &psi
        } else {
            &f
        };
        rules_ok &= check_rule_on(&rules, &op, shape, input)?;
        comm_ok &= check_commutation_on(&rules, &op, shape, input)?;
    }
    rep.check(
        format!("nc_rules_n{n}"),
        "every rewrite rule agrees with direct evaluation",
        rules_ok,
    );
    rep.check(
        format!("nc_commutation_n{n}"),
        "Z^γ p(Δ_b) = p(Δ_b − 2iT)Z^γ, Z_α p(Δ_b) = p(Δ_b + 2iT)Z_α",
        comm_ok,
    );
    Ok(rep)
}

fn frame(n: usize) -> Result<Report> {
    let mut rep = compare_christoffel(n)?;
    let geo = FrameGeometry::new(n)?;
    let ix = geo.ix;
    let c = &geo.brackets;
    let half = Gr::from_frac(1, 2);
    rep.check(
        format!("bracket_tau_alpha_n{n}"),
        "[Z_τ, Z_α] = ½Z_α",
        c[ix.tau()][ix.alpha(1)][ix.alpha(1)] == half,
    );
    let mixed = &c[ix.alpha(1)][ix.alphabar(1)];
    rep.check(
        format!("bracket_alpha_alphabar_n{n}"),
        "[Z_α, Z_β̄] = −½h_{αβ̄}(Z_τ − Z_τ̄)",
        mixed[ix.tau()] == -half.clone()
            && mixed[ix.taubar()] == half
            && (1..=n).all(|a| mixed[ix.alpha(a)].is_zero()),
    );
    rep.check(
        format!("bracket_alpha_beta_n{n}"),
        "[Z_α, Z_β] = 0",
        ix.unbarred().skip(1).all(|a| {
            ix.unbarred()
                .skip(1)
                .all(|b| c[a][b].iter().all(Gr::is_zero))
        }),
    );
    Ok(rep)
}

fn gjms(n: usize, rng: &mut ChaCha8Rng) -> Result<Report> {
    let mut rep = Report::new();
    for k in 1..=n + 1 {
        let p = extract_gjms(n, k)?;
        let q = gjms_product(n, k)?;
        rep.push(
            CheckRecord::new(
                format!("gjms_product_n{n}_k{k}"),
                "G|_M = c_k P_{2k} f with P_{2k} = Π(Δ_b + i(k−1−2j)T)",
                p == q,
            )
            .with_detail(p.render_text()),
        );
        rep.check(
            format!("gjms_self_adjoint_n{n}_k{k}"),
            "P_{2k}* = P_{2k}",
            p.adjoint() == p,
        );
        let max_order = 2 * k + 4;
        let mut resid = true;
        let mut parity = true;
        let mut cross = true;
        for _ in 0..3 {
            let f = random_poly(rng, n, 6, 4);
            let s = solve_eigen(n, k, &f, max_order)?;
            resid &= s.residual_vanishes();
            parity &= odd_coefficients_vanish(&s);
            cross &= *s.g_boundary() == q.apply(&f, n).scale(&c_k(k as u32));
        }
        rep.check(
            format!("eigen_residual_n{n}_k{k}"),
            "(Δ − ((n+1)²−k²)/4)u = 0 through ρ^{n+1+k+4}",
            resid,
        );
        rep.check(
            format!("eigen_odd_vanish_n{n}_k{k}"),
            "odd F and G coefficients vanish",
            parity,
        );
        rep.check(
            format!("eigen_dirichlet_n{n}_k{k}"),
            "G|_M = c_k P_{2k} f on random f",
            cross,
        );
        let f = random_poly(rng, n, 6, 4);
        let a = solve_eigen_with(n, k, f.clone(), max_order, None)?;
        let b = solve_eigen_with(n, k, f, max_order, Some(random_poly(rng, n, 4, 2)))?;
        rep.check(
            format!("eigen_free_slot_n{n}_k{k}"),
            "G|_M independent of F_{2k}",
            b.residual_vanishes() && a.g_boundary() == b.g_boundary(),
        );
    }
    let s = solve_eigen(n, n + 1, &HeisPoly::one(), 2 * n + 6)?;
    rep.check(
        format!("eigen_constant_n{n}"),
        "f = 1, k = n+1 gives G = 0",
        s.g.is_zero() && s.residual_vanishes(),
    );
    rep.check(
        format!("gjms_annihilates_constants_n{n}"),
        "P_{2n+2} 1 = 0",
        extract_gjms(n, n + 1)?.apply(&HeisPoly::one(), n).is_zero(),
    );
    Ok(rep)
}

fn curvature(n: usize) -> Result<Report> {
    let mut rep = einstein_check(n)?;
    let geo = FrameGeometry::new(n)?;
    let mut bad = Vec::new();
    for ch in IndicialChannel::ALL {
        if ch == IndicialChannel::TraceFree && n < 2 {
            continue;
        }
        let want = indicial_polynomial(ch, n);
        for j in 0..=2 * n + 4 {
            if indicial_from_oracle(ch, &geo, j) != want.eval_int(j as i64) {
                bad.push(format!("{}@{j}", ch.name()));
            }
        }
    }
    rep.push(
        CheckRecord::new(
            format!("indicial_oracle_n{n}"),
            "indicial polynomials match the frame-geometry operators",
            bad.is_empty(),
        )
        .with_detail(bad.join(" ")),
    );
    Ok(rep)
}

fn lichnerowicz(n: usize, rng: &mut ChaCha8Rng) -> Result<Report> {
    if n < 2 {
        return Ok(Report::new());
    }
    let mut rep = extract_obstruction(n)?.report;
    rep.extend(check_complex_property(n, 5, rng.gen())?);
    let geo = FrameGeometry::new(n)?;
    let state = solve_lichnerowicz(n)?;
    let trials = if n == 2 { 5 } else { 1 };
    let upto = state.max_order() + if n == 2 { 4 } else { 1 };
    for t in 0..trials {
        let psi = random_sym2(rng, n, 2 * n as u32 + 4, 2);
        rep.extend(cross_validate(
            &state,
            &geo,
            &psi,
            upto,
            &format!("n{n}_psi{t}"),
        )?);
    }
    Ok(rep)
}

/// Random profile with `b(0) = c(0) = 1`.
pub fn random_profile(rng: &mut ChaCha8Rng, n: usize) -> ScalarLaplacian {
    let m = 2 * n + 2;
    let mut b = RhoSeries::one(m);
    let mut c = RhoSeries::one(m);
    for j in 1..=m {
        if rng.gen_bool(0.6) {
            b.set_a(j, rat(rng.gen_range(-5..=5), rng.gen_range(1..=6)));
        }
        if rng.gen_bool(0.6) {
            c.set_a(j, rat(rng.gen_range(-5..=5), rng.gen_range(1..=6)));
        }
    }
    ScalarLaplacian::new(n, b, c).expect("unit constant terms")
}

fn volume(n: usize, rng: &mut ChaCha8Rng) -> Result<Report> {
    let m = 2 * n + 2;
    let mut rep = Report::new();
    let flat = ScalarLaplacian::flat(n, m);
    let vf = volume_coeffs(&flat);
    rep.check(
        format!("volume_flat_n{n}"),
        "flat: c_{−2n−2} = 1/(n+1), other c_j = 0, L = 0",
        vf.coeff(-(m as i64)) == rat(1, n as i64 + 1)
            && vf
                .coeffs
                .iter()
                .filter(|(j, _)| *j != -(m as i64))
                .all(|(_, c)| c.is_zero())
            && vf.log_coeff.is_zero(),
    );
    rep.extend(total_q_check(&flat, "flat")?);
    let a = rat(rng.gen_range(1..=9), rng.gen_range(1..=9));
    let mut b = RhoSeries::one(m);
    b.set_a(m, a.clone());
    let top = ScalarLaplacian::new(n, b, RhoSeries::one(m))?;
    rep.check(
        format!("volume_top_n{n}"),
        "b = 1 + aρ^{2n+2}: L = a",
        volume_coeffs(&top).log_coeff == a,
    );
    rep.check(
        format!("q_top_n{n}"),
        "b = 1 + aρ^{2n+2}: Q = (−1)^{n+1} n!(n+1)! a/2",
        q_curvature(&top)? == q_expected_top_perturbation(n, &a),
    );
    rep.extend(total_q_check(&top, "top")?);
    for i in 0..3 {
        rep.extend(total_q_check(
            &random_profile(rng, n),
            &format!("random{i}"),
        )?);
    }
    let lap = random_profile(rng, n).with_max_order(m + 2);
    let base = solve_log_with(&lap, m + 2, None)?;
    let mut indep = base.residual_vanishes();
    for v in [rat(1, 1), rat(-3, 2), rat(7, 5)] {
        let s = solve_log_with(&lap, m + 2, Some(v))?;
        indep &= s.residual_vanishes() && s.b_boundary() == base.b_boundary();
    }
    rep.check(
        format!("q_free_slot_n{n}"),
        "Q independent of a^{(2n+2)}",
        indep,
    );
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_n_range("1..3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_n_range("2").unwrap(), vec![2]);
        assert!(parse_n_range("3..1").is_err());
        assert!(parse_n_range("x").is_err());
    }

    #[test]
    fn all_suites_n2() {
        let opts = VerifyOptions {
            suite: Suite::All,
            ns: vec![2],
            seed: 0,
            jobs: 4,
        };
        let r = run(&opts).unwrap();
        let fails: Vec<_> = r.records.iter().filter(|c| !c.passed()).collect();
        assert!(fails.is_empty(), "{fails:#?}");
        assert!(r.records.iter().any(|c| c.id.starts_with("total_q_")));
        assert_eq!(r.canonical_json(), run(&opts).unwrap().canonical_json());
    }
}
