//! Subcommand implementations.

use std::fmt::Write as _;
use std::fs;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crgeom::exact::{parse_rational, render_rational};
use crgeom::frame::{curvature, FrameGeometry};
use crgeom::heis::{parse_expression, HeisPoly};
use crgeom::opalg::{c_k, gjms_product, ObstructionFormula};
use crgeom::series::RhoSeries;
use crgeom::solvers::{
    extract_gjms, extract_obstruction, indicial_polynomial, q_factor, q_transform, solve_eigen,
    solve_log_with, total_q_check, volume_coeffs, IndicialChannel, ProfileFile,
};
use crgeom::verify::{parse_n_range, run as run_verify, Suite, VerifyOptions};
use crgeom::CrError;

use crate::{Cli, Command, Format};

pub enum Failure {
    Usage(String),
    Verification(String),
}

impl From<CrError> for Failure {
    fn from(e: CrError) -> Self {
        match e {
            CrError::Verification(m) => Failure::Verification(m),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Res<T> = Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn emit(cli: &Cli, body: &str) -> Res<()> {
    let mut s = body.to_string();
    if !s.ends_with('\n') {
        s.push('\n');
    }
    match &cli.out {
        Some(p) => fs::write(p, s).map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{s}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json value serializes")
}

fn series_json(s: &RhoSeries<HeisPoly>, n: usize) -> Value {
    serde_json::to_value(s.to_wire(|c| c.to_wire(n))).expect("series serializes")
}

fn series_text(s: &RhoSeries<HeisPoly>, name: &str) -> String {
    let mut out = String::new();
    for (j, a, b) in s.nonzero() {
        let _ = writeln!(out, "{name}[{j}] = {}", a.render());
        if !b.is_zero() {
            let _ = writeln!(out, "{name}[{j}] log = {}", b.render());
        }
    }
    if out.is_empty() {
        let _ = writeln!(out, "{name} = 0");
    }
    out
}

fn read_profile(path: &std::path::Path) -> Res<ProfileFile> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| usage(format!("bad profile file {}: {e}", path.display())))
}

pub fn run(cli: &Cli) -> Res<()> {
    match &cli.command {
        Command::Gjms { n, k, factored } => gjms(cli, *n as usize, *k as usize, *factored),
        Command::Obstruction { n } => obstruction(cli, *n as usize),
        Command::Dirichlet {
            n,
            k,
            boundary,
            max_order,
        } => dirichlet(cli, *n as usize, *k as usize, boundary, *max_order),
        Command::Logq {
            profile,
            max_order,
            free_slot,
        } => logq(cli, profile, *max_order, free_slot.as_deref()),
        Command::Volume { profile } => volume(cli, profile),
        Command::Qtransform { n, upsilon } => qtransform(cli, *n as usize, upsilon),
        Command::DumpCurvature { n, max_order } => dump_curvature(cli, *n as usize, *max_order),
        Command::Indicial { n, channel } => indicial(cli, *n as usize, channel),
        Command::Verify {
            suite,
            n,
            seed,
            jobs,
        } => verify(cli, suite, n, *seed, *jobs),
    }
}

fn check_k(n: usize, k: usize) -> Res<()> {
    if k > n + 1 {
        return Err(usage(format!(
            "k must satisfy 1 <= k <= n+1 = {}, got {k}",
            n + 1
        )));
    }
    Ok(())
}

fn gjms(cli: &Cli, n: usize, k: usize, factored: bool) -> Res<()> {
    check_k(n, k)?;
    let p = extract_gjms(n, k)?;
    let q = gjms_product(n, k)?;
    if p != q {
        return Err(Failure::Verification(format!(
            "solver gives {} but the product formula gives {}",
            p.render_text(),
            q.render_text()
        )));
    }
    let body = match cli.format.unwrap_or(Format::Text) {
        Format::Text => p.render_text(),
        Format::Latex if factored => p.render_latex_factored(),
        Format::Latex => p.render_latex(),
        Format::Json => pretty(&json!({
            "n": n,
            "k": k,
            "c_k": c_k(k as u32).render(),
            "text": p.render_text(),
            "operator": p.to_wire(n),
        })),
    };
    emit(cli, &body)
}

fn obstruction(cli: &Cli, n: usize) -> Res<()> {
    if n < 2 {
        return Err(usage(format!(
            "the obstruction operator needs CR dimension 2n+1 >= 5 (n >= 2), got n = {n}"
        )));
    }
    let res = extract_obstruction(n)?;
    let formula = ObstructionFormula::new(n)?;
    if !res.matches() {
        let mut msg = String::from("solver and closed form differ:");
        for (s, p) in res.diff() {
            let _ = write!(msg, "\n  {}: {}", s.tag(), p.render_text());
        }
        emit(cli, &res.computed.render_text())?;
        return Err(Failure::Verification(msg));
    }
    let body = match cli.format.unwrap_or(Format::Text) {
        Format::Text => res.computed.render_text(),
        Format::Latex => formula.render_latex(),
        Format::Json => {
            let terms: Vec<Value> = formula
                .terms
                .iter()
                .map(|(s, c, shifts)| json!({"shape": s.tag(), "notation": s.notation(), "coefficient": render_rational(c), "shifts": shifts}))
                .collect();
            pretty(&json!({
                "n": n,
                "prefactor": render_rational(&formula.prefactor),
                "terms": terms,
                "normal_form": res.computed.to_wire(n),
                "k_taualpha": res.k_ta.to_wire(n),
                "checks": res.report.records,
            }))
        }
    };
    emit(cli, &body)?;
    if !res.report.all_passed() {
        let ids: Vec<_> = res.report.failures().map(|r| r.id.clone()).collect();
        return Err(Failure::Verification(ids.join(", ")));
    }
    Ok(())
}

fn dirichlet(cli: &Cli, n: usize, k: usize, boundary: &str, max_order: Option<usize>) -> Res<()> {
    check_k(n, k)?;
    let f = parse_expression(boundary, n).map_err(|e| usage(format!("boundary: {e}")))?;
    let m = max_order.unwrap_or(2 * n + 6);
    if m < 2 * k {
        return Err(usage(format!(
            "--max-order must be at least 2k = {}",
            2 * k
        )));
    }
    let sol = solve_eigen(n, k, &f, m)?;
    let cross = gjms_product(n, k)?.apply(&f, n).scale(&c_k(k as u32));
    let g0 = sol.g_boundary().clone();
    let ok = sol.residual_vanishes() && g0 == cross;
    let body = match cli.format.unwrap_or(Format::Text) {
        Format::Json => pretty(&json!({
            "n": n,
            "k": k,
            "boundary": f.render(),
            "max_order": m,
            "F": series_json(&sol.f, n),
            "G": series_json(&sol.g, n),
            "G_boundary": g0.render(),
            "ck_P2k_f": cross.render(),
            "residual_zero": sol.residual_vanishes(),
        })),
        _ => format!(
            "{}{}G|_M = {}\nc_k P_2k f = {}\nresidual through rho^{}: {}",
            series_text(&sol.f, "F"),
            series_text(&sol.g, "G"),
            g0.render(),
            cross.render(),
            n + 1 - k + m,
            if sol.residual_vanishes() {
                "zero"
            } else {
                "NONZERO"
            }
        ),
    };
    emit(cli, &body)?;
    if !ok {
        return Err(Failure::Verification(
            "G|_M differs from c_k P_2k f or residual is nonzero".into(),
        ));
    }
    Ok(())
}

fn rational_series_json(s: &RhoSeries<crgeom::Rational>) -> Value {
    serde_json::to_value(s.to_wire(render_rational)).expect("series serializes")
}

fn logq(
    cli: &Cli,
    profile: &std::path::Path,
    max_order: Option<usize>,
    free: Option<&str>,
) -> Res<()> {
    let pf = read_profile(profile)?;
    let n = pf.n;
    let m = max_order.unwrap_or(2 * n + 6);
    let lap = pf.laplacian(m)?;
    let free = free
        .map(|s| parse_rational(s).map_err(|e| usage(format!("--free-slot: {e}"))))
        .transpose()?;
    let sol = solve_log_with(&lap, m, free)?;
    let q = q_factor(n) * sol.b_boundary();
    let body = match cli.format.unwrap_or(Format::Text) {
        Format::Json => pretty(&json!({
            "n": n,
            "max_order": m,
            "A": rational_series_json(&sol.a),
            "B": rational_series_json(&sol.b),
            "B_boundary": render_rational(sol.b_boundary()),
            "Q": render_rational(&q),
            "residual_zero": sol.residual_vanishes(),
        })),
        _ => format!(
            "B|_M = {}\nQ = {}\nresidual: {}",
            render_rational(sol.b_boundary()),
            render_rational(&q),
            if sol.residual_vanishes() {
                "zero"
            } else {
                "NONZERO"
            }
        ),
    };
    emit(cli, &body)?;
    if !sol.residual_vanishes() {
        return Err(Failure::Verification(
            "log-solve residual is nonzero".into(),
        ));
    }
    Ok(())
}

fn volume(cli: &Cli, profile: &std::path::Path) -> Res<()> {
    let pf = read_profile(profile)?;
    let n = pf.n;
    let lap = pf.laplacian(2 * n + 2)?;
    let v = volume_coeffs(&lap);
    let rep = total_q_check(&lap, "profile")?;
    let body = match cli.format.unwrap_or(Format::Text) {
        Format::Json => pretty(&json!({
            "n": n,
            "c": v.coeffs.iter().map(|(j, c)| json!([j, render_rational(c)])).collect::<Vec<_>>(),
            "L": render_rational(&v.log_coeff),
            "checks": rep.records,
        })),
        _ => {
            let mut s = String::new();
            for (j, c) in &v.coeffs {
                let _ = writeln!(s, "c[{j}] = {}", render_rational(c));
            }
            let _ = write!(
                s,
                "L = {}\n{}",
                render_rational(&v.log_coeff),
                rep.records[0].detail
            );
            s
        }
    };
    emit(cli, &body)?;
    if !rep.all_passed() {
        return Err(Failure::Verification(rep.records[0].detail.clone()));
    }
    Ok(())
}

fn qtransform(cli: &Cli, n: usize, upsilon: &str) -> Res<()> {
    let u = parse_expression(upsilon, n).map_err(|e| usage(format!("upsilon: {e}")))?;
    let r = q_transform(n, &u)?;
    let body = match cli.format.unwrap_or(Format::Text) {
        Format::Json => pretty(
            &json!({"n": n, "upsilon": u.render(), "P_upsilon": r.to_wire(n), "text": r.render()}),
        ),
        _ => r.render(),
    };
    emit(cli, &body)
}

fn dump_curvature(cli: &Cli, n: usize, max_order: usize) -> Res<()> {
    let geo = FrameGeometry::new(n)?;
    let t = curvature(&geo, max_order);
    let body = match cli.format.unwrap_or(Format::Json) {
        Format::Json => pretty(&serde_json::to_value(t.to_wire()).expect("tensor serializes")),
        _ => {
            let mut s = String::new();
            for (k, f) in t.components() {
                let _ = writeln!(s, "R[{}] = {}", geo.ix.tuple_name(k), f.a(0).render());
            }
            s
        }
    };
    emit(cli, &body)
}

fn indicial(cli: &Cli, n: usize, channel: &str) -> Res<()> {
    let ch = IndicialChannel::from_name(channel)
        .ok_or_else(|| usage(format!("unknown channel {channel:?}")))?;
    let p = indicial_polynomial(ch, n);
    let roots = p.integer_roots(-4 * n as i64 - 20, 4 * n as i64 + 20);
    let body = match cli.format.unwrap_or(Format::Text) {
        Format::Json => pretty(&json!({
            "n": n,
            "channel": ch.name(),
            "coefficients": p.coeffs().iter().map(render_rational).collect::<Vec<_>>(),
            "integer_roots": roots,
        })),
        _ => format!("{}\ninteger roots: {roots:?}", p.render()),
    };
    emit(cli, &body)
}

fn verify(cli: &Cli, suite: &str, n: &str, seed: u64, jobs: Option<usize>) -> Res<()> {
    let suite = Suite::parse(suite).ok_or_else(|| usage(format!("unknown suite {suite:?}")))?;
    let ns = parse_n_range(n)?;
    let jobs = jobs.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|x| x.get())
            .unwrap_or(1)
    });
    let rep = run_verify(&VerifyOptions {
        suite,
        ns,
        seed,
        jobs,
    })?;
    let canonical = rep.canonical_json();
    let hash = Sha256::digest(canonical.as_bytes());
    let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
    let body = match cli.format.unwrap_or(Format::Json) {
        Format::Json => {
            let timing = serde_json::to_string(&rep.timing_ms).expect("timing serializes");
            format!("{{\"report\":{canonical},\"sha256\":\"{hex}\",\"timing_ms\":{timing}}}")
        }
        _ => {
            let mut s = String::new();
            for r in &rep.records {
                let tag = if r.passed() { "PASS" } else { "FAIL" };
                let _ = writeln!(s, "{tag} {}  {}", r.id, r.anchor);
            }
            let passed = rep.records.iter().filter(|r| r.passed()).count();
            let _ = write!(
                s,
                "{passed}/{} checks passed; sha256 {hex}",
                rep.records.len()
            );
            s
        }
    };
    emit(cli, &body)?;
    if !rep.all_passed() {
        let ids: Vec<_> = rep
            .records
            .iter()
            .filter(|r| !r.passed())
            .map(|r| r.id.clone())
            .collect();
        return Err(Failure::Verification(ids.join(", ")));
    }
    Ok(())
}
