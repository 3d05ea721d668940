//! `𝒪•∘D = 0` and `D*∘𝒪• = 0` on the model, where `Df = Z_{(α}Z_{β)}f`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::heis::{random_poly, random_sym2, TensorPoly};
use crate::opalg::{d_operator, eval_chain, nc_apply, NcOp, RuleTable};
use crate::report::{CheckRecord, Report};

use super::lichnerowicz::extract_obstruction;

/// Symbolic and sampled checks; `seed` drives the random inputs.
pub fn check_complex_property(n: usize, trials: usize, seed: u64) -> Result<Report> {
    let obs = extract_obstruction(n)?.computed;
    let rules = RuleTable::new(n);
    let mut rep = Report::new();
    let od = rules.compose(&obs, &d_operator())?;
    rep.push(
        CheckRecord::new(
            format!("obstruction_after_d_n{n}"),
            "𝒪•∘D = 0 as a normal form",
            od.is_zero(),
        )
        .with_detail(if od.is_zero() {
            String::new()
        } else {
            od.render_text()
        }),
    );
    let dd = rules.apply_ops(&obs, &[NcOp::ZUpper, NcOp::ZUpper])?;
    rep.push(
        CheckRecord::new(
            format!("double_divergence_after_obstruction_n{n}"),
            "Z^αZ^β∘𝒪• = 0 as a normal form",
            dd.is_zero(),
        )
        .with_detail(if dd.is_zero() {
            String::new()
        } else {
            dd.render_text()
        }),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut od_ok, mut dd_ok) = (true, true);
    for _ in 0..trials {
        let f = random_poly(&mut rng, n, 2 * n as u32 + 6, 4);
        let df = eval_chain(&TensorPoly::scalar(n, f), &[NcOp::ZLower, NcOp::ZLower])?;
        od_ok &= nc_apply(&obs, &df)?.is_zero();
        let psi = random_sym2(&mut rng, n, 2 * n as u32 + 4, 3);
        let out = nc_apply(&obs, &psi)?;
        dd_ok &= eval_chain(&out, &[NcOp::ZUpper, NcOp::ZUpper])?.is_zero();
    }
    rep.check(
        format!("obstruction_after_d_samples_n{n}"),
        "𝒪•(Df) = 0 on random f",
        od_ok,
    );
    rep.check(
        format!("double_divergence_samples_n{n}"),
        "Z^αZ^β𝒪•ψ = 0 on random ψ",
        dd_ok,
    );
    Ok(rep)
}
