//! Operator-valued solve of `(Δ_L + n + 2)σ = O(ρ^{2n+2})` on anti-hermitian `σ` with `σ|_M = ψ`.
//!
//! Components are `σ_{ττ}`, `σ_{τα}`, `σ_{αβ}`, each a series of normal forms acting on `ψ`.
//! With `I_X(j)` the indicial factor of channel `X`, the residual `σ̃ = (Δ_L + n + 2)σ` at `ρ^j` is
//!
//! * `σ̃_{ττ} = I_{ττ}σ_{ττ}[j] + (Δ_b + 4iT)σ_{ττ}[j−2] − T²σ_{ττ}[j−4] − 4Z^γσ_{τγ}[j−1]`
//! * `σ̃_{τα} = I_{τα}σ_{τα}[j] + (Δ_b + 3iT)σ_{τα}[j−2] − T²σ_{τα}[j−4] + Z_ασ_{ττ}[j−1] − 2Z^γσ_{αγ}[j−1]`
//! * `σ̃_{αβ} = I_{αβ}σ_{αβ}[j] + (Δ_b + 2iT)σ_{αβ}[j−2] − T²σ_{αβ}[j−4] + 2Z_{(α}σ_{β)τ}[j−1]`
//!
//! and the divergence is
//!
//! * `(δσ)_τ = −¼(j − 2n − 4)σ_{ττ}[j] + (i/2)Tσ_{ττ}[j−2] − Z^ασ_{τα}[j−1]`
//! * `(δσ)_α = −¼(j − 2n − 5)σ_{τα}[j] + (i/2)Tσ_{τα}[j−2] − Z^βσ_{αβ}[j−1]`.

use num_traits::Zero;

use crate::error::{CrError, Result};
use crate::exact::{rat, GaussianRational as Gr, Rational};
use crate::frame::{monomial_fun, zero_fun, FrameGeometry, FrameTensor};
use crate::heis::{Channel, HeisPoly, TensorPoly};
use crate::opalg::{
    nc_apply, obstruction_closed_form, NcNormal, NcOp, OpPoly, RuleTable, Shape, Source,
};
use crate::report::{CheckRecord, Report};
use crate::series::RhoSeries;

use super::indicial::{indicial_polynomial, IndicialChannel};

type NcSeries = RhoSeries<NcNormal>;

fn zero_nc(ch: Channel) -> NcNormal {
    NcNormal::zero(ch, Source::Psi)
}

fn at(s: &NcSeries, j: i64) -> NcNormal {
    if j < 0 || j as usize > s.max_order() {
        s.zero_coeff()
    } else {
        s.a(j as usize).clone()
    }
}

/// The three anti-hermitian components.
#[derive(Debug, Clone, PartialEq)]
pub struct Channels {
    pub tt: NcSeries,
    pub ta: NcSeries,
    pub ab: NcSeries,
}

impl Channels {
    pub fn zeros(max_order: usize) -> Self {
        Self {
            tt: RhoSeries::zeros(max_order, zero_nc(Channel::Scalar)),
            ta: RhoSeries::zeros(max_order, zero_nc(Channel::Vector)),
            ab: RhoSeries::zeros(max_order, zero_nc(Channel::Sym2)),
        }
    }

    pub fn max_order(&self) -> usize {
        self.tt.max_order()
    }

    pub fn is_zero_through(&self, m: usize) -> bool {
        self.tt.is_zero_through(m) && self.ta.is_zero_through(m) && self.ab.is_zero_through(m)
    }
}

/// Leading factors and lower-order couplings of the channel equations.
pub struct LichOperator {
    pub n: usize,
    rules: RuleTable,
}

impl LichOperator {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            rules: RuleTable::new(n),
        }
    }

    pub fn indicial(&self, ch: IndicialChannel, j: usize) -> Rational {
        indicial_polynomial(ch, self.n).eval_int(j as i64)
    }

    fn op(&self, x: &NcNormal, op: NcOp) -> Result<NcNormal> {
        self.rules.apply_op(x, &op)
    }

    fn lower_terms(&self, s: &NcSeries, j: i64, shift: i64) -> NcNormal {
        let t2 = OpPoly::t().mul(&OpPoly::t());
        at(s, j - 2)
            .mul_left(&OpPoly::shifted(shift))
            .sub(&at(s, j - 4).mul_left(&t2))
    }

    /// `σ̃` at order `j` with the given `ρ^j` coefficients of `σ` replaced by zero.
    pub fn residual_rest(&self, s: &Channels, j: usize) -> Result<(NcNormal, NcNormal, NcNormal)> {
        let j = j as i64;
        let tt = self.lower_terms(&s.tt, j, 4).sub(
            &self
                .op(&at(&s.ta, j - 1), NcOp::ZUpper)?
                .scale(&Gr::from_int(4)),
        );
        let ta = self
            .lower_terms(&s.ta, j, 3)
            .add(&self.op(&at(&s.tt, j - 1), NcOp::ZLower)?)
            .sub(
                &self
                    .op(&at(&s.ab, j - 1), NcOp::ZUpper)?
                    .scale(&Gr::from_int(2)),
            );
        let ab = self.lower_terms(&s.ab, j, 2).add(
            &self
                .op(&at(&s.ta, j - 1), NcOp::ZLower)?
                .scale(&Gr::from_int(2)),
        );
        Ok((tt, ta, ab))
    }

    /// Full residual series through `upto`, treating `σ` as zero above its order.
    pub fn residuals(&self, s: &Channels, upto: usize) -> Result<Channels> {
        let mut r = Channels::zeros(upto);
        for j in 0..=upto {
            let (mut tt, mut ta, mut ab) = self.residual_rest(s, j)?;
            let g = |ch| Gr::real(self.indicial(ch, j));
            tt.add_assign(&at(&s.tt, j as i64).scale(&g(IndicialChannel::TauTau)));
            ta.add_assign(&at(&s.ta, j as i64).scale(&g(IndicialChannel::TauAlpha)));
            ab.add_assign(&at(&s.ab, j as i64).scale(&g(IndicialChannel::AlphaBeta)));
            r.tt.set_a(j, tt);
            r.ta.set_a(j, ta);
            r.ab.set_a(j, ab);
        }
        Ok(r)
    }

    fn div_factor(&self, j: usize, offset: i64) -> Rational {
        rat(-(j as i64 - 2 * self.n as i64 - offset), 4)
    }

    fn divergence_rest(&self, s: &Channels, j: usize) -> Result<(NcNormal, NcNormal)> {
        let j = j as i64;
        let half_it = OpPoly::t().scale(&Gr::new(Rational::zero(), rat(1, 2)));
        let dt = at(&s.tt, j - 2)
            .mul_left(&half_it)
            .sub(&self.op(&at(&s.ta, j - 1), NcOp::ZUpper)?);
        let da = at(&s.ta, j - 2)
            .mul_left(&half_it)
            .sub(&self.op(&at(&s.ab, j - 1), NcOp::ZUpper)?);
        Ok((dt, da))
    }

    /// `(δσ)_τ` and `(δσ)_α` through `upto`.
    pub fn divergence(&self, s: &Channels, upto: usize) -> Result<(NcSeries, NcSeries)> {
        let mut dt = RhoSeries::zeros(upto, zero_nc(Channel::Scalar));
        let mut da = RhoSeries::zeros(upto, zero_nc(Channel::Vector));
        for j in 0..=upto {
            let (mut t, mut a) = self.divergence_rest(s, j)?;
            t.add_assign(&at(&s.tt, j as i64).scale(&Gr::real(self.div_factor(j, 4))));
            a.add_assign(&at(&s.ta, j as i64).scale(&Gr::real(self.div_factor(j, 5))));
            dt.set_a(j, t);
            da.set_a(j, a);
        }
        Ok((dt, da))
    }
}

fn solve_slot(x: &NcNormal, factor: Rational, ch: &str, j: usize) -> Result<NcNormal> {
    if factor.is_zero() {
        if x.is_zero() {
            return Ok(x.clone());
        }
        return Err(CrError::Indicial {
            channel: ch.into(),
            order: j,
        });
    }
    Ok(x.scale(&Gr::real(-factor.recip())))
}

/// Solver state.
#[derive(Debug, Clone, PartialEq)]
pub struct LichState {
    pub n: usize,
    pub sigma: Channels,
    /// `σ̃` through `ρ^{max_order}`.
    pub residual: Channels,
    pub refined: bool,
    /// `σ_{ττ}`, `σ_{τα}` at `ρ^{2n+2}` from the Lichnerowicz equations, kept across refinement.
    pub lich_top: (NcNormal, NcNormal),
}

impl LichState {
    pub fn max_order(&self) -> usize {
        self.sigma.max_order()
    }

    /// `k_{αβ} = σ̃_{αβ}[2n+2]`.
    pub fn k_ab(&self) -> &NcNormal {
        self.residual.ab.a(2 * self.n + 2)
    }

    /// `k_{τα} = σ̃_{τα}[2n+3]`.
    pub fn k_ta(&self) -> &NcNormal {
        self.residual.ta.a(2 * self.n + 3)
    }

    /// `𝒪• = −k_{αβ}`.
    pub fn obstruction(&self) -> NcNormal {
        self.k_ab().scale(&Gr::from_int(-1))
    }
}

/// Raw solve through `ρ^{2n+2}`; the series carry one extra zero order `2n+3`.
pub fn solve_lichnerowicz(n: usize) -> Result<LichState> {
    if n < 2 {
        return Err(CrError::Domain(format!(
            "the Lichnerowicz solve needs n >= 2 (dimension >= 5), got n = {n}"
        )));
    }
    let top = 2 * n + 2;
    let m = top + 1;
    let op = LichOperator::new(n);
    let mut s = Channels::zeros(m);
    s.ab.set_a(0, NcNormal::identity(Source::Psi));
    for j in 1..=top {
        let (tt, ta, ab) = op.residual_rest(&s, j)?;
        s.tt.set_a(
            j,
            solve_slot(&tt, op.indicial(IndicialChannel::TauTau, j), "tautau", j)?,
        );
        s.ta.set_a(
            j,
            solve_slot(
                &ta,
                op.indicial(IndicialChannel::TauAlpha, j),
                "taualpha",
                j,
            )?,
        );
        if j < top {
            s.ab.set_a(
                j,
                solve_slot(
                    &ab,
                    op.indicial(IndicialChannel::AlphaBeta, j),
                    "alphabeta",
                    j,
                )?,
            );
        }
    }
    let residual = op.residuals(&s, m)?;
    let lich_top = (s.tt.a(top).clone(), s.ta.a(top).clone());
    Ok(LichState {
        n,
        sigma: s,
        residual,
        refined: false,
        lich_top,
    })
}

/// Resets `σ_{ττ}`, `σ_{τα}` at `ρ^{2n+2}`, `ρ^{2n+3}` from `δσ = 0`, then solves `σ_{αβ}` at `ρ^{2n+3}`.
pub fn refine(state: &LichState) -> Result<LichState> {
    let n = state.n;
    let top = 2 * n + 2;
    let op = LichOperator::new(n);
    let mut s = state.sigma.clone();
    for j in [top, top + 1] {
        let (dt, da) = op.divergence_rest(&s, j)?;
        s.tt.set_a(j, solve_slot(&dt, op.div_factor(j, 4), "div_tau", j)?);
        s.ta.set_a(j, solve_slot(&da, op.div_factor(j, 5), "div_alpha", j)?);
    }
    let (_, _, ab) = op.residual_rest(&s, top + 1)?;
    s.ab.set_a(
        top + 1,
        solve_slot(
            &ab,
            op.indicial(IndicialChannel::AlphaBeta, top + 1),
            "alphabeta",
            top + 1,
        )?,
    );
    let residual = op.residuals(&s, top + 1)?;
    Ok(LichState {
        n,
        sigma: s,
        residual,
        refined: true,
        lich_top: state.lich_top.clone(),
    })
}

/// Result of `extract_obstruction` with all its side checks.
#[derive(Debug, Clone)]
pub struct ObstructionResult {
    pub n: usize,
    pub computed: NcNormal,
    pub closed_form: NcNormal,
    pub k_ab: NcNormal,
    pub k_ta: NcNormal,
    pub report: Report,
}

impl ObstructionResult {
    pub fn matches(&self) -> bool {
        self.computed == self.closed_form
    }

    /// Per-shape difference `computed − closed form`.
    pub fn diff(&self) -> Vec<(Shape, OpPoly)> {
        let d = self.computed.sub(&self.closed_form);
        d.terms().map(|(s, p)| (*s, p.clone())).collect()
    }
}

/// Solves, refines, and compares `−σ̃_{αβ}[2n+2]` with the closed form.
pub fn extract_obstruction(n: usize) -> Result<ObstructionResult> {
    let raw = solve_lichnerowicz(n)?;
    let refined = refine(&raw)?;
    let op = LichOperator::new(n);
    let rules = RuleTable::new(n);
    let top = 2 * n + 2;
    let computed = raw.obstruction();
    let closed_form = obstruction_closed_form(n)?;
    let k_ab = refined.k_ab().clone();
    let k_ta = refined.k_ta().clone();
    let mut rep = Report::new();
    let diff = computed.sub(&closed_form);
    rep.push(
        CheckRecord::new(
            format!("obstruction_closed_form_n{n}"),
            "−σ̃_{αβ}[2n+2] = closed-form 𝒪•",
            diff.is_zero(),
        )
        .with_detail(if diff.is_zero() {
            String::new()
        } else {
            diff.render_text()
        }),
    );
    rep.check(
        format!("lich_residual_through_2n1_n{n}"),
        "σ̃ = O(ρ^{2n+2})",
        raw.residual.is_zero_through(top - 1),
    );
    rep.check(
        format!("lich_top_tt_ta_n{n}"),
        "σ̃_{ττ}[2n+2] = σ̃_{τα}[2n+2] = 0",
        raw.residual.tt.a(top).is_zero() && raw.residual.ta.a(top).is_zero(),
    );
    rep.check(
        format!("refined_k_ab_unchanged_n{n}"),
        "refinement leaves k_{αβ} unchanged",
        *refined.k_ab() == *raw.k_ab(),
    );
    let two_div = rules
        .apply_op(&k_ab, &NcOp::ZUpper)?
        .scale(&Gr::from_int(2));
    rep.check(
        format!("div_identity_n{n}"),
        "2Z^βk_{αβ}[2n+2] = k_{τα}[2n+3]",
        two_div == k_ta,
    );
    rep.check(
        format!("k_ta_contraction_n{n}"),
        "Z^αk_{τα}[2n+3] = 0",
        rules.apply_op(&k_ta, &NcOp::ZUpper)?.is_zero(),
    );
    rep.check(
        format!("refined_lich_top_agree_n{n}"),
        "divergence-fixed σ_{ττ}, σ_{τα} at ρ^{2n+2} equal the Lichnerowicz-solved ones",
        refined.sigma.tt.a(top) == &raw.lich_top.0 && refined.sigma.ta.a(top) == &raw.lich_top.1,
    );
    let (dt, da) = op.divergence(&raw.sigma, top + 1)?;
    rep.check(
        format!("divergence_emergent_n{n}"),
        "δσ = O(ρ^{2n+2}) without imposing it",
        dt.is_zero_through(top - 1) && da.is_zero_through(top - 1),
    );
    let (dt, da) = op.divergence(&refined.sigma, top + 1)?;
    rep.check(
        format!("divergence_refined_n{n}"),
        "δσ = O(ρ^{2n+4}) after refinement",
        dt.is_zero() && da.is_zero(),
    );
    rep.check(
        format!("sigma_ab_order1_n{n}"),
        "σ_{αβ}[1] = 0",
        raw.sigma.ab.a(1).is_zero(),
    );
    Ok(ObstructionResult {
        n,
        computed,
        closed_form,
        k_ab,
        k_ta,
        report: rep,
    })
}

/// `σ` on a concrete `ψ` as a frame tensor with only unbarred components.
pub fn materialize(
    s: &Channels,
    n: usize,
    psi: &TensorPoly,
    max_order: usize,
) -> Result<FrameTensor> {
    let mut t = FrameTensor::symmetric(n, max_order);
    let mut tt = zero_fun(max_order);
    let mut ta: Vec<_> = (0..=n).map(|_| zero_fun(max_order)).collect();
    let mut ab = vec![vec![zero_fun(max_order); n + 1]; n + 1];
    for j in 0..=s.max_order().min(max_order) {
        let x = nc_apply(s.tt.a(j), psi)?;
        tt = tt.add(&monomial_fun(max_order, j, x.get(&[]).clone()));
        let v = nc_apply(s.ta.a(j), psi)?;
        for a in 1..=n {
            ta[a] = ta[a].add(&monomial_fun(max_order, j, v.get(&[a]).clone()));
        }
        let p = nc_apply(s.ab.a(j), psi)?;
        for a in 1..=n {
            for b in a..=n {
                ab[a][b] = ab[a][b].add(&monomial_fun(max_order, j, p.get(&[a, b]).clone()));
            }
        }
    }
    let ix = t.ix;
    t.set(&[ix.tau(), ix.tau()], tt);
    for a in 1..=n {
        t.set(&[ix.tau(), ix.alpha(a)], ta[a].clone());
        for b in a..=n {
            t.set(&[ix.alpha(a), ix.alpha(b)], ab[a][b].clone());
        }
    }
    Ok(t)
}

/// Compares the frame-oracle `(Δ_L + n + 2)σ` and `δσ` with the recursion's residual series on `ψ`.
pub fn cross_validate(
    state: &LichState,
    geo: &FrameGeometry,
    psi: &TensorPoly,
    upto: usize,
    label: &str,
) -> Result<Report> {
    let n = state.n;
    let op = LichOperator::new(n);
    let sigma = materialize(&state.sigma, n, psi, upto)?;
    let oracle = sigma.lichnerowicz_apply(geo);
    let recursion = materialize(&op.residuals(&state.sigma, upto)?, n, psi, upto)?;
    let mut rep = Report::new();
    let ix = geo.ix;
    let mut bad = Vec::new();
    for (k, f) in oracle.components() {
        if *f != recursion.get(k) {
            bad.push(ix.tuple_name(k));
        }
    }
    for (k, _) in recursion.components() {
        if oracle.get_ref(k).is_none() {
            bad.push(ix.tuple_name(k));
        }
    }
    rep.push(
        CheckRecord::new(
            format!("lich_oracle_{label}"),
            "frame-oracle (Δ_L+n+2)σ = channel recursion residuals",
            bad.is_empty(),
        )
        .with_detail(bad.join(" ")),
    );
    let (dt, da) = op.divergence(&state.sigma, upto)?;
    let dv = sigma.divergence(geo);
    let mut dv_ok = dv.get(&[ix.tau()]) == materialize_scalar(&dt, psi, upto)?;
    for a in 1..=n {
        dv_ok &= dv.get(&[ix.alpha(a)]) == materialize_vector(&da, psi, a, upto)?;
    }
    dv_ok &= dv.components().all(|(k, _)| !ix.is_barred(k[0]));
    rep.check(
        format!("div_oracle_{label}"),
        "frame-oracle δσ = divergence recursion",
        dv_ok,
    );
    rep.check(
        format!("trace_zero_{label}"),
        "g^{PQ}σ_{PQ} = 0",
        sigma.trace(geo).is_zero(),
    );
    Ok(rep)
}

fn materialize_scalar(s: &NcSeries, psi: &TensorPoly, m: usize) -> Result<RhoSeries<HeisPoly>> {
    let mut f = zero_fun(m);
    for j in 0..=s.max_order().min(m) {
        f = f.add(&monomial_fun(m, j, nc_apply(s.a(j), psi)?.get(&[]).clone()));
    }
    Ok(f)
}

fn materialize_vector(
    s: &NcSeries,
    psi: &TensorPoly,
    a: usize,
    m: usize,
) -> Result<RhoSeries<HeisPoly>> {
    let mut f = zero_fun(m);
    for j in 0..=s.max_order().min(m) {
        f = f.add(&monomial_fun(
            m,
            j,
            nc_apply(s.a(j), psi)?.get(&[a]).clone(),
        ));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heis::random_sym2;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn obstruction_n2() {
        let r = extract_obstruction(2).unwrap();
        assert!(
            r.report.all_passed(),
            "{:#?}",
            r.report.failures().collect::<Vec<_>>()
        );
        assert!(r.matches());
    }

    #[test]
    fn first_order_tau_alpha() {
        let n = 2;
        let s = solve_lichnerowicz(n).unwrap();
        let want = NcNormal::from_shape(
            Shape::DivPsi,
            OpPoly::constant(Gr::from_frac(2, n as i64 + 2)),
        );
        assert_eq!(s.sigma.ta.a(1), &want);
    }

    #[test]
    fn oracle_agrees_n2() {
        let n = 2;
        let geo = FrameGeometry::new(n).unwrap();
        let s = solve_lichnerowicz(n).unwrap();
        let psi = random_sym2(&mut ChaCha8Rng::seed_from_u64(3), n, 8, 2);
        let r = cross_validate(&s, &geo, &psi, s.max_order() + 2, "test").unwrap();
        assert!(r.all_passed(), "{:#?}", r.failures().collect::<Vec<_>>());
    }
}
