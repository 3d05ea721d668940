//! Noncommutative channel operators acting on a symmetric `ψ_{αβ}` or a scalar `f`,
//! and their rewriting to a normal form over a closed shape basis.
//!
//! A normal form is `Σ p_S(Δ_b, T) ∘ S` over shape tags `S`. Applying `Z^γ` or `Z_α`
//! moves the polynomial to the left with `Z^γ p(Δ_b) = p(Δ_b − 2iT) Z^γ` and
//! `Z_α p(Δ_b) = p(Δ_b + 2iT) Z_α`, then rewrites the shape by the rule table.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::gjms::product_of_shifts;
use super::oppoly::{OpPoly, OpTermWire};
use crate::error::{CrError, Result};
use crate::exact::{factorial, GaussianRational as Gr, Rational};
use crate::heis::{Channel, HeisPoly, TensorPoly};

/// What the operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    /// A symmetric tensor `ψ_{αβ}`.
    Psi,
    /// A scalar function `f`.
    Scalar,
}

/// Closed shape basis. `(Z·ψ)_α = Z^γψ_{αγ}`, `Z·Z·ψ = Z^γZ^δψ_{γδ}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Shape {
    Psi,
    ZsymDivPsi,
    ZZdivdivPsi,
    DivPsi,
    ZdivdivPsi,
    DivdivPsi,
    ZZf,
    Zf,
    F,
}

pub const PSI_SHAPES: [Shape; 6] = [
    Shape::Psi,
    Shape::ZsymDivPsi,
    Shape::ZZdivdivPsi,
    Shape::DivPsi,
    Shape::ZdivdivPsi,
    Shape::DivdivPsi,
];
pub const SCALAR_SHAPES: [Shape; 3] = [Shape::ZZf, Shape::Zf, Shape::F];

impl Shape {
    pub fn channel(self) -> Channel {
        use Shape::*;
        match self {
            Psi | ZsymDivPsi | ZZdivdivPsi | ZZf => Channel::Sym2,
            DivPsi | ZdivdivPsi | Zf => Channel::Vector,
            DivdivPsi | F => Channel::Scalar,
        }
    }

    pub fn source(self) -> Source {
        if SCALAR_SHAPES.contains(&self) {
            Source::Scalar
        } else {
            Source::Psi
        }
    }

    pub fn tag(self) -> &'static str {
        use Shape::*;
        match self {
            Psi => "psi",
            ZsymDivPsi => "ZsymDivPsi",
            ZZdivdivPsi => "ZZdivdivPsi",
            DivPsi => "divPsi",
            ZdivdivPsi => "ZdivdivPsi",
            DivdivPsi => "divdivPsi",
            ZZf => "ZZf",
            Zf => "Zf",
            F => "f",
        }
    }

    pub fn from_tag(s: &str) -> Option<Shape> {
        PSI_SHAPES
            .iter()
            .chain(SCALAR_SHAPES.iter())
            .copied()
            .find(|sh| sh.tag() == s)
    }

    pub fn notation(self) -> &'static str {
        use Shape::*;
        match self {
            Psi => "ψ_{αβ}",
            ZsymDivPsi => "Z_{(α}(Z·ψ)_{β)}",
            ZZdivdivPsi => "Z_αZ_β(Z·Z·ψ)",
            DivPsi => "(Z·ψ)_α",
            ZdivdivPsi => "Z_α(Z·Z·ψ)",
            DivdivPsi => "Z·Z·ψ",
            ZZf => "Z_αZ_β f",
            Zf => "Z_α f",
            F => "f",
        }
    }

    pub fn latex(self) -> &'static str {
        use Shape::*;
        match self {
            Psi => "\\psi_{\\alpha\\beta}",
            ZsymDivPsi => "Z_{(\\alpha}Z^{\\gamma}\\psi_{\\beta)\\gamma}",
            ZZdivdivPsi => "Z_\\alpha Z_\\beta Z^\\gamma Z^\\delta\\psi_{\\gamma\\delta}",
            DivPsi => "Z^\\gamma\\psi_{\\alpha\\gamma}",
            ZdivdivPsi => "Z_\\alpha Z^\\gamma Z^\\delta\\psi_{\\gamma\\delta}",
            DivdivPsi => "Z^\\gamma Z^\\delta\\psi_{\\gamma\\delta}",
            ZZf => "Z_\\alpha Z_\\beta f",
            Zf => "Z_\\alpha f",
            F => "f",
        }
    }

    /// The shape as a chain of `Z` operations on its source, innermost first.
    pub fn chain(self) -> Vec<NcOp> {
        use NcOp::{ZLower as L, ZUpper as U};
        use Shape::*;
        match self {
            Psi | F => vec![],
            DivPsi => vec![U],
            DivdivPsi => vec![U, U],
            ZsymDivPsi => vec![U, L],
            ZdivdivPsi => vec![U, U, L],
            ZZdivdivPsi => vec![U, U, L, L],
            Zf => vec![L],
            ZZf => vec![L, L],
        }
    }
}

/// Elementary operation on a channel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NcOp {
    /// Left multiplication by a polynomial in `Δ_b, T`.
    Poly(OpPoly),
    /// `Z_α` insertion; symmetrized when it lands in the pair channel.
    ZLower,
    /// `Z^γ` contraction of the last index.
    ZUpper,
}

/// Operator in normal form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NcNormal {
    pub channel: Channel,
    pub source: Source,
    terms: BTreeMap<Shape, OpPoly>,
}

impl NcNormal {
    pub fn zero(channel: Channel, source: Source) -> Self {
        Self {
            channel,
            source,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(source: Source) -> Self {
        match source {
            Source::Psi => Self::from_shape(Shape::Psi, OpPoly::one()),
            Source::Scalar => Self::from_shape(Shape::F, OpPoly::one()),
        }
    }

    pub fn from_shape(shape: Shape, p: OpPoly) -> Self {
        let mut r = Self::zero(shape.channel(), shape.source());
        r.add_term(shape, p);
        r
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Shape, &OpPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, s: Shape) -> OpPoly {
        self.terms.get(&s).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, s: Shape, p: OpPoly) {
        assert_eq!(
            s.channel(),
            self.channel,
            "shape {} in {:?} channel",
            s.tag(),
            self.channel
        );
        assert_eq!(
            s.source(),
            self.source,
            "shape {} with source {:?}",
            s.tag(),
            self.source
        );
        if p.is_zero() {
            return;
        }
        let e = self.terms.entry(s).or_default();
        e.add_assign(&p);
        if e.is_zero() {
            self.terms.remove(&s);
        }
    }

    pub fn add_assign(&mut self, o: &NcNormal) {
        for (s, p) in &o.terms {
            self.add_term(*s, p.clone());
        }
    }

    pub fn add(&self, o: &NcNormal) -> NcNormal {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }

    pub fn sub(&self, o: &NcNormal) -> NcNormal {
        self.add(&o.scale(&Gr::from_int(-1)))
    }

    pub fn scale(&self, s: &Gr) -> NcNormal {
        self.mul_left(&OpPoly::constant(s.clone()))
    }

    pub fn mul_left(&self, p: &OpPoly) -> NcNormal {
        let mut r = NcNormal::zero(self.channel, self.source);
        for (s, q) in &self.terms {
            r.add_term(*s, p.mul(q));
        }
        r
    }

    /// `Σ p_S ∘ S` as an expression.
    pub fn to_expr(&self) -> NcExpr {
        let mut e = NcExpr::new(self.source);
        for (s, p) in &self.terms {
            let mut ch = s.chain();
            ch.push(NcOp::Poly(p.clone()));
            e.chains.push(ch);
        }
        e
    }
}

impl fmt::Debug for NcNormal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_text())
    }
}

impl NcNormal {
    pub fn render_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(s, p)| format!("[{}]·{}", p.render_text(), s.notation()))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn render_latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(s, p)| format!("\\left[{}\\right]{}", p.render_latex_factored(), s.latex()))
            .collect::<Vec<_>>()
            .join("+")
    }
}

/// Sum of operator chains applied to a common source. Each chain lists operations
/// innermost first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NcExpr {
    pub source: Source,
    pub chains: Vec<Vec<NcOp>>,
}

impl NcExpr {
    pub fn new(source: Source) -> Self {
        Self {
            source,
            chains: Vec::new(),
        }
    }

    pub fn chain(source: Source, ops: Vec<NcOp>) -> Self {
        Self {
            source,
            chains: vec![ops],
        }
    }

    /// `λ·e`.
    pub fn scale(&self, l: &Gr) -> Self {
        let mut r = self.clone();
        for ch in &mut r.chains {
            ch.push(NcOp::Poly(OpPoly::constant(l.clone())));
        }
        r
    }
}

/// Rewrite rules for `Z^γ` and `Z_α` on each shape of CR dimension `n`.
#[derive(Debug, Clone)]
pub struct RuleTable {
    pub n: usize,
    upper: BTreeMap<Shape, Vec<(Shape, OpPoly)>>,
    lower: BTreeMap<Shape, Vec<(Shape, OpPoly)>>,
}

impl RuleTable {
    pub fn new(n: usize) -> Self {
        use Shape::*;
        let half = Gr::from_frac(-1, 2);
        // Z^αZ_α = −½(Δ_b − inT)
        let contr = OpPoly::shifted(-(n as i64)).scale(&half);
        let one = OpPoly::one();
        let upper = BTreeMap::from([
            (Psi, vec![(DivPsi, one.clone())]),
            (
                ZsymDivPsi,
                vec![
                    (
                        DivPsi,
                        OpPoly::shifted(-(n as i64) - 2).scale(&Gr::from_frac(-1, 4)),
                    ),
                    (ZdivdivPsi, OpPoly::constant(Gr::from_frac(1, 2))),
                ],
            ),
            (ZZdivdivPsi, vec![(ZdivdivPsi, contr.clone())]),
            (DivPsi, vec![(DivdivPsi, one.clone())]),
            (ZdivdivPsi, vec![(DivdivPsi, contr.clone())]),
            (ZZf, vec![(Zf, contr.clone())]),
            (Zf, vec![(F, contr)]),
        ]);
        let lower = BTreeMap::from([
            (DivPsi, vec![(ZsymDivPsi, one.clone())]),
            (ZdivdivPsi, vec![(ZZdivdivPsi, one.clone())]),
            (DivdivPsi, vec![(ZdivdivPsi, one.clone())]),
            (F, vec![(Zf, one.clone())]),
            (Zf, vec![(ZZf, one)]),
        ]);
        Self { n, upper, lower }
    }

    /// Every rule as `(operation, shape, result)`.
    pub fn rules(&self) -> Vec<(NcOp, Shape, NcNormal)> {
        let mut out = Vec::new();
        for (op, table) in [(NcOp::ZUpper, &self.upper), (NcOp::ZLower, &self.lower)] {
            for (s, rhs) in table {
                let ch = rhs[0].0.channel();
                let mut r = NcNormal::zero(ch, s.source());
                for (t, p) in rhs {
                    r.add_term(*t, p.clone());
                }
                out.push((op.clone(), *s, r));
            }
        }
        out
    }

    /// Applies one operation to a normal form.
    pub fn apply_op(&self, x: &NcNormal, op: &NcOp) -> Result<NcNormal> {
        let (table, shift, name) = match op {
            NcOp::Poly(p) => return Ok(x.mul_left(p)),
            NcOp::ZUpper => (
                &self.upper,
                Gr::new(
                    Rational::from_integer(0.into()),
                    Rational::from_integer((-2).into()),
                ),
                "Z^γ",
            ),
            NcOp::ZLower => (
                &self.lower,
                Gr::new(
                    Rational::from_integer(0.into()),
                    Rational::from_integer(2.into()),
                ),
                "Z_α",
            ),
        };
        let channel = match (op, x.channel) {
            (NcOp::ZUpper, Channel::Sym2) => Channel::Vector,
            (NcOp::ZUpper, Channel::Vector) => Channel::Scalar,
            (NcOp::ZLower, Channel::Scalar) => Channel::Vector,
            (NcOp::ZLower, Channel::Vector) => Channel::Sym2,
            (_, ch) => {
                return Err(CrError::BasisOverflow(format!(
                    "{name} applied in the {ch:?} channel"
                )))
            }
        };
        let mut r = NcNormal::zero(channel, x.source);
        for (s, p) in &x.terms {
            let rhs = table.get(s).ok_or_else(|| {
                CrError::BasisOverflow(format!("{name} applied to {} ({})", s.tag(), s.notation()))
            })?;
            let moved = p.shift_db(&shift);
            for (t, q) in rhs {
                r.add_term(*t, moved.mul(q));
            }
        }
        Ok(r)
    }

    pub fn apply_ops(&self, x: &NcNormal, ops: &[NcOp]) -> Result<NcNormal> {
        ops.iter()
            .try_fold(x.clone(), |acc, op| self.apply_op(&acc, op))
    }

    /// Rewrites an expression to its unique normal form.
    pub fn normalize(&self, e: &NcExpr) -> Result<NcNormal> {
        let id = NcNormal::identity(e.source);
        let mut acc: Option<NcNormal> = None;
        for ch in &e.chains {
            let t = self.apply_ops(&id, ch)?;
            match &mut acc {
                None => acc = Some(t),
                Some(a) if a.channel == t.channel => a.add_assign(&t),
                Some(a) => {
                    return Err(CrError::Domain(format!(
                        "sum mixes {:?} and {:?} channels",
                        a.channel, t.channel
                    )))
                }
            }
        }
        Ok(acc.unwrap_or(id))
    }

    /// `outer ∘ inner` where `outer` acts on `ψ` and `inner` produces a pair tensor.
    pub fn compose(&self, outer: &NcNormal, inner: &NcNormal) -> Result<NcNormal> {
        if outer.source != Source::Psi || inner.channel != Channel::Sym2 {
            return Err(CrError::Domain(
                "composition needs ψ-source outer and pair-valued inner".into(),
            ));
        }
        let mut r = NcNormal::zero(outer.channel, inner.source);
        for (s, p) in &outer.terms {
            let mut ops = s.chain();
            ops.push(NcOp::Poly(p.clone()));
            r.add_assign(&self.apply_ops(inner, &ops)?);
        }
        Ok(r)
    }
}

/// All shape tensors of a concrete input.
#[derive(Debug, Clone)]
pub struct TagTensors {
    pub source: Source,
    map: BTreeMap<Shape, TensorPoly>,
}

impl TagTensors {
    pub fn new(input: &TensorPoly) -> Result<Self> {
        let mut map = BTreeMap::new();
        let source = match input.channel {
            Channel::Sym2 => {
                if !input.is_symmetric() {
                    return Err(CrError::Domain("ψ must be symmetric".into()));
                }
                Source::Psi
            }
            Channel::Scalar => Source::Scalar,
            Channel::Vector => {
                return Err(CrError::Domain("inputs are pair tensors or scalars".into()))
            }
        };
        let shapes: &[Shape] = if source == Source::Psi {
            &PSI_SHAPES
        } else {
            &SCALAR_SHAPES
        };
        for &s in shapes {
            map.insert(s, eval_chain(input, &s.chain())?);
        }
        Ok(Self { source, map })
    }

    pub fn get(&self, s: Shape) -> &TensorPoly {
        &self.map[&s]
    }

    pub fn apply(&self, op: &NcNormal) -> Result<TensorPoly> {
        if op.source != self.source && !op.is_zero() {
            return Err(CrError::Domain(format!(
                "operator source {:?} vs input {:?}",
                op.source, self.source
            )));
        }
        let n = self.map.values().next().map(|t| t.n).unwrap_or(0);
        let mut r = TensorPoly::zero(n, op.channel);
        for (s, p) in op.terms() {
            r = r.add(&self.get(*s).map(|c| p.apply(c, n)));
        }
        Ok(r)
    }
}

/// Concrete evaluation of a chain of operations on a tensor.
pub fn eval_chain(input: &TensorPoly, ops: &[NcOp]) -> Result<TensorPoly> {
    let mut cur = input.clone();
    for op in ops {
        cur = match op {
            NcOp::Poly(p) => cur.map(|c| p.apply(c, cur.n)),
            NcOp::ZUpper => cur.contract_z_upper().ok_or_else(|| {
                CrError::BasisOverflow("Z^γ applied in the scalar channel".into())
            })?,
            NcOp::ZLower => cur
                .insert_z_lower()
                .ok_or_else(|| CrError::BasisOverflow("Z_α applied in the pair channel".into()))?,
        };
    }
    Ok(cur)
}

/// Concrete evaluation of an expression.
pub fn eval_expr(e: &NcExpr, input: &TensorPoly) -> Result<TensorPoly> {
    let mut acc: Option<TensorPoly> = None;
    for ch in &e.chains {
        let t = eval_chain(input, ch)?;
        acc = Some(match acc {
            None => t,
            Some(a) => a.add(&t),
        });
    }
    Ok(acc.unwrap_or_else(|| input.clone()))
}

/// `nc_apply`: evaluates a normal form on a concrete input.
pub fn nc_apply(op: &NcNormal, input: &TensorPoly) -> Result<TensorPoly> {
    TagTensors::new(input)?.apply(op)
}

/// `D f = Z_{(α}Z_{β)} f` on the flat model.
pub fn d_operator() -> NcNormal {
    NcNormal::from_shape(Shape::ZZf, OpPoly::one())
}

/// Structured closed form of the linearized obstruction operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionFormula {
    pub n: usize,
    /// `(−1)^{n+1}/(n!)²`.
    pub prefactor: Rational,
    /// `(shape, inner coefficient, shifts of the factors Δ_b + i·s·T)`.
    pub terms: Vec<(Shape, Rational, Vec<i64>)>,
}

impl ObstructionFormula {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(CrError::Domain(format!(
                "the obstruction operator needs n >= 2 (dimension >= 5), got n = {n}"
            )));
        }
        let ni = n as i64;
        let nf = factorial(n as u32);
        let sign: i64 = if n % 2 == 1 { 1 } else { -1 };
        let prefactor = Rational::new(sign.into(), &nf * &nf);
        let shifts = |top: i64| (0..=top).map(|k| ni + 2 - 2 * k).collect::<Vec<_>>();
        let terms = vec![
            (Shape::Psi, Rational::from_integer(1.into()), shifts(ni)),
            (
                Shape::ZsymDivPsi,
                crate::exact::rat(4 * (ni + 1), ni + 2),
                shifts(ni - 1),
            ),
            (
                Shape::ZZdivdivPsi,
                crate::exact::rat(4 * ni, ni + 2),
                shifts(ni - 2),
            ),
        ];
        Ok(Self {
            n,
            prefactor,
            terms,
        })
    }

    pub fn normal_form(&self) -> NcNormal {
        let mut r = NcNormal::zero(Channel::Sym2, Source::Psi);
        for (s, c, shifts) in &self.terms {
            let p = product_of_shifts(shifts.iter().copied()).scale(&Gr::real(&self.prefactor * c));
            r.add_term(*s, p);
        }
        r
    }

    pub fn render_latex(&self) -> String {
        let mut body = Vec::new();
        for (s, c, shifts) in &self.terms {
            let cf = if *c == Rational::from_integer(1.into()) {
                String::new()
            } else if c.is_integer() {
                c.numer().to_string()
            } else {
                format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom())
            };
            let fs: String = shifts
                .iter()
                .map(|&k| format!("({})", OpPoly::shifted(k).render_latex()))
                .collect();
            body.push(format!("{cf}{fs}{}", s.latex()));
        }
        let p = &self.prefactor;
        let pre = if p.is_integer() {
            p.numer().to_string()
        } else {
            let sign = if *p < Rational::from_integer(0.into()) {
                "-"
            } else {
                ""
            };
            format!("{sign}\\frac{{{}}}{{{}}}", p.numer().magnitude(), p.denom())
        };
        format!("{pre}\\left[{}\\right]", body.join("+"))
    }
}

/// The closed form as a normal form.
pub fn obstruction_closed_form(n: usize) -> Result<NcNormal> {
    Ok(ObstructionFormula::new(n)?.normal_form())
}

#[derive(Serialize, Deserialize)]
pub struct NcTermWire {
    pub shape: String,
    #[serde(flatten)]
    pub term: OpTermWire,
}

/// Wire form: `{"n", "channel", "source", "terms": [{"shape", "db", "t", "coeff"}]}`.
#[derive(Serialize, Deserialize)]
pub struct NcNormalWire {
    pub n: usize,
    pub channel: Channel,
    pub source: Source,
    pub terms: Vec<NcTermWire>,
}

impl NcNormal {
    pub fn to_wire(&self, n: usize) -> NcNormalWire {
        let mut terms = Vec::new();
        for (s, p) in &self.terms {
            for t in p.wire_terms() {
                terms.push(NcTermWire {
                    shape: s.tag().to_string(),
                    term: t,
                });
            }
        }
        NcNormalWire {
            n,
            channel: self.channel,
            source: self.source,
            terms,
        }
    }

    pub fn from_wire(w: &NcNormalWire) -> Result<NcNormal> {
        let mut r = NcNormal::zero(w.channel, w.source);
        for t in &w.terms {
            let s = Shape::from_tag(&t.shape)
                .ok_or_else(|| CrError::Domain(format!("unknown shape `{}`", t.shape)))?;
            if s.channel() != w.channel || s.source() != w.source {
                return Err(CrError::Domain(format!(
                    "shape `{}` does not fit the declared channel",
                    t.shape
                )));
            }
            r.add_term(s, OpPoly::from_wire_terms(std::slice::from_ref(&t.term)));
        }
        Ok(r)
    }
}

/// A concrete check of one rewrite rule or commutation relation on a sample input.
pub fn check_rule_on(
    rules: &RuleTable,
    op: &NcOp,
    shape: Shape,
    input: &TensorPoly,
) -> Result<bool> {
    let tags = TagTensors::new(input)?;
    let rhs = rules.apply_op(&NcNormal::from_shape(shape, OpPoly::one()), op)?;
    let lhs = eval_chain(tags.get(shape), std::slice::from_ref(op))?;
    Ok(lhs == tags.apply(&rhs)?)
}

/// Checks `op ∘ Δ_b = (Δ_b ± 2iT) ∘ op` and `op ∘ T = T ∘ op` on a shape.
pub fn check_commutation_on(
    rules: &RuleTable,
    op: &NcOp,
    shape: Shape,
    input: &TensorPoly,
) -> Result<bool> {
    let tags = TagTensors::new(input)?;
    let mut ok = true;
    for p in [OpPoly::db(), OpPoly::t()] {
        let x = NcNormal::from_shape(shape, p.clone());
        let lhs = eval_chain(&tags.apply(&x)?, std::slice::from_ref(op))?;
        let rhs = tags.apply(&rules.apply_op(&x, op)?)?;
        ok &= lhs == rhs;
    }
    Ok(ok)
}

/// Scalar `f` as a tensor input.
pub fn scalar_input(n: usize, f: HeisPoly) -> TensorPoly {
    TensorPoly::scalar(n, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heis::parse_expression;

    fn psi2() -> TensorPoly {
        let n = 2;
        TensorPoly::sym2_from_fn(n, |a, b| {
            let s =
                format!("z{a}*zb{b}*t^2 + zb{a}*zb{b}*t - i*z1*zb2*zb{a}*t + (1/3)*z{b}^2*zb1^2");
            parse_expression(&s, n).unwrap()
        })
    }

    #[test]
    fn contraction_on_vector_channel_commutes_with_sublaplacian() {
        let r = RuleTable::new(2);
        let x = NcNormal::from_shape(Shape::DivPsi, OpPoly::db());
        let y = r.apply_op(&x, &NcOp::ZUpper).unwrap();
        assert_eq!(
            y,
            NcNormal::from_shape(Shape::DivdivPsi, OpPoly::shifted(-2))
        );
    }

    #[test]
    fn composite_identity_for_symmetrized_divergence() {
        let n = 3;
        let r = RuleTable::new(n);
        let e = NcExpr::chain(Source::Psi, vec![NcOp::ZUpper, NcOp::ZLower, NcOp::ZUpper]);
        let got = r.normalize(&e).unwrap();
        let mut want = NcNormal::from_shape(
            Shape::DivPsi,
            OpPoly::shifted(-(n as i64) - 2).scale(&Gr::from_frac(-1, 4)),
        );
        want.add_term(Shape::ZdivdivPsi, OpPoly::constant(Gr::from_frac(1, 2)));
        assert_eq!(got, want);
    }

    #[test]
    fn scalar_contraction_identity() {
        let r = RuleTable::new(2);
        let e = NcExpr::chain(Source::Scalar, vec![NcOp::ZLower, NcOp::ZUpper]);
        assert_eq!(
            r.normalize(&e).unwrap(),
            NcNormal::from_shape(Shape::F, OpPoly::shifted(-2).scale(&Gr::from_frac(-1, 2)))
        );
    }

    #[test]
    fn overflow_is_reported() {
        let r = RuleTable::new(2);
        let e = NcExpr::chain(Source::Psi, vec![NcOp::ZLower]);
        assert!(matches!(r.normalize(&e), Err(CrError::BasisOverflow(_))));
        let e = NcExpr::chain(Source::Psi, vec![NcOp::ZUpper, NcOp::ZUpper, NcOp::ZUpper]);
        assert!(matches!(r.normalize(&e), Err(CrError::BasisOverflow(_))));
    }

    #[test]
    fn identity_and_hand_value() {
        let p = psi2();
        assert_eq!(nc_apply(&NcNormal::identity(Source::Psi), &p).unwrap(), p);
        let one = TensorPoly::sym2_from_fn(1, |_, _| HeisPoly::zb(1).pow(2));
        let s = nc_apply(&NcNormal::from_shape(Shape::DivdivPsi, OpPoly::one()), &one).unwrap();
        assert_eq!(s.get(&[]), &HeisPoly::constant(Gr::from_int(2)));
    }

    #[test]
    fn every_rule_holds_on_a_sample() {
        let n = 2;
        let r = RuleTable::new(n);
        let psi = psi2();
        let f = scalar_input(
            n,
            parse_expression("z1*zb2*t^2 + zb1^2*z2*t + t^3", n).unwrap(),
        );
        for (op, s, _) in r.rules() {
            let input = if s.source() == Source::Psi { &psi } else { &f };
            assert!(
                check_rule_on(&r, &op, s, input).unwrap(),
                "{op:?} on {}",
                s.tag()
            );
            assert!(
                check_commutation_on(&r, &op, s, input).unwrap(),
                "commutation {op:?} on {}",
                s.tag()
            );
        }
    }

    #[test]
    fn closed_form_for_n2() {
        let f = ObstructionFormula::new(2).unwrap();
        assert_eq!(f.prefactor, crate::exact::rat(-1, 4));
        let cs: Vec<_> = f.terms.iter().map(|t| t.1.clone()).collect();
        assert_eq!(
            cs,
            vec![
                crate::exact::rint(1),
                crate::exact::rint(3),
                crate::exact::rint(2)
            ]
        );
        assert_eq!(f.terms[0].2, vec![4, 2, 0]);
        let g = ObstructionFormula::new(3).unwrap();
        assert_eq!(g.prefactor, crate::exact::rat(1, 36));
        assert_eq!(g.terms[1].1, crate::exact::rat(16, 5));
        assert_eq!(g.terms[2].1, crate::exact::rat(12, 5));
        assert!(ObstructionFormula::new(1).is_err());
    }

    #[test]
    fn normal_form_wire_round_trip() {
        let o = obstruction_closed_form(3).unwrap();
        let s = serde_json::to_string(&o.to_wire(3)).unwrap();
        let w: NcNormalWire = serde_json::from_str(&s).unwrap();
        assert_eq!(NcNormal::from_wire(&w).unwrap(), o);
    }
}
