//! Commutative polynomials in the symbols `Δ_b` and `T`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{render_rational, GaussianRational as Gr, Rational};
use crate::heis::HeisPoly;

/// Exponent pair `(Δ_b, T)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OpMono {
    pub db: u32,
    pub t: u32,
}

impl Ord for OpMono {
    /// Graded, then by `Δ_b` exponent.
    fn cmp(&self, o: &Self) -> Ordering {
        (self.db + self.t)
            .cmp(&(o.db + o.t))
            .then(self.db.cmp(&o.db))
    }
}

impl PartialOrd for OpMono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Element of `ℚ(i)[Δ_b, T]`. On the Heisenberg group `Δ_b` and `T` commute.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct OpPoly {
    terms: BTreeMap<OpMono, Gr>,
}

impl OpPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Gr::one())
    }

    pub fn constant(c: Gr) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn monomial(db: u32, t: u32, c: Gr) -> Self {
        let mut p = Self::zero();
        p.add_term(OpMono { db, t }, c);
        p
    }

    /// `Δ_b`.
    pub fn db() -> Self {
        Self::monomial(1, 0, Gr::one())
    }

    /// `T`.
    pub fn t() -> Self {
        Self::monomial(0, 1, Gr::one())
    }

    /// `Δ_b + c·T`.
    pub fn linear(c: Gr) -> Self {
        Self::db().add(&Self::t().scale(&c))
    }

    /// `Δ_b + i·m·T`.
    pub fn shifted(m: i64) -> Self {
        Self::linear(Gr::new(Rational::zero(), Rational::from_integer(m.into())))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&OpMono, &Gr)> {
        self.terms.iter()
    }

    pub fn coeff(&self, db: u32, t: u32) -> Gr {
        self.terms
            .get(&OpMono { db, t })
            .cloned()
            .unwrap_or_default()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.db + m.t).max()
    }

    pub fn add_term(&mut self, m: OpMono, c: Gr) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_default();
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add_assign(&mut self, o: &OpPoly) {
        for (m, c) in &o.terms {
            self.add_term(*m, c.clone());
        }
    }

    pub fn add(&self, o: &OpPoly) -> OpPoly {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }

    pub fn sub(&self, o: &OpPoly) -> OpPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> OpPoly {
        self.scale(&Gr::from_int(-1))
    }

    pub fn scale(&self, s: &Gr) -> OpPoly {
        if s.is_zero() {
            return OpPoly::zero();
        }
        OpPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, c * s)).collect(),
        }
    }

    pub fn mul(&self, o: &OpPoly) -> OpPoly {
        let mut r = OpPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(
                    OpMono {
                        db: m1.db + m2.db,
                        t: m1.t + m2.t,
                    },
                    c1 * c2,
                );
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> OpPoly {
        (0..e).fold(OpPoly::one(), |acc, _| acc.mul(self))
    }

    /// Substitutes `T ↦ c·T`.
    pub fn scale_t(&self, c: &Gr) -> OpPoly {
        OpPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (*m, v * &c.pow(m.t)))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    /// Substitutes `Δ_b ↦ Δ_b + c·T`.
    pub fn shift_db(&self, c: &Gr) -> OpPoly {
        let lin = OpPoly::linear(c.clone());
        let mut r = OpPoly::zero();
        for (m, v) in &self.terms {
            r.add_assign(&lin.pow(m.db).mul(&OpPoly::monomial(0, m.t, v.clone())));
        }
        r
    }

    /// Formal adjoint on the Heisenberg group: `Δ_b* = Δ_b`, `T* = −T`, coefficients conjugated.
    pub fn adjoint(&self) -> OpPoly {
        OpPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, if m.t % 2 == 0 { c.conj() } else { -c.conj() }))
                .collect(),
        }
    }

    /// Action on a polynomial of CR dimension `n`.
    pub fn apply(&self, p: &HeisPoly, n: usize) -> HeisPoly {
        let max_db = self.terms.keys().map(|m| m.db).max().unwrap_or(0);
        let mut db_pows = vec![p.clone()];
        for _ in 0..max_db {
            let next = db_pows.last().unwrap().sublaplacian(n);
            db_pows.push(next);
        }
        let mut r = HeisPoly::zero();
        for (m, c) in &self.terms {
            let mut q = db_pows[m.db as usize].clone();
            for _ in 0..m.t {
                q = q.apply_t();
            }
            r.add_scaled(&q, c);
        }
        r
    }
}

impl fmt::Debug for OpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_text())
    }
}

impl fmt::Display for OpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_text())
    }
}

#[derive(Clone, Copy)]
enum Style {
    Text,
    Latex,
}

fn rational_str(r: &Rational, style: Style) -> String {
    match style {
        Style::Text => render_rational(r),
        Style::Latex if r.is_integer() => r.numer().to_string(),
        Style::Latex => format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom()),
    }
}

/// Splits `c` into a sign and a coefficient string (empty when the magnitude is 1).
fn signed_coeff(c: &Gr, style: Style) -> (bool, String) {
    let negative = c.re.is_negative() || (c.re.is_zero() && c.im.is_negative());
    let m = if negative { -c.clone() } else { c.clone() };
    let s = if m.im.is_zero() {
        if m.re.is_one() {
            String::new()
        } else {
            rational_str(&m.re, style)
        }
    } else if m.re.is_zero() {
        if m.im.is_one() {
            "i".into()
        } else {
            format!("{}i", rational_str(&m.im, style))
        }
    } else {
        let sep = if m.im.is_negative() { "-" } else { "+" };
        format!(
            "({}{}{}i)",
            rational_str(&m.re, style),
            sep,
            rational_str(&m.im.abs(), style)
        )
    };
    (negative, s)
}

fn mono_str(m: &OpMono, style: Style) -> String {
    let (d, t) = match style {
        Style::Text => ("Δ_b", "T"),
        Style::Latex => ("\\Delta_b", "T"),
    };
    let pw = |s: &str, e: u32| match e {
        0 => String::new(),
        1 => s.to_string(),
        _ => match style {
            Style::Latex if e > 9 => format!("{s}^{{{e}}}"),
            _ => format!("{s}^{e}"),
        },
    };
    let parts: Vec<String> = [pw(d, m.db), pw(t, m.t)]
        .into_iter()
        .filter(|s| !s.is_empty())
        .collect();
    match style {
        Style::Text => parts.join("·"),
        Style::Latex => parts.join(""),
    }
}

fn render(p: &OpPoly, style: Style) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let (plus, minus) = match style {
        Style::Text => (" + ", " - "),
        Style::Latex => ("+", "-"),
    };
    let mut out = String::new();
    for (m, c) in p.terms.iter().rev() {
        let (neg, cs) = signed_coeff(c, style);
        let ms = mono_str(m, style);
        let body = match (cs.is_empty(), ms.is_empty()) {
            (true, true) => "1".to_string(),
            (false, true) => cs,
            (true, false) => ms,
            (false, false) => match style {
                Style::Text => format!("{cs}·{ms}"),
                Style::Latex => format!("{cs}{ms}"),
            },
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { minus } else { plus });
        }
        out.push_str(&body);
    }
    out
}

impl OpPoly {
    /// Expanded form, e.g. `Δ_b^2 + T^2`.
    pub fn render_text(&self) -> String {
        render(self, Style::Text)
    }

    /// Expanded LaTeX, e.g. `\Delta_b^2+T^2`.
    pub fn render_latex(&self) -> String {
        render(self, Style::Latex)
    }

    /// Writes `self = c·∏(Δ_b + i·s_j·T)` with integer shifts, if possible.
    /// Shifts are returned in decreasing order.
    pub fn factor_shifts(&self) -> Option<(Gr, Vec<i64>)> {
        let d = self.degree()?;
        if self.terms.keys().any(|m| m.db + m.t != d) {
            return None;
        }
        let lead = self.coeff(d, 0);
        if lead.is_zero() {
            return None;
        }
        // Dehomogenize at T = 1 and peel roots x = −i·s.
        let mut coeffs: Vec<Gr> = (0..=d).map(|k| self.coeff(k, d - k)).collect();
        let bound = 4 * d as i64 + 8;
        let mut shifts = Vec::new();
        'outer: while coeffs.len() > 1 {
            for s in (-bound..=bound).rev() {
                let root = Gr::new(Rational::zero(), Rational::from_integer((-s).into()));
                if let Some(q) = synthetic_divide(&coeffs, &root) {
                    coeffs = q;
                    shifts.push(s);
                    continue 'outer;
                }
            }
            return None;
        }
        shifts.sort_unstable_by(|a, b| b.cmp(a));
        Some((lead, shifts))
    }

    /// Factored LaTeX when the polynomial splits into integer shifts, expanded otherwise.
    pub fn render_latex_factored(&self) -> String {
        match self.factor_shifts() {
            Some((c, shifts)) if shifts.len() > 1 => {
                let (neg, cs) = signed_coeff(&c, Style::Latex);
                let mut out = String::new();
                if neg {
                    out.push('-');
                }
                out.push_str(&cs);
                for s in shifts {
                    out.push_str(&format!("({})", OpPoly::shifted(s).render_latex()));
                }
                out
            }
            _ => self.render_latex(),
        }
    }
}

/// Divides `Σ c_k x^k` by `(x − root)` when the remainder vanishes.
fn synthetic_divide(coeffs: &[Gr], root: &Gr) -> Option<Vec<Gr>> {
    let d = coeffs.len() - 1;
    let mut q = vec![Gr::zero(); d];
    let mut carry = Gr::zero();
    for k in (1..=d).rev() {
        carry = &coeffs[k] + &(&carry * root);
        q[k - 1] = carry.clone();
    }
    let rem = &coeffs[0] + &(&carry * root);
    rem.is_zero().then_some(q)
}

#[derive(Serialize, Deserialize)]
pub struct OpTermWire {
    pub db: u32,
    pub t: u32,
    pub coeff: Gr,
}

/// Wire form `{"n": n, "terms": [{"db": e1, "t": e2, "coeff": {..}}]}`.
#[derive(Serialize, Deserialize)]
pub struct OpPolyWire {
    pub n: usize,
    pub terms: Vec<OpTermWire>,
}

impl OpPoly {
    pub fn wire_terms(&self) -> Vec<OpTermWire> {
        self.terms
            .iter()
            .rev()
            .map(|(m, c)| OpTermWire {
                db: m.db,
                t: m.t,
                coeff: c.clone(),
            })
            .collect()
    }

    pub fn from_wire_terms(terms: &[OpTermWire]) -> OpPoly {
        let mut p = OpPoly::zero();
        for t in terms {
            p.add_term(OpMono { db: t.db, t: t.t }, t.coeff.clone());
        }
        p
    }

    pub fn to_wire(&self, n: usize) -> OpPolyWire {
        OpPolyWire {
            n,
            terms: self.wire_terms(),
        }
    }

    pub fn from_wire(w: &OpPolyWire) -> OpPoly {
        Self::from_wire_terms(&w.terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gjms2() -> OpPoly {
        OpPoly::shifted(1).mul(&OpPoly::shifted(-1))
    }

    #[test]
    fn product_expands() {
        let p = gjms2();
        assert_eq!(p, OpPoly::db().pow(2).add(&OpPoly::t().pow(2)));
        assert_eq!(p.render_text(), "Δ_b^2 + T^2");
        assert_eq!(p.render_latex(), "\\Delta_b^2+T^2");
    }

    #[test]
    fn factoring() {
        let p = OpPoly::shifted(3)
            .mul(&OpPoly::shifted(1))
            .mul(&OpPoly::shifted(-1))
            .mul(&OpPoly::shifted(-3));
        assert_eq!(p.factor_shifts(), Some((Gr::one(), vec![3, 1, -1, -3])));
        assert_eq!(
            p.render_latex_factored(),
            "(\\Delta_b+3iT)(\\Delta_b+iT)(\\Delta_b-iT)(\\Delta_b-3iT)"
        );
        assert_eq!(OpPoly::db().add(&OpPoly::one()).factor_shifts(), None);
    }

    #[test]
    fn adjoint_is_involution() {
        let p = OpPoly::shifted(2)
            .mul(&OpPoly::t())
            .scale(&Gr::new(crate::exact::rat(1, 3), crate::exact::rat(2, 1)));
        assert_eq!(p.adjoint().adjoint(), p);
        assert_eq!(OpPoly::shifted(5).adjoint(), OpPoly::shifted(5));
        assert_eq!(OpPoly::t().adjoint(), OpPoly::t().neg());
    }

    #[test]
    fn shift_substitution() {
        // Δ_b^2 with Δ_b ↦ Δ_b + 2iT
        let p = OpPoly::db()
            .pow(2)
            .shift_db(&Gr::new(crate::exact::rint(0), crate::exact::rint(2)));
        assert_eq!(p, OpPoly::shifted(2).pow(2));
    }

    #[test]
    fn apply_matches_direct_composition() {
        let n = 2;
        let f = crate::heis::parse_expression("z1*zb1*t^2 + zb2*z2^2*t", n).unwrap();
        let direct = f
            .sublaplacian(n)
            .sublaplacian(n)
            .add(&f.apply_t().apply_t());
        assert_eq!(gjms2().apply(&f, n), direct);
    }

    #[test]
    fn wire_round_trip() {
        let p = gjms2().scale(&Gr::from_frac(-1, 4));
        let s = serde_json::to_string(&p.to_wire(2)).unwrap();
        let w: OpPolyWire = serde_json::from_str(&s).unwrap();
        assert_eq!(OpPoly::from_wire(&w), p);
    }
}
