//! Polynomials on the Heisenberg group and the standard frame actions.
//!
//! Coordinates are `(z^1..z^n, t)` with the contact form
//! `θ = ½(dt + iΣ(z dz̄ − z̄ dz))`, so `T = 2∂_t`,
//! `Z_α = ∂_{z^α} + i z̄^α ∂_t` and `Z_ᾱ = ∂_{z̄^α} − i z^α ∂_t`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exact::{GaussianRational as Gr, Rational};

/// Exponent vector in the layout `[t, z1, zb1, z2, zb2, ...]`, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Mono(Vec<u32>);

impl Mono {
    pub fn one() -> Self {
        Mono(Vec::new())
    }

    fn slot(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    fn with_slot(&self, i: usize, v: u32) -> Mono {
        let mut e = self.0.clone();
        if e.len() <= i {
            e.resize(i + 1, 0);
        }
        e[i] = v;
        while e.last() == Some(&0) {
            e.pop();
        }
        Mono(e)
    }

    fn bump(&self, i: usize, d: i64) -> Mono {
        self.with_slot(i, (self.slot(i) as i64 + d) as u32)
    }

    pub fn t(&self) -> u32 {
        self.slot(0)
    }

    /// Exponent of `z^α` (1-based).
    pub fn z(&self, a: usize) -> u32 {
        self.slot(2 * a - 1)
    }

    /// Exponent of `z̄^α` (1-based).
    pub fn zb(&self, a: usize) -> u32 {
        self.slot(2 * a)
    }

    /// Largest holomorphic index with a nonzero exponent.
    pub fn max_index(&self) -> usize {
        self.0.len() / 2
    }

    pub fn from_exponents(z: &[u32], zb: &[u32], t: u32) -> Mono {
        let mut m = Mono::one().with_slot(0, t);
        for (k, &e) in z.iter().enumerate() {
            m = m.with_slot(2 * k + 1, e);
        }
        for (k, &e) in zb.iter().enumerate() {
            m = m.with_slot(2 * k + 2, e);
        }
        m
    }

    /// Heisenberg weight: holomorphic and antiholomorphic variables count 1, `t` counts 2.
    pub fn weight(&self) -> u32 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &e)| if i == 0 { 2 * e } else { e })
            .sum()
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let len = self.0.len().max(o.0.len());
        Mono((0..len).map(|i| self.slot(i) + o.slot(i)).collect())
    }

    pub fn conj(&self) -> Mono {
        let mut e = self.0.clone();
        let len = e.len() + e.len().is_multiple_of(2) as usize;
        e.resize(len, 0);
        for k in (1..len).step_by(2) {
            e.swap(k, k + 1);
        }
        while e.last() == Some(&0) {
            e.pop();
        }
        Mono(e)
    }

    fn key_cmp(&self, o: &Mono) -> Ordering {
        let len = self.0.len().max(o.0.len()).max(1);
        let zs = |m: &Mono| -> Vec<u32> {
            (1..len)
                .step_by(2)
                .map(|i| m.slot(i))
                .chain((2..=len).step_by(2).map(|i| m.slot(i)))
                .collect()
        };
        self.weight()
            .cmp(&o.weight())
            .then_with(|| zs(self).cmp(&zs(o)))
            .then_with(|| self.t().cmp(&o.t()))
    }
}

impl Ord for Mono {
    fn cmp(&self, o: &Self) -> Ordering {
        self.key_cmp(o)
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Mono {
    /// `z1^2*zb1*t` style; empty string for the unit monomial.
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        let mut push = |name: String, e: u32| match e {
            0 => {}
            1 => parts.push(name),
            _ => parts.push(format!("{name}^{e}")),
        };
        for a in 1..=self.max_index() {
            push(format!("z{a}"), self.z(a));
        }
        for a in 1..=self.max_index() {
            push(format!("zb{a}"), self.zb(a));
        }
        push("t".into(), self.t());
        parts.join("*")
    }
}

/// Frame vector fields of the Heisenberg group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    T,
    Z(usize),
    Zb(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("frame index {index} outside 1..{n}")]
pub struct IndexError {
    pub index: usize,
    pub n: usize,
}

/// Finite sum of monomials with nonzero Gaussian-rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct HeisPoly {
    terms: BTreeMap<Mono, Gr>,
}

impl HeisPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Gr) -> Self {
        Self::monomial(Mono::one(), c)
    }

    pub fn one() -> Self {
        Self::constant(Gr::one())
    }

    pub fn monomial(m: Mono, c: Gr) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn z(a: usize) -> Self {
        Self::monomial(Mono::one().with_slot(2 * a - 1, 1), Gr::one())
    }

    pub fn zb(a: usize) -> Self {
        Self::monomial(Mono::one().with_slot(2 * a, 1), Gr::one())
    }

    pub fn t() -> Self {
        Self::monomial(Mono::one().with_slot(0, 1), Gr::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Gr)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> Gr {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Constant coefficient.
    pub fn constant_term(&self) -> Gr {
        self.coeff(&Mono::one())
    }

    pub fn add_term(&mut self, m: Mono, c: Gr) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, o: &HeisPoly) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, o: &HeisPoly, s: &Gr) {
        if s.is_zero() {
            return;
        }
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c * s);
        }
    }

    pub fn add(&self, o: &HeisPoly) -> HeisPoly {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }

    pub fn sub(&self, o: &HeisPoly) -> HeisPoly {
        let mut r = self.clone();
        r.add_scaled(o, &Gr::from_int(-1));
        r
    }

    pub fn neg(&self) -> HeisPoly {
        self.scale(&Gr::from_int(-1))
    }

    pub fn scale(&self, s: &Gr) -> HeisPoly {
        if s.is_zero() {
            return HeisPoly::zero();
        }
        HeisPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn scale_rational(&self, s: &Rational) -> HeisPoly {
        self.scale(&Gr::real(s.clone()))
    }

    pub fn mul(&self, o: &HeisPoly) -> HeisPoly {
        let mut r = HeisPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> HeisPoly {
        (0..e).fold(HeisPoly::one(), |acc, _| acc.mul(self))
    }

    /// Complex conjugate: swap `z ↔ z̄` and conjugate coefficients.
    pub fn conj(&self) -> HeisPoly {
        HeisPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.conj(), c.conj()))
                .collect(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// Largest holomorphic index appearing in any monomial.
    pub fn max_index(&self) -> usize {
        self.terms.keys().map(Mono::max_index).max().unwrap_or(0)
    }

    pub fn max_weight(&self) -> u32 {
        self.terms.keys().map(Mono::weight).max().unwrap_or(0)
    }

    fn map_terms(&self, f: impl Fn(&Mono, &Gr, &mut HeisPoly)) -> HeisPoly {
        let mut r = HeisPoly::zero();
        for (m, c) in &self.terms {
            f(m, c, &mut r);
        }
        r
    }

    fn partial(&self, slot: usize) -> HeisPoly {
        self.map_terms(|m, c, r| {
            let e = m.slot(slot);
            if e > 0 {
                r.add_term(m.bump(slot, -1), c * &Gr::from_int(e as i64));
            }
        })
    }

    fn times_slot(&self, slot: usize) -> HeisPoly {
        self.map_terms(|m, c, r| r.add_term(m.bump(slot, 1), c.clone()))
    }

    pub fn d_t(&self) -> HeisPoly {
        self.partial(0)
    }

    pub fn d_z(&self, a: usize) -> HeisPoly {
        self.partial(2 * a - 1)
    }

    pub fn d_zb(&self, a: usize) -> HeisPoly {
        self.partial(2 * a)
    }

    pub fn times_z(&self, a: usize) -> HeisPoly {
        self.times_slot(2 * a - 1)
    }

    pub fn times_zb(&self, a: usize) -> HeisPoly {
        self.times_slot(2 * a)
    }

    pub fn times_t(&self) -> HeisPoly {
        self.times_slot(0)
    }

    /// `T = 2∂_t`.
    pub fn apply_t(&self) -> HeisPoly {
        self.d_t().scale(&Gr::from_int(2))
    }

    /// `Z_α = ∂_{z^α} + i z̄^α ∂_t`.
    pub fn apply_z(&self, a: usize) -> HeisPoly {
        let mut r = self.d_z(a);
        r.add_scaled(&self.d_t().times_zb(a), &Gr::i());
        r
    }

    /// `Z_ᾱ = ∂_{z̄^α} − i z^α ∂_t`.
    pub fn apply_zb(&self, a: usize) -> HeisPoly {
        let mut r = self.d_zb(a);
        r.add_scaled(&self.d_t().times_z(a), &(-Gr::i()));
        r
    }

    pub fn apply_field(&self, field: Field, n: usize) -> Result<HeisPoly, IndexError> {
        match field {
            Field::T => Ok(self.apply_t()),
            Field::Z(a) | Field::Zb(a) if a == 0 || a > n => Err(IndexError { index: a, n }),
            Field::Z(a) => Ok(self.apply_z(a)),
            Field::Zb(a) => Ok(self.apply_zb(a)),
        }
    }

    /// `Δ_b = −Σ_α (Z_αZ_ᾱ + Z_ᾱZ_α)`, evaluated monomial by monomial as
    /// `−Σ_α [2∂_z∂_z̄ + 2i(z̄∂_z̄ − z∂_z)∂_t + 2|z|²∂_t²]`.
    pub fn sublaplacian(&self, n: usize) -> HeisPoly {
        self.map_terms(|m, c, r| {
            let e = m.t() as i64;
            for a in 1..=n {
                let (za, zba) = (m.z(a) as i64, m.zb(a) as i64);
                let (sz, szb) = (2 * a - 1, 2 * a);
                if za > 0 && zba > 0 {
                    r.add_term(
                        m.bump(sz, -1).bump(szb, -1),
                        c * &Gr::from_int(-2 * za * zba),
                    );
                }
                if e > 0 && zba != za {
                    let k = Gr::new(
                        Rational::from_integer(0.into()),
                        Rational::from_integer((-2 * (zba - za) * e).into()),
                    );
                    r.add_term(m.bump(0, -1), c * &k);
                }
                if e > 1 {
                    r.add_term(
                        m.bump(0, -2).bump(sz, 1).bump(szb, 1),
                        c * &Gr::from_int(-2 * e * (e - 1)),
                    );
                }
            }
        })
    }

    /// `Z^γ` with the flat Levi form: `Z^γ = Z_γ̄`.
    pub fn apply_z_upper(&self, g: usize) -> HeisPoly {
        self.apply_zb(g)
    }
}

impl fmt::Debug for HeisPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Display for HeisPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Coefficient as a product factor; empty when it is 1.
fn coeff_factor(c: &Gr) -> String {
    use crate::exact::render_rational;
    use num_traits::{One, Zero};
    let atom = |r: &Rational| {
        if r.is_integer() {
            render_rational(r)
        } else {
            format!("({})", render_rational(r))
        }
    };
    if c.is_real() {
        if c.re.is_one() {
            String::new()
        } else {
            atom(&c.re)
        }
    } else if c.re.is_zero() {
        if c.im.is_one() {
            "i".into()
        } else {
            format!("{}*i", atom(&c.im))
        }
    } else {
        format!(
            "(({})+({})*i)",
            render_rational(&c.re),
            render_rational(&c.im)
        )
    }
}

impl HeisPoly {
    /// Text in the input expression grammar, highest weight first.
    pub fn render(&self) -> String {
        use num_traits::Zero;
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (m, c) in self.terms.iter().rev() {
            let negative = c.re < Rational::zero() || (c.re.is_zero() && c.im < Rational::zero());
            let mag = if negative { -c.clone() } else { c.clone() };
            let mono = m.render();
            let cf = coeff_factor(&mag);
            let body = match (mono.is_empty(), cf.is_empty()) {
                (true, true) => "1".to_string(),
                (true, false) => cf,
                (false, true) => mono,
                (false, false) => format!("{cf}*{mono}"),
            };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct TermWire {
    z: Vec<u32>,
    zb: Vec<u32>,
    t: u32,
    coeff: Gr,
}

/// Wire form: `{"n": n, "terms": [{"z": [..], "zb": [..], "t": e, "coeff": {..}}]}`.
#[derive(Serialize, Deserialize)]
pub struct HeisPolyWire {
    n: usize,
    terms: Vec<TermWire>,
}

impl HeisPoly {
    pub fn to_wire(&self, n: usize) -> HeisPolyWire {
        let terms = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| TermWire {
                z: (1..=n).map(|a| m.z(a)).collect(),
                zb: (1..=n).map(|a| m.zb(a)).collect(),
                t: m.t(),
                coeff: c.clone(),
            })
            .collect();
        HeisPolyWire { n, terms }
    }

    pub fn from_wire(w: &HeisPolyWire) -> HeisPoly {
        let mut p = HeisPoly::zero();
        for t in &w.terms {
            p.add_term(Mono::from_exponents(&t.z, &t.zb, t.t), t.coeff.clone());
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zzb() -> HeisPoly {
        HeisPoly::z(1).mul(&HeisPoly::zb(1))
    }

    fn sublaplacian_by_composition(p: &HeisPoly, n: usize) -> HeisPoly {
        let mut r = HeisPoly::zero();
        for a in 1..=n {
            r.add_assign(&p.apply_zb(a).apply_z(a));
            r.add_assign(&p.apply_z(a).apply_zb(a));
        }
        r.neg()
    }

    #[test]
    fn field_actions_on_small_inputs() {
        assert_eq!(zzb().apply_z(1), HeisPoly::zb(1));
        assert_eq!(HeisPoly::t().apply_t(), HeisPoly::constant(Gr::from_int(2)));
        assert!(HeisPoly::z(1).apply_zb(1).is_zero());
        assert!(HeisPoly::one().apply_field(Field::Z(3), 2).is_err());
    }

    #[test]
    fn sublaplacian_values() {
        assert_eq!(zzb().sublaplacian(1), HeisPoly::constant(Gr::from_int(-2)));
        assert!(HeisPoly::one().sublaplacian(3).is_zero());
        assert!(HeisPoly::t().sublaplacian(2).is_zero());
    }

    #[test]
    fn fast_sublaplacian_matches_definition() {
        let p = zzb().mul(&HeisPoly::t().pow(3)).add(
            &HeisPoly::z(2)
                .pow(2)
                .mul(&HeisPoly::zb(1))
                .mul(&HeisPoly::t()),
        );
        let q = p.add(&HeisPoly::zb(2).mul(&HeisPoly::t().pow(2)).scale(&Gr::i()));
        assert_eq!(q.sublaplacian(2), sublaplacian_by_composition(&q, 2));
    }

    #[test]
    fn contraction_identity_on_z_t() {
        // Σ Z_ᾱ Z_α p = −½(Δ_b − i n T) p
        let n = 2;
        let p = HeisPoly::z(1).mul(&HeisPoly::t());
        let mut lhs = HeisPoly::zero();
        for a in 1..=n {
            lhs.add_assign(&p.apply_z(a).apply_zb(a));
        }
        let mut rhs = p.sublaplacian(n);
        rhs.add_scaled(
            &p.apply_t(),
            &Gr::new(crate::exact::rint(0), crate::exact::rint(-(n as i64))),
        );
        assert_eq!(lhs, rhs.scale(&Gr::from_frac(-1, 2)));
    }

    #[test]
    fn conj_swaps_variables() {
        let p = HeisPoly::z(2).mul(&HeisPoly::t()).scale(&Gr::i());
        let c = p.conj();
        assert_eq!(c, HeisPoly::zb(2).mul(&HeisPoly::t()).scale(&(-Gr::i())));
        assert_eq!(c.conj(), p);
    }

    #[test]
    fn ordering_is_weighted() {
        // t has weight 2 and sorts after the weight-1 monomials.
        let p = HeisPoly::t().add(&HeisPoly::z(1)).add(&HeisPoly::one());
        let ms: Vec<_> = p.terms().map(|(m, _)| m.weight()).collect();
        assert_eq!(ms, vec![0, 1, 2]);
    }

    #[test]
    fn render_and_wire() {
        let p = HeisPoly::t()
            .pow(2)
            .scale(&Gr::from_frac(1, 2))
            .sub(&HeisPoly::z(2).scale(&Gr::i()));
        assert_eq!(p.render(), "(1/2)*t^2 - i*z2");
        let w = serde_json::to_string(&p.to_wire(2)).unwrap();
        let back: HeisPolyWire = serde_json::from_str(&w).unwrap();
        assert_eq!(HeisPoly::from_wire(&back), p);
    }
}
