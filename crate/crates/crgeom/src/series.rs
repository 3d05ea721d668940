//! Truncated expansions `Σ_j ρ^j (a_j + b_j log ρ)` over a coefficient space.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::exact::{GaussianRational as Gr, Rational};
use crate::heis::HeisPoly;
use crate::opalg::{NcNormal, OpPoly};

/// Additive coefficient space with rational scaling.
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn is_zero_c(&self) -> bool;
    fn add_c(&self, o: &Self) -> Self;
    fn scale_r(&self, s: &Rational) -> Self;

    fn sub_c(&self, o: &Self) -> Self {
        self.add_c(&o.scale_r(&-Rational::one()))
    }
}

/// Coefficients closed under Gaussian-rational scaling.
pub trait ComplexCoeff: Coeff {
    fn scale_g(&self, s: &Gr) -> Self;
}

/// Coefficients on which `Δ_b` and `T` of the flat model act.
pub trait FlatAction: ComplexCoeff {
    fn act_db(&self, n: usize) -> Self;
    fn act_t(&self) -> Self;
}

impl Coeff for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn is_zero_c(&self) -> bool {
        self.is_zero()
    }
    fn add_c(&self, o: &Self) -> Self {
        self + o
    }
    fn scale_r(&self, s: &Rational) -> Self {
        self * s
    }
}

impl Coeff for Gr {
    fn zero_like(&self) -> Self {
        Gr::zero()
    }
    fn is_zero_c(&self) -> bool {
        self.is_zero()
    }
    fn add_c(&self, o: &Self) -> Self {
        self + o
    }
    fn scale_r(&self, s: &Rational) -> Self {
        self.scale(s)
    }
}

impl ComplexCoeff for Gr {
    fn scale_g(&self, s: &Gr) -> Self {
        self * s
    }
}

/// Spatially constant functions: `Δ_b` and `T` annihilate them.
impl FlatAction for Gr {
    fn act_db(&self, _n: usize) -> Self {
        Gr::zero()
    }
    fn act_t(&self) -> Self {
        Gr::zero()
    }
}

impl Coeff for HeisPoly {
    fn zero_like(&self) -> Self {
        HeisPoly::zero()
    }
    fn is_zero_c(&self) -> bool {
        self.is_zero()
    }
    fn add_c(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn scale_r(&self, s: &Rational) -> Self {
        self.scale_rational(s)
    }
}

impl ComplexCoeff for HeisPoly {
    fn scale_g(&self, s: &Gr) -> Self {
        self.scale(s)
    }
}

impl FlatAction for HeisPoly {
    fn act_db(&self, n: usize) -> Self {
        self.sublaplacian(n)
    }
    fn act_t(&self) -> Self {
        self.apply_t()
    }
}

impl Coeff for OpPoly {
    fn zero_like(&self) -> Self {
        OpPoly::zero()
    }
    fn is_zero_c(&self) -> bool {
        self.is_zero()
    }
    fn add_c(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn scale_r(&self, s: &Rational) -> Self {
        self.scale(&Gr::real(s.clone()))
    }
}

impl ComplexCoeff for OpPoly {
    fn scale_g(&self, s: &Gr) -> Self {
        self.scale(s)
    }
}

/// Operator-valued coefficients: the action is composition on the left.
impl FlatAction for OpPoly {
    fn act_db(&self, _n: usize) -> Self {
        OpPoly::db().mul(self)
    }
    fn act_t(&self) -> Self {
        OpPoly::t().mul(self)
    }
}

impl Coeff for NcNormal {
    fn zero_like(&self) -> Self {
        NcNormal::zero(self.channel, self.source)
    }
    fn is_zero_c(&self) -> bool {
        self.is_zero()
    }
    fn add_c(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn scale_r(&self, s: &Rational) -> Self {
        self.scale(&Gr::real(s.clone()))
    }
}

impl ComplexCoeff for NcNormal {
    fn scale_g(&self, s: &Gr) -> Self {
        self.scale(s)
    }
}

impl FlatAction for NcNormal {
    fn act_db(&self, _n: usize) -> Self {
        self.mul_left(&OpPoly::db())
    }
    fn act_t(&self) -> Self {
        self.mul_left(&OpPoly::t())
    }
}

/// `Σ_{j ≤ max_order} ρ^j (a_j + b_j log ρ)`.
#[derive(Clone, PartialEq)]
pub struct RhoSeries<C> {
    max_order: usize,
    a: Vec<C>,
    b: Vec<C>,
}

impl<C: Coeff> RhoSeries<C> {
    /// All-zero series; `zero` fixes the coefficient space.
    pub fn zeros(max_order: usize, zero: C) -> Self {
        Self {
            max_order,
            a: vec![zero.clone(); max_order + 1],
            b: vec![zero; max_order + 1],
        }
    }

    /// Series with only the `ρ^0` coefficient.
    pub fn constant(max_order: usize, c: C) -> Self {
        let mut s = Self::zeros(max_order, c.zero_like());
        s.a[0] = c;
        s
    }

    /// Polynomial in `ρ` from coefficients `a_0, a_1, ...`.
    pub fn from_coeffs(
        max_order: usize,
        zero: C,
        coeffs: impl IntoIterator<Item = (usize, C)>,
    ) -> Self {
        let mut s = Self::zeros(max_order, zero);
        for (j, c) in coeffs {
            if j <= max_order {
                s.a[j] = s.a[j].add_c(&c);
            }
        }
        s
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn zero_coeff(&self) -> C {
        self.a[0].zero_like()
    }

    pub fn a(&self, j: usize) -> &C {
        &self.a[j]
    }

    pub fn b(&self, j: usize) -> &C {
        &self.b[j]
    }

    pub fn set_a(&mut self, j: usize, c: C) {
        self.a[j] = c;
    }

    pub fn set_b(&mut self, j: usize, c: C) {
        self.b[j] = c;
    }

    pub fn has_log(&self) -> bool {
        self.b.iter().any(|c| !c.is_zero_c())
    }

    pub fn is_zero(&self) -> bool {
        self.is_zero_through(self.max_order)
    }

    /// Whether every coefficient of order `≤ m` vanishes.
    pub fn is_zero_through(&self, m: usize) -> bool {
        (0..=m.min(self.max_order)).all(|j| self.a[j].is_zero_c() && self.b[j].is_zero_c())
    }

    /// Lowest order carrying a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        (0..=self.max_order).find(|&j| !(self.a[j].is_zero_c() && self.b[j].is_zero_c()))
    }

    /// Same series cut or zero-padded to a new maximal order.
    pub fn with_max_order(&self, m: usize) -> Self {
        let z = self.zero_coeff();
        let mut s = Self::zeros(m, z);
        for j in 0..=m.min(self.max_order) {
            s.a[j] = self.a[j].clone();
            s.b[j] = self.b[j].clone();
        }
        s
    }

    fn zip(&self, o: &Self, f: impl Fn(&C, &C) -> C) -> Self {
        let m = self.max_order.min(o.max_order);
        Self {
            max_order: m,
            a: (0..=m).map(|j| f(&self.a[j], &o.a[j])).collect(),
            b: (0..=m).map(|j| f(&self.b[j], &o.b[j])).collect(),
        }
    }

    /// Sum, truncated to the smaller maximal order.
    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |x, y| x.add_c(y))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |x, y| x.sub_c(y))
    }

    pub fn scale_r(&self, s: &Rational) -> Self {
        self.map(|c| c.scale_r(s))
    }

    /// Coefficientwise map into another space.
    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> RhoSeries<D> {
        RhoSeries {
            max_order: self.max_order,
            a: self.a.iter().map(&f).collect(),
            b: self.b.iter().map(&f).collect(),
        }
    }

    /// Multiplication by `ρ^k`, truncated.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut s = Self::zeros(self.max_order, self.zero_coeff());
        for j in 0..=self.max_order {
            if j + k <= self.max_order {
                s.a[j + k] = self.a[j].clone();
                s.b[j + k] = self.b[j].clone();
            }
        }
        s
    }

    /// Division by `ρ^k`; `None` when a coefficient below `ρ^k` is nonzero.
    pub fn shift_down(&self, k: usize) -> Option<Self> {
        if k > 0 && !self.is_zero_through(k - 1) {
            return None;
        }
        let mut s = Self::zeros(self.max_order - k.min(self.max_order), self.zero_coeff());
        for j in k..=self.max_order {
            s.a[j - k] = self.a[j].clone();
            s.b[j - k] = self.b[j].clone();
        }
        Some(s)
    }

    /// `ρ∂_ρ`: `ρ^j log ρ · b ↦ ρ^j (j b log ρ + b)`.
    pub fn rho_d(&self) -> Self {
        let mut s = Self::zeros(self.max_order, self.zero_coeff());
        for j in 0..=self.max_order {
            let jr = Rational::from_integer(j.into());
            s.a[j] = self.a[j].scale_r(&jr).add_c(&self.b[j]);
            s.b[j] = self.b[j].scale_r(&jr);
        }
        s
    }

    /// `∂_ρ` on a series without log terms.
    pub fn d_rho(&self) -> Self {
        assert!(!self.has_log(), "∂_ρ of a log series");
        let mut s = Self::zeros(self.max_order, self.zero_coeff());
        for j in 1..=self.max_order {
            s.a[j - 1] = self.a[j].scale_r(&Rational::from_integer(j.into()));
        }
        s
    }

    /// Product with a rational power series (no log terms on the right).
    pub fn mul_rational(&self, r: &RhoSeries<Rational>) -> Self {
        assert!(!r.has_log(), "profile series carry no log terms");
        let m = self.max_order.min(r.max_order);
        let mut s = Self::zeros(m, self.zero_coeff());
        for i in 0..=m {
            if r.a[i].is_zero() {
                continue;
            }
            for j in 0..=m - i {
                s.a[i + j] = s.a[i + j].add_c(&self.a[j].scale_r(&r.a[i]));
                s.b[i + j] = s.b[i + j].add_c(&self.b[j].scale_r(&r.a[i]));
            }
        }
        s
    }

    /// Cauchy product through a coefficient multiplication; at most one log factor overall.
    pub fn mul_with(&self, o: &Self, mul: impl Fn(&C, &C) -> C) -> Self {
        assert!(!(self.has_log() && o.has_log()), "product would carry log²");
        let m = self.max_order.min(o.max_order);
        let mut s = Self::zeros(m, self.zero_coeff());
        for i in 0..=m {
            for j in 0..=m - i {
                let aa = mul(&self.a[i], &o.a[j]);
                let ab = mul(&self.a[i], &o.b[j]);
                let ba = mul(&self.b[i], &o.a[j]);
                s.a[i + j] = s.a[i + j].add_c(&aa);
                s.b[i + j] = s.b[i + j].add_c(&ab).add_c(&ba);
            }
        }
        s
    }

    /// Nonzero entries as `(j, a_j, b_j)`.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, &C, &C)> {
        (0..=self.max_order)
            .filter(|&j| !(self.a[j].is_zero_c() && self.b[j].is_zero_c()))
            .map(|j| (j, &self.a[j], &self.b[j]))
    }
}

impl<C: ComplexCoeff> RhoSeries<C> {
    pub fn scale_g(&self, s: &Gr) -> Self {
        self.map(|c| c.scale_g(s))
    }
}

impl<C: Coeff> fmt::Debug for RhoSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .nonzero()
            .map(|(j, a, b)| {
                if b.is_zero_c() {
                    format!("ρ^{j}[{a:?}]")
                } else {
                    format!("ρ^{j}[{a:?} + ({b:?})log ρ]")
                }
            })
            .collect();
        write!(
            f,
            "{} (+O(ρ^{}))",
            if parts.is_empty() {
                "0".into()
            } else {
                parts.join(" + ")
            },
            self.max_order + 1
        )
    }
}

impl RhoSeries<Rational> {
    pub fn one(max_order: usize) -> Self {
        Self::constant(max_order, Rational::one())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.mul_with(o, |x, y| x * y)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(self.max_order), |acc, _| acc.mul(self))
    }

    /// Reciprocal of a series with constant term 1.
    pub fn inv_unit(&self) -> Self {
        assert!(
            self.a[0].is_one() && !self.has_log(),
            "reciprocal needs unit constant term"
        );
        let m = self.max_order;
        let mut r = Self::zeros(m, Rational::zero());
        r.a[0] = Rational::one();
        for j in 1..=m {
            let mut s = Rational::zero();
            for i in 1..=j {
                s += &self.a[i] * &r.a[j - i];
            }
            r.a[j] = -s;
        }
        r
    }

    /// Square root of a series with constant term 1, by the binomial recursion.
    pub fn sqrt_unit(&self) -> Self {
        assert!(
            self.a[0].is_one() && !self.has_log(),
            "square root needs unit constant term"
        );
        let m = self.max_order;
        let mut r = Self::zeros(m, Rational::zero());
        r.a[0] = Rational::one();
        let two = Rational::from_integer(2.into());
        for j in 1..=m {
            let mut s = self.a[j].clone();
            for i in 1..j {
                s -= &r.a[i] * &r.a[j - i];
            }
            r.a[j] = s / &two;
        }
        r
    }

    /// `ρ∂_ρ log F` for `F(0) = 1`.
    pub fn log_derivative(&self) -> Self {
        self.rho_d().mul(&self.inv_unit())
    }
}

/// Wire form of a single term.
#[derive(Serialize)]
pub struct SeriesTermWire<W> {
    pub j: usize,
    pub a: W,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<W>,
}

/// Wire form `{"max_order": N, "terms": [{"j", "a", "b"?}]}`.
#[derive(Serialize)]
pub struct SeriesWire<W> {
    pub max_order: usize,
    pub terms: Vec<SeriesTermWire<W>>,
}

impl<C: Coeff> RhoSeries<C> {
    pub fn to_wire<W>(&self, f: impl Fn(&C) -> W) -> SeriesWire<W> {
        SeriesWire {
            max_order: self.max_order,
            terms: self
                .nonzero()
                .map(|(j, a, b)| SeriesTermWire {
                    j,
                    a: f(a),
                    b: (!b.is_zero_c()).then(|| f(b)),
                })
                .collect(),
        }
    }
}
