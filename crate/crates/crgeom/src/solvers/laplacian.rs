//! Scalar Laplacian of a spatially-constant profile and the Frobenius stepper.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{CrError, Result};
use crate::exact::{parse_rational, rat, render_rational, Rational};
use crate::series::{FlatAction, RhoSeries};

/// `Δ = −¼D² + ((n+1)/2)D + ρ²Δ_b/c − ρ⁴T²/b − ⅛(D log(b c^{2n}))D` with `D = ρ∂_ρ`.
///
/// `b` weights the `θ²` part and `c` the Levi-form part of the metric; `b = c = 1` is the model.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarLaplacian {
    pub n: usize,
    pub b: RhoSeries<Rational>,
    pub c: RhoSeries<Rational>,
    inv_b: RhoSeries<Rational>,
    inv_c: RhoSeries<Rational>,
    log_det: RhoSeries<Rational>,
}

impl ScalarLaplacian {
    pub fn new(n: usize, b: RhoSeries<Rational>, c: RhoSeries<Rational>) -> Result<Self> {
        if !b.a(0).is_one() || !c.a(0).is_one() || b.has_log() || c.has_log() {
            return Err(CrError::Domain(
                "profiles need b(0) = c(0) = 1 and no log terms".into(),
            ));
        }
        let m = b.max_order().min(c.max_order());
        let (b, c) = (b.with_max_order(m), c.with_max_order(m));
        let log_det = b
            .log_derivative()
            .add(&c.log_derivative().scale_r(&rat(2 * n as i64, 1)));
        Ok(Self {
            n,
            inv_b: b.inv_unit(),
            inv_c: c.inv_unit(),
            log_det,
            b,
            c,
        })
    }

    pub fn flat(n: usize, max_order: usize) -> Self {
        Self::new(n, RhoSeries::one(max_order), RhoSeries::one(max_order)).expect("flat profile")
    }

    pub fn is_flat(&self) -> bool {
        self.b == RhoSeries::one(self.b.max_order()) && self.c == RhoSeries::one(self.c.max_order())
    }

    /// Same profile with series padded or cut to a new order.
    pub fn with_max_order(&self, m: usize) -> Self {
        Self::new(self.n, self.b.with_max_order(m), self.c.with_max_order(m))
            .expect("valid profile")
    }

    pub fn apply<C: FlatAction>(&self, u: &RhoSeries<C>) -> RhoSeries<C> {
        let n = self.n;
        let du = u.rho_d();
        let mut r = du
            .rho_d()
            .scale_r(&rat(-1, 4))
            .add(&du.scale_r(&rat(n as i64 + 1, 2)));
        let db = u.map(|x| x.act_db(n)).shift_up(2);
        let tt = u.map(|x| x.act_t().act_t()).shift_up(4);
        if self.is_flat() {
            r = r.add(&db).sub(&tt);
        } else {
            r = r
                .add(&db.mul_rational(&self.inv_c))
                .sub(&tt.mul_rational(&self.inv_b));
            r = r.sub(&du.mul_rational(&self.log_det).scale_r(&rat(1, 8)));
        }
        r
    }
}

/// Wire form `{"n":2,"b":[[j,"p/q"],…],"c":[…]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileFile {
    pub n: usize,
    #[serde(default)]
    pub b: Vec<(usize, String)>,
    #[serde(default)]
    pub c: Vec<(usize, String)>,
}

impl ProfileFile {
    fn series(entries: &[(usize, String)], m: usize) -> Result<RhoSeries<Rational>> {
        let mut s = RhoSeries::zeros(m, Rational::zero());
        let mut has_const = false;
        for (j, v) in entries {
            let r = parse_rational(v)
                .map_err(|e| CrError::Domain(format!("profile coefficient {v:?}: {e}")))?;
            if *j == 0 {
                has_const = true;
            }
            if *j <= m {
                let cur = s.a(*j).clone();
                s.set_a(*j, cur + r);
            }
        }
        if !has_const {
            s.set_a(0, s.a(0) + Rational::one());
        }
        Ok(s)
    }

    /// Builds the Laplacian; a missing `ρ^0` entry means the constant term 1.
    pub fn laplacian(&self, max_order: usize) -> Result<ScalarLaplacian> {
        ScalarLaplacian::new(
            self.n,
            Self::series(&self.b, max_order)?,
            Self::series(&self.c, max_order)?,
        )
    }

    pub fn from_series(n: usize, b: &RhoSeries<Rational>, c: &RhoSeries<Rational>) -> Self {
        let list = |s: &RhoSeries<Rational>| {
            s.nonzero()
                .map(|(j, a, _)| (j, render_rational(a)))
                .collect()
        };
        Self {
            n,
            b: list(b),
            c: list(c),
        }
    }
}

/// Order-by-order solution of `(Δ − λ)u = rhs`.
///
/// Each step removes the residual at order `m` using the leading action
/// `ρ^m(a + b log ρ) ↦ ρ^m((I(m)a + I′(m)b) + I(m)b log ρ)`. At a root of `I`
/// the log coefficient absorbs the residual and the `a` slot takes `free(m)`.
pub struct Frobenius<'a> {
    pub lap: &'a ScalarLaplacian,
    pub lambda: Rational,
}

impl<'a> Frobenius<'a> {
    pub fn new(lap: &'a ScalarLaplacian, lambda: Rational) -> Self {
        Self { lap, lambda }
    }

    pub fn indicial(&self, m: usize) -> Rational {
        let m = Rational::from_integer((m as i64).into());
        &m * &m * rat(-1, 4) + &m * rat(self.lap.n as i64 + 1, 2) - &self.lambda
    }

    pub fn indicial_prime(&self, m: usize) -> Rational {
        rat(-(m as i64), 2) + rat(self.lap.n as i64 + 1, 2)
    }

    pub fn residual<C: FlatAction>(&self, u: &RhoSeries<C>, rhs: &RhoSeries<C>) -> RhoSeries<C> {
        self.lap.apply(u).sub(&u.scale_r(&self.lambda)).sub(rhs)
    }

    /// Steps orders `from..=to`; `u` must already satisfy the equation below `from`.
    pub fn solve<C: FlatAction>(
        &self,
        mut u: RhoSeries<C>,
        rhs: &RhoSeries<C>,
        from: usize,
        to: usize,
        free: impl Fn(usize) -> Option<C>,
    ) -> Result<RhoSeries<C>> {
        for m in from..=to {
            let r = self.residual(&u, rhs);
            let (ra, rb) = (r.a(m).clone(), r.b(m).clone());
            let i = self.indicial(m);
            let ip = self.indicial_prime(m);
            let (da, db) = if !i.is_zero() {
                let inv = i.recip();
                let db = rb.scale_r(&-inv.clone());
                let da = ra.add_c(&db.scale_r(&ip)).scale_r(&-inv);
                (da, db)
            } else {
                if !rb.is_zero_c() || ip.is_zero() {
                    return Err(CrError::Indicial {
                        channel: "func".into(),
                        order: m,
                    });
                }
                let db = ra.scale_r(&-ip.recip());
                (free(m).unwrap_or_else(|| ra.zero_like()), db)
            };
            u.set_a(m, u.a(m).add_c(&da));
            u.set_b(m, u.b(m).add_c(&db));
        }
        Ok(u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::GaussianRational as Gr;
    use crate::heis::{parse_expression, HeisPoly};

    #[test]
    fn flat_log_rho() {
        // Δ log ρ = (n+1)/2 on the model
        let lap = ScalarLaplacian::flat(2, 8);
        let mut u = RhoSeries::zeros(8, Gr::zero());
        u.set_b(0, Gr::one());
        let r = lap.apply(&u);
        assert_eq!(r, RhoSeries::constant(8, Gr::from_frac(3, 2)));
    }

    #[test]
    fn flat_operator_terms() {
        let n = 1;
        let lap = ScalarLaplacian::flat(n, 6);
        let f = parse_expression("z1*zb1", n).unwrap();
        let u = RhoSeries::constant(6, f.clone());
        let r = lap.apply(&u);
        assert_eq!(r.a(2), &f.sublaplacian(n));
        assert!(r.a(0).is_zero());
        assert_eq!(r.a(4), &HeisPoly::zero());
    }

    #[test]
    fn profile_file_roundtrip() {
        let p = ProfileFile {
            n: 2,
            b: vec![(6, "3/2".into())],
            c: vec![(0, "1".into()), (2, "-1".into())],
        };
        let lap = p.laplacian(8).unwrap();
        assert_eq!(lap.b.a(0), &Rational::one());
        assert_eq!(lap.b.a(6), &rat(3, 2));
        assert_eq!(lap.c.a(2), &rat(-1, 1));
        let back = ProfileFile::from_series(2, &lap.b, &lap.c);
        assert_eq!(back.laplacian(8).unwrap(), lap);
    }
}
