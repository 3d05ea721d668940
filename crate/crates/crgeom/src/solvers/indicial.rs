//! Indicial polynomials: the leading-order factor of each ρ-graded operator on `ρ^j`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{rat, render_rational, Rational};

/// Univariate polynomial in `j` with rational coefficients, lowest degree first.
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, j: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * j + c)
    }

    pub fn eval_int(&self, j: i64) -> Rational {
        self.eval(&Rational::from_integer(j.into()))
    }

    /// `c(j − r₁)(j − r₂)` for a scalar `c` and two roots.
    pub fn from_roots(c: Rational, roots: &[Rational]) -> Self {
        let mut p = vec![c];
        for r in roots {
            let mut q = vec![Rational::zero(); p.len() + 1];
            for (i, a) in p.iter().enumerate() {
                q[i + 1] += a;
                q[i] -= a * r;
            }
            p = q;
        }
        Self::new(p)
    }

    /// Integer roots in a window, by evaluation.
    pub fn integer_roots(&self, lo: i64, hi: i64) -> Vec<i64> {
        (lo..=hi).filter(|&j| self.eval_int(j).is_zero()).collect()
    }

    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            let body = match (k, mag.is_one()) {
                (0, _) => render_rational(&mag),
                (_, true) => String::new(),
                _ if mag.is_integer() => render_rational(&mag),
                _ => format!("({})", render_rational(&mag)),
            };
            let var = match k {
                0 => String::new(),
                1 => "j".into(),
                _ => format!("j^{k}"),
            };
            let sep = if body.is_empty() || var.is_empty() {
                ""
            } else {
                "*"
            };
            parts.push((sign, format!("{body}{sep}{var}")));
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (sign, t)) in parts.iter().enumerate() {
            if i == 0 {
                if *sign == "-" {
                    s.push('-');
                }
            } else {
                s.push_str(&format!(" {sign} "));
            }
            s.push_str(t);
        }
        s
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Operator channel whose leading factor is requested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndicialChannel {
    /// Scalar Laplacian on functions.
    Func,
    /// `(Δ_H + n + 2)` on the `τ` slot of a 1-form.
    FormTau,
    /// `(Δ_H + n + 2)` on the `α` slots of a 1-form.
    FormAlpha,
    /// `(Δ_L + n + 2)` on `σ_{ττ}`.
    TauTau,
    /// `(Δ_L + n + 2)` on `σ_{τα}`.
    TauAlpha,
    /// `(Δ_L + n + 2)` on `σ_{αβ}`.
    AlphaBeta,
    /// `(Δ_L + n + 2)` on the trace part of `σ_{αβ̄}`.
    Trace,
    /// `(Δ_L + n + 2)` on the trace-free part of `σ_{αβ̄}`.
    TraceFree,
}

impl IndicialChannel {
    pub const ALL: [IndicialChannel; 8] = [
        IndicialChannel::Func,
        IndicialChannel::FormTau,
        IndicialChannel::FormAlpha,
        IndicialChannel::TauTau,
        IndicialChannel::TauAlpha,
        IndicialChannel::AlphaBeta,
        IndicialChannel::Trace,
        IndicialChannel::TraceFree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IndicialChannel::Func => "func",
            IndicialChannel::FormTau => "form_tau",
            IndicialChannel::FormAlpha => "form_alpha",
            IndicialChannel::TauTau => "tautau",
            IndicialChannel::TauAlpha => "taualpha",
            IndicialChannel::AlphaBeta => "alphabeta",
            IndicialChannel::Trace => "trace",
            IndicialChannel::TraceFree => "tracefree",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }
}

/// `−¼(j² + b·j + c)` as a polynomial.
fn quarter(b: i64, c: i64) -> UniPoly {
    UniPoly::new(vec![rat(-c, 4), rat(-b, 4), rat(-1, 4)])
}

/// Leading factor of the channel's operator on `ρ^j`.
pub fn indicial_polynomial(channel: IndicialChannel, n: usize) -> UniPoly {
    let n = n as i64;
    match channel {
        IndicialChannel::Func | IndicialChannel::AlphaBeta => quarter(-(2 * n + 2), 0),
        IndicialChannel::FormTau | IndicialChannel::TauTau | IndicialChannel::Trace => {
            quarter(-(2 * n + 2), -(4 * n + 8))
        }
        IndicialChannel::FormAlpha | IndicialChannel::TauAlpha => {
            quarter(-(2 * n + 2), -(2 * n + 7))
        }
        IndicialChannel::TraceFree => quarter(-(2 * n + 2), -8),
    }
}

/// `−¼j(j − 2n − 2) − λ`, the scalar eigenvalue problem's leading factor.
pub fn scalar_indicial(n: usize, lambda: &Rational) -> UniPoly {
    let base = indicial_polynomial(IndicialChannel::Func, n);
    let mut c = base.coeffs().to_vec();
    c[0] -= lambda;
    UniPoly::new(c)
}

/// Leading factor measured with the frame-geometry oracle on `ρ^j` data.
pub fn indicial_from_oracle(
    channel: IndicialChannel,
    geo: &crate::frame::FrameGeometry,
    j: usize,
) -> Rational {
    use crate::frame::{monomial_fun, FrameTensor};
    use crate::heis::HeisPoly;

    let n = geo.n();
    let ix = geo.ix;
    let m = j + 1;
    let one = || monomial_fun(m, j, HeisPoly::one());
    let read = |t: &FrameTensor, idx: &[usize]| -> Rational {
        let c = t.get(idx).a(j).constant_term();
        assert!(c.is_real(), "indicial factor is real");
        c.re
    };
    let (t, a1) = (ix.tau(), ix.alpha(1));
    match channel {
        IndicialChannel::Func => {
            let f = FrameTensor::scalar(n, one());
            read(&f.scalar_laplacian(geo), &[])
        }
        IndicialChannel::FormTau | IndicialChannel::FormAlpha => {
            let slot = if channel == IndicialChannel::FormTau {
                t
            } else {
                a1
            };
            let mut mu = FrameTensor::zero(n, 1, m);
            mu.set(&[slot], one());
            read(&mu.hodge_apply(geo), &[slot])
        }
        _ => {
            let idx = match channel {
                IndicialChannel::TauTau => [t, t],
                IndicialChannel::TauAlpha => [t, a1],
                IndicialChannel::AlphaBeta => [a1, a1],
                IndicialChannel::Trace => [a1, ix.alphabar(1)],
                _ => [a1, ix.alphabar(2.min(n))],
            };
            let mut s = FrameTensor::symmetric(n, m);
            if channel == IndicialChannel::Trace {
                // σ_{αβ̄} = ρ^j h_{αβ̄}
                for a in 1..=n {
                    s.set(&[ix.alpha(a), ix.alphabar(a)], one());
                }
            } else {
                s.set(&idx, one());
            }
            read(&s.lichnerowicz_apply(geo), &idx)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factored_forms() {
        for n in 1..=4usize {
            let ni = n as i64;
            let q = rat(-1, 4);
            let tt = UniPoly::from_roots(q.clone(), &[rat(-2, 1), rat(2 * ni + 4, 1)]);
            assert_eq!(indicial_polynomial(IndicialChannel::TauTau, n), tt);
            let ab = indicial_polynomial(IndicialChannel::AlphaBeta, n);
            assert_eq!(ab.integer_roots(-20, 20), vec![0, 2 * ni + 2]);
        }
        assert_eq!(
            indicial_polynomial(IndicialChannel::Func, 1).render(),
            "-(1/4)*j^2 + j"
        );
    }

    #[test]
    fn oracle_agrees() {
        for n in 2..=3 {
            let geo = crate::frame::FrameGeometry::new(n).unwrap();
            for ch in IndicialChannel::ALL {
                for j in 0..6 {
                    let want = indicial_polynomial(ch, n).eval_int(j as i64);
                    assert_eq!(
                        indicial_from_oracle(ch, &geo, j),
                        want,
                        "{} n={n} j={j}",
                        ch.name()
                    );
                }
            }
        }
    }
}
