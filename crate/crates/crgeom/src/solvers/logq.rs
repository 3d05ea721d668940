//! `ΔU = (n+1)/2` with `U = log ρ + A + B ρ^{2n+2} log ρ`, and the Q-curvature `B|_M`.

use num_traits::Zero;

use crate::error::{CrError, Result};
use crate::exact::{factorial, rat, GaussianRational as Gr, Rational};
use crate::series::RhoSeries;

use super::laplacian::{Frobenius, ScalarLaplacian};

#[derive(Debug, Clone, PartialEq)]
pub struct LogSolution {
    pub n: usize,
    pub max_order: usize,
    pub a: RhoSeries<Rational>,
    /// `B_j` multiplies `ρ^{2n+2+j} log ρ`.
    pub b: RhoSeries<Rational>,
    pub residual: RhoSeries<Gr>,
}

impl LogSolution {
    pub fn b_boundary(&self) -> &Rational {
        self.b.a(0)
    }

    pub fn residual_vanishes(&self) -> bool {
        self.residual.is_zero()
    }
}

fn real(c: &Gr) -> Result<Rational> {
    if !c.is_real() {
        return Err(CrError::Verification(format!(
            "log solve produced a non-real coefficient {}",
            c.render()
        )));
    }
    Ok(c.re.clone())
}

/// Order-by-order solve through `ρ^{max_order}`; `free` sets `a^{(2n+2)}` (zero by default).
pub fn solve_log_with(
    lap: &ScalarLaplacian,
    max_order: usize,
    free: Option<Rational>,
) -> Result<LogSolution> {
    let n = lap.n;
    let root = 2 * n + 2;
    if max_order < root {
        return Err(CrError::Domain(format!(
            "max order {max_order} is below 2n+2 = {root}"
        )));
    }
    let lap = lap.with_max_order(max_order);
    let fr = Frobenius::new(&lap, Rational::zero());
    let mut u = RhoSeries::zeros(max_order, Gr::zero());
    u.set_b(0, Gr::one());
    let rhs = RhoSeries::constant(max_order, Gr::from_frac(n as i64 + 1, 2));
    let free = free.map(Gr::real);
    let u = fr.solve(u, &rhs, 1, max_order, |m| {
        if m == root {
            free.clone()
        } else {
            None
        }
    })?;
    let residual = fr.residual(&u, &rhs);
    let mut a = RhoSeries::zeros(max_order, Rational::zero());
    for j in 0..=max_order {
        a.set_a(j, real(u.a(j))?);
        if j > 0 && j < root && !u.b(j).is_zero() {
            return Err(CrError::Verification(format!(
                "unexpected log term at order {j}"
            )));
        }
    }
    let bm = max_order - root;
    let mut b = RhoSeries::zeros(bm, Rational::zero());
    for j in 0..=bm {
        b.set_a(j, real(u.b(root + j))?);
    }
    Ok(LogSolution {
        n,
        max_order,
        a,
        b,
        residual,
    })
}

pub fn solve_log(lap: &ScalarLaplacian, max_order: usize) -> Result<LogSolution> {
    solve_log_with(lap, max_order, None)
}

/// `(−1)^n n!(n+1)!`, the factor turning `B|_M` into `Q`.
pub fn q_factor(n: usize) -> Rational {
    let f = factorial(n as u32) * factorial(n as u32 + 1);
    let r = Rational::from_integer(f);
    if n.is_multiple_of(2) {
        r
    } else {
        -r
    }
}

/// `Q = (−1)^n n!(n+1)!·B|_M`.
pub fn q_curvature(lap: &ScalarLaplacian) -> Result<Rational> {
    let sol = solve_log(lap, 2 * lap.n + 2)?;
    if !sol.residual_vanishes() {
        return Err(CrError::Verification("log-solve residual nonzero".into()));
    }
    Ok(q_factor(lap.n) * sol.b_boundary())
}

/// `Q` for the profile `b = 1 + aρ^{2n+2}`, `c = 1`: `(−1)^{n+1}n!(n+1)!·a/2`.
pub fn q_expected_top_perturbation(n: usize, a: &Rational) -> Rational {
    -q_factor(n) * a * rat(1, 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn top(n: usize, a: Rational) -> ScalarLaplacian {
        let m = 2 * n + 6;
        let mut b = RhoSeries::one(m);
        b.set_a(2 * n + 2, a + Rational::zero());
        ScalarLaplacian::new(n, b, RhoSeries::one(m)).unwrap()
    }

    #[test]
    fn flat_profile_is_trivial() {
        for n in 1..=3 {
            let s = solve_log(&ScalarLaplacian::flat(n, 2 * n + 6), 2 * n + 6).unwrap();
            assert!(s.a.is_zero() && s.b.is_zero() && s.residual_vanishes());
        }
    }

    #[test]
    fn top_perturbation() {
        for n in 1..=3 {
            let a = rat(3, 5);
            let lap = top(n, a.clone());
            let s = solve_log(&lap, 2 * n + 6).unwrap();
            assert!(s.residual_vanishes());
            assert_eq!(s.b_boundary(), &(-a.clone() / rat(2, 1)));
            assert_eq!(
                q_curvature(&lap).unwrap(),
                q_expected_top_perturbation(n, &a)
            );
        }
        let (q2, q3) = (
            q_curvature(&top(2, rat(1, 1))).unwrap(),
            q_curvature(&top(3, rat(1, 1))).unwrap(),
        );
        assert!(q2 * q3 < Rational::zero());
    }

    #[test]
    fn free_slot_independence() {
        let n = 2;
        let mut c = RhoSeries::one(10);
        c.set_a(2, rat(1, 3));
        let lap = ScalarLaplacian::new(n, RhoSeries::one(10), c).unwrap();
        let base = solve_log(&lap, 10).unwrap();
        for v in [rat(1, 1), rat(-7, 2)] {
            let s = solve_log_with(&lap, 10, Some(v)).unwrap();
            assert!(s.residual_vanishes());
            assert_eq!(s.b_boundary(), base.b_boundary());
        }
    }
}
