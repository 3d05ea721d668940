//! Generalized eigenfunctions `u = ρ^{n+1−k}F + ρ^{n+1+k} log ρ · G` and the GJMS operators.

use crate::error::{CrError, Result};
use crate::exact::{rat, Rational};
use crate::heis::HeisPoly;
use crate::opalg::{c_k, gjms_product, OpPoly};
use crate::series::{FlatAction, RhoSeries};

use super::laplacian::{Frobenius, ScalarLaplacian};

/// Solution of `(Δ − ((n+1)² − k²)/4)u = 0` with `F|_M` prescribed.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSolution<C: crate::series::Coeff> {
    pub n: usize,
    pub k: usize,
    pub max_order: usize,
    /// `F` with `F_j` the coefficient of `ρ^{n+1−k+j}`.
    pub f: RhoSeries<C>,
    /// `G` with `G_j` the log coefficient of `ρ^{n+1+k+j}`.
    pub g: RhoSeries<C>,
    /// Full `u` in absolute powers of `ρ`.
    pub u: RhoSeries<C>,
    pub residual: RhoSeries<C>,
}

impl<C: FlatAction> EigenSolution<C> {
    /// `G|_M`.
    pub fn g_boundary(&self) -> &C {
        self.g.a(0)
    }

    /// Residual vanishes through `ρ^{n+1−k+max_order}`.
    pub fn residual_vanishes(&self) -> bool {
        self.residual.is_zero()
    }
}

pub fn eigenvalue(n: usize, k: usize) -> Rational {
    let (n1, k) = (n as i64 + 1, k as i64);
    rat(n1 * n1 - k * k, 4)
}

fn check_range(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n + 1 {
        return Err(CrError::Domain(format!(
            "k must satisfy 1 <= k <= n+1 = {}, got {k}",
            n + 1
        )));
    }
    Ok(())
}

/// Generic solve; `free` fills the undetermined coefficient `F_{2k}`.
pub fn solve_eigen_with<C: FlatAction>(
    n: usize,
    k: usize,
    f0: C,
    max_order: usize,
    free: Option<C>,
) -> Result<EigenSolution<C>> {
    check_range(n, k)?;
    if max_order < 2 * k {
        return Err(CrError::Domain(format!(
            "max order {max_order} is below 2k = {}",
            2 * k
        )));
    }
    let m0 = n + 1 - k;
    let m1 = n + 1 + k;
    let top = m0 + max_order;
    let lap = ScalarLaplacian::flat(n, top);
    let fr = Frobenius::new(&lap, eigenvalue(n, k));
    let zero = f0.zero_like();
    let mut u = RhoSeries::zeros(top, zero.clone());
    u.set_a(m0, f0);
    let rhs = RhoSeries::zeros(top, zero.clone());
    let u = fr.solve(u, &rhs, m0 + 1, top, |m| {
        if m == m1 {
            free.clone()
        } else {
            None
        }
    })?;
    let residual = fr.residual(&u, &rhs);
    let f = RhoSeries::from_coeffs(
        max_order,
        zero.clone(),
        (0..=max_order).map(|j| (j, u.a(m0 + j).clone())),
    );
    let gm = max_order - 2 * k;
    let g = RhoSeries::from_coeffs(gm, zero, (0..=gm).map(|j| (j, u.b(m1 + j).clone())));
    Ok(EigenSolution {
        n,
        k,
        max_order,
        f,
        g,
        u,
        residual,
    })
}

/// Polynomial boundary data; `F_{2k}` set to zero.
pub fn solve_eigen(
    n: usize,
    k: usize,
    f: &HeisPoly,
    max_order: usize,
) -> Result<EigenSolution<HeisPoly>> {
    solve_eigen_with(n, k, f.clone(), max_order, None)
}

/// Operator-valued run: `G|_M = c_k·P` with boundary datum the identity operator.
pub fn extract_gjms(n: usize, k: usize) -> Result<OpPoly> {
    let sol = solve_eigen_with(n, k, OpPoly::one(), 2 * k, None)?;
    if !sol.residual_vanishes() {
        return Err(CrError::Verification(format!(
            "operator eigen-solve residual nonzero for n={n}, k={k}"
        )));
    }
    let ck = c_k(k as u32);
    Ok(sol.g_boundary().scale(&ck.inv().expect("c_k is nonzero")))
}

/// `extract_gjms` compared with the product formula.
pub fn verified_gjms(n: usize, k: usize) -> Result<OpPoly> {
    let p = extract_gjms(n, k)?;
    let q = gjms_product(n, k)?;
    if p != q {
        return Err(CrError::Verification(format!(
            "GJMS mismatch for n={n}, k={k}: solver {} vs product {}",
            p.render_text(),
            q.render_text()
        )));
    }
    Ok(p)
}

/// `P_{2n+2}Υ`, the non-exponential part of the Q-curvature transformation on the model.
pub fn q_transform(n: usize, upsilon: &HeisPoly) -> Result<HeisPoly> {
    Ok(extract_gjms(n, n + 1)?.apply(upsilon, n))
}

/// `c_k·P_{2k}f` by the product formula, the independent side of the Dirichlet check.
pub fn dirichlet_cross_check(n: usize, k: usize, f: &HeisPoly) -> Result<HeisPoly> {
    Ok(gjms_product(n, k)?.apply(f, n).scale(&c_k(k as u32)))
}

/// Odd `F` coefficients vanish.
pub fn odd_coefficients_vanish<C: FlatAction>(sol: &EigenSolution<C>) -> bool {
    sol.f.nonzero().all(|(j, _, _)| j % 2 == 0) && sol.g.nonzero().all(|(j, _, _)| j % 2 == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::GaussianRational as Gr;
    use crate::heis::parse_expression;

    #[test]
    fn constant_is_exact() {
        for n in 1..=3 {
            for k in 1..=n + 1 {
                let s = solve_eigen(n, k, &HeisPoly::one(), 2 * n + 6).unwrap();
                assert!(s.residual_vanishes());
                assert!(s.g.is_zero());
                assert_eq!(s.f, RhoSeries::constant(2 * n + 6, HeisPoly::one()));
            }
        }
    }

    #[test]
    fn zzbar_gives_minus_four() {
        let f = parse_expression("z1*zb1", 1).unwrap();
        let s = solve_eigen(1, 1, &f, 8).unwrap();
        assert!(s.residual_vanishes());
        assert_eq!(s.g_boundary(), &HeisPoly::constant(Gr::from_int(-4)));
        assert_eq!(s.g_boundary(), &dirichlet_cross_check(1, 1, &f).unwrap());
    }

    #[test]
    fn gjms_small() {
        for n in 1..=3 {
            for k in 1..=n + 1 {
                verified_gjms(n, k).unwrap();
            }
        }
        assert_eq!(extract_gjms(1, 2).unwrap().render_text(), "Δ_b^2 + T^2");
    }

    #[test]
    fn free_slot_does_not_move_g() {
        let f = parse_expression("z1*zb1*t + z1^2", 1).unwrap();
        let a = solve_eigen_with(1, 2, f.clone(), 8, None).unwrap();
        let b = solve_eigen_with(1, 2, f, 8, Some(HeisPoly::t())).unwrap();
        assert!(b.residual_vanishes());
        assert_eq!(a.g_boundary(), b.g_boundary());
        assert_ne!(a.f, b.f);
    }

    #[test]
    fn q_transform_examples() {
        assert!(q_transform(1, &HeisPoly::one()).unwrap().is_zero());
        assert!(q_transform(1, &parse_expression("z1*zb1", 1).unwrap())
            .unwrap()
            .is_zero());
    }
}
