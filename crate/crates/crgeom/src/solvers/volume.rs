//! Volume expansion `Vol({ρ > ε}) = Σ c_j ε^j + L log(1/ε) + O(1)` per unit boundary volume.

use num_traits::Zero;

use crate::error::Result;
use crate::exact::{factorial, rat, Rational};
use crate::report::{CheckRecord, Report};

use super::laplacian::ScalarLaplacian;
use super::logq::q_curvature;

#[derive(Debug, Clone, PartialEq)]
pub struct VolumeExpansion {
    pub n: usize,
    /// `(j, c_j)` for `j = −2n−2..=−1`.
    pub coeffs: Vec<(i64, Rational)>,
    pub log_coeff: Rational,
}

impl VolumeExpansion {
    pub fn coeff(&self, j: i64) -> Rational {
        self.coeffs
            .iter()
            .find(|(i, _)| *i == j)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }
}

/// Integrates the density `2ρ^{−2n−3}·sqrt(b)·c^n`.
pub fn volume_coeffs(lap: &ScalarLaplacian) -> VolumeExpansion {
    let n = lap.n;
    let top = 2 * n + 2;
    let b = lap.b.with_max_order(top);
    let c = lap.c.with_max_order(top);
    let d = b.sqrt_unit().mul(&c.pow(n as u32));
    let coeffs = (0..top)
        .map(|j| {
            let e = j as i64 - top as i64;
            (e, d.a(j) * rat(2, 1) / rat(top as i64 - j as i64, 1))
        })
        .collect();
    VolumeExpansion {
        n,
        coeffs,
        log_coeff: d.a(top) * rat(2, 1),
    }
}

/// `2(−1)^{n+1}/(n!²(n+1)!)·n!`, the factor relating `L` and `Q` per unit volume.
pub fn l_over_q(n: usize) -> Rational {
    let nf = Rational::from_integer(factorial(n as u32));
    let n1f = Rational::from_integer(factorial(n as u32 + 1));
    let sign = if n.is_multiple_of(2) {
        rat(-1, 1)
    } else {
        rat(1, 1)
    };
    sign * rat(2, 1) / (&nf * &nf * n1f) * nf
}

/// Both sides of `L = 2(−1)^{n+1}/(n!²(n+1)!)·Q̄` with `Q̄ = n!·Q` per unit volume.
pub fn total_q_check(lap: &ScalarLaplacian, label: &str) -> Result<Report> {
    let n = lap.n;
    let vol = volume_coeffs(lap);
    let q = q_curvature(&lap.with_max_order(2 * n + 2))?;
    let rhs = l_over_q(n) * &q;
    let mut rep = Report::new();
    rep.push(
        CheckRecord::new(
            format!("total_q_{label}_n{n}"),
            "L = 2(−1)^{n+1}/(n!²(n+1)!)·Q̄",
            vol.log_coeff == rhs,
        )
        .with_detail(format!("L = {}, rhs = {}, Q = {}", vol.log_coeff, rhs, q)),
    );
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::RhoSeries;

    #[test]
    fn flat_volume() {
        for n in 1..=3 {
            let v = volume_coeffs(&ScalarLaplacian::flat(n, 2 * n + 2));
            assert_eq!(v.coeff(-(2 * n as i64) - 2), rat(1, n as i64 + 1));
            assert!(v.log_coeff.is_zero());
            assert!(v.coeffs.iter().skip(1).all(|(_, c)| c.is_zero()));
        }
    }

    #[test]
    fn top_perturbation_both_sides() {
        let n = 2;
        let a = rat(5, 7);
        let mut b = RhoSeries::one(8);
        b.set_a(6, a.clone());
        let lap = ScalarLaplacian::new(n, b, RhoSeries::one(8)).unwrap();
        assert_eq!(volume_coeffs(&lap).log_coeff, a);
        assert!(total_q_check(&lap, "top").unwrap().all_passed());
    }

    #[test]
    fn mixed_profiles() {
        let n = 2;
        let mut b = RhoSeries::one(8);
        b.set_a(2, rat(1, 2));
        b.set_a(3, rat(-2, 3));
        b.set_a(6, rat(1, 5));
        let mut c = RhoSeries::one(8);
        c.set_a(2, rat(-1, 3));
        c.set_a(4, rat(2, 1));
        let lap = ScalarLaplacian::new(n, b, c).unwrap();
        let r = total_q_check(&lap, "mixed").unwrap();
        assert!(r.all_passed(), "{:?}", r);
    }
}
