//! Flat-model GJMS products, their normalizing constants and the q-polynomials.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::oppoly::OpPoly;
use crate::error::{CrError, Result};
use crate::exact::{factorial, GaussianRational as Gr, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QMode {
    Recurrence,
    ClosedForm,
}

/// `q_k(x, y)` stored with `x` in the `Δ_b` slot and `y` in the `T` slot.
///
/// Recurrence: `q_0 = 1`, `q_1 = x`, `q_l = x q_{l−1} − (l−1)(k−l+1) y² q_{l−2}`.
/// Closed form: `∏_{j=0}^{k−1} (x + (k−1−2j) y)`.
pub fn qpoly(k: u32, mode: QMode) -> OpPoly {
    let x = OpPoly::db();
    let y = OpPoly::t();
    match mode {
        QMode::ClosedForm => (0..k).fold(OpPoly::one(), |acc, j| {
            let s = k as i64 - 1 - 2 * j as i64;
            acc.mul(&x.add(&y.scale(&Gr::from_int(s))))
        }),
        QMode::Recurrence => {
            let (mut prev, mut cur) = (OpPoly::one(), x.clone());
            if k == 0 {
                return prev;
            }
            let y2 = y.pow(2);
            for l in 2..=k as i64 {
                let c = Gr::from_int(-(l - 1) * (k as i64 - l + 1));
                let next = x.mul(&cur).add(&y2.mul(&prev).scale(&c));
                prev = std::mem::replace(&mut cur, next);
            }
            cur
        }
    }
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n + 1 {
        return Err(CrError::Domain(format!(
            "k must lie in 1..={} for n = {n}, got {k}",
            n + 1
        )));
    }
    Ok(())
}

/// `∏_{j=0}^{k−1} (Δ_b + i(k−1−2j)T)`, expanded.
pub fn gjms_product(n: usize, k: usize) -> Result<OpPoly> {
    check_k(n, k)?;
    Ok(product_of_shifts(
        (0..k as i64).map(|j| k as i64 - 1 - 2 * j),
    ))
}

pub fn product_of_shifts(shifts: impl IntoIterator<Item = i64>) -> OpPoly {
    shifts
        .into_iter()
        .fold(OpPoly::one(), |acc, s| acc.mul(&OpPoly::shifted(s)))
}

/// `c_k = 2(−1)^{k+1} / (k!(k−1)!)`.
pub fn c_k(k: u32) -> Gr {
    assert!(k >= 1, "c_k needs k >= 1");
    let sign: i64 = if k % 2 == 1 { 2 } else { -2 };
    let den = factorial(k) * factorial(k - 1);
    Gr::real(BigRational::new(BigInt::from(sign), den))
}

/// Rational form of `c_k`.
pub fn c_k_rational(k: u32) -> Rational {
    c_k(k).re
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_small_cases() {
        assert_eq!(qpoly(1, QMode::Recurrence), OpPoly::db());
        let q2 = OpPoly::db().pow(2).sub(&OpPoly::t().pow(2));
        assert_eq!(qpoly(2, QMode::Recurrence), q2);
        assert_eq!(qpoly(2, QMode::ClosedForm), q2);
        let q3 = OpPoly::db().pow(3).sub(
            &OpPoly::db()
                .mul(&OpPoly::t().pow(2))
                .scale(&Gr::from_int(4)),
        );
        assert_eq!(qpoly(3, QMode::Recurrence), q3);
    }

    #[test]
    fn gjms_small_cases() {
        assert_eq!(gjms_product(2, 1).unwrap(), OpPoly::db());
        assert_eq!(
            gjms_product(2, 2).unwrap(),
            OpPoly::db().pow(2).add(&OpPoly::t().pow(2))
        );
        assert!(gjms_product(2, 4).is_err());
        for n in 1..=4 {
            for k in 1..=n + 1 {
                let p = gjms_product(n, k).unwrap();
                assert_eq!(p.adjoint(), p);
                assert_eq!(p, qpoly(k as u32, QMode::ClosedForm).scale_t(&Gr::i()));
            }
        }
    }

    #[test]
    fn constants() {
        assert_eq!(c_k(1), Gr::from_int(2));
        assert_eq!(c_k(2), Gr::from_int(-1));
        assert_eq!(c_k(3), Gr::from_frac(1, 6));
    }
}
