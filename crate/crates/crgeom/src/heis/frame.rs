//! Coordinate realization of the standard contact frame and its symbolic self-check.

use super::poly::HeisPoly;
use crate::exact::GaussianRational as Gr;
use crate::report::Report;

/// Vector field with polynomial coefficients on `∂_t, ∂_{z^1}, ∂_{z̄^1}, ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorField {
    comps: Vec<HeisPoly>,
}

impl VectorField {
    pub fn zero(n: usize) -> Self {
        Self {
            comps: vec![HeisPoly::zero(); 2 * n + 1],
        }
    }

    fn n(&self) -> usize {
        (self.comps.len() - 1) / 2
    }

    pub fn d_t(n: usize) -> Self {
        let mut v = Self::zero(n);
        v.comps[0] = HeisPoly::one();
        v
    }

    pub fn d_z(n: usize, a: usize) -> Self {
        let mut v = Self::zero(n);
        v.comps[2 * a - 1] = HeisPoly::one();
        v
    }

    pub fn d_zb(n: usize, a: usize) -> Self {
        let mut v = Self::zero(n);
        v.comps[2 * a] = HeisPoly::one();
        v
    }

    pub fn reeb(n: usize) -> Self {
        Self::d_t(n).scale(&Gr::from_int(2))
    }

    pub fn z(n: usize, a: usize) -> Self {
        let mut v = Self::d_z(n, a);
        v.comps[0] = HeisPoly::zb(a).scale(&Gr::i());
        v
    }

    pub fn zbar(n: usize, a: usize) -> Self {
        let mut v = Self::d_zb(n, a);
        v.comps[0] = HeisPoly::z(a).scale(&(-Gr::i()));
        v
    }

    pub fn scale(&self, s: &Gr) -> Self {
        Self {
            comps: self.comps.iter().map(|c| c.scale(s)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self {
            comps: self
                .comps
                .iter()
                .zip(&o.comps)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(HeisPoly::is_zero)
    }

    /// Derivative of `f` along the field.
    pub fn apply(&self, f: &HeisPoly) -> HeisPoly {
        let mut r = self.comps[0].mul(&f.d_t());
        for a in 1..=self.n() {
            r.add_assign(&self.comps[2 * a - 1].mul(&f.d_z(a)));
            r.add_assign(&self.comps[2 * a].mul(&f.d_zb(a)));
        }
        r
    }

    pub fn bracket(&self, o: &Self) -> Self {
        Self {
            comps: self
                .comps
                .iter()
                .zip(&o.comps)
                .map(|(x, y)| self.apply(y).sub(&o.apply(x)))
                .collect(),
        }
    }
}

/// `θ(X)` for `θ = ½dt − (i/2)Σ z̄ dz + (i/2)Σ z dz̄`.
pub fn theta(x: &VectorField) -> HeisPoly {
    let n = x.n();
    let mut r = x.comps[0].scale(&Gr::from_frac(1, 2));
    let half_i = Gr::new(crate::exact::rint(0), crate::exact::rat(1, 2));
    for a in 1..=n {
        r.add_assign(
            &x.comps[2 * a - 1]
                .mul(&HeisPoly::zb(a))
                .scale(&(-half_i.clone())),
        );
        r.add_assign(&x.comps[2 * a].mul(&HeisPoly::z(a)).scale(&half_i));
    }
    r
}

/// `dθ(X, Y) = Xθ(Y) − Yθ(X) − θ([X, Y])`.
pub fn d_theta(x: &VectorField, y: &VectorField) -> HeisPoly {
    x.apply(&theta(y))
        .sub(&y.apply(&theta(x)))
        .sub(&theta(&x.bracket(y)))
}

/// The flat model of CR dimension `n` with its fixed frame.
#[derive(Debug, Clone)]
pub struct HeisFrame {
    pub n: usize,
}

impl HeisFrame {
    /// Builds the frame after verifying every structure relation.
    pub fn new(n: usize) -> Result<Self, Report> {
        let r = check_frame_relations(n);
        if r.all_passed() {
            Ok(Self { n })
        } else {
            Err(r)
        }
    }
}

/// Symbolic check of the contact and bracket relations of the standard frame.
pub fn check_frame_relations(n: usize) -> Report {
    let mut rep = Report::new();
    let t = VectorField::reeb(n);
    let zero = VectorField::zero(n);
    rep.check("theta(T)", "θ(T) = 1", theta(&t) == HeisPoly::one());
    let mut coords = vec![VectorField::d_t(n)];
    for a in 1..=n {
        coords.push(VectorField::d_z(n, a));
        coords.push(VectorField::d_zb(n, a));
    }
    rep.check(
        "T_contract_dtheta",
        "T ⨼ dθ = 0",
        coords.iter().all(|y| d_theta(&t, y).is_zero()),
    );
    for a in 1..=n {
        let za = VectorField::z(n, a);
        let zab = VectorField::zbar(n, a);
        rep.check(
            format!("theta(Z_{a})"),
            "θ(Z_α) = 0",
            theta(&za).is_zero() && theta(&zab).is_zero(),
        );
        rep.check(
            format!("[Z_{a},T]"),
            "[Z_α, T] = 0",
            za.bracket(&t) == zero && zab.bracket(&t) == zero,
        );
        for b in 1..=n {
            let zb = VectorField::z(n, b);
            let zbb = VectorField::zbar(n, b);
            let delta = if a == b { Gr::one() } else { Gr::zero() };
            let want = t.scale(&(-(&Gr::i() * &delta)));
            rep.check(
                format!("[Z_{a},Z_{b}bar]"),
                "[Z_α, Z_β̄] = −iδ_{αβ}T",
                za.bracket(&zbb) == want,
            );
            rep.check(
                format!("[Z_{a},Z_{b}]"),
                "[Z_α, Z_β] = 0",
                za.bracket(&zb).is_zero(),
            );
            let levi = d_theta(&za, &zbb).scale(&(-Gr::i()));
            rep.check(
                format!("h_{a}{b}bar"),
                "h_{αβ̄} = −i dθ(Z_α, Z_β̄) = δ_{αβ}",
                levi == HeisPoly::constant(delta),
            );
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations_hold_for_small_n() {
        for n in 1..=3 {
            let r = check_frame_relations(n);
            assert!(r.all_passed(), "{:?}", r.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn off_diagonal_levi_bracket_vanishes() {
        let z2 = VectorField::z(3, 2);
        let z3b = VectorField::zbar(3, 3);
        assert!(z2.bracket(&z3b).is_zero());
    }

    #[test]
    fn diagonal_bracket_is_minus_i_t() {
        let b = VectorField::z(2, 1).bracket(&VectorField::zbar(2, 1));
        assert_eq!(b, VectorField::reeb(2).scale(&(-Gr::i())));
    }
}
