//! Coordinate realization of the Θ-frame on `(0, ρ₀) × H^n`.
//!
//! `Z_τ = ½ρ∂_ρ + iρ²T`, `Z_α = ρ(∂_{z^α} + i z̄^α ∂_t)` and conjugates, with `T = 2∂_t`.

use super::index::FrameIndices;
use crate::error::{CrError, Result};
use crate::exact::{rat, rint, GaussianRational as Gr};
use crate::heis::HeisPoly;
use crate::series::RhoSeries;

const ORDER: usize = 8;

type Fun = RhoSeries<HeisPoly>;

fn zero() -> Fun {
    RhoSeries::zeros(ORDER, HeisPoly::zero())
}

fn rho_pow(k: usize, c: HeisPoly) -> Fun {
    RhoSeries::from_coeffs(ORDER, HeisPoly::zero(), [(k, c)])
}

fn mul(x: &Fun, y: &Fun) -> Fun {
    x.mul_with(y, |p, q| p.mul(q))
}

/// Vector field with components on `∂_ρ, ∂_t, ∂_{z^1}, ∂_{z̄^1}, ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoordField {
    n: usize,
    comps: Vec<Fun>,
}

impl CoordField {
    fn empty(n: usize) -> Self {
        Self {
            n,
            comps: vec![zero(); 2 * n + 2],
        }
    }

    /// The frame field with index `p`.
    pub fn frame(ix: &FrameIndices, p: usize) -> Self {
        let n = ix.n;
        let mut v = Self::empty(n);
        let i2 = Gr::new(rint(0), rint(2));
        if p == ix.tau() || p == ix.taubar() {
            let s = if p == ix.tau() { i2 } else { -i2 };
            v.comps[0] = rho_pow(1, HeisPoly::constant(Gr::from_frac(1, 2)));
            v.comps[1] = rho_pow(2, HeisPoly::constant(s));
        } else {
            let a = ix.alpha_of(p);
            if ix.is_barred(p) {
                v.comps[2 * a + 1] = rho_pow(1, HeisPoly::one());
                v.comps[1] = rho_pow(1, HeisPoly::z(a).scale(&(-Gr::i())));
            } else {
                v.comps[2 * a] = rho_pow(1, HeisPoly::one());
                v.comps[1] = rho_pow(1, HeisPoly::zb(a).scale(&Gr::i()));
            }
        }
        v
    }

    /// Derivative of a function along the field.
    pub fn apply(&self, f: &Fun) -> Fun {
        let mut r = mul(&self.comps[0], &f.d_rho());
        r = r.add(&mul(&self.comps[1], &f.map(|c| c.d_t())));
        for a in 1..=self.n {
            r = r.add(&mul(&self.comps[2 * a], &f.map(|c| c.d_z(a))));
            r = r.add(&mul(&self.comps[2 * a + 1], &f.map(|c| c.d_zb(a))));
        }
        r
    }

    pub fn bracket(&self, o: &Self) -> Self {
        Self {
            n: self.n,
            comps: self
                .comps
                .iter()
                .zip(&o.comps)
                .map(|(x, y)| self.apply(y).sub(&o.apply(x)))
                .collect(),
        }
    }

    /// Components in the frame; they must be constants.
    pub fn frame_components(&self, ix: &FrameIndices) -> Result<Vec<Gr>> {
        let n = self.n;
        let div = |s: &Fun, k: usize| -> Result<Fun> {
            s.shift_down(k)
                .ok_or_else(|| CrError::Verification("frame coefficient singular at ρ = 0".into()))
        };
        let constant = |s: &Fun| -> Result<Gr> {
            let c = s.a(0).constant_term();
            if s.has_log()
                || s.nonzero().any(|(j, _, _)| j > 0)
                || *s.a(0) != HeisPoly::constant(c.clone())
            {
                return Err(CrError::Verification(format!(
                    "frame coefficient {s:?} is not constant"
                )));
            }
            Ok(c)
        };
        let mut out = vec![Gr::zero(); ix.dim()];
        let c_inf = div(&self.comps[0], 1)?;
        let mut w = self.comps[1].clone();
        for a in 1..=n {
            let cz = div(&self.comps[2 * a], 1)?;
            let czb = div(&self.comps[2 * a + 1], 1)?;
            out[ix.alpha(a)] = constant(&cz)?;
            out[ix.alphabar(a)] = constant(&czb)?;
            w = w.sub(&mul(
                &self.comps[2 * a],
                &rho_pow(0, HeisPoly::zb(a).scale(&Gr::i())),
            ));
            w = w.add(&mul(
                &self.comps[2 * a + 1],
                &rho_pow(0, HeisPoly::z(a).scale(&Gr::i())),
            ));
        }
        // ∂_t = Z_0 / (2ρ²) and Z_0 = (Z_τ − Z_τ̄)/(2i), Z_∞ = Z_τ + Z_τ̄
        let c0 = constant(&div(&w, 2)?)?.scale(&rat(1, 2));
        let cinf = constant(&c_inf)?;
        let half_i = Gr::new(rint(0), rat(1, 2));
        out[ix.tau()] = &cinf - &(&half_i * &c0);
        out[ix.taubar()] = &cinf + &(&half_i * &c0);
        Ok(out)
    }
}

/// Structure constants `[Z_P, Z_Q] = Σ_R c^R_{PQ} Z_R`, indexed `[P][Q][R]`.
pub fn frame_brackets(n: usize) -> Result<Vec<Vec<Vec<Gr>>>> {
    let ix = FrameIndices::new(n);
    let fields: Vec<CoordField> = ix.all().map(|p| CoordField::frame(&ix, p)).collect();
    let mut out = Vec::with_capacity(ix.dim());
    for p in ix.all() {
        let mut row = Vec::with_capacity(ix.dim());
        for q in ix.all() {
            row.push(fields[p].bracket(&fields[q]).frame_components(&ix)?);
        }
        out.push(row);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_field_decomposes_to_itself() {
        let ix = FrameIndices::new(2);
        for p in ix.all() {
            let c = CoordField::frame(&ix, p).frame_components(&ix).unwrap();
            for q in ix.all() {
                assert_eq!(c[q], if p == q { Gr::one() } else { Gr::zero() });
            }
        }
    }

    #[test]
    fn listed_brackets() {
        let n = 2;
        let ix = FrameIndices::new(n);
        let c = frame_brackets(n).unwrap();
        let half = Gr::from_frac(1, 2);
        // [Z_τ, Z_α] = ½ Z_α
        assert_eq!(c[ix.tau()][ix.alpha(1)][ix.alpha(1)], half);
        // [Z_α, Z_β̄] = −½ δ (Z_τ − Z_τ̄)
        assert_eq!(c[ix.alpha(1)][ix.alphabar(1)][ix.tau()], -half.clone());
        assert_eq!(c[ix.alpha(1)][ix.alphabar(1)][ix.taubar()], half);
        assert!(c[ix.alpha(1)][ix.alphabar(2)].iter().all(Gr::is_zero));
        // [Z_α, Z_β] = 0
        assert!(c[ix.alpha(1)][ix.alpha(2)].iter().all(Gr::is_zero));
        // [Z_τ, Z_τ̄] = −(Z_τ − Z_τ̄)
        assert_eq!(c[ix.tau()][ix.taubar()][ix.tau()], Gr::from_int(-1));
        assert_eq!(c[ix.tau()][ix.taubar()][ix.taubar()], Gr::from_int(1));
    }
}
