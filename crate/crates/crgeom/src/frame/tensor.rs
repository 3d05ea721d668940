//! Covariant frame tensors with `RhoSeries<HeisPoly>` components and their differential operators.

use std::collections::BTreeMap;

use serde::Serialize;

use super::geometry::FrameGeometry;
use super::index::FrameIndices;
use crate::exact::{rat, GaussianRational as Gr};
use crate::heis::{HeisPoly, HeisPolyWire};
use crate::series::{RhoSeries, SeriesWire};

/// Component function `Σ ρ^j (a_j + b_j log ρ)` with polynomial coefficients on `H^n`.
pub type Fun = RhoSeries<HeisPoly>;

pub fn zero_fun(max_order: usize) -> Fun {
    RhoSeries::zeros(max_order, HeisPoly::zero())
}

/// `ρ^j · c`.
pub fn monomial_fun(max_order: usize, j: usize, c: HeisPoly) -> Fun {
    RhoSeries::from_coeffs(max_order, HeisPoly::zero(), [(j, c)])
}

/// Action of the frame field `Z_P` on a component function.
///
/// `Z_τ = ½ρ∂_ρ + iρ²T`, `Z_τ̄ = ½ρ∂_ρ − iρ²T`, `Z_α = ρ(∂_{z^α} + i z̄^α∂_t)`, `Z_ᾱ` its conjugate.
pub fn frame_apply(ix: &FrameIndices, p: usize, f: &Fun) -> Fun {
    if ix.is_tau(p) {
        let radial = f.rho_d().scale_r(&rat(1, 2));
        let sign = if p == ix.tau() { Gr::i() } else { -Gr::i() };
        let vertical = f.map(|c| c.apply_t()).shift_up(2).scale_g(&sign);
        return radial.add(&vertical);
    }
    let a = ix.alpha_of(p);
    if ix.is_barred(p) {
        f.map(|c| c.apply_zb(a)).shift_up(1)
    } else {
        f.map(|c| c.apply_z(a)).shift_up(1)
    }
}

/// Declared symmetry of a tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    None,
    /// Symmetric in the two slots of a 2-tensor.
    Symmetric,
}

/// Sparse covariant tensor; absent components are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameTensor {
    pub ix: FrameIndices,
    pub rank: usize,
    pub max_order: usize,
    pub symmetry: Symmetry,
    comps: BTreeMap<Vec<usize>, Fun>,
}

impl FrameTensor {
    pub fn zero(n: usize, rank: usize, max_order: usize) -> Self {
        Self {
            ix: FrameIndices::new(n),
            rank,
            max_order,
            symmetry: Symmetry::None,
            comps: BTreeMap::new(),
        }
    }

    pub fn symmetric(n: usize, max_order: usize) -> Self {
        Self {
            symmetry: Symmetry::Symmetric,
            ..Self::zero(n, 2, max_order)
        }
    }

    pub fn n(&self) -> usize {
        self.ix.n
    }

    /// Component, zero when absent.
    pub fn get(&self, idx: &[usize]) -> Fun {
        self.comps
            .get(idx)
            .cloned()
            .unwrap_or_else(|| zero_fun(self.max_order))
    }

    pub fn get_ref(&self, idx: &[usize]) -> Option<&Fun> {
        self.comps.get(idx)
    }

    /// Sets a component; a symmetric 2-tensor also sets the transposed slot.
    pub fn set(&mut self, idx: &[usize], f: Fun) {
        assert_eq!(idx.len(), self.rank, "index tuple has wrong length");
        let f = f.with_max_order(self.max_order);
        if self.symmetry == Symmetry::Symmetric && idx[0] != idx[1] {
            self.put(vec![idx[1], idx[0]], f.clone());
        }
        self.put(idx.to_vec(), f);
    }

    fn put(&mut self, idx: Vec<usize>, f: Fun) {
        if f.is_zero() {
            self.comps.remove(&idx);
        } else {
            self.comps.insert(idx, f);
        }
    }

    fn accumulate(&mut self, idx: Vec<usize>, f: &Fun) {
        if f.is_zero() {
            return;
        }
        let cur = self
            .comps
            .remove(&idx)
            .unwrap_or_else(|| zero_fun(self.max_order));
        self.put(idx, cur.add(f));
    }

    /// Nonzero components.
    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &Fun)> {
        self.comps.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Whether every component vanishes through `ρ^m`.
    pub fn is_zero_through(&self, m: usize) -> bool {
        self.comps.values().all(|f| f.is_zero_through(m))
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.max_order = self.max_order.min(o.max_order);
        r.comps = r
            .comps
            .into_iter()
            .map(|(k, v)| (k, v.with_max_order(r.max_order)))
            .collect();
        for (k, v) in &o.comps {
            r.accumulate(k.clone(), &v.with_max_order(r.max_order));
        }
        if o.symmetry != self.symmetry {
            r.symmetry = Symmetry::None;
        }
        r
    }

    pub fn scale(&self, s: &Gr) -> Self {
        let mut r = self.clone();
        r.comps = self
            .comps
            .iter()
            .map(|(k, v)| (k.clone(), v.scale_g(s)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&Gr::from_int(-1)))
    }

    /// Symmetry check on actual components.
    pub fn is_symmetric(&self) -> bool {
        self.rank == 2
            && self
                .comps
                .iter()
                .all(|(k, v)| self.get(&[k[1], k[0]]) == *v)
    }

    /// No mixed `(A, B̄)` components.
    pub fn is_anti_hermitian(&self) -> bool {
        self.rank == 2
            && self
                .comps
                .keys()
                .all(|k| self.ix.is_barred(k[0]) == self.ix.is_barred(k[1]))
    }

    /// Only components with unbarred indices.
    pub fn is_unbarred(&self) -> bool {
        self.comps
            .keys()
            .all(|k| k.iter().all(|&p| !self.ix.is_barred(p)))
    }

    /// Tensor with constant components taken from a dense table.
    fn from_constants(
        n: usize,
        max_order: usize,
        entries: impl IntoIterator<Item = (Vec<usize>, Gr)>,
        rank: usize,
    ) -> Self {
        let mut t = Self::zero(n, rank, max_order);
        for (idx, v) in entries {
            if !v.is_zero() {
                t.put(idx, RhoSeries::constant(max_order, HeisPoly::constant(v)));
            }
        }
        t
    }

    /// The metric `g_{PQ}` as a tensor.
    pub fn metric(geo: &FrameGeometry, max_order: usize) -> Self {
        let d = geo.dim();
        let entries = (0..d).flat_map(|p| (0..d).map(move |q| (vec![p, q], geo.g[p][q].clone())));
        let mut t = Self::from_constants(geo.n(), max_order, entries, 2);
        t.symmetry = Symmetry::Symmetric;
        t
    }

    /// `∇σ` with the derivative slot first: `(∇σ)_{P A…} = Z_P σ_{A…} − Σ_i Γ^S_{P A_i} σ_{…S…}`.
    pub fn covariant_derivative(&self, geo: &FrameGeometry) -> Self {
        let ix = self.ix;
        let d = ix.dim();
        // inverse lookup: for fixed P and S, every A with Γ^S_{PA} ≠ 0
        let mut pull: Vec<Vec<Vec<(usize, Gr)>>> = vec![vec![Vec::new(); d]; d];
        for p in 0..d {
            for a in 0..d {
                for (s, v) in &geo.gamma_sparse[p][a] {
                    pull[p][*s].push((a, v.clone()));
                }
            }
        }
        let mut out = Self::zero(ix.n, self.rank + 1, self.max_order);
        for (b, f) in &self.comps {
            for p in 0..d {
                let mut key = Vec::with_capacity(self.rank + 1);
                key.push(p);
                key.extend_from_slice(b);
                out.accumulate(key.clone(), &frame_apply(&ix, p, f));
                for i in 0..self.rank {
                    for (a, gamma) in &pull[p][b[i]] {
                        let mut k = key.clone();
                        k[i + 1] = *a;
                        out.accumulate(k, &f.scale_g(&-gamma.clone()));
                    }
                }
            }
        }
        out
    }

    /// `g^{PQ} T_{PQ…}` over the first two slots.
    pub fn contract_first_pair(&self, geo: &FrameGeometry) -> Self {
        assert!(self.rank >= 2);
        let mut out = Self::zero(self.ix.n, self.rank - 2, self.max_order);
        for (k, f) in &self.comps {
            let gi = &geo.ginv[k[0]][k[1]];
            if !gi.is_zero() {
                out.accumulate(k[2..].to_vec(), &f.scale_g(gi));
            }
        }
        out
    }

    /// Rough Laplacian `∇*∇σ = −g^{PQ}∇_P∇_Qσ`.
    pub fn rough_laplacian(&self, geo: &FrameGeometry) -> Self {
        let dd = self.covariant_derivative(geo).covariant_derivative(geo);
        let mut r = dd.contract_first_pair(geo).scale(&Gr::from_int(-1));
        r.symmetry = self.symmetry;
        r
    }

    /// `σ^{PS} = g^{PC} g^{SD} σ_{CD}`.
    fn raise_both(&self, geo: &FrameGeometry) -> BTreeMap<(usize, usize), Fun> {
        let pairs = geo.ginv_pairs();
        let mut out: BTreeMap<(usize, usize), Fun> = BTreeMap::new();
        for (k, f) in &self.comps {
            for (p, c, g1) in &pairs {
                if *c != k[0] {
                    continue;
                }
                for (s, dd, g2) in &pairs {
                    if *dd != k[1] {
                        continue;
                    }
                    let term = f.scale_g(&(g1 * g2));
                    let e = out
                        .entry((*p, *s))
                        .or_insert_with(|| zero_fun(self.max_order));
                    *e = e.add(&term);
                }
            }
        }
        out
    }

    /// `(Δ_L + n + 2)σ` with `Δ_L σ = ∇*∇σ + Ric∘σ + σ∘Ric − 2R̊σ`, `R̊σ_{AB} = R_{PABS}σ^{PS}`.
    pub fn lichnerowicz_apply(&self, geo: &FrameGeometry) -> Self {
        assert_eq!(self.rank, 2, "Lichnerowicz Laplacian acts on 2-tensors");
        let d = geo.dim();
        let mut out = self.rough_laplacian(geo);
        let ric = geo.ricci_mixed();
        for (k, f) in &self.comps {
            let (c, b) = (k[0], k[1]);
            for a in 0..d {
                // Ric_A^C σ_{CB} lands in (A, B); Ric_B^C σ_{AC} with roles swapped
                if !ric[a][c].is_zero() {
                    out.accumulate(vec![a, b], &f.scale_g(&ric[a][c]));
                }
                if !ric[a][b].is_zero() {
                    out.accumulate(vec![c, a], &f.scale_g(&ric[a][b]));
                }
            }
        }
        let raised = self.raise_both(geo);
        let minus_two = Gr::from_int(-2);
        for ((p, s), f) in &raised {
            for a in 0..d {
                for b in 0..d {
                    let r = &geo.riemann[*p][a][b][*s];
                    if !r.is_zero() {
                        out.accumulate(vec![a, b], &f.scale_g(&(r * &minus_two)));
                    }
                }
            }
        }
        let shift = Gr::from_int(self.n() as i64 + 2);
        for (k, f) in &self.comps {
            out.accumulate(k.clone(), &f.scale_g(&shift));
        }
        out.symmetry = self.symmetry;
        out
    }

    /// `(δσ)_Q = −g^{PR}(∇σ)_{PRQ}`.
    pub fn divergence(&self, geo: &FrameGeometry) -> Self {
        assert!(self.rank >= 1);
        let mut r = self
            .covariant_derivative(geo)
            .contract_first_pair(geo)
            .scale(&Gr::from_int(-1));
        r.symmetry = Symmetry::None;
        r
    }

    /// `g^{PQ}σ_{PQ}`.
    pub fn trace(&self, geo: &FrameGeometry) -> Self {
        self.contract_first_pair(geo)
    }

    /// `(Δ_H + n + 2)μ` on 1-forms with `Δ_H = ∇*∇ + Ric`.
    pub fn hodge_apply(&self, geo: &FrameGeometry) -> Self {
        assert_eq!(self.rank, 1, "Hodge Laplacian here acts on 1-forms");
        let d = geo.dim();
        let mut out = self.rough_laplacian(geo);
        let ric = geo.ricci_mixed();
        for (k, f) in &self.comps {
            for a in 0..d {
                if !ric[a][k[0]].is_zero() {
                    out.accumulate(vec![a], &f.scale_g(&ric[a][k[0]]));
                }
            }
        }
        let shift = Gr::from_int(self.n() as i64 + 2);
        for (k, f) in &self.comps {
            out.accumulate(k.clone(), &f.scale_g(&shift));
        }
        out
    }

    /// Scalar Laplacian `Δf = −g^{PQ}∇_P∇_Q f` on a rank-0 tensor.
    pub fn scalar_laplacian(&self, geo: &FrameGeometry) -> Self {
        assert_eq!(self.rank, 0);
        self.rough_laplacian(geo)
    }

    /// Rank-0 tensor from a function.
    pub fn scalar(n: usize, f: Fun) -> Self {
        let mut t = Self::zero(n, 0, f.max_order());
        t.put(Vec::new(), f);
        t
    }

    /// JSON map `"t,1,bt" → series`.
    pub fn to_wire(&self) -> FrameTensorWire {
        let n = self.n();
        FrameTensorWire {
            n,
            rank: self.rank,
            max_order: self.max_order,
            symmetry: self.symmetry,
            components: self
                .comps
                .iter()
                .map(|(k, f)| (self.ix.tuple_name(k), f.to_wire(|c| c.to_wire(n))))
                .collect(),
        }
    }
}

/// Serialized tensor.
#[derive(Serialize)]
pub struct FrameTensorWire {
    pub n: usize,
    pub rank: usize,
    pub max_order: usize,
    pub symmetry: Symmetry,
    pub components: BTreeMap<String, SeriesWire<HeisPolyWire>>,
}

/// Full Riemann tensor `R_{PQRS}` as a frame tensor; constant on the model.
pub fn curvature(geo: &FrameGeometry, max_order: usize) -> FrameTensor {
    let d = geo.dim();
    let mut entries = Vec::new();
    for p in 0..d {
        for q in 0..d {
            for r in 0..d {
                for s in 0..d {
                    entries.push((vec![p, q, r, s], geo.riemann[p][q][r][s].clone()));
                }
            }
        }
    }
    FrameTensor::from_constants(geo.n(), max_order, entries, 4)
}

/// Ricci tensor as a frame tensor.
pub fn ricci(geo: &FrameGeometry, max_order: usize) -> FrameTensor {
    let d = geo.dim();
    let entries = (0..d).flat_map(|p| (0..d).map(move |q| (vec![p, q], geo.ricci[p][q].clone())));
    let mut t = FrameTensor::from_constants(geo.n(), max_order, entries, 2);
    t.symmetry = Symmetry::Symmetric;
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geo(n: usize) -> FrameGeometry {
        FrameGeometry::new(n).unwrap()
    }

    #[test]
    fn metric_is_parallel() {
        for n in 1..=2 {
            let g = geo(n);
            let m = FrameTensor::metric(&g, 4);
            assert!(m.covariant_derivative(&g).is_zero());
            assert!(m.divergence(&g).is_zero());
        }
    }

    #[test]
    fn lichnerowicz_of_metric() {
        let g = geo(2);
        let m = FrameTensor::metric(&g, 4);
        let r = m.lichnerowicz_apply(&g);
        assert_eq!(r, m.scale(&Gr::from_int(4)));
    }

    #[test]
    fn covariant_derivative_of_constant_sym2() {
        // ∇_τ σ_{αβ} = σ_{αβ} + O(ρ) for σ_{αβ} = ψ_{αβ} constant in ρ
        let g = geo(2);
        let ix = g.ix;
        let mut s = FrameTensor::symmetric(2, 4);
        let psi = HeisPoly::z(1).mul(&HeisPoly::t());
        s.set(
            &[ix.alpha(1), ix.alpha(2)],
            RhoSeries::constant(4, psi.clone()),
        );
        let ds = s.covariant_derivative(&g);
        assert_eq!(ds.get(&[ix.tau(), ix.alpha(1), ix.alpha(2)]).a(0), &psi);
    }

    #[test]
    fn divergence_leading_tau() {
        // σ_ττ = ρ^j: (δσ)_τ = −¼(j−2n−4)ρ^j + …
        let n = 2;
        let g = geo(n);
        let ix = g.ix;
        for j in 0..4usize {
            let mut s = FrameTensor::symmetric(n, 6);
            s.set(&[ix.tau(), ix.tau()], monomial_fun(6, j, HeisPoly::one()));
            let dv = s.divergence(&g);
            let want = rat(-(j as i64 - 2 * n as i64 - 4), 4);
            assert_eq!(
                dv.get(&[ix.tau()]).a(j),
                &HeisPoly::constant(Gr::real(want))
            );
        }
    }

    #[test]
    fn curvature_dump_keys() {
        let g = geo(1);
        let w = curvature(&g, 0).to_wire();
        assert!(w.components.contains_key("t,bt,t,bt"));
    }
}
