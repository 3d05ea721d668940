//! Metric, Levi-Civita connection and curvature of the complex hyperbolic model in the Θ-frame.
//!
//! On the model every frame quantity is a constant, so the tables below hold
//! Gaussian rationals. Conventions: `∇_{Z_P} Z_Q = Γ^R_{PQ} Z_R`,
//! `R(X, Y) = [∇_X, ∇_Y] − ∇_{[X,Y]}`, `R_{PQRS} = ⟨R(Z_P, Z_Q) Z_R, Z_S⟩`,
//! `Ric_{QR} = g^{PS} R_{PQRS}`.

use super::coords::frame_brackets;
use super::index::FrameIndices;
use crate::error::Result;
use crate::exact::GaussianRational as Gr;
use crate::report::{CheckRecord, Report};

type Mat = Vec<Vec<Gr>>;

/// `g_{ττ̄} = 2`, `g_{αβ̄} = δ_{αβ}`, all other pairings zero.
pub fn flat_metric(ix: &FrameIndices) -> Mat {
    let mut g = vec![vec![Gr::zero(); ix.dim()]; ix.dim()];
    g[ix.tau()][ix.taubar()] = Gr::from_int(2);
    g[ix.taubar()][ix.tau()] = Gr::from_int(2);
    for a in 1..=ix.n {
        g[ix.alpha(a)][ix.alphabar(a)] = Gr::one();
        g[ix.alphabar(a)][ix.alpha(a)] = Gr::one();
    }
    g
}

/// `g^{ττ̄} = ½`, `g^{αβ̄} = δ^{αβ}`.
pub fn flat_inverse_metric(ix: &FrameIndices) -> Mat {
    let mut g = vec![vec![Gr::zero(); ix.dim()]; ix.dim()];
    g[ix.tau()][ix.taubar()] = Gr::from_frac(1, 2);
    g[ix.taubar()][ix.tau()] = Gr::from_frac(1, 2);
    for a in 1..=ix.n {
        g[ix.alpha(a)][ix.alphabar(a)] = Gr::one();
        g[ix.alphabar(a)][ix.alpha(a)] = Gr::one();
    }
    g
}

/// `Γ^R_{PQ}` stored as `[R][P][Q]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChristoffelTable {
    pub ix: FrameIndices,
    table: Vec<Vec<Vec<Gr>>>,
}

impl ChristoffelTable {
    pub fn get(&self, r: usize, p: usize, q: usize) -> &Gr {
        &self.table[r][p][q]
    }

    /// Symbol name such as `Γ^t_{bt,1}`.
    pub fn symbol(&self, r: usize, p: usize, q: usize) -> String {
        format!(
            "Γ^{}_{{{},{}}}",
            self.ix.name(r),
            self.ix.name(p),
            self.ix.name(q)
        )
    }

    /// The closed-form table: sixteen families for unbarred `Q`, the rest by conjugation.
    pub fn reference(n: usize) -> Self {
        let ix = FrameIndices::new(n);
        let d = ix.dim();
        let delta = |a: usize, b: usize| if a == b { Gr::one() } else { Gr::zero() };
        let half = Gr::from_frac(1, 2);
        let unbarred = |r: usize, p: usize, q: usize| -> Gr {
            if ix.is_barred(r) {
                return Gr::zero();
            }
            let (t, tb) = (ix.tau(), ix.taubar());
            if q == t {
                if r == t {
                    return if p == t {
                        Gr::from_int(-1)
                    } else if p == tb {
                        Gr::one()
                    } else {
                        Gr::zero()
                    };
                }
                let g = ix.alpha_of(r);
                if !ix.is_tau(p) && !ix.is_barred(p) {
                    return -delta(g, ix.alpha_of(p));
                }
                return Gr::zero();
            }
            let b = ix.alpha_of(q);
            if r == t {
                if !ix.is_tau(p) && ix.is_barred(p) {
                    return &half * &delta(b, ix.alpha_of(p));
                }
                return Gr::zero();
            }
            let g = ix.alpha_of(r);
            if p == t {
                -(&half * &delta(g, b))
            } else if p == tb {
                &half * &delta(g, b)
            } else {
                Gr::zero()
            }
        };
        let mut table = vec![vec![vec![Gr::zero(); d]; d]; d];
        for r in ix.all() {
            for p in ix.all() {
                for q in ix.all() {
                    table[r][p][q] = if ix.is_barred(q) {
                        unbarred(ix.conj(r), ix.conj(p), ix.conj(q)).conj()
                    } else {
                        unbarred(r, p, q)
                    };
                }
            }
        }
        Self { ix, table }
    }
}

/// Koszul formula with the frame brackets and the constant metric:
/// `Γ_{RPQ} = ½(⟨[Z_P,Z_Q],Z_R⟩ − ⟨[Z_P,Z_R],Z_Q⟩ − ⟨[Z_Q,Z_R],Z_P⟩)`, then `Γ^S_{PQ} = g^{SR}Γ_{RPQ}`.
/// The metric-derivative terms vanish because every `g_{PQ}` is constant.
pub fn christoffel_from_koszul(n: usize) -> Result<ChristoffelTable> {
    let ix = FrameIndices::new(n);
    let c = frame_brackets(n)?;
    let g = flat_metric(&ix);
    let gi = flat_inverse_metric(&ix);
    let d = ix.dim();
    let pair = |v: &Vec<Gr>, w: usize| -> Gr {
        let mut s = Gr::zero();
        for k in 0..d {
            if !v[k].is_zero() && !g[k][w].is_zero() {
                s += &(&v[k] * &g[k][w]);
            }
        }
        s
    };
    let mut low = vec![vec![vec![Gr::zero(); d]; d]; d];
    for r in 0..d {
        for p in 0..d {
            for q in 0..d {
                let v = &(&pair(&c[p][q], r) - &pair(&c[p][r], q)) - &pair(&c[q][r], p);
                low[r][p][q] = v.scale(&crate::exact::rat(1, 2));
            }
        }
    }
    let mut table = vec![vec![vec![Gr::zero(); d]; d]; d];
    for s in 0..d {
        for p in 0..d {
            for q in 0..d {
                let mut acc = Gr::zero();
                for r in 0..d {
                    if !gi[s][r].is_zero() {
                        acc += &(&gi[s][r] * &low[r][p][q]);
                    }
                }
                table[s][p][q] = acc;
            }
        }
    }
    Ok(ChristoffelTable { ix, table })
}

/// Compares the Koszul table with the closed-form table, one record per mismatch.
pub fn compare_christoffel(n: usize) -> Result<Report> {
    let k = christoffel_from_koszul(n)?;
    let r = ChristoffelTable::reference(n);
    let ix = k.ix;
    let mut rep = Report::new();
    let mut mismatches = Vec::new();
    for a in ix.all() {
        for p in ix.all() {
            for q in ix.all() {
                if k.get(a, p, q) != r.get(a, p, q) {
                    mismatches.push(format!(
                        "{}: {} vs {}",
                        k.symbol(a, p, q),
                        k.get(a, p, q),
                        r.get(a, p, q)
                    ));
                }
            }
        }
    }
    rep.push(
        CheckRecord::new(
            format!("christoffel_table_n{n}"),
            "Koszul Christoffel symbols = closed-form table",
            mismatches.is_empty(),
        )
        .with_detail(mismatches.join("; ")),
    );
    let (t, tb) = (ix.tau(), ix.taubar());
    rep.check(
        "Gamma^t_tt",
        "Γ^τ_ττ = −1",
        *k.get(t, t, t) == Gr::from_int(-1),
    );
    rep.check("Gamma^t_tbt", "Γ^τ_τ̄τ = 1", *k.get(t, tb, t) == Gr::one());
    rep.check(
        "Gamma^t_b1,1",
        "Γ^τ_ᾱβ = ½h_{βᾱ}",
        *k.get(t, ix.alphabar(1), ix.alpha(1)) == Gr::from_frac(1, 2),
    );
    rep.check(
        "Gamma^1_11",
        "Γ^γ_αβ = 0",
        k.get(ix.alpha(1), ix.alpha(1), ix.alpha(1)).is_zero(),
    );
    Ok(rep)
}

/// Precomputed constant geometry of the model.
#[derive(Debug, Clone)]
pub struct FrameGeometry {
    pub ix: FrameIndices,
    pub g: Mat,
    pub ginv: Mat,
    pub brackets: Vec<Vec<Vec<Gr>>>,
    pub christoffel: ChristoffelTable,
    /// `Γ^S_{PQ}` as sparse lists `[P][Q] → (S, value)`.
    pub gamma_sparse: Vec<Vec<Vec<(usize, Gr)>>>,
    /// `R_{PQRS}`, dense.
    pub riemann: Vec<Vec<Vec<Vec<Gr>>>>,
    pub ricci: Mat,
}

impl FrameGeometry {
    pub fn new(n: usize) -> Result<Self> {
        let ix = FrameIndices::new(n);
        let d = ix.dim();
        let g = flat_metric(&ix);
        let ginv = flat_inverse_metric(&ix);
        let brackets = frame_brackets(n)?;
        let christoffel = christoffel_from_koszul(n)?;
        let gamma_sparse: Vec<Vec<Vec<(usize, Gr)>>> = (0..d)
            .map(|p| {
                (0..d)
                    .map(|q| {
                        (0..d)
                            .filter_map(|s| {
                                let v = christoffel.get(s, p, q);
                                (!v.is_zero()).then(|| (s, v.clone()))
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        // R(Z_P, Z_Q) Z_R = Σ_U [Γ^S_{QR}Γ^U_{PS} − Γ^S_{PR}Γ^U_{QS} − c^S_{PQ}Γ^U_{SR}] Z_U
        let mut riemann = vec![vec![vec![vec![Gr::zero(); d]; d]; d]; d];
        for p in 0..d {
            for q in 0..d {
                for r in 0..d {
                    let mut u_coef = vec![Gr::zero(); d];
                    for (s, gqr) in &gamma_sparse[q][r] {
                        for (u, gps) in &gamma_sparse[p][*s] {
                            u_coef[*u] += &(gqr * gps);
                        }
                    }
                    for (s, gpr) in &gamma_sparse[p][r] {
                        for (u, gqs) in &gamma_sparse[q][*s] {
                            u_coef[*u] -= &(gpr * gqs);
                        }
                    }
                    for s in 0..d {
                        let cs = &brackets[p][q][s];
                        if cs.is_zero() {
                            continue;
                        }
                        for (u, gsr) in &gamma_sparse[s][r] {
                            u_coef[*u] -= &(cs * gsr);
                        }
                    }
                    for sidx in 0..d {
                        let mut v = Gr::zero();
                        for u in 0..d {
                            if !u_coef[u].is_zero() && !g[u][sidx].is_zero() {
                                v += &(&u_coef[u] * &g[u][sidx]);
                            }
                        }
                        riemann[p][q][r][sidx] = v;
                    }
                }
            }
        }
        let mut ricci = vec![vec![Gr::zero(); d]; d];
        for q in 0..d {
            for r in 0..d {
                let mut v = Gr::zero();
                for p in 0..d {
                    for s in 0..d {
                        if !ginv[p][s].is_zero() {
                            v += &(&ginv[p][s] * &riemann[p][q][r][s]);
                        }
                    }
                }
                ricci[q][r] = v;
            }
        }
        Ok(Self {
            ix,
            g,
            ginv,
            brackets,
            christoffel,
            gamma_sparse,
            riemann,
            ricci,
        })
    }

    pub fn n(&self) -> usize {
        self.ix.n
    }

    pub fn dim(&self) -> usize {
        self.ix.dim()
    }

    /// Nonzero entries of the inverse metric.
    pub fn ginv_pairs(&self) -> Vec<(usize, usize, Gr)> {
        let d = self.dim();
        let mut v = Vec::new();
        for p in 0..d {
            for q in 0..d {
                if !self.ginv[p][q].is_zero() {
                    v.push((p, q, self.ginv[p][q].clone()));
                }
            }
        }
        v
    }

    pub fn scalar_curvature(&self) -> Gr {
        let mut s = Gr::zero();
        for (p, q, v) in self.ginv_pairs() {
            s += &(&v * &self.ricci[p][q]);
        }
        s
    }

    /// `Ric_A{}^C = g^{CD} Ric_{AD}` as `[A][C]`.
    pub fn ricci_mixed(&self) -> Mat {
        let d = self.dim();
        let mut m = vec![vec![Gr::zero(); d]; d];
        for a in 0..d {
            for (c, dd, v) in self.ginv_pairs() {
                m[a][c] += &(&v * &self.ricci[a][dd]);
            }
        }
        m
    }
}

/// Einstein condition, scalar curvature, symmetries and type of the curvature tensor.
pub fn einstein_check(n: usize) -> Result<Report> {
    let geo = FrameGeometry::new(n)?;
    let ix = geo.ix;
    let d = ix.dim();
    let mut rep = Report::new();
    let lambda = Gr::from_frac(n as i64 + 2, 2);
    let einstein =
        (0..d).all(|p| (0..d).all(|q| (&geo.ricci[p][q] + &(&lambda * &geo.g[p][q])).is_zero()));
    rep.check(format!("einstein_n{n}"), "Ric + (n+2)/2·g = 0", einstein);
    let scal = geo.scalar_curvature();
    rep.push(
        CheckRecord::new(
            format!("scalar_curvature_n{n}"),
            "Scal = −(n+1)(n+2)",
            scal == Gr::from_int(-((n as i64 + 1) * (n as i64 + 2))),
        )
        .with_detail(scal.render()),
    );
    let rm = &geo.riemann;
    let (t, tb) = (ix.tau(), ix.taubar());
    rep.check(
        format!("R_tbttbt_n{n}"),
        "R_{ττ̄ττ̄} = −4",
        rm[t][tb][t][tb] == Gr::from_int(-4),
    );
    let (a1, a1b) = (ix.alpha(1), ix.alphabar(1));
    rep.check(
        format!("R_1b11b1_n{n}"),
        "R_{11̄11̄} = −1",
        rm[a1][a1b][a1][a1b] == Gr::from_int(-1),
    );
    // Boundary curvature: R_{AB̄CD̄} = −½(g_{AB̄}g_{CD̄} + g_{AD̄}g_{CB̄}) and Kähler type.
    let mut kahler = true;
    let mut model = true;
    let mut bianchi = true;
    let mut pair = true;
    for p in 0..d {
        for q in 0..d {
            for r in 0..d {
                for s in 0..d {
                    let v = &rm[p][q][r][s];
                    let same_first = ix.is_barred(p) == ix.is_barred(q);
                    let same_last = ix.is_barred(r) == ix.is_barred(s);
                    if (same_first || same_last) && !v.is_zero() {
                        kahler = false;
                    }
                    if !ix.is_barred(p) && ix.is_barred(q) && !ix.is_barred(r) && ix.is_barred(s) {
                        let want = (&(&geo.g[p][q] * &geo.g[r][s])
                            + &(&geo.g[p][s] * &geo.g[r][q]))
                            .scale(&crate::exact::rat(-1, 2));
                        model &= *v == want;
                    }
                    bianchi &= (&(v + &rm[q][r][p][s]) + &rm[r][p][q][s]).is_zero();
                    pair &= *v == rm[r][s][p][q];
                }
            }
        }
    }
    rep.check(
        format!("kahler_type_n{n}"),
        "R_{PQCD} = R_{ABPQ} = 0 for same-type pairs",
        kahler,
    );
    rep.check(
        format!("boundary_curvature_n{n}"),
        "R_{AB̄CD̄} = −½(g_{AB̄}g_{CD̄} + g_{AD̄}g_{CB̄})",
        model,
    );
    rep.check(format!("first_bianchi_n{n}"), "R_{[PQR]S} = 0", bianchi);
    rep.check(format!("pair_symmetry_n{n}"), "R_{PQRS} = R_{RSPQ}", pair);
    // Metricity: Z_P g_{QR} − Γ^S_{PQ} g_{SR} − Γ^S_{PR} g_{QS} = 0 with constant g.
    let mut metric_ok = true;
    for p in 0..d {
        for q in 0..d {
            for r in 0..d {
                let mut v = Gr::zero();
                for s in 0..d {
                    v += &(geo.christoffel.get(s, p, q) * &geo.g[s][r]);
                    v += &(geo.christoffel.get(s, p, r) * &geo.g[q][s]);
                }
                metric_ok &= v.is_zero();
            }
        }
    }
    rep.check(format!("metricity_n{n}"), "∇g = 0", metric_ok);
    let mut torsion_free = true;
    for p in 0..d {
        for q in 0..d {
            for s in 0..d {
                let v = geo.christoffel.get(s, p, q) - geo.christoffel.get(s, q, p);
                torsion_free &= v == geo.brackets[p][q][s];
            }
        }
    }
    rep.check(
        format!("torsion_free_n{n}"),
        "∇_PZ_Q − ∇_QZ_P = [Z_P, Z_Q]",
        torsion_free,
    );
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn koszul_matches_reference() {
        for n in 1..=3 {
            let r = compare_christoffel(n).unwrap();
            assert!(r.all_passed(), "{:#?}", r.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn einstein_and_friends() {
        for n in 1..=3 {
            let r = einstein_check(n).unwrap();
            assert!(r.all_passed(), "{:#?}", r.failures().collect::<Vec<_>>());
        }
    }
}
