//! Tensor-valued polynomials with holomorphic lower indices.

use serde::{Deserialize, Serialize};

use super::poly::HeisPoly;
use crate::exact::GaussianRational as Gr;

/// Index shape of a tensor channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    Scalar,
    Vector,
    Sym2,
}

impl Channel {
    pub fn rank(self) -> usize {
        match self {
            Channel::Scalar => 0,
            Channel::Vector => 1,
            Channel::Sym2 => 2,
        }
    }

    /// Index tuples (1-based); for `Sym2` only `α ≤ β`.
    pub fn index_tuples(self, n: usize) -> Vec<Vec<usize>> {
        match self {
            Channel::Scalar => vec![vec![]],
            Channel::Vector => (1..=n).map(|a| vec![a]).collect(),
            Channel::Sym2 => (1..=n)
                .flat_map(|a| (a..=n).map(move |b| vec![a, b]))
                .collect(),
        }
    }
}

/// A scalar, a 1-form `v_α` or a symmetric `ψ_{αβ}` with polynomial components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorPoly {
    pub n: usize,
    pub channel: Channel,
    comps: Vec<HeisPoly>,
}

impl TensorPoly {
    pub fn zero(n: usize, channel: Channel) -> Self {
        let len = match channel {
            Channel::Scalar => 1,
            Channel::Vector => n,
            Channel::Sym2 => n * n,
        };
        Self {
            n,
            channel,
            comps: vec![HeisPoly::zero(); len],
        }
    }

    pub fn scalar(n: usize, f: HeisPoly) -> Self {
        Self {
            n,
            channel: Channel::Scalar,
            comps: vec![f],
        }
    }

    pub fn vector_from_fn(n: usize, f: impl Fn(usize) -> HeisPoly) -> Self {
        Self {
            n,
            channel: Channel::Vector,
            comps: (1..=n).map(f).collect(),
        }
    }

    /// Builds a symmetric tensor from its values on `α ≤ β`.
    pub fn sym2_from_fn(n: usize, f: impl Fn(usize, usize) -> HeisPoly) -> Self {
        let mut t = Self::zero(n, Channel::Sym2);
        for a in 1..=n {
            for b in a..=n {
                t.set(&[a, b], f(a, b));
            }
        }
        t
    }

    fn offset(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.channel.rank(), "index rank mismatch");
        assert!(
            idx.iter().all(|&a| a >= 1 && a <= self.n),
            "index out of range"
        );
        match idx {
            [] => 0,
            [a] => a - 1,
            [a, b] => (a - 1) * self.n + (b - 1),
            _ => unreachable!(),
        }
    }

    pub fn get(&self, idx: &[usize]) -> &HeisPoly {
        &self.comps[self.offset(idx)]
    }

    /// Sets a component; symmetric partners are kept in sync.
    pub fn set(&mut self, idx: &[usize], v: HeisPoly) {
        if let [a, b] = idx {
            let o2 = self.offset(&[*b, *a]);
            self.comps[o2] = v.clone();
        }
        let o = self.offset(idx);
        self.comps[o] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(HeisPoly::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        match self.channel {
            Channel::Sym2 => {
                (1..=self.n).all(|a| (1..=self.n).all(|b| self.get(&[a, b]) == self.get(&[b, a])))
            }
            _ => true,
        }
    }

    pub fn map(&self, f: impl Fn(&HeisPoly) -> HeisPoly) -> Self {
        Self {
            n: self.n,
            channel: self.channel,
            comps: self.comps.iter().map(f).collect(),
        }
    }

    pub fn add(&self, o: &TensorPoly) -> Self {
        assert_eq!(
            (self.n, self.channel),
            (o.n, o.channel),
            "tensor shape mismatch"
        );
        Self {
            n: self.n,
            channel: self.channel,
            comps: self
                .comps
                .iter()
                .zip(&o.comps)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, o: &TensorPoly) -> Self {
        self.add(&o.scale(&Gr::from_int(-1)))
    }

    pub fn scale(&self, s: &Gr) -> Self {
        self.map(|p| p.scale(s))
    }

    /// Contraction of the last index with `Z^γ = Z_γ̄`.
    pub fn contract_z_upper(&self) -> Option<TensorPoly> {
        let n = self.n;
        match self.channel {
            Channel::Scalar => None,
            Channel::Vector => {
                let mut s = HeisPoly::zero();
                for g in 1..=n {
                    s.add_assign(&self.get(&[g]).apply_z_upper(g));
                }
                Some(TensorPoly::scalar(n, s))
            }
            Channel::Sym2 => Some(TensorPoly::vector_from_fn(n, |a| {
                let mut s = HeisPoly::zero();
                for g in 1..=n {
                    s.add_assign(&self.get(&[a, g]).apply_z_upper(g));
                }
                s
            })),
        }
    }

    /// `Z_α f` on scalars and the symmetrized `Z_{(α}v_{β)}` on 1-forms.
    pub fn insert_z_lower(&self) -> Option<TensorPoly> {
        let n = self.n;
        match self.channel {
            Channel::Scalar => Some(TensorPoly::vector_from_fn(n, |a| self.get(&[]).apply_z(a))),
            Channel::Vector => Some(TensorPoly::sym2_from_fn(n, |a, b| {
                self.get(&[b])
                    .apply_z(a)
                    .add(&self.get(&[a]).apply_z(b))
                    .scale(&Gr::from_frac(1, 2))
            })),
            Channel::Sym2 => None,
        }
    }

    pub fn components(&self) -> impl Iterator<Item = (Vec<usize>, &HeisPoly)> {
        self.channel
            .index_tuples(self.n)
            .into_iter()
            .map(move |ix| {
                let p = self.get(&ix);
                (ix, p)
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_storage() {
        let mut t = TensorPoly::zero(2, Channel::Sym2);
        t.set(&[1, 2], HeisPoly::t());
        assert_eq!(t.get(&[2, 1]), &HeisPoly::t());
        assert!(t.is_symmetric());
    }

    #[test]
    fn double_divergence_of_zbar_squared() {
        let psi = TensorPoly::sym2_from_fn(1, |_, _| HeisPoly::zb(1).pow(2));
        let s = psi.contract_z_upper().unwrap().contract_z_upper().unwrap();
        assert_eq!(s.get(&[]), &HeisPoly::constant(Gr::from_int(2)));
    }
}
