//! Θ-frame indices `{τ, 1..n, τ̄, 1̄..n̄}` laid out as `0..2n+2`.

/// Index bookkeeping for CR dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameIndices {
    pub n: usize,
}

impl FrameIndices {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn dim(&self) -> usize {
        2 * self.n + 2
    }

    pub fn all(&self) -> std::ops::Range<usize> {
        0..self.dim()
    }

    pub fn tau(&self) -> usize {
        0
    }

    pub fn alpha(&self, a: usize) -> usize {
        debug_assert!(a >= 1 && a <= self.n);
        a
    }

    pub fn taubar(&self) -> usize {
        self.n + 1
    }

    pub fn alphabar(&self, a: usize) -> usize {
        debug_assert!(a >= 1 && a <= self.n);
        self.n + 1 + a
    }

    pub fn is_barred(&self, p: usize) -> bool {
        p > self.n
    }

    pub fn is_tau(&self, p: usize) -> bool {
        p == 0 || p == self.n + 1
    }

    /// Holomorphic label `α` of `Z_α` or `Z_ᾱ`.
    pub fn alpha_of(&self, p: usize) -> usize {
        assert!(!self.is_tau(p));
        if self.is_barred(p) {
            p - self.n - 1
        } else {
            p
        }
    }

    pub fn conj(&self, p: usize) -> usize {
        (p + self.n + 1) % self.dim()
    }

    /// Unbarred indices `τ, 1..n`.
    pub fn unbarred(&self) -> std::ops::RangeInclusive<usize> {
        0..=self.n
    }

    /// `t`, `1`.., `bt`, `b1`..
    pub fn name(&self, p: usize) -> String {
        let base = if self.is_tau(p) {
            "t".to_string()
        } else {
            self.alpha_of(p).to_string()
        };
        if self.is_barred(p) {
            format!("b{base}")
        } else {
            base
        }
    }

    pub fn parse_name(&self, s: &str) -> Option<usize> {
        let (barred, base) = match s.strip_prefix('b') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let p = if base == "t" {
            0
        } else {
            let a: usize = base.parse().ok()?;
            if a == 0 || a > self.n {
                return None;
            }
            a
        };
        Some(if barred { self.conj(p) } else { p })
    }

    /// Comma-joined names of an index tuple, e.g. `t,1,bt`.
    pub fn tuple_name(&self, idx: &[usize]) -> String {
        idx.iter()
            .map(|&p| self.name(p))
            .collect::<Vec<_>>()
            .join(",")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_and_conjugation() {
        let ix = FrameIndices::new(3);
        assert_eq!(
            ix.tuple_name(&[ix.tau(), ix.alpha(1), ix.taubar()]),
            "t,1,bt"
        );
        for p in ix.all() {
            assert_eq!(ix.conj(ix.conj(p)), p);
            assert_eq!(ix.parse_name(&ix.name(p)), Some(p));
            assert_ne!(ix.is_barred(p), ix.is_barred(ix.conj(p)));
        }
    }
}
