//! Seeded random polynomials and tensors for property checks.

use rand::Rng;

use super::poly::{HeisPoly, Mono};
use super::tensor::TensorPoly;
use crate::exact::{rat, GaussianRational as Gr};

/// Random polynomial with `terms` monomials of total Heisenberg weight at most `max_weight`.
pub fn random_poly<R: Rng>(rng: &mut R, n: usize, max_weight: u32, terms: usize) -> HeisPoly {
    let mut p = HeisPoly::zero();
    for _ in 0..terms {
        let mut budget = rng.gen_range(0..=max_weight);
        let mut z = vec![0u32; n];
        let mut zb = vec![0u32; n];
        let mut t = 0u32;
        while budget > 0 {
            match rng.gen_range(0..3) {
                0 => z[rng.gen_range(0..n)] += 1,
                1 => zb[rng.gen_range(0..n)] += 1,
                _ if budget >= 2 => {
                    t += 1;
                    budget -= 1;
                }
                _ => zb[rng.gen_range(0..n)] += 1,
            }
            budget -= 1;
        }
        let c = Gr::new(
            rat(rng.gen_range(-3..=3), rng.gen_range(1..=3)),
            rat(rng.gen_range(-3..=3), 1),
        );
        p.add_term(Mono::from_exponents(&z, &zb, t), c);
    }
    if p.is_zero() {
        p = HeisPoly::one();
    }
    p
}

/// Random symmetric `ψ_{αβ}`.
pub fn random_sym2<R: Rng>(rng: &mut R, n: usize, max_weight: u32, terms: usize) -> TensorPoly {
    let mut t = TensorPoly::zero(n, super::tensor::Channel::Sym2);
    for a in 1..=n {
        for b in a..=n {
            t.set(&[a, b], random_poly(rng, n, max_weight, terms));
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn seeded_is_reproducible() {
        let a = random_poly(&mut ChaCha8Rng::seed_from_u64(7), 2, 4, 5);
        let b = random_poly(&mut ChaCha8Rng::seed_from_u64(7), 2, 4, 5);
        assert_eq!(a, b);
        assert!(a.max_weight() <= 4);
        assert!(random_sym2(&mut ChaCha8Rng::seed_from_u64(1), 2, 3, 2).is_symmetric());
    }
}
