use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use superorbit_core::matrix::{BlockShape, SuperMatrix};
use superorbit_core::random::{random_even, random_invertible, random_poly};
use superorbit_core::{Parity, RingSignature, SuperPolynomial};

const SHAPES: [(usize, usize); 3] = [(1, 1), (2, 1), (2, 2)];

fn shape_from(rng: &mut ChaCha8Rng) -> BlockShape {
    let (m, n) = SHAPES[rng.gen_range(0..SHAPES.len())];
    BlockShape::new(m, n).unwrap()
}

fn random_homogeneous(
    shape: BlockShape,
    sig: &Arc<RingSignature>,
    rng: &mut ChaCha8Rng,
    parity: Parity,
) -> SuperMatrix {
    let size = shape.size();
    let entries = (0..size * size)
        .map(|idx| {
            let p = shape.block_parity(idx / size, idx % size) + parity;
            random_poly(sig, rng, 2, 2, Some(p))
        })
        .collect();
    SuperMatrix::new(shape, sig, entries, parity.into()).unwrap()
}

/// Matrix whose entries are distinct generators of the right parity, drawn from the
/// even generators starting at `even` and the odd ones starting at `odd`.
fn generic(
    shape: BlockShape,
    sig: &Arc<RingSignature>,
    parity: Parity,
    even: &mut usize,
    odd: &mut usize,
) -> SuperMatrix {
    let size = shape.size();
    let mut entries = Vec::new();
    for i in 0..size {
        for j in 0..size {
            let e = match shape.block_parity(i, j) + parity {
                Parity::Even => {
                    *even += 1;
                    SuperPolynomial::even_gen(sig, *even - 1)
                }
                Parity::Odd => {
                    *odd += 1;
                    SuperPolynomial::odd_gen(sig, *odd - 1)
                }
            };
            entries.push(e);
        }
    }
    SuperMatrix::new(shape, sig, entries, parity.into()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn berezinian_is_multiplicative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = shape_from(&mut rng);
        let sig = Arc::new(RingSignature::new(0, 3).unwrap());
        let a = random_invertible(shape, &sig, &mut rng, 2);
        let b = random_invertible(shape, &sig, &mut rng, 2);
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.berezinian().unwrap(), &a.berezinian().unwrap() * &b.berezinian().unwrap());
    }

    #[test]
    fn inverse_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = shape_from(&mut rng);
        let sig = Arc::new(RingSignature::new(1, 3).unwrap());
        let a = random_invertible(shape, &sig, &mut rng, 3);
        let inv = a.inverse().unwrap();
        prop_assert!(a.mul(&inv).unwrap().is_identity());
        prop_assert!(inv.mul(&a).unwrap().is_identity());
        prop_assert_eq!(inv.berezinian().unwrap(), a.berezinian().unwrap().invert().unwrap());
    }

    #[test]
    fn supertrace_kills_supercommutators(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = shape_from(&mut rng);
        let sig = Arc::new(RingSignature::new(2, 3).unwrap());
        // The supertrace is defined on even matrices, so both factors share a parity.
        let p = Parity::from_bit(rng.gen_range(0..2));
        let x = random_homogeneous(shape, &sig, &mut rng, p);
        let y = random_homogeneous(shape, &sig, &mut rng, p);
        let c = x.super_commutator(&y).unwrap();
        prop_assert!(c.supertrace().unwrap().is_zero());
    }

    #[test]
    fn power_sums_are_conjugation_invariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = shape_from(&mut rng);
        let sig = Arc::new(RingSignature::new(1, 3).unwrap());
        let x = random_even(shape, &sig, &mut rng, 2, 2);
        let g = random_invertible(shape, &sig, &mut rng, 2);
        let conj = g.mul(&x).unwrap().mul(&g.inverse().unwrap()).unwrap();
        prop_assert_eq!(conj.power_sums(3, false).unwrap(), x.power_sums(3, false).unwrap());
    }
}

#[test]
fn supertrace_of_generic_supercommutators_vanishes() {
    for (m, n) in [(1, 1), (2, 1), (2, 2)] {
        let shape = BlockShape::new(m, n).unwrap();
        let size = shape.size();
        let sig = Arc::new(RingSignature::new(2 * size * size, 2 * size * size).unwrap());
        for px in [Parity::Even, Parity::Odd] {
            for py in [Parity::Even, Parity::Odd] {
                if px + py == Parity::Odd {
                    continue;
                }
                let (mut e, mut o) = (0, 0);
                let x = generic(shape, &sig, px, &mut e, &mut o);
                let y = generic(shape, &sig, py, &mut e, &mut o);
                let c = x.super_commutator(&y).unwrap();
                assert!(c.supertrace().unwrap().is_zero(), "{m}|{n} {px:?} {py:?}");
            }
        }
    }
}

#[test]
fn berezinian_of_infinitesimal_deformation() {
    for (m, n) in [(1, 1), (2, 2)] {
        let shape = BlockShape::new(m, n).unwrap();
        let size = shape.size();
        // Generator 0 is epsilon with epsilon^2 = 0; the entries of `a` follow.
        let mut caps = vec![Some(1)];
        caps.extend(std::iter::repeat(None).take(size * size));
        let sig = Arc::new(RingSignature::with_caps(caps, size * size).unwrap());
        let (mut e, mut o) = (1, 0);
        let a = generic(shape, &sig, Parity::Even, &mut e, &mut o);
        let eps = SuperPolynomial::even_gen(&sig, 0);
        let deformed = SuperMatrix::identity(shape, &sig)
            .add(&a.scale_by(&eps).unwrap())
            .unwrap();
        let expected = &SuperPolynomial::one(&sig) + &(&eps * &a.supertrace().unwrap());
        assert_eq!(deformed.berezinian().unwrap(), expected, "{m}|{n}");
    }
}
