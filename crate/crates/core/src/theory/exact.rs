//! Exact expectations in big-rational arithmetic.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::degree_seq::DegreeSequence;
use crate::error::{Error, Result};

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// E[C(n)] = n2 / (ell_ne2 + 1), the expected number of vertices on cycle
/// components.
pub fn expected_cyclic_vertices(seq: &DegreeSequence) -> BigRational {
    BigRational::new(
        BigInt::from(seq.n2()),
        BigInt::from(seq.ell_ne2()) + BigInt::one(),
    )
}

fn binomial(n: u64, k: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// E[C_n(k)] = binom(n2, k) * 2^{k-1} * (k-1)! * prod_{g<k} 1 / (ell - 2g - 1),
/// the expected number of cycle components with exactly `k` vertices.
pub fn expected_cycle_count(seq: &DegreeSequence, k: u64) -> Result<BigRational> {
    let n2 = seq.n2();
    if k == 0 || k > n2 {
        return Err(Error::OutOfRange {
            what: "cycle length k",
            value: k,
            range: "1..=n2",
        });
    }
    let mut num = binomial(n2, k) << (k - 1) as usize;
    for i in 2..k {
        num *= i;
    }
    let ell = seq.ell();
    let mut den = BigUint::one();
    for g in 0..k {
        den *= ell - 2 * g - 1;
    }
    Ok(ratio(num, den))
}

/// The same expectation written as `(1 / 2k) * prod_{g<k} 2 (n2 - g) / (ell - 2g - 1)`.
pub fn expected_cycle_count_product(seq: &DegreeSequence, k: u64) -> Result<BigRational> {
    let n2 = seq.n2();
    if k == 0 || k > n2 {
        return Err(Error::OutOfRange {
            what: "cycle length k",
            value: k,
            range: "1..=n2",
        });
    }
    let mut acc = BigRational::new(BigInt::one(), BigInt::from(2 * k));
    for g in 0..k {
        acc *= BigRational::new(
            BigInt::from(2 * (n2 - g)),
            BigInt::from(seq.ell() - 2 * g - 1),
        );
    }
    Ok(acc)
}

/// `prod_{t<k} 2 (n2 - t) / (ell - 2t - 1)`: probability that the exploration
/// from a degree-1 vertex pairs into degree-2 vertices in each of its first
/// `k` steps. Surviving `k` steps means the start's component has at least
/// `k + 2` vertices (the start, `k` degree-2 vertices, and whatever closes the
/// path).
pub fn line_survival(seq: &DegreeSequence, k: u64) -> Result<BigRational> {
    if seq.count(1) == 0 {
        return Err(Error::OutOfRange {
            what: "number of degree-1 vertices",
            value: 0,
            range: ">= 1",
        });
    }
    let n2 = seq.n2();
    if k > n2 {
        return Err(Error::OutOfRange {
            what: "survival steps k",
            value: k,
            range: "0..=n2",
        });
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for t in 0..k {
        num *= 2 * (n2 - t);
        den *= seq.ell() - 2 * t - 1;
    }
    if num.is_zero() {
        return Ok(BigRational::zero());
    }
    Ok(ratio(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeMap;
    use alloc::vec;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn pure(n2: u64) -> DegreeSequence {
        DegreeSequence::build_upper(n2, &BTreeMap::new()).unwrap()
    }

    #[test]
    fn cyclic_vertices_closed_form() {
        let fig = DegreeSequence::build_upper(9970, &[(3, 30)].into_iter().collect()).unwrap();
        assert_eq!(expected_cyclic_vertices(&fig), q(9970, 91));
        let lower = DegreeSequence::build_lower(2, 2).unwrap();
        assert_eq!(expected_cyclic_vertices(&lower), q(2, 3));
        let none = DegreeSequence::build_lower(0, 2).unwrap();
        assert_eq!(expected_cyclic_vertices(&none), q(0, 1));
    }

    #[test]
    fn cycle_counts_small() {
        assert_eq!(expected_cycle_count(&pure(2), 1).unwrap(), q(2, 3));
        assert_eq!(expected_cycle_count(&pure(2), 2).unwrap(), q(2, 3));
        assert_eq!(expected_cycle_count(&pure(3), 3).unwrap(), q(8, 15));
        assert!(expected_cycle_count(&pure(3), 4).is_err());
        assert!(expected_cycle_count(&pure(3), 0).is_err());
    }

    #[test]
    fn two_forms_agree() {
        for (n2, higher) in [
            (30u64, vec![]),
            (12, vec![(3u32, 4u64)]),
            (20, vec![(4, 1), (5, 2)]),
        ] {
            let seq = DegreeSequence::build_upper(n2, &higher.into_iter().collect()).unwrap();
            for k in 1..=n2 {
                assert_eq!(
                    expected_cycle_count(&seq, k).unwrap(),
                    expected_cycle_count_product(&seq, k).unwrap()
                );
            }
        }
    }

    #[test]
    fn sum_of_cycle_vertices_matches_closed_form() {
        for n2 in 1..=30u64 {
            for higher in [
                vec![],
                vec![(3u32, 2u64)],
                vec![(4, 1)],
                vec![(3, 4), (6, 1)],
            ] {
                let seq = DegreeSequence::build_upper(n2, &higher.into_iter().collect()).unwrap();
                let total = (1..=n2).fold(BigRational::zero(), |acc, k| {
                    acc + expected_cycle_count(&seq, k).unwrap() * BigInt::from(k)
                });
                assert_eq!(total, expected_cyclic_vertices(&seq), "n2={n2}");
            }
            let lower = DegreeSequence::build_lower(n2, 4).unwrap();
            let total = (1..=n2).fold(BigRational::zero(), |acc, k| {
                acc + expected_cycle_count(&lower, k).unwrap() * BigInt::from(k)
            });
            assert_eq!(total, expected_cyclic_vertices(&lower));
        }
    }

    #[test]
    fn survival_products() {
        let seq = DegreeSequence::build_lower(2, 2).unwrap();
        assert_eq!(line_survival(&seq, 0).unwrap(), q(1, 1));
        assert_eq!(line_survival(&seq, 1).unwrap(), q(4, 5));
        assert_eq!(line_survival(&seq, 2).unwrap(), q(8, 15));
        assert!(line_survival(&seq, 3).is_err());
        assert!(line_survival(&pure(4), 1).is_err());
    }

    #[test]
    fn survival_is_nonincreasing() {
        let seq = DegreeSequence::build_lower(60, 6).unwrap();
        let values: alloc::vec::Vec<_> =
            (0..=60).map(|k| line_survival(&seq, k).unwrap()).collect();
        assert!(values.windows(2).all(|w| w[1] <= w[0]));
    }
}
