//! Invariants of the direct limit `Z^n --M--> Z^n --M--> ...`.
//!
//! The limit only sees the eventual image of `M`. We restrict `M` to the
//! saturated eventual-image lattice, where it acts invertibly over the
//! rationals, and read invariants off that restriction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::normal_form::{hnf, inverse_unimodular, snf};
use super::IntMatrix;
use crate::error::{Error, Result};

pub const DEFAULT_MAX_PRIME: u32 = 97;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectLimit {
    pub ambient: usize,
    pub rank: usize,
    /// `ambient x rank`, columns in Hermite normal form.
    pub lattice_basis: IntMatrix,
    /// Action of `M` on `lattice_basis`, `rank x rank`.
    pub restriction: IntMatrix,
    pub det: BigInt,
    /// Monic, leading coefficient first.
    pub charpoly: Vec<BigInt>,
    pub divisible_primes: Vec<u32>,
    pub pretty: String,
}

impl DirectLimit {
    /// Computes the direct-limit descriptor of a square matrix.
    pub fn of(m: &IntMatrix, max_prime: u32) -> Result<Self> {
        assert!(m.is_square(), "direct limit of a non-square matrix");
        let n = m.rows();
        let eventual = m.pow(n);
        let herm = hnf(&eventual);
        let r = herm.rank;
        if r == 0 {
            return Ok(DirectLimit {
                ambient: n,
                rank: 0,
                lattice_basis: IntMatrix::zeros(n, 0),
                restriction: IntMatrix::zeros(0, 0),
                det: BigInt::one(),
                charpoly: vec![BigInt::one()],
                divisible_primes: Vec::new(),
                pretty: "0".to_string(),
            });
        }

        // saturate: the first r columns of left⁻¹ span (image ⊗ Q) ∩ Z^n
        let image = herm.h.block(0..n, 0..r);
        let smith = snf(&image);
        let left_inv = inverse_unimodular(&smith.left)?;
        let raw_basis = left_inv.block(0..n, 0..r);
        // coordinates of a lattice vector x are the first r entries of left * x
        let raw_action = (&(&smith.left * m) * &raw_basis).block(0..r, 0..r);

        let canon = hnf(&raw_basis);
        let t_inv = inverse_unimodular(&canon.transform)?;
        let lattice_basis = canon.h;
        let restriction = &(&t_inv * &raw_action) * &canon.transform;

        if m * &lattice_basis != &lattice_basis * &restriction {
            return Err(Error::Invariant(
                "eventual-image lattice is not invariant under the matrix".into(),
            ));
        }

        let det = restriction.determinant();
        let charpoly = restriction.charpoly();
        let signed_constant = if r.is_multiple_of(2) {
            charpoly[r].clone()
        } else {
            -charpoly[r].clone()
        };
        if det.is_zero() || signed_constant != det {
            return Err(Error::Invariant(format!(
                "restriction to eventual image has det {det}, charpoly constant {}",
                charpoly[r]
            )));
        }
        let divisible_primes = primes_up_to(max_prime)
            .into_iter()
            .filter(|&p| is_nilpotent_mod(&restriction, p))
            .collect();
        let pretty = pretty_limit(&restriction, &det);
        Ok(DirectLimit {
            ambient: n,
            rank: r,
            lattice_basis,
            restriction,
            det,
            charpoly,
            divisible_primes,
            pretty,
        })
    }
}

fn pretty_limit(b: &IntMatrix, det: &BigInt) -> String {
    let r = b.rows();
    if r == 0 {
        "0".to_string()
    } else if det.abs().is_one() {
        free_group(r)
    } else if r == 1 {
        format!("Z[1/{}]", radical(&b[(0, 0)].abs()))
    } else {
        format!("lim→ of {b} (rank {r}, det {det})")
    }
}

/// Product of the distinct prime factors, since `Z[1/m]` only depends on them.
/// Values beyond `u64` are returned unchanged.
fn radical(m: &BigInt) -> BigInt {
    let Some(mut n) = m.to_u64() else {
        return m.clone();
    };
    let mut rad = 1u64;
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            rad *= p;
            while n % p == 0 {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        rad *= n;
    }
    BigInt::from(rad)
}

/// `Z`, `Z^2`, ...; `0` for rank zero.
pub fn free_group(rank: usize) -> String {
    match rank {
        0 => "0".to_string(),
        1 => "Z".to_string(),
        r => format!("Z^{r}"),
    }
}

pub fn primes_up_to(max: u32) -> Vec<u32> {
    (2..=max)
        .filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0))
        .collect()
}

fn reduce_mod(m: &IntMatrix, p: u32) -> Vec<Vec<u64>> {
    let modulus = BigInt::from(p);
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| x.mod_floor(&modulus).to_u64().expect("residue fits"))
                .collect()
        })
        .collect()
}

fn mul_mod(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    let k = b.len();
    let cols = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![0u64; cols]; n];
    for i in 0..n {
        for l in 0..k {
            let x = a[i][l];
            if x == 0 {
                continue;
            }
            for j in 0..cols {
                out[i][j] = (out[i][j] + x * b[l][j]) % p;
            }
        }
    }
    out
}

fn inv_mod(x: u64, p: u64) -> u64 {
    // Fermat
    let mut result = 1u64;
    let mut base = x % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

fn rank_mod(m: &[Vec<u64>], p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = inv_mod(a[rank][col], p);
        for i in 0..rows {
            if i != rank && a[i][col] != 0 {
                let f = a[i][col] * inv % p;
                let pivot_row = a[rank].clone();
                for (x, &y) in a[i][col..].iter_mut().zip(&pivot_row[col..]) {
                    *x = (*x + p * p - f * y) % p;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Rank of the eventual image of `m` over the field with `p` elements,
/// obtained by iterating powers until the rank stops dropping.
pub fn eventual_rank_mod(m: &IntMatrix, p: u32) -> usize {
    assert!(m.is_square());
    let p64 = u64::from(p);
    let base = reduce_mod(m, p);
    let mut power = base.clone();
    let mut rank = rank_mod(&power, p64);
    loop {
        power = mul_mod(&power, &base, p64);
        let next = rank_mod(&power, p64);
        if next == rank {
            return rank;
        }
        rank = next;
    }
}

pub fn is_nilpotent_mod(m: &IntMatrix, p: u32) -> bool {
    m.rows() > 0 && eventual_rank_mod(m, p) == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn thue_morse_limit_is_dyadic() {
        let lim = DirectLimit::of(&IntMatrix::from_rows([[1, 1], [1, 1]]), 97).unwrap();
        assert_eq!(lim.rank, 1);
        assert_eq!(lim.restriction, IntMatrix::from_rows([[2]]));
        assert_eq!(lim.pretty, "Z[1/2]");
        assert_eq!(lim.divisible_primes, vec![2]);
        assert_eq!(lim.lattice_basis, IntMatrix::from_rows([[1], [1]]));
    }

    #[test]
    fn fibonacci_limit_is_free() {
        let lim = DirectLimit::of(&IntMatrix::from_rows([[1, 1], [1, 0]]), 97).unwrap();
        assert_eq!(lim.rank, 2);
        assert_eq!(lim.det.abs(), BigInt::one());
        assert_eq!(lim.pretty, "Z^2");
        assert!(lim.divisible_primes.is_empty());
    }

    #[test]
    fn rank_three_det_four() {
        let m = IntMatrix::from_rows([[2, 1, 1], [1, 1, 0], [0, 2, 2]]);
        let lim = DirectLimit::of(&m, 97).unwrap();
        assert_eq!(lim.rank, 3);
        assert_eq!(lim.det, BigInt::from(4));
        assert!(lim.divisible_primes.is_empty());
        assert_eq!(lim.restriction, m);
        assert_eq!(
            lim.pretty,
            "lim→ of [[2,1,1],[1,1,0],[0,2,2]] (rank 3, det 4)"
        );
        // brute force: M mod 2 iterated settles at rank 2
        assert_eq!(eventual_rank_mod(&m, 2), 2);
    }

    #[test]
    fn nilpotent_matrix_has_trivial_limit() {
        let lim = DirectLimit::of(&IntMatrix::from_rows([[0, 1], [0, 0]]), 97).unwrap();
        assert_eq!(lim.rank, 0);
        assert_eq!(lim.pretty, "0");
        assert!(lim.divisible_primes.is_empty());
    }

    #[test]
    fn singular_matrix_restricts_to_nonsingular() {
        // eventual image spanned by (1, 2); M acts there by 3
        let m = IntMatrix::from_rows([[1, 1], [2, 2]]);
        let lim = DirectLimit::of(&m, 97).unwrap();
        assert_eq!(lim.rank, 1);
        assert_eq!(lim.restriction, IntMatrix::from_rows([[3]]));
        assert_eq!(lim.pretty, "Z[1/3]");
        assert_eq!(lim.divisible_primes, vec![3]);
    }

    #[test]
    fn negative_multiplier_prints_absolute_value() {
        let lim = DirectLimit::of(&IntMatrix::from_rows([[-2]]), 97).unwrap();
        assert_eq!(lim.pretty, "Z[1/2]");
    }

    #[test]
    fn multiplier_reduced_to_radical() {
        let pretty = |m: i64| {
            DirectLimit::of(&IntMatrix::from_rows([[m]]), 97)
                .unwrap()
                .pretty
        };
        assert_eq!(pretty(4), "Z[1/2]");
        assert_eq!(pretty(12), "Z[1/6]");
        assert_eq!(pretty(-9), "Z[1/3]");
        assert_eq!(radical(&BigInt::from(97 * 97 * 2)), BigInt::from(194));
    }

    #[test]
    fn primes() {
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(primes_up_to(97).len(), 25);
        assert!(primes_up_to(1).is_empty());
    }

    #[test]
    fn modular_rank() {
        let m = IntMatrix::from_rows([[2]]);
        assert_eq!(eventual_rank_mod(&m, 2), 0);
        assert_eq!(eventual_rank_mod(&m, 3), 1);
        let block = m.direct_sum(&IntMatrix::identity(1));
        assert_eq!(eventual_rank_mod(&block, 2), 1);
    }

    fn random_unimodular(ops: &[(usize, usize, i64)], n: usize) -> IntMatrix {
        let mut q = IntMatrix::identity(n);
        for &(a, b, f) in ops {
            let (a, b) = (a % n, b % n);
            if a == b {
                q.swap_cols(a, (a + 1) % n);
            } else {
                q.add_col_multiple(a, b, &BigInt::from(f));
            }
        }
        q
    }

    proptest! {
        #[test]
        fn conjugation_invariance(
            entries in proptest::collection::vec(-3i64..=3, 9),
            ops in proptest::collection::vec((0usize..3, 0usize..3, -2i64..=2), 0..8),
        ) {
            let m = IntMatrix::from_rows(entries.chunks(3).map(|c| c.to_vec()));
            let q = random_unimodular(&ops, 3);
            let qi = inverse_unimodular(&q).unwrap();
            let conj = &(&qi * &m) * &q;
            let a = DirectLimit::of(&m, 23).unwrap();
            let b = DirectLimit::of(&conj, 23).unwrap();
            prop_assert_eq!(a.rank, b.rank);
            prop_assert_eq!(a.det.abs(), b.det.abs());
            prop_assert_eq!(a.charpoly, b.charpoly);
            prop_assert_eq!(a.divisible_primes, b.divisible_primes);
        }

        #[test]
        fn lattice_is_saturated(entries in proptest::collection::vec(-4i64..=4, 9)) {
            let m = IntMatrix::from_rows(entries.chunks(3).map(|c| c.to_vec()));
            let lim = DirectLimit::of(&m, 13).unwrap();
            if lim.rank > 0 {
                let s = snf(&lim.lattice_basis);
                prop_assert!(s.divisors().iter().all(|d| d.is_one()));
            }
            for &p in &lim.divisible_primes {
                prop_assert!(lim.det.is_multiple_of(&BigInt::from(p)));
            }
            prop_assert!(lim.rank <= lim.ambient);
        }
    }
}
