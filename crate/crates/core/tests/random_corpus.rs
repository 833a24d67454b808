use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tilecoh_core::complex::{EdgeDynamics, TransitionComplex};
use tilecoh_core::corpus::{random_aperiodic, random_primitive, CorpusShape};
use tilecoh_core::lattice::{DirectLimit, IntMatrix};
use tilecoh_core::pipeline::component_vector;
use tilecoh_core::{compute_cohomology, InvariantTuple, Options, Substitution};

fn primitive(seed: u64) -> Substitution {
    random_primitive(&mut ChaCha8Rng::seed_from_u64(seed), CorpusShape::default())
}

fn aperiodic(seed: u64) -> Substitution {
    random_aperiodic(&mut ChaCha8Rng::seed_from_u64(seed), CorpusShape::default())
}

fn dynamics(s: &Substitution) -> (TransitionComplex, EdgeDynamics) {
    let pairs = s.allowed_factors(2).pairs();
    let complex = TransitionComplex::build(s.alphabet_size(), pairs).unwrap();
    let dynamics = EdgeDynamics::compute(s, &complex).unwrap();
    (complex, dynamics)
}

/// Components and cycle rank by depth-first search on an adjacency list.
fn dfs_betti(d: usize, edges: &[(usize, usize)]) -> (usize, usize) {
    // exit(a) is node a, entry(b) is node d + b
    let mut adj = vec![Vec::new(); 2 * d];
    let mut used = vec![false; 2 * d];
    for &(a, b) in edges {
        adj[a].push(d + b);
        adj[d + b].push(a);
        used[a] = true;
        used[d + b] = true;
    }
    let mut seen = vec![false; 2 * d];
    let mut components = 0;
    for start in 0..2 * d {
        if !used[start] || seen[start] {
            continue;
        }
        components += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    let vertices = used.iter().filter(|&&u| u).count();
    (components, edges.len() + components - vertices)
}

/// Collects all factors of length 2 and 3 of `φ^depth(a)` without storing the word.
fn brute_force_factors(
    s: &Substitution,
    depth: usize,
) -> (BTreeSet<Vec<usize>>, BTreeSet<Vec<usize>>) {
    let mut twos = BTreeSet::new();
    let mut threes = BTreeSet::new();
    for a in 0..s.alphabet_size() {
        let mut window: Vec<usize> = Vec::with_capacity(3);
        let mut stack = vec![(a, depth)];
        while let Some((letter, level)) = stack.pop() {
            if level == 0 {
                if window.len() == 3 {
                    window.remove(0);
                }
                window.push(letter);
                if window.len() >= 2 {
                    twos.insert(window[window.len() - 2..].to_vec());
                }
                if window.len() == 3 {
                    threes.insert(window.clone());
                }
                continue;
            }
            for &b in s.image(letter).iter().rev() {
                stack.push((b, level - 1));
            }
        }
    }
    (twos, threes)
}

fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
    use rand::Rng;
    let mut u: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    if n < 2 {
        return u;
    }
    for _ in 0..3 * n {
        let i = rng.random_range(0..n);
        let j = (i + rng.random_range(1..n)) % n;
        let c = rng.random_range(-2..=2);
        for row in u.iter_mut() {
            row[j] += c * row[i];
        }
    }
    u
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eventual_range_agrees_with_high_power(seed in any::<u64>()) {
        let s = primitive(seed);
        let (complex, dynamics) = dynamics(&s);
        let n = complex.edges().len();
        let mut image: BTreeSet<usize> = (0..n).collect();
        for _ in 0..n {
            image = image.iter().map(|&e| dynamics.map.apply(e)).collect();
        }
        let oracle: Vec<usize> = image.into_iter().collect();
        prop_assert_eq!(&dynamics.range.edges, &oracle);
        prop_assert!(dynamics.map.is_bijection_on(&oracle));
    }

    #[test]
    fn betti_numbers_match_depth_first_search(seed in any::<u64>()) {
        let s = primitive(seed);
        let (complex, dynamics) = dynamics(&s);
        let d = s.alphabet_size();
        let decomposition =
            tilecoh_core::complex::ComponentDecomposition::new(&complex, &dynamics.range.edges);

        let (p, b1_s) = dfs_betti(d, complex.edges());
        prop_assert_eq!((decomposition.p(), decomposition.b1_s()), (p, b1_s));

        let er_pairs: Vec<(usize, usize)> =
            dynamics.range.edges.iter().map(|&e| complex.edge(e)).collect();
        let (k, l) = dfs_betti(d, &er_pairs);
        prop_assert_eq!((decomposition.k(), decomposition.l()), (k, l));
        prop_assert!(1 <= k && k <= p);
        prop_assert!(l <= b1_s);
    }

    #[test]
    fn component_vectors_sum_to_zero(seed in any::<u64>()) {
        let s = primitive(seed);
        let (complex, _) = dynamics(&s);
        let d = s.alphabet_size();
        let mut total = vec![BigInt::from(0); d];
        for c in &complex.components().components {
            for (t, x) in total.iter_mut().zip(component_vector(c, d)) {
                *t += x;
            }
        }
        prop_assert!(total.iter().all(|x| *x == BigInt::from(0)));
    }

    #[test]
    fn closure_matches_long_words(seed in any::<u64>()) {
        let s = primitive(seed);
        let lang = s.allowed_factors(3);
        let (twos, threes) = brute_force_factors(&s, 10);
        let closure_twos: BTreeSet<Vec<usize>> = lang.words_of_length(2).cloned().collect();
        let closure_threes: BTreeSet<Vec<usize>> = lang.words_of_length(3).cloned().collect();
        prop_assert_eq!(&twos, &closure_twos);
        prop_assert_eq!(&threes, &closure_threes);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn block_form_is_exact(seed in any::<u64>()) {
        let s = aperiodic(seed);
        let res = compute_cohomology(&s, &Options::default()).unwrap();
        let d = s.alphabet_size();
        let bc = &res.basis_change;
        prop_assert_eq!(bc.basis.determinant().abs(), BigInt::from(1));
        let at = res.matrix.transpose();
        // P·C = Aᵗ·P checks the conjugate without inverting P
        prop_assert_eq!(&bc.basis * &bc.conjugate, &at * &bc.basis);
        let lead = res.p() - 1;
        prop_assert!(bc.conjugate.block(lead..d, 0..lead).is_zero());
        prop_assert_eq!(bc.a1.rows(), d - res.p() + 1);
    }

    #[test]
    fn tuple_bounds(seed in any::<u64>()) {
        let res = compute_cohomology(&aperiodic(seed), &Options::default()).unwrap();
        let t = res.invariant_tuple();
        for &(_, r) in &t.mod_p_ranks {
            prop_assert!(t.total_rank >= r && r >= res.l());
        }
        for p in &res.limit.divisible_primes {
            prop_assert!(&res.limit.det % BigInt::from(*p) == BigInt::from(0));
        }
    }

    #[test]
    fn acyclic_connected_complex_gives_plain_limit(seed in any::<u64>()) {
        let res = compute_cohomology(&aperiodic(seed), &Options::default()).unwrap();
        if res.p() == 1 && res.decomposition.b1_s() == 0 {
            prop_assert_eq!(res.l(), 0);
            let whole = DirectLimit::of(&res.matrix.transpose(), res.max_prime()).unwrap();
            prop_assert_eq!(
                res.invariant_tuple(),
                InvariantTuple::new(&whole, 0, res.max_prime())
            );
        }
    }

    #[test]
    fn choices_do_not_matter(seed in any::<u64>()) {
        let s = aperiodic(seed);
        let base = compute_cohomology(&s, &Options::default()).unwrap();
        let reference = base.invariant_tuple();
        for dropped in 1..base.p() {
            let opts = Options { dropped_component: Some(dropped), ..Options::default() };
            let other = compute_cohomology(&s, &opts).unwrap();
            prop_assert_eq!(&other.invariant_tuple(), &reference);
        }

        // P·[[I, X], [0, U]] keeps the leading columns and stays unimodular
        let d = s.alphabet_size();
        let lead = base.p() - 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let u = random_unimodular(&mut rng, d - lead);
        let mut q = vec![vec![0i64; d]; d];
        for (i, row) in q.iter_mut().enumerate().take(lead) {
            row[i] = 1;
            for cell in &mut row[lead..] {
                use rand::Rng;
                *cell = rng.random_range(-3..=3);
            }
        }
        for i in 0..d - lead {
            for j in 0..d - lead {
                q[lead + i][lead + j] = u[i][j];
            }
        }
        let p2 = &base.basis_change.basis * &IntMatrix::from_rows(q);
        let opts = Options { basis: Some(p2), ..Options::default() };
        let other = compute_cohomology(&s, &opts).unwrap();
        prop_assert_eq!(&other.invariant_tuple(), &reference);
        prop_assert_eq!(other.limit.rank, base.limit.rank);
        prop_assert_eq!(other.limit.det.abs(), base.limit.det.abs());
        prop_assert_eq!(&other.limit.charpoly, &base.limit.charpoly);
        prop_assert_eq!(&other.limit.divisible_primes, &base.limit.divisible_primes);
    }
}
