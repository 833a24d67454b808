//! End-to-end computation of the first cohomology of a tiling space.
//!
//! The result is `lim→ A₁ ⊕ Z^l`, where `l` is the first Betti number of the
//! eventual range of `g` and `A₁` is the block of `Aᵗ` left after splitting
//! off the sublattice spanned by the component vectors of `S`.

use std::fmt;
use std::thread;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::complex::{ComponentDecomposition, Components, EdgeDynamics, Node, TransitionComplex};
use crate::error::{Error, Result};
use crate::lattice::{
    complete_basis, conjugate_and_extract, eventual_rank_mod, free_group, primes_up_to,
    BasisChange, DirectLimit, IntMatrix, DEFAULT_MAX_PRIME,
};
use crate::perron::{perron_data, PerronData};
use crate::substitution::{Letter, Periodicity, Primitivity, Substitution, DEFAULT_HORIZON};

#[derive(Debug, Clone)]
pub struct Options {
    /// Word-length horizon of the periodicity screen.
    pub horizon: usize,
    pub max_prime: u32,
    /// Explicit basis; its leading columns must be the component vectors.
    pub basis: Option<IntMatrix>,
    /// Component of `S` left out of the component vectors (default: the first).
    pub dropped_component: Option<usize>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            horizon: DEFAULT_HORIZON,
            max_prime: DEFAULT_MAX_PRIME,
            basis: None,
            dropped_component: None,
        }
    }
}

/// Signed incidence vector of a component: `+f_j` for each `exit(j)` in it,
/// `−f_m` for each `entry(m)` in it.
pub fn component_vector(component: &crate::complex::Component, d: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); d];
    for node in &component.nodes {
        match *node {
            Node::Exit(j) => v[j] += 1,
            Node::Entry(m) => v[m] -= 1,
        }
    }
    v
}

/// Component vectors of every component of `S` except `dropped`.
pub fn w_vectors(components: &Components, d: usize, dropped: usize) -> Vec<Vec<BigInt>> {
    components
        .components
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != dropped)
        .map(|(_, c)| component_vector(c, d))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Necessary-condition comparator for isomorphism of the cohomology groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantTuple {
    pub total_rank: usize,
    /// `(p, eventual rank of B ⊕ I_l over F_p)` for each prime `p ≤ max_prime`.
    pub mod_p_ranks: Vec<(u32, usize)>,
    pub divisible_primes: Vec<u32>,
}

impl InvariantTuple {
    pub fn new(limit: &DirectLimit, l: usize, max_prime: u32) -> Self {
        let block = limit.restriction.direct_sum(&IntMatrix::identity(l));
        let mod_p_ranks = primes_up_to(max_prime)
            .into_iter()
            .map(|p| {
                let rank = if block.rows() == 0 {
                    0
                } else {
                    eventual_rank_mod(&block, p)
                };
                (p, rank)
            })
            .collect();
        InvariantTuple {
            total_rank: limit.rank + l,
            mod_p_ranks,
            // A free summand is never p-divisible, so only l = 0 inherits B's primes.
            divisible_primes: if l == 0 {
                limit.divisible_primes.clone()
            } else {
                Vec::new()
            },
        }
    }

    /// Name of the first differing field, if any.
    pub fn first_difference(&self, other: &InvariantTuple) -> Option<&'static str> {
        if self.total_rank != other.total_rank {
            Some("total_rank")
        } else if self.mod_p_ranks != other.mod_p_ranks {
            Some("mod_p_ranks")
        } else if self.divisible_primes != other.divisible_primes {
            Some("divisible_primes")
        } else {
            None
        }
    }
}

impl fmt::Display for InvariantTuple {
    /// `rank 2; mod-p ranks 2:1 3:2 ...; divisible {2}`, with runs of primes
    /// sharing the generic rank folded into `others:r`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rank {}; mod-p", self.total_rank)?;
        let generic = self.mod_p_ranks.last().map(|&(_, r)| r);
        let mut any = false;
        for &(p, r) in &self.mod_p_ranks {
            if Some(r) != generic {
                write!(f, " {p}:{r}")?;
                any = true;
            }
        }
        if let Some(g) = generic {
            write!(f, " {}:{g}", if any { "others" } else { "all" })?;
        }
        let primes: Vec<String> = self.divisible_primes.iter().map(u32::to_string).collect();
        write!(f, "; divisible {{{}}}", primes.join(","))
    }
}

#[derive(Debug, Clone)]
pub struct CohomologyResult {
    pub substitution: Substitution,
    pub matrix: IntMatrix,
    pub primitivity: Primitivity,
    pub periodicity: Periodicity,
    pub perron: PerronData,
    pub pairs: Vec<(Letter, Letter)>,
    pub complex: TransitionComplex,
    pub dynamics: EdgeDynamics,
    pub decomposition: ComponentDecomposition,
    pub dropped_component: usize,
    pub basis_change: BasisChange,
    pub limit: DirectLimit,
    pub pretty: String,
    pub checks: Vec<Check>,
    pub timings: Vec<(&'static str, Duration)>,
    max_prime: u32,
}

impl CohomologyResult {
    pub fn p(&self) -> usize {
        self.decomposition.p()
    }

    pub fn k(&self) -> usize {
        self.decomposition.k()
    }

    pub fn l(&self) -> usize {
        self.decomposition.l()
    }

    /// The quotient `G ≅ Z^(k−1)`, display only.
    pub fn quotient_group(&self) -> String {
        free_group(self.k() - 1)
    }

    pub fn invariant_tuple(&self) -> InvariantTuple {
        InvariantTuple::new(&self.limit, self.l(), self.max_prime)
    }

    pub fn max_prime(&self) -> u32 {
        self.max_prime
    }
}

/// Renders `lim→ A₁ ⊕ Z^l`, folding free summands together.
pub fn render_group(limit: &DirectLimit, l: usize) -> String {
    let free_limit = limit.rank == 0 || limit.det.magnitude() == &num_bigint::BigUint::from(1u8);
    if free_limit {
        free_group(limit.rank + l)
    } else if l == 0 {
        limit.pretty.clone()
    } else {
        format!("{} ⊕ {}", limit.pretty, free_group(l))
    }
}

struct Stopwatch {
    last: Instant,
    laps: Vec<(&'static str, Duration)>,
}

impl Stopwatch {
    fn new() -> Self {
        Stopwatch {
            last: Instant::now(),
            laps: Vec::new(),
        }
    }

    fn lap(&mut self, stage: &'static str) {
        let now = Instant::now();
        self.laps.push((stage, now - self.last));
        self.last = now;
    }
}

/// Runs the full computation with guards and internal cross-checks.
pub fn compute_cohomology(s: &Substitution, options: &Options) -> Result<CohomologyResult> {
    let mut clock = Stopwatch::new();
    let d = s.alphabet_size();
    let matrix = s.transition_matrix();

    let primitivity = s.primitivity();
    if !primitivity.primitive {
        return Err(Error::NotPrimitive {
            bound: primitivity.bound,
        });
    }
    let periodicity = s.periodicity_check(options.horizon);
    if let Periodicity::Periodic {
        witness,
        complexity,
    } = periodicity
    {
        return Err(Error::Periodic {
            witness,
            complexity,
        });
    }
    clock.lap("guards");

    let perron = perron_data(&matrix)?;
    clock.lap("perron");

    let pairs = s.allowed_factors(2).pairs();
    let complex = TransitionComplex::build(d, pairs.iter().copied())?;
    let dynamics = EdgeDynamics::compute(s, &complex)?;
    let decomposition = ComponentDecomposition::new(&complex, &dynamics.range.edges);
    clock.lap("complex");

    let p = decomposition.p();
    let dropped = options.dropped_component.unwrap_or(0);
    if dropped >= p {
        return Err(Error::InvalidBasis(format!(
            "dropped component {dropped} out of range for {p} component(s)"
        )));
    }
    let w = w_vectors(&decomposition.s, d, dropped);
    let basis = match &options.basis {
        Some(b) => {
            validate_basis(b, &w, d)?;
            b.clone()
        }
        None => complete_basis(&w, d)?,
    };
    let at = matrix.transpose();
    let basis_change = conjugate_and_extract(&at, &basis, w.len())?;
    clock.lap("basis");

    let limit = DirectLimit::of(&basis_change.a1, options.max_prime)?;
    let l = decomposition.l();
    let pretty = render_group(&limit, l);
    clock.lap("limit");

    let mut checks = Vec::new();

    let er = &dynamics.range.edges;
    checks.push(Check {
        name: "g-bijective-on-ER",
        passed: dynamics.map.is_bijection_on(er),
        detail: format!("{} edge(s) in ER", er.len()),
    });

    let mut sum = vec![BigInt::zero(); d];
    for c in &decomposition.s.components {
        for (acc, x) in sum.iter_mut().zip(component_vector(c, d)) {
            *acc += x;
        }
    }
    checks.push(Check {
        name: "augmentation",
        passed: sum.iter().all(Zero::is_zero),
        detail: "component vectors sum to zero".into(),
    });

    checks.push(Check {
        name: "block-form",
        passed: basis_change.a1.rows() == d - p + 1,
        detail: format!(
            "A1 is {}x{}",
            basis_change.a1.rows(),
            basis_change.a1.cols()
        ),
    });

    let k = decomposition.k();
    checks.push(Check {
        name: "er-within-s",
        passed: k >= 1
            && k <= p
            && decomposition.er.components.iter().all(|c| {
                let host = decomposition.s.component_of(c.nodes[0]);
                c.nodes
                    .iter()
                    .all(|&n| decomposition.s.component_of(n) == host)
            }),
        detail: format!("k = {k}, p = {p}"),
    });

    if p == 1 && decomposition.b1_s() == 0 {
        let whole = DirectLimit::of(&at, options.max_prime)?;
        let direct = InvariantTuple::new(&whole, 0, options.max_prime);
        let ours = InvariantTuple::new(&limit, l, options.max_prime);
        checks.push(Check {
            name: "acyclic-S",
            passed: l == 0 && direct == ours,
            detail: "S connected and acyclic: result equals lim→ Aᵗ".into(),
        });
    }
    clock.lap("checks");

    if let Some(bad) = checks.iter().find(|c| !c.passed) {
        return Err(Error::Invariant(format!(
            "check `{}` failed ({})",
            bad.name, bad.detail
        )));
    }

    Ok(CohomologyResult {
        substitution: s.clone(),
        matrix,
        primitivity,
        periodicity,
        perron,
        pairs,
        complex,
        dynamics,
        decomposition,
        dropped_component: dropped,
        basis_change,
        limit,
        pretty,
        checks,
        timings: clock.laps,
        max_prime: options.max_prime,
    })
}

fn validate_basis(basis: &IntMatrix, w: &[Vec<BigInt>], d: usize) -> Result<()> {
    if basis.rows() != d || basis.cols() != d {
        return Err(Error::InvalidBasis(format!(
            "expected a {d}x{d} matrix, got {}x{}",
            basis.rows(),
            basis.cols()
        )));
    }
    if !crate::lattice::is_unimodular(basis) {
        return Err(Error::InvalidBasis("matrix is not unimodular".into()));
    }
    for (j, v) in w.iter().enumerate() {
        if &basis.column(j) != v {
            let shown: Vec<String> = v.iter().map(BigInt::to_string).collect();
            return Err(Error::InvalidBasis(format!(
                "column {} must equal the component vector ({})",
                j + 1,
                shown.join(", ")
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub power: usize,
    pub collar: bool,
    pub pipeline: Options,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            power: 2,
            collar: true,
            pipeline: Options::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteEntry {
    pub label: String,
    pub alphabet_size: usize,
    pub pretty: String,
    pub l: usize,
    pub tuple: InvariantTuple,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct InvarianceReport {
    pub entries: Vec<SuiteEntry>,
}

fn suite_entry(label: String, s: &Substitution, options: &Options) -> Result<SuiteEntry> {
    let start = Instant::now();
    let res = compute_cohomology(s, options)?;
    Ok(SuiteEntry {
        label,
        alphabet_size: s.alphabet_size(),
        pretty: res.pretty.clone(),
        l: res.l(),
        tuple: res.invariant_tuple(),
        elapsed: start.elapsed(),
    })
}

/// Compares the invariant tuples of `φ`, `φⁿ` and the collared substitution.
///
/// A mismatch is reported as [`Error::InvarianceViolation`]; all three
/// presentations describe the same tiling space.
pub fn invariance_suite(s: &Substitution, options: &SuiteOptions) -> Result<InvarianceReport> {
    // an explicit basis belongs to one presentation only
    let base = Options {
        basis: None,
        dropped_component: None,
        ..options.pipeline.clone()
    };
    let original = suite_entry("φ".to_string(), s, &options.pipeline)?;

    let (powered, collared) = thread::scope(|scope| {
        let powered = scope.spawn(|| {
            let label = format!("φ^{}", options.power);
            suite_entry(label, &s.power(options.power), &base)
        });
        let collared = options.collar.then(|| {
            scope.spawn(|| {
                let c = s.collar()?;
                suite_entry("collar(φ)".to_string(), &c.substitution, &base)
            })
        });
        (
            powered.join().expect("power branch panicked"),
            collared.map(|h| h.join().expect("collar branch panicked")),
        )
    });
    let mut entries = vec![original, powered?];
    if let Some(c) = collared {
        entries.push(c?);
    }

    let reference = &entries[0];
    for other in &entries[1..] {
        if let Some(field) = reference.tuple.first_difference(&other.tuple) {
            return Err(Error::InvarianceViolation {
                field,
                left: format!("{}: {}", reference.label, reference.tuple),
                right: format!("{}: {}", other.label, other.tuple),
            });
        }
    }
    Ok(InvarianceReport { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::parse::parse_substitution;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn fibonacci_result() {
        let res = compute_cohomology(&fixtures::fibonacci(), &Options::default()).unwrap();
        assert_eq!(res.pretty, "Z^2");
        assert_eq!((res.p(), res.k(), res.l()), (1, 1, 0));
        assert!(res.basis_change.w_vectors().is_empty());
        assert_eq!(res.basis_change.a1, IntMatrix::from_rows([[1, 1], [1, 0]]));
        assert!(res.checks.iter().any(|c| c.name == "acyclic-S" && c.passed));
    }

    #[test]
    fn thue_morse_result() {
        let res = compute_cohomology(&fixtures::thue_morse(), &Options::default()).unwrap();
        assert_eq!(res.limit.pretty, "Z[1/2]");
        assert_eq!(res.pretty, "Z[1/2] ⊕ Z");
        assert_eq!(res.l(), 1);
    }

    #[test]
    fn disconnected_result() {
        let res = compute_cohomology(&fixtures::disconnected(), &Options::default()).unwrap();
        assert_eq!(res.basis_change.w_vectors(), vec![v(&[0, 0, 1, -1])]);
        assert_eq!(res.l(), 0);
        assert_eq!(res.limit.rank, 3);
        assert_eq!(res.limit.det, BigInt::from(4));
        assert_eq!(res.basis_change.a1.rows(), 3);
    }

    #[test]
    fn dropping_the_other_component_negates_w() {
        let opts = Options {
            dropped_component: Some(1),
            ..Options::default()
        };
        let res = compute_cohomology(&fixtures::disconnected(), &opts).unwrap();
        assert_eq!(res.basis_change.w_vectors(), vec![v(&[0, 0, -1, 1])]);
        let canonical = compute_cohomology(&fixtures::disconnected(), &Options::default()).unwrap();
        assert_eq!(res.invariant_tuple(), canonical.invariant_tuple());
    }

    #[test]
    fn injected_basis_is_validated() {
        let bad = Options {
            basis: Some(IntMatrix::identity(4)),
            ..Options::default()
        };
        assert!(matches!(
            compute_cohomology(&fixtures::disconnected(), &bad),
            Err(Error::InvalidBasis(_))
        ));
    }

    #[test]
    fn guards() {
        let split = parse_substitution("1 -> 1 1; 2 -> 2 2").unwrap();
        assert!(matches!(
            compute_cohomology(&split, &Options::default()),
            Err(Error::NotPrimitive { .. })
        ));
        let periodic = parse_substitution("1 -> 1 2; 2 -> 1 2").unwrap();
        assert!(matches!(
            compute_cohomology(&periodic, &Options::default()),
            Err(Error::Periodic {
                witness: 2,
                complexity: 2
            })
        ));
    }

    #[test]
    fn tuples_of_fixtures() {
        let fib = compute_cohomology(&fixtures::fibonacci(), &Options::default())
            .unwrap()
            .invariant_tuple();
        assert_eq!(fib.total_rank, 2);
        assert_eq!(fib.mod_p_ranks.len(), 25);
        assert!(fib.mod_p_ranks.iter().all(|&(_, r)| r == 2));

        let tm_result = compute_cohomology(&fixtures::thue_morse(), &Options::default()).unwrap();
        assert_eq!(tm_result.limit.divisible_primes, vec![2]);
        let tm = tm_result.invariant_tuple();
        assert_eq!(tm.total_rank, 2);
        assert_eq!(tm.mod_p_ranks[0], (2, 1));
        assert!(tm.mod_p_ranks[1..].iter().all(|&(_, r)| r == 2));
        assert!(tm.divisible_primes.is_empty());
    }

    #[test]
    fn collaring_moves_free_summand_into_limit() {
        let collared = fixtures::thue_morse().collar().unwrap().substitution;
        let r = compute_cohomology(&collared, &Options::default()).unwrap();
        let plain = compute_cohomology(&fixtures::thue_morse(), &Options::default()).unwrap();
        assert_eq!((r.l(), r.limit.rank), (0, 2));
        assert_eq!(r.limit.det, BigInt::from(-2));
        assert!(r.limit.divisible_primes.is_empty());
        assert_eq!(r.invariant_tuple(), plain.invariant_tuple());
    }

    #[test]
    fn empty_limit_tuple() {
        let lim = DirectLimit::of(&IntMatrix::from_rows([[0]]), 97).unwrap();
        let t = InvariantTuple::new(&lim, 0, 97);
        assert_eq!(t.total_rank, 0);
        assert!(t.mod_p_ranks.iter().all(|&(_, r)| r == 0));
    }

    #[test]
    fn render_folds_free_parts() {
        let free = DirectLimit::of(&IntMatrix::from_rows([[1, 1], [1, 0]]), 97).unwrap();
        assert_eq!(render_group(&free, 0), "Z^2");
        assert_eq!(render_group(&free, 1), "Z^3");
        let zero = DirectLimit::of(&IntMatrix::from_rows([[0]]), 97).unwrap();
        assert_eq!(render_group(&zero, 0), "0");
        assert_eq!(render_group(&zero, 1), "Z");
    }

    #[test]
    fn suite_on_fixtures() {
        for s in fixtures::all() {
            let report = invariance_suite(&s, &SuiteOptions::default()).unwrap();
            assert_eq!(report.entries.len(), 3);
        }
    }
}
