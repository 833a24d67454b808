//! JSON report. Every integer is written as a decimal string so that
//! consumers limited to 64-bit numbers never lose precision.

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use tilecoh_core::complex::{EdgeId, Node, TransitionComplex};
use tilecoh_core::lattice::IntMatrix;
use tilecoh_core::substitution::Periodicity;
use tilecoh_core::{CohomologyResult, Error, Substitution};

#[derive(Debug, Clone, Serialize)]
pub struct Input {
    pub name: Option<String>,
    /// Canonical rendering of the rules, independent of source formatting.
    pub text: String,
}

impl Input {
    pub fn of(s: &Substitution) -> Self {
        Input {
            name: s.name().map(str::to_string),
            text: s.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Primitive {
    pub flag: bool,
    pub witness_power: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PeriodicitySection {
    pub verdict: &'static str,
    pub horizon: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Perron {
    pub lambda: f64,
    pub omega: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Edge {
    pub label: String,
    pub from: String,
    pub to: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentEntry {
    pub edges: Vec<String>,
    pub nodes: Vec<String>,
    pub b1: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Complex {
    pub nodes: Vec<String>,
    pub edges: Vec<Edge>,
    pub components: Vec<ComponentEntry>,
    pub b1: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct GImage {
    pub edge: String,
    pub image: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct EventualRange {
    pub edges: Vec<String>,
    pub k: String,
    pub l: String,
    pub cycles: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Limit {
    pub rank: String,
    pub det: String,
    pub charpoly: Vec<String>,
    pub divisible_primes: Vec<String>,
    pub pretty: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct H1 {
    pub pretty: String,
    pub k: String,
    #[serde(rename = "G")]
    pub g: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Stage timings in microseconds, kept in pipeline order.
#[derive(Debug, Clone, Default)]
pub struct Timings(pub Vec<(String, String)>);

impl Serialize for Timings {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub input: Input,
    pub alphabet: Vec<String>,
    pub matrix: Vec<Vec<String>>,
    pub primitive: Primitive,
    pub periodicity: PeriodicitySection,
    pub perron: Perron,
    pub allowed_pairs: Vec<String>,
    #[serde(rename = "S")]
    pub s: Complex,
    pub g_map: Vec<GImage>,
    #[serde(rename = "ER")]
    pub er: EventualRange,
    pub p: String,
    pub w_vectors: Vec<Vec<String>>,
    #[serde(rename = "P")]
    pub basis: Vec<Vec<String>>,
    pub conjugate: Vec<Vec<String>>,
    #[serde(rename = "A1")]
    pub a1: Vec<Vec<String>>,
    pub direct_limit: Limit,
    #[serde(rename = "H1")]
    pub h1: H1,
    pub checks: Vec<CheckEntry>,
    pub timings: Timings,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorEntry {
    pub kind: &'static str,
    pub message: String,
}

/// A batch item whose computation failed.
#[derive(Debug, Clone, Serialize)]
pub struct FailedReport {
    pub input: Input,
    pub error: ErrorEntry,
}

impl FailedReport {
    pub fn new(s: &Substitution, err: &Error) -> Self {
        FailedReport {
            input: Input::of(s),
            error: ErrorEntry {
                kind: err.tag(),
                message: err.to_string(),
            },
        }
    }
}

/// Names edges and nodes of `S` using the substitution's own symbols.
#[derive(Debug, Clone, Copy)]
pub struct Labels<'a> {
    symbols: &'a [String],
    compact: bool,
}

impl<'a> Labels<'a> {
    pub fn new(s: &'a Substitution) -> Self {
        let symbols = s.symbols();
        Labels {
            symbols,
            compact: symbols.iter().all(|x| x.chars().count() == 1),
        }
    }

    /// `e12` for one-character symbols, `e(ab,c)` otherwise.
    pub fn pair(&self, (a, b): (usize, usize)) -> String {
        if self.compact {
            format!("e{}{}", self.symbols[a], self.symbols[b])
        } else {
            format!("e({},{})", self.symbols[a], self.symbols[b])
        }
    }

    pub fn edge(&self, complex: &TransitionComplex, e: EdgeId) -> String {
        self.pair(complex.edge(e))
    }

    pub fn node(&self, node: Node) -> String {
        match node {
            Node::Exit(a) => format!("x_{}", self.symbols[a]),
            Node::Entry(a) => format!("n_{}", self.symbols[a]),
        }
    }

    pub fn word(&self, (a, b): (usize, usize)) -> String {
        if self.compact {
            format!("{}{}", self.symbols[a], self.symbols[b])
        } else {
            format!("{} {}", self.symbols[a], self.symbols[b])
        }
    }
}

pub fn matrix_strings(m: &IntMatrix) -> Vec<Vec<String>> {
    m.to_rows()
        .into_iter()
        .map(|row| row.iter().map(ToString::to_string).collect())
        .collect()
}

fn strings<T: ToString>(items: impl IntoIterator<Item = T>) -> Vec<String> {
    items.into_iter().map(|x| x.to_string()).collect()
}

impl Report {
    /// Builds the report; timings are included only when `with_timings` is set,
    /// which keeps the default output byte-stable.
    pub fn new(res: &CohomologyResult, with_timings: bool) -> Self {
        let labels = Labels::new(&res.substitution);
        let complex = &res.complex;
        let edge = |e: EdgeId| labels.edge(complex, e);
        let decomposition = &res.decomposition;

        let s = Complex {
            nodes: complex
                .nodes()
                .into_iter()
                .map(|n| labels.node(n))
                .collect(),
            edges: (0..complex.edges().len())
                .map(|e| {
                    let (from, to) = complex.endpoints(e);
                    Edge {
                        label: edge(e),
                        from: labels.node(from),
                        to: labels.node(to),
                    }
                })
                .collect(),
            components: decomposition
                .s
                .components
                .iter()
                .map(|c| ComponentEntry {
                    edges: c.edges.iter().map(|&e| edge(e)).collect(),
                    nodes: c.nodes.iter().map(|&n| labels.node(n)).collect(),
                    b1: c.betti().to_string(),
                })
                .collect(),
            b1: decomposition.b1_s().to_string(),
        };

        let range = &res.dynamics.range;
        let limit = &res.limit;
        let bc = &res.basis_change;

        Report {
            input: Input::of(&res.substitution),
            alphabet: res.substitution.symbols().to_vec(),
            matrix: matrix_strings(&res.matrix),
            primitive: Primitive {
                flag: res.primitivity.primitive,
                witness_power: res.primitivity.witness_power.map(|n| n.to_string()),
            },
            periodicity: match res.periodicity {
                Periodicity::Periodic { witness, .. } => PeriodicitySection {
                    verdict: "periodic",
                    horizon: witness.to_string(),
                },
                Periodicity::NoPeriodDetected { horizon } => PeriodicitySection {
                    verdict: "no-period-detected",
                    horizon: horizon.to_string(),
                },
            },
            perron: Perron {
                lambda: res.perron.lambda,
                omega: res.perron.omega.clone(),
            },
            allowed_pairs: res.pairs.iter().map(|&p| labels.word(p)).collect(),
            s,
            g_map: res
                .dynamics
                .map
                .images()
                .iter()
                .enumerate()
                .map(|(e, &img)| GImage {
                    edge: edge(e),
                    image: edge(img),
                })
                .collect(),
            er: EventualRange {
                edges: range.edges.iter().map(|&e| edge(e)).collect(),
                k: res.k().to_string(),
                l: res.l().to_string(),
                cycles: range
                    .cycles
                    .iter()
                    .map(|c| c.iter().map(|&e| edge(e)).collect())
                    .collect(),
            },
            p: res.p().to_string(),
            w_vectors: bc.w_vectors().iter().map(strings).collect(),
            basis: matrix_strings(&bc.basis),
            conjugate: matrix_strings(&bc.conjugate),
            a1: matrix_strings(&bc.a1),
            direct_limit: Limit {
                rank: limit.rank.to_string(),
                det: limit.det.to_string(),
                charpoly: strings(&limit.charpoly),
                divisible_primes: strings(&limit.divisible_primes),
                pretty: limit.pretty.clone(),
            },
            h1: H1 {
                pretty: res.pretty.clone(),
                k: res.k().to_string(),
                g: res.quotient_group(),
            },
            checks: res
                .checks
                .iter()
                .map(|c| CheckEntry {
                    name: c.name.to_string(),
                    passed: c.passed,
                    detail: c.detail.clone(),
                })
                .collect(),
            timings: if with_timings {
                Timings(
                    res.timings
                        .iter()
                        .map(|(stage, d)| (stage.to_string(), d.as_micros().to_string()))
                        .collect(),
                )
            } else {
                Timings::default()
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tilecoh_core::fixtures;
    use tilecoh_core::{compute_cohomology, Options};

    #[test]
    fn fibonacci_report_fields() {
        let res = compute_cohomology(&fixtures::fibonacci(), &Options::default()).unwrap();
        let r = Report::new(&res, false);
        assert_eq!(r.allowed_pairs, ["11", "12", "21"]);
        assert_eq!(r.er.edges, ["e11", "e21"]);
        assert_eq!(r.h1.pretty, "Z^2");
        assert_eq!(r.h1.g, "0");
        assert_eq!(r.matrix, [["1", "1"], ["1", "0"]]);
        assert!(r.timings.0.is_empty());

        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        let mut expected = vec![
            "input",
            "alphabet",
            "matrix",
            "primitive",
            "periodicity",
            "perron",
            "allowed_pairs",
            "S",
            "g_map",
            "ER",
            "p",
            "w_vectors",
            "P",
            "conjugate",
            "A1",
            "direct_limit",
            "H1",
            "checks",
            "timings",
        ];
        let mut keys_sorted = keys.clone();
        keys_sorted.sort_unstable();
        expected.sort_unstable();
        assert_eq!(keys_sorted, expected);
    }

    #[test]
    fn long_symbols_get_separated_labels() {
        let collared = fixtures::fibonacci().collar().unwrap().substitution;
        let labels = Labels::new(&collared);
        assert_eq!(labels.pair((0, 1)), "e(1.1.2,1.2.1)");
        assert_eq!(labels.node(Node::Entry(0)), "n_1.1.2");
    }

    #[test]
    fn failed_report_carries_tag() {
        let per = tilecoh_core::parse_substitution("1 -> 1 2; 2 -> 1 2").unwrap();
        let err = compute_cohomology(&per, &Options::default()).unwrap_err();
        let f = FailedReport::new(&per, &err);
        assert_eq!(f.error.kind, "periodic");
    }
}
