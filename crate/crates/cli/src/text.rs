//! Human-readable report, laid out in pipeline order.

use std::fmt::Write;

use num_bigint::{BigInt, Sign};
use tilecoh_core::lattice::IntMatrix;
use tilecoh_core::pipeline::SuiteEntry;
use tilecoh_core::substitution::Periodicity;
use tilecoh_core::CohomologyResult;

use crate::report::Labels;

/// ANSI styling, on only when the caller allows it.
#[derive(Debug, Clone, Copy, Default)]
pub struct Style {
    pub color: bool,
}

impl Style {
    fn wrap(&self, code: &str, s: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{s}\x1b[0m")
        } else {
            s.to_string()
        }
    }

    pub fn bold(&self, s: &str) -> String {
        self.wrap("1", s)
    }

    pub fn good(&self, s: &str) -> String {
        self.wrap("32", s)
    }

    pub fn bad(&self, s: &str) -> String {
        self.wrap("31", s)
    }
}

fn matrix_block(out: &mut String, m: &IntMatrix) {
    if m.rows() == 0 {
        writeln!(out, "  (empty)").unwrap();
        return;
    }
    let cells: Vec<Vec<String>> = m
        .to_rows()
        .iter()
        .map(|r| r.iter().map(ToString::to_string).collect())
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    for row in cells {
        let padded: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        writeln!(out, "  [{}]", padded.join(" ")).unwrap();
    }
}

/// `x^3 - 5x^2 + 7x - 4` from leading-first coefficients.
pub fn polynomial(coeffs: &[BigInt]) -> String {
    let degree = coeffs.len().saturating_sub(1);
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate() {
        if c.sign() == Sign::NoSign {
            continue;
        }
        let power = degree - i;
        let magnitude = c.magnitude().to_string();
        if out.is_empty() {
            if c.sign() == Sign::Minus {
                out.push('-');
            }
        } else {
            out.push_str(if c.sign() == Sign::Minus {
                " - "
            } else {
                " + "
            });
        }
        let coef = if magnitude == "1" && power > 0 {
            ""
        } else {
            magnitude.as_str()
        };
        out.push_str(coef);
        match power {
            0 => {}
            1 => out.push('x'),
            _ => write!(out, "x^{power}").unwrap(),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn vector(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

pub fn render(res: &CohomologyResult, style: Style, with_timings: bool) -> String {
    let s = &res.substitution;
    let labels = Labels::new(s);
    let complex = &res.complex;
    let edge = |e| labels.edge(complex, e);
    let mut out = String::new();

    let title = match s.name() {
        Some(name) => format!("substitution {name}"),
        None => "substitution".to_string(),
    };
    writeln!(out, "{}", style.bold(&title)).unwrap();
    for a in 0..s.alphabet_size() {
        writeln!(out, "  {} -> {}", s.symbol(a), s.render_word(s.image(a))).unwrap();
    }

    writeln!(out, "\n{}", style.bold("transition matrix A")).unwrap();
    matrix_block(&mut out, &res.matrix);
    match res.primitivity.witness_power {
        Some(n) => writeln!(out, "primitive: yes, A^{n} > 0").unwrap(),
        None => writeln!(out, "primitive: no").unwrap(),
    }
    match res.periodicity {
        Periodicity::NoPeriodDetected { horizon } => {
            writeln!(out, "periodicity: no period detected for n <= {horizon}").unwrap()
        }
        Periodicity::Periodic {
            witness,
            complexity,
        } => writeln!(out, "periodicity: p({witness}) = {complexity}").unwrap(),
    }
    let omega: Vec<String> = res
        .perron
        .omega
        .iter()
        .map(|x| format!("{x:.10}"))
        .collect();
    writeln!(
        out,
        "Perron eigenvalue {:.10}, eigenvector ({})",
        res.perron.lambda,
        omega.join(", ")
    )
    .unwrap();

    writeln!(out, "\n{}", style.bold("transition complex S")).unwrap();
    let words: Vec<String> = res.pairs.iter().map(|&p| labels.word(p)).collect();
    writeln!(out, "allowed pairs ({}): {}", words.len(), words.join(" ")).unwrap();
    let dec = &res.decomposition;
    writeln!(
        out,
        "{} nodes, {} edges, p = {}, b1 = {}",
        dec.s.node_count,
        dec.s.edge_count,
        res.p(),
        dec.b1_s()
    )
    .unwrap();
    for (i, c) in dec.s.components.iter().enumerate() {
        let edges: Vec<String> = c.edges.iter().map(|&e| edge(e)).collect();
        let marker = if res.p() > 1 && i == res.dropped_component {
            "  (dropped)"
        } else {
            ""
        };
        writeln!(out, "  C{}: {}{marker}", i + 1, edges.join(" ")).unwrap();
    }

    writeln!(out, "\n{}", style.bold("edge map g")).unwrap();
    let arrows: Vec<String> = res
        .dynamics
        .map
        .images()
        .iter()
        .enumerate()
        .map(|(e, &img)| format!("{} -> {}", edge(e), edge(img)))
        .collect();
    writeln!(out, "  {}", arrows.join(", ")).unwrap();
    let er: Vec<String> = res.dynamics.range.edges.iter().map(|&e| edge(e)).collect();
    writeln!(
        out,
        "ER: {}; k = {}, l = {}",
        er.join(" "),
        res.k(),
        res.l()
    )
    .unwrap();
    for (i, c) in dec.er.components.iter().enumerate() {
        let edges: Vec<String> = c.edges.iter().map(|&e| edge(e)).collect();
        writeln!(out, "  D{}: {}", i + 1, edges.join(" ")).unwrap();
    }
    let cycles: Vec<String> = res
        .dynamics
        .range
        .cycles
        .iter()
        .map(|c| {
            let names: Vec<String> = c.iter().map(|&e| edge(e)).collect();
            format!("({})", names.join(" "))
        })
        .collect();
    writeln!(out, "  g-cycles: {}", cycles.join(" ")).unwrap();

    let bc = &res.basis_change;
    writeln!(out, "\n{}", style.bold("basis change")).unwrap();
    let w = bc.w_vectors();
    if w.is_empty() {
        writeln!(out, "w vectors: none").unwrap();
    } else {
        let shown: Vec<String> = w.iter().map(|v| vector(v)).collect();
        writeln!(out, "w vectors: {}", shown.join(" ")).unwrap();
    }
    writeln!(out, "P").unwrap();
    matrix_block(&mut out, &bc.basis);
    writeln!(out, "P^-1 A^t P").unwrap();
    matrix_block(&mut out, &bc.conjugate);
    writeln!(out, "A1").unwrap();
    matrix_block(&mut out, &bc.a1);

    let limit = &res.limit;
    writeln!(out, "\n{}", style.bold("direct limit of A1")).unwrap();
    let primes: Vec<String> = limit.divisible_primes.iter().map(u32::to_string).collect();
    writeln!(
        out,
        "rank {}, det {}, charpoly {}, divisible by {}",
        limit.rank,
        limit.det,
        polynomial(&limit.charpoly),
        if primes.is_empty() {
            "none".to_string()
        } else {
            primes.join(", ")
        }
    )
    .unwrap();
    writeln!(out, "B").unwrap();
    matrix_block(&mut out, &limit.restriction);
    writeln!(out, "lim A1 = {}", limit.pretty).unwrap();

    writeln!(out, "\n{}", style.bold("checks")).unwrap();
    for c in &res.checks {
        let mark = if c.passed {
            style.good("ok")
        } else {
            style.bad("FAILED")
        };
        writeln!(out, "  {mark:<6} {}: {}", c.name, c.detail).unwrap();
    }
    writeln!(out, "G = {} (k = {})", res.quotient_group(), res.k()).unwrap();

    if with_timings {
        let parts: Vec<String> = res
            .timings
            .iter()
            .map(|(stage, d)| format!("{stage} {}us", d.as_micros()))
            .collect();
        writeln!(out, "timings: {}", parts.join(", ")).unwrap();
    }
    writeln!(out, "\n{}", style.bold(&format!("H^1 = {}", res.pretty))).unwrap();
    out
}

/// Table of invariant tuples from an invariance run.
pub fn suite_table(entries: &[SuiteEntry], style: Style) -> String {
    let label_w = entries
        .iter()
        .map(|e| e.label.chars().count())
        .max()
        .unwrap_or(0)
        .max(12);
    let pretty_w = entries
        .iter()
        .map(|e| e.pretty.chars().count())
        .max()
        .unwrap_or(0)
        .max(2);
    let mut out = String::new();
    let header = format!(
        "{:<label_w$}  {:>7}  {:<pretty_w$}  {:>2}  tuple",
        "presentation", "letters", "H1", "l"
    );
    writeln!(out, "{}", style.bold(&header)).unwrap();
    for e in entries {
        writeln!(
            out,
            "{:<label_w$}  {:>7}  {:<pretty_w$}  {:>2}  {}  ({} ms)",
            e.label,
            e.alphabet_size,
            e.pretty,
            e.l,
            e.tuple,
            e.elapsed.as_millis()
        )
        .unwrap();
    }
    writeln!(out, "{}", style.good("invariant tuples agree")).unwrap();
    out
}
