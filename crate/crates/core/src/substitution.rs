//! Substitutions on a finite alphabet and their combinatorial invariants.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use rustc_hash::FxHashSet;

use crate::error::{Error, ParseError, Result};
use crate::lattice::IntMatrix;

/// Letters are indices into the alphabet, in first-appearance order.
pub type Letter = usize;

pub const DEFAULT_HORIZON: usize = 64;

/// A substitution `φ: A → A⁺` with `|A| ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Substitution {
    name: Option<String>,
    symbols: Vec<String>,
    images: Vec<Vec<Letter>>,
}

impl Substitution {
    /// Validating constructor.
    pub fn new(
        name: Option<String>,
        symbols: Vec<String>,
        images: Vec<Vec<Letter>>,
    ) -> Result<Self> {
        let d = symbols.len();
        if d < 2 {
            return Err(ParseError::AlphabetTooSmall { size: d }.into());
        }
        if images.len() != d {
            return Err(Error::InvalidSubstitution(format!(
                "{d} letters but {} images",
                images.len()
            )));
        }
        if let Some(a) = images.iter().position(Vec::is_empty) {
            return Err(Error::InvalidSubstitution(format!(
                "empty image for `{}`",
                symbols[a]
            )));
        }
        if images.iter().flatten().any(|&b| b >= d) {
            return Err(Error::InvalidSubstitution(
                "image letter outside the alphabet".into(),
            ));
        }
        Ok(Self::from_parts(name, symbols, images))
    }

    pub(crate) fn from_parts(
        name: Option<String>,
        symbols: Vec<String>,
        images: Vec<Vec<Letter>>,
    ) -> Self {
        debug_assert!(symbols.len() >= 2 && images.len() == symbols.len());
        Substitution {
            name,
            symbols,
            images,
        }
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn alphabet_size(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, a: Letter) -> &str {
        &self.symbols[a]
    }

    pub fn image(&self, a: Letter) -> &[Letter] {
        &self.images[a]
    }

    pub fn images(&self) -> &[Vec<Letter>] {
        &self.images
    }

    /// `φ(w)` for a finite word.
    pub fn apply(&self, word: &[Letter]) -> Vec<Letter> {
        word.iter()
            .flat_map(|&a| self.images[a].iter().copied())
            .collect()
    }

    /// Space-separated symbols of a word.
    pub fn render_word(&self, word: &[Letter]) -> String {
        let parts: Vec<&str> = word.iter().map(|&a| self.symbol(a)).collect();
        parts.join(" ")
    }

    /// Concatenated symbols, e.g. `12` for the pair `(1, 2)`.
    pub fn render_compact(&self, word: &[Letter]) -> String {
        word.iter().map(|&a| self.symbol(a)).collect()
    }

    /// One-line form `a -> a b; b -> a`, without the name.
    pub fn rules_inline(&self) -> String {
        let rules: Vec<String> = (0..self.alphabet_size())
            .map(|a| format!("{} -> {}", self.symbol(a), self.render_word(self.image(a))))
            .collect();
        rules.join("; ")
    }

    /// Entry `(i, j)` counts occurrences of letter `i` in `φ(j)`.
    pub fn transition_matrix(&self) -> IntMatrix {
        let d = self.alphabet_size();
        let mut m = IntMatrix::zeros(d, d);
        for (j, image) in self.images.iter().enumerate() {
            for &i in image {
                m[(i, j)] += BigInt::from(1);
            }
        }
        m
    }

    /// Primitivity via boolean powers of the transition matrix, up to the
    /// Wielandt bound `d² − 2d + 2`.
    pub fn primitivity(&self) -> Primitivity {
        let d = self.alphabet_size();
        let bound = d * d - 2 * d + 2;
        let mut adj = vec![vec![false; d]; d];
        for (j, image) in self.images.iter().enumerate() {
            for &i in image {
                adj[i][j] = true;
            }
        }
        let mut power = adj.clone();
        for n in 1..=bound {
            if power.iter().flatten().all(|&x| x) {
                return Primitivity {
                    primitive: true,
                    witness_power: Some(n),
                    bound,
                };
            }
            power = bool_product(&power, &adj);
        }
        Primitivity {
            primitive: false,
            witness_power: None,
            bound,
        }
    }

    /// Allowed words of length at most `n`.
    ///
    /// Least fixed point of `F ← F ∪ {factors of φ(w) of length ≤ n : w ∈ F}`
    /// seeded with the letters. Only maximal windows of each image are queued;
    /// every shorter factor is a factor of some window.
    pub fn allowed_factors(&self, n: usize) -> LanguageSlice {
        assert!(n >= 1, "word length bound must be positive");
        let mut seen: FxHashSet<Vec<Letter>> = FxHashSet::default();
        let mut queue: VecDeque<Vec<Letter>> = VecDeque::new();
        for a in 0..self.alphabet_size() {
            let w = vec![a];
            if seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
        while let Some(w) = queue.pop_front() {
            let img = self.apply(&w);
            let len = n.min(img.len());
            for window in img.windows(len) {
                if !seen.contains(window) {
                    seen.insert(window.to_vec());
                    queue.push_back(window.to_vec());
                }
            }
        }

        let mut by_len: Vec<BTreeSet<Vec<Letter>>> = vec![BTreeSet::new(); n + 1];
        for w in seen {
            by_len[w.len()].insert(w);
        }
        // the length-k factors are the prefixes and suffixes of length-(k+1) factors
        for k in (1..n).rev() {
            let (lower, upper) = by_len.split_at_mut(k + 1);
            let level = &mut lower[k];
            for w in &upper[0] {
                for part in [&w[..k], &w[1..]] {
                    if !level.contains(part) {
                        level.insert(part.to_vec());
                    }
                }
            }
        }
        LanguageSlice { max_len: n, by_len }
    }

    /// Screens for shift-periodicity with the Morse–Hedlund criterion: a
    /// minimal subshift with `p(n) ≤ n` for some `n` is periodic.
    pub fn periodicity_check(&self, horizon: usize) -> Periodicity {
        let lang = self.allowed_factors(horizon.max(1));
        for n in 1..=horizon {
            let p = lang.complexity(n);
            if p <= n {
                return Periodicity::Periodic {
                    witness: n,
                    complexity: p,
                };
            }
        }
        Periodicity::NoPeriodDetected { horizon }
    }

    /// `φⁿ` for `n ≥ 1`.
    pub fn power(&self, n: usize) -> Substitution {
        assert!(n >= 1, "substitution power must be at least 1");
        if n == 1 {
            return self.clone();
        }
        let mut images = self.images.clone();
        for _ in 1..n {
            images = images.iter().map(|w| self.apply(w)).collect();
        }
        Substitution {
            name: self.name.as_ref().map(|s| format!("{s}^{n}")),
            symbols: self.symbols.clone(),
            images,
        }
    }

    /// One-step collaring: tiles labelled by their left and right neighbours.
    ///
    /// The collared alphabet is the set of allowed 3-words `abc`, sorted; the
    /// image of `(a, b, c)` reads `φ(b)` letter by letter, taking the outer
    /// neighbours from the last letter of `φ(a)` and the first of `φ(c)`.
    pub fn collar(&self) -> Result<Collared> {
        let triples: Vec<[Letter; 3]> = self
            .allowed_factors(3)
            .words_of_length(3)
            .map(|w| [w[0], w[1], w[2]])
            .collect();
        let index: HashMap<[Letter; 3], usize> =
            triples.iter().enumerate().map(|(i, t)| (*t, i)).collect();
        let mut images = Vec::with_capacity(triples.len());
        for &[a, b, c] in &triples {
            let body = self.image(b);
            let k = body.len();
            let mut image = Vec::with_capacity(k);
            for i in 0..k {
                let left = if i == 0 {
                    *self.image(a).last().expect("nonempty image")
                } else {
                    body[i - 1]
                };
                let right = if i + 1 == k {
                    self.image(c)[0]
                } else {
                    body[i + 1]
                };
                let t = [left, body[i], right];
                let Some(&idx) = index.get(&t) else {
                    return Err(Error::Invariant(format!(
                        "collared image of {} contains the disallowed word {}",
                        self.render_compact(&[a, b, c]),
                        self.render_compact(&t)
                    )));
                };
                image.push(idx);
            }
            images.push(image);
        }
        let symbols = triples
            .iter()
            .map(|t| {
                t.iter()
                    .map(|&x| self.symbol(x))
                    .collect::<Vec<_>>()
                    .join(".")
            })
            .collect();
        let collared = Substitution::new(
            self.name.as_ref().map(|s| format!("collar({s})")),
            symbols,
            images,
        )?;
        if !collared.primitivity().primitive {
            return Err(Error::Invariant(
                "collared substitution is not primitive".into(),
            ));
        }
        Ok(Collared {
            substitution: collared,
            legend: triples,
        })
    }
}

fn bool_product(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = a.len();
    let mut out = vec![vec![false; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] {
                for j in 0..n {
                    out[i][j] |= b[k][j];
                }
            }
        }
    }
    out
}

impl fmt::Display for Substitution {
    /// Canonical source text, accepted back by the parser.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(name) = &self.name {
            writeln!(f, "name = {name}")?;
        }
        for a in 0..self.alphabet_size() {
            writeln!(
                f,
                "{} -> {}",
                self.symbol(a),
                self.render_word(self.image(a))
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Primitivity {
    pub primitive: bool,
    /// Least `n` with `Aⁿ > 0`.
    pub witness_power: Option<usize>,
    pub bound: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Periodicity {
    Periodic {
        witness: usize,
        complexity: usize,
    },
    /// No word length up to `horizon` has `p(n) ≤ n`. Not a proof of aperiodicity.
    NoPeriodDetected {
        horizon: usize,
    },
}

impl Periodicity {
    pub fn is_periodic(&self) -> bool {
        matches!(self, Periodicity::Periodic { .. })
    }
}

/// Allowed words of length `1..=max_len`, grouped by length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageSlice {
    max_len: usize,
    by_len: Vec<BTreeSet<Vec<Letter>>>,
}

impl LanguageSlice {
    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn contains(&self, word: &[Letter]) -> bool {
        self.by_len
            .get(word.len())
            .is_some_and(|set| set.contains(word))
    }

    /// `p(n)`, the number of allowed words of length `n`.
    pub fn complexity(&self, n: usize) -> usize {
        self.by_len.get(n).map_or(0, BTreeSet::len)
    }

    pub fn words_of_length(&self, n: usize) -> impl Iterator<Item = &Vec<Letter>> {
        self.by_len.get(n).into_iter().flatten()
    }

    pub fn words(&self) -> impl Iterator<Item = &Vec<Letter>> {
        self.by_len.iter().flatten()
    }

    pub fn pairs(&self) -> Vec<(Letter, Letter)> {
        self.words_of_length(2).map(|w| (w[0], w[1])).collect()
    }
}

/// Result of [`Substitution::collar`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collared {
    pub substitution: Substitution,
    /// Collared letter `i` stands for `(left, center, right)`.
    pub legend: Vec<[Letter; 3]>,
}
