//! Reference substitutions with known cohomology.

use crate::parse::parse_substitution;
use crate::substitution::Substitution;

fn fixture(text: &str) -> Substitution {
    parse_substitution(text).expect("fixture parses")
}

/// `1 -> 1 2, 2 -> 1`; first cohomology `Z^2`.
pub fn fibonacci() -> Substitution {
    fixture("name = Fibonacci\n1 -> 1 2\n2 -> 1\n")
}

/// `1 -> 1 2, 2 -> 2 1`; first cohomology `Z[1/2] ⊕ Z`.
pub fn thue_morse() -> Substitution {
    fixture("name = Morse-Thue\n1 -> 1 2\n2 -> 2 1\n")
}

/// Four letters whose transition complex has two components.
pub fn disconnected() -> Substitution {
    fixture("name = disconnected-S\n1 -> 1 2 3 4 1\n2 -> 1 2\n3 -> 3 4 2 3\n4 -> 4 2\n")
}

/// Every image begins and ends with `1`.
pub fn proper() -> Substitution {
    fixture("name = proper\n1 -> 1 2 1\n2 -> 1 2 2 1\n")
}

pub fn all() -> Vec<Substitution> {
    vec![fibonacci(), thue_morse(), disconnected()]
}
