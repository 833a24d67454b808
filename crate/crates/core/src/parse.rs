//! Text format for substitutions.
//!
//! ```text
//! name = Fibonacci        # optional header, must come first
//! 1 -> 1 2
//! 2 -> 1                  # rules split by newlines or `;`
//! ```
//!
//! Letters are whitespace-separated tokens. `->` separates even without
//! surrounding whitespace, so `a->b c` is the rule `a -> b c`.

use std::collections::HashMap;

use crate::error::{ParseError, Position};
use crate::substitution::Substitution;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Token<'a> {
    text: &'a str,
    pos: Position,
}

#[derive(Debug)]
struct RawRule<'a> {
    lhs: Token<'a>,
    rhs: Vec<Token<'a>>,
}

fn strip_comment(line: &str) -> &str {
    line.find('#').map_or(line, |i| &line[..i])
}

fn column_of(line: &str, byte: usize) -> usize {
    line[..byte].chars().count() + 1
}

fn push_pieces<'a>(
    segment: &mut Vec<Token<'a>>,
    line: &'a str,
    line_no: usize,
    from: usize,
    to: usize,
) {
    let mut rest = &line[from..to];
    let mut offset = from;
    while !rest.is_empty() {
        let (piece, advance) = match rest.find("->") {
            Some(0) => (&rest[..2], 2),
            Some(i) => (&rest[..i], i),
            None => (rest, rest.len()),
        };
        segment.push(Token {
            text: piece,
            pos: Position {
                line: line_no,
                column: column_of(line, offset),
            },
        });
        rest = &rest[advance..];
        offset += advance;
    }
}

/// Splits one line into `;`-separated segments of tokens, with `->` split out.
fn tokenize_line(line: &str, line_no: usize) -> Vec<Vec<Token<'_>>> {
    let body = strip_comment(line);
    let mut segments = vec![Vec::new()];
    let mut start: Option<usize> = None;
    for (i, ch) in body.char_indices() {
        if ch.is_whitespace() || ch == ';' {
            if let Some(s) = start.take() {
                push_pieces(segments.last_mut().unwrap(), line, line_no, s, i);
            }
            if ch == ';' {
                segments.push(Vec::new());
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        push_pieces(segments.last_mut().unwrap(), line, line_no, s, body.len());
    }
    segments
}

/// Recognizes `name = <value>`; the value may be double-quoted.
fn header_value(line: &str) -> Option<String> {
    let body = strip_comment(line).trim();
    let rest = body.strip_prefix("name")?.trim_start();
    let value = rest.strip_prefix('=')?.trim();
    let value = value
        .strip_prefix('"')
        .and_then(|v| v.strip_suffix('"'))
        .unwrap_or(value);
    Some(value.to_string())
}

/// Parses the substitution grammar. Letter order is order of first appearance
/// on a rule's left-hand side.
pub fn parse_substitution(text: &str) -> Result<Substitution, ParseError> {
    let mut name = None;
    let mut rules: Vec<RawRule<'_>> = Vec::new();
    let mut seen_content = false;

    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if let Some(value) = header_value(line) {
            if seen_content {
                let col = line.find("name").map_or(1, |b| column_of(line, b));
                return Err(ParseError::Syntax {
                    pos: Position {
                        line: line_no,
                        column: col,
                    },
                    message: "`name = ...` header must precede all rules".into(),
                });
            }
            name = Some(value);
            seen_content = true;
            continue;
        }
        for segment in tokenize_line(line, line_no) {
            if segment.is_empty() {
                continue;
            }
            seen_content = true;
            rules.push(split_rule(segment)?);
        }
    }

    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut symbols = Vec::new();
    for rule in &rules {
        if index.contains_key(rule.lhs.text) {
            return Err(ParseError::DuplicateRule {
                pos: rule.lhs.pos,
                letter: rule.lhs.text.to_string(),
            });
        }
        index.insert(rule.lhs.text, symbols.len());
        symbols.push(rule.lhs.text.to_string());
    }
    let mut images = Vec::with_capacity(rules.len());
    for rule in &rules {
        let mut image = Vec::with_capacity(rule.rhs.len());
        for tok in &rule.rhs {
            match index.get(tok.text) {
                Some(&i) => image.push(i),
                None => {
                    return Err(ParseError::UnknownLetter {
                        pos: tok.pos,
                        letter: tok.text.to_string(),
                    })
                }
            }
        }
        images.push(image);
    }
    if symbols.len() < 2 {
        return Err(ParseError::AlphabetTooSmall {
            size: symbols.len(),
        });
    }
    Ok(Substitution::from_parts(name, symbols, images))
}

fn split_rule(segment: Vec<Token<'_>>) -> Result<RawRule<'_>, ParseError> {
    let arrows: Vec<usize> = segment
        .iter()
        .enumerate()
        .filter(|(_, t)| t.text == "->")
        .map(|(i, _)| i)
        .collect();
    let first = segment[0].pos;
    match arrows.as_slice() {
        [] => Err(ParseError::Syntax {
            pos: first,
            message: "expected `->` in rule".into(),
        }),
        [_, second, ..] => Err(ParseError::Syntax {
            pos: segment[*second].pos,
            message: "more than one `->` in rule".into(),
        }),
        [0] => Err(ParseError::Syntax {
            pos: first,
            message: "missing letter before `->`".into(),
        }),
        [1] => {
            let mut iter = segment.into_iter();
            let lhs = iter.next().unwrap();
            let arrow = iter.next().unwrap();
            let rhs: Vec<Token<'_>> = iter.collect();
            if rhs.is_empty() {
                return Err(ParseError::EmptyImage {
                    pos: arrow.pos,
                    letter: lhs.text.to_string(),
                });
            }
            Ok(RawRule { lhs, rhs })
        }
        [_] => Err(ParseError::Syntax {
            pos: segment[1].pos,
            message: "left-hand side must be a single letter".into(),
        }),
    }
}

/// A block cut from a multi-substitution file, with its 0-based starting line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block<'a> {
    pub first_line: usize,
    pub text: &'a str,
}

/// Splits a file into blocks separated by blank lines. Blocks holding only
/// comments are dropped.
pub fn split_blocks(text: &str) -> Vec<Block<'_>> {
    fn push<'a>(blocks: &mut Vec<Block<'a>>, first_line: usize, chunk: &'a str) {
        if chunk.lines().any(|l| !strip_comment(l).trim().is_empty()) {
            blocks.push(Block {
                first_line,
                text: chunk,
            });
        }
    }
    let mut blocks = Vec::new();
    let mut start: Option<(usize, usize)> = None; // (line, byte)
    let mut byte = 0;
    for (idx, line) in text.split_inclusive('\n').enumerate() {
        if line.trim().is_empty() {
            if let Some((l, b)) = start.take() {
                push(&mut blocks, l, &text[b..byte]);
            }
        } else if start.is_none() {
            start = Some((idx, byte));
        }
        byte += line.len();
    }
    if let Some((l, b)) = start {
        push(&mut blocks, l, &text[b..]);
    }
    blocks
}

/// Parses every block of a batch file; the first syntax error aborts.
pub fn parse_batch(text: &str) -> Result<Vec<Substitution>, ParseError> {
    split_blocks(text)
        .into_iter()
        .map(|b| parse_substitution(b.text).map_err(|e| e.offset_lines(b.first_line)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_inline() {
        let s = parse_substitution("1 -> 1 2 ; 2 -> 1").unwrap();
        assert_eq!(s.alphabet_size(), 2);
        assert_eq!(s.symbols(), ["1", "2"]);
        assert_eq!(s.image(0), [0, 1]);
        assert_eq!(s.image(1), [0]);
        assert_eq!(s.name(), None);
    }

    #[test]
    fn header_comments_and_tight_arrows() {
        let text = "# comment\nname = \"Morse-Thue\"\na->a b # trailing\n\nb -> b a\n";
        let s = parse_substitution(text).unwrap();
        assert_eq!(s.name(), Some("Morse-Thue"));
        assert_eq!(s.symbols(), ["a", "b"]);
        assert_eq!(s.image(1), [1, 0]);
    }

    #[test]
    fn letter_order_is_lhs_order() {
        let s = parse_substitution("b -> a b; a -> b").unwrap();
        assert_eq!(s.symbols(), ["b", "a"]);
        assert_eq!(s.image(0), [1, 0]);
    }

    #[test]
    fn single_letter_alphabet_rejected() {
        assert_eq!(
            parse_substitution("a -> a"),
            Err(ParseError::AlphabetTooSmall { size: 1 })
        );
    }

    #[test]
    fn unknown_letter_reported_with_position() {
        let err = parse_substitution("1 -> 1 3 ; 2 -> 1").unwrap_err();
        assert_eq!(
            err,
            ParseError::UnknownLetter {
                pos: Position { line: 1, column: 8 },
                letter: "3".into()
            }
        );
    }

    #[test]
    fn empty_image_and_duplicates() {
        assert!(matches!(
            parse_substitution("1 -> ; 2 -> 1"),
            Err(ParseError::EmptyImage { .. })
        ));
        let err = parse_substitution("1 -> 2\n2 -> 1\n1 -> 1 2").unwrap_err();
        assert_eq!(
            err,
            ParseError::DuplicateRule {
                pos: Position { line: 3, column: 1 },
                letter: "1".into()
            }
        );
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(
            parse_substitution("1 2 3"),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_substitution("1 -> 2 -> 1"),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_substitution("1 2 -> 1"),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_substitution("-> 1"),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_substitution("1 -> 2\nname = late\n2 -> 1"),
            Err(ParseError::Syntax { .. })
        ));
    }

    #[test]
    fn blocks_split_on_blank_lines() {
        let text = "name = a\n1 -> 1 2\n2 -> 1\n\n   \n# only a comment\n\n1 -> 1 2; 2 -> 2 1\n";
        let blocks = split_blocks(text);
        assert_eq!(blocks.len(), 2);
        assert_eq!(blocks[1].first_line, 7);
        let subs = parse_batch(text).unwrap();
        assert_eq!(subs.len(), 2);
        assert_eq!(subs[0].name(), Some("a"));
        assert!(parse_batch("").unwrap().is_empty());
    }

    #[test]
    fn batch_errors_carry_file_lines() {
        let err = parse_batch("1 -> 1 2; 2 -> 1\n\n1 -> 3; 2 -> 1\n").unwrap_err();
        assert_eq!(err.position(), Some(Position { line: 3, column: 6 }));
    }

    #[test]
    fn display_round_trips() {
        let s = parse_substitution("name = x\n1 -> 1 2 3 4 1; 2 -> 1 2; 3 -> 3 4 2 3; 4 -> 4 2")
            .unwrap();
        let again = parse_substitution(&s.to_string()).unwrap();
        assert_eq!(s, again);
    }
}
