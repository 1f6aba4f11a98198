//! Finite presentations and their text format.
//!
//! ```text
//! # the free abelian group of rank two
//! generators: a b
//! relators: abAB
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{CoreError, PresentationParseError};
use crate::word::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<u8>,
    relators: Vec<Word>,
}

impl Presentation {
    /// Relators must be nonempty, cyclically reduced and written over the
    /// declared generators.
    pub fn new(generators: Vec<u8>, relators: Vec<Word>) -> Result<Self, CoreError> {
        for (i, &g) in generators.iter().enumerate() {
            if !g.is_ascii_lowercase() {
                return Err(CoreError::InvalidPresentation(format!(
                    "generator {:?} is not a lowercase letter",
                    g as char
                )));
            }
            if generators[..i].contains(&g) {
                return Err(CoreError::InvalidPresentation(format!(
                    "duplicate generator {:?}",
                    g as char
                )));
            }
        }
        let p = Presentation { generators, relators };
        for r in &p.relators {
            if r.is_empty() {
                return Err(CoreError::InvalidPresentation("empty relator".into()));
            }
            if !r.is_cyclically_reduced() {
                return Err(CoreError::InvalidPresentation(format!(
                    "relator {r} is not cyclically reduced"
                )));
            }
            p.check_word(r)?;
        }
        Ok(p)
    }

    pub fn generators(&self) -> &[u8] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Length of the longest relator (0 for a free presentation).
    pub fn max_relator_len(&self) -> usize {
        self.relators.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn is_free(&self) -> bool {
        self.relators.is_empty()
    }

    pub fn check_word(&self, w: &Word) -> Result<(), CoreError> {
        match w.letters().iter().find(|l| !self.generators.contains(&l.generator())) {
            Some(l) => Err(CoreError::UndeclaredGenerator(l.generator() as char)),
            None => Ok(()),
        }
    }

    /// Parses a word and checks it against the declared generators.
    pub fn parse_word(&self, s: &str) -> Result<Word, CoreError> {
        let w: Word = s
            .parse()
            .map_err(|e| CoreError::InvalidPresentation(format!("bad word {s:?}: {e}")))?;
        self.check_word(&w)?;
        Ok(w)
    }

    /// `R ∪ R⁻¹`, relators first, in declaration order.
    pub fn symmetric_relators(&self) -> Vec<Word> {
        self.relators
            .iter()
            .cloned()
            .chain(self.relators.iter().map(Word::inverse))
            .collect()
    }

    pub fn is_relator_or_inverse(&self, w: &Word) -> bool {
        self.relators.iter().any(|r| r == w || r.inverse() == *w)
    }

    pub fn letters(&self) -> Vec<Letter> {
        crate::word::alphabet_letters(&self.generators)
    }

    pub fn parse_text(text: &str) -> Result<Self, PresentationParseError> {
        let mut generators: Option<Vec<u8>> = None;
        let mut relators: Option<Vec<(Word, usize, usize)>> = None;
        let err = |line: usize, column: usize, message: String| PresentationParseError {
            line,
            column,
            message,
        };

        for (ln, raw) in text.lines().enumerate() {
            let line_no = ln + 1;
            let content = raw.split('#').next().unwrap_or("");
            if content.trim().is_empty() {
                continue;
            }
            let Some(colon) = content.find(':') else {
                let col = content.len() - content.trim_start().len() + 1;
                return Err(err(line_no, col, "expected `generators:` or `relators:`".into()));
            };
            let key = content[..colon].trim();
            let body = &content[colon + 1..];
            let body_col = colon + 2;
            match key {
                "generators" => {
                    if generators.is_some() {
                        return Err(err(line_no, 1, "duplicate `generators:` line".into()));
                    }
                    let mut gens = Vec::new();
                    for (off, tok) in tokens(body, |c| c.is_whitespace()) {
                        let col = body_col + off;
                        let mut chars = tok.chars();
                        let c = chars.next().unwrap();
                        if chars.next().is_some() {
                            return Err(err(line_no, col, format!("generator {tok:?} must be a single letter")));
                        }
                        if c.is_ascii_uppercase() {
                            return Err(err(
                                line_no,
                                col,
                                format!("generator {c:?} is uppercase; uppercase letters denote inverses"),
                            ));
                        }
                        if !c.is_ascii_lowercase() {
                            return Err(err(line_no, col, format!("generator {c:?} is not a lowercase letter")));
                        }
                        if gens.contains(&(c as u8)) {
                            return Err(err(line_no, col, format!("duplicate generator {c:?}")));
                        }
                        gens.push(c as u8);
                    }
                    generators = Some(gens);
                }
                "relators" => {
                    if relators.is_some() {
                        return Err(err(line_no, 1, "duplicate `relators:` line".into()));
                    }
                    let mut rels = Vec::new();
                    for (off, tok) in tokens(body, |c| c == ',') {
                        let lead = tok.len() - tok.trim_start().len();
                        let tok = tok.trim();
                        if tok.is_empty() {
                            continue;
                        }
                        let col = body_col + off + lead;
                        let w: Word = tok.parse().map_err(|e| match e {
                            crate::error::WordParseError::BadChar { column, found } => {
                                err(line_no, col + column - 1, format!("unexpected character {found:?} in relator"))
                            }
                            other => err(line_no, col, other.to_string()),
                        })?;
                        rels.push((w, line_no, col));
                    }
                    relators = Some(rels);
                }
                other => {
                    let col = content.len() - content.trim_start().len() + 1;
                    return Err(err(line_no, col, format!("unknown key {other:?}")));
                }
            }
        }

        let generators = generators.ok_or_else(|| err(1, 1, "missing `generators:` line".into()))?;
        let mut rel_words = Vec::new();
        for (w, line, col) in relators.unwrap_or_default() {
            if let Some(l) = w.letters().iter().find(|l| !generators.contains(&l.generator())) {
                return Err(err(line, col, format!("relator {w} uses undeclared generator {:?}", l.generator() as char)));
            }
            if w.is_empty() {
                return Err(err(line, col, "relator reduces to the empty word".into()));
            }
            if !w.is_cyclically_reduced() {
                return Err(err(line, col, format!("relator {w} is not cyclically reduced")));
            }
            rel_words.push(w);
        }
        Presentation::new(generators, rel_words).map_err(|e| err(1, 1, e.to_string()))
    }
}

/// Nonempty tokens split on `sep`, with their byte offsets into `s`.
fn tokens(s: &str, sep: impl Fn(char) -> bool) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        if sep(c) {
            if let Some(b) = start.take() {
                out.push((b, &s[b..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(b) = start {
        out.push((b, &s[b..]));
    }
    out.into_iter().filter(|(_, t)| !t.trim().is_empty()).collect()
}

impl FromStr for Presentation {
    type Err = PresentationParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Presentation::parse_text(s)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|&g| (g as char).to_string()).collect();
        let rels: Vec<String> = self.relators.iter().map(Word::to_string).collect();
        writeln!(f, "generators: {}", gens.join(" "))?;
        writeln!(f, "relators: {}", rels.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_basic_file() {
        let p: Presentation = "# torus\ngenerators: a b\nrelators: abAB\n".parse().unwrap();
        assert_eq!(p.generators(), b"ab");
        assert_eq!(p.relators().len(), 1);
        assert_eq!(p.max_relator_len(), 4);
    }

    #[test]
    fn empty_relators_line_is_free() {
        let p: Presentation = "generators: a b\nrelators:\n".parse().unwrap();
        assert!(p.is_free());
        let p: Presentation = "generators: a".parse().unwrap();
        assert!(p.is_free());
    }

    #[test]
    fn multiple_relators() {
        let p: Presentation = "generators: a b\nrelators: aaa, bb ,abAB".parse().unwrap();
        assert_eq!(p.relators().len(), 3);
        assert_eq!(p.relators()[1].to_string(), "bb");
    }

    #[test]
    fn rejects_duplicates_and_uppercase() {
        let e = "generators: a a".parse::<Presentation>().unwrap_err();
        assert_eq!((e.line, e.column), (1, 15));
        assert!(e.message.contains("duplicate"));
        let e = "generators: a B".parse::<Presentation>().unwrap_err();
        assert!(e.message.contains("uppercase"));
        assert_eq!(e.column, 15);
    }

    #[test]
    fn reports_relator_positions() {
        let e = "generators: a b\nrelators: ab, ac".parse::<Presentation>().unwrap_err();
        assert_eq!((e.line, e.column), (2, 15));
        let e = "generators: a b\nrelators: ab, a2".parse::<Presentation>().unwrap_err();
        assert_eq!((e.line, e.column), (2, 16));
        let e = "generators: a b\nrelators: abA".parse::<Presentation>().unwrap_err();
        assert!(e.message.contains("cyclically"));
        let e = "generators: a\nrelators: aA".parse::<Presentation>().unwrap_err();
        assert!(e.message.contains("empty"));
    }

    #[test]
    fn display_round_trip() {
        let p: Presentation = "generators: a b c d\nrelators: abABcdCD".parse().unwrap();
        assert_eq!(p.to_string().parse::<Presentation>().unwrap(), p);
    }
}
