//! Category word lists with terminal-wildcard stems.
//!
//! File format (UTF-8):
//!
//! ```text
//! #category:Anxiety
//! worri*
//! afraid
//! ```
//!
//! Other lines starting with `#` are comments. Patterns are lowercase; `*` may
//! only appear as the last character and matches any (possibly empty) suffix.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use super::{tokenize, AffectCategory, EmoticonConfig, LexiconCategory, Token, TokenKind};
use crate::corpus::{Agent, Dialogue};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
struct Patterns {
    exact: HashSet<String>,
    stems: HashSet<String>,
}

impl Patterns {
    fn matches(&self, token: &str) -> bool {
        if self.exact.contains(token) {
            return true;
        }
        if self.stems.is_empty() {
            return false;
        }
        // The empty stem is rejected at load time, so start at one char.
        token
            .char_indices()
            .map(|(i, c)| &token[..i + c.len_utf8()])
            .any(|prefix| self.stems.contains(prefix))
    }

    fn len(&self) -> usize {
        self.exact.len() + self.stems.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lexicon {
    categories: [Patterns; 4],
}

impl Lexicon {
    pub fn from_patterns<'a>(
        patterns: impl IntoIterator<Item = (LexiconCategory, &'a str)>,
    ) -> Result<Self> {
        let mut lex = Lexicon {
            categories: Default::default(),
        };
        for (cat, p) in patterns {
            lex.add(cat, p, "lexicon")?;
        }
        Ok(lex)
    }

    fn add(&mut self, cat: LexiconCategory, pattern: &str, loc: &str) -> Result<()> {
        let bad = |msg: &str| Error::invalid(loc, "pattern", format!("{pattern:?} {msg}"));
        if pattern.is_empty() || pattern == "*" {
            return Err(bad("is empty"));
        }
        if pattern.chars().any(char::is_whitespace) {
            return Err(bad("contains whitespace"));
        }
        if pattern != pattern.to_lowercase() {
            return Err(bad("is not lowercase"));
        }
        let slot = &mut self.categories[cat.index()];
        match pattern.strip_suffix('*') {
            Some(stem) if stem.contains('*') => return Err(bad("has a non-terminal wildcard")),
            Some(stem) => slot.stems.insert(stem.to_string()),
            None if pattern.contains('*') => return Err(bad("has a non-terminal wildcard")),
            None => slot.exact.insert(pattern.to_string()),
        };
        Ok(())
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut lex = Lexicon {
            categories: Default::default(),
        };
        let mut current = None;
        for (i, raw) in text.lines().enumerate() {
            let loc = format!("{origin}:{}", i + 1);
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix("#category:") {
                let name = match name.trim().to_lowercase().as_str() {
                    "posemo" => "positive",
                    "sad" => "sadness",
                    "anx" => "anxiety",
                    _ => name.trim(),
                };
                current = Some(LexiconCategory::from_key(name).ok_or_else(|| {
                    Error::invalid(&loc, "category", format!("unknown category {name:?}"))
                })?);
                continue;
            }
            if line.starts_with('#') {
                continue;
            }
            let cat = current.ok_or_else(|| {
                Error::schema(&loc, "pattern appears before any #category: header")
            })?;
            lex.add(cat, line, &loc)?;
        }
        Ok(lex)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// A small open affect lexicon bundled for fixtures and smoke runs.
    pub fn builtin() -> Self {
        Self::parse(include_str!("../../data/open_affect.lex"), "builtin lexicon")
            .expect("bundled lexicon is valid")
    }

    pub fn matches(&self, cat: LexiconCategory, token: &str) -> bool {
        self.categories[cat.index()].matches(token)
    }

    pub fn pattern_count(&self, cat: LexiconCategory) -> usize {
        self.categories[cat.index()].len()
    }

    /// Per-category matches over word tokens; a token that matches several
    /// categories counts once in each.
    pub fn count_tokens(&self, tokens: &[Token]) -> [u32; 4] {
        let mut counts = [0u32; 4];
        for t in tokens.iter().filter(|t| t.kind == TokenKind::Word) {
            for (slot, cat) in counts.iter_mut().zip(LexiconCategory::ALL) {
                if self.matches(*cat, &t.text) {
                    *slot += 1;
                }
            }
        }
        counts
    }
}

/// Lexicon counts over all of one participant's utterances.
pub fn count_lexicon(
    dialogue: &Dialogue,
    agent: Agent,
    lex: &Lexicon,
    emoticons: &EmoticonConfig,
) -> [u32; 4] {
    let mut total = [0u32; 4];
    for u in dialogue.utterances_by(agent) {
        let c = lex.count_tokens(&tokenize(&u.text, Some(emoticons)));
        for (t, c) in total.iter_mut().zip(c) {
            *t += c;
        }
    }
    total
}
