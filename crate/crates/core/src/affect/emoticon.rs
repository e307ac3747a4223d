//! Emoticon shorthand configuration, counting and stripping.
//!
//! Config file (TOML), one entry per shorthand:
//!
//! ```toml
//! [shorthands]
//! ":)" = "Joy"
//! "🙂" = "Joy"
//! ":(" = "Sadness"
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::ops::Range;
use std::path::Path;

use serde::Deserialize;

use super::{AffectCategory, EmoticonCategory};
use crate::corpus::{Agent, Dialogue};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct EmoticonConfig {
    /// Longest shorthand first, so `>:(` wins over `:(`.
    entries: Vec<(String, EmoticonCategory)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WireConfig {
    shorthands: BTreeMap<String, String>,
}

impl EmoticonConfig {
    pub fn new<I, S>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, EmoticonCategory)>,
        S: Into<String>,
    {
        let mut map = BTreeMap::new();
        for (s, c) in entries {
            let s: String = s.into();
            if s.is_empty() || s.chars().any(char::is_whitespace) {
                return Err(Error::invalid(
                    "emoticon config",
                    "shorthand",
                    format!("{s:?} must be non-empty and contain no whitespace"),
                ));
            }
            if map.insert(s.clone(), c).is_some() {
                return Err(Error::invalid(
                    "emoticon config",
                    "shorthand",
                    format!("{s:?} is listed twice"),
                ));
            }
        }
        let mut entries: Vec<_> = map.into_iter().collect();
        entries.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(&b.0)));
        Ok(EmoticonConfig { entries })
    }

    /// The shorthands shipped with the crate: the four interface emoji plus
    /// their common ASCII spellings.
    pub fn builtin() -> Self {
        use EmoticonCategory::*;
        Self::new([
            ("🙂", Joy),
            (":)", Joy),
            (":-)", Joy),
            ("☹️", Sadness),
            ("☹", Sadness),
            (":(", Sadness),
            (":-(", Sadness),
            ("😡", Anger),
            (">:(", Anger),
            (">:-(", Anger),
            ("😮", Surprise),
            (":o", Surprise),
            (":O", Surprise),
            (":-o", Surprise),
            (":-O", Surprise),
        ])
        .expect("builtin shorthands are valid")
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let wire: WireConfig =
            toml::from_str(text).map_err(|e| Error::schema(origin, e.to_string()))?;
        let mut entries = Vec::with_capacity(wire.shorthands.len());
        for (s, c) in wire.shorthands {
            let cat = EmoticonCategory::from_key(&c).ok_or_else(|| {
                Error::invalid(origin, format!("shorthands.{s}"), format!("unknown category {c:?}"))
            })?;
            entries.push((s, cat));
        }
        Self::new(entries)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn category_of(&self, shorthand: &str) -> Option<EmoticonCategory> {
        self.entries
            .iter()
            .find(|(s, _)| s == shorthand)
            .map(|&(_, c)| c)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Non-overlapping shorthand occurrences, left to right.
    ///
    /// A shorthand that starts (ends) with an alphanumeric character only
    /// matches when the preceding (following) character is not alphanumeric,
    /// so `:o` does not fire inside `:ok`.
    pub fn find_all(&self, text: &str) -> Vec<(Range<usize>, EmoticonCategory)> {
        let mut out = Vec::new();
        let mut pos = 0;
        while pos < text.len() {
            let rest = &text[pos..];
            let prev = text[..pos].chars().next_back();
            let hit = self.entries.iter().find(|(s, _)| {
                if !rest.starts_with(s.as_str()) {
                    return false;
                }
                let first = s.chars().next().unwrap();
                let last = s.chars().next_back().unwrap();
                let next = rest[s.len()..].chars().next();
                let left_ok = !first.is_alphanumeric() || !prev.is_some_and(char::is_alphanumeric);
                let right_ok = !last.is_alphanumeric() || !next.is_some_and(char::is_alphanumeric);
                left_ok && right_ok
            });
            match hit {
                Some((s, c)) => {
                    out.push((pos..pos + s.len(), *c));
                    pos += s.len();
                }
                None => pos += rest.chars().next().unwrap().len_utf8(),
            }
        }
        out
    }

    /// Per-category counts in one piece of text.
    pub fn count(&self, text: &str) -> [u32; 4] {
        let mut counts = [0u32; 4];
        for (_, c) in self.find_all(text) {
            counts[c.index()] += 1;
        }
        counts
    }
}

/// Emoticon counts over all of one participant's utterances.
pub fn count_emoticons(dialogue: &Dialogue, agent: Agent, cfg: &EmoticonConfig) -> [u32; 4] {
    let mut total = [0u32; 4];
    for u in dialogue.utterances_by(agent) {
        for (t, c) in total.iter_mut().zip(cfg.count(&u.text)) {
            *t += c;
        }
    }
    total
}

/// Removes every configured shorthand and collapses whitespace.
pub fn strip_emoticons(text: &str, cfg: &EmoticonConfig) -> String {
    let mut out = String::with_capacity(text.len());
    let mut last = 0;
    for (range, _) in cfg.find_all(text) {
        out.push_str(&text[last..range.start]);
        out.push(' ');
        last = range.end;
    }
    out.push_str(&text[last..]);
    out.split_whitespace().collect::<Vec<_>>().join(" ")
}
