//! Word-level tokenizer.
//!
//! Lowercases, splits punctuation off words, splits English clitics off their
//! host (`don't` → `do` `n't`, `we're` → `we` `'re`) and keeps configured
//! emoticon shorthands as single tokens. Hyphenated words (`covid-19`) and
//! decimal numbers stay whole.

use super::{EmoticonCategory, EmoticonConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Word,
    Punct,
    Emoticon(EmoticonCategory),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub kind: TokenKind,
}

impl Token {
    fn word(s: impl Into<String>) -> Token {
        Token {
            text: s.into(),
            kind: TokenKind::Word,
        }
    }
}

const CLITICS: [&str; 6] = ["s", "m", "re", "ve", "ll", "d"];

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

fn push_word(run: &str, out: &mut Vec<Token>) {
    let w = run.to_lowercase().replace('\u{2019}', "'");
    if w.len() > 3 && w.ends_with("n't") {
        out.push(Token::word(&w[..w.len() - 3]));
        out.push(Token::word("n't"));
        return;
    }
    if let Some(i) = w.rfind('\'') {
        if CLITICS.contains(&&w[i + 1..]) {
            out.push(Token::word(&w[..i]));
            out.push(Token::word(&w[i..]));
            return;
        }
    }
    out.push(Token::word(w));
}

fn tokenize_plain(segment: &str, out: &mut Vec<Token>) {
    let chars: Vec<(usize, char)> = segment.char_indices().collect();
    let end_of = |i: usize| chars.get(i).map_or(segment.len(), |&(b, _)| b);
    let mut i = 0;
    while i < chars.len() {
        let (start, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_alphanumeric() {
            let mut j = i + 1;
            while j < chars.len() {
                let cj = chars[j].1;
                let joins = |ok: fn(char) -> bool| {
                    chars[j - 1].1.is_alphanumeric()
                        && chars.get(j + 1).is_some_and(|&(_, n)| ok(n))
                };
                if cj.is_alphanumeric()
                    || ((cj == '-' || is_apostrophe(cj)) && joins(char::is_alphanumeric))
                    || ((cj == '.' || cj == ',')
                        && chars[j - 1].1.is_ascii_digit()
                        && joins(|n| n.is_ascii_digit()))
                {
                    j += 1;
                } else {
                    break;
                }
            }
            push_word(&segment[start..end_of(j)], out);
            i = j;
        } else {
            let mut j = i + 1;
            while j < chars.len() && chars[j].1 == c {
                j += 1;
            }
            out.push(Token {
                text: segment[start..end_of(j)].to_string(),
                kind: TokenKind::Punct,
            });
            i = j;
        }
    }
}

/// Tokenizes `text`. With `emoticons` set, configured shorthands become
/// [`TokenKind::Emoticon`] tokens with their original spelling.
pub fn tokenize(text: &str, emoticons: Option<&EmoticonConfig>) -> Vec<Token> {
    let mut out = Vec::new();
    let mut last = 0;
    if let Some(cfg) = emoticons {
        for (range, cat) in cfg.find_all(text) {
            tokenize_plain(&text[last..range.start], &mut out);
            out.push(Token {
                text: text[range.clone()].to_string(),
                kind: TokenKind::Emoticon(cat),
            });
            last = range.end;
        }
    }
    tokenize_plain(&text[last..], &mut out);
    out
}
