//! Tokenizer shared by every file format.

use catlift::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    /// Bare word: names, variables (`?x`), qualified names (`A.f`), row IDs.
    Word(String),
    /// Double-quoted string with `\"` and `\\` escapes.
    Str(String),
    /// One of `{ } [ ] ( ) ; , : =` or `->`.
    Punct(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
}

const PUNCT: [&str; 10] = ["{", "}", "[", "]", "(", ")", ";", ",", ":", "="];

fn is_word_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, '{' | '}' | '[' | ']' | '(' | ')' | ';' | ',' | ':' | '=' | '"' | '#')
}

pub fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut it = src.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        if c == '\n' {
            line += 1;
            it.next();
        } else if c.is_whitespace() {
            it.next();
        } else if c == '#' {
            while let Some(&(_, c)) = it.peek() {
                if c == '\n' {
                    break;
                }
                it.next();
            }
        } else if c == '"' {
            it.next();
            let start = line;
            let mut s = String::new();
            loop {
                match it.next() {
                    None => {
                        return Err(Error::Parse {
                            line: start,
                            message: "unterminated string".into(),
                        })
                    }
                    Some((_, '"')) => break,
                    Some((_, '\\')) => match it.next() {
                        Some((_, e @ ('"' | '\\'))) => s.push(e),
                        Some((_, 'n')) => s.push('\n'),
                        _ => {
                            return Err(Error::Parse {
                                line,
                                message: "bad escape in string".into(),
                            })
                        }
                    },
                    Some((_, ch)) => {
                        if ch == '\n' {
                            line += 1;
                        }
                        s.push(ch)
                    }
                }
            }
            out.push(Token {
                tok: Tok::Str(s),
                line: start,
            });
        } else if src[i..].starts_with("->") {
            it.next();
            it.next();
            out.push(Token {
                tok: Tok::Punct("->"),
                line,
            });
        } else if let Some(p) = PUNCT.iter().find(|p| src[i..].starts_with(**p)) {
            it.next();
            out.push(Token {
                tok: Tok::Punct(p),
                line,
            });
        } else {
            let mut w = String::new();
            while let Some(&(j, ch)) = it.peek() {
                if !is_word_char(ch) || src[j..].starts_with("->") {
                    break;
                }
                w.push(ch);
                it.next();
            }
            out.push(Token {
                tok: Tok::Word(w),
                line,
            });
        }
    }
    Ok(out)
}

/// Whether `s` survives as a bare word; otherwise it is printed quoted.
pub fn is_bare(s: &str) -> bool {
    !s.is_empty() && !s.contains("->") && s.chars().all(is_word_char)
}

pub fn quote(s: &str) -> String {
    if is_bare(s) {
        s.to_string()
    } else {
        let mut q = String::from("\"");
        for c in s.chars() {
            match c {
                '"' => q.push_str("\\\""),
                '\\' => q.push_str("\\\\"),
                '\n' => q.push_str("\\n"),
                c => q.push(c),
            }
        }
        q.push('"');
        q
    }
}
