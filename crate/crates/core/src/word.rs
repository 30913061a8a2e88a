//! Group words over a finite generator list.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! word   := factor { ['*'] factor }
//! factor := atom { '^' int }
//! atom   := ident | '1' | '[' word ',' word { ',' word } ']' | '(' word ')'
//! ```
//!
//! `[a,b,c]` is left-normed, i.e. `[[a,b],c]`, and `[u,v] = u^-1 v^-1 u v`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupWord {
    Identity,
    /// Zero-based generator index.
    Gen(usize),
    Pow(Box<GroupWord>, i64),
    /// At least two factors, none of them a product.
    Product(Vec<GroupWord>),
    Comm(Box<GroupWord>, Box<GroupWord>),
}

impl GroupWord {
    pub fn gen(i: usize) -> Self {
        GroupWord::Gen(i)
    }

    pub fn pow(self, k: i64) -> Self {
        GroupWord::Pow(Box::new(self), k)
    }

    pub fn inv(self) -> Self {
        self.pow(-1)
    }

    pub fn comm(a: GroupWord, b: GroupWord) -> Self {
        GroupWord::Comm(Box::new(a), Box::new(b))
    }

    /// Product with flattening; singletons collapse.
    pub fn product(factors: Vec<GroupWord>) -> Self {
        let mut flat = Vec::with_capacity(factors.len());
        for f in factors {
            match f {
                GroupWord::Product(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => GroupWord::Identity,
            1 => flat.pop().unwrap(),
            _ => GroupWord::Product(flat),
        }
    }

    /// Largest generator index used, if any.
    pub fn max_generator(&self) -> Option<usize> {
        match self {
            GroupWord::Identity => None,
            GroupWord::Gen(i) => Some(*i),
            GroupWord::Pow(w, _) => w.max_generator(),
            GroupWord::Product(fs) => fs.iter().filter_map(|f| f.max_generator()).max(),
            GroupWord::Comm(a, b) => a.max_generator().max(b.max_generator()),
        }
    }

    /// Renders with the given generator names.
    pub fn render(&self, names: &[String]) -> String {
        let mut s = String::new();
        self.write(&mut s, names, false);
        s
    }

    fn write(&self, out: &mut String, names: &[String], atomic: bool) {
        match self {
            GroupWord::Identity => out.push('1'),
            GroupWord::Gen(i) => match names.get(*i) {
                Some(n) => out.push_str(n),
                None => out.push_str(&format!("s{}", i + 1)),
            },
            GroupWord::Pow(w, k) => {
                w.write(out, names, true);
                out.push('^');
                out.push_str(&k.to_string());
            }
            GroupWord::Comm(a, b) => {
                out.push('[');
                a.write(out, names, false);
                out.push(',');
                b.write(out, names, false);
                out.push(']');
            }
            GroupWord::Product(fs) => {
                if atomic {
                    out.push('(');
                }
                for (i, f) in fs.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    f.write(out, names, true);
                }
                if atomic {
                    out.push(')');
                }
            }
        }
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&[]))
    }
}

/// Parses a word whose identifiers must appear in `names`.
pub fn parse_word(text: &str, names: &[String]) -> Result<GroupWord> {
    let mut p = Parser {
        src: text,
        chars: text.char_indices().collect(),
        pos: 0,
        names,
    };
    let w = p.word()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(w)
}

/// Default names `s1..s<d>`.
pub fn default_names(d: usize) -> Vec<String> {
    (1..=d).map(|i| format!("s{i}")).collect()
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        let offset = self.chars.get(self.pos).map_or(self.src.len(), |&(o, _)| o);
        Error::Syntax {
            location: format!("offset {offset}"),
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn word(&mut self) -> Result<GroupWord> {
        let mut factors = vec![self.factor()?];
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    factors.push(self.factor()?);
                }
                Some(c) if c == '[' || c == '(' || c == '1' || c.is_alphabetic() || c == '_' => {
                    factors.push(self.factor()?);
                }
                _ => break,
            }
        }
        Ok(GroupWord::product(factors))
    }

    fn factor(&mut self) -> Result<GroupWord> {
        let mut w = self.atom()?;
        while self.peek() == Some('^') {
            self.pos += 1;
            let k = self.int()?;
            w = w.pow(k);
        }
        Ok(w)
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.chars.get(self.pos).map(|c| c.1) == Some('-') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return Err(self.error("expected integer exponent"));
        }
        let text: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
        text.parse().map_err(|_| {
            self.pos = start;
            self.error("exponent out of range")
        })
    }

    fn atom(&mut self) -> Result<GroupWord> {
        match self.peek() {
            Some('[') => {
                self.pos += 1;
                let mut acc = self.word()?;
                self.expect(',')?;
                acc = GroupWord::comm(acc, self.word()?);
                while self.peek() == Some(',') {
                    self.pos += 1;
                    acc = GroupWord::comm(acc, self.word()?);
                }
                self.expect(']')?;
                Ok(acc)
            }
            Some('(') => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(')')?;
                Ok(w)
            }
            Some('1') => {
                self.pos += 1;
                Ok(GroupWord::Identity)
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.pos < self.chars.len()
                    && (self.chars[self.pos].1.is_alphanumeric() || self.chars[self.pos].1 == '_')
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
                match self.names.iter().position(|n| *n == name) {
                    Some(i) => Ok(GroupWord::Gen(i)),
                    None => Err(Error::UnknownGenerator { name }),
                }
            }
            _ => Err(self.error("expected generator, `1`, `[` or `(`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(d: usize) -> Vec<String> {
        default_names(d)
    }

    #[test]
    fn parses_basic_forms() {
        let n = names(3);
        assert_eq!(parse_word("s1^4", &n).unwrap(), GroupWord::gen(0).pow(4));
        assert_eq!(
            parse_word(" [ [s1, s2] ,s3 ]", &n).unwrap(),
            GroupWord::comm(
                GroupWord::comm(GroupWord::gen(0), GroupWord::gen(1)),
                GroupWord::gen(2)
            )
        );
        assert_eq!(
            parse_word("[s1,s2,s3]", &n).unwrap(),
            parse_word("[[s1,s2],s3]", &n).unwrap()
        );
        assert_eq!(
            parse_word("s1^3 [s1,s2]", &n).unwrap(),
            GroupWord::product(vec![
                GroupWord::gen(0).pow(3),
                GroupWord::comm(GroupWord::gen(0), GroupWord::gen(1))
            ])
        );
        assert_eq!(parse_word("s2^-1", &n).unwrap(), GroupWord::gen(1).inv());
        assert_eq!(
            parse_word("(s1 s2)^2", &n).unwrap(),
            parse_word("(s1*s2)^2", &n).unwrap()
        );
    }

    #[test]
    fn errors_carry_position() {
        let n = names(2);
        match parse_word("s1 ^", &n) {
            Err(Error::Syntax { location, .. }) => assert_eq!(location, "offset 4"),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            parse_word("s4", &n),
            Err(Error::UnknownGenerator { name: "s4".into() })
        );
        assert!(parse_word("[s1 s2]", &n).is_err());
        assert!(parse_word("", &n).is_err());
    }

    #[test]
    fn render_then_parse() {
        let n = names(2);
        for text in ["s1^4", "[s1,s2]^-2 s1", "(s1 s2)^3", "[[s1,s2],s1^2]", "1"] {
            let w = parse_word(text, &n).unwrap();
            assert_eq!(parse_word(&w.render(&n), &n).unwrap(), w);
        }
    }
}
