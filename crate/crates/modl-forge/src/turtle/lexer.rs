//! Tokenizer for the supported Turtle subset.
//!
//! The lexer never fails and never panics: anything it cannot tokenize
//! becomes a [`Tok::Error`] token that the parser converts into a
//! diagnostic and recovers from at the next statement boundary. This is
//! what keeps recover-mode parsing total over arbitrary byte input.

use crate::rdf::vocab;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    AtPrefix,
    AtBase,
    SparqlPrefix,
    SparqlBase,
    Iri(String),
    PName { prefix: String, local: String },
    BlankLabel(String),
    Str(String),
    LangTag(String),
    Numeric { lexical: String, datatype: &'static str },
    Bool(bool),
    A,
    Dot,
    Semi,
    Comma,
    LBracket,
    RBracket,
    LParen,
    RParen,
    DoubleCaret,
    Error(String),
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: u32,
    pub col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

#[derive(Debug)]
pub(crate) struct LexOutput {
    pub tokens: Vec<Token>,
    pub end_line: u32,
    pub end_col: u32,
}

pub(crate) fn lex(text: &str) -> LexOutput {
    Lexer::new(text).run()
}

struct Lexer {
    chars: Vec<char>,
    i: usize,
    line: u32,
    col: u32,
}

fn is_local_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-' || c == '%'
}

fn is_label_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-'
}

impl Lexer {
    fn new(text: &str) -> Lexer {
        Lexer { chars: text.chars().collect(), i: 0, line: 1, col: 1 }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.i + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.i).copied()?;
        self.i += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn run(mut self) -> LexOutput {
        let mut tokens = Vec::new();
        loop {
            self.skip_trivia();
            let (line, col) = (self.line, self.col);
            let Some(c) = self.peek() else { break };
            let tok = self.next_tok(c);
            tokens.push(Token { tok, line, col, end_line: self.line, end_col: self.col });
        }
        LexOutput { tokens, end_line: self.line, end_col: self.col }
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            match c {
                ' ' | '\t' | '\r' | '\n' => {
                    self.bump();
                }
                '#' => {
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    fn next_tok(&mut self, c: char) -> Tok {
        match c {
            '<' => self.lex_iri(),
            '"' | '\'' => self.lex_string(c),
            '@' => self.lex_at(),
            '_' => self.lex_blank(),
            '.' => {
                if self.peek_at(1).is_some_and(|d| d.is_ascii_digit()) {
                    self.lex_number()
                } else {
                    self.bump();
                    Tok::Dot
                }
            }
            ';' => {
                self.bump();
                Tok::Semi
            }
            ',' => {
                self.bump();
                Tok::Comma
            }
            '[' => {
                self.bump();
                Tok::LBracket
            }
            ']' => {
                self.bump();
                Tok::RBracket
            }
            '(' => {
                self.bump();
                Tok::LParen
            }
            ')' => {
                self.bump();
                Tok::RParen
            }
            '^' => {
                self.bump();
                if self.peek() == Some('^') {
                    self.bump();
                    Tok::DoubleCaret
                } else {
                    Tok::Error("lone '^' (expected '^^')".to_string())
                }
            }
            c if c.is_ascii_digit() || c == '+' || c == '-' => self.lex_number(),
            c if c.is_alphabetic() || c == ':' => self.lex_word(),
            other => {
                self.bump();
                Tok::Error(format!("unexpected character {other:?}"))
            }
        }
    }

    fn lex_iri(&mut self) -> Tok {
        self.bump(); // '<'
        let mut value = String::new();
        loop {
            match self.peek() {
                None => return Tok::Error("unterminated IRI".to_string()),
                Some('\n') => return Tok::Error("newline inside IRI".to_string()),
                Some('>') => {
                    self.bump();
                    return Tok::Iri(value);
                }
                Some('\\') => {
                    self.bump();
                    match self.read_unicode_escape() {
                        Ok(c) => value.push(c),
                        Err(msg) => return Tok::Error(msg),
                    }
                }
                Some(c) => {
                    self.bump();
                    value.push(c);
                }
            }
        }
    }

    fn read_unicode_escape(&mut self) -> Result<char, String> {
        let kind = self.bump().ok_or_else(|| "truncated escape".to_string())?;
        let width = match kind {
            'u' => 4,
            'U' => 8,
            other => return Err(format!("invalid escape '\\{other}'")),
        };
        let mut code = 0u32;
        for _ in 0..width {
            let d = self
                .bump()
                .and_then(|c| c.to_digit(16))
                .ok_or_else(|| "bad unicode escape".to_string())?;
            code = code * 16 + d;
        }
        char::from_u32(code).ok_or_else(|| format!("invalid code point U+{code:X}"))
    }

    fn lex_string(&mut self, quote: char) -> Tok {
        self.bump(); // opening quote
        if self.peek() == Some(quote) && self.peek_at(1) == Some(quote) {
            self.bump();
            self.bump();
            return self.lex_long_string(quote);
        }
        let mut value = String::new();
        loop {
            match self.peek() {
                None => return Tok::Error("unterminated string".to_string()),
                Some('\n') => return Tok::Error("newline inside string".to_string()),
                Some(c) if c == quote => {
                    self.bump();
                    return Tok::Str(value);
                }
                Some('\\') => {
                    self.bump();
                    match self.read_string_escape() {
                        Ok(c) => value.push(c),
                        Err(msg) => return Tok::Error(msg),
                    }
                }
                Some(c) => {
                    self.bump();
                    value.push(c);
                }
            }
        }
    }

    fn lex_long_string(&mut self, quote: char) -> Tok {
        let mut value = String::new();
        loop {
            match self.peek() {
                None => return Tok::Error("unterminated long string".to_string()),
                Some(c)
                    if c == quote
                        && self.peek_at(1) == Some(quote)
                        && self.peek_at(2) == Some(quote) =>
                {
                    self.bump();
                    self.bump();
                    self.bump();
                    return Tok::Str(value);
                }
                Some('\\') => {
                    self.bump();
                    match self.read_string_escape() {
                        Ok(c) => value.push(c),
                        Err(msg) => return Tok::Error(msg),
                    }
                }
                Some(c) => {
                    self.bump();
                    value.push(c);
                }
            }
        }
    }

    fn read_string_escape(&mut self) -> Result<char, String> {
        match self.peek() {
            Some('u') | Some('U') => self.read_unicode_escape(),
            Some(c) => {
                self.bump();
                match c {
                    't' => Ok('\t'),
                    'b' => Ok('\u{8}'),
                    'n' => Ok('\n'),
                    'r' => Ok('\r'),
                    'f' => Ok('\u{c}'),
                    '"' => Ok('"'),
                    '\'' => Ok('\''),
                    '\\' => Ok('\\'),
                    other => Err(format!("invalid string escape '\\{other}'")),
                }
            }
            None => Err("truncated escape".to_string()),
        }
    }

    fn lex_at(&mut self) -> Tok {
        self.bump(); // '@'
        let word = self.take_while(|c| c.is_ascii_alphabetic());
        if word.is_empty() {
            return Tok::Error("bare '@'".to_string());
        }
        if word.eq_ignore_ascii_case("prefix") {
            return Tok::AtPrefix;
        }
        if word.eq_ignore_ascii_case("base") {
            return Tok::AtBase;
        }
        // Language tag: primary subtag already read, then -subtags.
        let mut tag = word;
        while self.peek() == Some('-') && self.peek_at(1).is_some_and(|c| c.is_ascii_alphanumeric()) {
            self.bump();
            tag.push('-');
            tag.push_str(&self.take_while(|c| c.is_ascii_alphanumeric()));
        }
        Tok::LangTag(tag)
    }

    fn lex_blank(&mut self) -> Tok {
        self.bump(); // '_'
        if self.peek() != Some(':') {
            return Tok::Error("expected ':' after '_'".to_string());
        }
        self.bump();
        let label = self.take_name(is_label_char);
        if label.is_empty() {
            return Tok::Error("empty blank node label".to_string());
        }
        Tok::BlankLabel(label)
    }

    fn lex_number(&mut self) -> Tok {
        let mut lexical = String::new();
        if matches!(self.peek(), Some('+') | Some('-')) {
            lexical.push(self.bump().unwrap());
        }
        let int_digits = self.take_while(|c| c.is_ascii_digit());
        lexical.push_str(&int_digits);
        let mut saw_fraction = false;
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
            lexical.push('.');
            lexical.push_str(&self.take_while(|c| c.is_ascii_digit()));
            saw_fraction = true;
        }
        let exp_follows = matches!(self.peek(), Some('e') | Some('E'))
            && (self.peek_at(1).is_some_and(|c| c.is_ascii_digit())
                || (matches!(self.peek_at(1), Some('+') | Some('-'))
                    && self.peek_at(2).is_some_and(|c| c.is_ascii_digit())));
        if exp_follows && (!int_digits.is_empty() || saw_fraction) {
            lexical.push(self.bump().unwrap());
            if matches!(self.peek(), Some('+') | Some('-')) {
                lexical.push(self.bump().unwrap());
            }
            lexical.push_str(&self.take_while(|c| c.is_ascii_digit()));
            return Tok::Numeric { lexical, datatype: vocab::XSD_DOUBLE };
        }
        if saw_fraction {
            return Tok::Numeric { lexical, datatype: vocab::XSD_DECIMAL };
        }
        if int_digits.is_empty() {
            return Tok::Error(format!("stray {lexical:?}"));
        }
        Tok::Numeric { lexical, datatype: vocab::XSD_INTEGER }
    }

    fn lex_word(&mut self) -> Tok {
        // Either a prefixed name or one of the bare keywords.
        let prefix = if self.peek() == Some(':') {
            String::new()
        } else {
            let first = self.bump().unwrap();
            let mut p = String::new();
            p.push(first);
            p.push_str(&self.take_name(is_label_char));
            p
        };
        if self.peek() == Some(':') {
            self.bump();
            let local = self.take_name(is_local_char);
            return Tok::PName { prefix, local };
        }
        match prefix.as_str() {
            "a" => Tok::A,
            "true" => Tok::Bool(true),
            "false" => Tok::Bool(false),
            _ if prefix.eq_ignore_ascii_case("prefix") => Tok::SparqlPrefix,
            _ if prefix.eq_ignore_ascii_case("base") => Tok::SparqlBase,
            other => Tok::Error(format!("unexpected word {other:?}")),
        }
    }

    fn take_while(&mut self, keep: impl Fn(char) -> bool) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek() {
            if keep(c) {
                self.bump();
                out.push(c);
            } else {
                break;
            }
        }
        out
    }

    /// Reads a name where '.' is allowed only when more name characters
    /// follow — a trailing dot run belongs to the statement terminator.
    fn take_name(&mut self, is_mid: impl Fn(char) -> bool) -> String {
        let mut out = String::new();
        loop {
            match self.peek() {
                Some(c) if is_mid(c) => {
                    self.bump();
                    out.push(c);
                }
                Some('.') => {
                    let mut run = 0;
                    while self.peek_at(run) == Some('.') {
                        run += 1;
                    }
                    match self.peek_at(run) {
                        Some(c) if is_mid(c) && !out.is_empty() => {
                            for _ in 0..run {
                                self.bump();
                                out.push('.');
                            }
                        }
                        _ => break,
                    }
                }
                _ => break,
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(text: &str) -> Vec<Tok> {
        lex(text).tokens.into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn basic_statement() {
        let toks = kinds("ex:Air a rdfs:Class .");
        assert_eq!(
            toks,
            vec![
                Tok::PName { prefix: "ex".into(), local: "Air".into() },
                Tok::A,
                Tok::PName { prefix: "rdfs".into(), local: "Class".into() },
                Tok::Dot,
            ]
        );
    }

    #[test]
    fn prefix_directive_forms() {
        assert_eq!(
            kinds("@prefix ex: <http://ex.org/> ."),
            vec![
                Tok::AtPrefix,
                Tok::PName { prefix: "ex".into(), local: String::new() },
                Tok::Iri("http://ex.org/".into()),
                Tok::Dot,
            ]
        );
        assert_eq!(
            kinds("PREFIX ex: <http://ex.org/>"),
            vec![
                Tok::SparqlPrefix,
                Tok::PName { prefix: "ex".into(), local: String::new() },
                Tok::Iri("http://ex.org/".into()),
            ]
        );
    }

    #[test]
    fn dot_in_local_name_vs_terminator() {
        // Trailing dot is the statement terminator; internal dots belong
        // to the name.
        let toks = kinds("ex:a.b.");
        assert_eq!(
            toks,
            vec![
                Tok::PName { prefix: "ex".into(), local: "a.b".into() },
                Tok::Dot,
            ]
        );
    }

    #[test]
    fn numbers_and_booleans() {
        assert_eq!(
            kinds("4 -3.2 1.0e6 .5 true"),
            vec![
                Tok::Numeric { lexical: "4".into(), datatype: vocab::XSD_INTEGER },
                Tok::Numeric { lexical: "-3.2".into(), datatype: vocab::XSD_DECIMAL },
                Tok::Numeric { lexical: "1.0e6".into(), datatype: vocab::XSD_DOUBLE },
                Tok::Numeric { lexical: ".5".into(), datatype: vocab::XSD_DECIMAL },
                Tok::Bool(true),
            ]
        );
        // "5." is an integer followed by the terminator.
        assert_eq!(
            kinds("5."),
            vec![
                Tok::Numeric { lexical: "5".into(), datatype: vocab::XSD_INTEGER },
                Tok::Dot,
            ]
        );
    }

    #[test]
    fn strings_escapes_and_langtags() {
        assert_eq!(
            kinds(r#""a\"b\nc" "plain"@en-GB"#),
            vec![
                Tok::Str("a\"b\nc".into()),
                Tok::Str("plain".into()),
                Tok::LangTag("en-GB".into()),
            ]
        );
        assert_eq!(kinds("\"\"\"long\nline\"\"\""), vec![Tok::Str("long\nline".into())]);
        assert_eq!(kinds("\"\""), vec![Tok::Str(String::new())]);
    }

    #[test]
    fn comments_are_trivia() {
        assert_eq!(
            kinds("# a comment\nex:A a ex:B . # trailing"),
            vec![
                Tok::PName { prefix: "ex".into(), local: "A".into() },
                Tok::A,
                Tok::PName { prefix: "ex".into(), local: "B".into() },
                Tok::Dot,
            ]
        );
    }

    #[test]
    fn errors_are_tokens_not_failures() {
        let toks = kinds("ex:A \"unterminated");
        assert!(matches!(toks.last(), Some(Tok::Error(_))));
        let toks = kinds("<http://never-closed");
        assert!(matches!(toks.last(), Some(Tok::Error(_))));
    }

    #[test]
    fn blank_labels() {
        assert_eq!(
            kinds("_:b0 _:p_b1"),
            vec![Tok::BlankLabel("b0".into()), Tok::BlankLabel("p_b1".into())]
        );
    }

    #[test]
    fn arbitrary_bytes_never_panic() {
        for garbage in ["\u{0}\u{1}\u{2}", "@@@@", "^", "_:", "\\u00", "<\\x>", "'''", "+e", "%%%"] {
            let _ = lex(garbage);
        }
    }
}
