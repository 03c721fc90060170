use std::collections::BTreeSet;

use super::lexer::{lex, LexOutput, Tok, Token};
use super::{DiagnosticKind, ParseDiagnostic, ParseMode, ParseOutcome, Span};
use crate::rdf::{vocab, Graph, PrefixEnv, Term, Triple};

pub(crate) fn parse(text: &str, mode: ParseMode) -> Result<ParseOutcome, ParseDiagnostic> {
    let lexed = lex(text);
    Parser::new(lexed, mode).run()
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    eof_line: u32,
    eof_col: u32,
    mode: ParseMode,
    env: PrefixEnv,
    graph: Graph,
    diagnostics: Vec<ParseDiagnostic>,
    recovered: usize,
    buffer: Vec<Triple>,
    blank_counter: usize,
    used_labels: BTreeSet<String>,
}

impl Parser {
    fn new(lexed: LexOutput, mode: ParseMode) -> Parser {
        let used_labels = lexed
            .tokens
            .iter()
            .filter_map(|t| match &t.tok {
                Tok::BlankLabel(label) => Some(label.clone()),
                _ => None,
            })
            .collect();
        Parser {
            tokens: lexed.tokens,
            pos: 0,
            eof_line: lexed.end_line,
            eof_col: lexed.end_col,
            mode,
            env: PrefixEnv::new(),
            graph: Graph::new(),
            diagnostics: Vec::new(),
            recovered: 0,
            buffer: Vec::new(),
            blank_counter: 0,
            used_labels,
        }
    }

    fn run(mut self) -> Result<ParseOutcome, ParseDiagnostic> {
        while self.pos < self.tokens.len() {
            let stmt_start = self.here();
            match self.statement() {
                Ok(()) => {
                    for triple in self.buffer.drain(..) {
                        self.graph.insert(triple);
                    }
                }
                Err(mut diag) => {
                    self.buffer.clear();
                    if matches!(self.mode, ParseMode::Strict) {
                        return Err(diag);
                    }
                    let to = self.skip_to_terminator();
                    diag.skipped = Some(Span {
                        from_line: stmt_start.0,
                        from_col: stmt_start.1,
                        to_line: to.0,
                        to_col: to.1,
                    });
                    self.diagnostics.push(diag);
                    self.recovered += 1;
                }
            }
        }
        *self.graph.prefixes_mut() = self.env;
        Ok(ParseOutcome {
            graph: self.graph,
            diagnostics: self.diagnostics,
            recovered_statements: self.recovered,
        })
    }

    // ── token plumbing ───────────────────────────────────────────────

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (u32, u32) {
        match self.tokens.get(self.pos) {
            Some(t) => (t.line, t.col),
            None => (self.eof_line, self.eof_col),
        }
    }

    fn advance(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn diag(&self, kind: DiagnosticKind, message: impl Into<String>) -> ParseDiagnostic {
        let (line, col) = self.here();
        ParseDiagnostic { line, col, kind, message: message.into(), skipped: None }
    }

    fn syntax(&self, message: impl Into<String>) -> ParseDiagnostic {
        self.diag(DiagnosticKind::Syntax, message)
    }

    /// Advances past tokens until a `.` at bracket depth zero, consuming
    /// it. Strings are already opaque tokens, so the scan is string-aware
    /// by construction. Returns the end position of the skipped region.
    fn skip_to_terminator(&mut self) -> (u32, u32) {
        let mut depth: u32 = 0;
        loop {
            match self.peek() {
                None => return (self.eof_line, self.eof_col),
                Some(Tok::Dot) if depth == 0 => {
                    let t = self.advance().unwrap();
                    return (t.end_line, t.end_col);
                }
                Some(Tok::LBracket) | Some(Tok::LParen) => {
                    depth += 1;
                    self.advance();
                }
                Some(Tok::RBracket) | Some(Tok::RParen) => {
                    depth = depth.saturating_sub(1);
                    self.advance();
                }
                Some(_) => {
                    self.advance();
                }
            }
        }
    }

    fn expect_dot(&mut self) -> Result<(), ParseDiagnostic> {
        match self.peek() {
            Some(Tok::Dot) => {
                self.advance();
                Ok(())
            }
            _ => Err(self.syntax("expected '.' to end statement")),
        }
    }

    fn fresh_blank(&mut self) -> String {
        loop {
            let candidate = format!("b{}", self.blank_counter);
            self.blank_counter += 1;
            if !self.used_labels.contains(&candidate) {
                self.used_labels.insert(candidate.clone());
                return candidate;
            }
        }
    }

    // ── grammar ──────────────────────────────────────────────────────

    fn statement(&mut self) -> Result<(), ParseDiagnostic> {
        match self.peek() {
            Some(Tok::AtPrefix) => {
                self.advance();
                let (label, ns) = self.prefix_binding()?;
                self.expect_dot()?;
                self.env.declare(label, ns);
                Ok(())
            }
            Some(Tok::SparqlPrefix) => {
                self.advance();
                let (label, ns) = self.prefix_binding()?;
                self.env.declare(label, ns);
                Ok(())
            }
            Some(Tok::AtBase) => {
                self.advance();
                let base = self.base_value()?;
                self.expect_dot()?;
                self.env.set_base(base);
                Ok(())
            }
            Some(Tok::SparqlBase) => {
                self.advance();
                let base = self.base_value()?;
                self.env.set_base(base);
                Ok(())
            }
            Some(Tok::Error(msg)) => {
                let msg = msg.clone();
                Err(self.diag(DiagnosticKind::Lex, msg))
            }
            Some(_) => {
                let subject = self.subject()?;
                self.predicate_object_list(&subject)?;
                self.expect_dot()
            }
            None => Ok(()),
        }
    }

    fn prefix_binding(&mut self) -> Result<(String, String), ParseDiagnostic> {
        let label = match self.peek() {
            Some(Tok::PName { prefix, local }) if local.is_empty() => {
                let p = prefix.clone();
                self.advance();
                p
            }
            _ => return Err(self.syntax("expected prefix label in declaration")),
        };
        let ns = match self.peek() {
            Some(Tok::Iri(iri)) => {
                let raw = iri.clone();
                self.advance();
                self.absolutize(&raw)?
            }
            _ => return Err(self.syntax("expected namespace IRI in prefix declaration")),
        };
        Ok((label, ns))
    }

    fn base_value(&mut self) -> Result<String, ParseDiagnostic> {
        match self.peek() {
            Some(Tok::Iri(iri)) => {
                let raw = iri.clone();
                self.advance();
                self.absolutize(&raw)
            }
            _ => Err(self.syntax("expected IRI after base declaration")),
        }
    }

    fn absolutize(&self, raw: &str) -> Result<String, ParseDiagnostic> {
        if crate::rdf::is_absolute_iri(raw) {
            return Ok(raw.to_string());
        }
        match self.env.base() {
            Some(base) => Ok(join_iri(base, raw)),
            None => Err(self.syntax(format!("relative IRI {raw:?} without a base"))),
        }
    }

    fn resolve_pname(&self, prefix: &str, local: &str) -> Result<Term, ParseDiagnostic> {
        match self.env.namespace(prefix) {
            Some(ns) => Ok(Term::Iri(format!("{ns}{local}"))),
            None => Err(self.diag(
                DiagnosticKind::UnknownPrefix,
                format!("prefix {prefix:?} is not declared"),
            )),
        }
    }

    fn subject(&mut self) -> Result<Term, ParseDiagnostic> {
        match self.peek() {
            Some(Tok::Str(_)) | Some(Tok::Numeric { .. }) | Some(Tok::Bool(_)) => {
                Err(self.syntax("literal cannot be a statement subject"))
            }
            _ => self.node(),
        }
    }

    fn node(&mut self) -> Result<Term, ParseDiagnostic> {
        match self.peek() {
            Some(Tok::Iri(iri)) => {
                let raw = iri.clone();
                self.advance();
                Ok(Term::Iri(self.absolutize(&raw)?))
            }
            Some(Tok::PName { prefix, local }) => {
                let (p, l) = (prefix.clone(), local.clone());
                let term = self.resolve_pname(&p, &l)?;
                self.advance();
                Ok(term)
            }
            Some(Tok::BlankLabel(label)) => {
                let l = label.clone();
                self.advance();
                Ok(Term::Blank(l))
            }
            Some(Tok::LBracket) => {
                self.advance();
                let node = Term::Blank(self.fresh_blank());
                if self.peek() == Some(&Tok::RBracket) {
                    self.advance();
                    return Ok(node);
                }
                self.predicate_object_list(&node)?;
                match self.peek() {
                    Some(Tok::RBracket) => {
                        self.advance();
                        Ok(node)
                    }
                    _ => Err(self.syntax("expected ']' to close blank node")),
                }
            }
            Some(Tok::LParen) => Err(self.diag(
                DiagnosticKind::UnsupportedConstruct,
                "RDF collections '( ... )' are not supported",
            )),
            Some(Tok::Error(msg)) => {
                let msg = msg.clone();
                Err(self.diag(DiagnosticKind::Lex, msg))
            }
            Some(other) => Err(self.syntax(format!("unexpected token {other:?}"))),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn predicate_object_list(&mut self, subject: &Term) -> Result<(), ParseDiagnostic> {
        loop {
            let predicate = match self.peek() {
                Some(Tok::A) => {
                    self.advance();
                    Term::Iri(vocab::RDF_TYPE.to_string())
                }
                Some(Tok::Iri(_)) | Some(Tok::PName { .. }) => self.node()?,
                Some(Tok::Error(msg)) => {
                    let msg = msg.clone();
                    return Err(self.diag(DiagnosticKind::Lex, msg));
                }
                Some(other) => {
                    return Err(self.syntax(format!("expected predicate, found {other:?}")))
                }
                None => return Err(self.syntax("unexpected end of input in predicate position")),
            };
            self.object_list(subject, &predicate)?;
            if self.peek() == Some(&Tok::Semi) {
                while self.peek() == Some(&Tok::Semi) {
                    self.advance();
                }
                match self.peek() {
                    Some(Tok::A) | Some(Tok::Iri(_)) | Some(Tok::PName { .. }) => continue,
                    _ => return Ok(()), // trailing ';'
                }
            }
            return Ok(());
        }
    }

    fn object_list(&mut self, subject: &Term, predicate: &Term) -> Result<(), ParseDiagnostic> {
        loop {
            let object = self.object()?;
            let triple = Triple::new(subject.clone(), predicate.clone(), object)
                .map_err(|e| self.syntax(e.to_string()))?;
            self.buffer.push(triple);
            if self.peek() == Some(&Tok::Comma) {
                self.advance();
                continue;
            }
            return Ok(());
        }
    }

    fn object(&mut self) -> Result<Term, ParseDiagnostic> {
        match self.peek() {
            Some(Tok::Str(value)) => {
                let lexical = value.clone();
                self.advance();
                match self.peek() {
                    Some(Tok::LangTag(tag)) => {
                        let tag = tag.clone();
                        self.advance();
                        Ok(Term::lang_literal(lexical, tag))
                    }
                    Some(Tok::DoubleCaret) => {
                        self.advance();
                        let datatype = match self.node()? {
                            Term::Iri(iri) => iri,
                            other => {
                                return Err(
                                    self.syntax(format!("datatype must be an IRI, found {other}"))
                                )
                            }
                        };
                        Ok(Term::typed_literal(lexical, datatype))
                    }
                    _ => Ok(Term::literal(lexical)),
                }
            }
            Some(Tok::Numeric { lexical, datatype }) => {
                let term = Term::typed_literal(lexical.clone(), *datatype);
                self.advance();
                Ok(term)
            }
            Some(Tok::Bool(value)) => {
                let term =
                    Term::typed_literal(if *value { "true" } else { "false" }, vocab::XSD_BOOLEAN);
                self.advance();
                Ok(term)
            }
            _ => self.node(),
        }
    }
}

/// Minimal relative-reference resolution against a base IRI: fragments,
/// absolute paths and sibling paths. Full RFC 3987 canonicalization is a
/// non-goal.
fn join_iri(base: &str, rel: &str) -> String {
    let without_fragment = base.split('#').next().unwrap_or(base);
    if let Some(frag) = rel.strip_prefix('#') {
        return format!("{without_fragment}#{frag}");
    }
    let without_query = without_fragment.split('?').next().unwrap_or(without_fragment);
    if rel.starts_with("//") {
        let scheme = without_query.split(':').next().unwrap_or("");
        return format!("{scheme}:{rel}");
    }
    if rel.starts_with('/') {
        if let Some(authority) = without_query.find("://") {
            let after = authority + 3;
            let path_start = without_query[after..]
                .find('/')
                .map(|i| after + i)
                .unwrap_or(without_query.len());
            return format!("{}{rel}", &without_query[..path_start]);
        }
        return format!("{without_query}{rel}");
    }
    match without_query.rfind('/') {
        Some(i) if without_query.find("://").map_or(true, |a| i > a + 2) => {
            format!("{}{rel}", &without_query[..=i])
        }
        _ => format!("{without_query}/{rel}"),
    }
}

#[cfg(test)]
mod join_tests {
    use super::join_iri;

    #[test]
    fn join_forms() {
        assert_eq!(join_iri("http://ex.org/v/", "name"), "http://ex.org/v/name");
        assert_eq!(join_iri("http://ex.org/v/doc", "name"), "http://ex.org/v/name");
        assert_eq!(join_iri("http://ex.org/v/", "#frag"), "http://ex.org/v/#frag");
        assert_eq!(join_iri("http://ex.org/a/b", "/root"), "http://ex.org/root");
        assert_eq!(join_iri("http://ex.org/a#x", "#y"), "http://ex.org/a#y");
    }
}
