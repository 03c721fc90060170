//! Error-recovering parser for a pragmatic Turtle subset.
//!
//! Supported: `@prefix`/`PREFIX`, `@base`/`BASE`, `#` comments, the `a`
//! keyword, `;` predicate lists, `,` object lists, `<iri>` references,
//! prefixed names, string/numeric/boolean literals, `^^` datatypes,
//! `@lang` tags, and anonymous and labeled blank nodes. RDF collections
//! `( ... )` are reported as unsupported rather than silently dropped.
//!
//! In recover mode a malformed statement is skipped up to the next `.` at
//! top-level nesting depth (string-aware) and parsing resumes, so one bad
//! statement never discards a whole document. Strict mode aborts on the
//! first problem.

mod lexer;
mod parser;

use serde::Serialize;

use crate::rdf::{Graph, PrefixEnv, RdfError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseMode {
    Strict,
    Recover,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagnosticKind {
    Lex,
    Syntax,
    UnknownPrefix,
    UnsupportedConstruct,
}

/// Region of input discarded while recovering, ending at (and including)
/// the statement terminator that resynchronized the parser.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Span {
    pub from_line: u32,
    pub from_col: u32,
    pub to_line: u32,
    pub to_col: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParseDiagnostic {
    pub line: u32,
    pub col: u32,
    pub kind: DiagnosticKind,
    pub message: String,
    pub skipped: Option<Span>,
}

impl std::fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}: {:?}: {}", self.line, self.col, self.kind, self.message)
    }
}

#[derive(Debug)]
pub struct ParseOutcome {
    pub graph: Graph,
    pub diagnostics: Vec<ParseDiagnostic>,
    /// Number of error regions skipped in recover mode.
    pub recovered_statements: usize,
}

impl ParseOutcome {
    pub fn is_clean(&self) -> bool {
        self.diagnostics.is_empty()
    }
}

/// Parses Turtle text. Recover mode always returns `Ok`; strict mode
/// fails with the first diagnostic.
pub fn parse_turtle(text: &str, mode: ParseMode) -> Result<ParseOutcome, ParseDiagnostic> {
    parser::parse(text, mode)
}

/// Recover-mode parse, which cannot fail.
pub fn parse_recover(text: &str) -> ParseOutcome {
    match parser::parse(text, ParseMode::Recover) {
        Ok(outcome) => outcome,
        Err(_) => unreachable!("recover-mode parse is total"),
    }
}

/// Expands a `p:local` name against a prefix environment.
pub fn resolve_prefixed_name(env: &PrefixEnv, qname: &str) -> Result<String, ParseDiagnostic> {
    env.resolve(qname).map_err(|e: RdfError| ParseDiagnostic {
        line: 0,
        col: 0,
        kind: DiagnosticKind::UnknownPrefix,
        message: e.to_string(),
        skipped: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::{serialize_turtle, vocab, PrefixEnv, Term, Triple};

    fn recover(text: &str) -> ParseOutcome {
        parse_recover(text)
    }

    #[test]
    fn single_statement_no_diagnostics() {
        let out = recover(
            "@prefix ex: <http://ex.org/> .\n\
             @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n\
             ex:A a rdfs:Class .",
        );
        assert!(out.is_clean());
        assert_eq!(out.graph.len(), 1);
        assert!(out.graph.contains(
            &Triple::new(
                Term::iri("http://ex.org/A"),
                Term::iri(vocab::RDF_TYPE),
                Term::iri(vocab::RDFS_CLASS),
            )
            .unwrap()
        ));
    }

    #[test]
    fn semicolon_and_comma_grouping() {
        // One subject, two predicates, the second with two objects:
        // three triples. (The count is cross-checked against a reference
        // parser in the acceptance suite.)
        let out = recover(
            "@prefix ex: <http://ex.org/> .\n\
             ex:A ex:p ex:B ;\n\
                  ex:q ex:C, ex:D .",
        );
        assert!(out.is_clean());
        assert_eq!(out.graph.len(), 3);
    }

    #[test]
    fn recovery_skips_one_statement() {
        // Five statements, the third malformed. Recover mode keeps the
        // other four and reports exactly one diagnostic whose skipped
        // span ends at statement 3's terminator (line 3, hand-labeled).
        let text = "@prefix ex: <http://ex.org/> .\n\
                    ex:A ex:p ex:B .\n\
                    ex:C ex:q .\n\
                    ex:D ex:r ex:E .\n\
                    ex:F ex:s ex:G .";
        let out = recover(text);
        assert_eq!(out.graph.len(), 3); // statements 2, 4, 5
        assert_eq!(out.diagnostics.len(), 1);
        assert_eq!(out.recovered_statements, 1);
        let diag = &out.diagnostics[0];
        assert_eq!(diag.kind, DiagnosticKind::Syntax);
        let span = diag.skipped.expect("recover mode records the skipped span");
        assert_eq!(span.from_line, 3);
        assert_eq!(span.to_line, 3);
        assert_eq!(span.to_col, 12); // just past the '.' on line 3

        // Strict mode aborts at the same place.
        let err = parse_turtle(text, ParseMode::Strict).unwrap_err();
        assert_eq!(err.line, 3);
    }

    #[test]
    fn recovery_is_monotone_over_strict_prefix() {
        // Everything strict mode would have accepted before the first
        // error is present in the recover-mode graph.
        let text = "@prefix ex: <http://ex.org/> .\n\
                    ex:A ex:p ex:B .\n\
                    ex:broken ;;; .\n\
                    ex:C ex:q ex:D .";
        let out = recover(text);
        assert!(out.graph.contains(
            &Triple::new(
                Term::iri("http://ex.org/A"),
                Term::iri("http://ex.org/p"),
                Term::iri("http://ex.org/B"),
            )
            .unwrap()
        ));
        assert_eq!(out.graph.len(), 2);
    }

    #[test]
    fn unknown_prefix_skips_statement_not_document() {
        let out = recover(
            "@prefix ex: <http://ex.org/> .\n\
             nope:A a ex:B .\n\
             ex:C a ex:D .",
        );
        assert_eq!(out.graph.len(), 1);
        assert_eq!(out.diagnostics.len(), 1);
        assert_eq!(out.diagnostics[0].kind, DiagnosticKind::UnknownPrefix);
    }

    #[test]
    fn resolve_prefixed_name_examples() {
        let mut env = PrefixEnv::new();
        env.declare("rdfs", vocab::RDFS_NS);
        assert_eq!(
            resolve_prefixed_name(&env, "rdfs:Class").unwrap(),
            "http://www.w3.org/2000/01/rdf-schema#Class"
        );
        let err = resolve_prefixed_name(&PrefixEnv::new(), "ex:A").unwrap_err();
        assert_eq!(err.kind, DiagnosticKind::UnknownPrefix);
    }

    #[test]
    fn shadowed_prefix_resolves_to_latest() {
        let out = recover(
            "@prefix ex: <http://one.example/> .\n\
             ex:A a ex:T .\n\
             @prefix ex: <http://two.example/> .\n\
             ex:B a ex:T .",
        );
        assert!(out.is_clean());
        assert!(out
            .graph
            .iter()
            .any(|t| t.subject == Term::iri("http://one.example/A")));
        assert!(out
            .graph
            .iter()
            .any(|t| t.subject == Term::iri("http://two.example/B")));
        assert_eq!(out.graph.prefixes().warnings().len(), 1);
    }

    #[test]
    fn collections_are_unsupported_constructs() {
        let out = recover(
            "@prefix ex: <http://ex.org/> .\n\
             ex:A ex:list (ex:B ex:C) .\n\
             ex:D a ex:T .",
        );
        assert_eq!(out.diagnostics.len(), 1);
        assert_eq!(out.diagnostics[0].kind, DiagnosticKind::UnsupportedConstruct);
        assert_eq!(out.graph.len(), 1);
    }

    #[test]
    fn anonymous_blanks_get_fresh_labels() {
        let out = recover(
            "@prefix ex: <http://ex.org/> .\n\
             _:b0 ex:p [ ex:q ex:B ] .",
        );
        assert!(out.is_clean());
        assert_eq!(out.graph.len(), 2);
        // The anonymous node must not collide with the explicit _:b0.
        let labels: Vec<String> = out
            .graph
            .iter()
            .flat_map(|t| [&t.subject, &t.object])
            .filter_map(|term| match term {
                Term::Blank(l) => Some(l.clone()),
                _ => None,
            })
            .collect();
        assert!(labels.contains(&"b0".to_string()));
        assert!(labels.contains(&"b1".to_string()));
    }

    #[test]
    fn labeled_blanks_survive_round_trip() {
        let out = recover(
            "@prefix ex: <http://ex.org/> .\n\
             _:scoped_b0 a ex:T .",
        );
        let text = serialize_turtle(&out.graph);
        let again = recover(&text);
        assert!(again.is_clean());
        assert_eq!(again.graph, out.graph);
    }

    #[test]
    fn base_resolution() {
        let out = recover(
            "@base <http://ex.org/v/> .\n\
             @prefix ex: <http://ex.org/> .\n\
             <doc> ex:p <#frag> .",
        );
        assert!(out.is_clean());
        assert!(out.graph.contains(
            &Triple::new(
                Term::iri("http://ex.org/v/doc"),
                Term::iri("http://ex.org/p"),
                Term::iri("http://ex.org/v/#frag"),
            )
            .unwrap()
        ));
    }

    #[test]
    fn literals_parse_with_inferred_datatypes() {
        let out = recover(
            "@prefix ex: <http://ex.org/> .\n\
             @prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n\
             ex:A ex:p \"plain\", \"tagged\"@en, \"typed\"^^xsd:float, 4, 4.5, 4.5e1, true .",
        );
        assert!(out.is_clean());
        let datatypes: Vec<String> = out
            .graph
            .iter()
            .filter_map(|t| match &t.object {
                Term::Literal { datatype, .. } => Some(datatype.clone()),
                _ => None,
            })
            .collect();
        assert_eq!(datatypes.len(), 7);
        for expected in [
            vocab::XSD_STRING,
            vocab::RDF_LANG_STRING,
            "http://www.w3.org/2001/XMLSchema#float",
            vocab::XSD_INTEGER,
            vocab::XSD_DECIMAL,
            vocab::XSD_DOUBLE,
            vocab::XSD_BOOLEAN,
        ] {
            assert!(datatypes.iter().any(|d| d == expected), "missing {expected}");
        }
    }

    #[test]
    fn recover_mode_is_total_on_garbage() {
        for garbage in [
            "",
            "   ",
            "####",
            "<<<>>>",
            "\u{0}\u{1}\u{2}garbage",
            "@prefix",
            "@prefix ex:",
            "ex:A",
            "\"unterminated",
            "[[[",
            ")))",
            "ex:A ex:p 'x' extra words here",
        ] {
            let out = recover(garbage);
            // Determinism: same bytes, same outcome.
            let again = recover(garbage);
            assert_eq!(out.graph, again.graph);
            assert_eq!(out.diagnostics.len(), again.diagnostics.len());
        }
    }
}
