//! Deterministic Turtle serialization.
//!
//! Output layout is fixed so that identical graphs produce identical bytes
//! across runs: prefixes sorted by label, subjects sorted by term, `a`
//! first within a subject, remaining predicates sorted, object lists
//! sorted and comma-grouped.

use std::collections::BTreeMap;
use std::fmt::Write;

use super::{vocab, Graph, Term};

/// Infers the datatype a bare Turtle token with this lexical form would
/// carry, if any. Shared between the writer (to decide when a literal can
/// be written bare) and the parser (to type bare tokens), which is what
/// makes numeric round-trips exact.
pub fn bare_token_datatype(lexical: &str) -> Option<&'static str> {
    if lexical == "true" || lexical == "false" {
        return Some(vocab::XSD_BOOLEAN);
    }
    let rest = lexical.strip_prefix(['+', '-']).unwrap_or(lexical);
    if rest.is_empty() {
        return None;
    }
    let bytes = rest.as_bytes();
    let all_digits = |s: &[u8]| !s.is_empty() && s.iter().all(u8::is_ascii_digit);
    if all_digits(bytes) {
        return Some(vocab::XSD_INTEGER);
    }
    // Double: mantissa with optional dot, then a mandatory exponent.
    if let Some(epos) = rest.find(['e', 'E']) {
        let (mantissa, exp) = rest.split_at(epos);
        let exp = &exp[1..];
        let exp = exp.strip_prefix(['+', '-']).unwrap_or(exp);
        if !all_digits(exp.as_bytes()) {
            return None;
        }
        let mantissa_ok = match mantissa.split_once('.') {
            Some((int, frac)) => {
                (all_digits(int.as_bytes()) && frac.bytes().all(|b| b.is_ascii_digit()))
                    || (int.is_empty() && all_digits(frac.as_bytes()))
            }
            None => all_digits(mantissa.as_bytes()),
        };
        return mantissa_ok.then_some(vocab::XSD_DOUBLE);
    }
    // Decimal: digits '.' digits, with at least one digit after the dot.
    if let Some((int, frac)) = rest.split_once('.') {
        if int.bytes().all(|b| b.is_ascii_digit()) && all_digits(frac.as_bytes()) {
            return Some(vocab::XSD_DECIMAL);
        }
    }
    None
}

fn local_name_is_safe(local: &str) -> bool {
    let mut chars = local.chars();
    match chars.next() {
        Some(c) if c.is_alphanumeric() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || c == '_' || c == '-')
}

fn escape_string(lexical: &str, out: &mut String) {
    for c in lexical.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
}

fn escape_iri(iri: &str) -> String {
    let mut out = String::with_capacity(iri.len());
    for c in iri.chars() {
        match c {
            '>' => out.push_str("\\u003E"),
            '\\' => out.push_str("\\u005C"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

struct Compactor<'a> {
    // namespace -> label, longest namespace tried first
    by_namespace: Vec<(&'a str, &'a str)>,
}

impl<'a> Compactor<'a> {
    fn new(prefixes: &'a BTreeMap<String, String>) -> Compactor<'a> {
        let mut by_namespace: Vec<(&str, &str)> = prefixes
            .iter()
            .map(|(label, ns)| (ns.as_str(), label.as_str()))
            .collect();
        // Longest namespace wins; label order breaks ties deterministically.
        by_namespace.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.1.cmp(b.1)));
        Compactor { by_namespace }
    }

    fn compact(&self, iri: &str) -> Option<String> {
        for (ns, label) in &self.by_namespace {
            if let Some(local) = iri.strip_prefix(ns) {
                if local_name_is_safe(local) {
                    return Some(format!("{label}:{local}"));
                }
            }
        }
        None
    }
}

fn render_term(term: &Term, compactor: &Compactor<'_>, as_predicate: bool) -> String {
    match term {
        Term::Iri(iri) => {
            if as_predicate && iri == vocab::RDF_TYPE {
                return "a".to_string();
            }
            compactor
                .compact(iri)
                .unwrap_or_else(|| format!("<{}>", escape_iri(iri)))
        }
        Term::Blank(label) => format!("_:{label}"),
        Term::Literal { lexical, datatype, lang } => {
            if let Some(tag) = lang {
                let mut out = String::from("\"");
                escape_string(lexical, &mut out);
                out.push('"');
                out.push('@');
                out.push_str(tag);
                return out;
            }
            if bare_token_datatype(lexical) == Some(datatype.as_str()) {
                return lexical.clone();
            }
            let mut out = String::from("\"");
            escape_string(lexical, &mut out);
            out.push('"');
            if datatype != vocab::XSD_STRING {
                out.push_str("^^");
                out.push_str(
                    &compactor
                        .compact(datatype)
                        .unwrap_or_else(|| format!("<{}>", escape_iri(datatype))),
                );
            }
            out
        }
    }
}

/// Serializes a graph to Turtle text (UTF-8, LF line endings).
///
/// The four well-known prefixes are always declared; any other prefix from
/// the graph's environment is declared only when some term actually uses
/// its namespace. Re-parsing the output yields a graph equal to the input.
pub fn serialize_turtle(graph: &Graph) -> String {
    let mut declared: BTreeMap<String, String> = vocab::WELL_KNOWN_PREFIXES
        .iter()
        .map(|(l, n)| (l.to_string(), n.to_string()))
        .collect();

    let uses_namespace = |ns: &str| {
        graph.iter().any(|t| {
            [&t.subject, &t.predicate, &t.object].into_iter().any(|term| match term {
                Term::Iri(iri) => iri.starts_with(ns),
                Term::Literal { datatype, .. } => datatype.starts_with(ns),
                Term::Blank(_) => false,
            })
        })
    };
    for (label, ns) in graph.prefixes().iter() {
        if declared.contains_key(label) {
            continue;
        }
        if uses_namespace(ns) {
            declared.insert(label.to_string(), ns.to_string());
        }
    }

    let mut out = String::new();
    for (label, ns) in &declared {
        let _ = writeln!(out, "@prefix {label}: <{}> .", escape_iri(ns));
    }

    let compactor = Compactor::new(&declared);

    // subject -> predicate -> objects, everything in term order already
    // because the graph stores a BTreeSet.
    let mut current_subject: Option<&Term> = None;
    let mut by_predicate: BTreeMap<&Term, Vec<&Term>> = BTreeMap::new();

    let flush = |subject: &Term, by_predicate: &mut BTreeMap<&Term, Vec<&Term>>, out: &mut String| {
        out.push('\n');
        let subject_text = render_term(subject, &compactor, false);
        let mut predicates: Vec<(&Term, &Vec<&Term>)> = by_predicate.iter().map(|(p, o)| (*p, o)).collect();
        // `a` leads; everything else keeps term order.
        predicates.sort_by(|(a, _), (b, _)| {
            let a_type = a.as_iri() == Some(vocab::RDF_TYPE);
            let b_type = b.as_iri() == Some(vocab::RDF_TYPE);
            b_type.cmp(&a_type).then_with(|| a.cmp(b))
        });
        for (i, (predicate, objects)) in predicates.iter().enumerate() {
            let rendered: Vec<String> = objects
                .iter()
                .map(|o| render_term(o, &compactor, false))
                .collect();
            let lead = if i == 0 { subject_text.clone() } else { "   ".to_string() };
            let tail = if i + 1 == predicates.len() { " ." } else { " ;" };
            let _ = writeln!(
                out,
                "{lead} {} {}{tail}",
                render_term(predicate, &compactor, true),
                rendered.join(", ")
            );
        }
        by_predicate.clear();
    };

    for triple in graph.iter() {
        if current_subject.is_some() && current_subject != Some(&triple.subject) {
            flush(current_subject.unwrap(), &mut by_predicate, &mut out);
        }
        current_subject = Some(&triple.subject);
        by_predicate.entry(&triple.predicate).or_default().push(&triple.object);
    }
    if let Some(subject) = current_subject {
        flush(subject, &mut by_predicate, &mut out);
    }

    out
}
