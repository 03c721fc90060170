//! Foundational RDF data model: terms, triples, graphs and prefix
//! environments, plus a deterministic Turtle writer.
//!
//! Graphs are immutable values once constructed and use set semantics
//! (duplicate triples collapse silently); provenance counting is the
//! consolidation stage's job, not the graph's.

mod writer;

pub use writer::serialize_turtle;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Well-known vocabulary IRIs used throughout the pipeline.
pub mod vocab {
    pub const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
    pub const RDFS_NS: &str = "http://www.w3.org/2000/01/rdf-schema#";
    pub const OWL_NS: &str = "http://www.w3.org/2002/07/owl#";
    pub const XSD_NS: &str = "http://www.w3.org/2001/XMLSchema#";

    pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
    pub const RDF_PROPERTY: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#Property";
    pub const RDF_LANG_STRING: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";

    pub const RDFS_CLASS: &str = "http://www.w3.org/2000/01/rdf-schema#Class";
    pub const RDFS_SUB_CLASS_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
    pub const RDFS_DOMAIN: &str = "http://www.w3.org/2000/01/rdf-schema#domain";
    pub const RDFS_RANGE: &str = "http://www.w3.org/2000/01/rdf-schema#range";
    pub const RDFS_LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";

    pub const OWL_CLASS: &str = "http://www.w3.org/2002/07/owl#Class";
    pub const OWL_OBJECT_PROPERTY: &str = "http://www.w3.org/2002/07/owl#ObjectProperty";
    pub const OWL_DATATYPE_PROPERTY: &str = "http://www.w3.org/2002/07/owl#DatatypeProperty";

    pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
    pub const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
    pub const XSD_DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
    pub const XSD_DOUBLE: &str = "http://www.w3.org/2001/XMLSchema#double";
    pub const XSD_BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";
    pub const XSD_DATE: &str = "http://www.w3.org/2001/XMLSchema#date";

    /// The four prefix declarations every serialized document carries.
    pub const WELL_KNOWN_PREFIXES: [(&str, &str); 4] = [
        ("owl", OWL_NS),
        ("rdf", RDF_NS),
        ("rdfs", RDFS_NS),
        ("xsd", XSD_NS),
    ];
}

#[derive(Debug, Error)]
pub enum RdfError {
    #[error("triple subject must be an IRI or blank node, got literal {0:?}")]
    LiteralSubject(String),
    #[error("triple predicate must be an IRI, got {0}")]
    NonIriPredicate(String),
    #[error("IRI {0:?} is not absolute (missing scheme separator)")]
    RelativeIri(String),
}

/// An RDF term: IRI, blank node, or literal.
///
/// Term equality is syntactic: exact string match after prefix resolution,
/// with no IRI normalization beyond that. The derived ordering gives graphs
/// a stable iteration and serialization order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(String),
    Blank(String),
    Literal {
        lexical: String,
        datatype: String,
        lang: Option<String>,
    },
}

impl Term {
    pub fn iri(value: impl Into<String>) -> Term {
        Term::Iri(value.into())
    }

    pub fn blank(label: impl Into<String>) -> Term {
        Term::Blank(label.into())
    }

    /// A plain literal; gets the string datatype.
    pub fn literal(lexical: impl Into<String>) -> Term {
        Term::Literal {
            lexical: lexical.into(),
            datatype: vocab::XSD_STRING.to_string(),
            lang: None,
        }
    }

    pub fn typed_literal(lexical: impl Into<String>, datatype: impl Into<String>) -> Term {
        Term::Literal {
            lexical: lexical.into(),
            datatype: datatype.into(),
            lang: None,
        }
    }

    /// A language-tagged literal; gets the language-string datatype.
    pub fn lang_literal(lexical: impl Into<String>, lang: impl Into<String>) -> Term {
        Term::Literal {
            lexical: lexical.into(),
            datatype: vocab::RDF_LANG_STRING.to_string(),
            lang: Some(lang.into()),
        }
    }

    pub fn is_iri(&self) -> bool {
        matches!(self, Term::Iri(_))
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::Blank(_))
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal { .. })
    }

    pub fn as_iri(&self) -> Option<&str> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => write!(f, "<{iri}>"),
            Term::Blank(label) => write!(f, "_:{label}"),
            Term::Literal { lexical, datatype, lang } => match lang {
                Some(tag) => write!(f, "{lexical:?}@{tag}"),
                None => write!(f, "{lexical:?}^^<{datatype}>"),
            },
        }
    }
}

/// Returns true when `iri` contains a scheme separator, i.e. a `:` before
/// any `/`, `?` or `#`.
pub fn is_absolute_iri(iri: &str) -> bool {
    for c in iri.chars() {
        match c {
            ':' => return true,
            '/' | '?' | '#' => return false,
            _ => {}
        }
    }
    false
}

/// One RDF statement. Construction enforces the positional invariants:
/// the subject is an IRI or blank node, the predicate an absolute IRI.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Result<Triple, RdfError> {
        if let Term::Literal { lexical, .. } = &subject {
            return Err(RdfError::LiteralSubject(lexical.clone()));
        }
        match &predicate {
            Term::Iri(iri) => {
                if !is_absolute_iri(iri) {
                    return Err(RdfError::RelativeIri(iri.clone()));
                }
            }
            other => return Err(RdfError::NonIriPredicate(other.to_string())),
        }
        if let Term::Iri(iri) = &subject {
            if !is_absolute_iri(iri) {
                return Err(RdfError::RelativeIri(iri.clone()));
            }
        }
        if let Term::Iri(iri) = &object {
            if !is_absolute_iri(iri) {
                return Err(RdfError::RelativeIri(iri.clone()));
            }
        }
        Ok(Triple { subject, predicate, object })
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

/// Prefix label → namespace map plus optional base IRI.
///
/// Re-declaring a label with a different namespace shadows the earlier
/// binding and records a warning; it never fails.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrefixEnv {
    map: BTreeMap<String, String>,
    base: Option<String>,
    warnings: Vec<String>,
}

impl PrefixEnv {
    pub fn new() -> PrefixEnv {
        PrefixEnv::default()
    }

    /// An environment pre-loaded with rdf, rdfs, owl and xsd.
    pub fn well_known() -> PrefixEnv {
        let mut env = PrefixEnv::new();
        for (label, ns) in vocab::WELL_KNOWN_PREFIXES {
            env.declare(label, ns);
        }
        env
    }

    pub fn declare(&mut self, label: impl Into<String>, namespace: impl Into<String>) {
        let label = label.into();
        let namespace = namespace.into();
        if let Some(old) = self.map.get(&label) {
            if *old != namespace {
                self.warnings.push(format!(
                    "prefix {label:?} redeclared: {old} shadowed by {namespace}"
                ));
            }
        }
        self.map.insert(label, namespace);
    }

    pub fn set_base(&mut self, base: impl Into<String>) {
        self.base = Some(base.into());
    }

    pub fn base(&self) -> Option<&str> {
        self.base.as_deref()
    }

    pub fn namespace(&self, label: &str) -> Option<&str> {
        self.map.get(label).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.map.iter().map(|(l, n)| (l.as_str(), n.as_str()))
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Expands `p:local` (or `:local`) against the declared namespaces.
    pub fn resolve(&self, qname: &str) -> Result<String, RdfError> {
        let (prefix, local) = match qname.split_once(':') {
            Some(parts) => parts,
            None => return Err(RdfError::RelativeIri(qname.to_string())),
        };
        match self.map.get(prefix) {
            Some(ns) => Ok(format!("{ns}{local}")),
            None => Err(RdfError::RelativeIri(format!("unknown prefix {prefix:?} in {qname:?}"))),
        }
    }

    /// Union of two environments; `other` shadows on conflicts, with the
    /// usual warnings recorded on the result.
    pub fn merged(&self, other: &PrefixEnv) -> PrefixEnv {
        let mut out = self.clone();
        for (label, ns) in other.iter() {
            out.declare(label, ns);
        }
        if out.base.is_none() {
            out.base = other.base.clone();
        }
        out
    }
}

/// A set of triples with a prefix environment and an optional provenance
/// label naming the response the graph came from.
///
/// Equality compares the triple sets term-for-term; the prefix environment
/// and provenance are presentation and lineage metadata.
#[derive(Debug, Clone, Default)]
pub struct Graph {
    triples: BTreeSet<Triple>,
    prefixes: PrefixEnv,
    provenance: Option<String>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Graph) -> bool {
        self.triples == other.triples
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new() -> Graph {
        Graph::default()
    }

    pub fn with_prefixes(prefixes: PrefixEnv) -> Graph {
        Graph { prefixes, ..Graph::default() }
    }

    pub fn set_provenance(&mut self, label: impl Into<String>) {
        self.provenance = Some(label.into());
    }

    pub fn provenance(&self) -> Option<&str> {
        self.provenance.as_deref()
    }

    pub fn prefixes(&self) -> &PrefixEnv {
        &self.prefixes
    }

    pub fn prefixes_mut(&mut self) -> &mut PrefixEnv {
        &mut self.prefixes
    }

    /// Inserts a triple; returns true iff it was absent.
    pub fn insert(&mut self, triple: Triple) -> bool {
        self.triples.insert(triple)
    }

    /// Builds and inserts a triple from raw terms, enforcing the triple
    /// invariants.
    pub fn insert_terms(&mut self, s: Term, p: Term, o: Term) -> Result<bool, RdfError> {
        Ok(self.insert(Triple::new(s, p, o)?))
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    /// Objects of all `(subject, predicate, _)` statements.
    pub fn objects_of<'g>(&'g self, subject: &'g Term, predicate: &'g str) -> impl Iterator<Item = &'g Term> {
        self.triples.iter().filter_map(move |t| {
            (t.subject == *subject && t.predicate.as_iri() == Some(predicate)).then_some(&t.object)
        })
    }

    /// Distinct subjects, in term order.
    pub fn subjects(&self) -> impl Iterator<Item = &Term> {
        let mut last: Option<&Term> = None;
        self.triples.iter().filter_map(move |t| {
            if last == Some(&t.subject) {
                None
            } else {
                last = Some(&t.subject);
                Some(&t.subject)
            }
        })
    }

    /// Set union of the two triple sets. Prefix environments merge with
    /// shadow warnings; provenance survives only when both sides agree.
    pub fn merge(&self, other: &Graph) -> Graph {
        let mut triples = self.triples.clone();
        triples.extend(other.triples.iter().cloned());
        let provenance = match (&self.provenance, &other.provenance) {
            (Some(a), Some(b)) if a == b => Some(a.clone()),
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.clone()),
            _ => None,
        };
        Graph {
            triples,
            prefixes: self.prefixes.merged(&other.prefixes),
            provenance,
        }
    }

    /// Rewrites every blank node label through `rename`. Used to scope
    /// skolemized labels with a provenance prefix before graphs from
    /// different responses meet in one consolidation batch.
    pub fn rename_blanks(&self, rename: impl Fn(&str) -> String) -> Graph {
        let rename_term = |t: &Term| match t {
            Term::Blank(l) => Term::Blank(rename(l)),
            other => other.clone(),
        };
        Graph {
            triples: self
                .triples
                .iter()
                .map(|t| Triple {
                    subject: rename_term(&t.subject),
                    predicate: t.predicate.clone(),
                    object: rename_term(&t.object),
                })
                .collect(),
            prefixes: self.prefixes.clone(),
            provenance: self.provenance.clone(),
        }
    }

    pub fn has_blank_nodes(&self) -> bool {
        self.triples
            .iter()
            .any(|t| t.subject.is_blank() || t.object.is_blank())
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Graph {
        Graph {
            triples: iter.into_iter().collect(),
            ..Graph::default()
        }
    }
}
