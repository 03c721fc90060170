//! modl-forge converts noisy LLM chat responses into a curated, queryable
//! library of commonsense ontology micropatterns.
//!
//! The pipeline runs in stages:
//!
//! 1. [`acquire`] — expand the prompt battery per noun, call a
//!    chat-completion endpoint, and persist responses to a TSV store.
//! 2. [`harvest`] — locate RDF inside each free-text response and apply
//!    repair heuristics until the text parses.
//! 3. [`consolidate`] — strip individuals, canonicalize names, extract
//!    (property, domain, range) tuples with vote counts, and down-level to
//!    the RDFS-only vocabulary.
//! 4. [`modl`] — package the per-noun micropatterns into an annotated,
//!    indexed design library.
//!
//! [`rdf`] and [`turtle`] provide the data model and the error-recovering
//! parser underneath all of it; [`cli`] ties the stages to subcommands.

pub mod acquire;
pub mod cli;
pub mod config;
pub mod consolidate;
pub mod harvest;
pub mod modl;
pub mod pipeline;
pub mod rdf;
pub mod turtle;
