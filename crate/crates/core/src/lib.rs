//! Fuzzy multiple-attractor cellular automata (FMACA) for classifying DNA
//! windows as protein-coding or non-coding.
//!
//! The crate is split into layers:
//!
//! - [`ca`]: the fuzzy CA engine (rules, dependency matrices, evolution,
//!   attractor detection, and an exhaustive binary basin census).
//! - [`learn`]: k-means, GA synthesis of automata, and the recursive
//!   attractor-basin tree classifier.
//! - [`sequences`]: DNA validation, reverse complement, codons, windowing and
//!   encoding of windows into CA states.
//! - [`baselines`]: codon log-likelihood, naive Bayes and dicodon (hexamer)
//!   comparators.
//! - [`io`]: FASTA/annotation readers, the synthetic benchmark generator,
//!   splits, dataset files, model files and results CSVs.
//! - [`experiment`]: train and score any algorithm behind one interface.
//! - [`cli`]: the `fmaca` command-line front end.

pub mod baselines;
pub mod ca;
pub mod cli;
pub mod error;
pub mod experiment;
pub mod io;
pub mod learn;
pub mod sequences;

pub use error::{Error, Result};
