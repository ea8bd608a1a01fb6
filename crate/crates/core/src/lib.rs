//! Compiler for multimodal chemistry instruction-tuning corpora.
//!
//! Seed SMILES, reactions and property tables go in; instruction samples with
//! molecular graphs, conformations, images, MS2 and IR spectra come out, each
//! with modality-token accounting that matches the encoder shape contracts.

pub mod chem;
pub mod conformer;
pub mod corpus;
pub mod depict;
pub mod encoders;
pub mod evalkit;
pub mod forge;
pub mod spectra;

pub use chem::{parse_reaction, parse_smiles, write_smiles, MolGraph, Reaction};
