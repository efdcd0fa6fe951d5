//! Experiment layer on top of the core library: figure reproduction, seeded
//! recovery sweeps, report rendering, and the dependency-free SVG writer the
//! figures use.

pub mod experiments;
pub mod figures;
pub mod svg;
