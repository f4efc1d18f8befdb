//! Even lattices, discriminant forms, Weil representations and vector-valued modular forms.

pub mod arith;
pub mod checks;
pub mod cli;
pub mod cyclo;
pub mod discform;
pub mod discriminant;
pub mod eichler;
pub mod enumerate;
pub mod error;
pub mod harmonic;
pub mod heegner;
pub mod hecke;
pub mod lattice;
pub mod matrix;
pub mod mp;
pub mod mp4;
pub mod qexp;
pub mod theta;
pub mod weil;
