pub mod approx;
pub mod bits;
pub mod classify;
pub mod config;
pub mod decomp;
pub mod error;
pub mod gf;
pub mod injective;
pub mod hom;
pub mod lattice;
pub mod linalg;
pub mod module;
pub mod ring;
