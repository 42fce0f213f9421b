//! Fock space of Hilb(K3) and the quasi-Jacobi operators ℰ^(r).

pub mod eb;
pub mod examples;
pub mod lattice;
pub mod phi;
pub mod recursion;
pub mod solver;
pub mod state;
pub mod wdvv;
