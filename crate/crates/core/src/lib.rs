pub mod bits;
pub mod chromatic;
pub mod cli;
pub mod dga;
pub mod error;
pub mod examples;
pub mod exactla;
pub mod graph;
pub mod mobius_inv;
pub mod mvss;
pub mod oscomplex;
pub mod par;
pub mod poset;
pub mod subspace;
pub mod supportcoh;
