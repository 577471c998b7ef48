pub mod axioms;
pub mod cli;
pub mod cubes;
pub mod error;
pub mod geom;
pub mod overlap;
pub mod perm;
pub mod random;
pub mod realize;
pub mod splice;
pub mod tree;
pub mod word;
