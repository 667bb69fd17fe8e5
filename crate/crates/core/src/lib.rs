pub mod automaton;
pub mod cli;
pub mod congruence;
pub mod element;
pub mod expr;
pub mod finite;
pub mod perm;
pub mod portrait;
pub mod tree;
pub mod verify;
pub mod wire;
