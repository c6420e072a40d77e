pub mod bstree;
pub mod deploy;
pub mod fixtures;
pub mod fsa;
pub mod gog;
pub mod vgroups;
pub mod ygraph;
