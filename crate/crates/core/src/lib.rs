pub mod autgroup;
pub mod bounds;
pub mod cli;
pub mod cohomology;
pub mod config;
pub mod homology;
pub mod intlinalg;
pub mod multigraph;
pub mod oracle;
pub mod permgroup;
