//! Desk-scale workbench for square-group word problems, arithmetic-progression
//! group constructions, Behrend-type progression-free combinatorics, and
//! finite von Neumann dynamical-system trace computations.

pub mod ap_groups;
pub mod combinatorics;
pub mod fixtures;
pub mod group_algebra;
pub mod nc_torus;
pub mod rng;
pub mod square_group;
pub mod vn_matrix;
