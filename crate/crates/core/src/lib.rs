//! Computational toolkit for groups of Fibonacci type `G_n(m,k)`, the groups
//! defined by the cyclic presentations with relators `x_i x_{i+m} x_{i+k}^{-1}`.

pub mod abelian;
pub mod classify;
pub mod coset;
pub mod diagram;
pub mod params;
pub mod stargraph;
pub mod words;
