//! Quadrature, contours, residues, Mellin transforms and the class-W algebra.

pub mod classw;
pub mod contour;
pub mod cplx;
pub mod mellin;
pub mod quad;
pub mod residue;
