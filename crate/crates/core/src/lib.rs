//! Exact arithmetic for unimodular symmetric bilinear forms over the coordinate
//! ring `O` of an affine curve over `F_q` (the line, or a Weierstrass cubic with
//! its point at infinity removed).
//!
//! The crate decides the Hasse principle through the parity of `|Pic(C^af)|`,
//! certifies genus membership from explicit transition matrices, and runs
//! bounded searches for integral isometries.

pub mod cli;
pub mod curvepoints;
pub mod curvering;
pub mod error;
pub mod expr;
pub mod finfield;
pub mod forms;
pub mod funcfield;
pub mod hasse;
pub mod schema;

pub use curvepoints::{point_count_report, AffinePoint, CurvePoint, PointCountReport};
pub use curvering::{CurveSpec, FracElem, RingElem, RingMatrix};
pub use error::{Error, Result};
pub use finfield::{make_extension, Embedding, FqElem, FqField, SquareClass};
pub use forms::{
    field_isomorphic, isom_search, local_isomorphic, verify_genus_witness, FieldForm, GenusReport, GenusVerdict,
    GenusWitness, GramMatrix, Place, SearchBounds, SearchOutcome, WitnessPair,
};
pub use funcfield::{factor, Factorization, Poly, PrimePoly};
pub use hasse::{binary_genus_lower_bound, hasse_principle, ufd_check, HasseDecision, Verdict};
