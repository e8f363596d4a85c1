//! Number fields given by an integer polynomial, exact element arithmetic
//! and certified embeddings.

mod element;
mod field;
pub mod poly;
mod roots;

pub use element::FieldElement;
pub use field::{format_form, format_poly_desc, AlgebraicField, FieldDef, FieldOptions};
