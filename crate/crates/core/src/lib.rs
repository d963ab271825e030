//! Exact construction and verification of symplectic instanton monads on
//! odd-dimensional projective space.

pub mod binary;
pub mod field;
pub mod linalg;
pub mod moduli;
pub mod monad;
pub mod poly;
pub mod rs;
pub mod thooft;
