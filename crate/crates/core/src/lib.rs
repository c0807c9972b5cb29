//! Massey product predicates for finitely presented pro-p groups, computed
//! through lifting towers in unipotent matrix groups, together with the
//! arithmetic of Z/p characters over Q needed to build local plans,
//! governing-field certificates and auxiliary primes.

pub mod arithq;
pub mod error;
pub mod lifting;
pub mod linalg;
pub mod modular;
pub mod presentation;
pub mod unipotent;

pub use error::{Error, Result};
