//! Exact graded commutative algebra: Gröbner bases, free resolutions,
//! local cohomology invariants, and asymptotics of ideal powers.

pub mod asymptotics;
pub mod budget;
pub mod coeff;
pub mod cohomology;
pub mod error;
pub mod groebner;
pub mod hilbert;
pub mod ideal;
pub mod matrix;
pub mod module;
pub mod parse;
pub mod poly;
pub mod resolution;
pub mod ring;
pub mod sampling;

pub use coeff::{Coeff, Field, DEFAULT_PRIME};
pub use error::{Error, Result};
pub use module::{FreeModule, FreeModuleRef, ModuleOrder, Vector};
pub use poly::{Multidegree, Polynomial};
pub use ring::{Monomial, MonomialOrder, Ring, RingRef};
pub use ideal::Submodule;
