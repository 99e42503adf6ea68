//! Orlicz spaces, Fourier analysis and vector measures on finite groups.

pub mod error;
pub mod groups;
pub mod numeric;
pub mod orlicz;
pub mod spectral;
pub mod vecmeas;
pub mod young;

pub use error::{Error, Result};
pub use groups::{BorelSet, FiniteGroup, UnitaryDual};
pub use orlicz::{GroupFunction, NormResult};
pub use spectral::{BlockNormKind, BlockVector};
pub use vecmeas::{AtomicMeasure, NormPath, VectorMeasure};
pub use young::{OrliczPair, YoungFunction};
