//! Exact computation in the relatively free algebra `F_p<X_n>/T^(3)`:
//! straightening to a canonical basis, Grassmann-algebra evaluation, and
//! membership in T-subspaces at fixed multidegree.

pub mod echelon;
pub mod error;
pub mod field;
pub mod freepoly;
pub mod grassmann;
pub mod normalform;
pub mod specs;
pub mod supermodel;
pub mod syntax;
pub mod tspace;
pub mod word;

pub use error::{Error, Result};
pub use field::PrimeField;
pub use freepoly::{q_poly, FreePoly, Polarization};
pub use grassmann::{evaluate, falsify, Counterexample, FalsifyMode, GrassmannElement};
pub use normalform::{
    commutator_product_normalize, is_central_for_g, is_identity_of_g, nm_mul, straighten,
    NormalMonomial, NormalPoly,
};
pub use tspace::{
    frame, BasisKey, BasisStore, Closure, ComponentBasis, ComponentVerdict, Engine, EngineConfig,
    GeneratorSpec, MemberReport,
};
pub use word::{MultiDegree, Var, Word};

/// Version of the engine, part of every cache key.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
