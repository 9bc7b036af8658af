//! Cohomology of finite loop extensions.
//!
//! A loop identity such as the left Bol law `(y*(x*(y*z))) = ((y*(x*y))*z)`
//! induces a differential on normalized 2-cochains over a cyclic module.
//! Its cocycles are exactly the factor sets whose extension loop satisfies
//! the identity, and the quotient by coboundaries counts extensions up to
//! equivalence.  This crate provides:
//!
//! * [`dsl`] — parsing and lowering of one-nested association laws,
//! * [`loops`] — finite loops as Cayley tables, divisions, inner mappings,
//! * [`cochain`] — normalized cochains over cyclic modules and `δ¹`,
//! * [`differential`] — the law-derived differential on 2-cochains,
//! * [`cohomology`] — cocycle/coboundary/H² computation (brute force and
//!   modular linear algebra),
//! * [`extension`] — building, extracting and classifying loop extensions,
//! * [`corpus`] — small loop tables used by the verification suites.

pub mod cochain;
pub mod cohomology;
pub mod corpus;
pub mod differential;
pub mod dsl;
pub mod extension;
pub mod law;
pub mod linalg;
pub mod loops;
pub mod module;

pub use cochain::Cochain;
pub use cohomology::{CohomologyReport, Method};
pub use differential::DifferentialSpec;
pub use dsl::{LawAst, LawIr, NestTrace};
pub use extension::ExtensionLoop;
pub use law::LawKind;
pub use loops::FiniteLoop;
pub use module::CyclicModule;
