//! Exact cohomology of complex differential bigraded algebras.
//!
//! The pipeline is: structure equations ([`cdba::Cdba`]) compile to a
//! [`bicomplex::FiniteBicomplex`]; [`cohomology`] computes dimensions and
//! ∂∂̄-Lemma verdicts; [`group`] cuts out invariant subcomplexes for finite
//! group actions; [`diamond`] does Hodge-number arithmetic for blow-ups and
//! projectivized bundles.

pub mod bicomplex;
pub mod cdba;
pub mod cohomology;
pub mod cyclofield;
pub mod diamond;
pub mod exterior;
pub mod group;
pub mod linalg;
#[cfg(any(test, feature = "oracle"))]
pub mod oracle;

pub use bicomplex::FiniteBicomplex;
pub use cdba::Cdba;
pub use cohomology::CohomologyReport;
pub use cyclofield::CyclotomicNumber;
pub use exterior::{Form, Generator, Monomial};
