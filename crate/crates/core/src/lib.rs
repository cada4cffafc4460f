//! Exact combinatorics and statistics for the Sato-Tate groups of the
//! hyperelliptic curves y² = x^(p²) − 1, p an odd prime.
//!
//! The crate is organized bottom-up:
//!
//! * [`arith`]: modular arithmetic, primality, primitive roots.
//! * [`shioda`]: enumeration and classification of the index tuples that
//!   parametrize Hodge classes of the Jacobian.
//! * [`hodge`]: signed normal form of tuples and the multiplicative
//!   relations cutting out the identity component U(1)^g'.
//! * [`group`]: the cyclotomic endomorphism, the component-group generator
//!   γ as a signed block permutation, and symbolic characteristic
//!   polynomials of Uγᵏ.
//! * [`numeric`]: dense complex-matrix cross-checks for the symbolic layer.
//! * [`moments`]: exact Haar-measure moments of the trace statistic via
//!   signed lattice-walk counting.
//! * [`sweep`]: point counts of the curve over prime fields, numerical
//!   moments, and histogram data.
//! * [`verify`]: the self-check suite tying all of the above to frozen
//!   reference values.

pub mod arith;
pub mod group;
pub mod hodge;
pub mod moments;
pub mod numeric;
pub mod shioda;
pub mod sweep;
pub mod verify;

pub use group::{BlockMonomialMatrix, BlockTag, CyclotomicEndomorphism, SymbolicCharPoly};
pub use hodge::{IdentityComponentModel, LinearForm, SignedTuple};
pub use moments::{ExponentDistribution, MomentReport, TraceExpression};
pub use shioda::{ShiodaTuple, Stage, TupleClass, TupleKind};
pub use sweep::{PrimeRecord, SweepState};
