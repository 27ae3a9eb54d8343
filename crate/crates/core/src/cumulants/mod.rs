//! Cumulants of `I_q(h)`.
//!
//! The exact route is the diagram formula: `cum_m(I_q(h))` is the sum over
//! `σ ∈ Π(q[m])` of the block-identified coefficient sums of `h^{⊗m}`. For a
//! symmetric `h` the summand depends only on the multigraph `G_σ`, so the
//! sum runs over diagram classes weighted by their partition counts, and
//! each class is evaluated as a small tensor network.

mod bounds;
mod diagram;
mod empirical;
mod oracle;
mod report;

pub use bounds::{cumulant_bound, l_from_cum4, per_term_bound_check, term_chain_bound, LogValue, TermCheck};
pub use diagram::{diagram_value, exact_cumulant, CumulantOptions};
pub use empirical::{empirical_cumulants, CumulantEstimate, EmpiricalOptions};
pub use oracle::{quadratic_form_cumulant, quadratic_form_oracle};
pub use report::{CumulantRecord, CumulantReport};
