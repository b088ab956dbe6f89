//! Branch-and-bound solvers for the 0-1 knapsack problem.
//!
//! Three best-first algorithms share one engine ([`bnb::solve`]) and differ
//! only in how a fractional subproblem is branched:
//!
//! * Kolesar: the lowest-index free variable is fixed to 0 and 1.
//! * Greenberg & Hegerich: the critical (fractional) variable is fixed to 0 and 1.
//! * Cascading tree: a greedy integer completion of the relaxation supplies a
//!   lower bound, and its ones `i_1 < ... < i_r` produce `r` children, the
//!   k-th fixing `i_1..i_{k-1}` to 1 and `i_k` to 0.
//!
//! Upper bounds are Dantzig bounds computed in exact rational arithmetic, so
//! node counts are reproducible across platforms. [`oracle`] provides
//! dynamic programming and exhaustive search for cross-checking, [`gen`] a
//! seeded instance generator, [`bench`] the experiment harness and [`io`]
//! the instance file format and trace export.
//!
//! ```
//! use knapsack_bnb::bnb::{solve, Limits, Strategy};
//! use knapsack_bnb::model::five_item_example;
//!
//! let report = solve(&five_item_example(), Strategy::CascadingTree, Limits::default(), false).unwrap();
//! assert_eq!(report.best.value.to_string(), "3");
//! assert_eq!(report.nodes_evaluated, 3);
//! ```

pub mod bench;
pub mod bnb;
pub mod error;
pub mod gen;
pub mod io;
pub mod model;
pub mod oracle;
pub mod relax;

pub use error::{Error, Result};
