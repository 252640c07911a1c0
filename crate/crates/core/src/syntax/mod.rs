//! Relational first-order syntax: signatures, formulas, parsing, printing,
//! and capture-avoiding substitution.

mod formula;
mod parse;
mod signature;
mod subst;

pub use formula::{alpha_equal, is_var_name, print, Formula, Var};
pub use parse::{parse, parse_untyped};
pub use signature::{Signature, SCHEME_PREDICATE};
pub use subst::{fresh, relativize, rename_free, substitute_predicate, substitute_var, universal_closure};

pub(crate) use subst::replace_p;
