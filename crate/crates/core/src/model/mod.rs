//! Finite relational structures and the semantic machinery over them.

mod bf;
mod ef;
mod eval;
mod internal;
mod iso;
mod orbits;
mod quotient;
mod relation;
mod strong;
mod structure;

pub use bf::{bf_system, BackAndForthSystem};
pub use ef::{ef_game, EfOutcome, Move, Player, Side};
pub use eval::{eta_relation, eval, eval_eta, eval_with, extension, rel_table, Assignment, Compiled, Frame};
pub use internal::{internal_model, InternalModel};
pub(crate) use internal::{all_tuples, carve, check_target, eta_vars, rel_vars};
pub use iso::{automorphisms, find_isomorphism, find_isomorphism_extending, is_isomorphism, Perm};
pub use orbits::{invariant_relations, is_union_of, tuple_orbits};
pub use quotient::{check_congruence, check_equivalence, quotient, quotient_by};
pub use relation::{Relation, MAX_TABLE};
pub use strong::{eq_classes, equality_of, invariant_subsets, strong_model_check, strong_model_check_among};
pub use structure::FiniteStructure;
