//! A small DSL for loop identities.
//!
//! The grammar is `law := term "=" term; term := var | "(" term "*" term ")"`
//! with optional whitespace; the outermost parentheses of each side may be
//! omitted.  Both sides must multiply the same word of variables, the left
//! side must be the canonical all-left nest `a1*(a2*(...*(a_{n-1}*a_n)))`,
//! and the right side must be one-nested: the product grows a single
//! contiguous block one element at a time, leftward or rightward.

mod ir;
mod parser;

pub use ir::{
    lower, render, substitute_identity, LawIr, LowerError, Lowering, Move, NestTrace,
    Substitution,
};
pub use parser::{parse, LawAst, ParseError, Term};
