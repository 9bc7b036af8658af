use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::parser::{LawAst, Term};

/// Direction in which a one-nested product grows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Move {
    #[serde(rename = "LEFT")]
    Left,
    #[serde(rename = "RIGHT")]
    Right,
}

/// A one-nested product over positions `1..=n`.
///
/// The first pairing multiplies positions `start` and `start+1`; each later
/// move consumes the position immediately left (`Left`) or right (`Right`)
/// of the block built so far.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NestTrace {
    pub n: usize,
    pub start: usize,
    pub moves: Vec<Move>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LowerError {
    #[error("invalid nest trace: {0}")]
    BadTrace(String),
    #[error("invalid repetition map: {0}")]
    BadRho(String),
    #[error("left side is not the canonical all-left nest")]
    LhsNotCanonical,
    #[error("right side is not one-nested: a pairing is not adjacent to the consumed block")]
    NotOneNested,
    #[error("law has no defining identity (right side reduces to the canonical nest)")]
    TrivialLaw,
}

impl NestTrace {
    pub fn new(n: usize, start: usize, moves: Vec<Move>) -> Result<Self, LowerError> {
        if n < 2 {
            return Err(LowerError::BadTrace(format!("word length {n} < 2")));
        }
        if start < 1 || start > n - 1 {
            return Err(LowerError::BadTrace(format!(
                "start {start} out of range 1..{}",
                n - 1
            )));
        }
        if moves.len() != n - 2 {
            return Err(LowerError::BadTrace(format!(
                "expected {} moves, got {}",
                n - 2,
                moves.len()
            )));
        }
        // Replay: every position 1..n must be consumed exactly once.
        let (mut lo, mut hi) = (start, start + 1);
        for (i, mv) in moves.iter().enumerate() {
            match mv {
                Move::Left => {
                    if lo == 1 {
                        return Err(LowerError::BadTrace(format!(
                            "move {i} consumes a position left of 1"
                        )));
                    }
                    lo -= 1;
                }
                Move::Right => {
                    if hi == n {
                        return Err(LowerError::BadTrace(format!(
                            "move {i} consumes a position right of {n}"
                        )));
                    }
                    hi += 1;
                }
            }
        }
        Ok(NestTrace { n, start, moves })
    }

    /// The canonical nest `a1*(a2*(...*(a_{n-1}*a_n)))`.
    pub fn canonical_left(n: usize) -> Self {
        NestTrace {
            n,
            start: n - 1,
            moves: vec![Move::Left; n - 2],
        }
    }

    pub fn is_all_left(&self) -> bool {
        self.moves.iter().all(|m| *m == Move::Left)
    }
}

/// A validated canonical one-nested association law with repetitions.
///
/// The left side is always the canonical all-left nest; `trace` describes the
/// right side, and `rho` maps positions `1..=n` to variable indices `1..=v`
/// in first-occurrence order.  The last move is always `Right`: a law whose
/// right side finishes with a left pairing shares its outermost
/// multiplication with the left side and is reduced during lowering.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LawIr {
    pub n: usize,
    pub rho: Vec<usize>,
    pub trace: NestTrace,
    /// Lengths of the maximal `Left`/`Right` runs of `trace.moves`.
    pub run_profile: Vec<(Move, usize)>,
}

impl LawIr {
    pub fn new(rho: Vec<usize>, trace: NestTrace) -> Result<Self, LowerError> {
        let n = trace.n;
        if rho.len() != n {
            return Err(LowerError::BadRho(format!(
                "rho has {} entries for word length {n}",
                rho.len()
            )));
        }
        let mut next = 1usize;
        for (i, &v) in rho.iter().enumerate() {
            if v == next {
                next += 1;
            } else if v == 0 || v >= next {
                return Err(LowerError::BadRho(format!(
                    "position {}: variable index {v} breaks first-occurrence order",
                    i + 1
                )));
            }
        }
        if !trace.moves.contains(&Move::Right) {
            return Err(LowerError::TrivialLaw);
        }
        if trace.moves.last() == Some(&Move::Left) {
            return Err(LowerError::BadTrace(
                "trailing left pairing is cancellable; lower the law first".into(),
            ));
        }
        let run_profile = run_profile(&trace.moves);
        Ok(LawIr {
            n,
            rho,
            trace,
            run_profile,
        })
    }

    /// Number of distinct variables.
    pub fn variables(&self) -> usize {
        self.rho.iter().copied().max().unwrap_or(0)
    }

    /// Canonical JSON form `{n, rho, start, moves}` with stable key order.
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string(&LawIrJson {
            n: self.n,
            rho: self.rho.clone(),
            start: self.trace.start,
            moves: self.trace.moves.clone(),
        })
        .expect("law IR serializes")
    }

    pub fn from_canonical_json(text: &str) -> Result<Self, String> {
        let raw: LawIrJson = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let trace = NestTrace::new(raw.n, raw.start, raw.moves).map_err(|e| e.to_string())?;
        LawIr::new(raw.rho, trace).map_err(|e| e.to_string())
    }
}

#[derive(Serialize, Deserialize)]
struct LawIrJson {
    n: usize,
    rho: Vec<usize>,
    start: usize,
    moves: Vec<Move>,
}

fn run_profile(moves: &[Move]) -> Vec<(Move, usize)> {
    let mut out: Vec<(Move, usize)> = Vec::new();
    for &mv in moves {
        match out.last_mut() {
            Some((m, len)) if *m == mv => *len += 1,
            _ => out.push((mv, 1)),
        }
    }
    out
}

/// Result of lowering a [`LawAst`] to its IR.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lowering {
    pub ir: LawIr,
    /// Number of shared leading left pairings cancelled from both sides.
    pub cancelled: usize,
    /// The classification theorems of the underlying theory are stated for
    /// laws with at most three variables.
    pub many_variables: bool,
}

fn is_left_nest(term: &Term) -> bool {
    match term {
        Term::Var(_) => true,
        Term::Mul(l, r) => matches!(**l, Term::Var(_)) && is_left_nest(r),
    }
}

/// Decompose a term into a nest trace, outermost pairing last.
fn trace_of_term(term: &Term) -> Result<NestTrace, LowerError> {
    let n = term.leaf_count();
    if n < 2 {
        return Err(LowerError::TrivialLaw);
    }
    let mut rev_moves = Vec::with_capacity(n - 2);
    let (mut lo, mut hi) = (1usize, n);
    let mut cur = term;
    let start = loop {
        match cur {
            Term::Var(_) => unreachable!("span of an internal node has length >= 2"),
            Term::Mul(l, r) => {
                if hi == lo + 1 {
                    break lo;
                }
                match (&**l, &**r) {
                    (Term::Var(_), _) => {
                        rev_moves.push(Move::Left);
                        lo += 1;
                        cur = r;
                    }
                    (_, Term::Var(_)) => {
                        rev_moves.push(Move::Right);
                        hi -= 1;
                        cur = l;
                    }
                    _ => return Err(LowerError::NotOneNested),
                }
            }
        }
    };
    rev_moves.reverse();
    NestTrace::new(n, start, rev_moves)
}

/// Lower a parsed law to its validated IR.
///
/// Shared leading left pairings are cancelled (both sides then multiply the
/// shorter word), repetitions are read off the leaf word, and the trivial
/// all-left law is rejected.
pub fn lower(ast: &LawAst) -> Result<Lowering, LowerError> {
    if !is_left_nest(&ast.lhs) {
        return Err(LowerError::LhsNotCanonical);
    }
    let rhs = trace_of_term(&ast.rhs)?;
    let mut word: Vec<&str> = ast.lhs.leaves();
    let mut n = rhs.n;
    let mut start = rhs.start;
    let mut moves = rhs.moves;
    let mut cancelled = 0usize;

    // A trailing left move consumes position 1, so the outermost
    // multiplication of both sides is by the same element: cancel it.
    while moves.last() == Some(&Move::Left) {
        moves.pop();
        word.remove(0);
        start -= 1;
        n -= 1;
        cancelled += 1;
    }
    if n < 3 || !moves.contains(&Move::Right) {
        return Err(LowerError::TrivialLaw);
    }

    let mut names: Vec<&str> = Vec::new();
    let rho: Vec<usize> = word
        .iter()
        .map(|v| {
            if let Some(i) = names.iter().position(|u| u == v) {
                i + 1
            } else {
                names.push(v);
                names.len()
            }
        })
        .collect();
    let trace = NestTrace::new(n, start, moves)?;
    let ir = LawIr::new(rho, trace)?;
    let many_variables = ir.variables() > 3;
    Ok(Lowering {
        ir,
        cancelled,
        many_variables,
    })
}

fn position_names(n: usize) -> Vec<String> {
    const TAIL: [&str; 7] = ["t", "u", "v", "w", "x", "y", "z"];
    if n <= 7 {
        TAIL[7 - n..].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("a{i}")).collect()
    }
}

fn lhs_tree(labels: &[String]) -> Term {
    let n = labels.len();
    let mut cur = Term::Var(labels[n - 1].clone());
    for i in (0..n - 1).rev() {
        cur = Term::Mul(Box::new(Term::Var(labels[i].clone())), Box::new(cur));
    }
    cur
}

fn rhs_tree(trace: &NestTrace, labels: &[String]) -> Term {
    let leaf = |p: usize| Term::Var(labels[p - 1].clone());
    let (mut lo, mut hi) = (trace.start, trace.start + 1);
    let mut cur = Term::Mul(Box::new(leaf(lo)), Box::new(leaf(hi)));
    for mv in &trace.moves {
        match mv {
            Move::Left => {
                lo -= 1;
                cur = Term::Mul(Box::new(leaf(lo)), Box::new(cur));
            }
            Move::Right => {
                hi += 1;
                cur = Term::Mul(Box::new(cur), Box::new(leaf(hi)));
            }
        }
    }
    cur
}

/// Render an IR back to identity text with canonical variable names.
///
/// Each variable is named after its last occurrence position, drawn from the
/// tail of `t,u,v,w,x,y,z` (so an unrepeated four-letter law reads `w,x,y,z`
/// and the repeated left Bol law renders as
/// `(y*(x*(y*z))) = ((y*(x*y))*z)`).
pub fn render(ir: &LawIr) -> String {
    let pos_names = position_names(ir.n);
    let v = ir.variables();
    let mut var_names = vec![String::new(); v];
    for (i, &var) in ir.rho.iter().enumerate() {
        var_names[var - 1] = pos_names[i].clone();
    }
    let labels: Vec<String> = ir.rho.iter().map(|&var| var_names[var - 1].clone()).collect();
    format!("{} = {}", lhs_tree(&labels), rhs_tree(&ir.trace, &labels))
}

/// Outcome of substituting the identity element for one variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Substitution {
    /// The residual law on the remaining variables.
    Law(Lowering),
    /// Both sides collapse to the same product (or to nothing).
    Degenerate,
}

fn prune(term: &Term, keep: &[bool], next_leaf: &mut usize) -> Option<Term> {
    match term {
        Term::Var(v) => {
            let keep_this = keep[*next_leaf];
            *next_leaf += 1;
            keep_this.then(|| Term::Var(v.clone()))
        }
        Term::Mul(l, r) => {
            let pl = prune(l, keep, next_leaf);
            let pr = prune(r, keep, next_leaf);
            match (pl, pr) {
                (Some(a), Some(b)) => Some(Term::Mul(Box::new(a), Box::new(b))),
                (Some(a), None) | (None, Some(a)) => Some(a),
                (None, None) => None,
            }
        }
    }
}

/// Substitute the identity element for variable `var` (1-based).
///
/// All positions carrying `var` are removed from both sides; the remaining
/// law is re-lowered.  Never panics, whatever the repetition map.
pub fn substitute_identity(ir: &LawIr, var: usize) -> Substitution {
    let keep: Vec<bool> = ir.rho.iter().map(|&p| p != var).collect();
    if keep.iter().all(|k| !k) {
        return Substitution::Degenerate;
    }
    let labels: Vec<String> = ir.rho.iter().map(|&v| format!("v{v}")).collect();
    let lhs_full = lhs_tree(&labels);
    let rhs_full = rhs_tree(&ir.trace, &labels);
    let (mut i, mut j) = (0, 0);
    let lhs = prune(&lhs_full, &keep, &mut i);
    let rhs = prune(&rhs_full, &keep, &mut j);
    let (Some(lhs), Some(rhs)) = (lhs, rhs) else {
        return Substitution::Degenerate;
    };
    let mut variables = Vec::new();
    for v in lhs.leaves() {
        if !variables.iter().any(|u: &String| u == v) {
            variables.push(v.to_string());
        }
    }
    let ast = LawAst { lhs, rhs, variables };
    match lower(&ast) {
        Ok(lowering) => Substitution::Law(lowering),
        Err(LowerError::TrivialLaw) => Substitution::Degenerate,
        Err(LowerError::NotOneNested) | Err(LowerError::LhsNotCanonical) => {
            // Pruning a one-nested law stays one-nested; treat defensively.
            Substitution::Degenerate
        }
        Err(_) => Substitution::Degenerate,
    }
}
