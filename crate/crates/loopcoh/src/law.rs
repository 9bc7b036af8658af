//! Built-in laws and systematic generation of one-nested laws.

use crate::dsl::{lower, parse, LawIr, Move, NestTrace};

/// The kinds of law the cohomology engine understands.  One-nested
/// association laws carry their IR; commutativity and the inverse property
/// cannot be written in the association-law grammar (their sides permute
/// variables) and are built in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LawKind {
    OneNested(LawIr),
    Commutativity,
    InverseProperty,
}

impl LawKind {
    pub fn name(&self) -> String {
        match self {
            LawKind::OneNested(ir) => {
                if *ir == bol_ir() {
                    "bol".into()
                } else if *ir == bol_unrepeated_ir() {
                    "bol-unrepeated".into()
                } else if *ir == associativity_ir() {
                    "associativity".into()
                } else {
                    crate::dsl::render(ir)
                }
            }
            LawKind::Commutativity => "commutativity".into(),
            LawKind::InverseProperty => "inverse-property".into(),
        }
    }
}

pub const BOL_LAW: &str = "(y*(x*(y*z))) = ((y*(x*y))*z)";
pub const BOL_UNREPEATED_LAW: &str = "(w*(x*(y*z))) = ((w*(x*y))*z)";
pub const ASSOCIATIVITY_LAW: &str = "(x*(y*z)) = ((x*y)*z)";

fn ir_of(text: &str) -> LawIr {
    lower(&parse(text).expect("built-in law parses"))
        .expect("built-in law lowers")
        .ir
}

pub fn bol_ir() -> LawIr {
    ir_of(BOL_LAW)
}

pub fn bol_unrepeated_ir() -> LawIr {
    ir_of(BOL_UNREPEATED_LAW)
}

pub fn associativity_ir() -> LawIr {
    ir_of(ASSOCIATIVITY_LAW)
}

pub fn builtin_names() -> &'static [&'static str] {
    &[
        "bol",
        "bol-unrepeated",
        "associativity",
        "commutativity",
        "inverse-property",
    ]
}

/// Look up a built-in law by name.
pub fn builtin(name: &str) -> Option<LawKind> {
    match name {
        "bol" => Some(LawKind::OneNested(bol_ir())),
        "bol-unrepeated" => Some(LawKind::OneNested(bol_unrepeated_ir())),
        "associativity" => Some(LawKind::OneNested(associativity_ir())),
        "commutativity" => Some(LawKind::Commutativity),
        "inverse-property" => Some(LawKind::InverseProperty),
        _ => None,
    }
}

/// Resolve a `--law` argument: a built-in name or an identity string.
pub fn resolve(text: &str) -> Result<LawKind, String> {
    if let Some(kind) = builtin(text) {
        return Ok(kind);
    }
    let ast = parse(text).map_err(|e| {
        let mut msg = format!("cannot parse law: {e}");
        if matches!(e, crate::dsl::ParseError::LeafMismatch { .. }) {
            msg.push_str(
                "; laws that permute variables between sides are built in \
                 (try --law commutativity)",
            );
        }
        msg
    })?;
    let lowering = lower(&ast).map_err(|e| format!("cannot lower law: {e}"))?;
    Ok(LawKind::OneNested(lowering.ir))
}

/// All canonical nest traces of word length `n` (last move `Right`, so every
/// trace is the right side of a reduced law).
pub fn enumerate_traces(n: usize) -> Vec<NestTrace> {
    let mut out = Vec::new();
    if n < 3 {
        return out;
    }
    for start in 1..n {
        let mut moves = vec![Move::Left; n - 2];
        // Odometer over move lists, filtering through the validating
        // constructor; n is tiny here so 2^(n-2) candidates is fine.
        loop {
            if moves.last() == Some(&Move::Right) || moves.is_empty() {
                if let Ok(trace) = NestTrace::new(n, start, moves.clone()) {
                    if moves.contains(&Move::Right) {
                        out.push(trace);
                    }
                }
            }
            let mut i = moves.len();
            loop {
                if i == 0 {
                    moves.clear();
                    break;
                }
                i -= 1;
                if moves[i] == Move::Left {
                    moves[i] = Move::Right;
                    break;
                }
                moves[i] = Move::Left;
            }
            if moves.is_empty() {
                break;
            }
        }
    }
    out
}

/// All first-occurrence-canonical surjections from `n` positions onto
/// exactly `v` variables.
pub fn canonical_rhos(n: usize, v: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut rho = Vec::with_capacity(n);
    fn go(rho: &mut Vec<usize>, n: usize, v: usize, max: usize, out: &mut Vec<Vec<usize>>) {
        if rho.len() == n {
            if max == v {
                out.push(rho.clone());
            }
            return;
        }
        // Must still be able to reach v variables.
        let remaining = n - rho.len();
        for next in 1..=(max + 1).min(v) {
            let new_max = max.max(next);
            if v - new_max <= remaining - 1 {
                rho.push(next);
                go(rho, n, v, new_max, out);
                rho.pop();
            }
        }
    }
    go(&mut rho, n, v, 0, &mut out);
    out
}

/// Every reduced one-nested law with word length `4..=max_n` and exactly `v`
/// variables.
pub fn generated_laws(max_n: usize, v: usize) -> Vec<LawIr> {
    let mut out = Vec::new();
    for n in 4..=max_n {
        for trace in enumerate_traces(n) {
            for rho in canonical_rhos(n, v) {
                out.push(LawIr::new(rho, trace.clone()).expect("canonical trace and rho"));
            }
        }
    }
    out
}
