//! Cocycles, coboundaries, and second cohomology for a law over a cyclic
//! module, with a modular-linear-algebra fast path and a brute-force oracle.

use serde::Serialize;
use thiserror::Error;

use crate::cochain::{
    self, commutativity_delta, delta1, enumerate_normalized, inverse_property_residual, Cochain,
};
use crate::differential::{auto_sweep, derive_differential, verify_delta_squared, DifferentialSpec};
use crate::law::LawKind;
use crate::linalg::{kernel_mod, Mat};
use crate::module::{gcd, CyclicModule};

/// Default ceiling on brute-force candidate counts.
pub const DEFAULT_BRUTE_LIMIT: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Auto,
    Brute,
    Linear,
}

impl Method {
    pub fn parse(text: &str) -> Option<Method> {
        match text {
            "auto" => Some(Method::Auto),
            "brute" => Some(Method::Brute),
            "linear" => Some(Method::Linear),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("brute-force space of {size} candidates exceeds the limit {limit}; use the linear method")]
    TooLarge { size: u128, limit: u128 },
    #[error("cochain error: {0}")]
    Cochain(#[from] crate::cochain::CochainError),
}

/// Counts and representatives for one (law, module) pair.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CohomologyReport {
    pub law: String,
    pub n: u64,
    pub m: u64,
    pub t: u64,
    pub cocycles: u128,
    pub coboundaries: u128,
    pub coboundaries_in_kernel: u128,
    pub h2: u128,
    pub method_used: String,
    pub delta_squared_ok: bool,
    /// The closed-form coboundary count `(n-1)m/gcd(n,m)` recorded by the
    /// underlying theory; enumeration is authoritative where they differ.
    pub closed_form_coboundaries: f64,
    pub coboundary_formula_mismatch: bool,
    /// For the commutativity law: the closed form `n·gcd(n,m)/2`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form_h2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h2_formula_mismatch: Option<bool>,
    /// One lexicographically-least cocycle per cohomology class
    /// (flattened value arrays).
    pub representatives: Vec<Vec<u64>>,
    #[serde(skip)]
    pub representative_cochains: Vec<Cochain>,
}

impl CohomologyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn csv_header() -> &'static str {
        "law,n,m,t,cocycles,coboundaries,coboundariesInKernel,h2,methodUsed,deltaSquaredOk"
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.law,
            self.n,
            self.m,
            self.t,
            self.cocycles,
            self.coboundaries,
            self.coboundaries_in_kernel,
            self.h2,
            self.method_used,
            self.delta_squared_ok
        )
    }
}

fn is_cocycle(kind: &LawKind, spec: Option<&DifferentialSpec>, f: &Cochain) -> bool {
    match kind {
        LawKind::OneNested(_) => spec
            .expect("spec derived for one-nested law")
            .apply(f)
            .expect("arity-2 cochain")
            .is_zero(),
        LawKind::Commutativity => commutativity_delta(f).expect("arity-2 cochain").is_zero(),
        LawKind::InverseProperty => inverse_property_residual(f)
            .expect("arity-2 cochain")
            .is_zero(),
    }
}

/// The integer constraint matrix of the law on the `(n-1)²` free entries
/// of a normalized 2-cochain.
pub fn constraint_matrix(kind: &LawKind, module: &CyclicModule) -> Mat {
    let n = module.n() as usize;
    let k = n - 1;
    let col = |x: usize, y: usize| (x - 1) * k + (y - 1);
    let mut rows: Vec<Vec<i128>> = Vec::new();
    match kind {
        LawKind::OneNested(ir) => {
            let spec = derive_differential(ir);
            let nq = module.n();
            let v = spec.v;
            let total = (nq as usize).pow(v as u32);
            let mut vals = vec![0u64; v];
            for idx in 0..total {
                let mut rem = idx;
                for i in (0..v).rev() {
                    vals[i] = (rem % nq as usize) as u64;
                    rem /= nq as usize;
                }
                let mut row = vec![0i128; k * k];
                for term in &spec.terms {
                    let l = word_value(&spec, &vals, &term.left, module);
                    let r = word_value(&spec, &vals, &term.right, module);
                    if l == 0 || r == 0 {
                        continue; // normalized entries are identically zero
                    }
                    let mut e = 0u64;
                    for p in term.suffix_start + 1..=spec.n {
                        e += vals[spec.rho[p - 1] - 1];
                    }
                    let coeff = module.t_pow(e) as i128 * term.sign as i128;
                    row[col(l as usize, r as usize)] += coeff;
                }
                if row.iter().any(|&c| c != 0) {
                    rows.push(row);
                }
            }
        }
        LawKind::Commutativity => {
            for x in 1..n {
                for y in x + 1..n {
                    let mut row = vec![0i128; k * k];
                    row[col(x, y)] = 1;
                    row[col(y, x)] = -1;
                    rows.push(row);
                }
            }
        }
        LawKind::InverseProperty => {
            for x in 1..n {
                let neg = n - x;
                let mut row = vec![0i128; k * k];
                row[col(x, neg)] += 1;
                row[col(neg, x)] -= module.t_pow_neg(x as u64) as i128;
                if row.iter().any(|&c| c != 0) {
                    rows.push(row);
                }
            }
        }
    }
    if rows.is_empty() {
        rows.push(vec![0i128; k * k]);
    }
    Mat::from_rows(&rows)
}

fn word_value(spec: &DifferentialSpec, vals: &[u64], word: &[usize], md: &CyclicModule) -> u64 {
    word.iter()
        .fold(0u64, |acc, &p| md.add_q(acc, vals[spec.rho[p - 1] - 1]))
}

/// All cocycles of the law, sorted lexicographically by value array.
pub fn cocycles(
    kind: &LawKind,
    module: &CyclicModule,
    method: Method,
    limit: u128,
) -> Result<(Vec<Cochain>, Method), CohomologyError> {
    let brute_size = cochain::normalized_count(module, 2);
    let use_brute = match method {
        Method::Brute => {
            if brute_size > limit {
                return Err(CohomologyError::TooLarge {
                    size: brute_size,
                    limit,
                });
            }
            true
        }
        Method::Linear => false,
        Method::Auto => brute_size <= limit,
    };
    let set = if use_brute {
        let spec = match kind {
            LawKind::OneNested(ir) => Some(derive_differential(ir)),
            _ => None,
        };
        enumerate_normalized(module, 2, limit)
            .expect("size checked above")
            .into_iter()
            .filter(|f| is_cocycle(kind, spec.as_ref(), f))
            .collect::<Vec<_>>()
    } else {
        let mat = constraint_matrix(kind, module);
        let kernel = kernel_mod(&mat, module.m(), limit).ok_or(CohomologyError::TooLarge {
            size: crate::linalg::count_solutions_mod(&mat, module.m()),
            limit,
        })?;
        let mut set: Vec<Cochain> = kernel
            .iter()
            .map(|free| Cochain::from_free_entries(module, free).expect("kernel entries reduced"))
            .collect();
        set.sort();
        set
    };
    Ok((set, if use_brute { Method::Brute } else { Method::Linear }))
}

/// The image of δ¹, sorted and deduplicated.
pub fn coboundaries(
    module: &CyclicModule,
    limit: u128,
) -> Result<Vec<Cochain>, CohomologyError> {
    let size = cochain::normalized_count(module, 1);
    if size > limit {
        return Err(CohomologyError::TooLarge { size, limit });
    }
    let mut out: Vec<Cochain> = enumerate_normalized(module, 1, limit)
        .expect("size checked above")
        .iter()
        .map(|h| delta1(h).expect("arity-1 cochain"))
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Full cohomology report for a (law, module) pair.
pub fn cohomology(
    kind: &LawKind,
    module: &CyclicModule,
    method: Method,
    limit: u128,
) -> Result<CohomologyReport, CohomologyError> {
    let (kernel, method_used) = cocycles(kind, module, method, limit)?;
    let bounds = coboundaries(module, limit)?;
    let in_kernel: Vec<&Cochain> = bounds
        .iter()
        .filter(|b| kernel.binary_search(b).is_ok())
        .collect();

    // Cosets of (im δ¹ ∩ ker δ) inside ker δ; representative = least member.
    let mut assigned = vec![false; kernel.len()];
    let mut representatives = Vec::new();
    for (i, f) in kernel.iter().enumerate() {
        if assigned[i] {
            continue;
        }
        representatives.push(f.clone());
        for b in &in_kernel {
            let g = f.add(b)?;
            if let Ok(j) = kernel.binary_search(&g) {
                assigned[j] = true;
            }
        }
    }

    let delta_squared_ok = match kind {
        LawKind::OneNested(ir) => {
            let spec = derive_differential(ir);
            verify_delta_squared(&spec, module, auto_sweep(module))
        }
        // For the built-in kinds the analogous statement is im δ¹ ⊆ ker δ.
        _ => in_kernel.len() == bounds.len(),
    };

    let (n, m, t) = (module.n(), module.m(), module.t());
    let closed_form_coboundaries = ((n - 1) * m) as f64 / gcd(n, m) as f64;
    let h2 = representatives.len() as u128;
    let (closed_form_h2, h2_formula_mismatch) = match kind {
        LawKind::Commutativity => {
            let cf = (n * gcd(n, m)) as f64 / 2.0;
            (Some(cf), Some(cf != h2 as f64))
        }
        _ => (None, None),
    };
    Ok(CohomologyReport {
        law: kind.name(),
        n,
        m,
        t,
        cocycles: kernel.len() as u128,
        coboundaries: bounds.len() as u128,
        coboundaries_in_kernel: in_kernel.len() as u128,
        h2,
        method_used: match method_used {
            Method::Brute => "bruteforce".into(),
            Method::Linear => "linear".into(),
            Method::Auto => unreachable!("resolved above"),
        },
        delta_squared_ok,
        closed_form_coboundaries,
        coboundary_formula_mismatch: closed_form_coboundaries != bounds.len() as f64,
        closed_form_h2,
        h2_formula_mismatch,
        representatives: representatives.iter().map(|c| c.values().to_vec()).collect(),
        representative_cochains: representatives,
    })
}

/// Counts for the inverse-property condition: residual-zero cochains, the
/// coboundaries among them, and residual-zero classes modulo coboundaries.
pub fn inverse_property_count(
    module: &CyclicModule,
    method: Method,
    limit: u128,
) -> Result<CohomologyReport, CohomologyError> {
    cohomology(&LawKind::InverseProperty, module, method, limit)
}
