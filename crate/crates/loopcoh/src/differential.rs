//! Derivation of the identity-specific differential on 2-cochains and its
//! evaluation over a cyclic module.
//!
//! A one-nested law over positions `1..=n` determines a signed list of
//! symbolic terms `±(action suffix)·f(leftWord, rightWord)`.  The positive
//! terms come from replaying the right side's nest trace: the initial pairing
//! at position `s` emits `+f(a_s, a_{s+1})`; a left move consuming position
//! `i` emits `+f(a_i, W)` where `W` is the block built so far; a right move
//! consuming `j` emits `+f(W, a_j)`.  Every emitted term is acted on by all
//! positions strictly to the right of the rightmost position consumed at
//! emission time.  The negative terms are the canonical-nest terms
//! `-f(a_i, a_{i+1}···a_n)` with empty suffix.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::cochain::{cochain1, delta1, enumerate_normalized, Cochain, CochainError};
use crate::dsl::LawIr;
use crate::module::CyclicModule;

/// One symbolic term of a derived differential.  `left` and `right` are
/// words of positions (all in `1..=n`); the action suffix is the product of
/// all positions strictly greater than `suffix_start`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffTerm {
    pub sign: i8,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    #[serde(rename = "suffixStart")]
    pub suffix_start: usize,
}

/// A derived differential `δ: C² -> C^v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentialSpec {
    /// Word length of the law.
    pub n: usize,
    /// Number of distinct variables (output arity).
    pub v: usize,
    /// Position -> variable map, `rho[i]` for position `i+1`.
    pub rho: Vec<usize>,
    pub terms: Vec<DiffTerm>,
}

/// Derive the differential of a validated one-nested law.
pub fn derive_differential(ir: &LawIr) -> DifferentialSpec {
    let n = ir.n;
    let mut terms = Vec::with_capacity(2 * (n - 1));
    let (mut lo, mut hi) = (ir.trace.start, ir.trace.start + 1);
    terms.push(DiffTerm {
        sign: 1,
        left: vec![lo],
        right: vec![hi],
        suffix_start: hi,
    });
    for mv in &ir.trace.moves {
        match mv {
            crate::dsl::Move::Left => {
                lo -= 1;
                terms.push(DiffTerm {
                    sign: 1,
                    left: vec![lo],
                    right: (lo + 1..=hi).collect(),
                    suffix_start: hi,
                });
            }
            crate::dsl::Move::Right => {
                hi += 1;
                terms.push(DiffTerm {
                    sign: 1,
                    left: (lo..hi).collect(),
                    right: vec![hi],
                    suffix_start: hi,
                });
            }
        }
    }
    for i in 1..n {
        terms.push(DiffTerm {
            sign: -1,
            left: vec![i],
            right: (i + 1..=n).collect(),
            suffix_start: n,
        });
    }
    DifferentialSpec {
        n,
        v: ir.variables(),
        rho: ir.rho.clone(),
        terms,
    }
}

/// The (not necessarily normalized) image of a 2-cochain under a derived
/// differential: a dense function `Q^v -> Z/m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffImage {
    arity: usize,
    values: Vec<u64>,
    module: CyclicModule,
}

impl DiffImage {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn module(&self) -> &CyclicModule {
        &self.module
    }

    pub fn get(&self, args: &[u64]) -> u64 {
        let n = self.module.n() as usize;
        let idx = args.iter().fold(0usize, |acc, &a| acc * n + a as usize);
        self.values[idx]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }
}

impl DifferentialSpec {
    /// Evaluate `δf` over all assignments of the `v` variables.
    pub fn apply(&self, f: &Cochain) -> Result<DiffImage, CochainError> {
        if f.arity() != 2 {
            return Err(CochainError::ArityMismatch {
                expected: 2,
                got: f.arity(),
            });
        }
        let md = f.module().clone();
        let nq = md.n();
        let len = (nq as usize).pow(self.v as u32);
        let mut values = vec![0u64; len];
        let mut vals = vec![0u64; self.v];
        for (idx, out) in values.iter_mut().enumerate() {
            let mut rem = idx;
            for i in (0..self.v).rev() {
                vals[i] = (rem % nq as usize) as u64;
                rem /= nq as usize;
            }
            let mut acc = 0u64;
            for term in &self.terms {
                let l = self.word_value(&vals, &term.left, &md);
                let r = self.word_value(&vals, &term.right, &md);
                let mut e = 0u64;
                for p in term.suffix_start + 1..=self.n {
                    e += vals[self.rho[p - 1] - 1];
                }
                let contrib = md.act(f.get2(l, r), e);
                acc = if term.sign > 0 {
                    md.add_z(acc, contrib)
                } else {
                    md.sub_z(acc, contrib)
                };
            }
            *out = acc;
        }
        Ok(DiffImage {
            arity: self.v,
            values,
            module: md,
        })
    }

    fn word_value(&self, vals: &[u64], word: &[usize], md: &CyclicModule) -> u64 {
        word.iter()
            .fold(0u64, |acc, &p| md.add_q(acc, vals[self.rho[p - 1] - 1]))
    }

    /// Stable JSON form for golden tests.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("differential spec serializes")
    }

    /// Human-readable signed term listing.
    pub fn describe(&self) -> String {
        let names = self.variable_names();
        let mut lines = Vec::with_capacity(self.terms.len());
        for term in &self.terms {
            let sign = if term.sign > 0 { '+' } else { '-' };
            let l = self.word_text(&term.left, &names);
            let r = self.word_text(&term.right, &names);
            let mut line = format!("{sign} f({l}, {r})");
            let suffix: Vec<usize> = (term.suffix_start + 1..=self.n).collect();
            if !suffix.is_empty() {
                line.push_str(&format!(" · t^({})", self.word_text(&suffix, &names)));
            }
            lines.push(line);
        }
        lines.join("\n")
    }

    fn variable_names(&self) -> Vec<String> {
        const TAIL: [&str; 7] = ["t", "u", "v", "w", "x", "y", "z"];
        let pos_names: Vec<String> = if self.n <= 7 {
            TAIL[7 - self.n..].iter().map(|s| s.to_string()).collect()
        } else {
            (1..=self.n).map(|i| format!("a{i}")).collect()
        };
        let mut names = vec![String::new(); self.v];
        for (i, &var) in self.rho.iter().enumerate() {
            names[var - 1] = pos_names[i].clone();
        }
        names
    }

    fn word_text(&self, word: &[usize], names: &[String]) -> String {
        let mut counts = vec![0usize; self.v];
        for &p in word {
            counts[self.rho[p - 1] - 1] += 1;
        }
        let mut parts = Vec::new();
        for (i, &c) in counts.iter().enumerate() {
            match c {
                0 => {}
                1 => parts.push(names[i].clone()),
                _ => parts.push(format!("{c}{}", names[i])),
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

/// How to sweep 1-cochains when checking `δ∘δ¹ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sweep {
    /// Indicator 1-cochains only (sufficient for prime m by linearity).
    Basis,
    /// Every normalized 1-cochain.
    Exhaustive,
    /// Indicator cochains plus seeded random samples.
    BasisPlusRandom { samples: usize, seed: u64 },
}

/// Pick a sweep: exhaustive when `m^(n-1)` is small, otherwise basis plus
/// random samples.
pub fn auto_sweep(module: &CyclicModule) -> Sweep {
    let size = (module.m() as u128).checked_pow(module.n() as u32 - 1);
    match size {
        Some(s) if s <= 1_000_000 => Sweep::Exhaustive,
        _ => Sweep::BasisPlusRandom {
            samples: 100,
            seed: 0x1005_c0de,
        },
    }
}

/// Check that every coboundary `δ¹h` is sent to zero by the derived
/// differential. A `false` result is a reportable finding.
pub fn verify_delta_squared(spec: &DifferentialSpec, module: &CyclicModule, sweep: Sweep) -> bool {
    let check = |h: &Cochain| -> bool {
        let f = delta1(h).expect("arity-1 cochain");
        spec.apply(&f).expect("arity-2 cochain").is_zero()
    };
    let n = module.n();
    match sweep {
        Sweep::Exhaustive => enumerate_normalized(module, 1, 1_000_000)
            .expect("exhaustive sweep within size guard")
            .iter()
            .all(check),
        Sweep::Basis => basis_c1(module).iter().all(check),
        Sweep::BasisPlusRandom { samples, seed } => {
            if !basis_c1(module).iter().all(check) {
                return false;
            }
            let mut rng = StdRng::seed_from_u64(seed);
            (0..samples).all(|_| {
                let free: Vec<u64> = (1..n).map(|_| rng.gen_range(0..module.m())).collect();
                check(&cochain1(module, &free))
            })
        }
    }
}

fn basis_c1(module: &CyclicModule) -> Vec<Cochain> {
    let n = module.n() as usize;
    if module.m() == 1 {
        return vec![Cochain::zero(module, 1)];
    }
    (1..n)
        .map(|i| {
            let mut free = vec![0u64; n - 1];
            free[i - 1] = 1;
            cochain1(module, &free)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{lower, parse};

    fn bol() -> DifferentialSpec {
        let ir = lower(&parse("(y*(x*(y*z))) = ((y*(x*y))*z)").unwrap())
            .unwrap()
            .ir;
        derive_differential(&ir)
    }

    fn bol_unrepeated() -> DifferentialSpec {
        let ir = lower(&parse("(w*(x*(y*z))) = ((w*(x*y))*z)").unwrap())
            .unwrap()
            .ir;
        derive_differential(&ir)
    }

    #[test]
    fn bol_terms_are_frozen() {
        let spec = bol_unrepeated();
        assert_eq!(spec.n, 4);
        assert_eq!(spec.v, 4);
        let t = &spec.terms;
        assert_eq!(t.len(), 6);
        // + f(x, y)·z
        assert_eq!((t[0].sign, &t[0].left[..], &t[0].right[..], t[0].suffix_start),
                   (1, &[2][..], &[3][..], 3));
        // + f(w, xy)·z
        assert_eq!((t[1].sign, &t[1].left[..], &t[1].right[..], t[1].suffix_start),
                   (1, &[1][..], &[2, 3][..], 3));
        // + f(w·xy, z)
        assert_eq!((t[2].sign, &t[2].left[..], &t[2].right[..], t[2].suffix_start),
                   (1, &[1, 2, 3][..], &[4][..], 4));
        // - f(w, x·yz), - f(x, yz), - f(y, z)
        assert_eq!((t[3].sign, &t[3].left[..], &t[3].right[..]), (-1, &[1][..], &[2, 3, 4][..]));
        assert_eq!((t[4].sign, &t[4].left[..], &t[4].right[..]), (-1, &[2][..], &[3, 4][..]));
        assert_eq!((t[5].sign, &t[5].left[..], &t[5].right[..]), (-1, &[3][..], &[4][..]));
    }

    #[test]
    fn repeated_bol_shares_terms_with_rho_applied() {
        let spec = bol();
        assert_eq!(spec.v, 3);
        assert_eq!(spec.rho, [1, 2, 1, 3]);
        assert_eq!(
            spec.terms,
            bol_unrepeated().terms,
            "repetition only changes rho, not the symbolic terms"
        );
    }

    #[test]
    fn bol_spec_describe_lists_six_terms() {
        let text = bol().describe();
        assert_eq!(text.lines().count(), 6);
        assert!(text.contains("f(x, y) · t^(z)"), "{text}");
        assert!(text.contains("- f(y, z)"), "{text}");
    }

    #[test]
    fn apply_matches_hand_values() {
        let md = CyclicModule::trivial(3, 2);
        let spec = bol();
        // zero maps to zero
        assert!(spec.apply(&Cochain::zero(&md, 2)).unwrap().is_zero());
        // diag(1,1) is a cocycle
        let diag = Cochain::from_free_entries(&md, &[1, 0, 0, 1]).unwrap();
        assert!(spec.apply(&diag).unwrap().is_zero());
        // f(1,1)=1 alone is not: variable order here is (y, x, z)
        let f11 = Cochain::from_free_entries(&md, &[1, 0, 0, 0]).unwrap();
        let image = spec.apply(&f11).unwrap();
        assert!(!image.is_zero());
        assert_eq!(image.get(&[1, 2, 1]), 1);
    }

    #[test]
    fn delta_squared_vanishes_for_bol() {
        let spec = bol();
        for (n, m, t) in [(3, 2, 1), (3, 3, 1), (4, 2, 1), (2, 3, 2), (4, 5, 2)] {
            let md = CyclicModule::new(n, m, t).unwrap();
            assert!(
                verify_delta_squared(&spec, &md, Sweep::Exhaustive),
                "delta squared nonzero at n={n} m={m} t={t}"
            );
            assert!(verify_delta_squared(&spec, &md, Sweep::Basis));
        }
    }

    #[test]
    fn apply_is_linear() {
        let md = CyclicModule::new(3, 4, 1).unwrap();
        let spec = bol();
        let all = enumerate_normalized(&md, 2, 1 << 10);
        let some: Vec<Cochain> = match all {
            Some(v) => v.into_iter().step_by(37).collect(),
            None => panic!("size guard"),
        };
        for f in &some {
            for g in &some {
                let lhs = spec.apply(&f.add(g).unwrap()).unwrap();
                let df = spec.apply(f).unwrap();
                let dg = spec.apply(g).unwrap();
                let sum: Vec<u64> = df
                    .values()
                    .iter()
                    .zip(dg.values())
                    .map(|(&a, &b)| md.add_z(a, b))
                    .collect();
                assert_eq!(lhs.values(), &sum[..]);
            }
        }
    }

    #[test]
    fn json_is_stable() {
        let spec = bol();
        let json = spec.to_json();
        assert!(json.starts_with(r#"{"n":4,"v":3,"rho":[1,2,1,3],"terms":[{"sign":1,"left":[2],"right":[3],"suffixStart":3}"#), "{json}");
        let back: DifferentialSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
    }
}
