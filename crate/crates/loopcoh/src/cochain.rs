//! Normalized cochains over a cyclic module, the dimension-one differential,
//! and the built-in commutativity / inverse-property operators.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::module::CyclicModule;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CochainError {
    #[error("expected arity {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("cochains live over different modules")]
    ModuleMismatch,
    #[error("values array has length {got}, expected n^k = {expected}")]
    BadLength { expected: usize, got: usize },
    #[error("value {value} at index {index} is not reduced mod {m}")]
    NotReduced { index: usize, value: u64, m: u64 },
    #[error("cochain is not normalized: entry with a zero argument is {value} != 0")]
    NotNormalized { value: u64 },
}

/// A normalized function `Q^k -> Z/m`, dense row-major representation.
///
/// Normalized means the value is 0 whenever any argument is 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cochain {
    arity: usize,
    values: Vec<u64>,
    module: CyclicModule,
}

#[derive(Serialize, Deserialize)]
struct CochainJson {
    arity: usize,
    n: u64,
    m: u64,
    t: u64,
    values: Vec<u64>,
}

impl Cochain {
    pub fn zero(module: &CyclicModule, arity: usize) -> Self {
        let len = (module.n() as usize).pow(arity as u32);
        Cochain {
            arity,
            values: vec![0; len],
            module: module.clone(),
        }
    }

    pub fn from_values(
        module: &CyclicModule,
        arity: usize,
        values: Vec<u64>,
    ) -> Result<Self, CochainError> {
        let expected = (module.n() as usize).pow(arity as u32);
        if values.len() != expected {
            return Err(CochainError::BadLength {
                expected,
                got: values.len(),
            });
        }
        for (index, &value) in values.iter().enumerate() {
            if value >= module.m() {
                return Err(CochainError::NotReduced {
                    index,
                    value,
                    m: module.m(),
                });
            }
        }
        let c = Cochain {
            arity,
            values,
            module: module.clone(),
        };
        if let Some(value) = c.normalization_violation() {
            return Err(CochainError::NotNormalized { value });
        }
        Ok(c)
    }

    /// Arity-2 cochain from its free entries `f(x,y)`, `x,y` in `1..n`,
    /// row-major over the `(n-1) x (n-1)` block.
    pub fn from_free_entries(module: &CyclicModule, free: &[u64]) -> Result<Self, CochainError> {
        let n = module.n() as usize;
        let k = n.saturating_sub(1);
        if free.len() != k * k {
            return Err(CochainError::BadLength {
                expected: k * k,
                got: free.len(),
            });
        }
        let mut values = vec![0u64; n * n];
        for x in 1..n {
            for y in 1..n {
                values[x * n + y] = free[(x - 1) * k + (y - 1)];
            }
        }
        Self::from_values(module, 2, values)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn module(&self) -> &CyclicModule {
        &self.module
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// The free entries (all arguments nonzero), row-major.
    pub fn free_entries(&self) -> Vec<u64> {
        let n = self.module.n() as usize;
        let mut out = Vec::new();
        let mut args = vec![0usize; self.arity];
        self.for_each_index(|idx, cochain| {
            let _ = cochain;
            let mut rem = idx;
            for a in (0..self.arity).rev() {
                args[a] = rem % n;
                rem /= n;
            }
            if args.iter().all(|&a| a != 0) {
                out.push(self.values[idx]);
            }
        });
        out
    }

    fn for_each_index(&self, mut f: impl FnMut(usize, &Self)) {
        for idx in 0..self.values.len() {
            f(idx, self);
        }
    }

    #[inline]
    pub fn index(&self, args: &[u64]) -> usize {
        let n = self.module.n() as usize;
        args.iter().fold(0usize, |acc, &a| acc * n + a as usize)
    }

    #[inline]
    pub fn get(&self, args: &[u64]) -> u64 {
        self.values[self.index(args)]
    }

    #[inline]
    pub fn get2(&self, x: u64, y: u64) -> u64 {
        self.values[(x * self.module.n() + y) as usize]
    }

    pub fn set(&mut self, args: &[u64], v: u64) {
        let i = self.index(args);
        self.values[i] = v % self.module.m();
    }

    fn normalization_violation(&self) -> Option<u64> {
        let n = self.module.n() as usize;
        for idx in 0..self.values.len() {
            let mut rem = idx;
            let mut has_zero = false;
            for _ in 0..self.arity {
                if rem % n == 0 {
                    has_zero = true;
                }
                rem /= n;
            }
            if has_zero && self.values[idx] != 0 {
                return Some(self.values[idx]);
            }
        }
        None
    }

    pub fn is_normalized(&self) -> bool {
        self.normalization_violation().is_none()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn add(&self, other: &Self) -> Result<Self, CochainError> {
        if self.module != other.module {
            return Err(CochainError::ModuleMismatch);
        }
        if self.arity != other.arity {
            return Err(CochainError::ArityMismatch {
                expected: self.arity,
                got: other.arity,
            });
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| self.module.add_z(a, b))
            .collect();
        Ok(Cochain {
            arity: self.arity,
            values,
            module: self.module.clone(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CochainError> {
        if self.module != other.module {
            return Err(CochainError::ModuleMismatch);
        }
        if self.arity != other.arity {
            return Err(CochainError::ArityMismatch {
                expected: self.arity,
                got: other.arity,
            });
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| self.module.sub_z(a, b))
            .collect();
        Ok(Cochain {
            arity: self.arity,
            values,
            module: self.module.clone(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&CochainJson {
            arity: self.arity,
            n: self.module.n(),
            m: self.module.m(),
            t: self.module.t(),
            values: self.values.clone(),
        })
        .expect("cochain serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        let raw: CochainJson = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let module = CyclicModule::new(raw.n, raw.m, raw.t).map_err(|e| e.to_string())?;
        Self::from_values(&module, raw.arity, raw.values).map_err(|e| e.to_string())
    }
}

/// Number of normalized cochains of the given arity: `m^((n-1)^k)`.
pub fn normalized_count(module: &CyclicModule, arity: usize) -> u128 {
    let free = (module.n() as u128 - 1).pow(arity as u32);
    (module.m() as u128).checked_pow(free.min(u32::MAX as u128) as u32).unwrap_or(u128::MAX)
}

/// Enumerate all normalized cochains of the given arity, free entries
/// counting up lexicographically (so the zero cochain comes first).
/// Returns `None` if there are more than `cap`.
pub fn enumerate_normalized(
    module: &CyclicModule,
    arity: usize,
    cap: u128,
) -> Option<Vec<Cochain>> {
    let total = normalized_count(module, arity);
    if total > cap {
        return None;
    }
    let n = module.n() as usize;
    let m = module.m();
    let free_cells = (n - 1).pow(arity as u32);
    let mut free = vec![0u64; free_cells];
    let mut out = Vec::with_capacity(total as usize);
    loop {
        out.push(cochain_from_free(module, arity, &free));
        // odometer, last cell fastest
        let mut i = free_cells;
        loop {
            if i == 0 {
                return Some(out);
            }
            i -= 1;
            free[i] += 1;
            if free[i] < m {
                break;
            }
            free[i] = 0;
        }
    }
}

fn cochain_from_free(module: &CyclicModule, arity: usize, free: &[u64]) -> Cochain {
    let n = module.n() as usize;
    let mut c = Cochain::zero(module, arity);
    let mut args = vec![1u64; arity];
    for cell in free {
        let idx = c.index(&args);
        c.values[idx] = *cell % module.m();
        let mut i = arity;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            args[i] += 1;
            if (args[i] as usize) < n {
                break;
            }
            args[i] = 1;
        }
    }
    c
}

/// Arity-1 cochain with the given free values `h(1), ..., h(n-1)`.
pub fn cochain1(module: &CyclicModule, free: &[u64]) -> Cochain {
    cochain_from_free(module, 1, free)
}

/// The dimension-one differential `(δh)(x,y) = h(y) - h(x+y) + h(x)·y`.
pub fn delta1(h: &Cochain) -> Result<Cochain, CochainError> {
    if h.arity != 1 {
        return Err(CochainError::ArityMismatch {
            expected: 1,
            got: h.arity,
        });
    }
    let md = h.module().clone();
    let n = md.n();
    let mut out = Cochain::zero(&md, 2);
    for x in 0..n {
        for y in 0..n {
            let v = md.sub_z(
                md.add_z(h.get(&[y]), md.act(h.get(&[x]), y)),
                h.get(&[md.add_q(x, y)]),
            );
            out.set(&[x, y], v);
        }
    }
    Ok(out)
}

/// Antisymmetrization `(δf)(x,y) = f(x,y) - f(y,x)`: zero iff `f` symmetric.
pub fn commutativity_delta(f: &Cochain) -> Result<Cochain, CochainError> {
    if f.arity != 2 {
        return Err(CochainError::ArityMismatch {
            expected: 2,
            got: f.arity,
        });
    }
    let md = f.module().clone();
    let n = md.n();
    let mut out = Cochain::zero(&md, 2);
    for x in 0..n {
        for y in 0..n {
            out.set(&[x, y], md.sub_z(f.get2(x, y), f.get2(y, x)));
        }
    }
    Ok(out)
}

/// Inverse-property residual `r(x) = f(x,-x) - f(-x,x)·t^{-x}`.
///
/// The extension built from `f` has compatible two-sided inverses at `x`
/// iff `r(x) = 0`.
pub fn inverse_property_residual(f: &Cochain) -> Result<Cochain, CochainError> {
    if f.arity != 2 {
        return Err(CochainError::ArityMismatch {
            expected: 2,
            got: f.arity,
        });
    }
    let md = f.module().clone();
    let n = md.n();
    let mut out = Cochain::zero(&md, 1);
    for x in 1..n {
        let neg = (n - x) % n;
        let v = md.sub_z(f.get2(x, neg), f.get2(neg, x) * md.t_pow_neg(x) % md.m());
        out.set(&[x], v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md32() -> CyclicModule {
        CyclicModule::trivial(3, 2)
    }

    #[test]
    fn delta1_hand_value() {
        // n=3, m=2, t=1, h = (1, 0) -> (f(1,1),f(1,2),f(2,1),f(2,2)) = (0,1,1,1)
        let h = cochain1(&md32(), &[1, 0]);
        let f = delta1(&h).unwrap();
        assert_eq!(
            [f.get2(1, 1), f.get2(1, 2), f.get2(2, 1), f.get2(2, 2)],
            [0, 1, 1, 1]
        );
        assert!(f.is_normalized());
    }

    #[test]
    fn delta1_of_zero_is_zero() {
        let h = Cochain::zero(&md32(), 1);
        assert!(delta1(&h).unwrap().is_zero());
    }

    #[test]
    fn delta1_kills_homomorphisms() {
        // n=6, m=4, trivial action: h(x) = 2x mod 4 is a homomorphism.
        let md = CyclicModule::trivial(6, 4);
        let h = cochain1(&md, &[2, 0, 2, 0, 2]);
        assert!(delta1(&h).unwrap().is_zero());
    }

    #[test]
    fn commutativity_delta_detects_asymmetry() {
        let mut f = Cochain::zero(&md32(), 2);
        f.set(&[1, 2], 1);
        let d = commutativity_delta(&f).unwrap();
        assert_eq!(d.get2(1, 2), 1);
        assert_eq!(d.get2(2, 1), 1); // -1 mod 2
        // symmetric cochain maps to zero
        let mut s = Cochain::zero(&md32(), 2);
        s.set(&[1, 2], 1);
        s.set(&[2, 1], 1);
        assert!(commutativity_delta(&s).unwrap().is_zero());
    }

    #[test]
    fn coboundaries_are_symmetric_under_trivial_action() {
        for free in [[0, 0], [1, 0], [0, 1], [1, 1]] {
            let f = delta1(&cochain1(&md32(), &free)).unwrap();
            assert!(commutativity_delta(&f).unwrap().is_zero());
        }
    }

    #[test]
    fn inverse_residual_zero_cases() {
        let f = Cochain::zero(&md32(), 2);
        assert!(inverse_property_residual(&f).unwrap().is_zero());
        // n=3, m=2: constraint is f(1,2) = f(2,1)
        let mut g = Cochain::zero(&md32(), 2);
        g.set(&[1, 2], 1);
        let r = inverse_property_residual(&g).unwrap();
        assert_eq!(r.get(&[1]), 1);
        assert_eq!(r.get(&[0]), 0);
    }

    #[test]
    fn enumeration_is_lexicographic_and_complete() {
        let all = enumerate_normalized(&md32(), 2, 1 << 20).unwrap();
        assert_eq!(all.len(), 16);
        assert!(all[0].is_zero());
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        for c in &all {
            assert!(c.is_normalized());
        }
    }

    #[test]
    fn rejects_unnormalized_values() {
        let md = md32();
        let mut values = vec![0u64; 9];
        values[1] = 1; // f(0,1) != 0
        assert!(matches!(
            Cochain::from_values(&md, 2, values),
            Err(CochainError::NotNormalized { .. })
        ));
    }
}
