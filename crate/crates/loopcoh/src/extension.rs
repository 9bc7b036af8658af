//! Building loop extensions from factor sets, extracting factor sets from
//! extensions, deciding equivalence, and classifying extensions per
//! cohomology class.

use thiserror::Error;

use crate::cochain::{delta1, Cochain, CochainError};
use crate::cohomology::{cohomology, CohomologyError, Method};
use crate::law::LawKind;
use crate::linalg::{solve_mod, Mat};
use crate::loops::{FiniteLoop, LoopError};
use crate::module::CyclicModule;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtensionError {
    #[error("factor set must have arity 2, got {0}")]
    BadArity(usize),
    #[error("section must be a normalized 1-cochain over the same module")]
    BadSection,
    #[error("projection onto Z/{n} is not a homomorphism at ({x},{y})")]
    BadProjection { n: u64, x: usize, y: usize },
    #[error("loop order {order} is not n*m = {expected}")]
    BadOrder { order: usize, expected: usize },
    #[error(transparent)]
    Loop(#[from] LoopError),
    #[error(transparent)]
    Cochain(#[from] CochainError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
}

/// An order-`n·m` loop built from a factor set, with its provenance.
/// Element `(a, z)` has index `a·m + z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionLoop {
    pub table: FiniteLoop,
    pub module: CyclicModule,
    pub factor_set: Cochain,
}

impl ExtensionLoop {
    #[inline]
    pub fn pair(&self, a: u64, z: u64) -> usize {
        (a * self.module.m() + z) as usize
    }

    #[inline]
    pub fn unpair(&self, idx: usize) -> (u64, u64) {
        let m = self.module.m() as usize;
        ((idx / m) as u64, (idx % m) as u64)
    }

    /// Cayley table plus a provenance block.
    pub fn to_provenance_json(&self, law: &str) -> String {
        let md = &self.module;
        serde_json::json!({
            "n": md.n(),
            "m": md.m(),
            "t": md.t(),
            "law": law,
            "f": self.factor_set.values(),
            "rows": self.table.rows(),
        })
        .to_string()
    }
}

/// Build the extension with product
/// `(a,w)·(b,z) = (a+b, f(a,b) + w·t^b + z)`.
pub fn build_extension(f: &Cochain) -> Result<ExtensionLoop, ExtensionError> {
    if f.arity() != 2 {
        return Err(ExtensionError::BadArity(f.arity()));
    }
    let md = f.module().clone();
    let (n, m) = (md.n(), md.m());
    let q = (n * m) as usize;
    let mut rows = vec![vec![0usize; q]; q];
    for a in 0..n {
        for w in 0..m {
            for b in 0..n {
                for z in 0..m {
                    let qa = md.add_q(a, b);
                    let za = md.add_z(md.add_z(f.get2(a, b), md.act(w, b)), z);
                    rows[(a * m + w) as usize][(b * m + z) as usize] = (qa * m + za) as usize;
                }
            }
        }
    }
    let table = FiniteLoop::from_rows(&rows)?;
    Ok(ExtensionLoop {
        table,
        module: md,
        factor_set: f.clone(),
    })
}

/// Extract the factor set of a loop indexed as an extension (pair `(a,z)` at
/// index `a·m+z`), using the section `s(x) = (x, h(x))` (`h = None` means
/// the flat section `s(x) = (x, 0)`).
pub fn extract_factor_set(
    table: &FiniteLoop,
    module: &CyclicModule,
    h: Option<&Cochain>,
) -> Result<Cochain, ExtensionError> {
    let (n, m) = (module.n(), module.m());
    if table.order() != (n * m) as usize {
        return Err(ExtensionError::BadOrder {
            order: table.order(),
            expected: (n * m) as usize,
        });
    }
    if let Some(h) = h {
        if h.arity() != 1 || h.module() != module {
            return Err(ExtensionError::BadSection);
        }
    }
    let proj = |idx: usize| (idx as u64) / m;
    for x in 0..table.order() {
        for y in 0..table.order() {
            if proj(table.mul(x, y)) != module.add_q(proj(x), proj(y)) {
                return Err(ExtensionError::BadProjection { n, x, y });
            }
        }
    }
    let s = |x: u64| -> usize {
        let hz = h.map(|h| h.get(&[x])).unwrap_or(0);
        (x * m + hz) as usize
    };
    let mut f = Cochain::zero(module, 2);
    for x in 0..n {
        for y in 0..n {
            let prod = table.mul(s(x), s(y));
            let k = table.left_div(s(module.add_q(x, y)), prod);
            debug_assert_eq!(proj(k), 0, "factor lands in the kernel fiber");
            f.set(&[x, y], (k as u64) % m);
        }
    }
    Ok(f)
}

/// If `g - f` is a coboundary, return a witness `h` with `g - f = δ¹h`.
pub fn equivalent(f: &Cochain, g: &Cochain) -> Result<Option<Cochain>, ExtensionError> {
    let d = g.sub(f)?;
    let md = f.module().clone();
    let n = md.n() as usize;
    let m = md.m();
    // Solve δ¹h = d for the free values h(1..n-1):
    // h(y) - h(x+y) + h(x)·t^y = d(x,y)
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for x in 1..n as u64 {
        for y in 1..n as u64 {
            let mut row = vec![0i128; n - 1];
            row[(y - 1) as usize] += 1;
            let s = md.add_q(x, y);
            if s != 0 {
                row[(s - 1) as usize] -= 1;
            }
            row[(x - 1) as usize] += md.t_pow(y) as i128;
            rows.push(row);
            rhs.push(d.get2(x, y) as i128);
        }
    }
    let mat = Mat::from_rows(&rows);
    let Some(free) = solve_mod(&mat, &rhs, m) else {
        return Ok(None);
    };
    let h = crate::cochain::cochain1(&md, &free);
    // The system is equivalent to δ¹h = d by construction; double-check.
    debug_assert_eq!(delta1(&h)?, d);
    Ok(Some(h))
}

/// Is `(a,z) -> (a, z + h(a))` a loop isomorphism
/// `build(f + δ¹h) -> build(f)` commuting with inclusion and projection?
pub fn witness_isomorphism(f: &Cochain, h: &Cochain) -> Result<bool, ExtensionError> {
    let md = f.module().clone();
    let g = f.add(&delta1(h)?)?;
    let e1 = build_extension(&g)?;
    let e2 = build_extension(f)?;
    let m = md.m();
    let phi = |idx: usize| -> usize {
        let (a, z) = e1.unpair(idx);
        (a * m + md.add_z(z, h.get(&[a]))) as usize
    };
    let q = e1.table.order();
    for u in 0..q {
        for v in 0..q {
            if phi(e1.table.mul(u, v)) != e2.table.mul(phi(u), phi(v)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// One built extension per cohomology class of the law.
pub fn classify(
    kind: &LawKind,
    module: &CyclicModule,
    method: Method,
    limit: u128,
) -> Result<Vec<ExtensionLoop>, ExtensionError> {
    let report = cohomology(kind, module, method, limit)?;
    report
        .representative_cochains
        .iter()
        .map(build_extension)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::{cochain1, enumerate_normalized};
    use crate::cohomology::DEFAULT_BRUTE_LIMIT;
    use crate::law;
    use crate::loops::LawCheck;

    fn md32() -> CyclicModule {
        CyclicModule::trivial(3, 2)
    }

    #[test]
    fn zero_factor_set_gives_direct_product() {
        let ext = build_extension(&Cochain::zero(&md32(), 2)).unwrap();
        assert!(ext.table.is_associative());
        assert!(ext.table.is_commutative());
        for a in 0..3u64 {
            for w in 0..2u64 {
                for b in 0..3u64 {
                    for z in 0..2u64 {
                        let got = ext.table.mul(ext.pair(a, w), ext.pair(b, z));
                        assert_eq!(got, ext.pair((a + b) % 3, (w + z) % 2));
                    }
                }
            }
        }
    }

    #[test]
    fn cocycles_build_lawful_loops_and_non_cocycles_fail() {
        let bol = law::bol_ir();
        // case iii is a cocycle
        let f = Cochain::from_free_entries(&md32(), &[1, 1, 1, 0]).unwrap();
        let ext = build_extension(&f).unwrap();
        assert!(ext.table.law_holds(&bol).holds());
        // f(1,1)=1 alone is not
        let f = Cochain::from_free_entries(&md32(), &[1, 0, 0, 0]).unwrap();
        let ext = build_extension(&f).unwrap();
        assert!(matches!(ext.table.law_holds(&bol), LawCheck::Fails { .. }));
    }

    #[test]
    fn extraction_round_trips() {
        for f in enumerate_normalized(&md32(), 2, 1 << 10).unwrap() {
            let ext = build_extension(&f).unwrap();
            let got = extract_factor_set(&ext.table, &md32(), None).unwrap();
            assert_eq!(got, f);
        }
    }

    #[test]
    fn sections_shift_by_a_coboundary() {
        let module = md32();
        for f in enumerate_normalized(&module, 2, 1 << 10).unwrap() {
            let ext = build_extension(&f).unwrap();
            for h in enumerate_normalized(&module, 1, 1 << 10).unwrap() {
                let g = extract_factor_set(&ext.table, &module, Some(&h)).unwrap();
                assert_eq!(g.sub(&f).unwrap(), delta1(&h).unwrap());
            }
        }
    }

    #[test]
    fn equivalence_witnesses() {
        let module = md32();
        // case iv = δ¹h for h = (1, 0)
        let zero = Cochain::zero(&module, 2);
        let case_iv = Cochain::from_free_entries(&module, &[0, 1, 1, 1]).unwrap();
        let h = equivalent(&zero, &case_iv).unwrap().expect("coboundary");
        assert_eq!(delta1(&h).unwrap(), case_iv);
        // f = g gives some h with δ¹h = 0
        let h = equivalent(&case_iv, &case_iv).unwrap().expect("trivial");
        assert!(delta1(&h).unwrap().is_zero());
        // symmetric f(1,1)=1 is not a coboundary
        let f = Cochain::from_free_entries(&module, &[1, 0, 0, 0]).unwrap();
        assert_eq!(equivalent(&zero, &f).unwrap(), None);
    }

    #[test]
    fn witness_isomorphism_sweep() {
        let module = md32();
        for f in enumerate_normalized(&module, 2, 1 << 10).unwrap() {
            for h in enumerate_normalized(&module, 1, 1 << 10).unwrap() {
                assert!(witness_isomorphism(&f, &h).unwrap());
            }
        }
    }

    #[test]
    fn classify_bol_and_commutativity() {
        let module = md32();
        let bol = LawKind::OneNested(law::bol_ir());
        let exts = classify(&bol, &module, Method::Auto, DEFAULT_BRUTE_LIMIT).unwrap();
        assert_eq!(exts.len(), 1);
        assert!(exts[0].table.is_associative());
        assert_eq!(exts[0].table, build_extension(&Cochain::zero(&module, 2)).unwrap().table);

        let comm = classify(
            &LawKind::Commutativity,
            &module,
            Method::Auto,
            DEFAULT_BRUTE_LIMIT,
        )
        .unwrap();
        assert_eq!(comm.len(), 2);
        assert!(comm.iter().all(|e| e.table.is_commutative()));
    }

    #[test]
    fn kernel_fiber_is_central_and_nuclear() {
        let module = md32();
        for f in enumerate_normalized(&module, 2, 1 << 10).unwrap() {
            let ext = build_extension(&f).unwrap();
            let nucleus = ext.table.nucleus();
            for z in 0..2u64 {
                let idx = ext.pair(0, z);
                assert!(nucleus.contains(&idx));
                // commutes with everything (trivial action)
                for u in 0..ext.table.order() {
                    assert_eq!(ext.table.mul(idx, u), ext.table.mul(u, idx));
                }
            }
        }
    }

    #[test]
    fn m_equal_one_classifies_to_q_itself() {
        let module = CyclicModule::trivial(4, 1);
        let bol = LawKind::OneNested(law::bol_ir());
        let exts = classify(&bol, &module, Method::Auto, DEFAULT_BRUTE_LIMIT).unwrap();
        assert_eq!(exts.len(), 1);
        assert_eq!(exts[0].table, crate::loops::FiniteLoop::cyclic(4));
    }

    #[test]
    fn nontrivial_action_round_trip() {
        let module = CyclicModule::new(2, 3, 2).unwrap();
        for f in enumerate_normalized(&module, 2, 1 << 10).unwrap() {
            let ext = build_extension(&f).unwrap();
            assert_eq!(extract_factor_set(&ext.table, &module, None).unwrap(), f);
        }
        // sections shift by coboundaries here too
        let f = Cochain::zero(&module, 2);
        let ext = build_extension(&f).unwrap();
        let h = cochain1(&module, &[2]);
        let g = extract_factor_set(&ext.table, &module, Some(&h)).unwrap();
        assert_eq!(g, delta1(&h).unwrap());
    }
}
