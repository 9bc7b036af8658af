//! The coefficient system: a cyclic quotient acting on a cyclic kernel.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("orders must be positive (n = {n}, m = {m})")]
    ZeroOrder { n: u64, m: u64 },
    #[error("action generator t = {t} is not a unit of Z/{m}")]
    NotAUnit { t: u64, m: u64 },
    #[error("t^n = {tn} != 1 (mod {m}): the action does not factor through Z/{n}")]
    BadOrder { n: u64, m: u64, tn: u64 },
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The module `Z = Z/m` with `Q = Z/n` acting by `z · x = z t^x (mod m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicModule {
    n: u64,
    m: u64,
    t: u64,
    /// `t^x mod m` for `x` in `0..n`.
    tpow: Vec<u64>,
}

impl CyclicModule {
    pub fn new(n: u64, m: u64, t: u64) -> Result<Self, ModuleError> {
        if n == 0 || m == 0 {
            return Err(ModuleError::ZeroOrder { n, m });
        }
        let t = t % m;
        if gcd(t, m) != 1 {
            return Err(ModuleError::NotAUnit { t, m });
        }
        let mut tpow = Vec::with_capacity(n as usize);
        let mut p = 1 % m;
        for _ in 0..n {
            tpow.push(p);
            p = p * t % m;
        }
        if p != 1 % m {
            return Err(ModuleError::BadOrder { n, m, tn: p });
        }
        Ok(CyclicModule { n, m, t, tpow })
    }

    /// Trivial action.
    pub fn trivial(n: u64, m: u64) -> Self {
        Self::new(n, m, 1).expect("t = 1 is always a valid action")
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    #[inline]
    pub fn add_q(&self, x: u64, y: u64) -> u64 {
        (x + y) % self.n
    }

    #[inline]
    pub fn add_z(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.m
    }

    #[inline]
    pub fn sub_z(&self, a: u64, b: u64) -> u64 {
        (a + self.m - b) % self.m
    }

    /// `z · x = z t^x mod m`.
    #[inline]
    pub fn act(&self, z: u64, x: u64) -> u64 {
        z * self.tpow[(x % self.n) as usize] % self.m
    }

    /// `t^x mod m`.
    #[inline]
    pub fn t_pow(&self, x: u64) -> u64 {
        self.tpow[(x % self.n) as usize]
    }

    /// `t^{-x} mod m`.
    #[inline]
    pub fn t_pow_neg(&self, x: u64) -> u64 {
        self.tpow[((self.n - x % self.n) % self.n) as usize]
    }

    /// All valid action generators for the pair `(n, m)`.
    pub fn valid_actions(n: u64, m: u64) -> Vec<u64> {
        (1..=m.max(1))
            .filter(|&t| t < m.max(2))
            .filter(|&t| CyclicModule::new(n, m, t).is_ok())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_action() {
        assert!(CyclicModule::new(3, 2, 1).is_ok());
        // 2^2 = 4 = 1 mod 3
        assert!(CyclicModule::new(2, 3, 2).is_ok());
        // 2^3 = 8 = 2 mod 3
        assert!(matches!(
            CyclicModule::new(3, 3, 2),
            Err(ModuleError::BadOrder { .. })
        ));
        assert!(matches!(
            CyclicModule::new(3, 4, 2),
            Err(ModuleError::NotAUnit { .. })
        ));
        assert!(matches!(
            CyclicModule::new(0, 2, 1),
            Err(ModuleError::ZeroOrder { .. })
        ));
    }

    #[test]
    fn action_is_associative() {
        let md = CyclicModule::new(4, 5, 2).unwrap(); // 2^4 = 16 = 1 mod 5
        for z in 0..5 {
            for x in 0..4 {
                for y in 0..4 {
                    assert_eq!(md.act(z, x + y), md.act(md.act(z, x), y));
                }
            }
        }
    }

    #[test]
    fn enumerates_valid_actions() {
        assert_eq!(CyclicModule::valid_actions(2, 3), vec![1, 2]);
        assert_eq!(CyclicModule::valid_actions(3, 3), vec![1]);
        assert_eq!(CyclicModule::valid_actions(4, 5), vec![1, 2, 3, 4]);
    }

    #[test]
    fn inverse_powers() {
        let md = CyclicModule::new(2, 3, 2).unwrap();
        for x in 0..2 {
            assert_eq!(md.t_pow(x) * md.t_pow_neg(x) % 3, 1);
        }
    }
}
