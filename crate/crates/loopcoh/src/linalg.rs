//! Integer matrix diagonalization and linear solving over Z/m.
//!
//! A constraint system `A x = b (mod m)` with integer coefficients is
//! reduced by unimodular row and column operations to a diagonal system,
//! which makes counting, enumerating, and solving straightforward for the
//! small matrices that arise from cochain constraints.

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<i128>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i128>]) -> Self {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        let mut m = Mat::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn mul_vec(&self, x: &[i128]) -> Vec<i128> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * x[j]).sum())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[a] -= q * row[b]
    fn add_row(&mut self, a: usize, b: usize, q: i128) {
        for j in 0..self.cols {
            let v = self[(b, j)];
            self[(a, j)] -= q * v;
        }
    }

    /// col[a] -= q * col[b]
    fn add_col(&mut self, a: usize, b: usize, q: i128) {
        for i in 0..self.rows {
            let v = self[(i, b)];
            self[(i, a)] -= q * v;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            self[(a, j)] = -self[(a, j)];
        }
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = i128;
    fn index(&self, (i, j): (usize, usize)) -> &i128 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i128 {
        &mut self.data[i * self.cols + j]
    }
}

/// Result of diagonalizing `A`: unimodular `U`, `V` with `U A V = D`,
/// `D` diagonal with nonnegative entries (given as a vector).
#[derive(Debug, Clone)]
pub struct Diagonalization {
    pub diag: Vec<i128>,
    pub u: Mat,
    pub v: Mat,
}

/// Diagonalize by repeated pivoting on a minimal-absolute-value entry.
/// No divisibility normalization is performed; for counting and solving
/// mod m the plain diagonal form suffices.
pub fn diagonalize(a: &Mat) -> Diagonalization {
    let mut d = a.clone();
    let mut u = Mat::identity(a.rows);
    let mut v = Mat::identity(a.cols);
    let bound = a.rows.min(a.cols);
    for k in 0..bound {
        loop {
            // locate minimal nonzero entry in the trailing submatrix
            let mut best: Option<(usize, usize)> = None;
            for i in k..d.rows {
                for j in k..d.cols {
                    if d[(i, j)] != 0
                        && best.map_or(true, |(bi, bj)| {
                            d[(i, j)].abs() < d[(bi, bj)].abs()
                        })
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { return finish(d, u, v, bound) };
            d.swap_rows(k, pi);
            u.swap_rows(k, pi);
            d.swap_cols(k, pj);
            v.swap_cols(k, pj);
            let p = d[(k, k)];
            let mut clean = true;
            for i in k + 1..d.rows {
                let q = d[(i, k)].div_euclid(p);
                if q != 0 {
                    d.add_row(i, k, q);
                    u.add_row(i, k, q);
                }
                if d[(i, k)] != 0 {
                    clean = false;
                }
            }
            for j in k + 1..d.cols {
                let q = d[(k, j)].div_euclid(p);
                if q != 0 {
                    d.add_col(j, k, q);
                    v.add_col(j, k, q);
                }
                if d[(k, j)] != 0 {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if d[(k, k)] < 0 {
            d.negate_row(k);
            u.negate_row(k);
        }
    }
    finish(d, u, v, bound)
}

fn finish(d: Mat, u: Mat, v: Mat, bound: usize) -> Diagonalization {
    let diag = (0..bound).map(|k| d[(k, k)]).collect();
    Diagonalization { diag, u, v }
}

fn gcd_i(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd_i(b, a % b)
    }
}

/// Number of solutions of `A x = 0 (mod m)` in `(Z/m)^cols`.
pub fn count_solutions_mod(a: &Mat, m: u64) -> u128 {
    let dg = diagonalize(a);
    let m = m as i128;
    let mut count: u128 = 1;
    for j in 0..a.cols {
        let d = dg.diag.get(j).copied().unwrap_or(0);
        count *= gcd_i(d, m) as u128;
    }
    count
}

/// All solutions of `A x = 0 (mod m)`, each reduced into `0..m`,
/// in a deterministic order. Returns `None` if more than `cap`.
pub fn kernel_mod(a: &Mat, m: u64, cap: u128) -> Option<Vec<Vec<u64>>> {
    let total = count_solutions_mod(a, m);
    if total > cap {
        return None;
    }
    let dg = diagonalize(a);
    let mi = m as i128;
    // y_j ranges over multiples of m / gcd(d_j, m)
    let steps: Vec<i128> = (0..a.cols)
        .map(|j| {
            let d = dg.diag.get(j).copied().unwrap_or(0);
            mi / gcd_i(d, mi)
        })
        .collect();
    let counts: Vec<i128> = steps.iter().map(|&s| mi / s).collect();
    let mut idx = vec![0i128; a.cols];
    let mut out = Vec::with_capacity(total as usize);
    loop {
        let y: Vec<i128> = idx.iter().zip(&steps).map(|(&i, &s)| i * s).collect();
        let x = dg.v.mul_vec(&y);
        out.push(x.iter().map(|&c| c.rem_euclid(mi) as u64).collect());
        let mut j = a.cols;
        loop {
            if j == 0 {
                return Some(out);
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < counts[j] {
                break;
            }
            idx[j] = 0;
        }
    }
}

/// Extended gcd: returns `(g, s)` with `s*a = g (mod b0)` for the original
/// modulus; used to invert `a/g` mod `b/g`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// One solution of `A x = b (mod m)`, or `None` if inconsistent.
pub fn solve_mod(a: &Mat, b: &[i128], m: u64) -> Option<Vec<u64>> {
    assert_eq!(b.len(), a.rows);
    let dg = diagonalize(a);
    let mi = m as i128;
    let c = dg.u.mul_vec(b);
    let mut y = vec![0i128; a.cols];
    for i in 0..a.rows {
        let d = if i < dg.diag.len() { dg.diag[i] } else { 0 };
        let ci = c[i].rem_euclid(mi);
        if d == 0 || i >= a.cols {
            if ci != 0 {
                return None;
            }
            continue;
        }
        let g = gcd_i(d, mi);
        if ci % g != 0 {
            return None;
        }
        // (d/g) y = c/g (mod m/g)
        let dm = mi / g;
        let (gg, s, _) = ext_gcd((d / g).rem_euclid(dm), dm);
        debug_assert_eq!(gg, 1);
        y[i] = (s.rem_euclid(dm) * (ci / g)).rem_euclid(dm);
    }
    let x = dg.v.mul_vec(&y);
    Some(x.iter().map(|&v| v.rem_euclid(mi) as u64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_uav(a: &Mat) {
        let dg = diagonalize(a);
        // U A V should equal diag
        for i in 0..a.rows {
            for j in 0..a.cols {
                let mut s = 0i128;
                for p in 0..a.rows {
                    for q in 0..a.cols {
                        s += dg.u[(i, p)] * a[(p, q)] * dg.v[(q, j)];
                    }
                }
                let want = if i == j {
                    dg.diag.get(i).copied().unwrap_or(0)
                } else {
                    0
                };
                assert_eq!(s, want, "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn diagonalizes_small_matrices() {
        check_uav(&Mat::from_rows(&[vec![2, 4], vec![6, 8]]));
        check_uav(&Mat::from_rows(&[vec![1, 2, 3], vec![4, 5, 6]]));
        check_uav(&Mat::from_rows(&[vec![0, 0], vec![0, 0]]));
        check_uav(&Mat::from_rows(&[vec![3], vec![5], vec![7]]));
        check_uav(&Mat::from_rows(&[vec![-2, 7], vec![5, -3], vec![1, 1]]));
    }

    #[test]
    fn counts_match_brute_force() {
        let cases = [
            (Mat::from_rows(&[vec![2, 0], vec![0, 3]]), 6u64),
            (Mat::from_rows(&[vec![1, 1], vec![1, -1]]), 4),
            (Mat::from_rows(&[vec![2, 4, 6]]), 4),
            (Mat::from_rows(&[vec![0, 0]]), 5),
        ];
        for (a, m) in cases {
            let mut brute = 0u128;
            let cols = a.cols;
            let total = (m as u128).pow(cols as u32);
            for code in 0..total {
                let mut x = Vec::with_capacity(cols);
                let mut rem = code;
                for _ in 0..cols {
                    x.push((rem % m as u128) as i128);
                    rem /= m as u128;
                }
                if a.mul_vec(&x).iter().all(|&v| v.rem_euclid(m as i128) == 0) {
                    brute += 1;
                }
            }
            assert_eq!(count_solutions_mod(&a, m), brute, "m = {m}");
        }
    }

    #[test]
    fn kernel_enumerates_exactly_the_solutions() {
        let a = Mat::from_rows(&[vec![2, 2], vec![0, 4]]);
        let m = 4;
        let mut ker = kernel_mod(&a, m, 1 << 20).unwrap();
        ker.sort();
        ker.dedup();
        assert_eq!(ker.len() as u128, count_solutions_mod(&a, m));
        for x in &ker {
            let xi: Vec<i128> = x.iter().map(|&v| v as i128).collect();
            assert!(a.mul_vec(&xi).iter().all(|&v| v.rem_euclid(4) == 0));
        }
    }

    #[test]
    fn solves_affine_systems() {
        let a = Mat::from_rows(&[vec![2, 1], vec![1, 3]]);
        let b = vec![3, 4];
        let x = solve_mod(&a, &b, 5).unwrap();
        let xi: Vec<i128> = x.iter().map(|&v| v as i128).collect();
        for (lhs, rhs) in a.mul_vec(&xi).iter().zip(&b) {
            assert_eq!(lhs.rem_euclid(5), rhs.rem_euclid(5));
        }
        // inconsistent: 2x = 1 mod 4
        assert_eq!(solve_mod(&Mat::from_rows(&[vec![2]]), &[1], 4), None);
        // consistent with nontrivial gcd: 2x = 2 mod 4
        let x = solve_mod(&Mat::from_rows(&[vec![2]]), &[2], 4).unwrap();
        assert_eq!((2 * x[0]) % 4, 2);
    }
}
