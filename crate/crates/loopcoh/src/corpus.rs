//! A bundled corpus of small loops: cyclic groups, the smallest nonabelian
//! group, and nonassociative examples found by backtracking over normalized
//! Latin squares.

use crate::loops::FiniteLoop;

/// The classical order-5 nonassociative loop (smallest order at which
/// nonassociative loops exist).
pub fn order5_nonassociative() -> FiniteLoop {
    FiniteLoop::from_rows(&[
        vec![0, 1, 2, 3, 4],
        vec![1, 0, 3, 4, 2],
        vec![2, 3, 4, 0, 1],
        vec![3, 4, 1, 2, 0],
        vec![4, 2, 0, 1, 3],
    ])
    .expect("bundled table is a loop")
}

/// The Klein four-group.
pub fn klein_four() -> FiniteLoop {
    FiniteLoop::from_rows(&[
        vec![0, 1, 2, 3],
        vec![1, 0, 3, 2],
        vec![2, 3, 0, 1],
        vec![3, 2, 1, 0],
    ])
    .expect("Klein table is a loop")
}

/// The symmetric group on three letters (order 6, nonabelian).
pub fn s3() -> FiniteLoop {
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2],
        [1, 0, 2],
        [0, 2, 1],
        [2, 1, 0],
        [1, 2, 0],
        [2, 0, 1],
    ];
    let index_of = |p: &[usize; 3]| perms.iter().position(|q| q == p).unwrap();
    let rows: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| {
            perms
                .iter()
                .map(|q| {
                    let comp = [p[q[0]], p[q[1]], p[q[2]]];
                    index_of(&comp)
                })
                .collect()
        })
        .collect();
    FiniteLoop::from_rows(&rows).expect("S3 table is a loop")
}

/// Generate loops of order `q` by backtracking over normalized Latin squares
/// (identity row and column fixed), in lexicographic table order, up to
/// `limit` results.
pub fn small_loops(q: usize, limit: usize) -> Vec<FiniteLoop> {
    let mut out = Vec::new();
    if q == 0 || limit == 0 {
        return out;
    }
    if q == 1 {
        out.push(FiniteLoop::from_rows(&[vec![0]]).unwrap());
        return out;
    }
    let mut table = vec![vec![0usize; q]; q];
    for y in 0..q {
        table[0][y] = y;
    }
    for (x, row) in table.iter_mut().enumerate() {
        row[0] = x;
    }
    let mut row_used = vec![vec![false; q]; q];
    let mut col_used = vec![vec![false; q]; q];
    for i in 0..q {
        row_used[0][i] = true;
        col_used[0][i] = true;
        row_used[i][i] = true; // row i has value i at column 0
        col_used[i][i] = true; // column i has value i at row 0
    }
    // Interior cells in row-major order.
    let cells: Vec<(usize, usize)> = (1..q)
        .flat_map(|x| (1..q).map(move |y| (x, y)))
        .collect();
    fn go(
        idx: usize,
        cells: &[(usize, usize)],
        q: usize,
        table: &mut Vec<Vec<usize>>,
        row_used: &mut [Vec<bool>],
        col_used: &mut [Vec<bool>],
        out: &mut Vec<FiniteLoop>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        if idx == cells.len() {
            out.push(FiniteLoop::from_rows(table).expect("backtracking preserves loop axioms"));
            return;
        }
        let (x, y) = cells[idx];
        for v in 0..q {
            if !row_used[x][v] && !col_used[y][v] {
                row_used[x][v] = true;
                col_used[y][v] = true;
                table[x][y] = v;
                go(idx + 1, cells, q, table, row_used, col_used, out, limit);
                row_used[x][v] = false;
                col_used[y][v] = false;
            }
        }
    }
    go(
        0,
        &cells,
        q,
        &mut table,
        &mut row_used,
        &mut col_used,
        &mut out,
        limit,
    );
    out
}

/// The first `count` nonassociative loops of order `q` in lexicographic
/// table order.
pub fn nonassociative_of_order(q: usize, count: usize) -> Vec<FiniteLoop> {
    let mut found = Vec::new();
    // Generous cap: nonassociative examples appear early at q >= 5.
    for l in small_loops(q, 10_000) {
        if !l.is_associative() {
            found.push(l);
            if found.len() == count {
                break;
            }
        }
    }
    found
}

/// The standard test corpus: every loop has order at most 6, and at least
/// five are nonassociative.
pub fn standard_corpus() -> Vec<FiniteLoop> {
    let mut corpus = vec![
        FiniteLoop::cyclic(2),
        FiniteLoop::cyclic(3),
        FiniteLoop::cyclic(4),
        FiniteLoop::cyclic(5),
        FiniteLoop::cyclic(6),
        klein_four(),
        s3(),
        order5_nonassociative(),
    ];
    let named = order5_nonassociative();
    corpus.extend(
        nonassociative_of_order(5, 4)
            .into_iter()
            .filter(|l| *l != named)
            .take(3),
    );
    corpus.extend(nonassociative_of_order(6, 2));
    corpus
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_examples_are_what_they_claim() {
        assert!(!order5_nonassociative().is_associative());
        assert!(s3().is_associative());
        assert!(!s3().is_commutative());
        assert!(klein_four().is_associative());
        assert!(klein_four().is_commutative());
    }

    #[test]
    fn backtracking_counts_order_5() {
        // 56 normalized Latin squares of order 5.  The associative ones are
        // the relabelings of Z/5 fixing the identity, modulo automorphisms:
        // 4!/4 = 6 tables.
        let all = small_loops(5, 10_000);
        assert_eq!(all.len(), 56);
        assert_eq!(all.iter().filter(|l| l.is_associative()).count(), 6);
    }

    #[test]
    fn corpus_shape() {
        let corpus = standard_corpus();
        assert!(corpus.iter().all(|l| l.order() <= 6));
        let nonassoc = corpus.iter().filter(|l| !l.is_associative()).count();
        assert!(nonassoc >= 5, "only {nonassoc} nonassociative examples");
    }
}
