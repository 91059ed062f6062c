//! Smith normal form of integer relation matrices with column transforms.

/// Result of reducing a relation matrix R (rows = relations, r columns).
///
/// `diag[j]` are the diagonal entries after reduction (d_1 | d_2 | ...), and
/// `v`, `v_inv` are unimodular r×r matrices with rowspace(R·v) = rowspace(diag).
#[derive(Clone, Debug)]
pub struct Smith {
    pub diag: Vec<i128>,
    pub v: Vec<Vec<i128>>,
    pub v_inv: Vec<Vec<i128>>,
}

fn identity(r: usize) -> Vec<Vec<i128>> {
    (0..r)
        .map(|i| (0..r).map(|j| i128::from(i == j)).collect())
        .collect()
}

/// Smith normal form via alternating row/column Euclidean elimination.
pub fn smith(mut a: Vec<Vec<i128>>, r: usize) -> Smith {
    let mut v = identity(r);
    let mut v_inv = identity(r);
    a.retain(|row| row.iter().any(|&x| x != 0));
    let k = a.len();

    // column operation: col j -= q * col t
    fn col_sub(a: &mut [Vec<i128>], v: &mut [Vec<i128>], v_inv: &mut [Vec<i128>], t: usize, j: usize, q: i128) {
        if q == 0 {
            return;
        }
        for row in a.iter_mut() {
            row[j] -= q * row[t];
        }
        for row in v.iter_mut() {
            row[j] -= q * row[t];
        }
        let rj = v_inv[j].clone();
        for (x, y) in v_inv[t].iter_mut().zip(rj) {
            *x += q * y;
        }
    }
    fn col_swap(a: &mut [Vec<i128>], v: &mut [Vec<i128>], v_inv: &mut [Vec<i128>], i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
        v_inv.swap(i, j);
    }
    fn col_neg(a: &mut [Vec<i128>], v: &mut [Vec<i128>], v_inv: &mut [Vec<i128>], t: usize) {
        for row in a.iter_mut() {
            row[t] = -row[t];
        }
        for row in v.iter_mut() {
            row[t] = -row[t];
        }
        for x in v_inv[t].iter_mut() {
            *x = -*x;
        }
    }

    let mut diag = vec![0i128; r];
    for t in 0..r {
        loop {
            // smallest nonzero entry in the lower-right block
            let mut best: Option<(usize, usize, i128)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, &x) in row.iter().enumerate().skip(t) {
                    if x != 0 && best.is_none_or(|(_, _, b)| x.abs() < b) {
                        best = Some((i, j, x.abs()));
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                break;
            };
            a.swap(t, pi);
            col_swap(&mut a, &mut v, &mut v_inv, t, pj);
            if a[t][t] < 0 {
                col_neg(&mut a, &mut v, &mut v_inv, t);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..k {
                let q = a[i][t].div_euclid(p);
                if q != 0 {
                    let rt = a[t].clone();
                    for (x, y) in a[i].iter_mut().zip(rt) {
                        *x -= q * y;
                    }
                }
                if a[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..r {
                let q = a[t][j].div_euclid(p);
                col_sub(&mut a, &mut v, &mut v_inv, t, j, q);
                if a[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility: fold any offending row into row t and redo
            let bad = (t + 1..k).find(|&i| a[i].iter().skip(t + 1).any(|&x| x % p != 0));
            if let Some(i) = bad {
                let ri = a[i].clone();
                for (x, y) in a[t].iter_mut().zip(ri) {
                    *x += y;
                }
                continue;
            }
            break;
        }
        if t < k {
            diag[t] = a[t][t].abs();
        }
    }
    Smith { diag, v, v_inv }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matmul(a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
        let n = b[0].len();
        a.iter()
            .map(|row| (0..n).map(|j| row.iter().zip(b).map(|(x, brow)| x * brow[j]).sum()).collect())
            .collect()
    }

    #[test]
    fn small_matrix() {
        let r = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let s = smith(r.clone(), 3);
        assert_eq!(s.diag, vec![2, 6, 12]);
        let prod = matmul(&s.v, &s.v_inv);
        assert_eq!(prod, identity(3));
    }

    #[test]
    fn cyclic_decomposition() {
        // Z² / <(2,0),(0,3)> ≅ Z/6
        let s = smith(vec![vec![2, 0], vec![0, 3]], 2);
        assert_eq!(s.diag, vec![1, 6]);
        assert_eq!(matmul(&s.v, &s.v_inv), identity(2));
    }
}
