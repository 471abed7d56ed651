//! Linear algebra over the field `Z₃`, used on symplectic exponent vectors.

/// Row-reduces `rows` in place to reduced row echelon form and returns the
/// pivot columns.
pub fn row_reduce(rows: &mut [Vec<u8>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_multiple_of(3)) else {
            continue;
        };
        rows.swap(r, p);
        // 1⁻¹ = 1 and 2⁻¹ = 2 in Z₃
        let inv = rows[r][c] % 3;
        for v in rows[r].iter_mut() {
            *v = (*v * inv) % 3;
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            let f = row[c];
            if i == r || f == 0 {
                continue;
            }
            for (v, p) in row.iter_mut().zip(&pivot) {
                *v = (*v + 3 * 3 - f * p) % 3;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &[Vec<u8>]) -> usize {
    let mut m = rows.to_vec();
    row_reduce(&mut m).len()
}

/// Basis of `{v : M v = 0}` for the matrix with the given rows.
pub fn kernel(rows: &[Vec<u8>], ncols: usize) -> Vec<Vec<u8>> {
    let mut m = rows.to_vec();
    let pivots = row_reduce(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u8; ncols];
            v[f] = 1;
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = (3 - m[i][f] % 3) % 3;
            }
            v
        })
        .collect()
}

/// Whether `v` lies in the row span of `rows`.
pub fn in_span(rows: &[Vec<u8>], v: &[u8]) -> bool {
    let mut with = rows.to_vec();
    with.push(v.to_vec());
    rank(&with) == rank(rows)
}

/// Every linear combination of `basis`, in counting order of the coefficients.
pub fn span(basis: &[Vec<u8>], len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![vec![0u8; len]];
    for b in basis {
        let mut next = Vec::with_capacity(out.len() * 3);
        for v in &out {
            for k in 0..3u8 {
                next.push(v.iter().zip(b).map(|(&x, &y)| (x + k * y) % 3).collect());
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat_vec(rows: &[Vec<u8>], v: &[u8]) -> Vec<u8> {
        rows.iter()
            .map(|r| (r.iter().zip(v).map(|(&a, &b)| a as u32 * b as u32).sum::<u32>() % 3) as u8)
            .collect()
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = vec![vec![1, 2, 0, 1], vec![0, 1, 1, 2], vec![1, 0, 1, 2]];
        let k = kernel(&m, 4);
        assert_eq!(k.len(), 4 - rank(&m));
        for v in &k {
            assert!(mat_vec(&m, v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn rank_counts_dependencies() {
        let m = vec![vec![1, 1, 0], vec![2, 2, 0], vec![0, 0, 1]];
        assert_eq!(rank(&m), 2);
        assert!(in_span(&m, &[1, 1, 2]));
        assert!(!in_span(&m, &[1, 0, 0]));
    }

    #[test]
    fn span_enumerates_all_combinations() {
        let basis = vec![vec![1, 0], vec![0, 1]];
        let mut s = span(&basis, 2);
        s.sort();
        s.dedup();
        assert_eq!(s.len(), 9);
    }
}
