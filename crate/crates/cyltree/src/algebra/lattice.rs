//! Sublattices of Z^n represented by row-style Hermite normal form.
//!
//! Invariants of a stored basis: no zero rows, pivots strictly move right
//! going down, pivots positive, entries above a pivot lie in [0, pivot).
//! HNF is unique per lattice, so basis equality is lattice equality.

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Basis {
    pub dim: usize,
    pub rows: Vec<Vec<i64>>,
}

impl Basis {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.rows.is_empty()
    }
}

fn swap_rows(m: &mut [Vec<i64>], i: usize, j: usize) {
    if i != j {
        m.swap(i, j);
    }
}

fn row_axpy(m: &mut [Vec<i64>], dst: usize, src: usize, q: i64) {
    // dst -= q * src
    for c in 0..m[dst].len() {
        m[dst][c] -= q * m[src][c];
    }
}

/// Reduce to row HNF in place; returns the rank. Rows past the rank are
/// zero. When `transform` is given it receives the same row operations,
/// so transform * input = output stays true throughout.
fn hnf_in_place(m: &mut Vec<Vec<i64>>, mut transform: Option<&mut Vec<Vec<i64>>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Euclidean elimination below row r in column c.
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows {
                if m[i][c] != 0 && best.map_or(true, |b| m[i][c].abs() < m[b][c].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            swap_rows(m, r, b);
            if let Some(t) = transform.as_deref_mut() {
                swap_rows(t, r, b);
            }
            let mut done = true;
            for i in r + 1..rows {
                if m[i][c] != 0 {
                    let q = m[i][c] / m[r][c];
                    row_axpy(m, i, r, q);
                    if let Some(t) = transform.as_deref_mut() {
                        row_axpy(t, i, r, q);
                    }
                    if m[i][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if m[r][c] != 0 {
            if m[r][c] < 0 {
                for x in m[r].iter_mut() {
                    *x = -*x;
                }
                if let Some(t) = transform.as_deref_mut() {
                    for x in t[r].iter_mut() {
                        *x = -*x;
                    }
                }
            }
            for i in 0..r {
                let q = m[i][c].div_euclid(m[r][c]);
                if q != 0 {
                    row_axpy(m, i, r, q);
                    if let Some(t) = transform.as_deref_mut() {
                        row_axpy(t, i, r, q);
                    }
                }
            }
            r += 1;
        }
    }
    r
}

pub fn hnf(dim: usize, rows: &[Vec<i64>]) -> Basis {
    let mut m: Vec<Vec<i64>> = rows.to_vec();
    for row in &m {
        assert_eq!(row.len(), dim, "row length must match ambient dimension");
    }
    let rank = hnf_in_place(&mut m, None);
    m.truncate(rank);
    Basis { dim, rows: m }
}

/// Basis of { u : u * M = 0 } for the matrix with the given rows.
pub fn left_kernel(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = rows.len();
    if n == 0 {
        return Vec::new();
    }
    let mut m: Vec<Vec<i64>> = rows.to_vec();
    let mut t: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    let rank = hnf_in_place(&mut m, Some(&mut t));
    t.split_off(rank)
}

/// Does v lie in the lattice? Greedy pivot reduction is exact on HNF.
pub fn contains(b: &Basis, v: &[i64]) -> bool {
    let mut v = v.to_vec();
    for row in &b.rows {
        let p = row.iter().position(|&x| x != 0).expect("no zero rows");
        if v[p] % row[p] != 0 {
            return false;
        }
        let q = v[p] / row[p];
        if q != 0 {
            for c in 0..v.len() {
                v[c] -= q * row[c];
            }
        }
    }
    v.iter().all(|&x| x == 0)
}

pub fn includes(a: &Basis, b: &Basis) -> bool {
    b.rows.iter().all(|r| contains(a, r))
}

/// Smallest lattice containing both (integer row span of the union).
pub fn join(a: &Basis, b: &Basis) -> Basis {
    let mut rows = a.rows.clone();
    rows.extend(b.rows.iter().cloned());
    hnf(a.dim, &rows)
}

/// Intersection via the left kernel of the stacked bases: a kernel row
/// (u | v) with u*A = v*B yields the intersection element u*A.
pub fn intersect(a: &Basis, b: &Basis) -> Basis {
    if a.is_trivial() || b.is_trivial() {
        return Basis { dim: a.dim, rows: Vec::new() };
    }
    let k = a.rank();
    let mut stacked = a.rows.clone();
    for row in &b.rows {
        stacked.push(row.iter().map(|&x| -x).collect());
    }
    let kernel = left_kernel(&stacked);
    let mut rows = Vec::new();
    for u in kernel {
        let mut x = vec![0i64; a.dim];
        for (i, coeff) in u[..k].iter().enumerate() {
            for c in 0..a.dim {
                x[c] += coeff * a.rows[i][c];
            }
        }
        rows.push(x);
    }
    hnf(a.dim, &rows)
}

/// Rational-span rank of the union of two bases.
pub fn joint_rank(a: &Basis, b: &Basis) -> usize {
    join(a, b).rank()
}

/// The saturation: all integer points of the rational span. Computed as
/// a double orthogonal complement, which avoids rational arithmetic.
pub fn saturation(b: &Basis) -> Basis {
    if b.is_trivial() {
        return b.clone();
    }
    // columns of b^T are the rows of b; first kernel gives the
    // orthogonal complement, second one comes back saturated
    let transpose =
        |rows: &[Vec<i64>], dim: usize| -> Vec<Vec<i64>> {
            (0..dim)
                .map(|c| rows.iter().map(|r| r[c]).collect())
                .collect()
        };
    let ortho = left_kernel(&transpose(&b.rows, b.dim));
    if ortho.is_empty() {
        // full rank: saturation is all of Z^dim
        let rows = (0..b.dim)
            .map(|i| (0..b.dim).map(|j| i64::from(i == j)).collect())
            .collect();
        return Basis { dim: b.dim, rows };
    }
    let sat = left_kernel(&transpose(&ortho, b.dim));
    hnf(b.dim, &sat)
}

pub fn parse_rows(value: &serde_json::Value, dim: usize) -> Result<Vec<Vec<i64>>, String> {
    let arr = value.as_array().ok_or("lattice datum must be an array of rows")?;
    let mut rows = Vec::new();
    for row in arr {
        let row = row.as_array().ok_or("lattice row must be an array")?;
        if row.len() != dim {
            return Err(format!("lattice row has length {}, expected {dim}", row.len()));
        }
        let mut out = Vec::with_capacity(dim);
        for x in row {
            out.push(x.as_i64().ok_or("lattice entries must be integers")?);
        }
        rows.push(out);
    }
    Ok(rows)
}

pub fn display(b: &Basis) -> String {
    let rows: Vec<String> = b
        .rows
        .iter()
        .map(|r| {
            let xs: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            format!("[{}]", xs.join(","))
        })
        .collect();
    format!("[{}]", rows.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_of_swapped_diagonal() {
        let b = hnf(2, &[vec![0, 2], vec![2, 0]]);
        assert_eq!(b.rows, vec![vec![2, 0], vec![0, 2]]);
    }

    #[test]
    fn hnf_fixed_point() {
        let b = hnf(2, &[vec![2, 2], vec![0, 4]]);
        assert_eq!(b.rows, vec![vec![2, 2], vec![0, 4]]);
    }

    #[test]
    fn intersection_of_scaled_grids() {
        let a = hnf(2, &[vec![2, 0], vec![0, 2]]);
        let b = hnf(2, &[vec![3, 0], vec![0, 1]]);
        let i = intersect(&a, &b);
        assert_eq!(i.rows, vec![vec![6, 0], vec![0, 2]]);
    }

    #[test]
    fn saturation_recovers_primitive_direction() {
        let b = hnf(2, &[vec![4, 6]]);
        assert_eq!(saturation(&b).rows, vec![vec![2, 3]]);
    }

    #[test]
    fn saturation_is_not_just_primitive_rows() {
        // span of (1,1,1) and (1,-1,0) contains (1,1,1) but the primitive
        // scaled echelon rows alone would miss it
        let b = hnf(3, &[vec![1, 1, 1], vec![1, -1, 0]]);
        let s = saturation(&b);
        assert!(contains(&s, &[1, 1, 1]));
        assert!(contains(&s, &[1, -1, 0]));
        assert_eq!(s.rank(), 2);
    }
}
