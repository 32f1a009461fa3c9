//! Brute-force oracles, independent of the library's arithmetic. Words
//! are rechecked by exhaustive enumeration of reduced words; lattices by
//! enumerating points in a box and solving two-by-two systems directly.

#![allow(dead_code)]

/// Letters of a rank-2 free group: 1 = a, 2 = b, negatives are inverses.
pub type OWord = Vec<i8>;

pub fn oreduce(w: &[i8]) -> OWord {
    let mut out: OWord = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn oconcat(a: &[i8], b: &[i8]) -> OWord {
    let mut w = a.to_vec();
    w.extend_from_slice(b);
    oreduce(&w)
}

pub fn opow(r: &[i8], k: usize) -> OWord {
    let mut w = OWord::new();
    for _ in 0..k {
        w = oconcat(&w, r);
    }
    w
}

pub fn oword_text(w: &[i8]) -> String {
    w.iter()
        .map(|&l| match l {
            1 => "a".to_string(),
            2 => "b".to_string(),
            -1 => "a'".to_string(),
            -2 => "b'".to_string(),
            _ => unreachable!(),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// All reduced words of length 1..=max, rank 2.
pub fn reduced_words(max: usize) -> Vec<OWord> {
    let letters = [1i8, -1, 2, -2];
    let mut out: Vec<OWord> = Vec::new();
    let mut frontier: Vec<OWord> = letters.iter().map(|&l| vec![l]).collect();
    for _ in 0..max {
        out.extend(frontier.iter().cloned());
        let mut next = Vec::new();
        for w in &frontier {
            let last = *w.last().unwrap();
            for &l in &letters {
                if l != -last {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    out
}

/// Primitive root by exhaustion: the reduced word r with w = r^k for the
/// largest k. Unique up to inversion.
pub fn oracle_root(w: &[i8], candidates: &[OWord]) -> OWord {
    let mut best = w.to_vec();
    let mut best_k = 1usize;
    for r in candidates {
        if r.len() > w.len() {
            continue;
        }
        for k in 2..=w.len() {
            if k * r.len() < w.len() || k <= best_k {
                continue;
            }
            if opow(r, k) == w {
                best = r.clone();
                best_k = k;
            }
        }
    }
    best
}

/// Powers r, r^2, ... while the reduced power still fits in `max_len`.
pub fn opowers_upto(r: &[i8], max_len: usize) -> Vec<OWord> {
    let mut out = Vec::new();
    let mut w = r.to_vec();
    let mut k = 1;
    while w.len() <= max_len && k <= max_len {
        out.push(w.clone());
        k += 1;
        w = oconcat(&w, r);
    }
    out
}

/// Non-degenerate 2x2 integer basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OBasis2 {
    pub r1: (i64, i64),
    pub r2: (i64, i64),
}

impl OBasis2 {
    pub fn det(&self) -> i64 {
        self.r1.0 * self.r2.1 - self.r1.1 * self.r2.0
    }

    /// Membership by Cramer's rule: x r1 + y r2 = p with integer x, y.
    pub fn contains(&self, p: (i64, i64)) -> bool {
        let d = self.det();
        assert!(d != 0, "oracle basis must have rank 2");
        let xn = p.0 * self.r2.1 - p.1 * self.r2.0;
        let yn = self.r1.0 * p.1 - self.r1.1 * p.0;
        xn % d == 0 && yn % d == 0
    }

    pub fn box_points(&self, radius: i64) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for x in -radius..=radius {
            for y in -radius..=radius {
                if self.contains((x, y)) {
                    out.push((x, y));
                }
            }
        }
        out
    }
}

/// Common points of two lattices inside the box.
pub fn ointersection_points(a: &OBasis2, b: &OBasis2, radius: i64) -> Vec<(i64, i64)> {
    a.box_points(radius)
        .into_iter()
        .filter(|&p| b.contains(p))
        .collect()
}

fn ogcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        ogcd(b, a % b)
    }
}

/// Index of the sum lattice a + b in the plane: gcd of the 2x2 minors
/// of the stacked bases.
pub fn osum_index(a: &OBasis2, b: &OBasis2) -> u64 {
    let rows = [a.r1, a.r2, b.r1, b.r2];
    let mut g = 0u64;
    for i in 0..4 {
        for j in i + 1..4 {
            let m = rows[i].0 * rows[j].1 - rows[i].1 * rows[j].0;
            g = ogcd(g, m.unsigned_abs());
        }
    }
    g
}

/// Rank of a set of plane points: 0, 1, or 2.
pub fn opoint_rank(points: &[(i64, i64)]) -> usize {
    let Some(&p) = points.iter().find(|&&(x, y)| (x, y) != (0, 0)) else {
        return 0;
    };
    for &q in points {
        if p.0 * q.1 - p.1 * q.0 != 0 {
            return 2;
        }
    }
    1
}
