//! Reduced words over a finite symmetric alphabet and the cyclic
//! subgroups they generate.
//!
//! A word is a sequence of nonzero `i16` letters: `1, 2, ...` are the
//! positive generators `a, b, ...` and `-1, -2, ...` their inverses.
//! Every function here keeps words freely reduced.

use std::fmt::Write as _;

pub type Letter = i16;

/// Free reduction: cancel adjacent inverse pairs until none remain.
pub fn reduce(word: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(word.len());
    for &x in word {
        debug_assert!(x != 0);
        if let Some(&top) = out.last() {
            if top == -x {
                out.pop();
                continue;
            }
        }
        out.push(x);
    }
    out
}

pub fn invert(word: &[Letter]) -> Vec<Letter> {
    word.iter().rev().map(|&x| -x).collect()
}

pub fn concat(a: &[Letter], b: &[Letter]) -> Vec<Letter> {
    let mut v = Vec::with_capacity(a.len() + b.len());
    v.extend_from_slice(a);
    v.extend_from_slice(b);
    reduce(&v)
}

/// w^k for k >= 0, freely reduced.
pub fn power(word: &[Letter], k: u32) -> Vec<Letter> {
    let mut acc: Vec<Letter> = Vec::new();
    for _ in 0..k {
        acc = concat(&acc, word);
    }
    acc
}

/// Total order used for canonicalization: shorter first, then letters
/// compared as a < a' < b < b' < ...
fn letter_key(x: Letter) -> (u16, u8) {
    (x.unsigned_abs(), u8::from(x < 0))
}

pub fn word_cmp(a: &[Letter], b: &[Letter]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        a.iter()
            .map(|&x| letter_key(x))
            .cmp(b.iter().map(|&x| letter_key(x)))
    })
}

/// The smaller of w and w^-1. The subgroup <w> is unchanged by
/// inversion, so this is the canonical payload for a cyclic subgroup.
pub fn lexmin_inv(word: &[Letter]) -> Vec<Letter> {
    let inv = invert(word);
    if word_cmp(&inv, word) == std::cmp::Ordering::Less {
        inv
    } else {
        word.to_vec()
    }
}

/// Split a reduced word as c p c^-1 with p cyclically reduced.
pub fn cyclic_split(word: &[Letter]) -> (Vec<Letter>, Vec<Letter>) {
    let mut lo = 0;
    let mut hi = word.len();
    while hi - lo >= 2 && word[lo] == -word[hi - 1] {
        lo += 1;
        hi -= 1;
    }
    (word[..lo].to_vec(), word[lo..hi].to_vec())
}

/// The unique pair (r, k) with w = r^k, k >= 1 and r not a proper power.
/// The trivial word returns (trivial, 0).
///
/// For a cyclically reduced core the root is the shortest prefix period;
/// conjugating prefixes pass through unchanged.
pub fn primitive_root(word: &[Letter]) -> (Vec<Letter>, u32) {
    if word.is_empty() {
        return (Vec::new(), 0);
    }
    let (c, p) = cyclic_split(word);
    let n = p.len();
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        if p.chunks(d).all(|ch| ch == &p[..d]) {
            let root = concat(&concat(&c, &p[..d]), &invert(&c));
            return (root, (n / d) as u32);
        }
    }
    unreachable!("d = n always divides");
}

/// Canonical identifier of the commensurability class of <w>:
/// the primitive root, taken up to inversion.
pub fn root_class(word: &[Letter]) -> Vec<Letter> {
    let (r, _) = primitive_root(word);
    lexmin_inv(&r)
}

/// Is b a power of a (including a^0 and negative powers)? Equivalent to
/// <b> being a subgroup of <a>.
pub fn is_power_of(a: &[Letter], b: &[Letter]) -> bool {
    if b.is_empty() {
        return true;
    }
    if a.is_empty() {
        return false;
    }
    let (ca, pa) = cyclic_split(a);
    for cand in [b.to_vec(), invert(b)] {
        let (cb, pb) = cyclic_split(&cand);
        if ca == cb && pb.len() % pa.len() == 0 {
            let k = (pb.len() / pa.len()) as u32;
            if k >= 1 && power(a, k) == cand {
                return true;
            }
        }
    }
    false
}

pub fn parse(text: &str, rank: u8) -> Result<Vec<Letter>, String> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(ch) = chars.next() {
        if ch.is_whitespace() {
            continue;
        }
        if ch == '1' && out.is_empty() && chars.peek().is_none() {
            // "1" denotes the trivial word
            return Ok(Vec::new());
        }
        if !ch.is_ascii_lowercase() {
            return Err(format!("unexpected character {ch:?} in word"));
        }
        let idx = (ch as u8 - b'a') + 1;
        if idx > rank {
            return Err(format!(
                "letter {ch:?} outside alphabet of rank {rank}"
            ));
        }
        let mut letter = idx as Letter;
        if chars.peek() == Some(&'\'') {
            chars.next();
            letter = -letter;
        }
        out.push(letter);
    }
    Ok(reduce(&out))
}

pub fn display(word: &[Letter]) -> String {
    if word.is_empty() {
        return "1".to_string();
    }
    let mut s = String::new();
    for (i, &x) in word.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let ch = (b'a' + (x.unsigned_abs() as u8 - 1)) as char;
        s.push(ch);
        if x < 0 {
            let _ = write!(s, "'");
        }
    }
    s
}
