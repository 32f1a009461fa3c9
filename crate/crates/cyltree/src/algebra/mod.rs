//! Stabilizer algebras: the label arithmetic underneath every tree
//! operation in this crate.
//!
//! A window never stores groups, only *handles*: canonical tokens that
//! stand for a subgroup of some ambient group. Three backends interpret
//! them:
//!
//! * `W` - cyclic subgroups of a free group, written as reduced words.
//!   Two handles are equivalent when their primitive roots agree up to
//!   inversion (commensurability of cyclic subgroups).
//! * `L` - sublattices of Z^n in Hermite normal form. The family is the
//!   set of rank-r sublattices; equivalence is equality of rational
//!   spans (commensurability of lattices).
//! * `P` - a finite declared table. Nothing is computed; the table is
//!   replayed verbatim, and `intersect` is unsupported unless declared.
//!
//! Handles are canonicalized at construction, so `==` on handles is
//! semantic equality of the subgroups they denote. Operations that a
//! backend cannot answer return [`AlgebraError::Unsupported`] rather
//! than guessing.

pub mod lattice;
pub mod partition;
pub mod word;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use lattice::Basis;
use partition::{Table, TableSpec};
use word::Letter;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BackendId {
    W,
    L,
    P,
}

impl fmt::Display for BackendId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BackendId::W => write!(f, "W"),
            BackendId::L => write!(f, "L"),
            BackendId::P => write!(f, "P"),
        }
    }
}

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("ParseError: {0}")]
    ParseError(String),
    #[error("NotInFamily: {0}")]
    NotInFamily(String),
    #[error("UnknownGenerator: {0}")]
    UnknownGenerator(String),
    #[error("UnsupportedConjugator: {0}")]
    UnsupportedConjugator(String),
    #[error("Unsupported: {0}")]
    Unsupported(String),
    #[error("BackendMismatch: handle from {found} used with {expected} algebra")]
    BackendMismatch { expected: BackendId, found: BackendId },
    #[error("InvalidConfig: {0}")]
    InvalidConfig(String),
}

/// Canonical payload of a handle. Construction goes through
/// [`Algebra::normalize`], which establishes the canonical form; after
/// that, equality and ordering of payloads are meaningful.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Payload {
    Word(Vec<Letter>),
    Lattice(Basis),
    Label(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StabilizerHandle {
    pub backend: BackendId,
    pub payload: Payload,
}

impl StabilizerHandle {
    /// Stable text form, used in reports, DOT labels and canonical forms.
    pub fn text(&self) -> String {
        match &self.payload {
            Payload::Word(w) => word::display(w),
            Payload::Lattice(b) => lattice::display(b),
            Payload::Label(l) => l.clone(),
        }
    }
}

impl Serialize for StabilizerHandle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.text())
    }
}

/// Raw, not-yet-canonical stabilizer data as found in instance files.
#[derive(Debug, Clone)]
pub enum RawDatum {
    Text(String),
    Rows(Vec<Vec<i64>>),
}

impl RawDatum {
    pub fn from_json(v: &serde_json::Value) -> Result<RawDatum, AlgebraError> {
        match v {
            serde_json::Value::String(s) => Ok(RawDatum::Text(s.clone())),
            serde_json::Value::Array(_) => {
                let rows = v
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|row| {
                        row.as_array()
                            .ok_or_else(|| {
                                AlgebraError::ParseError("lattice row must be an array".into())
                            })?
                            .iter()
                            .map(|x| {
                                x.as_i64().ok_or_else(|| {
                                    AlgebraError::ParseError(
                                        "lattice entries must be integers".into(),
                                    )
                                })
                            })
                            .collect::<Result<Vec<i64>, _>>()
                    })
                    .collect::<Result<Vec<Vec<i64>>, _>>()?;
                Ok(RawDatum::Rows(rows))
            }
            _ => Err(AlgebraError::ParseError(
                "stabilizer datum must be a string or an array of rows".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "backend")]
pub enum AlgebraConfig {
    W {
        rank: u8,
    },
    L {
        dim: usize,
        /// Rank of the lattices that belong to the family. Defaults to
        /// the ambient dimension.
        #[serde(default)]
        family_rank: Option<usize>,
    },
    P(TableSpec),
}

/// One configured backend. All handle operations go through here so the
/// backend discipline (canonical forms, capability checks) sits in one
/// place.
#[derive(Debug, Clone)]
pub struct Algebra {
    config: AlgebraConfig,
    table: Option<Table>,
}

impl Algebra {
    pub fn new(config: AlgebraConfig) -> Result<Algebra, AlgebraError> {
        let table = match &config {
            AlgebraConfig::W { rank } => {
                if *rank == 0 || *rank > 26 {
                    return Err(AlgebraError::InvalidConfig(
                        "word alphabet rank must be in 1..=26".into(),
                    ));
                }
                None
            }
            AlgebraConfig::L { dim, family_rank } => {
                if *dim == 0 {
                    return Err(AlgebraError::InvalidConfig("dimension must be positive".into()));
                }
                if let Some(r) = family_rank {
                    if *r == 0 || *r > *dim {
                        return Err(AlgebraError::InvalidConfig(
                            "family rank must be in 1..=dim".into(),
                        ));
                    }
                }
                None
            }
            AlgebraConfig::P(spec) => Some(Table::from_spec(spec).map_err(AlgebraError::InvalidConfig)?),
        };
        Ok(Algebra { config, table })
    }

    pub fn backend(&self) -> BackendId {
        match self.config {
            AlgebraConfig::W { .. } => BackendId::W,
            AlgebraConfig::L { .. } => BackendId::L,
            AlgebraConfig::P(_) => BackendId::P,
        }
    }

    pub fn config(&self) -> &AlgebraConfig {
        &self.config
    }

    fn table(&self) -> &Table {
        self.table.as_ref().expect("P backend carries a table")
    }

    fn family_rank(&self) -> usize {
        match self.config {
            AlgebraConfig::L { dim, family_rank } => family_rank.unwrap_or(dim),
            _ => unreachable!("family_rank is an L notion"),
        }
    }

    fn guard(&self, h: &StabilizerHandle) -> Result<(), AlgebraError> {
        if h.backend != self.backend() {
            return Err(AlgebraError::BackendMismatch {
                expected: self.backend(),
                found: h.backend,
            });
        }
        Ok(())
    }

    /// Parse and canonicalize raw data into a handle.
    pub fn normalize(&self, raw: &RawDatum) -> Result<StabilizerHandle, AlgebraError> {
        let payload = match (&self.config, raw) {
            (AlgebraConfig::W { rank }, RawDatum::Text(s)) => {
                let reduced = word::parse(s, *rank).map_err(AlgebraError::ParseError)?;
                Payload::Word(word::lexmin_inv(&reduced))
            }
            (AlgebraConfig::L { dim, .. }, RawDatum::Rows(rows)) => {
                for row in rows {
                    if row.len() != *dim {
                        return Err(AlgebraError::ParseError(format!(
                            "lattice row has length {}, expected {dim}",
                            row.len()
                        )));
                    }
                }
                Payload::Lattice(lattice::hnf(*dim, rows))
            }
            (AlgebraConfig::P(_), RawDatum::Text(s)) => {
                if !self.table().has_label(s) {
                    return Err(AlgebraError::ParseError(format!("unknown label {s:?}")));
                }
                Payload::Label(s.clone())
            }
            _ => {
                return Err(AlgebraError::ParseError(format!(
                    "datum shape does not fit backend {}",
                    self.backend()
                )))
            }
        };
        Ok(StabilizerHandle { backend: self.backend(), payload })
    }

    pub fn in_family(&self, h: &StabilizerHandle) -> Result<bool, AlgebraError> {
        self.guard(h)?;
        Ok(match (&self.config, &h.payload) {
            (AlgebraConfig::W { .. }, Payload::Word(w)) => !w.is_empty(),
            (AlgebraConfig::L { .. }, Payload::Lattice(b)) => b.rank() == self.family_rank(),
            (AlgebraConfig::P(_), Payload::Label(l)) => self.table().in_family(l),
            _ => unreachable!("guard checked the backend"),
        })
    }

    pub fn is_finite(&self, h: &StabilizerHandle) -> Result<bool, AlgebraError> {
        self.guard(h)?;
        Ok(match (&self.config, &h.payload) {
            (AlgebraConfig::W { .. }, Payload::Word(w)) => w.is_empty(),
            (AlgebraConfig::L { .. }, Payload::Lattice(b)) => b.is_trivial(),
            (AlgebraConfig::P(_), Payload::Label(l)) => self.table().is_finite(l),
            _ => unreachable!(),
        })
    }

    /// Commensurability-style equivalence. Both handles must be in the
    /// family; the relation is not defined outside it.
    pub fn equivalent(
        &self,
        a: &StabilizerHandle,
        b: &StabilizerHandle,
    ) -> Result<bool, AlgebraError> {
        self.guard(a)?;
        self.guard(b)?;
        for h in [a, b] {
            if !self.in_family(h)? {
                return Err(AlgebraError::NotInFamily(h.text()));
            }
        }
        Ok(match (&a.payload, &b.payload) {
            (Payload::Word(wa), Payload::Word(wb)) => {
                word::root_class(wa) == word::root_class(wb)
            }
            (Payload::Lattice(la), Payload::Lattice(lb)) => {
                let r = la.rank();
                lb.rank() == r && lattice::joint_rank(la, lb) == r
            }
            (Payload::Label(la), Payload::Label(lb)) => {
                self.table().class_id(la) == self.table().class_id(lb)
            }
            _ => unreachable!(),
        })
    }

    /// Does the group behind `a` contain the group behind `b`? Total on
    /// handles of the right backend.
    pub fn includes(
        &self,
        a: &StabilizerHandle,
        b: &StabilizerHandle,
    ) -> Result<bool, AlgebraError> {
        self.guard(a)?;
        self.guard(b)?;
        Ok(match (&a.payload, &b.payload) {
            (Payload::Word(wa), Payload::Word(wb)) => word::is_power_of(wa, wb),
            (Payload::Lattice(la), Payload::Lattice(lb)) => lattice::includes(la, lb),
            (Payload::Label(la), Payload::Label(lb)) => self.table().includes(la, lb),
            _ => unreachable!(),
        })
    }

    /// Canonical handle of g^-1 a g. The conjugator datum is a word for
    /// W, the only admissible value "id" for L, and a declared generator
    /// name for P.
    pub fn conjugate(
        &self,
        g: &str,
        a: &StabilizerHandle,
    ) -> Result<StabilizerHandle, AlgebraError> {
        self.guard(a)?;
        let payload = match (&self.config, &a.payload) {
            (AlgebraConfig::W { rank }, Payload::Word(w)) => {
                let gw = word::parse(g, *rank).map_err(AlgebraError::ParseError)?;
                let conj = word::concat(&word::concat(&word::invert(&gw), w), &gw);
                Payload::Word(word::lexmin_inv(&conj))
            }
            (AlgebraConfig::L { .. }, Payload::Lattice(b)) => {
                if !(g.is_empty() || g == "id") {
                    return Err(AlgebraError::UnsupportedConjugator(format!(
                        "lattice conjugation is trivial; got {g:?}"
                    )));
                }
                Payload::Lattice(b.clone())
            }
            (AlgebraConfig::P(_), Payload::Label(l)) => {
                let map = self
                    .table()
                    .generator(g)
                    .ok_or_else(|| AlgebraError::UnknownGenerator(g.to_string()))?;
                Payload::Label(map[l].clone())
            }
            _ => unreachable!(),
        };
        Ok(StabilizerHandle { backend: self.backend(), payload })
    }

    pub fn supports_intersect(&self) -> bool {
        !matches!(self.config, AlgebraConfig::P(_))
    }

    /// Exact intersection of the two groups. P answers only from its
    /// declared intersection table.
    pub fn intersect(
        &self,
        a: &StabilizerHandle,
        b: &StabilizerHandle,
    ) -> Result<StabilizerHandle, AlgebraError> {
        self.guard(a)?;
        self.guard(b)?;
        let payload = match (&a.payload, &b.payload) {
            (Payload::Word(wa), Payload::Word(wb)) => {
                Payload::Word(cyclic_intersection(wa, wb))
            }
            (Payload::Lattice(la), Payload::Lattice(lb)) => {
                Payload::Lattice(lattice::intersect(la, lb))
            }
            (Payload::Label(la), Payload::Label(lb)) => {
                match self.table().intersection(la, lb) {
                    Some(c) => Payload::Label(c.to_string()),
                    None => {
                        return Err(AlgebraError::Unsupported(format!(
                            "intersection of {la:?} and {lb:?} is not declared"
                        )))
                    }
                }
            }
            _ => unreachable!(),
        };
        Ok(StabilizerHandle { backend: self.backend(), payload })
    }

    pub fn supports_join(&self) -> bool {
        matches!(self.config, AlgebraConfig::L { .. } | AlgebraConfig::W { .. })
    }

    /// Smallest representable group containing both, when the backend
    /// has one: lattice sum for L, common-root gcd for W (None when the
    /// roots differ), nothing for P.
    pub fn join(
        &self,
        a: &StabilizerHandle,
        b: &StabilizerHandle,
    ) -> Result<Option<StabilizerHandle>, AlgebraError> {
        self.guard(a)?;
        self.guard(b)?;
        let payload = match (&a.payload, &b.payload) {
            (Payload::Word(wa), Payload::Word(wb)) => {
                if wa.is_empty() {
                    Some(Payload::Word(wb.clone()))
                } else if wb.is_empty() {
                    Some(Payload::Word(wa.clone()))
                } else {
                    let (ra, ka) = word::primitive_root(wa);
                    let (rb, kb) = word::primitive_root(wb);
                    if word::lexmin_inv(&ra) == word::lexmin_inv(&rb) {
                        let g = gcd(u64::from(ka), u64::from(kb)) as u32;
                        Some(Payload::Word(word::lexmin_inv(&word::power(
                            &word::lexmin_inv(&ra),
                            g,
                        ))))
                    } else {
                        None
                    }
                }
            }
            (Payload::Lattice(la), Payload::Lattice(lb)) => {
                Some(Payload::Lattice(lattice::join(la, lb)))
            }
            (Payload::Label(_), Payload::Label(_)) => None,
            _ => unreachable!(),
        };
        Ok(payload.map(|payload| StabilizerHandle { backend: self.backend(), payload }))
    }

    /// Canonical representative of the equivalence class of `h`:
    /// the root class for W, the saturation for L, the least label of
    /// the declared class for P. Two family handles are equivalent
    /// exactly when their representatives are equal.
    pub fn class_representative(
        &self,
        h: &StabilizerHandle,
    ) -> Result<StabilizerHandle, AlgebraError> {
        self.guard(h)?;
        if !self.in_family(h)? {
            return Err(AlgebraError::NotInFamily(h.text()));
        }
        let payload = match &h.payload {
            Payload::Word(w) => Payload::Word(word::root_class(w)),
            Payload::Lattice(b) => Payload::Lattice(lattice::saturation(b)),
            Payload::Label(l) => Payload::Label(self.table().class_rep(l).to_string()),
        };
        Ok(StabilizerHandle { backend: self.backend(), payload })
    }

    /// Trivial-group test where the backend has a notion of it.
    pub fn is_trivial(&self, h: &StabilizerHandle) -> Result<bool, AlgebraError> {
        self.guard(h)?;
        match &h.payload {
            Payload::Word(w) => Ok(w.is_empty()),
            Payload::Lattice(b) => Ok(b.is_trivial()),
            Payload::Label(_) => Err(AlgebraError::Unsupported(
                "triviality is not declared for table labels".into(),
            )),
        }
    }

    /// Inclusion conflicts between the declared order and the partition
    /// (P only; empty elsewhere).
    pub fn declared_order_conflicts(&self) -> Vec<(String, String)> {
        match &self.table {
            Some(t) => t.partition_conflicts(),
            None => Vec::new(),
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// <u^p> meets <v^q> in <root^lcm(p,q)> when the roots agree (up to
/// inversion), and trivially otherwise.
fn cyclic_intersection(a: &[Letter], b: &[Letter]) -> Vec<Letter> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let (ra, ka) = word::primitive_root(a);
    let (rb, kb) = word::primitive_root(b);
    let root = word::lexmin_inv(&ra);
    if root != word::lexmin_inv(&rb) {
        return Vec::new();
    }
    let l = u64::from(ka) / gcd(u64::from(ka), u64::from(kb)) * u64::from(kb);
    word::lexmin_inv(&word::power(&root, l as u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn walg() -> Algebra {
        Algebra::new(AlgebraConfig::W { rank: 2 }).unwrap()
    }

    fn lalg(dim: usize, r: Option<usize>) -> Algebra {
        Algebra::new(AlgebraConfig::L { dim, family_rank: r }).unwrap()
    }

    fn wh(a: &Algebra, s: &str) -> StabilizerHandle {
        a.normalize(&RawDatum::Text(s.into())).unwrap()
    }

    fn lh(a: &Algebra, rows: &[&[i64]]) -> StabilizerHandle {
        a.normalize(&RawDatum::Rows(rows.iter().map(|r| r.to_vec()).collect()))
            .unwrap()
    }

    #[test]
    fn word_normalization_reduces() {
        let a = walg();
        assert_eq!(wh(&a, "a b b' a").text(), "a a");
    }

    #[test]
    fn commensurable_powers() {
        let a = walg();
        let p = wh(&a, "a b a b");
        let q = wh(&a, "b' a' b' a' b' a'");
        assert!(a.equivalent(&p, &q).unwrap());
        let ab = wh(&a, "a b");
        let ba = wh(&a, "b a");
        assert!(!a.equivalent(&ab, &ba).unwrap());
    }

    #[test]
    fn cyclic_inclusion_and_intersection() {
        let a = walg();
        let u2 = wh(&a, "a b a b");
        let u6 = wh(&a, "a b a b a b a b a b a b");
        let u3 = wh(&a, "a b a b a b");
        assert!(a.includes(&u2, &u6).unwrap());
        assert!(!a.includes(&u6, &u2).unwrap());
        assert_eq!(a.intersect(&u2, &u3).unwrap(), u6);
        let b = wh(&a, "b");
        let trivial = a.intersect(&wh(&a, "a"), &b).unwrap();
        assert!(a.is_trivial(&trivial).unwrap());
    }

    #[test]
    fn word_conjugation() {
        let a = walg();
        let h = a.conjugate("b", &wh(&a, "a")).unwrap();
        assert_eq!(h.text(), "b' a b");
    }

    #[test]
    fn lattice_equivalence_and_intersection() {
        let a = lalg(2, None);
        let x = lh(&a, &[&[2, 0], &[0, 2]]);
        let y = lh(&a, &[&[3, 0], &[0, 1]]);
        assert!(a.equivalent(&x, &y).unwrap());
        assert_eq!(
            a.intersect(&x, &y).unwrap(),
            lh(&a, &[&[6, 0], &[0, 2]])
        );
        let doubled = lh(&a, &[&[4, 0], &[0, 4]]);
        assert!(a.includes(&x, &doubled).unwrap());
        assert!(!a.includes(&x, &lh(&a, &[&[1, 0], &[0, 1]])).unwrap());
    }

    #[test]
    fn lattice_family_rank_gates_membership() {
        let a = lalg(2, Some(1));
        let line = lh(&a, &[&[2, 4]]);
        let grid = lh(&a, &[&[1, 0], &[0, 1]]);
        assert!(a.in_family(&line).unwrap());
        assert!(!a.in_family(&grid).unwrap());
        assert!(a.equivalent(&line, &lh(&a, &[&[1, 2]])).unwrap());
        assert!(!a.equivalent(&line, &lh(&a, &[&[1, 0]])).unwrap());
    }

    #[test]
    fn class_representative_matches_equivalence() {
        let a = walg();
        let u = wh(&a, "a b a b");
        let v = wh(&a, "b' a' b' a' b' a'");
        assert_eq!(
            a.class_representative(&u).unwrap(),
            a.class_representative(&v).unwrap()
        );
        let l = lalg(2, Some(1));
        let p = lh(&l, &[&[2, 4]]);
        let q = lh(&l, &[&[3, 6]]);
        assert_eq!(
            l.class_representative(&p).unwrap(),
            l.class_representative(&q).unwrap()
        );
        assert_eq!(
            l.class_representative(&p).unwrap(),
            lh(&l, &[&[1, 2]])
        );
    }
}
