//! Finite declared tables: a label set with a partition into classes, an
//! inclusion order, per-generator label permutations, and optional
//! finiteness, family and intersection declarations.
//!
//! This backend computes nothing; it replays what the table says. The
//! reflexive-transitive closure of the declared inclusions is taken at
//! load so lookups are single probes.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableSpec {
    pub labels: Vec<String>,
    #[serde(default)]
    pub classes: Vec<Vec<String>>,
    #[serde(default)]
    pub inclusions: Vec<(String, String)>,
    #[serde(default)]
    pub generators: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default)]
    pub finite: Vec<String>,
    #[serde(default)]
    pub not_in_family: Vec<String>,
    #[serde(default)]
    pub intersections: Vec<(String, String, String)>,
}

#[derive(Debug, Clone)]
pub struct Table {
    labels: BTreeSet<String>,
    class_of: BTreeMap<String, usize>,
    class_rep: Vec<String>,
    /// (sub, sup) pairs, reflexively and transitively closed.
    included: BTreeSet<(String, String)>,
    generators: BTreeMap<String, BTreeMap<String, String>>,
    finite: BTreeSet<String>,
    not_in_family: BTreeSet<String>,
    intersections: BTreeMap<(String, String), String>,
}

impl Table {
    pub fn from_spec(spec: &TableSpec) -> Result<Table, String> {
        let labels: BTreeSet<String> = spec.labels.iter().cloned().collect();
        if labels.len() != spec.labels.len() {
            return Err("duplicate label in table".into());
        }
        let check = |l: &String| -> Result<(), String> {
            if labels.contains(l) {
                Ok(())
            } else {
                Err(format!("unknown label {l:?} in table"))
            }
        };

        // Declared groups first, then a singleton class per leftover label.
        let mut class_of: BTreeMap<String, usize> = BTreeMap::new();
        let mut class_rep: Vec<String> = Vec::new();
        for group in &spec.classes {
            let id = class_rep.len();
            let mut rep: Option<&String> = None;
            for l in group {
                check(l)?;
                if class_of.insert(l.clone(), id).is_some() {
                    return Err(format!("label {l:?} listed in two classes"));
                }
                if rep.map_or(true, |r| l < r) {
                    rep = Some(l);
                }
            }
            class_rep.push(rep.ok_or("empty class group")?.clone());
        }
        for l in &labels {
            if !class_of.contains_key(l) {
                class_of.insert(l.clone(), class_rep.len());
                class_rep.push(l.clone());
            }
        }

        let mut included: BTreeSet<(String, String)> = BTreeSet::new();
        for l in &labels {
            included.insert((l.clone(), l.clone()));
        }
        for (sub, sup) in &spec.inclusions {
            check(sub)?;
            check(sup)?;
            included.insert((sub.clone(), sup.clone()));
        }
        // transitive closure; label sets stay small
        loop {
            let mut added = Vec::new();
            for (a, b) in &included {
                for (c, d) in &included {
                    if b == c && !included.contains(&(a.clone(), d.clone())) {
                        added.push((a.clone(), d.clone()));
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            included.extend(added);
        }

        let mut generators = BTreeMap::new();
        for (g, map) in &spec.generators {
            let mut total: BTreeMap<String, String> = BTreeMap::new();
            for (from, to) in map {
                check(from)?;
                check(to)?;
                total.insert(from.clone(), to.clone());
            }
            for l in &labels {
                total.entry(l.clone()).or_insert_with(|| l.clone());
            }
            generators.insert(g.clone(), total);
        }

        for l in spec.finite.iter().chain(&spec.not_in_family) {
            check(l)?;
        }
        let mut intersections = BTreeMap::new();
        for (a, b, c) in &spec.intersections {
            check(a)?;
            check(b)?;
            check(c)?;
            intersections.insert((a.clone(), b.clone()), c.clone());
            intersections.insert((b.clone(), a.clone()), c.clone());
        }

        Ok(Table {
            labels,
            class_of,
            class_rep,
            included,
            generators,
            finite: spec.finite.iter().cloned().collect(),
            not_in_family: spec.not_in_family.iter().cloned().collect(),
            intersections,
        })
    }

    pub fn has_label(&self, l: &str) -> bool {
        self.labels.contains(l)
    }

    pub fn class_id(&self, l: &str) -> usize {
        self.class_of[l]
    }

    pub fn class_rep(&self, l: &str) -> &str {
        &self.class_rep[self.class_of[l]]
    }

    pub fn includes(&self, sup: &str, sub: &str) -> bool {
        self.included.contains(&(sub.to_string(), sup.to_string()))
    }

    pub fn generator(&self, g: &str) -> Option<&BTreeMap<String, String>> {
        self.generators.get(g)
    }

    pub fn is_finite(&self, l: &str) -> bool {
        self.finite.contains(l)
    }

    pub fn in_family(&self, l: &str) -> bool {
        !self.not_in_family.contains(l)
    }

    pub fn intersection(&self, a: &str, b: &str) -> Option<&str> {
        self.intersections
            .get(&(a.to_string(), b.to_string()))
            .map(|s| s.as_str())
    }

    /// Declared-inclusion pairs that contradict the partition: sub in sup
    /// with both in the family but in different classes.
    pub fn partition_conflicts(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (sub, sup) in &self.included {
            if sub != sup
                && self.in_family(sub)
                && self.in_family(sup)
                && self.class_of[sub] != self.class_of[sup]
            {
                out.push((sub.clone(), sup.clone()));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> TableSpec {
        serde_json::from_value(serde_json::json!({
            "labels": ["A", "B", "C", "J"],
            "classes": [["A", "B"]],
            "inclusions": [["A", "B"], ["A", "J"], ["C", "J"]],
            "generators": {"t": {"A": "B", "B": "A"}},
            "not_in_family": ["J"]
        }))
        .unwrap()
    }

    #[test]
    fn closure_and_classes() {
        let t = Table::from_spec(&spec()).unwrap();
        assert!(t.includes("B", "A"));
        assert!(t.includes("A", "A"));
        assert!(!t.includes("A", "B"));
        assert_eq!(t.class_rep("B"), "A");
        assert_eq!(t.class_rep("C"), "C");
        assert!(t.in_family("A"));
        assert!(!t.in_family("J"));
        assert!(t.partition_conflicts().is_empty());
    }

    #[test]
    fn conflicting_inclusion_is_reported() {
        let mut s = spec();
        s.inclusions.push(("C".into(), "A".into()));
        let t = Table::from_spec(&s).unwrap();
        // closure drags C under B as well
        assert_eq!(
            t.partition_conflicts(),
            vec![("C".into(), "A".into()), ("C".into(), "B".into())]
        );
    }

    #[test]
    fn generator_maps_are_totalized() {
        let t = Table::from_spec(&spec()).unwrap();
        let g = t.generator("t").unwrap();
        assert_eq!(g["A"], "B");
        assert_eq!(g["J"], "J");
    }
}
