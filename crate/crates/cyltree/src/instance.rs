//! Instance files: one JSON format for every backend.
//!
//! The `algebra` object carries the backend discriminant. Stabilizer
//! data appears inline (a word, a table label, or lattice rows) or as a
//! reference into the optional named `stabs` table. Serialization is
//! deterministic: sorted vertices and edges, sorted object keys,
//! canonical payloads.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::algebra::{Algebra, AlgebraConfig, RawDatum, StabilizerHandle};
use crate::error::TreeError;
use crate::window::{GTreeWindow, TreeAutomorphism, VertexId, WindowBuilder};

fn bad(msg: impl Into<String>) -> TreeError {
    TreeError::Parse(msg.into())
}

fn as_vertex(v: &Value, what: &str) -> Result<VertexId, TreeError> {
    v.as_u64()
        .and_then(|x| VertexId::try_from(x).ok())
        .ok_or_else(|| bad(format!("{what} must be a small non-negative integer")))
}

fn vertex_key(k: &str, what: &str) -> Result<VertexId, TreeError> {
    k.parse::<VertexId>()
        .map_err(|_| bad(format!("{what} key {k:?} is not a vertex id")))
}

struct StabResolver<'a> {
    alg: &'a Algebra,
    named: BTreeMap<String, &'a Value>,
}

impl<'a> StabResolver<'a> {
    fn resolve(&self, v: &Value) -> Result<StabilizerHandle, TreeError> {
        if let Value::String(s) = v {
            if let Some(datum) = self.named.get(s) {
                return Ok(self.alg.normalize(&RawDatum::from_json(datum)?)?);
            }
        }
        Ok(self.alg.normalize(&RawDatum::from_json(v)?)?)
    }
}

pub fn window_from_value(v: &Value) -> Result<GTreeWindow, TreeError> {
    let obj = v.as_object().ok_or_else(|| bad("instance must be a JSON object"))?;
    let algebra_value = obj
        .get("algebra")
        .ok_or_else(|| bad("instance is missing the algebra object"))?;
    let config: AlgebraConfig = serde_json::from_value(algebra_value.clone())
        .map_err(|e| bad(format!("algebra object does not parse: {e}")))?;
    let alg = Arc::new(Algebra::new(config)?);

    let named = match obj.get("stabs") {
        None => BTreeMap::new(),
        Some(Value::Object(m)) => m.iter().map(|(k, v)| (k.clone(), v)).collect(),
        Some(_) => return Err(bad("stabs must be an object")),
    };
    let resolver = StabResolver { alg: &alg, named };

    let mut b = WindowBuilder::new(alg.clone());

    for v in obj
        .get("vertices")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("vertices must be an array"))?
    {
        b.vertex(as_vertex(v, "vertex id")?);
    }

    for (i, e) in obj
        .get("edges")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("edges must be an array"))?
        .iter()
        .enumerate()
    {
        let trip = e
            .as_array()
            .filter(|a| a.len() == 3)
            .ok_or_else(|| bad(format!("edge {i} must be [u, v, stab]")))?;
        let u = as_vertex(&trip[0], "edge endpoint")?;
        let v = as_vertex(&trip[1], "edge endpoint")?;
        b.edge(u, v, resolver.resolve(&trip[2])?);
    }

    if let Some(vs) = obj.get("vertex_stabs") {
        let m = vs.as_object().ok_or_else(|| bad("vertex_stabs must be an object"))?;
        for (k, v) in m {
            b.vertex_stabs
                .insert(vertex_key(k, "vertex_stabs")?, resolver.resolve(v)?);
        }
    }

    if let Some(bd) = obj.get("boundary") {
        for v in bd.as_array().ok_or_else(|| bad("boundary must be an array"))? {
            b.boundary.insert(as_vertex(v, "boundary vertex")?);
        }
    }

    if let Some(gs) = obj.get("generators") {
        for (i, g) in gs
            .as_array()
            .ok_or_else(|| bad("generators must be an array"))?
            .iter()
            .enumerate()
        {
            let go = g
                .as_object()
                .ok_or_else(|| bad(format!("generator {i} must be an object")))?;
            let name = go
                .get("name")
                .and_then(Value::as_str)
                .ok_or_else(|| bad(format!("generator {i} needs a name")))?
                .to_string();
            let mut vertex_map = BTreeMap::new();
            let vm = go
                .get("vertex_map")
                .and_then(Value::as_object)
                .ok_or_else(|| bad(format!("generator {name:?} needs a vertex_map object")))?;
            for (k, v) in vm {
                vertex_map.insert(
                    vertex_key(k, "vertex_map")?,
                    as_vertex(v, "vertex_map image")?,
                );
            }
            b.generators.push(TreeAutomorphism { name, vertex_map });
        }
    }

    if let Some(rm) = obj.get("relative_marks") {
        for mark in rm
            .as_array()
            .ok_or_else(|| bad("relative_marks must be an array of arrays"))?
        {
            let set: BTreeSet<VertexId> = mark
                .as_array()
                .ok_or_else(|| bad("each relative mark must be an array"))?
                .iter()
                .map(|v| as_vertex(v, "relative mark vertex"))
                .collect::<Result<_, _>>()?;
            b.relative_marks.push(set);
        }
    }

    if let Some(sm) = obj.get("small") {
        let m = sm.as_object().ok_or_else(|| bad("small must be an object"))?;
        for (k, v) in m {
            let flag = v
                .as_bool()
                .ok_or_else(|| bad("small flags must be booleans"))?;
            b.small_declared.insert(vertex_key(k, "small")?, flag);
        }
    }

    if let Some(cs) = obj.get("cylinder_stabs") {
        for (i, pair) in cs
            .as_array()
            .ok_or_else(|| bad("cylinder_stabs must be an array"))?
            .iter()
            .enumerate()
        {
            let pair = pair
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| bad(format!("cylinder_stabs entry {i} must be [member, stab]")))?;
            b.cylinder_stabs
                .push((resolver.resolve(&pair[0])?, resolver.resolve(&pair[1])?));
        }
    }

    if let Some(ds) = obj.get("dual_edge_stabs") {
        for (i, trip) in ds
            .as_array()
            .ok_or_else(|| bad("dual_edge_stabs must be an array"))?
            .iter()
            .enumerate()
        {
            let trip = trip.as_array().filter(|a| a.len() == 3).ok_or_else(|| {
                bad(format!("dual_edge_stabs entry {i} must be [vertex, member, stab]"))
            })?;
            b.dual_edge_stabs.push((
                as_vertex(&trip[0], "dual_edge_stabs vertex")?,
                resolver.resolve(&trip[1])?,
                resolver.resolve(&trip[2])?,
            ));
        }
    }

    if let Some(xc) = obj.get("extra_classes") {
        for v in xc
            .as_array()
            .ok_or_else(|| bad("extra_classes must be an array"))?
        {
            b.extra_classes.push(resolver.resolve(v)?);
        }
    }

    if let Some(d) = obj.get("declared") {
        let m = d.as_object().ok_or_else(|| bad("declared must be an object"))?;
        if let Some(v) = m.get("minimal") {
            b.declared.minimal = v
                .as_bool()
                .ok_or_else(|| bad("declared.minimal must be a boolean"))?;
        }
        if let Some(v) = m.get("cylinder_stabs_elliptic") {
            b.declared.cylinder_stabs_elliptic = v
                .as_bool()
                .ok_or_else(|| bad("declared.cylinder_stabs_elliptic must be a boolean"))?;
        }
    }

    b.build()
}

pub fn parse_window(text: &str) -> Result<GTreeWindow, TreeError> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| bad(format!("instance is not JSON: {e}")))?;
    window_from_value(&v)
}

fn stab_value(h: &StabilizerHandle) -> Value {
    use crate::algebra::Payload;
    match &h.payload {
        Payload::Lattice(b) => json!(b.rows),
        _ => Value::String(h.text()),
    }
}

pub fn window_to_value(w: &GTreeWindow) -> Value {
    let mut obj = Map::new();
    obj.insert(
        "algebra".into(),
        serde_json::to_value(w.algebra().config()).expect("config serializes"),
    );
    obj.insert("vertices".into(), json!(w.vertices()));
    obj.insert(
        "edges".into(),
        Value::Array(
            w.edges()
                .iter()
                .map(|e| json!([e.u, e.v, stab_value(&e.stab)]))
                .collect(),
        ),
    );
    if !w.vertex_stabs().is_empty() {
        let m: Map<String, Value> = w
            .vertex_stabs()
            .iter()
            .map(|(v, h)| (v.to_string(), stab_value(h)))
            .collect();
        obj.insert("vertex_stabs".into(), Value::Object(m));
    }
    if !w.boundary().is_empty() {
        obj.insert("boundary".into(), json!(w.boundary()));
    }
    if !w.generators().is_empty() {
        let gs: Vec<Value> = w
            .generators()
            .iter()
            .map(|g| {
                let vm: Map<String, Value> = g
                    .vertex_map
                    .iter()
                    .map(|(a, b)| (a.to_string(), json!(b)))
                    .collect();
                json!({"name": g.name, "vertex_map": vm})
            })
            .collect();
        obj.insert("generators".into(), Value::Array(gs));
    }
    if !w.relative_marks().is_empty() {
        obj.insert("relative_marks".into(), json!(w.relative_marks()));
    }
    if !w.small_declared().is_empty() {
        let m: Map<String, Value> = w
            .small_declared()
            .iter()
            .map(|(v, f)| (v.to_string(), json!(f)))
            .collect();
        obj.insert("small".into(), Value::Object(m));
    }
    if !w.cylinder_stab_table().is_empty() {
        let t: Vec<Value> = w
            .cylinder_stab_table()
            .iter()
            .map(|(m, gy)| json!([stab_value(m), stab_value(gy)]))
            .collect();
        obj.insert("cylinder_stabs".into(), Value::Array(t));
    }
    if !w.dual_edge_stab_table().is_empty() {
        let t: Vec<Value> = w
            .dual_edge_stab_table()
            .iter()
            .map(|(v, m, h)| json!([v, stab_value(m), stab_value(h)]))
            .collect();
        obj.insert("dual_edge_stabs".into(), Value::Array(t));
    }
    if !w.extra_classes().is_empty() {
        let t: Vec<Value> = w.extra_classes().iter().map(stab_value).collect();
        obj.insert("extra_classes".into(), Value::Array(t));
    }
    let mut declared = Map::new();
    declared.insert("minimal".into(), json!(w.declared().minimal));
    if w.declared().cylinder_stabs_elliptic {
        declared.insert("cylinder_stabs_elliptic".into(), json!(true));
    }
    obj.insert("declared".into(), Value::Object(declared));
    Value::Object(obj)
}

pub fn window_to_string(w: &GTreeWindow) -> String {
    let mut s = serde_json::to_string_pretty(&window_to_value(w)).expect("window serializes");
    s.push('\n');
    s
}
