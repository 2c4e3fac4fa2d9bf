//! JSON and DOT serialisation of disk diagrams.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::diagram::{DiskDiagram, Face, FaceKind, HalfEdge};
use crate::word::{Letter, Presentation};
use crate::{Error, Result};

#[derive(Serialize)]
struct LabelOut<'a> {
    generator: &'a str,
    sign: i64,
}

pub fn to_json_value(d: &DiskDiagram) -> Value {
    let p = d.presentation();
    let half_edges: Vec<Value> = d
        .half_edges()
        .iter()
        .enumerate()
        .map(|(id, h)| {
            json!({
                "id": id,
                "origin": h.origin,
                "twin": h.twin,
                "next_rotation": h.next_rotation,
                "label": LabelOut { generator: &p.generators[h.label.gen], sign: h.label.sign() },
            })
        })
        .collect();
    let faces: Vec<Value> = d
        .faces()
        .iter()
        .map(|f| {
            let mut m = Map::new();
            match f.kind {
                FaceKind::Relator { relator_id, rotation, inverted } => {
                    m.insert("kind".into(), json!("relator"));
                    m.insert("relator_id".into(), json!(relator_id));
                    m.insert("rotation".into(), json!(rotation));
                    m.insert("inverted".into(), json!(inverted));
                }
                FaceKind::FreeBigon => {
                    m.insert("kind".into(), json!("free_bigon"));
                }
                FaceKind::PathBigon { path_len } => {
                    m.insert("kind".into(), json!("path_bigon"));
                    m.insert("path_len".into(), json!(path_len));
                }
            }
            m.insert("cycle".into(), json!(f.cycle));
            Value::Object(m)
        })
        .collect();
    let mut top = Map::new();
    top.insert("vertices".into(), json!(d.vertex_count()));
    top.insert("half_edges".into(), Value::Array(half_edges));
    top.insert("faces".into(), Value::Array(faces));
    top.insert("outer_boundary".into(), json!(d.outer()));
    if let Some(b) = d.basepoint() {
        top.insert("basepoint".into(), json!(b));
    }
    let rels: Vec<String> = p.relators.iter().map(|r| p.format_word(r)).collect();
    top.insert("presentation".into(), json!({ "generators": p.generators, "relators": rels }));
    Value::Object(top)
}

pub fn to_json(d: &DiskDiagram) -> String {
    serde_json::to_string_pretty(&to_json_value(d)).expect("diagram serialises")
}

fn schema(path: impl Into<String>, msg: impl Into<String>) -> Error {
    Error::Schema { path: path.into(), msg: msg.into() }
}

fn field<'a>(obj: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| schema(format!("{path}.{key}"), "missing field"))
}

fn uint(v: &Value, path: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| schema(path, "expected a nonnegative integer"))
}

fn uint_field(obj: &Map<String, Value>, path: &str, key: &str) -> Result<usize> {
    uint(field(obj, path, key)?, &format!("{path}.{key}"))
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| schema(path, "expected an object"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(path, "expected an array"))
}

fn id_list(v: &Value, path: &str) -> Result<Vec<usize>> {
    array(v, path)?.iter().enumerate().map(|(i, x)| uint(x, &format!("{path}[{i}]"))).collect()
}

pub fn from_json(text: &str) -> Result<DiskDiagram> {
    let v: Value = serde_json::from_str(text)?;
    from_json_value(&v)
}

pub fn from_json_value(v: &Value) -> Result<DiskDiagram> {
    let top = object(v, "$")?;
    let vertex_count = uint_field(top, "$", "vertices")?;
    let raw_hes = array(field(top, "$", "half_edges")?, "$.half_edges")?;

    let mut generators: Vec<String> = Vec::new();
    let mut relator_text: Vec<String> = Vec::new();
    if let Some(pv) = top.get("presentation") {
        let po = object(pv, "$.presentation")?;
        for (i, g) in array(field(po, "$.presentation", "generators")?, "$.presentation.generators")?.iter().enumerate() {
            let s = g.as_str().ok_or_else(|| schema(format!("$.presentation.generators[{i}]"), "expected a string"))?;
            generators.push(s.to_string());
        }
        if let Some(rv) = po.get("relators") {
            for (i, r) in array(rv, "$.presentation.relators")?.iter().enumerate() {
                let s = r.as_str().ok_or_else(|| schema(format!("$.presentation.relators[{i}]"), "expected a string"))?;
                relator_text.push(s.to_string());
            }
        }
    }
    let explicit_alphabet = !generators.is_empty();

    let mut slots: Vec<Option<HalfEdge>> = vec![None; raw_hes.len()];
    for (i, hv) in raw_hes.iter().enumerate() {
        let path = format!("$.half_edges[{i}]");
        let ho = object(hv, &path)?;
        let id = uint_field(ho, &path, "id")?;
        if id >= slots.len() {
            return Err(schema(format!("{path}.id"), "id out of range"));
        }
        if slots[id].is_some() {
            return Err(schema(format!("{path}.id"), "duplicate id"));
        }
        let lpath = format!("{path}.label");
        let lo = object(field(ho, &path, "label")?, &lpath)?;
        let gname = field(lo, &lpath, "generator")?
            .as_str()
            .ok_or_else(|| schema(format!("{lpath}.generator"), "expected a string"))?;
        let sign = field(lo, &lpath, "sign")?.as_i64().ok_or_else(|| schema(format!("{lpath}.sign"), "expected +1 or -1"))?;
        if sign != 1 && sign != -1 {
            return Err(schema(format!("{lpath}.sign"), "expected +1 or -1"));
        }
        let gen = match generators.iter().position(|g| g == gname) {
            Some(g) => g,
            None if !explicit_alphabet => {
                generators.push(gname.to_string());
                generators.len() - 1
            }
            None => return Err(schema(format!("{lpath}.generator"), format!("`{gname}` is not in the alphabet"))),
        };
        slots[id] = Some(HalfEdge {
            origin: uint_field(ho, &path, "origin")?,
            twin: uint_field(ho, &path, "twin")?,
            next_rotation: uint_field(ho, &path, "next_rotation")?,
            label: Letter { gen, inv: sign < 0 },
        });
    }
    let half_edges: Vec<HalfEdge> = slots.into_iter().map(|s| s.expect("ids are a permutation")).collect();

    let mut presentation = Presentation { generators, relators: Vec::new() };
    for (i, t) in relator_text.iter().enumerate() {
        let w = presentation
            .parse_spaced_word(t)
            .map_err(|e| schema(format!("$.presentation.relators[{i}]"), e.to_string()))?;
        presentation.relators.push(w);
    }

    let mut faces = Vec::new();
    for (i, fv) in array(field(top, "$", "faces")?, "$.faces")?.iter().enumerate() {
        let path = format!("$.faces[{i}]");
        let fo = object(fv, &path)?;
        let kind_name = field(fo, &path, "kind")?.as_str().ok_or_else(|| schema(format!("{path}.kind"), "expected a string"))?;
        let kind = match kind_name {
            "relator" => FaceKind::Relator {
                relator_id: uint_field(fo, &path, "relator_id")?,
                rotation: fo.get("rotation").map(|r| uint(r, &format!("{path}.rotation"))).transpose()?.unwrap_or(0),
                inverted: match fo.get("inverted") {
                    None => false,
                    Some(b) => b.as_bool().ok_or_else(|| schema(format!("{path}.inverted"), "expected a boolean"))?,
                },
            },
            "free_bigon" => FaceKind::FreeBigon,
            "path_bigon" => FaceKind::PathBigon { path_len: uint_field(fo, &path, "path_len")? },
            other => return Err(schema(format!("{path}.kind"), format!("unknown face kind `{other}`"))),
        };
        let cycle = id_list(field(fo, &path, "cycle")?, &format!("{path}.cycle"))?;
        faces.push(Face { kind, cycle });
    }
    let outer = id_list(field(top, "$", "outer_boundary")?, "$.outer_boundary")?;
    let basepoint = top.get("basepoint").map(|b| uint(b, "$.basepoint")).transpose()?;
    DiskDiagram::from_parts(presentation, vertex_count, half_edges, faces, outer, basepoint).map_err(|e| match e {
        Error::Schema { path, msg } => schema(format!("$.{path}"), msg),
        other => other,
    })
}

/// Undirected primal graph; boundary vertices drawn as boxes. With
/// `with_dual`, face nodes and the killed dual edges are added.
pub fn to_dot(d: &DiskDiagram, with_dual: bool) -> String {
    let p = d.presentation();
    let mut s = String::from("graph diagram {\n");
    for v in 0..d.vertex_count() {
        let shape = if d.is_boundary_vertex(v) { "box" } else { "circle" };
        let _ = writeln!(s, "  v{v} [shape={shape}];");
    }
    for e in 0..d.edge_count() {
        let h = d.edge_rep(e);
        let l = d.label(h);
        let _ = writeln!(
            s,
            "  v{} -- v{} [label=\"{}{}\"];",
            d.origin(h),
            d.head(h),
            p.generators[l.gen],
            if l.inv { "-" } else { "" }
        );
    }
    if with_dual {
        let _ = writeln!(s, "  inf [shape=doublecircle, style=dashed];");
        for f in 0..d.face_count() {
            let _ = writeln!(s, "  f{f} [shape=diamond, style=dashed];");
        }
        for e in 0..d.edge_count() {
            match d.edge_sides(e) {
                (Some(a), Some(b)) if a != b => {
                    let _ = writeln!(s, "  f{a} -- f{b} [style=dashed];");
                }
                (Some(a), None) | (None, Some(a)) => {
                    let _ = writeln!(s, "  f{a} -- inf [style=dashed];");
                }
                _ => {}
            }
        }
    }
    s.push_str("}\n");
    s
}
