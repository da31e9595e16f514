//! Deterministic JSON reports and the on-disk gauge-solve cache.

use crate::anyon::AnyonTheory;
use crate::boundary::{GaugeOperator, GaugeSolution, Tag, Truncation};
use crate::catalog::{pauli_to_terms, to_json, StabilizerCodeSpec, Term};
use crate::constructor::{bulk_strings_through, Analysis, BoundaryHamiltonian, Origin};
use crate::error::{Error, Result};
use crate::lagrangian::{AnyonGroup, LagrangianSubgroup};
use crate::poly::PauliVector;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

/// Leading 16 hex digits of the SHA-256 of `bytes`.
pub fn short_hash(bytes: &[u8]) -> String {
    hex::encode(&Sha256::digest(bytes)[..8])
}

/// Hash of the canonical code file of `spec`.
pub fn code_hash(spec: &StabilizerCodeSpec) -> String {
    short_hash(to_json(spec).as_bytes())
}

/// `v` with every object's keys in sorted order.
pub fn canonical(v: &Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            let mut out = Map::new();
            for k in keys {
                out.insert(k.clone(), canonical(&m[k]));
            }
            Value::Object(out)
        }
        Value::Array(a) => Value::Array(a.iter().map(canonical).collect()),
        other => other.clone(),
    }
}

pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(&canonical(v)).expect("reports always serialize");
    s.push('\n');
    s
}

pub fn operator(p: &PauliVector) -> Value {
    json!(pauli_to_terms(p))
}

pub fn truncation_json(t: &Truncation) -> Value {
    let parts: Vec<Value> = t
        .parts
        .iter()
        .map(|p| json!({ "side": p.side, "edge": p.edge, "mask": p.mask, "stabilizers": p.stabilizers.len(), "constraints": p.constraints.len() }))
        .collect();
    json!({
        "name": t.name,
        "kind": if t.everywhere { "defect" } else { "boundary" },
        "parts": parts,
        "core": [t.core.0, t.core.1],
        "global_constraints": t.global_constraints.len(),
    })
}

pub fn gauge_json(g: &GaugeSolution) -> Value {
    let gens: Vec<Value> = g
        .generators
        .iter()
        .map(|op| json!({ "tag": op.tag, "y_period": op.y_period, "operator": operator(&op.pauli) }))
        .collect();
    let secondary = g.secondary().count();
    json!({ "window": g.window, "doublings": g.doublings, "generators": gens, "secondary_count": secondary })
}

pub fn theory_json(th: &AnyonTheory) -> Value {
    let basis: Vec<Value> = th
        .basis
        .iter()
        .map(|b| json!({ "order": b.order, "period": b.string.period, "string": operator(&b.string.pauli) }))
        .collect();
    json!({
        "d": th.d,
        "orders": th.orders(),
        "size": th.size().to_string(),
        "spins": th.spins.iter().map(|s| s.e).collect::<Vec<_>>(),
        "braiding": th.braiding.iter().map(|r| r.iter().map(|b| b.e).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "min_period": th.min_period,
        "profile": th.profile,
        "incomplete": th.incomplete,
        "basis": basis,
    })
}

pub fn analysis_json(spec: &StabilizerCodeSpec, an: &Analysis) -> Value {
    json!({
        "code": { "name": spec.name, "hash": code_hash(spec), "d": spec.dim(), "w": spec.w },
        "truncation": truncation_json(&an.truncation),
        "gauge": gauge_json(&an.gauge),
        "anyons": theory_json(&an.theory),
    })
}

/// Elements of `L` and the anyons outside it, as exponent vectors.
fn anyon_tables(g: &AnyonGroup, l: &LagrangianSubgroup) -> (Vec<Vec<u64>>, usize) {
    (l.elements.clone(), (g.size() - l.elements.len() as u128) as usize)
}

/// Corridor from deep in the left bulk to the cut, or across a defect.
pub fn default_corridor(h: &BoundaryHamiltonian) -> [i64; 4] {
    let (ex, ey) = h.truncation.extent();
    let reach = 3 * ex;
    let (lo, hi) = h.truncation.core;
    let right = if h.truncation.parts.len() == 2 { hi + reach } else { hi };
    [lo - reach, right, 0, 2 * ey]
}

pub fn construction_json(g: &AnyonGroup, l: &LagrangianSubgroup, built: &Result<BoundaryHamiltonian>) -> Value {
    let (condensed, confined) = anyon_tables(g, l);
    let mut v = json!({
        "lagrangian": { "generators": l.generators, "condensed": condensed, "confined_count": confined },
    });
    let m = v.as_object_mut().unwrap();
    match built {
        Err(e) => {
            m.insert("status".into(), json!("error"));
            m.insert("error".into(), json!(e.to_string()));
        }
        Ok(h) => {
            let terms: Vec<Value> = h
                .terms
                .iter()
                .map(|t| {
                    json!({
                        "origin": t.origin,
                        "y_period": t.y_period,
                        "anyon": t.anyon,
                        "operator": operator(&t.pauli),
                    })
                })
                .collect();
            let corridor = default_corridor(h);
            let strings: Vec<Value> = bulk_strings_through(h, corridor)
                .iter()
                .map(|s| json!({ "left_charge": s.left_charge, "right_charge": s.right_charge, "operator": operator(&s.pauli) }))
                .collect();
            m.insert("status".into(), json!("ok"));
            m.insert("period".into(), json!(h.period));
            m.insert("segment".into(), json!(h.segment));
            m.insert("completion_terms".into(), json!(h.terms.iter().filter(|t| t.origin == Origin::Completion).count()));
            m.insert("terms".into(), json!(terms));
            m.insert("to_certificate".into(), json!(h.certificate));
            m.insert("bulk_strings".into(), json!({ "corridor": corridor, "strings": strings }));
        }
    }
    v
}

/// Cached form of a gauge solve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct CachedGauge {
    key: String,
    window: [i64; 4],
    doublings: usize,
    generators: Vec<(Tag, u64, Vec<Term>)>,
}

/// Directory-backed memo of gauge solves keyed by truncation and options.
pub struct GaugeCache {
    dir: PathBuf,
}

impl GaugeCache {
    /// Cache rooted at `$ANYONLAB_CACHE`, if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os("ANYONLAB_CACHE").map(|d| GaugeCache { dir: PathBuf::from(d) })
    }

    pub fn at(dir: &Path) -> Self {
        GaugeCache { dir: dir.to_path_buf() }
    }

    pub fn key(t: &Truncation, options: &str) -> String {
        let parts: Vec<String> = t
            .parts
            .iter()
            .map(|p| format!("{:?}{}{:?}{:?}{:?}", p.side, p.edge, p.mask, p.stabilizers, p.constraints))
            .collect();
        short_hash(format!("{}|{}|{:?}|{:?}|{}", t.d, t.w, parts, t.global_constraints, options).as_bytes())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("gauge-{key}.json"))
    }

    pub fn load(&self, key: &str, d: u64, w: usize) -> Option<GaugeSolution> {
        let text = std::fs::read(self.path(key)).ok()?;
        let c: CachedGauge = serde_json::from_slice(&text).ok()?;
        if c.key != key {
            return None;
        }
        let mut generators = Vec::new();
        for (tag, y_period, terms) in c.generators {
            let mut p = PauliVector::zero(d, w);
            for t in terms {
                if t.slot >= 2 * w {
                    return None;
                }
                p.slot_mut(t.slot).add_term(t.monomial[0], t.monomial[1], t.coeff as i64);
            }
            generators.push(GaugeOperator { pauli: p, y_period, tag });
        }
        Some(GaugeSolution { generators, window: c.window, doublings: c.doublings })
    }

    pub fn store(&self, key: &str, g: &GaugeSolution) -> Result<()> {
        let c = CachedGauge {
            key: key.to_string(),
            window: g.window,
            doublings: g.doublings,
            generators: g.generators.iter().map(|op| (op.tag, op.y_period, pauli_to_terms(&op.pauli))).collect(),
        };
        std::fs::create_dir_all(&self.dir).map_err(|e| Error::ValidationError(format!("cache directory: {e}")))?;
        let text = serde_json::to_string(&c).expect("cache entries always serialize");
        std::fs::write(self.path(key), text).map_err(|e| Error::ValidationError(format!("cache write: {e}")))
    }
}
