//! Exact-rational JSON encoding of engine values, and the result document.

use serde_json::{json, Map, Value};
use tucoop::classes::{ClassFlag, ClassReport, Witness};
use tucoop::decomposition::{FactorizationRecord, SolutionValue};
use tucoop::polyhedra::{Constraint, HPolytope, VPolytope};
use tucoop::rational::parse_rational;
use tucoop::{coalitions, Allocation, Coalition, Game, Rational, SetFunction};

use crate::error::ParseError;

pub fn rational(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn vector(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational).collect())
}

pub fn allocation(x: &Allocation) -> Value {
    vector(x.coords())
}

fn table(n: usize, values: &[Rational]) -> Value {
    let mut map = Map::new();
    for a in coalitions(n) {
        let w = &values[a.index()];
        if *w != Rational::default() {
            map.insert(a.key(), rational(w));
        }
    }
    json!({ "n": n, "values": map })
}

/// Canonical game document: nonzero worths only, in canonical coalition order.
pub fn game(v: &Game) -> Value {
    table(v.n(), v.values())
}

/// Like [`game`], with the empty coalition under the key `""` when nonzero.
pub fn set_function(f: &SetFunction) -> Value {
    table(f.n(), f.values())
}

fn rows(cs: &[Constraint]) -> Value {
    Value::Array(
        cs.iter()
            .map(|c| Value::Array(c.normal.iter().chain([&c.rhs]).map(rational).collect()))
            .collect(),
    )
}

/// Rows `[a_1, .., a_n, b]` meaning `a · x ≥ b` (inequalities) or `= b`.
pub fn hpolytope(h: &HPolytope) -> Value {
    let h = h.canonical();
    json!({ "inequalities": rows(h.inequalities()), "equalities": rows(h.equalities()) })
}

/// Vertex list, with a facet description when one is supplied.
pub fn polytope(p: &VPolytope, h: Option<&HPolytope>) -> Value {
    let mut obj = Map::new();
    obj.insert("dim".into(), json!(p.dim()));
    obj.insert("vertices".into(), Value::Array(p.vertices().iter().map(|v| vector(v)).collect()));
    if let Some(h) = h {
        let Value::Object(hv) = hpolytope(h) else { unreachable!() };
        obj.extend(hv);
    }
    Value::Object(obj)
}

fn weights(ws: &[(Coalition, Rational)]) -> Value {
    let map: Map<String, Value> = ws.iter().map(|(a, w)| (a.key(), rational(w))).collect();
    Value::Object(map)
}

pub fn witness(w: &Witness) -> Value {
    match w {
        Witness::Coalition(a) => json!({ "kind": "coalition", "coalition": a.key() }),
        Witness::Pair(a, b) => json!({ "kind": "pair", "coalitions": [a.key(), b.key()] }),
        Witness::CorePoint(x) => json!({ "kind": "core_point", "point": allocation(x) }),
        Witness::BalancedWeights(ws) => json!({ "kind": "balanced_weights", "weights": weights(ws) }),
        Witness::ExactGap { coalition, core_min } => {
            json!({ "kind": "exact_gap", "coalition": coalition.key(), "core_min": rational(core_min) })
        }
        Witness::UnbalancedSubgame(a, ws) => {
            json!({ "kind": "unbalanced_subgame", "coalition": a.key(), "weights": weights(ws) })
        }
    }
}

fn flag(f: &ClassFlag) -> Value {
    json!({ "holds": f.holds, "witness": f.witness.as_ref().map(witness) })
}

pub fn class_report(r: &ClassReport) -> Value {
    json!({
        "weakly_superadditive": flag(&r.weakly_superadditive),
        "monotone": flag(&r.monotone),
        "supermodular": flag(&r.supermodular),
        "totally_monotone": flag(&r.totally_monotone),
        "zero_normalized": flag(&r.zero_normalized),
        "zero_monotone": flag(&r.zero_monotone),
        "additive": flag(&r.additive),
        "balanced": flag(&r.balanced),
        "exact": r.exact.as_ref().map(flag),
        "totally_balanced": r.totally_balanced.as_ref().map(flag),
        "implication_violation": r.implication_violation(),
    })
}

pub fn solution_value(s: &SolutionValue) -> Value {
    match s {
        SolutionValue::Point(x) => json!({ "point": allocation(x) }),
        SolutionValue::Set(p) => json!({ "polytope": polytope(p, None) }),
    }
}

pub fn factorization(r: &FactorizationRecord) -> Value {
    let tau: Vec<Value> = r
        .tau_output
        .iter()
        .map(|(label, f)| json!({ "label": label, "set_function": set_function(f) }))
        .collect();
    json!({
        "scheme": r.scheme.name(),
        "commutes": r.commutes,
        "tau_output": tau,
        "alpha_output": solution_value(&r.alpha_output),
        "direct_sigma": solution_value(&r.direct_sigma),
    })
}

pub fn decode_rational(v: &Value) -> Option<Rational> {
    parse_rational(v.as_str()?)
}

pub fn decode_vector(v: &Value) -> Option<Vec<Rational>> {
    v.as_array()?.iter().map(decode_rational).collect()
}

/// Vertices of an encoded polytope.
pub fn decode_polytope(v: &Value) -> Option<VPolytope> {
    let dim = v.get("dim")?.as_u64()? as usize;
    let vertices = v.get("vertices")?.as_array()?.iter().map(decode_vector).collect::<Option<Vec<_>>>()?;
    VPolytope::hull(dim, vertices).ok()
}

/// Outcome of one command: the echoed invocation and either a payload or a
/// machine-readable error.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultDocument {
    pub command: Map<String, Value>,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Ok(Value),
    Error { code: String, message: String, exit_code: i32 },
}

impl ResultDocument {
    pub fn to_value(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("command".into(), Value::Object(self.command.clone()));
        match &self.outcome {
            Outcome::Ok(result) => {
                obj.insert("status".into(), json!("ok"));
                obj.insert("result".into(), result.clone());
            }
            Outcome::Error { code, message, exit_code } => {
                obj.insert("status".into(), json!("error"));
                obj.insert("error".into(), json!({ "code": code, "message": message, "exit_code": exit_code }));
            }
        }
        Value::Object(obj)
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("JSON values always serialize");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let doc = crate::input::parse_json(text)?;
        let bad = |m: &str| ParseError::new(format!("not a result document: {m}"));
        let command = doc.get("command").and_then(Value::as_object).ok_or_else(|| bad("missing \"command\""))?.clone();
        let outcome = match doc.get("status").and_then(Value::as_str) {
            Some("ok") => Outcome::Ok(doc.get("result").ok_or_else(|| bad("missing \"result\""))?.clone()),
            Some("error") => {
                let e = doc.get("error").ok_or_else(|| bad("missing \"error\""))?;
                let field = |k: &str| e.get(k).and_then(Value::as_str).map(str::to_string).ok_or_else(|| bad(k));
                Outcome::Error {
                    code: field("code")?,
                    message: field("message")?,
                    exit_code: e.get("exit_code").and_then(Value::as_i64).ok_or_else(|| bad("exit_code"))? as i32,
                }
            }
            _ => return Err(bad("\"status\" must be \"ok\" or \"error\"")),
        };
        Ok(ResultDocument { command, outcome })
    }
}
