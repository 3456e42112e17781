//! Readers for game, weights and K-set files.

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::de::{self, Deserialize, Deserializer, MapAccess, SeqAccess, Visitor};
use serde_json::{Map, Value};
use tucoop::game::MAX_PLAYERS;
use tucoop::polyhedra::{Constraint, HPolytope};
use tucoop::rational::parse_rational;
use tucoop::solutions::ProbabilisticWeights;
use tucoop::{Coalition, Game, Rational, SetFunction};

use crate::error::{CliError, InputError, ParseError};

/// Validates JSON syntax and rejects repeated keys in any object.
struct NoDuplicates;

impl<'de> Deserialize<'de> for NoDuplicates {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(NoDuplicatesVisitor)
    }
}

struct NoDuplicatesVisitor;

impl<'de> Visitor<'de> for NoDuplicatesVisitor {
    type Value = NoDuplicates;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a JSON value")
    }

    fn visit_bool<E>(self, _: bool) -> Result<NoDuplicates, E> {
        Ok(NoDuplicates)
    }
    fn visit_i64<E>(self, _: i64) -> Result<NoDuplicates, E> {
        Ok(NoDuplicates)
    }
    fn visit_u64<E>(self, _: u64) -> Result<NoDuplicates, E> {
        Ok(NoDuplicates)
    }
    fn visit_f64<E>(self, _: f64) -> Result<NoDuplicates, E> {
        Ok(NoDuplicates)
    }
    fn visit_str<E>(self, _: &str) -> Result<NoDuplicates, E> {
        Ok(NoDuplicates)
    }
    fn visit_unit<E>(self) -> Result<NoDuplicates, E> {
        Ok(NoDuplicates)
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<NoDuplicates, A::Error> {
        while seq.next_element::<NoDuplicates>()?.is_some() {}
        Ok(NoDuplicates)
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<NoDuplicates, A::Error> {
        let mut seen = HashSet::new();
        while let Some(key) = map.next_key::<String>()? {
            if !seen.insert(key.clone()) {
                return Err(de::Error::custom(format!("duplicate key \"{key}\"")));
            }
            map.next_value::<NoDuplicates>()?;
        }
        Ok(NoDuplicates)
    }
}

fn json_error(e: serde_json::Error) -> ParseError {
    let full = e.to_string();
    let message = full.rsplit_once(" at line ").map_or(full.as_str(), |(m, _)| m).to_string();
    ParseError { line: Some(e.line()), key: None, message }
}

/// Parses JSON text, rejecting duplicate keys with a line diagnostic.
pub fn parse_json(text: &str) -> Result<Value, ParseError> {
    serde_json::from_str::<NoDuplicates>(text).map_err(json_error)?;
    serde_json::from_str(text).map_err(json_error)
}

/// Source text for key-level line diagnostics, when available.
#[derive(Clone, Copy)]
pub(crate) struct Ctx<'a>(pub Option<&'a str>);

impl Ctx<'_> {
    fn err(&self, key: &str, message: impl Into<String>) -> ParseError {
        ParseError::at_key(self.0, key, message)
    }
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>, ParseError> {
    v.as_object().ok_or_else(|| ParseError::new(format!("{what} must be a JSON object")))
}

fn only_fields(ctx: Ctx, obj: &Map<String, Value>, allowed: &[&str]) -> Result<(), ParseError> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(ctx.err(k, format!("unknown field; expected one of {allowed:?}"))),
        None => Ok(()),
    }
}

fn player_count(ctx: Ctx, obj: &Map<String, Value>) -> Result<usize, ParseError> {
    let n = obj.get("n").ok_or_else(|| ParseError::new("missing field \"n\""))?;
    match n.as_u64() {
        Some(n) if (1..=MAX_PLAYERS as u64).contains(&n) => Ok(n as usize),
        _ => Err(ctx.err("n", format!("must be an integer in 1..={MAX_PLAYERS}"))),
    }
}

/// `"p/q"` or `"k"`, given as a JSON string.
pub(crate) fn rational_value(ctx: Ctx, key: &str, v: &Value) -> Result<Rational, ParseError> {
    let s = v.as_str().ok_or_else(|| ctx.err(key, "worth must be a string such as \"3/2\" or \"-4\""))?;
    parse_rational(s).ok_or_else(|| ctx.err(key, format!("\"{s}\" is not a rational number")))
}

/// Parses a coalition key: `""` is the empty set, otherwise comma-separated,
/// strictly ascending player indices in `1..=n`.
pub(crate) fn coalition_key(ctx: Ctx, key: &str, n: usize) -> Result<Coalition, ParseError> {
    if key.is_empty() || key == "∅" {
        return Ok(Coalition::EMPTY);
    }
    let mut players = Vec::new();
    for part in key.split(',') {
        let ok = !part.is_empty() && part.bytes().all(|b| b.is_ascii_digit()) && !part.starts_with('0');
        let p: usize = if ok { part.parse().unwrap_or(0) } else { 0 };
        if p == 0 {
            return Err(ctx.err(key, format!("\"{part}\" is not a player index")));
        }
        if p > n {
            return Err(ctx.err(key, format!("player {p} is outside 1..={n}")));
        }
        if players.last().is_some_and(|&q| q >= p) {
            return Err(ctx.err(key, "player indices must be strictly ascending"));
        }
        players.push(p);
    }
    Ok(Coalition::from_players(players))
}

/// Coalition table: unlisted coalitions are 0.
fn worth_table(ctx: Ctx, values: &Value, n: usize, allow_empty: bool) -> Result<Vec<Rational>, InputError> {
    let obj = object(values, "\"values\"")?;
    let mut table = vec![Rational::default(); 1 << n];
    for (key, v) in obj {
        let a = coalition_key(ctx, key, n)?;
        let worth = rational_value(ctx, key, v)?;
        if a.is_empty() && !allow_empty {
            if worth != Rational::default() {
                return Err(InputError::Invariant(format!("the empty coalition has worth {worth}, not 0")));
            }
            return Err(ctx.err(key, "the empty coalition is implicit and may not be listed").into());
        }
        table[a.index()] = worth;
    }
    Ok(table)
}

/// A game document `{"n": .., "values": {..}}` already parsed as JSON.
pub fn game_from_value(v: &Value) -> Result<Game, InputError> {
    game_from(Ctx(None), v)
}

fn game_from(ctx: Ctx, v: &Value) -> Result<Game, InputError> {
    let obj = object(v, "a game document")?;
    only_fields(ctx, obj, &["n", "values"])?;
    let n = player_count(ctx, obj)?;
    let values = obj.get("values").ok_or_else(|| ParseError::new("missing field \"values\""))?;
    let table = worth_table(ctx, values, n, false)?;
    Ok(Game::from_table(n, table).expect("table has 2^n entries and v(∅) = 0"))
}

/// Same layout as a game, but the empty coalition (key `""`) may be nonzero.
pub fn set_function_from_value(v: &Value) -> Result<SetFunction, InputError> {
    let ctx = Ctx(None);
    let obj = object(v, "a set function")?;
    only_fields(ctx, obj, &["n", "values"])?;
    let n = player_count(ctx, obj)?;
    let values = obj.get("values").ok_or_else(|| ParseError::new("missing field \"values\""))?;
    let table = worth_table(ctx, values, n, true)?;
    Ok(SetFunction::from_table(n, table).expect("table has 2^n entries"))
}

pub fn parse_game_str(text: &str) -> Result<Game, InputError> {
    game_from(Ctx(Some(text)), &parse_json(text)?)
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn parse_game(path: &Path) -> Result<Game, CliError> {
    parse_game_str(&read(path)?).map_err(|e| CliError::input(path, e))
}

/// `{"n": 3, "players": {"1": {"": "1/3", "2": "1/6", ..}, ..}}`: for each
/// player a distribution over coalitions not containing it.
pub fn parse_weights_str(text: &str) -> Result<ProbabilisticWeights, InputError> {
    let ctx = Ctx(Some(text));
    let doc = parse_json(text)?;
    let obj = object(&doc, "a weights document")?;
    only_fields(ctx, obj, &["n", "players"])?;
    let n = player_count(ctx, obj)?;
    let players = obj.get("players").ok_or_else(|| ParseError::new("missing field \"players\""))?;
    let players = object(players, "\"players\"")?;
    let mut tables: Vec<Option<Vec<Rational>>> = vec![None; n];
    for (key, table) in players {
        let who = coalition_key(ctx, key, n)?;
        if who.len() != 1 {
            return Err(ctx.err(key, "expected a single player index").into());
        }
        tables[who.min_player().unwrap() - 1] = Some(worth_table(ctx, table, n, true)?);
    }
    let tables = tables
        .into_iter()
        .enumerate()
        .map(|(i, t)| t.ok_or_else(|| ParseError::new(format!("no weights for player {}", i + 1))))
        .collect::<Result<Vec<_>, _>>()?;
    ProbabilisticWeights::new(n, tables).map_err(|e| InputError::Invariant(e.to_string()))
}

pub fn parse_weights(path: &Path) -> Result<ProbabilisticWeights, CliError> {
    parse_weights_str(&read(path)?).map_err(|e| CliError::input(path, e))
}

fn constraint_rows(ctx: Ctx, obj: &Map<String, Value>, field: &str, n: usize) -> Result<Vec<Constraint>, ParseError> {
    let Some(rows) = obj.get(field) else { return Ok(Vec::new()) };
    let rows = rows.as_array().ok_or_else(|| ctx.err(field, "must be an array of rows"))?;
    rows.iter()
        .enumerate()
        .map(|(r, row)| {
            let entries = row.as_array().filter(|e| e.len() == n + 1).ok_or_else(|| {
                ctx.err(field, format!("row {r} must hold {} rational strings: coefficients, then the bound", n + 1))
            })?;
            let mut nums = entries.iter().map(|e| rational_value(ctx, field, e)).collect::<Result<Vec<_>, _>>()?;
            let rhs = nums.pop().unwrap();
            Ok(Constraint::new(nums, rhs))
        })
        .collect()
}

/// `{"n": 3, "inequalities": [[a1, a2, a3, b], ..], "equalities": [..]}` with
/// rows meaning `a · x ≥ b` and `a · x = b`.
pub fn parse_kset_str(text: &str) -> Result<HPolytope, InputError> {
    let ctx = Ctx(Some(text));
    let doc = parse_json(text)?;
    let obj = object(&doc, "a K-set document")?;
    only_fields(ctx, obj, &["n", "inequalities", "equalities"])?;
    let n = player_count(ctx, obj)?;
    let ineqs = constraint_rows(ctx, obj, "inequalities", n)?;
    let eqs = constraint_rows(ctx, obj, "equalities", n)?;
    Ok(HPolytope::from_constraints(n, ineqs, eqs).expect("rows have length n"))
}

pub fn parse_kset(path: &Path) -> Result<HPolytope, CliError> {
    parse_kset_str(&read(path)?).map_err(|e| CliError::input(path, e))
}

/// Every `*.json` game file in `dir`, in file-name order.
pub fn parse_basis_dir(dir: &Path) -> Result<Vec<(PathBuf, Game)>, CliError> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CliError::io(dir, e))?
        .map(|entry| entry.map(|e| e.path()).map_err(|e| CliError::io(dir, e)))
        .collect::<Result<Vec<_>, _>>()?;
    paths.retain(|p| p.extension().is_some_and(|e| e == "json"));
    paths.sort();
    paths.into_iter().map(|p| parse_game(&p).map(|g| (p, g))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use tucoop::rational::{int, rat};

    #[test]
    fn unlisted_coalitions_are_zero() {
        let g = parse_game_str(r#"{"n":3, "values":{"1,2":"1"}}"#).unwrap();
        let listed = Coalition::from_players([1, 2]);
        for a in tucoop::coalitions(3) {
            assert_eq!(g.value(a), &int((a == listed) as i64));
        }
        let u12 = r#"{"n":3, "values":{"1,2":"1", "1,2,3":"1"}}"#;
        assert_eq!(parse_game_str(u12).unwrap(), Game::unanimity(3, listed).unwrap());
    }

    #[test]
    fn direct_table() {
        let g = parse_game_str(r#"{"n":2, "values":{"1":"1/2","1,2":"3/2"}}"#).unwrap();
        assert_eq!(g.values(), &[int(0), rat(1, 2), int(0), rat(3, 2)]);
    }

    #[test]
    fn rejects_non_ascending_key() {
        let err = parse_game_str("{\"n\":2,\n \"values\":{\"2,1\":\"1\"}}").unwrap_err();
        let InputError::Parse(p) = err else { panic!("{err:?}") };
        assert_eq!((p.line, p.key.as_deref()), (Some(2), Some("2,1")));
    }

    #[test]
    fn rejects_malformed_documents() {
        for text in [
            r#"{"n":2, "values":{"1":"1", "1":"2"}}"#,
            r#"{"n":2, "values":{"1":1.5}}"#,
            r#"{"n":2, "values":{"3":"1"}}"#,
            r#"{"n":2, "values":{"1, 2":"1"}}"#,
            r#"{"n":2, "values":{"01":"1"}}"#,
            r#"{"n":2, "values":{"":"0"}}"#,
            r#"{"n":0, "values":{}}"#,
            r#"{"n":2}"#,
            r#"{"n":2, "values":{}, "extra":1}"#,
            r#"{"n":2, "values":{"1":"1/0"}}"#,
            r#"{"n":2, "values":"#,
        ] {
            assert!(matches!(parse_game_str(text), Err(InputError::Parse(_))), "{text}");
        }
    }

    #[test]
    fn nonzero_empty_set_is_an_invariant_violation() {
        let err = parse_game_str(r#"{"n":2, "values":{"":"1"}}"#).unwrap_err();
        assert!(matches!(err, InputError::Invariant(_)));
    }

    #[test]
    fn syntax_errors_carry_lines() {
        let InputError::Parse(p) = parse_game_str("{\n\"n\": 2,\n\"values\": {,}}").unwrap_err() else { panic!() };
        assert_eq!(p.line, Some(3));
    }

    #[test]
    fn weights_and_kset() {
        let w = parse_weights_str(r#"{"n":2, "players":{"1":{"":"1/2","2":"1/2"}, "2":{"1":"1"}}}"#).unwrap();
        assert_eq!(w.weight(2, Coalition::singleton(1)), &int(1));
        assert!(parse_weights_str(r#"{"n":2, "players":{"1":{"":"1"}}}"#).is_err());
        assert!(matches!(
            parse_weights_str(r#"{"n":2, "players":{"1":{"":"1/2"}, "2":{"":"1"}}}"#),
            Err(InputError::Invariant(_))
        ));
        let k = parse_kset_str(r#"{"n":2, "inequalities":[["1","0","0"]], "equalities":[["1","1","3"]]}"#).unwrap();
        assert!(k.contains(&[int(1), int(2)]) && !k.contains(&[int(-1), int(4)]));
        assert!(parse_kset_str(r#"{"n":2, "inequalities":[["1","0"]]}"#).is_err());
    }
}
