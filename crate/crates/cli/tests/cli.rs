use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use proptest::prelude::*;
use serde_json::{json, Value};
use tempfile::TempDir;
use tucoop::rational::{int, rat};
use tucoop::{nonempty_coalitions, Coalition, Game};
use tucoop_cli::input::{game_from_value, parse_game_str};
use tucoop_cli::json::{decode_polytope, decode_vector, game};
use tucoop_cli::{run, Outcome, ResultDocument};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn tucoop(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("tucoop").chain(args.iter().copied()), &mut out, &mut err);
    Run { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn result(r: &Run) -> Value {
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    match ResultDocument::parse(&r.stdout).unwrap().outcome {
        Outcome::Ok(v) => v,
        e => panic!("{e:?}"),
    }
}

fn error_code(r: &Run) -> String {
    match ResultDocument::parse(&r.stdout).unwrap().outcome {
        Outcome::Error { code, exit_code, .. } => {
            assert_eq!(exit_code, r.code);
            code
        }
        o => panic!("expected an error, got {o:?}"),
    }
}

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p
}

fn write_game(dir: &Path, name: &str, v: &Game) -> String {
    write(dir, name, &game(v)).display().to_string()
}

/// Nonnegative dividends plus an additive part: weakly superadditive.
fn ws_game(seed: u64) -> Game {
    let mut s = seed;
    let mut next = move || {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (s >> 33) as i64
    };
    let n = 3;
    let dividends: Vec<(Coalition, i64)> = nonempty_coalitions(n).into_iter().map(|a| (a, next() % 7)).collect();
    Game::from_fn(n, |b| {
        let mut w = int(0);
        for (a, d) in &dividends {
            if a.is_subset_of(b) {
                w += if a.len() == 1 { int(*d - 3) } else { rat(*d, 2) };
            }
        }
        w
    })
}

#[test]
fn core_of_grand_unanimity_is_the_simplex() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "uN.json", &json!({"n": 3, "values": {"1,2,3": "1"}}));
    let r = result(&tucoop(&["solve", "--concept", "core", f.to_str().unwrap()]));
    let vertices = r["solution"]["polytope"]["vertices"].clone();
    assert_eq!(vertices, json!([["0", "0", "1"], ["0", "1", "0"], ["1", "0", "0"]]));
}

#[test]
fn ws_core_diagram_commutes() {
    let dir = TempDir::new().unwrap();
    for seed in 0..5 {
        let v = ws_game(seed);
        assert!(tucoop::classes::classify(&v).unwrap().weakly_superadditive.holds);
        let f = write_game(dir.path(), &format!("ws{seed}.json"), &v);
        let r = result(&tucoop(&["verify", "--diagram", "ws-core", &f]));
        assert_eq!(r["commutes"], json!(true));
    }
}

#[test]
fn tm0_rays_are_unanimity_games() {
    let r = result(&tucoop(&["rays", "--class", "tm0", "--n", "3"]));
    assert_eq!(r["count"], json!(4));
    let mut got: Vec<Game> = r["rays"].as_array().unwrap().iter().map(|ray| game_from_value(&ray["game"]).unwrap()).collect();
    let mut want: Vec<Game> = tucoop::multi_player_coalitions(3).into_iter().map(|a| Game::unanimity(3, a).unwrap()).collect();
    got.sort_by_key(|g| format!("{g:?}"));
    want.sort_by_key(|g| format!("{g:?}"));
    assert_eq!(got, want);
    let s = result(&tucoop(&["rays", "--class", "supermodular0", "--n", "3"]));
    assert_eq!(s["count"], json!(5));
}

#[test]
fn every_command_runs() {
    let dir = TempDir::new().unwrap();
    let v = ws_game(11);
    let f = write_game(dir.path(), "g.json", &v);
    let w = write(
        dir.path(),
        "w.json",
        &json!({"n": 3, "players": {"1": {"": "1"}, "2": {"1": "1"}, "3": {"1,2": "1"}}}),
    );
    let k = write(
        dir.path(),
        "k.json",
        &json!({"n": 3, "inequalities": [["1","0","0","-100"], ["0","1","0","-100"], ["0","0","1","-100"]],
                "equalities": [["1","1","1", v.worth_of_grand().to_string()]]}),
    );
    let (w, k) = (w.to_str().unwrap(), k.to_str().unwrap());
    for concept in ["core", "weber", "selectope", "shapley", "nucleolus"] {
        result(&tucoop(&["solve", "--concept", concept, &f]));
    }
    let p = result(&tucoop(&["solve", "--concept", "probabilistic", "--weights", w, &f]));
    // all mass on the predecessors of the identity order: the marginal vector
    let want = tucoop::solutions::marginal_vector(&v, &tucoop::solutions::Permutation::identity(3));
    assert_eq!(decode_vector(&p["solution"]["allocation"]).unwrap(), want.0);
    result(&tucoop(&["solve", "--concept", "nucleolus", "--kset", k, &f]));
    for scheme in ["zero-norm", "max", "linear", "cone", "marginal"] {
        let r = tucoop(&["decompose", "--scheme", scheme, &f]);
        if scheme == "max" && !tucoop::classes::classify(&v).unwrap().zero_monotone.holds {
            assert_eq!(r.code, 2);
            continue;
        }
        result(&r);
    }
    for diagram in ["probabilistic", "weber", "selectope", "nucleolus", "ws-core", "cone"] {
        let r = result(&tucoop(&["verify", "--diagram", diagram, &f]));
        assert_eq!(r["commutes"], json!(true), "{diagram}");
    }
    let r = result(&tucoop(&["verify", "--diagram", "probabilistic", "--weights", w, &f]));
    assert_eq!(r["commutes"], json!(true));
    let r = result(&tucoop(&["verify", "--diagram", "nucleolus", "--kset", k, &f]));
    assert_eq!(r["commutes"], json!(true));
}

#[test]
fn linear_decomposition_with_basis_dir() {
    let dir = TempDir::new().unwrap();
    let basis = dir.path().join("basis");
    fs::create_dir(&basis).unwrap();
    for (i, a) in nonempty_coalitions(2).into_iter().enumerate() {
        // scaled unanimity games still form a basis
        write_game(&basis, &format!("b{i}.json"), &Game::unanimity(2, a).unwrap().scale(&int(2)));
    }
    let v = Game::from_table(2, vec![int(0), int(1), int(3), int(10)]).unwrap();
    let f = write_game(dir.path(), "g.json", &v);
    let r = result(&tucoop(&["decompose", "--scheme", "linear", "--basis", basis.to_str().unwrap(), &f]));
    let d = &r["decomposition"];
    assert_eq!(decode_vector(&d["coefficients"]).unwrap(), vec![rat(1, 2), rat(3, 2), int(3)]);
    assert_eq!(d["record"]["commutes"], json!(true));

    fs::remove_file(basis.join("b2.json")).unwrap();
    let r = tucoop(&["decompose", "--scheme", "linear", "--basis", basis.to_str().unwrap(), &f]);
    assert_eq!((r.code, error_code(&r).as_str()), (2, "NotABasis"));
}

#[test]
fn cone_decomposition_picks_the_cone() {
    let dir = TempDir::new().unwrap();
    let tm = Game::unanimity(3, Coalition::from_players([1, 2])).unwrap();
    // supermodular but not totally monotone: negative dividend on N
    let s = Game::from_fn(3, |a| match a.len() {
        2 => int(1),
        3 => int(2),
        _ => int(0),
    });
    let not_s = Game::from_fn(3, |a| if a.len() >= 2 { int(1) } else { int(0) });
    for (name, v, cone) in [("tm", &tm, Some("tm0")), ("s", &s, Some("supermodular0")), ("x", &not_s, None)] {
        let f = write_game(dir.path(), &format!("{name}.json"), v);
        let r = tucoop(&["decompose", "--scheme", "cone", &f]);
        match cone {
            Some(c) => {
                let d = result(&r)["decomposition"].clone();
                assert_eq!(d["cone"], json!(c));
                assert_eq!(d["record"]["commutes"], json!(true));
            }
            None => assert_eq!((r.code, error_code(&r).as_str()), (2, "OutsideCone")),
        }
    }
}

#[test]
fn exit_codes_and_error_documents() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.json", &json!({"n": 2, "values": {"2,1": "1"}}));
    let r = tucoop(&["classify", bad.to_str().unwrap()]);
    assert_eq!((r.code, error_code(&r).as_str()), (1, "ParseError"));
    assert!(r.stderr.contains("\"2,1\""), "{}", r.stderr);

    let empty = write(dir.path(), "empty.json", &json!({"n": 2, "values": {"": "1"}}));
    let r = tucoop(&["classify", empty.to_str().unwrap()]);
    assert_eq!((r.code, error_code(&r).as_str()), (1, "InvariantViolation"));

    let r = tucoop(&["classify", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!((r.code, error_code(&r).as_str()), (1, "IoError"));

    // v({1,2}) < v({1}) + v({2}) is not zero-monotone
    let g = write_game(dir.path(), "g.json", &Game::from_table(2, vec![int(0), int(1), int(1), int(1)]).unwrap());
    let r = tucoop(&["decompose", "--scheme", "max", &g]);
    assert_eq!((r.code, error_code(&r).as_str()), (2, "NotZeroMonotone"));
    let r = tucoop(&["verify", "--diagram", "ws-core", &g]);
    assert_eq!((r.code, error_code(&r).as_str()), (2, "NotWeaklySuperadditive"));
    let r = tucoop(&["solve", "--concept", "probabilistic", &g]);
    assert_eq!((r.code, error_code(&r).as_str()), (1, "UsageError"));

    let r = tucoop(&["solve", "--concept", "bogus", &g]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.is_empty());
    assert_eq!(tucoop(&["--help"]).code, 0);
}

#[test]
fn binary_exit_codes_and_output_flag() {
    let dir = TempDir::new().unwrap();
    let bin = env!("CARGO_BIN_EXE_tucoop");
    let g = write_game(dir.path(), "g.json", &Game::from_table(2, vec![int(0), int(1), int(1), int(1)]).unwrap());
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    assert_eq!(status(&["decompose", "--scheme", "max", &g]).status.code(), Some(2));
    assert_eq!(status(&["classify", "/nonexistent/g.json"]).status.code(), Some(1));
    let out = dir.path().join("out.json");
    let o = status(&["classify", &g, "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(fs::read_to_string(&out).unwrap(), tucoop(&["classify", &g]).stdout);
}

#[test]
fn output_is_deterministic_and_round_trips() {
    let dir = TempDir::new().unwrap();
    let f = write_game(dir.path(), "g.json", &ws_game(3));
    for args in [
        vec!["classify", f.as_str()],
        vec!["solve", "--concept", "selectope", f.as_str()],
        vec!["verify", "--diagram", "nucleolus", f.as_str()],
        vec!["decompose", "--scheme", "marginal", f.as_str()],
    ] {
        let a = tucoop(&args);
        let b = tucoop(&args);
        assert_eq!(a.stdout, b.stdout);
        let doc = ResultDocument::parse(&a.stdout).unwrap();
        assert_eq!(doc.render(), a.stdout);
    }
    let r = result(&tucoop(&["solve", "--concept", "selectope", &f]));
    let p = decode_polytope(&r["solution"]["polytope"]).unwrap();
    assert_eq!(p, tucoop::solutions::selectope(&ws_game(3)).unwrap());
}

#[test]
fn classify_reports_witnesses() {
    let dir = TempDir::new().unwrap();
    let majority = Game::from_fn(3, |a| int((a.len() >= 2) as i64));
    let f = write_game(dir.path(), "maj.json", &majority);
    let r = result(&tucoop(&["classify", &f]));
    let c = &r["classes"];
    assert_eq!(c["balanced"]["holds"], json!(false));
    assert_eq!(c["balanced"]["witness"], json!({"kind": "balanced_weights", "weights": {"1,2": "1/2", "1,3": "1/2", "2,3": "1/2"}}));
    assert_eq!(c["monotone"], json!({"holds": true, "witness": null}));
    assert_eq!(c["implication_violation"], Value::Null);
    assert_eq!(game_from_value(&r["game"]).unwrap(), majority);
}

#[test]
fn canonical_serialization() {
    let messy = "{\"values\": {\"2,3\": \"2/4\", \"1\": \"0\", \"1,2,3\": \"5\", \"3\": \"-1\"}, \"n\": 3}";
    let g = parse_game_str(messy).unwrap();
    let canon = serde_json::to_string(&game(&g)).unwrap();
    assert_eq!(canon, r#"{"n":3,"values":{"3":"-1","2,3":"1/2","1,2,3":"5"}}"#);
    assert_eq!(parse_game_str(&canon).unwrap(), g);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn parser_round_trip(n in 1usize..=5, seed in any::<u64>()) {
        let mut s = seed;
        let v = Game::from_fn(n, |_| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1);
            let x = (s >> 40) as i64;
            if x % 3 == 0 { int(0) } else { rat(x % 201 - 100, x % 97 + 1) }
        });
        let text = serde_json::to_string_pretty(&game(&v)).unwrap();
        let back = parse_game_str(&text).unwrap();
        prop_assert_eq!(&back, &v);
        prop_assert_eq!(serde_json::to_string_pretty(&game(&back)).unwrap(), text);
    }
}
