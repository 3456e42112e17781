//! One function per subcommand, each returning the JSON payload.

use std::path::Path;

use clap::ValueEnum;
use serde_json::{json, Value};
use tucoop::classes::classify;
use tucoop::decomposition::{
    core_ws, factor_cone, factor_linear, factor_nucleolus, factor_probabilistic, factor_selectope, factor_weber,
    fan_generator_games, marginal_games, max_decompose, supermodular0_cone, tm0_cone, unanimity_basis,
    AdditiveSolution, CoreSolution, FactorizationRecord, ShapleySolution, SolutionTable,
};
use tucoop::polyhedra::linalg::solve_columns;
use tucoop::polyhedra::{extreme_rays, triangulate_cone, HPolytope, PointedCone, VPolytope};
use tucoop::solutions::{
    core_h, excess_profile, imputation_set, nucleolus, probabilistic_value, selectope, shapley, weber,
    ProbabilisticWeights,
};
use tucoop::{multi_player_coalitions, Error, Game};

use crate::error::CliError;
use crate::input::{parse_basis_dir, parse_game, parse_kset, parse_weights};
use crate::json;

/// Above this many players, polytopes given by vertices are reported without
/// a facet description.
pub const FACETS_MAX_PLAYERS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Concept {
    Core,
    Weber,
    Selectope,
    Shapley,
    Probabilistic,
    Nucleolus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DecompositionScheme {
    ZeroNorm,
    Max,
    Linear,
    Cone,
    Marginal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Diagram {
    Probabilistic,
    Weber,
    Selectope,
    Nucleolus,
    WsCore,
    Cone,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RayClass {
    Tm0,
    Supermodular0,
}

/// The kebab-case name clap uses for a value.
pub fn value_name<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value().expect("no skipped variants").get_name().to_string()
}

fn vertex_set(p: &VPolytope) -> Value {
    let facets = (p.dim() <= FACETS_MAX_PLAYERS && !p.is_empty()).then(|| p.to_h());
    json::polytope(p, facets.as_ref())
}

fn kset_or_imputations(v: &Game, kset: Option<&Path>) -> Result<HPolytope, CliError> {
    match kset {
        Some(p) => parse_kset(p),
        None => Ok(imputation_set(v)),
    }
}

pub fn cmd_classify(path: &Path) -> Result<Value, CliError> {
    let v = parse_game(path)?;
    Ok(json!({ "game": json::game(&v), "classes": json::class_report(&classify(&v)?) }))
}

pub fn cmd_solve(path: &Path, concept: Concept, weights: Option<&Path>, kset: Option<&Path>) -> Result<Value, CliError> {
    let v = parse_game(path)?;
    let body = match concept {
        Concept::Core => {
            let h = core_h(&v);
            let p = h.vertices()?;
            let facets = if p.is_empty() { h.canonical() } else { h.irredundant()? };
            json!({ "empty": p.is_empty(), "polytope": json::polytope(&p, Some(&facets)) })
        }
        Concept::Weber => json!({ "polytope": vertex_set(&weber(&v)?) }),
        Concept::Selectope => json!({ "polytope": vertex_set(&selectope(&v)?) }),
        Concept::Shapley => json!({ "allocation": json::allocation(&shapley(&v)) }),
        Concept::Probabilistic => {
            let path = weights.ok_or_else(|| CliError::Usage("--weights <file> is required for probabilistic".into()))?;
            let p = parse_weights(path)?;
            json!({ "allocation": json::allocation(&probabilistic_value(&v, &p)?) })
        }
        Concept::Nucleolus => {
            let k = kset_or_imputations(&v, kset)?;
            let x = nucleolus(&v, &k)?;
            json!({ "allocation": json::allocation(&x), "excess_profile": json::vector(&excess_profile(&v, &x).0) })
        }
    };
    Ok(json!({ "concept": value_name(&concept), "solution": body }))
}

/// Picks the smaller cone containing the zero-normalized part: totally
/// monotone first, then supermodular.
fn cone_factorization(v: &Game) -> Result<(RayClass, PointedCone, FactorizationRecord), CliError> {
    let n = v.n();
    let x = v.zero_normalize().0.zero_normalized_coords();
    let tm0 = tm0_cone(n)?;
    let (class, cone_h) = if tm0.contains(&x) {
        (RayClass::Tm0, tm0)
    } else {
        let s0 = supermodular0_cone(n)?;
        if !s0.contains(&x) {
            return Err(Error::OutsideCone.into());
        }
        (RayClass::Supermodular0, s0)
    };
    let rays = extreme_rays(&cone_h)?;
    let fan = triangulate_cone(&rays)?;
    let table = SolutionTable::tabulate(&fan_generator_games(n, &fan)?, &CoreSolution)?;
    let record = factor_cone(v, &cone_h, &fan, &table, &AdditiveSolution, &CoreSolution)?;
    Ok((class, rays, record))
}

pub fn cmd_decompose(path: &Path, scheme: DecompositionScheme, basis: Option<&Path>) -> Result<Value, CliError> {
    let v = parse_game(path)?;
    let body = match scheme {
        DecompositionScheme::ZeroNorm => {
            let (zero, additive) = v.zero_normalize();
            json!({
                "zero_normalized": json::game(&zero),
                "additive": json::game(&additive),
                "additive_allocation": json::allocation(&v.singleton_allocation()),
            })
        }
        DecompositionScheme::Max => {
            let parts: Vec<Value> = max_decompose(&v)?
                .iter()
                .map(|(b, g)| json!({ "coalition": b.key(), "game": json::game(g) }))
                .collect();
            json!({ "parts": parts })
        }
        DecompositionScheme::Linear => {
            let (label, games) = match basis {
                Some(dir) => {
                    let files = parse_basis_dir(dir)?;
                    let label = Value::Array(files.iter().map(|(p, _)| json!(p.display().to_string())).collect());
                    (label, files.into_iter().map(|(_, g)| g).collect())
                }
                None => (json!("unanimity"), unanimity_basis(v.n())),
            };
            if games.iter().any(|g| g.n() != v.n()) {
                return Err(Error::MixedPlayerCounts.into());
            }
            let table = SolutionTable::tabulate(&games, &ShapleySolution)?;
            let record = factor_linear(&v, &games, &table, &ShapleySolution)?;
            let columns: Vec<_> = games.iter().map(Game::to_coords).collect();
            let coeffs = solve_columns(&columns, &v.to_coords()).ok_or(Error::NotABasis)?;
            json!({ "basis": label, "coefficients": json::vector(&coeffs), "record": json::factorization(&record) })
        }
        DecompositionScheme::Cone => {
            let (class, rays, record) = cone_factorization(&v)?;
            json!({ "cone": value_name(&class), "rays": rays.len(), "record": json::factorization(&record) })
        }
        DecompositionScheme::Marginal => {
            let parts: Vec<Value> = marginal_games(&v)
                .iter()
                .enumerate()
                .map(|(i, d)| json!({ "player": i + 1, "set_function": json::set_function(d) }))
                .collect();
            json!({ "marginal_games": parts })
        }
    };
    Ok(json!({ "scheme": value_name(&scheme), "decomposition": body }))
}

pub fn cmd_verify(path: &Path, diagram: Diagram, weights: Option<&Path>, kset: Option<&Path>) -> Result<Value, CliError> {
    let v = parse_game(path)?;
    let record = match diagram {
        Diagram::Probabilistic => {
            let p = match weights {
                Some(path) => parse_weights(path)?,
                None => ProbabilisticWeights::shapley(v.n()),
            };
            factor_probabilistic(&v, &p)?
        }
        Diagram::Weber => factor_weber(&v)?,
        Diagram::Selectope => factor_selectope(&v)?,
        Diagram::Nucleolus => factor_nucleolus(&v, &kset_or_imputations(&v, kset)?)?,
        Diagram::WsCore => core_ws(&v)?,
        Diagram::Cone => cone_factorization(&v)?.2,
    };
    Ok(json!({ "diagram": value_name(&diagram), "commutes": record.commutes, "record": json::factorization(&record) }))
}

pub fn cmd_rays(class: RayClass, n: usize) -> Result<Value, CliError> {
    if n < 2 {
        return Err(Error::PlayerCountOutOfRange(n, 2, tucoop::game::MAX_PLAYERS).into());
    }
    let cone_h = match class {
        RayClass::Tm0 => tm0_cone(n)?,
        RayClass::Supermodular0 => supermodular0_cone(n)?,
    };
    let rays = extreme_rays(&cone_h)?;
    let coords: Vec<String> = multi_player_coalitions(n).iter().map(|a| a.key()).collect();
    let list = (0..rays.len())
        .map(|i| {
            let r = rays.generator(i);
            Ok(json!({ "coordinates": json::vector(&r), "game": json::game(&Game::from_zero_normalized_coords(n, &r)?) }))
        })
        .collect::<Result<Vec<Value>, Error>>()?;
    Ok(json!({ "class": value_name(&class), "n": n, "count": rays.len(), "coordinate_order": coords, "rays": list }))
}
