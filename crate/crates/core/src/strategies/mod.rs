//! Cop and robber strategies, and their selection by name.
//!
//! A strategy spec is `name` or `name:key=value,key=value`, e.g.
//! `hall:c=40,seed=7`, `walkweight:r=3`, `greedy:k=2`.

pub mod baselines;
pub mod hall;
pub mod walkweight;

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::game::{CopStrategy, PairedCops, RobberStrategy};
use crate::graph::Graph;
use crate::rng::derive_seed;
use crate::solver::{OptimalCops, OptimalRobber, SolvedGame, SolverBudget};

pub use baselines::{GreedyAvoidRobber, GreedyCops, RandomRobber};
pub use hall::{
    hall_place, min_trap_radius, trap_plan, HallCops, ScheduleRobber, TrapCops, TrapPlan,
};
pub use walkweight::{
    robber_potential, robber_walk_weight_move, WalkWeightConfig, WalkWeightRobber,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategySpec {
    pub name: String,
    pub params: BTreeMap<String, String>,
}

impl StrategySpec {
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let (name, rest) = match text.split_once(':') {
            Some((n, r)) => (n.trim(), Some(r)),
            None => (text, None),
        };
        if name.is_empty() {
            return Err(Error::InvalidParameter("empty strategy name".into()));
        }
        let mut params = BTreeMap::new();
        for part in rest
            .into_iter()
            .flat_map(|r| r.split(','))
            .filter(|p| !p.trim().is_empty())
        {
            let (k, v) = part.split_once('=').ok_or_else(|| {
                Error::InvalidParameter(format!("expected key=value, got `{part}`"))
            })?;
            params.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Self {
            name: name.to_string(),
            params,
        })
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.params
            .get(key)
            .map(|v| {
                v.parse::<T>().map_err(|e| {
                    Error::InvalidParameter(format!("{}: bad `{key}` value `{v}`: {e}", self.name))
                })
            })
            .transpose()
    }

    fn reject_unknown(&self, allowed: &[&str]) -> Result<()> {
        match self.params.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(Error::InvalidParameter(format!(
                "{}: unknown parameter `{k}`",
                self.name
            ))),
            None => Ok(()),
        }
    }
}

pub type BoxedCops = Box<dyn CopStrategy + Send>;
pub type BoxedRobber = Box<dyn RobberStrategy + Send>;

/// Builds a cop strategy. `seed` is the per-trial seed; a `seed=` parameter
/// in the spec takes precedence.
///
/// * `greedy:k=K`
/// * `hall:c=C[,seed=S]`
/// * `optimal[:k=K]` (solves the game; `k` defaults to the cop number)
/// * `paired:base=NAME` wrapping greedy or optimal for the always-move game
/// * `area:map=FILE` one cop following a retraction read from a map file
pub fn build_cops(
    spec: &StrategySpec,
    g: &Graph,
    seed: u64,
    budget: &SolverBudget,
) -> Result<BoxedCops> {
    match spec.name.as_str() {
        "greedy" => {
            spec.reject_unknown(&["k"])?;
            Ok(Box::new(GreedyCops::new(spec.get("k")?.unwrap_or(1))))
        }
        "hall" => {
            spec.reject_unknown(&["c", "seed"])?;
            let c = spec
                .get("c")?
                .ok_or_else(|| Error::InvalidParameter("hall: missing `c`".into()))?;
            let seed = spec
                .get("seed")?
                .unwrap_or(derive_seed(seed, "hall-place", 0));
            Ok(Box::new(HallCops::new(c, seed)))
        }
        "optimal" => {
            spec.reject_unknown(&["k", "kmax"])?;
            Ok(Box::new(optimal_cops(
                g,
                spec.get("k")?,
                spec.get("kmax")?,
                budget,
            )?))
        }
        "paired" => {
            spec.reject_unknown(&["base", "k", "kmax"])?;
            let base: String = spec.get("base")?.unwrap_or_else(|| "optimal".into());
            match base.as_str() {
                "greedy" => Ok(Box::new(PairedCops::new(GreedyCops::new(
                    spec.get("k")?.unwrap_or(1),
                )))),
                "optimal" => Ok(Box::new(PairedCops::new(optimal_cops(
                    g,
                    spec.get("k")?,
                    spec.get("kmax")?,
                    budget,
                )?))),
                other => Err(Error::UnknownName(format!("paired base `{other}`"))),
            }
        }
        "area" => {
            spec.reject_unknown(&["map"])?;
            let path: String = spec
                .get("map")?
                .ok_or_else(|| Error::InvalidParameter("area: missing `map`".into()))?;
            let f = crate::retracts::parse_map(&std::fs::read_to_string(path)?, g.n())?;
            Ok(Box::new(crate::retracts::AreaDefenseCops::new(g, f)?))
        }
        other => Err(Error::UnknownName(other.to_string())),
    }
}

/// Number of cops a spec places, when it is known without solving or
/// sampling.
pub fn cop_count_hint(spec: &StrategySpec) -> Option<usize> {
    let k = spec.params.get("k").and_then(|v| v.parse::<usize>().ok());
    match spec.name.as_str() {
        "greedy" => Some(k.unwrap_or(1)),
        "optimal" => k,
        "paired" => k.map(|k| 2 * k),
        "area" => Some(1),
        _ => None,
    }
}

fn optimal_cops(
    g: &Graph,
    k: Option<usize>,
    k_max: Option<usize>,
    budget: &SolverBudget,
) -> Result<OptimalCops> {
    let game = match k {
        Some(k) => SolvedGame::solve(g, k, budget)?,
        None => {
            let k_max = k_max.unwrap_or(4);
            // One cop goes through the solver too, so that the strategy
            // table is available.
            let (k, game) = crate::solver::cop_number_with_game(g, k_max, budget)?;
            match game {
                Some(game) => game,
                None => SolvedGame::solve(g, k, budget)?,
            }
        }
    };
    OptimalCops::new(Arc::new(game))
}

/// Builds a robber strategy. `cop_count` is needed by `optimal`.
///
/// * `random`
/// * `greedy-avoid`
/// * `walkweight:r=R[,d=D][,trials=T]` (region: the `d`-core, default 3)
/// * `optimal[:k=K]` (plays the solved game against `K` cops, default
///   `cop_count`)
pub fn build_robber(
    spec: &StrategySpec,
    g: &Graph,
    seed: u64,
    cop_count: usize,
    budget: &SolverBudget,
) -> Result<BoxedRobber> {
    match spec.name.as_str() {
        "random" => {
            spec.reject_unknown(&["seed"])?;
            Ok(Box::new(RandomRobber::new(
                spec.get("seed")?.unwrap_or(derive_seed(seed, "robber", 0)),
            )))
        }
        "greedy-avoid" => {
            spec.reject_unknown(&[])?;
            Ok(Box::new(GreedyAvoidRobber))
        }
        "walkweight" => {
            spec.reject_unknown(&["r", "d", "trials", "seed"])?;
            let r = spec.get("r")?.unwrap_or(2);
            let d = spec.get("d")?.unwrap_or(3);
            let trials = spec
                .get("trials")?
                .unwrap_or(walkweight::DEFAULT_PLACEMENT_TRIALS);
            let seed = spec.get("seed")?.unwrap_or(derive_seed(seed, "robber", 0));
            // Validate now so a bad config is a spec error, not a silent stay.
            WalkWeightConfig::on_core(g, d, r)?;
            Ok(Box::new(WalkWeightRobber::new(r, d, trials, seed)))
        }
        "optimal" => {
            spec.reject_unknown(&["k"])?;
            let k = spec.get("k")?.unwrap_or(cop_count);
            if k == 0 {
                return Err(Error::InvalidParameter(
                    "optimal robber needs the cop count `k`".into(),
                ));
            }
            Ok(Box::new(OptimalRobber::new(Arc::new(SolvedGame::solve(
                g, k, budget,
            )?))))
        }
        other => Err(Error::UnknownName(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{play, Rules};
    use crate::generators::fixture;

    #[test]
    fn parse_specs() {
        let s = StrategySpec::parse("hall:c=40,seed=7").unwrap();
        assert_eq!(s.name, "hall");
        assert_eq!(s.params["c"], "40");
        assert_eq!(StrategySpec::parse("random").unwrap().params.len(), 0);
        assert!(StrategySpec::parse("hall:c").is_err());
        assert!(StrategySpec::parse("").is_err());
    }

    #[test]
    fn build_and_play() {
        let g = fixture("petersen").unwrap();
        let budget = SolverBudget::default();
        let mut cops =
            build_cops(&StrategySpec::parse("optimal").unwrap(), &g, 1, &budget).unwrap();
        let mut robber =
            build_robber(&StrategySpec::parse("random").unwrap(), &g, 1, 3, &budget).unwrap();
        let t = play(&g, &mut cops, &mut robber, &Rules::for_graph(&g));
        assert!(t.outcome.caught());
        assert!(build_cops(&StrategySpec::parse("nope").unwrap(), &g, 1, &budget).is_err());
        assert!(build_cops(&StrategySpec::parse("greedy:q=1").unwrap(), &g, 1, &budget).is_err());
        assert!(build_robber(
            &StrategySpec::parse("walkweight:r=1").unwrap(),
            &g,
            1,
            1,
            &budget
        )
        .is_err());
    }
}
