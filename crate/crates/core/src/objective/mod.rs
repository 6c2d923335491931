//! Objective functions: the box-bounded problem description, the 23 builtin
//! benchmarks and a registry that lets callers add their own functions.

mod benchmarks;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use benchmarks::Benchmark;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Minimise,
    Maximise,
}

impl Direction {
    /// `true` when `a` is strictly better than `b`.
    #[inline]
    pub fn is_better(self, a: f64, b: f64) -> bool {
        match self {
            Direction::Minimise => a < b,
            Direction::Maximise => a > b,
        }
    }
}

/// Closed per-dimension box `[lower, upper]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct Bounds {
    intervals: Vec<(f64, f64)>,
}

impl Bounds {
    pub fn new(intervals: Vec<(f64, f64)>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::invalid("bounds must have at least one dimension"));
        }
        for (d, &(lo, hi)) in intervals.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite()) {
                return Err(Error::invalid(format!(
                    "dimension {d}: bounds must be finite"
                )));
            }
            if lo >= hi {
                return Err(Error::invalid(format!(
                    "dimension {d}: lower bound {lo} is not below upper bound {hi}"
                )));
            }
        }
        Ok(Bounds { intervals })
    }

    /// The same interval repeated in every dimension.
    pub fn uniform(lower: f64, upper: f64, dimension: usize) -> Result<Self> {
        Self::new(vec![(lower, upper); dimension])
    }

    pub fn dimension(&self) -> usize {
        self.intervals.len()
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn lower(&self, d: usize) -> f64 {
        self.intervals[d].0
    }

    pub fn upper(&self, d: usize) -> f64 {
        self.intervals[d].1
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dimension()
            && x.iter()
                .zip(&self.intervals)
                .all(|(v, &(lo, hi))| (lo..=hi).contains(v))
    }

    /// A point drawn uniformly from the box, one draw per coordinate in order.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.intervals
            .iter()
            .map(|&(lo, hi)| rng.gen_range(lo..=hi))
            .collect()
    }
}

impl TryFrom<Vec<(f64, f64)>> for Bounds {
    type Error = Error;

    fn try_from(intervals: Vec<(f64, f64)>) -> Result<Self> {
        Bounds::new(intervals)
    }
}

impl From<Bounds> for Vec<(f64, f64)> {
    fn from(b: Bounds) -> Self {
        b.intervals
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Defaults {
    pub population: usize,
    pub iterations: usize,
}

/// Everything the optimiser and harness need to know about a function
/// besides how to evaluate it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveSpec {
    pub id: String,
    pub dimension: usize,
    pub bounds: Bounds,
    pub direction: Direction,
    pub defaults: Defaults,
    pub known_optimum: Option<f64>,
}

impl ObjectiveSpec {
    pub fn validate(&self) -> Result<()> {
        if self.id.trim().is_empty() {
            return Err(Error::invalid("function id must not be empty"));
        }
        if self.dimension == 0 {
            return Err(Error::invalid(format!(
                "{}: dimension must be positive",
                self.id
            )));
        }
        if self.bounds.dimension() != self.dimension {
            return Err(Error::invalid(format!(
                "{}: {} bounds given for dimension {}",
                self.id,
                self.bounds.dimension(),
                self.dimension
            )));
        }
        if self.defaults.population == 0 || self.defaults.iterations == 0 {
            return Err(Error::invalid(format!(
                "{}: default population and iterations must be positive",
                self.id
            )));
        }
        Ok(())
    }
}

/// Evaluation callback. The RNG stream is only consumed by stochastic
/// objectives (F7 among the builtins).
pub type EvalFn = Arc<dyn Fn(&[f64], &mut dyn RngCore) -> f64 + Send + Sync>;

/// A function together with its spec.
#[derive(Clone)]
pub struct Objective {
    spec: ObjectiveSpec,
    eval: EvalFn,
}

impl Objective {
    pub fn new(spec: ObjectiveSpec, eval: EvalFn) -> Result<Self> {
        spec.validate()?;
        Ok(Objective { spec, eval })
    }

    /// Convenience constructor for deterministic functions.
    pub fn from_fn<F>(spec: ObjectiveSpec, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self::new(spec, Arc::new(move |x: &[f64], _: &mut dyn RngCore| f(x)))
    }

    pub fn spec(&self) -> &ObjectiveSpec {
        &self.spec
    }

    pub fn id(&self) -> &str {
        &self.spec.id
    }

    pub fn dimension(&self) -> usize {
        self.spec.dimension
    }

    pub fn direction(&self) -> Direction {
        self.spec.direction
    }

    pub fn bounds(&self) -> &Bounds {
        &self.spec.bounds
    }

    pub fn evaluate(&self, x: &[f64], rng: &mut dyn RngCore) -> Result<f64> {
        if x.len() != self.spec.dimension {
            return Err(Error::invalid(format!(
                "{} expects {} coordinates, got {}",
                self.spec.id,
                self.spec.dimension,
                x.len()
            )));
        }
        Ok((self.eval)(x, rng))
    }
}

impl fmt::Debug for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Objective")
            .field("spec", &self.spec)
            .finish_non_exhaustive()
    }
}

impl From<Benchmark> for Objective {
    fn from(b: Benchmark) -> Self {
        Objective {
            spec: b.spec(),
            eval: Arc::new(move |x: &[f64], rng: &mut dyn RngCore| b.evaluate_unchecked(x, rng)),
        }
    }
}

/// Lookup table of every addressable function: the builtins followed by
/// user registrations, in insertion order.
#[derive(Clone, Debug)]
pub struct Registry {
    entries: Vec<Objective>,
}

impl Default for Registry {
    fn default() -> Self {
        Self::new()
    }
}

impl Registry {
    /// A registry holding F1..F23.
    pub fn new() -> Self {
        Registry {
            entries: Benchmark::ALL.iter().map(|&b| Objective::from(b)).collect(),
        }
    }

    pub fn register(&mut self, spec: ObjectiveSpec, eval: EvalFn) -> Result<String> {
        let objective = Objective::new(spec, eval)?;
        self.insert(objective)
    }

    pub fn register_fn<F>(&mut self, spec: ObjectiveSpec, f: F) -> Result<String>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        let objective = Objective::from_fn(spec, f)?;
        self.insert(objective)
    }

    fn insert(&mut self, objective: Objective) -> Result<String> {
        if self.find(objective.id()).is_some() {
            return Err(Error::Conflict(format!(
                "function `{}` is already registered",
                objective.id()
            )));
        }
        let id = objective.id().to_owned();
        self.entries.push(objective);
        Ok(id)
    }

    fn find(&self, id: &str) -> Option<&Objective> {
        self.entries
            .iter()
            .find(|o| o.id().eq_ignore_ascii_case(id))
    }

    pub fn get(&self, id: &str) -> Result<&Objective> {
        self.find(id).ok_or_else(|| Error::NotFound(id.to_owned()))
    }

    pub fn spec_of(&self, id: &str) -> Result<&ObjectiveSpec> {
        self.get(id).map(Objective::spec)
    }

    pub fn evaluate(&self, id: &str, x: &[f64], rng: &mut dyn RngCore) -> Result<f64> {
        self.get(id)?.evaluate(x, rng)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Objective> {
        self.entries.iter()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(Objective::id)
    }

    /// Resolve `all` or a comma separated list of ids, keeping the given order.
    pub fn select(&self, selector: &str) -> Result<Vec<&Objective>> {
        let selector = selector.trim();
        if selector.eq_ignore_ascii_case("all") {
            return Ok(self.entries.iter().collect());
        }
        let picked = selector
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|id| self.get(id))
            .collect::<Result<Vec<_>>>()?;
        if picked.is_empty() {
            return Err(Error::invalid("empty function selector"));
        }
        Ok(picked)
    }

    /// JSON array describing every registered function.
    pub fn catalog_json(&self) -> Result<String> {
        let specs: Vec<&ObjectiveSpec> = self.entries.iter().map(Objective::spec).collect();
        Ok(serde_json::to_string_pretty(&specs)?)
    }
}

impl FromStr for Benchmark {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Benchmark::ALL
            .iter()
            .copied()
            .find(|b| b.id().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::NotFound(s.to_owned()))
    }
}

impl fmt::Display for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}
