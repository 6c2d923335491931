//! Infrasonic search.
//!
//! Every agent broadcasts a "sound power" derived from its rank-normalised
//! fitness. Heard at distance `r`, that power is attenuated by the square of
//! the spherical area `4πr²`. Each agent moves relative to the neighbour it
//! hears loudest, by a fitness-dependent percentage of the vector between
//! them, plus a randomly faded share of its previous movement.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objective::{Bounds, Direction, Objective};

/// Which way the displacement vector points.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignMode {
    /// `(V_j − V_i)·per/100`: the agent moves towards its target.
    #[default]
    Attract,
    /// `(V_i − V_j)·per/100` as the update is usually printed. Added to
    /// `V_i` this moves the agent away from its target.
    Literal,
}

/// Which neighbours an agent may pick as its target.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetRule {
    /// Loudest neighbour among those with strictly more power than the
    /// agent itself; the loudest agent falls back to [`TargetRule::Any`].
    #[default]
    Louder,
    /// Loudest neighbour overall. Intensity falls off as `1/r⁴`, so this is
    /// usually the nearest agent, and mutual nearest neighbours end up
    /// co-located and stop moving.
    Any,
}

pub const DEFAULT_EPSILON_R: f64 = 1e-12;
pub const DEFAULT_RHO: f64 = 50.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsaParams {
    /// Attraction strength in percent, `0..=100`.
    pub rho: f64,
    pub population_size: usize,
    pub iterations: usize,
    pub seed: u64,
    pub sign_mode: SignMode,
    pub target_rule: TargetRule,
    /// Added to `r²` so co-located agents have a finite intensity.
    pub epsilon_r: f64,
}

impl Default for IsaParams {
    fn default() -> Self {
        IsaParams {
            rho: DEFAULT_RHO,
            population_size: 50,
            iterations: 1000,
            seed: 42,
            sign_mode: SignMode::Attract,
            target_rule: TargetRule::Louder,
            epsilon_r: DEFAULT_EPSILON_R,
        }
    }
}

impl IsaParams {
    /// Defaults with population and iteration budget taken from the objective.
    pub fn for_objective(objective: &Objective) -> Self {
        let defaults = objective.spec().defaults;
        IsaParams {
            population_size: defaults.population,
            iterations: defaults.iterations,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=100.0).contains(&self.rho) {
            return Err(Error::invalid(format!(
                "rho must lie in [0, 100], got {}",
                self.rho
            )));
        }
        if self.population_size < 2 {
            return Err(Error::invalid("population size must be at least 2"));
        }
        if self.iterations == 0 {
            return Err(Error::invalid("iterations must be positive"));
        }
        if !(self.epsilon_r > 0.0 && self.epsilon_r.is_finite()) {
            return Err(Error::invalid("epsilon_r must be a positive finite number"));
        }
        Ok(())
    }
}

/// Normalised sound power of every agent.
///
/// `p_i = (f_i − worst)/(best − worst)` followed by `P_i = p_i / Σp`. When
/// every fitness is equal the powers are uniform.
pub fn normalized_powers(fitnesses: &[f64], direction: Direction) -> Vec<f64> {
    let n = fitnesses.len();
    let (lo, hi) = fitnesses
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &f| {
            (lo.min(f), hi.max(f))
        });
    let (best, worst) = match direction {
        Direction::Minimise => (lo, hi),
        Direction::Maximise => (hi, lo),
    };
    if best == worst {
        return vec![1.0 / n as f64; n];
    }
    let span = best - worst;
    let raw: Vec<f64> = fitnesses.iter().map(|f| (f - worst) / span).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|p| p / total).collect()
}

/// Intensity heard at distance `distance` from a source of power `power`:
/// `P / A²` with `A = 4π(r² + ε)`.
pub fn sound_intensity(power: f64, distance: f64, epsilon_r: f64) -> f64 {
    intensity_sq(power, distance * distance, epsilon_r)
}

#[inline]
fn intensity_sq(power: f64, distance_sq: f64, epsilon_r: f64) -> f64 {
    let area = 4.0 * PI * (distance_sq + epsilon_r);
    power / (area * area)
}

#[inline]
fn distance_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// The neighbour agent `i` hears loudest, over every other agent. Ties go
/// to the lowest index.
pub fn select_target(i: usize, positions: &[Vec<f64>], powers: &[f64], epsilon_r: f64) -> usize {
    let mut evaluations = 0;
    select_target_counted(
        i,
        positions,
        powers,
        epsilon_r,
        TargetRule::Any,
        &mut evaluations,
    )
}

/// The loudest neighbour with strictly more power than agent `i`, or
/// [`select_target`] when no neighbour is more powerful.
pub fn select_louder_target(
    i: usize,
    positions: &[Vec<f64>],
    powers: &[f64],
    epsilon_r: f64,
) -> usize {
    let mut evaluations = 0;
    select_target_counted(
        i,
        positions,
        powers,
        epsilon_r,
        TargetRule::Louder,
        &mut evaluations,
    )
}

pub fn select_target_with(
    rule: TargetRule,
    i: usize,
    positions: &[Vec<f64>],
    powers: &[f64],
    epsilon_r: f64,
) -> usize {
    let mut evaluations = 0;
    select_target_counted(i, positions, powers, epsilon_r, rule, &mut evaluations)
}

// Every neighbour's intensity is computed under both rules, so one call
// costs exactly n - 1 evaluations.
fn select_target_counted(
    i: usize,
    positions: &[Vec<f64>],
    powers: &[f64],
    epsilon_r: f64,
    rule: TargetRule,
    evaluations: &mut u64,
) -> usize {
    assert!(positions.len() >= 2, "need at least two agents");
    assert_eq!(positions.len(), powers.len());
    let here = &positions[i];
    let own = powers[i];
    let mut any: Option<(usize, f64)> = None;
    let mut louder: Option<(usize, f64)> = None;
    for (k, (pos, &power)) in positions.iter().zip(powers).enumerate() {
        if k == i {
            continue;
        }
        let intensity = intensity_sq(power, distance_sq(here, pos), epsilon_r);
        *evaluations += 1;
        keep_loudest(&mut any, k, intensity);
        if power > own {
            keep_loudest(&mut louder, k, intensity);
        }
    }
    let pick = match rule {
        TargetRule::Any => any,
        TargetRule::Louder => louder.or(any),
    };
    pick.map(|(k, _)| k).expect("population has another agent")
}

#[inline]
fn keep_loudest(slot: &mut Option<(usize, f64)>, k: usize, intensity: f64) {
    match slot {
        Some((_, loudest)) if intensity <= *loudest => {}
        _ => *slot = Some((k, intensity)),
    }
}

/// Percentage of the separation vector to move by.
///
/// When either fitness is `≤ 0` both are shifted by `1 − min(f_i, f_j)` so
/// the ratio stays in `(0, 1]`. The result lies in `[0, 2ρ)`.
pub fn attraction_percentage(
    fitness_i: f64,
    fitness_j: f64,
    direction: Direction,
    rho: f64,
    u: f64,
) -> f64 {
    let lowest = fitness_i.min(fitness_j);
    let shift = if lowest <= 0.0 { 1.0 - lowest } else { 0.0 };
    let (fi, fj) = (fitness_i + shift, fitness_j + shift);
    let numerator = match direction {
        Direction::Minimise => fj,
        Direction::Maximise => fi,
    };
    (numerator / fi.max(fj) + u) * rho
}

pub fn displacement(vi: &[f64], vj: &[f64], per: f64, mode: SignMode) -> Result<Vec<f64>> {
    if vi.len() != vj.len() {
        return Err(Error::invalid(format!(
            "displacement between vectors of length {} and {}",
            vi.len(),
            vj.len()
        )));
    }
    let scale = per / 100.0;
    Ok(vi
        .iter()
        .zip(vj)
        .map(|(a, b)| match mode {
            SignMode::Attract => (b - a) * scale,
            SignMode::Literal => (a - b) * scale,
        })
        .collect())
}

/// `movement = previous·u + displacement`, with one scalar `u` for the whole vector.
pub fn update_movement(previous: &[f64], displacement: &[f64], u: f64) -> Vec<f64> {
    assert_eq!(previous.len(), displacement.len());
    previous
        .iter()
        .zip(displacement)
        .map(|(m, d)| m * u + d)
        .collect()
}

pub fn step_position(position: &[f64], movement: &[f64]) -> Vec<f64> {
    assert_eq!(position.len(), movement.len());
    position.iter().zip(movement).map(|(v, m)| v + m).collect()
}

/// Replace every coordinate strictly outside its interval with a uniform
/// draw from that interval. In-bounds coordinates consume no randomness.
pub fn repair<R: Rng + ?Sized>(x: &[f64], bounds: &Bounds, rng: &mut R) -> Vec<f64> {
    let mut out = x.to_vec();
    repair_in_place(&mut out, bounds, rng);
    out
}

pub fn repair_in_place<R: Rng + ?Sized>(x: &mut [f64], bounds: &Bounds, rng: &mut R) {
    assert_eq!(x.len(), bounds.dimension());
    for (v, &(lo, hi)) in x.iter_mut().zip(bounds.intervals()) {
        // NaN also fails the containment test and gets resampled.
        if !(lo..=hi).contains(v) {
            *v = rng.gen_range(lo..=hi);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Agent {
    pub position: Vec<f64>,
    /// Objective value at the position this agent held when the swarm was
    /// last evaluated. `NaN` before the first evaluation.
    pub fitness: f64,
    pub movement: Vec<f64>,
}

/// Population state of one run. [`Swarm::iterate`] performs one full
/// iteration: evaluate, update best, then move every agent synchronously.
///
/// Random draws come from a single stream in a fixed order: objective noise
/// during evaluation (agent order), then per agent the `u` for the
/// percentage, the `u` for the movement fade and any repair draws.
pub struct Swarm<'a> {
    objective: &'a Objective,
    params: IsaParams,
    rng: ChaCha8Rng,
    agents: Vec<Agent>,
    best: Option<(Vec<f64>, f64)>,
    iteration: usize,
    intensity_evaluations: u64,
}

impl<'a> Swarm<'a> {
    pub fn new(objective: &'a Objective, params: &IsaParams) -> Result<Self> {
        params.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let dim = objective.dimension();
        let agents = (0..params.population_size)
            .map(|_| Agent {
                position: objective.bounds().sample(&mut rng),
                fitness: f64::NAN,
                movement: vec![0.0; dim],
            })
            .collect();
        Ok(Swarm {
            objective,
            params: params.clone(),
            rng,
            agents,
            best: None,
            iteration: 0,
            intensity_evaluations: 0,
        })
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn best(&self) -> Option<(&[f64], f64)> {
        self.best.as_ref().map(|(x, f)| (x.as_slice(), *f))
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    /// Total number of pairwise intensity evaluations so far.
    pub fn intensity_evaluations(&self) -> u64 {
        self.intensity_evaluations
    }

    /// One iteration. Returns the best-so-far fitness after the evaluation step.
    pub fn iterate(&mut self) -> Result<f64> {
        let direction = self.objective.direction();
        for agent in &mut self.agents {
            let f = self.objective.evaluate(&agent.position, &mut self.rng)?;
            if f.is_nan() {
                return Err(Error::NonFiniteFitness {
                    function: self.objective.id().to_owned(),
                    value: f,
                    position: agent.position.clone(),
                });
            }
            agent.fitness = f;
            let improves = match &self.best {
                None => true,
                Some((_, best)) => direction.is_better(f, *best),
            };
            if improves {
                self.best = Some((agent.position.clone(), f));
            }
        }

        let fitnesses: Vec<f64> = self.agents.iter().map(|a| a.fitness).collect();
        let powers = normalized_powers(&fitnesses, direction);
        let positions: Vec<Vec<f64>> = self.agents.iter().map(|a| a.position.clone()).collect();
        let IsaParams {
            rho,
            sign_mode,
            target_rule,
            epsilon_r,
            ..
        } = self.params;

        for (i, agent) in self.agents.iter_mut().enumerate() {
            let j = select_target_counted(
                i,
                &positions,
                &powers,
                epsilon_r,
                target_rule,
                &mut self.intensity_evaluations,
            );
            let u_per: f64 = self.rng.gen();
            let per = attraction_percentage(fitnesses[i], fitnesses[j], direction, rho, u_per);
            let disp = displacement(&positions[i], &positions[j], per, sign_mode)?;
            let u_fade: f64 = self.rng.gen();
            agent.movement = update_movement(&agent.movement, &disp, u_fade);
            agent.position = step_position(&positions[i], &agent.movement);
            repair_in_place(&mut agent.position, self.objective.bounds(), &mut self.rng);
        }

        self.iteration += 1;
        Ok(self
            .best
            .as_ref()
            .map(|(_, f)| *f)
            .expect("evaluated at least one agent"))
    }
}

/// Outcome of one seeded optimisation run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub function_id: String,
    pub seed: u64,
    /// `None` for runs that have no ρ (the random-search baseline).
    pub rho: Option<f64>,
    pub best_fitness: f64,
    pub best_position: Vec<f64>,
    /// Best-so-far fitness after each iteration.
    pub trajectory: Vec<f64>,
    #[serde(rename = "elapsed_ms", with = "millis")]
    pub elapsed: Option<Duration>,
}

impl RunRecord {
    /// The same record with timing removed, for byte-stable output.
    pub fn without_timing(mut self) -> Self {
        self.elapsed = None;
        self
    }
}

mod millis {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(d: &Option<Duration>, s: S) -> Result<S::Ok, S::Error> {
        d.map(|d| d.as_secs_f64() * 1e3).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Duration>, D::Error> {
        let ms = Option::<f64>::deserialize(d)?;
        Ok(ms.map(|ms| Duration::from_secs_f64(ms.max(0.0) / 1e3)))
    }
}

pub fn run_isa(objective: &Objective, params: &IsaParams) -> Result<RunRecord> {
    let start = Instant::now();
    let mut swarm = Swarm::new(objective, params)?;
    let mut trajectory = Vec::with_capacity(params.iterations);
    for _ in 0..params.iterations {
        trajectory.push(swarm.iterate()?);
    }
    let (best_position, best_fitness) = swarm.best.take().expect("at least one iteration was run");
    Ok(RunRecord {
        function_id: objective.id().to_owned(),
        seed: params.seed,
        rho: Some(params.rho),
        best_fitness,
        best_position,
        trajectory,
        elapsed: Some(start.elapsed()),
    })
}
