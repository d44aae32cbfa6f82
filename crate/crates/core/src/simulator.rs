//! Discrete-time orchestration of perception, behavior decisions, tensions
//! and kinematics, with pluggable per-step observers.
//!
//! Every step is a synchronous update: all individuals read the positions,
//! velocities and modes of the previous step, so evaluation order within a
//! step does not matter.

use std::io::Write;
use std::path::PathBuf;

use rand::Rng;

use crate::behavior::{self, BehaviorState, Mode, PerceptionParams};
use crate::contact::{ContactLedger, ContactParams};
use crate::error::{Error, Result};
use crate::graph::{EdgeWeight, SocialGraph};
use crate::kinematics::{self, KinematicState};
use crate::neighbors::{self, NeighborSearch};
use crate::population::{sample_population, Individual, PopulationParams};
use crate::rng::{stage_rng, Stage};
use crate::space::{Position2, SpaceTopology, Vec2};

/// Largest population for which a dense acquaintance matrix is cached.
const DENSE_LIMIT: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub enum GraphSpec {
    Random { mean_degree: f64 },
    ScaleFree { mean_degree: f64 },
    File(PathBuf),
}

impl GraphSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            GraphSpec::Random { .. } => "random",
            GraphSpec::ScaleFree { .. } => "scale_free",
            GraphSpec::File(_) => "file",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub population: PopulationParams,
    pub graph: GraphSpec,
    pub edge_weight: EdgeWeight,
    pub perception: PerceptionParams,
    /// Give every individual its own perception phase.
    pub stagger_perception: bool,
    pub space: SpaceTopology,
    /// Side of the square used for initial placement on the infinite plane.
    pub initial_side: f64,
    /// Time step (s).
    pub dt: f64,
    /// Simulated duration (s).
    pub t_max: f64,
    pub contact: ContactParams,
    pub seed: u64,
    pub neighbor_search: NeighborSearch,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            population: PopulationParams::default(),
            graph: GraphSpec::ScaleFree { mean_degree: 5.0 },
            edge_weight: EdgeWeight::Uniform,
            perception: PerceptionParams::default(),
            stagger_perception: false,
            space: SpaceTopology::PeriodicSquare { side: 200.0 },
            initial_side: 200.0,
            dt: 1.0,
            t_max: 3600.0,
            contact: ContactParams::default(),
            seed: 1,
            neighbor_search: NeighborSearch::Exact,
        }
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.population.validate()?;
        self.perception.validate()?;
        self.contact.validate()?;
        self.edge_weight.validate()?;
        match &self.graph {
            GraphSpec::Random { mean_degree } | GraphSpec::ScaleFree { mean_degree } => {
                if !mean_degree.is_finite() {
                    return Err(Error::param("graph.d", "must be finite"));
                }
            }
            GraphSpec::File(_) => {}
        }
        if let SpaceTopology::PeriodicSquare { side } = self.space {
            SpaceTopology::periodic(side)?;
        }
        if !(self.initial_side.is_finite() && self.initial_side > 0.0) {
            return Err(Error::param(
                "space.init",
                format!("{} must be > 0", self.initial_side),
            ));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::param("dt", format!("{} must be > 0", self.dt)));
        }
        if !(self.t_max.is_finite() && self.t_max >= self.dt) {
            return Err(Error::param(
                "t_max",
                format!("{} must be >= dt ({})", self.t_max, self.dt),
            ));
        }
        self.perception_period()?;
        Ok(())
    }

    /// Number of steps between perception updates.
    pub fn perception_period(&self) -> Result<u64> {
        let ratio = self.perception.half_perception_time / self.dt;
        let k = ratio.round();
        if k < 1.0 || (ratio - k).abs() > 1e-9 * ratio.max(1.0) {
            return Err(Error::param(
                "tau_r",
                format!(
                    "tau_r not a multiple of dt (tau_r = {}, dt = {})",
                    self.perception.half_perception_time, self.dt
                ),
            ));
        }
        Ok(k as u64)
    }

    /// `ceil(t_max / dt)`, tolerant to representation error in the ratio.
    pub fn step_count(&self) -> u64 {
        let ratio = self.t_max / self.dt;
        let nearest = ratio.round();
        if (ratio - nearest).abs() <= 1e-9 * ratio.max(1.0) {
            nearest as u64
        } else {
            ratio.ceil() as u64
        }
    }

    pub fn build_graph(&self) -> Result<SocialGraph> {
        let n = self.population.n;
        let mut rng = stage_rng(self.seed, Stage::Graph);
        let g = match &self.graph {
            GraphSpec::Random { mean_degree } => {
                SocialGraph::generate_random(n, *mean_degree, self.edge_weight, &mut rng)?
            }
            GraphSpec::ScaleFree { mean_degree } => {
                SocialGraph::generate_scale_free(n, *mean_degree, self.edge_weight, &mut rng)?
            }
            GraphSpec::File(path) => SocialGraph::load(path)?,
        };
        if g.node_count() != n {
            return Err(Error::param(
                "graph.file",
                format!("graph has {} nodes but n = {n}", g.node_count()),
            ));
        }
        Ok(g)
    }
}

pub use crate::contact::round_time;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub node: usize,
    pub from: Mode,
    pub to: Mode,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct StepReport {
    pub transitions: Vec<Transition>,
    /// Smallest acceleration limit computed during the step, if any.
    pub min_a_lim: Option<f64>,
    /// Largest `|v| - v_max` after the step.
    pub max_speed_excess: f64,
    /// Largest willingness magnitude during the step.
    pub max_willingness: f64,
}

#[derive(Debug, Clone)]
pub struct Simulation {
    scenario: Scenario,
    graph: SocialGraph,
    population: Vec<Individual>,
    dense: Option<Vec<f64>>,
    kinematics: Vec<KinematicState>,
    behavior: Vec<BehaviorState>,
    step: u64,
    period: u64,
    phase: Vec<u64>,
}

impl Simulation {
    /// Builds the graph, samples the population and places everyone uniformly
    /// at random, each from its own random substream.
    pub fn new(scenario: Scenario) -> Result<Self> {
        scenario.validate()?;
        let graph = scenario.build_graph()?;
        let population = sample_population(
            &scenario.population,
            &mut stage_rng(scenario.seed, Stage::Population),
        )?;
        let side = scenario.space.side().unwrap_or(scenario.initial_side);
        let mut rng = stage_rng(scenario.seed, Stage::Placement);
        let positions: Vec<Position2> = (0..scenario.population.n)
            .map(|_| {
                let x = rng.random_range(0.0..side);
                let y = rng.random_range(0.0..side);
                scenario.space.wrap(Vec2::new(x, y))
            })
            .collect();
        Self::from_parts(scenario, graph, population, positions)
    }

    /// Starts from explicit parts with zero velocities.
    pub fn from_parts(
        scenario: Scenario,
        graph: SocialGraph,
        population: Vec<Individual>,
        positions: Vec<Position2>,
    ) -> Result<Self> {
        scenario.validate()?;
        let n = population.len();
        if graph.node_count() != n || positions.len() != n {
            return Err(Error::param(
                "n",
                format!(
                    "graph ({}), population ({n}) and positions ({}) disagree",
                    graph.node_count(),
                    positions.len()
                ),
            ));
        }
        if let Some(p) = positions.iter().find(|p| !p.is_finite()) {
            return Err(Error::param(
                "positions",
                format!("non-finite position {p:?}"),
            ));
        }
        let period = scenario.perception_period()?;
        let phase = if scenario.stagger_perception {
            let mut rng = stage_rng(scenario.seed, Stage::PerceptionPhase);
            (0..n).map(|_| rng.random_range(0..period)).collect()
        } else {
            vec![0; n]
        };
        let kinematics: Vec<KinematicState> = positions
            .iter()
            .map(|&p| KinematicState {
                position: scenario.space.wrap(p),
                velocity: Vec2::ZERO,
            })
            .collect();
        let dense = (n <= DENSE_LIMIT).then(|| graph.dense());
        let mut sim = Simulation {
            scenario,
            graph,
            population,
            dense,
            kinematics,
            behavior: Vec::new(),
            step: 0,
            period,
            phase,
        };
        let counts = sim.surround_counts(&sim.positions());
        sim.behavior = counts
            .iter()
            .zip(&sim.population)
            .map(|(&c, ind)| BehaviorState::initial(c, ind.sociability))
            .collect();
        Ok(sim)
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn graph(&self) -> &SocialGraph {
        &self.graph
    }

    pub fn population(&self) -> &[Individual] {
        &self.population
    }

    pub fn kinematics(&self) -> &[KinematicState] {
        &self.kinematics
    }

    pub fn behavior(&self) -> &[BehaviorState] {
        &self.behavior
    }

    pub fn positions(&self) -> Vec<Position2> {
        self.kinematics.iter().map(|k| k.position).collect()
    }

    pub fn step_index(&self) -> u64 {
        self.step
    }

    /// Simulated time of the current state (s).
    pub fn clock(&self) -> f64 {
        round_time(self.step as f64 * self.scenario.dt)
    }

    pub fn len(&self) -> usize {
        self.population.len()
    }

    pub fn is_empty(&self) -> bool {
        self.population.is_empty()
    }

    /// Overrides the behavior mode of every individual; the hysteresis will
    /// take over again on the next step.
    pub fn set_modes(&mut self, mode: Mode) {
        self.behavior.iter_mut().for_each(|b| b.mode = mode);
    }

    fn surround_counts(&self, positions: &[Position2]) -> Vec<usize> {
        let pairs = neighbors::pairs_within(
            positions,
            &self.scenario.space,
            self.scenario.perception.social_radius,
            self.scenario.neighbor_search,
        );
        neighbors::counts_from_pairs(positions.len(), &pairs)
    }

    fn acquaintance_row(&self, i: usize) -> impl Fn(usize) -> f64 + '_ {
        let n = self.population.len();
        move |j| match &self.dense {
            Some(m) => m[i * n + j],
            None => self.graph.weight(i, j),
        }
    }

    /// Advances the clock by one time step.
    pub fn step(&mut self) -> StepReport {
        let positions = self.positions();
        let space = self.scenario.space;
        let k = self.step;

        // perception ticks
        let due: Vec<bool> = self
            .phase
            .iter()
            .map(|&ph| (k + ph).is_multiple_of(self.period))
            .collect();
        if due.iter().any(|&d| d) {
            let counts = self.surround_counts(&positions);
            for ((b, &c), &d) in self.behavior.iter_mut().zip(&counts).zip(&due) {
                if d {
                    b.perceived = behavior::update_perceived_surround(b.perceived, c as f64);
                }
            }
        }

        let mut report = StepReport::default();

        // decisions
        for (i, (b, ind)) in self.behavior.iter_mut().zip(&self.population).enumerate() {
            let next =
                behavior::decide_behavior(b.mode, b.perceived, ind.sociability, ind.tolerance);
            if next != b.mode {
                report.transitions.push(Transition {
                    node: i,
                    from: b.mode,
                    to: next,
                });
                b.mode = next;
            }
        }

        // tensions and willingness from the snapshot
        let lambda = self.scenario.perception.fading_exponent;
        let requests: Vec<Vec2> = (0..self.population.len())
            .map(|i| {
                let ind = &self.population[i];
                let b = &self.behavior[i];
                let tension = behavior::tension_with(
                    &positions,
                    &space,
                    i,
                    lambda,
                    b.mode,
                    self.acquaintance_row(i),
                );
                let e = behavior::excitation(b.perceived, ind.sociability, ind.tolerance);
                let w = behavior::willingness(tension, e);
                report.max_willingness = report.max_willingness.max(w.norm());
                kinematics::acceleration_request(w, ind.a_max)
            })
            .collect();

        // motion
        let dt = self.scenario.dt;
        for ((state, req), ind) in self
            .kinematics
            .iter_mut()
            .zip(requests)
            .zip(&self.population)
        {
            let out = kinematics::integrate(*state, req, ind.v_max, dt, &space);
            if let Some(lim) = out.a_lim {
                report.min_a_lim = Some(report.min_a_lim.map_or(lim, |m: f64| m.min(lim)));
            }
            report.max_speed_excess = report
                .max_speed_excess
                .max(out.state.velocity.norm() - ind.v_max);
            *state = out.state;
        }

        self.step += 1;
        report
    }
}

/// Hook invoked on the initial state and after every step.
pub trait Observer {
    fn on_start(&mut self, _sim: &Simulation) -> Result<()> {
        Ok(())
    }

    fn on_step(&mut self, sim: &Simulation, report: &StepReport) -> Result<()>;

    fn on_finish(&mut self, _sim: &Simulation) -> Result<()> {
        Ok(())
    }
}

/// Runs `step_count()` steps, feeding every observer.
pub fn run(scenario: Scenario, observers: &mut [&mut dyn Observer]) -> Result<Simulation> {
    let mut sim = Simulation::new(scenario)?;
    run_simulation(&mut sim, observers)?;
    Ok(sim)
}

/// Runs an already initialized simulation to its configured end.
pub fn run_simulation(sim: &mut Simulation, observers: &mut [&mut dyn Observer]) -> Result<()> {
    let wrap = |sim: &Simulation, e: Error| Error::Observer {
        step: sim.step_index(),
        time: sim.clock(),
        source: Box::new(e),
    };
    for obs in observers.iter_mut() {
        obs.on_start(sim).map_err(|e| wrap(sim, e))?;
    }
    let steps = sim.scenario().step_count();
    while sim.step_index() < steps {
        let report = sim.step();
        for obs in observers.iter_mut() {
            obs.on_step(sim, &report).map_err(|e| wrap(sim, e))?;
        }
    }
    for obs in observers.iter_mut() {
        obs.on_finish(sim).map_err(|e| wrap(sim, e))?;
    }
    Ok(())
}

/// Feeds a [`ContactLedger`] from the simulation state.
#[derive(Debug, Clone)]
pub struct ContactTracker {
    pub ledger: ContactLedger,
}

impl ContactTracker {
    pub fn new(n: usize, params: ContactParams) -> Self {
        ContactTracker {
            ledger: ContactLedger::new(n, params),
        }
    }

    fn sample(&mut self, sim: &Simulation) {
        let pairs = neighbors::pairs_within(
            &sim.positions(),
            &sim.scenario().space,
            self.ledger.params().range,
            sim.scenario().neighbor_search,
        );
        self.ledger.observe(sim.clock(), &pairs);
    }
}

impl Observer for ContactTracker {
    fn on_start(&mut self, sim: &Simulation) -> Result<()> {
        self.sample(sim);
        Ok(())
    }

    fn on_step(&mut self, sim: &Simulation, _report: &StepReport) -> Result<()> {
        self.sample(sim);
        Ok(())
    }
}

/// Writes `time_s,node_id,x_m,y_m,vx,vy,mode` rows every `decimate` steps.
pub struct TraceWriter<W: Write> {
    out: csv::Writer<W>,
    decimate: u64,
}

impl<W: Write> TraceWriter<W> {
    pub fn new(out: W, decimate: u64) -> Self {
        TraceWriter {
            out: csv::Writer::from_writer(out),
            decimate: decimate.max(1),
        }
    }

    fn write_rows(&mut self, sim: &Simulation) -> csv::Result<()> {
        if !sim.step_index().is_multiple_of(self.decimate) {
            return Ok(());
        }
        let t = sim.clock().to_string();
        for (i, (k, b)) in sim.kinematics().iter().zip(sim.behavior()).enumerate() {
            self.out.write_record([
                t.as_str(),
                &i.to_string(),
                &k.position.x.to_string(),
                &k.position.y.to_string(),
                &k.velocity.x.to_string(),
                &k.velocity.y.to_string(),
                b.mode.as_str(),
            ])?;
        }
        Ok(())
    }

    pub fn into_inner(self) -> Option<W> {
        self.out.into_inner().ok()
    }
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io("trace", io),
        other => Error::param("trace", format!("{other:?}")),
    }
}

impl<W: Write> Observer for TraceWriter<W> {
    fn on_start(&mut self, sim: &Simulation) -> Result<()> {
        self.out
            .write_record(["time_s", "node_id", "x_m", "y_m", "vx", "vy", "mode"])
            .map_err(csv_err)?;
        self.write_rows(sim).map_err(csv_err)
    }

    fn on_step(&mut self, sim: &Simulation, _report: &StepReport) -> Result<()> {
        self.write_rows(sim).map_err(csv_err)
    }

    fn on_finish(&mut self, _sim: &Simulation) -> Result<()> {
        self.out.flush().map_err(|e| Error::io("trace", e))
    }
}

/// Writes `time_s,node_id,old_mode,new_mode` for every behavior switch.
pub struct TransitionWriter<W: Write> {
    out: csv::Writer<W>,
}

impl<W: Write> TransitionWriter<W> {
    pub fn new(out: W) -> Self {
        TransitionWriter {
            out: csv::Writer::from_writer(out),
        }
    }
}

impl<W: Write> Observer for TransitionWriter<W> {
    fn on_start(&mut self, _sim: &Simulation) -> Result<()> {
        self.out
            .write_record(["time_s", "node_id", "old_mode", "new_mode"])
            .map_err(csv_err)
    }

    fn on_step(&mut self, sim: &Simulation, report: &StepReport) -> Result<()> {
        // decisions are taken at the start of the step
        let t = round_time((sim.step_index() - 1) as f64 * sim.scenario().dt).to_string();
        for tr in &report.transitions {
            self.out
                .write_record([
                    t.as_str(),
                    &tr.node.to_string(),
                    tr.from.as_str(),
                    tr.to.as_str(),
                ])
                .map_err(csv_err)?;
        }
        Ok(())
    }

    fn on_finish(&mut self, _sim: &Simulation) -> Result<()> {
        self.out.flush().map_err(|e| Error::io("transitions", e))
    }
}

/// Runs a scenario with only a contact tracker attached.
pub fn run_contacts(scenario: Scenario) -> Result<(Simulation, ContactLedger)> {
    let mut tracker = ContactTracker::new(scenario.population.n, scenario.contact);
    let sim = run(scenario, &mut [&mut tracker])?;
    Ok((sim, tracker.ledger))
}
