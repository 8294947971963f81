//! The IDBEA main loop and the IBEA and NSGA-II baselines.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::crowding::crowding_distance;
use super::indicator::{assign_fitness, environmental_selection, INDICATOR_REFERENCE};
use super::operators::{binary_tournament, polynomial_mutation, sbx_crossover, Bounds};
use super::sorting::{nondominated_sort, ranks};
use crate::archive::{FrontArchive, FrontPoint};
use crate::constraint::{evaluate_candidate, ConstraintConfig};
use crate::error::{Error, Result};
use crate::model::Evaluation;
use crate::system::{DispatchVector, SystemDefinition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "IDBEA", alias = "idbea")]
    Idbea,
    #[serde(rename = "IBEA", alias = "ibea")]
    Ibea,
    #[serde(rename = "NSGA2", alias = "nsga2", alias = "NSGA-II")]
    Nsga2,
}

impl Algorithm {
    pub fn tag(self) -> &'static str {
        match self {
            Algorithm::Idbea => "IDBEA",
            Algorithm::Ibea => "IBEA",
            Algorithm::Nsga2 => "NSGA2",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// How the archive is cut down to `⌊N·archive_keep_fraction⌋` members.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArchiveTruncation {
    /// Keep the members with the largest crowding distance in one cut.
    OneShot,
    /// Drop the most crowded member and recompute, until small enough.
    Iterative,
}

/// Which objectives drive the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveMode {
    /// Economic dispatch: cost alone.
    #[serde(alias = "chped")]
    CostOnly,
    /// Economic emission dispatch: cost and emission.
    #[serde(alias = "chpeed")]
    CostEmission,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EngineConfig {
    pub algorithm: Algorithm,
    pub objectives: ObjectiveMode,
    pub population_size: usize,
    pub max_evaluations: usize,
    pub crossover_prob: f64,
    /// Per-gene mutation probability; `None` means one over the gene count.
    pub mutation_prob: Option<f64>,
    pub sbx_eta: f64,
    pub pm_eta: f64,
    pub kappa: f64,
    /// Reference point of the fitness indicator on normalized objectives.
    pub indicator_reference: f64,
    pub archive_keep_fraction: f64,
    pub archive_truncation: ArchiveTruncation,
    pub rng_seed: u64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            algorithm: Algorithm::Idbea,
            objectives: ObjectiveMode::CostEmission,
            population_size: 200,
            max_evaluations: 25_000,
            crossover_prob: 0.9,
            mutation_prob: None,
            sbx_eta: 20.0,
            pm_eta: 20.0,
            kappa: 0.05,
            indicator_reference: INDICATOR_REFERENCE,
            archive_keep_fraction: 0.8,
            archive_truncation: ArchiveTruncation::OneShot,
            rng_seed: 1,
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::Config(msg.to_string()));
        let prob = |p: f64| (0.0..=1.0).contains(&p);
        if self.population_size < 4 || self.population_size % 2 != 0 {
            return fail("population_size must be even and at least 4");
        }
        if self.max_evaluations < self.population_size {
            return fail("max_evaluations must cover the initial population");
        }
        if !prob(self.crossover_prob) {
            return fail("crossover_prob must lie in [0, 1]");
        }
        if self.mutation_prob.is_some_and(|p| !prob(p)) {
            return fail("mutation_prob must lie in [0, 1]");
        }
        if !(self.sbx_eta >= 0.0 && self.pm_eta >= 0.0) {
            return fail("distribution indices must be non-negative");
        }
        if !(self.kappa > 0.0) {
            return fail("kappa must be positive");
        }
        if !(self.indicator_reference > 1.0) {
            return fail("indicator_reference must exceed 1");
        }
        if !(self.archive_keep_fraction > 0.0 && self.archive_keep_fraction <= 1.0) {
            return fail("archive_keep_fraction must lie in (0, 1]");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    /// Repaired decision vector.
    pub genes: DispatchVector,
    /// Penalized objectives: `[cost]` or `[cost, emission]`.
    pub objectives: Vec<f64>,
    pub violation: f64,
    pub evaluation: Evaluation,
    pub fitness: f64,
    pub crowding: f64,
    pub rank: usize,
}

impl Individual {
    fn to_point(&self) -> FrontPoint {
        FrontPoint {
            cost: self.evaluation.cost,
            emission: self.evaluation.emission,
            violation: self.violation,
            genes: self.genes.to_genes(),
        }
    }
}

struct Problem<'a> {
    sys: &'a SystemDefinition,
    ccfg: &'a ConstraintConfig,
    mode: ObjectiveMode,
    bounds: Bounds,
    evaluations: usize,
}

impl Problem<'_> {
    fn evaluate(&mut self, genes: &[f64]) -> Result<Individual> {
        let x = DispatchVector::from_genes(self.sys, genes)?;
        let (genes, pen) = evaluate_candidate(&x, self.sys, self.ccfg)?;
        self.evaluations += 1;
        let objectives = match self.mode {
            ObjectiveMode::CostOnly => vec![pen.cost],
            ObjectiveMode::CostEmission => vec![pen.cost, pen.emission],
        };
        if objectives.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input(format!(
                "non-finite objectives {objectives:?}"
            )));
        }
        Ok(Individual {
            genes,
            objectives,
            violation: pen.violation,
            evaluation: pen.evaluation,
            fitness: 0.0,
            crowding: 0.0,
            rank: 0,
        })
    }

    fn remaining(&self, budget: usize) -> usize {
        budget.saturating_sub(self.evaluations)
    }
}

fn setup<'a>(
    sys: &'a SystemDefinition,
    ecfg: &EngineConfig,
    ccfg: &'a ConstraintConfig,
) -> Result<Problem<'a>> {
    sys.validate()?;
    ecfg.validate()?;
    ccfg.validate(sys)?;
    let (lower, upper) = sys.gene_bounds();
    Ok(Problem {
        sys,
        ccfg,
        mode: ecfg.objectives,
        bounds: Bounds { lower, upper },
        evaluations: 0,
    })
}

fn initial_population(
    problem: &mut Problem,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Individual>> {
    (0..n)
        .map(|_| {
            let genes = problem.bounds.sample(rng);
            problem.evaluate(&genes)
        })
        .collect()
}

/// Generates up to `count` offspring by tournament, SBX and polynomial
/// mutation. `better(a, b)` orders parents.
fn offspring<F>(
    parents: &[Individual],
    count: usize,
    problem: &mut Problem,
    ecfg: &EngineConfig,
    rng: &mut ChaCha8Rng,
    better: F,
) -> Result<Vec<Individual>>
where
    F: Fn(usize, usize) -> bool,
{
    let m = problem.bounds.len();
    let pm = ecfg.mutation_prob.unwrap_or(1.0 / m as f64);
    let mut children = Vec::with_capacity(count);
    while children.len() < count {
        let a = binary_tournament(parents.len(), rng, &better);
        let b = binary_tournament(parents.len(), rng, &better);
        let (mut c1, mut c2) = sbx_crossover(
            &parents[a].genes.to_genes(),
            &parents[b].genes.to_genes(),
            &problem.bounds,
            ecfg.crossover_prob,
            ecfg.sbx_eta,
            rng,
        );
        polynomial_mutation(&mut c1, &problem.bounds, pm, ecfg.pm_eta, rng);
        polynomial_mutation(&mut c2, &problem.bounds, pm, ecfg.pm_eta, rng);
        children.push(problem.evaluate(&c1)?);
        if children.len() < count {
            children.push(problem.evaluate(&c2)?);
        }
    }
    Ok(children)
}

fn objectives_of(pop: &[Individual]) -> (Vec<Vec<f64>>, Vec<f64>) {
    (
        pop.iter().map(|i| i.objectives.clone()).collect(),
        pop.iter().map(|i| i.violation).collect(),
    )
}

/// First constrained-non-dominated front with repeated objective vectors
/// dropped (the first genome is kept), ordered by ascending cost then
/// emission.
fn first_front(
    pop: &[Individual],
    sys: &SystemDefinition,
    ecfg: &EngineConfig,
    evaluations: usize,
) -> FrontArchive {
    let (objs, viols) = objectives_of(pop);
    let fronts = nondominated_sort(&objs, &viols);
    let mut points: Vec<FrontPoint> = Vec::new();
    for &i in fronts.first().map(Vec::as_slice).unwrap_or(&[]) {
        let p = pop[i].to_point();
        let seen = points
            .iter()
            .any(|q| q.cost == p.cost && q.emission == p.emission && q.violation == p.violation);
        if !seen {
            points.push(p);
        }
    }
    points.sort_by(|a, b| {
        a.cost
            .total_cmp(&b.cost)
            .then(a.emission.total_cmp(&b.emission))
    });
    FrontArchive {
        system_id: sys.name.clone(),
        algorithm: ecfg.algorithm.tag().to_string(),
        seed: ecfg.rng_seed,
        run_id: format!("{}-{}-{}", sys.name, ecfg.algorithm.tag(), ecfg.rng_seed),
        evaluations,
        points,
    }
}

/// Indices of the `keep` members retained by crowding distance, in their
/// original order. Ties favour the earlier member.
fn crowding_truncation(pop: &mut [Individual], keep: usize, mode: ArchiveTruncation) -> Vec<usize> {
    let objs: Vec<Vec<f64>> = pop.iter().map(|i| i.objectives.clone()).collect();
    let dist = crowding_distance(&objs);
    for (ind, d) in pop.iter_mut().zip(&dist) {
        ind.crowding = *d;
    }
    match mode {
        ArchiveTruncation::OneShot => {
            let mut order: Vec<usize> = (0..pop.len()).collect();
            order.sort_by(|&a, &b| dist[b].total_cmp(&dist[a]));
            let mut kept: Vec<usize> = order.into_iter().take(keep).collect();
            kept.sort_unstable();
            kept
        }
        ArchiveTruncation::Iterative => {
            let mut alive: Vec<usize> = (0..pop.len()).collect();
            let mut dist = dist;
            while alive.len() > keep {
                let mut worst = 0;
                for k in 1..alive.len() {
                    if dist[k] < dist[worst] {
                        worst = k;
                    }
                }
                alive.remove(worst);
                let sub: Vec<Vec<f64>> = alive.iter().map(|&i| objs[i].clone()).collect();
                dist = crowding_distance(&sub);
            }
            alive
        }
    }
}

fn indicator_loop(
    sys: &SystemDefinition,
    ecfg: &EngineConfig,
    ccfg: &ConstraintConfig,
    truncate: bool,
) -> Result<FrontArchive> {
    let mut problem = setup(sys, ecfg, ccfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(ecfg.rng_seed);
    let n = ecfg.population_size;
    let budget = ecfg.max_evaluations;

    let mut population = initial_population(&mut problem, n, &mut rng)?;
    let mut archive: Vec<Individual> = Vec::new();
    loop {
        // fitness over P ∪ A, then shrink to N
        let mut pool = std::mem::take(&mut population);
        pool.append(&mut archive);
        let (objs, viols) = objectives_of(&pool);
        let mut table = assign_fitness(&objs, &viols, ecfg.kappa, ecfg.indicator_reference);
        let kept = environmental_selection(&mut table, n.min(pool.len()));
        let fitness = table.fitness().to_vec();
        let mut slots: Vec<Option<Individual>> = pool.into_iter().map(Some).collect();
        archive = kept
            .iter()
            .map(|&i| {
                let mut ind = slots[i].take().expect("survivor taken once");
                ind.fitness = fitness[i];
                ind
            })
            .collect();

        let remaining = problem.remaining(budget);
        if remaining == 0 {
            break;
        }

        let parents = &archive;
        population = offspring(
            parents,
            n.min(remaining),
            &mut problem,
            ecfg,
            &mut rng,
            |a, b| parents[a].fitness < parents[b].fitness,
        )?;

        if truncate && ecfg.objectives == ObjectiveMode::CostEmission {
            let keep = ((n as f64 * ecfg.archive_keep_fraction).floor() as usize).max(1);
            if keep < archive.len() {
                let kept = crowding_truncation(&mut archive, keep, ecfg.archive_truncation);
                let mut slots: Vec<Option<Individual>> = archive.into_iter().map(Some).collect();
                archive = kept
                    .iter()
                    .map(|&i| slots[i].take().expect("kept once"))
                    .collect();
            }
        }
    }
    Ok(first_front(&archive, sys, ecfg, problem.evaluations))
}

/// Indicator-based search with crowding truncation of the archive.
pub fn idbea_run(
    sys: &SystemDefinition,
    ecfg: &EngineConfig,
    ccfg: &ConstraintConfig,
) -> Result<FrontArchive> {
    indicator_loop(sys, ecfg, ccfg, true)
}

/// Plain indicator-based search: the same loop without truncation.
pub fn ibea_run(
    sys: &SystemDefinition,
    ecfg: &EngineConfig,
    ccfg: &ConstraintConfig,
) -> Result<FrontArchive> {
    indicator_loop(sys, ecfg, ccfg, false)
}

fn assign_rank_and_crowding(pop: &mut [Individual]) {
    let (objs, viols) = objectives_of(pop);
    let fronts = nondominated_sort(&objs, &viols);
    let rank = ranks(&fronts, pop.len());
    for front in &fronts {
        let f: Vec<Vec<f64>> = front.iter().map(|&i| objs[i].clone()).collect();
        for (&i, d) in front.iter().zip(crowding_distance(&f)) {
            pop[i].crowding = d;
        }
    }
    for (ind, r) in pop.iter_mut().zip(rank) {
        ind.rank = r;
    }
}

fn crowded_better(a: &Individual, b: &Individual) -> bool {
    a.rank < b.rank || (a.rank == b.rank && a.crowding > b.crowding)
}

/// Generational NSGA-II with the (rank, crowding) comparator.
pub fn nsga2_run(
    sys: &SystemDefinition,
    ecfg: &EngineConfig,
    ccfg: &ConstraintConfig,
) -> Result<FrontArchive> {
    let mut problem = setup(sys, ecfg, ccfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(ecfg.rng_seed);
    let n = ecfg.population_size;
    let budget = ecfg.max_evaluations;

    let mut population = initial_population(&mut problem, n, &mut rng)?;
    assign_rank_and_crowding(&mut population);
    while problem.remaining(budget) > 0 {
        let count = n.min(problem.remaining(budget));
        let parents = &population;
        let mut children = offspring(parents, count, &mut problem, ecfg, &mut rng, |a, b| {
            crowded_better(&parents[a], &parents[b])
        })?;
        let mut merged = std::mem::take(&mut population);
        merged.append(&mut children);

        let (objs, viols) = objectives_of(&merged);
        let fronts = nondominated_sort(&objs, &viols);
        let mut chosen: Vec<usize> = Vec::with_capacity(n);
        for front in &fronts {
            if chosen.len() + front.len() <= n {
                chosen.extend(front);
                continue;
            }
            let f: Vec<Vec<f64>> = front.iter().map(|&i| objs[i].clone()).collect();
            let dist = crowding_distance(&f);
            let mut order: Vec<usize> = (0..front.len()).collect();
            order.sort_by(|&a, &b| dist[b].total_cmp(&dist[a]));
            chosen.extend(order.into_iter().take(n - chosen.len()).map(|k| front[k]));
            break;
        }
        let mut slots: Vec<Option<Individual>> = merged.into_iter().map(Some).collect();
        population = chosen
            .iter()
            .map(|&i| slots[i].take().expect("chosen once"))
            .collect();
        assign_rank_and_crowding(&mut population);
    }
    Ok(first_front(&population, sys, ecfg, problem.evaluations))
}

/// Dispatches on `ecfg.algorithm`.
pub fn run(
    sys: &SystemDefinition,
    ecfg: &EngineConfig,
    ccfg: &ConstraintConfig,
) -> Result<FrontArchive> {
    match ecfg.algorithm {
        Algorithm::Idbea => idbea_run(sys, ecfg, ccfg),
        Algorithm::Ibea => ibea_run(sys, ecfg, ccfg),
        Algorithm::Nsga2 => nsga2_run(sys, ecfg, ccfg),
    }
}
