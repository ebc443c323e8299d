//! Elitist binary-coded genetic algorithm.
//!
//! A genome concatenates five blocks: fixed-width binary codes for the four
//! continuous variables `V_s, f_s, V_r, f_r` followed by an index block
//! selecting a row of the depth-allocation table. Every bitstring decodes to
//! a valid [`Plan`], so the search space has no invalid encodings; bound
//! constraints therefore never contribute to the constraint violation of
//! GA-produced plans.
//!
//! The loop is: initialize → [tournament select → two-point crossover →
//! bitwise mutation → evaluate → elitist replace] × generations. Selection
//! and replacement use feasibility dominance: feasible beats infeasible,
//! feasible members compare by unit cost, infeasible ones by constraint
//! violation.
//!
//! Randomness discipline: one seeded generator, consumed in a fixed order
//! (initialization; then per generation: selection shuffle, crossover draws,
//! mutation draws). Evaluation consumes no randomness, so a fixed seed fixes
//! the entire evolution trace.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lookup::PairTable;
use crate::model::{Model, PassKind, Plan};

/// Settings of the genetic algorithm.
#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    /// Population size N; must be even and at least 2.
    pub pop_size: usize,
    /// Number of generations to run after initialization.
    pub generations: usize,
    /// Crossover probability per mating pair.
    pub p_c: f64,
    /// Mutation probability per bit.
    pub p_m: f64,
    /// Bits per continuous variable.
    pub bits: u32,
    /// Bits of the table-index block; `None` selects the smallest width
    /// that can address the table, `ceil(log2(size))`.
    pub index_bits: Option<u32>,
    /// Seed of the random stream.
    pub seed: u64,
    /// Relative population gap (mean vs best) under which the run is
    /// reported as converged.
    pub gap_threshold: f64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            pop_size: 750,
            generations: 100,
            p_c: 0.8,
            p_m: 0.05,
            bits: 15,
            index_bits: None,
            seed: 68,
            gap_threshold: 0.0025,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |key: &str, reason: String| Error::Config { key: key.into(), reason };
        if self.pop_size < 2 || self.pop_size % 2 != 0 {
            return Err(bad("N", format!("must be even and >= 2, got {}", self.pop_size)));
        }
        for (v, key) in [(self.p_c, "p_c"), (self.p_m, "p_m")] {
            if !(0.0..=1.0).contains(&v) {
                return Err(bad(key, format!("must be in [0, 1], got {v}")));
            }
        }
        if self.bits < 1 || self.bits > 52 {
            return Err(bad("bits", format!("must be in 1..=52, got {}", self.bits)));
        }
        if let Some(ib) = self.index_bits {
            if ib > 52 {
                return Err(bad("index_bits", format!("must be at most 52, got {ib}")));
            }
        }
        if !(self.gap_threshold >= 0.0) {
            return Err(bad(
                "gap_threshold",
                format!("must be non-negative, got {}", self.gap_threshold),
            ));
        }
        Ok(())
    }

    /// Width of the index block for a table of `size` rows.
    pub fn index_bits_for(&self, size: usize) -> u32 {
        self.index_bits.unwrap_or_else(|| ceil_log2(size))
    }

    /// Total genome length for a table of `size` rows.
    pub fn genome_len(&self, size: usize) -> usize {
        4 * self.bits as usize + self.index_bits_for(size) as usize
    }
}

/// Smallest `b` with `2^b ≥ size` (0 for a single-row table).
pub fn ceil_log2(size: usize) -> u32 {
    debug_assert!(size >= 1);
    if size <= 1 {
        0
    } else {
        usize::BITS - (size - 1).leading_zeros()
    }
}

/// A genome: most-significant bit first within each block.
pub type Genome = Vec<bool>;

/// One population member with its cached evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genome: Genome,
    pub plan: Plan,
    /// Unit cost of the decoded plan (the fitness value).
    pub uc: f64,
    /// Aggregate constraint violation of the decoded plan.
    pub cv: f64,
}

impl Individual {
    pub fn is_feasible(&self) -> bool {
        self.cv == 0.0
    }
}

/// Feasibility-dominance order: feasible before infeasible, then unit cost
/// among feasible and violation among infeasible.
pub fn dominance(a: &Individual, b: &Individual) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    match (a.is_feasible(), b.is_feasible()) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        (true, true) => a.uc.partial_cmp(&b.uc).unwrap_or(Ordering::Equal),
        (false, false) => a.cv.partial_cmp(&b.cv).unwrap_or(Ordering::Equal),
    }
}

/// Binary-tournament winner; exact ties go to `a` (the first argument).
pub fn tournament_winner<'a>(a: &'a Individual, b: &'a Individual) -> &'a Individual {
    if dominance(b, a) == std::cmp::Ordering::Less {
        b
    } else {
        a
    }
}

/// Unsigned value of a bit block, most-significant bit first.
pub fn decode_block(bits: &[bool]) -> u64 {
    bits.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b))
}

/// Linear decode of a bit block onto `[lb, ub]`:
/// `lb + DV·(ub − lb)/(2^len − 1)`. All-zeros gives `lb`, all-ones `ub`.
pub fn decode_real(bits: &[bool], lb: f64, ub: f64) -> f64 {
    debug_assert!(lb <= ub);
    if bits.is_empty() {
        return lb;
    }
    let dv = decode_block(bits) as f64;
    let span = (1u64 << bits.len()) - 1;
    lb + dv * (ub - lb) / span as f64
}

/// Decode of the index block onto `1..=table_size` with scaled rounding:
/// `1 + round(DV·(size − 1)/(2^len − 1))`.
pub fn decode_index(bits: &[bool], table_size: usize) -> usize {
    debug_assert!(table_size >= 1);
    if table_size <= 1 || bits.is_empty() {
        return 1;
    }
    let dv = decode_block(bits) as f64;
    let span = ((1u64 << bits.len()) - 1) as f64;
    1 + (dv * (table_size - 1) as f64 / span).round() as usize
}

/// Decodes a full genome into a plan. Total: every bitstring maps to a
/// valid plan with variables inside their bounds and a real table row.
pub fn decode_genome(genome: &[bool], config: &GaConfig, model: &Model, table: &PairTable) -> Plan {
    let b = config.bits as usize;
    debug_assert_eq!(genome.len(), config.genome_len(table.len()));
    let fin = model.problem().finish_bounds;
    let rgh = model.problem().rough_bounds;
    let v_s = decode_real(&genome[0..b], fin.v_min, fin.v_max);
    let f_s = decode_real(&genome[b..2 * b], fin.f_min, model.feed_upper_bound(PassKind::Finish));
    let v_r = decode_real(&genome[2 * b..3 * b], rgh.v_min, rgh.v_max);
    let f_r =
        decode_real(&genome[3 * b..4 * b], rgh.f_min, model.feed_upper_bound(PassKind::Rough));
    let index = decode_index(&genome[4 * b..], table.len());
    let entry = table.pair_at(index).expect("decoded index is always in range");
    Plan { v_s, f_s, v_r, f_r, ds_tenths: entry.ds_tenths, dr_tenths: entry.dr_tenths, n: entry.n }
}

fn evaluate(genome: Genome, config: &GaConfig, model: &Model, table: &PairTable) -> Individual {
    let plan = decode_genome(&genome, config, model, table);
    let (uc, cv) = model.evaluate(&plan);
    Individual { genome, plan, uc, cv }
}

/// Random initial population: each bit is 0 when its uniform draw is ≤ 0.5.
pub fn initialize<R: Rng>(
    config: &GaConfig,
    model: &Model,
    table: &PairTable,
    rng: &mut R,
) -> Vec<Individual> {
    let len = config.genome_len(table.len());
    (0..config.pop_size)
        .map(|_| {
            let genome: Genome = (0..len).map(|_| rng.gen::<f64>() > 0.5).collect();
            evaluate(genome, config, model, table)
        })
        .collect()
}

/// Binary tournament over the population, run twice to fill N slots: the
/// first pass pairs each member of the front half with its opposite in the
/// back half; the second pass does the same on a fresh random permutation.
pub fn tournament_select<R: Rng>(population: &[Individual], rng: &mut R) -> Vec<Individual> {
    let n = population.len();
    let half = n / 2;
    debug_assert!(n % 2 == 0);
    let mut selected = Vec::with_capacity(n);
    for i in 0..half {
        selected.push(tournament_winner(&population[i], &population[i + half]).clone());
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    for i in 0..half {
        selected.push(tournament_winner(&population[perm[i]], &population[perm[i + half]]).clone());
    }
    selected
}

/// The deterministic core of two-point crossover: children swap the gene
/// segment `[lo, hi)`.
pub fn crossover_at(a: &[bool], b: &[bool], lo: usize, hi: usize) -> (Genome, Genome) {
    debug_assert!(lo <= hi && hi <= a.len() && a.len() == b.len());
    let mut child_a = a.to_vec();
    let mut child_b = b.to_vec();
    child_a[lo..hi].copy_from_slice(&b[lo..hi]);
    child_b[lo..hi].copy_from_slice(&a[lo..hi]);
    (child_a, child_b)
}

/// Two-point crossover: with probability `p_c` two distinct interior cut
/// positions are drawn (uniformly, without replacement, order-normalized)
/// and the middle segment is swapped; otherwise the children are copies.
pub fn two_point_crossover<R: Rng>(
    a: &[bool],
    b: &[bool],
    p_c: f64,
    rng: &mut R,
) -> (Genome, Genome) {
    debug_assert!(a.len() == b.len() && a.len() >= 3);
    if rng.gen::<f64>() < p_c {
        let len = a.len();
        let i = rng.gen_range(1..len);
        let mut j = rng.gen_range(1..len - 1);
        if j >= i {
            j += 1;
        }
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        crossover_at(a, b, lo, hi)
    } else {
        (a.to_vec(), b.to_vec())
    }
}

/// Bitwise mutation: each bit flips independently with probability `p_m`.
pub fn mutate<R: Rng>(genome: &mut Genome, p_m: f64, rng: &mut R) {
    for bit in genome.iter_mut() {
        if rng.gen::<f64>() < p_m {
            *bit = !*bit;
        }
    }
}

/// Elitist replacement: of the 2N merged members the best N survive. With
/// more than N feasible members that is the N cheapest feasible ones; with
/// fewer it is every feasible member plus the least-violating infeasible
/// ones; with exactly N it is precisely the feasible set. Implemented as a
/// stable sort of parents-then-offspring under feasibility dominance, so
/// exact ties favour the incumbent parent.
pub fn elitist_replace(
    mut original: Vec<Individual>,
    offspring: Vec<Individual>,
) -> Vec<Individual> {
    let n = original.len();
    debug_assert_eq!(n, offspring.len());
    original.extend(offspring);
    original.sort_by(dominance);
    original.truncate(n);
    original
}

/// Per-generation population statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenStats {
    /// Generation number; 0 is the initial population.
    pub gen: usize,
    /// Unit cost of the best feasible member (NaN while none is feasible).
    pub best_uc: f64,
    /// Mean unit cost over the whole population.
    pub mean_uc: f64,
    /// Smallest constraint violation in the population.
    pub best_cv: f64,
    /// Relative population gap `(mean − best)/best` (NaN without a best).
    pub gap: f64,
}

fn stats(gen: usize, population: &[Individual]) -> GenStats {
    let n = population.len() as f64;
    let mean_uc = population.iter().map(|i| i.uc).sum::<f64>() / n;
    let best = population.iter().min_by(|a, b| dominance(a, b)).expect("population is never empty");
    let best_uc = if best.is_feasible() { best.uc } else { f64::NAN };
    let best_cv = population.iter().map(|i| i.cv).fold(f64::INFINITY, f64::min);
    GenStats { gen, best_uc, mean_uc, best_cv, gap: (mean_uc - best_uc) / best_uc }
}

/// Outcome of one GA run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    /// Best member of the final population (by elitism, the best ever seen).
    pub best: Individual,
    /// Statistics per generation, index 0 being the initial population.
    pub history: Vec<GenStats>,
    /// First generation whose gap fell below the configured threshold.
    pub convergence_gen: Option<usize>,
    /// Total fitness evaluations: N·(generations + 1).
    pub evaluations: usize,
    /// Seed the run was performed with.
    pub seed: u64,
}

/// Runs the GA against a model and depth-allocation table.
pub fn run(model: &Model, table: &PairTable, config: &GaConfig) -> Result<RunResult> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut population = initialize(config, model, table, &mut rng);
    let mut history = Vec::with_capacity(config.generations + 1);
    history.push(stats(0, &population));

    for gen in 1..=config.generations {
        let selected = tournament_select(&population, &mut rng);
        let mut offspring_genomes: Vec<Genome> = Vec::with_capacity(config.pop_size);
        for pair in selected.chunks_exact(2) {
            let (a, b) =
                two_point_crossover(&pair[0].genome, &pair[1].genome, config.p_c, &mut rng);
            offspring_genomes.push(a);
            offspring_genomes.push(b);
        }
        for genome in &mut offspring_genomes {
            mutate(genome, config.p_m, &mut rng);
        }
        let offspring: Vec<Individual> =
            offspring_genomes.into_iter().map(|g| evaluate(g, config, model, table)).collect();
        population = elitist_replace(population, offspring);
        history.push(stats(gen, &population));
    }

    let best = population
        .iter()
        .min_by(|a, b| dominance(a, b))
        .expect("population is never empty")
        .clone();
    let convergence_gen =
        history.iter().find(|s| s.gap.is_finite() && s.gap < config.gap_threshold).map(|s| s.gen);
    Ok(RunResult {
        best,
        history,
        convergence_gen,
        evaluations: config.pop_size * (config.generations + 1),
        seed: config.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::problem::{DepthGrid, ProblemData};
    use approx::assert_relative_eq;

    fn model() -> Model {
        Model::new(ProblemData::default()).unwrap()
    }

    /// The coarse half-millimetre table with nine rows.
    fn nine_row_setup() -> (Model, PairTable) {
        let mut p = ProblemData::default();
        p.finish_depths = DepthGrid { min_tenths: 10, max_tenths: 20, step_tenths: 5 };
        p.rough_depths = DepthGrid { min_tenths: 5, max_tenths: 40, step_tenths: 5 };
        let table = PairTable::build(&p, 60).unwrap();
        (Model::new(p).unwrap(), table)
    }

    fn dummy(uc: f64, cv: f64) -> Individual {
        Individual {
            genome: Vec::new(),
            plan: Plan {
                v_s: 100.0,
                f_s: 0.2,
                v_r: 60.0,
                f_r: 0.3,
                ds_tenths: 20,
                dr_tenths: 40,
                n: 1,
            },
            uc,
            cv,
        }
    }

    #[test]
    fn decode_real_hits_bounds_and_reference_value() {
        assert_eq!(decode_real(&[false; 15], 50.0, 300.0), 50.0);
        assert_eq!(decode_real(&[true; 15], 50.0, 300.0), 300.0);
        // DV = 16383 over 15 bits on [50, 300].
        let mut bits = [true; 15];
        bits[0] = false;
        assert_relative_eq!(decode_real(&bits, 50.0, 300.0), 174.996_185_2, max_relative = 1e-9);
    }

    #[test]
    fn decode_index_scales_with_rounding() {
        assert_eq!(decode_index(&[false; 5], 9), 1);
        assert_eq!(decode_index(&[true; 5], 9), 9);
        // DV = 16 over 5 bits with 9 rows: 1 + round(16·8/31) = 5.
        let bits = [true, false, false, false, false];
        assert_eq!(decode_index(&bits, 9), 5);
        // Degenerate one-row table always selects row 1.
        assert_eq!(decode_index(&[true; 5], 1), 1);
    }

    #[test]
    fn genome_decoding_is_total_and_respects_bounds() {
        let (m, table) = nine_row_setup();
        let config = GaConfig::default();
        assert_eq!(config.index_bits_for(table.len()), 4);
        let len = config.genome_len(table.len());
        assert_eq!(len, 64);

        let zeros = vec![false; len];
        let plan = decode_genome(&zeros, &config, &m, &table);
        assert_eq!((plan.v_s, plan.f_s, plan.v_r, plan.f_r), (50.0, 0.1, 50.0, 0.1));
        assert_eq!((plan.ds_tenths, plan.dr_tenths, plan.n), (10, 5, 10));

        let ones = vec![true; len];
        let plan = decode_genome(&ones, &config, &m, &table);
        assert_eq!((plan.v_s, plan.v_r, plan.f_r), (300.0, 300.0, 0.6));
        assert_relative_eq!(plan.f_s, 0.279_072_786_1, max_relative = 1e-9);
        assert_eq!((plan.ds_tenths, plan.dr_tenths, plan.n), (20, 40, 1));
    }

    #[test]
    fn five_index_bits_reproduce_the_sixty_five_bit_genome() {
        let config = GaConfig { index_bits: Some(5), ..GaConfig::default() };
        assert_eq!(config.genome_len(9), 65);
        // The default twenty-row table needs five index bits on its own.
        let auto = GaConfig::default();
        assert_eq!(auto.genome_len(20), 65);
    }

    #[test]
    fn tournament_applies_feasibility_dominance() {
        let cheap = dummy(1.4, 0.0);
        let dear = dummy(1.5, 0.0);
        assert_eq!(tournament_winner(&dear, &cheap).uc, 1.4);
        let slightly_violating = dummy(1.0, 0.1);
        let badly_violating = dummy(0.5, 0.2);
        assert_relative_eq!(tournament_winner(&slightly_violating, &badly_violating).cv, 0.1);
        // Feasible wins regardless of cost.
        assert_eq!(tournament_winner(&badly_violating, &dear).uc, 1.5);
        // Exact tie: first argument.
        let tie_a = dummy(1.0, 0.0);
        let tie_b = dummy(1.0, 0.0);
        assert!(std::ptr::eq(tournament_winner(&tie_a, &tie_b), &tie_a));
    }

    #[test]
    fn crossover_swaps_the_middle_segment() {
        let a = vec![false; 10];
        let b = vec![true; 10];
        let (ca, cb) = crossover_at(&a, &b, 3, 7);
        let to_str = |g: &Genome| g.iter().map(|&x| if x { '1' } else { '0' }).collect::<String>();
        assert_eq!(to_str(&ca), "0001111000");
        assert_eq!(to_str(&cb), "1110000111");
    }

    #[test]
    fn crossover_probability_zero_copies_parents() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = vec![true, false, true, false, true];
        let b = vec![false, true, false, true, false];
        let (ca, cb) = two_point_crossover(&a, &b, 0.0, &mut rng);
        assert_eq!(ca, a);
        assert_eq!(cb, b);
    }

    #[test]
    fn crossover_conserves_bits_per_locus() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let a: Genome = (0..65).map(|_| rng.gen::<f64>() > 0.5).collect();
            let b: Genome = (0..65).map(|_| rng.gen::<f64>() > 0.5).collect();
            let (ca, cb) = two_point_crossover(&a, &b, 1.0, &mut rng);
            for k in 0..65 {
                assert_eq!(
                    u8::from(ca[k]) + u8::from(cb[k]),
                    u8::from(a[k]) + u8::from(b[k]),
                    "locus {k} lost or gained a bit"
                );
            }
        }
    }

    #[test]
    fn mutation_edge_probabilities() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let original: Genome = (0..64).map(|i| i % 3 == 0).collect();
        let mut untouched = original.clone();
        mutate(&mut untouched, 0.0, &mut rng);
        assert_eq!(untouched, original);
        let mut flipped = original.clone();
        mutate(&mut flipped, 1.0, &mut rng);
        assert!(flipped.iter().zip(&original).all(|(a, b)| a != b));
    }

    #[test]
    fn elitist_replacement_covers_all_three_cases() {
        // Case 1: more feasible members than slots — cheapest N survive.
        let original = vec![dummy(3.0, 0.0), dummy(1.0, 0.0)];
        let offspring = vec![dummy(2.0, 0.0), dummy(4.0, 0.0)];
        let next = elitist_replace(original, offspring);
        let ucs: Vec<f64> = next.iter().map(|i| i.uc).collect();
        assert_eq!(ucs, vec![1.0, 2.0]);

        // Case 2: fewer feasible than slots — feasible plus lowest CV.
        let original = vec![dummy(9.0, 0.5), dummy(1.0, 0.0)];
        let offspring = vec![dummy(0.5, 0.3), dummy(0.1, 0.7)];
        let next = elitist_replace(original, offspring);
        assert!(next[0].is_feasible() && next[0].uc == 1.0);
        assert_eq!(next[1].cv, 0.3);

        // Case 3: exactly N feasible — precisely the feasible set.
        let original = vec![dummy(5.0, 0.0), dummy(7.0, 0.2)];
        let offspring = vec![dummy(6.0, 0.0), dummy(2.0, 0.9)];
        let next = elitist_replace(original, offspring);
        assert!(next.iter().all(Individual::is_feasible));
        let ucs: Vec<f64> = next.iter().map(|i| i.uc).collect();
        assert_eq!(ucs, vec![5.0, 6.0]);
    }

    #[test]
    fn replacement_prefers_parents_on_exact_ties() {
        let parent = dummy(1.0, 0.0);
        let mut child = dummy(1.0, 0.0);
        child.genome = vec![true];
        let next = elitist_replace(vec![parent, dummy(2.0, 0.0)], vec![child, dummy(3.0, 0.0)]);
        assert!(next[0].genome.is_empty(), "parent must win the exact tie");
    }

    #[test]
    fn initialization_is_seed_deterministic_with_balanced_bits() {
        let m = model();
        let table = PairTable::build(m.problem(), 60).unwrap();
        let config = GaConfig { pop_size: 200, ..GaConfig::default() };
        let mut rng_a = ChaCha8Rng::seed_from_u64(42);
        let mut rng_b = ChaCha8Rng::seed_from_u64(42);
        let pop_a = initialize(&config, &m, &table, &mut rng_a);
        let pop_b = initialize(&config, &m, &table, &mut rng_b);
        assert_eq!(pop_a, pop_b);

        let bits: usize = pop_a.iter().map(|i| i.genome.iter().filter(|&&b| b).count()).sum();
        let total = (200 * config.genome_len(table.len())) as f64;
        let mean = bits as f64 / total;
        let sigma = 0.5 / total.sqrt();
        assert!((mean - 0.5).abs() < 3.0 * sigma, "bit mean {mean} outside the 3σ band");
    }

    #[test]
    fn run_is_deterministic_and_elitist() {
        let m = model();
        let table = PairTable::build(m.problem(), 60).unwrap();
        let config = GaConfig { pop_size: 60, generations: 40, ..GaConfig::default() };
        let a = run(&m, &table, &config).unwrap();
        let b = run(&m, &table, &config).unwrap();
        assert_eq!(a, b, "same seed must reproduce the identical trace");
        assert_eq!(a.evaluations, 60 * 41);
        assert_eq!(a.history.len(), 41);
        // Elitism: the feasible best never worsens generation over generation.
        for w in a.history.windows(2) {
            if !w[0].best_uc.is_nan() {
                assert!(
                    w[1].best_uc <= w[0].best_uc + 1e-15,
                    "best UC worsened: {} -> {}",
                    w[0].best_uc,
                    w[1].best_uc
                );
            }
            assert!(w[1].best_cv <= w[0].best_cv + 1e-15, "best CV worsened");
        }
    }

    #[test]
    fn default_run_reaches_the_oracle_optimum() {
        let m = model();
        let table = PairTable::build(m.problem(), 60).unwrap();
        let reference = oracle::global_optimum(&m, &table).unwrap();
        let result = run(&m, &table, &GaConfig::default()).unwrap();
        assert!(result.best.is_feasible());
        assert!(
            result.best.uc >= reference.uc - 1e-9,
            "GA cannot beat the exact optimum: {} vs {}",
            result.best.uc,
            reference.uc
        );
        let rel = (result.best.uc - reference.uc) / reference.uc;
        assert!(rel < 1e-3, "default run should land within 0.1% of the oracle, got {rel}");
        let plan = result.best.plan;
        assert_eq!((plan.ds_tenths, plan.dr_tenths, plan.n), (20, 40, 1));
    }
}
