//! Seeded verification campaigns over builtin catalogs.
//!
//! A campaign is a deterministic pseudo-random walk over (algebra,
//! congruence, congruence) triples and ladder constructions; each attempt
//! derives its own RNG from the campaign seed by a splittable scheme, so
//! the report is a pure function of the configuration and catalog bytes.
//!
//! Hypotheses-unmet never counts as success; for those instances the
//! report additionally records whether the conclusion happened to hold,
//! for exploratory statistics only.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{
    congruence_join, enumerate_congruences, generate_subalgebra, induced_quotient_map, quotient,
    Congruence, FiniteAlgebra, VarietyPreset,
};
use crate::hom::{conjugate_by_permutation, corestrict, image_factorize};
use crate::io::catalog_hash;
use crate::lemmas::{
    build_quotient_grid, generate_grid, verify_nine, verify_pb_iff_mono, verify_regepi_transfer,
    verify_short_five, LadderDiagram, NineVariant, ShortFiveMode,
};
use crate::verdict::{Verdict, VerdictKind};
use crate::zcore::zkernel;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum CampaignError {
    #[error("catalog is empty")]
    EmptyCatalog,
    #[error("count must be at least 1")]
    ZeroCount,
    #[error("gave up after {attempted} attempts with {accepted} accepted instances")]
    TargetUnreachable { attempted: u64, accepted: u64 },
}

/// Which statement a campaign exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LemmaSelector {
    ShortFive(ShortFiveMode),
    PbIffMono,
    RegEpiTransfer,
    Nine(NineVariant),
}

impl LemmaSelector {
    pub fn as_str(self) -> &'static str {
        match self {
            LemmaSelector::ShortFive(ShortFiveMode::Iso) => "short-five-iso",
            LemmaSelector::ShortFive(ShortFiveMode::RegEpi) => "short-five-regepi",
            LemmaSelector::ShortFive(ShortFiveMode::Mono) => "short-five-mono",
            LemmaSelector::PbIffMono => "pb-iff-mono",
            LemmaSelector::RegEpiTransfer => "regepi-transfer",
            LemmaSelector::Nine(NineVariant::A) => "nine-a",
            LemmaSelector::Nine(NineVariant::B) => "nine-b",
            LemmaSelector::Nine(NineVariant::C) => "nine-c",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CampaignConfig {
    pub seed: u64,
    pub preset: VarietyPreset,
    pub catalog: Vec<Arc<FiniteAlgebra>>,
    /// Target number of accepted instances.
    pub count: usize,
    pub variant: LemmaSelector,
}

#[derive(Debug, Clone, Default, Serialize, PartialEq, Eq)]
pub struct CampaignCounters {
    pub attempted: u64,
    /// Generation-level rejections (grid filters).
    pub rejected: u64,
    /// Instances whose hypotheses all held; equals held + failed.
    pub accepted: u64,
    pub held: u64,
    pub failed: u64,
    pub hypotheses_unmet: u64,
    /// Among hypotheses-unmet instances, how often the conclusion held
    /// anyway.
    pub exploratory_conclusion_held: u64,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CampaignReport {
    pub seed: u64,
    pub lemma: String,
    pub preset: String,
    pub catalog_hash: String,
    pub count_target: usize,
    pub counters: CampaignCounters,
    pub rejections: BTreeMap<String, u64>,
    pub failures: Vec<Value>,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Per-instance RNG derived from the campaign seed; instances are
/// independent, so execution order cannot affect the report.
fn instance_rng(seed: u64, attempt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(attempt)))
}

struct CongruenceCache {
    per_algebra: Vec<Option<Vec<Congruence>>>,
}

impl CongruenceCache {
    fn new(len: usize) -> Self {
        CongruenceCache {
            per_algebra: vec![None; len],
        }
    }

    fn get(&mut self, catalog: &[Arc<FiniteAlgebra>], idx: usize) -> &[Congruence] {
        if self.per_algebra[idx].is_none() {
            self.per_algebra[idx] =
                Some(enumerate_congruences(&catalog[idx]).expect("catalog algebras are small"));
        }
        self.per_algebra[idx].as_ref().unwrap()
    }
}

enum Generated {
    Ladder(LadderDiagram, Value),
    Grid(crate::lemmas::Grid3x3, Value),
    Portion(crate::lemmas::GridLowerTwoThirds, Value),
    Rejected(&'static str),
}

/// Bottom row from a quotient, top row an isomorphic conjugate: both outer
/// rungs are isomorphisms.
fn gen_iso_ladder(
    rng: &mut ChaCha8Rng,
    catalog: &[Arc<FiniteAlgebra>],
    congs: &mut CongruenceCache,
) -> Generated {
    let idx = rng.random_range(0..catalog.len());
    let aprime = catalog[idx].clone();
    let psi = {
        let list = congs.get(catalog, idx);
        list[rng.random_range(0..list.len())].clone()
    };
    let q = quotient(&aprime, &psi);
    let fp = q.surjection.clone();
    let ker_p = zkernel(&fp);
    let mut sigma: Vec<usize> = (0..aprime.size()).collect();
    sigma.shuffle(rng);
    let mut tau: Vec<usize> = (0..q.algebra.size()).collect();
    tau.shuffle(rng);
    let (_, a) = conjugate_by_permutation(&aprime, &sigma);
    let (_, b) = conjugate_by_permutation(&q.algebra, &tau);
    let f = a
        .then(&fp)
        .unwrap()
        .then(&b.invert().expect("permutation iso"))
        .unwrap();
    let ker_top = zkernel(&f);
    let u = corestrict(&ker_top.k().then(&a).unwrap(), ker_p.sub())
        .expect("isomorphisms restrict to kernels");
    let desc = json!({
        "construction": "conjugated-quotient",
        "algebra": aprime.id(),
        "psi": psi.blocks(),
        "sigma": sigma,
        "tau": tau,
    });
    match LadderDiagram::new(
        ker_top.k().clone(),
        f,
        ker_p.k().clone(),
        fp,
        u,
        a,
        b,
    ) {
        Ok(d) => Generated::Ladder(d, desc),
        Err(_) => Generated::Rejected("ladder-construction"),
    }
}

/// Both rows from quotients of the same algebra: outer rungs are the
/// canonical (induced) surjections.
fn gen_quotient_ladder(
    rng: &mut ChaCha8Rng,
    catalog: &[Arc<FiniteAlgebra>],
    congs: &mut CongruenceCache,
) -> Generated {
    let idx = rng.random_range(0..catalog.len());
    let a0 = catalog[idx].clone();
    let (theta, psi) = {
        let list = congs.get(catalog, idx);
        (
            list[rng.random_range(0..list.len())].clone(),
            list[rng.random_range(0..list.len())].clone(),
        )
    };
    let q_psi = quotient(&a0, &psi); // f : A0 -> B
    let q_theta = quotient(&a0, &theta); // a : A0 -> A'
    let join = congruence_join(&theta, &psi).expect("same algebra");
    let q_join = quotient(&a0, &join); // B' = A0/(θ∨ψ)
    let f = q_psi.surjection.clone();
    let a = q_theta.surjection.clone();
    let b = induced_quotient_map(&q_psi, &psi, &q_join, &join).expect("refines");
    let fp = induced_quotient_map(&q_theta, &theta, &q_join, &join).expect("refines");
    let ker_top = zkernel(&f);
    let ker_bot = zkernel(&fp);
    let u = match corestrict(&ker_top.k().then(&a).unwrap(), ker_bot.sub()) {
        Ok(u) => u,
        Err(_) => return Generated::Rejected("kernel-restriction"),
    };
    let desc = json!({
        "construction": "quotient-pair",
        "algebra": a0.id(),
        "theta": theta.blocks(),
        "psi": psi.blocks(),
    });
    match LadderDiagram::new(
        ker_top.k().clone(),
        f,
        ker_bot.k().clone(),
        fp,
        u,
        a,
        b,
    ) {
        Ok(d) => Generated::Ladder(d, desc),
        Err(_) => Generated::Rejected("ladder-construction"),
    }
}

/// Top row a subalgebra of the bottom row: outer rungs are inclusions.
fn gen_sub_ladder(
    rng: &mut ChaCha8Rng,
    catalog: &[Arc<FiniteAlgebra>],
    congs: &mut CongruenceCache,
) -> Generated {
    let idx = rng.random_range(0..catalog.len());
    let aprime = catalog[idx].clone();
    let psi = {
        let list = congs.get(catalog, idx);
        list[rng.random_range(0..list.len())].clone()
    };
    let q = quotient(&aprime, &psi);
    let fp = q.surjection.clone();
    let ker_p = zkernel(&fp);
    let nseeds = rng.random_range(0..=aprime.size());
    let mut pool: Vec<usize> = (0..aprime.size()).collect();
    pool.shuffle(rng);
    let seeds: Vec<usize> = pool.into_iter().take(nseeds).collect();
    let sub = generate_subalgebra(&aprime, &seeds).expect("seeds in range");
    let a = sub.inclusion.clone();
    let fact = image_factorize(&a.then(&fp).unwrap());
    let f = fact.epi;
    let b = fact.mono;
    let ker_top = zkernel(&f);
    let u = match corestrict(&ker_top.k().then(&a).unwrap(), ker_p.sub()) {
        Ok(u) => u,
        Err(_) => return Generated::Rejected("kernel-restriction"),
    };
    let desc = json!({
        "construction": "subalgebra",
        "algebra": aprime.id(),
        "psi": psi.blocks(),
        "seeds": seeds,
    });
    match LadderDiagram::new(
        ker_top.k().clone(),
        f,
        ker_p.k().clone(),
        fp,
        u,
        a,
        b,
    ) {
        Ok(d) => Generated::Ladder(d, desc),
        Err(_) => Generated::Rejected("ladder-construction"),
    }
}

fn pick_congruence_pair(
    rng: &mut ChaCha8Rng,
    catalog: &[Arc<FiniteAlgebra>],
    congs: &mut CongruenceCache,
) -> (Arc<FiniteAlgebra>, Congruence, Congruence, Value) {
    let idx = rng.random_range(0..catalog.len());
    let aprime = catalog[idx].clone();
    let list = congs.get(catalog, idx);
    let theta = list[rng.random_range(0..list.len())].clone();
    let psi = list[rng.random_range(0..list.len())].clone();
    let desc = json!({
        "algebra": aprime.id(),
        "theta": theta.blocks(),
        "psi": psi.blocks(),
    });
    (aprime, theta, psi, desc)
}

fn generate(
    selector: LemmaSelector,
    rng: &mut ChaCha8Rng,
    catalog: &[Arc<FiniteAlgebra>],
    congs: &mut CongruenceCache,
) -> Generated {
    match selector {
        LemmaSelector::ShortFive(ShortFiveMode::Iso) => gen_iso_ladder(rng, catalog, congs),
        LemmaSelector::ShortFive(ShortFiveMode::RegEpi) => {
            gen_quotient_ladder(rng, catalog, congs)
        }
        LemmaSelector::ShortFive(ShortFiveMode::Mono) => gen_sub_ladder(rng, catalog, congs),
        LemmaSelector::PbIffMono => {
            if rng.random_range(0..2) == 0 {
                gen_quotient_ladder(rng, catalog, congs)
            } else {
                gen_sub_ladder(rng, catalog, congs)
            }
        }
        LemmaSelector::RegEpiTransfer => {
            let (aprime, theta, psi, desc) = pick_congruence_pair(rng, catalog, congs);
            match build_quotient_grid(&aprime, &theta, &psi) {
                Ok(grid) => Generated::Portion(grid.lower_two_thirds(), desc),
                Err(reason) => Generated::Rejected(reason.key()),
            }
        }
        LemmaSelector::Nine(_) => {
            let (aprime, theta, psi, desc) = pick_congruence_pair(rng, catalog, congs);
            match generate_grid(&aprime, &theta, &psi) {
                Ok(grid) => Generated::Grid(grid, desc),
                Err(reason) => Generated::Rejected(reason.key()),
            }
        }
    }
}

fn verify(selector: LemmaSelector, generated: &Generated) -> Option<Verdict> {
    match (selector, generated) {
        (LemmaSelector::ShortFive(mode), Generated::Ladder(d, _)) => {
            Some(verify_short_five(d, mode))
        }
        (LemmaSelector::PbIffMono, Generated::Ladder(d, _)) => Some(verify_pb_iff_mono(d)),
        (LemmaSelector::RegEpiTransfer, Generated::Portion(p, _)) => {
            Some(verify_regepi_transfer(p))
        }
        (LemmaSelector::Nine(v), Generated::Grid(g, _)) => Some(verify_nine(g, v)),
        _ => None,
    }
}

/// Maximum attempts per requested instance before giving up.
const ATTEMPT_FACTOR: u64 = 1000;

pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport, CampaignError> {
    if cfg.catalog.is_empty() {
        return Err(CampaignError::EmptyCatalog);
    }
    if cfg.count == 0 {
        return Err(CampaignError::ZeroCount);
    }
    let mut counters = CampaignCounters::default();
    let mut rejections: BTreeMap<String, u64> = BTreeMap::new();
    let mut failures: Vec<Value> = Vec::new();
    let mut congs = CongruenceCache::new(cfg.catalog.len());
    let max_attempts = ATTEMPT_FACTOR * cfg.count as u64;
    while counters.accepted < cfg.count as u64 {
        if counters.attempted >= max_attempts {
            return Err(CampaignError::TargetUnreachable {
                attempted: counters.attempted,
                accepted: counters.accepted,
            });
        }
        let attempt = counters.attempted;
        counters.attempted += 1;
        let mut rng = instance_rng(cfg.seed, attempt);
        let generated = generate(cfg.variant, &mut rng, &cfg.catalog, &mut congs);
        if let Generated::Rejected(reason) = &generated {
            counters.rejected += 1;
            *rejections.entry(reason.to_string()).or_insert(0) += 1;
            continue;
        }
        let verdict = verify(cfg.variant, &generated).expect("selector matches generator");
        match verdict.kind {
            VerdictKind::Holds => {
                counters.accepted += 1;
                counters.held += 1;
            }
            VerdictKind::Fails => {
                counters.accepted += 1;
                counters.failed += 1;
                let desc = match &generated {
                    Generated::Ladder(_, d) | Generated::Grid(_, d) | Generated::Portion(_, d) => {
                        d.clone()
                    }
                    Generated::Rejected(_) => unreachable!(),
                };
                failures.push(json!({
                    "attempt": attempt,
                    "instance": desc,
                    "verdict": serde_json::to_value(&verdict).expect("verdict serializes"),
                }));
            }
            VerdictKind::HypothesesUnmet => {
                counters.hypotheses_unmet += 1;
                if verdict.exploratory == Some(true) {
                    counters.exploratory_conclusion_held += 1;
                }
            }
        }
    }
    Ok(CampaignReport {
        seed: cfg.seed,
        lemma: cfg.variant.as_str().to_string(),
        preset: cfg.preset.name().to_string(),
        catalog_hash: format!("{:016x}", catalog_hash(&cfg.catalog)),
        count_target: cfg.count,
        counters,
        rejections,
        failures,
    })
}
