//! Sampled consistency of abstract filters with concrete ones, and sampled
//! monotonicity of abstract filters.

use rand::rngs::StdRng;
use rand::SeedableRng;

use crate::exec::{self, trial_seed, Exec};
use crate::language::{ASlot, AbstractOutput, Carriers, FilterSig, Language, Slot};

/// Draws filter arguments for one signature.
/// Abstract arguments with concrete arguments inside them.
pub type Sampled<C> = (
    Vec<Slot<<C as Carriers>::Value>>,
    Vec<ASlot<<C as Carriers>::Abs>>,
);
/// Two abstract argument tuples.
pub type Ordered<C> = (
    Vec<ASlot<<C as Carriers>::Abs>>,
    Vec<ASlot<<C as Carriers>::Abs>>,
);

pub trait FilterSampler<C: Carriers>: Sync {
    /// Abstract arguments together with concrete arguments inside them.
    fn sample(&self, sig: &FilterSig, rng: &mut StdRng) -> Option<Sampled<C>>;

    /// Two abstract argument tuples, the first pointwise below the second.
    fn sample_ordered(&self, sig: &FilterSig, rng: &mut StdRng) -> Option<Ordered<C>>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilterReport {
    pub filter: String,
    pub trials: usize,
    /// Trials in which the concrete filter produced at least one output.
    pub related: usize,
    pub violations: usize,
    /// The first few violations.
    pub counterexamples: Vec<String>,
    pub monotonicity_trials: usize,
    pub monotonicity_failures: usize,
    pub monotonicity_violations: Vec<String>,
}

impl FilterReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.monotonicity_failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub filters: Vec<FilterReport>,
}

impl ConsistencyReport {
    pub fn passed(&self) -> bool {
        self.filters.iter().all(FilterReport::passed)
    }
}

/// Pointwise order on abstract filter results; `Bottom` is least and a tuple
/// of bottoms is equivalent to it.
pub fn output_leq<C: Carriers>(a: &AbstractOutput<C::Abs>, b: &AbstractOutput<C::Abs>) -> bool {
    match (a, b) {
        (AbstractOutput::Bottom, _) => true,
        (AbstractOutput::Values(v), AbstractOutput::Bottom) => {
            !v.is_empty() && v.iter().all(C::is_bottom)
        }
        (AbstractOutput::Values(v), AbstractOutput::Values(w)) => {
            v.len() == w.len() && v.iter().zip(w).all(|(x, y)| C::leq(x, y))
        }
    }
}

const KEEP: usize = 5;

fn name_seed(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x100_0000_01b3)
    })
}

enum Outcome {
    Skipped,
    Related(Option<String>),
    Unrelated,
}

fn one_trial<C: Carriers>(
    lang: &Language<C>,
    sig: &FilterSig,
    sampler: &dyn FilterSampler<C>,
    seed: u64,
) -> (Outcome, Option<Option<String>>) {
    let mut rng = StdRng::seed_from_u64(seed);
    let conc = lang.concrete_filter(&sig.name).ok();
    let abs = lang.abstract_filter(&sig.name).ok();
    let (Some(conc), Some(abs)) = (conc, abs) else {
        return (Outcome::Skipped, None);
    };
    let consistency = match sampler.sample(sig, &mut rng) {
        None => Outcome::Skipped,
        Some((vs, avs)) => {
            let outs = conc(&vs);
            if outs.is_empty() {
                Outcome::Unrelated
            } else {
                let a = abs(&avs);
                let bad = outs.iter().find(|w| match &a {
                    AbstractOutput::Bottom => true,
                    AbstractOutput::Values(av) => {
                        av.len() != w.len() || w.iter().zip(av).any(|(x, y)| !C::member(x, y))
                    }
                });
                Outcome::Related(bad.map(|w| {
                    format!(
                        "{}({vs:?}) = {w:?} but {}#({avs:?}) = {a:?}",
                        sig.name, sig.name
                    )
                }))
            }
        }
    };
    let mono = sampler.sample_ordered(sig, &mut rng).map(|(lo, hi)| {
        let (a, b) = (abs(&lo), abs(&hi));
        (!output_leq::<C>(&a, &b)).then(|| {
            format!(
                "{}#({lo:?}) = {a:?} is not below {}#({hi:?}) = {b:?}",
                sig.name, sig.name
            )
        })
    });
    (consistency, mono)
}

/// Runs `trials` samples per filter. Outcomes depend only on `seed`, not on
/// the execution strategy.
pub fn check_filter_consistency<C: Carriers>(
    lang: &Language<C>,
    sampler: &dyn FilterSampler<C>,
    trials: usize,
    seed: u64,
    ex: Exec,
) -> ConsistencyReport {
    let mut filters = Vec::new();
    for sig in &lang.syntax.filters {
        let base = seed ^ name_seed(&sig.name);
        let results = exec::map_range(ex, trials, |i| {
            one_trial(lang, sig, sampler, trial_seed(base, i as u64))
        });
        let mut report = FilterReport {
            filter: sig.name.to_string(),
            trials: 0,
            related: 0,
            violations: 0,
            counterexamples: Vec::new(),
            monotonicity_trials: 0,
            monotonicity_failures: 0,
            monotonicity_violations: Vec::new(),
        };
        for (c, m) in results {
            match c {
                Outcome::Skipped => {}
                Outcome::Unrelated => report.trials += 1,
                Outcome::Related(bad) => {
                    report.trials += 1;
                    report.related += 1;
                    if let Some(b) = bad {
                        report.violations += 1;
                        if report.counterexamples.len() < KEEP {
                            report.counterexamples.push(b);
                        }
                    }
                }
            }
            if let Some(v) = m {
                report.monotonicity_trials += 1;
                if let Some(b) = v {
                    report.monotonicity_failures += 1;
                    if report.monotonicity_violations.len() < KEEP {
                        report.monotonicity_violations.push(b);
                    }
                }
            }
        }
        filters.push(report);
    }
    ConsistencyReport { filters }
}
