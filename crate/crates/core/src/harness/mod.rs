//! Property suites, example replays and witness searches.
//!
//! Every suite is a pure function of its [`SuiteConfig`]. Instances are
//! evaluated in parallel, each with its own generator stream, and the
//! collected counts and violations are merged and sorted before reporting,
//! so the JSON form of a [`SuiteReport`] depends only on the suite name,
//! seed and bounds.

mod demo;
mod gen;
mod search;
mod suites;

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

pub use demo::{demo, DemoCheck, DemoReport, DEMO_IDS};
pub use gen::{random_family, random_nest};
pub use search::{search, SearchMode, SearchSpec, SEARCH_TARGETS};

/// Environment variable holding the worker count.
pub const WORKERS_ENV: &str = "NESTKIT_WORKERS";
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_ITERS: usize = 10_000;
pub const MAX_ITERS: usize = 1_000_000;
/// Exhaustive sweeps stop here.
pub const MAX_EXHAUSTIVE_N: usize = 4;
/// Random sweeps draw universes up to this size.
pub const MAX_RANDOM_N: usize = 6;
/// Stored violations per property; the counts are always complete.
pub const MAX_STORED_VIOLATIONS: usize = 25;

/// Registered suite names, canonical form first.
pub const SUITES: &[&str] = &[
    "paper-examples",
    "finite-core",
    "section2",
    "lemma2.1-product-form",
    "topology",
    "section3",
    "interlocking-triple",
    "section4",
    "section5",
    "ray-nests",
    "all",
];

pub fn canonical_suite(name: &str) -> Option<&'static str> {
    let n = match name {
        "order-gen" => "section2",
        "topo" => "topology",
        "nest-analysis" => "section3",
        "bounds" => "section4",
        "group-nests" => "section5",
        other => other,
    };
    SUITES.iter().copied().find(|s| *s == n)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    /// Largest universe for exhaustive sweeps; `None` takes the suite default.
    pub max_n: Option<usize>,
    pub seed: u64,
    /// Random instances per randomized check.
    pub iters: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { max_n: None, seed: DEFAULT_SEED, iters: DEFAULT_ITERS }
    }
}

impl SuiteConfig {
    fn validate(&self) -> Result<()> {
        if let Some(n) = self.max_n {
            if n == 0 {
                return Err(Error::EmptyUniverse);
            }
            if n > MAX_EXHAUSTIVE_N {
                return Err(Error::BoundExceeded { size: n, limit: MAX_EXHAUSTIVE_N });
            }
        }
        if self.iters > MAX_ITERS {
            return Err(Error::BoundExceeded { size: self.iters, limit: MAX_ITERS });
        }
        Ok(())
    }

    fn max_n_or(&self, default: usize) -> usize {
        self.max_n.unwrap_or(default)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckStats {
    /// Instances the check was evaluated on.
    pub instances: u64,
    /// Instances where the premise held (equalities count every instance).
    pub premise_held: u64,
    pub violations: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub property: String,
    pub instance: Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportBounds {
    pub max_n: usize,
    pub random_max_n: usize,
    pub iters: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub bounds: ReportBounds,
    pub instances: u64,
    pub checks: BTreeMap<String, CheckStats>,
    pub violations: Vec<Violation>,
    pub notes: Vec<String>,
    /// False when a search ran out of budget.
    pub complete: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Value>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.checks.values().all(|c| c.violations == 0)
    }

    pub fn violation_count(&self) -> u64 {
        self.checks.values().map(|c| c.violations).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")
            .map_err(|e| Error::Format(format!("cannot write {}: {e}", path.display())))
    }

    /// Aligned plain-text summary.
    pub fn render(&self) -> String {
        let width = self.checks.keys().map(|k| k.chars().count()).max().unwrap_or(0);
        let mut out = format!(
            "suite {}  seed {}  max_n {}  random_max_n {}  iters {}\n",
            self.suite, self.seed, self.bounds.max_n, self.bounds.random_max_n, self.bounds.iters
        );
        for (name, c) in &self.checks {
            let pad = width - name.chars().count();
            out += &format!(
                "  {name}{}  instances {:>8}  premise {:>8}  violations {}\n",
                " ".repeat(pad),
                c.instances,
                c.premise_held,
                c.violations
            );
        }
        for note in &self.notes {
            out += &format!("  note: {note}\n");
        }
        for v in &self.violations {
            out += &format!("  VIOLATION {}: {}\n", v.property, v.instance);
        }
        if !self.witnesses.is_empty() {
            out += &format!("  witnesses: {}\n", self.witnesses.len());
        }
        if !self.complete {
            out += "  incomplete: budget exhausted\n";
        }
        out += &format!(
            "{}: {} instances, {} violations, {:.2?}\n",
            if self.passed() { "PASS" } else { "FAIL" },
            self.instances,
            self.violation_count(),
            self.wall_time
        );
        out
    }
}

/// Per-worker accumulator. Merging is commutative up to the final sort.
#[derive(Clone, Debug, Default)]
pub(crate) struct Collector {
    instances: u64,
    checks: BTreeMap<String, CheckStats>,
    violations: Vec<Violation>,
}

impl Collector {
    pub(crate) fn instance(&mut self) {
        self.instances += 1;
    }

    /// Record `premise ⇒ conclusion`.
    pub(crate) fn implies(
        &mut self,
        id: &str,
        premise: bool,
        conclusion: bool,
        instance: impl FnOnce() -> Value,
    ) {
        let stats = self.checks.entry(id.to_string()).or_default();
        stats.instances += 1;
        if premise {
            stats.premise_held += 1;
            if !conclusion {
                stats.violations += 1;
                self.violations.push(Violation { property: id.to_string(), instance: instance() });
            }
        }
    }

    pub(crate) fn holds(&mut self, id: &str, ok: bool, instance: impl FnOnce() -> Value) {
        self.implies(id, true, ok, instance);
    }

    pub(crate) fn merge(mut self, other: Collector) -> Collector {
        self.instances += other.instances;
        for (k, v) in other.checks {
            let s = self.checks.entry(k).or_default();
            s.instances += v.instances;
            s.premise_held += v.premise_held;
            s.violations += v.violations;
        }
        self.violations.extend(other.violations);
        self
    }

    /// Prefix every check id, for the combined suite.
    pub(crate) fn prefixed(self, prefix: &str) -> Collector {
        Collector {
            instances: self.instances,
            checks: self.checks.into_iter().map(|(k, v)| (format!("{prefix}/{k}"), v)).collect(),
            violations: self
                .violations
                .into_iter()
                .map(|v| Violation { property: format!("{prefix}/{}", v.property), ..v })
                .collect(),
        }
    }

    pub(crate) fn checks(&self) -> &BTreeMap<String, CheckStats> {
        &self.checks
    }

    fn finish(mut self) -> (u64, BTreeMap<String, CheckStats>, Vec<Violation>) {
        self.violations.sort_by_cached_key(|v| (v.property.clone(), v.instance.to_string()));
        let mut kept: Vec<Violation> = Vec::new();
        let mut per: BTreeMap<String, usize> = BTreeMap::new();
        for v in self.violations {
            let c = per.entry(v.property.clone()).or_default();
            if *c < MAX_STORED_VIOLATIONS {
                *c += 1;
                kept.push(v);
            }
        }
        (self.instances, self.checks, kept)
    }
}

/// Evaluate `f` on every item in parallel and merge the results.
pub(crate) fn sweep<T: Sync>(items: &[T], f: impl Fn(&T, &mut Collector) + Sync) -> Collector {
    items
        .par_iter()
        .fold(Collector::default, |mut c, item| {
            f(item, &mut c);
            c
        })
        .reduce(Collector::default, Collector::merge)
}

/// Run `f` for indices `0..count`, each with a generator derived from
/// `(seed, tag, index)` so the draw does not depend on scheduling.
pub(crate) fn random_sweep(
    seed: u64,
    tag: u64,
    count: usize,
    f: impl Fn(&mut ChaCha8Rng, &mut Collector) + Sync,
) -> Collector {
    (0..count)
        .into_par_iter()
        .fold(Collector::default, |mut c, i| {
            let mut rng = instance_rng(seed, tag, i as u64);
            f(&mut rng, &mut c);
            c
        })
        .reduce(Collector::default, Collector::merge)
}

pub(crate) fn instance_rng(seed: u64, tag: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    rng.set_stream(index);
    rng
}

/// Worker count from [`WORKERS_ENV`], if set to a positive integer.
pub fn configured_workers() -> Result<Option<usize>> {
    match std::env::var(WORKERS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(0) | Err(_) => Err(Error::Format(format!("{WORKERS_ENV} must be a positive integer, got {v:?}"))),
            Ok(k) => Ok(Some(k)),
        },
    }
}

/// Run `f` on a pool sized by [`WORKERS_ENV`], or on the global pool.
pub fn with_workers<R: Send>(f: impl FnOnce() -> R + Send) -> Result<R> {
    match configured_workers()? {
        None => Ok(f()),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| Error::Format(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// What a suite body hands back.
pub(crate) struct SuiteOutput {
    pub collector: Collector,
    pub notes: Vec<String>,
    pub max_n: usize,
    pub random_max_n: usize,
}

pub fn run_suite(name: &str, config: &SuiteConfig) -> Result<SuiteReport> {
    let suite = canonical_suite(name).ok_or_else(|| Error::UnknownName(name.to_string()))?;
    config.validate()?;
    let start = Instant::now();
    let out = with_workers(|| suites::run(suite, config))??;
    let (instances, checks, violations) = out.collector.finish();
    Ok(SuiteReport {
        suite: suite.to_string(),
        seed: config.seed,
        bounds: ReportBounds { max_n: out.max_n, random_max_n: out.random_max_n, iters: config.iters },
        instances,
        checks,
        violations,
        notes: out.notes,
        complete: true,
        witnesses: Vec::new(),
        wall_time: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collector_merge_is_order_independent() {
        let mut a = Collector::default();
        a.holds("p", false, || Value::from(2));
        a.instance();
        let mut b = Collector::default();
        b.holds("p", false, || Value::from(1));
        b.implies("q", false, false, || Value::Null);
        let (n1, c1, v1) = a.clone().merge(b.clone()).finish();
        let (n2, c2, v2) = b.merge(a).finish();
        assert_eq!((n1, &c1, &v1), (n2, &c2, &v2));
        assert_eq!(v1[0].instance, Value::from(1));
        assert_eq!(c1["q"], CheckStats { instances: 1, premise_held: 0, violations: 0 });
    }

    #[test]
    fn unknown_suite_and_bounds() {
        assert!(matches!(run_suite("nope", &SuiteConfig::default()), Err(Error::UnknownName(_))));
        let cfg = SuiteConfig { max_n: Some(5), ..SuiteConfig::default() };
        assert!(matches!(run_suite("section3", &cfg), Err(Error::BoundExceeded { .. })));
        assert_eq!(canonical_suite("bounds"), Some("section4"));
    }

    #[test]
    fn instance_streams_are_stable() {
        use rand::Rng;
        let a: u64 = instance_rng(7, 1, 3).gen();
        let b: u64 = instance_rng(7, 1, 3).gen();
        let c: u64 = instance_rng(7, 1, 4).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
