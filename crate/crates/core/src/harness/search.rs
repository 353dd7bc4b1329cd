//! Witness and counterexample search over bounded instance spaces.

use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::gen::{random_nest, random_universe};
use super::suites::{all_nests, dual_pairs, nest_json};
use super::{instance_rng, with_workers, Collector, ReportBounds, SuiteReport, MAX_EXHAUSTIVE_N, MAX_RANDOM_N};
use crate::analysis::{
    conditions, is_interlocking_alexandroff, is_interlocking_def, is_interlocking_lowersets, lots_check,
    make_dual_pair, starred_conditions,
};
use crate::error::{Error, Result};
use crate::finite::{Nest, NestEnumerator, SetFamily, Subset};
use crate::group::{order_compatible, prop51_premise, FiniteGroup};

pub const SEARCH_TARGETS: &[&str] = &[
    "thm3.4-equivalence",
    "prop5.1-premise-nontrivial",
    "c3-nontrivial-finite",
    "thm3.3-hypotheses-true",
    "open-q1-candidate",
];

/// Witnesses kept in the report and written to disk.
pub const MAX_KEPT_WITNESSES: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Exhaustive,
    Random,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSpec {
    pub target: String,
    pub max_n: usize,
    /// Cap on nest length.
    pub max_members: Option<usize>,
    pub mode: SearchMode,
    /// Instances examined before the search stops.
    pub budget: usize,
    pub seed: u64,
    /// Group for the group targets; defaults to `Z4`.
    pub group: Option<String>,
    /// Directory receiving one instance file per witness.
    pub out_dir: Option<PathBuf>,
}

impl SearchSpec {
    pub fn new(target: &str, max_n: usize, mode: SearchMode) -> Self {
        SearchSpec {
            target: target.to_string(),
            max_n,
            max_members: None,
            mode,
            budget: 100_000,
            seed: super::DEFAULT_SEED,
            group: None,
            out_dir: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if !SEARCH_TARGETS.contains(&self.target.as_str()) {
            return Err(Error::UnknownName(self.target.clone()));
        }
        if self.max_n == 0 {
            return Err(Error::EmptyUniverse);
        }
        let limit = match self.mode {
            SearchMode::Exhaustive => MAX_EXHAUSTIVE_N,
            SearchMode::Random => MAX_RANDOM_N,
        };
        if self.max_n > limit {
            return Err(Error::BoundExceeded { size: self.max_n, limit });
        }
        Ok(())
    }
}

/// One found object: files to write (suffix, instance) and its report entry.
struct Found {
    files: Vec<(String, Value)>,
    entry: Value,
}

enum Item {
    Nest(Nest),
    Pair(Nest, Nest),
}

fn instances(spec: &SearchSpec, group: Option<&FiniteGroup>) -> Result<(Vec<Item>, bool)> {
    let budget = spec.budget;
    let pairs = matches!(spec.target.as_str(), "thm3.3-hypotheses-true" | "open-q1-candidate");
    let mut items = Vec::new();
    let complete;
    match spec.mode {
        SearchMode::Exhaustive => {
            let nests: Vec<Nest> = match group {
                Some(g) => {
                    if g.order() > MAX_EXHAUSTIVE_N && spec.max_members.is_none() {
                        return Err(Error::BoundExceeded { size: g.order(), limit: MAX_EXHAUSTIVE_N });
                    }
                    NestEnumerator::new(&g.universe(), true, MAX_RANDOM_N, spec.max_members)?.collect()
                }
                None => all_nests(spec.max_n)?
                    .into_iter()
                    .filter(|l| spec.max_members.is_none_or(|k| l.len() <= k))
                    .collect(),
            };
            if pairs {
                let all = dual_pairs(&nests);
                complete = all.len() <= budget;
                items.extend(
                    all.into_iter().take(budget).map(|(i, k)| Item::Pair(nests[i].clone(), nests[k].clone())),
                );
            } else {
                complete = nests.len() <= budget;
                items.extend(nests.into_iter().take(budget).map(Item::Nest));
            }
        }
        SearchMode::Random => {
            complete = true;
            for i in 0..budget {
                let mut rng = instance_rng(spec.seed, 50, i as u64);
                let u = match group {
                    Some(g) => g.universe(),
                    None => random_universe(&mut rng, spec.max_n),
                };
                let mut l = random_nest(&mut rng, &u);
                if let Some(k) = spec.max_members {
                    l = Nest::new(SetFamily::collect(&u, l.iter().take(k)))?;
                }
                items.push(if pairs { Item::Pair(l.clone(), l.complement()) } else { Item::Nest(l) });
            }
        }
    }
    Ok((items, complete))
}

fn all_empty(l: &Nest) -> bool {
    l.iter().all(Subset::is_empty)
}

fn pair_found(l: &Nest, r: &Nest) -> Found {
    let (lj, rj) = (nest_json(l), nest_json(r));
    Found {
        entry: json!({ "left": lj, "right": rj }),
        files: vec![("left".to_string(), lj), ("right".to_string(), rj)],
    }
}

fn nest_found(l: &Nest) -> Found {
    let j = nest_json(l);
    Found { entry: j.clone(), files: vec![(String::new(), j)] }
}

fn evaluate(target: &str, group: Option<&FiniteGroup>, item: &Item, c: &mut Collector) -> Option<Found> {
    c.instance();
    match (target, item) {
        ("thm3.4-equivalence", Item::Nest(l)) => {
            let d = is_interlocking_def(l);
            let agree = d == is_interlocking_alexandroff(l) && d == is_interlocking_lowersets(l);
            c.holds("thm3.4-equivalence", agree, || nest_json(l));
            (!agree).then(|| nest_found(l))
        }
        ("c3-nontrivial-finite", Item::Nest(l)) => {
            let c3 = conditions(l).c3;
            let trivial = l.n() == 1 && l.sets() == [Subset::EMPTY];
            c.implies("c3-only-trivial", c3, trivial, || nest_json(l));
            c3.then(|| nest_found(l))
        }
        ("prop5.1-premise-nontrivial", Item::Nest(l)) => {
            let g = group.expect("group targets carry a group");
            let premise = prop51_premise(g, l);
            let trivial = l.iter().all(|m| m.is_empty() || m == l.full());
            c.implies("members-trivial", premise, trivial, || nest_json(l));
            c.implies("prop5.1", premise, order_compatible(g, l).compatible, || nest_json(l));
            premise.then(|| nest_found(l))
        }
        ("thm3.3-hypotheses-true", Item::Pair(l, r)) => {
            let pair = make_dual_pair(l, r).ok()?;
            let star = starred_conditions(&pair).ok()?;
            let fires = conditions(l).c2 && star.c2;
            let j = || json!({ "left": nest_json(l), "right": nest_json(r) });
            c.implies("hypotheses-only-empty-members", fires, all_empty(l) && all_empty(r), j);
            fires.then(|| pair_found(l, r))
        }
        ("open-q1-candidate", Item::Pair(l, r)) => {
            let lots = make_dual_pair(l, r).and_then(|p| lots_check(&p)).ok()?;
            let j = || json!({ "left": nest_json(l), "right": nest_json(r) });
            c.implies("cor3.1", lots.c3_hypotheses, lots.conclusion, j);
            c.implies("cor3.2", lots.c2_hypotheses, lots.conclusion, j);
            (lots.conclusion && !lots.hypotheses()).then(|| pair_found(l, r))
        }
        _ => None,
    }
}

/// Scan the instance space of `spec` for witnesses of its target.
///
/// Implications attached to the target are checked on the way and reported
/// as violations; running out of budget marks the report incomplete.
pub fn search(spec: &SearchSpec) -> Result<SuiteReport> {
    spec.validate()?;
    let start = Instant::now();
    let group = if spec.target == "prop5.1-premise-nontrivial" {
        Some(FiniteGroup::builtin(spec.group.as_deref().unwrap_or("Z4"))?)
    } else {
        None
    };
    let (items, complete) = instances(spec, group.as_ref())?;
    let results: Vec<(Collector, Option<Found>)> = with_workers(|| {
        items
            .par_iter()
            .map(|item| {
                let mut c = Collector::default();
                let found = evaluate(&spec.target, group.as_ref(), item, &mut c);
                (c, found)
            })
            .collect()
    })?;
    let mut collector = Collector::default();
    let mut found = Vec::new();
    for (c, f) in results {
        collector = collector.merge(c);
        found.extend(f);
    }
    let total = found.len();
    found.truncate(MAX_KEPT_WITNESSES);
    if let Some(dir) = &spec.out_dir {
        std::fs::create_dir_all(dir)
            .map_err(|e| Error::Format(format!("cannot create {}: {e}", dir.display())))?;
        for (i, f) in found.iter().enumerate() {
            for (suffix, value) in &f.files {
                let name = if suffix.is_empty() {
                    format!("{}-{:04}.json", spec.target, i)
                } else {
                    format!("{}-{:04}-{suffix}.json", spec.target, i)
                };
                let text = serde_json::to_string_pretty(value)? + "\n";
                std::fs::write(dir.join(&name), text)
                    .map_err(|e| Error::Format(format!("cannot write {name}: {e}")))?;
            }
        }
    }
    let mut notes = vec![format!("{total} witnesses found, {} kept", found.len())];
    if let Some(g) = &group {
        notes.push(format!("group {}", g.name()));
    }
    if !complete {
        notes.push(format!("budget of {} instances exhausted before the space was covered", spec.budget));
    }
    let (instances, checks, violations) = collector.finish();
    Ok(SuiteReport {
        suite: format!("search:{}", spec.target),
        seed: spec.seed,
        bounds: ReportBounds {
            max_n: spec.max_n,
            random_max_n: if spec.mode == SearchMode::Random { spec.max_n } else { 0 },
            iters: spec.budget,
        },
        instances,
        checks,
        violations,
        notes,
        complete,
        witnesses: found.into_iter().map(|f| f.entry).collect(),
        wall_time: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c3_witnesses_are_the_one_point_nest() {
        let r = search(&SearchSpec::new("c3-nontrivial-finite", 4, SearchMode::Exhaustive)).unwrap();
        assert!(r.passed() && r.complete);
        assert_eq!(r.witnesses, vec![json!({ "universe": 1, "family": [[]], "kind": "nest" })]);
    }

    #[test]
    fn translation_closed_nests_on_z4_are_trivial() {
        let r = search(&SearchSpec::new("prop5.1-premise-nontrivial", 4, SearchMode::Exhaustive)).unwrap();
        assert!(r.passed());
        // {}, {∅}, {G}, {∅, G}.
        assert_eq!(r.witnesses.len(), 4);
    }

    #[test]
    fn budget_marks_incomplete() {
        let mut spec = SearchSpec::new("thm3.4-equivalence", 4, SearchMode::Exhaustive);
        spec.budget = 10;
        let r = search(&spec).unwrap();
        assert!(!r.complete && r.passed());
        assert_eq!(r.instances, 10);
    }

    #[test]
    fn witnesses_are_persisted_as_instances() {
        let dir = tempfile::tempdir().unwrap();
        let mut spec = SearchSpec::new("thm3.3-hypotheses-true", 3, SearchMode::Exhaustive);
        spec.out_dir = Some(dir.path().to_path_buf());
        let r = search(&spec).unwrap();
        assert!(r.passed());
        let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
        assert_eq!(files.len(), 2 * r.witnesses.len());
        let first = dir.path().join("thm3.3-hypotheses-true-0000-left.json");
        let loaded = crate::io::load_instance(&std::fs::read_to_string(first).unwrap()).unwrap();
        assert!(loaded.family.iter().all(Subset::is_empty));
    }

    #[test]
    fn bad_specs() {
        assert!(search(&SearchSpec::new("nope", 3, SearchMode::Random)).is_err());
        assert!(search(&SearchSpec::new("thm3.4-equivalence", 5, SearchMode::Exhaustive)).is_err());
        assert!(search(&SearchSpec::new("thm3.4-equivalence", 7, SearchMode::Random)).is_err());
    }
}
