//! JSON instance formats.
//!
//! A finite instance is
//! `{"universe": 3, "labels": ["a","b","c"], "family": [[0],[0,1]], "kind": "nest"}`
//! where members list element indices or labels. A relation is
//! `{"universe": 3, "pairs": [[0,1],[1,2]]}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite::{Nest, SetFamily, Subset, Universe};
use crate::relation::Relation;
use crate::topology::Topology;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceKind {
    #[default]
    Family,
    Nest,
    Topology,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementRef {
    Index(usize),
    Label(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub universe: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub family: Vec<Vec<ElementRef>>,
    #[serde(default)]
    pub kind: InstanceKind,
}

/// A parsed instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Loaded {
    pub kind: InstanceKind,
    pub family: SetFamily,
}

impl Loaded {
    pub fn universe(&self) -> &Universe {
        self.family.universe()
    }

    pub fn nest(&self) -> Result<Nest> {
        Nest::new(self.family.clone())
    }

    pub fn topology(&self) -> Result<Topology> {
        match self.kind {
            InstanceKind::Topology => Topology::from_opens(self.family.clone()),
            _ => Topology::from_subbase(&self.family),
        }
    }
}

pub fn universe_of(size: usize, labels: Option<Vec<String>>) -> Result<Universe> {
    match labels {
        Some(l) => {
            if l.len() != size {
                return Err(Error::LabelCount { expected: size, got: l.len() });
            }
            Universe::with_labels(l)
        }
        None => Universe::new(size),
    }
}

fn resolve(u: &Universe, r: &ElementRef) -> Result<usize> {
    match r {
        ElementRef::Index(i) if *i < u.size() => Ok(*i),
        ElementRef::Index(i) => Err(Error::ElementOutOfRange { index: *i, size: u.size() }),
        ElementRef::Label(s) => {
            u.element(s).ok_or_else(|| Error::Format(format!("unknown element {s:?}")))
        }
    }
}

/// Parse a subset written as `"{a, b}"`, `"a,b"`, `"0 1"` or `"∅"`.
pub fn parse_subset(u: &Universe, text: &str) -> Result<Subset> {
    let body = text.trim().trim_start_matches('{').trim_end_matches('}').trim();
    if body.is_empty() || body == "∅" {
        return Ok(Subset::EMPTY);
    }
    body.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| u.element(t).ok_or_else(|| Error::Format(format!("unknown element {t:?}"))))
        .collect::<Result<Vec<_>>>()
        .map(Subset::from_indices)
}

impl Instance {
    pub fn load(&self) -> Result<Loaded> {
        let u = universe_of(self.universe, self.labels.clone())?;
        let sets = self
            .family
            .iter()
            .map(|m| m.iter().map(|r| resolve(&u, r)).collect::<Result<Vec<_>>>().map(Subset::from_indices))
            .collect::<Result<Vec<_>>>()?;
        let family = SetFamily::new(&u, sets)?;
        let loaded = Loaded { kind: self.kind, family };
        match self.kind {
            InstanceKind::Nest => {
                loaded.nest()?;
            }
            InstanceKind::Topology => {
                loaded.topology()?;
            }
            InstanceKind::Family => {}
        }
        Ok(loaded)
    }

    pub fn from_family(f: &SetFamily, kind: InstanceKind) -> Instance {
        let u = f.universe();
        Instance {
            universe: u.size(),
            labels: u.labels().map(<[String]>::to_vec),
            family: f
                .index_lists()
                .into_iter()
                .map(|m| m.into_iter().map(ElementRef::Index).collect())
                .collect(),
            kind,
        }
    }
}

pub fn load_instance(text: &str) -> Result<Loaded> {
    serde_json::from_str::<Instance>(text)?.load()
}

pub fn instance_json(f: &SetFamily, kind: InstanceKind) -> String {
    serde_json::to_string(&Instance::from_family(f, kind)).expect("instance serializes")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationInstance {
    pub universe: usize,
    pub pairs: Vec<(usize, usize)>,
}

impl RelationInstance {
    pub fn load(&self) -> Result<Relation> {
        Relation::from_pairs(self.universe, self.pairs.iter().copied())
    }

    pub fn from_relation(r: &Relation) -> Self {
        RelationInstance { universe: r.n(), pairs: r.pairs() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labelled_nest_round_trip() {
        let text = r#"{"universe":4,"labels":["x1","x2","x3","x4"],
            "family":[["x1","x2"],[0,1,2,3]],"kind":"nest"}"#;
        let l = load_instance(text).unwrap();
        assert_eq!(l.family.roster(), "{{x1,x2}, {x1,x2,x3,x4}}");
        let again = load_instance(&instance_json(&l.family, InstanceKind::Nest)).unwrap();
        assert_eq!(again, l);
    }

    #[test]
    fn rejects_bad_instances() {
        assert!(load_instance(r#"{"universe":2,"family":[[0],[1]],"kind":"nest"}"#).is_err());
        assert!(load_instance(r#"{"universe":2,"family":[[2]]}"#).is_err());
        assert!(load_instance(r#"{"universe":2,"family":[["q"]]}"#).is_err());
        assert!(load_instance(r#"{"universe":2,"labels":["a"],"family":[]}"#).is_err());
        assert!(load_instance(r#"{"universe":2,"family":[[0]],"kind":"topology"}"#).is_err());
        assert!(load_instance("not json").is_err());
    }

    #[test]
    fn topology_instances() {
        let l = load_instance(r#"{"universe":2,"family":[[],[0],[0,1]],"kind":"topology"}"#).unwrap();
        assert_eq!(l.topology().unwrap().len(), 3);
    }

    #[test]
    fn subset_parsing() {
        let u = Universe::with_labels(["a", "b", "c"]).unwrap();
        assert_eq!(parse_subset(&u, "{a, c}").unwrap(), Subset::from_indices([0, 2]));
        assert_eq!(parse_subset(&u, "∅").unwrap(), Subset::EMPTY);
        assert_eq!(parse_subset(&u, "{}").unwrap(), Subset::EMPTY);
        assert_eq!(parse_subset(&u, "1 2").unwrap(), Subset::from_indices([1, 2]));
        assert!(parse_subset(&u, "d").is_err());
    }

    #[test]
    fn relation_round_trip() {
        let r = Relation::from_pairs(3, [(0, 1), (1, 2)]).unwrap();
        let text = serde_json::to_string(&RelationInstance::from_relation(&r)).unwrap();
        assert_eq!(text, r#"{"universe":3,"pairs":[[0,1],[1,2]]}"#);
        let back: RelationInstance = serde_json::from_str(&text).unwrap();
        assert_eq!(back.load().unwrap(), r);
    }
}
