//! Instance files: a family, a group, `S`, optional `σ` and rule overrides.
//!
//! ```text
//! # Z/5 Cayley sum graph: a path with loops at both ends
//! family = cayley-sum
//! group = cyclic(5)
//! S = 1 4
//! rules.robber_may_pass = false
//! ```
//!
//! `S` lists element indices; a token `class:<i>` adds the conjugacy class
//! of element `i`. `sigma` is either a list of images (`0 4 3 2 1`) or
//! cycle notation over 1-based positions (`(2 5)(3 4)`). Rule keys are
//! `rules.turn_order` (`robber-first` or `cops-first`),
//! `rules.robber_may_pass`, `rules.cops_may_pass` and `rules.max_rounds`.
//! Paths in `group` are relative to the instance file.

use crate::game::{GameRules, TurnOrder};
use crate::graph::{AlgebraicGraph, Family, GraphError};
use crate::group::{Automorphism, Elem, GenSet, GroupError, GroupSpec};
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SToken {
    Element(Elem),
    Class(Elem),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RuleOverrides {
    pub turn_order: Option<TurnOrder>,
    pub robber_may_pass: Option<bool>,
    pub cops_may_pass: Option<bool>,
    pub max_rounds: Option<usize>,
}

impl RuleOverrides {
    pub fn apply(&self, base: GameRules) -> GameRules {
        GameRules {
            turn_order: self.turn_order.unwrap_or(base.turn_order),
            robber_may_pass: self.robber_may_pass.unwrap_or(base.robber_may_pass),
            cops_may_pass: self.cops_may_pass.unwrap_or(base.cops_may_pass),
            max_rounds: self.max_rounds.unwrap_or(base.max_rounds).max(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceSpec {
    pub family: Family,
    pub group: GroupSpec,
    pub s: Vec<SToken>,
    pub sigma: Option<String>,
    pub rules: RuleOverrides,
}

/// A built instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub spec: InstanceSpec,
    pub graph: Arc<AlgebraicGraph>,
}

impl InstanceSpec {
    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        let mut family = None;
        let mut group = None;
        let mut s = None;
        let mut sigma = None;
        let mut rules = RuleOverrides::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |msg: String| InstanceError::Parse { line, msg };
            let content = raw.split('#').next().unwrap().trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got {content:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            let boolean = |v: &str| {
                v.parse::<bool>()
                    .map_err(|_| err(format!("expected true or false, got {v:?}")))
            };
            match key {
                "family" => family = Some(value.parse::<Family>().map_err(|e| err(e.to_string()))?),
                "group" => {
                    group = Some(value.parse::<GroupSpec>().map_err(|e| err(e.to_string()))?)
                }
                "S" | "s" => {
                    let tokens = value
                        .split([' ', ',', '\t'])
                        .filter(|t| !t.is_empty())
                        .map(|t| {
                            let (class, num) = match t.strip_prefix("class:") {
                                Some(rest) => (true, rest),
                                None => (false, t),
                            };
                            let x = num
                                .parse::<Elem>()
                                .map_err(|_| err(format!("bad element {t:?}")))?;
                            Ok(if class {
                                SToken::Class(x)
                            } else {
                                SToken::Element(x)
                            })
                        })
                        .collect::<Result<Vec<_>, InstanceError>>()?;
                    if tokens.is_empty() {
                        return Err(err("S is empty".into()));
                    }
                    s = Some(tokens);
                }
                "sigma" => sigma = Some(value.to_string()),
                "rules.turn_order" => {
                    rules.turn_order = Some(match value {
                        "robber-first" => TurnOrder::RobberFirst,
                        "cops-first" => TurnOrder::CopsFirst,
                        other => return Err(err(format!("unknown turn order {other:?}"))),
                    })
                }
                "rules.robber_may_pass" => rules.robber_may_pass = Some(boolean(value)?),
                "rules.cops_may_pass" => rules.cops_may_pass = Some(boolean(value)?),
                "rules.max_rounds" => {
                    let m = value
                        .parse::<usize>()
                        .ok()
                        .filter(|&m| m >= 1)
                        .ok_or_else(|| {
                            err(format!(
                                "max_rounds must be a positive integer, got {value:?}"
                            ))
                        })?;
                    rules.max_rounds = Some(m);
                }
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }
        let missing = |what: &str| InstanceError::Parse {
            line: 0,
            msg: format!("missing `{what}`"),
        };
        Ok(InstanceSpec {
            family: family.ok_or_else(|| missing("family"))?,
            group: group.ok_or_else(|| missing("group"))?,
            s: s.ok_or_else(|| missing("S"))?,
            sigma,
            rules,
        })
    }

    pub fn load(path: &Path) -> Result<Self, InstanceError> {
        let text = std::fs::read_to_string(path).map_err(|e| InstanceError::Io {
            path: path.display().to_string(),
            msg: e.to_string(),
        })?;
        InstanceSpec::parse(&text)
    }

    /// Canonical text; parsing it gives back an equal spec.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "family = {}", self.family).unwrap();
        writeln!(out, "group = {}", self.group).unwrap();
        let s: Vec<String> = self
            .s
            .iter()
            .map(|t| match t {
                SToken::Element(x) => x.to_string(),
                SToken::Class(x) => format!("class:{x}"),
            })
            .collect();
        writeln!(out, "S = {}", s.join(" ")).unwrap();
        if let Some(sigma) = &self.sigma {
            writeln!(out, "sigma = {sigma}").unwrap();
        }
        let r = &self.rules;
        if let Some(t) = r.turn_order {
            let t = match t {
                TurnOrder::RobberFirst => "robber-first",
                TurnOrder::CopsFirst => "cops-first",
            };
            writeln!(out, "rules.turn_order = {t}").unwrap();
        }
        if let Some(b) = r.robber_may_pass {
            writeln!(out, "rules.robber_may_pass = {b}").unwrap();
        }
        if let Some(b) = r.cops_may_pass {
            writeln!(out, "rules.cops_may_pass = {b}").unwrap();
        }
        if let Some(m) = r.max_rounds {
            writeln!(out, "rules.max_rounds = {m}").unwrap();
        }
        out
    }

    /// SHA-256 of the canonical text, hex encoded.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }

    /// Forced-move rules with this instance's overrides.
    pub fn rules(&self) -> GameRules {
        self.rules.apply(GameRules::forced_move())
    }

    pub fn build(&self, base_dir: &Path) -> Result<Instance, InstanceError> {
        let group = Arc::new(
            self.group
                .build_with(base_dir, crate::group::DEFAULT_ORDER_CAP)?,
        );
        let mut members = Vec::new();
        for t in &self.s {
            match *t {
                SToken::Element(x) => members.push(group.check_element(x)?),
                SToken::Class(x) => members.extend(group.conjugacy_class(group.check_element(x)?)),
            }
        }
        let genset = GenSet::new(group.clone(), members)?;
        let sigma = self
            .sigma
            .as_deref()
            .map(|text| Automorphism::parse(group.clone(), text))
            .transpose()?;
        let graph = AlgebraicGraph::build(self.family, genset, sigma)?;
        Ok(Instance {
            spec: self.clone(),
            graph: Arc::new(graph),
        })
    }
}

impl Instance {
    /// Reads and builds an instance file, resolving paths next to it.
    pub fn load(path: &Path) -> Result<Self, InstanceError> {
        let spec = InstanceSpec::load(path)?;
        spec.build(path.parent().unwrap_or(Path::new(".")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z5: &str = "# path with loops\nfamily = cayley-sum\ngroup = cyclic(5)\nS = 1 4\n";

    #[test]
    fn parse_build_round_trip() {
        let spec = InstanceSpec::parse(Z5).unwrap();
        assert_eq!(InstanceSpec::parse(&spec.to_text()).unwrap(), spec);
        let inst = spec.build(Path::new(".")).unwrap();
        assert_eq!(inst.graph.loops(), vec![2, 3]);
        assert_eq!(spec.rules(), GameRules::forced_move());
        assert_eq!(spec.hash().len(), 64);
    }

    #[test]
    fn classes_sigma_and_rules() {
        let text = "family = twisted-cayley-sum\ngroup = symmetric(3)\nS = class:1\nsigma = 0 1 2 3 4 5\n\
                    rules.turn_order = cops-first\nrules.robber_may_pass = true\nrules.max_rounds = 7\n";
        let spec = InstanceSpec::parse(text).unwrap();
        assert_eq!(InstanceSpec::parse(&spec.to_text()).unwrap(), spec);
        let inst = spec.build(Path::new(".")).unwrap();
        assert_eq!(inst.graph.genset().len(), 3);
        let r = spec.rules();
        assert_eq!(
            (r.turn_order, r.robber_may_pass, r.max_rounds),
            (TurnOrder::CopsFirst, true, 7)
        );
    }

    #[test]
    fn errors_carry_lines() {
        match InstanceSpec::parse("family = cayley\ngroup cyclic(3)\n") {
            Err(InstanceError::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(InstanceSpec::parse("family = cayley\ngroup = cyclic(3)\n").is_err());
        assert!(InstanceSpec::parse("family = nope\n").is_err());
        let spec = InstanceSpec::parse("family = cayley\ngroup = cyclic(3)\nS = 5\n").unwrap();
        assert!(spec.build(Path::new(".")).is_err());
    }
}
