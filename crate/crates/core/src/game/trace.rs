//! Game traces and their two on-disk forms.
//!
//! The line format is one record per line:
//!
//! ```text
//! trace v1
//! rules order=robber-first robber_may_pass=false cops_may_pass=true max_rounds=100
//! header cops=2 robber_policy=scripted cop_policy=labelled-cops seed=-
//! init cops=0,0 robber=2
//! round 1 robber=2>4 gen=1 pass=false cops=0>4,0>1 captured=false
//! ann round=1 cop=0 step=1 label=1 conn=1 case=2 tail=0 power=2 next_label=1 next_tail=0 next_power=2
//! outcome captured 3
//! ```
//!
//! `-` marks an absent value. The JSON form is the serde encoding of
//! [`GameTrace`].

use super::{CopAnnotation, GameError, GameRules, RobberRecord, RoundRecord, TurnOrder};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceHeader {
    pub rules: GameRules,
    pub cops: usize,
    pub robber_policy: String,
    pub cop_policy: String,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Outcome {
    Captured { round: usize },
    Survived { rounds: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameTrace {
    pub header: TraceHeader,
    pub initial_cops: Vec<usize>,
    pub initial_robber: usize,
    pub rounds: Vec<RoundRecord>,
    pub outcome: Outcome,
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

fn join(v: &[usize]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

impl GameTrace {
    pub fn capture_round(&self) -> Option<usize> {
        match self.outcome {
            Outcome::Captured { round } => Some(round),
            Outcome::Survived { .. } => None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, GameError> {
        serde_json::from_str(text).map_err(|e| GameError::TraceParse {
            line: e.line(),
            msg: e.to_string(),
        })
    }

    pub fn to_lines(&self) -> String {
        let mut out = String::from("trace v1\n");
        let r = &self.header.rules;
        let order = match r.turn_order {
            TurnOrder::RobberFirst => "robber-first",
            TurnOrder::CopsFirst => "cops-first",
        };
        writeln!(
            out,
            "rules order={order} robber_may_pass={} cops_may_pass={} max_rounds={}",
            r.robber_may_pass, r.cops_may_pass, r.max_rounds
        )
        .unwrap();
        writeln!(
            out,
            "header cops={} robber_policy={} cop_policy={} seed={}",
            self.header.cops,
            self.header.robber_policy,
            self.header.cop_policy,
            opt(self.header.seed)
        )
        .unwrap();
        writeln!(
            out,
            "init cops={} robber={}",
            join(&self.initial_cops),
            self.initial_robber
        )
        .unwrap();
        for rec in &self.rounds {
            let robber = match rec.robber {
                Some(m) => format!(
                    "robber={}>{} gen={} pass={}",
                    m.from,
                    m.to,
                    opt(m.generator),
                    m.pass
                ),
                None => "robber=- gen=- pass=-".to_string(),
            };
            let cops = match &rec.cops {
                Some(moves) => moves
                    .iter()
                    .map(|(a, b)| format!("{a}>{b}"))
                    .collect::<Vec<_>>()
                    .join(","),
                None => "-".to_string(),
            };
            writeln!(
                out,
                "round {} {robber} cops={cops} captured={}",
                rec.round, rec.captured
            )
            .unwrap();
            for a in &rec.annotations {
                writeln!(
                    out,
                    "ann round={} cop={} step={} label={} conn={} case={} tail={} power={} next_label={} next_tail={} next_power={}",
                    rec.round,
                    a.cop,
                    a.step,
                    a.label,
                    a.connection,
                    a.case,
                    a.tail,
                    opt(a.power),
                    a.next_label,
                    a.next_tail,
                    opt(a.next_power)
                )
                .unwrap();
            }
        }
        match self.outcome {
            Outcome::Captured { round } => writeln!(out, "outcome captured {round}").unwrap(),
            Outcome::Survived { rounds } => writeln!(out, "outcome survived {rounds}").unwrap(),
        }
        out
    }

    pub fn from_lines(text: &str) -> Result<Self, GameError> {
        let mut rules = None;
        let mut header = None;
        let mut init = None;
        let mut rounds: Vec<RoundRecord> = Vec::new();
        let mut outcome = None;
        let mut saw_magic = false;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |msg: String| GameError::TraceParse { line: line_no, msg };
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut words = line.split_whitespace();
            let head = words.next().unwrap();
            let rest: Vec<&str> = words.collect();
            if !saw_magic {
                if line != "trace v1" {
                    return Err(err("expected `trace v1`".into()));
                }
                saw_magic = true;
                continue;
            }
            let kv = |tokens: &[&str]| -> Result<HashMap<String, String>, GameError> {
                tokens
                    .iter()
                    .map(|t| {
                        t.split_once('=')
                            .map(|(k, v)| (k.to_string(), v.to_string()))
                            .ok_or_else(|| err(format!("expected key=value, got {t:?}")))
                    })
                    .collect()
            };
            let get = |m: &HashMap<String, String>, k: &str| -> Result<String, GameError> {
                m.get(k).cloned().ok_or_else(|| err(format!("missing {k}")))
            };
            let num = |s: &str| -> Result<usize, GameError> {
                s.parse().map_err(|_| err(format!("bad number {s:?}")))
            };
            let opt_num = |s: &str| -> Result<Option<usize>, GameError> {
                if s == "-" {
                    Ok(None)
                } else {
                    num(s).map(Some)
                }
            };
            let boolean = |s: &str| -> Result<bool, GameError> {
                s.parse().map_err(|_| err(format!("bad bool {s:?}")))
            };
            match head {
                "rules" => {
                    let m = kv(&rest)?;
                    let turn_order = match get(&m, "order")?.as_str() {
                        "robber-first" => TurnOrder::RobberFirst,
                        "cops-first" => TurnOrder::CopsFirst,
                        o => return Err(err(format!("unknown order {o:?}"))),
                    };
                    rules = Some(GameRules {
                        turn_order,
                        robber_may_pass: boolean(&get(&m, "robber_may_pass")?)?,
                        cops_may_pass: boolean(&get(&m, "cops_may_pass")?)?,
                        max_rounds: num(&get(&m, "max_rounds")?)?,
                    });
                }
                "header" => {
                    let m = kv(&rest)?;
                    let seed = get(&m, "seed")?;
                    header = Some((
                        num(&get(&m, "cops")?)?,
                        get(&m, "robber_policy")?,
                        get(&m, "cop_policy")?,
                        if seed == "-" {
                            None
                        } else {
                            Some(seed.parse::<u64>().map_err(|_| err("bad seed".into()))?)
                        },
                    ));
                }
                "init" => {
                    let m = kv(&rest)?;
                    let cops = get(&m, "cops")?
                        .split(',')
                        .map(num)
                        .collect::<Result<Vec<_>, _>>()?;
                    init = Some((cops, num(&get(&m, "robber")?)?));
                }
                "round" => {
                    let (round, fields) = rest
                        .split_first()
                        .ok_or_else(|| err("missing round number".into()))?;
                    let m = kv(fields)?;
                    let robber_field = get(&m, "robber")?;
                    let robber = if robber_field == "-" {
                        None
                    } else {
                        let (a, b) = robber_field
                            .split_once('>')
                            .ok_or_else(|| err("robber move must be from>to".into()))?;
                        Some(RobberRecord {
                            from: num(a)?,
                            to: num(b)?,
                            generator: opt_num(&get(&m, "gen")?)?,
                            pass: boolean(&get(&m, "pass")?)?,
                        })
                    };
                    let cop_field = get(&m, "cops")?;
                    let cops = if cop_field == "-" {
                        None
                    } else {
                        Some(
                            cop_field
                                .split(',')
                                .map(|pair| {
                                    let (a, b) = pair
                                        .split_once('>')
                                        .ok_or_else(|| err("cop move must be from>to".into()))?;
                                    Ok((num(a)?, num(b)?))
                                })
                                .collect::<Result<Vec<_>, GameError>>()?,
                        )
                    };
                    rounds.push(RoundRecord {
                        round: num(round)?,
                        robber,
                        cops,
                        annotations: Vec::new(),
                        captured: boolean(&get(&m, "captured")?)?,
                    });
                }
                "ann" => {
                    let m = kv(&rest)?;
                    let round = num(&get(&m, "round")?)?;
                    let ann = CopAnnotation {
                        cop: num(&get(&m, "cop")?)?,
                        step: num(&get(&m, "step")?)?,
                        label: num(&get(&m, "label")?)?,
                        connection: num(&get(&m, "conn")?)?,
                        case: get(&m, "case")?
                            .parse()
                            .map_err(|_| err("bad case".into()))?,
                        tail: num(&get(&m, "tail")?)?,
                        power: opt_num(&get(&m, "power")?)?,
                        next_label: num(&get(&m, "next_label")?)?,
                        next_tail: num(&get(&m, "next_tail")?)?,
                        next_power: opt_num(&get(&m, "next_power")?)?,
                    };
                    match rounds.last_mut() {
                        Some(rec) if rec.round == round => rec.annotations.push(ann),
                        _ => return Err(err("annotation without matching round".into())),
                    }
                }
                "outcome" => {
                    outcome = Some(match rest.as_slice() {
                        ["captured", r] => Outcome::Captured { round: num(r)? },
                        ["survived", r] => Outcome::Survived { rounds: num(r)? },
                        _ => return Err(err("bad outcome".into())),
                    });
                }
                other => return Err(err(format!("unknown record {other:?}"))),
            }
        }
        let missing = |what: &str| GameError::TraceParse {
            line: 0,
            msg: format!("missing {what} record"),
        };
        let (cops, robber_policy, cop_policy, seed) = header.ok_or_else(|| missing("header"))?;
        let (initial_cops, initial_robber) = init.ok_or_else(|| missing("init"))?;
        Ok(GameTrace {
            header: TraceHeader {
                rules: rules.ok_or_else(|| missing("rules"))?,
                cops,
                robber_policy,
                cop_policy,
                seed,
            },
            initial_cops,
            initial_robber,
            rounds,
            outcome: outcome.ok_or_else(|| missing("outcome"))?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{run, GreedyCops, UniformRandom};
    use crate::graph::Graph;

    fn sample() -> GameTrace {
        let c = Graph::cycle(7);
        let rules = GameRules::standard().with_max_rounds(12);
        let mut t = run(&c, 1, rules, &mut UniformRandom::new(3), &mut GreedyCops).unwrap();
        t.rounds[0].annotations.push(CopAnnotation {
            cop: 0,
            step: 1,
            label: 1,
            connection: 4,
            case: 2,
            tail: 0,
            power: Some(2),
            next_label: 1,
            next_tail: 0,
            next_power: None,
        });
        t
    }

    #[test]
    fn both_formats_round_trip() {
        let t = sample();
        assert_eq!(GameTrace::from_lines(&t.to_lines()).unwrap(), t);
        assert_eq!(GameTrace::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn parse_errors_carry_line() {
        let t = sample().to_lines().replace("init cops=0", "init cops=x");
        match GameTrace::from_lines(&t) {
            Err(GameError::TraceParse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        assert!(GameTrace::from_lines("nonsense").is_err());
    }
}
