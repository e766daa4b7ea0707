//! The worked C6 and C8 examples, recomputed and compared with goldens.

use std::fmt::Write as _;
use std::path::Path;

use mackey_core::burnside::{complete_image, format_element, idempotents, restrict_element};
use mackey_core::insep::{internal_transfers, is_above, partition, Partition};
use mackey_core::io::{to_json, GroupRef};
use mackey_core::mackey::induction::{class_restriction, frobenius_check, is_induced};
use mackey_core::mackey::normalizer::restrict_to_normalizer;
use mackey_core::mackey::split::{split, Summand};
use mackey_core::mackey::{burnside_element, burnside_mackey, represented_mackey, MackeyFunctor};
use mackey_core::transfer::enumerate_all;
use mackey_core::{SubgroupId, SubgroupLattice, TransferSystem};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::error::CliError;
use crate::workspace::Workspace;
use crate::Ctx;

struct Example {
    name: &'static str,
    group: &'static str,
    build: fn(&mut Workspace) -> Result<Value, CliError>,
    golden: &'static str,
}

const EXAMPLES: &[Example] = &[
    Example {
        name: "c6-burnside-split",
        group: "c6",
        build: c6_burnside_split,
        golden: include_str!("../goldens/c6-burnside-split.json"),
    },
    Example {
        name: "c8-burnside-split",
        group: "c8",
        build: c8_burnside_split,
        golden: include_str!("../goldens/c8-burnside-split.json"),
    },
    Example {
        name: "c8-no-split",
        group: "c8",
        build: c8_no_split,
        golden: include_str!("../goldens/c8-no-split.json"),
    },
    Example {
        name: "c6-disklike-list",
        group: "c6",
        build: c6_disklike_list,
        golden: include_str!("../goldens/c6-disklike-list.json"),
    },
    Example {
        name: "c6-non-disklike",
        group: "c6",
        build: c6_non_disklike,
        golden: include_str!("../goldens/c6-non-disklike.json"),
    },
    Example {
        name: "c6-general-split-c1",
        group: "c6",
        build: c6_general_split_c1,
        golden: include_str!("../goldens/c6-general-split-c1.json"),
    },
    Example {
        name: "c6-general-split-c1-c3",
        group: "c6",
        build: c6_general_split_c1_c3,
        golden: include_str!("../goldens/c6-general-split-c1-c3.json"),
    },
    Example {
        name: "c8-disklike-difference",
        group: "c8",
        build: c8_disklike_difference,
        golden: include_str!("../goldens/c8-disklike-difference.json"),
    },
];

fn system(ws: &mut Workspace, group: &str, pairs: &str) -> Result<TransferSystem, CliError> {
    let lat = ws.lattice(&GroupRef::Named(group.into()))?;
    let seeds = TransferSystem::parse_pairs(&lat, pairs)?;
    Ok(TransferSystem::generate(lat, &seeds)?)
}

fn class_key(lat: &SubgroupLattice, h: SubgroupId) -> String {
    format!("[{}]", lat.label(h))
}

fn labels(lat: &SubgroupLattice, hs: impl IntoIterator<Item = SubgroupId>) -> Value {
    hs.into_iter().map(|h| Value::from(lat.label(h))).collect()
}

fn pair_labels(lat: &SubgroupLattice, pairs: &[(SubgroupId, SubgroupId)]) -> Value {
    pairs
        .iter()
        .map(|&(k, h)| Value::from(format!("{}>{}", lat.label(k), lat.label(h))))
        .collect()
}

/// Non-trivial admissible orbits `H/K`, level by level.
fn admissible_orbits(ts: &TransferSystem) -> Value {
    let lat = ts.lattice();
    let mut out = Vec::new();
    for h in lat.ids() {
        for k in lat.subgroups_of(h) {
            if k != h && ts.rel(k, h) {
                out.push(Value::from(format!("{}/{}", lat.label(h), lat.label(k))));
            }
        }
    }
    Value::Array(out)
}

/// Each class with its idempotent and the classical idempotents it sums.
fn idempotent_report(ts: &TransferSystem, part: &Partition) -> Value {
    let lat = ts.lattice();
    let mut out = Map::new();
    for (h, e) in idempotents(ts, part) {
        out.insert(
            class_key(lat, h),
            json!({
                "members": labels(lat, part.class_of(h).members.iter().copied()),
                "idempotent": format_element(lat, &e),
                "complete_image": complete_image(lat, &e).map(|ks| labels(lat, ks)),
            }),
        );
    }
    Value::Object(out)
}

fn dims(m: &MackeyFunctor) -> Value {
    let lat = m.lattice();
    Value::Object(lat.ids().map(|l| (lat.label(l).to_string(), Value::from(m.dim(l)))).collect())
}

/// The summand bases of a Burnside splitting, written as Burnside elements.
fn summand_bases(ts: &TransferSystem, s: &Summand) -> Value {
    let lat = ts.lattice();
    let mut out = Map::new();
    for l in lat.ids() {
        let b = &s.inclusion[l.0];
        let elems: Vec<Value> = (0..b.cols())
            .map(|c| Value::from(format_element(lat, &burnside_element(ts, l, &b.col(c)))))
            .collect();
        out.insert(lat.label(l).to_string(), Value::Array(elems));
    }
    Value::Object(out)
}

fn burnside_split_report(ts: &TransferSystem) -> Result<Value, CliError> {
    let lat = ts.lattice();
    let part = partition(ts);
    let m = burnside_mackey(ts);
    let sp = split(&m, &part)?;
    let mut summands = Map::new();
    for s in &sp.summands {
        summands.insert(class_key(lat, s.class_rep), summand_bases(ts, s));
    }
    Ok(json!({
        "pairs": pair_labels(lat, &ts.pairs()),
        "classes": idempotent_report(ts, &part),
        "burnside_dims": dims(&m),
        "summands": summands,
        "reassembly_verified": sp.verify(&m) && sp.summands.iter().all(|s| s.functor.is_valid()),
    }))
}

/// Splits a general functor (the sum of all represented ones) and records,
/// per class, where the piece lives and which data determines it.
fn general_split_report(ts: &TransferSystem) -> Result<Value, CliError> {
    let lat = ts.lattice();
    let part = partition(ts);
    let reps: Vec<MackeyFunctor> = lat.class_reps().into_iter().map(|k| represented_mackey(ts, k)).collect();
    let m = MackeyFunctor::direct_sum(&reps);
    let sp = split(&m, &part)?;
    let mut classes = Map::new();
    for s in &sp.summands {
        let class = part.class_with_rep(s.class_rep).expect("summand class");
        let r = class_restriction(&s.functor, class)?;
        let data = restrict_to_normalizer(&part, class, &r)?;
        let embed = |k: SubgroupId| data.sub.embed[k.0];
        let support: Vec<SubgroupId> = lat.ids().filter(|&l| s.functor.dim(l) > 0).collect();
        classes.insert(
            class_key(lat, s.class_rep),
            json!({
                "members": labels(lat, class.members.iter().copied()),
                "support": labels(lat, support.iter().copied()),
                "above": labels(lat, lat.ids().filter(|&l| is_above(lat, l, class))),
                "retained_levels": labels(lat, data.levels.iter().map(|&k| embed(k))),
                "internal_transfers": pair_labels(lat, &internal_transfers(ts, class)),
                "induced": is_induced(&part, class, &s.functor)?,
                "frobenius": frobenius_check(&part, class, &s.functor)?.holds(),
            }),
        );
    }
    Ok(json!({
        "pairs": pair_labels(lat, &ts.pairs()),
        "disklike": ts.is_disklike(),
        "classes": classes,
        "reassembly_verified": sp.verify(&m),
    }))
}

fn c6_burnside_split(ws: &mut Workspace) -> Result<Value, CliError> {
    let ts = system(ws, "cyclic:6", "C2>C6")?;
    let mut report = burnside_split_report(&ts)?;
    report["general"] = general_split_report(&ts)?;
    Ok(report)
}

fn c8_burnside_split(ws: &mut Workspace) -> Result<Value, CliError> {
    let ts = system(ws, "cyclic:8", "C2>C4, C2>C8")?;
    let lat = ts.lattice().clone();
    let mut report = burnside_split_report(&ts)?;
    let part = partition(&ts);
    let (_, e8) = idempotents(&ts, &part)
        .into_iter()
        .find(|&(h, _)| h == lat.top())
        .expect("top class");
    let restrictions: Map<String, Value> = lat
        .ids()
        .map(|l| (lat.label(l).to_string(), Value::from(format_element(&lat, &restrict_element(&lat, &e8, l)))))
        .collect();
    report["top_idempotent_restrictions"] = Value::Object(restrictions);
    report["general"] = general_split_report(&ts)?;
    Ok(report)
}

fn c8_no_split(ws: &mut Workspace) -> Result<Value, CliError> {
    let ts = system(ws, "cyclic:8", "C2>C4")?;
    let lat = ts.lattice();
    let part = partition(&ts);
    Ok(json!({
        "pairs": pair_labels(lat, &ts.pairs()),
        "disklike": ts.is_disklike(),
        "maximal_disklike": pair_labels(lat, &ts.maximal_disklike().pairs()),
        "classes": idempotent_report(&ts, &part),
        "burnside_dims": dims(&burnside_mackey(&ts)),
    }))
}

fn c6_disklike_list(ws: &mut Workspace) -> Result<Value, CliError> {
    let cases = ["", "C3>C6", "C2>C6", "C1>C6", "C2>C6, C3>C6", "C1>C6, C3>C6", "C1>C6, C2>C6"];
    let mut out = Map::new();
    for gens in cases {
        let ts = system(ws, "cyclic:6", gens)?;
        let lat = ts.lattice();
        let part = partition(&ts);
        let splitting: Map<String, Value> = idempotents(&ts, &part)
            .into_iter()
            .map(|(h, e)| (class_key(lat, h), json!(complete_image(lat, &e).map(|ks| labels(lat, ks)))))
            .collect();
        let key = if gens.is_empty() { "trivial" } else { gens };
        out.insert(
            key.to_string(),
            json!({
                "disklike": ts.is_disklike(),
                "splitting": splitting,
                "admissible_orbits": admissible_orbits(&ts),
            }),
        );
    }
    Ok(Value::Object(out))
}

fn c6_non_disklike(ws: &mut Workspace) -> Result<Value, CliError> {
    let lat = ws.lattice(&GroupRef::Named("cyclic:6".into()))?;
    let all = enumerate_all(&lat)?;
    let mut non = Map::new();
    for ts in all.iter().filter(|ts| !ts.is_disklike()) {
        let part = partition(ts);
        let key: Vec<String> = ts
            .pairs()
            .iter()
            .map(|&(k, h)| format!("{}>{}", lat.label(k), lat.label(h)))
            .collect();
        let es: Vec<Value> = idempotents(ts, &part)
            .iter()
            .map(|(_, e)| Value::from(format_element(&lat, e)))
            .collect();
        non.insert(
            key.join(", "),
            json!({
                "idempotents": es,
                "maximal_disklike": pair_labels(&lat, &ts.maximal_disklike().pairs()),
            }),
        );
    }
    Ok(json!({
        "total": all.len(),
        "disklike": all.iter().filter(|ts| ts.is_disklike()).count(),
        "non_disklike": non,
    }))
}

fn c6_general_split_c1(ws: &mut Workspace) -> Result<Value, CliError> {
    general_split_report(&system(ws, "cyclic:6", "C1>C6")?)
}

fn c6_general_split_c1_c3(ws: &mut Workspace) -> Result<Value, CliError> {
    general_split_report(&system(ws, "cyclic:6", "C1>C6, C3>C6")?)
}

fn c8_disklike_difference(ws: &mut Workspace) -> Result<Value, CliError> {
    let ts = system(ws, "cyclic:8", "C1>C8, C2>C4")?;
    let d = ts.maximal_disklike();
    let classes = |ts: &TransferSystem| idempotent_report(ts, &partition(ts));
    Ok(json!({
        "system": {
            "classes": classes(&ts),
            "general": general_split_report(&ts)?,
        },
        "maximal_disklike": {
            "classes": classes(&d),
            "general": general_split_report(&d)?,
        },
    }))
}

/// Paths and values where `got` departs from `want`.
fn diff(path: &str, want: &Value, got: &Value, out: &mut Vec<String>) {
    match (want, got) {
        (Value::Object(a), Value::Object(b)) => {
            for (k, v) in a {
                match b.get(k) {
                    Some(w) => diff(&format!("{path}/{k}"), v, w, out),
                    None => out.push(format!("{path}/{k}: missing, expected {v}")),
                }
            }
            for k in b.keys().filter(|k| !a.contains_key(*k)) {
                out.push(format!("{path}/{k}: unexpected {}", b[k]));
            }
        }
        (Value::Array(a), Value::Array(b)) if a.len() == b.len() => {
            for (i, (v, w)) in a.iter().zip(b).enumerate() {
                diff(&format!("{path}/{i}"), v, w, out);
            }
        }
        _ if want != got => out.push(format!("{path}: expected {want}, got {got}")),
        _ => {}
    }
}

struct Outcome {
    name: &'static str,
    report: Result<Value, String>,
    diffs: Vec<String>,
}

fn run_one(ex: &Example, golden_dir: Option<&Path>) -> Outcome {
    let golden_text = match golden_dir {
        Some(dir) => std::fs::read_to_string(dir.join(format!("{}.json", ex.name))).map_err(|e| e.to_string()),
        None => Ok(ex.golden.to_string()),
    };
    let golden: Result<Value, String> =
        golden_text.and_then(|t| serde_json::from_str(&t).map_err(|e| format!("golden: {e}")));
    let report = (ex.build)(&mut Workspace::new()).map_err(|e| e.to_string());
    let mut diffs = Vec::new();
    match (&golden, &report) {
        (Ok(want), Ok(got)) => diff("", want, got, &mut diffs),
        (Err(e), _) => diffs.push(format!("cannot read golden: {e}")),
        (_, Err(e)) => diffs.push(format!("computation failed: {e}")),
    }
    Outcome {
        name: ex.name,
        report,
        diffs,
    }
}

pub fn run(ctx: &Ctx, only: Option<&str>, golden_dir: Option<&Path>) -> Result<String, CliError> {
    if let Some(o) = only {
        if !EXAMPLES.iter().any(|e| e.group == o) {
            return Err(CliError::Input(format!("no examples for `{o}`; expected c6 or c8")));
        }
    }
    let selected: Vec<&Example> = EXAMPLES.iter().filter(|e| only.is_none_or(|o| e.group == o)).collect();
    let outcomes: Vec<Outcome> = selected.par_iter().map(|ex| run_one(ex, golden_dir)).collect();
    let failed = outcomes.iter().filter(|o| !o.diffs.is_empty()).count();
    let out = if ctx.json {
        let list: Vec<Value> = outcomes
            .iter()
            .map(|o| {
                json!({
                    "name": o.name,
                    "pass": o.diffs.is_empty(),
                    "diff": o.diffs,
                    "report": o.report.as_ref().ok(),
                })
            })
            .collect();
        to_json(&json!({"examples": list, "failed": failed}))
    } else {
        let mut out = String::new();
        for o in &outcomes {
            let _ = writeln!(out, "{} {}", if o.diffs.is_empty() { "PASS" } else { "FAIL" }, o.name);
            for d in &o.diffs {
                let _ = writeln!(out, "    {d}");
            }
        }
        let _ = writeln!(out, "{}/{} examples passed", outcomes.len() - failed, outcomes.len());
        out
    };
    if failed == 0 {
        Ok(out)
    } else {
        Err(CliError::Mismatch(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diff_names_paths() {
        let want = json!({"a": {"b": [1, 2]}, "c": "x"});
        let got = json!({"a": {"b": [1, 3]}, "d": 0});
        let mut out = Vec::new();
        diff("", &want, &got, &mut out);
        assert_eq!(out, vec!["/a/b/1: expected 2, got 3", "/c: missing, expected \"x\"", "/d: unexpected 0"]);
    }

    #[test]
    fn every_golden_parses() {
        for ex in EXAMPLES {
            assert!(serde_json::from_str::<Value>(ex.golden).is_ok(), "{}", ex.name);
        }
    }
}
