use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use mackey_core::burnside::{complete_image, format_element, idempotent_oracle, idempotents as class_idempotents, marks, multiply};
use mackey_core::dot::{mackey_dot, transfer_system_dot};
use mackey_core::group::GroupFile;
use mackey_core::insep::partition as insep_partition;
use mackey_core::io::{matrix_to_rows, to_json, ElementFile, GroupRef, MackeyFile, PartitionFile, TransferSystemFile};
use mackey_core::mackey::split::split as split_functor;
use mackey_core::mackey::{burnside_mackey, represented_mackey};
use mackey_core::orbit::OrbitSum;
use mackey_core::transfer::{enumerate_all, validate as validate_relation};
use mackey_core::{SubgroupId, SubgroupLattice, TransferSystem};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::workspace::{group_ref, read_file, Workspace};
use crate::{Ctx, SystemArgs};

pub enum GroupSource {
    Arg(String),
    File(PathBuf),
}

fn json_out(v: &Value) -> String {
    to_json(v)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write_dot(ctx: &Ctx, text: &str) -> Result<(), CliError> {
    match &ctx.dot {
        Some(p) => write_file(p, text),
        None => Ok(()),
    }
}

fn pair_label(lat: &SubgroupLattice, (k, h): (SubgroupId, SubgroupId)) -> String {
    format!("{}>{}", lat.label(k), lat.label(h))
}

fn pair_labels(lat: &SubgroupLattice, pairs: &[(SubgroupId, SubgroupId)]) -> Vec<String> {
    pairs.iter().map(|&p| pair_label(lat, p)).collect()
}

fn labels(lat: &SubgroupLattice, hs: &[SubgroupId]) -> Vec<String> {
    hs.iter().map(|&h| lat.label(h).to_string()).collect()
}

fn joined(items: &[String]) -> String {
    if items.is_empty() {
        "(none)".into()
    } else {
        items.join(", ")
    }
}

/// Renders rows as left-aligned columns.
fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(c, s)| format!("{s:<w$}", w = widths[c]))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

pub(crate) fn load_system(ws: &mut Workspace, args: &SystemArgs) -> Result<(GroupRef, TransferSystem), CliError> {
    match (&args.system, &args.group) {
        (Some(path), _) => {
            let file: TransferSystemFile = read_file(path)?;
            let ts = ws.system(&path.display().to_string(), &file)?.ts;
            Ok((file.group, ts))
        }
        (None, Some(g)) => {
            let group = group_ref(g)?;
            let lat = ws.lattice(&group)?;
            let seeds = TransferSystem::parse_pairs(&lat, &args.pairs)?;
            Ok((group, TransferSystem::generate(lat, &seeds)?))
        }
        (None, None) => Err(CliError::Input("either --system or --group is required".into())),
    }
}

pub fn group(ctx: &Ctx, source: GroupSource) -> Result<String, CliError> {
    let group = match source {
        GroupSource::Arg(s) => group_ref(&s)?,
        GroupSource::File(p) => GroupRef::Table(read_file::<GroupFile>(&p)?),
    };
    let lat = Workspace::new().lattice(&group)?;
    let g = lat.group();
    let classes: Vec<Value> = lat
        .class_reps()
        .into_iter()
        .map(|h| {
            json!({
                "rep": lat.label(h),
                "order": lat.order_of(h),
                "conjugates": labels(&lat, lat.class_of(h)),
                "normalizer": lat.label(lat.normalizer(h)),
            })
        })
        .collect();
    if ctx.json {
        return Ok(json_out(&json!({
            "order": g.order(),
            "abelian": g.is_abelian(),
            "elements": g.names(),
            "subgroups": lat.len(),
            "classes": classes,
        })));
    }
    let mut out = format!(
        "order {}, {}\n{} subgroups in {} conjugacy classes\n",
        g.order(),
        if g.is_abelian() { "abelian" } else { "nonabelian" },
        lat.len(),
        classes.len()
    );
    let mut rows = vec![vec!["class".into(), "order".into(), "conjugates".into(), "normalizer".into()]];
    for h in lat.class_reps() {
        rows.push(vec![
            lat.label(h).into(),
            lat.order_of(h).to_string(),
            labels(&lat, lat.class_of(h)).join(" "),
            lat.label(lat.normalizer(h)).into(),
        ]);
    }
    out.push_str(&table(&rows));
    Ok(out)
}

pub fn trsys_validate(ctx: &Ctx, path: &Path, strict: bool) -> Result<String, CliError> {
    let file: TransferSystemFile = read_file(path)?;
    let mut ws = Workspace::new();
    let loaded = ws.system("system", &file)?;
    let lat = loaded.ts.lattice().clone();
    let mut rel = mackey_core::Relation::identity(lat.len());
    for (k, h) in &file.pairs {
        let find = |s: &str| lat.parse_subgroup(s).ok_or_else(|| CliError::Input(format!("unknown subgroup `{s}`")));
        rel.set(find(k)?, find(h)?);
    }
    let violations: Vec<String> = validate_relation(&lat, &rel).iter().map(|v| v.describe(&lat)).collect();
    let added = pair_labels(&lat, &loaded.added);
    if strict && !violations.is_empty() {
        return Err(CliError::Input(format!("listed pairs are not closed: {}", violations.join("; "))));
    }
    write_dot(ctx, &transfer_system_dot(&loaded.ts))?;
    if ctx.json {
        return Ok(json_out(&json!({
            "closed": violations.is_empty(),
            "violations": violations,
            "added": added,
            "pairs": pair_labels(&lat, &loaded.ts.pairs()),
        })));
    }
    let mut out = String::new();
    if violations.is_empty() {
        out.push_str("listed pairs form a transfer system\n");
    } else {
        out.push_str("listed pairs are not closed:\n");
        for v in &violations {
            let _ = writeln!(out, "  {v}");
        }
    }
    let _ = writeln!(out, "closure adds: {}", joined(&added));
    let _ = writeln!(out, "transfer system: {}", joined(&pair_labels(&lat, &loaded.ts.pairs())));
    Ok(out)
}

pub fn trsys_generate(ctx: &Ctx, group: &str, pairs: &str, output: Option<&Path>) -> Result<String, CliError> {
    let group = group_ref(group)?;
    let lat = Workspace::new().lattice(&group)?;
    let seeds = TransferSystem::parse_pairs(&lat, pairs)?;
    let ts = TransferSystem::generate(lat.clone(), &seeds)?;
    let all = ts.pairs();
    let added: Vec<(SubgroupId, SubgroupId)> = all.iter().copied().filter(|p| !seeds.contains(p)).collect();
    if let Some(path) = output {
        write_file(path, &to_json(&TransferSystemFile::from_system(group, &ts)))?;
    }
    write_dot(ctx, &transfer_system_dot(&ts))?;
    if ctx.json {
        return Ok(json_out(&json!({
            "pairs": pair_labels(&lat, &all),
            "added": pair_labels(&lat, &added),
            "disklike": ts.is_disklike(),
        })));
    }
    Ok(format!(
        "transfer system: {}\nadded by closure: {}\ndisk-like: {}\n",
        joined(&pair_labels(&lat, &all)),
        joined(&pair_labels(&lat, &added)),
        ts.is_disklike()
    ))
}

pub fn trsys_enumerate(ctx: &Ctx, group: &str) -> Result<String, CliError> {
    let lat = Workspace::new().lattice(&group_ref(group)?)?;
    let all = enumerate_all(&lat)?;
    let systems: Vec<(Vec<String>, bool)> = all
        .iter()
        .map(|ts| (pair_labels(&lat, &ts.pairs()), ts.is_disklike()))
        .collect();
    if ctx.json {
        let list: Vec<Value> = systems
            .iter()
            .map(|(p, d)| json!({"pairs": p, "disklike": d}))
            .collect();
        return Ok(json_out(&json!({"count": all.len(), "systems": list})));
    }
    let mut out = format!("{} transfer systems\n", all.len());
    let mut rows = Vec::new();
    for (i, (p, d)) in systems.iter().enumerate() {
        rows.push(vec![
            format!("{}", i + 1),
            if *d { "disk-like".into() } else { "".into() },
            format!("{{{}}}", p.join(", ")),
        ]);
    }
    out.push_str(&table(&rows));
    Ok(out)
}

pub fn trsys_disklike(ctx: &Ctx, args: &SystemArgs) -> Result<String, CliError> {
    let (_, ts) = load_system(&mut Workspace::new(), args)?;
    let lat = ts.lattice();
    let d = ts.maximal_disklike();
    write_dot(ctx, &transfer_system_dot(&d))?;
    if ctx.json {
        return Ok(json_out(&json!({
            "disklike": ts.is_disklike(),
            "maximal_disklike": pair_labels(lat, &d.pairs()),
        })));
    }
    Ok(format!(
        "disk-like: {}\nmaximal disk-like subsystem: {}\n",
        ts.is_disklike(),
        joined(&pair_labels(lat, &d.pairs()))
    ))
}

pub fn partition(ctx: &Ctx, args: &SystemArgs) -> Result<String, CliError> {
    let (_, ts) = load_system(&mut Workspace::new(), args)?;
    let lat = ts.lattice();
    let part = insep_partition(&ts);
    if ctx.json {
        return Ok(to_json(&PartitionFile::from_partition(lat, &part)));
    }
    let mut rows = vec![vec!["class".into(), "members".into()]];
    for c in &part.classes {
        rows.push(vec![format!("[{}]", lat.label(c.rep)), labels(lat, &c.members).join(" ")]);
    }
    let mut out = table(&rows);
    let hulls: Vec<String> = lat.ids().map(|j| format!("{}->{}", lat.label(j), lat.label(part.hull[j.0]))).collect();
    let _ = writeln!(out, "hulls: {}", hulls.join(" "));
    Ok(out)
}

fn complete_label(lat: &SubgroupLattice, x: &OrbitSum) -> String {
    match complete_image(lat, x) {
        Some(ks) if ks.is_empty() => "0".into(),
        Some(ks) => ks.iter().map(|&k| format!("e_{}", lat.label(k))).collect::<Vec<_>>().join(" + "),
        None => "(not a sum of classical idempotents)".into(),
    }
}

pub fn idempotents(ctx: &Ctx, args: &SystemArgs) -> Result<String, CliError> {
    let (_, ts) = load_system(&mut Workspace::new(), args)?;
    let lat = ts.lattice().clone();
    let part = insep_partition(&ts);
    let es = class_idempotents(&ts, &part);
    let mut failures = Vec::new();
    let mut total = OrbitSum::zero(lat.top());
    for (i, (h, e)) in es.iter().enumerate() {
        let name = format!("[{}]", lat.label(*h));
        let m = marks(&ts, e);
        let delta = m
            .domain
            .iter()
            .zip(&m.values)
            .all(|(&k, v)| *v == mackey_core::linalg::q(i64::from(part.class_of(k).rep == *h)));
        if !delta {
            failures.push(format!("{name}: marks are not the indicator of the class"));
        }
        if idempotent_oracle(&ts, *h).ok().as_ref() != Some(e) {
            failures.push(format!("{name}: differs from the mark-matrix solution"));
        }
        for (h2, f) in &es[i + 1..] {
            if !multiply(&lat, e, f).is_ok_and(|p| p.is_zero()) {
                failures.push(format!("{name}*[{}] is not zero", lat.label(*h2)));
            }
        }
        total = total.add(e);
    }
    if total != OrbitSum::one(lat.top()) {
        failures.push("idempotents do not sum to 1".into());
    }
    let out = if ctx.json {
        let list: Vec<Value> = es
            .iter()
            .map(|(h, e)| {
                json!({
                    "class": lat.label(*h),
                    "members": labels(&lat, &part.class_of(*h).members),
                    "idempotent": ElementFile::from_element(&lat, e),
                    "display": format_element(&lat, e),
                    "complete_image": complete_image(&lat, e).map(|ks| labels(&lat, &ks)),
                })
            })
            .collect();
        json_out(&json!({"idempotents": list, "verified": failures.is_empty()}))
    } else {
        let mut rows = vec![vec!["class".into(), "members".into(), "idempotent".into(), "complete image".into()]];
        for (h, e) in &es {
            rows.push(vec![
                format!("[{}]", lat.label(*h)),
                labels(&lat, &part.class_of(*h).members).join(" "),
                format_element(&lat, e),
                complete_label(&lat, e),
            ]);
        }
        let mut out = table(&rows);
        let status = if failures.is_empty() { "ok" } else { "FAILED" };
        let _ = writeln!(out, "marks, orthogonality and sum: {status}");
        for f in &failures {
            let _ = writeln!(out, "  {f}");
        }
        out
    };
    if failures.is_empty() {
        Ok(out)
    } else {
        Err(CliError::Mismatch(out))
    }
}

pub fn functor(ctx: &Ctx, args: &SystemArgs, represented: Option<&str>, output: Option<&Path>) -> Result<String, CliError> {
    let (group, ts) = load_system(&mut Workspace::new(), args)?;
    let lat = ts.lattice();
    let (m, name) = match represented {
        Some(k) => {
            let k = lat.parse_subgroup(k).ok_or_else(|| CliError::Input(format!("unknown subgroup `{k}`")))?;
            (represented_mackey(&ts, k), format!("A(G/{}, -)", lat.label(k)))
        }
        None => (burnside_mackey(&ts), "A".to_string()),
    };
    write_dot(ctx, &mackey_dot(&m, &name))?;
    let text = to_json(&MackeyFile::from_functor(group, &m));
    match output {
        Some(path) => {
            write_file(path, &text)?;
            let dims: Vec<String> = lat.ids().map(|l| format!("{}:{}", lat.label(l), m.dim(l))).collect();
            Ok(format!("wrote {} with dimensions {}\n", path.display(), dims.join(" ")))
        }
        None => Ok(text),
    }
}

pub fn split(ctx: &Ctx, path: &Path, out_dir: Option<&Path>) -> Result<String, CliError> {
    let file: MackeyFile = read_file(path)?;
    let mut ws = Workspace::new();
    let m = ws.functor("input", &file)?;
    let ts = m.transfer_system().clone();
    let lat = ts.lattice().clone();
    let violations = m.validate();
    if !violations.is_empty() {
        let shown: Vec<String> = violations.iter().take(5).map(|v| v.describe(&lat)).collect();
        return Err(CliError::Input(format!(
            "not a Mackey functor ({} violations): {}",
            violations.len(),
            shown.join("; ")
        )));
    }
    let part = insep_partition(&ts);
    let sp = split_functor(&m, &part)?;
    let verified = sp.verify(&m);
    let label = |h: SubgroupId| lat.label(h).to_string();
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
        for s in &sp.summands {
            let f = MackeyFile::from_functor(file.ts.group.clone(), &s.functor);
            write_file(&dir.join(format!("summand-{}.json", label(s.class_rep))), &to_json(&f))?;
        }
        let cert: BTreeMap<String, Vec<Vec<String>>> =
            lat.ids().map(|l| (label(l), matrix_to_rows(&sp.certificate[l.0]))).collect();
        write_file(&dir.join("certificate.json"), &to_json(&json!({"levels": cert})))?;
    }
    if ctx.dot.is_some() {
        let mut text = mackey_dot(&m, "M");
        for s in &sp.summands {
            text.push_str(&mackey_dot(&s.functor, &format!("[{}]", label(s.class_rep))));
        }
        write_dot(ctx, &text)?;
    }
    let out = if ctx.json {
        let pieces: Vec<Value> = sp
            .summands
            .iter()
            .map(|s| {
                let dims: BTreeMap<String, usize> = lat.ids().map(|l| (label(l), s.functor.dim(l))).collect();
                json!({
                    "class": label(s.class_rep),
                    "idempotent": format_element(&lat, &s.idempotent),
                    "dims": dims,
                })
            })
            .collect();
        json_out(&json!({"summands": pieces, "verified": verified}))
    } else {
        let mut rows = vec![std::iter::once("level".to_string()).chain(lat.ids().map(label)).collect::<Vec<_>>()];
        rows.push(std::iter::once("M".to_string()).chain(lat.ids().map(|l| m.dim(l).to_string())).collect());
        for s in &sp.summands {
            rows.push(
                std::iter::once(format!("[{}]", label(s.class_rep)))
                    .chain(lat.ids().map(|l| s.functor.dim(l).to_string()))
                    .collect(),
            );
        }
        let mut out = table(&rows);
        let _ = writeln!(out, "reassembly: {}", if verified { "verified" } else { "FAILED" });
        out
    };
    if verified {
        Ok(out)
    } else {
        Err(CliError::Mismatch(out))
    }
}
