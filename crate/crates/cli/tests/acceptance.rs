//! One line per acceptance criterion, then a nonzero exit if any failed.

use std::collections::BTreeSet;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use mackey_core::burnside::{
    complete_image, format_element, idempotent, idempotent_oracle, idempotents, mark_at, multiply, restrict_element,
    BurnsideElement,
};
use mackey_core::insep::{
    internal_transfers, is_above, is_relative_family, mark_vector_blocks, partition, tombstone_check,
};
use mackey_core::mackey::induction::{class_restriction, coinduct_class, frobenius_check, induct_class};
use mackey_core::mackey::iso::{find_isomorphism, is_isomorphism};
use mackey_core::mackey::oracle::{coend_check, end_check};
use mackey_core::mackey::split::{act, split};
use mackey_core::mackey::{burnside_element, burnside_mackey, represented_mackey, MackeyFunctor};
use mackey_core::named::{parse_named, sweep_groups};
use mackey_core::transfer::enumerate_all;
use mackey_core::linalg::q;
use mackey_core::{OrbitSum, SubgroupId, SubgroupLattice, TransferSystem};
use rayon::prelude::*;

type Check = Result<(), String>;

/// Name, check and time budget.
type Criterion = (&'static str, fn() -> Check, Duration);

fn lattice(name: &str) -> Arc<SubgroupLattice> {
    Arc::new(SubgroupLattice::new(Arc::new(parse_named(name).unwrap())))
}

fn system(name: &str, pairs: &str) -> TransferSystem {
    let lat = lattice(name);
    let seeds = TransferSystem::parse_pairs(&lat, pairs).unwrap();
    TransferSystem::generate(lat, &seeds).unwrap()
}

fn sub(lat: &SubgroupLattice, s: &str) -> SubgroupId {
    lat.parse_subgroup(s).unwrap()
}

fn fmt(lat: &SubgroupLattice, x: &BurnsideElement) -> String {
    format_element(lat, x)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn expect_eq(what: &str, got: &str, want: &str) -> Check {
    ensure(got == want, || format!("{what}: got `{got}`, want `{want}`"))
}

fn top_idempotent(ts: &TransferSystem, h: &str) -> BurnsideElement {
    let lat = ts.lattice();
    let part = partition(ts);
    let rep = sub(lat, h);
    idempotents(ts, &part)
        .into_iter()
        .find(|(r, _)| *r == rep)
        .map(|(_, e)| e)
        .unwrap_or_else(|| panic!("no idempotent for {h}"))
}

fn labels(lat: &SubgroupLattice, ids: &[SubgroupId]) -> Vec<String> {
    ids.iter().map(|&h| lat.label(h).to_string()).collect()
}

fn c6_golden() -> Check {
    let ts = system("cyclic:6", "C2>C6");
    let lat = ts.lattice().clone();
    let e2 = top_idempotent(&ts, "C2");
    let e6 = top_idempotent(&ts, "C6");
    expect_eq("e_[2]", &fmt(&lat, &e2), "1/3 C6/C2")?;
    expect_eq("e_[6]", &fmt(&lat, &e6), "C6/C6 - 1/3 C6/C2")?;
    ensure(complete_image(&lat, &e2).map(|v| labels(&lat, &v)) == Some(vec!["C1".into(), "C2".into()]), || {
        "image of e_[2] is not e1 + e2".into()
    })?;
    ensure(complete_image(&lat, &e6).map(|v| labels(&lat, &v)) == Some(vec!["C3".into(), "C6".into()]), || {
        "image of e_[6] is not e3 + e6".into()
    })?;

    let m = burnside_mackey(&ts);
    let s = split(&m, &partition(&ts)).map_err(|e| e.to_string())?;
    ensure(s.verify(&m), || "reassembly failed".into())?;
    let c3 = sub(&lat, "C3");
    let piece = s.summands.iter().find(|p| p.class_rep == lat.top()).ok_or("no [C6] summand")?;
    let basis = &piece.inclusion[c3.0];
    ensure(basis.cols() == 1, || format!("[C6] summand at C3 has dim {}", basis.cols()))?;
    let gen = burnside_element(&ts, c3, &basis.col(0));
    expect_eq("[C6] generator at C3", &fmt(&lat, &gen), "C3/C3 - 1/3 C3/C1")
}

fn c8_golden() -> Check {
    let ts = system("cyclic:8", "C2>C4, C2>C8");
    let lat = ts.lattice().clone();
    let e2 = top_idempotent(&ts, "C2");
    let e8 = top_idempotent(&ts, "C8");
    expect_eq("e_[2]", &fmt(&lat, &e2), "1/4 C8/C2")?;
    expect_eq("e_[8]", &fmt(&lat, &e8), "C8/C8 - 1/4 C8/C2")?;
    let at = |l: &str| fmt(&lat, &restrict_element(&lat, &e8, sub(&lat, l)));
    expect_eq("res to C4", &at("C4"), "C4/C4 - 1/2 C4/C2")?;
    expect_eq("res to C2", &at("C2"), "0")?;
    expect_eq("res to C1", &at("C1"), "0")
}

/// Checks the axioms directly on a relation given as a set of pairs.
fn oracle_is_transfer_system(lat: &SubgroupLattice, pairs: &BTreeSet<(SubgroupId, SubgroupId)>) -> bool {
    let has = |k: SubgroupId, h: SubgroupId| k == h || pairs.contains(&(k, h));
    for &(k, h) in pairs {
        for &(k2, h2) in pairs {
            if h == k2 && !has(k, h2) {
                return false;
            }
        }
        for l in lat.subgroups_of(h) {
            if !has(lat.meet(k, l), l) {
                return false;
            }
        }
        for g in lat.group().elements() {
            if !has(lat.conj(g, k), lat.conj(g, h)) {
                return false;
            }
        }
    }
    true
}

/// Every subset of proper nested pairs that satisfies the axioms.
fn powerset_oracle(lat: &SubgroupLattice) -> BTreeSet<Vec<(SubgroupId, SubgroupId)>> {
    let candidates: Vec<(SubgroupId, SubgroupId)> = lat
        .ids()
        .flat_map(|h| lat.subgroups_of(h).filter(move |&k| k != h).map(move |k| (k, h)))
        .collect();
    assert!(candidates.len() < 20, "powerset too large");
    (0u32..1 << candidates.len())
        .filter_map(|mask| {
            let set: BTreeSet<_> = candidates
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            oracle_is_transfer_system(lat, &set).then(|| set.into_iter().collect())
        })
        .collect()
}

fn enumeration_counts() -> Check {
    for (name, want) in [("cyclic:2", 2), ("cyclic:4", 5), ("cyclic:8", 14), ("cyclic:6", 10)] {
        let lat = lattice(name);
        let all = enumerate_all(&lat).map_err(|e| e.to_string())?;
        ensure(all.len() == want, || format!("{name}: {} systems, want {want}", all.len()))?;
        let got: BTreeSet<_> = all.iter().map(TransferSystem::pairs).collect();
        ensure(got.len() == all.len(), || format!("{name}: duplicate systems"))?;
        ensure(got == powerset_oracle(&lat), || format!("{name}: differs from the powerset oracle"))?;
        if name == "cyclic:6" {
            let disk: Vec<bool> = all.iter().map(TransferSystem::is_disklike).collect();
            let n = disk.iter().filter(|&&d| d).count();
            ensure(n == 7, || format!("cyclic:6: {n} disk-like, want 7"))?;
            // disk-like means generated by its transfers into the whole group
            for ts in &all {
                let top = ts.lattice().top();
                let seeds: Vec<_> = ts.pairs().into_iter().filter(|&(_, h)| h == top).collect();
                let regenerated = TransferSystem::generate(lat.clone(), &seeds).unwrap();
                ensure((regenerated.pairs() == ts.pairs()) == ts.is_disklike(), || {
                    format!("cyclic:6: disk-like flag wrong for {:?}", ts.pair_labels())
                })?;
            }
        }
    }
    Ok(())
}

fn one(lat: &SubgroupLattice) -> BurnsideElement {
    OrbitSum::one(lat.top())
}

/// Meet of the admissible supergroups of `j`.
fn oracle_hull(ts: &TransferSystem, j: SubgroupId) -> SubgroupId {
    let lat = ts.lattice();
    let top = lat.top();
    lat.supergroups_of(j)
        .filter(|&h| ts.rel(h, top))
        .fold(top, |acc, h| lat.meet(acc, h))
}

fn idempotent_sweep() -> Check {
    sweep_groups().into_par_iter().try_for_each(|(name, g)| {
        let lat = Arc::new(SubgroupLattice::new(Arc::new(g)));
        let all = enumerate_all(&lat).map_err(|e| e.to_string())?;
        all.par_iter().try_for_each(|ts| {
            let part = partition(ts);
            let mu = ts.mobius();
            let es: Vec<BurnsideElement> = part
                .classes
                .iter()
                .map(|c| {
                    let e = idempotent(ts, &mu, c.rep).map_err(|e| e.to_string())?;
                    let back = idempotent_oracle(ts, c.rep).map_err(|e| e.to_string())?;
                    ensure(e == back, || format!("{name} {:?}: Möbius and back-substitution differ", ts.pair_labels()))?;
                    for j in lat.ids() {
                        let want = lat.are_conjugate(oracle_hull(ts, j), c.rep);
                        let mark = mark_at(&lat, &e, j);
                        ensure(mark == q(want as i64), || {
                            format!("{name} {:?}: wrong mark of e_[{}] at {}", ts.pair_labels(), lat.label(c.rep), lat.label(j))
                        })?;
                    }
                    Ok(e)
                })
                .collect::<Result<_, String>>()?;
            let total = es.iter().fold(OrbitSum::zero(lat.top()), |acc, e| acc.add(e));
            ensure(total == one(&lat), || format!("{name} {:?}: idempotents do not sum to 1", ts.pair_labels()))?;
            for (i, a) in es.iter().enumerate() {
                for (j, b) in es.iter().enumerate() {
                    let p = multiply(&lat, a, b).map_err(|e| e.to_string())?;
                    let want = if i == j { a.clone() } else { OrbitSum::zero(lat.top()) };
                    ensure(p == want, || format!("{name} {:?}: e_i e_j wrong", ts.pair_labels()))?;
                }
            }
            Ok(())
        })
    })
}

fn sorted_blocks(mut blocks: Vec<Vec<SubgroupId>>) -> Vec<Vec<SubgroupId>> {
    for b in &mut blocks {
        b.sort();
    }
    blocks.sort();
    blocks
}

fn partition_consistency() -> Check {
    sweep_groups().into_par_iter().try_for_each(|(name, g)| {
        let lat = Arc::new(SubgroupLattice::new(Arc::new(g)));
        let all = enumerate_all(&lat).map_err(|e| e.to_string())?;
        all.par_iter().try_for_each(|ts| {
            let part = partition(ts);
            let hull = sorted_blocks(part.blocks());
            let marks = sorted_blocks(mark_vector_blocks(ts));
            let disk = sorted_blocks(partition(&ts.maximal_disklike()).blocks());
            let who = || format!("{name} {:?}", ts.pair_labels());
            ensure(hull == marks, || format!("{}: hull and mark-vector partitions differ", who()))?;
            ensure(hull == disk, || format!("{}: partition differs from the disk-like one", who()))?;
            for c in &part.classes {
                ensure(is_relative_family(ts, &part, c), || format!("{}: [{}] not a relative family", who(), lat.label(c.rep)))?;
                ensure(tombstone_check(ts, &part, c), || format!("{}: [{}] fails tombstone check", who(), lat.label(c.rep)))?;
            }
            Ok(())
        })
    })
}

fn disklike_dichotomy() -> Check {
    sweep_groups().into_par_iter().try_for_each(|(name, g)| {
        let lat = Arc::new(SubgroupLattice::new(Arc::new(g)));
        let all = enumerate_all(&lat).map_err(|e| e.to_string())?;
        all.iter().filter(|ts| ts.is_disklike()).try_for_each(|ts| {
            let part = partition(ts);
            ensure(part.classes.iter().all(|c| internal_transfers(ts, c).is_empty()), || {
                format!("{name} {:?}: disk-like system has internal transfers", ts.pair_labels())
            })
        })
    })?;
    let ts = system("cyclic:8", "C1>C2, C1>C4, C1>C8, C2>C4");
    let lat = ts.lattice().clone();
    let part = partition(&ts);
    for c in &part.classes {
        let got: Vec<(String, String)> = internal_transfers(&ts, c)
            .into_iter()
            .map(|(k, h)| (lat.label(k).to_string(), lat.label(h).to_string()))
            .collect();
        let want = if c.rep == lat.top() { vec![("C2".to_string(), "C4".to_string())] } else { Vec::new() };
        ensure(got == want, || format!("[{}]: internal transfers {got:?}, want {want:?}", lat.label(c.rep)))?;
    }
    Ok(())
}

/// Burnside and three represented functors: the free one and two more,
/// rotating through the remaining proper class representatives with `seed`
/// so every representative is covered across a sweep.
fn test_functors(ts: &TransferSystem, seed: usize) -> Vec<MackeyFunctor> {
    let lat = ts.lattice();
    let others: Vec<SubgroupId> = lat
        .class_reps()
        .into_iter()
        .filter(|&k| k != lat.trivial() && k != lat.top())
        .collect();
    let mut reps = vec![lat.trivial()];
    for j in 0..others.len().min(2) {
        reps.push(others[(seed * 2 + j) % others.len()]);
    }
    if reps.len() < 3 && lat.top() != lat.trivial() {
        // too few proper subgroups; the top one represents the Burnside functor
        reps.push(lat.top());
    }
    let mut out = vec![burnside_mackey(ts)];
    out.extend(reps.into_iter().map(|k| represented_mackey(ts, k)));
    out
}

fn check_instance(ts: &TransferSystem, m: &MackeyFunctor) -> Check {
    let lat = ts.lattice();
    let part = partition(ts);
    let s = split(m, &part).map_err(|e| e.to_string())?;
    ensure(s.verify(m), || "reassembly certificate invalid".into())?;
    for l in lat.ids() {
        let total: usize = s.summands.iter().map(|p| p.functor.dim(l)).sum();
        ensure(total == m.dim(l), || format!("(a) dims at {} sum to {total}, want {}", lat.label(l), m.dim(l)))?;
    }
    for (n, piece) in s.summands.iter().enumerate() {
        let class = part.class_with_rep(piece.class_rep).ok_or("summand without class")?;
        let name = lat.label(class.rep);
        for l in lat.ids().filter(|&l| !is_above(lat, l, class)) {
            ensure(piece.functor.dim(l) == 0, || format!("(b) [{name}] nonzero at {}", lat.label(l)))?;
        }
        let acted = act(&piece.functor, &piece.idempotent).map_err(|e| e.to_string())?;
        ensure(acted.iter().all(|a| a.is_identity()), || format!("(c) e_[{name}] is not the identity on its summand"))?;
        let r = class_restriction(&piece.functor, class).map_err(|e| e.to_string())?;
        let ind = induct_class(&part, class, &r).map_err(|e| e.to_string())?;
        let iso = find_isomorphism(&ind.functor, &piece.functor, n as u64)
            .ok_or_else(|| format!("(d) [{name}] summand not isomorphic to the induced functor"))?;
        ensure(is_isomorphism(&ind.functor, &piece.functor, &iso), || format!("(d) [{name}] iso fails"))?;
        let frob = frobenius_check(&part, class, &piece.functor).map_err(|e| e.to_string())?;
        ensure(frob.holds(), || format!("(e) [{name}] {frob:?}"))?;
        let co = coinduct_class(&part, class, &r).map_err(|e| e.to_string())?;
        ensure(coend_check(class, &r, &ind).agrees(), || format!("(f) [{name}] coend oracle disagrees"))?;
        ensure(end_check(class, &r, &co).agrees(), || format!("(f) [{name}] end oracle disagrees"))?;
    }
    Ok(())
}

fn instance_checks() -> Check {
    let groups: Vec<_> = sweep_groups().into_iter().filter(|(_, g)| g.order() <= 8).collect();
    groups.into_par_iter().try_for_each(|(name, g)| {
        let lat = Arc::new(SubgroupLattice::new(Arc::new(g)));
        let all = enumerate_all(&lat).map_err(|e| e.to_string())?;
        all.par_iter().enumerate().try_for_each(|(seed, ts)| {
            test_functors(ts, seed)
                .iter()
                .enumerate()
                .try_for_each(|(i, m)| check_instance(ts, m).map_err(|e| format!("{name} {:?} functor {i}: {e}", ts.pair_labels())))
        })
    })
}

fn cli_determinism() -> Check {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_mackey"))
            .arg("paper-examples")
            .output()
            .map_err(|e| e.to_string())
    };
    let a = run()?;
    let b = run()?;
    ensure(a.status.success(), || format!("paper-examples failed:\n{}", String::from_utf8_lossy(&a.stdout)))?;
    ensure(a.stdout == b.stdout, || "two runs differ".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("C6 golden", c6_golden, Duration::from_secs(1)),
        ("C8 golden", c8_golden, Duration::from_secs(1)),
        ("enumeration counts", enumeration_counts, Duration::from_secs(30)),
        ("idempotent sweep", idempotent_sweep, Duration::from_secs(300)),
        ("partition consistency", partition_consistency, Duration::from_secs(300)),
        ("disk-like dichotomy", disklike_dichotomy, Duration::from_secs(300)),
        ("instance checks", instance_checks, Duration::from_secs(600)),
        ("CLI determinism", cli_determinism, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let result = result.and_then(|()| {
            ensure(took <= *budget, || format!("took {took:.2?}, budget {budget:?}"))
        });
        match result {
            Ok(()) => println!("PASS {}. {name} ({took:.2?})", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {}. {name} ({took:.2?}): {e}", i + 1);
            }
        }
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
