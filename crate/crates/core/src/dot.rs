//! Graphviz output for transfer systems and Lewis diagrams.

use std::fmt::Write;

use crate::lattice::{SubgroupId, SubgroupLattice};
use crate::linalg::{q_to_string, Matrix};
use crate::mackey::MackeyFunctor;
use crate::transfer::TransferSystem;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn matrix_label(m: &Matrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|r| m.row(r).iter().map(q_to_string).collect::<Vec<_>>().join(" "))
        .collect();
    format!("[{}]", rows.join("; "))
}

/// `K ⊂ L` with nothing strictly between them satisfying `between`.
fn covers(
    lat: &SubgroupLattice,
    related: impl Fn(SubgroupId, SubgroupId) -> bool,
) -> Vec<(SubgroupId, SubgroupId)> {
    let mut out = Vec::new();
    for l in lat.ids() {
        for k in lat.subgroups_of(l).filter(|&k| k != l && related(k, l)) {
            let direct = !lat
                .ids()
                .any(|j| j != k && j != l && related(k, j) && related(j, l));
            if direct {
                out.push((k, l));
            }
        }
    }
    out
}

/// The subgroup lattice with the transfers of `ts` drawn over the inclusions.
pub fn transfer_system_dot(ts: &TransferSystem) -> String {
    let lat = ts.lattice();
    let mut s = String::from("digraph transfer_system {\n  rankdir=BT;\n  node [shape=plaintext];\n");
    for h in lat.ids() {
        let _ = writeln!(s, "  {} [label={}];", h.0, quote(lat.label(h)));
    }
    for (k, l) in covers(lat, |k, l| lat.contains(l, k)) {
        let _ = writeln!(s, "  {} -> {} [arrowhead=none, color=gray];", k.0, l.0);
    }
    for (k, l) in covers(lat, |k, l| ts.rel(k, l)) {
        let _ = writeln!(s, "  {} -> {} [color=blue, penwidth=2];", k.0, l.0);
    }
    s.push_str("}\n");
    s
}

/// The Lewis diagram of `m`: one node per level with its dimension,
/// restrictions dashed and downward, transfers solid and upward, and
/// conjugations by group generators dotted.
pub fn mackey_dot(m: &MackeyFunctor, name: &str) -> String {
    let lat = m.lattice();
    let g = lat.group();
    let mut s = format!("digraph {} {{\n  rankdir=BT;\n  node [shape=box];\n", quote(name));
    for h in lat.ids().filter(|&h| m.in_family(h)) {
        let _ = writeln!(s, "  {} [label={}];", h.0, quote(&format!("{}: {}", lat.label(h), m.dim(h))));
    }
    let live = |h: SubgroupId| m.in_family(h) && m.dim(h) > 0;
    for (k, l) in covers(lat, |k, l| lat.contains(l, k)) {
        if live(k) && live(l) {
            let label = quote(&format!("res {}", matrix_label(m.res(l, k))));
            let _ = writeln!(s, "  {} -> {} [style=dashed, label={label}];", l.0, k.0);
        }
    }
    for (k, l) in covers(lat, |k, l| m.tr(k, l).is_some()) {
        if live(k) && live(l) {
            let label = quote(&format!("tr {}", matrix_label(m.tr(k, l).expect("admissible"))));
            let _ = writeln!(s, "  {} -> {} [style=solid, color=blue, label={label}];", k.0, l.0);
        }
    }
    for l in lat.ids().filter(|&l| live(l)) {
        for x in g.generators() {
            let c = m.conj(x, l);
            let gl = lat.conj(x, l);
            if gl == l && c.is_identity() {
                continue;
            }
            let label = quote(&format!("c_{} {}", g.name(x), matrix_label(c)));
            let _ = writeln!(s, "  {} -> {} [style=dotted, color=darkgreen, label={label}];", l.0, gl.0);
        }
    }
    s.push_str("}\n");
    s
}
