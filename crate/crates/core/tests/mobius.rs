//! Möbius values of each transfer system, checked against Hall's chain count.

use std::sync::Arc;

use mackey_core::named::sweep_groups;
use mackey_core::transfer::enumerate_all;
use mackey_core::{SubgroupId, SubgroupLattice, TransferSystem};

/// Alternating count of strict chains `k = x0 → x1 → … → xn = h`.
fn chain_mobius(ts: &TransferSystem, k: SubgroupId, h: SubgroupId) -> i64 {
    if k == h {
        return 1;
    }
    // chains ending at h, by length parity, via the intermediates below h
    fn count(ts: &TransferSystem, from: SubgroupId, to: SubgroupId, sign: i64) -> i64 {
        let mut total = -sign;
        for x in ts.lattice().ids() {
            if x != from && x != to && ts.rel(from, x) && ts.rel(x, to) {
                total += count(ts, x, to, -sign);
            }
        }
        total
    }
    count(ts, k, h, 1)
}

#[test]
fn mobius_matches_chain_counts() {
    for (name, g) in sweep_groups().into_iter().filter(|(_, g)| g.order() <= 12) {
        let lat = Arc::new(SubgroupLattice::new(Arc::new(g)));
        for ts in enumerate_all(&lat).unwrap().iter().step_by(7) {
            let mu = ts.mobius();
            for (k, h) in ts.pairs() {
                assert_eq!(mu.get(k, h), Some(chain_mobius(ts, k, h)), "{name} {:?}", ts.pair_labels());
            }
            for k in lat.ids() {
                assert_eq!(mu.get(k, k), Some(1));
            }
        }
    }
}

#[test]
fn complete_cyclic_mobius_is_the_number_theoretic_one() {
    // for C_n with every transfer, μ(C_a, C_b) is μ(b/a)
    let number_mobius = |mut n: usize| {
        let mut out = 1;
        let mut p = 2;
        while p * p <= n {
            if n.is_multiple_of(p) {
                n /= p;
                if n.is_multiple_of(p) {
                    return 0;
                }
                out = -out;
            }
            p += 1;
        }
        if n > 1 {
            out = -out;
        }
        out
    };
    for n in [6, 8, 12, 16] {
        let lat = Arc::new(SubgroupLattice::new(Arc::new(mackey_core::named::cyclic(n).unwrap())));
        let ts = TransferSystem::complete(lat.clone());
        let mu = ts.mobius();
        for (k, h) in ts.pairs() {
            let ratio = lat.order_of(h) / lat.order_of(k);
            assert_eq!(mu.get(k, h), Some(number_mobius(ratio)), "C{n} {} {}", lat.label(k), lat.label(h));
        }
    }
}
