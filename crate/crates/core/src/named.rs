//! Built-in group families.
//!
//! Element orderings:
//! - `cyclic:n`: element `i` is `r^i`.
//! - `dihedral:n` (order `2n`): element `i < n` is `r^i`, element `n + i` is `s r^i`,
//!   with `s r s = r^-1`.
//! - `klein`: element `a + 2b` is `(a, b)` in `Z/2 x Z/2`.
//! - `symmetric:n` (`n <= 4`): permutations of `1..=n` in lexicographic order of
//!   their one-line notation, composed right to left.
//! - `quaternion`: `1, -1, i, -i, j, -j, k, -k`.

use crate::group::{FiniteGroup, GroupError};

/// Parses `family[:param]` and builds the group.
pub fn parse_named(desc: &str) -> Result<FiniteGroup, GroupError> {
    let (family, param) = match desc.split_once(':') {
        Some((f, p)) => {
            let n = p.trim().parse::<usize>().map_err(|_| GroupError::BadParameter {
                family: f.to_string(),
                reason: format!("`{p}` is not a nonnegative integer"),
            })?;
            (f.trim(), Some(n))
        }
        None => (desc.trim(), None),
    };
    named_group(family, param)
}

pub fn named_group(family: &str, param: Option<usize>) -> Result<FiniteGroup, GroupError> {
    let need = |what: &str| GroupError::BadParameter {
        family: family.to_string(),
        reason: format!("expected {what}"),
    };
    match family.to_ascii_lowercase().as_str() {
        "trivial" => cyclic(1),
        "cyclic" | "c" => cyclic(param.ok_or_else(|| need("an order"))?),
        "dihedral" | "d" => dihedral(param.ok_or_else(|| need("n (order 2n)"))?),
        "klein" | "klein4" | "v4" => Ok(klein_four()),
        "symmetric" | "s" => symmetric(param.ok_or_else(|| need("a degree"))?),
        "quaternion" | "q8" | "q" => match param {
            None | Some(8) => Ok(quaternion()),
            Some(_) => Err(need("order 8")),
        },
        _ => Err(GroupError::UnknownFamily(family.to_string())),
    }
}

pub fn cyclic(n: usize) -> Result<FiniteGroup, GroupError> {
    if n == 0 {
        return Err(GroupError::BadParameter {
            family: "cyclic".into(),
            reason: "order must be positive".into(),
        });
    }
    let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    let names = (0..n)
        .map(|i| match i {
            0 => "e".to_string(),
            1 => "r".to_string(),
            _ => format!("r^{i}"),
        })
        .collect();
    FiniteGroup::from_table_named(&table, Some(names), crate::group::MAX_ORDER)
}

pub fn dihedral(n: usize) -> Result<FiniteGroup, GroupError> {
    if n == 0 {
        return Err(GroupError::BadParameter {
            family: "dihedral".into(),
            reason: "n must be positive".into(),
        });
    }
    // (b, i) encodes s^b r^i
    let decode = |x: usize| (x / n, x % n);
    let encode = |b: usize, i: usize| b * n + i;
    let table: Vec<Vec<usize>> = (0..2 * n)
        .map(|x| {
            (0..2 * n)
                .map(|y| {
                    let (b, i) = decode(x);
                    let (c, j) = decode(y);
                    // s^b r^i s^c r^j = s^(b+c) r^((-1)^c i + j)
                    let i2 = if c == 0 { i } else { (n - i) % n };
                    encode((b + c) % 2, (i2 + j) % n)
                })
                .collect()
        })
        .collect();
    let names = (0..2 * n)
        .map(|x| {
            let (b, i) = decode(x);
            let r = match i {
                0 => String::new(),
                1 => "r".to_string(),
                _ => format!("r^{i}"),
            };
            match (b, r.is_empty()) {
                (0, true) => "e".to_string(),
                (0, false) => r,
                (_, true) => "s".to_string(),
                (_, false) => format!("s{r}"),
            }
        })
        .collect();
    FiniteGroup::from_table_named(&table, Some(names), crate::group::MAX_ORDER)
}

pub fn klein_four() -> FiniteGroup {
    let table: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
    let names = ["e", "a", "b", "ab"].iter().map(|s| s.to_string()).collect();
    FiniteGroup::from_table_named(&table, Some(names), 4).expect("valid table")
}

pub fn symmetric(n: usize) -> Result<FiniteGroup, GroupError> {
    if n == 0 || n > 4 {
        return Err(GroupError::BadParameter {
            family: "symmetric".into(),
            reason: "degree must be between 1 and 4".into(),
        });
    }
    let perms = permutations(n);
    let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("closed under composition");
    let table: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| {
            perms
                .iter()
                .map(|q| {
                    // (p q)(x) = p(q(x))
                    let pq: Vec<usize> = (0..n).map(|x| p[q[x]]).collect();
                    index(&pq)
                })
                .collect()
        })
        .collect();
    let names = perms.iter().map(|p| cycle_notation(p)).collect();
    FiniteGroup::from_table_named(&table, Some(names), crate::group::MAX_ORDER)
}

pub fn quaternion() -> FiniteGroup {
    // basis unit u in {1, i, j, k} with sign; index = 2 * unit + (sign negative)
    const UNIT_MUL: [[(usize, bool); 4]; 4] = [
        [(0, false), (1, false), (2, false), (3, false)],
        [(1, false), (0, true), (3, false), (2, true)],
        [(2, false), (3, true), (0, true), (1, false)],
        [(3, false), (2, false), (1, true), (0, true)],
    ];
    let table: Vec<Vec<usize>> = (0..8)
        .map(|x| {
            (0..8)
                .map(|y| {
                    let (u, su) = (x / 2, x % 2 == 1);
                    let (v, sv) = (y / 2, y % 2 == 1);
                    let (w, sw) = UNIT_MUL[u][v];
                    2 * w + usize::from(su ^ sv ^ sw)
                })
                .collect()
        })
        .collect();
    let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    FiniteGroup::from_table_named(&table, Some(names), 8).expect("valid table")
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                rec(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut s = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = vec![start + 1];
        seen[start] = true;
        let mut x = p[start];
        while x != start {
            seen[x] = true;
            cycle.push(x + 1);
            x = p[x];
        }
        s.push('(');
        s.push_str(&cycle.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "));
        s.push(')');
    }
    if s.is_empty() {
        "()".to_string()
    } else {
        s
    }
}

/// The built-in groups of order at most 16 used by the exhaustive sweeps.
pub fn sweep_groups() -> Vec<(String, FiniteGroup)> {
    let mut out = Vec::new();
    for n in 2..=16 {
        out.push((format!("cyclic:{n}"), cyclic(n).expect("valid")));
    }
    out.push(("klein".into(), klein_four()));
    out.push(("symmetric:3".into(), symmetric(3).expect("valid")));
    out.push(("dihedral:4".into(), dihedral(4).expect("valid")));
    out.push(("quaternion".into(), quaternion()));
    out.push(("dihedral:6".into(), dihedral(6).expect("valid")));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_satisfy_group_axioms() {
        for (name, g) in sweep_groups() {
            assert!(g.check_axioms(), "{name}");
        }
        assert!(symmetric(4).unwrap().check_axioms());
    }

    #[test]
    fn orders() {
        assert_eq!(parse_named("cyclic:6").unwrap().order(), 6);
        assert_eq!(parse_named("dihedral:4").unwrap().order(), 8);
        assert_eq!(parse_named("symmetric:4").unwrap().order(), 24);
        assert_eq!(parse_named("quaternion").unwrap().order(), 8);
        assert_eq!(parse_named("klein").unwrap().order(), 4);
        assert_eq!(parse_named("trivial").unwrap().order(), 1);
    }

    #[test]
    fn unknown_family() {
        assert!(matches!(parse_named("mathieu:11"), Err(GroupError::UnknownFamily(_))));
        assert!(matches!(parse_named("cyclic:x"), Err(GroupError::BadParameter { .. })));
    }

    #[test]
    fn abelian_flags() {
        assert!(cyclic(12).unwrap().is_abelian());
        assert!(klein_four().is_abelian());
        assert!(!quaternion().is_abelian());
        assert!(!dihedral(3).unwrap().is_abelian());
        assert!(!symmetric(3).unwrap().is_abelian());
    }

    #[test]
    fn symmetric_names() {
        let s3 = symmetric(3).unwrap();
        assert_eq!(s3.name(0), "()");
        assert_eq!(s3.name(1), "(2 3)");
    }
}
