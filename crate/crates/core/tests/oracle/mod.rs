//! Brute-force reference implementations, written straight from the
//! definitions and independent of the library's indexing and bitsets.
#![allow(dead_code)]

use afideal::{AlgebraShape, Ideal, MatrixUnit};

pub type Unit = (usize, usize, usize);

pub fn units(blocks: &[usize]) -> Vec<Unit> {
    let mut out = Vec::new();
    for (b, &n) in blocks.iter().enumerate() {
        for i in 1..=n {
            for j in i..=n {
                out.push((b + 1, i, j));
            }
        }
    }
    out
}

pub fn leq_p(e: Unit, f: Unit) -> bool {
    e.0 == f.0 && e.2 <= f.2 && e.1 >= f.1
}

/// Every up-closed subset, as masks over `units(blocks)`.
pub fn all_ideals(blocks: &[usize]) -> Vec<u64> {
    let us = units(blocks);
    assert!(us.len() <= 20, "subset oracle limited to 20 units");
    (0..1u64 << us.len())
        .filter(|&m| {
            (0..us.len()).all(|a| {
                m & (1 << a) == 0 || (0..us.len()).all(|b| !leq_p(us[a], us[b]) || m & (1 << b) != 0)
            })
        })
        .collect()
}

pub fn full(blocks: &[usize]) -> u64 {
    (1u64 << units(blocks).len()) - 1
}

/// Span of all products `e_ij e_jk` with `e_ij ∈ j`, `e_jk ∈ k`.
pub fn product(blocks: &[usize], j: u64, k: u64) -> u64 {
    let us = units(blocks);
    let mut out = 0;
    for (a, &x) in us.iter().enumerate() {
        for (b, &y) in us.iter().enumerate() {
            if j & (1 << a) != 0 && k & (1 << b) != 0 && x.0 == y.0 && x.2 == y.1 {
                let c = us.iter().position(|&z| z == (x.0, x.1, y.2)).unwrap();
                out |= 1 << c;
            }
        }
    }
    out
}

fn sub(a: u64, b: u64) -> bool {
    a & !b == 0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Flags {
    pub prime: bool,
    pub k4: bool,
    pub meet_irreducible: bool,
    pub maximal: bool,
}

/// Pairwise definitions over the ideals of `[base, ⊤]`, with the product
/// of the quotient `JK ∨ base`. The improper ideal gets no flags.
pub fn classify(blocks: &[usize], ideals: &[u64], base: u64, i: u64) -> Flags {
    classify_with(blocks, ideals, base, i, &|j, k| product(blocks, j, k))
}

/// Products of every ordered pair of `ideals`.
pub fn product_table(blocks: &[usize], ideals: &[u64]) -> std::collections::HashMap<(u64, u64), u64> {
    let mut table = std::collections::HashMap::new();
    for &j in ideals {
        for &k in ideals {
            table.insert((j, k), product(blocks, j, k));
        }
    }
    table
}

pub fn classify_with(
    blocks: &[usize],
    ideals: &[u64],
    base: u64,
    i: u64,
    mul: &dyn Fn(u64, u64) -> u64,
) -> Flags {
    let top = full(blocks);
    if i == top {
        return Flags::default();
    }
    let above: Vec<u64> = ideals.iter().copied().filter(|&x| sub(base, x)).collect();
    let outside: Vec<u64> = above.iter().copied().filter(|&x| !sub(x, i)).collect();
    let k4 = outside.iter().all(|&j| outside.iter().all(|&k| !sub(j & k, i)));
    let prime = outside
        .iter()
        .all(|&j| outside.iter().all(|&k| !sub(mul(j, k) | base, i)));
    let strictly_larger: Vec<u64> = above.iter().copied().filter(|&x| sub(i, x) && x != i).collect();
    let meet_irreducible = strictly_larger
        .iter()
        .all(|&j| strictly_larger.iter().all(|&k| j & k != i));
    let maximal = strictly_larger == vec![top];
    Flags {
        prime,
        k4,
        meet_irreducible,
        maximal,
    }
}

/// `{f : f ≰ₚ e}`.
pub fn corner(blocks: &[usize], e: Unit) -> u64 {
    units(blocks)
        .iter()
        .enumerate()
        .filter(|(_, &f)| !leq_p(f, e))
        .fold(0, |m, (k, _)| m | 1 << k)
}

pub fn to_ideal(shape: &AlgebraShape, mask: u64) -> Ideal {
    let us = units(shape.blocks());
    let members: Vec<MatrixUnit> = us
        .iter()
        .enumerate()
        .filter(|(k, _)| mask & (1 << k) != 0)
        .map(|(_, &(b, i, j))| MatrixUnit::new(b, i, j))
        .collect();
    Ideal::from_units(shape, members.iter()).expect("oracle masks are ideals")
}

pub fn from_ideal(ideal: &Ideal) -> u64 {
    units(ideal.shape().blocks())
        .iter()
        .enumerate()
        .filter(|(_, &(b, i, j))| ideal.contains(&MatrixUnit::new(b, i, j)))
        .fold(0, |m, (k, _)| m | 1 << k)
}

/// Units of a source block list kept by pulling `member` back through
/// strands given as `(source block, target block, positions)`.
pub fn pullback_units(
    source_blocks: &[usize],
    strands: &[(usize, usize, Vec<usize>)],
    member: impl Fn(Unit) -> bool,
) -> Vec<Unit> {
    units(source_blocks)
        .into_iter()
        .filter(|&(b, i, j)| {
            strands
                .iter()
                .filter(|s| s.0 == b)
                .all(|s| member((s.1, s.2[i - 1], s.2[j - 1])))
        })
        .collect()
}

/// Every composition of every total from 1 to `max_total`.
pub fn compositions(max_total: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for first in 1..=rest {
            cur.push(first);
            go(rest - first, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for total in 1..=max_total {
        go(total, &mut Vec::new(), &mut out);
    }
    out
}
