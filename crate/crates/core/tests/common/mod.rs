#![allow(dead_code)]

use pblocks::classes::{p_element_classes, p_regular_set, p_section, ElementSubset};
use pblocks::group::Permutation;
use pblocks::Analysis;

pub const CATALOG: &[&str] = &[
    "builtin:cyclic:2",
    "builtin:cyclic:3",
    "builtin:cyclic:4",
    "builtin:cyclic:5",
    "builtin:cyclic:6",
    "builtin:cyclic:7",
    "builtin:cyclic:8",
    "builtin:cyclic:9",
    "builtin:cyclic:10",
    "builtin:cyclic:11",
    "builtin:cyclic:12",
    "builtin:product:cyclic:2,cyclic:2",
    "builtin:symmetric:3",
    "builtin:symmetric:4",
    "builtin:alternating:4",
    "builtin:alternating:5",
    "builtin:dihedral:4",
    "builtin:dihedral:5",
    "builtin:dihedral:6",
    "builtin:quaternion:8",
    "builtin:sl23",
];

pub fn catalog() -> Vec<Analysis> {
    CATALOG
        .iter()
        .map(|s| Analysis::builtin(s).unwrap())
        .collect()
}

pub fn prime_divisors(n: usize) -> Vec<u64> {
    (2..=n as u64)
        .filter(|&p| n as u64 % p == 0 && (2..p).all(|d| p % d != 0))
        .collect()
}

/// Non-empty subsets of `primes` with at most three members, in increasing order.
pub fn prime_subsets(primes: &[u64]) -> Vec<Vec<u64>> {
    (1u32..1 << primes.len())
        .filter(|m| m.count_ones() <= 3)
        .map(|m| {
            (0..primes.len())
                .filter(|&i| m >> i & 1 == 1)
                .map(|i| primes[i])
                .collect()
        })
        .collect()
}

pub fn element(a: &Analysis, degree: usize, cycles: &[&[usize]]) -> usize {
    let perm = Permutation::from_cycles(degree, cycles).unwrap();
    a.group.index_of_permutation(&perm).unwrap()
}

/// Plain nested-loop tally of products `x_1 ⋯ x_n` with `x_i` in `lists[i]`.
pub fn tally(a: &Analysis, lists: &[Vec<usize>]) -> Vec<u64> {
    let mut partial = vec![0u64; a.order()];
    partial[0] = 1;
    for list in lists {
        let mut next = vec![0u64; a.order()];
        for (h, &c) in partial.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &x in list {
                next[a.group.mul(h, x)] += c;
            }
        }
        partial = next;
    }
    partial
}

/// Elements whose order is prime to `p`, found by scanning orders directly.
pub fn regular_by_census(a: &Analysis, p: u64) -> Vec<usize> {
    (0..a.order())
        .filter(|&x| a.group.element_order(x) % p != 0)
        .collect()
}

/// `G_{p'}` and every `p`-section, for each prime divisor, without duplicates.
pub fn set_pool(a: &Analysis) -> Vec<(String, ElementSubset)> {
    let mut pool: Vec<(String, ElementSubset)> = Vec::new();
    for p in prime_divisors(a.order()) {
        let reg = p_regular_set(&a.classes, p).unwrap();
        pool.push((format!("G_{p}'"), reg));
        for j in p_element_classes(&a.classes, p) {
            let z = a.classes.class(j).representative;
            let s = p_section(&a.group, &a.classes, p, z).unwrap();
            if pool.iter().all(|(_, t)| t.elements() != s.elements()) {
                pool.push((format!("S_{p}[class {j}]"), s));
            }
        }
    }
    pool
}
