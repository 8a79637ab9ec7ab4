//! Acceptance suite. Runs without the libtest harness so that every criterion prints
//! exactly one PASS/FAIL line, even when an earlier one fails.
//!
//! Criterion 7a asks for a count that the section definition cannot produce; it is run
//! as stated and reported as FAIL. It is listed in `KNOWN_UNATTAINABLE` so the process
//! still exits 0. Set `PBLOCKS_STRICT=1` to make every failure fatal.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use pblocks::blocks::{in_principal_block, principal_intersection, section_membership_test};
use pblocks::chartable::{rational_row, verify_table, CharacterTable};
use pblocks::classes::{p_element_classes, p_section, SectionSpec};
use pblocks::cyclotomic::CycInt;
use pblocks::verifier::{
    bruteforce_class_counts, counts_character, counts_classalgebra, frobenius_checks,
    verify_theorem_1_1, verify_theorem_2_1, DEFAULT_BUDGET,
};
use pblocks::{Analysis, Error};

use common::*;

type Outcome = Result<String, String>;

const KNOWN_UNATTAINABLE: &[&str] = &["7a"];

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

/// Σ_K |K| χ(g_K) conj(ψ(g_K)), computed here rather than by the table verifier.
fn inner(a: &Analysis, chi: usize, psi: usize) -> CycInt {
    let t = &a.table;
    (0..t.num_classes()).fold(CycInt::zero(t.exponent()), |acc, k| {
        let term =
            &t.value(chi, k).scale(&BigInt::from(t.class_sizes()[k])) * &t.value(psi, k).conj();
        &acc + &term
    })
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut classes = 0;
    for a in catalog() {
        let t = &a.table;
        let n = a.order();
        let report = verify_table(t, &a.constants);
        ensure!(
            report.passed,
            "{}: table verifier reports {:?}",
            a.label,
            report.violation
        );
        ensure!(
            t.len() == a.classes.len(),
            "{}: table is not square",
            a.label
        );
        let sq: u64 = t.characters().iter().map(|c| c.degree * c.degree).sum();
        ensure!(
            sq == n as u64,
            "{}: sum of squared degrees {sq} != {n}",
            a.label
        );
        for chi in 0..t.len() {
            for psi in 0..t.len() {
                let want = CycInt::from_int(t.exponent(), if chi == psi { n as i64 } else { 0 });
                ensure!(
                    inner(&a, chi, psi) == want,
                    "{}: rows {chi},{psi} not orthogonal",
                    a.label
                );
            }
        }
        for i in 0..t.num_classes() {
            for j in 0..t.num_classes() {
                let mut s = CycInt::zero(t.exponent());
                for chi in 0..t.len() {
                    s = &s + &(t.value(chi, i) * &t.value(chi, j).conj());
                }
                let want = if i == j {
                    (n / t.class_sizes()[i]) as i64
                } else {
                    0
                };
                ensure!(
                    s == CycInt::from_int(t.exponent(), want),
                    "{}: columns {i},{j} not orthogonal",
                    a.label
                );
            }
        }
        let k = t.num_classes();
        for chi in 0..t.len() {
            let w: Vec<CycInt> = (0..k)
                .map(|c| t.central_character(chi, c).unwrap())
                .collect();
            for i in 0..k {
                for j in 0..k {
                    let rhs = (0..k).fold(CycInt::zero(t.exponent()), |acc, c| {
                        &acc + &w[c].scale(&BigInt::from(a.constants.get(i, j, c)))
                    });
                    ensure!(
                        &w[i] * &w[j] == rhs,
                        "{}: ω_{chi} not multiplicative at ({i},{j})",
                        a.label
                    );
                }
            }
        }
        classes += k;
    }
    let elapsed = start.elapsed();
    ensure!(
        elapsed < Duration::from_secs(60),
        "catalog took {elapsed:?}"
    );
    Ok(format!(
        "{} groups, {classes} classes, exact checks in {elapsed:.2?}",
        CATALOG.len()
    ))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut runs = 0;
    for a in catalog() {
        for primes in prime_subsets(&prime_divisors(a.order())) {
            let r = verify_theorem_1_1(&a, &primes, DEFAULT_BUDGET)
                .map_err(|e| format!("{} {primes:?}: {e}", a.label))?;
            ensure!(
                r.equivalent,
                "{} {primes:?}: route (i) {} vs route (ii) {}",
                a.label,
                r.route_i.holds,
                r.route_ii.constant
            );
            ensure!(
                r.all_checks_pass(),
                "{} {primes:?}: consistency checks failed",
                a.label
            );
            runs += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(180), "sweep took {elapsed:?}");
    Ok(format!(
        "{runs} (group, prime set) pairs agree in {elapsed:.2?}"
    ))
}

fn criterion_3() -> Outcome {
    let a = Analysis::builtin("builtin:alternating:5").map_err(|e| e.to_string())?;
    let rows = principal_intersection(&a.table, &[2, 3, 5]).map_err(|e| e.to_string())?;
    ensure!(rows == [0], "intersection is {rows:?}");
    let lists: Vec<Vec<usize>> = [2, 3, 5]
        .iter()
        .map(|&p| regular_by_census(&a, p))
        .collect();
    let sizes: Vec<usize> = lists.iter().map(Vec::len).collect();
    ensure!(sizes == [45, 40, 36], "p-regular sizes {sizes:?}");
    let oracle = tally(&a, &lists);
    ensure!(
        oracle.iter().all(|&c| c == 1080),
        "enumeration over 64800 triples is not constantly 1080"
    );
    let r = verify_theorem_1_1(&a, &[2, 3, 5], DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    ensure!(
        r.value_u64() == Some(1080),
        "engine value {:?}",
        r.route_ii.value
    );
    ensure!(
        r.remark_1_2.bound == Some(big(60)),
        "bound {:?}",
        r.remark_1_2.bound
    );
    ensure!(
        r.remark_1_2.multiple == Some(big(18)),
        "multiple {:?}",
        r.remark_1_2.multiple
    );
    ensure!(
        r.route_ii.methods_used.len() == 3,
        "methods {:?}",
        r.route_ii.methods_used
    );
    ensure!(r.equivalent && r.all_checks_pass(), "report checks failed");
    Ok("intersection {trivial}, N ≡ 1080 (64800 triples), 1080 = 18·60".into())
}

fn criterion_4() -> Outcome {
    let a = Analysis::builtin("builtin:symmetric:3").map_err(|e| e.to_string())?;
    let rows = principal_intersection(&a.table, &[2, 3]).map_err(|e| e.to_string())?;
    let values: Vec<Option<Vec<i64>>> = rows.iter().map(|&i| rational_row(&a.table, i)).collect();
    ensure!(
        values == [Some(vec![1, 1, 1]), Some(vec![1, -1, 1])],
        "intersection rows {values:?}"
    );
    let t = element(&a, 3, &[&[1, 2]]);
    let c = element(&a, 3, &[&[1, 2, 3]]);
    let lists = vec![regular_by_census(&a, 2), regular_by_census(&a, 3)];
    ensure!(lists[0].len() * lists[1].len() == 12, "expected 12 pairs");
    let oracle = tally(&a, &lists);
    ensure!(
        [oracle[0], oracle[t], oracle[c]] == [1, 3, 1],
        "enumeration gives {:?}",
        oracle
    );
    let r = verify_theorem_1_1(&a, &[2, 3], DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let by_class: Vec<BigUint> = [0, t, c]
        .iter()
        .map(|&x| r.route_ii.counts_by_class[a.classes.class_of(x)].clone())
        .collect();
    ensure!(
        by_class == [big(1), big(3), big(1)],
        "engine counts {by_class:?}"
    );
    ensure!(
        !r.route_ii.constant && !r.route_i.holds && r.equivalent,
        "equivalence not confirmed"
    );
    Ok("intersection {trivial, sign}, counts (1, 3, 1), non-constant".into())
}

fn criterion_5() -> Outcome {
    let a = Analysis::builtin("builtin:cyclic:6").map_err(|e| e.to_string())?;
    let rows = principal_intersection(&a.table, &[2, 3]).map_err(|e| e.to_string())?;
    ensure!(rows == [0], "intersection {rows:?}");
    let lists = vec![regular_by_census(&a, 2), regular_by_census(&a, 3)];
    ensure!(lists[0].len() * lists[1].len() == 6, "expected 6 pairs");
    ensure!(
        tally(&a, &lists).iter().all(|&c| c == 1),
        "enumeration is not constantly 1"
    );
    let r = verify_theorem_1_1(&a, &[2, 3], DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    ensure!(
        r.value_u64() == Some(1),
        "engine value {:?}",
        r.route_ii.value
    );
    ensure!(
        r.remark_1_2.bound == Some(big(1)),
        "bound {:?}",
        r.remark_1_2.bound
    );
    let products = [
        "builtin:product:cyclic:2,cyclic:3",
        "builtin:product:cyclic:4,cyclic:9",
        "builtin:product:dihedral:4,cyclic:3",
        "builtin:product:quaternion:8,cyclic:5",
        "builtin:product:cyclic:3,dihedral:4",
        "builtin:product:cyclic:2,product:cyclic:3,cyclic:5",
        "builtin:product:dihedral:4,product:cyclic:3,cyclic:5",
    ];
    for spec in products {
        let g = Analysis::builtin(spec).map_err(|e| format!("{spec}: {e}"))?;
        let primes = prime_divisors(g.order());
        ensure!(primes.len() >= 2, "{spec} has a single prime");
        let r =
            verify_theorem_1_1(&g, &primes, DEFAULT_BUDGET).map_err(|e| format!("{spec}: {e}"))?;
        ensure!(
            r.route_ii.constant && r.route_i.holds,
            "{spec}: counts not constant"
        );
        ensure!(r.all_checks_pass(), "{spec}: consistency checks failed");
    }
    Ok(format!(
        "C6: N ≡ 1, bound 1; {} p-group products constant",
        products.len()
    ))
}

fn criterion_6() -> Outcome {
    let mut checks = 0;
    for a in catalog() {
        let n = a.order() as u64;
        let engine = frobenius_checks(&a.classes);
        ensure!(
            engine.len() == prime_divisors(a.order()).len(),
            "{}: missing primes",
            a.label
        );
        for f in engine {
            let census = regular_by_census(&a, f.p).len();
            let mut part = n;
            while part % f.p == 0 {
                part /= f.p;
            }
            ensure!(
                f.regular_count == census,
                "{} p={}: count {} vs census {census}",
                a.label,
                f.p,
                f.regular_count
            );
            ensure!(
                f.p_complement_part == part,
                "{} p={}: p'-part {}",
                a.label,
                f.p,
                f.p_complement_part
            );
            ensure!(
                census as u64 % part == 0 && f.divisible,
                "{} p={}: {census} not divisible by {part}",
                a.label,
                f.p
            );
            checks += 1;
        }
    }
    let a5 = Analysis::builtin("builtin:alternating:5").map_err(|e| e.to_string())?;
    let pairs: Vec<(usize, u64)> = frobenius_checks(&a5.classes)
        .iter()
        .map(|f| (f.regular_count, f.p_complement_part))
        .collect();
    ensure!(
        pairs == [(45, 15), (40, 20), (36, 12)],
        "A5 gives {pairs:?}"
    );
    Ok(format!(
        "{checks} (group, prime) checks; A5: 45/15, 40/20, 36/12"
    ))
}

fn a5_sections() -> std::result::Result<(Analysis, Vec<usize>), String> {
    let a = Analysis::builtin("builtin:alternating:5").map_err(|e| e.to_string())?;
    let zs = vec![
        element(&a, 5, &[&[1, 2], &[3, 4]]),
        element(&a, 5, &[&[1, 2, 3]]),
        element(&a, 5, &[&[1, 2, 3, 4, 5]]),
    ];
    Ok((a, zs))
}

fn criterion_7a() -> Outcome {
    let (a, zs) = a5_sections()?;
    let primes = [2, 3, 5];
    let lists: Vec<Vec<usize>> = primes
        .iter()
        .zip(&zs)
        .map(|(&p, &z)| {
            // members whose p-part is G-conjugate to z, found by scanning every element
            let target: Vec<usize> = a.classes.class(a.classes.class_of(z)).members.clone();
            (0..a.order())
                .filter(|&g| {
                    let o = a.group.element_order(g);
                    let mut m = o;
                    while m % p == 0 {
                        m /= p;
                    }
                    let pv = o / m;
                    // g_p = g^k with k ≡ 1 mod p^v and k ≡ 0 mod m
                    let k = (0..o).find(|&k| k % pv == 1 % pv && k % m == 0).unwrap();
                    let g_p = a.group.pow(g, k);
                    target.contains(&g_p)
                })
                .collect()
        })
        .collect();
    let sizes: Vec<usize> = lists.iter().map(Vec::len).collect();
    let oracle = tally(&a, &lists);
    let r = verify_theorem_2_1(&a, &primes, &zs, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let engine_sizes: Vec<usize> = r.route_ii.sets.iter().map(|s| s.size).collect();
    ensure!(
        engine_sizes == sizes,
        "engine section sizes {engine_sizes:?} vs scan {sizes:?}"
    );
    ensure!(r.equivalent, "equivalence false");
    let triples: usize = sizes.iter().product();
    ensure!(
        oracle.iter().all(|&c| c == 120) && r.value_u64() == Some(120),
        "expected N ≡ 120 over 15·20·24 = 7200 triples; section sizes are {sizes:?} ({triples} triples) \
         and enumeration gives N ≡ {} (engine {:?}, equivalence {})",
        oracle[0],
        r.value_u64(),
        r.equivalent
    );
    Ok("N ≡ 120".into())
}

fn criterion_7b() -> Outcome {
    let a = Analysis::builtin("builtin:symmetric:4").map_err(|e| e.to_string())?;
    let zs = [
        element(&a, 4, &[&[1, 2], &[3, 4]]),
        element(&a, 4, &[&[1, 2, 3]]),
    ];
    let lists: Vec<Vec<usize>> = [2u64, 3]
        .iter()
        .zip(&zs)
        .map(|(&p, &z)| p_section(&a.group, &a.classes, p, z).unwrap().elements())
        .collect();
    let oracle = tally(&a, &lists);
    let r = verify_theorem_2_1(&a, &[2, 3], &zs, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    ensure!(
        oracle.iter().any(|&c| c != oracle[0]),
        "enumeration is constant"
    );
    ensure!(!r.route_ii.constant, "engine counts constant");
    ensure!(!r.route_i.holds, "route (i) holds");
    ensure!(r.equivalent, "equivalence false");
    Ok(format!(
        "non-constant counts {:?}, route (i) false",
        r.route_ii
            .counts_by_class
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
    ))
}

fn criterion_7c() -> Outcome {
    let a = Analysis::builtin("builtin:symmetric:4").map_err(|e| e.to_string())?;
    let z = element(&a, 4, &[&[1, 2, 3, 4]]);
    let centralizer = (0..a.order())
        .filter(|&x| a.group.mul(x, z) == a.group.mul(z, x))
        .count();
    ensure!(centralizer == 4, "|C(z)| = {centralizer}");
    let spec = SectionSpec::new(&a.group, &a.classes, 2, z).map_err(|e| e.to_string())?;
    ensure!(!spec.central_valid, "validator accepted (1 2 3 4)");
    let r = verify_theorem_2_1(&a, &[2], &[z], DEFAULT_BUDGET);
    ensure!(
        r == Err(Error::NotCentralInSylow { element: z, p: 2 }),
        "verify21 gave {:?}",
        r.map(|_| ())
    );
    Ok("(1 2 3 4) rejected at p = 2 (|C| = 4 < 8)".into())
}

fn criterion_8() -> Outcome {
    let mut tested = 0;
    for a in catalog() {
        for p in prime_divisors(a.order()) {
            for j in p_element_classes(&a.classes, p) {
                let z = a.classes.class(j).representative;
                let spec =
                    SectionSpec::new(&a.group, &a.classes, p, z).map_err(|e| e.to_string())?;
                if !spec.central_valid {
                    continue;
                }
                for chi in 0..a.table.len() {
                    let by_section = section_membership_test(&a.table, &a.classes, &spec, chi)
                        .map_err(|e| e.to_string())?
                        .0;
                    let by_regular = in_principal_block(&a.table, p, chi)
                        .map_err(|e| e.to_string())?
                        .0;
                    ensure!(by_section == by_regular, "{} p={p} class {j} row {chi}: section {by_section} vs regular {by_regular}", a.label);
                }
                tested += 1;
            }
        }
    }
    Ok(format!(
        "{tested} central sections agree with G_p' membership on every row"
    ))
}

fn criterion_9() -> Outcome {
    let mut tuples = 0;
    for a in catalog().into_iter().filter(|a| a.order() <= 24) {
        let pool = set_pool(&a);
        let mut stack: Vec<Vec<usize>> = (0..pool.len()).map(|i| vec![i]).collect();
        while let Some(idx) = stack.pop() {
            let sets: Vec<_> = idx.iter().map(|&i| pool[i].1.clone()).collect();
            let vectors: Vec<Vec<bool>> = sets
                .iter()
                .map(|s| s.class_vector(a.classes.len()).unwrap())
                .collect();
            let brute = bruteforce_class_counts(&a.group, &a.classes, &sets, DEFAULT_BUDGET)
                .map_err(|e| e.to_string())?;
            let algebra = counts_classalgebra(&a.constants, &vectors);
            let chars = counts_character(&a.table, &sets).map_err(|e| e.to_string())?;
            let names: Vec<&str> = idx.iter().map(|&i| pool[i].0.as_str()).collect();
            ensure!(
                brute == algebra && algebra == chars,
                "{} {names:?}: {brute:?} / {algebra:?} / {chars:?}",
                a.label
            );
            tuples += 1;
            if idx.len() < 3 {
                for i in 0..pool.len() {
                    let mut next = idx.clone();
                    next.push(i);
                    stack.push(next);
                }
            }
        }
    }
    Ok(format!(
        "{tuples} ordered set tuples agree across all three methods"
    ))
}

fn run_bin(args: &[&str]) -> std::result::Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_pblocks"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "{args:?} exited {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out.stdout)
}

fn criterion_10() -> Outcome {
    let runs: &[&[&str]] = &[
        &["chartable", "builtin:alternating:5", "--json"],
        &["chartable", "builtin:sl23", "--json"],
        &["chartable", "builtin:cyclic:12", "--json"],
        &["verify", "builtin:alternating:5", "-p", "2,3,5", "--json"],
        &["verify", "builtin:symmetric:4", "-p", "2,3", "--json"],
        &[
            "verify21",
            "builtin:symmetric:4",
            "-p",
            "2,3",
            "-z",
            "(1 2)(3 4)",
            "-z",
            "(1 2 3)",
            "--json",
        ],
    ];
    for args in runs {
        let first = run_bin(args)?;
        let second = run_bin(args)?;
        ensure!(first == second, "{args:?}: output differs between runs");
    }
    let dir = std::env::temp_dir().join(format!("pblocks-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    for a in catalog() {
        let text = a.table.export_string();
        let back = CharacterTable::import_str(&a.group, &a.classes, &a.constants, &text)
            .map_err(|e| format!("{}: {e}", a.label))?;
        ensure!(
            verify_table(&back, &a.constants).passed,
            "{}: imported table fails verification",
            a.label
        );
        ensure!(
            back.export_string() == text,
            "{}: re-export differs",
            a.label
        );
        let exported = run_bin(&["chartable", a.label.as_str(), "--json"])?;
        ensure!(
            exported == text.as_bytes(),
            "{}: CLI export differs from library export",
            a.label
        );
        let path = dir.join("table.json");
        std::fs::write(&path, &exported).map_err(|e| e.to_string())?;
        let path = path.to_str().unwrap();
        let via_file = run_bin(&["chartable", a.label.as_str(), "--table", path, "--json"])?;
        ensure!(
            via_file == exported,
            "{}: import through the CLI changed the table",
            a.label
        );
        let primes = prime_divisors(a.order())
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(",");
        let fresh = run_bin(&["verify", a.label.as_str(), "-p", &primes, "--json"])?;
        let imported = run_bin(&[
            "verify",
            a.label.as_str(),
            "-p",
            &primes,
            "--table",
            path,
            "--json",
        ])?;
        ensure!(
            fresh == imported,
            "{}: verify differs with imported table",
            a.label
        );
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!(
        "byte-identical reruns; {} tables round-trip through export/import/verify",
        CATALOG.len()
    ))
}

fn main() {
    let criteria: &[(&str, &str, fn() -> Outcome)] = &[
        (
            "1",
            "character tables of the catalog are exact",
            criterion_1,
        ),
        ("2", "p-regular equivalence sweep", criterion_2),
        ("3", "A5 with {2,3,5}", criterion_3),
        ("4", "S3 with {2,3}", criterion_4),
        ("5", "C6 and products of p-groups", criterion_5),
        ("6", "Frobenius divisibility", criterion_6),
        (
            "7a",
            "A5 sections of (1 2)(3 4), (1 2 3), (1 2 3 4 5)",
            criterion_7a,
        ),
        ("7b", "S4 sections of (1 2)(3 4), (1 2 3)", criterion_7b),
        ("7c", "S4 centrality validator", criterion_7c),
        ("8", "section and p-regular membership agree", criterion_8),
        ("9", "three counting methods agree", criterion_9),
        ("10", "determinism and table round trips", criterion_10),
    ];
    let strict = std::env::var("PBLOCKS_STRICT").is_ok_and(|v| v == "1");
    let mut fatal = 0;
    let mut failed = 0;
    for (id, title, f) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        match result {
            Ok(detail) => println!("criterion {id:>3}: PASS  {title}: {detail} [{elapsed:.2?}]"),
            Err(why) => {
                failed += 1;
                let known = KNOWN_UNATTAINABLE.contains(id);
                if strict || !known {
                    fatal += 1;
                }
                let tag = if known {
                    " (known unattainable as stated)"
                } else {
                    ""
                };
                println!("criterion {id:>3}: FAIL  {title}{tag}: {why} [{elapsed:.2?}]");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed, {fatal} fatal",
        criteria.len() - failed
    );
    if fatal > 0 {
        std::process::exit(1);
    }
}
