//! Command-line front end: argument parsing, orchestration and report rendering.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::analysis::Analysis;
use crate::arith::prime_divisors;
use crate::blocks::{
    in_principal_block, principal_intersection, section_membership_test, BlockMembership,
};
use crate::chartable::{approx, CharacterTable};
use crate::classes::{p_element_classes, p_section, SectionSpec};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupSpec, Limits, Permutation};
use crate::verifier::{
    frobenius_checks, verify_theorem_1_1, verify_theorem_2_1, TheoremReport, DEFAULT_BUDGET,
};

#[derive(Debug, Parser)]
#[command(
    name = "pblocks",
    version,
    about = "Principal blocks and factorization counts for finite groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List conjugacy classes
    Classes(CommonArgs),
    /// Print or export the character table
    Chartable(CommonArgs),
    /// Principal-block membership for each prime
    Blocks(CommonArgs),
    /// p-sections of p-element class representatives
    Sections(CommonArgs),
    /// Check the p-regular factorization equivalence
    Verify(CommonArgs),
    /// Check the p-section factorization equivalence
    Verify21(CommonArgs),
    /// Frobenius divisibility of p-regular counts
    Frobenius(CommonArgs),
}

#[derive(Debug, Args, Clone)]
pub struct CommonArgs {
    /// `builtin:<name>` or a path to a group JSON file
    pub group: String,

    /// Comma-separated distinct primes
    #[arg(short = 'p', long = "primes", value_delimiter = ',')]
    pub primes: Vec<u64>,

    /// Section element per prime: `class:<i>:rep`, `elem:<i>`, image list `[2,1,3]`, or cycles `(1 2)(3 4)`
    #[arg(short = 'z', long = "section")]
    pub sections: Vec<String>,

    /// Emit JSON instead of text
    #[arg(long)]
    pub json: bool,

    /// Iteration cap for brute-force counting
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,

    /// Use this character table (JSON) instead of computing one
    #[arg(long)]
    pub table: Option<PathBuf>,

    /// Group order cap
    #[arg(long, default_value_t = Limits::default().max_order)]
    pub max_order: usize,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Resolves `builtin:` names, otherwise reads a JSON group file.
pub fn parse_group_spec(s: &str) -> Result<GroupSpec> {
    if s.starts_with("builtin:") {
        return GroupSpec::builtin(s);
    }
    let text =
        std::fs::read_to_string(s).map_err(|e| Error::Io(format!("cannot read `{s}`: {e}")))?;
    GroupSpec::from_json(&text)
}

/// Parses a section element for `g`.
pub fn parse_element(a: &Analysis, s: &str) -> Result<usize> {
    let s = s.trim();
    let bad = || Error::MalformedSpec(format!("cannot parse element `{s}`"));
    if let Some(rest) = s.strip_prefix("class:") {
        let idx = rest.strip_suffix(":rep").ok_or_else(bad)?;
        let j: usize = idx.parse().map_err(|_| bad())?;
        if j >= a.classes.len() {
            return Err(Error::MalformedSpec(format!(
                "class index {j} out of range"
            )));
        }
        return Ok(a.classes.class(j).representative);
    }
    if let Some(rest) = s.strip_prefix("elem:") {
        let i: usize = rest.parse().map_err(|_| bad())?;
        if i >= a.order() {
            return Err(Error::MalformedSpec(format!(
                "element index {i} out of range"
            )));
        }
        return Ok(i);
    }
    let degree = a.group.perm_degree().ok_or_else(|| {
        Error::MalformedSpec("permutation syntax needs a permutation group".into())
    })?;
    let perm = if s.starts_with('(') {
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        for chunk in s.split(')').map(str::trim).filter(|c| !c.is_empty()) {
            let body = chunk.strip_prefix('(').ok_or_else(bad)?;
            let pts = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            if !pts.is_empty() {
                cycles.push(pts);
            }
        }
        let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
        Permutation::from_cycles(degree, &refs)?
    } else {
        let body = s.trim_start_matches('[').trim_end_matches(']');
        let images = body
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        Permutation::from_images(&images)?
    };
    a.group
        .index_of_permutation(&perm)
        .ok_or_else(|| Error::MalformedSpec(format!("{perm} is not an element of the group")))
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::TableInconsistent(_) | Error::MethodMismatch(_) | Error::NonIntegralCount(_) => 1,
        _ => 2,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli.command),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            }
        }
    }
}

pub fn run(cmd: &Command) -> Outcome {
    match dispatch(cmd) {
        Ok((ok, stdout)) => Outcome {
            code: if ok { 0 } else { 1 },
            stdout,
            stderr: if ok {
                String::new()
            } else {
                "error: a verified property failed\n".into()
            },
        },
        Err(e) => Outcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn load(args: &CommonArgs) -> Result<Analysis> {
    let spec = parse_group_spec(&args.group)?;
    let limits = Limits {
        max_order: args.max_order,
        ..Limits::default()
    };
    let group = FiniteGroup::enumerate_with(&spec, limits)?;
    match &args.table {
        None => Analysis::from_group(&args.group, group),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Io(format!("cannot read `{}`: {e}", path.display())))?;
            // skip the table engine entirely when a table is supplied
            let classes = crate::classes::ClassData::compute(&group);
            let constants = crate::structure::StructureConstants::compute(&group, &classes);
            let table = CharacterTable::import_str(&group, &classes, &constants, &text)?;
            Ok(Analysis {
                label: args.group.clone(),
                group,
                classes,
                constants,
                table,
            })
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serialises") + "\n"
}

fn dispatch(cmd: &Command) -> Result<(bool, String)> {
    match cmd {
        Command::Classes(args) => classes(args),
        Command::Chartable(args) => chartable(args),
        Command::Blocks(args) => blocks(args),
        Command::Sections(args) => sections(args),
        Command::Verify(args) => verify(args, false),
        Command::Verify21(args) => verify(args, true),
        Command::Frobenius(args) => frobenius(args),
    }
}

fn classes(args: &CommonArgs) -> Result<(bool, String)> {
    let spec = parse_group_spec(&args.group)?;
    let limits = Limits {
        max_order: args.max_order,
        ..Limits::default()
    };
    let g = FiniteGroup::enumerate_with(&spec, limits)?;
    let cd = crate::classes::ClassData::compute(&g);
    let rows: Vec<_> = cd
        .classes()
        .iter()
        .enumerate()
        .map(|(j, c)| {
            json!({
                "index": j,
                "rep": g.element_label(c.representative),
                "order": c.element_order,
                "size": c.size(),
                "centralizer_order": c.centralizer_order,
            })
        })
        .collect();
    if args.json {
        return Ok((
            true,
            to_json(&json!({
                "group": args.group,
                "order": g.order(),
                "exponent": cd.exponent(),
                "classes": rows,
            })),
        ));
    }
    let mut out = String::new();
    writeln!(
        out,
        "group {} of order {}, exponent {}",
        args.group,
        g.order(),
        cd.exponent()
    )
    .unwrap();
    writeln!(
        out,
        "{:>5} {:>6} {:>6} {:>12}  rep",
        "class", "order", "size", "centralizer"
    )
    .unwrap();
    for (j, c) in cd.classes().iter().enumerate() {
        writeln!(
            out,
            "{:>5} {:>6} {:>6} {:>12}  {}",
            j,
            c.element_order,
            c.size(),
            c.centralizer_order,
            g.element_label(c.representative)
        )
        .unwrap();
    }
    Ok((true, out))
}

fn chartable(args: &CommonArgs) -> Result<(bool, String)> {
    let a = load(args)?;
    let ct = &a.table;
    if args.json {
        return Ok((true, ct.export_string()));
    }
    let mut out = String::new();
    writeln!(
        out,
        "character table of {} (order {}, {} classes, e = {})",
        args.group,
        a.order(),
        ct.num_classes(),
        ct.exponent()
    )
    .unwrap();
    if let Some((q, lambda)) = ct.modulus() {
        writeln!(out, "computed mod q = {q} with λ = {lambda}").unwrap();
    }
    writeln!(
        out,
        "classes (order/size): {}",
        (0..ct.num_classes())
            .map(|j| format!("{}:{}/{}", j, ct.rep_orders()[j], ct.class_sizes()[j]))
            .collect::<Vec<_>>()
            .join("  ")
    )
    .unwrap();
    writeln!(out, "exact values (E(n) = exp(2πi/n)):").unwrap();
    for (i, c) in ct.characters().iter().enumerate() {
        let vals: Vec<String> = c.values.iter().map(ToString::to_string).collect();
        writeln!(out, "  χ{i} [deg {}]: {}", c.degree, vals.join(" | ")).unwrap();
    }
    writeln!(
        out,
        "approximate values (display only, not used in any decision):"
    )
    .unwrap();
    for (i, c) in ct.characters().iter().enumerate() {
        let vals: Vec<String> = c.values.iter().map(approx).collect();
        writeln!(out, "  χ{i}: {}", vals.join("  ")).unwrap();
    }
    Ok((true, out))
}

fn primes_or_all(a: &Analysis, primes: &[u64]) -> Vec<u64> {
    if primes.is_empty() {
        prime_divisors(a.order() as u64)
    } else {
        primes.to_vec()
    }
}

fn blocks(args: &CommonArgs) -> Result<(bool, String)> {
    let a = load(args)?;
    let primes = primes_or_all(&a, &args.primes);
    let intersection = principal_intersection(&a.table, &primes)?;
    let memberships = primes
        .iter()
        .map(|&p| BlockMembership::compute(&a.table, p))
        .collect::<Result<Vec<_>>>()?;
    let ok = memberships.iter().all(|m| m.rows[0].in_principal);
    let degrees: Vec<u64> = intersection
        .iter()
        .map(|&i| a.table.character(i).degree)
        .collect();
    if args.json {
        return Ok((
            ok,
            to_json(&json!({
                "group": args.group,
                "blocks": memberships,
                "intersection_rows": intersection,
                "intersection_degrees": degrees,
            })),
        ));
    }
    let mut out = String::new();
    for m in &memberships {
        writeln!(out, "principal {}-block of {}:", m.p, args.group).unwrap();
        for (i, r) in m.rows.iter().enumerate() {
            let cert = match &r.certificate {
                crate::blocks::Certificate::Integer(s) => s.clone(),
                crate::blocks::Certificate::Cyclotomic(v) => v.to_string(),
            };
            writeln!(
                out,
                "  χ{i} (degree {}): {}  [Σ|K|χ over {}-regular classes = {}]",
                r.degree,
                if r.in_principal { "in" } else { "out" },
                m.p,
                cert
            )
            .unwrap();
        }
    }
    writeln!(
        out,
        "rows in every listed principal block: {intersection:?} (degrees {degrees:?})"
    )
    .unwrap();
    Ok((ok, out))
}

fn sections(args: &CommonArgs) -> Result<(bool, String)> {
    let a = load(args)?;
    let primes = primes_or_all(&a, &args.primes);
    crate::classes::validate_primes(a.order(), &primes)?;
    let mut rows = Vec::new();
    let mut ok = true;
    let mut total_ok = true;
    for &p in &primes {
        let mut covered = 0;
        for j in p_element_classes(&a.classes, p) {
            let z = a.classes.class(j).representative;
            let spec = SectionSpec::new(&a.group, &a.classes, p, z)?;
            let size = p_section(&a.group, &a.classes, p, z)?.len();
            covered += size;
            let agrees = if spec.central_valid {
                let mut all = true;
                for chi in 0..a.table.len() {
                    let by_section = section_membership_test(&a.table, &a.classes, &spec, chi)?.0;
                    let by_regular = in_principal_block(&a.table, p, chi)?.0;
                    all &= by_section == by_regular;
                }
                ok &= all;
                Some(all)
            } else {
                None
            };
            rows.push(json!({
                "p": p,
                "class": j,
                "z": a.group.element_label(z),
                "central_valid": spec.central_valid,
                "size": size,
                "agrees_with_regular": agrees,
            }));
        }
        total_ok &= covered == a.order();
    }
    ok &= total_ok;
    if args.json {
        return Ok((
            ok,
            to_json(&json!({ "group": args.group, "sections": rows })),
        ));
    }
    let mut out = String::new();
    writeln!(
        out,
        "{:>3} {:>5} {:>6} {:>8} {:>8}  z",
        "p", "class", "size", "central", "agrees"
    )
    .unwrap();
    for r in &rows {
        writeln!(
            out,
            "{:>3} {:>5} {:>6} {:>8} {:>8}  {}",
            r["p"].to_string(),
            r["class"].to_string(),
            r["size"].to_string(),
            r["central_valid"].to_string(),
            match r["agrees_with_regular"].as_bool() {
                Some(b) => b.to_string(),
                None => "-".into(),
            },
            r["z"].as_str().unwrap_or_default()
        )
        .unwrap();
    }
    Ok((ok, out))
}

fn verify(args: &CommonArgs, sections: bool) -> Result<(bool, String)> {
    let a = load(args)?;
    let report = if sections {
        let zs = args
            .sections
            .iter()
            .map(|s| parse_element(&a, s))
            .collect::<Result<Vec<_>>>()?;
        verify_theorem_2_1(&a, &args.primes, &zs, args.budget)?
    } else {
        verify_theorem_1_1(&a, &args.primes, args.budget)?
    };
    let ok = report.all_checks_pass();
    if args.json {
        return Ok((ok, to_json(&report)));
    }
    Ok((ok, render_theorem(&report)))
}

fn render_theorem(r: &TheoremReport) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "group {} (order {}), primes {:?}",
        r.group, r.group_order, r.primes
    )
    .unwrap();
    if let Some(secs) = &r.sections {
        for s in secs {
            writeln!(out, "  {}-section of z = {} (class {})", s.p, s.z, s.class).unwrap();
        }
    }
    writeln!(
        out,
        "route (i):  only the trivial character in every principal block: {} (surviving degrees {:?})",
        r.route_i.holds, r.route_i.intersection_degrees
    )
    .unwrap();
    let counts: Vec<String> = r
        .route_ii
        .counts_by_class
        .iter()
        .map(ToString::to_string)
        .collect();
    writeln!(
        out,
        "route (ii): factorization count independent of g: {}{} (per class: {})",
        r.route_ii.constant,
        r.route_ii
            .value
            .as_ref()
            .map(|v| format!(", N = {v}"))
            .unwrap_or_default(),
        counts.join(", ")
    )
    .unwrap();
    let methods: Vec<String> = r
        .route_ii
        .methods_used
        .iter()
        .map(|m| format!("{m:?}").to_lowercase())
        .collect();
    writeln!(out, "counting methods in agreement: {}", methods.join(", ")).unwrap();
    writeln!(out, "equivalent: {}", r.equivalent).unwrap();
    for f in &r.remark_1_2.frobenius {
        writeln!(
            out,
            "frobenius p = {}: |G_p'| = {} divisible by {}: {}",
            f.p, f.regular_count, f.p_complement_part, f.divisible
        )
        .unwrap();
    }
    if let Some(b) = &r.remark_1_2.bound {
        writeln!(
            out,
            "multiplicity bound |G|^(n-2)·|G|_π' = {b}; N / bound = {}",
            r.remark_1_2
                .multiple
                .as_ref()
                .map(ToString::to_string)
                .unwrap_or_else(|| "-".into())
        )
        .unwrap();
    }
    writeln!(
        out,
        "all checks: {}",
        if r.all_checks_pass() { "pass" } else { "FAIL" }
    )
    .unwrap();
    out
}

fn frobenius(args: &CommonArgs) -> Result<(bool, String)> {
    let spec = parse_group_spec(&args.group)?;
    let limits = Limits {
        max_order: args.max_order,
        ..Limits::default()
    };
    let g = FiniteGroup::enumerate_with(&spec, limits)?;
    let cd = crate::classes::ClassData::compute(&g);
    let checks = frobenius_checks(&cd);
    let ok = checks.iter().all(|c| c.divisible);
    if args.json {
        return Ok((
            ok,
            to_json(&json!({ "group": args.group, "order": g.order(), "checks": checks })),
        ));
    }
    let mut out = String::new();
    for c in &checks {
        writeln!(
            out,
            "p = {}: |G_p'| = {}, |G|_p' = {}, divisible: {}",
            c.p, c.regular_count, c.p_complement_part, c.divisible
        )
        .unwrap();
    }
    Ok((ok, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &str) -> Outcome {
        run_args(std::iter::once("pblocks").chain(args.split_whitespace()))
    }

    #[test]
    fn group_spec_parsing() {
        assert!(matches!(
            parse_group_spec("builtin:alternating:5"),
            Ok(GroupSpec::Builtin(_))
        ));
        assert!(matches!(
            parse_group_spec("builtin:symmetric:9"),
            Err(Error::UnknownBuiltin(_))
        ));
        assert!(matches!(
            parse_group_spec("/nonexistent/group.json"),
            Err(Error::Io(_))
        ));
        let dir = std::env::temp_dir().join(format!("pblocks-spec-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("s3.json");
        std::fs::write(
            &path,
            r#"{"type":"permutation","degree":3,"generators":[[2,1,3],[2,3,1]]}"#,
        )
        .unwrap();
        let spec = parse_group_spec(path.to_str().unwrap()).unwrap();
        assert_eq!(FiniteGroup::enumerate(&spec).unwrap().order(), 6);
        std::fs::write(&path, "{not json").unwrap();
        assert!(matches!(
            parse_group_spec(path.to_str().unwrap()),
            Err(Error::MalformedSpec(_))
        ));
    }

    #[test]
    fn element_parsing() {
        let a = Analysis::builtin("builtin:symmetric:4").unwrap();
        let dbl = parse_element(&a, "(1 2)(3 4)").unwrap();
        assert_eq!(parse_element(&a, "[2,1,4,3]").unwrap(), dbl);
        assert_eq!(parse_element(&a, "2,1,4,3").unwrap(), dbl);
        assert_eq!(
            parse_element(&a, "class:1:rep").unwrap(),
            a.classes.class(1).representative
        );
        assert_eq!(parse_element(&a, "elem:0").unwrap(), 0);
        assert!(parse_element(&a, "class:9:rep").is_err());
        assert!(parse_element(&a, "[1,1,2,3]").is_err());
    }

    #[test]
    fn exit_codes() {
        let out = run_str("verify builtin:alternating:5 -p 2,3,5 --json");
        assert_eq!(out.code, 0, "{}", out.stderr);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["equivalent"], true);
        assert_eq!(v["route_ii"]["value"], "1080");

        let out = run_str("verify builtin:symmetric:3 -p 2,2");
        assert_eq!(out.code, 2);
        assert!(
            out.stderr.contains("primes must be distinct"),
            "{}",
            out.stderr
        );

        assert_eq!(run_str("verify builtin:symmetric:3 -p 5").code, 2);
        assert_eq!(run_str("bogus builtin:symmetric:3").code, 2);
        assert_eq!(
            run_str("verify21 builtin:symmetric:4 -p 2 -z (1,2,3,4)").code,
            2
        );
    }

    #[test]
    fn blocks_text_marks_degree_two_out() {
        let out = run_str("blocks builtin:symmetric:3 -p 2");
        assert_eq!(out.code, 0);
        assert!(out.stdout.contains("χ2 (degree 2): out"), "{}", out.stdout);
        assert!(out.stdout.contains("χ1 (degree 1): in"));
    }
}
