//! Factorization counts `N(g) = #{(x_1, …, x_n) : x_i ∈ S_i, x_1⋯x_n = g}` and the
//! two-route equivalence checks built on them.
//!
//! Counts come from three independent routes: exhaustive enumeration, iterated
//! multiplication in the class algebra, and the expansion over primitive central
//! idempotents `N(g) = |G|⁻¹ Σ_χ χ(1) χ(g⁻¹) Π_i ω_χ(S_i⁺)`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::analysis::Analysis;
use crate::arith::{pi_complement_part, prime_divisors};
use crate::blocks::{omega_numerator, principal_intersection};
use crate::chartable::CharacterTable;
use crate::classes::{
    p_regular_set, p_section, validate_primes, ClassData, ElementSubset, SectionSpec,
};
use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::structure::StructureConstants;

pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Bruteforce,
    Classalgebra,
    Character,
}

/// Per-element counts by enumerating every tuple.
pub fn counts_bruteforce(g: &FiniteGroup, sets: &[ElementSubset], budget: u64) -> Result<Vec<u64>> {
    let needed: u128 = sets.iter().map(|s| s.len() as u128).product();
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let lists: Vec<Vec<usize>> = sets.iter().map(ElementSubset::elements).collect();
    let mut counts = vec![0u64; g.order()];
    fn walk(g: &FiniteGroup, lists: &[Vec<usize>], prefix: usize, counts: &mut [u64]) {
        match lists {
            [] => counts[prefix] += 1,
            [last] => {
                for &x in last {
                    counts[g.mul(prefix, x)] += 1;
                }
            }
            [first, rest @ ..] => {
                for &x in first {
                    walk(g, rest, g.mul(prefix, x), counts);
                }
            }
        }
    }
    walk(g, &lists, 0, &mut counts);
    Ok(counts)
}

/// Brute-force counts collapsed to classes, checking that they form a class function.
pub fn bruteforce_class_counts(
    g: &FiniteGroup,
    cd: &ClassData,
    sets: &[ElementSubset],
    budget: u64,
) -> Result<Vec<BigUint>> {
    let counts = counts_bruteforce(g, sets, budget)?;
    cd.classes()
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let v = counts[c.representative];
            if c.members.iter().any(|&m| counts[m] != v) {
                return Err(Error::MethodMismatch(format!(
                    "brute-force counts not constant on class {j}"
                )));
            }
            Ok(BigUint::from(v))
        })
        .collect()
}

/// Coefficients of `S_1⁺ S_2⁺ ⋯ S_n⁺` in the class-sum basis.
pub fn counts_classalgebra(sc: &StructureConstants, sets: &[Vec<bool>]) -> Vec<BigUint> {
    let k = sc.num_classes();
    let mut acc: Vec<BigUint> = match sets.first() {
        Some(first) => first.iter().map(|&b| BigUint::from(b as u8)).collect(),
        None => (0..k).map(|j| BigUint::from((j == 0) as u8)).collect(),
    };
    for set in sets.iter().skip(1) {
        let mut next = vec![BigUint::zero(); k];
        for (j, vj) in acc.iter().enumerate() {
            if vj.is_zero() {
                continue;
            }
            for (i, &inside) in set.iter().enumerate() {
                if !inside {
                    continue;
                }
                for (kk, slot) in next.iter_mut().enumerate() {
                    let a = sc.get(i, j, kk);
                    if a != 0 {
                        *slot += vj * a;
                    }
                }
            }
        }
        acc = next;
    }
    acc
}

/// Counts through the primitive central idempotents; every value must be a non-negative integer.
pub fn counts_character(ct: &CharacterTable, sets: &[ElementSubset]) -> Result<Vec<BigUint>> {
    let e = ct.exponent();
    let k = ct.num_classes();
    let n = BigInt::from(ct.group_order());
    let mut sums = vec![CycInt::zero(e); k];
    for chi in 0..ct.len() {
        let degree = BigInt::from(ct.character(chi).degree);
        let mut product = CycInt::from_int(e, degree.clone());
        for set in sets {
            let omega = omega_numerator(ct, chi, set)?.exact_div_by_integer(&degree)?;
            product = &product * &omega;
            if product.is_zero() {
                break;
            }
        }
        if product.is_zero() {
            continue;
        }
        for (j, slot) in sums.iter_mut().enumerate() {
            let inv_value = ct.value(chi, ct.inverse_class(j));
            *slot = &*slot + &(&product * inv_value);
        }
    }
    sums.into_iter()
        .enumerate()
        .map(|(j, s)| {
            let total = s.as_rational_integer().ok_or(Error::NonIntegralCount(j))?;
            let (q, r) = total.div_rem(&n);
            if !r.is_zero() || q.is_negative() {
                return Err(Error::NonIntegralCount(j));
            }
            Ok(q.to_biguint().expect("non-negative"))
        })
        .collect()
}

/// Whether all per-class counts agree, with the common value.
pub fn condition_ii_constant(counts: &[BigUint]) -> (bool, Option<BigUint>) {
    match counts.split_first() {
        Some((first, rest)) if rest.iter().all(|c| c == first) => (true, Some(first.clone())),
        Some(_) => (false, None),
        None => (true, None),
    }
}

/// Provenance of one factor set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SetInfo {
    pub p: u64,
    /// Section representative, absent for `G_{p'}`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<String>,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConvolutionReport {
    pub sets: Vec<SetInfo>,
    pub constant: bool,
    #[serde(serialize_with = "ser_opt_big")]
    pub value: Option<BigUint>,
    #[serde(serialize_with = "ser_big_vec")]
    pub counts_by_class: Vec<BigUint>,
    pub mass_balance: bool,
    pub methods_used: Vec<Method>,
}

fn ser_opt_big<S: serde::Serializer>(
    v: &Option<BigUint>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(n) => s.serialize_some(&n.to_string()),
        None => s.serialize_none(),
    }
}

fn ser_big_vec<S: serde::Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|n| n.to_string()))
}

/// Counts over class-closed sets by the class algebra, cross-checked by the character
/// formula always and by enumeration when it fits the budget. Any disagreement is an error.
pub fn convolution_report(
    a: &Analysis,
    sets: &[ElementSubset],
    info: Vec<SetInfo>,
    budget: u64,
) -> Result<ConvolutionReport> {
    let k = a.classes.len();
    let vectors = sets
        .iter()
        .map(|s| s.class_vector(k))
        .collect::<Result<Vec<_>>>()?;
    let counts = counts_classalgebra(&a.constants, &vectors);
    let mut methods = vec![Method::Classalgebra];

    let by_character = counts_character(&a.table, sets)?;
    if by_character != counts {
        return Err(Error::MethodMismatch(format!(
            "class algebra {:?} vs character formula {:?}",
            counts, by_character
        )));
    }
    methods.push(Method::Character);

    match bruteforce_class_counts(&a.group, &a.classes, sets, budget) {
        Ok(brute) => {
            if brute != counts {
                return Err(Error::MethodMismatch(format!(
                    "class algebra {counts:?} vs enumeration {brute:?}"
                )));
            }
            methods.push(Method::Bruteforce);
        }
        Err(Error::BudgetExceeded { .. }) => {}
        Err(e) => return Err(e),
    }
    methods.sort();

    let total: BigUint = counts
        .iter()
        .zip(a.classes.sizes())
        .map(|(c, s)| c * s)
        .sum();
    let expected: BigUint = sets.iter().map(|s| BigUint::from(s.len())).product();
    let (constant, value) = condition_ii_constant(&counts);
    Ok(ConvolutionReport {
        sets: info,
        constant,
        value,
        counts_by_class: counts,
        mass_balance: total == expected,
        methods_used: methods,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrobeniusCheck {
    pub p: u64,
    pub regular_count: usize,
    pub p_complement_part: u64,
    pub divisible: bool,
}

/// `|G_{p'}|` is divisible by `|G|_{p'}` for each prime divisor `p` of `|G|`.
pub fn frobenius_checks(cd: &ClassData) -> Vec<FrobeniusCheck> {
    let n = cd.group_order() as u64;
    prime_divisors(n)
        .into_iter()
        .map(|p| {
            let regular_count = p_regular_set(cd, p).expect("prime").len();
            let part = pi_complement_part(n, &[p]);
            FrobeniusCheck {
                p,
                regular_count,
                p_complement_part: part,
                divisible: regular_count as u64 % part == 0,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RemarkReport {
    pub frobenius: Vec<FrobeniusCheck>,
    /// `N·|G| = Π|S_i|`, checked when the counts are constant.
    pub product_identity: Option<bool>,
    /// `|G|^{n-2}·|G|_{π'}`; skipped for `n = 1`.
    #[serde(serialize_with = "ser_opt_big")]
    pub bound: Option<BigUint>,
    /// `N / bound` when it is a positive integer.
    #[serde(serialize_with = "ser_opt_big")]
    pub multiple: Option<BigUint>,
    pub holds: bool,
}

/// Frobenius divisibility for every prime divisor, plus the multiplicity bound when
/// the counts are constant.
pub fn remark_1_2_and_frobenius(
    cd: &ClassData,
    primes: &[u64],
    route_ii: &ConvolutionReport,
) -> RemarkReport {
    let frobenius = frobenius_checks(cd);
    let order = cd.group_order() as u64;
    let n = primes.len();
    let mut holds = frobenius.iter().all(|f| f.divisible);
    let (mut product_identity, mut bound, mut multiple) = (None, None, None);
    if let Some(value) = &route_ii.value {
        let product: BigUint = route_ii
            .sets
            .iter()
            .map(|s| BigUint::from(s.size))
            .product();
        let ok = value * order == product;
        product_identity = Some(ok);
        holds &= ok;
        if n >= 2 {
            let b = BigUint::from(order).pow(n as u32 - 2) * pi_complement_part(order, primes);
            let (q, r) = value.div_rem(&b);
            if r.is_zero() && !q.is_zero() {
                multiple = Some(q);
            } else {
                holds = false;
            }
            bound = Some(b);
        }
    }
    RemarkReport {
        frobenius,
        product_identity,
        bound,
        multiple,
        holds,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RouteI {
    pub holds: bool,
    pub intersection_rows: Vec<usize>,
    pub intersection_degrees: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SectionInfo {
    pub p: u64,
    pub z: String,
    pub class: usize,
    pub central_valid: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub group: String,
    pub group_order: usize,
    pub primes: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sections: Option<Vec<SectionInfo>>,
    pub route_i: RouteI,
    pub route_ii: ConvolutionReport,
    pub equivalent: bool,
    pub remark_1_2: RemarkReport,
}

impl TheoremReport {
    /// Equivalence plus every consistency check that the theorems guarantee, including
    /// `N = Π|S_i| / |G|` whenever route (i) holds.
    pub fn all_checks_pass(&self) -> bool {
        let forced = !self.route_i.holds || {
            let sizes: Vec<usize> = self.route_ii.sets.iter().map(|s| s.size).collect();
            self.route_ii.value.is_some()
                && self.route_ii.value == idempotent_value(self.group_order, &sizes)
        };
        self.equivalent && self.route_ii.mass_balance && self.remark_1_2.holds && forced
    }

    /// The common count as `u64`, when constant and small enough.
    pub fn value_u64(&self) -> Option<u64> {
        self.route_ii.value.as_ref().and_then(|v| v.to_u64())
    }
}

/// `Π|S_i| / |G|`, when the division is exact.
pub fn idempotent_value(order: usize, sizes: &[usize]) -> Option<BigUint> {
    let product: BigUint = sizes.iter().map(|&s| BigUint::from(s)).product();
    let (q, r) = product.div_rem(&BigUint::from(order));
    r.is_zero().then_some(q)
}

fn route_i(ct: &CharacterTable, primes: &[u64]) -> Result<RouteI> {
    let rows = principal_intersection(ct, primes)?;
    Ok(RouteI {
        holds: rows == [0],
        intersection_degrees: rows.iter().map(|&i| ct.character(i).degree).collect(),
        intersection_rows: rows,
    })
}

/// Route (i): only the trivial row lies in every principal `p`-block; route (ii): the
/// counts over `(G_{p_1'}, …, G_{p_n'})` are constant.
pub fn verify_theorem_1_1(a: &Analysis, primes: &[u64], budget: u64) -> Result<TheoremReport> {
    validate_primes(a.order(), primes)?;
    let sets = primes
        .iter()
        .map(|&p| p_regular_set(&a.classes, p))
        .collect::<Result<Vec<_>>>()?;
    let info = primes
        .iter()
        .zip(&sets)
        .map(|(&p, s)| SetInfo {
            p,
            z: None,
            size: s.len(),
        })
        .collect();
    finish(a, primes, None, &sets, info, budget)
}

/// As [`verify_theorem_1_1`] with the `p_i`-section of `z_i` as the `i`-th factor set.
pub fn verify_theorem_2_1(
    a: &Analysis,
    primes: &[u64],
    zs: &[usize],
    budget: u64,
) -> Result<TheoremReport> {
    validate_primes(a.order(), primes)?;
    if zs.len() != primes.len() {
        return Err(Error::MalformedSpec(format!(
            "{} section elements given for {} primes",
            zs.len(),
            primes.len()
        )));
    }
    let mut sets = Vec::with_capacity(primes.len());
    let mut info = Vec::with_capacity(primes.len());
    let mut sections = Vec::with_capacity(primes.len());
    for (&p, &z) in primes.iter().zip(zs) {
        let spec = SectionSpec::new(&a.group, &a.classes, p, z)?;
        if !spec.central_valid {
            return Err(Error::NotCentralInSylow { element: z, p });
        }
        let set = p_section(&a.group, &a.classes, p, z)?;
        let label = a.group.element_label(z);
        info.push(SetInfo {
            p,
            z: Some(label.clone()),
            size: set.len(),
        });
        sections.push(SectionInfo {
            p,
            z: label,
            class: a.classes.class_of(z),
            central_valid: true,
        });
        sets.push(set);
    }
    finish(a, primes, Some(sections), &sets, info, budget)
}

fn finish(
    a: &Analysis,
    primes: &[u64],
    sections: Option<Vec<SectionInfo>>,
    sets: &[ElementSubset],
    info: Vec<SetInfo>,
    budget: u64,
) -> Result<TheoremReport> {
    let route_i = route_i(&a.table, primes)?;
    let route_ii = convolution_report(a, sets, info, budget)?;
    let remark = remark_1_2_and_frobenius(&a.classes, primes, &route_ii);
    Ok(TheoremReport {
        group: a.label.clone(),
        group_order: a.order(),
        primes: primes.to_vec(),
        sections,
        equivalent: route_i.holds == route_ii.constant,
        route_i,
        route_ii,
        remark_1_2: remark,
    })
}
