//! Exact complex character tables.
//!
//! Tables are computed with the Dixon–Schneider method: the class matrices are
//! simultaneously diagonalised over `F_q` with `q ≡ 1 (mod e)`, central characters
//! are read off the common eigenvectors, and the character values are lifted to
//! `Z[ζ_e]` through the eigenvalue multiplicities of each element.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, mult_order, pow_mod};
use crate::classes::ClassData;
use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::modp::{charpoly, nullspace, roots, rref, Field};
use crate::structure::StructureConstants;

/// Upper bound for the modulus search in [`choose_modulus`].
pub const MODULUS_SEARCH_CAP: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Character {
    pub degree: u64,
    pub values: Vec<CycInt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterTable {
    group_hash: String,
    group_order: usize,
    exponent: u32,
    class_sizes: Vec<usize>,
    rep_orders: Vec<u64>,
    inverse_class: Vec<usize>,
    /// `(q, λ)` used by the modular computation, if any.
    modulus: Option<(u64, u64)>,
    characters: Vec<Character>,
}

impl CharacterTable {
    pub fn characters(&self) -> &[Character] {
        &self.characters
    }

    pub fn character(&self, i: usize) -> &Character {
        &self.characters[i]
    }

    pub fn len(&self) -> usize {
        self.characters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characters.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.class_sizes.len()
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn class_sizes(&self) -> &[usize] {
        &self.class_sizes
    }

    pub fn rep_orders(&self) -> &[u64] {
        &self.rep_orders
    }

    pub fn inverse_class(&self, j: usize) -> usize {
        self.inverse_class[j]
    }

    pub fn modulus(&self) -> Option<(u64, u64)> {
        self.modulus
    }

    pub fn group_hash(&self) -> &str {
        &self.group_hash
    }

    pub fn value(&self, chi: usize, class: usize) -> &CycInt {
        &self.characters[chi].values[class]
    }

    /// `ω_χ(K_j⁺) = |K_j| χ(g_j) / χ(1)`.
    pub fn central_character(&self, chi: usize, class: usize) -> Result<CycInt> {
        let c = &self.characters[chi];
        self.value(chi, class)
            .scale(&BigInt::from(self.class_sizes[class]))
            .exact_div_by_integer(&BigInt::from(c.degree))
    }

    fn skeleton(
        g: &FiniteGroup,
        cd: &ClassData,
        modulus: Option<(u64, u64)>,
        characters: Vec<Character>,
    ) -> Self {
        CharacterTable {
            group_hash: g.cayley_hash(),
            group_order: g.order(),
            exponent: cd.exponent() as u32,
            class_sizes: cd.sizes(),
            rep_orders: cd.classes().iter().map(|c| c.element_order).collect(),
            inverse_class: (0..cd.len()).map(|j| cd.inverse_class(j)).collect(),
            modulus,
            characters,
        }
    }

    fn sort_rows(&mut self) {
        let e = self.exponent;
        let trivial: Vec<CycInt> = vec![CycInt::one(e); self.num_classes()];
        self.characters.sort_by(|a, b| {
            let ta = a.values == trivial;
            let tb = b.values == trivial;
            tb.cmp(&ta)
                .then(a.degree.cmp(&b.degree))
                .then_with(|| a.values.cmp(&b.values))
        });
    }
}

/// Smallest prime `q ≡ 1 (mod e)` with `q > 2⌊√|G|⌋`, and the least `λ` of order `e` mod `q`.
pub fn choose_modulus(e: u64, order: usize) -> Result<(u64, u64)> {
    choose_modulus_capped(e, order, MODULUS_SEARCH_CAP)
}

pub fn choose_modulus_capped(e: u64, order: usize, cap: u64) -> Result<(u64, u64)> {
    assert!(e >= 1);
    let bound = 2 * (order as f64).sqrt().floor() as u64;
    // guard against floating error in the square root
    let bound = {
        let mut r = bound / 2;
        while (r + 1) * (r + 1) <= order as u64 {
            r += 1;
        }
        while r * r > order as u64 {
            r -= 1;
        }
        2 * r
    };
    let mut q = e + 1;
    while q <= bound || !is_prime(q) {
        q += e;
        if q > cap {
            return Err(Error::ModulusSearchExhausted(cap));
        }
    }
    let lambda = (1..q)
        .find(|&x| mult_order(x, q) == e)
        .expect("F_q^* is cyclic of order divisible by e");
    Ok((q, lambda))
}

/// Common eigenvectors of all class matrices, normalised so the identity coordinate is 1.
fn central_characters_mod_q(f: Field, sc: &StructureConstants) -> Result<Vec<Vec<u64>>> {
    let k = sc.num_classes();
    let identity: Vec<Vec<u64>> = (0..k)
        .map(|i| (0..k).map(|j| (i == j) as u64).collect())
        .collect();
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![identity];
    for i in 1..k {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mut refined = Vec::with_capacity(spaces.len());
        for space in spaces {
            if space.len() == 1 {
                refined.push(space);
                continue;
            }
            refined.extend(split_space(f, sc, i, space)?);
        }
        spaces = refined;
    }
    if spaces.iter().any(|s| s.len() != 1) {
        return Err(Error::TableInconsistent(
            "class matrices do not separate the common eigenspaces mod q".into(),
        ));
    }
    spaces
        .into_iter()
        .map(|mut s| {
            let mut v = s.pop().unwrap();
            if v[0] == 0 {
                return Err(Error::TableInconsistent(
                    "eigenvector vanishes on the identity class".into(),
                ));
            }
            let inv = f.inv(v[0]);
            v.iter_mut().for_each(|x| *x = f.mul(*x, inv));
            Ok(v)
        })
        .collect()
}

/// Splits an invariant subspace (RREF basis rows) into eigenspaces of class matrix `i`.
fn split_space(
    f: Field,
    sc: &StructureConstants,
    i: usize,
    mut basis: Vec<Vec<u64>>,
) -> Result<Vec<Vec<Vec<u64>>>> {
    let k = sc.num_classes();
    let pivots = rref(f, &mut basis);
    let d = basis.len();
    let apply = |v: &[u64]| -> Vec<u64> {
        (0..k)
            .map(|j| {
                (0..k).fold(0, |acc, kk| {
                    let a = sc.get(i, j, kk) % f.q;
                    if a == 0 || v[kk] == 0 {
                        acc
                    } else {
                        f.add(acc, f.mul(a, v[kk]))
                    }
                })
            })
            .collect()
    };
    // restricted[m][l] = coordinate m of M_i b_l, read at the pivot columns
    let images: Vec<Vec<u64>> = basis.iter().map(|b| apply(b)).collect();
    let restricted: Vec<Vec<u64>> = (0..d)
        .map(|m| (0..d).map(|l| images[l][pivots[m]]).collect())
        .collect();
    let mut parts = Vec::new();
    let mut total = 0;
    for c in roots(f, &charpoly(f, &restricted)) {
        let shifted: Vec<Vec<u64>> = restricted
            .iter()
            .enumerate()
            .map(|(r, row)| {
                row.iter()
                    .enumerate()
                    .map(|(col, &x)| if r == col { f.sub(x, c) } else { x })
                    .collect()
            })
            .collect();
        let mut vectors: Vec<Vec<u64>> = nullspace(f, &shifted)
            .into_iter()
            .map(|coef| {
                (0..k)
                    .map(|col| {
                        coef.iter()
                            .zip(&basis)
                            .fold(0, |acc, (&a, b)| f.add(acc, f.mul(a, b[col])))
                    })
                    .collect()
            })
            .collect();
        rref(f, &mut vectors);
        total += vectors.len();
        parts.push(vectors);
    }
    if total != d {
        return Err(Error::TableInconsistent(format!(
            "class matrix {i} is not diagonalisable on a common eigenspace mod {}",
            f.q
        )));
    }
    Ok(parts)
}

/// Computes the character table with the Dixon–Schneider method and verifies it.
pub fn dixon_schneider(
    g: &FiniteGroup,
    cd: &ClassData,
    sc: &StructureConstants,
) -> Result<CharacterTable> {
    let e = cd.exponent();
    let n = g.order() as u64;
    let k = cd.len();
    let (q, lambda) = choose_modulus(e, g.order())?;
    let f = Field { q };
    let sizes = cd.sizes();
    let size_inv: Vec<u64> = sizes.iter().map(|&s| f.inv(s as u64 % q)).collect();
    let inverse_class: Vec<usize> = (0..k).map(|j| cd.inverse_class(j)).collect();
    let lambda_pows: Vec<u64> = (0..e).map(|s| pow_mod(lambda, s, q)).collect();

    let mut characters = Vec::with_capacity(k);
    for w in central_characters_mod_q(f, sc)? {
        // d^2 Σ_j ω_j ω_{j*} / |K_j| = |G|
        let norm = (0..k).fold(0, |acc, j| {
            f.add(acc, f.mul(f.mul(w[j], w[inverse_class[j]]), size_inv[j]))
        });
        if norm == 0 {
            return Err(Error::TableInconsistent(
                "degenerate central character norm".into(),
            ));
        }
        let target = f.mul(n % q, f.inv(norm));
        let degree = (1..)
            .take_while(|d: &u64| d * d <= n)
            .find(|&d| f.mul(d, d) == target && n % d == 0)
            .ok_or_else(|| {
                Error::TableInconsistent("no degree consistent with the central character".into())
            })?;
        let chi_mod: Vec<u64> = (0..k)
            .map(|j| f.mul(f.mul(degree % q, w[j]), size_inv[j]))
            .collect();
        let mut values = Vec::with_capacity(k);
        for j in 0..k {
            // multiplicity of ζ_o^s as an eigenvalue, o the element order: (1/o) Σ_t χ(g^t) λ_o^{-st}
            let o = cd.class(j).element_order;
            let step = e / o;
            let o_inv = f.inv(o % q);
            let mut raw = vec![BigInt::zero(); e as usize];
            let mut total = 0u64;
            for s in 0..o {
                let sum = (0..o).fold(0, |acc, t| {
                    let chi = chi_mod[cd.power_class(j, t)];
                    let exp = ((o - (s * t) % o) % o * step) as usize;
                    f.add(acc, f.mul(chi, lambda_pows[exp]))
                });
                let m = f.mul(sum, o_inv);
                if m > degree {
                    return Err(Error::TableInconsistent(format!(
                        "eigenvalue multiplicity {m} exceeds degree {degree}"
                    )));
                }
                total += m;
                raw[(s * step) as usize] = BigInt::from(m);
            }
            if total != degree {
                return Err(Error::TableInconsistent(
                    "eigenvalue multiplicities do not sum to the degree".into(),
                ));
            }
            values.push(CycInt::canonical_reduce(e as u32, &raw));
        }
        characters.push(Character { degree, values });
    }
    let mut table = CharacterTable::skeleton(g, cd, Some((q, lambda)), characters);
    table.sort_rows();
    let report = verify_table(&table, sc);
    match report.violation {
        None => Ok(table),
        Some(v) => Err(Error::TableInconsistent(v.to_string())),
    }
}

/// Character table of an abelian group built directly as homomorphisms into `μ_e`.
///
/// Independent of the modular machinery; returns `None` for non-abelian groups.
pub fn abelian_table(g: &FiniteGroup, cd: &ClassData) -> Option<CharacterTable> {
    if !g.is_abelian() {
        return None;
    }
    let n = g.order();
    let e = cd.exponent();
    let gens = g.generators().to_vec();
    let choices: Vec<u64> = gens.iter().map(|&x| g.element_order(x)).collect();
    let mut characters = Vec::new();
    let mut assignment = vec![0u64; gens.len()];
    loop {
        // exponent of ζ_e for generator i is assignment[i] * e / ord(g_i)
        let gen_exp: Vec<u64> = assignment
            .iter()
            .zip(&choices)
            .map(|(&t, &o)| t * (e / o))
            .collect();
        let mut exps: Vec<Option<u64>> = vec![None; n];
        exps[0] = Some(0);
        let mut queue = std::collections::VecDeque::from([0usize]);
        let mut consistent = true;
        'bfs: while let Some(x) = queue.pop_front() {
            let ex = exps[x].unwrap();
            for (i, &gi) in gens.iter().enumerate() {
                let y = g.mul(x, gi);
                let ey = (ex + gen_exp[i]) % e;
                match exps[y] {
                    None => {
                        exps[y] = Some(ey);
                        queue.push_back(y);
                    }
                    Some(old) if old != ey => {
                        consistent = false;
                        break 'bfs;
                    }
                    Some(_) => {}
                }
            }
        }
        if consistent {
            let values = (0..cd.len())
                .map(|j| {
                    CycInt::zeta_pow(e as u32, exps[cd.class(j).representative].unwrap() as i64)
                })
                .collect();
            characters.push(Character { degree: 1, values });
        }
        // next assignment (odometer)
        let mut pos = 0;
        loop {
            if pos == assignment.len() {
                let mut table = CharacterTable::skeleton(g, cd, None, characters);
                table.sort_rows();
                return Some(table);
            }
            assignment[pos] += 1;
            if assignment[pos] < choices[pos] {
                break;
            }
            assignment[pos] = 0;
            pos += 1;
        }
    }
}

/// First failed check of [`verify_table`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum Violation {
    Shape { detail: String },
    TrivialRow,
    IdentityColumn { chi: usize },
    DegreeDivides { chi: usize },
    DegreeSum { sum: String },
    FirstOrthogonality { chi: usize, psi: usize },
    SecondOrthogonality { i: usize, j: usize },
    CentralCharacterIntegrality { chi: usize, class: usize },
    CentralMultiplicativity { chi: usize, i: usize, j: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Shape { detail } => write!(f, "table shape: {detail}"),
            Violation::TrivialRow => write!(f, "row 0 is not the trivial character"),
            Violation::IdentityColumn { chi } => {
                write!(f, "row {chi}: value at the identity is not the degree")
            }
            Violation::DegreeDivides { chi } => write!(f, "row {chi}: degree does not divide |G|"),
            Violation::DegreeSum { sum } => write!(f, "sum of squared degrees is {sum}, not |G|"),
            Violation::FirstOrthogonality { chi, psi } => {
                write!(f, "first orthogonality fails for rows ({chi}, {psi})")
            }
            Violation::SecondOrthogonality { i, j } => {
                write!(f, "second orthogonality fails for classes ({i}, {j})")
            }
            Violation::CentralCharacterIntegrality { chi, class } => {
                write!(
                    f,
                    "row {chi}: central character at class {class} is not an algebraic integer"
                )
            }
            Violation::CentralMultiplicativity { chi, i, j } => {
                write!(
                    f,
                    "row {chi}: central character not multiplicative on classes ({i}, {j})"
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub passed: bool,
    pub violation: Option<Violation>,
}

/// Exact checks: shape, orthogonality (both), degree sum and divisibility, and
/// multiplicativity of central characters against the structure constants.
pub fn verify_table(ct: &CharacterTable, sc: &StructureConstants) -> TableReport {
    let violation = find_violation(ct, sc);
    TableReport {
        passed: violation.is_none(),
        violation,
    }
}

fn find_violation(ct: &CharacterTable, sc: &StructureConstants) -> Option<Violation> {
    let k = ct.num_classes();
    let e = ct.exponent;
    let n = BigInt::from(ct.group_order);
    if ct.len() != k || sc.num_classes() != k {
        return Some(Violation::Shape {
            detail: format!("{} rows for {k} classes", ct.len()),
        });
    }
    if let Some(chi) = ct.characters.iter().position(|c| {
        c.values.len() != k || c.values.iter().any(|v| v.modulus() != e) || c.degree == 0
    }) {
        return Some(Violation::Shape {
            detail: format!("row {chi} has the wrong length, modulus or a zero degree"),
        });
    }
    if ct.characters[0].values.iter().any(|v| *v != CycInt::one(e)) {
        return Some(Violation::TrivialRow);
    }
    for (chi, c) in ct.characters.iter().enumerate() {
        if c.values[0] != CycInt::from_int(e, c.degree) {
            return Some(Violation::IdentityColumn { chi });
        }
        if ct.group_order as u64 % c.degree != 0 {
            return Some(Violation::DegreeDivides { chi });
        }
    }
    let sum: BigInt = ct
        .characters
        .iter()
        .map(|c| BigInt::from(c.degree).pow(2))
        .sum();
    if sum != n {
        return Some(Violation::DegreeSum {
            sum: sum.to_string(),
        });
    }
    if let Some(v) = orthogonality_violation(ct) {
        return Some(v);
    }
    let mut omega = Vec::with_capacity(k);
    for chi in 0..k {
        let mut row = Vec::with_capacity(k);
        for class in 0..k {
            match ct.central_character(chi, class) {
                Ok(w) => row.push(w),
                Err(_) => return Some(Violation::CentralCharacterIntegrality { chi, class }),
            }
        }
        omega.push(row);
    }
    multiplicativity_violation(ct, &omega, sc)
}

fn l1(v: &CycInt) -> BigUint {
    v.coeffs().iter().map(|c| c.magnitude().clone()).sum()
}

/// Largest coordinate of a reduced power of `ζ_e`, at least 1.
fn power_bound(e: u64) -> BigUint {
    (0..e as i64)
        .flat_map(|s| CycInt::zeta_pow(e as u32, s).coeffs().to_vec())
        .map(|c| c.magnitude().clone())
        .max()
        .unwrap_or_default()
        .max(BigUint::from(1u32))
}

/// Runs `check` under the embeddings for successive primes `q ≡ 1 (mod e)` until their
/// product exceeds `bound`, a bound on every coordinate of the differences being tested.
fn exact_by_embeddings(
    e: u64,
    bound: &BigUint,
    mut check: impl FnMut(&Embeddings) -> Option<Violation>,
) -> Option<Violation> {
    let mut modulus = BigUint::from(1u32);
    let mut q = ((1u64 << 31) / e + 1) * e + 1;
    while &modulus <= bound {
        while !is_prime(q) {
            q += e;
        }
        if let Some(v) = check(&Embeddings::new(e, q)) {
            return Some(v);
        }
        modulus *= q;
        q += e;
    }
    None
}

/// `ω(K_i)ω(K_j) = Σ_k a_ijk ω(K_k)` for every row.
fn multiplicativity_violation(
    ct: &CharacterTable,
    omega: &[Vec<CycInt>],
    sc: &StructureConstants,
) -> Option<Violation> {
    let k = ct.num_classes();
    let e = ct.exponent as u64;
    let n = ct.group_order as u64;
    let w_max = omega.iter().flatten().map(l1).max().unwrap_or_default();
    // Σ_k a_ijk ≤ |K_i||K_j| ≤ n²
    let bound = &w_max * &w_max * power_bound(e) + &w_max * BigUint::from(n) * n;
    let nonzero: Vec<Vec<(usize, u64)>> = (0..k * k)
        .map(|ij| {
            let (i, j) = (ij / k, ij % k);
            (0..k)
                .filter_map(|c| {
                    let a = sc.get(i, j, c);
                    (a != 0).then_some((c, a))
                })
                .collect()
        })
        .collect();
    exact_by_embeddings(e, &bound, |emb| {
        let f = Field { q: emb.q };
        let reduced: Vec<Vec<Vec<u64>>> = omega
            .iter()
            .map(|row| row.iter().map(|v| emb.residues(v)).collect())
            .collect();
        for u in 0..emb.units.len() {
            for (chi, row) in reduced.iter().enumerate() {
                let w: Vec<u64> = row.iter().map(|v| emb.eval(v, u)).collect();
                for i in 0..k {
                    for j in i..k {
                        let rhs = nonzero[i * k + j]
                            .iter()
                            .fold(0, |acc, &(c, a)| f.add(acc, f.mul(a % emb.q, w[c])));
                        if f.mul(w[i], w[j]) != rhs {
                            return Some(Violation::CentralMultiplicativity { chi, i, j });
                        }
                    }
                }
            }
        }
        None
    })
}

/// Images of `Z[ζ_e]` under every `ζ ↦ ρ` with `ρ` a primitive `e`-th root of unity mod `q`.
///
/// For `q ≡ 1 (mod e)` these maps identify `Z[ζ_e]/q` with `F_q^{φ(e)}`, so an element
/// vanishing under all of them has every coordinate divisible by `q`. Enough primes to
/// exceed a coefficient bound therefore decide equality exactly.
struct Embeddings {
    q: u64,
    /// Exponents `t` coprime to `e`, with `position[e - t]` giving the conjugate embedding.
    units: Vec<u64>,
    position: Vec<usize>,
    /// `root_pows[u][i] = ρ^{t_u i}` for `i < φ(e)`.
    root_pows: Vec<Vec<u64>>,
}

impl Embeddings {
    fn new(e: u64, q: u64) -> Self {
        let f = Field { q };
        let root = (2..q)
            .map(|h| pow_mod(h, (q - 1) / e, q))
            .find(|&r| mult_order(r, q) == e)
            .expect("q ≡ 1 mod e has a primitive e-th root");
        let units: Vec<u64> = (1..=e)
            .filter(|&t| num_integer::gcd(t, e) == 1)
            .map(|t| t % e)
            .collect();
        let mut position = vec![usize::MAX; e as usize];
        for (u, &t) in units.iter().enumerate() {
            position[t as usize] = u;
        }
        let phi = units.len();
        let root_pows = units
            .iter()
            .map(|&t| {
                let rho = pow_mod(root, t, q);
                std::iter::successors(Some(1u64), |&x| Some(f.mul(x, rho)))
                    .take(phi)
                    .collect()
            })
            .collect();
        Embeddings {
            q,
            units,
            position,
            root_pows,
        }
    }

    fn conjugate(&self, u: usize) -> usize {
        let e = self.position.len() as u64;
        self.position[((e - self.units[u]) % e) as usize]
    }

    /// Coordinates reduced mod `q`, computed once per value and reused by every embedding.
    fn residues(&self, v: &CycInt) -> Vec<u64> {
        let q = BigInt::from(self.q);
        v.coeffs()
            .iter()
            .map(|c| c.mod_floor(&q).to_u64().expect("reduced mod q"))
            .collect()
    }

    fn eval(&self, residues: &[u64], u: usize) -> u64 {
        let sum = residues
            .iter()
            .zip(&self.root_pows[u])
            .fold(0u128, |acc, (&c, &r)| acc + c as u128 * r as u128);
        (sum % self.q as u128) as u64
    }
}

/// Both orthogonality relations, decided exactly through [`Embeddings`] modulo enough primes.
fn orthogonality_violation(ct: &CharacterTable) -> Option<Violation> {
    let k = ct.num_classes();
    let e = ct.exponent as u64;
    let n = ct.group_order as u64;
    // Coordinates of products are bounded by ‖a‖₁‖b‖₁·P where P bounds the reduced powers
    // of ζ; conjugation costs one more factor of P.
    let p = power_bound(e);
    let m_max = ct
        .characters
        .iter()
        .flat_map(|c| c.values.iter())
        .map(l1)
        .max()
        .unwrap_or_default();
    let bound = BigUint::from(n.max(k as u64)) * &m_max * &m_max * &p * &p + n;
    exact_by_embeddings(e, &bound, |emb| orthogonality_mod(ct, emb))
}

fn orthogonality_mod(ct: &CharacterTable, emb: &Embeddings) -> Option<Violation> {
    let k = ct.num_classes();
    let f = Field { q: emb.q };
    let n = ct.group_order as u64 % emb.q;
    let reduced: Vec<Vec<Vec<u64>>> = ct
        .characters
        .iter()
        .map(|ch| ch.values.iter().map(|v| emb.residues(v)).collect())
        .collect();
    for u in 0..emb.units.len() {
        let c = emb.conjugate(u);
        let ev = |x: usize| -> Vec<Vec<u64>> {
            reduced
                .iter()
                .map(|row| row.iter().map(|v| emb.eval(v, x)).collect())
                .collect()
        };
        let plain = ev(u);
        let barred = if c == u { plain.clone() } else { ev(c) };
        let dot = |a: &mut dyn Iterator<Item = (u64, u64)>| -> u64 {
            (a.fold(0u128, |acc, (x, y)| acc + x as u128 * y as u128) % emb.q as u128) as u64
        };
        let weighted: Vec<Vec<u64>> = plain
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&ct.class_sizes)
                    .map(|(&x, &s)| f.mul(x, s as u64 % emb.q))
                    .collect()
            })
            .collect();
        for chi in 0..k {
            for psi in chi..k {
                let got = dot(&mut weighted[chi]
                    .iter()
                    .copied()
                    .zip(barred[psi].iter().copied()));
                if got != if chi == psi { n } else { 0 } {
                    return Some(Violation::FirstOrthogonality { chi, psi });
                }
            }
        }
        for i in 0..k {
            for j in i..k {
                let got = dot(&mut (0..k).map(|chi| (plain[chi][i], barred[chi][j])));
                let want = if i == j {
                    (ct.group_order / ct.class_sizes[i]) as u64 % emb.q
                } else {
                    0
                };
                if got != want {
                    return Some(Violation::SecondOrthogonality { i, j });
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassJson {
    pub rep_order: u64,
    pub size: usize,
}

/// Interchange form of a character table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableJson {
    pub group_hash: String,
    pub e: u32,
    pub q: Option<u64>,
    pub classes: Vec<ClassJson>,
    pub characters: Vec<Character>,
}

impl CharacterTable {
    pub fn to_json(&self) -> TableJson {
        TableJson {
            group_hash: self.group_hash.clone(),
            e: self.exponent,
            q: self.modulus.map(|(q, _)| q),
            classes: self
                .class_sizes
                .iter()
                .zip(&self.rep_orders)
                .map(|(&size, &rep_order)| ClassJson { rep_order, size })
                .collect(),
            characters: self.characters.clone(),
        }
    }

    pub fn export_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("table serialises") + "\n"
    }

    /// Imports a table for `g`, checking it against the group and re-verifying it in full.
    pub fn import(
        g: &FiniteGroup,
        cd: &ClassData,
        sc: &StructureConstants,
        data: &TableJson,
    ) -> Result<Self> {
        let reject = |m: String| Err(Error::TableImport(m));
        if data.group_hash != g.cayley_hash() {
            return reject("group hash does not match this group's Cayley table".into());
        }
        if data.classes.len() != cd.len() {
            return reject(format!(
                "table has {} classes, group has {}",
                data.classes.len(),
                cd.len()
            ));
        }
        for (j, (c, cls)) in data.classes.iter().zip(cd.classes()).enumerate() {
            if c.size != cls.size() || c.rep_order != cls.element_order {
                return reject(format!("class {j} does not match (size/order)"));
            }
        }
        if data.e as u64 != cd.exponent() {
            return reject(format!(
                "exponent {} does not match group exponent {}",
                data.e,
                cd.exponent()
            ));
        }
        let modulus = match data.q {
            Some(q) => {
                let (q0, lambda) = choose_modulus(cd.exponent(), g.order())?;
                if q != q0 {
                    return reject(format!("modulus {q} is not the canonical choice {q0}"));
                }
                Some((q, lambda))
            }
            None => None,
        };
        let table = CharacterTable::skeleton(g, cd, modulus, data.characters.clone());
        let report = verify_table(&table, sc);
        match report.violation {
            None => Ok(table),
            Some(v) => reject(format!("verification failed: {v}")),
        }
    }

    pub fn import_str(
        g: &FiniteGroup,
        cd: &ClassData,
        sc: &StructureConstants,
        text: &str,
    ) -> Result<Self> {
        let data: TableJson =
            serde_json::from_str(text).map_err(|e| Error::TableImport(e.to_string()))?;
        Self::import(g, cd, sc, &data)
    }
}

/// Numeric approximation of a value for display.
pub fn approx(v: &CycInt) -> String {
    let (re, im) = v.to_complex();
    let clean = |x: f64| if x.abs() < 5e-10 { 0.0 } else { x };
    let (re, im) = (clean(re), clean(im));
    match im.partial_cmp(&0.0) {
        Some(Ordering::Equal) => format!("{re:.4}"),
        Some(Ordering::Less) => format!("{re:.4}-{:.4}i", -im),
        _ => format!("{re:.4}+{im:.4}i"),
    }
}

/// Degrees as plain integers, in row order.
pub fn degrees(ct: &CharacterTable) -> Vec<u64> {
    ct.characters.iter().map(|c| c.degree).collect()
}

/// Rational integer values of a row, if every value is rational.
pub fn rational_row(ct: &CharacterTable, chi: usize) -> Option<Vec<i64>> {
    ct.characters[chi]
        .values
        .iter()
        .map(|v| v.as_rational_integer().and_then(|n| n.to_i64()))
        .collect()
}
