//! Conjugacy classes, power maps and the class-closed subsets built from them.

use std::collections::VecDeque;

use serde::Serialize;

use crate::arith::{self, inv_mod, is_prime, valuation};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugacyClass {
    pub representative: usize,
    pub members: Vec<usize>,
    pub element_order: u64,
    pub centralizer_order: u64,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

#[derive(Debug, Clone)]
pub struct ClassData {
    group_order: usize,
    classes: Vec<ConjugacyClass>,
    class_of: Vec<usize>,
    exponent: u64,
    /// `power[j * exponent + s]` = class of `rep_j^s`.
    power: Vec<usize>,
}

impl ClassData {
    /// Orbits under conjugation, sorted by (element order, size, minimal member).
    pub fn compute(g: &FiniteGroup) -> Self {
        let n = g.order();
        let conjugators: Vec<usize> = if g.generators().is_empty() && n > 1 {
            (1..n).collect()
        } else {
            g.generators().to_vec()
        };
        let mut seen = vec![false; n];
        let mut raw: Vec<Vec<usize>> = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut orbit = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for &c in &conjugators {
                    let y = g.conjugate(x, c);
                    if !seen[y] {
                        seen[y] = true;
                        orbit.push(y);
                        queue.push_back(y);
                    }
                }
            }
            orbit.sort_unstable();
            raw.push(orbit);
        }
        let mut classes: Vec<ConjugacyClass> = raw
            .into_iter()
            .map(|members| {
                let rep = members[0];
                ConjugacyClass {
                    representative: rep,
                    element_order: g.element_order(rep),
                    centralizer_order: (n / members.len()) as u64,
                    members,
                }
            })
            .collect();
        classes.sort_by_key(|c| (c.element_order, c.size(), c.representative));

        let mut class_of = vec![0; n];
        for (j, c) in classes.iter().enumerate() {
            for &m in &c.members {
                class_of[m] = j;
            }
        }
        let exponent = classes
            .iter()
            .fold(1, |acc, c| arith::lcm(acc, c.element_order));
        let e = exponent as usize;
        let mut power = vec![0; classes.len() * e];
        for (j, c) in classes.iter().enumerate() {
            let mut x = 0;
            for s in 0..e {
                power[j * e + s] = class_of[x];
                x = g.mul(x, c.representative);
            }
        }
        ClassData {
            group_order: n,
            classes,
            class_of,
            exponent,
            power,
        }
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn class(&self, j: usize) -> &ConjugacyClass {
        &self.classes[j]
    }

    pub fn class_of(&self, element: usize) -> usize {
        self.class_of[element]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.size()).collect()
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Class of `rep_j^s`; `s` is reduced modulo the exponent.
    pub fn power_class(&self, j: usize, s: u64) -> usize {
        let e = self.exponent;
        self.power[j * e as usize + (s % e) as usize]
    }

    /// Class containing the inverses of class `j`.
    pub fn inverse_class(&self, j: usize) -> usize {
        self.power_class(j, self.exponent - 1)
    }
}

/// Validates a list of user-supplied primes: prime, dividing `|G|`, pairwise distinct.
pub fn validate_primes(order: usize, primes: &[u64]) -> Result<()> {
    if primes.is_empty() {
        return Err(Error::NoPrimes);
    }
    for (i, &p) in primes.iter().enumerate() {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if primes[..i].contains(&p) {
            return Err(Error::DuplicatePrime(p));
        }
        if order as u64 % p != 0 {
            return Err(Error::PrimeNotDivisor { p, order });
        }
    }
    Ok(())
}

/// Splits `g` into its commuting `p`-part and `p'`-part, returned in that order.
pub fn p_decompose(g: &FiniteGroup, x: usize, p: u64) -> Result<(usize, usize)> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let (a, b) = p_exponents(g.element_order(x), p);
    Ok((g.pow(x, a), g.pow(x, b)))
}

/// CRT exponents `(a, b)` for an element of order `ord`: `g^a` is the `p`-part, `g^b` the `p'`-part.
fn p_exponents(ord: u64, p: u64) -> (u64, u64) {
    let pk = p.pow(valuation(ord, p));
    let m = ord / pk;
    // a ≡ 1 (mod p^k), a ≡ 0 (mod m)
    let a = if pk == 1 {
        0
    } else {
        (m * inv_mod(m % pk, pk).expect("coprime")) % ord
    };
    let b = (ord + 1 - a) % ord;
    (a, b)
}

/// A subset of the group; `classes` is present when it is a union of conjugacy classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementSubset {
    members: Vec<bool>,
    classes: Option<Vec<usize>>,
    size: usize,
}

impl ElementSubset {
    pub fn from_classes(cd: &ClassData, mut classes: Vec<usize>) -> Self {
        classes.sort_unstable();
        classes.dedup();
        let mut members = vec![false; cd.group_order()];
        for &j in &classes {
            for &m in &cd.class(j).members {
                members[m] = true;
            }
        }
        let size = members.iter().filter(|&&b| b).count();
        ElementSubset {
            members,
            classes: Some(classes),
            size,
        }
    }

    /// Arbitrary subset; it is recognised as class-closed when it is one.
    pub fn from_elements(cd: &ClassData, elements: &[usize]) -> Self {
        let mut members = vec![false; cd.group_order()];
        for &x in elements {
            members[x] = true;
        }
        let closed = cd.classes().iter().all(|c| {
            c.members.iter().all(|&m| members[m]) || c.members.iter().all(|&m| !members[m])
        });
        let classes = closed.then(|| {
            (0..cd.len())
                .filter(|&j| members[cd.class(j).representative])
                .collect()
        });
        let size = members.iter().filter(|&&b| b).count();
        ElementSubset {
            members,
            classes,
            size,
        }
    }

    pub fn whole(cd: &ClassData) -> Self {
        Self::from_classes(cd, (0..cd.len()).collect())
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members[x]
    }

    pub fn is_class_closed(&self) -> bool {
        self.classes.is_some()
    }

    pub fn class_indices(&self) -> Option<&[usize]> {
        self.classes.as_deref()
    }

    pub fn elements(&self) -> Vec<usize> {
        self.members
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect()
    }

    /// Indicator vector in the class-sum basis.
    pub fn class_vector(&self, nclasses: usize) -> Result<Vec<bool>> {
        let classes = self.classes.as_ref().ok_or(Error::NotClassClosed)?;
        let mut v = vec![false; nclasses];
        for &j in classes {
            v[j] = true;
        }
        Ok(v)
    }
}

/// `G_{p'}`: elements of order coprime to `p`.
pub fn p_regular_set(cd: &ClassData, p: u64) -> Result<ElementSubset> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let classes = (0..cd.len())
        .filter(|&j| cd.class(j).element_order % p != 0)
        .collect();
    Ok(ElementSubset::from_classes(cd, classes))
}

fn is_power_of(mut n: u64, p: u64) -> bool {
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

fn check_p_element(g: &FiniteGroup, p: u64, z: usize) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if !is_power_of(g.element_order(z), p) {
        return Err(Error::NotPElement { element: z, p });
    }
    Ok(())
}

/// Class of the `p`-part of class `j`'s representative.
pub fn p_part_class(cd: &ClassData, j: usize, p: u64) -> usize {
    let (a, _) = p_exponents(cd.class(j).element_order, p);
    cd.power_class(j, a)
}

/// The `p`-section of `z`: elements whose `p`-part is conjugate to `z`.
pub fn p_section(g: &FiniteGroup, cd: &ClassData, p: u64, z: usize) -> Result<ElementSubset> {
    check_p_element(g, p, z)?;
    let target = cd.class_of(z);
    let classes = (0..cd.len())
        .filter(|&j| p_part_class(cd, j, p) == target)
        .collect();
    Ok(ElementSubset::from_classes(cd, classes))
}

/// Whether `z` lies in the centre of some Sylow `p`-subgroup, i.e. `|C_G(z)|_p = |G|_p`.
pub fn central_in_some_sylow(g: &FiniteGroup, cd: &ClassData, p: u64, z: usize) -> Result<bool> {
    check_p_element(g, p, z)?;
    let c = cd.class(cd.class_of(z)).centralizer_order;
    Ok(valuation(c, p) == valuation(g.order() as u64, p))
}

/// A section choice `(p, z)` with its centrality flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SectionSpec {
    pub p: u64,
    pub z: usize,
    pub central_valid: bool,
}

impl SectionSpec {
    pub fn new(g: &FiniteGroup, cd: &ClassData, p: u64, z: usize) -> Result<Self> {
        let central_valid = central_in_some_sylow(g, cd, p, z)?;
        Ok(SectionSpec {
            p,
            z,
            central_valid,
        })
    }
}

/// Classes whose representatives are `p`-elements, in class order.
pub fn p_element_classes(cd: &ClassData, p: u64) -> Vec<usize> {
    (0..cd.len())
        .filter(|&j| is_power_of(cd.class(j).element_order, p))
        .collect()
}
