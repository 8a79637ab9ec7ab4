//! Principal-block membership via central characters.
//!
//! `χ` lies in the principal `p`-block iff `ω_χ` does not annihilate the `p`-regular
//! class sum `G_{p'}⁺`; for a `p`-element `z` central in a Sylow `p`-subgroup the same
//! holds with the section sum `S_z⁺`. Decisions use the integer-scaled sum
//! `χ(1)·ω_χ(S⁺) = Σ_{K ⊆ S} |K| χ(g_K)`, so no division is needed.

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::is_prime;
use crate::chartable::CharacterTable;
use crate::classes::{p_part_class, validate_primes, ClassData, ElementSubset, SectionSpec};
use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};

/// `Σ_{K ⊆ S} |K| χ(g_K)` over the given classes.
pub fn omega_numerator_classes(ct: &CharacterTable, chi: usize, classes: &[usize]) -> CycInt {
    classes.iter().fold(CycInt::zero(ct.exponent()), |acc, &j| {
        &acc + &ct.value(chi, j).scale(&BigInt::from(ct.class_sizes()[j]))
    })
}

/// `χ(1)·ω_χ(S⁺)` for a class-closed subset `S`.
pub fn omega_numerator(ct: &CharacterTable, chi: usize, set: &ElementSubset) -> Result<CycInt> {
    let classes = set.class_indices().ok_or(Error::NotClassClosed)?;
    Ok(omega_numerator_classes(ct, chi, classes))
}

fn p_regular_classes(ct: &CharacterTable, p: u64) -> Vec<usize> {
    (0..ct.num_classes())
        .filter(|&j| ct.rep_orders()[j] % p != 0)
        .collect()
}

fn check_divisor(ct: &CharacterTable, p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if ct.group_order() as u64 % p != 0 {
        return Err(Error::PrimeNotDivisor {
            p,
            order: ct.group_order(),
        });
    }
    Ok(())
}

/// Membership of row `chi` in the principal `p`-block, with the deciding sum.
pub fn in_principal_block(ct: &CharacterTable, p: u64, chi: usize) -> Result<(bool, CycInt)> {
    check_divisor(ct, p)?;
    let cert = omega_numerator_classes(ct, chi, &p_regular_classes(ct, p));
    Ok((!cert.is_zero(), cert))
}

/// Same test with the `p`-section of `spec.z` in place of `G_{p'}`; `z` must be Sylow-central.
pub fn section_membership_test(
    ct: &CharacterTable,
    cd: &ClassData,
    spec: &SectionSpec,
    chi: usize,
) -> Result<(bool, CycInt)> {
    check_divisor(ct, spec.p)?;
    if !spec.central_valid {
        return Err(Error::NotCentralInSylow {
            element: spec.z,
            p: spec.p,
        });
    }
    let target = cd.class_of(spec.z);
    let classes: Vec<usize> = (0..cd.len())
        .filter(|&j| p_part_class(cd, j, spec.p) == target)
        .collect();
    let cert = omega_numerator_classes(ct, chi, &classes);
    Ok((!cert.is_zero(), cert))
}

/// Rows lying in the principal block for every listed prime.
pub fn principal_intersection(ct: &CharacterTable, primes: &[u64]) -> Result<Vec<usize>> {
    validate_primes(ct.group_order(), primes)?;
    let mut rows = Vec::new();
    for chi in 0..ct.len() {
        let mut all = true;
        for &p in primes {
            if !in_principal_block(ct, p, chi)?.0 {
                all = false;
                break;
            }
        }
        if all {
            rows.push(chi);
        }
    }
    Ok(rows)
}

/// Decision certificate: a rational integer (as a decimal string) or a general cyclotomic value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Certificate {
    Integer(String),
    Cyclotomic(CycInt),
}

impl From<&CycInt> for Certificate {
    fn from(v: &CycInt) -> Self {
        match v.as_rational_integer() {
            Some(n) => Certificate::Integer(n.to_string()),
            None => Certificate::Cyclotomic(v.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowMembership {
    pub degree: u64,
    pub in_principal: bool,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockMembership {
    pub p: u64,
    pub rows: Vec<RowMembership>,
}

impl BlockMembership {
    pub fn compute(ct: &CharacterTable, p: u64) -> Result<Self> {
        let rows = (0..ct.len())
            .map(|chi| {
                let (inside, cert) = in_principal_block(ct, p, chi)?;
                Ok(RowMembership {
                    degree: ct.character(chi).degree,
                    in_principal: inside,
                    certificate: Certificate::from(&cert),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BlockMembership { p, rows })
    }

    pub fn principal_rows(&self) -> Vec<usize> {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.in_principal.then_some(i))
            .collect()
    }
}
