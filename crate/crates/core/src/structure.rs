//! Class-algebra structure constants: `K_i⁺ K_j⁺ = Σ_k a[i][j][k] K_k⁺`.

use crate::classes::ClassData;
use crate::group::FiniteGroup;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureConstants {
    k: usize,
    data: Vec<u64>,
}

impl StructureConstants {
    /// For each `(i, k)` fixes `z = rep_k` and counts `x ∈ K_i` with `x⁻¹z ∈ K_j`.
    pub fn compute(g: &FiniteGroup, cd: &ClassData) -> Self {
        let k = cd.len();
        let mut data = vec![0u64; k * k * k];
        for (kk, target) in cd.classes().iter().enumerate() {
            let z = target.representative;
            for i in 0..k {
                for &x in &cd.class(i).members {
                    let j = cd.class_of(g.mul(g.inv(x), z));
                    data[(i * k + j) * k + kk] += 1;
                }
            }
        }
        StructureConstants { k, data }
    }

    pub fn num_classes(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> u64 {
        self.data[(i * self.k + j) * self.k + k]
    }

    /// The matrix of multiplication by `K_i⁺`: entry `(j, k)` is `a[i][j][k]`.
    pub fn class_matrix(&self, i: usize) -> Vec<Vec<u64>> {
        (0..self.k)
            .map(|j| (0..self.k).map(|k| self.get(i, j, k)).collect())
            .collect()
    }
}
