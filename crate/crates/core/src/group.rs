//! Fully enumerated finite groups.
//!
//! Every group is stored with its complete multiplication table, indexed so that
//! element 0 is the identity. Products are composed left to right: for permutations
//! `(x * y)(i) = y(x(i))`.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Hard ceiling on group order; table entries are stored as `u16`.
pub const MAX_ORDER_HARD: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_order: usize,
    pub max_degree: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_order: 10_000,
            max_degree: 4096,
        }
    }
}

/// A permutation of `{1..degree}`, stored 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u16>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u16).collect(),
        }
    }

    /// Builds a permutation from 1-based images, checking that it is a bijection.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n > u16::MAX as usize {
            return Err(Error::MalformedSpec(format!("degree {n} too large")));
        }
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for &img in images {
            if img == 0 || img > n || seen[img - 1] {
                return Err(Error::MalformedSpec(format!(
                    "{images:?} is not a permutation of 1..{n}"
                )));
            }
            seen[img - 1] = true;
            out.push((img - 1) as u16);
        }
        Ok(Permutation { images: out })
    }

    /// Builds a permutation of the given degree from disjoint cycles of 1-based points.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (1..=degree).collect();
        for cycle in cycles {
            for (i, &pt) in cycle.iter().enumerate() {
                let next = cycle[(i + 1) % cycle.len()];
                if pt == 0 || pt > degree || next == 0 || next > degree {
                    return Err(Error::MalformedSpec(format!(
                        "cycle point out of range in {cycle:?}"
                    )));
                }
                images[pt - 1] = next;
            }
        }
        Permutation::from_images(&images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// 1-based image array.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i as usize + 1).collect()
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: self
                .images
                .iter()
                .map(|&i| other.images[i as usize])
                .collect(),
        }
    }

    fn padded(&self, degree: usize) -> Permutation {
        let mut images = self.images.clone();
        images.extend(self.images.len() as u16..degree as u16);
        Permutation { images }
    }
}

impl fmt::Display for Permutation {
    /// Disjoint cycle notation, `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.images.len()];
        let mut any = false;
        for start in 0..self.images.len() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut cur = start;
            let mut first = true;
            while !seen[cur] {
                seen[cur] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}", cur + 1)?;
                first = false;
                cur = self.images[cur] as usize;
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// Named groups available without an input file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Builtin {
    Cyclic(usize),
    /// Dihedral group of order `2n`.
    Dihedral(usize),
    Symmetric(usize),
    Alternating(usize),
    Quaternion8,
    Sl23,
    Product(Box<Builtin>, Box<Builtin>),
}

impl FromStr for Builtin {
    type Err = Error;

    /// Accepts `builtin:<name>` or the bare `<name>` form; product factors may use either.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.strip_prefix("builtin:").unwrap_or(s);
        if let Some(rest) = body.strip_prefix("product:") {
            // Left factor ends at the first comma, so only right-nested products are expressible.
            let (left, right) = rest
                .split_once(',')
                .ok_or_else(|| Error::MalformedSpec(format!("product needs two factors: `{s}`")))?;
            return Ok(Builtin::Product(
                Box::new(left.parse()?),
                Box::new(right.parse()?),
            ));
        }
        let (name, arg) = match body.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (body, None),
        };
        let num = |arg: Option<&str>| -> Result<usize> {
            arg.ok_or_else(|| Error::MalformedSpec(format!("`{s}` needs a size")))?
                .parse::<usize>()
                .map_err(|_| Error::MalformedSpec(format!("bad size in `{s}`")))
        };
        let b = match name {
            "cyclic" => Builtin::Cyclic(num(arg)?),
            "dihedral" => Builtin::Dihedral(num(arg)?),
            "symmetric" => Builtin::Symmetric(num(arg)?),
            "alternating" => Builtin::Alternating(num(arg)?),
            "quaternion" if arg == Some("8") => Builtin::Quaternion8,
            "sl23" if arg.is_none() => Builtin::Sl23,
            _ => return Err(Error::UnknownBuiltin(s.to_string())),
        };
        match b {
            Builtin::Cyclic(0)
            | Builtin::Dihedral(0)
            | Builtin::Symmetric(0)
            | Builtin::Alternating(0) => Err(Error::MalformedSpec(format!(
                "size must be positive in `{s}`"
            ))),
            Builtin::Symmetric(n) | Builtin::Alternating(n) if n > 6 => Err(Error::UnknownBuiltin(
                format!("{s} (symmetric/alternating builtins are limited to n <= 6)"),
            )),
            b => Ok(b),
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Cyclic(n) => write!(f, "cyclic:{n}"),
            Builtin::Dihedral(n) => write!(f, "dihedral:{n}"),
            Builtin::Symmetric(n) => write!(f, "symmetric:{n}"),
            Builtin::Alternating(n) => write!(f, "alternating:{n}"),
            Builtin::Quaternion8 => write!(f, "quaternion:8"),
            Builtin::Sl23 => write!(f, "sl23"),
            Builtin::Product(a, b) => write!(f, "product:{a},{b}"),
        }
    }
}

/// Group input as read from JSON or a builtin name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupSpec {
    Permutation {
        degree: usize,
        generators: Vec<Vec<usize>>,
    },
    Cayley {
        table: Vec<Vec<usize>>,
    },
    #[serde(skip)]
    Builtin(Builtin),
}

impl GroupSpec {
    pub fn builtin(s: &str) -> Result<Self> {
        Ok(GroupSpec::Builtin(s.parse()?))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::MalformedSpec(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupSource {
    PermutationGenerated,
    CayleyTable,
    Builtin,
}

#[derive(Debug, Clone)]
struct PermRep {
    degree: usize,
    images: Vec<u16>,
}

/// A finite group with every element enumerated and a full multiplication table.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u16>,
    inverse: Vec<u16>,
    generators: Vec<usize>,
    perms: Option<PermRep>,
    source: GroupSource,
}

impl FiniteGroup {
    /// Enumerates a group from a spec with default limits.
    pub fn enumerate(spec: &GroupSpec) -> Result<Self> {
        Self::enumerate_with(spec, Limits::default())
    }

    pub fn enumerate_with(spec: &GroupSpec, limits: Limits) -> Result<Self> {
        let limits = Limits {
            max_order: limits.max_order.min(MAX_ORDER_HARD),
            ..limits
        };
        match spec {
            GroupSpec::Permutation { degree, generators } => {
                let gens = generators
                    .iter()
                    .map(|g| {
                        if g.len() != *degree {
                            return Err(Error::MalformedSpec(format!(
                                "generator {g:?} does not have degree {degree}"
                            )));
                        }
                        Permutation::from_images(g)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::from_permutations(*degree, &gens, limits)
            }
            GroupSpec::Cayley { table } => Self::from_cayley(table, limits),
            GroupSpec::Builtin(b) => {
                let mut g = Self::from_builtin(b, limits)?;
                g.source = GroupSource::Builtin;
                Ok(g)
            }
        }
    }

    /// Breadth-first closure of `generators`, in the given order, starting at the identity.
    pub fn from_permutations(
        degree: usize,
        generators: &[Permutation],
        limits: Limits,
    ) -> Result<Self> {
        if degree > limits.max_degree {
            return Err(Error::DegreeCapExceeded {
                degree,
                cap: limits.max_degree,
            });
        }
        if degree == 0 {
            return Err(Error::MalformedSpec("degree must be at least 1".into()));
        }
        for g in generators {
            if g.degree() != degree {
                return Err(Error::MalformedSpec(format!(
                    "generator {g} has wrong degree"
                )));
            }
        }
        let mut elems: Vec<Permutation> = vec![Permutation::identity(degree)];
        let mut index: HashMap<Permutation, usize> = HashMap::new();
        index.insert(elems[0].clone(), 0);
        let ngens = generators.len();
        let mut right: Vec<u32> = Vec::new();
        // parent[b] = (a, k) with b = a * generators[k]
        let mut parent: Vec<(usize, usize)> = vec![(0, usize::MAX)];
        let mut queue = VecDeque::from([0usize]);
        while let Some(a) = queue.pop_front() {
            for (k, g) in generators.iter().enumerate() {
                let prod = elems[a].then(g);
                let idx = match index.get(&prod) {
                    Some(&i) => i,
                    None => {
                        let i = elems.len();
                        if i >= limits.max_order {
                            return Err(Error::OrderCapExceeded {
                                cap: limits.max_order,
                            });
                        }
                        index.insert(prod.clone(), i);
                        elems.push(prod);
                        parent.push((a, k));
                        queue.push_back(i);
                        i
                    }
                };
                right.push(idx as u32);
            }
        }
        let n = elems.len();
        // right[a * ngens + k] = a * g_k, filled in BFS order so rows are 0..n
        let mut table = vec![0u16; n * n];
        for a in 0..n {
            table[a * n] = a as u16;
        }
        for b in 1..n {
            let (pb, k) = parent[b];
            for a in 0..n {
                let ab_prev = table[a * n + pb] as usize;
                table[a * n + b] = right[ab_prev * ngens + k] as u16;
            }
        }
        let images = elems
            .iter()
            .flat_map(|p| p.images.iter().copied())
            .collect();
        let mut group =
            FiniteGroup::from_table_unchecked(n, table, GroupSource::PermutationGenerated);
        group.generators = generators
            .iter()
            .map(|g| index[g])
            .filter(|&i| i != 0)
            .collect();
        group.generators.dedup();
        group.perms = Some(PermRep { degree, images });
        Ok(group)
    }

    /// Imports a 0-based Cayley table, checking every group axiom including associativity.
    pub fn from_cayley(rows: &[Vec<usize>], limits: Limits) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::GroupAxiom("empty table".into()));
        }
        if n > limits.max_order {
            return Err(Error::OrderCapExceeded {
                cap: limits.max_order,
            });
        }
        let mut table = vec![0u16; n * n];
        for (a, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::GroupAxiom(format!(
                    "row {a} has length {} != {n}",
                    row.len()
                )));
            }
            for (b, &c) in row.iter().enumerate() {
                if c >= n {
                    return Err(Error::GroupAxiom(format!(
                        "entry ({a},{b}) = {c} out of range"
                    )));
                }
                table[a * n + b] = c as u16;
            }
        }
        let t = |a: usize, b: usize| table[a * n + b] as usize;
        for a in 0..n {
            if t(0, a) != a || t(a, 0) != a {
                return Err(Error::GroupAxiom(format!(
                    "element 0 is not an identity (witness {a})"
                )));
            }
        }
        for a in 0..n {
            if !(0..n).any(|b| t(a, b) == 0) {
                return Err(Error::GroupAxiom(format!("element {a} has no inverse")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = t(a, b);
                for c in 0..n {
                    if t(ab, c) != t(a, t(b, c)) {
                        return Err(Error::GroupAxiom(format!(
                            "associativity fails for ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let mut g = FiniteGroup::from_table_unchecked(n, table, GroupSource::CayleyTable);
        g.generators = g.greedy_generators();
        Ok(g)
    }

    fn from_table_unchecked(n: usize, table: Vec<u16>, source: GroupSource) -> Self {
        let mut inverse = vec![0u16; n];
        for a in 0..n {
            let row = &table[a * n..(a + 1) * n];
            inverse[a] = row.iter().position(|&c| c == 0).expect("inverse exists") as u16;
        }
        FiniteGroup {
            order: n,
            table,
            inverse,
            generators: Vec::new(),
            perms: None,
            source,
        }
    }

    fn from_builtin(b: &Builtin, limits: Limits) -> Result<Self> {
        let cyc = |d: usize, c: &[usize]| Permutation::from_cycles(d, &[c]);
        match b {
            Builtin::Cyclic(n) => {
                let gen: Vec<usize> = (1..=*n).map(|i| i % n + 1).collect();
                Self::from_permutations(*n, &[Permutation::from_images(&gen)?], limits)
            }
            Builtin::Dihedral(1) => Self::from_permutations(2, &[cyc(2, &[1, 2])?], limits),
            Builtin::Dihedral(2) => {
                Self::from_permutations(4, &[cyc(4, &[1, 2])?, cyc(4, &[3, 4])?], limits)
            }
            Builtin::Dihedral(n) => {
                let n = *n;
                let rot: Vec<usize> = (1..=n).map(|i| i % n + 1).collect();
                let refl: Vec<usize> = (1..=n).map(|i| (n + 1 - i) % n + 1).collect();
                Self::from_permutations(
                    n,
                    &[
                        Permutation::from_images(&rot)?,
                        Permutation::from_images(&refl)?,
                    ],
                    limits,
                )
            }
            Builtin::Symmetric(n) => {
                let n = *n;
                let mut gens = Vec::new();
                if n >= 2 {
                    gens.push(cyc(n, &[1, 2])?);
                }
                if n >= 3 {
                    gens.push(Permutation::from_images(
                        &(1..=n).map(|i| i % n + 1).collect::<Vec<_>>(),
                    )?);
                }
                Self::from_permutations(n, &gens, limits)
            }
            Builtin::Alternating(n) => {
                let n = *n;
                let gens = (3..=n)
                    .map(|k| cyc(n, &[1, 2, k]))
                    .collect::<Result<Vec<_>>>()?;
                Self::from_permutations(n, &gens, limits)
            }
            Builtin::Quaternion8 => {
                // regular representation: i = (1 2 3 4)(5 6 7 8), j = (1 5 3 7)(2 8 4 6)
                let i = Permutation::from_cycles(8, &[&[1, 2, 3, 4], &[5, 6, 7, 8]])?;
                let j = Permutation::from_cycles(8, &[&[1, 5, 3, 7], &[2, 8, 4, 6]])?;
                Self::from_permutations(8, &[i, j], limits)
            }
            Builtin::Sl23 => {
                // action on the 8 nonzero vectors of F_3^2
                let vectors: Vec<(u8, u8)> = (0..3u8)
                    .flat_map(|x| (0..3u8).map(move |y| (x, y)))
                    .filter(|&v| v != (0, 0))
                    .collect();
                let act = |m: [[u8; 2]; 2]| -> Result<Permutation> {
                    let images: Vec<usize> = vectors
                        .iter()
                        .map(|&(x, y)| {
                            let img = (
                                (m[0][0] * x + m[0][1] * y) % 3,
                                (m[1][0] * x + m[1][1] * y) % 3,
                            );
                            vectors.iter().position(|&v| v == img).unwrap() + 1
                        })
                        .collect();
                    Permutation::from_images(&images)
                };
                Self::from_permutations(
                    8,
                    &[act([[1, 1], [0, 1]])?, act([[1, 0], [1, 1]])?],
                    limits,
                )
            }
            Builtin::Product(a, b) => {
                let ga = Self::from_builtin(a, limits)?;
                let gb = Self::from_builtin(b, limits)?;
                Self::direct_product(&ga, &gb, limits)
            }
        }
    }

    /// Direct product; element `(a, b)` has index `a * |H| + b`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup, limits: Limits) -> Result<Self> {
        let (m, k) = (g.order, h.order);
        let n =
            m.checked_mul(k)
                .filter(|&n| n <= limits.max_order)
                .ok_or(Error::OrderCapExceeded {
                    cap: limits.max_order,
                })?;
        let mut table = vec![0u16; n * n];
        for x in 0..n {
            let (a1, b1) = (x / k, x % k);
            for y in 0..n {
                let (a2, b2) = (y / k, y % k);
                table[x * n + y] = (g.mul(a1, a2) * k + h.mul(b1, b2)) as u16;
            }
        }
        let mut out = FiniteGroup::from_table_unchecked(n, table, g.source);
        out.generators = g
            .generators
            .iter()
            .map(|&a| a * k)
            .chain(h.generators.iter().copied())
            .collect();
        if let (Some(pg), Some(ph)) = (&g.perms, &h.perms) {
            let degree = pg.degree + ph.degree;
            let mut images = Vec::with_capacity(n * degree);
            for x in 0..n {
                let (a, b) = (x / k, x % k);
                images.extend_from_slice(&pg.images[a * pg.degree..(a + 1) * pg.degree]);
                images.extend(
                    ph.images[b * ph.degree..(b + 1) * ph.degree]
                        .iter()
                        .map(|&i| i + pg.degree as u16),
                );
            }
            out.perms = Some(PermRep { degree, images });
        }
        Ok(out)
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let n = self.order;
        let mut gens = Vec::new();
        let mut inside = vec![false; n];
        inside[0] = true;
        for x in 1..n {
            if inside[x] {
                continue;
            }
            gens.push(x);
            inside.iter_mut().for_each(|b| *b = false);
            inside[0] = true;
            let mut queue = VecDeque::from([0usize]);
            while let Some(a) = queue.pop_front() {
                for &g in &gens {
                    let b = self.mul(a, g);
                    if !inside[b] {
                        inside[b] = true;
                        queue.push_back(b);
                    }
                }
            }
        }
        gens
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    pub fn pow(&self, a: usize, mut k: u64) -> usize {
        let mut base = a;
        let mut acc = 0;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// `x^{-1} g x`.
    #[inline]
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(self.inv(x), g), x)
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn source(&self) -> GroupSource {
        self.source
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().all(|&a| {
            self.generators
                .iter()
                .all(|&b| self.mul(a, b) == self.mul(b, a))
        })
    }

    /// The permutation for element `a`, when the group came from permutations.
    pub fn permutation(&self, a: usize) -> Option<Permutation> {
        self.perms.as_ref().map(|p| Permutation {
            images: p.images[a * p.degree..(a + 1) * p.degree].to_vec(),
        })
    }

    pub fn perm_degree(&self) -> Option<usize> {
        self.perms.as_ref().map(|p| p.degree)
    }

    /// Looks up the index of a permutation; shorter permutations are padded with fixed points.
    pub fn index_of_permutation(&self, perm: &Permutation) -> Option<usize> {
        let rep = self.perms.as_ref()?;
        if perm.degree() > rep.degree {
            return None;
        }
        let perm = perm.padded(rep.degree);
        rep.images
            .chunks(rep.degree)
            .position(|chunk| chunk == perm.images.as_slice())
    }

    /// Human-readable label for element `a`.
    pub fn element_label(&self, a: usize) -> String {
        match self.permutation(a) {
            Some(p) => p.to_string(),
            None => format!("#{a}"),
        }
    }

    /// SHA-256 over the Cayley table; binds exported character tables to a group.
    pub fn cayley_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(b"pblocks-cayley-v1");
        hasher.update((self.order as u64).to_le_bytes());
        for &c in &self.table {
            hasher.update((c as u32).to_le_bytes());
        }
        hex::encode(hasher.finalize())
    }

    /// 0-based Cayley table rows.
    pub fn cayley_rows(&self) -> Vec<Vec<usize>> {
        self.table
            .chunks(self.order)
            .map(|row| row.iter().map(|&c| c as usize).collect())
            .collect()
    }
}
