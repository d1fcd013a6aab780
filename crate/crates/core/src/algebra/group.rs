//! Finite groups given by multiplication tables and their group algebras.

use super::wedderburn::{wedderburn_decompose, Decomposition};
use super::{AlgebraElement, MultiMatrixAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{CMat, ONE};

/// A finite group on `0..order` with identity `0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a multiplication table (`table[a][b] = a * b`).
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroupTable("empty table".into()));
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroupTable(format!("row {a} has length {}", row.len())));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidGroupTable(format!("entry {x} out of range")));
            }
        }
        for a in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for b in 0..n {
                if std::mem::replace(&mut seen_row[table[a][b]], true)
                    || std::mem::replace(&mut seen_col[table[b][a]], true)
                {
                    return Err(Error::InvalidGroupTable("not a Latin square".into()));
                }
            }
        }
        for a in 0..n {
            if table[0][a] != a || table[a][0] != a {
                return Err(Error::InvalidGroupTable("element 0 is not the identity".into()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroupTable(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let inverse = (0..n)
            .map(|a| (0..n).find(|&b| table[a][b] == 0).unwrap())
            .collect();
        Ok(FiniteGroup { table, inverse })
    }

    /// Builds a group from permutations; the first must be the identity.
    fn from_permutations(perms: Vec<Vec<usize>>) -> Self {
        let idx = |p: &Vec<usize>| perms.iter().position(|q| q == p).expect("closed");
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| idx(&b.iter().map(|&i| a[i]).collect()))
                    .collect()
            })
            .collect();
        FiniteGroup::new(table).expect("permutation groups are groups")
    }

    /// `Z/n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::new(table).unwrap()
    }

    /// Dihedral group of order `2n`: rotations `0..n`, reflections `n..2n`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1);
        let perms: Vec<Vec<usize>> = (0..2 * n)
            .map(|g| {
                (0..n)
                    .map(|i| if g < n { (i + g) % n } else { (n + (g - n) - i) % n })
                    .collect()
            })
            .collect();
        Self::from_permutations(perms)
    }

    /// Symmetric group on `n` letters, identity first, lexicographic order.
    pub fn symmetric(n: usize) -> Self {
        let mut perms = Vec::new();
        let mut p: Vec<usize> = (0..n).collect();
        loop {
            perms.push(p.clone());
            // next permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
            p.swap(i, j);
            p[i + 1..].reverse();
        }
        Self::from_permutations(perms)
    }

    /// Parses names like `Z4`, `S3`, `D4` (dihedral of order 8).
    pub fn builtin(name: &str) -> Result<Self> {
        let bad = || Error::ConfigParse(format!("unknown builtin group '{name}'"));
        let (kind, rest) = name.split_at(1.min(name.len()));
        let n: usize = rest.parse().map_err(|_| bad())?;
        match kind {
            "Z" | "C" if n >= 1 => Ok(Self::cyclic(n)),
            "S" if (1..=5).contains(&n) => Ok(Self::symmetric(n)),
            "D" if n >= 1 => Ok(Self::dihedral(n)),
            _ => Err(bad()),
        }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// Sorted elements of the subgroup generated by `gens`.
    pub fn subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut members = vec![false; self.order()];
        members[0] = true;
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !members[y] {
                    members[y] = true;
                    frontier.push(y);
                }
            }
        }
        (0..self.order()).filter(|&i| members[i]).collect()
    }

    pub fn is_subgroup(&self, elems: &[usize]) -> bool {
        !elems.is_empty()
            && elems.contains(&0)
            && elems
                .iter()
                .all(|&a| elems.iter().all(|&b| elems.contains(&self.mul(a, self.inverse(b)))))
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order()];
        let mut out = Vec::new();
        for a in 0..self.order() {
            if seen[a] {
                continue;
            }
            let mut class: Vec<usize> = (0..self.order())
                .map(|g| self.mul(self.mul(g, a), self.inverse(g)))
                .collect();
            class.sort();
            class.dedup();
            for &c in &class {
                seen[c] = true;
            }
            out.push(class);
        }
        out
    }

    /// Permutation matrix of left multiplication by `g`.
    pub fn left_regular(&self, g: usize) -> CMat {
        let n = self.order();
        let mut m = CMat::zeros(n, n);
        for h in 0..n {
            m[(self.mul(g, h), h)] = ONE;
        }
        m
    }
}

/// The group algebra `C[G]` in block form.
#[derive(Debug, Clone)]
pub struct GroupAlgebra {
    group: FiniteGroup,
    decomposition: Decomposition,
    elements: Vec<AlgebraElement>,
}

impl GroupAlgebra {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// The block algebra with the canonical trace `tr(g) = delta_{g,e}`.
    pub fn algebra(&self) -> &MultiMatrixAlgebra {
        self.decomposition.algebra()
    }

    pub fn decomposition(&self) -> &Decomposition {
        &self.decomposition
    }

    /// Image of the group element `g`.
    pub fn element(&self, g: usize) -> &AlgebraElement {
        &self.elements[g]
    }

    pub fn elements(&self) -> &[AlgebraElement] {
        &self.elements
    }
}

/// Decomposes the left regular representation of `group`.
pub fn group_algebra(group: &FiniteGroup, seed: u64) -> Result<GroupAlgebra> {
    let gens: Vec<CMat> = (0..group.order()).map(|g| group.left_regular(g)).collect();
    let decomposition = wedderburn_decompose(&gens, seed)?;
    let elements = gens.iter().map(|g| decomposition.forward(g)).collect();
    Ok(GroupAlgebra { group: group.clone(), decomposition, elements })
}
