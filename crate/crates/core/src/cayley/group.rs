use super::CayleyError;
use serde::{Deserialize, Serialize};
use std::collections::{HashSet, VecDeque};

/// A `3 × 3` matrix over `ℤ/nℤ` with determinant 1, entries row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModMatrix {
    modulus: u32,
    entries: [u32; 9],
}

impl ModMatrix {
    pub fn new(modulus: u32, entries: [i64; 9]) -> Result<Self, CayleyError> {
        check_modulus(modulus)?;
        let m = modulus as i64;
        let entries = entries.map(|e| e.rem_euclid(m) as u32);
        let matrix = ModMatrix { modulus, entries };
        if matrix.det() != 1 % modulus {
            return Err(CayleyError::NotUnimodular { modulus, det: matrix.det() });
        }
        Ok(matrix)
    }

    pub fn identity(modulus: u32) -> Self {
        let mut entries = [0; 9];
        for i in 0..3 {
            entries[4 * i] = 1 % modulus;
        }
        ModMatrix { modulus, entries }
    }

    /// `I + sign · e_{ij}`, `i ≠ j`.
    pub fn elementary(modulus: u32, i: usize, j: usize, sign: i64) -> Self {
        assert!(i < 3 && j < 3 && i != j);
        let mut m = Self::identity(modulus);
        m.entries[3 * i + j] = sign.rem_euclid(modulus as i64) as u32;
        m
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn entries(&self) -> &[u32; 9] {
        &self.entries
    }

    pub fn det(&self) -> u32 {
        let n = self.modulus as u64;
        let e = self.entries.map(|v| v as u64);
        let term = |a: usize, b: usize, c: usize, d: usize| (e[a] * e[b] + n * n - e[c] * e[d] % (n * n)) % n;
        let cofactors = [term(4, 8, 5, 7), term(5, 6, 3, 8), term(3, 7, 4, 6)];
        ((e[0] * cofactors[0] + e[1] * cofactors[1] + e[2] * cofactors[2]) % n) as u32
    }

    pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
        debug_assert_eq!(self.modulus, other.modulus);
        let n = self.modulus as u64;
        let (a, b) = (&self.entries, &other.entries);
        let entries = std::array::from_fn(|k| {
            let (i, j) = (k / 3, k % 3);
            let sum: u64 = (0..3).map(|l| a[3 * i + l] as u64 * b[3 * l + j] as u64).sum();
            (sum % n) as u32
        });
        ModMatrix { modulus: self.modulus, entries }
    }

    /// Inverse through the adjugate (the determinant is 1).
    pub fn inverse(&self) -> ModMatrix {
        let n = self.modulus as i64;
        let e = self.entries.map(|v| v as i64);
        let minor = |a: usize, b: usize, c: usize, d: usize| e[a] * e[b] - e[c] * e[d];
        let adj = [
            minor(4, 8, 5, 7),
            -minor(1, 8, 2, 7),
            minor(1, 5, 2, 4),
            -minor(3, 8, 5, 6),
            minor(0, 8, 2, 6),
            -minor(0, 5, 2, 3),
            minor(3, 7, 4, 6),
            -minor(0, 7, 1, 6),
            minor(0, 4, 1, 3),
        ];
        ModMatrix { modulus: self.modulus, entries: adj.map(|v| v.rem_euclid(n) as u32) }
    }

    /// Base-`n` packing with the first entry most significant, so key order
    /// is lexicographic order on entry tuples.
    pub fn key(&self) -> u64 {
        let n = self.modulus as u64;
        self.entries.iter().fold(0u64, |acc, &e| acc * n + e as u64)
    }

    pub fn from_key(modulus: u32, mut key: u64) -> Self {
        let n = modulus as u64;
        let mut entries = [0u32; 9];
        for slot in entries.iter_mut().rev() {
            *slot = (key % n) as u32;
            key /= n;
        }
        ModMatrix { modulus, entries }
    }
}

pub(super) fn check_modulus(modulus: u32) -> Result<(), CayleyError> {
    // 9 base-n digits must fit in a u64 key
    if !(2..=100_000).contains(&modulus) {
        return Err(CayleyError::Modulus(modulus));
    }
    Ok(())
}

/// The twelve matrices `E_{ij}(±1)`, `i ≠ j`, ordered by `(i, j)` then sign.
pub fn elementary_generators(modulus: u32) -> Vec<ModMatrix> {
    let mut gens = Vec::with_capacity(12);
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                gens.push(ModMatrix::elementary(modulus, i, j, 1));
                gens.push(ModMatrix::elementary(modulus, i, j, -1));
            }
        }
    }
    gens
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `|SL₃(ℤ/nℤ)|`: multiplicative over coprime factors, and
/// `|SL₃(ℤ/p^kℤ)| = p^{8(k-1)} · p³(p² - 1)(p³ - 1)`.
pub fn group_order(modulus: u32) -> u128 {
    factorize(modulus as u64)
        .into_iter()
        .map(|(p, k)| {
            let p = p as u128;
            p.pow(8 * (k - 1)) * p.pow(3) * (p * p - 1) * (p.pow(3) - 1)
        })
        .product()
}

/// Group elements sorted by key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElements {
    modulus: u32,
    keys: Vec<u64>,
}

impl GroupElements {
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[u64] {
        &self.keys
    }

    pub fn get(&self, index: usize) -> ModMatrix {
        ModMatrix::from_key(self.modulus, self.keys[index])
    }

    pub fn index_of(&self, m: &ModMatrix) -> Option<usize> {
        self.keys.binary_search(&m.key()).ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = ModMatrix> + '_ {
        self.keys.iter().map(|&k| ModMatrix::from_key(self.modulus, k))
    }
}

/// Breadth-first closure of the identity under right multiplication by
/// `generators`, aborting once more than `max_vertices` elements are found.
pub fn closure(
    modulus: u32,
    generators: &[ModMatrix],
    max_vertices: usize,
) -> Result<GroupElements, CayleyError> {
    let identity = ModMatrix::identity(modulus);
    let mut seen = HashSet::from([identity.key()]);
    let mut queue = VecDeque::from([identity]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = x.mul(g);
            if seen.insert(y.key()) {
                if seen.len() > max_vertices {
                    return Err(CayleyError::SizeLimit {
                        modulus,
                        order: group_order(modulus),
                        limit: max_vertices,
                    });
                }
                queue.push_back(y);
            }
        }
    }
    let mut keys: Vec<u64> = seen.into_iter().collect();
    keys.sort_unstable();
    Ok(GroupElements { modulus, keys })
}

/// Enumerates `SL₃(ℤ/nℤ)` from the elementary generators.
pub fn enumerate_group(modulus: u32, max_vertices: usize) -> Result<GroupElements, CayleyError> {
    check_modulus(modulus)?;
    let order = group_order(modulus);
    if order > max_vertices as u128 {
        return Err(CayleyError::SizeLimit { modulus, order, limit: max_vertices });
    }
    closure(modulus, &elementary_generators(modulus), max_vertices)
}
