//! Association schemes in adjacency-matrix form.
//!
//! A list of 0/1 matrices is a scheme iff it contains the identity, sums to
//! the all-ones matrix, is closed under transposition, and every product
//! `σ_s σ_t` is a nonnegative integer combination of the `σ_u`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemeError {
    #[error("a scheme needs at least one relation")]
    NoRelations,
    #[error("relation {relation} is not a {expected}x{expected} matrix")]
    Dimension { relation: usize, expected: usize },
    #[error("relation {relation} has entry {value} at ({row}, {col}); entries must be 0 or 1")]
    NonBinary {
        relation: usize,
        row: usize,
        col: usize,
        value: i64,
    },
    #[error("relation {0} is empty")]
    EmptyRelation(usize),
    #[error("condition 1 fails: the identity matrix is not among the relations")]
    NoIdentity,
    #[error("condition 2 fails: position ({row}, {col}) is covered by {count} relations instead of exactly one")]
    NotPartition { row: usize, col: usize, count: usize },
    #[error("condition 3 fails: the transpose of relation {0} is not a relation")]
    MissingTranspose(usize),
    #[error("condition 4 fails: the product of relations {0} and {1} is not a combination of relations")]
    NotClosed(usize, usize),
    #[error("scheme file declares size {declared} but its matrices have size {actual}")]
    SizeMismatch { declared: usize, actual: usize },
    #[error("complete graph scheme needs at least 2 points (got {0})")]
    TooSmall(usize),
    #[error("cyclic group scheme needs at least 1 point")]
    EmptyGroup,
    #[error("reading scheme file: {0}")]
    Io(String),
    #[error("parsing scheme file: {0}")]
    Format(String),
}

/// Dense square 0/1 matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    size: usize,
    entries: Vec<u8>,
}

impl Relation {
    fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut entries = Vec::with_capacity(size * size);
        for x in 0..size {
            for y in 0..size {
                entries.push(f(x, y) as u8);
            }
        }
        Self { size, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.entries[x * self.size + y] == 1
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.size, |x, y| self.get(y, x))
    }

    fn is_identity(&self) -> bool {
        (0..self.size).all(|x| (0..self.size).all(|y| self.get(x, y) == (x == y)))
    }

    /// Row `x` as a list of column indices.
    fn row_support(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.size).filter(move |&y| self.get(x, y))
    }

    fn product(&self, other: &Self) -> Vec<u64> {
        let n = self.size;
        let mut out = vec![0u64; n * n];
        for x in 0..n {
            for z in self.row_support(x) {
                for y in other.row_support(z) {
                    out[x * n + y] += 1;
                }
            }
        }
        out
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        self.entries.chunks(self.size).map(<[u8]>::to_vec).collect()
    }
}

/// On-disk form of a scheme: `{"size": n, "relations": [[[0,1],[1,0]], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SchemeFile {
    pub size: usize,
    pub relations: Vec<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssociationScheme {
    size: usize,
    relations: Vec<Relation>,
    identity_index: usize,
    involution: Vec<usize>,
    /// `constants[(s * rank + t) * rank + u] = p^u_{st}`
    constants: Vec<u64>,
}

impl AssociationScheme {
    /// Checks the four matrix conditions and extracts the structure
    /// constants. Relations are reordered so the identity comes first.
    pub fn validate(matrices: &[Vec<Vec<i64>>]) -> Result<Self, SchemeError> {
        let first = matrices.first().ok_or(SchemeError::NoRelations)?;
        let n = first.len();
        let mut relations = Vec::with_capacity(matrices.len());
        for (i, m) in matrices.iter().enumerate() {
            if n == 0 || m.len() != n || m.iter().any(|row| row.len() != n) {
                return Err(SchemeError::Dimension {
                    relation: i,
                    expected: n,
                });
            }
            for (row, r) in m.iter().enumerate() {
                for (col, &value) in r.iter().enumerate() {
                    if value != 0 && value != 1 {
                        return Err(SchemeError::NonBinary {
                            relation: i,
                            row,
                            col,
                            value,
                        });
                    }
                }
            }
            let rel = Relation::from_fn(n, |x, y| m[x][y] == 1);
            if rel.entries.iter().all(|&e| e == 0) {
                return Err(SchemeError::EmptyRelation(i));
            }
            relations.push(rel);
        }
        Self::from_relations(relations)
    }

    fn from_relations(mut relations: Vec<Relation>) -> Result<Self, SchemeError> {
        let n = relations[0].size;
        let id = relations
            .iter()
            .position(Relation::is_identity)
            .ok_or(SchemeError::NoIdentity)?;
        let identity = relations.remove(id);
        relations.insert(0, identity);

        for x in 0..n {
            for y in 0..n {
                let count = relations.iter().filter(|r| r.get(x, y)).count();
                if count != 1 {
                    return Err(SchemeError::NotPartition { row: x, col: y, count });
                }
            }
        }

        // owner[x*n+y] = the unique relation containing (x, y)
        let mut owner = vec![0usize; n * n];
        for (i, r) in relations.iter().enumerate() {
            for (k, &e) in r.entries.iter().enumerate() {
                if e == 1 {
                    owner[k] = i;
                }
            }
        }

        let mut involution = Vec::with_capacity(relations.len());
        for (i, r) in relations.iter().enumerate() {
            let t = r.transpose();
            let j = relations
                .iter()
                .position(|s| *s == t)
                .ok_or(SchemeError::MissingTranspose(i))?;
            involution.push(j);
        }

        let rank = relations.len();
        let mut constants = vec![0u64; rank * rank * rank];
        for s in 0..rank {
            for t in 0..rank {
                let prod = relations[s].product(&relations[t]);
                let mut coeff: Vec<Option<u64>> = vec![None; rank];
                for (k, &v) in prod.iter().enumerate() {
                    let u = owner[k];
                    match coeff[u] {
                        None => coeff[u] = Some(v),
                        Some(c) if c == v => {}
                        Some(_) => return Err(SchemeError::NotClosed(s, t)),
                    }
                }
                for (u, c) in coeff.into_iter().enumerate() {
                    constants[(s * rank + t) * rank + u] = c.unwrap_or(0);
                }
            }
        }

        Ok(Self {
            size: n,
            relations,
            identity_index: 0,
            involution,
            constants,
        })
    }

    pub fn from_file(file: &SchemeFile) -> Result<Self, SchemeError> {
        let scheme = Self::validate(&file.relations)?;
        if scheme.size != file.size {
            return Err(SchemeError::SizeMismatch {
                declared: file.size,
                actual: scheme.size,
            });
        }
        Ok(scheme)
    }

    pub fn from_json(text: &str) -> Result<Self, SchemeError> {
        let file: SchemeFile =
            serde_json::from_str(text).map_err(|e| SchemeError::Format(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn load(path: &Path) -> Result<Self, SchemeError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| SchemeError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_file(&self) -> SchemeFile {
        SchemeFile {
            size: self.size,
            relations: self
                .relations
                .iter()
                .map(|r| {
                    r.to_rows()
                        .into_iter()
                        .map(|row| row.into_iter().map(i64::from).collect())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("serializable")
    }

    /// `K_n`: relations `I` and `J - I`.
    pub fn complete_graph(n: usize) -> Result<Self, SchemeError> {
        if n < 2 {
            return Err(SchemeError::TooSmall(n));
        }
        let relations = vec![
            Relation::from_fn(n, |x, y| x == y),
            Relation::from_fn(n, |x, y| x != y),
        ];
        Self::from_relations(relations)
    }

    /// The thin scheme of the cyclic group of order `n`; relation `k`
    /// holds between `x` and `x + k mod n`.
    pub fn cyclic_group(n: usize) -> Result<Self, SchemeError> {
        if n == 0 {
            return Err(SchemeError::EmptyGroup);
        }
        let relations = (0..n)
            .map(|k| Relation::from_fn(n, |x, y| (x + k) % n == y))
            .collect();
        Self::from_relations(relations)
    }

    /// The rank-1 scheme on one point.
    pub fn trivial() -> Self {
        Self::cyclic_group(1).expect("one point")
    }

    /// Scheme on `X × Y` whose relations are `σ_s ⊗ σ_t`, indexed
    /// `s * rank(T) + t`; point `(x, y)` has index `x * |Y| + y`.
    pub fn direct_product(&self, other: &Self) -> Self {
        let (n1, n2) = (self.size, other.size);
        let (r1, r2) = (self.rank(), other.rank());
        let n = n1 * n2;
        let mut relations = Vec::with_capacity(r1 * r2);
        for s in &self.relations {
            for t in &other.relations {
                relations.push(Relation::from_fn(n, |a, b| {
                    s.get(a / n2, b / n2) && t.get(a % n2, b % n2)
                }));
            }
        }
        let rank = r1 * r2;
        let mut constants = vec![0u64; rank * rank * rank];
        for s in 0..r1 {
            for t in 0..r2 {
                for s2 in 0..r1 {
                    for t2 in 0..r2 {
                        for u in 0..r1 {
                            for w in 0..r2 {
                                let c = self.structure_constant(s, s2, u)
                                    * other.structure_constant(t, t2, w);
                                let (a, b, c_idx) = (s * r2 + t, s2 * r2 + t2, u * r2 + w);
                                constants[(a * rank + b) * rank + c_idx] = c;
                            }
                        }
                    }
                }
            }
        }
        let involution = (0..r1)
            .flat_map(|s| (0..r2).map(move |t| (s, t)))
            .map(|(s, t)| self.involution[s] * r2 + other.involution[t])
            .collect();
        Self {
            size: n,
            relations,
            identity_index: 0,
            involution,
            constants,
        }
    }

    /// Number of points `|X|`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Number of relations.
    pub fn rank(&self) -> usize {
        self.relations.len()
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn identity_index(&self) -> usize {
        self.identity_index
    }

    pub fn involution(&self, s: usize) -> usize {
        self.involution[s]
    }

    /// `p^u_{st}`, the coefficient of `σ_u` in `σ_s σ_t`.
    pub fn structure_constant(&self, s: usize, t: usize, u: usize) -> u64 {
        let r = self.rank();
        self.constants[(s * r + t) * r + u]
    }

    /// Valency of relation `s`, i.e. `p^0_{s s*}`.
    pub fn valency(&self, s: usize) -> u64 {
        self.structure_constant(s, self.involution[s], self.identity_index)
    }

    pub fn is_commutative(&self) -> bool {
        let r = self.rank();
        (0..r).all(|s| {
            (0..r).all(|t| (0..r).all(|u| self.structure_constant(s, t, u) == self.structure_constant(t, s, u)))
        })
    }
}
