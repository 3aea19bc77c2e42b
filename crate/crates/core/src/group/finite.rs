use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Multiplication table of a finite group. Element `0` is the identity and
/// `table[a][b]` is the index of the product `a·b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTable", into = "RawTable")]
pub struct FiniteGroupTable {
    table: Vec<Vec<u32>>,
    inverses: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct RawTable {
    order: usize,
    table: Vec<Vec<u32>>,
}

impl TryFrom<RawTable> for FiniteGroupTable {
    type Error = Error;

    fn try_from(raw: RawTable) -> Result<Self> {
        if raw.order != raw.table.len() {
            return Err(Error::MalformedInput(format!(
                "declared order {} but table has {} rows",
                raw.order,
                raw.table.len()
            )));
        }
        FiniteGroupTable::new(raw.table)
    }
}

impl From<FiniteGroupTable> for RawTable {
    fn from(t: FiniteGroupTable) -> Self {
        RawTable {
            order: t.order(),
            table: t.table,
        }
    }
}

/// Tables up to this order are checked for associativity on construction.
const ASSOCIATIVITY_CHECK_LIMIT: usize = 256;

impl FiniteGroupTable {
    pub fn new(table: Vec<Vec<u32>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::MalformedInput("empty multiplication table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::MalformedInput(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            let mut seen = vec![false; n];
            for &x in row {
                let x = x as usize;
                if x >= n || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::MalformedInput(format!(
                        "row {i} is not a permutation of 0..{n}"
                    )));
                }
            }
        }
        for j in 0..n {
            let mut seen = vec![false; n];
            for row in &table {
                if std::mem::replace(&mut seen[row[j] as usize], true) {
                    return Err(Error::MalformedInput(format!(
                        "column {j} is not a permutation of 0..{n}"
                    )));
                }
            }
        }
        for i in 0..n {
            if table[0][i] as usize != i || table[i][0] as usize != i {
                return Err(Error::MalformedInput(
                    "row and column 0 must be the identity".into(),
                ));
            }
        }
        if n <= ASSOCIATIVITY_CHECK_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    let ab = table[a][b] as usize;
                    for c in 0..n {
                        if table[ab][c] != table[a][table[b][c] as usize] {
                            return Err(Error::MalformedInput(format!(
                                "table is not associative at ({a}, {b}, {c})"
                            )));
                        }
                    }
                }
            }
        }
        let mut inverses = vec![0u32; n];
        for (a, row) in table.iter().enumerate() {
            // Latin square: exactly one b with a·b = 0.
            let b = row.iter().position(|&x| x == 0).unwrap_or(0);
            inverses[a] = b as u32;
        }
        Ok(FiniteGroupTable { table, inverses })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize][b as usize]
    }

    #[inline]
    pub fn inverse(&self, a: u32) -> u32 {
        self.inverses[a as usize]
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.table
    }

    /// The opposite group: `a ∘ b = b·a`.
    pub fn transposed(&self) -> FiniteGroupTable {
        let n = self.order();
        let table = (0..n)
            .map(|a| (0..n).map(|b| self.table[b][a]).collect())
            .collect();
        FiniteGroupTable {
            table,
            inverses: self.inverses.clone(),
        }
    }

    /// Z/n with generator 1.
    pub fn cyclic(n: usize) -> Result<(Self, Vec<u32>)> {
        if n == 0 {
            return Err(Error::MalformedInput("cyclic group order must be positive".into()));
        }
        let table = (0..n)
            .map(|a| (0..n).map(|b| ((a + b) % n) as u32).collect())
            .collect();
        let gens = if n > 1 { vec![1] } else { vec![] };
        Ok((FiniteGroupTable::new(table)?, gens))
    }

    /// Dihedral group of order 2n. Element `k + n·e` is `ρ^k σ^e`, with
    /// generators ρ (index 1) and σ (index n).
    pub fn dihedral(n: usize) -> Result<(Self, Vec<u32>)> {
        if n < 2 {
            return Err(Error::MalformedInput("dihedral group needs n >= 2".into()));
        }
        let idx = |k: usize, e: usize| (k % n + n * e) as u32;
        let mut table = vec![vec![0u32; 2 * n]; 2 * n];
        for (x, row) in table.iter_mut().enumerate() {
            let (a, e) = (x % n, x / n);
            for (y, cell) in row.iter_mut().enumerate() {
                let (b, f) = (y % n, y / n);
                let k = if e == 0 { a + b } else { a + n - b };
                *cell = idx(k, (e + f) % 2);
            }
        }
        Ok((FiniteGroupTable::new(table)?, vec![1, n as u32]))
    }

    /// Symmetric group on `n` points, elements are permutations in
    /// lexicographic order (identity first), `(στ)(x) = σ(τ(x))`.
    /// Generators: the transposition (0 1) and the n-cycle.
    pub fn symmetric(n: usize) -> Result<(Self, Vec<u32>)> {
        if !(1..=6).contains(&n) {
            return Err(Error::MalformedInput("symmetric group supported for 1 <= n <= 6".into()));
        }
        let perms = permutations(n);
        let index = |p: &[usize]| perms.iter().position(|q| q.as_slice() == p).unwrap() as u32;
        let table = perms
            .iter()
            .map(|s| {
                perms
                    .iter()
                    .map(|t| {
                        let st: Vec<usize> = (0..n).map(|x| s[t[x]]).collect();
                        index(&st)
                    })
                    .collect()
            })
            .collect();
        let mut gens = Vec::new();
        if n >= 2 {
            let mut swap: Vec<usize> = (0..n).collect();
            swap.swap(0, 1);
            let cycle: Vec<usize> = (0..n).map(|x| (x + 1) % n).collect();
            gens.push(index(&swap));
            let c = index(&cycle);
            if !gens.contains(&c) {
                gens.push(c);
            }
            gens.sort_unstable();
        }
        Ok((FiniteGroupTable::new(table)?, gens))
    }

    /// Builtin groups by name: `Z<n>`, `D<n>` (order 2n), `S3`, `S4`.
    pub fn by_name(name: &str) -> Result<(Self, Vec<u32>)> {
        let bad = || Error::MalformedInput(format!("unknown finite group name {name:?}"));
        let (head, tail) = name.split_at(name.chars().next().map_or(0, |c| c.len_utf8()));
        let n: usize = tail.parse().map_err(|_| bad())?;
        match head {
            "Z" | "z" | "C" | "c" => Self::cyclic(n),
            "D" | "d" => Self::dihedral(n),
            "S" | "s" if n == 3 || n == 4 => Self::symmetric(n),
            _ => Err(bad()),
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                go(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}
