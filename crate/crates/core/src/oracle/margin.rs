use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupBackend, Letter, Word};
use crate::swinger::is_infinite_order;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarginEntry {
    pub b: String,
    pub i: i8,
    pub j: i8,
    pub m: u64,
    pub margin: i64,
}

/// `|z^{im} b z^{jm}| - |z^m|` for every `1 <= |b| <= r`, sign pair and
/// `1 <= m <= m_max`, in ball order of `b`, then `(i, j)`, then `m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarginTable {
    pub z: String,
    pub r: usize,
    pub m_max: u64,
    pub entries: Vec<MarginEntry>,
}

impl MarginTable {
    pub fn get(&self, b: &str, i: i8, j: i8, m: u64) -> Option<i64> {
        self.entries
            .iter()
            .find(|e| e.b == b && e.i == i && e.j == j && e.m == m)
            .map(|e| e.margin)
    }

    pub fn all_positive(&self) -> bool {
        self.entries.iter().all(|e| e.margin > 0)
    }

    pub fn first_nonpositive(&self) -> Option<&MarginEntry> {
        self.entries.iter().find(|e| e.margin <= 0)
    }
}

/// Free cancellation with a stack; valid for free groups and the integers.
fn naive_free_reduce(letters: impl IntoIterator<Item = Letter>) -> Vec<Letter> {
    let mut stack: Vec<Letter> = Vec::new();
    for l in letters {
        if stack.last() == Some(&l.inverse()) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    stack
}

/// Spells `w^e` letter by letter, without reducing.
fn spelled_power(w: &[Letter], e: i64) -> Vec<Letter> {
    let base: Vec<Letter> = if e < 0 { w.iter().rev().map(|l| l.inverse()).collect() } else { w.to_vec() };
    base.iter().copied().cycle().take(base.len() * e.unsigned_abs() as usize).collect()
}

fn spelled_length(raw: Vec<Letter>, backend: &GroupBackend) -> Result<i64> {
    if backend.is_tree() {
        Ok(naive_free_reduce(raw).len() as i64)
    } else {
        Ok(backend.word_length(&backend.reduce(&raw)?) as i64)
    }
}

/// Margin table computed entry by entry from the spelled-out product.
pub fn brute_margin_table(z: &Word, r: usize, m_max: u64, backend: &GroupBackend) -> Result<MarginTable> {
    if z.is_identity() {
        return Err(Error::DegenerateElement("z is trivial".into()));
    }
    if r == 0 || m_max == 0 {
        return Err(Error::MalformedInput("r and m_max must be positive".into()));
    }
    if backend.is_finite() || !is_infinite_order(z, backend) {
        return Err(Error::NotLoxodromic(backend.format_word(z)));
    }
    let zl = z.letters();
    let ball = backend.enumerate_ball(r)?;
    let mut entries = Vec::new();
    for b in ball.nontrivial() {
        for (i, j) in [(1i8, 1i8), (1, -1), (-1, 1), (-1, -1)] {
            for m in 1..=m_max {
                let mut raw = spelled_power(zl, i as i64 * m as i64);
                raw.extend_from_slice(b.letters());
                raw.extend(spelled_power(zl, j as i64 * m as i64));
                let whole = spelled_length(raw, backend)?;
                let zm = spelled_length(spelled_power(zl, m as i64), backend)?;
                entries.push(MarginEntry {
                    b: backend.format_word(b),
                    i,
                    j,
                    m,
                    margin: whole - zm,
                });
            }
        }
    }
    Ok(MarginTable {
        z: backend.format_word(z),
        r,
        m_max,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::swinger::swinger_margin;
    use rand::{Rng, SeedableRng};

    #[test]
    fn commutator_margins_grow_by_four() {
        let g = GroupBackend::free(2).unwrap();
        let t = brute_margin_table(&g.parse_word("abAB").unwrap(), 1, 3, &g).unwrap();
        let row: Vec<i64> = (1..=3).map(|m| t.get("a", 1, 1, m).unwrap()).collect();
        assert_eq!(row, vec![5, 9, 13]);
        assert!(t.all_positive());
    }

    #[test]
    fn abelian_collapse() {
        let g = GroupBackend::free(2).unwrap();
        let t = brute_margin_table(&g.parse_word("a").unwrap(), 1, 3, &g).unwrap();
        let row: Vec<i64> = (1..=3).map(|m| t.get("a", 1, -1, m).unwrap()).collect();
        assert_eq!(row, vec![0, -1, -2]);
        let e = t.first_nonpositive().unwrap();
        assert_eq!((e.b.as_str(), e.i, e.j, e.m), ("a", 1, -1, 1));
    }

    #[test]
    fn agrees_with_swinger_margin_on_random_entries() {
        let g = GroupBackend::free(2).unwrap();
        let alphabet = g.alphabet();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 1000 {
            let raw: Vec<Letter> = (0..rng.gen_range(1..=6)).map(|_| alphabet[rng.gen_range(0..4)]).collect();
            let z = g.reduce(&raw).unwrap();
            if z.is_identity() {
                continue;
            }
            let t = brute_margin_table(&z, 2, 6, &g).unwrap();
            for _ in 0..50 {
                let e = &t.entries[rng.gen_range(0..t.entries.len())];
                let b = g.parse_word(&e.b).unwrap();
                assert_eq!(swinger_margin(&z, &b, e.i, e.j, e.m, &g).unwrap(), e.margin);
                checked += 1;
            }
        }
    }

    #[test]
    fn free_product_uses_group_normal_form() {
        let g = GroupBackend::free_product_cyclic(vec![2, 3]).unwrap();
        let z = g.parse_word("ab").unwrap();
        let t = brute_margin_table(&z, 1, 4, &g).unwrap();
        for e in &t.entries {
            let b = g.parse_word(&e.b).unwrap();
            assert_eq!(swinger_margin(&z, &b, e.i, e.j, e.m, &g).unwrap(), e.margin);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let g = GroupBackend::free(2).unwrap();
        assert!(matches!(brute_margin_table(&Word::identity(), 1, 3, &g), Err(Error::DegenerateElement(_))));
        let c3 = GroupBackend::free_product_cyclic(vec![3, 3]).unwrap();
        let a = c3.parse_word("a").unwrap();
        assert!(matches!(brute_margin_table(&a, 1, 3, &c3), Err(Error::NotLoxodromic(_))));
    }
}
