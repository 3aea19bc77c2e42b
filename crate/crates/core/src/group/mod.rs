//! Group elements in normal form, exact word metric and ball enumeration.
//!
//! Every backend stores elements as a [`Word`]: a sequence of [`Letter`]s in
//! the backend's normal form. For free groups, the integers and free
//! products of cyclic groups the normal form is also a geodesic spelling,
//! so the word length is simply the number of letters. Finite backends store
//! a single letter holding the element's table index and look lengths up in
//! a precomputed BFS table.

mod ball;
mod finite;
mod syntax;

use std::cmp::Ordering;
use std::collections::VecDeque;

pub use ball::{Ball, SphereWalker, DEFAULT_BALL_BUDGET};
pub use finite::FiniteGroupTable;
pub use syntax::BackendDescriptor;

use crate::error::{Error, Result};

/// A generator or its formal inverse. For finite backends `generator` is an
/// element index of the multiplication table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: u32,
    pub inverted: bool,
}

impl Letter {
    pub const fn new(generator: u32, inverted: bool) -> Self {
        Letter {
            generator,
            inverted,
        }
    }

    #[inline]
    pub fn inverse(self) -> Self {
        Letter {
            generator: self.generator,
            inverted: !self.inverted,
        }
    }
}

/// A group element in the normal form of some backend. The empty word is
/// the identity.
///
/// Words are ordered length-first, then lexicographically by letter
/// (`a < a⁻¹ < b < b⁻¹ < …`), which is the enumeration order of balls.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    /// Wraps letters that are already known to be in normal form.
    pub fn from_normal_letters(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The four kinds of computable group the library supports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BackendKind {
    Free { rank: u32 },
    FreeProductCyclic { orders: Vec<u32> },
    Integers,
    Finite { table: FiniteGroupTable, generators: Vec<u32> },
}

/// A group together with its finite generating set and the hyperbolicity
/// constant of the resulting Cayley graph.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupBackend {
    kind: BackendKind,
    delta: f64,
    /// BFS depth of each element of a finite backend.
    finite_lengths: Vec<usize>,
}

impl GroupBackend {
    pub fn free(rank: u32) -> Result<Self> {
        if rank == 0 || rank > 26 {
            return Err(Error::MalformedInput(format!(
                "free group rank must be in 1..=26, got {rank}"
            )));
        }
        Ok(GroupBackend {
            kind: BackendKind::Free { rank },
            delta: 0.0,
            finite_lengths: Vec::new(),
        })
    }

    pub fn integers() -> Self {
        GroupBackend {
            kind: BackendKind::Integers,
            delta: 0.0,
            finite_lengths: Vec::new(),
        }
    }

    /// Free product of cyclic groups of the given finite orders. The Cayley
    /// graph is not a tree; δ is carried as the fixed constant 1.
    pub fn free_product_cyclic(orders: Vec<u32>) -> Result<Self> {
        if orders.is_empty() || orders.len() > 26 {
            return Err(Error::MalformedInput("need between 1 and 26 cyclic factors".into()));
        }
        if let Some(o) = orders.iter().find(|&&o| o < 2) {
            return Err(Error::MalformedInput(format!("cyclic factor order {o} < 2")));
        }
        Ok(GroupBackend {
            kind: BackendKind::FreeProductCyclic { orders },
            delta: 1.0,
            finite_lengths: Vec::new(),
        })
    }

    /// Finite group with the given generators (all non-identity elements
    /// when `None`). Fails if the generators do not generate the group.
    pub fn finite(table: FiniteGroupTable, generators: Option<Vec<u32>>) -> Result<Self> {
        let n = table.order();
        let mut generators =
            generators.unwrap_or_else(|| (1..n as u32).collect());
        generators.sort_unstable();
        generators.dedup();
        if let Some(g) = generators.iter().find(|&&g| g as usize >= n || g == 0) {
            return Err(Error::MalformedInput(format!("invalid generator index {g}")));
        }
        let mut steps: Vec<u32> = generators
            .iter()
            .flat_map(|&g| [g, table.inverse(g)])
            .collect();
        steps.sort_unstable();
        steps.dedup();
        let mut depth = vec![usize::MAX; n];
        depth[0] = 0;
        let mut queue = VecDeque::from([0u32]);
        while let Some(x) = queue.pop_front() {
            for &s in &steps {
                let y = table.mul(x, s) as usize;
                if depth[y] == usize::MAX {
                    depth[y] = depth[x as usize] + 1;
                    queue.push_back(y as u32);
                }
            }
        }
        if depth.contains(&usize::MAX) {
            return Err(Error::MalformedInput("generators do not generate the group".into()));
        }
        Ok(GroupBackend {
            kind: BackendKind::Finite { table, generators },
            delta: 0.0,
            finite_lengths: depth,
        })
    }

    pub fn with_delta(mut self, delta: f64) -> Result<Self> {
        if !delta.is_finite() || delta < 0.0 {
            return Err(Error::MalformedInput(format!("delta must be a non-negative number, got {delta}")));
        }
        self.delta = delta;
        Ok(self)
    }

    pub fn kind(&self) -> &BackendKind {
        &self.kind
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Free groups and the integers: the Cayley graph is a tree.
    pub fn is_tree(&self) -> bool {
        matches!(self.kind, BackendKind::Free { .. } | BackendKind::Integers)
    }

    pub fn is_free(&self) -> bool {
        matches!(self.kind, BackendKind::Free { .. })
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.kind, BackendKind::Finite { .. })
    }

    pub fn generator_count(&self) -> u32 {
        match &self.kind {
            BackendKind::Free { rank } => *rank,
            BackendKind::Integers => 1,
            BackendKind::FreeProductCyclic { orders } => orders.len() as u32,
            BackendKind::Finite { table, .. } => table.order() as u32,
        }
    }

    /// Letters labelling the edges at the identity of the Cayley graph, in
    /// declaration order.
    pub fn alphabet(&self) -> Vec<Letter> {
        match &self.kind {
            BackendKind::Free { rank } => (0..*rank)
                .flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
                .collect(),
            BackendKind::Integers => vec![Letter::new(0, false), Letter::new(0, true)],
            BackendKind::FreeProductCyclic { orders } => orders
                .iter()
                .enumerate()
                .flat_map(|(k, &o)| {
                    let k = k as u32;
                    let mut v = vec![Letter::new(k, false)];
                    if o > 2 {
                        v.push(Letter::new(k, true));
                    }
                    v
                })
                .collect(),
            BackendKind::Finite { table, generators } => {
                let mut v: Vec<u32> = generators
                    .iter()
                    .flat_map(|&g| [g, table.inverse(g)])
                    .collect();
                v.sort_unstable();
                v.dedup();
                v.into_iter().map(|g| Letter::new(g, false)).collect()
            }
        }
    }

    pub fn validate_letter(&self, l: Letter) -> Result<()> {
        if l.generator >= self.generator_count() {
            return Err(Error::MalformedInput(format!(
                "letter index {} out of range for a backend with {} generators",
                l.generator,
                self.generator_count()
            )));
        }
        Ok(())
    }

    /// Normal form of the product of `raw`.
    pub fn reduce(&self, raw: &[Letter]) -> Result<Word> {
        for &l in raw {
            self.validate_letter(l)?;
        }
        Ok(self.reduce_valid(raw.iter().copied()))
    }

    fn reduce_valid(&self, raw: impl IntoIterator<Item = Letter>) -> Word {
        match &self.kind {
            BackendKind::Free { .. } | BackendKind::Integers => {
                let mut out: Vec<Letter> = Vec::new();
                for l in raw {
                    if out.last() == Some(&l.inverse()) {
                        out.pop();
                    } else {
                        out.push(l);
                    }
                }
                Word { letters: out }
            }
            BackendKind::FreeProductCyclic { orders } => {
                let mut syllables: Vec<(u32, i64)> = Vec::new();
                for l in raw {
                    let n = orders[l.generator as usize] as i64;
                    let step = if l.inverted { -1 } else { 1 };
                    match syllables.last_mut() {
                        Some((k, e)) if *k == l.generator => {
                            *e = canonical_exponent(*e + step, n);
                            if *e == 0 {
                                syllables.pop();
                            }
                        }
                        _ => syllables.push((l.generator, canonical_exponent(step, n))),
                    }
                }
                let mut letters = Vec::new();
                for (k, e) in syllables {
                    let l = Letter::new(k, e < 0);
                    letters.extend(std::iter::repeat_n(l, e.unsigned_abs() as usize));
                }
                Word { letters }
            }
            BackendKind::Finite { table, .. } => {
                let x = raw.into_iter().fold(0u32, |acc, l| {
                    let g = if l.inverted { table.inverse(l.generator) } else { l.generator };
                    table.mul(acc, g)
                });
                finite_word(x)
            }
        }
    }

    fn check_word(&self, w: &Word) -> Result<()> {
        for &l in w.letters() {
            self.validate_letter(l)?;
        }
        Ok(())
    }

    pub fn multiply(&self, a: &Word, b: &Word) -> Result<Word> {
        self.check_word(a)?;
        self.check_word(b)?;
        Ok(self.mul(a, b))
    }

    /// Product of two words already known to belong to this backend.
    pub fn mul(&self, a: &Word, b: &Word) -> Word {
        match &self.kind {
            BackendKind::Free { .. } | BackendKind::Integers => {
                let mut k = 0;
                let (x, y) = (a.letters(), b.letters());
                while k < x.len() && k < y.len() && x[x.len() - 1 - k] == y[k].inverse() {
                    k += 1;
                }
                let mut letters = Vec::with_capacity(x.len() + y.len() - 2 * k);
                letters.extend_from_slice(&x[..x.len() - k]);
                letters.extend_from_slice(&y[k..]);
                Word { letters }
            }
            BackendKind::FreeProductCyclic { .. } => {
                self.reduce_valid(a.letters().iter().chain(b.letters()).copied())
            }
            BackendKind::Finite { table, .. } => {
                finite_word(table.mul(finite_index(a), finite_index(b)))
            }
        }
    }

    /// Product of several words, left to right.
    pub fn mul_all(&self, words: &[&Word]) -> Word {
        words
            .iter()
            .fold(Word::identity(), |acc, w| self.mul(&acc, w))
    }

    pub fn invert(&self, a: &Word) -> Word {
        match &self.kind {
            BackendKind::Finite { table, .. } => finite_word(table.inverse(finite_index(a))),
            _ => self.reduce_valid(a.letters().iter().rev().map(|l| l.inverse())),
        }
    }

    pub fn power(&self, a: &Word, n: i64) -> Word {
        let base = if n < 0 { self.invert(a) } else { a.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Word::identity();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        acc
    }

    /// Exact word length |a| with respect to the backend's generating set.
    pub fn word_length(&self, a: &Word) -> usize {
        match &self.kind {
            BackendKind::Finite { .. } => self.finite_lengths[finite_index(a) as usize],
            _ => a.len(),
        }
    }

    /// d(a, b) = |a⁻¹b|.
    pub fn distance(&self, a: &Word, b: &Word) -> usize {
        self.word_length(&self.mul(&self.invert(a), b))
    }

    /// Gromov product ⟨x·y⟩ based at the identity.
    pub fn gromov_product(&self, x: &Word, y: &Word) -> f64 {
        let s = self.word_length(x) + self.word_length(y);
        (s - self.distance(x, y)) as f64 / 2.0
    }

    /// Enumerate all elements of length at most `radius` in length-lex order.
    pub fn enumerate_ball(&self, radius: usize) -> Result<Ball> {
        self.enumerate_ball_with_budget(radius, DEFAULT_BALL_BUDGET)
    }

    pub fn enumerate_ball_with_budget(&self, radius: usize, budget: usize) -> Result<Ball> {
        Ball::enumerate(self, radius, budget)
    }

    /// Spheres of increasing radius, starting at radius 0.
    pub fn spheres(&self) -> SphereWalker<'_> {
        SphereWalker::new(self)
    }

    pub(crate) fn finite_table(&self) -> Option<&FiniteGroupTable> {
        match &self.kind {
            BackendKind::Finite { table, .. } => Some(table),
            _ => None,
        }
    }

    pub(crate) fn finite_lengths(&self) -> &[usize] {
        &self.finite_lengths
    }

    /// Whether `word ++ [letter]` is itself in normal form (normal forms of
    /// the letter-based backends are prefix closed).
    pub(crate) fn extends_normally(&self, word: &Word, letter: Letter) -> bool {
        match &self.kind {
            BackendKind::Free { .. } | BackendKind::Integers => {
                word.letters().last() != Some(&letter.inverse())
            }
            BackendKind::FreeProductCyclic { orders } => {
                let n = orders[letter.generator as usize] as i64;
                let run = word
                    .letters()
                    .iter()
                    .rev()
                    .take_while(|l| l.generator == letter.generator)
                    .count() as i64;
                if run == 0 {
                    return true;
                }
                let last = *word.letters().last().unwrap();
                if last.inverted != letter.inverted {
                    return false;
                }
                let e = if letter.inverted { -(run + 1) } else { run + 1 };
                canonical_exponent(e, n) == e
            }
            BackendKind::Finite { .. } => false,
        }
    }

    /// Conjugation split of a reduced tree word: `w = u·c·u⁻¹` with `c`
    /// cyclically reduced. Returns `(u, c)`.
    pub fn cyclic_split(&self, w: &Word) -> Result<(Word, Word)> {
        if !self.is_tree() {
            return Err(Error::UnsupportedBackend(
                "cyclic reduction is only defined for tree backends".into(),
            ));
        }
        let l = w.letters();
        let mut t = 0;
        while 2 * t + 1 < l.len() && l[t] == l[l.len() - 1 - t].inverse() {
            t += 1;
        }
        Ok((
            Word::from_normal_letters(l[..t].to_vec()),
            Word::from_normal_letters(l[t..l.len() - t].to_vec()),
        ))
    }

    /// Checks that the powers `a, a², …, a^max_power` are pairwise distinct
    /// and strictly growing in length.
    pub fn has_growing_powers(&self, a: &Word, max_power: usize) -> bool {
        let mut seen = std::collections::HashSet::new();
        let mut p = Word::identity();
        let mut last_len = 0usize;
        for k in 1..=max_power {
            p = self.mul(&p, a);
            let len = self.word_length(&p);
            if (k > 1 && len <= last_len) || p.is_identity() || !seen.insert(p.clone()) {
                return false;
            }
            last_len = len;
        }
        true
    }
}

/// Representative of `e mod n` of minimal absolute value, ties toward the
/// positive exponent.
pub(crate) fn canonical_exponent(e: i64, n: i64) -> i64 {
    let r = e.rem_euclid(n);
    if 2 * r > n {
        r - n
    } else {
        r
    }
}

fn finite_word(x: u32) -> Word {
    if x == 0 {
        Word::identity()
    } else {
        Word::from_normal_letters(vec![Letter::new(x, false)])
    }
}

fn finite_index(w: &Word) -> u32 {
    w.letters().first().map_or(0, |l| l.generator)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> GroupBackend {
        GroupBackend::free(2).unwrap()
    }

    fn w(b: &GroupBackend, s: &str) -> Word {
        b.parse_word(s).unwrap()
    }

    #[test]
    fn reduce_free_examples() {
        let g = f2();
        let a = Letter::new(0, false);
        let b = Letter::new(1, false);
        assert_eq!(g.reduce(&[a, a.inverse(), b]).unwrap(), w(&g, "b"));
        assert!(g.reduce(&[a, b, b.inverse(), a.inverse()]).unwrap().is_identity());
        assert_eq!(g.reduce(&[a, b, a, b]).unwrap(), w(&g, "abab"));
        assert!(matches!(
            g.reduce(&[Letter::new(2, false)]),
            Err(Error::MalformedInput(_))
        ));
    }

    #[test]
    fn multiply_examples() {
        let g = f2();
        assert!(g.multiply(&w(&g, "ab"), &w(&g, "BA")).unwrap().is_identity());
        assert_eq!(g.multiply(&w(&g, "ab"), &w(&g, "b")).unwrap(), w(&g, "abb"));
        let z = GroupBackend::integers();
        assert_eq!(z.multiply(&w(&z, "3"), &w(&z, "-5")).unwrap(), w(&z, "-2"));
        // a word from another backend
        assert!(g.multiply(&w(&g, "a"), &Word::from_normal_letters(vec![Letter::new(5, false)])).is_err());
    }

    #[test]
    fn power_examples() {
        let g = f2();
        assert_eq!(g.power(&w(&g, "ab"), 3), w(&g, "ababab"));
        assert_eq!(g.power(&w(&g, "abA"), 2), w(&g, "abbA"));
        assert!(g.power(&w(&g, "abA"), 0).is_identity());
        assert_eq!(g.power(&w(&g, "ab"), -2), g.invert(&g.power(&w(&g, "ab"), 2)));
    }

    #[test]
    fn word_length_examples() {
        let g = f2();
        assert_eq!(g.word_length(&Word::identity()), 0);
        assert_eq!(g.word_length(&w(&g, "abAB")), 4);
        let p = GroupBackend::free_product_cyclic(vec![2, 3]).unwrap();
        let b2 = p.power(&w(&p, "b"), 2);
        assert_eq!(p.word_length(&b2), 1);
        assert_eq!(b2, w(&p, "B"));
    }

    #[test]
    fn canonical_exponents() {
        assert_eq!(canonical_exponent(-1, 2), 1);
        assert_eq!(canonical_exponent(2, 4), 2);
        assert_eq!(canonical_exponent(-2, 4), 2);
        assert_eq!(canonical_exponent(3, 5), -2);
        assert_eq!(canonical_exponent(2, 3), -1);
    }

    #[test]
    fn distance_and_gromov_examples() {
        let g = f2();
        let ab = w(&g, "ab");
        assert_eq!(g.distance(&ab, &ab), 0);
        assert_eq!(g.distance(&Word::identity(), &ab), 2);
        assert_eq!(g.distance(&w(&g, "a"), &w(&g, "b")), 2);
        assert_eq!(g.gromov_product(&ab, &ab), 2.0);
        assert_eq!(g.gromov_product(&ab, &w(&g, "aB")), 1.0);
        assert_eq!(g.gromov_product(&w(&g, "a"), &w(&g, "b")), 0.0);
    }

    #[test]
    fn free_product_order_two_letters_are_self_inverse() {
        let p = GroupBackend::free_product_cyclic(vec![2, 3]).unwrap();
        let a = Letter::new(0, false);
        let r = p.reduce(&[a.inverse()]).unwrap();
        assert_eq!(r.letters(), &[a]);
        assert!(p.reduce(&[a, a]).unwrap().is_identity());
        assert_eq!(p.alphabet().len(), 3);
    }

    #[test]
    fn finite_backend_lengths() {
        let (t, gens) = FiniteGroupTable::cyclic(6).unwrap();
        let g = GroupBackend::finite(t, Some(gens)).unwrap();
        let three = Word::from_normal_letters(vec![Letter::new(3, false)]);
        assert_eq!(g.word_length(&three), 3);
        let five = Word::from_normal_letters(vec![Letter::new(5, false)]);
        assert_eq!(g.word_length(&five), 1);
        assert_eq!(g.mul(&three, &three), Word::from_normal_letters(vec![]));
        let (t, _) = FiniteGroupTable::cyclic(6).unwrap();
        assert!(GroupBackend::finite(t, Some(vec![2])).is_err());
    }

    #[test]
    fn cyclic_split_examples() {
        let g = f2();
        let (u, c) = g.cyclic_split(&w(&g, "aBA")).unwrap();
        assert_eq!((u, c), (w(&g, "a"), w(&g, "B")));
        let (u, c) = g.cyclic_split(&w(&g, "ab")).unwrap();
        assert!(u.is_identity());
        assert_eq!(c, w(&g, "ab"));
    }

    #[test]
    fn shortlex_order() {
        let g = f2();
        let mut v = [w(&g, "b"), w(&g, "aa"), w(&g, "A"), w(&g, "a"), Word::identity()];
        v.sort();
        let s: Vec<String> = v.iter().map(|x| g.format_word(x)).collect();
        assert_eq!(s, ["1", "a", "A", "b", "aa"]);
    }
}
