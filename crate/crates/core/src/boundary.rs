//! Boundary points of tree backends as eventually periodic reduced words.
//!
//! In a free group (or the integers) every endpoint `g^{±∞}` of a nontrivial
//! element, and every translate of one, is an infinite reduced word of the
//! form `prefix · period · period · …`. Putting the pair in canonical form
//! (shortest prefix, primitive period) makes equality of boundary points a
//! finite comparison.

use std::fmt;

use crate::error::{Error, Result};
use crate::group::{GroupBackend, Letter, Word};

/// Which endpoint of a loxodromic element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

/// An eventually periodic point of the boundary of a tree, always held in
/// canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PeriodicRay {
    prefix: Vec<Letter>,
    period: Vec<Letter>,
}

fn free_reduce(letters: impl IntoIterator<Item = Letter>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Length of the primitive root of `w`, via the KMP failure function.
pub(crate) fn primitive_root_len<T: PartialEq>(w: &[T]) -> usize {
    let n = w.len();
    if n == 0 {
        return 0;
    }
    let mut fail = vec![0usize; n];
    let mut k = 0;
    for i in 1..n {
        while k > 0 && w[i] != w[k] {
            k = fail[k - 1];
        }
        if w[i] == w[k] {
            k += 1;
        }
        fail[i] = k;
    }
    let p = n - fail[n - 1];
    if n.is_multiple_of(p) {
        p
    } else {
        n
    }
}

impl PeriodicRay {
    /// The boundary point `prefix · period^∞`. Neither word needs to be
    /// reduced; the period must not be trivial.
    pub fn new(prefix: &[Letter], period: &[Letter]) -> Result<Self> {
        let mut prefix = free_reduce(prefix.iter().copied());
        let mut period = free_reduce(period.iter().copied());
        if period.is_empty() {
            return Err(Error::DegenerateElement("period of a boundary ray is trivial".into()));
        }
        // period = y·c·y⁻¹ gives y·c^∞
        let mut t = 0;
        while 2 * t + 1 < period.len() && period[t] == period[period.len() - 1 - t].inverse() {
            t += 1;
        }
        if t > 0 {
            let conj = period[..t].to_vec();
            period = period[t..period.len() - t].to_vec();
            prefix = free_reduce(prefix.into_iter().chain(conj));
        }
        // cancellation across the prefix/period seam
        while let (Some(&last), Some(&first)) = (prefix.last(), period.first()) {
            if last != first.inverse() {
                break;
            }
            prefix.pop();
            period.rotate_left(1);
        }
        period.truncate(primitive_root_len(&period));
        // absorb trailing copies of the period into the periodic part
        while let (Some(&last), Some(&tail)) = (prefix.last(), period.last()) {
            if last != tail {
                break;
            }
            prefix.pop();
            period.rotate_right(1);
        }
        Ok(PeriodicRay { prefix, period })
    }

    pub fn prefix(&self) -> Word {
        Word::from_normal_letters(self.prefix.clone())
    }

    pub fn period(&self) -> Word {
        Word::from_normal_letters(self.period.clone())
    }

    /// Letter at position `i` of the infinite word.
    pub fn letter_at(&self, i: usize) -> Letter {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    /// Serialises as `"prefix|period"` in the backend's word syntax.
    pub fn format(&self, backend: &GroupBackend) -> String {
        let prefix = if self.prefix.is_empty() {
            String::new()
        } else {
            backend.format_word(&self.prefix())
        };
        format!("{prefix}|{}", backend.format_word(&self.period()))
    }

    pub fn parse(s: &str, backend: &GroupBackend) -> Result<Self> {
        let (p, q) = s
            .split_once('|')
            .ok_or_else(|| Error::MalformedInput(format!("boundary ray {s:?} lacks '|'")))?;
        let prefix = backend.parse_word(p)?;
        let period = backend.parse_word(q)?;
        PeriodicRay::new(prefix.letters(), period.letters())
    }
}

impl fmt::Display for PeriodicRay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |ls: &[Letter]| -> String {
            ls.iter()
                .map(|l| {
                    let c = (b'a' + l.generator as u8) as char;
                    if l.inverted {
                        c.to_ascii_uppercase()
                    } else {
                        c
                    }
                })
                .collect()
        };
        write!(f, "{}|{}", show(&self.prefix), show(&self.period))
    }
}

fn require_tree(backend: &GroupBackend) -> Result<()> {
    if backend.is_tree() {
        Ok(())
    } else {
        Err(Error::UnsupportedBackend(
            "boundary arithmetic is only available for free groups and the integers".into(),
        ))
    }
}

fn require_nontrivial(g: &Word, backend: &GroupBackend) -> Result<()> {
    if g.is_identity() {
        Err(Error::DegenerateElement(format!(
            "{} has no boundary endpoints",
            backend.format_word(g)
        )))
    } else {
        Ok(())
    }
}

/// The attracting (`Plus`) or repelling (`Minus`) endpoint of `g`.
pub fn lox_endpoint(g: &Word, sign: Sign, backend: &GroupBackend) -> Result<PeriodicRay> {
    require_tree(backend)?;
    require_nontrivial(g, backend)?;
    let (u, c) = backend.cyclic_split(g)?;
    let period = match sign {
        Sign::Plus => c,
        Sign::Minus => backend.invert(&c),
    };
    PeriodicRay::new(u.letters(), period.letters())
}

/// Equality of boundary points.
pub fn rays_equal(p: &PeriodicRay, q: &PeriodicRay) -> bool {
    p == q
}

/// The image `h · p` under the boundary action.
pub fn apply_boundary(h: &Word, p: &PeriodicRay, backend: &GroupBackend) -> Result<PeriodicRay> {
    require_tree(backend)?;
    let prefix: Vec<Letter> = h.letters().iter().chain(&p.prefix).copied().collect();
    PeriodicRay::new(&prefix, &p.period)
}

/// The fixed points of a nontrivial element: `{g^∞, g^{−∞}}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixSet {
    points: Vec<PeriodicRay>,
}

impl FixSet {
    pub fn of(g: &Word, backend: &GroupBackend) -> Result<FixSet> {
        require_tree(backend)?;
        if g.is_identity() {
            return Ok(FixSet { points: Vec::new() });
        }
        Ok(FixSet {
            points: vec![
                lox_endpoint(g, Sign::Plus, backend)?,
                lox_endpoint(g, Sign::Minus, backend)?,
            ],
        })
    }

    pub fn points(&self) -> &[PeriodicRay] {
        &self.points
    }

    pub fn contains(&self, p: &PeriodicRay) -> bool {
        self.points.contains(p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixRelation {
    Equal,
    Disjoint,
}

/// Compares `Fix(g)` and `Fix(h)`. Fixed-point sets of loxodromics are
/// either equal or disjoint; a one-point overlap is reported as a
/// consistency violation.
pub fn fix_relation(g: &Word, h: &Word, backend: &GroupBackend) -> Result<FixRelation> {
    require_tree(backend)?;
    require_nontrivial(g, backend)?;
    require_nontrivial(h, backend)?;
    let fg = FixSet::of(g, backend)?;
    let fh = FixSet::of(h, backend)?;
    let shared = fg.points().iter().filter(|p| fh.contains(p)).count();
    match shared {
        0 => Ok(FixRelation::Disjoint),
        2 => Ok(FixRelation::Equal),
        _ => Err(Error::ConsistencyViolation(format!(
            "Fix({}) and Fix({}) share exactly one point",
            backend.format_word(g),
            backend.format_word(h)
        ))),
    }
}

/// Least `N <= n_max` such that `h·g^n` is nontrivial for every `n` in
/// `N..=n_max`. Requires `h · g^∞ ≠ g^{−∞}`.
pub fn lox_product_threshold(
    h: &Word,
    g: &Word,
    n_max: u64,
    backend: &GroupBackend,
) -> Result<Option<u64>> {
    require_tree(backend)?;
    require_nontrivial(g, backend)?;
    let g_plus = lox_endpoint(g, Sign::Plus, backend)?;
    let g_minus = lox_endpoint(g, Sign::Minus, backend)?;
    if rays_equal(&apply_boundary(h, &g_plus, backend)?, &g_minus) {
        return Err(Error::Precondition(format!(
            "{} maps the attracting endpoint of {} to its repelling endpoint",
            backend.format_word(h),
            backend.format_word(g)
        )));
    }
    let mut threshold = 1;
    let mut x = h.clone();
    for n in 1..=n_max {
        x = backend.mul(&x, g);
        if x.is_identity() {
            threshold = n + 1;
        }
    }
    if threshold <= n_max {
        Ok(Some(threshold))
    } else if n_max >= 2 {
        Err(Error::ConsistencyViolation(format!(
            "h·g^n is trivial for n = {n_max}, the last power checked"
        )))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> GroupBackend {
        GroupBackend::free(2).unwrap()
    }

    fn w(s: &str) -> Word {
        f2().parse_word(s).unwrap()
    }

    fn ray(prefix: &str, period: &str) -> PeriodicRay {
        PeriodicRay::new(w(prefix).letters(), w(period).letters()).unwrap()
    }

    #[test]
    fn endpoint_examples() {
        let g = f2();
        let p = lox_endpoint(&w("ab"), Sign::Plus, &g).unwrap();
        assert_eq!((p.prefix(), p.period()), (Word::identity(), w("ab")));
        let p = lox_endpoint(&w("aBA"), Sign::Plus, &g).unwrap();
        assert_eq!((p.prefix(), p.period()), (w("a"), w("B")));
        let p = lox_endpoint(&w("ab"), Sign::Minus, &g).unwrap();
        assert_eq!((p.prefix(), p.period()), (Word::identity(), w("BA")));
        assert!(matches!(
            lox_endpoint(&Word::identity(), Sign::Plus, &g),
            Err(Error::DegenerateElement(_))
        ));
        let p = GroupBackend::free_product_cyclic(vec![2, 3]).unwrap();
        assert!(matches!(
            lox_endpoint(&w("ab"), Sign::Plus, &p),
            Err(Error::UnsupportedBackend(_))
        ));
    }

    #[test]
    fn ray_equality_examples() {
        assert!(rays_equal(&ray("a", "bb"), &ray("ab", "b")));
        assert!(!rays_equal(&ray("", "ab"), &ray("", "ba")));
        assert!(rays_equal(&ray("", "ab"), &ray("", "abab")));
        // seam cancellation and non-cyclically-reduced periods
        assert!(rays_equal(&ray("aB", "ba"), &ray("a", "ab")));
        assert!(rays_equal(&ray("aB", "bbb"), &ray("a", "b")));
        assert!(rays_equal(&ray("", "aBA"), &ray("a", "B")));
    }

    #[test]
    fn boundary_action_examples() {
        let g = f2();
        let b_inf = ray("", "b");
        assert_eq!(apply_boundary(&w("a"), &b_inf, &g).unwrap(), ray("a", "b"));
        assert_eq!(apply_boundary(&w("B"), &b_inf, &g).unwrap(), b_inf);
        let x = w("abAAB");
        let p = lox_endpoint(&x, Sign::Plus, &g).unwrap();
        assert_eq!(apply_boundary(&x, &p, &g).unwrap(), p);
    }

    #[test]
    fn fix_relation_examples() {
        let g = f2();
        let x = w("abA");
        assert_eq!(fix_relation(&x, &g.power(&x, 2), &g).unwrap(), FixRelation::Equal);
        assert_eq!(fix_relation(&w("ab"), &w("ba"), &g).unwrap(), FixRelation::Disjoint);
        assert_eq!(fix_relation(&w("a"), &w("baB"), &g).unwrap(), FixRelation::Disjoint);
        assert!(fix_relation(&Word::identity(), &w("a"), &g).is_err());
    }

    #[test]
    fn lox_product_threshold_examples() {
        let g = f2();
        assert_eq!(lox_product_threshold(&w("b"), &w("a"), 10, &g).unwrap(), Some(1));
        assert_eq!(lox_product_threshold(&w("A"), &w("a"), 10, &g).unwrap(), Some(2));
        assert_eq!(lox_product_threshold(&Word::identity(), &w("a"), 10, &g).unwrap(), Some(1));
        // n_max = 1 and h·g trivial: no threshold within range
        assert_eq!(lox_product_threshold(&w("A"), &w("a"), 1, &g).unwrap(), None);
    }

    #[test]
    fn serialisation() {
        let g = f2();
        let p = ray("a", "BB");
        assert_eq!(p.format(&g), "a|B");
        assert_eq!(PeriodicRay::parse("a|B", &g).unwrap(), p);
        assert_eq!(PeriodicRay::parse("|ab", &g).unwrap().format(&g), "|ab");
        assert!(PeriodicRay::parse("ab", &g).is_err());
        assert!(PeriodicRay::parse("a|1", &g).is_err());
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root_len(b"abab"), 2);
        assert_eq!(primitive_root_len(b"aba"), 3);
        assert_eq!(primitive_root_len(b"aaaa"), 1);
        assert_eq!(primitive_root_len(b"abaab"), 5);
    }
}
