//! Whether `D_{z,r}` is r-separated.
//!
//! On a tree `|xz⁻¹| = |x| + |z| - 2k` where `k` is the length of the common
//! suffix of `x` and `z`, so `x ∈ C` iff `x` ends in the last `k_min` letters
//! of `z`, `k_min` being the least `k` with `2k > |z| - r`. Likewise `|xz|`
//! is short iff `x` ends in the last `k_min` letters of `z⁻¹`. Membership in
//! `D` is thus a test on the last `k_min` letters, and two members within
//! distance `r - 1` meet at a common prefix `p` whose own last `k_min`
//! letters are all that matter. Letting `p` range over `Ball(k_min)` decides
//! separation for the whole group.

use crate::error::Result;
use crate::group::{GroupBackend, Letter, Word};

/// Least `k` with `2k > |z| - r`.
pub fn suffix_threshold(z_len: usize, r: usize) -> usize {
    let d = z_len as i64 - r as i64;
    (d.div_euclid(2) + 1).max(0) as usize
}

/// The two length-`k_min` suffixes that characterise membership in D.
pub fn d_markers(z: &Word, r: usize) -> (Vec<Letter>, Vec<Letter>) {
    let l = z.letters();
    let k = suffix_threshold(l.len(), r).min(l.len());
    let from_z = l[l.len() - k..].to_vec();
    let from_z_inv = l[..k].iter().rev().map(|x| x.inverse()).collect();
    (from_z, from_z_inv)
}

/// A pair of distinct elements of `D_{z,r}` at distance less than `r`, if
/// any. Exact over the whole group on tree backends; elsewhere checked on
/// `Ball(|z| + r + 2)` by direct length computations.
pub fn d_separation_violation(z: &Word, r: usize, backend: &GroupBackend) -> Result<Option<(Word, Word)>> {
    if r <= 1 {
        return Ok(None);
    }
    if !backend.is_tree() {
        return generic_violation(z, r, backend.word_length(z) + r + 2, backend);
    }
    let (m1, m2) = d_markers(z, r);
    let markers = [m1, m2];
    let k = markers[0].len();
    let tails = if r - 1 > k {
        backend.enumerate_ball(r - 1 - k)?.into_elements()
    } else {
        vec![Word::identity()]
    };
    for p in prefix_contexts(&markers, r, backend)? {
        let pl = p.letters();
        let mut best: Vec<(Option<Letter>, Vec<Letter>)> = Vec::new();
        for a in nearby_members(pl, &markers, r, &tails) {
            let first = a.first().copied();
            match best.iter_mut().find(|(c, _)| *c == first) {
                Some((_, b)) if b.len() <= a.len() => {}
                Some((_, b)) => *b = a,
                None => best.push((first, a)),
            }
        }
        for (i, (_, a)) in best.iter().enumerate() {
            for (_, b) in &best[i + 1..] {
                if a.len() + b.len() < r {
                    let x = Word::from_normal_letters([pl, a].concat());
                    let y = Word::from_normal_letters([pl, b].concat());
                    return Ok(Some((x, y)));
                }
            }
        }
    }
    Ok(None)
}

/// Words `p` standing for every possible common prefix of two nearby
/// members. Only the last `k` letters of `p` matter, and only through which
/// marker prefixes of length at least `k - r + 1` they end with; a `p`
/// ending in none of them behaves like its last letter alone.
fn prefix_contexts(markers: &[Vec<Letter>; 2], r: usize, backend: &GroupBackend) -> Result<Vec<Word>> {
    let k = markers[0].len();
    let l0 = (k + 1).saturating_sub(r);
    if l0 <= 1 {
        return Ok(backend.enumerate_ball(k)?.into_elements());
    }
    let mut out = backend.enumerate_ball(1)?.into_elements();
    for m in markers {
        for l in l0..=k {
            for q in backend.enumerate_ball(k - l)?.elements() {
                let head = &m[..l];
                if q.letters().last().is_some_and(|&c| c == head[0].inverse()) {
                    continue;
                }
                out.push(Word::from_normal_letters([q.letters(), head].concat()));
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Every `a` with `|a| < r`, `p·a` reduced and `p·a ∈ D`.
fn nearby_members(p: &[Letter], markers: &[Vec<Letter>; 2], r: usize, tails: &[Word]) -> Vec<Vec<Letter>> {
    let k = markers[0].len();
    let joins = |x: Option<&Letter>, y: Option<&Letter>| match (x, y) {
        (Some(&x), Some(&y)) => x != y.inverse(),
        _ => true,
    };
    let mut out = Vec::new();
    for m in markers {
        // p supplies the first k - j letters of the marker
        for j in 0..=k.min(r - 1) {
            let a = &m[k - j..];
            if p.len() + j >= k && p[p.len() + j - k..] == m[..k - j] && joins(p.last(), a.first()) {
                out.push(a.to_vec());
            }
        }
        // a = w·m with w nontrivial
        for w in tails.iter().filter(|w| !w.is_identity()) {
            let wl = w.letters();
            if joins(wl.last(), m.first()) && joins(p.last(), wl.first()) {
                out.push([wl, m].concat());
            }
        }
    }
    out
}

fn generic_violation(z: &Word, r: usize, radius: usize, backend: &GroupBackend) -> Result<Option<(Word, Word)>> {
    let z_inv = backend.invert(z);
    let len = |w: &Word| backend.word_length(w);
    let in_d = |x: &Word| {
        len(&backend.mul(x, &z_inv)) < len(x) + r || len(&backend.mul(x, z)) < len(x) + r
    };
    let ball = backend.enumerate_ball(radius)?;
    let steps = backend.enumerate_ball(r - 1)?;
    for x in ball.elements().iter().filter(|x| in_d(x)) {
        for a in steps.nontrivial() {
            let y = backend.mul(x, a);
            if len(&y) <= radius && in_d(&y) {
                return Ok(Some((x.clone(), y)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> GroupBackend {
        GroupBackend::free(2).unwrap()
    }

    fn ends_with_marker(p: &[Letter], a: &[Letter], marker: &[Letter]) -> bool {
        let k = marker.len();
        if p.len() + a.len() < k {
            return false;
        }
        let from_a = k.min(a.len());
        let from_p = k - from_a;
        p[p.len() - from_p..] == marker[..from_p] && a[a.len() - from_a..] == marker[from_p..]
    }

    fn in_d_by_length(x: &Word, z: &Word, r: usize, g: &GroupBackend) -> bool {
        g.mul(x, &g.invert(z)).len() < x.len() + r || g.mul(x, z).len() < x.len() + r
    }

    #[test]
    fn markers_match_the_length_definition() {
        let g = f2();
        let ball = g.enumerate_ball(7).unwrap();
        for (z, r) in [("aaaaabaaaaab", 5), ("abaBabAB", 3), ("abaabAbb", 5), ("ab", 5)] {
            let z = g.parse_word(z).unwrap();
            let (m1, m2) = d_markers(&z, r);
            for x in ball.elements() {
                let by_marker = ends_with_marker(&[], x.letters(), &m1) || ends_with_marker(&[], x.letters(), &m2);
                assert_eq!(by_marker, in_d_by_length(x, &z, r, &g), "{x:?}");
            }
        }
    }

    #[test]
    fn runs_of_one_letter_break_separation() {
        let g = f2();
        let z = g.parse_word("aaaaabaaaaab").unwrap();
        let (x, y) = d_separation_violation(&z, 5, &g).unwrap().unwrap();
        assert!(in_d_by_length(&x, &z, 5, &g) && in_d_by_length(&y, &z, 5, &g));
        assert!(g.distance(&x, &y) < 5 && x != y);
    }

    /// Earlier formulation: `p` over the whole of `Ball(k)`.
    fn violation_over_prefix_ball(z: &Word, r: usize, g: &GroupBackend) -> bool {
        let k = suffix_threshold(z.len(), r);
        let steps = g.enumerate_ball(r - 1).unwrap();
        for p in g.enumerate_ball(k).unwrap().elements() {
            let members: Vec<&Word> = steps
                .elements()
                .iter()
                .filter(|a| {
                    let (pl, al) = (p.letters(), a.letters());
                    !(pl.last().is_some() && !al.is_empty() && *pl.last().unwrap() == al[0].inverse())
                        && in_d_by_length(&g.mul(p, a), z, r, g)
                })
                .collect();
            for (i, a) in members.iter().enumerate() {
                for b in &members[i + 1..] {
                    if a.letters().first() != b.letters().first() && a.len() + b.len() < r {
                        return true;
                    }
                }
            }
        }
        false
    }

    #[test]
    fn agrees_with_prefix_ball_formulation() {
        use rand::{Rng, SeedableRng};
        let g = f2();
        let alphabet = g.alphabet();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let len = rng.gen_range(4..=16);
            let raw: Vec<_> = (0..len).map(|_| alphabet[rng.gen_range(0..4)]).collect();
            let z = g.reduce(&raw).unwrap();
            if z.len() < 2 {
                continue;
            }
            let r = rng.gen_range(2..=6);
            assert_eq!(
                d_separation_violation(&z, r, &g).unwrap().is_some(),
                violation_over_prefix_ball(&z, r, &g),
                "{} r={r}",
                g.format_word(&z)
            );
        }
    }

    #[test]
    fn agrees_with_brute_force_on_small_balls() {
        let g = f2();
        let ball = g.enumerate_ball(8).unwrap();
        for (z, r) in [("aaaaabaaaaab", 5), ("abaBabAB", 3), ("aabAbaBB", 3), ("abAB", 2), ("aabaBBab", 3)] {
            let z = g.parse_word(z).unwrap();
            let members: Vec<&Word> = ball.elements().iter().filter(|x| in_d_by_length(x, &z, r, &g)).collect();
            let brute = members
                .iter()
                .enumerate()
                .any(|(i, x)| members[i + 1..].iter().any(|y| g.distance(x, y) < r));
            // Ball(8) is large enough that every witness pattern of these
            // short words fits inside it
            assert_eq!(d_separation_violation(&z, r, &g).unwrap().is_some(), brute, "{z:?}");
        }
    }
}
