use super::{GroupBackend, Word};
use crate::error::{Error, Result};

/// Ball enumeration refuses to materialise more elements than this.
pub const DEFAULT_BALL_BUDGET: usize = 5_000_000;

/// All elements of word length at most `radius`, in length-lex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    radius: usize,
    elements: Vec<Word>,
    /// `sphere_starts[k]` is the index of the first element of length `k`.
    sphere_starts: Vec<usize>,
}

impl Ball {
    pub(crate) fn enumerate(backend: &GroupBackend, radius: usize, budget: usize) -> Result<Ball> {
        let mut elements = Vec::new();
        let mut sphere_starts = Vec::with_capacity(radius + 1);
        for (k, sphere) in backend.spheres().take(radius + 1).enumerate() {
            if elements.len() + sphere.len() > budget {
                return Err(Error::Capacity {
                    radius: k.saturating_sub(1),
                    elements: elements.len(),
                    budget,
                });
            }
            sphere_starts.push(elements.len());
            elements.extend(sphere);
        }
        // finite groups run out of spheres early
        while sphere_starts.len() < radius + 1 {
            sphere_starts.push(elements.len());
        }
        Ok(Ball {
            radius,
            elements,
            sphere_starts,
        })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn elements(&self) -> &[Word] {
        &self.elements
    }

    pub fn into_elements(self) -> Vec<Word> {
        self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn sphere(&self, k: usize) -> &[Word] {
        if k > self.radius {
            return &[];
        }
        let end = self
            .sphere_starts
            .get(k + 1)
            .copied()
            .unwrap_or(self.elements.len());
        &self.elements[self.sphere_starts[k]..end]
    }

    /// Elements other than the identity.
    pub fn nontrivial(&self) -> &[Word] {
        &self.elements[1.min(self.elements.len())..]
    }
}

/// Streams spheres of radius 0, 1, 2, … without materialising the ball.
/// Each sphere is produced in lexicographic order, so the concatenation is
/// length-lex.
pub struct SphereWalker<'a> {
    backend: &'a GroupBackend,
    current: Option<Vec<Word>>,
    radius: usize,
}

impl<'a> SphereWalker<'a> {
    pub(super) fn new(backend: &'a GroupBackend) -> Self {
        SphereWalker {
            backend,
            current: None,
            radius: 0,
        }
    }
}

impl Iterator for SphereWalker<'_> {
    type Item = Vec<Word>;

    fn next(&mut self) -> Option<Vec<Word>> {
        let backend = self.backend;
        let next = match (&self.current, backend.finite_table()) {
            (_, Some(_)) => {
                let k = self.radius;
                let sphere: Vec<Word> = backend
                    .finite_lengths()
                    .iter()
                    .enumerate()
                    .filter(|&(_, &d)| d == k)
                    .map(|(x, _)| backend.reduce_valid([super::Letter::new(x as u32, false)]))
                    .collect();
                if sphere.is_empty() {
                    return None;
                }
                sphere
            }
            (None, None) => vec![Word::identity()],
            (Some(prev), None) => {
                let alphabet = backend.alphabet();
                let mut sphere = Vec::new();
                // A normal form of length n has a unique normal-form prefix of
                // length n-1, so extending the previous sphere in order visits
                // every element once, in lexicographic order.
                for w in prev {
                    for &l in &alphabet {
                        if backend.extends_normally(w, l) {
                            let mut letters = w.letters().to_vec();
                            letters.push(l);
                            sphere.push(Word::from_normal_letters(letters));
                        }
                    }
                }
                sphere
            }
        };
        self.radius += 1;
        self.current = Some(next.clone());
        Some(next)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroupTable;
    use std::collections::{HashSet, VecDeque};

    /// Independent BFS over the Cayley graph using right multiplication by
    /// alphabet letters, deduplicating by normal form.
    fn bfs_ball(g: &GroupBackend, radius: usize) -> Vec<(Word, usize)> {
        let mut seen = HashSet::from([Word::identity()]);
        let mut out = vec![(Word::identity(), 0)];
        let mut queue = VecDeque::from([(Word::identity(), 0usize)]);
        while let Some((w, d)) = queue.pop_front() {
            if d == radius {
                continue;
            }
            for l in g.alphabet() {
                let x = g.reduce(&[w.letters(), &[l]].concat()).unwrap();
                if seen.insert(x.clone()) {
                    out.push((x.clone(), d + 1));
                    queue.push_back((x, d + 1));
                }
            }
        }
        out
    }

    #[test]
    fn free_ball_examples() {
        let g = GroupBackend::free(2).unwrap();
        let b1 = g.enumerate_ball(1).unwrap();
        let s: Vec<String> = b1.elements().iter().map(|w| g.format_word(w)).collect();
        assert_eq!(s, ["1", "a", "A", "b", "B"]);
        let b2 = g.enumerate_ball(2).unwrap();
        assert_eq!(b2.len(), 17);
        assert_eq!([b2.sphere(0).len(), b2.sphere(1).len(), b2.sphere(2).len()], [1, 4, 12]);
        let z = GroupBackend::integers();
        assert_eq!(z.enumerate_ball(3).unwrap().len(), 7);
    }

    #[test]
    fn balls_match_bfs_oracle() {
        let backends = [
            GroupBackend::free(2).unwrap(),
            GroupBackend::free_product_cyclic(vec![2, 3]).unwrap(),
            GroupBackend::free_product_cyclic(vec![4, 5, 2]).unwrap(),
            GroupBackend::integers(),
        ];
        for g in &backends {
            let ball = g.enumerate_ball(5).unwrap();
            let oracle = bfs_ball(g, 5);
            assert_eq!(ball.len(), oracle.len());
            let mut sorted = ball.elements().to_vec();
            sorted.sort();
            assert_eq!(sorted, ball.elements(), "length-lex order");
            for (w, d) in oracle {
                assert_eq!(g.word_length(&w), d);
                assert!(ball.elements().binary_search(&w).is_ok());
            }
        }
    }

    #[test]
    fn finite_ball_is_bfs_layers() {
        let (t, gens) = FiniteGroupTable::symmetric(4).unwrap();
        let g = GroupBackend::finite(t, Some(gens)).unwrap();
        let ball = g.enumerate_ball(100).unwrap();
        assert_eq!(ball.len(), 24);
        for w in ball.elements() {
            let k = g.word_length(w);
            assert!(ball.sphere(k).contains(w));
        }
    }

    #[test]
    fn capacity_error_names_radius() {
        let g = GroupBackend::free(2).unwrap();
        match g.enumerate_ball_with_budget(10, 100) {
            Err(Error::Capacity { radius, .. }) => assert_eq!(radius, 3),
            other => panic!("expected capacity error, got {other:?}"),
        }
    }
}
