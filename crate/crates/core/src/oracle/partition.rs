use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::group::{GroupBackend, Word};
use crate::tiler::{load_region, TilingRegion};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionDefect {
    Uncovered,
    DoublyCovered,
}

/// Outcome of [`independent_partition_check`]; the witness is the least
/// defective core element in shortlex order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionCheck {
    pub partition: bool,
    pub uncovered: usize,
    pub doubly_covered: usize,
    pub witness: Option<String>,
    pub defect: Option<PartitionDefect>,
}

/// Core ball by breadth-first search from the identity over single letters.
fn core_by_bfs(backend: &GroupBackend, radius: usize) -> Result<Vec<Word>> {
    let letters: Vec<Word> = backend
        .alphabet()
        .into_iter()
        .map(|l| backend.reduce(&[l]))
        .collect::<Result<_>>()?;
    let mut seen: HashSet<Word> = HashSet::from([Word::identity()]);
    let mut queue = VecDeque::from([(Word::identity(), 0usize)]);
    let mut out = Vec::new();
    while let Some((x, d)) = queue.pop_front() {
        if d < radius {
            for s in &letters {
                let y = backend.mul(&x, s);
                if seen.insert(y.clone()) {
                    queue.push_back((y, d + 1));
                }
            }
        }
        out.push(x);
    }
    Ok(out)
}

/// Counts, for each core element, the placed tiles containing it.
pub fn independent_partition_check(region: &TilingRegion) -> Result<PartitionCheck> {
    let g = &region.backend;
    let core = core_by_bfs(g, region.core_radius)?;
    let tile: Vec<Word> = match &region.spec {
        Some(spec) => spec.t.clone(),
        None => region.f.clone(),
    };
    let mut hits: HashMap<&Word, usize> = core.iter().map(|x| (x, 0)).collect();
    for p in &region.placements {
        for t in &tile {
            if let Some(h) = hits.get_mut(&g.mul(&p.anchor, t)) {
                *h += 1;
            }
        }
    }
    let mut bad: Vec<(&Word, PartitionDefect)> = hits
        .iter()
        .filter_map(|(x, &h)| match h {
            0 => Some((*x, PartitionDefect::Uncovered)),
            1 => None,
            _ => Some((*x, PartitionDefect::DoublyCovered)),
        })
        .collect();
    bad.sort_by(|a, b| a.0.cmp(b.0));
    let count = |d: PartitionDefect| bad.iter().filter(|(_, k)| *k == d).count();
    Ok(PartitionCheck {
        partition: bad.is_empty(),
        uncovered: count(PartitionDefect::Uncovered),
        doubly_covered: count(PartitionDefect::DoublyCovered),
        witness: bad.first().map(|(x, _)| g.format_word(x)),
        defect: bad.first().map(|(_, d)| *d),
    })
}

/// [`independent_partition_check`] on a serialized region.
pub fn independent_partition_check_json(json: &str) -> Result<PartitionCheck> {
    independent_partition_check(&load_region(json)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::tiler::{build_tiling, BuildOptions};

    fn region() -> TilingRegion {
        let g = GroupBackend::free(2).unwrap();
        let f = vec![Word::identity(), g.parse_word("a").unwrap()];
        build_tiling(&f, 4, &BuildOptions::default(), &g).unwrap()
    }

    #[test]
    fn bfs_matches_ball_sizes() {
        let g = GroupBackend::free(2).unwrap();
        assert_eq!(core_by_bfs(&g, 3).unwrap().len(), 53);
        let s3 = GroupBackend::from_spec("finite:S3").unwrap();
        assert_eq!(core_by_bfs(&s3, 5).unwrap().len(), 6);
    }

    #[test]
    fn pipeline_output_is_a_partition() {
        let c = independent_partition_check(&region()).unwrap();
        assert!(c.partition);
        assert_eq!((c.uncovered, c.doubly_covered, c.witness), (0, 0, None));
    }

    #[test]
    fn defects_give_the_least_witness() {
        let r = region();
        let g = &r.backend;
        let mut dup = r.clone();
        dup.placements.push(r.placements[3].clone());
        let c = independent_partition_check(&dup).unwrap();
        assert_eq!(c.defect, Some(PartitionDefect::DoublyCovered));
        let tile = &r.spec.as_ref().unwrap().t;
        let least = tile
            .iter()
            .map(|t| g.mul(&r.placements[3].anchor, t))
            .filter(|x| x.len() <= 4)
            .min()
            .unwrap();
        assert_eq!(c.witness, Some(g.format_word(&least)));

        let mut gap = r.clone();
        gap.placements.remove(3);
        let c = independent_partition_check(&gap).unwrap();
        assert_eq!(c.defect, Some(PartitionDefect::Uncovered));
        assert_eq!(c.witness, Some(g.format_word(&least)));
    }

    #[test]
    fn malformed_json() {
        assert!(matches!(independent_partition_check_json("[]"), Err(Error::MalformedInput(_))));
    }
}
