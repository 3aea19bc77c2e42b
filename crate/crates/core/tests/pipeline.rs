use std::collections::BTreeSet;

use monotile::oracle::{d_separation_scan, independent_partition_check};
use monotile::tiler::{build_tiling, d_separation_violation, verify_tiling, BuildOptions, Placement, TilingRegion};
use monotile::{GroupBackend, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn f2() -> GroupBackend {
    GroupBackend::free(2).unwrap()
}

fn set(g: &GroupBackend, s: &[&str]) -> Vec<Word> {
    s.iter().map(|w| g.parse_word(w).unwrap()).collect()
}

fn build(g: &GroupBackend, f: &[&str], core: usize) -> TilingRegion {
    build_tiling(&set(g, f), core, &BuildOptions::default(), g).unwrap()
}

/// Tiles meeting the core, as sets of elements.
fn core_tiles(region: &TilingRegion) -> BTreeSet<Vec<Word>> {
    let g = &region.backend;
    region
        .core_placements()
        .iter()
        .map(|p| {
            let mut t = region.tile(&p.anchor);
            t.sort();
            t
        })
        .filter(|t| t.iter().any(|x| g.word_length(x) <= region.core_radius))
        .collect()
}

#[test]
fn tile_counts_sum_to_the_ball() {
    let g = f2();
    for (f, core) in [(&["1", "a"][..], 5), (&["1", "b", "ab"][..], 4), (&["1", "a", "aa"][..], 3)] {
        let region = build(&g, f, core);
        let inside: usize = region
            .placements
            .iter()
            .map(|p| region.tile(&p.anchor).iter().filter(|x| g.word_length(x) <= core).count())
            .sum();
        assert_eq!(inside, g.enumerate_ball(core).unwrap().len());
    }
}

#[test]
fn d_is_separated_and_c_is_forward_closed() {
    let g = f2();
    let region = build(&g, &["1", "a"], 3);
    let spec = region.spec.as_ref().unwrap();
    assert_eq!(d_separation_violation(&spec.z, spec.r, &g).unwrap(), None);
    let scan = d_separation_scan(&spec.z, spec.r, 10, &g).unwrap();
    assert!(scan.members > 0);
    assert_eq!(scan.violation, None);
    let step = spec.g();
    for x in g.enumerate_ball(9).unwrap().elements() {
        if spec.in_c(x, &g) {
            assert!(spec.in_d(x, &g));
            assert!(spec.in_c(&g.mul(x, step), &g));
        }
    }
}

#[test]
fn larger_work_radius_keeps_core_placements() {
    let g = f2();
    let f = set(&g, &["1", "b", "ab"]);
    let base = build_tiling(&f, 3, &BuildOptions::default(), &g).unwrap();
    for extra in 1..=3 {
        let options = BuildOptions {
            work_radius: Some(base.work_radius + extra),
            ..Default::default()
        };
        let wider = build_tiling(&f, 3, &options, &g).unwrap();
        assert_eq!(wider.core_placements(), base.core_placements());
    }
}

#[test]
fn translated_sets_give_the_same_tiles() {
    let g = f2();
    let region = build(&g, &["1", "a"], 3);
    for shift in ["b", "B", "ab"] {
        let s = g.parse_word(shift).unwrap();
        let moved: Vec<Word> = set(&g, &["1", "a"]).iter().map(|x| g.mul(&s, x)).collect();
        let other = build_tiling(&moved, 3, &BuildOptions::default(), &g).unwrap();
        assert_eq!(core_tiles(&other), core_tiles(&region), "shift {shift}");
    }
}

#[test]
fn serialization_is_deterministic() {
    let g = f2();
    let a = build(&g, &["1", "b", "ab"], 3).to_document(None).to_json().unwrap();
    let b = build(&g, &["1", "b", "ab"], 3).to_document(None).to_json().unwrap();
    assert_eq!(a, b);
}

#[test]
fn partition_checkers_agree_on_corrupted_regions() {
    let g = f2();
    let regions = [build(&g, &["1", "a"], 3), build(&g, &["1", "b", "ab"], 2), build(&g, &["b"], 2)];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let agree = |r: &TilingRegion| {
        let report = verify_tiling(r).unwrap();
        let check = independent_partition_check(r).unwrap();
        assert_eq!(report.disjoint && report.core_covered, check.partition);
        check.partition
    };
    for r in &regions {
        assert!(agree(r));
    }
    let mut broken = 0;
    for k in 0..50 {
        let mut r = regions[k % regions.len()].clone();
        let i = rng.gen_range(0..r.placements.len());
        match rng.gen_range(0..3) {
            0 => {
                r.placements.remove(i);
            }
            1 => {
                let p = r.placements[i].clone();
                r.placements.push(p);
            }
            _ => {
                let letter = g.parse_word(["a", "A", "b", "B"][rng.gen_range(0..4)]).unwrap();
                let p = &r.placements[i];
                r.placements[i] = Placement { anchor: g.mul(&p.anchor, &letter), stage: p.stage };
            }
        }
        if !agree(&r) {
            broken += 1;
        }
    }
    assert!(broken > 25);
}
