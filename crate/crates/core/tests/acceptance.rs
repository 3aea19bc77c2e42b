//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use monotile::boundary::{apply_boundary, fix_relation, lox_endpoint, lox_product_threshold, Sign};
use monotile::oracle::{
    brute_margin_table, d_separation_scan, exact_cover_search, independent_partition_check, CoverSolution,
    FiniteGroupTable,
};
use monotile::swinger::{certify_swinger_tree, find_swinger, SearchStrategy, Verdict};
use monotile::tiler::{build_tiling, d_separation_violation, BuildOptions, Stage, TilingRegion};
use monotile::{GroupBackend, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn f2() -> GroupBackend {
    GroupBackend::free(2).unwrap()
}

fn random_word(g: &GroupBackend, rng: &mut ChaCha8Rng, max_len: usize) -> Word {
    let alphabet = g.alphabet();
    loop {
        let len = rng.gen_range(1..=max_len);
        let raw: Vec<_> = (0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect();
        let w = g.reduce(&raw).unwrap();
        if !w.is_identity() {
            return w;
        }
    }
}

fn words(g: &GroupBackend, s: &[&str]) -> Vec<Word> {
    s.iter().map(|w| g.parse_word(w).unwrap()).collect()
}

/// The region of criterion 1 and the time it took to build.
fn criterion_1_region() -> (TilingRegion, Duration) {
    let g = f2();
    let start = Instant::now();
    let region = build_tiling(&words(&g, &["1", "a"]), 8, &BuildOptions::default(), &g).unwrap();
    (region, start.elapsed())
}

fn criterion_1(region: &TilingRegion, elapsed: Duration) -> Outcome {
    let g = &region.backend;
    let spec = region.spec.as_ref().unwrap();
    let report = region.report.as_ref().unwrap();
    let check = independent_partition_check(region).unwrap();
    let passed = spec.r == 5
        && spec.certificate.verdict == Verdict::Certified
        && spec.certificate.reverify(g).unwrap()
        && g.word_length(&spec.z) >= 10
        && report.all_passed()
        && report.uncovered == 0
        && report.doubly_covered == 0
        && check.partition
        && check.uncovered == 0
        && check.doubly_covered == 0
        && elapsed < Duration::from_secs(120);
    outcome(
        passed,
        format!(
            "z = {} (|z| = {}), {} placements, verify uncovered/double = {}/{}, oracle uncovered/double = {}/{}, {:.2?}",
            g.format_word(&spec.z),
            spec.z.len(),
            region.placements.len(),
            report.uncovered,
            report.doubly_covered,
            check.uncovered,
            check.doubly_covered,
            elapsed
        ),
    )
}

/// Radius of the literal pairwise scan; the whole ball of radius `|z| + 7`
/// has about 10^12 elements, so the rest is covered by the exact check.
const LITERAL_SCAN_RADIUS: usize = 11;

fn criterion_2(region: &TilingRegion) -> Outcome {
    let g = &region.backend;
    let spec = region.spec.as_ref().unwrap();
    let target = g.word_length(&spec.z) + 7;
    let exact = d_separation_violation(&spec.z, 5, g).unwrap();
    let scan = d_separation_scan(&spec.z, 5, LITERAL_SCAN_RADIUS.min(target), g).unwrap();
    outcome(
        exact.is_none() && scan.violation.is_none(),
        format!(
            "target Ball({target}); exact check over the whole group: {}; literal scan of Ball({}): {} members, {} pairs, {} violations",
            if exact.is_none() { "no violation" } else { "violation" },
            scan.radius,
            scan.members,
            scan.pairs_checked,
            usize::from(scan.violation.is_some())
        ),
    )
}

fn criterion_3() -> Outcome {
    let g = f2();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut contradictions, mut counts) = (0, [0usize; 4]);
    let candidates = 120;
    for _ in 0..candidates {
        let z = random_word(&g, &mut rng, 12);
        let r = rng.gen_range(1..=3);
        let cert = certify_swinger_tree(&z, r, &g).unwrap();
        let table = brute_margin_table(&z, r, 50, &g).unwrap();
        let ok = match cert.verdict {
            Verdict::Certified => {
                counts[0] += 1;
                table.all_positive()
            }
            Verdict::Refuted => {
                counts[1] += 1;
                let w = cert.witness.as_ref().unwrap();
                w.margin <= 0 && table.get(&g.format_word(&w.b), w.i, w.j, w.m) == Some(w.margin)
            }
            Verdict::InconclusivePositive => {
                counts[2] += 1;
                true
            }
            Verdict::Inconclusive => {
                counts[3] += 1;
                true
            }
        };
        if !ok {
            contradictions += 1;
        }
    }
    outcome(
        contradictions == 0,
        format!(
            "{candidates} candidates: {} certified, {} refuted, {} inconclusive; {contradictions} contradictions",
            counts[0],
            counts[1],
            counts[2] + counts[3]
        ),
    )
}

fn criterion_4() -> Outcome {
    let g = GroupBackend::integers();
    let mut refuted_at_1 = 0;
    for n in (-20i64..=20).filter(|&n| n != 0) {
        let z = g.parse_word(&n.to_string()).unwrap();
        let cert = certify_swinger_tree(&z, 1, &g).unwrap();
        if cert.verdict == Verdict::Refuted && cert.witness.is_some_and(|w| w.m == 1) {
            refuted_at_1 += 1;
        }
    }
    let budgets = [1u64, 100, 10_000];
    let none_found = budgets.iter().all(|&b| {
        find_swinger(1, 1, SearchStrategy::Enumerate, b, &g).unwrap().is_none()
            && find_swinger(1, 1, SearchStrategy::Random { seed: b }, b, &g).unwrap().is_none()
    });
    outcome(
        refuted_at_1 == 40 && none_found,
        format!("{refuted_at_1}/40 refuted at m = 1; search found nothing at budgets {budgets:?}"),
    )
}

/// Pair form and tile disjointness, checked directly on the placements.
fn claims_hold(region: &TilingRegion) -> Result<(), String> {
    let g = &region.backend;
    let report = region.report.as_ref().unwrap();
    if !(report.claim_c && report.claim_a && report.claim_new) {
        return Err(report.counterexample.clone().unwrap_or_default());
    }
    let Some(spec) = region.spec.as_ref() else { return Ok(()) };
    for pair in &region.pairing.pairs {
        if pair.partner != g.mul(&pair.representative, spec.g()) {
            return Err("pair not of the form {s, s·v⁻¹z}".into());
        }
        if !spec.in_c(&pair.representative, g) || !spec.in_c(&pair.partner, g) {
            return Err("pair member outside C".into());
        }
    }
    let mut owner: std::collections::HashMap<Word, usize> = std::collections::HashMap::new();
    for (k, p) in region.placements.iter().enumerate() {
        for x in region.tile(&p.anchor) {
            if let Some(&other) = owner.get(&x) {
                let stages = (region.placements[other].stage, p.stage);
                return Err(format!("{} covered twice, stages {stages:?}", g.format_word(&x)));
            }
            owner.insert(x, k);
        }
    }
    if region.placements.iter().any(|p| matches!(p.stage, Stage::A)) && region.pairing.pairs.is_empty() {
        return Err("A-stage tiles without pairs".into());
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    let g = f2();
    let sets: [&[&str]; 3] = [&["1", "a"], &["1", "b", "ab"], &["1", "a", "aa"]];
    let mut regions = 0;
    let mut pairs = 0;
    for f in sets {
        for core in 4..=8 {
            let region = match build_tiling(&words(&g, f), core, &BuildOptions::default(), &g) {
                Ok(r) => r,
                Err(e) => return outcome(false, format!("F = {f:?}, core {core}: {e}")),
            };
            if let Err(why) = claims_hold(&region) {
                return outcome(false, format!("F = {f:?}, core {core}: {why}"));
            }
            regions += 1;
            pairs += region.pairing.pairs.len();
        }
    }
    outcome(true, format!("{regions} regions, {pairs} pairs, zero violations"))
}

fn criterion_6() -> Outcome {
    let g = f2();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut overlaps = 0;
    for _ in 0..10_000 {
        let (x, y) = (random_word(&g, &mut rng, 8), random_word(&g, &mut rng, 8));
        if fix_relation(&x, &y, &g).is_err() {
            overlaps += 1;
        }
    }
    let (mut applicable, mut finite) = (0, 0);
    for _ in 0..1_000 {
        let (h, x) = (random_word(&g, &mut rng, 6), random_word(&g, &mut rng, 6));
        let plus = apply_boundary(&h, &lox_endpoint(&x, Sign::Plus, &g).unwrap(), &g).unwrap();
        if plus == lox_endpoint(&x, Sign::Minus, &g).unwrap() {
            continue;
        }
        applicable += 1;
        if matches!(lox_product_threshold(&h, &x, 64, &g), Ok(Some(_))) {
            finite += 1;
        }
    }
    outcome(
        overlaps == 0 && finite == applicable,
        format!("10000 pairs, {overlaps} one-point overlaps; threshold finite in {finite}/{applicable} applicable cases"),
    )
}

/// Hand check: the six translates of `tile` in Z/6, listed explicitly.
fn z6_translates(tile: &[u32]) -> Vec<Vec<u32>> {
    (0..6)
        .map(|t| {
            let mut v: Vec<u32> = tile.iter().map(|s| (s + t) % 6).collect();
            v.sort_unstable();
            v
        })
        .collect()
}

fn criterion_7() -> Outcome {
    let (z6, _) = FiniteGroupTable::cyclic(6).unwrap();
    let two = exact_cover_search(&z6, &[0, 1]).unwrap();
    let three = exact_cover_search(&z6, &[0, 1, 3]).unwrap();
    // independent: {0,1,3} would need its complement {2,4,5} to be a translate
    let hand_no_tiling = !z6_translates(&[0, 1, 3]).contains(&vec![2, 4, 5]);
    let hand_two = (CoverSolution { translates: vec![0, 2, 4] }).is_exact(&z6, &[0, 1]);
    let mut intervals = 0;
    let mut interval_failures = 0;
    for n in 1..=24usize {
        let (t, _) = FiniteGroupTable::cyclic(n).unwrap();
        for k in (1..=n).filter(|k| n % k == 0) {
            intervals += 1;
            let tile: Vec<u32> = (0..k as u32).collect();
            let expected: Vec<u32> = (0..n as u32).step_by(k).collect();
            if exact_cover_search(&t, &tile).unwrap().map(|s| s.translates) != Some(expected) {
                interval_failures += 1;
            }
        }
    }
    let passed = two.as_ref().map(|s| s.translates.clone()) == Some(vec![0, 2, 4])
        && three.is_none()
        && hand_no_tiling
        && hand_two
        && interval_failures == 0;
    outcome(
        passed,
        format!(
            "Z/6 {{0,1}} -> {:?}; {{0,1,3}} -> {}; hand check agrees: {}; {intervals} interval tiles, {interval_failures} failures",
            two.map(|s| s.translates),
            if three.is_none() { "none" } else { "some" },
            hand_no_tiling && hand_two
        ),
    )
}

fn canonical_core(region: &TilingRegion) -> String {
    let g = &region.backend;
    let mut lines: Vec<String> = region
        .core_placements()
        .iter()
        .map(|p| format!("{} {:?}", g.format_word(&p.anchor), p.stage))
        .collect();
    lines.sort();
    lines.join("\n")
}

fn criterion_8(region: &TilingRegion) -> Outcome {
    let g = &region.backend;
    let base = canonical_core(region);
    for extra in 1..=3 {
        let options = BuildOptions {
            work_radius: Some(region.work_radius + extra),
            ..Default::default()
        };
        let wider = build_tiling(&region.f, region.core_radius, &options, g).unwrap();
        if canonical_core(&wider) != base {
            return outcome(false, format!("core placements changed at work radius + {extra}"));
        }
    }
    outcome(true, format!("{} core placements unchanged at work radius + 1, + 2, + 3", region.core_placements().len()))
}

fn criterion_9() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let region = dir.path().join("region.json");
    let region = region.to_str().unwrap();
    let bin = env!("CARGO_BIN_EXE_monotile");
    // the tile command runs first so later commands can read its file
    let commands: Vec<Vec<&str>> = vec![
        vec!["tile", "--set", "1,a", "--core-radius", "4", "--seed", "7", "--out", region],
        vec!["ball", "--core-radius", "3"],
        vec!["swinger", "find", "-r", "2", "--min-length", "6", "--seed", "11", "--budget", "2000"],
        vec!["swinger", "find", "-r", "1", "--min-length", "2"],
        vec!["swinger", "check", "-r", "1", "--z", "abAB"],
        vec!["swinger", "check", "-r", "1", "--z", "a"],
        vec!["tile", "--set", "1,b,ab", "--core-radius", "2", "--seed", "3"],
        vec!["verify", region],
        vec!["oracle", "cover", "--group", "finite:Z6", "--set", "0,1"],
        vec!["oracle", "cover", "--group", "finite:Z6", "--set", "0,1,3"],
        vec!["oracle", "extend", "--group", "finite:S4", "--set", "0,1,5"],
        vec!["export", "dot", region],
        vec!["export", "graphml", region],
    ];
    for args in &commands {
        let runs: Vec<Vec<u8>> = (0..3)
            .map(|_| {
                let out = Command::new(bin).args(args).output().unwrap();
                let mut bytes = out.stdout;
                if let Some(i) = args.iter().position(|a| *a == "--out") {
                    bytes.extend(std::fs::read(args[i + 1]).unwrap());
                }
                bytes.extend(out.status.code().unwrap_or(-1).to_string().bytes());
                bytes
            })
            .collect();
        if runs[0] != runs[1] || runs[1] != runs[2] {
            return outcome(false, format!("output differs across runs: {}", args.join(" ")));
        }
    }
    outcome(true, format!("{} commands byte-identical over 3 runs", commands.len()))
}

fn main() {
    let (region, elapsed) = criterion_1_region();
    let results = [
        ("1", "end-to-end tiling of Ball(8) for F = {1, a}", criterion_1(&region, elapsed)),
        ("2", "D is 5-separated", criterion_2(&region)),
        ("3", "certification vs brute-force margins", criterion_3()),
        ("4", "no swingers in the integers", criterion_4()),
        ("5", "pairing and claims on constructed regions", criterion_5()),
        ("6", "boundary lemmas on random pairs", criterion_6()),
        ("7", "finite exact-cover oracle", criterion_7()),
        ("8", "faithfulness under larger work radius", criterion_8(&region)),
        ("9", "CLI determinism", criterion_9()),
    ];
    let mut failed = Vec::new();
    for (id, name, o) in &results {
        println!("{} criterion {id}: {name} ({})", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        if !o.passed {
            failed.push(*id);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
