use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::separation::d_separation_violation;
use super::{Stage, TileSpec, TilingRegion};
use crate::error::{Error, Result};
use crate::group::{GroupBackend, Word};

const BRUTE_BALL_LIMIT: usize = 60_000;

/// Outcome of [`verify_tiling`]. Every flag is true for a valid region; the
/// first failing check leaves a witness in `counterexample`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub disjoint: bool,
    pub core_covered: bool,
    pub claim_c: bool,
    pub claim_a: bool,
    pub claim_new: bool,
    pub d_separated: bool,
    pub certificate_valid: bool,
    /// Core elements in no tile.
    pub uncovered: usize,
    /// Elements lying in two or more placed tiles.
    pub doubly_covered: usize,
    /// Radius of the ball on which D was scanned pairwise for separation.
    pub d_radius: usize,
    /// Representatives whose backward orbit walk never left C.
    pub full_line_fallbacks: usize,
    pub counterexample: Option<String>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.disjoint
            && self.core_covered
            && self.claim_c
            && self.claim_a
            && self.claim_new
            && self.d_separated
            && self.certificate_valid
    }

    fn fail(&mut self, witness: String) {
        if self.counterexample.is_none() {
            self.counterexample = Some(witness);
        }
    }
}

/// Membership tests written directly from the defining inequalities.
struct Regions<'a> {
    backend: &'a GroupBackend,
    z: Word,
    z_inv: Word,
    v: Word,
    g: Word,
    g_inv: Word,
    r: usize,
    t_inv: Vec<Word>,
    walk_limit: usize,
}

impl<'a> Regions<'a> {
    fn new(spec: &TileSpec, backend: &'a GroupBackend) -> Self {
        let g = backend.mul(&backend.invert(&spec.v), &spec.z);
        Regions {
            backend,
            z: spec.z.clone(),
            z_inv: backend.invert(&spec.z),
            v: spec.v.clone(),
            g_inv: backend.invert(&g),
            g,
            r: spec.r,
            t_inv: spec.t.iter().map(|t| backend.invert(t)).collect(),
            walk_limit: 4 * (backend.word_length(&spec.z) + spec.r),
        }
    }

    fn len(&self, w: &Word) -> usize {
        self.backend.word_length(w)
    }

    fn c(&self, x: &Word) -> bool {
        let xz = self.backend.mul(x, &self.z_inv);
        self.len(&xz) < self.len(x) + self.r
    }

    fn d(&self, x: &Word) -> bool {
        self.c(x) || self.len(&self.backend.mul(x, &self.z)) < self.len(x) + self.r
    }

    /// `Some(true)` if `s ∈ C` sits at even distance from its orbit origin;
    /// `None` if the walk did not terminate.
    fn even_offset(&self, s: &Word) -> Option<bool> {
        let mut parity = true;
        let mut x = s.clone();
        for _ in 0..self.walk_limit {
            x = self.backend.mul(&x, &self.g_inv);
            if !self.c(&x) {
                return Some(parity);
            }
            parity = !parity;
        }
        None
    }

    fn representative(&self, s: &Word, fallbacks: &mut usize) -> bool {
        if !self.c(s) {
            return false;
        }
        match self.even_offset(s) {
            Some(even) => even,
            None => {
                *fallbacks += 1;
                // parity relative to the shortest element of the walk
                let mut best = (s.clone(), 0usize);
                let mut x = s.clone();
                for k in 1..=self.walk_limit {
                    x = self.backend.mul(&x, &self.g_inv);
                    if x < best.0 {
                        best = (x.clone(), k);
                    }
                }
                best.1.is_multiple_of(2)
            }
        }
    }

    fn in_a(&self, x: &Word, fallbacks: &mut usize) -> bool {
        self.t_inv.iter().any(|t| {
            let s = self.backend.mul(&self.backend.mul(x, t), &self.v);
            self.representative(&s, fallbacks)
        })
    }
}

/// Recomputes disjointness, coverage of the core ball, the construction's
/// claims on the recorded placements, and separation of D.
pub fn verify_tiling(region: &TilingRegion) -> Result<VerificationReport> {
    let g = &region.backend;
    let tile_set = region.tile_set();
    if tile_set.is_empty() {
        return Err(Error::MalformedInput("region has an empty tile".into()));
    }
    for p in &region.placements {
        for &l in p.anchor.letters() {
            g.validate_letter(l)?;
        }
    }
    let mut report = VerificationReport {
        disjoint: true,
        core_covered: true,
        claim_c: true,
        claim_a: true,
        claim_new: true,
        d_separated: true,
        certificate_valid: true,
        uncovered: 0,
        doubly_covered: 0,
        d_radius: 0,
        full_line_fallbacks: 0,
        counterexample: None,
    };

    let tiles: Vec<Vec<Word>> = region
        .placements
        .iter()
        .map(|p| tile_set.iter().map(|t| g.mul(&p.anchor, t)).collect())
        .collect();
    let mut owners: HashMap<&Word, Vec<usize>> = HashMap::new();
    for (k, tile) in tiles.iter().enumerate() {
        for x in tile {
            owners.entry(x).or_default().push(k);
        }
    }
    let mut doubles: Vec<&Word> = owners.iter().filter(|(_, o)| o.len() > 1).map(|(x, _)| *x).collect();
    doubles.sort();
    report.doubly_covered = doubles.len();
    if let Some(x) = doubles.first() {
        report.disjoint = false;
        let o = &owners[x];
        report.fail(format!(
            "{} lies in the tiles anchored at {} and {}",
            g.format_word(x),
            g.format_word(&region.placements[o[0]].anchor),
            g.format_word(&region.placements[o[1]].anchor)
        ));
    }

    let core = g.enumerate_ball(region.core_radius)?;
    let missing: Vec<&Word> = core.elements().iter().filter(|x| !owners.contains_key(x)).collect();
    report.uncovered = missing.len();
    if let Some(x) = missing.first() {
        report.core_covered = false;
        report.fail(format!("{} is not covered", g.format_word(x)));
    }

    let Some(spec) = &region.spec else {
        return Ok(report);
    };
    let cert_ok = spec.certificate.z == spec.z && spec.certificate.reverify(g)?;
    if !cert_ok {
        report.certificate_valid = false;
        report.fail(format!("certificate for {} does not re-verify", g.format_word(&spec.z)));
    }
    let regions = Regions::new(spec, g);
    let mut fallbacks = 0;

    // forward closure of C under v⁻¹z, on representatives and on
    // every C-member of the core.
    let mut a_reps = Vec::new();
    for p in region.placements.iter().filter(|p| p.stage == Stage::A) {
        let s = g.mul(&p.anchor, &regions.v);
        let sg = g.mul(&s, &regions.g);
        if !regions.c(&s) || !regions.c(&sg) {
            report.claim_c = false;
            report.fail(format!("pair {{{}, {}}} is not inside C", g.format_word(&s), g.format_word(&sg)));
        } else if !regions.representative(&s, &mut fallbacks) {
            report.claim_c = false;
            report.fail(format!("{} is not a pairing representative", g.format_word(&s)));
        }
        a_reps.push(s);
    }
    for x in core.elements() {
        if regions.c(x) && !regions.c(&g.mul(x, &regions.g)) {
            report.claim_c = false;
            report.fail(format!("{} ∈ C but {}·v⁻¹z ∉ C", g.format_word(x), g.format_word(x)));
        }
    }

    // A-stage tiles pairwise disjoint
    for x in &doubles {
        let a_owners = owners[x]
            .iter()
            .filter(|&&k| region.placements[k].stage == Stage::A)
            .count();
        if a_owners > 1 {
            report.claim_a = false;
            report.fail(format!("A-stage tiles overlap at {}", g.format_word(x)));
            break;
        }
    }

    // greedy tiles avoid A and each other
    for (k, p) in region.placements.iter().enumerate() {
        if p.stage == Stage::A {
            continue;
        }
        let b = g.mul(&p.anchor, &regions.z);
        if regions.in_a(&b, &mut fallbacks) {
            report.claim_new = false;
            report.fail(format!("greedy generator {} lies in A", g.format_word(&b)));
            continue;
        }
        for x in &tiles[k] {
            let clash = owners[x].iter().any(|&o| o != k);
            if clash || regions.in_a(x, &mut fallbacks) {
                report.claim_new = false;
                report.fail(format!(
                    "greedy tile at {} meets another tile at {}",
                    g.format_word(&p.anchor),
                    g.format_word(x)
                ));
                break;
            }
        }
    }
    report.full_line_fallbacks = fallbacks;

    // exact check, then a direct pairwise scan of a ball as a cross-check
    let radius = brute_radius(g, region.work_radius.min(g.word_length(&spec.z) + spec.r + 2));
    report.d_radius = radius;
    let violation = match generic_separation_violation(&regions, radius)? {
        Some(pair) => Some(pair),
        None => d_separation_violation(&spec.z, spec.r, g)?,
    };
    if let Some((x, y)) = violation {
        report.d_separated = false;
        report.fail(format!(
            "{} and {} lie in D at distance {}",
            g.format_word(&x),
            g.format_word(&y),
            g.distance(&x, &y)
        ));
    }
    Ok(report)
}

/// Largest radius up to `cap` whose ball stays within the scan budget.
fn brute_radius(g: &GroupBackend, cap: usize) -> usize {
    let mut total = 0;
    for (radius, sphere) in g.spheres().enumerate().take(cap + 1) {
        total += sphere.len();
        if total > BRUTE_BALL_LIMIT {
            return radius.saturating_sub(1);
        }
    }
    cap
}

fn generic_separation_violation(regions: &Regions, radius: usize) -> Result<Option<(Word, Word)>> {
    let g = regions.backend;
    let ball = g.enumerate_ball(radius)?;
    let steps = g.enumerate_ball(regions.r - 1)?;
    for x in ball.elements().iter().filter(|x| regions.d(x)) {
        for a in steps.nontrivial() {
            let y = g.mul(x, a);
            if g.word_length(&y) <= radius && regions.d(&y) {
                return Ok(Some((x.clone(), y)));
            }
        }
    }
    Ok(None)
}
