//! The explicit tile construction: given a finite `F`, find an r-swinger
//! `z` and tile a ball of the group by left translates of `T = F ∪ {z}`.
//!
//! With `g = v⁻¹z` the set `C = {x : |xz⁻¹| < |x| + r}` is forward closed
//! under right multiplication by `g`, so every `g`-orbit meets `C` in a ray
//! `o, og, og², …` (or a whole line). Pairing the ray as `{og^{2n}, og^{2n+1}}`
//! picks the representatives `C′`, and the tiles `s·v⁻¹·T` for `s ∈ C′` form
//! the A-stage. Whatever is left is covered greedily in length-lex order by
//! tiles `b·z⁻¹·T`, which contain `b`.
//!
//! Everything here is local: whether `x` lies in an A-stage tile is decided
//! by the at most `|T|` candidates `s = x·t⁻¹·v`, and whether `s` is a
//! representative by walking its orbit backwards until it leaves `C`. A
//! region therefore only ever touches elements near its core ball.

mod document;
mod export;
mod separation;
mod verify;

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::group::{GroupBackend, Word};
use crate::swinger::{
    certify_swinger_tree, check_swinger_bounded, find_swinger_with, SearchStrategy, SwingerCertificate, Verdict,
    EMPIRICAL_M_MAX,
};

pub use document::{load_region, PairingDocument, PlacementDocument, Provenance, TilingDocument};
pub use export::{export_dot, export_graphml};
pub use separation::{d_markers, d_separation_violation, suffix_threshold};
pub use verify::{verify_tiling, VerificationReport};

/// Default number of swinger candidates examined while preparing a tile.
pub const DEFAULT_TILE_SEARCH_BUDGET: u64 = 1_000_000;

/// The data of one run of the construction.
#[derive(Clone, Debug, PartialEq)]
pub struct TileSpec {
    /// Normalised so that it contains the identity; sorted length-lex.
    pub f: Vec<Word>,
    pub v: Word,
    /// `max |g|` over `F ∪ F⁻¹`.
    pub m: usize,
    pub r: usize,
    pub z: Word,
    /// Lower bound on `|z|`, `⌈2r + 4δ⌉`.
    pub big_r: usize,
    /// `F ∪ {z}`, sorted length-lex.
    pub t: Vec<Word>,
    pub certificate: SwingerCertificate,
    z_inv: Word,
    g: Word,
    g_inv: Word,
    t_inv: Vec<Word>,
}

/// The outcome of normalising `F`: either a real spec, or `F` was a single
/// element and is already a tile.
#[derive(Clone, Debug, PartialEq)]
pub enum PreparedTile {
    Trivial,
    Spec(Box<TileSpec>),
}

/// How the swinger for a tile is obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwingerParams {
    pub strategy: SearchStrategy,
    pub budget: u64,
    /// Use this swinger (after certification) instead of searching.
    pub z: Option<Word>,
    /// Accept bounded-empirical certificates on non-tree backends.
    pub allow_empirical: bool,
}

impl Default for SwingerParams {
    fn default() -> Self {
        SwingerParams {
            strategy: SearchStrategy::Enumerate,
            budget: DEFAULT_TILE_SEARCH_BUDGET,
            z: None,
            allow_empirical: false,
        }
    }
}

/// Sorts, deduplicates and left-translates a raw set so its length-lex least
/// element becomes the identity.
pub fn normalize_set(f_raw: &[Word], backend: &GroupBackend) -> Result<Vec<Word>> {
    if f_raw.is_empty() {
        return Err(Error::MalformedInput("F must be nonempty".into()));
    }
    let mut f: Vec<Word> = f_raw.to_vec();
    f.sort();
    f.dedup();
    let shift = backend.invert(&f[0]);
    let mut f: Vec<Word> = f.iter().map(|x| backend.mul(&shift, x)).collect();
    f.sort();
    Ok(f)
}

pub fn separation_constant(r: usize, delta: f64) -> usize {
    (2.0 * r as f64 + 4.0 * delta).ceil() as usize
}

impl TileSpec {
    /// Assembles a spec and checks its invariants. The certificate is taken
    /// at face value here; [`verify_tiling`] re-derives it.
    pub fn new(f: Vec<Word>, z: Word, certificate: SwingerCertificate, backend: &GroupBackend) -> Result<Self> {
        let bad = |why: String| Err(Error::MalformedInput(why));
        if f.len() < 2 || !f.contains(&Word::identity()) {
            return bad("F must contain the identity and at least one other element".into());
        }
        let mut sorted = f.clone();
        sorted.sort();
        sorted.dedup();
        if sorted != f {
            return bad("F must be sorted length-lex without repeats".into());
        }
        let v = f[1].clone();
        let m = f.iter().map(|x| backend.word_length(x)).max().unwrap_or(0);
        let r = 4 * m + 1;
        let big_r = separation_constant(r, backend.delta());
        if backend.word_length(&z) < big_r {
            return bad(format!("|z| = {} is below R = {big_r}", backend.word_length(&z)));
        }
        if f.contains(&z) {
            return bad("z must not lie in F".into());
        }
        if certificate.z != z || certificate.r != r {
            return bad("certificate does not match (z, r)".into());
        }
        if !matches!(certificate.verdict, Verdict::Certified | Verdict::InconclusivePositive) {
            return bad("certificate does not support z as an r-swinger".into());
        }
        let z_inv = backend.invert(&z);
        let g = backend.mul(&backend.invert(&v), &z);
        if !backend.has_growing_powers(&g, 16) {
            return Err(Error::Precondition(format!(
                "v⁻¹z = {} does not have infinite order",
                backend.format_word(&g)
            )));
        }
        let g_inv = backend.invert(&g);
        let mut t = f.clone();
        t.push(z.clone());
        t.sort();
        let t_inv = t.iter().map(|x| backend.invert(x)).collect();
        Ok(TileSpec {
            f,
            v,
            m,
            r,
            z,
            big_r,
            t,
            certificate,
            z_inv,
            g,
            g_inv,
            t_inv,
        })
    }

    /// `v⁻¹z`.
    pub fn g(&self) -> &Word {
        &self.g
    }

    pub fn back_bound(&self, backend: &GroupBackend) -> usize {
        4 * (backend.word_length(&self.z) + self.r)
    }

    pub fn in_c(&self, x: &Word, backend: &GroupBackend) -> bool {
        backend.word_length(&backend.mul(x, &self.z_inv)) < backend.word_length(x) + self.r
    }

    pub fn in_d(&self, x: &Word, backend: &GroupBackend) -> bool {
        self.in_c(x, backend)
            || backend.word_length(&backend.mul(x, &self.z)) < backend.word_length(x) + self.r
    }

    /// Where `s ∈ C` sits on its orbit under `g`.
    pub fn orbit_position(&self, s: &Word, backend: &GroupBackend) -> Result<OrbitPosition> {
        if !self.in_c(&backend.mul(s, &self.g), backend) {
            return Err(Error::ConsistencyViolation(format!(
                "{} lies in C but {}·v⁻¹z does not",
                backend.format_word(s),
                backend.format_word(s)
            )));
        }
        let bound = self.back_bound(backend);
        let mut x = s.clone();
        let mut seen = vec![s.clone()];
        for k in 0..bound {
            let prev = backend.mul(&x, &self.g_inv);
            if !self.in_c(&prev, backend) {
                return Ok(OrbitPosition { steps: k, full_line: false });
            }
            x = prev;
            seen.push(x.clone());
        }
        // never left C: anchor parity at the shortest orbit element seen
        let (k, _) = seen
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.cmp(b.1))
            .expect("orbit window is nonempty");
        Ok(OrbitPosition { steps: k, full_line: true })
    }

    /// Whether `s` belongs to the representative set `C′`.
    pub fn is_representative(&self, s: &Word, backend: &GroupBackend) -> Result<bool> {
        Ok(self.in_c(s, backend) && self.orbit_position(s, backend)?.steps % 2 == 0)
    }

    /// The representative whose A-stage tile contains `x`, if any.
    pub fn a_tile_of(&self, x: &Word, backend: &GroupBackend) -> Result<Option<Word>> {
        let mut found = None;
        for t_inv in &self.t_inv {
            let s = backend.mul_all(&[x, t_inv, &self.v]);
            if self.is_representative(&s, backend)? {
                if found.as_ref().is_some_and(|f: &Word| f != &s) {
                    return Err(Error::ConsistencyViolation(format!(
                        "{} lies in two A-stage tiles",
                        backend.format_word(x)
                    )));
                }
                found = Some(s);
            }
        }
        Ok(found)
    }

    /// Elements of the tile `anchor·T`.
    pub fn tile(&self, anchor: &Word, backend: &GroupBackend) -> Vec<Word> {
        self.t.iter().map(|t| backend.mul(anchor, t)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitPosition {
    /// Backward steps from the element to its orbit origin.
    pub steps: usize,
    /// The backward walk never left `C`.
    pub full_line: bool,
}

/// Normalises `F`, finds or checks a swinger, and assembles the spec.
pub fn prepare_tile_spec(f_raw: &[Word], params: &SwingerParams, backend: &GroupBackend) -> Result<PreparedTile> {
    let f = normalize_set(f_raw, backend)?;
    if f.len() == 1 {
        return Ok(PreparedTile::Trivial);
    }
    if backend.is_finite() {
        return Err(Error::UnsupportedBackend(
            "finite groups have no swingers; use the exact cover oracle".into(),
        ));
    }
    if !backend.is_tree() && !params.allow_empirical {
        return Err(Error::UnsupportedBackend(
            "exact certification needs a tree backend; enable empirical mode".into(),
        ));
    }
    let m = f.iter().map(|x| backend.word_length(x)).max().unwrap_or(0);
    let r = 4 * m + 1;
    let big_r = separation_constant(r, backend.delta());
    let certify = |z: &Word| -> Result<SwingerCertificate> {
        if backend.is_tree() {
            certify_swinger_tree(z, r, backend)
        } else {
            check_swinger_bounded(z, r, EMPIRICAL_M_MAX, backend)
        }
    };
    // The tiling argument needs D_{z,r} to be r-separated. Long swingers do
    // not guarantee it (runs like a⁵b put a·x and x in D together), so it is
    // tested directly.
    let separated = |z: &Word| -> Result<bool> { Ok(d_separation_violation(z, r, backend)?.is_none()) };
    let (z, cert) = match &params.z {
        Some(z) => {
            let cert = certify(z)?;
            if !matches!(cert.verdict, Verdict::Certified | Verdict::InconclusivePositive) {
                return Err(Error::Precondition(format!(
                    "{} is not an {r}-swinger",
                    backend.format_word(z)
                )));
            }
            if backend.word_length(z) < big_r {
                return Err(Error::Precondition(format!("|z| must be at least R = {big_r}")));
            }
            if let Some((x, y)) = d_separation_violation(z, r, backend)? {
                return Err(Error::Precondition(format!(
                    "D is not {r}-separated for z = {}: {} and {} are too close",
                    backend.format_word(z),
                    backend.format_word(&x),
                    backend.format_word(&y)
                )));
            }
            (z.clone(), cert)
        }
        None => find_swinger_with(r, big_r, params.strategy, params.budget, backend, &mut |z| separated(z))?
            .ok_or_else(|| {
            Error::SearchBudget(format!(
                "no {r}-swinger of length at least {big_r} among {} candidates",
                params.budget
            ))
        })?,
    };
    let v = f[1].clone();
    let g = backend.mul(&backend.invert(&v), &z);
    if backend.has_growing_powers(&g, 16) {
        return Ok(PreparedTile::Spec(Box::new(TileSpec::new(f, z, cert, backend)?)));
    }
    // v⁻¹z of finite order: move to higher powers of the swinger's root
    let root = if backend.is_tree() {
        let (u, c) = backend.cyclic_split(&z)?;
        let k = crate::boundary::primitive_root_len(c.letters());
        let rho = Word::from_normal_letters(c.letters()[..k].to_vec());
        backend.mul_all(&[&u, &rho, &backend.invert(&u)])
    } else {
        z.clone()
    };
    let mut candidate = z;
    for _ in 0..16 {
        candidate = backend.mul(&candidate, &root);
        let g = backend.mul(&backend.invert(&v), &candidate);
        if !backend.has_growing_powers(&g, 16) || backend.word_length(&candidate) < big_r || !separated(&candidate)? {
            continue;
        }
        let cert = certify(&candidate)?;
        if matches!(cert.verdict, Verdict::Certified | Verdict::InconclusivePositive) {
            return Ok(PreparedTile::Spec(Box::new(TileSpec::new(f, candidate, cert, backend)?)));
        }
    }
    Err(Error::SearchBudget(
        "no power of the swinger's root makes v⁻¹z loxodromic".into(),
    ))
}

/// Which of the two regions of the construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegionKind {
    C,
    D,
}

pub fn region_membership(x: &Word, spec: &TileSpec, which: RegionKind, backend: &GroupBackend) -> bool {
    match which {
        RegionKind::C => spec.in_c(x, backend),
        RegionKind::D => spec.in_d(x, backend),
    }
}

/// `{s, s·v⁻¹z}` with `s ∈ C′`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pair {
    pub representative: Word,
    pub partner: Word,
    pub full_line: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Pairing {
    /// Sorted by representative.
    pub pairs: Vec<Pair>,
}

impl Pairing {
    pub fn representatives(&self) -> impl Iterator<Item = &Word> {
        self.pairs.iter().map(|p| &p.representative)
    }

    pub fn full_line_fallbacks(&self) -> usize {
        self.pairs.iter().filter(|p| p.full_line).count()
    }

    fn from_representatives(reps: impl IntoIterator<Item = Word>, spec: &TileSpec, backend: &GroupBackend) -> Result<Self> {
        let mut pairs = Vec::new();
        let mut reps: Vec<Word> = reps.into_iter().collect();
        reps.sort();
        reps.dedup();
        for s in reps {
            let pos = spec.orbit_position(&s, backend)?;
            let partner = backend.mul(&s, spec.g());
            debug_assert!(spec.in_c(&partner, backend));
            pairs.push(Pair {
                representative: s,
                partner,
                full_line: pos.full_line,
            });
        }
        Ok(Pairing { pairs })
    }
}

/// Pairs every element of `C ∩ Ball(work_radius)` by walking orbits.
/// Materialises the ball, so only small radii are practical; the pipeline
/// uses [`pairing_for_core`].
pub fn pair_c(spec: &TileSpec, work_radius: usize, backend: &GroupBackend) -> Result<Pairing> {
    let ball = backend.enumerate_ball(work_radius)?;
    let mut reps = Vec::new();
    for x in ball.elements() {
        if !spec.in_c(x, backend) {
            continue;
        }
        let pos = spec.orbit_position(x, backend)?;
        if pos.steps % 2 == 0 {
            reps.push(x.clone());
        } else {
            reps.push(backend.mul(x, &spec.g_inv));
        }
    }
    Pairing::from_representatives(reps, spec, backend)
}

/// The pairs whose A-stage tiles meet `Ball(core_radius)`.
pub fn pairing_for_core(spec: &TileSpec, core: &[Word], backend: &GroupBackend) -> Result<Pairing> {
    let mut reps = Vec::new();
    for x in core {
        if let Some(s) = spec.a_tile_of(x, backend)? {
            reps.push(s);
        }
    }
    Pairing::from_representatives(reps, spec, backend)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    A,
    Greedy { round: usize },
}

/// The tile `anchor · T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placement {
    pub anchor: Word,
    pub stage: Stage,
}

/// One A-stage placement `s·v⁻¹` per representative; tiles must be pairwise
/// disjoint.
pub fn build_a(spec: &TileSpec, pairing: &Pairing, backend: &GroupBackend) -> Result<Vec<Placement>> {
    let v_inv = backend.invert(&spec.v);
    let mut owner: HashMap<Word, usize> = HashMap::new();
    let mut placements = Vec::with_capacity(pairing.pairs.len());
    for (k, pair) in pairing.pairs.iter().enumerate() {
        let anchor = backend.mul(&pair.representative, &v_inv);
        for x in spec.tile(&anchor, backend) {
            if let Some(&other) = owner.get(&x) {
                return Err(Error::ConsistencyViolation(format!(
                    "A-stage tiles of representatives {} and {} share {}",
                    backend.format_word(&pairing.pairs[other].representative),
                    backend.format_word(&pair.representative),
                    backend.format_word(&x)
                )));
            }
            owner.insert(x, k);
        }
        placements.push(Placement { anchor, stage: Stage::A });
    }
    Ok(placements)
}

/// Greedily covers what the A-stage left of the core ball with tiles
/// `b·z⁻¹·T`, in length-lex order of `b`.
pub fn greedy_fill(
    spec: &TileSpec,
    a_placements: &[Placement],
    core: &[Word],
    work_radius: usize,
    backend: &GroupBackend,
) -> Result<Vec<Placement>> {
    let mut a_cover: HashSet<Word> = HashSet::new();
    for p in a_placements {
        a_cover.extend(spec.tile(&p.anchor, backend));
    }
    let mut greedy_cover: HashSet<Word> = HashSet::new();
    let mut out = Vec::new();
    let mut round = 0;
    let mut last_len = None;
    for b in core {
        if a_cover.contains(b) || greedy_cover.contains(b) {
            continue;
        }
        if spec.a_tile_of(b, backend)?.is_some() {
            return Err(Error::ConsistencyViolation(format!(
                "{} lies in an A-stage tile that was not placed",
                backend.format_word(b)
            )));
        }
        let anchor = backend.mul(b, &spec.z_inv);
        if backend.word_length(&anchor) > work_radius {
            return Err(Error::InsufficientWorkRadius {
                work_radius,
                detail: format!("greedy anchor {} lies outside", backend.format_word(&anchor)),
            });
        }
        for x in spec.tile(&anchor, backend) {
            if a_cover.contains(&x) || spec.a_tile_of(&x, backend)?.is_some() {
                return Err(Error::ConsistencyViolation(format!(
                    "greedy tile at {} meets the A-stage at {}",
                    backend.format_word(&anchor),
                    backend.format_word(&x)
                )));
            }
            if !greedy_cover.insert(x.clone()) {
                return Err(Error::ConsistencyViolation(format!(
                    "greedy tile at {} meets an earlier greedy tile at {}",
                    backend.format_word(&anchor),
                    backend.format_word(&x)
                )));
            }
        }
        let len = backend.word_length(b);
        if last_len != Some(len) {
            round += 1;
            last_len = Some(len);
        }
        out.push(Placement {
            anchor,
            stage: Stage::Greedy { round },
        });
    }
    Ok(out)
}

/// Options for [`build_tiling`].
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BuildOptions {
    pub swinger: SwingerParams,
    /// Defaults to `core_radius + |z| + M + 2`.
    pub work_radius: Option<usize>,
    /// Return the region even when verification fails.
    pub raw: bool,
}

/// A finite piece of a tiling: every element of the core ball lies in
/// exactly one placed tile.
#[derive(Clone, Debug, PartialEq)]
pub struct TilingRegion {
    pub backend: GroupBackend,
    /// `F` after normalisation.
    pub f: Vec<Word>,
    /// `None` when `F` is a single element.
    pub spec: Option<TileSpec>,
    pub core_radius: usize,
    pub work_radius: usize,
    pub placements: Vec<Placement>,
    pub pairing: Pairing,
    pub report: Option<VerificationReport>,
}

impl TilingRegion {
    /// The translated set: `T` for a real spec, `F = {1}` otherwise.
    pub fn tile_set(&self) -> &[Word] {
        match &self.spec {
            Some(spec) => &spec.t,
            None => &self.f,
        }
    }

    pub fn tile(&self, anchor: &Word) -> Vec<Word> {
        self.tile_set().iter().map(|t| self.backend.mul(anchor, t)).collect()
    }

    /// Placements whose tiles meet the core ball, sorted by anchor.
    pub fn core_placements(&self) -> Vec<Placement> {
        let mut out: Vec<Placement> = self
            .placements
            .iter()
            .filter(|p| {
                self.tile(&p.anchor)
                    .iter()
                    .any(|x| self.backend.word_length(x) <= self.core_radius)
            })
            .cloned()
            .collect();
        out.sort_by(|a, b| a.anchor.cmp(&b.anchor).then(a.stage.cmp(&b.stage)));
        out
    }
}

/// The whole pipeline: prepare, pair, A-stage, greedy fill, verify.
pub fn build_tiling(f_raw: &[Word], core_radius: usize, options: &BuildOptions, backend: &GroupBackend) -> Result<TilingRegion> {
    let core = backend.enumerate_ball(core_radius)?;
    let mut region = match prepare_tile_spec(f_raw, &options.swinger, backend)? {
        PreparedTile::Trivial => {
            let mut placements = Vec::with_capacity(core.len());
            let mut round = 0;
            let mut last_len = None;
            for x in core.elements() {
                let len = backend.word_length(x);
                if last_len != Some(len) {
                    round += 1;
                    last_len = Some(len);
                }
                placements.push(Placement {
                    anchor: x.clone(),
                    stage: Stage::Greedy { round },
                });
            }
            TilingRegion {
                backend: backend.clone(),
                f: vec![Word::identity()],
                spec: None,
                core_radius,
                work_radius: options.work_radius.unwrap_or(core_radius),
                placements,
                pairing: Pairing::default(),
                report: None,
            }
        }
        PreparedTile::Spec(spec) => {
            let spec = *spec;
            let z_len = backend.word_length(&spec.z);
            let work_radius = options.work_radius.unwrap_or(core_radius + z_len + spec.m + 2);
            if work_radius < core_radius + z_len + spec.m {
                return Err(Error::InsufficientWorkRadius {
                    work_radius,
                    detail: format!("must be at least core radius + |z| + M = {}", core_radius + z_len + spec.m),
                });
            }
            let pairing = pairing_for_core(&spec, core.elements(), backend)?;
            let mut placements = build_a(&spec, &pairing, backend)?;
            if let Some(p) = placements.iter().find(|p| backend.word_length(&p.anchor) > work_radius) {
                return Err(Error::InsufficientWorkRadius {
                    work_radius,
                    detail: format!("A-stage anchor {} lies outside", backend.format_word(&p.anchor)),
                });
            }
            let greedy = greedy_fill(&spec, &placements, core.elements(), work_radius, backend)?;
            placements.extend(greedy);
            TilingRegion {
                backend: backend.clone(),
                f: spec.f.clone(),
                spec: Some(spec),
                core_radius,
                work_radius,
                placements,
                pairing,
                report: None,
            }
        }
    };
    let report = verify_tiling(&region)?;
    if !options.raw && !report.all_passed() {
        return Err(Error::ConsistencyViolation(format!(
            "constructed region failed verification: {}",
            report.counterexample.clone().unwrap_or_default()
        )));
    }
    region.report = Some(report);
    Ok(region)
}
