//! Detection, certification and search for r-swingers.
//!
//! `z` is an r-swinger when it has infinite order and, for every `b` with
//! `1 <= |b| <= r`, every `i, j ∈ {1, -1}` and every `m >= 1`,
//! `|z^{im} b z^{jm}| > |z^m|`. The difference of the two sides is the
//! *margin* of `(b, i, j, m)`.
//!
//! On tree backends the length `|z^{im} b z^{jm}|` is eventually affine in
//! `m`: write `z = u c u⁻¹` with `c` cyclically reduced and `β = u⁻¹ b u`;
//! once `m·|c|` exceeds `|β|` by two periods the cancellation between
//! `c^{im}`, `β` and `c^{jm}` no longer depends on `m`. Since `|z^m|` grows
//! by exactly `|c|` per step, a stable length increment greater than `|c|`
//! together with positive margins up to that point certifies the triple for
//! every `m`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::boundary::{apply_boundary, lox_endpoint, primitive_root_len, FixSet, Sign};
use crate::error::{Error, Result};
use crate::group::{BackendKind, GroupBackend, Letter, Word};

/// Margins are checked up to this power for non-tree backends during search.
pub const EMPIRICAL_M_MAX: u64 = 25;

/// Extra powers tried beyond the first power long enough for the search.
const POWER_SLACK: i64 = 4;

/// Signs in scan order: (1,1), (1,-1), (-1,1), (-1,-1).
pub const SIGN_PAIRS: [(i8, i8); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    Refuted,
    /// Every margin checked was positive, but no proof for all `m`.
    #[serde(rename = "inconclusive-positive")]
    InconclusivePositive,
    /// The exact procedure hit its cap without deciding.
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificationMode {
    ExactTree,
    BoundedEmpirical,
}

/// A failing `(b, i, j, m)` with its non-positive margin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub b: Word,
    pub i: i8,
    pub j: i8,
    pub m: u64,
    pub margin: i64,
}

/// Eventual-affinity evidence for one `(b, i, j)`: from `m0` on, the length
/// `|z^{im} b z^{jm}|` grows by `increment` per step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stabilization {
    pub b: Word,
    pub i: i8,
    pub j: i8,
    pub m0: u64,
    pub increment: i64,
    pub margin: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwingerCertificate {
    pub z: Word,
    pub r: usize,
    pub verdict: Verdict,
    pub mode: CertificationMode,
    pub witness: Option<Witness>,
    pub checked_up_to: u64,
    pub stabilization: Vec<Stabilization>,
}

impl SwingerCertificate {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }

    pub fn to_document(&self, backend: &GroupBackend) -> CertificateDocument {
        let f = |w: &Word| backend.format_word(w);
        CertificateDocument {
            z: f(&self.z),
            r: self.r,
            verdict: self.verdict,
            mode: self.mode,
            witness: self.witness.as_ref().map(|w| WitnessDocument {
                b: f(&w.b),
                i: w.i,
                j: w.j,
                m: w.m,
                margin: w.margin,
            }),
            checked_up_to: self.checked_up_to,
            stabilization: self
                .stabilization
                .iter()
                .map(|s| StabilizationDocument {
                    b: f(&s.b),
                    i: s.i,
                    j: s.j,
                    m0: s.m0,
                    increment: s.increment,
                    margin: s.margin,
                })
                .collect(),
        }
    }

    /// Recomputes the certificate from scratch and checks it matches; for a
    /// refutation the witness margin is recomputed independently as well.
    pub fn reverify(&self, backend: &GroupBackend) -> Result<bool> {
        if let Some(w) = &self.witness {
            let margin = swinger_margin(&self.z, &w.b, w.i, w.j, w.m, backend)?;
            if margin != w.margin || margin > 0 {
                return Ok(false);
            }
        }
        let again = match self.mode {
            CertificationMode::ExactTree => certify_swinger_tree(&self.z, self.r, backend)?,
            CertificationMode::BoundedEmpirical => {
                check_swinger_bounded(&self.z, self.r, self.checked_up_to, backend)?
            }
        };
        Ok(&again == self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDocument {
    pub b: String,
    pub i: i8,
    pub j: i8,
    pub m: u64,
    pub margin: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizationDocument {
    pub b: String,
    pub i: i8,
    pub j: i8,
    pub m0: u64,
    pub increment: i64,
    pub margin: i64,
}

/// JSON form of a [`SwingerCertificate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub z: String,
    pub r: usize,
    pub verdict: Verdict,
    pub mode: CertificationMode,
    pub witness: Option<WitnessDocument>,
    pub checked_up_to: u64,
    pub stabilization: Vec<StabilizationDocument>,
}

impl CertificateDocument {
    pub fn to_certificate(&self, backend: &GroupBackend) -> Result<SwingerCertificate> {
        let p = |s: &str| backend.parse_word(s);
        Ok(SwingerCertificate {
            z: p(&self.z)?,
            r: self.r,
            verdict: self.verdict,
            mode: self.mode,
            witness: match &self.witness {
                Some(w) => Some(Witness {
                    b: p(&w.b)?,
                    i: w.i,
                    j: w.j,
                    m: w.m,
                    margin: w.margin,
                }),
                None => None,
            },
            checked_up_to: self.checked_up_to,
            stabilization: self
                .stabilization
                .iter()
                .map(|s| {
                    Ok(Stabilization {
                        b: p(&s.b)?,
                        i: s.i,
                        j: s.j,
                        m0: s.m0,
                        increment: s.increment,
                        margin: s.margin,
                    })
                })
                .collect::<Result<_>>()?,
        })
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Whether `z` has infinite order.
pub fn is_infinite_order(z: &Word, backend: &GroupBackend) -> bool {
    if z.is_identity() {
        return false;
    }
    match backend.kind() {
        BackendKind::Free { .. } | BackendKind::Integers => true,
        // finite-order elements are conjugate into a factor, so their order
        // divides the lcm of the factor orders
        BackendKind::FreeProductCyclic { orders } => {
            let lcm = orders
                .iter()
                .fold(1u64, |acc, &o| acc / gcd(acc, o as u64) * o as u64);
            !backend.power(z, lcm as i64).is_identity()
        }
        BackendKind::Finite { .. } => false,
    }
}

fn check_inputs(z: &Word, backend: &GroupBackend) -> Result<()> {
    for &l in z.letters() {
        backend.validate_letter(l)?;
    }
    if z.is_identity() {
        return Err(Error::DegenerateElement("z is trivial".into()));
    }
    if !is_infinite_order(z, backend) {
        return Err(Error::NotLoxodromic(backend.format_word(z)));
    }
    Ok(())
}

/// `|z^{im} b z^{jm}| - |z^m|`.
pub fn swinger_margin(z: &Word, b: &Word, i: i8, j: i8, m: u64, backend: &GroupBackend) -> Result<i64> {
    check_inputs(z, backend)?;
    if b.is_identity() {
        return Err(Error::DegenerateElement("b is trivial".into()));
    }
    if m == 0 {
        return Err(Error::MalformedInput("m must be at least 1".into()));
    }
    if !matches!(i, 1 | -1) || !matches!(j, 1 | -1) {
        return Err(Error::MalformedInput("i and j must be 1 or -1".into()));
    }
    let zm = backend.power(z, m as i64);
    let left = if i == 1 { zm.clone() } else { backend.invert(&zm) };
    let right = if j == 1 { zm.clone() } else { backend.invert(&zm) };
    let whole = backend.mul_all(&[&left, b, &right]);
    Ok(backend.word_length(&whole) as i64 - backend.word_length(&zm) as i64)
}

/// Incrementally computes `|z^{im} b z^{jm}|` and `|z^m|` for m = 1, 2, ….
struct MarginSequence<'a> {
    backend: &'a GroupBackend,
    b: &'a Word,
    left_step: Word,
    right_step: Word,
    left: Word,
    right: Word,
    zm: Word,
    z: &'a Word,
    m: u64,
}

impl<'a> MarginSequence<'a> {
    fn new(z: &'a Word, z_inv: &Word, b: &'a Word, i: i8, j: i8, backend: &'a GroupBackend) -> Self {
        let pick = |s: i8| if s == 1 { z.clone() } else { z_inv.clone() };
        MarginSequence {
            backend,
            b,
            left_step: pick(i),
            right_step: pick(j),
            left: Word::identity(),
            right: Word::identity(),
            zm: Word::identity(),
            z,
            m: 0,
        }
    }

    /// Advances to the next `m`, returning `(m, |z^{im} b z^{jm}|, margin)`.
    fn step(&mut self) -> (u64, i64, i64) {
        let g = self.backend;
        self.m += 1;
        self.left = g.mul(&self.left, &self.left_step);
        self.right = g.mul(&self.right_step, &self.right);
        self.zm = g.mul(&self.zm, self.z);
        let len = g.word_length(&g.mul(&g.mul(&self.left, self.b), &self.right)) as i64;
        (self.m, len, len - g.word_length(&self.zm) as i64)
    }
}

fn validate_radius(r: usize) -> Result<()> {
    if r == 0 {
        Err(Error::MalformedInput("r must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Checks every margin with `m <= m_max`; never certifies.
pub fn check_swinger_bounded(z: &Word, r: usize, m_max: u64, backend: &GroupBackend) -> Result<SwingerCertificate> {
    validate_radius(r)?;
    if m_max == 0 {
        return Err(Error::MalformedInput("m_max must be at least 1".into()));
    }
    check_inputs(z, backend)?;
    if !backend.has_growing_powers(z, m_max.max(2) as usize) {
        return Err(Error::NotLoxodromic(backend.format_word(z)));
    }
    let ball = backend.enumerate_ball(r)?;
    let z_inv = backend.invert(z);
    let mut cert = SwingerCertificate {
        z: z.clone(),
        r,
        verdict: Verdict::InconclusivePositive,
        mode: CertificationMode::BoundedEmpirical,
        witness: None,
        checked_up_to: m_max,
        stabilization: Vec::new(),
    };
    for b in ball.nontrivial() {
        for (i, j) in SIGN_PAIRS {
            let mut seq = MarginSequence::new(z, &z_inv, b, i, j, backend);
            for _ in 0..m_max {
                let (m, _, margin) = seq.step();
                if margin <= 0 {
                    cert.verdict = Verdict::Refuted;
                    cert.witness = Some(Witness { b: b.clone(), i, j, m, margin });
                    return Ok(cert);
                }
            }
        }
    }
    Ok(cert)
}

/// Exact certification on tree backends.
pub fn certify_swinger_tree(z: &Word, r: usize, backend: &GroupBackend) -> Result<SwingerCertificate> {
    if !backend.is_tree() {
        return Err(Error::UnsupportedBackend(
            "exact swinger certification needs a free group or the integers".into(),
        ));
    }
    validate_radius(r)?;
    check_inputs(z, backend)?;
    let ball = backend.enumerate_ball(r)?;
    let (u, c) = backend.cyclic_split(z)?;
    let u_inv = backend.invert(&u);
    let core_len = c.len() as i64;
    let z_inv = backend.invert(z);
    let cap = 8 * (r + z.len()) as u64 + 64;

    let mut cert = SwingerCertificate {
        z: z.clone(),
        r,
        verdict: Verdict::Certified,
        mode: CertificationMode::ExactTree,
        witness: None,
        checked_up_to: 0,
        stabilization: Vec::new(),
    };
    let mut undecided = false;
    for b in ball.nontrivial() {
        let beta = backend.mul_all(&[&u_inv, b, &u]);
        let m_safe = (beta.len() as u64).div_ceil(c.len() as u64) + 2;
        for (i, j) in SIGN_PAIRS {
            let mut seq = MarginSequence::new(z, &z_inv, b, i, j, backend);
            let mut lengths: Vec<i64> = Vec::new();
            let mut stable: Option<Stabilization> = None;
            loop {
                let (m, len, margin) = seq.step();
                cert.checked_up_to = cert.checked_up_to.max(m);
                if margin <= 0 {
                    cert.verdict = Verdict::Refuted;
                    cert.witness = Some(Witness { b: b.clone(), i, j, m, margin });
                    cert.stabilization.clear();
                    return Ok(cert);
                }
                lengths.push(len);
                let k = lengths.len();
                if m >= 4 && m >= m_safe + 2 {
                    let inc = |t: usize| lengths[t] - lengths[t - 1];
                    let s = inc(k - 1);
                    if s == inc(k - 2) && s == inc(k - 3) && s > core_len {
                        stable = Some(Stabilization { b: b.clone(), i, j, m0: m, increment: s, margin });
                        break;
                    }
                    // A stable increment of at most |c| means margins never
                    // grow again; keep stepping until one fails or the cap.
                }
                if m >= cap {
                    break;
                }
            }
            match stable {
                Some(s) => cert.stabilization.push(s),
                None => undecided = true,
            }
        }
    }
    if undecided {
        cert.verdict = Verdict::Inconclusive;
    }
    Ok(cert)
}

/// Candidate generation strategy for [`find_swinger`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchStrategy {
    /// Length-lex enumeration of cyclically reduced, non-power words.
    Enumerate,
    /// Pseudo-random cyclically reduced words from a seeded ChaCha8 stream.
    Random { seed: u64 },
}

fn is_cyclically_reduced_root(w: &Word, backend: &GroupBackend) -> bool {
    if w.is_identity() {
        return false;
    }
    if backend.is_tree() {
        let l = w.letters();
        l[0] != l[l.len() - 1].inverse() && primitive_root_len(l) == l.len()
    } else {
        is_infinite_order(w, backend)
    }
}

/// Whether no nontrivial `b` in the ball moves an endpoint of `y` into
/// `Fix(y)`.
pub fn boundary_precondition(y: &Word, ball: &[Word], backend: &GroupBackend) -> Result<bool> {
    let fix = FixSet::of(y, backend)?;
    let plus = lox_endpoint(y, Sign::Plus, backend)?;
    let minus = lox_endpoint(y, Sign::Minus, backend)?;
    let r = ball.iter().map(Word::len).max().unwrap_or(0);
    // Powers of the cyclic root of y fix its endpoints; test those first.
    let (u, c) = backend.cyclic_split(y)?;
    let root = Word::from_normal_letters(c.letters()[..primitive_root_len(c.letters())].to_vec());
    let u_inv = backend.invert(&u);
    let mut k = 1i64;
    loop {
        let p = backend.mul_all(&[&u, &backend.power(&root, k), &u_inv]);
        if p.len() > r {
            break;
        }
        if fix.contains(&apply_boundary(&p, &plus, backend)?) {
            return Ok(false);
        }
        k += 1;
    }
    for b in ball.iter().filter(|b| !b.is_identity()) {
        for p in [&plus, &minus] {
            if fix.contains(&apply_boundary(b, p, backend)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

struct RandomWords {
    rng: ChaCha8Rng,
    max_len: usize,
}

impl RandomWords {
    fn next_word(&mut self, backend: &GroupBackend) -> Word {
        let alphabet = backend.alphabet();
        loop {
            let len = self.rng.gen_range(1..=self.max_len);
            let mut letters: Vec<Letter> = Vec::with_capacity(len);
            while letters.len() < len {
                let l = alphabet[self.rng.gen_range(0..alphabet.len())];
                letters.push(l);
                letters = backend.reduce(&letters).expect("alphabet letters are valid").into_letters();
            }
            let w = Word::from_normal_letters(letters);
            if w.len() == len {
                return w;
            }
        }
    }
}

/// Searches for an r-swinger of length at least `min_length`.
///
/// Candidates `y` are filtered by the boundary precondition (tree
/// backends) and then the powers `y, y², …` long enough are certified in
/// turn. Each candidate drawn counts against `budget`. On non-tree
/// backends the first power passing [`check_swinger_bounded`] up to
/// [`EMPIRICAL_M_MAX`] is returned with its inconclusive-positive
/// certificate.
pub fn find_swinger(
    r: usize,
    min_length: usize,
    strategy: SearchStrategy,
    budget: u64,
    backend: &GroupBackend,
) -> Result<Option<(Word, SwingerCertificate)>> {
    find_swinger_with(r, min_length, strategy, budget, backend, &mut |_| Ok(true))
}

/// [`find_swinger`] with an extra acceptance test on each power `z`, applied
/// before certification; rejected powers are skipped.
pub fn find_swinger_with(
    r: usize,
    min_length: usize,
    strategy: SearchStrategy,
    budget: u64,
    backend: &GroupBackend,
    accept: &mut dyn FnMut(&Word) -> Result<bool>,
) -> Result<Option<(Word, SwingerCertificate)>> {
    if budget == 0 {
        return Err(Error::MalformedInput("search budget must be positive".into()));
    }
    validate_radius(r)?;
    if backend.is_finite() {
        return Ok(None);
    }
    let ball = backend.enumerate_ball(r)?;
    let mut spent = 0u64;
    let mut try_candidate = |y: &Word| -> Result<Option<(Word, SwingerCertificate)>> {
        if !is_cyclically_reduced_root(y, backend) {
            return Ok(None);
        }
        if backend.is_tree() && !boundary_precondition(y, ball.elements(), backend)? {
            return Ok(None);
        }
        let first = (min_length.max(1) as i64 + y.len() as i64 - 1) / y.len() as i64;
        let first = first.max(1);
        for n in first..first + POWER_SLACK {
            let z = backend.power(y, n);
            if backend.word_length(&z) < min_length || !accept(&z)? {
                continue;
            }
            let cert = if backend.is_tree() {
                certify_swinger_tree(&z, r, backend)?
            } else {
                check_swinger_bounded(&z, r, EMPIRICAL_M_MAX, backend)?
            };
            if matches!(cert.verdict, Verdict::Certified | Verdict::InconclusivePositive) {
                return Ok(Some((z, cert)));
            }
        }
        Ok(None)
    };
    match strategy {
        SearchStrategy::Enumerate => {
            for sphere in backend.spheres().skip(1) {
                for y in sphere {
                    if spent == budget {
                        return Ok(None);
                    }
                    spent += 1;
                    if let Some(found) = try_candidate(&y)? {
                        return Ok(Some(found));
                    }
                }
            }
            Ok(None)
        }
        SearchStrategy::Random { seed } => {
            let mut words = RandomWords {
                rng: ChaCha8Rng::seed_from_u64(seed),
                max_len: min_length.max(2 * r + 2),
            };
            while spent < budget {
                spent += 1;
                let y = words.next_word(backend);
                if let Some(found) = try_candidate(&y)? {
                    return Ok(Some(found));
                }
            }
            Ok(None)
        }
    }
}

/// Least `n <= n_max` such that `y^n` certifies as an r-swinger.
pub fn swinger_power_threshold(y: &Word, r: usize, n_max: u64, backend: &GroupBackend) -> Result<Option<u64>> {
    for n in 1..=n_max {
        let z = backend.power(y, n as i64);
        if certify_swinger_tree(&z, r, backend)?.is_certified() {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Whether `⟨z, b⁻¹zb⟩` is not virtually cyclic. In a free group that
/// subgroup is cyclic exactly when `z` and its conjugate commute; the scan
/// for a common power up to `e_max` cross-checks the commutation test.
pub fn not_virtually_cyclic_check(z: &Word, b: &Word, e_max: u64, backend: &GroupBackend) -> Result<bool> {
    if !backend.is_tree() {
        return Err(Error::UnsupportedBackend("virtual cyclicity check needs a tree backend".into()));
    }
    check_inputs(z, backend)?;
    if b.is_identity() {
        return Err(Error::DegenerateElement("b is trivial".into()));
    }
    let zb = backend.mul_all(&[&backend.invert(b), z, b]);
    let commute = backend.mul(z, &zb) == backend.mul(&zb, z);
    let mut common_power = false;
    'scan: for p in 1..=e_max as i64 {
        let zp = backend.power(z, p);
        for q in 1..=e_max as i64 {
            if zp == backend.power(&zb, q) || zp == backend.power(&zb, -q) {
                common_power = true;
                break 'scan;
            }
        }
    }
    if common_power && !commute {
        return Err(Error::ConsistencyViolation(format!(
            "{} and its conjugate share a power but do not commute",
            backend.format_word(z)
        )));
    }
    Ok(!commute)
}
