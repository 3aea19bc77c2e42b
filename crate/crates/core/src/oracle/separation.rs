use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupBackend, Letter, Word};

/// Literal pairwise scan of `D_{z,r} ∩ Ball(radius)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationScan {
    pub radius: usize,
    pub elements: usize,
    pub members: usize,
    pub pairs_checked: usize,
    pub violation: Option<(String, String)>,
}

/// Every reduced word of length at most `radius`, depth first.
fn words_up_to(backend: &GroupBackend, radius: usize) -> Vec<Word> {
    fn go(alphabet: &[Letter], cur: &mut Vec<Letter>, radius: usize, out: &mut Vec<Word>) {
        out.push(Word::from_normal_letters(cur.clone()));
        if cur.len() == radius {
            return;
        }
        for &l in alphabet {
            if cur.last() == Some(&l.inverse()) {
                continue;
            }
            cur.push(l);
            go(alphabet, cur, radius, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(&backend.alphabet(), &mut Vec::new(), radius, &mut out);
    out
}

/// Checks every member of `D ∩ Ball(radius)` against every element within
/// distance `r - 1` of it, membership taken straight from the definition
/// `|x z^{∓1}| < |x| + r`. Free groups only.
pub fn d_separation_scan(z: &Word, r: usize, radius: usize, backend: &GroupBackend) -> Result<SeparationScan> {
    if !backend.is_tree() {
        return Err(Error::UnsupportedBackend("the literal scan spells words in a free group".into()));
    }
    let z_inv = backend.invert(z);
    let len = |w: &Word| backend.word_length(w);
    let in_d = |x: &Word| len(&backend.mul(x, &z_inv)) < len(x) + r || len(&backend.mul(x, z)) < len(x) + r;
    let ball = words_up_to(backend, radius);
    let steps: Vec<Word> = words_up_to(backend, r.saturating_sub(1)).into_iter().skip(1).collect();
    let mut scan = SeparationScan {
        radius,
        elements: ball.len(),
        members: 0,
        pairs_checked: 0,
        violation: None,
    };
    for x in ball.iter().filter(|x| in_d(x)) {
        scan.members += 1;
        for a in &steps {
            let y = backend.mul(x, a);
            if len(&y) > radius {
                continue;
            }
            scan.pairs_checked += 1;
            if in_d(&y) && scan.violation.is_none() {
                scan.violation = Some((backend.format_word(x), backend.format_word(&y)));
            }
        }
    }
    Ok(scan)
}
