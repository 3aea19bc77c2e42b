//! Text forms of words and JSON descriptors of backends.
//!
//! * free groups: lowercase letters for generators (`a`, `b`, …), uppercase
//!   for their inverses; the identity is `""` or `"1"`.
//! * integers: a signed decimal exponent (`"-3"`), or a letter string over
//!   `a`/`A`; the identity is `"0"`.
//! * free products of cyclic groups: syllables `g^e` joined by `·`, e.g.
//!   `"a^1·b^-1"`; plain letter strings are also accepted.
//! * finite groups: the decimal element index.

use serde::{Deserialize, Serialize};

use super::{BackendKind, FiniteGroupTable, GroupBackend, Letter, Word};
use crate::error::{Error, Result};

const SYLLABLE_SEPARATORS: [char; 3] = ['·', '*', '.'];

fn letter_char(l: Letter) -> char {
    let c = (b'a' + l.generator as u8) as char;
    if l.inverted {
        c.to_ascii_uppercase()
    } else {
        c
    }
}

fn char_letter(c: char) -> Option<Letter> {
    if c.is_ascii_lowercase() {
        Some(Letter::new(c as u32 - 'a' as u32, false))
    } else if c.is_ascii_uppercase() {
        Some(Letter::new(c as u32 - 'A' as u32, true))
    } else {
        None
    }
}

impl GroupBackend {
    pub fn format_word(&self, w: &Word) -> String {
        match self.kind() {
            BackendKind::Free { .. } => {
                if w.is_identity() {
                    "1".into()
                } else {
                    w.letters().iter().map(|&l| letter_char(l)).collect()
                }
            }
            BackendKind::Integers => {
                let n = w.len() as i64;
                let n = if w.letters().first().is_some_and(|l| l.inverted) { -n } else { n };
                n.to_string()
            }
            BackendKind::FreeProductCyclic { .. } => {
                if w.is_identity() {
                    return "1".into();
                }
                let mut parts = Vec::new();
                let letters = w.letters();
                let mut i = 0;
                while i < letters.len() {
                    let l = letters[i];
                    let run = letters[i..].iter().take_while(|&&x| x == l).count();
                    let e = if l.inverted { -(run as i64) } else { run as i64 };
                    parts.push(format!("{}^{}", letter_char(Letter::new(l.generator, false)), e));
                    i += run;
                }
                parts.join("·")
            }
            BackendKind::Finite { .. } => {
                w.letters().first().map_or(0, |l| l.generator).to_string()
            }
        }
    }

    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let s = s.trim();
        let bad = |why: &str| Error::MalformedInput(format!("cannot parse word {s:?}: {why}"));
        match self.kind() {
            BackendKind::Finite { table, .. } => {
                let x: u32 = s.parse().map_err(|_| bad("expected an element index"))?;
                if x as usize >= table.order() {
                    return Err(bad("element index out of range"));
                }
                self.reduce(&[Letter::new(x, false)])
            }
            BackendKind::Integers => {
                if let Ok(n) = s.parse::<i64>() {
                    return Ok(self.power(&Word::from_normal_letters(vec![Letter::new(0, false)]), n));
                }
                self.parse_letters(s)
            }
            BackendKind::Free { .. } => {
                if s.is_empty() || s == "1" {
                    return Ok(Word::identity());
                }
                self.parse_letters(s)
            }
            BackendKind::FreeProductCyclic { .. } => {
                if s.is_empty() || s == "1" {
                    return Ok(Word::identity());
                }
                if !s.contains('^') && !s.contains(SYLLABLE_SEPARATORS) {
                    return self.parse_letters(s);
                }
                let mut raw = Vec::new();
                for part in s.split(SYLLABLE_SEPARATORS).filter(|p| !p.is_empty()) {
                    let (g, e) = match part.split_once('^') {
                        Some((g, e)) => (g, e.parse::<i64>().map_err(|_| bad("bad exponent"))?),
                        None => (part, 1),
                    };
                    let mut chars = g.chars();
                    let l = match (chars.next().and_then(char_letter), chars.next()) {
                        (Some(l), None) => l,
                        _ => return Err(bad("expected a single generator letter")),
                    };
                    let l = if e < 0 { l.inverse() } else { l };
                    raw.extend(std::iter::repeat_n(l, e.unsigned_abs() as usize));
                }
                self.reduce(&raw)
            }
        }
    }

    fn parse_letters(&self, s: &str) -> Result<Word> {
        let raw = s
            .chars()
            .map(|c| {
                char_letter(c).ok_or_else(|| {
                    Error::MalformedInput(format!("cannot parse word {s:?}: unexpected character {c:?}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        self.reduce(&raw)
    }

    pub fn descriptor(&self) -> BackendDescriptor {
        let mut d = BackendDescriptor {
            kind: String::new(),
            rank: None,
            orders: None,
            table: None,
            generators: None,
            delta: self.delta(),
        };
        match self.kind() {
            BackendKind::Free { rank } => {
                d.kind = "free".into();
                d.rank = Some(*rank);
            }
            BackendKind::Integers => d.kind = "integers".into(),
            BackendKind::FreeProductCyclic { orders } => {
                d.kind = "free_product_cyclic".into();
                d.orders = Some(orders.clone());
            }
            BackendKind::Finite { table, generators } => {
                d.kind = "finite".into();
                d.table = Some(table.rows().to_vec());
                d.generators = Some(generators.clone());
            }
        }
        d
    }

    /// Parses the compact command-line form: `free:<rank>`, `integers`,
    /// `free_product_cyclic:<o1>,<o2>,…` (alias `fpc:`), or
    /// `finite:<name>` with `Z<n>`, `D<n>`, `S3`, `S4`.
    pub fn from_spec(spec: &str) -> Result<Self> {
        let bad = || Error::MalformedInput(format!("unrecognised group {spec:?}"));
        let (kind, params) = spec.split_once(':').unwrap_or((spec, ""));
        match kind {
            "free" | "F" => GroupBackend::free(params.parse().map_err(|_| bad())?),
            "integers" | "Z" | "z" if params.is_empty() => Ok(GroupBackend::integers()),
            "free_product_cyclic" | "fpc" => {
                let orders = params
                    .split(',')
                    .map(|o| o.trim().parse::<u32>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>>>()?;
                GroupBackend::free_product_cyclic(orders)
            }
            "finite" => {
                let (table, gens) = FiniteGroupTable::by_name(params)?;
                GroupBackend::finite(table, Some(gens))
            }
            _ => Err(bad()),
        }
    }
}

/// JSON form of a backend:
/// `{"kind": "free"|"free_product_cyclic"|"integers"|"finite", "rank"/"orders"/"table": …, "delta": number}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BackendDescriptor {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orders: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<u32>>,
    pub delta: f64,
}

impl BackendDescriptor {
    pub fn to_backend(&self) -> Result<GroupBackend> {
        let missing = |f: &str| Error::MalformedInput(format!("backend kind {:?} requires {f:?}", self.kind));
        let backend = match self.kind.as_str() {
            "free" => GroupBackend::free(self.rank.ok_or_else(|| missing("rank"))?)?,
            "integers" => GroupBackend::integers(),
            "free_product_cyclic" => {
                GroupBackend::free_product_cyclic(self.orders.clone().ok_or_else(|| missing("orders"))?)?
            }
            "finite" => {
                let table = FiniteGroupTable::new(self.table.clone().ok_or_else(|| missing("table"))?)?;
                GroupBackend::finite(table, self.generators.clone())?
            }
            other => return Err(Error::MalformedInput(format!("unknown backend kind {other:?}"))),
        };
        backend.with_delta(self.delta)
    }
}
