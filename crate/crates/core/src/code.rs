//! Finite codes with provenance metadata, a line-oriented text format, and
//! exact minimum-distance measurement.
//!
//! File format:
//!
//! ```text
//! agcodes-code 1
//! construction: goppa
//! alphabet: k
//! q: 5
//! n: 5
//! points: 0;1;2;3;4
//! params: {"curve":"p1",...}
//! modulus: 0,1
//! claimed_distance: 3
//! words: 125
//! ---
//! 0,0,0,0,0
//! ...
//! ```
//!
//! Symbols are field-element encodings; over `P1(k)` the point at infinity is
//! the symbol `q`. Words are stored in ascending lexicographic order.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::Point;
use crate::error::{Error, Result};
use crate::field::{field_of_order, Field};

pub const MAGIC: &str = "agcodes-code 1";

/// Pairwise distance computation is refused above this many words.
pub const MAX_DISTANCE_WORDS: usize = 100_000;

pub type Word = Vec<u32>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Alphabet {
    /// The field `k` itself, `q` symbols.
    Field,
    /// `P^1(k) = k + {inf}`, `q + 1` symbols.
    ProjectiveLine,
}

impl Alphabet {
    pub fn size(self, q: u32) -> u32 {
        match self {
            Alphabet::Field => q,
            Alphabet::ProjectiveLine => q + 1,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Alphabet::Field => "k",
            Alphabet::ProjectiveLine => "P1(k)",
        }
    }

    pub fn from_tag(tag: &str) -> Result<Alphabet> {
        match tag {
            "k" => Ok(Alphabet::Field),
            "P1(k)" => Ok(Alphabet::ProjectiveLine),
            _ => Err(Error::parse(format!("unknown alphabet '{tag}'"))),
        }
    }
}

/// Minimum distance of a code; undefined for codes with fewer than two words.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinDistance {
    Undefined,
    Exact(usize),
}

impl MinDistance {
    pub fn value(self) -> Option<usize> {
        match self {
            MinDistance::Undefined => None,
            MinDistance::Exact(d) => Some(d),
        }
    }

    /// True when the distance is undefined or at least `bound`.
    pub fn meets(self, bound: i64) -> bool {
        match self {
            MinDistance::Undefined => true,
            MinDistance::Exact(d) => d as i64 >= bound,
        }
    }
}

impl fmt::Display for MinDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinDistance::Undefined => f.write_str("undefined"),
            MinDistance::Exact(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CodeMeta {
    pub construction: String,
    pub alphabet: Alphabet,
    pub points: Vec<Point>,
    pub params: serde_json::Value,
    pub claimed_distance: Option<i64>,
}

#[derive(Clone, Debug)]
pub struct Code {
    field: Field,
    meta: CodeMeta,
    words: Vec<Word>,
}

pub fn hamming_distance(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

impl Code {
    /// Validates lengths and symbols and sorts the words. Duplicate words are
    /// rejected: every construction here is injective by theorem, so a
    /// repeat signals a broken guarantee.
    pub fn new(field: &Field, meta: CodeMeta, words: Vec<Word>) -> Result<Code> {
        let n = meta.points.len();
        let size = meta.alphabet.size(field.order());
        for w in &words {
            if w.len() != n {
                return Err(Error::precondition(format!(
                    "word of length {} in a length-{n} code",
                    w.len()
                )));
            }
            if let Some(s) = w.iter().find(|&&s| s >= size) {
                return Err(Error::precondition(format!("symbol {s} outside the alphabet")));
            }
        }
        let count = words.len();
        let set: BTreeSet<Word> = words.into_iter().collect();
        if set.len() != count {
            return Err(Error::Verification(format!(
                "{} duplicate words: the encoding map is not injective",
                count - set.len()
            )));
        }
        Ok(Code {
            field: field.clone(),
            meta,
            words: set.into_iter().collect(),
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn meta(&self) -> &CodeMeta {
        &self.meta
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn length(&self) -> usize {
        self.meta.points.len()
    }

    pub fn contains(&self, w: &[u32]) -> bool {
        self.words.binary_search_by(|x| x.as_slice().cmp(w)).is_ok()
    }

    /// `log_q(#words) / N` with `q` the field order.
    pub fn rate(&self) -> f64 {
        if self.words.is_empty() || self.length() == 0 {
            return 0.0;
        }
        (self.words.len() as f64).ln() / (self.field.order() as f64).ln() / self.length() as f64
    }

    /// Dimension over `k` if the word set is exactly a linear subspace of `k^N`.
    ///
    /// Row-reduces the words to a basis of their span, then checks that the
    /// span has exactly `#words` elements; since every word lies in the span,
    /// that forces equality.
    pub fn linear_dimension(&self) -> Option<usize> {
        if self.meta.alphabet != Alphabet::Field || self.words.is_empty() {
            return None;
        }
        let f = &self.field;
        let n = self.length();
        let mut basis: Vec<(usize, Vec<u32>)> = Vec::new();
        for w in &self.words {
            let mut v = w.clone();
            for (pivot, row) in &basis {
                let c = v[*pivot];
                if c != 0 {
                    for k in 0..n {
                        v[k] = f.sub(v[k], f.mul(c, row[k]));
                    }
                }
            }
            if let Some(p) = v.iter().position(|&c| c != 0) {
                let inv = f.inv(v[p]).expect("nonzero pivot");
                for c in v.iter_mut() {
                    *c = f.mul(*c, inv);
                }
                // keep earlier rows reduced at the new pivot
                for (_, row) in basis.iter_mut() {
                    let c = row[p];
                    if c != 0 {
                        for k in 0..n {
                            row[k] = f.sub(row[k], f.mul(c, v[k]));
                        }
                    }
                }
                basis.push((p, v));
            }
        }
        let r = basis.len();
        let span = (f.order() as u128).checked_pow(r as u32)?;
        (span == self.words.len() as u128).then_some(r)
    }

    /// Exact minimum distance. Linear codes (verified via
    /// [`Code::linear_dimension`]) use the minimum nonzero weight; everything
    /// else is compared pairwise.
    pub fn exact_min_distance(&self) -> Result<MinDistance> {
        if self.words.len() < 2 {
            return Ok(MinDistance::Undefined);
        }
        if self.words.len() > MAX_DISTANCE_WORDS {
            return Err(Error::guard(
                "words for exact distance",
                self.words.len(),
                MAX_DISTANCE_WORDS,
            ));
        }
        if self.linear_dimension().is_some() {
            let d = self
                .words
                .par_iter()
                .map(|w| w.iter().filter(|&&s| s != 0).count())
                .filter(|&wt| wt > 0)
                .min()
                .expect("at least one nonzero word");
            return Ok(MinDistance::Exact(d));
        }
        Ok(MinDistance::Exact(pairwise_min_distance(&self.words)))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let m = &self.meta;
        let points: Vec<String> = m.points.iter().map(|p| p.to_string()).collect();
        let modulus: Vec<String> = self.field.modulus().iter().map(|c| c.to_string()).collect();
        out.push_str(MAGIC);
        out.push('\n');
        out.push_str(&format!("construction: {}\n", m.construction));
        out.push_str(&format!("alphabet: {}\n", m.alphabet.tag()));
        out.push_str(&format!("q: {}\n", self.field.order()));
        out.push_str(&format!("n: {}\n", m.points.len()));
        out.push_str(&format!("points: {}\n", points.join(";")));
        out.push_str(&format!("params: {}\n", m.params));
        out.push_str(&format!("modulus: {}\n", modulus.join(",")));
        match m.claimed_distance {
            Some(d) => out.push_str(&format!("claimed_distance: {d}\n")),
            None => out.push_str("claimed_distance: none\n"),
        }
        out.push_str(&format!("words: {}\n", self.words.len()));
        out.push_str("---\n");
        for w in &self.words {
            let s: Vec<String> = w.iter().map(|c| c.to_string()).collect();
            out.push_str(&s.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Code> {
        let mut lines = text.lines();
        if lines.next() != Some(MAGIC) {
            return Err(Error::parse("missing code file header"));
        }
        let mut header = std::collections::BTreeMap::new();
        for line in lines.by_ref() {
            if line == "---" {
                break;
            }
            let (k, v) = line
                .split_once(": ")
                .ok_or_else(|| Error::parse(format!("bad header line '{line}'")))?;
            header.insert(k.to_owned(), v.to_owned());
        }
        let get = |k: &str| {
            header
                .get(k)
                .cloned()
                .ok_or_else(|| Error::parse(format!("header field '{k}' missing")))
        };
        let num = |k: &str| -> Result<u64> {
            get(k)?
                .parse()
                .map_err(|_| Error::parse(format!("header field '{k}' is not an integer")))
        };
        let field = field_of_order(num("q")?)?;
        let modulus = get("modulus")?;
        let expected: Vec<String> = field.modulus().iter().map(|c| c.to_string()).collect();
        if modulus != expected.join(",") {
            return Err(Error::parse(format!(
                "modulus {modulus} differs from the canonical one"
            )));
        }
        let points_text = get("points")?;
        let points = if points_text.is_empty() {
            Vec::new()
        } else {
            points_text.split(';').map(Point::parse).collect::<Result<Vec<_>>>()?
        };
        if points.len() as u64 != num("n")? {
            return Err(Error::parse("point list does not match n"));
        }
        let claimed = get("claimed_distance")?;
        let claimed_distance = if claimed == "none" {
            None
        } else {
            Some(claimed.parse().map_err(|_| Error::parse("bad claimed_distance"))?)
        };
        let meta = CodeMeta {
            construction: get("construction")?,
            alphabet: Alphabet::from_tag(&get("alphabet")?)?,
            points,
            params: serde_json::from_str(&get("params")?)?,
            claimed_distance,
        };
        let words = lines
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.split(',')
                    .map(|s| {
                        s.parse::<u32>()
                            .map_err(|_| Error::parse(format!("bad symbol in '{l}'")))
                    })
                    .collect::<Result<Word>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if words.len() as u64 != num("words")? {
            return Err(Error::parse("word count does not match header"));
        }
        Code::new(&field, meta, words)
    }
}

/// Minimum pairwise Hamming distance, fanned out over the first index.
pub fn pairwise_min_distance(words: &[Word]) -> usize {
    (0..words.len())
        .into_par_iter()
        .map(|i| {
            let mut best = usize::MAX;
            for w in &words[i + 1..] {
                best = best.min(hamming_distance(&words[i], w));
                if best <= 1 {
                    break;
                }
            }
            best
        })
        .min()
        .unwrap_or(usize::MAX)
}
