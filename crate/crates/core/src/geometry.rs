//! Exact codes of covers of `R^d` by open axis-aligned boxes.
//!
//! Along each axis the box endpoints cut the line into finitely many
//! pieces: the endpoints themselves, the open gaps between consecutive
//! endpoints, and the two unbounded rays. Membership in every open interval
//! is constant on each piece, so one sample per piece and axis (endpoint,
//! midpoint, or a point beyond the extremes) reaches every region of the
//! arrangement. Coordinates are rationals and comparisons are exact.

use std::collections::HashMap;

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::code::Code;
use crate::codeword::Codeword;
use crate::error::{Error, Result};

/// A product of open intervals `(lower[k], upper[k])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenBox {
    lower: Vec<Rational64>,
    upper: Vec<Rational64>,
}

impl OpenBox {
    pub fn new(lower: Vec<Rational64>, upper: Vec<Rational64>) -> Result<OpenBox> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch { expected: lower.len(), got: upper.len() });
        }
        if lower.is_empty() {
            return Err(Error::ZeroDimension);
        }
        if let Some(k) = (0..lower.len()).find(|&k| lower[k] >= upper[k]) {
            return Err(Error::EmptyBox(k));
        }
        Ok(OpenBox { lower, upper })
    }

    /// Box from integer bounds, for tests and examples.
    pub fn from_ints(lower: &[i64], upper: &[i64]) -> Result<OpenBox> {
        OpenBox::new(
            lower.iter().map(|&x| Rational64::from_integer(x)).collect(),
            upper.iter().map(|&x| Rational64::from_integer(x)).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[Rational64] {
        &self.lower
    }

    pub fn upper(&self) -> &[Rational64] {
        &self.upper
    }

    pub fn contains(&self, point: &[Rational64]) -> bool {
        point.len() == self.dim() && point.iter().enumerate().all(|(k, x)| self.lower[k] < *x && *x < self.upper[k])
    }
}

/// An ordered list of boxes in `R^d`; box `i` realizes neuron `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CoverJson", into = "CoverJson")]
pub struct BoxCover {
    d: usize,
    boxes: Vec<OpenBox>,
}

impl BoxCover {
    pub fn new(d: usize, boxes: Vec<OpenBox>) -> Result<BoxCover> {
        if d == 0 {
            return Err(Error::ZeroDimension);
        }
        if boxes.len() > Codeword::MAX_NEURONS {
            return Err(Error::TooManyNeurons(boxes.len()));
        }
        if let Some(b) = boxes.iter().find(|b| b.dim() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: b.dim() });
        }
        Ok(BoxCover { d, boxes })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn boxes(&self) -> &[OpenBox] {
        &self.boxes
    }

    /// Neurons whose box contains `point`.
    pub fn membership(&self, point: &[Rational64]) -> Codeword {
        self.boxes
            .iter()
            .enumerate()
            .filter(|(_, b)| b.contains(point))
            .fold(Codeword::EMPTY, |acc, (i, _)| acc.with(i + 1))
    }

    /// Sample coordinates along `axis`: every endpoint, every midpoint of
    /// consecutive endpoints, and one point past each extreme.
    pub fn axis_samples(&self, axis: usize) -> Vec<Rational64> {
        let mut ends: Vec<Rational64> = self.boxes.iter().flat_map(|b| [b.lower[axis], b.upper[axis]]).collect();
        ends.sort();
        ends.dedup();
        let (Some(&first), Some(&last)) = (ends.first(), ends.last()) else {
            return vec![Rational64::from_integer(0)];
        };
        let one = Rational64::from_integer(1);
        let mut out = Vec::with_capacity(2 * ends.len() + 1);
        out.push(first - one);
        for (k, &e) in ends.iter().enumerate() {
            out.push(e);
            if let Some(&next) = ends.get(k + 1) {
                out.push((e + next) / 2);
            }
        }
        out.push(last + one);
        out
    }
}

/// The code together with one grid point realizing each codeword.
pub fn code_of_cover_with_witnesses(cover: &BoxCover) -> (Code, HashMap<Codeword, Vec<Rational64>>) {
    let samples: Vec<Vec<Rational64>> = (0..cover.d).map(|k| cover.axis_samples(k)).collect();
    // masks[k][s]: boxes whose k-th interval contains sample s
    let masks: Vec<Vec<u64>> = samples
        .iter()
        .enumerate()
        .map(|(k, xs)| {
            xs.iter()
                .map(|x| {
                    cover
                        .boxes
                        .iter()
                        .enumerate()
                        .filter(|(_, b)| b.lower[k] < *x && *x < b.upper[k])
                        .fold(0u64, |acc, (i, _)| acc | (1u64 << i))
                })
                .collect()
        })
        .collect();
    let mut witnesses: HashMap<Codeword, Vec<Rational64>> = HashMap::new();
    let mut idx = vec![0usize; cover.d];
    loop {
        let bits = idx.iter().enumerate().fold(u64::MAX, |acc, (k, &s)| acc & masks[k][s]);
        let bits = if cover.boxes.is_empty() { 0 } else { bits };
        witnesses
            .entry(Codeword::from_bits(bits))
            .or_insert_with(|| idx.iter().enumerate().map(|(k, &s)| samples[k][s]).collect());
        // odometer
        let mut k = 0;
        loop {
            if k == cover.d {
                let code = Code::new(cover.boxes.len(), witnesses.keys().copied())
                    .expect("bounded boxes leave the empty codeword");
                return (code, witnesses);
            }
            idx[k] += 1;
            if idx[k] < samples[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// `{ σ | ∩_{i∈σ} U_i ∖ ∪_{j∉σ} U_j ≠ ∅ }` for the boxes `U_i`.
pub fn code_of_cover(cover: &BoxCover) -> Code {
    code_of_cover_with_witnesses(cover).0
}

/// Seeded random cover with small rational endpoints.
pub fn random_box_cover(d: usize, n: usize, seed: u64) -> Result<BoxCover> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let boxes = (0..n)
        .map(|_| {
            let mut lower = Vec::with_capacity(d);
            let mut upper = Vec::with_capacity(d);
            for _ in 0..d {
                let den: i64 = rng.gen_range(1..=4);
                let lo: i64 = rng.gen_range(0..20 * den);
                let width: i64 = rng.gen_range(1..=10 * den);
                lower.push(Rational64::new(lo, den));
                upper.push(Rational64::new(lo + width, den));
            }
            OpenBox::new(lower, upper)
        })
        .collect::<Result<Vec<_>>>()?;
    BoxCover::new(d, boxes)
}

pub fn format_rational(x: &Rational64) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Accepts `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational64> {
    let bad = || Error::BadRational(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(p, q))
        }
        None => Ok(Rational64::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

#[derive(Serialize, Deserialize)]
struct BoxJson {
    #[serde(serialize_with = "ser_rationals", deserialize_with = "de_rationals")]
    lower: Vec<Rational64>,
    #[serde(serialize_with = "ser_rationals", deserialize_with = "de_rationals")]
    upper: Vec<Rational64>,
}

#[derive(Serialize, Deserialize)]
struct CoverJson {
    d: usize,
    boxes: Vec<BoxJson>,
}

fn ser_rationals<S: Serializer>(xs: &[Rational64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(format_rational))
}

fn de_rationals<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational64>, D::Error> {
    let raw = Vec::<String>::deserialize(d)?;
    raw.iter().map(|s| parse_rational(s).map_err(serde::de::Error::custom)).collect()
}

impl TryFrom<CoverJson> for BoxCover {
    type Error = Error;

    fn try_from(raw: CoverJson) -> Result<BoxCover> {
        let boxes = raw.boxes.into_iter().map(|b| OpenBox::new(b.lower, b.upper)).collect::<Result<Vec<_>>>()?;
        BoxCover::new(raw.d, boxes)
    }
}

impl From<BoxCover> for CoverJson {
    fn from(c: BoxCover) -> Self {
        CoverJson { d: c.d, boxes: c.boxes.into_iter().map(|b| BoxJson { lower: b.lower, upper: b.upper }).collect() }
    }
}
