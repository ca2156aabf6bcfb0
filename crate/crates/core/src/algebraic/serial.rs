//! JSON form of algebraic numbers.
//!
//! A document carries a table of leaves `{poly, box}` and numbers that refer
//! to leaves by table position. Rational numbers are plain `"p/q"` strings;
//! others are `{"num": terms, "den": terms}` with terms `[[[leaf, exp], ...], "p/q"]`.
//! The table is sorted by polynomial and box and terms by their local
//! monomials, so the encoding does not depend on registration order and a
//! decode followed by an encode reproduces the input.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::algebraic::leaf::{leaf, register, Rooted};
use crate::algebraic::{AlgebraicNumber, MPoly};
use crate::exact::{ComplexBox, Rational};
use crate::poly::QPoly;
use crate::{Error, Result};

/// A registered leaf as stored on disk.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LeafRecord {
    /// Integer coefficients, constant term first, as decimal strings.
    pub poly: Vec<String>,
    #[serde(rename = "box")]
    pub bx: [Rational; 4],
}

type Term = (Vec<(usize, u32)>, Rational);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumberRecord {
    Rational(Rational),
    Quotient { num: Vec<Term>, den: Vec<Term> },
}

/// Leaf table built from every number that will be written.
#[derive(Debug, Default)]
pub struct Encoder {
    records: Vec<LeafRecord>,
    index: BTreeMap<u32, usize>,
}

fn record_of(id: u32) -> LeafRecord {
    let l = leaf(id);
    let [a, b, c, d] = l.isolating_box().bounds();
    LeafRecord {
        poly: l.ints().iter().map(BigInt::to_string).collect(),
        bx: [a.clone(), b.clone(), c.clone(), d.clone()],
    }
}

impl Encoder {
    pub fn new<'a>(numbers: impl IntoIterator<Item = &'a AlgebraicNumber>) -> Self {
        let mut by_record: BTreeMap<LeafRecord, Vec<u32>> = BTreeMap::new();
        for a in numbers {
            for id in a.num().leaves().into_iter().chain(a.den().leaves()) {
                let ids = by_record.entry(record_of(id)).or_default();
                if !ids.contains(&id) {
                    ids.push(id);
                }
            }
        }
        let mut index = BTreeMap::new();
        let mut records = vec![];
        for (k, (rec, ids)) in by_record.into_iter().enumerate() {
            for id in ids {
                index.insert(id, k);
            }
            records.push(rec);
        }
        Encoder { records, index }
    }

    pub fn leaves(&self) -> &[LeafRecord] {
        &self.records
    }

    fn terms(&self, p: &MPoly) -> Vec<Term> {
        let mut out: Vec<Term> = p
            .terms()
            .map(|(m, c)| {
                let mut mono: Vec<(usize, u32)> = m.iter().map(|&(id, e)| (self.index[&id], e)).collect();
                mono.sort();
                (mono, c.clone())
            })
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Encode a number whose leaves were passed to [`Encoder::new`].
    pub fn encode(&self, a: &AlgebraicNumber) -> NumberRecord {
        match a.as_rational() {
            Some(q) => NumberRecord::Rational(q),
            None => NumberRecord::Quotient {
                num: self.terms(a.num()),
                den: self.terms(a.den()),
            },
        }
    }
}

/// Registers a leaf table and decodes numbers against it.
#[derive(Debug)]
pub struct Decoder {
    images: Vec<MPoly>,
}

impl Decoder {
    pub fn new(leaves: &[LeafRecord]) -> Result<Self> {
        let mut images = Vec::with_capacity(leaves.len());
        for rec in leaves {
            let ints = rec
                .poly
                .iter()
                .map(|s| s.parse::<BigInt>().map_err(|_| Error::Parse(format!("invalid integer `{s}`"))))
                .collect::<Result<Vec<_>>>()?;
            let [a, b, c, d] = rec.bx.clone();
            let bx = ComplexBox::from_bounds(a, b, c, d)?;
            images.push(match register(&QPoly::from_ints(&ints), &bx, None)? {
                Rooted::Rational(q) => MPoly::constant(q),
                Rooted::Leaf(l) => MPoly::leaf(l.id),
            });
        }
        Ok(Decoder { images })
    }

    fn poly(&self, terms: &[Term]) -> Result<MPoly> {
        let mut out = MPoly::zero();
        for (mono, c) in terms {
            let mut t = MPoly::constant(c.clone());
            for &(k, e) in mono {
                let img = self.images.get(k).ok_or_else(|| Error::Parse(format!("unknown leaf {k}")))?;
                t = t.mul(&img.pow(e));
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    pub fn decode(&self, r: &NumberRecord) -> Result<AlgebraicNumber> {
        match r {
            NumberRecord::Rational(q) => Ok(AlgebraicNumber::from_rational(q.clone())),
            NumberRecord::Quotient { num, den } => AlgebraicNumber::from_parts(self.poly(num)?, self.poly(den)?),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt(n: i64) -> AlgebraicNumber {
        let bx = ComplexBox::from_bounds(Rational::zero(), Rational::from(n), Rational::zero(), Rational::zero()).unwrap();
        AlgebraicNumber::root_of(&QPoly::from_i64(&[-n, 0, 1]), &bx).unwrap()
    }

    #[test]
    fn round_trip_is_exact_and_stable() {
        let x = sqrt(2).add(&sqrt(3).mul(&AlgebraicNumber::i())).div(&sqrt(5).add(&AlgebraicNumber::one())).unwrap();
        let values = [x.clone(), AlgebraicNumber::from_rational(Rational::ratio(-3, 7)), sqrt(2)];
        let enc = Encoder::new(&values);
        let recs: Vec<_> = values.iter().map(|v| enc.encode(v)).collect();
        let text = serde_json::to_string(&(enc.leaves(), &recs)).unwrap();

        let (leaves, recs2): (Vec<LeafRecord>, Vec<NumberRecord>) = serde_json::from_str(&text).unwrap();
        let dec = Decoder::new(&leaves).unwrap();
        let back: Vec<_> = recs2.iter().map(|r| dec.decode(r).unwrap()).collect();
        for (a, b) in values.iter().zip(&back) {
            assert!(a.eq_exact(b));
        }
        let enc2 = Encoder::new(&back);
        let recs3: Vec<_> = back.iter().map(|v| enc2.encode(v)).collect();
        assert_eq!(serde_json::to_string(&(enc2.leaves(), &recs3)).unwrap(), text);
    }

    #[test]
    fn rationals_are_plain_strings() {
        let r = NumberRecord::Rational(Rational::ratio(5, 4));
        assert_eq!(serde_json::to_string(&r).unwrap(), "\"5/4\"");
    }
}
