//! JSON files: `state.json`, `cert-step-N.json` and `manifest.json`.
//!
//! Every number is a `"p/q"` string or an algebraic number over the file's
//! leaf table (see [`crate::algebraic::serial`]); no floating point value is
//! ever written. Writing a parsed file reproduces it byte for byte.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebraic::enumerate::Alpha;
use crate::algebraic::serial::{Decoder, Encoder, LeafRecord, NumberRecord};
use crate::algebraic::AlgebraicNumber;
use crate::engine::{
    AlphaBound, ConstructionState, Factor, Factored, LedgerEntry, PFingerprint, StepCertificate, StepRecord,
};
use crate::exact::Rational;
use crate::poly::AlgPoly;
use crate::{Error, Result};

pub const STATE_FORMAT: &str = "entireforge-state/1";
pub const CERT_FORMAT: &str = "entireforge-certificate/1";
pub const MANIFEST_FORMAT: &str = "entireforge-manifest/1";

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn from_json<'a, T: Deserialize<'a>>(text: &'a str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn check_format(found: &str, want: &str) -> Result<()> {
    if found != want {
        return Err(Error::Parse(format!("expected format {want}, found {found}")));
    }
    Ok(())
}

fn ints_to_strings(v: &[num_bigint::BigInt]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn strings_to_ints(v: &[String]) -> Result<Vec<num_bigint::BigInt>> {
    v.iter()
        .map(|s| s.parse().map_err(|_| Error::Parse(format!("invalid integer `{s}`"))))
        .collect()
}

fn encode_poly(enc: &Encoder, p: &AlgPoly) -> Vec<NumberRecord> {
    p.coeffs().iter().map(|c| enc.encode(c)).collect()
}

fn decode_poly(dec: &Decoder, v: &[NumberRecord]) -> Result<AlgPoly> {
    Ok(AlgPoly::new(v.iter().map(|r| dec.decode(r)).collect::<Result<_>>()?))
}

#[derive(Serialize, Deserialize)]
struct PolyDoc {
    leaves: Vec<LeafRecord>,
    coeffs: Vec<NumberRecord>,
}

/// Canonical JSON of a polynomial (leaf table and coefficients).
pub fn poly_json(p: &AlgPoly) -> String {
    let coeffs = p.coeffs();
    let enc = Encoder::new(&coeffs);
    serde_json::to_string(&PolyDoc {
        leaves: enc.leaves().to_vec(),
        coeffs: encode_poly(&enc, p),
    })
    .expect("serializable")
}

/// Hex SHA-256 of [`poly_json`].
pub fn poly_digest(p: &AlgPoly) -> String {
    hex::encode(Sha256::digest(poly_json(p).as_bytes()))
}

#[derive(Serialize, Deserialize)]
struct AlphaDoc {
    value: NumberRecord,
    poly: Vec<String>,
    real: bool,
}

#[derive(Serialize, Deserialize)]
struct FactorDoc {
    coeffs: Vec<NumberRecord>,
    exp: u32,
}

#[derive(Serialize, Deserialize)]
struct StepDoc {
    n: usize,
    radius: Rational,
    p: Vec<FactorDoc>,
    epsilon: NumberRecord,
    coefficient: Rational,
}

#[derive(Serialize, Deserialize)]
struct LedgerDoc {
    step: usize,
    alpha: usize,
    point: NumberRecord,
    multiplicity: usize,
}

#[derive(Serialize, Deserialize)]
struct StateDoc {
    format: String,
    seed: u64,
    n: usize,
    leaves: Vec<LeafRecord>,
    alphas: Vec<AlphaDoc>,
    steps: Vec<StepDoc>,
    f: Vec<NumberRecord>,
    ledger: Vec<LedgerDoc>,
}

pub fn state_to_json(s: &ConstructionState) -> String {
    let mut numbers: Vec<AlgebraicNumber> = s.alphas.iter().map(|a| a.value.clone()).collect();
    for st in &s.steps {
        numbers.push(st.epsilon.clone());
        for f in &st.p.0 {
            numbers.extend(f.poly.coeffs());
        }
    }
    numbers.extend(s.f.coeffs());
    numbers.extend(s.ledger.iter().map(|e| e.point.clone()));
    let enc = Encoder::new(&numbers);
    let doc = StateDoc {
        format: STATE_FORMAT.into(),
        seed: s.seed,
        n: s.n(),
        leaves: enc.leaves().to_vec(),
        alphas: s
            .alphas
            .iter()
            .map(|a| AlphaDoc {
                value: enc.encode(&a.value),
                poly: ints_to_strings(&a.poly),
                real: a.real,
            })
            .collect(),
        steps: s
            .steps
            .iter()
            .map(|st| StepDoc {
                n: st.n,
                radius: st.radius.clone(),
                p: st
                    .p
                    .0
                    .iter()
                    .map(|f| FactorDoc {
                        coeffs: encode_poly(&enc, &f.poly),
                        exp: f.exp,
                    })
                    .collect(),
                epsilon: enc.encode(&st.epsilon),
                coefficient: st.coefficient.clone(),
            })
            .collect(),
        f: encode_poly(&enc, &s.f),
        ledger: s
            .ledger
            .iter()
            .map(|e| LedgerDoc {
                step: e.step,
                alpha: e.alpha,
                point: enc.encode(&e.point),
                multiplicity: e.multiplicity,
            })
            .collect(),
    };
    to_json(&doc)
}

pub fn state_from_json(text: &str) -> Result<ConstructionState> {
    let doc: StateDoc = from_json(text, "state")?;
    check_format(&doc.format, STATE_FORMAT)?;
    let dec = Decoder::new(&doc.leaves)?;
    let alphas = doc
        .alphas
        .iter()
        .map(|a| {
            Ok(Alpha {
                value: dec.decode(&a.value)?,
                poly: strings_to_ints(&a.poly)?,
                real: a.real,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let steps = doc
        .steps
        .iter()
        .map(|st| {
            let factors = st
                .p
                .iter()
                .map(|f| {
                    Ok(Factor {
                        poly: decode_poly(&dec, &f.coeffs)?,
                        exp: f.exp,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(StepRecord {
                n: st.n,
                radius: st.radius.clone(),
                p: Factored(factors),
                epsilon: dec.decode(&st.epsilon)?,
                coefficient: st.coefficient.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let ledger = doc
        .ledger
        .iter()
        .map(|e| {
            Ok(LedgerEntry {
                step: e.step,
                alpha: e.alpha,
                point: dec.decode(&e.point)?,
                multiplicity: e.multiplicity,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let state = ConstructionState {
        seed: doc.seed,
        alphas,
        steps,
        f: decode_poly(&dec, &doc.f)?,
        ledger,
    };
    if state.n() != doc.n || state.steps.iter().enumerate().any(|(k, s)| s.n != k + 1) {
        return Err(Error::Parse("state: step numbering is inconsistent".into()));
    }
    Ok(state)
}

#[derive(Serialize, Deserialize)]
struct AlphaBoundDoc {
    index: usize,
    min_bound: Rational,
    count_before: usize,
    count_after: usize,
}

#[derive(Serialize, Deserialize)]
struct PDoc {
    degree: usize,
    length: Rational,
    sha256: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coeffs: Option<Vec<NumberRecord>>,
}

#[derive(Serialize, Deserialize)]
struct CertDoc {
    format: String,
    step: usize,
    radius: Rational,
    leaves: Vec<LeafRecord>,
    alphas: Vec<AlphaBoundDoc>,
    p: PDoc,
    max_bound: Rational,
    c: NumberRecord,
    threshold: Rational,
    coefficient: Rational,
    epsilon: NumberRecord,
    condition_iv_margin: Rational,
    rouche_margins: Vec<Rational>,
}

pub fn cert_to_json(c: &StepCertificate) -> String {
    let mut numbers = vec![c.c.clone(), c.epsilon.clone()];
    if let Some(p) = &c.p.coeffs {
        numbers.extend(p.coeffs());
    }
    let enc = Encoder::new(&numbers);
    let doc = CertDoc {
        format: CERT_FORMAT.into(),
        step: c.n,
        radius: c.radius.clone(),
        leaves: enc.leaves().to_vec(),
        alphas: c
            .alphas
            .iter()
            .map(|a| AlphaBoundDoc {
                index: a.index,
                min_bound: a.min_bound.clone(),
                count_before: a.count_before,
                count_after: a.count_after,
            })
            .collect(),
        p: PDoc {
            degree: c.p.degree,
            length: c.p.length.clone(),
            sha256: c.p.sha256.clone(),
            coeffs: c.p.coeffs.as_ref().map(|p| encode_poly(&enc, p)),
        },
        max_bound: c.max_bound.clone(),
        c: enc.encode(&c.c),
        threshold: c.threshold.clone(),
        coefficient: c.coefficient.clone(),
        epsilon: enc.encode(&c.epsilon),
        condition_iv_margin: c.condition_iv_margin.clone(),
        rouche_margins: c.rouche_margins.clone(),
    };
    to_json(&doc)
}

pub fn cert_from_json(text: &str) -> Result<StepCertificate> {
    let doc: CertDoc = from_json(text, "certificate")?;
    check_format(&doc.format, CERT_FORMAT)?;
    let dec = Decoder::new(&doc.leaves)?;
    Ok(StepCertificate {
        n: doc.step,
        radius: doc.radius,
        alphas: doc
            .alphas
            .into_iter()
            .map(|a| AlphaBound {
                index: a.index,
                min_bound: a.min_bound,
                count_before: a.count_before,
                count_after: a.count_after,
            })
            .collect(),
        p: PFingerprint {
            degree: doc.p.degree,
            length: doc.p.length,
            sha256: doc.p.sha256,
            coeffs: doc.p.coeffs.as_deref().map(|v| decode_poly(&dec, v)).transpose()?,
        },
        max_bound: doc.max_bound,
        c: dec.decode(&doc.c)?,
        threshold: doc.threshold,
        coefficient: doc.coefficient,
        epsilon: dec.decode(&doc.epsilon)?,
        condition_iv_margin: doc.condition_iv_margin,
        rouche_margins: doc.rouche_margins,
    })
}

/// Index of a run directory.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub format: String,
    pub tool: String,
    pub version: String,
    pub steps: usize,
    pub seed: u64,
    /// Seconds since the Unix epoch.
    pub created: u64,
    pub state: String,
    pub certificates: Vec<String>,
    /// `a_1 .. a_{N+1}`.
    pub prefix: Vec<Rational>,
}

impl Manifest {
    pub fn new(state: &ConstructionState, created: u64) -> Self {
        Manifest {
            format: MANIFEST_FORMAT.into(),
            tool: "entireforge".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            steps: state.steps.len(),
            seed: state.seed,
            created,
            state: "state.json".into(),
            certificates: (1..=state.steps.len()).map(cert_file_name).collect(),
            prefix: state.prefix(),
        }
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: Manifest = from_json(text, "manifest")?;
        check_format(&m.format, MANIFEST_FORMAT)?;
        Ok(m)
    }
}

pub fn cert_file_name(step: usize) -> String {
    format!("cert-step-{step}.json")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_stable() {
        let p = AlgPoly::from_qpoly(crate::poly::QPoly::from_i64(&[1, -1, 1]));
        assert_eq!(poly_digest(&p), poly_digest(&p.clone()));
        assert_eq!(poly_json(&p), r#"{"leaves":[],"coeffs":["1/1","-1/1","1/1"]}"#);
    }

    #[test]
    fn initial_state_round_trips() {
        let s = ConstructionState::init(1).unwrap();
        let text = state_to_json(&s);
        let back = state_from_json(&text).unwrap();
        assert_eq!(state_to_json(&back), text);
        assert!(!text.contains('.'));
    }

    #[test]
    fn wrong_format_is_a_parse_error() {
        let e = state_from_json(r#"{"format":"other"}"#).unwrap_err();
        assert_eq!(e.code(), "parse");
    }
}
