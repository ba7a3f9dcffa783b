//! Input records, report records and serde helpers.

/// Serialize a BigInt as a decimal string.
pub mod bigint_str {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Integers given as JSON numbers or decimal strings.
pub mod int_or_str {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        N(i64),
        S(String),
    }

    fn conv<E: serde::de::Error>(r: Raw) -> Result<BigInt, E> {
        match r {
            Raw::N(n) => Ok(BigInt::from(n)),
            Raw::S(s) => s.trim().parse().map_err(E::custom),
        }
    }

    pub fn vec<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Raw>::deserialize(d)?.into_iter().map(conv).collect()
    }

    pub fn opt_vec<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<BigInt>>, D::Error> {
        Option::<Vec<Raw>>::deserialize(d)?.map(|v| v.into_iter().map(conv).collect()).transpose()
    }

    pub fn opt<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        Option::<Raw>::deserialize(d)?.map(conv).transpose()
    }
}

pub mod bigint_vec {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(x.iter().map(|c| c.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|s| s.parse().map_err(serde::de::Error::custom)).collect()
    }
}

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::padic::{PadicContext, PadicElement};

/// A p-adic value as its stored rational representative and absolute precision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicRecord {
    pub value: String,
    pub precision: i64,
}

impl PadicRecord {
    pub fn from_element(a: &PadicElement) -> Self {
        PadicRecord { value: a.to_rational().to_string(), precision: a.abs_prec() }
    }

    pub fn to_element(&self, ctx: &PadicContext) -> crate::error::Result<PadicElement> {
        let q: BigRational = self.value.parse().map_err(|_| crate::error::Error::Invalid(format!("bad rational {}", self.value)))?;
        Ok(PadicElement::from_rational(ctx, &q).truncate_abs(self.precision))
    }
}

use crate::chabauty::{ChabautyReport, CurveRecord};

pub const SCHEMA_VERSION: u32 = 1;

/// One line of report output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub schema_version: u32,
    pub p: u64,
    pub n: i64,
    pub e: u32,
    pub report: ChabautyReport,
    /// Wall-clock time; the only field that varies between identical runs.
    pub duration_ms: u64,
}

impl ReportRecord {
    pub fn new(report: ChabautyReport, duration: std::time::Duration) -> Self {
        ReportRecord {
            schema_version: SCHEMA_VERSION,
            p: report.p,
            n: report.n,
            e: report.e,
            report,
            duration_ms: duration.as_millis() as u64,
        }
    }
}

/// Parse one curve record, rejecting curves the pipeline cannot take.
pub fn parse_record(text: &str) -> crate::error::Result<CurveRecord> {
    let rec: CurveRecord = serde_json::from_str(text).map_err(|e| crate::error::Error::Invalid(e.to_string()))?;
    rec.curve()?;
    Ok(rec)
}

/// Curve records from JSON lines; blank lines and lines starting with '#' are skipped.
/// Errors carry the 1-based line number.
pub fn parse_jsonl(text: &str) -> Vec<(usize, Result<CurveRecord, String>)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| (i + 1, parse_record(l).map_err(|e| format!("line {}: {}", i + 1, e))))
        .collect()
}
