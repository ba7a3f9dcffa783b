//! The full run: prime choice, divisors, vanishing differentials, disk solving with
//! e-escalation, classification and report.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::classify::{classify_point, ClassifyContext, PointClassification, PointTag};
use super::{chabauty_set, vanishing_differentials, DiskSummary};
use crate::coleman::{realize_nf_points, ColemanEngine, DivisorSpec, NumberFieldPointSpec, YRule};
use crate::curve::{rational_point_search, FpPoint, PicardCurve, RationalPoint};
use crate::error::{Error, Result};
use crate::io::{bigint_vec, int_or_str, PadicRecord};
use crate::padic::next_prime;

/// Points over the roots of g, with y given by h(x), by residues, or as the unique cube root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(serialize_with = "bigint_vec::serialize", deserialize_with = "int_or_str::vec")]
    pub g: Vec<BigInt>,
    #[serde(default, skip_serializing_if = "Option::is_none", serialize_with = "ser_opt", deserialize_with = "int_or_str::opt_vec")]
    pub h: Option<Vec<BigInt>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branches: Option<Vec<u64>>,
}

fn ser_opt<S: serde::Serializer>(x: &Option<Vec<BigInt>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => bigint_vec::serialize(v, s),
        None => s.serialize_none(),
    }
}

impl GeneratorSpec {
    pub fn to_spec(&self) -> NumberFieldPointSpec {
        let y_rule = match (&self.h, &self.branches) {
            (Some(h), _) => YRule::Poly(h.clone()),
            (None, Some(b)) => YRule::Branches(b.clone()),
            (None, None) => YRule::Unique,
        };
        NumberFieldPointSpec { g: self.g.clone(), y_rule }
    }
}

/// One input curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(serialize_with = "bigint_vec::serialize", deserialize_with = "int_or_str::vec")]
    pub f: Vec<BigInt>,
    #[serde(default, skip_serializing_if = "Option::is_none", serialize_with = "ser_opt_int", deserialize_with = "int_or_str::opt")]
    pub disc: Option<BigInt>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<GeneratorSpec>,
    /// Rational points (x, y) as decimal fractions, each giving the divisor P - infinity.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<(String, String)>,
}

fn ser_opt_int<S: serde::Serializer>(x: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

impl CurveRecord {
    pub fn from_i64(f: &[i64]) -> Self {
        CurveRecord { label: None, f: f.iter().map(|&c| BigInt::from(c)).collect(), disc: None, generators: vec![], points: vec![] }
    }

    pub fn curve(&self) -> Result<PicardCurve> {
        let c = PicardCurve::new(&self.f, self.disc.clone())?;
        Ok(match &self.label {
            Some(l) => c.with_label(l),
            None => c,
        })
    }

    pub fn rational_points(&self) -> Result<Vec<RationalPoint>> {
        self.points
            .iter()
            .map(|(x, y)| {
                let parse = |s: &str| s.trim().parse::<BigRational>().map_err(|_| Error::Invalid(format!("bad rational {s}")));
                Ok(RationalPoint::Affine { x: parse(x)?, y: parse(y)? })
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineParams {
    pub precision: i64,
    pub e0: u32,
    pub e_increment: u32,
    pub e_cap: u32,
    pub prime: Option<u64>,
    pub relation_bound: i64,
    pub search_height: i64,
    pub algdep_degree: usize,
    pub algdep_height: u64,
}

impl Default for PipelineParams {
    fn default() -> Self {
        PipelineParams {
            precision: 15,
            e0: 40,
            e_increment: 20,
            e_cap: 200,
            prime: None,
            relation_bound: 50,
            search_height: 1000,
            algdep_degree: 4,
            algdep_height: 1_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "reason", rename_all = "snake_case")]
pub enum RunStatus {
    Success,
    Failure(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportPoint {
    pub disk: FpPoint,
    pub certified_digits: u32,
    pub classification: PointClassification,
}

/// (p, e) tried and what happened.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attempt {
    pub p: u64,
    pub e: u32,
    pub outcome: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChabautyReport {
    pub label: Option<String>,
    pub p: u64,
    pub n: i64,
    pub e: u32,
    /// Digits guaranteed for the integrals.
    pub integral_precision: i64,
    pub vanishing_precision: i64,
    pub vanishing_dimension: usize,
    /// (int_D omega_i) for each input divisor.
    pub divisor_integrals: Vec<Vec<PadicRecord>>,
    /// Exact rational points found in X(Q_p)_1.
    pub s: Vec<RationalPoint>,
    /// The remaining points of X(Q_p)_1.
    pub t: Vec<ReportPoint>,
    pub status: RunStatus,
    pub disks: Vec<DiskSummary>,
    pub attempts: Vec<Attempt>,
    /// Points found by the height search.
    pub search: Vec<RationalPoint>,
}

impl ChabautyReport {
    pub fn failed(label: Option<String>, n: i64, reason: String) -> Self {
        ChabautyReport {
            label,
            p: 0,
            n,
            e: 0,
            integral_precision: 0,
            vanishing_precision: 0,
            vanishing_dimension: 0,
            divisor_integrals: vec![],
            s: vec![],
            t: vec![],
            status: RunStatus::Failure(reason),
            disks: vec![],
            attempts: vec![],
            search: vec![],
        }
    }

    pub fn is_success(&self) -> bool {
        self.status == RunStatus::Success
    }

    /// Size of X(Q_p)_1.
    pub fn set_size(&self) -> usize {
        self.s.len() + self.t.len()
    }
}

fn choose_prime(curve: &PicardCurve, gens: &[NumberFieldPointSpec], from: u64) -> u64 {
    let mut p = from.max(5);
    loop {
        p = curve.good_prime(p, None);
        if gens.iter().all(|g| crate::curve::splits_mod(&g.g, p)) {
            return p;
        }
        p = next_prime(p + 1);
    }
}

enum Outcome {
    Done(Box<ChabautyReport>),
    DoubleRoot(String),
}

fn divisors_at(
    engine: &ColemanEngine,
    gens: &[NumberFieldPointSpec],
    points: &[RationalPoint],
) -> Result<Vec<DivisorSpec>> {
    let mut out = vec![];
    for g in gens {
        out.push(DivisorSpec::sum_minus_infinity(realize_nf_points(g, &engine.curve, &engine.ctx)?));
    }
    for pt in points {
        out.push(DivisorSpec::point_minus_infinity(pt.to_padic(&engine.ctx)));
    }
    Ok(out)
}

fn attempt(
    curve: &PicardCurve,
    p: u64,
    gens: &[NumberFieldPointSpec],
    points: &[RationalPoint],
    search: &[RationalPoint],
    params: &PipelineParams,
    report: &mut ChabautyReport,
) -> Outcome {
    let n = params.precision;
    let mut e = params.e0;
    loop {
        if e > params.e_cap {
            report.status = RunStatus::Failure(format!("IncreaseE: e would exceed the cap {}", params.e_cap));
            return Outcome::Done(Box::new(report.clone()));
        }
        let step = (|| -> Result<_> {
            let engine = ColemanEngine::new(curve, p, n, e)?;
            let divisors = divisors_at(&engine, gens, points)?;
            let basis = vanishing_differentials(&engine, &divisors)?;
            let (pts, disks) = chabauty_set(&engine, &basis)?;
            Ok((engine, basis, pts, disks))
        })();
        let (engine, basis, pts, disks) = match step {
            Ok(v) => v,
            Err(Error::IncreaseE(_)) | Err(Error::PrecisionExhausted(_)) => {
                let why = step.err().map(|e| e.to_string()).unwrap_or_default();
                report.attempts.push(Attempt { p, e, outcome: why });
                e += params.e_increment.max(1);
                continue;
            }
            Err(Error::DoubleRoot(why)) => {
                report.attempts.push(Attempt { p, e, outcome: format!("double root: {why}") });
                return Outcome::DoubleRoot(why);
            }
            Err(other) => {
                report.attempts.push(Attempt { p, e, outcome: other.to_string() });
                report.p = p;
                report.e = e;
                report.status = RunStatus::Failure(other.to_string());
                return Outcome::Done(Box::new(report.clone()));
            }
        };
        report.attempts.push(Attempt { p, e, outcome: "ok".into() });
        let ctx = ClassifyContext {
            engine: &engine,
            divisor_integrals: &basis.divisor_integrals,
            relation_bound: params.relation_bound,
            algdep_degree: params.algdep_degree,
            height_bound: BigInt::from(params.algdep_height),
            min_digits: (basis.precision - 2).max(3),
        };
        let mut s = vec![];
        let mut t = vec![];
        for cp in &pts {
            let cls = classify_point(&cp.point, &ctx);
            match &cls.tag {
                PointTag::Rational { point } => s.push(point.clone()),
                _ => t.push(ReportPoint { disk: cp.disk, certified_digits: cp.certified_digits, classification: cls }),
            }
        }
        report.p = p;
        report.e = e;
        report.integral_precision = engine.reported_precision();
        report.vanishing_precision = basis.precision;
        report.vanishing_dimension = basis.vectors.len();
        report.divisor_integrals =
            basis.divisor_integrals.iter().map(|r| r.iter().map(PadicRecord::from_element).collect()).collect();
        report.disks = disks;
        let missing: Vec<String> = search.iter().filter(|q| !s.contains(q)).map(|q| q.to_string()).collect();
        report.s = s;
        report.t = t;
        report.status = if missing.is_empty() {
            RunStatus::Success
        } else {
            RunStatus::Failure(format!("known rational points missing from X(Q_p)_1: {}", missing.join(", ")))
        };
        return Outcome::Done(Box::new(report.clone()));
    }
}

/// Compute X(Q_p)_1 for one curve and classify its points.
pub fn run_pipeline(record: &CurveRecord, params: &PipelineParams) -> ChabautyReport {
    let label = record.label.clone();
    let n = params.precision;
    let curve = match record.curve() {
        Ok(c) => c,
        Err(e) => return ChabautyReport::failed(label, n, e.to_string()),
    };
    let gens: Vec<NumberFieldPointSpec> = record.generators.iter().map(|g| g.to_spec()).collect();
    let mut points = match record.rational_points() {
        Ok(p) => p,
        Err(e) => return ChabautyReport::failed(label, n, e.to_string()),
    };
    if let Some(bad) = points.iter().find(|q| !q.on_curve(&curve)) {
        return ChabautyReport::failed(label, n, format!("{bad} is not on the curve"));
    }
    let mut search = rational_point_search(&curve, params.search_height);
    search.sort_by_key(|q| q.to_string());
    if gens.is_empty() && points.is_empty() {
        // rank one is assumed: the first non-Weierstrass rational point gives the divisor
        match search.iter().find(|q| matches!(q, RationalPoint::Affine { y, .. } if *y != BigRational::from_integer(0.into()))) {
            Some(q) => points.push(q.clone()),
            None => return ChabautyReport::failed(label, n, "no divisor: supply generators or points".into()),
        }
    }
    let mut report = ChabautyReport::failed(label, n, String::new());
    report.search = search.clone();
    let p = match params.prime {
        Some(p) => {
            if let Some(why) = curve.prime_obstruction(p) {
                report.status = RunStatus::Failure(format!("prime {p} refused: {why}"));
                return report;
            }
            if let Some(g) = gens.iter().find(|g| !crate::curve::splits_mod(&g.g, p)) {
                report.status = RunStatus::Failure(format!("prime {p} refused: {:?} does not split", g.g));
                return report;
            }
            p
        }
        None => choose_prime(&curve, &gens, 5),
    };
    match attempt(&curve, p, &gens, &points, &search, params, &mut report) {
        Outcome::Done(r) => *r,
        Outcome::DoubleRoot(_) => {
            let q = choose_prime(&curve, &gens, next_prime(p + 1));
            match attempt(&curve, q, &gens, &points, &search, params, &mut report) {
                Outcome::Done(r) => *r,
                Outcome::DoubleRoot(why) => {
                    report.p = q;
                    report.status = RunStatus::Failure(format!("DoubleRoot at {p} and {q}: {why}"));
                    report
                }
            }
        }
    }
}
