//! Coleman integrals of the basis forms. Inside a residue disk they are tiny integrals of
//! local expansions; between disks they come from the Frobenius linear system
//! (I - M) v = c, entering bad disks through points over Q_p(p^(1/e)).
//!
//! Everything is organized around a potential J with  int_P^Q omega_i = J_i(Q) - J_i(P).
//! For an anchor point R where the exact parts converge,
//!   J(R) = (I - M)^(-1) (f(R) + int_{phi R}^R omega),
//! and elsewhere in the disk J(P) = J(R) + int_R^P omega.

mod points;

pub use points::{realize_nf_points, DivisorSpec, NumberFieldPointSpec, YRule};

use crate::curve::{Antiderivative, SparseLaurent, CurvePoint, DiskKind, FpPoint, LocalCoordinates, LocalKind, PicardCurve, ResidueDisk};
use crate::error::{Error, Result};
use crate::frobenius::{frobenius_matrix_with, working_parameters, FrobeniusData, BASIS};
use crate::padic::linalg::{self, Matrix};
use crate::padic::{PadicContext, PadicElement, RamifiedElement};

/// Extra digits carried beyond the requested precision.
pub const GUARD_DIGITS: i64 = 4;

/// Boundary points need e >= E_FACTOR * p for the exact parts to converge at a usable rate.
pub const E_FACTOR: u64 = 4;

/// Uniformizer value of a point in a disk.
#[derive(Clone, Debug)]
pub enum TValue {
    Qp(PadicElement),
    Ram(RamifiedElement),
}

/// Point S with t(S) = pi on the boundary of a bad disk, and the uniformizer of phi(S).
#[derive(Clone, Debug)]
pub struct BoundaryPoint {
    pub t: RamifiedElement,
    pub x: RamifiedElement,
    pub y: RamifiedElement,
    pub phi_t: RamifiedElement,
}

impl BoundaryPoint {
    pub fn point(&self) -> CurvePoint {
        CurvePoint::Ramified { x: self.x.clone(), y: self.y.clone() }
    }
}

#[derive(Clone, Debug)]
pub struct DiskData {
    pub disk: ResidueDisk,
    pub center: CurvePoint,
    pub local: LocalCoordinates,
    pub forms: Vec<SparseLaurent>,
    anti: Vec<Antiderivative>,
    /// One past the largest exponent present in the antiderivatives.
    anti_end: i64,
    pub boundary: Option<BoundaryPoint>,
    anchor_t: TValue,
    anchor_potential: Vec<RamifiedElement>,
    anchor_anti: Vec<RamifiedElement>,
}

#[derive(Clone, Debug)]
pub struct ColemanEngine {
    pub curve: PicardCurve,
    pub ctx: PadicContext,
    /// Requested output digits.
    pub digits: i64,
    pub e: u32,
    pub frob: FrobeniusData,
    /// (I - M)^(-1)
    pub inv: Matrix,
    /// ord_p det(I - M)
    pub det_valuation: i64,
    pub disks: Vec<DiskData>,
    /// Convergence bound for exact parts at boundary points, in pi-units.
    pub boundary_bound: i64,
    target: i64,
    j_inf: Vec<RamifiedElement>,
}

fn floor_log(p: u64, n: i64) -> i64 {
    let mut k = 0;
    let mut q = p as i64;
    while q <= n {
        k += 1;
        q = q.saturating_mul(p as i64);
    }
    k
}

/// Smallest n0 such that n * v - e * floor(log_p n) >= target for every n >= n0.
fn first_safe(p: u64, v: i64, e: i64, target: i64) -> i64 {
    let ok = |n: i64| n * v - e * floor_log(p, n) >= target;
    let mut n0 = (target / v).max(1);
    'outer: loop {
        if !ok(n0) {
            n0 += 1;
            continue;
        }
        // between consecutive powers of p the expression increases, so test those
        let mut q: i64 = 1;
        while q <= n0 {
            q *= p as i64;
        }
        while q * v < target + e * 64 {
            if !ok(q) {
                n0 = q + 1;
                continue 'outer;
            }
            q *= p as i64;
        }
        return n0;
    }
}

/// Lower bound, in pi-units, for sum_{n >= cut} c_n t^n / n with integral c_n and v(t) = v.
fn tail_bound(p: u64, v: i64, e: i64, cut: i64) -> i64 {
    let mut best = cut * v - e * floor_log(p, cut);
    let mut q: i64 = 1;
    while q <= cut {
        q *= p as i64;
    }
    for _ in 0..64 {
        let b = q * v - e * floor_log(p, q);
        best = best.min(b);
        if q * v > best + e * 64 {
            break;
        }
        q = q.saturating_mul(p as i64);
    }
    best
}

impl ColemanEngine {
    /// Build the engine for N output digits with boundary points over Q_p(p^(1/e)).
    pub fn new(curve: &PicardCurve, p: u64, digits: i64, e: u32) -> Result<Self> {
        if let Some(why) = curve.prime_obstruction(p) {
            return Err(Error::BadPrime(p, why));
        }
        if (e as u64) < E_FACTOR * p {
            return Err(Error::IncreaseE(e));
        }
        let target = digits + GUARD_DIGITS;
        let ei = e as i64;
        let pi = p as i64;
        let m_max = 2 * pi / 3;
        let mut terms: i64 = 1;
        let lambda = loop {
            let (lambda, _, _) = working_parameters(p, 0, terms as usize);
            if terms * (ei - 3 * pi) - ei * lambda - 3 * m_max >= ei * (target + 2) {
                break lambda;
            }
            terms += 1;
        };
        let boundary_bound = terms * (ei - 3 * pi) - ei * lambda - 3 * m_max;
        let ceil_div = |a: i64, b: i64| (a + b - 1) / b;
        let coeff_digits = target + 2 + ceil_div(3 * (m_max + pi * terms), ei) + ceil_div(9 * pi + 21, ei) + 3;
        let ctx = PadicContext::new(p, (coeff_digits + 8) as u32);
        let frob = frobenius_matrix_with(curve, &ctx, Some(terms as usize), coeff_digits)?;
        if frob.precision < target {
            return Err(Error::PrecisionExhausted(format!(
                "Frobenius matrix known to {} digits, {} needed",
                frob.precision, target
            )));
        }
        let one_minus_m: Matrix = (0..6)
            .map(|i| {
                (0..6)
                    .map(|j| {
                        let id = if i == j { PadicElement::one(&ctx) } else { PadicElement::zero(&ctx) };
                        id.sub(&frob.matrix[i][j])
                    })
                    .collect()
            })
            .collect();
        let det = linalg::determinant(&one_minus_m);
        let det_valuation = det
            .valuation()
            .finite()
            .ok_or_else(|| Error::PrecisionExhausted("det(I - M) vanishes to precision".into()))?;
        let inv = linalg::inverse(&one_minus_m)?;
        let mut engine = ColemanEngine {
            curve: curve.clone(),
            ctx,
            digits,
            e,
            frob,
            inv,
            det_valuation,
            disks: vec![],
            boundary_bound,
            target,
            j_inf: vec![],
        };
        let disks = curve.classify_disks(p);
        let mut data = Vec::with_capacity(disks.len());
        for d in disks {
            data.push(engine.build_disk(d)?);
        }
        engine.disks = data;
        let inf = engine
            .disks
            .iter()
            .position(|d| d.disk.kind == DiskKind::BadInfinite)
            .expect("disk at infinity");
        let d = &engine.disks[inf];
        engine.j_inf = (0..3).map(|i| d.anchor_potential[i].sub(&d.anchor_anti[i])).collect();
        Ok(engine)
    }

    pub fn p(&self) -> u64 {
        self.ctx.p()
    }

    fn pi(&self) -> RamifiedElement {
        RamifiedElement::pi(&self.ctx, self.e)
    }

    fn build_disk(&self, disk: ResidueDisk) -> Result<DiskData> {
        let p = self.p();
        let ei = self.e as i64;
        let goal = ei * (self.target + 2);
        let center = self.curve.disk_center(&disk, &self.ctx);
        let (local, anti_end) = match disk.kind {
            DiskKind::Good => {
                let n0 = first_safe(p, ei, ei, goal);
                let digits = self.target + 4 + floor_log(p, n0);
                let (x0, y0) = match &center {
                    CurvePoint::Affine { x, y } => (x.clone(), y.clone()),
                    _ => unreachable!(),
                };
                (LocalCoordinates::good(&self.curve, &x0, &y0, n0 as usize, digits), n0)
            }
            DiskKind::BadFinite | DiskKind::BadInfinite => {
                let n0 = first_safe(p, 1, ei, goal + 8);
                let len = (n0 / 3 + 3) as usize;
                let digits = self.target + 4 + floor_log(p, n0);
                let lc = match disk.kind {
                    DiskKind::BadFinite => LocalCoordinates::bad_finite(&self.curve, center.x().unwrap(), len, digits),
                    _ => LocalCoordinates::infinity(&self.curve, &self.ctx, len, digits),
                };
                (lc, n0)
            }
        };
        let forms: Vec<SparseLaurent> = BASIS.iter().map(|b| local.form(b.a, b.k)).collect();
        let anti: Vec<Antiderivative> = forms.iter().map(|f| local.antiderivative(f)).collect::<Result<_>>()?;
        // the last exponent actually present, plus one
        let present = anti.iter().map(|a| a.offset + (a.step * a.terms.len()) as i64).min().unwrap();
        let anti_end = anti_end.min(present);
        let mut d = DiskData {
            disk,
            center,
            local,
            forms,
            anti,
            anti_end,
            boundary: None,
            anchor_t: TValue::Qp(PadicElement::zero(&self.ctx)),
            anchor_potential: vec![],
            anchor_anti: vec![],
        };
        let e_vec: Vec<RamifiedElement> = match d.disk.kind {
            DiskKind::Good => {
                let (x, y) = match &d.center {
                    CurvePoint::Affine { x, y } => (x.clone(), y.clone()),
                    _ => unreachable!(),
                };
                let x0 = x.lift_symmetric();
                let tphi = PadicElement::from_bigint(&self.ctx, &(x0.pow(p as u32) - &x0));
                let mut out = vec![];
                for i in 0..6 {
                    let fi = self.frob.exact[i].eval(&x, &y)?;
                    let a = self.anti_at(&d, i, &TValue::Qp(tphi.clone()))?;
                    out.push(RamifiedElement::from_padic(&fi, self.e).sub(&a));
                }
                out
            }
            _ => {
                let b = self.boundary_point(&d)?;
                let fx = match d.disk.kind {
                    DiskKind::BadFinite => RamifiedElement::pi_power(&self.ctx, self.e, 3),
                    _ => b.y.pow(3)?,
                };
                let mut out = vec![];
                for i in 0..6 {
                    let fi = self.frob.exact[i].eval_ramified(&b.x, &b.y, &fx)?.truncate(self.boundary_bound);
                    let here = self.anti_at(&d, i, &TValue::Ram(b.t.clone()))?;
                    let there = self.anti_at(&d, i, &TValue::Ram(b.phi_t.clone()))?;
                    out.push(fi.add(&here).sub(&there));
                }
                d.anchor_t = TValue::Ram(b.t.clone());
                d.boundary = Some(b);
                out
            }
        };
        d.anchor_potential = (0..6)
            .map(|i| {
                let mut s = RamifiedElement::zero(&self.ctx, self.e);
                for (j, ej) in e_vec.iter().enumerate() {
                    s = s.add(&ej.mul_padic(&self.inv[i][j]));
                }
                s
            })
            .collect();
        d.anchor_anti = (0..6)
            .map(|i| match &d.anchor_t {
                TValue::Qp(t) if t.is_zero() => Ok(RamifiedElement::zero(&self.ctx, self.e)),
                t => self.anti_at(&d, i, t),
            })
            .collect::<Result<_>>()?;
        Ok(d)
    }

    fn boundary_point(&self, d: &DiskData) -> Result<BoundaryPoint> {
        let p = self.p();
        let pi = self.pi();
        let lc = &d.local;
        match d.disk.kind {
            DiskKind::BadInfinite => {
                let x = RamifiedElement::pi_power(&self.ctx, self.e, -3);
                let y = lc.eval_ramified(&lc.y_series(), &pi);
                let phi_t = RamifiedElement::pi_power(&self.ctx, self.e, p as i64);
                Ok(BoundaryPoint { t: pi, x, y, phi_t })
            }
            DiskKind::BadFinite => {
                let x = lc.eval_ramified(&lc.x_series(), &pi);
                let y = pi.clone();
                // phi(y) = y^p (f(x^p) / f(x)^p)^(1/3) with f(x) = pi^3
                let xp = x.pow(p as i64)?;
                let mut fxp = RamifiedElement::zero(&self.ctx, self.e);
                for c in self.curve.f().iter().rev() {
                    fxp = fxp.mul(&xp).add(&RamifiedElement::one(&self.ctx, self.e).mul_bigint(c));
                }
                let ratio = fxp.shift_pi(-3 * p as i64);
                let s = ramified_cube_root_near_one(&ratio)?;
                let phi_t = s.shift_pi(p as i64);
                Ok(BoundaryPoint { t: pi, x, y, phi_t })
            }
            DiskKind::Good => Err(Error::WrongDisk),
        }
    }

    /// Antiderivative of omega_i at t, with the truncation tail accounted for.
    fn anti_at(&self, d: &DiskData, i: usize, t: &TValue) -> Result<RamifiedElement> {
        let p = self.p();
        let ei = self.e as i64;
        let anti = &d.anti[i];
        let v = match t {
            TValue::Qp(a) => a.valuation().finite().map(|v| v * ei),
            TValue::Ram(r) => r.valuation_pi(),
        };
        let Some(v) = v else {
            if anti.offset <= 0 {
                return Err(Error::PoleInDisk);
            }
            return Ok(RamifiedElement::zero(&self.ctx, self.e));
        };
        if v <= 0 {
            return Err(Error::WrongDisk);
        }
        let goal = ei * (self.target + 2);
        let cut = first_safe(p, v, ei, goal).min(d.anti_end);
        let keep = ((cut - anti.offset + anti.step as i64 - 1) / anti.step as i64).max(0) as usize;
        let keep = keep.min(anti.terms.len());
        let cut_exp = anti.offset + (keep * anti.step) as i64;
        let bound = tail_bound(p, v, ei, cut_exp.max(1));
        let short = Antiderivative { offset: anti.offset, step: anti.step, terms: anti.terms[..keep].to_vec() };
        let val = match t {
            TValue::Qp(a) => RamifiedElement::from_padic(&short.eval_at(&d.local, a), self.e),
            TValue::Ram(r) => short.eval_at_ramified(&d.local, r),
        };
        Ok(val.truncate(bound))
    }

    pub fn disk_index(&self, pt: &CurvePoint) -> Result<usize> {
        let red = pt.reduction(self.p())?;
        self.disks.iter().position(|d| d.disk.reduction == red).ok_or(Error::WrongDisk)
    }

    /// Uniformizer of a Q_p point in the local coordinate of its disk.
    pub fn t_value(&self, idx: usize, pt: &CurvePoint) -> Result<TValue> {
        let d = &self.disks[idx];
        match (pt, &d.local.kind) {
            (CurvePoint::Infinity, LocalKind::Infinity { .. }) => Ok(TValue::Qp(PadicElement::zero(&self.ctx))),
            (CurvePoint::Affine { x, .. }, LocalKind::Good { x0, .. }) => {
                let x = x.with_context(&self.ctx);
                Ok(TValue::Qp(x.sub(&PadicElement::from_bigint(&self.ctx, x0))))
            }
            (CurvePoint::Affine { y, .. }, LocalKind::BadFinite { .. }) => Ok(TValue::Qp(y.with_context(&self.ctx))),
            (CurvePoint::Affine { x, y }, LocalKind::Infinity { u }) => {
                // t = (x / y) u(t^3), iterated from t = x / y
                let x = x.with_context(&self.ctx);
                let y = y.with_context(&self.ctx);
                let q = x.try_div(&y)?;
                let us = SparseLaurent { offset: 0, step: 3, c: u.c.clone() };
                let mut t = q.clone();
                for _ in 0..(2 * self.ctx.n() + 4) {
                    let next = q.mul(&d.local.eval(&us, &t));
                    if next.sub(&t).is_zero() {
                        t = next;
                        break;
                    }
                    t = next;
                }
                Ok(TValue::Qp(t))
            }
            (CurvePoint::Ramified { .. }, _) => Err(Error::Invalid("ramified endpoints are internal".into())),
            _ => Err(Error::WrongDisk),
        }
    }

    /// J_i at a point; every basis form for affine points, regular forms only at infinity.
    fn potential(&self, pt: &CurvePoint) -> Result<Vec<RamifiedElement>> {
        let idx = self.disk_index(pt)?;
        let d = &self.disks[idx];
        let t = self.t_value(idx, pt)?;
        let n = if pt.is_infinity() { 3 } else { 6 };
        (0..n)
            .map(|i| {
                let a = self.anti_at(d, i, &t)?;
                Ok(d.anchor_potential[i].add(&a).sub(&d.anchor_anti[i]))
            })
            .collect()
    }

    fn project(&self, r: &RamifiedElement) -> PadicElement {
        let (q, rest) = r.project_to_qp();
        let prec = match rest {
            Some(v) => q.abs_prec().min(v.div_euclid(self.e as i64)),
            None => q.abs_prec(),
        };
        q.truncate_abs(prec)
    }

    /// int_P^Q omega_i for the six basis forms. P and Q must be affine Q_p points.
    pub fn basis_integrals(&self, p: &CurvePoint, q: &CurvePoint) -> Result<Vec<PadicElement>> {
        if p.is_infinity() || q.is_infinity() {
            return Err(Error::PoleInDisk);
        }
        let jp = self.potential(p)?;
        let jq = self.potential(q)?;
        Ok((0..6).map(|i| self.project(&jq[i].sub(&jp[i]))).collect())
    }

    /// int_infinity^Q omega_i for the three regular forms.
    pub fn integrals_from_infinity(&self, q: &CurvePoint) -> Result<Vec<PadicElement>> {
        let jq = self.potential(q)?;
        Ok((0..3).map(|i| self.project(&jq[i].sub(&self.j_inf[i]))).collect())
    }

    /// int_P^Q of sum_i coeffs[i] omega_i. Coefficients beyond index 2 need affine endpoints.
    pub fn integral(&self, p: &CurvePoint, q: &CurvePoint, coeffs: &[PadicElement]) -> Result<PadicElement> {
        let regular_only = coeffs.iter().skip(3).all(|c| c.is_zero());
        let v = if regular_only && (p.is_infinity() || q.is_infinity()) {
            let a = self.integrals_from_infinity(p)?;
            let b = self.integrals_from_infinity(q)?;
            (0..3).map(|i| b[i].sub(&a[i])).collect::<Vec<_>>()
        } else {
            self.basis_integrals(p, q)?
        };
        let mut s = PadicElement::zero(&self.ctx);
        for (c, x) in coeffs.iter().zip(&v) {
            s = s.add(&c.with_context(&self.ctx).mul(x));
        }
        Ok(s)
    }

    /// Tiny integral of omega_i between two Q_p points of one disk.
    pub fn tiny_integral(&self, p: &CurvePoint, q: &CurvePoint, i: usize) -> Result<PadicElement> {
        let a = self.disk_index(p)?;
        let b = self.disk_index(q)?;
        if a != b {
            return Err(Error::NotSameDisk);
        }
        let d = &self.disks[a];
        let tp = self.t_value(a, p)?;
        let tq = self.t_value(a, q)?;
        let v = self.anti_at(d, i, &tq)?.sub(&self.anti_at(d, i, &tp)?);
        Ok(self.project(&v))
    }

    /// sum_j m_j int_infinity^{P_j} omega_i for the regular forms.
    pub fn divisor_integral(&self, div: &DivisorSpec) -> Result<Vec<PadicElement>> {
        div.check_degree()?;
        let mut acc = vec![PadicElement::zero(&self.ctx); 3];
        for (pt, m) in &div.points {
            let v = self.integrals_from_infinity(pt)?;
            for i in 0..3 {
                acc[i] = acc[i].add(&v[i].mul_int(*m));
            }
        }
        Ok(acc)
    }

    /// int_infinity^center omega_i (regular forms) for a disk.
    pub fn disk_constant(&self, idx: usize) -> Result<Vec<PadicElement>> {
        let c = self.disks[idx].center.clone();
        self.integrals_from_infinity(&c)
    }

    /// The boundary point of a bad disk.
    pub fn boundary(&self, idx: usize) -> Option<&BoundaryPoint> {
        self.disks[idx].boundary.as_ref()
    }

    /// Precision guaranteed for integrals: N minus the loss from det(I - M).
    pub fn reported_precision(&self) -> i64 {
        self.target - GUARD_DIGITS + 2 - self.det_valuation.max(0)
    }

    /// Working (internal) digit target.
    pub fn work_target(&self) -> i64 {
        self.target
    }

    pub fn disk_reductions(&self) -> Vec<FpPoint> {
        self.disks.iter().map(|d| d.disk.reduction).collect()
    }
}

/// Cube root of a ramified element congruent to 1, by Newton iteration.
fn ramified_cube_root_near_one(a: &RamifiedElement) -> Result<RamifiedElement> {
    let ctx = a.ctx().clone();
    let e = a.e();
    let one = RamifiedElement::one(&ctx, e);
    if !a.sub(&one).valuation_pi().is_none_or(|v| v > 0) {
        return Err(Error::NoCubeRoot(0));
    }
    let mut s = one;
    for _ in 0..200 {
        // s <- s - (s^3 - a) / (3 s^2)
        let s2 = s.square();
        let num = s2.mul(&s).sub(a);
        if num.is_zero() {
            break;
        }
        let step = num.div(&s2.mul_int(3));
        s = s.sub(&step);
    }
    Ok(s)
}
