use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::config::{Check, Experiment};
use crate::coeff::mpoly::{MPoly, RatFunc};
use crate::coeff::{Domain, FieldDescriptor, FieldElement};
use crate::error::{Error, Result};
use crate::freealg::{GAMatrix, GroupAlgebraElement};
use crate::rank::{discrepancy_bound, integral_scaling, normalized_rank, normalized_rank_mod, reduce_matrix};
use crate::sofic::{defect_profile, FiniteFSet};
use crate::spectra::{moment_convergence_check, semicontinuity_check, MomentSequence};
use crate::twist::twist_matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    Info,
    Skip,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Info => "INFO",
            Verdict::Skip => "SKIP",
        }
    }

    pub fn parse(s: &str) -> Option<Verdict> {
        match s {
            "PASS" => Some(Verdict::Pass),
            "FAIL" => Some(Verdict::Fail),
            "INFO" => Some(Verdict::Info),
            "SKIP" => Some(Verdict::Skip),
            _ => None,
        }
    }
}

/// One line of the results table. Step 0 refers to the free group itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunRow {
    pub step: usize,
    pub set_size: usize,
    pub field: String,
    pub rank: Option<BigRational>,
    pub check: String,
    pub gap: Option<BigRational>,
    pub bound: Option<String>,
    pub verdict: Verdict,
    pub ms: u128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunRecord {
    pub hash: String,
    pub name: String,
    pub rows: Vec<RunRow>,
    pub notes: Vec<String>,
    pub summary: Vec<String>,
    pub moments: Vec<MomentSequence>,
}

impl RunRecord {
    pub fn count(&self, v: Verdict) -> usize {
        self.rows.iter().filter(|r| r.verdict == v).count()
    }

    pub fn passed(&self) -> bool {
        self.count(Verdict::Fail) == 0
    }
}

#[derive(Debug, Default)]
struct Part {
    rows: Vec<RunRow>,
    notes: Vec<String>,
    summary: Vec<String>,
    moments: Vec<MomentSequence>,
}

fn rat_text(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn ms(t: Instant) -> u128 {
    t.elapsed().as_millis()
}

/// `rk_G(A)` for the abelian quotient `ℤ^d`: the rank of `A` over
/// `ℚ(x₁..x_d)` after sending each word to the monomial of its exponent
/// sums. Only for coefficients in ℚ.
pub fn abelian_limit(a: &GAMatrix) -> Result<BigRational> {
    if !matches!(a.domain().descriptor(), FieldDescriptor::Rationals) {
        return Err(Error::Unsupported("abelian limit over non-rational coefficients".into()));
    }
    let d = a.rank().max(1);
    let names: Vec<String> = (1..=d).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let field = Domain::fraction_field(&refs)?;
    let mut out = GAMatrix::zeros(&field, d, a.rows(), a.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let mut acc = field.zero();
            for (w, c) in a.get(i, j).terms() {
                let c = a.domain().to_rational(c).expect("rational coefficient");
                let mut num = MPoly::constant(d, c);
                let mut den = MPoly::one(d);
                for (k, &e) in w.exponent_sums(d).iter().enumerate() {
                    let m = MPoly::var(d, k).pow(e.unsigned_abs() as u32);
                    if e >= 0 {
                        num = num.mul(&m);
                    } else {
                        den = den.mul(&m);
                    }
                }
                acc = field.add(&acc, &FieldElement::R(RatFunc::new(num, den)?));
            }
            out.set(i, j, GroupAlgebraElement::constant(&field, d, acc));
        }
    }
    Ok(normalized_rank(&out, &FiniteFSet::trivial(d))?.normalized)
}

fn known_limit(e: &Experiment) -> Result<Option<(BigRational, String)>> {
    if let Some(l) = &e.limit {
        return Ok(Some((l.clone(), "configured".into())));
    }
    if e.exact_preset {
        let x = &e.sets()[0];
        return Ok(Some((normalized_rank(&e.matrix, x)?.normalized, "finite group".into())));
    }
    if matches!(e.config.preset, super::config::PresetSpec::ZdCongruence { .. })
        && matches!(e.domain.descriptor(), FieldDescriptor::Rationals)
    {
        return Ok(Some((abelian_limit(&e.matrix)?, "rank over the fraction field of Z^d".into())));
    }
    Ok(None)
}

/// `rk_{X_k}(A)` along the series, with the gap to the limit when known.
pub fn run_convergence(e: &Experiment) -> Result<Vec<RunRow>> {
    Ok(convergence(e)?.rows)
}

fn convergence(e: &Experiment) -> Result<Part> {
    let mut part = Part::default();
    let limit = known_limit(e)?;
    match &limit {
        Some((l, why)) => part.summary.push(format!("convergence: limit {} ({why})", rat_text(l))),
        None => part.summary.push("convergence: no known limit".into()),
    }
    let rows = e
        .sets()
        .par_iter()
        .enumerate()
        .map(|(k, x)| {
            let t = Instant::now();
            let r = normalized_rank(&e.matrix, x)?;
            let gap = limit.as_ref().map(|(l, _)| (l - &r.normalized).abs());
            let verdict = match (&gap, e.exact_preset) {
                (Some(g), true) => {
                    if g.is_zero() {
                        Verdict::Pass
                    } else {
                        Verdict::Fail
                    }
                }
                _ => Verdict::Info,
            };
            Ok(RunRow {
                step: k + 1,
                set_size: x.size(),
                field: r.field,
                rank: Some(r.normalized),
                check: Check::Convergence.name().into(),
                gap,
                bound: None,
                verdict,
                ms: ms(t),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if !e.exact_preset {
        if let Some(oracle) = &e.approximation.oracle {
            for (k, x) in e.sets().iter().enumerate() {
                let radius = e.caps.defect_radius;
                match defect_profile(x, radius, Some(oracle), e.caps.ball) {
                    Ok(p) => {
                        let d = p.max_deviation().unwrap_or_else(BigRational::zero);
                        part.summary.push(format!("step {}: measured defect on ball({radius}) = {}", k + 1, rat_text(&d)));
                    }
                    Err(err) => part.notes.push(format!("step {}: defect not measured: {err}", k + 1)),
                }
            }
        }
    }
    part.rows = rows;
    Ok(part)
}

/// `rk_X(σ̃(A)) − k·rk_X(A)` per step; the difference must vanish whenever
/// every stabilizer of `X` maps to the identity.
pub fn run_twisted_check(e: &Experiment) -> Result<Vec<RunRow>> {
    Ok(twisted(e)?.rows)
}

fn twisted(e: &Experiment) -> Result<Part> {
    let sigma = e.sigma.as_ref().ok_or_else(|| Error::Config {
        path: "representation".into(),
        msg: "twisted check needs a representation".into(),
    })?;
    let twisted = twist_matrix(&e.matrix, sigma)?;
    let k = BigRational::from_integer(BigInt::from(sigma.dim()));
    let rows = e
        .sets()
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            let t = Instant::now();
            let rt = normalized_rank(&twisted, x)?;
            let ra = normalized_rank(&e.matrix, x)?;
            let diff = &rt.normalized - &k * &ra.normalized;
            let exact = sigma.stabilizers_act_trivially(x)?;
            let (check, verdict) = match (exact, diff.is_zero()) {
                (true, true) => ("twisted_exact", Verdict::Pass),
                (true, false) => ("twisted_exact", Verdict::Fail),
                (false, _) => ("twisted", Verdict::Info),
            };
            Ok(RunRow {
                step: i + 1,
                set_size: x.size(),
                field: rt.field,
                rank: Some(rt.normalized),
                check: check.into(),
                gap: Some(diff),
                bound: None,
                verdict,
                ms: ms(t),
            })
        })
        .collect::<Result<Vec<RunRow>>>()?;
    let tail = &rows[rows.len() / 2..];
    let max = tail.iter().filter_map(|r| r.gap.as_ref()).map(|g| g.abs()).max().unwrap_or_else(BigRational::zero);
    let mut part = Part::default();
    part.summary.push(format!("twisted: max |difference| over the last {} steps = {}", tail.len(), rat_text(&max)));
    part.rows = rows;
    Ok(part)
}

/// Rational rank against the rank mod each prime ideal, with the
/// discrepancy bound. Primes dividing a denominator are skipped.
pub fn run_modp_sweep(e: &Experiment) -> Result<Vec<RunRow>> {
    Ok(modp(e)?.rows)
}

fn modp(e: &Experiment) -> Result<Part> {
    let mut part = Part::default();
    let (scaled, scale) = integral_scaling(&e.matrix)?;
    if scale != BigInt::from(1) {
        part.notes.push(format!("bound computed for the matrix scaled by {scale} to integral coefficients"));
    }
    let mut ideals = Vec::new();
    for ideal in &e.primes {
        match reduce_matrix(&e.matrix, ideal) {
            Ok(_) => ideals.push((ideal, discrepancy_bound(&scaled, ideal)?)),
            Err(Error::PrimeDividesDenominator(p)) => {
                part.notes.push(format!("prime {p} skipped: it divides a denominator"));
            }
            Err(err) => return Err(err),
        }
    }
    let per_step = e
        .sets()
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            let t = Instant::now();
            let base = normalized_rank(&e.matrix, x)?;
            let base_ms = ms(t);
            let mut rows = Vec::with_capacity(ideals.len());
            for (ideal, bound) in &ideals {
                let t = Instant::now();
                let r = normalized_rank_mod(&e.matrix, x, ideal)?;
                let gap = &base.normalized - &r.normalized;
                let ok = !gap.is_negative() && bound.admits(&gap);
                rows.push(RunRow {
                    step: i + 1,
                    set_size: x.size(),
                    field: r.field,
                    rank: Some(r.normalized),
                    check: Check::ModpBound.name().into(),
                    gap: Some(gap),
                    bound: Some(format!("{:.9}", bound.value)),
                    verdict: if ok { Verdict::Pass } else { Verdict::Fail },
                    ms: base_ms + ms(t),
                });
            }
            Ok(rows)
        })
        .collect::<Result<Vec<_>>>()?;
    for (ideal, bound) in &ideals {
        if let Some(note) = &bound.note {
            part.notes.push(format!("{}: {note}", ideal.residue_field().name()));
        }
    }
    part.rows = per_step.into_iter().flatten().collect();
    Ok(part)
}

fn moments(e: &Experiment) -> Result<Part> {
    let mut part = Part::default();
    let t = Instant::now();
    let report = moment_convergence_check(&e.matrix, e.sets(), e.max_l, e.caps.terms, e.caps.ball)?;
    let free_ok = report.free.is_nonnegative() && report.free.hankel_psd();
    part.rows.push(RunRow {
        step: 0,
        set_size: 0,
        field: e.domain.name(),
        rank: None,
        check: "moments_free".into(),
        gap: None,
        bound: None,
        verdict: if free_ok { Verdict::Pass } else { Verdict::Fail },
        ms: ms(t),
    });
    for (i, row) in report.rows.iter().enumerate() {
        let exact_ok = !row.defect.as_ref().is_some_and(|d| d.is_zero()) || row.max_deviation.is_zero();
        let ok = row.moments.is_nonnegative() && row.moments.hankel_psd() && exact_ok;
        part.rows.push(RunRow {
            step: i + 1,
            set_size: row.set_size,
            field: e.domain.name(),
            rank: None,
            check: Check::Moments.name().into(),
            gap: Some(row.max_deviation.clone()),
            bound: None,
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            ms: 0,
        });
    }
    let free: Vec<String> = report.free.values.iter().map(rat_text).collect();
    part.summary.push(format!("moments: free ({})", free.join(", ")));
    part.summary.push(format!(
        "moments: deviation non-increasing {}; defect on ball({}) non-increasing {}",
        report.deviation_nonincreasing(),
        report.radius,
        report.defect_nonincreasing().map_or("unmeasured".to_string(), |b| b.to_string())
    ));
    part.moments.push(report.free.clone());
    part.moments.extend(report.rows.into_iter().map(|r| r.moments));
    Ok(part)
}

fn semicontinuity(e: &Experiment) -> Result<Part> {
    let mut part = Part::default();
    let jobs: Vec<(usize, &FiniteFSet, usize)> = e
        .sets()
        .iter()
        .enumerate()
        .flat_map(|(i, x)| (0..e.points.len()).map(move |j| (i, x, j)))
        .collect();
    let results = jobs
        .par_iter()
        .map(|&(i, x, j)| {
            let t = Instant::now();
            let point = &e.points[j];
            let label: Vec<String> = point.iter().map(rat_text).collect();
            let check = format!("semicontinuity[{}]", label.join(";"));
            match semicontinuity_check(&e.matrix, point, x) {
                Ok(rep) => Ok(Ok(RunRow {
                    step: i + 1,
                    set_size: x.size(),
                    field: rep.special.field.clone(),
                    rank: Some(rep.special.normalized.clone()),
                    check,
                    gap: Some(&rep.generic.normalized - &rep.special.normalized),
                    bound: None,
                    verdict: if rep.holds() { Verdict::Pass } else { Verdict::Fail },
                    ms: ms(t),
                })),
                Err(Error::DenominatorVanishes) => {
                    Ok(Err(format!("point ({}) skipped: a denominator vanishes", label.join(", "))))
                }
                Err(err) => Err(err),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    for r in results {
        match r {
            Ok(row) => part.rows.push(row),
            Err(note) => {
                if !part.notes.contains(&note) {
                    part.notes.push(note);
                }
            }
        }
    }
    Ok(part)
}

/// Runs every requested check in order.
pub fn run(e: &Experiment) -> Result<RunRecord> {
    let mut record = RunRecord {
        hash: e.hash.clone(),
        name: e.config.name.clone().unwrap_or_else(|| "experiment".into()),
        rows: vec![],
        notes: vec![],
        summary: vec![],
        moments: vec![],
    };
    for check in &e.checks {
        let part = match check {
            Check::Convergence => convergence(e)?,
            Check::Twisted => twisted(e)?,
            Check::ModpBound => modp(e)?,
            Check::Moments => moments(e)?,
            Check::Semicontinuity => semicontinuity(e)?,
        };
        record.rows.extend(part.rows);
        record.notes.extend(part.notes);
        record.summary.extend(part.summary);
        record.moments.extend(part.moments);
    }
    Ok(record)
}
