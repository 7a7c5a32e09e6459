//! Exact spectral moments of `T = BB*` on the free group and on finite
//! models, specialization of parametric matrices and the finite-level
//! semicontinuity comparison.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::coeff::{qpoly, Domain, FieldDescriptor, FieldElement};
use crate::error::{Error, Result};
use crate::freealg::{ball_size, GAMatrix};
use crate::rank::{assemble_operator, normalized_rank, RankReport};
use crate::sofic::{defect_profile, FiniteFSet, MembershipOracle};

pub const DEFAULT_TERM_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MomentSource {
    Free,
    Finite { set_size: usize },
}

impl MomentSource {
    pub fn tag(&self) -> String {
        match self {
            MomentSource::Free => "free".into(),
            MomentSource::Finite { set_size } => format!("finite:{set_size}"),
        }
    }
}

/// `μ_l` for `l = 0..=L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentSequence {
    pub values: Vec<BigRational>,
    pub source: MomentSource,
}

impl MomentSequence {
    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|v| !v.is_negative())
    }

    pub fn hankel_psd(&self) -> bool {
        hankel_psd(&self.values)
    }

    /// Rows `l,value_num,value_den,source`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("l,value_num,value_den,source\n");
        for (l, v) in self.values.iter().enumerate() {
            let _ = writeln!(s, "{l},{},{},{}", v.numer(), v.denom(), self.source.tag());
        }
        s
    }
}

/// Whether `(μ_{i+j})_{0≤i,j≤⌊L/2⌋}` is positive semidefinite, by exact
/// symmetric elimination: every pivot must be nonnegative and a zero pivot
/// must have a zero row.
pub fn hankel_psd(mu: &[BigRational]) -> bool {
    if mu.is_empty() {
        return true;
    }
    let s = (mu.len() - 1) / 2 + 1;
    let mut h: Vec<Vec<BigRational>> = (0..s).map(|i| (0..s).map(|j| mu[i + j].clone()).collect()).collect();
    for k in 0..s {
        let d = h[k][k].clone();
        if d.is_negative() {
            return false;
        }
        if d.is_zero() {
            if (k + 1..s).any(|j| !h[k][j].is_zero()) {
                return false;
            }
            continue;
        }
        for i in k + 1..s {
            let f = &h[i][k] / &d;
            for j in k + 1..s {
                let delta = &f * &h[k][j];
                h[i][j] -= delta;
            }
        }
    }
    true
}

/// Checks that `Tr_{K/ℚ}(x x*)/[K:ℚ]` is a sum of nonnegative values for
/// every embedding: either all embeddings are real and `*` is trivial, or
/// none is real and `*` is complex conjugation in each of them.
fn trace_is_positive(domain: &Domain) -> Result<()> {
    match domain.descriptor() {
        FieldDescriptor::Rationals => Ok(()),
        FieldDescriptor::NumberField(k) => {
            let f: Vec<BigRational> = k.minpoly().iter().map(|c| BigRational::from_integer(c.clone())).collect();
            let roots = qpoly::isolate_roots(&f)?;
            let real: Vec<bool> =
                roots.centers.iter().zip(&roots.radii).map(|(z, r)| z.im.abs() <= *r).collect();
            let ok = match k.conjugation() {
                None => real.iter().all(|&x| x),
                Some(c) => {
                    let cf: Vec<f64> = c.iter().map(qpoly::to_f64).collect();
                    roots.centers.iter().zip(&real).all(|(z, &is_real)| {
                        let image = qpoly::eval_complex(&cf, *z);
                        !is_real && (image - Complex64::new(z.re, -z.im)).norm() < 1e-6 * (1.0 + z.norm())
                    })
                }
            };
            if ok {
                Ok(())
            } else {
                Err(Error::Unsupported(format!("moments over {} need a real trace", domain.name())))
            }
        }
        _ => Err(Error::Unsupported(format!("moments over {}", domain.name()))),
    }
}

fn rational_trace(domain: &Domain, x: &FieldElement) -> Result<BigRational> {
    domain
        .normalized_trace(x)
        .ok_or_else(|| Error::Unsupported(format!("trace over {}", domain.name())))
}

/// Free-group moments: `μ_l` is the sum over `i` of the identity
/// coefficient of `((BB*)^l)_{ii}`.
pub fn moments_free(b: &GAMatrix, max_l: usize, term_cap: usize) -> Result<MomentSequence> {
    let d = b.domain();
    trace_is_positive(d)?;
    let n = b.rows();
    let t = b.mul(&b.star())?;
    if t.total_terms() > term_cap {
        return Err(Error::SupportExplosion(term_cap));
    }
    let mut values = vec![BigRational::from_integer(BigInt::from(n))];
    let mut power = GAMatrix::identity(d, b.rank(), n);
    for _ in 1..=max_l {
        power = power.mul(&t)?;
        if power.total_terms() > term_cap {
            return Err(Error::SupportExplosion(term_cap));
        }
        let mut acc = d.zero();
        for i in 0..n {
            acc = d.add(&acc, &power.get(i, i).identity_coefficient());
        }
        values.push(rational_trace(d, &acc)?);
    }
    Ok(MomentSequence { values, source: MomentSource::Free })
}

/// `μ_l = trace((M M*)^l) / |X|` with `M = ρ_X(B)`.
pub fn moments_finite(b: &GAMatrix, x: &FiniteFSet, max_l: usize) -> Result<MomentSequence> {
    let d = b.domain();
    trace_is_positive(d)?;
    let m = assemble_operator(b, x)?;
    let t = m.mul(&m.adjoint())?;
    let size = BigRational::from_integer(BigInt::from(x.size()));
    let mut values = vec![BigRational::from_integer(BigInt::from(b.rows()))];
    let mut power = t.clone();
    for l in 1..=max_l {
        if l > 1 {
            power = power.mul(&t)?;
        }
        values.push(rational_trace(d, &power.trace())? / &size);
    }
    Ok(MomentSequence { values, source: MomentSource::Finite { set_size: x.size() } })
}

/// Substitutes the rational point `s` for the variables of a matrix over
/// ℚ(t₁..t_l).
pub fn specialize(c: &GAMatrix, point: &[BigRational]) -> Result<GAMatrix> {
    let src = c.domain();
    let vars = match src.descriptor() {
        FieldDescriptor::FractionField(v) => v.len(),
        _ => return Err(Error::DomainMismatch(src.name(), "fraction field".into())),
    };
    if vars != point.len() {
        return Err(Error::ShapeMismatch(format!("point has {} coordinates, field has {vars} variables", point.len())));
    }
    let q = Domain::rationals();
    c.map_coefficients(&q, |v| match v {
        FieldElement::R(r) => Ok(FieldElement::Q(r.eval(point)?)),
        other => Err(Error::DomainMismatch(src.name(), format!("{other:?}"))),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemicontinuityReport {
    pub generic: RankReport,
    pub special: RankReport,
}

impl SemicontinuityReport {
    /// `rk_X(C) ≥ rk_X(C(s))`.
    pub fn holds(&self) -> bool {
        self.generic.normalized >= self.special.normalized
    }
}

pub fn semicontinuity_check(c: &GAMatrix, point: &[BigRational], x: &FiniteFSet) -> Result<SemicontinuityReport> {
    let special_matrix = specialize(c, point)?;
    let generic = normalized_rank(c, x)?;
    let special = normalized_rank(&special_matrix, x)?;
    Ok(SemicontinuityReport { generic, special })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceRow {
    pub set_size: usize,
    pub label: String,
    pub moments: MomentSequence,
    /// `μ_l(X) − μ_l(free)` for each `l`.
    pub deviation: Vec<BigRational>,
    pub max_deviation: BigRational,
    /// Largest fixed-point ratio of a nontrivial word in the ball of radius
    /// `2L·w_max`; `None` when the ball exceeds the cap.
    pub defect: Option<BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceReport {
    pub free: MomentSequence,
    pub radius: usize,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    pub fn deviation_nonincreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].max_deviation <= w[0].max_deviation)
    }

    /// `None` when some defect was not measured.
    pub fn defect_nonincreasing(&self) -> Option<bool> {
        let defects: Option<Vec<&BigRational>> = self.rows.iter().map(|r| r.defect.as_ref()).collect();
        defects.map(|d| d.windows(2).all(|w| w[1] <= w[0]))
    }

    /// Every set without defect on the ball reproduces the free moments.
    pub fn zero_defect_exact(&self) -> bool {
        self.rows
            .iter()
            .filter(|r| r.defect.as_ref().is_some_and(|d| d.is_zero()))
            .all(|r| r.max_deviation.is_zero())
    }
}

pub fn moment_convergence_check(
    b: &GAMatrix,
    series: &[FiniteFSet],
    max_l: usize,
    term_cap: usize,
    ball_cap: u128,
) -> Result<ConvergenceReport> {
    let free = moments_free(b, max_l, term_cap)?;
    let radius = 2 * max_l * b.max_word_len();
    let mut rows = Vec::with_capacity(series.len());
    for x in series {
        let moments = moments_finite(b, x, max_l)?;
        let deviation: Vec<BigRational> = moments.values.iter().zip(&free.values).map(|(a, f)| a - f).collect();
        let max_deviation = deviation.iter().map(|v| v.abs()).max().unwrap_or_else(BigRational::zero);
        let defect = if ball_size(radius, x.rank()) <= ball_cap {
            let profile = defect_profile(x, radius, Some(&MembershipOracle::Trivial), ball_cap)?;
            Some(
                profile
                    .entries
                    .iter()
                    .filter(|e| !e.word.is_identity())
                    .map(|e| e.ratio.clone())
                    .max()
                    .unwrap_or_else(BigRational::zero),
            )
        } else {
            None
        };
        rows.push(ConvergenceRow {
            set_size: x.size(),
            label: x.label().to_string(),
            moments,
            deviation,
            max_deviation,
            defect,
        });
    }
    Ok(ConvergenceReport { free, radius, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::mpoly::rat;
    use crate::freealg::DEFAULT_BALL_CAP;
    use crate::rank::rank_exact;
    use proptest::prelude::*;

    fn q() -> Domain {
        Domain::rationals()
    }

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn free_moments_of_one_minus_a() {
        let b = GAMatrix::parse(&[vec!["1 - a"]], &q(), 1).unwrap();
        let mu = moments_free(&b, 5, DEFAULT_TERM_CAP).unwrap();
        assert_eq!(mu.values, ints(&[1, 2, 6, 20, 70, 252]));
        assert!(mu.hankel_psd());
        let zero = GAMatrix::zeros(&q(), 2, 3, 2);
        assert_eq!(moments_free(&zero, 3, DEFAULT_TERM_CAP).unwrap().values, ints(&[3, 0, 0, 0]));
        assert_eq!(moments_free(&b, 40, 10), Err(Error::SupportExplosion(10)));
    }

    #[test]
    fn finite_moments() {
        let b = GAMatrix::parse(&[vec!["1 - a"]], &q(), 1).unwrap();
        for m in 2..12 {
            let x = FiniteFSet::cyclic(m).unwrap();
            let mu = moments_finite(&b, &x, 4).unwrap();
            assert_eq!(mu.values[1], rat(2, 1));
            assert!(mu.is_nonnegative() && mu.hankel_psd());
            if m > 8 {
                assert_eq!(mu.values, ints(&[1, 2, 6, 20, 70]));
            }
        }
        let one = GAMatrix::identity(&q(), 2, 1);
        let x = crate::sofic::zd_torus(2, 3, 100).unwrap();
        assert_eq!(moments_finite(&one, &x, 3).unwrap().values, ints(&[1, 1, 1, 1]));
        let csv = moments_finite(&b, &FiniteFSet::cyclic(2).unwrap(), 1).unwrap().to_csv();
        assert_eq!(csv, "l,value_num,value_den,source\n0,1,1,finite:2\n1,2,1,finite:2\n");
    }

    #[test]
    fn hankel_examples() {
        assert!(hankel_psd(&ints(&[1, 0, 1])));
        assert!(!hankel_psd(&ints(&[1, 2, 1])));
        assert!(!hankel_psd(&ints(&[0, 1, 0])));
        assert!(hankel_psd(&ints(&[0, 0, 0, 0, 0])));
        assert!(!hankel_psd(&ints(&[-1])));
    }

    #[test]
    fn number_field_moments() {
        let k = Domain::number_field(&[-2, 0, 1]).unwrap();
        let b = GAMatrix::parse(&[vec!["[w]*a"]], &k, 1).unwrap();
        assert_eq!(moments_free(&b, 2, DEFAULT_TERM_CAP).unwrap().values, ints(&[1, 2, 4]));
        let gauss = Domain::number_field(&[1, 0, 1]).unwrap();
        let c = GAMatrix::parse(&[vec!["[w]*a"]], &gauss, 1).unwrap();
        assert!(matches!(moments_free(&c, 2, DEFAULT_TERM_CAP), Err(Error::Unsupported(_))));
    }

    #[test]
    fn specialization_examples() {
        let r = Domain::fraction_field(&["t"]).unwrap();
        let c = GAMatrix::parse(&[vec!["[t]*a"]], &r, 1).unwrap();
        assert!(specialize(&c, &[rat(0, 1)]).unwrap().is_zero());
        let c = GAMatrix::parse(&[vec!["[t^2 - 1]*a + [t]*b"]], &r, 2).unwrap();
        assert_eq!(specialize(&c, &[rat(1, 1)]).unwrap(), GAMatrix::parse(&[vec!["b"]], &q(), 2).unwrap());
        let c = GAMatrix::parse(&[vec!["[1/(t - 2)]*a"]], &r, 1).unwrap();
        assert_eq!(specialize(&c, &[rat(2, 1)]), Err(Error::DenominatorVanishes));
    }

    #[test]
    fn semicontinuity_examples() {
        let r = Domain::fraction_field(&["t"]).unwrap();
        let x = FiniteFSet::cyclic(5).unwrap();
        let c = GAMatrix::parse(&[vec!["[t]"]], &r, 1).unwrap();
        let rep = semicontinuity_check(&c, &[rat(0, 1)], &x).unwrap();
        assert_eq!((rep.generic.normalized.clone(), rep.special.normalized.clone()), (rat(1, 1), rat(0, 1)));
        assert!(rep.holds());
        let c = GAMatrix::parse(&[vec!["1 - [t]*a"]], &r, 1).unwrap();
        for m in 1..8 {
            let x = FiniteFSet::cyclic(m).unwrap();
            let rep = semicontinuity_check(&c, &[rat(1, 1)], &x).unwrap();
            assert_eq!(rep.generic.normalized, rat(1, 1));
            assert_eq!(rep.special.normalized, rat(m as i64 - 1, m as i64));
        }
    }

    #[test]
    fn convergence_on_cycles() {
        let b = GAMatrix::parse(&[vec!["1 - a"]], &q(), 1).unwrap();
        let series: Vec<FiniteFSet> = (3..=20).map(|m| FiniteFSet::cyclic(m).unwrap()).collect();
        let rep = moment_convergence_check(&b, &series, 5, DEFAULT_TERM_CAP, DEFAULT_BALL_CAP).unwrap();
        assert_eq!(rep.radius, 10);
        for row in &rep.rows {
            // T^l is supported on a^j with |j| <= l, so a cycle longer than L sees no wrap-around
            assert_eq!(row.max_deviation.is_zero(), row.set_size > 5, "m = {}", row.set_size);
            assert_eq!(row.defect.as_ref().unwrap().is_zero(), row.set_size > 10);
        }
        assert!(rep.zero_defect_exact());
        let point = moment_convergence_check(&b, &[FiniteFSet::trivial(1)], 2, DEFAULT_TERM_CAP, DEFAULT_BALL_CAP)
            .unwrap();
        assert_eq!(point.rows[0].moments.values, ints(&[1, 0, 0]));
        assert_eq!(point.rows[0].deviation, ints(&[0, -2, -6]));
    }

    fn small_matrix() -> impl Strategy<Value = GAMatrix> {
        let letters = prop::sample::select(vec!["", "a", "b", "A", "B", "ab", "aB", "ba"]);
        let term = (-2i64..=2, letters).prop_map(|(c, w)| if w.is_empty() { format!("{c}") } else { format!("{c}*{w}") });
        let entry = prop::collection::vec(term, 1..3).prop_map(|t| t.join(" + ").replace("+ -", "- "));
        (1usize..=2, 1usize..=2).prop_flat_map(move |(n, m)| {
            prop::collection::vec(prop::collection::vec(entry.clone(), m), n).prop_map(|rows| {
                let refs: Vec<Vec<&str>> = rows.iter().map(|r| r.iter().map(String::as_str).collect()).collect();
                GAMatrix::parse(&refs, &Domain::rationals(), 2).unwrap()
            })
        })
    }

    fn small_set() -> impl Strategy<Value = FiniteFSet> {
        (1usize..7, any::<u64>()).prop_map(|(n, seed)| {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let perms = (0..2)
                .map(|_| {
                    let mut p: Vec<usize> = (0..n).collect();
                    p.shuffle(&mut rng);
                    p
                })
                .collect();
            FiniteFSet::new(perms, "random").unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn finite_moments_are_positive(b in small_matrix(), x in small_set()) {
            let mu = moments_finite(&b, &x, 4).unwrap();
            prop_assert!(mu.is_nonnegative());
            prop_assert!(mu.hankel_psd());
            let free = moments_free(&b, 4, DEFAULT_TERM_CAP).unwrap();
            prop_assert!(free.is_nonnegative() && free.hankel_psd());
        }

        #[test]
        fn rank_matches_kernel_of_gram(b in small_matrix(), x in small_set()) {
            let m = assemble_operator(&b, &x).unwrap();
            let gram = m.mul(&m.adjoint()).unwrap();
            let ker = gram.rows() - rank_exact(&gram);
            let expected = rat(b.rows() as i64, 1) - rat(ker as i64, x.size() as i64);
            prop_assert_eq!(normalized_rank(&b, &x).unwrap().normalized, expected);
        }

        #[test]
        fn specialization_is_multiplicative(
            ca in prop::collection::vec(-3i64..=3, 4),
            cb in prop::collection::vec(-3i64..=3, 4),
            s in -4i64..=4,
        ) {
            let r = Domain::fraction_field(&["t"]).unwrap();
            let text = |c: &[i64]| format!("[{}*t + {}]*a + [{}*t^2]*b + [{}]", c[0], c[1], c[2], c[3]);
            let c = GAMatrix::parse(&[vec![text(&ca).as_str()]], &r, 2).unwrap();
            let d = GAMatrix::parse(&[vec![text(&cb).as_str()]], &r, 2).unwrap();
            let p = [rat(s, 1)];
            prop_assert_eq!(
                specialize(&c.mul(&d).unwrap(), &p).unwrap(),
                specialize(&c, &p).unwrap().mul(&specialize(&d, &p).unwrap()).unwrap()
            );
        }

        #[test]
        fn semicontinuity_holds(
            ca in prop::collection::vec(-2i64..=2, 4),
            s in -3i64..=3,
            x in small_set(),
        ) {
            let r = Domain::fraction_field(&["t"]).unwrap();
            let text = format!("[{}*t + {}]*a + [{}*t^2 - 1]*b + [{}]", ca[0], ca[1], ca[2], ca[3]);
            let c = GAMatrix::parse(&[vec![text.as_str(), "[t]*ab"]], &r, 2).unwrap();
            let rep = semicontinuity_check(&c, &[rat(s, 1)], &x).unwrap();
            prop_assert!(rep.holds());
        }
    }
}
