use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::fset::{FiniteFSet, MembershipOracle};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Preset {
    /// `(ℤ/m)^d` for each modulus, generator `i` adding the `i`-th unit vector.
    ZdCongruence { d: usize, moduli: Vec<usize> },
    /// The group generated by the given permutations, acting on itself;
    /// the series repeats the same set `repeats` times.
    FiniteRegular { perms: Vec<Vec<usize>>, repeats: usize },
    /// Independent uniform permutations of each size, one per generator.
    FreeRandomPerm { rank: usize, sizes: Vec<usize>, seed: u64 },
    /// The action given directly by the permutations.
    FiniteQuotient { perms: Vec<Vec<usize>> },
}

/// A series of F-sets together with what is known about the target group.
#[derive(Debug, Clone)]
pub struct Approximation {
    pub rank: usize,
    pub sets: Vec<FiniteFSet>,
    pub oracle: Option<MembershipOracle>,
    /// All sets are free actions of the group they induce.
    pub free: bool,
}

pub fn preset_approximation(preset: &Preset, cap: usize) -> Result<Approximation> {
    match preset {
        Preset::ZdCongruence { d, moduli } => {
            if *d == 0 || moduli.is_empty() || moduli.iter().any(|&m| m == 0) {
                return Err(Error::BadPreset("zd_congruence needs d >= 1 and positive moduli".into()));
            }
            let sets = moduli.iter().map(|&m| zd_torus(*d, m, cap)).collect::<Result<Vec<_>>>()?;
            Ok(Approximation { rank: *d, sets, oracle: Some(MembershipOracle::AllExponentSumsZero), free: true })
        }
        Preset::FiniteRegular { perms, repeats } => {
            let action = FiniteFSet::new(perms.clone(), "generators")
                .map_err(|e| Error::BadPreset(format!("finite_regular: {e}")))?;
            let x = regular_action_of_permutations(&action, cap)?;
            Ok(Approximation {
                rank: action.rank(),
                sets: vec![x; (*repeats).max(1)],
                oracle: Some(MembershipOracle::ActsTriviallyOn(Arc::new(action))),
                free: true,
            })
        }
        Preset::FreeRandomPerm { rank, sizes, seed } => {
            if *rank == 0 || sizes.is_empty() {
                return Err(Error::BadPreset("free_random_perm needs rank >= 1 and sizes".into()));
            }
            let sets = sizes
                .iter()
                .enumerate()
                .map(|(i, &n)| {
                    if n == 0 || n > cap {
                        return Err(Error::BadPreset(format!("size {n} outside 1..={cap}")));
                    }
                    let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                    rng.set_stream(i as u64);
                    let perms = (0..*rank)
                        .map(|_| {
                            let mut p: Vec<usize> = (0..n).collect();
                            p.shuffle(&mut rng);
                            p
                        })
                        .collect();
                    FiniteFSet::new(perms, format!("random perms n={n}"))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Approximation { rank: *rank, sets, oracle: Some(MembershipOracle::Trivial), free: false })
        }
        Preset::FiniteQuotient { perms } => {
            let x = FiniteFSet::new(perms.clone(), "quotient action")
                .map_err(|e| Error::BadPreset(format!("finite_quotient: {e}")))?;
            if x.size() > cap {
                return Err(Error::BadPreset(format!("size {} exceeds cap {cap}", x.size())));
            }
            let free = is_free_action(&x);
            Ok(Approximation {
                rank: x.rank(),
                oracle: Some(MembershipOracle::ActsTriviallyOn(Arc::new(x.clone()))),
                sets: vec![x],
                free,
            })
        }
    }
}

/// `(ℤ/m)^d`; the point `(c_1, …, c_d)` has index `Σ c_i m^(i-1)`.
pub fn zd_torus(d: usize, m: usize, cap: usize) -> Result<FiniteFSet> {
    let n = (m as u128).checked_pow(d as u32).filter(|&n| n <= cap as u128).ok_or_else(|| {
        Error::BadPreset(format!("(Z/{m})^{d} exceeds cap {cap}"))
    })? as usize;
    let perms = (0..d)
        .map(|i| {
            let stride = m.pow(i as u32);
            (0..n)
                .map(|x| {
                    let c = (x / stride) % m;
                    if c + 1 == m {
                        x - c * stride
                    } else {
                        x + stride
                    }
                })
                .collect()
        })
        .collect();
    FiniteFSet::new(perms, format!("(Z/{m})^{d}"))
}

/// The permutation group generated by the generators of `x`, acting on
/// itself by right multiplication (`p · g = g ∘ p`). Point 0 is the identity.
pub fn regular_action_of_permutations(x: &FiniteFSet, cap: usize) -> Result<FiniteFSet> {
    let n = x.size();
    let identity: Vec<u32> = (0..n as u32).collect();
    let mut index: HashMap<Vec<u32>, usize> = HashMap::from([(identity.clone(), 0)]);
    let mut elements = vec![identity];
    let mut perms: Vec<Vec<usize>> = vec![Vec::new(); x.rank()];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in 0..x.rank() {
            let gen = x.generator(g + 1);
            let y: Vec<u32> = elements[i].iter().map(|&p| gen[p as usize]).collect();
            let j = match index.get(&y) {
                Some(&j) => j,
                None => {
                    if elements.len() >= cap {
                        return Err(Error::ClosureTooLarge(cap));
                    }
                    let j = elements.len();
                    index.insert(y.clone(), j);
                    elements.push(y);
                    queue.push_back(j);
                    j
                }
            };
            if perms[g].len() <= i {
                perms[g].resize(i + 1, usize::MAX);
            }
            perms[g][i] = j;
        }
    }
    FiniteFSet::new(perms, format!("regular action of order {}", elements.len()))
}

/// Whether every point stabilizer of `x` is trivial in the permutation group
/// induced on `x`; checked orbitwise by comparing each orbit's size with the
/// order of the group it carries.
pub fn is_free_action(x: &FiniteFSet) -> bool {
    for orbit in x.orbits() {
        let pos: HashMap<usize, usize> = orbit.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let perms: Vec<Vec<usize>> = (1..=x.rank())
            .map(|g| orbit.iter().map(|&p| pos[&(x.generator(g)[p] as usize)]).collect())
            .collect();
        let restricted = FiniteFSet::new(perms, "orbit").expect("orbit is invariant");
        match regular_action_of_permutations(&restricted, orbit.len() + 1) {
            Ok(r) if r.size() == orbit.len() => {}
            _ => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::mpoly::rat;
    use crate::freealg::{ball, Word, DEFAULT_BALL_CAP};
    use crate::sofic::{defect_profile, DEFAULT_SIZE_CAP};

    #[test]
    fn zd_sizes_and_fixed_points() {
        let a = preset_approximation(&Preset::ZdCongruence { d: 2, moduli: vec![3] }, DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(a.sets[0].size(), 9);
        let x = zd_torus(2, 4, DEFAULT_SIZE_CAP).unwrap();
        for w in ball(4, 2, DEFAULT_BALL_CAP).unwrap() {
            let sums = w.exponent_sums(2);
            let expect = sums.iter().all(|s| s.rem_euclid(4) == 0);
            assert_eq!(x.fixed_ratio(&w) == rat(1, 1), expect, "{w}");
            assert!(x.fixed_ratio(&w) == rat(1, 1) || x.fixed_ratio(&w) == rat(0, 1));
        }
    }

    #[test]
    fn zd_defect_vanishes_below_modulus() {
        for m in 2..8 {
            let a = preset_approximation(&Preset::ZdCongruence { d: 1, moduli: vec![m] }, DEFAULT_SIZE_CAP).unwrap();
            for k in 0..m {
                let p = defect_profile(&a.sets[0], k, a.oracle.as_ref(), DEFAULT_BALL_CAP).unwrap();
                assert_eq!(p.max_deviation(), Some(rat(0, 1)), "m={m} k={k}");
            }
            let p = defect_profile(&a.sets[0], m, a.oracle.as_ref(), DEFAULT_BALL_CAP).unwrap();
            assert_eq!(p.max_deviation(), Some(rat(1, 1)));
        }
    }

    #[test]
    fn symmetric_group_regular() {
        // S3 generated by a transposition and a 3-cycle
        let preset = Preset::FiniteRegular { perms: vec![vec![1, 0, 2], vec![1, 2, 0]], repeats: 2 };
        let a = preset_approximation(&preset, DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(a.sets.len(), 2);
        assert_eq!(a.sets[0].size(), 6);
        for k in 0..4 {
            let p = defect_profile(&a.sets[0], k, a.oracle.as_ref(), DEFAULT_BALL_CAP).unwrap();
            assert_eq!(p.max_deviation(), Some(rat(0, 1)));
        }
        assert!(is_free_action(&a.sets[0]));
        assert!(!is_free_action(&FiniteFSet::new(vec![vec![1, 0, 2], vec![1, 2, 0]], "s3").unwrap()));
    }

    #[test]
    fn random_permutations_seeded() {
        let p = Preset::FreeRandomPerm { rank: 2, sizes: vec![100], seed: 7 };
        let a = preset_approximation(&p, DEFAULT_SIZE_CAP).unwrap();
        let b = preset_approximation(&p, DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(a.sets, b.sets);
        let prof = defect_profile(&a.sets[0], 2, a.oracle.as_ref(), DEFAULT_BALL_CAP).unwrap();
        for e in &prof.entries {
            if !e.word.is_identity() {
                assert!(e.ratio <= rat(1, 5), "{} {}", e.word, e.ratio);
            }
        }
        assert_eq!(a.sets[0].fixed_ratio(&Word::identity()), rat(1, 1));
    }

    #[test]
    fn bad_presets() {
        assert!(preset_approximation(&Preset::ZdCongruence { d: 0, moduli: vec![3] }, 100).is_err());
        assert!(preset_approximation(&Preset::ZdCongruence { d: 3, moduli: vec![10] }, 100).is_err());
        assert!(preset_approximation(&Preset::FiniteRegular { perms: vec![vec![0, 0]], repeats: 1 }, 100).is_err());
    }
}
