mod common;

use common::*;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sofic_rank::coeff::{Domain, PrimeIdeal};
use sofic_rank::rank::{assemble_operator, normalized_rank, normalized_rank_mod};
use sofic_rank::sofic::{product_action, DEFAULT_SIZE_CAP};

fn case(seed: u64, max_set: usize) -> (sofic_rank::freealg::GAMatrix, sofic_rank::sofic::FiniteFSet) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = Domain::rationals();
    let rows = 1 + (seed % 3) as usize;
    let cols = 1 + (seed / 3 % 3) as usize;
    let b = random_matrix(&mut rng, &d, 2, rows, cols, 3, 3);
    let x = random_fset(&mut rng, 2, max_set);
    (b, x)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn assembly_matches_definition(seed in any::<u64>()) {
        let (b, x) = case(seed, 9);
        let sparse = assemble_operator(&b, &x).unwrap();
        let dense = dense_operator(&b, &x);
        let d = b.domain();
        prop_assert_eq!((sparse.rows(), sparse.cols()), (dense.len(), dense[0].len()));
        for (r, row) in dense.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                prop_assert_eq!(&d.to_rational(&sparse.get(r, c)).unwrap(), v);
            }
        }
        let nonzero = dense.iter().flatten().filter(|v| !v.is_zero()).count();
        prop_assert_eq!(sparse.nnz(), nonzero);
    }

    #[test]
    fn rational_rank_matches_dense(seed in any::<u64>()) {
        let (b, x) = case(seed, 10);
        prop_assert_eq!(normalized_rank(&b, &x).unwrap().normalized, dense_rank_of(&b, &x));
    }

    #[test]
    fn modular_rank_matches_dense(seed in any::<u64>(), pi in 0usize..4) {
        let p = [2u64, 3, 5, 7][pi];
        let (b, x) = case(seed, 10);
        let ideal = PrimeIdeal::rational(p).unwrap();
        let got = normalized_rank_mod(&b, &x, &ideal).unwrap();
        let dense = dense_rank_mod(reduce_rows(&dense_operator_int(&b, &x), p), p);
        prop_assert_eq!(got.rank, dense);
    }

    #[test]
    fn product_fixed_points_multiply(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_fset(&mut rng, 2, 6);
        let z = random_fset(&mut rng, 2, 6);
        let y = product_action(&x, &z, DEFAULT_SIZE_CAP).unwrap();
        prop_assert_eq!(y.size(), x.size() * z.size());
        for _ in 0..10 {
            let w = random_word(&mut rng, 2, 6);
            let brute = (0..y.size()).filter(|&p| walk(&y, p, &w) == p).count();
            prop_assert_eq!(brute, y.fixed_count(&w));
            prop_assert_eq!(brute, x.fixed_count(&w) * z.fixed_count(&w));
        }
    }
}

#[test]
fn rank_is_invariant_under_relabelling() {
    let (b, x) = case(5, 12);
    let n = x.size();
    let shift: Vec<usize> = (0..n).map(|i| (i + 3) % n).collect();
    let perms = (1..=2)
        .map(|g| {
            let mut p = vec![0; n];
            for (i, &y) in x.generator(g).iter().enumerate() {
                p[shift[i]] = shift[y as usize];
            }
            p
        })
        .collect();
    let relabelled = sofic_rank::sofic::FiniteFSet::new(perms, "relabelled").unwrap();
    assert_eq!(normalized_rank(&b, &x).unwrap().normalized, normalized_rank(&b, &relabelled).unwrap().normalized);
}
