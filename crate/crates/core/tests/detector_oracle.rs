//! Brute force over all column partitions and all row groupings, compared
//! with the pruned detector at N <= 8.

mod common;

use chm_core::{detect_dita_pattern, fourier_matrix, DitaSearch};
use common::{oracle, partitions, random_dita, random_log, scramble};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn detector_agrees_with_exhaustive_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut inputs = vec![
        chm_core::catalog::s8(),
        chm_core::catalog::h8(),
        fourier_matrix(6),
        scramble(&fourier_matrix(8), 8, &mut rng),
        random_dita(2, 2, &mut rng),
        random_dita(2, 3, &mut rng),
        random_dita(3, 2, &mut rng),
        random_dita(2, 4, &mut rng),
        random_dita(4, 2, &mut rng),
    ];
    // random phase matrices exercise both outcomes away from orthogonality
    for i in 0..11 {
        let size = [4, 6][i % 2];
        inputs.push(random_log(size, 2, &mut rng));
    }
    assert_eq!(inputs.len(), 20);
    let (mut found, mut none) = (0, 0);
    for l in &inputs {
        let size = l.size();
        for n in (2..size).filter(|n| size % n == 0) {
            let k = size / n;
            let got = detect_dita_pattern(l, n, k).unwrap();
            let want = oracle(l, n, k);
            assert_eq!(got.is_found(), want, "n={n} k={k} {l:?}");
            assert_ne!(got, DitaSearch::Exhausted);
            if let DitaSearch::Found(p) = &got {
                assert!(p.verify(l));
                found += 1;
            } else {
                none += 1;
            }
        }
    }
    assert!(found > 0 && none > 0);
}

#[test]
fn partition_counts() {
    let eight: Vec<usize> = (0..8).collect();
    assert_eq!(partitions(&eight, 2).len(), 105);
    assert_eq!(partitions(&eight, 4).len(), 35);
    assert_eq!(partitions(&eight[..6], 3).len(), 10);
}
