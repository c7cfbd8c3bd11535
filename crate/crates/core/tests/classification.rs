use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skewswitch::algfrontend::{classify_pair, ClassificationReport, SkewAlgebraSpec};
use skewswitch::census::enumerate_class_representatives;
use skewswitch::AltMatrix;

fn all_matrices(l: u32, n: usize) -> Vec<AltMatrix> {
    let pairs = n * (n - 1) / 2;
    (0..(l as usize).pow(pairs as u32))
        .map(|code| {
            let upper: Vec<i64> = (0..pairs)
                .map(|k| (code / (l as usize).pow(k as u32) % l as usize) as i64)
                .collect();
            AltMatrix::from_upper(l, n, &upper).unwrap()
        })
        .collect()
}

fn check_chain(a: &AltMatrix, b: &AltMatrix) -> ClassificationReport {
    let r = classify_pair(&SkewAlgebraSpec::new(a.clone()), &SkewAlgebraSpec::new(b.clone())).unwrap();
    if let Some(sigma) = &r.algebra_isomorphic {
        assert_eq!(&a.relabel(sigma).unwrap(), b);
        assert!(r.grmod_equivalent.is_some());
    }
    if let Some(w) = &r.grmod_equivalent {
        assert!(w.verify(a, b));
        assert!(r.complexes_isomorphic.is_some());
    }
    if let Some(sigma) = &r.complexes_isomorphic {
        assert_eq!(r.facets.0.relabel(sigma), r.facets.1);
    }
    r
}

#[test]
fn chain_on_all_small_ternary_pairs() {
    for n in 1..=3 {
        let all = all_matrices(3, n);
        for a in &all {
            for b in &all {
                check_chain(a, b);
            }
        }
    }
    let reps = enumerate_class_representatives(3, 4).unwrap();
    for a in all_matrices(3, 4) {
        let hits = reps
            .iter()
            .filter(|b| check_chain(&a, b).grmod_equivalent.is_some())
            .count();
        assert_eq!(hits, 1);
    }
}

/// For three-valued entries and up to five generators, isomorphic point
/// complexes force equivalent module categories.
#[test]
fn complexes_decide_ternary_classes_up_to_five() {
    for n in 1..=5 {
        let reps = enumerate_class_representatives(3, n).unwrap();
        for a in &reps {
            for b in &reps {
                let r = check_chain(a, b);
                assert_eq!(r.complexes_isomorphic.is_some(), r.grmod_equivalent.is_some());
            }
        }
    }
}

#[test]
fn chain_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..300 {
        let l = rng.gen_range(2..=6u32);
        let n = rng.gen_range(2..=7usize);
        let random = |rng: &mut ChaCha8Rng| {
            let upper: Vec<i64> = (0..n * (n - 1) / 2).map(|_| rng.gen_range(0..l as i64)).collect();
            AltMatrix::from_upper(l, n, &upper).unwrap()
        };
        let a = random(&mut rng);
        let b = if rng.gen_bool(0.5) {
            random(&mut rng)
        } else {
            let mut images: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                images.swap(i, rng.gen_range(0..=i));
            }
            let sigma = skewswitch::Permutation::from_images(images).unwrap();
            let v = rng.gen_range(0..n);
            a.relabel(&sigma).unwrap().switch(v).unwrap()
        };
        check_chain(&a, &b);
    }
}
