use std::collections::BTreeMap;

use hyperembed::hdc::{bind, bundle, cosine, embed_ngram, embed_stats, embed_stats_raw, permute};
use hyperembed::{HdVector, ItemMemory, NGramStats};
use proptest::prelude::*;
use hyperembed::rng::{seeded, Rng as Stream};
use rand::Rng;

fn bipolar(d: usize) -> impl Strategy<Value = HdVector> {
    proptest::collection::vec(prop_oneof![Just(1i64), Just(-1i64)], d).prop_map(HdVector::new)
}

fn stats_strategy(a: usize, n: usize) -> impl Strategy<Value = NGramStats> {
    proptest::collection::vec((proptest::collection::vec(0..a as u32, n), 1u64..5), 0..12).prop_map(
        move |entries| {
            let mut s = NGramStats::new(n, a);
            for (g, c) in entries {
                s.increment(&g, c).unwrap();
            }
            s
        },
    )
}

proptest! {
    #[test]
    fn bind_is_self_inverse_and_commutative(u in bipolar(64), v in bipolar(64)) {
        prop_assert!(bind(&u, &u).unwrap().as_slice().iter().all(|&x| x == 1));
        prop_assert_eq!(bind(&u, &v).unwrap(), bind(&v, &u).unwrap());
        prop_assert_eq!(bind(&bind(&u, &v).unwrap(), &v).unwrap(), u);
    }

    #[test]
    fn permutation_is_a_cyclic_group(v in bipolar(37), j in 0usize..37, k in 0usize..37) {
        prop_assert_eq!(permute(&permute(&v, j), 37 - j), v.clone());
        prop_assert_eq!(permute(&permute(&v, j), k), permute(&v, (j + k) % 37));
        prop_assert_eq!(permute(&v, j).norm(), v.norm());
    }

    #[test]
    fn bundling_is_linear(u in bipolar(16), v in bipolar(16), a in 0u64..6, b in 0u64..6) {
        let joint = bundle(&[u.clone(), v.clone()], &[a, b]).unwrap();
        let mut sum = bundle(&[u], &[a]).unwrap();
        sum.add_scaled(&bundle(&[v], &[b]).unwrap(), 1).unwrap();
        prop_assert_eq!(joint, sum);
    }

    #[test]
    fn embedding_is_exactly_linear(s1 in stats_strategy(4, 3), s2 in stats_strategy(4, 3), seed in any::<u64>()) {
        let im = ItemMemory::new(128, 4, seed).unwrap();
        let joint = embed_stats_raw(&s1.merged(&s2).unwrap(), &im).unwrap();
        let mut sum = embed_stats_raw(&s1, &im).unwrap();
        sum.add_scaled(&embed_stats_raw(&s2, &im).unwrap(), 1).unwrap();
        prop_assert_eq!(joint, sum);
    }

    #[test]
    fn components_bounded_by_total_count(s in stats_strategy(3, 2), seed in any::<u64>()) {
        let im = ItemMemory::new(64, 3, seed).unwrap();
        let h = embed_stats_raw(&s, &im).unwrap();
        let w = s.total() as i64;
        prop_assert!(h.as_slice().iter().all(|&x| (-w..=w).contains(&x)));
    }

    #[test]
    fn normalized_embeddings_have_unit_norm(s in stats_strategy(5, 2), seed in any::<u64>()) {
        let im = ItemMemory::new(256, 5, seed).unwrap();
        let h = embed_stats(&s, &im, true).unwrap();
        if s.is_empty() {
            prop_assert!(h.as_slice().iter().all(|&x| x == 0.0));
        } else {
            prop_assert!((h.norm() - 1.0).abs() < 1e-9);
        }
    }
}

fn max_abs_cos(im: &ItemMemory) -> f64 {
    let d = im.dim() as f64;
    let mut worst: f64 = 0.0;
    for i in 0..im.alphabet_size() {
        for j in i + 1..im.alphabet_size() {
            let dot: i64 = im
                .column(i)
                .unwrap()
                .iter()
                .zip(im.column(j).unwrap())
                .map(|(&a, &b)| (a as i64) * (b as i64))
                .sum();
            worst = worst.max((dot as f64 / d).abs());
        }
    }
    worst
}

#[test]
fn columns_quasi_orthogonal_across_seeds() {
    for d in [1024usize, 10_000] {
        let bound = 5.0 / (d as f64).sqrt();
        let failures = (0..100u64)
            .filter(|&seed| max_abs_cos(&ItemMemory::new(d, 8, seed).unwrap()) > bound)
            .count();
        assert!(failures <= 1, "d={d}: {failures} of 100 seeds exceeded the bound");
    }
    assert!(max_abs_cos(&ItemMemory::new(10_000, 26, 0).unwrap()) < 0.05);
}

#[test]
fn shifts_of_one_column_are_quasi_orthogonal() {
    let d = 1024;
    let bound = 5.0 / (d as f64).sqrt();
    let mut failures = 0;
    for seed in 0..100u64 {
        let h = ItemMemory::new(d, 1, seed).unwrap().atom(0).unwrap();
        let shifts: Vec<Vec<f64>> = (1..=4)
            .map(|j| permute(&h, j).as_slice().iter().map(|&x| x as f64).collect())
            .collect();
        let ok = (0..4).all(|j| (j + 1..4).all(|k| cosine(&shifts[j], &shifts[k]).unwrap().abs() < bound));
        failures += usize::from(!ok);
    }
    assert!(failures <= 1, "{failures} of 100 seeds failed");
}

#[test]
fn all_trigrams_quasi_orthogonal() {
    let im = ItemMemory::new(10_000, 3, 42).unwrap();
    let grams: Vec<[u32; 3]> = (0..27).map(|i| [i / 9, (i / 3) % 3, i % 3]).collect();
    let vecs: Vec<Vec<f64>> = grams
        .iter()
        .map(|g| embed_ngram(g, &im).unwrap().as_slice().iter().map(|&x| x as f64).collect())
        .collect();
    for i in 0..27 {
        for j in i + 1..27 {
            let c = cosine(&vecs[i], &vecs[j]).unwrap();
            assert!(c.abs() < 0.05, "{:?} vs {:?}: {c}", grams[i], grams[j]);
        }
    }
}

#[test]
fn trigram_matches_three_loop_oracle() {
    let d = 101;
    let im = ItemMemory::new(d, 3, 9).unwrap();
    let gram = [2u32, 1, 0];
    let got = embed_ngram(&gram, &im).unwrap();
    for i in 0..d {
        let mut p = 1i64;
        for (j, &s) in gram.iter().enumerate() {
            let col = im.column(s as usize).unwrap();
            // ρ^(j+1) moves component t to t + j + 1
            p *= col[(i + d * 4 - (j + 1)) % d] as i64;
        }
        assert_eq!(got.as_slice()[i], p, "component {i}");
    }
}

// Raw-count cosine computed independently of the library.
fn raw_cosine(a: &BTreeMap<Vec<u32>, u64>, b: &BTreeMap<Vec<u32>, u64>) -> f64 {
    let dot: f64 = a.iter().map(|(k, &v)| v as f64 * *b.get(k).unwrap_or(&0) as f64).sum();
    let na: f64 = a.values().map(|&v| (v * v) as f64).sum::<f64>().sqrt();
    let nb: f64 = b.values().map(|&v| (v * v) as f64).sum::<f64>().sqrt();
    dot / (na * nb)
}

#[test]
fn similarity_is_preserved() {
    let mut rng = seeded(2024);
    let mut within = 0;
    for pair in 0..50u64 {
        let a = rng.random_range(2..=5usize);
        let n = rng.random_range(1..=3usize);
        let im = ItemMemory::new(10_000, a, pair).unwrap();
        let draw = |rng: &mut Stream| {
            let mut m = BTreeMap::new();
            let mut s = NGramStats::new(n, a);
            for _ in 0..rng.random_range(1..=15) {
                let g: Vec<u32> = (0..n).map(|_| rng.random_range(0..a as u32)).collect();
                let c = rng.random_range(1..=6u64);
                *m.entry(g.clone()).or_insert(0) += c;
                s.increment(&g, c).unwrap();
            }
            (m, s)
        };
        let (m1, s1) = draw(&mut rng);
        let (m2, s2) = draw(&mut rng);
        let h1 = embed_stats(&s1, &im, true).unwrap();
        let h2 = embed_stats(&s2, &im, true).unwrap();
        let hd = cosine(h1.as_slice(), h2.as_slice()).unwrap();
        if (hd - raw_cosine(&m1, &m2)).abs() < 0.05 {
            within += 1;
        }
    }
    assert!(within >= 48, "only {within}/50 pairs within 0.05");
}

#[test]
fn abab_and_baba_stay_as_similar_as_their_counts() {
    let im = ItemMemory::new(10_000, 2, 1).unwrap();
    let s1 = NGramStats::from_symbols(&[0, 1, 0, 1], 2, 2).unwrap();
    let s2 = NGramStats::from_symbols(&[1, 0, 1, 0], 2, 2).unwrap();
    // {ab:2, ba:1} vs {ab:1, ba:2}
    let raw = (2.0 * 1.0 + 1.0 * 2.0) / 5.0;
    let hd = cosine(
        embed_stats(&s1, &im, true).unwrap().as_slice(),
        embed_stats(&s2, &im, true).unwrap().as_slice(),
    )
    .unwrap();
    assert!((hd - raw).abs() < 0.05, "{hd} vs {raw}");
}
