#![allow(dead_code)]

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use varchenko::io::read_arrangement;
use varchenko::{Arrangement, Hyperplane, Mode};

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixture_path(name: &str) -> PathBuf {
    let dir = fixture_dir();
    let json = dir.join(format!("{name}.json"));
    if json.exists() {
        json
    } else {
        dir.join(format!("{name}.txt"))
    }
}

pub fn fixture(name: &str) -> Arrangement {
    read_arrangement(&fixture_path(name), None).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

/// Every shipped fixture, sorted by name.
pub fn all_fixtures() -> Vec<(String, Arrangement)> {
    let mut names: Vec<String> = std::fs::read_dir(fixture_dir())
        .unwrap()
        .filter_map(|e| {
            let p = e.unwrap().path();
            p.file_stem().map(|s| s.to_string_lossy().into_owned())
        })
        .collect();
    names.sort();
    names.into_iter().map(|n| (n.clone(), fixture(&n))).collect()
}

pub fn is_semigeneral(a: &Arrangement) -> bool {
    a.is_semigeneral().unwrap().is_ok()
}

/// Random affine arrangement with small integer coefficients; `None` when the
/// draw has a zero normal or repeated hyperplanes.
pub fn random_affine(rng: &mut ChaCha8Rng, d: usize, n: usize, spread: i64) -> Option<Arrangement> {
    let hs: Vec<Hyperplane> = (0..n)
        .map(|i| {
            let normal: Vec<i64> = (0..d).map(|_| rng.gen_range(-spread..=spread)).collect();
            let offset = rng.gen_range(-spread..=spread);
            Hyperplane::from_ints(format!("S{}", i + 1), &normal, offset)
        })
        .collect();
    Arrangement::new(Mode::Affine, d, hs).ok()
}

/// Parallel families in random directions with distinct offsets.
pub fn random_parallel_families(rng: &mut ChaCha8Rng, d: usize, sizes: &[usize]) -> Option<Arrangement> {
    let mut hs = Vec::new();
    for &size in sizes {
        let normal: Vec<i64> = (0..d).map(|_| rng.gen_range(-3..=3)).collect();
        let mut offsets: Vec<i64> = Vec::new();
        while offsets.len() < size {
            let b = rng.gen_range(-9..=9);
            if !offsets.contains(&b) {
                offsets.push(b);
            }
        }
        for b in offsets {
            hs.push(Hyperplane::from_ints(format!("S{}", hs.len() + 1), &normal, b));
        }
    }
    Arrangement::new(Mode::Affine, d, hs).ok()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seeded semigeneral arrangements: random generic ones with `n ≤ 8`,
/// `d ≤ 3`, then parallel families.
pub fn random_semigeneral(count: usize, seed: u64) -> Vec<(String, Arrangement)> {
    let mut r = rng(seed);
    let shapes: &[(usize, usize)] =
        &[(1, 3), (2, 3), (2, 4), (2, 5), (2, 6), (2, 7), (2, 8), (3, 3), (3, 4), (3, 5), (3, 6), (3, 7), (3, 8)];
    let mut out = Vec::new();
    let mut i = 0;
    while out.len() < count {
        let (d, n) = shapes[i % shapes.len()];
        i += 1;
        let a = if i % 4 == 0 {
            let sizes: Vec<usize> = match d {
                1 => vec![3],
                2 => vec![2, 2, 1 + i % 3],
                _ => vec![2, 2, 2],
            };
            random_parallel_families(&mut r, d, &sizes)
        } else {
            random_affine(&mut r, d, n, 6)
        };
        if let Some(a) = a {
            if is_semigeneral(&a) {
                out.push((format!("random-{}-d{}-n{}", out.len(), a.dim(), a.len()), a));
            }
        }
    }
    out
}

/// Seeded arrangements with at most `max_regions` regions, generic or not.
pub fn random_small(count: usize, seed: u64, max_regions: usize) -> Vec<(String, Arrangement)> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let d = r.gen_range(1..=3);
        let n = r.gen_range(1..=5);
        // small spread makes concurrences and parallels common
        if let Some(a) = random_affine(&mut r, d, n, 2) {
            if a.enumerate_regions().unwrap().len() <= max_regions {
                out.push((format!("small-{}-d{}-n{}", out.len(), d, n), a));
            }
        }
    }
    out
}
