mod common;

use std::collections::HashSet;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use varchenko::diagonalize::{diagonalize_with, encompassed_flats, ordering};
use varchenko::geometry::Combinatorics;
use varchenko::linalg::Matrix;
use varchenko::matinvariants::{
    gcd_minors, integer_snf, match_permutation, obstruction_report, specialize_integer, specialize_q,
};
use varchenko::signedsets::{compose, opposite, separation_set};
use varchenko::varchenko::{distance, varchenko_from_regions};
use varchenko::{build_varchenko, Arrangement, ElementSet, Error, Mode, Monomial, Polynomial, SignVector};

use common::*;

fn all_sign_vectors(n: usize) -> Vec<SignVector> {
    (0..3usize.pow(n as u32))
        .map(|mut code| {
            let s: String = (0..n)
                .map(|_| {
                    let c = ['+', '0', '-'][code % 3];
                    code /= 3;
                    c
                })
                .collect();
            s.parse().unwrap()
        })
        .collect()
}

fn sign_vector(n: usize) -> impl Strategy<Value = SignVector> {
    proptest::collection::vec(prop_oneof![Just('+'), Just('0'), Just('-')], n)
        .prop_map(|cs| cs.into_iter().collect::<String>().parse().unwrap())
}

#[test]
fn composition_is_associative_exhaustively() {
    for n in 0..=4 {
        let all = all_sign_vectors(n);
        for x in &all {
            for y in &all {
                let xy = compose(x, y).unwrap();
                for z in &all {
                    assert_eq!(compose(&xy, z).unwrap(), compose(x, &compose(y, z).unwrap()).unwrap());
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn composition_associative_on_six(x in sign_vector(6), y in sign_vector(6), z in sign_vector(6)) {
        prop_assert_eq!(
            compose(&compose(&x, &y).unwrap(), &z).unwrap(),
            compose(&x, &compose(&y, &z).unwrap()).unwrap()
        );
    }

    #[test]
    fn separation_symmetry(x in sign_vector(7), y in sign_vector(7)) {
        prop_assert_eq!(separation_set(&x, &y).unwrap(), separation_set(&y, &x).unwrap());
        prop_assert_eq!(separation_set(&x, &opposite(&x)).unwrap(), x.support());
    }

    #[test]
    fn phi_multiplicative_on_coprime_monomials(
        a in proptest::collection::vec(0u16..5, 6),
        b in proptest::collection::vec(0u16..5, 6),
        split in 0usize..=6,
    ) {
        let left: Vec<u16> = a.iter().enumerate().map(|(i, &e)| if i < split { e } else { 0 }).collect();
        let right: Vec<u16> = b.iter().enumerate().map(|(i, &e)| if i >= split { e } else { 0 }).collect();
        let p = Polynomial::from_monomial(Monomial::from_exponents(&left));
        let q = Polynomial::from_monomial(Monomial::from_exponents(&right));
        prop_assert_eq!(p.mul(&q).phi(), p.phi().mul(&q.phi()));
    }
}

fn random_arrangements(count: usize, seed: u64) -> Vec<Arrangement> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let d = r.gen_range(1..=3);
        let n = r.gen_range(0..=6);
        let spread = r.gen_range(1..=4);
        if let Some(a) = random_affine(&mut r, d, n, spread) {
            out.push(a);
        }
    }
    out
}

fn random_central(count: usize, seed: u64) -> Vec<Arrangement> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let d = r.gen_range(1..=3);
        let n = r.gen_range(1..=5);
        let normals: Vec<Vec<i64>> = (0..n).map(|_| (0..=d).map(|_| r.gen_range(-2..=2)).collect()).collect();
        let refs: Vec<&[i64]> = normals.iter().map(Vec::as_slice).collect();
        if let Ok(a) = Arrangement::central_from_ints(d, &refs) {
            out.push(a);
        }
    }
    out
}

/// `μ(x, y)` on the intersection poset, from the order relation alone.
#[allow(clippy::needless_range_loop)]
fn interval_mobius(p: &varchenko::IntersectionPoset) -> Vec<Vec<i64>> {
    let n = p.len();
    let mut mu = vec![vec![0i64; n]; n];
    // flats are listed with larger dimension first, so intervals grow left to right
    for x in 0..n {
        mu[x][x] = 1;
        for y in x + 1..n {
            if p.leq(x, y) {
                mu[x][y] = -(x..y).filter(|&z| p.leq(x, z) && p.leq(z, y)).map(|z| mu[x][z]).sum::<i64>();
            }
        }
    }
    mu
}

#[test]
#[allow(clippy::needless_range_loop)]
fn face_counts_match_the_poset() {
    let mut arrangements = random_arrangements(60, 3);
    arrangements.extend(random_central(30, 4));
    for a in arrangements {
        let p = a.intersection_poset().unwrap();
        let faces = a.linear_faces().unwrap();
        let regions = a.enumerate_regions().unwrap();
        let mu = interval_mobius(&p);
        let total: i64 = (0..p.len()).map(|y| mu[0][y].abs()).sum();
        assert_eq!(total as usize, regions.len(), "{:?}", a.to_json());
        assert_eq!(regions.len(), faces.iter().filter(|f| f.is_zero_free()).count());
        for x in 0..p.len() {
            let expected: i64 = (0..p.len()).filter(|&y| p.leq(x, y)).map(|y| mu[x][y].abs()).sum();
            let found = faces.iter().filter(|f| f.zero_set() == p.flat(x).defining_set).count();
            assert_eq!(found as i64, expected, "flat {x} of {:?}", a.to_json());
        }
        let region_set: HashSet<SignVector> = regions.iter().copied().collect();
        for f in &faces {
            for r in &regions {
                assert!(region_set.contains(&compose(f, r).unwrap()));
            }
        }
        for (lo, hi) in p.covers() {
            assert!(p.flat(lo).dim > p.flat(hi).dim);
            assert!(p.flat(lo).defining_set.is_subset(p.flat(hi).defining_set));
            assert_ne!(p.flat(lo).defining_set, p.flat(hi).defining_set);
        }
        if is_semigeneral(&a) {
            assert_eq!(p.len(), regions.len());
        }
    }
}

#[test]
fn face_families_satisfy_axioms() {
    for a in random_arrangements(25, 5).into_iter().chain(random_central(15, 6)) {
        let family = a.axiom_family().unwrap();
        let report = varchenko::signedsets::check_vector_axioms(&family).unwrap();
        assert!(report.all_pass(), "{report}");
        assert!(varchenko::signedsets::check_composition_closure(&family).is_none());
    }
}

#[test]
fn triangle_identity_and_invariance() {
    let mut r = rng(11);
    for a in random_arrangements(25, 7) {
        let regions = a.enumerate_regions().unwrap();
        let v = varchenko_from_regions(&regions).matrix;
        let n = regions.len();
        for _ in 0..40 {
            let (k, m, q) = (r.gen_range(0..n), r.gen_range(0..n), r.gen_range(0..n));
            let l = Polynomial::from_monomial(distance(&regions, k, m, q).unwrap().pow(2));
            assert_eq!(v[(m, q)].mul(&l), v[(m, k)].mul(&v[(k, q)]));
        }
        let mask = ElementSet::from_indices((0..a.len()).filter(|_| r.gen_bool(0.5)));
        let flipped = build_varchenko(&a.reorient(mask).unwrap()).unwrap().matrix;
        assert!(match_permutation(&flipped, &v).is_some());
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut r);
        assert!(match_permutation(&v.permute_symmetric(&perm), &v).is_some());
    }
}

#[test]
fn orderings_encompass_one_flat_per_step() {
    for (name, a) in random_semigeneral(12, 31) {
        let ord = ordering(&a).unwrap();
        for k in 0..=ord.order.len() {
            let c = encompassed_flats(&a, &ord.order[..k]).unwrap();
            assert_eq!(c.len(), k, "{name} prefix {k}");
        }
    }
}

fn unimodular(r: &mut rand_chacha::ChaCha8Rng, n: usize) -> Matrix<BigInt> {
    let mut u: Matrix<BigInt> = Matrix::identity(n);
    for _ in 0..3 * n {
        let (i, j) = (r.gen_range(0..n), r.gen_range(0..n));
        if i == j {
            continue;
        }
        let c = BigInt::from(r.gen_range(-2..=2));
        for k in 0..n {
            let add = &c * &u[(j, k)];
            u[(i, k)] += add;
        }
    }
    u
}

#[test]
fn smith_form_is_an_invariant() {
    let mut r = rng(13);
    for _ in 0..60 {
        let (rows, cols) = (r.gen_range(1..=5), r.gen_range(1..=5));
        let m: Matrix<BigInt> = Matrix::from_fn(rows, cols, |_, _| BigInt::from(r.gen_range(-6..=6)));
        let snf = integer_snf(&m).unwrap();
        for w in snf.windows(2) {
            assert!(w[1] == BigInt::from(0) || (&w[1] % &w[0]) == BigInt::from(0), "{snf:?}");
        }
        let mut prod = BigInt::from(1);
        for k in 1..=snf.len() {
            prod *= &snf[k - 1];
            assert_eq!(prod, gcd_minors(&m, k).unwrap());
        }
        let scrambled = unimodular(&mut r, rows).mul(&m).unwrap().mul(&unimodular(&mut r, cols)).unwrap();
        assert_eq!(integer_snf(&scrambled).unwrap(), snf);
        let mut rp: Vec<usize> = (0..rows).collect();
        let mut cp: Vec<usize> = (0..cols).collect();
        rp.shuffle(&mut r);
        cp.shuffle(&mut r);
        assert_eq!(integer_snf(&m.submatrix(&rp, &cp)).unwrap(), snf);
    }
}

#[test]
fn equivalent_matrices_share_minor_gcds_after_substitution() {
    let mut suite: Vec<(String, Arrangement)> = all_fixtures().into_iter().filter(|(_, a)| is_semigeneral(a)).collect();
    suite.extend(random_semigeneral(6, 17));
    let mut r = rng(19);
    let mut checked = 0;
    for (name, a) in suite {
        let comb = Combinatorics::compute(&a).unwrap();
        if comb.regions.len() > 12 {
            continue;
        }
        let cert = diagonalize_with(&comb).unwrap();
        let v = varchenko_from_regions(&comb.regions).matrix;
        let d = cert.diagonal_matrix();
        let n = a.len().max(1);
        let vq = specialize_q(&v, n).unwrap();
        let dq = specialize_q(&d, n).unwrap();
        let point: Vec<BigInt> = (0..n).map(|_| BigInt::from(r.gen_range(-4..=4))).collect();
        let vi = specialize_integer(&v, &point).unwrap();
        let di = specialize_integer(&d, &point).unwrap();
        for k in 0..=3.min(v.rows()) {
            assert_eq!(gcd_minors(&vq, k).unwrap(), gcd_minors(&dq, k).unwrap(), "{name} k={k}");
            assert_eq!(gcd_minors(&vi, k).unwrap(), gcd_minors(&di, k).unwrap(), "{name} k={k}");
        }
        checked += 1;
    }
    assert!(checked >= 10);
}

#[test]
fn obstruction_reports_on_fixtures() {
    for (name, a) in all_fixtures() {
        match obstruction_report(&a, &name) {
            Ok(report) => {
                assert!(!is_semigeneral(&a));
                assert!(report.all_consistent(), "{name}: {report:?}");
                let names: Vec<&String> = report.checks.iter().map(|c| &c.name).collect();
                let mut sorted = names.clone();
                sorted.sort();
                assert_eq!(names, sorted);
            }
            Err(Error::SemigeneralInput) => assert!(is_semigeneral(&a), "{name}"),
            Err(e) => panic!("{name}: {e}"),
        }
    }
}

#[test]
fn covector_and_geometric_routes_agree() {
    for a in random_central(20, 23) {
        let c = Arrangement::from_covectors(a.dim(), a.enumerate_faces().unwrap(), None).unwrap();
        assert_eq!(c.mode(), Mode::Covector);
        assert_eq!(c.enumerate_regions().unwrap(), a.enumerate_regions().unwrap());
        assert_eq!(c.is_semigeneral().unwrap().is_ok(), a.is_semigeneral().unwrap().is_ok());
        assert_eq!(c.characteristic_polynomial().unwrap(), a.characteristic_polynomial().unwrap());
    }
}
