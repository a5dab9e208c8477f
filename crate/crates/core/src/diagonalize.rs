//! Diagonal form of the Varchenko matrix of a semigeneral arrangement:
//! encompassed flats, the region ordering, the elimination steps `T^(k)` with
//! their closed forms checked as they run, and the transformation certificate.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{Arrangement, Combinatorics};
use crate::linalg::Matrix;
use crate::polyring::{Polynomial, UniPoly};
use crate::signedsets::{separation_mask, ElementSet, SignVector};
use crate::varchenko::{monomial_of, varchenko_from_regions, FactoredDeterminant, BRUTEFORCE_MAX_SIZE};

/// Fixed-size set of region ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RegionSet(Vec<u64>);

impl RegionSet {
    pub fn new(n: usize) -> Self {
        RegionSet(vec![0; n.div_ceil(64)])
    }

    pub fn from_ids(n: usize, ids: impl IntoIterator<Item = usize>) -> Self {
        let mut s = RegionSet::new(n);
        for i in ids {
            s.insert(i);
        }
        s
    }

    pub fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    /// Members of `self` missing from `other`, stopping after `limit`.
    fn missing_from(&self, other: &RegionSet, limit: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (k, (a, b)) in self.0.iter().zip(&other.0).enumerate() {
            let mut w = a & !b;
            while w != 0 {
                out.push(k * 64 + w.trailing_zeros() as usize);
                if out.len() > limit {
                    return out;
                }
                w &= w - 1;
            }
        }
        out
    }
}

/// For each flat, the region sets adjacent to the faces spanning it.
#[derive(Clone, Debug)]
pub struct EncompassIndex {
    regions: usize,
    adjacent: Vec<Vec<RegionSet>>,
    dims: Vec<i64>,
}

impl EncompassIndex {
    pub fn new(comb: &Combinatorics) -> Self {
        let r = comb.regions.len();
        let poset = &comb.poset;
        let mut adjacent: Vec<Vec<RegionSet>> = vec![Vec::new(); poset.len()];
        let by_set: BTreeMap<u128, usize> = poset.flats().iter().map(|f| (f.defining_set.0, f.id)).collect();
        for face in &comb.faces {
            let Some(&id) = by_set.get(&face.zero_set().0) else {
                continue;
            };
            let support = face.support();
            let adj = RegionSet::from_ids(
                r,
                comb.regions.iter().enumerate().filter_map(|(i, reg)| {
                    (reg.positive().intersection(support) == face.positive()
                        && reg.negative().intersection(support) == face.negative())
                    .then_some(i)
                }),
            );
            if !adjacent[id].contains(&adj) {
                adjacent[id].push(adj);
            }
        }
        EncompassIndex { regions: r, adjacent, dims: poset.flats().iter().map(|f| f.dim).collect() }
    }

    /// Flats encompassed by the colored regions.
    pub fn encompassed(&self, colored: &RegionSet) -> BTreeSet<usize> {
        (0..self.adjacent.len())
            .filter(|&m| self.adjacent[m].iter().any(|adj| adj.missing_from(colored, 0).is_empty()))
            .collect()
    }

    /// For every uncolored region, the flats its addition would newly encompass.
    fn gains(&self, colored: &RegionSet, done: &[bool]) -> BTreeMap<usize, BTreeSet<usize>> {
        let mut out: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for (m, faces) in self.adjacent.iter().enumerate() {
            if done[m] {
                continue;
            }
            for adj in faces {
                if let [r] = adj.missing_from(colored, 1)[..] {
                    out.entry(r).or_default().insert(m);
                }
            }
        }
        out
    }
}

/// Flats encompassed by a set of region ids.
pub fn encompassed_flats(a: &Arrangement, regions: &[usize]) -> Result<BTreeSet<usize>> {
    let comb = Combinatorics::compute(a)?;
    let r = comb.regions.len();
    if let Some(&bad) = regions.iter().find(|&&i| i >= r) {
        return Err(Error::InvalidInput(format!("region id {bad} out of range (have {r})")));
    }
    Ok(EncompassIndex::new(&comb).encompassed(&RegionSet::from_ids(r, regions.iter().copied())))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionOrdering {
    /// `order[k]` is the canonical id of the region colored at step `k`.
    pub order: Vec<usize>,
    /// Flat first encompassed at each step.
    pub step_flats: Vec<usize>,
    /// Hyperplanes flipped so that the first region is all `+`.
    pub reorientation: ElementSet,
    /// Whether the greedy choice had to be revised.
    pub backtracked: bool,
}

/// Node budget for the backtracking search.
const SEARCH_BUDGET: usize = 1_000_000;

/// Coloring order in which every prefix of length `k` encompasses exactly `k`
/// flats, starting from region 0.
pub fn ordering(a: &Arrangement) -> Result<RegionOrdering> {
    let comb = Combinatorics::compute(a)?;
    if let Some(w) = a.semigeneral_witness(&comb.poset) {
        return Err(Error::NotSemigeneral(w));
    }
    ordering_for(&comb)
}

pub fn ordering_for(comb: &Combinatorics) -> Result<RegionOrdering> {
    let r = comb.regions.len();
    if r != comb.poset.len() {
        return Err(Error::OrderingStuck);
    }
    let base = comb.regions[0];
    let reorientation = base.negative();
    debug_assert!(base.reorient(reorientation).is_zero_free() && base.reorient(reorientation).negative().is_empty());
    let index = EncompassIndex::new(comb);

    struct Search<'a> {
        index: &'a EncompassIndex,
        colored: RegionSet,
        done: Vec<bool>,
        order: Vec<usize>,
        step_flats: Vec<usize>,
        nodes: usize,
        backtracked: bool,
    }

    impl Search<'_> {
        fn run(&mut self) -> bool {
            if self.order.len() == self.index.regions {
                return true;
            }
            self.nodes += 1;
            if self.nodes > SEARCH_BUDGET {
                return false;
            }
            let gains = self.index.gains(&self.colored, &self.done);
            let mut candidates: Vec<(i64, usize, usize)> = gains
                .into_iter()
                .filter(|(r, g)| g.len() == 1 && (!self.order.is_empty() || *r == 0))
                .map(|(r, g)| {
                    let m = *g.iter().next().unwrap();
                    (self.index.dims[m], r, m)
                })
                .collect();
            candidates.sort();
            for (i, &(_, r, m)) in candidates.iter().enumerate() {
                if i > 0 {
                    self.backtracked = true;
                }
                self.colored.insert(r);
                self.done[m] = true;
                self.order.push(r);
                self.step_flats.push(m);
                if self.run() {
                    return true;
                }
                self.colored.remove(r);
                self.done[m] = false;
                self.order.pop();
                self.step_flats.pop();
            }
            false
        }
    }

    let mut search = Search {
        index: &index,
        colored: RegionSet::new(r),
        done: vec![false; r],
        order: Vec::with_capacity(r),
        step_flats: Vec::with_capacity(r),
        nodes: 0,
        backtracked: false,
    };
    if !search.run() {
        return Err(Error::OrderingStuck);
    }
    Ok(RegionOrdering {
        order: search.order,
        step_flats: search.step_flats,
        reorientation,
        backtracked: search.backtracked,
    })
}

/// One elimination step `T^(k)` in place; returns the multipliers
/// `c_m = P[m][k] / P[k][k]` (zero at `m = k`).
fn t_step(w: &mut Matrix<Polynomial>, k: usize) -> Result<Vec<Polynomial>> {
    let n = w.rows();
    let pivot = w[(k, k)].clone();
    let col: Vec<Polynomial> = (0..n).map(|m| w[(m, k)].clone()).collect();
    let coeffs: Vec<Polynomial> = col
        .par_iter()
        .enumerate()
        .map(|(m, e)| {
            if m == k || e.is_zero() {
                Ok(Polynomial::zero())
            } else {
                e.exact_div(&pivot).map_err(|_| Error::PivotDivisionFailure { pivot: k, column: m })
            }
        })
        .collect::<Result<_>>()?;
    let row_k: Vec<Polynomial> = w.row(k).to_vec();
    w.rows_mut().enumerate().par_bridge().for_each(|(m, row)| {
        if m == k {
            for (j, x) in row.iter_mut().enumerate() {
                if j != k {
                    *x = Polynomial::zero();
                }
            }
            return;
        }
        row[k] = Polynomial::zero();
        let c = &coeffs[m];
        if c.is_zero() {
            return;
        }
        for (j, x) in row.iter_mut().enumerate() {
            if j != k && !row_k[j].is_zero() {
                *x = x.sub(&c.mul(&row_k[j]));
            }
        }
    });
    Ok(coeffs)
}

/// `T^(k)` on a symmetric matrix (`k` 0-based).
pub fn apply_t(p: &Matrix<Polynomial>, k: usize) -> Result<Matrix<Polynomial>> {
    if !p.is_symmetric() {
        return Err(Error::InvalidInput("elimination step needs a symmetric matrix".into()));
    }
    if k >= p.rows() {
        return Err(Error::InvalidInput(format!("pivot index {k} out of range")));
    }
    let mut w = p.clone();
    t_step(&mut w, k)?;
    Ok(w)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    /// 1-based step number.
    pub k: usize,
    pub region: usize,
    pub flat: usize,
    pub entry: FactoredDeterminant,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateChecks {
    pub pvq_equals_d: bool,
    pub det_p: i32,
    pub det_q: i32,
    /// Steps at which the closed forms and the pivot-column identity were verified.
    pub closed_form_steps: usize,
    pub backtracked: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalizationCertificate {
    pub ordering: Vec<usize>,
    pub steps: Vec<StepRecord>,
    pub p: Matrix<Polynomial>,
    pub q: Matrix<Polynomial>,
    pub checks: CertificateChecks,
}

impl DiagonalizationCertificate {
    pub fn diagonal(&self) -> Vec<FactoredDeterminant> {
        self.steps.iter().map(|s| s.entry.clone()).collect()
    }

    pub fn diagonal_matrix(&self) -> Matrix<Polynomial> {
        let d: Vec<Polynomial> = self.steps.iter().map(|s| s.entry.expand()).collect();
        let mut m = Matrix::zeros(d.len(), d.len());
        for (i, x) in d.into_iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }
}

/// Matrix product with rows computed in parallel.
pub fn par_mul(a: &Matrix<Polynomial>, b: &Matrix<Polynomial>) -> Result<Matrix<Polynomial>> {
    if a.cols() != b.rows() {
        return Err(Error::InvalidInput("matrix dimensions do not agree".into()));
    }
    let rows: Vec<Vec<Polynomial>> = (0..a.rows())
        .into_par_iter()
        .map(|i| {
            (0..b.cols())
                .map(|j| {
                    let mut acc = Polynomial::zero();
                    for k in 0..a.cols() {
                        let (x, y) = (&a[(i, k)], &b[(k, j)]);
                        if !x.is_zero() && !y.is_zero() {
                            acc = acc.add(&x.mul(y));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(rows)
}

fn permutation_sign(perm: &[usize]) -> i32 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

fn is_unit_lower_triangular(l: &Matrix<Polynomial>) -> bool {
    (0..l.rows()).all(|i| l[(i, i)].is_one() && (i + 1..l.cols()).all(|j| l[(i, j)].is_zero()))
}

/// Determinant of `P = L·Π` given the permutation: `±1` when `L` is unit lower
/// triangular, cross-checked at `x = 0` and, for small sizes, symbolically.
fn unimodular_det(p: &Matrix<Polynomial>, order: &[usize]) -> Result<Option<i32>> {
    let r = order.len();
    let l = Matrix::from_fn(r, r, |i, j| p[(i, order[j])].clone());
    if !is_unit_lower_triangular(&l) {
        return Ok(None);
    }
    let sign = permutation_sign(order);
    let at_zero = p.try_map(|x| x.eval_integer(&vec![BigInt::zero(); x.width()]))?;
    if at_zero.det()? != BigInt::from(sign) {
        return Ok(None);
    }
    if r <= BRUTEFORCE_MAX_SIZE && p.det()? != Polynomial::constant(sign) {
        return Ok(None);
    }
    Ok(Some(sign))
}

/// Run the elimination with the encompassing order and assemble the certificate.
pub fn diagonalize(a: &Arrangement) -> Result<DiagonalizationCertificate> {
    let comb = Combinatorics::compute(a)?;
    if let Some(w) = a.semigeneral_witness(&comb.poset) {
        return Err(Error::NotSemigeneral(w));
    }
    diagonalize_with(&comb)
}

pub fn diagonalize_with(comb: &Combinatorics) -> Result<DiagonalizationCertificate> {
    let ord = ordering_for(comb)?;
    let order = &ord.order;
    let r = order.len();
    let regions: Vec<SignVector> = order.iter().map(|&i| comb.regions[i]).collect();
    let sep = |m: usize, n: usize| separation_mask(&regions[m], &regions[n]);
    let v0 = varchenko_from_regions(&regions).matrix;
    let mut w = v0.clone();
    let mut l: Matrix<Polynomial> = Matrix::identity(r);
    // G[m][n] = φ(∏_{i ≤ k} (1 - l_i(m,n)^2)) for m <= n, kept for n > k
    let mut g: Vec<Vec<Polynomial>> = (0..r).map(|m| vec![Polynomial::one(); r - m]).collect();
    let mut steps = Vec::with_capacity(r);
    let mut pivots: Vec<Polynomial> = Vec::with_capacity(r);
    let violation = |step: usize, detail: String| Error::ClosedFormViolation { step: step + 1, detail };

    for k in 0..r {
        let flat = comb.poset.flat(ord.step_flats[k]);
        let entry = FactoredDeterminant::of_singletons(flat.defining_set);
        let pivot = w[(k, k)].clone();
        // (a) pivot value
        if pivot != entry.expand() {
            return Err(violation(k, format!("pivot {pivot} differs from {entry}")));
        }
        // pivot-column identity
        for m in 0..r {
            if m == k {
                continue;
            }
            let e = &w[(m, k)];
            if !e.is_zero() && *e != v0[(m, k)].mul(&pivot) {
                return Err(violation(k, format!("pivot column entry {} is {e}", m + 1)));
            }
        }
        let coeffs = t_step(&mut w, k)?;
        // (b) earlier rows untouched, earlier pivots stable, row k cleared
        for i in 0..k {
            if !coeffs[i].is_zero() || w[(i, i)] != pivots[i] {
                return Err(violation(k, format!("row {} changed after its own step", i + 1)));
            }
        }
        if (0..r).any(|j| j != k && (!w[(k, j)].is_zero() || !w[(j, k)].is_zero())) {
            return Err(violation(k, "row or column not cleared".into()));
        }
        if w[(k, k)] != pivot {
            return Err(violation(k, "pivot changed".into()));
        }
        pivots.push(pivot);
        // (c) closed form for every entry beyond the pivot; entries with one
        // index at most k carry the factor 1 - l_min(m,n)^2 = 0 and are covered by (b)
        let bad = g.par_iter_mut().enumerate().skip(k + 1).find_map_any(|(m, row)| {
            for (off, gmn) in row.iter_mut().enumerate() {
                let n = m + off;
                if !gmn.is_zero() {
                    let lk = monomial_of(sep(k, m).intersection(sep(k, n)));
                    *gmn = if lk.is_one() {
                        Polynomial::zero()
                    } else {
                        gmn.sub(&gmn.mul_term(&lk.pow(2), &BigInt::one()).phi())
                    };
                }
                let expected = v0[(m, n)].mul(gmn);
                if w[(m, n)] != expected {
                    return Some(format!("entry ({}, {}) is {} not {expected}", m + 1, n + 1, w[(m, n)]));
                }
            }
            None
        });
        if let Some(detail) = bad {
            return Err(violation(k, detail));
        }
        // accumulate the row operations: L <- L_k · L
        let row_k: Vec<Polynomial> = l.row(k)[..=k].to_vec();
        l.rows_mut().enumerate().par_bridge().for_each(|(m, row)| {
            let c = &coeffs[m];
            if m == k || c.is_zero() {
                return;
            }
            for (j, x) in row_k.iter().enumerate() {
                if !x.is_zero() {
                    row[j] = row[j].sub(&c.mul(x));
                }
            }
        });
        steps.push(StepRecord { k: k + 1, region: order[k], flat: flat.id, entry });
    }
    if !w.is_diagonal() {
        return Err(violation(r.saturating_sub(1), "final matrix is not diagonal".into()));
    }

    // P = L·Π in canonical region coordinates
    let mut p: Matrix<Polynomial> = Matrix::zeros(r, r);
    for i in 0..r {
        for j in 0..r {
            p[(i, order[j])] = l[(i, j)].clone();
        }
    }
    let q = p.transpose();
    let v = varchenko_from_regions(&comb.regions).matrix;
    let mut cert = DiagonalizationCertificate {
        ordering: order.clone(),
        steps,
        p,
        q,
        checks: CertificateChecks {
            pvq_equals_d: false,
            det_p: 0,
            det_q: 0,
            closed_form_steps: r,
            backtracked: ord.backtracked,
        },
    };
    let pvq = par_mul(&par_mul(&cert.p, &v)?, &cert.q)?;
    cert.checks.pvq_equals_d = pvq == cert.diagonal_matrix();
    let det = unimodular_det(&cert.p, order)?.unwrap_or(0);
    cert.checks.det_p = det;
    cert.checks.det_q = det;
    if !cert.checks.pvq_equals_d || det == 0 {
        return Err(violation(r.saturating_sub(1), "certificate does not verify".into()));
    }
    Ok(cert)
}

/// Check a certificate against an arrangement: `P·V·Q = D`, `det P, det Q = ±1`
/// and the diagonal read off the intersection poset.
pub fn verify_certificate(a: &Arrangement, cert: &DiagonalizationCertificate) -> Result<CertificateChecks> {
    let regions = a.enumerate_regions()?;
    let r = regions.len();
    let mut sorted = cert.ordering.clone();
    sorted.sort();
    if sorted != (0..r).collect::<Vec<_>>() || cert.steps.len() != r {
        return Err(Error::InvalidInput("certificate ordering is not a permutation of the regions".into()));
    }
    if cert.p.rows() != r || cert.p.cols() != r || cert.q.rows() != r || cert.q.cols() != r {
        return Err(Error::InvalidInput("certificate matrices have the wrong size".into()));
    }
    let v = varchenko_from_regions(&regions).matrix;
    let pvq = par_mul(&par_mul(&cert.p, &v)?, &cert.q)?;
    let det_p = unimodular_det(&cert.p, &cert.ordering)?.unwrap_or(0);
    let det_q = unimodular_det(&cert.q.transpose(), &cert.ordering)?.unwrap_or(0);
    Ok(CertificateChecks {
        pvq_equals_d: pvq == cert.diagonal_matrix(),
        det_p,
        det_q,
        closed_form_steps: 0,
        backtracked: false,
    })
}

/// Diagonal entries predicted directly from the intersection poset.
pub fn expected_diagonal(a: &Arrangement) -> Result<Vec<FactoredDeterminant>> {
    let poset = a.intersection_poset()?;
    if let Some(w) = a.semigeneral_witness(&poset) {
        return Err(Error::NotSemigeneral(w));
    }
    Ok(poset.flats().iter().map(|f| FactoredDeterminant::of_singletons(f.defining_set)).collect())
}

/// Sorted multiset of factored entries, for comparisons.
pub fn sorted_entries(entries: &[FactoredDeterminant]) -> Vec<String> {
    let mut v: Vec<String> = entries.iter().map(ToString::to_string).collect();
    v.sort();
    v
}

/// Multiplicities of `(1 - q^2)^k` among the diagonal entries after `x_i := q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfQ {
    /// `(k, multiplicity)`, ascending in `k`.
    pub multiplicities: Vec<(u32, usize)>,
    /// Flat counts by codimension `d - dim`.
    pub flat_counts: Vec<(u32, usize)>,
}

pub fn snf_q(a: &Arrangement) -> Result<SnfQ> {
    let comb = Combinatorics::compute(a)?;
    if let Some(w) = a.semigeneral_witness(&comb.poset) {
        return Err(Error::NotSemigeneral(w));
    }
    let cert = diagonalize_with(&comb)?;
    snf_q_from(a, &comb, &cert)
}

pub fn snf_q_from(a: &Arrangement, comb: &Combinatorics, cert: &DiagonalizationCertificate) -> Result<SnfQ> {
    let width = a.len();
    let q_all = vec![UniPoly::q(); width];
    let base = UniPoly::from_i64s(&[1, 0, -1]);
    let mut mult: BTreeMap<u32, usize> = BTreeMap::new();
    for s in &cert.steps {
        let u = s.entry.expand().to_univariate(&q_all)?;
        let (k, rest) = u.multiplicity_of(&base);
        if !rest.is_one_poly() {
            return Err(Error::ClosedFormViolation {
                step: s.k,
                detail: format!("entry {} is not a power of 1 - q^2", s.entry),
            });
        }
        *mult.entry(k).or_insert(0) += 1;
    }
    let d = a.dim() as i64;
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for f in comb.poset.flats() {
        *counts.entry((d - f.dim) as u32).or_insert(0) += 1;
    }
    let out = SnfQ { multiplicities: mult.into_iter().collect(), flat_counts: counts.into_iter().collect() };
    if out.multiplicities != out.flat_counts {
        return Err(Error::ClosedFormViolation {
            step: cert.steps.len(),
            detail: "q-specialized multiplicities differ from flat counts".into(),
        });
    }
    Ok(out)
}

impl UniPoly {
    fn is_one_poly(&self) -> bool {
        self.coeffs().len() == 1 && self.coeffs()[0].is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_lines() -> Arrangement {
        Arrangement::affine_from_ints(2, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 1]]).unwrap()
    }

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    #[test]
    fn encompassing_basics() {
        let a = three_lines();
        assert!(encompassed_flats(&a, &[]).unwrap().is_empty());
        for r in 0..7 {
            assert_eq!(encompassed_flats(&a, &[r]).unwrap(), BTreeSet::from([0]));
        }
        let one = Arrangement::affine_from_ints(2, &[&[1, 0, 0]]).unwrap();
        assert_eq!(encompassed_flats(&one, &[0, 1]).unwrap().len(), 2);
        let all: Vec<usize> = (0..7).collect();
        assert_eq!(encompassed_flats(&a, &all).unwrap().len(), 7);
    }

    #[test]
    fn ordering_prefixes() {
        let a = three_lines();
        let ord = ordering(&a).unwrap();
        assert_eq!(ord.order[0], 0);
        for k in 0..=7 {
            assert_eq!(encompassed_flats(&a, &ord.order[..k]).unwrap().len(), k);
        }
        let poset = a.intersection_poset().unwrap();
        let mut dims: Vec<i64> = ord.step_flats.iter().map(|&m| poset.flat(m).dim).collect();
        assert_eq!(dims[0], 2);
        dims.sort();
        assert_eq!(dims, vec![0, 0, 0, 1, 1, 1, 2]);
        let conc = Arrangement::affine_from_ints(2, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]).unwrap();
        assert!(matches!(ordering(&conc), Err(Error::NotSemigeneral(_))));
    }

    #[test]
    fn elimination_step_examples() {
        let m = Matrix::from_rows(vec![vec![p("1"), p("x1")], vec![p("x1"), p("1")]]).unwrap();
        let t = apply_t(&m, 0).unwrap();
        assert_eq!(t, Matrix::from_rows(vec![vec![p("1"), p("0")], vec![p("0"), p("1 - x1^2")]]).unwrap());
        let bad = Matrix::from_rows(vec![vec![p("x1"), p("1")], vec![p("1"), p("x1")]]).unwrap();
        assert!(matches!(apply_t(&bad, 0), Err(Error::PivotDivisionFailure { pivot: 0, column: 1 })));
    }

    #[test]
    fn three_lines_first_step() {
        let rows = [
            "1 x1 x1*x2 x1*x3 x3 x2*x3 x1*x2*x3",
            "x1 1 x2 x3 x1*x3 x1*x2*x3 x2*x3",
            "x1*x2 x2 1 x2*x3 x1*x2*x3 x1*x3 x3",
            "x1*x3 x3 x2*x3 1 x1 x1*x2 x2",
            "x3 x1*x3 x1*x2*x3 x1 1 x2 x1*x2",
            "x2*x3 x1*x2*x3 x1*x3 x1*x2 x2 1 x1",
            "x1*x2*x3 x2*x3 x3 x2 x1*x2 x1 1",
        ];
        let v = Matrix::from_rows(rows.iter().map(|r| r.split(' ').map(p).collect()).collect()).unwrap();
        let t = apply_t(&v, 0).unwrap();
        assert_eq!(t[(1, 2)], p("x2*(1 - x1^2)"));
        assert_eq!(t[(1, 1)], p("1 - x1^2"));
        assert!((1..7).all(|j| t[(0, j)].is_zero() && t[(j, 0)].is_zero()));
        assert!(t.is_symmetric());
    }

    #[test]
    fn diagonalize_small() {
        let one = Arrangement::affine_from_ints(2, &[&[1, 0, 0]]).unwrap();
        let c = diagonalize(&one).unwrap();
        assert_eq!(c.diagonal().iter().map(ToString::to_string).collect::<Vec<_>>(), vec!["1", "(1-x1^2)"]);
        let c = diagonalize(&three_lines()).unwrap();
        assert!(c.checks.pvq_equals_d);
        assert_eq!(c.checks.det_p.abs(), 1);
        assert_eq!(sorted_entries(&c.diagonal()), sorted_entries(&expected_diagonal(&three_lines()).unwrap()));
        assert!(verify_certificate(&three_lines(), &c).unwrap().pvq_equals_d);
    }

    #[test]
    fn snf_q_counts() {
        let s = snf_q(&three_lines()).unwrap();
        assert_eq!(s.multiplicities, vec![(0, 1), (1, 3), (2, 3)]);
        let par = Arrangement::affine_from_ints(2, &[&[1, 0, 0], &[1, 0, 1], &[1, 0, 2]]).unwrap();
        let e = expected_diagonal(&par).unwrap();
        assert_eq!(sorted_entries(&e), vec!["(1-x1^2)", "(1-x2^2)", "(1-x3^2)", "1"]);
        let empty = Arrangement::affine(2, vec![]).unwrap();
        assert_eq!(sorted_entries(&expected_diagonal(&empty).unwrap()), vec!["1"]);
    }

    #[test]
    fn central_coordinate_planes() {
        let a = Arrangement::central_from_ints(2, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        let c = diagonalize(&a).unwrap();
        assert_eq!(c.steps.len(), 8);
        assert_eq!(c.steps.last().unwrap().entry.to_string(), "(1-x1^2)(1-x2^2)(1-x3^2)");
    }
}
