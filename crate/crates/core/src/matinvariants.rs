//! Equivalence invariants of specialized matrices (gcd of minors, rank,
//! integer Smith form), deletion reduction of Varchenko matrices, and the
//! diagnostics run on arrangements that are not semigeneral.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicBool, Ordering};

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::{Arrangement, Mode};
use crate::linalg::Matrix;
use crate::polyring::{Polynomial, UniPoly};
use crate::ring::GcdDomain;
use crate::varchenko::{build_varchenko, det_formula, LabeledMatrix};

pub type IntegerMatrix = Matrix<BigInt>;

/// Largest number of minors `gcd_minors` will evaluate.
pub const MAX_MINORS: u128 = 1_000_000;
pub const MAX_SNF_SIZE: usize = 64;

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// Gcd of all `k × k` minors, unit-normalized; zero when every minor vanishes.
pub fn gcd_minors<T: GcdDomain>(m: &Matrix<T>, k: usize) -> Result<T> {
    if k == 0 {
        return Ok(T::one());
    }
    if k > m.rows().min(m.cols()) {
        return Err(Error::InvalidInput(format!("minor size {k} exceeds a {}x{} matrix", m.rows(), m.cols())));
    }
    let count = binomial(m.rows(), k).saturating_mul(binomial(m.cols(), k));
    if count > MAX_MINORS {
        return Err(Error::TooLarge(format!("{count} minors of size {k}")));
    }
    let col_sets: Vec<Vec<usize>> = (0..m.cols()).combinations(k).collect();
    let found_unit = AtomicBool::new(false);
    let partial: Vec<T> = (0..m.rows())
        .combinations(k)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|rows| {
            let mut g = T::zero();
            for cols in &col_sets {
                if found_unit.load(Ordering::Relaxed) {
                    break;
                }
                let d = m.submatrix(rows, cols).det()?;
                g = g.gcd(&d);
                if g.is_unit() {
                    found_unit.store(true, Ordering::Relaxed);
                }
            }
            Ok(g)
        })
        .collect::<Result<_>>()?;
    if found_unit.load(Ordering::Relaxed) {
        return Ok(T::one());
    }
    Ok(partial.iter().fold(T::zero(), |acc, g| acc.gcd(g)).normalize())
}

/// Rank over the integers.
pub fn integer_rank(m: &IntegerMatrix) -> usize {
    m.rank()
}

fn smallest_nonzero(a: &IntegerMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = &a[(i, j)];
            if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Smith normal form diagonal: nonnegative, each entry dividing the next,
/// trailing zeros included.
pub fn integer_snf(m: &IntegerMatrix) -> Result<Vec<BigInt>> {
    if m.rows() > MAX_SNF_SIZE || m.cols() > MAX_SNF_SIZE {
        return Err(Error::TooLarge(format!("{}x{} matrix for Smith form", m.rows(), m.cols())));
    }
    let mut a = m.clone();
    let (r, c) = (a.rows(), a.cols());
    let n = r.min(c);
    let mut diag = Vec::with_capacity(n);
    for t in 0..n {
        let Some((pi, pj)) = smallest_nonzero(&a, t) else {
            diag.resize(n, BigInt::zero());
            break;
        };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..r {
                if !a[(i, t)].is_zero() {
                    let q = a[(i, t)].div_floor(&a[(t, t)]);
                    for j in t..c {
                        let v = &a[(i, j)] - &q * &a[(t, j)];
                        a[(i, j)] = v;
                    }
                    dirty |= !a[(i, t)].is_zero();
                }
            }
            for j in t + 1..c {
                if !a[(t, j)].is_zero() {
                    let q = a[(t, j)].div_floor(&a[(t, t)]);
                    for i in t..r {
                        let v = &a[(i, j)] - &q * &a[(i, t)];
                        a[(i, j)] = v;
                    }
                    dirty |= !a[(t, j)].is_zero();
                }
            }
            if dirty {
                let mut best = (t, t);
                for i in t + 1..r {
                    if !a[(i, t)].is_zero() && a[(i, t)].abs() < a[best].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..c {
                    if !a[(t, j)].is_zero() && a[(t, j)].abs() < a[best].abs() {
                        best = (t, j);
                    }
                }
                a.swap_rows(t, best.0);
                a.swap_cols(t, best.1);
                continue;
            }
            let pivot = a[(t, t)].clone();
            let stray = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
            match stray {
                Some(i) => {
                    for j in t..c {
                        let v = &a[(t, j)] + &a[(i, j)];
                        a[(t, j)] = v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[(t, t)].abs());
    }
    Ok(diag)
}

/// Integer specialization `x_i := values[i]`.
pub fn specialize_integer(m: &Matrix<Polynomial>, values: &[BigInt]) -> Result<IntegerMatrix> {
    m.try_map(|p| p.eval_integer(values))
}

/// Univariate specialization with every variable set to `q`.
pub fn specialize_q(m: &Matrix<Polynomial>, nvars: usize) -> Result<Matrix<UniPoly>> {
    let q = vec![UniPoly::q(); nvars];
    m.try_map(|p| p.to_univariate(&q))
}

/// Simultaneous permutation `perm` with `a[i][j] == b[perm[i]][perm[j]]`.
pub fn match_permutation<T>(a: &Matrix<T>, b: &Matrix<T>) -> Option<Vec<usize>>
where
    T: crate::ring::Ring + Eq + std::hash::Hash,
{
    let n = a.rows();
    if !a.is_square() || !b.is_square() || b.rows() != n {
        return None;
    }
    fn signature<T: crate::ring::Ring + Eq + std::hash::Hash>(
        m: &Matrix<T>,
        i: usize,
    ) -> (HashMap<&T, usize>, HashMap<&T, usize>) {
        let mut row: HashMap<&T, usize> = HashMap::new();
        let mut col: HashMap<&T, usize> = HashMap::new();
        for k in 0..m.cols() {
            *row.entry(&m[(i, k)]).or_insert(0) += 1;
            *col.entry(&m[(k, i)]).or_insert(0) += 1;
        }
        (row, col)
    }
    let sig_b: Vec<_> = (0..n).map(|i| signature(b, i)).collect();
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let s = signature(a, i);
            (0..n).filter(|&p| a[(i, i)] == b[(p, p)] && sig_b[p] == s).collect()
        })
        .collect();
    if candidates.iter().any(Vec::is_empty) {
        return None;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| candidates[i].len());

    fn go<T: PartialEq>(
        a: &Matrix<T>,
        b: &Matrix<T>,
        order: &[usize],
        candidates: &[Vec<usize>],
        depth: usize,
        perm: &mut [Option<usize>],
        used: &mut [bool],
    ) -> bool {
        let Some(&i) = order.get(depth) else {
            return true;
        };
        for &p in &candidates[i] {
            if used[p] {
                continue;
            }
            let fits = order[..depth].iter().all(|&j| {
                let pj = perm[j].unwrap();
                a[(i, j)] == b[(p, pj)] && a[(j, i)] == b[(pj, p)]
            });
            if !fits {
                continue;
            }
            perm[i] = Some(p);
            used[p] = true;
            if go(a, b, order, candidates, depth + 1, perm, used) {
                return true;
            }
            perm[i] = None;
            used[p] = false;
        }
        false
    }

    let mut perm = vec![None; n];
    let mut used = vec![false; n];
    go(a, b, &order, &candidates, 0, &mut perm, &mut used).then(|| perm.into_iter().map(Option::unwrap).collect())
}

/// Result of deleting one hyperplane from a Varchenko matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DeletionReduction {
    /// Same size as the input, with the merged rows and columns zeroed.
    pub matrix: LabeledMatrix,
    pub kept: Vec<usize>,
    pub zeroed: Vec<usize>,
    /// `(zeroed, kept)` pairs: rows that became equal after `x_e := 1`.
    pub merges: Vec<(usize, usize)>,
}

impl DeletionReduction {
    /// The nonzero block, indexed by `kept`.
    pub fn block(&self) -> Matrix<Polynomial> {
        self.matrix.matrix.submatrix(&self.kept, &self.kept)
    }
}

/// Set `x_e = 1`, clear each row equal to an earlier one by subtracting it
/// (rows, then columns), and shift the variables above `x_e` down by one.
pub fn reduce_deletion(v_ext: &LabeledMatrix, e: usize) -> Result<DeletionReduction> {
    let n = v_ext.size();
    if !v_ext.matrix.is_symmetric() {
        return Err(Error::InvalidInput("reduction needs a symmetric matrix".into()));
    }
    let assign = BTreeMap::from([(e, Polynomial::one())]);
    let mut w = v_ext.matrix.map(|p| p.substitute(&assign).rename_vars(|i| if i > e { i - 1 } else { i }));
    let mut kept: Vec<usize> = Vec::new();
    let mut zeroed = Vec::new();
    let mut merges = Vec::new();
    for j in 0..n {
        match kept.iter().copied().find(|&i| w.row(i) == w.row(j)) {
            Some(i) => {
                for c in 0..n {
                    w[(j, c)] = w[(j, c)].sub(&w[(i, c)]);
                }
                for r in 0..n {
                    w[(r, j)] = w[(r, j)].sub(&w[(r, i)]);
                }
                zeroed.push(j);
                merges.push((j, i));
            }
            None => kept.push(j),
        }
    }
    debug_assert!(zeroed.iter().all(|&j| (0..n).all(|c| w[(j, c)].is_zero() && w[(c, j)].is_zero())));
    Ok(DeletionReduction { matrix: LabeledMatrix { labels: v_ext.labels.clone(), matrix: w }, kept, zeroed, merges })
}

/// Whether the reduction of `V(a)` at `e` has `V(a - e)` as its nonzero block.
pub fn deletion_consistent(a: &Arrangement, e: usize) -> Result<bool> {
    let red = reduce_deletion(&build_varchenko(a)?, e)?;
    let small = build_varchenko(&a.delete(e)?)?;
    let zero_ok = red.zeroed.iter().all(|&j| (0..red.matrix.size()).all(|c| red.matrix.entry(j, c).is_zero()));
    Ok(zero_ok && match_permutation(&red.block(), &small.matrix).is_some())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObstructionCheck {
    pub name: String,
    pub inputs: Value,
    pub result: Value,
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObstructionReport {
    pub id: String,
    pub semigeneral: bool,
    pub checks: Vec<ObstructionCheck>,
    pub note: String,
}

impl ObstructionReport {
    pub fn all_consistent(&self) -> bool {
        self.checks.iter().all(|c| c.consistent)
    }
}

const REPORT_NOTE: &str = "necessary-condition diagnostics: each check records an invariant that a \
diagonal form over Z[x] would constrain; passing them all agrees with nonexistence but does not prove it";

fn counts_json(values: &[BigInt]) -> Value {
    let mut counts: BTreeMap<BigInt, usize> = BTreeMap::new();
    for v in values {
        *counts.entry(v.clone()).or_insert(0) += 1;
    }
    Value::Array(counts.into_iter().map(|(v, c)| json!([v.to_string(), c])).collect())
}

fn minimal_core(a: &Arrangement) -> Result<ObstructionCheck> {
    let mut current = a.clone();
    let mut original: Vec<usize> = (0..a.len()).collect();
    let mut deleted = Vec::new();
    let mut reductions_ok = true;
    'outer: loop {
        for pos in 0..current.len() {
            let smaller = current.delete(pos)?;
            if smaller.is_semigeneral()?.is_err() {
                reductions_ok &= deletion_consistent(&current, pos)?;
                deleted.push(a.names()[original[pos]].clone());
                original.remove(pos);
                current = smaller;
                continue 'outer;
            }
        }
        break;
    }
    let witness = current.is_semigeneral()?.err();
    Ok(ObstructionCheck {
        name: "minimal_core".into(),
        inputs: json!({ "hyperplanes": a.names(), "projection": "not performed" }),
        result: json!({
            "core": current.names(),
            "deleted": deleted,
            "witness": witness.as_ref().map(ToString::to_string),
            "reductions_consistent": reductions_ok,
        }),
        consistent: witness.is_some() && reductions_ok,
    })
}

fn snf_check(v: &Matrix<Polynomial>, nvars: usize, i: usize) -> Result<ObstructionCheck> {
    let values: Vec<BigInt> = (0..nvars).map(|j| BigInt::from(if j == i { 3 } else { 0 })).collect();
    let snf = integer_snf(&specialize_integer(v, &values)?)?;
    let ok = snf.iter().all(|d| *d == BigInt::one() || *d == BigInt::from(8));
    Ok(ObstructionCheck {
        name: format!("snf_x{}_eq_3", i + 1),
        inputs: json!({ "specialization": format!("x{} = 3, others 0", i + 1) }),
        result: json!({ "values": counts_json(&snf) }),
        consistent: ok,
    })
}

fn rank_check(v: &Matrix<Polynomial>, nvars: usize) -> Result<ObstructionCheck> {
    let rank = integer_rank(&specialize_integer(v, &vec![BigInt::one(); nvars])?);
    Ok(ObstructionCheck {
        name: "rank_all_ones".into(),
        inputs: json!({ "specialization": "all variables 1" }),
        result: json!({ "rank": rank }),
        consistent: rank == 1,
    })
}

fn gcd_check(v: &Matrix<Polynomial>, nvars: usize) -> Result<ObstructionCheck> {
    let g = gcd_minors(&specialize_integer(v, &vec![BigInt::from(3); nvars])?, 2)?;
    let ok = !g.is_zero() && BigInt::from(8).is_multiple_of(&g);
    Ok(ObstructionCheck {
        name: "gcd_2x2_minors_all_threes".into(),
        inputs: json!({ "specialization": "all variables 3", "k": 2 }),
        result: json!({ "gcd": g.to_string(), "divides_8": ok }),
        consistent: ok,
    })
}

fn determinant_check(a: &Arrangement) -> Result<ObstructionCheck> {
    let det = det_formula(a)?;
    let poset = a.intersection_poset()?;
    let d = a.dim() as i64;
    let mixed: Vec<Value> = det
        .factors()
        .iter()
        .filter(|(s, k)| s.len() >= 2 && *k > 0)
        .filter_map(|(s, k)| {
            let flat = poset.flat(poset.find(*s)?);
            (flat.dim != d - s.len() as i64).then(|| json!({ "set": s.to_string(), "exponent": k, "dim": flat.dim }))
        })
        .collect();
    Ok(ObstructionCheck {
        name: "determinant_mixed_factor".into(),
        inputs: json!({ "method": "formula" }),
        result: json!({ "determinant": det.to_string(), "deficient_factors": mixed }),
        consistent: !mixed.is_empty(),
    })
}

/// Diagnostics for an arrangement that is not semigeneral, sorted by check name.
pub fn obstruction_report(a: &Arrangement, id: &str) -> Result<ObstructionReport> {
    if a.is_semigeneral()?.is_ok() {
        return Err(Error::SemigeneralInput);
    }
    let v = build_varchenko(a)?.matrix;
    let nvars = a.len();
    let mut jobs: Vec<usize> = (0..nvars + 4).collect();
    if a.mode() == Mode::Covector {
        jobs.pop();
    }
    let mut checks: Vec<ObstructionCheck> = jobs
        .par_iter()
        .map(|&job| match job {
            0 => minimal_core(a),
            1 => rank_check(&v, nvars),
            2 => gcd_check(&v, nvars),
            j if j == nvars + 3 => determinant_check(a),
            j => snf_check(&v, nvars, j - 3),
        })
        .collect::<Result<_>>()?;
    checks.sort_by(|x, y| x.name.cmp(&y.name));
    Ok(ObstructionReport { id: id.to_string(), semigeneral: false, checks, note: REPORT_NOTE.into() })
}

/// Multiplicities of an integer list, as `(value, count)` with small values.
pub fn value_counts(values: &[BigInt]) -> Vec<(i64, usize)> {
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    for v in values {
        *counts.entry(v.to_i64().unwrap_or(i64::MAX)).or_insert(0) += 1;
    }
    counts.into_iter().collect()
}
