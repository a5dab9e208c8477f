//! Varchenko matrices, distance monomials and the product formula for their
//! determinant.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{Arrangement, IntersectionPoset};
use crate::linalg::Matrix;
use crate::polyring::{Monomial, Polynomial};
use crate::signedsets::{separation_mask, ElementSet, SignVector};

/// Largest matrix accepted by [`det_bruteforce`].
pub const BRUTEFORCE_MAX_SIZE: usize = 12;

/// Square polynomial matrix whose rows and columns are labelled by region ids.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledMatrix {
    pub labels: Vec<usize>,
    pub matrix: Matrix<Polynomial>,
}

impl LabeledMatrix {
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn entry(&self, m: usize, n: usize) -> &Polynomial {
        &self.matrix[(m, n)]
    }

    pub fn to_string_grid(&self) -> Vec<Vec<String>> {
        (0..self.size()).map(|i| (0..self.size()).map(|j| self.matrix[(i, j)].to_string()).collect()).collect()
    }
}

impl fmt::Display for LabeledMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.matrix)
    }
}

/// Squarefree monomial over a set of hyperplane indices.
pub fn monomial_of(set: ElementSet) -> Monomial {
    Monomial::from_set(set)
}

/// Varchenko matrix of an explicit list of regions.
pub fn varchenko_from_regions(regions: &[SignVector]) -> LabeledMatrix {
    let r = regions.len();
    let entries: Vec<Polynomial> = (0..r * r)
        .into_par_iter()
        .map(|k| Polynomial::from_monomial(monomial_of(separation_mask(&regions[k / r], &regions[k % r]))))
        .collect();
    let mut it = entries.into_iter();
    LabeledMatrix { labels: (0..r).collect(), matrix: Matrix::from_fn(r, r, |_, _| it.next().expect("r*r entries")) }
}

pub fn build_varchenko(a: &Arrangement) -> Result<LabeledMatrix> {
    Ok(varchenko_from_regions(&a.enumerate_regions()?))
}

/// `l_k(m, n)`: product over hyperplanes separating region `k` from both `m` and `n`.
pub fn distance(regions: &[SignVector], k: usize, m: usize, n: usize) -> Result<Monomial> {
    let r = regions.len();
    if k >= r || m >= r || n >= r {
        return Err(Error::InvalidInput(format!("region id out of range (have {r} regions)")));
    }
    let s = separation_mask(&regions[k], &regions[m]).intersection(separation_mask(&regions[k], &regions[n]));
    Ok(monomial_of(s))
}

/// Product of powers `(1 - x_S^2)^e` over distinct sets `S`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FactoredDeterminant {
    factors: Vec<(ElementSet, u64)>,
}

impl FactoredDeterminant {
    pub fn one() -> Self {
        FactoredDeterminant::default()
    }

    /// `∏_{a ∈ set} (1 - x_a^2)`.
    pub fn of_singletons(set: ElementSet) -> Self {
        FactoredDeterminant::from_factors(set.iter().map(|a| (ElementSet::singleton(a), 1)))
    }

    /// Merges equal bases and drops zero exponents.
    pub fn from_factors(factors: impl IntoIterator<Item = (ElementSet, u64)>) -> Self {
        let mut v: Vec<(ElementSet, u64)> = Vec::new();
        for (s, e) in factors {
            match v.iter_mut().find(|(t, _)| *t == s) {
                Some((_, k)) => *k += e,
                None => v.push((s, e)),
            }
        }
        v.retain(|&(_, e)| e > 0);
        v.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp_lex(b.0)));
        FactoredDeterminant { factors: v }
    }

    pub fn factors(&self) -> &[(ElementSet, u64)] {
        &self.factors
    }

    pub fn base(set: ElementSet) -> Polynomial {
        Polynomial::one_minus_square(&monomial_of(set))
    }

    pub fn expand(&self) -> Polynomial {
        self.factors.iter().fold(Polynomial::one(), |acc, &(s, e)| acc.mul(&FactoredDeterminant::base(s).pow(e as u32)))
    }

    /// Sum of exponents, counted with the size of each base set.
    pub fn total_degree(&self) -> u64 {
        self.factors.iter().map(|&(s, e)| 2 * s.len() as u64 * e).sum()
    }
}

impl std::str::FromStr for FactoredDeterminant {
    type Err = Error;

    /// Reads the printed form, e.g. `(1-x1^2)^3(1-x1^2*x2^2)` or `1`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("not a product of (1 - x_S^2) powers: {s:?}"));
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text == "1" {
            return Ok(FactoredDeterminant::one());
        }
        let mut rest = text.as_str();
        let mut factors = Vec::new();
        while !rest.is_empty() {
            let inner_end = rest.find(')').ok_or_else(bad)?;
            let inner = rest.strip_prefix('(').ok_or_else(bad)?;
            let base: Polynomial = inner[..inner_end - 1].parse()?;
            rest = &rest[inner_end + 1..];
            let mut exp = 1u64;
            if let Some(tail) = rest.strip_prefix('^') {
                let digits = tail.find(|c: char| !c.is_ascii_digit()).unwrap_or(tail.len());
                exp = tail[..digits].parse().map_err(|_| bad())?;
                rest = &tail[digits..];
            }
            let set = match base.terms() {
                [(one, c1), (m, c2)] | [(m, c2), (one, c1)]
                    if one.is_one() && c1 == &BigInt::from(1) && c2 == &BigInt::from(-1) =>
                {
                    m.support()
                }
                _ => return Err(bad()),
            };
            if set.is_empty() || base != FactoredDeterminant::base(set) {
                return Err(bad());
            }
            factors.push((set, exp));
        }
        Ok(FactoredDeterminant::from_factors(factors))
    }
}

impl fmt::Display for FactoredDeterminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for &(s, e) in &self.factors {
            write!(f, "({})", FactoredDeterminant::base(s).to_compact_string())?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// `n(M) · p(M)` for every flat other than the ambient space.
pub fn det_exponents(a: &Arrangement, poset: &IntersectionPoset) -> Result<Vec<(usize, u64, u64)>> {
    (1..poset.len())
        .into_par_iter()
        .map(|id| {
            let flat = poset.flat(id);
            let n = if flat.dim < 0 {
                // the origin of a central arrangement: a single point
                1
            } else {
                a.restriction(flat)?.enumerate_regions()?.len() as u64
            };
            let chi = a.localization(flat)?.characteristic_polynomial()?;
            let p = chi.derivative().eval(&BigInt::from(1)).abs();
            let p: u64 = p.try_into().map_err(|_| Error::TooLarge("Mobius exponent".into()))?;
            Ok((id, n, p))
        })
        .collect()
}

/// Product formula `∏_{M ≠ ambient} (1 - x_M^2)^{n(M) p(M)}`.
pub fn det_formula(a: &Arrangement) -> Result<FactoredDeterminant> {
    if !a.is_realizable() {
        return Err(Error::Unsupported(
            "the determinant product formula is only evaluated for coordinate arrangements".into(),
        ));
    }
    let poset = a.intersection_poset()?;
    let exps = det_exponents(a, &poset)?;
    Ok(FactoredDeterminant::from_factors(exps.into_iter().map(|(id, n, p)| (poset.flat(id).defining_set, n * p))))
}

/// Exact determinant: cofactor expansion up to 3×3, fraction-free elimination beyond.
pub fn det_bruteforce(m: &Matrix<Polynomial>) -> Result<Polynomial> {
    if !m.is_square() {
        return Err(Error::InvalidInput("determinant of a non-square matrix".into()));
    }
    let n = m.rows();
    if n > BRUTEFORCE_MAX_SIZE {
        return Err(Error::TooLarge(format!(
            "brute-force determinant limited to {BRUTEFORCE_MAX_SIZE}x{BRUTEFORCE_MAX_SIZE}, got {n}x{n}"
        )));
    }
    if n <= 3 {
        return Ok(cofactor(m, &(0..n).collect::<Vec<_>>(), &(0..n).collect::<Vec<_>>()));
    }
    m.det()
}

fn cofactor(m: &Matrix<Polynomial>, rows: &[usize], cols: &[usize]) -> Polynomial {
    match rows.len() {
        0 => Polynomial::one(),
        1 => m[(rows[0], cols[0])].clone(),
        _ => {
            let mut acc = Polynomial::zero();
            for (k, &c) in cols.iter().enumerate() {
                let e = &m[(rows[0], c)];
                if e.is_zero() {
                    continue;
                }
                let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let t = e.mul(&cofactor(m, &rows[1..], &sub_cols));
                acc = if k % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
            }
            acc
        }
    }
}

/// Write `det` as a product of powers of `1 - x_S^2` over the candidate sets,
/// by repeated exact division. `None` if something other than 1 remains.
pub fn factor_over(det: &Polynomial, candidates: &[ElementSet]) -> Option<FactoredDeterminant> {
    let mut rest = det.clone();
    let mut factors = Vec::new();
    for &s in candidates {
        let base = FactoredDeterminant::base(s);
        let mut e = 0;
        while let Ok(q) = rest.exact_div(&base) {
            rest = q;
            e += 1;
        }
        factors.push((s, e));
    }
    rest.is_one().then(|| FactoredDeterminant::from_factors(factors))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_lines() -> Arrangement {
        Arrangement::affine_from_ints(2, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 1]]).unwrap()
    }

    fn concurrent() -> Arrangement {
        Arrangement::affine_from_ints(2, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]).unwrap()
    }

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    #[test]
    fn factored_text_roundtrip() {
        for t in ["1", "(1-x1^2)", "(1-x1^2)^2(1-x2^2)^2(1-x3^2)^2(1-x1^2*x2^2*x3^2)"] {
            assert_eq!(t.parse::<FactoredDeterminant>().unwrap().to_string(), t);
        }
        for t in ["(1-x1)", "(1+x1^2)", "2", "(1-x1^2", "(1-x1^2*x2)"] {
            assert!(t.parse::<FactoredDeterminant>().is_err(), "{t}");
        }
    }

    #[test]
    fn small_matrices() {
        let one = Arrangement::affine_from_ints(1, &[&[1, 0]]).unwrap();
        let v = build_varchenko(&one).unwrap();
        assert_eq!(v.to_string_grid(), vec![vec!["1", "x1"], vec!["x1", "1"]]);
        assert_eq!(det_bruteforce(&v.matrix).unwrap(), p("1 - x1^2"));
        assert_eq!(det_formula(&one).unwrap().to_string(), "(1-x1^2)");
        let empty = Arrangement::affine(2, vec![]).unwrap();
        assert_eq!(build_varchenko(&empty).unwrap().to_string_grid(), vec![vec!["1"]]);
        assert_eq!(det_formula(&empty).unwrap().to_string(), "1");
    }

    #[test]
    fn three_lines_determinant() {
        let a = three_lines();
        let v = build_varchenko(&a).unwrap();
        assert!(v.matrix.is_symmetric());
        let f = det_formula(&a).unwrap();
        assert_eq!(f.to_string(), "(1-x1^2)^3(1-x2^2)^3(1-x3^2)^3");
        assert_eq!(det_bruteforce(&v.matrix).unwrap(), f.expand());
    }

    #[test]
    fn concurrent_lines_determinant() {
        let a = concurrent();
        let f = det_formula(&a).unwrap();
        assert_eq!(f.to_string(), "(1-x1^2)^2(1-x2^2)^2(1-x3^2)^2(1-x1^2*x2^2*x3^2)");
        let v = build_varchenko(&a).unwrap();
        let d = det_bruteforce(&v.matrix).unwrap();
        assert_eq!(d, f.expand());
        let sets: Vec<ElementSet> = f.factors().iter().map(|&(s, _)| s).collect();
        assert_eq!(factor_over(&d, &sets).unwrap(), f);
    }

    #[test]
    fn triangle_identity_and_distance() {
        let regions = three_lines().enumerate_regions().unwrap();
        let v = varchenko_from_regions(&regions);
        let r = regions.len();
        for k in 0..r {
            for m in 0..r {
                for n in 0..r {
                    let l = Polynomial::from_monomial(distance(&regions, k, m, n).unwrap());
                    let lhs = v.entry(m, n).mul(&l).mul(&l);
                    let rhs = v.entry(m, k).mul(v.entry(k, n));
                    assert_eq!(lhs, rhs);
                }
            }
        }
        assert!(distance(&regions, 0, 0, 99).is_err());
    }

    #[test]
    fn interval_charpoly_matches_localization() {
        let a = concurrent();
        let poset = a.intersection_poset().unwrap();
        for id in 0..poset.len() {
            let m = poset.flat(id).defining_set;
            let interval: Vec<usize> = (0..poset.len()).filter(|&j| poset.flat(j).defining_set.is_subset(m)).collect();
            let mut coeffs = vec![BigInt::from(0); 3];
            for j in interval {
                coeffs[poset.poly_dim(j)] += BigInt::from(poset.mobius(j));
            }
            let chi = a.localization(poset.flat(id)).unwrap().characteristic_polynomial().unwrap();
            assert_eq!(chi, crate::polyring::UniPoly::from_coeffs(coeffs));
        }
    }

    #[test]
    fn bruteforce_cap() {
        let m = Matrix::<Polynomial>::identity(13);
        assert!(matches!(det_bruteforce(&m), Err(Error::TooLarge(_))));
    }
}
