//! Sparse multivariate polynomials over the integers, the exponent-capping map
//! `phi`, exact division, substitution, and dense univariate polynomials in `q`.
//!
//! Variables are numbered from 0 internally and printed 1-based (`x1`, `x2`, ..).

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::ring;
use crate::signedsets::ElementSet;

/// Exponent vector, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[u16; 12]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(i: usize) -> Self {
        Monomial::var_pow(i, 1)
    }

    pub fn var_pow(i: usize, e: u16) -> Self {
        let mut v = SmallVec::from_elem(0u16, i + 1);
        v[i] = e;
        let mut m = Monomial(v);
        m.trim();
        m
    }

    /// Squarefree product of the variables in `set`.
    pub fn from_set(set: ElementSet) -> Self {
        let mut m = Monomial::one();
        for e in set.iter() {
            m.set_exp(e, 1);
        }
        m
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        let mut m = Monomial(exps.iter().copied().collect());
        m.trim();
        m
    }

    fn trim(&mut self) {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
    }

    pub fn exp(&self, i: usize) -> u16 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn set_exp(&mut self, i: usize, e: u16) {
        if i >= self.0.len() {
            if e == 0 {
                return;
            }
            self.0.resize(i + 1, 0);
        }
        self.0[i] = e;
        self.trim();
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    /// Number of variable slots in use (highest variable index + 1).
    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn support(&self) -> ElementSet {
        ElementSet::from_indices(self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u16)> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (long, short) = if self.0.len() >= other.0.len() { (self, other) } else { (other, self) };
        let mut out = long.0.clone();
        for (o, &e) in out.iter_mut().zip(short.0.iter()) {
            *o = o.checked_add(e).expect("exponent overflow");
        }
        Monomial(out)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.len() <= other.0.len() && self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn div(&self, divisor: &Monomial) -> Option<Monomial> {
        if !divisor.divides(self) {
            return None;
        }
        let mut out = self.0.clone();
        for (o, &e) in out.iter_mut().zip(divisor.0.iter()) {
            *o -= e;
        }
        let mut m = Monomial(out);
        m.trim();
        Some(m)
    }

    pub fn pow(&self, k: u16) -> Monomial {
        Monomial(self.0.iter().map(|&e| e.checked_mul(k).expect("exponent overflow")).collect())
    }

    /// Exponents capped at 2.
    pub fn capped(&self) -> Monomial {
        Monomial(self.0.iter().map(|&e| e.min(2)).collect())
    }

    /// Order used for printing: compare the sparse `(variable, exponent)` lists lexicographically.
    fn cmp_display(&self, other: &Monomial) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

/// Graded lexicographic order with `x1 > x2 > ..`.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let n = self.0.len().max(other.0.len());
            for i in 0..n {
                match self.exp(i).cmp(&other.exp(i)) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for (k, (i, e)) in self.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Integer polynomial; terms kept sorted ascending in graded lex order with
/// nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: Vec<(Monomial, BigInt)>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Polynomial::term(Monomial::one(), c)
    }

    pub fn var(i: usize) -> Self {
        Polynomial::term(Monomial::var(i), 1)
    }

    pub fn term(m: Monomial, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        if c.is_zero() {
            Polynomial::zero()
        } else {
            Polynomial { terms: vec![(m, c)] }
        }
    }

    pub fn from_monomial(m: Monomial) -> Self {
        Polynomial::term(m, 1)
    }

    /// `1 - m^2`.
    pub fn one_minus_square(m: &Monomial) -> Self {
        Polynomial::one().sub(&Polynomial::term(m.pow(2), 1))
    }

    /// `∏_{a ∈ set} (1 - x_a^2)`.
    pub fn product_one_minus_squares(set: ElementSet) -> Self {
        set.iter().fold(Polynomial::one(), |acc, a| acc.mul(&Polynomial::one_minus_square(&Monomial::var(a))))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut v: Vec<(Monomial, BigInt)> = terms.into_iter().collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        Polynomial { terms: combine_sorted(v) }
    }

    pub fn terms(&self) -> &[(Monomial, BigInt)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.as_slice() {
            [] => Some(BigInt::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    /// `Some((m, c))` when this is a single term.
    pub fn as_term(&self) -> Option<(&Monomial, &BigInt)> {
        match self.terms.as_slice() {
            [(m, c)] => Some((m, c)),
            _ => None,
        }
    }

    pub fn leading_term(&self) -> Option<&(Monomial, BigInt)> {
        self.terms.last()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    /// Number of variable slots used by any term.
    pub fn width(&self) -> usize {
        self.terms.iter().map(|(m, _)| m.width()).max().unwrap_or(0)
    }

    pub fn variables(&self) -> ElementSet {
        self.terms.iter().fold(ElementSet::EMPTY, |acc, (m, _)| acc.union(m.support()))
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        merge(&self.terms, &other.terms, false)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        merge(&self.terms, &other.terms, true)
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &BigInt) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn mul_term(&self, m: &Monomial, c: &BigInt) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        // multiplication by a monomial preserves a term order
        Polynomial { terms: self.terms.iter().map(|(a, b)| (a.mul(m), b * c)).collect() }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        if let Some((m, c)) = other.as_term() {
            return self.mul_term(m, c);
        }
        if let Some((m, c)) = self.as_term() {
            return other.mul_term(m, c);
        }
        let mut acc: HashMap<Monomial, BigInt> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let prod = ca * cb;
                match acc.entry(m) {
                    std::collections::hash_map::Entry::Occupied(mut o) => *o.get_mut() += prod,
                    std::collections::hash_map::Entry::Vacant(v) => {
                        v.insert(prod);
                    }
                }
            }
        }
        let mut terms: Vec<(Monomial, BigInt)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        Polynomial { terms }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut out = Polynomial::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Replace every exponent `e >= 3` by 2 and recombine like terms.
    pub fn phi(&self) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| (m.capped(), c.clone())))
    }

    /// Exact division: `Ok(r)` with `r * divisor == self`.
    ///
    /// Repeatedly cancels the leading term; with a single divisor this reaches
    /// zero exactly when the division is exact.
    pub fn exact_div(&self, divisor: &Polynomial) -> Result<Polynomial> {
        let (lm, lc) = divisor.leading_term().ok_or(Error::NotDivisible)?;
        if let Some((m, c)) = divisor.as_term() {
            let mut terms = Vec::with_capacity(self.terms.len());
            for (a, b) in &self.terms {
                let q = a.div(m).ok_or(Error::NotDivisible)?;
                let (qc, r) = b.div_rem(c);
                if !r.is_zero() {
                    return Err(Error::NotDivisible);
                }
                terms.push((q, qc));
            }
            return Ok(Polynomial { terms });
        }
        let mut rem = self.clone();
        let mut quotient: Vec<(Monomial, BigInt)> = Vec::new();
        while let Some((rm, rc)) = rem.leading_term().cloned() {
            let qm = rm.div(lm).ok_or(Error::NotDivisible)?;
            let (qc, r) = rc.div_rem(lc);
            if !r.is_zero() {
                return Err(Error::NotDivisible);
            }
            rem = rem.sub(&divisor.mul_term(&qm, &qc));
            quotient.push((qm, qc));
        }
        Ok(Polynomial::from_terms(quotient))
    }

    /// Simultaneous substitution `x_i := assignment[i]`; unassigned variables stay.
    pub fn substitute(&self, assignment: &BTreeMap<usize, Polynomial>) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(c.clone());
            let mut rest = Monomial::one();
            for (i, e) in m.iter() {
                match assignment.get(&i) {
                    Some(p) => t = t.mul(&p.pow(e as u32)),
                    None => rest.set_exp(i, e),
                }
            }
            out = out.add(&t.mul_term(&rest, &BigInt::one()));
        }
        out
    }

    /// Specialize every variable to a univariate polynomial in `q`.
    pub fn to_univariate(&self, values: &[UniPoly]) -> Result<UniPoly> {
        let mut out = UniPoly::zero();
        for (m, c) in &self.terms {
            let mut t = UniPoly::constant(c.clone());
            for (i, e) in m.iter() {
                let v = values
                    .get(i)
                    .ok_or_else(|| Error::InvalidInput(format!("no value supplied for variable x{}", i + 1)))?;
                t = t.mul(&v.pow(e as u32));
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    pub fn eval_integer(&self, values: &[BigInt]) -> Result<BigInt> {
        let mut out = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, e) in m.iter() {
                let v = values
                    .get(i)
                    .ok_or_else(|| Error::InvalidInput(format!("no value supplied for variable x{}", i + 1)))?;
                t *= Pow::pow(v, e as u32);
            }
            out += t;
        }
        Ok(out)
    }

    /// Renumber variables; `map(i)` gives the new index of `x_i`.
    pub fn rename_vars(&self, map: impl Fn(usize) -> usize) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| {
            let mut out = Monomial::one();
            for (i, e) in m.iter() {
                let j = map(i);
                out.set_exp(j, out.exp(j) + e);
            }
            (out, c.clone())
        }))
    }

    /// Terms in printing order.
    fn display_terms(&self) -> Vec<&(Monomial, BigInt)> {
        let mut v: Vec<&(Monomial, BigInt)> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.cmp_display(&b.0));
        v
    }

    /// Canonical text without spaces, as used inside factored forms.
    pub fn to_compact_string(&self) -> String {
        self.to_string().replace(' ', "")
    }
}

fn combine_sorted(v: Vec<(Monomial, BigInt)>) -> Vec<(Monomial, BigInt)> {
    let mut out: Vec<(Monomial, BigInt)> = Vec::with_capacity(v.len());
    for (m, c) in v {
        match out.last_mut() {
            Some((lm, lc)) if *lm == m => *lc += c,
            _ => out.push((m, c)),
        }
        if out.last().is_some_and(|(_, c)| c.is_zero()) {
            out.pop();
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

fn merge(a: &[(Monomial, BigInt)], b: &[(Monomial, BigInt)], negate_b: bool) -> Polynomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                let c = if negate_b { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0.clone(), c));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(b[j..].iter().map(|(m, c)| (m.clone(), if negate_b { -c } else { c.clone() })));
    Polynomial { terms: out }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.display_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Parser { s: s.as_bytes(), pos: 0 }
    }

    fn err(&self, what: &str) -> Error {
        Error::InvalidInput(format!(
            "polynomial parse error at byte {}: {what} in {:?}",
            self.pos,
            String::from_utf8_lossy(self.s)
        ))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.s[start..self.pos]).unwrap())
    }

    fn small(&mut self) -> Result<u32> {
        self.digits().and_then(|d| d.parse().ok()).ok_or_else(|| self.err("expected a small integer"))
    }

    /// sum := ['-'] term (('+'|'-') term)*
    fn sum(&mut self) -> Result<Polynomial> {
        let mut acc = Polynomial::zero();
        let mut negate = self.eat(b'-');
        if !negate {
            self.eat(b'+');
        }
        loop {
            let t = self.product()?;
            acc = if negate { acc.sub(&t) } else { acc.add(&t) };
            if self.eat(b'+') {
                negate = false;
            } else if self.eat(b'-') {
                negate = true;
            } else {
                return Ok(acc);
            }
        }
    }

    /// product := factor (['*'] factor)*, juxtaposition allowed for parenthesized factors
    fn product(&mut self) -> Result<Polynomial> {
        let mut acc = self.power()?;
        loop {
            if self.eat(b'*') || self.peek() == Some(b'(') {
                acc = acc.mul(&self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let k = self.small()?;
            Ok(base.pow(k))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let p = self.sum()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(p)
            }
            Some(b'x') => {
                self.pos += 1;
                let i = self.small()? as usize;
                if i == 0 {
                    return Err(self.err("variables are numbered from x1"));
                }
                Ok(Polynomial::var(i - 1))
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits().unwrap();
                Ok(Polynomial::constant(d.parse::<BigInt>().unwrap()))
            }
            _ => Err(self.err("expected a term")),
        }
    }
}

/// Accepts the canonical form (`1 - x1^2*x2^2 + 2*x3`) and factored forms
/// such as `(1-x1^2)(1-x3^2)` or `(1-x1^2)^3`.
impl FromStr for Polynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser::new(s);
        let out = p.sum()?;
        if p.peek().is_some() {
            return Err(p.err("trailing input"));
        }
        Ok(out)
    }
}

impl ring::Ring for Polynomial {
    fn zero() -> Self {
        Polynomial::zero()
    }
    fn one() -> Self {
        Polynomial::one()
    }
    fn is_zero(&self) -> bool {
        Polynomial::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        Polynomial::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        Polynomial::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Polynomial::mul(self, other)
    }
    fn neg(&self) -> Self {
        Polynomial::neg(self)
    }
    fn exact_div(&self, divisor: &Self) -> Option<Self> {
        Polynomial::exact_div(self, divisor).ok()
    }
}

/// Dense univariate integer polynomial, coefficients in increasing degree.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<BigInt>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        UniPoly::from_coeffs(vec![c.into()])
    }

    /// The indeterminate `q`.
    pub fn q() -> Self {
        UniPoly::from_coeffs(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = UniPoly { coeffs };
        p.trim();
        p
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        UniPoly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, c: &BigInt) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(out)
    }

    pub fn pow(&self, k: u32) -> UniPoly {
        let mut out = UniPoly::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * BigInt::from(k)).collect())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// gcd of the coefficients, nonnegative.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    pub fn primitive_part(&self) -> UniPoly {
        let c = self.content();
        if c.is_zero() {
            return UniPoly::zero();
        }
        let mut p = UniPoly::from_coeffs(self.coeffs.iter().map(|a| a / &c).collect());
        if p.leading().is_some_and(Signed::is_negative) {
            p = p.neg();
        }
        p
    }

    /// Long division; `None` unless the division is exact over the integers.
    pub fn exact_div(&self, divisor: &UniPoly) -> Option<UniPoly> {
        let dd = divisor.degree()?;
        if self.is_zero() {
            return Some(UniPoly::zero());
        }
        let lc = divisor.leading().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() < divisor.coeffs.len() {
            return None;
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (qc, r) = top.div_rem(lc);
            if !r.is_zero() {
                return None;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &qc * d;
            }
            quot[k] = qc;
        }
        rem.iter().all(Zero::is_zero).then(|| UniPoly::from_coeffs(quot))
    }

    /// Pseudo-remainder of `self` by `divisor`.
    fn pseudo_rem(&self, divisor: &UniPoly) -> UniPoly {
        let dd = divisor.degree().expect("nonzero divisor");
        let lc = divisor.leading().unwrap().clone();
        let mut rem = self.clone();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let top = rem.leading().unwrap().clone();
            let mut shifted = vec![BigInt::zero(); rd - dd];
            shifted.extend(divisor.coeffs.iter().map(|c| c * &top));
            rem = rem.scale(&lc).sub(&UniPoly::from_coeffs(shifted));
        }
        rem
    }

    /// gcd over `Z[q]`: primitive-part Euclid with the content gcd restored,
    /// normalized to a positive leading coefficient.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() {
            return other.normalize();
        }
        if other.is_zero() {
            return self.normalize();
        }
        let content = self.content().gcd(&other.content());
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part().scale(&content)
    }

    pub fn normalize(&self) -> UniPoly {
        if self.leading().is_some_and(Signed::is_negative) {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Render with the given variable name.
    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            match (first, c.is_negative()) {
                (true, true) => out.push('-'),
                (true, false) => {}
                (false, true) => out.push_str(" - "),
                (false, false) => out.push_str(" + "),
            }
            first = false;
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{abs}*{mono}"));
            }
        }
        out
    }

    /// Multiplicity of `factor` as a divisor of `self` (self must be nonzero).
    pub fn multiplicity_of(&self, factor: &UniPoly) -> (u32, UniPoly) {
        let mut k = 0;
        let mut cur = self.clone();
        while !cur.is_zero() {
            match cur.exact_div(factor) {
                Some(q) => {
                    cur = q;
                    k += 1;
                }
                None => break,
            }
        }
        (k, cur)
    }

    pub fn to_i64_coeffs(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(ToPrimitive::to_i64).collect()
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with("q"))
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({self})")
    }
}

impl ring::Ring for UniPoly {
    fn zero() -> Self {
        UniPoly::zero()
    }
    fn one() -> Self {
        UniPoly::one()
    }
    fn is_zero(&self) -> bool {
        UniPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        UniPoly::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        UniPoly::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        UniPoly::mul(self, other)
    }
    fn neg(&self) -> Self {
        UniPoly::neg(self)
    }
    fn exact_div(&self, divisor: &Self) -> Option<Self> {
        UniPoly::exact_div(self, divisor)
    }
}

impl ring::GcdDomain for UniPoly {
    fn gcd(&self, other: &Self) -> Self {
        UniPoly::gcd(self, other)
    }
    fn normalize(&self) -> Self {
        UniPoly::normalize(self)
    }
    fn is_unit(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].abs().is_one()
    }
}
