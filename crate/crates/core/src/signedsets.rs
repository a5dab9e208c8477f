//! Sign vectors over a finite ground set and the combinatorics of signed sets:
//! composition, opposites, separation sets and brute-force checks of the
//! vector axioms of an oriented matroid.
//!
//! Sign vectors are packed as two bitmasks (positive part, negative part), so
//! the ground set is limited to [`MAX_GROUND`] elements.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest supported ground set.
pub const MAX_GROUND: usize = 128;

/// A subset of the ground set `{0, .., MAX_GROUND-1}`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet(pub u128);

impl ElementSet {
    pub const EMPTY: ElementSet = ElementSet(0);

    pub fn full(n: usize) -> Self {
        if n >= 128 {
            ElementSet(u128::MAX)
        } else {
            ElementSet((1u128 << n) - 1)
        }
    }

    pub fn singleton(e: usize) -> Self {
        ElementSet(1u128 << e)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        ElementSet(it.into_iter().fold(0u128, |acc, e| acc | (1u128 << e)))
    }

    pub fn contains(self, e: usize) -> bool {
        e < 128 && self.0 >> e & 1 == 1
    }

    pub fn insert(&mut self, e: usize) {
        self.0 |= 1u128 << e;
    }

    pub fn remove(&mut self, e: usize) {
        self.0 &= !(1u128 << e);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        ElementSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        ElementSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        ElementSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let e = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(e)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Compare by the sorted element lists, lexicographically.
    pub fn cmp_lex(self, other: Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

/// Displays with 1-based element numbers, e.g. `{1,2,3}`.
impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", e + 1)?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Zero,
    Minus,
}

impl Sign {
    pub fn to_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Zero => '0',
            Sign::Minus => '-',
        }
    }

    pub fn from_char(c: char) -> Option<Sign> {
        match c {
            '+' => Some(Sign::Plus),
            '0' => Some(Sign::Zero),
            '-' | '−' => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn negate(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Zero => Sign::Zero,
            Sign::Minus => Sign::Plus,
        }
    }

    fn rank(self) -> u8 {
        match self {
            Sign::Plus => 0,
            Sign::Zero => 1,
            Sign::Minus => 2,
        }
    }
}

/// An element of `{+, 0, -}^E`.
///
/// Ordered lexicographically entry by entry with `+ < 0 < -`; on zero-free
/// vectors this is the canonical region order.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignVector {
    len: usize,
    plus: u128,
    minus: u128,
}

impl SignVector {
    pub fn zeros(len: usize) -> Self {
        assert!(len <= MAX_GROUND, "ground set too large");
        SignVector { len, plus: 0, minus: 0 }
    }

    pub fn all_plus(len: usize) -> Self {
        SignVector { len, plus: ElementSet::full(len).0, minus: 0 }
    }

    pub fn from_signs(signs: &[Sign]) -> Result<Self> {
        if signs.len() > MAX_GROUND {
            return Err(Error::InvalidInput(format!(
                "sign vector of length {} exceeds the limit {MAX_GROUND}",
                signs.len()
            )));
        }
        let mut v = SignVector::zeros(signs.len());
        for (e, &s) in signs.iter().enumerate() {
            v.set(e, s);
        }
        Ok(v)
    }

    pub fn from_parts(len: usize, positive: ElementSet, negative: ElementSet) -> Self {
        debug_assert!(positive.intersection(negative).is_empty());
        SignVector { len, plus: positive.0, minus: negative.0 }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, e: usize) -> Sign {
        debug_assert!(e < self.len);
        if self.plus >> e & 1 == 1 {
            Sign::Plus
        } else if self.minus >> e & 1 == 1 {
            Sign::Minus
        } else {
            Sign::Zero
        }
    }

    pub fn set(&mut self, e: usize, s: Sign) {
        assert!(e < self.len);
        let bit = 1u128 << e;
        self.plus &= !bit;
        self.minus &= !bit;
        match s {
            Sign::Plus => self.plus |= bit,
            Sign::Minus => self.minus |= bit,
            Sign::Zero => {}
        }
    }

    /// Copy extended by one trailing entry.
    pub fn push(&self, s: Sign) -> Self {
        let mut out = SignVector { len: self.len + 1, ..*self };
        assert!(out.len <= MAX_GROUND);
        out.set(self.len, s);
        out
    }

    pub fn positive(&self) -> ElementSet {
        ElementSet(self.plus)
    }

    pub fn negative(&self) -> ElementSet {
        ElementSet(self.minus)
    }

    pub fn support(&self) -> ElementSet {
        ElementSet(self.plus | self.minus)
    }

    pub fn zero_set(&self) -> ElementSet {
        ElementSet::full(self.len).difference(self.support())
    }

    pub fn is_zero(&self) -> bool {
        self.plus | self.minus == 0
    }

    pub fn is_zero_free(&self) -> bool {
        self.support() == ElementSet::full(self.len)
    }

    pub fn signs(&self) -> impl Iterator<Item = Sign> + '_ {
        (0..self.len).map(|e| self.get(e))
    }

    /// Flip the entries in `mask`.
    pub fn reorient(&self, mask: ElementSet) -> Self {
        let m = mask.0;
        SignVector {
            len: self.len,
            plus: (self.plus & !m) | (self.minus & m),
            minus: (self.minus & !m) | (self.plus & m),
        }
    }

    /// Drop entry `e`, shifting later entries down.
    pub fn delete(&self, e: usize) -> Self {
        let low = (1u128 << e) - 1;
        let squeeze = |bits: u128| (bits & low) | ((bits >> 1) & !low);
        SignVector { len: self.len - 1, plus: squeeze(self.plus), minus: squeeze(self.minus) }
    }

    /// Keep only the entries listed in `keep`, in that order.
    pub fn project(&self, keep: &[usize]) -> Self {
        let mut out = SignVector::zeros(keep.len());
        for (i, &e) in keep.iter().enumerate() {
            out.set(i, self.get(e));
        }
        out
    }

    /// `self` conforms to `other` on the support of `self`.
    pub fn is_face_of(&self, other: &SignVector) -> bool {
        self.plus & !other.plus == 0 && self.minus & !other.minus == 0
    }
}

impl Ord for SignVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| {
            for e in 0..self.len {
                let o = self.get(e).rank().cmp(&other.get(e).rank());
                if o != Ordering::Equal {
                    return o;
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for SignVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.signs() {
            write!(f, "{}", s.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignVector({self})")
    }
}

impl FromStr for SignVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let signs = s
            .trim()
            .chars()
            .map(|c| {
                Sign::from_char(c).ok_or_else(|| Error::InvalidInput(format!("bad sign character {c:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        SignVector::from_signs(&signs)
    }
}

fn check_len(x: &SignVector, y: &SignVector) -> Result<()> {
    if x.len != y.len {
        return Err(Error::InvalidInput(format!("sign vector lengths differ: {} vs {}", x.len, y.len)));
    }
    Ok(())
}

/// `X ∘ Y`: take `X` where it is nonzero, `Y` elsewhere.
pub fn compose(x: &SignVector, y: &SignVector) -> Result<SignVector> {
    check_len(x, y)?;
    let sx = x.plus | x.minus;
    Ok(SignVector { len: x.len, plus: x.plus | (y.plus & !sx), minus: x.minus | (y.minus & !sx) })
}

pub fn opposite(x: &SignVector) -> SignVector {
    SignVector { len: x.len, plus: x.minus, minus: x.plus }
}

/// Elements on which the two vectors carry opposite nonzero signs.
pub fn separation_set(x: &SignVector, y: &SignVector) -> Result<ElementSet> {
    check_len(x, y)?;
    Ok(separation_mask(x, y))
}

#[inline]
pub(crate) fn separation_mask(x: &SignVector, y: &SignVector) -> ElementSet {
    ElementSet((x.plus & y.minus) | (x.minus & y.plus))
}

/// A deduplicated family of sign vectors of common length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedFamily {
    ground_size: usize,
    members: Vec<SignVector>,
}

impl SignedFamily {
    /// Builds a family; members are sorted and deduplicated.
    pub fn new(ground_size: usize, members: impl IntoIterator<Item = SignVector>) -> Result<Self> {
        let mut members: Vec<SignVector> = members.into_iter().collect();
        if let Some(bad) = members.iter().find(|m| m.len() != ground_size) {
            return Err(Error::InvalidInput(format!(
                "member {bad} has length {} but the ground set has size {ground_size}",
                bad.len()
            )));
        }
        members.sort();
        members.dedup();
        Ok(SignedFamily { ground_size, members })
    }

    /// Parses either a JSON array of sign strings or one sign string per line.
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        let strings: Vec<String> = if trimmed.starts_with('[') {
            serde_json::from_str(trimmed)?
        } else {
            trimmed.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).map(str::to_owned).collect()
        };
        let members = strings.iter().map(|s| s.parse()).collect::<Result<Vec<SignVector>>>()?;
        let ground_size =
            members.first().map(SignVector::len).ok_or_else(|| Error::InvalidInput("empty covector list".into()))?;
        SignedFamily::new(ground_size, members)
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn members(&self) -> &[SignVector] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: &SignVector) -> bool {
        self.members.binary_search(x).is_ok()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.members.iter().map(ToString::to_string).collect()
    }
}

/// Witness that axiom (c) fails: no `Z` eliminates `e` while keeping `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationWitness {
    pub x: SignVector,
    pub y: SignVector,
    pub e: usize,
    pub f: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    /// Axiom (a): the empty signed set is not a member. Offending member on failure.
    pub no_empty: std::result::Result<(), SignVector>,
    /// Axiom (b): closed under opposites. A member whose opposite is missing.
    pub symmetric: std::result::Result<(), SignVector>,
    /// Axiom (c): elimination.
    pub elimination: std::result::Result<(), EliminationWitness>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.no_empty.is_ok() && self.symmetric.is_ok() && self.elimination.is_ok()
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.no_empty {
            Ok(()) => writeln!(f, "(a) pass")?,
            Err(x) => writeln!(f, "(a) FAIL: {x} is the empty signed set")?,
        }
        match &self.symmetric {
            Ok(()) => writeln!(f, "(b) pass")?,
            Err(x) => writeln!(f, "(b) FAIL: opposite of {x} is missing")?,
        }
        match &self.elimination {
            Ok(()) => write!(f, "(c) pass"),
            Err(w) => write!(f, "(c) FAIL: X={} Y={} e={} f={}: no eliminating vector", w.x, w.y, w.e + 1, w.f + 1),
        }
    }
}

/// Largest ground set accepted by the brute-force axiom checker.
pub const AXIOM_CHECK_MAX_GROUND: usize = 20;

/// Brute-force check of the vector axioms (a), (b), (c).
pub fn check_vector_axioms(family: &SignedFamily) -> Result<AxiomReport> {
    if family.ground_size > AXIOM_CHECK_MAX_GROUND {
        return Err(Error::TooLarge(format!(
            "axiom check supports ground sets up to {AXIOM_CHECK_MAX_GROUND}, got {}",
            family.ground_size
        )));
    }
    let members = family.members();
    let no_empty = match members.iter().find(|x| x.is_zero()) {
        Some(x) => Err(*x),
        None => Ok(()),
    };
    let symmetric = match members.iter().find(|x| !family.contains(&opposite(x))) {
        Some(x) => Err(*x),
        None => Ok(()),
    };
    Ok(AxiomReport { no_empty, symmetric, elimination: check_elimination(members) })
}

fn check_elimination(members: &[SignVector]) -> std::result::Result<(), EliminationWitness> {
    for x in members {
        for y in members {
            let xs = x.support().0;
            let ys = y.support().0;
            let required = (xs & !ys) | (ys & !xs) | (x.plus & y.plus) | (x.minus & y.minus);
            if required == 0 {
                continue;
            }
            let pos = x.plus | y.plus;
            let neg = x.minus | y.minus;
            let mut separating = x.plus & y.minus;
            while separating != 0 {
                let e = separating.trailing_zeros() as usize;
                separating &= separating - 1;
                let bit = 1u128 << e;
                let (pos_e, neg_e) = (pos & !bit, neg & !bit);
                // union of supports over every admissible Z
                let covered = members
                    .iter()
                    .filter(|z| z.plus & !pos_e == 0 && z.minus & !neg_e == 0)
                    .fold(0u128, |acc, z| acc | z.plus | z.minus);
                let missing = required & !covered;
                if missing != 0 {
                    return Err(EliminationWitness { x: *x, y: *y, e, f: missing.trailing_zeros() as usize });
                }
            }
        }
    }
    Ok(())
}

/// First pair `(X, Y)` with `X ∘ Y` outside the family, if any.
pub fn check_composition_closure(family: &SignedFamily) -> Option<(SignVector, SignVector)> {
    let set: HashSet<SignVector> = family.members().iter().copied().collect();
    for x in family.members() {
        for y in family.members() {
            let z = compose(x, y).expect("family members share a length");
            if !set.contains(&z) {
                return Some((*x, *y));
            }
        }
    }
    None
}
