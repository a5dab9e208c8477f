//! Arrangements given by exact rational coordinates or by an explicit covector
//! list: faces, regions, the intersection poset and its invariants.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier_motzkin::{is_feasible, Constraint, Relation};
use crate::linalg::{null_space, rref};
use crate::polyring::UniPoly;
use crate::signedsets::{check_composition_closure, check_vector_axioms, ElementSet, Sign, SignVector, SignedFamily};

/// Largest hyperplane count accepted by the enumeration routines.
pub const MAX_HYPERPLANES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Hyperplanes `normal·x = offset` in `R^dim`.
    Affine,
    /// Linear hyperplanes in `R^(dim+1)`, read on the sphere `S^dim`.
    Central,
    /// Combinatorial input: the covectors are given directly.
    Covector,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Affine => "affine",
            Mode::Central => "central",
            Mode::Covector => "covector",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Hyperplane {
    pub name: String,
    /// Empty in covector mode.
    pub normal: Vec<BigRational>,
    pub offset: BigRational,
}

impl Hyperplane {
    pub fn new(name: impl Into<String>, normal: Vec<BigRational>, offset: BigRational) -> Self {
        Hyperplane { name: name.into(), normal, offset }
    }

    pub fn from_ints(name: impl Into<String>, normal: &[i64], offset: i64) -> Self {
        Hyperplane::new(
            name,
            normal.iter().map(|&a| BigRational::from_integer(BigInt::from(a))).collect(),
            BigRational::from_integer(BigInt::from(offset)),
        )
    }

    fn negated(&self) -> Hyperplane {
        Hyperplane { name: self.name.clone(), normal: self.normal.iter().map(|a| -a).collect(), offset: -&self.offset }
    }

    /// `(normal, offset)` scaled so the first nonzero normal entry is one.
    fn projective_key(&self) -> Vec<BigRational> {
        let lead = self.normal.iter().find(|a| !a.is_zero()).cloned().unwrap_or_else(BigRational::one);
        self.normal.iter().chain(std::iter::once(&self.offset)).map(|a| a / &lead).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Arrangement {
    mode: Mode,
    dim: usize,
    hyperplanes: Vec<Hyperplane>,
    covectors: Option<SignedFamily>,
}

/// Evidence that an arrangement is not in semigeneral position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemigeneralWitness {
    pub set: ElementSet,
    pub dim: i64,
    pub ambient_dim: i64,
}

impl SemigeneralWitness {
    pub fn expected_dim(&self) -> i64 {
        self.ambient_dim - self.set.len() as i64
    }
}

impl fmt::Display for SemigeneralWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "B={} has dim {} but {}-{}={}",
            self.set,
            self.dim,
            self.ambient_dim,
            self.set.len(),
            self.expected_dim()
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Flat {
    pub id: usize,
    /// Every hyperplane containing the flat.
    pub defining_set: ElementSet,
    /// Affine dimension, or sphere dimension in central and covector mode
    /// (`-1` for the flat consisting of the origin alone).
    pub dim: i64,
    pub sample_point: Option<Vec<BigRational>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntersectionPoset {
    flats: Vec<Flat>,
    mobius: Vec<i64>,
    mode: Mode,
    ambient_dim: i64,
}

impl IntersectionPoset {
    fn new(mut raw: Vec<(ElementSet, i64, Option<Vec<BigRational>>)>, mode: Mode, ambient_dim: i64) -> Self {
        raw.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp_lex(b.0)));
        let flats: Vec<Flat> = raw
            .into_iter()
            .enumerate()
            .map(|(id, (defining_set, dim, sample_point))| Flat { id, defining_set, dim, sample_point })
            .collect();
        let mut by_size: Vec<usize> = (0..flats.len()).collect();
        by_size.sort_by_key(|&i| flats[i].defining_set.len());
        let mut mobius = vec![0i64; flats.len()];
        for (pos, &i) in by_size.iter().enumerate() {
            if pos == 0 {
                mobius[i] = 1;
                continue;
            }
            let s = flats[i].defining_set;
            let below: i64 = by_size[..pos]
                .iter()
                .filter(|&&j| flats[j].defining_set.is_subset(s) && flats[j].defining_set != s)
                .map(|&j| mobius[j])
                .sum();
            mobius[i] = -below;
        }
        IntersectionPoset { flats, mobius, mode, ambient_dim }
    }

    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn flat(&self, id: usize) -> &Flat {
        &self.flats[id]
    }

    /// The ambient space.
    pub fn bottom(&self) -> &Flat {
        &self.flats[0]
    }

    pub fn mobius(&self, id: usize) -> i64 {
        self.mobius[id]
    }

    pub fn mobius_values(&self) -> &[i64] {
        &self.mobius
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn ambient_dim(&self) -> i64 {
        self.ambient_dim
    }

    /// `M <= N` in reverse inclusion order.
    pub fn leq(&self, m: usize, n: usize) -> bool {
        self.flats[m].defining_set.is_subset(self.flats[n].defining_set)
    }

    pub fn find(&self, defining_set: ElementSet) -> Option<usize> {
        self.flats.iter().position(|f| f.defining_set == defining_set)
    }

    /// Pairs `(M, N)` with `N` covering `M`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for m in 0..self.len() {
            for n in 0..self.len() {
                if m == n || !self.leq(m, n) {
                    continue;
                }
                let between = (0..self.len()).any(|k| k != m && k != n && self.leq(m, k) && self.leq(k, n));
                if !between {
                    out.push((m, n));
                }
            }
        }
        out
    }

    /// Number of flats of each dimension, keyed by dimension.
    pub fn count_by_dim(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for f in &self.flats {
            *out.entry(f.dim).or_insert(0) += 1;
        }
        out
    }

    /// Exponent of `t` contributed by a flat to the characteristic polynomial:
    /// linear dimension outside affine mode.
    pub fn poly_dim(&self, id: usize) -> usize {
        let d = self.flats[id].dim + if self.mode == Mode::Affine { 0 } else { 1 };
        d.max(0) as usize
    }

    pub fn characteristic_polynomial(&self) -> UniPoly {
        let mut coeffs = vec![BigInt::zero(); self.poly_dim(0) + 1];
        for id in 0..self.len() {
            coeffs[self.poly_dim(id)] += BigInt::from(self.mobius[id]);
        }
        UniPoly::from_coeffs(coeffs)
    }
}

impl Arrangement {
    pub fn new(mode: Mode, dim: usize, hyperplanes: Vec<Hyperplane>) -> Result<Self> {
        if mode == Mode::Covector {
            return Err(Error::InvalidArrangement("covector mode needs a covector list".into()));
        }
        let a = Arrangement { mode, dim, hyperplanes, covectors: None };
        a.validate_realizable()?;
        Ok(a)
    }

    pub fn affine(dim: usize, hyperplanes: Vec<Hyperplane>) -> Result<Self> {
        Arrangement::new(Mode::Affine, dim, hyperplanes)
    }

    pub fn central(dim: usize, hyperplanes: Vec<Hyperplane>) -> Result<Self> {
        Arrangement::new(Mode::Central, dim, hyperplanes)
    }

    /// Affine arrangement from integer rows `[a_1, .., a_d, b]` meaning `a·x = b`.
    pub fn affine_from_ints(dim: usize, rows: &[&[i64]]) -> Result<Self> {
        let hs = rows
            .iter()
            .enumerate()
            .map(|(i, r)| Hyperplane::from_ints(format!("S{}", i + 1), &r[..r.len() - 1], r[r.len() - 1]))
            .collect();
        Arrangement::affine(dim, hs)
    }

    /// Central arrangement from integer normals in `R^(dim+1)`.
    pub fn central_from_ints(dim: usize, normals: &[&[i64]]) -> Result<Self> {
        let hs = normals.iter().enumerate().map(|(i, r)| Hyperplane::from_ints(format!("S{}", i + 1), r, 0)).collect();
        Arrangement::central(dim, hs)
    }

    /// Combinatorial arrangement. The family must pass the vector axioms and be
    /// closed under composition; zero-free members are the regions.
    pub fn from_covectors(dim: usize, family: SignedFamily, names: Option<Vec<String>>) -> Result<Self> {
        let n = family.ground_size();
        let names = names.unwrap_or_else(|| (1..=n).map(|i| format!("S{i}")).collect());
        if names.len() != n {
            return Err(Error::InvalidArrangement(format!("{} names given for a ground set of size {n}", names.len())));
        }
        let report = check_vector_axioms(&family)?;
        if !report.all_pass() {
            return Err(Error::InvalidArrangement(format!("covector family violates the vector axioms: {report}")));
        }
        if let Some((x, y)) = check_composition_closure(&family) {
            return Err(Error::InvalidArrangement(format!(
                "covector family is not closed under composition: {x} o {y}"
            )));
        }
        if !family.members().iter().any(SignVector::is_zero_free) && n > 0 {
            return Err(Error::InvalidArrangement("covector family has no zero-free member".into()));
        }
        let hyperplanes =
            names.into_iter().map(|name| Hyperplane::new(name, Vec::new(), BigRational::zero())).collect();
        let a = Arrangement { mode: Mode::Covector, dim, hyperplanes, covectors: Some(family) };
        a.check_names()?;
        Ok(a)
    }

    /// Dimension implied by a covector list: the longest chain of zero sets,
    /// starting from the topes.
    pub fn infer_covector_dim(family: &SignedFamily) -> usize {
        let mut zs: Vec<ElementSet> = family.members().iter().map(SignVector::zero_set).collect();
        zs.sort_by_key(|z| (z.len(), z.0));
        zs.dedup();
        let mut height = vec![0usize; zs.len()];
        for i in 0..zs.len() {
            for j in 0..i {
                if zs[j] != zs[i] && zs[j].is_subset(zs[i]) {
                    height[i] = height[i].max(height[j] + 1);
                }
            }
        }
        height.into_iter().max().unwrap_or(0)
    }

    /// Sign vectors on which the oriented-matroid axioms are checked: the
    /// covectors as given, central faces, or the faces of the homogenization.
    pub fn axiom_family(&self) -> Result<SignedFamily> {
        match self.mode {
            Mode::Covector => Ok(self.covectors.clone().expect("covector arrangement")),
            Mode::Central => self.enumerate_faces(),
            Mode::Affine => self.homogenize()?.enumerate_faces(),
        }
    }

    fn check_names(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for h in &self.hyperplanes {
            if !seen.insert(h.name.as_str()) {
                return Err(Error::InvalidArrangement(format!("duplicate hyperplane name {:?}", h.name)));
            }
        }
        Ok(())
    }

    fn validate_realizable(&self) -> Result<()> {
        self.check_names()?;
        let width = self.coordinate_width();
        let mut keys: HashMap<Vec<BigRational>, usize> = HashMap::new();
        for (i, h) in self.hyperplanes.iter().enumerate() {
            if h.normal.len() != width {
                return Err(Error::InvalidArrangement(format!(
                    "hyperplane {} has {} coordinates, expected {width}",
                    h.name,
                    h.normal.len()
                )));
            }
            if h.normal.iter().all(Zero::is_zero) {
                return Err(Error::InvalidArrangement(format!("hyperplane {} has zero normal", h.name)));
            }
            if self.mode == Mode::Central && !h.offset.is_zero() {
                return Err(Error::InvalidArrangement(format!(
                    "hyperplane {} has nonzero offset in central mode",
                    h.name
                )));
            }
            if let Some(j) = keys.insert(h.projective_key(), i) {
                return Err(Error::InvalidArrangement(format!(
                    "hyperplanes {} and {} coincide",
                    self.hyperplanes[j].name, h.name
                )));
            }
        }
        Ok(())
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        match &self.covectors {
            Some(f) => f.ground_size(),
            None => self.hyperplanes.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn names(&self) -> Vec<String> {
        self.hyperplanes.iter().map(|h| h.name.clone()).collect()
    }

    pub fn covectors(&self) -> Option<&SignedFamily> {
        self.covectors.as_ref()
    }

    pub fn is_realizable(&self) -> bool {
        self.mode != Mode::Covector
    }

    /// Number of coordinates of the space the hyperplanes live in.
    pub fn coordinate_width(&self) -> usize {
        match self.mode {
            Mode::Affine => self.dim,
            Mode::Central => self.dim + 1,
            Mode::Covector => 0,
        }
    }

    fn check_size(&self) -> Result<()> {
        if self.is_realizable() && self.len() > MAX_HYPERPLANES {
            return Err(Error::TooLarge(format!(
                "{} hyperplanes exceed the enumeration limit of {MAX_HYPERPLANES}",
                self.len()
            )));
        }
        Ok(())
    }

    /// Exact feasibility of the sign conditions on the first `x.len()` hyperplanes.
    pub fn is_realized(&self, x: &SignVector) -> bool {
        let width = self.coordinate_width();
        let constraints: Vec<Constraint> = x
            .signs()
            .zip(&self.hyperplanes)
            .map(|(s, h)| {
                let (h, rel) = match s {
                    Sign::Plus => (h.clone(), Relation::Greater),
                    Sign::Minus => (h.negated(), Relation::Greater),
                    Sign::Zero => (h.clone(), Relation::Equal),
                };
                Constraint::new(h.normal, -h.offset, rel)
            })
            .collect();
        if constraints.is_empty() {
            return true;
        }
        debug_assert!(constraints.iter().all(|c| c.coeffs.len() == width));
        is_feasible(&constraints)
    }

    fn extend_all(&self, signs: &[Sign]) -> Vec<SignVector> {
        let mut partial = vec![SignVector::zeros(0)];
        for _ in 0..self.len() {
            partial = partial
                .par_iter()
                .flat_map_iter(|p| signs.iter().map(move |&s| p.push(s)).filter(|x| self.is_realized(x)))
                .collect();
        }
        partial.sort();
        partial
    }

    /// Regions as zero-free sign vectors in canonical order; the index is the
    /// region id.
    pub fn enumerate_regions(&self) -> Result<Vec<SignVector>> {
        self.check_size()?;
        Ok(match &self.covectors {
            Some(f) => f.members().iter().filter(|x| x.is_zero_free()).copied().collect(),
            None => self.extend_all(&[Sign::Plus, Sign::Minus]),
        })
    }

    /// All faces. In central mode the zero vector (the origin) is omitted so the
    /// result is a family of nonzero covectors.
    pub fn enumerate_faces(&self) -> Result<SignedFamily> {
        self.check_size()?;
        if let Some(f) = &self.covectors {
            return Ok(f.clone());
        }
        let mut faces = self.extend_all(&[Sign::Plus, Sign::Zero, Sign::Minus]);
        if self.mode == Mode::Central {
            faces.retain(|x| !x.is_zero());
        }
        SignedFamily::new(self.len(), faces)
    }

    /// Faces of the arrangement seen as a cell decomposition of a linear space:
    /// in central and covector mode this adds the zero vector.
    pub fn linear_faces(&self) -> Result<Vec<SignVector>> {
        let mut faces = self.enumerate_faces()?.members().to_vec();
        if self.mode != Mode::Affine {
            let z = SignVector::zeros(self.len());
            if let Err(pos) = faces.binary_search(&z) {
                faces.insert(pos, z);
            }
        }
        Ok(faces)
    }

    /// Augmented rows `[normal | offset]`.
    fn augmented_rows(&self, set: ElementSet) -> Vec<Vec<BigRational>> {
        set.iter()
            .map(|i| {
                let h = &self.hyperplanes[i];
                h.normal.iter().cloned().chain(std::iter::once(h.offset.clone())).collect()
            })
            .collect()
    }

    /// Rank and consistency of the system `{normal_i · x = offset_i : i in set}`.
    fn system_rank(&self, set: ElementSet) -> (usize, bool) {
        let mut rows = self.augmented_rows(set);
        let pivots = rref(&mut rows);
        let width = self.coordinate_width();
        let consistent = !pivots.contains(&width);
        (pivots.len(), consistent)
    }

    fn closure(&self, set: ElementSet, rank: usize) -> ElementSet {
        let mut out = set;
        for j in 0..self.len() {
            if !set.contains(j) && self.system_rank(set.union(ElementSet::singleton(j))).0 == rank {
                out.insert(j);
            }
        }
        out
    }

    fn sample_point(&self, set: ElementSet) -> Option<Vec<BigRational>> {
        let width = self.coordinate_width();
        let mut rows = self.augmented_rows(set);
        let pivots = rref(&mut rows);
        match self.mode {
            Mode::Affine => {
                let mut x = vec![BigRational::zero(); width];
                for (r, &c) in pivots.iter().enumerate() {
                    x[c] = rows[r][width].clone();
                }
                Some(x)
            }
            _ => {
                let coeffs: Vec<Vec<BigRational>> = rows.iter().map(|r| r[..width].to_vec()).collect();
                null_space(&coeffs, width).into_iter().next()
            }
        }
    }

    /// All flats, including the ambient space.
    pub fn intersection_poset(&self) -> Result<IntersectionPoset> {
        self.check_size()?;
        let ambient = self.dim as i64;
        if let Some(family) = &self.covectors {
            return Ok(covector_poset(family, ambient));
        }
        let width = self.coordinate_width() as i64;
        let shift = if self.mode == Mode::Central { 1 } else { 0 };
        let mut seen: HashSet<ElementSet> = HashSet::new();
        let mut raw = Vec::new();
        let mut queue = VecDeque::new();
        let bottom = self.closure(ElementSet::EMPTY, 0);
        seen.insert(bottom);
        queue.push_back((bottom, 0usize));
        while let Some((set, rank)) = queue.pop_front() {
            raw.push((set, width - rank as i64 - shift, self.sample_point(set)));
            for j in 0..self.len() {
                if set.contains(j) {
                    continue;
                }
                let t = set.union(ElementSet::singleton(j));
                let (r, consistent) = self.system_rank(t);
                if !consistent {
                    continue;
                }
                let closed = self.closure(t, r);
                if seen.insert(closed) {
                    queue.push_back((closed, r));
                }
            }
        }
        Ok(IntersectionPoset::new(raw, self.mode, ambient))
    }

    /// Returns the first flat whose dimension differs from `dim - |defining set|`.
    pub fn semigeneral_witness(&self, poset: &IntersectionPoset) -> Option<SemigeneralWitness> {
        let ambient = self.dim as i64;
        poset.flats().iter().find(|f| f.dim != ambient - f.defining_set.len() as i64).map(|f| SemigeneralWitness {
            set: f.defining_set,
            dim: f.dim,
            ambient_dim: ambient,
        })
    }

    pub fn is_semigeneral(&self) -> Result<std::result::Result<(), SemigeneralWitness>> {
        let poset = self.intersection_poset()?;
        Ok(match self.semigeneral_witness(&poset) {
            Some(w) => Err(w),
            None => Ok(()),
        })
    }

    pub fn require_semigeneral(&self) -> Result<()> {
        self.is_semigeneral()?.map_err(Error::NotSemigeneral)
    }

    pub fn characteristic_polynomial(&self) -> Result<UniPoly> {
        Ok(self.intersection_poset()?.characteristic_polynomial())
    }

    /// Sub-arrangement of the hyperplanes in `set`, same ambient space.
    pub fn sub_arrangement(&self, set: ElementSet) -> Result<Arrangement> {
        match &self.covectors {
            Some(family) => {
                let keep = set.to_vec();
                let projected =
                    family.members().iter().map(|x| x.project(&keep)).filter(|x| !x.is_zero()).collect::<Vec<_>>();
                let names = keep.iter().map(|&i| self.hyperplanes[i].name.clone()).collect();
                Arrangement::from_covectors(self.dim, SignedFamily::new(keep.len(), projected)?, Some(names))
            }
            None => Ok(Arrangement {
                mode: self.mode,
                dim: self.dim,
                hyperplanes: set.iter().map(|i| self.hyperplanes[i].clone()).collect(),
                covectors: None,
            }),
        }
    }

    /// Remove hyperplane `e`.
    pub fn delete(&self, e: usize) -> Result<Arrangement> {
        if e >= self.len() {
            return Err(Error::InvalidInput(format!("no hyperplane with index {e}")));
        }
        let mut keep = ElementSet::full(self.len());
        keep.remove(e);
        self.sub_arrangement(keep)
    }

    /// Append a hyperplane (realizable modes).
    pub fn with_hyperplane(&self, h: Hyperplane) -> Result<Arrangement> {
        let mut hs = self.hyperplanes.clone();
        hs.push(h);
        Arrangement::new(self.mode, self.dim, hs)
    }

    /// Localization: hyperplanes containing the flat.
    pub fn localization(&self, flat: &Flat) -> Result<Arrangement> {
        self.sub_arrangement(flat.defining_set)
    }

    /// The arrangement induced inside `flat`, in coordinates of an exact basis
    /// of the flat. Coinciding traces are merged with their names joined.
    pub fn restriction(&self, flat: &Flat) -> Result<Arrangement> {
        if !self.is_realizable() {
            return Err(Error::Unsupported("restriction of a covector-mode arrangement".into()));
        }
        if flat.defining_set.is_empty() {
            return Ok(self.clone());
        }
        if flat.dim < 0 {
            return Err(Error::Unsupported("restriction to the origin of a central arrangement".into()));
        }
        let width = self.coordinate_width();
        let mut rows = self.augmented_rows(flat.defining_set);
        let pivots = rref(&mut rows);
        if pivots.contains(&width) {
            return Err(Error::InvalidInput("flat is empty".into()));
        }
        let coeffs: Vec<Vec<BigRational>> = rows.iter().map(|r| r[..width].to_vec()).collect();
        let basis = null_space(&coeffs, width);
        let mut origin = vec![BigRational::zero(); width];
        if self.mode == Mode::Affine {
            for (r, &c) in pivots.iter().enumerate() {
                origin[c] = rows[r][width].clone();
            }
        }
        let mut traces: Vec<Hyperplane> = Vec::new();
        let mut keys: HashMap<Vec<BigRational>, usize> = HashMap::new();
        for j in 0..self.len() {
            if flat.defining_set.contains(j) {
                continue;
            }
            let h = &self.hyperplanes[j];
            let normal: Vec<BigRational> = basis.iter().map(|v| dot(&h.normal, v)).collect();
            if normal.iter().all(Zero::is_zero) {
                // parallel to the flat and not containing it
                continue;
            }
            let offset = &h.offset - dot(&h.normal, &origin);
            let trace = Hyperplane::new(h.name.clone(), normal, offset);
            match keys.get(&trace.projective_key()) {
                Some(&k) => {
                    let merged = format!("{}+{}", traces[k].name, trace.name);
                    traces[k].name = merged;
                }
                None => {
                    keys.insert(trace.projective_key(), traces.len());
                    traces.push(trace);
                }
            }
        }
        Arrangement::new(self.mode, flat.dim as usize, traces)
    }

    /// Flip the positive and negative sides of the hyperplanes in `mask`.
    pub fn reorient(&self, mask: ElementSet) -> Result<Arrangement> {
        match &self.covectors {
            Some(family) => {
                let members = family.members().iter().map(|x| x.reorient(mask));
                Arrangement::from_covectors(self.dim, SignedFamily::new(self.len(), members)?, Some(self.names()))
            }
            None => Ok(Arrangement {
                mode: self.mode,
                dim: self.dim,
                hyperplanes: self
                    .hyperplanes
                    .iter()
                    .enumerate()
                    .map(|(i, h)| if mask.contains(i) { h.negated() } else { h.clone() })
                    .collect(),
                covectors: None,
            }),
        }
    }

    /// Affine arrangement embedded in one dimension up as a central one, with
    /// an extra hyperplane at infinity appended last.
    pub fn homogenize(&self) -> Result<Arrangement> {
        if self.mode != Mode::Affine {
            return Err(Error::Unsupported(format!("homogenization of a {} arrangement", self.mode)));
        }
        let mut hs: Vec<Hyperplane> = self
            .hyperplanes
            .iter()
            .map(|h| {
                let mut normal = h.normal.clone();
                normal.push(-&h.offset);
                Hyperplane::new(h.name.clone(), normal, BigRational::zero())
            })
            .collect();
        let mut inf = vec![BigRational::zero(); self.dim + 1];
        inf[self.dim] = BigRational::one();
        let mut name = "infinity".to_string();
        while hs.iter().any(|h| h.name == name) {
            name.push('\'');
        }
        hs.push(Hyperplane::new(name, inf, BigRational::zero()));
        Arrangement::central(self.dim, hs)
    }

    pub fn from_json_str(text: &str) -> Result<Arrangement> {
        let raw: ArrangementJson = serde_json::from_str(text)?;
        raw.into_arrangement()
    }

    pub fn to_json(&self) -> ArrangementJson {
        ArrangementJson {
            mode: self.mode,
            dim: self.dim,
            hyperplanes: if self.is_realizable() {
                self.hyperplanes
                    .iter()
                    .map(|h| HyperplaneJson {
                        name: Some(h.name.clone()),
                        normal: h.normal.iter().map(ToString::to_string).collect(),
                        offset: Some(h.offset.to_string()),
                    })
                    .collect()
            } else {
                self.hyperplanes
                    .iter()
                    .map(|h| HyperplaneJson { name: Some(h.name.clone()), normal: Vec::new(), offset: None })
                    .collect()
            },
            covectors: self.covectors.as_ref().map(SignedFamily::to_strings),
        }
    }
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn covector_poset(family: &SignedFamily, ambient: i64) -> IntersectionPoset {
    let n = family.ground_size();
    let mut sets: Vec<ElementSet> = family.members().iter().map(SignVector::zero_set).collect();
    sets.push(ElementSet::full(n));
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp_lex(*b)));
    sets.dedup();
    let mut height = vec![0i64; sets.len()];
    for i in 0..sets.len() {
        height[i] = (0..i)
            .filter(|&j| sets[j].is_subset(sets[i]) && sets[j] != sets[i])
            .map(|j| height[j] + 1)
            .max()
            .unwrap_or(0);
    }
    let raw = sets.into_iter().zip(height).map(|(s, h)| (s, ambient - h, None)).collect();
    IntersectionPoset::new(raw, Mode::Covector, ambient)
}

/// Parse a rational of the form `-?digits(/digits)?`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let body = t.strip_prefix('-').unwrap_or(t);
    let ok = match body.split_once('/') {
        Some((a, b)) => is_digits(a) && is_digits(b),
        None => is_digits(body),
    };
    if !ok {
        return Err(Error::InvalidInput(format!("malformed rational {s:?}")));
    }
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (BigInt::from_str(a), BigInt::from_str(b)),
        None => (BigInt::from_str(t), Ok(BigInt::one())),
    };
    let (num, den) = (num.expect("checked digits"), den.expect("checked digits"));
    if den.is_zero() {
        return Err(Error::InvalidInput(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(num, den))
}

fn is_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HyperplaneJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub normal: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ArrangementJson {
    pub mode: Mode,
    pub dim: usize,
    #[serde(default)]
    pub hyperplanes: Vec<HyperplaneJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covectors: Option<Vec<String>>,
}

impl ArrangementJson {
    pub fn into_arrangement(self) -> Result<Arrangement> {
        let names = |hs: &[HyperplaneJson], n: usize| -> Vec<String> {
            (0..n).map(|i| hs.get(i).and_then(|h| h.name.clone()).unwrap_or_else(|| format!("S{}", i + 1))).collect()
        };
        match self.mode {
            Mode::Covector => {
                let list = self
                    .covectors
                    .ok_or_else(|| Error::InvalidArrangement("covector mode needs \"covectors\"".into()))?;
                let members = list.iter().map(|s| s.parse()).collect::<Result<Vec<SignVector>>>()?;
                let n = members.first().map_or(self.hyperplanes.len(), SignVector::len);
                let family = SignedFamily::new(n, members)?;
                if !self.hyperplanes.is_empty() && self.hyperplanes.len() != n {
                    return Err(Error::InvalidArrangement(format!(
                        "{} hyperplane names for covectors of length {n}",
                        self.hyperplanes.len()
                    )));
                }
                Arrangement::from_covectors(self.dim, family, Some(names(&self.hyperplanes, n)))
            }
            mode => {
                if self.covectors.is_some() {
                    return Err(Error::InvalidArrangement(format!("covectors given in {mode} mode")));
                }
                let all_names = names(&self.hyperplanes, self.hyperplanes.len());
                let hs = self
                    .hyperplanes
                    .into_iter()
                    .zip(all_names)
                    .map(|(h, name)| {
                        let normal = h.normal.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
                        let offset = match h.offset {
                            Some(s) => parse_rational(&s)?,
                            None => BigRational::zero(),
                        };
                        Ok(Hyperplane::new(name, normal, offset))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Arrangement::new(mode, self.dim, hs)
            }
        }
    }
}

/// Everything the matrix routines need, computed once.
#[derive(Clone, Debug)]
pub struct Combinatorics {
    pub regions: Vec<SignVector>,
    /// Linear faces, see [`Arrangement::linear_faces`].
    pub faces: Vec<SignVector>,
    pub poset: IntersectionPoset,
}

impl Combinatorics {
    pub fn compute(a: &Arrangement) -> Result<Self> {
        Ok(Combinatorics { regions: a.enumerate_regions()?, faces: a.linear_faces()?, poset: a.intersection_poset()? })
    }
}
