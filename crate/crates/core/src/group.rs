//! Arithmetic on Z_N^d, dense signals and spectra, the forward/inverse
//! discrete Fourier transform, norms, and supports.
//!
//! The forward transform carries the `N^{-d}` factor and the inverse carries
//! none:
//!
//! ```text
//! F(m) = N^{-d} * sum_x chi(-x.m) f(x)        chi(t) = exp(2*pi*i*t/N)
//! f(x) = sum_m chi(x.m) F(m)
//! ```
//!
//! Under this convention Plancherel reads `sum_m |F(m)|^2 = N^{-d} sum_x |f(x)|^2`.
//!
//! Group elements are addressed by a flat index in row-major lexicographic
//! order on coordinates: coordinate 0 is the most significant digit, so the
//! flat index of `(c_0, ..., c_{d-1})` is `((c_0 * N + c_1) * N + ...) + c_{d-1}`.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// The ambient group Z_N^d: modulus, dimension, and derived element count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct GroupSpec {
    modulus: u64,
    dimension: u32,
    size: usize,
}

impl GroupSpec {
    /// Build Z_N^d. Rejects N < 2, d < 1, and sizes that overflow `usize`.
    pub fn new(modulus: u64, dimension: u32) -> Result<Self> {
        if modulus < 2 || dimension < 1 {
            return Err(Error::InvalidGroup { modulus, dimension });
        }
        let mut size: usize = 1;
        for _ in 0..dimension {
            let m = usize::try_from(modulus)
                .map_err(|_| Error::GroupSizeOverflow { modulus, dimension })?;
            size = size
                .checked_mul(m)
                .ok_or(Error::GroupSizeOverflow { modulus, dimension })?;
        }
        Ok(GroupSpec {
            modulus,
            dimension,
            size,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    /// N^d, the number of group elements.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn size_f64(&self) -> f64 {
        self.size as f64
    }

    fn check_same(&self, other: &GroupSpec) -> Result<()> {
        if self != other {
            return Err(Error::GroupMismatch {
                a_modulus: self.modulus,
                a_dimension: self.dimension,
                b_modulus: other.modulus,
                b_dimension: other.dimension,
            });
        }
        Ok(())
    }

    /// Decode a flat index into coordinates (least significant last).
    pub fn coords_of(&self, mut index: usize) -> Vec<u64> {
        debug_assert!(index < self.size);
        let n = self.modulus as usize;
        let mut coords = vec![0u64; self.dimension as usize];
        for c in coords.iter_mut().rev() {
            *c = (index % n) as u64;
            index /= n;
        }
        coords
    }

    /// Encode reduced coordinates into a flat index.
    pub fn index_of(&self, coords: &[u64]) -> Result<usize> {
        if coords.len() != self.dimension as usize {
            return Err(Error::PointDimension {
                got: coords.len(),
                expected: self.dimension as usize,
            });
        }
        let mut idx: usize = 0;
        for &c in coords {
            if c >= self.modulus {
                return Err(Error::CoordinateOutOfRange {
                    coord: c,
                    modulus: self.modulus,
                });
            }
            idx = idx * self.modulus as usize + c as usize;
        }
        Ok(idx)
    }

    /// Component-wise sum of two elements given by flat index.
    pub fn add_flat(&self, a: usize, b: usize) -> usize {
        let n = self.modulus as usize;
        let mut out = 0usize;
        let mut pa = a;
        let mut pb = b;
        // Digits come out least significant first; reassemble with place values.
        let mut place = 1usize;
        for _ in 0..self.dimension {
            let da = pa % n;
            let db = pb % n;
            out += ((da + db) % n) * place;
            pa /= n;
            pb /= n;
            place *= n;
        }
        out
    }

    /// Component-wise difference a - b of two flat indices.
    pub fn sub_flat(&self, a: usize, b: usize) -> usize {
        let n = self.modulus as usize;
        let mut out = 0usize;
        let mut pa = a;
        let mut pb = b;
        let mut place = 1usize;
        for _ in 0..self.dimension {
            let da = pa % n;
            let db = pb % n;
            out += ((da + n - db) % n) * place;
            pa /= n;
            pb /= n;
            place *= n;
        }
        out
    }

    /// Dot product x.m reduced modulo N.
    pub fn dot_mod(&self, a: usize, b: usize) -> u64 {
        let n = self.modulus as usize;
        let mut acc: u64 = 0;
        let mut pa = a;
        let mut pb = b;
        for _ in 0..self.dimension {
            let da = (pa % n) as u64;
            let db = (pb % n) as u64;
            acc = (acc + da * db) % self.modulus;
            pa /= n;
            pb /= n;
        }
        acc
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_{}^{}", self.modulus, self.dimension)
    }
}

/// A point of Z_N^d with every coordinate reduced modulo N.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    coords: Vec<u64>,
}

impl Point {
    /// Validate coordinates against the group (all must already be reduced).
    pub fn new(coords: Vec<u64>, group: &GroupSpec) -> Result<Self> {
        group.index_of(&coords)?;
        Ok(Point { coords })
    }

    /// Reduce arbitrary integer coordinates modulo N.
    pub fn reduced(coords: &[u64], group: &GroupSpec) -> Result<Self> {
        if coords.len() != group.dimension() as usize {
            return Err(Error::PointDimension {
                got: coords.len(),
                expected: group.dimension() as usize,
            });
        }
        Ok(Point {
            coords: coords.iter().map(|&c| c % group.modulus()).collect(),
        })
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }
}

/// The multiplicative character chi(t) = exp(2*pi*i*t/N) of Z_N.
///
/// `t` is taken modulo N, so callers may pass any residue representative.
pub fn character(group: &GroupSpec, t: u64) -> Complex64 {
    let n = group.modulus();
    let angle = TAU * ((t % n) as f64) / (n as f64);
    Complex64::new(angle.cos(), angle.sin())
}

/// Dense complex-valued function on Z_N^d (space side).
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    group: GroupSpec,
    values: Vec<Complex64>,
}

/// Dense complex-valued function on Z_N^d (frequency side).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    group: GroupSpec,
    values: Vec<Complex64>,
}

fn check_values(group: &GroupSpec, values: &[Complex64]) -> Result<()> {
    if values.len() != group.size() {
        return Err(Error::SignalLength {
            got: values.len(),
            expected: group.size(),
        });
    }
    for (i, v) in values.iter().enumerate() {
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NonFiniteValue { index: i });
        }
    }
    Ok(())
}

macro_rules! dense_function_impl {
    ($ty:ident) => {
        impl $ty {
            pub fn new(group: GroupSpec, values: Vec<Complex64>) -> Result<Self> {
                check_values(&group, &values)?;
                Ok($ty { group, values })
            }

            pub fn zero(group: GroupSpec) -> Self {
                let values = vec![Complex64::new(0.0, 0.0); group.size()];
                $ty { group, values }
            }

            pub fn group(&self) -> &GroupSpec {
                &self.group
            }

            pub fn values(&self) -> &[Complex64] {
                &self.values
            }

            pub fn values_mut(&mut self) -> &mut [Complex64] {
                &mut self.values
            }

            pub fn into_values(self) -> Vec<Complex64> {
                self.values
            }

            /// Largest modulus over all entries.
            pub fn max_abs(&self) -> f64 {
                self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
            }

            pub fn is_zero(&self) -> bool {
                self.values.iter().all(|v| v.re == 0.0 && v.im == 0.0)
            }
        }
    };
}

dense_function_impl!(Signal);
dense_function_impl!(Spectrum);

impl Signal {
    /// Indicator function of a set.
    pub fn indicator(set: &IndexSet) -> Self {
        let mut s = Signal::zero(*set.group());
        for &i in set.flat_indices() {
            s.values[i] = Complex64::new(1.0, 0.0);
        }
        s
    }

    /// Kronecker delta at a flat index, with the given value.
    pub fn delta(group: GroupSpec, index: usize, value: Complex64) -> Self {
        let mut s = Signal::zero(group);
        s.values[index] = value;
        s
    }

    /// Shift by y: (T_y f)(x) = f(x - y).
    pub fn translate(&self, y: usize) -> Signal {
        let mut out = Signal::zero(self.group);
        for x in 0..self.group.size() {
            out.values[x] = self.values[self.group.sub_flat(x, y)];
        }
        out
    }
}

/// Finite subset of Z_N^d, stored as strictly increasing flat indices
/// (which is exactly lexicographic order on coordinates).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSet {
    group: GroupSpec,
    flats: Vec<usize>,
}

impl IndexSet {
    /// Build from points; sorts and removes duplicates.
    pub fn from_points(group: GroupSpec, points: &[Point]) -> Result<Self> {
        let mut flats = Vec::with_capacity(points.len());
        for p in points {
            flats.push(group.index_of(p.coords())?);
        }
        flats.sort_unstable();
        flats.dedup();
        Ok(IndexSet { group, flats })
    }

    /// Build from flat indices; sorts and removes duplicates.
    pub fn from_flat_indices(group: GroupSpec, mut flats: Vec<usize>) -> Result<Self> {
        for &i in &flats {
            if i >= group.size() {
                return Err(Error::SignalLength {
                    got: i,
                    expected: group.size(),
                });
            }
        }
        flats.sort_unstable();
        flats.dedup();
        Ok(IndexSet { group, flats })
    }

    pub fn empty(group: GroupSpec) -> Self {
        IndexSet {
            group,
            flats: Vec::new(),
        }
    }

    /// The whole group as a set.
    pub fn full(group: GroupSpec) -> Self {
        IndexSet {
            flats: (0..group.size()).collect(),
            group,
        }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn flat_indices(&self) -> &[usize] {
        &self.flats
    }

    pub fn contains(&self, flat: usize) -> bool {
        self.flats.binary_search(&flat).is_ok()
    }

    /// Points in lexicographic order.
    pub fn points(&self) -> Vec<Point> {
        self.flats
            .iter()
            .map(|&i| Point {
                coords: self.group.coords_of(i),
            })
            .collect()
    }

    pub fn check_same_group(&self, other: &IndexSet) -> Result<()> {
        self.group.check_same(&other.group)
    }

    pub fn is_disjoint(&self, other: &IndexSet) -> bool {
        // Both sorted; walk them together.
        let (mut i, mut j) = (0, 0);
        while i < self.flats.len() && j < other.flats.len() {
            match self.flats[i].cmp(&other.flats[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    /// First common flat index, if any.
    pub fn first_common(&self, other: &IndexSet) -> Option<usize> {
        let (mut i, mut j) = (0, 0);
        while i < self.flats.len() && j < other.flats.len() {
            match self.flats[i].cmp(&other.flats[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return Some(self.flats[i]),
            }
        }
        None
    }

    pub fn union(&self, other: &IndexSet) -> Result<IndexSet> {
        self.check_same_group(other)?;
        let mut flats = self.flats.clone();
        flats.extend_from_slice(&other.flats);
        IndexSet::from_flat_indices(self.group, flats)
    }

    pub fn is_subset_of(&self, other: &IndexSet) -> bool {
        self.flats.iter().all(|&i| other.contains(i))
    }

    /// Translate the whole set by t (flat index).
    pub fn translate(&self, t: usize) -> IndexSet {
        let mut flats: Vec<usize> = self
            .flats
            .iter()
            .map(|&i| self.group.add_flat(i, t))
            .collect();
        flats.sort_unstable();
        IndexSet {
            group: self.group,
            flats,
        }
    }
}

/// Precomputed character table for repeated transforms on one group.
///
/// Building a plan costs O(N); each transform is the quadratic reference
/// summation. Entries of the input that are exactly zero contribute nothing
/// and are skipped.
pub struct DftPlan {
    group: GroupSpec,
    /// chi[k] = exp(2*pi*i*k/N) for k in 0..N.
    chi: Vec<Complex64>,
}

impl DftPlan {
    pub fn new(group: GroupSpec) -> Self {
        let n = group.modulus();
        let chi = (0..n).map(|k| character(&group, k)).collect();
        DftPlan { group, chi }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    /// chi(t) from the table; t must already be reduced modulo N.
    #[inline]
    pub fn chi(&self, t: u64) -> Complex64 {
        self.chi[t as usize]
    }

    /// Forward transform with the `N^{-d}` factor.
    pub fn dft(&self, f: &Signal) -> Result<Spectrum> {
        self.group.check_same(f.group())?;
        let size = self.group.size();
        let n = self.group.modulus();
        let scale = 1.0 / self.group.size_f64();
        let mut out = vec![Complex64::new(0.0, 0.0); size];
        let nonzero: Vec<usize> = (0..size)
            .filter(|&x| f.values()[x].re != 0.0 || f.values()[x].im != 0.0)
            .collect();
        for (m, slot) in out.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for &x in &nonzero {
                let t = self.group.dot_mod(x, m);
                acc += self.chi((n - t) % n) * f.values()[x];
            }
            *slot = acc * scale;
        }
        Spectrum::new(self.group, out)
    }

    /// Inverse transform; carries no normalization factor.
    pub fn idft(&self, big_f: &Spectrum) -> Result<Signal> {
        self.group.check_same(big_f.group())?;
        let size = self.group.size();
        let mut out = vec![Complex64::new(0.0, 0.0); size];
        let nonzero: Vec<usize> = (0..size)
            .filter(|&m| big_f.values()[m].re != 0.0 || big_f.values()[m].im != 0.0)
            .collect();
        for (x, slot) in out.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for &m in &nonzero {
                let t = self.group.dot_mod(x, m);
                acc += self.chi(t) * big_f.values()[m];
            }
            *slot = acc;
        }
        Signal::new(self.group, out)
    }

    /// Transform of the indicator function of `set`, summing only over the set.
    pub fn dft_indicator(&self, set: &IndexSet) -> Result<Spectrum> {
        self.group.check_same(set.group())?;
        let size = self.group.size();
        let n = self.group.modulus();
        let scale = 1.0 / self.group.size_f64();
        let mut out = vec![Complex64::new(0.0, 0.0); size];
        for (m, slot) in out.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for &x in set.flat_indices() {
                let t = self.group.dot_mod(x, m);
                acc += self.chi((n - t) % n);
            }
            *slot = acc * scale;
        }
        Spectrum::new(self.group, out)
    }
}

/// One-shot forward transform. See [`DftPlan`] for repeated use.
pub fn dft(f: &Signal) -> Result<Spectrum> {
    DftPlan::new(*f.group()).dft(f)
}

/// One-shot inverse transform.
pub fn idft(big_f: &Spectrum) -> Result<Signal> {
    DftPlan::new(*big_f.group()).idft(big_f)
}

/// Normalized L^p norm: (N^{-d} sum_x |f(x)|^p)^{1/p}.
pub fn lp_norm_mu(values: &[Complex64], group: &GroupSpec, p: f64) -> f64 {
    let sum: f64 = values.iter().map(|v| v.norm().powf(p)).sum();
    (sum / group.size_f64()).powf(1.0 / p)
}

/// Unnormalized l^p norm: (sum_x |f(x)|^p)^{1/p}.
pub fn lp_norm(values: &[Complex64], p: f64) -> f64 {
    let sum: f64 = values.iter().map(|v| v.norm().powf(p)).sum();
    sum.powf(1.0 / p)
}

/// The set {x : |f(x)| > tol}. With tol = 0 this is the exact nonzero set.
pub fn support(values: &[Complex64], group: &GroupSpec, tol: f64) -> IndexSet {
    let flats: Vec<usize> = values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.norm() > tol)
        .map(|(i, _)| i)
        .collect();
    IndexSet {
        group: *group,
        flats,
    }
}

impl Signal {
    pub fn support(&self, tol: f64) -> IndexSet {
        support(&self.values, &self.group, tol)
    }

    pub fn lp_norm_mu(&self, p: f64) -> f64 {
        lp_norm_mu(&self.values, &self.group, p)
    }

    pub fn lp_norm(&self, p: f64) -> f64 {
        lp_norm(&self.values, p)
    }
}

impl Spectrum {
    pub fn support(&self, tol: f64) -> IndexSet {
        support(&self.values, &self.group, tol)
    }

    pub fn lp_norm_mu(&self, p: f64) -> f64 {
        lp_norm_mu(&self.values, &self.group, p)
    }

    pub fn lp_norm(&self, p: f64) -> f64 {
        lp_norm(&self.values, p)
    }
}
