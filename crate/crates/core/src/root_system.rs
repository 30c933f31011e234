//! Affine Cartan data for the admissible types, the finite root system and
//! the lattices it carries, and the canonical bilinear form.
//!
//! Every type is built from a static description (diagram plus the expected
//! marks and comarks). At load time the marks and comarks are recomputed as
//! the minimal positive integer kernel vectors of the matrix and its
//! transpose, and loading fails loudly if they disagree with the table.

use crate::error::{Error, Result};
use crate::linalg::{primitive_integer, Matrix};
use crate::rational::{is_integer, q, qf, Q};
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LatticeMode {
    RootLattice,
    WeightLattice,
}

/// One admissible affine type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineCartanData {
    pub type_id: String,
    /// Rank of the finite part.
    pub n: usize,
    /// `(n+1) x (n+1)` Cartan matrix indexed `0..=n`.
    pub matrix: Vec<Vec<i64>>,
    pub marks: Vec<i64>,
    pub comarks: Vec<i64>,
    /// `d_j = a_j / a_j^vee`.
    pub d: Vec<Q>,
    /// Index of the finite node joined to the affine node (lowest one if two).
    pub alpha_index: usize,
    pub l0: u32,
    pub lattice_mode: LatticeMode,
    /// Largest lace count in the diagram.
    pub r: u32,
    gram: Matrix,
    finite_cartan: Matrix,
    roots: Vec<Vec<Q>>,
}

/// Coordinates over the simple roots `alpha_1..alpha_n`, plus a multiple of
/// the null root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector {
    pub coords: Vec<Q>,
    pub delta: Q,
}

impl LatticeVector {
    pub fn zero(n: usize) -> Self {
        LatticeVector {
            coords: vec![Q::zero(); n],
            delta: Q::zero(),
        }
    }

    pub fn simple(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.coords[i - 1] = Q::one();
        v
    }

    pub fn finite(coords: Vec<Q>) -> Self {
        LatticeVector {
            coords,
            delta: Q::zero(),
        }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self::finite(coords.iter().map(|&x| q(x as i128)).collect())
    }

    pub fn null_root(n: usize) -> Self {
        LatticeVector {
            coords: vec![Q::zero(); n],
            delta: Q::one(),
        }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn scale(&self, k: Q) -> Self {
        LatticeVector {
            coords: self.coords.iter().map(|x| x * k).collect(),
            delta: self.delta * k,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.delta.is_zero() && self.coords.iter().all(Zero::is_zero)
    }

    /// The finite part alone.
    pub fn finite_part(&self) -> LatticeVector {
        LatticeVector::finite(self.coords.clone())
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, o: &LatticeVector) -> LatticeVector {
        assert_eq!(self.rank(), o.rank());
        LatticeVector {
            coords: self
                .coords
                .iter()
                .zip(&o.coords)
                .map(|(a, b)| a + b)
                .collect(),
            delta: self.delta + o.delta,
        }
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, o: &LatticeVector) -> LatticeVector {
        self + &(-o)
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        self.scale(-Q::one())
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(crate::rational::format_q).collect();
        write!(f, "({})", c.join(","))?;
        if !self.delta.is_zero() {
            write!(f, "+{}d", crate::rational::format_q(&self.delta))?;
        }
        Ok(())
    }
}

/// Diagram description used to build the Cartan matrix: edges `(i, j, a_ij, a_ji)`.
struct Blueprint {
    type_id: String,
    n: usize,
    edges: Vec<(usize, usize, i64, i64)>,
    marks: Vec<i64>,
    comarks: Vec<i64>,
    l0: u32,
    mode: LatticeMode,
}

fn simple_edges(pairs: &[(usize, usize)]) -> Vec<(usize, usize, i64, i64)> {
    pairs.iter().map(|&(i, j)| (i, j, -1, -1)).collect()
}

fn parse_id(type_id: &str) -> Option<(char, usize, u32)> {
    let (head, twist) = type_id.split_once('~')?;
    let mut chars = head.chars();
    let letter = chars.next()?;
    let rank: usize = chars.as_str().parse().ok()?;
    let twist: u32 = twist.parse().ok()?;
    Some((letter, rank, twist))
}

fn blueprint(type_id: &str, allow_gated: bool) -> Result<Blueprint> {
    let unknown = || Error::UnknownType(type_id.to_string());
    let (letter, k, twist) = parse_id(type_id).ok_or_else(unknown)?;
    let excluded = |reason: &str| Error::ExcludedType {
        type_id: type_id.to_string(),
        reason: reason.to_string(),
    };
    let bp =
        match (letter, twist) {
            ('A', 1) if k == 1 => return Err(excluded(
                "A1~1 joins its two nodes by four laces and has no well-defined affine lace count",
            )),
            ('A', 1) if k >= 2 => {
                let mut pairs: Vec<(usize, usize)> = (0..k).map(|i| (i, i + 1)).collect();
                pairs.push((k, 0));
                Blueprint {
                    type_id: type_id.into(),
                    n: k,
                    edges: simple_edges(&pairs),
                    marks: vec![1; k + 1],
                    comarks: vec![1; k + 1],
                    l0: 1,
                    mode: LatticeMode::RootLattice,
                }
            }
            ('D', 1) if k >= 4 => {
                let mut pairs = vec![(0, 2), (1, 2)];
                pairs.extend((2..k - 2).map(|i| (i, i + 1)));
                pairs.push((k - 2, k - 1));
                pairs.push((k - 2, k));
                let mut marks = vec![2; k + 1];
                for i in [0, 1, k - 1, k] {
                    marks[i] = 1;
                }
                Blueprint {
                    type_id: type_id.into(),
                    n: k,
                    edges: simple_edges(&pairs),
                    comarks: marks.clone(),
                    marks,
                    l0: 1,
                    mode: LatticeMode::RootLattice,
                }
            }
            ('E', 1) if (6..=8).contains(&k) => {
                // Bourbaki numbering: chain 1-3-4-5-..., node 2 hangs off node 4.
                let mut pairs = vec![(1, 3), (2, 4)];
                pairs.extend((3..k).map(|i| (i, i + 1)));
                let (affine_neighbor, marks) = match k {
                    6 => (2, vec![1, 1, 2, 2, 3, 2, 1]),
                    7 => (1, vec![1, 2, 2, 3, 4, 3, 2, 1]),
                    _ => (8, vec![1, 2, 3, 4, 6, 5, 4, 3, 2]),
                };
                pairs.push((0, affine_neighbor));
                Blueprint {
                    type_id: type_id.into(),
                    n: k,
                    edges: simple_edges(&pairs),
                    comarks: marks.clone(),
                    marks,
                    l0: 1,
                    mode: LatticeMode::RootLattice,
                }
            }
            ('B', 1) | ('C', 1) | ('F', 1) | ('G', 1) => {
                return Err(excluded(
                    "the affine simple root alpha_0 is long for this type",
                ))
            }
            ('A', 2) if k >= 2 && k % 2 == 0 => {
                // Kac numbering: alpha_0 short (label 2), alpha_n long (label 1).
                let n = k / 2;
                let mut edges = Vec::new();
                if n == 1 {
                    edges.push((0, 1, -4, -1));
                } else {
                    edges.push((0, 1, -2, -1));
                    edges.extend(simple_edges(
                        &(1..n - 1).map(|i| (i, i + 1)).collect::<Vec<_>>(),
                    ));
                    edges.push((n - 1, n, -2, -1));
                }
                let mut marks = vec![2; n + 1];
                marks[n] = 1;
                let mut comarks = vec![2; n + 1];
                comarks[0] = 1;
                Blueprint {
                    type_id: type_id.into(),
                    n,
                    edges,
                    marks,
                    comarks,
                    l0: 2,
                    mode: LatticeMode::WeightLattice,
                }
            }
            ('D', 2) if k >= 3 => {
                if !allow_gated {
                    return Err(excluded(
                        "the second doubled-bond family is only loaded with the gated catalog",
                    ));
                }
                // Finite part B_n, alpha_0 and alpha_n short.
                let n = k - 1;
                let mut edges = vec![(0, 1, -2, -1)];
                edges.extend(simple_edges(
                    &(1..n - 1).map(|i| (i, i + 1)).collect::<Vec<_>>(),
                ));
                edges.push((n - 1, n, -1, -2));
                let mut comarks = vec![2; n + 1];
                comarks[0] = 1;
                comarks[n] = 1;
                Blueprint {
                    type_id: type_id.into(),
                    n,
                    edges,
                    marks: vec![1; n + 1],
                    comarks,
                    l0: 2,
                    mode: LatticeMode::RootLattice,
                }
            }
            _ => return Err(unknown()),
        };
    Ok(bp)
}

/// Loads one of the default catalog types.
pub fn load_catalog(type_id: &str) -> Result<AffineCartanData> {
    AffineCartanData::build(blueprint(type_id, false)?)
}

/// Like [`load_catalog`] but also admits the gated `D<n+1>~2` family.
pub fn load_catalog_gated(type_id: &str) -> Result<AffineCartanData> {
    AffineCartanData::build(blueprint(type_id, true)?)
}

/// Identifiers shipped by default, smallest ranks first.
pub fn default_catalog_ids() -> Vec<String> {
    let mut ids = Vec::new();
    ids.extend((2..=8).map(|n| format!("A{n}~1")));
    ids.extend((4..=8).map(|n| format!("D{n}~1")));
    ids.extend(["E6~1", "E7~1", "E8~1"].map(String::from));
    ids.extend((1..=4).map(|n| format!("A{}~2", 2 * n)));
    ids
}

pub fn gated_catalog_ids() -> Vec<String> {
    (3..=6).map(|k| format!("D{k}~2")).collect()
}

/// Minimal positive integer kernel vector of `m`, or `None` if the kernel is
/// not one-dimensional or not positive.
pub fn positive_kernel(m: &Matrix) -> Option<Vec<i64>> {
    let k = m.kernel();
    if k.len() != 1 {
        return None;
    }
    let v = primitive_integer(&k[0]);
    if v.iter().all(|x| *x > 0) {
        Some(v.into_iter().map(|x| x as i64).collect())
    } else {
        None
    }
}

impl AffineCartanData {
    fn build(bp: Blueprint) -> Result<Self> {
        let size = bp.n + 1;
        let mut a = vec![vec![0i64; size]; size];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        for &(i, j, aij, aji) in &bp.edges {
            a[i][j] = aij;
            a[j][i] = aji;
        }
        let m = Matrix::from_int_rows(&a);
        let bad = |what: &str| Error::ExcludedType {
            type_id: bp.type_id.clone(),
            reason: format!("embedded table inconsistent: {what}"),
        };
        let marks = positive_kernel(&m).ok_or_else(|| bad("matrix is not of affine type"))?;
        let comarks = positive_kernel(&m.transpose())
            .ok_or_else(|| bad("transpose is not of affine type"))?;
        if marks != bp.marks {
            return Err(bad("marks"));
        }
        if comarks != bp.comarks {
            return Err(bad("comarks"));
        }
        let n = bp.n;
        let d: Vec<Q> = (0..size)
            .map(|j| qf(marks[j] as i128, comarks[j] as i128))
            .collect();
        let gram = Matrix::from_rows(
            (1..size)
                .map(|j| (1..size).map(|k| q(a[j][k] as i128) / d[j]).collect())
                .collect(),
        );
        let finite_cartan = Matrix::from_rows(
            (1..size)
                .map(|j| (1..size).map(|k| q(a[j][k] as i128)).collect())
                .collect(),
        );
        let neighbors: Vec<usize> = (1..size).filter(|&j| a[0][j] != 0).collect();
        let alpha_index = *neighbors
            .first()
            .ok_or_else(|| bad("affine node is isolated"))?;
        let laces_0a = (a[0][alpha_index] * a[alpha_index][0]) as u32;
        let r = (0..size)
            .flat_map(|i| (0..size).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| (a[i][j] * a[j][i]) as u32)
            .max()
            .unwrap_or(0);
        if laces_0a != bp.l0 && !(bp.l0 == 2 && laces_0a == 4) {
            return Err(bad("affine lace count"));
        }
        let mut data = AffineCartanData {
            type_id: bp.type_id,
            n,
            matrix: a,
            marks,
            comarks,
            d,
            alpha_index,
            l0: bp.l0,
            lattice_mode: bp.mode,
            r,
            gram,
            finite_cartan,
            roots: Vec::new(),
        };
        data.roots = data.enumerate_roots();
        if data.is_alpha0_long() {
            return Err(Error::ExcludedType {
                type_id: data.type_id.clone(),
                reason: "the affine simple root alpha_0 is long".into(),
            });
        }
        Ok(data)
    }

    /// Number of laces joining nodes `i` and `j` (`a_ij * a_ji`).
    pub fn laces(&self, i: usize, j: usize) -> u32 {
        if i == j {
            0
        } else {
            (self.matrix[i][j] * self.matrix[j][i]) as u32
        }
    }

    /// Braid length for a lace count, `None` when the pair generates an
    /// infinite dihedral group.
    pub fn braid_length(laces: u32) -> Option<usize> {
        match laces {
            0 => Some(2),
            1 => Some(3),
            2 => Some(4),
            3 => Some(6),
            _ => None,
        }
    }

    /// `a_0`.
    pub fn a0(&self) -> i64 {
        self.marks[0]
    }

    /// Gram matrix `(alpha_j, alpha_k)` of the finite simple roots.
    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// Finite Cartan matrix `(a_jk)_{1<=j,k<=n}`.
    pub fn finite_cartan(&self) -> &Matrix {
        &self.finite_cartan
    }

    /// `(alpha_0, alpha_0)`.
    pub fn alpha0_norm(&self) -> Q {
        q(2) / self.d[0]
    }

    fn is_alpha0_long(&self) -> bool {
        let a0n = self.alpha0_norm();
        (1..=self.n).any(|j| q(2) / self.d[j] < a0n)
    }

    pub fn check_same(&self, x: &LatticeVector) -> Result<()> {
        if x.rank() == self.n {
            Ok(())
        } else {
            Err(Error::MismatchedType)
        }
    }

    /// `(x, y)`; the null root pairs to zero with everything.
    pub fn bilinear(&self, x: &LatticeVector, y: &LatticeVector) -> Result<Q> {
        self.check_same(x)?;
        self.check_same(y)?;
        Ok(self.finite_form(&x.coords, &y.coords))
    }

    pub(crate) fn finite_form(&self, x: &[Q], y: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (j, xj) in x.iter().enumerate() {
            if xj.is_zero() {
                continue;
            }
            for (k, yk) in y.iter().enumerate() {
                if !yk.is_zero() {
                    acc += xj * yk * self.gram.get(j, k);
                }
            }
        }
        acc
    }

    pub fn norm2(&self, x: &LatticeVector) -> Q {
        self.finite_form(&x.coords, &x.coords)
    }

    /// `theta = delta - a_0 alpha_0 = sum_{j>=1} a_j alpha_j`.
    pub fn theta(&self) -> LatticeVector {
        LatticeVector::from_ints(&self.marks[1..])
    }

    /// `a_0^{-1} theta`.
    pub fn theta_scaled(&self) -> LatticeVector {
        self.theta().scale(qf(1, self.a0() as i128))
    }

    /// `alpha_0 = a_0^{-1}(delta - theta)` as a lattice vector with a delta part.
    pub fn alpha0(&self) -> LatticeVector {
        let inv = qf(1, self.a0() as i128);
        let mut v = -&self.theta_scaled();
        v.delta = inv;
        v
    }

    /// Simple reflection `s_i` (`1 <= i <= n`) on finite coordinates.
    pub fn simple_reflect(&self, i: usize, x: &[Q]) -> Vec<Q> {
        let pairing: Q = (0..self.n)
            .map(|j| x[j] * self.finite_cartan.get(i - 1, j))
            .sum();
        let mut out = x.to_vec();
        out[i - 1] -= pairing;
        out
    }

    /// Matrix of `s_i` on finite coordinates.
    pub fn simple_reflection_matrix(&self, i: usize) -> Matrix {
        Matrix::from_columns_fn(self.n, |j| {
            let mut e = vec![Q::zero(); self.n];
            e[j] = Q::one();
            self.simple_reflect(i, &e)
        })
    }

    fn enumerate_roots(&self) -> Vec<Vec<Q>> {
        let mut seen: BTreeSet<Vec<Q>> = BTreeSet::new();
        let mut stack: Vec<Vec<Q>> = (1..=self.n)
            .map(|i| LatticeVector::simple(self.n, i).coords)
            .collect();
        while let Some(r) = stack.pop() {
            if seen.insert(r.clone()) {
                for i in 1..=self.n {
                    let s = self.simple_reflect(i, &r);
                    if !seen.contains(&s) {
                        stack.push(s);
                    }
                }
            }
        }
        seen.into_iter().collect()
    }

    /// All roots of the finite root system.
    pub fn finite_roots(&self) -> &[Vec<Q>] {
        &self.roots
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &Vec<Q>> {
        self.roots
            .iter()
            .filter(|r| r.iter().all(|x| !x.is_negative()))
    }

    pub fn short_norm(&self) -> Q {
        (1..=self.n).map(|j| q(2) / self.d[j]).min().unwrap()
    }

    pub fn long_norm(&self) -> Q {
        (1..=self.n).map(|j| q(2) / self.d[j]).max().unwrap()
    }

    pub fn is_finite_root(&self, coords: &[Q]) -> bool {
        self.roots
            .binary_search_by(|r| r.as_slice().cmp(coords))
            .is_ok()
    }

    /// Root in the finite system of minimal length (all roots when simply laced).
    pub fn is_short_root(&self, coords: &[Q]) -> bool {
        self.is_finite_root(coords) && self.finite_form(coords, coords) == self.short_norm()
    }

    pub fn is_long_root(&self, coords: &[Q]) -> bool {
        self.is_finite_root(coords)
            && self.long_norm() != self.short_norm()
            && self.finite_form(coords, coords) == self.long_norm()
    }

    /// Membership in the active finite lattice (root lattice, or the weight
    /// lattice for the `A_{2n}^{(2)}` family), ignoring the delta part.
    pub fn in_finite_lattice(&self, coords: &[Q]) -> bool {
        match self.lattice_mode {
            LatticeMode::RootLattice => coords.iter().all(is_integer),
            LatticeMode::WeightLattice => self.finite_cartan.apply(coords).iter().all(is_integer),
        }
    }

    /// Membership including the delta coefficient (`Z delta`, resp. `1/2 Z delta`).
    pub fn in_lattice(&self, v: &LatticeVector) -> bool {
        if v.rank() != self.n || !self.in_finite_lattice(&v.coords) {
            return false;
        }
        match self.lattice_mode {
            LatticeMode::RootLattice => is_integer(&v.delta),
            LatticeMode::WeightLattice => is_integer(&(v.delta * q(2))),
        }
    }

    /// A Z-basis of the active finite lattice, in simple-root coordinates.
    pub fn lattice_basis(&self) -> Vec<Vec<Q>> {
        match self.lattice_mode {
            LatticeMode::RootLattice => (1..=self.n)
                .map(|i| LatticeVector::simple(self.n, i).coords)
                .collect(),
            LatticeMode::WeightLattice => {
                let inv = self
                    .finite_cartan
                    .inverse()
                    .expect("finite Cartan matrix is invertible");
                (0..self.n).map(|i| inv.column(i)).collect()
            }
        }
    }

    /// Coordinates of a lattice vector over [`Self::lattice_basis`].
    pub fn lattice_coordinates(&self, coords: &[Q]) -> Vec<Q> {
        match self.lattice_mode {
            LatticeMode::RootLattice => coords.to_vec(),
            LatticeMode::WeightLattice => self.finite_cartan.apply(coords),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub type_id: String,
    pub rank: usize,
    pub matrix: Vec<Vec<i64>>,
    pub marks: Vec<i64>,
    pub comarks: Vec<i64>,
    pub alpha_index: usize,
    pub l0: u32,
    pub lattice_mode: LatticeMode,
    pub max_laces: u32,
}

impl From<&AffineCartanData> for CatalogEntry {
    fn from(d: &AffineCartanData) -> Self {
        CatalogEntry {
            type_id: d.type_id.clone(),
            rank: d.n,
            matrix: d.matrix.clone(),
            marks: d.marks.clone(),
            comarks: d.comarks.clone(),
            alpha_index: d.alpha_index,
            l0: d.l0,
            lattice_mode: d.lattice_mode,
            max_laces: d.r,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a2_marks_and_form() {
        let d = load_catalog("A2~1").unwrap();
        assert_eq!(d.marks, vec![1, 1, 1]);
        assert!(d.d.iter().all(|x| x.is_one()));
        assert_eq!(d.l0, 1);
        let a1 = LatticeVector::simple(2, 1);
        let a2 = LatticeVector::simple(2, 2);
        assert_eq!(d.bilinear(&a1, &a1).unwrap(), q(2));
        assert_eq!(d.bilinear(&a1, &a2).unwrap(), q(-1));
        assert_eq!(d.bilinear(&LatticeVector::null_root(2), &a1).unwrap(), q(0));
        assert_eq!(d.theta(), LatticeVector::from_ints(&[1, 1]));
    }

    #[test]
    fn excluded_and_unknown() {
        for id in ["B3~1", "C2~1", "F4~1", "G2~1", "A1~1"] {
            assert!(
                matches!(load_catalog(id), Err(Error::ExcludedType { .. })),
                "{id}"
            );
        }
        assert!(matches!(load_catalog("Q3~1"), Err(Error::UnknownType(_))));
        assert!(matches!(load_catalog("A3~2"), Err(Error::UnknownType(_))));
        assert!(matches!(
            load_catalog("nonsense"),
            Err(Error::UnknownType(_))
        ));
        assert!(matches!(
            load_catalog("D3~2"),
            Err(Error::ExcludedType { .. })
        ));
        assert!(load_catalog_gated("D3~2").is_ok());
    }

    #[test]
    fn twisted_a2_uses_weight_lattice() {
        let d = load_catalog("A2~2").unwrap();
        assert_eq!(d.lattice_mode, LatticeMode::WeightLattice);
        assert_eq!(d.l0, 2);
        assert_eq!(d.laces(0, 1), 4);
        assert_eq!(d.a0(), 2);
        assert!(d.in_lattice(&d.theta_scaled()));
        assert!(!d.in_lattice(&LatticeVector::finite(vec![qf(1, 4)])));
    }

    #[test]
    fn mismatched_rank_is_an_error() {
        let d = load_catalog("A2~1").unwrap();
        let bad = LatticeVector::simple(3, 1);
        assert_eq!(d.bilinear(&bad, &bad), Err(Error::MismatchedType));
    }

    #[test]
    fn root_counts() {
        let counts = [
            ("A2~1", 6),
            ("A3~1", 12),
            ("D4~1", 24),
            ("E6~1", 72),
            ("E8~1", 240),
            ("A4~2", 8),
        ];
        for (id, n) in counts {
            assert_eq!(load_catalog(id).unwrap().finite_roots().len(), n, "{id}");
        }
    }
}
