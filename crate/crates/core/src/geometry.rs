//! The space `V = h* + R d1 + R d2 + R L1 + R L2`, its form, the double
//! affine root set and exact matrices for reflections and translations.
//!
//! Coordinates are always ordered `(alpha_1..alpha_n, d1, d2, L1, L2)`.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{is_integer, q, qf, Q};
use crate::root_system::{AffineCartanData, LatticeMode, LatticeVector};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VectorV {
    pub finite: Vec<Q>,
    pub d1: Q,
    pub d2: Q,
    pub l1: Q,
    pub l2: Q,
}

impl VectorV {
    pub fn zero(n: usize) -> Self {
        VectorV {
            finite: vec![Q::zero(); n],
            d1: Q::zero(),
            d2: Q::zero(),
            l1: Q::zero(),
            l2: Q::zero(),
        }
    }

    pub fn from_finite(coords: &[Q]) -> Self {
        let mut v = Self::zero(coords.len());
        v.finite = coords.to_vec();
        v
    }

    /// Basis vector `k` in the fixed coordinate order.
    pub fn basis(n: usize, k: usize) -> Self {
        let mut c = vec![Q::zero(); n + 4];
        c[k] = Q::one();
        Self::from_coords(&c)
    }

    pub fn delta1(n: usize) -> Self {
        Self::basis(n, n)
    }

    pub fn delta2(n: usize) -> Self {
        Self::basis(n, n + 1)
    }

    pub fn lambda1(n: usize) -> Self {
        Self::basis(n, n + 2)
    }

    pub fn lambda2(n: usize) -> Self {
        Self::basis(n, n + 3)
    }

    pub fn rank(&self) -> usize {
        self.finite.len()
    }

    pub fn coords(&self) -> Vec<Q> {
        let mut c = self.finite.clone();
        c.extend([self.d1, self.d2, self.l1, self.l2]);
        c
    }

    pub fn from_coords(c: &[Q]) -> Self {
        let n = c.len() - 4;
        VectorV {
            finite: c[..n].to_vec(),
            d1: c[n],
            d2: c[n + 1],
            l1: c[n + 2],
            l2: c[n + 3],
        }
    }

    pub fn add(&self, o: &VectorV) -> VectorV {
        let c: Vec<Q> = self
            .coords()
            .iter()
            .zip(o.coords())
            .map(|(a, b)| a + b)
            .collect();
        Self::from_coords(&c)
    }

    pub fn scale(&self, k: Q) -> VectorV {
        let c: Vec<Q> = self.coords().iter().map(|a| a * k).collect();
        Self::from_coords(&c)
    }

    pub fn sub(&self, o: &VectorV) -> VectorV {
        self.add(&o.scale(-Q::one()))
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(Zero::is_zero)
    }
}

impl fmt::Display for VectorV {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self
            .coords()
            .iter()
            .map(crate::rational::format_q)
            .collect();
        write!(f, "[{}]", c.join(", "))
    }
}

/// Exact linear map on `V`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinMap(pub Matrix);

impl LinMap {
    pub fn identity(n: usize) -> Self {
        LinMap(Matrix::identity(n + 4))
    }

    pub fn rank(&self) -> usize {
        self.0.rows() - 4
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn apply(&self, v: &VectorV) -> VectorV {
        VectorV::from_coords(&self.0.apply(&v.coords()))
    }

    pub fn compose(&self, o: &LinMap) -> LinMap {
        LinMap(self.0.matmul(&o.0))
    }

    pub fn inverse(&self) -> Option<LinMap> {
        self.0.inverse().map(LinMap)
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    fn from_fn(n: usize, f: impl Fn(&VectorV) -> VectorV) -> LinMap {
        LinMap(Matrix::from_columns_fn(n + 4, |j| {
            f(&VectorV::basis(n, j)).coords()
        }))
    }

    /// `true` when the subspace spanned by the finite part and `d1, d2` is
    /// mapped into itself and the map is the identity there.
    pub fn is_identity_on_v00(&self) -> bool {
        let n = self.rank();
        (0..n + 2).all(|j| {
            let col = self.0.column(j);
            col.iter()
                .enumerate()
                .all(|(i, x)| if i == j { x.is_one() } else { x.is_zero() })
        })
    }

    /// `true` when the subspace `V_(0,0)` is invariant.
    pub fn preserves_v00(&self) -> bool {
        let n = self.rank();
        (0..n + 2).all(|j| self.0.get(n + 2, j).is_zero() && self.0.get(n + 3, j).is_zero())
    }
}

impl Mul for &LinMap {
    type Output = LinMap;
    fn mul(self, o: &LinMap) -> LinMap {
        self.compose(o)
    }
}

impl fmt::Debug for LinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinMap{:?}", self.0)
    }
}

/// Generators of the double affine Weyl group in the order-two presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WeylGen {
    S(usize),
    S01,
    S02,
    S03,
    Tau,
}

impl WeylGen {
    pub fn all(n: usize) -> Vec<WeylGen> {
        let mut v: Vec<WeylGen> = (1..=n).map(WeylGen::S).collect();
        v.extend([WeylGen::S01, WeylGen::S02, WeylGen::S03, WeylGen::Tau]);
        v
    }

    /// Parses a generator id and checks it against the rank.
    pub fn parse(id: &str, n: usize) -> Result<WeylGen> {
        let g: WeylGen = id.parse()?;
        match g {
            WeylGen::S(i) if i == 0 || i > n => Err(Error::UnknownGenerator(id.to_string())),
            g => Ok(g),
        }
    }
}

impl FromStr for WeylGen {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "s01" => WeylGen::S01,
            "s02" => WeylGen::S02,
            "s03" => WeylGen::S03,
            "tau" => WeylGen::Tau,
            _ => {
                let idx = s
                    .strip_prefix('s')
                    .filter(|r| !r.starts_with('0'))
                    .and_then(|r| r.parse::<usize>().ok())
                    .ok_or_else(|| Error::UnknownGenerator(s.to_string()))?;
                WeylGen::S(idx)
            }
        })
    }
}

impl fmt::Display for WeylGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeylGen::S(i) => write!(f, "s{i}"),
            WeylGen::S01 => f.write_str("s01"),
            WeylGen::S02 => f.write_str("s02"),
            WeylGen::S03 => f.write_str("s03"),
            WeylGen::Tau => f.write_str("tau"),
        }
    }
}

/// A candidate double affine root `base + m d1 + n d2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TildeRoot {
    pub base: LatticeVector,
    pub m: Q,
    pub n: Q,
}

impl TildeRoot {
    pub fn new(base: LatticeVector, m: Q, n: Q) -> Self {
        TildeRoot {
            base: base.finite_part(),
            m,
            n,
        }
    }

    /// Set for the half-shifted components that only occur for `A_{2n}^{(2)}`.
    pub fn half_flag(&self) -> bool {
        !is_integer(&self.m) || !is_integer(&self.n)
    }

    pub fn to_vector(&self) -> VectorV {
        let mut v = VectorV::from_finite(&self.base.coords);
        v.d1 = self.m;
        v.d2 = self.n;
        v
    }
}

impl AffineCartanData {
    /// Gram matrix of the form on `V`.
    pub fn gram_v(&self) -> Matrix {
        let n = self.n;
        let mut g = Matrix::zeros(n + 4, n + 4);
        for j in 0..n {
            for k in 0..n {
                g.set(j, k, self.gram().get(j, k));
            }
        }
        for i in 0..2 {
            g.set(n + i, n + 2 + i, Q::one());
            g.set(n + 2 + i, n + i, Q::one());
        }
        g
    }

    pub fn form_v(&self, x: &VectorV, y: &VectorV) -> Result<Q> {
        if x.rank() != self.n || y.rank() != self.n {
            return Err(Error::MismatchedType);
        }
        Ok(self.form_v_unchecked(x, y))
    }

    fn form_v_unchecked(&self, x: &VectorV, y: &VectorV) -> Q {
        self.finite_form(&x.finite, &y.finite)
            + x.d1 * y.l1
            + x.l1 * y.d1
            + x.d2 * y.l2
            + x.l2 * y.d2
    }

    /// Membership in the double affine root set. For `A_{2n}^{(2)}` the
    /// half-shifted part is taken with all three non-integral shift classes,
    /// which is the smallest choice stable under the group.
    pub fn in_tilde_r(&self, root: &TildeRoot) -> bool {
        let b = &root.base.coords;
        if b.len() != self.n {
            return false;
        }
        let (m, n) = (root.m, root.n);
        let ints = is_integer(&m) && is_integer(&n);
        if ints {
            if self.is_short_root(b)
                || (self.long_norm() == self.short_norm() && self.is_finite_root(b))
            {
                return true;
            }
            let r = q(self.r as i128);
            return self.is_long_root(b) && is_integer(&(m / r)) && is_integer(&(n / r));
        }
        if self.lattice_mode != LatticeMode::WeightLattice {
            return false;
        }
        let doubled: Vec<Q> = b.iter().map(|x| x * q(2)).collect();
        let long = self.is_finite_root(&doubled)
            && self.finite_form(&doubled, &doubled) == self.long_norm();
        long && is_integer(&(m * q(2))) && is_integer(&(n * q(2)))
    }

    /// Reflection in a non-isotropic vector.
    pub fn reflect_vector(&self, a: &VectorV) -> Result<LinMap> {
        let aa = self.form_v(a, a)?;
        if aa.is_zero() {
            return Err(Error::IsotropicRoot);
        }
        let k = q(2) / aa;
        Ok(LinMap::from_fn(self.n, |x| {
            x.sub(&a.scale(k * self.form_v_unchecked(x, a)))
        }))
    }

    pub fn reflect(&self, root: &TildeRoot) -> Result<LinMap> {
        if root.base.rank() != self.n {
            return Err(Error::MismatchedType);
        }
        if !self.in_tilde_r(root) {
            return Err(Error::NotARoot);
        }
        self.reflect_vector(&root.to_vector())
    }

    /// Roots attached to the three affine generators.
    pub fn affine_generator_root(&self, g: WeylGen) -> Option<TildeRoot> {
        let inv = qf(1, self.a0() as i128);
        let base = -&self.theta_scaled();
        match g {
            WeylGen::S01 => Some(TildeRoot::new(base, inv, Q::zero())),
            WeylGen::S02 => Some(TildeRoot::new(base, inv, inv)),
            WeylGen::S03 => Some(TildeRoot::new(base, Q::zero(), inv)),
            WeylGen::S(i) => Some(TildeRoot::new(
                LatticeVector::simple(self.n, i),
                Q::zero(),
                Q::zero(),
            )),
            WeylGen::Tau => None,
        }
    }

    /// `x -> x + c(x,d2) d1 - c(x,d1) d2`.
    pub fn central_matrix(&self, c: Q) -> LinMap {
        let n = self.n;
        LinMap::from_fn(n, |x| {
            let mut y = x.clone();
            y.d1 += c * x.l2;
            y.d2 -= c * x.l1;
            y
        })
    }

    pub fn generator_matrix(&self, g: WeylGen) -> Result<LinMap> {
        if let WeylGen::S(i) = g {
            if i == 0 || i > self.n {
                return Err(Error::UnknownGenerator(g.to_string()));
            }
        }
        match self.affine_generator_root(g) {
            Some(root) => self.reflect_vector(&root.to_vector()),
            None => Ok(self.central_matrix(qf(1, self.a0() as i128))),
        }
    }

    pub fn generator_matrix_by_id(&self, id: &str) -> Result<LinMap> {
        self.generator_matrix(WeylGen::parse(id, self.n)?)
    }

    /// `lambda_mu` (kind `Lambda`, along `d1`) or `tau_beta` (kind `Tau`, along `d2`).
    pub fn translation_matrix(&self, kind: TranslationKind, v: &LatticeVector) -> Result<LinMap> {
        self.check_same(v)?;
        if !self.in_finite_lattice(&v.coords) {
            return Err(Error::NotInLattice);
        }
        Ok(self.translation_matrix_unchecked(kind, &v.coords))
    }

    pub(crate) fn translation_matrix_unchecked(&self, kind: TranslationKind, v: &[Q]) -> LinMap {
        let n = self.n;
        let half_norm = self.finite_form(v, v) / q(2);
        LinMap::from_fn(n, |x| {
            let xv = self.finite_form(&x.finite, v);
            let (xd, mut y) = match kind {
                TranslationKind::Lambda => (x.l1, x.clone()),
                TranslationKind::Tau => (x.l2, x.clone()),
            };
            for (yi, vi) in y.finite.iter_mut().zip(v) {
                *yi += xd * vi;
            }
            match kind {
                TranslationKind::Lambda => y.d1 += -xv - xd * half_norm,
                TranslationKind::Tau => y.d2 += -xv - xd * half_norm,
            }
            y
        })
    }

    /// Whether `m` preserves the form on `V`.
    pub fn preserves_form(&self, m: &LinMap) -> bool {
        let g = self.gram_v();
        m.0.transpose().matmul(&g).matmul(&m.0) == g
    }

    /// The swap `d1 <-> d2`, `L1 <-> L2`, identity on the finite part.
    pub fn duality_swap(&self) -> LinMap {
        LinMap::from_fn(self.n, |x| {
            let mut y = x.clone();
            std::mem::swap(&mut y.d1, &mut y.d2);
            std::mem::swap(&mut y.l1, &mut y.l2);
            y
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TranslationKind {
    Lambda,
    Tau,
}
