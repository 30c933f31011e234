//! The double affine Weyl group in normal form `w . lambda_mu . tau_beta . tau_{c delta}`,
//! its reflection representation, and the decode oracle that recovers a
//! normal form from a matrix.

use crate::error::{Error, Result};
use crate::geometry::{LinMap, TildeRoot, TranslationKind, VectorV, WeylGen};
use crate::linalg::{all_nonneg, all_nonpos, Matrix};
use crate::rational::{is_integer, q, qf, Q};
use crate::root_system::{AffineCartanData, LatticeVector};
use crate::word::Word;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Element of the finite Weyl group, stored as its matrix on simple-root coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FiniteWeylElement(pub Matrix);

impl FiniteWeylElement {
    pub fn identity(n: usize) -> Self {
        FiniteWeylElement(Matrix::identity(n))
    }

    pub fn rank(&self) -> usize {
        self.0.rows()
    }

    pub fn act(&self, v: &[Q]) -> Vec<Q> {
        self.0.apply(v)
    }

    pub fn mul(&self, o: &FiniteWeylElement) -> FiniteWeylElement {
        FiniteWeylElement(self.0.matmul(&o.0))
    }

    /// Exact inverse; Weyl group matrices are always invertible.
    pub fn inverse(&self) -> FiniteWeylElement {
        FiniteWeylElement(self.0.inverse().expect("Weyl group element is invertible"))
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    pub fn is_minus_one(&self) -> bool {
        let n = self.rank();
        (0..n)
            .all(|i| (0..n).all(|j| self.0.get(i, j) == if i == j { -Q::one() } else { Q::zero() }))
    }
}

impl fmt::Debug for FiniteWeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

mod serde_lattice {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        v: &LatticeVector,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        crate::rational::serde_qvec::serialize(&v.coords, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<LatticeVector, D::Error> {
        Ok(LatticeVector::finite(
            crate::rational::serde_qvec::deserialize(d)?,
        ))
    }
}

/// Normal form `(w, mu, beta, c)` of `w . lambda_mu . tau_beta . tau_{c delta}`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DAWElement {
    pub w: FiniteWeylElement,
    #[serde(with = "serde_lattice")]
    pub mu: LatticeVector,
    #[serde(with = "serde_lattice")]
    pub beta: LatticeVector,
    #[serde(with = "crate::rational::serde_q")]
    pub c: Q,
}

impl DAWElement {
    pub fn identity(n: usize) -> Self {
        DAWElement {
            w: FiniteWeylElement::identity(n),
            mu: LatticeVector::zero(n),
            beta: LatticeVector::zero(n),
            c: Q::zero(),
        }
    }

    pub fn rank(&self) -> usize {
        self.w.rank()
    }

    pub fn is_identity(&self) -> bool {
        self.w.is_identity() && self.mu.is_zero() && self.beta.is_zero() && self.c.is_zero()
    }

    /// In the affine subgroup generated by `s_0, ..., s_n` (no `tau` part).
    pub fn is_affine(&self) -> bool {
        self.beta.is_zero() && self.c.is_zero()
    }
}

impl fmt::Debug for DAWElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(w={:?}, mu={}, beta={}, c={})",
            self.w,
            self.mu,
            self.beta,
            crate::rational::format_q(&self.c)
        )
    }
}

/// A vector `x + a delta + b Lambda_0` in the affine space used by the level actions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelVector {
    pub finite: Vec<Q>,
    pub delta: Q,
    pub lambda0: Q,
}

impl LevelVector {
    /// Embedding `delta -> d1`, `Lambda_0 -> L1`.
    pub fn embed(&self) -> VectorV {
        let mut v = VectorV::from_finite(&self.finite);
        v.d1 = self.delta;
        v.l1 = self.lambda0;
        v
    }
}

/// Abstract group model used by the conformance engine.
pub trait GroupModel {
    type Elem: Clone + PartialEq + fmt::Debug;
    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn is_identity(&self, a: &Self::Elem) -> bool {
        *a == self.identity()
    }
}

/// The double affine Weyl group of one type, with cached generator data.
#[derive(Debug, Clone)]
pub struct DoubleAffineWeyl {
    pub data: AffineCartanData,
    simple: Vec<FiniteWeylElement>,
    s_theta: FiniteWeylElement,
    theta_word: Vec<usize>,
}

impl DoubleAffineWeyl {
    pub fn new(data: AffineCartanData) -> Self {
        let simple = (1..=data.n)
            .map(|i| FiniteWeylElement(data.simple_reflection_matrix(i)))
            .collect();
        let mut g = DoubleAffineWeyl {
            data,
            simple,
            s_theta: FiniteWeylElement::identity(0),
            theta_word: Vec::new(),
        };
        g.s_theta = g.finite_reflection(&g.data.theta().coords);
        g.theta_word = g.reduced_word(&g.s_theta);
        g
    }

    pub fn rank(&self) -> usize {
        self.data.n
    }

    pub fn simple_reflection(&self, i: usize) -> &FiniteWeylElement {
        &self.simple[i - 1]
    }

    /// Reflection of the finite span in a finite root.
    pub fn finite_reflection(&self, root: &[Q]) -> FiniteWeylElement {
        let rr = self.data.finite_form(root, root);
        let n = self.rank();
        FiniteWeylElement(Matrix::from_columns_fn(n, |j| {
            let mut e = vec![Q::zero(); n];
            e[j] = Q::one();
            let k = q(2) * self.data.finite_form(&e, root) / rr;
            e.iter().zip(root).map(|(x, r)| x - k * r).collect()
        }))
    }

    pub fn s_theta(&self) -> &FiniteWeylElement {
        &self.s_theta
    }

    /// The fixed reduced decomposition of `s_theta` (lexicographically least).
    pub fn s_theta_word(&self) -> &[usize] {
        &self.theta_word
    }

    fn is_negative(v: &[Q]) -> bool {
        all_nonpos(v) && v.iter().any(|x| !x.is_zero())
    }

    /// Greedy reduced word: repeatedly strips the smallest left descent.
    pub fn reduced_word(&self, w: &FiniteWeylElement) -> Vec<usize> {
        let mut cur = w.clone();
        let mut out = Vec::new();
        let bound = self.data.positive_roots().count();
        while !cur.is_identity() {
            let inv = cur.inverse();
            let i = (1..=self.rank())
                .find(|&i| {
                    Self::is_negative(&inv.act(&LatticeVector::simple(self.rank(), i).coords))
                })
                .expect("non-identity Weyl element has a descent");
            out.push(i);
            cur = self.simple_reflection(i).mul(&cur);
            assert!(
                out.len() <= bound,
                "reduced word longer than the number of positive roots"
            );
        }
        out
    }

    pub fn word_to_finite(&self, word: &[usize]) -> FiniteWeylElement {
        word.iter()
            .fold(FiniteWeylElement::identity(self.rank()), |acc, &i| {
                acc.mul(self.simple_reflection(i))
            })
    }

    /// Longest element, built by right multiplication with the smallest
    /// simple reflection that increases length.
    pub fn longest_element(&self) -> (FiniteWeylElement, Vec<usize>) {
        let n = self.rank();
        let mut w = FiniteWeylElement::identity(n);
        let mut word = Vec::new();
        while let Some(i) =
            (1..=n).find(|&i| all_nonneg(&w.act(&LatticeVector::simple(n, i).coords)))
        {
            w = w.mul(self.simple_reflection(i));
            word.push(i);
        }
        (w, word)
    }

    /// Membership of a finite-span matrix in the finite Weyl group, by descent.
    pub fn is_finite_weyl(&self, m: &Matrix) -> bool {
        let n = self.rank();
        if m.rows() != n || m.cols() != n {
            return false;
        }
        let bound = self.data.positive_roots().count();
        let mut cur = m.clone();
        for _ in 0..=bound {
            if cur.is_identity() {
                return true;
            }
            let Some(i) = (1..=n).find(|&i| Self::is_negative(&cur.column(i - 1))) else {
                return false;
            };
            cur = cur.matmul(&self.simple_reflection(i).0);
        }
        false
    }

    fn check(&self, g: &DAWElement) -> Result<()> {
        if g.rank() == self.rank() && g.mu.rank() == self.rank() && g.beta.rank() == self.rank() {
            Ok(())
        } else {
            Err(Error::MismatchedType)
        }
    }

    pub fn identity(&self) -> DAWElement {
        DAWElement::identity(self.rank())
    }

    pub fn multiply(&self, g1: &DAWElement, g2: &DAWElement) -> Result<DAWElement> {
        self.check(g1)?;
        self.check(g2)?;
        Ok(self.mul_unchecked(g1, g2))
    }

    fn mul_unchecked(&self, g1: &DAWElement, g2: &DAWElement) -> DAWElement {
        let w2inv = g2.w.inverse();
        let mu1 = w2inv.act(&g1.mu.coords);
        let beta1 = w2inv.act(&g1.beta.coords);
        let cross = self.data.finite_form(&beta1, &g2.mu.coords);
        let add = |a: &[Q], b: &[Q]| a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>();
        DAWElement {
            w: g1.w.mul(&g2.w),
            mu: LatticeVector::finite(add(&mu1, &g2.mu.coords)),
            beta: LatticeVector::finite(add(&beta1, &g2.beta.coords)),
            c: g1.c + g2.c + cross,
        }
    }

    pub fn inverse(&self, g: &DAWElement) -> DAWElement {
        let neg = |v: Vec<Q>| LatticeVector::finite(v.into_iter().map(|x| -x).collect());
        DAWElement {
            w: g.w.inverse(),
            mu: neg(g.w.act(&g.mu.coords)),
            beta: neg(g.w.act(&g.beta.coords)),
            c: -g.c + self.data.finite_form(&g.beta.coords, &g.mu.coords),
        }
    }

    pub fn finite(&self, w: FiniteWeylElement) -> DAWElement {
        DAWElement {
            w,
            ..self.identity()
        }
    }

    /// `lambda_mu`.
    pub fn lambda(&self, mu: &LatticeVector) -> DAWElement {
        DAWElement {
            mu: mu.finite_part(),
            ..self.identity()
        }
    }

    /// `tau_beta`.
    pub fn tau(&self, beta: &LatticeVector) -> DAWElement {
        DAWElement {
            beta: beta.finite_part(),
            ..self.identity()
        }
    }

    /// `tau_{c delta}`.
    pub fn central(&self, c: Q) -> DAWElement {
        DAWElement {
            c,
            ..self.identity()
        }
    }

    fn a0_inv(&self) -> Q {
        qf(1, self.data.a0() as i128)
    }

    pub fn from_generator(&self, g: WeylGen) -> Result<DAWElement> {
        let neg_theta = -&self.data.theta_scaled();
        let st = self.s_theta.clone();
        Ok(match g {
            WeylGen::S(i) if (1..=self.rank()).contains(&i) => {
                self.finite(self.simple_reflection(i).clone())
            }
            WeylGen::S(_) => return Err(Error::UnknownGenerator(g.to_string())),
            WeylGen::S01 => DAWElement {
                w: st,
                mu: neg_theta,
                ..self.identity()
            },
            WeylGen::S03 => DAWElement {
                w: st,
                beta: neg_theta,
                ..self.identity()
            },
            WeylGen::S02 => DAWElement {
                w: st,
                mu: neg_theta.clone(),
                beta: neg_theta,
                c: self.a0_inv(),
            },
            WeylGen::Tau => self.central(self.a0_inv()),
        })
    }

    pub fn from_generator_id(&self, id: &str) -> Result<DAWElement> {
        self.from_generator(WeylGen::parse(id, self.rank())?)
    }

    /// Evaluates a word over `s1..sn, s01, s02, s03, tau`.
    pub fn word_eval(&self, word: &Word) -> Result<DAWElement> {
        let mut acc = self.identity();
        for l in word.letters() {
            let g = self.from_generator_id(&l.gen)?;
            let g = if l.exp == 1 { g } else { self.inverse(&g) };
            acc = self.mul_unchecked(&acc, &g);
        }
        Ok(acc)
    }

    /// Matrix of `g` on `V`.
    pub fn rho(&self, g: &DAWElement) -> LinMap {
        let n = self.rank();
        let mut w = Matrix::identity(n + 4);
        for i in 0..n {
            for j in 0..n {
                w.set(i, j, g.w.0.get(i, j));
            }
        }
        let l = self
            .data
            .translation_matrix_unchecked(TranslationKind::Lambda, &g.mu.coords);
        let t = self
            .data
            .translation_matrix_unchecked(TranslationKind::Tau, &g.beta.coords);
        let c = self.data.central_matrix(g.c);
        LinMap(w).compose(&l).compose(&t).compose(&c)
    }

    /// Recovers the normal form of a matrix in the image of `rho`.
    pub fn decode(&self, m: &LinMap) -> Result<DAWElement> {
        let n = self.rank();
        let not_in = |why: &str| Error::NotInGroup(why.to_string());
        if m.0.rows() != n + 4 || m.0.cols() != n + 4 {
            return Err(Error::MismatchedType);
        }
        let block = Matrix::from_rows(
            (0..n)
                .map(|i| (0..n).map(|j| m.0.get(i, j)).collect())
                .collect(),
        );
        if !self.is_finite_weyl(&block) {
            return Err(not_in("finite block is not in the finite Weyl group"));
        }
        let w = FiniteWeylElement(block);
        let winv = w.inverse();
        let l1 = m.0.column(n + 2);
        let l2 = m.0.column(n + 3);
        let mu = winv.act(&l1[..n]);
        let beta = winv.act(&l2[..n]);
        let c = -l1[n + 1];
        if !self.data.in_finite_lattice(&mu) || !self.data.in_finite_lattice(&beta) {
            return Err(not_in("translation part is outside the lattice"));
        }
        if !is_integer(&(c * q(self.data.a0() as i128))) {
            return Err(not_in(
                "central part is not a multiple of the central generator",
            ));
        }
        let g = DAWElement {
            w,
            mu: LatticeVector::finite(mu),
            beta: LatticeVector::finite(beta),
            c,
        };
        if self.rho(&g) != *m {
            return Err(not_in("matrix differs from the reconstructed element"));
        }
        Ok(g)
    }

    /// Action of an element of the affine subgroup on `h* + R delta + R Lambda_0`.
    pub fn level_action(&self, g: &DAWElement, x: &LevelVector) -> Result<LevelVector> {
        self.check(g)?;
        if !g.is_affine() {
            return Err(Error::NotAffine);
        }
        let y = self.lambda_level(&g.mu.coords, x);
        Ok(LevelVector {
            finite: g.w.act(&y.finite),
            ..y
        })
    }

    /// `lambda_mu<x> = x - (x,mu) delta + (x,delta)(mu - |mu|^2/2 delta)`, where
    /// `(x, delta)` is the `Lambda_0` coefficient.
    pub fn lambda_level(&self, mu: &[Q], x: &LevelVector) -> LevelVector {
        let xm = self.data.finite_form(&x.finite, mu);
        let lvl = x.lambda0;
        let norm = self.data.finite_form(mu, mu);
        LevelVector {
            finite: x.finite.iter().zip(mu).map(|(a, b)| a + lvl * b).collect(),
            delta: x.delta - xm - lvl * norm / q(2),
            lambda0: x.lambda0,
        }
    }

    /// `s_0<x> = s_theta(x) + (x,theta) a_0^{-1} delta - (x,delta) alpha_0`.
    pub fn s0_level(&self, x: &LevelVector) -> LevelVector {
        let theta = self.data.theta().coords;
        let xt = self.data.finite_form(&x.finite, &theta);
        let a0 = self.a0_inv();
        let lvl = x.lambda0;
        let st = self.s_theta.act(&x.finite);
        LevelVector {
            finite: st
                .iter()
                .zip(&theta)
                .map(|(s, t)| s + lvl * a0 * t)
                .collect(),
            delta: x.delta + xt * a0 - lvl * a0,
            lambda0: x.lambda0,
        }
    }

    /// Representative in the quotient by `<tau_{a_0^{-1} delta}>`: `c` is reduced into `[0, a_0^{-1})`.
    pub fn elliptic_project(&self, g: &DAWElement) -> DAWElement {
        let step = self.a0_inv();
        let k = (g.c / step).floor();
        let r = g.c - k * step;
        debug_assert!(r >= Q::zero() && r < step);
        DAWElement { c: r, ..g.clone() }
    }

    /// Element realising the reflection in a double affine root.
    pub fn reflection_element(&self, root: &TildeRoot) -> Result<DAWElement> {
        let m = self.data.reflect(root)?;
        self.decode(&m)
    }

    /// Random word of length `len` over the order-two generators (and `tau^{+-1}`).
    pub fn random_word<R: Rng>(&self, rng: &mut R, len: usize) -> Word {
        let gens = WeylGen::all(self.rank());
        let mut letters = Vec::with_capacity(len);
        for _ in 0..len {
            let g = gens[rng.gen_range(0..gens.len())];
            let exp = if g == WeylGen::Tau && rng.gen_bool(0.5) {
                -1
            } else {
                1
            };
            letters.push(crate::word::Letter::new(g.to_string(), exp));
        }
        Word(letters)
    }

    /// Random finite Weyl element as a product of `len` simple reflections.
    pub fn random_finite<R: Rng>(&self, rng: &mut R, len: usize) -> FiniteWeylElement {
        let word: Vec<usize> = (0..len).map(|_| rng.gen_range(1..=self.rank())).collect();
        self.word_to_finite(&word)
    }

    /// Random lattice vector with small coefficients over the lattice basis.
    pub fn random_lattice<R: Rng>(&self, rng: &mut R, bound: i64) -> LatticeVector {
        let basis = self.data.lattice_basis();
        let mut v = vec![Q::zero(); self.rank()];
        for b in &basis {
            let k = q(rng.gen_range(-bound..=bound) as i128);
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi += k * bi;
            }
        }
        LatticeVector::finite(v)
    }

    /// Random element with all four components populated.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> DAWElement {
        let w = self.random_finite(rng, 6);
        let k: i128 = rng.gen_range(-3..=3);
        DAWElement {
            w,
            mu: self.random_lattice(rng, 2),
            beta: self.random_lattice(rng, 2),
            c: q(k) * self.a0_inv(),
        }
    }

    /// Expresses an element as a word in the order-two generators.
    ///
    /// Uses `lambda_{-theta'} = s_theta s01`, `tau_{theta'} = s03 s_theta` and
    /// conjugation by the finite Weyl group to reach every lattice vector
    /// that is a sum of `W`-images of `theta'`.
    pub fn to_word(&self, g: &DAWElement) -> Result<Word> {
        let n = self.rank();
        let mut out = Word::empty();
        let fin = |w: &[usize]| {
            Word(
                w.iter()
                    .map(|i| crate::word::Letter::new(format!("s{i}"), 1))
                    .collect(),
            )
        };
        let st = fin(&self.theta_word);
        let lam_neg = st.concat(&Word::gen("s01"));
        let tau_pos = Word::gen("s03").concat(&st);
        let (orbit, words) = self.theta_orbit();
        out = out.concat(&fin(&self.reduced_word(&g.w)));
        for (kind, v) in [(0, &g.mu), (1, &g.beta)] {
            let coeffs = self.decompose_in_orbit(&v.coords, &orbit)?;
            for (idx, k) in coeffs.into_iter().enumerate() {
                if k == 0 {
                    continue;
                }
                // translation by u(theta') equals u . t_{theta'} . u^{-1}
                let u = fin(&words[idx]);
                let base = if kind == 0 {
                    lam_neg.inverse()
                } else {
                    tau_pos.clone()
                };
                let piece = u.concat(&base.pow(k as i64)).concat(&u.inverse());
                out = out.concat(&piece);
            }
        }
        let partial = self.word_eval(&out)?;
        let dc = g.c - partial.c;
        let steps = dc / self.a0_inv();
        if !steps.is_integer() || partial.w != g.w || partial.mu != g.mu || partial.beta != g.beta {
            return Err(Error::NotInGroup(format!(
                "cannot express element of rank {n} as a word"
            )));
        }
        out = out.concat(&Word::gen("tau").pow(steps.to_integer() as i64));
        Ok(out.free_reduce())
    }

    /// The finite Weyl orbit of `theta'` with a word for each orbit element.
    fn theta_orbit(&self) -> (Vec<Vec<Q>>, Vec<Vec<usize>>) {
        let start = self.data.theta_scaled().coords;
        let mut orbit = vec![start];
        let mut words: Vec<Vec<usize>> = vec![vec![]];
        let mut i = 0;
        while i < orbit.len() {
            for s in 1..=self.rank() {
                let img = self.data.simple_reflect(s, &orbit[i]);
                if !orbit.contains(&img) {
                    let mut w = vec![s];
                    w.extend(&words[i]);
                    orbit.push(img);
                    words.push(w);
                }
            }
            i += 1;
        }
        (orbit, words)
    }

    /// Integer coefficients of `v` over an orbit that spans the lattice:
    /// first a lattice basis drawn from the orbit, then solve exactly.
    fn decompose_in_orbit(&self, v: &[Q], orbit: &[Vec<Q>]) -> Result<Vec<i128>> {
        let n = self.rank();
        let mut out = vec![0i128; orbit.len()];
        if v.iter().all(Zero::is_zero) {
            return Ok(out);
        }
        // Greedily pick orbit elements forming a unimodular basis of the lattice.
        let target = self.data.lattice_basis();
        let tb = Matrix::from_rows(
            (0..n)
                .map(|i| target.iter().map(|b| b[i]).collect())
                .collect(),
        );
        let tinv = tb.inverse().expect("lattice basis is invertible");
        // Prefer the basis vectors themselves (or their negatives) when the orbit has them.
        let direct: Vec<usize> = target
            .iter()
            .filter_map(|b| {
                let neg: Vec<Q> = b.iter().map(|x| -x).collect();
                orbit.iter().position(|o| o == b || *o == neg)
            })
            .collect();
        let mut chosen: Vec<usize> = if direct.len() == n {
            direct
        } else {
            Vec::new()
        };
        for (idx, o) in orbit.iter().enumerate() {
            if chosen.len() == n {
                break;
            }
            let mut cols: Vec<Vec<Q>> = chosen.iter().map(|&c| orbit[c].clone()).collect();
            cols.push(o.clone());
            if rank_of(&cols) == cols.len() {
                chosen.push(idx);
            }
        }
        let cb = Matrix::from_rows(
            (0..n)
                .map(|i| chosen.iter().map(|&c| orbit[c][i]).collect())
                .collect(),
        );
        let change = tinv.matmul(&cb);
        let det_ok = change
            .inverse()
            .is_some_and(|inv| (0..n).all(|i| (0..n).all(|j| inv.get(i, j).is_integer())));
        if !det_ok {
            return Err(Error::NotInGroup(
                "orbit of theta' does not give a lattice basis".into(),
            ));
        }
        let coeffs = cb.inverse().unwrap().apply(v);
        for (k, &c) in coeffs.iter().zip(&chosen) {
            if !k.is_integer() {
                return Err(Error::NotInLattice);
            }
            out[c] = k.to_integer();
        }
        Ok(out)
    }
}

fn rank_of(cols: &[Vec<Q>]) -> usize {
    if cols.is_empty() {
        return 0;
    }
    let m = Matrix::from_rows(cols.to_vec());
    cols.len() - m.transpose().kernel().len()
}

impl GroupModel for DoubleAffineWeyl {
    type Elem = DAWElement;
    fn identity(&self) -> DAWElement {
        DoubleAffineWeyl::identity(self)
    }
    fn mul(&self, a: &DAWElement, b: &DAWElement) -> DAWElement {
        self.mul_unchecked(a, b)
    }
    fn inv(&self, a: &DAWElement) -> DAWElement {
        self.inverse(a)
    }
    fn is_identity(&self, a: &DAWElement) -> bool {
        a.is_identity()
    }
}

/// `GL(V)` as a group model, for checks through `rho`.
#[derive(Debug, Clone, Copy)]
pub struct MatrixModel {
    pub n: usize,
}

impl GroupModel for MatrixModel {
    type Elem = LinMap;
    fn identity(&self) -> LinMap {
        LinMap::identity(self.n)
    }
    fn mul(&self, a: &LinMap, b: &LinMap) -> LinMap {
        a.compose(b)
    }
    fn inv(&self, a: &LinMap) -> LinMap {
        a.inverse().expect("group elements are invertible")
    }
    fn is_identity(&self, a: &LinMap) -> bool {
        a.is_identity()
    }
}

/// Integer `k` with `c = k / a_0` (panics if `c` is not such a multiple).
pub fn central_exponent(c: Q, a0: i64) -> i128 {
    let k = c * q(a0 as i128);
    assert!(k.is_integer());
    k.to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_system::load_catalog;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn group(id: &str) -> DoubleAffineWeyl {
        DoubleAffineWeyl::new(load_catalog(id).unwrap())
    }

    #[test]
    fn commutator_of_translations() {
        let g = group("A2~1");
        let a1 = LatticeVector::simple(2, 1);
        let l = g.lambda(&a1);
        let t = g.tau(&a1);
        let prod = [l.clone(), t.clone(), g.inverse(&l), g.inverse(&t)]
            .iter()
            .fold(g.identity(), |acc, x| g.multiply(&acc, x).unwrap());
        assert_eq!(prod, g.central(q(-2)));
    }

    #[test]
    fn generator_normal_forms() {
        let g = group("A2~1");
        let s02 = g.from_generator(WeylGen::S02).unwrap();
        assert_eq!(s02.mu, LatticeVector::from_ints(&[-1, -1]));
        assert_eq!(s02.beta, LatticeVector::from_ints(&[-1, -1]));
        assert_eq!(s02.c, q(1));
        assert_eq!(g.s_theta_word(), &[1, 2, 1]);
    }

    #[test]
    fn rho_matches_generator_matrices() {
        for id in ["A2~1", "A3~1", "D4~1", "A2~2", "A4~2", "E6~1"] {
            let g = group(id);
            for gen in WeylGen::all(g.rank()) {
                let e = g.from_generator(gen).unwrap();
                assert_eq!(
                    g.rho(&e),
                    g.data.generator_matrix(gen).unwrap(),
                    "{id} {gen}"
                );
            }
        }
        let g = DoubleAffineWeyl::new(crate::root_system::load_catalog_gated("D4~2").unwrap());
        for gen in WeylGen::all(g.rank()) {
            let e = g.from_generator(gen).unwrap();
            assert_eq!(g.rho(&e), g.data.generator_matrix(gen).unwrap());
        }
    }

    #[test]
    fn tau_word_is_central_translation() {
        for id in ["A2~1", "A4~2", "A2~2", "D4~1"] {
            let g = group(id);
            let st: String = g.s_theta_word().iter().map(|i| format!(" s{i}")).collect();
            let w = Word::parse(&format!("s01 s02 s03{st}")).unwrap();
            let e = g.word_eval(&w).unwrap();
            assert_eq!(e, g.central(qf(1, g.data.a0() as i128)), "{id}");
        }
    }

    #[test]
    fn longest_element_a2() {
        let g = group("A2~1");
        let (w0, word) = g.longest_element();
        assert_eq!(word, vec![1, 2, 1]);
        assert!(!w0.is_minus_one());
        assert!(w0.mul(&w0).is_identity());
        let g = group("A2~2");
        let (w0, word) = g.longest_element();
        assert_eq!(word, vec![1]);
        assert!(w0.is_minus_one());
    }

    #[test]
    fn s_theta_decompositions_agree() {
        let g = group("A3~1");
        assert_eq!(g.word_to_finite(&[1, 2, 3, 2, 1]), *g.s_theta());
        assert_eq!(g.word_to_finite(&[3, 2, 1, 2, 3]), *g.s_theta());
    }

    #[test]
    fn decode_and_words_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for id in ["A2~1", "A4~2", "A2~2"] {
            let g = group(id);
            for _ in 0..30 {
                let e = g.random_element(&mut rng);
                assert_eq!(g.decode(&g.rho(&e)).unwrap(), e);
                let w = g.to_word(&e).unwrap();
                assert_eq!(g.word_eval(&w).unwrap(), e, "{id} {w}");
            }
        }
    }

    #[test]
    fn decode_rejects_non_members() {
        let g = group("A2~1");
        let m = g
            .data
            .reflect_vector(
                &VectorV::from_finite(&[q(1), q(0)]).add(&VectorV::delta1(2).scale(qf(1, 2))),
            )
            .unwrap();
        assert!(matches!(g.decode(&m), Err(Error::NotInGroup(_))));
        let mut bad = LinMap::identity(2);
        bad.0.set(0, 0, q(2));
        assert!(matches!(g.decode(&bad), Err(Error::NotInGroup(_))));
    }

    #[test]
    fn level_action_s0() {
        let g = group("A4~2");
        let s01 = g.from_generator(WeylGen::S01).unwrap();
        let n = g.rank();
        for k in 0..n + 2 {
            let mut finite = vec![Q::zero(); n];
            let (mut delta, mut lambda0) = (Q::zero(), Q::zero());
            if k < n {
                finite[k] = Q::one();
            } else if k == n {
                delta = Q::one();
            } else {
                lambda0 = Q::one();
            }
            let x = LevelVector {
                finite,
                delta,
                lambda0,
            };
            let y = g.level_action(&s01, &x).unwrap();
            assert_eq!(y, g.s0_level(&x));
            assert_eq!(y.embed(), g.rho(&s01).apply(&x.embed()));
        }
    }
}
