//! The braid group `B3` acting on the triple group, its descent to the
//! double affine Weyl group through `SL(2, Z)`, and the duality involution.
//!
//! `SL(2, Z)` acts on the coefficients of `Z d1 + Z d2` through
//! `L(u) = e u e` (`e` the swap matrix). This is the homomorphic action for
//! which `upsilon(pi(a))` and `upsilon(pi(b))` agree with the generator
//! images of `a` and `b`.

use crate::error::{Error, Result};
use crate::geometry::{LinMap, TildeRoot};
use crate::linalg::Matrix;
use crate::presentations::{eval_word, weyl_assignment, weyl_image, Presentation, WordMap};
use crate::rational::{q, Q};

use crate::report::{Check, Report, Status};
use crate::weyl::{DAWElement, DoubleAffineWeyl};
use crate::word::{Letter, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Generator images, possibly order-reversing.
pub type EndoSpec = WordMap;

/// Images of the double affine Weyl generators `s1..sn, s01, s02, s03`.
pub type WeylAuto = BTreeMap<String, DAWElement>;

pub const DEFAULT_SEED: u64 = 0xDA57;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SL2ZMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl SL2ZMatrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let m = SL2ZMatrix { a, b, c, d };
        if m.det() != 1 {
            return Err(Error::Parse(format!(
                "determinant of {m} is {}, not 1",
                m.det()
            )));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        SL2ZMatrix {
            a: 1,
            b: 0,
            c: 0,
            d: 1,
        }
    }

    /// `u12 = [[1,1],[0,1]]`.
    pub fn u12() -> Self {
        SL2ZMatrix {
            a: 1,
            b: 1,
            c: 0,
            d: 1,
        }
    }

    /// `u21 = [[1,0],[-1,1]]`.
    pub fn u21() -> Self {
        SL2ZMatrix {
            a: 1,
            b: 0,
            c: -1,
            d: 1,
        }
    }

    /// The swap `[[0,1],[1,0]]`, of determinant `-1`.
    pub fn swap() -> Self {
        SL2ZMatrix {
            a: 0,
            b: 1,
            c: 1,
            d: 0,
        }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &SL2ZMatrix) -> SL2ZMatrix {
        SL2ZMatrix {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> SL2ZMatrix {
        let k = self.det();
        SL2ZMatrix {
            a: k * self.d,
            b: -k * self.b,
            c: -k * self.c,
            d: k * self.a,
        }
    }

    pub fn pow(&self, k: u32) -> SL2ZMatrix {
        (0..k).fold(Self::identity(), |acc, _| acc.mul(self))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Coefficients `(m', n')` of `L(u)(m d1 + n d2)`, with `L(u) = e u e`.
    pub fn act_on_deltas(&self, m: Q, n: Q) -> (Q, Q) {
        let l = Self::swap().mul(self).mul(&Self::swap());
        (
            q(l.a as i128) * m + q(l.b as i128) * n,
            q(l.c as i128) * m + q(l.d as i128) * n,
        )
    }
}

impl fmt::Display for SL2ZMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

/// A word in `a`, `b` and their inverses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct B3Word(pub Word);

impl B3Word {
    pub fn parse(s: &str) -> Result<Self> {
        let w = Word::parse(s)?;
        if let Some(l) = w.letters().iter().find(|l| l.gen != "a" && l.gen != "b") {
            return Err(Error::UnknownGenerator(l.gen.clone()));
        }
        Ok(B3Word(w))
    }

    /// The central element `c = (aba)^2`.
    pub fn center() -> Self {
        B3Word::parse("(a b a)^2").unwrap()
    }

    pub fn pow(&self, k: i64) -> Self {
        B3Word(self.0.pow(k))
    }

    pub fn random<R: Rng>(rng: &mut R, max_len: usize) -> Self {
        let len = rng.gen_range(0..=max_len);
        B3Word(Word(
            (0..len)
                .map(|_| {
                    Letter::new(
                        if rng.gen_bool(0.5) { "a" } else { "b" },
                        if rng.gen_bool(0.5) { 1 } else { -1 },
                    )
                })
                .collect(),
        ))
    }
}

impl fmt::Display for B3Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum B3Letter {
    A,
    B,
    /// The anti-involution exchanging `T01` and `T03`.
    E,
}

fn finite_identity(n: usize, prefix: &str) -> Vec<(String, Word)> {
    (1..=n)
        .map(|i| (format!("{prefix}{i}"), Word::gen(&format!("{prefix}{i}"))))
        .collect()
}

fn spec(n: usize, affine: &[(&str, &str)], anti: bool) -> EndoSpec {
    let mut images: BTreeMap<String, Word> = finite_identity(n, "T").into_iter().collect();
    for (g, w) in affine {
        images.insert(g.to_string(), Word::parse(w).expect("static word"));
    }
    WordMap { images, anti }
}

/// Generator images of `a`, `b` and `e` on the triple group of rank `n`.
pub fn b3_action(letter: B3Letter, n: usize) -> EndoSpec {
    match letter {
        B3Letter::A => spec(
            n,
            &[("T01", "T02"), ("T02", "T02^-1 T01 T02"), ("T03", "T03")],
            false,
        ),
        B3Letter::B => spec(
            n,
            &[("T01", "T01"), ("T02", "T03"), ("T03", "T03^-1 T02 T03")],
            false,
        ),
        B3Letter::E => spec(n, &[("T01", "T03"), ("T02", "T02"), ("T03", "T01")], true),
    }
}

/// Inverses of `a` and `b` as generator images.
pub fn b3_inverse_action(letter: B3Letter, n: usize) -> EndoSpec {
    match letter {
        B3Letter::A => spec(
            n,
            &[("T01", "T01 T02 T01^-1"), ("T02", "T01"), ("T03", "T03")],
            false,
        ),
        B3Letter::B => spec(
            n,
            &[("T01", "T01"), ("T02", "T02 T03 T02^-1"), ("T03", "T02")],
            false,
        ),
        B3Letter::E => b3_action(B3Letter::E, n),
    }
}

fn letter_action(l: &Letter, n: usize) -> EndoSpec {
    let b = if l.gen == "a" {
        B3Letter::A
    } else {
        B3Letter::B
    };
    if l.exp == 1 {
        b3_action(b, n)
    } else {
        b3_inverse_action(b, n)
    }
}

/// `Upsilon(w)` as a word map (composite of the letter actions; words grow
/// quickly, so this is meant for short `w`).
pub fn b3_word_action(w: &B3Word, n: usize) -> Result<EndoSpec> {
    let gens: Vec<String> = triple_generators(n);
    let mut acc = WordMap::identity(&gens);
    for l in w.0.letters() {
        acc = acc.compose(&letter_action(l, n))?;
    }
    Ok(acc)
}

fn triple_generators(n: usize) -> Vec<String> {
    let mut g: Vec<String> = (1..=n).map(|i| format!("T{i}")).collect();
    g.extend(["T01", "T02", "T03"].map(String::from));
    g
}

pub fn pi(w: &B3Word) -> SL2ZMatrix {
    w.0.letters().iter().fold(SL2ZMatrix::identity(), |acc, l| {
        let u = if l.gen == "a" {
            SL2ZMatrix::u12()
        } else {
            SL2ZMatrix::u21()
        };
        acc.mul(&if l.exp == 1 { u } else { u.inverse() })
    })
}

/// Renames triple-group letters to double affine Weyl letters (`T0k -> s0k`, `Ti -> si`).
pub fn to_weyl_letters(w: &Word) -> Word {
    Word(
        w.letters()
            .iter()
            .map(|l| Letter::new(format!("s{}", &l.gen[1..]), l.exp))
            .collect(),
    )
}

/// `Upsilon(w)` at the Weyl level, keyed by `s1..sn, s01, s02, s03`.
///
/// Built letter by letter: `F_k(g) = F_{k-1}(Upsilon(x_k)(g))`, evaluating
/// the short image words through the previous images.
pub fn b3_weyl_action(group: &DoubleAffineWeyl, w: &B3Word) -> Result<WeylAuto> {
    let n = group.rank();
    let gens = triple_generators(n);
    let mut current: BTreeMap<String, DAWElement> = gens
        .iter()
        .map(|g| Ok((g.clone(), weyl_image(group, g)?)))
        .collect::<Result<_>>()?;
    for l in w.0.letters() {
        let step = letter_action(l, n);
        let mut next = BTreeMap::new();
        for g in &gens {
            next.insert(g.clone(), eval_word(group, &current, &step.images[g])?);
        }
        current = next;
    }
    Ok(current
        .into_iter()
        .map(|(g, e)| (format!("s{}", &g[1..]), e))
        .collect())
}

fn weyl_generators(n: usize) -> Vec<String> {
    let mut g: Vec<String> = (1..=n).map(|i| format!("s{i}")).collect();
    g.extend(["s01", "s02", "s03"].map(String::from));
    g
}

/// `upsilon(u)`: `s_{a0^-1(x - theta)} -> s_{a0^-1(L(u)x - theta)}` for
/// `x` in `{d1, d2, d1 + d2}`, fixing the finite generators.
pub fn sl2z_weyl_auto(group: &DoubleAffineWeyl, u: &SL2ZMatrix) -> Result<WeylAuto> {
    if u.det().abs() != 1 {
        return Err(Error::Parse(format!("{u} is not invertible over Z")));
    }
    let data = &group.data;
    let inv = crate::rational::qf(1, data.a0() as i128);
    let base = -&data.theta_scaled();
    let mut out = WeylAuto::new();
    for i in 1..=group.rank() {
        out.insert(format!("s{i}"), group.from_generator_id(&format!("s{i}"))?);
    }
    for (g, (m, n)) in [("s01", (1, 0)), ("s02", (1, 1)), ("s03", (0, 1))] {
        let (m2, n2) = u.act_on_deltas(q(m), q(n));
        let root = TildeRoot::new(base.clone(), m2 * inv, n2 * inv);
        out.insert(g.to_string(), group.reflection_element(&root)?);
    }
    Ok(out)
}

/// The isometry of `V` behind `upsilon(u)`: `L(u)` on the `d`-plane, its
/// inverse transpose on the `L`-plane, identity on the finite part.
pub fn sl2z_matrix(group: &DoubleAffineWeyl, u: &SL2ZMatrix) -> LinMap {
    let n = group.rank();
    let l = SL2ZMatrix::swap().mul(u).mul(&SL2ZMatrix::swap());
    let li = l.inverse();
    let k = |x: i64| q(x as i128);
    let mut m = Matrix::identity(n + 4);
    // columns are images of basis vectors d1, d2, L1, L2 at indices n..n+4
    m.set(n, n, k(l.a));
    m.set(n + 1, n, k(l.c));
    m.set(n, n + 1, k(l.b));
    m.set(n + 1, n + 1, k(l.d));
    // (L^-1)^T
    m.set(n + 2, n + 2, k(li.a));
    m.set(n + 3, n + 2, k(li.b));
    m.set(n + 2, n + 3, k(li.c));
    m.set(n + 3, n + 3, k(li.d));
    LinMap(m)
}

/// `g -> M g M^-1`, decoded back to normal forms.
pub fn conjugation_auto(group: &DoubleAffineWeyl, m: &LinMap) -> Result<WeylAuto> {
    let mi = m
        .inverse()
        .ok_or_else(|| Error::NotInGroup("singular matrix".into()))?;
    weyl_generators(group.rank())
        .into_iter()
        .map(|g| {
            let r = group.rho(&group.from_generator_id(&g)?);
            Ok((g, group.decode(&m.compose(&r).compose(&mi))?))
        })
        .collect()
}

/// Applies a Weyl-level automorphism (given on generators) to an element.
pub fn apply_weyl_auto(
    group: &DoubleAffineWeyl,
    f: &WeylAuto,
    g: &DAWElement,
) -> Result<DAWElement> {
    let w = group.to_word(g)?;
    let tau = {
        let mut t = Word::parse("s01 s02 s03")?;
        t = t.concat(&Word(
            group
                .s_theta_word()
                .iter()
                .map(|i| Letter::new(format!("s{i}"), 1))
                .collect(),
        ));
        t
    };
    let w = w.substitute(&|x: &str| (x == "tau").then(|| tau.clone()));
    eval_word(group, f, &w)
}

/// `f . g` on generators.
pub fn compose_weyl_auto(group: &DoubleAffineWeyl, f: &WeylAuto, g: &WeylAuto) -> Result<WeylAuto> {
    g.iter()
        .map(|(k, v)| Ok((k.clone(), apply_weyl_auto(group, f, v)?)))
        .collect()
}

/// A word for `g`: the shortest over `s1..sn, s01, s02, s03` up to length
/// 3 if there is one, otherwise the normal-form word.
pub fn short_word(group: &DoubleAffineWeyl, g: &DAWElement) -> Result<Word> {
    let gens: Vec<(String, DAWElement)> = weyl_generators(group.rank())
        .into_iter()
        .map(|x| Ok((x.clone(), group.from_generator_id(&x)?)))
        .collect::<Result<_>>()?;
    let mut layer: Vec<(Vec<usize>, DAWElement)> = vec![(vec![], group.identity())];
    for _ in 0..=3 {
        if let Some((w, _)) = layer.iter().find(|(_, e)| e == g) {
            return Ok(Word(
                w.iter()
                    .map(|&i| Letter::new(gens[i].0.clone(), 1))
                    .collect(),
            ));
        }
        let mut next = Vec::new();
        for (w, e) in &layer {
            for (i, (_, ge)) in gens.iter().enumerate() {
                if w.last() == Some(&i) {
                    continue;
                }
                let mut w2 = w.clone();
                w2.push(i);
                next.push((w2, group.multiply(e, ge)?));
            }
        }
        layer = next;
    }
    let st = Word(
        group
            .s_theta_word()
            .iter()
            .map(|i| Letter::new(format!("s{i}"), 1))
            .collect(),
    );
    let tau = Word::parse("s01 s02 s03")?.concat(&st);
    Ok(group
        .to_word(g)?
        .substitute(&|x: &str| (x == "tau").then(|| tau.clone())))
}

/// Expresses a Weyl-level automorphism as generator words (over `s1..sn, s01, s02, s03`).
pub fn weyl_auto_to_spec(group: &DoubleAffineWeyl, f: &WeylAuto) -> Result<EndoSpec> {
    let images = f
        .iter()
        .map(|(k, v)| Ok((k.clone(), short_word(group, v)?)))
        .collect::<Result<_>>()?;
    Ok(WordMap {
        images,
        anti: false,
    })
}

fn compare_autos(rep: &mut Report, prefix: &str, anchor: &str, f: &WeylAuto, g: &WeylAuto) {
    for (k, v) in f {
        let other = g.get(k);
        let ok = other == Some(v);
        let mut c = Check::from_bool(format!("{prefix}({k})"), anchor, ok);
        if !ok {
            c = c.with_witness(serde_json::json!({ "left": v, "right": other }));
        }
        rep.push(c);
    }
}

/// `Upsilon(w)` and `upsilon(pi(w))` agree on every generator; the matrix
/// conjugation route gives the same images.
pub fn check_descent_diagram(group: &DoubleAffineWeyl, w: &B3Word) -> Result<Report> {
    let mut rep = Report::new("descent").for_type(&group.data.type_id);
    let up = b3_weyl_action(group, w)?;
    let u = pi(w);
    let down = sl2z_weyl_auto(group, &u)?;
    let conj = conjugation_auto(group, &sl2z_matrix(group, &u))?;
    compare_autos(
        &mut rep,
        &format!("descent[{w}]"),
        "Upsilon(w) = upsilon(pi(w)) on generators",
        &up,
        &down,
    );
    compare_autos(
        &mut rep,
        &format!("matrix[{w}]"),
        "reflection images = conjugation by the isometry",
        &down,
        &conj,
    );
    Ok(rep)
}

/// Compares `Upsilon(w)` with conjugation by `h` on every generator.
pub fn check_conjugation(
    group: &DoubleAffineWeyl,
    w: &B3Word,
    h: &DAWElement,
    tag: &str,
) -> Result<Report> {
    let mut rep = Report::new(tag.to_string()).for_type(&group.data.type_id);
    let up = b3_weyl_action(group, w)?;
    let hi = group.inverse(h);
    let conj: WeylAuto = up
        .keys()
        .map(|k| {
            Ok((
                k.clone(),
                group.multiply(&group.multiply(h, &group.from_generator_id(k)?)?, &hi)?,
            ))
        })
        .collect::<Result<_>>()?;
    compare_autos(
        &mut rep,
        tag,
        "Upsilon(w) = conjugation on generators",
        &up,
        &conj,
    );
    Ok(rep)
}

/// Duality: the swap `E` of `d1 <-> d2`, `L1 <-> L2`.
pub fn duality_involution_check(group: &DoubleAffineWeyl) -> Result<Report> {
    let data = &group.data;
    let mut rep = Report::new("duality").for_type(&data.type_id);
    let e = data.duality_swap();
    rep.push(Check::from_bool(
        "E^2",
        "E squares to the identity",
        e.compose(&e).is_identity(),
    ));
    let conj = |g: &DAWElement| e.compose(&group.rho(g)).compose(&e);
    let gen = |id: &str| group.from_generator_id(id);
    for i in 1..=group.rank() {
        let s = gen(&format!("s{i}"))?;
        rep.push(Check::from_bool(
            format!("E s{i} E"),
            "E fixes the finite generators",
            conj(&s) == group.rho(&s),
        ));
    }
    let (s01, s02, s03, tau) = (gen("s01")?, gen("s02")?, gen("s03")?, gen("tau")?);
    rep.push(Check::from_bool(
        "E s01 E",
        "E exchanges s01 and s03",
        conj(&s01) == group.rho(&s03),
    ));
    rep.push(Check::from_bool(
        "E s03 E",
        "E exchanges s01 and s03",
        conj(&s03) == group.rho(&s01),
    ));
    rep.push(Check::from_bool(
        "E s02 E",
        "E fixes s02",
        conj(&s02) == group.rho(&s02),
    ));
    rep.push(Check::from_bool(
        "E tau E",
        "E inverts the central translation",
        conj(&tau) == group.rho(&group.inverse(&tau)),
    ));
    // the anti-involution exchanges the lambda and tau generator words
    let n = group.rank();
    let espec = b3_action(B3Letter::E, n);
    let st: Word = Word(
        group
            .s_theta_word()
            .iter()
            .map(|i| Letter::new(format!("T{i}"), 1))
            .collect(),
    );
    let lam = st.concat(&Word::gen("T01"));
    let tau_w = Word::gen("T03").concat(&st);
    let theta = data.theta_scaled();
    let triple =
        crate::presentations::presentation_of(crate::presentations::Kind::Triple, data, 0)?;
    let a = weyl_assignment(group, &triple)?;
    let e_lam = eval_word(group, &a, &espec.apply(&lam)?)?;
    let e_tau = eval_word(group, &a, &espec.apply(&tau_w)?)?;
    rep.push(Check::from_bool(
        "e(lambda word)",
        "e sends the word of lambda_{-theta'} to that of tau_{theta'}",
        e_lam == group.tau(&theta),
    ));
    rep.push(Check::from_bool(
        "e(tau word)",
        "e sends the word of tau_{theta'} to that of lambda_{-theta'}",
        e_tau == group.lambda(&-&theta),
    ));
    // as an automorphism, E-conjugation is e followed by inversion
    let lam_el = group.lambda(&-&theta);
    let e_auto_lam = group.decode(&conj(&lam_el))?;
    rep.push(Check::from_bool(
        "E lambda E",
        "E conjugates lambda_mu to tau_mu",
        e_auto_lam == group.tau(&-&theta),
    ));
    // e u12 e = u21^-1, as matrices and as Weyl automorphisms
    let eu = SL2ZMatrix::swap()
        .mul(&SL2ZMatrix::u12())
        .mul(&SL2ZMatrix::swap());
    rep.push(Check::from_bool(
        "e u12 e",
        "e u12 e = u21^-1 in GL(2,Z)",
        eu == SL2ZMatrix::u21().inverse(),
    ));
    let e_auto = conjugation_auto(group, &e)?;
    let u12 = sl2z_weyl_auto(group, &SL2ZMatrix::u12())?;
    let lhs = compose_weyl_auto(group, &e_auto, &compose_weyl_auto(group, &u12, &e_auto)?)?;
    let rhs = sl2z_weyl_auto(group, &SL2ZMatrix::u21().inverse())?;
    compare_autos(
        &mut rep,
        "e.u12.e",
        "e u12 e = u21^-1 as automorphisms",
        &lhs,
        &rhs,
    );
    Ok(rep)
}

/// Homomorphy of `spec` on `p` under the canonical Weyl assignment, and
/// (when candidates are given) a two-sided inverse among them.
pub fn is_automorphism(
    group: &DoubleAffineWeyl,
    spec: &EndoSpec,
    p: &Presentation,
    inverses: &[EndoSpec],
) -> Result<Report> {
    let a = weyl_assignment(group, p)?;
    let mut rep = Report::new("automorphism").for_type(&group.data.type_id);
    rep.push(Check::from_bool(
        "total",
        "the map is defined on every generator",
        spec.is_total_on(&p.generators),
    ));
    if !spec.is_total_on(&p.generators) {
        return Ok(rep);
    }
    for r in &p.relations {
        let res = (|| {
            Ok::<_, Error>(
                eval_word(group, &a, &spec.apply(&r.lhs)?)?
                    == eval_word(group, &a, &spec.apply(&r.rhs)?)?,
            )
        })();
        let c = match res {
            Ok(ok) => Check::from_bool(
                format!("image[{}]", r.tag),
                "the image of the relation holds",
                ok,
            ),
            Err(e) => Check::new(
                format!("image[{}]", r.tag),
                "the image of the relation holds",
                Status::Fail,
            )
            .with_detail(e.to_string()),
        };
        rep.push(c);
    }
    if !inverses.is_empty() {
        let found = inverses.iter().position(|inv| {
            p.generators.iter().all(|g| {
                let w = Word::gen(g);
                let both = |f: &EndoSpec, h: &EndoSpec| {
                    f.apply(&w)
                        .and_then(|x| h.apply(&x))
                        .and_then(|x| eval_word(group, &a, &x))
                        .ok()
                        == a.get(g).cloned()
                };
                both(spec, inv) && both(inv, spec)
            })
        });
        let mut c = Check::from_bool(
            "inverse",
            "a supplied candidate is a two-sided inverse on generators",
            found.is_some(),
        );
        if let Some(i) = found {
            c = c.with_detail(format!("candidate {i}"));
        }
        rep.push(c);
    }
    Ok(rep)
}

/// A triple-group generator map transported to the double affine Weyl alphabet.
pub fn weyl_spec(spec: &EndoSpec) -> EndoSpec {
    WordMap {
        images: spec
            .images
            .iter()
            .map(|(k, v)| (format!("s{}", &k[1..]), to_weyl_letters(v)))
            .collect(),
        anti: spec.anti,
    }
}

/// Whether the longest element of the finite Weyl group acts as `-1`.
pub fn w0_is_minus_one(group: &DoubleAffineWeyl) -> bool {
    group.longest_element().0.is_minus_one()
}

/// `Upsilon(a)`, `Upsilon(b)` and their inverses respect the double affine
/// Weyl presentation.
pub fn weyl_automorphy(group: &DoubleAffineWeyl) -> Result<Report> {
    let n = group.rank();
    let mut rep = Report::new("automorphy").for_type(&group.data.type_id);
    let daw =
        crate::presentations::presentation_of(crate::presentations::Kind::Daw, &group.data, 0)?;
    for (name, letter) in [("a", B3Letter::A), ("b", B3Letter::B)] {
        let f = weyl_spec(&b3_action(letter, n));
        let inv = weyl_spec(&b3_inverse_action(letter, n));
        rep.extend_prefixed(
            &format!("auto({name})"),
            is_automorphism(group, &f, &daw, &[inv])?,
        );
    }
    Ok(rep)
}

/// Every `B3` / `SL(2,Z)` check for one type.
pub fn b3_suite(group: &DoubleAffineWeyl, seed: u64, samples: usize) -> Result<Report> {
    let mut rep = Report::new("b3")
        .for_type(&group.data.type_id)
        .with_seed(seed);
    let (a, b) = (B3Word::parse("a")?, B3Word::parse("b")?);
    rep.push(Check::from_bool(
        "pi(a)",
        "pi(a) = u12",
        pi(&a) == SL2ZMatrix::u12(),
    ));
    rep.push(Check::from_bool(
        "pi(b)",
        "pi(b) = u21",
        pi(&b) == SL2ZMatrix::u21(),
    ));
    rep.push(Check::from_bool(
        "(u12 u21)^6",
        "(u12 u21)^6 = I",
        SL2ZMatrix::u12()
            .mul(&SL2ZMatrix::u21())
            .pow(6)
            .is_identity(),
    ));
    let aba = B3Word::parse("a b a")?;
    rep.push(Check::from_bool(
        "pi(aba)=pi(bab)",
        "pi satisfies the braid relation",
        pi(&aba) == pi(&B3Word::parse("b a b")?),
    ));
    let minus = SL2ZMatrix {
        a: -1,
        b: 0,
        c: 0,
        d: -1,
    };
    rep.push(Check::from_bool(
        "pi(c)",
        "pi((aba)^2) = -I",
        pi(&B3Word::center()) == minus,
    ));
    rep.push(Check::from_bool(
        "pi(c^2)",
        "pi((aba)^4) = I",
        pi(&B3Word::center().pow(2)).is_identity(),
    ));
    // braid identity for Upsilon(a), Upsilon(b) on all generators
    let l = b3_weyl_action(group, &aba)?;
    let r = b3_weyl_action(group, &B3Word::parse("b a b")?)?;
    compare_autos(&mut rep, "braid", "Upsilon(aba) = Upsilon(bab)", &l, &r);
    // descent diagram on seeded random words
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..samples {
        let w = B3Word::random(&mut rng, 10);
        let d = check_descent_diagram(group, &w)?;
        rep.push(Check::from_bool(
            format!("descent#{k}"),
            format!("descent diagram commutes for {w}"),
            d.passed(),
        ));
    }
    // center: (aba)^2 acts as conjugation by w0; its square trivially
    let (w0, _) = group.longest_element();
    let w0 = group.finite(w0);
    rep.extend(check_conjugation(group, &B3Word::center(), &w0, "center")?);
    rep.extend(check_conjugation(
        group,
        &B3Word::center().pow(2),
        &group.identity(),
        "center^2",
    )?);
    rep.push(
        Check::pass(
            "w0=-1",
            "whether the longest element acts as -1 (SL vs PSL)",
        )
        .with_detail(w0_is_minus_one(group).to_string()),
    );
    rep.extend(duality_involution_check(group)?);
    Ok(rep)
}

/// Count of a letter in a word (helper for reports on image sizes).
pub fn image_lengths(spec: &EndoSpec) -> BTreeMap<String, usize> {
    spec.images
        .iter()
        .map(|(k, v)| (k.clone(), v.len()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_system::load_catalog;

    fn group(id: &str) -> DoubleAffineWeyl {
        DoubleAffineWeyl::new(load_catalog(id).unwrap())
    }

    #[test]
    fn pi_values() {
        assert_eq!(pi(&B3Word::parse("a").unwrap()), SL2ZMatrix::u12());
        assert!(SL2ZMatrix::u12()
            .mul(&SL2ZMatrix::u21())
            .pow(6)
            .is_identity());
        let aba = B3Word::parse("a b a").unwrap();
        assert_eq!(pi(&aba), pi(&B3Word::parse("b a b").unwrap()));
        assert!(!pi(&aba).pow(2).is_identity());
        assert!(pi(&aba).pow(4).is_identity());
        assert!(SL2ZMatrix::new(1, 2, 3, 4).is_err());
    }

    #[test]
    fn word_level_maps() {
        let a = b3_action(B3Letter::A, 2);
        assert_eq!(
            a.apply(&Word::parse("T01 T03").unwrap()).unwrap(),
            Word::parse("T02 T03").unwrap()
        );
        let e = b3_action(B3Letter::E, 2);
        assert_eq!(
            e.apply(&Word::parse("T01 T02").unwrap()).unwrap(),
            Word::parse("T02 T03").unwrap()
        );
        let ee = e.compose(&e).unwrap();
        assert!(!ee.anti);
        assert_eq!(ee, WordMap::identity(&triple_generators(2)));
        let ai = b3_inverse_action(B3Letter::A, 2);
        assert_eq!(
            a.compose(&ai).unwrap(),
            WordMap::identity(&triple_generators(2))
        );
        assert_eq!(
            ai.compose(&a).unwrap(),
            WordMap::identity(&triple_generators(2))
        );
    }

    #[test]
    fn eae_is_b_inverse_at_weyl_level() {
        let g = group("A2~1");
        let e = b3_action(B3Letter::E, 2);
        let a = b3_action(B3Letter::A, 2);
        let eae = e.compose(&a.compose(&e).unwrap()).unwrap();
        let bi = b3_inverse_action(B3Letter::B, 2);
        let p =
            crate::presentations::presentation_of(crate::presentations::Kind::Triple, &g.data, 0)
                .unwrap();
        let asg = weyl_assignment(&g, &p).unwrap();
        for t in ["T01", "T02", "T03", "T1", "T2"] {
            let w = Word::gen(t);
            let x = eval_word(&g, &asg, &eae.apply(&w).unwrap()).unwrap();
            let y = eval_word(&g, &asg, &bi.apply(&w).unwrap()).unwrap();
            assert_eq!(x, y, "{t}");
        }
    }

    #[test]
    fn descent_on_generators() {
        for id in ["A2~1", "A4~2"] {
            let g = group(id);
            for w in ["a", "b", "a^-1", "a b", "b a b^-1 a"] {
                let r = check_descent_diagram(&g, &B3Word::parse(w).unwrap()).unwrap();
                assert!(
                    r.passed(),
                    "{id} {w}: {:?}",
                    r.failures().collect::<Vec<_>>()
                );
            }
        }
    }

    #[test]
    fn identity_matrix_gives_identity_auto() {
        let g = group("A3~1");
        let f = sl2z_weyl_auto(&g, &SL2ZMatrix::identity()).unwrap();
        for (k, v) in &f {
            assert_eq!(*v, g.from_generator_id(k).unwrap());
        }
    }

    #[test]
    fn bad_spec_is_not_an_automorphism() {
        let g = group("A2~1");
        let daw =
            crate::presentations::presentation_of(crate::presentations::Kind::Daw, &g.data, 0)
                .unwrap();
        let mut f = WordMap::identity(&daw.generators);
        f.images.insert("s01".into(), Word::gen("s1"));
        let r = is_automorphism(&g, &f, &daw, &[]).unwrap();
        assert!(!r.passed());
        let good = weyl_spec(&b3_action(B3Letter::A, 2));
        assert!(is_automorphism(
            &g,
            &good,
            &daw,
            &[weyl_spec(&b3_inverse_action(B3Letter::A, 2))]
        )
        .unwrap()
        .passed());
    }

    #[test]
    fn duality() {
        for id in ["A2~1", "A4~2", "D4~1"] {
            let r = duality_involution_check(&group(id)).unwrap();
            assert!(r.passed(), "{id}: {:?}", r.failures().collect::<Vec<_>>());
        }
    }
}
