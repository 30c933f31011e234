//! Presentations by generators and relations, canonical assignments into
//! the double affine Weyl group, and the conformance engine.

use crate::error::{Error, Result};
use crate::geometry::LinMap;
use crate::report::{Check, Report, Status};
use crate::root_system::AffineCartanData;
use crate::weyl::{DAWElement, DoubleAffineWeyl, GroupModel, MatrixModel};
use crate::word::{Letter, Word};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    FiniteCoxeter,
    FiniteArtin,
    AffineCoxeter,
    AffineArtin,
    /// Three generators at the affine node, braid relations and the
    /// lace-dependent extra family.
    Triple,
    /// The triple group with `C = T01 T02 T03 T_{s_theta}` central.
    TripleQuotient,
    /// Double affine Artin group in the three-generator form.
    DawArtin,
    EllipticArtin,
    /// Double affine Weyl group in the order-two form.
    Daw,
    EllipticDaw,
    /// Double affine Artin group on `T0..Tn`, `X_{theta'}` and `X_{delta/a0}`.
    Cherednik,
}

impl Kind {
    pub const ALL: [Kind; 11] = [
        Kind::FiniteCoxeter,
        Kind::FiniteArtin,
        Kind::AffineCoxeter,
        Kind::AffineArtin,
        Kind::Triple,
        Kind::TripleQuotient,
        Kind::DawArtin,
        Kind::EllipticArtin,
        Kind::Daw,
        Kind::EllipticDaw,
        Kind::Cherednik,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::FiniteCoxeter => "finite-coxeter",
            Kind::FiniteArtin => "finite-artin",
            Kind::AffineCoxeter => "affine-coxeter",
            Kind::AffineArtin => "affine-artin",
            Kind::Triple => "triple",
            Kind::TripleQuotient => "triple-quotient",
            Kind::DawArtin => "daw-artin",
            Kind::EllipticArtin => "elliptic-artin",
            Kind::Daw => "daw",
            Kind::EllipticDaw => "elliptic-daw",
            Kind::Cherednik => "cherednik",
        }
    }

    /// Whether the canonical assignment lands in the elliptic quotient.
    pub fn is_elliptic(self) -> bool {
        matches!(self, Kind::EllipticArtin | Kind::EllipticDaw)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Kind> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown presentation kind {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub tag: String,
    pub lhs: Word,
    pub rhs: Word,
}

impl Relation {
    /// The relator `lhs . rhs^-1`, freely reduced.
    pub fn relator(&self) -> Word {
        self.lhs.concat(&self.rhs.inverse()).free_reduce()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<Kind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub type_id: Option<String>,
    pub generators: Vec<String>,
    /// Named abbreviations (`@name`), stored fully expanded.
    pub macros: BTreeMap<String, Word>,
    pub relations: Vec<Relation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_bound: Option<u32>,
    /// Inert Hecke parameter names attached to the presentation.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hecke_parameters: Vec<String>,
}

impl Presentation {
    pub fn new(generators: Vec<String>) -> Self {
        Presentation {
            kind: None,
            type_id: None,
            generators,
            macros: BTreeMap::new(),
            relations: Vec::new(),
            k_bound: None,
            hecke_parameters: Vec::new(),
        }
    }

    pub fn has_generator(&self, g: &str) -> bool {
        self.generators.iter().any(|x| x == g)
    }

    /// Expands macros and checks every letter against the alphabet.
    pub fn expand(&self, w: &Word) -> Result<Word> {
        let mut out = Vec::new();
        for l in w.letters() {
            if l.gen.starts_with('@') {
                let m = self
                    .macros
                    .get(&l.gen)
                    .ok_or_else(|| Error::UnknownGenerator(l.gen.clone()))?;
                let m = if l.exp == 1 { m.clone() } else { m.inverse() };
                out.extend(m.0);
            } else if self.has_generator(&l.gen) {
                out.push(l.clone());
            } else {
                return Err(Error::UnknownGenerator(l.gen.clone()));
            }
        }
        Ok(Word(out))
    }

    pub fn parse_word(&self, s: &str) -> Result<Word> {
        self.expand(&Word::parse(s)?)
    }

    pub fn add_macro(&mut self, name: &str, body: &str) -> Result<()> {
        if !name.starts_with('@') {
            return Err(Error::Parse(format!(
                "macro names start with '@': {name:?}"
            )));
        }
        let w = self.parse_word(body)?;
        self.macros.insert(name.to_string(), w);
        Ok(())
    }

    pub fn add_relation(&mut self, tag: impl Into<String>, lhs: &str, rhs: &str) -> Result<()> {
        let lhs = self.parse_word(lhs)?;
        let rhs = self.parse_word(rhs)?;
        self.relations.push(Relation {
            tag: tag.into(),
            lhs,
            rhs,
        });
        Ok(())
    }

    fn push(&mut self, tag: String, lhs: Word, rhs: Word) {
        self.relations.push(Relation { tag, lhs, rhs });
    }

    pub fn relation(&self, tag: &str) -> Option<&Relation> {
        self.relations.iter().find(|r| r.tag == tag)
    }

    /// Line-oriented text form (see [`Presentation::from_text`]).
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if let Some(k) = self.kind {
            s.push_str(&format!("kind: {k}\n"));
        }
        if let Some(t) = &self.type_id {
            s.push_str(&format!("type: {t}\n"));
        }
        if let Some(k) = self.k_bound {
            s.push_str(&format!("kbound: {k}\n"));
        }
        s.push_str(&format!("generators: {}\n", self.generators.join(" ")));
        if !self.hecke_parameters.is_empty() {
            s.push_str(&format!("hecke: {}\n", self.hecke_parameters.join(" ")));
        }
        for (name, body) in &self.macros {
            s.push_str(&format!("macro {name} = {body}\n"));
        }
        for r in &self.relations {
            s.push_str(&format!("{}: {} = {}\n", r.tag, r.lhs, r.rhs));
        }
        s
    }

    /// Parses the text form:
    ///
    /// ```text
    /// generators: p q x
    /// macro @w = p q
    /// pxp: p x p = x p x
    /// x q x = q x q
    /// ```
    ///
    /// `kind:`, `type:`, `kbound:` and `hecke:` header lines are optional;
    /// `#` starts a comment.
    pub fn from_text(text: &str) -> Result<Presentation> {
        let mut p = Presentation::new(Vec::new());
        let mut seen_gens = false;
        let mut unnamed = 0;
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("macro ") {
                let (name, body) = rest
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("bad macro line {line:?}")))?;
                p.add_macro(name.trim(), body.trim())?;
                continue;
            }
            let (head, tail) = match line.split_once(':') {
                // tags are single tokens (and may themselves contain '=')
                Some((h, t)) if !h.trim().contains(char::is_whitespace) => {
                    (Some(h.trim()), t.trim())
                }
                _ => (None, line),
            };
            match head {
                Some("generators") => {
                    p.generators = tail.split_whitespace().map(String::from).collect();
                    seen_gens = true;
                }
                Some("kind") => p.kind = Some(tail.parse()?),
                Some("type") => p.type_id = Some(tail.to_string()),
                Some("hecke") => {
                    p.hecke_parameters = tail.split_whitespace().map(String::from).collect()
                }
                Some("kbound") => {
                    p.k_bound = Some(
                        tail.parse()
                            .map_err(|_| Error::Parse(format!("bad kbound {tail:?}")))?,
                    )
                }
                _ => {
                    if !seen_gens {
                        return Err(Error::Parse("relations before the generators line".into()));
                    }
                    let (lhs, rhs) = tail
                        .split_once('=')
                        .ok_or_else(|| Error::Parse(format!("relation without '=': {line:?}")))?;
                    let tag = match head {
                        Some(h) => h.to_string(),
                        None => {
                            unnamed += 1;
                            format!("r{unnamed}")
                        }
                    };
                    p.add_relation(tag, lhs.trim(), rhs.trim())?;
                }
            }
        }
        if !seen_gens {
            return Err(Error::Parse("missing generators line".into()));
        }
        Ok(p)
    }
}

fn gen_word(names: &[&str]) -> Word {
    Word(names.iter().map(|g| Letter::new(*g, 1)).collect())
}

fn alternating(a: &str, b: &str, m: usize) -> Word {
    Word(
        (0..m)
            .map(|k| Letter::new(if k % 2 == 0 { a } else { b }, 1))
            .collect(),
    )
}

fn braid_relation(a: &str, b: &str, m: usize) -> Relation {
    Relation {
        tag: format!("braid({a},{b})"),
        lhs: alternating(a, b, m),
        rhs: alternating(b, a, m),
    }
}

fn prefixed_word(prefix: &str, idx: &[usize]) -> Word {
    Word(
        idx.iter()
            .map(|i| Letter::new(format!("{prefix}{i}"), 1))
            .collect(),
    )
}

/// Braid relations among finite nodes named `{prefix}{i}`.
fn finite_braids(p: &mut Presentation, data: &AffineCartanData, prefix: &str) {
    for i in 1..=data.n {
        for j in i + 1..=data.n {
            if let Some(m) = AffineCartanData::braid_length(data.laces(i, j)) {
                p.relations.push(braid_relation(
                    &format!("{prefix}{i}"),
                    &format!("{prefix}{j}"),
                    m,
                ));
            }
        }
    }
}

/// Braid relations between an affine-node generator and the finite nodes.
fn affine_braids(
    p: &mut Presentation,
    data: &AffineCartanData,
    affine: &Word,
    name: &str,
    prefix: &str,
) {
    for j in 1..=data.n {
        let Some(m) = AffineCartanData::braid_length(data.laces(0, j)) else {
            continue;
        };
        let tj = Word::gen(&format!("{prefix}{j}"));
        let (mut lhs, mut rhs) = (Word::empty(), Word::empty());
        for k in 0..m {
            let (x, y) = if k % 2 == 0 {
                (affine, &tj)
            } else {
                (&tj, affine)
            };
            lhs = lhs.concat(x);
            rhs = rhs.concat(y);
        }
        p.push(format!("braid({name},{prefix}{j})"), lhs, rhs);
    }
}

fn order_two(p: &mut Presentation) {
    for g in p.generators.clone() {
        p.push(format!("order({g})"), gen_word(&[&g, &g]), Word::empty());
    }
}

fn central(p: &mut Presentation, name: &str, element: &Word) {
    for g in p.generators.clone() {
        let gw = Word::gen(&g);
        p.push(
            format!("central({name},{g})"),
            gw.concat(element),
            element.concat(&gw),
        );
    }
}

/// Largest truncation bound accepted for the integer-indexed family.
pub const MAX_K_BOUND: u32 = 32;

/// Builds the presentation of the requested kind, deterministically.
pub fn presentation_of(kind: Kind, data: &AffineCartanData, k_bound: u32) -> Result<Presentation> {
    if k_bound > MAX_K_BOUND {
        return Err(Error::UnsupportedKind {
            kind: kind.to_string(),
            type_id: data.type_id.clone(),
            reason: format!("kbound {k_bound} exceeds {MAX_K_BOUND}"),
        });
    }
    let group = DoubleAffineWeyl::new(data.clone());
    let theta_word = group.s_theta_word().to_vec();
    let n = data.n;
    let a = data.alpha_index;
    let fin = |prefix: &str| (1..=n).map(|i| format!("{prefix}{i}")).collect::<Vec<_>>();
    let mut p;
    match kind {
        Kind::FiniteCoxeter | Kind::FiniteArtin => {
            let prefix = if kind == Kind::FiniteCoxeter {
                "s"
            } else {
                "T"
            };
            p = Presentation::new(fin(prefix));
            if kind == Kind::FiniteCoxeter {
                order_two(&mut p);
            }
            finite_braids(&mut p, data, prefix);
        }
        Kind::AffineCoxeter | Kind::AffineArtin => {
            let prefix = if kind == Kind::AffineCoxeter {
                "s"
            } else {
                "T"
            };
            let mut gens = vec![format!("{prefix}0")];
            gens.extend(fin(prefix));
            p = Presentation::new(gens);
            if kind == Kind::AffineCoxeter {
                order_two(&mut p);
            }
            affine_braids(
                &mut p,
                data,
                &Word::gen(&format!("{prefix}0")),
                &format!("{prefix}0"),
                prefix,
            );
            finite_braids(&mut p, data, prefix);
        }
        Kind::Daw | Kind::EllipticDaw => {
            let mut gens = fin("s");
            gens.extend(["s01", "s02", "s03"].map(String::from));
            p = Presentation::new(gens);
            p.macros
                .insert("@Sst".into(), prefixed_word("s", &theta_word));
            let tau = gen_word(&["s01", "s02", "s03"]).concat(&prefixed_word("s", &theta_word));
            p.macros.insert("@tau".into(), tau.clone());
            for g in ["s01", "s02", "s03"] {
                affine_braids(&mut p, data, &Word::gen(g), g, "s");
            }
            finite_braids(&mut p, data, "s");
            if data.l0 == 2 {
                let sa = format!("s{a}");
                p.push(
                    "wellbraid".into(),
                    gen_word(&["s01", &sa, "s03", &sa]),
                    gen_word(&[&sa, "s03", &sa, "s01"]),
                );
            }
            order_two(&mut p);
            if kind == Kind::Daw {
                central(&mut p, "tau", &tau);
            } else {
                p.push("elliptic(tau)".into(), tau, Word::empty());
            }
        }
        Kind::Triple | Kind::TripleQuotient | Kind::DawArtin | Kind::EllipticArtin => {
            let mut gens = fin("T");
            gens.extend(["T01", "T02", "T03"].map(String::from));
            p = Presentation::new(gens);
            let tst = prefixed_word("T", &theta_word);
            let c = gen_word(&["T01", "T02", "T03"]).concat(&tst);
            p.macros.insert("@Tst".into(), tst);
            p.macros
                .insert("@D".into(), gen_word(&["T01", "T02", "T03"]));
            p.macros.insert("@C".into(), c.clone());
            for g in ["T01", "T02", "T03"] {
                affine_braids(&mut p, data, &Word::gen(g), g, "T");
            }
            finite_braids(&mut p, data, "T");
            let ta = Word::gen(&format!("T{a}"));
            let ellbraid = |i: &str, j: &str| {
                let (ti, tj) = (Word::gen(i), Word::gen(j));
                let lhs = ti.concat(&ta.inverse()).concat(&tj).concat(&ta);
                let rhs = ta.inverse().concat(&tj).concat(&ta).concat(&ti);
                (lhs, rhs)
            };
            match kind {
                Kind::Triple | Kind::TripleQuotient => {
                    p.k_bound = Some(k_bound);
                    if data.l0 == 1 {
                        let d = gen_word(&["T01", "T02", "T03"]);
                        let elements: [(&str, Word); 5] = [
                            ("T01", Word::gen("T01")),
                            ("T02", Word::gen("T02")),
                            ("T03", Word::gen("T03")),
                            ("T01.T02.T01^-1", Word::parse("T01 T02 T01^-1").unwrap()),
                            ("T03^-1.T02.T03", Word::parse("T03^-1 T02 T03").unwrap()),
                        ];
                        for k in -(k_bound as i64)..=(k_bound as i64) {
                            let x = d.pow(k).concat(&ta).concat(&d.pow(-k));
                            for (name, e) in &elements {
                                let lhs = e.concat(&x).concat(e);
                                let rhs = x.concat(e).concat(&x);
                                p.push(format!("single-lace({name},k={k})"), lhs, rhs);
                            }
                        }
                    } else {
                        for (i, j) in [("T01", "T02"), ("T01", "T03"), ("T02", "T03")] {
                            let (lhs, rhs) = ellbraid(i, j);
                            p.push(format!("ellbraid({i},{j})"), lhs, rhs);
                        }
                    }
                    if kind == Kind::TripleQuotient {
                        central(&mut p, "C", &c);
                    }
                }
                _ => {
                    if data.l0 == 2 {
                        let (lhs, rhs) = ellbraid("T01", "T03");
                        p.push("ellbraid(T01,T03)".into(), lhs, rhs);
                    }
                    if kind == Kind::DawArtin {
                        central(&mut p, "C", &c);
                    } else {
                        p.push("elliptic(C)".into(), c, Word::empty());
                    }
                }
            }
        }
        Kind::Cherednik => {
            let mut gens = vec!["T0".to_string()];
            gens.extend(fin("T"));
            gens.extend(["Xt", "Xd"].map(String::from));
            p = Presentation::new(gens);
            let tst = prefixed_word("T", &theta_word);
            p.macros.insert("@Tst".into(), tst.clone());
            let y = Word::gen("Xt").concat(&tst.inverse());
            p.macros.insert("@Xts".into(), y.clone());
            affine_braids(&mut p, data, &Word::gen("T0"), "T0", "T");
            finite_braids(&mut p, data, "T");
            affine_braids(&mut p, data, &y, "Xt.Tst^-1", "T");
            let xd = Word::gen("Xd");
            for g in p.generators.clone() {
                if g != "Xd" {
                    let gw = Word::gen(&g);
                    p.push(format!("central(Xd,{g})"), gw.concat(&xd), xd.concat(&gw));
                }
            }
            let ta = format!("T{a}");
            let t0 = Word::gen("T0");
            if data.l0 == 1 {
                // X_alpha = T_a X_{-theta} T_a X_theta and X_{alpha_0} = Xd Xt^-1
                let xa = Word::parse(&format!("{ta} Xt^-1 {ta} Xt")).unwrap();
                p.macros.insert("@Xa".into(), xa.clone());
                let lhs = t0.concat(&xa).concat(&t0);
                let rhs = xa.concat(&Word::parse("Xd Xt^-1").unwrap());
                p.push("reduction".into(), lhs, rhs);
            } else {
                // X_{alpha - theta'} = T_a X_{-theta'} T_a
                let xa = Word::parse(&format!("{ta} Xt^-1 {ta}")).unwrap();
                p.macros.insert("@Xa".into(), xa.clone());
                p.push("reduction".into(), t0.concat(&xa), xa.concat(&t0));
            }
        }
    }
    p.kind = Some(kind);
    p.type_id = Some(data.type_id.clone());
    p.hecke_parameters = hecke_parameters(kind, data);
    Ok(p)
}

fn hecke_parameters(kind: Kind, data: &AffineCartanData) -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    let mut seen: Vec<crate::rational::Q> = Vec::new();
    let first = if matches!(kind, Kind::FiniteArtin | Kind::FiniteCoxeter) {
        1
    } else {
        0
    };
    for j in first..=data.n {
        if !seen.contains(&data.d[j]) {
            seen.push(data.d[j]);
            names.push(format!("t{j}"));
        }
    }
    if matches!(
        kind,
        Kind::Cherednik | Kind::DawArtin | Kind::TripleQuotient | Kind::EllipticArtin
    ) {
        names.push("q".into());
        if data.lattice_mode == crate::root_system::LatticeMode::WeightLattice {
            names.extend(["t02".into(), "t03".into()]);
        }
    }
    names
}

/// Canonical images of every generator name used by the presentations.
pub fn weyl_image(group: &DoubleAffineWeyl, gen: &str) -> Result<DAWElement> {
    match gen {
        "s0" | "T0" | "T01" => group.from_generator_id("s01"),
        "T02" => group.from_generator_id("s02"),
        "T03" => group.from_generator_id("s03"),
        "Xt" => Ok(group.tau(&group.data.theta_scaled())),
        "Xd" => group.from_generator_id("tau"),
        _ => {
            if let Some(rest) = gen.strip_prefix('T') {
                group.from_generator_id(&format!("s{rest}"))
            } else {
                group.from_generator_id(gen)
            }
        }
    }
}

pub type Assignment<E> = BTreeMap<String, E>;

pub fn weyl_assignment(
    group: &DoubleAffineWeyl,
    p: &Presentation,
) -> Result<Assignment<DAWElement>> {
    p.generators
        .iter()
        .map(|g| Ok((g.clone(), weyl_image(group, g)?)))
        .collect()
}

pub fn matrix_assignment(group: &DoubleAffineWeyl, p: &Presentation) -> Result<Assignment<LinMap>> {
    p.generators
        .iter()
        .map(|g| Ok((g.clone(), group.rho(&weyl_image(group, g)?))))
        .collect()
}

pub fn eval_word<M: GroupModel>(model: &M, a: &Assignment<M::Elem>, w: &Word) -> Result<M::Elem> {
    let mut acc = model.identity();
    for l in w.letters() {
        let g = a
            .get(&l.gen)
            .ok_or_else(|| Error::UnknownGenerator(l.gen.clone()))?;
        let g = if l.exp == 1 { g.clone() } else { model.inv(g) };
        acc = model.mul(&acc, &g);
    }
    Ok(acc)
}

/// Double affine Weyl group modulo the central translation.
pub struct EllipticWeyl<'a>(pub &'a DoubleAffineWeyl);

impl GroupModel for EllipticWeyl<'_> {
    type Elem = DAWElement;
    fn identity(&self) -> DAWElement {
        self.0.identity()
    }
    fn mul(&self, a: &DAWElement, b: &DAWElement) -> DAWElement {
        self.0.elliptic_project(&GroupModel::mul(self.0, a, b))
    }
    fn inv(&self, a: &DAWElement) -> DAWElement {
        self.0.elliptic_project(&self.0.inverse(a))
    }
    fn is_identity(&self, a: &DAWElement) -> bool {
        self.0.elliptic_project(a).is_identity()
    }
}

/// Matrices restricted to `V_(0,0)`, where the central translation acts trivially.
pub struct EllipticMatrices {
    pub n: usize,
}

impl GroupModel for EllipticMatrices {
    type Elem = LinMap;
    fn identity(&self) -> LinMap {
        LinMap::identity(self.n)
    }
    fn mul(&self, a: &LinMap, b: &LinMap) -> LinMap {
        a.compose(b)
    }
    fn inv(&self, a: &LinMap) -> LinMap {
        a.inverse().expect("invertible")
    }
    fn is_identity(&self, a: &LinMap) -> bool {
        a.is_identity_on_v00()
    }
}

/// Evaluates every relation under the assignment. A relation fails when
/// `lhs . rhs^-1` is not the identity; that element is the witness.
pub fn verify<M>(p: &Presentation, model: &M, a: &Assignment<M::Elem>, jobs: usize) -> Report
where
    M: GroupModel + Sync,
    M::Elem: Serialize + Send + Sync,
{
    let check = |r: &Relation| -> Check {
        let anchor = format!("{} = {}", r.lhs, r.rhs);
        let res = eval_word(model, a, &r.lhs).and_then(|l| Ok((l, eval_word(model, a, &r.rhs)?)));
        match res {
            Ok((l, rr)) => {
                let diff = model.mul(&l, &model.inv(&rr));
                if model.is_identity(&diff) {
                    Check::pass(&r.tag, anchor)
                } else {
                    Check::new(&r.tag, anchor, Status::Fail)
                        .with_witness(serde_json::to_value(&diff).expect("witness serializes"))
                }
            }
            Err(e) => Check::new(&r.tag, anchor, Status::Fail).with_detail(e.to_string()),
        }
    };
    let checks: Vec<Check> = if jobs <= 1 || p.relations.len() < 2 {
        p.relations.iter().map(check).collect()
    } else {
        let chunk = p.relations.len().div_ceil(jobs);
        std::thread::scope(|s| {
            let handles: Vec<_> = p
                .relations
                .chunks(chunk)
                .map(|c| s.spawn(move || c.iter().map(check).collect::<Vec<_>>()))
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("worker panicked"))
                .collect()
        })
    };
    let mut rep = Report::new(format!(
        "verify:{}",
        p.kind.map_or("custom".to_string(), |k| k.to_string())
    ));
    if let Some(t) = &p.type_id {
        rep = rep.for_type(t);
    }
    for c in checks {
        rep.push(c);
    }
    rep
}

/// Conformance under the canonical assignment, through normal forms and
/// through matrices (ids prefixed `normal-form/` and `matrix/`).
pub fn verify_canonical(group: &DoubleAffineWeyl, p: &Presentation, jobs: usize) -> Result<Report> {
    let a = weyl_assignment(group, p)?;
    let m = matrix_assignment(group, p)?;
    let elliptic = p.kind.is_some_and(Kind::is_elliptic);
    let (r1, r2) = if elliptic {
        (
            verify(p, &EllipticWeyl(group), &a, jobs),
            verify(p, &EllipticMatrices { n: group.rank() }, &m, jobs),
        )
    } else {
        (
            verify(p, group, &a, jobs),
            verify(p, &MatrixModel { n: group.rank() }, &m, jobs),
        )
    };
    let mut rep = Report::new(format!(
        "verify:{}",
        p.kind.map_or("custom".into(), |k| k.to_string())
    ))
    .for_type(&group.data.type_id);
    rep.extend_prefixed("normal-form", r1);
    rep.extend_prefixed("matrix", r2);
    Ok(rep)
}

/// A map from generators to words; `anti` marks an anti-homomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordMap {
    pub images: BTreeMap<String, Word>,
    #[serde(default)]
    pub anti: bool,
}

impl WordMap {
    pub fn identity(gens: &[String]) -> Self {
        WordMap {
            images: gens.iter().map(|g| (g.clone(), Word::gen(g))).collect(),
            anti: false,
        }
    }

    pub fn from_pairs(pairs: &[(&str, &str)], anti: bool) -> Result<Self> {
        let images = pairs
            .iter()
            .map(|(g, w)| Ok((g.to_string(), Word::parse(w)?)))
            .collect::<Result<_>>()?;
        Ok(WordMap { images, anti })
    }

    /// Image of a word, freely reduced; anti-homomorphisms reverse the order.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        let mut out = Word::empty();
        let letters: Vec<&Letter> = if self.anti {
            w.letters().iter().rev().collect()
        } else {
            w.letters().iter().collect()
        };
        for l in letters {
            let img = self
                .images
                .get(&l.gen)
                .ok_or_else(|| Error::UnknownGenerator(l.gen.clone()))?;
            out = out.concat(&if l.exp == 1 {
                img.clone()
            } else {
                img.inverse()
            });
        }
        Ok(out.free_reduce())
    }

    /// `self . other` (apply `other` first).
    pub fn compose(&self, other: &WordMap) -> Result<WordMap> {
        let images = other
            .images
            .iter()
            .map(|(g, w)| Ok((g.clone(), self.apply(w)?)))
            .collect::<Result<_>>()?;
        Ok(WordMap {
            images,
            anti: self.anti != other.anti,
        })
    }

    pub fn is_total_on(&self, gens: &[String]) -> bool {
        gens.iter().all(|g| self.images.contains_key(g))
    }
}

/// Generator maps between the triple-quotient presentation and the
/// Cherednik presentation.
pub fn phi_psi(data: &AffineCartanData) -> (WordMap, WordMap) {
    let group = DoubleAffineWeyl::new(data.clone());
    let tst = prefixed_word("T", group.s_theta_word());
    let mut phi = BTreeMap::new();
    let mut psi = BTreeMap::new();
    for i in 1..=data.n {
        let t = format!("T{i}");
        phi.insert(t.clone(), Word::gen(&t));
        psi.insert(t.clone(), Word::gen(&t));
    }
    phi.insert("T01".into(), Word::gen("T0"));
    phi.insert("T03".into(), Word::gen("Xt").concat(&tst.inverse()));
    phi.insert("T02".into(), Word::parse("T0^-1 Xd Xt^-1").unwrap());
    psi.insert("T0".into(), Word::gen("T01"));
    psi.insert("Xt".into(), Word::gen("T03").concat(&tst));
    psi.insert(
        "Xd".into(),
        Word::parse("T01 T02 T03").unwrap().concat(&tst),
    );
    (
        WordMap {
            images: phi,
            anti: false,
        },
        WordMap {
            images: psi,
            anti: false,
        },
    )
}

/// Checks that `phi: P1 -> P2` and `psi: P2 -> P1` are mutually inverse on
/// generators (free reduction, and at the Weyl level) and that both send
/// relations to relations that hold under the canonical assignment.
pub fn check_iso_on_generators(
    group: &DoubleAffineWeyl,
    phi: &WordMap,
    psi: &WordMap,
    p1: &Presentation,
    p2: &Presentation,
) -> Result<Report> {
    let a1 = weyl_assignment(group, p1)?;
    let a2 = weyl_assignment(group, p2)?;
    let mut rep = Report::new("iso-on-generators").for_type(&group.data.type_id);
    let mut composite = |tag: &str,
                         first: &WordMap,
                         second: &WordMap,
                         p: &Presentation,
                         a: &Assignment<DAWElement>| {
        for g in &p.generators {
            let img = first.apply(&Word::gen(g)).and_then(|w| second.apply(&w));
            let c = match img {
                Ok(w) => {
                    let weyl_ok = eval_word(group, a, &w)
                        .map(|e| Some(&e) == a.get(g))
                        .unwrap_or(false);
                    let free_ok = w == Word::gen(g);
                    Check::from_bool(
                        format!("{tag}({g})"),
                        "composite is the identity on generators",
                        weyl_ok && free_ok,
                    )
                    .with_detail(format!("{w}"))
                }
                Err(e) => Check::new(format!("{tag}({g})"), "composite is defined", Status::Fail)
                    .with_detail(e.to_string()),
            };
            rep.push(c);
        }
    };
    composite("psi.phi", phi, psi, p1, &a1);
    composite("phi.psi", psi, phi, p2, &a2);
    for (name, f, src, dst_a) in [("phi", phi, p1, &a2), ("psi", psi, p2, &a1)] {
        for r in &src.relations {
            let ok = f
                .apply(&r.lhs)
                .and_then(|l| Ok((l, f.apply(&r.rhs)?)))
                .and_then(|(l, rr)| {
                    Ok(eval_word(group, dst_a, &l)? == eval_word(group, dst_a, &rr)?)
                });
            rep.push(Check::from_bool(
                format!("{name}[{}]", r.tag),
                "image of a relation holds",
                ok.unwrap_or(false),
            ));
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_system::load_catalog;

    #[test]
    fn finite_coxeter_a2() {
        let d = load_catalog("A2~1").unwrap();
        let p = presentation_of(Kind::FiniteCoxeter, &d, 0).unwrap();
        let text: Vec<String> = p
            .relations
            .iter()
            .map(|r| format!("{} = {}", r.lhs, r.rhs))
            .collect();
        assert_eq!(text, vec!["s1 s1 = 1", "s2 s2 = 1", "s1 s2 s1 = s2 s1 s2"]);
    }

    #[test]
    fn triple_family_size() {
        let d = load_catalog("A2~1").unwrap();
        let p = presentation_of(Kind::Triple, &d, 2).unwrap();
        let count = p
            .relations
            .iter()
            .filter(|r| r.tag.starts_with("single-lace"))
            .count();
        assert_eq!(count, 5 * 5);
        assert!(p.relations.iter().all(|r| !r.tag.starts_with("ellbraid")));
        let d = load_catalog("A4~2").unwrap();
        let p = presentation_of(Kind::Daw, &d, 0).unwrap();
        assert!(p.relation("wellbraid").is_some());
    }

    #[test]
    fn text_round_trip() {
        let d = load_catalog("A4~2").unwrap();
        for kind in Kind::ALL {
            let p = presentation_of(kind, &d, 1).unwrap();
            let back = Presentation::from_text(&p.to_text()).unwrap();
            assert_eq!(back.relations, p.relations, "{kind}");
            assert_eq!(back.generators, p.generators);
            let json = serde_json::to_string(&p).unwrap();
            let back: Presentation = serde_json::from_str(&json).unwrap();
            assert_eq!(back, p);
        }
    }

    #[test]
    fn deterministic() {
        let d = load_catalog("D4~1").unwrap();
        for kind in Kind::ALL {
            assert_eq!(
                presentation_of(kind, &d, 2).unwrap(),
                presentation_of(kind, &d, 2).unwrap()
            );
        }
    }

    #[test]
    fn daw_conformance_a2() {
        let g = DoubleAffineWeyl::new(load_catalog("A2~1").unwrap());
        let p = presentation_of(Kind::Daw, &g.data, 0).unwrap();
        let r = verify_canonical(&g, &p, 2).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn wrong_assignment_fails_with_witness() {
        let g = DoubleAffineWeyl::new(load_catalog("A2~1").unwrap());
        let p = presentation_of(Kind::Daw, &g.data, 0).unwrap();
        let mut a = weyl_assignment(&g, &p).unwrap();
        a.insert(
            "s1".into(),
            g.lambda(&crate::root_system::LatticeVector::simple(2, 1)),
        );
        let r = verify(&p, &g, &a, 1);
        let c = r.checks.iter().find(|c| c.id == "order(s1)").unwrap();
        assert_eq!(c.status, Status::Fail);
        assert!(c.witness.is_some());
    }

    #[test]
    fn word_map_apply() {
        let a = WordMap::from_pairs(
            &[("T01", "T02"), ("T02", "T02^-1 T01 T02"), ("T03", "T03")],
            false,
        )
        .unwrap();
        assert_eq!(
            a.apply(&Word::parse("T01 T03").unwrap()).unwrap(),
            Word::parse("T02 T03").unwrap()
        );
        let e =
            WordMap::from_pairs(&[("T01", "T03"), ("T02", "T02"), ("T03", "T01")], true).unwrap();
        assert_eq!(
            e.apply(&Word::parse("T01 T02").unwrap()).unwrap(),
            Word::parse("T02 T03").unwrap()
        );
        assert!(matches!(
            e.apply(&Word::gen("T9")),
            Err(Error::UnknownGenerator(_))
        ));
    }
}
