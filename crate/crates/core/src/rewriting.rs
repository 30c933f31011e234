//! Word rewriting modulo the relations of a presentation: a bounded
//! bidirectional search that produces replayable derivation traces, the
//! replay checker, and the compiler for hand-written equation chains.
//!
//! Rules are identified by strings so traces stay readable:
//!
//! * `free(x)` / `free(x^-1)` — the trivial relation `x x^-1 = 1`;
//! * `<tag>` — a relation of the presentation, `lhs -> rhs`;
//! * `lemma:<name>` — a previously verified equation from the library;
//! * `<base>@<s><r>:<k>` — a cyclic cut of the relator `lhs rhs^-1` of any
//!   of the above: rotate `R` (`s = +`) or `R^-1` (`s = -`) left by `r`
//!   and replace its first `k` letters `u` by the inverse of the rest.
//!
//! A step applies its rule `forward` (left side to right side) or
//! `backward` at a letter position.

use crate::error::{Error, Result};
use crate::presentations::{presentation_of, Kind, Presentation};
use crate::word::{Letter, Word};
use serde::{Deserialize, Serialize};
use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::fmt;

/// Freely reduces a word.
pub fn free_reduce(w: &Word) -> Word {
    w.free_reduce()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub step: usize,
    #[serde(rename = "ruleId")]
    pub rule_id: String,
    pub position: usize,
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationTrace {
    pub start: Word,
    pub steps: Vec<Step>,
    pub end: Word,
}

#[derive(Debug, Serialize, Deserialize)]
struct TraceHeader {
    start: Word,
    end: Word,
    steps: usize,
}

impl DerivationTrace {
    pub fn trivial(w: Word) -> Self {
        DerivationTrace {
            start: w.clone(),
            steps: Vec::new(),
            end: w,
        }
    }

    /// JSON lines: a header `{start, end, steps}` followed by one step per line.
    pub fn to_json_lines(&self) -> String {
        let header = TraceHeader {
            start: self.start.clone(),
            end: self.end.clone(),
            steps: self.steps.len(),
        };
        let mut out = serde_json::to_string(&header).expect("header serializes");
        out.push('\n');
        for s in &self.steps {
            out.push_str(&serde_json::to_string(s).expect("step serializes"));
            out.push('\n');
        }
        out
    }

    pub fn from_json_lines(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let head = lines
            .next()
            .ok_or_else(|| Error::Parse("empty trace".into()))?;
        let header: TraceHeader =
            serde_json::from_str(head).map_err(|e| Error::Parse(e.to_string()))?;
        let steps = lines
            .map(|l| serde_json::from_str::<Step>(l).map_err(|e| Error::Parse(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        if steps.len() != header.steps {
            return Err(Error::Parse(format!(
                "trace announces {} steps, has {}",
                header.steps,
                steps.len()
            )));
        }
        Ok(DerivationTrace {
            start: header.start,
            steps,
            end: header.end,
        })
    }

    fn renumber(&mut self) {
        for (i, s) in self.steps.iter_mut().enumerate() {
            s.step = i;
        }
    }

    /// `self` followed by `next` (which must start where `self` ends).
    pub fn then(mut self, next: DerivationTrace) -> Self {
        debug_assert_eq!(self.end, next.start);
        self.steps.extend(next.steps);
        self.end = next.end;
        self.renumber();
        self
    }
}

/// An equation proved earlier, usable as a rule `lemma:<name>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma {
    pub name: String,
    pub lhs: Word,
    pub rhs: Word,
    pub uses: Vec<String>,
    pub trace: DerivationTrace,
}

#[derive(Debug, Clone, Default)]
pub struct LemmaLibrary {
    lemmas: BTreeMap<String, Lemma>,
}

impl LemmaLibrary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Option<&Lemma> {
        self.lemmas.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &String> {
        self.lemmas.keys()
    }

    /// Adds a lemma after replaying its trace with only the lemmas it declares.
    pub fn register(&mut self, p: &Presentation, lemma: Lemma) -> Result<()> {
        if self.lemmas.contains_key(&lemma.name) {
            return Err(Error::Parse(format!(
                "lemma {} registered twice",
                lemma.name
            )));
        }
        for u in &lemma.uses {
            if !self.lemmas.contains_key(u) {
                return Err(Error::Parse(format!(
                    "lemma {} uses unknown lemma {u}",
                    lemma.name
                )));
            }
        }
        if lemma.trace.start != lemma.lhs || lemma.trace.end != lemma.rhs {
            return Err(Error::Parse(format!(
                "trace of {} does not prove its statement",
                lemma.name
            )));
        }
        let scoped = self.restricted(&lemma.uses);
        verify_derivation(p, &lemma.trace, &scoped)?;
        self.lemmas.insert(lemma.name.clone(), lemma);
        self.check_acyclic()
    }

    fn restricted(&self, names: &[String]) -> LemmaLibrary {
        let mut out = LemmaLibrary::new();
        for n in names {
            if let Some(l) = self.lemmas.get(n) {
                out.lemmas.insert(n.clone(), l.clone());
            }
        }
        out
    }

    /// Lemma references must form a directed acyclic graph.
    pub fn check_acyclic(&self) -> Result<()> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Open,
            Done,
        }
        fn visit(lib: &LemmaLibrary, n: &str, marks: &mut HashMap<String, Mark>) -> Result<()> {
            match marks.get(n) {
                Some(Mark::Done) => return Ok(()),
                Some(Mark::Open) => {
                    return Err(Error::Parse(format!("cyclic lemma reference through {n}")))
                }
                None => {}
            }
            marks.insert(n.to_string(), Mark::Open);
            if let Some(l) = lib.lemmas.get(n) {
                for u in &l.uses {
                    visit(lib, u, marks)?;
                }
            }
            marks.insert(n.to_string(), Mark::Done);
            Ok(())
        }
        let mut marks = HashMap::new();
        for n in self.lemmas.keys() {
            visit(self, n, &mut marks)?;
        }
        Ok(())
    }
}

/// Resolves a rule id to the pair (left side, right side).
pub fn resolve_rule(p: &Presentation, lib: &LemmaLibrary, id: &str) -> Result<(Word, Word)> {
    if let Some((base, cut)) = id.rsplit_once('@') {
        let (lhs, rhs) = resolve_base(p, lib, base)?;
        let bad = || Error::Parse(format!("bad cut specification in rule {id:?}"));
        if cut.is_empty() || !cut.is_char_boundary(1) {
            return Err(bad());
        }
        let (sign, rest) = cut.split_at(1);
        let (rot, k) = rest.split_once(':').ok_or_else(bad)?;
        let rot: usize = rot.parse().map_err(|_| bad())?;
        let k: usize = k.parse().map_err(|_| bad())?;
        let r = relator(&lhs, &rhs);
        let r = match sign {
            "+" => r,
            "-" => r.inverse(),
            _ => return Err(bad()),
        };
        if r.is_empty() || rot >= r.len() || k == 0 || k > r.len() {
            return Err(bad());
        }
        let mut letters = r.0[rot..].to_vec();
        letters.extend_from_slice(&r.0[..rot]);
        let u = Word(letters[..k].to_vec());
        let v = Word(letters[k..].to_vec());
        return Ok((u, v.inverse()));
    }
    resolve_base(p, lib, id)
}

fn resolve_base(p: &Presentation, lib: &LemmaLibrary, id: &str) -> Result<(Word, Word)> {
    if let Some(inner) = id.strip_prefix("free(").and_then(|s| s.strip_suffix(')')) {
        let w = Word::parse(inner)?;
        if w.len() != 1 || !p.has_generator(&w.0[0].gen) {
            return Err(Error::UnknownGenerator(inner.to_string()));
        }
        let l = w.0[0].clone();
        return Ok((Word(vec![l.clone(), l.inverse()]), Word::empty()));
    }
    if let Some(name) = id.strip_prefix("lemma:") {
        let l = lib
            .get(name)
            .ok_or_else(|| Error::Parse(format!("unknown lemma {name:?}")))?;
        return Ok((l.lhs.clone(), l.rhs.clone()));
    }
    p.relation(id)
        .map(|r| (r.lhs.clone(), r.rhs.clone()))
        .ok_or_else(|| Error::Parse(format!("unknown rule {id:?}")))
}

/// `lhs rhs^-1`, freely and cyclically reduced.
fn relator(lhs: &Word, rhs: &Word) -> Word {
    let mut r = lhs.concat(&rhs.inverse()).free_reduce().0;
    while r.len() >= 2 && r[0].gen == r[r.len() - 1].gen && r[0].exp == -r[r.len() - 1].exp {
        r.pop();
        r.remove(0);
    }
    Word(r)
}

fn apply_at(word: &Word, from: &Word, to: &Word, pos: usize) -> Option<Word> {
    let end = pos.checked_add(from.len())?;
    if end > word.len() || word.0[pos..end] != from.0[..] {
        return None;
    }
    let mut out = word.0[..pos].to_vec();
    out.extend_from_slice(&to.0);
    out.extend_from_slice(&word.0[end..]);
    Some(Word(out))
}

/// Replays a trace step by step; fails with the index of the first bad step.
pub fn verify_derivation(
    p: &Presentation,
    trace: &DerivationTrace,
    lib: &LemmaLibrary,
) -> Result<bool> {
    lib.check_acyclic()?;
    let check_alphabet = |w: &Word| -> Result<()> {
        for l in w.letters() {
            if !p.has_generator(&l.gen) {
                return Err(Error::UnknownGenerator(l.gen.clone()));
            }
        }
        Ok(())
    };
    check_alphabet(&trace.start)?;
    check_alphabet(&trace.end)?;
    let mut w = trace.start.clone();
    for (index, s) in trace.steps.iter().enumerate() {
        let (lhs, rhs) = resolve_rule(p, lib, &s.rule_id).map_err(|e| Error::BadStep {
            index,
            reason: e.to_string(),
        })?;
        let (from, to) = match s.direction {
            Direction::Forward => (lhs, rhs),
            Direction::Backward => (rhs, lhs),
        };
        w = apply_at(&w, &from, &to, s.position).ok_or_else(|| Error::BadStep {
            index,
            reason: format!(
                "rule {} ({from} -> {to}) does not match {w} at {}",
                s.rule_id, s.position
            ),
        })?;
    }
    if w != trace.end {
        return Err(Error::BadStep {
            index: trace.steps.len(),
            reason: format!("replay ends at {w}, trace claims {}", trace.end),
        });
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_len: usize,
    pub max_nodes: usize,
    /// Cyclic cuts `u -> v` are used only when `|v| <= |u| + slack`.
    pub slack: usize,
}

impl Budget {
    pub const DEFAULT_MAX_NODES: usize = 1_000_000;
    pub const DEFAULT_SLACK: usize = 2;

    /// Length cap of the longer input plus 8.
    pub fn default_for(w1: &Word, w2: &Word) -> Self {
        Budget {
            max_len: w1.len().max(w2.len()) + 8,
            max_nodes: Self::DEFAULT_MAX_NODES,
            slack: Self::DEFAULT_SLACK,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: usize,
    pub rules: usize,
    pub budget: Budget,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum Outcome {
    Proved {
        trace: DerivationTrace,
        stats: SearchStats,
    },
    Unknown {
        stats: SearchStats,
    },
}

impl Outcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, Outcome::Proved { .. })
    }

    pub fn trace(&self) -> Option<&DerivationTrace> {
        match self {
            Outcome::Proved { trace, .. } => Some(trace),
            Outcome::Unknown { .. } => None,
        }
    }
}

struct SearchRule {
    id: String,
    from: Vec<u32>,
    to: Vec<u32>,
}

/// Rules (all forward) over a presentation's alphabet, letters encoded as
/// `2 * generator + (1 if inverse)`.
pub struct RewriteSystem {
    alphabet: Vec<String>,
    index: HashMap<String, u32>,
    rules: Vec<SearchRule>,
    by_first: HashMap<u32, Vec<usize>>,
}

impl fmt::Debug for RewriteSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RewriteSystem")
            .field("alphabet", &self.alphabet)
            .field("rules", &self.rules.len())
            .finish()
    }
}

impl RewriteSystem {
    /// All relations of `p` plus the named lemmas.
    pub fn new(p: &Presentation, lib: &LemmaLibrary, slack: usize) -> Result<Self> {
        let mut bases: Vec<String> = p.relations.iter().map(|r| r.tag.clone()).collect();
        bases.extend(lib.names().map(|n| format!("lemma:{n}")));
        Self::with_rules(p, lib, &bases, slack)
    }

    /// Only the named base rules (relation tags or `lemma:<name>`), plus free cancellation.
    pub fn with_rules(
        p: &Presentation,
        lib: &LemmaLibrary,
        bases: &[String],
        slack: usize,
    ) -> Result<Self> {
        let alphabet = p.generators.clone();
        let index: HashMap<String, u32> = alphabet
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), i as u32))
            .collect();
        let mut sys = RewriteSystem {
            alphabet,
            index,
            rules: Vec::new(),
            by_first: HashMap::new(),
        };
        let mut seen: HashMap<(Vec<u32>, Vec<u32>), ()> = HashMap::new();
        for g in p.generators.clone() {
            for exp in [1i8, -1] {
                let l = Letter::new(g.clone(), exp);
                let id = format!("free({l})");
                let from = sys.encode(&Word(vec![l.clone(), l.inverse()]))?;
                seen.insert((from.clone(), Vec::new()), ());
                sys.rules.push(SearchRule {
                    id,
                    from,
                    to: Vec::new(),
                });
            }
        }
        for base in bases {
            let (lhs, rhs) = resolve_base(p, lib, base)?;
            let r = relator(&lhs, &rhs);
            if r.is_empty() {
                continue;
            }
            for (sign, rr) in [('+', r.clone()), ('-', r.inverse())] {
                let n = rr.len();
                for rot in 0..n {
                    let mut letters = rr.0[rot..].to_vec();
                    letters.extend_from_slice(&rr.0[..rot]);
                    for k in 1..=n {
                        if n - k > k + slack {
                            continue;
                        }
                        let u = Word(letters[..k].to_vec());
                        let v = Word(letters[k..].to_vec()).inverse();
                        let key = (sys.encode(&u)?, sys.encode(&v)?);
                        if seen.contains_key(&key) {
                            continue;
                        }
                        seen.insert(key.clone(), ());
                        sys.rules.push(SearchRule {
                            id: format!("{base}@{sign}{rot}:{k}"),
                            from: key.0,
                            to: key.1,
                        });
                    }
                }
            }
        }
        for (i, r) in sys.rules.iter().enumerate() {
            sys.by_first.entry(r.from[0]).or_default().push(i);
        }
        Ok(sys)
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    fn encode(&self, w: &Word) -> Result<Vec<u32>> {
        w.letters()
            .iter()
            .map(|l| {
                let g = self
                    .index
                    .get(&l.gen)
                    .ok_or_else(|| Error::UnknownGenerator(l.gen.clone()))?;
                Ok(2 * g + u32::from(l.exp == -1))
            })
            .collect()
    }

    fn successors(
        &self,
        w: &[u32],
        max_len: usize,
        mut emit: impl FnMut(usize, usize, Vec<u32>) -> bool,
    ) -> bool {
        for pos in 0..w.len() {
            let Some(cands) = self.by_first.get(&w[pos]) else {
                continue;
            };
            for &ri in cands {
                let r = &self.rules[ri];
                let end = pos + r.from.len();
                if end > w.len() || w[pos..end] != r.from[..] {
                    continue;
                }
                let new_len = w.len() - r.from.len() + r.to.len();
                if new_len > max_len {
                    continue;
                }
                let mut out = Vec::with_capacity(new_len);
                out.extend_from_slice(&w[..pos]);
                out.extend_from_slice(&r.to);
                out.extend_from_slice(&w[end..]);
                if emit(ri, pos, out) {
                    return true;
                }
            }
        }
        false
    }

    /// Bidirectional best-first search (shorter words first, ties broken by
    /// discovery order, which follows rule order then position).
    pub fn equal_modulo(&self, w1: &Word, w2: &Word, budget: Budget) -> Result<Outcome> {
        let a = self.encode(w1)?;
        let b = self.encode(w2)?;
        let stats = |nodes| SearchStats {
            nodes,
            rules: self.rules.len(),
            budget,
        };
        if a == b {
            return Ok(Outcome::Proved {
                trace: DerivationTrace::trivial(w1.clone()),
                stats: stats(1),
            });
        }
        let mut sides = [Side::new(a), Side::new(b)];
        let mut turn = 0;
        loop {
            let total = sides[0].nodes.len() + sides[1].nodes.len();
            if total > budget.max_nodes {
                return Ok(Outcome::Unknown {
                    stats: stats(total),
                });
            }
            if sides[0].heap.is_empty() && sides[1].heap.is_empty() {
                return Ok(Outcome::Unknown {
                    stats: stats(total),
                });
            }
            if sides[turn].heap.is_empty() {
                turn = 1 - turn;
            }
            let Reverse((_, idx)) = sides[turn].heap.pop().unwrap();
            let word = sides[turn].nodes[idx].word.clone();
            let (me, other) = if turn == 0 {
                let (x, y) = sides.split_at_mut(1);
                (&mut x[0], &y[0])
            } else {
                let (x, y) = sides.split_at_mut(1);
                (&mut y[0], &x[0])
            };
            let mut meet = None;
            self.successors(&word, budget.max_len, |ri, pos, out| {
                if me.seen.contains_key(&out) {
                    return false;
                }
                let new_idx = me.nodes.len();
                me.seen.insert(out.clone(), new_idx);
                me.heap.push(Reverse((out.len(), new_idx)));
                let hit = other.seen.get(&out).copied();
                me.nodes.push(Node {
                    word: out,
                    parent: Some((idx, ri, pos)),
                });
                if let Some(j) = hit {
                    meet = Some((new_idx, j));
                    return true;
                }
                false
            });
            if let Some((i, j)) = meet {
                let (fi, bj) = if turn == 0 { (i, j) } else { (j, i) };
                let trace = self.join(w1, w2, &sides[0], fi, &sides[1], bj);
                let total = sides[0].nodes.len() + sides[1].nodes.len();
                return Ok(Outcome::Proved {
                    trace,
                    stats: stats(total),
                });
            }
            turn = 1 - turn;
        }
    }

    fn join(
        &self,
        w1: &Word,
        w2: &Word,
        fwd: &Side,
        fi: usize,
        bwd: &Side,
        bj: usize,
    ) -> DerivationTrace {
        let mut steps = Vec::new();
        let mut cur = fi;
        while let Some((parent, ri, pos)) = fwd.nodes[cur].parent {
            steps.push(Step {
                step: 0,
                rule_id: self.rules[ri].id.clone(),
                position: pos,
                direction: Direction::Forward,
            });
            cur = parent;
        }
        steps.reverse();
        let mut cur = bj;
        while let Some((parent, ri, pos)) = bwd.nodes[cur].parent {
            steps.push(Step {
                step: 0,
                rule_id: self.rules[ri].id.clone(),
                position: pos,
                direction: Direction::Backward,
            });
            cur = parent;
        }
        let mut t = DerivationTrace {
            start: w1.clone(),
            steps,
            end: w2.clone(),
        };
        t.renumber();
        t
    }
}

struct Node {
    word: Vec<u32>,
    parent: Option<(usize, usize, usize)>,
}

struct Side {
    nodes: Vec<Node>,
    seen: HashMap<Vec<u32>, usize>,
    heap: BinaryHeap<Reverse<(usize, usize)>>,
}

impl Side {
    fn new(start: Vec<u32>) -> Self {
        let mut seen = HashMap::new();
        seen.insert(start.clone(), 0);
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((start.len(), 0)));
        Side {
            nodes: vec![Node {
                word: start,
                parent: None,
            }],
            seen,
            heap,
        }
    }
}

/// `equal_modulo` over all relations of `p` and the lemmas of `lib`.
pub fn equal_modulo(
    p: &Presentation,
    lib: &LemmaLibrary,
    w1: &Word,
    w2: &Word,
    budget: Budget,
) -> Result<Outcome> {
    let w1 = p.expand(w1)?;
    let w2 = p.expand(w2)?;
    RewriteSystem::new(p, lib, budget.slack)?.equal_modulo(&w1, &w2, budget)
}

/// Free reduction as explicit cancellation steps (leftmost pair first).
pub fn free_reduction_trace(w: &Word) -> DerivationTrace {
    let mut cur = w.clone();
    let mut steps = Vec::new();
    'outer: loop {
        for i in 0..cur.len().saturating_sub(1) {
            let (x, y) = (&cur.0[i], &cur.0[i + 1]);
            if x.gen == y.gen && x.exp == -y.exp {
                steps.push(Step {
                    step: steps.len(),
                    rule_id: format!("free({x})"),
                    position: i,
                    direction: Direction::Forward,
                });
                cur.0.drain(i..i + 2);
                continue 'outer;
            }
        }
        break;
    }
    DerivationTrace {
        start: w.clone(),
        steps,
        end: cur,
    }
}

/// Derivation between two freely equal words.
pub fn free_equality_trace(a: &Word, b: &Word) -> Option<DerivationTrace> {
    let ta = free_reduction_trace(a);
    let tb = free_reduction_trace(b);
    if ta.end != tb.end {
        return None;
    }
    let mut steps = ta.steps;
    for s in tb.steps.into_iter().rev() {
        steps.push(Step {
            direction: Direction::Backward,
            ..s
        });
    }
    let mut t = DerivationTrace {
        start: a.clone(),
        steps,
        end: b.clone(),
    };
    t.renumber();
    Some(t)
}

/// One `= word  by rules` line of a chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainLink {
    pub word: Word,
    pub by: Vec<String>,
    pub line: usize,
}

/// A displayed equation chain together with the presentation it lives in.
#[derive(Debug, Clone)]
pub struct Chain {
    pub name: String,
    pub presentation: Presentation,
    pub uses: Vec<String>,
    pub start: Word,
    pub links: Vec<ChainLink>,
}

impl Chain {
    /// Parses the chain format:
    ///
    /// ```text
    /// name: ee
    /// presentation: triple A4~2 0
    /// drop: ellbraid(T01,T03)
    /// uses: other-lemma
    /// macro @A = T1 T01
    /// start: T1 T01 T02 T1 T02
    /// = T1 T01 T1^-1 T1 T02 T1 T02   by free
    /// ```
    ///
    /// Without a `presentation:` line, `generators:` and relation lines
    /// define the presentation inline.
    pub fn parse(text: &str) -> Result<Chain> {
        let mut name = None;
        let mut base: Option<Presentation> = None;
        let mut inline = String::new();
        let mut drops: Vec<String> = Vec::new();
        let mut uses = Vec::new();
        let mut macros: Vec<(String, String)> = Vec::new();
        let mut start = None;
        let mut links_raw: Vec<(String, usize)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('=') {
                links_raw.push((rest.trim().to_string(), lineno + 1));
                continue;
            }
            if let Some(rest) = line.strip_prefix("macro ") {
                let (n, body) = rest
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("bad macro {line:?}")))?;
                macros.push((n.trim().to_string(), body.trim().to_string()));
                continue;
            }
            match line.split_once(':') {
                Some(("name", v)) => name = Some(v.trim().to_string()),
                Some(("presentation", v)) => {
                    let parts: Vec<&str> = v.split_whitespace().collect();
                    if parts.len() < 2 {
                        return Err(Error::Parse(format!(
                            "presentation needs a kind and a type: {line:?}"
                        )));
                    }
                    let kind: Kind = parts[0].parse()?;
                    let data = crate::root_system::load_catalog_gated(parts[1])?;
                    let kb = parts
                        .get(2)
                        .map_or(Ok(3), |s| s.parse())
                        .map_err(|_| Error::Parse("bad kbound".into()))?;
                    base = Some(presentation_of(kind, &data, kb)?);
                }
                Some(("drop", v)) => drops.extend(v.split_whitespace().map(String::from)),
                Some(("uses", v)) => uses.extend(v.split_whitespace().map(String::from)),
                Some(("start", v)) => start = Some((v.trim().to_string(), lineno + 1)),
                _ => {
                    inline.push_str(line);
                    inline.push('\n');
                }
            }
        }
        let mut p = match base {
            Some(p) => {
                if !inline.is_empty() {
                    return Err(Error::Parse(
                        "inline relations given together with a presentation line".into(),
                    ));
                }
                p
            }
            None => Presentation::from_text(&inline)?,
        };
        for d in &drops {
            let before = p.relations.len();
            p.relations.retain(|r| &r.tag != d);
            if p.relations.len() == before {
                return Err(Error::Parse(format!("cannot drop unknown relation {d:?}")));
            }
        }
        for (n, body) in macros {
            p.add_macro(&n, &body)?;
        }
        let (start, _) = start.ok_or_else(|| Error::Parse("chain without start".into()))?;
        let start = p.parse_word(&start)?;
        let mut links = Vec::new();
        for (raw, line) in links_raw {
            let (w, by) = match raw.split_once(" by ") {
                Some((w, by)) => (w, by.split_whitespace().map(String::from).collect()),
                None => (raw.as_str(), Vec::new()),
            };
            links.push(ChainLink {
                word: p.parse_word(w.trim())?,
                by,
                line,
            });
        }
        Ok(Chain {
            name: name.ok_or_else(|| Error::Parse("chain without name".into()))?,
            presentation: p,
            uses,
            start,
            links,
        })
    }

    pub fn end(&self) -> &Word {
        self.links.last().map_or(&self.start, |l| &l.word)
    }

    /// Turns every link into explicit steps: `by free` links by free
    /// reduction, others by a bounded search restricted to the named rules.
    pub fn compile(&self, lib: &LemmaLibrary) -> Result<DerivationTrace> {
        let p = &self.presentation;
        let mut trace = DerivationTrace::trivial(self.start.clone());
        let mut prev = self.start.clone();
        for (index, link) in self.links.iter().enumerate() {
            let bad = |reason: String| Error::BadStep {
                index,
                reason: format!("line {}: {reason}", link.line),
            };
            let piece = if link.by.iter().all(|b| b == "free") {
                free_equality_trace(&prev, &link.word)
                    .ok_or_else(|| bad("words are not freely equal".into()))?
            } else {
                let mut bases = Vec::new();
                for b in &link.by {
                    if b == "free" {
                        continue;
                    }
                    if let Some(n) = b.strip_prefix("lemma:") {
                        if !self.uses.iter().any(|u| u == n) {
                            return Err(bad(format!("lemma {n} is not declared in uses")));
                        }
                    }
                    bases.push(b.clone());
                }
                if link.by.is_empty() {
                    bases = p.relations.iter().map(|r| r.tag.clone()).collect();
                    bases.extend(self.uses.iter().map(|u| format!("lemma:{u}")));
                }
                let mut found = None;
                for slack in [2, 4, 8] {
                    let sys = RewriteSystem::with_rules(p, lib, &bases, slack)?;
                    let budget = Budget {
                        max_len: prev.len().max(link.word.len()) + 8,
                        max_nodes: 200_000,
                        slack,
                    };
                    if let Outcome::Proved { trace, .. } =
                        sys.equal_modulo(&prev, &link.word, budget)?
                    {
                        found = Some(trace);
                        break;
                    }
                }
                found.ok_or_else(|| {
                    bad(format!("no derivation of {} from {prev} found", link.word))
                })?
            };
            trace = trace.then(piece);
            prev = link.word.clone();
        }
        Ok(trace)
    }

    /// Compiles, replays and returns the resulting lemma.
    pub fn prove(&self, lib: &LemmaLibrary) -> Result<Lemma> {
        let trace = self.compile(lib)?;
        let lemma = Lemma {
            name: self.name.clone(),
            lhs: self.start.clone(),
            rhs: self.end().clone(),
            uses: self.uses.clone(),
            trace,
        };
        let mut scoped = LemmaLibrary::new();
        for u in &self.uses {
            let l = lib.get(u).ok_or_else(|| {
                Error::Parse(format!("chain {} uses unknown lemma {u}", self.name))
            })?;
            scoped.lemmas.insert(u.clone(), l.clone());
        }
        verify_derivation(&self.presentation, &lemma.trace, &scoped)?;
        Ok(lemma)
    }
}

/// The shipped equation chains, in dependency order.
pub const SHIPPED_CHAINS: &[(&str, &str)] = &[
    (
        "trick-forward",
        include_str!("../fixtures/derivations/trick-forward.chain"),
    ),
    (
        "trick-backward",
        include_str!("../fixtures/derivations/trick-backward.chain"),
    ),
    (
        "trick-furthermore",
        include_str!("../fixtures/derivations/trick-furthermore.chain"),
    ),
    ("ee", include_str!("../fixtures/derivations/ee.chain")),
    ("ee01", include_str!("../fixtures/derivations/ee01.chain")),
    (
        "braidautom2",
        include_str!("../fixtures/derivations/braidautom2.chain"),
    ),
    (
        "ellbraidautom",
        include_str!("../fixtures/derivations/ellbraidautom.chain"),
    ),
    (
        "braid02-single",
        include_str!("../fixtures/derivations/braid02-single.chain"),
    ),
    (
        "braid02-double",
        include_str!("../fixtures/derivations/braid02-double.chain"),
    ),
    (
        "commuting",
        include_str!("../fixtures/derivations/commuting.chain"),
    ),
    (
        "magic1",
        include_str!("../fixtures/derivations/magic1.chain"),
    ),
    (
        "reducel2",
        include_str!("../fixtures/derivations/reducel2.chain"),
    ),
    (
        "lemma2-double",
        include_str!("../fixtures/derivations/lemma2-double.chain"),
    ),
    (
        "lemma2-single",
        include_str!("../fixtures/derivations/lemma2-single.chain"),
    ),
];

/// Compiled traces of the shipped chains, as checked in.
pub const SHIPPED_TRACES: &[(&str, &str)] = &[
    (
        "trick-forward",
        include_str!("../fixtures/derivations/trick-forward.trace.jsonl"),
    ),
    (
        "trick-backward",
        include_str!("../fixtures/derivations/trick-backward.trace.jsonl"),
    ),
    (
        "trick-furthermore",
        include_str!("../fixtures/derivations/trick-furthermore.trace.jsonl"),
    ),
    ("ee", include_str!("../fixtures/derivations/ee.trace.jsonl")),
    (
        "ee01",
        include_str!("../fixtures/derivations/ee01.trace.jsonl"),
    ),
    (
        "braidautom2",
        include_str!("../fixtures/derivations/braidautom2.trace.jsonl"),
    ),
    (
        "ellbraidautom",
        include_str!("../fixtures/derivations/ellbraidautom.trace.jsonl"),
    ),
    (
        "braid02-single",
        include_str!("../fixtures/derivations/braid02-single.trace.jsonl"),
    ),
    (
        "braid02-double",
        include_str!("../fixtures/derivations/braid02-double.trace.jsonl"),
    ),
    (
        "commuting",
        include_str!("../fixtures/derivations/commuting.trace.jsonl"),
    ),
    (
        "magic1",
        include_str!("../fixtures/derivations/magic1.trace.jsonl"),
    ),
    (
        "reducel2",
        include_str!("../fixtures/derivations/reducel2.trace.jsonl"),
    ),
    (
        "lemma2-double",
        include_str!("../fixtures/derivations/lemma2-double.trace.jsonl"),
    ),
    (
        "lemma2-single",
        include_str!("../fixtures/derivations/lemma2-single.trace.jsonl"),
    ),
];

/// A compiled shipped chain.
#[derive(Debug, Clone)]
pub struct ProvedChain {
    pub chain: Chain,
    pub lemma: Lemma,
}

/// Compiles and replays every shipped chain, registering each as a lemma.
/// Lemma names are global, so a chain may only use lemmas over the same alphabet.
pub fn prove_shipped_chains() -> Result<(LemmaLibrary, Vec<ProvedChain>)> {
    let mut lib = LemmaLibrary::new();
    let mut out = Vec::new();
    for (name, text) in SHIPPED_CHAINS {
        let chain = Chain::parse(text)?;
        if chain.name != *name {
            return Err(Error::Parse(format!(
                "fixture {name} declares name {}",
                chain.name
            )));
        }
        for u in &chain.uses {
            let l = lib
                .get(u)
                .ok_or_else(|| Error::Parse(format!("{name} uses unknown lemma {u}")))?;
            for w in [&l.lhs, &l.rhs] {
                if let Some(g) = w
                    .letters()
                    .iter()
                    .find(|x| !chain.presentation.has_generator(&x.gen))
                {
                    return Err(Error::UnknownGenerator(g.gen.clone()));
                }
            }
        }
        let lemma = chain.prove(&lib)?;
        lib.register(&chain.presentation, lemma.clone())?;
        out.push(ProvedChain { chain, lemma });
    }
    Ok((lib, out))
}

/// Replays every checked-in trace against its chain's presentation, with
/// the lemma library built from the chains.
pub fn replay_shipped_traces(lib: &LemmaLibrary) -> Vec<(String, Result<bool>)> {
    SHIPPED_TRACES
        .iter()
        .map(|(name, text)| {
            let res = (|| {
                let (_, chain_text) = SHIPPED_CHAINS
                    .iter()
                    .find(|(n, _)| n == name)
                    .ok_or_else(|| Error::Parse(format!("no chain for trace {name}")))?;
                let chain = Chain::parse(chain_text)?;
                let trace = DerivationTrace::from_json_lines(text)?;
                if trace.start != chain.start || &trace.end != chain.end() {
                    return Err(Error::Parse(format!(
                        "trace {name} does not match its chain"
                    )));
                }
                verify_derivation(&chain.presentation, &trace, &lib.restricted(&chain.uses))
            })();
            (name.to_string(), res)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_system::load_catalog;

    fn abstract_braid() -> Presentation {
        Presentation::from_text("generators: a b\nab: a b a = b a b\n").unwrap()
    }

    #[test]
    fn identical_words_prove_trivially() {
        let p = abstract_braid();
        let w = Word::parse("a b").unwrap();
        let out = equal_modulo(
            &p,
            &LemmaLibrary::new(),
            &w,
            &w,
            Budget::default_for(&w, &w),
        )
        .unwrap();
        assert_eq!(out.trace().unwrap().steps.len(), 0);
    }

    #[test]
    fn rank_two_braid() {
        let d = load_catalog("A2~1").unwrap();
        let p = presentation_of(Kind::AffineArtin, &d, 0).unwrap();
        let (w1, w2) = (
            Word::parse("T1 T0 T1").unwrap(),
            Word::parse("T0 T1 T0").unwrap(),
        );
        let out = equal_modulo(
            &p,
            &LemmaLibrary::new(),
            &w1,
            &w2,
            Budget::default_for(&w1, &w2),
        )
        .unwrap();
        let t = out.trace().unwrap();
        assert_eq!(t.steps.len(), 1);
        assert!(verify_derivation(&p, t, &LemmaLibrary::new()).unwrap());
    }

    #[test]
    fn bad_step_is_reported_with_index() {
        let p = abstract_braid();
        let mut t = free_equality_trace(
            &Word::parse("a a^-1 b").unwrap(),
            &Word::parse("b").unwrap(),
        )
        .unwrap();
        t.steps[0].position = 1;
        match verify_derivation(&p, &t, &LemmaLibrary::new()) {
            Err(Error::BadStep { index, .. }) => assert_eq!(index, 0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn json_lines_round_trip() {
        let t = free_equality_trace(
            &Word::parse("a b b^-1").unwrap(),
            &Word::parse("a^-1 a a").unwrap(),
        )
        .unwrap();
        assert_eq!(
            DerivationTrace::from_json_lines(&t.to_json_lines()).unwrap(),
            t
        );
        assert!(verify_derivation(&abstract_braid(), &t, &LemmaLibrary::new()).unwrap());
    }

    #[test]
    fn unrelated_words_stay_unknown() {
        let p = Presentation::from_text("generators: a b\nc: a b = b a\n").unwrap();
        let (w1, w2) = (Word::parse("a").unwrap(), Word::parse("b").unwrap());
        let budget = Budget {
            max_len: 4,
            max_nodes: 2000,
            slack: 2,
        };
        assert!(!equal_modulo(&p, &LemmaLibrary::new(), &w1, &w2, budget)
            .unwrap()
            .is_proved());
    }

    #[test]
    fn ee_by_search() {
        let d = load_catalog("A4~2").unwrap();
        let p = presentation_of(Kind::Triple, &d, 0).unwrap();
        let (w1, w2) = (
            Word::parse("T1 T01 T02 T1 T02").unwrap(),
            Word::parse("T02 T1 T01 T02 T1").unwrap(),
        );
        let out = equal_modulo(
            &p,
            &LemmaLibrary::new(),
            &w1,
            &w2,
            Budget::default_for(&w1, &w2),
        )
        .unwrap();
        assert!(verify_derivation(&p, out.trace().unwrap(), &LemmaLibrary::new()).unwrap());
    }

    #[test]
    fn wrong_chain_link_is_rejected() {
        let text = "name: bad\ngenerators: a b\nab: a b a = b a b\nstart: a b\n= b a   by ab\n";
        let chain = Chain::parse(text).unwrap();
        assert!(matches!(
            chain.compile(&LemmaLibrary::new()),
            Err(Error::BadStep { index: 0, .. })
        ));
    }

    #[test]
    fn cyclic_lemma_references_are_rejected() {
        let p = abstract_braid();
        let w = Word::parse("a").unwrap();
        let mut lib = LemmaLibrary::new();
        for (name, uses) in [("x", "y"), ("y", "x")] {
            lib.lemmas.insert(
                name.into(),
                Lemma {
                    name: name.into(),
                    lhs: w.clone(),
                    rhs: w.clone(),
                    uses: vec![uses.into()],
                    trace: DerivationTrace::trivial(w.clone()),
                },
            );
        }
        assert!(lib.check_acyclic().is_err());
        assert!(verify_derivation(&p, &DerivationTrace::trivial(w), &lib).is_err());
    }
}
