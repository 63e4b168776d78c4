//! Families `c_ij` (i ≠ j in {1,2,3}) with `c_ij` a nonnegative term over the
//! generators of `A_ij`, embedded in the top presentation `(a, a′, b, c)`.
//!
//! No family satisfies all of
//!   (ii)  `a_i ≤ a_j ∨ c_ij` for {i,j} = {1,2} or {2,3},
//!   (iii) `c_ij ∧ c_ji = 0` for the same pairs,
//!   (iv)  `c12 ∧ c23 ≤ c13 ≤ c12 ∨ c23`,
//! where `≤` compares principal ideals, i.e. supports on the top cone. The
//! checker finds the first failing condition; the refutation pipeline
//! replays the argument through the cone lattices and ratio sets.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::ceva::{ceva_check, CevaInput, ChainBreak};
use crate::cones::{fmt_point, ratioset_to_region, AmbientCone, LinForm, Region};
use crate::error::{Error, Result};
use crate::lterm::{asymp, compile_support, multiplier_bound, LTerm, Presentation, SupportMode};
use crate::ratcore::{int, rat, ExtRat, Rat, RatioSet};

use super::{collapse_top, rat_is_zero};

/// The six index pairs in the order they are listed in candidate files.
pub const FAMILY_PAIRS: [(usize, usize); 6] = [(1, 2), (2, 1), (2, 3), (3, 2), (1, 3), (3, 1)];

fn home(i: usize, j: usize) -> String {
    format!("{}{}", i.min(j), i.max(j))
}

/// Generator standing for `a_i` in the top presentation.
fn unit_generator(i: usize) -> &'static str {
    ["a", "b", "c"][i - 1]
}

#[derive(Debug, Clone)]
pub struct CevianCandidate {
    terms: BTreeMap<(usize, usize), LTerm>,
}

impl CevianCandidate {
    /// Terms in the order `c12, c21, c23, c32, c13, c31`.
    pub fn new(terms: [LTerm; 6]) -> Result<Self> {
        let terms: BTreeMap<_, _> = FAMILY_PAIRS.iter().copied().zip(terms).collect();
        for (&(i, j), t) in &terms {
            let pres = Presentation::cube(&home(i, j))?;
            for v in t.vars() {
                if pres.index(&v).is_err() {
                    return Err(Error::validation(format!(
                        "c{i}{j} uses `{v}`, which is not a generator of A{}",
                        pres.name
                    )));
                }
            }
            let below = compile_support(&t.clone().neg(), &pres, SupportMode::Positive)?;
            if let Some(w) = below.witness()? {
                return Err(Error::validation(format!(
                    "c{i}{j} = {t} is negative at {}",
                    fmt_point(&w)
                )));
            }
        }
        Ok(CevianCandidate { terms })
    }

    pub fn from_strs(terms: [&str; 6]) -> Result<Self> {
        let parsed: Vec<LTerm> = terms.iter().map(|s| s.parse()).collect::<Result<_>>()?;
        CevianCandidate::new(parsed.try_into().expect("six terms"))
    }

    /// Reads `cij = term` lines for the six pairs; `#` starts a comment.
    pub fn parse(src: &str) -> Result<Self> {
        let mut found: BTreeMap<(usize, usize), LTerm> = BTreeMap::new();
        for (lineno, line) in src.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(lineno + 1, format!("expected `key = value`, got `{line}`")))?;
            let key = key.trim();
            if key == "kind" && value.trim() == "lemma43" {
                continue;
            }
            let pair = FAMILY_PAIRS
                .iter()
                .copied()
                .find(|(i, j)| key == format!("c{i}{j}"))
                .ok_or_else(|| Error::parse(lineno + 1, format!("unknown key `{key}`")))?;
            let t: LTerm = value
                .trim()
                .parse()
                .map_err(|e: Error| Error::parse(lineno + 1, e.to_string()))?;
            if found.insert(pair, t).is_some() {
                return Err(Error::parse(lineno + 1, format!("`{key}` given twice")));
            }
        }
        let mut terms = Vec::new();
        for (i, j) in FAMILY_PAIRS {
            terms.push(
                found
                    .remove(&(i, j))
                    .ok_or_else(|| Error::parse(0, format!("missing `c{i}{j}`")))?,
            );
        }
        CevianCandidate::new(terms.try_into().expect("six terms"))
    }

    pub fn term(&self, i: usize, j: usize) -> &LTerm {
        &self.terms[&(i, j)]
    }
}

impl fmt::Display for CevianCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, j) in FAMILY_PAIRS {
            writeln!(f, "c{i}{j} = {}", self.term(i, j))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    /// (ii) `a_i ≤ a_j ∨ c_ij`
    Split(usize, usize),
    /// (iii) `c_ij ∧ c_ji = 0`
    Disjoint(usize, usize),
    /// (iv), left half: `c12 ∧ c23 ≤ c13`
    MeetBelow,
    /// (iv), right half: `c13 ≤ c12 ∨ c23`
    BelowJoin,
}

impl Condition {
    pub fn label(&self) -> &'static str {
        match self {
            Condition::Split(..) => "(ii)",
            Condition::Disjoint(..) => "(iii)",
            Condition::MeetBelow | Condition::BelowJoin => "(iv)",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Split(i, j) => write!(f, "(ii) a{i} <= a{j} \\/ c{i}{j}"),
            Condition::Disjoint(i, j) => write!(f, "(iii) c{i}{j} /\\ c{j}{i} = 0"),
            Condition::MeetBelow => f.write_str("(iv) c12 /\\ c23 <= c13"),
            Condition::BelowJoin => f.write_str("(iv) c13 <= c12 \\/ c23"),
        }
    }
}

/// The first failing condition and a point of the top cone, in the
/// coordinates `(a, a′, b, c)`, where the left side is nonzero and the right
/// side vanishes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma43Failure {
    pub condition: Condition,
    pub witness: Vec<Rat>,
}

impl fmt::Display for Lemma43Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} fails; witness (a, a', b, c) = {}",
            self.condition,
            fmt_point(&self.witness)
        )
    }
}

fn top() -> Presentation {
    Presentation::cube("123").expect("top presentation")
}

fn supp(t: &LTerm, p: &Presentation) -> Result<Region> {
    compile_support(t, p, SupportMode::Nonzero)
}

fn join_term(s: &LTerm, t: &LTerm) -> LTerm {
    s.clone().abs().add(t.clone().abs())
}

fn meet_term(s: &LTerm, t: &LTerm) -> LTerm {
    s.clone().abs().meet(t.clone().abs())
}

fn split_failure(cand: &CevianCandidate, p: &Presentation) -> Result<Option<Lemma43Failure>> {
    for (i, j) in [(1, 2), (2, 1), (2, 3), (3, 2)] {
        let ai = LTerm::var(unit_generator(i));
        let aj = LTerm::var(unit_generator(j));
        let right = join_term(&aj, cand.term(i, j));
        if let Some(w) = supp(&ai, p)?.subset_witness(&supp(&right, p)?)? {
            return Ok(Some(Lemma43Failure {
                condition: Condition::Split(i, j),
                witness: w,
            }));
        }
    }
    Ok(None)
}

fn disjoint_failure(cand: &CevianCandidate, p: &Presentation) -> Result<Option<Lemma43Failure>> {
    for (i, j) in [(1, 2), (2, 3)] {
        let both = meet_term(cand.term(i, j), cand.term(j, i));
        if let Some(w) = supp(&both, p)?.witness()? {
            return Ok(Some(Lemma43Failure {
                condition: Condition::Disjoint(i, j),
                witness: w,
            }));
        }
    }
    Ok(None)
}

fn ceva_failure(cand: &CevianCandidate, p: &Presentation) -> Result<Option<Lemma43Failure>> {
    let (c12, c23, c13) = (cand.term(1, 2), cand.term(2, 3), cand.term(1, 3));
    if let Some(w) = supp(&meet_term(c12, c23), p)?.subset_witness(&supp(c13, p)?)? {
        return Ok(Some(Lemma43Failure {
            condition: Condition::MeetBelow,
            witness: w,
        }));
    }
    if let Some(w) = supp(c13, p)?.subset_witness(&supp(&join_term(c12, c23), p)?)? {
        return Ok(Some(Lemma43Failure {
            condition: Condition::BelowJoin,
            witness: w,
        }));
    }
    Ok(None)
}

/// Decides (ii), (iii), (iv) in that order. A family passing all three
/// would contradict the lemma and is reported as an internal inconsistency.
pub fn lemma43_check(cand: &CevianCandidate) -> Result<Lemma43Failure> {
    let p = top();
    if let Some(f) = split_failure(cand, &p)? {
        return Ok(f);
    }
    if let Some(f) = disjoint_failure(cand, &p)? {
        return Ok(f);
    }
    if let Some(f) = ceva_failure(cand, &p)? {
        return Ok(f);
    }
    Err(Error::inconsistency(format!(
        "family satisfies (ii), (iii) and (iv):\n{cand}"
    )))
}

/// `U_ij`: ratios `x⁻¹y` over the support of `c_ij` in `A_ij`, whose two
/// generators are read as `(x, y)` in their listed order.
pub fn ratio_set_of(t: &LTerm, i: usize, j: usize) -> Result<RatioSet> {
    let pres = Presentation::cube(&home(i, j))?;
    crate::cones::region_to_ratioset(&supp(t, &pres)?)
}

/// `C_ij` in `O3`: the cylinder over coordinates `(min, max)` of `U_ij`.
fn cylinder(u: &RatioSet, i: usize, j: usize) -> Result<Region> {
    ratioset_to_region(u, i.min(j), i.max(j), 3)
}

fn positive_axis(o3: &Arc<AmbientCone>, i: usize) -> Region {
    Region::half_space(o3.clone(), LinForm::coord(3, i - 1)).expect("dimension three")
}

fn axis_point(i: usize) -> Vec<Rat> {
    let mut p = vec![Rat::zero(); 3];
    p[i - 1] = Rat::one();
    p
}

fn inconsistent(step: &str, detail: impl fmt::Display) -> Error {
    Error::inconsistency(format!("{step}: {detail}"))
}

/// From (C1) `P_i ⊆ P_j ∪ C_ij`: the axis point `e_i` lies in `C_ij`, so the
/// ratio set contains 0 (when `i < j`) or ∞ (when `i > j`).
fn split_stage(u: &RatioSet, i: usize, j: usize) -> Result<()> {
    let o3 = Arc::new(AmbientCone::trivial(3));
    let c = cylinder(u, i, j)?;
    let right = positive_axis(&o3, j).join(&c)?;
    if let Some(w) = positive_axis(&o3, i).subset_witness(&right)? {
        return Err(inconsistent(
            &format!("(C1) P{i} <= P{j} u C{i}{j}"),
            format!("fails at {}", fmt_point(&w)),
        ));
    }
    let e = axis_point(i);
    if !c.contains(&e) {
        return Err(inconsistent(&format!("(C1) at {}", fmt_point(&e)), "axis point outside the cylinder"));
    }
    let expected = if i < j { ExtRat::zero() } else { ExtRat::Inf };
    if !u.contains(&expected) {
        return Err(inconsistent(&format!("U{i}{j} = {u}"), format!("does not contain {expected}")));
    }
    Ok(())
}

/// From (C2) `C_ij ∩ C_ji = ∅` with `∞ ∈ U_ji`: `U_ij` is bounded.
fn disjoint_stage(uij: &RatioSet, uji: &RatioSet, i: usize, j: usize) -> Result<()> {
    let meet = cylinder(uij, i, j)?.meet(&cylinder(uji, j, i)?)?;
    if let Some(w) = meet.witness()? {
        return Err(inconsistent(&format!("(C2) C{i}{j} n C{j}{i} = 0"), format!("fails at {}", fmt_point(&w))));
    }
    if !uij.intersect(uji).is_empty() || !uij.is_bounded() {
        return Err(inconsistent(&format!("U{i}{j} = {uij}"), format!("not bounded next to U{j}{i} = {uji}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RefutationKind {
    /// The cone images already break `C12 ∩ C23 ⊆ C13 ⊆ C12 ∪ C23` at a
    /// point `x` of `O3`; `(x1, x1, x2, x3)` then breaks (iv).
    Chain { broken: ChainBreak, point: Vec<Rat> },
    /// `U12 = [0,λ)`, `U23 = [0,μ)`, `U13 = [0,λμ)`; at `(1, 2, λ, λμ)` the
    /// terms `(λa−b)⁺`, `(μb−c)⁺`, `(λμa′−c)⁺` and the candidate's own
    /// `c12, c23, c13` take the listed values.
    Endgame {
        lambda: Rat,
        mu: Rat,
        point: Vec<Rat>,
        canonical: [Rat; 3],
        candidate: [Rat; 3],
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refutation {
    pub ratio_sets: Vec<((usize, usize), RatioSet)>,
    pub kind: RefutationKind,
}

impl fmt::Display for Refutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ((i, j), u) in &self.ratio_sets {
            writeln!(f, "U{i}{j} = {u}")?;
        }
        match &self.kind {
            RefutationKind::Chain { broken, point } => {
                let p = &point;
                writeln!(f, "cone images break the chain ({broken}) at {}", fmt_point(p))?;
                write!(
                    f,
                    "so (iv) fails at (a, a', b, c) = {}",
                    fmt_point(&[p[0].clone(), p[0].clone(), p[1].clone(), p[2].clone()])
                )
            }
            RefutationKind::Endgame {
                lambda,
                mu,
                point,
                canonical,
                candidate,
            } => {
                writeln!(f, "lambda = {lambda}, mu = {mu}")?;
                let [t12, t23, t13] = canonical_terms(lambda, mu);
                writeln!(f, "c12 ~ {t12}, c23 ~ {t23}, c13 ~ {t13}")?;
                writeln!(
                    f,
                    "at (a, a', b, c) = {}: canonical terms {}, {}, {}; candidate terms {}, {}, {}",
                    fmt_point(point),
                    canonical[0],
                    canonical[1],
                    canonical[2],
                    candidate[0],
                    candidate[1],
                    candidate[2]
                )?;
                write!(
                    f,
                    "c13 is {} > 0 there while c12 \\/ c23 is 0, so c13 <= c12 \\/ c23 is impossible",
                    candidate[2]
                )
            }
        }
    }
}

fn canonical_terms(lambda: &Rat, mu: &Rat) -> [LTerm; 3] {
    let v = LTerm::var;
    [
        v("a").scale(lambda.clone()).sub(v("b")).pos(),
        v("b").scale(mu.clone()).sub(v("c")).pos(),
        v("a'").scale(lambda * mu).sub(v("c")).pos(),
    ]
}

/// The part of the argument that needs only `c12`, `c23`, `c13`, given that
/// the pair stages passed. Candidates sharing supports share the outcome.
fn triple_stage(c12: &LTerm, c23: &LTerm, c13: &LTerm, sets: [&RatioSet; 3]) -> Result<RefutationKind> {
    let [u12, u23, u13] = sets;
    let input = CevaInput::new(u12.clone(), u23.clone(), u13.clone());
    // (1, ε, 0) lies in C12 ∩ C23 for ε small in U12, so (C3) puts it in C13
    let eps = match u12.intervals().first().map(|iv| iv.hi.clone()) {
        Some(ExtRat::Fin(h)) => h / int(2),
        _ => Rat::one(),
    };
    let probe = vec![Rat::one(), eps, Rat::zero()];
    if !(input.in_cylinder(1, 2, &probe) && input.in_cylinder(2, 3, &probe)) {
        return Err(inconsistent("0 in U13", format!("{} is not in C12 n C23", fmt_point(&probe))));
    }
    if !input.in_cylinder(1, 3, &probe) {
        return chain_refutation(c12, c23, c13, ChainBreak::MeetNotBelow, probe);
    }
    let verdict = ceva_check(&input)?;
    if !verdict.hyp_0 || !verdict.hyp_notfull {
        return Err(inconsistent("ratio set hypotheses", format!("derived facts contradict the check:\n{input}")));
    }
    if !verdict.hyp_chain {
        let broken = verdict.chain_break.expect("chain failure carries its kind");
        let point = verdict.witness.expect("chain failure carries a witness");
        return chain_refutation(c12, c23, c13, broken, point);
    }
    let (lambda, mu) = verdict.conclusion.expect("hypotheses hold");
    let canon = canonical_terms(&lambda, &mu);
    for (k, (t, p)) in [(c12, "12"), (c23, "23"), (c13, "13")].into_iter().enumerate() {
        let pres = Presentation::cube(p)?;
        if !asymp(t, &canon[k], &pres)? {
            return Err(inconsistent(&format!("c{p} ~ {}", canon[k]), format!("fails for {t}")));
        }
    }
    let point = vec![Rat::one(), int(2), lambda.clone(), &lambda * &mu];
    let p = top();
    let mut canonical: [Rat; 3] = Default::default();
    let mut candidate: [Rat; 3] = Default::default();
    for (k, t) in [c12, c23, c13].into_iter().enumerate() {
        canonical[k] = p.eval(&canon[k], &point)?;
        candidate[k] = p.eval(t, &point)?;
    }
    let pattern_ok = |v: &[Rat; 3]| rat_is_zero(&v[0]) && rat_is_zero(&v[1]) && v[2].is_positive();
    if !pattern_ok(&canonical) || canonical[2] != &lambda * &mu || !pattern_ok(&candidate) {
        return Err(inconsistent(
            "evaluation at (1, 2, lambda, lambda*mu)",
            format!("unexpected values {canonical:?} / {candidate:?}"),
        ));
    }
    Ok(RefutationKind::Endgame {
        lambda,
        mu,
        point,
        canonical,
        candidate,
    })
}

/// Confirms on the candidate's terms that the collapsed point breaks (iv).
fn chain_refutation(c12: &LTerm, c23: &LTerm, c13: &LTerm, broken: ChainBreak, point: Vec<Rat>) -> Result<RefutationKind> {
    let p = top();
    let lifted = [point[0].clone(), point[0].clone(), point[1].clone(), point[2].clone()];
    let v12 = p.eval(c12, &lifted)?;
    let v23 = p.eval(c23, &lifted)?;
    let v13 = p.eval(c13, &lifted)?;
    let ok = match broken {
        ChainBreak::MeetNotBelow => !v12.is_zero() && !v23.is_zero() && v13.is_zero(),
        ChainBreak::NotBelowJoin => v12.is_zero() && v23.is_zero() && !v13.is_zero(),
    };
    if !ok {
        return Err(inconsistent(
            "chain witness",
            format!("{} gives values {v12}, {v23}, {v13}", fmt_point(&lifted)),
        ));
    }
    Ok(RefutationKind::Chain { broken, point })
}

/// Replays the refutation for a family that passes (ii) and (iii).
pub fn lemma43_refute_pipeline(cand: &CevianCandidate) -> Result<Refutation> {
    let p = top();
    if let Some(f) = split_failure(cand, &p)?.or(disjoint_failure(cand, &p)?) {
        return Err(Error::Precondition(format!("the family must satisfy (ii) and (iii): {f}")));
    }
    let o3 = Arc::new(AmbientCone::trivial(3));
    let mut sets = BTreeMap::new();
    for (i, j) in FAMILY_PAIRS {
        let u = ratio_set_of(cand.term(i, j), i, j)?;
        let via_eta = collapse_top(&supp(cand.term(i, j), &p)?, &o3)?;
        if !cylinder(&u, i, j)?.equals(&via_eta)? {
            return Err(inconsistent(&format!("C{i}{j}"), "cylinder differs from the collapsed support"));
        }
        sets.insert((i, j), u);
    }
    for (i, j) in [(1, 2), (2, 1), (2, 3), (3, 2)] {
        split_stage(&sets[&(i, j)], i, j)?;
    }
    for (i, j) in [(1, 2), (2, 3)] {
        disjoint_stage(&sets[&(i, j)], &sets[&(j, i)], i, j)?;
    }
    let kind = triple_stage(
        cand.term(1, 2),
        cand.term(2, 3),
        cand.term(1, 3),
        [&sets[&(1, 2)], &sets[&(2, 3)], &sets[&(1, 3)]],
    )?;
    Ok(Refutation {
        ratio_sets: FAMILY_PAIRS.iter().map(|k| (*k, sets[k].clone())).collect(),
        kind,
    })
}

/// Terms of one `A_ij` sharing a support.
#[derive(Debug, Clone)]
pub struct TermClass {
    pub key: RatioSet,
    pub members: Vec<LTerm>,
    pub count: u128,
}

impl TermClass {
    pub fn rep(&self) -> &LTerm {
        &self.members[0]
    }
}

/// Keep at most this many sample members per class once counts grow.
const MEMBER_SAMPLE: usize = 64;

/// `(p·g − q·h)⁺` for `p, q ∈ {1,2,3}` and generators `g, h`, then `depth`
/// rounds of adding `s ∧ t` and `s ∨ t` for distinct `s`, `t`. Terms are
/// grouped by support; counts are exact even when only a sample of the
/// members is kept.
pub fn term_classes(gens: &[String], depth: usize) -> Vec<TermClass> {
    let mut classes: Vec<TermClass> = Vec::new();
    let mut index: HashMap<RatioSet, usize> = HashMap::new();
    let pres = Presentation::free("pool", &gens.iter().map(String::as_str).collect::<Vec<_>>());
    let mut add = |classes: &mut Vec<TermClass>, key: RatioSet, t: LTerm, n: u128| match index.get(&key) {
        Some(&k) => {
            let c = &mut classes[k];
            c.count += n;
            if c.members.len() < MEMBER_SAMPLE {
                c.members.push(t);
            }
        }
        None => {
            index.insert(key.clone(), classes.len());
            classes.push(TermClass {
                key,
                members: vec![t],
                count: n,
            });
        }
    };
    for g in gens {
        for h in gens {
            for p in 1..=3 {
                for q in 1..=3 {
                    let t = LTerm::var(g).scale(int(p)).sub(LTerm::var(h).scale(int(q))).pos();
                    let s = crate::cones::region_to_ratioset(&supp(&t, &pres).expect("pool term compiles"))
                        .expect("dimension two");
                    add(&mut classes, s, t, 1);
                }
            }
        }
    }
    for _ in 0..depth {
        let level = classes.clone();
        for (x, s) in level.iter().enumerate() {
            for t in &level[x..] {
                let pairs = if std::ptr::eq(s, t) {
                    s.count * (s.count - 1) / 2
                } else {
                    s.count * t.count
                };
                if pairs == 0 {
                    continue;
                }
                let (a, b) = (s.rep().clone(), t.rep().clone());
                add(&mut classes, s.key.intersect(&t.key), a.clone().meet(b.clone()), pairs);
                add(&mut classes, s.key.union(&t.key), a.join(b), pairs);
            }
        }
    }
    classes.sort_by_key(|c| c.key.to_string());
    classes
}

/// Bit-per-probe membership of a region, for cheap refutations.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn of(region: &Region, probes: &[Vec<Rat>]) -> Bits {
        let mut words = vec![0u64; probes.len().div_ceil(64)];
        for (k, p) in probes.iter().enumerate() {
            if region.contains(p) {
                words[k / 64] |= 1 << (k % 64);
            }
        }
        Bits(words)
    }

    /// First probe in `self` outside every set in `others`.
    fn escape(&self, inside: &[&Bits], outside: &[&Bits]) -> Option<usize> {
        for (w, word) in self.0.iter().enumerate() {
            let mut m = *word;
            for b in inside {
                m &= b.0[w];
            }
            for b in outside {
                m &= !b.0[w];
            }
            if m != 0 {
                return Some(w * 64 + m.trailing_zeros() as usize);
            }
        }
        None
    }
}

/// Points `(a, a′, b, c)` of the top cone with `a ∈ {0, 1}`.
fn top_probes() -> Vec<Vec<Rat>> {
    let mut vals: Vec<Rat> = (0..=48).map(|k| rat(k, 12)).collect();
    vals.extend([5, 6, 8, 10, 20].map(int));
    let mut out = Vec::new();
    for ap in [int(1), rat(3, 2), int(2)] {
        for b in &vals {
            for c in &vals {
                out.push(vec![int(1), ap.clone(), b.clone(), c.clone()]);
            }
        }
    }
    for b in &vals {
        for c in &vals {
            if !(b.is_zero() && c.is_zero()) {
                out.push(vec![int(0), int(0), b.clone(), c.clone()]);
            }
        }
    }
    out
}

struct Embedded {
    support: Region,
    bits: Bits,
}

fn embed_all(classes: &[TermClass], p: &Presentation, probes: &[Vec<Rat>]) -> Result<Vec<Embedded>> {
    classes
        .par_iter()
        .map(|c| {
            let support = supp(c.rep(), p)?;
            let bits = Bits::of(&support, probes);
            Ok(Embedded { support, bits })
        })
        .collect()
}

#[derive(Debug, Clone, Default)]
pub struct ScanReport {
    pub depth: usize,
    /// `(name of A_ij, pool terms, support classes)`
    pub pools: Vec<(String, u128, usize)>,
    pub candidates: u128,
    pub fail_split: u128,
    pub fail_disjoint: u128,
    pub fail_ceva: u128,
    pub all_pass: u128,
    pub lp_decisions: usize,
    /// Every pool term is within a bounded multiple of its class
    /// representative and vice versa.
    pub eta_injective: bool,
    pub multiplier_checks: usize,
    /// Distinct support patterns passing (ii) and (iii) that were run
    /// through the refutation pipeline, by outcome.
    pub pipeline_runs: usize,
    pub refuted_by_chain: usize,
    pub refuted_by_endgame: usize,
    pub endgames: Vec<(Rat, Rat)>,
    pub sample_refutation: Option<String>,
}

impl fmt::Display for ScanReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pool depth {}", self.depth)?;
        for (name, n, k) in &self.pools {
            writeln!(f, "A{name}: {n} terms in {k} support classes")?;
        }
        writeln!(f, "candidates: {}", self.candidates)?;
        writeln!(f, "first failure (ii): {}", self.fail_split)?;
        writeln!(f, "first failure (iii): {}", self.fail_disjoint)?;
        writeln!(f, "first failure (iv): {}", self.fail_ceva)?;
        writeln!(f, "all pass: {}", self.all_pass)?;
        writeln!(f, "region decisions after probes: {}", self.lp_decisions)?;
        writeln!(
            f,
            "support classes closed under bounded multiples: {} ({} checks)",
            self.eta_injective, self.multiplier_checks
        )?;
        writeln!(
            f,
            "pipeline: {} support patterns, {} refuted at the chain, {} by evaluation",
            self.pipeline_runs, self.refuted_by_chain, self.refuted_by_endgame
        )?;
        let pairs: Vec<String> = self.endgames.iter().map(|(l, m)| format!("({l}, {m})")).collect();
        writeln!(f, "(lambda, mu) reached: {}", pairs.join(" "))?;
        if let Some(s) = &self.sample_refutation {
            writeln!(f, "sample refutation:\n{s}")?;
        }
        write!(f, "the pool is a finite choice; a clean scan is evidence, not a proof")
    }
}

fn check_multipliers(classes: &[TermClass], p: &Presentation) -> Result<(bool, usize)> {
    let results: Vec<(bool, usize)> = classes
        .par_iter()
        .map(|c| {
            let mut ok = true;
            let mut n = 0;
            for m in &c.members[1..] {
                n += 2;
                ok &= multiplier_bound(m, c.rep(), p, 8)?.is_some();
                ok &= multiplier_bound(c.rep(), m, p, 8)?.is_some();
            }
            Ok((ok, n))
        })
        .collect::<Result<_>>()?;
    Ok(results.iter().fold((true, 0), |(a, n), (b, m)| (a && *b, n + m)))
}

/// Outcome of (ii) and (iii) for one ordered pair of classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PairOutcome {
    Split,
    Disjoint,
    Pass,
}

struct PairTable {
    outcome: Vec<Vec<PairOutcome>>,
    /// Weighted count of pairs per outcome.
    split: u128,
    disjoint: u128,
    pass: u128,
    total: u128,
    /// For each class of `c_ij`, the weight of passing partners `c_ji`.
    pass_weight: Vec<u128>,
}

fn pair_table(
    i: usize,
    j: usize,
    classes: &[TermClass],
    emb: &[Embedded],
    units: &[(Region, Bits)],
    lp: &mut usize,
) -> Result<PairTable> {
    let (ai, aj) = (&units[i - 1], &units[j - 1]);
    let split_ok = |e: &Embedded, x: &(Region, Bits), y: &(Region, Bits), lp: &mut usize| -> Result<bool> {
        if x.1.escape(&[], &[&y.1, &e.bits]).is_some() {
            return Ok(false);
        }
        *lp += 1;
        x.0.is_subset(&y.0.join(&e.support)?)
    };
    let mut fwd = Vec::new();
    let mut back = Vec::new();
    for e in emb {
        fwd.push(split_ok(e, ai, aj, lp)?);
        back.push(split_ok(e, aj, ai, lp)?);
    }
    let n = classes.len();
    let mut t = PairTable {
        outcome: vec![vec![PairOutcome::Split; n]; n],
        split: 0,
        disjoint: 0,
        pass: 0,
        total: 0,
        pass_weight: vec![0; n],
    };
    for x in 0..n {
        for y in 0..n {
            let w = classes[x].count * classes[y].count;
            t.total += w;
            let o = if !(fwd[x] && back[y]) {
                PairOutcome::Split
            } else if emb[x].bits.escape(&[&emb[y].bits], &[]).is_some() {
                PairOutcome::Disjoint
            } else {
                *lp += 1;
                if emb[x].support.meet(&emb[y].support)?.is_empty()? {
                    PairOutcome::Pass
                } else {
                    PairOutcome::Disjoint
                }
            };
            match o {
                PairOutcome::Split => t.split += w,
                PairOutcome::Disjoint => t.disjoint += w,
                PairOutcome::Pass => {
                    t.pass += w;
                    t.pass_weight[x] += classes[y].count;
                }
            }
            t.outcome[x][y] = o;
        }
    }
    Ok(t)
}

/// Exhaustive scan over families drawn from the term pools. Candidates are
/// grouped by the supports of their terms, which is all the conditions see.
pub fn lemma43_scan(depth: usize) -> Result<ScanReport> {
    let p = top();
    let probes = top_probes();
    let gens = |i: usize, j: usize| Presentation::cube(&home(i, j)).expect("cube").generators;
    let cls12 = term_classes(&gens(1, 2), depth);
    let cls23 = term_classes(&gens(2, 3), depth);
    let cls13 = term_classes(&gens(1, 3), depth);
    let mut report = ScanReport {
        depth,
        ..Default::default()
    };
    let mut eta_ok = true;
    for (name, cls) in [("12", &cls12), ("13", &cls13), ("23", &cls23)] {
        let total: u128 = cls.iter().map(|c| c.count).sum();
        report.pools.push((name.to_string(), total, cls.len()));
        let pres = Presentation::cube(name)?;
        let (ok, n) = check_multipliers(cls, &pres)?;
        eta_ok &= ok;
        report.multiplier_checks += n;
    }
    report.eta_injective = eta_ok;

    let emb12 = embed_all(&cls12, &p, &probes)?;
    let emb23 = embed_all(&cls23, &p, &probes)?;
    let emb13 = embed_all(&cls13, &p, &probes)?;
    let units: Vec<(Region, Bits)> = ["a", "b", "c"]
        .iter()
        .map(|g| {
            let r = supp(&LTerm::var(g), &p)?;
            let b = Bits::of(&r, &probes);
            Ok((r, b))
        })
        .collect::<Result<_>>()?;

    let mut lp = 0;
    let t12 = pair_table(1, 2, &cls12, &emb12, &units, &mut lp)?;
    let t23 = pair_table(2, 3, &cls23, &emb23, &units, &mut lp)?;
    let n13: u128 = cls13.iter().map(|c| c.count).sum();
    let outer = n13 * n13;
    report.candidates = t12.total * t23.total * outer;
    let ok12 = t12.total - t12.split;
    let ok23 = t23.total - t23.split;
    report.fail_split = (t12.total * t23.total - ok12 * ok23) * outer;
    report.fail_disjoint = (ok12 * ok23 - t12.pass * t23.pass) * outer;

    // (iv) sees only c12, c23, c13
    let live12: Vec<usize> = (0..cls12.len()).filter(|&x| t12.pass_weight[x] > 0).collect();
    let live23: Vec<usize> = (0..cls23.len()).filter(|&x| t23.pass_weight[x] > 0).collect();
    let m13 = cls13.len();
    let triples: Vec<(usize, usize, usize)> = live12
        .iter()
        .flat_map(|&x| live23.iter().flat_map(move |&y| (0..m13).map(move |z| (x, y, z))))
        .collect();
    let ceva: Vec<(u128, usize)> = triples
        .par_iter()
        .map(|&(x, y, z)| {
            let (e12, e23, e13) = (&emb12[x], &emb23[y], &emb13[z]);
            let mut calls = 0;
            let fails = if e12.bits.escape(&[&e23.bits], &[&e13.bits]).is_some()
                || e13.bits.escape(&[], &[&e12.bits, &e23.bits]).is_some()
            {
                true
            } else {
                calls += 1;
                let meet = e12.support.meet(&e23.support)?;
                let join = e12.support.join(&e23.support)?;
                !meet.is_subset(&e13.support)? || !e13.support.is_subset(&join)?
            };
            if !fails {
                let cand = format!(
                    "c12 = {}\nc23 = {}\nc13 = {}",
                    cls12[x].rep(),
                    cls23[y].rep(),
                    cls13[z].rep()
                );
                return Err(Error::inconsistency(format!("family satisfies (ii), (iii) and (iv):\n{cand}")));
            }
            Ok((t12.pass_weight[x] * cls12[x].count * t23.pass_weight[y] * cls23[y].count * cls13[z].count * n13, calls))
        })
        .collect::<Result<_>>()?;
    for (w, calls) in ceva {
        report.fail_ceva += w;
        lp += calls;
    }
    report.lp_decisions = lp;
    if report.fail_split + report.fail_disjoint + report.fail_ceva != report.candidates {
        return Err(Error::inconsistency("scan counts do not add up"));
    }

    // the pipeline: pair stages per passing class pair, then per triple
    let sets = |cls: &[TermClass]| cls.iter().map(|c| c.key.clone()).collect::<Vec<_>>();
    let (s12, s23, s13) = (sets(&cls12), sets(&cls23), sets(&cls13));
    for (i, j, cls, table) in [(1, 2, &cls12, &t12), (2, 3, &cls23, &t23)] {
        let keys = sets(cls);
        let checks: Vec<(usize, usize)> = (0..cls.len())
            .flat_map(|x| (0..cls.len()).map(move |y| (x, y)))
            .filter(|&(x, y)| table.outcome[x][y] == PairOutcome::Pass)
            .collect();
        checks.par_iter().try_for_each(|&(x, y)| -> Result<()> {
            split_stage(&keys[x], i, j)?;
            split_stage(&keys[y], j, i)?;
            disjoint_stage(&keys[x], &keys[y], i, j)
        })?;
    }
    let outcomes: Vec<RefutationKind> = triples
        .par_iter()
        .map(|&(x, y, z)| {
            triple_stage(
                cls12[x].rep(),
                cls23[y].rep(),
                cls13[z].rep(),
                [&s12[x], &s23[y], &s13[z]],
            )
        })
        .collect::<Result<_>>()?;
    report.pipeline_runs = outcomes.len();
    for (k, o) in outcomes.iter().enumerate() {
        match o {
            RefutationKind::Chain { .. } => report.refuted_by_chain += 1,
            RefutationKind::Endgame { lambda, mu, .. } => {
                report.refuted_by_endgame += 1;
                if !report.endgames.contains(&(lambda.clone(), mu.clone())) {
                    report.endgames.push((lambda.clone(), mu.clone()));
                }
                if report.sample_refutation.is_none() {
                    let (x, y, z) = triples[k];
                    report.sample_refutation = Some(format!(
                        "c12 = {}, c23 = {}, c13 = {}\n{}",
                        cls12[x].rep(),
                        cls23[y].rep(),
                        cls13[z].rep(),
                        Refutation {
                            ratio_sets: vec![
                                ((1, 2), s12[x].clone()),
                                ((2, 3), s23[y].clone()),
                                ((1, 3), s13[z].clone())
                            ],
                            kind: o.clone()
                        }
                    ));
                }
            }
        }
    }
    report.endgames.sort();
    Ok(report)
}
