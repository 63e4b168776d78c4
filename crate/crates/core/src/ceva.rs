//! Ceva configurations of ratio sets in dimension three.
//!
//! `C_ij` is the cylinder of nonzero points whose ratio `xᵢ⁻¹xⱼ` lies in
//! `U_ij`. The chain hypothesis `C12 ∩ C23 ⊆ C13 ⊆ C12 ∪ C23` is first
//! attacked with cheap exact point probes; only when no probe refutes it is
//! it decided by region containment.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::cones::{fmt_point, ratioset_to_region, Region};
use crate::error::{Error, Result};
use crate::ratcore::{int, ratio, ExtRat, Interval, Rat, RatioSet};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CevaInput {
    pub u12: RatioSet,
    pub u23: RatioSet,
    pub u13: RatioSet,
}

impl CevaInput {
    pub fn new(u12: RatioSet, u23: RatioSet, u13: RatioSet) -> Self {
        CevaInput { u12, u23, u13 }
    }

    /// `U12=[0,x)`, `U23=[0,y)`, `U13=[0,xy)`.
    pub fn configuration(x: Rat, y: Rat) -> Self {
        let xy = &x * &y;
        CevaInput::new(RatioSet::initial(x), RatioSet::initial(y), RatioSet::initial(xy))
    }

    /// Reads `U12 = ...`, `U23 = ...`, `U13 = ...` lines; `#` starts a comment.
    pub fn parse(src: &str) -> Result<Self> {
        let mut found: BTreeMap<&str, RatioSet> = BTreeMap::new();
        for (lineno, line) in src.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(lineno + 1, format!("expected `key = value`, got `{line}`")))?;
            let key = key.trim();
            let slot = match key {
                "U12" | "u12" => "U12",
                "U23" | "u23" => "U23",
                "U13" | "u13" => "U13",
                "kind" if value.trim() == "ceva" => continue,
                other => return Err(Error::parse(lineno + 1, format!("unknown key `{other}`"))),
            };
            let set: RatioSet = value
                .trim()
                .parse()
                .map_err(|e: Error| Error::parse(lineno + 1, e.to_string()))?;
            if found.insert(slot, set).is_some() {
                return Err(Error::parse(lineno + 1, format!("`{slot}` given twice")));
            }
        }
        let mut take = |k: &str| {
            found
                .remove(k)
                .ok_or_else(|| Error::parse(0, format!("missing `{k}`")))
        };
        Ok(CevaInput::new(take("U12")?, take("U23")?, take("U13")?))
    }

    fn set(&self, i: usize, j: usize) -> &RatioSet {
        match (i, j) {
            (1, 2) => &self.u12,
            (2, 3) => &self.u23,
            (1, 3) => &self.u13,
            _ => unreachable!("only increasing pairs occur"),
        }
    }

    /// Whether `point` lies in `C_ij`.
    pub fn in_cylinder(&self, i: usize, j: usize, point: &[Rat]) -> bool {
        match ratio(&point[i - 1], &point[j - 1]) {
            Some(r) => self.set(i, j).contains(&r),
            None => false,
        }
    }

    pub fn regions(&self) -> Result<[Region; 3]> {
        Ok([
            ratioset_to_region(&self.u12, 1, 2, 3)?,
            ratioset_to_region(&self.u23, 2, 3, 3)?,
            ratioset_to_region(&self.u13, 1, 3, 3)?,
        ])
    }

    fn finite_endpoints(&self) -> Vec<Rat> {
        let mut out: Vec<Rat> = [&self.u12, &self.u23, &self.u13]
            .iter()
            .flat_map(|u| u.endpoints())
            .filter_map(|e| e.finite().filter(|q| q.is_positive()).cloned())
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

impl fmt::Display for CevaInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "U12 = {}", self.u12)?;
        writeln!(f, "U23 = {}", self.u23)?;
        writeln!(f, "U13 = {}", self.u13)
    }
}

/// Which inclusion of the chain a point breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainBreak {
    /// The point is in `C12 ∩ C23` but not in `C13`.
    MeetNotBelow,
    /// The point is in `C13` but in neither `C12` nor `C23`.
    NotBelowJoin,
}

impl fmt::Display for ChainBreak {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChainBreak::MeetNotBelow => "C12 ∩ C23 ⊄ C13",
            ChainBreak::NotBelowJoin => "C13 ⊄ C12 ∪ C23",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    ZeroInAll,
    NotFull,
    Chain,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hypothesis::ZeroInAll => "0 in U12, U23, U13",
            Hypothesis::NotFull => "[0,inf) not inside U12 or U23",
            Hypothesis::Chain => "C12 ∩ C23 ⊆ C13 ⊆ C12 ∪ C23",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CevaVerdict {
    pub hyp_0: bool,
    pub hyp_notfull: bool,
    pub hyp_chain: bool,
    pub conclusion: Option<(Rat, Rat)>,
    pub witness: Option<Vec<Rat>>,
    pub chain_break: Option<ChainBreak>,
    /// Whether the chain verdict needed region containment rather than a probe.
    pub chain_by_regions: bool,
}

impl CevaVerdict {
    pub fn holds(&self) -> bool {
        self.hyp_0 && self.hyp_notfull && self.hyp_chain
    }

    pub fn first_failure(&self) -> Option<Hypothesis> {
        if !self.hyp_0 {
            Some(Hypothesis::ZeroInAll)
        } else if !self.hyp_notfull {
            Some(Hypothesis::NotFull)
        } else if !self.hyp_chain {
            Some(Hypothesis::Chain)
        } else {
            None
        }
    }
}

/// Axis point whose ratio in the pair `(i, j)` is zero.
fn zero_ratio_point(i: usize) -> Vec<Rat> {
    let mut p = vec![Rat::zero(); 3];
    p[i - 1] = Rat::one();
    p
}

fn hyp_zero(input: &CevaInput) -> (bool, Option<Vec<Rat>>) {
    let zero = ExtRat::zero();
    for (i, j) in [(1, 2), (2, 3), (1, 3)] {
        if !input.set(i, j).contains(&zero) {
            return (false, Some(zero_ratio_point(i)));
        }
    }
    (true, None)
}

fn hyp_notfull(input: &CevaInput) -> bool {
    !input.u12.contains_finite_ray() && !input.u23.contains_finite_ray()
}

/// Classifies a point against the chain, if it breaks it.
pub fn chain_break_at(input: &CevaInput, point: &[Rat]) -> Option<ChainBreak> {
    let c12 = input.in_cylinder(1, 2, point);
    let c23 = input.in_cylinder(2, 3, point);
    let c13 = input.in_cylinder(1, 3, point);
    if c12 && c23 && !c13 {
        Some(ChainBreak::MeetNotBelow)
    } else if c13 && !c12 && !c23 {
        Some(ChainBreak::NotBelowJoin)
    } else {
        None
    }
}

/// Candidate refutations following the case analysis that forces the shape
/// `[0,x), [0,y), [0,xy)`: points `(1,u,xy)` with `u = xy/v` for `v` past a
/// gap of `U23`, points `(1,u,xy)` with `u` past a gap of `U12`, `(1,x,xy)`,
/// `(1,u,uv)` below the corner and `(1,x,z)` for `z ∈ U13` beyond `xy`.
pub fn structured_probes(input: &CevaInput) -> Vec<Vec<Rat>> {
    let first_sup = |u: &RatioSet| match u.intervals().first() {
        Some(iv) if iv.lo.is_zero() && iv.lo_closed => iv.hi.finite().filter(|q| q.is_positive()).cloned(),
        _ => None,
    };
    let (Some(x), Some(y)) = (first_sup(&input.u12), first_sup(&input.u23)) else {
        return Vec::new();
    };
    let xy = &x * &y;
    let one = Rat::one();
    let mut out = Vec::new();
    for iv in input.u23.intervals().iter().skip(1) {
        if let ExtRat::Fin(v) = iv.sample() {
            if v.is_positive() {
                out.push(vec![one.clone(), &xy / &v, xy.clone()]);
            }
        }
    }
    for iv in input.u12.intervals().iter().skip(1) {
        if let ExtRat::Fin(u) = iv.sample() {
            out.push(vec![one.clone(), u, xy.clone()]);
        }
    }
    out.push(vec![one.clone(), x.clone(), xy.clone()]);
    let half = int(2).recip();
    out.push(vec![one.clone(), &x * &half, &xy * &half * &half]);
    for iv in input.u13.intervals() {
        let beyond = Interval::new(ExtRat::Fin(xy.clone()), true, ExtRat::Inf, false);
        let part = iv.intersect(&beyond);
        if !part.is_empty() {
            if let ExtRat::Fin(z) = part.sample() {
                out.push(vec![one.clone(), x.clone(), z]);
            }
        }
    }
    out
}

/// A fixed family of probe points built from a finite set of critical
/// ratios: products and quotients of samples around every endpoint, plus
/// points on the faces of the simplex.
#[derive(Debug, Clone)]
pub struct ProbeSet {
    pub points: Vec<Vec<Rat>>,
}

impl ProbeSet {
    pub fn from_endpoints(ends: &[Rat]) -> Self {
        let mut e: Vec<Rat> = ends.iter().filter(|q| q.is_positive()).cloned().collect();
        e.sort();
        e.dedup();
        let mut s = e.clone();
        match (e.first(), e.last()) {
            (Some(lo), Some(hi)) => {
                s.push(lo / int(2));
                s.push(hi * int(2));
            }
            _ => s.push(Rat::one()),
        }
        for w in e.windows(2) {
            s.push((&w[0] + &w[1]) / int(2));
        }
        s.sort();
        s.dedup();

        let one = Rat::one();
        let zero = Rat::zero();
        let mut points = vec![
            vec![one.clone(), zero.clone(), zero.clone()],
            vec![zero.clone(), one.clone(), zero.clone()],
            vec![zero.clone(), zero.clone(), one.clone()],
        ];
        for t in &s {
            points.push(vec![one.clone(), zero.clone(), t.clone()]);
            points.push(vec![zero.clone(), one.clone(), t.clone()]);
            points.push(vec![one.clone(), t.clone(), zero.clone()]);
        }
        for r in &s {
            for q in &s {
                points.push(vec![one.clone(), r.clone(), r * q]);
                points.push(vec![one.clone(), r.clone(), q.clone()]);
                points.push(vec![one.clone(), q / r, q.clone()]);
            }
        }
        let mut seen = std::collections::HashSet::new();
        points.retain(|p| seen.insert(p.clone()));
        ProbeSet { points }
    }

    fn for_input(input: &CevaInput) -> Self {
        ProbeSet::from_endpoints(&input.finite_endpoints())
    }
}

/// Decides the chain hypothesis; returns the break and a witness on failure.
fn decide_chain(input: &CevaInput, probes: Option<&ProbeSet>) -> Result<(Option<(ChainBreak, Vec<Rat>)>, bool)> {
    for p in structured_probes(input) {
        if let Some(b) = chain_break_at(input, &p) {
            return Ok((Some((b, p)), false));
        }
    }
    let local;
    let probes = match probes {
        Some(p) => p,
        None => {
            local = ProbeSet::for_input(input);
            &local
        }
    };
    for p in &probes.points {
        if let Some(b) = chain_break_at(input, p) {
            return Ok((Some((b, p.clone())), false));
        }
    }
    Ok((chain_by_regions(input)?, true))
}

/// The chain decided purely by region containment in dimension three.
pub fn chain_by_regions(input: &CevaInput) -> Result<Option<(ChainBreak, Vec<Rat>)>> {
    let [c12, c23, c13] = input.regions()?;
    if let Some(w) = c12.meet(&c23)?.subset_witness(&c13)? {
        return Ok(Some((ChainBreak::MeetNotBelow, w)));
    }
    if let Some(w) = c13.subset_witness(&c12.join(&c23)?)? {
        return Ok(Some((ChainBreak::NotBelowJoin, w)));
    }
    Ok(None)
}

pub fn ceva_check(input: &CevaInput) -> Result<CevaVerdict> {
    check_with(input, None)
}

fn check_with(input: &CevaInput, probes: Option<&ProbeSet>) -> Result<CevaVerdict> {
    let (hyp_0, mut witness) = hyp_zero(input);
    let hyp_notfull = hyp_notfull(input);
    let (broken, chain_by_regions) = decide_chain(input, probes)?;
    let hyp_chain = broken.is_none();
    let mut chain_break = None;
    if let Some((b, w)) = broken {
        chain_break = Some(b);
        if witness.is_none() {
            witness = Some(w);
        }
    }
    let mut verdict = CevaVerdict {
        hyp_0,
        hyp_notfull,
        hyp_chain,
        conclusion: None,
        witness,
        chain_break,
        chain_by_regions,
    };
    if verdict.holds() {
        verdict.conclusion = Some(conclude(input)?);
    }
    Ok(verdict)
}

/// Reads off `(x, y)` and verifies the shape exactly.
fn conclude(input: &CevaInput) -> Result<(Rat, Rat)> {
    let fail = |why: &str| {
        Error::inconsistency(format!(
            "all hypotheses hold but {why}; counterexample:\n{input}"
        ))
    };
    let x = input.u12.is_initial().ok_or_else(|| fail("U12 is not initial"))?;
    let y = input.u23.is_initial().ok_or_else(|| fail("U23 is not initial"))?;
    if input.u13 != RatioSet::initial(&x * &y) {
        return Err(fail("U13 differs from [0,xy)"));
    }
    Ok((x, y))
}

/// Confirms that `([0,x), [0,y), [0,xy))` satisfies every hypothesis, using
/// region containment only.
pub fn ceva_converse_check(x: &Rat, y: &Rat) -> Result<bool> {
    if !x.is_positive() || !y.is_positive() {
        return Err(Error::validation("x and y must be positive"));
    }
    let input = CevaInput::configuration(x.clone(), y.clone());
    let (zero_ok, _) = hyp_zero(&input);
    Ok(zero_ok && hyp_notfull(&input) && chain_by_regions(&input)?.is_none())
}

/// All canonical ratio sets that are unions of at most two of the shapes
/// `[0,x)`, `(x,y)`, `(y,∞]` with endpoints from `pool` (plus 0), sorted by
/// their text form.
pub fn candidate_sets(pool: &[ExtRat]) -> Vec<RatioSet> {
    let mut ends: Vec<ExtRat> = pool.to_vec();
    ends.sort();
    ends.dedup();
    let positive: Vec<&ExtRat> = ends.iter().filter(|e| !e.is_zero()).collect();
    let mut basic = Vec::new();
    for x in &positive {
        basic.push(Interval::initial((*x).clone()));
    }
    for (k, x) in positive.iter().enumerate() {
        if x.is_inf() {
            continue;
        }
        for y in &positive[k + 1..] {
            basic.push(Interval::open((*x).clone(), (*y).clone()));
        }
        basic.push(Interval::final_from((*x).clone()));
    }
    let mut sets = std::collections::BTreeMap::new();
    for (a, ia) in basic.iter().enumerate() {
        for ib in basic[a..].iter() {
            let raw: Vec<Interval> = if ia == ib { vec![ia.clone()] } else { vec![ia.clone(), ib.clone()] };
            let u = RatioSet::normalize(&raw).expect("well-formed shapes");
            if !u.is_empty() && u.intervals().len() <= 2 {
                sets.insert(u.to_string(), u);
            }
        }
    }
    sets.into_values().collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchReport {
    pub sets: usize,
    pub inputs: u64,
    pub hypotheses_hold: u64,
    pub conclusion_verified: u64,
    pub fail_zero: u64,
    pub fail_notfull: u64,
    pub fail_chain: u64,
    pub chain_by_regions: u64,
    pub inconsistencies: Vec<String>,
    pub exhausted: bool,
}

impl SearchReport {
    fn merge(mut self, other: SearchReport) -> SearchReport {
        self.inputs += other.inputs;
        self.hypotheses_hold += other.hypotheses_hold;
        self.conclusion_verified += other.conclusion_verified;
        self.fail_zero += other.fail_zero;
        self.fail_notfull += other.fail_notfull;
        self.fail_chain += other.fail_chain;
        self.chain_by_regions += other.chain_by_regions;
        self.inconsistencies.extend(other.inconsistencies);
        self
    }
}

/// Runs the checker over every triple of candidate sets (in canonical order,
/// stopping after `budget` inputs). Each input is charged to its first
/// failing hypothesis; the chain is only examined when the first two hold.
pub fn ceva_search(pool: &[ExtRat], budget: Option<u64>) -> SearchReport {
    let sets = candidate_sets(pool);
    let n = sets.len() as u64;
    let total = n * n * n;
    let limit = budget.map_or(total, |b| b.min(total));
    let finite: Vec<Rat> = pool.iter().filter_map(|e| e.finite().cloned()).collect();
    let probes = ProbeSet::from_endpoints(&finite);
    let zero = ExtRat::zero();
    let has_zero: Vec<bool> = sets.iter().map(|u| u.contains(&zero)).collect();
    let full_ray: Vec<bool> = sets.iter().map(RatioSet::contains_finite_ray).collect();

    let chunk = n.max(1);
    let mut report = (0..limit.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut r = SearchReport::default();
            for idx in c * chunk..((c + 1) * chunk).min(limit) {
                let (a, b, d) = ((idx / (n * n)) as usize, ((idx / n) % n) as usize, (idx % n) as usize);
                r.inputs += 1;
                if !(has_zero[a] && has_zero[b] && has_zero[d]) {
                    r.fail_zero += 1;
                    continue;
                }
                if full_ray[a] || full_ray[b] {
                    r.fail_notfull += 1;
                    continue;
                }
                let input = CevaInput::new(sets[a].clone(), sets[b].clone(), sets[d].clone());
                match check_with(&input, Some(&probes)) {
                    Ok(v) => {
                        r.chain_by_regions += u64::from(v.chain_by_regions);
                        if v.holds() {
                            r.hypotheses_hold += 1;
                            r.conclusion_verified += u64::from(v.conclusion.is_some());
                        } else {
                            r.fail_chain += 1;
                        }
                    }
                    Err(e) => r.inconsistencies.push(e.to_string()),
                }
            }
            r
        })
        .reduce(SearchReport::default, SearchReport::merge);
    report.sets = sets.len();
    report.exhausted = limit < total;
    report
}

pub fn fmt_verdict(input: &CevaInput, v: &CevaVerdict) -> String {
    let mut out = String::new();
    out.push_str(&input.to_string());
    out.push_str(&format!("hyp_0 = {}\n", v.hyp_0));
    out.push_str(&format!("hyp_notfull = {}\n", v.hyp_notfull));
    out.push_str(&format!("hyp_chain = {}\n", v.hyp_chain));
    if let Some(b) = v.chain_break {
        out.push_str(&format!("chain_break = {b}\n"));
    }
    if let Some(w) = &v.witness {
        out.push_str(&format!("witness = {}\n", fmt_point(w)));
    }
    if let Some((x, y)) = &v.conclusion {
        out.push_str(&format!("conclusion = x {x}, y {y}, xy {}\n", x * y));
    }
    out
}
