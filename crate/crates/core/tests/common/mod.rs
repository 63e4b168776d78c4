//! Independent oracles shared by the integration tests. Nothing here calls
//! the simplex code or the region algebra of the library.
#![allow(dead_code)]

use std::sync::Arc;

use cevian_core::cones::{AmbientCone, Cell, Constraint, LinForm, Region, Rel};
use cevian_core::finlat::FinDistLattice;
use cevian_core::lterm::LTerm;
use cevian_core::ratcore::{int, rat, Rat};
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
struct Row {
    coef: Vec<Rat>,
    rel: Rel,
}

/// Feasibility of a homogeneous system `aᵢ·x ⋈ 0` by Fourier–Motzkin
/// elimination, strictness tracked through each combination.
pub fn fm_feasible(dim: usize, system: &[Constraint]) -> bool {
    let mut rows: Vec<Row> = system
        .iter()
        .map(|c| Row {
            coef: c.form.0.clone(),
            rel: c.rel,
        })
        .collect();
    for k in 0..dim {
        if let Some(pos) = rows.iter().position(|r| r.rel == Rel::Eq && !r.coef[k].is_zero()) {
            let pivot = rows.remove(pos);
            for r in rows.iter_mut() {
                if r.coef[k].is_zero() {
                    continue;
                }
                let f = &r.coef[k] / &pivot.coef[k];
                for (a, b) in r.coef.iter_mut().zip(&pivot.coef) {
                    *a -= &f * b;
                }
            }
            continue;
        }
        let (mut lower, mut upper, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in rows {
            if r.coef[k].is_positive() {
                lower.push(r);
            } else if r.coef[k].is_negative() {
                upper.push(r);
            } else {
                rest.push(r);
            }
        }
        for l in &lower {
            for u in &upper {
                let (a, b) = (&l.coef[k], -&u.coef[k]);
                let coef = l.coef.iter().zip(&u.coef).map(|(x, y)| x * &b + y * a).collect();
                let rel = if l.rel == Rel::Gt || u.rel == Rel::Gt { Rel::Gt } else { Rel::Ge };
                rest.push(Row { coef, rel });
            }
        }
        rows = rest;
        rows.dedup_by(|a, b| a.coef == b.coef && a.rel == b.rel);
    }
    // only the constant 0 is left on the left-hand side
    rows.iter().all(|r| r.rel != Rel::Gt)
}

fn ambient_rows(k: &AmbientCone) -> Vec<Constraint> {
    let mut rows: Vec<Constraint> = (0..k.dim).map(|i| Constraint::ge(LinForm::coord(k.dim, i))).collect();
    rows.extend(k.constraints.iter().cloned());
    rows
}

fn negations(c: &Constraint) -> Vec<Constraint> {
    let f = &c.form;
    match c.rel {
        Rel::Gt => vec![Constraint::ge(f.neg())],
        Rel::Ge => vec![Constraint::gt(f.neg())],
        Rel::Eq => vec![Constraint::gt(f.clone()), Constraint::gt(f.neg())],
    }
}

/// `A ⊆ B`: each cell of `A` together with one violated constraint from every
/// cell of `B` must be infeasible.
pub fn fm_subset(a: &Region, b: &Region) -> bool {
    let amb = ambient_rows(a.ambient());
    let dim = a.dim();
    for cell in a.cells() {
        let mut base = amb.clone();
        base.extend(cell.constraints.iter().cloned());
        if !fm_feasible(dim, &base) {
            continue;
        }
        // depth-first over the choice of violated constraint per cell of B
        fn search(dim: usize, sys: &mut Vec<Constraint>, rest: &[Cell]) -> bool {
            let Some((first, tail)) = rest.split_first() else {
                return fm_feasible(dim, sys);
            };
            if !fm_feasible(dim, sys) {
                return false;
            }
            for c in &first.constraints {
                for n in negations(c) {
                    sys.push(n);
                    let hit = search(dim, sys, tail);
                    sys.pop();
                    if hit {
                        return true;
                    }
                }
            }
            false
        }
        if search(dim, &mut base, b.cells()) {
            return false;
        }
    }
    true
}

pub fn fm_empty(a: &Region) -> bool {
    fm_subset(a, &Region::zero(a.ambient().clone()))
}

/// Every point of `{0..=n}^dim`, except the origin.
pub fn grid(dim: usize, n: i64) -> Vec<Vec<Rat>> {
    let mut out: Vec<Vec<Rat>> = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=n).map(move |v| {
                    let mut q = p.clone();
                    q.push(int(v));
                    q
                })
            })
            .collect();
    }
    out.into_iter().filter(|p| p.iter().any(|x| !x.is_zero())).collect()
}

/// `A ⊆ B` on the sample points. Cones are scale invariant, so the integer
/// grid stands for every rational point with denominators up to `n`.
pub fn grid_subset(a: &Region, b: &Region, points: &[Vec<Rat>]) -> bool {
    points.iter().all(|p| !a.contains(p) || b.contains(p))
}

pub fn random_form(rng: &mut ChaCha8Rng, dim: usize) -> LinForm {
    loop {
        let coeffs: Vec<i64> = (0..dim).map(|_| rng.gen_range(-2..=2)).collect();
        if coeffs.iter().any(|&c| c != 0) {
            return LinForm::from_ints(&coeffs);
        }
    }
}

/// A union of one to three cells of one to three constraints each; every
/// cell carries at least one strict constraint.
pub fn random_region(rng: &mut ChaCha8Rng, ambient: &Arc<AmbientCone>) -> Region {
    let dim = ambient.dim;
    let cells = (0..rng.gen_range(1..=3))
        .map(|_| {
            let mut cs = vec![Constraint::gt(random_form(rng, dim))];
            for _ in 0..rng.gen_range(0..=2) {
                let f = random_form(rng, dim);
                cs.push(match rng.gen_range(0..6) {
                    0 => Constraint::eq(f),
                    1 | 2 => Constraint::ge(f),
                    _ => Constraint::gt(f),
                });
            }
            Cell::new(cs)
        })
        .collect();
    Region::from_cells(ambient.clone(), cells).unwrap()
}

pub fn random_term(rng: &mut ChaCha8Rng, vars: &[&str], depth: u32) -> LTerm {
    if depth == 0 || rng.gen_range(0..4) == 0 {
        return if rng.gen_range(0..8) == 0 {
            LTerm::Zero
        } else {
            LTerm::var(vars[rng.gen_range(0..vars.len())])
        };
    }
    let mut sub = || random_term(rng, vars, depth - 1);
    let (s, t) = (sub(), sub());
    match rng.gen_range(0..8) {
        0 => s.neg(),
        1 => s.add(t),
        2 => s.sub(t),
        3 => s.meet(t),
        4 => s.join(t),
        5 => s.pos(),
        6 => s.abs(),
        _ => s.scale(rat(rng.gen_range(1..5), rng.gen_range(1..4))),
    }
}

pub fn random_point(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Rat> {
    loop {
        let p: Vec<Rat> = (0..dim).map(|_| rat(rng.gen_range(0..7), rng.gen_range(1..4))).collect();
        if p.iter().any(|x| !x.is_zero()) {
            return p;
        }
    }
}

/// The defining condition, searched directly: `x ≤ y∨u`, `y ≤ x∨v`, `u∧v = 0`.
pub fn normal_by_search(d: &FinDistLattice) -> bool {
    let n = d.len();
    (0..n).all(|x| {
        (0..n).all(|y| {
            (0..n).any(|u| {
                d.leq(x, d.join(y, u)) && (0..n).any(|v| d.leq(y, d.join(x, v)) && d.meet(u, v) == 0)
            })
        })
    })
}

/// The minimum of `{x : a ≤ b∨x}`, found by scanning every element.
pub fn min_diff_by_search(d: &FinDistLattice, a: usize, b: usize) -> usize {
    let n = d.len();
    let cands: Vec<usize> = (0..n).filter(|&x| d.leq(a, d.join(b, x))).collect();
    let m = *cands
        .iter()
        .find(|&&x| cands.iter().all(|&y| d.leq(x, y)))
        .expect("a⊖b has a least element");
    m
}

/// Cev1, Cev2, Cev3 and the derived `(x∖y)∧(y∖z) ≤ x∖z` straight from
/// their statements; returns the name of the first law that fails.
pub fn axioms_by_sweep(d: &FinDistLattice, op: impl Fn(usize, usize) -> usize) -> Option<&'static str> {
    let n = d.len();
    for x in 0..n {
        for y in 0..n {
            if !d.leq(x, d.join(y, op(x, y))) {
                return Some("Cev1");
            }
            if d.meet(op(x, y), op(y, x)) != 0 {
                return Some("Cev2");
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if !d.leq(op(x, z), d.join(op(x, y), op(y, z))) {
                    return Some("Cev3");
                }
                if !d.leq(d.meet(op(x, y), op(y, z)), op(x, z)) {
                    return Some("derived");
                }
            }
        }
    }
    None
}

/// Valuations `X → {0,1}` satisfying the three relation families, by
/// enumerating every subset of `X` and testing each relation literally.
/// `leq[u][v]` is the order of `X`.
pub fn valuations_by_search(leq: &[Vec<bool>]) -> Vec<u32> {
    let n = leq.len();
    let upper = |z: &[usize]| -> Vec<usize> { (0..n).filter(|&w| z.iter().all(|&u| leq[u][w])).collect() };
    let minimal = |s: &[usize]| -> Vec<usize> {
        s.iter()
            .copied()
            .filter(|&w| !s.iter().any(|&v| v != w && leq[v][w]))
            .collect()
    };
    let on = |val: u32, u: usize| val >> u & 1 == 1;
    (0u32..1 << n)
        .filter(|&val| {
            for u in 0..n {
                for v in 0..n {
                    if leq[u][v] && on(val, v) && !on(val, u) {
                        return false;
                    }
                    let nab = minimal(&upper(&[u, v]));
                    if (on(val, u) && on(val, v)) != nab.iter().any(|&w| on(val, w)) {
                        return false;
                    }
                }
            }
            minimal(&upper(&[])).iter().any(|&w| on(val, w))
        })
        .collect()
}
