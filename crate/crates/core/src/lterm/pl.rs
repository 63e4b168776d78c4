//! Piecewise-linear realization of ℓ-terms on a presentation cone.

use std::sync::Arc;

use num_traits::Zero;

use super::{LTerm, Presentation};
use crate::cones::{cell_witness, AmbientCone, Cell, Constraint, LinForm, Region};
use crate::error::{Error, Result};
use crate::ratcore::{int, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportMode {
    Nonzero,
    Positive,
}

/// A term as a list of linear pieces. The cells cover the ambient cone
/// (up to the origin) and are pairwise disjoint.
#[derive(Debug, Clone)]
pub struct PLFun {
    pub ambient: Arc<AmbientCone>,
    pub pieces: Vec<(Cell, LinForm)>,
}

fn nonempty(ambient: &AmbientCone, cell: &Cell) -> Result<bool> {
    Ok(cell_witness(ambient, cell)?.is_some())
}

fn push_unique(cell: &Cell, c: Constraint) -> Cell {
    if cell.constraints.contains(&c) {
        cell.clone()
    } else {
        cell.with(&[c])
    }
}

impl PLFun {
    pub fn build(t: &LTerm, p: &Presentation) -> Result<PLFun> {
        let pieces = Builder { p }.pieces(t)?;
        Ok(PLFun {
            ambient: p.ambient.clone(),
            pieces,
        })
    }

    /// Value at a point of the ambient cone.
    pub fn eval(&self, point: &[Rat]) -> Option<Rat> {
        if point.iter().all(Zero::is_zero) {
            return Some(Rat::zero());
        }
        self.pieces
            .iter()
            .find(|(cell, _)| cell.holds(point))
            .map(|(_, f)| f.eval(point))
    }

    pub fn support(&self, mode: SupportMode) -> Result<Region> {
        let mut cells = Vec::new();
        for (cell, f) in &self.pieces {
            if f.is_zero() {
                continue;
            }
            let mut signs = vec![f.clone()];
            if mode == SupportMode::Nonzero {
                signs.push(f.neg());
            }
            for g in signs {
                let c = cell.with(&[Constraint::gt(g)]);
                if nonempty(&self.ambient, &c)? {
                    cells.push(c);
                }
            }
        }
        Region::from_cells(self.ambient.clone(), cells)
    }
}

struct Builder<'a> {
    p: &'a Presentation,
}

type Pieces = Vec<(Cell, LinForm)>;

impl Builder<'_> {
    fn single(&self, f: LinForm) -> Pieces {
        vec![(Cell::default(), f)]
    }

    fn pieces(&self, t: &LTerm) -> Result<Pieces> {
        let n = self.p.dim();
        Ok(match t {
            LTerm::Zero => self.single(LinForm::zero(n)),
            LTerm::Var(v) => self.single(LinForm::coord(n, self.p.index(v)?)),
            LTerm::Neg(s) => self.map(self.pieces(s)?, |f| f.neg()),
            LTerm::Scale(q, s) => self.map(self.pieces(s)?, |f| f.scale(q)),
            LTerm::Add(s, u) => self.combine(self.pieces(s)?, self.pieces(u)?, |f, g| f.add(g))?,
            LTerm::Sub(s, u) => self.combine(self.pieces(s)?, self.pieces(u)?, |f, g| f.sub(g))?,
            LTerm::Meet(s, u) => self.lattice(self.pieces(s)?, self.pieces(u)?, false)?,
            LTerm::Join(s, u) => self.lattice(self.pieces(s)?, self.pieces(u)?, true)?,
            LTerm::Pos(s) => self.lattice(self.pieces(s)?, self.single(LinForm::zero(n)), true)?,
            LTerm::Abs(s) => {
                let ps = self.pieces(s)?;
                let neg = self.map(ps.clone(), |f| f.neg());
                self.pointwise_lattice(ps, neg, true)?
            }
        })
    }

    fn map(&self, ps: Pieces, f: impl Fn(&LinForm) -> LinForm) -> Pieces {
        ps.into_iter().map(|(c, g)| (c, f(&g))).collect()
    }

    /// Overlays two piece lists, keeping the nonempty intersections.
    fn overlay(&self, a: Pieces, b: Pieces) -> Result<Vec<(Cell, LinForm, LinForm)>> {
        let mut out = Vec::new();
        for (ca, fa) in &a {
            for (cb, fb) in &b {
                let cell = if ca.constraints.is_empty() {
                    cb.clone()
                } else if cb.constraints.is_empty() {
                    ca.clone()
                } else {
                    let mut c = ca.clone();
                    for k in &cb.constraints {
                        c = push_unique(&c, k.clone());
                    }
                    c
                };
                let trivial = a.len() == 1 || b.len() == 1;
                if trivial || nonempty(&self.p.ambient, &cell)? {
                    out.push((cell, fa.clone(), fb.clone()));
                }
            }
        }
        Ok(out)
    }

    fn combine(&self, a: Pieces, b: Pieces, op: impl Fn(&LinForm, &LinForm) -> LinForm) -> Result<Pieces> {
        Ok(self
            .overlay(a, b)?
            .into_iter()
            .map(|(c, f, g)| (c, op(&f, &g)))
            .collect())
    }

    fn lattice(&self, a: Pieces, b: Pieces, join: bool) -> Result<Pieces> {
        let overlaid = self.overlay(a, b)?;
        self.split(overlaid, join)
    }

    /// Same as `lattice` for two lists sharing one cell decomposition.
    fn pointwise_lattice(&self, a: Pieces, b: Pieces, join: bool) -> Result<Pieces> {
        let zipped = a
            .into_iter()
            .zip(b)
            .map(|((c, f), (_, g))| (c, f, g))
            .collect();
        self.split(zipped, join)
    }

    /// Splits each cell by the sign of `f − g` and keeps the larger (join) or
    /// smaller (meet) form on each side.
    fn split(&self, parts: Vec<(Cell, LinForm, LinForm)>, join: bool) -> Result<Pieces> {
        let mut out = Vec::new();
        for (cell, f, g) in parts {
            let d = f.sub(&g);
            if d.is_zero() {
                out.push((cell, f));
                continue;
            }
            let (hi, lo) = (f, g);
            let upper = push_unique(&cell, Constraint::ge(d.clone()));
            let lower = push_unique(&cell, Constraint::gt(d.neg()));
            let up_ok = nonempty(&self.p.ambient, &upper)?;
            let low_ok = nonempty(&self.p.ambient, &lower)?;
            match (up_ok, low_ok) {
                (true, false) => out.push((cell, if join { hi } else { lo })),
                (false, true) => out.push((cell, if join { lo } else { hi })),
                (true, true) => {
                    if join {
                        out.push((upper, hi));
                        out.push((lower, lo));
                    } else {
                        out.push((upper, lo));
                        out.push((lower, hi));
                    }
                }
                (false, false) => {}
            }
        }
        Ok(out)
    }
}

fn check_vars(t: &LTerm, p: &Presentation) -> Result<()> {
    for v in t.vars() {
        p.index(&v)?;
    }
    Ok(())
}

/// `⟦t ≠ 0⟧` or `⟦t > 0⟧` on the presentation cone.
pub fn compile_support(t: &LTerm, p: &Presentation, mode: SupportMode) -> Result<Region> {
    check_vars(t, p)?;
    PLFun::build(t, p)?.support(mode)
}

/// `None` when `s ∝ t`, else a point where `s ≠ 0 = t`.
pub fn propto_witness(s: &LTerm, t: &LTerm, p: &Presentation) -> Result<Option<Vec<Rat>>> {
    let a = compile_support(s, p, SupportMode::Nonzero)?;
    let b = compile_support(t, p, SupportMode::Nonzero)?;
    a.subset_witness(&b)
}

pub fn propto(s: &LTerm, t: &LTerm, p: &Presentation) -> Result<bool> {
    Ok(propto_witness(s, t, p)?.is_none())
}

pub fn asymp(s: &LTerm, t: &LTerm, p: &Presentation) -> Result<bool> {
    Ok(propto(s, t, p)? && propto(t, s, p)?)
}

/// Smallest power of two `n ≤ 2^max_doublings` with `|s| ≤ n·|t|` on the
/// whole cone, if any.
pub fn multiplier_bound(s: &LTerm, t: &LTerm, p: &Presentation, max_doublings: u32) -> Result<Option<u64>> {
    check_vars(s, p)?;
    check_vars(t, p)?;
    let mut n: u64 = 1;
    for _ in 0..=max_doublings {
        let gap = s.clone().abs().sub(t.clone().abs().scale(int(n as i64)));
        let over = compile_support(&gap, p, SupportMode::Positive)?;
        if over.is_empty()? {
            return Ok(Some(n));
        }
        n = n.checked_mul(2).ok_or_else(|| Error::validation("multiplier overflow"))?;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::super::tests::arb_term;
    use super::*;
    use crate::ratcore::int;
    use num_traits::Signed;
    use crate::lterm::parse_lterm;
    use proptest::prelude::*;

    fn t(src: &str) -> LTerm {
        parse_lterm(src).unwrap()
    }

    #[test]
    fn meet_and_join_of_coordinates() {
        let p = Presentation::free("12", &["x1", "x2"]);
        let r = compile_support(&t("x1 /\\ x2"), &p, SupportMode::Nonzero).unwrap();
        let both = Region::half_space(p.ambient.clone(), LinForm::from_ints(&[1, 0]))
            .unwrap()
            .meet(&Region::half_space(p.ambient.clone(), LinForm::from_ints(&[0, 1])).unwrap())
            .unwrap();
        assert!(r.equals(&both).unwrap());

        let r = compile_support(&t("x1 \\/ x2"), &p, SupportMode::Nonzero).unwrap();
        assert!(r.equals(&Region::unit(p.ambient.clone())).unwrap());
    }

    #[test]
    fn positive_part_support() {
        let p = Presentation::cube("12").unwrap();
        let r = compile_support(&t("pos(a - b)"), &p, SupportMode::Nonzero).unwrap();
        let h = Region::half_space(p.ambient.clone(), LinForm::from_ints(&[1, -1])).unwrap();
        assert!(r.equals(&h).unwrap());
    }

    #[test]
    fn supports_on_the_top_cone() {
        let p = Presentation::cube("123").unwrap();
        assert!(asymp(&t("a"), &t("a'"), &p).unwrap());
        assert!(propto(&LTerm::Zero, &t("pos(a - c)"), &p).unwrap());
        // on the free cone a' is independent of a
        let q = Presentation::free("aa'", &["a", "a'"]);
        assert!(!propto(&t("a'"), &t("a"), &q).unwrap());

        let f = t("pos(2*a' - c)");
        let w = propto_witness(&f, &LTerm::Zero, &p).unwrap().expect("nonzero term");
        assert!(p.eval(&f, &w).unwrap() > Rat::zero());
    }

    #[test]
    fn multiples() {
        let p = Presentation::cube("123").unwrap();
        assert_eq!(multiplier_bound(&t("a'"), &t("a"), &p, 4).unwrap(), Some(2));
        assert_eq!(multiplier_bound(&t("a"), &t("a'"), &p, 4).unwrap(), Some(1));
        assert_eq!(multiplier_bound(&t("b"), &t("a"), &p, 6).unwrap(), None);
    }

    #[test]
    fn unbound_variables_are_named() {
        let p = Presentation::cube("12").unwrap();
        let err = compile_support(&t("a + z"), &p, SupportMode::Nonzero).unwrap_err();
        assert_eq!(err, Error::UnboundVariable("z".into()));
    }

    fn point(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&v| int(v)).collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn pieces_agree_with_the_tree(
            s in arb_term(&["a", "b", "c"], 4),
            pts in proptest::collection::vec(proptest::collection::vec(0i64..7, 3), 20),
        ) {
            let p = Presentation::free("abc", &["a", "b", "c"]);
            let pl = PLFun::build(&s, &p).unwrap();
            for xs in pts {
                let x = point(&xs);
                prop_assert_eq!(pl.eval(&x), Some(p.eval(&s, &x).unwrap()), "{} at {:?}", s, xs);
            }
        }

        #[test]
        fn support_matches_sign(
            s in arb_term(&["a", "b"], 3),
            pts in proptest::collection::vec(proptest::collection::vec(0i64..6, 2), 20),
        ) {
            let p = Presentation::free("ab", &["a", "b"]);
            let nz = compile_support(&s, &p, SupportMode::Nonzero).unwrap();
            let pos = compile_support(&s, &p, SupportMode::Positive).unwrap();
            for xs in pts {
                let x = point(&xs);
                let v = p.eval(&s, &x).unwrap();
                prop_assert_eq!(nz.contains(&x), !v.is_zero());
                prop_assert_eq!(pos.contains(&x), v.is_positive());
            }
        }
    }
}
