//! ℓ-terms over named generators: syntax, exact evaluation and supports.

mod parse;
mod pl;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cones::{AmbientCone, Constraint, LinForm};
use crate::error::{Error, Result};
use crate::ratcore::Rat;

pub use parse::parse_lterm;
pub use pl::{asymp, compile_support, multiplier_bound, propto, propto_witness, PLFun, SupportMode};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LTerm {
    Zero,
    Var(String),
    Neg(Box<LTerm>),
    Add(Box<LTerm>, Box<LTerm>),
    Sub(Box<LTerm>, Box<LTerm>),
    Meet(Box<LTerm>, Box<LTerm>),
    Join(Box<LTerm>, Box<LTerm>),
    /// Positive rational multiple.
    Scale(Rat, Box<LTerm>),
    Pos(Box<LTerm>),
    Abs(Box<LTerm>),
}

impl LTerm {
    pub fn var(name: &str) -> LTerm {
        LTerm::Var(name.to_string())
    }

    pub fn neg(self) -> LTerm {
        LTerm::Neg(Box::new(self))
    }

    pub fn add(self, other: LTerm) -> LTerm {
        LTerm::Add(Box::new(self), Box::new(other))
    }

    pub fn sub(self, other: LTerm) -> LTerm {
        LTerm::Sub(Box::new(self), Box::new(other))
    }

    pub fn meet(self, other: LTerm) -> LTerm {
        LTerm::Meet(Box::new(self), Box::new(other))
    }

    pub fn join(self, other: LTerm) -> LTerm {
        LTerm::Join(Box::new(self), Box::new(other))
    }

    pub fn pos(self) -> LTerm {
        LTerm::Pos(Box::new(self))
    }

    pub fn abs(self) -> LTerm {
        LTerm::Abs(Box::new(self))
    }

    /// `q·self`; a scalar of one is dropped.
    pub fn scale(self, q: Rat) -> LTerm {
        assert!(q.is_positive(), "scalars must be positive");
        if q.is_one() {
            self
        } else {
            LTerm::Scale(q, Box::new(self))
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            LTerm::Zero => {}
            LTerm::Var(v) => {
                out.insert(v.clone());
            }
            LTerm::Neg(t) | LTerm::Scale(_, t) | LTerm::Pos(t) | LTerm::Abs(t) => t.collect_vars(out),
            LTerm::Add(s, t) | LTerm::Sub(s, t) | LTerm::Meet(s, t) | LTerm::Join(s, t) => {
                s.collect_vars(out);
                t.collect_vars(out);
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            LTerm::Zero | LTerm::Var(_) => 0,
            LTerm::Neg(t) | LTerm::Scale(_, t) | LTerm::Pos(t) | LTerm::Abs(t) => 1 + t.depth(),
            LTerm::Add(s, t) | LTerm::Sub(s, t) | LTerm::Meet(s, t) | LTerm::Join(s, t) => {
                1 + s.depth().max(t.depth())
            }
        }
    }

    pub fn eval(&self, env: &BTreeMap<String, Rat>) -> Result<Rat> {
        Ok(match self {
            LTerm::Zero => Rat::zero(),
            LTerm::Var(v) => env
                .get(v)
                .cloned()
                .ok_or_else(|| Error::UnboundVariable(v.clone()))?,
            LTerm::Neg(t) => -t.eval(env)?,
            LTerm::Add(s, t) => s.eval(env)? + t.eval(env)?,
            LTerm::Sub(s, t) => s.eval(env)? - t.eval(env)?,
            LTerm::Meet(s, t) => s.eval(env)?.min(t.eval(env)?),
            LTerm::Join(s, t) => s.eval(env)?.max(t.eval(env)?),
            LTerm::Scale(q, t) => q * t.eval(env)?,
            LTerm::Pos(t) => t.eval(env)?.max(Rat::zero()),
            LTerm::Abs(t) => t.eval(env)?.abs(),
        })
    }

    /// Replaces every variable by its image. Variables missing from `map`
    /// are an error.
    pub fn substitute(&self, map: &BTreeMap<String, LTerm>) -> Result<LTerm> {
        let un = |t: &LTerm| t.substitute(map).map(Box::new);
        Ok(match self {
            LTerm::Zero => LTerm::Zero,
            LTerm::Var(v) => map
                .get(v)
                .cloned()
                .ok_or_else(|| Error::UnboundVariable(v.clone()))?,
            LTerm::Neg(t) => LTerm::Neg(un(t)?),
            LTerm::Add(s, t) => LTerm::Add(un(s)?, un(t)?),
            LTerm::Sub(s, t) => LTerm::Sub(un(s)?, un(t)?),
            LTerm::Meet(s, t) => LTerm::Meet(un(s)?, un(t)?),
            LTerm::Join(s, t) => LTerm::Join(un(s)?, un(t)?),
            LTerm::Scale(q, t) => LTerm::Scale(q.clone(), un(t)?),
            LTerm::Pos(t) => LTerm::Pos(un(t)?),
            LTerm::Abs(t) => LTerm::Abs(un(t)?),
        })
    }

    /// Clears denominators: returns `(L, t')` where `t'` has no scalars and
    /// evaluates to `L·self` everywhere. Integer multiples become repeated sums.
    pub fn to_pure(&self) -> (BigInt, LTerm) {
        let mut l = BigInt::one();
        self.scalar_lcm(&Rat::one(), &mut l);
        let k = Rat::from_integer(l.clone());
        (l, self.times(&k))
    }

    /// Folds the denominators of all root-to-leaf scalar products into `acc`.
    fn scalar_lcm(&self, along: &Rat, acc: &mut BigInt) {
        match self {
            LTerm::Zero => {}
            LTerm::Var(_) => *acc = acc.lcm(along.denom()),
            LTerm::Scale(q, t) => t.scalar_lcm(&(along * q), acc),
            LTerm::Neg(t) | LTerm::Pos(t) | LTerm::Abs(t) => t.scalar_lcm(along, acc),
            LTerm::Add(s, t) | LTerm::Sub(s, t) | LTerm::Meet(s, t) | LTerm::Join(s, t) => {
                s.scalar_lcm(along, acc);
                t.scalar_lcm(along, acc);
            }
        }
    }

    fn times(&self, k: &Rat) -> LTerm {
        let b = |t: &LTerm| Box::new(t.times(k));
        match self {
            LTerm::Zero => LTerm::Zero,
            LTerm::Var(_) => {
                assert!(k.is_integer(), "denominators were not cleared");
                let n: usize = k.to_integer().try_into().expect("multiplier too large");
                let mut acc = self.clone();
                for _ in 1..n {
                    acc = acc.add(self.clone());
                }
                acc
            }
            LTerm::Neg(t) => LTerm::Neg(b(t)),
            LTerm::Add(s, t) => LTerm::Add(b(s), b(t)),
            LTerm::Sub(s, t) => LTerm::Sub(b(s), b(t)),
            LTerm::Meet(s, t) => LTerm::Meet(b(s), b(t)),
            LTerm::Join(s, t) => LTerm::Join(b(s), b(t)),
            LTerm::Scale(q, t) => t.times(&(k * q)),
            LTerm::Pos(t) => LTerm::Pos(b(t)),
            LTerm::Abs(t) => LTerm::Abs(b(t)),
        }
    }

    pub fn is_pure(&self) -> bool {
        match self {
            LTerm::Zero | LTerm::Var(_) => true,
            LTerm::Scale(..) => false,
            LTerm::Neg(t) | LTerm::Pos(t) | LTerm::Abs(t) => t.is_pure(),
            LTerm::Add(s, t) | LTerm::Sub(s, t) | LTerm::Meet(s, t) | LTerm::Join(s, t) => {
                s.is_pure() && t.is_pure()
            }
        }
    }

    fn write_prec(&self, f: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
        let own = match self {
            LTerm::Add(..) | LTerm::Sub(..) => 1,
            LTerm::Join(..) => 2,
            LTerm::Meet(..) => 3,
            LTerm::Neg(_) | LTerm::Scale(..) => 4,
            _ => 5,
        };
        if own < ctx {
            f.write_str("(")?;
        }
        match self {
            LTerm::Zero => f.write_str("0")?,
            LTerm::Var(v) => f.write_str(v)?,
            LTerm::Add(s, t) | LTerm::Sub(s, t) => {
                s.write_prec(f, 1)?;
                f.write_str(if matches!(self, LTerm::Add(..)) { " + " } else { " - " })?;
                t.write_prec(f, 2)?;
            }
            LTerm::Join(s, t) => {
                s.write_prec(f, 2)?;
                f.write_str(" \\/ ")?;
                t.write_prec(f, 3)?;
            }
            LTerm::Meet(s, t) => {
                s.write_prec(f, 3)?;
                f.write_str(" /\\ ")?;
                t.write_prec(f, 4)?;
            }
            LTerm::Neg(t) => {
                f.write_str("-")?;
                t.write_prec(f, 4)?;
            }
            LTerm::Scale(q, t) => {
                write!(f, "{q}*")?;
                t.write_prec(f, 4)?;
            }
            LTerm::Pos(t) => {
                f.write_str("pos(")?;
                t.write_prec(f, 0)?;
                f.write_str(")")?;
            }
            LTerm::Abs(t) => {
                f.write_str("abs(")?;
                t.write_prec(f, 0)?;
                f.write_str(")")?;
            }
        }
        if own < ctx {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for LTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0)
    }
}

impl std::str::FromStr for LTerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_lterm(s)
    }
}

/// An Abelian ℓ-group presented by generators and weak linear relations,
/// realized on the cone of generator values satisfying those relations.
#[derive(Debug, Clone)]
pub struct Presentation {
    pub name: String,
    pub generators: Vec<String>,
    pub ambient: Arc<AmbientCone>,
}

impl Presentation {
    pub fn new(name: &str, generators: &[&str], relations: Vec<Constraint>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for g in generators {
            if !seen.insert(*g) {
                return Err(Error::validation(format!("generator `{g}` listed twice")));
            }
        }
        let ambient = if relations.is_empty() {
            AmbientCone::trivial(generators.len())
        } else {
            AmbientCone::new(format!("K{name}"), generators.len(), relations)?
        };
        Ok(Presentation {
            name: name.to_string(),
            generators: generators.iter().map(|g| g.to_string()).collect(),
            ambient: Arc::new(ambient),
        })
    }

    /// Nonnegative generators without further relations.
    pub fn free(name: &str, generators: &[&str]) -> Self {
        Presentation::new(name, generators, Vec::new()).expect("distinct generators")
    }

    /// The presentations attached to the cube `{∅,1,2,3,12,13,23,123}`:
    /// `a`, `b`, `c` for the singletons, pairs taking the matching
    /// generators with `a′` standing in for `a` next to `c`, and
    /// `(a, a′, b, c)` with `a ≤ a′ ≤ 2a` at the top.
    pub fn cube(p: &str) -> Result<Self> {
        let name = if p.is_empty() || p == "0" || p == "∅" { "∅" } else { p };
        match name {
            "∅" => Ok(Presentation::free("∅", &[])),
            "1" => Ok(Presentation::free("1", &["a"])),
            "2" => Ok(Presentation::free("2", &["b"])),
            "3" => Ok(Presentation::free("3", &["c"])),
            "12" => Ok(Presentation::free("12", &["a", "b"])),
            "13" => Ok(Presentation::free("13", &["a'", "c"])),
            "23" => Ok(Presentation::free("23", &["b", "c"])),
            "123" => Presentation::new(
                "123",
                &["a", "a'", "b", "c"],
                vec![
                    Constraint::ge(LinForm::from_ints(&[-1, 1, 0, 0])),
                    Constraint::ge(LinForm::from_ints(&[2, -1, 0, 0])),
                ],
            ),
            other => Err(Error::validation(format!("no cube presentation named `{other}`"))),
        }
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.generators
            .iter()
            .position(|g| g == name)
            .ok_or_else(|| Error::UnboundVariable(name.to_string()))
    }

    pub fn env(&self, point: &[Rat]) -> BTreeMap<String, Rat> {
        self.generators.iter().cloned().zip(point.iter().cloned()).collect()
    }

    /// Evaluates `t` at a point of generator values, which must satisfy the
    /// defining relations.
    pub fn eval(&self, t: &LTerm, point: &[Rat]) -> Result<Rat> {
        if point.len() != self.dim() {
            return Err(Error::validation(format!(
                "{} expects {} generator values, got {}",
                self.name,
                self.dim(),
                point.len()
            )));
        }
        if let Some(v) = point.iter().position(|x| x.is_negative()) {
            return Err(Error::RelationViolated(format!("{} >= 0", self.generators[v])));
        }
        if let Some(rel) = self.ambient.violated(point) {
            return Err(Error::RelationViolated(self.describe(&rel)));
        }
        t.eval(&self.env(point))
    }

    /// Rewrites `x1, x2, ...` in a constraint's text with generator names.
    fn describe(&self, text: &str) -> String {
        let mut out = text.to_string();
        for (k, g) in self.generators.iter().enumerate().rev() {
            out = out.replace(&format!("x{}", k + 1), g);
        }
        out
    }
}
