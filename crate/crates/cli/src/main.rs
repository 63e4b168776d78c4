mod plot;
mod report;
mod scenario;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use cevian_core::ceva::{ceva_check, ceva_converse_check, ceva_search, fmt_verdict, CevaInput};
use cevian_core::cones::{fmt_point, LinForm, Region};
use cevian_core::diagrams::{
    build_diagram_a, build_diagram_d, check_idc_collapse, eta, lemma43_check, lemma43_refute_pipeline,
    lemma43_scan, verify_a, verify_d, verify_eta, CevianCandidate, CommutativityReport, Condition, DElem, DObj,
};
use cevian_core::error::Error;
use cevian_core::finlat::{cevian_solve, lattice_of, posets_up_to_iso, FinDistLattice};
use cevian_core::lterm::LTerm;
use cevian_core::psbool::{check_morphism, is_surjective, tensor, tensor_morphism};
use cevian_core::ratcore::{parse_rat, ExtRat, Rat};

use report::{sha256_hex, Format, Outcome, Report};

#[derive(Parser, Debug)]
#[command(
    name = "cevian",
    version,
    about = "Exact checkers for Ceva configurations, cone diagrams and Cevian operations on finite lattices"
)]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = ReportFormat::Text)]
    report: ReportFormat,
    /// Worker threads for the parallel checkers (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Include wall-clock timings in the report.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Ratio-set configurations in dimension three.
    #[command(subcommand)]
    Ceva(CevaCmd),
    /// Six-term families on the top cube presentation.
    #[command(subcommand)]
    Lemma43(Lemma43Cmd),
    /// Finite distributive lattices.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// The presentation and cone diagrams over the cube.
    #[command(subcommand)]
    Diagram(DiagramCmd),
    /// Tensor a finitely presented scaled Boolean algebra with a diagram.
    Condensate { file: PathBuf },
    /// Region queries on a polyhedral cone.
    #[command(subcommand)]
    Cone(ConeCmd),
    /// SVG figures.
    #[command(subcommand)]
    Plot(PlotCmd),
}

#[derive(Subcommand, Debug)]
enum CevaCmd {
    /// Check the three hypotheses and extract the configuration.
    Check { file: PathBuf },
    /// Run the checker over every input built from an endpoint pool.
    Search {
        #[arg(long, default_value = "1/3,1/2,1,2,3,inf")]
        pool: String,
        /// Stop after this many inputs.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Confirm that `[0,x)`, `[0,y)`, `[0,xy)` satisfies the hypotheses.
    Converse { x: String, y: String },
}

#[derive(Subcommand, Debug)]
enum Lemma43Cmd {
    /// Find the first failing condition of one family, then refute it.
    Check { file: PathBuf },
    /// Scan every family built from the term pool.
    Scan {
        #[arg(long, default_value_t = 1)]
        pool_depth: usize,
    },
}

#[derive(Subcommand, Debug)]
enum LatticeCmd {
    /// Decide complete normality.
    Normal { file: PathBuf },
    /// Search for a Cevian operation.
    Cevian { file: PathBuf },
    /// Compare the solver with complete normality on every small lattice.
    Enum {
        #[arg(long, default_value_t = 4)]
        max_ji: usize,
    },
}

#[derive(Subcommand, Debug)]
enum DiagramCmd {
    /// Verify commutativity, or the naturality squares of the support map.
    Verify {
        #[arg(value_enum)]
        which: Which,
        /// Term pool depth for `eta`.
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Which {
    #[value(name = "A")]
    A,
    #[value(name = "D")]
    D,
    #[value(name = "eta")]
    Eta,
}

#[derive(Subcommand, Debug)]
enum ConeCmd {
    /// Is region A empty?
    Empty { file: PathBuf },
    /// Is A inside B?
    Subset { file: PathBuf },
    /// A ∩ B
    Meet { file: PathBuf },
    /// A ∪ B
    Join { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum PlotCmd {
    /// Draw a ratio-set input on the 2-simplex.
    Ceva {
        /// A `kind = ceva` file; omit it when giving `--xy`.
        file: Option<PathBuf>,
        /// Draw the configuration with these `x` and `y`.
        #[arg(long, num_args = 2, value_names = ["X", "Y"], conflicts_with = "file")]
        xy: Option<Vec<String>>,
        #[arg(long, short)]
        out: PathBuf,
    },
}

/// Why a command stopped early: bad input, or an error from a checker.
enum Stop {
    Usage(String),
    Checker(Error),
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        Stop::Checker(e)
    }
}

fn usage(e: impl ToString) -> Stop {
    Stop::Usage(e.to_string())
}

type Run = std::result::Result<(), Stop>;

fn read_input(path: &Path, rep: &mut Report) -> std::result::Result<String, Stop> {
    let bytes = std::fs::read(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    rep.hash_input(&bytes);
    String::from_utf8(bytes).map_err(|_| usage(format!("{} is not UTF-8", path.display())))
}

fn ratio_arg(s: &str) -> std::result::Result<Rat, Stop> {
    parse_rat(s).map_err(|e| usage(format!("`{s}`: {e}")))
}

fn ceva(cmd: &CevaCmd, rep: &mut Report) -> Run {
    match cmd {
        CevaCmd::Check { file } => {
            let src = read_input(file, rep)?;
            scenario::expect_kind(&src, "ceva").map_err(usage)?;
            let input = CevaInput::parse(&src).map_err(usage)?;
            let t = Instant::now();
            let v = ceva_check(&input)?;
            rep.time("check", t.elapsed());
            rep.put_lines("verdict", &fmt_verdict(&input, &v));
            match v.first_failure() {
                None => rep.finish(Outcome::Pass, "hypotheses hold and the configuration is verified"),
                Some(h) => rep.finish(Outcome::Fail, format!("hypothesis fails: {h}")),
            }
        }
        CevaCmd::Search { pool, budget } => {
            let pool: Vec<ExtRat> = pool
                .split(',')
                .map(|s| s.trim().parse::<ExtRat>().map_err(|e| usage(format!("pool entry `{s}`: {e}"))))
                .collect::<std::result::Result<_, _>>()?;
            let t = Instant::now();
            let r = ceva_search(&pool, *budget);
            rep.time("search", t.elapsed());
            rep.put("candidate sets", r.sets);
            rep.put("inputs", r.inputs);
            rep.put("hypotheses hold", r.hypotheses_hold);
            rep.put("conclusion verified", r.conclusion_verified);
            rep.put("first failure: zero", r.fail_zero);
            rep.put("first failure: full ray", r.fail_notfull);
            rep.put("first failure: chain", r.fail_chain);
            rep.put("chain decided by regions", r.chain_by_regions);
            rep.put("stopped by budget", r.exhausted);
            rep.put("inconsistencies", json!(r.inconsistencies));
            if r.inconsistencies.is_empty() && r.conclusion_verified == r.hypotheses_hold {
                rep.finish(Outcome::Pass, "every input meeting the hypotheses has a verified configuration");
            } else {
                rep.finish(Outcome::Inconsistent, format!("{} inconsistencies", r.inconsistencies.len()));
            }
        }
        CevaCmd::Converse { x, y } => {
            let (x, y) = (ratio_arg(x)?, ratio_arg(y)?);
            let xy = &x * &y;
            rep.put("x", x.to_string());
            rep.put("y", y.to_string());
            rep.put("xy", xy.to_string());
            rep.put("(x, y, xy)", format!("({x}, {y}, {xy})"));
            let ok = ceva_converse_check(&x, &y).map_err(|e| match e {
                Error::Validation(m) => Stop::Usage(m),
                other => Stop::Checker(other),
            })?;
            if ok {
                rep.finish(Outcome::Pass, "the configuration satisfies every hypothesis");
            } else {
                rep.finish(Outcome::Inconsistent, "a configuration failed the hypotheses");
            }
        }
    }
    Ok(())
}

fn lemma43(cmd: &Lemma43Cmd, rep: &mut Report) -> Run {
    match cmd {
        Lemma43Cmd::Check { file } => {
            let src = read_input(file, rep)?;
            let cand = CevianCandidate::parse(&src).map_err(usage)?;
            rep.put_lines("family", &cand.to_string());
            let t = Instant::now();
            let failure = lemma43_check(&cand)?;
            rep.time("check", t.elapsed());
            rep.put("first failure", failure.to_string());
            if matches!(failure.condition, Condition::MeetBelow | Condition::BelowJoin) {
                let t = Instant::now();
                let refutation = lemma43_refute_pipeline(&cand)?;
                rep.time("pipeline", t.elapsed());
                rep.put_lines("refutation", &refutation.to_string());
            }
            rep.finish(Outcome::Fail, "candidate rejected");
        }
        Lemma43Cmd::Scan { pool_depth } => {
            if *pool_depth > 2 {
                return Err(usage("pool depth above 2 is out of reach"));
            }
            let t = Instant::now();
            let r = lemma43_scan(*pool_depth)?;
            rep.time("scan", t.elapsed());
            rep.put_lines("scan", &r.to_string());
            rep.finish(Outcome::Pass, "no family passes every condition");
        }
    }
    Ok(())
}

fn read_lattice(file: &Path, rep: &mut Report) -> std::result::Result<FinDistLattice, Stop> {
    let src = read_input(file, rep)?;
    FinDistLattice::parse(&src).map_err(usage)
}

fn lattice(cmd: &LatticeCmd, rep: &mut Report) -> Run {
    match cmd {
        LatticeCmd::Normal { file } => {
            let d = read_lattice(file, rep)?;
            rep.put("elements", d.len());
            match d.normality_counterexample() {
                None => rep.finish(Outcome::Pass, "completely normal"),
                Some((a, b)) => {
                    let m = d.meet(d.min_diff(a, b), d.min_diff(b, a));
                    rep.put(
                        "counterexample",
                        format!(
                            "a = {}, b = {}: every split leaves {} below both parts",
                            d.element_name(a),
                            d.element_name(b),
                            d.element_name(m)
                        ),
                    );
                    rep.finish(Outcome::Fail, "not completely normal");
                }
            }
        }
        LatticeCmd::Cevian { file } => {
            let d = read_lattice(file, rep)?;
            rep.put("elements", d.len());
            rep.put("scope", FINITE_SCOPE);
            let t = Instant::now();
            let found = cevian_solve(&d)?;
            rep.time("search", t.elapsed());
            match found {
                Some(table) => {
                    let mut rows = String::new();
                    for x in 0..d.len() {
                        for y in 0..d.len() {
                            rows.push_str(&format!(
                                "{} \\ {} = {}\n",
                                d.element_name(x),
                                d.element_name(y),
                                d.element_name(table.get(x, y))
                            ));
                        }
                    }
                    rep.put_lines("table", &rows);
                    rep.finish(Outcome::Pass, "Cevian operation found and re-verified");
                }
                None => {
                    if let Some((a, b)) = d.normality_counterexample() {
                        rep.put(
                            "obstruction",
                            format!("{} and {} do not split", d.element_name(a), d.element_name(b)),
                        );
                    }
                    rep.finish(Outcome::Fail, "no Cevian operation exists");
                }
            }
        }
        LatticeCmd::Enum { max_ji } => {
            if *max_ji > 6 {
                return Err(usage("--max-ji is limited to 6"));
            }
            let t = Instant::now();
            let mut lines = String::new();
            for n in 0..=*max_ji {
                let (mut total, mut normal, mut solved) = (0, 0, 0);
                for below in posets_up_to_iso(n) {
                    let d = lattice_of(&below);
                    total += 1;
                    normal += usize::from(d.completely_normal());
                    solved += usize::from(cevian_solve(&d)?.is_some());
                }
                lines.push_str(&format!(
                    "{n} join-irreducibles: {total} lattices, {normal} completely normal, {solved} with a Cevian operation\n"
                ));
            }
            let sq = FinDistLattice::square_with_new_zero();
            let rejected = cevian_solve(&sq)?.is_none();
            lines.push_str(&format!("square with a new zero rejected: {rejected}\n"));
            rep.time("enumerate", t.elapsed());
            rep.put_lines("lattices", &lines);
            rep.put("scope", FINITE_SCOPE);
            if rejected {
                rep.finish(Outcome::Pass, "solver agrees with complete normality on every lattice");
            } else {
                rep.finish(Outcome::Inconsistent, "the square with a new zero got a Cevian operation");
            }
        }
    }
    Ok(())
}

fn commutativity_lines(r: &CommutativityReport) -> String {
    let mut s = String::new();
    for (p, q, n) in &r.homset_sizes {
        s.push_str(&format!("hom({p}, {q}): {n}\n"));
    }
    for p in &r.closure_problems {
        s.push_str(&format!("problem: {p}\n"));
    }
    s
}

fn diagram(cmd: &DiagramCmd, rep: &mut Report) -> Run {
    let DiagramCmd::Verify { which, depth } = cmd;
    let t = Instant::now();
    let a = build_diagram_a()?;
    let d = build_diagram_d()?;
    rep.time("build", t.elapsed());
    match which {
        Which::A => {
            let r = verify_a(&a)?;
            rep.put_lines("homsets", &commutativity_lines(&r));
            rep.put("commutative", r.commutative);
            let idc = check_idc_collapse(&a)?;
            rep.put("both arrows into 123 agree up to bounded multiples", idc.holds());
            if r.closure_problems.is_empty() && !r.commutative && idc.holds() {
                rep.finish(Outcome::Pass, "closed, not commutative, and collapses under supports");
            } else {
                rep.finish(Outcome::Inconsistent, "diagram A does not have the expected shape");
            }
        }
        Which::D => {
            let r = verify_d(&d)?;
            rep.put_lines("homsets", &commutativity_lines(&r));
            rep.put("commutative", r.commutative);
            if r.closure_problems.is_empty() && r.commutative {
                rep.finish(Outcome::Pass, "every composite agrees");
            } else {
                rep.finish(Outcome::Inconsistent, "composites disagree");
            }
        }
        Which::Eta => {
            if *depth > 3 {
                return Err(usage("--depth is limited to 3"));
            }
            let t = Instant::now();
            let squares = verify_eta(&a, &d, *depth)?;
            rep.time("squares", t.elapsed());
            let mut lines = String::new();
            let mut failures = 0;
            for sq in &squares {
                let status = if sq.failures.is_empty() { "verified" } else { "FAILED" };
                lines.push_str(&format!("{} < {}: {} terms, {status}\n", sq.lower, sq.upper, sq.terms));
                for f in &sq.failures {
                    lines.push_str(&format!("  {f}\n"));
                }
                failures += sq.failures.len();
            }
            rep.put_lines("squares", &lines);
            let worked = worked_squares(&a, &d)?;
            rep.put_lines("worked squares", &worked.0);
            if failures == 0 && worked.1 {
                rep.finish(Outcome::Pass, format!("{} squares commute", squares.len()));
            } else {
                rep.finish(Outcome::Inconsistent, "a naturality square fails");
            }
        }
    }
    Ok(())
}

const FINITE_SCOPE: &str =
    "finite lattices only; says nothing about infinite ones, where complete normality does not suffice";

fn worked_squares(
    a: &cevian_core::diagrams::DiagramA,
    d: &cevian_core::diagrams::DiagramD,
) -> std::result::Result<(String, bool), Stop> {
    let cone_of = |p: &str| -> std::result::Result<_, Stop> {
        match &d.objects[d.poset.index(p)?] {
            DObj::Cones(k) => Ok(k.clone()),
            _ => Err(Stop::Checker(Error::inconsistency(format!("object {p} is not a cone lattice")))),
        }
    };
    let mut out = String::new();
    let mut ok = true;
    let alpha = &a.homset("1", "13")?[0];
    let left = eta("13", &alpha.apply(&LTerm::var("a"))?)?;
    let right = d.homset("1", "13")?[0].apply(&eta("1", &LTerm::var("a"))?)?;
    let x1 = DElem::Reg(Region::half_space(cone_of("13")?, LinForm::from_ints(&[1, 0]))?);
    let good = left.same_as(&x1)? && right.same_as(&x1)?;
    ok &= good;
    out.push_str(&format!("(η13 ∘ α1^13)(a) = δ1^13(η1(a)) = ⟦x1 > 0⟧₂: {good}\n"));
    let t: LTerm = "pos(a' - 2*c)".parse()?;
    let left = eta("123", &t)?;
    let right = d.homset("13", "123")?[0].apply(&eta("13", &t)?)?;
    let expect = DElem::Reg(Region::half_space(cone_of("123")?, LinForm::from_ints(&[1, 0, -2]))?);
    let good = left.same_as(&expect)? && right.same_as(&expect)?;
    ok &= good;
    out.push_str(&format!("(13, 123) on t(a', c) = (a' - 2c)⁺: both sides ⟦x1 - 2x3 > 0⟧₃: {good}\n"));
    Ok((out, ok))
}

fn cone(cmd: &ConeCmd, rep: &mut Report) -> Run {
    let file = match cmd {
        ConeCmd::Empty { file } | ConeCmd::Subset { file } | ConeCmd::Meet { file } | ConeCmd::Join { file } => file,
    };
    let src = read_input(file, rep)?;
    let sc = scenario::parse_cone(&src).map_err(usage)?;
    rep.put("A", sc.a.to_string());
    let need_b = || sc.b.clone().ok_or_else(|| usage("this query needs `B`"));
    match cmd {
        ConeCmd::Empty { .. } => match sc.a.witness()? {
            None => rep.finish(Outcome::Pass, "A is empty"),
            Some(w) => {
                rep.put("witness", fmt_point(&w));
                rep.finish(Outcome::Fail, "A is not empty");
            }
        },
        ConeCmd::Subset { .. } => {
            let b = need_b()?;
            rep.put("B", b.to_string());
            match sc.a.subset_witness(&b)? {
                None => rep.finish(Outcome::Pass, "A is inside B"),
                Some(w) => {
                    rep.put("witness in A outside B", fmt_point(&w));
                    rep.finish(Outcome::Fail, "A is not inside B");
                }
            }
        }
        ConeCmd::Meet { .. } | ConeCmd::Join { .. } => {
            let b = need_b()?;
            rep.put("B", b.to_string());
            let (name, r) = match cmd {
                ConeCmd::Meet { .. } => ("A ∩ B", sc.a.meet(&b)?.pruned()?),
                _ => ("A ∪ B", sc.a.join(&b)?.pruned()?),
            };
            rep.put(name, r.to_string());
            match r.witness()? {
                Some(w) => rep.put("witness", fmt_point(&w)),
                None => rep.put("witness", "none (empty)"),
            }
            rep.finish(Outcome::Pass, "computed");
        }
    }
    Ok(())
}

fn condensate(file: &Path, rep: &mut Report) -> Run {
    let src = read_input(file, rep)?;
    let sc = scenario::parse_condensate(&src).map_err(usage)?;
    let s = &sc.diagram;
    rep.put("diagram", sc.diagram_name.clone());
    let sizes: Vec<String> = (0..s.poset.len())
        .map(|p| format!("S_{} has {}", s.poset.name(p), s.objects[p].len()))
        .collect();
    rep.put("objects", sizes.join(", "));
    rep.put("A", sc.source.to_string());
    let t = match tensor(&sc.source, s) {
        Ok(t) => t,
        Err(Error::Validation(m)) => {
            rep.finish(Outcome::Fail, m);
            return Ok(());
        }
        Err(e) => return Err(e.into()),
    };
    let factors: Vec<String> = t
        .tags
        .iter()
        .zip(&t.factors)
        .map(|(&p, f)| format!("S_{} ({} elements)", s.poset.name(p), f.len()))
        .collect();
    rep.put("A ⊗ S", factors.join(" × "));
    rep.put("size", t.size().to_string());
    for (&p, f) in t.tags.iter().zip(&t.factors) {
        if f.iso_key() != s.objects[p].iso_key() {
            rep.finish(Outcome::Inconsistent, "a factor is not its tagged object");
            return Ok(());
        }
    }
    if let [p] = t.tags.as_slice() {
        rep.put("single atom", format!("A ⊗ S ≅ S_{}", s.poset.name(*p)));
    }
    if let Some((b, f)) = &sc.morphism {
        rep.put("B", b.to_string());
        let normal = match check_morphism(&sc.source, b, f) {
            Ok(n) => n,
            Err(Error::Validation(m)) => {
                rep.finish(Outcome::Fail, m);
                return Ok(());
            }
            Err(e) => return Err(e.into()),
        };
        rep.put("normal", normal);
        let m = match tensor_morphism(&sc.source, b, f, s) {
            Ok(m) => m,
            Err(Error::Validation(msg)) => {
                rep.finish(Outcome::Fail, msg);
                return Ok(());
            }
            Err(e) => return Err(e.into()),
        };
        let target = tensor(b, s)?;
        let comps: Vec<String> = m
            .source_atom
            .iter()
            .zip(&target.tags)
            .enumerate()
            .map(|(k, (&src_atom, &q))| {
                format!(
                    "{} <- σ_{}^{}({})",
                    b.atoms[k],
                    s.poset.name(t.tags[src_atom]),
                    s.poset.name(q),
                    sc.source.atoms[src_atom]
                )
            })
            .collect();
        rep.put_lines("φ ⊗ S", &comps.join("\n"));
        if t.size() <= 1 << 20 {
            let onto = is_surjective(&m, &t, &target);
            rep.put("surjective", onto);
            if normal && !onto {
                rep.finish(Outcome::Inconsistent, "a normal morphism tensored to a non-surjective map");
                return Ok(());
            }
        }
    }
    rep.finish(Outcome::Pass, "condensate built");
    Ok(())
}

fn plot(cmd: &PlotCmd, rep: &mut Report) -> Run {
    let PlotCmd::Ceva { file, xy, out } = cmd;
    let input = match (file, xy) {
        (Some(f), None) => {
            let src = read_input(f, rep)?;
            CevaInput::parse(&src).map_err(usage)?
        }
        (None, Some(v)) => {
            let (x, y) = (ratio_arg(&v[0])?, ratio_arg(&v[1])?);
            if x <= Rat::from_integer(0.into()) || y <= Rat::from_integer(0.into()) {
                return Err(usage("x and y must be positive"));
            }
            CevaInput::configuration(x, y)
        }
        _ => return Err(usage("give a ceva file or --xy X Y")),
    };
    let v = ceva_check(&input)?;
    let svg = plot::plot_ceva(&input, v.conclusion.clone());
    std::fs::write(out, &svg).map_err(|e| usage(format!("cannot write {}: {e}", out.display())))?;
    rep.put("written", out.display().to_string());
    rep.put("svg sha256", sha256_hex(svg.as_bytes()));
    if let Some((x, y)) = &v.conclusion {
        rep.put("cevians meet at", format!("⟨1,{x},{}⟩", x * y));
    }
    rep.finish(Outcome::Pass, "figure written");
    Ok(())
}

fn command_line(cmd: &Cmd) -> String {
    let f = |p: &Path| p.display().to_string();
    match cmd {
        Cmd::Ceva(CevaCmd::Check { file }) => format!("ceva check {}", f(file)),
        Cmd::Ceva(CevaCmd::Search { pool, budget }) => match budget {
            Some(b) => format!("ceva search --pool {pool} --budget {b}"),
            None => format!("ceva search --pool {pool}"),
        },
        Cmd::Ceva(CevaCmd::Converse { x, y }) => format!("ceva converse {x} {y}"),
        Cmd::Lemma43(Lemma43Cmd::Check { file }) => format!("lemma43 check {}", f(file)),
        Cmd::Lemma43(Lemma43Cmd::Scan { pool_depth }) => format!("lemma43 scan --pool-depth {pool_depth}"),
        Cmd::Lattice(LatticeCmd::Normal { file }) => format!("lattice normal {}", f(file)),
        Cmd::Lattice(LatticeCmd::Cevian { file }) => format!("lattice cevian {}", f(file)),
        Cmd::Lattice(LatticeCmd::Enum { max_ji }) => format!("lattice enum --max-ji {max_ji}"),
        Cmd::Diagram(DiagramCmd::Verify { which, depth }) => match which {
            Which::A => "diagram verify A".into(),
            Which::D => "diagram verify D".into(),
            Which::Eta => format!("diagram verify eta --depth {depth}"),
        },
        Cmd::Condensate { file } => format!("condensate {}", f(file)),
        Cmd::Cone(c) => {
            let (op, file) = match c {
                ConeCmd::Empty { file } => ("empty", file),
                ConeCmd::Subset { file } => ("subset", file),
                ConeCmd::Meet { file } => ("meet", file),
                ConeCmd::Join { file } => ("join", file),
            };
            format!("cone {op} {}", f(file))
        }
        Cmd::Plot(PlotCmd::Ceva { file, xy, out }) => match (file, xy) {
            (Some(file), _) => format!("plot ceva {} --out {}", f(file), f(out)),
            (None, Some(v)) => format!("plot ceva --xy {} {} --out {}", v[0], v[1], f(out)),
            (None, None) => format!("plot ceva --out {}", f(out)),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { Outcome::Usage.code() } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 || rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            eprintln!("error: cannot start {n} worker threads");
            return ExitCode::from(Outcome::Usage.code() as u8);
        }
    }
    let mut rep = Report::new(command_line(&cli.cmd));
    let run = match &cli.cmd {
        Cmd::Ceva(c) => ceva(c, &mut rep),
        Cmd::Lemma43(c) => lemma43(c, &mut rep),
        Cmd::Lattice(c) => lattice(c, &mut rep),
        Cmd::Diagram(c) => diagram(c, &mut rep),
        Cmd::Condensate { file } => condensate(file, &mut rep),
        Cmd::Cone(c) => cone(c, &mut rep),
        Cmd::Plot(c) => plot(c, &mut rep),
    };
    match run {
        Ok(()) => {}
        Err(Stop::Usage(m)) => rep.finish(Outcome::Usage, m),
        Err(Stop::Checker(e)) if e.is_inconsistency() => rep.finish(Outcome::Inconsistent, e.to_string()),
        Err(Stop::Checker(e)) => rep.finish(Outcome::Fail, e.to_string()),
    }
    let format = match cli.report {
        ReportFormat::Text => Format::Text,
        ReportFormat::Json => Format::Json,
    };
    print!("{}", rep.render(format, cli.timings));
    ExitCode::from(rep.outcome.code() as u8)
}
