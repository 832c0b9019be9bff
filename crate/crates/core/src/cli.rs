//! The `sepkit` command line.
//!
//! Exit codes: 0 success, 1 a verification found a violation, 2 engines
//! disagree, 3 budget refusal, 4 input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::cache::{content_key, polytope_key, Cache};
use crate::ehrhart::{
    ehrhart_counts, gamma_from_hstar, hstar_from_counts, predicates, sep_of, Predicates, DEFAULT_BOX_BUDGET,
};
use crate::ehrhart::{check_contraction, check_free_sum, check_parallel_connection, IdentityCheck};
use crate::error::{Error, Result};
use crate::gamma_family::{
    classify, closed_gamma, closed_hstar, closed_volume, summand_audit, triangulating_trees, GammaGraph,
    PairKind,
};
use crate::io::{parse_input, ser_bigint, ser_bigints, ser_poly, ser_rationals, Loaded};
use crate::matroid::{Graph, Matroid};
use crate::poly::{IntPolynomial, RatPolynomial};
use crate::series::{verify_identities, IdentityReport, SweepRanges};
use crate::triangulation::{
    edges_pointing_away, face_f_vector, h_from_f, hstar_by_pointing, initial_monomials, triangulate, VariableOrder,
    DEFAULT_BASIS_BUDGET,
};

pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_DISAGREEMENT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "sepkit", version, about = "Ehrhart h*-polynomials and γ-vectors of symmetric edge polytopes")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Worker threads (default: one per core).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Cache directory; SEPKIT_CACHE takes precedence.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Recompute every cache hit and fail on a mismatch.
    #[arg(long, global = true)]
    pub cache_verify: bool,
    /// Cap on oriented bases and faces visited by the triangulation engine.
    #[arg(long, global = true, default_value_t = DEFAULT_BASIS_BUDGET as u64,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub budget_bases: u64,
    /// Cap on lattice points in the counting box.
    #[arg(long, global = true, default_value_t = DEFAULT_BOX_BUDGET as u64,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub budget_box: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    /// Lattice-point counting in dilates.
    Ehrhart,
    /// f-vector of the grevlex triangulation.
    Triangulation,
    /// Edges pointing away from a base vertex over the triangulation's trees
    /// (graphs only).
    Pointing,
    /// Closed formula (`gamma:n` only).
    Closed,
    /// Every engine that applies to the input.
    All,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// h*, γ, volume and predicates of Σ(M).
    Hstar(HstarArgs),
    /// Identity sweeps and product checks.
    Verify {
        #[command(subcommand)]
        what: VerifyCmd,
    },
    /// Oriented spanning trees of the triangulation, with pointing counts.
    Trees(TreesArgs),
    /// Facets of the triangulation as signed element labels.
    Facets(FacetsArgs),
    /// Closed-formula rows for the Γ family.
    GammaTable(TableArgs),
    /// Writes an input (builtin or file) in the on-disk format.
    Export { input: String },
}

/// Inputs are files or builtins: `gamma:n` (Γ(n+1)), `dual-k3n:n`,
/// `cycle:n`, `path:n`, `complete:n`, `complete-bipartite:m,n`.
#[derive(Args, Debug)]
pub struct HstarArgs {
    pub input: String,
    #[arg(long, value_enum, default_value_t = Engine::Triangulation)]
    pub engine: Engine,
    /// Comma-separated element labels, weakest first.
    #[arg(long, value_delimiter = ',')]
    pub order: Option<Vec<String>>,
    /// Base vertex for the pointing engine.
    #[arg(long, default_value_t = 0)]
    pub base_vertex: usize,
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    /// Binomial and series identity sweeps.
    Identities {
        /// Largest ℓ for the f-to-γ identity.
        #[arg(long, default_value_t = 8)]
        lmax: i64,
        /// Largest n for the tree-count decompositions.
        #[arg(long, default_value_t = 12)]
        nmax: i64,
        /// Largest parameter for the three binomial rules.
        #[arg(long, default_value_t = 12)]
        binom_max: i64,
        /// Largest ℓ for the central-binomial sums.
        #[arg(long, default_value_t = 10)]
        sum_lmax: i64,
        #[arg(long, default_value_t = crate::series::DEFAULT_SERIES_ORDER)]
        series_order: usize,
    },
    /// h*(Σ(M)) = (1+t) h*(Σ(M/e)) for bipartite M.
    Contraction {
        input: String,
        /// Element to contract (default: the first).
        #[arg(long)]
        element: Option<String>,
        #[arg(long, value_enum, default_value_t = Engine::Ehrhart)]
        engine: Engine,
    },
    /// (1+t) h*(Σ(P(M1, M2))) = h*(Σ(M1)) h*(Σ(M2)) for bipartite M1.
    Parallel {
        first: String,
        second: String,
        /// Shared element (default: the first element of each input).
        #[arg(long)]
        element: Option<String>,
        #[arg(long, value_enum, default_value_t = Engine::Ehrhart)]
        engine: Engine,
    },
    /// γ is unchanged by adding coloops.
    FreeSum {
        input: String,
        #[arg(long, default_value_t = 1)]
        coloops: usize,
        #[arg(long, value_enum, default_value_t = Engine::Triangulation)]
        engine: Engine,
    },
    /// Pointing h* is the same for every base vertex and matches the f-vector.
    Pointing { input: String },
    /// Γ-family tree enumeration against the closed formulas.
    Trees {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Args, Debug)]
pub struct TreesArgs {
    pub input: String,
    /// Add the chord/pair classification (`gamma:n` only).
    #[arg(long)]
    pub classify: bool,
    #[arg(long, default_value_t = 0)]
    pub base_vertex: usize,
    #[arg(long, value_delimiter = ',')]
    pub order: Option<Vec<String>>,
}

#[derive(Args, Debug)]
pub struct FacetsArgs {
    pub input: String,
    #[arg(long, value_delimiter = ',')]
    pub order: Option<Vec<String>>,
    /// Print only the summary document.
    #[arg(long)]
    pub summary: bool,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long, default_value_t = 8)]
    pub nmax: usize,
    /// Largest n whose row is cross-checked by tree enumeration.
    #[arg(long, default_value_t = 4)]
    pub enum_max: usize,
}

/// A resolved input.
#[derive(Clone, Debug)]
pub enum Instance {
    Gamma(GammaGraph),
    Graph(Graph),
    Matroid(Matroid),
}

impl Instance {
    pub fn resolve(input: &str) -> Result<Instance> {
        if let Some((kind, arg)) = input.split_once(':') {
            let nums = || -> Result<Vec<usize>> {
                arg.split(',')
                    .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Input(format!("bad builtin {input:?}: {e}"))))
                    .collect()
            };
            let one = || -> Result<usize> {
                match nums()?[..] {
                    [n] => Ok(n),
                    _ => Err(Error::Input(format!("{kind} takes one integer"))),
                }
            };
            match kind {
                "gamma" => return Ok(Instance::Gamma(GammaGraph::new(one()?)?)),
                "dual-k3n" => return Ok(Instance::Matroid(Matroid::dual_k3n(one()?)?)),
                "cycle" => return Ok(Instance::Graph(Graph::cycle(one()?)?)),
                "path" => return Ok(Instance::Graph(Graph::path(one()?)?)),
                "complete" => return Ok(Instance::Graph(Graph::complete(one()?)?)),
                "complete-bipartite" => {
                    return match nums()?[..] {
                        [m, n] => Ok(Instance::Graph(Graph::complete_bipartite(m, n)?)),
                        _ => Err(Error::Input("complete-bipartite takes m,n".into())),
                    }
                }
                _ => {}
            }
        }
        let text = std::fs::read_to_string(input).map_err(|e| Error::Input(format!("cannot read {input:?}: {e}")))?;
        Ok(match parse_input(&text)? {
            Loaded::Graph(g) => Instance::Graph(g),
            Loaded::Matroid(m) => Instance::Matroid(m),
        })
    }

    pub fn matroid(&self) -> Result<Matroid> {
        match self {
            Instance::Gamma(g) => g.matroid(),
            Instance::Graph(g) => Matroid::cycle_matroid(g),
            Instance::Matroid(m) => Ok(m.clone()),
        }
    }

    pub fn graph(&self) -> Option<&Graph> {
        match self {
            Instance::Gamma(g) => Some(g.graph()),
            Instance::Graph(g) => Some(g),
            Instance::Matroid(_) => None,
        }
    }

    fn order(&self, m: &Matroid, labels: Option<&[String]>) -> Result<VariableOrder> {
        match (labels, self) {
            (Some(ls), _) => VariableOrder::from_labels(m, &ls.iter().map(String::as_str).collect::<Vec<_>>()),
            (None, Instance::Gamma(g)) => Ok(g.variable_order()),
            (None, _) => Ok(VariableOrder::ground(m.len())),
        }
    }
}

/// Shared state for one invocation.
pub struct Context {
    pub cache: Option<Cache>,
    pub budget_bases: u128,
    pub budget_box: u128,
}

impl Context {
    pub fn from_opts(g: &GlobalOpts) -> Self {
        Context {
            cache: Cache::from_env_or(g.cache_dir.clone()).map(|c| c.verifying(g.cache_verify)),
            budget_bases: g.budget_bases as u128,
            budget_box: g.budget_box as u128,
        }
    }

    /// L(0), ..., L(d) of Σ(M), cached by the vertex set.
    pub fn ehrhart_counts(&self, m: &Matroid) -> Result<Vec<BigInt>> {
        let p = sep_of(m)?;
        let compute = || Ok(ehrhart_counts(&p, self.budget_box)?.iter().map(ToString::to_string).collect());
        let strings: Vec<String> = match &self.cache {
            Some(c) => c.get_or_compute("ehrhart", &polytope_key(&p), compute)?,
            None => compute()?,
        };
        strings
            .iter()
            .map(|s| s.parse().map_err(|_| Error::Invariant(format!("cached count {s:?} is not an integer"))))
            .collect()
    }

    pub fn ehrhart_hstar(&self, m: &Matroid) -> Result<IntPolynomial> {
        let counts = self.ehrhart_counts(m)?;
        hstar_from_counts(&counts, counts.len() - 1)
    }

    /// Face counts of the triangulation, cached by matrix and order.
    pub fn face_counts(&self, m: &Matroid, order: &VariableOrder) -> Result<Vec<u64>> {
        let compute = || face_f_vector(m, &initial_monomials(m, order)?, self.budget_bases);
        match &self.cache {
            Some(c) => {
                let r = m.representation();
                let rows = serde_json::to_vec(&r.row_vecs())?;
                let ord: Vec<usize> = (0..order.len()).map(|k| order.element_at(k)).collect();
                let key = content_key(&[b"faces", &rows, &serde_json::to_vec(&ord)?]);
                c.get_or_compute("faces", &key, compute)
            }
            None => compute(),
        }
    }

    pub fn triangulation_hstar(&self, m: &Matroid, order: &VariableOrder) -> Result<IntPolynomial> {
        h_from_f(&self.face_counts(m, order)?, m.rank())
    }

    fn engine_hstar(&self, engine: Engine, m: &Matroid) -> Result<IntPolynomial> {
        match engine {
            Engine::Ehrhart => self.ehrhart_hstar(m),
            Engine::Triangulation => self.triangulation_hstar(m, &VariableOrder::ground(m.len())),
            _ => Err(Error::Input("product checks run on the ehrhart or triangulation engine".into())),
        }
    }
}

#[derive(Serialize, Debug)]
struct EngineRun {
    engine: &'static str,
    #[serde(serialize_with = "ser_poly")]
    hstar: IntPolynomial,
}

#[derive(Serialize, Debug)]
struct HstarDoc {
    input: String,
    dim: usize,
    #[serde(serialize_with = "ser_bigints", skip_serializing_if = "Vec::is_empty")]
    counts: Vec<BigInt>,
    #[serde(serialize_with = "ser_poly")]
    hstar: IntPolynomial,
    #[serde(serialize_with = "ser_opt_rationals")]
    gamma: Option<Vec<BigRational>>,
    #[serde(serialize_with = "ser_bigint")]
    volume: BigInt,
    predicates: Predicates,
    engines: Vec<EngineRun>,
    agree: bool,
    elements: usize,
    dropped_loops: usize,
}

fn ser_opt_rationals<S: serde::Serializer>(
    v: &Option<Vec<BigRational>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(g) => ser_rationals(g, s),
        None => s.serialize_none(),
    }
}

fn join<T: ToString>(v: impl IntoIterator<Item = T>) -> String {
    v.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn poly_str(p: &IntPolynomial) -> String {
    join(p.coeffs())
}

pub fn cmd_hstar(ctx: &Context, a: &HstarArgs) -> Result<(HstarDocView, bool)> {
    let inst = Instance::resolve(&a.input)?;
    let m = inst.matroid()?;
    let order = inst.order(&m, a.order.as_deref())?;
    let is_gamma = matches!(inst, Instance::Gamma(_));
    let engines: Vec<Engine> = match a.engine {
        Engine::All => {
            let mut v = vec![Engine::Ehrhart, Engine::Triangulation];
            if inst.graph().is_some() {
                v.push(Engine::Pointing);
            }
            if is_gamma {
                v.push(Engine::Closed);
            }
            v
        }
        e => vec![e],
    };
    let mut runs = Vec::new();
    let mut counts = Vec::new();
    for e in engines {
        let (name, h) = match e {
            Engine::Ehrhart => {
                counts = ctx.ehrhart_counts(&m)?;
                ("ehrhart", hstar_from_counts(&counts, counts.len() - 1)?)
            }
            Engine::Triangulation => ("triangulation", ctx.triangulation_hstar(&m, &order)?),
            Engine::Pointing => {
                let g = inst
                    .graph()
                    .ok_or_else(|| Error::Input("the pointing engine needs a graph input".into()))?;
                let (facets, _) = triangulate(&m, &order, ctx.budget_bases)?;
                ("pointing", hstar_by_pointing(g, a.base_vertex, &facets, &order)?)
            }
            Engine::Closed => match &inst {
                Instance::Gamma(g) => ("closed", closed_hstar(g.n())?),
                _ => return Err(Error::Input("the closed engine only applies to gamma:n".into())),
            },
            Engine::All => unreachable!("expanded above"),
        };
        runs.push(EngineRun { engine: name, hstar: h });
    }
    let hstar = runs[0].hstar.clone();
    let agree = runs.iter().all(|r| r.hstar == hstar);
    let gamma = if hstar.is_palindromic() { Some(gamma_from_hstar(&hstar)?) } else { None };
    let doc = HstarDoc {
        input: a.input.clone(),
        dim: m.rank(),
        counts,
        volume: hstar.eval_at_one(),
        predicates: predicates(&hstar),
        hstar,
        gamma,
        engines: runs,
        agree,
        elements: m.len(),
        dropped_loops: m.loops().count_ones() as usize,
    };
    Ok((HstarDocView(doc), agree))
}

/// Rendered `hstar` result.
pub struct HstarDocView(HstarDoc);

impl HstarDocView {
    pub fn hstar(&self) -> &IntPolynomial {
        &self.0.hstar
    }

    pub fn gamma(&self) -> Option<&[BigRational]> {
        self.0.gamma.as_deref()
    }

    pub fn predicates(&self) -> Predicates {
        self.0.predicates
    }

    fn render(&self, f: Format, out: &mut dyn Write) -> Result<()> {
        let d = &self.0;
        let gamma = d.gamma.as_ref().map(join).unwrap_or_default();
        match f {
            Format::Json => writeln!(out, "{}", serde_json::to_string(d)?)?,
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record([
                    "input", "dim", "volume", "hstar", "gamma", "symmetric", "unimodal", "gamma_nonnegative", "agree",
                ])
                .map_err(csv_err)?;
                w.write_record([
                    d.input.clone(),
                    d.dim.to_string(),
                    d.volume.to_string(),
                    poly_str(&d.hstar),
                    gamma,
                    d.predicates.symmetric.to_string(),
                    d.predicates.unimodal.to_string(),
                    d.predicates.gamma_nonnegative.to_string(),
                    d.agree.to_string(),
                ])
                .map_err(csv_err)?;
                out.write_all(&w.into_inner().map_err(|e| Error::Io(e.into_error()))?)?;
            }
            Format::Text => {
                writeln!(out, "input: {}", d.input)?;
                writeln!(out, "dim: {}", d.dim)?;
                if !d.counts.is_empty() {
                    writeln!(out, "counts: {}", join(&d.counts))?;
                }
                writeln!(out, "hstar: {}", poly_str(&d.hstar))?;
                writeln!(out, "gamma: {}", if d.gamma.is_some() { gamma } else { "-".into() })?;
                writeln!(out, "volume: {}", d.volume)?;
                let p = d.predicates;
                writeln!(
                    out,
                    "symmetric: {}  unimodal: {}  gamma_nonnegative: {}",
                    p.symmetric, p.unimodal, p.gamma_nonnegative
                )?;
                for r in &d.engines {
                    writeln!(out, "engine {}: {}", r.engine, poly_str(&r.hstar))?;
                }
                if !d.agree {
                    writeln!(out, "ENGINES DISAGREE")?;
                }
            }
        }
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// One line of `verify` output.
#[derive(Serialize, Debug)]
struct Outcome {
    check: String,
    passed: bool,
    detail: serde_json::Value,
}

fn outcome_of_identity(c: &IdentityCheck) -> Outcome {
    Outcome {
        check: c.name.to_string(),
        passed: c.holds,
        detail: serde_json::to_value(c).expect("plain data"),
    }
}

fn outcome_of_report(r: &IdentityReport) -> Outcome {
    Outcome {
        check: r.identity.to_string(),
        passed: r.passed(),
        detail: serde_json::to_value(r).expect("plain data"),
    }
}

fn cmd_verify(ctx: &Context, v: &VerifyCmd) -> Result<Vec<Outcome>> {
    let hs = |m: &Matroid, e: Engine| ctx.engine_hstar(e, m);
    match v {
        VerifyCmd::Identities { lmax, nmax, binom_max, sum_lmax, series_order } => {
            let ranges = SweepRanges {
                binom_max: *binom_max,
                nmax: *nmax,
                sum_lmax: *sum_lmax,
                series_order: *series_order,
                f_lmax: *lmax,
            };
            Ok(verify_identities(ranges).iter().map(outcome_of_report).collect())
        }
        VerifyCmd::Contraction { input, element, engine } => {
            let m = Instance::resolve(input)?.matroid()?;
            let e = match element {
                Some(l) => m.index_of(l)?,
                None => 0,
            };
            let c = check_contraction(&m, e, |x| hs(x, *engine))?;
            Ok(vec![outcome_of_identity(&c)])
        }
        VerifyCmd::Parallel { first, second, element, engine } => {
            let m1 = Instance::resolve(first)?.matroid()?;
            let mut m2 = Instance::resolve(second)?.matroid()?;
            let p = match element {
                Some(l) => l.clone(),
                None => m1.label(0).to_string(),
            };
            if m2.index_of(&p).is_err() {
                // glue along the first element of the second input
                let mut labels = m2.labels().to_vec();
                labels[0] = p.clone();
                m2 = m2.with_labels(labels)?;
            }
            let c = check_parallel_connection(&m1, &m2, &p, |x| hs(x, *engine))?;
            Ok(vec![outcome_of_identity(&c)])
        }
        VerifyCmd::FreeSum { input, coloops, engine } => {
            let m = Instance::resolve(input)?.matroid()?;
            let coloop = Matroid::from_rows(&[vec![1]])?;
            let mut padded = m.clone();
            for _ in 0..*coloops {
                padded = padded.direct_sum(&coloop)?.0;
            }
            let c = check_free_sum(&m, &coloop, |x| hs(x, *engine))?;
            let g0 = gamma_from_hstar(&hs(&m, *engine)?)?;
            let g1 = gamma_from_hstar(&hs(&padded, *engine)?)?;
            // compared as polynomials: padding only appends zero entries
            let same = RatPolynomial::new(g0.clone()) == RatPolynomial::new(g1.clone());
            Ok(vec![
                outcome_of_identity(&c),
                Outcome {
                    check: format!("gamma_with_{coloops}_coloops"),
                    passed: same,
                    detail: serde_json::json!({ "gamma": join(&g0), "padded_gamma": join(&g1) }),
                },
            ])
        }
        VerifyCmd::Pointing { input } => {
            let inst = Instance::resolve(input)?;
            let g = inst
                .graph()
                .ok_or_else(|| Error::Input("pointing needs a graph input".into()))?
                .clone();
            let m = inst.matroid()?;
            let order = inst.order(&m, None)?;
            let (facets, summary) = triangulate(&m, &order, ctx.budget_bases)?;
            let mut out = Vec::new();
            for v in 0..g.vertex_count() {
                let h = hstar_by_pointing(&g, v, &facets, &order)?;
                out.push(Outcome {
                    check: format!("pointing_from_vertex_{v}"),
                    passed: h == summary.h_vector,
                    detail: serde_json::json!({ "pointing": poly_str(&h), "f_to_h": poly_str(&summary.h_vector) }),
                });
            }
            Ok(out)
        }
        VerifyCmd::Trees { n } => {
            let n = *n;
            let g = GammaGraph::new(n)?;
            let trees = triangulating_trees(n)?;
            let order = g.variable_order();
            let sets: Vec<_> = trees.iter().map(|t| t.to_oriented_set(&order)).collect();
            let pointing = hstar_by_pointing(g.graph(), g.u(1), &sets, &order)?;
            let closed = closed_hstar(n)?;
            let gamma = closed_gamma(n)?;
            let from_h = gamma_from_hstar(&closed)?;
            let audit = summand_audit(n)?;
            Ok(vec![
                Outcome {
                    check: "tree_count_is_volume".into(),
                    passed: BigInt::from(trees.len()) == closed_volume(n),
                    detail: serde_json::json!({ "trees": trees.len(), "volume": closed_volume(n).to_string() }),
                },
                Outcome {
                    check: "pointing_is_closed_hstar".into(),
                    passed: pointing == closed,
                    detail: serde_json::json!({ "pointing": poly_str(&pointing), "closed": poly_str(&closed) }),
                },
                Outcome {
                    check: "closed_gamma_matches_hstar".into(),
                    passed: from_h == gamma.to_rational().coeffs().to_vec(),
                    detail: serde_json::json!({ "closed_gamma": poly_str(&gamma), "from_hstar": join(&from_h) }),
                },
                Outcome {
                    check: "summand_audit".into(),
                    passed: audit.passed(),
                    detail: serde_json::json!({
                        "buckets": audit.checks.len(),
                        "failed": audit.checks.iter().filter(|c| !c.holds).map(|c| &c.key).collect::<Vec<_>>(),
                        "violations": audit.violations,
                    }),
                },
            ])
        }
    }
}

#[derive(Serialize, Debug)]
struct TreeLine {
    tree: String,
    away: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    class: Option<TreeClassLine>,
}

#[derive(Serialize, Debug)]
struct TreeClassLine {
    chords: usize,
    eps: bool,
    chordless: usize,
    chorded: usize,
    alpha: usize,
    l: usize,
    p: usize,
    q: usize,
    i: usize,
    j: usize,
}

fn cmd_trees(ctx: &Context, a: &TreesArgs) -> Result<Vec<TreeLine>> {
    let inst = Instance::resolve(&a.input)?;
    match &inst {
        Instance::Gamma(g) => {
            if a.order.is_some() {
                return Err(Error::Input("gamma:n trees use the fixed Γ order".into()));
            }
            let base = if a.base_vertex == 0 { g.u(1) } else { a.base_vertex };
            triangulating_trees(g.n())?
                .iter()
                .map(|t| {
                    let class = if a.classify {
                        let c = classify(t, g)?;
                        let alpha = c
                            .triangles
                            .iter()
                            .filter(|k| matches!(k, PairKind::Chorded { alpha: true, .. }))
                            .count();
                        Some(TreeClassLine {
                            chords: c.chords,
                            eps: c.eps,
                            chordless: c.chordless_pairs(),
                            chorded: c.chorded_pairs(),
                            alpha,
                            l: c.l,
                            p: c.p,
                            q: c.q,
                            i: c.i,
                            j: c.j,
                        })
                    } else {
                        None
                    };
                    Ok(TreeLine {
                        tree: t.display(g.graph()),
                        away: edges_pointing_away(g.graph(), base, &t.pairs())?,
                        class,
                    })
                })
                .collect()
        }
        Instance::Graph(g) => {
            if a.classify {
                return Err(Error::Input("--classify needs a gamma:n input".into()));
            }
            let m = inst.matroid()?;
            let order = inst.order(&m, a.order.as_deref())?;
            let (facets, _) = triangulate(&m, &order, ctx.budget_bases)?;
            facets
                .iter()
                .map(|f| {
                    Ok(TreeLine {
                        tree: f.display(&m, &order).to_string(),
                        away: edges_pointing_away(g, a.base_vertex, &f.pairs(&order))?,
                        class: None,
                    })
                })
                .collect()
        }
        Instance::Matroid(_) => Err(Error::Input("trees need a graph input".into())),
    }
}

#[derive(Serialize, Debug)]
struct FacetSummary {
    facets: u64,
    f: Vec<u64>,
    #[serde(serialize_with = "ser_poly")]
    h: IntPolynomial,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    list: Vec<String>,
}

fn cmd_facets(ctx: &Context, a: &FacetsArgs) -> Result<FacetSummary> {
    let inst = Instance::resolve(&a.input)?;
    let m = inst.matroid()?;
    let order = inst.order(&m, a.order.as_deref())?;
    let (facets, s) = triangulate(&m, &order, ctx.budget_bases)?;
    Ok(FacetSummary {
        facets: s.facet_count,
        f: s.f_vector,
        h: s.h_vector,
        list: facets.iter().map(|f| f.display(&m, &order).to_string()).collect(),
    })
}

#[derive(Serialize, Debug)]
struct TableRow {
    n: usize,
    #[serde(serialize_with = "ser_bigint")]
    volume: BigInt,
    #[serde(serialize_with = "ser_poly")]
    hstar: IntPolynomial,
    #[serde(serialize_with = "ser_poly")]
    gamma: IntPolynomial,
    engines_agree: Option<bool>,
}

fn cmd_gamma_table(a: &TableArgs) -> Result<Vec<TableRow>> {
    (1..=a.nmax)
        .map(|n| {
            let hstar = closed_hstar(n)?;
            let volume = closed_volume(n);
            let engines_agree = if n <= a.enum_max {
                let g = GammaGraph::new(n)?;
                let order = g.variable_order();
                let sets: Vec<_> = triangulating_trees(n)?.iter().map(|t| t.to_oriented_set(&order)).collect();
                let pointing = hstar_by_pointing(g.graph(), g.u(1), &sets, &order)?;
                Some(pointing == hstar && BigInt::from(sets.len()) == volume)
            } else {
                None
            };
            Ok(TableRow {
                n,
                volume,
                gamma: closed_gamma(n)?,
                hstar,
                engines_agree,
            })
        })
        .collect()
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Budget { .. } => EXIT_BUDGET,
        Error::Disagreement(_) => EXIT_DISAGREEMENT,
        Error::Invariant(_) => EXIT_VIOLATION,
        Error::Input(_)
        | Error::EntryOutOfRange { .. }
        | Error::DuplicateLabel(_)
        | Error::UnknownElement(_)
        | Error::RankDeficient { .. }
        | Error::Precondition(_)
        | Error::Json(_)
        | Error::Io(_) => EXIT_INPUT,
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Errors go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_INPUT,
            };
            let rendered = e.render().to_string();
            let _ = if code == 0 { write!(out, "{rendered}") } else { write!(err, "{rendered}") };
            return code;
        }
    };
    // output is buffered so the command can run inside a worker pool
    let go = || {
        let mut buf = Vec::new();
        dispatch(&cli, &mut buf).map(|code| (code, buf))
    };
    let result = match cli.global.workers {
        Some(w) => match rayon::ThreadPoolBuilder::new().num_threads(w as usize).build() {
            Ok(pool) => pool.install(go),
            Err(e) => Err(Error::Input(format!("cannot start {w} workers: {e}"))),
        },
        None => go(),
    };
    match result {
        Ok((code, buf)) => match out.write_all(&buf) {
            Ok(()) => code,
            Err(e) => {
                let _ = writeln!(err, "sepkit: {e}");
                EXIT_INPUT
            }
        },
        Err(e) => {
            let _ = writeln!(err, "sepkit: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let ctx = Context::from_opts(&cli.global);
    let fmt = cli.global.format;
    match &cli.command {
        Command::Hstar(a) => {
            let (doc, agree) = cmd_hstar(&ctx, a)?;
            doc.render(fmt, out)?;
            Ok(if agree { 0 } else { EXIT_DISAGREEMENT })
        }
        Command::Verify { what } => {
            let outcomes = cmd_verify(&ctx, what)?;
            match fmt {
                Format::Json => writeln!(out, "{}", serde_json::to_string(&outcomes)?)?,
                Format::Csv => {
                    writeln!(out, "check,passed")?;
                    for o in &outcomes {
                        writeln!(out, "{},{}", o.check, o.passed)?;
                    }
                }
                Format::Text => {
                    for o in &outcomes {
                        writeln!(out, "{} {} {}", if o.passed { "PASS" } else { "FAIL" }, o.check, o.detail)?;
                    }
                }
            }
            Ok(if outcomes.iter().all(|o| o.passed) { 0 } else { EXIT_VIOLATION })
        }
        Command::Trees(a) => {
            let lines = cmd_trees(&ctx, a)?;
            match fmt {
                Format::Json => writeln!(out, "{}", serde_json::to_string(&lines)?)?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["tree", "away", "chords", "eps", "l", "p", "q", "i", "j"]).map_err(csv_err)?;
                    for t in &lines {
                        let mut rec = vec![t.tree.clone(), t.away.to_string()];
                        match &t.class {
                            Some(c) => rec.extend(
                                [c.chords, usize::from(c.eps), c.l, c.p, c.q, c.i, c.j].map(|x| x.to_string()),
                            ),
                            None => rec.extend(std::iter::repeat_n(String::new(), 7)),
                        }
                        w.write_record(&rec).map_err(csv_err)?;
                    }
                    out.write_all(&w.into_inner().map_err(|e| Error::Io(e.into_error()))?)?;
                }
                Format::Text => {
                    for t in &lines {
                        match &t.class {
                            None => writeln!(out, "{}  away={}", t.tree, t.away)?,
                            Some(c) => writeln!(
                                out,
                                "{}  away={} chords={} eps={} chordless={} chorded={} alpha={} l={} p={} q={} i={} j={}",
                                t.tree,
                                t.away,
                                c.chords,
                                u8::from(c.eps),
                                c.chordless,
                                c.chorded,
                                c.alpha,
                                c.l,
                                c.p,
                                c.q,
                                c.i,
                                c.j
                            )?,
                        }
                    }
                }
            }
            Ok(0)
        }
        Command::Facets(a) => {
            let mut s = cmd_facets(&ctx, a)?;
            match (fmt, a.summary) {
                (Format::Text, false) => {
                    for l in &s.list {
                        writeln!(out, "{l}")?;
                    }
                }
                (Format::Csv, false) => {
                    writeln!(out, "facet")?;
                    for l in &s.list {
                        writeln!(out, "{l}")?;
                    }
                }
                (_, true) => {
                    s.list.clear();
                    writeln!(out, "{}", serde_json::to_string(&s)?)?;
                }
                (Format::Json, false) => writeln!(out, "{}", serde_json::to_string(&s)?)?,
            }
            Ok(0)
        }
        Command::GammaTable(a) => {
            let rows = cmd_gamma_table(a)?;
            match fmt {
                Format::Json => writeln!(out, "{}", serde_json::to_string(&rows)?)?,
                Format::Csv | Format::Text => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["n", "volume", "hstar", "gamma", "engines_agree"]).map_err(csv_err)?;
                    for r in &rows {
                        w.write_record([
                            r.n.to_string(),
                            r.volume.to_string(),
                            poly_str(&r.hstar),
                            poly_str(&r.gamma),
                            r.engines_agree.map_or_else(String::new, |b| b.to_string()),
                        ])
                        .map_err(csv_err)?;
                    }
                    out.write_all(&w.into_inner().map_err(|e| Error::Io(e.into_error()))?)?;
                }
            }
            let disagree = rows.iter().any(|r| r.engines_agree == Some(false));
            Ok(if disagree { EXIT_DISAGREEMENT } else { 0 })
        }
        Command::Export { input } => {
            match Instance::resolve(input)? {
                Instance::Gamma(g) => write!(out, "{}", g.graph().to_text())?,
                Instance::Graph(g) => write!(out, "{}", g.to_text())?,
                Instance::Matroid(m) => write!(out, "{}", crate::io::matroid_to_json(&m))?,
            }
            Ok(0)
        }
    }
}
