//! Command-line front end. Reports are `key=value` lines.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::classify::{classify, iso_singular_census};
use crate::doubling::{curated_zoo, CURATED_ZOO};
use crate::error::Error;
use crate::groups::{structure_report, FiniteGroup, GroupAction, Perm};
use crate::hull::{left_hull_from_identity, pair_classes, hull_at_identity, symmetrized_hull, DEFAULT_BUDGET};
use crate::io;
use crate::metrics::{isometries, RationalMetric};
use crate::perturb::{break_symmetry, Scheme};
use crate::rational::{self, Rational};
use crate::rigidify::{
    abelian_rigid, density_trial, disjoint_union_rigid, product_rigid, rigid_metric, RigidOptions, RigidityReport,
};

pub const BUDGET_ENV: &str = "ISOFORGE_BUDGET";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandOutcome {
    pub exit_code: i32,
    pub report: String,
}

#[derive(Parser, Debug)]
#[command(name = "isoforge", version, about = "Exact isometry-group realization for finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// `zoo:<name>` or a group file.
    #[arg(long, global = true)]
    group: Option<String>,
    /// Action file.
    #[arg(long, global = true)]
    action: Option<PathBuf>,
    /// Metric file.
    #[arg(long, global = true)]
    metric: Option<PathBuf>,
    #[arg(long, global = true, default_value = "1/10")]
    epsilon: String,
    #[arg(long, global = true, default_value = "direct")]
    scheme: String,
    #[arg(long, global = true, conflicts_with = "no_verify")]
    verify: bool,
    #[arg(long = "no-verify", global = true)]
    no_verify: bool,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true)]
    trials: Option<usize>,
    #[arg(long, global = true)]
    points: Option<usize>,
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[arg(long = "expect-order", global = true)]
    expect_order: Option<usize>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Case, hull at the identity, and inversion membership.
    Classify,
    /// Symmetrized 2-hull of an action (or of left translations).
    Hull,
    /// Metric whose isometry group is the hull of an action.
    Rigidify,
    /// Isometry group of a metric file.
    Verify,
    /// Describe a zoo group, or list the curated zoo.
    Zoo,
    /// Free realization on G × {0..points−1}.
    ProductRigid,
    /// Realization on X ⊔ G.
    UnionRigid,
    /// Realization of an abelian group.
    AbelianRigid,
    /// Fraction of random metrics with trivial isometry group.
    Density,
    /// Spot-check of the iso-singular groups in the curated zoo.
    Census,
    /// Left-invariant metric that is not right-invariant.
    BreakSymmetry,
}

enum Failure {
    Usage(String),
    Lib(Error),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Out = std::result::Result<String, (String, Failure)>;

struct Ctx {
    cli: Cli,
    budget: u64,
    epsilon: Rational,
    scheme: Scheme,
}

/// Runs one invocation. `args` excludes the program name.
pub fn run<I, S>(args: I) -> CommandOutcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv = std::iter::once("isoforge".to_string()).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            return CommandOutcome {
                exit_code: code,
                report: e.to_string(),
            };
        }
    };
    let outcome = prepare(cli).and_then(|ctx| dispatch(&ctx));
    match outcome {
        Ok(report) => CommandOutcome { exit_code: 0, report },
        Err((partial, failure)) => {
            let (code, line) = match failure {
                Failure::Usage(m) => (3, format!("error=usage: {m}")),
                Failure::Mismatch(m) => (1, format!("error=mismatch: {m}")),
                Failure::Lib(e) if e.is_budget() => (2, format!("error=budget: {e}")),
                Failure::Lib(e) => (1, format!("error={e}")),
            };
            CommandOutcome {
                exit_code: code,
                report: format!("{partial}{line}\n"),
            }
        }
    }
}

fn usage(msg: impl Into<String>) -> (String, Failure) {
    (String::new(), Failure::Usage(msg.into()))
}

fn prepare(cli: Cli) -> std::result::Result<Ctx, (String, Failure)> {
    let budget = match cli.budget {
        Some(b) => b,
        None => match std::env::var(BUDGET_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| usage(format!("{BUDGET_ENV} is not a count: {v:?}")))?,
            Err(_) => DEFAULT_BUDGET,
        },
    };
    let epsilon = rational::parse(&cli.epsilon).map_err(|_| usage(format!("--epsilon: not a rational: {}", cli.epsilon)))?;
    if epsilon <= rational::int(0) {
        return Err(usage("--epsilon must be positive"));
    }
    let scheme = cli
        .scheme
        .parse()
        .map_err(|_| usage(format!("--scheme: expected paper or direct, got {}", cli.scheme)))?;
    Ok(Ctx {
        cli,
        budget,
        epsilon,
        scheme,
    })
}

fn lib<T>(r: crate::error::Result<T>) -> std::result::Result<T, (String, Failure)> {
    r.map_err(|e| (String::new(), Failure::Lib(e)))
}

impl Ctx {
    fn group(&self) -> std::result::Result<FiniteGroup, (String, Failure)> {
        let src = self.cli.group.as_deref().ok_or_else(|| usage("--group is required"))?;
        lib(io::load_group(src))
    }

    fn action(&self) -> std::result::Result<GroupAction, (String, Failure)> {
        let path = self.cli.action.as_deref().ok_or_else(|| usage("--action is required"))?;
        lib(io::load_action(path))
    }

    /// `--action` if given, else the left translations of `--group`.
    fn action_or_left(&self) -> std::result::Result<GroupAction, (String, Failure)> {
        match (&self.cli.action, &self.cli.group) {
            (Some(_), _) => self.action(),
            (None, Some(_)) => Ok(self.group()?.left_regular_action()),
            (None, None) => Err(usage("--action or --group is required")),
        }
    }

    fn metric(&self) -> std::result::Result<Option<RationalMetric>, (String, Failure)> {
        self.cli.metric.as_deref().map(|p| lib(io::load_metric(p))).transpose()
    }

    fn verify(&self) -> Option<bool> {
        match (self.cli.verify, self.cli.no_verify) {
            (true, _) => Some(true),
            (_, true) => Some(false),
            _ => None,
        }
    }

    fn options(&self) -> RigidOptions {
        RigidOptions {
            epsilon: self.epsilon.clone(),
            scheme: self.scheme,
            verify: self.verify(),
            demand_exact: false,
            budget: self.budget,
        }
    }

    fn points(&self) -> std::result::Result<usize, (String, Failure)> {
        self.cli.points.ok_or_else(|| usage("--points is required"))
    }

    /// Writes `text` to `--out`, or appends it to the report.
    fn emit(&self, report: &mut String, text: &str) -> std::result::Result<(), (String, Failure)> {
        match &self.cli.out {
            Some(path) => {
                lib(write_file(path, text))?;
                let _ = writeln!(report, "out={}", path.display());
            }
            None => report.push_str(text),
        }
        Ok(())
    }
}

fn write_file(path: &Path, text: &str) -> crate::error::Result<()> {
    std::fs::write(path, text)?;
    Ok(())
}

fn kv(report: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(report, "{key}={value}");
}

fn set_list(items: impl IntoIterator<Item = usize>) -> String {
    items.into_iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

fn rigidity_lines(report: &mut String, r: &RigidityReport, scheme: Scheme) {
    kv(report, "order", r.realized_group_order);
    kv(report, "group_order", r.group_order);
    kv(report, "exact", r.exact);
    kv(report, "verified", r.verified);
    kv(
        report,
        "corridor",
        format!("{},{}", rational::format(&r.corridor.0), rational::format(&r.corridor.1)),
    );
    kv(report, "corridor_ok", r.corridor_holds());
    kv(report, "epsilon", rational::format(&r.epsilon));
    kv(report, "scheme", format!("{scheme:?}").to_lowercase());
    kv(report, "degree", r.metric.degree());
}

fn dispatch(ctx: &Ctx) -> Out {
    let mut rep = String::new();
    match ctx.cli.command {
        Command::Classify => {
            let g = ctx.group()?;
            let c = lib(classify(&g, ctx.budget))?;
            kv(&mut rep, "case", c.case);
            kv(&mut rep, "hull_e", c.hull_e.len());
            kv(&mut rep, "kappa_in_hull", c.kappa_in_hull);
            kv(&mut rep, "order", g.order());
            if let Some(ds) = &c.structural_witness {
                kv(&mut rep, "witness_subgroup", set_list(ds.subgroup.iter().copied()));
                kv(&mut rep, "witness_p", ds.p_tilde);
            }
        }
        Command::Hull => {
            let a = ctx.action_or_left()?;
            let h = lib(symmetrized_hull(&a, ctx.budget))?;
            kv(&mut rep, "order", a.group().order());
            kv(&mut rep, "degree", a.degree());
            kv(&mut rep, "classes", pair_classes(&a).num_classes());
            kv(&mut rep, "hull_order", h.len());
            kv(&mut rep, "closed", h.closed);
        }
        Command::Rigidify => {
            let a = ctx.action_or_left()?;
            let seed = ctx.metric()?;
            let r = lib(rigid_metric(&a, seed.as_ref(), &ctx.options()))?;
            rigidity_lines(&mut rep, &r, ctx.scheme);
            ctx.emit(&mut rep, &io::write_metric_file(&r.metric))?;
        }
        Command::Verify => {
            let d = ctx.metric()?.ok_or_else(|| usage("--metric is required"))?;
            let found = lib(isometries(&d, ctx.budget))?;
            kv(&mut rep, "order", found.len());
            kv(&mut rep, "degree", d.degree());
            if ctx.cli.action.is_some() {
                let a = ctx.action()?;
                let h = lib(symmetrized_hull(&a, ctx.budget))?;
                let same = h.maps == found;
                kv(&mut rep, "matches_hull", same);
                if !same {
                    return Err((rep, Failure::Mismatch("isometry group differs from the hull".into())));
                }
            }
            if let Some(n) = ctx.cli.expect_order {
                if n != found.len() {
                    return Err((rep, Failure::Mismatch(format!("expected order {n}, found {}", found.len()))));
                }
            }
        }
        Command::Zoo => match &ctx.cli.group {
            None => {
                for name in CURATED_ZOO {
                    kv(&mut rep, "name", name);
                }
            }
            Some(src) => {
                let g = ctx.group()?;
                let s = structure_report(&g);
                kv(&mut rep, "order", g.order());
                kv(&mut rep, "abelian", s.abelian);
                kv(&mut rep, "boolean", s.boolean);
                kv(&mut rep, "exponent", s.exponent);
                kv(&mut rep, "center", set_list(s.center));
                kv(&mut rep, "squares", set_list(s.squares));
                let name = src.strip_prefix("zoo:").unwrap_or(src).replace([' ', '/'], "_");
                ctx.emit(&mut rep, &io::write_group_file(&name, &g))?;
            }
        },
        Command::ProductRigid => {
            let g = ctx.group()?;
            let (r, _) = lib(product_rigid(&g, ctx.points()?, &ctx.options()))?;
            rigidity_lines(&mut rep, &r, ctx.scheme);
            kv(&mut rep, "free", acts_freely(&r.isometries));
            ctx.emit(&mut rep, &io::write_metric_file(&r.metric))?;
        }
        Command::UnionRigid => {
            let a = ctx.action()?;
            let (r, _) = lib(disjoint_union_rigid(&a, &ctx.options()))?;
            rigidity_lines(&mut rep, &r, ctx.scheme);
            ctx.emit(&mut rep, &io::write_metric_file(&r.metric))?;
        }
        Command::AbelianRigid => {
            let g = ctx.group()?;
            let r = lib(abelian_rigid(&g, &ctx.options()))?;
            rigidity_lines(&mut rep, &r, ctx.scheme);
            ctx.emit(&mut rep, &io::write_metric_file(&r.metric))?;
        }
        Command::Density => {
            let points = ctx.cli.points.unwrap_or(5);
            let trials = ctx.cli.trials.unwrap_or(500);
            let r = lib(density_trial(points, trials, ctx.cli.seed))?;
            kv(&mut rep, "points", r.points);
            kv(&mut rep, "trials", r.trials);
            kv(&mut rep, "trivial", r.trivial);
            kv(&mut rep, "fraction", rational::format(&r.fraction));
            kv(&mut rep, "perturbed_trivial", r.perturbed_all_trivial);
        }
        Command::Census => {
            let zoo = lib(curated_zoo())?;
            let r = lib(iso_singular_census(&zoo, ctx.budget))?;
            for (name, order) in &r.members {
                kv(&mut rep, "member", format!("{name}:{order}"));
            }
            kv(&mut rep, "exponent_four", r.all_exponent_four);
            kv(&mut rep, "same_order_isomorphic", r.same_order_isomorphic);
            let fam: Vec<String> = r.family_orders.iter().map(|(n, o)| format!("{n}:{o}")).collect();
            kv(&mut rep, "family", fam.join(","));
            kv(&mut rep, "ok", r.ok());
            if !r.ok() {
                return Err((rep, Failure::Mismatch("census check failed".into())));
            }
        }
        Command::BreakSymmetry => {
            let g = ctx.group()?;
            let d = match ctx.metric()? {
                Some(d) => d,
                None => lib(RationalMetric::word_metric(&g, &g.canonical_generators()))?,
            };
            let hull = left_hull_from_identity(&g, &lib(hull_at_identity(&g, ctx.budget))?);
            let kappa = g.inversion();
            let (label, f) = if !hull.contains(&kappa) {
                ("inversion".to_string(), kappa)
            } else {
                match g.elements().map(|x| (x, right_translation(&g, x))).find(|(_, r)| !hull.contains(r)) {
                    Some((x, r)) => (format!("right:{x}"), r),
                    None => return Err((rep, Failure::Lib(Error::NotOutsideHull))),
                }
            };
            let rho = lib(break_symmetry(&d, &g, &f, &ctx.epsilon, ctx.budget))?;
            kv(&mut rep, "map", label);
            kv(&mut rep, "map_is_isometry", rho.is_isometry(&f));
            kv(&mut rep, "left_invariant", rho.is_invariant_under(&g.left_regular_action()));
            let broken = g.elements().find(|&x| !rho.is_isometry(&right_translation(&g, x)));
            kv(
                &mut rep,
                "non_isometric_right_translation",
                broken.map_or("none".to_string(), |x| x.to_string()),
            );
            ctx.emit(&mut rep, &io::write_metric_file(&rho))?;
        }
    }
    Ok(rep)
}

fn right_translation(g: &FiniteGroup, a: usize) -> Perm {
    Perm::from_images(g.elements().map(|x| g.mul(x, a)).collect()).expect("translations are bijections")
}

fn acts_freely(maps: &[Perm]) -> bool {
    maps.iter().all(|p| p.is_identity() || p.fixed_points().next().is_none())
}
