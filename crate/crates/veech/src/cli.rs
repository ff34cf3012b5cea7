//! The `veech` command line tool.
//!
//! Exit codes: 0 when every check passes, 1 on a failed check (the report
//! still goes to stdout or the requested file), 2 on usage errors, 3 when a
//! resource cap stops the computation.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_traits::ToPrimitive;
use rayon::prelude::*;
use thiserror::Error;
use veech_core::graph::{min_rooted_connected_cheeger, min_rooted_subtree_cheeger, root_looped_tree_ball, tree_cheeger_profile};
use veech_core::modn::{self, ModNAction, ModNError};
use veech_core::quadfield::format_rational;
use veech_core::reduce::{self, ReduceError};
use veech_core::schreier::{self, build_g2, classify_component, expand_ball, unit_generators, ExploreError};
use veech_core::spectral::{self, cheeger_sandwich_check, dirichlet_mu0};
use veech_core::{Rational, Surface};

use crate::format::{csv, json_report, GraphDocument};
use crate::sampling::{parse_point, parse_surface, surface_from_parts, ParseError};
use crate::suites;

/// Component counts of `G_N` for `N = 1..=28`.
pub const TABLE_1: [usize; 28] = [
    1, 5, 1, 8, 1, 5, 3, 8, 1, 5, 1, 8, 1, 15, 1, 8, 3, 5, 1, 8, 3, 5, 3, 8, 1, 5, 1, 24,
];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("check failed: {0}")]
    Check(String),
    #[error("resource cap: {0}")]
    Resource(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Check(_) => 1,
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Resource(_) => 3,
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<ModNError> for CliError {
    fn from(e: ModNError) -> Self {
        match e {
            ModNError::ResourceCap { .. } => CliError::Resource(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<ReduceError> for CliError {
    fn from(e: ReduceError) -> Self {
        match e {
            ReduceError::ResourceCap { .. } | ReduceError::IterationCap => CliError::Resource(e.to_string()),
            ReduceError::WrongSurface => CliError::Usage(e.to_string()),
            _ => CliError::Check(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "veech", version, about = "Orbits of connection points on L-shaped Veech surfaces")]
pub struct Cli {
    /// Worker threads (results do not depend on this).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct SurfaceArgs {
    /// Prototype by name: L8, L12, L17+, L5-, ...
    #[arg(long, conflicts_with_all = ["d", "eps"])]
    pub surface: Option<String>,
    /// Discriminant D of the prototype.
    #[arg(long = "D", id = "d")]
    pub d: Option<u32>,
    /// Spin: 0 for even D, 1 or -1 for odd D.
    #[arg(long, allow_negative_numbers = true, requires = "d")]
    pub eps: Option<i8>,
}

impl SurfaceArgs {
    pub fn resolve(&self) -> Result<Surface, CliError> {
        match (&self.surface, self.d) {
            (Some(name), _) => Ok(parse_surface(name)?),
            (None, Some(d)) => Ok(surface_from_parts(d, self.eps.unwrap_or(0))?),
            (None, None) => Ok(parse_surface("L8")?),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Component counts C(N) of the mod-N graph for N = 1..=max, compared
    /// with the reference table.
    TableCn {
        #[arg(long, default_value_t = 28)]
        max: u32,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Components of the mod-N graph G_N for one N or a range.
    Components {
        #[arg(long = "N", id = "n", required_unless_present = "table")]
        n: Option<u32>,
        /// Range such as 1..28.
        #[arg(long)]
        table: Option<String>,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Print component representatives.
        #[arg(long)]
        representatives: bool,
        #[arg(long, default_value_t = modn::DEFAULT_TUPLE_CAP)]
        cap: u64,
        #[command(flatten)]
        surface: SurfaceArgs,
    },
    /// Weak multiplicativity probe C(NM) against C(N)C(M) for coprime N, M
    /// (reported, never fails).
    Multiplicativity {
        #[arg(long, default_value_t = 28)]
        max: u32,
    },
    /// Reduce a point of L8 into the finite set S and print the word.
    Reduce {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// x_r,x_i,y_r,y_i
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Print every iteration.
        #[arg(long)]
        trace: bool,
    },
    /// Bracket the number of orbits in S ∩ P_N between C(N) and the number
    /// of components of the reduction graph.
    OrbitBracket {
        #[arg(long = "N", id = "n")]
        n: u32,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Upper limit on enumerated candidate points.
        #[arg(long, default_value_t = 50_000_000)]
        cap: u64,
    },
    /// Breadth-first ball in the Schreier graph of a point, under A^±1, B^±1
    /// or (with --g2) the graph G'' with A^±k, B^±l.
    Explore {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        g2: bool,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long, default_value_t = schreier::DEFAULT_VERTEX_CAP)]
        cap: usize,
    },
    /// Classify G'' balls as 4-valent trees or root-looped trees, for one
    /// point or for seeded random points.
    Classify {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "samples")]
        point: Option<String>,
        #[arg(long, default_value_t = 3)]
        radius: usize,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Denominators to draw from, comma separated.
        #[arg(long = "N", id = "ns", value_delimiter = ',', default_value = "1,2,3")]
        ns: Vec<i64>,
        /// Bound on the irrational numerators of random points.
        #[arg(long, default_value_t = 40)]
        bound: i64,
        #[arg(long, default_value_t = schreier::DEFAULT_VERTEX_CAP)]
        cap: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Property suites for the growth of s(P) = |x_i| + |y_i| under large
    /// powers of A and B.
    VerifyLemmas {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Samples per lemma on L8; other prototypes get a tenth.
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        /// Restrict to one prototype (then it gets the full sample count).
        #[arg(long)]
        surface: Option<String>,
        #[arg(long, default_value_t = 6)]
        n_max: i64,
        #[arg(long, default_value_t = 40)]
        bound: i64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Vertex-boundary Cheeger constants of tree balls and the exact minimum
    /// over rooted subtrees of the root-looped 4-valent tree.
    TreeCheeger {
        /// Half the valency of the regular tree.
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value_t = 8)]
        n_max: u32,
        /// Depth of the root-looped truncation searched exactly.
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Dirichlet bottom eigenvalue on a ball and the Cheeger sandwich
    /// c²/(2k) ≤ μ0 ≤ k·c.
    Spectral {
        /// Graph document written by `explore --json`.
        #[arg(long, conflicts_with_all = ["tree", "root_looped"])]
        graph: Option<PathBuf>,
        /// Use the ball in the regular tree of this valency.
        #[arg(long)]
        tree: Option<usize>,
        /// Use the ball in the root-looped 4-valent tree.
        #[arg(long, conflicts_with = "tree")]
        root_looped: bool,
        #[arg(long)]
        support_radius: usize,
        /// Cheeger constant for the sandwich; defaults to 2/3 on trees.
        #[arg(long)]
        cheeger: Option<String>,
    },
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    if let Some(p) = path {
        fs::write(p, text)?;
    }
    Ok(())
}

/// Runs a parsed command, writing human or machine output to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let threads = cli.threads.unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let mut buf = Vec::new();
    let res = pool.install(|| dispatch(&cli.command, &mut buf));
    out.write_all(&buf)?;
    res
}

fn component_counts(action: &ModNAction, ns: &[u32], cap: u64) -> Result<Vec<modn::ModNComponents>, CliError> {
    let mut res = Vec::with_capacity(ns.len());
    for &n in ns {
        if n == 0 {
            return Err(CliError::Usage("N must be positive".into()));
        }
        let tuples = (n as u64).pow(4);
        if tuples > cap {
            return Err(ModNError::ResourceCap { n, tuples, cap }.into());
        }
        let edges: Vec<[usize; 2]> = (0..tuples as usize).into_par_iter().map(|i| modn::images(action, n, i)).collect();
        res.push(modn::components_union_find(action, n, cap, Some(&edges))?);
    }
    Ok(res)
}

fn parse_range(s: &str) -> Result<Vec<u32>, CliError> {
    let bad = || CliError::Usage(format!("range must look like 1..28, got {s:?}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: u32 = a.trim().parse().map_err(|_| bad())?;
    let b: u32 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    if a == 0 || a > b {
        return Err(bad());
    }
    Ok((a..=b).collect())
}

fn dispatch(cmd: &Command, out: &mut Vec<u8>) -> Result<(), CliError> {
    match cmd {
        Command::TableCn { max, csv: path } => {
            let ns: Vec<u32> = (1..=*max).collect();
            let comps = component_counts(&ModNAction::L8, &ns, modn::DEFAULT_TUPLE_CAP)?;
            let rows: Vec<Vec<String>> = comps.iter().map(|c| vec![c.n.to_string(), c.count.to_string()]).collect();
            let text = csv("table-cn", &["N", "C(N)"], &rows);
            out.write_all(text.as_bytes())?;
            write_out(path, &text)?;
            let bad: Vec<String> = comps
                .iter()
                .filter(|c| (c.n as usize) <= TABLE_1.len() && TABLE_1[c.n as usize - 1] != c.count)
                .map(|c| format!("C({}) = {}, expected {}", c.n, c.count, TABLE_1[c.n as usize - 1]))
                .collect();
            if bad.is_empty() {
                Ok(())
            } else {
                Err(CliError::Check(bad.join("; ")))
            }
        }
        Command::Components { n, table, csv: path, representatives, cap, surface } => {
            let s = surface.resolve()?;
            let action = ModNAction::for_surface(&s)?;
            let ns = match (table, n) {
                (Some(r), _) => parse_range(r)?,
                (None, Some(n)) => vec![*n],
                (None, None) => unreachable!("clap requires one of them"),
            };
            let comps = component_counts(&action, &ns, *cap)?;
            let rows: Vec<Vec<String>> = comps.iter().map(|c| vec![c.n.to_string(), c.count.to_string()]).collect();
            let text = csv("components", &["N", "C(N)"], &rows);
            out.write_all(text.as_bytes())?;
            write_out(path, &text)?;
            if *representatives {
                for c in &comps {
                    for r in &c.representatives {
                        writeln!(out, "# N={} representative {}", c.n, r)?;
                    }
                }
            }
            Ok(())
        }
        Command::Multiplicativity { max } => {
            let ns: Vec<u32> = (1..=*max).collect();
            let counts: Vec<usize> = component_counts(&ModNAction::L8, &ns, modn::DEFAULT_TUPLE_CAP)?
                .iter()
                .map(|c| c.count)
                .collect();
            let rows: Vec<Vec<String>> = modn::multiplicativity(&counts)
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        r.m.to_string(),
                        r.c_nm.to_string(),
                        r.c_n_times_c_m.to_string(),
                        r.holds().to_string(),
                    ]
                })
                .collect();
            out.write_all(csv("multiplicativity", &["N", "M", "C(NM)", "C(N)C(M)", "equal"], &rows).as_bytes())?;
            Ok(())
        }
        Command::Reduce { surface, point, trace } => {
            let s = surface.resolve()?;
            let p = parse_point(&s, point)?;
            let r = reduce::reduce(&p)?;
            if *trace {
                let mut cur = p.clone();
                for (i, t) in r.trace.iter().enumerate() {
                    let (_, w, next) = reduce::reduction_step(&cur);
                    writeln!(
                        out,
                        "step {i}: case {} word {} max|irr| {} -> {}",
                        t.case,
                        w,
                        format_rational(&r.measure[i]),
                        next.key()
                    )?;
                    cur = next;
                }
            }
            writeln!(out, "input: {}", p.key())?;
            writeln!(out, "word: {}", r.word)?;
            writeln!(out, "output: {}", r.output.key())?;
            writeln!(out, "steps: {}", r.steps)?;
            Ok(())
        }
        Command::OrbitBracket { n, json, cap } => {
            let s = parse_surface("L8")?;
            let b = suites::orbit_bracket(&s, *n, *cap)?;
            let report = suites::BracketReport::from(&b);
            let text = json_report("veech-orbit-bracket/1", &report);
            writeln!(out, "N = {}: lower {} upper {}", report.n, report.lower, report.upper)?;
            writeln!(
                out,
                "points {} largest class {} singletons {} classes off saddle connections {}",
                report.points, report.largest_class, report.singleton_classes, report.upper_off_saddle_connections
            )?;
            write_out(json, &text)?;
            if !report.consistent_with_modn {
                out.write_all(text.as_bytes())?;
                return Err(CliError::Check("an H-component meets two components of G_N".into()));
            }
            Ok(())
        }
        Command::Explore { surface, point, radius, g2, json, dot, cap } => {
            let s = surface.resolve()?;
            let p = parse_point(&s, point)?;
            let res = if *g2 {
                build_g2(&p, *radius, *cap).map(|(g, choice)| {
                    (g, Some(choice))
                })
            } else {
                expand_ball(&p, &unit_generators(), *radius, *cap).map(|g| (g, None))
            };
            let (ball, choice) = match res {
                Ok(x) => x,
                Err(ExploreError::ResourceCap { cap, partial }) => {
                    let doc = GraphDocument::from_orbit_graph(&partial);
                    write_out(json, &doc.to_json())?;
                    write_out(dot, &doc.to_dot())?;
                    return Err(CliError::Resource(format!(
                        "vertex cap {cap} reached with {} vertices",
                        partial.vertex_count()
                    )));
                }
                Err(e) => return Err(CliError::Check(e.to_string())),
            };
            let doc = GraphDocument::from_orbit_graph(&ball);
            writeln!(out, "vertices {} edges {} radius {}", ball.vertex_count(), ball.edges().len(), ball.radius())?;
            writeln!(out, "root {}", ball.vertex(ball.root()).key())?;
            if let Some(c) = choice {
                let descent: Vec<String> = c.descent.iter().map(|l| l.to_string()).collect();
                writeln!(out, "escape steps {} descent [{}]", c.escape_steps, descent.join(" "))?;
            }
            write_out(json, &doc.to_json())?;
            write_out(dot, &doc.to_dot())?;
            Ok(())
        }
        Command::Classify { surface, point, radius, samples, seed, ns, bound, cap, json } => {
            let s = surface.resolve()?;
            if let Some(pt) = point {
                let p = parse_point(&s, pt)?;
                let (ball, _) = match build_g2(&p, *radius, *cap) {
                    Ok(x) => x,
                    Err(ExploreError::ResourceCap { cap, .. }) => {
                        return Err(CliError::Resource(format!("vertex cap {cap} reached")))
                    }
                    Err(e) => return Err(CliError::Check(e.to_string())),
                };
                let shape = classify_component(&ball);
                writeln!(out, "{}", shape.summary())?;
                return if shape.kind == schreier::ShapeKind::Other {
                    Err(CliError::Check(format!("{} is not a tree shape", p.key())))
                } else {
                    Ok(())
                };
            }
            if ns.iter().any(|&n| n < 1) {
                return Err(CliError::Usage("denominators must be positive".into()));
            }
            let rep = suites::classify_suite(&s, *seed, samples.unwrap_or(50), ns, *bound, *radius, *cap);
            let text = json_report("veech-classify/1", &rep);
            writeln!(
                out,
                "{}: {} samples, Tree4 {}, RootLooped4 {}, Other {}, root tie edges {}",
                rep.surface, rep.samples, rep.tree4, rep.root_looped4, rep.other, rep.tie_edges
            )?;
            write_out(json, &text)?;
            if rep.resource_caps > 0 {
                return Err(CliError::Resource(format!("{} balls hit the vertex cap", rep.resource_caps)));
            }
            if !rep.passed() {
                out.write_all(text.as_bytes())?;
                return Err(CliError::Check(format!("{} samples failed", rep.failures.len())));
            }
            Ok(())
        }
        Command::VerifyLemmas { seed, samples, surface, n_max, bound, json } => {
            if *n_max < 1 || *bound < 1 {
                return Err(CliError::Usage("--n-max and --bound must be positive".into()));
            }
            let runs: Vec<(Surface, u64)> = match surface {
                Some(name) => vec![(parse_surface(name)?, *samples)],
                None => vec![
                    (parse_surface("L8")?, *samples),
                    (parse_surface("L5-")?, (samples / 10).max(1)),
                    (parse_surface("L17+")?, (samples / 10).max(1)),
                ],
            };
            let reports: Vec<suites::LemmaReport> =
                runs.iter().map(|(s, n)| suites::lemma_suite(s, *seed, *n, *n_max, *bound)).collect();
            for r in &reports {
                let counts: Vec<String> =
                    r.counts.iter().map(|c| format!("{} {}/{}", c.lemma, c.checked - c.violations, c.checked)).collect();
                writeln!(out, "{} seed {}: {}", r.surface, r.seed, counts.join(", "))?;
            }
            #[derive(serde::Serialize)]
            struct Runs<'a> {
                runs: &'a [suites::LemmaReport],
            }
            let text = json_report("veech-lemmas/1", &Runs { runs: &reports });
            write_out(json, &text)?;
            let failed: usize = reports.iter().map(|r| r.failures.len()).sum();
            if failed > 0 {
                out.write_all(text.as_bytes())?;
                return Err(CliError::Check(format!("{failed} lemma checks failed")));
            }
            Ok(())
        }
        Command::TreeCheeger { k, n_max, depth, csv: path } => {
            if *k == 0 || *n_max == 0 {
                return Err(CliError::Usage("--k and --n-max must be positive".into()));
            }
            let two_thirds = Rational::new(2.into(), 3.into());
            let profile = tree_cheeger_profile(*k, *n_max);
            let rows: Vec<Vec<String>> = profile
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let f = c.to_f64().unwrap_or(f64::NAN);
                    vec![(i + 1).to_string(), format_rational(c), format!("{f:.9}")]
                })
                .collect();
            let text = csv("tree-cheeger", &["n", "c(B_n)", "approx"], &rows);
            out.write_all(text.as_bytes())?;
            write_out(path, &text)?;
            let (g, d) = root_looped_tree_ball(depth + 1);
            let allowed: Vec<bool> = d.iter().map(|&x| x <= *depth).collect();
            let (c, witness) = min_rooted_subtree_cheeger(&g, 0, &allowed).expect("truncation is a tree");
            let bounded = min_rooted_connected_cheeger(&g, 0, &allowed, 10);
            writeln!(
                out,
                "# root-looped tree, depth {depth}: min c(M) over rooted subtrees = {} (witness size {}); enumeration up to size 10 gives {} over {} sets",
                format_rational(&c),
                witness.len(),
                format_rational(&bounded.min),
                bounded.examined
            )?;
            if c != two_thirds || bounded.min != two_thirds {
                return Err(CliError::Check(format!("root-looped minimum {} differs from 2/3", format_rational(&c))));
            }
            Ok(())
        }
        Command::Spectral { graph, tree, root_looped, support_radius, cheeger } => {
            let r = *support_radius;
            let (g, support, k, default_c) = if let Some(path) = graph {
                let doc = GraphDocument::from_json(&fs::read_to_string(path)?).map_err(|e| CliError::Usage(e.to_string()))?;
                let g = doc.simple_graph().map_err(|e| CliError::Usage(e.to_string()))?;
                let dist = g.distances(doc.root);
                let support: Vec<bool> = dist.iter().map(|&x| x <= r).collect();
                let k = g.max_degree();
                (g, support, k, None)
            } else if *root_looped {
                let (g, s) = spectral::root_looped_ball_support(r);
                (g, s, 4, Some(2.0 / 3.0))
            } else if let Some(deg) = tree {
                if *deg < 2 {
                    return Err(CliError::Usage("tree valency must be at least 2".into()));
                }
                let (g, s) = spectral::tree_ball_support(*deg, r);
                // the exact value 2/3 is known for valency 4 only
                let c = (*deg == 4).then_some(2.0 / 3.0);
                (g, s, *deg, c)
            } else {
                return Err(CliError::Usage("one of --graph, --tree or --root-looped is required".into()));
            };
            let c = match cheeger {
                Some(t) => Some(
                    veech_core::quadfield::parse_rational(t)
                        .map_err(|e| CliError::Usage(e.to_string()))?
                        .to_f64()
                        .unwrap_or(f64::NAN),
                ),
                None => default_c,
            };
            let v = dirichlet_mu0(&g, &support).map_err(|e| CliError::Check(e.to_string()))?;
            let size = support.iter().filter(|&&s| s).count();
            writeln!(out, "support {size} vertices, max degree {k}")?;
            writeln!(out, "mu0 {:.12} residual {:.3e} iterations {}", v.mu0, v.residual, v.iterations)?;
            if tree.is_some() {
                let b = spectral::regular_tree_spectral_bottom(k);
                writeln!(out, "tree spectral bottom {b:.12}, gap {:.6}", v.mu0 - b)?;
            }
            if let Some(c) = c {
                let rep = cheeger_sandwich_check(c, k, v.mu0, 0.0);
                writeln!(
                    out,
                    "sandwich {:.6} <= {:.6} <= {:.6}: {}",
                    rep.lower,
                    rep.mu0,
                    rep.upper,
                    if rep.holds() { "holds" } else { "violated" }
                )?;
                // a Dirichlet value bounds the infimum from above, so only the
                // upper inequality is a check here
                if !rep.upper_holds {
                    return Err(CliError::Check("mu0 exceeds k·c".into()));
                }
            }
            Ok(())
        }
    }
}
