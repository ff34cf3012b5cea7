//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! The process fails when a check fails that is not listed as known. The
//! single known failure is the radius-7 tolerance of the tree-ball Dirichlet
//! value: the exact value there is 0.7113, while the tolerance asks for
//! 0.5359 ± 0.05. Balls approach the spectral bottom only like 1/r².

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use veech::cli::TABLE_1;
use veech::sampling::parse_surface;
use veech::suites;
use veech_core::graph::{
    min_rooted_connected_cheeger, min_rooted_subtree_cheeger, root_looped_tree_ball, tree_cheeger_profile, SimpleGraph,
};
use veech_core::spectral::{
    dirichlet_mu0, inner_exact, laplacian_apply_exact, quadratic_form_exact, regular_tree_spectral_bottom,
    tree_ball_support,
};
use veech_core::Rational;

const SEED: u64 = 20_240_611;

const TABLE_TIME: Duration = Duration::from_secs(5 * 60);
const REDUCE_SAMPLES: u64 = 1000;
const REDUCE_N_MAX: i64 = 12;
const REDUCE_BOUND: i64 = 10_000;
const REDUCE_TIME: Duration = Duration::from_secs(120);
const LEMMA_SAMPLES_L8: u64 = 10_000;
const LEMMA_SAMPLES_OTHER: u64 = 1_000;
const G2_SAMPLES: u64 = 60;
const G2_RADIUS: usize = 3;
const CHEEGER_TOL: f64 = 0.02;
const SANDWICH_LOW: f64 = 0.0556;
const SANDWICH_HIGH: f64 = 2.667;
const SPECTRAL_TOL: f64 = 0.05;
const EQUIV_PAIRS: u64 = 10_000;
const EQUIV_WORDS: u64 = 1_000;
const BRACKET_TIME: Duration = Duration::from_secs(30 * 60);

struct Line {
    id: u32,
    name: &'static str,
    checks: Vec<(String, bool, bool)>,
    elapsed: Duration,
}

impl Line {
    fn new(id: u32, name: &'static str) -> Self {
        Line { id, name, checks: Vec::new(), elapsed: Duration::ZERO }
    }

    fn check(&mut self, what: impl Into<String>, ok: bool) {
        self.checks.push((what.into(), ok, false));
    }

    /// A check expected to fail; it still prints as a failure.
    fn known(&mut self, what: impl Into<String>, ok: bool) {
        self.checks.push((what.into(), ok, true));
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.1)
    }

    fn unexpected(&self) -> bool {
        self.checks.iter().any(|c| !c.1 && !c.2)
    }

    fn print(&self) {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let detail: Vec<String> = self
            .checks
            .iter()
            .map(|(w, ok, known)| match (ok, known) {
                (true, _) => format!("ok {w}"),
                (false, false) => format!("FAILED {w}"),
                (false, true) => format!("FAILED(known) {w}"),
            })
            .collect();
        println!(
            "criterion {} [{}]: {verdict} ({:.1}s) {}",
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            detail.join("; ")
        );
    }
}

fn timed(mut line: Line, f: impl FnOnce(&mut Line)) -> Line {
    let t = Instant::now();
    f(&mut line);
    line.elapsed = t.elapsed();
    line.print();
    line
}

fn table_cn(l: &mut Line) {
    let t = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_veech")).args(["table-cn", "--max", "28"]).output();
    let Ok(out) = out else {
        l.check("binary runs", false);
        return;
    };
    l.check("exit code 0", out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let counts: Vec<usize> = text
        .lines()
        .filter(|s| !s.starts_with('#') && !s.starts_with('N'))
        .filter_map(|s| s.split(',').nth(1)?.parse().ok())
        .collect();
    l.check(format!("C(1..28) = {counts:?} matches the table"), counts == TABLE_1);
    l.check(format!("runtime {:.1}s < 300s", t.elapsed().as_secs_f64()), t.elapsed() < TABLE_TIME);
}

fn reduction(l: &mut Line) {
    let s = parse_surface("L8").unwrap();
    let t = Instant::now();
    let r = suites::reduce_suite(&s, SEED, REDUCE_SAMPLES, REDUCE_N_MAX, REDUCE_BOUND);
    let el = t.elapsed();
    l.check(format!("{}/{} points reduced and replayed", r.reduced, r.samples), r.passed());
    l.check(format!("max {} iterations, word length {}", r.max_steps, r.max_word_length), true);
    if let Some(f) = r.failures.first() {
        l.check(format!("first failure {} at {}: {}", f.check, f.point, f.detail), false);
    }
    l.check(format!("runtime {:.1}s < 120s", el.as_secs_f64()), el < REDUCE_TIME);
}

fn lemmas(l: &mut Line) {
    for (name, n) in [("L8", LEMMA_SAMPLES_L8), ("L5-", LEMMA_SAMPLES_OTHER), ("L17+", LEMMA_SAMPLES_OTHER)] {
        let s = parse_surface(name).unwrap();
        let r = suites::lemma_suite(&s, SEED, n, 6, 40);
        let min_checked = r.counts.iter().map(|c| c.checked).min().unwrap_or(0);
        let violations: u64 = r.counts.iter().map(|c| c.violations).sum();
        l.check(
            format!("{name}: {violations} violations, at least {min_checked} checks per lemma"),
            r.passed() && min_checked >= n,
        );
    }
}

fn g2_structure(l: &mut Line) {
    let s = parse_surface("L8").unwrap();
    let r = suites::classify_suite(&s, SEED, G2_SAMPLES, &[1, 2, 3], 40, G2_RADIUS, 2_000_000);
    l.check(
        format!(
            "{} radius-{} balls: Tree4 {}, RootLooped4 {}, Other {}",
            r.samples, r.radius, r.tree4, r.root_looped4, r.other
        ),
        r.passed() && r.samples >= 50,
    );
    l.check(format!("s increases away from the root ({} root tie edges)", r.tie_edges), r.failures.is_empty());
}

fn cheeger(l: &mut Line) {
    let two_thirds = Rational::new(2.into(), 3.into());
    let (g, d) = root_looped_tree_ball(5);
    let allowed: Vec<bool> = d.iter().map(|&x| x <= 4).collect();
    let (c, _) = min_rooted_subtree_cheeger(&g, 0, &allowed).expect("tree");
    l.check(format!("root-looped depth 4 minimum over all rooted subtrees = {c}"), c == two_thirds);
    let e = min_rooted_connected_cheeger(&g, 0, &allowed, 12);
    l.check(format!("explicit enumeration up to size 12 ({} sets) = {}", e.examined, e.min), e.min == two_thirds);
    let p = tree_cheeger_profile(2, 8);
    let diff = (&p[7] - &two_thirds).to_f64().unwrap().abs();
    l.check(format!("|c(B_8) - 2/3| = {diff:.2e} < {CHEEGER_TOL}"), diff < CHEEGER_TOL);
}

fn random_rationals(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|_| Rational::new(BigInt::from(rng.random_range(-60..=60)), BigInt::from(rng.random_range(1..=12))))
        .collect()
}

fn spectral(l: &mut Line) {
    let mut values = Vec::new();
    for r in [3, 5, 7] {
        let (g, s) = tree_ball_support(4, r);
        match dirichlet_mu0(&g, &s) {
            Ok(v) => values.push(v.mu0),
            Err(e) => {
                l.check(format!("radius {r}: {e}"), false);
                return;
            }
        }
    }
    let shown: Vec<String> = values.iter().map(|v| format!("{v:.5}")).collect();
    l.check(format!("mu0(3,5,7) = {} decreasing", shown.join(", ")), values.windows(2).all(|w| w[1] < w[0]));
    l.check(
        format!("all in [{SANDWICH_LOW}, {SANDWICH_HIGH}]"),
        values.iter().all(|&v| (SANDWICH_LOW..=SANDWICH_HIGH).contains(&v)),
    );
    let bottom = regular_tree_spectral_bottom(4);
    let gap = (values[2] - bottom).abs();
    l.known(format!("|mu0(7) - (4 - 2√3)| = {gap:.4} < {SPECTRAL_TOL}"), gap < SPECTRAL_TOL);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut exact = true;
    for _ in 0..300 {
        let n = rng.random_range(1..=16);
        let mut g = SimpleGraph::new(n);
        for i in 0..n {
            for j in i + 1..n {
                if rng.random_bool(0.35) {
                    g.add_edge(i, j);
                }
            }
        }
        let a = random_rationals(&mut rng, n);
        let b = random_rationals(&mut rng, n);
        let la = laplacian_apply_exact(&g, &a).unwrap();
        let lb = laplacian_apply_exact(&g, &b).unwrap();
        exact &= inner_exact(&la, &b) == inner_exact(&a, &lb);
        exact &= inner_exact(&lb, &b) == quadratic_form_exact(&g, &b).unwrap();
    }
    l.check("self-adjointness and q(b) identity exact on 300 random graphs", exact);
}

fn equivariance(l: &mut Line) {
    let s = parse_surface("L8").unwrap();
    let r = suites::equivariance_suite(&s, SEED, EQUIV_PAIRS, EQUIV_WORDS, 20, 500);
    l.check(
        format!("{} (point, generator) pairs and {} words, {} failures", r.pairs, r.words, r.failures.len()),
        r.passed(),
    );
}

fn bracket(l: &mut Line) {
    let s = parse_surface("L8").unwrap();
    let t = Instant::now();
    match suites::orbit_bracket(&s, 1, 50_000_000) {
        Ok(b) => {
            let r = suites::BracketReport::from(&b);
            l.check(format!("lower = C(1) = {}", r.lower), r.lower == 1);
            l.check(
                format!(
                    "report: {} points, {} H-components ({} singletons on saddle connections), {} off saddle connections",
                    r.points, r.upper, r.singleton_classes, r.upper_off_saddle_connections
                ),
                r.consistent_with_modn,
            );
            l.check(format!("runtime {:.1}s < 1800s", t.elapsed().as_secs_f64()), t.elapsed() < BRACKET_TIME);
        }
        Err(e) => l.check(format!("bracket: {e}"), false),
    }
}

fn main() -> ExitCode {
    let lines = [
        timed(Line::new(1, "table of C(N)"), table_cn),
        timed(Line::new(2, "reduction soundness"), reduction),
        timed(Line::new(3, "lemma property suites"), lemmas),
        timed(Line::new(4, "G'' structure"), g2_structure),
        timed(Line::new(5, "Cheeger values"), cheeger),
        timed(Line::new(6, "spectral sandwich"), spectral),
        timed(Line::new(7, "projection equivariance"), equivariance),
        timed(Line::new(8, "orbit bracket N = 1"), bracket),
    ];
    let passed = lines.iter().filter(|l| l.passed()).count();
    let unexpected: Vec<u32> = lines.iter().filter(|l| l.unexpected()).map(|l| l.id).collect();
    println!("acceptance: {passed}/{} criteria pass; unexpected failures: {unexpected:?}", lines.len());
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
