//! Seeded property suites run in parallel over sample indices.
//!
//! Each suite draws sample `i` from [`rng_for`]`(seed, i)` and collects the
//! per-sample results in index order, so reports are identical for every
//! thread count.

use num_traits::ToPrimitive;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use veech_core::lemmas::{
    above_i64, ceil_i64, check_growth_under_a, check_growth_under_b, check_sign_a, check_sign_b,
    check_three_of_four, point_thresholds, Lemma, LemmaError,
};
use veech_core::modn::{project, ModNAction};
use veech_core::reduce::{self, in_s, reduce, OrbitBracket, ReduceError};
use veech_core::sample::{sample_point, PointClass};
use veech_core::schreier::{build_g2, classify_component, ExploreError, ShapeKind};
use veech_core::{Gen, GeneratorWord, Letter, Surface, SurfacePoint};

use crate::sampling::{picker, rng_for};

/// One failed check, in a form that can be replayed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub sample: u64,
    pub check: String,
    pub point: String,
    pub detail: String,
}

fn seed_for(seed: u64, surface: &Surface) -> u64 {
    let spin = surface.spin().as_i8() as i64 as u64;
    seed ^ ((surface.discriminant() as u64) << 32) ^ (spin << 60)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaCount {
    pub lemma: String,
    pub checked: u64,
    pub violations: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub surface: String,
    pub seed: u64,
    pub samples: u64,
    pub counts: Vec<LemmaCount>,
    pub failures: Vec<Failure>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn checked(&self, lemma: Lemma) -> u64 {
        self.counts.iter().find(|c| c.lemma == lemma.to_string()).map_or(0, |c| c.checked)
    }
}

const LEMMAS: [Lemma; 5] = [
    Lemma::GrowthUnderB,
    Lemma::GrowthUnderA,
    Lemma::SignA,
    Lemma::SignB,
    Lemma::ThreeOfFour,
];

/// Draws `N ∈ 1..=n_max`, one point of each periodicity class with
/// irrational numerators in `[-bound, bound]`, and exponents at or just
/// beyond the thresholds (offsets up to 30). Each sample checks every
/// lemma once; the sign lemmas are checked on two points.
pub fn lemma_suite(surface: &Surface, seed: u64, samples: u64, n_max: i64, bound: i64) -> LemmaReport {
    let base = seed_for(seed, surface);
    let per_sample: Vec<Vec<(Lemma, Result<(), LemmaError>)>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(base, i);
            let n = rng.random_range(1..=n_max);
            let j = rng.random_range(0..30);
            let sign = if rng.random_bool(0.5) { 1 } else { -1 };
            let dk = rng.random_range(0..30);
            let dl = rng.random_range(0..30);
            let mut pick = picker(&mut rng);
            let a = sample_point(surface, PointClass::APeriodicOnly, n, bound, &mut pick).expect("A-periodic sample");
            let b = sample_point(surface, PointClass::BPeriodicOnly, n, bound, &mut pick).expect("B-periodic sample");
            let g = sample_point(surface, PointClass::Aperiodic, n, bound, &mut pick).expect("aperiodic sample");
            let (ta, tb, tg) = (point_thresholds(&a), point_thresholds(&b), point_thresholds(&g));
            vec![
                (Lemma::GrowthUnderB, check_growth_under_b(&a, sign * (ceil_i64(&ta.l0) + j))),
                (Lemma::GrowthUnderA, check_growth_under_a(&b, sign * (ceil_i64(&tb.k0) + j))),
                (Lemma::SignA, check_sign_a(&g, above_i64(&tg.k0) + j)),
                (Lemma::SignA, check_sign_a(&b, above_i64(&tb.k0) + j)),
                (Lemma::SignB, check_sign_b(&g, above_i64(&tg.l0) + j)),
                (Lemma::SignB, check_sign_b(&a, above_i64(&ta.l0) + j)),
                (
                    Lemma::ThreeOfFour,
                    check_three_of_four(&g, above_i64(&tg.k1) + dk, above_i64(&tg.l1) + dl),
                ),
            ]
        })
        .collect();
    let mut counts: Vec<LemmaCount> = LEMMAS
        .iter()
        .map(|l| LemmaCount { lemma: l.to_string(), checked: 0, violations: 0 })
        .collect();
    let mut failures = Vec::new();
    for (i, results) in per_sample.into_iter().enumerate() {
        for (lemma, r) in results {
            let c = counts.iter_mut().find(|c| c.lemma == lemma.to_string()).expect("known lemma");
            c.checked += 1;
            if let Err(e) = r {
                c.violations += 1;
                let point = match &e {
                    LemmaError::Precondition { point, .. } | LemmaError::Violation { point, .. } => point.to_string(),
                };
                failures.push(Failure { sample: i as u64, check: lemma.to_string(), point, detail: e.to_string() });
            }
        }
    }
    LemmaReport { surface: surface.name(), seed, samples, counts, failures }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReduceReport {
    pub seed: u64,
    pub samples: u64,
    pub reduced: u64,
    pub max_steps: u64,
    pub total_steps: u64,
    pub max_word_length: usize,
    pub failures: Vec<Failure>,
}

impl ReduceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.reduced == self.samples
    }
}

/// Generic points plus the two single-periodic classes, `N ∈ 1..=n_max`,
/// irrational numerators in `[-bound, bound]`. Checks membership in `S`,
/// exact replay of the word, invariance of `N`, and that the measure drops
/// within every two iterations.
pub fn reduce_suite(surface: &Surface, seed: u64, samples: u64, n_max: i64, bound: i64) -> ReduceReport {
    let classes = [
        PointClass::Generic,
        PointClass::Generic,
        PointClass::APeriodicOnly,
        PointClass::BPeriodicOnly,
    ];
    let rows: Vec<Result<(u64, usize), Failure>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, i);
            let n = rng.random_range(1..=n_max);
            // the periodic classes in the second cylinder need N ≥ 2
            let class = if n == 1 { PointClass::Generic } else { classes[(i % 4) as usize] };
            let mut pick = picker(&mut rng);
            let p = sample_point(surface, class, n, bound, &mut pick).expect("sample exists");
            let fail = |check: &str, detail: String| Failure {
                sample: i,
                check: check.into(),
                point: p.key().to_string(),
                detail,
            };
            let r = reduce(&p).map_err(|e| fail("terminates", e.to_string()))?;
            if !in_s(&r.output).unwrap_or(false) {
                return Err(fail("output-in-S", r.output.key().to_string()));
            }
            if p.apply_word(&r.word) != r.output {
                return Err(fail("replay", r.word.to_string()));
            }
            if r.output.n_value() != p.n_value() {
                return Err(fail("N-invariant", r.output.key().to_string()));
            }
            let m = &r.measure;
            for t in 0..m.len().saturating_sub(2) {
                if !(m[t + 1] < m[t] || m[t + 2] < m[t]) {
                    return Err(fail("progress", format!("iteration {t}")));
                }
            }
            Ok((r.steps, r.word.len()))
        })
        .collect();
    let mut rep = ReduceReport {
        seed,
        samples,
        reduced: 0,
        max_steps: 0,
        total_steps: 0,
        max_word_length: 0,
        failures: Vec::new(),
    };
    for row in rows {
        match row {
            Ok((steps, len)) => {
                rep.reduced += 1;
                rep.total_steps += steps;
                rep.max_steps = rep.max_steps.max(steps);
                rep.max_word_length = rep.max_word_length.max(len);
            }
            Err(f) => rep.failures.push(f),
        }
    }
    rep
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassifyReport {
    pub surface: String,
    pub seed: u64,
    pub radius: usize,
    pub samples: u64,
    pub tree4: u64,
    pub root_looped4: u64,
    pub other: u64,
    pub tie_edges: u64,
    pub resource_caps: u64,
    pub failures: Vec<Failure>,
}

impl ClassifyReport {
    pub fn passed(&self) -> bool {
        self.other == 0 && self.resource_caps == 0 && self.failures.is_empty()
    }
}

/// Random generic start points with `N` drawn from `ns`; the radius-`radius`
/// ball of `G''` around the re-rooted start is classified.
pub fn classify_suite(
    surface: &Surface,
    seed: u64,
    samples: u64,
    ns: &[i64],
    bound: i64,
    radius: usize,
    cap: usize,
) -> ClassifyReport {
    let base = seed_for(seed, surface);
    let rows: Vec<Result<(ShapeKind, bool), Failure>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(base, i);
            let n = ns[rng.random_range(0..ns.len())];
            let mut pick = picker(&mut rng);
            let p = sample_point(surface, PointClass::Generic, n, bound, &mut pick).expect("sample exists");
            let fail = |check: &str, detail: String| Failure {
                sample: i,
                check: check.into(),
                point: p.key().to_string(),
                detail,
            };
            match build_g2(&p, radius, cap) {
                Ok((ball, _)) => {
                    let shape = classify_component(&ball);
                    if shape.kind == ShapeKind::Other {
                        Err(fail("shape", shape.summary()))
                    } else {
                        Ok((shape.kind, shape.tie_edge.is_some()))
                    }
                }
                Err(ExploreError::ResourceCap { cap, .. }) => Err(fail("resource-cap", format!("cap {cap}"))),
                Err(e) => Err(fail("explore", e.to_string())),
            }
        })
        .collect();
    let mut rep = ClassifyReport {
        surface: surface.name(),
        seed,
        radius,
        samples,
        tree4: 0,
        root_looped4: 0,
        other: 0,
        tie_edges: 0,
        resource_caps: 0,
        failures: Vec::new(),
    };
    for row in rows {
        match row {
            Ok((kind, tie)) => {
                match kind {
                    ShapeKind::Tree4 => rep.tree4 += 1,
                    ShapeKind::RootLooped4 => rep.root_looped4 += 1,
                    ShapeKind::Other => rep.other += 1,
                }
                rep.tie_edges += tie as u64;
            }
            Err(f) => {
                match f.check.as_str() {
                    "shape" => rep.other += 1,
                    "resource-cap" => rep.resource_caps += 1,
                    _ => {}
                }
                rep.failures.push(f);
            }
        }
    }
    rep
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivarianceReport {
    pub seed: u64,
    pub pairs: u64,
    pub words: u64,
    pub failures: Vec<Failure>,
}

impl EquivarianceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn random_word(rng: &mut impl Rng, max_len: usize) -> GeneratorWord {
    let len = rng.random_range(0..=max_len);
    GeneratorWord::from_letters((0..len).map(|_| {
        let g = if rng.random_bool(0.5) { Gen::A } else { Gen::B };
        let mut e = rng.random_range(-5i64..=5);
        if e == 0 {
            e = 1;
        }
        Letter::new(g, e)
    }))
}

/// `pairs` (point, generator power) checks of `project(g∘P) = g∘project(P)`
/// and `words` random words of length at most 20 checked to preserve `N`.
pub fn equivariance_suite(surface: &Surface, seed: u64, pairs: u64, words: u64, n_max: i64, bound: i64) -> EquivarianceReport {
    let action = ModNAction::for_surface(surface).expect("integral shears");
    let base = seed_for(seed, surface);
    let pair_rows: Vec<Option<Failure>> = (0..pairs)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(base, i);
            let n = rng.random_range(1..=n_max);
            let g = if rng.random_bool(0.5) { Gen::A } else { Gen::B };
            let e = rng.random_range(-4i64..=4);
            let mut pick = picker(&mut rng);
            let p = sample_point(surface, PointClass::Generic, n, bound, &mut pick).expect("sample exists");
            let lhs = project(&p.apply(Letter::new(g, e)));
            let rhs = action.act(&project(&p), g, e);
            (lhs != rhs).then(|| Failure {
                sample: i,
                check: "equivariance".into(),
                point: p.key().to_string(),
                detail: format!("{g}^{e}: {lhs} vs {rhs}"),
            })
        })
        .collect();
    let word_rows: Vec<Option<Failure>> = (0..words)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(base ^ 0x5752_4453, i);
            let n = rng.random_range(1..=n_max);
            let w = random_word(&mut rng, 20);
            let mut pick = picker(&mut rng);
            let p = sample_point(surface, PointClass::Generic, n, bound, &mut pick).expect("sample exists");
            let q = p.apply_word(&w);
            (q.n_value() != p.n_value()).then(|| Failure {
                sample: i,
                check: "word-preserves-N".into(),
                point: p.key().to_string(),
                detail: w.to_string(),
            })
        })
        .collect();
    EquivarianceReport {
        seed,
        pairs,
        words,
        failures: pair_rows.into_iter().chain(word_rows).flatten().collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BracketReport {
    pub n: u32,
    pub lower: usize,
    pub upper: usize,
    pub upper_excluding_doubly_periodic: usize,
    pub upper_off_saddle_connections: usize,
    pub points: usize,
    pub largest_class: usize,
    pub singleton_classes: usize,
    pub consistent_with_modn: bool,
    pub max_reduction_steps: u64,
}

impl From<&OrbitBracket> for BracketReport {
    fn from(b: &OrbitBracket) -> Self {
        BracketReport {
            n: b.n,
            lower: b.lower,
            upper: b.upper,
            upper_excluding_doubly_periodic: b.upper_excluding_doubly_periodic,
            upper_off_saddle_connections: b.upper_off_saddle_connections,
            points: b.points,
            largest_class: b.class_sizes.iter().copied().max().unwrap_or(0),
            singleton_classes: b.class_sizes.iter().filter(|&&s| s == 1).count(),
            consistent_with_modn: b.consistent_with_modn,
            max_reduction_steps: b.max_steps,
        }
    }
}

/// [`reduce::orbit_class_bracket`] with the reductions done in parallel.
pub fn orbit_bracket(surface: &Surface, n: u32, cap: u64) -> Result<OrbitBracket, ReduceError> {
    let points = reduce::enumerate_s(surface, n, cap)?;
    let rows: Vec<Result<(Vec<SurfacePoint>, u64), ReduceError>> = points
        .par_iter()
        .map(|q| {
            let mut row = Vec::with_capacity(4);
            let mut steps = 0;
            for l in veech_core::schreier::unit_generators() {
                let r = reduce(&q.apply(l))?;
                steps = steps.max(r.steps);
                row.push(r.output);
            }
            Ok((row, steps))
        })
        .collect();
    let mut nbrs = Vec::with_capacity(points.len());
    let mut max_steps = 0;
    for row in rows {
        let (row, steps) = row?;
        max_steps = max_steps.max(steps);
        nbrs.push(row);
    }
    reduce::orbit_class_bracket_with(n, &points, &nbrs, max_steps)
}

/// `N` of a point as `i64`.
pub fn n_of(p: &SurfacePoint) -> i64 {
    p.n_value().to_i64().expect("N fits in i64")
}
