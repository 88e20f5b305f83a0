//! The moduli space `M₂` of bundles with splitting `(2, −2)`, `k = 1`.
//!
//! Canonical forms are `p = (p₁₀ + p₁₁z)u + p₂₁zu²`. The classification is
//! oracle driven: a seeded sample of window vectors is clustered with
//! [`are_isomorphic`], orbit ranks separate the special classes from the
//! generic ones, and the projective coordinate of the generic family is
//! found by testing which ratio of two window coordinates is constant on
//! classes and separates them.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::GaussianRational;
use crate::canonical::{param_space_dim, CanonicalForm};
use crate::iso_moduli::iso::{are_isomorphic, IsoBounds, IsoError, IsoVerdict};
use crate::iso_moduli::orbit::orbit_rank_at;
use crate::sampling::random_nonzero;
use crate::transition::{SplittingType, TransitionMatrix};

pub const J2_SPLIT: SplittingType = SplittingType { j1: 2, j2: -2 };
pub const J2_WINDOW_LEN: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ProjectivePoint {
    Finite(GaussianRational),
    Infinity,
}

impl ProjectivePoint {
    /// `[a : b]` as `b/a`; `None` for `[0 : 0]`.
    pub fn from_pair(a: &GaussianRational, b: &GaussianRational) -> Option<Self> {
        match (a.is_zero(), b.is_zero()) {
            (true, true) => None,
            (true, false) => Some(ProjectivePoint::Infinity),
            (false, _) => Some(ProjectivePoint::Finite(b / a)),
        }
    }

    /// A pair `(a, b)` with this ratio.
    pub fn to_pair(&self) -> (GaussianRational, GaussianRational) {
        match self {
            ProjectivePoint::Finite(t) => (GaussianRational::one(), t.clone()),
            ProjectivePoint::Infinity => (GaussianRational::zero(), GaussianRational::one()),
        }
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectivePoint::Finite(t) => write!(f, "{t}"),
            ProjectivePoint::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ModuliJ2Point {
    Generic(ProjectivePoint),
    Q1,
    Q2,
}

impl fmt::Display for ModuliJ2Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuliJ2Point::Generic(t) => write!(f, "generic {t}"),
            ModuliJ2Point::Q1 => write!(f, "q1"),
            ModuliJ2Point::Q2 => write!(f, "q2"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModuliError {
    #[error("discovery incomplete: {0}")]
    DiscoveryIncomplete(String),
    #[error(transparent)]
    Iso(#[from] IsoError),
}

/// Representatives fixing the classification, plus the discovered coordinate:
/// generic classes are labelled by `w[b] / w[a]` for `coordinate = (a, b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReferenceFamily {
    pub coordinate: (usize, usize),
    pub q1: Vec<GaussianRational>,
    pub q2: Vec<GaussianRational>,
    pub generic: Vec<(ProjectivePoint, Vec<GaussianRational>)>,
    pub samples: usize,
    pub seed: u64,
}

impl ReferenceFamily {
    pub fn ratio(&self, w: &[GaussianRational]) -> Option<ProjectivePoint> {
        let (a, b) = self.coordinate;
        ProjectivePoint::from_pair(&w[a], &w[b])
    }

    /// A representative of the generic class with coordinate `t`.
    pub fn generic_representative(&self, t: &ProjectivePoint) -> Vec<GaussianRational> {
        if let Some((_, w)) = self.generic.iter().find(|(s, _)| s == t) {
            return w.clone();
        }
        let mut w = vec![GaussianRational::zero(); J2_WINDOW_LEN];
        let (x, y) = t.to_pair();
        w[self.coordinate.0] = x;
        w[self.coordinate.1] = y;
        w
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiscoveryConfig {
    pub samples: usize,
    pub seed: u64,
    pub bounds: IsoBounds,
}

impl Default for DiscoveryConfig {
    fn default() -> Self {
        DiscoveryConfig { samples: 200, seed: 0, bounds: IsoBounds::direct() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassRecord {
    pub representative: Vec<GaussianRational>,
    pub members: Vec<usize>,
    pub orbit_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscoveryReport {
    pub family: ReferenceFamily,
    pub classes: Vec<ClassRecord>,
    /// Sample pairs built as scalar multiples of each other, and how many of
    /// them landed in the same class.
    pub scaled_pairs: usize,
    pub scaled_collisions: usize,
    /// Sample pairs drawn from different ratio families, and how many of them
    /// landed in the same class.
    pub independent_pairs: usize,
    pub independent_collisions: usize,
    pub oracle_calls: usize,
}

/// Where a sample came from; used only for the collision statistics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Origin {
    Zero,
    PureTop,
    Pool(usize),
}

fn transition(w: &[GaussianRational]) -> TransitionMatrix {
    CanonicalForm::from_window_vector(1, J2_SPLIT, w).expect("window vector").transition()
}

fn scale(w: &[GaussianRational], c: &GaussianRational) -> Vec<GaussianRational> {
    w.iter().map(|x| x * c).collect()
}

struct Sample {
    w: Vec<GaussianRational>,
    origin: Origin,
    /// Index of the sample this one is a multiple of.
    copy_of: Option<usize>,
}

/// Deterministic mixture: a pool of ratios `[p₁₀ : p₁₁]` with random scale
/// and `p₂₁`, vectors with `p₁₀ = p₁₁ = 0`, zero vectors, and scaled copies.
fn draw_samples(cfg: &DiscoveryConfig) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut pool: Vec<(GaussianRational, GaussianRational)> = Vec::new();
    let mut seen = BTreeSet::new();
    while pool.len() < 12 {
        let a = if rng.gen_bool(0.15) { GaussianRational::zero() } else { random_nonzero(&mut rng) };
        let b = if rng.gen_bool(0.15) { GaussianRational::zero() } else { random_nonzero(&mut rng) };
        if let Some(t) = ProjectivePoint::from_pair(&a, &b) {
            if seen.insert(t.to_string()) {
                pool.push((a, b));
            }
        }
    }
    let mut out: Vec<Sample> = Vec::with_capacity(cfg.samples);
    for s in 0..cfg.samples {
        let sample = match s % 10 {
            0 => Sample { w: vec![GaussianRational::zero(); 3], origin: Origin::Zero, copy_of: None },
            1 => Sample {
                w: vec![GaussianRational::zero(), GaussianRational::zero(), random_nonzero(&mut rng)],
                origin: Origin::PureTop,
                copy_of: None,
            },
            9 if s > 0 => {
                let src = s - 1;
                let c = random_nonzero(&mut rng);
                Sample { w: scale(&out[src].w, &c), origin: out[src].origin, copy_of: Some(src) }
            }
            _ => {
                let idx = rng.gen_range(0..pool.len());
                let (a, b) = &pool[idx];
                let lambda = random_nonzero(&mut rng);
                let top = if rng.gen_bool(0.3) { GaussianRational::zero() } else { random_nonzero(&mut rng) };
                Sample { w: vec![a * &lambda, b * &lambda, top], origin: Origin::Pool(idx), copy_of: None }
            }
        };
        out.push(sample);
    }
    out
}

fn verdict(
    a: &TransitionMatrix,
    b: &TransitionMatrix,
    bounds: IsoBounds,
) -> Result<bool, ModuliError> {
    match are_isomorphic(a, b, bounds)? {
        IsoVerdict::Isomorphic(_) => Ok(true),
        IsoVerdict::Distinct { .. } => Ok(false),
        IsoVerdict::Inconclusive => {
            Err(ModuliError::DiscoveryIncomplete("oracle inconclusive at configured bounds".into()))
        }
    }
}

/// Clusters seeded samples into isomorphism classes and certifies the
/// structure: one generic stratum of codimension one, and exactly two
/// special classes.
pub fn discover_j2(cfg: &DiscoveryConfig) -> Result<DiscoveryReport, ModuliError> {
    let samples = draw_samples(cfg);
    let window_len = param_space_dim(J2_SPLIT.j1, J2_SPLIT.j2, 1);
    let mut classes: Vec<ClassRecord> = Vec::new();
    let mut class_of = Vec::with_capacity(samples.len());
    let mut oracle_calls = 0;

    for (s, sample) in samples.iter().enumerate() {
        let t = transition(&sample.w);
        let rank = orbit_rank_at(&CanonicalForm::from_window_vector(1, J2_SPLIT, &sample.w).expect("window"));
        let mut found = None;
        for (c, class) in classes.iter().enumerate() {
            if class.orbit_rank != rank {
                continue;
            }
            oracle_calls += 1;
            if verdict(&t, &transition(&class.representative), cfg.bounds)? {
                found = Some(c);
                break;
            }
        }
        let c = match found {
            Some(c) => c,
            None => {
                classes.push(ClassRecord {
                    representative: sample.w.clone(),
                    members: Vec::new(),
                    orbit_rank: rank,
                });
                classes.len() - 1
            }
        };
        classes[c].members.push(s);
        class_of.push(c);
    }

    let mut scaled_pairs = 0;
    let mut scaled_collisions = 0;
    for (s, sample) in samples.iter().enumerate() {
        if let Some(src) = sample.copy_of {
            scaled_pairs += 1;
            if class_of[s] == class_of[src] {
                scaled_collisions += 1;
            }
        }
    }
    let mut independent_pairs = 0;
    let mut independent_collisions = 0;
    for x in 0..samples.len() {
        for y in (x + 1)..samples.len() {
            if let (Origin::Pool(a), Origin::Pool(b)) = (samples[x].origin, samples[y].origin) {
                if a != b {
                    independent_pairs += 1;
                    if class_of[x] == class_of[y] {
                        independent_collisions += 1;
                    }
                }
            }
        }
    }

    let max_rank = classes.iter().map(|c| c.orbit_rank).max().unwrap_or(0);
    if window_len - max_rank != 1 {
        return Err(ModuliError::DiscoveryIncomplete(format!(
            "generic orbits have codimension {}, expected 1",
            window_len - max_rank
        )));
    }
    let mut special: Vec<&ClassRecord> = classes.iter().filter(|c| c.orbit_rank < max_rank).collect();
    if special.len() != 2 {
        return Err(ModuliError::DiscoveryIncomplete(format!(
            "found {} special classes, expected 2",
            special.len()
        )));
    }
    special.sort_by_key(|c| c.orbit_rank);
    if special[0].orbit_rank == special[1].orbit_rank {
        return Err(ModuliError::DiscoveryIncomplete("special classes share an orbit rank".into()));
    }
    let generic: Vec<&ClassRecord> = classes.iter().filter(|c| c.orbit_rank == max_rank).collect();
    if generic.len() < 2 {
        return Err(ModuliError::DiscoveryIncomplete("fewer than two generic classes sampled".into()));
    }

    let coordinate = find_coordinate(&samples, &generic, window_len).ok_or_else(|| {
        ModuliError::DiscoveryIncomplete("no coordinate ratio separates the generic classes".into())
    })?;
    let (a, b) = coordinate;
    let generic_reps = generic
        .iter()
        .map(|c| {
            let w = c.representative.clone();
            (ProjectivePoint::from_pair(&w[a], &w[b]).expect("checked"), w)
        })
        .collect();
    let family = ReferenceFamily {
        coordinate,
        // the split class lies in the closure of every orbit, so it is the
        // point all of whose neighborhoods contain the other special point
        q2: special[0].representative.clone(),
        q1: special[1].representative.clone(),
        generic: generic_reps,
        samples: cfg.samples,
        seed: cfg.seed,
    };
    Ok(DiscoveryReport {
        family,
        classes,
        scaled_pairs,
        scaled_collisions,
        independent_pairs,
        independent_collisions,
        oracle_calls,
    })
}

/// First pair `(a, b)` whose ratio is defined and constant on every generic
/// class and takes different values on different classes.
fn find_coordinate(
    samples: &[Sample],
    generic: &[&ClassRecord],
    window_len: usize,
) -> Option<(usize, usize)> {
    'pairs: for a in 0..window_len {
        for b in (a + 1)..window_len {
            let mut values = BTreeSet::new();
            for class in generic {
                let mut value = None;
                for &m in &class.members {
                    let w = &samples[m].w;
                    let Some(t) = ProjectivePoint::from_pair(&w[a], &w[b]) else { continue 'pairs };
                    match &value {
                        None => value = Some(t),
                        Some(v) if *v == t => {}
                        Some(_) => continue 'pairs,
                    }
                }
                let Some(v) = value else { continue 'pairs };
                if !values.insert(v.to_string()) {
                    continue 'pairs;
                }
            }
            return Some((a, b));
        }
    }
    None
}

/// Classifies `(p₁₀, p₁₁, p₂₁)` against a reference family; every answer is
/// confirmed by the oracle.
pub fn classify_j2(
    family: &ReferenceFamily,
    w: [GaussianRational; 3],
    bounds: IsoBounds,
) -> Result<ModuliJ2Point, ModuliError> {
    let t = transition(&w);
    if verdict(&t, &transition(&family.q2), bounds)? {
        return Ok(ModuliJ2Point::Q2);
    }
    if verdict(&t, &transition(&family.q1), bounds)? {
        return Ok(ModuliJ2Point::Q1);
    }
    let ratio = family.ratio(&w).ok_or_else(|| {
        ModuliError::DiscoveryIncomplete("input has no defined coordinate but is not special".into())
    })?;
    let rep = family.generic_representative(&ratio);
    if verdict(&t, &transition(&rep), bounds)? {
        Ok(ModuliJ2Point::Generic(ratio))
    } else {
        Err(ModuliError::DiscoveryIncomplete(format!(
            "input is not equivalent to the reference point {ratio}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    fn family() -> ReferenceFamily {
        discover_j2(&DiscoveryConfig { samples: 60, ..DiscoveryConfig::default() }).unwrap().family
    }

    #[test]
    fn projective_points() {
        assert_eq!(ProjectivePoint::from_pair(&g(0), &g(0)), None);
        assert_eq!(ProjectivePoint::from_pair(&g(0), &g(3)), Some(ProjectivePoint::Infinity));
        assert_eq!(
            ProjectivePoint::from_pair(&g(2), &g(3)),
            Some(ProjectivePoint::Finite(GaussianRational::from_ratio(3, 2)))
        );
    }

    #[test]
    fn discovery_and_classification() {
        let fam = family();
        let b = IsoBounds::direct();
        assert_eq!(classify_j2(&fam, [g(0), g(0), g(0)], b).unwrap(), ModuliJ2Point::Q2);
        assert_eq!(classify_j2(&fam, [g(0), g(0), g(4)], b).unwrap(), ModuliJ2Point::Q1);
        let x = classify_j2(&fam, [g(1), g(1), g(1)], b).unwrap();
        assert!(matches!(x, ModuliJ2Point::Generic(_)));
        assert_eq!(classify_j2(&fam, [g(5), g(5), g(5)], b).unwrap(), x);
        assert_ne!(classify_j2(&fam, [g(1), g(2), g(1)], b).unwrap(), x);
    }
}
