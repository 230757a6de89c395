//! Runs the four μ computations side by side together with the structural
//! checks and collects everything in a [`ValidationReport`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::charpoly::{
    descending_flag_counts, descending_flags, reduced_char_poly, FlatLattice, ReducedCharPoly,
};
use crate::error::{Error, Result};
use crate::fan::{bergman_weight, check_balancing, FlagCone};
use crate::intersect::{
    alpha, divisor_cup, mu_via_displacement, mu_via_divisors_checked, with_generic_vector,
    CertifiedPairing, DisplacementVector,
};
use crate::matroid::Matroid;
use crate::poly::is_log_concave;

/// Largest `n` (ground set `{0..n}`) for which the displacement method runs.
pub const DISPLACEMENT_MAX_N: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Mobius,
    Flags,
    Displacement,
    Divisor,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Mobius,
        Method::Flags,
        Method::Displacement,
        Method::Divisor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Mobius => "mobius",
            Method::Flags => "flags",
            Method::Displacement => "displacement",
            Method::Divisor => "divisor",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Schema(format!("unknown method {s:?}")))
    }
}

#[derive(Clone, Debug)]
pub struct CheckOptions {
    /// Seed for the perturbations of a degenerate displacement vector.
    pub seed: u64,
    pub skip_displacement: bool,
    pub max_retries: usize,
    /// Extra random certified vectors the displacement degrees are
    /// recomputed with.
    pub perturbations: usize,
    pub timings: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            skip_displacement: false,
            max_retries: 16,
            perturbations: 0,
            timings: false,
        }
    }
}

/// `μ^0..μ^r` by Möbius summation.
pub fn mu_mobius(m: &Matroid) -> Result<Vec<BigInt>> {
    Ok(reduced_char_poly(m)?.mu)
}

/// `|S_0|..|S_r|`.
pub fn mu_flags(m: &Matroid) -> Result<Vec<BigInt>> {
    if !m.loops().is_empty() {
        return Err(Error::HasLoops);
    }
    descending_flag_counts(m)
}

/// One certified displacement pairing per `k = 0..=r`, starting from `v`
/// and perturbing it with `rng` whenever it is degenerate.
pub fn mu_displacement(
    m: &Matroid,
    v: &DisplacementVector,
    rng: &mut ChaCha8Rng,
    max_retries: usize,
) -> Result<Vec<CertifiedPairing>> {
    let r = rank_minus_one(m)?;
    (0..=r)
        .map(|k| with_generic_vector(v, rng, max_retries, |v| mu_via_displacement(m, k, v)))
        .collect()
}

/// [`mu_displacement`] from `(1, 2, ..., n)` with a seeded generator.
pub fn mu_displacement_seeded(
    m: &Matroid,
    seed: u64,
    max_retries: usize,
) -> Result<Vec<CertifiedPairing>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    mu_displacement(m, &DisplacementVector::increasing(m.n()), &mut rng, max_retries)
}

/// `μ^k` by divisor cups for every `k`, with the number of cup outputs that
/// failed the balancing check.
pub fn mu_divisor(m: &Matroid) -> Result<(Vec<BigInt>, usize)> {
    let r = rank_minus_one(m)?;
    let mut unbalanced = 0;
    let mut mu = Vec::with_capacity(r + 1);
    for k in 0..=r {
        let run = mu_via_divisors_checked(m, k, &mut |_| {})?;
        unbalanced += run.unbalanced_steps;
        mu.push(run.degree);
    }
    Ok((mu, unbalanced))
}

fn rank_minus_one(m: &Matroid) -> Result<usize> {
    m.full_rank()
        .checked_sub(1)
        .ok_or_else(|| Error::Dimension("rank-zero matroid".into()))
}

/// `α^{r-k} ∪ Δ_M = Δ_{Trunc_k(M)}` cone by cone for every `k < r`.
pub fn truncation_identity(m: &Matroid) -> Result<bool> {
    let r = rank_minus_one(m)?;
    let a = alpha(m.n())?;
    let mut w = bergman_weight(m)?;
    for k in (0..r).rev() {
        w = divisor_cup(&a, &w)?;
        if w != bergman_weight(&m.truncate(k)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Skipped,
    Failed,
}

#[derive(Clone, Debug, Serialize)]
pub struct MethodResult {
    pub method: Method,
    pub status: Status,
    #[serde(serialize_with = "ser_opt_big_vec", skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<BigInt>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip)]
    pub error: Option<Error>,
}

impl MethodResult {
    fn from_result(method: Method, r: Result<Vec<BigInt>>) -> Self {
        match r {
            Ok(mu) => Self {
                method,
                status: Status::Ok,
                mu: Some(mu),
                detail: None,
                error: None,
            },
            Err(e) => Self {
                method,
                status: Status::Failed,
                mu: None,
                detail: Some(e.to_string()),
                error: Some(e),
            },
        }
    }

    fn skipped(method: Method, reason: String) -> Self {
        Self {
            method,
            status: Status::Skipped,
            mu: None,
            detail: Some(reason),
            error: None,
        }
    }
}

/// What was removed to make the input simple. Labels refer to the input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplificationReport {
    pub loops: Vec<usize>,
    pub parallel_classes: Vec<Vec<usize>>,
    /// `mapping[old]` is the new label, or `None` when dropped.
    pub mapping: Vec<Option<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogConcavity {
    /// The `μ^k`.
    pub mu: bool,
    /// The unsigned coefficients of `χ_M`.
    pub unreduced: bool,
    /// The independent set counts.
    pub f_vector: bool,
}

impl LogConcavity {
    pub fn holds(&self) -> bool {
        self.mu && self.unreduced && self.f_vector
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WelshMason {
    #[serde(serialize_with = "ser_big_vec")]
    pub f_vector: Vec<BigInt>,
    /// `μ^i` of the free coextension.
    #[serde(serialize_with = "ser_big_vec")]
    pub coextension_mu: Vec<BigInt>,
    pub holds: bool,
}

/// Shape of the displacement computation at the starting vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Structure {
    /// The certified vector used for each `k`.
    pub vectors: Vec<Vec<String>>,
    pub retries: Vec<usize>,
    /// Contributing pairs per `k`.
    pub pair_counts: Vec<usize>,
    /// Every contributing pair has lattice index one.
    pub unit_indices: bool,
    /// Pair counts equal `|S_k|`.
    pub counts_match_flags: bool,
    /// The `τ` cones are exactly the Cremona images of the flags in `S_k`.
    pub tau_are_flags: bool,
}

impl Structure {
    pub fn holds(&self) -> bool {
        self.unit_indices && self.counts_match_flags && self.tau_are_flags
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Perturbations {
    pub count: usize,
    /// Displacement degrees were the same for every extra vector.
    pub stable: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub name: String,
    pub size: usize,
    pub rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simplification: Option<SimplificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub char_poly: Option<ReducedCharPoly>,
    pub methods: Vec<MethodResult>,
    /// All computed μ-vectors are identical.
    pub agreement: bool,
    pub log_concave: Option<LogConcavity>,
    /// Flags of codimension-one cones where `Δ_M` fails to balance.
    pub balancing_violations: Vec<FlagCone>,
    /// Divisor cups whose output failed to balance.
    pub unbalanced_cups: usize,
    pub truncation_identity: Option<bool>,
    pub welsh_mason: Option<WelshMason>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure: Option<Structure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perturbations: Option<Perturbations>,
    /// Internal failures outside the four methods.
    pub errors: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
    pub passed: bool,
}

impl ValidationReport {
    pub fn method(&self, m: Method) -> Option<&MethodResult> {
        self.methods.iter().find(|r| r.method == m)
    }

    pub fn mu(&self, m: Method) -> Option<&[BigInt]> {
        self.method(m).and_then(|r| r.mu.as_deref())
    }

    /// 0 when everything passed, 3 when an invariant broke inside a
    /// computation, 1 for any other failed check.
    pub fn exit_code(&self) -> i32 {
        let breach = !self.errors.is_empty()
            || !self.balancing_violations.is_empty()
            || self.unbalanced_cups > 0
            || self.methods.iter().any(|r| r.status == Status::Failed);
        if breach {
            3
        } else if self.passed {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

/// Replaces `m` by its simplification if it has loops or parallel elements.
pub fn prepare(m: &Matroid) -> (Matroid, Option<SimplificationReport>) {
    let s = m.simplify();
    if !s.changed() {
        return (m.clone(), None);
    }
    let report = SimplificationReport {
        loops: s.loops.clone(),
        parallel_classes: s.parallel_classes.clone(),
        mapping: s.mapping.clone(),
    };
    (s.matroid, Some(report))
}

struct Clock {
    on: bool,
    laps: BTreeMap<String, f64>,
}

impl Clock {
    fn time<T>(&mut self, label: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if self.on {
            self.laps.insert(label.to_string(), start.elapsed().as_secs_f64());
        }
        out
    }
}

/// Runs every method and check on `input`, simplifying it first if needed.
pub fn check(name: &str, input: &Matroid, opts: &CheckOptions) -> ValidationReport {
    let mut clock = Clock {
        on: opts.timings,
        laps: BTreeMap::new(),
    };
    let (m, simplification) = prepare(input);
    let mut errors = Vec::new();
    let mut note = |what: &str, e: &Error| errors.push(format!("{what}: {e}"));

    let char_poly = clock.time("char_poly", || reduced_char_poly(&m));
    let char_poly = char_poly.map_err(|e| note("char_poly", &e)).ok();

    let mut methods = vec![
        MethodResult::from_result(Method::Mobius, clock.time("mobius", || mu_mobius(&m))),
        MethodResult::from_result(Method::Flags, clock.time("flags", || mu_flags(&m))),
    ];

    let mut structure = None;
    let mut perturbations = None;
    if opts.skip_displacement {
        methods.push(MethodResult::skipped(Method::Displacement, "skipped on request".into()));
    } else if m.n() > DISPLACEMENT_MAX_N {
        methods.push(MethodResult::skipped(
            Method::Displacement,
            format!("n = {} exceeds the limit {DISPLACEMENT_MAX_N}", m.n()),
        ));
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let v = DisplacementVector::increasing(m.n());
        let run = clock.time("displacement", || {
            mu_displacement(&m, &v, &mut rng, opts.max_retries)
        });
        let mu = run.as_ref().map(|ps| degrees(ps)).map_err(Clone::clone);
        if let Ok(ps) = &run {
            match structure_of(&m, ps) {
                Ok(s) => structure = Some(s),
                Err(e) => note("structure", &e),
            }
            if opts.perturbations > 0 {
                let want = degrees(ps);
                let stable = clock.time("perturbations", || {
                    (0..opts.perturbations).try_fold(true, |ok, _| {
                        let v = v.perturbed(&mut rng);
                        let got = mu_displacement(&m, &v, &mut rng, opts.max_retries)?;
                        Ok::<_, Error>(ok && degrees(&got) == want)
                    })
                });
                match stable {
                    Ok(stable) => {
                        perturbations = Some(Perturbations {
                            count: opts.perturbations,
                            stable,
                        })
                    }
                    Err(e) => note("perturbations", &e),
                }
            }
        }
        methods.push(MethodResult::from_result(Method::Displacement, mu));
    }

    let divisor = clock.time("divisor", || mu_divisor(&m));
    let unbalanced_cups = divisor.as_ref().map_or(0, |(_, u)| *u);
    methods.push(MethodResult::from_result(
        Method::Divisor,
        divisor.map(|(mu, _)| mu),
    ));

    let computed: Vec<&Vec<BigInt>> = methods.iter().filter_map(|r| r.mu.as_ref()).collect();
    let agreement = methods.iter().all(|r| r.status != Status::Failed)
        && !computed.is_empty()
        && computed.windows(2).all(|w| w[0] == w[1]);

    let balancing_violations = match clock.time("balancing", || bergman_weight(&m)) {
        Ok(w) => check_balancing(&w).into_iter().map(|v| v.tau).collect(),
        Err(e) => {
            note("balancing", &e);
            Vec::new()
        }
    };

    let truncation = clock.time("truncation", || truncation_identity(&m));
    let truncation_identity = truncation.map_err(|e| note("truncation", &e)).ok();

    let welsh = clock.time("welsh_mason", || welsh_mason(&m));
    let welsh_mason = welsh.map_err(|e| note("welsh_mason", &e)).ok();

    let log_concave = match (&char_poly, &welsh_mason) {
        (Some(cp), Some(wm)) => Some(LogConcavity {
            mu: is_log_concave(&cp.mu),
            unreduced: is_log_concave(&cp.char_poly.unsigned_coeffs()),
            f_vector: is_log_concave(&wm.f_vector),
        }),
        _ => None,
    };

    let passed = errors.is_empty()
        && agreement
        && log_concave.as_ref().is_some_and(LogConcavity::holds)
        && balancing_violations.is_empty()
        && unbalanced_cups == 0
        && truncation_identity == Some(true)
        && welsh_mason.as_ref().is_some_and(|w| w.holds)
        && structure.as_ref().is_none_or(Structure::holds)
        && perturbations.as_ref().is_none_or(|p| p.stable);

    ValidationReport {
        name: name.to_string(),
        size: m.size(),
        rank: m.full_rank(),
        simplification,
        char_poly,
        methods,
        agreement,
        log_concave,
        balancing_violations,
        unbalanced_cups,
        truncation_identity,
        welsh_mason,
        structure,
        perturbations,
        errors,
        timings: opts.timings.then_some(clock.laps),
        passed,
    }
}

/// Checks every entry in parallel; reports come back in input order. An
/// entry that fails to build gets no report but its error.
pub fn check_all(
    entries: &[crate::corpus::CorpusEntry],
    opts: &CheckOptions,
) -> Vec<Result<ValidationReport>> {
    entries
        .par_iter()
        .map(|e| Ok(check(e.name(), &e.build()?, opts)))
        .collect()
}

fn degrees(ps: &[CertifiedPairing]) -> Vec<BigInt> {
    ps.iter().map(|p| p.pairing.degree.clone()).collect()
}

fn structure_of(m: &Matroid, ps: &[CertifiedPairing]) -> Result<Structure> {
    let lattice = FlatLattice::new(m);
    let size = m.size();
    let mut counts_match_flags = true;
    let mut tau_are_flags = true;
    for (k, p) in ps.iter().enumerate() {
        let flags = descending_flags(&lattice, k);
        counts_match_flags &= flags.len() == p.pairing.terms.len();
        let mut want = flags
            .into_iter()
            .map(|f| FlagCone::new(f, size).map(|c| c.negated(size)))
            .collect::<Result<Vec<_>>>()?;
        want.sort();
        let mut got: Vec<FlagCone> = p.pairing.terms.iter().map(|t| t.tau.clone()).collect();
        got.sort();
        tau_are_flags &= got == want;
    }
    Ok(Structure {
        vectors: ps.iter().map(|p| p.vector.to_strings()).collect(),
        retries: ps.iter().map(|p| p.retries).collect(),
        pair_counts: ps.iter().map(|p| p.pairing.terms.len()).collect(),
        unit_indices: ps
            .iter()
            .flat_map(|p| &p.pairing.terms)
            .all(|t| t.index == BigInt::from(1)),
        counts_match_flags,
        tau_are_flags,
    })
}

/// `f_i(M)` against `μ^i` of the free coextension, plus log-concavity of `f`.
pub fn welsh_mason(m: &Matroid) -> Result<WelshMason> {
    let f_vector: Vec<BigInt> = m.independent_set_counts().into_iter().map(BigInt::from).collect();
    let coextension_mu = mu_mobius(&m.free_coextension()?)?;
    let holds = f_vector == coextension_mu && is_log_concave(&f_vector);
    Ok(WelshMason {
        f_vector,
        coextension_mu,
        holds,
    })
}

fn ser_big_vec<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

fn ser_opt_big_vec<S: serde::Serializer>(
    v: &Option<Vec<BigInt>>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => ser_big_vec(v, s),
        None => s.serialize_none(),
    }
}
