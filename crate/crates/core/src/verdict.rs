//! Decision engine: runs the sampled hypothesis audits and integral
//! classifications for a stated problem and reports the strongest
//! conclusion they license, together with the full check trail.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write as _;

use crate::func::{
    check_condition_f, check_condition_fodd, sample_grid_above, sample_grid_below, CheckOutcome,
    DiffusionCoeff, FluxClass, HypothesisCheck, HypothesisReport, ScalarFunc,
};
use crate::ko::{ko_classify, ko_classify_general, Classification, KoError, KoReport};
use crate::math;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Setting {
    Euclidean { n: u32 },
    /// Stratified group setting; `q` is the homogeneous dimension.
    Carnot { q: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `-div(A(|grad u|) grad u) >= f(u)`.
    Inequality,
    /// `-div(A(|grad u|) grad u) = f(u)`.
    Equation,
}

#[derive(Clone, Debug)]
pub struct ProblemSpec {
    pub operator: DiffusionCoeff,
    pub f: ScalarFunc,
    pub setting: Setting,
    pub relation: Relation,
}

impl ProblemSpec {
    pub fn dimension(&self) -> u32 {
        match self.setting {
            Setting::Euclidean { n } => n,
            Setting::Carnot { q } => q,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if let DiffusionCoeff::PLaplacian { p } = self.operator {
            if !(p > 1.0) {
                return Err(format!("exponent p = {p} must exceed 1"));
            }
        }
        if self.dimension() <= 1 {
            return Err(format!(
                "dimension {} must exceed 1",
                self.dimension()
            ));
        }
        Ok(())
    }
}

/// Conclusions in decreasing order of strength; `rank` encodes the order
/// used to pick the strongest licensed one.
#[derive(Clone, Debug, PartialEq)]
pub enum Conclusion {
    NoSolutions,
    ZeroOnly,
    /// `u` is constant; its value lies in `[lo, hi]`, the hull of the
    /// sampled zero set of `f` (restricted to admissible levels).
    ConstantOnly { lo: f64, hi: f64 },
    BoundedIn { lo: f64, hi: f64 },
    /// `u >= 0`, and either `u == 0` everywhere or `u > 0` everywhere.
    NonnegativeAndPositiveOrZero,
    Nonnegative,
    NoConclusion,
}

impl Conclusion {
    pub fn rank(&self) -> u8 {
        match self {
            Conclusion::NoSolutions => 0,
            Conclusion::ZeroOnly => 1,
            Conclusion::ConstantOnly { .. } => 2,
            Conclusion::BoundedIn { .. } => 3,
            Conclusion::NonnegativeAndPositiveOrZero => 4,
            Conclusion::Nonnegative => 5,
            Conclusion::NoConclusion => 6,
        }
    }

    pub fn is_conclusive(&self) -> bool {
        !matches!(self, Conclusion::NoConclusion)
    }
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conclusion::NoSolutions => write!(f, "no solutions"),
            Conclusion::ZeroOnly => write!(f, "u == 0 is the only solution"),
            Conclusion::ConstantOnly { lo, hi } => {
                write!(f, "u is constant, with value in [{lo}, {hi}]")
            }
            Conclusion::BoundedIn { lo, hi } => write!(f, "{lo} <= u <= {hi}"),
            Conclusion::NonnegativeAndPositiveOrZero => {
                write!(f, "u >= 0, and either u == 0 or u > 0 everywhere")
            }
            Conclusion::Nonnegative => write!(f, "u >= 0"),
            Conclusion::NoConclusion => write!(f, "no conclusion"),
        }
    }
}

/// One sufficient-condition bundle that was evaluated. `licensed` is set
/// exactly when every check passed, and names the conclusion this bundle
/// then grants.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub theorem: String,
    pub checks: Vec<HypothesisCheck>,
    pub ko: Vec<KoReport>,
    pub licensed: Option<Conclusion>,
    pub notes: Vec<String>,
}

impl Candidate {
    fn new(theorem: &str) -> Self {
        Self {
            theorem: theorem.to_string(),
            checks: Vec::new(),
            ko: Vec::new(),
            licensed: None,
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.outcome.passed())
    }

    pub fn first_failure(&self) -> Option<&HypothesisCheck> {
        self.checks.iter().find(|c| !c.outcome.passed())
    }

    fn check(&mut self, id: &str, outcome: CheckOutcome) {
        self.checks.push(HypothesisCheck {
            id: id.to_string(),
            outcome,
        });
    }

    fn absorb<E: fmt::Display>(&mut self, rep: Result<HypothesisReport, E>) {
        match rep {
            Ok(r) => self.checks.extend(r.checks),
            Err(e) => {
                self.notes.push(format!("hypothesis audit failed: {e}"));
                self.check("hypothesis audit completed", CheckOutcome::Inconclusive);
            }
        }
    }

    /// Records an integral classification as a check; a diverging
    /// integral fails with the tail-exponent estimate as witness.
    fn classify(&mut self, label: &str, res: Result<KoReport, KoError>) {
        let outcome = match res {
            Ok(report) => {
                let o = match &report.classification {
                    Classification::Converges { .. } => CheckOutcome::Pass,
                    Classification::Diverges {
                        tail_exponent_estimate,
                    } => CheckOutcome::Fail {
                        witness: *tail_exponent_estimate,
                    },
                    Classification::Inconclusive => CheckOutcome::Inconclusive,
                };
                self.ko.push(report);
                o
            }
            Err(e) => {
                self.notes.push(format!("{label}: {e}"));
                CheckOutcome::Inconclusive
            }
        };
        self.check(label, outcome);
    }

    fn skip_integrals(&mut self) {
        self.notes
            .push("integral classification skipped: a prior hypothesis failed".to_string());
    }

    fn grant(mut self, conclusion: Conclusion) -> Self {
        if self.passed() {
            self.licensed = Some(conclusion);
        }
        self
    }
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub conclusion: Conclusion,
    pub justification: Vec<Candidate>,
    /// Always true: hypothesis checks are grid evidence, not proofs.
    pub sampled: bool,
    pub notes: Vec<String>,
}

// --- sampled profile of f ---------------------------------------------------

const ZERO_TOL: f64 = 1e-12;
const TAIL_BAND: f64 = 1e6;
const TAIL_SIGN_TOL: f64 = 1e-9;

/// Global sampled portrait of `f`: sign pattern, monotonicity, tail
/// behavior, detected sign-change thresholds and the hull of the sampled
/// zero set.
struct Profile {
    grid: Vec<f64>,
    vals: Vec<f64>,
    idx0: usize,
    /// First sign change `f > 0  ->  f <= 0`, refined by bisection.
    alpha: Option<f64>,
    /// Last sign change `f >= 0  ->  f < 0`, refined by bisection.
    beta: Option<f64>,
    zero_hull: Option<(f64, f64)>,
    zero_hull_nonneg: Option<(f64, f64)>,
}

impl Profile {
    fn build(f: &ScalarFunc) -> Result<Self, String> {
        let mut grid = sample_grid_below(0.0);
        let idx0 = grid.len();
        grid.push(0.0);
        grid.extend(sample_grid_above(0.0));
        let mut vals = Vec::with_capacity(grid.len());
        for &t in &grid {
            match f.eval(t) {
                Ok(v) => vals.push(v),
                Err(e) => return Err(format!("f is not evaluable at t = {t}: {e}")),
            }
        }

        let mut alpha = None;
        for i in 0..grid.len() - 1 {
            if vals[i] > 0.0 && vals[i + 1] <= 0.0 {
                alpha = Some(refine_falling(f, grid[i], grid[i + 1]));
                break;
            }
        }
        let mut beta = None;
        for i in (0..grid.len() - 1).rev() {
            if vals[i] >= 0.0 && vals[i + 1] < 0.0 {
                beta = Some(refine_leaving(f, grid[i], grid[i + 1]));
                break;
            }
        }

        let mut zeros: Vec<f64> = grid
            .iter()
            .zip(&vals)
            .filter(|(_, v)| **v == 0.0)
            .map(|(t, _)| *t)
            .collect();
        for root in [alpha, beta].into_iter().flatten() {
            if let Ok(v) = f.eval(root) {
                if math::abs(v) <= 1e-6 * (1.0 + math::abs(root)) {
                    zeros.push(root);
                }
            }
        }
        let hull = |zs: &[f64]| -> Option<(f64, f64)> {
            let lo = zs.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = zs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            if lo <= hi {
                Some((lo, hi))
            } else {
                None
            }
        };
        let zero_hull = hull(&zeros);
        let nonneg: Vec<f64> = zeros.iter().cloned().filter(|t| *t >= -ZERO_TOL).collect();
        let zero_hull_nonneg = hull(&nonneg);

        Ok(Self {
            grid,
            vals,
            idx0,
            alpha,
            beta,
            zero_hull,
            zero_hull_nonneg,
        })
    }

    fn all(&self, pred: impl Fn(f64, f64) -> bool) -> CheckOutcome {
        for (&t, &v) in self.grid.iter().zip(&self.vals) {
            if !pred(t, v) {
                return CheckOutcome::Fail { witness: t };
            }
        }
        CheckOutcome::Pass
    }

    fn positive(&self) -> CheckOutcome {
        self.all(|_, v| v > 0.0)
    }

    fn nonnegative(&self) -> CheckOutcome {
        self.all(|_, v| v >= 0.0)
    }

    fn nonnegative_on_nonneg(&self) -> bool {
        self.all(|t, v| t < 0.0 || v >= 0.0).passed()
    }

    fn nonincreasing(&self) -> CheckOutcome {
        for i in 0..self.grid.len() - 1 {
            let tol = ZERO_TOL * (1.0 + math::abs(self.vals[i]));
            if self.vals[i + 1] > self.vals[i] + tol {
                return CheckOutcome::Fail {
                    witness: self.grid[i + 1],
                };
            }
        }
        CheckOutcome::Pass
    }

    fn identically_zero(&self) -> bool {
        self.vals.iter().all(|v| *v == 0.0)
    }

    fn value_at_zero(&self) -> f64 {
        self.vals[self.idx0]
    }

    fn liminf_positive(&self) -> CheckOutcome {
        self.all(|t, v| t > -TAIL_BAND || v > TAIL_SIGN_TOL)
    }

    fn limsup_negative(&self) -> CheckOutcome {
        self.all(|t, v| t < TAIL_BAND || v < -TAIL_SIGN_TOL)
    }
}

/// Bisects to the boundary where `f` stops being positive; returns a
/// point with `f <= 0`.
fn refine_falling(f: &ScalarFunc, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match f.eval(mid) {
            Ok(v) if v > 0.0 => lo = mid,
            Ok(_) => hi = mid,
            Err(_) => break,
        }
    }
    hi
}

/// Bisects to the boundary where `f` turns negative; returns a point
/// with `f >= 0`.
fn refine_leaving(f: &ScalarFunc, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match f.eval(mid) {
            Ok(v) if v >= 0.0 => lo = mid,
            Ok(_) => hi = mid,
            Err(_) => break,
        }
    }
    lo
}

// --- integral classification dispatch ---------------------------------------

fn ko_left(op: &DiffusionCoeff, f: &ScalarFunc, alpha: f64) -> Result<KoReport, KoError> {
    match op {
        DiffusionCoeff::PLaplacian { p } => ko_classify(f, *p, alpha),
        other => ko_classify_general(f, other, alpha),
    }
}

/// Right-side classification of `-f` on `(beta, +inf)`, reduced by the
/// reflection `t -> -t` to a left-side run with endpoint `-beta`.
fn ko_right(op: &DiffusionCoeff, f: &ScalarFunc, beta: f64) -> Result<KoReport, KoError> {
    let reflected = f.clone().reflected().negated();
    ko_left(op, &reflected, -beta)
}

// --- candidate bundles ------------------------------------------------------

struct Ctx<'a> {
    spec: &'a ProblemSpec,
    prof: &'a Profile,
    carnot: bool,
    p_hom: bool,
}

impl Ctx<'_> {
    fn id(&self, base: &str) -> String {
        if self.carnot {
            format!("{base}.carnot")
        } else if self.p_hom {
            format!("{base}.p_laplacian")
        } else {
            format!("{base}.general_flux")
        }
    }

    fn zero_id(&self) -> String {
        if self.carnot {
            "liouville.zero.carnot".to_string()
        } else if self.p_hom {
            "liouville.zero".to_string()
        } else {
            "liouville.zero.general".to_string()
        }
    }
}

fn cand_nonexistence(ctx: &Ctx) -> Candidate {
    let mut c = Candidate::new(&ctx.id("nonexistence"));
    c.check("f > 0 on R (sampled)", ctx.prof.positive());
    c.check("f non-increasing on R (sampled)", ctx.prof.nonincreasing());
    if c.passed() {
        c.classify(
            "left tail integral converges (endpoint -1)",
            ko_left(&ctx.spec.operator, &ctx.spec.f, -1.0),
        );
    } else {
        c.skip_integrals();
    }
    c.grant(Conclusion::NoSolutions)
}

fn cand_zero_only(ctx: &Ctx) -> Candidate {
    let mut c = Candidate::new(&ctx.zero_id());
    c.absorb(check_condition_fodd(&ctx.spec.f, 0.0, 0.0));
    let f0 = ctx.prof.value_at_zero();
    c.check(
        "f(0) = 0 (sampled)",
        if math::abs(f0) <= ZERO_TOL {
            CheckOutcome::Pass
        } else {
            CheckOutcome::Fail { witness: 0.0 }
        },
    );
    c.check("f non-increasing on R (sampled)", ctx.prof.nonincreasing());
    if c.passed() {
        c.classify(
            "left tail integral converges (endpoint -1)",
            ko_left(&ctx.spec.operator, &ctx.spec.f, -1.0),
        );
        c.classify(
            "right tail integral converges (endpoint 1)",
            ko_right(&ctx.spec.operator, &ctx.spec.f, 1.0),
        );
    } else {
        c.skip_integrals();
    }
    c.grant(Conclusion::ZeroOnly)
}

fn cand_liouville_constant(ctx: &Ctx, p: f64) -> Candidate {
    let id = if ctx.carnot {
        "liouville.constant.carnot"
    } else {
        "liouville.constant"
    };
    let mut c = Candidate::new(id);
    let dim = ctx.spec.dimension();
    c.check(
        &format!("p = {p} >= dimension {dim}"),
        if p >= dim as f64 {
            CheckOutcome::Pass
        } else {
            CheckOutcome::Fail { witness: p }
        },
    );
    c.check("f >= 0 on R (sampled)", ctx.prof.nonnegative());
    c.absorb(check_condition_f(&ctx.spec.f));
    if c.passed() {
        c.classify(
            "left tail integral converges (endpoint -1)",
            ko_left(&ctx.spec.operator, &ctx.spec.f, -1.0),
        );
    } else {
        c.skip_integrals();
    }
    match ctx.prof.zero_hull_nonneg {
        Some((lo, hi)) => c.grant(Conclusion::ConstantOnly { lo, hi }),
        None => {
            c.notes.push(
                "f > 0 on [0, +inf) (sampled): no admissible constant level remains".to_string(),
            );
            c.grant(Conclusion::NoSolutions)
        }
    }
}

fn cand_bounds(ctx: &Ctx, alpha: Option<f64>, beta: Option<f64>) -> Candidate {
    let mut c = Candidate::new(&ctx.id("bounds"));
    let (a, a_auto) = match alpha {
        Some(a) => (Some(a), false),
        None => (ctx.prof.alpha, true),
    };
    let (b, b_auto) = match beta {
        Some(b) => (Some(b), false),
        None => (ctx.prof.beta, true),
    };
    let (a, b) = match (a, b) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            c.check(
                "threshold pair (alpha, beta) available",
                CheckOutcome::Inconclusive,
            );
            c.notes.push(
                "no sign-change thresholds supplied or detectable from samples".to_string(),
            );
            return c;
        }
    };
    if a_auto {
        c.notes
            .push(format!("alpha = {a} auto-detected from the outermost sampled sign change"));
    }
    if b_auto {
        c.notes
            .push(format!("beta = {b} auto-detected from the outermost sampled sign change"));
    }
    if a > b {
        c.check("alpha <= beta", CheckOutcome::Fail { witness: a });
        return c;
    }
    c.absorb(check_condition_fodd(&ctx.spec.f, a, b));
    if c.passed() {
        c.classify(
            "left tail integral converges (endpoint alpha)",
            ko_left(&ctx.spec.operator, &ctx.spec.f, a),
        );
        c.classify(
            "right tail integral converges (endpoint beta)",
            ko_right(&ctx.spec.operator, &ctx.spec.f, b),
        );
    } else {
        c.skip_integrals();
    }
    c.grant(Conclusion::BoundedIn { lo: a, hi: b })
}

fn cand_positivity(ctx: &Ctx) -> Candidate {
    let mut c = Candidate::new(&ctx.id("positivity"));
    c.absorb(check_condition_f(&ctx.spec.f));
    if c.passed() {
        c.classify(
            "left tail integral converges (endpoint -1)",
            ko_left(&ctx.spec.operator, &ctx.spec.f, -1.0),
        );
    } else {
        c.skip_integrals();
    }
    if ctx.prof.nonnegative_on_nonneg() {
        c.notes
            .push("f >= 0 on [0, +inf) (sampled): either u == 0 or u > 0 everywhere".to_string());
        c.grant(Conclusion::NonnegativeAndPositiveOrZero)
    } else {
        c.grant(Conclusion::Nonnegative)
    }
}

fn cand_nonexistence_bounded(ctx: &Ctx) -> Candidate {
    let mut c = Candidate::new("nonexistence.bounded_flux");
    c.check(
        "liminf of f at -inf > 0 (sampled)",
        ctx.prof.liminf_positive(),
    );
    c.check("f > 0 on R (sampled)", ctx.prof.positive());
    c.grant(Conclusion::NoSolutions)
}

fn cand_constancy_bounded(ctx: &Ctx) -> Candidate {
    let mut c = Candidate::new("constancy.bounded_flux");
    c.check("f non-increasing on R (sampled)", ctx.prof.nonincreasing());
    c.check(
        "f not identically 0 (sampled)",
        if ctx.prof.identically_zero() {
            CheckOutcome::Fail { witness: 0.0 }
        } else {
            CheckOutcome::Pass
        },
    );
    c.notes
        .push("solution regularity (twice differentiable) is assumed, not checked".to_string());
    match ctx.prof.zero_hull {
        Some((lo, hi)) => c.grant(Conclusion::ConstantOnly { lo, hi }),
        None => {
            c.notes
                .push("f has no sampled zero: no constant level is admissible".to_string());
            c.grant(Conclusion::NoSolutions)
        }
    }
}

fn cand_bounds_bounded(ctx: &Ctx) -> Candidate {
    let mut c = Candidate::new("bounds.bounded_flux");
    c.check(
        "liminf of f at -inf > 0 (sampled)",
        ctx.prof.liminf_positive(),
    );
    c.check(
        "limsup of f at +inf < 0 (sampled)",
        ctx.prof.limsup_negative(),
    );
    match ctx.prof.zero_hull {
        Some((lo, hi)) => {
            c.check("f has a sampled zero", CheckOutcome::Pass);
            c.notes.push(
                "bounds are the hull of the sampled zero set of f".to_string(),
            );
            c.grant(Conclusion::BoundedIn { lo, hi })
        }
        None => {
            c.check(
                "f has a sampled zero",
                CheckOutcome::Fail { witness: 0.0 },
            );
            c
        }
    }
}

fn cand_positivity_bounded(ctx: &Ctx) -> Candidate {
    let mut c = Candidate::new("positivity.bounded_flux");
    c.absorb(check_condition_f(&ctx.spec.f));
    c.grant(Conclusion::Nonnegative)
}

fn cand_liouville_constant_bounded(ctx: &Ctx) -> Candidate {
    let mut c = Candidate::new("liouville.constant.bounded_flux");
    c.check(
        "dimension == 2",
        if ctx.spec.dimension() == 2 {
            CheckOutcome::Pass
        } else {
            CheckOutcome::Fail {
                witness: ctx.spec.dimension() as f64,
            }
        },
    );
    c.check("f >= 0 on R (sampled)", ctx.prof.nonnegative());
    c.absorb(check_condition_f(&ctx.spec.f));
    match ctx.prof.zero_hull_nonneg {
        Some((lo, hi)) => c.grant(Conclusion::ConstantOnly { lo, hi }),
        None => {
            c.notes.push(
                "f > 0 on [0, +inf) (sampled): no admissible constant level remains".to_string(),
            );
            c.grant(Conclusion::NoSolutions)
        }
    }
}

// --- decision ---------------------------------------------------------------

/// Evaluates every applicable sufficient-condition bundle and returns
/// the strongest conclusion among those fully established, with the
/// complete justification trail. `alpha` / `beta` override the
/// auto-detected sign-change thresholds for the two-sided bounds.
pub fn decide(spec: &ProblemSpec, alpha: Option<f64>, beta: Option<f64>) -> Verdict {
    let mut notes = Vec::new();
    let no_conclusion = |notes: Vec<String>| Verdict {
        conclusion: Conclusion::NoConclusion,
        justification: Vec::new(),
        sampled: true,
        notes,
    };
    if let Err(e) = spec.validate() {
        return no_conclusion(vec![format!("invalid problem: {e}")]);
    }
    let prof = match Profile::build(&spec.f) {
        Ok(p) => p,
        Err(e) => return no_conclusion(vec![e]),
    };

    let carnot = matches!(spec.setting, Setting::Carnot { .. });
    let p_hom = matches!(spec.operator, DiffusionCoeff::PLaplacian { .. });
    if carnot && !p_hom {
        return no_conclusion(vec![
            "only the p-homogeneous operator is supported in the stratified-group setting"
                .to_string(),
        ]);
    }

    let flux = match spec.operator.classify_flux() {
        Ok(FluxClass::Unbounded) => Some(true),
        Ok(FluxClass::Bounded { .. }) => Some(false),
        Err(e) => {
            notes.push(format!("flux classification failed: {e}"));
            None
        }
    };

    let ctx = Ctx {
        spec,
        prof: &prof,
        carnot,
        p_hom,
    };
    let equation = spec.relation == Relation::Equation;
    let mut cands = Vec::new();
    match flux {
        Some(true) => {
            cands.push(cand_nonexistence(&ctx));
            if equation {
                cands.push(cand_zero_only(&ctx));
            }
            if let DiffusionCoeff::PLaplacian { p } = spec.operator {
                cands.push(cand_liouville_constant(&ctx, p));
            }
            if equation {
                cands.push(cand_bounds(&ctx, alpha, beta));
            }
            cands.push(cand_positivity(&ctx));
        }
        Some(false) => {
            cands.push(cand_nonexistence_bounded(&ctx));
            if equation {
                cands.push(cand_constancy_bounded(&ctx));
                cands.push(cand_bounds_bounded(&ctx));
            }
            if matches!(spec.operator, DiffusionCoeff::MeanCurvature) {
                cands.push(cand_liouville_constant_bounded(&ctx));
            }
            cands.push(cand_positivity_bounded(&ctx));
        }
        None => {}
    }

    let mut best = Conclusion::NoConclusion;
    for c in &cands {
        if let Some(l) = &c.licensed {
            if l.rank() < best.rank() {
                best = l.clone();
            }
        }
    }
    notes.push(
        "all hypothesis checks are sampled; the verdict is conditional on them".to_string(),
    );
    Verdict {
        conclusion: best,
        justification: cands,
        sampled: true,
        notes,
    }
}

// --- rendering --------------------------------------------------------------

fn classification_line(r: &KoReport) -> String {
    match &r.classification {
        Classification::Converges {
            value,
            error_estimate,
        } => format!(
            "converges to {value} (error estimate {error_estimate}, {} segments)",
            r.segments_used
        ),
        Classification::Diverges {
            tail_exponent_estimate,
        } => format!(
            "diverges (tail exponent estimate {tail_exponent_estimate}, {} segments)",
            r.segments_used
        ),
        Classification::Inconclusive => {
            format!("inconclusive after {} segments", r.segments_used)
        }
    }
}

/// Human-readable rendering of the full justification trail.
pub fn justification_report(v: &Verdict) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "verdict: {}", v.conclusion);
    for n in &v.notes {
        let _ = writeln!(s, "note: {n}");
    }
    for c in &v.justification {
        let status = match &c.licensed {
            Some(l) => format!("applies, grants: {l}"),
            None => "not established".to_string(),
        };
        let _ = writeln!(s, "[{}] {}", c.theorem, status);
        for ch in &c.checks {
            match &ch.outcome {
                CheckOutcome::Pass => {
                    let _ = writeln!(s, "  [pass] {}", ch.id);
                }
                CheckOutcome::Fail { witness } => {
                    let _ = writeln!(s, "  [FAIL] {} (witness {witness})", ch.id);
                }
                CheckOutcome::Inconclusive => {
                    let _ = writeln!(s, "  [????] {}", ch.id);
                }
            }
        }
        for r in &c.ko {
            let _ = writeln!(s, "  integral: {}", classification_line(r));
        }
        for n in &c.notes {
            let _ = writeln!(s, "  note: {n}");
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn euclid(n: u32) -> Setting {
        Setting::Euclidean { n }
    }

    fn spec(
        operator: DiffusionCoeff,
        f: ScalarFunc,
        setting: Setting,
        relation: Relation,
    ) -> ProblemSpec {
        ProblemSpec {
            operator,
            f,
            setting,
            relation,
        }
    }

    fn cited(v: &Verdict, theorem: &str) -> bool {
        v.justification
            .iter()
            .any(|c| c.theorem == theorem && c.licensed.is_some())
    }

    #[test]
    fn golden_zero_only() {
        let s = spec(
            DiffusionCoeff::p_laplacian(2.0),
            ScalarFunc::power_sign(-1.0, 3.0),
            euclid(3),
            Relation::Equation,
        );
        let v = decide(&s, None, None);
        assert_eq!(v.conclusion, Conclusion::ZeroOnly);
        assert!(cited(&v, "liouville.zero"));
    }

    #[test]
    fn golden_mean_curvature_positive_source() {
        let s = spec(
            DiffusionCoeff::MeanCurvature,
            ScalarFunc::constant(1.0),
            euclid(3),
            Relation::Inequality,
        );
        let v = decide(&s, None, None);
        assert_eq!(v.conclusion, Conclusion::NoSolutions);
        assert!(cited(&v, "nonexistence.bounded_flux"));
    }

    #[test]
    fn golden_one_sided_power() {
        let f = ScalarFunc::parse("max(0-t,0)^2").unwrap();
        let s = spec(
            DiffusionCoeff::p_laplacian(2.0),
            f,
            euclid(3),
            Relation::Inequality,
        );
        let v = decide(&s, None, None);
        assert_eq!(v.conclusion, Conclusion::NonnegativeAndPositiveOrZero);
        assert!(cited(&v, "positivity.p_laplacian"));
    }

    #[test]
    fn golden_constancy_mean_curvature() {
        let f = ScalarFunc::parse("min(1-t,0)+max(0-t-1,0)").unwrap();
        let s = spec(
            DiffusionCoeff::MeanCurvature,
            f,
            euclid(3),
            Relation::Equation,
        );
        let v = decide(&s, None, None);
        match v.conclusion {
            Conclusion::ConstantOnly { lo, hi } => {
                assert!((lo + 1.0).abs() < 1e-9, "lo = {lo}");
                assert!((hi - 1.0).abs() < 1e-9, "hi = {hi}");
            }
            ref c => panic!("expected ConstantOnly, got {c:?}"),
        }
        assert!(cited(&v, "constancy.bounded_flux"));
    }

    #[test]
    fn golden_liouville_constant() {
        let s = spec(
            DiffusionCoeff::p_laplacian(3.0),
            ScalarFunc::power(1.0, 3.0),
            euclid(2),
            Relation::Inequality,
        );
        let v = decide(&s, None, None);
        match v.conclusion {
            Conclusion::ConstantOnly { lo, hi } => {
                assert!(lo.abs() < 1e-9 && hi.abs() < 1e-9);
            }
            ref c => panic!("expected ConstantOnly, got {c:?}"),
        }
        assert!(cited(&v, "liouville.constant"));
    }

    #[test]
    fn golden_nonexistence_positive_decreasing() {
        // Positive, non-increasing, with a convergent tail integral
        // (cubic growth at -inf) and a positive floor so sampling never
        // underflows to zero.
        let f = ScalarFunc::parse("1+max(0-t,0)^3").unwrap();
        let s = spec(
            DiffusionCoeff::p_laplacian(2.0),
            f,
            euclid(3),
            Relation::Inequality,
        );
        let v = decide(&s, None, None);
        assert_eq!(v.conclusion, Conclusion::NoSolutions);
        assert!(cited(&v, "nonexistence.p_laplacian"));
    }

    #[test]
    fn golden_critical_exponent_no_conclusion() {
        // q = p - 1 = 2: the tail integral diverges and nothing applies.
        let f = ScalarFunc::parse("max(0-t,0)^2").unwrap();
        let s = spec(
            DiffusionCoeff::p_laplacian(3.0),
            f,
            euclid(3),
            Relation::Inequality,
        );
        let v = decide(&s, None, None);
        assert_eq!(v.conclusion, Conclusion::NoConclusion);
        // Diagnostics: every candidate records its first failed check.
        assert!(!v.justification.is_empty());
        for c in &v.justification {
            assert!(c.licensed.is_none());
            assert!(c.first_failure().is_some());
        }
    }

    #[test]
    fn golden_carnot_zero_only() {
        let s = spec(
            DiffusionCoeff::p_laplacian(2.0),
            ScalarFunc::power_sign(-1.0, 3.0),
            Setting::Carnot { q: 4 },
            Relation::Equation,
        );
        let v = decide(&s, None, None);
        assert_eq!(v.conclusion, Conclusion::ZeroOnly);
        assert!(cited(&v, "liouville.zero.carnot"));
    }

    #[test]
    fn reflection_duality_mean_curvature() {
        // Non-increasing source vanishing exactly on [-1, 2].
        let f = ScalarFunc::parse("min(2-t,0)+max(0-t-1,0)").unwrap();
        let s = spec(
            DiffusionCoeff::MeanCurvature,
            f.clone(),
            euclid(3),
            Relation::Equation,
        );
        let v = decide(&s, None, None);
        let (lo, hi) = match v.conclusion {
            Conclusion::ConstantOnly { lo, hi } => (lo, hi),
            ref c => panic!("expected ConstantOnly, got {c:?}"),
        };
        assert!((lo + 1.0).abs() < 1e-9 && (hi - 2.0).abs() < 1e-9);

        // The substitution u -> -u replaces f by -f(-.) and negates and
        // swaps the admissible levels.
        let g = f.reflected().negated();
        let sr = spec(
            DiffusionCoeff::MeanCurvature,
            g,
            euclid(3),
            Relation::Equation,
        );
        let vr = decide(&sr, None, None);
        match vr.conclusion {
            Conclusion::ConstantOnly { lo: rlo, hi: rhi } => {
                assert!((rlo + hi).abs() < 1e-9 && (rhi + lo).abs() < 1e-9);
            }
            ref c => panic!("expected ConstantOnly, got {c:?}"),
        }
    }

    #[test]
    fn monotone_strength_nonexistence() {
        for c in [1.0_f64, 5.0] {
            let f = ScalarFunc::parse(&alloc::format!("{c}*(1+max(0-t,0)^3)")).unwrap();
            let s = spec(
                DiffusionCoeff::p_laplacian(2.0),
                f,
                euclid(3),
                Relation::Inequality,
            );
            let v = decide(&s, None, None);
            assert_eq!(v.conclusion, Conclusion::NoSolutions, "c = {c}");
        }
    }

    #[test]
    fn report_rendering() {
        let s = spec(
            DiffusionCoeff::p_laplacian(2.0),
            ScalarFunc::power_sign(-1.0, 3.0),
            euclid(3),
            Relation::Equation,
        );
        let v = decide(&s, None, None);
        let zero = v
            .justification
            .iter()
            .find(|c| c.theorem == "liouville.zero")
            .unwrap();
        assert_eq!(zero.ko.len(), 2);
        assert!(zero.ko.iter().all(|r| r.classification.converges()));

        let text = justification_report(&v);
        assert!(text.contains("liouville.zero"));
        assert!(text.contains("converges"));
        assert!(text.contains("sampled"));

        // Deterministic rendering.
        assert_eq!(text, justification_report(&decide(&s, None, None)));
    }

    #[test]
    fn invalid_problem_is_no_conclusion() {
        let s = spec(
            DiffusionCoeff::p_laplacian(0.5),
            ScalarFunc::constant(1.0),
            euclid(3),
            Relation::Inequality,
        );
        let v = decide(&s, None, None);
        assert_eq!(v.conclusion, Conclusion::NoConclusion);
        assert!(v.notes.iter().any(|n| n.contains("invalid problem")));
    }

    #[test]
    fn explicit_bounds_for_equation() {
        // f = -t^3: non-increasing, odd; with alpha = -1, beta = 1
        // supplied the two-sided bundle grants the bracket.
        let f = ScalarFunc::parse("0-t^3").unwrap();
        let s = spec(
            DiffusionCoeff::p_laplacian(2.0),
            f,
            euclid(3),
            Relation::Equation,
        );
        let v = decide(&s, Some(-1.0), Some(1.0));
        // ZeroOnly is stronger and also applies here (f(0) = 0).
        assert_eq!(v.conclusion, Conclusion::ZeroOnly);
        let bounds = v
            .justification
            .iter()
            .find(|c| c.theorem == "bounds.p_laplacian")
            .unwrap();
        assert_eq!(
            bounds.licensed,
            Some(Conclusion::BoundedIn { lo: -1.0, hi: 1.0 })
        );
    }
}
