//! End-to-end computation: input validation, per-`j` λ values, finite
//! length of the Ext generator, the length/Lyubeznik conclusions, and the
//! verification transcript.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cache::{self, CacheStatus, ResolutionCache};
use crate::error::{Error, Result};
use crate::ffield::{FieldDesc, FieldSpec, FqElem};
use crate::frobcartier::{
    cartier_from_lift, cartier_one_step_up, cartier_on_cocycle, ext_index, frobenius_pullback, hasse_witt_hypersurface,
    lift_chain_map, squares_commute, CartierData, Provenance,
};
use crate::groebner::Budget;
use crate::homalg::{ext_piece_cost, free_resolution, is_finite_length, present_homology, FreeResolution};
use crate::linalg::Matrix;
use crate::polyring::{Ideal, MonomialOrder, PolyRing};
use crate::semilinear::{dual_stable_equivalence, stable_dim, SemilinearOp, SerializedOp, StableResult};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldInput {
    pub p: u32,
    #[serde(default = "one")]
    pub e: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
    /// Name of the field generator inside polynomial strings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gen: Option<String>,
}

fn one() -> u32 {
    1
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathChoice {
    #[default]
    Ext,
    Hassewitt,
    Both,
}

impl FromStr for PathChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ext" => Ok(PathChoice::Ext),
            "hassewitt" => Ok(PathChoice::Hassewitt),
            "both" => Ok(PathChoice::Both),
            other => Err(Error::InvalidInput(format!("unknown path {other:?} (ext, hassewitt, both)"))),
        }
    }
}

/// The JSON input file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemInput {
    pub field: FieldInput,
    pub vars: Vec<String>,
    pub ideal: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_range: Option<[usize; 2]>,
    #[serde(default)]
    pub path: PathChoice,
    #[serde(default)]
    pub verify: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension_check: Option<u32>,
    #[serde(default)]
    pub order: MonomialOrder,
    #[serde(default)]
    pub allow_zero: bool,
}

/// A parsed and validated problem.
#[derive(Clone, Debug)]
pub struct ProblemSpec {
    pub input: ProblemInput,
    pub ideal: Ideal,
    pub j_lo: usize,
    pub j_hi: usize,
}

impl ProblemSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_input(serde_json::from_str(text)?)
    }

    pub fn from_input(input: ProblemInput) -> Result<Self> {
        let f = &input.field;
        let field = FieldDesc::from_spec(&FieldSpec { p: f.p, e: f.e, modulus: f.modulus.clone() })?;
        let ring = PolyRing::with_names(field, input.vars.clone(), input.order)?;
        if ring.nvars() < 2 {
            return Err(Error::InvalidInput("at least two variables are needed (n >= 1)".into()));
        }
        let gens = input
            .ideal
            .iter()
            .enumerate()
            .map(|(k, s)| ring.parse(s, f.gen.as_deref(), k))
            .collect::<Result<Vec<_>>>()?;
        let ideal = Ideal::new(ring, gens)?;
        if ideal.is_zero() && !input.allow_zero {
            return Err(Error::InvalidInput("zero ideal (set allow_zero to accept it)".into()));
        }
        let n = ideal.ring().nvars() - 1;
        let [j_lo, j_hi] = input.j_range.unwrap_or([1, n]);
        if j_lo == 0 || j_lo > j_hi || j_hi > n {
            return Err(Error::OutOfRange(format!("j_range [{j_lo}, {j_hi}] (must satisfy 1 <= lo <= hi <= {n})")));
        }
        if input.extension_check == Some(0) {
            return Err(Error::InvalidInput("extension_check must be at least 1".into()));
        }
        Ok(ProblemSpec { input, ideal, j_lo, j_hi })
    }

    pub fn ring(&self) -> &PolyRing {
        self.ideal.ring()
    }

    pub fn n(&self) -> usize {
        self.ring().nvars() - 1
    }

    /// Hash of the canonical form of the input.
    pub fn fingerprint(&self) -> String {
        let ring = self.ring();
        let canon = serde_json::json!({
            "field": ring.field().spec(),
            "order": ring.order(),
            "vars": ring.names(),
            "ideal": self.ideal.gens().iter().map(|g| ring.format(g)).collect::<Vec<_>>(),
            "j_range": [self.j_lo, self.j_hi],
        });
        cache::sha256_hex(canon.to_string().as_bytes())
    }
}

/// Rejects the unit ideal.
pub fn check_proper(ideal: &Ideal, budget: &Budget) -> Result<()> {
    let gb = ideal.gb_with(budget)?;
    if gb.elements().iter().any(|g| g.degree() == Some(0)) {
        return Err(Error::EmptyScheme);
    }
    Ok(())
}

/// Resolution of `R/I` of length at most the number of variables, through
/// the cache when one is given.
pub fn resolve(ideal: &Ideal, cache: Option<&ResolutionCache>, budget: &Budget) -> Result<(FreeResolution, CacheStatus)> {
    let length = ideal.ring().nvars();
    let Some(cache) = cache else {
        return Ok((free_resolution(ideal, length, budget)?, CacheStatus::Disabled));
    };
    let key = cache::cache_key(ideal);
    if let Some(res) = cache.load(&key, ideal.ring()) {
        return Ok((res, CacheStatus::Hit));
    }
    let res = free_resolution(ideal, length, budget)?;
    cache.store(&key, &res)?;
    Ok((res, CacheStatus::Miss))
}

/// λ_j with the operator it came from.
#[derive(Clone, Debug)]
pub struct LambdaResult {
    pub j: usize,
    pub lambda: usize,
    pub stable: StableResult,
    pub cartier: CartierData,
}

/// λ_j as the stable dimension of the Cartier operator on
/// `Ext^{n-j}(R/I,R)_{-(n+1)}`.
pub fn compute_lambda(res: &FreeResolution, j: usize, budget: &Budget) -> Result<LambdaResult> {
    let pullback = frobenius_pullback(res);
    let lift = lift_chain_map(res, &pullback, budget)?;
    let cartier = cartier_from_lift(res, &lift, j, 0)?;
    let stable = stable_dim(&cartier.op);
    Ok(LambdaResult { j, lambda: stable.dim, stable, cartier })
}

/// λ_j for an ideal, from scratch.
pub fn lambda_of_ideal(ideal: &Ideal, j: usize, budget: &Budget) -> Result<usize> {
    check_proper(ideal, budget)?;
    let (res, _) = resolve(ideal, None, budget)?;
    Ok(compute_lambda(&res, j, budget)?.lambda)
}

/// Hasse–Witt operator for row `j` when `I` is principal; `None` otherwise.
pub fn hasse_witt_for_row(res: &FreeResolution, j: usize) -> Result<Option<SemilinearOp>> {
    let ring = &res.ring;
    if res.length() == 0 || res.module(1).rank() != 1 {
        return Ok(None);
    }
    let i = ext_index(ring, j)?;
    if i != 1 {
        return Ok(Some(SemilinearOp::new(ring.field().clone(), Matrix::zeros(0, 0), -1)?));
    }
    hasse_witt_hypersurface(ring, res.diffs[0].entry(0, 0)).map(Some)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LyubeznikEntry {
    pub i: usize,
    pub j: usize,
    pub value: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Lyubeznik {
    Entries(Vec<LyubeznikEntry>),
    NotComputed(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowSource {
    Ext,
    Hassewitt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaRow {
    pub j: usize,
    pub ext_index: usize,
    pub lambda: usize,
    pub source: RowSource,
    pub lambda_ext: Option<usize>,
    pub lambda_hasse_witt: Option<usize>,
    pub ext_piece_dim: usize,
    pub stabilization_index: usize,
    pub image_ranks: Vec<usize>,
    pub finite_length: bool,
    pub ext_zero: bool,
    pub conclusion: String,
    pub detail: String,
    /// Largest `t` with an 𝓕-module surjection onto `E^t`, when the support
    /// hypothesis holds.
    pub surjection_rank: Option<usize>,
    pub lyubeznik: Lyubeznik,
    pub cartier: SerializedOp,
    pub provenance: Option<Provenance>,
    pub timing_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub skipped: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Transcript {
    fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, skipped: false, detail: detail.into() });
        self.passed = self.checks.iter().all(|c| c.passed);
    }

    fn skip(&mut self, name: &str, reason: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed: true, skipped: true, detail: reason.into() });
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionSummary {
    pub ranks: Vec<usize>,
    pub twists: Vec<Vec<i64>>,
    pub cache: String,
    pub key: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timings {
    pub groebner_ms: u64,
    pub resolution_ms: u64,
    pub rows_ms: u64,
    pub verification_ms: u64,
    pub total_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthReport {
    pub field: FieldSpec,
    pub vars: Vec<String>,
    pub ideal: Vec<String>,
    pub n: usize,
    pub path: PathChoice,
    pub resolution: ResolutionSummary,
    pub rows: Vec<LambdaRow>,
    pub verification: Option<Transcript>,
    pub timings: Timings,
}

impl LengthReport {
    pub fn row(&self, j: usize) -> Option<&LambdaRow> {
        self.rows.iter().find(|r| r.j == j)
    }

    /// False when a verification check or a path agreement failed.
    pub fn passed(&self) -> bool {
        self.verification.as_ref().is_none_or(|t| t.passed)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let field = if self.field.e == 1 { format!("F_{}", self.field.p) } else { format!("F_{}^{}", self.field.p, self.field.e) };
        let _ = writeln!(s, "ring: {field}[{}], n = {}", self.vars.join(", "), self.n);
        let _ = writeln!(s, "ideal: ({})", self.ideal.join(", "));
        let _ = writeln!(
            s,
            "resolution ranks: {:?} (cache: {})",
            self.resolution.ranks, self.resolution.cache
        );
        let _ = writeln!(s);
        let _ = writeln!(s, "{:>3} {:>4} {:>5} {:>7} {:>7}  conclusion", "j", "Ext", "dim", "lambda", "finite");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:>3} {:>4} {:>5} {:>7} {:>7}  {}",
                r.j,
                r.ext_index,
                r.ext_piece_dim,
                r.lambda,
                if r.finite_length { "yes" } else { "no" },
                r.conclusion
            );
            let _ = writeln!(s, "{:>30}{}", "", r.detail);
            if let Lyubeznik::Entries(es) = &r.lyubeznik {
                let list: Vec<String> = es.iter().map(|e| format!("λ_{{{},{}}} = {}", e.i, e.j, e.value)).collect();
                let _ = writeln!(s, "{:>30}Lyubeznik: {}", "", list.join(", "));
            }
        }
        if let Some(t) = &self.verification {
            let _ = writeln!(s);
            let _ = writeln!(s, "verification: {}", if t.passed { "passed" } else { "FAILED" });
            for c in &t.checks {
                let tag = if c.skipped { "skip" } else if c.passed { "ok" } else { "FAIL" };
                let _ = writeln!(s, "  [{tag}] {}: {}", c.name, c.detail);
            }
        }
        let _ = writeln!(s);
        let _ = writeln!(s, "total time: {} ms", self.timings.total_ms);
        s
    }
}

/// Per-run switches layered over the input file.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub cache_dir: Option<PathBuf>,
    pub budget_seconds: Option<u64>,
    pub path: Option<PathChoice>,
    pub verify: bool,
    pub audit_groebner: bool,
    pub checkpoint: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Checkpoint {
    pub fingerprint: String,
    pub stage: String,
    pub completed_rows: Vec<LambdaRow>,
}

#[derive(Clone, Debug)]
pub enum RunOutcome {
    Complete(Box<LengthReport>),
    Interrupted { checkpoint: PathBuf, stage: String },
}

/// Dense-entry ceiling for the one-step-up check.
const SHIFT_COST_LIMIT: u128 = 50_000_000;

fn ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

fn lyubeznik_entries(j: usize, lambda: usize) -> Vec<LyubeznikEntry> {
    // H^{n-j}_I = H^{n+1-(j+1)}_I ≅ E^λ, and Ext^i(k, E) is k for i = 0 only
    (0..=j + 1).map(|i| LyubeznikEntry { i, j: j + 1, value: if i == 0 { lambda } else { 0 } }).collect()
}

/// One report row.
pub fn compute_row(res: &FreeResolution, j: usize, path: PathChoice, budget: &Budget) -> Result<LambdaRow> {
    let start = Instant::now();
    let ring = &res.ring;
    let i = ext_index(ring, j)?;

    let ext = match path {
        PathChoice::Ext | PathChoice::Both => Some(compute_lambda(res, j, budget)?),
        PathChoice::Hassewitt => None,
    };
    let hw = match path {
        PathChoice::Hassewitt => Some(
            hasse_witt_for_row(res, j)?
                .ok_or_else(|| Error::InvalidInput("the hassewitt path needs a principal ideal".into()))?,
        ),
        PathChoice::Both => hasse_witt_for_row(res, j)?,
        PathChoice::Ext => None,
    };
    let hw_stable = hw.as_ref().map(stable_dim);

    let (lambda, source, op, stable, provenance) = match (&ext, &hw, &hw_stable) {
        (Some(e), _, _) => (e.lambda, RowSource::Ext, e.cartier.op.clone(), e.stable.clone(), Some(e.cartier.provenance.clone())),
        (None, Some(op), Some(st)) => (st.dim, RowSource::Hassewitt, op.clone(), st.clone(), None),
        _ => unreachable!("at least one path runs"),
    };

    budget.check()?;
    let ext_module = present_homology(res, i, budget)?;
    let ext_zero = ext_module.is_zero_module(budget)?;
    let finite_length = ext_zero || is_finite_length(&ext_module, budget)?;

    let (conclusion, detail, surjection_rank, lyubeznik) = if finite_length {
        let detail = if ext_zero {
            format!("Ext^{i}(R/I,R) = 0, so H^{i}_I(R) = 0")
        } else if lambda == 0 {
            format!("E-power rank 0; Ext^{i}(R/I,R) is nonzero of finite length")
        } else {
            format!("{lambda} is the largest t with an 𝓕-module surjection H^{i}_I(R) -> E^t (an isomorphism)")
        };
        (
            format!("H^{i}_I(R) ≅ E^{lambda}, 𝓕-length = {lambda}"),
            detail,
            Some(lambda),
            Lyubeznik::Entries(lyubeznik_entries(j, lambda)),
        )
    } else {
        (
            "Hom-dimension only (support hypothesis not verified)".to_string(),
            format!("dim_F_p Hom_𝓕(H^{i}_I(R), E) = {lambda}; Ext^{i}(R/I,R) does not have finite length"),
            None,
            Lyubeznik::NotComputed("not computed".into()),
        )
    };

    Ok(LambdaRow {
        j,
        ext_index: i,
        lambda,
        source,
        lambda_ext: ext.as_ref().map(|e| e.lambda),
        lambda_hasse_witt: hw_stable.as_ref().map(|s| s.dim),
        ext_piece_dim: op.dim(),
        stabilization_index: stable.index,
        image_ranks: stable.ranks,
        finite_length,
        ext_zero,
        conclusion,
        detail,
        surjection_rank,
        lyubeznik,
        cartier: op.serialize(),
        provenance,
        timing_ms: ms(start),
    })
}

/// Report without cache, checkpoint or budget.
pub fn length_report(spec: &ProblemSpec) -> Result<LengthReport> {
    match run(spec, &RunOptions::default())? {
        RunOutcome::Complete(r) => Ok(*r),
        RunOutcome::Interrupted { .. } => Err(Error::BudgetExceeded),
    }
}

fn load_checkpoint(path: &Path, fingerprint: &str) -> Vec<LambdaRow> {
    fs::read_to_string(path)
        .ok()
        .and_then(|s| serde_json::from_str::<Checkpoint>(&s).ok())
        .filter(|c| c.fingerprint == fingerprint)
        .map(|c| c.completed_rows)
        .unwrap_or_default()
}

fn save_checkpoint(path: &Path, fingerprint: &str, stage: &str, rows: &[LambdaRow]) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let c = Checkpoint { fingerprint: fingerprint.into(), stage: stage.into(), completed_rows: rows.to_vec() };
    fs::write(path, serde_json::to_string_pretty(&c)?)?;
    Ok(())
}

/// Full run. A budget overrun becomes [`RunOutcome::Interrupted`] when a
/// checkpoint path is configured; completed rows are kept and reused.
pub fn run(spec: &ProblemSpec, opts: &RunOptions) -> Result<RunOutcome> {
    let total = Instant::now();
    let budget = opts.budget_seconds.map(Budget::seconds).unwrap_or_default();
    let fingerprint = spec.fingerprint();
    let path = opts.path.unwrap_or(spec.input.path);
    let verify = opts.verify || spec.input.verify;
    let mut done: Vec<LambdaRow> = opts.checkpoint.as_deref().map(|p| load_checkpoint(p, &fingerprint)).unwrap_or_default();
    done.retain(|r| r.j >= spec.j_lo && r.j <= spec.j_hi);

    let interrupted = |stage: &str, rows: &[LambdaRow]| -> Result<RunOutcome> {
        match &opts.checkpoint {
            Some(p) => {
                save_checkpoint(p, &fingerprint, stage, rows)?;
                Ok(RunOutcome::Interrupted { checkpoint: p.clone(), stage: stage.into() })
            }
            None => Err(Error::BudgetExceeded),
        }
    };
    macro_rules! budgeted {
        ($e:expr, $stage:expr, $rows:expr) => {
            match $e {
                Err(Error::BudgetExceeded) => return interrupted($stage, $rows),
                other => other?,
            }
        };
    }

    let t = Instant::now();
    budgeted!(check_proper(&spec.ideal, &budget), "groebner", &done);
    let groebner_ms = ms(t);

    let t = Instant::now();
    let cache = opts.cache_dir.as_ref().map(ResolutionCache::new);
    let (res, status) = budgeted!(resolve(&spec.ideal, cache.as_ref(), &budget), "resolution", &done);
    let resolution_ms = ms(t);

    let t = Instant::now();
    let pending: Vec<usize> = (spec.j_lo..=spec.j_hi).filter(|j| done.iter().all(|r| r.j != *j)).collect();
    let results: Vec<Result<LambdaRow>> = pending.par_iter().map(|&j| compute_row(&res, j, path, &budget)).collect();
    let mut overrun = false;
    for r in results {
        match r {
            Ok(row) => done.push(row),
            Err(Error::BudgetExceeded) => overrun = true,
            Err(e) => return Err(e),
        }
    }
    done.sort_by_key(|r| r.j);
    if overrun {
        return interrupted("rows", &done);
    }
    let rows_ms = ms(t);

    let t = Instant::now();
    let mut transcript = Transcript { passed: true, checks: Vec::new() };
    if path == PathChoice::Both {
        dual_path_check(&mut transcript, &done);
    }
    if opts.audit_groebner && !verify {
        groebner_audit(&mut transcript, spec, &res);
    }
    if verify {
        budgeted!(verify_mode(&mut transcript, spec, &res, &done, &budget), "verification", &done);
    }
    let verification_ms = ms(t);

    if let Some(p) = &opts.checkpoint {
        let _ = fs::remove_file(p);
    }
    let ring = spec.ring();
    let report = LengthReport {
        field: ring.field().spec(),
        vars: ring.names().to_vec(),
        ideal: spec.ideal.gens().iter().map(|g| ring.format(g)).collect(),
        n: spec.n(),
        path,
        resolution: ResolutionSummary {
            ranks: res.ranks(),
            twists: (0..=res.length()).map(|k| res.module(k).twists).collect(),
            cache: serde_json::to_value(status)?.as_str().unwrap_or_default().to_string(),
            key: cache.as_ref().map(|_| cache::cache_key(&spec.ideal)),
        },
        rows: done,
        verification: (!transcript.checks.is_empty()).then_some(transcript),
        timings: Timings { groebner_ms, resolution_ms, rows_ms, verification_ms, total_ms: ms(total) },
    };
    Ok(RunOutcome::Complete(Box::new(report)))
}

fn dual_path_check(t: &mut Transcript, rows: &[LambdaRow]) {
    let mut detail = Vec::new();
    let mut ok = true;
    for r in rows {
        match (r.lambda_ext, r.lambda_hasse_witt) {
            (Some(a), Some(b)) => {
                ok &= a == b;
                detail.push(format!("j={}: ext {a}, hasse-witt {b}", r.j));
            }
            _ => detail.push(format!("j={}: hasse-witt not applicable", r.j)),
        }
    }
    t.push("dual_path", ok, detail.join("; "));
}

fn groebner_audit(t: &mut Transcript, spec: &ProblemSpec, res: &FreeResolution) {
    let ring = spec.ring();
    let ideal_ok = spec.ideal.gb().as_module().audit(ring);
    let lifters_ok = res.lifters.iter().all(|g| g.audit(ring));
    t.push(
        "groebner_audit",
        ideal_ok && lifters_ok,
        format!("ideal basis: {}, {} differential bases: {}", ok_word(ideal_ok), res.lifters.len(), ok_word(lifters_ok)),
    );
}

fn ok_word(b: bool) -> &'static str {
    if b {
        "all S-pairs reduce to zero"
    } else {
        "an S-pair has a nonzero remainder"
    }
}

fn compare<F: Fn(usize) -> Result<usize>>(rows: &[LambdaRow], f: F) -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for r in rows {
        let v = f(r.j)?;
        ok &= v == r.lambda;
        parts.push(format!("j={}: {} vs {}", r.j, r.lambda, v));
    }
    Ok((ok, parts.join("; ")))
}

/// The invariance and consistency checks, appended to `t`.
pub fn verify_mode(t: &mut Transcript, spec: &ProblemSpec, res: &FreeResolution, rows: &[LambdaRow], budget: &Budget) -> Result<()> {
    let ring = spec.ring();
    let field = ring.field();

    groebner_audit(t, spec, res);

    let valid = cache::validate(res).is_ok();
    let max_twist = res.module(res.length()).twists.iter().copied().max().unwrap_or(0);
    let bound = max_twist.max(6);
    let mut exact = true;
    for i in 1..=res.length() {
        for d in 0..=bound {
            budget.check()?;
            exact &= res.homology_dim(i, d) == 0;
        }
    }
    t.push(
        "resolution",
        valid && exact,
        format!("d∘d = 0: {valid}; homology of F_• vanishes in degrees 0..={bound}: {exact}"),
    );

    let pullback = frobenius_pullback(res);
    let lift = lift_chain_map(res, &pullback, budget)?;
    let commute = squares_commute(res, &pullback, &lift)?;
    t.push("chain_lift", commute, format!("d_i u_i = u_(i-1) (F^*d)_i for i <= {}", res.length()));

    if spec.input.path != PathChoice::Both && res.length() >= 1 && res.module(1).rank() == 1 {
        let (ok, detail) = compare(rows, |j| {
            let op = hasse_witt_for_row(res, j)?.expect("principal");
            Ok(stable_dim(&op).dim)
        })?;
        t.push("dual_path", ok, detail);
    }

    let (ok, detail) = compare(rows, |j| {
        let data = cartier_from_lift(res, &lift, j, 0)?;
        Ok(dual_stable_equivalence(&data.op).dim)
    })?;
    t.push("dual_operator", ok, detail);

    let mut well_defined = true;
    let mut perturbed = 0;
    for r in rows {
        budget.check()?;
        let data = cartier_from_lift(res, &lift, r.j, 0)?;
        let piece = &data.piece;
        for (k, z) in piece.basis().iter().enumerate() {
            for b in piece.boundaries.basis.iter().take(4) {
                let w: Vec<FqElem> = z.iter().zip(b).map(|(&x, &y)| field.add(x, y)).collect();
                let image = cartier_on_cocycle(res, &lift, piece, &w)?;
                let class = piece.classify(ring, &image)?;
                well_defined &= class == data.op.matrix.column(k);
                perturbed += 1;
            }
        }
    }
    t.push("well_defined", well_defined, format!("{perturbed} perturbed representatives"));

    let up = frobenius_pullback(res);
    let degree = -(ring.nvars() as i64);
    let cost = rows.iter().map(|r| ext_piece_cost(&up, r.ext_index, degree)).max().unwrap_or(0);
    if cost > SHIFT_COST_LIMIT {
        t.skip("generator_shift", format!("pulled-back Ext piece needs {cost} matrix entries (limit {SHIFT_COST_LIMIT})"));
    } else {
        let (ok, detail) = compare(rows, |j| Ok(stable_dim(&cartier_one_step_up(res, j, budget)?.op).dim))?;
        t.push("generator_shift", ok, detail);
    }

    let r = spec.input.extension_check.unwrap_or(2);
    let emb = field.extend(r)?;
    let big = spec.ideal.base_change(&emb);
    let (res_big, _) = resolve(&big, None, budget)?;
    let (ok, detail) = compare(rows, |j| Ok(compute_lambda(&res_big, j, budget)?.lambda))?;
    t.push("field_extension", ok, format!("over F_{}^{}: {detail}", field.characteristic(), emb.target.degree()));

    let mut gens = spec.ideal.gens().to_vec();
    gens.reverse();
    let permuted = Ideal::new(ring.clone(), gens)?;
    let (res_perm, _) = resolve(&permuted, None, budget)?;
    let (ok, detail) = compare(rows, |j| Ok(compute_lambda(&res_perm, j, budget)?.lambda))?;
    t.push("generator_permutation", ok, detail);

    let other = if ring.order() == MonomialOrder::Lex { MonomialOrder::Grevlex } else { MonomialOrder::Lex };
    let reordered = spec.ideal.reordered(other);
    let (res_ord, _) = resolve(&reordered, None, budget)?;
    let (ok, detail) = compare(rows, |j| Ok(compute_lambda(&res_ord, j, budget)?.lambda))?;
    t.push("order_change", ok, format!("{other:?}: {detail}"));
    Ok(())
}
