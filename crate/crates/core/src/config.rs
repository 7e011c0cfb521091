//! Experiment configuration read from TOML.
//!
//! Every field has a default, so an empty file is a valid configuration.
//! [`reference_config`] prints the full set with comments.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequences::{pi_dominated_weights, theorem1_weights, PiRule, PiTable, WeightSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Theorem1,
    Theorem2,
    Theorem3,
    HardyProps,
    OracleSuite,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["theorem1", "theorem2", "theorem3", "hardy-props", "oracle-suite", "all"];

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "theorem1" => Ok(Suite::Theorem1),
            "theorem2" => Ok(Suite::Theorem2),
            "theorem3" => Ok(Suite::Theorem3),
            "hardy-props" => Ok(Suite::HardyProps),
            "oracle-suite" => Ok(Suite::OracleSuite),
            "all" => Ok(Suite::All),
            other => Err(Error::Config(format!(
                "suite: unknown selector `{other}`, expected one of {}",
                Self::NAMES.join(", ")
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Theorem1 => "theorem1",
            Suite::Theorem2 => "theorem2",
            Suite::Theorem3 => "theorem3",
            Suite::HardyProps => "hardy-props",
            Suite::OracleSuite => "oracle-suite",
            Suite::All => "all",
        }
    }

    /// Whether a claim belonging to `member` runs under this selector.
    pub fn includes(self, member: Suite) -> bool {
        self == Suite::All || self == member
    }
}

/// Weight family as written in the config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum WeightSpec {
    Theorem1,
    Constant {
        value: f64,
    },
    Harmonic {
        #[serde(default = "one")]
        offset: f64,
    },
    PiDominated {
        #[serde(default)]
        pi: PiSpec,
    },
    /// First CSV column, placed at indices `start, start + 1, …`.
    Csv {
        path: PathBuf,
        #[serde(default)]
        start: i64,
        #[serde(default = "one")]
        fill: f64,
    },
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PiSpec {
    #[default]
    Harmonic,
    Geometric {
        ratio: f64,
    },
    PowerLaw {
        exponent: f64,
    },
}

impl WeightSpec {
    pub fn build(&self, key: &str) -> Result<WeightSequence> {
        let wrap = |e: Error| Error::Config(format!("{key}: {e}"));
        match self {
            WeightSpec::Theorem1 => Ok(theorem1_weights()),
            WeightSpec::Constant { value } => {
                if *value > 0.0 && value.is_finite() {
                    Ok(WeightSequence::constant(*value))
                } else {
                    Err(Error::Config(format!("{key}.value: must be positive and finite")))
                }
            }
            WeightSpec::Harmonic { offset } => {
                if *offset > 0.0 && offset.is_finite() {
                    Ok(WeightSequence::harmonic(*offset))
                } else {
                    Err(Error::Config(format!("{key}.offset: must be positive and finite")))
                }
            }
            WeightSpec::PiDominated { pi } => {
                let rule = match pi {
                    PiSpec::Harmonic => PiRule::Harmonic,
                    PiSpec::Geometric { ratio } => PiRule::Geometric { ratio: *ratio },
                    PiSpec::PowerLaw { exponent } => PiRule::PowerLaw { exponent: *exponent },
                };
                let table = PiTable::new(rule).map_err(|e| Error::Config(format!("{key}.pi: {e}")))?;
                pi_dominated_weights(table).map_err(wrap)
            }
            WeightSpec::Csv { path, start, fill } => {
                let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                    path: path.clone(),
                    source,
                })?;
                WeightSequence::from_csv_column(&text, *start, *fill).map_err(wrap)
            }
        }
    }

    pub fn pi_table(&self) -> Option<PiTable> {
        match self {
            WeightSpec::PiDominated { pi } => {
                let rule = match pi {
                    PiSpec::Harmonic => PiRule::Harmonic,
                    PiSpec::Geometric { ratio } => PiRule::Geometric { ratio: *ratio },
                    PiSpec::PowerLaw { exponent } => PiRule::PowerLaw { exponent: *exponent },
                };
                PiTable::new(rule).ok()
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub json: String,
    pub csv: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("shiftlab-out"),
            json: "report.json".into(),
            csv: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub resolvent: f64,
    pub similarity: f64,
    pub weak_bound: f64,
    pub svd: f64,
    pub duality: f64,
    pub dissipative: f64,
    pub hardy_crosscheck: f64,
    pub plemelj: f64,
    pub parseval: f64,
    pub growth_relative: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            resolvent: 1e-8,
            similarity: 1e-12,
            weak_bound: 1e-6,
            svd: 1e-10,
            duality: 1e-10,
            dissipative: 1e-10,
            hardy_crosscheck: 1e-8,
            plemelj: 1e-4,
            parseval: 1e-6,
            growth_relative: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Theorem1Config {
    pub similarity_window: i64,
    pub weak_window: i64,
    pub weak_bound: f64,
    pub divergence_j: Vec<u64>,
    pub divergence_floor: f64,
    pub divergence_slope: f64,
    pub divergence_slope_tol: f64,
    pub schatten_n: Vec<u64>,
    pub schatten_slope: f64,
    pub schatten_slope_tol: f64,
    pub p_grid: Vec<f64>,
    pub pi_n_max: u64,
    pub pi_scan_half_width: i64,
}

impl Default for Theorem1Config {
    fn default() -> Self {
        Self {
            similarity_window: 100,
            weak_window: 200,
            weak_bound: 2.0,
            divergence_j: vec![1_000, 10_000, 100_000],
            divergence_floor: 1.5,
            divergence_slope: 4.0,
            divergence_slope_tol: 0.1,
            schatten_n: vec![1_000, 10_000, 100_000],
            schatten_slope: 4.0,
            schatten_slope_tol: 0.2,
            p_grid: crate::schatten::DEFAULT_P_GRID.to_vec(),
            pi_n_max: 100_000,
            pi_scan_half_width: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleConfig {
    pub resolvent_points: usize,
    pub resolvent_gap: f64,
    pub section_half_width: usize,
    pub interior_margin: usize,
    pub dissipative_trials: u64,
    pub dissipative_dim: usize,
    pub taus: Vec<f64>,
    pub slope: f64,
    pub slope_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            resolvent_points: 20,
            resolvent_gap: 0.1,
            section_half_width: 256,
            interior_margin: 64,
            dissipative_trials: 50,
            dissipative_dim: 8,
            taus: vec![1e2, 1e3, 1e4],
            slope: -1.0,
            slope_tol: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Theorem2Config {
    pub radii: Vec<f64>,
    pub parseval_t: f64,
    pub parseval_x: f64,
    pub bump_half_width: f64,
    pub bs_delta: f64,
    pub bs_cells: u64,
    pub weight_scan: [f64; 2],
    pub weight_samples: usize,
    pub weight_slack: f64,
}

impl Default for Theorem2Config {
    fn default() -> Self {
        Self {
            radii: vec![1e2, 1e3, 1e4],
            parseval_t: 10.0,
            parseval_x: crate::linemodel::DEFAULT_GRID_HALF_WIDTH,
            bump_half_width: 0.5,
            bs_delta: 1.5,
            bs_cells: 2_000,
            weight_scan: [-1e3, 1e3],
            weight_samples: 4_001,
            weight_slack: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Theorem3Config {
    pub svd_half_width: usize,
    pub duality_check_j: i64,
    pub duality_j: Vec<i64>,
    pub duality_r_squared: f64,
    pub jump_angles: usize,
    pub jump_eps: Vec<f64>,
    pub jump_ratio: f64,
    pub jump_min_angles: usize,
    pub jump_test_half_width: i64,
}

impl Default for Theorem3Config {
    fn default() -> Self {
        Self {
            svd_half_width: 128,
            duality_check_j: -12,
            duality_j: vec![-100, -1_000, -10_000],
            duality_r_squared: 0.99,
            jump_angles: 32,
            jump_eps: vec![0.1, 0.05, 0.025, 0.0125],
            jump_ratio: 10.0,
            jump_min_angles: 16,
            jump_test_half_width: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HardyConfig {
    pub radial_depth: u32,
    pub plemelj_intervals: usize,
    pub plemelj_eps: Vec<f64>,
}

impl Default for HardyConfig {
    fn default() -> Self {
        Self {
            radial_depth: 40,
            plemelj_intervals: 2_000,
            plemelj_eps: vec![0.1, 0.05, 0.025, 0.0125, 0.00625],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub suite: Suite,
    pub seed: u64,
    /// Worker threads; 0 uses every available core.
    pub workers: usize,
    pub weights: WeightSpec,
    pub coupling: WeightSpec,
    pub output: OutputConfig,
    pub tolerances: Tolerances,
    pub theorem1: Theorem1Config,
    pub theorem2: Theorem2Config,
    pub theorem3: Theorem3Config,
    pub hardy: HardyConfig,
    pub oracle: OracleConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            suite: Suite::All,
            seed: 20_240_917,
            workers: 0,
            weights: WeightSpec::Theorem1,
            coupling: WeightSpec::Harmonic { offset: 1.0 },
            output: OutputConfig::default(),
            tolerances: Tolerances::default(),
            theorem1: Theorem1Config::default(),
            theorem2: Theorem2Config::default(),
            theorem3: Theorem3Config::default(),
            hardy: HardyConfig::default(),
            oracle: OracleConfig::default(),
        }
    }
}

fn positive(key: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("{key}: must be positive and finite (got {v})")))
    }
}

fn nonempty<T>(key: &str, v: &[T]) -> Result<()> {
    if v.is_empty() {
        Err(Error::Config(format!("{key}: must not be empty")))
    } else {
        Ok(())
    }
}

fn decreasing(key: &str, v: &[f64]) -> Result<()> {
    nonempty(key, v)?;
    if v.len() < 2 || v.windows(2).any(|w| !(w[1] < w[0])) || v.iter().any(|x| !(*x > 0.0)) {
        return Err(Error::Config(format!("{key}: needs at least two positive, strictly decreasing values")));
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| {
            let key = e.span().and_then(|span| key_at(text, span.start));
            match key {
                Some(key) => Error::Config(format!("{key}: {}", e.message())),
                None => Error::Config(e.to_string()),
            }
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    /// Canonical TOML form, used for hashing.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Check every invariant and name the first offending key.
    pub fn validate(&self) -> Result<()> {
        let t = &self.tolerances;
        for (k, v) in [
            ("tolerances.resolvent", t.resolvent),
            ("tolerances.similarity", t.similarity),
            ("tolerances.weak_bound", t.weak_bound),
            ("tolerances.svd", t.svd),
            ("tolerances.duality", t.duality),
            ("tolerances.dissipative", t.dissipative),
            ("tolerances.hardy_crosscheck", t.hardy_crosscheck),
            ("tolerances.plemelj", t.plemelj),
            ("tolerances.parseval", t.parseval),
            ("tolerances.growth_relative", t.growth_relative),
        ] {
            positive(k, v)?;
        }
        self.weights.build("weights")?;
        self.coupling.build("coupling")?;
        if self.output.json.is_empty() {
            return Err(Error::Config("output.json: file name must not be empty".into()));
        }

        let t1 = &self.theorem1;
        if t1.similarity_window < 0 {
            return Err(Error::Config("theorem1.similarity_window: must be nonnegative".into()));
        }
        if t1.weak_window < 0 {
            return Err(Error::Config("theorem1.weak_window: must be nonnegative".into()));
        }
        positive("theorem1.weak_bound", t1.weak_bound)?;
        nonempty("theorem1.divergence_j", &t1.divergence_j)?;
        if t1.divergence_j.len() < 2 || t1.divergence_j.iter().any(|&j| j < 2) {
            return Err(Error::Config("theorem1.divergence_j: need at least two values ≥ 2".into()));
        }
        positive("theorem1.divergence_slope_tol", t1.divergence_slope_tol)?;
        if t1.schatten_n.len() < 2 || t1.schatten_n.iter().any(|&n| n < 2) {
            return Err(Error::Config("theorem1.schatten_n: need at least two values ≥ 2".into()));
        }
        positive("theorem1.schatten_slope_tol", t1.schatten_slope_tol)?;
        nonempty("theorem1.p_grid", &t1.p_grid)?;
        for &p in &t1.p_grid {
            positive("theorem1.p_grid", p)?;
        }
        if !t1.p_grid.contains(&1.0) || !t1.p_grid.contains(&1.5) {
            return Err(Error::Config("theorem1.p_grid: must contain 1 and 1.5".into()));
        }
        if t1.pi_scan_half_width < 0 || (2 * t1.pi_scan_half_width + 1) as u64 <= t1.pi_n_max {
            return Err(Error::Config(
                "theorem1.pi_scan_half_width: window must hold more than pi_n_max values".into(),
            ));
        }

        let o = &self.oracle;
        if o.resolvent_points == 0 {
            return Err(Error::Config("oracle.resolvent_points: must be at least 1".into()));
        }
        positive("oracle.resolvent_gap", o.resolvent_gap)?;
        if o.resolvent_gap < crate::resolvent::ORACLE_GAP_FLOOR {
            return Err(Error::Config("oracle.resolvent_gap: below the dense-oracle floor 1e-3".into()));
        }
        if o.interior_margin >= o.section_half_width || o.section_half_width > crate::operators::MAX_SECTION_HALF_WIDTH {
            return Err(Error::Config(
                "oracle.section_half_width: must exceed interior_margin and stay within the resource guard".into(),
            ));
        }
        if o.dissipative_trials == 0 || o.dissipative_dim == 0 {
            return Err(Error::Config("oracle.dissipative_trials: trials and dimension must be positive".into()));
        }
        if o.taus.len() < 2 || o.taus.iter().any(|t| !(*t > 0.0)) {
            return Err(Error::Config("oracle.taus: need at least two positive values".into()));
        }
        positive("oracle.slope_tol", o.slope_tol)?;

        let t2 = &self.theorem2;
        if t2.radii.len() < 2 || t2.radii.iter().any(|r| !(*r > 1.0)) {
            return Err(Error::Config("theorem2.radii: need at least two radii above 1".into()));
        }
        positive("theorem2.parseval_t", t2.parseval_t)?;
        positive("theorem2.parseval_x", t2.parseval_x)?;
        positive("theorem2.bump_half_width", t2.bump_half_width)?;
        if !(t2.bs_delta > 1.0 && t2.bs_delta < 2.0) {
            return Err(Error::Config("theorem2.bs_delta: must lie in (1, 2)".into()));
        }
        if t2.bs_cells < 2 {
            return Err(Error::Config("theorem2.bs_cells: must be at least 2".into()));
        }
        if !(t2.weight_scan[0] < t2.weight_scan[1]) || t2.weight_samples < 2 {
            return Err(Error::Config("theorem2.weight_scan: need lo < hi and at least two samples".into()));
        }
        positive("theorem2.weight_slack", t2.weight_slack)?;

        let t3 = &self.theorem3;
        if t3.svd_half_width == 0 || t3.svd_half_width > crate::operators::MAX_SECTION_HALF_WIDTH {
            return Err(Error::Config("theorem3.svd_half_width: out of range".into()));
        }
        if t3.duality_j.len() < 2 || t3.duality_j.iter().any(|&j| j > -3) {
            return Err(Error::Config("theorem3.duality_j: need at least two indices ≤ −3".into()));
        }
        if t3.duality_check_j > -3 {
            return Err(Error::Config("theorem3.duality_check_j: must be ≤ −3".into()));
        }
        if !(t3.duality_r_squared > 0.0 && t3.duality_r_squared <= 1.0) {
            return Err(Error::Config("theorem3.duality_r_squared: must lie in (0, 1]".into()));
        }
        if t3.jump_angles == 0 || t3.jump_min_angles > t3.jump_angles {
            return Err(Error::Config("theorem3.jump_angles: need jump_min_angles ≤ jump_angles and at least one angle".into()));
        }
        decreasing("theorem3.jump_eps", &t3.jump_eps)?;
        if t3.jump_eps[0] >= 1.0 {
            return Err(Error::Config("theorem3.jump_eps: values must lie below 1".into()));
        }
        positive("theorem3.jump_ratio", t3.jump_ratio)?;
        if t3.jump_test_half_width < 0 {
            return Err(Error::Config("theorem3.jump_test_half_width: must be nonnegative".into()));
        }

        let h = &self.hardy;
        if h.radial_depth == 0 || h.radial_depth > 52 {
            return Err(Error::Config("hardy.radial_depth: must lie in 1..=52".into()));
        }
        if h.plemelj_intervals < 2 || !h.plemelj_intervals.is_multiple_of(2) {
            return Err(Error::Config("hardy.plemelj_intervals: must be even and at least 2".into()));
        }
        decreasing("hardy.plemelj_eps", &h.plemelj_eps)?;
        Ok(())
    }
}

/// Dotted key path (`section.key`) of the assignment containing `offset`.
fn key_at(text: &str, offset: usize) -> Option<String> {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line_start = before.rfind('\n').map_or(0, |i| i + 1);
    let line_end = text[offset..].find('\n').map_or(text.len(), |i| offset + i);
    let line = &text[line_start..line_end];
    let key = line.split_once('=').map(|(k, _)| k.trim().trim_matches('"').to_string());
    let section = before[..line_start]
        .lines()
        .rev()
        .map(str::trim)
        .find(|l| l.starts_with('[') && l.ends_with(']'))
        .map(|l| l.trim_matches(|c| c == '[' || c == ']').trim().to_string());
    match (section, key) {
        (Some(s), Some(k)) if !k.is_empty() => Some(format!("{s}.{k}")),
        (None, Some(k)) if !k.is_empty() => Some(k),
        (Some(s), _) => Some(s),
        _ => None,
    }
}

/// Reference configuration with every default spelled out.
pub fn reference_config() -> String {
    let d = ExperimentConfig::default();
    format!(
        r#"# shiftlab reference configuration. Every key is optional; the values below
# are the defaults.

# theorem1 | theorem2 | theorem3 | hardy-props | oracle-suite | all
suite = "{suite}"
# Seed for every pseudo-random draw (spectral points, random dissipative operators).
seed = {seed}
# Worker threads for running claims in parallel; 0 uses every core.
workers = {workers}

# Weight sequence of the single shift.
# family = "theorem1" | "constant" (value) | "harmonic" (offset)
#        | "pi-dominated" (pi = {{ rule = "harmonic" | "geometric" | "power-law" }})
#        | "csv" (path, start, fill)
[weights]
family = "theorem1"

# Coupling sequence ρ_{{|n|}} of the block operator; defaults to ρ_n = 1/(|n| + 1).
[coupling]
family = "harmonic"
offset = 1.0

[output]
dir = "{dir}"
json = "{json}"
# Write CSV extracts of growth tables, sweeps and singular values.
csv = {csv}

[tolerances]
# Closed-form resolvent against the dense periodic section (max relative error).
resolvent = {t_res:e}
# Deviation of W⁻¹TW from the unweighted shift.
similarity = {t_sim:e}
# Slack on the uniform H² bound of weak matrix elements.
weak_bound = {t_weak:e}
# Analytic singular values against a dense SVD.
svd = {t_svd:e}
# Duality norm against the brute-force coefficient expansion.
duality = {t_dual:e}
# Residual of the dissipative identity.
dissipative = {t_diss:e}
# Exact H² norm against circle quadrature.
hardy_crosscheck = {t_hardy:e}
# Recovered boundary jump against the density.
plemelj = {t_ple:e}
# Both sides of the translation identity for a compact potential.
parseval = {t_par:e}
# Relative tolerance on the growth slope of ∫|q|.
growth_relative = {t_grow}

[theorem1]
# Similarity checked on |j| ≤ similarity_window.
similarity_window = {sim_w}
# Weak matrix elements examined for |j| ≤ weak_window.
weak_window = {weak_w}
# Uniform bound ‖W‖‖W⁻¹‖ for the interleaved family.
weak_bound = {weak_b:?}
# Partial sums S_2J of the defect-weighted series at these J.
divergence_j = {div_j:?}
# Require S_2J ≥ divergence_floor · ln J.
divergence_floor = {div_floor:?}
# Expected slope of S_2J against ln J and its tolerance.
divergence_slope = {div_slope:?}
divergence_slope_tol = {div_tol:?}
# Σ_{{|j|≤N}} |1 − ρ_j²| at these N; expected slope against ln N.
schatten_n = {sch_n:?}
schatten_slope = {sch_slope:?}
schatten_slope_tol = {sch_tol:?}
# Exponents for the ℓ^p summability verdicts.
p_grid = {p_grid:?}
# π-domination checked for n ≤ pi_n_max, scanning |j| ≤ pi_scan_half_width.
pi_n_max = {pi_n}
pi_scan_half_width = {pi_w}

[theorem2]
# Truncation radii X for ∫_{{−X}}^{{X}} |sin x / x| dx.
radii = {radii:?}
# Translation window T and box X for the translation identity.
parseval_t = {par_t:?}
parseval_x = {par_x:?}
bump_half_width = {bump:?}
# Cell-wise summability exponent and number of cells on each side.
bs_delta = {bs_d:?}
bs_cells = {bs_n}
# Interval and sample count of the similarity-weight scan.
weight_scan = {ws:?}
weight_samples = {wn}
weight_slack = {wslack:e}

[theorem3]
# Half-width of the dense section for the SVD comparison.
svd_half_width = {svd_n}
# Index with a closed-form duality value (H_|j| − 1)².
duality_check_j = {dcj}
# Indices for the (ln|j|)² growth fit and the minimum R².
duality_j = {dj:?}
duality_r_squared = {dr2:?}
# Boundary-jump probe: angles, radial offsets, ratio threshold, angles required.
jump_angles = {ja}
jump_eps = {je:?}
jump_ratio = {jr:?}
jump_min_angles = {jm}
# Test vectors (e_j, 0) and (0, e_j) for |j| ≤ jump_test_half_width.
jump_test_half_width = {jt}

[hardy]
# Radii r_m = 1 − 2^(−m), m = 1..radial_depth.
radial_depth = {depth}
plemelj_intervals = {pi_int}
plemelj_eps = {pe:?}

[oracle]
# Random spectral points with ||λ| − 1| ≥ resolvent_gap.
resolvent_points = {rp}
resolvent_gap = {rg:?}
section_half_width = {shw}
interior_margin = {im}
# Random dissipative operators L = A + iV.
dissipative_trials = {dt}
dissipative_dim = {dd}
# τ schedule for ‖iτ(L + iτ)⁻¹u − u‖ and the expected log-log slope.
taus = {taus:?}
slope = {slope:?}
slope_tol = {stol:?}
"#,
        suite = d.suite.name(),
        seed = d.seed,
        workers = d.workers,
        dir = d.output.dir.display(),
        json = d.output.json,
        csv = d.output.csv,
        t_res = d.tolerances.resolvent,
        t_sim = d.tolerances.similarity,
        t_weak = d.tolerances.weak_bound,
        t_svd = d.tolerances.svd,
        t_dual = d.tolerances.duality,
        t_diss = d.tolerances.dissipative,
        t_hardy = d.tolerances.hardy_crosscheck,
        t_ple = d.tolerances.plemelj,
        t_par = d.tolerances.parseval,
        t_grow = d.tolerances.growth_relative,
        sim_w = d.theorem1.similarity_window,
        weak_w = d.theorem1.weak_window,
        weak_b = d.theorem1.weak_bound,
        div_j = d.theorem1.divergence_j,
        div_floor = d.theorem1.divergence_floor,
        div_slope = d.theorem1.divergence_slope,
        div_tol = d.theorem1.divergence_slope_tol,
        sch_n = d.theorem1.schatten_n,
        sch_slope = d.theorem1.schatten_slope,
        sch_tol = d.theorem1.schatten_slope_tol,
        p_grid = d.theorem1.p_grid,
        pi_n = d.theorem1.pi_n_max,
        pi_w = d.theorem1.pi_scan_half_width,
        radii = d.theorem2.radii,
        par_t = d.theorem2.parseval_t,
        par_x = d.theorem2.parseval_x,
        bump = d.theorem2.bump_half_width,
        bs_d = d.theorem2.bs_delta,
        bs_n = d.theorem2.bs_cells,
        ws = d.theorem2.weight_scan,
        wn = d.theorem2.weight_samples,
        wslack = d.theorem2.weight_slack,
        svd_n = d.theorem3.svd_half_width,
        dcj = d.theorem3.duality_check_j,
        dj = d.theorem3.duality_j,
        dr2 = d.theorem3.duality_r_squared,
        ja = d.theorem3.jump_angles,
        je = d.theorem3.jump_eps,
        jr = d.theorem3.jump_ratio,
        jm = d.theorem3.jump_min_angles,
        jt = d.theorem3.jump_test_half_width,
        depth = d.hardy.radial_depth,
        pi_int = d.hardy.plemelj_intervals,
        pe = d.hardy.plemelj_eps,
        rp = d.oracle.resolvent_points,
        rg = d.oracle.resolvent_gap,
        shw = d.oracle.section_half_width,
        im = d.oracle.interior_margin,
        dt = d.oracle.dissipative_trials,
        dd = d.oracle.dissipative_dim,
        taus = d.oracle.taus,
        slope = d.oracle.slope,
        stol = d.oracle.slope_tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_config_round_trips_to_defaults() {
        let cfg = ExperimentConfig::from_toml_str(&reference_config()).unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
        assert_eq!(ExperimentConfig::from_toml_str("").unwrap(), ExperimentConfig::default());
    }

    #[test]
    fn errors_name_the_key() {
        let e = ExperimentConfig::from_toml_str("[weights]\nfamily = \"bogus\"\n").unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("bogus") && msg.contains("weights"), "{msg}");
        let e = ExperimentConfig::from_toml_str("[tolerances]\nsvd = -1.0\n").unwrap_err();
        assert!(e.to_string().contains("tolerances.svd"));
        let e = ExperimentConfig::from_toml_str("[weights]\nfamily = \"harmonic\"\noffset = 0.0\n").unwrap_err();
        assert!(e.to_string().contains("weights.offset"));
        let e = ExperimentConfig::from_toml_str("suite = \"theorem9\"\n").unwrap_err();
        assert!(e.to_string().contains("theorem9"));
        let e = ExperimentConfig::from_toml_str("[theorem3]\nsvd_n = 3\n").unwrap_err();
        assert!(e.to_string().contains("svd_n"));
    }

    #[test]
    fn suite_selection() {
        assert!(Suite::All.includes(Suite::Theorem2));
        assert!(!Suite::Theorem1.includes(Suite::Theorem3));
        assert_eq!(Suite::parse("hardy-props").unwrap(), Suite::HardyProps);
        assert!(Suite::parse("nope").is_err());
    }
}
