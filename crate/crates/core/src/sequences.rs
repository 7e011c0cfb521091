//! Weight sequences `ρ_j`, `j ∈ ℤ`, that parametrize the shift operators.
//!
//! The interleaved families use pairs `ρ_{2j} = a_j`, `ρ_{2j+1} = 1/a_j`
//! for `j ≥ 1` and `ρ_j = 1` for `j ≤ 1`. With `a_j → 1` slowly enough the
//! pairs telescope in every product while `Σ |1 − a_j|` diverges.
//!
//! The canonical family uses `a_j = 1 − 1/(j+1)`. The unshifted choice
//! `1 − 1/j` vanishes at `j = 1`, which would make `ρ_2 = 0`; the shift by
//! one keeps every weight positive and changes none of the asymptotics.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::series::{SeriesCertificate, TailRule};

/// Recorded in reports wherever the canonical interleaved family is used.
pub const REINDEXING_NOTE: &str =
    "interleaved weights use a_j = 1 - 1/(j+1) (j >= 1) so that every weight is positive; \
     rho_j = 1 for j <= 1, rho_2j = a_j, rho_2j+1 = 1/a_j";

/// Monotone decreasing positive sequence `π_n`, `n ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum PiRule {
    /// `π_n = 1/(n+1)`
    Harmonic,
    /// `π_n = c`
    Constant { value: f64 },
    /// `π_n = ratio^n`
    Geometric { ratio: f64 },
    /// `π_n = (n+1)^(−exponent)`
    PowerLaw { exponent: f64 },
    /// Explicit values; the last value is repeated past the end.
    Table { values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiTable {
    rule: PiRule,
}

impl PiTable {
    pub fn new(rule: PiRule) -> Result<Self> {
        match &rule {
            PiRule::Harmonic => {}
            PiRule::Constant { value } => {
                if !(*value > 0.0 && value.is_finite()) {
                    return Err(invalid("pi.value", "must be positive and finite"));
                }
            }
            PiRule::Geometric { ratio } => {
                if !(*ratio > 0.0 && *ratio <= 1.0) {
                    return Err(invalid("pi.ratio", "must lie in (0, 1]"));
                }
            }
            PiRule::PowerLaw { exponent } => {
                if !(*exponent >= 0.0 && exponent.is_finite()) {
                    return Err(invalid("pi.exponent", "must be nonnegative"));
                }
            }
            PiRule::Table { values } => {
                if values.is_empty() {
                    return Err(invalid("pi.values", "table is empty"));
                }
                if values.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
                    return Err(invalid("pi.values", "entries must be positive and finite"));
                }
                if values.windows(2).any(|w| w[1] > w[0]) {
                    return Err(invalid("pi.values", "table must be monotone decreasing"));
                }
            }
        }
        Ok(Self { rule })
    }

    pub fn harmonic() -> Self {
        Self {
            rule: PiRule::Harmonic,
        }
    }

    pub fn rule(&self) -> &PiRule {
        &self.rule
    }

    pub fn value(&self, n: u64) -> f64 {
        match &self.rule {
            PiRule::Harmonic => 1.0 / (n as f64 + 1.0),
            PiRule::Constant { value } => *value,
            PiRule::Geometric { ratio } => ratio.powf(n as f64),
            PiRule::PowerLaw { exponent } => (n as f64 + 1.0).powf(-exponent),
            PiRule::Table { values } => values[(n as usize).min(values.len() - 1)],
        }
    }

    /// Whether `Σ π_n < ∞`, decided analytically from the rule.
    pub fn is_summable(&self) -> bool {
        match &self.rule {
            PiRule::Harmonic | PiRule::Constant { .. } => false,
            PiRule::Geometric { ratio } => *ratio < 1.0,
            PiRule::PowerLaw { exponent } => *exponent > 1.0,
            // the last entry is repeated forever
            PiRule::Table { .. } => false,
        }
    }

    /// Partial sum of the first `n` values plus the analytic tail.
    pub fn sum_certificate(&self, n: u64) -> SeriesCertificate {
        let rule = match &self.rule {
            PiRule::Geometric { ratio } if *ratio < 1.0 => TailRule::Geometric {
                scale: 1.0,
                ratio: *ratio,
            },
            PiRule::PowerLaw { exponent } => TailRule::Power {
                scale: 1.0,
                exponent: *exponent,
                shift: -1.0,
            },
            _ => TailRule::None,
        };
        SeriesCertificate::from_terms((0..n).map(|k| self.value(k)), rule)
    }
}

/// One side of a deviation envelope for `|ρ_{±m} − 1|`, `m ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SideEnvelope {
    /// `ρ_{±m} = 1` for `m ≥ from`.
    Zero { from: i64 },
    /// `|ρ_{±m} − 1| ≤ scale · (m − shift)^(−exponent)` for `m ≥ from`, `m > shift`.
    Power {
        scale: f64,
        exponent: f64,
        shift: f64,
        from: i64,
    },
}

impl SideEnvelope {
    /// Bound on `Σ_{m > n} |ρ_{±m} − 1|^p`.
    pub fn tail_sum(&self, p: f64, n: i64) -> Option<f64> {
        match *self {
            SideEnvelope::Zero { from } => (from <= n + 1).then_some(0.0),
            SideEnvelope::Power {
                scale,
                exponent,
                shift,
                from,
            } => {
                let e = exponent * p;
                if from > n + 1 || e <= 1.0 || (n as f64) <= shift {
                    return None;
                }
                Some(scale.powf(p) * (n as f64 - shift).powf(1.0 - e) / (e - 1.0))
            }
        }
    }

    /// Envelope value at `m`, if `m` is inside the validity range.
    pub fn at(&self, m: i64) -> Option<f64> {
        match *self {
            SideEnvelope::Zero { from } => (m >= from).then_some(0.0),
            SideEnvelope::Power {
                scale,
                exponent,
                shift,
                from,
            } => (m >= from && (m as f64) > shift).then(|| scale * (m as f64 - shift).powf(-exponent)),
        }
    }

    fn translated(self, delta: i64) -> Self {
        match self {
            SideEnvelope::Zero { from } => SideEnvelope::Zero {
                from: (from + delta).max(0),
            },
            SideEnvelope::Power {
                scale,
                exponent,
                shift,
                from,
            } => SideEnvelope::Power {
                scale,
                exponent,
                shift: shift + delta as f64,
                from: (from + delta).max(0),
            },
        }
    }
}

/// `Π_{i<n} x_i ≤ k · sigma^n` for the products a resolvent tail multiplies by.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductEnvelope {
    pub k: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum WeightFamily {
    Constant { value: f64 },
    Theorem1Interleaved,
    /// `ρ_j = 1/(|j| + offset)`
    Harmonic { offset: f64 },
    PiDominated { pi: PiTable },
    /// Explicit weights on `[start, start + values.len())`, `fill` elsewhere.
    UserTable { start: i64, values: Vec<f64>, fill: f64 },
}

impl WeightFamily {
    pub fn name(&self) -> &'static str {
        match self {
            WeightFamily::Constant { .. } => "constant",
            WeightFamily::Theorem1Interleaved => "theorem1-interleaved",
            WeightFamily::Harmonic { .. } => "harmonic",
            WeightFamily::PiDominated { .. } => "pi-dominated",
            WeightFamily::UserTable { .. } => "user-table",
        }
    }
}

/// Immutable weight sequence; `rho(j) = family(j + translation)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSequence {
    family: WeightFamily,
    #[serde(default)]
    translation: i64,
}

impl WeightSequence {
    pub fn new(family: WeightFamily) -> Result<Self> {
        match &family {
            WeightFamily::Constant { value } => {
                if !(*value > 0.0 && value.is_finite()) {
                    return Err(invalid("weights.value", "constant weight must be positive and finite"));
                }
            }
            WeightFamily::Harmonic { offset } => {
                if !(*offset > 0.0 && offset.is_finite()) {
                    return Err(invalid("weights.offset", "harmonic offset must be positive"));
                }
            }
            WeightFamily::PiDominated { pi } => {
                if pi.is_summable() {
                    let cert = pi.sum_certificate(1000);
                    return Err(Error::SummablePi {
                        partial_sum: cert.partial_sum,
                    });
                }
            }
            WeightFamily::UserTable { values, fill, .. } => {
                if values.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
                    return Err(invalid("weights.values", "weights must be positive and finite"));
                }
                if !(*fill > 0.0 && fill.is_finite()) {
                    return Err(invalid("weights.fill", "fill must be positive and finite"));
                }
            }
            WeightFamily::Theorem1Interleaved => {}
        }
        Ok(Self {
            family,
            translation: 0,
        })
    }

    pub fn constant(value: f64) -> Self {
        Self::new(WeightFamily::Constant { value }).expect("positive constant")
    }

    pub fn unit() -> Self {
        Self::constant(1.0)
    }

    pub fn harmonic(offset: f64) -> Self {
        Self::new(WeightFamily::Harmonic { offset }).expect("positive offset")
    }

    /// Parse one weight per line (first CSV column); `#` lines and a
    /// non-numeric header are skipped.
    pub fn from_csv_column(text: &str, start: i64, fill: f64) -> Result<Self> {
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let field = line.split(',').next().unwrap_or("").trim();
            match field.parse::<f64>() {
                Ok(v) => values.push(v),
                Err(_) if values.is_empty() && lineno == 0 => continue,
                Err(_) => {
                    return Err(invalid(
                        "weights.csv",
                        format!("line {}: `{field}` is not a number", lineno + 1),
                    ))
                }
            }
        }
        Self::new(WeightFamily::UserTable { start, values, fill })
    }

    pub fn family(&self) -> &WeightFamily {
        &self.family
    }

    pub fn translation(&self) -> i64 {
        self.translation
    }

    /// `ρ'_j = ρ_{j + delta}`.
    pub fn translated(&self, delta: i64) -> Self {
        Self {
            family: self.family.clone(),
            translation: self.translation + delta,
        }
    }

    pub fn is_interleaved(&self) -> bool {
        matches!(
            self.family,
            WeightFamily::Theorem1Interleaved | WeightFamily::PiDominated { .. }
        )
    }

    /// Pair value `a_j`, `j ≥ 1`, for interleaved families.
    pub fn pair_value(&self, j: i64) -> Option<f64> {
        if j < 1 {
            return None;
        }
        match &self.family {
            WeightFamily::Theorem1Interleaved => Some(j as f64 / (j as f64 + 1.0)),
            WeightFamily::PiDominated { pi } => Some(1.0 - pi_deficit(pi, j)),
            _ => None,
        }
    }

    pub fn rho(&self, j: i64) -> f64 {
        let j = j + self.translation;
        match &self.family {
            WeightFamily::Constant { value } => *value,
            WeightFamily::Harmonic { offset } => 1.0 / (j.unsigned_abs() as f64 + offset),
            WeightFamily::UserTable { start, values, fill } => {
                let k = j - start;
                if k >= 0 && (k as usize) < values.len() {
                    values[k as usize]
                } else {
                    *fill
                }
            }
            WeightFamily::Theorem1Interleaved | WeightFamily::PiDominated { .. } => {
                if j <= 1 {
                    1.0
                } else {
                    let a = self.pair_value(j / 2).expect("interleaved");
                    if j % 2 == 0 {
                        a
                    } else {
                        1.0 / a
                    }
                }
            }
        }
    }

    /// `Σ_{i=lo}^{hi-1} ln ρ_i` (zero for an empty range).
    pub fn log_product(&self, lo: i64, hi: i64) -> f64 {
        (lo..hi).map(|i| self.rho(i).ln()).sum()
    }

    /// Infimum and supremum of `ρ` over `[lo, hi]`.
    pub fn range_bounds(&self, lo: i64, hi: i64) -> (f64, f64) {
        (lo..=hi).fold((f64::INFINITY, 0.0f64), |(a, b), j| {
            let r = self.rho(j);
            (a.min(r), b.max(r))
        })
    }

    /// Deviation envelope on the positive (`up = true`) or negative side.
    pub fn deviation_envelope(&self, up: bool) -> SideEnvelope {
        let t = self.translation;
        let base = match (&self.family, up) {
            (WeightFamily::Constant { value }, _) => constant_envelope(*value),
            (WeightFamily::Harmonic { offset }, _) => SideEnvelope::Power {
                scale: 1.0f64.max((1.0 / offset - 1.0).abs()),
                exponent: 0.0,
                shift: -1.0,
                from: 0,
            },
            (WeightFamily::UserTable { start, values, fill }, up) => {
                let beyond = if up {
                    start + values.len() as i64
                } else {
                    -start + 1
                };
                match constant_envelope(*fill) {
                    SideEnvelope::Zero { .. } => SideEnvelope::Zero { from: beyond.max(0) },
                    SideEnvelope::Power {
                        scale,
                        exponent,
                        shift,
                        ..
                    } => SideEnvelope::Power {
                        scale: scale.max(
                            values.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max),
                        ),
                        exponent,
                        shift,
                        from: 0,
                    },
                }
            }
            // |ρ_n − 1| ≤ 2/(n − 1), n ≥ 2
            (WeightFamily::Theorem1Interleaved, true) => SideEnvelope::Power {
                scale: 2.0,
                exponent: 1.0,
                shift: 1.0,
                from: 2,
            },
            // a_j ≥ 1/2 and 1 − a_j ≤ 1/(j+1): |ρ_n − 1| ≤ 4/(n + 1)
            (WeightFamily::PiDominated { .. }, true) => SideEnvelope::Power {
                scale: 4.0,
                exponent: 1.0,
                shift: -1.0,
                from: 0,
            },
            (WeightFamily::Theorem1Interleaved | WeightFamily::PiDominated { .. }, false) => {
                SideEnvelope::Zero { from: 0 }
            }
        };
        // ρ'_{m} = ρ_{m+t}: the positive side moves by −t, the negative by +t.
        if t == 0 {
            base
        } else if up {
            base.translated(-t)
        } else {
            base.translated(t)
        }
    }

    /// `Π_{j=start}^{start+n−1} ρ_j^{−1} ≤ k · sigma^n` for all `n ≥ 0`.
    pub fn inverse_product_envelope_up(&self, start: i64) -> Option<ProductEnvelope> {
        let s = start + self.translation;
        match &self.family {
            WeightFamily::Constant { value } => Some(ProductEnvelope {
                k: 1.0,
                sigma: 1.0 / value,
            }),
            WeightFamily::Harmonic { .. } => None,
            WeightFamily::Theorem1Interleaved | WeightFamily::PiDominated { .. } => {
                let j0 = (s / 2).max(1);
                Some(ProductEnvelope {
                    k: 1.0 / self.pair_value(j0).unwrap(),
                    sigma: 1.0,
                })
            }
            WeightFamily::UserTable { start: ts, values, fill } => {
                Some(table_envelope(*ts, values, 1.0 / fill, s, true, |r| 1.0 / r))
            }
        }
    }

    /// `Π_{j=start−n}^{start−1} ρ_j ≤ k · sigma^n` for all `n ≥ 0`.
    pub fn product_envelope_down(&self, start: i64) -> Option<ProductEnvelope> {
        let s = start + self.translation;
        match &self.family {
            WeightFamily::Constant { value } => Some(ProductEnvelope {
                k: 1.0,
                sigma: *value,
            }),
            WeightFamily::Harmonic { offset } => Some(ProductEnvelope {
                k: 1.0,
                sigma: (1.0 / offset).max(1.0 / (1.0 + offset)),
            }),
            WeightFamily::Theorem1Interleaved | WeightFamily::PiDominated { .. } => {
                let k = if s <= 2 {
                    1.0
                } else {
                    1.0 / self.pair_value(1).unwrap()
                };
                Some(ProductEnvelope { k, sigma: 1.0 })
            }
            WeightFamily::UserTable { start: ts, values, fill } => {
                Some(table_envelope(*ts, values, *fill, s, false, |r| r))
            }
        }
    }
}

fn constant_envelope(value: f64) -> SideEnvelope {
    if value == 1.0 {
        SideEnvelope::Zero { from: 0 }
    } else {
        SideEnvelope::Power {
            scale: (value - 1.0).abs(),
            exponent: 0.0,
            shift: -1.0,
            from: 0,
        }
    }
}

/// `1 − a_j` for the π-dominated construction:
/// `min(1 − (1 + π_{2j−1})^{−1/2}, 1/(j+1))`.
///
/// With this choice both eigenvalues of `I − T*T` contributed by the pair
/// `(2j, 2j+1)` have modulus at most `π_{2j−1}`, which yields
/// `|λ_n(I − T*T)| ≤ π_n` in the modulus-decreasing enumeration. It also
/// satisfies `1 − a_j ≤ π_j / 2`.
fn pi_deficit(pi: &PiTable, j: i64) -> f64 {
    let p = pi.value((2 * j - 1) as u64);
    let from_pi = 1.0 - 1.0 / (1.0 + p).sqrt();
    from_pi.min(1.0 / (j as f64 + 1.0))
}

/// Envelope for a table with a constant fill outside its window. `sigma` is
/// the per-step factor in the fill region, `map` turns a weight into the
/// factor being multiplied.
fn table_envelope(
    table_start: i64,
    values: &[f64],
    sigma: f64,
    start: i64,
    up: bool,
    map: impl Fn(f64) -> f64,
) -> ProductEnvelope {
    let end = table_start + values.len() as i64;
    let weight = |j: i64| -> f64 {
        let k = j - table_start;
        if k >= 0 && (k as usize) < values.len() {
            values[k as usize]
        } else if up {
            1.0 / sigma
        } else {
            sigma
        }
    };
    // Past the window every step multiplies by exactly sigma, so the
    // ratio product/sigma^n is constant from there on.
    let steps = if up {
        (end - start).max(0)
    } else {
        (start - table_start).max(0)
    };
    let mut log_ratio = 0.0f64;
    let mut max_log = 0.0f64;
    for i in 0..steps {
        let j = if up { start + i } else { start - 1 - i };
        log_ratio += map(weight(j)).ln() - sigma.ln();
        max_log = max_log.max(log_ratio);
    }
    ProductEnvelope {
        k: max_log.exp(),
        sigma,
    }
}

/// Canonical interleaved family with `a_j = 1 − 1/(j+1)`.
pub fn theorem1_weights() -> WeightSequence {
    WeightSequence::new(WeightFamily::Theorem1Interleaved).expect("always valid")
}

/// Interleaved weights whose defect eigenvalues are dominated by `π`.
pub fn pi_dominated_weights(pi: PiTable) -> Result<WeightSequence> {
    WeightSequence::new(WeightFamily::PiDominated { pi })
}

/// Partial sums of `Σ_{|j| ≤ N} |ρ_j − 1|^p`, summed in the order
/// `0, 1, −1, 2, −2, …`, with an integral-test tail when the family has a
/// decaying deviation envelope.
pub fn condition_star_certificate(rho: &WeightSequence, p: f64, n: u64) -> Result<SeriesCertificate> {
    if !(p >= 1.0) {
        return Err(invalid("p", "must be at least 1"));
    }
    if n < 1 {
        return Err(invalid("N", "must be at least 1"));
    }
    let n_i = n as i64;
    let terms = std::iter::once(0i64)
        .chain((1..=n_i).flat_map(|m| [m, -m]))
        .map(|j| (rho.rho(j) - 1.0).abs().powf(p));
    let up = rho.deviation_envelope(true).tail_sum(p, n_i);
    let down = rho.deviation_envelope(false).tail_sum(p, n_i);
    let rule = match (up, down) {
        (Some(a), Some(b)) => TailRule::Certified { bound: a + b },
        _ => TailRule::None,
    };
    Ok(SeriesCertificate::from_terms(terms, rule))
}
