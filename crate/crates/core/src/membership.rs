//! Triangular membership functions for the three intensity words and their
//! defuzzified step weights.
//!
//! All thresholds are expressed as fractions `L / k` of the working interval
//! length `L`, so the defuzzified step is a fixed fraction `w_p` of `L`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, FuzzyError, Result};
use crate::modifier::Power;

/// Divisors `k1..k7` that place the membership thresholds.
///
/// * slightly: plateau up to `L/k1`, zero from `L/k2`
/// * moderately: zero at `L/k3`, peak at `L/k4`, zero again at `L/k5`
/// * significantly: zero up to `L/k6`, plateau from `L/k7`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MembershipSpec {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
    pub k5: f64,
    pub k6: f64,
    pub k7: f64,
}

/// Membership thresholds for one power level, in interval-length units.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Thresholds {
    min: f64,
    mid: Option<f64>,
    max: f64,
}

impl MembershipSpec {
    pub fn validate(&self) -> Result<()> {
        let all = [self.k1, self.k2, self.k3, self.k4, self.k5, self.k6, self.k7];
        if all.iter().any(|k| !k.is_finite()) {
            return Err(invalid("membership divisors must be finite"));
        }
        if !(self.k1 > self.k2 && self.k2 >= 2.0) {
            return Err(invalid(format!(
                "slightly needs k1 > k2 >= 2, got k1={} k2={}",
                self.k1, self.k2
            )));
        }
        if !(self.k3 > self.k4 && self.k4 > self.k5 && self.k5 >= 2.0) {
            return Err(invalid(format!(
                "moderately needs k3 > k4 > k5 >= 2, got k3={} k4={} k5={}",
                self.k3, self.k4, self.k5
            )));
        }
        if !(self.k6 > self.k7 && self.k7 >= 2.0) {
            return Err(invalid(format!(
                "significantly needs k6 > k7 >= 2, got k6={} k7={}",
                self.k6, self.k7
            )));
        }
        Ok(())
    }

    fn thresholds(&self, power: Power, length: f64) -> Thresholds {
        match power {
            Power::Slightly => Thresholds {
                min: length / self.k1,
                mid: None,
                max: length / self.k2,
            },
            Power::Moderately => Thresholds {
                min: length / self.k3,
                mid: Some(length / self.k4),
                max: length / self.k5,
            },
            Power::Significantly => Thresholds {
                min: length / self.k6,
                mid: None,
                max: length / self.k7,
            },
        }
    }
}

/// Degree in `[0, 1]` to which a step of `delta_x` on an interval of length
/// `interval_length` reads as `power`.
pub fn membership(
    power: Power,
    delta_x: f64,
    spec: &MembershipSpec,
    interval_length: f64,
) -> Result<f64> {
    spec.validate()?;
    if !(delta_x.is_finite() && delta_x >= 0.0) {
        return Err(invalid(format!("delta_x must be >= 0, got {delta_x}")));
    }
    if !(interval_length.is_finite() && interval_length > 0.0) {
        return Err(invalid(format!(
            "interval length must be > 0, got {interval_length}"
        )));
    }
    Ok(eval(power, spec.thresholds(power, interval_length), delta_x))
}

fn eval(power: Power, t: Thresholds, x: f64) -> f64 {
    match power {
        Power::Slightly => {
            if x <= t.min {
                1.0
            } else if x >= t.max {
                0.0
            } else {
                (t.max - x) / (t.max - t.min)
            }
        }
        Power::Moderately => {
            let mid = t.mid.expect("moderately has a peak");
            if x <= t.min || x >= t.max {
                0.0
            } else if x <= mid {
                (x - t.min) / (mid - t.min)
            } else {
                (t.max - x) / (t.max - mid)
            }
        }
        Power::Significantly => {
            if x <= t.min {
                0.0
            } else if x >= t.max {
                1.0
            } else {
                (x - t.min) / (t.max - t.min)
            }
        }
    }
}

/// Step sizes as fractions of the current interval length.
///
/// Always satisfies `0 < slightly < moderately < significantly < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawWeights", into = "RawWeights")]
pub struct StepWeights {
    slightly: f64,
    moderately: f64,
    significantly: f64,
}

#[derive(Serialize, Deserialize)]
struct RawWeights {
    slightly: f64,
    moderately: f64,
    significantly: f64,
}

impl TryFrom<RawWeights> for StepWeights {
    type Error = FuzzyError;

    fn try_from(raw: RawWeights) -> Result<Self> {
        StepWeights::new(raw.slightly, raw.moderately, raw.significantly)
    }
}

impl From<StepWeights> for RawWeights {
    fn from(w: StepWeights) -> Self {
        RawWeights {
            slightly: w.slightly,
            moderately: w.moderately,
            significantly: w.significantly,
        }
    }
}

impl StepWeights {
    pub fn new(slightly: f64, moderately: f64, significantly: f64) -> Result<Self> {
        let ok = [slightly, moderately, significantly]
            .iter()
            .all(|w| w.is_finite())
            && 0.0 < slightly
            && slightly < moderately
            && moderately < significantly
            && significantly < 1.0;
        if !ok {
            return Err(invalid(format!(
                "weights must satisfy 0 < slightly < moderately < significantly < 1, \
                 got ({slightly}, {moderately}, {significantly})"
            )));
        }
        Ok(StepWeights {
            slightly,
            moderately,
            significantly,
        })
    }

    pub fn slightly(&self) -> f64 {
        self.slightly
    }

    pub fn moderately(&self) -> f64 {
        self.moderately
    }

    pub fn significantly(&self) -> f64 {
        self.significantly
    }

    pub fn weight(&self, power: Power) -> f64 {
        match power {
            Power::Slightly => self.slightly,
            Power::Moderately => self.moderately,
            Power::Significantly => self.significantly,
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.slightly, self.moderately, self.significantly]
    }
}

/// Closed-form defuzzified weight for one power level.
pub fn defuzzified_weight(power: Power, spec: &MembershipSpec) -> Result<f64> {
    spec.validate()?;
    let s = spec;
    Ok(match power {
        Power::Slightly => (7.0 / (2.0 * s.k1) + 1.0 / s.k2) / 3.0,
        Power::Moderately => (1.0 / s.k3 + 4.0 / s.k4 + 1.0 / s.k5) / 3.0,
        Power::Significantly => (1.0 / s.k6 + 2.0 / s.k7) / 3.0,
    })
}

/// Closed-form step weights for all three levels.
///
/// Fails with [`FuzzyError::SpecInconsistency`] when the resulting weights do
/// not keep the strict `slightly < moderately < significantly` order inside
/// `(0, 1)`.
pub fn defuzzify_weights(spec: &MembershipSpec) -> Result<StepWeights> {
    let [s, m, g] = Power::ALL.map(|p| defuzzified_weight(p, spec));
    let (s, m, g) = (s?, m?, g?);
    StepWeights::new(s, m, g).map_err(|_| {
        FuzzyError::SpecInconsistency(format!(
            "defuzzified weights ({s:.6}, {m:.6}, {g:.6}) are not strictly increasing inside (0, 1)"
        ))
    })
}

/// Which part of the step axis the centroid integral runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegrationDomain {
    /// `[Δ_min,p, Δ_max,p]` only.
    Limits,
    /// `[0, Δ_max,p]`, so the plateau below `Δ_min,1` is included.
    ZeroToMax,
    /// Everywhere the function is non-zero inside `[0, L]`.
    Support,
}

/// How the per-segment integrals are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    /// Ordinary centroid: `∫ x μ / ∫ μ` over the whole domain.
    AreaWeighted,
    /// Sum of the centroids of each linear segment, segments without mass skipped.
    SegmentSum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CentroidConvention {
    pub domain: IntegrationDomain,
    pub aggregation: Aggregation,
}

impl CentroidConvention {
    pub const ALL: [CentroidConvention; 6] = [
        CentroidConvention::new(IntegrationDomain::Limits, Aggregation::AreaWeighted),
        CentroidConvention::new(IntegrationDomain::ZeroToMax, Aggregation::AreaWeighted),
        CentroidConvention::new(IntegrationDomain::Support, Aggregation::AreaWeighted),
        CentroidConvention::new(IntegrationDomain::Limits, Aggregation::SegmentSum),
        CentroidConvention::new(IntegrationDomain::ZeroToMax, Aggregation::SegmentSum),
        CentroidConvention::new(IntegrationDomain::Support, Aggregation::SegmentSum),
    ];

    /// The convention under which quadrature reproduces [`defuzzify_weights`].
    pub const CLOSED_FORM: CentroidConvention =
        CentroidConvention::new(IntegrationDomain::ZeroToMax, Aggregation::SegmentSum);

    pub const fn new(domain: IntegrationDomain, aggregation: Aggregation) -> Self {
        CentroidConvention {
            domain,
            aggregation,
        }
    }

    pub fn name(&self) -> String {
        let d = match self.domain {
            IntegrationDomain::Limits => "limits",
            IntegrationDomain::ZeroToMax => "zero-to-max",
            IntegrationDomain::Support => "support",
        };
        let a = match self.aggregation {
            Aggregation::AreaWeighted => "area-weighted",
            Aggregation::SegmentSum => "segment-sum",
        };
        format!("{d}/{a}")
    }
}

const PANELS_PER_SEGMENT: usize = 64;

/// Composite Simpson rule for `(∫ f, ∫ x f)` on `[lo, hi]`.
fn simpson_moments(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    let n = 2 * PANELS_PER_SEGMENT;
    let h = (hi - lo) / n as f64;
    let (mut m0, mut m1) = (0.0, 0.0);
    for i in 0..=n {
        let x = lo + i as f64 * h;
        let c = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let y = f(x);
        m0 += c * y;
        m1 += c * x * y;
    }
    (m0 * h / 3.0, m1 * h / 3.0)
}

/// Centroid of one membership function by numerical quadrature, as a fraction
/// of the interval length.
pub fn centroid_weight_numeric(
    power: Power,
    spec: &MembershipSpec,
    convention: CentroidConvention,
) -> Result<f64> {
    spec.validate()?;
    let length = 1.0;
    let t = spec.thresholds(power, length);
    let (lo, hi) = match convention.domain {
        IntegrationDomain::Limits => (t.min, t.max),
        IntegrationDomain::ZeroToMax => (0.0, t.max),
        IntegrationDomain::Support => match power {
            Power::Slightly => (0.0, t.max),
            Power::Moderately => (t.min, t.max),
            Power::Significantly => (t.min, length),
        },
    };
    let mut cuts: Vec<f64> = [0.0, t.min, t.mid.unwrap_or(t.min), t.max, length]
        .into_iter()
        .filter(|&c| c >= lo && c <= hi)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mu = |x: f64| eval(power, t, x);
    let segments: Vec<(f64, f64)> = cuts
        .windows(2)
        .map(|w| simpson_moments(mu, w[0], w[1]))
        .collect();
    let centroid = match convention.aggregation {
        Aggregation::AreaWeighted => {
            let (m0, m1) = segments
                .iter()
                .fold((0.0, 0.0), |(a, b), (s0, s1)| (a + s0, b + s1));
            if m0 <= 0.0 {
                return Err(FuzzyError::SpecInconsistency(format!(
                    "{power} has no mass under {}",
                    convention.name()
                )));
            }
            m1 / m0
        }
        Aggregation::SegmentSum => segments
            .iter()
            .filter(|(m0, _)| *m0 > 1e-15)
            .map(|(m0, m1)| m1 / m0)
            .sum(),
    };
    Ok(centroid / length)
}

/// Quadrature counterpart of [`defuzzify_weights`].
pub fn centroid_weights_numeric(
    spec: &MembershipSpec,
    convention: CentroidConvention,
) -> Result<StepWeights> {
    let [s, m, g] = Power::ALL.map(|p| centroid_weight_numeric(p, spec, convention));
    let (s, m, g) = (s?, m?, g?);
    StepWeights::new(s, m, g).map_err(|_| {
        FuzzyError::SpecInconsistency(format!(
            "centroids ({s:.6}, {m:.6}, {g:.6}) under {} are not strictly increasing inside (0, 1)",
            convention.name()
        ))
    })
}
