//! Binary-search baselines.
//!
//! Several counting conventions are provided because published step counts
//! for binary search depend on details (probe rounding, stop rule) that are
//! rarely stated.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BinaryConvention {
    /// Index bisection with an equality test; even spans probe the lower middle.
    #[default]
    IndexLower,
    /// Index bisection probing the upper middle on even spans.
    IndexUpper,
    /// Index bisection rounding the probe away from the grid center.
    IndexOutward,
    /// Halve [-1, 1] until the width is below ε = δ/2.
    HalvingStrict,
    /// Halve [-1, 1] until the width is at most ε.
    HalvingInclusive,
    /// Halve [-1, 1] until a midpoint lands within ε of the target.
    HalvingHit,
}

impl BinaryConvention {
    pub const ALL: [BinaryConvention; 6] = [
        BinaryConvention::IndexLower,
        BinaryConvention::IndexUpper,
        BinaryConvention::IndexOutward,
        BinaryConvention::HalvingStrict,
        BinaryConvention::HalvingInclusive,
        BinaryConvention::HalvingHit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BinaryConvention::IndexLower => "index-lower",
            BinaryConvention::IndexUpper => "index-upper",
            BinaryConvention::IndexOutward => "index-outward",
            BinaryConvention::HalvingStrict => "halving-strict",
            BinaryConvention::HalvingInclusive => "halving-inclusive",
            BinaryConvention::HalvingHit => "halving-hit",
        }
    }
}

impl fmt::Display for BinaryConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BinaryConvention {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        BinaryConvention::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = BinaryConvention::ALL.iter().map(|c| c.name()).collect();
                format!("unknown binary convention '{s}' (one of {})", names.join(", "))
            })
    }
}

fn check(n: usize, target_index: usize) -> Result<()> {
    if n < 2 {
        return Err(SimError::InvalidArgument(format!("need n >= 2, got {n}")));
    }
    if target_index >= n {
        return Err(SimError::InvalidTarget {
            index: target_index,
            n,
        });
    }
    Ok(())
}

/// Probes of index bisection (default convention) until the target is hit.
pub fn binary_search_steps(n: usize, target_index: usize) -> Result<usize> {
    binary_steps(n, target_index, BinaryConvention::IndexLower)
}

pub fn binary_steps(n: usize, target_index: usize, convention: BinaryConvention) -> Result<usize> {
    check(n, target_index)?;
    Ok(match convention {
        BinaryConvention::IndexLower
        | BinaryConvention::IndexUpper
        | BinaryConvention::IndexOutward => index_bisection(n, target_index, convention),
        _ => halving(n, target_index, convention),
    })
}

fn index_bisection(n: usize, target: usize, convention: BinaryConvention) -> usize {
    let (mut lo, mut hi) = (0usize, n - 1);
    let mut probes = 0;
    loop {
        probes += 1;
        let lower_mid = (lo + hi) / 2;
        let upper_mid = (lo + hi).div_ceil(2);
        let mid = match convention {
            BinaryConvention::IndexUpper => upper_mid,
            // lo + hi > n - 1 means the span sits right of the center
            BinaryConvention::IndexOutward if lo + hi > n - 1 => upper_mid,
            _ => lower_mid,
        };
        match target.cmp(&mid) {
            std::cmp::Ordering::Equal => return probes,
            std::cmp::Ordering::Less => hi = mid - 1,
            std::cmp::Ordering::Greater => lo = mid + 1,
        }
    }
}

fn halving(n: usize, target_index: usize, convention: BinaryConvention) -> usize {
    let delta = 2.0 / (n - 1) as f64;
    let eps = delta / 2.0;
    let target = -1.0 + target_index as f64 * delta;
    let (mut a, mut b) = (-1.0f64, 1.0f64);
    let mut halvings = 0;
    loop {
        match convention {
            BinaryConvention::HalvingStrict if b - a < eps => return halvings,
            BinaryConvention::HalvingInclusive if b - a <= eps + 1e-12 => return halvings,
            _ => {}
        }
        let mid = 0.5 * (a + b);
        halvings += 1;
        if convention == BinaryConvention::HalvingHit && (mid - target).abs() < eps {
            return halvings;
        }
        if target < mid {
            b = mid;
        } else {
            a = mid;
        }
    }
}
