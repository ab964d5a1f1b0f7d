//! Closed-form cop-number bounds and empirical checks of the random-graph
//! structure lemmas behind them.
//!
//! Every logarithm is natural. Values carry a formula id so reports stay
//! readable without the surrounding code.

pub mod checks;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::walks::{m_profile_singleton, WalkCount};

pub use checks::{
    check_ball_growth, check_ball_tree_excess, check_global_path_count, CheckOutcome, LemmaRadius,
    Witness,
};

pub const F_CHERNOFF: &str = "chernoff-lower-tail";
pub const F_GIRTH5: &str = "girth5-min-degree";
pub const F_WALKCOUNT: &str = "walkcount-necessary-condition";
pub const F_GNP_LOWER: &str = "gnp-lower";
pub const F_GNP_UPPER: &str = "gnp-upper";

/// Constant in the lower formula's exponent `(loglog(pn) - C) / (2 loglog(pn))`.
pub const GNP_LOWER_CONSTANT: f64 = 9.0;
/// Floor of the upper formula's `max{1/ε, ·}`.
pub const GNP_UPPER_FLOOR: f64 = 160_000.0;

/// Upper bound `e^{-(k-pn)²/(2pn)}` on `P(Bin(n, p) ≤ k)` for `k ≤ pn`.
pub fn chernoff_tail(n: u64, p: f64, k: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("probability {p} outside [0, 1]"));
    }
    let mean = n as f64 * p;
    if mean <= 0.0 {
        return invalid("chernoff tail needs pn > 0");
    }
    if k < 0.0 || k > mean {
        return invalid(format!("k = {k} must lie in [0, pn = {mean}]"));
    }
    Ok((-(k - mean).powi(2) / (2.0 * mean)).exp())
}

/// Exact `P(Bin(n, p) ≤ k)` by summing the mass function.
pub fn binomial_lower_tail(n: u64, p: f64, k: u64) -> f64 {
    if p <= 0.0 {
        return 1.0;
    }
    if p >= 1.0 {
        return if k >= n { 1.0 } else { 0.0 };
    }
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    let mut log_choose = 0.0f64;
    let mut total = 0.0;
    for i in 0..=k.min(n) {
        if i > 0 {
            log_choose += ((n - i + 1) as f64).ln() - (i as f64).ln();
        }
        total += (log_choose + i as f64 * lp + (n - i) as f64 * lq).exp();
    }
    total.min(1.0)
}

/// Minimum degree, a lower bound on the cop number, when the graph has no
/// cycle shorter than five.
pub fn girth5_lower_bound(g: &Graph) -> Option<usize> {
    match g.girth() {
        Some(girth) if girth < 5 => None,
        _ if g.n() == 0 => None,
        _ => Some(g.min_degree()),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkcountBound {
    pub formula: String,
    /// Certified lower bound on the cop number.
    pub value: u64,
    /// Minimum degree of the peeled region.
    pub d: usize,
    pub r: usize,
    pub m_r: u128,
    pub region_size: usize,
}

/// Lower bound from the walk-weight robber: with `M = M_r(1)` over the
/// `d_target`-core, `c(G) ≥ ⌊(d-1)^r / (2(r+1)M)⌋ + 1`.
pub fn walkcount_lower_bound(g: &Graph, d_target: usize, r: usize) -> Result<WalkcountBound> {
    if r == 0 {
        return invalid("walk-count bound needs r >= 1");
    }
    let region = g.min_degree_peel(d_target);
    if region.is_empty() {
        return invalid(format!("the {d_target}-core is empty"));
    }
    let d = region
        .iter()
        .map(|v| {
            g.neighbors(v)
                .iter()
                .filter(|&&w| region.contains(w))
                .count()
        })
        .min()
        .unwrap_or(0);
    if d < 3 {
        return invalid(format!("region minimum degree {d} is below 3"));
    }
    let profile = m_profile_singleton(g, &region, r)?;
    let m = match profile.counts[r] {
        WalkCount::Exact(m) => m,
        WalkCount::Saturated => return Err(Error::Saturated),
    };
    if m == 0 {
        return invalid(format!(
            "no non-backtracking walks of length {} from the region",
            2 * r
        ));
    }
    let top = (d as u128 - 1)
        .checked_pow(r as u32)
        .ok_or(Error::Saturated)?;
    let denom = 2 * (r as u128 + 1) * m;
    Ok(WalkcountBound {
        formula: F_WALKCOUNT.into(),
        value: (top / denom) as u64 + 1,
        d,
        r,
        m_r: m,
        region_size: region.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GnpLower {
    pub formula: String,
    pub value: f64,
    pub log_value: f64,
    pub loglog_pn: f64,
    /// `4 / loglog(pn/4)`, when `pn/4 > e`.
    pub epsilon: Option<f64>,
    /// `⌊((1/2-ε)log n - loglog n - log 40) / log(pn+1)⌋ - 1`.
    pub r: Option<i64>,
    /// The formula gives no nontrivial bound (value below 1).
    pub vacuous: bool,
}

/// `(pn)^{-2} n^{(loglog(pn) - 9)/(2 loglog(pn))}` evaluated in log space;
/// `ln_pn` may be far beyond `f64` range for `pn` itself.
pub fn gnp_lower_formula_log(ln_n: f64, ln_pn: f64) -> Result<GnpLower> {
    if !(ln_n.is_finite() && ln_n > 0.0) {
        return invalid("need n > 1");
    }
    if !(ln_pn > 1.0) {
        return invalid("need pn > e so that loglog(pn) is positive");
    }
    let ll = ln_pn.ln();
    let exponent = 0.5 * (ll - GNP_LOWER_CONSTANT) / ll;
    let log_value = exponent * ln_n - 2.0 * ln_pn;
    let ln_quarter = ln_pn - 4f64.ln();
    let epsilon = (ln_quarter > 1.0).then(|| 4.0 / ln_quarter.ln());
    let r = epsilon.map(|eps| {
        let pn_plus_one = if ln_pn < 700.0 {
            (ln_pn.exp() + 1.0).ln()
        } else {
            ln_pn
        };
        ((((0.5 - eps) * ln_n - ln_n.ln() - 40f64.ln()) / pn_plus_one).floor() as i64) - 1
    });
    Ok(GnpLower {
        formula: F_GNP_LOWER.into(),
        value: log_value.exp(),
        log_value,
        loglog_pn: ll,
        epsilon,
        r,
        vacuous: log_value < 0.0 || ll <= GNP_LOWER_CONSTANT,
    })
}

pub fn gnp_lower_formula(n: f64, p: f64) -> Result<GnpLower> {
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("probability {p} outside [0, 1]"));
    }
    gnp_lower_formula_log(n.ln(), (n * p).ln())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GnpUpper {
    pub formula: String,
    pub value: f64,
    /// `⌊1000 log(n^{1/2}) / log(pn+2)⌋`.
    pub r: u64,
}

/// `n^{1/2} log(n) max{1/ε, 160000}`, valid when `p > 2(1+ε)log(n)/n`.
pub fn gnp_upper_formula(n: f64, p: f64, eps: f64) -> Result<GnpUpper> {
    if !(eps > 0.0 && eps < 1.0) {
        return invalid(format!("ε = {eps} outside (0, 1)"));
    }
    if !(n > 1.0) || !(0.0..=1.0).contains(&p) {
        return invalid("need n > 1 and p in [0, 1]");
    }
    let threshold = 2.0 * (1.0 + eps) * n.ln() / n;
    if p <= threshold {
        return invalid(format!(
            "p = {p} does not exceed 2(1+ε)log(n)/n = {threshold}"
        ));
    }
    Ok(GnpUpper {
        formula: F_GNP_UPPER.into(),
        value: n.sqrt() * n.ln() * (1.0 / eps).max(GNP_UPPER_FLOOR),
        r: (1000.0 * n.sqrt().ln() / (n * p + 2.0).ln()).floor() as u64,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub formula: String,
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
}

/// Everything known about one graph or one `(n, p)` point.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph_hash: Option<String>,
    pub params: ReportParams,
    pub values: Vec<BoundValue>,
    pub checks: Vec<CheckOutcome>,
}

impl BoundReport {
    fn push<T>(
        &mut self,
        formula: &str,
        result: Result<T>,
        value: impl Fn(&T) -> f64,
        flags: impl Fn(&T) -> Vec<String>,
    ) {
        self.values.push(match result {
            Ok(t) => BoundValue {
                formula: formula.into(),
                value: Some(value(&t)),
                flags: flags(&t),
                error: None,
            },
            Err(e) => BoundValue {
                formula: formula.into(),
                value: None,
                flags: Vec::new(),
                error: Some(e.to_string()),
            },
        });
    }

    /// Graph-level bounds: the girth bound and the walk-count bound.
    pub fn for_graph(g: &Graph, d_target: usize, r: usize) -> Self {
        let mut report = Self {
            graph_hash: Some(g.hash_hex()),
            params: ReportParams {
                n: Some(g.n()),
                r: Some(r),
                d: Some(d_target),
                ..Default::default()
            },
            ..Default::default()
        };
        report.values.push(BoundValue {
            formula: F_GIRTH5.into(),
            value: girth5_lower_bound(g).map(|v| v as f64),
            flags: if girth5_lower_bound(g).is_none() {
                vec!["girth below 5; no bound".into()]
            } else {
                Vec::new()
            },
            error: None,
        });
        report.push(
            F_WALKCOUNT,
            walkcount_lower_bound(g, d_target, r),
            |b| b.value as f64,
            |b| {
                vec![format!(
                    "d={} M_r(1)={} region={}",
                    b.d, b.m_r, b.region_size
                )]
            },
        );
        report
    }

    /// Formula bounds at `(n, p)`.
    pub fn for_gnp(n: f64, p: f64, eps: f64) -> Self {
        let mut report = Self {
            params: ReportParams {
                n: Some(n as usize),
                p: Some(p),
                epsilon: Some(eps),
                ..Default::default()
            },
            ..Default::default()
        };
        report.push(
            F_GNP_LOWER,
            gnp_lower_formula(n, p),
            |b| b.value,
            |b| {
                if b.vacuous {
                    vec!["vacuous".into()]
                } else {
                    Vec::new()
                }
            },
        );
        report.push(
            F_GNP_UPPER,
            gnp_upper_formula(n, p, eps),
            |b| b.value,
            |_| Vec::new(),
        );
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::fixture;

    #[test]
    fn chernoff() {
        assert_eq!(chernoff_tail(100, 0.5, 50.0).unwrap(), 1.0);
        assert!((chernoff_tail(100, 0.5, 40.0).unwrap() - (-1f64).exp()).abs() < 1e-12);
        assert!(chernoff_tail(100, 0.5, 51.0).is_err());
        assert!((binomial_lower_tail(4, 0.5, 1) - 5.0 / 16.0).abs() < 1e-12);
        assert!((binomial_lower_tail(10, 0.3, 10) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn girth_bound() {
        assert_eq!(girth5_lower_bound(&fixture("petersen").unwrap()), Some(3));
        assert_eq!(girth5_lower_bound(&fixture("heawood").unwrap()), Some(3));
        assert_eq!(girth5_lower_bound(&fixture("cycle:4").unwrap()), None);
    }

    #[test]
    fn walkcount_bounds() {
        let h = walkcount_lower_bound(&fixture("heawood").unwrap(), 3, 1).unwrap();
        assert_eq!((h.m_r, h.value), (1, 1));
        let q5 = walkcount_lower_bound(&fixture("projective:5").unwrap(), 6, 2).unwrap();
        assert_eq!((q5.d, q5.m_r, q5.value), (6, 25, 1));
        assert!(walkcount_lower_bound(&fixture("cycle:8").unwrap(), 3, 1).is_err());
        assert!(matches!(
            walkcount_lower_bound(&fixture("complete:40").unwrap(), 3, 40),
            Err(Error::Saturated)
        ));
    }

    #[test]
    fn gnp_formulas() {
        let up = gnp_upper_formula(1e4, 0.01, 0.5).unwrap();
        let expected = 100.0 * 1e4f64.ln() * 160_000.0;
        assert!(((up.value - expected) / expected).abs() < 1e-12);
        assert!((up.value - 1.474e8).abs() / 1.474e8 < 1e-3);
        assert_eq!(
            gnp_upper_formula(1e4, 0.01, 1e-6).unwrap().value,
            100.0 * 1e4f64.ln() * 1e6
        );
        assert!(gnp_upper_formula(1e4, 0.001, 0.5).is_err());

        let low = gnp_lower_formula(1e6, 1e-4).unwrap();
        assert!((low.loglog_pn - 100f64.ln().ln()).abs() < 1e-12);
        assert!(low.vacuous);
        let edge = gnp_lower_formula_log(1e6f64.ln(), 9f64.exp()).unwrap();
        assert!(edge.log_value < 0.0 && edge.vacuous);
        assert!(gnp_lower_formula(100.0, 0.02).is_err());
    }
}
