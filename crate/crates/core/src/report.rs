//! Parameter sweeps over small Seifert spaces with per-row consistency checks.

use serde::Serialize;

use crate::arith::gcd;
use crate::formulas::{
    bb_census, decompose_lambda_zero, h1_small_seifert_snf, lambda_psl_seifert_hs, lambda_sl_small_seifert,
};
use crate::manifold::{ManifoldExpr, ManifoldSpec, SeifertHSSpec, SmallSeifertSpec};
use crate::oracle::{count_sl_irreducible, sl_formula_is_proved};
use crate::{Error, QuarterRational, Result};

/// One sweep record. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub manifold: String,
    pub lambda_psl: QuarterRational,
    pub lambda_sl: Option<QuarterRational>,
    pub h1: String,
    pub h1_z2_order: i64,
    pub lambda_zero: Option<QuarterRational>,
    pub residual: Option<QuarterRational>,
    pub reducible: i64,
    pub dihedral: i64,
    pub klein: i64,
    pub total: i64,
    pub oracle_ok: OracleStatus,
    pub caveats: String,
    /// Names of failed checks; empty when the row passed.
    #[serde(skip)]
    pub failures: Vec<String>,
}

pub const SWEEP_HEADER: [&str; 13] = [
    "manifold",
    "lambda_psl",
    "lambda_sl",
    "h1",
    "h1_z2_order",
    "lambda_zero",
    "residual",
    "reducible",
    "dihedral",
    "klein",
    "total",
    "oracle_ok",
    "caveats",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleStatus {
    #[serde(rename = "true")]
    Agree,
    #[serde(rename = "false")]
    Disagree,
    /// Disagreement outside the parity classes where the closed form is proved.
    Finding,
    /// p·q·r above the enumeration cap.
    Skipped,
}

impl OracleStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            OracleStatus::Agree => "true",
            OracleStatus::Disagree => "false",
            OracleStatus::Finding => "finding",
            OracleStatus::Skipped => "skipped",
        }
    }
}

impl SweepRow {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Fields rendered as they appear in CSV, in column order.
    pub fn fields(&self) -> [String; 13] {
        let opt = |v: Option<QuarterRational>| v.map_or(String::new(), |v| v.to_string());
        [
            self.manifold.clone(),
            self.lambda_psl.to_string(),
            opt(self.lambda_sl),
            self.h1.clone(),
            self.h1_z2_order.to_string(),
            opt(self.lambda_zero),
            opt(self.residual),
            self.reducible.to_string(),
            self.dihedral.to_string(),
            self.klein.to_string(),
            self.total.to_string(),
            self.oracle_ok.as_str().to_string(),
            self.caveats.clone(),
        ]
    }
}

/// The first `k` valid (a, b, c) in lexicographic order with 1 ≤ a, b, c ≤ 2·max(p, q, r).
pub fn sample_coefficients(p: i64, q: i64, r: i64, k: usize) -> Vec<(i64, i64, i64)> {
    let bound = 2 * p.max(q).max(r);
    let coprime = |x: i64, n: i64| gcd(x as i128, n as i128) == 1;
    let mut out = Vec::with_capacity(k);
    if k == 0 {
        return out;
    }
    for a in (1..=bound).filter(|&a| coprime(a, p)) {
        for b in (1..=bound).filter(|&b| coprime(b, q)) {
            for c in (1..=bound).filter(|&c| coprime(c, r)) {
                if SmallSeifertSpec::new(p, q, r, a, b, c).is_ok() {
                    out.push((a, b, c));
                    if out.len() == k {
                        return out;
                    }
                }
            }
        }
    }
    out
}

/// Lexicographically smallest valid positive (a, b, c).
pub fn default_coefficients(p: i64, q: i64, r: i64) -> Option<(i64, i64, i64)> {
    sample_coefficients(p, q, r, 1).into_iter().next()
}

fn pairwise_coprime(p: i64, q: i64, r: i64) -> bool {
    [(p, q), (p, r), (q, r)].iter().all(|&(m, n)| gcd(m as i128, n as i128) == 1)
}

/// Computes one row and runs every consistency check that applies to it.
pub fn sweep_row(spec: &SmallSeifertSpec, cap: u128) -> Result<SweepRow> {
    let spec = spec.validate()?;
    let expr = ManifoldExpr::Leaf(ManifoldSpec::SmallSeifert(spec));
    let report = decompose_lambda_zero(&expr)?;
    let census = bb_census(&spec)?;
    let mut failures = Vec::new();
    let mut fail = |name: &str| failures.push(name.to_string());

    let lambda_sl = report.lambda_sl.unwrap_or(lambda_sl_small_seifert(&spec)?);
    if report.lambda_psl.is_negative() || lambda_sl.is_negative() {
        fail("non-negativity");
    }
    if !lambda_sl.is_integer() {
        fail("sl-integrality");
    }
    if census.lambda_psl_from_census != report.lambda_psl {
        fail("composition-identity");
    }
    if pairwise_coprime(spec.p, spec.q, spec.r) {
        let shs = lambda_psl_seifert_hs(&SeifertHSSpec::new(vec![spec.p, spec.q, spec.r])?)?;
        if report.lambda_psl != shs || lambda_sl != shs {
            fail("coprime-reduction");
        }
    }
    if spec.homology_order_signed() % 2 != 0 && report.lambda_psl != lambda_sl {
        fail("z2-homology-sphere-agreement");
    }
    if h1_small_seifert_snf(&spec)? != report.h1 {
        fail("h1-formula-vs-snf");
    }

    let oracle_ok = match count_sl_irreducible(&spec, cap) {
        Ok((plus, minus)) => {
            let agree = QuarterRational::from_int((plus + minus) as i128)? == lambda_sl;
            match (agree, sl_formula_is_proved(&spec)) {
                (true, _) => OracleStatus::Agree,
                (false, true) => {
                    fail("oracle");
                    OracleStatus::Disagree
                }
                (false, false) => OracleStatus::Finding,
            }
        }
        Err(Error::CapExceeded { .. }) => OracleStatus::Skipped,
        Err(e) => return Err(e),
    };

    Ok(SweepRow {
        manifold: report.manifold,
        lambda_psl: report.lambda_psl,
        lambda_sl: report.lambda_sl,
        h1: report.h1.to_string(),
        h1_z2_order: report.h1_z2_order,
        lambda_zero: report.lambda_zero,
        residual: report.residual,
        reducible: census.reducible,
        dihedral: census.dihedral,
        klein: census.klein,
        total: census.total,
        oracle_ok,
        caveats: report.caveats.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(";"),
        failures,
    })
}

/// All 2 ≤ p ≤ q ≤ r ≤ `max` with `samples` coefficient triples each, in
/// lexicographic order of (p, q, r) then (a, b, c).
pub fn sweep_specs(max: i64, samples: usize) -> Vec<SmallSeifertSpec> {
    let mut specs = Vec::new();
    for p in 2..=max {
        for q in p..=max {
            for r in q..=max {
                for (a, b, c) in sample_coefficients(p, q, r, samples) {
                    specs.push(SmallSeifertSpec { p, q, r, a, b, c });
                }
            }
        }
    }
    specs
}

pub fn sweep(max: i64, samples: usize, cap: u128) -> Result<Vec<SweepRow>> {
    sweep_specs(max, samples).iter().map(|s| sweep_row(s, cap)).collect()
}
