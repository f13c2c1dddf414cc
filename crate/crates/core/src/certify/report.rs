use std::fmt::Write as _;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{
    dim_from_purity, ef_from_purity, ensure_certifiable, entropy_from_purity, lambda_min_bound,
    overlap_f1, overlap_f2, CertifyError, DimBound, EfBound, ExcludedInterval, LambdaMinBound,
};
use crate::table::{format_ratio, BehaviorTable, Index, Shape};
use crate::tol::{Tolerances, DEFAULT_EPSILON_P};

/// Entanglement-of-formation query: assumed purity deficit and local dimension cap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EfQuery {
    pub eta: f64,
    pub dim: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyOptions {
    pub tolerances: Tolerances,
    pub epsilon_p: f64,
    pub ef: Option<EfQuery>,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            tolerances: Tolerances::default(),
            epsilon_p: DEFAULT_EPSILON_P,
            ef: None,
        }
    }
}

/// Entropy lower bound in bits; infinite when the purity bound vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EntropyBound {
    Bits(f64),
    Infinite,
}

/// Every bound the certifier derives from one table.
///
/// Fields that need a complete, valid table are `None` otherwise, with the
/// reason recorded in `notes`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub shape: Shape,
    pub partial_input: bool,
    pub exact_input: bool,
    pub f1: Option<f64>,
    /// Bob's setting pair `(y1, y2)` attaining `f1`.
    pub f1_settings: Option<[usize; 2]>,
    pub f2: Option<f64>,
    /// Alice's setting pair `(x1, x2)` attaining `f2`.
    pub f2_settings: Option<[usize; 2]>,
    pub purity_bound: Option<f64>,
    pub dim_lower_bound: Option<DimBound>,
    pub entropy_lower_bound_bits: Option<EntropyBound>,
    #[serde(with = "lambda_field")]
    pub lambda_min_bound: Option<f64>,
    pub lambda_min_bound_exact: Option<String>,
    pub lambda_min_witness: Option<Index>,
    pub two_qubit_exclusion: Option<ExcludedInterval>,
    pub entanglement_of_formation: Option<EfBound>,
    pub epsilon_p: f64,
    pub tolerances: Tolerances,
    pub log_base: u32,
    pub notes: Vec<String>,
}

impl BoundsReport {
    pub fn no_finite_dim(&self) -> bool {
        self.dim_lower_bound == Some(DimBound::NoFiniteDim)
    }

    pub fn lambda_min_is_vacuous(&self) -> bool {
        self.lambda_min_bound.is_none()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Human-readable rendering: 6 significant digits, plus exact rationals
    /// where the rational path applied.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "shape: {}", self.shape);
        let _ = writeln!(
            out,
            "input: {}{}",
            if self.partial_input {
                "partial"
            } else {
                "complete"
            },
            if self.exact_input {
                ", exact rationals"
            } else {
                ""
            }
        );
        let opt = |v: Option<f64>| v.map(sig6).unwrap_or_else(|| "absent".to_string());
        let _ = writeln!(out, "f1: {}", opt(self.f1));
        let _ = writeln!(out, "f2: {}", opt(self.f2));
        let _ = writeln!(
            out,
            "purity bound (sum of squared Schmidt coefficients): {}",
            opt(self.purity_bound)
        );
        let dim = match self.dim_lower_bound {
            Some(DimBound::Finite(d)) => d.to_string(),
            Some(DimBound::NoFiniteDim) => "no finite-dimensional realization".to_string(),
            None => "absent".to_string(),
        };
        let _ = writeln!(out, "dimension lower bound: {dim}");
        let ent = match self.entropy_lower_bound_bits {
            Some(EntropyBound::Bits(b)) => format!("{} bits", sig6(b)),
            Some(EntropyBound::Infinite) => "infinite".to_string(),
            None => "absent".to_string(),
        };
        let _ = writeln!(out, "entropy lower bound: {ent}");
        let lm = match (self.lambda_min_bound, &self.lambda_min_bound_exact) {
            (None, _) => "vacuous".to_string(),
            (Some(v), Some(e)) => format!("{} (= {e})", sig6(v)),
            (Some(v), None) => sig6(v),
        };
        let _ = write!(out, "smallest Schmidt coefficient bound: {lm}");
        if let Some(w) = self.lambda_min_witness {
            let _ = write!(out, " at {w}");
        }
        out.push('\n');
        match &self.two_qubit_exclusion {
            Some(iv) => {
                let _ = writeln!(out, "excluded two-qubit weights: {}", format_interval(iv));
            }
            None => out.push_str("excluded two-qubit weights: none\n"),
        }
        if let Some(ef) = &self.entanglement_of_formation {
            let _ = writeln!(
                out,
                "entanglement of formation (eta = {}, d = {}): >= {} bits",
                ef.eta,
                ef.dim,
                sig6(ef.value)
            );
        }
        let t = &self.tolerances;
        let _ = writeln!(
            out,
            "tolerances: norm {:e}, no-signaling {:e}, zero {:e}, ceil {:e}, epsilon_p {:e}; log base {}",
            t.norm, t.no_signaling, t.zero, t.ceil, self.epsilon_p, self.log_base
        );
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}

pub(crate) fn format_interval(iv: &ExcludedInterval) -> String {
    match (&iv.lower_exact, &iv.upper_exact) {
        (Some(l), Some(u)) => format!("({l}, {u})"),
        _ => format!("({}, {})", sig6(iv.lower), sig6(iv.upper)),
    }
}

/// Format with 6 significant digits.
pub fn sig6(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let mag = v.abs().log10().floor() as i32;
    if !(-4..=6).contains(&mag) {
        return format!("{v:.5e}");
    }
    let decimals = (5 - mag).max(0) as usize;
    format!("{v:.decimals$}")
}

/// Compute every bound for `table`. Never fails: bounds that cannot be
/// evaluated are left absent and explained in `notes`.
pub fn certify(table: &BehaviorTable, options: &CertifyOptions) -> BoundsReport {
    let tol = options.tolerances;
    let mut report = BoundsReport {
        shape: table.shape(),
        partial_input: !table.is_complete(),
        exact_input: table.is_exact(),
        f1: None,
        f1_settings: None,
        f2: None,
        f2_settings: None,
        purity_bound: None,
        dim_lower_bound: None,
        entropy_lower_bound_bits: None,
        lambda_min_bound: None,
        lambda_min_bound_exact: None,
        lambda_min_witness: None,
        two_qubit_exclusion: None,
        entanglement_of_formation: None,
        epsilon_p: options.epsilon_p,
        tolerances: tol,
        log_base: 2,
        notes: Vec::new(),
    };

    match ensure_certifiable(table, &tol) {
        Ok(()) => {
            let o1 = overlap_f1(table);
            let o2 = overlap_f2(table);
            let pb = o1.value.min(o2.value);
            report.f1 = Some(o1.value);
            report.f1_settings = Some(o1.settings);
            report.f2 = Some(o2.value);
            report.f2_settings = Some(o2.settings);
            report.purity_bound = Some(pb);
            let dim = dim_from_purity(pb, &tol);
            report.dim_lower_bound = Some(dim);
            report.entropy_lower_bound_bits = Some(
                entropy_from_purity(pb, &tol)
                    .map(EntropyBound::Bits)
                    .unwrap_or(EntropyBound::Infinite),
            );
            if dim == DimBound::NoFiniteDim {
                report
                    .notes
                    .push("purity bound vanishes: no finite-dimensional quantum state produces this table".into());
            }
            if let Some(q) = options.ef {
                match ef_from_purity(pb, q.eta, q.dim, &tol) {
                    Ok(ef) => report.entanglement_of_formation = Some(ef),
                    Err(e) => report
                        .notes
                        .push(format!("entanglement of formation skipped: {e}")),
                }
            }
        }
        Err(e @ CertifyError::PartialTable(_)) | Err(e @ CertifyError::InvalidTable { .. }) => {
            report.notes.push(format!("overlap bounds skipped: {e}"));
            if options.ef.is_some() {
                report
                    .notes
                    .push("entanglement of formation skipped: needs the overlap bounds".into());
            }
        }
        Err(e) => report.notes.push(e.to_string()),
    }

    let lm = lambda_min_bound(table, options.epsilon_p);
    if let LambdaMinBound::Bound(r) = &lm {
        report.lambda_min_bound = Some(r.value);
        report.lambda_min_bound_exact = r.exact.as_ref().map(format_ratio);
        report.lambda_min_witness = Some(r.at);
    }
    report.two_qubit_exclusion = lm.two_qubit_exclusion();
    report
}

impl Serialize for EntropyBound {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            EntropyBound::Bits(b) => s.serialize_f64(*b),
            EntropyBound::Infinite => s.serialize_str("infinity"),
        }
    }
}

impl<'de> Deserialize<'de> for EntropyBound {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match NumOrFlag::deserialize(d)? {
            NumOrFlag::Num(v) => Ok(EntropyBound::Bits(v)),
            NumOrFlag::Flag(f) if f == "infinity" => Ok(EntropyBound::Infinite),
            NumOrFlag::Flag(f) => Err(serde::de::Error::custom(format!(
                "unknown entropy flag {f:?}"
            ))),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NumOrFlag {
    Num(f64),
    Flag(String),
}

/// `lambda_min_bound` is a number, or the string `"vacuous"`.
mod lambda_field {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => s.serialize_f64(*x),
            None => s.serialize_str("vacuous"),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        match NumOrFlag::deserialize(d)? {
            NumOrFlag::Num(v) => Ok(Some(v)),
            NumOrFlag::Flag(f) if f == "vacuous" => Ok(None),
            NumOrFlag::Flag(f) => Err(serde::de::Error::custom(format!(
                "unknown bound flag {f:?}"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::Prob;

    fn pr_box() -> BehaviorTable {
        BehaviorTable::from_fn(Shape::new(2, 2, 2, 2).unwrap(), |i| {
            if (i.a ^ i.b) == i.x * i.y {
                Prob::frac(1, 2)
            } else {
                Prob::zero()
            }
        })
        .unwrap()
    }

    #[test]
    fn pr_box_report() {
        let r = certify(&pr_box(), &CertifyOptions::default());
        assert_eq!(r.purity_bound, Some(0.0));
        assert!(r.no_finite_dim());
        assert_eq!(r.entropy_lower_bound_bits, Some(EntropyBound::Infinite));
        let json = r.to_json();
        assert!(json.contains("\"no_finite_dim\""));
        assert!(json.contains("\"infinity\""));
        let back: BoundsReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn partial_report_skips_overlap_bounds() {
        let mut b = BehaviorTable::builder(Shape::new(1, 1, 3, 3).unwrap());
        b.set(Index::new(0, 0, 0, 0), Prob::frac(1, 10)).unwrap();
        for (a, bb) in [(0, 1), (0, 2), (1, 0), (2, 0)] {
            b.set(Index::new(0, 0, a, bb), Prob::frac(1, 100)).unwrap();
        }
        let r = certify(&b.build(), &CertifyOptions::default());
        assert!(r.partial_input);
        assert_eq!(r.f1, None);
        assert_eq!(r.purity_bound, None);
        assert_eq!(r.lambda_min_bound, Some(0.144));
        assert_eq!(r.lambda_min_bound_exact.as_deref(), Some("18/125"));
        let text = r.to_text();
        assert!(text.contains("0.144000 (= 18/125)"), "{text}");
        assert!(text.contains("(18/125, 107/125)"), "{text}");
        assert!(text.contains("f1: absent"), "{text}");
    }

    #[test]
    fn vacuous_bound_serializes_as_flag() {
        let b = BehaviorTable::builder(Shape::new(1, 1, 2, 2).unwrap()).build();
        let r = certify(&b, &CertifyOptions::default());
        assert!(r.lambda_min_is_vacuous());
        let json = r.to_json();
        assert!(json.contains("\"lambda_min_bound\": \"vacuous\""), "{json}");
        let back: BoundsReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn sig6_formatting() {
        assert_eq!(sig6(0.5), "0.500000");
        assert_eq!(sig6(1.0), "1.00000");
        assert_eq!(sig6(0.144), "0.144000");
        assert_eq!(sig6(123.456789), "123.457");
        assert_eq!(sig6(1.5e-7), "1.50000e-7");
        assert_eq!(sig6(0.0), "0");
    }
}
