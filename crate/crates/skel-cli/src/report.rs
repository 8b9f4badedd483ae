//! Per-skeleton report record with machine (JSON) and human (table)
//! renderings derived from the same data.

use serde::Serialize;

use lunavust::cox::{class_group, has_fixed_point};
use lunavust::iota::check_conjecture;
use lunavust::roots::dim_gp;
use lunavust::skel::{derived_sets, is_complete, is_factorial, SphericalSkeleton};

/// One row of a batch report. For files that fail to parse or validate,
/// only `file`, `valid`, and `error` carry information.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub file: String,
    pub name: Option<String>,
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub script_s: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cl_rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complete: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factorial: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed_point: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iota: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim_gp: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
}

impl Report {
    pub fn failure(file: String, name: Option<String>, error: String) -> Report {
        Report {
            file,
            name,
            valid: false,
            error: Some(error),
            script_s: None,
            cl_rank: None,
            complete: None,
            factorial: None,
            fixed_point: None,
            iota: None,
            dim_gp: None,
            verdict: None,
        }
    }

    /// Full record of a valid skeleton.
    pub fn compute(
        file: String,
        name: String,
        sk: &SphericalSkeleton,
    ) -> Result<Report, lunavust::Error> {
        let ds = derived_sets(sk)?;
        let verdict = check_conjecture(sk)?;
        Ok(Report {
            file,
            name: Some(name),
            valid: true,
            error: None,
            script_s: Some(ds.script_s.iter().map(|l| l.to_string()).collect()),
            cl_rank: Some(class_group(sk)?.rank),
            complete: Some(is_complete(sk)?),
            factorial: Some(is_factorial(sk)?),
            fixed_point: Some(has_fixed_point(sk)?),
            iota: Some(verdict.iota.value.to_string()),
            dim_gp: Some(dim_gp(&sk.rs, &sk.moved_labels())?),
            verdict: Some(verdict.verdict.to_string()),
        })
    }

    pub fn human_row(&self) -> String {
        fn yn(v: Option<bool>) -> &'static str {
            match v {
                Some(true) => "yes",
                Some(false) => "no",
                None => "-",
            }
        }
        if !self.valid {
            return format!(
                "{:<12} INVALID  {}",
                self.file,
                self.error.as_deref().unwrap_or("")
            );
        }
        let script_s = self
            .script_s
            .as_ref()
            .map(|s| {
                if s.is_empty() {
                    "{}".to_string()
                } else {
                    format!("{{{}}}", s.join(","))
                }
            })
            .unwrap_or_else(|| "-".into());
        format!(
            "{:<12} {:<10} {:>3} {:>9} {:>9} {:>6} {:>6} {:>6} {:<18}",
            self.file,
            script_s,
            self.cl_rank.map(|r| r.to_string()).unwrap_or_default(),
            yn(self.complete),
            yn(self.factorial),
            yn(self.fixed_point),
            self.iota.clone().unwrap_or_default(),
            self.dim_gp.map(|d| d.to_string()).unwrap_or_default(),
            self.verdict.clone().unwrap_or_default(),
        )
    }

    pub fn human_header() -> String {
        format!(
            "{:<12} {:<10} {:>3} {:>9} {:>9} {:>6} {:>6} {:>6} {:<18}",
            "file", "script_s", "cl", "complete", "factorial", "fixed", "iota", "dimGP", "verdict"
        )
    }
}
