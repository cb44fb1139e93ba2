use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportKind {
    /// Passes when `p_value > threshold`.
    Statistical,
    /// Passes when `error_norm < threshold`.
    Exact,
    /// Passes when `statistic > threshold`.
    LowerBound,
    /// Passes when every component passes.
    Composite,
}

/// Outcome of a validation: a statistical test, an exact check, or a group of them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub name: String,
    pub kind: ReportKind,
    pub statistic: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_norm: Option<f64>,
    pub threshold: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub samples: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<TestReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    /// Set when an approximate sampler fed the test.
    #[serde(default)]
    pub approximate: bool,
}

impl TestReport {
    pub fn statistical(name: impl Into<String>, statistic: f64, p_value: f64, threshold: f64, samples: u64) -> Self {
        TestReport {
            name: name.into(),
            kind: ReportKind::Statistical,
            statistic,
            p_value: Some(p_value),
            error_norm: None,
            threshold,
            passed: p_value > threshold,
            seed: None,
            samples,
            components: vec![],
            warnings: vec![],
            approximate: false,
        }
    }

    pub fn exact(name: impl Into<String>, error_norm: f64, threshold: f64, samples: u64) -> Self {
        TestReport {
            name: name.into(),
            kind: ReportKind::Exact,
            statistic: error_norm,
            p_value: None,
            error_norm: Some(error_norm),
            threshold,
            passed: error_norm < threshold,
            seed: None,
            samples,
            components: vec![],
            warnings: vec![],
            approximate: false,
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, threshold: f64, samples: u64) -> Self {
        TestReport {
            name: name.into(),
            kind: ReportKind::LowerBound,
            statistic: value,
            p_value: None,
            error_norm: None,
            threshold,
            passed: value > threshold,
            seed: None,
            samples,
            components: vec![],
            warnings: vec![],
            approximate: false,
        }
    }

    /// Passes iff every component does; `statistic` is the smallest component p-value
    /// (or the largest error norm when there are no statistical components).
    pub fn composite(name: impl Into<String>, components: Vec<TestReport>) -> Self {
        let min_p = components.iter().filter_map(|c| c.p_value).fold(f64::INFINITY, f64::min);
        let max_err = components.iter().filter_map(|c| c.error_norm).fold(0.0, f64::max);
        let statistic = if min_p.is_finite() { min_p } else { max_err };
        let samples = components.iter().map(|c| c.samples).max().unwrap_or(0);
        let approximate = components.iter().any(|c| c.approximate);
        let threshold = components.iter().map(|c| c.threshold).fold(0.0, f64::max);
        TestReport {
            name: name.into(),
            kind: ReportKind::Composite,
            statistic,
            p_value: None,
            error_norm: None,
            threshold,
            passed: !components.is_empty() && components.iter().all(|c| c.passed),
            seed: None,
            samples,
            components,
            warnings: vec![],
            approximate,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_warning(mut self, warning: impl Into<String>) -> Self {
        self.warnings.push(warning.into());
        self
    }

    pub fn approximate(mut self, reason: impl Into<String>) -> Self {
        self.approximate = true;
        self.warnings.push(reason.into());
        self
    }

    /// Treats every statistical leaf as one family tested at level `threshold`: each
    /// leaf must beat `threshold / m` for `m` leaves. The root gets the adjusted
    /// p-value `min(1, m · min p)`. Exact leaves keep their own thresholds.
    pub fn bonferroni(mut self, threshold: f64) -> Self {
        fn count(r: &TestReport) -> usize {
            match r.kind {
                ReportKind::Statistical => 1,
                ReportKind::Exact | ReportKind::LowerBound => 0,
                ReportKind::Composite => r.components.iter().map(count).sum(),
            }
        }
        fn min_p(r: &TestReport) -> f64 {
            match r.kind {
                ReportKind::Statistical => r.p_value.unwrap_or(f64::NAN),
                ReportKind::Exact | ReportKind::LowerBound => f64::INFINITY,
                ReportKind::Composite => r.components.iter().map(min_p).fold(f64::INFINITY, f64::min),
            }
        }
        fn rethreshold(r: &mut TestReport, level: f64) {
            match r.kind {
                ReportKind::Statistical => {
                    r.threshold = level;
                    r.passed = r.p_value.is_some_and(|p| p > level);
                }
                ReportKind::Exact | ReportKind::LowerBound => {}
                ReportKind::Composite => {
                    r.components.iter_mut().for_each(|c| rethreshold(c, level));
                    r.passed = !r.components.is_empty() && r.components.iter().all(|c| c.passed);
                }
            }
        }
        let m = count(&self);
        if m == 0 {
            return self;
        }
        rethreshold(&mut self, threshold / m as f64);
        if self.kind == ReportKind::Composite {
            let p = (m as f64 * min_p(&self)).min(1.0);
            self.p_value = Some(p);
            self.statistic = p;
            self.threshold = threshold;
        }
        self
    }

    /// One line per leaf: `PASS name statistic threshold`.
    pub fn summary_lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_lines(0, &mut out);
        out
    }

    fn collect_lines(&self, depth: usize, out: &mut Vec<String>) {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let value = match (self.kind, self.p_value, self.error_norm) {
            (ReportKind::LowerBound, ..) => format!("value = {:.4e} (need > {:e})", self.statistic, self.threshold),
            (_, Some(p), _) => format!("p = {p:.4} (need > {:.4})", self.threshold),
            (_, _, Some(e)) => format!("error = {e:.3e} (need < {:e})", self.threshold),
            _ => String::new(),
        };
        let approx = if self.approximate { " [approximate]" } else { "" };
        out.push(format!("{}{status} {}{approx} {value}", "  ".repeat(depth), self.name));
        for c in &self.components {
            c.collect_lines(depth + 1, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_rules() {
        assert!(TestReport::statistical("a", 0.1, 0.2, 0.05, 10).passed);
        assert!(!TestReport::statistical("a", 0.1, 0.01, 0.05, 10).passed);
        assert!(TestReport::exact("b", 1e-12, 1e-10, 1).passed);
        assert!(!TestReport::exact("b", 1e-9, 1e-10, 1).passed);
        let c = TestReport::composite("c", vec![TestReport::exact("b", 1e-12, 1e-10, 1), TestReport::statistical("a", 0.1, 0.01, 0.05, 10)]);
        assert!(!c.passed);
        assert_eq!(c.statistic, 0.01);
        assert_eq!(c.summary_lines().len(), 3);
        assert!(!TestReport::composite("empty", vec![]).passed);
        assert!(TestReport::at_least("m", 0.2, 0.01, 1).passed);
        assert!(!TestReport::at_least("m", 0.001, 0.01, 1).passed);
    }

    #[test]
    fn bonferroni_family() {
        let leaves = || vec![TestReport::statistical("a", 0.0, 0.03, 0.05, 10), TestReport::statistical("b", 0.0, 0.5, 0.05, 10)];
        let c = TestReport::composite("c", leaves());
        assert!(!c.passed);
        let c = c.bonferroni(0.05);
        assert!(c.passed);
        assert_eq!(c.p_value, Some(0.06));
        assert_eq!(c.components[0].threshold, 0.025);
        let strict = TestReport::composite("c", leaves()).bonferroni(0.1);
        assert!(!strict.passed, "0.03 < 0.1 / 2");
        let with_exact = TestReport::composite("c", vec![TestReport::exact("e", 1.0, 0.5, 1), TestReport::statistical("a", 0.0, 0.9, 0.05, 10)]);
        assert!(!with_exact.bonferroni(0.05).passed);
    }
}
