//! One PASS/FAIL line per acceptance criterion. Run with
//! `cargo test -p affine-floer --test acceptance -- --nocapture`.

use std::time::{Duration, Instant};

use affine_floer::affine_base::Dp6Params;
use affine_floer::floer_algebra::AlgebraModel;
use affine_floer::verify::{
    associativity_sweep, class_p_suite, default_windows, hilbert_counts, homotopy_suite,
    numeric_suite, ring_iso_check, tropical_suite, wrapped_suite, CheckResult,
};
use affine_floer::Execution;

struct Outcome {
    id: u32,
    title: &'static str,
    checks: Vec<CheckResult>,
    elapsed: Duration,
    budget: Option<Duration>,
}

impl Outcome {
    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed) && self.budget.is_none_or(|b| self.elapsed <= b)
    }

    fn line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let checked: u64 = self.checks.iter().map(|c| c.checked).sum();
        let budget = self
            .budget
            .map(|b| format!(" (limit {:.0} s)", b.as_secs_f64()))
            .unwrap_or_default();
        let mut s = format!(
            "{status} criterion {}: {} [{checked} comparisons, {:.3} s{budget}]",
            self.id,
            self.title,
            self.elapsed.as_secs_f64()
        );
        for c in self.checks.iter().filter(|c| !c.passed) {
            s.push_str(&format!(
                "\n    failed check {:?}: {:?}",
                c.name, c.failures
            ));
        }
        s
    }
}

fn run(
    id: u32,
    title: &'static str,
    budget: Option<Duration>,
    f: impl FnOnce() -> Vec<CheckResult>,
) -> Outcome {
    let start = Instant::now();
    let checks = f();
    Outcome {
        id,
        title,
        checks,
        elapsed: start.elapsed(),
        budget,
    }
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

#[test]
fn acceptance() {
    let exec = Execution::default();
    let model = AlgebraModel::Cp2;
    let outcomes = vec![
        run(
            1,
            "lattice point counts (d+2)(d+1)/2 for d <= 50",
            secs(1),
            || vec![hilbert_counts(50)],
        ),
        run(
            2,
            "product = Q-basis polynomial multiplication for n, m <= 6",
            secs(30),
            || vec![ring_iso_check(6, exec)],
        ),
        run(3, "associativity for total degree <= 9", None, || {
            vec![associativity_sweep(&model, 9, exec)]
        }),
        run(
            4,
            "admissible words, homotopy counts and product coefficients for k <= 8",
            None,
            || homotopy_suite(8, exec).checks,
        ),
        run(
            5,
            "tropical counts for n, m <= 4, invariance for k <= 10, x^2 z^2 case",
            None,
            || tropical_suite(4, 10, exec).checks,
        ),
        run(
            6,
            "partition identity for sum <= 12, dp6 point counts for d <= 10",
            None,
            || class_p_suite(12, Dp6Params::default(), 10).checks,
        ),
        run(
            7,
            "wrapped products, continuation maps and dilation centers",
            None,
            || wrapped_suite(4, default_windows().0, exec).checks,
        ),
        run(
            8,
            "flux relations, log integral, critical values, Hessian metric",
            secs(60),
            || numeric_suite(1e-10, exec).checks,
        ),
    ];
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed: Vec<u32> = outcomes
        .iter()
        .filter(|o| !o.passed())
        .map(|o| o.id)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
