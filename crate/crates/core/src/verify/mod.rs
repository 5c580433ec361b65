//! Exhaustive verification suites over small point sets, reported as
//! per-check records with expected and observed values.
//!
//! Every check runs on one instance and states one bound or identity. The
//! report is JSON first; the human table is rendered from that JSON.

mod suites;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::generators::{convex_gon, mother_example, random_points, triangle_with_center, twisted_double_gon};
use crate::geom::PointSet;

/// Default number of random point sets per suite.
pub const DEFAULT_RANDOM_SETS: usize = 50;
/// Coordinates of random instances are drawn from `[0, RANDOM_BOUND]²`.
pub const RANDOM_BOUND: i64 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// Flippable edges and simultaneous flips of full triangulations.
    Thm2,
    /// Degrees in the bistellar flip graph.
    Thm4,
    /// Vertex connectivity of the bistellar flip graph.
    Thm5,
    /// Vertex connectivity of the edge flip graph.
    Thm3ii,
    Links,
    Coarsening,
    Regularity,
    Twisted,
    Mother,
    Poset,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Thm2,
        Suite::Thm4,
        Suite::Thm5,
        Suite::Thm3ii,
        Suite::Links,
        Suite::Coarsening,
        Suite::Regularity,
        Suite::Twisted,
        Suite::Mother,
        Suite::Poset,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Thm2 => "thm2",
            Suite::Thm4 => "thm4",
            Suite::Thm5 => "thm5",
            Suite::Thm3ii => "thm3ii",
            Suite::Links => "links",
            Suite::Coarsening => "coarsening",
            Suite::Regularity => "regularity",
            Suite::Twisted => "twisted",
            Suite::Mother => "mother",
            Suite::Poset => "poset",
        }
    }

    /// Largest instance size run when `--n-max` is not given.
    pub fn default_n_max(&self) -> usize {
        match self {
            Suite::Thm2 => 9,
            Suite::Thm4 | Suite::Thm5 | Suite::Thm3ii => 8,
            Suite::Links | Suite::Poset => 7,
            // Per-subdivision regularity checks stop one size below this.
            Suite::Regularity => 7,
            // Convex sets go one further.
            Suite::Coarsening => 6,
            Suite::Twisted => 10,
            Suite::Mother => 6,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(Suite::name).collect();
                format!("unknown suite {s:?}; expected one of {}", names.join(", "))
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    pub n_max: Option<usize>,
    /// Overrides every enumeration cap when set.
    pub cap: Option<usize>,
    pub seed: u64,
    pub random_sets: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            n_max: None,
            cap: None,
            seed: 0,
            random_sets: DEFAULT_RANDOM_SETS,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    /// The property checked, in words.
    pub claim: String,
    pub instance: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
    /// Advisory checks are reported but never fail the run.
    pub advisory: bool,
    pub runtime_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suites: Vec<String>,
    pub n_max: Option<usize>,
    pub seed: u64,
    pub passed: usize,
    pub failed: usize,
    pub advisory_failed: usize,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    fn new(suites: &[Suite], opts: &Options, mut checks: Vec<Check>) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        let failed = checks.iter().filter(|c| !c.pass && !c.advisory).count();
        let advisory_failed = checks.iter().filter(|c| !c.pass && c.advisory).count();
        VerificationReport {
            suites: suites.iter().map(|s| s.name().to_string()).collect(),
            n_max: opts.n_max,
            seed: opts.seed,
            passed: checks.iter().filter(|c| c.pass).count(),
            failed,
            advisory_failed,
            checks,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Human-readable table, rendered from the JSON form.
    pub fn to_table(&self) -> String {
        let v: serde_json::Value = serde_json::from_str(&self.to_json()).expect("own JSON parses");
        let text = |c: &serde_json::Value, k: &str| c[k].as_str().unwrap_or_default().to_string();
        let rows: Vec<[String; 5]> = v["checks"]
            .as_array()
            .map(|a| {
                a.iter()
                    .map(|c| {
                        let status = match (c["pass"].as_bool(), c["advisory"].as_bool()) {
                            (Some(true), _) => "pass",
                            (_, Some(true)) => "note",
                            _ => "FAIL",
                        };
                        [
                            status.to_string(),
                            text(c, "id"),
                            text(c, "expected"),
                            text(c, "observed"),
                            format!("{:.1}", c["runtime_ms"].as_f64().unwrap_or(0.0)),
                        ]
                    })
                    .collect()
            })
            .unwrap_or_default();
        let header = ["status", "check", "expected", "observed", "ms"].map(String::from);
        let mut widths = header.clone().map(|h| h.chars().count());
        for r in &rows {
            for (w, cell) in widths.iter_mut().zip(r) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |r: &[String; 5]| {
            let cells: Vec<String> = r
                .iter()
                .zip(widths)
                .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                .collect();
            format!("{}\n", cells.join("  ").trim_end())
        };
        let mut out = line(&header);
        for r in &rows {
            out.push_str(&line(r));
        }
        out.push_str(&format!(
            "{} passed, {} failed, {} advisory notes\n",
            v["passed"], v["failed"], v["advisory_failed"]
        ));
        out
    }
}

/// Runs `suites` and collects every check, ordered by id.
pub fn run(suites: &[Suite], opts: &Options) -> VerificationReport {
    let mut checks = Vec::new();
    for s in suites {
        checks.extend(suites::run_suite(*s, opts));
    }
    VerificationReport::new(suites, opts, checks)
}

/// A named point set used by the suites.
#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub family: Family,
    pub ps: Arc<PointSet>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Convex,
    Twisted,
    Mother,
    TriangleCenter,
    Random,
}

impl Instance {
    pub fn n(&self) -> usize {
        self.ps.len()
    }

    pub fn h(&self) -> usize {
        self.ps.h()
    }
}

/// The standard test sets with `lo <= n <= hi`: convex polygons, twisted
/// double-gons, both mother examples, the triangle with a center point and
/// `random_sets` seeded random sets cycling through the sizes.
pub fn test_sets(lo: usize, hi: usize, seed: u64, random_sets: usize) -> Vec<Instance> {
    let lo = lo.max(3);
    let mut out = Vec::new();
    if hi < lo {
        return out;
    }
    for n in lo.max(3)..=hi {
        out.push(Instance {
            name: format!("convex-{n:02}"),
            family: Family::Convex,
            ps: Arc::new(convex_gon(n)),
        });
    }
    for k in 3..=hi / 2 {
        if 2 * k >= lo {
            out.push(Instance {
                name: format!("twisted-k{k}"),
                family: Family::Twisted,
                ps: Arc::new(twisted_double_gon(k).expect("twisted double-gons exist for k >= 3")),
            });
        }
    }
    if (lo..=hi).contains(&6) {
        for (c, tag) in [(true, "concurrent"), (false, "skew")] {
            out.push(Instance {
                name: format!("mother-{tag}"),
                family: Family::Mother,
                ps: Arc::new(mother_example(c)),
            });
        }
    }
    if (lo..=hi).contains(&4) {
        out.push(Instance {
            name: "triangle-center".into(),
            family: Family::TriangleCenter,
            ps: Arc::new(triangle_with_center()),
        });
    }
    let span = (hi - lo.max(4) + 1) as u64;
    if hi >= 4 {
        for i in 0..random_sets as u64 {
            let n = lo.max(4) + (i % span) as usize;
            let s = seed + i;
            out.push(Instance {
                name: format!("random-n{n:02}-s{s:03}"),
                family: Family::Random,
                ps: Arc::new(random_points(n, s, RANDOM_BOUND).expect("random sets of this size always succeed")),
            });
        }
    }
    out
}

/// Runs `f`, timing it and turning errors into failed checks.
pub(crate) fn make_check(
    suite: Suite,
    claim_id: &str,
    claim: &str,
    instance: &str,
    advisory: bool,
    f: impl FnOnce() -> Result<(String, String, bool), String>,
) -> Check {
    let start = Instant::now();
    let (expected, observed, pass) = match f() {
        Ok(x) => x,
        Err(e) => ("no error".into(), format!("error: {e}"), false),
    };
    Check {
        id: format!("{suite}.{claim_id}.{instance}"),
        claim: claim.to_string(),
        instance: instance.to_string(),
        expected,
        observed,
        pass,
        advisory,
        runtime_ms: start.elapsed().as_secs_f64() * 1000.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>(), Ok(s));
        }
        assert!("thm9".parse::<Suite>().is_err());
    }

    #[test]
    fn test_sets_respect_bounds_and_are_deterministic() {
        let a = test_sets(4, 7, 3, 10);
        assert!(a.iter().all(|i| (4..=7).contains(&i.n())));
        let names: Vec<&str> = a.iter().map(|i| i.name.as_str()).collect();
        assert!(names.contains(&"twisted-k3") && names.contains(&"mother-skew"));
        let b = test_sets(4, 7, 3, 10);
        assert!(a.iter().zip(&b).all(|(x, y)| x.ps.points() == y.ps.points()));
    }

    #[test]
    fn table_mirrors_json() {
        let r = run(&[Suite::Mother], &Options::default());
        assert!(r.all_pass(), "{}", r.to_table());
        let t = r.to_table();
        for c in &r.checks {
            assert!(t.contains(&c.id));
        }
        let back: VerificationReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back.checks.len(), r.checks.len());
    }
}
