//! The bundled example quivers and the conclusions checked on each.

use serde::Serialize;

use crate::covering::{build_zcover, Window};
use crate::oracle::{resolve, Semisimple};
use crate::quiver::{grading, parse_quiver, ParseError, Quiver, Vertex};
use crate::singularity::{
    expand_once, is_zero_vertex, normalize, reduce_to_generators, sg_generators, sg_is_trivial, ComponentKind,
    Reduction, StalkSum,
};

#[derive(Clone, Copy, Debug)]
pub struct Example {
    pub name: &'static str,
    pub file: &'static str,
    pub source: &'static str,
}

pub const EXAMPLES: [Example; 3] = [
    Example {
        name: "generators",
        file: "generators.quiver",
        source: include_str!("../corpus/generators.quiver"),
    },
    Example {
        name: "line",
        file: "line.quiver",
        source: include_str!("../corpus/line.quiver"),
    },
    Example {
        name: "cycle",
        file: "cycle.quiver",
        source: include_str!("../corpus/cycle.quiver"),
    },
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub example: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

struct Checks(Vec<Check>);

impl Checks {
    fn add(&mut self, name: impl Into<String>, passed: bool) {
        self.0.push(Check {
            name: name.into(),
            passed,
        });
    }
}

fn v(q: &Quiver, name: &str) -> Vertex {
    q.resolve_vertex(name).expect("corpus vertex")
}

fn sum(q: &Quiver, terms: &[(&str, i64)]) -> StalkSum {
    StalkSum::from_terms(terms.iter().map(|&(name, n)| (v(q, name), n, 1)))
}

/// Every term of the reduced form sits on `rep`.
fn reduces_onto(q: &Quiver, x: Vertex, rep: Vertex) -> bool {
    let report = sg_generators(q);
    match reduce_to_generators(&StalkSum::simple(x), q, &report, 4 * q.vertex_count() as u64 + 8) {
        Reduction::Reduced(r) => !r.is_empty() && r.terms().all(|(w, _, _)| w == rep),
        Reduction::Unknown { .. } => false,
    }
}

fn check_generators(q: &Quiver, c: &mut Checks) {
    let g = grading(q);
    c.add("not gradable", !g.gradable);
    c.add("grading period 2", g.period == 2);
    let dead = (1..=10).all(|i| is_zero_vertex(q, v(q, &i.to_string())));
    c.add("S_1 .. S_10 are zero", dead);
    c.add("S_11 and S_12 are nonzero", !is_zero_vertex(q, v(q, "11")) && !is_zero_vertex(q, v(q, "12")));
    c.add(
        "S_3 expands to S_1[1] + S_2[1]",
        expand_once(&sum(q, &[("3", 0)]), q) == sum(q, &[("1", 1), ("2", 1)]),
    );
    c.add(
        "S_4 expands to S_3[1] + S_5[1]",
        expand_once(&sum(q, &[("4", 0)]), q) == sum(q, &[("3", 1), ("5", 1)]),
    );
    c.add(
        "S_11 normalizes to S_12[1]",
        normalize(&sum(q, &[("11", 0)]), q) == sum(q, &[("12", 1)]),
    );
    let report = sg_generators(q);
    c.add(
        "single ray generator represented by 12",
        report.components.len() == 1
            && report.components[0].kind == ComponentKind::Ray
            && report.components[0].representative == v(q, "12"),
    );
    let rep = v(q, "12");
    let alive_simples = ["11", "12", "ray0.1", "ray0.2"];
    c.add(
        "alive simples reduce to shifts of S_12",
        alive_simples.iter().all(|&x| reduces_onto(q, v(q, x), rep)),
    );
}

fn check_line(q: &Quiver, c: &mut Checks) {
    let g = grading(q);
    c.add("gradable", g.gradable);
    c.add("grading period 0", g.period == 0);
    c.add("singularity category is nonzero", !sg_is_trivial(q));
    let report = sg_generators(q);
    c.add("single generator", report.components.len() == 1);
    let rep = report.components[0].representative;
    let samples = ["0", "ray0.1", "ray0.5", "ray1.1", "ray1.5"];
    c.add(
        "every simple reduces to a shift of the generator",
        samples.iter().all(|&x| reduces_onto(q, v(q, x), rep)),
    );
}

fn check_cycle(q: &Quiver, c: &mut Checks) {
    c.add("grading period 3", grading(q).period == 3);
    let path = build_zcover(q, "1", Window { lo: -4, hi: 5 }).map(|cover| {
        let w = cover.to_quiver();
        w.is_connected()
            && w.arrow_count() + 1 == w.vertex_count()
            && (0..w.vertex_count()).all(|x| w.out_arrows(x).len() <= 1 && w.in_arrows(x).len() <= 1)
    });
    c.add("covering window is a path", path == Ok(true));
    let report = sg_generators(q);
    c.add(
        "single cycle generator S_1 of period 3",
        report.components.len() == 1
            && report.components[0].representative == v(q, "1")
            && report.components[0].period == Some(3),
    );
    let rep = v(q, "1");
    c.add(
        "every simple reduces to a shift of S_1",
        ["1", "2", "3"].iter().all(|&x| reduces_onto(q, v(q, x), rep)),
    );
    let one = q.vertex_id("1").expect("corpus vertex");
    let periodic = resolve(q, one, 3).map(|r| {
        r.steps[3] == Semisimple::from([(one, 1)]) && r.steps[1] != Semisimple::from([(one, 1)])
    });
    c.add("third syzygy of S_1 is S_1, first is not", periodic == Ok(true));
}

/// Parses `source` and checks the conclusions recorded for example `name`.
pub fn run_example(name: &str, source: &str) -> Result<Verdict, ParseError> {
    let q = parse_quiver(source)?;
    let mut checks = Checks(Vec::new());
    match name {
        "generators" => check_generators(&q, &mut checks),
        "line" => check_line(&q, &mut checks),
        "cycle" => check_cycle(&q, &mut checks),
        other => checks.add(format!("unknown example `{other}`"), false),
    }
    let checks = checks.0;
    Ok(Verdict {
        example: name.to_string(),
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

pub fn run_corpus() -> Result<Vec<Verdict>, ParseError> {
    EXAMPLES.iter().map(|e| run_example(e.name, e.source)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_corpus_passes() {
        for verdict in run_corpus().unwrap() {
            for check in &verdict.checks {
                assert!(check.passed, "{}: {}", verdict.example, check.name);
            }
        }
    }

    #[test]
    fn corrupted_source_fails_to_parse() {
        let broken = EXAMPLES[2].source.replace("arrow a: 1 -> 2", "arrow a 1 -> 2");
        assert!(run_example("cycle", &broken).is_err());
    }
}
