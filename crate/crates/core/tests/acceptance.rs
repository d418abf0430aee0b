//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Run with `cargo test -p mrplate --test acceptance`.

use std::collections::BTreeSet;
use std::time::Instant;

use mrplate::assembly::{apply_boundary_conditions, assemble, BoundaryKind, ElementSpec, Model};
use mrplate::bench::{analytical, rl_label, run_benchmark, BenchCase, BenchOptions, BenchRow, Status};
use mrplate::element::{element_load_point, element_load_uniform, element_stiffness, MRElement, PlateMaterial};
use mrplate::geometry::{canonicalize_triangle, grid_nodes, node_count, node_position, HexDomain, LocalFrame, Point2};
use mrplate::oracle::{build_equivalent_mono, equivalence_check};
use mrplate::shapefn::{basis_eval, basis_eval_in_domain, split_shape_eval};
use mrplate::solve::{field_eval, moment_eval, rotate_moments, solve_system};
use nalgebra::DMatrix;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn p(x: f64, y: f64) -> Point2<f64> {
    Point2::new(x, y)
}

fn rows_for(case: BenchCase, ms: &[usize]) -> Vec<BenchRow> {
    run_benchmark(case, ms, BenchOptions::default()).expect("benchmark solves")
}

/// Compares one probe series against its references.
fn series(rows: &[BenchRow], case: &str, quantity: &str) -> Outcome {
    let picked: Vec<&BenchRow> = rows.iter().filter(|r| r.case == case && r.quantity == quantity).collect();
    let pass = !picked.is_empty() && picked.iter().all(|r| r.status == Status::Pass);
    let detail = picked
        .iter()
        .map(|r| {
            format!(
                "m={} {:.4} vs {:.4}±{} {}",
                r.m,
                r.value,
                r.expected.unwrap_or(f64::NAN),
                r.tolerance.unwrap_or(f64::NAN),
                r.status
            )
        })
        .collect::<Vec<_>>()
        .join("; ");
    Outcome { pass, detail: format!("{case} {quantity}: {detail}") }
}

fn both(a: Outcome, b: Outcome) -> Outcome {
    Outcome { pass: a.pass && b.pass, detail: format!("{} | {}", a.detail, b.detail) }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let rows = rows_for(BenchCase::Square, &[2, 4, 8, 16]);
    let elapsed = start.elapsed().as_secs_f64();
    let mut out = series(&rows, "square_ss", "deflection");
    let values: Vec<f64> =
        rows.iter().filter(|r| r.case == "square_ss" && r.quantity == "deflection").map(|r| r.value).collect();
    let increasing = values.windows(2).all(|w| w[1] > w[0]);
    out.pass &= elapsed < 5.0 && increasing;
    out.detail = format!("{}; monotone increasing: {increasing}; runtime {elapsed:.2} s", out.detail);
    out
}

fn criterion_2() -> Outcome {
    series(&rows_for(BenchCase::Square, &[2, 4, 8, 16]), "square_clamped", "deflection")
}

fn criterion_3() -> Outcome {
    let rows = rows_for(BenchCase::Square, &[2, 4, 8, 16]);
    both(series(&rows, "square_ss", "central_moment"), series(&rows, "square_clamped", "side_moment"))
}

fn criterion_4() -> Outcome {
    series(&rows_for(BenchCase::Skew60, &[8, 12, 16]), "skew60_ss_free", "deflection")
}

fn criterion_5() -> Outcome {
    let rows = rows_for(BenchCase::CircularQuadrant, &[3, 6]);
    let primary = both(
        both(series(&rows, "circular_clamped", "deflection"), series(&rows, "circular_ss", "deflection")),
        series(&rows, "circular_ss", "central_moment"),
    );
    if primary.pass {
        return primary;
    }
    // fallback: within 2% of the analytical row at m = 12
    let fine = rows_for(BenchCase::CircularQuadrant, &[12]);
    let mut ok = true;
    let mut parts = Vec::new();
    for (case, variant, quantity) in [
        ("circular_clamped", "clamped", "deflection"),
        ("circular_ss", "ss", "deflection"),
        ("circular_ss", "ss", "central_moment"),
    ] {
        let exact = analytical(BenchCase::CircularQuadrant, variant, quantity).unwrap();
        let got = fine.iter().find(|r| r.case == case && r.quantity == quantity).unwrap().value;
        let rel = (got - exact).abs() / exact.abs();
        ok &= rel <= 0.02;
        parts.push(format!("{case} {quantity} {got:.5} vs {exact:.5} ({:.1}%)", 100.0 * rel));
    }
    Outcome { pass: ok, detail: format!("{} | fallback m=12: {}", primary.detail, parts.join("; ")) }
}

fn criterion_6() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    let mut checked = 0;
    for case in BenchCase::ALL {
        for variant in case.variants() {
            for &m in case.reference_levels() {
                let model = variant.model(m, false);
                let report = equivalence_check(&model, &build_equivalent_mono(&model).unwrap()).unwrap();
                checked += 1;
                worst = worst.max(report.max_k_diff).max(report.max_solution_diff).max(report.max_rhs_diff);
                if !report.pass {
                    failures.push(format!("{case}_{} m={m}", variant.label));
                }
            }
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!("{checked} models, worst relative difference {worst:.2e}, failures: {failures:?}"),
    }
}

fn frames() -> Vec<LocalFrame<f64>> {
    let tris = [
        [p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)],
        [p(0.2, -0.1), p(1.7, 0.4), p(0.9, 1.3)],
        [p(-1.0, 2.0), p(-2.5, 1.0), p(0.3, 0.1)],
        [p(0.0, 0.0), p(2.0, 0.0), p(2.0, 0.4)],
        [p(0.5, 0.5), p(0.6, 1.9), p(-0.8, 0.7)],
    ];
    tris.iter().map(|t| canonicalize_triangle(t[0], t[1], t[2]).unwrap()).collect()
}

fn interior_points(frame: &LocalFrame<f64>) -> Vec<Point2<f64>> {
    let [a, b, c] = frame.local_vertices();
    [(0.2, 0.3), (0.61, 0.17), (0.05, 0.9), (0.33, 0.33), (0.8, 0.1)]
        .iter()
        .map(|&(u, v)| a * (1.0 - u - v) + b * u + c * v)
        .collect()
}

fn jet(elem: &MRElement<f64>, a: &[f64], q: Point2<f64>) -> [f64; 6] {
    let cell = elem.locate_cell(q, 1e-12).unwrap();
    let mut out = [0.0; 6];
    for (k, t) in elem.cell_basis(&cell, q).iter().enumerate() {
        let base = 3 * cell.corner_nodes[k].linear(elem.m);
        for (c, f) in t.components().iter().enumerate() {
            let co = a[base + c];
            let vals = [f.value, f.grad[0], f.grad[1], f.hess[0], f.hess[1], f.hess[2]];
            for (o, v) in out.iter_mut().zip(vals) {
                *o += co * v;
            }
        }
    }
    out
}

fn criterion_7() -> Outcome {
    let material = PlateMaterial::unit_rigidity(0.3).unwrap();
    let mut failed: BTreeSet<&str> = BTreeSet::new();
    let mut check = |name: &'static str, ok: bool| {
        if !ok {
            failed.insert(name);
        }
    };
    for frame in frames() {
        for m in [1usize, 2, 3, 5] {
            let nodes = grid_nodes(m);
            for &i in &nodes {
                for &j in &nodes {
                    let b = basis_eval(&frame, m, i, node_position(&frame, m, j).unwrap()).unwrap();
                    let d = if i == j { 1.0 } else { 0.0 };
                    check(
                        "kronecker",
                        (b.w_fn.value - d).abs() < 1e-12
                            && b.thx_fn.value.abs() < 1e-12
                            && b.thy_fn.value.abs() < 1e-12,
                    );
                }
            }
        }
        for m in [1usize, 2, 4] {
            let elem = MRElement::new(frame, m, material).unwrap();
            let quad =
                |q: Point2<f64>| 0.3 + 0.2 * q.x - 0.7 * q.y + 0.9 * q.x * q.x - 0.4 * q.y * q.y + 0.6 * q.x * q.y;
            let a: Vec<f64> = elem
                .nodes()
                .iter()
                .flat_map(|&n| {
                    let x = node_position(&frame, m, n).unwrap();
                    [quad(x), -0.7 - 0.8 * x.y + 0.6 * x.x, -(0.2 + 1.8 * x.x + 0.6 * x.y)]
                })
                .collect();
            for q in interior_points(&frame) {
                let cell = elem.locate_cell(q, 1e-12).unwrap();
                let unity: f64 = elem.cell_basis(&cell, q).iter().map(|t| t.w_fn.value).sum();
                check("partition of unity", (unity - 1.0).abs() < 1e-12);
                let j = jet(&elem, &a, q);
                check(
                    "quadratic reproduction",
                    (j[0] - quad(q)).abs() < 1e-10
                        && (j[3] - 1.8).abs() < 1e-8
                        && (j[4] + 0.8).abs() < 1e-8
                        && (j[5] - 0.6).abs() < 1e-8,
                );
                let h = 1e-5 * frame.a();
                for k in 0..3 {
                    let (node, dom) = (cell.corner_nodes[k], cell.corner_domains[k]);
                    let f = |x: Point2<f64>| basis_eval_in_domain(&frame, m, node, dom, x).w_fn;
                    let c = f(q);
                    let gx = (f(q + p(h, 0.0)).value - f(q - p(h, 0.0)).value) / (2.0 * h);
                    let hxy = (f(q + p(0.0, h)).grad[0] - f(q - p(0.0, h)).grad[0]) / (2.0 * h);
                    let scale = 1.0 + c.grad[0].abs() + c.hess[2].abs();
                    check(
                        "finite differences",
                        (gx - c.grad[0]).abs() < 1e-6 * scale && (hxy - c.hess[2]).abs() < 1e-5 * scale,
                    );
                }
                let f = element_load_point(&elem, 2.5, q).unwrap();
                check("load totals", (f.iter().step_by(3).sum::<f64>() - 2.5).abs() < 1e-12);
            }
            let f = element_load_uniform(&elem, 1.5).unwrap();
            check("load totals", (f.iter().step_by(3).sum::<f64>() - 1.5 * frame.area()).abs() < 1e-12);
        }
        let [_, a2, a3] = frame.local_vertices();
        let spokes = [
            (a2, HexDomain::D6, HexDomain::D1),
            (a3, HexDomain::D1, HexDomain::D2),
            (a3 - a2, HexDomain::D2, HexDomain::D3),
            (-a2, HexDomain::D3, HexDomain::D4),
            (-a3, HexDomain::D4, HexDomain::D5),
            (a2 - a3, HexDomain::D5, HexDomain::D6),
        ];
        for (dir, left, right) in spokes {
            for t in [0.1, 0.5, 0.83] {
                let l = split_shape_eval(left, dir * t, &frame).unwrap();
                let r = split_shape_eval(right, dir * t, &frame).unwrap();
                check("sub-domain continuity", (0..3).all(|c| (l[c].value - r[c].value).abs() < 1e-11));
            }
        }
        for m in [1usize, 2, 3] {
            let elem = MRElement::new(frame, m, material).unwrap();
            let k = element_stiffness(&elem).unwrap();
            let n = k.rows();
            check("stiffness symmetry", k.asymmetry() <= 1e-12 * k.max_abs());
            let eig = DMatrix::from_fn(n, n, |i, j| k[(i, j)]).symmetric_eigen();
            let lmax = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
            check("stiffness PSD", eig.eigenvalues.iter().all(|&l| l > -1e-9 * lmax));
            check("rigid nullspace", eig.eigenvalues.iter().filter(|&&l| l.abs() < 1e-9 * lmax).count() == 3);
            let mut coupled = BTreeSet::new();
            for cell in elem.cells() {
                for x in cell.corner_nodes {
                    for y in cell.corner_nodes {
                        coupled.insert((x.linear(m), y.linear(m)));
                    }
                }
            }
            for i in 0..node_count(m) {
                for j in 0..node_count(m) {
                    if !coupled.contains(&(i, j)) {
                        check("bandedness", (0..9).all(|c| k[(3 * i + c / 3, 3 * j + c % 3)] == 0.0));
                    }
                }
            }
        }
    }

    let square = |m: usize, map: &dyn Fn(Point2<f64>) -> Point2<f64>| {
        let c = [p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)].map(map);
        let mut model = Model::new(
            vec![ElementSpec { vertices: [c[0], c[1], c[2]], m }, ElementSpec { vertices: [c[0], c[2], c[3]], m }],
            material,
        )
        .with_uniform_load(1.0)
        .with_point_load(map(p(0.3, 0.7)), 0.4);
        for i in 0..4 {
            model = model.with_bc(c[i], c[(i + 1) % 4], BoundaryKind::Clamped);
        }
        model
    };
    for angle in [0.4f64, 2.2, -1.3] {
        let (c, s) = (angle.cos(), angle.sin());
        let rot = |v: Point2<f64>| p(c * v.x - s * v.y, s * v.x + c * v.y);
        let a = square(3, &|v| v);
        let b = square(3, &rot);
        let ra = apply_boundary_conditions(&assemble(&a).unwrap(), &a.bcs).unwrap();
        let rb = apply_boundary_conditions(&assemble(&b).unwrap(), &b.bcs).unwrap();
        let (sa, sb) = (solve_system(&ra).unwrap(), solve_system(&rb).unwrap());
        let probe = p(0.41, 0.58);
        let (fa, fb) = (field_eval(&sa, probe).unwrap(), field_eval(&sb, rot(probe)).unwrap());
        let expect = rotate_moments(moment_eval(&sa, probe).unwrap(), (c, s));
        let got = moment_eval(&sb, rot(probe)).unwrap();
        check(
            "rotation invariance",
            (fa.w - fb.w).abs() < 1e-10 * fa.w.abs()
                && (expect.mx - got.mx).abs() < 1e-9
                && (expect.mxy - got.mxy).abs() < 1e-9,
        );
        check("reaction balance", (sa.vertical_reaction() + 1.4).abs() < 1e-9);
        check("reaction balance", (sb.vertical_reaction() + 1.4).abs() < 1e-9);
    }

    Outcome {
        pass: failed.is_empty(),
        detail: if failed.is_empty() {
            "kronecker, partition of unity, continuity, finite differences, quadratic reproduction, symmetry/PSD/nullspace, bandedness, load totals, rotation invariance, reaction balance".into()
        } else {
            format!("failing: {failed:?}")
        },
    }
}

fn criterion_8() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for case in BenchCase::ALL {
        let variant = &case.variants()[0];
        for &m in case.reference_levels() {
            let model = variant.model(m, false);
            let report = equivalence_check(&model, &build_equivalent_mono(&model).unwrap()).unwrap();
            ok &= report.multi_nodes == report.mono_nodes;
            lines.push(format!(
                "{case} m={m} RL {} per element: {} nodes / {} DOFs (conventional {} nodes)",
                rl_label(m),
                report.multi_nodes,
                3 * report.multi_nodes,
                report.mono_nodes
            ));
        }
    }
    Outcome { pass: ok && criterion_6().pass, detail: lines.join("; ") }
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("square SS deflection", criterion_1),
        ("square clamped deflection", criterion_2),
        ("square moments", criterion_3),
        ("skew 60 deflection", criterion_4),
        ("circular quadrant", criterion_5),
        ("conventional equivalence", criterion_6),
        ("property suites", criterion_7),
        ("node-count report", criterion_8),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = run();
        let status = if outcome.pass { "PASS" } else { "FAIL" };
        if !outcome.pass {
            failures += 1;
        }
        println!("criterion {} [{name}]: {status}: {}", i + 1, outcome.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
