//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use bcconf::awgn::{awgn_region, bounds, AwgnParams, PowerSplit};
use bcconf::model::{compose_full_joint, mi_vector};
use bcconf::polytope::Enumeration;
use bcconf::regions::{
    boundary_kind, check_equivalence, check_no_r1_corners, default_cards, inner_polytope, matched_aux, outer_polytope,
    sample_region, slice, special_region_for_aux, Axis,
};
use bcconf::sim::{estimate_errors_with, CodeParams, CodebookMode, ErrorStats, SimOptions};
use bcconf::{AuxJoint, ChannelLaw, ConferenceCapacity, Execution, HPolytope3, RateTriple, Tolerances};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn pass(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn c1(v: f64) -> ConferenceCapacity {
    ConferenceCapacity::new(v).unwrap()
}

fn information_identities() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut worst_chain, mut worst_markov) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let (aux, ch) = random_pair(&mut rng, 4);
        let j = compose_full_joint(&aux, &ch).unwrap();
        let i_uv = j.mutual_information(&["U", "V"], &["Y2"]).unwrap();
        let i_u = j.mutual_information(&["U"], &["Y2"]).unwrap();
        let i_v_u = j.conditional_mutual_information(&["V"], &["Y2"], &["U"]).unwrap();
        worst_chain = worst_chain.max((i_uv - i_u - i_v_u).abs());
        let markov = j.conditional_mutual_information(&["U", "V"], &["Y1", "Y2"], &["X"]).unwrap();
        worst_markov = worst_markov.max(markov.abs());
    }
    let el = t.elapsed();
    pass(
        worst_chain <= 1e-9 && worst_markov <= 1e-9 && el < Duration::from_secs(10),
        format!("max chain-rule residual {worst_chain:.1e}, max I(UV;Y1Y2|X) {worst_markov:.1e}, {}", secs(el)),
    )
}

/// Number of grid points per axis for the support-function check.
const GRID: usize = 24;

fn polytope_oracle() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let tol = Tolerances::default();
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for case in 0..200 {
        let (rows, oracle) = random_bounded(&mut rng, 10);
        let p = HPolytope3::from_rows(&rows);
        let got = match p.enumerate_vertices(&tol) {
            Enumeration::Bounded(v) => v,
            other => {
                failures.push(format!("case {case}: {other:?}"));
                continue;
            }
        };
        if got.len() != oracle.len() {
            failures.push(format!("case {case}: {} vertices, oracle {}", got.len(), oracle.len()));
            continue;
        }
        for o in &oracle {
            let d = got.points().iter().map(|g| dist(*g, *o)).fold(f64::INFINITY, f64::min);
            worst = worst.max(d);
            if d > 1e-6 {
                failures.push(format!("case {case}: oracle vertex {o:?} unmatched ({d:.1e})"));
            }
        }
        // Every feasible grid point is dominated by some vertex in every
        // probe direction.
        let (lo, hi) = oracle.iter().fold(([f64::INFINITY; 3], [f64::NEG_INFINITY; 3]), |(mut lo, mut hi), v| {
            for k in 0..3 {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
            (lo, hi)
        });
        let dirs: Vec<V3> = (0..16)
            .map(|_| [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)])
            .collect();
        let support: Vec<f64> =
            dirs.iter().map(|d| got.points().iter().map(|v| dot(*d, *v)).fold(f64::NEG_INFINITY, f64::max)).collect();
        let at = |k: usize, i: usize| lo[k] - 0.05 + (hi[k] - lo[k] + 0.1) * i as f64 / (GRID - 1) as f64;
        'grid: for i in 0..GRID {
            for j in 0..GRID {
                for k in 0..GRID {
                    let x = [at(0, i), at(1, j), at(2, k)];
                    if !p.contains(x, 0.0) {
                        continue;
                    }
                    if let Some(d) = dirs.iter().zip(&support).position(|(d, s)| dot(*d, x) > s + 1e-9) {
                        failures.push(format!("case {case}: feasible grid point {x:?} beyond vertices along {:?}", dirs[d]));
                        break 'grid;
                    }
                }
            }
        }
    }
    let el = t.elapsed();
    pass(
        failures.is_empty() && el < Duration::from_secs(30),
        format!(
            "200 polytopes, worst vertex distance {worst:.1e}, {} failures{}, {}",
            failures.len(),
            failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default(),
            secs(el)
        ),
    )
}

fn random_instance(rng: &mut ChaCha8Rng) -> (AuxJoint, ChannelLaw) {
    let x = rng.random_range(2..=3);
    let (y1, y2) = (rng.random_range(2..=3), rng.random_range(2..=3));
    let ch = ChannelLaw::random(rng, x, y1, y2);
    let (u, v) = (rng.random_range(1..=3), rng.random_range(1..=3));
    let aux = AuxJoint::random_dirichlet(rng, u, v, x);
    (aux, ch)
}

fn equivalence_suite() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let tol = Tolerances::default();
    let mut failures = Vec::new();
    let mut positive = 0;
    for case in 0..500 {
        let (aux, ch) = random_instance(&mut rng);
        let mi = mi_vector(&aux, &ch).unwrap();
        let c = c1([0.0, 0.1, 0.5, 2.0][case % 4]);
        let outer = outer_polytope(&mi, c);
        let inner = inner_polytope(&mi, c);
        let report = check_equivalence(&mi, c, &tol);
        if !report.passed {
            failures.push(format!("case {case}: {:?}", report.first_failure()));
        }
        for v in outer.vertices().points() {
            if v.iter().all(|x| *x > 1e-9) {
                positive += 1;
                let rows = outer.halfspaces();
                if !(rows[0].is_active(*v, 1e-8) && rows[1].is_active(*v, 1e-8)) {
                    failures.push(format!("case {case}: rows 1-2 not active at {v:?}"));
                }
                if !inner.contains(*v, 1e-9) {
                    failures.push(format!("case {case}: {v:?} violates inner by {:.1e}", inner.max_excess(*v)));
                }
            }
        }
        for v in inner.vertices().points() {
            if !outer.contains(*v, 1e-9) {
                failures.push(format!("case {case}: inner vertex {v:?} outside outer"));
            }
        }
    }
    let el = t.elapsed();
    pass(
        failures.is_empty() && el < Duration::from_secs(60),
        format!(
            "500 instances, {positive} positive outer vertices, {} failures{}, {}",
            failures.len(),
            failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default(),
            secs(el)
        ),
    )
}

fn slice_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let tol = Tolerances::default();
    let mut failures = Vec::new();
    let mut checked = 0;
    for case in 0..200 {
        let (aux, ch) = random_instance(&mut rng);
        let c = c1([0.0, 0.1, 0.5, 2.0][case % 4]);
        let outer = outer_polytope(&mi_vector(&aux, &ch).unwrap(), c);
        for axis in [Axis::R0p, Axis::R0, Axis::R1] {
            let kind = boundary_kind(axis);
            let special = special_region_for_aux(kind, &matched_aux(&aux, axis), &ch, c).unwrap();
            for v in slice(&outer, axis).vertices().points() {
                checked += 1;
                if !special.contains(*v, tol.feasibility) {
                    failures.push(format!("case {case} {}: {v:?} excess {:.1e}", kind.name(), special.max_excess(*v)));
                }
            }
        }
    }
    pass(
        failures.is_empty(),
        format!(
            "200 instances x 3 slices, {checked} slice vertices, {} failures{}",
            failures.len(),
            failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default()
        ),
    )
}

fn no_r1_corners() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let tol = Tolerances::default();
    let mut failures = Vec::new();
    let mut corners = 0;
    for case in 0..200 {
        let x = rng.random_range(2..=4);
        let u = rng.random_range(1..=4);
        let (y1, y2) = (rng.random_range(2..=4), rng.random_range(2..=4));
        let ch = ChannelLaw::random(&mut rng, x, y1, y2);
        let p_ux = AuxJoint::random_dirichlet(&mut rng, u, 1, x);
        let aux = p_ux.with_v_equal_x();
        let c = c1([0.0, 0.1, 0.5, 2.0][case % 4]);
        let r = check_no_r1_corners(&mi_vector(&aux, &ch).unwrap(), c, &tol);
        corners += r.corners.len();
        if !r.passed {
            failures.push(format!("case {case}: {:?}", r.failures[0]));
        }
    }
    pass(
        failures.is_empty(),
        format!(
            "200 laws p(u,x), {corners} positive corners, {} failures{}",
            failures.len(),
            failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default()
        ),
    )
}

fn awgn_closed_form() -> Outcome {
    // 50-digit evaluation of the four bounds for P = 10, N1 = 1, N2 = 4,
    // C1 = 0.25 and split (0.6, 0.3, 0.1).
    let reference = [0.40367746102880205, 0.5890359525563188, 0.5, 1.160964047443681];
    let p = AwgnParams::new(10.0, 1.0, 4.0, c1(0.25)).unwrap();
    let b = bounds(&p, &PowerSplit::new(0.6, 0.3, 0.1).unwrap());
    let got = [b.r0_max, b.r0p_max, b.r1_max, b.r0p_plus_r1_max];
    let rel = got.iter().zip(reference).map(|(g, r)| ((g - r) / r).abs()).fold(0.0, f64::max);

    let mut regions = Vec::new();
    for power in [5.0, 10.0] {
        for c in [0.0, 0.25, 0.5] {
            let r = awgn_region(&AwgnParams::new(power, 1.0, 4.0, c1(c)).unwrap(), 21).unwrap();
            regions.push((power, c, r));
        }
    }
    let mut violations = Vec::new();
    for (pa, ca, a) in &regions {
        for (pb, cb, b) in &regions {
            if pa <= pb && ca <= cb && (pa, ca) != (pb, cb) {
                for v in a.hull_vertices().points() {
                    if !b.hull.contains(*v, 1e-9) {
                        violations.push(format!("P={pa},C1={ca} vertex {v:?} not in P={pb},C1={cb}"));
                    }
                }
            }
        }
    }
    pass(
        rel <= 1e-12 && violations.is_empty(),
        format!(
            "max relative error {rel:.1e}; {} monotonicity violations{}",
            violations.len(),
            violations.first().map(|f| format!(" (first: {f})")).unwrap_or_default()
        ),
    )
}

/// The sampled law whose strictly positive inner vertex has the largest
/// sum rate, and that vertex.
fn sampled_vertex(ch: &ChannelLaw, c: ConferenceCapacity) -> (AuxJoint, [f64; 3]) {
    let region = sample_region(ch, c, 200, default_cards(ch.x_size()), 7).unwrap();
    let mut best: Option<(AuxJoint, [f64; 3])> = None;
    for s in &region.samples {
        for v in s.inner_vertices.points() {
            if v.iter().all(|x| *x > 1e-6)
                && best.as_ref().is_none_or(|(_, b)| v.iter().sum::<f64>() > b.iter().sum::<f64>())
            {
                best = Some((s.aux.clone(), *v));
            }
        }
    }
    best.expect("some sample has a strictly positive inner vertex")
}

fn describe(r: &Result<ErrorStats, bcconf::Error>) -> String {
    match r {
        Ok(s) => format!("pe_no_conf {:.4}, pe_conf {:.4} (ci {:.4})", s.pe_no_conf, s.pe_conf, s.ci_halfwidth),
        Err(e) => format!("error: {e}"),
    }
}

fn achievability_trend(runs: &mut Vec<ErrorStats>) -> Outcome {
    let t = Instant::now();
    let ch = ChannelLaw::bsc_pair(0.05, 0.15).unwrap();
    let c = c1(0.2);
    let (aux, v) = sampled_vertex(&ch, c);
    let rates = RateTriple::from_array(v).unwrap().scaled(0.7);
    let opts = SimOptions { exec: Execution::Sequential, ..SimOptions::default() };
    let mut lines = Vec::new();
    let mut stats = Vec::new();
    for n in [100, 200, 400] {
        let p = CodeParams { n, rates, c1: c, aux: aux.clone(), ch: ch.clone(), eps: 0.05, seed: 7 };
        let r = estimate_errors_with(&p, 2000, &opts);
        lines.push(format!("n={n}: {}", describe(&r)));
        if let Ok(s) = r {
            runs.push(s.clone());
            stats.push(s);
        }
    }
    let el = t.elapsed();
    let monotone = stats.len() == 3
        && stats.windows(2).all(|w| {
            let slack = w[0].ci_halfwidth + w[1].ci_halfwidth;
            w[1].pe_no_conf <= w[0].pe_no_conf + slack && w[1].pe_conf <= w[0].pe_conf + slack
        });
    let small = stats.len() == 3 && stats[2].pe_no_conf < 0.1 && stats[2].pe_conf < 0.1;
    pass(
        monotone && small && el < Duration::from_secs(600),
        format!("rates 0.7 x ({:.4}, {:.4}, {:.4}); {}; {}", v[0], v[1], v[2], lines.join("; "), secs(el)),
    )
}

fn converse_witness(runs: &mut Vec<ErrorStats>) -> Outcome {
    let ch = ChannelLaw::bsc_pair(0.05, 0.15).unwrap();
    let c = c1(0.2);
    let (aux, v) = sampled_vertex(&ch, c);
    let mi = mi_vector(&aux, &ch).unwrap();
    let base = RateTriple::from_array(v).unwrap().scaled(0.7);
    let rates = RateTriple::new(mi.i_u_y2 + 0.2, base.r0p, base.r1).unwrap();
    let p = CodeParams { n: 400, rates, c1: c, aux, ch, eps: 0.05, seed: 8 };
    let r = estimate_errors_with(&p, 2000, &SimOptions::default());
    let ok = matches!(&r, Ok(s) if s.pe_no_conf > 0.3);
    let detail = format!("R0 = I(U;Y2) + 0.2 = {:.4} at n=400: {}", rates.r0, describe(&r));
    if let Ok(s) = r {
        runs.push(s);
    }
    pass(ok, detail)
}

fn error_set_inclusion(runs: &mut Vec<ErrorStats>) -> Outcome {
    let ch = ChannelLaw::bsc_pair(0.05, 0.15).unwrap();
    let aux = binary_superposition(0.1, 0.1);
    let modes = [CodebookMode::Fixed, CodebookMode::PerBatch { size: 25 }, CodebookMode::PerTrial];
    let mut k = 0;
    for n in [10, 20, 40] {
        for (r, cc) in [((0.1, 0.1, 0.1), 0.0), ((0.05, 0.15, 0.05), 0.05), ((0.1, 0.2, 0.0), 0.2), ((0.0, 0.1, 0.2), 1.0)] {
            let p = CodeParams {
                n,
                rates: RateTriple::new(r.0, r.1, r.2).unwrap(),
                c1: c1(cc),
                aux: aux.clone(),
                ch: ch.clone(),
                eps: 0.15,
                seed: k,
            };
            let opts = SimOptions { mode: modes[k as usize % 3], ..SimOptions::default() };
            runs.push(estimate_errors_with(&p, 300, &opts).unwrap());
            k += 1;
        }
    }
    let noiseless = CodeParams {
        n: 8,
        rates: RateTriple::new(0.125, 0.125, 0.125).unwrap(),
        c1: c1(0.125),
        aux: layered_uniform(),
        ch: ChannelLaw::noiseless(8),
        eps: 0.05,
        seed: 9,
    };
    runs.push(estimate_errors_with(&noiseless, 300, &SimOptions::default()).unwrap());
    let bad: Vec<&ErrorStats> =
        runs.iter().filter(|s| s.errors_conf < s.errors_no_conf || s.inclusion_violations != 0).collect();
    let trials: u64 = runs.iter().map(|s| s.trials).sum();
    pass(bad.is_empty(), format!("{} runs, {trials} trials, {} runs with S_e not inside S'_e", runs.len(), bad.len()))
}

fn run_cli(dir: &Path, args: &[&str]) -> i32 {
    let status = Command::new(env!("CARGO_BIN_EXE_bcconf"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
        .status;
    status.code().unwrap_or(-1)
}

fn dir_contents(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    v.sort();
    v
}

fn cli_determinism() -> Outcome {
    let bsc = repo_data("bsc_pair.json");
    let noiseless = repo_data("noiseless8.json");
    let layered = repo_data("layered_uniform_aux.json");
    let sup = repo_data("bsc_superposition_aux.json");
    let (bsc, noiseless, layered, sup) =
        (bsc.to_str().unwrap(), noiseless.to_str().unwrap(), layered.to_str().unwrap(), sup.to_str().unwrap());
    let commands: Vec<Vec<&str>> = vec![
        vec!["region", "--channel", bsc, "--c1", "0.25", "--samples", "300", "--seed", "7", "--out", "hull.csv"],
        vec!["check", "--channel", bsc, "--c1", "0.1", "--samples", "100", "--seed", "3", "--out", "check.json"],
        vec!["awgn", "--power", "10", "--n1", "1", "--n2", "4", "--c1", "0.25", "--grid", "31", "--out", "awgn.csv"],
        vec![
            "simulate", "--channel", noiseless, "--aux", layered, "--n", "8", "--rates", "0.125,0.125,0.125", "--c1",
            "0.125", "--trials", "200", "--seed", "3", "--out", "sim.json",
        ],
        vec![
            "simulate", "--channel", bsc, "--aux", sup, "--n", "40", "--rates", "0.05,0.05,0.05", "--c1", "0.05",
            "--eps", "0.15", "--trials", "300", "--seed", "5", "--out", "sim2.json",
        ],
    ];
    let mut problems = Vec::new();
    let mut files = 0;
    for cmd in &commands {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let (ca, cb) = (run_cli(a.path(), cmd), run_cli(b.path(), cmd));
        if ca != 0 || cb != 0 {
            problems.push(format!("`{}` exited {ca}/{cb}", cmd[0]));
            continue;
        }
        let (fa, fb) = (dir_contents(a.path()), dir_contents(b.path()));
        files += fa.len();
        if fa.is_empty() || fa != fb {
            problems.push(format!("`{}` outputs differ", cmd[0]));
        }
    }
    pass(
        problems.is_empty(),
        format!("{} commands run twice, {files} output files compared, problems: {:?}", commands.len(), problems),
    )
}

fn main() {
    let mut runs = Vec::new();
    let results = vec![
        (1, "information identities", information_identities()),
        (2, "polytope oracle equivalence", polytope_oracle()),
        (3, "inner/outer vertex equivalence suite", equivalence_suite()),
        (4, "slice identities", slice_identities()),
        (5, "R1 = 0 corner check", no_r1_corners()),
        (6, "AWGN closed form and monotonicity", awgn_closed_form()),
        (7, "simulator achievability trend", achievability_trend(&mut runs)),
        (8, "simulator converse witness", converse_witness(&mut runs)),
        (9, "error-set inclusion", error_set_inclusion(&mut runs)),
        (10, "CLI determinism", cli_determinism()),
    ];
    let mut failed = 0;
    for (k, name, o) in &results {
        println!("{} [{k:>2}] {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        failed += !o.passed as usize;
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
