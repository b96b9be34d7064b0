//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use rand::Rng;
use rectv::cutsolve::dinkelbach_min_ratio;
use rectv::energy::brute_force_min;
use rectv::flow::{
    classify_events, extinction_bound, facet_decomposition, flow_evolve, rof_equivalence_window, solution_at,
    FlowTimeline,
};
use rectv::frame::Frame;
use rectv::geometry::{max_jump, Axis, GridEdge};
use rectv::oracle::{compare, graph_tv_solve, GraphTvProblem};
use rectv::rational::{cmp_sqrt, fmt_rational, int, q};
use rectv::rof::{solve_rof, verify_certificate, RofSolution};
use rectv::{fixtures, Mode, PcrFunction, Rational};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let el = start.elapsed();
    ensure(el < limit, || format!("took {el:?}, limit {limit:?}"))
}

fn nonequiv_timeline() -> Outcome {
    let start = Instant::now();
    let u0 = fixtures::nonequiv();
    let tl = flow_evolve(&u0, Mode::Plane, None).map_err(|e| e.to_string())?;
    within(start, Duration::from_secs(1))?;
    let e = tl.events.first().ok_or("no events")?;
    let flags = classify_events(&tl);
    ensure(e.t == q(9, 64), || format!("t1 = {}", fmt_rational(&e.t)))?;
    ensure(flags[0].merging && flags[0].breaking, || format!("flags {:?}", flags[0]))?;
    let g = u0.grid();
    let (center, arm) = (g.cell(2, 2), g.cell(4, 2));
    let u = solution_at(&tl, &e.t).map_err(|e| e.to_string())?;
    ensure(*u.value(center) == q(39, 16) && *u.value(arm) == q(39, 16), || "value at t1".into())?;
    ensure(q(69, 26) - q(20, 13) * q(9, 64) == q(39, 16), || "closed form at t1".into())?;
    let d = facet_decomposition(&u, Mode::Plane).map_err(|e| e.to_string())?;
    ensure(*d.speed_at(center) == q(-4, 3) && *d.speed_at(arm) == int(-2), || "post-event speeds".into())?;
    let ev = tl.frame.to_work(center);
    let after = &e.facets.iter().find(|f| f.cells.contains(ev)).ok_or("center facet")?.speed;
    ensure(*after == q(-4, 3), || "timeline speed after t1".into())?;
    Ok(format!("t1 = 9/64, value 39/16, speeds -4/3 and -2, {:?}", start.elapsed()))
}

fn cross_breaking() -> Outcome {
    let u0 = fixtures::cross();
    let tl = flow_evolve(&u0, Mode::Plane, None).map_err(|e| e.to_string())?;
    ensure(tl.initial_breaking, || "no breaking at t = 0".into())?;
    let g = u0.grid();
    let center = g.cell(2, 2);
    let arms = [g.cell(4, 2), g.cell(0, 2), g.cell(2, 4), g.cell(2, 0)];
    let d = facet_decomposition(&u0, Mode::Plane).map_err(|e| e.to_string())?;
    let bounded = d.facets.iter().filter(|f| f.bounded).count();
    ensure(*d.speed_at(center) == q(-4, 3), || "center speed".into())?;
    ensure(arms.iter().all(|&c| *d.speed_at(c) == int(-2)), || "arm speeds".into())?;
    let times: Vec<Rational> = tl.events.iter().map(|e| e.t.clone()).collect();
    ensure(times == vec![q(1, 2), q(3, 4)], || format!("event times {times:?}"))?;
    for k in 0..=16 {
        let t = q(k, 16);
        let u = solution_at(&tl, &t).map_err(|e| e.to_string())?;
        let c = (int(1) - q(4, 3) * &t).max(int(0));
        let a = (int(1) - int(2) * &t).max(int(0));
        ensure(*u.value(center) == c && arms.iter().all(|&x| *u.value(x) == a), || {
            format!("profile at t = {}", fmt_rational(&t))
        })?;
    }
    Ok(format!("breaking at t = 0 into {bounded} bounded facets, extinctions 3/4 and 1/2"))
}

fn staircase_speed(n: i64, k: i64) -> Rational {
    let a = q(k - 1, n);
    int(2) * (int(1) + &a) / (int(1) + int(2) * &a * (int(1) - q(k, 2 * n)))
}

fn staircase() -> Outcome {
    let mut out = Vec::new();
    for n in [4i64, 8, 16] {
        let start = Instant::now();
        let u0 = fixtures::staircase(n);
        let d = facet_decomposition(&u0, Mode::Plane).map_err(|e| e.to_string())?;
        if n == 16 {
            within(start, Duration::from_secs(10))?;
        }
        let g = u0.grid();
        // cell holding the origin
        let i0 = g.xs().iter().rposition(|x| x.is_negative()).ok_or("no line x < 0")?;
        let j0 = g.ys().iter().rposition(|y| y.is_negative()).ok_or("no line y < 0")?;
        let core = d.facet_of(g.cell(i0, j0));
        let xmax = core.cells.bbox().ok_or("empty core")?.x1;
        let kq = Rational::from_integer(n.into()) * (xmax - int(1)) + int(1);
        ensure(kq.is_integer(), || format!("n = {n}: core ends off a column"))?;
        let k: i64 = kq.to_integer().try_into().map_err(|_| "k too large")?;
        ensure(core.speed == -staircase_speed(n, k), || {
            format!("n = {n}: core speed {} vs formula", fmt_rational(&core.speed))
        })?;
        let c = int(1) - q(1, 2 * n);
        let s = &c * &c + int(1);
        let ok_k = cmp_sqrt(&(q(k, n) + &c), &s) != Ordering::Less;
        let below = cmp_sqrt(&(q(k - 1, n) + &c), &s) == Ordering::Less;
        ensure(ok_k && below, || format!("n = {n}: k = {k} is not the threshold index"))?;
        // the columns beyond the core move as (1 - t / (1 - j/n))
        for j in k..n {
            let x = int(1) + q(2 * j - 1, 2 * n);
            let i = g.xs().iter().rposition(|l| *l < x).ok_or("column")?;
            let f = d.facet_of(g.cell(i, j0));
            ensure(f.speed == -(int(1) / (int(1) - q(j, n))), || format!("n = {n}: column {j} speed"))?;
        }
        out.push(format!("n={n}: k={k} speed {}", fmt_rational(&-&core.speed)));
    }
    Ok(out.join("; "))
}

fn plane_sample(r: &mut rand_chacha::ChaCha8Rng) -> (PcrFunction, FlowTimeline, Rational) {
    loop {
        let g = common::grid(r, 6);
        let u0 = common::pcr(r, &g);
        let tl = flow_evolve(&u0, Mode::Plane, None).expect("flow");
        let w = rof_equivalence_window(&tl);
        if w.is_positive() {
            return (u0, tl, w);
        }
    }
}

fn rof_flow_equivalence() -> Outcome {
    let mut r = common::rng(4);
    let mut checked = 0;
    let mut breaking = 0;
    for _ in 0..50 {
        let (u0, tl, w) = plane_sample(&mut r);
        if classify_events(&tl).iter().any(|f| f.breaking) {
            breaking += 1;
        }
        for _ in 0..5 {
            let lambda = common::lambda(&mut r, &w);
            let rof = solve_rof(&u0, &lambda, Mode::Plane).map_err(|e| e.to_string())?;
            let flow = solution_at(&tl, &lambda).map_err(|e| e.to_string())?;
            ensure(rof.u == flow, || format!("{u0:?} at lambda {}", fmt_rational(&lambda)))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} exact matches, {breaking} data with a later breaking event"))
}

fn oracle_lambda(r: &mut rand_chacha::ChaCha8Rng, u0: &PcrFunction) -> Rational {
    let range = u0.max() - u0.min();
    let hi = if range.is_zero() { int(1) } else { range * int(2) };
    common::lambda(r, &hi)
}

fn oracle_agreement() -> Outcome {
    let start = Instant::now();
    let mut r = common::rng(5);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let g = common::grid(&mut r, 8);
        let u0 = common::pcr(&mut r, &g);
        let lambda = oracle_lambda(&mut r, &u0);
        let exact = solve_rof(&u0, &lambda, Mode::Bounded).map_err(|e| e.to_string())?;
        let p = GraphTvProblem::new(&u0, &lambda, Mode::Bounded).map_err(|e| e.to_string())?;
        let approx = graph_tv_solve(&p, 1e-9).map_err(|e| e.to_string())?;
        let c = compare(&exact, &approx, 1e-6).map_err(|e| e.to_string())?;
        worst = worst.max(c.max_deviation);
        ensure(c.passed, || format!("deviation {:e} on {u0:?}", c.max_deviation))?;
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("max deviation {worst:e}, {:?}", start.elapsed()))
}

fn cut_vs_enumeration() -> Outcome {
    let mut r = common::rng(6);
    for k in 0..200 {
        let p = common::cheeger(&mut r, 16);
        let bf = brute_force_min(&p).map_err(|e| e.to_string())?;
        let (v, s) = dinkelbach_min_ratio(&p).map_err(|e| e.to_string())?;
        ensure(v == bf.value && s == bf.maximal, || format!("instance {k}: {} vs {}", v, bf.value))?;
    }
    Ok("200 instances agree in value and maximal minimiser".into())
}

fn jumps(w: &PcrFunction) -> Vec<Rational> {
    let g = w.grid();
    let mut out = Vec::new();
    for m in 0..g.nx().max(g.ny()) {
        out.push(max_jump(w, Axis::Rows, m));
        out.push(max_jump(w, Axis::Columns, m));
    }
    out
}

fn dominated(a: &[Rational], b: &[Rational]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn rof_invariants(u0: &PcrFunction, v0: &PcrFunction, lambda: &Rational, mode: Mode) -> Result<(), String> {
    let u = solve_rof(u0, lambda, mode).map_err(|e| e.to_string())?.u;
    let v = solve_rof(v0, lambda, mode).map_err(|e| e.to_string())?.u;
    if mode == Mode::Bounded {
        ensure(u.integral() == u0.integral(), || "ROF mean".into())?;
    }
    let lo = if mode == Mode::Plane { int(0) } else { u0.min() };
    ensure(u.values().iter().all(|x| lo <= *x && *x <= u0.max()), || "ROF maximum principle".into())?;
    ensure(u.l2_dist_sq(&v) <= u0.l2_dist_sq(v0), || "ROF non-expansive".into())?;
    let fr = Frame::new(u0.grid(), mode);
    ensure(dominated(&jumps(&fr.embed(&u)), &jumps(&fr.embed(u0))), || "ROF jump monotonicity".into())
}

fn flow_invariants(u0: &PcrFunction, mode: Mode) -> Result<(), String> {
    let tl = flow_evolve(u0, mode, None).map_err(|e| e.to_string())?;
    let tn = tl.extinction.clone().ok_or("no extinction")?;
    let bound = extinction_bound(u0, mode).map_err(|e| e.to_string())?;
    ensure(tn <= bound, || format!("extinction {} above bound {}", fmt_rational(&tn), fmt_rational(&bound)))?;
    let mut times: BTreeSet<Rational> = tl.snapshots().map(|s| s.t.clone()).collect();
    let ts: Vec<Rational> = times.iter().cloned().collect();
    for w in ts.windows(2) {
        times.insert((&w[0] + &w[1]) / int(2));
    }
    times.insert(&tn + int(1));
    let fr = Frame::new(u0.grid(), mode);
    let mut prev_j = jumps(&fr.embed(u0));
    let lo = if mode == Mode::Plane { int(0) } else { u0.min() };
    for t in &times {
        let u = solution_at(&tl, t).map_err(|e| e.to_string())?;
        if mode == Mode::Bounded {
            ensure(u.integral() == u0.integral(), || "flow mean".into())?;
        }
        ensure(u.values().iter().all(|x| lo <= *x && *x <= u0.max()), || "flow maximum principle".into())?;
        let j = jumps(&fr.embed(&u));
        ensure(dominated(&j, &prev_j), || format!("flow jumps grow at t = {}", fmt_rational(t)))?;
        prev_j = j;
    }
    let last = solution_at(&tl, &tn).map_err(|e| e.to_string())?;
    let terminal = match mode {
        Mode::Bounded => last.values().iter().all(|x| *x == u0.mean()),
        Mode::Plane => last.values().iter().all(Zero::is_zero),
    };
    ensure(terminal, || "state at the extinction time".into())?;
    let mut prev_e: Option<Rational> = None;
    for s in tl.snapshots() {
        let e = s.speed_energy();
        ensure(prev_e.as_ref().is_none_or(|p| e < *p), || "sum area * speed^2 not decreasing".into())?;
        for f in s.facets.iter().filter(|f| f.bounded) {
            ensure(f.speed.clone() * f.area() == f.minus_length() - f.plus_length(), || "speed formula".into())?;
        }
        prev_e = Some(e);
    }
    Ok(())
}

fn invariant_suite() -> Outcome {
    let mut r = common::rng(7);
    let mut n = 0;
    for _ in 0..50 {
        let g = common::grid(&mut r, 6);
        let (u0, v0) = (common::pcr(&mut r, &g), common::pcr(&mut r, &g));
        let lambda = oracle_lambda(&mut r, &u0);
        rof_invariants(&u0, &v0, &lambda, Mode::Plane)?;
        flow_invariants(&u0, Mode::Plane)?;
        n += 1;
    }
    for _ in 0..100 {
        let g = common::grid(&mut r, 8);
        let (u0, v0) = (common::pcr(&mut r, &g), common::pcr(&mut r, &g));
        let lambda = oracle_lambda(&mut r, &u0);
        rof_invariants(&u0, &v0, &lambda, Mode::Bounded)?;
        if r.gen_bool(0.5) {
            flow_invariants(&u0, Mode::Bounded)?;
        }
        n += 1;
    }
    Ok(format!("{n} data: mean, maximum principle, L2 contraction, jumps, extinction bounds, speed energy"))
}

/// Every single-field perturbation of a certified solution.
fn tampered(sol: &RofSolution) -> Vec<(String, RofSolution)> {
    let mut out = Vec::new();
    let mut push = |name: String, f: &dyn Fn(&mut RofSolution)| {
        let mut s = sol.clone();
        f(&mut s);
        out.push((name, s));
    };
    push("lambda".into(), &|s| s.lambda += q(1, 97));
    push("mode".into(), &|s| {
        s.mode = match s.mode {
            Mode::Bounded => Mode::Plane,
            Mode::Plane => Mode::Bounded,
        }
    });
    for c in 0..sol.u.values().len() {
        push(format!("u[{c}]"), &|s| {
            let mut v = s.u.values().to_vec();
            v[c] += q(1, 64);
            s.u = PcrFunction::new(s.u.grid().clone(), v).unwrap();
        });
    }
    for k in 0..sol.stage_ratios.len() {
        push(format!("ratio[{k}]"), &|s| s.stage_ratios[k] -= q(1, 64));
    }
    if !sol.stage_ratios.is_empty() {
        push("ratios truncated".into(), &|s| {
            s.stage_ratios.pop();
        });
    }
    let n = sol.partition.len();
    if n >= 2 {
        push("partition order".into(), &|s| s.partition.swap(0, 1));
        push("partition merged".into(), &|s| {
            let m = s.partition[0].union(&s.partition[1]);
            s.partition[0] = m;
            s.partition.remove(1);
        });
    }
    for k in 0..n {
        if sol.partition[k].len() >= 2 {
            push(format!("partition[{k}] split"), &|s| {
                let c = s.partition[k].cells().next().unwrap();
                s.partition[k].remove(c);
            });
        }
    }
    let g = sol.work_grid.clone();
    let some_edge = g.interior_edges()[0].0;
    for k in 0..n {
        let sig = &sol.signature.members[k];
        if sig.plus != sig.minus {
            push(format!("signature[{k}] flipped"), &|s| {
                let m = &mut s.signature.members[k];
                std::mem::swap(&mut m.plus, &mut m.minus);
            });
        }
        if let Some(&e) = sig.plus.iter().next() {
            push(format!("signature[{k}] plus dropped"), &|s| {
                s.signature.members[k].plus.remove(&e);
            });
        }
        if let Some(&e) = sig.minus.iter().next() {
            push(format!("signature[{k}] minus dropped"), &|s| {
                s.signature.members[k].minus.remove(&e);
            });
        }
        let extra: GridEdge = sol.partition[k].boundary().first().map_or(some_edge, |h| h.edge);
        push(format!("signature[{k}] plus added"), &|s| {
            let m = &mut s.signature.members[k];
            if !m.plus.insert(extra) {
                m.plus.remove(&extra);
            }
        });
    }
    push("work grid".into(), &|s| {
        let mut xs = s.work_grid.xs().to_vec();
        let last = xs.last().unwrap().clone();
        xs.push(last + int(1));
        s.work_grid = std::sync::Arc::new(rectv::Grid::new(xs, s.work_grid.ys().to_vec()).unwrap());
    });
    out
}

fn same_solution(a: &RofSolution, b: &RofSolution) -> bool {
    a.mode == b.mode
        && a.lambda == b.lambda
        && a.u == b.u
        && a.work_grid == b.work_grid
        && a.partition == b.partition
        && a.signature == b.signature
        && a.stage_ratios == b.stage_ratios
}

fn tamper_detection() -> Outcome {
    let mut cases = vec![
        (fixtures::nonequiv(), q(1, 10), Mode::Plane),
        (fixtures::nonequiv(), q(1, 2), Mode::Plane),
        (fixtures::nonequiv(), int(1), Mode::Bounded),
        (fixtures::cross(), q(1, 4), Mode::Plane),
        (fixtures::two_cells(int(0), int(1)), q(1, 8), Mode::Bounded),
    ];
    let mut r = common::rng(8);
    while cases.len() < 15 {
        let g = common::grid(&mut r, 4);
        let u0 = common::pcr(&mut r, &g);
        if u0.is_constant() {
            continue;
        }
        let lambda = oracle_lambda(&mut r, &u0);
        let mode = if r.gen_bool(0.5) { Mode::Plane } else { Mode::Bounded };
        cases.push((u0, lambda, mode));
    }
    let (mut total, mut caught, mut benign) = (0, 0, 0);
    let mut missed = Vec::new();
    for (u0, lambda, mode) in &cases {
        let sol = solve_rof(u0, lambda, *mode).map_err(|e| e.to_string())?;
        ensure(verify_certificate(&sol, u0).passed(), || "untampered solution rejected".into())?;
        for (name, bad) in tampered(&sol) {
            total += 1;
            if verify_certificate(&bad, u0).passed() {
                // an edit that leaves a true certificate (e.g. lambda moved
                // while u stays the minimiser) is not a forgery
                if solve_rof(u0, &bad.lambda, bad.mode).is_ok_and(|s| same_solution(&s, &bad)) {
                    benign += 1;
                    continue;
                }
                missed.push(format!("{name} ({u0:?}, lambda {}, {mode})", fmt_rational(lambda)));
            } else {
                caught += 1;
            }
        }
    }
    ensure(missed.is_empty(), || format!("missed {missed:?}"))?;
    Ok(format!("{caught}/{} false certificates detected, {benign} edits left a true certificate", total - benign))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 nonequiv timeline", nonequiv_timeline),
        ("2 cross breaks at once", cross_breaking),
        ("3 staircase core speed and threshold", staircase),
        ("4 ROF equals flow inside the window", rof_flow_equivalence),
        ("5 exact solver vs oracle", oracle_agreement),
        ("6 cut vs enumeration", cut_vs_enumeration),
        ("7 invariant suite", invariant_suite),
        ("8 certificate tampering", tamper_detection),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        match std::panic::catch_unwind(f) {
            Ok(Ok(msg)) => println!("PASS criterion {name}: {msg} [{:?}]", start.elapsed()),
            Ok(Err(msg)) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg}");
            }
            Err(_) => {
                failed += 1;
                println!("FAIL criterion {name}: panicked");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
