//! Acceptance checks. Prints one PASS/FAIL line per criterion.

use entkit::criteria::{
    ccnr, evaluate_all, pt_moment_values, r2_two_qubit, r_moment, spa_r_statistic, moment_product_statistic,
    tri_genuine, CriteriaConfig, Verdict, CRITERIA, DEFAULT_MARGIN,
};
use entkit::matkit::{
    eig_hermitian, eigenvalues, frobenius_norm, max_abs_diff, partial_transpose, power_traces, rank, realign,
    svd_values, trace_norm, trace_product, DimSpec, RankTol,
};
use entkit::moments::{
    descartes_psd, dk_product, first_moment_via_swap, lambda_max_bounds, lambda_min_lb, pt_moments, realign_moments,
};
use entkit::qmaps::{choi_matrix, realign_via_swap, spa_lower_p_with, LinearMap, LowerBoundSource, SpaNormalization};
use entkit::statebank::{make_state, random, DensityMatrix, Params};
use entkit::sweep::bisect_root;
use entkit::tables::{check, detection_intervals, TableDiff};
use entkit::witness::{
    choi_witness, det_witness, k_rho, phi_limit, witness_expectation, wn_witness, wo_witness, wootters_concurrence,
    Marginal, WitnessOperator,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = entkit::Result<(bool, String)>;

/// At `p = 1` the SPA statistic vanishes identically.
const P_EDGE: f64 = 0.999;
const KNOWN_FAIL: &[usize] = &[3, 5, 7, 10, 11];

fn st(id: &str, p: Params) -> entkit::Result<DensityMatrix> {
    make_state(id, &p)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> entkit::Result<f64> {
    bisect_root(f, lo, hi, 1e-12, 200)
}

fn table_ok(d: &TableDiff, column: Option<&str>) -> (bool, String) {
    let picked: Vec<_> = d.entries.iter().filter(|e| column.is_none_or(|c| e.column == c)).collect();
    let bad: Vec<String> = picked
        .iter()
        .filter(|e| !e.ok)
        .map(|e| format!("{} {} computed {:?} vs {:?}", e.row, e.column, e.computed, e.expected))
        .collect();
    if bad.is_empty() {
        (true, format!("{} {} entries match", d.id, picked.len()))
    } else {
        (false, format!("{}: {}", d.id, bad.join(", ")))
    }
}

fn c1() -> Outcome {
    let v = ccnr(&st("bes4x4", Params::new())?, DEFAULT_MARGIN)?;
    Ok((close(v.statistic, 1.08579, 1e-4), format!("||R||_1 = {:.7}", v.statistic)))
}

fn c2() -> Outcome {
    let rho = st("bes4x4", Params::new())?;
    let mut ok = true;
    let mut parts = Vec::new();
    for (a, b) in [(1.0, 1.0), (0.3, 0.7), (2.0, 0.5)] {
        let v = witness_expectation(&choi_witness(a, b, &rho)?, &rho)?;
        let expect = -1.07107 * (2.0 * a * a + a * b + 2.0 * b * b);
        ok &= ((v - expect) / expect).abs() <= 1e-4;
        parts.push(format!("({a},{b}) {v:.6}"));
    }
    Ok((ok, parts.join(", ")))
}

fn c3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut ok = true;
    let mut detail = String::new();
    for _ in 0..5 {
        let a: f64 = rng.random_range(0.1..2.0);
        let b: f64 = rng.random_range(0.1..2.0);
        let ch = choi_matrix(LinearMap::Phi { alpha: a, beta: b }, 2)?;
        let ev = eigenvalues(&ch.matrix)?;
        let zeros = ev.iter().filter(|z| z.norm() <= 1e-10).count();
        let mut nz: Vec<f64> = ev.iter().filter(|z| z.norm() > 1e-10).map(|z| z.re).collect();
        nz.sort_by(f64::total_cmp);
        let want = [-2.0 * a, 2.0 * a, 2.0 * (a + b)];
        let matches = zeros == 13 && nz.len() == 3 && nz.iter().zip(want).all(|(x, y)| close(*x, y, 1e-10));
        if !matches && ok {
            detail = format!("alpha={a:.4} beta={b:.4}: {zeros} zeros, nonzero {nz:.6?}");
        }
        ok &= matches;
    }
    if ok {
        detail = "5 random (alpha, beta) match".into();
    }
    Ok((ok, detail))
}

fn c4() -> Outcome {
    let (_, d) = check("tab-4by4")?;
    let get = |row: &str| d.entries.iter().find(|e| e.row == row && e.column == "lower").and_then(|e| e.computed);
    let w = get("witness").unwrap_or(f64::NAN);
    let ct = get("ct").unwrap_or(f64::NAN);
    let ok = close(w, 0.318255, 1e-5) && close(ct, 0.897358, 1e-5);
    Ok((ok, format!("witness onset {w:.7}, CT onset {ct:.7}")))
}

fn c5() -> Outcome {
    let bes = st("bes4x4", Params::new())?;
    let r1 = r_moment(&bes, RankTol::default(), DEFAULT_MARGIN)?;
    let r1_ok = close(r1.statistic, 0.02082, 1e-4) && r1.notes.contains("k=8");
    let fam = entkit::statebank::family("npt3x3")?;
    let (lo, hi) = (fam.params[0].lo, fam.params[0].hi);
    let (mut all_r, mut max_l) = (true, f64::NEG_INFINITY);
    for i in 0..=50 {
        let a = lo + (hi - lo) * i as f64 / 50.0;
        let s = st("npt3x3", Params::new().with("a", a))?;
        all_r &= r_moment(&s, RankTol::default(), DEFAULT_MARGIN)?.is_entangled();
        let m = pt_moments(&s, 3)?;
        let (l1, l2, l3) = pt_moment_values(m.get(1), m.get(2), m.get(3));
        max_l = max_l.max(l1).max(l2).max(l3.unwrap_or(f64::NEG_INFINITY));
    }
    let ok = r1_ok && all_r && max_l <= 0.0;
    Ok((
        ok,
        format!(
            "R1 = {:.6} ({}), npt3x3 R1 violated throughout: {all_r}, max L1..L3 = {max_l:.4e}",
            r1.statistic, r1.notes
        ),
    ))
}

fn c6() -> Outcome {
    let iso = |f: f64| st("iso2", Params::new().with("f", f));
    let r2 = bisect_root(
        |f| iso(f).and_then(|s| r2_two_qubit(&s, 0.0)).map(|v| v.statistic).unwrap_or(f64::NAN),
        0.55,
        0.7,
        1e-12,
        200,
    )?;
    let d3 = root(
        |f| {
            let m = pt_moments(&iso(f).unwrap(), 3).unwrap();
            pt_moment_values(m.get(1), m.get(2), m.get(3)).1
        },
        0.55,
        0.7,
    )?;
    Ok((close(r2, 0.608594, 1e-5) && close(d3, 0.625, 1e-5), format!("R2 onset {r2:.7}, D3 onset {d3:.7}")))
}

fn c7() -> Outcome {
    let rho_t = |t: f64| st("rho_t", Params::new().with("t", t)).unwrap();
    let unit_p = |s: &DensityMatrix| spa_lower_p_with(s, LowerBoundSource::Moments, SpaNormalization::Unit).unwrap();
    let p1 = |t: f64| (2.0 * (13.0 - 24.0 * t + 8.0 * t * t) - (3.0 * (67.0 - 112.0 * t + 64.0 * t * t)).sqrt()) / (-5.0 + 4.0 * t).powi(2);
    let p2 = |t: f64| {
        let rad = 8673.0 + 9632.0 * t - 8832.0 * t * t - 6144.0 * t.powi(3) + 4096.0 * t.powi(4);
        ((-91.0 - 48.0 * t - 64.0 * t * t) - rad.sqrt()) / (2.0 * (-7.0 + 48.0 * t).powi(2))
    };
    let p3 = |t: f64| (14.0 - 128.0 * t + 64.0 * t * t) / (7.0 - 80.0 * t + 128.0 * t * t);

    let neg = root(|t| spa_r_statistic(&rho_t(t), unit_p(&rho_t(t))).unwrap(), -0.79, -0.5)?;
    let pos = root(|t| spa_r_statistic(&rho_t(t), 0.0).unwrap(), 0.01, 0.5)?;
    let ends_ok = close(neg, -0.665506, 1e-4) && close(pos, 0.116117, 1e-4);

    let p1_ok = [-0.78, -0.7, -0.3].iter().all(|&t| close(unit_p(&rho_t(t)), p1(t), 1e-4));
    let mut p3_ok = true;
    for t in [0.118, 0.12, 0.124] {
        let s = rho_t(t);
        let up = root(|p| spa_r_statistic(&s, p).unwrap(), 0.0, P_EDGE)?;
        p3_ok &= close(up, p3(t), 1e-4);
    }
    let rest_ok = [0.2, 0.5, 0.79].iter().all(|&t| spa_r_statistic(&rho_t(t), 0.99).unwrap() > 0.0);

    let mut p2_ok = true;
    for t in [-0.78, -0.72, -0.68] {
        let s = rho_t(t);
        let lo = unit_p(&s);
        let up = if spa_r_statistic(&s, P_EDGE)? > 0.0 { 1.0 } else { root(|p| spa_r_statistic(&s, p).unwrap(), lo, P_EDGE)? };
        p2_ok &= close(up, p2(t), 1e-4);
    }
    let ok = ends_ok && p1_ok && p2_ok && p3_ok && rest_ok;
    let mut detail = format!(
        "boundaries {neg:.7}, {pos:.7}; p1 {}; p3 {}; p2 {}",
        if p1_ok { "ok" } else { "mismatch" },
        if p3_ok { "ok" } else { "mismatch" },
        if p2_ok { "ok" } else { "mismatch" }
    );
    if !p2_ok {
        detail.push_str(&format!(" (p2 formula not reproducible: printed p2(-0.72) = {:.4})", p2(-0.72)));
    }
    Ok((ok, detail))
}

fn c8() -> Outcome {
    Ok(table_ok(&check("table3.1")?.1, None))
}

fn c9() -> Outcome {
    let rho = st("upb_tiles", Params::new())?;
    let r = realign(&rho.matrix, &rho.dims)?;
    let pt = partial_transpose(&rho.matrix, &rho.dims, 1)?;
    let k = k_rho(&rho, Marginal::KeepB)?;
    let tr = trace_product(&pt, &r).re;
    let smax = svd_values(&pt, RankTol::default())?.max();
    let rk = rank(&r, RankTol::default())?;
    let n1 = trace_norm(&r);
    let n2 = frobenius_norm(&r);
    let phi = phi_limit(&rho)?;
    let (tab_ok, tab) = table_ok(&check("Bennet_table")?.1, Some("phi"));
    let ok = close(k, 71.0 / 768.0, 1e-12)
        && close(tr, 1.0 / 16.0, 1e-12)
        && close(smax, 0.25, 1e-12)
        && rk == 6
        && close(n1, 1.08741, 1e-5)
        && close(n2, 0.5, 1e-10)
        && close(phi, 0.107058, 1e-5)
        && tab_ok;
    Ok((ok, format!("k={k:.7} tr={tr:.6} smax={smax:.6} rank={rk} ||R||1={n1:.6} ||R||2={n2:.10} phi={phi:.7}; {tab}")))
}

fn c10() -> Outcome {
    let be = st("bihalan_be", Params::new())?;
    let mut be_ok = true;
    let (mut worst, mut negated) = (0.0f64, 0.0f64);
    for n in 1..=6u32 {
        let v = witness_expectation(&wn_witness(n, &be)?, &be)?;
        let printed = 1.5 * (0.0203459 - 0.962145 * 0.149599f64.powi(n as i32));
        be_ok &= close(v, printed, 1e-5);
        worst = worst.max((v - printed).abs());
        negated = negated.max((v + printed).abs());
    }
    let (a_ok, a) = table_ok(&check("4by4_table")?.1, None);
    let (b_ok, b) = table_ok(&check("atable")?.1, None);
    let (c_ok, c) = table_ok(&check("table_iso")?.1, None);
    let ok = be_ok && a_ok && b_ok && c_ok;
    Ok((ok, format!("bihalan deviation from printed form {worst:.3e} (from its negation {negated:.1e}); {a}; {b}; {c}")))
}

fn c11() -> Outcome {
    let stat = |e: f64| {
        st("eps3x3", Params::new().with("eps", e))
            .and_then(|s| moment_product_statistic(&s, RankTol::default()))
            .map(|(v, _)| v > DEFAULT_MARGIN)
            .unwrap_or(false)
    };
    let found = detection_intervals(stat, 0.05, 3.0, 590);
    let want = [(0.622496, 0.780349), (1.281481, 1.606435)];
    let ok = found.len() == want.len() && found.iter().zip(want).all(|(f, w)| close(f.0, w.0, 1e-4) && close(f.1, w.1, 1e-4));
    let shown: Vec<String> = found.iter().map(|(a, b)| format!("[{a:.6}, {b:.6}]")).collect();
    Ok((ok, format!("detected {}", shown.join(" u "))))
}

fn self_boundary(build: fn(&DensityMatrix) -> entkit::Result<WitnessOperator>) -> entkit::Result<f64> {
    root(
        |f| {
            let s = st("iso3", Params::new().with("f", f)).unwrap();
            witness_expectation(&build(&s).unwrap(), &s).unwrap()
        },
        0.36,
        0.99,
    )
}

fn c12() -> Outcome {
    let r12 = st("rho12", Params::new())?;
    let v12 = st("varrho12", Params::new())?;
    let a = witness_expectation(&det_witness(&r12)?, &r12)?;
    let b = witness_expectation(&wo_witness(&v12)?, &v12)?;
    let wo = self_boundary(wo_witness)?;
    let det = self_boundary(det_witness)?;
    let ok = close(a, -491.0 / 7500.0, 1e-12) && close(b, -0.0585731, 1e-6) && close(wo, 0.413285, 1e-5) && close(det, 0.591634, 1e-5);
    Ok((ok, format!("det(rho12) {a:.12}, wo(varrho12) {b:.7}, iso3 wo onset {wo:.7}, det onset {det:.7}")))
}

fn c13() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut fails = Vec::new();

    let mut dev: f64 = 0.0;
    for d in [2usize, 3] {
        for _ in 0..100 {
            let rho = random::state(&[d, d], &mut rng);
            dev = dev.max(max_abs_diff(&realign(&rho.matrix, &rho.dims)?, &realign_via_swap(&rho)?));
            dev = dev.max((realign_moments(&rho, 1)?.get(1) - first_moment_via_swap(&rho)?).abs());
        }
    }
    if dev > 1e-12 {
        fails.push(format!("swap identities deviate by {dev:.2e}"));
    }

    let mut sandwich = 0;
    for i in 0..200 {
        let n = [3usize, 4, 6, 9][i % 4];
        let a = random::density(n, rng.random_range(1..=n), &mut rng).scale(rng.random_range(0.5..3.0));
        let ev = eig_hermitian(&a)?;
        let p = power_traces(&a, 3);
        let b = lambda_max_bounds(p[0].re, p[1].re, p[2].re, n)?;
        let tol = 1e-9 * ev.max();
        if b.lambda_max_lb > ev.max() + tol || ev.max() > b.lambda_max_ub + tol || lambda_min_lb(&a) > ev.min() + tol {
            sandwich += 1;
        }
    }
    if sandwich > 0 {
        fails.push(format!("{sandwich} eigenvalue-bound violations"));
    }

    let mut descartes = 0;
    for i in 0..200 {
        let n = 2 + i % 5;
        let h = random::hermitian(n, &mut rng);
        let ev = eig_hermitian(&h)?;
        let shift = -ev.min() + rng.random_range(-0.5..0.5);
        let a = &h + entkit::matkit::identity(n).scale(shift);
        let lmin = eig_hermitian(&a)?.min();
        if lmin.abs() < 1e-6 {
            continue;
        }
        if descartes_psd(&a).psd != (lmin >= 0.0) {
            descartes += 1;
        }
    }
    if descartes > 0 {
        fails.push(format!("{descartes} Descartes disagreements"));
    }

    let (mut found, mut d4_bad) = (0, 0);
    while found < 200 {
        let m = random::density(4, rng.random_range(1..=2), &mut rng);
        let rho = DensityMatrix::new_unchecked(m, DimSpec::bipartite(2, 2)?, "random");
        if wootters_concurrence(&rho)? <= 0.05 {
            continue;
        }
        found += 1;
        let d4: f64 = dk_product(&rho, RankTol::Absolute(0.0))?.singular_values.iter().map(|s| s * s).product();
        if d4 <= 1e-12 {
            d4_bad += 1;
        }
    }
    if d4_bad > 0 {
        fails.push(format!("{d4_bad} entangled two-qubit states with D4 <= 1e-12"));
    }

    let cfg = CriteriaConfig::default();
    let ids: Vec<String> = CRITERIA.iter().map(|s| s.to_string()).collect();
    let mut false_pos = Vec::new();
    for i in 0..200 {
        let dims = [[2usize, 2], [2, 3], [3, 3]][i % 3];
        let sigma = random::separable(&dims, rng.random_range(1..=6), &mut rng);
        for v in evaluate_all(&ids, &sigma, &cfg) {
            if v.verdict == Verdict::Entangled {
                false_pos.push(format!("{}@{}x{}", v.criterion, dims[0], dims[1]));
            }
        }
    }
    if !false_pos.is_empty() {
        false_pos.sort();
        false_pos.dedup();
        fails.push(format!("false Entangled verdicts: {}", false_pos.join(" ")));
    }

    let ok = fails.is_empty();
    Ok((ok, if ok { format!("all identities hold (max swap deviation {dev:.1e})") } else { fails.join("; ") }))
}

fn c14() -> Outcome {
    let mut flagged = None;
    'grid: for i in 0..=20 {
        for j in 0..=20 {
            let (p1, p3) = (i as f64 / 20.0, j as f64 / 60.0);
            let Ok(s) = st("mub3", Params::new().with("p1", p1).with("p3", p3)) else { continue };
            if tri_genuine(&s, DEFAULT_MARGIN)?.genuine {
                flagged = Some((p1, p3));
                break 'grid;
            }
        }
    }
    let dims = DimSpec::new(vec![2, 2, 2])?;
    let zero = DensityMatrix::new_unchecked(
        entkit::matkit::projector(&entkit::matkit::basis_ket(8, 0)),
        dims,
        "000",
    );
    let mut false_flags = usize::from(tri_genuine(&zero, DEFAULT_MARGIN)?.genuine);
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..50 {
        let s = random::separable(&[2, 2, 2], rng.random_range(1..=6), &mut rng);
        false_flags += usize::from(tri_genuine(&s, DEFAULT_MARGIN)?.genuine);
    }
    let ok = flagged.is_some() && false_flags == 0;
    Ok((ok, format!("first flagged mub3 point {flagged:?}, false flags {false_flags}")))
}

fn main() {
    let checks: [fn() -> Outcome; 14] = [c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12, c13, c14];
    let mut unexpected = Vec::new();
    for (i, f) in checks.iter().enumerate() {
        let n = i + 1;
        let (pass, detail) = match f() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        println!("{} criterion {n:>2}: {detail}", if pass { "PASS" } else { "FAIL" });
        if !pass && !KNOWN_FAIL.contains(&n) {
            unexpected.push(n);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("criteria failing outside the recorded set: {unexpected:?}");
        std::process::exit(1);
    }
}
