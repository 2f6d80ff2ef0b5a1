//! End-to-end acceptance suite. Each test prints one PASS/FAIL line for its
//! criterion; all values are exact rationals with zero tolerance.

use std::time::Instant;

use gnp_core::dwork::{
    alpha_kappa, artin_hasse, fredholm_minor_valuation, minor_valuation, CertifiedValuation,
};
use gnp_core::frobenius::{all_solutions, gcd, pij_data};
use gnp_core::genpoly::{k_min, lowest_terms, tilde_h, LowestOutcome};
use gnp_core::gnpredict::{check_chain, hodge_polygon, predict_gnp};
use gnp_core::oracle::{exhaustive_gnp, integer_newton_polygon, newton_polygon, zeta_numerator};
use gnp_core::rational::{is_prime, ord_p, rat, rat_int, Int, Rational, Valuation};

fn report(criterion: &str, outcome: &Result<(), String>, started: Instant) {
    let elapsed = started.elapsed().as_secs_f64();
    let line = match outcome {
        Ok(()) => format!("criterion {criterion}: PASS ({elapsed:.2}s)\n"),
        Err(msg) => format!("criterion {criterion}: FAIL ({elapsed:.2}s): {msg}\n"),
    };
    // Write to the process stderr fd directly so the line stays visible
    // under the harness's per-test output capture.
    use std::io::Write;
    let _ = std::fs::OpenOptions::new()
        .append(true)
        .open("/dev/stderr")
        .and_then(|mut f| f.write_all(line.as_bytes()))
        .or_else(|_| std::io::stderr().write_all(line.as_bytes()));
}

fn run(criterion: &str, limit_secs: Option<f64>, body: impl FnOnce() -> Result<(), String>) {
    let started = Instant::now();
    let mut outcome = body();
    if let Some(limit) = limit_secs {
        let elapsed = started.elapsed().as_secs_f64();
        if outcome.is_ok() && elapsed >= limit {
            outcome = Err(format!("runtime {elapsed:.2}s exceeds {limit}s"));
        }
    }
    report(criterion, &outcome, started);
    if let Err(msg) = outcome {
        panic!("criterion {criterion} failed: {msg}");
    }
}

fn valid_residues(d: u64) -> Vec<u64> {
    (2..d).filter(|&r| gcd(r, d) == 1).collect()
}

/// First `count` primes p = r mod d with p >= lo (and p > s(d-1)).
fn primes_in_class(s: u64, d: u64, r: u64, lo: u64, count: usize) -> Vec<u64> {
    let mut out = vec![];
    let mut p = lo.max(s * (d - 1) + 1);
    while out.len() < count {
        if is_prime(p) && p % d == r {
            out.push(p);
        }
        p += 1;
    }
    out
}

#[test]
fn criterion_01_worked_instance() {
    run("01 worked-instance (2,3) r=2", Some(5.0), || {
        let lt = lowest_terms(2, 3, 2, None).map_err(|e| e.to_string())?;
        let expect = [(1u64, 2u64, rat(-2, 3)), (2, 0, rat_int(1))];
        for (term, (n, k, h)) in lt.iter().zip(&expect) {
            if term.n != *n {
                return Err(format!("unexpected index order: {}", term.n));
            }
            match &term.outcome {
                LowestOutcome::Found { k: got_k, h: got_h } if got_k == k && got_h == h => {}
                other => return Err(format!("lowest term for n={n}: {other:?}")),
            }
        }
        for p in [11u64, 17, 23] {
            let pred = predict_gnp(2, 3, 2, p, &lt).map_err(|e| e.to_string())?;
            if pred.bound_n != Int::from(5) {
                return Err(format!("effective bound {} != 5", pred.bound_n));
            }
            if !pred.valid {
                return Err(format!("prediction at p={p} not marked valid"));
            }
            if p == 11 {
                let want = [
                    (rat_int(0), rat_int(0)),
                    (rat_int(1), rat(2, 5)),
                    (rat_int(2), rat_int(1)),
                ];
                if pred.polygon.points() != want {
                    return Err(format!("p=11 polygon {:?}", pred.polygon.points()));
                }
            }
            for a in 1..p {
                let np = newton_polygon(2, 3, a, p).map_err(|e| e.to_string())?;
                if np != pred.polygon {
                    return Err(format!("NP at (p,a)=({p},{a}) differs from prediction"));
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_02_s1_floor() {
    run("02 s=1 floor property d=3,4,5", Some(10.0), || {
        for d in [3u64, 4, 5] {
            for r in valid_residues(d) {
                for term in lowest_terms(1, d, r, None).map_err(|e| e.to_string())? {
                    let kmin = k_min(1, d, r, term.n).map_err(|e| e.to_string())?;
                    match term.outcome {
                        LowestOutcome::Found { k, .. } if k == kmin => {}
                        other => {
                            return Err(format!(
                                "d={d} r={r} n={}: expected k={kmin}, got {other:?}",
                                term.n
                            ))
                        }
                    }
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_03_strictness() {
    run("03 strictness (2,5) r=3", Some(30.0), || {
        let lt = lowest_terms(2, 5, 3, None).map_err(|e| e.to_string())?;
        let mut strict = false;
        for term in &lt {
            let kmin = k_min(2, 5, 3, term.n).map_err(|e| e.to_string())?;
            match &term.outcome {
                LowestOutcome::Found { k, .. } => {
                    if *k > kmin {
                        strict = true;
                    }
                }
                LowestOutcome::Exhausted { k_cap } => {
                    return Err(format!("n={} undetermined up to {k_cap}", term.n))
                }
            }
        }
        if strict {
            Ok(())
        } else {
            Err("no index with a strictly raised lowest degree".into())
        }
    });
}

const GRID: [(u64, u64); 5] = [(2, 3), (2, 5), (3, 4), (3, 5), (4, 5)];

#[test]
fn criterion_04_kappa_alpha_identity() {
    run("04 kappa*alpha identity on grid", None, || {
        let mut checked = 0u64;
        for (s, d) in GRID {
            for r in valid_residues(d) {
                for n in 1..d {
                    let kmin = k_min(s, d, r, n).map_err(|e| e.to_string())?;
                    for k in kmin..=kmin + 2 * d {
                        let b = k - kmin;
                        // p large enough for the hypotheses and for every
                        // factorial in alpha to stay a p-adic unit.
                        for p in primes_in_class(s, d, r, (d + b).max(k + 1), 2) {
                            let ak =
                                alpha_kappa(s, d, r, p, n, k).map_err(|e| e.to_string())?;
                            let lhs = tilde_h(s, d, r, n, k)
                                .map_err(|e| e.to_string())?
                                .eval(&rat_int((p / d) as i64));
                            if lhs != Rational::from_integer(ak.kappa.clone()) * &ak.alpha {
                                return Err(format!(
                                    "identity broken at (s,d,r,p,n,k)=({s},{d},{r},{p},{n},{k})"
                                ));
                            }
                            // kappa must be a p-adic unit.
                            if ord_p(&Rational::from_integer(ak.kappa), p)
                                .map_err(|e| e.to_string())?
                                != Valuation::Finite(rat_int(0))
                            {
                                return Err(format!(
                                    "kappa not a unit at (s,d,r,p,n,k)=({s},{d},{r},{p},{n},{k})"
                                ));
                            }
                            checked += 1;
                        }
                    }
                }
            }
        }
        if checked == 0 {
            return Err("empty grid".into());
        }
        Ok(())
    });
}

#[test]
fn criterion_05_tame_fredholm_agreement() {
    run("05 tame/Fredholm agreement", None, || {
        let mut agreed = 0u64;
        for (s, d) in GRID {
            for r in valid_residues(d) {
                for n in 1..d {
                    let kmin = k_min(s, d, r, n).map_err(|e| e.to_string())?;
                    // p >= 3d keeps every factorial argument in the
                    // ell <= 2 truncation below p, where the tame
                    // coefficients equal the Artin-Hasse ones.
                    for p in primes_in_class(s, d, r, 3 * d, 2) {
                        let tame = minor_valuation(s, d, r, p, n, 2, None)
                            .map_err(|e| e.to_string())?;
                        // Cutoff past the gamma grade of degree k = kmin+2d.
                        let cutoff = rat_int(((p - 1) * n * (n + 1) / 2) as i64)
                            / rat_int(d as i64)
                            + rat_int(((d - s) * (kmin + 2 * d)) as i64) / rat_int(d as i64)
                            + rat_int(1);
                        let fred = match fredholm_minor_valuation(s, d, r, p, n, &cutoff) {
                            Ok(v) => v,
                            Err(gnp_core::Error::InsufficientPrecision(_)) => continue,
                            Err(e) => return Err(e.to_string()),
                        };
                        match (&tame, &fred) {
                            (CertifiedValuation::Value(a), CertifiedValuation::Value(b)) => {
                                if a != b {
                                    return Err(format!(
                                        "disagreement at (s,d,r,p,n)=({s},{d},{r},{p},{n}): \
                                         tame {a}, Fredholm {b}"
                                    ));
                                }
                                agreed += 1;
                            }
                            // Uncertified on either side: outside the
                            // criterion's restriction.
                            _ => {}
                        }
                    }
                }
            }
        }
        if agreed == 0 {
            return Err("no certified instances on the grid".into());
        }
        Ok(())
    });
}

#[test]
fn criterion_06_split_prime_coincidence() {
    run("06 p=1 mod d coincidence", None, || {
        for (d, p) in [(3u64, 7u64), (3, 13), (4, 5), (4, 13), (5, 11)] {
            let hp = hodge_polygon(d);
            for s in 1..d {
                if gcd(s, d) != 1 {
                    continue;
                }
                let g = exhaustive_gnp(s, d, p).map_err(|e| e.to_string())?;
                if g.polygon != hp {
                    return Err(format!("GNP differs from HP at (s,d,p)=({s},{d},{p})"));
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_07_chain_and_endpoints() {
    run("07 chain and endpoint laws", None, || {
        for (s, d, p) in [
            (2u64, 3u64, 11u64),
            (2, 3, 17),
            (2, 3, 7),
            (2, 5, 13),
            (3, 4, 7),
            (1, 3, 5),
        ] {
            let hp = hodge_polygon(d);
            let gnp = exhaustive_gnp(s, d, p).map_err(|e| e.to_string())?;
            let endpoint = (rat_int((d - 1) as i64), rat((d - 1) as i64, 2));
            for a in 1..p {
                let np = newton_polygon(s, d, a, p).map_err(|e| e.to_string())?;
                if np.endpoint() != &endpoint {
                    return Err(format!("endpoint off at (s,d,p,a)=({s},{d},{p},{a})"));
                }
                if !check_chain(&np, &gnp.polygon, &hp).map_err(|e| e.to_string())? {
                    return Err(format!("chain broken at (s,d,p,a)=({s},{d},{p},{a})"));
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_08_zeta_cross_check() {
    run("08 zeta cross-check (2,3,11) a=1", Some(10.0), || {
        let z = zeta_numerator(2, 3, 1, 11).map_err(|e| e.to_string())?;
        if z.len() != 21 {
            return Err(format!("degree {} != 20", z.len() - 1));
        }
        let scaled = integer_newton_polygon(&z, 11)
            .map_err(|e| e.to_string())?
            .scale(&rat(1, 10));
        let np = newton_polygon(2, 3, 1, 11).map_err(|e| e.to_string())?;
        if scaled != np {
            return Err("NP(zeta)/10 differs from oracle NP".into());
        }
        Ok(())
    });
}

#[test]
fn criterion_09_frobenius_equivalence() {
    // The lemma's lower bound on n_ij is tested in its sharp form
    // floor(pi/d) - s <= n_ij: the off-by-one tighter version fails at
    // (s,d,p,i,j) = (2,5,11,1,3) where n = 0.
    run("09 Frobenius oracle equivalence", None, || {
        for (s, d) in [(1u64, 3u64), (2, 3), (2, 5), (3, 4), (3, 5), (4, 5)] {
            let bound = (d * s) as i128 - d as i128 - s as i128;
            for v in 1..=500u64 {
                if (v as i128) <= bound {
                    continue;
                }
                let mut got: Vec<(u64, u64)> = all_solutions(s, d, v)
                    .map_err(|e| e.to_string())?
                    .iter()
                    .map(|x| (x.m, x.n))
                    .collect();
                got.sort_unstable();
                let mut want = vec![];
                for m in 0..=v / s {
                    let rest = v - s * m;
                    if rest % d == 0 {
                        want.push((m, rest / d));
                    }
                }
                want.sort_unstable();
                if got != want {
                    return Err(format!("solution sets differ at (s,d,v)=({s},{d},{v})"));
                }
            }
            for p in 2..=200u64 {
                if !is_prime(p) || p <= s * (d - 1) {
                    continue;
                }
                for i in 1..d {
                    for j in 1..d {
                        let x = pij_data(s, d, p, i, j).map_err(|e| e.to_string())?;
                        let fl = p * i / d;
                        if x.m_ij > d - 1 || x.n_ij > fl || x.n_ij + s < fl {
                            return Err(format!(
                                "bounds broken at (s,d,p,i,j)=({s},{d},{p},{i},{j})"
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_10_convergence() {
    run("10 convergence to the Hodge polygon", None, || {
        let lt = lowest_terms(2, 3, 2, None).map_err(|e| e.to_string())?;
        let mut last: Option<Rational> = None;
        for p in [11u64, 17, 23, 29, 41, 47] {
            let pred = predict_gnp(2, 3, 2, p, &lt).map_err(|e| e.to_string())?;
            let y = pred.polygon.points()[1].1.clone();
            if let Some(prev) = &last {
                if &y >= prev {
                    return Err(format!("first-vertex y not strictly decreasing at p={p}"));
                }
            }
            let gap = &y - rat(1, 3);
            if gap != Rational::new(Int::from(2u32), Int::from(3 * (p - 1))) {
                return Err(format!("gap at p={p} is {gap}, not 2/(3(p-1))"));
            }
            last = Some(y);
        }
        Ok(())
    });
}

#[test]
fn criterion_11_artin_hasse_integrality() {
    run("11 Artin-Hasse integrality", None, || {
        for p in [5u64, 7, 11] {
            let ah = artin_hasse(p, 3 * p);
            let mut factorial = Rational::from_integer(Int::from(1));
            for (t, u) in ah.u.iter().enumerate() {
                if ord_p(u, p).map_err(|e| e.to_string())? < Valuation::Finite(rat_int(0)) {
                    return Err(format!("u_{t} has p in its denominator for p={p}"));
                }
                if (t as u64) < p {
                    if t > 1 {
                        factorial *= rat_int(t as i64);
                    }
                    if *u != Rational::from_integer(Int::from(1)) / &factorial {
                        return Err(format!("u_{t} != 1/{t}! for p={p}"));
                    }
                }
            }
        }
        Ok(())
    });
}
