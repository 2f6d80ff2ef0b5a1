//! Verification sweeps: prediction vs oracle per (p, a), with aggregate
//! match rates split by the effective prime bound. Artifacts are
//! deterministic; timings go to stderr only.

use std::collections::HashMap;
use std::time::Instant;

use serde::Serialize;

use gnp_core::frobenius::gcd;
use gnp_core::genpoly::{lowest_terms, LowestTerm};
use gnp_core::gnpredict::{predict_gnp, GnpPrediction};
use gnp_core::oracle::newton_polygon;
use gnp_core::polygon::NewtonPolygon;
use gnp_core::rational::{rat_int, Rational};
use gnp_core::Error;

pub struct VerifyConfig {
    pub s: u64,
    pub d: u64,
    pub pmin: u64,
    pub pmax: u64,
    pub a: Option<u64>,
    pub k_cap: Option<u64>,
    pub budget: u128,
}

#[derive(Serialize)]
pub struct VerifyRecord {
    pub p: u64,
    pub r: u64,
    pub a: u64,
    /// True iff p exceeds the effective bound, so equality is guaranteed.
    pub valid: bool,
    #[serde(rename = "match")]
    pub matched: bool,
    pub predicted: NewtonPolygon,
    pub oracle: NewtonPolygon,
}

#[derive(Serialize)]
pub struct AZeroRecord {
    pub p: u64,
    /// Newton polygon of the a = 0 specialization; null when the degree
    /// hypothesis fails for it.
    pub polygon: Option<NewtonPolygon>,
}

#[derive(Serialize)]
pub struct SkipRecord {
    pub p: u64,
    pub reason: String,
}

#[derive(Serialize, Default)]
pub struct MatchRate {
    pub matched: u64,
    pub total: u64,
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub s: u64,
    pub d: u64,
    pub records: Vec<VerifyRecord>,
    /// a = 0 rows, excluded from the match statistics.
    pub a_zero: Vec<AZeroRecord>,
    pub skipped: Vec<SkipRecord>,
    pub above_bound: MatchRate,
    pub at_or_below_bound: MatchRate,
}

fn check_coprime(s: u64, d: u64) -> Result<(), Error> {
    if s == 0 || d <= s || gcd(s, d) != 1 {
        return Err(Error::Hypothesis(format!(
            "need coprime 0 < s < d, got ({s},{d})"
        )));
    }
    Ok(())
}

fn lowest_for(
    s: u64,
    d: u64,
    r: u64,
    k_cap: Option<u64>,
    cache: &mut HashMap<u64, Vec<LowestTerm>>,
) -> Result<Vec<LowestTerm>, Error> {
    if r == 1 {
        return Ok(vec![]);
    }
    if let Some(hit) = cache.get(&r) {
        return Ok(hit.clone());
    }
    let lt = lowest_terms(s, d, r, k_cap)?;
    cache.insert(r, lt.clone());
    Ok(lt)
}

pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport, Error> {
    check_coprime(cfg.s, cfg.d)?;
    let mut records = vec![];
    let mut a_zero = vec![];
    let mut skipped = vec![];
    let mut above = MatchRate::default();
    let mut below = MatchRate::default();
    let mut cache = HashMap::new();
    for p in crate::primes_between(cfg.pmin, cfg.pmax) {
        let r = p % cfg.d;
        if r == 0 || gcd(r, cfg.d) != 1 {
            skipped.push(SkipRecord {
                p,
                reason: "residue class not coprime to d".into(),
            });
            continue;
        }
        if p <= cfg.s * (cfg.d - 1) {
            skipped.push(SkipRecord {
                p,
                reason: "p within the small-prime gap p <= s(d-1)".into(),
            });
            continue;
        }
        let work = (p as u128).saturating_pow((cfg.d - 1) as u32);
        if work > cfg.budget {
            skipped.push(SkipRecord {
                p,
                reason: format!("budget exceeded: p^(d-1) = {work}"),
            });
            continue;
        }
        let started = Instant::now();
        let lowest = lowest_for(cfg.s, cfg.d, r, cfg.k_cap, &mut cache)?;
        let pred = predict_gnp(cfg.s, cfg.d, r, p, &lowest)?;
        let a_values: Vec<u64> = match cfg.a {
            Some(a) => {
                if a == 0 || a >= p {
                    return Err(Error::Hypothesis(format!(
                        "family parameter a={a} outside F_{p}^*"
                    )));
                }
                vec![a]
            }
            None => (1..p).collect(),
        };
        for a in a_values {
            let np = newton_polygon(cfg.s, cfg.d, a, p)?;
            let matched = np == pred.polygon;
            let rate = if pred.valid { &mut above } else { &mut below };
            rate.total += 1;
            if matched {
                rate.matched += 1;
            }
            records.push(VerifyRecord {
                p,
                r,
                a,
                valid: pred.valid,
                matched,
                predicted: pred.polygon.clone(),
                oracle: np,
            });
        }
        if cfg.a.is_none() {
            a_zero.push(AZeroRecord {
                p,
                polygon: newton_polygon(cfg.s, cfg.d, 0, p).ok(),
            });
        }
        eprintln!("p={p}: verified in {:.2}s", started.elapsed().as_secs_f64());
        // The theorem guarantees equality above the bound.
        if pred.valid && records.iter().any(|rec| rec.p == p && !rec.matched) {
            return Err(Error::Inconsistency(format!(
                "prediction mismatch above the effective bound at p={p}"
            )));
        }
    }
    Ok(VerifyReport {
        s: cfg.s,
        d: cfg.d,
        records,
        a_zero,
        skipped,
        above_bound: above,
        at_or_below_bound: below,
    })
}

pub fn run_predict(
    s: u64,
    d: u64,
    r_filter: Option<u64>,
    pmin: u64,
    pmax: u64,
    k_cap: Option<u64>,
) -> Result<Vec<GnpPrediction>, Error> {
    check_coprime(s, d)?;
    let mut cache = HashMap::new();
    let mut out = vec![];
    for p in crate::primes_between(pmin, pmax) {
        let r = p % d;
        if r == 0 || gcd(r, d) != 1 {
            continue;
        }
        if let Some(want) = r_filter {
            if r != want % d {
                continue;
            }
        }
        let lowest = lowest_for(s, d, r, k_cap, &mut cache)?;
        out.push(predict_gnp(s, d, r, p, &lowest)?);
    }
    Ok(out)
}

fn eval_at(poly: &NewtonPolygon, x: u64) -> Result<Rational, Error> {
    poly.eval(&rat_int(x as i64))
}

/// CSV rows p,r,a,n,x,y_pred,y_oracle,match: one row per record per vertex
/// abscissa n = x = 0..d-1.
pub fn verify_csv(rep: &VerifyReport, d: u64) -> Result<String, Error> {
    let mut csv = String::from("p,r,a,n,x,y_pred,y_oracle,match\n");
    for rec in &rep.records {
        for n in 0..d {
            csv.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                rec.p,
                rec.r,
                rec.a,
                n,
                n,
                eval_at(&rec.predicted, n)?,
                eval_at(&rec.oracle, n)?,
                rec.matched
            ));
        }
    }
    Ok(csv.trim_end().to_string())
}

/// Same schema as verify_csv with the oracle columns left empty.
pub fn sweep_csv(preds: &[GnpPrediction]) -> Result<String, Error> {
    let mut csv = String::from("p,r,a,n,x,y_pred,y_oracle,match\n");
    for pred in preds {
        for n in 0..pred.d {
            if rat_int(n as i64) > *pred.polygon.x_max() {
                break;
            }
            csv.push_str(&format!(
                "{},{},,{},{},{},,\n",
                pred.p,
                pred.r,
                n,
                n,
                eval_at(&pred.polygon, n)?,
            ));
        }
    }
    Ok(csv.trim_end().to_string())
}
