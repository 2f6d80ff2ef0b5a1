//! Assembly of Hodge polygons and predicted generic Newton polygons, plus
//! the ordering-chain check between actual, generic and Hodge polygons.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{hypothesis, Result};
use crate::genpoly::{bound_n, LowestOutcome, LowestTerm};
use crate::polygon::NewtonPolygon;
use crate::rational::{Int, Rational};

/// Predicted generic Newton polygon for one (s, d, r, p).
#[derive(Clone, Debug, Serialize)]
pub struct GnpPrediction {
    pub s: u64,
    pub d: u64,
    pub r: u64,
    pub p: u64,
    pub polygon: NewtonPolygon,
    #[serde(serialize_with = "ser_int")]
    pub bound_n: Int,
    /// True iff p exceeds the effective bound, so the prediction carries the
    /// full guarantee; below the bound it is still computed but unwarranted.
    pub valid: bool,
    /// True iff the predicted breaking points are themselves lower-convex.
    pub convex: bool,
    /// Indices n whose lowest term was undetermined; their points are
    /// omitted from the polygon.
    pub undetermined: Vec<u64>,
}

fn ser_int<S: serde::Serializer>(v: &Int, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Hodge polygon: vertices (n, n(n+1)/(2d)) for n = 0..d-1.
pub fn hodge_polygon(d: u64) -> NewtonPolygon {
    let pts: Vec<(Rational, Rational)> = (0..d)
        .map(|n| {
            (
                Rational::from_integer(Int::from(n)),
                Rational::new(Int::from(n * (n + 1)), Int::from(2 * d)),
            )
        })
        .collect();
    NewtonPolygon::lower_hull(&pts).expect("Hodge vertices are convex")
}

/// Predicted breaking points (n, n(n+1)/(2d) + (1 - s/d) k_n / (p-1)).
/// For r = 1 the prediction is the Hodge polygon itself.
pub fn predict_gnp(
    s: u64,
    d: u64,
    r: u64,
    p: u64,
    lowest: &[LowestTerm],
) -> Result<GnpPrediction> {
    if !crate::rational::is_prime(p) {
        return Err(crate::error::Error::NotPrime(p));
    }
    if p % d != r % d {
        return Err(hypothesis(format!("p={p} is not {r} mod {d}")));
    }
    if r == 1 {
        let bound = Int::from((s * (d - 1)).max(d));
        let valid = Int::from(p) > bound;
        return Ok(GnpPrediction {
            s,
            d,
            r,
            p,
            polygon: hodge_polygon(d),
            bound_n: bound,
            valid,
            convex: true,
            undetermined: vec![],
        });
    }
    let mut pts = vec![(Rational::zero(), Rational::zero())];
    let mut undetermined = vec![];
    for term in lowest {
        let n = term.n;
        match &term.outcome {
            LowestOutcome::Found { k, .. } => {
                let hodge = Rational::new(Int::from(n * (n + 1)), Int::from(2 * d));
                let correction = Rational::new(Int::from((d - s) * k), Int::from(d * (p - 1)));
                pts.push((Rational::from_integer(Int::from(n)), hodge + correction));
            }
            LowestOutcome::Exhausted { .. } => undetermined.push(n),
        }
    }
    let polygon = NewtonPolygon::lower_hull(&pts)?;
    let convex = polygon.points().len() == pts.len();
    let (bound, valid) = if undetermined.is_empty() {
        let b = bound_n(s, d, lowest)?;
        let v = Int::from(p) > b;
        (b, v)
    } else {
        (Int::from(0), false)
    };
    Ok(GnpPrediction {
        s,
        d,
        r,
        p,
        polygon,
        bound_n: bound,
        valid: valid && undetermined.is_empty(),
        convex,
        undetermined,
    })
}

/// True iff np lies over gnp lies over hp and all three share the final
/// point.
pub fn check_chain(
    np: &NewtonPolygon,
    gnp: &NewtonPolygon,
    hp: &NewtonPolygon,
) -> Result<bool> {
    let endpoints_match = np.endpoint() == gnp.endpoint() && gnp.endpoint() == hp.endpoint();
    Ok(np.lies_over(gnp)? && gnp.lies_over(hp)? && endpoints_match)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genpoly::lowest_terms;
    use crate::rational::{rat, rat_int};

    fn pt(x: i64, yn: i64, yd: i64) -> (Rational, Rational) {
        (rat_int(x), rat(yn, yd))
    }

    #[test]
    fn hodge_examples() {
        assert_eq!(
            hodge_polygon(3).points(),
            &[pt(0, 0, 1), pt(1, 1, 3), pt(2, 1, 1)]
        );
        assert_eq!(hodge_polygon(2).points(), &[pt(0, 0, 1), pt(1, 1, 2)]);
        assert_eq!(
            hodge_polygon(5).points(),
            &[pt(0, 0, 1), pt(1, 1, 5), pt(2, 3, 5), pt(3, 6, 5), pt(4, 2, 1)]
        );
    }

    #[test]
    fn predict_worked_case() {
        let lt = lowest_terms(2, 3, 2, None).unwrap();
        let pred = predict_gnp(2, 3, 2, 11, &lt).unwrap();
        assert_eq!(
            pred.polygon.points(),
            &[pt(0, 0, 1), pt(1, 2, 5), pt(2, 1, 1)]
        );
        assert!(pred.valid);
        assert!(pred.convex);
        assert_eq!(pred.bound_n, Int::from(5));
    }

    #[test]
    fn r1_is_hodge() {
        let pred = predict_gnp(2, 3, 1, 7, &[]).unwrap();
        assert_eq!(pred.polygon, hodge_polygon(3));
        assert!(pred.valid);
    }

    #[test]
    fn prediction_approaches_hodge() {
        let lt = lowest_terms(2, 3, 2, None).unwrap();
        let hp = hodge_polygon(3);
        let mut last = rat_int(1);
        for p in [11u64, 17, 23, 29, 41, 47] {
            let pred = predict_gnp(2, 3, 2, p, &lt).unwrap();
            let y = pred.polygon.points()[1].1.clone();
            assert!(y < last, "first-vertex y not strictly decreasing at p={p}");
            assert!(y > hp.points()[1].1);
            // Gap to 1/3 is exactly 2 / (3(p-1)).
            assert_eq!(&y - rat(1, 3), Rational::new(Int::from(2u32), Int::from(3 * (p - 1))));
            last = y;
            assert!(pred.polygon.lies_over(&hp).unwrap());
        }
    }

    #[test]
    fn predict_rejects_wrong_residue() {
        let lt = lowest_terms(2, 3, 2, None).unwrap();
        assert!(predict_gnp(2, 3, 2, 7, &lt).is_err());
    }

    #[test]
    fn chain_examples() {
        let hp = hodge_polygon(3);
        assert!(check_chain(&hp, &hp, &hp).unwrap());

        let lt = lowest_terms(2, 3, 2, None).unwrap();
        let pred = predict_gnp(2, 3, 2, 11, &lt).unwrap();
        // HP does not lie over the strictly higher prediction.
        assert!(!check_chain(&hp, &pred.polygon, &hp).unwrap());
        assert!(check_chain(&pred.polygon, &pred.polygon, &hp).unwrap());
    }
}
