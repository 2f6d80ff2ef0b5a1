//! Newton polygons: lower convex hulls with exact rational coordinates.

use num_traits::Zero;
use serde::ser::{Serialize, SerializeSeq, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A lower convex hull: x strictly increasing starting at the origin, slopes
/// between consecutive vertices strictly increasing (collinear interior
/// points are removed on construction).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    points: Vec<(Rational, Rational)>,
}

/// Orientation of the triple (a, b, c): sign of the cross product
/// (b - a) x (c - a). Positive means a strict left turn.
fn cross(
    a: &(Rational, Rational),
    b: &(Rational, Rational),
    c: &(Rational, Rational),
) -> Rational {
    (&b.0 - &a.0) * (&c.1 - &a.1) - (&b.1 - &a.1) * (&c.0 - &a.0)
}

impl NewtonPolygon {
    /// Monotone-chain lower hull of a point set with distinct x-coordinates
    /// including x = 0.
    pub fn lower_hull(pts: &[(Rational, Rational)]) -> Result<Self> {
        if pts.is_empty() {
            return Err(Error::Hypothesis("empty point set".into()));
        }
        let mut pts: Vec<(Rational, Rational)> = pts.to_vec();
        pts.sort_by(|a, b| a.0.cmp(&b.0));
        for w in pts.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::DuplicateX);
            }
        }
        if !pts[0].0.is_zero() {
            return Err(Error::Hypothesis("point set must include x = 0".into()));
        }
        let mut hull: Vec<(Rational, Rational)> = Vec::with_capacity(pts.len());
        for p in pts {
            while hull.len() >= 2 {
                let c = cross(&hull[hull.len() - 2], &hull[hull.len() - 1], &p);
                if c <= Rational::zero() {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        Ok(NewtonPolygon { points: hull })
    }

    /// Build from vertices already known to satisfy the hull invariants.
    /// Errors if they do not.
    pub fn from_vertices(points: Vec<(Rational, Rational)>) -> Result<Self> {
        let hull = Self::lower_hull(&points)?;
        if hull.points.len() != points.len() {
            return Err(Error::Hypothesis(
                "vertex list is not lower-convex".into(),
            ));
        }
        Ok(hull)
    }

    pub fn points(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    pub fn endpoint(&self) -> &(Rational, Rational) {
        self.points.last().unwrap()
    }

    pub fn x_max(&self) -> &Rational {
        &self.points.last().unwrap().0
    }

    /// Slopes of consecutive segments (strictly increasing by construction).
    pub fn slopes(&self) -> Vec<Rational> {
        self.points
            .windows(2)
            .map(|w| (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0))
            .collect()
    }

    /// Evaluate the piecewise-linear function at x in [0, x_max].
    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        if *x < Rational::zero() || x > self.x_max() {
            return Err(Error::DomainMismatch);
        }
        for w in self.points.windows(2) {
            if *x >= w[0].0 && *x <= w[1].0 {
                let t = (x - &w[0].0) / (&w[1].0 - &w[0].0);
                return Ok(&w[0].1 + t * (&w[1].1 - &w[0].1));
            }
        }
        // Single-point polygon or x == x_max.
        Ok(self.points.last().unwrap().1.clone())
    }

    /// True iff this polygon lies on or above `other` at every x. Both must
    /// span the same x-domain; by piecewise linearity it suffices to compare
    /// at the union of vertex x-coordinates.
    pub fn lies_over(&self, other: &NewtonPolygon) -> Result<bool> {
        if self.x_max() != other.x_max() {
            return Err(Error::DomainMismatch);
        }
        let mut xs: Vec<&Rational> = self
            .points
            .iter()
            .chain(other.points.iter())
            .map(|p| &p.0)
            .collect();
        xs.sort();
        xs.dedup();
        for x in xs {
            if self.eval(x)? < other.eval(x)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Both coordinates multiplied by a factor (used to shrink the
    /// Artin-Schreier polygon by p - 1).
    pub fn scale(&self, factor: &Rational) -> NewtonPolygon {
        NewtonPolygon {
            points: self
                .points
                .iter()
                .map(|(x, y)| (x * factor, y * factor))
                .collect(),
        }
    }
}

impl Serialize for NewtonPolygon {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Pts<'a>(&'a [(Rational, Rational)]);
        impl Serialize for Pts<'_> {
            fn serialize<S: Serializer>(
                &self,
                serializer: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
                for (x, y) in self.0 {
                    seq.serialize_element(&[x.to_string(), y.to_string()])?;
                }
                seq.end()
            }
        }
        let mut st = serializer.serialize_struct("NewtonPolygon", 1)?;
        st.serialize_field("points", &Pts(&self.points))?;
        st.end()
    }
}
