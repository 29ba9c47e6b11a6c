//! Planar predicates for circular cuts.
//!
//! Every comparison against a disk boundary uses the absolute tolerance
//! [`GEOM_TOL`]; anything within it counts as touching. The disk is closed, so
//! points on the circle are inside and tangent segments intersect it.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute boundary tolerance in model length units.
pub const GEOM_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    #[inline]
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    #[inline]
    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    #[inline]
    pub fn dist_sq(self, other: Point) -> f64 {
        (self - other).norm_sq()
    }

    /// Counterclockwise quarter turn.
    #[inline]
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    #[inline]
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    #[inline]
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    #[inline]
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

/// Axis-aligned rectangle `[x_min, x_max] x [y_min, y_max]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Rectangle {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        let finite = [x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite());
        if !finite || x_min >= x_max || y_min >= y_max {
            return Err(Error::InvalidRectangle {
                x_min,
                x_max,
                y_min,
                y_max,
            });
        }
        Ok(Self {
            x_min,
            x_max,
            y_min,
            y_max,
        })
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn diagonal(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn center(&self) -> Point {
        Point::new(
            0.5 * (self.x_min + self.x_max),
            0.5 * (self.y_min + self.y_max),
        )
    }

    /// Closed containment, padded by [`GEOM_TOL`].
    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.x_min - GEOM_TOL
            && p.x <= self.x_max + GEOM_TOL
            && p.y >= self.y_min - GEOM_TOL
            && p.y <= self.y_max + GEOM_TOL
    }

    pub fn contains_rect(&self, other: &Rectangle) -> bool {
        other.x_min >= self.x_min - GEOM_TOL
            && other.x_max <= self.x_max + GEOM_TOL
            && other.y_min >= self.y_min - GEOM_TOL
            && other.y_max <= self.y_max + GEOM_TOL
    }

    /// Rectangle of admissible centers for a disk of `radius` that must stay
    /// inside `self`. `None` unless both sides exceed `2 * radius`.
    pub fn inset(&self, radius: f64) -> Option<Rectangle> {
        Rectangle::new(
            self.x_min + radius,
            self.x_max - radius,
            self.y_min + radius,
            self.y_max - radius,
        )
        .ok()
    }

    pub fn corners(&self) -> [Point; 4] {
        [
            Point::new(self.x_min, self.y_min),
            Point::new(self.x_max, self.y_min),
            Point::new(self.x_max, self.y_max),
            Point::new(self.x_min, self.y_max),
        ]
    }

    pub fn intersection(&self, other: &Rectangle) -> Option<Rectangle> {
        Rectangle::new(
            self.x_min.max(other.x_min),
            self.x_max.min(other.x_max),
            self.y_min.max(other.y_min),
            self.y_max.min(other.y_max),
        )
        .ok()
    }
}

/// Closed disk that destroys every link touching it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircularCut {
    pub center: Point,
    pub radius: f64,
}

impl CircularCut {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidRadius(radius));
        }
        if !center.is_finite() {
            return Err(Error::OutOfDomain {
                x: center.x,
                y: center.y,
            });
        }
        Ok(Self { center, radius })
    }

    /// Checks that the whole disk lies inside `rec`.
    pub fn ensure_within(&self, rec: &Rectangle) -> Result<()> {
        let fits = self.center.x - self.radius >= rec.x_min - GEOM_TOL
            && self.center.x + self.radius <= rec.x_max + GEOM_TOL
            && self.center.y - self.radius >= rec.y_min - GEOM_TOL
            && self.center.y + self.radius <= rec.y_max + GEOM_TOL;
        if fits {
            Ok(())
        } else {
            Err(Error::CutOutsideRegion {
                x: self.center.x,
                y: self.center.y,
                radius: self.radius,
            })
        }
    }

    #[inline]
    pub fn contains(&self, p: Point) -> bool {
        p.dist(self.center) <= self.radius + GEOM_TOL
    }
}

/// Distance from `p` to the closed segment `[u, v]`.
#[inline]
pub fn point_segment_distance(p: Point, u: Point, v: Point) -> f64 {
    let d = v - u;
    let len_sq = d.norm_sq();
    if len_sq == 0.0 {
        return p.dist(u);
    }
    let t = ((p - u).dot(d) / len_sq).clamp(0.0, 1.0);
    p.dist(u + d * t)
}

/// Whether the closed segment `[u, v]` meets the closed disk.
#[inline]
pub fn segment_intersects_disk(u: Point, v: Point, cut: &CircularCut) -> bool {
    point_segment_distance(cut.center, u, v) <= cut.radius + GEOM_TOL
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LinkClass {
    /// Both endpoints inside the disk.
    Alpha,
    /// Exactly one endpoint inside.
    Beta,
    /// Both endpoints outside, segment crosses the disk.
    Gamma,
    Untouched,
}

impl LinkClass {
    pub fn is_cut(self) -> bool {
        self != LinkClass::Untouched
    }
}

pub fn classify_link(u: Point, v: Point, cut: &CircularCut) -> LinkClass {
    match (cut.contains(u), cut.contains(v)) {
        (true, true) => LinkClass::Alpha,
        (true, false) | (false, true) => LinkClass::Beta,
        (false, false) if segment_intersects_disk(u, v, cut) => LinkClass::Gamma,
        (false, false) => LinkClass::Untouched,
    }
}

/// The two points where lines through `u` touch the circle. The first is
/// reached by turning counterclockwise from the ray toward `u`.
pub fn tangent_points(u: Point, cut: &CircularCut) -> Result<(Point, Point)> {
    let offset = u - cut.center;
    let d = offset.norm();
    if d <= cut.radius + GEOM_TOL {
        return Err(Error::SourceInsideDisk { x: u.x, y: u.y });
    }
    let e = offset * (1.0 / d);
    let cos = cut.radius / d;
    let sin = (1.0 - cos * cos).max(0.0).sqrt();
    let along = e * (cut.radius * cos);
    let across = e.perp() * (cut.radius * sin);
    Ok((cut.center + along + across, cut.center + along - across))
}

/// Points outside the disk whose segment to `source` crosses it.
///
/// Holds the tangent cone from `source` so that membership of many points can
/// be decided with two half-plane tests and a chord-side test. Points within a
/// small band of any of those boundaries go through the exact segment test, so
/// the answer always agrees with [`segment_intersects_disk`].
#[derive(Clone, Copy, Debug)]
pub struct ShadowRegion {
    pub source: Point,
    pub cut: CircularCut,
    pub tangent_points: (Point, Point),
    pub bounding_rect: Rectangle,
    // inward normals of the two cone edges
    normal_a: Point,
    normal_b: Point,
    // unit vector from source toward the center
    axis: Point,
    chord_offset: f64,
    band: f64,
}

impl ShadowRegion {
    pub fn new(source: Point, cut: CircularCut, bounding_rect: Rectangle) -> Result<Self> {
        let (ta, tb) = tangent_points(source, &cut)?;
        let to_center = cut.center - source;
        let dist = to_center.norm();
        let axis = to_center * (1.0 / dist);
        let edge_a = ta - source;
        let edge_b = tb - source;
        // orient each normal so the center is on its non-negative side
        let mut normal_a = edge_a.perp();
        if normal_a.dot(to_center) < 0.0 {
            normal_a = normal_a * -1.0;
        }
        let mut normal_b = edge_b.perp();
        if normal_b.dot(to_center) < 0.0 {
            normal_b = normal_b * -1.0;
        }
        normal_a = normal_a * (1.0 / normal_a.norm());
        normal_b = normal_b * (1.0 / normal_b.norm());
        let chord_mid = (ta + tb) * 0.5;
        let scale = dist + cut.radius + bounding_rect.diagonal();
        Ok(Self {
            source,
            cut,
            tangent_points: (ta, tb),
            bounding_rect,
            normal_a,
            normal_b,
            axis,
            chord_offset: axis.dot(chord_mid - source),
            band: 1e-9 * scale,
        })
    }

    /// Membership of `v` in the shadow. Errors if `v` is inside the disk.
    pub fn contains(&self, v: Point) -> Result<bool> {
        if self.cut.contains(v) {
            return Err(Error::PointInsideDisk { x: v.x, y: v.y });
        }
        Ok(self.contains_outside(v))
    }

    /// Same as [`ShadowRegion::contains`] for a `v` the caller already knows
    /// is outside the disk.
    #[inline]
    pub fn contains_outside(&self, v: Point) -> bool {
        let rel = v - self.source;
        let sa = self.normal_a.dot(rel);
        let sb = self.normal_b.dot(rel);
        if sa < -self.band || sb < -self.band {
            return false;
        }
        let along = self.axis.dot(rel) - self.chord_offset;
        if sa > self.band && sb > self.band {
            if along > self.band {
                return true;
            }
            if along < -self.band {
                return false;
            }
        }
        segment_intersects_disk(self.source, v, &self.cut)
    }

    /// Conservative x-interval of the tangent cone on the horizontal line at
    /// height `y`, or `None` when the line misses the cone.
    pub fn cone_x_range(&self, y: f64) -> Option<(f64, f64)> {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        let dy = y - self.source.y;
        for n in [self.normal_a, self.normal_b] {
            // n.x * (x - sx) + n.y * dy >= -band
            let rhs = -self.band - n.y * dy;
            if n.x.abs() < 1e-15 {
                if rhs > 0.0 {
                    return None;
                }
                continue;
            }
            let bound = self.source.x + rhs / n.x;
            if n.x > 0.0 {
                lo = lo.max(bound);
            } else {
                hi = hi.min(bound);
            }
        }
        (lo <= hi).then_some((lo, hi))
    }
}
