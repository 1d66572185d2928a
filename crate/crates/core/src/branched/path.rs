//! Piecewise paths in C^2, the two reference loops, certification against
//! their ambient cut domains, and winding accumulation along paths.

use crate::branched::region::{region_contains, singular_distance, Point, Region};
use crate::rational::{rat, to_f64, Rational};
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PathError {
    #[error("invalid path parameters: {0}")]
    InvalidParams(String),
    #[error("sampling budget exhausted: {0}")]
    SampleBudget(String),
    #[error("certification failed: {0}")]
    Failed(String),
}

/// The four radius pairs steering the loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathParams {
    pub a0: Rational,
    pub b0: Rational,
    pub a1: Rational,
    pub b1: Rational,
    pub a2: Rational,
    pub b2: Rational,
    pub a3: Rational,
    pub b3: Rational,
}

impl PathParams {
    pub fn new(values: [Rational; 8]) -> Result<Self, PathError> {
        let [a0, b0, a1, b1, a2, b2, a3, b3] = values;
        let p = PathParams {
            a0,
            b0,
            a1,
            b1,
            a2,
            b2,
            a3,
            b3,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn default_params() -> Self {
        PathParams {
            a0: rat(7, 1),
            b0: rat(4, 1),
            a1: rat(7, 1),
            b1: rat(2, 1),
            a2: rat(2, 1),
            b2: rat(7, 1),
            a3: rat(4, 1),
            b3: rat(7, 1),
        }
    }

    pub fn validate(&self) -> Result<(), PathError> {
        let zero = Rational::from_integer(0.into());
        let checks: [(&str, bool); 4] = [
            (
                "a0 > b0 > a0 - b0 > 0",
                self.a0 > self.b0
                    && self.b0 > &self.a0 - &self.b0
                    && &self.a0 - &self.b0 > zero,
            ),
            (
                "a1 > a1 - b1 > b1 > 0",
                self.a1 > &self.a1 - &self.b1
                    && &self.a1 - &self.b1 > self.b1
                    && self.b1 > zero,
            ),
            (
                "b2 > b2 - a2 > a2 > 0",
                self.b2 > &self.b2 - &self.a2
                    && &self.b2 - &self.a2 > self.a2
                    && self.a2 > zero,
            ),
            (
                "b3 > a3 > b3 - a3 > 0",
                self.b3 > self.a3
                    && self.a3 > &self.b3 - &self.a3
                    && &self.b3 - &self.a3 > zero,
            ),
        ];
        for (name, ok) in checks {
            if !ok {
                return Err(PathError::InvalidParams(name.into()));
            }
        }
        Ok(())
    }
}

/// Base point on the diagonal ray: P0 = (a0 e^{i pi/4}, b0 e^{i pi/4}).
/// All three of arg z1, arg z2, arg(z1 - z2) equal pi/4 there.
pub fn anchor_base_point(params: &PathParams) -> Result<Point, PathError> {
    params.validate()?;
    Ok((
        polar(to_f64(&params.a0), PI / 4.0),
        polar(to_f64(&params.b0), PI / 4.0),
    ))
}

fn polar(r: f64, theta: f64) -> Complex64 {
    Complex64::from_polar(r, theta)
}

#[derive(Debug, Clone)]
pub enum CoordPiece {
    Line { from: Complex64, to: Complex64 },
    Arc {
        center: Complex64,
        radius: f64,
        theta0: f64,
        theta1: f64,
    },
}

impl CoordPiece {
    fn eval(&self, s: f64) -> Complex64 {
        match self {
            CoordPiece::Line { from, to } => from + (to - from) * s,
            CoordPiece::Arc {
                center,
                radius,
                theta0,
                theta1,
            } => center + polar(*radius, theta0 + (theta1 - theta0) * s),
        }
    }

    /// Upper bound for |d/ds|.
    fn speed(&self) -> f64 {
        match self {
            CoordPiece::Line { from, to } => (to - from).norm(),
            CoordPiece::Arc {
                radius,
                theta0,
                theta1,
                ..
            } => radius * (theta1 - theta0).abs(),
        }
    }
}

/// Simple comparison shapes used for the per-interval containment lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Constraint {
    InS1,
    InS2,
    /// |z1| > |z2| > 0
    Mod12,
    /// |z2| > |z1| > 0
    Mod21,
    /// |z2| > |z1| > 0 with Re z2 < 0 and Im z2 < 0
    Mod21Neg,
    /// |z2| > |z1 - z2| > 0
    Mod2D,
    /// |z1| > |z1 - z2| > 0
    Mod1D,
    /// Re z1 > 0 > Re z2 and Im z1 > 0 > Im z2
    QuadSplit,
    /// Re z1 > -Re z2 > 0 and Im z1 > -Im z2 > 0
    ConeZ1NegZ2,
    /// -Re z2 > Re z1 > 0 and -Im z2 > Im z1 > 0
    ConeNegZ2Z1,
    /// Re z2 < Re(z2-z1) < Re z1 < 0 and the same for Im
    NegChain,
}

impl Constraint {
    pub fn holds(self, p: Point) -> bool {
        let (z1, z2) = p;
        let d = z1 - z2;
        match self {
            Constraint::InS1 => region_contains(Region::S1, p),
            Constraint::InS2 => region_contains(Region::S2, p),
            Constraint::Mod12 => z1.norm() > z2.norm() && z2.norm() > 0.0,
            Constraint::Mod21 => z2.norm() > z1.norm() && z1.norm() > 0.0,
            Constraint::Mod21Neg => {
                z2.norm() > z1.norm() && z1.norm() > 0.0 && z2.re < 0.0 && z2.im < 0.0
            }
            Constraint::Mod2D => z2.norm() > d.norm() && d.norm() > 0.0,
            Constraint::Mod1D => z1.norm() > d.norm() && d.norm() > 0.0,
            Constraint::QuadSplit => z1.re > 0.0 && 0.0 > z2.re && z1.im > 0.0 && 0.0 > z2.im,
            Constraint::ConeZ1NegZ2 => z1.re > -z2.re && -z2.re > 0.0 && z1.im > -z2.im && -z2.im > 0.0,
            Constraint::ConeNegZ2Z1 => -z2.re > z1.re && z1.re > 0.0 && -z2.im > z1.im && z1.im > 0.0,
            Constraint::NegChain => {
                let w = z2 - z1;
                z2.re < w.re && w.re < z1.re && z1.re < 0.0
                    && z2.im < w.im && w.im < z1.im && z1.im < 0.0
            }
        }
    }
}

/// Containment requirement over a span of the path, in units of segments
/// (`lo..hi` out of `n_segments`), with open or closed ends.
#[derive(Debug, Clone)]
pub struct IntervalCheck {
    pub lo: f64,
    pub hi: f64,
    pub open_lo: bool,
    pub open_hi: bool,
    pub constraint: Constraint,
}

#[derive(Debug, Clone)]
pub struct Segment {
    pub z1: CoordPiece,
    pub z2: CoordPiece,
    pub start: Point,
    pub end: Point,
}

impl Segment {
    fn eval(&self, s: f64) -> Point {
        if s <= 0.0 {
            return self.start;
        }
        if s >= 1.0 {
            return self.end;
        }
        (self.z1.eval(s), self.z2.eval(s))
    }

    fn speed(&self) -> f64 {
        self.z1.speed().max(self.z2.speed())
    }
}

#[derive(Debug, Clone)]
pub struct PathSpec {
    pub name: String,
    pub segments: Vec<Segment>,
    pub closed: bool,
    pub samples_per_segment: usize,
    pub checks: Vec<IntervalCheck>,
}

impl PathSpec {
    /// Point at global parameter t in [0, 1].
    pub fn eval(&self, t: f64) -> Point {
        let n = self.segments.len() as f64;
        let u = (t.clamp(0.0, 1.0)) * n;
        let idx = (u.floor() as usize).min(self.segments.len() - 1);
        self.segments[idx].eval(u - idx as f64)
    }

    /// Exact joint continuity and closure.
    pub fn validate(&self) -> Result<(), PathError> {
        for w in self.segments.windows(2) {
            if w[0].end != w[1].start {
                return Err(PathError::Failed(format!(
                    "segment joint mismatch: {:?} vs {:?}",
                    w[0].end, w[1].start
                )));
            }
        }
        if self.closed {
            let first = self.segments.first().ok_or_else(|| {
                PathError::Failed("empty path".into())
            })?;
            let last = self.segments.last().unwrap();
            if first.start != last.end {
                return Err(PathError::Failed("path is flagged closed but end != start".into()));
            }
        }
        Ok(())
    }

    /// JSON form: metadata plus a sampled coordinate table.
    pub fn to_json(&self, per_segment: usize) -> serde_json::Value {
        let samples: Vec<serde_json::Value> = self
            .sample_table(per_segment)
            .into_iter()
            .map(|(t, z1, z2)| serde_json::json!([t, z1.re, z1.im, z2.re, z2.im]))
            .collect();
        serde_json::json!({
            "name": self.name,
            "closed": self.closed,
            "segments": self.segments.len(),
            "samples": samples,
        })
    }

    /// Sampled coordinates for export: (t, z1, z2).
    pub fn sample_table(&self, per_segment: usize) -> Vec<(f64, Complex64, Complex64)> {
        let mut out = Vec::new();
        let n_seg = self.segments.len();
        for (i, seg) in self.segments.iter().enumerate() {
            let last = if i + 1 == n_seg { per_segment } else { per_segment - 1 };
            for j in 0..=last {
                let s = j as f64 / per_segment as f64;
                let t = (i as f64 + s) / n_seg as f64;
                let (z1, z2) = seg.eval(s);
                out.push((t, z1, z2));
            }
        }
        out
    }
}

/// The first reference loop; lives in the gamma cut domain.
pub fn build_gamma(params: &PathParams) -> Result<PathSpec, PathError> {
    params.validate()?;
    let (a0, b0) = (to_f64(&params.a0), to_f64(&params.b0));
    let (a1, b1) = (to_f64(&params.a1), to_f64(&params.b1));
    let (a2, b2) = (to_f64(&params.a2), to_f64(&params.b2));
    let q1 = PI / 4.0;
    let q5 = 5.0 * PI / 4.0;

    // junction points, each computed once and shared by both neighbors
    let p0 = (polar(a0, q1), polar(b0, q1));
    let p1 = (polar(a1, q1), polar(b1, q1));
    let p2 = (polar(a1, q1), polar(b1, q5));
    let p3 = (polar(a2, q1), polar(b2, q5));
    let p4 = (polar(a2, q5), polar(b2, q5));
    let p5 = (polar(b2, q5) + polar(b2 - a2, q5), polar(b2, q5));
    let p6 = (polar(2.0 * b2 - a2, q1), polar(b2, q1));

    let segments = vec![
        Segment {
            z1: CoordPiece::Line { from: p0.0, to: p1.0 },
            z2: CoordPiece::Line { from: p0.1, to: p1.1 },
            start: p0,
            end: p1,
        },
        Segment {
            z1: CoordPiece::Line { from: p1.0, to: p2.0 },
            z2: CoordPiece::Arc { center: Complex64::new(0.0, 0.0), radius: b1, theta0: q1, theta1: q1 + PI },
            start: p1,
            end: p2,
        },
        Segment {
            z1: CoordPiece::Line { from: p2.0, to: p3.0 },
            z2: CoordPiece::Line { from: p2.1, to: p3.1 },
            start: p2,
            end: p3,
        },
        Segment {
            z1: CoordPiece::Arc { center: Complex64::new(0.0, 0.0), radius: a2, theta0: q1, theta1: q1 + PI },
            z2: CoordPiece::Line { from: p3.1, to: p4.1 },
            start: p3,
            end: p4,
        },
        Segment {
            z1: CoordPiece::Arc { center: polar(b2, q5), radius: b2 - a2, theta0: q1, theta1: q1 + PI },
            z2: CoordPiece::Line { from: p4.1, to: p5.1 },
            start: p4,
            end: p5,
        },
        Segment {
            z1: CoordPiece::Arc { center: Complex64::new(0.0, 0.0), radius: 2.0 * b2 - a2, theta0: q5, theta1: q5 - PI },
            z2: CoordPiece::Arc { center: Complex64::new(0.0, 0.0), radius: b2, theta0: q5, theta1: q5 - PI },
            start: p5,
            end: p6,
        },
        Segment {
            z1: CoordPiece::Line { from: p6.0, to: p0.0 },
            z2: CoordPiece::Line { from: p6.1, to: p0.1 },
            start: p6,
            end: p0,
        },
    ];
    let checks = vec![
        IntervalCheck { lo: 0.0, hi: 0.0, open_lo: false, open_hi: false, constraint: Constraint::InS1 },
        IntervalCheck { lo: 0.0, hi: 2.0, open_lo: true, open_hi: true, constraint: Constraint::Mod12 },
        IntervalCheck { lo: 2.0, hi: 2.0, open_lo: false, open_hi: false, constraint: Constraint::ConeZ1NegZ2 },
        IntervalCheck { lo: 2.0, hi: 3.0, open_lo: true, open_hi: true, constraint: Constraint::QuadSplit },
        IntervalCheck { lo: 3.0, hi: 3.0, open_lo: false, open_hi: false, constraint: Constraint::ConeNegZ2Z1 },
        IntervalCheck { lo: 3.0, hi: 4.0, open_lo: true, open_hi: true, constraint: Constraint::Mod21Neg },
        IntervalCheck { lo: 4.0, hi: 4.0, open_lo: false, open_hi: false, constraint: Constraint::NegChain },
        IntervalCheck { lo: 4.0, hi: 7.0, open_lo: true, open_hi: true, constraint: Constraint::Mod2D },
        IntervalCheck { lo: 7.0, hi: 7.0, open_lo: false, open_hi: false, constraint: Constraint::InS1 },
    ];
    let path = PathSpec {
        name: "gamma".into(),
        segments,
        closed: true,
        samples_per_segment: 256,
        checks,
    };
    path.validate()?;
    Ok(path)
}

/// The second reference loop; lives in the sigma cut domain.
pub fn build_sigma(params: &PathParams) -> Result<PathSpec, PathError> {
    params.validate()?;
    let (a0, b0) = (to_f64(&params.a0), to_f64(&params.b0));
    let (a1, b1) = (to_f64(&params.a1), to_f64(&params.b1));
    let (a2, b2) = (to_f64(&params.a2), to_f64(&params.b2));
    let (a3, b3) = (to_f64(&params.a3), to_f64(&params.b3));
    let q1 = PI / 4.0;
    let q5 = 5.0 * PI / 4.0;

    let p0 = (polar(a3, q1), polar(a3, q1) + polar(b3 - a3, q1));
    let p1 = (polar(a3, q1), polar(a3, q1) + polar(b3 - a3, q1 + PI));
    let p2 = (polar(a0, q1), polar(b0, q1));
    let p3 = (polar(a1, q1), polar(b1, q1));
    let p4 = (polar(a1, q1), polar(b1, q5));
    let p5 = (polar(a2, q1), polar(b2, q5));
    let p6 = (polar(a2, q1), polar(b2, q1));

    let segments = vec![
        Segment {
            z1: CoordPiece::Line { from: p0.0, to: p1.0 },
            z2: CoordPiece::Arc { center: polar(a3, q1), radius: b3 - a3, theta0: q1, theta1: q1 + PI },
            start: p0,
            end: p1,
        },
        Segment {
            z1: CoordPiece::Line { from: p1.0, to: p2.0 },
            z2: CoordPiece::Line { from: p1.1, to: p2.1 },
            start: p1,
            end: p2,
        },
        Segment {
            z1: CoordPiece::Line { from: p2.0, to: p3.0 },
            z2: CoordPiece::Line { from: p2.1, to: p3.1 },
            start: p2,
            end: p3,
        },
        Segment {
            z1: CoordPiece::Line { from: p3.0, to: p4.0 },
            z2: CoordPiece::Arc { center: Complex64::new(0.0, 0.0), radius: b1, theta0: q1, theta1: q1 + PI },
            start: p3,
            end: p4,
        },
        Segment {
            z1: CoordPiece::Line { from: p4.0, to: p5.0 },
            z2: CoordPiece::Line { from: p4.1, to: p5.1 },
            start: p4,
            end: p5,
        },
        Segment {
            z1: CoordPiece::Line { from: p5.0, to: p6.0 },
            z2: CoordPiece::Arc { center: Complex64::new(0.0, 0.0), radius: b2, theta0: q5, theta1: q5 - PI },
            start: p5,
            end: p6,
        },
        Segment {
            z1: CoordPiece::Line { from: p6.0, to: p0.0 },
            z2: CoordPiece::Line { from: p6.1, to: p0.1 },
            start: p6,
            end: p0,
        },
    ];
    let checks = vec![
        IntervalCheck { lo: 0.0, hi: 0.0, open_lo: false, open_hi: false, constraint: Constraint::InS2 },
        IntervalCheck { lo: 0.0, hi: 2.0, open_lo: true, open_hi: true, constraint: Constraint::Mod1D },
        IntervalCheck { lo: 2.0, hi: 2.0, open_lo: false, open_hi: false, constraint: Constraint::InS1 },
        IntervalCheck { lo: 2.0, hi: 4.0, open_lo: true, open_hi: true, constraint: Constraint::Mod12 },
        IntervalCheck { lo: 4.0, hi: 4.0, open_lo: false, open_hi: false, constraint: Constraint::ConeZ1NegZ2 },
        IntervalCheck { lo: 4.0, hi: 5.0, open_lo: true, open_hi: true, constraint: Constraint::QuadSplit },
        IntervalCheck { lo: 5.0, hi: 5.0, open_lo: false, open_hi: false, constraint: Constraint::ConeNegZ2Z1 },
        IntervalCheck { lo: 5.0, hi: 7.0, open_lo: true, open_hi: true, constraint: Constraint::Mod21 },
        IntervalCheck { lo: 7.0, hi: 7.0, open_lo: false, open_hi: false, constraint: Constraint::InS2 },
    ];
    let path = PathSpec {
        name: "sigma".into(),
        segments,
        closed: true,
        samples_per_segment: 256,
        checks,
    };
    path.validate()?;
    Ok(path)
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct Certification {
    pub path: String,
    pub ambient: Region,
    pub pass: bool,
    pub clearance: f64,
    pub samples: usize,
    pub failures: Vec<String>,
}

/// Verify by adaptive sampling that the path stays inside `ambient` with
/// positive clearance and that the per-interval containments hold.
pub fn certify_path(
    path: &PathSpec,
    ambient: Region,
    clearance_floor: f64,
    max_samples: usize,
) -> Result<Certification, PathError> {
    path.validate()?;
    let n_seg = path.segments.len();
    // start dense enough that no segment moves more than ~1/32 of its span
    // per step
    let fastest = path
        .segments
        .iter()
        .map(|s| s.speed())
        .fold(0.0f64, f64::max);
    let mut per_seg = path
        .samples_per_segment
        .max(8)
        .max((fastest * 4.0).ceil() as usize);
    let mut previous_clearance = f64::NAN;
    loop {
        let mut clearance = f64::INFINITY;
        let mut failures = Vec::new();
        let mut max_step = 0.0f64;
        for (i, seg) in path.segments.iter().enumerate() {
            let mut prev: Option<Point> = None;
            for j in 0..=per_seg {
                let s = j as f64 / per_seg as f64;
                let u = i as f64 + s; // position in segment units
                let p = seg.eval(s);
                clearance = clearance.min(singular_distance(ambient, p));
                if !region_contains(ambient, p) {
                    failures.push(format!("t={:.6}: left the ambient domain", u / n_seg as f64));
                }
                for c in &path.checks {
                    let lo_ok = if c.open_lo { u > c.lo } else { u >= c.lo };
                    let hi_ok = if c.open_hi { u < c.hi } else { u <= c.hi };
                    if lo_ok && hi_ok && !c.constraint.holds(p) {
                        failures.push(format!(
                            "t={:.6}: containment {:?} violated",
                            u / n_seg as f64,
                            c.constraint
                        ));
                    }
                }
                if let Some(q) = prev {
                    let step = (p.0 - q.0).norm().max((p.1 - q.1).norm());
                    max_step = max_step.max(step);
                }
                prev = Some(p);
            }
        }
        failures.truncate(8);
        let stable = previous_clearance.is_finite()
            && (clearance - previous_clearance).abs() <= 0.05 * clearance.abs().max(1e-12);
        if (stable && max_step < 0.5 * clearance) || !failures.is_empty() {
            let pass = failures.is_empty() && clearance > clearance_floor;
            if clearance <= clearance_floor {
                failures.push(format!(
                    "clearance {clearance} at or below floor {clearance_floor}"
                ));
            }
            return Ok(Certification {
                path: path.name.clone(),
                ambient,
                pass,
                clearance,
                samples: per_seg * n_seg,
                failures,
            });
        }
        previous_clearance = clearance;
        per_seg *= 2;
        if per_seg * n_seg > max_samples {
            return Err(PathError::SampleBudget(format!(
                "needed more than {max_samples} samples to stabilize clearance"
            )));
        }
    }
}

/// Argument accumulation of (z1, z2, z1 - z2) along the path.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Continuation {
    pub delta_args: [f64; 3],
    /// Integer winding triple; present only for closed paths.
    pub winding: Option<[i64; 3]>,
    pub samples: usize,
}

/// Accumulate arguments with per-step |delta arg| < pi/2, refining the
/// sampling until the bound holds.
pub fn trace_winding(path: &PathSpec, max_samples: usize) -> Result<Continuation, PathError> {
    path.validate()?;
    let n_seg = path.segments.len();
    let mut per_seg = path.samples_per_segment.max(16);
    'outer: loop {
        if per_seg * n_seg > max_samples {
            return Err(PathError::SampleBudget(format!(
                "winding trace exceeded {max_samples} samples"
            )));
        }
        let mut acc = [0.0f64; 3];
        let mut prev: Option<[f64; 3]> = None;
        for seg in &path.segments {
            for j in 0..=per_seg {
                let s = j as f64 / per_seg as f64;
                let (z1, z2) = seg.eval(s);
                let cur = [z1.arg(), z2.arg(), (z1 - z2).arg()];
                if let Some(p) = prev {
                    for k in 0..3 {
                        let mut d = cur[k] - p[k];
                        while d > PI {
                            d -= 2.0 * PI;
                        }
                        while d < -PI {
                            d += 2.0 * PI;
                        }
                        if d.abs() >= PI / 2.0 {
                            per_seg *= 2;
                            continue 'outer;
                        }
                        acc[k] += d;
                    }
                }
                prev = Some(cur);
            }
        }
        let winding = if path.closed {
            let mut w = [0i64; 3];
            for k in 0..3 {
                let turns = acc[k] / (2.0 * PI);
                let n = turns.round();
                if (turns - n).abs() > 1e-6 {
                    return Err(PathError::Failed(format!(
                        "closed path accumulated a non-integer number of turns: {turns}"
                    )));
                }
                w[k] = n as i64;
            }
            Some(w)
        } else {
            None
        };
        return Ok(Continuation {
            delta_args: acc,
            winding,
            samples: per_seg * n_seg,
        });
    }
}

/// Restriction of a path to a sub-range of its segments.
pub fn sub_path(path: &PathSpec, seg_lo: usize, seg_hi: usize) -> PathSpec {
    PathSpec {
        name: format!("{}[{}..{}]", path.name, seg_lo, seg_hi),
        segments: path.segments[seg_lo..seg_hi].to_vec(),
        closed: false,
        samples_per_segment: path.samples_per_segment,
        checks: Vec::new(),
    }
}

/// The same trace, walked backwards.
pub fn reverse_path(path: &PathSpec) -> PathSpec {
    let flip = |c: &CoordPiece| match c {
        CoordPiece::Line { from, to } => CoordPiece::Line {
            from: *to,
            to: *from,
        },
        CoordPiece::Arc {
            center,
            radius,
            theta0,
            theta1,
        } => CoordPiece::Arc {
            center: *center,
            radius: *radius,
            theta0: *theta1,
            theta1: *theta0,
        },
    };
    PathSpec {
        name: format!("{}-reversed", path.name),
        segments: path
            .segments
            .iter()
            .rev()
            .map(|s| Segment {
                z1: flip(&s.z1),
                z2: flip(&s.z2),
                start: s.end,
                end: s.start,
            })
            .collect(),
        closed: path.closed,
        samples_per_segment: path.samples_per_segment,
        checks: Vec::new(),
    }
}

/// Analytically continue logarithm data for (z1, z2, z1 - z2) along the
/// path: arguments accumulate, magnitudes are read off at the endpoint.
/// `start` must be valid logs of the path's start point.
pub fn transport_logs(
    path: &PathSpec,
    start: (Complex64, Complex64, Complex64),
    max_samples: usize,
) -> Result<(Complex64, Complex64, Complex64), PathError> {
    let p0 = path.eval(0.0);
    for (l, v) in [(start.0, p0.0), (start.1, p0.1), (start.2, p0.0 - p0.1)] {
        if (l.exp() - v).norm() > 1e-9 * (1.0 + v.norm()) {
            return Err(PathError::Failed(
                "start logs do not match the path start point".into(),
            ));
        }
    }
    let trace = trace_winding(path, max_samples)?;
    let end = path.eval(1.0);
    let vals = [end.0, end.1, end.0 - end.1];
    let mut out = [Complex64::new(0.0, 0.0); 3];
    for k in 0..3 {
        let arg0 = [start.0, start.1, start.2][k].im;
        out[k] = Complex64::new(vals[k].norm().ln(), arg0 + trace.delta_args[k]);
    }
    Ok((out[0], out[1], out[2]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_params_satisfy_inequalities() {
        PathParams::default_params().validate().unwrap();
        // degenerate parameters are rejected up front
        let bad = PathParams {
            b0: rat(8, 1),
            ..PathParams::default_params()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn anchor_is_on_the_diagonal_ray() {
        let p = PathParams::default_params();
        let (z1, z2) = anchor_base_point(&p).unwrap();
        assert!((z1.arg() - PI / 4.0).abs() < 1e-15);
        assert!((z2.arg() - PI / 4.0).abs() < 1e-15);
        assert!(((z1 - z2).arg() - PI / 4.0).abs() < 1e-12);
        assert!(region_contains(Region::S1, (z1, z2)));
        assert!(((z1 - z2).norm() - 3.0 / 1.0).abs() < 1e-12);
    }

    #[test]
    fn gamma_endpoints_and_joints() {
        let p = PathParams::default_params();
        let g = build_gamma(&p).unwrap();
        let start = g.eval(0.0);
        assert!((start.0 - polar(7.0, PI / 4.0)).norm() < 1e-15);
        assert!((start.1 - polar(4.0, PI / 4.0)).norm() < 1e-15);
        // t = 2/7 lands at (a1 e^{i pi/4}, b1 e^{5 i pi/4})
        let q = g.eval(2.0 / 7.0);
        assert!((q.0 - polar(7.0, PI / 4.0)).norm() < 1e-12);
        assert!((q.1 - polar(2.0, 5.0 * PI / 4.0)).norm() < 1e-12);
        let end = g.eval(1.0);
        assert_eq!(start, end);
    }

    #[test]
    fn sigma_endpoints() {
        let p = PathParams::default_params();
        let s = build_sigma(&p).unwrap();
        let start = s.eval(0.0);
        let end = s.eval(1.0);
        assert_eq!(start, end);
        assert!((end.0 - polar(4.0, PI / 4.0)).norm() < 1e-15);
        assert!((end.1 - polar(7.0, PI / 4.0)).norm() < 1e-12);
        assert!(region_contains(Region::S2, start));
    }

    #[test]
    fn certify_default_loops() {
        let p = PathParams::default_params();
        let g = build_gamma(&p).unwrap();
        let cg = certify_path(&g, Region::GammaDomain, 1e-6, 1 << 22).unwrap();
        assert!(cg.pass, "{:?}", cg.failures);
        assert!(cg.clearance > 0.0);
        let s = build_sigma(&p).unwrap();
        let cs = certify_path(&s, Region::SigmaDomain, 1e-6, 1 << 22).unwrap();
        assert!(cs.pass, "{:?}", cs.failures);
    }

    #[test]
    fn windings_vanish_on_the_full_loops() {
        let p = PathParams::default_params();
        for (path, ambient) in [
            (build_gamma(&p).unwrap(), Region::GammaDomain),
            (build_sigma(&p).unwrap(), Region::SigmaDomain),
        ] {
            let _ = ambient;
            let w = trace_winding(&path, 1 << 22).unwrap();
            assert_eq!(w.winding, Some([0, 0, 0]), "{}", path.name);
        }
    }

    #[test]
    fn gamma_second_segment_half_turn() {
        let p = PathParams::default_params();
        let g = build_gamma(&p).unwrap();
        let sub = sub_path(&g, 1, 2);
        let w = trace_winding(&sub, 1 << 20).unwrap();
        assert!((w.delta_args[1] - PI).abs() < 1e-9, "{:?}", w.delta_args);
        assert!(w.delta_args[0].abs() < 1e-9);
        assert!(w.winding.is_none());
    }

    #[test]
    fn concatenation_and_reversal_of_windings() {
        let p = PathParams::default_params();
        let g = build_gamma(&p).unwrap();
        let total = trace_winding(&g, 1 << 22).unwrap();
        let mut sum = [0.0; 3];
        for i in 0..7 {
            let w = trace_winding(&sub_path(&g, i, i + 1), 1 << 20).unwrap();
            for k in 0..3 {
                sum[k] += w.delta_args[k];
            }
        }
        for k in 0..3 {
            assert!((sum[k] - total.delta_args[k]).abs() < 1e-8);
        }
        // reversal negates the accumulated arguments
        let rev = reverse_path(&g);
        let wr = trace_winding(&rev, 1 << 22).unwrap();
        for k in 0..3 {
            assert!((wr.delta_args[k] + total.delta_args[k]).abs() < 1e-8);
        }
    }
}
