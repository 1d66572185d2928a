//! Cut regions in C^2 and the preferred-branch logarithm assignments.
//!
//! All preferred branches are anchored at the base point P0 on the ray
//! arg = pi/4 inside S1 and propagated along the chain
//! R1 -> (S1) -> R3, R1 -> (S1) -> R4, R4 -> (S2) -> R2.

use num_complex::Complex64;
use std::f64::consts::PI;

pub type Point = (Complex64, Complex64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Region {
    R1,
    R2,
    R3,
    R4,
    R5,
    S1,
    S2,
    /// C^2 minus the cuts z1, z2, z1-z2 in [0, +inf); hosts the first loop.
    GammaDomain,
    /// C^2 minus the cuts z1, z2, z2-z1 in [0, +inf); hosts the second loop.
    SigmaDomain,
}

/// log with arg in [0, 2pi).
pub fn log_principal(z: Complex64) -> Complex64 {
    let mut a = z.arg();
    if a < 0.0 {
        a += 2.0 * PI;
    }
    Complex64::new(z.norm().ln(), a)
}

fn on_ray(z: Complex64) -> bool {
    z.im == 0.0 && z.re >= 0.0
}

/// Distance to the cut [0, +inf).
pub fn ray_distance(z: Complex64) -> f64 {
    if z.re >= 0.0 {
        z.im.abs()
    } else {
        z.norm()
    }
}

fn ordered_chain(a: f64, b: f64, c: f64) -> bool {
    a > b && b > c && c > 0.0
}

pub fn region_contains(r: Region, p: Point) -> bool {
    let (z1, z2) = p;
    let d = z1 - z2;
    match r {
        Region::R1 => z1.norm() > z2.norm() && z2.norm() > 0.0 && !on_ray(z1) && !on_ray(z2),
        Region::R2 => z2.norm() > z1.norm() && z1.norm() > 0.0 && !on_ray(z1) && !on_ray(z2),
        Region::R3 => z2.norm() > d.norm() && d.norm() > 0.0 && !on_ray(z2) && !on_ray(d),
        Region::R4 => z1.norm() > d.norm() && d.norm() > 0.0 && !on_ray(z1) && !on_ray(-d),
        Region::R5 => {
            d.norm() > z2.norm() && z2.norm() > 0.0 && !on_ray(-z2) && !on_ray(d)
        }
        Region::S1 => {
            ordered_chain(z1.re, z2.re, d.re) && ordered_chain(z1.im, z2.im, d.im)
        }
        Region::S2 => region_contains(Region::S1, (z2, z1)),
        Region::GammaDomain => !on_ray(z1) && !on_ray(z2) && !on_ray(d) && z1.norm() > 0.0 && z2.norm() > 0.0 && d.norm() > 0.0,
        Region::SigmaDomain => !on_ray(z1) && !on_ray(z2) && !on_ray(-d) && z1.norm() > 0.0 && z2.norm() > 0.0 && d.norm() > 0.0,
    }
}

/// Distance to the union of the region's cuts and singular set.
pub fn singular_distance(r: Region, p: Point) -> f64 {
    let (z1, z2) = p;
    let d = z1 - z2;
    match r {
        Region::GammaDomain => ray_distance(z1).min(ray_distance(z2)).min(ray_distance(d)),
        Region::SigmaDomain => ray_distance(z1).min(ray_distance(z2)).min(ray_distance(-d)),
        Region::R1 | Region::R2 => ray_distance(z1)
            .min(ray_distance(z2))
            .min(d.norm()),
        Region::R3 => ray_distance(z2).min(ray_distance(d)).min(z1.norm()),
        Region::R4 => ray_distance(z1).min(ray_distance(-d)).min(z2.norm()),
        Region::R5 => ray_distance(-z2).min(ray_distance(d)).min(z1.norm()),
        Region::S1 | Region::S2 => z1.norm().min(z2.norm()).min(d.norm()),
    }
}

/// Preferred-branch logarithms (L1, L2, L12) of (z1, z2, z1-z2) on the four
/// expansion regions, as continued from the anchor.
pub fn region_logs(r: Region, p: Point) -> (Complex64, Complex64, Complex64) {
    let (z1, z2) = p;
    let i_pi = Complex64::new(0.0, PI);
    match r {
        Region::R1 => {
            let l1 = log_principal(z1);
            let l2 = log_principal(z2);
            let l12 = l1 + (Complex64::new(1.0, 0.0) - z2 / z1).ln();
            (l1, l2, l12)
        }
        Region::R2 => {
            let l1 = log_principal(z1);
            let l2 = log_principal(z2);
            let l12 = l2 - i_pi + (Complex64::new(1.0, 0.0) - z1 / z2).ln();
            (l1, l2, l12)
        }
        Region::R3 => {
            let l2 = log_principal(z2);
            let l12 = log_principal(z1 - z2);
            let l1 = l2 + (Complex64::new(1.0, 0.0) + (z1 - z2) / z2).ln();
            (l1, l2, l12)
        }
        Region::R4 => {
            let l1 = log_principal(z1);
            let l12 = log_principal(z2 - z1) - i_pi;
            let l2 = l1 + (Complex64::new(1.0, 0.0) - (z1 - z2) / z1).ln();
            (l1, l2, l12)
        }
        _ => panic!("preferred-branch logs are defined on R1..R4 only"),
    }
}

/// Round (a - b)/(i pi) to an integer, failing loudly when the difference is
/// not a half-turn multiple. Used to snap continuation data to exact phases.
pub fn half_turns_between(a: Complex64, b: Complex64) -> i64 {
    let q = (a - b) / Complex64::new(0.0, PI);
    let n = q.re.round();
    assert!(
        q.im.abs() < 1e-6 && (q.re - n).abs() < 1e-6,
        "log difference {q} is not an integer number of half-turns"
    );
    n as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn s1_membership() {
        assert!(region_contains(Region::S1, (c(3.0, 3.0), c(2.0, 2.0))));
        assert!(region_contains(Region::S2, (c(2.0, 2.0), c(3.0, 3.0))));
        assert!(!region_contains(Region::S1, (c(2.0, 2.0), c(3.0, 3.0))));
    }

    #[test]
    fn r1_excludes_cut_points() {
        // z1 = 2 lies on the cut [0, +inf)
        assert!(!region_contains(Region::R1, (c(2.0, 0.0), c(1.0, 1.0))));
        assert!(region_contains(Region::R1, (c(2.0, 0.1), c(1.0, 0.05))));
    }

    #[test]
    fn chain_agreement_on_s1() {
        // preferred branches on R1, R3, R4 restrict to the same branch on S1
        let pts = [
            (c(3.0, 3.0), c(2.0, 2.0)),
            (c(5.0, 2.5), c(3.0, 2.0)),
            (c(1.9, 4.0), c(1.0, 2.9)),
        ];
        for p in pts {
            assert!(region_contains(Region::S1, p));
            let a = region_logs(Region::R1, p);
            let b = region_logs(Region::R3, p);
            let d = region_logs(Region::R4, p);
            for (x, y) in [(a.0, b.0), (a.1, b.1), (a.2, b.2), (a.0, d.0), (a.1, d.1), (a.2, d.2)]
            {
                assert!((x - y).norm() < 1e-12, "{x} vs {y}");
            }
        }
    }

    #[test]
    fn chain_agreement_on_s2() {
        let pts = [
            (c(2.0, 2.0), c(3.0, 3.0)),
            (c(3.0, 2.0), c(5.0, 2.5)),
        ];
        for p in pts {
            assert!(region_contains(Region::S2, p));
            let a = region_logs(Region::R4, p);
            let b = region_logs(Region::R2, p);
            for (x, y) in [(a.0, b.0), (a.1, b.1), (a.2, b.2)] {
                assert!((x - y).norm() < 1e-12, "{x} vs {y}");
            }
        }
    }

    #[test]
    fn logs_exponentiate_back() {
        let p = (c(-1.0, 2.0), c(0.5, -1.5));
        for r in [Region::R1, Region::R2] {
            if !region_contains(r, p) {
                continue;
            }
            let (l1, l2, l12) = region_logs(r, p);
            assert!((l1.exp() - p.0).norm() < 1e-12);
            assert!((l2.exp() - p.1).norm() < 1e-12);
            assert!((l12.exp() - (p.0 - p.1)).norm() < 1e-12);
        }
    }
}
