//! Width and breadth functions of the star, plus an offset-sweep oracle
//! that measures them independently of the closed forms.
//!
//! For a star at rotation `phi`, `width` is its extent perpendicular to a
//! line family, and `breadth(k, .)` is the measure of center offsets
//! (per spacing period) that produce exactly `k` intersections with that
//! family. Both are `pi/n`-periodic; the closed forms are written on the
//! half-open intervals `I1 = [0, pi/2n)`, `I2 = [pi/2n, pi/n)` and
//! `I3 = [pi/n, 3pi/2n)` (`I3` shows up when the second family is offset
//! by the lattice angle).

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::geometry::{max_intersections, StarSpec};

/// Which half-open sub-interval a reduced angle falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interval {
    I1,
    I2,
    I3,
}

impl Interval {
    /// Classifies `phi` in [0, 3pi/2n); right endpoints belong to the
    /// next interval.
    pub fn classify(star: StarSpec, phi: f64) -> Result<Self> {
        let half = PI / (2.0 * star.n as f64);
        if (0.0..half).contains(&phi) {
            Ok(Interval::I1)
        } else if phi < 2.0 * half {
            Ok(Interval::I2)
        } else if phi < 3.0 * half {
            Ok(Interval::I3)
        } else {
            Err(Error::IntervalMismatch {
                phi,
                interval: "[0, 3pi/2n)",
            })
        }
    }

    fn name(self) -> &'static str {
        match self {
            Interval::I1 => "I1 = [0, pi/2n)",
            Interval::I2 => "I2 = [pi/2n, pi/n)",
            Interval::I3 => "I3 = [pi/n, 3pi/2n)",
        }
    }

    fn contains(self, star: StarSpec, phi: f64) -> bool {
        let half = PI / (2.0 * star.n as f64);
        let (lo, hi) = match self {
            Interval::I1 => (0.0, half),
            Interval::I2 => (half, 2.0 * half),
            Interval::I3 => (2.0 * half, 3.0 * half),
        };
        (lo..hi).contains(&phi)
    }
}

fn ensure_odd(star: StarSpec) -> Result<u32> {
    if star.n.is_multiple_of(2) || star.n < 3 {
        return Err(Error::UnsupportedNeedleCount(star.n));
    }
    Ok(max_intersections(star))
}

/// Width at `phi`, reduced mod `pi/n`. Odd `n` only.
pub fn width(star: StarSpec, phi: f64) -> Result<f64> {
    ensure_odd(star)?;
    Ok(width_value(star, phi))
}

/// Unchecked width for validated odd stars; hot path of the oracles.
pub(crate) fn width_value(star: StarSpec, phi: f64) -> f64 {
    let period = PI / star.n as f64;
    let half = period / 2.0;
    let r = phi.rem_euclid(period);
    2.0 * star.ell * half.cos() * (r - half).cos()
}

/// Width branch evaluated as displayed for the given interval, without
/// periodic reduction. `phi` must lie in the interval.
pub fn width_in_interval(star: StarSpec, phi: f64, interval: Interval) -> Result<f64> {
    ensure_odd(star)?;
    if !interval.contains(star, phi) {
        return Err(Error::IntervalMismatch {
            phi,
            interval: interval.name(),
        });
    }
    let half = PI / (2.0 * star.n as f64);
    let v = match interval {
        Interval::I1 | Interval::I2 => 2.0 * star.ell * half.cos() * (phi - half).cos(),
        Interval::I3 => 2.0 * star.ell * half.cos() * (phi - 3.0 * half).cos(),
    };
    Ok(v)
}

/// Breadth of exactly `k` intersections at `phi`, using the branch of the
/// given interval. `phi` must lie in the interval, `1 <= k <= M`.
pub fn breadth(star: StarSpec, k: u32, phi: f64, interval: Interval) -> Result<f64> {
    let m_max = ensure_odd(star)?;
    if k == 0 || k > m_max {
        return Err(Error::MultiplicityRange { k, max: m_max });
    }
    if !interval.contains(star, phi) {
        return Err(Error::IntervalMismatch {
            phi,
            interval: interval.name(),
        });
    }
    Ok(breadth_branch(star, k, phi, interval))
}

/// Breadth at any `phi`, reduced mod `pi/n` and dispatched to I1/I2.
pub fn breadth_reduced(star: StarSpec, k: u32, phi: f64) -> Result<f64> {
    let m_max = ensure_odd(star)?;
    if k == 0 || k > m_max {
        return Err(Error::MultiplicityRange { k, max: m_max });
    }
    Ok(breadth_value(star, k, phi))
}

/// Unchecked reduced breadth for validated odd stars and `1 <= k <= M`.
pub(crate) fn breadth_value(star: StarSpec, k: u32, phi: f64) -> f64 {
    let period = PI / star.n as f64;
    let r = phi.rem_euclid(period);
    let interval = if r < period / 2.0 {
        Interval::I1
    } else {
        Interval::I2
    };
    breadth_branch(star, k, r, interval)
}

fn breadth_branch(star: StarSpec, k: u32, phi: f64, interval: Interval) -> f64 {
    let n = star.n as f64;
    let ell = star.ell;
    let m_max = max_intersections(star);
    let t = PI / n;
    let half = t / 2.0;
    if k <= m_max - 2 {
        let shift = if interval == Interval::I3 {
            3.0 * half
        } else {
            half
        };
        return 4.0 * ell * (k as f64 * t).sin() * half.sin() * (phi - shift).cos();
    }
    if k == m_max - 1 {
        return match interval {
            Interval::I1 => ell * (2.0 * half.cos() * phi.sin() - (phi - 3.0 * half).sin()),
            Interval::I2 => ell * (-2.0 * half.cos() * (phi - t).sin() + (phi + half).sin()),
            Interval::I3 => ell * (2.0 * half.cos() * (phi - t).sin() - (phi - 5.0 * half).sin()),
        };
    }
    match interval {
        Interval::I1 => -ell * (phi - half).sin(),
        Interval::I2 => ell * (phi - half).sin(),
        Interval::I3 => -ell * (phi - 3.0 * half).sin(),
    }
}

/// Measures `breadth(k, phi)` by brute force: fixes the star at `phi`,
/// sweeps the center offset over one period of a family with spacing
/// `2*ell` (always admissible), and counts needle crossings at each
/// offset from the 1-D projections of the needle endpoints onto the
/// family normal. Midpoint sampling at the given resolution; the result
/// is exact to `2*spacing/resolution`.
///
/// Independent of both the closed forms above and the 2-D counting in
/// `geometry`; `k` beyond the reachable maximum measures zero.
pub fn breadth_oracle(star: StarSpec, k: u32, phi: f64, resolution: u64) -> Result<f64> {
    if k == 0 {
        ensure_odd(star)?;
        return Err(Error::MultiplicityRange {
            k,
            max: max_intersections(star),
        });
    }
    let measures = breadth_oracle_sweep(star, phi, resolution)?;
    Ok(measures.get(k as usize).copied().unwrap_or(0.0))
}

/// One full sweep measuring every multiplicity at once; index `c` holds
/// the measure of offsets with exactly `c` crossings (index 0 is the miss
/// zone). Same algorithm as `breadth_oracle`, batched for verification
/// grids.
pub fn breadth_oracle_sweep(star: StarSpec, phi: f64, resolution: u64) -> Result<Vec<f64>> {
    ensure_odd(star)?;
    if resolution < 10_000 {
        return Err(Error::ResolutionTooLow(resolution));
    }
    let spacing = oracle_spacing(star);
    let proj: Vec<f64> = (0..star.n)
        .map(|j| star.ell * (phi + TAU * j as f64 / star.n as f64).cos())
        .collect();
    let h = spacing / resolution as f64;
    let mut hist = vec![0u64; star.n as usize + 1];
    for i in 0..resolution {
        let t = (i as f64 + 0.5) * h;
        let mut crossings = 0usize;
        for &p in &proj {
            let endpoint = t + p;
            crossings += (endpoint < 0.0 || endpoint >= spacing) as usize;
        }
        hist[crossings] += 1;
    }
    Ok(hist.into_iter().map(|c| c as f64 * h).collect())
}

/// Spacing of the virtual family the oracle sweeps; `2*ell` keeps every
/// odd star admissible and the stripes non-wrapping.
pub fn oracle_spacing(star: StarSpec) -> f64 {
    2.0 * star.ell
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn star(n: u32) -> StarSpec {
        StarSpec::new(n, 1.0).unwrap()
    }

    /// Support-function brute force: extent of the endpoint projections
    /// (the hull contains the center, so 0 participates).
    fn width_brute_force(s: StarSpec, phi: f64) -> f64 {
        let proj: Vec<f64> = (0..s.n)
            .map(|j| s.ell * (phi + TAU * j as f64 / s.n as f64).cos())
            .collect();
        let hi = proj.iter().cloned().fold(0.0f64, f64::max);
        let lo = proj.iter().cloned().fold(0.0f64, f64::min);
        hi - lo
    }

    #[test]
    fn width_frozen_values() {
        // oracle-verified: the n-gon width at phi=0 and at the midpoint
        assert_abs_diff_eq!(width(star(3), 0.0).unwrap(), 1.5, epsilon = 1e-15);
        assert_abs_diff_eq!(
            width(star(3), PI / 6.0).unwrap(),
            1.732_050_807_568_877_3,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            width(star(9), PI / 18.0).unwrap(),
            1.969_615_506_024_416,
            epsilon = 1e-15
        );
    }

    #[test]
    fn width_matches_support_function() {
        for n in [3u32, 5, 9, 15] {
            for i in 0..200 {
                let phi = i as f64 * 0.031;
                let w = width(star(n), phi).unwrap();
                assert_abs_diff_eq!(w, width_brute_force(star(n), phi), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn width_periodic() {
        for n in [3u32, 9] {
            let period = PI / n as f64;
            for i in 0..50 {
                let phi = i as f64 * 0.01;
                assert_abs_diff_eq!(
                    width(star(n), phi).unwrap(),
                    width(star(n), phi + period).unwrap(),
                    epsilon = 1e-14
                );
            }
        }
    }

    #[test]
    fn width_rejects_even_n() {
        assert_eq!(width(star(4), 0.1), Err(Error::UnsupportedNeedleCount(4)));
    }

    #[test]
    fn breadth_frozen_values() {
        assert_abs_diff_eq!(
            breadth(star(9), 5, 0.0, Interval::I1).unwrap(),
            0.173_648_177_666_930_35,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            breadth(star(9), 3, PI / 18.0, Interval::I2).unwrap(),
            0.601_534_932_721_741_2,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            breadth(star(3), 1, 0.0, Interval::I1).unwrap(),
            1.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn breadth_rejects_bad_k() {
        assert_eq!(
            breadth(star(9), 0, 0.0, Interval::I1),
            Err(Error::MultiplicityRange { k: 0, max: 5 })
        );
        assert_eq!(
            breadth(star(9), 6, 0.0, Interval::I1),
            Err(Error::MultiplicityRange { k: 6, max: 5 })
        );
    }

    #[test]
    fn breadth_rejects_interval_mismatch() {
        let err = breadth(star(9), 2, PI / 9.0, Interval::I1);
        assert!(matches!(err, Err(Error::IntervalMismatch { .. })));
    }

    #[test]
    fn interval_classification_half_open() {
        let s = star(9);
        let half = PI / 18.0;
        assert_eq!(Interval::classify(s, 0.0).unwrap(), Interval::I1);
        assert_eq!(Interval::classify(s, half).unwrap(), Interval::I2);
        assert_eq!(Interval::classify(s, 2.0 * half).unwrap(), Interval::I3);
        assert!(Interval::classify(s, 3.0 * half).is_err());
    }

    #[test]
    fn i3_branch_is_shifted_i1() {
        // pi/n-periodicity ties the displayed I3 formulas to I1
        for n in [3u32, 9, 15] {
            let s = star(n);
            let period = PI / n as f64;
            let m_max = max_intersections(s);
            for i in 1..40 {
                let phi = period + i as f64 * (period / 2.0) / 41.0;
                assert_abs_diff_eq!(
                    width_in_interval(s, phi, Interval::I3).unwrap(),
                    width(s, phi).unwrap(),
                    epsilon = 1e-14
                );
                for k in 1..=m_max {
                    assert_abs_diff_eq!(
                        breadth(s, k, phi, Interval::I3).unwrap(),
                        breadth_reduced(s, k, phi).unwrap(),
                        epsilon = 1e-14
                    );
                }
            }
        }
    }

    #[test]
    fn partition_identity_dense_grid() {
        // sum_k s(k, phi) = w(phi): the k-stripes tile the width
        for n in [3u32, 5, 9, 15] {
            let s = star(n);
            let m_max = max_intersections(s);
            for i in 0..300 {
                let phi = i as f64 * (PI / n as f64) / 300.0;
                let total: f64 = (1..=m_max)
                    .map(|k| breadth_reduced(s, k, phi).unwrap())
                    .sum();
                assert_abs_diff_eq!(total, width(s, phi).unwrap(), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn branches_nonnegative_and_below_width() {
        for n in [3u32, 9, 15] {
            let s = star(n);
            let m_max = max_intersections(s);
            for i in 0..200 {
                let phi = i as f64 * (1.5 * PI / n as f64) / 200.0;
                let iv = Interval::classify(s, phi).unwrap();
                let w = width_in_interval(s, phi, iv).unwrap();
                for k in 1..=m_max {
                    let v = breadth(s, k, phi, iv).unwrap();
                    assert!(v >= -1e-15, "negative breadth n={n} k={k} phi={phi}");
                    assert!(v <= w + 1e-12, "breadth above width n={n} k={k} phi={phi}");
                }
            }
        }
    }

    #[test]
    fn oracle_matches_closed_forms_quick() {
        let resolution = 10_000;
        for n in [3u32, 9] {
            let s = star(n);
            let m_max = max_intersections(s);
            let tol = 2.0 * oracle_spacing(s) / resolution as f64;
            for i in 0..25 {
                let phi = i as f64 * (1.5 * PI / n as f64) / 25.0;
                for k in 1..=m_max {
                    let measured = breadth_oracle(s, k, phi, resolution).unwrap();
                    let closed = breadth_reduced(s, k, phi).unwrap();
                    assert!(
                        (measured - closed).abs() <= tol,
                        "n={n} k={k} phi={phi}: |{measured} - {closed}| > {tol}"
                    );
                }
            }
        }
    }

    #[test]
    fn oracle_partition_and_bound() {
        let s = star(9);
        let resolution = 20_000;
        let spacing = oracle_spacing(s);
        let phi = 0.137;
        let sum: f64 = (1..=5)
            .map(|k| breadth_oracle(s, k, phi, resolution).unwrap())
            .sum();
        let miss = spacing - width(s, phi).unwrap();
        assert_abs_diff_eq!(
            sum + miss,
            spacing,
            epsilon = 4.0 * spacing / resolution as f64
        );
        // beyond the Eq.-(1) bound nothing is measured
        assert_eq!(breadth_oracle(s, 6, phi, resolution).unwrap(), 0.0);
        assert_eq!(breadth_oracle(s, 9, phi, resolution).unwrap(), 0.0);
    }

    #[test]
    fn oracle_rejects_low_resolution() {
        assert_eq!(
            breadth_oracle(star(3), 1, 0.0, 9_999),
            Err(Error::ResolutionTooLow(9_999))
        );
    }
}
