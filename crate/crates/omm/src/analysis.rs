//! Spectrum observables: transparency-window counting, mirror-asymmetry
//! scoring of Fano lineshapes, and refined group-delay extrema.

use serde::Serialize;

use crate::error::AnalysisError;
use crate::model::SweepSpec;
use crate::response::{group_delay, spectrum, ResponsePoint};
use crate::steady_state::DerivedState;

/// Default prominence threshold, in absorption units (full scale ~2).
/// Shallow numerical ripples never reach it.
pub const DEFAULT_PROMINENCE: f64 = 0.05;

const MIN_GRID_POINTS: usize = 101;

/// One local extremum of a sampled curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extremum {
    pub delta: f64,
    pub value: f64,
    pub prominence: f64,
}

/// Detected peaks and dips of an absorption spectrum. Dips whose prominence
/// reaches the threshold count as transparency windows.
#[derive(Debug, Clone, Serialize)]
pub struct WindowReport {
    pub peaks: Vec<Extremum>,
    pub dips: Vec<Extremum>,
    pub window_count: usize,
    pub prominence_threshold: f64,
}

/// Mirror-integral asymmetry of a lineshape about `center`:
/// int |y(c+x) - y(c-x)| dx / int (|y(c+x)| + |y(c-x)|) dx over x in
/// [0, half_width]. Zero for an exactly mirror-symmetric spectrum.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FanoScore {
    pub asymmetry: f64,
    pub center: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Peak,
    Dip,
}

fn check_uniform_grid(xs: &[f64], ys: &[f64]) -> Result<f64, AnalysisError> {
    if xs.len() != ys.len() {
        return Err(AnalysisError::LengthMismatch {
            xs: xs.len(),
            ys: ys.len(),
        });
    }
    if xs.len() < MIN_GRID_POINTS {
        return Err(AnalysisError::GridTooCoarse {
            need: MIN_GRID_POINTS,
            got: xs.len(),
        });
    }
    let h = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
    let mut dev = 0.0_f64;
    for i in 1..xs.len() {
        dev = dev.max(((xs[i] - xs[i - 1]) - h).abs());
    }
    if dev > 1e-6 * h.abs() {
        return Err(AnalysisError::NonUniformGrid { dev });
    }
    Ok(h)
}

/// Count transparency windows in a sampled absorption spectrum.
///
/// Extrema are interior points by strict 3-point comparison. The prominence
/// of a dip is the smaller of the climbs to the nearest higher extremum on
/// each side (the adjacent peaks; a grid endpoint stands in where no peak
/// exists); peaks mirror this with drops to the adjacent dips.
pub fn find_windows(
    delta: &[f64],
    y: &[f64],
    prominence_threshold: f64,
) -> Result<WindowReport, AnalysisError> {
    check_uniform_grid(delta, y)?;
    let n = y.len();

    let mut extrema: Vec<(usize, Kind)> = Vec::new();
    for i in 1..n - 1 {
        if y[i] > y[i - 1] && y[i] > y[i + 1] {
            extrema.push((i, Kind::Peak));
        } else if y[i] < y[i - 1] && y[i] < y[i + 1] {
            extrema.push((i, Kind::Dip));
        }
    }

    let neighbor_value = |pos: usize, side: isize| -> f64 {
        // value of the adjacent extremum on that side, or the grid endpoint
        let idx = pos as isize + side;
        if idx < 0 || idx as usize >= extrema.len() {
            if side < 0 {
                y[0]
            } else {
                y[n - 1]
            }
        } else {
            y[extrema[idx as usize].0]
        }
    };

    let mut peaks = Vec::new();
    let mut dips = Vec::new();
    for (pos, &(i, kind)) in extrema.iter().enumerate() {
        let left = neighbor_value(pos, -1);
        let right = neighbor_value(pos, 1);
        let prominence = match kind {
            Kind::Dip => (left - y[i]).min(right - y[i]).max(0.0),
            Kind::Peak => (y[i] - left).min(y[i] - right).max(0.0),
        };
        let ex = Extremum {
            delta: delta[i],
            value: y[i],
            prominence,
        };
        match kind {
            Kind::Peak => peaks.push(ex),
            Kind::Dip => dips.push(ex),
        }
    }

    let window_count = dips
        .iter()
        .filter(|d| d.prominence >= prominence_threshold)
        .count();
    Ok(WindowReport {
        peaks,
        dips,
        window_count,
        prominence_threshold,
    })
}

/// Window report of a computed spectrum, using the absorption quadrature.
pub fn find_windows_in(
    points: &[ResponsePoint],
    prominence_threshold: f64,
) -> Result<WindowReport, AnalysisError> {
    let delta: Vec<f64> = points.iter().map(|p| p.delta).collect();
    let y: Vec<f64> = points.iter().map(|p| p.eps_out.re).collect();
    find_windows(&delta, &y, prominence_threshold)
}

fn interp(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    // xs is uniform ascending and x is inside the span (checked upstream)
    let h = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
    let t = (x - xs[0]) / h;
    let i = (t.floor() as usize).min(xs.len() - 2);
    let frac = t - i as f64;
    ys[i] * (1.0 - frac) + ys[i + 1] * frac
}

/// Mirror-integral asymmetry score of `y(delta)` about `center` over a
/// window of `half_width` on each side, by trapezoidal integration at the
/// grid resolution.
pub fn fano_asymmetry(
    delta: &[f64],
    y: &[f64],
    center: f64,
    half_width: f64,
) -> Result<FanoScore, AnalysisError> {
    let h = check_uniform_grid(delta, y)?;
    let lo = center - half_width;
    let hi = center + half_width;
    let eps = 1e-9 * h.abs();
    if lo < delta[0] - eps || hi > delta[delta.len() - 1] + eps {
        return Err(AnalysisError::InsufficientCoverage { lo, hi });
    }

    let n_half = (half_width / h).floor() as usize;
    let mut num = 0.0;
    let mut den = 0.0;
    for k in 0..=n_half {
        let x = (k as f64 * h).min(half_width);
        let yp = interp(delta, y, center + x);
        let ym = interp(delta, y, center - x);
        // trapezoid weights: half at the ends
        let w = if k == 0 || k == n_half { 0.5 } else { 1.0 };
        num += w * (yp - ym).abs();
        den += w * (yp.abs() + ym.abs());
    }
    let asymmetry = if den > 0.0 { num / den } else { 0.0 };
    Ok(FanoScore { asymmetry, center })
}

/// Fano score of a computed spectrum about a center detuning (rad/s).
pub fn fano_asymmetry_in(
    points: &[ResponsePoint],
    center: f64,
    half_width: f64,
) -> Result<FanoScore, AnalysisError> {
    let delta: Vec<f64> = points.iter().map(|p| p.delta).collect();
    let y: Vec<f64> = points.iter().map(|p| p.eps_out.re).collect();
    fano_asymmetry(&delta, &y, center, half_width)
}

/// Classification of a refined delay extremum: maxima are slow-light
/// candidates, minima fast-light candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremumKind {
    SlowPeak,
    FastDip,
}

/// A group-delay extremum refined off the sampling grid.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DelayExtremum {
    /// Refined detuning, rad/s.
    pub delta: f64,
    /// Group delay at the refined detuning, s.
    pub tau: f64,
    pub kind: ExtremumKind,
}

const GOLDEN_RATIO_CONJ: f64 = 0.618_033_988_749_894_8;

fn golden_refine<F>(mut f: F, mut a: f64, mut b: f64, maximize: bool) -> Result<f64, AnalysisError>
where
    F: FnMut(f64) -> Result<f64, AnalysisError>,
{
    let tol = 1e-6 * a.abs().max(b.abs());
    let mut x1 = b - GOLDEN_RATIO_CONJ * (b - a);
    let mut x2 = a + GOLDEN_RATIO_CONJ * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while (b - a).abs() > tol {
        let keep_left = if maximize { f1 > f2 } else { f1 < f2 };
        if keep_left {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN_RATIO_CONJ * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN_RATIO_CONJ * (b - a);
            f2 = f(x2)?;
        }
    }
    Ok(0.5 * (a + b))
}

/// Locate group-delay extrema on the sweep grid, then refine each inside
/// its bracketing grid interval by golden-section search to relative
/// detuning precision 1e-6.
pub fn delay_extrema(
    state: &DerivedState,
    sweep: &SweepSpec,
) -> Result<Vec<DelayExtremum>, AnalysisError> {
    let spec = spectrum(state, sweep).map_err(AnalysisError::Response)?;
    let pts = &spec.points;
    let mut out = Vec::new();
    let tau_at = |d: f64| -> Result<f64, AnalysisError> {
        Ok(group_delay(state, d, None)
            .map_err(AnalysisError::Response)?
            .tau)
    };
    for i in 1..pts.len().saturating_sub(1) {
        let (lo, mid, hi) = (pts[i - 1].tau, pts[i].tau, pts[i + 1].tau);
        let kind = if mid > lo && mid > hi {
            ExtremumKind::SlowPeak
        } else if mid < lo && mid < hi {
            ExtremumKind::FastDip
        } else {
            continue;
        };
        let a = pts[i - 1].delta;
        let b = pts[i + 1].delta;
        let refined = golden_refine(tau_at, a, b, kind == ExtremumKind::SlowPeak)?;
        out.push(DelayExtremum {
            delta: refined,
            tau: tau_at(refined)?,
            kind,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{paper_preset, Preset};
    use crate::steady_state::freeze_prescribed;

    fn lorentzian_grid(n: usize) -> (Vec<f64>, Vec<f64>) {
        let xs: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64 * 2.0).collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|&x| 2.0 / (1.0 + ((x - 1.0) / 0.1).powi(2)))
            .collect();
        (xs, ys)
    }

    #[test]
    fn lone_peak_has_no_windows() {
        let (xs, ys) = lorentzian_grid(501);
        let report = find_windows(&xs, &ys, DEFAULT_PROMINENCE).unwrap();
        assert_eq!(report.window_count, 0);
        assert_eq!(report.peaks.len(), 1);
        assert!(report.dips.is_empty());
    }

    #[test]
    fn split_peak_has_one_window() {
        let n = 1001;
        let xs: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64 * 2.0).collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|&x| {
                2.0 / (1.0 + ((x - 0.8) / 0.1).powi(2)) + 2.0 / (1.0 + ((x - 1.2) / 0.1).powi(2))
            })
            .collect();
        let report = find_windows(&xs, &ys, DEFAULT_PROMINENCE).unwrap();
        assert_eq!(report.peaks.len(), 2);
        assert_eq!(report.dips.len(), 1);
        assert_eq!(report.window_count, 1);
        // peaks and dips interleave
        assert!(report.peaks[0].delta < report.dips[0].delta);
        assert!(report.dips[0].delta < report.peaks[1].delta);
    }

    #[test]
    fn offset_invariance() {
        let (xs, ys) = lorentzian_grid(501);
        let shifted: Vec<f64> = ys.iter().map(|v| v + 17.5).collect();
        let a = find_windows(&xs, &ys, DEFAULT_PROMINENCE).unwrap();
        let b = find_windows(&xs, &shifted, DEFAULT_PROMINENCE).unwrap();
        assert_eq!(a.window_count, b.window_count);
        assert_eq!(a.peaks.len(), b.peaks.len());
        for (pa, pb) in a.peaks.iter().zip(b.peaks.iter()) {
            assert_eq!(pa.delta, pb.delta);
            assert!((pa.prominence - pb.prominence).abs() < 1e-12);
        }
    }

    #[test]
    fn coarse_grid_rejected() {
        let (xs, ys) = lorentzian_grid(51);
        assert!(matches!(
            find_windows(&xs, &ys, DEFAULT_PROMINENCE),
            Err(AnalysisError::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn nonuniform_grid_rejected() {
        let (mut xs, ys) = lorentzian_grid(501);
        xs[250] += 0.01;
        assert!(matches!(
            find_windows(&xs, &ys, DEFAULT_PROMINENCE),
            Err(AnalysisError::NonUniformGrid { .. })
        ));
    }

    #[test]
    fn symmetric_spectrum_scores_zero() {
        let (xs, ys) = lorentzian_grid(2001);
        let score = fano_asymmetry(&xs, &ys, 1.0, 0.5).unwrap();
        assert!(score.asymmetry < 1e-12, "asymmetry {}", score.asymmetry);
    }

    #[test]
    fn shifted_lineshape_scores_positive() {
        let n = 2001;
        let xs: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64 * 2.0).collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|&x| 2.0 / (1.0 + ((x - 0.9) / 0.1).powi(2)))
            .collect();
        let score = fano_asymmetry(&xs, &ys, 1.0, 0.5).unwrap();
        assert!(score.asymmetry > 0.1);
    }

    #[test]
    fn coverage_checked() {
        let (xs, ys) = lorentzian_grid(2001);
        assert!(matches!(
            fano_asymmetry(&xs, &ys, 1.8, 0.5),
            Err(AnalysisError::InsufficientCoverage { .. })
        ));
    }

    #[test]
    fn decoupled_delay_peak_refines_to_cavity_resonance() {
        // bare cavity: tau is a Lorentzian peaked at the cavity detuning
        let (params, sweep) = paper_preset(Preset::Fig2a);
        let state = freeze_prescribed(&params).unwrap();
        let extrema = delay_extrema(&state, &sweep).unwrap();
        let peak = extrema
            .iter()
            .find(|e| e.kind == ExtremumKind::SlowPeak && e.tau > 1e-7)
            .expect("slow peak present");
        assert!(
            (peak.delta - state.delta_c_eff).abs() < 1e-4 * state.params.omega_b1,
            "peak at {} vs {}",
            peak.delta,
            state.delta_c_eff
        );
        let expect = 2.0 / state.params.kappa_c;
        assert!((peak.tau - expect).abs() / expect < 1e-4);
        // refinement stayed within one grid spacing of the on-grid extremum
        let h = 2.0 * state.params.omega_b1 / 4000.0;
        let nearest = (peak.delta / h).round() * h;
        assert!((peak.delta - nearest).abs() <= h);
    }
}
