use super::trajectory::Trajectory;

/// Earliest recorded time from which every population and the norm/trace
/// column stay steady.
///
/// An observable is steady from grid time `T` when its forward window means
/// `M(t) = mean(x over [t, t + window])` satisfy `|M(t) − M(T)| ≤ tol·|M(T)|`
/// for every `t ≥ T` with a full window available, and at least one window of
/// such `t` follows `T`. Window means average out the carrier-frequency
/// ripple of lab-frame driving. `⟨μ⟩` is excluded: under a drive it oscillates
/// about zero at the carrier frequency.
pub fn detect_steady_state(traj: &Trajectory, window: f64, tol: f64) -> Option<f64> {
    let n = traj.len();
    if n < 2 || !(window > 0.0) {
        return None;
    }
    let step = traj.record_step();
    let w = ((window / step).round() as usize).max(1);
    if n < 2 * w + 1 {
        return None;
    }
    let mut series: Vec<&[f64]> = traj.dot_populations.iter().map(Vec::as_slice).collect();
    series.push(&traj.plasmon_population);
    series.push(&traj.norm_or_trace);

    let last = n - w; // last start index with a full window
    let mut ok = vec![true; last + 1];
    for x in series {
        let means = window_means(x, w);
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for k in (0..=last).rev() {
            lo = lo.min(means[k]);
            hi = hi.max(means[k]);
            let dev = (hi - means[k]).abs().max((means[k] - lo).abs());
            if k + w > last || dev > tol * means[k].abs() {
                ok[k] = false;
            }
        }
    }
    ok.iter().position(|&b| b).map(|k| traj.times[k])
}

fn window_means(x: &[f64], w: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(x.len() + 1 - w);
    let mut sum: f64 = x[..w].iter().sum();
    out.push(sum / w as f64);
    for k in 1..=x.len() - w {
        sum += x[k + w - 1] - x[k - 1];
        out.push(sum / w as f64);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::trajectory::SolverKind;

    fn traj_from(f: impl Fn(f64) -> f64, t_end: f64, step: f64) -> Trajectory {
        let mut t = Trajectory::new(SolverKind::Lindblad, 1);
        let n = (t_end / step).round() as usize;
        for k in 0..=n {
            let time = k as f64 * step;
            t.times.push(time);
            t.dot_populations[0].push(f(time));
            t.plasmon_population.push(0.5 * f(time));
            t.dipole.push((time * 3.0).sin());
            t.norm_or_trace.push(1.0);
        }
        t
    }

    #[test]
    fn constant_is_steady_immediately() {
        let t = traj_from(|_| 0.3, 500.0, 1.0);
        assert_eq!(detect_steady_state(&t, 50.0, 1e-6), Some(0.0));
    }

    #[test]
    fn exponential_never_steady() {
        // Window means of e^{-t/100} change by 1 - e^{-1/2} over one window.
        let t = traj_from(|x| (-x / 100.0).exp(), 500.0, 0.5);
        assert_eq!(detect_steady_state(&t, 50.0, 1e-6), None);
    }

    #[test]
    fn relaxing_then_flat() {
        let t = traj_from(|x| if x < 200.0 { 0.4 * x / 200.0 } else { 0.4 }, 1000.0, 1.0);
        let ts = detect_steady_state(&t, 50.0, 1e-9).unwrap();
        assert!((ts - 200.0).abs() <= 1.0, "{ts}");
    }

    #[test]
    fn fast_ripple_is_averaged() {
        // Period 2 fs ripple on a constant, window an integer number of periods.
        let t = traj_from(|x| 0.4 + 0.01 * (std::f64::consts::PI * x).sin(), 600.0, 0.1);
        assert!(detect_steady_state(&t, 100.0, 1e-3).is_some());
    }
}
