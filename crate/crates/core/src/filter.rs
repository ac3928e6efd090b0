//! Filter-function evaluation and moment diagnostics.
//!
//! The filter function `y_n(z) = Σ_j w_j e^{izδ_j}` encodes a sequence's
//! frequency response. Its derivatives at `z = 0` are controlled by the
//! moment sums `M_p = Σ_j w_j δ_j^p`; the largest `m` with `M_1..M_m ≈ 0`
//! (the vanishing order) decides for which spectral exponents the
//! decoherence integral converges.

use num_complex::Complex64;

use crate::kahan::KahanSum;
use crate::sequence::PulseSequence;

/// Default relative tolerance for deciding that a moment vanishes.
pub const DEFAULT_MOMENT_TOL: f64 = 1e-9;

/// `y_n(z) = Σ_{j=0}^{n+1} w_j e^{izδ_j}`; bounded by `2(n+1)` in magnitude.
pub fn filter_value(seq: &PulseSequence, z: f64) -> Complex64 {
    let x = seq.extended_instants();
    let w = crate::sequence::weights_f64(seq.n());
    let mut re = KahanSum::new();
    let mut im = KahanSum::new();
    for (&d, &wj) in x.iter().zip(&w) {
        let (s, c) = (z * d).sin_cos();
        re.add(wj * c);
        im.add(wj * s);
    }
    Complex64::new(re.value(), im.value())
}

/// `|y_n(z)|²`, computed directly from the complex value.
pub fn filter_magnitude_sq(seq: &PulseSequence, z: f64) -> f64 {
    filter_value(seq, z).norm_sqr()
}

/// Moment sum `M_p = Σ_{j=0}^{n+1} w_j δ_j^p` (with `0^0 = 1`, so `M_0 = 0`).
pub fn moment_sum(seq: &PulseSequence, p: u32) -> f64 {
    let x = seq.extended_instants();
    let w = crate::sequence::weights_f64(seq.n());
    moment_sum_ext(&x, &w, p)
}

pub(crate) fn moment_sum_ext(x: &[f64], w: &[f64], p: u32) -> f64 {
    let mut s = KahanSum::new();
    for (&d, &wj) in x.iter().zip(w) {
        s.add(wj * d.powi(p as i32));
    }
    s.value()
}

/// Positive-magnitude scale `Σ_j |w_j| δ_j^p` used by the relative tolerance.
pub(crate) fn moment_scale_ext(x: &[f64], w: &[f64], p: u32) -> f64 {
    x.iter().zip(w).map(|(&d, &wj)| wj.abs() * d.powi(p as i32)).sum()
}

/// Largest `m ≤ n` with `|M_p| ≤ tol·Σ_j |w_j| δ_j^p` for all `1 ≤ p ≤ m`.
///
/// The relative scaling keeps large-`n` sequences from failing on rounding
/// accumulation alone.
pub fn vanishing_order(seq: &PulseSequence, tol: f64) -> usize {
    let x = seq.extended_instants();
    let w = crate::sequence::weights_f64(seq.n());
    let mut m = 0;
    for p in 1..=seq.n() as u32 {
        let scale = moment_scale_ext(&x, &w, p);
        if moment_sum_ext(&x, &w, p).abs() <= tol * scale {
            m = p as usize;
        } else {
            break;
        }
    }
    m
}

/// Double moment sum `Σ_{i,j=0}^{n+1} w_i w_j (δ_i − δ_j)^p`.
///
/// Vanishes for all `0 ≤ p ≤ 2m+1` when the vanishing order is `m`
/// (identically for odd `p` by antisymmetry).
pub fn delta_moment_sum(seq: &PulseSequence, p: u32) -> f64 {
    let x = seq.extended_instants();
    let w = crate::sequence::weights_f64(seq.n());
    delta_moment_sum_ext(&x, &w, p)
}

pub(crate) fn delta_moment_sum_ext(x: &[f64], w: &[f64], p: u32) -> f64 {
    let mut s = KahanSum::new();
    // diagonal terms contribute only at p = 0 where 0^0 = 1
    for (&di, &wi) in x.iter().zip(w) {
        for (&dj, &wj) in x.iter().zip(w) {
            s.add(wi * wj * (di - dj).powi(p as i32));
        }
    }
    s.value()
}

/// Moments `M_0..M_{p_max}` together with the vanishing order they imply.
#[derive(Debug, Clone)]
pub struct MomentReport {
    pub moments: Vec<f64>,
    pub vanishing_order: usize,
    pub tol: f64,
}

impl MomentReport {
    pub fn new(seq: &PulseSequence, p_max: u32, tol: f64) -> Self {
        let moments = (0..=p_max).map(|p| moment_sum(seq, p)).collect();
        Self {
            moments,
            vanishing_order: vanishing_order(seq, tol),
            tol,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn free_evolution() -> PulseSequence {
        PulseSequence::custom(&[]).unwrap()
    }

    #[test]
    fn filter_vanishes_at_zero() {
        for seq in [
            free_evolution(),
            PulseSequence::udd(3).unwrap(),
            PulseSequence::cpmg(4).unwrap(),
            PulseSequence::custom(&[0.2, 0.9]).unwrap(),
        ] {
            assert!(filter_value(&seq, 0.0).norm() < 1e-14);
            assert!(filter_magnitude_sq(&seq, 0.0) < 1e-14);
        }
    }

    #[test]
    fn filter_free_evolution_at_pi() {
        // 1 − e^{iπ} = 2
        let y = filter_value(&free_evolution(), PI);
        assert!((y.re - 2.0).abs() < 1e-14);
        assert!(y.im.abs() < 1e-14);
        assert!((filter_magnitude_sq(&free_evolution(), PI) - 4.0).abs() < 1e-13);
    }

    #[test]
    fn filter_single_pulse_magnitude() {
        // |y_1|² = 16 sin⁴(z/4) at δ = [0.5]
        let seq = PulseSequence::custom(&[0.5]).unwrap();
        let z = 2.0 * PI;
        assert!((filter_value(&seq, z).norm() - 4.0).abs() < 1e-12);
        assert!((filter_magnitude_sq(&seq, z) - 16.0).abs() < 1e-11);
    }

    #[test]
    fn moment_examples() {
        let udd3 = PulseSequence::udd(3).unwrap();
        for p in 1..=3 {
            assert!(moment_sum(&udd3, p).abs() < 1e-12, "p = {p}");
        }
        assert_eq!(moment_sum(&free_evolution(), 1), -1.0);
        // 2(−1 + 27 − 125 + 343)/512 − 1, exact in dyadic arithmetic
        assert_eq!(moment_sum(&PulseSequence::cpmg(4).unwrap(), 3), -0.046875);
    }

    #[test]
    fn moment_zero_always_vanishes() {
        for seq in [
            free_evolution(),
            PulseSequence::udd(7).unwrap(),
            PulseSequence::custom(&[0.1, 0.2, 0.85]).unwrap(),
        ] {
            assert_eq!(moment_sum(&seq, 0), 0.0);
        }
    }

    #[test]
    fn vanishing_orders() {
        assert_eq!(vanishing_order(&PulseSequence::udd(5).unwrap(), DEFAULT_MOMENT_TOL), 5);
        assert_eq!(vanishing_order(&free_evolution(), DEFAULT_MOMENT_TOL), 0);
        assert_eq!(vanishing_order(&PulseSequence::cpmg(4).unwrap(), DEFAULT_MOMENT_TOL), 2);
    }

    #[test]
    fn udd_vanishing_order_up_to_30() {
        for n in 1..=30 {
            let seq = PulseSequence::udd(n).unwrap();
            assert_eq!(vanishing_order(&seq, DEFAULT_MOMENT_TOL), n, "n = {n}");
            for p in 1..=n as u32 {
                assert!(moment_sum(&seq, p).abs() < 1e-12, "n = {n}, p = {p}");
            }
        }
    }

    #[test]
    fn cpmg_even_first_two_moments_vanish() {
        for n in (2..=30).step_by(2) {
            let seq = PulseSequence::cpmg(n).unwrap();
            assert!(moment_sum(&seq, 1).abs() < 1e-12);
            assert!(moment_sum(&seq, 2).abs() < 1e-12);
        }
    }

    #[test]
    fn delta_moment_examples() {
        for seq in [free_evolution(), PulseSequence::udd(4).unwrap()] {
            assert!(delta_moment_sum(&seq, 0).abs() < 1e-13);
        }
        // 2m+1 = 5 at m = 2
        assert!(delta_moment_sum(&PulseSequence::udd(2).unwrap(), 5).abs() < 1e-10);
        assert!((delta_moment_sum(&free_evolution(), 2) + 2.0).abs() < 1e-14);
    }

    #[test]
    fn moment_report_shape() {
        let rep = MomentReport::new(&PulseSequence::udd(3).unwrap(), 5, DEFAULT_MOMENT_TOL);
        assert_eq!(rep.moments.len(), 6);
        assert_eq!(rep.vanishing_order, 3);
        assert_eq!(rep.moments[0], 0.0);
    }

    #[test]
    fn small_z_scaling_matches_vanishing_order() {
        // |y|²/z^{2(m+1)} approaches a finite nonzero limit
        for (seq, m) in [
            (PulseSequence::custom(&[0.5]).unwrap(), 1usize),
            (PulseSequence::cpmg(4).unwrap(), 2),
            (PulseSequence::udd(3).unwrap(), 3),
        ] {
            assert_eq!(vanishing_order(&seq, DEFAULT_MOMENT_TOL), m);
            let e = 2.0 * (m as f64 + 1.0);
            let r3 = filter_magnitude_sq(&seq, 1e-3) / 1e-3f64.powf(e);
            let r4 = filter_magnitude_sq(&seq, 1e-4) / 1e-4f64.powf(e);
            assert!(r3.abs() > 0.0 && r4.abs() > 0.0);
            assert!(((r3 - r4) / r4).abs() < 0.01, "ratio drift for m = {m}");
        }
    }
}
