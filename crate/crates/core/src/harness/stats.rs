use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF, Discrete, Poisson};

/// One chi-square cell after merging; `hi = None` means "and above".
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GofBin {
    pub lo: usize,
    pub hi: Option<usize>,
    pub observed: u64,
    pub expected: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GofReport {
    pub sample_size: u64,
    pub mean: f64,
    pub variance: f64,
    pub target_mean: f64,
    pub bins: Vec<GofBin>,
    pub chi_square: f64,
    pub dof: usize,
    pub p_value: f64,
    pub tv_distance: f64,
}

/// Smallest expected count a chi-square cell may have.
const EXPECTED_FLOOR: f64 = 5.0;

fn poisson_pmf(mean: f64, k: usize) -> f64 {
    if mean == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    Poisson::new(mean).map_or(0.0, |p| p.pmf(k as u64))
}

/// Chi-square and total-variation fit of a count histogram (`counts[k]` trials
/// saw value k) against Poisson(`mean`), over cells {0, 1, 2, ≥3}.
///
/// Cells whose expected count is below 5 are merged into their right
/// neighbour; a short last cell merges left.
pub fn poisson_gof(counts: &[u64], mean: f64) -> GofReport {
    assert!(mean >= 0.0 && mean.is_finite(), "Poisson mean must be finite and ≥ 0");
    let total: u64 = counts.iter().sum();
    assert!(total > 0, "empty histogram");
    let nf = total as f64;

    let emp_mean = counts.iter().enumerate().map(|(k, &c)| k as f64 * c as f64).sum::<f64>() / nf;
    let variance = if total > 1 {
        counts.iter().enumerate().map(|(k, &c)| c as f64 * (k as f64 - emp_mean).powi(2)).sum::<f64>() / (nf - 1.0)
    } else {
        0.0
    };

    let observed_at = |k: usize| counts.get(k).copied().unwrap_or(0);
    let mut raw: Vec<GofBin> = (0..3)
        .map(|k| GofBin { lo: k, hi: Some(k), observed: observed_at(k), expected: nf * poisson_pmf(mean, k) })
        .collect();
    let head: f64 = raw.iter().map(|b| b.expected).sum();
    raw.push(GofBin {
        lo: 3,
        hi: None,
        observed: counts.iter().skip(3).sum(),
        expected: (nf - head).max(0.0),
    });

    let mut bins: Vec<GofBin> = Vec::new();
    let mut pending: Option<GofBin> = None;
    for bin in raw {
        let merged = match pending.take() {
            Some(p) => GofBin { lo: p.lo, hi: bin.hi, observed: p.observed + bin.observed, expected: p.expected + bin.expected },
            None => bin,
        };
        if merged.expected < EXPECTED_FLOOR {
            pending = Some(merged);
        } else {
            bins.push(merged);
        }
    }
    if let Some(p) = pending {
        match bins.last_mut() {
            Some(last) => {
                last.hi = p.hi;
                last.observed += p.observed;
                last.expected += p.expected;
            }
            None => bins.push(p),
        }
    }

    let chi_square: f64 = bins
        .iter()
        .filter(|b| b.expected > 0.0)
        .map(|b| (b.observed as f64 - b.expected).powi(2) / b.expected)
        .sum();
    let dof = bins.len().saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else {
        ChiSquared::new(dof as f64).map_or(f64::NAN, |c| c.sf(chi_square))
    };

    let mut tv = 0.0;
    let mut covered = 0.0;
    for (k, &c) in counts.iter().enumerate() {
        let q = poisson_pmf(mean, k);
        covered += q;
        tv += (c as f64 / nf - q).abs();
    }
    tv += (1.0 - covered).max(0.0);

    GofReport {
        sample_size: total,
        mean: emp_mean,
        variance,
        target_mean: mean,
        bins,
        chi_square,
        dof,
        p_value,
        tv_distance: tv / 2.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_distr::Distribution;

    #[test]
    fn all_zero_against_zero_mean() {
        let r = poisson_gof(&[1000], 0.0);
        assert_eq!(r.tv_distance, 0.0);
        assert_eq!(r.chi_square, 0.0);
        assert_eq!(r.bins.len(), 1);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn self_fit() {
        let counts: Vec<u64> = (0..20).map(|k| (1e6 * poisson_pmf(1.0, k)).round() as u64).collect();
        let r = poisson_gof(&counts, 1.0);
        assert!(r.chi_square < 1e-3, "{}", r.chi_square);
        assert!(r.p_value > 0.99);
        assert!(r.tv_distance < 1e-5);
        assert_eq!(r.bins.len(), 4);
        assert!((r.mean - 1.0).abs() < 1e-5 && (r.variance - 1.0).abs() < 1e-4);
    }

    #[test]
    fn wrong_mean_is_rejected() {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(99);
        let poisson = rand_distr::Poisson::new(2.0).unwrap();
        let mut counts = vec![0u64; 30];
        for _ in 0..10_000 {
            let k: f64 = poisson.sample(&mut rng);
            counts[k as usize] += 1;
        }
        assert!(poisson_gof(&counts, 1.0).p_value < 0.01);
        assert!(poisson_gof(&counts, 2.0).p_value > 0.001);
    }

    #[test]
    fn small_cells_merge() {
        // expected cells at mean 0.0206 over 20,000 draws: ≈ 19592, 404, 4.2, 0.03
        let r = poisson_gof(&[19_590, 405, 5], 0.0206);
        assert_eq!(r.bins.len(), 2);
        assert_eq!((r.bins[1].lo, r.bins[1].hi), (1, None));
        assert_eq!(r.bins[1].observed, 410);
        assert_eq!(r.dof, 1);
        let total: f64 = r.bins.iter().map(|b| b.expected).sum();
        assert!((total - 20_000.0).abs() < 1e-6);
    }
}
