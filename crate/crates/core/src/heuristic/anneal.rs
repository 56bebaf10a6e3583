use rand::Rng;

/// Temperatures at or below this level count as frozen.
pub const FROZEN: f64 = 1e-4;

/// Annealing schedule over a fixed number of VNS iterations.
///
/// The initial temperature accepts a candidate `kappa` times the reference
/// cost worse with probability one half. It then decreases linearly so that
/// the last 20% of the iterations (rounded up) run at half the frozen level
/// or below, halving at every further iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Temperature {
    pub initial: f64,
    pub decrement: f64,
    /// Iterations on the linear part of the schedule.
    pub linear: usize,
}

impl Temperature {
    pub fn new(reference: f64, kappa: f64, iterations: usize) -> Self {
        let scale = if reference.abs() > 1e-9 {
            reference.abs()
        } else {
            1.0
        };
        let initial = kappa * scale / std::f64::consts::LN_2;
        let tail = (iterations as f64 * 0.2).ceil() as usize;
        let linear = iterations - tail.min(iterations);
        let target = 0.5 * FROZEN;
        let decrement = if linear > 0 && initial > target {
            (initial - target) / linear as f64
        } else {
            0.0
        };
        Self {
            initial,
            decrement,
            linear,
        }
    }

    /// Temperature at VNS iteration `i`, counted from 1.
    pub fn at(&self, i: usize) -> f64 {
        let i = i.max(1);
        if i <= self.linear {
            return self.initial - (i - 1) as f64 * self.decrement;
        }
        let frozen = if self.linear > 0 && self.decrement > 0.0 {
            0.5 * FROZEN
        } else {
            (0.5 * FROZEN).min(self.initial)
        };
        frozen * 0.5f64.powi((i - self.linear - 1) as i32)
    }
}

/// Metropolis acceptance of `candidate` against `incumbent` (costs).
pub fn accept<R: Rng>(incumbent: f64, candidate: f64, temp: f64, rng: &mut R) -> bool {
    if candidate < incumbent {
        return true;
    }
    let p = ((incumbent - candidate) / temp).exp();
    rng.gen::<f64>() < p
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn better_and_equal_candidates_are_accepted() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        assert!(accept(10.0, 9.0, 1e-12, &mut rng));
        for _ in 0..100 {
            assert!(accept(10.0, 10.0, 1.0, &mut rng));
        }
    }

    #[test]
    fn schedule_is_decreasing_and_frozen_at_the_end() {
        for n in [1, 2, 5, 10, 20, 30, 97] {
            let t = Temperature::new(82.61, 0.5, n);
            let temps: Vec<f64> = (1..=n).map(|i| t.at(i)).collect();
            assert!(temps.windows(2).all(|w| w[1] < w[0]), "{n}: {temps:?}");
            let tail = (n as f64 * 0.2).ceil() as usize;
            assert!(temps[n - tail..].iter().all(|&x| x < FROZEN));
            assert!(temps.iter().all(|&x| x > 0.0));
        }
        assert_eq!(
            Temperature::new(10.0, 0.5, 10).at(1),
            5.0 / std::f64::consts::LN_2
        );
    }
}
