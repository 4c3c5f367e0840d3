/// Lower/upper physiological bounds for an accepted NN interval, ms.
pub const NN_MIN_MS: f64 = 200.0;
pub const NN_MAX_MS: f64 = 3000.0;
/// Maximum relative change from the preceding interval.
pub const NN_MAX_RELATIVE_CHANGE: f64 = 0.5;

/// R-peak positions and the artifact-cleaned NN intervals between them.
#[derive(Debug, Clone, PartialEq)]
pub struct RRSeries {
    pub peak_indices: Vec<usize>,
    pub nn_ms: Vec<f64>,
    /// Time (s, from the first peak) of the beat that closes each NN interval.
    pub beat_times_s: Vec<f64>,
    pub sampling_rate: f64,
}

impl RRSeries {
    /// Builds intervals from detected peaks, dropping intervals outside
    /// (200, 3000) ms or more than 50% away from the preceding raw interval.
    pub fn from_peaks(peak_indices: Vec<usize>, sampling_rate: f64) -> Self {
        let mut nn_ms = Vec::new();
        let mut beat_times_s = Vec::new();
        let origin = peak_indices.first().copied().unwrap_or(0);
        let mut prev: Option<f64> = None;
        for w in peak_indices.windows(2) {
            let nn = (w[1] - w[0]) as f64 / sampling_rate * 1000.0;
            let in_range = nn > NN_MIN_MS && nn < NN_MAX_MS;
            let stable = prev.is_none_or(|p| (nn - p).abs() <= NN_MAX_RELATIVE_CHANGE * p);
            if in_range && stable {
                nn_ms.push(nn);
                beat_times_s.push((w[1] - origin) as f64 / sampling_rate);
            }
            prev = Some(nn);
        }
        Self {
            peak_indices,
            nn_ms,
            beat_times_s,
            sampling_rate,
        }
    }

    /// Wraps an interval sequence directly (no peaks, no rejection).
    pub fn from_nn(nn_ms: Vec<f64>) -> Self {
        let mut t = 0.0;
        let beat_times_s = nn_ms
            .iter()
            .map(|nn| {
                t += nn / 1000.0;
                t
            })
            .collect();
        Self {
            peak_indices: Vec::new(),
            nn_ms,
            beat_times_s,
            sampling_rate: 1000.0,
        }
    }

    pub fn len(&self) -> usize {
        self.nn_ms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nn_ms.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intervals_from_peaks() {
        let rr = RRSeries::from_peaks(vec![0, 100, 200, 310], 125.0);
        assert_eq!(rr.nn_ms, vec![800.0, 800.0, 880.0]);
        assert_eq!(rr.beat_times_s, vec![0.8, 1.6, 2.48]);
    }

    #[test]
    fn artifacts_are_dropped() {
        // 100 ms (too short) and a doubled interval (missed beat)
        let rr = RRSeries::from_peaks(vec![0, 1000, 1100, 2000, 4000, 5000], 1000.0);
        assert_eq!(rr.nn_ms, vec![1000.0, 1000.0]);
    }
}
