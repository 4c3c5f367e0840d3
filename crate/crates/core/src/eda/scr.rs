use super::decompose::EdaDecomposition;

pub const MIN_AMPLITUDE_US: f64 = 0.01;
/// Rise rate below which the trace counts as baseline when locating an onset.
pub const ONSET_SLOPE_US_PER_S: f64 = 0.002;

#[derive(Debug, Clone, PartialEq)]
pub struct ScrEvent {
    pub onset_index: usize,
    pub peak_index: usize,
    pub amplitude: f64,
    pub rise_time: f64,
    /// Time from the peak to the first 50% decay; `None` if the window ends first.
    pub recovery_time: Option<f64>,
    /// Onset to the end of the decline (next local minimum or window end).
    pub duration: f64,
}

/// Local maxima of the phasic trace at least 0.01 µS above their onset. The
/// onset is the first sample after the preceding trough where the trace
/// rises faster than the baseline rate; troughs never reach back past the
/// previous accepted peak.
pub fn detect_scr(decomp: &EdaDecomposition) -> Vec<ScrEvent> {
    let p = &decomp.phasic;
    let fs = decomp.sampling_rate;
    let n = p.len();
    let mut events = Vec::new();
    let mut search_from = 0usize;
    for i in 1..n.saturating_sub(1) {
        if !(p[i] > p[i - 1] && p[i] >= p[i + 1]) {
            continue;
        }
        let mut onset = i;
        while onset > search_from && p[onset - 1] <= p[onset] {
            onset -= 1;
        }
        while onset < i && (p[onset + 1] - p[onset]) * fs <= ONSET_SLOPE_US_PER_S {
            onset += 1;
        }
        let amplitude = p[i] - p[onset];
        if amplitude < MIN_AMPLITUDE_US {
            continue;
        }
        let half = p[i] - 0.5 * amplitude;
        let recovery = (i + 1..n).find(|&j| p[j] <= half);
        let end = (i + 1..n).find(|&j| j + 1 == n || p[j + 1] > p[j]).unwrap_or(n - 1);
        events.push(ScrEvent {
            onset_index: onset,
            peak_index: i,
            amplitude,
            rise_time: (i - onset) as f64 / fs,
            recovery_time: recovery.map(|j| (j - i) as f64 / fs),
            duration: (end - onset) as f64 / fs,
        });
        search_from = i;
    }
    events
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eda::decompose;
    use crate::signal::{synthesize_eda, EdaSynthParams};

    fn synth(onsets: Vec<f64>, amps: Vec<f64>) -> (Vec<f64>, Vec<usize>) {
        let p = EdaSynthParams {
            scr_onsets: onsets,
            amplitudes: amps,
            tonic_level: 4.0,
            duration: 60.0,
            sampling_rate: 32.0,
            seed: 5,
        };
        let (rec, truth) = synthesize_eda(&p).unwrap();
        (rec.samples, truth.scr_events().iter().map(|e| e.onset_index).collect())
    }

    #[test]
    fn zero_phasic_has_no_events() {
        let d = EdaDecomposition {
            tonic: vec![1.0; 100],
            phasic: vec![0.0; 100],
            sampling_rate: 4.0,
        };
        assert!(detect_scr(&d).is_empty());
    }

    #[test]
    fn one_pulse() {
        let (x, onsets) = synth(vec![15.0], vec![0.5]);
        let ev = detect_scr(&decompose(&x, 32.0));
        assert_eq!(ev.len(), 1, "{ev:?}");
        assert!((0.45..=0.55).contains(&ev[0].amplitude));
        assert!((ev[0].onset_index as f64 - onsets[0] as f64).abs() / 32.0 <= 0.5);
        assert!(ev[0].onset_index < ev[0].peak_index);
    }

    #[test]
    fn three_pulses_in_order() {
        let (x, onsets) = synth(vec![8.0, 25.0, 42.0], vec![0.3, 0.6, 0.4]);
        let ev = detect_scr(&decompose(&x, 32.0));
        assert_eq!(ev.len(), 3, "{ev:?}");
        for (e, o) in ev.iter().zip(&onsets) {
            assert!((e.onset_index as f64 - *o as f64).abs() / 32.0 <= 0.5);
        }
    }

    #[test]
    fn extra_pulse_never_removes_events() {
        let (a, _) = synth(vec![10.0, 30.0], vec![0.4, 0.4]);
        let (b, _) = synth(vec![10.0, 30.0, 48.0], vec![0.4, 0.4, 0.3]);
        assert!(detect_scr(&decompose(&b, 32.0)).len() >= detect_scr(&decompose(&a, 32.0)).len());
    }
}
