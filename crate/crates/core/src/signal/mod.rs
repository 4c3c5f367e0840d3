//! Recordings, questionnaire responses, portable file formats and synthetic
//! signal generators with known ground truth.

mod cohort;
mod io;
mod synth;
mod types;

pub use cohort::{generate_cohort, CohortSpec, Physiology, SyntheticCohort, SyntheticSession};
pub use io::{load_paq, load_recording, save_paq, save_recording};
pub use synth::{scr_pulse_shape, synthesize_ecg, synthesize_eda, EcgSynthParams, EdaSynthParams, SCR_DECAY_S, SCR_RISE_S};
pub use types::{Channel, PaqResponses, RawRecording, SynthGroundTruth, SynthScr};
