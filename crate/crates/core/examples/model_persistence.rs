//! Save a trained model to its text format and load it back.
//!
//!     cargo run --example model_persistence

use anxbench::models::{train_arrays, ClassifierId, Hyper, TrainedModel};
use ndarray::array;

fn main() -> anxbench::Result<()> {
    let x = array![[0.1, 1.0], [0.4, 0.8], [0.3, 0.2], [2.1, 0.1], [2.5, 0.4], [1.9, 0.9]];
    let y = [false, false, false, true, true, true];
    let names = vec!["feature:F1:MeanNN".to_string(), "feature:F5:SCR_Amplitude_Mean".to_string()];
    let model = train_arrays(ClassifierId::C5, x.view(), &y, names, &Hyper::default(), 42)?;
    let path = std::env::temp_dir().join("anxbench_c5.model");
    model.save(&path)?;
    let back = TrainedModel::load(&path)?;
    println!("saved and reloaded {} from {}", back.id, path.display());
    println!("scores before {:?}", model.score_arrays(x.view()));
    println!("scores after  {:?}", back.score_arrays(x.view()));
    Ok(())
}
