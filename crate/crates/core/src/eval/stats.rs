use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::numeric::{mean, sample_sd};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupStats {
    /// Welch t-statistic, anxious minus non-anxious.
    pub t_statistic: Option<f64>,
    /// Mean difference over the pooled SD.
    pub cohens_d: Option<f64>,
    /// Two-sided, Welch–Satterthwaite degrees of freedom.
    pub p_value: Option<f64>,
}

pub fn group_stats(anxious: &[f64], non_anxious: &[f64]) -> GroupStats {
    let none = GroupStats {
        t_statistic: None,
        cohens_d: None,
        p_value: None,
    };
    let (Some(ma), Some(mb), Some(sa), Some(sb)) = (mean(anxious), mean(non_anxious), sample_sd(anxious), sample_sd(non_anxious)) else {
        return none;
    };
    let (na, nb) = (anxious.len() as f64, non_anxious.len() as f64);
    let (va, vb) = (sa * sa, sb * sb);
    let pooled = (((na - 1.0) * va + (nb - 1.0) * vb) / (na + nb - 2.0)).sqrt();
    let cohens_d = (pooled > 0.0).then(|| (ma - mb) / pooled);
    let se2 = va / na + vb / nb;
    if se2 <= 0.0 {
        return GroupStats { cohens_d, ..none };
    }
    let t = (ma - mb) / se2.sqrt();
    let df = se2 * se2 / ((va / na).powi(2) / (na - 1.0) + (vb / nb).powi(2) / (nb - 1.0));
    let p_value = StudentsT::new(0.0, 1.0, df).ok().map(|d| 2.0 * (1.0 - d.cdf(t.abs())));
    GroupStats {
        t_statistic: Some(t),
        cohens_d,
        p_value,
    }
}
